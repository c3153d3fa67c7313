//! Jack polynomials `P_λ(·; θ)` in `r` variables from the eigenoperator
//! recursion, and binomial coefficients from the shifted expansion
//! `P_λ(1+z)/P_λ(1^r) = Σ_μ [λ; μ] P_μ(z)/P_μ(1^r)`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::partitions::{distinct_permutations, enumerate, Partition};
use crate::rational::{self, Rational};

/// Oracle size limits.
pub const MAX_JACK_RANK: usize = 3;
pub const MAX_JACK_WEIGHT: u64 = 5;

/// Symmetric polynomial in `r` variables in the monomial symmetric basis.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SymPoly {
    pub rank: usize,
    terms: BTreeMap<Partition, Rational>,
}

/// Plain polynomial in `r` variables.
type Poly = BTreeMap<Vec<u64>, Rational>;

fn add_to(p: &mut Poly, e: Vec<u64>, c: Rational) {
    if c.is_zero() {
        return;
    }
    let slot = p.entry(e.clone()).or_insert_with(Rational::zero);
    *slot += c;
    if slot.is_zero() {
        p.remove(&e);
    }
}

impl SymPoly {
    pub fn new(rank: usize) -> Self {
        SymPoly {
            rank,
            terms: BTreeMap::new(),
        }
    }

    pub fn coeff(&self, mu: &Partition) -> Rational {
        self.terms.get(mu).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> &BTreeMap<Partition, Rational> {
        &self.terms
    }

    fn add(&mut self, mu: Partition, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(mu.clone()).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&mu);
        }
    }

    /// Expansion into monomials `x^a`.
    pub fn to_poly(&self) -> BTreeMap<Vec<u64>, Rational> {
        let mut out = Poly::new();
        for (mu, c) in &self.terms {
            for a in distinct_permutations(&mu.padded(self.rank)) {
                add_to(&mut out, a, c.clone());
            }
        }
        out
    }

    /// Reads a symmetric polynomial back from its monomials.
    fn from_poly(rank: usize, p: &Poly) -> Self {
        let mut out = SymPoly::new(rank);
        for (a, c) in p {
            if a.windows(2).all(|w| w[0] >= w[1]) {
                out.add(Partition::new(a.clone()).expect("sorted"), c.clone());
            }
        }
        out
    }

    /// Value at `(1, …, 1)`.
    pub fn at_ones(&self) -> Rational {
        self.terms
            .iter()
            .map(|(mu, c)| c * Rational::from_integer((distinct_permutations(&mu.padded(self.rank)).len() as i64).into()))
            .sum()
    }
}

/// `μ ⊴ λ` in dominance order (equal weights assumed).
fn dominated(mu: &Partition, lambda: &Partition) -> bool {
    let (mut a, mut b) = (0, 0);
    for i in 0..lambda.len().max(mu.len()) {
        a += mu.part(i);
        b += lambda.part(i);
        if a > b {
            return false;
        }
    }
    true
}

/// Image of `x^a` under `D = (α/2) Σ x_i² ∂_i² + Σ_{i<j} (x_i² ∂_i - x_j² ∂_j)/(x_i - x_j)`,
/// with each pair's divided difference split evenly between `x^a` and its
/// transposition. Summed over a symmetric polynomial this is exact.
fn apply_d(a: &[u64], alpha: &Rational, out: &mut Poly, c: &Rational) {
    let diag: u64 = a.iter().map(|&k| k * k.saturating_sub(1)).sum();
    let mut self_coeff = alpha * Rational::from_integer((diag as i64).into()) / rational::int(2);
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            let (hi, lo) = (a[i].max(a[j]), a[i].min(a[j]));
            self_coeff += rational::int(hi as i64);
            let d = hi - lo;
            if d >= 2 {
                let half = rational::ratio(d as i64, 2);
                for k in 1..d {
                    let mut b = a.to_vec();
                    b[i] = hi - k;
                    b[j] = lo + k;
                    add_to(out, b, c * &half);
                }
            }
        }
    }
    add_to(out, a.to_vec(), c * self_coeff);
}

fn d_of_monomial_symmetric(mu: &Partition, rank: usize, alpha: &Rational) -> SymPoly {
    let mut out = Poly::new();
    for a in distinct_permutations(&mu.padded(rank)) {
        apply_d(&a, alpha, &mut out, &Rational::one());
    }
    SymPoly::from_poly(rank, &out)
}

fn check_inputs(lambda: &Partition, theta: &Rational, rank: usize) -> Result<()> {
    if theta <= &Rational::zero() {
        return Err(Error::OutOfRange(format!("theta must be positive, got {}", rational::to_pq(theta))));
    }
    if rank == 0 || rank > MAX_JACK_RANK {
        return Err(Error::OutOfRange(format!("Jack oracle supports 1 <= r <= {MAX_JACK_RANK}, got {rank}")));
    }
    if lambda.len() > rank {
        return Err(Error::TooManyRows { len: lambda.len(), max: rank });
    }
    if lambda.weight() > MAX_JACK_WEIGHT {
        return Err(Error::OutOfRange(format!(
            "Jack oracle supports |λ| <= {MAX_JACK_WEIGHT}, got {}",
            lambda.weight()
        )));
    }
    Ok(())
}

/// `P_λ(·; θ)`, monic in `m_λ`.
pub fn jack_polynomial(lambda: &Partition, theta: &Rational, rank: usize) -> Result<SymPoly> {
    check_inputs(lambda, theta, rank)?;
    let alpha = Rational::one() / theta;
    // Dominated partitions, most dominant first (lex order refines dominance).
    let mut below: Vec<Partition> = enumerate(lambda.weight(), rank)
        .into_iter()
        .filter(|mu| dominated(mu, lambda))
        .collect();
    below.sort_by(|a, b| b.parts().cmp(a.parts()));
    let d: BTreeMap<Partition, SymPoly> = below
        .iter()
        .map(|mu| (mu.clone(), d_of_monomial_symmetric(mu, rank, &alpha)))
        .collect();
    let eigen = |mu: &Partition| d[mu].coeff(mu);
    let e_lambda = eigen(lambda);

    let mut p = SymPoly::new(rank);
    p.add(lambda.clone(), Rational::one());
    for mu in below.iter().skip(1) {
        let gap = &e_lambda - eigen(mu);
        if gap.is_zero() {
            return Err(Error::Degenerate(format!("eigenvalue collision at {mu}")));
        }
        let mut s = Rational::zero();
        for (nu, c) in p.terms() {
            s += c * d[nu].coeff(mu);
        }
        p.add(mu.clone(), s / gap);
    }
    Ok(p)
}

/// `[λ; μ]` from the expansion of `P_λ(1+z)/P_λ(1^r)` in `P_μ(z)/P_μ(1^r)`.
/// Returns the whole row, keyed by μ.
pub fn binomial_formula_row(lambda: &Partition, theta: &Rational, rank: usize) -> Result<BTreeMap<Partition, Rational>> {
    let p = jack_polynomial(lambda, theta, rank)?;
    let norm = p.at_ones();
    assert!(!norm.is_zero(), "P_λ(1^r) vanishes for θ > 0");

    // Shift every variable by one.
    let mut shifted = Poly::new();
    for (a, c) in p.to_poly() {
        let mut acc: Poly = BTreeMap::from([(vec![0u64; rank], c)]);
        for (i, &ai) in a.iter().enumerate() {
            let mut next = Poly::new();
            for (e, v) in &acc {
                for k in 0..=ai {
                    let mut e2 = e.clone();
                    e2[i] += k;
                    add_to(&mut next, e2, v * rational::binomial_q(ai, k));
                }
            }
            acc = next;
        }
        for (e, v) in acc {
            add_to(&mut shifted, e, v);
        }
    }
    let mut rest = SymPoly::from_poly(rank, &shifted);

    // Peel off the lex-largest term of each weight against P_μ.
    let mut row = BTreeMap::new();
    while let Some(mu) = rest.terms().keys().max_by(|a, b| (a.weight(), a.parts()).cmp(&(b.weight(), b.parts()))).cloned() {
        let b = rest.coeff(&mu);
        let pm = jack_polynomial(&mu, theta, rank)?;
        for (nu, c) in pm.terms() {
            rest.add(nu.clone(), -(&b * c));
        }
        row.insert(mu, b * pm.at_ones() / &norm);
    }
    Ok(row)
}

pub fn binomial_formula_oracle(lambda: &Partition, mu: &Partition, theta: &Rational, rank: usize) -> Result<Rational> {
    if mu.len() > rank {
        return Err(Error::TooManyRows { len: mu.len(), max: rank });
    }
    Ok(binomial_formula_row(lambda, theta, rank)?
        .remove(mu)
        .unwrap_or_else(Rational::zero))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::JackEngine;
    use crate::rational::{int, ratio};

    fn part(s: &str) -> Partition {
        Partition::parse(s).unwrap()
    }

    fn poly_mul(a: &Poly, b: &Poly) -> Poly {
        let mut out = Poly::new();
        for (x, u) in a {
            for (y, v) in b {
                add_to(&mut out, x.iter().zip(y).map(|(p, q)| p + q).collect(), u * v);
            }
        }
        out
    }

    /// `Σ_σ sgn(σ) x^{σ(e)}`.
    fn alternant(e: &[u64]) -> Poly {
        let r = e.len();
        let mut perm: Vec<usize> = (0..r).collect();
        let mut out = Poly::new();
        loop {
            let inversions = (0..r).flat_map(|i| (i + 1..r).map(move |j| (i, j))).filter(|&(i, j)| perm[i] > perm[j]).count();
            let exps: Vec<u64> = perm.iter().map(|&k| e[k]).collect();
            add_to(&mut out, exps, if inversions % 2 == 0 { int(1) } else { int(-1) });
            // next permutation
            let Some(i) = (0..r.saturating_sub(1)).rev().find(|&i| perm[i] < perm[i + 1]) else {
                break;
            };
            let j = (i + 1..r).rev().find(|&j| perm[j] > perm[i]).unwrap();
            perm.swap(i, j);
            perm[i + 1..].reverse();
        }
        out
    }

    #[test]
    fn degree_one_and_two() {
        for theta in [ratio(1, 2), int(1), int(3)] {
            let p = jack_polynomial(&part("1"), &theta, 3).unwrap();
            assert_eq!(p.terms().len(), 1);
            assert_eq!(p.coeff(&part("1")), int(1));
            let p = jack_polynomial(&part("2"), &theta, 2).unwrap();
            assert_eq!(p.coeff(&part("2")), int(1));
            assert_eq!(p.coeff(&part("1,1")), int(2) * &theta / (&theta + int(1)));
        }
        let p = jack_polynomial(&part("2,1"), &int(1), 2).unwrap();
        assert_eq!(p.terms().len(), 1);
    }

    #[test]
    fn theta_one_gives_schur() {
        for r in 1..=3usize {
            let delta: Vec<u64> = (0..r as u64).rev().collect();
            let a_delta = alternant(&delta);
            for w in 0..=4 {
                for lambda in enumerate(w, r) {
                    let s = jack_polynomial(&lambda, &int(1), r).unwrap().to_poly();
                    let shifted: Vec<u64> = lambda.padded(r).iter().zip(&delta).map(|(a, b)| a + b).collect();
                    assert_eq!(poly_mul(&s, &a_delta), alternant(&shifted), "{lambda} r={r}");
                }
            }
        }
    }

    #[test]
    fn binomial_formula_examples() {
        for theta in [ratio(1, 2), int(2)] {
            assert_eq!(binomial_formula_oracle(&part("1"), &part(""), &theta, 3).unwrap(), int(1));
        }
        assert_eq!(binomial_formula_oracle(&part("2,1"), &part("1,1"), &int(1), 2).unwrap(), ratio(3, 2));
        assert_eq!(binomial_formula_oracle(&part("2,1"), &part("1"), &int(1), 2).unwrap(), int(3));
    }

    #[test]
    fn agrees_with_engine() {
        for theta in [ratio(1, 2), int(1), ratio(3, 2), int(2)] {
            for r in 1..=3 {
                let engine = JackEngine::new(theta.clone(), r);
                for w in 0..=4 {
                    for lambda in enumerate(w, r) {
                        let row = binomial_formula_row(&lambda, &theta, r).unwrap();
                        for v in 0..=w {
                            for mu in enumerate(v, r) {
                                let want = engine.genbin(&lambda, &mu).unwrap();
                                let got = row.get(&mu).cloned().unwrap_or_else(|| int(0));
                                assert_eq!(got, want, "θ={} r={r} {lambda} {mu}", rational::to_pq(&theta));
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn rejects_out_of_scope() {
        assert!(jack_polynomial(&part("1,1"), &int(1), 1).is_err());
        assert!(jack_polynomial(&part("1"), &int(0), 1).is_err());
        assert!(jack_polynomial(&part("6"), &int(1), 1).is_err());
        assert!(jack_polynomial(&part("1"), &int(1), 4).is_err());
    }
}
