//! Coefficients from first principles: build `p_λ` as polynomials in the
//! variables `x_i = |z_i|²`, orthogonalize in the Fock inner product, and
//! read `[λ; α]` off the expansion of `q_λ` in the `p` basis.

use std::collections::BTreeMap;
use std::ops::{Add, Mul};

use num_traits::{One, Zero};

use crate::actions::{ActionSpec, State};
use crate::coefficients::CoeffTable;
use crate::error::{Error, Result};
use crate::partitions::distinct_permutations;
use crate::rational::{self, Rational};

/// Largest `n` the oracle accepts.
pub const MAX_FOCK_N: usize = 3;

/// `K`-invariant polynomial as a sparse map from exponent vectors `m` (the
/// monomial `Π x_i^{m_i}`) to coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InvariantPoly {
    terms: BTreeMap<Vec<u64>, Rational>,
}

impl InvariantPoly {
    pub fn zero() -> Self {
        InvariantPoly::default()
    }

    pub fn monomial(exps: Vec<u64>, c: Rational) -> Self {
        let mut p = InvariantPoly::zero();
        p.add_term(exps, c);
        p
    }

    pub fn add_term(&mut self, exps: Vec<u64>, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(exps).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u64>, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = InvariantPoly::zero();
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v * c);
        }
        out
    }

    /// Value at the origin.
    pub fn constant_term(&self) -> Rational {
        self.terms
            .iter()
            .find(|(e, _)| e.iter().all(|&k| k == 0))
            .map(|(_, v)| v.clone())
            .unwrap_or_else(Rational::zero)
    }

    /// `γ^m / m! = Σ_{|a|=m} x^a / a!` in `n` variables.
    pub fn gamma_power_over_factorial(n: usize, m: u64) -> Self {
        let mut out = InvariantPoly::zero();
        for a in compositions(m, n) {
            out.add_term(a.clone(), inv_factorial(&a));
        }
        out
    }

    /// Fock inner product, extended bilinearly from [`fock_moment`].
    pub fn inner(&self, other: &InvariantPoly) -> Rational {
        let mut total = Rational::zero();
        for (a, u) in &self.terms {
            for (b, v) in &other.terms {
                let m: Vec<u64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                total += u * v * fock_moment(&m);
            }
        }
        total
    }
}

impl Add for &InvariantPoly {
    type Output = InvariantPoly;

    fn add(self, rhs: &InvariantPoly) -> InvariantPoly {
        let mut out = self.clone();
        for (e, v) in &rhs.terms {
            out.add_term(e.clone(), v.clone());
        }
        out
    }
}

impl Mul for &InvariantPoly {
    type Output = InvariantPoly;

    fn mul(self, rhs: &InvariantPoly) -> InvariantPoly {
        let mut out = InvariantPoly::zero();
        for (a, u) in &self.terms {
            for (b, v) in &rhs.terms {
                out.add_term(a.iter().zip(b).map(|(x, y)| x + y).collect(), u * v);
            }
        }
        out
    }
}

/// `∫ Π|z_i|^{2m_i} e^{-γ} dz / π^n = Π m_i!`.
pub fn fock_moment(m: &[u64]) -> Rational {
    m.iter()
        .map(|&k| Rational::from_integer(rational::factorial(k)))
        .fold(Rational::one(), |a, b| a * b)
}

fn inv_factorial(a: &[u64]) -> Rational {
    Rational::one() / fock_moment(a)
}

/// All `a ∈ ℕ^n` with `Σ a_i = m`.
fn compositions(m: u64, n: usize) -> Vec<Vec<u64>> {
    if n == 0 {
        return if m == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=m).rev() {
        for mut rest in compositions(m - first, n - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn check_oracle_action(action: &ActionSpec) -> Result<()> {
    if !action.is_oracle_action() {
        return Err(Error::NotOracleAction {
            suite: "fock".into(),
            action: action.to_string(),
        });
    }
    if action.n() > MAX_FOCK_N {
        return Err(Error::OutOfRange(format!(
            "Fock oracle supports n <= {MAX_FOCK_N}, got {}",
            action.n()
        )));
    }
    Ok(())
}

/// `p_λ = (1/d_λ) Σ_j |v_j|²` for the orthonormal monomial bases of the
/// three oracle actions.
pub fn p_lambda(action: &ActionSpec, lambda: &State) -> Result<InvariantPoly> {
    check_oracle_action(action)?;
    action.validate(lambda)?;
    let n = action.n();
    let mut out = InvariantPoly::zero();
    match action {
        ActionSpec::FullUnitary { .. } => {
            let m = lambda.weight();
            let d = rational::binomial_q(m + n as u64 - 1, n as u64 - 1);
            for a in compositions(m, n) {
                out.add_term(a.clone(), inv_factorial(&a) / &d);
            }
        }
        ActionSpec::Torus { .. } => {
            let a = lambda.values().to_vec();
            out.add_term(a.clone(), inv_factorial(&a));
        }
        ActionSpec::SymTorus { .. } => {
            let orbit = distinct_permutations(&lambda.as_partition().expect("symtorus state").padded(n));
            let d = Rational::from_integer((orbit.len() as i64).into());
            for a in orbit {
                out.add_term(a.clone(), inv_factorial(&a) / &d);
            }
        }
        ActionSpec::Jack(_) => unreachable!("rejected above"),
    }
    Ok(out)
}

/// Orthogonal family `q_λ`, each expanded in the `p` basis.
#[derive(Clone, Debug)]
pub struct FockSystem {
    pub states: Vec<State>,
    pub p: Vec<InvariantPoly>,
    /// Row `i` holds the coordinates of `q_{states[i]}` in the `p` basis.
    pub q_in_p: Vec<Vec<Rational>>,
}

impl FockSystem {
    pub fn q_poly(&self, i: usize) -> InvariantPoly {
        let mut out = InvariantPoly::zero();
        for (c, p) in self.q_in_p[i].iter().zip(&self.p) {
            if !c.is_zero() {
                out = &out + &p.scale(c);
            }
        }
        out
    }
}

/// Gram–Schmidt on `{p_λ : |λ| ≤ max_weight}` in graded order. `within_grade`
/// permutes the states of each grade (called once per grade with the
/// canonical list) to exercise order independence.
pub fn gram_schmidt_with(
    action: &ActionSpec,
    max_weight: u64,
    cap: usize,
    within_grade: &dyn Fn(&mut Vec<State>),
) -> Result<FockSystem> {
    check_oracle_action(action)?;
    let mut states = Vec::new();
    for w in 0..=max_weight {
        let mut grade = action.states_of_weight(w);
        within_grade(&mut grade);
        states.extend(grade);
        if states.len() > cap {
            return Err(Error::ResourceCap { count: states.len(), cap });
        }
    }
    let p: Vec<InvariantPoly> = states.iter().map(|s| p_lambda(action, s)).collect::<Result<_>>()?;
    let k = states.len();
    let mut gram = vec![vec![Rational::zero(); k]; k];
    for i in 0..k {
        for j in 0..=i {
            let v = p[i].inner(&p[j]);
            gram[i][j] = v.clone();
            gram[j][i] = v;
        }
    }
    let ip = |u: &[Rational], v: &[Rational]| -> Rational {
        let mut s = Rational::zero();
        for (i, a) in u.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in v.iter().enumerate() {
                if !b.is_zero() {
                    s += a * b * &gram[i][j];
                }
            }
        }
        s
    };

    let mut q: Vec<Vec<Rational>> = Vec::with_capacity(k);
    let mut norms: Vec<Rational> = Vec::with_capacity(k);
    for i in 0..k {
        let mut v = vec![Rational::zero(); k];
        v[i] = Rational::one();
        for (qj, nj) in q.iter().zip(&norms) {
            let c = ip(&v, qj) / nj;
            if !c.is_zero() {
                for (a, b) in v.iter_mut().zip(qj) {
                    *a -= &c * b;
                }
            }
        }
        let norm = ip(&v, &v);
        if norm.is_zero() {
            return Err(Error::Degenerate(states[i].to_string()));
        }
        // q(0) is the coefficient of p_0, the constant polynomial 1.
        let at_zero = v[0].clone();
        if at_zero.is_zero() {
            return Err(Error::Degenerate(states[i].to_string()));
        }
        for a in v.iter_mut() {
            *a /= &at_zero;
        }
        norms.push(&norm / (&at_zero * &at_zero));
        q.push(v);
    }
    Ok(FockSystem { states, p, q_in_p: q })
}

/// `[λ; α] = (-1)^{|α|}` times the coefficient of `p_α` in `q_λ`, tabulated
/// in canonical order.
pub fn gram_schmidt_genbin_with(
    action: &ActionSpec,
    max_weight: u64,
    cap: usize,
    within_grade: &dyn Fn(&mut Vec<State>),
) -> Result<CoeffTable> {
    let sys = gram_schmidt_with(action, max_weight, cap, within_grade)?;
    let canonical = action.states_up_to(max_weight, cap)?;
    let pos: BTreeMap<&State, usize> = sys.states.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut entries = Vec::new();
    for (i, l) in canonical.iter().enumerate() {
        for (j, m) in canonical.iter().enumerate() {
            if m.weight() > l.weight() {
                break;
            }
            let c = &sys.q_in_p[pos[l]][pos[m]];
            let v = if m.weight() % 2 == 0 { c.clone() } else { -c };
            entries.push((i, j, v));
        }
    }
    Ok(CoeffTable::from_entries(action.clone(), max_weight, canonical, entries))
}

pub fn gram_schmidt_genbin(action: &ActionSpec, max_weight: u64, cap: usize) -> Result<CoeffTable> {
    gram_schmidt_genbin_with(action, max_weight, cap, &|_| {})
}
