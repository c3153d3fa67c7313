use std::collections::BTreeMap;

use super::Generator;
use crate::actions::State;
use crate::error::{Error, Result};
use crate::rational;

/// Largest `Λ t` handled; `e^{-Λt}` underflows soon after.
const MAX_RATE_TIME: f64 = 600.0;
const MAX_TERMS: usize = 1_000_000;

/// Row α of `e^{tQ}` by uniformization: with `Λ = max |Q_ii|` and
/// `P = I + Q/Λ`, `e^{tQ} = Σ_k Pois(k; Λt) P^k`, cut once the accumulated
/// Poisson mass reaches `1 - tail_tol`.
///
/// Truncated birth rows keep their true diagonal, so mass that would leave
/// the space is lost rather than redistributed; entries for states inside
/// the space are unaffected because births never return to lower grades.
pub fn uniformized_row(generator: &Generator, alpha: &State, t: f64, tail_tol: f64) -> Result<BTreeMap<State, f64>> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::OutOfRange(format!("t must be finite and non-negative, got {t}")));
    }
    if !(tail_tol > 0.0 && tail_tol < 1.0) {
        return Err(Error::OutOfRange(format!("tail tolerance must lie in (0,1), got {tail_tol}")));
    }
    let start = generator.index_of(alpha).ok_or_else(|| Error::InvalidState {
        state: alpha.to_string(),
        action: generator.action.to_string(),
        reason: "not in the truncated state space".into(),
    })?;
    let diag: Vec<f64> = generator.rows.iter().map(|r| rational::to_f64(&r.diagonal)).collect();
    let off: Vec<Vec<(usize, f64)>> = generator
        .rows
        .iter()
        .map(|r| r.off.iter().map(|(j, v)| (*j, rational::to_f64(v))).collect())
        .collect();
    let rate = diag.iter().fold(0.0f64, |m, d| m.max(d.abs()));
    let mut result = vec![0.0; generator.len()];
    if t == 0.0 || rate == 0.0 {
        result[start] = 1.0;
        return Ok(to_map(generator, &result));
    }
    let lt = rate * t;
    if lt > MAX_RATE_TIME {
        return Err(Error::Truncation(format!(
            "uniformization rate x time = {lt:.1} exceeds {MAX_RATE_TIME}"
        )));
    }

    let mut v = vec![0.0; generator.len()];
    v[start] = 1.0;
    let mut weight = (-lt).exp();
    let mut mass = 0.0;
    let mut k = 0usize;
    loop {
        for (r, x) in result.iter_mut().zip(&v) {
            *r += weight * x;
        }
        mass += weight;
        if mass >= 1.0 - tail_tol {
            break;
        }
        k += 1;
        if k > MAX_TERMS {
            return Err(Error::Truncation(format!(
                "Poisson tail not below {tail_tol} after {MAX_TERMS} terms"
            )));
        }
        // v <- v P
        let mut next: Vec<f64> = v.iter().zip(&diag).map(|(x, d)| x * (1.0 + d / rate)).collect();
        for (i, x) in v.iter().enumerate() {
            if *x == 0.0 {
                continue;
            }
            for (j, q) in &off[i] {
                next[*j] += x * q / rate;
            }
        }
        v = next;
        weight *= lt / k as f64;
    }
    Ok(to_map(generator, &result))
}

fn to_map(generator: &Generator, values: &[f64]) -> BTreeMap<State, f64> {
    generator
        .states
        .iter()
        .zip(values)
        .filter(|(_, v)| **v != 0.0)
        .map(|(s, v)| (s.clone(), *v))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::actions::parse_action;
    use crate::coefficients::Coefficients;
    use crate::markov::{generator, transition_prob_t, Direction};

    #[test]
    fn death_chain_matches_closed_form() {
        let a = parse_action("un:n=1").unwrap();
        let c = Coefficients::new(&a);
        let g = generator(&c, Direction::Death, 5, 100).unwrap();
        let alpha = a.parse_state("3").unwrap();
        let row = uniformized_row(&g, &alpha, 0.4, 1e-12).unwrap();
        for beta in &g.states {
            let exact = transition_prob_t(&c, Direction::Death, &alpha, beta, 0.4).unwrap();
            let got = row.get(beta).copied().unwrap_or(0.0);
            assert!((exact - got).abs() < 1e-10, "{beta}: {exact} vs {got}");
        }
    }

    #[test]
    fn absorbing_zero_state() {
        let a = parse_action("symtorus:n=3").unwrap();
        let c = Coefficients::new(&a);
        let g = generator(&c, Direction::Death, 3, 100).unwrap();
        let row = uniformized_row(&g, &a.zero(), 2.5, 1e-12).unwrap();
        assert_eq!(row.len(), 1);
        assert!((row[&a.zero()] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_arguments() {
        let a = parse_action("un:n=1").unwrap();
        let c = Coefficients::new(&a);
        let g = generator(&c, Direction::Birth, 3, 100).unwrap();
        let z = a.zero();
        assert!(uniformized_row(&g, &z, -0.1, 1e-12).is_err());
        assert!(uniformized_row(&g, &z, 0.1, 0.0).is_err());
        assert!(uniformized_row(&g, &a.parse_state("9").unwrap(), 0.1, 1e-9).is_err());
        assert!(matches!(uniformized_row(&g, &z, 1e6, 1e-9), Err(Error::Truncation(_))));
    }
}
