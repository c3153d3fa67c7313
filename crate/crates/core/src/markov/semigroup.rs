use num_traits::{One, Zero};

use super::poly::UniPoly;
use super::Direction;
use crate::actions::State;
use crate::coefficients::Coefficients;
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

fn check_x(x: &Rational) -> Result<()> {
    if x <= &Rational::zero() || x > &Rational::one() {
        return Err(Error::OutOfRange(format!(
            "x = e^(-t) must lie in (0, 1], got {}",
            rational::to_pq(x)
        )));
    }
    Ok(())
}

/// Prefactor `c` and exponents `(a, b)` with `p_t(α, β) = c (1-x)^a x^b`,
/// or `None` when the entry vanishes identically.
fn closed_form(
    coeffs: &Coefficients,
    direction: Direction,
    alpha: &State,
    beta: &State,
) -> Result<Option<(Rational, u64, u64)>> {
    let action = coeffs.action();
    action.validate(alpha)?;
    action.validate(beta)?;
    let (wa, wb) = (alpha.weight(), beta.weight());
    let out = match direction {
        Direction::Birth => {
            if wb < wa {
                return Ok(None);
            }
            let c = coeffs.genbin(beta, alpha)?;
            if c.is_zero() {
                return Ok(None);
            }
            let ratio = action.dim_rational(beta)? / action.dim_rational(alpha)?;
            (c * ratio, wb - wa, wa + action.n() as u64)
        }
        Direction::Death => {
            if wa < wb {
                return Ok(None);
            }
            let c = coeffs.genbin(alpha, beta)?;
            if c.is_zero() {
                return Ok(None);
            }
            (c, wa - wb, wb)
        }
    };
    Ok(Some(out))
}

/// Exact transition probability from α to β at `x = e^{-t}`:
/// births `[β; α] (d_β/d_α) (1-x)^{|β|-|α|} x^{|α|+n}`,
/// deaths `[α; β] x^{|β|} (1-x)^{|α|-|β|}`.
pub fn transition_prob(
    coeffs: &Coefficients,
    direction: Direction,
    alpha: &State,
    beta: &State,
    x: &Rational,
) -> Result<Rational> {
    check_x(x)?;
    if x.is_one() {
        coeffs.action().validate(alpha)?;
        coeffs.action().validate(beta)?;
        return Ok(if alpha == beta { Rational::one() } else { Rational::zero() });
    }
    Ok(match closed_form(coeffs, direction, alpha, beta)? {
        None => Rational::zero(),
        Some((c, a, b)) => c * rational::pow(&(Rational::one() - x), a) * rational::pow(x, b),
    })
}

/// Float front end: `t ≥ 0`, evaluated in double precision from the exact
/// prefactor.
pub fn transition_prob_t(
    coeffs: &Coefficients,
    direction: Direction,
    alpha: &State,
    beta: &State,
    t: f64,
) -> Result<f64> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::OutOfRange(format!("t must be finite and non-negative, got {t}")));
    }
    if t == 0.0 {
        coeffs.action().validate(alpha)?;
        coeffs.action().validate(beta)?;
        return Ok(if alpha == beta { 1.0 } else { 0.0 });
    }
    let x = (-t).exp();
    let one_minus_x = -(-t).exp_m1();
    Ok(match closed_form(coeffs, direction, alpha, beta)? {
        None => 0.0,
        Some((c, a, b)) => rational::to_f64(&c) * one_minus_x.powi(a as i32) * x.powi(b as i32),
    })
}

/// The same entry kept symbolic in `x`.
pub fn transition_poly(coeffs: &Coefficients, direction: Direction, alpha: &State, beta: &State) -> Result<UniPoly> {
    Ok(match closed_form(coeffs, direction, alpha, beta)? {
        None => UniPoly::zero(),
        Some((c, a, b)) => &UniPoly::one_minus_x_pow(a) * &UniPoly::monomial(c, b as usize),
    })
}

/// All nonzero entries of the row of α: every β ⊆ α for deaths, every β ⊇ α
/// up to weight `max_weight` for births.
pub fn transition_row(
    coeffs: &Coefficients,
    direction: Direction,
    alpha: &State,
    max_weight: u64,
    x: &Rational,
) -> Result<Vec<(State, Rational)>> {
    let action = coeffs.action();
    let (lo, hi) = match direction {
        Direction::Birth => (alpha.weight(), max_weight),
        Direction::Death => (0, alpha.weight()),
    };
    let mut out = Vec::new();
    for w in lo..=hi {
        for beta in action.states_of_weight(w) {
            let p = transition_prob(coeffs, direction, alpha, &beta, x)?;
            if !p.is_zero() {
                out.push((beta, p));
            }
        }
    }
    Ok(out)
}

/// One-dimensional image of the chain under `λ ↦ |λ|`: the Yule process
/// with immigration `n` (births, rate `k + n`) or the linear pure death
/// process (deaths, rate `k`).
pub fn projected_prob_1d(n: u64, k: u64, l: u64, x: &Rational, direction: Direction) -> Result<Rational> {
    check_x(x)?;
    let one_minus = Rational::one() - x;
    Ok(match direction {
        Direction::Birth if l >= k => {
            rational::binomial_q(l + n - 1, k + n - 1) * rational::pow(&one_minus, l - k) * rational::pow(x, k + n)
        }
        Direction::Death if k >= l => {
            rational::binomial_q(k, l) * rational::pow(x, l) * rational::pow(&one_minus, k - l)
        }
        _ => Rational::zero(),
    })
}

pub fn projected_prob_1d_f64(n: u64, k: u64, l: u64, t: f64, direction: Direction) -> f64 {
    let x = (-t).exp();
    let one_minus = -(-t).exp_m1();
    match direction {
        Direction::Birth if l >= k => {
            rational::to_f64(&rational::binomial_q(l + n - 1, k + n - 1))
                * one_minus.powi((l - k) as i32)
                * x.powi((k + n) as i32)
        }
        Direction::Death if k >= l => {
            rational::to_f64(&rational::binomial_q(k, l)) * x.powi(l as i32) * one_minus.powi((k - l) as i32)
        }
        _ => 0.0,
    }
}
