//! Jack-family coefficients: the closed one-step formula and the composition
//! recursion that determines every multi-step value from one-step values.

use std::collections::HashMap;
use std::sync::RwLock;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::partitions::{self, Partition};
use crate::rational::{self, Rational};

/// One-step coefficient `[λ; λ - e_i]` (rows numbered from 1):
///
/// `(λ_i + θ(r-i)) · Π_{j≠i} (λ_i - λ_j + θ(j-i-1)) / (λ_i - λ_j + θ(j-i))`.
///
/// The denominators never vanish for a partition and θ > 0: for `j > i` both
/// terms are non-negative with the θ term positive, for `j < i` both are
/// non-positive with the θ term negative.
pub fn genbin_one_step_jack(theta: &Rational, r: usize, lambda: &Partition, i: usize) -> Result<Rational> {
    if i == 0 || i > r {
        return Err(Error::RowIndex { index: i, rank: r });
    }
    if lambda.len() > r {
        return Err(Error::TooManyRows {
            len: lambda.len(),
            max: r,
        });
    }
    if !theta.is_positive() {
        return Err(Error::ActionParameter("theta must be positive".into()));
    }
    let parts = lambda.padded(r);
    let li = parts[i - 1];
    if li == 0 || (i < r && li - 1 < parts[i]) {
        return Err(Error::NotRemovable {
            lambda: lambda.to_string(),
            row: i,
        });
    }
    let li = rational::int(li as i64);
    let mut acc = &li + theta * rational::int((r - i) as i64);
    for (j0, &lj) in parts.iter().enumerate() {
        let j = j0 + 1;
        if j == i {
            continue;
        }
        let diff = &li - rational::int(lj as i64);
        let num = &diff + theta * rational::int(j as i64 - i as i64 - 1);
        let den = &diff + theta * rational::int(j as i64 - i as i64);
        debug_assert!(!den.is_zero());
        acc *= num / den;
    }
    Ok(acc)
}

/// Memoizing engine for `[λ; μ]` with Jack parameter θ and rank r.
///
/// Multi-step values come from the composition identity taken at the level
/// just below λ:
/// `[λ; μ] = 1/(|λ|-|μ|) Σ_{ν = λ - box, μ ⊆ ν} [λ; ν] [ν; μ]`.
#[derive(Debug)]
pub struct JackEngine {
    theta: Rational,
    rank: usize,
    cache: RwLock<HashMap<(Partition, Partition), Rational>>,
}

impl JackEngine {
    pub fn new(theta: Rational, rank: usize) -> Self {
        JackEngine {
            theta,
            rank,
            cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn theta(&self) -> &Rational {
        &self.theta
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// One-step value for a covering pair `mu ⋖ lambda`.
    pub fn one_step(&self, lambda: &Partition, mu: &Partition) -> Result<Rational> {
        let lp = lambda.padded(self.rank);
        let mp = mu.padded(self.rank);
        let row = lp
            .iter()
            .zip(&mp)
            .position(|(a, b)| a != b)
            .ok_or_else(|| Error::NotRemovable {
                lambda: lambda.to_string(),
                row: 0,
            })?;
        let v = genbin_one_step_jack(&self.theta, self.rank, lambda, row + 1)?;
        if v.is_negative() {
            return Err(Error::NegativeCoefficient {
                lambda: lambda.to_string(),
                mu: mu.to_string(),
                value: rational::to_pq(&v),
            });
        }
        Ok(v)
    }

    pub fn genbin(&self, lambda: &Partition, mu: &Partition) -> Result<Rational> {
        for p in [lambda, mu] {
            if p.len() > self.rank {
                return Err(Error::TooManyRows {
                    len: p.len(),
                    max: self.rank,
                });
            }
        }
        let (wl, wm) = (lambda.weight(), mu.weight());
        if wm > wl || !partitions::contains(mu, lambda) {
            return Ok(Rational::zero());
        }
        if wm == wl {
            return Ok(Rational::one());
        }
        if wl == wm + 1 {
            return self.one_step(lambda, mu);
        }
        let key = (lambda.clone(), mu.clone());
        if let Some(v) = self.cache.read().expect("cache lock").get(&key) {
            return Ok(v.clone());
        }
        let mut sum = Rational::zero();
        for nu in partitions::covers_down(lambda) {
            if !partitions::contains(mu, &nu) {
                continue;
            }
            sum += self.one_step(lambda, &nu)? * self.genbin(&nu, mu)?;
        }
        let value = sum / rational::int((wl - wm) as i64);
        // a racing writer computed the same value; keep whichever landed first
        self.cache
            .write()
            .expect("cache lock")
            .entry(key)
            .or_insert_with(|| value.clone());
        Ok(value)
    }

    pub fn cached_entries(&self) -> usize {
        self.cache.read().expect("cache lock").len()
    }
}
