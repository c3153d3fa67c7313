//! Generalized binomial coefficients `[λ; μ]` for every supported action.
//!
//! The full unitary, torus and symmetric-torus actions have closed forms.
//! The Jack family uses the one-step formula plus the composition recursion
//! in [`jack`].

pub mod jack;

use std::collections::HashMap;
use std::io::Write;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::actions::{ActionSpec, State};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

pub use jack::{genbin_one_step_jack, JackEngine};

/// Default bound on the number of states any table or generator may span.
pub const DEFAULT_STATE_CAP: usize = 200_000;

/// Coefficient engine bound to one action. Cheap to share between threads;
/// the Jack variant caches multi-step values internally.
#[derive(Debug)]
pub struct Coefficients {
    action: ActionSpec,
    jack: Option<JackEngine>,
}

impl Coefficients {
    pub fn new(action: &ActionSpec) -> Self {
        let jack = match action {
            ActionSpec::Jack(j) => Some(JackEngine::new(j.theta.clone(), j.rank)),
            _ => None,
        };
        Coefficients {
            action: action.clone(),
            jack,
        }
    }

    pub fn action(&self) -> &ActionSpec {
        &self.action
    }

    /// `[λ; μ]`, zero when `|μ| > |λ|` or μ is not contained in λ.
    pub fn genbin(&self, lambda: &State, mu: &State) -> Result<Rational> {
        self.action.validate(lambda)?;
        self.action.validate(mu)?;
        if mu.weight() > lambda.weight() || !self.action.contains(mu, lambda) {
            return Ok(Rational::zero());
        }
        let v = match (&self.action, lambda, mu) {
            (ActionSpec::FullUnitary { .. }, State::Partition(l), State::Partition(m)) => {
                rational::binomial_q(l.part(0), m.part(0))
            }
            (ActionSpec::Torus { .. }, State::Point(l), State::Point(m)) => Rational::from_integer(
                l.coords()
                    .iter()
                    .zip(m.coords())
                    .map(|(&a, &b)| rational::binomial(a, b))
                    .product::<BigInt>(),
            ),
            (ActionSpec::SymTorus { n }, State::Partition(l), State::Partition(m)) => {
                Rational::from_integer(symtorus_genbin(&l.padded(*n), &m.padded(*n)))
            }
            (ActionSpec::Jack(_), State::Partition(l), State::Partition(m)) => {
                self.jack.as_ref().expect("jack engine").genbin(l, m)?
            }
            _ => unreachable!("validated states"),
        };
        Ok(v)
    }

    /// All `(ν, [ν; μ])` with ν one box above μ and a nonzero coefficient.
    pub fn one_step_up(&self, mu: &State) -> Result<Vec<(State, Rational)>> {
        let mut out = Vec::new();
        for nu in self.action.up(mu) {
            let v = self.genbin(&nu, mu)?;
            if !v.is_zero() {
                out.push((nu, v));
            }
        }
        Ok(out)
    }

    /// All `(ν, [λ; ν])` with ν one box below λ and a nonzero coefficient.
    pub fn one_step_down(&self, lambda: &State) -> Result<Vec<(State, Rational)>> {
        let mut out = Vec::new();
        for nu in self.action.down(lambda) {
            let v = self.genbin(lambda, &nu)?;
            if !v.is_zero() {
                out.push((nu, v));
            }
        }
        Ok(out)
    }
}

/// Symmetric-torus closed form. Summing `Π_i C(λ_i, σ(μ)_i)` over all of
/// S_n and dividing by `Π_j μ[j]!` equals summing over the distinct
/// rearrangements of μ, which is what this does, assigning values of μ to
/// the rows of λ one row at a time.
fn symtorus_genbin(lambda: &[u64], mu: &[u64]) -> BigInt {
    fn go(lambda: &[u64], pool: &mut Vec<(u64, usize)>) -> BigInt {
        let Some((&cap, rest)) = lambda.split_first() else {
            return BigInt::one();
        };
        let mut total = BigInt::zero();
        for k in 0..pool.len() {
            let (v, c) = pool[k];
            if c == 0 || v > cap {
                continue;
            }
            pool[k].1 -= 1;
            let tail = go(rest, pool);
            pool[k].1 += 1;
            if !tail.is_zero() {
                total += rational::binomial(cap, v) * tail;
            }
        }
        total
    }
    let mut pool: Vec<(u64, usize)> = Vec::new();
    for &v in mu {
        match pool.iter_mut().find(|(x, _)| *x == v) {
            Some(e) => e.1 += 1,
            None => pool.push((v, 1)),
        }
    }
    go(lambda, &mut pool)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoeffEntry {
    pub lambda: Vec<u64>,
    pub mu: Vec<u64>,
    #[serde(with = "rational::serde_pq")]
    pub value: Rational,
}

/// Complete table of `[λ; μ]` for `|μ| ≤ |λ| ≤ max_weight`, iterated with λ
/// in canonical state order and μ in canonical order within each λ.
#[derive(Clone, Debug)]
pub struct CoeffTable {
    pub action: ActionSpec,
    pub max_weight: u64,
    pub states: Vec<State>,
    entries: Vec<(usize, usize, Rational)>,
    index: HashMap<(usize, usize), usize>,
    position: HashMap<State, usize>,
}

impl CoeffTable {
    pub(crate) fn from_entries(
        action: ActionSpec,
        max_weight: u64,
        states: Vec<State>,
        entries: Vec<(usize, usize, Rational)>,
    ) -> Self {
        let index = entries
            .iter()
            .enumerate()
            .map(|(k, (i, j, _))| ((*i, *j), k))
            .collect();
        let position = states.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        CoeffTable {
            action,
            max_weight,
            states,
            entries,
            index,
            position,
        }
    }

    /// Looks up `[λ; μ]`; pairs outside the table's range return `None`.
    pub fn get(&self, lambda: &State, mu: &State) -> Option<&Rational> {
        let i = *self.position.get(lambda)?;
        let j = *self.position.get(mu)?;
        self.index.get(&(i, j)).map(|&k| &self.entries[k].2)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&State, &State, &Rational)> {
        self.entries
            .iter()
            .map(move |(i, j, v)| (&self.states[*i], &self.states[*j], v))
    }

    pub fn to_entries(&self) -> Vec<CoeffEntry> {
        self.iter()
            .map(|(l, m, v)| CoeffEntry {
                lambda: l.values().to_vec(),
                mu: m.values().to_vec(),
                value: v.clone(),
            })
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_entries()).expect("serializable")
    }

    /// Reads a table written by [`CoeffTable::to_json`] back for `action`.
    pub fn from_json(action: &ActionSpec, json: &str) -> Result<Self> {
        let raw: Vec<CoeffEntry> =
            serde_json::from_str(json).map_err(|e| Error::Format(e.to_string()))?;
        let mut states: Vec<State> = Vec::new();
        let mut parsed = Vec::with_capacity(raw.len());
        for e in raw {
            let l = action.state_from_values(e.lambda)?;
            let m = action.state_from_values(e.mu)?;
            parsed.push((l, m, e.value));
        }
        for (l, m, _) in &parsed {
            states.push(l.clone());
            states.push(m.clone());
        }
        states.sort();
        states.dedup();
        let max_weight = states.last().map(|s| s.weight()).unwrap_or(0);
        let pos: HashMap<State, usize> = states.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        let entries = parsed
            .into_iter()
            .map(|(l, m, v)| (pos[&l], pos[&m], v))
            .collect();
        Ok(CoeffTable::from_entries(action.clone(), max_weight, states, entries))
    }

    /// Semicolon-separated `lambda;mu;value` with comma-listed indices.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().delimiter(b';').from_writer(out);
        let io = |e: csv::Error| Error::Format(e.to_string());
        w.write_record(["lambda", "mu", "value"]).map_err(io)?;
        for (l, m, v) in self.iter() {
            w.write_record([l.to_key(), m.to_key(), rational::to_pq(v)]).map_err(io)?;
        }
        w.flush().map_err(|e| Error::Format(e.to_string()))?;
        Ok(())
    }
}

/// Builds the complete coefficient table up to `max_weight`.
pub fn genbin_table(action: &ActionSpec, max_weight: u64, cap: usize) -> Result<CoeffTable> {
    let engine = Coefficients::new(action);
    genbin_table_with(&engine, max_weight, cap)
}

pub fn genbin_table_with(engine: &Coefficients, max_weight: u64, cap: usize) -> Result<CoeffTable> {
    let action = engine.action().clone();
    let states = action.states_up_to(max_weight, cap)?;
    let mut entries = Vec::new();
    for (i, l) in states.iter().enumerate() {
        for (j, m) in states.iter().enumerate() {
            if m.weight() > l.weight() {
                break;
            }
            entries.push((i, j, engine.genbin(l, m)?));
        }
    }
    Ok(CoeffTable::from_entries(action, max_weight, states, entries))
}
