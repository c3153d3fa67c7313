//! Jump-chain sampling of the birth and death chains and Monte Carlo
//! comparison against the exact semigroup.
//!
//! Each path draws from its own ChaCha8 stream seeded by a SplitMix64 hash
//! of `(seed, path_index)`, so a batch is the same whatever the thread count
//! or completion order.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::actions::{ActionSpec, State};
use crate::coefficients::Coefficients;
use crate::error::{Error, Result};
use crate::markov::{self, projected_prob_1d_f64, transition_prob_t, Direction};
use crate::rational::{self, Rational};

/// Circuit breaker on the number of jumps in a single path.
pub const MAX_JUMPS: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Event {
    pub t: f64,
    pub state: State,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Trajectory {
    pub seed: u64,
    pub start: State,
    pub horizon: f64,
    pub events: Vec<Event>,
}

impl Trajectory {
    /// State occupied at time `t` (right-continuous).
    pub fn state_at(&self, t: f64) -> &State {
        let k = self.events.partition_point(|e| e.t <= t);
        if k == 0 {
            &self.start
        } else {
            &self.events[k - 1].state
        }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }

    /// Parses one JSON line back, interpreting states for `action`.
    pub fn from_json_line(action: &ActionSpec, line: &str) -> Result<Self> {
        RawTrajectory::from_json_line(line)?.resolve(action)
    }
}

/// Trajectory with states as plain integer arrays, readable without knowing
/// the action.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RawTrajectory {
    pub seed: u64,
    pub start: Vec<u64>,
    pub horizon: f64,
    pub events: Vec<RawEvent>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RawEvent {
    pub t: f64,
    pub state: Vec<u64>,
}

impl RawTrajectory {
    pub fn from_json_line(line: &str) -> Result<Self> {
        serde_json::from_str(line).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn resolve(self, action: &ActionSpec) -> Result<Trajectory> {
        let events = self
            .events
            .into_iter()
            .map(|e| {
                Ok(Event {
                    t: e.t,
                    state: action.state_from_values(e.state)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Trajectory {
            seed: self.seed,
            start: action.state_from_values(self.start)?,
            horizon: self.horizon,
            events,
        })
    }
}

/// SplitMix64 finalizer applied to `seed + (index + 1)·γ`.
pub fn path_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

type JumpTable = Arc<Vec<(State, f64)>>;

/// Per-state jump distributions, computed exactly once and then shared.
#[derive(Debug)]
pub struct Sampler {
    coeffs: Arc<Coefficients>,
    direction: Direction,
    table: RwLock<HashMap<State, JumpTable>>,
}

impl Sampler {
    pub fn new(coeffs: Arc<Coefficients>, direction: Direction) -> Self {
        Sampler {
            coeffs,
            direction,
            table: RwLock::new(HashMap::new()),
        }
    }

    pub fn action(&self) -> &ActionSpec {
        self.coeffs.action()
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    /// Targets with cumulative jump probabilities (exact partial sums over
    /// the exit rate, converted to double once).
    fn jumps(&self, s: &State) -> Result<JumpTable> {
        if let Some(t) = self.table.read().expect("sampler lock").get(s) {
            return Ok(t.clone());
        }
        let moves = markov::transitions(&self.coeffs, self.direction, s)?;
        let total: Rational = moves.iter().map(|(_, r)| r.clone()).sum();
        let mut acc = Rational::zero();
        let mut cum = Vec::with_capacity(moves.len());
        for (target, rate) in moves {
            acc += rate;
            cum.push((target, rational::to_f64(&(&acc / &total))));
        }
        let cum = Arc::new(cum);
        self.table
            .write()
            .expect("sampler lock")
            .entry(s.clone())
            .or_insert_with(|| cum.clone());
        Ok(cum)
    }

    /// One path on `[0, t_max]`, a deterministic function of its arguments.
    pub fn sample_path(&self, start: &State, t_max: f64, seed: u64) -> Result<Trajectory> {
        if !t_max.is_finite() || t_max <= 0.0 {
            return Err(Error::OutOfRange(format!("t_max must be finite and positive, got {t_max}")));
        }
        let action = self.action();
        action.validate(start)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut state = start.clone();
        let mut t = 0.0f64;
        let mut events = Vec::new();
        loop {
            let rate = markov::exit_rate(action, self.direction, &state);
            if rate == 0 {
                break;
            }
            let u: f64 = rng.gen();
            t += -(-u).ln_1p() / rate as f64;
            if t > t_max {
                break;
            }
            let jumps = self.jumps(&state)?;
            let v: f64 = rng.gen();
            let next = jumps
                .iter()
                .find(|(_, c)| v < *c)
                .or_else(|| jumps.last())
                .map(|(s, _)| s.clone())
                .expect("a state with positive exit rate has a target");
            events.push(Event { t, state: next.clone() });
            if events.len() >= MAX_JUMPS {
                return Err(Error::JumpLimit(MAX_JUMPS));
            }
            state = next;
        }
        Ok(Trajectory {
            seed,
            start: start.clone(),
            horizon: t_max,
            events,
        })
    }

    /// `paths` independent paths, path `i` seeded with `path_seed(seed, i)`.
    /// Runs on the current rayon pool; output is ordered by path index.
    pub fn sample_batch(&self, start: &State, t_max: f64, seed: u64, paths: usize) -> Result<Vec<Trajectory>> {
        (0..paths as u64)
            .into_par_iter()
            .map(|i| self.sample_path(start, t_max, path_seed(seed, i)))
            .collect()
    }
}

/// Convenience wrapper building a fresh sampler for one path.
pub fn sample_path(
    action: &ActionSpec,
    direction: Direction,
    start: &State,
    t_max: f64,
    seed: u64,
) -> Result<Trajectory> {
    Sampler::new(Arc::new(Coefficients::new(action)), direction).sample_path(start, t_max, seed)
}

/// Relative frequency of the state occupied at time `t`.
pub fn empirical_marginal(trajectories: &[Trajectory], t: f64) -> Result<BTreeMap<State, f64>> {
    if trajectories.is_empty() {
        return Err(Error::Empty("no trajectories".into()));
    }
    if !(t >= 0.0) {
        return Err(Error::OutOfRange(format!("t must be non-negative, got {t}")));
    }
    if let Some(tr) = trajectories.iter().find(|tr| t > tr.horizon) {
        return Err(Error::OutOfRange(format!("t = {t} exceeds a horizon of {}", tr.horizon)));
    }
    let mut counts: BTreeMap<State, usize> = BTreeMap::new();
    for tr in trajectories {
        *counts.entry(tr.state_at(t).clone()).or_insert(0) += 1;
    }
    let n = trajectories.len() as f64;
    Ok(counts.into_iter().map(|(s, c)| (s, c as f64 / n)).collect())
}

/// Half the L¹ distance over the union of supports.
pub fn tv_distance<K: Ord + Clone>(p: &BTreeMap<K, f64>, q: &BTreeMap<K, f64>) -> f64 {
    let mut total = 0.0;
    for (k, a) in p {
        total += (a - q.get(k).copied().unwrap_or(0.0)).abs();
    }
    for (k, b) in q {
        if !p.contains_key(k) {
            total += b.abs();
        }
    }
    total / 2.0
}

/// Exact row of the semigroup at time `t` in double precision. Birth rows
/// are cut at the first grade where the remaining mass of the projected
/// one-dimensional chain is below `tail_tol`.
pub fn exact_row(
    coeffs: &Coefficients,
    direction: Direction,
    alpha: &State,
    t: f64,
    tail_tol: f64,
) -> Result<BTreeMap<State, f64>> {
    let action = coeffs.action();
    let (lo, hi) = match direction {
        Direction::Death => (0, alpha.weight()),
        Direction::Birth => {
            let n = action.n() as u64;
            let k = alpha.weight();
            let mut l = k;
            let mut mass = 0.0;
            loop {
                mass += projected_prob_1d_f64(n, k, l, t, Direction::Birth);
                if 1.0 - mass < tail_tol || l > k + 10_000 {
                    break;
                }
                l += 1;
            }
            (k, l)
        }
    };
    let mut out = BTreeMap::new();
    for w in lo..=hi {
        for beta in action.states_of_weight(w) {
            let p = transition_prob_t(coeffs, direction, alpha, &beta, t)?;
            if p != 0.0 {
                out.insert(beta, p);
            }
        }
    }
    Ok(out)
}

/// Pushes a map forward along `λ ↦ |λ|`.
pub fn weight_marginal(m: &BTreeMap<State, f64>) -> BTreeMap<u64, f64> {
    let mut out = BTreeMap::new();
    for (s, p) in m {
        *out.entry(s.weight()).or_insert(0.0) += p;
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub t: f64,
    pub marginal: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tv_vs_exact: Option<f64>,
}

impl Summary {
    pub fn new(marginal: &BTreeMap<State, f64>, t: f64, tv_vs_exact: Option<f64>) -> Self {
        Summary {
            t,
            marginal: marginal.iter().map(|(s, p)| (s.to_key(), *p)).collect(),
            tv_vs_exact,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::actions::parse_action;

    fn sampler(spec: &str, dir: Direction) -> Sampler {
        Sampler::new(Arc::new(Coefficients::new(&parse_action(spec).unwrap())), dir)
    }

    #[test]
    fn death_from_zero_has_no_events() {
        let s = sampler("sphere:n=5", Direction::Death);
        let tr = s.sample_path(&s.action().zero(), 3.0, 1).unwrap();
        assert!(tr.events.is_empty());
    }

    #[test]
    fn death_paths_remove_at_most_weight_boxes() {
        let s = sampler("symtorus:n=3", Direction::Death);
        let start = s.action().parse_state("3,2,1").unwrap();
        for seed in 0..200 {
            let tr = s.sample_path(&start, 50.0, seed).unwrap();
            assert!(tr.events.len() <= 6);
            if tr.events.len() == 6 {
                assert_eq!(tr.events.last().unwrap().state, s.action().zero());
            }
        }
    }

    #[test]
    fn same_seed_same_path() {
        let s = sampler("un:n=3", Direction::Birth);
        let z = s.action().zero();
        let a = s.sample_path(&z, 10.0, 99).unwrap();
        let b = s.sample_path(&z, 10.0, 99).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, s.sample_path(&z, 10.0, 100).unwrap());
        let fresh = sample_path(s.action(), Direction::Birth, &z, 10.0, 99).unwrap();
        assert_eq!(fresh.to_json_line(), a.to_json_line());
    }

    #[test]
    fn paths_move_one_box_at_a_time_in_order() {
        for (spec, dir, start) in [
            ("torus:n=2", Direction::Birth, "1,0"),
            ("matc:m=2", Direction::Birth, ""),
            ("skewc:m=3", Direction::Death, "3,2,2"),
        ] {
            let s = sampler(spec, dir);
            let start = s.action().parse_state(start).unwrap();
            let tr = s.sample_path(&start, 1.5, 5).unwrap();
            let mut prev = &tr.start;
            let mut last_t = 0.0;
            for e in &tr.events {
                assert!(e.t > last_t && e.t <= tr.horizon);
                let (a, b) = match dir {
                    Direction::Birth => (prev, &e.state),
                    Direction::Death => (&e.state, prev),
                };
                assert_eq!(a.weight() + 1, b.weight());
                assert!(s.action().contains(a, b));
                prev = &e.state;
                last_t = e.t;
            }
        }
    }

    #[test]
    fn bad_horizon_and_state() {
        let s = sampler("un:n=1", Direction::Birth);
        let z = s.action().zero();
        assert!(s.sample_path(&z, 0.0, 1).is_err());
        assert!(s.sample_path(&z, f64::INFINITY, 1).is_err());
        let bad = State::Partition(crate::partitions::Partition::new(vec![1, 1]).unwrap());
        assert!(s.sample_path(&bad, 1.0, 1).is_err());
    }

    #[test]
    fn marginal_edge_cases() {
        let s = sampler("un:n=2", Direction::Birth);
        let z = s.action().zero();
        let tr = s.sample_path(&z, 5.0, 3).unwrap();
        let first = tr.events[0].t;
        let m = empirical_marginal(std::slice::from_ref(&tr), first / 2.0).unwrap();
        assert_eq!(m, BTreeMap::from([(z.clone(), 1.0)]));
        let two = [tr.clone(), tr.clone()];
        assert_eq!(
            empirical_marginal(&two, 2.0).unwrap(),
            empirical_marginal(std::slice::from_ref(&tr), 2.0).unwrap()
        );
        assert!(matches!(empirical_marginal(&[], 1.0), Err(Error::Empty(_))));
        assert!(matches!(empirical_marginal(&two, 6.0), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn tv_examples() {
        let p = BTreeMap::from([("a", 0.6), ("b", 0.4)]);
        let q = BTreeMap::from([("a", 0.5), ("b", 0.5)]);
        assert!((tv_distance(&p, &q) - 0.1).abs() < 1e-15);
        assert_eq!(tv_distance(&p, &p), 0.0);
        let u = BTreeMap::from([("a", 1.0)]);
        let v = BTreeMap::from([("b", 1.0)]);
        assert_eq!(tv_distance(&u, &v), 1.0);
    }

    #[test]
    fn jsonl_round_trip() {
        let s = sampler("torus:n=3", Direction::Birth);
        let tr = s.sample_path(&s.action().zero(), 1.0, 11).unwrap();
        let line = tr.to_json_line();
        assert!(line.starts_with(r#"{"seed":11,"start":[0,0,0],"horizon":1.0,"events":["#));
        assert_eq!(Trajectory::from_json_line(s.action(), &line).unwrap(), tr);
    }

    #[test]
    fn batch_is_thread_count_independent() {
        let s = sampler("sphere:n=5", Direction::Birth);
        let z = s.action().zero();
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| s.sample_batch(&z, 0.5, 7, 500).unwrap())
        };
        let one = run(1);
        assert_eq!(one, run(4));
        assert_eq!(one[3], s.sample_path(&z, 0.5, path_seed(7, 3)).unwrap());
    }
}
