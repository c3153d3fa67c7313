//! Birth and death rates, truncated generators, the closed-form transition
//! semigroups and a numeric cross-check by uniformization.
//!
//! Exact entry points take `x = e^{-t}` as a rational in `(0, 1]`; float
//! entry points convert `t` to `x` and delegate.

mod poly;
mod semigroup;
mod uniformize;

use std::collections::HashMap;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::actions::{parse_action, ActionSpec, State};
use crate::coefficients::Coefficients;
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

pub use poly::UniPoly;
pub use semigroup::{
    projected_prob_1d, projected_prob_1d_f64, transition_poly, transition_prob, transition_prob_t,
    transition_row,
};
pub use uniformize::uniformized_row;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Birth,
    Death,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Birth => "birth",
            Direction::Death => "death",
        })
    }
}

impl FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "birth" | "up" | "+" => Ok(Direction::Birth),
            "death" | "down" | "-" => Ok(Direction::Death),
            other => Err(Error::Format(format!("unknown direction {other:?}"))),
        }
    }
}

fn check_rate(from: &State, to: &State, v: &Rational) -> Result<()> {
    if v.is_negative() {
        return Err(Error::NegativeCoefficient {
            lambda: from.to_string(),
            mu: to.to_string(),
            value: rational::to_pq(v),
        });
    }
    Ok(())
}

/// Birth moves out of α: every β one box above with rate
/// `(d_β / d_α) [β; α]`. The rates sum to `n + |α|`.
pub fn birth_transitions(coeffs: &Coefficients, alpha: &State) -> Result<Vec<(State, Rational)>> {
    let action = coeffs.action();
    let d_alpha = action.dim_rational(alpha)?;
    let mut out = Vec::new();
    for (beta, c) in coeffs.one_step_up(alpha)? {
        let rate = action.dim_rational(&beta)? / &d_alpha * c;
        check_rate(alpha, &beta, &rate)?;
        out.push((beta, rate));
    }
    Ok(out)
}

/// Death moves out of α: every β one box below with rate `[α; β]`. The rates
/// sum to `|α|`; the zero state has none.
pub fn death_transitions(coeffs: &Coefficients, alpha: &State) -> Result<Vec<(State, Rational)>> {
    let out = coeffs.one_step_down(alpha)?;
    for (beta, rate) in &out {
        check_rate(alpha, beta, rate)?;
    }
    Ok(out)
}

pub fn transitions(coeffs: &Coefficients, direction: Direction, alpha: &State) -> Result<Vec<(State, Rational)>> {
    match direction {
        Direction::Birth => birth_transitions(coeffs, alpha),
        Direction::Death => death_transitions(coeffs, alpha),
    }
}

/// Total jump rate out of α: `n + |α|` for births, `|α|` for deaths.
pub fn exit_rate(action: &ActionSpec, direction: Direction, alpha: &State) -> u64 {
    match direction {
        Direction::Birth => action.n() as u64 + alpha.weight(),
        Direction::Death => alpha.weight(),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorRow {
    pub diagonal: Rational,
    pub off: Vec<(usize, Rational)>,
    /// False for truncated birth rows whose outgoing rates leave the space.
    pub conservative: bool,
}

/// Sparse rate matrix over all states of weight `≤ max_weight`.
#[derive(Clone, Debug)]
pub struct Generator {
    pub action: ActionSpec,
    pub direction: Direction,
    pub max_weight: u64,
    pub states: Vec<State>,
    pub rows: Vec<GeneratorRow>,
    index: HashMap<State, usize>,
}

#[derive(Serialize, Deserialize)]
struct GeneratorEntry {
    from: usize,
    to: usize,
    #[serde(with = "rational::serde_pq")]
    rate: Rational,
}

#[derive(Serialize, Deserialize)]
struct GeneratorJson {
    action: String,
    direction: Direction,
    max_weight: u64,
    states: Vec<Vec<u64>>,
    entries: Vec<GeneratorEntry>,
}

/// Assembles the truncated generator. Birth rows on the top grade keep the
/// true diagonal `-(n + |α|)` and drop their outgoing rates.
pub fn generator(coeffs: &Coefficients, direction: Direction, max_weight: u64, cap: usize) -> Result<Generator> {
    let action = coeffs.action().clone();
    let states = action.states_up_to(max_weight, cap)?;
    let index: HashMap<State, usize> = states.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
    let mut rows = Vec::with_capacity(states.len());
    for s in &states {
        let diagonal = -rational::int(exit_rate(&action, direction, s) as i64);
        let boundary = direction == Direction::Birth && s.weight() == max_weight;
        let off = if boundary {
            Vec::new()
        } else {
            transitions(coeffs, direction, s)?
                .into_iter()
                .map(|(t, r)| (index[&t], r))
                .collect()
        };
        rows.push(GeneratorRow {
            diagonal,
            off,
            conservative: !boundary,
        });
    }
    Ok(Generator {
        action,
        direction,
        max_weight,
        states,
        rows,
        index,
    })
}

impl Generator {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn index_of(&self, s: &State) -> Option<usize> {
        self.index.get(s).copied()
    }

    /// Off-diagonal sum plus diagonal for row `i`.
    pub fn row_sum(&self, i: usize) -> Rational {
        let row = &self.rows[i];
        row.off.iter().fold(row.diagonal.clone(), |acc, (_, r)| acc + r)
    }

    pub fn entry(&self, i: usize, j: usize) -> Rational {
        let row = &self.rows[i];
        if i == j {
            return row.diagonal.clone();
        }
        row.off
            .iter()
            .find(|(k, _)| *k == j)
            .map(|(_, r)| r.clone())
            .unwrap_or_else(Rational::zero)
    }

    fn triplets(&self) -> Vec<GeneratorEntry> {
        let mut out = Vec::new();
        for (i, row) in self.rows.iter().enumerate() {
            let mut cells: Vec<(usize, Rational)> = row.off.clone();
            if !row.diagonal.is_zero() {
                cells.push((i, row.diagonal.clone()));
            }
            cells.sort_by_key(|(j, _)| *j);
            out.extend(cells.into_iter().map(|(to, rate)| GeneratorEntry { from: i, to, rate }));
        }
        out
    }

    /// `{action, direction, max_weight, states, entries:[{from,to,rate}]}`
    /// with `from`/`to` indexing `states` and rates as `"p/q"`.
    pub fn to_json(&self) -> String {
        let doc = GeneratorJson {
            action: self.action.to_string(),
            direction: self.direction,
            max_weight: self.max_weight,
            states: self.states.iter().map(|s| s.values().to_vec()).collect(),
            entries: self.triplets(),
        };
        serde_json::to_string_pretty(&doc).expect("serializable")
    }

    pub fn from_json(json: &str) -> Result<Self> {
        let doc: GeneratorJson = serde_json::from_str(json).map_err(|e| Error::Format(e.to_string()))?;
        let action = parse_action(&doc.action)?;
        let states = doc
            .states
            .into_iter()
            .map(|v| action.state_from_values(v))
            .collect::<Result<Vec<_>>>()?;
        let mut rows: Vec<GeneratorRow> = states
            .iter()
            .map(|_| GeneratorRow {
                diagonal: Rational::zero(),
                off: Vec::new(),
                conservative: true,
            })
            .collect();
        for e in doc.entries {
            if e.from >= states.len() || e.to >= states.len() {
                return Err(Error::Format(format!("entry {}->{} out of range", e.from, e.to)));
            }
            if e.from == e.to {
                rows[e.from].diagonal = e.rate;
            } else {
                rows[e.from].off.push((e.to, e.rate));
            }
        }
        for (row, s) in rows.iter_mut().zip(&states) {
            row.conservative = !(doc.direction == Direction::Birth && s.weight() == doc.max_weight);
        }
        let index = states.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        Ok(Generator {
            action,
            direction: doc.direction,
            max_weight: doc.max_weight,
            states,
            rows,
            index,
        })
    }

    /// Comma-separated `from,to,rate` triplets over state indices.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::Format(e.to_string());
        w.write_record(["from", "to", "rate"]).map_err(io)?;
        for e in self.triplets() {
            w.write_record([e.from.to_string(), e.to.to_string(), rational::to_pq(&e.rate)])
                .map_err(io)?;
        }
        w.flush().map_err(|e| Error::Format(e.to_string()))?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn setup(spec: &str) -> (ActionSpec, Coefficients) {
        let a = parse_action(spec).unwrap();
        let c = Coefficients::new(&a);
        (a, c)
    }

    fn keyed(v: Vec<(State, Rational)>) -> Vec<(String, Rational)> {
        v.into_iter().map(|(s, r)| (s.to_key(), r)).collect()
    }

    #[test]
    fn birth_examples() {
        let (a, c) = setup("un:n=3");
        assert_eq!(keyed(birth_transitions(&c, &a.parse_state("2").unwrap()).unwrap()), [("3".into(), int(5))]);

        let (a, c) = setup("torus:n=2");
        assert_eq!(
            keyed(birth_transitions(&c, &a.parse_state("1,0").unwrap()).unwrap()),
            [("2,0".into(), int(2)), ("1,1".into(), int(1))]
        );

        let (a, c) = setup("symtorus:n=3");
        assert_eq!(
            keyed(birth_transitions(&c, &a.parse_state("2,1").unwrap()).unwrap()),
            [("3,1".into(), int(3)), ("2,2".into(), int(2)), ("2,1,1".into(), int(1))]
        );

        let (a, c) = setup("sphere:n=5");
        assert_eq!(
            keyed(birth_transitions(&c, &a.parse_state("1").unwrap()).unwrap()),
            [("2".into(), ratio(28, 5)), ("1,1".into(), ratio(2, 5))]
        );
    }

    #[test]
    fn death_examples() {
        for n in [1, 4] {
            let (a, c) = setup(&format!("un:n={n}"));
            assert_eq!(keyed(death_transitions(&c, &a.parse_state("4").unwrap()).unwrap()), [("3".into(), int(4))]);
        }
        let (a, c) = setup("symtorus:n=3");
        assert_eq!(
            keyed(death_transitions(&c, &a.parse_state("2,1").unwrap()).unwrap()),
            [("2".into(), int(1)), ("1,1".into(), int(2))]
        );
        let (a, c) = setup("skewc:m=2");
        assert!(death_transitions(&c, &a.zero()).unwrap().is_empty());
    }

    #[test]
    fn symtorus_rates_follow_frequency_rule() {
        // birth to a row of length i: (i+1)·α[i]; death from a row of length i: i·α[i]
        let n = 4;
        let (a, c) = setup("symtorus:n=4");
        for w in 0..=5 {
            for s in a.states_of_weight(w) {
                let p = s.as_partition().unwrap();
                let f = crate::partitions::frequency(p, n).unwrap();
                for (t, r) in birth_transitions(&c, &s).unwrap() {
                    let tp = t.as_partition().unwrap().padded(n);
                    let row = tp.iter().zip(p.padded(n)).position(|(x, y)| *x != y).unwrap();
                    let i = p.padded(n)[row];
                    assert_eq!(r, int(((i + 1) * f.count(i) as u64) as i64));
                }
                for (t, r) in death_transitions(&c, &s).unwrap() {
                    let tp = t.as_partition().unwrap().padded(n);
                    let row = tp.iter().zip(p.padded(n)).position(|(x, y)| *x != y).unwrap();
                    let i = p.padded(n)[row];
                    assert_eq!(r, int((i * f.count(i) as u64) as i64));
                }
            }
        }
    }

    #[test]
    fn generator_examples() {
        let (_, c) = setup("un:n=1");
        let g = generator(&c, Direction::Death, 2, 1000).unwrap();
        assert_eq!(g.len(), 3);
        let diag: Vec<_> = (0..3).map(|i| g.entry(i, i)).collect();
        assert_eq!(diag, [int(0), int(-1), int(-2)]);
        assert_eq!(g.entry(2, 1), int(2));
        assert_eq!(g.entry(1, 0), int(1));
        assert_eq!(g.entry(0, 1), int(0));

        let (_, c) = setup("torus:n=2");
        let g = generator(&c, Direction::Birth, 1, 1000).unwrap();
        let keys: Vec<_> = g.states.iter().map(|s| s.to_key()).collect();
        assert_eq!(keys, ["0,0", "1,0", "0,1"]);
        assert_eq!(g.rows[0].off, vec![(1, int(1)), (2, int(1))]);
        assert!(g.rows[0].conservative && !g.rows[1].conservative);
        assert_eq!(g.entry(1, 1), int(-3));

        let (_, c) = setup("sphere:n=5");
        let g = generator(&c, Direction::Death, 3, 1000).unwrap();
        assert!((0..g.len()).all(|i| g.row_sum(i).is_zero()));
        let g = generator(&c, Direction::Birth, 3, 1000).unwrap();
        for i in 0..g.len() {
            assert_eq!(g.row_sum(i).is_zero(), g.rows[i].conservative);
        }
    }

    #[test]
    fn generator_json_round_trip_and_csv() {
        let (_, c) = setup("symc:m=2");
        let g = generator(&c, Direction::Birth, 3, 1000).unwrap();
        let back = Generator::from_json(&g.to_json()).unwrap();
        assert_eq!(back.states, g.states);
        assert_eq!(back.rows, g.rows);
        assert_eq!(back.to_json(), g.to_json());
        let mut buf = Vec::new();
        g.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("from,to,rate\n0,0,-3/1\n0,1,3/1\n"));
        assert!(Generator::from_json("{}").is_err());
    }

    #[test]
    fn direction_parsing() {
        assert_eq!("Birth".parse::<Direction>().unwrap(), Direction::Birth);
        assert_eq!("death".parse::<Direction>().unwrap(), Direction::Death);
        assert!("sideways".parse::<Direction>().is_err());
    }
}
