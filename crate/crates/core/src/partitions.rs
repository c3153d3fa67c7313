//! Young diagrams, lattice points of ℕ^n and the moves between them.
//!
//! Everything here is ordered by weight first and then in decreasing
//! lexicographic order inside a weight class; `Ord` on [`Partition`] and
//! [`LatticePoint`] implements exactly that, so `sort()` produces the
//! canonical state ordering.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A weakly decreasing sequence of positive integers (trailing zeros are
/// stripped, so `()` is the zero partition).
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct Partition {
    parts: Vec<u64>,
}

impl Partition {
    pub fn new(mut parts: Vec<u64>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::NotAPartition(parts));
        }
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(Partition { parts })
    }

    pub fn empty() -> Self {
        Partition::default()
    }

    /// Parses a comma list such as `"2,1"`; the empty string is the zero
    /// partition.
    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches(['(', '[']).trim_end_matches([')', ']']);
        if t.trim().is_empty() {
            return Ok(Partition::empty());
        }
        let parts = t
            .split(',')
            .map(|p| p.trim().parse::<u64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::ParsePartition(s.to_string()))?;
        Partition::new(parts)
    }

    pub fn parts(&self) -> &[u64] {
        &self.parts
    }

    /// Number of nonzero parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn weight(&self) -> u64 {
        self.parts.iter().sum()
    }

    /// Part `i` (0-based), zero past the end.
    pub fn part(&self, i: usize) -> u64 {
        self.parts.get(i).copied().unwrap_or(0)
    }

    /// The parts padded with zeros to length `n`.
    pub fn padded(&self, n: usize) -> Vec<u64> {
        let mut v = self.parts.clone();
        v.resize(n.max(v.len()), 0);
        v
    }

    /// Young-diagram containment `self ⊆ other`.
    pub fn is_contained_in(&self, other: &Partition) -> bool {
        contains(self, other)
    }

    /// Comma list, `""` for the zero partition.
    pub fn to_key(&self) -> String {
        self.parts
            .iter()
            .map(|p| p.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl TryFrom<Vec<u64>> for Partition {
    type Error = Error;

    fn try_from(v: Vec<u64>) -> Result<Self> {
        Partition::new(v)
    }
}

impl From<Partition> for Vec<u64> {
    fn from(p: Partition) -> Self {
        p.parts
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_key())
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight()
            .cmp(&other.weight())
            .then_with(|| other.parts.cmp(&self.parts))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A point of ℕ^n; the length is fixed by the action.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticePoint {
    coords: Vec<u64>,
}

impl LatticePoint {
    pub fn new(coords: Vec<u64>) -> Self {
        LatticePoint { coords }
    }

    pub fn zero(n: usize) -> Self {
        LatticePoint { coords: vec![0; n] }
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn weight(&self) -> u64 {
        self.coords.iter().sum()
    }

    /// Points obtained by adding one to a single coordinate, in decreasing
    /// lexicographic order.
    pub fn covers_up(&self) -> Vec<LatticePoint> {
        (0..self.coords.len())
            .map(|i| {
                let mut c = self.coords.clone();
                c[i] += 1;
                LatticePoint::new(c)
            })
            .collect()
    }

    pub fn covers_down(&self) -> Vec<LatticePoint> {
        (0..self.coords.len())
            .rev()
            .filter(|&i| self.coords[i] > 0)
            .map(|i| {
                let mut c = self.coords.clone();
                c[i] -= 1;
                LatticePoint::new(c)
            })
            .collect()
    }

    /// Coordinatewise `self ≤ other`.
    pub fn is_below(&self, other: &LatticePoint) -> bool {
        self.coords.len() == other.coords.len()
            && self.coords.iter().zip(&other.coords).all(|(a, b)| a <= b)
    }

    pub fn to_key(&self) -> String {
        self.coords
            .iter()
            .map(|p| p.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_key())
    }
}

impl fmt::Debug for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Ord for LatticePoint {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight()
            .cmp(&other.weight())
            .then_with(|| other.coords.cmp(&self.coords))
    }
}

impl PartialOrd for LatticePoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Frequency representation: `counts[i]` is the number of parts equal to
/// `i`, with `counts[0]` the number of zero parts among `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Frequency {
    #[serde(with = "string_keys")]
    pub counts: BTreeMap<u64, usize>,
}

impl Frequency {
    pub fn count(&self, i: u64) -> usize {
        self.counts.get(&i).copied().unwrap_or(0)
    }
}

mod string_keys {
    use std::collections::BTreeMap;

    use serde::{de::Error as _, Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(m: &BTreeMap<u64, usize>, s: S) -> Result<S::Ok, S::Error> {
        let as_str: BTreeMap<String, usize> = m.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        as_str.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<u64, usize>, D::Error> {
        let raw = BTreeMap::<String, usize>::deserialize(d)?;
        raw.into_iter()
            .map(|(k, v)| k.parse::<u64>().map(|k| (k, v)).map_err(D::Error::custom))
            .collect()
    }
}

/// `mu ⊆ lambda` as Young diagrams.
pub fn contains(mu: &Partition, lambda: &Partition) -> bool {
    mu.len() <= lambda.len() && mu.parts.iter().zip(&lambda.parts).all(|(m, l)| m <= l)
}

/// Partitions obtained from `lambda` by adding one box, keeping at most
/// `max_rows` rows; decreasing lexicographic order.
pub fn covers_up(lambda: &Partition, max_rows: usize) -> Result<Vec<Partition>> {
    if lambda.len() > max_rows {
        return Err(Error::TooManyRows {
            len: lambda.len(),
            max: max_rows,
        });
    }
    let rows = (lambda.len() + 1).min(max_rows);
    let mut out = Vec::with_capacity(rows);
    for i in 0..rows {
        if i == 0 || lambda.part(i - 1) > lambda.part(i) {
            let mut parts = lambda.padded(i + 1);
            parts[i] += 1;
            out.push(Partition { parts });
        }
    }
    Ok(out)
}

/// Partitions obtained from `lambda` by removing one box; decreasing
/// lexicographic order, empty for the zero partition.
pub fn covers_down(lambda: &Partition) -> Vec<Partition> {
    (0..lambda.len())
        .rev()
        .filter(|&i| lambda.part(i) > lambda.part(i + 1))
        .map(|i| {
            let mut parts = lambda.parts.clone();
            parts[i] -= 1;
            if parts[i] == 0 {
                parts.pop();
            }
            Partition { parts }
        })
        .collect()
}

/// All partitions of `weight` with at most `max_rows` rows, in decreasing
/// lexicographic order.
pub fn enumerate(weight: u64, max_rows: usize) -> Vec<Partition> {
    fn go(rest: u64, max_part: u64, rows_left: usize, cur: &mut Vec<u64>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition { parts: cur.clone() });
            return;
        }
        if rows_left == 0 {
            return;
        }
        for p in (1..=max_part.min(rest)).rev() {
            // the remaining rows must be able to absorb what is left
            if p * rows_left as u64 >= rest {
                cur.push(p);
                go(rest - p, p, rows_left - 1, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(weight, weight, max_rows, &mut Vec::new(), &mut out);
    out
}

/// All points of ℕ^n of the given weight, decreasing lexicographic order.
pub fn enumerate_lattice(weight: u64, n: usize) -> Vec<LatticePoint> {
    fn go(rest: u64, idx: usize, cur: &mut Vec<u64>, out: &mut Vec<LatticePoint>) {
        let n = cur.len();
        if idx == n - 1 {
            cur[idx] = rest;
            out.push(LatticePoint::new(cur.clone()));
            return;
        }
        for v in (0..=rest).rev() {
            cur[idx] = v;
            go(rest - v, idx + 1, cur, out);
        }
        cur[idx] = 0;
    }
    if n == 0 {
        return if weight == 0 { vec![LatticePoint::new(vec![])] } else { vec![] };
    }
    let mut out = Vec::new();
    go(weight, 0, &mut vec![0; n], &mut out);
    out
}

/// Frequency representation of `lambda` viewed as an `n`-tuple.
pub fn frequency(lambda: &Partition, n: usize) -> Result<Frequency> {
    if lambda.len() > n {
        return Err(Error::TooManyRows {
            len: lambda.len(),
            max: n,
        });
    }
    let mut counts = BTreeMap::new();
    counts.insert(0, n - lambda.len());
    for &p in lambda.parts() {
        *counts.entry(p).or_insert(0) += 1;
    }
    Ok(Frequency { counts })
}

/// Distinct rearrangements of a multiset, in decreasing lexicographic order.
pub fn distinct_permutations(items: &[u64]) -> Vec<Vec<u64>> {
    let mut v = items.to_vec();
    v.sort_unstable_by(|a, b| b.cmp(a));
    let mut out = vec![v.clone()];
    // previous-permutation in lexicographic order
    loop {
        let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] > v[i]) else {
            break;
        };
        let j = (i..v.len()).rev().find(|&j| v[j] < v[i - 1]).unwrap();
        v.swap(i - 1, j);
        v[i..].reverse();
        out.push(v.clone());
    }
    out
}
