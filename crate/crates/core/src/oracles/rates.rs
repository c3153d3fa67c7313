//! Hand-derived rate formulas for two special families, used to cross-check
//! the generic one-step coefficients and dimensions.

use crate::error::{Error, Result};
use crate::markov::Direction;
use crate::partitions::Partition;
use crate::rational::{int, Rational};

fn one_row_changed(alpha: &Partition, rank: usize, direction: Direction) -> Vec<(usize, Partition)> {
    let a = alpha.padded(rank);
    (0..rank)
        .filter_map(|i| {
            let mut b = a.clone();
            match direction {
                Direction::Birth => b[i] += 1,
                Direction::Death if b[i] > 0 => b[i] -= 1,
                Direction::Death => return None,
            }
            Partition::new(b).ok().map(|p| (i, p))
        })
        .collect()
}

/// Rank-two family with `θ = (n-2)/2`, `n ≥ 3`: off-diagonal rates out of
/// `(a₁, a₂)`.
pub fn rank_two_rates(n: u64, alpha: &Partition, direction: Direction) -> Result<Vec<(Partition, Rational)>> {
    if n < 3 {
        return Err(Error::OutOfRange(format!("rank-two closed form needs n >= 3, got {n}")));
    }
    if alpha.len() > 2 {
        return Err(Error::TooManyRows { len: alpha.len(), max: 2 });
    }
    let theta = Rational::new((n as i64 - 2).into(), 2.into());
    let (a1, a2) = (int(alpha.part(0) as i64), int(alpha.part(1) as i64));
    let gap = &a1 - &a2;
    let denom = &gap + &theta;
    let mut out = Vec::new();
    for (i, beta) in one_row_changed(alpha, 2, direction) {
        let rate = match (direction, i) {
            (Direction::Birth, 0) => (&a1 + int(1) + &theta) * (&gap + &theta * int(2)) / &denom,
            (Direction::Birth, _) => (&a2 + int(1)) * &gap / &denom,
            (Direction::Death, 0) => (&a1 + &theta) * &gap / &denom,
            (Direction::Death, _) => &a2 * (&gap + &theta * int(2)) / &denom,
        };
        out.push((beta, rate));
    }
    Ok(out)
}

/// `θ = 1` family of rank `m` (square matrices): off-diagonal rates out of α.
pub fn square_matrix_rates(m: usize, alpha: &Partition, direction: Direction) -> Result<Vec<(Partition, Rational)>> {
    if alpha.len() > m {
        return Err(Error::TooManyRows { len: alpha.len(), max: m });
    }
    let a: Vec<i64> = alpha.padded(m).iter().map(|&v| v as i64).collect();
    let m = m as i64;
    let mut out = Vec::new();
    for (i, beta) in one_row_changed(alpha, m as usize, direction) {
        let ii = i as i64 + 1;
        let (lead, shift) = match direction {
            Direction::Birth => (a[i] + m - ii + 1, 1),
            Direction::Death => (a[i] + m - ii, -1),
        };
        let mut rate = int(lead);
        for (j, &aj) in a.iter().enumerate() {
            if j == i {
                continue;
            }
            let d = a[i] - aj + (j as i64 + 1) - ii;
            rate *= Rational::new((d + shift).into(), d.into());
        }
        out.push((beta, rate));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::actions::{parse_action, State};
    use crate::coefficients::Coefficients;
    use crate::markov::transitions;
    use crate::partitions::enumerate;
    use crate::rational::ratio;

    fn generic(spec: &str, alpha: &Partition, dir: Direction) -> Vec<(Partition, Rational)> {
        let c = Coefficients::new(&parse_action(spec).unwrap());
        transitions(&c, dir, &State::Partition(alpha.clone()))
            .unwrap()
            .into_iter()
            .map(|(s, r)| (s.as_partition().unwrap().clone(), r))
            .collect()
    }

    fn sorted(mut v: Vec<(Partition, Rational)>) -> Vec<(Partition, Rational)> {
        v.sort();
        v
    }

    #[test]
    fn sphere_examples() {
        let r = rank_two_rates(5, &Partition::parse("1").unwrap(), Direction::Birth).unwrap();
        assert_eq!(sorted(r), sorted(vec![(Partition::parse("2").unwrap(), ratio(28, 5)), (Partition::parse("1,1").unwrap(), ratio(2, 5))]));
        assert!(rank_two_rates(2, &Partition::empty(), Direction::Birth).is_err());
    }

    #[test]
    fn closed_forms_match_generic_rates() {
        for dir in [Direction::Birth, Direction::Death] {
            for w in 0..=5 {
                for alpha in enumerate(w, 2) {
                    for n in [3u64, 4, 5, 7] {
                        let want = generic(&format!("sphere:n={n}"), &alpha, dir);
                        assert_eq!(sorted(rank_two_rates(n, &alpha, dir).unwrap()), sorted(want), "n={n} {alpha}");
                    }
                }
                for m in 1..=3usize {
                    for alpha in enumerate(w, m) {
                        let want = generic(&format!("matc:m={m}"), &alpha, dir);
                        assert_eq!(sorted(square_matrix_rates(m, &alpha, dir).unwrap()), sorted(want), "m={m} {alpha}");
                    }
                }
            }
        }
    }
}
