//! The supported multiplicity-free actions, their index sets and the
//! dimensions `d_λ` of the irreducible pieces.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::partitions::{self, LatticePoint, Partition};
use crate::rational::{self, Rational};

/// Parameters of a Jack-type action: rank `r`, Jack parameter `θ = d/2`
/// (`d` the Peirce constant) and ambient complex dimension `n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct JackParams {
    pub rank: usize,
    pub theta: Rational,
    pub n: usize,
}

impl JackParams {
    /// Builds the parameters, deriving `n = r + θ r (r-1)` (the dimension of
    /// the underlying Jordan algebra) when it is not supplied.
    pub fn new(rank: usize, theta: Rational, n: Option<usize>) -> Result<Self> {
        if rank == 0 {
            return Err(Error::ActionParameter("rank r must be at least 1".into()));
        }
        if !theta.is_positive() {
            return Err(Error::ActionParameter(format!(
                "theta must be positive, got {}",
                rational::to_pq(&theta)
            )));
        }
        let r = rational::int(rank as i64);
        let derived = &r + &theta * &r * (&r - Rational::one());
        if !derived.is_integer() {
            return Err(Error::ActionParameter(format!(
                "r + theta*r*(r-1) = {} is not an integer dimension",
                rational::to_pq(&derived)
            )));
        }
        let derived: usize = derived
            .to_integer()
            .try_into()
            .map_err(|_| Error::ActionParameter("ambient dimension too large".into()))?;
        if let Some(n) = n {
            if n != derived {
                return Err(Error::ActionParameter(format!(
                    "n={n} does not match r + theta*r*(r-1) = {derived}"
                )));
            }
        }
        Ok(JackParams {
            rank,
            theta,
            n: derived,
        })
    }

    /// Peirce constant `d = 2θ`.
    pub fn peirce(&self) -> Rational {
        &self.theta * rational::int(2)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ActionSpec {
    /// `U(n)` on ℂ^n; Λ = ℕ as single-row partitions.
    FullUnitary { n: usize },
    /// `T(n)` on ℂ^n; Λ = ℕ^n.
    Torus { n: usize },
    /// `S_n ⋉ T(n)` on ℂ^n; Λ = partitions with at most `n` rows.
    SymTorus { n: usize },
    /// Jordan-algebra actions, Λ = partitions with at most `r` rows.
    Jack(JackParams),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ActionKind {
    FullUnitary,
    Torus,
    SymTorus,
    Jack,
}

/// An element of Λ for some action.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum State {
    Partition(Partition),
    Point(LatticePoint),
}

impl State {
    pub fn weight(&self) -> u64 {
        match self {
            State::Partition(p) => p.weight(),
            State::Point(p) => p.weight(),
        }
    }

    pub fn values(&self) -> &[u64] {
        match self {
            State::Partition(p) => p.parts(),
            State::Point(p) => p.coords(),
        }
    }

    pub fn as_partition(&self) -> Option<&Partition> {
        match self {
            State::Partition(p) => Some(p),
            State::Point(_) => None,
        }
    }

    pub fn as_point(&self) -> Option<&LatticePoint> {
        match self {
            State::Point(p) => Some(p),
            State::Partition(_) => None,
        }
    }

    /// Comma list used as a map key and on the command line.
    pub fn to_key(&self) -> String {
        match self {
            State::Partition(p) => p.to_key(),
            State::Point(p) => p.to_key(),
        }
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            State::Partition(p) => fmt::Display::fmt(p, f),
            State::Point(p) => fmt::Display::fmt(p, f),
        }
    }
}

impl fmt::Debug for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for State {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.values().serialize(s)
    }
}

impl From<Partition> for State {
    fn from(p: Partition) -> Self {
        State::Partition(p)
    }
}

impl From<LatticePoint> for State {
    fn from(p: LatticePoint) -> Self {
        State::Point(p)
    }
}

fn parse_usize(key: &str, v: &str) -> Result<usize> {
    v.trim()
        .parse::<usize>()
        .map_err(|_| Error::ActionSyntax(format!("{key} expects a non-negative integer, got {v:?}")))
}

/// Parses an action spec such as `"un:n=3"`, `"sphere:n=5"` or
/// `"jack:r=3,theta=1/2,n=6"`; presets are expanded to their Jack form.
pub fn parse_action(spec: &str) -> Result<ActionSpec> {
    let (kind, rest) = spec
        .trim()
        .split_once(':')
        .ok_or_else(|| Error::ActionSyntax(format!("missing ':' in {spec:?}")))?;
    let mut n = None;
    let mut m = None;
    let mut r = None;
    let mut theta = None;
    for kv in rest.split(',').filter(|s| !s.trim().is_empty()) {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| Error::ActionSyntax(format!("expected key=value, got {kv:?}")))?;
        match k.trim() {
            "n" => n = Some(parse_usize("n", v)?),
            "m" => m = Some(parse_usize("m", v)?),
            "r" => r = Some(parse_usize("r", v)?),
            "theta" => {
                theta = Some(
                    rational::parse_pq(v).map_err(|_| Error::ActionSyntax(format!("bad theta {v:?}")))?,
                )
            }
            other => return Err(Error::ActionSyntax(format!("unknown key {other:?}"))),
        }
    }
    let need = |name: &str, v: Option<usize>| {
        v.ok_or_else(|| Error::ActionSyntax(format!("{kind} requires {name}=...")))
    };
    let positive = |name: &str, v: usize| {
        if v == 0 {
            Err(Error::ActionParameter(format!("{name} must be at least 1")))
        } else {
            Ok(v)
        }
    };
    let unexpected = |allowed: &[&str]| -> Result<()> {
        let given = [("n", n.is_some()), ("m", m.is_some()), ("r", r.is_some()), ("theta", theta.is_some())];
        match given.iter().find(|(k, set)| *set && !allowed.contains(k)) {
            Some((k, _)) => Err(Error::ActionSyntax(format!("{kind} does not take {k}"))),
            None => Ok(()),
        }
    };
    let kind = kind.trim();
    let action = match kind {
        "un" | "torus" | "symtorus" => {
            unexpected(&["n"])?;
            let n = positive("n", need("n", n)?)?;
            match kind {
                "un" => ActionSpec::FullUnitary { n },
                "torus" => ActionSpec::Torus { n },
                _ => ActionSpec::SymTorus { n },
            }
        }
        "jack" => {
            unexpected(&["n", "r", "theta"])?;
            let theta = theta.ok_or_else(|| Error::ActionSyntax("jack requires theta=...".into()))?;
            ActionSpec::Jack(JackParams::new(need("r", r)?, theta, n)?)
        }
        "symc" | "matc" | "skewc" => {
            unexpected(&["m"])?;
            let m = positive("m", need("m", m)?)?;
            let theta = match kind {
                "symc" => rational::ratio(1, 2),
                "matc" => rational::int(1),
                _ => rational::int(2),
            };
            ActionSpec::Jack(JackParams::new(m, theta, None)?)
        }
        "sphere" => {
            unexpected(&["n"])?;
            let n = need("n", n)?;
            if n < 3 {
                return Err(Error::ActionParameter(format!(
                    "sphere requires n >= 3 (theta = (n-2)/2 must be positive), got n={n}"
                )));
            }
            ActionSpec::Jack(JackParams::new(2, rational::ratio(n as i64 - 2, 2), Some(n))?)
        }
        other => return Err(Error::ActionSyntax(format!("unknown action kind {other:?}"))),
    };
    Ok(action)
}

impl std::str::FromStr for ActionSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_action(s)
    }
}

impl fmt::Display for ActionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ActionSpec::FullUnitary { n } => write!(f, "un:n={n}"),
            ActionSpec::Torus { n } => write!(f, "torus:n={n}"),
            ActionSpec::SymTorus { n } => write!(f, "symtorus:n={n}"),
            ActionSpec::Jack(j) => write!(
                f,
                "jack:r={},theta={},n={}",
                j.rank,
                rational::to_pq(&j.theta),
                j.n
            ),
        }
    }
}

impl Serialize for ActionSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl ActionSpec {
    pub fn kind(&self) -> ActionKind {
        match self {
            ActionSpec::FullUnitary { .. } => ActionKind::FullUnitary,
            ActionSpec::Torus { .. } => ActionKind::Torus,
            ActionSpec::SymTorus { .. } => ActionKind::SymTorus,
            ActionSpec::Jack(_) => ActionKind::Jack,
        }
    }

    /// Complex dimension of the space acted on.
    pub fn n(&self) -> usize {
        match self {
            ActionSpec::FullUnitary { n } | ActionSpec::Torus { n } | ActionSpec::SymTorus { n } => *n,
            ActionSpec::Jack(j) => j.n,
        }
    }

    /// Maximum number of rows (or coordinates, for the torus) of an index.
    pub fn rows(&self) -> usize {
        match self {
            ActionSpec::FullUnitary { .. } => 1,
            ActionSpec::Torus { n } | ActionSpec::SymTorus { n } => *n,
            ActionSpec::Jack(j) => j.rank,
        }
    }

    /// True for the actions whose coefficients the Fock-space oracle can
    /// rebuild from first principles.
    pub fn is_oracle_action(&self) -> bool {
        !matches!(self, ActionSpec::Jack(_))
    }

    pub fn zero(&self) -> State {
        match self {
            ActionSpec::Torus { n } => State::Point(LatticePoint::zero(*n)),
            _ => State::Partition(Partition::empty()),
        }
    }

    /// Builds a state from raw values (parts or coordinates) and validates it.
    pub fn state_from_values(&self, values: Vec<u64>) -> Result<State> {
        let state = match self {
            ActionSpec::Torus { n } => {
                if values.len() > *n {
                    return Err(self.invalid(&format!("{values:?}"), "too many coordinates"));
                }
                let mut v = values;
                v.resize(*n, 0);
                State::Point(LatticePoint::new(v))
            }
            _ => State::Partition(Partition::new(values)?),
        };
        self.validate(&state)?;
        Ok(state)
    }

    /// Parses a comma list (`"2,1"`, empty for zero).
    pub fn parse_state(&self, s: &str) -> Result<State> {
        let t = s.trim().trim_start_matches(['(', '[']).trim_end_matches([')', ']']);
        let values = if t.trim().is_empty() {
            Vec::new()
        } else {
            t.split(',')
                .map(|p| p.trim().parse::<u64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| Error::ParsePartition(s.to_string()))?
        };
        self.state_from_values(values)
    }

    fn invalid(&self, state: &str, reason: &str) -> Error {
        Error::InvalidState {
            state: state.to_string(),
            action: self.to_string(),
            reason: reason.to_string(),
        }
    }

    pub fn validate(&self, state: &State) -> Result<()> {
        match (self, state) {
            (ActionSpec::Torus { n }, State::Point(p)) => {
                if p.dim() != *n {
                    return Err(self.invalid(&p.to_string(), "wrong number of coordinates"));
                }
                Ok(())
            }
            (ActionSpec::Torus { .. }, State::Partition(p)) => {
                Err(self.invalid(&p.to_string(), "torus states are lattice points"))
            }
            (_, State::Point(p)) => Err(self.invalid(&p.to_string(), "expected a partition")),
            (_, State::Partition(p)) => {
                if p.len() > self.rows() {
                    Err(self.invalid(
                        &p.to_string(),
                        &format!("at most {} rows allowed", self.rows()),
                    ))
                } else {
                    Ok(())
                }
            }
        }
    }

    /// All states one box above `state`, in decreasing lexicographic order.
    pub fn up(&self, state: &State) -> Vec<State> {
        match state {
            State::Point(p) => p.covers_up().into_iter().map(State::Point).collect(),
            State::Partition(p) => partitions::covers_up(p, self.rows())
                .expect("validated state")
                .into_iter()
                .map(State::Partition)
                .collect(),
        }
    }

    /// All states one box below `state`, in decreasing lexicographic order.
    pub fn down(&self, state: &State) -> Vec<State> {
        match state {
            State::Point(p) => p.covers_down().into_iter().map(State::Point).collect(),
            State::Partition(p) => partitions::covers_down(p)
                .into_iter()
                .map(State::Partition)
                .collect(),
        }
    }

    /// `mu ⊆ lambda` in the order appropriate for the action.
    pub fn contains(&self, mu: &State, lambda: &State) -> bool {
        match (mu, lambda) {
            (State::Point(a), State::Point(b)) => a.is_below(b),
            (State::Partition(a), State::Partition(b)) => partitions::contains(a, b),
            _ => false,
        }
    }

    pub fn states_of_weight(&self, weight: u64) -> Vec<State> {
        match self {
            ActionSpec::Torus { n } => partitions::enumerate_lattice(weight, *n)
                .into_iter()
                .map(State::Point)
                .collect(),
            _ => partitions::enumerate(weight, self.rows())
                .into_iter()
                .map(State::Partition)
                .collect(),
        }
    }

    /// All states of weight at most `max_weight` in canonical order, failing
    /// once more than `cap` states would be produced.
    pub fn states_up_to(&self, max_weight: u64, cap: usize) -> Result<Vec<State>> {
        let mut out = Vec::new();
        for w in 0..=max_weight {
            out.extend(self.states_of_weight(w));
            if out.len() > cap {
                return Err(Error::ResourceCap {
                    count: out.len(),
                    cap,
                });
            }
        }
        Ok(out)
    }

    /// `d_λ` as an exact rational. For the Jack family this is the product
    /// formula rewritten with rising factorials, integral at the
    /// Jordan-algebra parameters.
    pub fn dim_rational(&self, state: &State) -> Result<Rational> {
        self.validate(state)?;
        let v = match (self, state) {
            (ActionSpec::FullUnitary { n }, State::Partition(p)) => {
                rational::binomial_q(p.part(0) + *n as u64 - 1, *n as u64 - 1)
            }
            (ActionSpec::Torus { .. }, _) => Rational::one(),
            (ActionSpec::SymTorus { n }, State::Partition(p)) => {
                let freq = partitions::frequency(p, *n)?;
                let denom = freq
                    .counts
                    .values()
                    .fold(BigInt::one(), |acc, &c| acc * rational::factorial(c as u64));
                Rational::new(rational::factorial(*n as u64), denom)
            }
            (ActionSpec::Jack(j), State::Partition(p)) => jordan_dimension(j, p),
            _ => unreachable!("validated state"),
        };
        Ok(v)
    }

    /// `d_λ` as an integer; a non-integral value is reported as an error.
    pub fn dim_irrep(&self, state: &State) -> Result<BigInt> {
        let d = self.dim_rational(state)?;
        if !d.is_integer() || d.is_zero() {
            return Err(Error::NonIntegralDimension {
                lambda: state.to_string(),
                value: rational::to_pq(&d),
            });
        }
        Ok(d.to_integer())
    }
}

/// Jack-family dimension as a product over pairs of rows. For a row gap
/// `L = λ_p - λ_q` at distance `k = q - p` each factor of the product is
/// `(L + θk)/(θk) · (θ(k+1))_L / (θ(k-1)+1)_L` with `(x)_L` the rising
/// factorial, so no Gamma value is evaluated on its own.
fn jordan_dimension(j: &JackParams, lambda: &Partition) -> Rational {
    let parts = lambda.padded(j.rank);
    let theta = &j.theta;
    let mut acc = Rational::one();
    for p in 0..j.rank {
        for q in p + 1..j.rank {
            let gap = parts[p] - parts[q];
            if gap == 0 {
                continue;
            }
            let k = rational::int((q - p) as i64);
            let tk = theta * &k;
            let l = rational::int(gap as i64);
            acc *= (&l + &tk) / &tk;
            acc *= rational::rising(&(theta * (&k + Rational::one())), gap);
            acc /= rational::rising(&(theta * (&k - Rational::one()) + Rational::one()), gap);
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(parts: &[u64]) -> State {
        State::Partition(Partition::new(parts.to_vec()).unwrap())
    }

    #[test]
    fn parses_plain_kinds() {
        assert_eq!(parse_action("un:n=3").unwrap(), ActionSpec::FullUnitary { n: 3 });
        assert_eq!(parse_action("torus:n=2").unwrap(), ActionSpec::Torus { n: 2 });
        assert_eq!(parse_action("symtorus:n=4").unwrap(), ActionSpec::SymTorus { n: 4 });
    }

    #[test]
    fn presets_match_the_jordan_table() {
        let cases = [
            ("symc:m=2", 2, rational::ratio(1, 2), 3),
            ("matc:m=2", 2, rational::int(1), 4),
            ("skewc:m=2", 2, rational::int(2), 6),
            ("symc:m=3", 3, rational::ratio(1, 2), 6),
            ("matc:m=3", 3, rational::int(1), 9),
            ("skewc:m=3", 3, rational::int(2), 15),
            ("sphere:n=5", 2, rational::ratio(3, 2), 5),
            ("sphere:n=3", 2, rational::ratio(1, 2), 3),
        ];
        for (spec, r, theta, n) in cases {
            let ActionSpec::Jack(j) = parse_action(spec).unwrap() else {
                panic!("{spec} should be a Jack action")
            };
            assert_eq!((j.rank, &j.theta, j.n), (r, &theta, n), "{spec}");
            assert_eq!(j.peirce(), &theta * rational::int(2));
        }
    }

    #[test]
    fn jack_grammar_with_explicit_n() {
        let a = parse_action("jack:r=3,theta=1/2,n=6").unwrap();
        assert_eq!(a, parse_action("symc:m=3").unwrap());
        assert_eq!(a.to_string(), "jack:r=3,theta=1/2,n=6");
        assert!(matches!(
            parse_action("jack:r=3,theta=1/2,n=7"),
            Err(Error::ActionParameter(_))
        ));
        assert!(matches!(parse_action("jack:r=2,theta=0"), Err(Error::ActionParameter(_))));
        assert!(matches!(parse_action("jack:r=2,theta=-1/2"), Err(Error::ActionParameter(_))));
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(matches!(parse_action("sphere:n=2"), Err(Error::ActionParameter(_))));
        assert!(matches!(parse_action("un"), Err(Error::ActionSyntax(_))));
        assert!(matches!(parse_action("foo:n=1"), Err(Error::ActionSyntax(_))));
        assert!(matches!(parse_action("un:n=x"), Err(Error::ActionSyntax(_))));
        assert!(matches!(parse_action("un:m=2"), Err(Error::ActionSyntax(_))));
        assert!(matches!(parse_action("un:n=0"), Err(Error::ActionParameter(_))));
    }

    #[test]
    fn dimension_examples() {
        let un = parse_action("un:n=3").unwrap();
        assert_eq!(un.dim_irrep(&part(&[2])).unwrap(), BigInt::from(6));
        let st = parse_action("symtorus:n=3").unwrap();
        assert_eq!(st.dim_irrep(&part(&[2, 1])).unwrap(), BigInt::from(6));
        let matc = parse_action("matc:m=2").unwrap();
        assert_eq!(matc.dim_irrep(&part(&[1])).unwrap(), BigInt::from(4));
        for spec in ["un:n=4", "torus:n=3", "symtorus:n=2", "symc:m=3", "sphere:n=7"] {
            let a = parse_action(spec).unwrap();
            assert_eq!(a.dim_irrep(&a.zero()).unwrap(), BigInt::one(), "{spec}");
        }
    }

    #[test]
    fn invalid_states_are_rejected() {
        let sphere = parse_action("sphere:n=5").unwrap();
        assert!(matches!(
            sphere.dim_irrep(&part(&[1, 1, 1])),
            Err(Error::InvalidState { .. })
        ));
        let torus = parse_action("torus:n=2").unwrap();
        assert!(torus.validate(&part(&[1])).is_err());
        assert!(torus.parse_state("1,2,3").is_err());
        assert_eq!(torus.parse_state("0,1").unwrap().to_key(), "0,1");
        assert_eq!(torus.parse_state("").unwrap(), torus.zero());
    }

    #[test]
    fn non_integral_dimension_is_an_error() {
        // r=3, theta=1/6 gives n = 4 but fractional d_λ further up
        let a = parse_action("jack:r=3,theta=1/6").unwrap();
        assert_eq!(a.n(), 4);
        let bad = (1..=4)
            .flat_map(|w| a.states_of_weight(w))
            .find(|s| !a.dim_rational(s).unwrap().is_integer());
        let s = bad.expect("some fractional dimension");
        assert!(matches!(a.dim_irrep(&s), Err(Error::NonIntegralDimension { .. })));
    }

    #[test]
    fn degree_one_dimension_is_n() {
        for spec in ["un:n=5", "torus:n=3", "symtorus:n=4", "symc:m=3", "matc:m=3", "skewc:m=3", "sphere:n=9"] {
            let a = parse_action(spec).unwrap();
            let total: Rational = a
                .states_of_weight(1)
                .iter()
                .map(|s| a.dim_rational(s).unwrap())
                .sum();
            assert_eq!(total, rational::int(a.n() as i64), "{spec}");
            if !matches!(a, ActionSpec::Torus { .. }) {
                assert_eq!(a.dim_irrep(&part(&[1])).unwrap(), BigInt::from(a.n()), "{spec}");
            }
        }
    }

    /// Weyl dimension of the GL_m irreducible with highest weight λ through
    /// the hook-content formula Π (m + c(□)) / h(□).
    fn hook_content(lambda: &[u64], m: i64) -> Rational {
        let conj = |j: usize| lambda.iter().filter(|&&p| p as usize > j).count();
        let mut acc = Rational::one();
        for (i, &row) in lambda.iter().enumerate() {
            for j in 0..row as usize {
                let content = j as i64 - i as i64;
                let hook = (row as usize - j - 1) + (conj(j) - i - 1) + 1;
                acc *= rational::ratio(m + content, hook as i64);
            }
        }
        acc
    }

    #[test]
    fn matc_dimension_is_square_of_weyl_dimension() {
        for m in 1..=3usize {
            let a = parse_action(&format!("matc:m={m}")).unwrap();
            for w in 0..=4 {
                for s in a.states_of_weight(w) {
                    let weyl = hook_content(s.values(), m as i64);
                    assert_eq!(a.dim_rational(&s).unwrap(), &weyl * &weyl, "m={m} {s}");
                }
            }
        }
    }
}
