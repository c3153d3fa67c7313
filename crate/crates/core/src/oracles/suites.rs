//! Identity suites: each checks one exact identity over every instance up to
//! a weight bound and reports both sides of every instance.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::fock::{self, InvariantPoly, MAX_FOCK_N};
use super::jack_poly::{self, MAX_JACK_RANK, MAX_JACK_WEIGHT};
use super::rates;
use crate::actions::{ActionSpec, State};
use crate::coefficients::{genbin_table, Coefficients, DEFAULT_STATE_CAP};
use crate::error::{Error, Result};
use crate::markov::{self, UniPoly, projected_prob_1d, transition_poly, transition_prob, Direction};
use crate::rational::{self, int, ratio, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    /// `Σ_{|λ|=l} [β;λ][λ;α] = multinomial · [β;α]`
    Composition,
    /// Up-rates sum to `n + |β|`, down-rates to `|β|`.
    RateSums,
    /// `Σ_{|β|=m} [α;β] = C(|α|, m)`
    RowSums,
    /// `Σ_{|α|=k} d_α [α;β] = d_β C(k+n-1, k-|β|)`
    DimensionSums,
    /// Dilation `q_α(√c z)` expanded in `q_β(z)`, as polynomials in `c`.
    Dilation,
    Nonnegativity,
    /// `d_λ` integral, `Σ_{|λ|=m} d_λ = C(m+n-1, n-1)`.
    Dimensions,
    /// `Σ_{|α|=m} d_α p_α = γ^m / m!` (Fock oracle actions).
    GammaPower,
    /// `Σ_{|α|=k} d_α q_α = L_k^{(n-1)}(γ)` (Fock oracle actions).
    Laguerre,
    /// Independent oracle equals the engine.
    Oracle,
    /// Hand-derived rates for the rank-two and square-matrix families.
    ClosedFormRates,
    ChapmanKolmogorov,
    Kolmogorov,
    Projection,
    Stochasticity,
}

impl Suite {
    pub const ALL: [Suite; 15] = [
        Suite::Composition,
        Suite::RateSums,
        Suite::RowSums,
        Suite::DimensionSums,
        Suite::Dilation,
        Suite::Nonnegativity,
        Suite::Dimensions,
        Suite::GammaPower,
        Suite::Laguerre,
        Suite::Oracle,
        Suite::ClosedFormRates,
        Suite::ChapmanKolmogorov,
        Suite::Kolmogorov,
        Suite::Projection,
        Suite::Stochasticity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Composition => "composition",
            Suite::RateSums => "rate_sums",
            Suite::RowSums => "row_sums",
            Suite::DimensionSums => "dimension_sums",
            Suite::Dilation => "dilation",
            Suite::Nonnegativity => "nonnegativity",
            Suite::Dimensions => "dimensions",
            Suite::GammaPower => "gamma_power",
            Suite::Laguerre => "laguerre",
            Suite::Oracle => "oracle",
            Suite::ClosedFormRates => "closed_form_rates",
            Suite::ChapmanKolmogorov => "chapman_kolmogorov",
            Suite::Kolmogorov => "kolmogorov",
            Suite::Projection => "projection",
            Suite::Stochasticity => "stochasticity",
        }
    }

    /// Whether the suite has anything to check for this action and bound.
    pub fn applies_to(self, action: &ActionSpec, max_weight: u64) -> bool {
        match self {
            Suite::GammaPower | Suite::Laguerre => action.is_oracle_action() && action.n() <= MAX_FOCK_N,
            Suite::Oracle => match action {
                ActionSpec::Jack(j) => j.rank <= MAX_JACK_RANK && max_weight <= MAX_JACK_WEIGHT,
                _ => action.n() <= MAX_FOCK_N,
            },
            Suite::ClosedFormRates => closed_form_family(action).is_some(),
            _ => true,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::UnknownSuite(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Instance {
    pub key: String,
    pub pass: bool,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub suite: String,
    pub action: ActionSpec,
    pub max_weight: u64,
    pub instances: Vec<Instance>,
    pub pass: bool,
}

impl Report {
    fn new(suite: String, action: &ActionSpec, max_weight: u64, mut instances: Vec<Instance>) -> Self {
        instances.sort_by(|a, b| a.key.cmp(&b.key));
        let pass = instances.iter().all(|i| i.pass);
        Report {
            suite,
            action: action.clone(),
            max_weight,
            instances,
            pass,
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Instance> {
        self.instances.iter().filter(|i| !i.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    /// One line per instance, then a summary line.
    pub fn to_text(&self) -> String {
        let width = self.instances.iter().map(|i| i.key.len()).max().unwrap_or(0);
        let mut s = String::new();
        for i in &self.instances {
            let mark = if i.pass { "ok  " } else { "FAIL" };
            s.push_str(&format!("{mark} {:width$}  {}  {}\n", i.key, i.lhs, i.rhs));
        }
        let failed = self.failures().count();
        s.push_str(&format!(
            "{} {} on {} up to weight {}: {} instances, {} failed\n",
            if self.pass { "PASS" } else { "FAIL" },
            self.suite,
            self.action,
            self.max_weight,
            self.instances.len(),
            failed
        ));
        s
    }
}

fn inst(key: String, lhs: &Rational, rhs: &Rational) -> Instance {
    Instance {
        key,
        pass: lhs == rhs,
        lhs: rational::to_pq(lhs),
        rhs: rational::to_pq(rhs),
    }
}

fn inst_poly(key: String, lhs: &UniPoly, rhs: &UniPoly) -> Instance {
    Instance {
        key,
        pass: lhs == rhs,
        lhs: format!("{lhs:?}"),
        rhs: format!("{rhs:?}"),
    }
}

fn show_invariant(p: &InvariantPoly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    p.terms()
        .iter()
        .map(|(e, c)| format!("{}·x^{:?}", rational::to_pq(c), e))
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Runs one suite (or `"all"` applicable suites) over every state of weight
/// at most `max_weight`.
pub fn check_identity(suite: &str, action: &ActionSpec, max_weight: u64) -> Result<Report> {
    let coeffs = Coefficients::new(action);
    if suite == "all" {
        let mut instances = Vec::new();
        for s in Suite::ALL {
            if s.applies_to(action, max_weight) {
                for mut i in run(s, &coeffs, max_weight)? {
                    i.key = format!("{s}/{}", i.key);
                    instances.push(i);
                }
            }
        }
        return Ok(Report::new("all".into(), action, max_weight, instances));
    }
    let s: Suite = suite.parse()?;
    if !s.applies_to(action, max_weight) {
        return Err(Error::NotOracleAction {
            suite: s.to_string(),
            action: action.to_string(),
        });
    }
    Ok(Report::new(s.to_string(), action, max_weight, run(s, &coeffs, max_weight)?))
}

/// Runs a suite against a caller-supplied engine (so caches can be shared).
pub fn run(suite: Suite, coeffs: &Coefficients, max_weight: u64) -> Result<Vec<Instance>> {
    let ctx = Ctx::new(coeffs, max_weight)?;
    match suite {
        Suite::Composition => ctx.composition(),
        Suite::RateSums => ctx.rate_sums(),
        Suite::RowSums => ctx.row_sums(),
        Suite::DimensionSums => ctx.dimension_sums(),
        Suite::Dilation => ctx.dilation(),
        Suite::Nonnegativity => ctx.nonnegativity(),
        Suite::Dimensions => ctx.dimensions(),
        Suite::GammaPower => ctx.gamma_power(),
        Suite::Laguerre => ctx.laguerre(),
        Suite::Oracle => ctx.oracle(),
        Suite::ClosedFormRates => ctx.closed_form_rates(),
        Suite::ChapmanKolmogorov => ctx.chapman_kolmogorov(),
        Suite::Kolmogorov => ctx.kolmogorov(),
        Suite::Projection => ctx.projection(),
        Suite::Stochasticity => ctx.stochasticity(),
    }
}

struct Ctx<'a> {
    coeffs: &'a Coefficients,
    action: &'a ActionSpec,
    max_weight: u64,
    /// `grades[w]` lists the states of weight `w`.
    grades: Vec<Vec<State>>,
}

impl<'a> Ctx<'a> {
    fn new(coeffs: &'a Coefficients, max_weight: u64) -> Result<Self> {
        let action = coeffs.action();
        action.states_up_to(max_weight, DEFAULT_STATE_CAP)?;
        let grades = (0..=max_weight).map(|w| action.states_of_weight(w)).collect();
        Ok(Ctx {
            coeffs,
            action,
            max_weight,
            grades,
        })
    }

    fn n(&self) -> u64 {
        self.action.n() as u64
    }

    fn states(&self) -> impl Iterator<Item = &State> {
        self.grades.iter().flatten()
    }

    fn g(&self, l: &State, m: &State) -> Result<Rational> {
        self.coeffs.genbin(l, m)
    }

    fn composition(&self) -> Result<Vec<Instance>> {
        let mut out = Vec::new();
        for beta in self.states() {
            for alpha in self.states().filter(|a| self.action.contains(a, beta)) {
                let base = self.g(beta, alpha)?;
                let (wa, wb) = (alpha.weight(), beta.weight());
                for l in wa..=wb {
                    let mut lhs = Rational::zero();
                    for lam in &self.grades[l as usize] {
                        lhs += self.g(beta, lam)? * self.g(lam, alpha)?;
                    }
                    let rhs = rational::binomial_q(wb - wa, l - wa) * &base;
                    out.push(inst(format!("beta={beta} alpha={alpha} l={l}"), &lhs, &rhs));
                }
            }
        }
        Ok(out)
    }

    fn rate_sums(&self) -> Result<Vec<Instance>> {
        let mut out = Vec::new();
        for beta in self.states() {
            for dir in [Direction::Birth, Direction::Death] {
                let total: Rational = markov::transitions(self.coeffs, dir, beta)?.into_iter().map(|(_, r)| r).sum();
                let want = int(markov::exit_rate(self.action, dir, beta) as i64);
                out.push(inst(format!("{dir} beta={beta}"), &total, &want));
            }
        }
        Ok(out)
    }

    fn row_sums(&self) -> Result<Vec<Instance>> {
        let mut out = Vec::new();
        for alpha in self.states() {
            for m in 0..=alpha.weight() {
                let mut lhs = Rational::zero();
                for beta in &self.grades[m as usize] {
                    lhs += self.g(alpha, beta)?;
                }
                let rhs = rational::binomial_q(alpha.weight(), m);
                out.push(inst(format!("alpha={alpha} m={m}"), &lhs, &rhs));
            }
        }
        Ok(out)
    }

    fn dimension_sums(&self) -> Result<Vec<Instance>> {
        let n = self.n();
        let mut out = Vec::new();
        for k in 0..=self.max_weight {
            for beta in self.states().filter(|b| b.weight() <= k) {
                let mut lhs = Rational::zero();
                for alpha in &self.grades[k as usize] {
                    lhs += self.action.dim_rational(alpha)? * self.g(alpha, beta)?;
                }
                let rhs = self.action.dim_rational(beta)? * rational::binomial_q(k + n - 1, k - beta.weight());
                out.push(inst(format!("k={k} beta={beta}"), &lhs, &rhs));
            }
        }
        Ok(out)
    }

    fn dilation(&self) -> Result<Vec<Instance>> {
        // Coefficient of (-1)^{|β|} q_β in q_α(√c z):
        // Σ_l (-c)^l Σ_{|γ|=l} [α;γ][γ;β]  versus  [α;β] (-c)^{|β|} (1-c)^{|α|-|β|}.
        let mut out = Vec::new();
        for alpha in self.states() {
            for beta in self.states().filter(|b| b.weight() <= alpha.weight()) {
                let mut lhs = UniPoly::zero();
                for l in beta.weight()..=alpha.weight() {
                    let mut s = Rational::zero();
                    for gam in &self.grades[l as usize] {
                        s += self.g(alpha, gam)? * self.g(gam, beta)?;
                    }
                    let sign = if l % 2 == 0 { s } else { -s };
                    lhs = &lhs + &UniPoly::monomial(sign, l as usize);
                }
                let wb = beta.weight();
                let lead = if wb % 2 == 0 { self.g(alpha, beta)? } else { -self.g(alpha, beta)? };
                let rhs = &UniPoly::monomial(lead, wb as usize) * &UniPoly::one_minus_x_pow(alpha.weight() - wb);
                out.push(inst_poly(format!("alpha={alpha} beta={beta}"), &lhs, &rhs));
            }
        }
        Ok(out)
    }

    fn nonnegativity(&self) -> Result<Vec<Instance>> {
        let mut out = Vec::new();
        for l in self.states() {
            let mut min: Option<Rational> = None;
            for m in self.states().filter(|m| m.weight() <= l.weight()) {
                let v = self.g(l, m)?;
                if min.as_ref().is_none_or(|x| &v < x) {
                    min = Some(v);
                }
            }
            let min = min.expect("λ is comparable to itself");
            out.push(Instance {
                key: format!("lambda={l}"),
                pass: !min.is_negative(),
                lhs: rational::to_pq(&min),
                rhs: ">= 0".into(),
            });
        }
        Ok(out)
    }

    fn dimensions(&self) -> Result<Vec<Instance>> {
        let n = self.n();
        let mut out = Vec::new();
        for (m, grade) in self.grades.iter().enumerate() {
            let mut total = Rational::zero();
            for s in grade {
                let d = self.action.dim_rational(s)?;
                out.push(Instance {
                    key: format!("integral {s}"),
                    pass: d.is_integer() && d.is_positive(),
                    lhs: rational::to_pq(&d),
                    rhs: "positive integer".into(),
                });
                total += d;
            }
            let want = rational::binomial_q(m as u64 + n - 1, n - 1);
            out.push(inst(format!("sum m={m}"), &total, &want));
        }
        Ok(out)
    }
}

enum Family {
    RankTwo(u64),
    SquareMatrix(usize),
}

/// Jack actions with a hand-derived rate formula. Every rank-two action has
/// `θ = (n-2)/2`.
fn closed_form_family(action: &ActionSpec) -> Option<Family> {
    match action {
        ActionSpec::Jack(j) if j.rank == 2 && j.n >= 3 => Some(Family::RankTwo(j.n as u64)),
        ActionSpec::Jack(j) if j.theta.is_one() => Some(Family::SquareMatrix(j.rank)),
        _ => None,
    }
}

fn show_row(row: &[(State, Rational)]) -> String {
    let parts: Vec<String> = row.iter().map(|(s, v)| format!("{s}:{}", rational::to_pq(v))).collect();
    format!("[{}]", parts.join(" "))
}

impl Ctx<'_> {
    fn gamma_power(&self) -> Result<Vec<Instance>> {
        let mut out = Vec::new();
        for (m, grade) in self.grades.iter().enumerate() {
            let mut lhs = InvariantPoly::zero();
            for a in grade {
                lhs = &lhs + &fock::p_lambda(self.action, a)?.scale(&self.action.dim_rational(a)?);
            }
            let rhs = InvariantPoly::gamma_power_over_factorial(self.action.n(), m as u64);
            out.push(Instance {
                key: format!("m={m}"),
                pass: lhs == rhs,
                lhs: show_invariant(&lhs),
                rhs: show_invariant(&rhs),
            });
        }
        Ok(out)
    }

    fn laguerre(&self) -> Result<Vec<Instance>> {
        let n = self.n();
        let sys = fock::gram_schmidt_with(self.action, self.max_weight, DEFAULT_STATE_CAP, &|_| {})?;
        let mut out = Vec::new();
        for k in 0..=self.max_weight {
            let mut lhs = InvariantPoly::zero();
            for (i, s) in sys.states.iter().enumerate().filter(|(_, s)| s.weight() == k) {
                lhs = &lhs + &sys.q_poly(i).scale(&self.action.dim_rational(s)?);
            }
            let mut rhs = InvariantPoly::zero();
            for i in 0..=k {
                let c = rational::binomial_q(k + n - 1, k - i);
                let c = if i % 2 == 0 { c } else { -c };
                rhs = &rhs + &InvariantPoly::gamma_power_over_factorial(self.action.n(), i).scale(&c);
            }
            out.push(Instance {
                key: format!("k={k}"),
                pass: lhs == rhs,
                lhs: show_invariant(&lhs),
                rhs: show_invariant(&rhs),
            });
        }
        Ok(out)
    }

    fn oracle(&self) -> Result<Vec<Instance>> {
        let mut out = Vec::new();
        let mut push = |l: &State, oracle: Vec<(State, Rational)>, engine: Vec<(State, Rational)>| {
            out.push(Instance {
                key: format!("lambda={l}"),
                pass: oracle == engine,
                lhs: show_row(&oracle),
                rhs: show_row(&engine),
            });
        };
        match self.action {
            ActionSpec::Jack(j) => {
                for l in self.states() {
                    let lp = l.as_partition().expect("Jack states are partitions");
                    let row = jack_poly::binomial_formula_row(lp, &j.theta, j.rank)?;
                    let mut oracle = Vec::new();
                    let mut engine = Vec::new();
                    for m in self.states().filter(|m| m.weight() <= l.weight()) {
                        let o = row.get(m.as_partition().expect("partition")).cloned().unwrap_or_else(Rational::zero);
                        oracle.push((m.clone(), o));
                        engine.push((m.clone(), self.g(l, m)?));
                    }
                    push(l, oracle, engine);
                }
            }
            _ => {
                let oracle = fock::gram_schmidt_genbin(self.action, self.max_weight, DEFAULT_STATE_CAP)?;
                let engine = genbin_table(self.action, self.max_weight, DEFAULT_STATE_CAP)?;
                for l in self.states() {
                    let pick = |t: &crate::coefficients::CoeffTable| -> Vec<(State, Rational)> {
                        t.iter().filter(|(a, _, _)| *a == l).map(|(_, m, v)| (m.clone(), v.clone())).collect()
                    };
                    push(l, pick(&oracle), pick(&engine));
                }
            }
        }
        Ok(out)
    }

    fn closed_form_rates(&self) -> Result<Vec<Instance>> {
        let family = closed_form_family(self.action).ok_or_else(|| Error::NotOracleAction {
            suite: Suite::ClosedFormRates.to_string(),
            action: self.action.to_string(),
        })?;
        let mut out = Vec::new();
        for alpha in self.states() {
            let a = alpha.as_partition().expect("Jack states are partitions");
            for dir in [Direction::Birth, Direction::Death] {
                let mut closed: Vec<(State, Rational)> = match family {
                    Family::RankTwo(n) => rates::rank_two_rates(n, a, dir)?,
                    Family::SquareMatrix(m) => rates::square_matrix_rates(m, a, dir)?,
                }
                .into_iter()
                .map(|(p, r)| (State::Partition(p), r))
                .collect();
                let mut generic = markov::transitions(self.coeffs, dir, alpha)?;
                closed.sort();
                generic.sort();
                out.push(Instance {
                    key: format!("{dir} alpha={alpha}"),
                    pass: closed == generic,
                    lhs: show_row(&closed),
                    rhs: show_row(&generic),
                });
            }
        }
        Ok(out)
    }

    /// Pairs `(α, β)` reachable in direction `dir`, with the states between them.
    fn reachable(&self, dir: Direction) -> Vec<(&State, &State, Vec<&State>)> {
        let mut out = Vec::new();
        for alpha in self.states() {
            for beta in self.states() {
                let (lo, hi) = match dir {
                    Direction::Birth => (alpha, beta),
                    Direction::Death => (beta, alpha),
                };
                if !self.action.contains(lo, hi) {
                    continue;
                }
                let between = self
                    .states()
                    .filter(|g| self.action.contains(lo, g) && self.action.contains(g, hi))
                    .collect();
                out.push((alpha, beta, between));
            }
        }
        out
    }

    fn chapman_kolmogorov(&self) -> Result<Vec<Instance>> {
        let (x, y) = (ratio(2, 3), ratio(3, 5));
        let xy = &x * &y;
        let p = |d, a, b, t: &Rational| transition_prob(self.coeffs, d, a, b, t);
        let mut out = Vec::new();
        for dir in [Direction::Birth, Direction::Death] {
            for (alpha, beta, between) in self.reachable(dir) {
                let mut lhs = Rational::zero();
                for g in between {
                    lhs += p(dir, alpha, g, &x)? * p(dir, g, beta, &y)?;
                }
                let rhs = p(dir, alpha, beta, &xy)?;
                out.push(inst(format!("{dir} alpha={alpha} beta={beta}"), &lhs, &rhs));
            }
        }
        Ok(out)
    }

    fn rate(&self, dir: Direction, from: &State, to: &State) -> Result<Rational> {
        if from == to {
            return Ok(-int(markov::exit_rate(self.action, dir, from) as i64));
        }
        Ok(markov::transitions(self.coeffs, dir, from)?
            .into_iter()
            .find(|(s, _)| s == to)
            .map(|(_, r)| r)
            .unwrap_or_else(Rational::zero))
    }

    /// Forward and backward equations as polynomial identities in `x = e^{-t}`.
    fn kolmogorov(&self) -> Result<Vec<Instance>> {
        let p = |d, a, b| transition_poly(self.coeffs, d, a, b);
        let mut out = Vec::new();
        for dir in [Direction::Birth, Direction::Death] {
            for (alpha, beta, between) in self.reachable(dir) {
                let lhs = p(dir, alpha, beta)?.time_derivative();
                let mut fwd = UniPoly::zero();
                let mut bwd = UniPoly::zero();
                for g in &between {
                    let into_beta = self.rate(dir, g, beta)?;
                    if !into_beta.is_zero() {
                        fwd = &fwd + &p(dir, alpha, g)?.scale(&into_beta);
                    }
                    let from_alpha = self.rate(dir, alpha, g)?;
                    if !from_alpha.is_zero() {
                        bwd = &bwd + &p(dir, g, beta)?.scale(&from_alpha);
                    }
                }
                out.push(inst_poly(format!("{dir} forward alpha={alpha} beta={beta}"), &lhs, &fwd));
                out.push(inst_poly(format!("{dir} backward alpha={alpha} beta={beta}"), &lhs, &bwd));
            }
        }
        Ok(out)
    }

    fn projection(&self) -> Result<Vec<Instance>> {
        let x = ratio(2, 3);
        let n = self.n();
        let mut out = Vec::new();
        for alpha in self.states() {
            let k = alpha.weight();
            for (dir, range) in [(Direction::Birth, k..=self.max_weight), (Direction::Death, 0..=k)] {
                for l in range {
                    let mut lhs = Rational::zero();
                    for beta in &self.grades[l as usize] {
                        lhs += transition_prob(self.coeffs, dir, alpha, beta, &x)?;
                    }
                    let rhs = projected_prob_1d(n, k, l, &x, dir)?;
                    out.push(inst(format!("{dir} alpha={alpha} l={l}"), &lhs, &rhs));
                }
            }
        }
        Ok(out)
    }

    fn stochasticity(&self) -> Result<Vec<Instance>> {
        let x = ratio(2, 3);
        let mut out = Vec::new();
        for alpha in self.states() {
            let total: Rational = markov::transition_row(self.coeffs, Direction::Death, alpha, 0, &x)?
                .into_iter()
                .map(|(_, v)| v)
                .sum();
            out.push(inst(format!("death alpha={alpha}"), &total, &Rational::one()));
        }
        Ok(out)
    }
}
