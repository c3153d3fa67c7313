//! Acceptance criteria, each run against its time budget. Prints one line
//! per criterion and exits non-zero if any fails.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use mfchains::coefficients::{genbin_table, Coefficients, JackEngine, DEFAULT_STATE_CAP};
use mfchains::markov::{generator, transition_prob_t, uniformized_row, Direction};
use mfchains::oracles::rates::rank_two_rates;
use mfchains::oracles::suites::{run, Suite};
use mfchains::oracles::{gram_schmidt_genbin, jack_poly::binomial_formula_row, binomial_formula_oracle};
use mfchains::partitions::{enumerate, Partition};
use mfchains::rational::{binomial_q, int, ratio, Rational};
use mfchains::simulate::{empirical_marginal, exact_row, tv_distance, Sampler};
use mfchains::{parse_action, ActionSpec, State};

type Outcome = Result<String, String>;

const PRESETS: [&str; 7] = ["un:n=3", "torus:n=3", "symtorus:n=3", "symc:m=2", "matc:m=2", "skewc:m=2", "sphere:n=5"];

fn presets() -> Vec<ActionSpec> {
    PRESETS.iter().map(|s| parse_action(s).unwrap()).collect()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Runs suites for every preset; fails on the first failing instance.
fn suites_on_presets(suites: &[Suite], max_weight: u64) -> Outcome {
    let mut count = 0;
    for action in presets() {
        let coeffs = Coefficients::new(&action);
        for &s in suites {
            let instances = run(s, &coeffs, max_weight).map_err(|e| e.to_string())?;
            if let Some(bad) = instances.iter().find(|i| !i.pass) {
                return Err(format!("{s} on {action}: {} gives {} vs {}", bad.key, bad.lhs, bad.rhs));
            }
            count += instances.len();
        }
    }
    Ok(format!("{count} instances"))
}

fn c1_ordinary_binomials() -> Outcome {
    for n in [1, 3, 5] {
        let a = parse_action(&format!("un:n={n}")).unwrap();
        let c = Coefficients::new(&a);
        for m in 0..=20u64 {
            for j in 0..=m {
                let v = c
                    .genbin(&a.parse_state(&m.to_string()).unwrap(), &a.parse_state(&j.to_string()).unwrap())
                    .map_err(|e| e.to_string())?;
                ensure(v == binomial_q(m, j), || format!("n={n} [{m};{j}] = {v}"))?;
            }
        }
    }
    Ok("m <= 20, n in {1,3,5}".into())
}

fn c2_rate_sums() -> Outcome {
    suites_on_presets(&[Suite::RateSums], 6)
}

fn c3_coefficient_identities() -> Outcome {
    suites_on_presets(&[Suite::RowSums, Suite::Composition, Suite::DimensionSums], 6)
}

fn c4_fock_oracle() -> Outcome {
    let mut entries = 0;
    for kind in ["un", "torus", "symtorus"] {
        for n in 1..=3 {
            let a = parse_action(&format!("{kind}:n={n}")).unwrap();
            let oracle = gram_schmidt_genbin(&a, 4, DEFAULT_STATE_CAP).map_err(|e| e.to_string())?;
            let engine = genbin_table(&a, 4, DEFAULT_STATE_CAP).map_err(|e| e.to_string())?;
            for ((l, m, o), (_, _, e)) in oracle.iter().zip(engine.iter()) {
                ensure(o == e, || format!("{a} [{l};{m}]: oracle {o} engine {e}"))?;
            }
            ensure(oracle.len() == engine.len(), || format!("{a}: table sizes differ"))?;
            entries += oracle.len();
        }
    }
    Ok(format!("{entries} entries"))
}

fn c5_jack_oracle() -> Outcome {
    let anchor = binomial_formula_oracle(&Partition::parse("2,1").unwrap(), &Partition::parse("1,1").unwrap(), &int(1), 2)
        .map_err(|e| e.to_string())?;
    ensure(anchor == ratio(3, 2), || format!("anchor [(2,1);(1,1)] = {anchor}"))?;
    let mut checked = 0;
    for theta in [ratio(1, 2), int(1), ratio(3, 2), int(2)] {
        for r in 1..=3 {
            let engine = JackEngine::new(theta.clone(), r);
            for w in 0..=4 {
                for lambda in enumerate(w, r) {
                    let row = binomial_formula_row(&lambda, &theta, r).map_err(|e| e.to_string())?;
                    for v in 0..=w {
                        for mu in enumerate(v, r) {
                            let got = row.get(&mu).cloned().unwrap_or_else(|| int(0));
                            let want = engine.genbin(&lambda, &mu).map_err(|e| e.to_string())?;
                            ensure(got == want, || format!("theta={theta} r={r} [{lambda};{mu}]: {got} vs {want}"))?;
                            checked += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(format!("{checked} coefficients"))
}

fn c6_semigroup_equations() -> Outcome {
    suites_on_presets(&[Suite::ChapmanKolmogorov, Suite::Kolmogorov], 5)
}

fn c7_projection() -> Outcome {
    suites_on_presets(&[Suite::Projection], 6)
}

fn c8_uniformization() -> Outcome {
    let mut worst = 0.0f64;
    let mut compared = 0;
    for action in presets() {
        let coeffs = Coefficients::new(&action);
        for dir in [Direction::Birth, Direction::Death] {
            let top = match dir {
                Direction::Birth => 3 + 40,
                Direction::Death => 3,
            };
            let g = generator(&coeffs, dir, top, DEFAULT_STATE_CAP).map_err(|e| e.to_string())?;
            for alpha in (0..=3).flat_map(|w| action.states_of_weight(w)) {
                for t in [0.1, 0.5, 1.0] {
                    let row = uniformized_row(&g, &alpha, t, 1e-14).map_err(|e| e.to_string())?;
                    for beta in &g.states {
                        let exact = transition_prob_t(&coeffs, dir, &alpha, beta, t).map_err(|e| e.to_string())?;
                        let err = (exact - row.get(beta).copied().unwrap_or(0.0)).abs();
                        ensure(err <= 1e-10, || format!("{action} {dir} t={t} {alpha}->{beta}: error {err:e}"))?;
                        worst = worst.max(err);
                        compared += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{compared} entries, max error {worst:.1e}"))
}

fn c9_simulation() -> Outcome {
    let action = parse_action("sphere:n=5").unwrap();
    let coeffs = Arc::new(Coefficients::new(&action));
    let sampler = Sampler::new(coeffs.clone(), Direction::Birth);
    let start = action.zero();
    let batch = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| sampler.sample_batch(&start, 0.5, 7, 100_000))
            .map_err(|e| e.to_string())
    };
    let many = batch(4)?;
    let marginal = empirical_marginal(&many, 0.5).map_err(|e| e.to_string())?;
    let exact = exact_row(&coeffs, Direction::Birth, &start, 0.5, 1e-12).map_err(|e| e.to_string())?;
    let tv = tv_distance(&marginal, &exact);
    ensure(tv <= 0.01, || format!("total variation {tv}"))?;
    let single = batch(1)?;
    ensure(single == many, || "1-thread and 4-thread batches differ".into())?;
    Ok(format!("TV {tv:.5}, identical at 1 and 4 threads"))
}

fn c10_dimensions() -> Outcome {
    for action in presets() {
        let n = action.n() as u64;
        for m in 0..=6u64 {
            let mut total = Rational::from_integer(0.into());
            for s in action.states_of_weight(m) {
                let d = action.dim_irrep(&s).map_err(|e| format!("{action} {s}: {e}"))?;
                total += Rational::from_integer(d);
            }
            let want = binomial_q(m + n - 1, n - 1);
            ensure(total == want, || format!("{action} m={m}: {total} vs {want}"))?;
        }
    }
    Ok("m <= 6, all presets".into())
}

fn c11_rank_two_rates() -> Outcome {
    let mut rows = 0;
    for n in [3u64, 4, 5, 7] {
        let action = parse_action(&format!("sphere:n={n}")).unwrap();
        let coeffs = Coefficients::new(&action);
        for w in 0..=6 {
            for alpha in enumerate(w, 2) {
                for dir in [Direction::Birth, Direction::Death] {
                    let mut closed = rank_two_rates(n, &alpha, dir).map_err(|e| e.to_string())?;
                    let mut generic: Vec<(Partition, Rational)> =
                        mfchains::markov::transitions(&coeffs, dir, &State::Partition(alpha.clone()))
                            .map_err(|e| e.to_string())?
                            .into_iter()
                            .map(|(s, r)| (s.as_partition().unwrap().clone(), r))
                            .collect();
                    closed.sort();
                    generic.sort();
                    ensure(closed == generic, || format!("n={n} {dir} {alpha}: {closed:?} vs {generic:?}"))?;
                    rows += 1;
                }
            }
        }
    }
    Ok(format!("{rows} rate rows"))
}

fn main() -> ExitCode {
    let criteria: [(&str, u64, fn() -> Outcome); 11] = [
        ("ordinary binomial reduction", 1, c1_ordinary_binomials),
        ("rate row sums", 10, c2_rate_sums),
        ("row sums, composition and dimension sums", 30, c3_coefficient_identities),
        ("Fock oracle equals closed forms", 60, c4_fock_oracle),
        ("Jack oracle equals engine", 60, c5_jack_oracle),
        ("Chapman-Kolmogorov and Kolmogorov equations", 60, c6_semigroup_equations),
        ("weight projection", 10, c7_projection),
        ("uniformization agrees with closed form", 60, c8_uniformization),
        ("simulation total variation and reproducibility", 60, c9_simulation),
        ("dimension sanity", 5, c10_dimensions),
        ("rank-two closed-form rates", 10, c11_rank_two_rates),
    ];
    let mut failed = 0;
    for (i, (name, limit, f)) in criteria.iter().enumerate() {
        let clock = Instant::now();
        let outcome = f();
        let took = clock.elapsed();
        let in_time = took <= Duration::from_secs(*limit);
        let (mark, detail) = match (&outcome, in_time) {
            (Ok(d), true) => ("PASS", d.clone()),
            (Ok(d), false) => ("FAIL", format!("{d}; over the {limit}s budget")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if mark == "FAIL" {
            failed += 1;
        }
        println!("{mark} {:>2} {name} [{:.2}s / {limit}s]: {detail}", i + 1, took.as_secs_f64());
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
