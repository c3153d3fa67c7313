//! Monte Carlo paths of the birth chain from the empty diagram, compared with
//! the exact marginal.

use std::sync::Arc;
use std::time::Instant;

use mfchains::coefficients::Coefficients;
use mfchains::markov::Direction;
use mfchains::simulate::{empirical_marginal, exact_row, tv_distance, weight_marginal, Sampler};
use mfchains::{parse_action, Result};

fn main() -> Result<()> {
    let action = parse_action("sphere:n=5")?;
    let coeffs = Arc::new(Coefficients::new(&action));
    let sampler = Sampler::new(coeffs.clone(), Direction::Birth);
    let start = action.zero();
    let t = 0.5;

    let clock = Instant::now();
    let paths = sampler.sample_batch(&start, t, 7, 100_000)?;
    println!("{} paths in {:.2?}", paths.len(), clock.elapsed());

    let empirical = empirical_marginal(&paths, t)?;
    let exact = exact_row(&coeffs, Direction::Birth, &start, t, 1e-12)?;
    println!("total variation to the exact row: {:.5}", tv_distance(&empirical, &exact));

    let (we, wx) = (weight_marginal(&empirical), weight_marginal(&exact));
    println!("weight   empirical   exact");
    for k in 0..=6u64 {
        println!("{k:>6}   {:.5}     {:.5}", we.get(&k).unwrap_or(&0.0), wx.get(&k).unwrap_or(&0.0));
    }
    println!("\nfirst path:\n{}", paths[0].to_json_line());
    Ok(())
}
