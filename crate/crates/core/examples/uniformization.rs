//! Numeric `e^{tQ}` by uniformization on a truncated state space, checked
//! against the closed form.

use mfchains::coefficients::Coefficients;
use mfchains::markov::{generator, transition_prob_t, uniformized_row, Direction};
use mfchains::{parse_action, Result};

fn main() -> Result<()> {
    let action = parse_action("symc:m=2")?;
    let coeffs = Coefficients::new(&action);
    let alpha = action.parse_state("2")?;
    let g = generator(&coeffs, Direction::Birth, alpha.weight() + 40, 100_000)?;
    println!("{action}: {} states in the truncated birth generator", g.len());

    for t in [0.1, 0.5, 1.0] {
        let row = uniformized_row(&g, &alpha, t, 1e-14)?;
        let mut worst = 0.0f64;
        for (beta, p) in &row {
            let exact = transition_prob_t(&coeffs, Direction::Birth, &alpha, beta, t)?;
            worst = worst.max((exact - p).abs());
        }
        let mass: f64 = row.values().sum();
        println!("  t = {t}: max |uniformized - exact| = {worst:.2e}, retained mass {mass:.12}");
    }
    Ok(())
}
