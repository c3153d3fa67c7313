//! Exact transition probabilities at rational `x = e^{-t}` and their image
//! under `λ ↦ |λ|`.

use mfchains::coefficients::Coefficients;
use mfchains::markov::{projected_prob_1d, transition_poly, transition_row, Direction};
use mfchains::rational::{ratio, to_f64, to_pq, Rational};
use mfchains::{parse_action, Result};

fn main() -> Result<()> {
    let action = parse_action("sphere:n=5")?;
    let coeffs = Coefficients::new(&action);
    let x = ratio(2, 3);
    let alpha = action.parse_state("1")?;

    println!("birth row of {alpha} for {action} at x = 2/3, up to weight 3:");
    for (beta, p) in transition_row(&coeffs, Direction::Birth, &alpha, 3, &x)? {
        println!("  {beta:<6} {:<22} ~ {:.6}", to_pq(&p), to_f64(&p));
    }

    println!("\ngrade sums versus the one-dimensional chain:");
    let row = transition_row(&coeffs, Direction::Birth, &alpha, 4, &x)?;
    for l in 1..=4u64 {
        let sum: Rational = row.iter().filter(|(b, _)| b.weight() == l).map(|(_, p)| p.clone()).sum();
        let one_d = projected_prob_1d(action.n() as u64, 1, l, &x, Direction::Birth)?;
        println!("  l = {l}: {} = {}", to_pq(&sum), to_pq(&one_d));
    }

    let a = action.parse_state("2,1")?;
    let b = action.parse_state("1")?;
    println!(
        "\ndeath p_t({a}, {b}) as a polynomial in x: {:?}",
        transition_poly(&coeffs, Direction::Death, &a, &b)?
    );
    Ok(())
}
