//! Jump rates of the birth and death chains and their truncated generators.

use mfchains::coefficients::Coefficients;
use mfchains::markov::{birth_transitions, death_transitions, generator, Direction};
use mfchains::rational::to_pq;
use mfchains::{parse_action, Result};

fn main() -> Result<()> {
    for spec in ["matc:m=2", "skewc:m=4", "sphere:n=5"] {
        let action = parse_action(spec)?;
        let coeffs = Coefficients::new(&action);
        println!("{spec}  ({action}, n = {})", action.n());
        for alpha in ["", "1", "2,1"].map(|s| action.parse_state(s)) {
            let Ok(alpha) = alpha else { continue };
            let up: Vec<String> = birth_transitions(&coeffs, &alpha)?
                .iter()
                .map(|(b, r)| format!("{b}:{}", to_pq(r)))
                .collect();
            let down: Vec<String> = death_transitions(&coeffs, &alpha)?
                .iter()
                .map(|(b, r)| format!("{b}:{}", to_pq(r)))
                .collect();
            println!("  {alpha:<7} up {}   down {}", up.join(" "), down.join(" "));
        }
    }

    let action = parse_action("torus:n=2")?;
    let g = generator(&Coefficients::new(&action), Direction::Death, 2, 1000)?;
    println!("\ndeath generator of {action} up to weight 2:\n{}", g.to_json());
    Ok(())
}
