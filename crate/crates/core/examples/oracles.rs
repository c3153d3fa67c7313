//! The two independent constructions: Gram–Schmidt in Fock space, and Jack
//! polynomials expanded at a shifted argument.

use mfchains::coefficients::{genbin_table, DEFAULT_STATE_CAP};
use mfchains::oracles::{gram_schmidt_genbin, jack_polynomial, binomial_formula_oracle};
use mfchains::partitions::Partition;
use mfchains::rational::{ratio, to_pq};
use mfchains::{parse_action, Result};

fn main() -> Result<()> {
    let action = parse_action("symtorus:n=3")?;
    let oracle = gram_schmidt_genbin(&action, 4, DEFAULT_STATE_CAP)?;
    let engine = genbin_table(&action, 4, DEFAULT_STATE_CAP)?;
    println!(
        "{action}: Gram-Schmidt table {} the closed form ({} entries)",
        if oracle.to_entries() == engine.to_entries() { "matches" } else { "DIFFERS FROM" },
        oracle.len()
    );

    let theta = ratio(1, 2);
    let p = jack_polynomial(&Partition::parse("2,1")?, &theta, 3)?;
    println!("\nP_(2,1) at theta = 1/2 in three variables:");
    for (mu, c) in p.terms() {
        println!("  {} m_{mu}", to_pq(c));
    }

    let lambda = Partition::parse("2,1")?;
    for mu in ["1,1", "1", ""] {
        let mu = Partition::parse(mu)?;
        println!("[{lambda}; {mu}] at theta = 1/2, r = 3: {}", to_pq(&binomial_formula_oracle(&lambda, &mu, &theta, 3)?));
    }
    Ok(())
}
