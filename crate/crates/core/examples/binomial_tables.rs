//! Generalized binomial coefficients for each kind of action.
//!
//! The full unitary action gives Pascal's triangle, the torus gives products
//! of binomials, and the Jack family (here the symmetric-matrix preset)
//! gives genuinely new numbers.

use mfchains::coefficients::{genbin_table, Coefficients, DEFAULT_STATE_CAP};
use mfchains::rational::to_pq;
use mfchains::{parse_action, Result};

fn main() -> Result<()> {
    let un = parse_action("un:n=5")?;
    let c = Coefficients::new(&un);
    println!("{un}");
    for m in 0..=5u64 {
        let top = un.parse_state(&m.to_string())?;
        let mut row = Vec::new();
        for j in 0..=m {
            row.push(to_pq(&c.genbin(&top, &un.parse_state(&j.to_string())?)?));
        }
        println!("  {}", row.join(" "));
    }

    for spec in ["torus:n=2", "symtorus:n=3", "symc:m=3"] {
        let action = parse_action(spec)?;
        let table = genbin_table(&action, 3, DEFAULT_STATE_CAP)?;
        println!("\n{action}: {} entries up to weight 3", table.len());
        for (l, m, v) in table.iter().filter(|(l, m, _)| l.weight() == 3 && m.weight() == 2) {
            println!("  [{l}; {m}] = {}", to_pq(v));
        }
    }

    let symc = parse_action("symc:m=3")?;
    let table = genbin_table(&symc, 2, DEFAULT_STATE_CAP)?;
    let mut csv = Vec::new();
    table.write_csv(&mut csv)?;
    println!("\nCSV export:\n{}", String::from_utf8_lossy(&csv));
    Ok(())
}
