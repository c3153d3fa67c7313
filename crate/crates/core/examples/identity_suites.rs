//! Runs every applicable identity suite on a few actions.

use mfchains::oracles::check_identity;
use mfchains::{parse_action, Result};

fn main() -> Result<()> {
    for spec in ["un:n=3", "torus:n=2", "symtorus:n=3", "symc:m=2", "sphere:n=5"] {
        let report = check_identity("all", &parse_action(spec)?, 4)?;
        print!("{}", report.to_text().lines().last().map(|l| format!("{l}\n")).unwrap_or_default());
    }
    let report = check_identity("rate_sums", &parse_action("skewc:m=4")?, 2)?;
    print!("\n{}", report.to_text());
    Ok(())
}
