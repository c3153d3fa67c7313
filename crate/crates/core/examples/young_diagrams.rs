//! Partitions as Young diagrams: one-box moves, enumeration by weight, and
//! the multiplicities used by the symmetric torus.

use mfchains::partitions::{covers_down, covers_up, enumerate, frequency, Partition};

fn draw(p: &Partition) -> String {
    if p.is_empty() {
        return "  (empty)\n".into();
    }
    p.parts().iter().map(|&k| format!("  {}\n", "[]".repeat(k as usize))).collect()
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let lambda = Partition::parse("3,1,1")?;
    print!("{lambda}, weight {}:\n{}", lambda.weight(), draw(&lambda));

    println!("add one box (at most 3 rows):");
    for p in covers_up(&lambda, 3)? {
        println!("  {p}");
    }
    println!("remove one box:");
    for p in covers_down(&lambda) {
        println!("  {p}");
    }

    for w in 0..=6 {
        let all = enumerate(w, 3);
        println!("weight {w}: {} partitions with <= 3 rows", all.len());
    }

    let f = frequency(&lambda, 5)?;
    println!("part multiplicities of {lambda} padded to 5: {:?}", f.counts);
    Ok(())
}
