//! Canonical weighted arc diagram of a marking with mixed scales.

use apriori::lamination::{canonical_diagram, IdealMarking};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Two long intervals separated by pairs of short ones.
    let m = IdealMarking::from_cuts(&[0.0, 0.48, 0.49, 0.5, 0.98, 0.99])?;
    let d = canonical_diagram(&m)?;
    for e in &d.entries {
        println!("I_{} -- I_{}: W = {:.4}, weight {:.4}", e.m, e.n, e.wbar, e.weight);
    }
    println!("{} entries on {} intervals", d.entries.len(), m.p());
    Ok(())
}
