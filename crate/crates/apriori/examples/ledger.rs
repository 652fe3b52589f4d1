//! Exact arithmetic of the newborn vertical weight estimate.

use apriori::pullback::{ledger_grid, newborn_vertical_ledger, WeightLedger};
use num_rational::Rational64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (w0, w1, nu) in [(10, 10, 5), (12, 10, 6), (30, 10, 15), (9, 10, 5)] {
        let l = WeightLedger::from_integers(w0, w1, nu, 0)?;
        match newborn_vertical_ledger(&l) {
            Ok(b) => {
                let rough = b.branch_rough.map_or("undefined".to_string(), |r| r.to_string());
                println!("W0={w0} W1={w1} ν={nu}: loss {}, rough {rough}, bound {}, meets 1/25: {}", b.branch_loss, b.bound, b.meets_target)
            }
            Err(e) => println!("W0={w0} W1={w1} ν={nu}: {e}"),
        }
    }
    let g = ledger_grid(Rational64::from_integer(1), Rational64::from_integer(3), 20);
    println!("grid W0/W1 in [1, 3]: {} points, {} failures, min share {}", g.points, g.failures.len(), g.min_share);
    Ok(())
}
