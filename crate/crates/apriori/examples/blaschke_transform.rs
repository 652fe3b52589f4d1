//! Transformation rules of widths under a random Blaschke product.

use apriori::lamination::{random_marking, transform_check, BlaschkeMap};
use apriori::widths::CapacityGrid;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let grid = CapacityGrid::new(128)?;
    for d in 1..=3 {
        let m = random_marking(&mut rng, 5, 0.6);
        let b = BlaschkeMap::random(&mut rng, d, 0.7);
        let r = transform_check(&b, &m, &grid, 1e-3)?;
        let cov = r.covering.iter().map(|c| c.rel_error).fold(0.0, f64::max);
        println!(
            "degree {d}: {} pair checks, {} gap checks, {} violations, covering error {cov:.1e}",
            r.pair_checks, r.gap_checks, r.violations
        );
    }
    Ok(())
}
