//! Thin-thick decomposition of the ideal polygon of a marking.

use apriori::lamination::{random_multiscale_marking, thin_thick_report};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..5 {
        let m = random_multiscale_marking(&mut rng, 8, 0.3, 12.0);
        let r = thin_thick_report(&m, 1.0)?;
        println!(
            "sides {:>2}: W = {:.4}, 2ΣW(α) = {:.4}, deficit {:.4}, thick ratio {:.4}",
            r.sides, r.total_weight, r.diagram_sum, r.deficit, r.thick_ratio
        );
    }
    Ok(())
}
