//! The key estimate for one pullback of a segment marking.

use apriori::lamination::{key_estimate_check, random_segment_marking, BlaschkeMap};
use apriori::widths::CapacityGrid;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let m = random_segment_marking(&mut rng, 4);
    let b = BlaschkeMap::random(&mut rng, 2, 0.6);
    let r = key_estimate_check(&b, &m, &CapacityGrid::new(256)?, 1e-3)?;
    for s in &r.segments {
        println!("segment {:?}: W = {:.4}, lift weights {:?}, broken {}", s.ends, s.wbar, s.lift_weights, s.broken);
    }
    println!(
        "W(S) = {:.4}, W(S_br) = {:.4}, W(i*S) = {:.4}, margin {:.2e}, holds {}",
        r.segment_weight, r.broken_weight, r.pullback_weight, r.margin, r.holds
    );
    Ok(())
}
