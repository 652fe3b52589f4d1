//! Degree bound of edge images under `f^p` across elephant-eye models.

use apriori::elephant::{build_model, check_bounded_degree, check_degree_steps, enumerate_placements, EdgeScope, ElephantParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for q in [3, 5, 8] {
        for b in 0..q.min(4) {
            let params = ElephantParams::new(q, b)?;
            for pl in enumerate_placements(params) {
                let blocks = pl.blocks(params);
                let m = build_model(params, pl)?;
                let all = check_bounded_degree(&m, EdgeScope::All);
                let tr = check_bounded_degree(&m, EdgeScope::TranslationRegion);
                println!(
                    "q={q} b={b} blocks {blocks:?}: all edges mult {} span {} ({}), translation region {}, proof steps {}",
                    all.max_multiplicity,
                    all.max_span,
                    if all.pass { "pass" } else { "fail" },
                    if tr.pass { "pass" } else { "fail" },
                    if check_degree_steps(&m).is_none() { "hold" } else { "fail" }
                );
            }
        }
    }
    Ok(())
}
