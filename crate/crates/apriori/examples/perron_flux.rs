//! Perron root and flux ratio of the Hubbard matrix as `q` grows.

use apriori::elephant::{build_model, flux_comparability, ElephantParams, SectorPlacement};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for blocks in [vec![], vec![2], vec![1, 1], vec![5]] {
        let b: usize = blocks.iter().sum();
        for q in [10, 20, 50, 100] {
            let params = ElephantParams::new(q, b)?;
            let m = build_model(params, SectorPlacement::from_blocks(params, &blocks)?)?;
            let f = flux_comparability(&m, &vec![1.0; q + b])?;
            println!("blocks {blocks:?} q={q:>3}: Perron root {:.6}, ratio {:.4}", f.perron_root, f.ratio);
        }
    }
    Ok(())
}
