//! Thin-thick inequality on pairs of pants with Fenchel-Nielsen lengths.

use apriori::fuchsian::{build_pants, thin_thick_surface_report};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for l in [[2.0, 2.0, 2.0], [0.3, 5.0, 9.0], [0.1, 0.1, 20.0], [28.0, 29.0, 30.0]] {
        let r = thin_thick_surface_report(&build_pants(l[0], l[1], l[2])?, 6)?;
        println!(
            "lengths {l:?}: W(S) = {:.4}, 2ΣW(α) = {:.4}, deficit {:.4}, {} arcs in the diagram",
            r.total_weight, r.diagram_sum, r.deficit, r.diagram_size
        );
    }
    Ok(())
}
