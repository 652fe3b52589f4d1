//! The boundary-integral capacity solver against the closed form, and on a
//! condenser with multi-arc plates where no closed form exists.

use apriori::widths::{capacity_width, quad_width_exact, BoundaryCondenser, CapacityGrid, CircleArc, Quadrilateral};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let q = Quadrilateral::new(CircleArc::new(0.05, 0.3)?, CircleArc::new(0.45, 0.9)?)?;
    let exact = quad_width_exact(&q)?;
    for res in [32, 64, 128, 256] {
        let r = capacity_width(&BoundaryCondenser::from_quadrilateral(&q), &CapacityGrid::new(res)?)?;
        println!("resolution {res:>3}: capacity {:.12}, closed form {exact:.12}, error {:.2e}", r.width, (r.width - exact).abs());
    }
    let c = BoundaryCondenser::new(
        vec![CircleArc::new(0.0, 0.1)?, CircleArc::new(0.5, 0.6)?],
        vec![CircleArc::new(0.25, 0.35)?, CircleArc::new(0.75, 0.85)?],
    )?;
    let r = capacity_width(&c, &CapacityGrid::new(128)?)?;
    println!("two-arc plates: width {:.9}, extrapolation estimate {:.1e}", r.width, r.extrapolation_estimate);
    Ok(())
}
