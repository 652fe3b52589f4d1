//! Closed-form widths of ideal quadrilaterals and their duality.

use apriori::widths::{quad_width_exact, CircleArc, Quadrilateral};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (a, b, c, d) in [(0.0, 0.25, 0.5, 0.75), (0.0, 0.4, 0.5, 0.9), (0.0, 0.1, 0.5, 0.6), (0.0, 0.45, 0.5, 0.95)] {
        let q = Quadrilateral::new(CircleArc::new(a, b)?, CircleArc::new(c, d)?)?;
        let w = quad_width_exact(&q)?;
        let wd = quad_width_exact(&q.dual())?;
        println!("I = [{a}, {b}], J = [{c}, {d}]: W = {w:.6}, W* = {wd:.6}, W W* = {:.12}", w * wd);
    }
    Ok(())
}
