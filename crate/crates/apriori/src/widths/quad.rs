//! Closed-form widths of ideal quadrilaterals.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::elliptic::agm;
use super::{CircleArc, WidthError};
use crate::hypdisk::ccw;

/// Ideal quadrilateral with horizontal sides `i` and `j`.
///
/// The vertical sides are the two complementary gaps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quadrilateral {
    #[serde(rename = "I")]
    pub i: CircleArc,
    #[serde(rename = "J")]
    pub j: CircleArc,
}

impl Quadrilateral {
    /// Validated constructor: disjoint, non-adjacent sides.
    pub fn new(i: CircleArc, j: CircleArc) -> Result<Self, WidthError> {
        let q = Self { i, j };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<(), WidthError> {
        let [a, b, c, d] = self.points();
        let total = ccw(a, b) + ccw(b, c) + ccw(c, d) + ccw(d, a);
        if (total - 1.0).abs() > 1e-9 || !self.i.disjoint_open(&self.j) {
            return Err(WidthError::Overlap);
        }
        if ccw(b, c) == 0.0 || ccw(d, a) == 0.0 {
            return Err(WidthError::Adjacent);
        }
        Ok(())
    }

    /// The four vertices `a, b, c, d` in counterclockwise order.
    pub fn points(&self) -> [f64; 4] {
        [self.i.start, self.i.end, self.j.start, self.j.end]
    }

    /// Quadrilateral with horizontal and vertical sides exchanged.
    pub fn dual(&self) -> Quadrilateral {
        let [a, b, c, d] = self.points();
        Quadrilateral {
            i: CircleArc { start: b, end: c },
            j: CircleArc { start: d, end: a },
        }
    }
}

fn chord(s: f64, t: f64) -> f64 {
    2.0 * (PI * (s - t)).sin().abs()
}

/// Width of the family joining `[a, b]` to `[c, d]` for counterclockwise vertices.
///
/// Returns `+∞` when the horizontal sides touch.
pub fn width_of_points(a: f64, b: f64, c: f64, d: f64) -> f64 {
    let (bc, da) = (chord(b, c), chord(d, a));
    if bc == 0.0 || da == 0.0 {
        return f64::INFINITY;
    }
    let (ab, cd) = (chord(a, b), chord(c, d));
    let (ac, bd) = (chord(a, c), chord(b, d));
    let denom = ac * bd;
    let eta = bc * da / denom;
    let eta_dual = ab * cd / denom;
    let s = eta.sqrt();
    // 1 - s computed from the dual cross-ratio keeps precision when eta is near 1.
    let one_minus_s = eta_dual / (1.0 + s);
    let k = one_minus_s / (1.0 + s);
    let kp = 2.0 * s.sqrt() / (1.0 + s);
    2.0 * agm(1.0, k) / agm(1.0, kp)
}

/// Conformal width `W̄` of the quadrilateral.
pub fn quad_width_exact(q: &Quadrilateral) -> Result<f64, WidthError> {
    q.validate()?;
    let [a, b, c, d] = q.points();
    Ok(width_of_points(a, b, c, d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypdisk::MobiusMap;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn arc(s: f64, e: f64) -> CircleArc {
        CircleArc::new(s, e).unwrap()
    }

    fn random_quad(rng: &mut ChaCha8Rng) -> Quadrilateral {
        let mut p: Vec<f64> = (0..4).map(|_| rng.random::<f64>()).collect();
        p.sort_by(|x, y| x.partial_cmp(y).unwrap());
        Quadrilateral::new(arc(p[0], p[1]), arc(p[2], p[3])).unwrap()
    }

    #[test]
    fn symmetric_calibration() {
        let q = Quadrilateral::new(arc(0.0, 0.25), arc(0.5, 0.75)).unwrap();
        assert!((quad_width_exact(&q).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn golden_values() {
        let q = Quadrilateral::new(arc(0.0, 0.125), arc(0.25, 0.375)).unwrap();
        assert!((quad_width_exact(&q).unwrap() - 0.819_644_188_480_507).abs() < 1e-12);
        let q = Quadrilateral::new(arc(0.0, 0.01), arc(0.5, 0.51)).unwrap();
        assert!((quad_width_exact(&q).unwrap() - 0.324_099_233_128_325_6).abs() < 1e-12);
    }

    #[test]
    fn adjacency_rejected() {
        assert_eq!(
            Quadrilateral::new(arc(0.0, 0.25), arc(0.25, 0.5)),
            Err(WidthError::Adjacent)
        );
        assert_eq!(
            Quadrilateral::new(arc(0.0, 0.3), arc(0.2, 0.5)),
            Err(WidthError::Overlap)
        );
        assert!(width_of_points(0.0, 0.25, 0.25, 0.5).is_infinite());
    }

    #[test]
    fn duality() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..1000 {
            let q = random_quad(&mut rng);
            let w = quad_width_exact(&q).unwrap() * quad_width_exact(&q.dual()).unwrap();
            assert!((w - 1.0).abs() < 1e-9, "{q:?} {w}");
        }
    }

    #[test]
    fn mobius_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for _ in 0..500 {
            let q = random_quad(&mut rng);
            let m = MobiusMap::random(&mut rng, 0.6);
            let p = q.points().map(|t| {
                crate::hypdisk::turns_of(m.apply(crate::hypdisk::unit(t)))
            });
            let w0 = quad_width_exact(&q).unwrap();
            let w1 = width_of_points(p[0], p[1], p[2], p[3]);
            assert!((w0 - w1).abs() < 1e-9 * w0.max(1.0), "{w0} {w1}");
        }
    }

    #[test]
    fn shrinking_a_side_decreases_width() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..500 {
            let q = random_quad(&mut rng);
            let w = quad_width_exact(&q).unwrap();
            let f = rng.random::<f64>();
            let shrunk = arc(q.i.start + f * q.i.length() * 0.5, q.i.end);
            let w2 = quad_width_exact(&Quadrilateral::new(shrunk, q.j).unwrap()).unwrap();
            assert!(w2 <= w + 1e-12);
        }
    }
}
