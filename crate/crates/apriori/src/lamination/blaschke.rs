//! Finite Blaschke products and pullbacks of markings along their boundary covering.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::marking::IdealMarking;
use super::LaminationError;
use crate::hypdisk::{normalize_turns, unit, DiskPoint, IdealPoint};
use crate::widths::CircleArc;

/// Zeros must satisfy `|a| ≤ 1 − ZERO_MARGIN`.
pub const ZERO_MARGIN: f64 = 1e-9;

/// Bisection steps for boundary preimages.
const BISECTION_STEPS: usize = 200;

/// `B(z) = e^{2πi·rotation} Π (z − a_k) / (1 − ā_k z)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlaschkeMap {
    pub zeros: Vec<DiskPoint>,
    pub rotation: IdealPoint,
}

impl BlaschkeMap {
    pub fn new(zeros: Vec<DiskPoint>, rotation: IdealPoint) -> Result<Self, LaminationError> {
        let b = Self { zeros, rotation };
        b.validate()?;
        Ok(b)
    }

    pub fn identity() -> Self {
        Self {
            zeros: vec![DiskPoint::origin()],
            rotation: IdealPoint::new(0.0),
        }
    }

    /// `z ↦ z^d`.
    pub fn power(d: usize) -> Result<Self, LaminationError> {
        Self::new(vec![DiskPoint::origin(); d], IdealPoint::new(0.0))
    }

    /// Random product of degree `d` with zeros in `|a| ≤ rmax`.
    pub fn random<R: Rng>(rng: &mut R, d: usize, rmax: f64) -> Self {
        let zeros = (0..d)
            .map(|_| {
                let r = rmax * rng.random::<f64>().sqrt();
                let t = rng.random::<f64>();
                let z = r * unit(t);
                DiskPoint { re: z.re, im: z.im }
            })
            .collect();
        Self::new(zeros, IdealPoint::new(rng.random::<f64>())).expect("zeros inside the disk")
    }

    pub fn validate(&self) -> Result<(), LaminationError> {
        if self.zeros.is_empty() {
            return Err(LaminationError::Blaschke("no zeros".into()));
        }
        if let Some(z) = self.zeros.iter().find(|z| !(z.z().norm() <= 1.0 - ZERO_MARGIN)) {
            return Err(LaminationError::Blaschke(format!(
                "zero {:?} not strictly inside the disk",
                z
            )));
        }
        Ok(())
    }

    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    pub fn apply(&self, z: Complex64) -> Complex64 {
        let mut w = unit(self.rotation.angle);
        for a in &self.zeros {
            let a = a.z();
            w *= (z - a) / (Complex64::new(1.0, 0.0) - a.conj() * z);
        }
        w
    }

    /// Continuous lift of the boundary map in turns: `L(θ + 1) = L(θ) + d`.
    pub fn boundary_lift(&self, theta: f64) -> f64 {
        let e = unit(-theta);
        let mut l = self.degree() as f64 * theta + self.rotation.angle;
        for a in &self.zeros {
            let w = Complex64::new(1.0, 0.0) - a.z() * e;
            l += w.im.atan2(w.re) / PI;
        }
        l
    }

    /// Boundary value `B(e^{2πiθ})` in turns.
    pub fn boundary_turns(&self, theta: f64) -> f64 {
        normalize_turns(self.boundary_lift(theta))
    }

    /// The `d` preimages of the boundary point `t`, sorted in `[0, 1)`.
    pub fn boundary_preimages(&self, t: f64) -> Vec<f64> {
        let d = self.degree();
        let l0 = self.boundary_lift(0.0);
        // Least target value t + j at or above l0.
        let first = t + (l0 - t).ceil();
        (0..d)
            .map(|j| {
                let target = first + j as f64;
                let (mut lo, mut hi) = (0.0, 1.0);
                for _ in 0..BISECTION_STEPS {
                    let mid = 0.5 * (lo + hi);
                    if mid == lo || mid == hi {
                        break;
                    }
                    if self.boundary_lift(mid) < target {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                let x = if (self.boundary_lift(hi) - target).abs() < (self.boundary_lift(lo) - target).abs() {
                    hi
                } else {
                    lo
                };
                normalize_turns(x)
            })
            .collect()
    }
}

/// Pulled-back marking with labels `(n, sheet)` in circle order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PulledBackMarking {
    pub marking: IdealMarking,
    /// Label `(n, sheet)` of each source interval: it maps onto `I_n`.
    pub labels: Vec<(usize, usize)>,
    pub degree: usize,
}

fn preimage_table(b: &BlaschkeMap, points: &[f64]) -> Vec<Vec<f64>> {
    points.iter().map(|&t| b.boundary_preimages(t)).collect()
}

/// Full preimage of a marking under the boundary covering of `b`.
pub fn pullback_marking(b: &BlaschkeMap, m: &IdealMarking) -> Result<PulledBackMarking, LaminationError> {
    b.validate()?;
    let d = b.degree();
    // Shared endpoints get identical preimages so touching intervals stay touching.
    let mut pts: Vec<f64> = Vec::new();
    let index = |pts: &mut Vec<f64>, x: f64| {
        if let Some(i) = pts.iter().position(|&y| y == x) {
            i
        } else {
            pts.push(x);
            pts.len() - 1
        }
    };
    let ends: Vec<(usize, usize)> = m
        .intervals()
        .iter()
        .map(|a| (index(&mut pts, a.start), index(&mut pts, a.end)))
        .collect();
    let table = preimage_table(b, &pts);
    let mut arcs: Vec<(f64, CircleArc, (usize, usize))> = Vec::new();
    for (n, &(si, ei)) in ends.iter().enumerate() {
        let len = m.intervals()[n].length();
        for (sheet, &s) in table[si].iter().enumerate() {
            // The end preimage on this sheet is the first one after s.
            let e = table[ei]
                .iter()
                .copied()
                .min_by(|x, y| crate::hypdisk::ccw(s, *x).total_cmp(&crate::hypdisk::ccw(s, *y)))
                .expect("degree at least one");
            let img = b.boundary_lift(s) + len;
            if (b.boundary_lift(s + crate::hypdisk::ccw(s, e)) - img).abs() > 1e-6 {
                return Err(LaminationError::RootFinding(m.intervals()[n].start));
            }
            arcs.push((s, CircleArc::new(s, e)?, (n, sheet)));
        }
    }
    arcs.sort_by(|x, y| x.0.total_cmp(&y.0));
    let labels = arcs.iter().map(|a| a.2).collect();
    let marking = IdealMarking::new(arcs.into_iter().map(|a| a.1).collect())?;
    Ok(PulledBackMarking {
        marking,
        labels,
        degree: d,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn lift_is_monotone_and_periodic() {
        let mut rng = ChaCha8Rng::seed_from_u64(51);
        for _ in 0..50 {
            let d = rng.random_range(1..5);
            let b = BlaschkeMap::random(&mut rng, d, 0.9);
            let l0 = b.boundary_lift(0.0);
            assert!((b.boundary_lift(1.0) - l0 - d as f64).abs() < 1e-12);
            let mut prev = l0;
            for k in 1..=1000 {
                let l = b.boundary_lift(k as f64 / 1000.0);
                assert!(l > prev);
                prev = l;
            }
            // The lift agrees with the value of the product on the circle.
            for k in 0..20 {
                let th = k as f64 / 20.0;
                let w = b.apply(unit(th));
                assert!((w.norm() - 1.0).abs() < 1e-12);
                let diff = normalize_turns(crate::hypdisk::turns_of(w) - b.boundary_turns(th));
                assert!(diff.min(1.0 - diff) < 1e-12);
            }
        }
    }

    #[test]
    fn preimages_map_back() {
        let mut rng = ChaCha8Rng::seed_from_u64(52);
        for _ in 0..50 {
            let b = BlaschkeMap::random(&mut rng, 3, 0.95);
            let t = rng.random::<f64>();
            let pre = b.boundary_preimages(t);
            assert_eq!(pre.len(), 3);
            for x in pre {
                let diff = normalize_turns(b.boundary_turns(x) - t);
                assert!(diff.min(1.0 - diff) < 1e-12);
            }
        }
    }

    #[test]
    fn squaring_doubles_symmetric_marking() {
        let m = IdealMarking::symmetric(4, 0.05).unwrap();
        let pb = pullback_marking(&BlaschkeMap::power(2).unwrap(), &m).unwrap();
        let expect = IdealMarking::symmetric(8, 0.025).unwrap();
        assert_eq!(pb.marking.p(), 8);
        for (a, e) in pb.marking.intervals().iter().zip(expect.intervals()) {
            assert!((a.start - e.start).abs() < 1e-12 && (a.end - e.end).abs() < 1e-12);
        }
        assert_eq!(pb.labels[0], (0, 0));
        assert_eq!(pb.labels[4], (0, 1));
    }

    #[test]
    fn identity_preserves_marking() {
        let m = IdealMarking::from_cuts(&[0.1, 0.3, 0.45, 0.8]).unwrap();
        let pb = pullback_marking(&BlaschkeMap::identity(), &m).unwrap();
        for (a, e) in pb.marking.intervals().iter().zip(m.intervals()) {
            assert!((a.start - e.start).abs() < 1e-12 && (a.end - e.end).abs() < 1e-12);
        }
        assert!(pb.marking.is_full());
    }

    #[test]
    fn rejects_zero_on_circle() {
        let z = DiskPoint { re: 1.0, im: 0.0 };
        assert!(BlaschkeMap::new(vec![z], IdealPoint::new(0.0)).is_err());
        assert!(BlaschkeMap::new(vec![], IdealPoint::new(0.0)).is_err());
    }
}
