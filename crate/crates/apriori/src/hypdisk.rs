//! Hyperbolic geometry of the Poincaré disk.
//!
//! Angles on the unit circle are stored in turns (one full revolution is 1.0)
//! and converted to radians only at trigonometric call sites.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

/// Euclidean radius of a geodesic circle above which it is treated as a diameter.
const DIAMETER_CUTOFF: f64 = 1e8;

/// Smallest angular separation (turns) accepted between geodesic endpoints.
const MIN_SEPARATION: f64 = 1e-15;

/// Angular tolerance (turns) for geodesics sharing an ideal endpoint.
const SHARED_ENDPOINT: f64 = 1e-12;

/// Errors raised by disk geometry.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("point ({re}, {im}) is not strictly inside the unit disk")]
    OutsideDisk { re: f64, im: f64 },
    #[error("geodesic endpoints coincide at angle {0}")]
    DegenerateEndpoints(f64),
    #[error("geodesics cross inside the disk")]
    Crossing,
    #[error("an ideal polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("matrix does not preserve the unit disk (residual {0:e})")]
    NotDiskPreserving(f64),
}

/// Reduces an angle in turns to `[0, 1)`.
pub fn normalize_turns(t: f64) -> f64 {
    let r = t.rem_euclid(1.0);
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

/// Point of the unit circle at angle `t` turns.
pub fn unit(t: f64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * t)
}

/// Angle in turns of a nonzero complex number.
pub fn turns_of(z: Complex64) -> f64 {
    normalize_turns(z.arg() / (2.0 * PI))
}

/// Counterclockwise distance in turns from `a` to `b`, in `[0, 1)`.
pub fn ccw(a: f64, b: f64) -> f64 {
    normalize_turns(b - a)
}

/// Point of the open unit disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiskPoint {
    pub re: f64,
    pub im: f64,
}

impl DiskPoint {
    /// Validated constructor.
    pub fn new(re: f64, im: f64) -> Result<Self, GeomError> {
        if !(re * re + im * im < 1.0) {
            return Err(GeomError::OutsideDisk { re, im });
        }
        Ok(Self { re, im })
    }

    pub fn from_complex(z: Complex64) -> Result<Self, GeomError> {
        Self::new(z.re, z.im)
    }

    pub fn origin() -> Self {
        Self { re: 0.0, im: 0.0 }
    }

    pub fn z(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

/// Point of the ideal boundary, stored as an angle in turns.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct IdealPoint {
    pub angle: f64,
}

impl IdealPoint {
    pub fn new(angle: f64) -> Self {
        Self {
            angle: normalize_turns(angle),
        }
    }

    pub fn z(&self) -> Complex64 {
        unit(self.angle)
    }
}

/// Euclidean realization of a geodesic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GeodesicRepr {
    /// Circle orthogonal to the unit circle.
    Circle { center: Complex64, radius: f64 },
    /// Straight diameter.
    Diameter,
}

/// Hyperbolic geodesic with ideal endpoints `a` and `b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geodesic {
    pub a: IdealPoint,
    pub b: IdealPoint,
    pub repr: GeodesicRepr,
}

impl Geodesic {
    /// Midpoint angle (turns) and half the angular separation (radians) of the endpoints.
    fn chord_data(&self) -> (f64, f64) {
        let delta = ccw(self.a.angle, self.b.angle);
        (self.a.angle + delta / 2.0, PI * delta)
    }

    /// `|c|^2 - r^2 - 1` for circles, zero for diameters.
    pub fn orthogonality_residual(&self) -> f64 {
        match self.repr {
            GeodesicRepr::Circle { center, radius } => center.norm_sqr() - radius * radius - 1.0,
            GeodesicRepr::Diameter => 0.0,
        }
    }

    /// Euclidean residual of `z` against the geodesic curve.
    pub fn curve_residual(&self, z: Complex64) -> f64 {
        match self.repr {
            GeodesicRepr::Circle { center, radius } => ((z - center).norm() - radius).abs(),
            GeodesicRepr::Diameter => {
                let d = self.a.z();
                (z * d.conj()).im.abs()
            }
        }
    }

    /// Same unordered endpoint pair.
    pub fn same_as(&self, other: &Geodesic, tol: f64) -> bool {
        let close = |x: f64, y: f64| {
            let d = ccw(x, y);
            d < tol || 1.0 - d < tol
        };
        (close(self.a.angle, other.a.angle) && close(self.b.angle, other.b.angle))
            || (close(self.a.angle, other.b.angle) && close(self.b.angle, other.a.angle))
    }

    /// True when the two geodesics meet inside the disk.
    pub fn crosses(&self, other: &Geodesic) -> bool {
        let x = ccw(self.a.angle, other.a.angle);
        let y = ccw(self.a.angle, other.b.angle);
        let s = ccw(self.a.angle, self.b.angle);
        let strictly_in = |t: f64| t > 0.0 && t < s;
        let strictly_out = |t: f64| t > s;
        (strictly_in(x) && strictly_out(y)) || (strictly_out(x) && strictly_in(y))
    }
}

/// Geodesic joining two ideal points.
pub fn geodesic_between(a: IdealPoint, b: IdealPoint) -> Result<Geodesic, GeomError> {
    let delta = ccw(a.angle, b.angle);
    if delta < MIN_SEPARATION || 1.0 - delta < MIN_SEPARATION {
        return Err(GeomError::DegenerateEndpoints(a.angle));
    }
    let h = PI * delta;
    let mid = a.angle + delta / 2.0;
    let c = h.cos();
    let repr = if c.abs() < 1.0 / DIAMETER_CUTOFF {
        GeodesicRepr::Diameter
    } else {
        GeodesicRepr::Circle {
            center: unit(mid) / c,
            radius: (h.sin() / c).abs(),
        }
    };
    Ok(Geodesic { a, b, repr })
}

/// Disk-preserving Möbius transformation `z -> (a z + b) / (c z + d)` with unit determinant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobiusMap {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl MobiusMap {
    pub fn identity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        Self {
            a: one,
            b: zero,
            c: zero,
            d: one,
        }
    }

    /// Rotation by `t` turns.
    pub fn rotation(t: f64) -> Self {
        let e = Complex64::from_polar(1.0, PI * t);
        Self {
            a: e,
            b: Complex64::new(0.0, 0.0),
            c: Complex64::new(0.0, 0.0),
            d: e.conj(),
        }
    }

    /// The map `z -> (z - w) / (1 - conj(w) z)`, sending `w` to the origin.
    pub fn translation(w: DiskPoint) -> Self {
        let w = w.z();
        let s = 1.0 / (1.0 - w.norm_sqr()).sqrt();
        Self {
            a: Complex64::new(s, 0.0),
            b: -w * s,
            c: -w.conj() * s,
            d: Complex64::new(s, 0.0),
        }
    }

    /// Validated constructor from a matrix of the form `[[x, y], [conj y, conj x]]` up to scale.
    pub fn from_matrix(
        a: Complex64,
        b: Complex64,
        c: Complex64,
        d: Complex64,
    ) -> Result<Self, GeomError> {
        let det = a * d - b * c;
        if det.norm() < 1e-300 {
            return Err(GeomError::NotDiskPreserving(f64::INFINITY));
        }
        let s = det.sqrt();
        let (a, b, c, d) = (a / s, b / s, c / s, d / s);
        let plus = (c - b.conj()).norm() + (d - a.conj()).norm();
        let minus = (c + b.conj()).norm() + (d + a.conj()).norm();
        let res = plus.min(minus);
        let scale = a.norm().max(b.norm()).max(1.0);
        if res > 1e-9 * scale || a.norm_sqr() - b.norm_sqr() <= 0.0 {
            return Err(GeomError::NotDiskPreserving(res));
        }
        Ok(Self { a, b, c, d })
    }

    /// Random disk automorphism with `|M(0)| <= rmax`.
    pub fn random<R: Rng>(rng: &mut R, rmax: f64) -> Self {
        let r = rmax * rng.random::<f64>().sqrt();
        let t = rng.random::<f64>();
        let w = DiskPoint {
            re: r * (2.0 * PI * t).cos(),
            im: r * (2.0 * PI * t).sin(),
        };
        Self::translation(w).compose(&Self::rotation(rng.random::<f64>()))
    }

    pub fn det(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    pub fn apply(&self, z: Complex64) -> Complex64 {
        (self.a * z + self.b) / (self.c * z + self.d)
    }

    pub fn apply_point(&self, z: DiskPoint) -> DiskPoint {
        let w = self.apply(z.z());
        DiskPoint { re: w.re, im: w.im }
    }

    pub fn apply_ideal(&self, p: IdealPoint) -> IdealPoint {
        IdealPoint::new(turns_of(self.apply(p.z())))
    }

    /// Image geodesic.
    pub fn apply_geodesic(&self, g: &Geodesic) -> Geodesic {
        geodesic_between(self.apply_ideal(g.a), self.apply_ideal(g.b))
            .expect("automorphisms keep endpoints distinct")
    }

    /// `self ∘ other`.
    pub fn compose(&self, o: &MobiusMap) -> MobiusMap {
        MobiusMap {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    pub fn inverse(&self) -> MobiusMap {
        MobiusMap {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }
}

/// Hyperbolic distance (curvature −1).
pub fn hyp_dist(z: DiskPoint, w: DiskPoint) -> f64 {
    let (z, w) = (z.z(), w.z());
    let num = (z - w).norm();
    let den = ((1.0 - z.norm_sqr()) * (1.0 - w.norm_sqr())).sqrt();
    2.0 * (num / den).asinh()
}

/// Automorphism sending `g` onto the real diameter with `g.a -> -1` and `g.b -> 1`.
pub fn normalizer(g: &Geodesic) -> MobiusMap {
    let (mid, h) = g.chord_data();
    let x0 = h.cos() / (1.0 + h.sin());
    let rot = MobiusMap::rotation(-mid);
    let tr = MobiusMap::translation(DiskPoint { re: x0, im: 0.0 });
    MobiusMap::rotation(-0.25).compose(&tr).compose(&rot)
}

/// Hyperbolic distance from a point to a geodesic.
pub fn dist_point_geodesic(z: DiskPoint, g: &Geodesic) -> f64 {
    let w = normalizer(g).apply(z.z());
    (2.0 * w.im.abs() / (1.0 - w.norm_sqr())).asinh()
}

/// Sub-segment of a geodesic in signed arclength coordinates.
///
/// The parameter `t` runs along `g1` from `a` to `b`, with `t = 0` at the point
/// sent to the origin by [`normalizer`]. Infinite ends are ideal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NearSegment {
    pub t0: f64,
    pub t1: f64,
    pub length: f64,
}

impl NearSegment {
    pub fn empty() -> Self {
        Self {
            t0: 0.0,
            t1: 0.0,
            length: 0.0,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.length == 0.0
    }
}

/// Point of `g` at arclength parameter `t` (see [`NearSegment`]).
pub fn point_at(g: &Geodesic, t: f64) -> DiskPoint {
    let x = (t / 2.0).tanh();
    let z = normalizer(g).inverse().apply(Complex64::new(x, 0.0));
    DiskPoint { re: z.re, im: z.im }
}

fn arclength(x: f64) -> f64 {
    if x <= -1.0 {
        f64::NEG_INFINITY
    } else if x >= 1.0 {
        f64::INFINITY
    } else {
        2.0 * x.atanh()
    }
}

/// The part of `g1` within hyperbolic distance `eps` of `g2`, with its length.
pub fn near_segment(g1: &Geodesic, g2: &Geodesic, eps: f64) -> Result<NearSegment, GeomError> {
    if g1.crosses(g2) || g1.same_as(g2, 1e-14) {
        return Err(GeomError::Crossing);
    }
    let n = normalizer(g1);
    let u = n.apply(g2.a.z());
    let v = n.apply(g2.b.z());
    let (ta, tb) = (turns_of(u), turns_of(v));
    let delta = ccw(ta, tb);
    let m = 2.0 * PI * (ta + delta / 2.0);
    let h = PI * delta;
    let (c, s_h) = (h.cos(), h.sin());
    let s = eps.sinh();
    // Signed so that the quadratic form is positive on the real diameter.
    let sigma = if c >= 0.0 { 1.0 } else { -1.0 };
    let qa = sigma * c + s * s_h;
    let qb = -2.0 * sigma * m.cos();
    let qc = sigma * c - s * s_h;
    let shares = |p: &IdealPoint| {
        [g2.a, g2.b].iter().any(|q| {
            let d = ccw(p.angle, q.angle);
            d < SHARED_ENDPOINT || 1.0 - d < SHARED_ENDPOINT
        })
    };
    let (cusp_a, cusp_b) = (shares(&g1.a), shares(&g1.b));
    let disc = qb * qb - 4.0 * qa * qc;
    let roots = (disc > 0.0).then(|| {
        let sq = disc.sqrt();
        let q = if qb >= 0.0 { -0.5 * (qb + sq) } else { -0.5 * (qb - sq) };
        let (r1, r2) = (q / qa, qc / q);
        (r1.min(r2).max(-1.0), r1.max(r2).min(1.0))
    });
    if !cusp_a && !cusp_b {
        return Ok(match roots {
            Some((lo, hi)) if lo < hi => {
                let (t0, t1) = (arclength(lo), arclength(hi));
                NearSegment {
                    t0,
                    t1,
                    length: t1 - t0,
                }
            }
            _ => NearSegment::empty(),
        });
    }
    let (lo, hi) = roots.unwrap_or((0.0, 0.0));
    let t0 = if cusp_a { f64::NEG_INFINITY } else { arclength(lo) };
    let t1 = if cusp_b { f64::INFINITY } else { arclength(hi) };
    Ok(NearSegment {
        t0,
        t1,
        length: f64::INFINITY,
    })
}

/// Hyperbolic area of an ideal `p`-gon.
pub fn ideal_polygon_area(p: usize) -> Result<f64, GeomError> {
    if p < 3 {
        return Err(GeomError::TooFewVertices(p));
    }
    Ok(PI * (p as f64 - 2.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rand_point(rng: &mut ChaCha8Rng, rmax: f64) -> DiskPoint {
        let r = rmax * rng.random::<f64>().sqrt();
        let t = rng.random::<f64>();
        DiskPoint::new(r * (2.0 * PI * t).cos(), r * (2.0 * PI * t).sin()).unwrap()
    }

    #[test]
    fn distance_examples() {
        let o = DiskPoint::origin();
        assert_eq!(hyp_dist(o, o), 0.0);
        let h = DiskPoint::new(0.5, 0.0).unwrap();
        assert!((hyp_dist(o, h) - 3f64.ln()).abs() < 1e-14);
        assert!(DiskPoint::new(1.0, 0.0).is_err());
    }

    #[test]
    fn distance_symmetric_and_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let z = rand_point(&mut rng, 0.95);
            let w = rand_point(&mut rng, 0.95);
            let m = MobiusMap::random(&mut rng, 0.8);
            let d = hyp_dist(z, w);
            assert!((d - hyp_dist(w, z)).abs() < 1e-12);
            let dm = hyp_dist(m.apply_point(z), m.apply_point(w));
            assert!((d - dm).abs() < 1e-9 * d.max(1.0));
        }
    }

    #[test]
    fn triangle_inequality() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..500 {
            let (x, y, z) = (
                rand_point(&mut rng, 0.99),
                rand_point(&mut rng, 0.99),
                rand_point(&mut rng, 0.99),
            );
            assert!(hyp_dist(x, y) + hyp_dist(y, z) - hyp_dist(x, z) >= -1e-12);
        }
    }

    #[test]
    fn geodesic_examples() {
        let g = geodesic_between(IdealPoint::new(0.0), IdealPoint::new(0.5)).unwrap();
        assert_eq!(g.repr, GeodesicRepr::Diameter);
        let g = geodesic_between(IdealPoint::new(0.0), IdealPoint::new(0.25)).unwrap();
        assert!(g.orthogonality_residual().abs() < 1e-12);
        match g.repr {
            GeodesicRepr::Circle { center, radius } => {
                assert!((center - Complex64::new(1.0, 1.0)).norm() < 1e-12);
                assert!((radius - 1.0).abs() < 1e-12);
            }
            GeodesicRepr::Diameter => panic!("expected a circle"),
        }
        let r = geodesic_between(IdealPoint::new(0.25), IdealPoint::new(0.0)).unwrap();
        assert!(g.same_as(&r, 1e-14));
        match (g.repr, r.repr) {
            (
                GeodesicRepr::Circle { center: c1, radius: r1 },
                GeodesicRepr::Circle { center: c2, radius: r2 },
            ) => assert!((c1 - c2).norm() < 1e-12 && (r1 - r2).abs() < 1e-12),
            _ => panic!("expected circles"),
        }
        assert!(geodesic_between(IdealPoint::new(0.3), IdealPoint::new(0.3)).is_err());
    }

    #[test]
    fn normalizer_sends_endpoints_to_real_diameter() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..200 {
            let a = IdealPoint::new(rng.random());
            let b = IdealPoint::new(rng.random());
            if ccw(a.angle, b.angle) < 1e-3 || ccw(b.angle, a.angle) < 1e-3 {
                continue;
            }
            let g = geodesic_between(a, b).unwrap();
            let n = normalizer(&g);
            assert!((n.apply(a.z()) + 1.0).norm() < 1e-9);
            assert!((n.apply(b.z()) - 1.0).norm() < 1e-9);
            let p = point_at(&g, rng.random::<f64>() * 4.0 - 2.0);
            assert!(g.curve_residual(p.z()) < 1e-9);
        }
    }

    #[test]
    fn point_geodesic_distance_matches_sampling() {
        let g = geodesic_between(IdealPoint::new(0.0), IdealPoint::new(0.5)).unwrap();
        let z = DiskPoint::new(0.0, 0.3).unwrap();
        let exact = dist_point_geodesic(z, &g);
        let sampled = (-4000..=4000)
            .map(|k| hyp_dist(z, point_at(&g, k as f64 * 1e-3)))
            .fold(f64::INFINITY, f64::min);
        assert!((exact - sampled).abs() < 1e-6);
        assert!((exact - (2.0 * 0.3 / (1.0 - 0.09f64)).asinh()).abs() < 1e-12);
        assert!(dist_point_geodesic(point_at(&g, 0.7), &g) < 1e-12);
    }

    #[test]
    fn point_geodesic_distance_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..200 {
            let g = geodesic_between(IdealPoint::new(0.1), IdealPoint::new(0.45)).unwrap();
            let z = rand_point(&mut rng, 0.9);
            let m = MobiusMap::random(&mut rng, 0.7);
            let d0 = dist_point_geodesic(z, &g);
            let d1 = dist_point_geodesic(m.apply_point(z), &m.apply_geodesic(&g));
            assert!((d0 - d1).abs() < 1e-8);
        }
    }

    fn symmetric_pair() -> (Geodesic, Geodesic) {
        (
            geodesic_between(IdealPoint::new(0.0), IdealPoint::new(0.25)).unwrap(),
            geodesic_between(IdealPoint::new(0.5), IdealPoint::new(0.75)).unwrap(),
        )
    }

    #[test]
    fn near_segment_symmetric_golden() {
        let (g1, g2) = symmetric_pair();
        assert!(near_segment(&g1, &g2, 1.0).unwrap().is_empty());
        let s = near_segment(&g1, &g2, 2.0).unwrap();
        assert!(s.length > 0.0 && s.length.is_finite());
        assert!((s.length - 1.469_489_474_189_094).abs() < 1e-9, "{}", s.length);
        let lo = dist_point_geodesic(point_at(&g1, s.t0), &g2);
        let hi = dist_point_geodesic(point_at(&g1, s.t1), &g2);
        assert!((lo - 2.0).abs() < 1e-9 && (hi - 2.0).abs() < 1e-9);
    }

    #[test]
    fn near_segment_far_and_monotone() {
        let g1 = geodesic_between(IdealPoint::new(0.0), IdealPoint::new(0.05)).unwrap();
        let g2 = geodesic_between(IdealPoint::new(0.5), IdealPoint::new(0.55)).unwrap();
        assert!(near_segment(&g1, &g2, 0.5).unwrap().is_empty());
        let (g1, g2) = symmetric_pair();
        let mut prev = 0.0;
        for k in 1..40 {
            let l = near_segment(&g1, &g2, 0.1 * k as f64).unwrap().length;
            assert!(l >= prev);
            prev = l;
        }
    }

    #[test]
    fn near_segment_shared_endpoint_is_infinite() {
        let g1 = geodesic_between(IdealPoint::new(0.0), IdealPoint::new(0.25)).unwrap();
        let g2 = geodesic_between(IdealPoint::new(0.25), IdealPoint::new(0.5)).unwrap();
        let s = near_segment(&g1, &g2, 0.5).unwrap();
        assert!(s.length.is_infinite());
    }

    #[test]
    fn near_segment_rejects_crossing() {
        let g1 = geodesic_between(IdealPoint::new(0.0), IdealPoint::new(0.5)).unwrap();
        let g2 = geodesic_between(IdealPoint::new(0.25), IdealPoint::new(0.75)).unwrap();
        assert_eq!(near_segment(&g1, &g2, 1.0), Err(GeomError::Crossing));
    }

    #[test]
    fn near_segment_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let (g1, g2) = symmetric_pair();
        let l0 = near_segment(&g1, &g2, 0.8).unwrap().length;
        for _ in 0..100 {
            let m = MobiusMap::random(&mut rng, 0.7);
            let l1 = near_segment(&m.apply_geodesic(&g1), &m.apply_geodesic(&g2), 0.8)
                .unwrap()
                .length;
            assert!((l0 - l1).abs() < 1e-8);
        }
    }

    #[test]
    fn polygon_area() {
        assert!((ideal_polygon_area(3).unwrap() - PI).abs() < 1e-15);
        assert!((ideal_polygon_area(4).unwrap() - 2.0 * PI).abs() < 1e-15);
        assert!(ideal_polygon_area(2).is_err());
    }

    /// Area of an ideal triangle containing the origin, integrated in polar coordinates.
    fn triangle_area_quadrature(v: [f64; 3]) -> f64 {
        let mut v = v;
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let sides: Vec<Geodesic> = (0..3)
            .map(|k| {
                geodesic_between(IdealPoint::new(v[k]), IdealPoint::new(v[(k + 1) % 3])).unwrap()
            })
            .collect();
        let rho = |phi: f64| {
            let e = unit(phi);
            sides
                .iter()
                .filter_map(|g| match g.repr {
                    GeodesicRepr::Circle { center, .. } => {
                        let p = (center * e.conj()).re;
                        (p >= 1.0).then(|| p - (p * p - 1.0).sqrt())
                    }
                    GeodesicRepr::Diameter => None,
                })
                .fold(1.0, f64::min)
        };
        let mut total = 0.0;
        let n = 4000;
        for k in 0..3 {
            let (lo, hi) = (v[k], if k == 2 { v[0] + 1.0 } else { v[k + 1] });
            // Cosine substitution absorbs the cusp singularities at both ends.
            for i in 0..n {
                let u = PI * (i as f64 + 0.5) / n as f64;
                let phi = lo + (hi - lo) * (1.0 - u.cos()) / 2.0;
                let dphi = 2.0 * PI * (hi - lo) * u.sin() / 2.0 * PI / n as f64;
                let r = rho(phi);
                total += 2.0 * r * r / (1.0 - r * r) * dphi;
            }
        }
        total
    }

    #[test]
    fn polygon_area_quadrature_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let mut done = 0;
        while done < 5 {
            let mut v = [rng.random::<f64>(), rng.random::<f64>(), rng.random::<f64>()];
            v.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let gaps = [v[1] - v[0], v[2] - v[1], 1.0 + v[0] - v[2]];
            if gaps.iter().any(|&g| g >= 0.5 || g < 0.05) {
                continue;
            }
            let area = triangle_area_quadrature(v);
            let exact = ideal_polygon_area(3).unwrap();
            assert!((area - exact).abs() / exact < 1e-3, "{area}");
            done += 1;
        }
    }
}
