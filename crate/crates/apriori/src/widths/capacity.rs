//! Condenser capacity between two unions of boundary arcs.
//!
//! The potential `u` is harmonic in the disk, equal to 0 on `E0` and 1 on `E1`,
//! with vanishing normal derivative on the rest of the circle. On the circle
//!
//! ```text
//! u(θ) = c − (1/π) ∫ g(φ) log|2 sin((θ − φ)/2)| dφ,
//! ```
//!
//! where `g = ∂u/∂n` is supported on the plates and has zero total mass. On
//! each arc `g` is expanded in weighted Chebyshev polynomials
//! `T_n(s) / sqrt(1 − s²)`, which carry the square-root endpoint singularity
//! exactly. Collocation at Chebyshev nodes gives a dense linear system. The
//! width of the connecting family is the Dirichlet energy `∫_{E1} g`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::{CircleArc, WidthError};
use crate::hypdisk::{turns_of, unit, DiskPoint, MobiusMap};

/// Supported range of nodes per arc.
pub const MIN_RESOLUTION: usize = 16;
pub const MAX_RESOLUTION: usize = 2048;

/// Largest accepted collocation residual.
const RESIDUAL_LIMIT: f64 = 1e-8;

/// Iteration cap of the conformal barycenter normalization.
const BARYCENTER_ITER: usize = 60;

/// Two disjoint plates on the unit circle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryCondenser {
    pub e0: Vec<CircleArc>,
    pub e1: Vec<CircleArc>,
}

impl BoundaryCondenser {
    /// Validated constructor: nonempty plates with pairwise disjoint closed arcs.
    pub fn new(e0: Vec<CircleArc>, e1: Vec<CircleArc>) -> Result<Self, WidthError> {
        let c = Self { e0, e1 };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<(), WidthError> {
        for (k, plate) in [&self.e0, &self.e1].into_iter().enumerate() {
            if plate.iter().map(|a| a.length()).sum::<f64>() <= 0.0 {
                return Err(WidthError::DegeneratePlate(k));
            }
        }
        let all: Vec<&CircleArc> = self.e0.iter().chain(self.e1.iter()).collect();
        for x in 0..all.len() {
            for y in x + 1..all.len() {
                if !all[x].disjoint_closed(all[y]) {
                    return Err(WidthError::PlatesTouch);
                }
            }
        }
        Ok(())
    }

    /// Plates of the quadrilateral width problem.
    pub fn from_quadrilateral(q: &super::Quadrilateral) -> Self {
        Self {
            e0: vec![q.i],
            e1: vec![q.j],
        }
    }

    /// Plates with `e0` and `e1` exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            e0: self.e1.clone(),
            e1: self.e0.clone(),
        }
    }
}

/// Discretization parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CapacityGrid {
    /// Chebyshev collocation nodes per arc.
    pub resolution: usize,
}

impl CapacityGrid {
    pub fn new(resolution: usize) -> Result<Self, WidthError> {
        if !(MIN_RESOLUTION..=MAX_RESOLUTION).contains(&resolution) {
            return Err(WidthError::Resolution(resolution));
        }
        Ok(Self { resolution })
    }
}

/// Solver output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CapacityReport {
    /// Width at the requested resolution.
    pub width: f64,
    /// Width at half the resolution.
    pub coarse_width: f64,
    /// `|width − coarse_width|`.
    pub extrapolation_estimate: f64,
    /// Max-norm collocation residual of the fine system.
    pub residual: f64,
    /// Unknowns of the fine system.
    pub nodes: usize,
    pub resolution: usize,
    /// Chart and discretization descriptor.
    pub chart: String,
    /// Steps of the barycenter normalization.
    pub normalization_steps: usize,
    /// Flux through each arc, `E0` arcs first; `E1` fluxes sum to `width`.
    pub fluxes: Vec<f64>,
}

/// Arc in radians after normalization: center, half-width, boundary value.
#[derive(Debug, Clone, Copy)]
struct Plate {
    center: f64,
    half: f64,
    value: f64,
}

/// Disk automorphism moving the conformal barycenter of `pts` to the origin.
fn barycenter_map(pts: &[f64]) -> (MobiusMap, usize) {
    let mut m = MobiusMap::identity();
    for it in 0..BARYCENTER_ITER {
        let mean = pts
            .iter()
            .map(|&t| m.apply(unit(t)))
            .fold(num_complex::Complex64::new(0.0, 0.0), |a, z| a + z)
            / pts.len() as f64;
        if mean.norm() < 1e-6 {
            return (m, it);
        }
        let step = mean * (0.9 / mean.norm()).min(1.0);
        let w = DiskPoint {
            re: step.re,
            im: step.im,
        };
        m = MobiusMap::translation(w).compose(&m);
    }
    (m, BARYCENTER_ITER)
}

fn plates_of(c: &BoundaryCondenser, m: &MobiusMap) -> Vec<Plate> {
    let map = |a: &CircleArc, value: f64| {
        let s = turns_of(m.apply(unit(a.start)));
        let e = turns_of(m.apply(unit(a.end)));
        let len = crate::hypdisk::ccw(s, e);
        Plate {
            center: 2.0 * PI * (s + len / 2.0),
            half: PI * len,
            value,
        }
    };
    c.e0.iter()
        .map(|a| map(a, 0.0))
        .chain(c.e1.iter().map(|a| map(a, 1.0)))
        .collect()
}

fn chebyshev_nodes(n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| ((2 * k + 1) as f64 * PI / (2 * n) as f64).cos())
        .collect()
}

/// `T_0..T_{n-1}` evaluated at `x`.
fn chebyshev_row(x: f64, n: usize, out: &mut [f64]) {
    out[0] = 1.0;
    if n > 1 {
        out[1] = x;
    }
    for k in 2..n {
        out[k] = 2.0 * x * out[k - 1] - out[k - 2];
    }
}

/// `log|2 sin(x/2) / x|`, smooth for `|x| < 2π`.
fn log_sinc_ratio(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        -x * x / 24.0
    } else {
        (2.0 * (x / 2.0).sin() / x).abs().ln()
    }
}

/// Per-arc fluxes `∫ g` and the collocation residual.
fn solve(plates: &[Plate], n: usize) -> Result<(Vec<f64>, f64), WidthError> {
    let np = plates.len();
    let mq = (2 * n).max(64);
    let t = chebyshev_nodes(n);
    let s = chebyshev_nodes(mq);
    // Tq[k, n] = T_n(s_k) * π / M.
    let mut tq = DMatrix::<f64>::zeros(mq, n);
    let mut row = vec![0.0; n.max(2)];
    for (k, &sk) in s.iter().enumerate() {
        chebyshev_row(sk, n, &mut row);
        for j in 0..n {
            tq[(k, j)] = row[j] * PI / mq as f64;
        }
    }
    let dim = np * n + 1;
    let mut a = DMatrix::<f64>::zeros(dim, dim);
    let mut rhs = DVector::<f64>::zeros(dim);
    let scale = -1.0 / (PI * PI);
    for (i, pi_) in plates.iter().enumerate() {
        for (j, pj) in plates.iter().enumerate() {
            let mut kern = DMatrix::<f64>::zeros(n, mq);
            for (m, &tm) in t.iter().enumerate() {
                let theta = pi_.center + pi_.half * tm;
                for (k, &sk) in s.iter().enumerate() {
                    kern[(m, k)] = if i == j {
                        pi_.half.ln() + log_sinc_ratio(pi_.half * (tm - sk))
                    } else {
                        let phi = pj.center + pj.half * sk;
                        (2.0 * ((theta - phi) / 2.0).sin()).abs().ln()
                    };
                }
            }
            let mut block = kern * &tq;
            if i == j {
                for (m, &tm) in t.iter().enumerate() {
                    chebyshev_row(tm, n, &mut row);
                    block[(m, 0)] += -PI * 2f64.ln();
                    for q in 1..n {
                        block[(m, q)] += -PI / q as f64 * row[q];
                    }
                }
            }
            for m in 0..n {
                for q in 0..n {
                    a[(i * n + m, j * n + q)] = scale * block[(m, q)];
                }
            }
        }
        for m in 0..n {
            a[(i * n + m, dim - 1)] = 1.0;
            rhs[i * n + m] = pi_.value;
        }
    }
    for j in 0..np {
        a[(dim - 1, j * n)] = 1.0;
    }
    let lu = a.clone().lu();
    let x = lu.solve(&rhs).ok_or(WidthError::NonConvergence {
        iterations: 0,
        residual: f64::INFINITY,
    })?;
    let residual = (&a * &x - &rhs).amax();
    if !residual.is_finite() || residual > RESIDUAL_LIMIT {
        return Err(WidthError::NonConvergence {
            iterations: 1,
            residual,
        });
    }
    Ok(((0..plates.len()).map(|j| x[j * n]).collect(), residual))
}

/// Width of the path family joining `E0` to `E1` in the disk.
pub fn capacity_width(c: &BoundaryCondenser, g: &CapacityGrid) -> Result<CapacityReport, WidthError> {
    c.validate()?;
    CapacityGrid::new(g.resolution)?;
    let pts: Vec<f64> = c
        .e0
        .iter()
        .chain(c.e1.iter())
        .flat_map(|a| [a.start, a.end])
        .collect();
    let (m, steps) = barycenter_map(&pts);
    let plates = plates_of(c, &m);
    let (fluxes, residual) = solve(&plates, g.resolution)?;
    let (coarse_fluxes, _) = solve(&plates, g.resolution / 2)?;
    let k = c.e0.len();
    let fine: f64 = fluxes[k..].iter().sum();
    let coarse: f64 = coarse_fluxes[k..].iter().sum();
    Ok(CapacityReport {
        width: fine,
        coarse_width: coarse,
        extrapolation_estimate: (fine - coarse).abs(),
        residual,
        nodes: plates.len() * g.resolution + 1,
        resolution: g.resolution,
        chart: format!(
            "barycentric disk chart, weighted Chebyshev collocation, {} arcs x {} nodes, {} quadrature nodes",
            plates.len(),
            g.resolution,
            (2 * g.resolution).max(64)
        ),
        normalization_steps: steps,
        fluxes,
    })
}

/// Doubles the resolution from `start` until successive solves agree.
///
/// Stops once every arc flux changes by at most `tol · max(width, 1)` or the
/// resolution would exceed `max`; the report carries the last two levels.
pub fn capacity_width_adaptive(
    c: &BoundaryCondenser,
    start: usize,
    max: usize,
    tol: f64,
) -> Result<CapacityReport, WidthError> {
    c.validate()?;
    CapacityGrid::new(start)?;
    CapacityGrid::new(max)?;
    let pts: Vec<f64> = c
        .e0
        .iter()
        .chain(c.e1.iter())
        .flat_map(|a| [a.start, a.end])
        .collect();
    let (m, steps) = barycenter_map(&pts);
    let plates = plates_of(c, &m);
    let k = c.e0.len();
    let (mut prev, _) = solve(&plates, start / 2)?;
    let mut n = start;
    loop {
        let (fluxes, residual) = solve(&plates, n)?;
        let fine: f64 = fluxes[k..].iter().sum();
        let change = fluxes
            .iter()
            .zip(prev.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        if change <= tol * fine.max(1.0) || 2 * n > max {
            let coarse: f64 = prev[k..].iter().sum();
            return Ok(CapacityReport {
                width: fine,
                coarse_width: coarse,
                extrapolation_estimate: (fine - coarse).abs(),
                residual,
                nodes: plates.len() * n + 1,
                resolution: n,
                chart: format!(
                    "barycentric disk chart, weighted Chebyshev collocation, {} arcs x {} nodes (adaptive)",
                    plates.len(),
                    n
                ),
                normalization_steps: steps,
                fluxes,
            });
        }
        prev = fluxes;
        n *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::widths::{quad_width_exact, Quadrilateral};

    fn arc(s: f64, e: f64) -> CircleArc {
        CircleArc::new(s, e).unwrap()
    }

    fn grid(r: usize) -> CapacityGrid {
        CapacityGrid::new(r).unwrap()
    }

    #[test]
    fn symmetric_quadrilateral() {
        let c = BoundaryCondenser::new(vec![arc(0.0, 0.25)], vec![arc(0.5, 0.75)]).unwrap();
        let r = capacity_width(&c, &grid(256)).unwrap();
        assert!((r.width - 1.0).abs() < 5e-3);
        assert!((r.width - 1.0).abs() < 1e-9, "{}", r.width);
    }

    #[test]
    fn asymmetric_calibration() {
        let q = Quadrilateral::new(arc(0.0, 0.01), arc(0.5, 0.51)).unwrap();
        let exact = quad_width_exact(&q).unwrap();
        let r = capacity_width(&BoundaryCondenser::from_quadrilateral(&q), &grid(64)).unwrap();
        assert!((r.width - exact).abs() / exact < 1e-3, "{} {}", r.width, exact);
    }

    #[test]
    fn four_point_agreement() {
        for &(a, b, c, d) in &[
            (0.0, 0.125, 0.25, 0.375),
            (0.1, 0.45, 0.5, 0.95),
            (0.0, 0.02, 0.3, 0.9),
            (0.2, 0.7, 0.71, 0.19),
        ] {
            let q = Quadrilateral::new(arc(a, b), arc(c, d)).unwrap();
            let exact = quad_width_exact(&q).unwrap();
            let r = capacity_width(&BoundaryCondenser::from_quadrilateral(&q), &grid(64)).unwrap();
            assert!((r.width - exact).abs() / exact < 1e-3, "{a} {b} {c} {d}: {} vs {exact}", r.width);
        }
    }

    #[test]
    fn enlarged_plate_is_monotone() {
        let base = BoundaryCondenser::new(vec![arc(0.0, 0.1)], vec![arc(0.4, 0.5)]).unwrap();
        let more = BoundaryCondenser::new(vec![arc(0.0, 0.1)], vec![arc(0.4, 0.5), arc(0.7, 0.8)]).unwrap();
        let w0 = capacity_width(&base, &grid(32)).unwrap().width;
        let w1 = capacity_width(&more, &grid(32)).unwrap().width;
        assert!(w1 >= w0);
    }

    #[test]
    fn swapped_plates_same_width() {
        let c = BoundaryCondenser::new(vec![arc(0.0, 0.1), arc(0.3, 0.35)], vec![arc(0.5, 0.6)]).unwrap();
        let w0 = capacity_width(&c, &grid(32)).unwrap().width;
        let w1 = capacity_width(&c.swapped(), &grid(32)).unwrap().width;
        assert!((w0 - w1).abs() < 1e-9);
    }

    #[test]
    fn fluxes_balance_and_split_under_doubling() {
        // Preimage of the symmetric quadrilateral under z ↦ z².
        let c = BoundaryCondenser::new(
            vec![arc(0.0, 0.125), arc(0.5, 0.625)],
            vec![arc(0.25, 0.375), arc(0.75, 0.875)],
        )
        .unwrap();
        let r = capacity_width(&c, &grid(64)).unwrap();
        assert!((r.width - 2.0).abs() < 1e-8, "{}", r.width);
        assert!((r.fluxes[0] + r.fluxes[1] + r.width).abs() < 1e-9);
        for f in &r.fluxes[2..] {
            assert!((f - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn adaptive_refines_near_touching_plates() {
        let q = Quadrilateral::new(arc(0.0, 0.4999), arc(0.5, 0.9999)).unwrap();
        let exact = quad_width_exact(&q).unwrap();
        let r = capacity_width_adaptive(&BoundaryCondenser::from_quadrilateral(&q), 32, 1024, 1e-7).unwrap();
        assert!((r.width - exact).abs() / exact < 1e-6, "{} {exact} {}", r.width, r.resolution);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(CapacityGrid::new(8), Err(WidthError::Resolution(8)));
        assert_eq!(
            BoundaryCondenser::new(vec![], vec![arc(0.0, 0.1)]),
            Err(WidthError::DegeneratePlate(0))
        );
        assert_eq!(
            BoundaryCondenser::new(vec![arc(0.0, 0.2)], vec![arc(0.2, 0.4)]),
            Err(WidthError::PlatesTouch)
        );
    }
}
