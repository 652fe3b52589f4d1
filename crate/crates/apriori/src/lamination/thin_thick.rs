//! Thin, cusp and thick parts of the boundary of the ideal polygon of a marking.

use serde::Serialize;

use super::diagram::{arc_pair_width, canonical_diagram};
use super::marking::IdealMarking;
use super::{total_weight, LaminationError};
use crate::hypdisk::{geodesic_between, near_segment, Geodesic, IdealPoint};
use crate::widths::truncate_width;

/// Half-length of the arclength window on each side.
pub const WINDOW: f64 = 30.0;

/// Thin segment of one non-adjacent pair of intervals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairLength {
    pub m: usize,
    pub n: usize,
    pub wbar: f64,
    pub w: f64,
    /// Hyperbolic length of `γ^ε_{mn}`, the part of `γ_m` within `ε` of `γ_n`.
    pub length: f64,
    /// `length − W̄`.
    pub residual: f64,
    /// `length − π W̄`.
    pub residual_pi: f64,
}

/// Lengths of the parts of `Γ`, measured within `[−WINDOW, WINDOW]` on each side.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThinThickReport {
    pub eps: f64,
    pub p: usize,
    /// Sides of `Γ`: the tiles of the full marking.
    pub sides: usize,
    pub pairs: Vec<PairLength>,
    /// Length near a neighbouring side, per side.
    pub cusp: Vec<f64>,
    /// Length near a non-neighbouring side and not in a cusp, per side.
    pub thin: Vec<f64>,
    /// Remaining length, per side.
    pub thick: Vec<f64>,
    pub thick_total: f64,
    /// `thick_total · ε / sides`.
    pub thick_ratio: f64,
    pub total_weight: f64,
    /// `2 Σ W_{mn}` over the canonical diagram.
    pub diagram_sum: f64,
    /// `W − 2 Σ W_{mn}`.
    pub deficit: f64,
    /// `|cusp + thin + thick − 2·WINDOW·sides|`.
    pub partition_residual: f64,
    /// True when every thick part lies strictly inside the window.
    pub window_ok: bool,
}

/// Measure of a union of intervals clipped to `[lo, hi]`.
fn union_length(mut iv: Vec<(f64, f64)>, lo: f64, hi: f64) -> f64 {
    iv.retain(|(a, b)| b > a);
    iv.iter_mut().for_each(|(a, b)| {
        *a = a.max(lo);
        *b = b.min(hi);
    });
    iv.retain(|(a, b)| b > a);
    iv.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut total = 0.0;
    let mut cur: Option<(f64, f64)> = None;
    for (a, b) in iv {
        match cur {
            Some((c0, c1)) if a <= c1 => cur = Some((c0, c1.max(b))),
            Some((c0, c1)) => {
                total += c1 - c0;
                cur = Some((a, b));
            }
            None => cur = Some((a, b)),
        }
    }
    if let Some((c0, c1)) = cur {
        total += c1 - c0;
    }
    total
}

fn side_geodesics(m: &IdealMarking) -> Result<Vec<Geodesic>, LaminationError> {
    m.intervals()
        .iter()
        .map(|a| Ok(geodesic_between(IdealPoint::new(a.start), IdealPoint::new(a.end))?))
        .collect()
}

/// Thin-thick decomposition of `Γ` for the marking at scale `eps`.
pub fn thin_thick_report(m: &IdealMarking, eps: f64) -> Result<ThinThickReport, LaminationError> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(LaminationError::Parameter(format!("eps must be positive, got {eps}")));
    }
    let full = m.full();
    let tiles = &full.marking;
    let q = tiles.p();
    let geo = side_geodesics(tiles)?;
    let (mut cusp, mut thin, mut thick) = (vec![0.0; q], vec![0.0; q], vec![0.0; q]);
    let mut window_ok = true;
    for s in 0..q {
        let mut near_cusp = Vec::new();
        let mut near_thin = Vec::new();
        for t in 0..q {
            if t == s {
                continue;
            }
            let seg = near_segment(&geo[s], &geo[t], eps)?;
            if seg.is_empty() {
                continue;
            }
            if tiles.adjacent(s, t) {
                near_cusp.push((seg.t0, seg.t1));
            } else {
                near_thin.push((seg.t0, seg.t1));
            }
        }
        let c = union_length(near_cusp.clone(), -WINDOW, WINDOW);
        let all: Vec<_> = near_cusp.iter().chain(near_thin.iter()).copied().collect();
        let covered = union_length(all.clone(), -WINDOW, WINDOW);
        cusp[s] = c;
        thin[s] = covered - c;
        thick[s] = 2.0 * WINDOW - covered;
        let edge = 1e-9;
        let lo_covered = all.iter().any(|(a, b)| *a <= -WINDOW + edge && *b > -WINDOW + edge);
        let hi_covered = all.iter().any(|(a, b)| *b >= WINDOW - edge && *a < WINDOW - edge);
        window_ok &= lo_covered && hi_covered;
    }
    let mut pairs = Vec::new();
    let iv = m.intervals();
    let ig = side_geodesics(m)?;
    for a in 0..m.p() {
        for b in a + 1..m.p() {
            if m.adjacent(a, b) {
                continue;
            }
            let wbar = arc_pair_width(&iv[a], &iv[b]);
            let length = near_segment(&ig[a], &ig[b], eps)?.length;
            pairs.push(PairLength {
                m: a,
                n: b,
                wbar,
                w: truncate_width(wbar)?,
                length,
                residual: length - wbar,
                residual_pi: length - std::f64::consts::PI * wbar,
            });
        }
    }
    let total = total_weight(m)?;
    let diagram_sum = 2.0 * canonical_diagram(m)?.total();
    let sum_all: f64 = cusp.iter().chain(thin.iter()).chain(thick.iter()).sum();
    let thick_total: f64 = thick.iter().sum();
    Ok(ThinThickReport {
        eps,
        p: m.p(),
        sides: q,
        pairs,
        partition_residual: (sum_all - 2.0 * WINDOW * q as f64).abs(),
        cusp,
        thin,
        thick,
        thick_total,
        thick_ratio: thick_total * eps / q as f64,
        total_weight: total,
        diagram_sum,
        deficit: total - diagram_sum,
        window_ok,
    })
}
