//! Transformation rules and the key estimate under Blaschke pullbacks.

use rand::Rng;
use serde::Serialize;

use super::blaschke::{pullback_marking, BlaschkeMap};
use super::diagram::{arc_pair_width, canonical_diagram, gap_flux, local_condenser, local_weights};
use super::marking::{IdealMarking, TileKind};
use super::LaminationError;
use crate::widths::{
    capacity_width_adaptive, truncate_width, BoundaryCondenser, CapacityGrid, CapacityReport,
    CircleArc,
};

/// Relative flux change at which resolution doubling stops.
pub const REFINE_TOL: f64 = 1e-6;

/// Starting resolution of the adaptive solves; `grid` gives the ceiling.
const START_RESOLUTION: usize = 32;

fn solve(c: &BoundaryCondenser, grid: &CapacityGrid) -> Result<CapacityReport, LaminationError> {
    let start = START_RESOLUTION.min(grid.resolution);
    Ok(capacity_width_adaptive(c, start, grid.resolution, REFINE_TOL)?)
}

/// One lifted local-weight condenser: `B⁻¹I_n` against `B⁻¹P_n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoveringRow {
    pub n: usize,
    pub target_wbar: f64,
    /// Capacity of the lifted condenser.
    pub lifted: f64,
    /// `d · W̄_n`.
    pub expected: f64,
    pub rel_error: f64,
}

/// Verdicts of the transformation rules for one map and marking.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransformReport {
    pub degree: usize,
    pub tol: f64,
    /// Lifted pairs `(I'_{m,s}, I'_{n,t})` over non-adjacent targets.
    pub pair_checks: usize,
    pub pair_violations: usize,
    /// `max (W̄' − W̄)`; nonpositive when the width rule holds.
    pub max_pair_excess: f64,
    /// `max |W̄' − W̄|`, the equality residual when `d = 1`.
    pub max_pair_gap: f64,
    pub gap_checks: usize,
    pub gap_violations: usize,
    /// `max (W(G_k) − W(G'))`; nonpositive when the flux rule holds.
    pub max_flux_deficit: f64,
    pub max_flux_gap: f64,
    pub covering: Vec<CoveringRow>,
    pub covering_violations: usize,
    /// `W(D', I')`, the total weight of the pulled-back marking.
    pub source_total: f64,
    /// `d · W(D, I)`.
    pub degree_bound: f64,
    pub violations: usize,
}

/// Widths, fluxes and lifted condensers of `B⁻¹(m)` compared with `m`.
pub fn transform_check(
    b: &BlaschkeMap,
    m: &IdealMarking,
    grid: &CapacityGrid,
    tol: f64,
) -> Result<TransformReport, LaminationError> {
    let pb = pullback_marking(b, m)?;
    let d = b.degree();
    let src = pb.marking.intervals();
    let (mut pair_checks, mut pair_violations) = (0, 0);
    let (mut max_pair_excess, mut max_pair_gap) = (f64::NEG_INFINITY, 0.0f64);
    for x in 0..src.len() {
        for y in x + 1..src.len() {
            let (mx, my) = (pb.labels[x].0, pb.labels[y].0);
            if m.adjacent(mx, my) {
                continue;
            }
            let target = arc_pair_width(&m.intervals()[mx], &m.intervals()[my]);
            let source = arc_pair_width(&src[x], &src[y]);
            pair_checks += 1;
            let excess = source - target;
            max_pair_excess = max_pair_excess.max(excess);
            max_pair_gap = max_pair_gap.max(excess.abs());
            if excess > tol * target.max(1.0) {
                pair_violations += 1;
            }
        }
    }
    let (mut gap_checks, mut gap_violations) = (0, 0);
    let (mut max_flux_deficit, mut max_flux_gap) = (f64::NEG_INFINITY, 0.0f64);
    for k in 0..src.len() {
        if pb.marking.gap(k)?.is_none() {
            continue;
        }
        let target = gap_flux(m, pb.labels[k].0)?;
        let source = gap_flux(&pb.marking, k)?;
        gap_checks += 1;
        let deficit = target - source;
        max_flux_deficit = max_flux_deficit.max(deficit);
        max_flux_gap = max_flux_gap.max(deficit.abs());
        if deficit > tol * target.max(1.0) {
            gap_violations += 1;
        }
    }
    let covering = covering_rows(b, m, grid)?;
    let covering_violations = covering.iter().filter(|r| r.rel_error > tol).count();
    let source_total: f64 = local_weights(&pb.marking)?.iter().map(|l| l.w).sum();
    let degree_bound = d as f64 * local_weights(m)?.iter().map(|l| l.w).sum::<f64>();
    Ok(TransformReport {
        degree: d,
        tol,
        pair_checks,
        pair_violations,
        max_pair_excess,
        max_pair_gap,
        gap_checks,
        gap_violations,
        max_flux_deficit,
        max_flux_gap,
        covering,
        covering_violations,
        source_total,
        degree_bound,
        violations: pair_violations + gap_violations + covering_violations,
    })
}

fn lift_arcs(b: &BlaschkeMap, a: &CircleArc) -> Result<Vec<CircleArc>, LaminationError> {
    let s = b.boundary_preimages(a.start);
    let e = b.boundary_preimages(a.end);
    s.iter()
        .map(|&x| {
            let y = e
                .iter()
                .copied()
                .min_by(|u, v| crate::hypdisk::ccw(x, *u).total_cmp(&crate::hypdisk::ccw(x, *v)))
                .expect("degree at least one");
            Ok(CircleArc::new(x, y)?)
        })
        .collect()
}

/// Lifted condenser `B⁻¹E0` against `B⁻¹E1`.
pub fn lifted_condenser(b: &BlaschkeMap, c: &BoundaryCondenser) -> Result<BoundaryCondenser, LaminationError> {
    let lift = |arcs: &[CircleArc]| -> Result<Vec<CircleArc>, LaminationError> {
        let mut out = Vec::new();
        for a in arcs {
            out.extend(lift_arcs(b, a)?);
        }
        Ok(out)
    };
    Ok(BoundaryCondenser::new(lift(&c.e0)?, lift(&c.e1)?)?)
}

fn covering_rows(b: &BlaschkeMap, m: &IdealMarking, grid: &CapacityGrid) -> Result<Vec<CoveringRow>, LaminationError> {
    let d = b.degree() as f64;
    let mut rows = Vec::new();
    for n in 0..m.p() {
        let Some(c) = local_condenser(m, n)? else {
            continue;
        };
        let target = arc_pair_width(&c.e0[0], &c.e1[0]);
        let lifted = solve(&lifted_condenser(b, &c)?, grid)?.width;
        let expected = d * target;
        rows.push(CoveringRow {
            n,
            target_wbar: target,
            lifted,
            expected,
            rel_error: (lifted - expected).abs() / expected,
        });
    }
    Ok(rows)
}

/// A positive-weight entry of the full diagram and the fluxes through its lifts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LiftedEntry {
    /// Tiles of the entry in the full marking.
    pub ends: (TileKind, TileKind),
    pub wbar: f64,
    pub weight: f64,
    /// Flux into each lift of the second end, by sheet.
    pub lift_fluxes: Vec<f64>,
    /// Truncated weight of each lift.
    pub lift_weights: Vec<f64>,
    pub broken: bool,
}

/// The key estimate for one pullback.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KeyEstimateReport {
    pub degree: usize,
    pub segments: Vec<LiftedEntry>,
    pub arc_segments: Vec<LiftedEntry>,
    /// `W(S_D)`.
    pub segment_weight: f64,
    /// `W(S_D^br)`.
    pub broken_weight: f64,
    /// `W(i*(S_D))`.
    pub pullback_weight: f64,
    /// `W(i*(S_D)) − W(S_D) − W(S_D^br)`.
    pub margin: f64,
    /// `W(S_{D'})` of the canonical diagram upstairs.
    pub source_segment_weight: f64,
    /// Broken arc-segments whose pullback has no lift of at least their weight.
    pub arc_segment_violations: usize,
    pub holds: bool,
}

fn lifted_entry(
    b: &BlaschkeMap,
    ends: (TileKind, TileKind),
    arcs: (CircleArc, CircleArc),
    wbar: f64,
    grid: &CapacityGrid,
) -> Result<LiftedEntry, LaminationError> {
    let c = BoundaryCondenser::new(vec![arcs.0], vec![arcs.1])?;
    let r = solve(&lifted_condenser(b, &c)?, grid)?;
    let lift_fluxes = r.fluxes[b.degree()..].to_vec();
    let lift_weights = lift_fluxes
        .iter()
        .map(|&f| truncate_width(f.max(0.0)))
        .collect::<Result<Vec<_>, _>>()?;
    let broken = lift_weights.iter().filter(|&&w| w > 0.0).count() >= 2;
    Ok(LiftedEntry {
        ends,
        wbar,
        weight: truncate_width(wbar)?,
        lift_fluxes,
        lift_weights,
        broken,
    })
}

fn segment_weight_of(m: &IdealMarking) -> Result<f64, LaminationError> {
    let full = m.full();
    let d = canonical_diagram(&full.marking)?;
    Ok(d.entries
        .iter()
        .filter(|e| matches!((full.kinds[e.m], full.kinds[e.n]), (TileKind::Gap(_), TileKind::Gap(_))))
        .map(|e| e.weight)
        .sum())
}

/// Segments and arc-segments of `m` pulled back by `b`.
///
/// Segments are gap-to-gap entries of the canonical diagram of the full
/// marking, arc-segments are interval-to-gap entries. The pullback of an entry
/// is split by the lifts of its second end, each weighted by the flux it
/// receives in the lifted condenser.
pub fn key_estimate_check(
    b: &BlaschkeMap,
    m: &IdealMarking,
    grid: &CapacityGrid,
    tol: f64,
) -> Result<KeyEstimateReport, LaminationError> {
    let full = m.full();
    let diagram = canonical_diagram(&full.marking)?;
    let tiles = full.marking.intervals();
    let mut segments = Vec::new();
    let mut arc_segments = Vec::new();
    for e in &diagram.entries {
        let (k0, k1) = (full.kinds[e.m], full.kinds[e.n]);
        let arcs = (tiles[e.m], tiles[e.n]);
        match (k0, k1) {
            (TileKind::Gap(_), TileKind::Gap(_)) => {
                segments.push(lifted_entry(b, (k0, k1), arcs, e.wbar, grid)?)
            }
            (TileKind::Interval(_), TileKind::Gap(_)) => {
                arc_segments.push(lifted_entry(b, (k0, k1), arcs, e.wbar, grid)?)
            }
            (TileKind::Gap(_), TileKind::Interval(_)) => {
                arc_segments.push(lifted_entry(b, (k1, k0), (arcs.1, arcs.0), e.wbar, grid)?)
            }
            _ => {}
        }
    }
    let segment_weight: f64 = segments.iter().map(|s| s.weight).sum();
    let broken_weight: f64 = segments.iter().filter(|s| s.broken).map(|s| s.weight).sum();
    let pullback_weight: f64 = segments.iter().flat_map(|s| s.lift_weights.iter()).sum();
    let arc_segment_violations = arc_segments
        .iter()
        .filter(|a| a.broken)
        .filter(|a| a.lift_weights.iter().cloned().fold(0.0, f64::max) < a.weight - tol)
        .count();
    let margin = pullback_weight - segment_weight - broken_weight;
    let pb = pullback_marking(b, m)?;
    Ok(KeyEstimateReport {
        degree: b.degree(),
        segments,
        arc_segments,
        segment_weight,
        broken_weight,
        pullback_weight,
        margin,
        source_segment_weight: segment_weight_of(&pb.marking)?,
        arc_segment_violations,
        holds: margin >= -tol && arc_segment_violations == 0,
    })
}

/// Marking with short intervals and long gaps, so that segments carry weight.
pub fn random_segment_marking<R: Rng>(rng: &mut R, p: usize) -> IdealMarking {
    let mut cuts: Vec<f64> = (0..p).map(|_| rng.random::<f64>()).collect();
    cuts.sort_by(|a, b| a.total_cmp(b));
    let slot_min = (0..p)
        .map(|k| crate::hypdisk::ccw(cuts[k], cuts[(k + 1) % p]))
        .fold(f64::INFINITY, f64::min);
    if slot_min < 1e-3 {
        return random_segment_marking(rng, p);
    }
    let arcs = (0..p)
        .map(|k| {
            let len = slot_min * 10f64.powf(-1.0 - rng.random::<f64>());
            CircleArc::new(cuts[k], cuts[k] + len).unwrap()
        })
        .collect();
    IdealMarking::new(arcs).expect("short intervals inside their slots")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lamination::marking::random_marking;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn grid() -> CapacityGrid {
        CapacityGrid::new(64).unwrap()
    }

    #[test]
    fn identity_gives_equalities() {
        let m = IdealMarking::symmetric(5, 0.03).unwrap();
        let r = transform_check(&BlaschkeMap::identity(), &m, &grid(), 1e-3).unwrap();
        assert_eq!(r.violations, 0);
        assert!(r.max_pair_gap < 1e-9 && r.max_flux_gap < 1e-9);
        assert!(r.covering.iter().all(|c| c.rel_error < 1e-6));
    }

    #[test]
    fn squaring_doubles_local_weights() {
        let m = IdealMarking::symmetric(6, 0.02).unwrap();
        let r = transform_check(&BlaschkeMap::power(2).unwrap(), &m, &grid(), 1e-3).unwrap();
        assert_eq!(r.covering.len(), 6);
        for c in &r.covering {
            assert!((c.lifted - 2.0 * c.target_wbar).abs() < 1e-6 * c.lifted, "{c:?}");
        }
        assert_eq!(r.violations, 0);
    }

    #[test]
    fn random_pullbacks_obey_rules() {
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        for _ in 0..10 {
            let p = rng.random_range(4..8);
            let d = rng.random_range(1..4);
            let m = random_marking(&mut rng, p, 0.6);
            let b = BlaschkeMap::random(&mut rng, d, 0.7);
            let r = transform_check(&b, &m, &grid(), 1e-3).unwrap();
            assert_eq!(r.violations, 0, "{r:?}");
        }
    }

    #[test]
    fn key_estimate_on_squaring() {
        let mut rng = ChaCha8Rng::seed_from_u64(62);
        let m = random_segment_marking(&mut rng, 5);
        let r = key_estimate_check(&BlaschkeMap::power(2).unwrap(), &m, &grid(), 1e-3).unwrap();
        assert!(!r.segments.is_empty());
        for s in &r.segments {
            assert!(s.broken);
            for f in &s.lift_fluxes {
                assert!((f - s.wbar).abs() < 1e-4 * s.wbar, "{s:?}");
            }
        }
        assert!(r.holds, "{r:?}");
    }
}
