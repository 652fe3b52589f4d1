//! Chord model of the pull-off argument.
//!
//! Little Julia sets collapse to the angles of a period-`p` doubling orbit;
//! the critical diameter through `θ_0` stands for the symmetric vertical arcs
//! at `K_0`. Chords are lifted exactly, and the newborn vertical weight
//! estimate is evaluated in exact rationals.

mod chord;
mod ledger;
mod orbit;

pub use chord::{
    all_chords, chords_cross, classify_segment, crosses_diameter, diameter, horizontal_chords,
    lift_chord, position, positions_cross, pulloff_time, pulloff_trace, segment_census,
    two_to_one_check, vertical_arc_exists, Chord, ChordLift, Endpoint, PulloffTrace,
    SegmentClass, TraceStep, TwoToOneVerdict, VerticalWitness,
};
pub use ledger::{
    evaluate_branches, ledger_grid, newborn_vertical_ledger, target_share, LedgerBound,
    LedgerGrid, WeightLedger,
};
pub use orbit::{find_admissible_orbits, is_admissible, sector_of, AngleOrbit, OrbitRecord, MAX_PERIOD};

use thiserror::Error;

use crate::lamination::{canonical_diagram, IdealMarking, LaminationError};
use crate::widths::CircleArc;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PullbackError {
    #[error("period {0} outside 1..={MAX_PERIOD}")]
    PeriodBound(usize),
    #[error("bad orbit: {0}")]
    Orbit(String),
    #[error("bad chord: {0}")]
    Chord(String),
    #[error("chord {start:?} cycles: {repeated:?} repeats at step {step}")]
    Cycle { start: Chord, repeated: Chord, step: usize },
    #[error("chord {chord:?} is not inside the window [{lo}, {hi}]")]
    Window { lo: usize, hi: usize, chord: Chord },
    #[error("no vertical access to K_0 avoids the diagram")]
    NoVerticalArc,
    #[error("bad ledger: {0}")]
    Ledger(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Lamination(#[from] LaminationError),
}

/// Default half-width of the arcs replacing marked angles: `1/(64p)`, shrunk
/// to a quarter of the closest pair of angles so the arcs stay disjoint.
pub fn default_delta(orbit: &AngleOrbit) -> f64 {
    let order = orbit.circle_order();
    let d = orbit.denominator();
    let gap = (0..order.len())
        .map(|i| {
            let (a, b) = (orbit.numerator(order[i]), orbit.numerator(order[(i + 1) % order.len()]));
            (b + d - a) % d
        })
        .min()
        .unwrap_or(d);
    (1.0 / (64.0 * orbit.p() as f64)).min(gap as f64 / d as f64 / 4.0)
}

/// Default translation window `[1, q − b]`, clipped to the marked indices.
pub fn default_window(q: usize, b: usize, p: usize) -> (usize, usize) {
    (1, (q - b).min(p - 1))
}

/// Canonical diagram of the marking with each `θ_n` thickened to an arc of half-width `δ`,
/// read back as chords between orbit indices.
pub fn thickened_diagram(orbit: &AngleOrbit, delta: f64) -> Result<Vec<Chord>, PullbackError> {
    let p = orbit.p();
    if p < 3 {
        return Ok(Vec::new());
    }
    let order = orbit.circle_order();
    let d = orbit.denominator() as f64;
    let arcs = order
        .iter()
        .map(|&n| {
            let t = orbit.numerator(n) as f64 / d;
            CircleArc::new(t - delta, t + delta)
        })
        .collect::<Result<Vec<_>, _>>()
        .map_err(LaminationError::from)?;
    let diagram = canonical_diagram(&IdealMarking::new(arcs)?)?;
    diagram
        .entries
        .iter()
        .map(|e| Chord::plain(order[e.m], order[e.n]))
        .collect()
}
