//! Ideal markings of the disk.
//!
//! Pairwise widths and the canonical arc diagram, local weights, gap fluxes,
//! the thin-thick decomposition of the ideal polygon, and pullbacks of
//! markings by finite Blaschke products with the transformation rules.

mod blaschke;
mod diagram;
mod marking;
mod thin_thick;
mod transform;

pub use blaschke::{pullback_marking, BlaschkeMap, PulledBackMarking, ZERO_MARGIN};
pub use diagram::{
    arc_pair_width, canonical_diagram, chords_cross, gap_flux, gap_flux_capacity, local_condenser,
    local_weight, local_weight_capacity, local_weights, pairwise_widths, total_weight,
    DiagramEntry, LocalWeight, WeightedArcDiagram, WidthTable,
};
pub use marking::{
    random_marking, random_multiscale_marking, split_random_interval, validate_marking, FullMarking, IdealMarking,
    MarkingDiagnostics, TileKind, TOUCH,
};
pub use thin_thick::{thin_thick_report, PairLength, ThinThickReport, WINDOW};
pub use transform::{
    key_estimate_check, lifted_condenser, random_segment_marking, transform_check, CoveringRow,
    KeyEstimateReport, LiftedEntry, TransformReport,
};

use thiserror::Error;

use crate::hypdisk::GeomError;
use crate::widths::WidthError;

/// Errors raised by marking operations.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum LaminationError {
    #[error("a marking needs at least 3 intervals, got {0}")]
    TooFewIntervals(usize),
    #[error("intervals {0} and {1} overlap")]
    Overlap(usize, usize),
    #[error("intervals are not in counterclockwise order")]
    Ordering,
    #[error("no interval or gap with label {0}")]
    Label(usize),
    #[error("gap {0} is empty")]
    NoGap(usize),
    #[error("diagram chords {0:?} and {1:?} cross")]
    Crossing((usize, usize), (usize, usize)),
    #[error("diagram has {0} entries, above the bound")]
    TooManyEntries(usize),
    #[error("invalid Blaschke product: {0}")]
    Blaschke(String),
    #[error("boundary preimage of {0} did not converge")]
    RootFinding(f64),
    #[error("{0}")]
    Parameter(String),
    #[error(transparent)]
    Width(#[from] WidthError),
    #[error(transparent)]
    Geom(#[from] GeomError),
}
