//! Conformal widths of path families in the disk.
//!
//! Closed-form widths of ideal quadrilaterals, buffer truncation, the parallel
//! and serial laws, and a boundary-integral condenser solver used as an
//! independent oracle for multi-arc configurations.

mod capacity;
mod elliptic;
mod quad;

pub use capacity::{
    capacity_width, capacity_width_adaptive, BoundaryCondenser, CapacityGrid, CapacityReport,
    MAX_RESOLUTION, MIN_RESOLUTION,
};
pub use elliptic::{agm, elliptic_k, elliptic_k_complement};
pub use quad::{quad_width_exact, width_of_points, Quadrilateral};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypdisk::{ccw, normalize_turns};

/// Errors raised by width computations.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum WidthError {
    #[error("elliptic modulus {0} outside [0, 1)")]
    Domain(f64),
    #[error("arc [{0}, {1}] is degenerate")]
    DegenerateArc(f64, f64),
    #[error("horizontal sides share an endpoint, the width is infinite")]
    Adjacent,
    #[error("arcs overlap or are out of cyclic order")]
    Overlap,
    #[error("negative width {0}")]
    Negative(f64),
    #[error("empty list")]
    Empty,
    #[error("entry {0} is not strictly positive")]
    NonPositive(f64),
    #[error("plate {0} has zero total length")]
    DegeneratePlate(usize),
    #[error("plates are not separated")]
    PlatesTouch,
    #[error("resolution {0} outside the supported range [16, 2048]")]
    Resolution(usize),
    #[error("solver did not converge after {iterations} steps (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },
}

/// Counterclockwise arc of the unit circle, endpoints in turns.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 2]", into = "[f64; 2]")]
pub struct CircleArc {
    pub start: f64,
    pub end: f64,
}

impl TryFrom<[f64; 2]> for CircleArc {
    type Error = WidthError;
    fn try_from(v: [f64; 2]) -> Result<Self, WidthError> {
        CircleArc::new(v[0], v[1])
    }
}

impl From<CircleArc> for [f64; 2] {
    fn from(a: CircleArc) -> Self {
        [a.start, a.end]
    }
}

impl CircleArc {
    /// Arc from `start` to `end`; endpoints are reduced to `[0, 1)`.
    pub fn new(start: f64, end: f64) -> Result<Self, WidthError> {
        if !start.is_finite() || !end.is_finite() {
            return Err(WidthError::DegenerateArc(start, end));
        }
        let (s, e) = (normalize_turns(start), normalize_turns(end));
        let len = ccw(s, e);
        if len <= 0.0 {
            return Err(WidthError::DegenerateArc(start, end));
        }
        Ok(Self { start: s, end: e })
    }

    /// Length in turns.
    pub fn length(&self) -> f64 {
        ccw(self.start, self.end)
    }

    /// Midpoint angle in turns.
    pub fn midpoint(&self) -> f64 {
        normalize_turns(self.start + self.length() / 2.0)
    }

    /// Closed-arc membership.
    pub fn contains(&self, t: f64) -> bool {
        ccw(self.start, normalize_turns(t)) <= self.length()
    }

    /// True when the closed arcs are disjoint.
    pub fn disjoint_closed(&self, o: &CircleArc) -> bool {
        !self.contains(o.start) && !self.contains(o.end) && !o.contains(self.start)
    }

    /// True when the open arcs are disjoint.
    pub fn disjoint_open(&self, o: &CircleArc) -> bool {
        let inside = |a: &CircleArc, t: f64| {
            let d = ccw(a.start, t);
            d > 0.0 && d < a.length()
        };
        !inside(self, o.start)
            && !inside(self, o.end)
            && !inside(o, self.start)
            && !inside(o, self.end)
            && !(self.start == o.start && self.end == o.end)
    }
}

/// Removes the two unit buffers: `max(wbar - 2, 0)`.
pub fn truncate_width(wbar: f64) -> Result<f64, WidthError> {
    if wbar.is_nan() || wbar < 0.0 {
        return Err(WidthError::Negative(wbar));
    }
    Ok((wbar - 2.0).max(0.0))
}

/// Parallel law: widths of disjoint families add.
pub fn parallel_sum(widths: &[f64]) -> Result<f64, WidthError> {
    if widths.is_empty() {
        return Err(WidthError::Empty);
    }
    if let Some(&w) = widths.iter().find(|w| !(**w >= 0.0)) {
        return Err(WidthError::Negative(w));
    }
    Ok(widths.iter().sum())
}

/// Serial law bound `(Σ 1/w)^-1` for concatenated families.
pub fn serial_bound(widths: &[f64]) -> Result<f64, WidthError> {
    if widths.is_empty() {
        return Err(WidthError::Empty);
    }
    if let Some(&w) = widths.iter().find(|w| !(**w > 0.0)) {
        return Err(WidthError::NonPositive(w));
    }
    Ok(1.0 / widths.iter().map(|w| 1.0 / w).sum::<f64>())
}
