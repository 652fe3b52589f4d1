//! Pairwise widths, the canonical arc diagram, local weights and gap fluxes.

use serde::Serialize;

use super::marking::{FullMarking, IdealMarking};
use super::LaminationError;
use crate::widths::{
    capacity_width, truncate_width, width_of_points, BoundaryCondenser, CapacityGrid,
    CapacityReport, CircleArc,
};

/// Symmetric table of `W̄(I_m, I_n)`; `None` on the diagonal and for adjacent pairs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WidthTable {
    pub p: usize,
    pub entries: Vec<Vec<Option<f64>>>,
}

impl WidthTable {
    pub fn get(&self, m: usize, n: usize) -> Option<f64> {
        self.entries[m][n]
    }

    /// Defined entries `(m, n, W̄)` with `m < n`.
    pub fn defined(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.p).flat_map(move |m| {
            (m + 1..self.p).filter_map(move |n| self.entries[m][n].map(|w| (m, n, w)))
        })
    }
}

/// Width of the family joining two disjoint arcs.
pub fn arc_pair_width(a: &CircleArc, b: &CircleArc) -> f64 {
    width_of_points(a.start, a.end, b.start, b.end)
}

/// `W̄_{mn}` for every non-adjacent pair of intervals.
pub fn pairwise_widths(m: &IdealMarking) -> Result<WidthTable, LaminationError> {
    let p = m.p();
    let mut entries = vec![vec![None; p]; p];
    for a in 0..p {
        for b in a + 1..p {
            if m.adjacent(a, b) {
                continue;
            }
            let w = arc_pair_width(&m.intervals()[a], &m.intervals()[b]);
            entries[a][b] = Some(w);
            entries[b][a] = Some(w);
        }
    }
    Ok(WidthTable { p, entries })
}

/// Entry of a weighted arc diagram, `m < n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiagramEntry {
    pub m: usize,
    pub n: usize,
    pub wbar: f64,
    pub weight: f64,
}

/// Weighted non-crossing arc diagram on the labels of a marking.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightedArcDiagram {
    pub p: usize,
    /// Tiles of the full marking; bounds the number of entries by `cardinality − 2`.
    pub cardinality: usize,
    pub entries: Vec<DiagramEntry>,
}

/// True when chords `(a, b)` and `(c, d)` on `p` cyclic labels cross.
pub fn chords_cross(p: usize, (a, b): (usize, usize), (c, d): (usize, usize)) -> bool {
    let inside = |x: usize| {
        let (lo, hi) = (a.min(b), a.max(b));
        x > lo && x < hi
    };
    let shared = a == c || a == d || b == c || b == d;
    debug_assert!(a < p && b < p && c < p && d < p);
    !shared && inside(c) != inside(d)
}

impl WeightedArcDiagram {
    /// `Σ W_{mn}` over the entries.
    pub fn total(&self) -> f64 {
        self.entries.iter().fold(0.0, |acc, e| acc + e.weight)
    }

    /// First pair of crossing entries, if any.
    pub fn crossing(&self) -> Option<(DiagramEntry, DiagramEntry)> {
        for (i, e) in self.entries.iter().enumerate() {
            for f in &self.entries[i + 1..] {
                if chords_cross(self.p, (e.m, e.n), (f.m, f.n)) {
                    return Some((*e, *f));
                }
            }
        }
        None
    }

    /// Entries at label `m`.
    pub fn at(&self, m: usize) -> impl Iterator<Item = &DiagramEntry> {
        self.entries.iter().filter(move |e| e.m == m || e.n == m)
    }
}

/// Pairs with `W̄ > 2`, weighted by `W̄ − 2`; fails if two of them cross.
pub fn canonical_diagram(m: &IdealMarking) -> Result<WeightedArcDiagram, LaminationError> {
    let table = pairwise_widths(m)?;
    let mut entries = Vec::new();
    for (a, b, w) in table.defined() {
        let weight = truncate_width(w)?;
        if weight > 0.0 {
            entries.push(DiagramEntry {
                m: a,
                n: b,
                wbar: w,
                weight,
            });
        }
    }
    let cardinality = m.full().marking.p();
    let d = WeightedArcDiagram {
        p: m.p(),
        cardinality,
        entries,
    };
    if let Some((e, f)) = d.crossing() {
        return Err(LaminationError::Crossing((e.m, e.n), (f.m, f.n)));
    }
    if d.entries.len() + 2 > cardinality {
        return Err(LaminationError::TooManyEntries(d.entries.len()));
    }
    Ok(d)
}

/// Local weight `W̄_n` and its truncation `W_n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LocalWeight {
    pub wbar: f64,
    pub w: f64,
}

/// Plate opposite tile `t` of a full tiling: all tiles except `t` and its neighbours.
fn opposite_plate(tiles: &[CircleArc], t: usize) -> Option<CircleArc> {
    let q = tiles.len();
    if q <= 3 {
        return None;
    }
    let next = tiles[(t + 1) % q];
    let prev = tiles[(t + q - 1) % q];
    Some(CircleArc::new(next.end, prev.start).expect("tiles cover the circle"))
}

fn tile_weight(full: &FullMarking, t: usize) -> Result<LocalWeight, LaminationError> {
    let tiles = full.marking.intervals();
    let wbar = match opposite_plate(tiles, t) {
        None => 0.0,
        Some(plate) => arc_pair_width(&tiles[t], &plate),
    };
    Ok(LocalWeight {
        wbar,
        w: truncate_width(wbar)?,
    })
}

/// Local weight of `I_n`, taken in the full marking.
///
/// The opposite plate is the union of all tiles other than `I_n` and its two
/// neighbours, so the family is a single quadrilateral.
pub fn local_weight(m: &IdealMarking, n: usize) -> Result<LocalWeight, LaminationError> {
    m.interval(n)?;
    let full = m.full();
    tile_weight(&full, full.interval_tile[n])
}

pub fn local_weights(m: &IdealMarking) -> Result<Vec<LocalWeight>, LaminationError> {
    let full = m.full();
    full.interval_tile
        .iter()
        .map(|&t| tile_weight(&full, t))
        .collect()
}

/// The condenser defining the local weight of `I_n`, if its plate is nonempty.
pub fn local_condenser(m: &IdealMarking, n: usize) -> Result<Option<BoundaryCondenser>, LaminationError> {
    m.interval(n)?;
    let full = m.full();
    let t = full.interval_tile[n];
    match opposite_plate(full.marking.intervals(), t) {
        None => Ok(None),
        Some(plate) => Ok(Some(BoundaryCondenser::new(vec![full.marking.intervals()[t]], vec![plate])?)),
    }
}

/// Capacity-solver value of the local weight `W̄_n`.
pub fn local_weight_capacity(m: &IdealMarking, n: usize, grid: &CapacityGrid) -> Result<Option<CapacityReport>, LaminationError> {
    match local_condenser(m, n)? {
        None => Ok(None),
        Some(c) => Ok(Some(capacity_width(&c, grid)?)),
    }
}

/// Total weight `W = Σ_n W_n`.
pub fn total_weight(m: &IdealMarking) -> Result<f64, LaminationError> {
    Ok(local_weights(m)?.iter().map(|l| l.w).sum())
}

/// Flux through gap `G_k`: `1 / W̄(I_k, I_{k+1})`.
pub fn gap_flux(m: &IdealMarking, k: usize) -> Result<f64, LaminationError> {
    m.gap(k)?.ok_or(LaminationError::NoGap(k))?;
    let p = m.p();
    let w = arc_pair_width(&m.intervals()[k], &m.intervals()[(k + 1) % p]);
    Ok(1.0 / w)
}

/// Capacity-solver flux from `G_k` to the arc beyond `I_k` and `I_{k+1}`.
pub fn gap_flux_capacity(m: &IdealMarking, k: usize, grid: &CapacityGrid) -> Result<CapacityReport, LaminationError> {
    let g = m.gap(k)?.ok_or(LaminationError::NoGap(k))?;
    let p = m.p();
    let far = CircleArc::new(m.intervals()[(k + 1) % p].end, m.intervals()[k].start)?;
    Ok(capacity_width(&BoundaryCondenser::new(vec![g], vec![far])?, grid)?)
}
