//! Annuli and pairs of pants as explicit Fuchsian groups.
//!
//! A pair of pants is built in the upper half-plane from its three boundary
//! lengths, then carried to the disk by the Cayley map. Boundary intervals
//! are the components of the circle minus the limit set that are fixed by
//! the boundary generators; arc widths are quadrilateral widths between a
//! primary interval and the lifts of another.

use num_complex::Complex64;
use std::f64::consts::PI;
use serde::Serialize;
use thiserror::Error;

use crate::hypdisk::{ccw, GeomError, IdealPoint, MobiusMap};
use crate::widths::{quad_width_exact, truncate_width, CircleArc, Quadrilateral, WidthError};

/// Endpoints closer than this (turns) are identified when deduplicating lifts.
pub const LIFT_MATCH: f64 = 1e-12;

/// Lifts shorter than this (turns) are dropped as numerically degenerate.
pub const MIN_LIFT_LENGTH: f64 = 1e-15;

/// Relative margin below which two lift widths count as a tie.
const TIE: f64 = 1e-9;

/// Relative residual allowed in the relation `ABC = −I`.
const RELATION_TOL: f64 = 1e-12;

/// Word bound used when none is given.
pub const DEFAULT_MAX_WORD: usize = 6;

/// Tolerance on recovered translation lengths.
pub const LENGTH_TOL: f64 = 1e-9;

/// Errors raised by the Fuchsian constructions.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum FuchsianError {
    #[error("boundary length {0} is not positive")]
    NonPositiveLength(f64),
    #[error("element with |trace| = {0} is not hyperbolic")]
    NotHyperbolic(f64),
    #[error("pants construction failed: {0}")]
    Construction(String),
    #[error("boundary label {0} is not in 0..3")]
    Label(usize),
    #[error("no lift of J_{i} other than J_{k} within word length {max_word}")]
    NoAdmissiblePair { k: usize, i: usize, max_word: usize },
    #[error("word bound must be at least 1")]
    WordBound,
    #[error(transparent)]
    Width(#[from] WidthError),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

/// Width `l/π` of the covering annulus of a boundary geodesic of length `l`.
pub fn annulus_weight(l: f64) -> Result<f64, FuchsianError> {
    if !(l > 0.0) || !l.is_finite() {
        return Err(FuchsianError::NonPositiveLength(l));
    }
    Ok(l / std::f64::consts::PI)
}

/// Real `SL(2)` matrix `[[a, b], [c, d]]` acting on the upper half-plane.
type Real2 = [[f64; 2]; 2];

fn mul(x: &Real2, y: &Real2) -> Real2 {
    [
        [
            x[0][0] * y[0][0] + x[0][1] * y[1][0],
            x[0][0] * y[0][1] + x[0][1] * y[1][1],
        ],
        [
            x[1][0] * y[0][0] + x[1][1] * y[1][0],
            x[1][0] * y[0][1] + x[1][1] * y[1][1],
        ],
    ]
}

fn trace(x: &Real2) -> f64 {
    x[0][0] + x[1][1]
}

/// Conjugate by the Cayley map `z ↦ (z − i)/(z + i)`, in closed form so the determinant stays 1.
fn to_disk(x: &Real2) -> MobiusMap {
    let [[a, b], [c, d]] = *x;
    let p = Complex64::new((a + d) / 2.0, (b - c) / 2.0);
    let q = Complex64::new((a - d) / 2.0, -(b + c) / 2.0);
    MobiusMap {
        a: p,
        b: q,
        c: q.conj(),
        d: p.conj(),
    }
}

/// Image in turns of the real point `x` under `z ↦ (z − i)/(z + i)`.
fn cayley_turns(x: Option<f64>) -> f64 {
    match x {
        None => 0.0,
        Some(x) => crate::hypdisk::normalize_turns((-1.0f64).atan2(x) / PI),
    }
}

/// Repelling and attracting fixed points of `offset_generator(h, s, ·)` at offset `d`.
fn offset_fixed_points(s: f64, d: f64, scale: f64) -> (Option<f64>, Option<f64>) {
    let (near, far) = (scale * (d / 2.0).tanh(), scale / (d / 2.0).tanh());
    if s > 0.0 {
        (Some(near), Some(far))
    } else {
        (Some(far), Some(near))
    }
}

/// Hyperbolic disk automorphism with its axis and translation length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperbolicElement {
    pub map: MobiusMap,
    pub repelling: IdealPoint,
    pub attracting: IdealPoint,
    pub length: f64,
}

impl HyperbolicElement {
    pub fn new(map: MobiusMap) -> Result<Self, FuchsianError> {
        let tr = (map.a + map.d).norm();
        if !(tr > 2.0) {
            return Err(FuchsianError::NotHyperbolic(tr));
        }
        // Fixed points solve c z² + (d − a) z − b = 0.
        let (qa, qb, qc) = (map.c, map.d - map.a, -map.b);
        let disc = (qb * qb - 4.0 * qa * qc).sqrt();
        let big = if (qb + disc).norm() >= (qb - disc).norm() {
            -(qb + disc)
        } else {
            -(qb - disc)
        };
        // Newton steps on g(z) − z polish the roots, then project onto the circle.
        let polish = |mut z: Complex64| {
            for _ in 0..3 {
                let w = map.c * z + map.d;
                let step = (map.apply(z) - z) / (1.0 / (w * w) - 1.0);
                if !step.is_finite() {
                    break;
                }
                z -= step;
            }
            z / z.norm()
        };
        let z1 = polish(big / (2.0 * qa));
        let z2 = polish(2.0 * qc / big);
        let deriv = |z: Complex64| 1.0 / (map.c * z + map.d).norm_sqr();
        let (rep, att) = if deriv(z1) > deriv(z2) { (z1, z2) } else { (z2, z1) };
        Ok(Self {
            map,
            repelling: IdealPoint::new(crate::hypdisk::turns_of(rep)),
            attracting: IdealPoint::new(crate::hypdisk::turns_of(att)),
            length: 2.0 * (tr / 2.0).acosh(),
        })
    }

    /// Element with fixed points known in closed form, given as boundary
    /// points `x` of the upper half-plane (`None` is `∞`).
    fn with_fixed_points(map: MobiusMap, repelling: Option<f64>, attracting: Option<f64>) -> Result<Self, FuchsianError> {
        let tr = (map.a + map.d).norm();
        if !(tr > 2.0) {
            return Err(FuchsianError::NotHyperbolic(tr));
        }
        Ok(Self {
            map,
            repelling: IdealPoint::new(cayley_turns(repelling)),
            attracting: IdealPoint::new(cayley_turns(attracting)),
            length: 2.0 * (tr / 2.0).acosh(),
        })
    }

    pub fn inverse(&self) -> Self {
        Self {
            map: self.map.inverse(),
            repelling: self.attracting,
            attracting: self.repelling,
            length: self.length,
        }
    }

    fn conjugated(&self, m: &MobiusMap) -> Result<Self, FuchsianError> {
        Self::new(m.compose(&self.map).compose(&m.inverse()))
    }
}

/// Pair of pants `⟨A, B⟩` with third boundary generator `C = (AB)⁻¹`.
#[derive(Debug, Clone, PartialEq)]
pub struct PantsGroup {
    pub lengths: [f64; 3],
    /// `A`, `B`, `C` as disk automorphisms.
    pub generators: [HyperbolicElement; 3],
    /// Signed `SL(2, R)` traces of `A`, `B`, `C`.
    pub traces: [f64; 3],
    /// Primary boundary intervals `J_A`, `J_B`, `J_C`.
    pub intervals: [CircleArc; 3],
    pub chi: i32,
}

/// The arc between the fixed points of `g` that avoids every point in `others`.
fn boundary_interval(g: &HyperbolicElement, others: &[f64]) -> Result<CircleArc, FuchsianError> {
    let (x, y) = (g.repelling.angle, g.attracting.angle);
    for arc in [CircleArc::new(x, y)?, CircleArc::new(y, x)?] {
        if others.iter().all(|&t| !arc.contains(t)) {
            return Ok(arc);
        }
    }
    Err(FuchsianError::Construction("axes are not nested correctly".into()))
}

/// `cosh d − 1` for the seam between the axes of lengths `2x`, `2y` opposite the half-length `z`.
fn seam_cosh_minus_one(x: f64, y: f64, z: f64) -> f64 {
    (z.cosh() + (x - y).cosh()) / (x.sinh() * y.sinh())
}

/// `T_d diag(e^{s h}, e^{−s h}) T_d⁻¹` with `T_d` the translation by `d` along the unit semicircle.
fn offset_generator(h: f64, s: f64, cm1: f64) -> Real2 {
    let d = 2.0 * (cm1 / 2.0).sqrt().asinh();
    let (ch, sh, cd, sd) = (h.cosh(), s * h.sinh(), 1.0 + cm1, d.sinh());
    [[ch + sh * cd, -sh * sd], [sh * sd, ch - sh * cd]]
}

fn max_abs(x: &Real2) -> f64 {
    x.iter().flatten().fold(0.0_f64, |m, v| m.max(v.abs()))
}

/// Pants with boundary geodesics of lengths `l1, l2, l3`.
///
/// The right-angled hexagon with alternate sides `l_k / 2` places the axis of
/// `A` on the imaginary axis and the axes of `B` and `C` at the seam distances
/// from it, with feet `l1 / 2` apart. Each generator is written in closed form
/// so its trace carries the prescribed length without cancellation.
pub fn build_pants(l1: f64, l2: f64, l3: f64) -> Result<PantsGroup, FuchsianError> {
    for l in [l1, l2, l3] {
        annulus_weight(l)?;
    }
    let (h1, h2, h3) = (l1 / 2.0, l2 / 2.0, l3 / 2.0);
    let a: Real2 = [[h1.exp(), 0.0], [0.0, (-h1).exp()]];
    let cm_ab = seam_cosh_minus_one(h1, h2, h3);
    let cm_ac = seam_cosh_minus_one(h1, h3, h2);
    let mut best: Option<(f64, Real2, Real2, [f64; 3])> = None;
    for s in [1.0, -1.0] {
        let b = offset_generator(h2, s, cm_ab);
        // Pants need tr A · tr B · tr AB < 0 with tr A, tr B > 0.
        if trace(&mul(&a, &b)) >= 0.0 {
            continue;
        }
        for sigma in [1.0, -1.0] {
            for tau in [1.0, -1.0] {
                let c0 = offset_generator(h3, tau, cm_ac);
                let e = (sigma * h1).exp();
                let c: Real2 = [[c0[0][0], c0[0][1] * e], [c0[1][0] / e, c0[1][1]]];
                let p = mul(&mul(&a, &b), &c);
                let scale = max_abs(&a) * max_abs(&b) * max_abs(&c);
                // tr C > 0 here, so the relation reads ABC = −I.
                let err = (p[0][0] + 1.0).abs().max((p[1][1] + 1.0).abs()).max(p[0][1].abs()).max(p[1][0].abs()) / scale;
                if best.map_or(true, |(e0, ..)| err < e0) {
                    best = Some((err, b, c, [s, sigma, tau]));
                }
            }
        }
    }
    let (err, b, c, [s, sigma, tau]) = best.ok_or_else(|| FuchsianError::Construction("no orientation gives tr AB < 0".into()))?;
    if err > RELATION_TOL {
        return Err(FuchsianError::Construction(format!("ABC differs from −I by {err:e}")));
    }
    // Signed traces of the SL(2, R) lift with ABC = I.
    let traces = [trace(&a), trace(&b), -trace(&c)];
    // Fixed points in closed form: solving for them from entries near e^{l/2} loses them for long cuffs.
    let d_of = |cm1: f64| 2.0 * (cm1 / 2.0).sqrt().asinh();
    let (rb, ab) = offset_fixed_points(s, d_of(cm_ab), 1.0);
    let (rc, ac) = offset_fixed_points(tau, d_of(cm_ac), (sigma * h1).exp());
    let gens = [
        HyperbolicElement::with_fixed_points(to_disk(&a), Some(0.0), None)?,
        HyperbolicElement::with_fixed_points(to_disk(&b), rb, ab)?,
        HyperbolicElement::with_fixed_points(to_disk(&c), rc, ac)?,
    ];
    let g = PantsGroup::assemble([l1, l2, l3], gens, traces)?;
    g.validate()?;
    Ok(g)
}

impl PantsGroup {
    fn assemble(lengths: [f64; 3], generators: [HyperbolicElement; 3], traces: [f64; 3]) -> Result<Self, FuchsianError> {
        let fixed: Vec<[f64; 2]> = generators
            .iter()
            .map(|g| [g.repelling.angle, g.attracting.angle])
            .collect();
        let mut intervals = Vec::with_capacity(3);
        for k in 0..3 {
            let others: Vec<f64> = (0..3).filter(|&j| j != k).flat_map(|j| fixed[j]).collect();
            intervals.push(boundary_interval(&generators[k], &others)?);
        }
        Ok(Self {
            lengths,
            generators,
            traces,
            intervals: [intervals[0], intervals[1], intervals[2]],
            chi: -1,
        })
    }

    /// Checks translation lengths and the pants trace conditions.
    pub fn validate(&self) -> Result<(), FuchsianError> {
        for (g, &l) in self.generators.iter().zip(&self.lengths) {
            if (g.length - l).abs() > LENGTH_TOL * l.max(1.0) {
                return Err(FuchsianError::Construction(format!(
                    "translation length {} instead of {l}",
                    g.length
                )));
            }
        }
        let [ta, tb, tc] = self.traces;
        if ta.abs() <= 2.0 || tb.abs() <= 2.0 || tc.abs() <= 2.0 {
            return Err(FuchsianError::NotHyperbolic(ta.abs().min(tb.abs()).min(tc.abs())));
        }
        // tr AB = tr C⁻¹ = tr C; a pants requires tr A · tr B · tr AB < 0.
        if ta * tb * tc >= 0.0 {
            return Err(FuchsianError::Construction("trace product is not negative".into()));
        }
        for k in 0..3 {
            for j in k + 1..3 {
                if !self.intervals[k].disjoint_closed(&self.intervals[j]) {
                    return Err(FuchsianError::Construction(format!("J_{k} meets J_{j}")));
                }
            }
        }
        Ok(())
    }

    /// The group conjugated by a disk automorphism.
    pub fn conjugated(&self, m: &MobiusMap) -> Result<Self, FuchsianError> {
        let gens = [
            self.generators[0].conjugated(m)?,
            self.generators[1].conjugated(m)?,
            self.generators[2].conjugated(m)?,
        ];
        Self::assemble(self.lengths, gens, self.traces)
    }

    /// Total weight `Σ l_k / π`.
    pub fn total_weight(&self) -> f64 {
        self.lengths.iter().map(|&l| l / std::f64::consts::PI).sum()
    }
}

/// A lift `g·J_k` of a boundary interval.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LiftedInterval {
    pub label: usize,
    /// Word in `A`, `a = A⁻¹`, `B`, `b = B⁻¹`; empty for the primary interval.
    pub word: String,
    pub arc: CircleArc,
    /// False when the true lift is shorter than `MIN_LIFT_LENGTH`; `arc` is then
    /// an arc of that length around it, so widths against it are upper bounds.
    pub resolved: bool,
}

fn same_arc(x: &CircleArc, y: &CircleArc) -> bool {
    let close = |s: f64, t: f64| {
        let d = ccw(s, t);
        d.min(1.0 - d) < LIFT_MATCH
    };
    close(x.start, y.start) && close(x.end, y.end)
}

fn inverse_letter(c: char) -> char {
    match c {
        'A' => 'a',
        'a' => 'A',
        'B' => 'b',
        _ => 'B',
    }
}

/// True when the word ends in a generator of the stabilizer of `J_label`.
fn ends_in_stabilizer(word: &str, label: usize) -> bool {
    match label {
        0 => word.ends_with(['A', 'a']),
        1 => word.ends_with(['B', 'b']),
        // C = (AB)⁻¹ = ba.
        _ => word.ends_with("ba") || word.ends_with("AB"),
    }
}

/// True when the word starts with a generator of the stabilizer of `J_label`.
fn starts_in_stabilizer(word: &str, label: usize) -> bool {
    match label {
        0 => word.starts_with(['A', 'a']),
        1 => word.starts_with(['B', 'b']),
        _ => word.starts_with("ba") || word.starts_with("AB"),
    }
}

/// Lifts `g·J_k` for reduced words `g` of length below `max_word`, deduplicated.
///
/// Words are grown by prepending one letter at a time and applying that
/// letter to the current arc, so every step is a ping-pong contraction and
/// no long product matrix is formed. Words ending in a stabilizer generator
/// of `J_k` only repeat earlier lifts and are pruned with their subtrees.
pub fn lift_intervals(g: &PantsGroup, max_word: usize) -> Result<Vec<LiftedInterval>, FuchsianError> {
    if max_word == 0 {
        return Err(FuchsianError::WordBound);
    }
    let letters = [
        ('A', g.generators[0].map),
        ('a', g.generators[0].map.inverse()),
        ('B', g.generators[1].map),
        ('b', g.generators[1].map.inverse()),
    ];
    let mut out: Vec<LiftedInterval> = g
        .intervals
        .iter()
        .enumerate()
        .map(|(k, &arc)| LiftedInterval {
            label: k,
            word: String::new(),
            arc,
            resolved: true,
        })
        .collect();
    let mut layer: Vec<usize> = (0..out.len()).collect();
    for _ in 1..max_word {
        let mut next = Vec::with_capacity(layer.len() * 3);
        for idx in layer {
            let (label, word, arc) = (out[idx].label, out[idx].word.clone(), out[idx].arc);
            for (c, x) in &letters {
                if word.starts_with(inverse_letter(*c)) {
                    continue;
                }
                let nw = format!("{c}{word}");
                if ends_in_stabilizer(&nw, label) {
                    continue;
                }
                let s = x.apply_ideal(IdealPoint::new(arc.start)).angle;
                let e = x.apply_ideal(IdealPoint::new(arc.end)).angle;
                let mid = x.apply_ideal(IdealPoint::new(arc.midpoint())).angle;
                // Below resolution roundoff can swap the endpoints and turn the image
                // into its complement; genuine lifts contain the image of the midpoint
                // and miss the primary intervals.
                let na = CircleArc::new(s, e).ok().filter(|na| {
                    ccw(s, e) >= MIN_LIFT_LENGTH
                        && na.contains(mid)
                        && g.intervals.iter().all(|j| na.disjoint_open(j))
                });
                let (na, resolved) = match na {
                    Some(na) => (na, true),
                    None => (
                        CircleArc::new(mid - MIN_LIFT_LENGTH / 2.0, mid + MIN_LIFT_LENGTH / 2.0)?,
                        false,
                    ),
                };
                if out.iter().any(|l| l.label == label && same_arc(&l.arc, &na)) {
                    continue;
                }
                out.push(LiftedInterval {
                    label,
                    word: nw,
                    arc: na,
                    resolved,
                });
                if !resolved {
                    // Descendants are smaller still.
                    continue;
                }
                next.push(out.len() - 1);
            }
        }
        layer = next;
    }
    Ok(out)
}

/// Widest quadrilateral between the primary `J_k` and a lift of `J_i`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArcWidth {
    pub k: usize,
    pub i: usize,
    pub wbar: f64,
    pub w: f64,
    /// Word of the achieving lift of `J_i`.
    pub word: String,
    /// False when the achieving lift is below resolution and `wbar` is an upper bound.
    pub resolved: bool,
}

fn arc_width_from(g: &PantsGroup, lifts: &[LiftedInterval], k: usize, i: usize, max_word: usize) -> Result<ArcWidth, FuchsianError> {
    if k >= 3 {
        return Err(FuchsianError::Label(k));
    }
    if i >= 3 {
        return Err(FuchsianError::Label(i));
    }
    let jk = g.intervals[k];
    let mut best: Option<(f64, &LiftedInterval)> = None;
    // Lifts s·g·J_i with s fixing J_k give the same quadrilateral as g·J_i.
    for l in lifts.iter().filter(|l| l.label == i && !starts_in_stabilizer(&l.word, k)) {
        if same_arc(&l.arc, &jk) || !l.arc.disjoint_closed(&jk) {
            continue;
        }
        let wbar = quad_width_exact(&Quadrilateral::new(jk, l.arc)?)?;
        // Exact ties keep the shortest word.
        if best.map_or(true, |(b, _)| wbar > b + TIE * b.max(1.0)) {
            best = Some((wbar, l));
        }
    }
    let (wbar, lift) = best.ok_or(FuchsianError::NoAdmissiblePair { k, i, max_word })?;
    Ok(ArcWidth {
        k,
        i,
        wbar,
        w: truncate_width(wbar)?,
        word: lift.word.clone(),
        resolved: lift.resolved,
    })
}

/// `W̄(α)` for the arc joining boundaries `k` and `i`, maximized over lifts within the word bound.
pub fn arc_width(g: &PantsGroup, k: usize, i: usize, max_word: usize) -> Result<ArcWidth, FuchsianError> {
    let lifts = lift_intervals(g, max_word)?;
    arc_width_from(g, &lifts, k, i, max_word)
}

/// Both sides of the thin-thick inequality for a pair of pants.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurfaceReport {
    pub lengths: [f64; 3],
    pub chi: i32,
    pub max_word: usize,
    pub boundary_weights: [f64; 3],
    /// `W(S) = Σ l_k / π`.
    pub total_weight: f64,
    /// The six arcs `(k, i)` with `k ≤ i`.
    pub arcs: Vec<ArcWidth>,
    /// `2 Σ W(α)` over arcs of positive weight.
    pub diagram_sum: f64,
    /// `W(S) − 2 Σ W(α)`.
    pub deficit: f64,
    /// `W(J_k) − Σ W(α)` over arc ends landing on `J_k`.
    pub boundary_slack: [f64; 3],
    /// Number of arcs with positive weight.
    pub diagram_size: usize,
}

/// Thin-thick report of a pair of pants at the given word bound.
pub fn thin_thick_surface_report(g: &PantsGroup, max_word: usize) -> Result<SurfaceReport, FuchsianError> {
    g.validate()?;
    let lifts = lift_intervals(g, max_word)?;
    let mut arcs = Vec::with_capacity(6);
    for k in 0..3 {
        for i in k..3 {
            arcs.push(arc_width_from(g, &lifts, k, i, max_word)?);
        }
    }
    let mut weights = [0.0; 3];
    for (w, &l) in weights.iter_mut().zip(&g.lengths) {
        *w = annulus_weight(l)?;
    }
    let mut slack = weights;
    for a in &arcs {
        slack[a.k] -= a.w;
        slack[a.i] -= a.w;
    }
    let diagram_sum = 2.0 * arcs.iter().fold(0.0, |acc, a| acc + a.w);
    let total = weights.iter().sum::<f64>();
    Ok(SurfaceReport {
        lengths: g.lengths,
        chi: g.chi,
        max_word,
        boundary_weights: weights,
        total_weight: total,
        diagram_size: arcs.iter().filter(|a| a.w > 0.0).count(),
        arcs,
        diagram_sum,
        deficit: total - diagram_sum,
        boundary_slack: slack,
    })
}
