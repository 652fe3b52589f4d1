//! Chords between marked points, their lifts under doubling, pull-off times,
//! segment classes, the two-to-one correspondence and vertical accesses.
//!
//! Positions are integers modulo `2(2^p − 1)`: `θ_n` sits at `2k_n` and its
//! primed copy `θ_n + 1/2` at `2k_n + 2^p − 1`. Every predicate is exact.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use super::orbit::AngleOrbit;
use super::PullbackError;

/// Marked point `K_n`, or its symmetric preimage copy `K_n′` when primed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Endpoint {
    pub index: usize,
    pub primed: bool,
}

impl Endpoint {
    pub fn plain(index: usize) -> Self {
        Self { index, primed: false }
    }
}

/// Chord joining two distinct endpoints, stored with the smaller endpoint first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Chord {
    pub a: Endpoint,
    pub b: Endpoint,
}

impl Chord {
    pub fn new(a: Endpoint, b: Endpoint) -> Result<Self, PullbackError> {
        if a == b {
            return Err(PullbackError::Chord("endpoints coincide".into()));
        }
        Ok(if a < b { Self { a, b } } else { Self { a: b, b: a } })
    }

    /// Unprimed chord `(K_i, K_j)`.
    pub fn plain(i: usize, j: usize) -> Result<Self, PullbackError> {
        Self::new(Endpoint::plain(i), Endpoint::plain(j))
    }

    pub fn is_plain(&self) -> bool {
        !self.a.primed && !self.b.primed
    }

    /// One endpoint primed and the other not.
    pub fn is_mixed(&self) -> bool {
        self.a.primed != self.b.primed
    }

    pub fn indices(&self) -> (usize, usize) {
        (self.a.index, self.b.index)
    }

    pub fn lands_on(&self, n: usize) -> bool {
        self.a.index == n || self.b.index == n
    }

    /// Index shift by `s` modulo `p`, primes kept.
    pub fn shifted(&self, p: usize, s: isize) -> Self {
        let sh = |e: Endpoint| Endpoint {
            index: (e.index as isize + s).rem_euclid(p as isize) as usize,
            primed: e.primed,
        };
        Self::new(sh(self.a), sh(self.b)).expect("shift keeps endpoints distinct")
    }
}

/// Exact position of an endpoint modulo `2(2^p − 1)`.
pub fn position(orbit: &AngleOrbit, e: Endpoint) -> u64 {
    let d = orbit.denominator();
    (2 * orbit.numerator(e.index) + if e.primed { d } else { 0 }) % (2 * d)
}

/// Strict crossing of chords given by positions; shared endpoints do not cross.
pub fn positions_cross((a, b): (u64, u64), (c, d): (u64, u64)) -> bool {
    if a == c || a == d || b == c || b == d {
        return false;
    }
    let (lo, hi) = (a.min(b), a.max(b));
    let inside = |x: u64| x > lo && x < hi;
    inside(c) != inside(d)
}

pub fn chords_cross(orbit: &AngleOrbit, x: &Chord, y: &Chord) -> bool {
    let pos = |c: &Chord| (position(orbit, c.a), position(orbit, c.b));
    positions_cross(pos(x), pos(y))
}

/// Positions of the critical diameter `θ_0`, `θ_0 + 1/2`.
pub fn diameter(orbit: &AngleOrbit) -> (u64, u64) {
    (position(orbit, Endpoint::plain(0)), position(orbit, Endpoint { index: 0, primed: true }))
}

pub fn crosses_diameter(orbit: &AngleOrbit, c: &Chord) -> bool {
    positions_cross((position(orbit, c.a), position(orbit, c.b)), diameter(orbit))
}

/// Both lifts of a chord and whether it pulls off.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ChordLift {
    pub lifts: [Chord; 2],
    /// Both lifts have one primed and one unprimed end.
    pub pulled_off: bool,
}

impl ChordLift {
    /// The unprimed lift, when it exists.
    pub fn legitimate(&self) -> Option<Chord> {
        self.lifts.iter().copied().find(Chord::is_plain)
    }
}

/// Lifts of an unprimed chord: endpoint preimages `K_{n−1}`, `K_{n−1}′` are paired
/// so that neither lift crosses the critical diameter.
pub fn lift_chord(orbit: &AngleOrbit, c: &Chord) -> Result<ChordLift, PullbackError> {
    if !c.is_plain() {
        return Err(PullbackError::Chord("lifts are defined for unprimed chords".into()));
    }
    let p = orbit.p();
    let prev = |e: Endpoint, primed| Endpoint {
        index: (e.index + p - 1) % p,
        primed,
    };
    let (ua, pa, ub, pb) = (prev(c.a, false), prev(c.a, true), prev(c.b, false), prev(c.b, true));
    let same = [Chord::new(ua, ub)?, Chord::new(pa, pb)?];
    if same.iter().all(|x| !crosses_diameter(orbit, x)) {
        return Ok(ChordLift {
            lifts: same,
            pulled_off: false,
        });
    }
    let mixed = [Chord::new(ua, pb)?, Chord::new(pa, ub)?];
    debug_assert!(mixed.iter().all(|x| !crosses_diameter(orbit, x)));
    Ok(ChordLift {
        lifts: mixed,
        pulled_off: true,
    })
}

/// One lift step of a pullback trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub step: usize,
    pub chord: Chord,
    pub lift: Option<Chord>,
    pub pulled_off: bool,
}

/// Iterated unprimed lifts until pull-off.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PulloffTrace {
    pub start: Chord,
    pub steps: Vec<TraceStep>,
    /// Step at which both lifts become illegitimate.
    pub time: usize,
}

impl PulloffTrace {
    /// `β`, the last legitimate pullback (the start itself when `time = 1`).
    pub fn last_legitimate(&self) -> Chord {
        self.steps.last().expect("at least one step").chord
    }
}

/// Runs the pullback of an unprimed chord until it pulls off.
///
/// Chords can only repeat, so a repeat within the `3p` bound is reported as a
/// cycle with its witness.
pub fn pulloff_trace(orbit: &AngleOrbit, c: &Chord) -> Result<PulloffTrace, PullbackError> {
    let p = orbit.p();
    let mut seen = HashSet::new();
    let mut cur = *c;
    let mut steps = Vec::new();
    for step in 1..=3 * p {
        if !seen.insert(cur) {
            return Err(PullbackError::Cycle {
                start: *c,
                repeated: cur,
                step,
            });
        }
        let l = lift_chord(orbit, &cur)?;
        let lift = l.legitimate();
        steps.push(TraceStep {
            step,
            chord: cur,
            lift,
            pulled_off: l.pulled_off,
        });
        match lift {
            Some(next) if !l.pulled_off => cur = next,
            _ => {
                return Ok(PulloffTrace {
                    start: *c,
                    steps,
                    time: step,
                })
            }
        }
    }
    Err(PullbackError::Cycle {
        start: *c,
        repeated: cur,
        step: 3 * p,
    })
}

pub fn pulloff_time(orbit: &AngleOrbit, c: &Chord) -> Result<usize, PullbackError> {
    Ok(pulloff_trace(orbit, c)?.time)
}

/// All unprimed chords between marked points.
pub fn all_chords(p: usize) -> Vec<Chord> {
    let mut out = Vec::new();
    for i in 0..p {
        for j in i + 1..p {
            out.push(Chord::plain(i, j).expect("distinct"));
        }
    }
    out
}

/// Unprimed chords that do not cross the critical diameter.
pub fn horizontal_chords(orbit: &AngleOrbit) -> Vec<Chord> {
    all_chords(orbit.p())
        .into_iter()
        .filter(|c| !crosses_diameter(orbit, c))
        .collect()
}

/// Class of a segment in a translation window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum SegmentClass {
    /// The translate by `−1` crosses the chord.
    SelfIntersecting,
    /// The translate by `−1` leaves the window.
    Peripheral,
    /// Consecutive marked indices.
    Short,
    /// Index distance 2: a concatenation of two short segments around the middle set.
    SnakeCandidate,
    Long,
}

/// Classifies an unprimed chord with both indices in the window `[lo, hi]`.
///
/// Precedence: peripheral, self-intersecting, short, snake candidate, long.
pub fn classify_segment(orbit: &AngleOrbit, c: &Chord, window: (usize, usize)) -> Result<SegmentClass, PullbackError> {
    let (lo, hi) = window;
    let (i, j) = c.indices();
    if !c.is_plain() || lo > hi || hi >= orbit.p() || [i, j].iter().any(|&x| x < lo || x > hi) {
        return Err(PullbackError::Window { lo, hi, chord: *c });
    }
    if i.min(j) == lo {
        return Ok(SegmentClass::Peripheral);
    }
    let translate = c.shifted(orbit.p(), -1);
    if chords_cross(orbit, c, &translate) {
        return Ok(SegmentClass::SelfIntersecting);
    }
    Ok(match i.abs_diff(j) {
        1 => SegmentClass::Short,
        2 => SegmentClass::SnakeCandidate,
        _ => SegmentClass::Long,
    })
}

/// Counts of each class over all chords in the window.
pub fn segment_census(orbit: &AngleOrbit, window: (usize, usize)) -> Result<BTreeMap<SegmentClass, usize>, PullbackError> {
    let mut out = BTreeMap::new();
    for i in window.0..=window.1 {
        for j in i + 1..=window.1 {
            *out.entry(classify_segment(orbit, &Chord::plain(i, j)?, window)?).or_insert(0) += 1;
        }
    }
    Ok(out)
}

/// Fibers of `α ↦ β(α)` over chords landing on `K_0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwoToOneVerdict {
    pub p: usize,
    pub max_fiber: usize,
    /// `(β, [α, …])` for every image.
    pub fibers: Vec<(Chord, Vec<Chord>)>,
    /// Chords landing on `K_0` that never pull off.
    pub cycling: Vec<Chord>,
    /// Every fiber of size 2 is `{(K_0, K_l), (K_0, K_{−l})}`.
    pub pairs_symmetric: bool,
    pub pass: bool,
}

pub fn two_to_one_check(orbit: &AngleOrbit) -> TwoToOneVerdict {
    let p = orbit.p();
    let mut fibers: BTreeMap<Chord, Vec<Chord>> = BTreeMap::new();
    let mut cycling = Vec::new();
    for l in 1..p {
        let alpha = Chord::plain(0, l).expect("distinct");
        match pulloff_trace(orbit, &alpha) {
            Ok(t) => fibers.entry(t.last_legitimate()).or_default().push(alpha),
            Err(_) => cycling.push(alpha),
        }
    }
    let max_fiber = fibers.values().map(Vec::len).max().unwrap_or(0);
    let pairs_symmetric = fibers.values().filter(|f| f.len() == 2).all(|f| {
        let (l1, l2) = (f[0].b.index, f[1].b.index);
        l1 + l2 == p
    });
    TwoToOneVerdict {
        p,
        max_fiber,
        fibers: fibers.into_iter().collect(),
        cycling,
        pairs_symmetric,
        pass: max_fiber <= 2 && pairs_symmetric,
    }
}

/// Pair of symmetric vertical accesses to `K_0` avoiding a diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct VerticalWitness {
    /// Boundary position of `γ^+` (modulo `2(2^p − 1)·2`, i.e. in quarter units of the marked lattice).
    pub access: u64,
    /// Boundary position of the symmetric copy.
    pub mirror: u64,
    /// Modulus for both positions.
    pub modulus: u64,
}

/// Searches for a boundary point `φ` such that the radial paths `φ → θ_0` and
/// `φ + 1/2 → θ_0 + 1/2` cross no diagram chord.
pub fn vertical_arc_exists(orbit: &AngleOrbit, diagram: &[Chord]) -> Result<VerticalWitness, PullbackError> {
    // Refine positions by 2 so midpoints between lattice points are exact.
    let m = 4 * orbit.denominator();
    let half = m / 2;
    let pos = |e: Endpoint| 2 * position(orbit, e);
    let mut pts: Vec<u64> = (0..orbit.p())
        .flat_map(|n| [pos(Endpoint::plain(n)), pos(Endpoint { index: n, primed: true })])
        .collect();
    pts.sort();
    pts.dedup();
    let chords: Vec<(u64, u64)> = diagram.iter().map(|c| (pos(c.a), pos(c.b))).collect();
    let (t0, t0m) = (pos(Endpoint::plain(0)), pos(Endpoint { index: 0, primed: true }));
    let clear = |from: u64, to: u64| chords.iter().all(|&c| !positions_cross((from, to), c));
    for w in 0..pts.len() {
        let (x, y) = (pts[w], if w + 1 < pts.len() { pts[w + 1] } else { pts[0] + m });
        let phi = ((x + y) / 2) % m;
        let mirror = (phi + half) % m;
        if clear(phi, t0) && clear(mirror, t0m) {
            return Ok(VerticalWitness {
                access: phi,
                mirror,
                modulus: m,
            });
        }
    }
    Err(PullbackError::NoVerticalArc)
}
