//! Ideal markings of the circle: intervals, gaps and the full tiling.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::LaminationError;
use crate::hypdisk::{ccw, normalize_turns};
use crate::widths::CircleArc;

/// Gaps shorter than this (in turns) are treated as touching endpoints.
pub const TOUCH: f64 = 1e-12;

/// Cyclically ordered, pairwise disjoint arcs `I_0, …, I_{p-1}`.
///
/// Gap `G_k` is the arc from the end of `I_k` to the start of `I_{k+1}`;
/// it is absent when the two intervals touch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMarking", into = "RawMarking")]
pub struct IdealMarking {
    intervals: Vec<CircleArc>,
}

#[derive(Serialize, Deserialize)]
struct RawMarking {
    intervals: Vec<CircleArc>,
}

impl TryFrom<RawMarking> for IdealMarking {
    type Error = LaminationError;
    fn try_from(r: RawMarking) -> Result<Self, LaminationError> {
        IdealMarking::new(r.intervals)
    }
}

impl From<IdealMarking> for RawMarking {
    fn from(m: IdealMarking) -> Self {
        RawMarking {
            intervals: m.intervals,
        }
    }
}

/// Kind and label of a tile of the full marking.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TileKind {
    Interval(usize),
    Gap(usize),
}

/// Intervals together with the nonempty gaps, as one full tiling.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FullMarking {
    pub marking: IdealMarking,
    pub kinds: Vec<TileKind>,
    /// Tile index of each interval.
    pub interval_tile: Vec<usize>,
}

/// Output of [`validate_marking`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MarkingDiagnostics {
    pub p: usize,
    pub gaps: usize,
    /// Number of tiles of the full marking.
    pub cardinality: usize,
    pub full_tiling: bool,
}

fn gap_length(a: &CircleArc, b: &CircleArc) -> f64 {
    let g = ccw(a.end, b.start);
    if g < TOUCH || g > 1.0 - TOUCH {
        0.0
    } else {
        g
    }
}

impl IdealMarking {
    /// Validated marking; intervals must be listed in counterclockwise order.
    pub fn new(intervals: Vec<CircleArc>) -> Result<Self, LaminationError> {
        let p = intervals.len();
        if p < 3 {
            return Err(LaminationError::TooFewIntervals(p));
        }
        for i in 0..p {
            for j in i + 1..p {
                if !intervals[i].disjoint_open(&intervals[j]) {
                    return Err(LaminationError::Overlap(i, j));
                }
            }
        }
        let total: f64 = (0..p)
            .map(|k| intervals[k].length() + gap_length(&intervals[k], &intervals[(k + 1) % p]))
            .sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(LaminationError::Ordering);
        }
        Ok(Self { intervals })
    }

    /// Full tiling by the arcs between consecutive cut points.
    pub fn from_cuts(cuts: &[f64]) -> Result<Self, LaminationError> {
        let p = cuts.len();
        let arcs = (0..p)
            .map(|k| CircleArc::new(cuts[k], cuts[(k + 1) % p]))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(arcs)
    }

    /// `p` equal intervals, each followed by a gap of `gap` turns.
    pub fn symmetric(p: usize, gap: f64) -> Result<Self, LaminationError> {
        let step = 1.0 / p as f64;
        let arcs = (0..p)
            .map(|k| CircleArc::new(k as f64 * step, (k + 1) as f64 * step - gap))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(arcs)
    }

    pub fn p(&self) -> usize {
        self.intervals.len()
    }

    pub fn intervals(&self) -> &[CircleArc] {
        &self.intervals
    }

    pub fn interval(&self, n: usize) -> Result<CircleArc, LaminationError> {
        self.intervals
            .get(n)
            .copied()
            .ok_or(LaminationError::Label(n))
    }

    /// Gap `G_k`, if nonempty.
    pub fn gap(&self, k: usize) -> Result<Option<CircleArc>, LaminationError> {
        let p = self.p();
        let a = self.interval(k)?;
        let b = self.intervals[(k + 1) % p];
        Ok(if gap_length(&a, &b) == 0.0 {
            None
        } else {
            Some(CircleArc::new(a.end, b.start)?)
        })
    }

    pub fn gaps(&self) -> Vec<Option<CircleArc>> {
        (0..self.p()).map(|k| self.gap(k).unwrap()).collect()
    }

    pub fn is_full(&self) -> bool {
        self.gaps().iter().all(Option::is_none)
    }

    /// True when `I_m` and `I_n` coincide or share an endpoint.
    pub fn adjacent(&self, m: usize, n: usize) -> bool {
        let p = self.p();
        m == n
            || (n == (m + 1) % p && self.gaps()[m].is_none())
            || (m == (n + 1) % p && self.gaps()[n].is_none())
    }

    /// The full marking: intervals and nonempty gaps in cyclic order.
    pub fn full(&self) -> FullMarking {
        let mut arcs = Vec::new();
        let mut kinds = Vec::new();
        let mut interval_tile = Vec::new();
        for (k, g) in self.gaps().into_iter().enumerate() {
            interval_tile.push(arcs.len());
            arcs.push(self.intervals[k]);
            kinds.push(TileKind::Interval(k));
            if let Some(g) = g {
                arcs.push(g);
                kinds.push(TileKind::Gap(k));
            }
        }
        FullMarking {
            marking: IdealMarking { intervals: arcs },
            kinds,
            interval_tile,
        }
    }
}

impl FullMarking {
    /// Tile index of gap `G_k`, if nonempty.
    pub fn gap_tile(&self, k: usize) -> Option<usize> {
        self.kinds.iter().position(|t| *t == TileKind::Gap(k))
    }
}

/// Confirms the marking invariants and reports its gap structure.
pub fn validate_marking(m: &IdealMarking) -> Result<MarkingDiagnostics, LaminationError> {
    let m = IdealMarking::new(m.intervals.clone())?;
    let gaps = m.gaps().iter().filter(|g| g.is_some()).count();
    Ok(MarkingDiagnostics {
        p: m.p(),
        gaps,
        cardinality: m.p() + gaps,
        full_tiling: gaps == 0,
    })
}

/// Minimum spacing of random cut points, in turns.
const MIN_SPACING: f64 = 1e-4;

fn random_cuts<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    loop {
        let mut c: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
        c.sort_by(|a, b| a.total_cmp(b));
        let ok = (0..n).all(|k| ccw(c[k], c[(k + 1) % n]) > MIN_SPACING);
        if ok {
            return c;
        }
    }
}

/// Random marking with `p` intervals; each slot keeps a gap with probability `gap_prob`.
pub fn random_marking<R: Rng>(rng: &mut R, p: usize, gap_prob: f64) -> IdealMarking {
    let cuts = random_cuts(rng, p);
    let arcs = (0..p)
        .map(|k| {
            let (s, e) = (cuts[k], cuts[(k + 1) % p]);
            let len = ccw(s, e);
            let keep = if rng.random::<f64>() < gap_prob {
                0.1 + 0.8 * rng.random::<f64>()
            } else {
                1.0
            };
            if keep == 1.0 {
                CircleArc::new(s, e).unwrap()
            } else {
                CircleArc::new(s, s + keep * len).unwrap()
            }
        })
        .collect();
    IdealMarking::new(arcs).expect("random marking is valid by construction")
}

/// Random full tiling whose slot lengths are log-uniform over `e^{±spread/2}`,
/// followed by gaps kept with probability `gap_prob` as in [`random_marking`].
///
/// Mixed scales make long intervals next to short ones, which is where local
/// weights and diagram entries become large.
pub fn random_multiscale_marking<R: Rng>(rng: &mut R, p: usize, gap_prob: f64, spread: f64) -> IdealMarking {
    loop {
        let raw: Vec<f64> = (0..p).map(|_| (spread * (rng.random::<f64>() - 0.5)).exp()).collect();
        let total: f64 = raw.iter().sum();
        if raw.iter().any(|l| l / total <= MIN_SPACING) {
            continue;
        }
        let start = rng.random::<f64>();
        let mut cuts = Vec::with_capacity(p);
        let mut t = start;
        for l in &raw {
            cuts.push(normalize_turns(t));
            t += l / total;
        }
        let arcs = (0..p)
            .map(|k| {
                let (s, e) = (cuts[k], cuts[(k + 1) % p]);
                if rng.random::<f64>() < gap_prob {
                    CircleArc::new(s, s + (0.1 + 0.8 * rng.random::<f64>()) * ccw(s, e))
                } else {
                    CircleArc::new(s, e)
                }
            })
            .collect::<Result<Vec<_>, _>>();
        // Cuts are not sorted from 0, so rotate into increasing start order.
        if let Ok(mut arcs) = arcs {
            arcs.sort_by(|a, b| a.start.total_cmp(&b.start));
            if let Ok(m) = IdealMarking::new(arcs) {
                return m;
            }
        }
    }
}

/// Refines a full tiling by splitting one random interval in two.
pub fn split_random_interval<R: Rng>(rng: &mut R, m: &IdealMarking) -> IdealMarking {
    let full = m.full();
    let mut cuts: Vec<f64> = full.marking.intervals.iter().map(|a| a.start).collect();
    let k = rng.random_range(0..cuts.len());
    let a = full.marking.intervals[k];
    let t = 0.2 + 0.6 * rng.random::<f64>();
    cuts.insert(k + 1, crate::hypdisk::normalize_turns(a.start + t * a.length()));
    IdealMarking::from_cuts(&cuts).expect("refinement of a valid tiling")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn arc(s: f64, e: f64) -> CircleArc {
        CircleArc::new(s, e).unwrap()
    }

    #[test]
    fn quarter_arcs_are_a_full_tiling() {
        let m = IdealMarking::from_cuts(&[0.0, 0.25, 0.5, 0.75]).unwrap();
        let d = validate_marking(&m).unwrap();
        assert_eq!(d.p, 4);
        assert_eq!(d.gaps, 0);
        assert!(d.full_tiling);
        assert!(m.adjacent(0, 1) && m.adjacent(3, 0) && !m.adjacent(0, 2));
    }

    #[test]
    fn overlap_and_order_rejected() {
        let e = IdealMarking::new(vec![arc(0.0, 0.3), arc(0.2, 0.5), arc(0.6, 0.7)]);
        assert_eq!(e, Err(LaminationError::Overlap(0, 1)));
        let e = IdealMarking::new(vec![arc(0.0, 0.1), arc(0.6, 0.7), arc(0.3, 0.4)]);
        assert_eq!(e, Err(LaminationError::Ordering));
        let e = IdealMarking::new(vec![arc(0.0, 0.1), arc(0.6, 0.7)]);
        assert_eq!(e, Err(LaminationError::TooFewIntervals(2)));
    }

    #[test]
    fn json_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let m = random_marking(&mut rng, 7, 0.5);
            let s = serde_json::to_string(&m).unwrap();
            let back: IdealMarking = serde_json::from_str(&s).unwrap();
            assert_eq!(back, m);
        }
        let bad = r#"{"intervals": [[0.0, 0.3], [0.2, 0.5], [0.6, 0.7]]}"#;
        assert!(serde_json::from_str::<IdealMarking>(bad).is_err());
    }

    #[test]
    fn full_marking_interleaves_gaps() {
        let m = IdealMarking::symmetric(4, 0.05).unwrap();
        let f = m.full();
        assert_eq!(f.marking.p(), 8);
        assert!(f.marking.is_full());
        assert_eq!(f.kinds[1], TileKind::Gap(0));
        assert_eq!(f.interval_tile, vec![0, 2, 4, 6]);
        assert_eq!(f.gap_tile(3), Some(7));
        assert!(!m.adjacent(0, 1));
    }

    #[test]
    fn refinement_adds_one_interval() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let mut m = random_marking(&mut rng, 4, 0.0);
        for p in 5..20 {
            m = split_random_interval(&mut rng, &m);
            assert_eq!(m.p(), p);
            assert!(m.is_full());
        }
    }
}
