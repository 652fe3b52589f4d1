//! Elephant-eye combinatorics: sector placements, Hubbard-tree edge dynamics,
//! the Hubbard matrix, the bounded-degree property, Perron data of the local
//! flux recursion and translation-domain pullbacks.
//!
//! Little Julia sets `K_1, …, K_{p−1}` sit in the sectors `S_i` attached to
//! `α` or `Z_i` attached to `−α`; `K_0` is the only set in the central
//! domain `Υ`. Edges are `γ_n` (from `K_n` to `±α`) and `γ_0^±` (from `K_0`
//! to `±α`).

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Power iteration stops once successive Perron vectors agree to this.
pub const PERRON_TOL: f64 = 1e-13;

const PERRON_MAX_ITER: usize = 1_000_000;

/// Axiom named by a validation failure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Axiom {
    /// Rotation number `1/q` and the sector mapping rules.
    E1,
    /// `K_0` is the only little Julia set in `Υ`.
    E2,
    /// `p = q + b` with `b < q`.
    E3,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub axiom: Axiom,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}: {}", self.axiom, self.message)
    }
}

/// Errors raised by the elephant engine.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ElephantError {
    #[error("invalid combinatorics: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Violations(Vec<Violation>),
    #[error("translation domain [{lo}, {hi}] leaves the region [1, {max}]")]
    OutOfRegion { lo: i64, hi: i64, max: usize },
    #[error("Hubbard matrix is reducible")]
    Reducible,
    #[error("weight vector has length {got}, expected {expected}")]
    WeightLength { got: usize, expected: usize },
    #[error("weight {0} is negative or not finite")]
    BadWeight(f64),
    #[error("bad sector label {0:?}")]
    SectorLabel(String),
    #[error("power iteration did not converge")]
    NonConvergence,
}

/// `q ≥ 2`, `b ≥ 0` and period `p = q + b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElephantParams {
    pub q: usize,
    pub b: usize,
}

impl ElephantParams {
    pub fn new(q: usize, b: usize) -> Result<Self, ElephantError> {
        let s = Self { q, b };
        let v = s.violations();
        if v.is_empty() {
            Ok(s)
        } else {
            Err(ElephantError::Violations(v))
        }
    }

    pub fn p(&self) -> usize {
        self.q + self.b
    }

    fn violations(&self) -> Vec<Violation> {
        let mut v = Vec::new();
        if self.q < 2 {
            v.push(Violation {
                axiom: Axiom::E3,
                message: format!("q = {} must be at least 2", self.q),
            });
        }
        if self.b >= self.q {
            v.push(Violation {
                axiom: Axiom::E3,
                message: format!("b = {} must be smaller than q = {}", self.b, self.q),
            });
        }
        v
    }
}

/// Domain containing a little Julia set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sector {
    Upsilon,
    S(usize),
    Z(usize),
}

impl fmt::Display for Sector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sector::Upsilon => write!(f, "U"),
            Sector::S(i) => write!(f, "S{i}"),
            Sector::Z(i) => write!(f, "Z{i}"),
        }
    }
}

impl FromStr for Sector {
    type Err = ElephantError;
    fn from_str(s: &str) -> Result<Self, ElephantError> {
        let bad = || ElephantError::SectorLabel(s.to_string());
        match s.chars().next() {
            Some('U') if s.len() == 1 => Ok(Sector::Upsilon),
            Some('S') => s[1..].parse().map(Sector::S).map_err(|_| bad()),
            Some('Z') => s[1..].parse().map(Sector::Z).map_err(|_| bad()),
            _ => Err(bad()),
        }
    }
}

impl Serialize for Sector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Sector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Sectors of `K_1, …, K_{p−1}` (entry `n − 1` holds the sector of `K_n`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SectorPlacement {
    pub sectors: Vec<Sector>,
}

impl SectorPlacement {
    /// Sector of `K_n` for `1 ≤ n ≤ p − 1`.
    pub fn of(&self, n: usize) -> Sector {
        self.sectors[n - 1]
    }

    /// Placement whose extra sets form consecutive blocks of the given lengths.
    ///
    /// `K_1, …, K_{q−1}` fill `S_1, …, S_{q−1}`; a block of length `ℓ` then
    /// occupies `Z_{q−ℓ}, S_{q−ℓ+1}, …, S_{q−1}`.
    pub fn from_blocks(params: ElephantParams, blocks: &[usize]) -> Result<Self, ElephantError> {
        let total: usize = blocks.iter().sum();
        if total != params.b || blocks.contains(&0) {
            return Err(ElephantError::Violations(vec![Violation {
                axiom: Axiom::E3,
                message: format!("blocks {blocks:?} do not form a composition of b = {}", params.b),
            }]));
        }
        let q = params.q;
        let mut sectors: Vec<Sector> = (1..q).map(Sector::S).collect();
        for &l in blocks {
            sectors.push(Sector::Z(q - l));
            sectors.extend((q - l + 1..q).map(Sector::S));
        }
        Ok(Self { sectors })
    }

    /// Block lengths of the extra sets.
    pub fn blocks(&self, params: ElephantParams) -> Vec<usize> {
        let mut out = Vec::new();
        for s in self.sectors.iter().skip(params.q - 1) {
            match s {
                Sector::Z(i) => out.push(params.q - i),
                _ => {}
            }
        }
        out
    }
}

/// All compositions of `b`, in lexicographic order.
pub fn compositions(b: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for l in 1..=rest {
            cur.push(l);
            go(rest - l, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(b, &mut Vec::new(), &mut out);
    out
}

/// Every placement satisfying E1–E3 (there are `2^{b−1}` for `b ≥ 1`).
pub fn enumerate_placements(params: ElephantParams) -> Vec<SectorPlacement> {
    compositions(params.b)
        .iter()
        .map(|c| SectorPlacement::from_blocks(params, c).expect("compositions of b"))
        .collect()
}

/// All axiom violations of a placement.
pub fn placement_violations(params: ElephantParams, placement: &SectorPlacement) -> Vec<Violation> {
    let mut v = params.violations();
    let (q, p) = (params.q, params.p());
    if placement.sectors.len() + 1 != p {
        v.push(Violation {
            axiom: Axiom::E3,
            message: format!("{} sectors given for period {p}", placement.sectors.len()),
        });
        return v;
    }
    for (idx, s) in placement.sectors.iter().enumerate() {
        let n = idx + 1;
        match *s {
            Sector::Upsilon => v.push(Violation {
                axiom: Axiom::E2,
                message: format!("K_{n} lies in Υ together with K_0"),
            }),
            Sector::S(i) | Sector::Z(i) if i == 0 || i >= q => v.push(Violation {
                axiom: Axiom::E1,
                message: format!("K_{n} in {s}, sector index outside 1..{}", q - 1),
            }),
            _ => {}
        }
    }
    if !v.is_empty() {
        return v;
    }
    if placement.of(1) != Sector::S(1) {
        v.push(Violation {
            axiom: Axiom::E1,
            message: format!("Υ' covers S_1, so K_1 must lie in S_1, not {}", placement.of(1)),
        });
    }
    for n in 1..p - 1 {
        let (cur, next) = (placement.of(n), placement.of(n + 1));
        let i = match cur {
            Sector::S(i) | Sector::Z(i) => i,
            Sector::Upsilon => unreachable!(),
        };
        if i + 1 < q {
            if next != Sector::S(i + 1) {
                v.push(Violation {
                    axiom: Axiom::E1,
                    message: format!("K_{n} in {cur} maps into S{}, but K_{} is in {next}", i + 1, n + 1),
                });
            }
        } else if !matches!(next, Sector::Z(_)) {
            v.push(Violation {
                axiom: Axiom::E1,
                message: format!(
                    "K_{n} in {cur} maps into Υ ∪ Z, and Υ holds only K_0, but K_{} is in {next}",
                    n + 1
                ),
            });
        }
    }
    let last = placement.of(p - 1);
    if !matches!(last, Sector::S(i) | Sector::Z(i) if i == q - 1) {
        v.push(Violation {
            axiom: Axiom::E1,
            message: format!("K_{} maps to K_0 ∈ Υ, so it must lie in S_{} ∪ Z_{}, not {last}", p - 1, q - 1, q - 1),
        });
    }
    v
}

/// Validated elephant-eye model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElephantModel {
    pub q: usize,
    pub b: usize,
    pub placement: SectorPlacement,
}

pub fn build_model(params: ElephantParams, placement: SectorPlacement) -> Result<ElephantModel, ElephantError> {
    let v = placement_violations(params, &placement);
    if !v.is_empty() {
        return Err(ElephantError::Violations(v));
    }
    Ok(ElephantModel {
        q: params.q,
        b: params.b,
        placement,
    })
}

/// Edge of the Hubbard tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TreeEdge {
    Gamma0Plus,
    Gamma0Minus,
    Gamma(usize),
}

impl fmt::Display for TreeEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeEdge::Gamma0Plus => write!(f, "g0+"),
            TreeEdge::Gamma0Minus => write!(f, "g0-"),
            TreeEdge::Gamma(n) => write!(f, "g{n}"),
        }
    }
}

impl ElephantModel {
    pub fn params(&self) -> ElephantParams {
        ElephantParams { q: self.q, b: self.b }
    }

    pub fn p(&self) -> usize {
        self.q + self.b
    }

    /// Edges in index order `γ_0^+, γ_0^−, γ_1, …, γ_{p−1}`.
    pub fn edges(&self) -> Vec<TreeEdge> {
        let mut e = vec![TreeEdge::Gamma0Plus, TreeEdge::Gamma0Minus];
        e.extend((1..self.p()).map(TreeEdge::Gamma));
        e
    }

    pub fn edge_index(&self, e: TreeEdge) -> usize {
        match e {
            TreeEdge::Gamma0Plus => 0,
            TreeEdge::Gamma0Minus => 1,
            TreeEdge::Gamma(n) => n + 1,
        }
    }

    /// Position of an edge in the cyclic order `γ_0, γ_1, …, γ_{p−1}` with `γ_0^±` merged.
    pub fn merged_index(e: TreeEdge) -> usize {
        match e {
            TreeEdge::Gamma0Plus | TreeEdge::Gamma0Minus => 0,
            TreeEdge::Gamma(n) => n,
        }
    }

    /// True when `K_n` lies in `S_{q−1} ∪ Z_{q−1}`.
    fn at_turn(&self, n: usize) -> bool {
        matches!(self.placement.of(n), Sector::S(i) | Sector::Z(i) if i == self.q - 1)
    }
}

/// Image of an edge under `f`, as a list of edges with repetition.
pub fn edge_image(model: &ElephantModel, e: TreeEdge) -> Vec<TreeEdge> {
    let p = model.p();
    match e {
        TreeEdge::Gamma0Plus | TreeEdge::Gamma0Minus => vec![TreeEdge::Gamma(1)],
        TreeEdge::Gamma(n) if n == p - 1 => vec![TreeEdge::Gamma0Plus],
        TreeEdge::Gamma(n) if model.at_turn(n) => {
            vec![TreeEdge::Gamma(n + 1), TreeEdge::Gamma0Plus, TreeEdge::Gamma0Minus]
        }
        TreeEdge::Gamma(n) => vec![TreeEdge::Gamma(n + 1)],
    }
}

/// Transition counts of the edge dynamics, `entries[e][e′]` = multiplicity of `e′` in `f(e)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HubbardMatrix {
    pub edges: Vec<TreeEdge>,
    pub entries: Vec<Vec<u32>>,
}

impl HubbardMatrix {
    pub fn size(&self) -> usize {
        self.edges.len()
    }

    /// The `p × p` matrix on `γ_0, γ_1, …, γ_{p−1}` with `γ_0^±` merged.
    pub fn merged(&self) -> Vec<Vec<u32>> {
        let p = self.size() - 1;
        let mut m = vec![vec![0u32; p]; p];
        for (r, row) in self.entries.iter().enumerate() {
            let mr = ElephantModel::merged_index(self.edges[r]);
            for (c, &v) in row.iter().enumerate() {
                let mc = ElephantModel::merged_index(self.edges[c]);
                // γ_0^+ and γ_0^− have the same image; count the merged row once.
                if r == 1 {
                    continue;
                }
                m[mr][mc] += v;
            }
        }
        m
    }

    pub fn row_sums(&self) -> Vec<u32> {
        self.entries.iter().map(|r| r.iter().sum()).collect()
    }

    /// Strong connectivity of the merged transition digraph.
    pub fn is_irreducible(&self) -> bool {
        let m = self.merged();
        let mut g = DiGraph::<(), ()>::new();
        let nodes: Vec<_> = (0..m.len()).map(|_| g.add_node(())).collect();
        for (r, row) in m.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                if v > 0 {
                    g.add_edge(nodes[r], nodes[c], ());
                }
            }
        }
        tarjan_scc(&g).len() == 1
    }

    /// CSV dump with a header row of edge names.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("edge");
        for e in &self.edges {
            s.push_str(&format!(",{e}"));
        }
        s.push('\n');
        for (e, row) in self.edges.iter().zip(&self.entries) {
            s.push_str(&e.to_string());
            for v in row {
                s.push_str(&format!(",{v}"));
            }
            s.push('\n');
        }
        s
    }
}

pub fn hubbard_matrix(model: &ElephantModel) -> HubbardMatrix {
    let edges = model.edges();
    let mut entries = vec![vec![0u32; edges.len()]; edges.len()];
    for (r, &e) in edges.iter().enumerate() {
        for img in edge_image(model, e) {
            entries[r][model.edge_index(img)] += 1;
        }
    }
    HubbardMatrix { edges, entries }
}

/// Multiset of edges as counts in index order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EdgeCounts {
    pub counts: Vec<u64>,
}

impl EdgeCounts {
    pub fn single(len: usize, idx: usize) -> Self {
        let mut counts = vec![0; len];
        counts[idx] = 1;
        Self { counts }
    }

    /// One application of the transition matrix.
    pub fn step(&self, m: &HubbardMatrix) -> Self {
        let mut counts = vec![0u64; self.counts.len()];
        for (r, &c) in self.counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (col, &v) in m.entries[r].iter().enumerate() {
                counts[col] = counts[col].saturating_add(c.saturating_mul(v as u64));
            }
        }
        Self { counts }
    }

    pub fn max_multiplicity(&self) -> u64 {
        self.counts.iter().copied().max().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().fold(0u64, |a, &c| a.saturating_add(c))
    }

    /// Edges with positive count.
    pub fn support(&self, edges: &[TreeEdge]) -> Vec<TreeEdge> {
        self.counts
            .iter()
            .zip(edges)
            .filter(|(c, _)| **c > 0)
            .map(|(_, e)| *e)
            .collect()
    }
}

/// `f^k(e)` with multiplicities, under the given transition matrix.
pub fn iterate_with(m: &HubbardMatrix, model: &ElephantModel, e: TreeEdge, k: usize) -> EdgeCounts {
    let mut c = EdgeCounts::single(m.size(), model.edge_index(e));
    for _ in 0..k {
        c = c.step(m);
    }
    c
}

/// `f^k(e)` with multiplicities.
pub fn iterate_edge(model: &ElephantModel, e: TreeEdge, k: usize) -> EdgeCounts {
    iterate_with(&hubbard_matrix(model), model, e, k)
}

/// Length of the shortest cyclic run of `0..p` containing every index.
pub fn cyclic_span(indices: &BTreeSet<usize>, p: usize) -> usize {
    if indices.is_empty() {
        return 0;
    }
    let v: Vec<usize> = indices.iter().copied().collect();
    let mut largest_gap = 0;
    for w in 0..v.len() {
        let next = if w + 1 < v.len() { v[w + 1] } else { v[0] + p };
        largest_gap = largest_gap.max(next - v[w] - 1);
    }
    p - largest_gap
}

/// Edges whose `f^p` images are checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EdgeScope {
    /// Every edge of the tree.
    All,
    /// `γ_0^±` and `γ_n` for `1 ≤ n ≤ q − b − 1`, the edges reached in translation-domain pullbacks.
    TranslationRegion,
}

impl EdgeScope {
    pub fn includes(&self, model: &ElephantModel, e: TreeEdge) -> bool {
        match (self, e) {
            (EdgeScope::All, _) => true,
            (EdgeScope::TranslationRegion, TreeEdge::Gamma(n)) => n + model.b < model.q,
            (EdgeScope::TranslationRegion, _) => true,
        }
    }
}

/// Edge whose image breaks the bounded-degree property.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeWitness {
    pub edge: TreeEdge,
    pub support: Vec<TreeEdge>,
    pub span: usize,
    pub multiplicity: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeVerdict {
    pub q: usize,
    pub b: usize,
    pub scope: EdgeScope,
    pub pass: bool,
    pub checked: usize,
    /// Largest count of a single edge (with `γ_0^±` kept apart) in any `f^p` image.
    pub max_multiplicity: u64,
    /// Largest cyclic span of a support in the merged order.
    pub max_span: usize,
    /// First failing edge, if any.
    pub witness: Option<DegreeWitness>,
}

/// Checks that `f^p` maps each edge in scope at most two-to-one into at most `b + 1`
/// cyclically consecutive edges of `γ_0, γ_1, …, γ_{p−1}`, under the given dynamics.
pub fn check_bounded_degree_with(m: &HubbardMatrix, model: &ElephantModel, scope: EdgeScope) -> DegreeVerdict {
    let p = model.p();
    let mut v = DegreeVerdict {
        q: model.q,
        b: model.b,
        scope,
        pass: true,
        checked: 0,
        max_multiplicity: 0,
        max_span: 0,
        witness: None,
    };
    for &e in &m.edges {
        if !scope.includes(model, e) {
            continue;
        }
        v.checked += 1;
        let img = iterate_with(m, model, e, p);
        let support = img.support(&m.edges);
        let merged: BTreeSet<usize> = support.iter().map(|&x| ElephantModel::merged_index(x)).collect();
        let span = cyclic_span(&merged, p);
        let mult = img.max_multiplicity();
        v.max_multiplicity = v.max_multiplicity.max(mult);
        v.max_span = v.max_span.max(span);
        if (mult > 2 || span > model.b + 1) && v.witness.is_none() {
            v.pass = false;
            v.witness = Some(DegreeWitness {
                edge: e,
                support,
                span,
                multiplicity: mult,
            });
        }
    }
    v
}

pub fn check_bounded_degree(model: &ElephantModel, scope: EdgeScope) -> DegreeVerdict {
    check_bounded_degree_with(&hubbard_matrix(model), model, scope)
}

/// Checks the two steps from which the bounded-degree property is argued:
/// `f^{q−n−1}` maps `γ_0^±` and `γ_n`, `1 ≤ n ≤ q − 2`, homeomorphically onto
/// `γ_{q−1}`, and for `q − 1 ≤ n ≤ p − 1`, `k ≤ b`, `f^k(γ_n)` lies at most
/// two-to-one in `γ_{n+k} ∪ γ_0 ∪ … ∪ γ_{k−1}`. Returns the first failing edge and `k`.
pub fn check_degree_steps(model: &ElephantModel) -> Option<(TreeEdge, usize)> {
    let h = hubbard_matrix(model);
    let (q, b, p) = (model.q, model.b, model.p());
    let target = EdgeCounts::single(h.size(), model.edge_index(TreeEdge::Gamma(q - 1)));
    for e in h.edges.clone() {
        match e {
            TreeEdge::Gamma(n) if n >= q - 1 => {
                let mut c = EdgeCounts::single(h.size(), model.edge_index(e));
                for k in 1..=b {
                    c = c.step(&h);
                    let ok = c.max_multiplicity() <= 2
                        && c.support(&h.edges).iter().all(|&x| {
                            let m = ElephantModel::merged_index(x);
                            m < k || (n + k < p && m == n + k)
                        });
                    if !ok {
                        return Some((e, k));
                    }
                }
            }
            _ => {
                let n = ElephantModel::merged_index(e);
                let k = q - n - 1;
                if iterate_with(&h, model, e, k) != target {
                    return Some((e, k));
                }
            }
        }
    }
    None
}

/// Perron data of the merged Hubbard matrix and the local flux recursion.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FluxReport {
    pub q: usize,
    pub b: usize,
    pub perron_root: f64,
    /// Perron vector on `γ_0, …, γ_{p−1}`, normalized to maximum 1.
    pub perron_vector: Vec<f64>,
    /// `max / min` of the Perron vector: the comparability constant.
    pub ratio: f64,
    pub iterations: usize,
    /// Rows `n` where `W_n > Σ_{A_nm ≥ 1} W_m` for the supplied weights.
    pub recursion_violations: Vec<usize>,
    pub recursion_ok: bool,
}

/// Perron vector of the merged matrix and the check `W_n ≤ Σ_{A_nm ≥ 1} W_m`.
pub fn flux_comparability(model: &ElephantModel, weights: &[f64]) -> Result<FluxReport, ElephantError> {
    let h = hubbard_matrix(model);
    if !h.is_irreducible() {
        return Err(ElephantError::Reducible);
    }
    let a = h.merged();
    let p = a.len();
    if weights.len() != p {
        return Err(ElephantError::WeightLength {
            got: weights.len(),
            expected: p,
        });
    }
    if let Some(&w) = weights.iter().find(|w| !(**w >= 0.0) || !w.is_finite()) {
        return Err(ElephantError::BadWeight(w));
    }
    // Power iteration on A + I: same Perron vector, and aperiodic.
    let mut x = vec![1.0; p];
    let mut iterations = 0;
    let mut converged = false;
    while iterations < PERRON_MAX_ITER {
        iterations += 1;
        let mut y: Vec<f64> = (0..p)
            .map(|r| x[r] + a[r].iter().zip(&x).map(|(&v, xi)| v as f64 * xi).sum::<f64>())
            .collect();
        let mx = y.iter().cloned().fold(0.0, f64::max);
        y.iter_mut().for_each(|v| *v /= mx);
        let diff = y.iter().zip(&x).map(|(u, v)| (u - v).abs()).fold(0.0, f64::max);
        x = y;
        if diff < PERRON_TOL {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(ElephantError::NonConvergence);
    }
    let ax: Vec<f64> = (0..p)
        .map(|r| a[r].iter().zip(&x).map(|(&v, xi)| v as f64 * xi).sum::<f64>())
        .collect();
    let perron_root = ax.iter().zip(&x).map(|(u, v)| u / v).sum::<f64>() / p as f64;
    let min = x.iter().cloned().fold(f64::INFINITY, f64::min);
    let recursion_violations: Vec<usize> = (0..p)
        .filter(|&r| {
            let rhs: f64 = (0..p).filter(|&c| a[r][c] > 0).map(|c| weights[c]).sum();
            weights[r] > rhs * (1.0 + 1e-12)
        })
        .collect();
    Ok(FluxReport {
        q: model.q,
        b: model.b,
        perron_root,
        ratio: 1.0 / min,
        perron_vector: x,
        iterations,
        recursion_ok: recursion_violations.is_empty(),
        recursion_violations,
    })
}

/// One period of a translation-domain pullback.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PullbackStep {
    /// Surviving little Julia sets `K_lo, …, K_hi`.
    pub lo: usize,
    pub hi: usize,
    pub loss_left: usize,
    pub loss_right: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TranslationPullback {
    pub center: usize,
    pub n: usize,
    pub steps: Vec<PullbackStep>,
    /// Surviving indices after the last step.
    pub surviving: Vec<usize>,
    /// Loss per side per period never exceeds `b`.
    pub erosion_ok: bool,
}

/// Pullbacks of the translation domain `Ω = S_{l−N} ∪ … ∪ S_{l+N}` under `f^p`, `k` times.
///
/// The arc `δ_n` joining `K_n` to `K_{n+1}` follows `γ_n ∪ γ_{n+1}`; it lifts into
/// the pullback when `f^p(γ_n) ∪ f^p(γ_{n+1})` stays among the edges of the
/// current domain. The survivors are the chain of lifted arcs through `K_l`.
pub fn translation_pullback(model: &ElephantModel, l: usize, n: usize, k: usize) -> Result<TranslationPullback, ElephantError> {
    let (lo0, hi0) = (l as i64 - n as i64, (l + n) as i64);
    if lo0 < 1 || hi0 > model.q as i64 - 1 {
        return Err(ElephantError::OutOfRegion {
            lo: lo0,
            hi: hi0,
            max: model.q - 1,
        });
    }
    let h = hubbard_matrix(model);
    let p = model.p();
    let image_range = |m: usize| -> (usize, usize) {
        let img = iterate_with(&h, model, TreeEdge::Gamma(m), p);
        let idx: Vec<usize> = img
            .support(&h.edges)
            .iter()
            .map(|&e| ElephantModel::merged_index(e))
            .collect();
        (*idx.iter().min().expect("nonempty"), *idx.iter().max().expect("nonempty"))
    };
    let (mut lo, mut hi) = (lo0 as usize, hi0 as usize);
    let mut steps = Vec::with_capacity(k);
    let mut erosion_ok = true;
    for _ in 0..k {
        let inside = |m: usize| {
            let (a, b) = image_range(m);
            a >= lo && b <= hi && a > 0
        };
        let arc_ok = |m: usize| inside(m) && inside(m + 1);
        let mut new_hi = l;
        while new_hi < hi && arc_ok(new_hi) {
            new_hi += 1;
        }
        let mut new_lo = l;
        while new_lo > lo && arc_ok(new_lo - 1) {
            new_lo -= 1;
        }
        let step = PullbackStep {
            lo: new_lo,
            hi: new_hi,
            loss_left: new_lo - lo,
            loss_right: hi - new_hi,
        };
        erosion_ok &= step.loss_left <= model.b && step.loss_right <= model.b;
        lo = new_lo;
        hi = new_hi;
        steps.push(step);
    }
    Ok(TranslationPullback {
        center: l,
        n,
        steps,
        surviving: (lo..=hi).collect(),
        erosion_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(q: usize, b: usize, blocks: &[usize]) -> ElephantModel {
        let params = ElephantParams::new(q, b).unwrap();
        build_model(params, SectorPlacement::from_blocks(params, blocks).unwrap()).unwrap()
    }

    #[test]
    fn validation_names_axioms() {
        assert!(model(3, 0, &[]).placement.sectors == vec![Sector::S(1), Sector::S(2)]);
        let e = ElephantParams::new(3, 3).unwrap_err();
        assert!(matches!(e, ElephantError::Violations(ref v) if v[0].axiom == Axiom::E3));
        let params = ElephantParams::new(3, 1).unwrap();
        let two_in_upsilon = SectorPlacement {
            sectors: vec![Sector::S(1), Sector::S(2), Sector::Upsilon],
        };
        let v = placement_violations(params, &two_in_upsilon);
        assert!(v.iter().any(|x| x.axiom == Axiom::E2));
        let skip = SectorPlacement {
            sectors: vec![Sector::S(1), Sector::Z(2), Sector::Z(2)],
        };
        assert!(placement_violations(params, &skip).iter().any(|x| x.axiom == Axiom::E1));
    }

    #[test]
    fn enumerator_matches_validator() {
        for q in 2..9 {
            for b in 0..q.min(6) {
                let params = ElephantParams::new(q, b).unwrap();
                let all = enumerate_placements(params);
                assert_eq!(all.len(), if b == 0 { 1 } else { 1 << (b - 1) });
                for pl in &all {
                    assert!(placement_violations(params, pl).is_empty());
                    assert_eq!(pl.blocks(params).iter().sum::<usize>(), b);
                }
            }
        }
        // Brute force over all sector words for small cases.
        for (q, b) in [(3, 1), (3, 2), (4, 2), (4, 3)] {
            let params = ElephantParams::new(q, b).unwrap();
            let p = q + b;
            let labels: Vec<Sector> = (1..q).flat_map(|i| [Sector::S(i), Sector::Z(i)]).collect();
            let mut count = 0;
            let mut idx = vec![0usize; p - 1];
            loop {
                let pl = SectorPlacement {
                    sectors: idx.iter().map(|&i| labels[i]).collect(),
                };
                if placement_violations(params, &pl).is_empty() {
                    count += 1;
                }
                let mut j = 0;
                while j < idx.len() {
                    idx[j] += 1;
                    if idx[j] < labels.len() {
                        break;
                    }
                    idx[j] = 0;
                    j += 1;
                }
                if j == idx.len() {
                    break;
                }
            }
            assert_eq!(count, enumerate_placements(params).len(), "q={q} b={b}");
        }
    }

    #[test]
    fn scheme_bullets() {
        let m = model(5, 2, &[2]);
        assert_eq!(edge_image(&m, TreeEdge::Gamma0Plus), vec![TreeEdge::Gamma(1)]);
        assert_eq!(edge_image(&m, TreeEdge::Gamma0Minus), vec![TreeEdge::Gamma(1)]);
        assert_eq!(edge_image(&m, TreeEdge::Gamma(6)), vec![TreeEdge::Gamma0Plus]);
        assert_eq!(edge_image(&m, TreeEdge::Gamma(2)), vec![TreeEdge::Gamma(3)]);
        assert_eq!(
            edge_image(&m, TreeEdge::Gamma(4)),
            vec![TreeEdge::Gamma(5), TreeEdge::Gamma0Plus, TreeEdge::Gamma0Minus]
        );
    }

    #[test]
    fn q3_b0_matrix() {
        let m = model(3, 0, &[]);
        let h = hubbard_matrix(&m);
        // Rows and columns: g0+, g0-, g1, g2.
        assert_eq!(h.entries, vec![vec![0, 0, 1, 0], vec![0, 0, 1, 0], vec![0, 0, 0, 1], vec![1, 0, 0, 0]]);
        assert_eq!(h.merged(), vec![vec![0, 1, 0], vec![0, 0, 1], vec![1, 0, 0]]);
        assert!(h.is_irreducible());
        let v = check_bounded_degree(&m, EdgeScope::All);
        assert!(v.pass);
        assert_eq!(v.max_span, 1);
        let f = flux_comparability(&m, &[1.0, 1.0, 1.0]).unwrap();
        assert!((f.ratio - 1.0).abs() < 1e-12 && (f.perron_root - 1.0).abs() < 1e-12);
        assert!(f.recursion_ok);
    }

    #[test]
    fn iterates() {
        let m = model(7, 0, &[]);
        assert_eq!(iterate_edge(&m, TreeEdge::Gamma(3), 0), EdgeCounts::single(8, m.edge_index(TreeEdge::Gamma(3))));
        // γ_n reaches γ_{q−1} after q − n − 1 steps, so γ_0^+ needs q − 1.
        let c = iterate_edge(&m, TreeEdge::Gamma0Plus, 7 - 1);
        assert_eq!(c.support(&m.edges()), vec![TreeEdge::Gamma(6)]);
        assert_eq!(c.total(), 1);
        for q in 2..16 {
            for b in 0..q.min(6) {
                for pl in enumerate_placements(ElephantParams::new(q, b).unwrap()) {
                    let m = build_model(ElephantParams::new(q, b).unwrap(), pl).unwrap();
                    assert_eq!(check_degree_steps(&m), None, "q={q} b={b}");
                    for e in m.edges() {
                        // Multiplicities stay at most 2 up to k = p in the translation region.
                        if EdgeScope::TranslationRegion.includes(&m, e) {
                            for k in 0..=m.p() {
                                assert!(iterate_edge(&m, e, k).max_multiplicity() <= 2);
                            }
                        }
                        let once: usize = edge_image(&m, e).len();
                        assert_eq!(iterate_edge(&m, e, 1).total() as usize, once);
                    }
                }
            }
        }
        // Beyond the translation region they grow once b ≥ 2.
        let m = model(3, 2, &[2]);
        assert_eq!(iterate_edge(&m, TreeEdge::Gamma(2), 5).max_multiplicity(), 4);
    }

    #[test]
    fn full_scope_fails_from_b_one() {
        // f^4(γ_2) = γ_2 + 2γ_3 + 2γ_0^± when q = 3, b = 1.
        let m = model(3, 1, &[1]);
        let img = iterate_edge(&m, TreeEdge::Gamma(2), 4);
        assert_eq!(img.counts, vec![2, 2, 0, 1, 2]);
        let v = check_bounded_degree(&m, EdgeScope::All);
        assert!(!v.pass);
        assert_eq!(v.witness.unwrap().span, 3);
        assert!(check_bounded_degree(&m, EdgeScope::TranslationRegion).pass);
    }

    #[test]
    fn corrupted_scheme_is_caught() {
        let m = model(8, 1, &[1]);
        let mut h = hubbard_matrix(&m);
        // γ_1 ↦ γ_2 + γ_4 is not a scheme bullet.
        let r = m.edge_index(TreeEdge::Gamma(1));
        h.entries[r][m.edge_index(TreeEdge::Gamma(4))] += 1;
        let v = check_bounded_degree_with(&h, &m, EdgeScope::TranslationRegion);
        assert!(!v.pass);
        assert!(check_bounded_degree(&m, EdgeScope::TranslationRegion).pass);
    }

    #[test]
    fn row_sums_bounded() {
        for q in 2..20 {
            for b in 0..q.min(6) {
                for pl in enumerate_placements(ElephantParams::new(q, b).unwrap()) {
                    let m = build_model(ElephantParams::new(q, b).unwrap(), pl).unwrap();
                    let h = hubbard_matrix(&m);
                    assert!(h.row_sums().iter().all(|&s| s as usize <= b + 2));
                    assert!(h.is_irreducible());
                }
            }
        }
    }

    #[test]
    fn translation_pullbacks() {
        let m = model(20, 0, &[]);
        let t = translation_pullback(&m, 10, 5, 3).unwrap();
        assert_eq!(t.surviving, (5..=15).collect::<Vec<_>>());
        assert!(t.erosion_ok);
        let m = model(20, 2, &[2]);
        let t = translation_pullback(&m, 10, 5, 1).unwrap();
        assert!(t.erosion_ok);
        assert!(t.steps[0].loss_left <= 2 && t.steps[0].loss_right <= 2);
        let t0 = translation_pullback(&m, 10, 5, 0).unwrap();
        assert_eq!(t0.surviving, (5..=15).collect::<Vec<_>>());
        assert!(translation_pullback(&m, 3, 5, 1).is_err());
        // b = 1: f^p(γ_n) = γ_n + 2γ_{n+1}, so one set is lost on the right per period.
        let m = model(20, 1, &[1]);
        let img = iterate_edge(&m, TreeEdge::Gamma(5), 21);
        assert_eq!(img.counts[m.edge_index(TreeEdge::Gamma(5))], 1);
        assert_eq!(img.counts[m.edge_index(TreeEdge::Gamma(6))], 2);
        let t = translation_pullback(&m, 10, 5, 2).unwrap();
        assert_eq!((t.steps[0].loss_left, t.steps[0].loss_right), (0, 1));
    }

    #[test]
    fn model_json_round_trip() {
        let m = model(6, 3, &[1, 2]);
        let s = serde_json::to_string(&m).unwrap();
        assert!(s.contains("\"Z5\""));
        let back: ElephantModel = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
        assert!("Q1".parse::<Sector>().is_err());
    }
}
