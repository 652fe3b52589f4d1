//! Periodic orbits of angle doubling and their admissibility against the
//! elephant-eye sector structure.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::PullbackError;
use crate::elephant::{placement_violations, ElephantParams, Sector, SectorPlacement};

/// Largest period accepted by the orbit enumerator.
pub const MAX_PERIOD: usize = 24;

/// Period-`p` orbit `θ_n = k_n / (2^p − 1)` of `θ ↦ 2θ`, labeled so that `θ_{n+1} = 2θ_n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AngleOrbit {
    p: usize,
    numerators: Vec<u64>,
}

fn denominator(p: usize) -> u64 {
    (1u64 << p) - 1
}

impl AngleOrbit {
    /// Orbit of `k / (2^p − 1)`, labeled from it; the period must be exactly `p`.
    pub fn from_numerator(p: usize, k: u64) -> Result<Self, PullbackError> {
        if p == 0 || p > MAX_PERIOD {
            return Err(PullbackError::PeriodBound(p));
        }
        let d = denominator(p);
        if k >= d {
            return Err(PullbackError::Orbit(format!("numerator {k} not below {d}")));
        }
        let mut numerators = Vec::with_capacity(p);
        let mut x = k;
        for _ in 0..p {
            numerators.push(x);
            x = 2 * x % d;
        }
        if (1..p).any(|n| numerators[n] == k) {
            return Err(PullbackError::Orbit(format!("{k}/{d} has period below {p}")));
        }
        Ok(Self { p, numerators })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    /// `2^p − 1`.
    pub fn denominator(&self) -> u64 {
        denominator(self.p)
    }

    pub fn numerator(&self, n: usize) -> u64 {
        self.numerators[n % self.p]
    }

    pub fn numerators(&self) -> &[u64] {
        &self.numerators
    }

    /// `θ_n` as an exact rational in turns.
    pub fn angle(&self, n: usize) -> Ratio<u64> {
        Ratio::new(self.numerator(n), self.denominator())
    }

    /// The same orbit labeled from `θ_shift`.
    pub fn relabeled(&self, shift: usize) -> Self {
        Self {
            p: self.p,
            numerators: (0..self.p).map(|n| self.numerator(n + shift)).collect(),
        }
    }

    /// Mirror image `θ ↦ −θ`, which conjugates doubling to itself.
    pub fn mirrored(&self) -> Self {
        let d = self.denominator();
        Self {
            p: self.p,
            numerators: self.numerators.iter().map(|&k| (d - k) % d).collect(),
        }
    }

    /// Sector of `θ_n` in the rotation-number-`1/q` structure at `α`.
    pub fn sector(&self, q: usize, n: usize) -> Sector {
        sector_of(q, self.p, self.numerator(n))
    }

    /// Sectors of `θ_1, …, θ_{p−1}`.
    pub fn placement(&self, q: usize) -> SectorPlacement {
        SectorPlacement {
            sectors: (1..self.p).map(|n| self.sector(q, n)).collect(),
        }
    }

    /// Orbit labels sorted by angle.
    pub fn circle_order(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.p).collect();
        idx.sort_by_key(|&n| self.numerators[n]);
        idx
    }
}

/// Sector of `k / (2^p − 1)`. The `α`-rays sit at `a_j = 2^j / (2^q − 1)`;
/// `S_i = [a_{i−1}, a_i)` for `1 ≤ i ≤ q − 1`, `Z_i = S_i + 1/2`, and `Υ` is the rest of
/// `[a_{q−1}, a_0 + 1)`.
pub fn sector_of(q: usize, p: usize, k: u64) -> Sector {
    let dq = (1u128 << q) - 1;
    let d = (1u128 << p) - 1;
    // Common scale 2·d·dq: x = 2·k·dq, a_j = 2·2^j·d, one half = d·dq.
    let full = 2 * d * dq;
    let x = 2 * k as u128 * dq;
    let ray = |j: usize| 2 * (1u128 << j) * d;
    let in_s = |y: u128| (1..q).find(|&i| y >= ray(i - 1) && y < ray(i));
    if let Some(i) = in_s(x) {
        return Sector::S(i);
    }
    if let Some(i) = in_s((x + full - d * dq) % full) {
        return Sector::Z(i);
    }
    Sector::Upsilon
}

/// Orbit together with the combinatorics it realizes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitRecord {
    pub q: usize,
    pub b: usize,
    pub p: usize,
    /// Angles `"k/(2^p−1)"` of `θ_0, …, θ_{p−1}`.
    pub angles: Vec<String>,
    pub placement: SectorPlacement,
}

impl OrbitRecord {
    pub fn new(params: ElephantParams, orbit: &AngleOrbit) -> Self {
        let d = orbit.denominator();
        Self {
            q: params.q,
            b: params.b,
            p: orbit.p(),
            angles: orbit.numerators().iter().map(|k| format!("{k}/{d}")).collect(),
            placement: orbit.placement(params.q),
        }
    }

    /// Parses the angle list back into an orbit.
    pub fn orbit(&self) -> Result<AngleOrbit, PullbackError> {
        let first = self.angles.first().ok_or_else(|| PullbackError::Orbit("no angles".into()))?;
        let r: Ratio<u64> = first
            .parse()
            .map_err(|_| PullbackError::Orbit(format!("bad angle {first:?}")))?;
        let d = denominator(self.p);
        if d % r.denom() != 0 {
            return Err(PullbackError::Orbit(format!("{first} is not of the form k/{d}")));
        }
        let o = AngleOrbit::from_numerator(self.p, r.numer() * (d / r.denom()))?;
        let expect: Vec<String> = o.numerators().iter().map(|k| format!("{k}/{d}")).collect();
        let given: Vec<Ratio<u64>> = self.angles.iter().filter_map(|a| a.parse().ok()).collect();
        let parsed: Vec<Ratio<u64>> = expect.iter().map(|a| a.parse().expect("formatted")).collect();
        if given != parsed {
            return Err(PullbackError::Orbit("angles do not follow doubling".into()));
        }
        Ok(o)
    }
}

/// True when the orbit realizes E1–E3 for `params`, including `θ_0 ∈ Υ`.
pub fn is_admissible(params: ElephantParams, orbit: &AngleOrbit) -> bool {
    orbit.p() == params.p()
        && orbit.sector(params.q, 0) == Sector::Upsilon
        && placement_violations(params, &orbit.placement(params.q)).is_empty()
}

/// All period-`p` doubling orbits that realize the elephant-eye combinatorics.
///
/// `θ_1` must lie in `S_1 = [a_0, a_1)`, so only those numerators are scanned;
/// each admissible orbit is listed once, labeled by that `θ_1`.
pub fn find_admissible_orbits(params: ElephantParams) -> Result<Vec<AngleOrbit>, PullbackError> {
    let p = params.p();
    if p > MAX_PERIOD {
        return Err(PullbackError::PeriodBound(p));
    }
    let d = denominator(p) as u128;
    let dq = (1u128 << params.q) - 1;
    // k/d ∈ [1/dq, 2/dq).
    let lo = d.div_ceil(dq);
    let hi = (2 * d).div_ceil(dq);
    let mut out = Vec::new();
    for k1 in lo..hi {
        let Ok(o1) = AngleOrbit::from_numerator(p, k1 as u64) else {
            continue;
        };
        let orbit = o1.relabeled(p - 1);
        if is_admissible(params, &orbit) {
            out.push(orbit);
        }
    }
    Ok(out)
}
