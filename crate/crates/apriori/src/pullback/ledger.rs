//! Exact arithmetic of the newborn vertical weight estimate.

use num_rational::Rational64;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::PullbackError;

/// Share of `W_1` guaranteed as newborn vertical weight.
pub fn target_share() -> Rational64 {
    Rational64::new(1, 25)
}

/// Weights entering the estimate, all exact and nonnegative.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeightLedger {
    pub w0: Rational64,
    pub w1: Rational64,
    /// Pulled-off horizontal weight.
    pub nu: Rational64,
    /// Additive slack allowed in `ν ≥ W_0/2 − slack`.
    pub slack: Rational64,
}

/// Both branch bounds and the verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LedgerBound {
    /// Horizontal loss `ν − (2ν + W_1)/4 = ν/2 − W_1/4`.
    pub branch_loss: Rational64,
    /// Rough branch `ν/2 − W_1/5`, defined when `W_0 − W_1 ≤ W_1/5`.
    pub branch_rough: Option<Rational64>,
    pub bound: Rational64,
    /// `bound ≥ W_1/25 − slack`.
    pub meets_target: bool,
}

impl WeightLedger {
    pub fn new(w0: Rational64, w1: Rational64, nu: Rational64, slack: Rational64) -> Result<Self, PullbackError> {
        for (name, v) in [("W_0", w0), ("W_1", w1), ("nu", nu), ("slack", slack)] {
            if v.is_negative() {
                return Err(PullbackError::Ledger(format!("{name} = {v} is negative")));
            }
        }
        Ok(Self { w0, w1, nu, slack })
    }

    pub fn from_integers(w0: i64, w1: i64, nu: i64, slack: i64) -> Result<Self, PullbackError> {
        Self::new(w0.into(), w1.into(), nu.into(), slack.into())
    }
}

/// Lower bound on newborn vertical weight from the two displayed branches.
///
/// The preconditions are `ν ≥ W_0/2 − slack` and `W_0 ≥ W_1` (local weights
/// increase towards `K_0`); a violation is reported without a bound.
pub fn newborn_vertical_ledger(l: &WeightLedger) -> Result<LedgerBound, PullbackError> {
    let half = Rational64::new(1, 2);
    if l.nu < l.w0 * half - l.slack {
        return Err(PullbackError::Precondition(format!(
            "nu = {} below W_0/2 - slack = {}",
            l.nu,
            l.w0 * half - l.slack
        )));
    }
    if l.w0 < l.w1 {
        return Err(PullbackError::Precondition(format!("W_0 = {} below W_1 = {}", l.w0, l.w1)));
    }
    let branches = evaluate_branches(l);
    let meets_target = branches.bound >= target_share() * l.w1 - l.slack;
    Ok(LedgerBound { meets_target, ..branches })
}

/// Branch values without precondition checks.
pub fn evaluate_branches(l: &WeightLedger) -> LedgerBound {
    let half = Rational64::new(1, 2);
    let quarter = Rational64::new(1, 4);
    let fifth = Rational64::new(1, 5);
    let branch_loss = half * l.nu - quarter * l.w1;
    let branch_rough = (l.w0 - l.w1 <= fifth * l.w1).then(|| half * l.nu - fifth * l.w1);
    let bound = branch_rough.map_or(branch_loss, |r| r.max(branch_loss));
    LedgerBound {
        branch_loss,
        branch_rough,
        bound,
        meets_target: bound >= target_share() * l.w1 - l.slack,
    }
}

/// Result of the exact grid sweep.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LedgerGrid {
    pub points: usize,
    pub failures: Vec<(Rational64, Rational64)>,
    /// Smallest `bound / W_1` seen.
    pub min_share: Rational64,
}

/// Sweeps `W_0/W_1 ∈ [r_lo, r_hi]` and `ν/W_0 ∈ [1/2, 1]` on a rational grid with `W_1 = 1`
/// and zero slack, checking the target share at every point.
pub fn ledger_grid(r_lo: Rational64, r_hi: Rational64, steps: i64) -> LedgerGrid {
    let mut failures = Vec::new();
    let mut min_share: Option<Rational64> = None;
    let mut points = 0;
    for a in 0..=steps {
        let ratio = r_lo + (r_hi - r_lo) * Rational64::new(a, steps);
        for c in 0..=steps {
            let share = Rational64::new(1, 2) + Rational64::new(c, 2 * steps);
            let w1 = Rational64::from_integer(1);
            let w0 = ratio * w1;
            let l = WeightLedger {
                w0,
                w1,
                nu: share * w0,
                slack: Rational64::zero(),
            };
            points += 1;
            let b = evaluate_branches(&l);
            let s = b.bound / w1;
            min_share = Some(min_share.map_or(s, |m| m.min(s)));
            if !b.meets_target {
                failures.push((ratio, share));
            }
        }
    }
    LedgerGrid {
        points,
        failures,
        min_share: min_share.unwrap_or_else(Rational64::zero),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn displayed_examples() {
        let b = newborn_vertical_ledger(&WeightLedger::from_integers(100, 100, 50, 0).unwrap()).unwrap();
        assert_eq!(b.branch_rough, Some(Rational64::from_integer(5)));
        assert_eq!(b.bound, Rational64::from_integer(5));
        assert!(b.meets_target);
        let b = newborn_vertical_ledger(&WeightLedger::from_integers(120, 100, 60, 0).unwrap()).unwrap();
        assert_eq!(b.branch_loss, Rational64::from_integer(5));
        assert!(b.meets_target);
        let e = newborn_vertical_ledger(&WeightLedger::from_integers(100, 100, 0, 0).unwrap());
        assert!(matches!(e, Err(PullbackError::Precondition(_))));
        assert!(WeightLedger::from_integers(-1, 1, 1, 0).is_err());
    }

    #[test]
    fn grid_holds_where_local_weights_increase() {
        let g = ledger_grid(Rational64::from_integer(1), Rational64::from_integer(3), 40);
        assert!(g.failures.is_empty());
        assert_eq!(g.min_share, Rational64::new(1, 20));
        // Below W_0 = W_1 the rough branch drops under the target.
        let g = ledger_grid(Rational64::new(1, 2), Rational64::from_integer(1), 10);
        assert!(!g.failures.is_empty());
    }
}
