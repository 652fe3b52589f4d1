//! Pinned tolerances and budgets of the verification suites.

/// Relative agreement of the capacity solver with the closed form.
pub const ORACLE_REL: f64 = 1e-3;
/// Resolution of the oracle comparison.
pub const ORACLE_RESOLUTION: usize = 256;
/// Range of closed-form widths sampled for the oracle comparison.
pub const ORACLE_WIDTH_RANGE: (f64, f64) = (0.2, 5.0);
/// Wall-clock budget of the oracle comparison, seconds.
pub const ORACLE_BUDGET_S: f64 = 120.0;

/// `|W̄(Q) W̄(Q*) − 1|`.
pub const DUALITY_TOL: f64 = 1e-9;
pub const DUALITY_BUDGET_S: f64 = 5.0;

/// Slack allowed in the right thin-thick inequality.
pub const RIGHT_INEQUALITY_TOL: f64 = 1e-3;
/// Nearness scale of the thin-thick decomposition.
pub const DEFAULT_EPS: f64 = 1.0;

/// Acceptance of the affine envelope of the left deficit.
pub const DEFICIT_R2: f64 = 0.9;
/// Uniform bound on the left deficit, the alternative acceptance branch.
pub const DEFICIT_BUDGET: f64 = 10.0;

/// `|W(G_k) · W̄(I_k, I_{k+1}) − 1|`.
pub const RECIPROCAL_TOL: f64 = 1e-9;

/// Slack of the transformation rules and the covering equality.
pub const TRANSFORM_TOL: f64 = 1e-3;
/// Ceiling of the adaptive solves in the transformation-rule checks.
pub const TRANSFORM_RESOLUTION: usize = 128;

/// Slack of the key estimate.
pub const KEY_TOL: f64 = 1e-3;
/// Ceiling of the adaptive solves in the key estimate.
pub const KEY_RESOLUTION: usize = 512;

/// Slack of the pants right inequality.
pub const PANTS_TOL: f64 = 1e-3;
/// Uniform bound on the pants left deficit (`|χ| = 1`).
pub const PANTS_DEFICIT_BUDGET: f64 = 10.0;
/// Word bound for lifts of the pants cuffs.
pub const PANTS_MAX_WORD: usize = 6;

pub const ELEPHANT_BUDGET_S: f64 = 60.0;
/// Largest allowed relative variation of the Perron ratio across `q`.
pub const PERRON_VARIATION: f64 = 0.10;

pub const PULLOFF_BUDGET_S: f64 = 300.0;
