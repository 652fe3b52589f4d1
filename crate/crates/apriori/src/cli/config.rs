//! Run configuration: seed, suite selection, numerical knobs and sweep sizes.

use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::CliError;
use crate::tolerances;

/// Group of acceptance criteria run together.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Widths,
    Lamination,
    Fuchsian,
    Elephant,
    Pullback,
    All,
}

impl Suite {
    /// Criterion numbers covered by the suite.
    pub fn criteria(&self) -> Vec<u8> {
        match self {
            Suite::Widths => vec![1, 2, 5],
            Suite::Lamination => vec![3, 4, 6, 7],
            Suite::Fuchsian => vec![8],
            Suite::Elephant => vec![9, 10],
            Suite::Pullback => vec![11, 12, 13],
            Suite::All => (1..=14).collect(),
        }
    }
}

impl FromStr for Suite {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        serde_json::from_value(serde_json::Value::String(s.to_string()))
            .map_err(|_| CliError::Input(format!("unknown suite {s:?}")))
    }
}

/// Instance counts and sweep bounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Sizes {
    pub oracle_quads: usize,
    pub duality_quads: usize,
    pub thin_thick_markings: usize,
    pub deficit_families: usize,
    pub deficit_max_p: usize,
    pub reciprocal_configs: usize,
    pub transform_pairs: usize,
    pub key_instances: usize,
    pub pants: usize,
    pub elephant_q_max: usize,
    pub elephant_b_max: usize,
    pub perron_q: (usize, usize),
    pub pullback_p_max: usize,
    pub ledger_steps: i64,
}

impl Default for Sizes {
    fn default() -> Self {
        Self {
            oracle_quads: 100,
            duality_quads: 1000,
            thin_thick_markings: 50,
            deficit_families: 5,
            deficit_max_p: 40,
            reciprocal_configs: 500,
            transform_pairs: 200,
            key_instances: 100,
            pants: 100,
            elephant_q_max: 50,
            elephant_b_max: 5,
            perron_q: (10, 50),
            pullback_p_max: 16,
            ledger_steps: 40,
        }
    }
}

impl Sizes {
    /// Small sizes for quick runs and the determinism check.
    pub fn smoke() -> Self {
        Self {
            oracle_quads: 4,
            duality_quads: 50,
            thin_thick_markings: 4,
            deficit_families: 1,
            deficit_max_p: 10,
            reciprocal_configs: 20,
            transform_pairs: 4,
            key_instances: 3,
            pants: 4,
            elephant_q_max: 12,
            elephant_b_max: 3,
            perron_q: (10, 14),
            pullback_p_max: 10,
            ledger_steps: 8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub seed: u64,
    pub suite: Suite,
    /// Capacity-solver resolution of the oracle comparison.
    pub resolution: usize,
    /// Nearness scale of thin-thick decompositions.
    pub eps: f64,
    /// Half-width of thickened marked angles; `None` means `1/(64p)`.
    pub delta: Option<f64>,
    /// Worker threads; 0 uses all cores.
    pub jobs: usize,
    pub out: PathBuf,
    pub sizes: Sizes,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 1,
            suite: Suite::All,
            resolution: tolerances::ORACLE_RESOLUTION,
            eps: tolerances::DEFAULT_EPS,
            delta: None,
            jobs: 0,
            out: PathBuf::from("reports"),
            sizes: Sizes::default(),
        }
    }
}

impl RunConfig {
    /// Reads a JSON config; absent fields take their defaults.
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let c: Self = serde_json::from_str(text).map_err(|e| CliError::Input(format!("config: {e}")))?;
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::Input(m));
        if !(crate::widths::MIN_RESOLUTION..=crate::widths::MAX_RESOLUTION).contains(&self.resolution) {
            return bad(format!("resolution {} outside [16, 2048]", self.resolution));
        }
        if !(self.eps > 0.0 && self.eps.is_finite()) {
            return bad(format!("eps {} must be positive", self.eps));
        }
        if let Some(d) = self.delta {
            if !(d > 0.0 && d < 0.01) {
                return bad(format!("delta {d} must lie in (0, 0.01)"));
            }
        }
        let s = &self.sizes;
        if s.pullback_p_max > crate::pullback::MAX_PERIOD {
            return bad(format!("pull-off sweep p ≤ {} exceeds {}", s.pullback_p_max, crate::pullback::MAX_PERIOD));
        }
        if s.elephant_q_max < 2 || s.perron_q.0 < 2 || s.perron_q.0 > s.perron_q.1 {
            return bad("elephant sweep bounds need 2 ≤ q and an increasing Perron range".into());
        }
        if s.deficit_max_p < 4 || s.ledger_steps < 1 {
            return bad("deficit families need p ≥ 4 and the ledger grid at least one step".into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_json_keeps_defaults() {
        let c = RunConfig::from_json(r#"{"seed": 7, "suite": "elephant", "sizes": {"pants": 3}}"#).unwrap();
        assert_eq!(c.seed, 7);
        assert_eq!(c.suite, Suite::Elephant);
        assert_eq!(c.sizes.pants, 3);
        assert_eq!(c.sizes.oracle_quads, 100);
        assert!(RunConfig::from_json(r#"{"resolution": 4}"#).is_err());
        assert!(RunConfig::from_json("{").is_err());
        assert_eq!("pullback".parse::<Suite>().unwrap(), Suite::Pullback);
        assert!("nope".parse::<Suite>().is_err());
    }
}
