//! JSON descriptors for the state families understood by the CLI.
//!
//! ```json
//! {"kind": "thermal", "n1": 1.0, "n2": 2.0}
//! {"kind": "pats", "n1": 1.0, "M": 2, "n2": 1.0, "S": 2}
//! {"kind": "fock", "M": 1, "S": 0}
//! {"kind": "custom", "xi": [0.5, 0.5], "eta": [1.0]}
//! ```

use crate::pats::{pats_mode, PatsSpec};
use crate::state::{ModeDistribution, TruncationPolicy, TwoModeState};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum StateDescriptor {
    Thermal {
        n1: f64,
        n2: f64,
    },
    Pats {
        n1: f64,
        #[serde(rename = "M")]
        m: u32,
        n2: f64,
        #[serde(rename = "S")]
        s: u32,
    },
    Fock {
        #[serde(rename = "M")]
        m: u32,
        #[serde(rename = "S")]
        s: u32,
    },
    Custom {
        xi: Vec<f64>,
        eta: Vec<f64>,
    },
}

impl StateDescriptor {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("descriptor serialization cannot fail")
    }

    /// Builds the two-mode state, truncating under `policy`.
    pub fn build(&self, policy: &TruncationPolicy) -> Result<TwoModeState> {
        match self {
            Self::Thermal { n1, n2 } => Ok(TwoModeState::product(
                ModeDistribution::thermal(*n1, policy)?,
                ModeDistribution::thermal(*n2, policy)?,
            )),
            Self::Pats { n1, m, n2, s } => Ok(TwoModeState::product(
                pats_mode(&PatsSpec::new(*n1, *m)?, policy)?,
                pats_mode(&PatsSpec::new(*n2, *s)?, policy)?,
            )),
            Self::Fock { m, s } => Ok(TwoModeState::product(
                ModeDistribution::fock(*m as usize),
                ModeDistribution::fock(*s as usize),
            )),
            Self::Custom { xi, eta } => Ok(TwoModeState::product(
                ModeDistribution::from_probs(xi.clone())?,
                ModeDistribution::from_probs(eta.clone())?,
            )),
        }
    }
}
