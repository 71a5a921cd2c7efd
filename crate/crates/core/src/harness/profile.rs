//! Profile documents.
//!
//! ```json
//! { "x": [8 reals], "delta": [8 reals], "shares": [[8 reals], ...] }
//! ```
//!
//! `delta[0]` and the first entry of every share row must be 0. `shares` is
//! optional for two senders and required otherwise; when given it must have
//! `N-1` rows summing to `delta` (mod 2pi) within 1e-12.

use std::f64::consts::TAU;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bases::{compose_phases, AmplitudeProfile, PhaseProfile, PhaseShares};
use crate::error::Error;
use crate::protocol::sampling::RandomInstance;
use crate::qstate::ALGEBRA_TOL;

use super::HarnessError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileDocument {
    pub x: Vec<f64>,
    pub delta: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shares: Option<Vec<Vec<f64>>>,
}

/// A validated instance ready to run.
#[derive(Clone, Debug, PartialEq)]
pub struct LoadedProfile {
    pub x: AmplitudeProfile,
    pub delta: PhaseProfile,
    pub shares: PhaseShares,
}

impl From<RandomInstance> for LoadedProfile {
    fn from(r: RandomInstance) -> Self {
        Self {
            x: r.x,
            delta: r.delta,
            shares: r.shares,
        }
    }
}

fn eight(field: &str, values: &[f64]) -> Result<[f64; 8], HarnessError> {
    values
        .try_into()
        .map_err(|_| HarnessError::MalformedProfile(format!("{field} must have 8 entries, got {}", values.len())))
}

fn phase_row(field: &str, values: &[f64]) -> Result<PhaseProfile, HarnessError> {
    PhaseProfile::new(eight(field, values)?).map_err(|e| HarnessError::MalformedProfile(format!("{field}: {e}")))
}

fn wrapped_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

impl ProfileDocument {
    pub fn parse(text: &str) -> Result<Self, HarnessError> {
        serde_json::from_str(text).map_err(|e| HarnessError::MalformedProfile(e.to_string()))
    }

    /// Checks the document against the sender count.
    pub fn resolve(&self, senders: usize) -> Result<LoadedProfile, HarnessError> {
        let x = eight("x", &self.x)?;
        let delta = phase_row("delta", &self.delta)?;
        let x = AmplitudeProfile::new(x).map_err(|e| match e {
            Error::UnnormalizedProfile { .. } => HarnessError::Normalization(e.to_string()),
            other => HarnessError::MalformedProfile(other.to_string()),
        })?;
        let shares = match &self.shares {
            None if senders == 2 => PhaseShares::single(&delta),
            None => {
                return Err(HarnessError::MalformedProfile(format!(
                    "\"shares\" is required for {senders} senders"
                )))
            }
            Some(rows) => {
                if rows.len() + 1 != senders {
                    return Err(HarnessError::MalformedProfile(format!(
                        "\"shares\" has {} rows, {senders} senders need {}",
                        rows.len(),
                        senders - 1
                    )));
                }
                let rows = rows
                    .iter()
                    .enumerate()
                    .map(|(i, r)| phase_row(&format!("shares[{i}]"), r))
                    .collect::<Result<Vec<_>, _>>()?;
                let shares = PhaseShares::from_profiles(rows).map_err(|e| HarnessError::MalformedProfile(e.to_string()))?;
                let composed = compose_phases(&shares);
                let gap = composed
                    .values()
                    .iter()
                    .zip(delta.values())
                    .map(|(a, b)| wrapped_gap(*a, *b))
                    .fold(0.0, f64::max);
                if gap > ALGEBRA_TOL {
                    return Err(HarnessError::MalformedProfile(format!(
                        "\"shares\" sum differs from \"delta\" by {gap:e}"
                    )));
                }
                shares
            }
        };
        Ok(LoadedProfile { x, delta, shares })
    }

    pub fn from_loaded(p: &LoadedProfile) -> Self {
        Self {
            x: p.x.values().to_vec(),
            delta: p.delta.values().to_vec(),
            shares: Some(p.shares.rows().iter().map(|r| r.values().to_vec()).collect()),
        }
    }
}

pub fn load_profile(path: &Path, senders: usize) -> Result<LoadedProfile, HarnessError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| HarnessError::MalformedProfile(format!("cannot read {}: {e}", path.display())))?;
    ProfileDocument::parse(&text)?.resolve(senders)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn doc(json: &str) -> ProfileDocument {
        ProfileDocument::parse(json).unwrap()
    }

    const UNIFORM: f64 = 0.35355339059327373;

    #[test]
    fn two_sender_without_shares() {
        let text = format!(r#"{{"x": [{u},{u},{u},{u},{u},{u},{u},{u}], "delta": [0, 3.141592653589793, 3.141592653589793, 0, 0, 0, 0, 0]}}"#, u = UNIFORM);
        let p = doc(&text).resolve(2).unwrap();
        assert_eq!(p.shares.n_senders(), 2);
        assert_eq!(p.delta.values()[1], PI);
        assert!(doc(&text).resolve(3).is_err());
    }

    #[test]
    fn normalization_is_its_own_error() {
        let a = 0.9f64.sqrt();
        let text = format!(r#"{{"x": [{a},0,0,0,0,0,0,0], "delta": [0,0,0,0,0,0,0,0]}}"#);
        assert!(matches!(doc(&text).resolve(2), Err(HarnessError::Normalization(_))));
    }

    #[test]
    fn malformed_documents() {
        assert!(matches!(ProfileDocument::parse("{"), Err(HarnessError::MalformedProfile(_))));
        assert!(ProfileDocument::parse(r#"{"x": [1], "delta": [0], "extra": 1}"#).is_err());
        let short = doc(r#"{"x": [1,0,0], "delta": [0,0,0,0,0,0,0,0]}"#);
        assert!(matches!(short.resolve(2), Err(HarnessError::MalformedProfile(_))));
        let lead = doc(r#"{"x": [1,0,0,0,0,0,0,0], "delta": [0.5,0,0,0,0,0,0,0]}"#);
        assert!(matches!(lead.resolve(2), Err(HarnessError::MalformedProfile(_))));
    }

    #[test]
    fn shares_must_compose_to_delta() {
        let ok = doc(
            r#"{"x": [1,0,0,0,0,0,0,0], "delta": [0,1,2,3,4,5,6,0.5],
                "shares": [[0,0.5,1,1.5,2,2.5,3,0.25],[0,0.5,1,1.5,2,2.5,3,0.25]]}"#,
        );
        assert_eq!(ok.resolve(3).unwrap().shares.n_senders(), 3);
        assert!(ok.resolve(4).is_err());
        let wrapped = doc(
            r#"{"x": [1,0,0,0,0,0,0,0], "delta": [0,0,0,0,0,0,0,0],
                "shares": [[0,6.283185307179586,0,0,0,0,0,0]]}"#,
        );
        assert!(wrapped.resolve(2).is_ok());
        let bad = doc(
            r#"{"x": [1,0,0,0,0,0,0,0], "delta": [0,1,2,3,4,5,6,0.5],
                "shares": [[0,0.5,1,1.5,2,2.5,3,0.25],[0,0.5,1,1.5,2,2.5,3,0.2500001]]}"#,
        );
        assert!(matches!(bad.resolve(3), Err(HarnessError::MalformedProfile(_))));
    }
}
