//! TOML documents for sequences and solver output. Angles are in units of π.

use std::path::Path;

use composite_pulses::families::FamilyDescriptor;
use composite_pulses::CompositeSequence;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const SCHEMA_VERSION: &str = "1";
/// Significant digits kept for every angle written to disk.
pub const SIGNIFICANT_DIGITS: usize = 15;

/// Rounds to [`SIGNIFICANT_DIGITS`] significant digits.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().expect("formatted float")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PulseEntry {
    pub area_pi: f64,
    pub phase_pi: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta_pi: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_target: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceDocument {
    pub schema_version: String,
    pub label: String,
    #[serde(default)]
    pub metadata: Metadata,
    pub pulses: Vec<PulseEntry>,
}

impl SequenceDocument {
    pub fn from_sequence(seq: &CompositeSequence, metadata: Metadata) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.into(),
            label: seq.label().into(),
            metadata: Metadata {
                theta_pi: metadata.theta_pi.map(round_sig),
                p_target: metadata.p_target.map(round_sig),
                ..metadata
            },
            pulses: seq
                .pulses()
                .iter()
                .map(|p| PulseEntry {
                    area_pi: round_sig(p.area_pi()),
                    phase_pi: round_sig(p.phase_pi()),
                })
                .collect(),
        }
    }

    pub fn from_descriptor(d: &FamilyDescriptor) -> Result<Self, CliError> {
        let seq = d.build()?;
        let metadata = Metadata {
            family: Some(d.family.name().into()),
            n: Some(seq.len()),
            theta_pi: d.family.takes_theta().then_some(d.theta_pi),
            p_target: Some(d.target_probability()),
        };
        Ok(Self::from_sequence(&seq, metadata))
    }

    pub fn sequence(&self) -> Result<CompositeSequence, CliError> {
        let pairs: Vec<(f64, f64)> = self.pulses.iter().map(|p| (p.area_pi, p.phase_pi)).collect();
        CompositeSequence::from_pairs(&pairs, self.label.clone())
            .map_err(|e| CliError::Document(format!("invalid pulse list: {e}")))
    }

    /// Declared target, falling back to the design-point probability.
    pub fn p_target(&self) -> Result<f64, CliError> {
        match self.metadata.p_target {
            Some(p) => Ok(p),
            None => Ok(self.sequence()?.probability(0.0)),
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("document serializes")
    }

    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        let doc: Self = toml::from_str(text).map_err(|e| CliError::Document(e.to_string()))?;
        if doc.schema_version != SCHEMA_VERSION {
            return Err(CliError::Document(format!(
                "unsupported schema_version {:?}",
                doc.schema_version
            )));
        }
        doc.sequence()?;
        Ok(doc)
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Document(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text).map_err(|e| match e {
            CliError::Document(m) => CliError::Document(format!("{}: {m}", path.display())),
            other => other,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchEntry {
    pub phases_pi: Vec<f64>,
    pub residual_norm: f64,
    pub achieved_order: usize,
    pub verified_order: usize,
    pub slope: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveDocument {
    pub schema_version: String,
    pub template: String,
    pub areas_pi: Vec<f64>,
    pub p_target: f64,
    pub annul_count: usize,
    pub seed: u64,
    pub branches: Vec<BranchEntry>,
}

impl SolveDocument {
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("document serializes")
    }
}
