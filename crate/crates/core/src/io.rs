//! JSON instance and packing documents.
//!
//! Floats are written in shortest round-trip form, so reading a document
//! back yields bit-identical values.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::engine::{pack, InstanceError, InstanceSpec, PackingResult, PhaseEvent};
use crate::verify::{verify, Placement, VerificationReport};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed document: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error("unsupported format version {0}")]
    Version(u32),
    #[error("container radius must be positive and finite, got {0}")]
    Container(f64),
    #[error("packing was computed for instance {packing}, not {instance}")]
    DigestMismatch { packing: String, instance: String },
}

fn default_container_radius() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub format_version: u32,
    #[serde(default = "default_container_radius")]
    pub container_radius: f64,
    pub radii: Vec<f64>,
}

impl InstanceFile {
    pub fn new(spec: &InstanceSpec) -> Self {
        Self { format_version: FORMAT_VERSION, container_radius: 1.0, radii: spec.radii.clone() }
    }

    pub fn parse(text: &str) -> Result<Self, IoError> {
        let file: Self = serde_json::from_str(text)?;
        file.spec()?;
        Ok(file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serializes")
    }

    /// Radii normalized to a unit container.
    pub fn spec(&self) -> Result<InstanceSpec, IoError> {
        if self.format_version != FORMAT_VERSION {
            return Err(IoError::Version(self.format_version));
        }
        let c = self.container_radius;
        if !(c > 0.0 && c.is_finite()) {
            return Err(IoError::Container(c));
        }
        let radii = if c == 1.0 { self.radii.clone() } else { self.radii.iter().map(|r| r / c).collect() };
        Ok(InstanceSpec::new(radii)?)
    }

    pub fn digest(&self) -> Result<String, IoError> {
        Ok(digest(self.container_radius, &self.spec()?.radii))
    }
}

/// SHA-256 over the container radius and the normalized radii in descending
/// order, so any permutation of the same instance shares a digest.
pub fn digest(container_radius: f64, normalized: &[f64]) -> String {
    let mut radii = normalized.to_vec();
    radii.sort_by(|a, b| b.total_cmp(a));
    let mut h = Sha256::new();
    h.update(b"diskpack-instance-v1");
    h.update(container_radius.to_bits().to_le_bytes());
    for r in radii {
        h.update(r.to_bits().to_le_bytes());
    }
    hex::encode(h.finalize())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PackingFile {
    pub format_version: u32,
    pub instance_digest: String,
    #[serde(default = "default_container_radius")]
    pub container_radius: f64,
    /// Disks in packing order, in units of the container radius.
    pub placements: Vec<Placement>,
    pub complete: bool,
    pub unplaced: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<PhaseEvent>>,
}

impl PackingFile {
    pub fn from_result(instance: &InstanceFile, result: &PackingResult, with_trace: bool) -> Result<Self, IoError> {
        Ok(Self {
            format_version: FORMAT_VERSION,
            instance_digest: instance.digest()?,
            container_radius: instance.container_radius,
            placements: result
                .placements
                .iter()
                .map(|d| Placement { radius: d.radius, x: d.center.x, y: d.center.y })
                .collect(),
            complete: result.complete,
            unplaced: result.unplaced.clone(),
            trace: with_trace.then(|| result.phase_trace.clone()),
        })
    }

    pub fn parse(text: &str) -> Result<Self, IoError> {
        let file: Self = serde_json::from_str(text)?;
        if file.format_version != FORMAT_VERSION {
            return Err(IoError::Version(file.format_version));
        }
        Ok(file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("packing serializes")
    }

    /// Radii of the instance this packing claims to cover.
    pub fn implied_radii(&self) -> Vec<f64> {
        self.placements.iter().map(|p| p.radius).chain(self.unplaced.iter().copied()).collect()
    }
}

/// Parse, pack and wrap an instance document.
pub fn pack_file(instance: &InstanceFile, with_trace: bool) -> Result<PackingFile, IoError> {
    let result = pack(&instance.spec()?);
    PackingFile::from_result(instance, &result, with_trace)
}

/// Verify a packing against its instance. Without an instance document the
/// instance is reconstructed from the packing and checked against the digest.
pub fn verify_file(
    instance: Option<&InstanceFile>,
    packing: &PackingFile,
    epsilon: f64,
) -> Result<VerificationReport, IoError> {
    let (expected, radii) = match instance {
        Some(inst) => (inst.digest()?, inst.spec()?.radii),
        None => {
            let radii = packing.implied_radii();
            (digest(packing.container_radius, &radii), radii)
        }
    };
    if expected != packing.instance_digest {
        return Err(IoError::DigestMismatch { packing: packing.instance_digest.clone(), instance: expected });
    }
    Ok(verify(&packing.placements, &radii, epsilon))
}
