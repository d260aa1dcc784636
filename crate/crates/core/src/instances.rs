//! Instance families: the critical pair, random area-constrained sets,
//! hand-built instances that straddle branch thresholds, and the three-disk
//! pocket.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::{InstanceSpec, MIN_RADIUS};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeneratorError {
    #[error("invalid generator parameter: {0}")]
    Parameter(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeneratorKind {
    WorstCase,
    RandomArea,
    NearThreshold,
    Pocket3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EdgeKind {
    /// Two radii straddling the recursion ratio.
    RecursionEdge,
    /// Radii straddling the initial boundary threshold 1/4.
    QuarterEdge,
    /// Consecutive radii whose diameters sum to the ring width ± 1e-9.
    PassEdge,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub n: usize,
    pub total_area: f64,
    pub seed: u64,
    pub min_radius_ratio: f64,
}

impl GeneratorSpec {
    pub fn generate(&self) -> Result<InstanceSpec, GeneratorError> {
        match self.kind {
            GeneratorKind::WorstCase => Ok(gen_worst_case(0.0)),
            GeneratorKind::RandomArea => gen_random_area(self.n, self.total_area, self.seed, self.min_radius_ratio),
            GeneratorKind::NearThreshold => Ok(gen_near_threshold(EdgeKind::RecursionEdge)),
            GeneratorKind::Pocket3 => Ok(gen_pocket3()),
        }
    }
}

fn spec(radii: Vec<f64>) -> InstanceSpec {
    InstanceSpec::new(radii).expect("generated radii are valid")
}

/// Two disks of radius `(1 + inflation) / 2`. With zero inflation this is
/// the critical instance of total area π/2.
pub fn gen_worst_case(inflation: f64) -> InstanceSpec {
    let r = 0.5 * (1.0 + inflation);
    spec(vec![r, r])
}

/// `n` log-uniform radii in `[min_radius_ratio, 1]`, rescaled by a common
/// factor so the total area is `total_area`.
pub fn gen_random_area(
    n: usize,
    total_area: f64,
    seed: u64,
    min_radius_ratio: f64,
) -> Result<InstanceSpec, GeneratorError> {
    if n == 0 {
        return Err(GeneratorError::Parameter("n must be at least 1".into()));
    }
    if !(total_area > 0.0 && total_area <= PI) {
        return Err(GeneratorError::Parameter(format!("total area must lie in (0, π], got {total_area}")));
    }
    if !(min_radius_ratio > 0.0 && min_radius_ratio <= 1.0) {
        return Err(GeneratorError::Parameter(format!(
            "min radius ratio must lie in (0, 1], got {min_radius_ratio}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let low = min_radius_ratio.ln();
    let raw: Vec<f64> = (0..n)
        .map(|_| if low == 0.0 { 1.0 } else { rng.gen_range(low..=0.0).exp() })
        .collect();
    let area: f64 = raw.iter().map(|r| PI * r * r).sum();
    let scale = (total_area / area).sqrt();
    let radii: Vec<f64> = raw.iter().map(|r| r * scale).collect();
    if let Some(r) = radii.iter().find(|r| **r < MIN_RADIUS) {
        return Err(GeneratorError::Parameter(format!(
            "min radius ratio {min_radius_ratio} yields radius {r} below {MIN_RADIUS}"
        )));
    }
    Ok(spec(radii))
}

/// Three equal disks that fit into the unit disk only when pairwise touching.
pub fn gen_pocket3() -> InstanceSpec {
    spec(vec![pocket3_radius(); 3])
}

pub fn pocket3_radius() -> f64 {
    3f64.sqrt() / (2.0 + 3f64.sqrt())
}

/// Append equal filler disks of radius `r` while the area stays within `cap`.
fn fill(radii: &mut Vec<f64>, r: f64, cap: f64) {
    let mut area: f64 = radii.iter().map(|x| PI * x * x).sum();
    while area + PI * r * r <= cap {
        radii.push(r);
        area += PI * r * r;
    }
}

/// Small families that sit on the edge of one branch condition, each with
/// total area at most π/2.
pub fn gen_near_threshold(kind: EdgeKind) -> InstanceSpec {
    let cap = PI / 2.0;
    let mut radii = match kind {
        EdgeKind::RecursionEdge => vec![0.4951, 0.4950],
        EdgeKind::QuarterEdge => vec![0.2501, 0.2499, 0.2499, 0.2499],
        EdgeKind::PassEdge => {
            // The first ring is 0.4 wide. The zipper pairs sum to the width,
            // then to width + 2e-9, then to width - 1e-9.
            let mut v = vec![0.2];
            v.extend([0.100_000_000_5; 3]);
            v.push(0.099_999_999_5);
            v.push(0.099_999_999_0);
            v
        }
    };
    match kind {
        EdgeKind::RecursionEdge => fill(&mut radii, 0.03, cap),
        EdgeKind::QuarterEdge => {
            fill(&mut radii, 0.12, cap * 0.9);
            fill(&mut radii, 0.02, cap);
        }
        EdgeKind::PassEdge => {
            fill(&mut radii, 0.05, cap * 0.8);
            fill(&mut radii, 0.01, cap);
        }
    }
    spec(radii)
}
