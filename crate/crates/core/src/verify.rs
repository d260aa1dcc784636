//! Independent packing checker.
//!
//! Nothing here calls into the engine or the placement geometry; distances
//! are recomputed from raw coordinates with a brute-force pair scan.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

pub const DEFAULT_EPSILON: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ViolationKind {
    Containment,
    Overlap,
    RadiusMismatch,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub indices: Vec<usize>,
    /// How far the constraint is exceeded (positive means violated).
    pub magnitude: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
    /// Placed area over container area.
    pub density: f64,
    pub epsilon: f64,
}

/// A placed disk as read back from a packing: radius and center.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Placement {
    pub radius: f64,
    pub x: f64,
    pub y: f64,
}

/// Check `placements` against the unit container and the instance radii.
pub fn verify(placements: &[Placement], instance: &[f64], epsilon: f64) -> VerificationReport {
    let mut violations = Vec::new();

    for (i, p) in placements.iter().enumerate() {
        let excess = (p.x * p.x + p.y * p.y).sqrt() + p.radius - 1.0;
        if excess > epsilon || !excess.is_finite() {
            violations.push(Violation { kind: ViolationKind::Containment, indices: vec![i], magnitude: excess });
        }
    }

    for i in 0..placements.len() {
        let a = placements[i];
        for (j, b) in placements.iter().enumerate().skip(i + 1) {
            let dx = a.x - b.x;
            let dy = a.y - b.y;
            let depth = a.radius + b.radius - (dx * dx + dy * dy).sqrt();
            if depth > epsilon || !depth.is_finite() {
                violations.push(Violation { kind: ViolationKind::Overlap, indices: vec![i, j], magnitude: depth });
            }
        }
    }

    // Every placed radius must consume a distinct instance radius.
    let mut available: Vec<f64> = instance.to_vec();
    available.sort_by(|a, b| a.total_cmp(b));
    let mut used = vec![false; available.len()];
    for (i, p) in placements.iter().enumerate() {
        let start = available.partition_point(|r| *r < p.radius);
        let slot = (start..available.len()).find(|&k| available[k] == p.radius && !used[k]);
        match slot {
            Some(k) => used[k] = true,
            None => violations.push(Violation {
                kind: ViolationKind::RadiusMismatch,
                indices: vec![i],
                magnitude: p.radius,
            }),
        }
    }

    violations.sort_by(|a, b| a.kind.cmp(&b.kind).then_with(|| a.indices.cmp(&b.indices)));
    let density = placements.iter().map(|p| PI * p.radius * p.radius).sum::<f64>() / PI;
    VerificationReport { valid: violations.is_empty(), violations, density, epsilon }
}
