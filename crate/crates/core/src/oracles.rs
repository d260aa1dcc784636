//! Closed-form density constants and functions from the worst-case analysis.
//!
//! These are pure functions; tests and the `oracle` subcommand use them to
//! cross-check the packing engine and the ring prover.

use std::f64::consts::PI;

use crate::geom::{GeomError, RingShape};

fn asin_third() -> f64 {
    (1.0_f64 / 3.0).asin()
}

/// Density a container must reach outside the boundary-packing gap so the
/// whole container stays half full: `π / (2π − 2·asin(1/3))`.
pub fn rho() -> f64 {
    PI / (2.0 * PI - 2.0 * asin_third())
}

/// Density of the cone spanned by a disk of radius `r` touching the unit
/// container from inside: `πr² / asin(r / (1 − r))`.
pub fn cone_density(r: f64) -> Result<f64, GeomError> {
    if !(r > 0.0 && r <= 0.5) {
        return Err(GeomError::Domain(format!("cone_density needs r in (0, 1/2], got {r}")));
    }
    Ok(PI * r * r / (r / (1.0 - r)).min(1.0).asin())
}

/// Excess area of two disks over `π/2 · (r1 + r2)²`; never negative.
pub fn two_disk_area_bound(r1: f64, r2: f64) -> f64 {
    PI * (r1 * r1 + r2 * r2) - PI / 2.0 * (r1 + r2) * (r1 + r2)
}

/// Density of the sector of a single-disk zipper: `π / (12·asin(1/3))`.
pub fn zipper_one_density() -> f64 {
    PI / (12.0 * asin_third())
}

/// Area of the pocket left at the end of a minimal ring minus the cone of
/// the disk that would close it, for a last disk of radius `lambda`.
pub fn gap_excess(lambda: f64) -> Result<f64, GeomError> {
    if !(0.125..=0.25).contains(&lambda) {
        return Err(GeomError::Domain(format!("gap_excess needs lambda in [1/8, 1/4], got {lambda}")));
    }
    let spread = 0.5 + 2.0 * lambda;
    Ok((lambda / (0.5 + lambda)).asin() * (1.75 - spread * spread) - 0.75 * asin_third())
}

/// Area of the ring sector between the tangents of a disk touching both
/// boundaries of `ring`.
pub fn unit_sector_volume(ring: &RingShape) -> Result<f64, GeomError> {
    let w = ring.width();
    if !(w > 0.0) || w > ring.r_in {
        return Err(GeomError::Domain(format!(
            "unit sector needs 0 < width <= inner radius, got width {w}, inner radius {}",
            ring.r_in
        )));
    }
    let half = w / 2.0;
    let angle = 2.0 * (half / (ring.r_in + half)).asin();
    Ok(angle * (ring.r_out * ring.r_out - ring.r_in * ring.r_in) / 2.0)
}
