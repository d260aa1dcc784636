//! Plain double-precision edge densities used to cross-check the interval
//! evaluator. Disk centers are constructed explicitly in the plane, angles
//! come from `atan2`, and sector areas from merged angular intervals.
//!
//! `tag` is 1..=8, `first_outer` tells whether the first disk touches the
//! outer boundary, `r` lists the radii in packing order.

#![allow(dead_code)]

use std::f64::consts::PI;

use rand::Rng;

/// `x + y` as an unevaluated exact pair (TwoSum).
fn two_sum(x: f64, y: f64) -> (f64, f64) {
    let s = x + y;
    let bv = s - x;
    (s, (x - (s - bv)) + (y - bv))
}

/// Neumaier-compensated sum.
fn sum(terms: &[f64]) -> f64 {
    let (mut s, mut c) = (0.0f64, 0.0f64);
    for &t in terms {
        let u = s + t;
        c += if s.abs() >= t.abs() { (s - u) + t } else { (t - u) + s };
        s = u;
    }
    s + c
}

/// Exact center distance of disk `k`.
fn dist_exact(first_outer: bool, lam: f64, r: &[f64], k: usize) -> (f64, f64) {
    if (k % 2 == 0) == first_outer {
        two_sum(1.0, -r[k])
    } else {
        two_sum(lam, r[k])
    }
}

fn dist(first_outer: bool, lam: f64, r: &[f64], k: usize) -> f64 {
    let (h, l) = dist_exact(first_outer, lam, r, k);
    h + l
}

/// Angle at the origin between two touching disks with exact center
/// distances `x`, `y` and center gap `c`. Kahan's needle-triangle formula;
/// the one cancelling term `x + y - c`-style is summed from exact parts.
fn triangle_angle(x: (f64, f64), y: (f64, f64), c: (f64, f64)) -> f64 {
    let (ax, bx) = if x.0 + x.1 >= y.0 + y.1 { (x, y) } else { (y, x) };
    let (a, b, cc) = (ax.0 + ax.1, bx.0 + bx.1, c.0 + c.1);
    let mu = sum(&[bx.0, c.0, -ax.0, bx.1, c.1, -ax.1]);
    let num = ((a - b) + cc) * mu;
    let den = (a + (b + cc)) * ((a - cc) + b);
    2.0 * (num / den).max(0.0).sqrt().atan()
}

/// Polar angle at which disk `n` touches disk `k` placed at angle `from`.
fn touch_angle(first_outer: bool, lam: f64, r: &[f64], k: usize, n: usize, from: f64) -> f64 {
    let dk = dist_exact(first_outer, lam, r, k);
    let dn = dist_exact(first_outer, lam, r, n);
    from + triangle_angle(dk, dn, two_sum(r[k], r[n]))
}

/// Measure of `[a1,b1]` weighted `w1` united with `[a2,b2]` weighted `w2`,
/// where the second band lies inside the first.
fn union(a1: f64, b1: f64, w1: f64, a2: f64, b2: f64, w2: f64) -> f64 {
    let overlap = (b1.min(b2) - a1.max(a2)).max(0.0);
    (b1 - a1) * w1 + ((b2 - a2) - overlap) * w2
}

pub fn point_density(tag: u8, first_outer: bool, lam: f64, r: &[f64]) -> f64 {
    let d = |k: usize| dist(first_outer, lam, r, k);
    let cone = |k: usize| (r[k] / d(k)).asin();
    let ring_rate = (1.0 - lam * lam) / 2.0;
    let band_rate = |k: usize| ((d(k) + r[k]).powi(2) - (d(k) - r[k]).powi(2)) / 2.0;
    let disk = |k: usize| PI * r[k] * r[k];
    // First disk on the positive x-axis; later disks rolled counterclockwise
    // until they touch it.
    let touching = |n: usize| touch_angle(first_outer, lam, r, 0, n, 0.0);
    let (pot, area) = if tag <= 4 {
        let phi = touching(1);
        let (tj, tm) = (cone(0), cone(1));
        match tag {
            1 => (disk(0) + disk(1) / 2.0, (phi - (-tj).min(phi - tm)) * ring_rate),
            2 => ((disk(0) + disk(1)) / 2.0, phi * ring_rate),
            3 => (disk(0) / 2.0 + disk(1), union(0.0, tj, ring_rate, 0f64.min(phi - tm), phi + tm, band_rate(1))),
            _ => (disk(0) + disk(1), union(-tj, tj, ring_rate, phi - tm, phi + tm, band_rate(1))),
        }
    } else {
        let phi_p = touching(1);
        let theta_m = touching(2);
        let (tj, tp, tm) = (cone(0), cone(1), cone(2));
        let lo = (-tj).min(phi_p - tp);
        let hi = tj.max(phi_p + tp);
        match tag {
            5 => (disk(0) + disk(1) + disk(2) / 2.0, (theta_m - lo) * ring_rate),
            6 => (disk(1) + (disk(0) + disk(2)) / 2.0, theta_m * ring_rate),
            7 => (disk(0) / 2.0 + disk(1) + disk(2), union(0.0, phi_p + tp, ring_rate, 0.0, theta_m + tm, band_rate(2))),
            _ => (disk(0) + disk(1) + disk(2), union(lo, hi, ring_rate, theta_m - tm, theta_m + tm, band_rate(2))),
        }
    };
    pot / area
}

/// The third disk of a vertical edge meets the first before the middle one.
pub fn vertical_ok(first_outer: bool, lam: f64, r: &[f64]) -> bool {
    let sep = |a: usize, b: usize| touch_angle(first_outer, lam, r, a, b, 0.0);
    sep(0, 2) >= sep(0, 1) + sep(1, 2)
}

/// Uniform-ish admissible point with `λ ∈ [1/2, lam_hi)` and all radii at
/// least `1e-4`.
pub fn random_point<R: Rng>(rng: &mut R, arity: usize, first_outer: bool, lam_hi: f64) -> (f64, Vec<f64>) {
    loop {
        let lam = rng.gen_range(0.5..lam_hi);
        let w = 1.0 - lam;
        let mut r = vec![rng.gen_range(0.0..=w / 2.0)];
        for k in 1..arity {
            let lo = ((w - 2.0 * r[k - 1]) / 2.0).max(0.0);
            if lo > r[k - 1] {
                break;
            }
            r.push(rng.gen_range(lo..=r[k - 1]));
        }
        if r.len() == arity && r.iter().all(|&x| x > 1e-4) && (arity == 2 || vertical_ok(first_outer, lam, &r)) {
            return (lam, r);
        }
    }
}

/// Whether `(lam, r)` satisfies the edge constraints.
pub fn admissible_point(arity: usize, first_outer: bool, lam: f64, r: &[f64]) -> bool {
    let w = 1.0 - lam;
    2.0 * r[0] <= w
        && r.iter().all(|&x| x >= 0.0)
        && (1..arity).all(|k| r[k] <= r[k - 1] && 2.0 * (r[k - 1] + r[k]) >= w)
        && (arity == 2 || vertical_ok(first_outer, lam, r))
}
