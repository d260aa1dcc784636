//! Outward-rounded interval arithmetic on `f64`.
//!
//! Rounding is directed without touching the FPU mode: each bound is computed
//! in round-to-nearest, its exact rounding error is recovered with an
//! error-free transform (TwoSum or an FMA residual), and the bound is stepped
//! one ulp outward only when the error points the wrong way. Exact results
//! therefore stay exact, e.g. `[1,2] + [3,4] = [4,6]`.
//!
//! Library `asin`/`acos` carry no correctly-rounded guarantee, so their bounds
//! are widened by [`TRANSCENDENTAL_ULPS`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Outward widening applied to `asin`/`acos` bounds.
pub const TRANSCENDENTAL_ULPS: u32 = 6;

/// Below this magnitude FMA residuals may be inexact (subnormal range), so
/// bounds are widened unconditionally.
const TINY: f64 = 1e-290;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IntervalError {
    #[error("division by an interval containing zero: {0}")]
    DivisionByZero(Interval),
    #[error("{op} undefined on {arg}")]
    Domain { op: &'static str, arg: Interval },
    #[error("NaN produced by {0}")]
    NaN(&'static str),
}

#[derive(Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?}, {:?}]", self.lo, self.hi)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?},{:?}]", self.lo, self.hi)
    }
}

fn down(x: f64) -> f64 {
    if x == f64::INFINITY {
        f64::MAX
    } else {
        x.next_down()
    }
}

fn up(x: f64) -> f64 {
    if x == f64::NEG_INFINITY {
        f64::MIN
    } else {
        x.next_up()
    }
}

/// `x + y` rounded toward -inf and toward +inf.
fn add_rounded(x: f64, y: f64) -> (f64, f64) {
    let s = x + y;
    if !s.is_finite() {
        return if x.is_finite() && y.is_finite() { (down(s), up(s)) } else { (s, s) };
    }
    // TwoSum: s + err == x + y exactly.
    let bv = s - x;
    let av = s - bv;
    let err = (x - av) + (y - bv);
    if err < 0.0 {
        (s.next_down(), s)
    } else if err > 0.0 {
        (s, s.next_up())
    } else {
        (s, s)
    }
}

/// `x * y` rounded both ways.
fn mul_rounded(x: f64, y: f64) -> (f64, f64) {
    if x == 0.0 || y == 0.0 {
        return (0.0, 0.0);
    }
    let p = x * y;
    if !p.is_finite() {
        return if x.is_finite() && y.is_finite() { (down(p), up(p)) } else { (p, p) };
    }
    if p.abs() < TINY {
        return (p.next_down(), p.next_up());
    }
    let err = x.mul_add(y, -p);
    if err < 0.0 {
        (p.next_down(), p)
    } else if err > 0.0 {
        (p, p.next_up())
    } else {
        (p, p)
    }
}

/// `x / y` rounded both ways, `y != 0`.
fn div_rounded(x: f64, y: f64) -> (f64, f64) {
    if x == 0.0 {
        return (0.0, 0.0);
    }
    let q = x / y;
    if !q.is_finite() || q.abs() < TINY || y.abs() < TINY || !y.is_finite() {
        return (down(q), up(q));
    }
    // x - q*y exactly; the true quotient exceeds q iff this has the sign of y.
    let r = (-q).mul_add(y, x);
    let err = if y > 0.0 { r } else { -r };
    if err < 0.0 {
        (q.next_down(), q)
    } else if err > 0.0 {
        (q, q.next_up())
    } else {
        (q, q)
    }
}

fn sqrt_rounded(x: f64) -> (f64, f64) {
    let s = x.sqrt();
    if s == 0.0 || !s.is_finite() {
        return (s, s);
    }
    if x < TINY {
        return (s.next_down(), s.next_up());
    }
    let r = (-s).mul_add(s, x);
    if r < 0.0 {
        (s.next_down(), s)
    } else if r > 0.0 {
        (s, s.next_up())
    } else {
        (s, s)
    }
}

fn step_down(mut x: f64, n: u32) -> f64 {
    for _ in 0..n {
        x = x.next_down();
    }
    x
}

fn step_up(mut x: f64, n: u32) -> f64 {
    for _ in 0..n {
        x = x.next_up();
    }
    x
}

impl Interval {
    /// Build `[lo, hi]`. Panics when `lo > hi` or either bound is NaN.
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(lo <= hi, "invalid interval [{lo}, {hi}]");
        Self { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        Self::new(x, x)
    }

    /// Tight enclosure of π.
    pub fn pi() -> Self {
        let p = std::f64::consts::PI;
        Self { lo: p, hi: p.next_up() }
    }

    pub fn hull(self, other: Interval) -> Self {
        Self { lo: self.lo.min(other.lo), hi: self.hi.max(other.hi) }
    }

    pub fn intersect(self, other: Interval) -> Option<Self> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Self { lo, hi })
    }

    pub fn width(self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(self) -> f64 {
        let m = 0.5 * self.lo + 0.5 * self.hi;
        m.clamp(self.lo, self.hi)
    }

    pub fn contains(self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_interval(self, other: Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn is_point(self) -> bool {
        self.lo == self.hi
    }

    pub fn is_nan(self) -> bool {
        self.lo.is_nan() || self.hi.is_nan()
    }

    /// Split at the midpoint.
    pub fn bisect(self) -> (Self, Self) {
        let m = self.mid();
        (Self { lo: self.lo, hi: m }, Self { lo: m, hi: self.hi })
    }

    /// Surface an internal NaN as an error.
    pub fn checked(self, op: &'static str) -> Result<Self, IntervalError> {
        if self.is_nan() {
            Err(IntervalError::NaN(op))
        } else {
            Ok(self)
        }
    }

    pub fn sqr(self) -> Self {
        let (a, b) = (self.lo.abs(), self.hi.abs());
        let (small, large) = if a <= b { (a, b) } else { (b, a) };
        let hi = mul_rounded(large, large).1;
        if self.lo <= 0.0 && self.hi >= 0.0 {
            Self { lo: 0.0, hi }
        } else {
            Self { lo: mul_rounded(small, small).0, hi }
        }
    }

    pub fn min(self, other: Interval) -> Self {
        Self { lo: self.lo.min(other.lo), hi: self.hi.min(other.hi) }
    }

    pub fn max(self, other: Interval) -> Self {
        Self { lo: self.lo.max(other.lo), hi: self.hi.max(other.hi) }
    }

    /// Pointwise `max(x, 0)`.
    pub fn clamp_nonneg(self) -> Self {
        Self { lo: self.lo.max(0.0), hi: self.hi.max(0.0) }
    }

    /// Pointwise `min(x, c)`.
    pub fn clamp_above(self, c: f64) -> Self {
        Self { lo: self.lo.min(c), hi: self.hi.min(c) }
    }

    pub fn scale(self, k: f64) -> Self {
        self * Interval::point(k)
    }

    pub fn div(self, rhs: Interval) -> Result<Self, IntervalError> {
        if self.is_nan() || rhs.is_nan() {
            return Err(IntervalError::NaN("div"));
        }
        if rhs.lo <= 0.0 && rhs.hi >= 0.0 {
            return Err(IntervalError::DivisionByZero(rhs));
        }
        let qs = [
            div_rounded(self.lo, rhs.lo),
            div_rounded(self.lo, rhs.hi),
            div_rounded(self.hi, rhs.lo),
            div_rounded(self.hi, rhs.hi),
        ];
        Self::from_candidates(&qs, "div")
    }

    pub fn sqrt(self) -> Result<Self, IntervalError> {
        if self.is_nan() || self.lo < 0.0 {
            return Err(IntervalError::Domain { op: "sqrt", arg: self });
        }
        Ok(Self { lo: sqrt_rounded(self.lo).0, hi: sqrt_rounded(self.hi).1 })
    }

    pub fn asin(self) -> Result<Self, IntervalError> {
        if self.is_nan() || self.lo < -1.0 || self.hi > 1.0 {
            return Err(IntervalError::Domain { op: "asin", arg: self });
        }
        Ok(Self {
            lo: step_down(self.lo.asin(), TRANSCENDENTAL_ULPS),
            hi: step_up(self.hi.asin(), TRANSCENDENTAL_ULPS),
        })
    }

    pub fn acos(self) -> Result<Self, IntervalError> {
        if self.is_nan() || self.lo < -1.0 || self.hi > 1.0 {
            return Err(IntervalError::Domain { op: "acos", arg: self });
        }
        Ok(Self {
            lo: step_down(self.hi.acos(), TRANSCENDENTAL_ULPS),
            hi: step_up(self.lo.acos(), TRANSCENDENTAL_ULPS),
        })
    }

    fn from_candidates(cs: &[(f64, f64)], op: &'static str) -> Result<Self, IntervalError> {
        let lo = cs.iter().map(|c| c.0).fold(f64::INFINITY, f64::min);
        let hi = cs.iter().map(|c| c.1).fold(f64::NEG_INFINITY, f64::max);
        if cs.iter().any(|c| c.0.is_nan() || c.1.is_nan()) {
            return Err(IntervalError::NaN(op));
        }
        Ok(Self { lo, hi })
    }
}

impl From<f64> for Interval {
    fn from(x: f64) -> Self {
        Interval::point(x)
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, rhs: Interval) -> Interval {
        Interval { lo: add_rounded(self.lo, rhs.lo).0, hi: add_rounded(self.hi, rhs.hi).1 }
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, rhs: Interval) -> Interval {
        self + (-rhs)
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval { lo: -self.hi, hi: -self.lo }
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, rhs: Interval) -> Interval {
        let ps = [
            mul_rounded(self.lo, rhs.lo),
            mul_rounded(self.lo, rhs.hi),
            mul_rounded(self.hi, rhs.lo),
            mul_rounded(self.hi, rhs.hi),
        ];
        // NaN bounds propagate and are caught by `checked`.
        Interval::from_candidates(&ps, "mul").unwrap_or(Interval { lo: f64::NAN, hi: f64::NAN })
    }
}

impl Add<f64> for Interval {
    type Output = Interval;
    fn add(self, rhs: f64) -> Interval {
        self + Interval::point(rhs)
    }
}

impl Sub<f64> for Interval {
    type Output = Interval;
    fn sub(self, rhs: f64) -> Interval {
        self - Interval::point(rhs)
    }
}

impl Mul<f64> for Interval {
    type Output = Interval;
    fn mul(self, rhs: f64) -> Interval {
        self * Interval::point(rhs)
    }
}

impl Sub<Interval> for f64 {
    type Output = Interval;
    fn sub(self, rhs: Interval) -> Interval {
        Interval::point(self) - rhs
    }
}
