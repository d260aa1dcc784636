//! Exact sign tests for rounded results, and a double-double sine used to
//! check inverse trigonometric enclosures.

use std::cmp::Ordering;

/// Compare the exact value `approx + err` (with `err` small relative to
/// `approx`) against the float `bound`.
pub fn cmp_exact(approx: f64, err_sign: Ordering, bound: f64) -> Ordering {
    match approx.partial_cmp(&bound).expect("finite") {
        Ordering::Equal => err_sign,
        o => o,
    }
}

fn sign(x: f64) -> Ordering {
    x.partial_cmp(&0.0).expect("finite")
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

/// Rounded sum and the sign of the rounding error.
pub fn add(x: f64, y: f64) -> (f64, Ordering) {
    let (s, e) = two_sum(x, y);
    (s, sign(e))
}

pub fn mul(x: f64, y: f64) -> (f64, Ordering) {
    let p = x * y;
    (p, sign(x.mul_add(y, -p)))
}

pub fn div(x: f64, y: f64) -> (f64, Ordering) {
    let q = x / y;
    let r = (-q).mul_add(y, x);
    let s = if y > 0.0 { sign(r) } else { sign(r).reverse() };
    (q, s)
}

pub fn sqrt(x: f64) -> (f64, Ordering) {
    let s = x.sqrt();
    (s, sign((-s).mul_add(s, x)))
}

/// Double-double value `hi + lo`.
#[derive(Clone, Copy)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl Dd {
    fn new(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let (hi, lo) = two_sum(s, e + self.lo + o.lo);
        Dd { hi, lo }
    }

    fn mul(self, o: Dd) -> Dd {
        let p = self.hi * o.hi;
        let e = self.hi.mul_add(o.hi, -p) + self.hi * o.lo + self.lo * o.hi;
        let (hi, lo) = two_sum(p, e);
        Dd { hi, lo }
    }

    fn div_small(self, k: f64) -> Dd {
        let q = self.hi / k;
        let r = Dd { hi: self.hi, lo: self.lo }.add(Dd::new(q).mul(Dd::new(-k)));
        let (hi, lo) = two_sum(q, r.hi / k);
        Dd { hi, lo }
    }
}

const HALF_PI: Dd = Dd { hi: 1.5707963267948966, lo: 6.123233995736766e-17 };

/// `sin(x)` for `|x| ≤ 1.6` by Taylor series in double-double, accurate to
/// about 1e-30.
fn sin_dd(x: Dd) -> Dd {
    let x2 = x.mul(x);
    let mut term = x;
    let mut sum = x;
    for k in 1..40 {
        term = term.mul(x2).div_small(-((2 * k) as f64 * (2 * k + 1) as f64));
        sum = sum.add(term);
        if term.hi.abs() < 1e-34 {
            break;
        }
    }
    sum
}

/// Sign of `sin(t) - x` for `t ∈ [-π/2, π/2]`, `None` when too close to call.
pub fn sin_vs(t: f64, x: f64) -> Option<Ordering> {
    let d = sin_dd(Dd::new(t)).add(Dd::new(-x));
    let v = d.hi + d.lo;
    (v.abs() > 1e-28).then(|| sign(v))
}

/// Sign of `cos(t) - x` for `t ∈ [0, π]`.
pub fn cos_vs(t: f64, x: f64) -> Option<Ordering> {
    let d = sin_dd(HALF_PI.add(Dd::new(-t))).add(Dd::new(-x));
    let v = d.hi + d.lo;
    (v.abs() > 1e-28).then(|| sign(v))
}
