//! Edge configurations and the parameter boxes the prover subdivides.
//!
//! A ring has outer radius 1 and inner radius `λ`. Radii are listed in
//! packing order, which is also descending size: `r[0]` is the disk the edge
//! starts from, `r[1]` the next one, and for vertical edges `r[2]` is the
//! disk on the same boundary as `r[0]`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::interval::Interval;

/// Smallest inner radius considered.
pub const LAMBDA_MIN: f64 = 0.5;
/// Default upper end of the inner-radius range.
pub const LAMBDA_MAX: f64 = 0.99;
/// Radii never exceed half the widest ring, `(1 - 1/2) / 2`.
pub const RADIUS_MAX: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CaseTag {
    T1,
    T2,
    T3,
    T4,
    T5,
    T6,
    T7,
    T8,
}

impl CaseTag {
    pub const ALL: [CaseTag; 8] =
        [CaseTag::T1, CaseTag::T2, CaseTag::T3, CaseTag::T4, CaseTag::T5, CaseTag::T6, CaseTag::T7, CaseTag::T8];

    /// T1-T4 join two disks on different boundaries, T5-T8 two disks on the
    /// same boundary with one disk in between on the other.
    pub fn arity(self) -> usize {
        if self.is_vertical() {
            3
        } else {
            2
        }
    }

    pub fn is_vertical(self) -> bool {
        matches!(self, CaseTag::T5 | CaseTag::T6 | CaseTag::T7 | CaseTag::T8)
    }

    /// Start edges (T1, T4, T5, T8) open a zipper, whose first disk always
    /// touches the outer boundary.
    pub fn is_start(self) -> bool {
        matches!(self, CaseTag::T1 | CaseTag::T4 | CaseTag::T5 | CaseTag::T8)
    }

    pub fn orientations(self) -> &'static [Orientation] {
        if self.is_start() {
            &[Orientation::OuterFirst]
        } else {
            &[Orientation::OuterFirst, Orientation::InnerFirst]
        }
    }

    pub fn parse(s: &str) -> Option<CaseTag> {
        CaseTag::ALL.into_iter().find(|t| t.to_string().eq_ignore_ascii_case(s))
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T{}", *self as u8 + 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    /// The first disk touches the outer boundary.
    OuterFirst,
    /// The first disk touches the inner boundary.
    InnerFirst,
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Orientation::OuterFirst => "outer",
            Orientation::InnerFirst => "inner",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ConfigType {
    pub tag: CaseTag,
    pub orientation: Orientation,
}

impl ConfigType {
    pub fn new(tag: CaseTag, orientation: Orientation) -> Self {
        Self { tag, orientation }
    }

    pub fn arity(self) -> usize {
        self.tag.arity()
    }

    /// Every configuration the prover certifies, in a fixed order.
    pub fn all() -> Vec<ConfigType> {
        CaseTag::ALL
            .into_iter()
            .flat_map(|t| t.orientations().iter().map(move |&o| ConfigType::new(t, o)))
            .collect()
    }
}

impl fmt::Display for ConfigType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.tag, self.orientation)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseBox {
    pub lambda: Interval,
    pub r: Vec<Interval>,
    pub config: ConfigType,
    pub depth: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Admissibility {
    Feasible,
    Infeasible,
    Undecided,
}

impl CaseBox {
    /// Full parameter range for `config` with `λ ∈ [1/2, lambda_max]`.
    pub fn root(config: ConfigType, lambda_max: f64) -> Self {
        Self::with_lambda(config, Interval::new(LAMBDA_MIN, lambda_max))
    }

    pub fn with_lambda(config: ConfigType, lambda: Interval) -> Self {
        Self { lambda, r: vec![Interval::new(0.0, RADIUS_MAX); config.arity()], config, depth: 0 }
    }

    /// All coordinates in order `λ, r1, r2[, r3]`.
    pub fn dims(&self) -> impl Iterator<Item = Interval> + '_ {
        std::iter::once(self.lambda).chain(self.r.iter().copied())
    }

    fn dim_mut(&mut self, k: usize) -> &mut Interval {
        if k == 0 {
            &mut self.lambda
        } else {
            &mut self.r[k - 1]
        }
    }

    /// Interior point at fractions `t` (one per dimension, in `[0, 1]`).
    pub fn point_at(&self, t: &[f64]) -> Vec<f64> {
        self.dims().zip(t).map(|(d, &s)| (d.lo + s * d.width()).clamp(d.lo, d.hi)).collect()
    }

    /// Split at the midpoint of the widest dimension, widths normalized by
    /// `scale`. Ties go to the lowest dimension.
    pub fn split(&self, scale: &[f64]) -> (CaseBox, CaseBox) {
        let mut best = 0;
        let mut best_w = f64::NEG_INFINITY;
        for (k, d) in self.dims().enumerate() {
            let w = d.width() / scale[k];
            if w > best_w {
                best = k;
                best_w = w;
            }
        }
        let mut a = self.clone();
        let mut b = self.clone();
        a.depth += 1;
        b.depth += 1;
        let (lo, hi) = self.dims().nth(best).expect("dimension exists").bisect();
        *a.dim_mut(best) = lo;
        *b.dim_mut(best) = hi;
        (a, b)
    }

    /// Normalization widths of the root box.
    pub fn root_scale(config: ConfigType, lambda_max: f64) -> Vec<f64> {
        let mut s = vec![(lambda_max - LAMBDA_MIN).max(f64::MIN_POSITIVE)];
        s.extend(std::iter::repeat(RADIUS_MAX).take(config.arity()));
        s
    }

    /// Shrink the box to a sub-box containing every admissible point of it,
    /// using the linear constraints. `None` when nothing admissible remains.
    pub fn contract(&self) -> Option<CaseBox> {
        let mut b = self.clone();
        let n = b.r.len();
        for _ in 0..2 {
            let one = Interval::point(1.0);
            // Widest and narrowest ring widths in the box.
            let w_max = (one - Interval::point(b.lambda.lo)).hi;
            let w_min = (one - Interval::point(b.lambda.hi)).lo;

            b.r[0].hi = b.r[0].hi.min(w_max * 0.5);
            for k in 1..n {
                b.r[k].hi = b.r[k].hi.min(b.r[k - 1].hi);
                let pass = (Interval::point(w_min) - Interval::point(b.r[k - 1].hi) * 2.0) * 0.5;
                b.r[k].lo = b.r[k].lo.max(pass.lo);
            }
            // A disk at least as large as its successor and jointly spanning
            // the ring is at least a quarter of the width.
            for k in 0..n - 1 {
                b.r[k].lo = b.r[k].lo.max(b.r[k + 1].lo).max(w_min * 0.25);
            }
            let lam_hi = (one - Interval::point(b.r[0].lo) * 2.0).hi;
            let lam_lo = (one - (Interval::point(b.r[0].hi) + Interval::point(b.r[1].hi)) * 2.0).lo;
            b.lambda.hi = b.lambda.hi.min(lam_hi);
            b.lambda.lo = b.lambda.lo.max(lam_lo);

            if b.dims().any(|d| !(d.lo <= d.hi)) {
                return None;
            }
        }
        Some(b)
    }
}

impl fmt::Display for CaseBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "λ={}", self.lambda)?;
        for (k, r) in self.r.iter().enumerate() {
            write!(f, " r{}={}", k + 1, r)?;
        }
        Ok(())
    }
}

fn classify(g: Interval, verdict: &mut Admissibility) {
    if g.hi < 0.0 {
        *verdict = Admissibility::Infeasible;
    } else if g.lo < 0.0 && *verdict == Admissibility::Feasible {
        *verdict = Admissibility::Undecided;
    }
}

/// Interval test of the constraints every packed edge satisfies:
/// `2 r1 <= 1 - λ`, consecutive disks cannot pass each other
/// (`2 r_k + 2 r_{k+1} >= 1 - λ`), radii descend, and for vertical edges the
/// third disk reaches the first one before it reaches the middle one.
pub fn admissible(b: &CaseBox) -> Admissibility {
    let mut verdict = Admissibility::Feasible;
    let w = 1.0 - b.lambda;
    classify(w - b.r[0] * 2.0, &mut verdict);
    for k in 1..b.r.len() {
        classify((b.r[k - 1] + b.r[k]) * 2.0 - w, &mut verdict);
        classify(b.r[k - 1] - b.r[k], &mut verdict);
    }
    for r in &b.r {
        classify(*r, &mut verdict);
    }
    if verdict == Admissibility::Infeasible {
        return verdict;
    }
    if b.config.tag.is_vertical() {
        match crate::density::vertical_slack(b) {
            Ok(g) => classify(g, &mut verdict),
            Err(_) => {
                if verdict == Admissibility::Feasible {
                    verdict = Admissibility::Undecided;
                }
            }
        }
    }
    verdict
}
