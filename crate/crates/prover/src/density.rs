//! Interval evaluation of edge-sector densities.
//!
//! Angles are measured at the ring center from the center ray of the first
//! disk. Disk centers sit at `1 - r` when touching the outer boundary and at
//! `λ + r` when touching the inner one. The angle between two touching disks
//! comes from the half-angle form of the law of cosines,
//! `sin²(φ/2) = (g² - Δd²) / (4 d_a d_b)`, whose numerator factors exactly:
//! `(1-λ)(2(r_a + r_b) - (1-λ))` for disks on different boundaries and
//! `4 r_a r_b` for disks on the same boundary.

use crate::case::{CaseBox, CaseTag, Orientation};
use crate::interval::{Interval, IntervalError};

/// Potential and area of a sector, both per the same angular unit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectorParts {
    pub potential: Interval,
    pub area: Interval,
}

fn zero() -> Interval {
    Interval::point(0.0)
}

fn monotone(lo: Result<Interval, IntervalError>, hi: Result<Interval, IntervalError>) -> Result<Interval, IntervalError> {
    let (lo, hi) = (lo?.lo, hi?.hi);
    if lo <= hi {
        Ok(Interval::new(lo, hi))
    } else {
        Err(IntervalError::NaN("monotone bounds crossed"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Boundary {
    Outer,
    Inner,
}

impl Boundary {
    fn other(self) -> Self {
        match self {
            Boundary::Outer => Boundary::Inner,
            Boundary::Inner => Boundary::Outer,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Disk {
    r: Interval,
    at: Boundary,
}

struct Ring {
    lambda: Interval,
    width: Interval,
}

impl Ring {
    fn new(lambda: Interval) -> Self {
        Self { lambda, width: 1.0 - lambda }
    }

    fn center_distance(&self, d: Disk) -> Interval {
        match d.at {
            Boundary::Outer => 1.0 - d.r,
            Boundary::Inner => self.lambda + d.r,
        }
    }

    /// Ring area per radian, `(1 - λ²) / 2`.
    fn area_rate(&self) -> Interval {
        (1.0 - self.lambda.sqr()) * 0.5
    }

    /// Area per radian of the thinnest concentric ring containing `d`,
    /// `2 d r`. Both forms increase in each argument on the domain.
    fn band_rate(&self, d: Disk) -> Result<Interval, IntervalError> {
        let at = |lam: f64, r: f64| {
            let (lam, r) = (Interval::point(lam), Interval::point(r));
            let dist = match d.at {
                Boundary::Outer => 1.0 - r,
                Boundary::Inner => lam + r,
            };
            Ok(dist * r * 2.0)
        };
        match d.at {
            Boundary::Outer => monotone(at(0.0, d.r.lo), at(0.0, d.r.hi)),
            Boundary::Inner => monotone(at(self.lambda.lo, d.r.lo), at(self.lambda.hi, d.r.hi)),
        }
    }

    /// Half the opening angle of the cone over `d`, `asin(r / dist)`.
    /// The ratio increases in `r` and decreases in `λ`.
    fn tangent_angle(&self, d: Disk) -> Result<Interval, IntervalError> {
        let ratio = |lam: f64, r: f64| {
            let r = Interval::point(r);
            let dist = match d.at {
                Boundary::Outer => 1.0 - r,
                Boundary::Inner => Interval::point(lam) + r,
            };
            r.div(dist)
        };
        let s = monotone(ratio(self.lambda.hi, d.r.lo), ratio(self.lambda.lo, d.r.hi))?;
        s.clamp_above(1.0).asin()
    }

    /// Angle between the centers of two touching disks.
    fn separation(&self, a: Disk, b: Disk) -> Result<Interval, IntervalError> {
        let num = if a.at == b.at {
            a.r * b.r * 4.0
        } else {
            self.width * ((a.r + b.r) * 2.0 - self.width)
        };
        let den = self.center_distance(a) * self.center_distance(b) * 4.0;
        // On admissible points the ratio lies in [0, 1]; clamping only
        // removes rounding spill-over.
        let s2 = num.clamp_nonneg().div(den)?.clamp_above(1.0);
        Ok(s2.sqrt()?.asin()? * 2.0)
    }
}

/// Length of `I2 \ I1` from `I2.hi - I1.hi`, `I1.lo - I2.lo` and `|I2|`.
fn excess(above: Interval, below: Interval, len2: Interval) -> Interval {
    above.min(len2).clamp_nonneg() + below.min(len2).clamp_nonneg()
}

fn first_boundary(o: Orientation) -> Boundary {
    match o {
        Orientation::OuterFirst => Boundary::Outer,
        Orientation::InnerFirst => Boundary::Inner,
    }
}

fn disks(b: &CaseBox) -> Vec<Disk> {
    let first = first_boundary(b.config.orientation);
    b.r.iter()
        .enumerate()
        .map(|(k, &r)| Disk { r, at: if k % 2 == 0 { first } else { first.other() } })
        .collect()
}

/// `θ_m - φ_p - φ_pm` for a vertical edge: nonnegative when the third disk,
/// rolled along the first disk's boundary, meets the first disk no earlier
/// than the middle one.
pub fn vertical_slack(b: &CaseBox) -> Result<Interval, IntervalError> {
    let ring = Ring::new(b.lambda);
    let ds = disks(b);
    let (j, p, m) = (ds[0], ds[1], ds[2]);
    let slack = ring.separation(j, m)? - ring.separation(j, p)? - ring.separation(p, m)?;
    slack.checked("vertical_slack")
}

/// Potential and area of the edge sector of `b`'s configuration.
pub fn sector_parts(b: &CaseBox) -> Result<SectorParts, IntervalError> {
    let ring = Ring::new(b.lambda);
    let ds = disks(b);
    let pi = Interval::pi();
    let a = ring.area_rate();
    let sq = |k: usize| ds[k].r.sqr();
    let half = |x: Interval| x * 0.5;

    let parts = if !b.config.tag.is_vertical() {
        let (j, m) = (ds[0], ds[1]);
        let phi = ring.separation(j, m)?;
        let tj = ring.tangent_angle(j)?;
        let tm = ring.tangent_angle(m)?;
        match b.config.tag {
            CaseTag::T1 => SectorParts { potential: pi * (sq(0) + half(sq(1))), area: a * (phi + tj).max(tm) },
            CaseTag::T2 => SectorParts { potential: pi * half(sq(0) + sq(1)), area: a * phi },
            CaseTag::T3 => {
                let bm = ring.band_rate(m)?;
                let len2 = (phi + tm).max(tm * 2.0);
                let extra = excess(phi + tm - tj, (tm - phi).clamp_nonneg(), len2);
                SectorParts { potential: pi * (half(sq(0)) + sq(1)), area: a * tj + bm * extra }
            }
            CaseTag::T4 => {
                let bm = ring.band_rate(m)?;
                let len2 = tm * 2.0;
                let extra = excess(phi + tm - tj, tm - tj - phi, len2);
                SectorParts { potential: pi * (sq(0) + sq(1)), area: a * tj * 2.0 + bm * extra }
            }
            _ => unreachable!("diagonal tags"),
        }
    } else {
        let (j, p, m) = (ds[0], ds[1], ds[2]);
        let phi_p = ring.separation(j, p)?;
        let theta_m = ring.separation(j, m)?;
        let tj = ring.tangent_angle(j)?;
        let tp = ring.tangent_angle(p)?;
        let tm = ring.tangent_angle(m)?;
        match b.config.tag {
            CaseTag::T5 => SectorParts {
                potential: pi * (sq(0) + sq(1) + half(sq(2))),
                area: a * (theta_m + tj).max(theta_m - phi_p + tp),
            },
            CaseTag::T6 => SectorParts { potential: pi * (sq(1) + half(sq(0) + sq(2))), area: a * theta_m },
            CaseTag::T7 => {
                let bm = ring.band_rate(m)?;
                let len2 = theta_m + tm;
                let extra = excess(len2 - phi_p - tp, zero(), len2);
                SectorParts { potential: pi * (half(sq(0)) + sq(1) + sq(2)), area: a * (phi_p + tp) + bm * extra }
            }
            CaseTag::T8 => {
                let bm = ring.band_rate(m)?;
                let upper = tj.max(phi_p + tp);
                let lower_neg = tj.max(tp - phi_p);
                let len2 = tm * 2.0;
                let extra = excess(theta_m + tm - upper, tm - theta_m - lower_neg, len2);
                SectorParts { potential: pi * (sq(0) + sq(1) + sq(2)), area: a * (upper + lower_neg) + bm * extra }
            }
            _ => unreachable!("vertical tags"),
        }
    };
    parts.potential.checked("potential")?;
    parts.area.checked("area")?;
    Ok(parts)
}

/// Enclosure of the sector density. When the area may vanish the upper end
/// is `+inf`.
pub fn eval_density(b: &CaseBox) -> Result<Interval, IntervalError> {
    let SectorParts { potential, area } = sector_parts(b)?;
    if area.hi <= 0.0 {
        return Err(IntervalError::DivisionByZero(area));
    }
    if area.lo <= 0.0 {
        let lo = Interval::point(potential.lo.max(0.0)).div(Interval::point(area.hi))?.lo;
        return Ok(Interval { lo, hi: f64::INFINITY });
    }
    potential.div(area)?.checked("density")
}

#[cfg(test)]
#[path = "../tests/support/point_oracle.rs"]
mod point_oracle;

#[cfg(test)]
mod tests {
    use super::point_oracle::{point_density as oracle, random_point, vertical_ok};
    use super::*;
    use crate::case::{admissible, Admissibility, ConfigType};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn tag_no(cfg: ConfigType) -> u8 {
        cfg.tag as u8 + 1
    }

    fn outer(cfg: ConfigType) -> bool {
        cfg.orientation == Orientation::OuterFirst
    }

    fn point_density(cfg: ConfigType, lam: f64, r: &[f64]) -> f64 {
        oracle(tag_no(cfg), outer(cfg), lam, r)
    }

    fn point_box(cfg: ConfigType, lam: f64, r: &[f64]) -> CaseBox {
        CaseBox { lambda: Interval::point(lam), r: r.iter().map(|&x| Interval::point(x)).collect(), config: cfg, depth: 0 }
    }

    #[test]
    fn point_boxes_enclose_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for cfg in ConfigType::all().into_iter().chain([
            ConfigType::new(CaseTag::T1, Orientation::InnerFirst),
            ConfigType::new(CaseTag::T8, Orientation::InnerFirst),
        ]) {
            for _ in 0..2_000 {
                let (lam, r) = random_point(&mut rng, cfg.arity(), outer(cfg), 0.99);
                let d = point_density(cfg, lam, &r);
                let iv = eval_density(&point_box(cfg, lam, &r)).unwrap();
                // Slack for the oracle's own rounding.
                let tol = 1e-11 * d;
                assert!(iv.lo <= d + tol && d - tol <= iv.hi, "{cfg} λ={lam} r={r:?}: {d} ∉ {iv}");
                assert!(iv.width() < 1e-9 * d.max(1.0), "{cfg}: wide point enclosure {iv}");
            }
        }
    }

    #[test]
    fn t2_degenerate_point() {
        let cfg = ConfigType::new(CaseTag::T2, Orientation::OuterFirst);
        let iv = eval_density(&point_box(cfg, 0.5, &[0.25, 0.25])).unwrap();
        let d = point_density(cfg, 0.5, &[0.25, 0.25]);
        assert!(iv.contains(d), "{d} ∉ {iv}");
        // Both disks span the ring: centers at 3/4, one diameter apart.
        let phi = 2.0 * (1.0f64 / 3.0).asin();
        assert!((d - (PI * 0.0625) / (phi * 0.375)).abs() < 1e-12);
    }

    #[test]
    fn t1_degenerate_point_exceeds_bound() {
        let cfg = ConfigType::new(CaseTag::T1, Orientation::OuterFirst);
        let iv = eval_density(&point_box(cfg, 0.5, &[0.25, 0.25])).unwrap();
        assert!(iv.contains(point_density(cfg, 0.5, &[0.25, 0.25])));
        assert!(iv.lo >= 0.5642, "{iv}");
    }

    #[test]
    fn vertical_slack_matches_geometry() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for cfg in [ConfigType::new(CaseTag::T6, Orientation::OuterFirst), ConfigType::new(CaseTag::T6, Orientation::InnerFirst)] {
            for _ in 0..2_000 {
                let lam: f64 = rng.gen_range(0.5..0.99);
                let w = 1.0 - lam;
                let r0: f64 = rng.gen_range(w / 4.0..=w / 2.0);
                let r1: f64 = rng.gen_range(((w - 2.0 * r0) / 2.0).max(0.0)..=r0);
                let lo2 = ((w - 2.0 * r1) / 2.0).max(0.0);
                if lo2 > r1 {
                    continue;
                }
                let r2 = rng.gen_range(lo2..=r1);
                let r = [r0, r1, r2];
                let slack = vertical_slack(&point_box(cfg, lam, &r)).unwrap();
                let ok = vertical_ok(outer(cfg), lam, &r);
                if slack.lo > 1e-12 {
                    assert!(ok);
                }
                if slack.hi < -1e-12 {
                    assert!(!ok);
                    assert_eq!(admissible(&point_box(cfg, lam, &r)), Admissibility::Infeasible);
                }
            }
        }
    }

    #[test]
    fn vanishing_area_gives_half_line() {
        // r2 -> 0 with r1 spanning the ring: the two centers line up.
        let cfg = ConfigType::new(CaseTag::T2, Orientation::OuterFirst);
        let b = CaseBox {
            lambda: Interval::point(0.5),
            r: vec![Interval::point(0.25), Interval::new(0.0, 1e-3)],
            config: cfg,
            depth: 0,
        };
        let iv = eval_density(&b).unwrap();
        assert_eq!(iv.hi, f64::INFINITY);
        assert!(iv.lo > 0.5642);
    }
}
