//! Placement and tangency invariants of the circle kernel.

use std::f64::consts::TAU;

use diskpack::geom::{angular_separation, inscribed_disk_after_two, place_in_ring, place_tangent};
use diskpack::{ContainerDisk, PlacedDisk, Point, RingShape, Side};
use proptest::prelude::*;

/// Disks touching the unit circle from inside at the given angles.
fn boundary_disks(spec: &[(f64, f64)]) -> Vec<PlacedDisk> {
    spec.iter().map(|&(r, a)| PlacedDisk::new(Point::polar(Point::ORIGIN, 1.0 - r, a), r)).collect()
}

fn overlaps_any(d: &PlacedDisk, prev: &[PlacedDisk]) -> bool {
    prev.iter().any(|q| d.center.distance(q.center) < d.radius + q.radius)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn tangent_placement_is_tangent_and_disjoint(
        prev in proptest::collection::vec((0.02f64..0.45, 0.0f64..TAU), 0..6),
        r in 0.02f64..0.5,
        floor in 0.0f64..TAU,
    ) {
        let unit = ContainerDisk::unit();
        let prev = boundary_disks(&prev);
        if let Some(p) = place_tangent(&unit, r, floor, &prev).unwrap() {
            prop_assert!((p.center.norm() - (1.0 - r)).abs() <= 1e-12);
            for q in &prev {
                prop_assert!(p.center.distance(q.center) >= p.radius + q.radius - 1e-9);
            }
        }
    }

    #[test]
    fn tangent_placement_angle_is_minimal(
        prev in proptest::collection::vec((0.05f64..0.4, 0.0f64..TAU), 1..5),
        r in 0.05f64..0.4,
        floor in 0.0f64..TAU,
    ) {
        let unit = ContainerDisk::unit();
        let prev = boundary_disks(&prev);
        let result = place_tangent(&unit, r, floor, &prev).unwrap();
        let end = result.map_or(TAU, |p| p.center.angle_from(Point::ORIGIN));
        // Reading the angle back through atan2 may lose an ulp.
        prop_assert!(end >= floor - 1e-12);
        let mut a = floor;
        while a < end - 1e-12 {
            let probe = PlacedDisk::new(Point::polar(Point::ORIGIN, 1.0 - r, a), r);
            prop_assert!(overlaps_any(&probe, &prev), "free angle {a} before {end}");
            a += 1e-4;
        }
    }

    #[test]
    fn ring_placement_is_tangent_and_disjoint(
        r_in in 0.2f64..0.9,
        width in 0.02f64..0.3,
        frac in 0.05f64..1.0,
        outer in any::<bool>(),
        floor in 0.0f64..TAU,
        seeds in proptest::collection::vec((0.05f64..1.0, 0.0f64..TAU, any::<bool>()), 0..6),
    ) {
        let ring = RingShape::new(Point::ORIGIN, r_in + width, r_in).unwrap();
        let place_r = |f: f64| f * width / 2.0;
        let anchor = |side: bool, rr: f64| if side { ring.r_out - rr } else { ring.r_in + rr };
        let prev: Vec<PlacedDisk> = seeds
            .iter()
            .map(|&(f, a, s)| PlacedDisk::new(Point::polar(Point::ORIGIN, anchor(s, place_r(f)), a), place_r(f)))
            .collect();
        let r = place_r(frac);
        let side = if outer { Side::Outer } else { Side::Inner };
        if let Some(p) = place_in_ring(&ring, side, floor, &prev, r).unwrap() {
            prop_assert!((p.center.norm() - anchor(outer, r)).abs() <= 1e-12);
            for q in &prev {
                prop_assert!(p.center.distance(q.center) >= p.radius + q.radius - 1e-9);
            }
        }
    }

    #[test]
    fn inscribed_disk_touches_all_three(a in 0.05f64..0.5, b_frac in 0.1f64..1.0, start in 0.0f64..3.0) {
        let unit = ContainerDisk::unit();
        let d1 = PlacedDisk::new(Point::polar(Point::ORIGIN, 1.0 - a, start), a);
        let b = a * b_frac;
        let d2 = place_tangent(&unit, b, start, &[d1]).unwrap().unwrap();
        // d2 rolls until it touches d1, so all three circles are mutually tangent.
        prop_assert!((d2.center.distance(d1.center) - (a + b)).abs() < 1e-9);
        let x = inscribed_disk_after_two(&unit, &d1, &d2);
        prop_assert!(x.radius > 0.0);
        prop_assert!((x.center.norm() + x.radius - 1.0).abs() <= 1e-9);
        for d in [d1, d2] {
            prop_assert!((x.center.distance(d.center) - (x.radius + d.radius)).abs() <= 1e-9);
        }
    }

    #[test]
    fn separation_symmetric_and_monotone(d1 in 0.1f64..1.0, d2 in 0.1f64..1.0, g in 0.0f64..1.0, dg in 0.0f64..0.5) {
        let lo = (d1 - d2).abs();
        let hi = d1 + d2;
        let g1 = lo + g * (hi - lo);
        let g2 = (g1 + dg * (hi - lo)).min(hi);
        let s = angular_separation(d1, d2, g1).unwrap();
        prop_assert_eq!(s, angular_separation(d2, d1, g1).unwrap());
        prop_assert!(angular_separation(d1, d2, g2).unwrap() >= s);
    }
}
