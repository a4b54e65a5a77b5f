//! Invariants of validated maps, the degree and the verdict, over random
//! maps and random inputs.

mod common;

use std::f64::consts::{PI, TAU};

use proptest::prelude::*;
use pwlinv::cli::{load_map_str, write_map_string};
use pwlinv::{sweep, wrap_sweep, Direction, Mat2, Orientation, PwlMap2, Sector, VerdictTag};

fn any_map() -> impl Strategy<Value = PwlMap2> {
    (1usize..=8, any::<u64>(), any::<bool>())
        .prop_filter_map("generation failed", |(n, seed, f)| {
            pwlinv::random_map(n, seed, f).ok()
        })
}

fn nonsingular() -> impl Strategy<Value = Mat2> {
    prop::array::uniform4(-5.0f64..5.0)
        .prop_map(|e| Mat2::new(e[0], e[1], e[2], e[3]))
        .prop_filter("near singular", |m| {
            m.det().abs() > 1e-2 * m.frobenius_norm().powi(2)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn wrap_sweep_identities(a in -20.0f64..20.0, b in -20.0f64..20.0) {
        let ccw = wrap_sweep(a, b, Orientation::Ccw);
        let cw = wrap_sweep(a, b, Orientation::Cw);
        prop_assert!(ccw > 0.0 && ccw <= TAU);
        prop_assert!((-TAU..0.0).contains(&cw));
        prop_assert!((ccw - cw - TAU).abs() < 1e-12);
        // Turning counterclockwise from a by ccw lands on b.
        let d = Direction::from_angle(a + ccw);
        let e = Direction::from_angle(b);
        prop_assert!((d.x() - e.x()).abs() < 1e-9 && (d.y() - e.y()).abs() < 1e-9);
    }

    #[test]
    fn every_direction_lies_in_one_or_two_cones(g in any_map(), t in 0.0f64..TAU) {
        let d = Direction::from_angle(t);
        let hits = g.pieces().iter().filter(|p| p.sector.contains(&d)).count();
        prop_assert!(hits == 1 || hits == 2, "{hits} cones contain angle {t}");
        let total: f64 = g.widths().iter().sum();
        prop_assert!((total - TAU).abs() < 1e-9);
    }

    #[test]
    fn maps_are_positively_homogeneous(g in any_map(), t in 0.0f64..TAU, r in 1e-3f64..1e3, s in 1e-3f64..1e3) {
        let x = common::polar(r, t);
        let gx = g.evaluate(x);
        let gsx = g.evaluate(s * x);
        prop_assert!(common::rel_err(gsx, s * gx) < 1e-12);
    }

    #[test]
    fn neighbouring_pieces_agree_on_their_seam(g in any_map()) {
        let n = g.n();
        for i in 0..n {
            let p = &g.pieces()[i];
            let prev = &g.pieces()[(i + n - 1) % n];
            let u = pwlinv::Vec2::from(p.sector.start());
            let (a, b) = (p.matrix.apply(u), prev.matrix.apply(u));
            prop_assert!(common::rel_err(a, b) < 1e-9, "seam {i}: {a:?} vs {b:?}");
        }
    }

    #[test]
    fn image_sweep_is_bounded(m in nonsingular(), start in 0.0f64..TAU, width in 1e-6f64..TAU) {
        let s = Sector::new(start, width).unwrap();
        let w = sweep(&m, &s).unwrap();
        prop_assert!(w.abs() < TAU);
        if width < PI {
            prop_assert!(w.abs() < PI + 1e-9);
        }
        prop_assert_eq!(w.signum() as i8, m.det_sign());
    }

    #[test]
    fn invertible_maps_round_trip(g in any_map(), t in 0.0f64..TAU, r in 1e-3f64..1e3) {
        let v = g.decide().unwrap();
        if v.tag == VerdictTag::Invertible {
            let inv = v.inverse.unwrap();
            let x = common::polar(r, t);
            prop_assert!(common::rel_err(inv.evaluate(g.evaluate(x)), x) < 1e-9);
            prop_assert!(common::rel_err(g.evaluate(inv.evaluate(x)), x) < 1e-9);
        }
    }

    #[test]
    fn verdict_matches_degree(g in any_map()) {
        let v = g.decide().unwrap();
        match v.tag {
            VerdictTag::Invertible => {
                prop_assert_eq!(v.degree.unwrap().abs(), 1);
                prop_assert!(v.inverse.is_some() && v.witness.is_none());
            }
            VerdictTag::NonInjective => {
                prop_assert!(v.degree.unwrap().abs() >= 2);
                let w = v.witness.unwrap();
                prop_assert!(w.verify(&g, 1e-8).is_ok());
            }
            VerdictTag::Degenerate => prop_assert!(false, "random maps are nondegenerate"),
        }
    }

    #[test]
    fn map_files_round_trip(g in any_map()) {
        let h = load_map_str(&write_map_string(&g, "p")).unwrap();
        prop_assert_eq!(g.n(), h.n());
        for (a, b) in g.pieces().iter().zip(h.pieces()) {
            prop_assert_eq!(a.matrix, b.matrix);
            prop_assert_eq!(a.sector.start(), b.sector.start());
            prop_assert!((a.sector.width() - b.sector.width()).abs() < 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn degree_matches_sampling_oracle(g in any_map()) {
        let w = g.winding_sum().unwrap();
        prop_assert!((w - w.round()).abs() < 1e-6);
        prop_assert_eq!(g.degree().unwrap(), common::oracle_degree(&g));
    }
}

#[test]
fn degree_beyond_one_always_comes_with_a_collision() {
    let mut found = 0;
    for seed in 0..400 {
        let Ok(g) = pwlinv::random_map(6, seed, false) else {
            continue;
        };
        if g.degree().unwrap().abs() != 1 {
            found += 1;
            let w = g.collision_witness().unwrap();
            w.verify(&g, 1e-8).unwrap();
        }
    }
    assert!(found > 0, "no map of degree two among the samples");
}
