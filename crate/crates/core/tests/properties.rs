//! Structural invariants checked on random inputs.

use std::collections::HashSet;
use std::sync::Arc;

use ergolab::base::{
    symbolic_point, thue_morse, CirclePoint, Coding, RotationSystem, SymbolicPoint, SymbolicSystem, ThueMorsePoint,
};
use ergolab::ergodicity::{birkhoff_average, skew_grid, ue_gap, Coord, TestFunction, UeThresholds};
use ergolab::metrics::{besicovitch_estimate, mean_equicontinuity_modulus, weyl_estimate};
use ergolab::skew::{
    mobius_act, relative_step, skew_step, Cocycle, CircleHomeo, HomeoPath, Mat2, ParamMap, ProjectivePoint, RelState,
    SkewState, SkewSystem,
};
use ergolab::system::{DynamicalSystem, Observation};
use proptest::prelude::*;

fn golden() -> RotationSystem {
    RotationSystem::golden()
}

fn point() -> impl Strategy<Value = CirclePoint> {
    any::<u128>().prop_map(CirclePoint::from_units)
}

fn cosine_path_cocycle() -> Cocycle {
    let g = CircleHomeo::new(vec![0.0, 0.3, 1.0], vec![0.1, 0.7, 1.1]).unwrap();
    let h = CircleHomeo::new(vec![0.0, 0.6, 1.0], vec![0.0, 0.2, 1.0]).unwrap();
    let path = HomeoPath::new(vec![0.0, 0.5, 1.0], vec![g.clone(), h, g]).unwrap();
    Cocycle::Homeo { param: ParamMap::Cosine, path: Arc::new(path) }
}

fn matrix() -> impl Strategy<Value = Mat2> {
    (-3.0f64..3.0, -3.0f64..3.0, -3.0f64..3.0, -3.0f64..3.0)
        .prop_filter("invertible", |(a, b, c, d)| (a * d - b * c).abs() > 0.1)
        .prop_map(|(a, b, c, d)| Mat2::new(a, b, c, d).renormalized())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sturmian_complexity_is_length_plus_one(seed in point(), upper in any::<bool>()) {
        let sys = SymbolicSystem::Sturmian(golden());
        let coding = if upper { Coding::Upper } else { Coding::Lower };
        let w = symbolic_point(&sys, &SymbolicPoint::Sturmian { intercept: seed, coding }, 0..20_000).unwrap();
        for l in 1..=12usize {
            let factors: HashSet<&[u8]> = w.windows(l).collect();
            prop_assert_eq!(factors.len(), l + 1);
        }
    }

    #[test]
    fn thue_morse_commutes_with_complement(offset in -1_000_000i64..1_000_000, left in any::<bool>()) {
        let p = ThueMorsePoint { left, complement: false, offset };
        let sys = SymbolicSystem::ThueMorse;
        let a = symbolic_point(&sys, &SymbolicPoint::ThueMorse(p), -50..50).unwrap();
        let b = symbolic_point(&sys, &SymbolicPoint::ThueMorse(p.complemented()), -50..50).unwrap();
        prop_assert!(a.iter().zip(&b).all(|(x, y)| *x == 1 - *y));
        if offset >= 0 {
            prop_assert_eq!(a[50], thue_morse(offset as u128));
        }
    }

    #[test]
    fn estimators_are_symmetric_and_vanish_on_the_diagonal(x in point(), y in point()) {
        let sys = SkewSystem::new(golden(), Cocycle::herman(2.0));
        let (a, b) = (SkewState { z: x, y: 0.3 }, SkewState { z: y, y: 0.8 });
        let n = 400;
        prop_assert_eq!(besicovitch_estimate(&sys, &a, &b, n).unwrap().value, besicovitch_estimate(&sys, &b, &a, n).unwrap().value);
        prop_assert_eq!(weyl_estimate(&sys, &a, &b, n, 100).unwrap().value, weyl_estimate(&sys, &b, &a, n, 100).unwrap().value);
        prop_assert_eq!(besicovitch_estimate(&sys, &a, &a, n).unwrap().value, 0.0);
        prop_assert_eq!(weyl_estimate(&sys, &a, &a, n, 100).unwrap().value, 0.0);
    }

    #[test]
    fn distance_sequences_shift_with_the_orbit(x in point(), y in point()) {
        let sys = SymbolicSystem::Sturmian(golden());
        let a = SymbolicPoint::Sturmian { intercept: x, coding: Coding::Lower };
        let b = SymbolicPoint::Sturmian { intercept: y, coding: Coding::Lower };
        let d = sys.distance_sequence(&a, &b, 300).unwrap();
        let shifted = sys.distance_sequence(&sys.step(&a).unwrap(), &sys.step(&b).unwrap(), 299).unwrap();
        prop_assert_eq!(&d[1..], &shifted[..]);
    }

    #[test]
    fn relative_step_preserves_the_diagonal(z in point(), y in 0.0f64..1.0) {
        let rot = golden();
        for g in [cosine_path_cocycle(), Cocycle::herman(2.0), Cocycle::coboundary_of(cosine_path_cocycle())] {
            let mut s = RelState { z, y1: y, y2: y };
            for _ in 0..50 {
                s = relative_step(s, &g, &rot).unwrap();
                prop_assert_eq!(s.y1.to_bits(), s.y2.to_bits());
            }
        }
    }

    #[test]
    fn projection_is_equivariant(z in point(), y in 0.0f64..1.0) {
        let rot = golden();
        let g = cosine_path_cocycle();
        let mut s = SkewState { z, y };
        let mut w = z;
        for _ in 0..100 {
            s = skew_step(s, &g, &rot).unwrap();
            w = rot.step(w);
            prop_assert_eq!(s.z, w);
        }
    }

    #[test]
    fn mobius_action_is_a_group_action(m in matrix(), n in matrix(), theta in 0.0f64..std::f64::consts::PI) {
        let p = ProjectivePoint::new(theta);
        let lhs = mobius_act(&m.mul(&n).renormalized(), p);
        let rhs = mobius_act(&m, mobius_act(&n, p));
        prop_assert!(lhs.distance(&rhs) < 1e-10);
    }

    #[test]
    fn coboundary_orbits_telescope(z in point(), y in 0.0f64..1.0, n in 1usize..100) {
        let rot = golden();
        let h = cosine_path_cocycle();
        let g = Cocycle::coboundary_of(h.clone());
        let mut yn = y;
        let mut w = z;
        for _ in 0..n {
            yn = g.apply(w, yn, &rot).unwrap();
            w = rot.step(w);
        }
        let direct = h.apply_inverse(w, h.apply(z, y, &rot).unwrap(), &rot).unwrap();
        let d = (yn - direct).abs();
        prop_assert!(d.min(1.0 - d) < 1e-9, "{} vs {}", yn, direct);
    }

    #[test]
    fn birkhoff_boundary_identity(z in point(), n in 1usize..2000, k in 1i32..5) {
        let rot = golden();
        let f = TestFunction::cos(Coord::Z, k);
        let a = birkhoff_average(&rot, &z, &f, n).unwrap();
        let b = birkhoff_average(&rot, &rot.step(z), &f, n).unwrap();
        prop_assert!((a - b).abs() <= 2.0 * f.sup_norm().unwrap() / n as f64 + 1e-15);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn ue_gap_ignores_added_constants(c in -5.0f64..5.0) {
        let sys = SkewSystem::new(golden(), cosine_path_cocycle());
        let base = TestFunction::cos(Coord::Y1, 1);
        let shifted = TestFunction::Custom {
            id: "shifted".into(),
            f: Arc::new(move |o: &Observation| (2.0 * std::f64::consts::PI * o.y1).cos() + c),
            depends_on_z: false,
        };
        let starts = skew_grid(4, 4);
        let sched = [100usize, 1000];
        let a = ue_gap(&sys, &starts, &[base], &sched, UeThresholds::default()).unwrap();
        let b = ue_gap(&sys, &starts, &[shifted], &sched, UeThresholds::default()).unwrap();
        for (r, s) in a.rows.iter().zip(&b.rows) {
            prop_assert!((r.gap - s.gap).abs() <= 1e-12);
        }
        prop_assert_eq!(a.verdict, b.verdict);
    }

    #[test]
    fn modulus_is_monotone_in_eps(seed in any::<u64>()) {
        let grid = [0.05, 0.1, 0.2, 0.3];
        let prof = mean_equicontinuity_modulus(&SkewSystem::new(golden(), Cocycle::herman(2.0)), &grid, 100, 200, seed).unwrap();
        prop_assert!(prof.rows.windows(2).all(|w| w[0].delta_hat <= w[1].delta_hat));
        prop_assert!(prof.worst.windows(2).all(|w| w[0] <= w[1]));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn parsers_reject_garbage_without_panicking(s in "\\PC{0,80}") {
        let _ = ergolab::cli::Config::parse(&s);
        let _ = ergolab::skew::parse_cocycle(&s);
        let _ = ergolab::base::Alpha::from_spec(&s);
        let _ = ergolab::metrics::parse_distance_stream(&s);
        let _ = ergolab::ergodicity::parse_dictionary(&s);
        if !s.trim_start().starts_with("file") {
            let _ = ergolab::cli::parse_cocycle_spec(&s);
        }
    }

    #[test]
    fn cocycle_records_with_random_numbers_never_panic(
        kind in 0usize..4,
        a in "[-+0-9.eE]{1,12}",
        b in "[-+0-9.eE]{1,12}",
    ) {
        let body = match kind {
            0 => format!("herman {a}"),
            1 => format!("constant mobius {a} {b} 0 1"),
            2 => format!("constant homeo 2\nbp 0 {a}\nbp 1 {b}"),
            _ => format!("path-cocycle theta golden {a} {b}\npath 2\nanchor 0 2\nbp 0 0\nbp 1 1\nanchor 1 2\nbp 0 0\nbp 1 1"),
        };
        let _ = ergolab::skew::parse_cocycle(&format!("ergolab-cocycle 1\n{body}\nend\n"));
    }
}
