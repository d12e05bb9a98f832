mod common;

use common::oracle_dominates;
use morpho_core::evolution::{dominates, fast_non_dominated_sort};
use morpho_core::hover::HoverClass;
use morpho_core::hull::{convex_hull, hull_area, polygon_area};
use morpho_core::objectives::{maneuverability, thrust_to_weight};
use morpho_core::{
    decode, effectiveness, evaluate_phenotype, evolve, mass_properties, EvolutionConfig, Genotype,
    HoverOptions, ModelError, ObjectiveVector, Phenotype, PhysicalParams, GENOME_LEN,
};
use nalgebra::{DMatrix, DVector, Matrix3xX};
use proptest::prelude::*;

fn genes() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..=1.0, GENOME_LEN)
}

fn objective() -> impl Strategy<Value = ObjectiveVector> {
    (0u8..4, 0u8..5, 0u8..5, 1u8..5, 1u8..4).prop_map(|(t, a, l, s, r)| {
        if t == 3 {
            return ObjectiveVector::invalid();
        }
        let hover_class = [HoverClass::Static, HoverClass::Spinning, HoverClass::None][t as usize];
        ObjectiveVector {
            alpha: a as f64,
            lambda: l as f64,
            size: s as f64,
            hover_class,
            residual: if t == 2 { r as f64 } else { 0.0 },
            invalid: false,
        }
    })
}

fn yawed(ph: &Phenotype, delta: f64) -> Phenotype {
    let mut out = ph.clone();
    for p in &mut out.props {
        p.arm_angle = (p.arm_angle + delta + 180.0).rem_euclid(360.0) - 180.0;
    }
    out
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

proptest! {
    #[test]
    fn decode_is_total_and_separates(g in genes()) {
        let params = PhysicalParams::default();
        let genotype = Genotype::new(g).unwrap();
        match decode(&genotype, &params) {
            Ok(ph) => {
                prop_assert_eq!(ph.n, genotype.prop_count());
                prop_assert!(ph.validate().is_ok());
                let (d, _, _) = ph.min_pair_distance().unwrap();
                prop_assert!(d >= params.min_separation() * (1.0 - 1e-12));
                prop_assert!(ph.scale_applied >= 1.0);
            }
            Err(e) => prop_assert!(matches!(e, ModelError::DegenerateLayout { .. }), "{e}"),
        }
    }

    #[test]
    fn dominance_is_a_strict_partial_order(a in objective(), b in objective(), c in objective()) {
        prop_assert!(!dominates(&a, &a));
        prop_assert!(!(dominates(&a, &b) && dominates(&b, &a)));
        if dominates(&a, &b) && dominates(&b, &c) {
            prop_assert!(dominates(&a, &c));
        }
        prop_assert_eq!(dominates(&a, &b), oracle_dominates(&a, &b));
    }

    #[test]
    fn maneuverability_ignores_column_order(
        cols in prop::collection::vec(prop::array::uniform3(-1e3f64..1e3), 3..9),
        shift in 0usize..8,
    ) {
        let n = cols.len();
        let b = Matrix3xX::from_fn(n, |r, c| cols[c][r]);
        let p = Matrix3xX::from_fn(n, |r, c| cols[(c + shift) % n][r]);
        let (l1, l2) = (maneuverability(&b), maneuverability(&p));
        let scale = (&b * b.transpose()).trace();
        prop_assert!((l1 - l2).abs() <= 1e-12 * scale, "{} vs {}", l1, l2);
    }

    #[test]
    fn thrust_to_weight_is_scale_free(
        eta in prop::collection::vec(0.01f64..=1.0, 4..9),
        c in 0.01f64..100.0,
    ) {
        let n = eta.len();
        let b_f = Matrix3xX::from_fn(n, |r, k| if r == 2 { 15.0 + k as f64 } else { 0.5 * k as f64 - 1.0 });
        let eta = DVector::from_vec(eta);
        let a = thrust_to_weight(&b_f, &eta, 9.81).unwrap();
        let b = thrust_to_weight(&b_f, &(&eta * c), 9.81).unwrap();
        prop_assert!(rel(a, b) <= 1e-12);
    }

    #[test]
    fn hull_area_is_rigid_and_monotone(
        pts in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 3..30),
        extra in (-2.0f64..2.0, -2.0f64..2.0),
        angle in -3.2f64..3.2,
        shift in (-5.0f64..5.0, -5.0f64..5.0),
    ) {
        let area = hull_area(&pts);
        let (s, c) = angle.sin_cos();
        let moved: Vec<_> = pts.iter().map(|&(x, y)| (c * x - s * y + shift.0, s * x + c * y + shift.1)).collect();
        prop_assert!((hull_area(&moved) - area).abs() <= 1e-12 * (1.0 + area));
        let mut more = pts.clone();
        more.push(extra);
        prop_assert!(hull_area(&more) >= area - 1e-15);
        prop_assert!((polygon_area(&convex_hull(&pts)) - area).abs() <= 1e-15);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn half_turn_leaves_every_objective_unchanged(g in genes()) {
        let params = PhysicalParams::default();
        let opts = HoverOptions::default();
        let Ok(ph) = decode(&Genotype::new(g).unwrap(), &params) else { return Ok(()) };
        let a = evaluate_phenotype(&ph, &params, &opts).unwrap().objectives;
        let b = evaluate_phenotype(&yawed(&ph, 180.0), &params, &opts).unwrap().objectives;
        prop_assert_eq!(a.hover_class, b.hover_class);
        prop_assert!(rel(a.alpha, b.alpha) <= 1e-9, "{} vs {}", a.alpha, b.alpha);
        prop_assert!(rel(a.lambda, b.lambda) <= 1e-9, "{} vs {}", a.lambda, b.lambda);
        prop_assert!((a.size - b.size).abs() <= 1e-12);
    }

    #[test]
    fn static_hover_survives_any_yaw(g in genes(), delta in -180.0f64..180.0) {
        let params = PhysicalParams::default();
        let opts = HoverOptions::default();
        let Ok(ph) = decode(&Genotype::new(g).unwrap(), &params) else { return Ok(()) };
        let a = evaluate_phenotype(&ph, &params, &opts).unwrap().objectives;
        let b = evaluate_phenotype(&yawed(&ph, delta), &params, &opts).unwrap().objectives;
        prop_assert!((a.size - b.size).abs() <= 1e-12);
        if a.hover_class == HoverClass::Static {
            prop_assert_eq!(b.hover_class, HoverClass::Static);
            prop_assert!(rel(a.alpha, b.alpha) <= 1e-9, "{} vs {}", a.alpha, b.alpha);
        }
    }

    #[test]
    fn static_optimum_satisfies_first_order_conditions(g in genes()) {
        let params = PhysicalParams::default();
        let Ok(ph) = decode(&Genotype::new(g).unwrap(), &params) else { return Ok(()) };
        let mp = mass_properties(&ph, &params);
        let b = effectiveness(&ph, &mp, &params).unwrap();
        let Ok(sol) = morpho_core::hover::solve_static_hover(&b, params.g, &HoverOptions::default()) else {
            return Ok(());
        };
        let eta = &sol.eta_hat;
        let n = eta.len();
        // Constraint gradients: thrust magnitude and the three moment rows.
        let f = &b.b_f * eta;
        let grad_thrust = b.b_f.transpose() * f / f.norm();
        let mut jac = DMatrix::zeros(n, 4);
        jac.set_column(0, &grad_thrust);
        for r in 0..3 {
            jac.set_column(r + 1, &b.b_m.row(r).transpose());
        }
        let free: Vec<usize> = (0..n).filter(|&i| eta[i] > 1e-7 && eta[i] < 1.0 - 1e-7).collect();
        let jf = DMatrix::from_fn(free.len(), 4, |r, c| jac[(free[r], c)]);
        let gf = DVector::from_fn(free.len(), |r, _| 2.0 * eta[free[r]]);
        let mu = jf.clone().svd(true, true).solve(&gf, 1e-12).unwrap();
        let stationarity = (&jf * &mu - &gf).norm();
        prop_assert!(stationarity <= 1e-6 * (1.0 + gf.norm()), "stationarity {}", stationarity);
        let lag = &jac * &mu;
        for i in 0..n {
            if eta[i] <= 1e-7 {
                // Lower bound multiplier -(J mu)_i must not be negative.
                prop_assert!(lag[i] <= 1e-6 * (1.0 + gf.norm()), "bound {} multiplier {}", i, lag[i]);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn evolution_keeps_population_and_hypervolume(seed in any::<u64>()) {
        let config = EvolutionConfig { pop_size: 16, generations: 8, seed, ..EvolutionConfig::default() };
        let run = evolve(&config).unwrap();
        prop_assert_eq!(run.population.len(), 16);
        let mut ids: Vec<u64> = run.population.iter().map(|i| i.id).collect();
        ids.sort_unstable();
        ids.dedup();
        prop_assert_eq!(ids.len(), 16);

        let mut hv = run.initial.hypervolume;
        for s in &run.history {
            prop_assert!(s.hypervolume >= hv, "generation {}: {} < {}", s.generation, s.hypervolume, hv);
            hv = s.hypervolume;
        }

        let objs: Vec<ObjectiveVector> = run.population.iter().map(|i| i.objectives).collect();
        for (rank, front) in fast_non_dominated_sort(&objs).iter().enumerate() {
            for &i in front {
                prop_assert_eq!(run.population[i].rank, rank);
            }
        }
    }
}
