//! Acceptance suite: one test per criterion, each printing a PASS line
//! with its worst observed value once its assertions hold.
//!
//! Run with `cargo test -p lamsum --test acceptance -- --nocapture`.

use lamsum::closed_form::{
    commutator_kernel, commutator_kernel_shift, coplanarity_det, coplanarity_scale, product_kernel,
};
use lamsum::cocycle::{
    class_difference, crossing_cocycle_oracle, curve_cocycle_table, ClassRelation,
    GeneratorCocycle, WeightedCurve,
};
use lamsum::engine::{self, run_sum, StopReason};
use lamsum::isometry::{
    axis, boost, classify, commutator, rotation, translation_length, IsoClass, Isometry,
};
use lamsum::minkowski::MinkVec;
use lamsum::torus::{build_config, CurveKind, TorusParams};
use lamsum::word::Word;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const HALF_PI: f64 = std::f64::consts::FRAC_PI_2;

fn grid(n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

fn delta_matrix(m: f64, theta: f64) -> Isometry<f64> {
    rotation(theta)
        .compose(&boost(m).unwrap())
        .compose(&rotation(-theta))
}

/// Adjoint trace of the boundary element from the character variety;
/// the configuration is hyperbolic exactly when this exceeds 3.
fn boundary_trace(l: f64, m: f64, th: f64) -> f64 {
    let x = 2.0 * (l / 2.0).cosh();
    let y = 2.0 * (m / 2.0).cosh();
    let z =
        2.0 * ((l / 2.0).cosh() * (m / 2.0).cosh() + th.cos() * (l / 2.0).sinh() * (m / 2.0).sinh());
    let t = x * x + y * y + z * z - x * y * z - 2.0;
    t * t - 1.0
}

fn params(l: f64, m: f64, theta: f64, c: f64, d: f64) -> TorusParams<f64> {
    TorusParams { l, m, theta, c, d }
}

/// Criterion 1: the closed-form kernel fixtures hold over the whole
/// 10x10x10 parameter grid.
#[test]
fn criterion_1_kernel_fixtures() {
    let mut worst: f64 = 0.0;
    for &l in &grid(10, 0.5, 3.0) {
        for &m in &grid(10, 0.5, 3.0) {
            for &th in &grid(10, 0.2, HALF_PI) {
                let g = boost(l).unwrap();
                let d = delta_matrix(m, th);
                let dg = d.compose(&g);
                let al = commutator(&g, &d);

                let w = product_kernel(l, m, th);
                let rw = (dg.apply(&w) - w).max_abs() / w.max_abs();
                assert!(rw <= 1e-9, "(δγ−1)w at ({l},{m},{th}): {rw}");

                let v = commutator_kernel(l, m, th);
                let rv = (al.apply(&v) - v).max_abs() / v.max_abs();
                assert!(rv <= 1e-9, "(α−1)v at ({l},{m},{th}): {rv}");

                let shift = v - d.apply(&v);
                let rs = (shift - commutator_kernel_shift(l, m, th)).max_abs();
                assert!(rs <= 1e-9, "v−δv at ({l},{m},{th}): {rs}");

                let s = coplanarity_scale(l, m, th);
                let rd = coplanarity_det(l, m, th).abs() / (s * s * s);
                assert!(rd <= 1e-9, "det at ({l},{m},{th}): {rd}");

                worst = worst.max(rw).max(rv).max(rs).max(rd);
            }
        }
    }
    println!("criterion 1 PASS: kernel fixtures on the 10x10x10 grid, worst residual {worst:.3e}");
}

/// Criterion 2: axis calibration on the grid, and equivariance of the
/// oriented axis under 1000 random conjugations.
#[test]
fn criterion_2_axis_calibration_and_equivariance() {
    let mut worst: f64 = 0.0;
    for &l in &grid(10, 0.5, 3.0) {
        let a = axis(&boost(l).unwrap()).unwrap();
        worst = worst.max((a - MinkVec::new(0.0, 0.0, 1.0)).max_abs());
        for &m in &grid(10, 0.5, 3.0) {
            for &th in &grid(10, 0.2, HALF_PI) {
                let d = axis(&delta_matrix(m, th)).unwrap();
                let want = MinkVec::new(0.0, -th.sin(), th.cos());
                worst = worst.max((d - want).max_abs());
            }
        }
    }
    assert!(worst <= 1e-12, "calibration worst {worst}");

    // conjugators with translation part up to 1.2 and elements up to
    // length 2.2: eigenvector conditioning grows with both, so wider
    // ensembles dilute the check into conditioning noise
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst_eq: f64 = 0.0;
    let mut count = 0;
    while count < 1000 {
        let g = rotation(rng.gen_range(-3.0..3.0))
            .compose(&boost(rng.gen_range(0.2..2.2)).unwrap())
            .compose(&rotation(rng.gen_range(-3.0..3.0)));
        if classify(&g) != IsoClass::Hyperbolic {
            continue;
        }
        let h = rotation(rng.gen_range(-3.0..3.0))
            .compose(&boost(rng.gen_range(0.0..1.2)).unwrap())
            .compose(&rotation(rng.gen_range(-3.0..3.0)));
        let lhs: MinkVec<f64> = axis(&h.compose(&g).compose(&h.inverse())).unwrap();
        let rhs = h.apply(&axis(&g).unwrap());
        worst_eq = worst_eq.max((lhs - rhs).max_abs() / rhs.max_abs().max(1.0));
        count += 1;
    }
    assert!(worst_eq <= 1e-12, "equivariance worst {worst_eq}");
    println!(
        "criterion 2 PASS: axis calibration worst {worst:.3e}, equivariance worst {worst_eq:.3e} over 1000 pairs (lengths ≤ 2.2, conjugators ≤ 1.2)"
    );
}

/// Criterion 3: the two-unknown solver at the exact ratio, over the
/// hyperbolic-boundary part of the grid.
#[test]
fn criterion_3_prop_solver() {
    let mut worst_res: f64 = 0.0;
    let mut min_a = f64::INFINITY;
    let mut configs = 0;
    for &l in &grid(10, 0.5, 3.0) {
        for &m in &grid(10, 0.5, 3.0) {
            for &th in &grid(10, 0.2, HALF_PI) {
                if boundary_trace(l, m, th) <= 3.0 + 1e-6 {
                    continue;
                }
                configs += 1;
                let g = boost(l).unwrap();
                let d = delta_matrix(m, th);
                let r = engine::ratio(&g, &d).unwrap();
                let sol = engine::prop_solve(&g, &d, r, 1.0).unwrap();
                worst_res = worst_res.max(sol.residual);
                min_a = min_a.min(sol.a);
                assert!(sol.residual <= 1e-9, "residual at ({l},{m},{th}): {}", sol.residual);
                assert!(sol.a > 0.0, "a at ({l},{m},{th}): {}", sol.a);
                assert!(sol.b >= 0.0);
                // b vanishes at right angles and only there
                if (th - HALF_PI).abs() < 1e-12 {
                    assert!(sol.b <= 1e-12, "b at right angle: {}", sol.b);
                } else {
                    assert!(sol.b > 1e-12, "b at ({l},{m},{th}): {}", sol.b);
                }
            }
        }
    }
    assert!(configs > 200, "hyperbolic-boundary grid subset too small: {configs}");
    println!(
        "criterion 3 PASS: solver on {configs} valid grid configs, worst residual {worst_res:.3e}, min a {min_a:.3e}"
    );
}

/// Criterion 4: right-angle inputs terminate at the first step with the
/// predicted components.
#[test]
fn criterion_4_right_angle_termination() {
    // equal lengths realize ratio 1, where equal weights collapse to the
    // boundary curve alone and larger first weight leaves (C, c−d)
    for &l in &[1.8, 2.0, 2.4, 3.0] {
        let cfg = build_config(params(l, l, HALF_PI, 1.0, 1.0)).unwrap();
        let dec = run_sum(&cfg, 200);
        assert_eq!(dec.stop, StopReason::TerminatedExact { step: 1 }, "l={l}");
        assert_eq!(dec.components.len(), 1, "l={l}");
        assert_eq!(dec.components[0].word.to_string(), "DGdg");
        assert!(dec.components[0].weight > 0.0);

        let cfg = build_config(params(l, l, HALF_PI, 2.0, 1.0)).unwrap();
        let dec = run_sum(&cfg, 200);
        assert_eq!(dec.stop, StopReason::TerminatedExact { step: 1 }, "l={l}");
        assert_eq!(dec.components.len(), 2, "l={l}");
        assert_eq!(dec.components[0].word.to_string(), "DGdg");
        assert_eq!(dec.components[1].word.to_string(), "g");
        assert!(
            (dec.components[1].weight - 1.0).abs() <= 1e-12,
            "weight c−d at l={l}: {}",
            dec.components[1].weight
        );
    }
    // unequal lengths still terminate at step 1 (the product weight
    // vanishes at right angles); the role exchange settles the ratio
    for (l, m, c, d) in [(2.0, 3.0, 1.0, 1.0), (2.5, 2.0, 0.7, 1.3)] {
        let cfg = build_config(params(l, m, HALF_PI, c, d)).unwrap();
        let dec = run_sum(&cfg, 200);
        assert_eq!(dec.stop, StopReason::TerminatedExact { step: 1 });
        assert!(!dec.components.is_empty());
        assert_eq!(dec.components[0].word.to_string(), "DGdg");
    }
    println!("criterion 4 PASS: right-angle inputs terminate at step 1 with the predicted components");
}

/// Criterion 5: recursion invariants over 25 screened generic tuples.
#[test]
fn criterion_5_recursion_invariants() {
    let mut rng = ChaCha8Rng::seed_from_u64(20250809);
    let mut tuples = Vec::new();
    while tuples.len() < 25 {
        let l = rng.gen_range(1.0..2.8);
        let m = rng.gen_range(1.0..2.8);
        let th = rng.gen_range(0.25..1.55);
        if boundary_trace(l, m, th) <= 3.5 {
            continue;
        }
        tuples.push((l, m, th, rng.gen_range(0.2..2.0), rng.gen_range(0.2..2.0)));
    }

    let mut worst_drift: f64 = 0.0;
    let mut worst_c_rel: f64 = 0.0;
    for &(l, m, th, c, d) in &tuples {
        let cfg = build_config(params(l, m, th, c, d)).unwrap();
        let dec = run_sum(&cfg, 200);

        // the run ends by exact termination, the cap, or the length guard
        let final_d = dec.trace.last().unwrap().d;
        match dec.stop {
            StopReason::TerminatedExact { .. } | StopReason::Overflow { .. } => {}
            StopReason::MaxIterations => {
                assert!(final_d < 1e-6, "({l},{m},{th},{c},{d}): capped with d {final_d}")
            }
            ref other => panic!("({l},{m},{th},{c},{d}): {other:?}"),
        }

        // strict angle decrease in the resolvable regime, never a rise
        for w in dec.trace.windows(2) {
            if w[0].theta > 1e-12 {
                assert!(
                    w[1].theta < w[0].theta,
                    "({l},{m},{th},{c},{d}): θ {} → {}",
                    w[0].theta,
                    w[1].theta
                );
            }
        }

        // α-weight monotone and positive, first weight bounded by the
        // frozen ledger constant 1.0·(c₀+d₀)
        let mut prev_a = 0.0;
        for row in &dec.trace {
            assert!(row.a >= prev_a);
            prev_a = row.a;
            worst_c_rel = worst_c_rel.max(row.c / (c + d));
        }
        assert!(dec.trace.last().unwrap().a > 0.0);
        assert!(worst_c_rel <= 1.0, "c_k exceeded its ledger bound: {worst_c_rel}");

        for inv in engine::invariant_summary(&dec, &cfg) {
            assert!(
                inv.pass,
                "({l},{m},{th},{c},{d}): invariant {} failed with worst {}",
                inv.name, inv.worst
            );
            if inv.name == "commutator_trace_drift" {
                worst_drift = worst_drift.max(inv.worst);
            }
        }
    }
    println!(
        "criterion 5 PASS: 25 generic runs, worst commutator trace drift {worst_drift:.3e}, max c_k/(c₀+d₀) {worst_c_rel:.3} ≤ 1.0"
    );
}

/// Criterion 6: the crossing oracle reproduces all eight table entries on
/// the hyperbolic-boundary grid, and the re-substitution residual of the
/// frozen regression trace stays below 1e-7 through ten steps.
#[test]
fn criterion_6_oracle_agreement_and_regression_verify() {
    let mut worst: f64 = 0.0;
    let mut configs = 0;
    for &l in &grid(10, 0.5, 3.0) {
        for &m in &grid(10, 0.5, 3.0) {
            for &th in &grid(10, 0.2, HALF_PI) {
                if boundary_trace(l, m, th) <= 3.0 + 1e-6 {
                    continue;
                }
                configs += 1;
                let cfg = build_config(params(l, m, th, 1.0, 1.0)).unwrap();
                for kind in CurveKind::ALL {
                    let table = curve_cocycle_table(&cfg, kind);
                    let curve = WeightedCurve {
                        word: kind.word(),
                        weight: 1.0,
                    };
                    for (t, want) in [("g", table.on_gamma), ("d", table.on_delta)] {
                        let got = crossing_cocycle_oracle(
                            &curve,
                            &Word::parse(t).unwrap(),
                            &cfg,
                            6,
                        )
                        .unwrap_or_else(|e| {
                            panic!("oracle failed at ({l},{m},{th}) {kind:?}[{t}]: {e}")
                        });
                        let err = (got - want).max_abs();
                        assert!(err <= 1e-9, "({l},{m},{th}) {kind:?}[{t}]: {err}");
                        worst = worst.max(err);
                    }
                }
            }
        }
    }

    let cfg = build_config(params(2.0, 2.0, 1.0, 1.0, 0.3)).unwrap();
    let dec = run_sum(&cfg, 10);
    let rep = engine::verify_decomposition(&dec, &cfg);
    assert_eq!(rep.per_step.len(), 10);
    assert!(
        rep.accumulated <= 1e-7,
        "regression verify accumulated {}",
        rep.accumulated
    );
    println!(
        "criterion 6 PASS: oracle matches all 8 table entries on {configs} valid grid configs (worst {worst:.3e}); regression verify through k=10 accumulates {:.3e}",
        rep.accumulated
    );
}

/// Criterion 7: coboundary recovery over 1000 randomized cases, and
/// base-point change of the oracle stays inside one cohomology class.
#[test]
fn criterion_7_cohomology_class_machinery() {
    let cfg = build_config(params(2.0, 2.0, 1.0, 1.0, 1.0)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let t1 = GeneratorCocycle {
            on_gamma: MinkVec::new(
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
            ),
            on_delta: MinkVec::new(
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
            ),
        };
        let w = MinkVec::new(
            rng.gen_range(-3.0..3.0),
            rng.gen_range(-3.0..3.0),
            rng.gen_range(-3.0..3.0),
        );
        let t2 = GeneratorCocycle {
            on_gamma: t1.on_gamma + cfg.pair.gamma.apply(&w) - w,
            on_delta: t1.on_delta + cfg.pair.delta.apply(&w) - w,
        };
        match class_difference(&t1, &t2, &cfg.pair) {
            ClassRelation::Coboundary(got) => {
                let err = (got - w).max_abs();
                assert!(err <= 1e-10, "recovery error {err}");
                worst = worst.max(err);
            }
            ClassRelation::Distinct { residual } => {
                panic!("constructed coboundary reported distinct, residual {residual}")
            }
        }
    }

    // oracle under a base-point change: same class, different cocycle
    let mut moved = cfg.clone();
    moved.base_point = {
        let p = MinkVec::origin();
        let a = cfg.x_alpha.form(&p);
        let w = cfg.x_alpha + p.scale(a);
        let that = w.scale(-a.signum() / (1.0 + a * a).sqrt());
        let t = a.abs().asinh() + 0.9;
        p.scale(t.cosh()) + that.scale(t.sinh())
    };
    for kind in [CurveKind::CurveD, CurveKind::Boundary] {
        let curve = WeightedCurve {
            word: kind.word(),
            weight: 1.0,
        };
        let tau = |c: &lamsum::TorusConfig64| GeneratorCocycle {
            on_gamma: crossing_cocycle_oracle(&curve, &Word::parse("g").unwrap(), c, 6).unwrap(),
            on_delta: crossing_cocycle_oracle(&curve, &Word::parse("d").unwrap(), c, 6).unwrap(),
        };
        let t1 = tau(&cfg);
        let t2 = tau(&moved);
        match class_difference(&t1, &t2, &cfg.pair) {
            ClassRelation::Coboundary(_) => {}
            ClassRelation::Distinct { residual } => {
                panic!("base-point change left the class for {kind:?}: residual {residual}")
            }
        }
    }
    println!("criterion 7 PASS: 1000 coboundaries recovered (worst {worst:.3e}); base-point changes stay cohomologous");
}

/// Criterion 8: translation length calibration and length of weighted
/// multicurves.
#[test]
fn criterion_8_length_function() {
    let mut worst: f64 = 0.0;
    for &l in &grid(40, 0.05, 6.0) {
        let err = (translation_length(&boost(l).unwrap()).unwrap() - l).abs();
        worst = worst.max(err);
        assert!(err <= 1e-12, "length of boost({l}): {err}");
    }
    let cfg = build_config(params(2.0, 2.0, 1.0, 1.0, 1.0)).unwrap();
    let a = WeightedCurve {
        word: Word::parse("g").unwrap(),
        weight: 0.75,
    };
    let b = WeightedCurve {
        word: Word::parse("DGdg").unwrap(),
        weight: 1.25,
    };
    let la = lamsum::cocycle::multicurve_length(std::slice::from_ref(&a), &cfg).unwrap();
    let lb = lamsum::cocycle::multicurve_length(std::slice::from_ref(&b), &cfg).unwrap();
    let sum = lamsum::cocycle::multicurve_length(&[a.clone(), b.clone()], &cfg).unwrap();
    assert!((sum - (la + lb)).abs() <= 1e-12);
    let tripled = lamsum::cocycle::multicurve_length(
        &[
            WeightedCurve {
                word: a.word.clone(),
                weight: 3.0 * a.weight,
            },
            WeightedCurve {
                word: b.word.clone(),
                weight: 3.0 * b.weight,
            },
        ],
        &cfg,
    )
    .unwrap();
    assert!((tripled - 3.0 * sum).abs() <= 1e-12);
    println!("criterion 8 PASS: boost length calibration worst {worst:.3e}; multicurve length additive and homogeneous");
}
