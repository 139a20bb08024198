//! Property-style invariants for the numeric vocabulary and the prox layer.

use fo_core::linalg::dot;
use fo_core::model::{model_check, ModelOracle};
use fo_core::norms::{dual_norm, norm, NormSpec};
use fo_core::oracle::{FnObjective, Oracle};
use fo_core::prox::{
    bregman, mirror_step, mirror_step_residual, pnorm_mirror_map, pnorm_mirror_map_inverse,
    ProxKind, ProxSetup,
};
use fo_core::sets::{project_simplex_euclidean, FeasibleSet};
use proptest::prelude::*;

fn vec_strategy(n: usize) -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(-10.0f64..10.0, n)
}

fn simplex_interior(n: usize) -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(0.05f64..1.0, n).prop_map(|mut v| {
        let s: f64 = v.iter().sum();
        v.iter_mut().for_each(|x| *x /= s);
        v
    })
}

proptest! {
    #[test]
    fn holder_inequality(v in vec_strategy(6), w in vec_strategy(6), p in 1.0f64..8.0) {
        let spec = NormSpec::Lp(p);
        let lhs = dot(&v, &w);
        let rhs = norm(&v, spec) * dual_norm(&w, spec);
        prop_assert!(lhs <= rhs + 1e-9 * (1.0 + rhs.abs()));
    }

    #[test]
    fn holder_equality_achievable_on_aligned_euclidean(v in vec_strategy(5)) {
        // For the self-dual norm, w = v attains equality.
        let lhs = dot(&v, &v);
        let rhs = norm(&v, NormSpec::Euclidean) * dual_norm(&v, NormSpec::Euclidean);
        prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + rhs.abs()));
    }

    #[test]
    fn norms_are_positive_definite(v in vec_strategy(4), p in 1.0f64..6.0) {
        let n = norm(&v, NormSpec::Lp(p));
        prop_assert!(n >= 0.0);
        if v.iter().any(|x| x.abs() > 1e-12) {
            prop_assert!(n > 0.0);
        }
    }

    #[test]
    fn pnorm_map_roundtrip_property(v in vec_strategy(4), p in 1.05f64..2.0) {
        let s = pnorm_mirror_map(&v, p);
        let back = pnorm_mirror_map_inverse(&s, p);
        for (a, b) in v.iter().zip(&back) {
            prop_assert!((a - b).abs() <= 1e-8 * (1.0 + a.abs()), "{v:?} vs {back:?}");
        }
    }

    #[test]
    fn oracle_determinism(x in vec_strategy(4)) {
        let oracle = Oracle::new(FnObjective::new(
            |x: &[f64]| x.iter().map(|v| v.cos() + 0.5 * v * v).sum(),
            |x: &[f64]| x.iter().map(|v| -v.sin() + v).collect(),
        ));
        let (f1, g1) = oracle.eval(&x);
        let (f2, g2) = oracle.eval(&x);
        prop_assert!(f1 == f2);
        prop_assert!(g1 == g2);
    }
}

#[test]
fn bregman_strong_convexity_certificate() {
    // V(x, y) ≥ ½‖x − y‖² − 1e−12 in the setup's norm, 10⁴ pairs per setup.
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);

    // Euclidean on free space.
    let euc = ProxSetup::euclidean(FeasibleSet::FreeSpace);
    for _ in 0..10_000 {
        let x: Vec<f64> = (0..5).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let y: Vec<f64> = (0..5).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let v = bregman(&euc, &x, &y).unwrap();
        let d = fo_core::linalg::sub(&x, &y);
        assert!(v >= 0.5 * dot(&d, &d) - 1e-12);
    }

    // Entropy on the simplex (norm is L1; Pinsker gives the certificate).
    let ent = ProxSetup::entropy_simplex();
    for _ in 0..10_000 {
        let x = random_simplex(&mut rng, 5);
        let y = random_simplex(&mut rng, 5);
        let v = bregman(&ent, &x, &y).unwrap();
        let d = fo_core::linalg::sub(&x, &y);
        let l1 = norm(&d, NormSpec::Lp(1.0));
        assert!(v >= 0.5 * l1 * l1 - 1e-12, "entropy pair violates (2.32)");
    }

    // p-norm prox on free space for p in (1, 2].
    for p in [1.2, 1.5, 2.0] {
        let setup = ProxSetup::new(ProxKind::PNormSq { p }, FeasibleSet::FreeSpace).unwrap();
        for _ in 0..10_000 {
            let x: Vec<f64> = (0..4).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let y: Vec<f64> = (0..4).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let v = bregman(&setup, &x, &y).unwrap();
            let d = fo_core::linalg::sub(&x, &y);
            let np = norm(&d, NormSpec::Lp(p));
            assert!(
                v >= 0.5 * np * np - 1e-9 * (1.0 + v.abs()),
                "p={p}: V={v} < ½‖d‖_p² = {}",
                0.5 * np * np
            );
        }
    }
}

fn random_simplex(rng: &mut impl rand::Rng, n: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (0..n).map(|_| rng.gen_range(0.01..1.0)).collect();
    let s: f64 = v.iter().sum();
    v.iter_mut().for_each(|x| *x /= s);
    v
}

#[test]
fn three_point_identity() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let euc = ProxSetup::euclidean(FeasibleSet::FreeSpace);
    let ent = ProxSetup::entropy_simplex();
    for _ in 0..10_000 {
        // Euclidean triple
        let x: Vec<f64> = (0..4).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let y: Vec<f64> = (0..4).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let z: Vec<f64> = (0..4).map(|_| rng.gen_range(-2.0..2.0)).collect();
        check_three_point(&euc, &x, &y, &z, 1e-10);

        // entropy triple in the interior
        let x = random_simplex(&mut rng, 4);
        let y = random_simplex(&mut rng, 4);
        let z = random_simplex(&mut rng, 4);
        check_three_point(&ent, &x, &y, &z, 1e-10);
    }
}

fn check_three_point(setup: &ProxSetup<f64>, x: &[f64], y: &[f64], z: &[f64], tol: f64) {
    let vxz = bregman(setup, x, z).unwrap();
    let vxy = bregman(setup, x, y).unwrap();
    let vyz = bregman(setup, y, z).unwrap();
    let gy = setup.prox_gradient(y).unwrap();
    let gz = setup.prox_gradient(z).unwrap();
    let cross = dot(
        &fo_core::linalg::sub(&gy, &gz),
        &fo_core::linalg::sub(x, y),
    );
    let lhs = vxz;
    let rhs = vxy + vyz + cross;
    assert!(
        (lhs - rhs).abs() <= tol * (1.0 + lhs.abs().max(rhs.abs())),
        "three-point identity broken: {lhs} vs {rhs}"
    );
}

#[test]
fn mirror_step_first_order_optimality() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);

    // Entropy on the simplex: probes are vertices plus random points.
    let ent = ProxSetup::entropy_simplex();
    for _ in 0..200 {
        let x = random_simplex(&mut rng, 4);
        let g: Vec<f64> = (0..4).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let h = rng.gen_range(0.05..2.0);
        let xp = mirror_step(&ent, &x, &g, h).unwrap();
        let mut probes: Vec<Vec<f64>> = (0..4)
            .map(|i| {
                let mut e = vec![0.0; 4];
                e[i] = 1.0;
                e
            })
            .collect();
        for _ in 0..8 {
            probes.push(random_simplex(&mut rng, 4));
        }
        let res = mirror_step_residual(&ent, &x, &g, h, &xp, &probes).unwrap();
        assert!(res <= 1e-8, "entropy mirror step residual {res}");
    }

    // Euclidean on box, ball, simplex, orthant.
    let sets: Vec<FeasibleSet<f64>> = vec![
        FeasibleSet::Box {
            lo: vec![-1.0; 3],
            hi: vec![1.0; 3],
        },
        FeasibleSet::EuclideanBall {
            center: vec![0.0; 3],
            radius: 1.5,
        },
        FeasibleSet::Simplex,
        FeasibleSet::NonnegOrthant,
    ];
    for set in sets {
        let setup = ProxSetup::euclidean(set.clone());
        for _ in 0..200 {
            let x0: Vec<f64> = (0..3).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let x = set.project(&x0);
            let g: Vec<f64> = (0..3).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let h = rng.gen_range(0.05..2.0);
            let xp = mirror_step(&setup, &x, &g, h).unwrap();
            let probes: Vec<Vec<f64>> = (0..12)
                .map(|_| {
                    let raw: Vec<f64> = (0..3).map(|_| rng.gen_range(-2.0..2.0)).collect();
                    set.project(&raw)
                })
                .collect();
            let res = mirror_step_residual(&setup, &x, &g, h, &xp, &probes).unwrap();
            assert!(res <= 1e-8, "euclidean mirror step residual {res} on {set:?}");
        }
    }
}

#[test]
fn simplex_projection_matches_grid_bruteforce() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    let step = 1e-3;
    for _ in 0..100 {
        let v: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..2.0)).collect();
        let p = project_simplex_euclidean(&v);
        // dense grid over the 3-simplex
        let mut best = vec![1.0, 0.0, 0.0];
        let mut best_d = f64::INFINITY;
        let mut a = 0.0;
        while a <= 1.0 + 1e-12 {
            let mut b = 0.0;
            while a + b <= 1.0 + 1e-12 {
                let c = 1.0 - a - b;
                let d = (a - v[0]).powi(2) + (b - v[1]).powi(2) + (c - v[2]).powi(2);
                if d < best_d {
                    best_d = d;
                    best = vec![a, b, c];
                }
                b += step;
            }
            a += step;
        }
        let d_proj: f64 = p.iter().zip(&v).map(|(a, b)| (a - b) * (a - b)).sum();
        // the exact projection can only beat any grid point...
        assert!(d_proj <= best_d + 1e-12);
        // ...and the grid optimum must be grid-resolution close in value:
        // |δ| ≤ step·√(2) over the two free coordinates (plus c shift).
        let delta = 1.5 * step * (norm(&fo_core::linalg::sub(&p, &v), NormSpec::Euclidean) + step);
        assert!(
            best_d - d_proj <= delta + 1e-12,
            "grid gap {} exceeds resolution bound {delta}",
            best_d - d_proj
        );
        // strong convexity of the squared distance converts the value gap
        // into an argument bound
        let arg_gap = norm(&fo_core::linalg::sub(&p, &best), NormSpec::Euclidean);
        assert!(arg_gap <= (2.0 * delta).sqrt() + 1e-9);
    }
}

#[test]
fn composite_invariance_indicator_equals_constrained_linear_model() {
    // min ½‖x − c‖² over a box: composite(Indicator) with free prox vs
    // linear model with the box prox must land on the same value.
    use fo_core::methods::model_gradient_method;
    let c = vec![1.4, -0.3];
    let cc = c.clone();
    let mk_oracle = move || {
        let c2 = cc.clone();
        Oracle::new(FnObjective::new(
            {
                let c3 = c2.clone();
                move |x: &[f64]| {
                    0.5 * x
                        .iter()
                        .zip(&c3)
                        .map(|(xi, ci)| (xi - ci) * (xi - ci))
                        .sum::<f64>()
                }
            },
            move |x: &[f64]| x.iter().zip(&c2).map(|(xi, ci)| xi - ci).collect(),
        ))
    };
    let boxset = FeasibleSet::Box {
        lo: vec![0.0, 0.0],
        hi: vec![1.0, 1.0],
    };

    let m1 = ModelOracle::composite_model(
        mk_oracle(),
        fo_core::model::CompositeTerm::IndicatorOfSet(boxset.clone()),
    );
    let free = ProxSetup::euclidean(FeasibleSet::FreeSpace);
    let t1 = model_gradient_method(&m1, &free, 1.0, &[0.5, 0.5], 200, None).unwrap();

    let m2 = ModelOracle::linear_model(mk_oracle());
    let constrained = ProxSetup::euclidean(boxset);
    let t2 = model_gradient_method(&m2, &constrained, 1.0, &[0.5, 0.5], 200, None).unwrap();

    let f1 = t1.final_value();
    let f2 = t2.final_value();
    assert!((f1 - f2).abs() < 1e-8, "composite invariance broken: {f1} vs {f2}");
}

#[test]
fn model_check_zero_for_declared_smooth_zoo() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
    let mut cases: Vec<(String, Oracle<f64>, f64, f64, usize)> = Vec::new();

    let wcs = fo_core::zoo::worst_case_smooth(1.0f64, 4, 9).unwrap();
    cases.push((
        "worst_case_smooth".into(),
        wcs.zoo.problem.oracle.clone(),
        wcs.zoo.problem.constants.l1.unwrap(),
        2.0,
        9,
    ));
    let hub = fo_core::zoo::huber(2.0f64, 1.0, 1.0).unwrap();
    cases.push((
        "huber".into(),
        hub.problem.oracle.clone(),
        hub.problem.constants.l1.unwrap(),
        3.0,
        4,
    ));
    let rq = fo_core::zoo::random_quadratic(6, 0.5, 10.0, 3).unwrap();
    cases.push((
        "random_quadratic".into(),
        rq.zoo.problem.oracle.clone(),
        rq.zoo.problem.constants.l1.unwrap(),
        2.0,
        6,
    ));

    for (name, oracle, l1, ball, dim) in cases {
        let model = ModelOracle::linear_model(oracle);
        let samples: Vec<(Vec<f64>, Vec<f64>)> = (0..1000)
            .map(|_| {
                let x: Vec<f64> = (0..dim).map(|_| rng.gen_range(-ball..ball)).collect();
                let y: Vec<f64> = (0..dim).map(|_| rng.gen_range(-ball..ball)).collect();
                (x, y)
            })
            .collect();
        let v = model_check(&model, l1, 0.0, &samples);
        assert!(v <= 1e-12, "{name}: sandwich violation {v}");
        // fault injection: halving L must produce a positive violation
        let v_bad = model_check(&model, 0.5 * l1, 0.0, &samples);
        assert!(v_bad > 0.0, "{name}: halved L must violate the sandwich");
    }
}

#[test]
fn trace_weight_normalization_recompute() {
    use fo_core::methods::{gradient_descent, StepRule};
    let p = fo_core::zoo::random_quadratic::<f64>(5, 1.0, 10.0, 11).unwrap();
    let t = gradient_descent(
        &p.zoo.problem,
        &p.start_at_distance(1.0, 1),
        &StepRule::FixedInverseL(10.0),
        50,
        None,
    )
    .unwrap();
    let again = t.recompute_average();
    for (a, b) in t.averaged_point.iter().zip(&again) {
        assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()));
    }
}
