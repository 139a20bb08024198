//! Conjugate gradients: the exact Krylov method for SPD quadratics and the
//! Fletcher-Reeves / Polak-Ribiere-Polyak nonlinear variants.

use crate::linalg::{all_finite, axpy, dot, norm2, Mat};
use crate::oracle::Problem;
use crate::scalar::{real, Real};
use crate::trace::{Trace, TraceBuilder, TraceEvent};

/// Which β formula the nonlinear variant applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CgVariant {
    FletcherReeves,
    PolakRibiere,
}

/// Line search used by [`nonlinear_cg`].
#[derive(Debug, Clone, Copy)]
pub enum NcgLineSearch<T> {
    /// Bracket a sign change of the directional derivative, then bisect
    /// until `|φ'(h)| ≤ tol · |φ'(0)|`.
    DirectionalBisection { tol: T },
    /// Closed form `h = −⟨g, d⟩ / ⟨A d, d⟩` for quadratic objectives; the
    /// curvature is recovered from one extra gradient call.
    ExactQuadratic,
}

/// Conjugate gradients on `f(x) = ½⟨Ax, x⟩ − ⟨b, x⟩` with SPD `A`.
/// Finite termination: the residual vanishes by step `n` in exact
/// arithmetic. Stops early once the residual is at rounding level.
pub fn cg_quadratic<T: Real>(
    a: &Mat<T>,
    b: &[T],
    x0: &[T],
    iterations: usize,
) -> crate::Result<Trace<T>> {
    assert_eq!(a.rows, a.cols, "cg needs a square matrix");
    assert_eq!(b.len(), a.rows, "cg: rhs dimension mismatch");
    assert_eq!(x0.len(), a.rows, "cg: start dimension mismatch");

    let f = |x: &[T]| real::<T>(0.5) * dot(&a.matvec(x), x) - dot(b, x);
    let mut x = x0.to_vec();
    let mut r = crate::linalg::sub(b, &a.matvec(&x));
    let mut p = r.clone();
    let mut rr = dot(&r, &r);
    let b_norm = norm2(b).max(T::min_positive_value());
    let floor = real::<T>(1e-15) * b_norm;

    let mut builder = TraceBuilder::new(x.clone(), f(&x), T::one());
    for k in 0..iterations {
        if rr.sqrt() <= floor {
            break;
        }
        let ap = a.matvec(&p);
        let curvature = dot(&ap, &p);
        if !(curvature > T::zero()) {
            return Err(crate::Error::Breakdown(format!(
                "nonpositive curvature {curvature} at step {k}; matrix not SPD numerically"
            )));
        }
        let alpha = rr / curvature;
        x = axpy(&x, alpha, &p);
        r = axpy(&r, -alpha, &ap);
        let rr_new = dot(&r, &r);
        let beta = rr_new / rr;
        p = axpy(&r, beta, &p);
        rr = rr_new;
        if !all_finite(&x) {
            return Err(crate::Error::Divergence { step: k });
        }
        builder.push(x.clone(), f(&x), T::one());
    }
    Ok(builder.finish(0, 0))
}

/// Nonlinear conjugate gradients with periodic direction resets.
///
/// The direction is reset to the plain gradient every `restart_period`
/// iterations. A failed line search (no bracketed sign change) falls back to
/// a gradient step and records the event in the trace.
pub fn nonlinear_cg<T: Real>(
    problem: &Problem<T>,
    x0: &[T],
    variant: CgVariant,
    restart_period: usize,
    iterations: usize,
    line_search: NcgLineSearch<T>,
) -> crate::Result<Trace<T>> {
    if restart_period == 0 {
        return Err(crate::Error::config("restart period must be >= 1"));
    }
    let oracle = &problem.oracle;
    let (g0c, v0c) = (oracle.grad_calls(), oracle.value_calls());
    let mut x = x0.to_vec();
    let (mut fx, mut g) = oracle.eval(&x);
    let mut d: Vec<T> = g.iter().map(|&v| -v).collect();
    let mut builder = TraceBuilder::new(x.clone(), fx, T::one());

    for k in 0..iterations {
        let since_restart = k % restart_period;
        if since_restart == 0 && k > 0 {
            d = g.iter().map(|&v| -v).collect();
        }
        let slope = dot(&g, &d);
        let mut fell_back = false;
        let (step_dir, h) = if slope < T::zero() {
            match find_step(problem, &x, fx, &d, slope, line_search) {
                Some(h) => (d.clone(), h),
                None => {
                    fell_back = true;
                    gradient_fallback(problem, &x, fx, &g)
                }
            }
        } else {
            // Non-descent direction (possible for PRP): fall back.
            fell_back = true;
            gradient_fallback(problem, &x, fx, &g)
        };
        if fell_back {
            builder.event(TraceEvent::LineSearchFallback { step: k });
        }
        let next = axpy(&x, h, &step_dir);
        if !all_finite(&next) {
            return Err(crate::Error::Divergence { step: k });
        }
        let (fn_, gn) = oracle.eval(&next);
        if !fn_.is_finite() || !all_finite(&gn) {
            return Err(crate::Error::Divergence { step: k });
        }
        if fell_back {
            // A fallback resets the direction history.
            d = gn.iter().map(|&v| -v).collect();
        } else {
            let beta = match variant {
                CgVariant::FletcherReeves => dot(&gn, &gn) / dot(&g, &g),
                CgVariant::PolakRibiere => {
                    let diff = crate::linalg::sub(&gn, &g);
                    dot(&gn, &diff) / dot(&g, &g)
                }
            };
            d = gn.iter().zip(&d).map(|(&gni, &di)| -gni + beta * di).collect();
        }
        x = next;
        fx = fn_;
        g = gn;
        builder.push(x.clone(), fx, T::one() / h.max(T::min_positive_value()));
    }
    Ok(builder.finish(oracle.grad_calls() - g0c, oracle.value_calls() - v0c))
}

fn find_step<T: Real>(
    problem: &Problem<T>,
    x: &[T],
    _fx: T,
    d: &[T],
    slope0: T,
    ls: NcgLineSearch<T>,
) -> Option<T> {
    match ls {
        NcgLineSearch::ExactQuadratic => {
            let shifted = crate::linalg::add(x, d);
            let g_shift = problem.oracle.grad(&shifted);
            let g_here = problem.oracle.grad(x);
            let ad = crate::linalg::sub(&g_shift, &g_here);
            let curv = dot(&ad, d);
            if curv > T::zero() {
                Some(-slope0 / curv)
            } else {
                None
            }
        }
        NcgLineSearch::DirectionalBisection { tol } => {
            let phi_prime = |h: T| -> T {
                let p = axpy(x, h, d);
                dot(&problem.oracle.grad(&p), d)
            };
            // Bracket a nonnegative derivative by doubling.
            let mut lo = T::zero();
            let mut slope_lo = slope0;
            let mut hi = T::one() / (T::one() + norm2(d));
            let mut found = false;
            for _ in 0..60 {
                let s = phi_prime(hi);
                if !s.is_finite() {
                    break;
                }
                if s >= T::zero() {
                    found = true;
                    break;
                }
                lo = hi;
                slope_lo = s;
                hi = hi * real::<T>(2.0);
            }
            let _ = slope_lo;
            if !found {
                return None;
            }
            // Bisection on the directional derivative.
            let target = tol * slope0.abs();
            let mut mid = (lo + hi) * real::<T>(0.5);
            for _ in 0..200 {
                mid = (lo + hi) * real::<T>(0.5);
                let s = phi_prime(mid);
                if s.abs() <= target {
                    break;
                }
                if s < T::zero() {
                    lo = mid;
                } else {
                    hi = mid;
                }
                if (hi - lo) <= real::<T>(1e-16) * (T::one() + hi) {
                    break;
                }
            }
            Some(mid)
        }
    }
}

/// Backtracking gradient step used when the line search fails.
fn gradient_fallback<T: Real>(
    problem: &Problem<T>,
    x: &[T],
    fx: T,
    g: &[T],
) -> (Vec<T>, T) {
    let dir: Vec<T> = g.iter().map(|&v| -v).collect();
    let mut h = T::one() / (T::one() + norm2(g));
    for _ in 0..60 {
        let cand = axpy(x, h, &dir);
        let f = problem.oracle.value(&cand);
        if f.is_finite() && f < fx {
            return (dir, h);
        }
        h = h * real::<T>(0.5);
    }
    (dir, h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{FnObjective, Oracle};

    #[test]
    fn identity_matrix_converges_in_one_step() {
        let a = Mat::identity(4);
        let b = vec![1.0f64, -2.0, 3.0, 0.5];
        let t = cg_quadratic(&a, &b, &[5.0, 5.0, 5.0, 5.0], 4).unwrap();
        let x1 = &t.iterates[1];
        for (xi, bi) in x1.iter().zip(&b) {
            assert!((xi - bi).abs() < 1e-12);
        }
    }

    #[test]
    fn finite_termination_on_diag_system() {
        let a = Mat::from_rows(vec![
            vec![1.0, 0.0, 0.0],
            vec![0.0, 2.0, 0.0],
            vec![0.0, 0.0, 3.0],
        ]);
        let b = vec![1.0, 1.0, 1.0];
        let t = cg_quadratic(&a, &b, &[0.0, 0.0, 0.0], 3).unwrap();
        let x = t.final_point();
        let r = crate::linalg::sub(&b, &a.matvec(x));
        assert!(norm2(&r) <= 1e-10 * norm2(&b));
    }

    #[test]
    fn gradient_orthogonality_along_the_run() {
        let a = Mat::from_rows(vec![
            vec![4.0, 1.0, 0.0],
            vec![1.0, 3.0, 0.5],
            vec![0.0, 0.5, 2.0],
        ]);
        let b = vec![1.0, 0.0, -1.0];
        let t = cg_quadratic(&a, &b, &[0.0; 3], 3).unwrap();
        let grads: Vec<Vec<f64>> = t
            .iterates
            .iter()
            .map(|x| crate::linalg::sub(&a.matvec(x), &b))
            .collect();
        for i in 0..grads.len() {
            for j in 0..i {
                let gi = norm2(&grads[i]);
                let gj = norm2(&grads[j]);
                if gi < 1e-12 || gj < 1e-12 {
                    continue;
                }
                let cos = dot(&grads[i], &grads[j]) / (gi * gj);
                assert!(cos.abs() < 1e-8, "gradients {i},{j} not orthogonal: {cos}");
            }
        }
    }

    #[test]
    fn restart_every_step_is_steepest_descent() {
        let p = Problem::unconstrained(Oracle::new(FnObjective::new(
            |x: &[f64]| 0.5 * (x[0] * x[0] + 10.0 * x[1] * x[1]),
            |x: &[f64]| vec![x[0], 10.0 * x[1]],
        )));
        let t = nonlinear_cg(
            &p,
            &[1.0, 1.0],
            CgVariant::FletcherReeves,
            1,
            10,
            NcgLineSearch::ExactQuadratic,
        )
        .unwrap();
        // steepest descent with exact line search zig-zags but descends
        for w in t.values.windows(2) {
            assert!(w[1] <= w[0] + 1e-15);
        }
    }

    #[test]
    fn fr_and_prp_match_cg_on_quadratics() {
        let a = Mat::from_rows(vec![
            vec![3.0, 0.4, 0.0],
            vec![0.4, 2.0, 0.1],
            vec![0.0, 0.1, 1.0],
        ]);
        let b = vec![1.0, -1.0, 0.5];
        let x0 = vec![0.0; 3];
        let cg = cg_quadratic(&a, &b, &x0, 3).unwrap();
        let (ac, bc) = (a.clone(), b.clone());
        let problem = Problem::unconstrained(Oracle::new(FnObjective::new(
            move |x: &[f64]| 0.5 * dot(&ac.matvec(x), x) - dot(&bc, x),
            {
                let a2 = a.clone();
                let b2 = b.clone();
                move |x: &[f64]| crate::linalg::sub(&a2.matvec(x), &b2)
            },
        )));
        for variant in [CgVariant::FletcherReeves, CgVariant::PolakRibiere] {
            let t = nonlinear_cg(
                &problem,
                &x0,
                variant,
                1000,
                3,
                NcgLineSearch::ExactQuadratic,
            )
            .unwrap();
            for (xa, xb) in cg.iterates.iter().zip(&t.iterates) {
                for (ai, bi) in xa.iter().zip(xb) {
                    assert!(
                        (ai - bi).abs() < 1e-8,
                        "{variant:?} deviates from exact CG: {ai} vs {bi}"
                    );
                }
            }
        }
    }
}
