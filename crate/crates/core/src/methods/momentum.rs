//! Momentum family: heavy ball, Nesterov's momentum method and linear
//! coupling of gradient and mirror steps.

use crate::linalg::{all_finite, axpy, scale, sub};
use crate::oracle::Problem;
use crate::scalar::{from_usize, real, Real};
use crate::trace::{Trace, TraceBuilder};

/// Heavy ball: `x^{k+1} = x^k − α∇f(x^k) + β(x^k − x^{k−1})`, `x^{−1} = x⁰`.
///
/// May diverge for bad `(α, β)`; that surfaces as a `Divergence` error
/// rather than being clipped.
pub fn heavy_ball<T: Real>(
    problem: &Problem<T>,
    x0: &[T],
    alpha: T,
    beta: T,
    iterations: usize,
) -> crate::Result<Trace<T>> {
    if !(alpha > T::zero()) || beta < T::zero() || beta >= T::one() {
        return Err(crate::Error::config("heavy ball needs alpha > 0, 0 <= beta < 1"));
    }
    let oracle = &problem.oracle;
    let (g0, v0) = (oracle.grad_calls(), oracle.value_calls());
    let mut prev = x0.to_vec();
    let mut x = x0.to_vec();
    let (mut f, mut g) = oracle.eval(&x);
    let mut builder = TraceBuilder::new(x.clone(), f, T::one() / alpha);
    for k in 0..iterations {
        let mut next = axpy(&x, -alpha, &g);
        for i in 0..next.len() {
            next[i] = next[i] + beta * (x[i] - prev[i]);
        }
        if !all_finite(&next) {
            return Err(crate::Error::Divergence { step: k });
        }
        let (fnext, gnext) = oracle.eval(&next);
        if !fnext.is_finite() || !all_finite(&gnext) {
            return Err(crate::Error::Divergence { step: k });
        }
        prev = x;
        x = next;
        f = fnext;
        g = gnext;
        builder.push(x.clone(), f, T::one() / alpha);
        builder.mark_calls(oracle.grad_calls() - g0, oracle.value_calls() - v0);
    }
    Ok(builder.finish(oracle.grad_calls() - g0, oracle.value_calls() - v0))
}

/// Nesterov's momentum method. Without `mu` the coefficient is
/// `(k−1)/(k+2)` (first step is a plain gradient step); with `mu` it is the
/// constant `(√L − √μ)/(√L + √μ)`.
pub fn nesterov_momentum<T: Real>(
    problem: &Problem<T>,
    x0: &[T],
    l: T,
    mu: Option<T>,
    iterations: usize,
) -> crate::Result<Trace<T>> {
    if !(l > T::zero()) {
        return Err(crate::Error::config("momentum method needs L > 0"));
    }
    if let Some(m) = mu {
        if !(m > T::zero() && m <= l) {
            return Err(crate::Error::config("strongly convex variant needs 0 < mu <= L"));
        }
    }
    let oracle = &problem.oracle;
    let (g0, v0) = (oracle.grad_calls(), oracle.value_calls());
    let inv_l = T::one() / l;
    let mut prev = x0.to_vec();
    let mut x = x0.to_vec();
    let f0 = oracle.value(&x);
    let mut builder = TraceBuilder::new(x.clone(), f0, l);
    for k in 1..=iterations {
        let m = match mu {
            Some(mu) => {
                let sl = l.sqrt();
                let sm = mu.sqrt();
                (sl - sm) / (sl + sm)
            }
            None => {
                let kf = from_usize::<T>(k);
                (kf - T::one()) / (kf + real::<T>(2.0))
            }
        };
        let momentum = sub(&x, &prev);
        let y = axpy(&x, m, &momentum);
        let gy = oracle.grad(&y);
        let mut next = axpy(&y, -inv_l, &gy);
        if !all_finite(&next) {
            return Err(crate::Error::Divergence { step: k - 1 });
        }
        let fnext = oracle.value(&next);
        if !fnext.is_finite() {
            return Err(crate::Error::Divergence { step: k - 1 });
        }
        prev = std::mem::take(&mut x);
        x = std::mem::take(&mut next);
        builder.push(x.clone(), fnext, l);
        builder.mark_calls(oracle.grad_calls() - g0, oracle.value_calls() - v0);
    }
    Ok(builder.finish(oracle.grad_calls() - g0, oracle.value_calls() - v0))
}

/// Step schedule for linear coupling.
#[derive(Debug, Clone, Copy)]
pub enum CouplingStep<T> {
    /// Fixed mirror step `h` with coupling `τ = 1/(Lh + 1)`.
    Fixed { h: T },
    /// The restart-free schedule `τ_k = 2/(k+2)`, `h_k = (k+2)/(2L)`.
    Schedule,
}

/// Linear coupling on an unconstrained Euclidean problem: a gradient step
/// (`y`), a mirror step (`z`) and the convex combination that queries the
/// oracle. The trace follows the `y` sequence.
pub fn linear_coupling<T: Real>(
    problem: &Problem<T>,
    x0: &[T],
    l: T,
    step: CouplingStep<T>,
    iterations: usize,
) -> crate::Result<Trace<T>> {
    if !(l > T::zero()) {
        return Err(crate::Error::config("linear coupling needs L > 0"));
    }
    if let CouplingStep::Fixed { h } = step {
        if !(h > T::zero()) {
            return Err(crate::Error::config("linear coupling needs h > 0"));
        }
    }
    let oracle = &problem.oracle;
    let (g0, v0) = (oracle.grad_calls(), oracle.value_calls());
    let inv_l = T::one() / l;
    let mut y = x0.to_vec();
    let mut z = x0.to_vec();
    let fy = oracle.value(&y);
    let mut builder = TraceBuilder::new(y.clone(), fy, l);
    for k in 0..iterations {
        let (tau, h) = match step {
            CouplingStep::Fixed { h } => (T::one() / (l * h + T::one()), h),
            CouplingStep::Schedule => {
                let kf = from_usize::<T>(k);
                let two = real::<T>(2.0);
                (
                    two / (kf + two),
                    (kf + two) / (two * l),
                )
            }
        };
        // x^{k+1} = τ z^k + (1−τ) y^k
        let mut xq = scale(&z, tau);
        for i in 0..xq.len() {
            xq[i] = xq[i] + (T::one() - tau) * y[i];
        }
        let gx = oracle.grad(&xq);
        if !all_finite(&gx) {
            return Err(crate::Error::Divergence { step: k });
        }
        // y^{k+1}: gradient step from the query point
        y = axpy(&xq, -inv_l, &gx);
        // z^{k+1}: mirror step
        z = axpy(&z, -h, &gx);
        if !all_finite(&y) || !all_finite(&z) {
            return Err(crate::Error::Divergence { step: k });
        }
        let fy = oracle.value(&y);
        if !fy.is_finite() {
            return Err(crate::Error::Divergence { step: k });
        }
        builder.push(y.clone(), fy, l);
        builder.mark_calls(oracle.grad_calls() - g0, oracle.value_calls() - v0);
    }
    Ok(builder.finish(oracle.grad_calls() - g0, oracle.value_calls() - v0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{FnObjective, Oracle};

    fn parabola() -> Problem<f64> {
        Problem::unconstrained(Oracle::new(FnObjective::new(
            |x: &[f64]| 0.5 * x[0] * x[0],
            |x: &[f64]| vec![x[0]],
        )))
    }

    #[test]
    fn heavy_ball_hand_computation() {
        let p = parabola();
        let t = heavy_ball(&p, &[1.0], 1.0, 0.5, 2).unwrap();
        assert!((t.iterates[1][0] - 0.0).abs() < 1e-15);
        assert!((t.iterates[2][0] + 0.5).abs() < 1e-15);
    }

    #[test]
    fn heavy_ball_beta_zero_is_gradient_descent() {
        let p = parabola();
        let hb = heavy_ball(&p, &[1.0], 0.3, 0.0, 10).unwrap();
        let gd = crate::methods::gradient_descent(
            &p,
            &[1.0],
            &crate::methods::StepRule::Sequence(vec![0.3]),
            10,
            None,
        )
        .unwrap();
        for (a, b) in hb.iterates.iter().zip(&gd.iterates) {
            assert!((a[0] - b[0]).abs() < 1e-15);
        }
    }

    #[test]
    fn nesterov_first_step_is_gradient_step() {
        let p = parabola();
        let t = nesterov_momentum(&p, &[1.0], 1.0, None, 1).unwrap();
        assert!(t.final_point()[0].abs() < 1e-15);
    }

    #[test]
    fn nesterov_mu_equals_l_is_plain_gd() {
        let p = parabola();
        let t = nesterov_momentum(&p, &[1.0], 2.0, Some(2.0), 5).unwrap();
        let gd = crate::methods::gradient_descent(
            &p,
            &[1.0],
            &crate::methods::StepRule::FixedInverseL(2.0),
            5,
            None,
        )
        .unwrap();
        for (a, b) in t.iterates.iter().zip(&gd.iterates) {
            assert!((a[0] - b[0]).abs() < 1e-15);
        }
    }

    #[test]
    fn coupling_one_iteration_by_hand() {
        // f = ½x², x0 = 1, L = 1, h = 1: τ = ½, x¹ = 1, y¹ = 0, z¹ = 0.
        let p = parabola();
        let t = linear_coupling(&p, &[1.0], 1.0, CouplingStep::Fixed { h: 1.0 }, 1).unwrap();
        assert!(t.final_point()[0].abs() < 1e-15);
    }

    #[test]
    fn tuned_heavy_ball_converges_linearly_on_stiff_quadratic() {
        let p = Problem::unconstrained(Oracle::new(FnObjective::new(
            |x: &[f64]| 0.5 * (x[0] * x[0] + 100.0 * x[1] * x[1]),
            |x: &[f64]| vec![x[0], 100.0 * x[1]],
        )));
        let (l, mu) = (100.0f64, 1.0f64);
        let alpha = 4.0 / (l.sqrt() + mu.sqrt()).powi(2);
        let beta = ((l.sqrt() - mu.sqrt()) / (l.sqrt() + mu.sqrt())).powi(2);
        let t = heavy_ball(&p, &[1.0, 1.0], alpha, beta, 200).unwrap();
        // classical tuned momentum contracts like ((√χ−1)/(√χ+1))^k ≈ 0.82^k
        assert!(
            t.final_value() < 1e-10,
            "tuned heavy ball should be far along, got {}",
            t.final_value()
        );
    }
}
