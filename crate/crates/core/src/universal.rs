//! Hölder-adaptive methods: universal gradient descent with halving/doubling
//! of the working constant, and the similar-triangles accelerated method.

use crate::linalg::{all_finite, dot, norm2, sub, WeightedMean};
use crate::model::{solve_model_step, ModelOracle};
use crate::prox::{bregman, ProxSetup};
use crate::scalar::{real, Real};
use crate::trace::{Trace, TraceBuilder};

/// Why a universal run stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    /// The computable weighted dual-gap certificate dropped below ε.
    Certificate,
    /// The iteration cap was reached; any reported gap is diagnostic only.
    IterationCap,
}

#[derive(Debug, Clone)]
pub struct UniversalOptions<T> {
    /// Target accuracy; the method bakes in δ = ε/2, so reuse at another ε
    /// requires a fresh run.
    pub epsilon: T,
    /// Initial guess for the working constant; a bad guess only perturbs the
    /// constant, the doubling phase discovers the scale.
    pub l0: T,
    /// Outer-iteration cap.
    pub max_iterations: usize,
    /// Per-iteration cap on halving/doubling trials; exhausting it signals a
    /// broken (e.g. nonconvex) oracle.
    pub max_trials_per_iteration: usize,
    /// Radius of the certificate ball around the start point. `None` turns
    /// the computable-termination machinery off (iteration-cap mode).
    pub certificate_radius: Option<T>,
}

impl<T: Real> UniversalOptions<T> {
    pub fn new(epsilon: T) -> Self {
        UniversalOptions {
            epsilon,
            l0: T::one(),
            max_iterations: 100_000,
            max_trials_per_iteration: 120,
            certificate_radius: None,
        }
    }

    pub fn with_l0(mut self, l0: T) -> Self {
        self.l0 = l0;
        self
    }

    pub fn with_certificate_radius(mut self, r: T) -> Self {
        self.certificate_radius = Some(r);
        self
    }

    pub fn with_max_iterations(mut self, n: usize) -> Self {
        self.max_iterations = n;
        self
    }
}

#[derive(Debug, Clone)]
pub struct UniversalRun<T> {
    pub trace: Trace<T>,
    /// Accepted working constant per outer iteration.
    pub accepted_l: Vec<T>,
    /// Halving/doubling trials per outer iteration.
    pub trials: Vec<usize>,
    /// Final certificate value when computable.
    pub certificate: Option<T>,
    pub stop: StopReason,
}

impl<T: Real> UniversalRun<T> {
    pub fn iterations(&self) -> usize {
        self.accepted_l.len()
    }

    /// Weighted average point `x̄ = (Σ x^k / L^k) / (Σ 1 / L^k)`.
    pub fn averaged_point(&self) -> &[T] {
        &self.trace.averaged_point
    }
}

/// Universal gradient descent: each iteration halves the working constant,
/// then doubles it until the inexact descent test with δ = ε/2 accepts.
/// Trace weights are `1/L^k`; termination is by the computable weighted
/// dual-gap certificate over the ball when a radius is configured.
pub fn universal_gradient<T: Real>(
    oracle: &ModelOracle<T>,
    prox: &ProxSetup<T>,
    x0: &[T],
    opts: &UniversalOptions<T>,
) -> crate::Result<UniversalRun<T>> {
    if !(opts.epsilon > T::zero()) || !(opts.l0 > T::zero()) {
        return Err(crate::Error::config("universal method needs epsilon > 0, L0 > 0"));
    }
    let certificate_enabled = opts.certificate_radius.is_some() && oracle.composite().is_none();
    let eps_half = opts.epsilon / real::<T>(2.0);

    let grad0 = oracle.grad_calls();
    let val0 = oracle.value_calls();

    let mut x = x0.to_vec();
    // Instrumentation only: the method itself never needs f(x⁰).
    let f0 = oracle.probe_objective(&x);
    let mut builder = TraceBuilder::new(x.clone(), f0, opts.l0);
    let mut accepted_l = Vec::new();
    let mut trials_per_iter = Vec::new();

    // Certificate accumulators: Σ w·(f_k − ⟨g_k, x^k⟩), Σ w·g_k, Σ w.
    let mut s_const = T::zero();
    let mut s_grad = vec![T::zero(); x.len()];
    let mut s_w = T::zero();
    let mut mean = WeightedMean::new(x.len());

    let mut l_prev = opts.l0;
    let mut certificate = None;
    let mut stop = StopReason::IterationCap;

    for _iter in 0..opts.max_iterations {
        // Query the model lazily at the loop top so a certificate stop never
        // wastes an oracle call at the final iterate.
        let model = oracle.query(&x);
        let mut l_try = l_prev / real::<T>(2.0);
        let mut trials = 0usize;
        let accepted = loop {
            trials += 1;
            if trials > opts.max_trials_per_iteration {
                return Err(crate::Error::AdaptivityFailure {
                    budget: opts.max_trials_per_iteration,
                });
            }
            let cand = solve_model_step(prox, &model.composite, &x, &model.linear, T::one() / l_try)?;
            if !all_finite(&cand) {
                return Err(crate::Error::Divergence { step: accepted_l.len() });
            }
            let f_cand = oracle.objective_value(&cand);
            if !f_cand.is_finite() {
                return Err(crate::Error::Divergence { step: accepted_l.len() });
            }
            let v = bregman(prox, &cand, &x)?;
            let bound = model.f_delta + model.psi(&cand) + l_try * v + eps_half;
            if f_cand <= bound {
                break (cand, f_cand);
            }
            l_try = l_try * real::<T>(2.0);
        };
        let (x_next, f_next) = accepted;

        // Certificate bookkeeping with the linearization at x^k.
        let w = T::one() / l_try;
        if certificate_enabled {
            s_const = s_const + w * (model.f_delta - dot(&model.linear, &x));
            for (sg, &gi) in s_grad.iter_mut().zip(&model.linear) {
                *sg = *sg + w * gi;
            }
        }
        s_w = s_w + w;
        mean.push(&x_next, w);

        accepted_l.push(l_try);
        trials_per_iter.push(trials);
        builder.push_weighted(x_next.clone(), f_next, l_try, w);
        builder.mark_calls(oracle.grad_calls() - grad0, oracle.value_calls() - val0);
        x = x_next;
        l_prev = l_try;

        if certificate_enabled {
            let radius = opts.certificate_radius.unwrap();
            let f_avg = oracle.objective_value(&mean.mean());
            let lin_min = s_const + dot(&s_grad, x0) - radius * norm2(&s_grad);
            let cert = f_avg - lin_min / s_w;
            certificate = Some(cert);
            if cert <= opts.epsilon {
                stop = StopReason::Certificate;
                break;
            }
        }
    }

    Ok(UniversalRun {
        trace: builder.finish(oracle.grad_calls() - grad0, oracle.value_calls() - val0),
        accepted_l,
        trials: trials_per_iter,
        certificate,
        stop,
    })
}

#[derive(Debug, Clone)]
pub struct StRun<T> {
    pub trace: Trace<T>,
    /// `A_k` coefficients, `A_0 = 0`.
    pub a_seq: Vec<T>,
    /// `α_k` coefficients, `α_0 = 0`.
    pub alpha_seq: Vec<T>,
}

impl<T: Real> StRun<T> {
    /// Gap bound `V(x*, x⁰)/A_N` when the prox radius to the optimum is known.
    pub fn gap_bound(&self, v_to_optimum: T) -> T {
        v_to_optimum / *self.a_seq.last().expect("nonempty")
    }
}

/// Similar-triangles accelerated method with one projection per iteration:
///
/// `α_{k+1} = 1/(2L) + sqrt(1/(4L²) + α_k²)`, `A_{k+1} = A_k + α_{k+1}`,
/// `y^{k+1} = (α_{k+1} u^k + A_k x^k)/A_{k+1}`,
/// `u^{k+1} = argmin{ α_{k+1} ψ(x, y^{k+1}) + V(x, u^k) }`,
/// `x^{k+1} = (α_{k+1} u^{k+1} + A_k x^k)/A_{k+1}`.
///
/// `monotone` applies the best-of-{y, u, x} reassignment, which makes the
/// objective non-increasing along `x^k` for exact oracles.
pub fn similar_triangles<T: Real>(
    oracle: &ModelOracle<T>,
    prox: &ProxSetup<T>,
    l: T,
    x0: &[T],
    iterations: usize,
    monotone: bool,
) -> crate::Result<StRun<T>> {
    if !(l > T::zero()) {
        return Err(crate::Error::config("similar triangles needs L > 0"));
    }
    let grad0 = oracle.grad_calls();
    let val0 = oracle.value_calls();

    let mut x = x0.to_vec();
    let mut u = x0.to_vec();
    let mut a_k = T::zero();
    let mut alpha_k = T::zero();
    let mut alpha_seq = vec![T::zero()];
    let mut a_seq = vec![T::zero()];
    let half = real::<T>(0.5);

    let f0 = oracle.probe_objective(&x);
    let mut builder = TraceBuilder::new(x.clone(), f0, l);

    for _k in 0..iterations {
        let alpha = half / l + (half / l * (half / l) + alpha_k * alpha_k).sqrt();
        let a_next = a_k + alpha;
        // y^{k+1}
        let mut y = vec![T::zero(); x.len()];
        for i in 0..x.len() {
            y[i] = (alpha * u[i] + a_k * x[i]) / a_next;
        }
        let model = oracle.query(&y);
        // u^{k+1}: the single prox step with weight α (closed form, so the
        // subproblem inexactness δ̃ is 0).
        let u_next = solve_model_step(prox, &model.composite, &u, &model.linear, alpha)?;
        if !all_finite(&u_next) {
            return Err(crate::Error::Divergence { step: a_seq.len() - 1 });
        }
        let mut x_next = vec![T::zero(); x.len()];
        for i in 0..x.len() {
            x_next[i] = (alpha * u_next[i] + a_k * x[i]) / a_next;
        }
        let f_x = if monotone {
            // best of {y^{k+1}, u^{k+1}, x^{k+1}} by true objective value
            let fy = oracle.objective_value(&y);
            let fu = oracle.objective_value(&u_next);
            let fx = oracle.objective_value(&x_next);
            let mut best = x_next.clone();
            let mut best_f = fx;
            if fy < best_f {
                best = y.clone();
                best_f = fy;
            }
            if fu < best_f {
                best = u_next.clone();
                best_f = fu;
            }
            x_next = best;
            best_f
        } else {
            oracle.probe_objective(&x_next)
        };
        u = u_next;
        x = x_next;
        a_k = a_next;
        alpha_k = alpha;
        alpha_seq.push(alpha);
        a_seq.push(a_next);
        builder.push(x.clone(), f_x, l);
        builder.mark_calls(oracle.grad_calls() - grad0, oracle.value_calls() - val0);
    }

    Ok(StRun {
        trace: builder.finish(oracle.grad_calls() - grad0, oracle.value_calls() - val0),
        a_seq,
        alpha_seq,
    })
}

/// Growth guarantee `A_N ≥ (N+1)²/(4L)` and the recursion identity
/// `A_k = L·α_k²`; exposed for diagnostics.
pub fn st_coefficient_identity_error<T: Real>(run: &StRun<T>, l: T) -> T {
    let mut worst = T::zero();
    for k in 1..run.a_seq.len() {
        let a = run.a_seq[k];
        let alpha = run.alpha_seq[k];
        let rel = (a - l * alpha * alpha).abs() / a.max(T::min_positive_value());
        worst = worst.max(rel);
    }
    worst
}

/// Distance-halving check helper used by the restart logic tests:
/// `‖x − y‖₂`.
pub fn euclidean_distance<T: Real>(x: &[T], y: &[T]) -> T {
    norm2(&sub(x, y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{FnObjective, Oracle};
    use crate::sets::FeasibleSet;

    fn quad_model(l: f64) -> ModelOracle<f64> {
        ModelOracle::linear_model(Oracle::new(FnObjective::new(
            move |x: &[f64]| 0.5 * l * crate::linalg::dot(x, x),
            move |x: &[f64]| x.iter().map(|&v| l * v).collect(),
        )))
    }

    #[test]
    fn universal_accepts_l_at_most_twice_smoothness() {
        let l_true = 8.0;
        let m = quad_model(l_true);
        let prox = ProxSetup::euclidean(FeasibleSet::FreeSpace);
        let opts = UniversalOptions::new(1e-3)
            .with_l0(1.0)
            .with_max_iterations(200)
            .with_certificate_radius(2.0);
        let run = universal_gradient(&m, &prox, &[1.0, 1.0], &opts).unwrap();
        for l in &run.accepted_l {
            assert!(*l <= 2.0 * l_true + 1e-12, "accepted L {l} above cap");
        }
    }

    #[test]
    fn universal_first_iteration_rejects_half_l() {
        // From the quadratic trace: the L/2 trial fails by a computable
        // margin whenever L‖x‖² > ε/2, then L itself passes.
        let l_true = 4.0;
        let m = quad_model(l_true);
        let prox = ProxSetup::euclidean(FeasibleSet::FreeSpace);
        let opts = UniversalOptions::new(1e-6).with_l0(l_true).with_max_iterations(1);
        let run = universal_gradient(&m, &prox, &[1.0], &opts).unwrap();
        assert_eq!(run.trials[0], 2, "L/2 must fail, L must pass");
        assert!((run.accepted_l[0] - l_true).abs() < 1e-12);
    }

    #[test]
    fn universal_terminates_by_certificate_on_smooth_problem() {
        let m = quad_model(1.0);
        let prox = ProxSetup::euclidean(FeasibleSet::FreeSpace);
        let eps = 1e-2;
        // x* = 0, x0 = (1, 0): true R = 1.
        let opts = UniversalOptions::new(eps)
            .with_l0(1.0)
            .with_max_iterations(10_000)
            .with_certificate_radius(1.0);
        let run = universal_gradient(&m, &prox, &[1.0, 0.0], &opts).unwrap();
        assert_eq!(run.stop, StopReason::Certificate);
        let cert = run.certificate.unwrap();
        assert!(cert <= eps);
        // The certificate upper-bounds the true gap (f* = 0, x* in ball).
        let f_avg = m.probe_objective(run.averaged_point());
        assert!(f_avg <= cert + 1e-12);
    }

    #[test]
    fn st_first_step_is_plain_mirror_step() {
        let l = 2.0;
        let m = quad_model(l);
        let prox = ProxSetup::euclidean(FeasibleSet::FreeSpace);
        let run = similar_triangles(&m, &prox, l, &[1.0], 1, false).unwrap();
        // α₁ = 1/L, A₁ = 1/L, y¹ = u⁰ = x⁰, so x¹ = x⁰ − (1/L)∇f(x⁰).
        assert!((run.alpha_seq[1] - 1.0 / l).abs() < 1e-14);
        assert!((run.a_seq[1] - 1.0 / l).abs() < 1e-14);
        let expect = 1.0 - (1.0 / l) * (l * 1.0);
        assert!((run.trace.final_point()[0] - expect).abs() < 1e-14);
    }

    #[test]
    fn st_coefficient_growth_and_identity() {
        let l = 1.0;
        let m = quad_model(l);
        let prox = ProxSetup::euclidean(FeasibleSet::FreeSpace);
        let run = similar_triangles(&m, &prox, l, &[1.0, -2.0], 10, false).unwrap();
        let a10 = *run.a_seq.last().unwrap();
        assert!(a10 >= 121.0 / 4.0 - 1e-12, "A_10 = {a10} below (N+1)²/(4L)");
        assert!(st_coefficient_identity_error(&run, l) < 1e-10);
    }

    #[test]
    fn monotone_variant_never_increases() {
        let l = 5.0;
        let m = quad_model(l);
        let prox = ProxSetup::euclidean(FeasibleSet::FreeSpace);
        let run = similar_triangles(&m, &prox, l, &[3.0, 1.0], 50, true).unwrap();
        for w in run.trace.values.windows(2) {
            assert!(w[1] <= w[0] + 1e-12, "monotone variant increased: {w:?}");
        }
    }
}
