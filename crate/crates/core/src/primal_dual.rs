//! Primal-dual machinery: accuracy certificates, dual problem construction
//! for linearly constrained strongly convex programs, primal restoration
//! from a dual run, and the regularization helper.

use std::sync::Arc;

use crate::linalg::{all_finite, dot, norm2, smallest_positive_eigenvalue, sub, Mat, WeightedMean};
use crate::methods::History;
use crate::oracle::{Objective, Oracle};
use crate::prox::ProxSetup;
use crate::scalar::{real, Real};
use crate::sets::FeasibleSet;

/// Which p-norm the strong convexity of `φ` is measured in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrongConvexityNorm {
    L1,
    L2,
}

/// `φ(y) → min over { Ay = b, y ∈ set }` with a μ-strongly-convex `φ` and an
/// exact inner maximizer `y(x) = argmax_y { ⟨x, b − Ay⟩ − φ(y) }`.
pub struct ConstrainedProgram<T: Real> {
    pub phi: Arc<dyn Objective<T>>,
    pub a: Mat<T>,
    pub b: Vec<T>,
    pub set: FeasibleSet<T>,
    pub inner: Arc<dyn Fn(&[T]) -> Vec<T> + Send + Sync>,
    pub mu: T,
    pub norm: StrongConvexityNorm,
}

impl<T: Real> ConstrainedProgram<T> {
    /// Smoothness constant of the dual objective:
    /// `L = (1/μ) max_{‖y‖_p ≤ 1} ‖Ay‖₂²`, i.e. `max_j ‖A^j‖₂²/μ` for p = 1
    /// and `λ_max(AᵀA)/μ` for p = 2.
    pub fn dual_smoothness(&self) -> T {
        let raw = match self.norm {
            StrongConvexityNorm::L1 => {
                let mut best = T::zero();
                for j in 0..self.a.cols {
                    let col = self.a.column(j);
                    best = best.max(dot(&col, &col));
                }
                best
            }
            StrongConvexityNorm::L2 => crate::linalg::lambda_max(&self.a.gram_right()),
        };
        raw / self.mu
    }

    pub fn phi_value(&self, y: &[T]) -> T {
        self.phi.value(y)
    }

    pub fn feasibility(&self, y: &[T]) -> T {
        norm2(&sub(&self.a.matvec(y), &self.b))
    }
}

/// Dual objective `f(x) = max_y {⟨x, b − Ay⟩ − φ(y)}` with the
/// Demyanov-Danskin gradient `∇f(x) = b − A y(x)`.
struct DualObjective<T: Real> {
    prog: Arc<ConstrainedProgram<T>>,
}

impl<T: Real> DualObjective<T> {
    fn eval_inner(&self, x: &[T]) -> (T, Vec<T>, Vec<T>) {
        let y = (self.prog.inner)(x);
        let residual = sub(&self.prog.b, &self.prog.a.matvec(&y));
        let value = dot(x, &residual) - self.prog.phi.value(&y);
        (value, residual, y)
    }
}

impl<T: Real> Objective<T> for DualObjective<T> {
    fn value(&self, x: &[T]) -> T {
        self.eval_inner(x).0
    }

    fn subgradient(&self, x: &[T]) -> Vec<T> {
        self.eval_inner(x).1
    }

    fn value_subgradient(&self, x: &[T]) -> (T, Vec<T>) {
        let (f, g, _) = self.eval_inner(x);
        (f, g)
    }
}

/// First-order oracle of the dual problem.
pub fn dual_oracle<T: Real>(prog: Arc<ConstrainedProgram<T>>) -> Oracle<T> {
    Oracle::new(DualObjective { prog })
}

/// Computable accuracy certificate over a simple ball:
/// `f(x̄) − (1/Σw) min_{x ∈ ball} Σ w_k [f(x^k) + ⟨∇f(x^k), x − x^k⟩]`,
/// with `x̄` the weighted average of the linearization points. It
/// upper-bounds the true gap whenever the optimum lies in the ball.
#[derive(Debug, Clone)]
pub struct Certificate<T> {
    pub gap_value: T,
    pub reference_ball_radius: T,
    /// The argmin of the averaged linearization over the ball.
    pub witness: Vec<T>,
}

pub fn certificate<T: Real>(
    oracle: &Oracle<T>,
    history: &History<T>,
    ball: &FeasibleSet<T>,
) -> crate::Result<Certificate<T>> {
    if history.points.is_empty() {
        return Err(crate::Error::config("certificate needs a nonempty history"));
    }
    let radius = match ball {
        FeasibleSet::EuclideanBall { radius, .. } => *radius,
        FeasibleSet::Box { lo, hi } => {
            // half-diagonal as the reported reference size
            let d = sub(hi, lo);
            norm2(&d) / real::<T>(2.0)
        }
        FeasibleSet::Simplex => T::one(),
        _ => {
            return Err(crate::Error::config(
                "certificate ball must be a ball, box or simplex",
            ))
        }
    };
    let dim = history.points[0].len();
    let mut s_const = T::zero();
    let mut s_grad = vec![T::zero(); dim];
    let mut s_w = T::zero();
    let mut mean = WeightedMean::new(dim);
    for k in 0..history.points.len() {
        let w = history.weights[k];
        let x = &history.points[k];
        let g = &history.grads[k];
        s_const = s_const + w * (history.values[k] - dot(g, x));
        for (s, &gi) in s_grad.iter_mut().zip(g) {
            *s = *s + w * gi;
        }
        s_w = s_w + w;
        mean.push(x, w);
    }
    let witness = ball.linear_min(&s_grad)?;
    let lin_min = (s_const + dot(&s_grad, &witness)) / s_w;
    let x_bar = mean.mean();
    let f_bar = oracle.value(&x_bar);
    Ok(Certificate {
        gap_value: f_bar - lin_min,
        reference_ball_radius: radius,
        witness,
    })
}

/// Output of [`dual_solve_restore`].
#[derive(Debug, Clone)]
pub struct RestoreRun<T> {
    /// Averaged dual iterate `x̄^N = (1/N) Σ_{k=1..N} x^k`.
    pub x_bar: Vec<T>,
    /// Restored primal `ȳ^N = (1/N) Σ_{k=0..N-1} y(x^k)`.
    pub y_bar: Vec<T>,
    pub iterations: usize,
    /// Final duality gap `f(x̄) + φ(ȳ)`.
    pub duality_gap: T,
    /// Final feasibility residual `‖Aȳ − b‖₂`.
    pub feasibility: T,
    pub converged: bool,
    /// (gap, feasibility) history sampled at the stop-rule checks.
    pub gaps: Vec<(T, T)>,
}

/// Plain fixed-step dual gradient descent from `x⁰ = 0` (the essential start
/// point), maintaining the primal restoration average and the joint stopping
/// rule `f(x̄^N) + φ(ȳ^N) ≤ ε`, `‖Aȳ^N − b‖₂ ≤ ε̃`.
pub fn dual_solve_restore<T: Real>(
    prog: &Arc<ConstrainedProgram<T>>,
    epsilon: T,
    epsilon_tilde: T,
    n_cap: usize,
) -> crate::Result<RestoreRun<T>> {
    if !(epsilon > T::zero()) || !(epsilon_tilde > T::zero()) {
        return Err(crate::Error::config("tolerances must be positive"));
    }
    let l = prog.dual_smoothness();
    if !(l > T::zero()) || !l.is_finite() {
        return Err(crate::Error::config("dual smoothness constant is degenerate"));
    }
    let h = T::one() / l;
    let m = prog.b.len();

    let mut x = vec![T::zero(); m]; // x⁰ = 0 is essential
    let mut x_mean = WeightedMean::new(m);
    let mut y_mean = WeightedMean::new(prog.a.cols);
    let mut gaps = Vec::new();

    let dual = DualObjective { prog: prog.clone() };

    let mut converged = false;
    let mut iterations = 0usize;
    let mut last_gap = T::infinity();
    let mut last_feas = T::infinity();
    for k in 0..n_cap {
        let (_, residual, y) = dual.eval_inner(&x);
        if !all_finite(&residual) {
            return Err(crate::Error::Divergence { step: k });
        }
        y_mean.push(&y, T::one());
        // gradient step
        x = crate::linalg::axpy(&x, -h, &residual);
        x_mean.push(&x, T::one());
        iterations = k + 1;

        // Joint stopping rule on the averages.
        let y_bar = y_mean.mean();
        let x_bar = x_mean.mean();
        let feas = prog.feasibility(&y_bar);
        let gap = dual.value(&x_bar) + prog.phi.value(&y_bar);
        last_gap = gap;
        last_feas = feas;
        if gaps.len() < 4096 {
            gaps.push((gap, feas));
        }
        if gap <= epsilon && feas <= epsilon_tilde {
            converged = true;
            break;
        }
    }

    Ok(RestoreRun {
        x_bar: x_mean.mean(),
        y_bar: y_mean.mean(),
        iterations,
        duality_gap: last_gap,
        feasibility: last_feas,
        converged,
        gaps,
    })
}

/// Accelerated variant: similar triangles on the dual with the weighted
/// primal restoration `ȳ = (Σ α_k y(query_k)) / A_N`; the feasibility decays
/// like `8 L R / N²`.
pub fn dual_solve_restore_accelerated<T: Real>(
    prog: &Arc<ConstrainedProgram<T>>,
    iterations: usize,
) -> crate::Result<RestoreRun<T>> {
    let l = prog.dual_smoothness();
    let m = prog.b.len();
    let dual = DualObjective { prog: prog.clone() };

    // Similar-triangles recursion specialized to the dual with restoration
    // hooks at the y-query points.
    let mut x = vec![T::zero(); m];
    let mut u = vec![T::zero(); m];
    let mut a_k = T::zero();
    let mut alpha_k = T::zero();
    let half = real::<T>(0.5);
    let mut y_mean = WeightedMean::new(prog.a.cols);
    let mut gaps = Vec::new();

    for _k in 0..iterations {
        let alpha = half / l + (half / l * (half / l) + alpha_k * alpha_k).sqrt();
        let a_next = a_k + alpha;
        let mut q = vec![T::zero(); m];
        for i in 0..m {
            q[i] = (alpha * u[i] + a_k * x[i]) / a_next;
        }
        let (_, grad, y_primal) = dual.eval_inner(&q);
        y_mean.push(&y_primal, alpha);
        u = crate::linalg::axpy(&u, -alpha, &grad);
        for i in 0..m {
            x[i] = (alpha * u[i] + a_k * x[i]) / a_next;
        }
        a_k = a_next;
        alpha_k = alpha;
    }
    let y_bar = y_mean.mean();
    let feas = prog.feasibility(&y_bar);
    let gap = dual.value(&x) + prog.phi.value(&y_bar);
    gaps.push((gap, feas));
    Ok(RestoreRun {
        x_bar: x,
        y_bar,
        iterations,
        duality_gap: gap,
        feasibility: feas,
        converged: true,
        gaps,
    })
}

/// μ-strongly-convex regularization `φ^μ(y) = φ(y) + μ·V(y, center)` of an
/// oracle; solving it to ε/2 with `μ ≤ ε/(2V(y*, center))` solves the
/// original to ε.
pub fn regularize<T: Real>(
    oracle: &Oracle<T>,
    mu_reg: T,
    center: Vec<T>,
    prox: &ProxSetup<T>,
) -> crate::Result<Oracle<T>> {
    if !(mu_reg > T::zero()) {
        return Err(crate::Error::config("regularization needs mu > 0"));
    }
    let base = oracle.objective();
    let prox = prox.clone();
    let grad_center = prox.prox_gradient(&center)?;
    struct Regularized<T: Real> {
        base: Arc<dyn Objective<T>>,
        mu: T,
        center: Vec<T>,
        prox: ProxSetup<T>,
        grad_center: Vec<T>,
    }
    impl<T: Real> Objective<T> for Regularized<T> {
        fn value(&self, x: &[T]) -> T {
            let v = crate::prox::bregman(&self.prox, x, &self.center)
                .unwrap_or_else(|_| T::infinity());
            self.base.value(x) + self.mu * v
        }
        fn subgradient(&self, x: &[T]) -> Vec<T> {
            let g = self.base.subgradient(x);
            let gp = self
                .prox
                .prox_gradient(x)
                .unwrap_or_else(|_| vec![T::nan(); x.len()]);
            g.iter()
                .zip(gp.iter().zip(&self.grad_center))
                .map(|(&gi, (&pi, &ci))| gi + self.mu * (pi - ci))
                .collect()
        }
    }
    Ok(Oracle::new(Regularized {
        base,
        mu: mu_reg,
        center,
        prox,
        grad_center,
    }))
}

/// Upper bound on the dual solution size:
/// `‖x*‖₂² ≤ ‖∇φ(y*)‖₂² / σ̃_min(A)` with `σ̃_min` the smallest positive
/// eigenvalue of `AAᵀ`.
pub fn dual_size_bound<T: Real>(prog: &ConstrainedProgram<T>, y_star: &[T]) -> crate::Result<T> {
    let grad_phi = prog.phi.subgradient(y_star);
    let gram = prog.a.gram_left();
    let floor = real::<T>(1e-10) * (T::one() + crate::linalg::lambda_max(&gram).abs());
    let sigma = smallest_positive_eigenvalue(&gram, floor).ok_or_else(|| {
        crate::Error::DegenerateConstraints("positive spectrum of AAᵀ is empty".into())
    })?;
    Ok(dot(&grad_phi, &grad_phi) / sigma)
}

/// Slater-point bound on the dual multipliers of `f0(x) → min` subject to
/// `h_i(x) ≤ 0`: `‖y*‖₁ ≤ (f0(x̄) − min f0) / min_i(−h_i(x̄))`.
pub fn slater_dual_bound<T: Real>(
    f0_at_slater: T,
    f0_min: T,
    h_at_slater: &[T],
) -> crate::Result<T> {
    let gamma = h_at_slater
        .iter()
        .fold(T::infinity(), |a, &hi| a.min(-hi));
    if !(gamma > T::zero()) {
        return Err(crate::Error::domain(
            "Slater point must satisfy h(x) < 0 strictly",
        ));
    }
    Ok((f0_at_slater - f0_min) / gamma)
}

/// Weak-duality diagnostic: `f(x̄) + φ(ȳ) ≥ 0` must hold on feasible
/// programs; exposed for checks.
pub fn weak_duality_gap<T: Real>(prog: &Arc<ConstrainedProgram<T>>, x: &[T], y: &[T]) -> T {
    let dual = DualObjective { prog: prog.clone() };
    dual.value(x) + prog.phi.value(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::FnObjective;

    /// φ(y) = ½‖y‖², A = I, b = 0: y(x) = −x, f(x) = ½‖x‖², ∇f(x) = x.
    fn identity_program(n: usize) -> Arc<ConstrainedProgram<f64>> {
        Arc::new(ConstrainedProgram {
            phi: Arc::new(FnObjective::new(
                |y: &[f64]| 0.5 * dot(y, y),
                |y: &[f64]| y.to_vec(),
            )),
            a: Mat::identity(n),
            b: vec![0.0; n],
            set: FeasibleSet::FreeSpace,
            inner: Arc::new(|x: &[f64]| x.iter().map(|&v| -v).collect()),
            mu: 1.0,
            norm: StrongConvexityNorm::L2,
        })
    }

    #[test]
    fn dual_oracle_of_identity_program() {
        let prog = identity_program(3);
        let oracle = dual_oracle(prog);
        let (f, g) = oracle.eval(&[1.0, 2.0, -1.0]);
        assert!((f - 3.0).abs() < 1e-14); // ½‖x‖² = ½·6
        assert_eq!(g, vec![1.0, 2.0, -1.0]); // ∇f(x) = x
    }

    #[test]
    fn certificate_hand_example() {
        // N = 1, f = ½x², x0 = 1, ball [−2, 2]: certificate = 3.
        let oracle = Oracle::new(FnObjective::new(
            |x: &[f64]| 0.5 * x[0] * x[0],
            |x: &[f64]| vec![x[0]],
        ));
        let mut history = History::default();
        history.push(&[1.0], 0.5, &[1.0], 1.0);
        let ball = FeasibleSet::Box {
            lo: vec![-2.0],
            hi: vec![2.0],
        };
        let cert = certificate(&oracle, &history, &ball).unwrap();
        assert!((cert.gap_value - 3.0).abs() < 1e-14, "got {}", cert.gap_value);
    }

    #[test]
    fn certificate_vanishes_at_optimum() {
        let oracle = Oracle::new(FnObjective::new(
            |x: &[f64]| 0.5 * dot(x, x),
            |x: &[f64]| x.to_vec(),
        ));
        let mut history = History::default();
        history.push(&[0.0, 0.0], 0.0, &[0.0, 0.0], 1.0);
        let ball = FeasibleSet::EuclideanBall {
            center: vec![0.0, 0.0],
            radius: 1.0,
        };
        let cert = certificate(&oracle, &history, &ball).unwrap();
        assert!(cert.gap_value.abs() < 1e-10);
    }

    #[test]
    fn trivial_program_dual_size_bound_is_zero() {
        let prog = identity_program(2);
        let bound = dual_size_bound(&prog, &[0.0, 0.0]).unwrap();
        assert!(bound.abs() < 1e-14);
    }

    #[test]
    fn slater_examples() {
        // f0(x) = x on [0,1], h = x − ½, Slater point 0: bound = 0.
        let b: f64 = slater_dual_bound(0.0, 0.0, &[-0.5]).unwrap();
        assert!(b.abs() < 1e-15);
        // f0(x) = −x on [0,1]: bound = 2, true multiplier 1 ≤ 2.
        let b: f64 = slater_dual_bound(0.0, -1.0, &[-0.5]).unwrap();
        assert!((b - 2.0).abs() < 1e-15);
        assert!(slater_dual_bound(0.0, 0.0, &[0.0]).is_err());
    }

    #[test]
    fn regularize_recovers_min_norm_least_squares() {
        // min ½‖Ax − b‖² + (μ/2)‖x‖² tends to A⁺b as μ → 0.
        let a = Mat::from_rows(vec![vec![1.0, 1.0]]); // rank-1
        let b = vec![2.0];
        let base = {
            let (a, b) = (a.clone(), b.clone());
            Oracle::new(FnObjective::new(
                {
                    let (a, b) = (a.clone(), b.clone());
                    move |x: &[f64]| {
                        let r = sub(&a.matvec(x), &b);
                        0.5 * dot(&r, &r)
                    }
                },
                move |x: &[f64]| {
                    let r = sub(&a.matvec(x), &b);
                    a.matvec_t(&r)
                },
            ))
        };
        let prox = ProxSetup::euclidean(FeasibleSet::FreeSpace);
        // pseudoinverse solution is (1, 1)
        for mu in [1e-2, 1e-4] {
            let reg = regularize(&base, mu, vec![0.0, 0.0], &prox).unwrap();
            let p = crate::oracle::Problem::unconstrained(reg);
            let t = crate::methods::gradient_descent(
                &p,
                &[0.0, 0.0],
                &crate::methods::StepRule::FixedInverseL(2.0 + mu),
                20_000,
                None,
            )
            .unwrap();
            let x = t.final_point();
            assert!((x[0] - 1.0).abs() < 10.0 * mu + 1e-6, "mu={mu}: {x:?}");
            assert!((x[1] - 1.0).abs() < 10.0 * mu + 1e-6);
        }
    }

    #[test]
    fn regularize_mu_to_zero_recovers_values() {
        let base = Oracle::new(FnObjective::new(
            |x: &[f64]| x[0].abs(),
            |x: &[f64]| vec![if x[0] >= 0.0 { 1.0 } else { -1.0 }],
        ));
        let prox = ProxSetup::euclidean(FeasibleSet::FreeSpace);
        let reg = regularize(&base, 1e-12, vec![0.0], &prox).unwrap();
        for t in [-1.0, 0.3, 2.0] {
            assert!((reg.probe_value(&[t]) - t.abs()).abs() < 1e-11);
        }
    }
}
