//! Plain gradient descent `x^{k+1} = x^k − h ∇f(x^k)` and its step rules.

use crate::linalg::{all_finite, axpy, dot};
use crate::oracle::Problem;
use crate::scalar::{from_usize, Real};
use crate::trace::{Trace, TraceBuilder};

/// How the step size is chosen.
#[derive(Clone)]
pub enum StepRule<T> {
    /// Constant `h = 1/L`.
    FixedInverseL(T),
    /// Explicit per-iteration steps `h_k` (cycled if shorter than the run).
    Sequence(Vec<T>),
    /// Exact line search, closed form on quadratics:
    /// `h = ‖g‖² / ⟨A g, g⟩` obtained from two oracle gradients.
    ExactQuadraticLineSearch,
}

impl<T: Real> StepRule<T> {
    pub fn validate(&self) -> crate::Result<()> {
        let ok = match self {
            StepRule::FixedInverseL(l) => *l > T::zero(),
            StepRule::Sequence(hs) => !hs.is_empty() && hs.iter().all(|h| *h > T::zero()),
            StepRule::ExactQuadraticLineSearch => true,
        };
        if ok {
            Ok(())
        } else {
            Err(crate::Error::config("step sizes must be positive"))
        }
    }
}

/// Linearization history for accuracy certificates: the points where the
/// oracle was called, with values, (sub)gradients and averaging weights.
#[derive(Debug, Clone, Default)]
pub struct History<T> {
    pub points: Vec<Vec<T>>,
    pub values: Vec<T>,
    pub grads: Vec<Vec<T>>,
    pub weights: Vec<T>,
}

impl<T: Real> History<T> {
    pub fn push(&mut self, x: &[T], f: T, g: &[T], w: T) {
        self.points.push(x.to_vec());
        self.values.push(f);
        self.grads.push(g.to_vec());
        self.weights.push(w);
    }
}

/// Gradient descent for `N` iterations. The trace averages `x^1..x^N` with
/// uniform weights; `history`, when given, records the linearizations at
/// `x^0..x^{N-1}` for certificate computations.
pub fn gradient_descent<T: Real>(
    problem: &Problem<T>,
    x0: &[T],
    step: &StepRule<T>,
    iterations: usize,
    mut history: Option<&mut History<T>>,
) -> crate::Result<Trace<T>> {
    step.validate()?;
    assert!(all_finite(x0), "start point must be finite");
    let oracle = &problem.oracle;
    let grad0 = oracle.grad_calls();
    let val0 = oracle.value_calls();

    let mut x = x0.to_vec();
    let (mut f, mut g) = oracle.eval(&x);
    let l_of = |h: T| T::one() / h;
    let mut builder = TraceBuilder::new(
        x.clone(),
        f,
        match step {
            StepRule::FixedInverseL(l) => *l,
            StepRule::Sequence(hs) => T::one() / hs[0],
            StepRule::ExactQuadraticLineSearch => T::zero(),
        },
    );

    for k in 0..iterations {
        let h = match step {
            StepRule::FixedInverseL(l) => T::one() / *l,
            StepRule::Sequence(hs) => hs[k % hs.len()],
            StepRule::ExactQuadraticLineSearch => exact_quadratic_step(problem, &x, &g)?,
        };
        if let Some(hist) = history.as_deref_mut() {
            hist.push(&x, f, &g, T::one());
        }
        let next = axpy(&x, -h, &g);
        if !all_finite(&next) {
            return Err(crate::Error::Divergence { step: k });
        }
        let (fn_, gn) = oracle.eval(&next);
        if !fn_.is_finite() || !all_finite(&gn) {
            return Err(crate::Error::Divergence { step: k });
        }
        x = next;
        f = fn_;
        g = gn;
        builder.push(x.clone(), f, l_of(h));
        builder.mark_calls(oracle.grad_calls() - grad0, oracle.value_calls() - val0);
    }

    Ok(builder.finish(
        oracle.grad_calls() - grad0,
        oracle.value_calls() - val0,
    ))
}

/// Closed-form exact step on a quadratic: `h = ‖g‖²/⟨Ag, g⟩` where `Ag` is
/// recovered oracle-only from the affine gradient map.
fn exact_quadratic_step<T: Real>(
    problem: &Problem<T>,
    x: &[T],
    g: &[T],
) -> crate::Result<T> {
    let shifted = crate::linalg::add(x, g);
    let g_shift = problem.oracle.grad(&shifted);
    let ag = crate::linalg::sub(&g_shift, g);
    let denom = dot(&ag, g);
    let num = dot(g, g);
    if denom <= T::zero() {
        return Err(crate::Error::Breakdown(
            "exact line search found nonpositive curvature".into(),
        ));
    }
    Ok(num / denom)
}

/// The nonsmooth step `h = R/(L₀ √N)` used by subgradient runs.
pub fn subgradient_descent_step<T: Real>(radius: T, l0: T, iterations: usize) -> T {
    radius / (l0 * from_usize::<T>(iterations).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{FnObjective, Oracle};

    fn scaled_quadratic(l: f64) -> Problem<f64> {
        Problem::unconstrained(Oracle::new(FnObjective::new(
            move |x: &[f64]| 0.5 * l * x[0] * x[0],
            move |x: &[f64]| vec![l * x[0]],
        )))
    }

    #[test]
    fn one_exact_step_on_scaled_parabola() {
        for l in [0.5, 1.0, 7.0] {
            let p = scaled_quadratic(l);
            let t = gradient_descent(&p, &[1.0], &StepRule::FixedInverseL(l), 1, None).unwrap();
            assert!(t.final_point()[0].abs() < 1e-15, "L={l}");
        }
    }

    #[test]
    fn hand_applied_step_on_diagonal_quadratic() {
        let p = Problem::unconstrained(Oracle::new(FnObjective::new(
            |x: &[f64]| 0.5 * (x[0] * x[0] + 10.0 * x[1] * x[1]),
            |x: &[f64]| vec![x[0], 10.0 * x[1]],
        )));
        let t = gradient_descent(&p, &[1.0, 1.0], &StepRule::FixedInverseL(10.0), 1, None).unwrap();
        assert!((t.final_point()[0] - 0.9).abs() < 1e-15);
        assert!(t.final_point()[1].abs() < 1e-15);
    }

    #[test]
    fn scaling_objective_and_l_leaves_iterates_invariant() {
        let p1 = scaled_quadratic(1.0);
        let t1 = gradient_descent(&p1, &[1.0], &StepRule::FixedInverseL(1.0), 5, None).unwrap();
        let c = 13.0;
        let p2 = scaled_quadratic(c);
        let t2 = gradient_descent(&p2, &[1.0], &StepRule::FixedInverseL(c), 5, None).unwrap();
        for (a, b) in t1.iterates.iter().zip(&t2.iterates) {
            assert!((a[0] - b[0]).abs() < 1e-14);
        }
    }

    #[test]
    fn divergence_is_reported_with_step_index() {
        // Understating L by 4x on a stiff quadratic makes GD blow up.
        let p = scaled_quadratic(100.0);
        let err = gradient_descent(&p, &[1.0], &StepRule::FixedInverseL(1.0), 400, None)
            .expect_err("should diverge");
        match err {
            crate::Error::Divergence { step } => assert!(step > 0),
            other => panic!("expected divergence, got {other}"),
        }
    }

    #[test]
    fn exact_line_search_on_quadratic_is_one_step_in_1d() {
        let p = scaled_quadratic(3.0);
        let t = gradient_descent(
            &p,
            &[2.0],
            &StepRule::ExactQuadraticLineSearch,
            1,
            None,
        )
        .unwrap();
        assert!(t.final_point()[0].abs() < 1e-14);
    }
}
