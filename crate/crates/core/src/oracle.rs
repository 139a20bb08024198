//! First-order oracles, problems and the finite-difference gradient check.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use crate::scalar::{real, Real};
use crate::sets::FeasibleSet;

/// Deterministic value/subgradient callback. Implementations must return the
/// same output for the same input; nonsmooth functions document their
/// subgradient tie-break.
pub trait Objective<T: Real>: Send + Sync {
    fn value(&self, x: &[T]) -> T;
    fn subgradient(&self, x: &[T]) -> Vec<T>;

    fn value_subgradient(&self, x: &[T]) -> (T, Vec<T>) {
        (self.value(x), self.subgradient(x))
    }
}

/// Closure-backed objective for tests and small definitions.
pub struct FnObjective<T, FV, FG> {
    value: FV,
    grad: FG,
    _marker: std::marker::PhantomData<T>,
}

impl<T, FV, FG> FnObjective<T, FV, FG>
where
    FV: Fn(&[T]) -> T,
    FG: Fn(&[T]) -> Vec<T>,
{
    pub fn new(value: FV, grad: FG) -> Self {
        FnObjective {
            value,
            grad,
            _marker: std::marker::PhantomData,
        }
    }
}

impl<T, FV, FG> Objective<T> for FnObjective<T, FV, FG>
where
    T: Real,
    FV: Fn(&[T]) -> T + Send + Sync,
    FG: Fn(&[T]) -> Vec<T> + Send + Sync,
{
    fn value(&self, x: &[T]) -> T {
        (self.value)(x)
    }
    fn subgradient(&self, x: &[T]) -> Vec<T> {
        (self.grad)(x)
    }
}

/// Shared, counted handle to an objective. Counters are atomics so a problem
/// can be shared read-only across concurrent runs; each run diffs the
/// counters around its own execution.
#[derive(Clone)]
pub struct Oracle<T: Real> {
    inner: Arc<dyn Objective<T>>,
    grad_calls: Arc<AtomicU64>,
    value_calls: Arc<AtomicU64>,
}

impl<T: Real> Oracle<T> {
    pub fn new(obj: impl Objective<T> + 'static) -> Self {
        Oracle {
            inner: Arc::new(obj),
            grad_calls: Arc::new(AtomicU64::new(0)),
            value_calls: Arc::new(AtomicU64::new(0)),
        }
    }

    pub fn from_arc(obj: Arc<dyn Objective<T>>) -> Self {
        Oracle {
            inner: obj,
            grad_calls: Arc::new(AtomicU64::new(0)),
            value_calls: Arc::new(AtomicU64::new(0)),
        }
    }

    pub fn value(&self, x: &[T]) -> T {
        self.value_calls.fetch_add(1, Ordering::Relaxed);
        self.inner.value(x)
    }

    pub fn grad(&self, x: &[T]) -> Vec<T> {
        self.grad_calls.fetch_add(1, Ordering::Relaxed);
        self.inner.subgradient(x)
    }

    pub fn eval(&self, x: &[T]) -> (T, Vec<T>) {
        self.grad_calls.fetch_add(1, Ordering::Relaxed);
        self.value_calls.fetch_add(1, Ordering::Relaxed);
        self.inner.value_subgradient(x)
    }

    /// Uncounted evaluation for diagnostics (plot columns, test assertions)
    /// so instrumentation does not perturb oracle-call accounting.
    pub fn probe_value(&self, x: &[T]) -> T {
        self.inner.value(x)
    }

    pub fn probe_grad(&self, x: &[T]) -> Vec<T> {
        self.inner.subgradient(x)
    }

    pub fn grad_calls(&self) -> u64 {
        self.grad_calls.load(Ordering::Relaxed)
    }

    pub fn value_calls(&self) -> u64 {
        self.value_calls.load(Ordering::Relaxed)
    }

    pub fn objective(&self) -> Arc<dyn Objective<T>> {
        self.inner.clone()
    }
}

/// Known smoothness/convexity constants attached to a problem.
#[derive(Debug, Clone, Default)]
pub struct ProblemConstants<T> {
    /// Lipschitz constant of the gradient (ν = 1 Hölder constant).
    pub l1: Option<T>,
    /// Bound on subgradient norms (ν = 0 Hölder constant).
    pub l0: Option<T>,
    /// Hölder constant for an intermediate exponent, as `(nu, L_nu)`.
    pub holder: Option<(T, T)>,
    /// Strong convexity modulus.
    pub mu: Option<T>,
    /// Distance from the canonical start to the optimum.
    pub radius: Option<T>,
}

/// A convex minimization task over a simple set.
#[derive(Clone)]
pub struct Problem<T: Real> {
    pub oracle: Oracle<T>,
    pub set: FeasibleSet<T>,
    pub known_optimum: Option<(Vec<T>, T)>,
    pub constants: ProblemConstants<T>,
}

impl<T: Real> Problem<T> {
    pub fn unconstrained(oracle: Oracle<T>) -> Self {
        Problem {
            oracle,
            set: FeasibleSet::FreeSpace,
            known_optimum: None,
            constants: ProblemConstants::default(),
        }
    }

    pub fn optimum_value(&self) -> Option<T> {
        self.known_optimum.as_ref().map(|(_, f)| *f)
    }

    pub fn gap(&self, f_value: T) -> Option<T> {
        self.optimum_value().map(|f_star| f_value - f_star)
    }
}

/// Max over coordinates of the relative disagreement between the oracle's
/// partial derivatives and central differences with spacing `h`; the central
/// difference (the trusted side) normalizes the ratio.
pub fn finite_diff_check<T: Real>(oracle: &Oracle<T>, x: &[T], h: T) -> crate::Result<T> {
    if !(h > T::zero()) {
        return Err(crate::Error::domain("finite differences need h > 0"));
    }
    let g = oracle.grad(x);
    assert_eq!(g.len(), x.len(), "oracle returned wrong gradient dimension");
    let mut worst = T::zero();
    let mut xp = x.to_vec();
    for i in 0..x.len() {
        xp[i] = x[i] + h;
        let fp = oracle.value(&xp);
        xp[i] = x[i] - h;
        let fm = oracle.value(&xp);
        xp[i] = x[i];
        if !fp.is_finite() || !fm.is_finite() {
            return Err(crate::Error::domain(
                "oracle returned non-finite values near the probe point",
            ));
        }
        let diff = (fp - fm) / (real::<T>(2.0) * h);
        let rel = (diff - g[i]).abs() / (T::one() + diff.abs());
        worst = worst.max(rel);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half_sq_norm_oracle() -> Oracle<f64> {
        Oracle::new(FnObjective::new(
            |x: &[f64]| 0.5 * crate::linalg::dot(x, x),
            |x: &[f64]| x.to_vec(),
        ))
    }

    #[test]
    fn finite_diff_exact_for_quadratic() {
        let oracle = half_sq_norm_oracle();
        let err = finite_diff_check(&oracle, &[1.0, 2.0], 1e-5).unwrap();
        assert!(err < 1e-8, "quadratic gradient is linear, got {err}");
    }

    #[test]
    fn finite_diff_flags_wrong_gradient() {
        let bad = Oracle::new(FnObjective::new(
            |x: &[f64]| 0.5 * crate::linalg::dot(x, x),
            |x: &[f64]| x.iter().map(|v| 2.0 * v).collect(),
        ));
        let err = finite_diff_check(&bad, &[1.0, 0.0], 1e-6).unwrap();
        // first coordinate: central diff 1, reported 2 -> |1-2|/(1+1) = 0.5
        assert!((err - 0.5).abs() < 1e-6, "got {err}");
    }

    #[test]
    fn call_counters_track_evals() {
        let oracle = half_sq_norm_oracle();
        let _ = oracle.eval(&[1.0]);
        let _ = oracle.value(&[1.0]);
        let _ = oracle.grad(&[1.0]);
        let _ = oracle.probe_value(&[1.0]);
        assert_eq!(oracle.grad_calls(), 2);
        assert_eq!(oracle.value_calls(), 2);
    }

    #[test]
    fn oracle_is_deterministic() {
        let oracle = half_sq_norm_oracle();
        let (f1, g1) = oracle.eval(&[0.3, -0.7]);
        let (f2, g2) = oracle.eval(&[0.3, -0.7]);
        assert!(f1 == f2 && g1 == g2, "bit-identical results expected");
    }
}
