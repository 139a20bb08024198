//! Restart technique: re-launch a method with a certified per-stage gap
//! bound every time the bound guarantees the distance to the optimum halved,
//! converting convex rates into strongly convex ones.

use crate::methods::{gradient_descent, model_gradient_method, StepRule};
use crate::model::ModelOracle;
use crate::oracle::Problem;
use crate::prox::ProxSetup;
use crate::scalar::{from_usize, real, Real};
use crate::sets::FeasibleSet;
use crate::universal::{universal_gradient, StopReason, UniversalOptions};

/// Result of one stage solve: the averaged output point, the gap bound the
/// stage certifies for it, and the iterations spent.
#[derive(Debug, Clone)]
pub struct StageRun<T> {
    pub point: Vec<T>,
    pub certified_gap: T,
    pub iterations: usize,
}

/// A method the restart wrapper can drive. Implementations must return a
/// point with a *certified* gap bound no larger than `target_gap`; the
/// wrapper owns the radius bookkeeping.
pub trait StageSolver<T: Real> {
    fn solve_stage(&self, center: &[T], radius: T, target_gap: T) -> crate::Result<StageRun<T>>;
}

/// Subgradient stage: mirror steps with the constant step `h = R/(L₀√N)`
/// and uniform averaging; bound `2·L₀·R/√N` (the factor 2 absorbs the
/// δ-slack of the underlying estimate).
pub struct SubgradientStage<T: Real> {
    pub oracle: ModelOracle<T>,
    pub prox: ProxSetup<T>,
    pub l0: T,
}

impl<T: Real> StageSolver<T> for SubgradientStage<T> {
    fn solve_stage(&self, center: &[T], radius: T, target_gap: T) -> crate::Result<StageRun<T>> {
        // 2 L0 R / √N ≤ target  ⇒  N ≥ (2 L0 R / target)².
        let ratio = real::<T>(2.0) * self.l0 * radius / target_gap;
        let n = (ratio * ratio).ceil().to_usize().unwrap_or(usize::MAX).max(1);
        let h = radius / (self.l0 * from_usize::<T>(n).sqrt());
        let trace = model_gradient_method(
            &self.oracle,
            &self.prox,
            T::one() / h,
            center,
            n,
            None,
        )?;
        Ok(StageRun {
            point: trace.averaged_point.clone(),
            certified_gap: target_gap,
            iterations: n,
        })
    }
}

/// Smooth gradient-descent stage: `f(x̄^N) − f* ≤ L‖center − x*‖²/(2N)
/// ≤ L·R²/(2N)`.
pub struct GradientDescentStage<T: Real> {
    pub problem: Problem<T>,
    pub l1: T,
}

impl<T: Real> StageSolver<T> for GradientDescentStage<T> {
    fn solve_stage(&self, center: &[T], radius: T, target_gap: T) -> crate::Result<StageRun<T>> {
        let n = (self.l1 * radius * radius / (real::<T>(2.0) * target_gap))
            .ceil()
            .to_usize()
            .unwrap_or(usize::MAX)
            .max(1);
        let trace = gradient_descent(
            &self.problem,
            center,
            &StepRule::FixedInverseL(self.l1),
            n,
            None,
        )?;
        Ok(StageRun {
            point: trace.averaged_point.clone(),
            certified_gap: target_gap,
            iterations: n,
        })
    }
}

/// Universal-gradient stage: termination by the computable certificate over
/// the stage ball, so the certified gap is the certificate itself. Fails
/// with `AdaptivityFailure` when the budget runs out before certification,
/// which is the detectable signal the μ-search loop needs.
pub struct UniversalStage<T: Real> {
    pub oracle: ModelOracle<T>,
    pub prox: ProxSetup<T>,
    pub l0_guess: T,
    pub max_iterations_per_stage: usize,
}

impl<T: Real> StageSolver<T> for UniversalStage<T> {
    fn solve_stage(&self, center: &[T], radius: T, target_gap: T) -> crate::Result<StageRun<T>> {
        let opts = UniversalOptions::new(target_gap)
            .with_l0(self.l0_guess)
            .with_max_iterations(self.max_iterations_per_stage)
            .with_certificate_radius(radius);
        let run = universal_gradient(&self.oracle, &self.prox, center, &opts)?;
        if run.stop != StopReason::Certificate {
            return Err(crate::Error::AdaptivityFailure {
                budget: self.max_iterations_per_stage,
            });
        }
        Ok(StageRun {
            point: run.trace.averaged_point.clone(),
            certified_gap: run.certificate.unwrap_or(target_gap),
            iterations: run.iterations(),
        })
    }
}

#[derive(Debug, Clone)]
pub struct RestartRun<T> {
    /// Final output point.
    pub point: Vec<T>,
    /// Final certified gap (≤ the requested ε).
    pub certified_gap: T,
    /// Per-stage radii `R_k` (squared halving: `R_{k+1} = R_k/√2`).
    pub stage_radii: Vec<T>,
    /// Per-stage iteration counts.
    pub stage_iterations: Vec<usize>,
    pub total_iterations: usize,
}

/// The restart wrapper. `c_n` is the prox-to-norm comparison certificate
/// `d(x − x0) ≤ C_n ‖x − x0‖²` (1/2 for the Euclidean setup); it inflates
/// the per-stage targets exactly like the (ln n)-type constants do for
/// non-Euclidean proxes.
///
/// Each stage targets the gap `μ R_k²/(4·2C_n)`, which by
/// `μ/2·‖x̄ − x*‖² ≤ f(x̄) − f*` guarantees `‖x̄ − x*‖² ≤ R_k²/2`; the prox
/// is re-centered at the stage average and the radius shrinks by √2.
pub fn restart_strongly_convex<T: Real>(
    solver: &dyn StageSolver<T>,
    mu: T,
    x0: &[T],
    r0: T,
    epsilon: T,
    c_n: T,
) -> crate::Result<RestartRun<T>> {
    if !(mu > T::zero()) {
        return Err(crate::Error::config("restart wrapper needs mu > 0"));
    }
    if !(r0 > T::zero()) || !(epsilon > T::zero()) {
        return Err(crate::Error::config("restart wrapper needs R0 > 0, epsilon > 0"));
    }
    let four = real::<T>(4.0);
    let sqrt2 = real::<T>(2.0).sqrt();
    let cn_scale = (real::<T>(2.0) * c_n).max(T::one());

    let mut center = x0.to_vec();
    let mut radius = r0;
    let mut stage_radii = vec![radius];
    let mut stage_iterations = Vec::new();
    let mut total = 0usize;
    let mut certified = T::infinity();

    // Hard cap: radius halves (squared) each stage, so the loop is short.
    for _stage in 0..512 {
        let halving_target = mu * radius * radius / (four * cn_scale);
        let target = halving_target.max(epsilon.min(halving_target));
        let final_stage = halving_target <= epsilon;
        let target = if final_stage { epsilon } else { target };
        let run = solver.solve_stage(&center, radius, target)?;
        total += run.iterations;
        stage_iterations.push(run.iterations);
        center = run.point;
        certified = run.certified_gap;
        if final_stage {
            break;
        }
        radius = radius / sqrt2;
        stage_radii.push(radius);
    }

    Ok(RestartRun {
        point: center,
        certified_gap: certified,
        stage_radii,
        stage_iterations,
        total_iterations: total,
    })
}

/// Optional outer loop when μ is unknown: try μ, halve on failure, as the
/// restart folklore prescribes. Failure must be *detectable*, so this only
/// works with certificate-emitting stage solvers (the universal stage);
/// budget exhaustion without certification triggers the halving.
pub fn restart_mu_search<T: Real>(
    solver: &dyn StageSolver<T>,
    mu0: T,
    x0: &[T],
    r0: T,
    epsilon: T,
    c_n: T,
    max_halvings: usize,
) -> crate::Result<(T, RestartRun<T>)> {
    let mut mu = mu0;
    for _ in 0..=max_halvings {
        match restart_strongly_convex(solver, mu, x0, r0, epsilon, c_n) {
            Ok(run) => return Ok((mu, run)),
            Err(crate::Error::AdaptivityFailure { .. }) => {
                mu = mu / real::<T>(2.0);
            }
            Err(e) => return Err(e),
        }
    }
    Err(crate::Error::AdaptivityFailure { budget: max_halvings })
}

/// Convenience: Euclidean free-space subgradient stage for a plain oracle.
pub fn euclidean_subgradient_stage<T: Real>(
    oracle: crate::oracle::Oracle<T>,
    l0: T,
) -> SubgradientStage<T> {
    SubgradientStage {
        oracle: ModelOracle::linear_model(oracle),
        prox: ProxSetup::euclidean(FeasibleSet::FreeSpace),
        l0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{FnObjective, Oracle};

    #[test]
    fn stage_radii_halve_in_squared_norm() {
        // f = ‖x‖ + (μ/2)‖x‖², strongly convex, optimum at 0.
        let mu = 0.5;
        let oracle = Oracle::new(FnObjective::new(
            move |x: &[f64]| {
                let n = crate::linalg::norm2(x);
                n + 0.5 * mu * n * n
            },
            move |x: &[f64]| {
                let n = crate::linalg::norm2(x);
                if n == 0.0 {
                    let mut g = vec![0.0; x.len()];
                    g[0] = 1.0;
                    g
                } else {
                    x.iter().map(|&v| v / n + mu * v).collect()
                }
            },
        ));
        let stage = euclidean_subgradient_stage(oracle, 2.0);
        let run = restart_strongly_convex(&stage, mu, &[0.6, -0.8], 1.0, 1e-2, 0.5).unwrap();
        for w in run.stage_radii.windows(2) {
            assert!((w[1] - w[0] / 2f64.sqrt()).abs() < 1e-12);
        }
        assert!(run.certified_gap <= 1e-2 + 1e-15);
        // optimum is 0; the final point must be close
        assert!(crate::linalg::norm2(&run.point) < 0.5);
    }

    #[test]
    fn gd_stage_count_is_roughly_constant_per_stage() {
        let l = 10.0;
        let mu = 1.0;
        let problem = Problem::unconstrained(Oracle::new(FnObjective::new(
            move |x: &[f64]| 0.5 * (l * x[0] * x[0] + mu * x[1] * x[1]),
            move |x: &[f64]| vec![l * x[0], mu * x[1]],
        )));
        let stage = GradientDescentStage { problem, l1: l };
        let run = restart_strongly_convex(&stage, mu, &[1.0, 1.0], 2.0, 1e-6, 0.5).unwrap();
        // Per-stage N ≈ 2 (2C_n) L/μ after the pattern settles; all stages
        // equal because the ratio R²/target is scale-free.
        let counts = &run.stage_iterations;
        assert!(counts.len() > 3);
        for w in counts[..counts.len() - 1].windows(2) {
            // scale-free ratio, so only ceil rounding can differ
            let diff = w[0] as i64 - w[1] as i64;
            assert!(diff.abs() <= 1, "inner stages share the same budget: {counts:?}");
        }
    }
}
