//! Named convergence-bound checks, evaluated after a run against the
//! constants the problem generator attached.

use fo_core::linalg::sub;
use fo_core::prox::{bregman, ProxSetup};
use fo_core::sets::FeasibleSet;

use crate::config::ConfigError;
use crate::registry::{BuiltProblem, MinProblem, RunArtifacts};

/// Result of one named bound check.
#[derive(Debug, Clone)]
pub struct BoundCheck {
    pub name: String,
    pub measured: f64,
    pub predicted: f64,
    pub pass: bool,
}

impl BoundCheck {
    fn upper(name: &str, measured: f64, predicted: f64, slack: f64) -> Self {
        BoundCheck {
            name: name.to_string(),
            measured,
            predicted,
            pass: measured <= predicted + slack,
        }
    }

    fn lower(name: &str, measured: f64, predicted: f64, slack: f64) -> Self {
        BoundCheck {
            name: name.to_string(),
            measured,
            predicted,
            pass: measured >= predicted - slack,
        }
    }
}

pub fn evaluate(
    id: &str,
    built: &BuiltProblem,
    artifacts: &RunArtifacts,
) -> Result<BoundCheck, ConfigError> {
    match id {
        "ex1.3-lower" => ex13_lower(as_min(built, id)?, artifacts),
        "descent-1.7" => descent_certificate(as_min(built, id)?, artifacts),
        "rate-1.16" => rate_116(as_min(built, id)?, artifacts),
        "rate-2.22" => rate_222(as_min(built, id)?, artifacts),
        "thm3.1" => thm31(as_min(built, id)?, artifacts),
        "thm5.1" => thm51(as_min(built, id)?, artifacts),
        "eq2.39" => eq239(as_min(built, id)?, artifacts),
        "thm4.1" => thm41(built, artifacts),
        other => Err(ConfigError(format!(
            "field 'verify': unknown bound check '{other}'"
        ))),
    }
}

fn as_min<'a>(built: &'a BuiltProblem, id: &str) -> Result<&'a MinProblem, ConfigError> {
    match built {
        BuiltProblem::Min(m) => Ok(m),
        _ => Err(ConfigError(format!(
            "field 'verify': check '{id}' needs a minimization problem"
        ))),
    }
}

fn need_trace<'a>(
    artifacts: &'a RunArtifacts,
    id: &str,
) -> Result<&'a fo_core::Trace64, ConfigError> {
    artifacts
        .trace
        .as_ref()
        .ok_or_else(|| ConfigError(format!("check '{id}': method produced no iterate trace")))
}

fn need_optimum(m: &MinProblem, id: &str) -> Result<f64, ConfigError> {
    m.problem
        .known_optimum
        .as_ref()
        .map(|(_, f)| *f)
        .ok_or_else(|| ConfigError(format!("check '{id}': problem has no known optimum")))
}

/// Span lower bound on the worst-case smooth instance.
fn ex13_lower(m: &MinProblem, artifacts: &RunArtifacts) -> Result<BoundCheck, ConfigError> {
    let lower = m
        .attached("lower_bound_gap")
        .ok_or_else(|| ConfigError("check 'ex1.3-lower': problem attaches no lower bound".into()))?;
    let f_star = need_optimum(m, "ex1.3-lower")?;
    let trace = need_trace(artifacts, "ex1.3-lower")?;
    let best = trace.values.iter().cloned().fold(f64::INFINITY, f64::min) - f_star;
    Ok(BoundCheck::lower("ex1.3-lower", best, lower, 1e-12))
}

/// (1.7) per-step descent with the step constant actually used.
fn descent_certificate(m: &MinProblem, artifacts: &RunArtifacts) -> Result<BoundCheck, ConfigError> {
    let trace = need_trace(artifacts, "descent-1.7")?;
    let mut worst = f64::NEG_INFINITY;
    for k in 0..trace.iterates.len() - 1 {
        let g = m.problem.oracle.probe_grad(&trace.iterates[k]);
        let l = trace.step_constants[k + 1];
        let need = fo_core::linalg::dot(&g, &g) / (2.0 * l);
        let drop = trace.values[k] - trace.values[k + 1];
        worst = worst.max(need - drop);
    }
    Ok(BoundCheck::upper("descent-1.7", worst, 0.0, 1e-10))
}

/// Strongly convex exponential rate.
fn rate_116(m: &MinProblem, artifacts: &RunArtifacts) -> Result<BoundCheck, ConfigError> {
    let f_star = need_optimum(m, "rate-1.16")?;
    let mu = m
        .problem
        .constants
        .mu
        .ok_or_else(|| ConfigError("check 'rate-1.16': problem declares no mu".into()))?;
    let l = m
        .problem
        .constants
        .l1
        .ok_or_else(|| ConfigError("check 'rate-1.16': problem declares no L".into()))?;
    let trace = need_trace(artifacts, "rate-1.16")?;
    let init = trace.values[0] - f_star;
    let mut worst_ratio = f64::NEG_INFINITY;
    for (k, v) in trace.values.iter().enumerate() {
        let bound = (-mu * k as f64 / l).exp() * init + 1e-10;
        worst_ratio = worst_ratio.max((v - f_star) - bound);
    }
    Ok(BoundCheck::upper("rate-1.16", worst_ratio, 0.0, 0.0))
}

/// Convex averaged rate with the Euclidean prox radius.
fn rate_222(m: &MinProblem, artifacts: &RunArtifacts) -> Result<BoundCheck, ConfigError> {
    let f_star = need_optimum(m, "rate-2.22")?;
    let l = m
        .problem
        .constants
        .l1
        .ok_or_else(|| ConfigError("check 'rate-2.22': problem declares no L".into()))?;
    let trace = need_trace(artifacts, "rate-2.22")?;
    let x_star = &m.problem.known_optimum.as_ref().unwrap().0;
    let n = trace.iterates.len() - 1;
    let r2 = {
        let d = sub(x_star, &trace.iterates[0]);
        fo_core::linalg::dot(&d, &d)
    };
    let f_avg = m.problem.oracle.probe_value(&trace.averaged_point);
    let bound = l * r2 / (2.0 * n as f64);
    Ok(BoundCheck::upper("rate-2.22", f_avg - f_star, bound, 1e-10))
}

/// Model-method averaged rate with `R² = V(x*, x⁰)`.
fn thm31(m: &MinProblem, artifacts: &RunArtifacts) -> Result<BoundCheck, ConfigError> {
    let f_star = need_optimum(m, "thm3.1")?;
    let l = m
        .problem
        .constants
        .l1
        .ok_or_else(|| ConfigError("check 'thm3.1': problem declares no L".into()))?;
    let trace = need_trace(artifacts, "thm3.1")?;
    let x_star = &m.problem.known_optimum.as_ref().unwrap().0;
    let prox = ProxSetup::euclidean(FeasibleSet::FreeSpace);
    let v = bregman(&prox, x_star, &trace.iterates[0]).map_err(|e| ConfigError(e.to_string()))?;
    let n = trace.iterates.len() - 1;
    let f_avg = m.problem.oracle.probe_value(&trace.averaged_point);
    Ok(BoundCheck::upper(
        "thm3.1",
        f_avg - f_star,
        l * v / n as f64,
        1e-10,
    ))
}

/// Universal termination: certificate reached within 2x the (5.2) count.
fn thm51(m: &MinProblem, artifacts: &RunArtifacts) -> Result<BoundCheck, ConfigError> {
    let (accepted, certified) = artifacts
        .universal
        .as_ref()
        .ok_or_else(|| ConfigError("check 'thm5.1': not a universal run".into()))?;
    if !certified {
        return Ok(BoundCheck::upper("thm5.1", f64::INFINITY, 0.0, 0.0));
    }
    let x_star = &m
        .problem
        .known_optimum
        .as_ref()
        .ok_or_else(|| ConfigError("check 'thm5.1': problem has no known optimum".into()))?
        .0;
    let trace = need_trace(artifacts, "thm5.1")?;
    let r_v = {
        let d = sub(x_star, &trace.iterates[0]);
        (0.5 * fo_core::linalg::dot(&d, &d)).sqrt()
    };
    let eps = artifacts.certificate.unwrap_or(1e-2).max(1e-12);
    // infimum over the declared Hölder data
    let mut n_pred = f64::INFINITY;
    if let Some(l1) = m.problem.constants.l1 {
        n_pred = n_pred.min(2.0 * l1 * r_v * r_v / eps);
    }
    if let Some(l0) = m.problem.constants.l0 {
        n_pred = n_pred.min((2.0 * l0 * r_v / eps).powi(2));
    }
    if let Some((nu, l_nu)) = m.problem.constants.holder {
        n_pred = n_pred.min((2.0 * l_nu * r_v.powf(1.0 + nu) / eps).powf(2.0 / (1.0 + nu)));
    }
    if !n_pred.is_finite() {
        return Err(ConfigError("check 'thm5.1': problem declares no Hölder data".into()));
    }
    Ok(BoundCheck::upper(
        "thm5.1",
        accepted.len() as f64,
        2.0 * n_pred,
        0.0,
    ))
}

/// Restart budget on strongly convex nonsmooth problems.
fn eq239(m: &MinProblem, artifacts: &RunArtifacts) -> Result<BoundCheck, ConfigError> {
    let total = artifacts
        .restart_total
        .ok_or_else(|| ConfigError("check 'eq2.39': not a restart run".into()))?;
    let l0 = m
        .problem
        .constants
        .l0
        .ok_or_else(|| ConfigError("check 'eq2.39': problem declares no L0".into()))?;
    let mu = m
        .problem
        .constants
        .mu
        .ok_or_else(|| ConfigError("check 'eq2.39': problem declares no mu".into()))?;
    let eps = artifacts
        .certificate
        .ok_or_else(|| ConfigError("check 'eq2.39': run reports no certified gap".into()))?;
    let budget = 512.0 * l0 * l0 / (mu * eps);
    Ok(BoundCheck::upper("eq2.39", total as f64, budget, 0.0))
}

/// Joint stopping rule of the dual solve.
fn thm41(built: &BuiltProblem, artifacts: &RunArtifacts) -> Result<BoundCheck, ConfigError> {
    let BuiltProblem::Program { .. } = built else {
        return Err(ConfigError("check 'thm4.1': needs a constrained program".into()));
    };
    let (eps, eps_tilde, _iters) = artifacts
        .dual_stats
        .ok_or_else(|| ConfigError("check 'thm4.1': not a dual-solve run".into()))?;
    let Some((gap, feas)) = artifacts.rows.last().map(|r| (r.f_value, r.grad_norm_dual)) else {
        return Err(ConfigError("check 'thm4.1': empty run".into()));
    };
    let measured = (gap / eps).max(feas / eps_tilde);
    Ok(BoundCheck::upper("thm4.1", measured, 1.0, 1e-9))
}

