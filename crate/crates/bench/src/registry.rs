//! Problem and method registries: build zoo instances and drive solvers
//! from declarative specs.

use std::sync::Arc;

use fo_core::linalg::{norm2, sub, Mat};
use fo_core::methods::{
    cg_quadratic, frank_wolfe_simplex, gradient_descent, linear_coupling, model_gradient_method,
    nesterov_momentum, nonlinear_cg, CgVariant, CouplingStep, NcgLineSearch, StepRule,
};
use fo_core::model::ModelOracle;
use fo_core::norms::{dual_norm, NormSpec};
use fo_core::primal_dual::{dual_solve_restore, ConstrainedProgram};
use fo_core::prox::{bregman, ProxSetup};
use fo_core::restart::{restart_strongly_convex, SubgradientStage};
use fo_core::sets::FeasibleSet;
use fo_core::universal::{similar_triangles, universal_gradient, StopReason, UniversalOptions};
use fo_core::vi::{mirror_prox, split_point, universal_mirror_prox, UniversalViOptions};
use fo_core::zoo;
use fo_core::{Problem64, Trace64};

use crate::config::{ConfigError, MethodSpec, Params, ProblemSpec};
use crate::csv::TraceRow;

/// A constructed problem instance, shaped by what the methods can consume.
pub enum BuiltProblem {
    Min(Box<MinProblem>),
    Game(zoo::MatrixGame<f64>),
    Program {
        prog: Arc<ConstrainedProgram<f64>>,
        tag: String,
        reference_point: Option<Vec<f64>>,
    },
}

pub struct MinProblem {
    pub problem: Problem64,
    pub start: Vec<f64>,
    pub tag: String,
    /// Quadratic data for CG / Frank-Wolfe when the family provides it.
    pub quad: Option<(Mat<f64>, Vec<f64>)>,
    /// Reset hook for stateful adversarial oracles.
    pub reset: Option<Arc<dyn Fn() + Send + Sync>>,
    /// Named constants attached by the generator.
    pub attached: Vec<(String, f64)>,
}

impl MinProblem {
    pub fn attached(&self, key: &str) -> Option<f64> {
        self.attached
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| *v)
    }

    pub fn known_gap(&self, f: f64) -> Option<f64> {
        self.problem.known_optimum.as_ref().map(|(_, fs)| f - fs)
    }
}

fn from_zoo(z: zoo::ZooProblem<f64>, quad: Option<(Mat<f64>, Vec<f64>)>) -> MinProblem {
    MinProblem {
        tag: z.tag(),
        attached: z
            .attached_pairs()
            .iter()
            .map(|(k, v)| (k.to_string(), *v))
            .collect(),
        problem: z.problem.clone(),
        start: z.start.clone(),
        quad,
        reset: None,
    }
}

pub fn build_problem(spec: &ProblemSpec, seed_override: Option<u64>) -> Result<BuiltProblem, ConfigError> {
    let p = Params::new(&spec.params, "problem.params");
    let seed = seed_override.or(spec.seed).unwrap_or(0);
    let fam = spec.family.as_str();
    let cfg_err = |e: fo_core::Error| ConfigError(format!("problem.family '{fam}': {e}"));
    match fam {
        "random_quadratic" => {
            let n = p.usize_or("n", 10)?;
            let mu = p.f64_or("mu", 0.0)?;
            let l = p.f64_or("l", 1.0)?;
            let q = zoo::random_quadratic::<f64>(n, mu, l, seed).map_err(cfg_err)?;
            let dist = p.f64_or("start_distance", 1.0)?;
            let start = q.start_at_distance(dist, seed.wrapping_add(1));
            let mut m = from_zoo(q.zoo, Some((q.a, q.b)));
            m.start = start;
            Ok(BuiltProblem::Min(Box::new(m)))
        }
        "worst_case_smooth" => {
            let l = p.f64_or("l", 1.0)?;
            let n_steps = p.usize_or("n_steps", 20)?;
            let dim = p.usize_or("dim", 2 * n_steps + 1)?;
            let w = zoo::worst_case_smooth(l, n_steps, dim).map_err(cfg_err)?;
            let quad = Some((w.a.clone(), w.b.clone()));
            Ok(BuiltProblem::Min(Box::new(from_zoo(w.zoo, quad))))
        }
        "worst_case_nonsmooth" => {
            let l0 = p.f64_or("l0", 1.0)?;
            let n_steps = p.usize_or("n_steps", 25)?;
            let radius = p.f64_or("radius", 1.0)?;
            let dim = p.usize_or("dim", n_steps + 5)?;
            let w = zoo::worst_case_nonsmooth(l0, n_steps, radius, dim).map_err(cfg_err)?;
            let w = Arc::new(w);
            let handle = w.clone();
            let mut m = MinProblem {
                tag: w.zoo.tag(),
                attached: w
                    .zoo
                    .attached_pairs()
                    .iter()
                    .map(|(k, v)| (k.to_string(), *v))
                    .collect(),
                problem: w.zoo.problem.clone(),
                start: w.zoo.start.clone(),
                quad: None,
                reset: None,
            };
            m.reset = Some(Arc::new(move || handle.reset()));
            Ok(BuiltProblem::Min(Box::new(m)))
        }
        "nesterov_skokov" => {
            let n = p.usize_or("n", 15)?;
            let z = zoo::nesterov_skokov::<f64>(n).map_err(cfg_err)?;
            Ok(BuiltProblem::Min(Box::new(from_zoo(z, None))))
        }
        "huber" => {
            let l = p.f64_or("l", 1.0)?;
            let radius = p.f64_or("radius", 1.0)?;
            let theta = p.f64_or("theta", 1.0)?;
            let dim = p.usize_or("dim", 2)?;
            let z = zoo::huber(l, radius, theta).map_err(cfg_err)?;
            let dist = p.f64_or("start_distance", 1.0)?;
            let mut m = from_zoo(z, None);
            let mut start = vec![0.0; dim];
            start[0] = dist;
            m.start = start;
            m.problem.known_optimum = Some((vec![0.0; dim], 0.0));
            Ok(BuiltProblem::Min(Box::new(m)))
        }
        "euclidean_norm" => {
            let n = p.usize_or("n", 4)?;
            let l0 = p.f64_or("l0", 1.0)?;
            Ok(BuiltProblem::Min(Box::new(from_zoo(
                zoo::euclidean_norm_problem::<f64>(n, l0),
                None,
            ))))
        }
        "norm_power_1p5" => {
            let n = p.usize_or("n", 4)?;
            Ok(BuiltProblem::Min(Box::new(from_zoo(
                zoo::norm_power_three_halves::<f64>(n),
                None,
            ))))
        }
        "matrix_game" => {
            let m = p.usize_or("m", 5)?;
            let n = p.usize_or("n", 5)?;
            Ok(BuiltProblem::Game(zoo::random_matrix_game::<f64>(m, n, seed)))
        }
        "matching_pennies" => {
            let payoff = Mat::from_rows(vec![vec![1.0, -1.0], vec![-1.0, 1.0]]);
            Ok(BuiltProblem::Game(zoo::matrix_game(payoff)))
        }
        "entropy_linear" => {
            let m = p.usize_or("m", 5)?;
            let n = p.usize_or("n", 10)?;
            let mu = p.f64_or("mu", 0.1)?;
            let prog = zoo::entropy_linear_random::<f64>(m, n, mu, seed).map_err(cfg_err)?;
            Ok(BuiltProblem::Program {
                prog,
                tag: format!("entropy_linear(m={m},n={n},mu={mu},seed={seed})"),
                reference_point: None,
            })
        }
        "consensus_path" => {
            let centers = p
                .f64_list("centers")?
                .ok_or_else(|| ConfigError("field 'problem.params.centers': missing".into()))?;
            let nodes = centers.len();
            let c = zoo::consensus_problem(nodes, &zoo::path_graph(nodes), centers, None)
                .map_err(cfg_err)?;
            Ok(BuiltProblem::Program {
                prog: c.program.clone(),
                tag: format!("consensus_path(nodes={nodes})"),
                reference_point: Some(c.reference_point),
            })
        }
        other => Err(ConfigError(format!(
            "field 'problem.family': unknown family '{other}'"
        ))),
    }
}

/// What a single run produces: the rows for the CSV plus enough raw state
/// for the bound checks.
pub struct RunArtifacts {
    pub rows: Vec<TraceRow>,
    pub trace: Option<Trace64>,
    /// Final certificate when the method computes one.
    pub certificate: Option<f64>,
    /// (epsilon, epsilon_tilde, iterations) for dual solves.
    pub dual_stats: Option<(f64, f64, usize)>,
    /// Universal-run metadata: accepted L sequence and stop reason.
    pub universal: Option<(Vec<f64>, bool)>,
    /// Restart metadata: total inner iterations.
    pub restart_total: Option<usize>,
    /// f* override for plotting (saddle gap / duality gap series decay to 0).
    pub plot_f_star: Option<f64>,
}

/// Dispatch and execute one method on one problem.
pub fn run_method(
    built: &BuiltProblem,
    method: &MethodSpec,
    iterations: usize,
) -> Result<RunArtifacts, RunError> {
    let p = Params::new(&method.params, "method.params");
    match built {
        BuiltProblem::Min(m) => run_min_method(m, method, &p, iterations),
        BuiltProblem::Game(game) => run_game_method(game, method, &p, iterations),
        BuiltProblem::Program { prog, .. } => run_program_method(prog, method, &p, iterations),
    }
}

/// Errors a run can exit with, mapped to process exit codes by the CLI.
pub enum RunError {
    Config(ConfigError),
    Solver(fo_core::Error),
}

impl From<ConfigError> for RunError {
    fn from(e: ConfigError) -> Self {
        RunError::Config(e)
    }
}

impl From<fo_core::Error> for RunError {
    fn from(e: fo_core::Error) -> Self {
        RunError::Solver(e)
    }
}

fn need_l(m: &MinProblem, p: &Params) -> Result<f64, ConfigError> {
    match p.f64_opt("l")? {
        Some(l) => Ok(l),
        None => m
            .problem
            .constants
            .l1
            .or_else(|| m.attached("local_l1"))
            .ok_or_else(|| {
                ConfigError("field 'method.params.l': missing and problem declares no L".into())
            }),
    }
}

fn rows_from_trace(m: &MinProblem, trace: &Trace64, certificate: Option<f64>) -> Vec<TraceRow> {
    let x_star = m.problem.known_optimum.as_ref().map(|(x, _)| x.clone());
    let prox = ProxSetup::euclidean(FeasibleSet::FreeSpace);
    trace
        .iterates
        .iter()
        .enumerate()
        .map(|(k, x)| {
            let g = m.problem.oracle.probe_grad(x);
            let (gc, vc) = trace.call_marks.get(k).copied().unwrap_or((0, 0));
            TraceRow {
                iter: k,
                f_value: trace.values[k],
                grad_norm_dual: dual_norm(&g, NormSpec::Euclidean),
                step_l: trace.step_constants[k],
                bregman_to_opt: x_star
                    .as_ref()
                    .map(|xs| bregman(&prox, xs, x).unwrap_or(f64::NAN)),
                certificate: if k + 1 == trace.iterates.len() {
                    certificate
                } else {
                    None
                },
                grad_calls: gc,
                value_calls: vc,
            }
        })
        .collect()
}

fn run_min_method(
    m: &MinProblem,
    method: &MethodSpec,
    p: &Params,
    iterations: usize,
) -> Result<RunArtifacts, RunError> {
    if let Some(reset) = &m.reset {
        reset();
    }
    let plot_f_star = m.problem.known_optimum.as_ref().map(|(_, f)| *f);
    let simple = |trace: Trace64| -> RunArtifacts {
        RunArtifacts {
            rows: rows_from_trace(m, &trace, None),
            trace: Some(trace),
            certificate: None,
            dual_stats: None,
            universal: None,
            restart_total: None,
            plot_f_star,
        }
    };
    match method.name.as_str() {
        "gradient_descent" => {
            let l = need_l(m, p)?;
            let trace =
                gradient_descent(&m.problem, &m.start, &StepRule::FixedInverseL(l), iterations, None)?;
            Ok(simple(trace))
        }
        "subgradient" => {
            let l0 = match p.f64_opt("l0")? {
                Some(v) => v,
                None => m.problem.constants.l0.ok_or_else(|| {
                    ConfigError("field 'method.params.l0': missing and problem declares no L0".into())
                })?,
            };
            let radius = p.f64_or("radius", m.problem.constants.radius.unwrap_or(1.0))?;
            let h = fo_core::methods::subgradient_descent_step(radius, l0, iterations);
            let trace = gradient_descent(
                &m.problem,
                &m.start,
                &StepRule::Sequence(vec![h]),
                iterations,
                None,
            )?;
            Ok(simple(trace))
        }
        "nesterov_momentum" => {
            let l = need_l(m, p)?;
            let mu = p.f64_opt("mu")?;
            let trace = nesterov_momentum(&m.problem, &m.start, l, mu, iterations)?;
            Ok(simple(trace))
        }
        "heavy_ball" => {
            let alpha = p.f64("alpha")?;
            let beta = p.f64("beta")?;
            let trace = heavy_ball_run(m, alpha, beta, iterations)?;
            Ok(simple(trace))
        }
        "linear_coupling" => {
            let l = need_l(m, p)?;
            let step = match p.f64_opt("h")? {
                Some(h) => CouplingStep::Fixed { h },
                None => CouplingStep::Schedule,
            };
            let trace = linear_coupling(&m.problem, &m.start, l, step, iterations)?;
            Ok(simple(trace))
        }
        "cg_quadratic" => {
            let (a, b) = m.quad.as_ref().ok_or_else(|| {
                ConfigError("method 'cg_quadratic': problem family provides no SPD system".into())
            })?;
            let x0 = vec![0.0; a.rows];
            let trace = cg_quadratic(a, b, &x0, iterations.min(a.rows * 4))?;
            // CG consumes the matrix directly; pad rows with matrix-free info
            let rows = cg_rows(a, b, &trace, m);
            Ok(RunArtifacts {
                rows,
                trace: Some(trace),
                certificate: None,
                dual_stats: None,
                universal: None,
                restart_total: None,
                plot_f_star,
            })
        }
        "nonlinear_cg" => {
            let variant = match p.str_or("variant", "fr")?.as_str() {
                "fr" => CgVariant::FletcherReeves,
                "prp" => CgVariant::PolakRibiere,
                other => {
                    return Err(ConfigError(format!(
                        "field 'method.params.variant': unknown '{other}' (fr|prp)"
                    ))
                    .into())
                }
            };
            let restart_period = p.usize_or("restart_period", 10 * m.start.len())?;
            let ls = match p.str_or("line_search", "bisection")?.as_str() {
                "exact" => NcgLineSearch::ExactQuadratic,
                "bisection" => NcgLineSearch::DirectionalBisection {
                    tol: p.f64_or("line_search_tol", 1e-8)?,
                },
                other => {
                    return Err(ConfigError(format!(
                        "field 'method.params.line_search': unknown '{other}'"
                    ))
                    .into())
                }
            };
            let trace = nonlinear_cg(&m.problem, &m.start, variant, restart_period, iterations, ls)?;
            Ok(simple(trace))
        }
        "frank_wolfe" => {
            let (a, _) = m.quad.as_ref().ok_or_else(|| {
                ConfigError("method 'frank_wolfe': problem family provides no SPD matrix".into())
            })?;
            let mut x0 = vec![0.0; a.rows];
            x0[0] = 1.0;
            let trace = frank_wolfe_simplex(a, &x0, iterations)?;
            let rows = cg_rows(a, &vec![0.0; a.rows], &trace, m);
            Ok(RunArtifacts {
                rows,
                trace: Some(trace),
                certificate: None,
                dual_stats: None,
                universal: None,
                restart_total: None,
                plot_f_star: None,
            })
        }
        "model_gradient" => {
            let l = need_l(m, p)?;
            let model = ModelOracle::linear_model(m.problem.oracle.clone());
            let prox = build_prox(p)?;
            let trace = model_gradient_method(&model, &prox, l, &m.start, iterations, None)?;
            Ok(simple(trace))
        }
        "similar_triangles" => {
            let l = need_l(m, p)?;
            let monotone = p.bool_or("monotone", false)?;
            let model = ModelOracle::linear_model(m.problem.oracle.clone());
            let prox = build_prox(p)?;
            let run = similar_triangles(&model, &prox, l, &m.start, iterations, monotone)?;
            Ok(simple(run.trace))
        }
        "universal_gradient" => {
            let epsilon = p.f64("epsilon")?;
            let model = ModelOracle::linear_model(m.problem.oracle.clone());
            let prox = build_prox(p)?;
            let mut opts = UniversalOptions::new(epsilon)
                .with_l0(p.f64_or("l0", 1.0)?)
                .with_max_iterations(iterations);
            // Certificate ball: user-supplied radius is doubled (a guess);
            // a known optimum yields the exact distance.
            if let Some(r) = p.f64_opt("radius")? {
                opts = opts.with_certificate_radius(2.0 * r);
            } else if let Some((xs, _)) = &m.problem.known_optimum {
                opts = opts.with_certificate_radius(norm2(&sub(xs, &m.start)));
            }
            let run = universal_gradient(&model, &prox, &m.start, &opts)?;
            let mut art = RunArtifacts {
                rows: rows_from_trace(m, &run.trace, run.certificate),
                certificate: run.certificate,
                dual_stats: None,
                universal: Some((
                    run.accepted_l.clone(),
                    run.stop == StopReason::Certificate,
                )),
                restart_total: None,
                trace: Some(run.trace),
                plot_f_star,
            };
            // expose per-iteration accepted L in step_L (already in trace)
            art.rows.iter_mut().for_each(|_| {});
            Ok(art)
        }
        "restart_subgradient" => {
            let mu = p.f64("mu")?;
            let epsilon = p.f64("epsilon")?;
            let l0 = match p.f64_opt("l0")? {
                Some(v) => v,
                None => m.problem.constants.l0.ok_or_else(|| {
                    ConfigError("field 'method.params.l0': missing".into())
                })?,
            };
            let r0 = p.f64_or("r0", 1.0)?;
            let stage = SubgradientStage {
                oracle: ModelOracle::linear_model(m.problem.oracle.clone()),
                prox: ProxSetup::euclidean(FeasibleSet::FreeSpace),
                l0,
            };
            let run = restart_strongly_convex(&stage, mu, &m.start, r0, epsilon, 0.5)?;
            let f_final = m.problem.oracle.probe_value(&run.point);
            let g = m.problem.oracle.probe_grad(&run.point);
            let rows = vec![TraceRow {
                iter: run.total_iterations,
                f_value: f_final,
                grad_norm_dual: norm2(&g),
                step_l: run.certified_gap,
                bregman_to_opt: None,
                certificate: Some(run.certified_gap),
                grad_calls: run.total_iterations as u64,
                value_calls: 0,
            }];
            Ok(RunArtifacts {
                rows,
                trace: None,
                certificate: Some(run.certified_gap),
                dual_stats: None,
                universal: None,
                restart_total: Some(run.total_iterations),
                plot_f_star,
            })
        }
        other => Err(ConfigError(format!(
            "field 'method.name': '{other}' is not applicable to minimization problems"
        ))
        .into()),
    }
}

fn heavy_ball_run(
    m: &MinProblem,
    alpha: f64,
    beta: f64,
    iterations: usize,
) -> Result<Trace64, fo_core::Error> {
    fo_core::methods::heavy_ball(&m.problem, &m.start, alpha, beta, iterations)
}

fn build_prox(p: &Params) -> Result<ProxSetup<f64>, ConfigError> {
    match p.str_or("prox", "euclidean")?.as_str() {
        "euclidean" => Ok(ProxSetup::euclidean(FeasibleSet::FreeSpace)),
        "entropy" => Ok(ProxSetup::entropy_simplex()),
        other => Err(ConfigError(format!(
            "field 'method.params.prox': unknown '{other}' (euclidean|entropy)"
        ))),
    }
}

fn cg_rows(a: &Mat<f64>, b: &[f64], trace: &Trace64, m: &MinProblem) -> Vec<TraceRow> {
    let x_star = m.problem.known_optimum.as_ref().map(|(x, _)| x.clone());
    trace
        .iterates
        .iter()
        .enumerate()
        .map(|(k, x)| {
            let g = sub(&a.matvec(x), b);
            TraceRow {
                iter: k,
                f_value: trace.values[k],
                grad_norm_dual: norm2(&g),
                step_l: trace.step_constants[k],
                bregman_to_opt: x_star.as_ref().map(|xs| {
                    if xs.len() == x.len() {
                        let d = sub(xs, x);
                        0.5 * fo_core::linalg::dot(&d, &d)
                    } else {
                        let d: Vec<f64> =
                            xs.iter().take(x.len()).zip(x).map(|(a, b)| a - b).collect();
                        0.5 * fo_core::linalg::dot(&d, &d)
                    }
                }),
                certificate: None,
                grad_calls: 0,
                value_calls: 0,
            }
        })
        .collect()
}

fn run_game_method(
    game: &zoo::MatrixGame<f64>,
    method: &MethodSpec,
    p: &Params,
    iterations: usize,
) -> Result<RunArtifacts, RunError> {
    let field = game.spec.field();
    match method.name.as_str() {
        "mirror_prox" => {
            let l = p.f64_or("l", game.field_l)?;
            let run = mirror_prox(&field, l, &field.domain.start(), iterations)?;
            let rows = game_rows(game, &run.trace.iterates, &run.trace.step_constants);
            Ok(RunArtifacts {
                rows,
                trace: Some(run.trace),
                certificate: Some(run.gap.weighted_gap(&field.domain)),
                dual_stats: None,
                universal: None,
                restart_total: None,
                plot_f_star: Some(0.0),
            })
        }
        "universal_mirror_prox" => {
            let epsilon = p.f64("epsilon")?;
            let opts = UniversalViOptions::new(epsilon)
                .with_l0(p.f64_or("l0", 1.0)?)
                .with_max_iterations(iterations);
            let run = universal_mirror_prox(&field, &opts)?;
            let rows = game_rows(game, &run.trace.iterates, &run.trace.step_constants);
            Ok(RunArtifacts {
                rows,
                certificate: Some(run.gap.weighted_gap(&field.domain)),
                dual_stats: None,
                universal: Some((
                    run.accepted_l.clone(),
                    run.stop == StopReason::Certificate,
                )),
                restart_total: None,
                trace: Some(run.trace),
                plot_f_star: Some(0.0),
            })
        }
        other => Err(ConfigError(format!(
            "field 'method.name': '{other}' is not applicable to matrix games"
        ))
        .into()),
    }
}

fn game_rows(
    game: &zoo::MatrixGame<f64>,
    iterates: &[Vec<f64>],
    step_constants: &[f64],
) -> Vec<TraceRow> {
    // f_value column tracks the saddle gap of the running uniform average.
    let field = game.spec.field();
    let m = game.payoff.rows;
    let mut sum = vec![0.0; iterates[0].len()];
    let mut rows = Vec::with_capacity(iterates.len());
    for (k, y) in iterates.iter().enumerate() {
        let gap = if k == 0 {
            let (u, w) = split_point(&field.domain, y);
            game.spec.gap(&u, &w).unwrap_or(f64::NAN)
        } else {
            for (s, v) in sum.iter_mut().zip(y) {
                *s += v;
            }
            let avg: Vec<f64> = sum.iter().map(|s| s / k as f64).collect();
            let avg = fo_core::vi::project_simplex_product(m, &avg);
            let (u, w) = split_point(&field.domain, &avg);
            game.spec.gap(&u, &w).unwrap_or(f64::NAN)
        };
        let g = field.eval(y);
        rows.push(TraceRow {
            iter: k,
            f_value: gap,
            grad_norm_dual: norm2(&g),
            step_l: step_constants.get(k).copied().unwrap_or(f64::NAN),
            bregman_to_opt: None,
            certificate: None,
            grad_calls: 2 * k as u64,
            value_calls: 0,
        });
    }
    rows
}

fn run_program_method(
    prog: &Arc<ConstrainedProgram<f64>>,
    method: &MethodSpec,
    p: &Params,
    iterations: usize,
) -> Result<RunArtifacts, RunError> {
    match method.name.as_str() {
        "dual_solve" => {
            let epsilon = p.f64_or("epsilon", 1e-3)?;
            let epsilon_tilde = p.f64_or("epsilon_tilde", epsilon)?;
            let run = dual_solve_restore(prog, epsilon, epsilon_tilde, iterations)?;
            let rows: Vec<TraceRow> = run
                .gaps
                .iter()
                .enumerate()
                .map(|(k, (gap, feas))| TraceRow {
                    iter: k,
                    f_value: *gap,
                    grad_norm_dual: *feas,
                    step_l: prog.dual_smoothness(),
                    bregman_to_opt: None,
                    certificate: Some(*gap),
                    grad_calls: (k + 1) as u64,
                    value_calls: (k + 1) as u64,
                })
                .collect();
            Ok(RunArtifacts {
                rows,
                trace: None,
                certificate: Some(run.duality_gap),
                dual_stats: Some((epsilon, epsilon_tilde, run.iterations)),
                universal: None,
                restart_total: None,
                plot_f_star: Some(0.0),
            })
        }
        other => Err(ConfigError(format!(
            "field 'method.name': '{other}' is not applicable to constrained programs"
        ))
        .into()),
    }
}
