//! Test-problem zoo: worst-case smooth and nonsmooth instances, the
//! Nesterov-Skokov valley, Huber, seeded random quadratics, matrix games and
//! the linearly constrained programs driving the primal-dual machinery.

use std::sync::{Arc, Mutex};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::{dot, norm2, random_orthogonal, tridiag_solve, Mat};
use crate::oracle::{FnObjective, Objective, Oracle, Problem, ProblemConstants};
use crate::primal_dual::{ConstrainedProgram, StrongConvexityNorm};
use crate::scalar::{from_usize, real, Real};
use crate::sets::FeasibleSet;
use crate::vi::SaddleSpec;

/// A generated test problem: the task itself, its provenance tag, the
/// recommended start and any named constants (lower bounds, local
/// smoothness estimates) the generator attaches.
pub struct ZooProblem<T: Real> {
    pub problem: Problem<T>,
    pub family: &'static str,
    pub params: String,
    pub start: Vec<T>,
    attached: Vec<(&'static str, T)>,
}

impl<T: Real> ZooProblem<T> {
    pub fn attached(&self, name: &str) -> Option<T> {
        self.attached
            .iter()
            .find(|(k, _)| *k == name)
            .map(|(_, v)| *v)
    }

    pub fn attached_pairs(&self) -> &[(&'static str, T)] {
        &self.attached
    }

    pub fn tag(&self) -> String {
        format!("{}({})", self.family, self.params)
    }
}

// ---------------------------------------------------------------------------
// Worst-case smooth quadratic (the tridiagonal lower-bound instance)
// ---------------------------------------------------------------------------

/// Worst-case smooth instance over the first `2N+1` coordinates of `ℝⁿ`:
/// `F(x) = (L/8)[x₁² + Σ (x_i − x_{i+1})² + x_m²] − (L/4)x₁`, `m = 2N+1`.
///
/// Span methods started at the origin keep `x_i^k = 0` for `i > k`, which
/// pins the `(3L/32)·R²/(N+1)²` lower bound attached as `lower_bound_gap`.
pub struct WorstCaseSmooth<T: Real> {
    pub zoo: ZooProblem<T>,
    pub a: Mat<T>,
    pub b: Vec<T>,
    pub active_dim: usize,
}

pub fn worst_case_smooth<T: Real>(l: T, n_steps: usize, dim: usize) -> crate::Result<WorstCaseSmooth<T>> {
    let m = 2 * n_steps + 1;
    if dim < m {
        return Err(crate::Error::domain(format!(
            "worst-case smooth needs n >= 2N+1 = {m}, got {dim}"
        )));
    }
    let quarter_l = l / real::<T>(4.0);
    // x* solves the tridiagonal system A x = e1 on the active block.
    let diag = vec![real::<T>(2.0); m];
    let off = vec![-T::one(); m - 1];
    let mut rhs = vec![T::zero(); m];
    rhs[0] = T::one();
    let x_active = tridiag_solve(&diag, &off, &rhs);
    let mut x_star = x_active.clone();
    x_star.resize(dim, T::zero());
    let f_star = -(l / real::<T>(8.0)) * x_star[0];

    // Dense A (active block only) for the CG-facing view.
    let mut a = Mat::zeros(m, m);
    for i in 0..m {
        a[(i, i)] = real::<T>(2.0) * quarter_l;
        if i + 1 < m {
            a[(i, i + 1)] = -quarter_l;
            a[(i + 1, i)] = -quarter_l;
        }
    }
    let mut b = vec![T::zero(); m];
    b[0] = quarter_l;

    let l_capture = l;
    let value = move |x: &[T]| -> T {
        let eighth = l_capture / real::<T>(8.0);
        let quarter = l_capture / real::<T>(4.0);
        let mut s = x[0] * x[0] + x[m - 1] * x[m - 1];
        for i in 0..m - 1 {
            let d = x[i] - x[i + 1];
            s = s + d * d;
        }
        eighth * s - quarter * x[0]
    };
    let grad = move |x: &[T]| -> Vec<T> {
        let quarter = l_capture / real::<T>(4.0);
        let mut g = vec![T::zero(); x.len()];
        for i in 0..m {
            let mut v = real::<T>(2.0) * x[i];
            if i > 0 {
                v = v - x[i - 1];
            }
            if i + 1 < m {
                v = v - x[i + 1];
            }
            g[i] = quarter * v;
        }
        g[0] = g[0] - quarter;
        g
    };

    let r2 = dot(&x_star, &x_star);
    let lower = real::<T>(3.0) / real::<T>(32.0) * l * r2
        / (from_usize::<T>(n_steps + 1) * from_usize::<T>(n_steps + 1));

    let mut constants = ProblemConstants::default();
    constants.l1 = Some(l);
    constants.radius = Some(r2.sqrt());

    Ok(WorstCaseSmooth {
        zoo: ZooProblem {
            problem: Problem {
                oracle: Oracle::new(FnObjective::new(value, grad)),
                set: FeasibleSet::FreeSpace,
                known_optimum: Some((x_star, f_star)),
                constants,
            },
            family: "worst_case_smooth",
            params: format!("L={l},N={n_steps},n={dim}"),
            start: vec![T::zero(); dim],
            attached: vec![("lower_bound_gap", lower), ("r2", r2)],
        },
        a,
        b,
        active_dim: m,
    })
}

// ---------------------------------------------------------------------------
// Worst-case nonsmooth max-type instance with the adversarial subgradient
// ---------------------------------------------------------------------------

/// Adversarial max oracle: `F(x) = L₀·max_{i≤N} x_i + (μ/2)‖x‖²` whose
/// subgradient choice at ties picks the smallest *untouched* index. The
/// touched set is per-run state (the one documented exception to oracle
/// purity); call [`WorstCaseNonsmooth::reset`] before each run.
pub struct AdversarialMax<T> {
    l0: T,
    mu: T,
    n_max: usize,
    touched: Mutex<Vec<bool>>,
}

impl<T: Real> Objective<T> for AdversarialMax<T> {
    fn value(&self, x: &[T]) -> T {
        let m = x[..self.n_max]
            .iter()
            .fold(T::neg_infinity(), |a, &v| a.max(v));
        self.l0 * m + self.mu / real::<T>(2.0) * dot(x, x)
    }

    fn subgradient(&self, x: &[T]) -> Vec<T> {
        let m = x[..self.n_max]
            .iter()
            .fold(T::neg_infinity(), |a, &v| a.max(v));
        let mut touched = self.touched.lock().expect("adversary lock");
        // Smallest untouched index among the exact ties, else smallest tie.
        let mut pick = None;
        for i in 0..self.n_max {
            if x[i] == m && !touched[i] {
                pick = Some(i);
                break;
            }
        }
        let j = pick.unwrap_or_else(|| {
            (0..self.n_max).find(|&i| x[i] == m).unwrap_or(0)
        });
        touched[j] = true;
        let mut g: Vec<T> = x.iter().map(|&v| self.mu * v).collect();
        g[j] = g[j] + self.l0;
        g
    }
}

pub struct WorstCaseNonsmooth<T: Real> {
    pub zoo: ZooProblem<T>,
    adversary: Arc<AdversarialMax<T>>,
}

impl<T: Real> WorstCaseNonsmooth<T> {
    /// Clears the touched-coordinate state; call before each fresh run.
    pub fn reset(&self) {
        let mut t = self.adversary.touched.lock().expect("adversary lock");
        t.iter_mut().for_each(|b| *b = false);
    }
}

pub fn worst_case_nonsmooth<T: Real>(
    l0: T,
    n_steps: usize,
    radius: T,
    dim: usize,
) -> crate::Result<WorstCaseNonsmooth<T>> {
    if dim < n_steps {
        return Err(crate::Error::domain("nonsmooth worst case needs n >= N"));
    }
    let mu = l0 / (radius * from_usize::<T>(n_steps).sqrt());
    let tau = -radius / from_usize::<T>(n_steps).sqrt();
    let f_star = -(l0 * radius) / (real::<T>(2.0) * from_usize::<T>(n_steps).sqrt());
    let mut x_star = vec![T::zero(); dim];
    for x in x_star.iter_mut().take(n_steps) {
        *x = tau;
    }
    let adversary = Arc::new(AdversarialMax {
        l0,
        mu,
        n_max: n_steps,
        touched: Mutex::new(vec![false; n_steps]),
    });
    let mut constants = ProblemConstants::default();
    constants.l0 = Some(l0);
    constants.mu = Some(mu);
    constants.radius = Some(radius);
    Ok(WorstCaseNonsmooth {
        zoo: ZooProblem {
            problem: Problem {
                oracle: Oracle::from_arc(adversary.clone() as Arc<dyn Objective<T>>),
                set: FeasibleSet::FreeSpace,
                known_optimum: Some((x_star, f_star)),
                constants,
            },
            family: "worst_case_nonsmooth",
            params: format!("L0={l0},N={n_steps},R={radius},n={dim}"),
            start: vec![T::zero(); dim],
            attached: vec![("tau_star", tau), ("mu", mu)],
        },
        adversary,
    })
}

// ---------------------------------------------------------------------------
// Nesterov-Skokov valley
// ---------------------------------------------------------------------------

/// `f(x) = ¼(x₁ − 1)² + Σ_{i<n} (x_{i+1} − 2x_i² + 1)²`; smooth, nonconvex,
/// unique extremum at the all-ones point with `f = 0`; recommended start
/// `(−1, 1, …, 1)` has `f = 1`.
///
/// Attaches `local_l1`: a Gershgorin bound on the Hessian norm over the box
/// `|x_i| ≤ box` intersected with the start sublevel set (`|t_i| ≤ 1`),
/// `L̂ = 2.5 + 32·box² + 8 + 16·box`.
pub fn nesterov_skokov<T: Real>(n: usize) -> crate::Result<ZooProblem<T>> {
    if n < 2 {
        return Err(crate::Error::domain("nesterov-skokov needs n >= 2"));
    }
    let value = move |x: &[T]| -> T {
        let quarter = real::<T>(0.25);
        let mut s = quarter * (x[0] - T::one()) * (x[0] - T::one());
        for i in 0..x.len() - 1 {
            let t = x[i + 1] - real::<T>(2.0) * x[i] * x[i] + T::one();
            s = s + t * t;
        }
        s
    };
    let grad = move |x: &[T]| -> Vec<T> {
        let n = x.len();
        let two = real::<T>(2.0);
        let mut g = vec![T::zero(); n];
        g[0] = real::<T>(0.5) * (x[0] - T::one());
        for i in 0..n - 1 {
            let t = x[i + 1] - two * x[i] * x[i] + T::one();
            g[i] = g[i] - real::<T>(8.0) * t * x[i];
            g[i + 1] = g[i + 1] + two * t;
        }
        g
    };
    let boxb = real::<T>(1.5);
    let local_l1 = real::<T>(2.5)
        + real::<T>(32.0) * boxb * boxb
        + real::<T>(8.0)
        + real::<T>(16.0) * boxb;
    let mut start = vec![T::one(); n];
    start[0] = -T::one();
    // Nonconvex: the Hessian bound is attached as `local_l1` instead of
    // being declared in `constants.l1`, which would promise the convex
    // model sandwich.
    let constants = ProblemConstants::default();
    Ok(ZooProblem {
        problem: Problem {
            oracle: Oracle::new(FnObjective::new(value, grad)),
            set: FeasibleSet::FreeSpace,
            known_optimum: Some((vec![T::one(); n], T::zero())),
            constants,
        },
        family: "nesterov_skokov",
        params: format!("n={n}"),
        start,
        attached: vec![("local_l1", local_l1), ("trajectory_box", boxb)],
    })
}

// ---------------------------------------------------------------------------
// Huber
// ---------------------------------------------------------------------------

/// Huber function with quadratic core `‖x‖ < R/θ²` and linear tail; the
/// linear branch constant is the C¹-matching `−LR²/(2θ⁴)` so the branches
/// meet with matching gradients at the seam (verified at construction).
pub fn huber<T: Real>(l: T, radius: T, theta: T) -> crate::Result<ZooProblem<T>> {
    if !(l > T::zero() && radius > T::zero() && theta > T::zero()) {
        return Err(crate::Error::domain("huber needs L, R, theta > 0"));
    }
    let seam = radius / (theta * theta);
    let value = move |x: &[T]| -> T {
        let n = norm2(x);
        if n < seam {
            l / real::<T>(2.0) * n * n
        } else {
            l * seam * n - l * seam * seam / real::<T>(2.0)
        }
    };
    let grad = move |x: &[T]| -> Vec<T> {
        let n = norm2(x);
        if n < seam {
            x.iter().map(|&v| l * v).collect()
        } else {
            x.iter().map(|&v| l * seam * v / n).collect()
        }
    };
    // Seam continuity check at construction.
    let quad_at_seam = l / real::<T>(2.0) * seam * seam;
    let lin_at_seam = l * seam * seam - l * seam * seam / real::<T>(2.0);
    if (quad_at_seam - lin_at_seam).abs() > real::<T>(1e-12) * (T::one() + quad_at_seam.abs()) {
        return Err(crate::Error::Breakdown("huber branches do not meet".into()));
    }
    let mut constants = ProblemConstants::default();
    constants.l1 = Some(l);
    constants.l0 = Some(l * seam);
    Ok(ZooProblem {
        problem: Problem {
            oracle: Oracle::new(FnObjective::new(value, grad)),
            set: FeasibleSet::FreeSpace,
            known_optimum: Some((vec![T::zero(); 1], T::zero())),
            constants,
        },
        family: "huber",
        params: format!("L={l},R={radius},theta={theta}"),
        start: vec![T::zero(); 1],
        attached: vec![("seam", seam), ("grad_norm_outside", l * seam)],
    })
}

// ---------------------------------------------------------------------------
// Random quadratic with prescribed spectrum
// ---------------------------------------------------------------------------

pub struct RandomQuadratic<T: Real> {
    pub zoo: ZooProblem<T>,
    pub a: Mat<T>,
    pub b: Vec<T>,
}

impl<T: Real> RandomQuadratic<T> {
    /// A start point at the given Euclidean distance from the optimum,
    /// derived deterministically from the problem seed.
    pub fn start_at_distance(&self, distance: T, seed: u64) -> Vec<T> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5bd1_e995);
        let x_star = &self.zoo.problem.known_optimum.as_ref().unwrap().0;
        let mut dir: Vec<T> = (0..x_star.len())
            .map(|_| real::<T>(rng.gen_range(-1.0..1.0f64)))
            .collect();
        let n = norm2(&dir).max(T::min_positive_value());
        for d in &mut dir {
            *d = *d * distance / n;
        }
        crate::linalg::add(x_star, &dir)
    }
}

/// `f(x) = ½⟨Ax, x⟩ − ⟨b, x⟩` with `A = Q·diag(λ)·Qᵀ`, spectrum pinned to
/// `[μ, L]` (both endpoints attained for n ≥ 2), optimum chosen first and
/// `b = A·x*`. Same seed, same problem.
pub fn random_quadratic<T: Real>(
    n: usize,
    mu: T,
    l: T,
    seed: u64,
) -> crate::Result<RandomQuadratic<T>> {
    if !(mu >= T::zero() && l >= mu && l > T::zero()) {
        return Err(crate::Error::domain("random quadratic needs 0 <= mu <= L, L > 0"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q: Mat<T> = random_orthogonal(n, &mut rng);
    let mut lambda = vec![T::zero(); n];
    for (i, li) in lambda.iter_mut().enumerate() {
        *li = if i == 0 {
            mu
        } else if i == n - 1 {
            l
        } else {
            real::<T>(rng.gen_range(0.0..1.0f64)) * (l - mu) + mu
        };
    }
    if n == 1 {
        lambda[0] = l;
    }
    // A = Q Λ Qᵀ
    let mut a = Mat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut s = T::zero();
            for k in 0..n {
                s = s + q[(i, k)] * lambda[k] * q[(j, k)];
            }
            a[(i, j)] = s;
        }
    }
    let x_star: Vec<T> = (0..n)
        .map(|_| real::<T>(rng.gen_range(-1.0..1.0f64)))
        .collect();
    let b = a.matvec(&x_star);
    let f_star = -real::<T>(0.5) * dot(&b, &x_star);

    let (ac, bc) = (a.clone(), b.clone());
    let value = move |x: &[T]| real::<T>(0.5) * dot(&ac.matvec(x), x) - dot(&bc, x);
    let (ag, bg) = (a.clone(), b.clone());
    let grad = move |x: &[T]| crate::linalg::sub(&ag.matvec(x), &bg);

    let mut constants = ProblemConstants::default();
    constants.l1 = Some(l);
    constants.mu = Some(mu);
    Ok(RandomQuadratic {
        zoo: ZooProblem {
            problem: Problem {
                oracle: Oracle::new(FnObjective::new(value, grad)),
                set: FeasibleSet::FreeSpace,
                known_optimum: Some((x_star, f_star)),
                constants,
            },
            family: "random_quadratic",
            params: format!("n={n},mu={mu},L={l},seed={seed}"),
            start: vec![T::zero(); n],
            attached: vec![],
        },
        a,
        b,
    })
}

// ---------------------------------------------------------------------------
// Matrix games
// ---------------------------------------------------------------------------

pub struct MatrixGame<T: Real> {
    pub spec: SaddleSpec<T>,
    /// Lipschitz constant of the induced field for the product-entropy
    /// setup: `max_{ij} |C_{ij}|`.
    pub field_l: T,
    pub payoff: Mat<T>,
}

/// `f(u, w) = uᵀCw` on `S_m(1) × S_n(1)`; `u` minimizes, `w` maximizes.
pub fn matrix_game<T: Real>(payoff: Mat<T>) -> MatrixGame<T> {
    let field_l = payoff
        .data
        .iter()
        .fold(T::zero(), |a, &v| a.max(v.abs()));
    MatrixGame {
        spec: SaddleSpec::BilinearSimplex {
            payoff: payoff.clone(),
        },
        field_l: field_l.max(T::min_positive_value()),
        payoff,
    }
}

pub fn random_matrix_game<T: Real>(m: usize, n: usize, seed: u64) -> MatrixGame<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut payoff = Mat::zeros(m, n);
    for i in 0..m {
        for j in 0..n {
            payoff[(i, j)] = real::<T>(rng.gen_range(-1.0..1.0f64));
        }
    }
    matrix_game(payoff)
}

// ---------------------------------------------------------------------------
// Entropy-regularized linear program (the §4 separable setting)
// ---------------------------------------------------------------------------

/// `φ(y) = μ Σ y ln y` over the simplex subject to `Ay = b`; the inner
/// maximizer is a softmax, the dual is smooth with `L = max_j ‖A^j‖₂²/μ`.
pub fn entropy_linear<T: Real>(
    a: Mat<T>,
    b: Vec<T>,
    mu: T,
) -> crate::Result<Arc<ConstrainedProgram<T>>> {
    if !(mu > T::zero()) {
        return Err(crate::Error::domain("entropy program needs mu > 0"));
    }
    if a.rows != b.len() {
        return Err(crate::Error::config("A and b disagree in dimension"));
    }
    let n = a.cols;
    let phi = {
        let mu = mu;
        FnObjective::new(
            move |y: &[T]| {
                mu * y.iter().fold(T::zero(), |s, &v| {
                    if v > T::zero() {
                        s + v * v.ln()
                    } else {
                        s
                    }
                })
            },
            move |y: &[T]| {
                y.iter()
                    .map(|&v| mu * (v.max(real(1e-300)).ln() + T::one()))
                    .collect()
            },
        )
    };
    let a_inner = a.clone();
    let inner = move |x: &[T]| -> Vec<T> {
        // y(x) = softmax(−Aᵀx/μ)
        let c = a_inner.matvec_t(x);
        let m = c.iter().fold(T::infinity(), |a, &v| a.min(v));
        let mut out: Vec<T> = c.iter().map(|&ci| (-(ci - m) / mu).exp()).collect();
        let s = out.iter().fold(T::zero(), |s, &v| s + v);
        let inv = T::one() / s;
        for o in &mut out {
            *o = *o * inv;
        }
        out
    };
    let _ = n;
    Ok(Arc::new(ConstrainedProgram {
        phi: Arc::new(phi),
        a,
        b,
        set: FeasibleSet::Simplex,
        inner: Arc::new(inner),
        mu,
        norm: StrongConvexityNorm::L1,
    }))
}

/// Seeded feasible instance: `b = A·y₀` for an interior simplex point `y₀`.
pub fn entropy_linear_random<T: Real>(
    m: usize,
    n: usize,
    mu: T,
    seed: u64,
) -> crate::Result<Arc<ConstrainedProgram<T>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut a = Mat::zeros(m, n);
    for i in 0..m {
        for j in 0..n {
            a[(i, j)] = real::<T>(rng.gen_range(-1.0..1.0f64));
        }
    }
    let mut y0: Vec<T> = (0..n)
        .map(|_| real::<T>(rng.gen_range(0.05..1.0f64)))
        .collect();
    let s = y0.iter().fold(T::zero(), |s, &v| s + v);
    for y in &mut y0 {
        *y = *y / s;
    }
    let b = a.matvec(&y0);
    entropy_linear(a, b, mu)
}

// ---------------------------------------------------------------------------
// Consensus over a connected graph (Laplacian-constrained quadratics)
// ---------------------------------------------------------------------------

pub struct ConsensusProblem<T: Real> {
    pub program: Arc<ConstrainedProgram<T>>,
    pub laplacian: Mat<T>,
    /// Scalar consensus optimum broadcast over the nodes.
    pub reference_value: T,
    pub reference_point: Vec<T>,
}

/// `φ(y) = Σ ½ w_i (y_i − c_i)² → min over { Wy = 0 }` with `W` the graph
/// Laplacian; `Wy = 0` iff all coordinates agree (connected graph), so the
/// reference optimum is the weighted mean of the centers.
pub fn consensus_problem<T: Real>(
    nodes: usize,
    edges: &[(usize, usize)],
    centers: Vec<T>,
    weights: Option<Vec<T>>,
) -> crate::Result<ConsensusProblem<T>> {
    if centers.len() != nodes {
        return Err(crate::Error::config("one quadratic center per node required"));
    }
    let w = weights.unwrap_or_else(|| vec![T::one(); nodes]);
    if w.len() != nodes || w.iter().any(|&wi| !(wi > T::zero())) {
        return Err(crate::Error::config("weights must be positive, one per node"));
    }
    if !is_connected(nodes, edges) {
        return Err(crate::Error::domain(
            "consensus graph must be connected (otherwise Wy = 0 does not force agreement)",
        ));
    }
    let mut lap = Mat::zeros(nodes, nodes);
    for &(i, j) in edges {
        if i >= nodes || j >= nodes || i == j {
            return Err(crate::Error::config("bad edge in consensus graph"));
        }
        lap[(i, j)] = lap[(i, j)] - T::one();
        lap[(j, i)] = lap[(j, i)] - T::one();
        lap[(i, i)] = lap[(i, i)] + T::one();
        lap[(j, j)] = lap[(j, j)] + T::one();
    }

    let mu = w.iter().fold(T::infinity(), |a, &v| a.min(v));
    let (cw, cc) = (w.clone(), centers.clone());
    let phi = FnObjective::new(
        {
            let (cw, cc) = (cw.clone(), cc.clone());
            move |y: &[T]| {
                y.iter()
                    .zip(cw.iter().zip(&cc))
                    .fold(T::zero(), |s, (&yi, (&wi, &ci))| {
                        s + real::<T>(0.5) * wi * (yi - ci) * (yi - ci)
                    })
            }
        },
        move |y: &[T]| {
            y.iter()
                .zip(cw.iter().zip(&cc))
                .map(|(&yi, (&wi, &ci))| wi * (yi - ci))
                .collect()
        },
    );
    let lap_inner = lap.clone();
    let (wi2, ci2) = (w.clone(), centers.clone());
    let inner = move |x: &[T]| -> Vec<T> {
        // argmax_y ⟨x, −Wy⟩ − φ(y): y_i = c_i − [Wx]_i / w_i
        let wx = lap_inner.matvec(x);
        wx.iter()
            .zip(wi2.iter().zip(&ci2))
            .map(|(&v, (&wi, &ci))| ci - v / wi)
            .collect()
    };

    let total_w = w.iter().fold(T::zero(), |s, &v| s + v);
    let reference_value = w
        .iter()
        .zip(&centers)
        .fold(T::zero(), |s, (&wi, &ci)| s + wi * ci)
        / total_w;

    Ok(ConsensusProblem {
        program: Arc::new(ConstrainedProgram {
            phi: Arc::new(phi),
            a: lap.clone(),
            b: vec![T::zero(); nodes],
            set: FeasibleSet::FreeSpace,
            inner: Arc::new(inner),
            mu,
            norm: StrongConvexityNorm::L2,
        }),
        laplacian: lap,
        reference_value,
        reference_point: vec![reference_value; nodes],
    })
}

/// Path graph edge list `0-1-2-…-(n−1)`.
pub fn path_graph(nodes: usize) -> Vec<(usize, usize)> {
    (0..nodes.saturating_sub(1)).map(|i| (i, i + 1)).collect()
}

fn is_connected(nodes: usize, edges: &[(usize, usize)]) -> bool {
    if nodes == 0 {
        return false;
    }
    let mut adj = vec![Vec::new(); nodes];
    for &(i, j) in edges {
        if i < nodes && j < nodes {
            adj[i].push(j);
            adj[j].push(i);
        }
    }
    let mut seen = vec![false; nodes];
    let mut stack = vec![0usize];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &u in &adj[v] {
            if !seen[u] {
                seen[u] = true;
                stack.push(u);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

// ---------------------------------------------------------------------------
// Norm-power family for the universal-method tests
// ---------------------------------------------------------------------------

/// `f(x) = L₀‖x‖₂` (ν = 0, subgradient tie-break at zero: `L₀·e₁`).
pub fn euclidean_norm_problem<T: Real>(n: usize, l0: T) -> ZooProblem<T> {
    let value = move |x: &[T]| l0 * norm2(x);
    let grad = move |x: &[T]| -> Vec<T> {
        let nn = norm2(x);
        if nn == T::zero() {
            let mut g = vec![T::zero(); x.len()];
            g[0] = l0;
            g
        } else {
            x.iter().map(|&v| l0 * v / nn).collect()
        }
    };
    let mut constants = ProblemConstants::default();
    constants.l0 = Some(l0);
    ZooProblem {
        problem: Problem {
            oracle: Oracle::new(FnObjective::new(value, grad)),
            set: FeasibleSet::FreeSpace,
            known_optimum: Some((vec![T::zero(); n], T::zero())),
            constants,
        },
        family: "euclidean_norm",
        params: format!("n={n},L0={l0}"),
        start: {
            let mut s = vec![T::zero(); n];
            s[0] = T::one();
            s
        },
        attached: vec![],
    }
}

/// `f(x) = ‖x‖₂^{3/2}` — the ν = ½ Hölder surrogate with
/// `L_{1/2} = 1.5·√2` (colinear/opposite extremes of the gradient ratio).
pub fn norm_power_three_halves<T: Real>(n: usize) -> ZooProblem<T> {
    let value = move |x: &[T]| norm2(x).powf(real::<T>(1.5));
    let grad = move |x: &[T]| -> Vec<T> {
        let nn = norm2(x);
        if nn == T::zero() {
            vec![T::zero(); x.len()]
        } else {
            let scale = real::<T>(1.5) * nn.sqrt() / nn;
            x.iter().map(|&v| scale * v).collect()
        }
    };
    let l_half = real::<T>(1.5) * real::<T>(2.0).sqrt();
    let mut constants = ProblemConstants::default();
    constants.holder = Some((real::<T>(0.5), l_half));
    ZooProblem {
        problem: Problem {
            oracle: Oracle::new(FnObjective::new(value, grad)),
            set: FeasibleSet::FreeSpace,
            known_optimum: Some((vec![T::zero(); n], T::zero())),
            constants,
        },
        family: "norm_power_1p5",
        params: format!("n={n}"),
        start: {
            let mut s = vec![T::zero(); n];
            s[0] = T::one();
            s
        },
        attached: vec![("l_half", l_half)],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::finite_diff_check;

    #[test]
    fn worst_case_smooth_basics() {
        let w = worst_case_smooth(1.0f64, 3, 7).unwrap();
        // gradient at 0 is −(L/4)e₁
        let g = w.zoo.problem.oracle.probe_grad(&vec![0.0; 7]);
        assert!((g[0] + 0.25).abs() < 1e-15);
        assert!(g[1..].iter().all(|&v| v == 0.0));
        // spectrum of the active Hessian stays within (0, L)
        let eigs = crate::linalg::symmetric_eigenvalues(&w.a);
        for e in eigs {
            assert!(e > 0.0 && e < 1.0 + 1e-12);
        }
        // optimum from the tridiagonal solve matches x*_i = 1 − i/(m+1)
        let (x_star, _) = w.zoo.problem.known_optimum.clone().unwrap();
        let m = 7.0 + 1.0;
        for (i, v) in x_star.iter().enumerate() {
            let want = 1.0 - (i as f64 + 1.0) / m;
            assert!((v - want).abs() < 1e-12, "x*_{i} = {v}, want {want}");
        }
    }

    #[test]
    fn worst_case_smooth_span_property_for_gd() {
        let w = worst_case_smooth(1.0f64, 5, 11).unwrap();
        let t = crate::methods::gradient_descent(
            &w.zoo.problem,
            &w.zoo.start,
            &crate::methods::StepRule::FixedInverseL(1.0),
            5,
            None,
        )
        .unwrap();
        for (k, x) in t.iterates.iter().enumerate() {
            for i in k..x.len() {
                assert!(
                    x[i].abs() < 1e-15,
                    "span property violated at iterate {k}, coord {i}"
                );
            }
        }
    }

    #[test]
    fn worst_case_nonsmooth_constants() {
        let w = worst_case_nonsmooth(1.0f64, 4, 1.0, 6).unwrap();
        let (_, f_star) = w.zoo.problem.known_optimum.clone().unwrap();
        assert!((f_star + 0.25).abs() < 1e-15);
        assert!((w.zoo.attached("tau_star").unwrap() + 0.5).abs() < 1e-15);
        // subgradient at 0 is L0·e1 (+ μ·0)
        w.reset();
        let g = w.zoo.problem.oracle.probe_grad(&vec![0.0; 6]);
        assert!((g[0] - 1.0).abs() < 1e-15);
        assert!(g[1..].iter().all(|&v| v == 0.0));
    }

    #[test]
    fn nesterov_skokov_values_and_gradient() {
        let z = nesterov_skokov::<f64>(15).unwrap();
        let (x_star, f_star) = z.problem.known_optimum.clone().unwrap();
        assert_eq!(f_star, 0.0);
        assert!(z.problem.oracle.probe_value(&x_star).abs() < 1e-30);
        assert!((z.problem.oracle.probe_value(&z.start) - 1.0).abs() < 1e-15);
        // gradient check at the start and a few nearby points
        let err = finite_diff_check(&z.problem.oracle, &z.start, 1e-6).unwrap();
        assert!(err < 1e-5, "finite-difference disagreement {err}");
    }

    #[test]
    fn nesterov_skokov_gradient_random_points() {
        let z = nesterov_skokov::<f64>(6).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let x: Vec<f64> = (0..6).map(|_| rng.gen_range(-1.2..1.2)).collect();
            let err = finite_diff_check(&z.problem.oracle, &x, 1e-6).unwrap();
            assert!(err < 1e-5, "gradient mismatch {err} at {x:?}");
        }
    }

    #[test]
    fn huber_seam_and_branches() {
        let z = huber(2.0f64, 1.0, 1.0).unwrap();
        let seam = z.attached("seam").unwrap();
        assert!((seam - 1.0).abs() < 1e-15);
        // inside: f = L/2 ‖x‖², ∇f = Lx
        assert!((z.problem.oracle.probe_value(&[0.5]) - 0.25 * 2.0 * 0.5).abs() < 1e-14);
        let g = z.problem.oracle.probe_grad(&[0.5]);
        assert!((g[0] - 1.0).abs() < 1e-15);
        // outside: gradient norm constant L·R/θ²
        let g = z.problem.oracle.probe_grad(&[3.0]);
        assert!((g[0].abs() - 2.0).abs() < 1e-14);
        // seam continuity
        let inside = 2.0 / 2.0 * (1.0 - 1e-12f64).powi(2);
        let outside = 2.0 * 1.0 * 1.0 - 2.0 * 0.5;
        assert!((inside - outside).abs() < 1e-10);
    }

    #[test]
    fn random_quadratic_spectrum_and_determinism() {
        let q1 = random_quadratic::<f64>(8, 1.0, 100.0, 7).unwrap();
        let q2 = random_quadratic::<f64>(8, 1.0, 100.0, 7).unwrap();
        assert_eq!(q1.a.data, q2.a.data, "same seed must give the same matrix");
        let mut eigs = crate::linalg::symmetric_eigenvalues(&q1.a);
        eigs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((eigs[0] - 1.0).abs() < 1e-9);
        assert!((eigs[7] - 100.0).abs() < 1e-9);
        // optimum consistency: ∇f(x*) = 0
        let (x_star, f_star) = q1.zoo.problem.known_optimum.clone().unwrap();
        let g = q1.zoo.problem.oracle.probe_grad(&x_star);
        assert!(norm2(&g) < 1e-10);
        assert!((q1.zoo.problem.oracle.probe_value(&x_star) - f_star).abs() < 1e-12);
    }

    #[test]
    fn consensus_reference_and_laplacian() {
        let c = consensus_problem(3, &path_graph(3), vec![0.0f64, 1.0, 5.0], None).unwrap();
        assert!((c.reference_value - 2.0).abs() < 1e-15);
        // row sums vanish
        for i in 0..3 {
            let s: f64 = (0..3).map(|j| c.laplacian[(i, j)]).sum();
            assert!(s.abs() < 1e-15);
        }
        let mut eigs = crate::linalg::symmetric_eigenvalues(&c.laplacian);
        eigs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((eigs[0] - 0.0).abs() < 1e-12);
        assert!((eigs[1] - 1.0).abs() < 1e-12);
        assert!((eigs[2] - 3.0).abs() < 1e-12);
        // disconnected graph must fail
        assert!(consensus_problem(3, &[(0, 1)], vec![0.0; 3], None).is_err());
    }

    #[test]
    fn entropy_linear_inner_solver_is_normalized_softmax() {
        let prog = entropy_linear_random::<f64>(2, 2, 0.5, 3).unwrap();
        let y = (prog.inner)(&[0.3, -0.7]);
        let s: f64 = y.iter().sum();
        assert!((s - 1.0).abs() < 1e-14);
        assert!(y.iter().all(|&v| v > 0.0));
        // A = 0 edge: uniform y
        let prog0 = entropy_linear(Mat::zeros(2, 3), vec![0.0f64, 0.0], 1.0).unwrap();
        let y = (prog0.inner)(&[1.0, -2.0]);
        for v in y {
            assert!((v - 1.0 / 3.0).abs() < 1e-14);
        }
    }

    #[test]
    fn matrix_game_field_is_skew_monotone() {
        let g = random_matrix_game::<f64>(3, 4, 9);
        let field = g.spec.field();
        assert!(field.check_monotone(50, 5, 1e-10));
    }
}
