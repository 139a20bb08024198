//! Extragradient-family solvers for monotone variational inequalities and
//! convex-concave saddle problems.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use crate::linalg::{all_finite, dot, norm2, sub, Mat, WeightedMean};
use crate::scalar::{from_usize, real, Real};
use crate::sets::project_simplex_euclidean;
use crate::trace::{Trace, TraceBuilder};

/// Compact domains the VI machinery supports with exact prox steps and an
/// exact linear-maximization oracle (needed by the weighted-gap
/// certificate). Product-simplex uses the entropy prox, the rest Euclidean.
#[derive(Debug, Clone, PartialEq)]
pub enum ViDomain<T> {
    /// `S_m(1) × S_n(1)` with the product entropy prox; the natural home of
    /// matrix games.
    SimplexProduct { m: usize, n: usize },
    /// Euclidean ball.
    Ball { center: Vec<T>, radius: T },
    /// Coordinate box.
    Box { lo: Vec<T>, hi: Vec<T> },
    /// Product of two Euclidean balls centered at the origin (saddle
    /// problems over balls), split at `split`.
    BallProduct { split: usize, r_u: T, r_w: T },
}

impl<T: Real> ViDomain<T> {
    pub fn dim(&self) -> usize {
        match self {
            ViDomain::SimplexProduct { m, n } => m + n,
            ViDomain::Ball { center, .. } => center.len(),
            ViDomain::Box { lo, .. } => lo.len(),
            ViDomain::BallProduct { split, .. } => *split * 2, // only square products here
        }
    }

    /// Canonical start point: uniform on simplexes, the center otherwise.
    pub fn start(&self) -> Vec<T> {
        match self {
            ViDomain::SimplexProduct { m, n } => {
                let mut x = vec![T::one() / from_usize::<T>(*m); *m];
                x.extend(vec![T::one() / from_usize::<T>(*n); *n]);
                x
            }
            ViDomain::Ball { center, .. } => center.clone(),
            ViDomain::Box { lo, hi } => lo
                .iter()
                .zip(hi)
                .map(|(&l, &h)| (l + h) / real::<T>(2.0))
                .collect(),
            ViDomain::BallProduct { split, .. } => vec![T::zero(); 2 * split],
        }
    }

    /// Bregman divergence of the domain's prox structure.
    pub fn bregman(&self, x: &[T], y: &[T]) -> T {
        match self {
            ViDomain::SimplexProduct { m, .. } => {
                kl(&x[..*m], &y[..*m]) + kl(&x[*m..], &y[*m..])
            }
            _ => {
                let d = sub(x, y);
                real::<T>(0.5) * dot(&d, &d)
            }
        }
    }

    /// Squared setup norm of a difference vector: `‖u‖₁² + ‖w‖₁²` blockwise
    /// on simplex products, Euclidean elsewhere. The prox function is
    /// 1-strongly convex with respect to this norm, `V(a, b) ≥ ½‖a − b‖²`
    /// either way around.
    pub fn norm_sq(&self, d: &[T]) -> T {
        match self {
            ViDomain::SimplexProduct { m, .. } => {
                let l1u = d[..*m].iter().fold(T::zero(), |s, &v| s + v.abs());
                let l1w = d[*m..].iter().fold(T::zero(), |s, &v| s + v.abs());
                l1u * l1u + l1w * l1w
            }
            _ => dot(d, d),
        }
    }

    /// `max_{x ∈ Q} V(x, x0)`, the `R²` in the universal VI bound; closed
    /// form per domain.
    pub fn max_bregman_from(&self, x0: &[T]) -> T {
        match self {
            ViDomain::SimplexProduct { m, .. } => {
                // from the uniform start this is exactly ln m + ln n; in
                // general max_x KL(x, y) = ln(1/min_i y_i) per block
                let min_u = x0[..*m].iter().fold(T::infinity(), |a, &v| a.min(v));
                let min_w = x0[*m..].iter().fold(T::infinity(), |a, &v| a.min(v));
                (T::one() / min_u).ln() + (T::one() / min_w).ln()
            }
            ViDomain::Ball { center, radius } => {
                let shift = norm2(&sub(x0, center));
                let r = *radius + shift;
                real::<T>(0.5) * r * r
            }
            ViDomain::Box { lo, hi } => {
                let mut s = T::zero();
                for i in 0..lo.len() {
                    let d = (x0[i] - lo[i]).abs().max((hi[i] - x0[i]).abs());
                    s = s + d * d;
                }
                real::<T>(0.5) * s
            }
            ViDomain::BallProduct { split, r_u, r_w } => {
                let du = norm2(&x0[..*split]) + *r_u;
                let dw = norm2(&x0[*split..]) + *r_w;
                real::<T>(0.5) * (du * du + dw * dw)
            }
        }
    }

    /// Mirror step `argmin_x { ⟨h·g, x⟩ + V(x, c) }`.
    pub fn mirror_step(&self, c: &[T], g: &[T], h: T) -> Vec<T> {
        match self {
            ViDomain::SimplexProduct { m, .. } => {
                let mut out = entropy_block_step(&c[..*m], &g[..*m], h);
                out.extend(entropy_block_step(&c[*m..], &g[*m..], h));
                out
            }
            ViDomain::Ball { center, radius } => {
                let target = crate::linalg::axpy(c, -h, g);
                let d = sub(&target, center);
                let n = norm2(&d);
                if n <= *radius {
                    target
                } else {
                    crate::linalg::axpy(center, *radius / n, &d)
                }
            }
            ViDomain::Box { lo, hi } => {
                let target = crate::linalg::axpy(c, -h, g);
                target
                    .iter()
                    .zip(lo.iter().zip(hi))
                    .map(|(&x, (&l, &u))| x.max(l).min(u))
                    .collect()
            }
            ViDomain::BallProduct { split, r_u, r_w } => {
                let target = crate::linalg::axpy(c, -h, g);
                let mut out = clamp_ball(&target[..*split], *r_u);
                out.extend(clamp_ball(&target[*split..], *r_w));
                out
            }
        }
    }

    /// Exact `min_{x ∈ Q} ⟨g, x⟩`; all supported domains admit one, so the
    /// weighted-gap certificates here are exact (not sampled).
    pub fn linear_min(&self, g: &[T]) -> (Vec<T>, T) {
        match self {
            ViDomain::SimplexProduct { m, .. } => {
                let (xu, vu) = simplex_linear_min(&g[..*m]);
                let (xw, vw) = simplex_linear_min(&g[*m..]);
                let mut x = xu;
                x.extend(xw);
                (x, vu + vw)
            }
            ViDomain::Ball { center, radius } => {
                let n = norm2(g);
                if n == T::zero() {
                    return (center.clone(), dot(g, center));
                }
                let x = crate::linalg::axpy(center, -*radius / n, g);
                let v = dot(g, &x);
                (x, v)
            }
            ViDomain::Box { lo, hi } => {
                let x: Vec<T> = g
                    .iter()
                    .zip(lo.iter().zip(hi))
                    .map(|(&gi, (&l, &h))| if gi >= T::zero() { l } else { h })
                    .collect();
                let v = dot(g, &x);
                (x, v)
            }
            ViDomain::BallProduct { split, r_u, r_w } => {
                let gu = &g[..*split];
                let gw = &g[*split..];
                let nu = norm2(gu);
                let nw = norm2(gw);
                let mut x: Vec<T> = gu
                    .iter()
                    .map(|&v| if nu > T::zero() { -*r_u * v / nu } else { T::zero() })
                    .collect();
                x.extend(
                    gw.iter()
                        .map(|&v| if nw > T::zero() { -*r_w * v / nw } else { T::zero() }),
                );
                let v = dot(g, &x);
                (x, v)
            }
        }
    }

    /// Deterministic probe points used by certificate tests.
    pub fn sample_points(&self, count: usize, seed: u64) -> Vec<Vec<T>> {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let dim = self.dim();
        (0..count)
            .map(|_| {
                let raw: Vec<T> = (0..dim)
                    .map(|_| real::<T>(rng.gen_range(-1.0..1.0f64)))
                    .collect();
                match self {
                    ViDomain::SimplexProduct { m, .. } => {
                        let mut u: Vec<f64> =
                            (0..*m).map(|_| rng.gen_range(1e-6..1.0f64)).collect();
                        let su: f64 = u.iter().sum();
                        u.iter_mut().for_each(|v| *v /= su);
                        let nw = dim - m;
                        let mut w: Vec<f64> =
                            (0..nw).map(|_| rng.gen_range(1e-6..1.0f64)).collect();
                        let sw: f64 = w.iter().sum();
                        w.iter_mut().for_each(|v| *v /= sw);
                        u.into_iter()
                            .chain(w)
                            .map(|v| real::<T>(v))
                            .collect()
                    }
                    ViDomain::Ball { center, radius } => {
                        let n = norm2(&raw).max(T::min_positive_value());
                        let scale = real::<T>(rng.gen_range(0.0..1.0f64)) * *radius / n;
                        crate::linalg::axpy(center, scale, &raw)
                    }
                    ViDomain::Box { lo, hi } => lo
                        .iter()
                        .zip(hi)
                        .map(|(&l, &h)| l + (h - l) * real::<T>(rng.gen_range(0.0..1.0f64)))
                        .collect(),
                    ViDomain::BallProduct { split, r_u, r_w } => {
                        let mut p = clamp_ball(&raw[..*split], *r_u);
                        p.extend(clamp_ball(&raw[*split..], *r_w));
                        p
                    }
                }
            })
            .collect()
    }
}

fn kl<T: Real>(x: &[T], y: &[T]) -> T {
    let mut s = T::zero();
    for (&xi, &yi) in x.iter().zip(y) {
        if xi > T::zero() {
            s = s + xi * (xi / yi.max(real(1e-300))).ln();
        }
    }
    s.max(T::zero())
}

fn entropy_block_step<T: Real>(c: &[T], g: &[T], h: T) -> Vec<T> {
    let floor = real::<T>(1e-300);
    let m = g.iter().fold(T::infinity(), |a, &v| a.min(v));
    let mut out: Vec<T> = c
        .iter()
        .zip(g)
        .map(|(&ci, &gi)| ci.max(floor) * (-(h * (gi - m))).exp())
        .collect();
    let sum = out.iter().fold(T::zero(), |s, &v| s + v);
    let inv = T::one() / sum;
    for o in &mut out {
        *o = (*o * inv).max(floor);
    }
    let sum = out.iter().fold(T::zero(), |s, &v| s + v);
    let inv = T::one() / sum;
    for o in &mut out {
        *o = *o * inv;
    }
    out
}

fn clamp_ball<T: Real>(x: &[T], r: T) -> Vec<T> {
    let n = norm2(x);
    if n <= r {
        x.to_vec()
    } else {
        x.iter().map(|&v| v * r / n).collect()
    }
}

fn simplex_linear_min<T: Real>(g: &[T]) -> (Vec<T>, T) {
    let mut best = 0usize;
    for (i, gi) in g.iter().enumerate() {
        if *gi < g[best] {
            best = i;
        }
    }
    let mut x = vec![T::zero(); g.len()];
    x[best] = T::one();
    (x, g[best])
}

/// The operator `g(x)` of a variational inequality over a compact domain.
pub struct VectorField<T: Real> {
    eval: Arc<dyn Fn(&[T]) -> Vec<T> + Send + Sync>,
    pub domain: ViDomain<T>,
    pub monotone: bool,
    calls: AtomicU64,
}

impl<T: Real> VectorField<T> {
    pub fn new(
        domain: ViDomain<T>,
        monotone: bool,
        eval: impl Fn(&[T]) -> Vec<T> + Send + Sync + 'static,
    ) -> Self {
        VectorField {
            eval: Arc::new(eval),
            domain,
            monotone,
            calls: AtomicU64::new(0),
        }
    }

    pub fn eval(&self, x: &[T]) -> Vec<T> {
        self.calls.fetch_add(1, Ordering::Relaxed);
        let g = (self.eval)(x);
        assert_eq!(g.len(), x.len(), "field output dimension mismatch");
        g
    }

    pub fn calls(&self) -> u64 {
        self.calls.load(Ordering::Relaxed)
    }

    /// Sampled monotonicity check `⟨g(y) − g(x), y − x⟩ ≥ −tol`.
    pub fn check_monotone(&self, samples: usize, seed: u64, tol: T) -> bool {
        let pts = self.domain.sample_points(samples * 2, seed);
        for pair in pts.chunks(2) {
            if pair.len() < 2 {
                break;
            }
            let (x, y) = (&pair[0], &pair[1]);
            let gx = self.eval(x);
            let gy = self.eval(y);
            let d = sub(y, x);
            let gd = sub(&gy, &gx);
            if dot(&gd, &d) < -tol {
                return false;
            }
        }
        true
    }
}

/// Weighted linear-certificate accumulator for the VI gap
/// `(1/Σw) max_x Σ w_k ⟨g(y^k), y^k − x⟩`, which collapses to an exact
/// computation thanks to the domains' linear-min oracles.
#[derive(Debug, Clone)]
pub struct GapAccumulator<T> {
    pub sum_g: Vec<T>,
    pub sum_gy: T,
    pub sum_w: T,
}

impl<T: Real> GapAccumulator<T> {
    pub fn new(dim: usize) -> Self {
        GapAccumulator {
            sum_g: vec![T::zero(); dim],
            sum_gy: T::zero(),
            sum_w: T::zero(),
        }
    }

    pub fn push(&mut self, g: &[T], y: &[T], w: T) {
        for (s, &gi) in self.sum_g.iter_mut().zip(g) {
            *s = *s + w * gi;
        }
        self.sum_gy = self.sum_gy + w * dot(g, y);
        self.sum_w = self.sum_w + w;
    }

    /// `(1/Σw)·(Σ w⟨g_k, y_k⟩ − min_x ⟨Σ w g_k, x⟩)`, the exact weighted gap.
    pub fn weighted_gap(&self, domain: &ViDomain<T>) -> T {
        let (_, lin_min) = domain.linear_min(&self.sum_g);
        (self.sum_gy - lin_min) / self.sum_w
    }

    /// Residual against one fixed probe `x`.
    pub fn residual_at(&self, x: &[T]) -> T {
        (self.sum_gy - dot(&self.sum_g, x)) / self.sum_w
    }
}

#[derive(Debug, Clone)]
pub struct ViRun<T> {
    /// Trace over the `y` (lookahead) sequence.
    pub trace: Trace<T>,
    /// Weighted average of the `y` sequence — the method's output.
    pub averaged: Vec<T>,
    /// Certificate accumulator over the realized run.
    pub gap: GapAccumulator<T>,
    /// Accepted working constants (constant for the fixed-L variant).
    pub accepted_l: Vec<T>,
    /// Field evaluations per iteration (universal variant bookkeeping).
    pub field_calls: u64,
    pub stop: crate::universal::StopReason,
}

/// Fixed-L Mirror Prox: lookahead mirror step then correction step, both
/// with constant `1/L`, averaging the `y` sequence uniformly.
pub fn mirror_prox<T: Real>(
    field: &VectorField<T>,
    l: T,
    x0: &[T],
    iterations: usize,
) -> crate::Result<ViRun<T>> {
    if !(l > T::zero()) {
        return Err(crate::Error::config("mirror prox needs L > 0"));
    }
    let h = T::one() / l;
    let domain = &field.domain;
    let calls0 = field.calls();
    let mut x = x0.to_vec();
    let mut gap = GapAccumulator::new(x.len());
    let mut mean = WeightedMean::new(x.len());
    let mut builder = TraceBuilder::new(x.clone(), T::zero(), l);

    for k in 0..iterations {
        let gx = field.eval(&x);
        if !all_finite(&gx) {
            return Err(crate::Error::Divergence { step: k });
        }
        let y = domain.mirror_step(&x, &gx, h);
        let gy = field.eval(&y);
        if !all_finite(&gy) {
            return Err(crate::Error::Divergence { step: k });
        }
        let x_next = domain.mirror_step(&x, &gy, h);
        gap.push(&gy, &y, T::one());
        mean.push(&y, T::one());
        builder.push(y.clone(), T::zero(), l);
        x = x_next;
    }
    let averaged = mean.mean();
    Ok(ViRun {
        trace: builder.finish(0, 0),
        averaged,
        gap,
        accepted_l: vec![l; iterations],
        field_calls: field.calls() - calls0,
        stop: crate::universal::StopReason::IterationCap,
    })
}

#[derive(Debug, Clone)]
pub struct UniversalViOptions<T> {
    pub epsilon: T,
    pub l0: T,
    pub max_iterations: usize,
    pub max_trials_per_iteration: usize,
}

impl<T: Real> UniversalViOptions<T> {
    pub fn new(epsilon: T) -> Self {
        UniversalViOptions {
            epsilon,
            l0: T::one(),
            max_iterations: 1_000_000,
            max_trials_per_iteration: 120,
        }
    }

    pub fn with_l0(mut self, l0: T) -> Self {
        self.l0 = l0;
        self
    }

    pub fn with_max_iterations(mut self, n: usize) -> Self {
        self.max_iterations = n;
        self
    }
}

/// Universal proximal mirror method: halve the working constant, retry the
/// extragradient pair until the inexact smoothness test accepts, weight the
/// output by `1/L^k` and stop when the exact weighted gap over the compact
/// domain is ≤ ε.
///
/// The acceptance test is the norm form
/// `⟨g(y) − g(x), y − x⁺⟩ ≤ (L/2)(‖y − x‖² + ‖y − x⁺‖²) + ε/2`,
/// which implies the Bregman form `L·V(y, x) + L·V(y, x⁺) + ε/2` through
/// 1-strong convexity and — unlike the literal Bregman form with both
/// divergences anchored at `y` — telescopes for asymmetric divergences, so
/// the weighted-gap certificate actually reaches ε on entropy domains.
pub fn universal_mirror_prox<T: Real>(
    field: &VectorField<T>,
    opts: &UniversalViOptions<T>,
) -> crate::Result<ViRun<T>> {
    if !(opts.epsilon > T::zero()) || !(opts.l0 > T::zero()) {
        return Err(crate::Error::config("universal mirror prox needs epsilon > 0, L0 > 0"));
    }
    let domain = &field.domain;
    let x0 = domain.start();
    let eps_half = opts.epsilon / real::<T>(2.0);
    let calls0 = field.calls();

    let mut x = x0.clone();
    let mut gap = GapAccumulator::new(x.len());
    let mut mean = WeightedMean::new(x.len());
    let mut builder = TraceBuilder::new(x.clone(), T::zero(), opts.l0);
    let mut accepted = Vec::new();
    let mut l_prev = opts.l0;
    let mut stop = crate::universal::StopReason::IterationCap;

    for k in 0..opts.max_iterations {
        let gx = field.eval(&x);
        if !all_finite(&gx) {
            return Err(crate::Error::Divergence { step: k });
        }
        let mut l_try = l_prev / real::<T>(2.0);
        let mut trials = 0usize;
        let (y, gy, x_next) = loop {
            trials += 1;
            if trials > opts.max_trials_per_iteration {
                return Err(crate::Error::AdaptivityFailure {
                    budget: opts.max_trials_per_iteration,
                });
            }
            let h = T::one() / l_try;
            let y = domain.mirror_step(&x, &gx, h);
            let gy = field.eval(&y);
            if !all_finite(&gy) {
                return Err(crate::Error::Divergence { step: k });
            }
            let x_next = domain.mirror_step(&x, &gy, h);
            let lhs = dot(&sub(&gy, &gx), &sub(&y, &x_next));
            let half = real::<T>(0.5);
            let rhs = l_try
                * half
                * (domain.norm_sq(&sub(&y, &x)) + domain.norm_sq(&sub(&y, &x_next)))
                + eps_half;
            if lhs <= rhs {
                break (y, gy, x_next);
            }
            l_try = l_try * real::<T>(2.0);
        };
        let w = T::one() / l_try;
        gap.push(&gy, &y, w);
        mean.push(&y, w);
        builder.push_weighted(y.clone(), T::zero(), l_try, w);
        accepted.push(l_try);
        l_prev = l_try;
        x = x_next;

        if gap.weighted_gap(domain) <= opts.epsilon {
            stop = crate::universal::StopReason::Certificate;
            break;
        }
    }

    Ok(ViRun {
        trace: builder.finish(0, 0),
        averaged: mean.mean(),
        gap,
        accepted_l: accepted,
        field_calls: field.calls() - calls0,
        stop,
    })
}

/// Saddle specs with exact inner max/min solvers.
pub enum SaddleSpec<T: Real> {
    /// `f(u, w) = uᵀ C w` over `S_m(1) × S_n(1)`; `u` minimizes, `w`
    /// maximizes.
    BilinearSimplex { payoff: Mat<T> },
    /// `f(u, w) = (μ_u/2)‖u‖² + ⟨u, M w⟩ − (μ_w/2)‖w‖²` over centered
    /// Euclidean balls.
    QuadraticBall {
        coupling: Mat<T>,
        mu_u: T,
        mu_w: T,
        r_u: T,
        r_w: T,
    },
}

impl<T: Real> SaddleSpec<T> {
    /// Induced monotone field `g(u, w) = (∇_u f, −∇_w f)` with its domain.
    pub fn field(&self) -> VectorField<T> {
        match self {
            SaddleSpec::BilinearSimplex { payoff } => {
                let c = payoff.clone();
                let (m, n) = (c.rows, c.cols);
                VectorField::new(
                    ViDomain::SimplexProduct { m, n },
                    true,
                    move |x: &[T]| {
                        // g(u, w) = (∇_u f, −∇_w f) = (C w, −Cᵀ u)
                        let (u, w) = x.split_at(m);
                        let mut g = c.matvec(w);
                        g.extend(c.matvec_t(u).into_iter().map(|v| -v));
                        g
                    },
                )
            }
            SaddleSpec::QuadraticBall {
                coupling,
                mu_u,
                mu_w,
                r_u,
                r_w,
            } => {
                let mcpl = coupling.clone();
                let (mu_u, mu_w) = (*mu_u, *mu_w);
                let split = mcpl.rows;
                VectorField::new(
                    ViDomain::BallProduct {
                        split,
                        r_u: *r_u,
                        r_w: *r_w,
                    },
                    true,
                    move |x: &[T]| {
                        let (u, w) = x.split_at(split);
                        let mut g: Vec<T> = mcpl
                            .matvec(w)
                            .into_iter()
                            .zip(u)
                            .map(|(mw, &ui)| mu_u * ui + mw)
                            .collect();
                        g.extend(
                            mcpl.matvec_t(u)
                                .into_iter()
                                .zip(w)
                                .map(|(mu, &wi)| mu_w * wi - mu),
                        );
                        g
                    },
                )
            }
        }
    }

    /// Exact primal-dual gap `max_w f(u, w) − min_u f(u, w̄)`; zero iff
    /// `(u, w)` is a saddle point.
    pub fn gap(&self, u: &[T], w: &[T]) -> crate::Result<T> {
        match self {
            SaddleSpec::BilinearSimplex { payoff } => {
                assert_eq!(u.len(), payoff.rows, "saddle gap: u dimension");
                assert_eq!(w.len(), payoff.cols, "saddle gap: w dimension");
                // max over w of uᵀCw = max_j (uᵀC)_j; min over u of (Cw)ᵀu.
                let ut_c = payoff.matvec_t(u);
                let max_w = ut_c.iter().fold(T::neg_infinity(), |a, &v| a.max(v));
                let c_w = payoff.matvec(w);
                let min_u = c_w.iter().fold(T::infinity(), |a, &v| a.min(v));
                Ok(max_w - min_u)
            }
            SaddleSpec::QuadraticBall {
                coupling,
                mu_u,
                mu_w,
                r_u,
                r_w,
            } => {
                let f = |u: &[T], w: &[T]| {
                    real::<T>(0.5) * *mu_u * dot(u, u) + dot(u, &coupling.matvec(w))
                        - real::<T>(0.5) * *mu_w * dot(w, w)
                };
                // max over w of ⟨Mᵀu, w⟩ − (μ_w/2)‖w‖² on the ball: radial.
                let best_w = ball_quadratic_max(&coupling.matvec_t(u), *mu_w, *r_w);
                // min over u of (μ_u/2)‖u‖² + ⟨Mw, u⟩: radial with −Mw.
                let neg = coupling.matvec(w).iter().map(|&v| -v).collect::<Vec<_>>();
                let best_u = ball_quadratic_max(&neg, *mu_u, *r_u);
                Ok(f(u, &best_w) - f(&best_u, w))
            }
        }
    }
}

/// `argmax_{‖z‖ ≤ r} ⟨c, z⟩ − (μ/2)‖z‖²`: along `c`, clamped to the ball.
fn ball_quadratic_max<T: Real>(c: &[T], mu: T, r: T) -> Vec<T> {
    let n = norm2(c);
    if n == T::zero() {
        return vec![T::zero(); c.len()];
    }
    let scale = if mu > T::zero() {
        (n / mu).min(r) / n
    } else {
        r / n
    };
    c.iter().map(|&v| v * scale).collect()
}

/// Convenience wrapper matching the operation signature: gap of a saddle
/// spec at `(u, w)`.
pub fn saddle_gap<T: Real>(spec: &SaddleSpec<T>, u: &[T], w: &[T]) -> crate::Result<T> {
    spec.gap(u, w)
}

/// Split an averaged product-domain point into its `(u, w)` blocks.
pub fn split_point<T: Real>(domain: &ViDomain<T>, x: &[T]) -> (Vec<T>, Vec<T>) {
    match domain {
        ViDomain::SimplexProduct { m, .. } => (x[..*m].to_vec(), x[*m..].to_vec()),
        ViDomain::BallProduct { split, .. } => (x[..*split].to_vec(), x[*split..].to_vec()),
        _ => (x.to_vec(), Vec::new()),
    }
}

/// Project an arbitrary vector onto a product-simplex domain (used to clean
/// up externally supplied strategies).
pub fn project_simplex_product<T: Real>(m: usize, x: &[T]) -> Vec<T> {
    let mut out = project_simplex_euclidean(&x[..m]);
    out.extend(project_simplex_euclidean(&x[m..]));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn null_field_keeps_iterates_fixed() {
        let domain = ViDomain::Ball {
            center: vec![0.0, 0.0],
            radius: 1.0,
        };
        let field = VectorField::new(domain, true, |x: &[f64]| vec![0.0; x.len()]);
        let run = mirror_prox(&field, 1.0, &[0.3, 0.4], 10).unwrap();
        for y in &run.trace.iterates[1..] {
            assert!((y[0] - 0.3).abs() < 1e-15 && (y[1] - 0.4).abs() < 1e-15);
        }
    }

    #[test]
    fn skew_field_converges_where_plain_mirror_cycles() {
        // g(x) = Ax with A = [[0, 1], [−1, 0]] over the unit ball.
        let mk_field = || {
            VectorField::new(
                ViDomain::Ball {
                    center: vec![0.0, 0.0],
                    radius: 1.0,
                },
                true,
                |x: &[f64]| vec![x[1], -x[0]],
            )
        };
        let x0 = vec![0.9, 0.0];
        let field = mk_field();
        let run = mirror_prox(&field, 1.0, &x0, 400).unwrap();
        let avg_norm = norm2(&run.averaged);
        assert!(avg_norm < 0.1, "mirror prox average should spiral in, got {avg_norm}");

        // Plain forward mirror steps do not approach the solution.
        let field = mk_field();
        let mut x = x0.clone();
        for _ in 0..400 {
            let g = field.eval(&x);
            x = field.domain.mirror_step(&x, &g, 1.0);
        }
        assert!(norm2(&x) > 0.5, "plain mirror step should not converge here");
    }

    #[test]
    fn bilinear_saddle_on_box_spirals_inward() {
        // f(u, w) = u·w on [−1, 1]²; unique saddle at the origin.
        let field = VectorField::new(
            ViDomain::Box {
                lo: vec![-1.0, -1.0],
                hi: vec![1.0, 1.0],
            },
            true,
            |x: &[f64]| vec![x[1], -x[0]],
        );
        let run = mirror_prox(&field, 1.0, &[0.8, 0.6], 500).unwrap();
        assert!(norm2(&run.averaged) < 0.05);
        // residual (5.3)-style against the saddle point
        let res = run.gap.residual_at(&[0.0, 0.0]);
        let bound = 1.0 * field.domain.bregman(&[0.0, 0.0], &[0.8, 0.6]) / 500.0;
        assert!(res <= bound + 1e-9, "residual {res} > bound {bound}");
    }

    #[test]
    fn matching_pennies_equilibrium_gap() {
        let payoff = Mat::from_rows(vec![vec![1.0, -1.0], vec![-1.0, 1.0]]);
        let spec = SaddleSpec::BilinearSimplex { payoff };
        let gap: f64 = spec.gap(&[0.5, 0.5], &[0.5, 0.5]).unwrap();
        assert!(gap.abs() < 1e-15);
        let gap: f64 = spec.gap(&[1.0, 0.0], &[1.0, 0.0]).unwrap();
        assert!((gap - 2.0).abs() < 1e-15);
    }

    #[test]
    fn pure_strategy_gap_example() {
        let payoff = Mat::from_rows(vec![vec![1.0, 0.0], vec![0.0, 0.0]]);
        let spec = SaddleSpec::BilinearSimplex { payoff };
        // u = e1, w = e2: max-row(e1) = 1, min over u of (Cw) = 0 -> gap 1.
        let gap: f64 = spec.gap(&[1.0, 0.0], &[0.0, 1.0]).unwrap();
        assert!((gap - 1.0).abs() < 1e-15);
    }

    #[test]
    fn zero_payoff_every_pair_is_saddle() {
        let payoff = Mat::zeros(3, 2);
        let spec = SaddleSpec::BilinearSimplex { payoff };
        let gap: f64 = spec
            .gap(&[0.2, 0.3, 0.5], &[0.9, 0.1])
            .unwrap();
        assert!(gap.abs() < 1e-15);
    }

    #[test]
    fn universal_mirror_prox_solves_matching_pennies() {
        let payoff = Mat::from_rows(vec![vec![1.0, -1.0], vec![-1.0, 1.0]]);
        let spec = SaddleSpec::BilinearSimplex { payoff };
        let field = spec.field();
        let eps = 1e-2;
        let run = universal_mirror_prox(&field, &UniversalViOptions::new(eps)).unwrap();
        assert_eq!(run.stop, crate::universal::StopReason::Certificate);
        let (u, w) = split_point(&field.domain, &run.averaged);
        let gap = spec.gap(&u, &w).unwrap();
        assert!(gap <= eps + 1e-12, "gap {gap}");
    }
}
