//! Inexact model oracles: linear models, composite models and synthetic
//! noise, plus the Hölder-to-smooth constant conversion.

use std::sync::Arc;

use crate::oracle::Oracle;
use crate::prox::{mirror_step, ProxKind, ProxSetup};
use crate::scalar::{real, Real};
use crate::sets::FeasibleSet;

/// Simple convex term carried by handle so mirror-step subproblems keep
/// their closed forms.
#[derive(Clone)]
pub enum CompositeTerm<T: Real> {
    None,
    /// `λ‖x‖₁`, `λ ≥ 0`.
    L1Scaled(T),
    /// `μ Σ x_i ln x_i` on the simplex, `μ ≥ 0`.
    EntropyScaled(T),
    /// Indicator of a simple set (turns the model method into a projected
    /// method over that set).
    IndicatorOfSet(FeasibleSet<T>),
    /// User-supplied convex term with its own exact subproblem solver.
    Custom(Arc<dyn CustomComposite<T>>),
}

/// A convex term that knows how to solve
/// `argmin_x { ⟨a, x⟩ + w·g(x) + (1/h)·V(x, c) }` exactly for the prox setups
/// it supports.
pub trait CustomComposite<T: Real>: Send + Sync {
    fn value(&self, x: &[T]) -> T;
    fn solve_step(
        &self,
        prox: &ProxSetup<T>,
        center: &[T],
        linear: &[T],
        weight: T,
        h: T,
    ) -> crate::Result<Vec<T>>;
}

impl<T: Real> CompositeTerm<T> {
    pub fn value(&self, x: &[T]) -> T {
        match self {
            CompositeTerm::None => T::zero(),
            CompositeTerm::L1Scaled(lam) => {
                *lam * x.iter().fold(T::zero(), |s, &v| s + v.abs())
            }
            CompositeTerm::EntropyScaled(mu) => {
                *mu * x.iter().fold(T::zero(), |s, &v| {
                    if v > T::zero() {
                        s + v * v.ln()
                    } else {
                        s
                    }
                })
            }
            CompositeTerm::IndicatorOfSet(set) => {
                if set.contains(x, real(1e-9)) {
                    T::zero()
                } else {
                    T::infinity()
                }
            }
            CompositeTerm::Custom(c) => c.value(x),
        }
    }

    pub fn is_none(&self) -> bool {
        matches!(self, CompositeTerm::None)
    }
}

/// The `(δ, L)`-model at a center point: a value estimate plus a convex
/// minorant `ψ(y) = ⟨linear, y − center⟩ + g(y) − g(center)`.
#[derive(Clone)]
pub struct Model<T: Real> {
    pub f_delta: T,
    pub linear: Vec<T>,
    pub composite: CompositeTerm<T>,
    pub center: Vec<T>,
}

impl<T: Real> Model<T> {
    /// `ψ(y, center)`; zero at the center by construction.
    pub fn psi(&self, y: &[T]) -> T {
        let d = crate::linalg::sub(y, &self.center);
        crate::linalg::dot(&self.linear, &d) + self.composite.value(y)
            - self.composite.value(&self.center)
    }
}

/// Oracle producing `(δ, L)`-models of `f = F + g` with a declared noise
/// level; the smooth part's first-order oracle drives it.
#[derive(Clone)]
pub struct ModelOracle<T: Real> {
    smooth: Oracle<T>,
    composite: CompositeTerm<T>,
    declared_delta: T,
    inexact: Option<InexactLayer<T>>,
}

#[derive(Clone)]
struct InexactLayer<T> {
    delta: T,
    seed: u64,
    /// Working-ball radius the tilt is balanced against: the sandwich holds
    /// for `‖y − x‖ ≤ radius` by construction (the value drop compensates
    /// the tilt there). Statistical checks sample inside this ball.
    radius: T,
}

impl<T: Real> ModelOracle<T> {
    /// Model with `ψ(y, x) = ⟨∇f(x), y − x⟩` and `δ = 0`.
    pub fn linear_model(oracle: Oracle<T>) -> Self {
        ModelOracle {
            smooth: oracle,
            composite: CompositeTerm::None,
            declared_delta: T::zero(),
            inexact: None,
        }
    }

    /// Composite model `ψ(y, x) = ⟨∇F(x), y − x⟩ + g(y) − g(x)`; the
    /// sandwich constant depends only on `F`.
    pub fn composite_model(smooth: Oracle<T>, term: CompositeTerm<T>) -> Self {
        ModelOracle {
            smooth,
            composite: term,
            declared_delta: T::zero(),
            inexact: None,
        }
    }

    /// Wrap with deterministic seeded noise: the value estimate drops by a
    /// value in `[−δ/2, 0]` and the linear part tilts, balanced so the
    /// `(δ, L)` sandwich still holds on the working ball of the given
    /// radius. `delta = 0` returns the oracle unchanged.
    pub fn inexact_wrap(mut self, delta: T, seed: u64, working_radius: T) -> Self {
        if delta == T::zero() {
            return self;
        }
        self.declared_delta = self.declared_delta + delta;
        self.inexact = Some(InexactLayer {
            delta,
            seed,
            radius: working_radius,
        });
        self
    }

    pub fn declared_delta(&self) -> T {
        self.declared_delta
    }

    pub fn composite(&self) -> &CompositeTerm<T> {
        &self.composite
    }

    pub fn smooth_oracle(&self) -> &Oracle<T> {
        &self.smooth
    }

    /// Query the model at `x`.
    pub fn query(&self, x: &[T]) -> Model<T> {
        let (f, mut g) = self.smooth.eval(x);
        let mut f_delta = f + self.composite.value(x);
        if let Some(layer) = &self.inexact {
            let (drop, tilt) = layer.perturbation(x);
            f_delta = f_delta - drop;
            for (gi, ti) in g.iter_mut().zip(&tilt) {
                *gi = *gi + *ti;
            }
        }
        Model {
            f_delta,
            linear: g,
            composite: self.composite.clone(),
            center: x.to_vec(),
        }
    }

    /// True objective `F + g` for diagnostics; counts a value call.
    pub fn objective_value(&self, x: &[T]) -> T {
        self.smooth.value(x) + self.composite.value(x)
    }

    /// Uncounted objective evaluation.
    pub fn probe_objective(&self, x: &[T]) -> T {
        self.smooth.probe_value(x) + self.composite.value(x)
    }

    pub fn grad_calls(&self) -> u64 {
        self.smooth.grad_calls()
    }

    pub fn value_calls(&self) -> u64 {
        self.smooth.value_calls()
    }
}

impl<T: Real> InexactLayer<T> {
    /// Deterministic per-point perturbation: value drop in `[0, δ/2]` and a
    /// tilt with `‖tilt‖₂ ≤ (δ/4)/radius`, so on the working ball
    /// `|⟨tilt, y − x⟩| ≤ δ/4` is covered by the reserved value drop.
    fn perturbation(&self, x: &[T]) -> (T, Vec<T>) {
        let mut h = self.seed ^ 0x9e37_79b9_7f4a_7c15;
        for &xi in x {
            let bits = xi.to_f64().unwrap_or(0.0).to_bits();
            h ^= bits;
            h = h.wrapping_mul(0x100_0000_01b3);
            h = h.rotate_left(17);
        }
        let unit = |v: u64| -> f64 { (v >> 11) as f64 / (1u64 << 53) as f64 };
        let quarter = self.delta / real::<T>(4.0);
        let drop_rand = real::<T>(unit(h)) * quarter; // in [0, δ/4]
        let drop = drop_rand + quarter; // reserve δ/4 for the tilt
        let mut tilt = Vec::with_capacity(x.len());
        let mut hh = h.wrapping_mul(0xd134_2543_de82_ef95).wrapping_add(1);
        for _ in 0..x.len() {
            hh ^= hh >> 33;
            hh = hh.wrapping_mul(0xff51_afd7_ed55_8ccd);
            tilt.push(real::<T>(unit(hh) * 2.0 - 1.0));
        }
        let n = crate::linalg::norm2(&tilt);
        let target = quarter / self.radius;
        if n > T::zero() {
            let s = target / n;
            for t in &mut tilt {
                *t = *t * s;
            }
        }
        (drop, tilt)
    }
}

/// Largest violation of either side of the `(δ, L)` sandwich
/// `0 ≤ f(y) − (f_δ(x) + ψ(y, x)) ≤ (L/2)‖y − x‖² + δ`
/// over the given sample pairs; `0` means consistent.
pub fn model_check<T: Real>(
    oracle: &ModelOracle<T>,
    l: T,
    delta: T,
    samples: &[(Vec<T>, Vec<T>)],
) -> T {
    let half = real::<T>(0.5);
    let mut worst = T::zero();
    for (x, y) in samples {
        let model = oracle.query(x);
        let fy = oracle.objective_value(y);
        let gap = fy - (model.f_delta + model.psi(y));
        let lower_violation = -gap;
        let d = crate::linalg::sub(y, x);
        let bound = half * l * crate::linalg::dot(&d, &d) + delta;
        let upper_violation = gap - bound;
        worst = worst.max(lower_violation).max(upper_violation);
    }
    worst
}

/// The `(2.5)`-style constant: a δ-inexact Lipschitz-gradient bound for a
/// ν-Hölder gradient, `L(δ) = L_ν · [L_ν(1−ν) / (2δ(1+ν))]^{(1−ν)/(1+ν)}`.
/// For ν = 1 it returns `L_ν` independently of δ.
pub fn holder_to_smooth_l<T: Real>(l_nu: T, nu: T, delta: T) -> crate::Result<T> {
    if !(l_nu > T::zero()) {
        return Err(crate::Error::domain("holder constant must be positive"));
    }
    if nu < T::zero() || nu > T::one() {
        return Err(crate::Error::domain("holder exponent must lie in [0, 1]"));
    }
    if nu == T::one() {
        return Ok(l_nu);
    }
    if !(delta > T::zero()) {
        return Err(crate::Error::domain(
            "delta must be positive for nu < 1 (the constant diverges)",
        ));
    }
    let one = T::one();
    let ratio = (one - nu) / (one + nu);
    let base = l_nu / (real::<T>(2.0) * delta) * ratio;
    Ok(l_nu * base.powf(ratio))
}

/// Solve `argmin_x { ⟨lin, x⟩ + g(x) + (1/h)·V(x, center) }` exactly for the
/// supported (prox, composite) pairings. This is the subproblem every
/// model-based method iterates.
pub fn solve_model_step<T: Real>(
    prox: &ProxSetup<T>,
    composite: &CompositeTerm<T>,
    center: &[T],
    linear: &[T],
    h: T,
) -> crate::Result<Vec<T>> {
    match composite {
        CompositeTerm::None => mirror_step(prox, center, linear, h),
        CompositeTerm::IndicatorOfSet(set) => {
            // The indicator re-targets the step's feasible set; only prox
            // kinds whose mirror step supports that set qualify.
            let stepped = ProxSetup::new(prox.kind.clone(), set.clone()).map_err(|_| {
                crate::Error::config(
                    "indicator composite incompatible with the chosen prox setup",
                )
            })?;
            mirror_step(&stepped, center, linear, h)
        }
        CompositeTerm::L1Scaled(lam) => {
            if !matches!(prox.kind, ProxKind::EuclideanHalfSq)
                || prox.set != FeasibleSet::FreeSpace
            {
                return Err(crate::Error::config(
                    "l1 composite needs the Euclidean prox on free space (soft threshold)",
                ));
            }
            // argmin ⟨a,x⟩ + λ‖x‖₁ + (1/2h)‖x−c‖² = soft(c − h·a, h·λ)
            let shifted = crate::linalg::axpy(center, -h, linear);
            let t = h * *lam;
            Ok(shifted
                .iter()
                .map(|&v| {
                    if v > t {
                        v - t
                    } else if v < -t {
                        v + t
                    } else {
                        T::zero()
                    }
                })
                .collect())
        }
        CompositeTerm::EntropyScaled(mu) => {
            if !matches!(prox.kind, ProxKind::EntropySimplex) {
                return Err(crate::Error::config(
                    "entropy composite needs the entropy prox on the simplex",
                ));
            }
            // argmin ⟨a,x⟩ + μ Σ x ln x + (1/h) KL(x, c):
            // x_i ∝ exp((ln c_i / h − a_i) / (1/h + μ))
            //     = c_i^{1/(1+hμ)} · exp(−h a_i / (1 + hμ)).
            let one = T::one();
            let denom = one + h * *mu;
            let floor = real::<T>(1e-300);
            let m = linear.iter().fold(T::infinity(), |m, &a| m.min(a));
            let mut out: Vec<T> = center
                .iter()
                .zip(linear)
                .map(|(&ci, &ai)| {
                    let log_w = (ci.max(floor).ln() - h * (ai - m)) / denom;
                    log_w.exp()
                })
                .collect();
            let sum = out.iter().fold(T::zero(), |s, &v| s + v);
            let inv = one / sum;
            for o in &mut out {
                *o = (*o * inv).max(floor);
            }
            let sum = out.iter().fold(T::zero(), |s, &v| s + v);
            let inv = one / sum;
            for o in &mut out {
                *o = *o * inv;
            }
            Ok(out)
        }
        CompositeTerm::Custom(c) => c.solve_step(prox, center, linear, T::one(), h),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::FnObjective;

    fn quad_oracle() -> Oracle<f64> {
        Oracle::new(FnObjective::new(
            |x: &[f64]| 0.5 * crate::linalg::dot(x, x),
            |x: &[f64]| x.to_vec(),
        ))
    }

    #[test]
    fn linear_model_of_quadratic() {
        let m = ModelOracle::linear_model(quad_oracle());
        let model = m.query(&[1.0, 0.0]);
        assert!((model.f_delta - 0.5).abs() < 1e-15);
        assert_eq!(model.linear, vec![1.0, 0.0]);
        assert!(model.psi(&[1.0, 0.0]).abs() < 1e-15);
    }

    #[test]
    fn norm_oracle_gradient_away_from_zero() {
        let l0 = 2.0;
        let o = Oracle::new(FnObjective::new(
            move |x: &[f64]| l0 * crate::linalg::norm2(x),
            move |x: &[f64]| {
                let n = crate::linalg::norm2(x);
                if n == 0.0 {
                    // documented tie-break: first basis direction
                    let mut g = vec![0.0; x.len()];
                    g[0] = l0;
                    g
                } else {
                    x.iter().map(|&v| l0 * v / n).collect()
                }
            },
        ));
        let m = ModelOracle::linear_model(o);
        let model = m.query(&[3.0, 4.0]);
        assert!((model.linear[0] - 0.6 * l0).abs() < 1e-15);
        assert!((model.linear[1] - 0.8 * l0).abs() < 1e-15);
    }

    #[test]
    fn model_check_exact_smooth_is_zero() {
        let m = ModelOracle::linear_model(quad_oracle());
        let samples: Vec<(Vec<f64>, Vec<f64>)> = (0..100)
            .map(|i| {
                let t = i as f64 / 10.0;
                (vec![t.sin(), t.cos()], vec![(t + 1.0).sin(), (2.0 * t).cos()])
            })
            .collect();
        let v = model_check(&m, 1.0, 0.0, &samples);
        assert!(v.abs() < 1e-12, "violation {v}");
    }

    #[test]
    fn model_check_flags_understated_l() {
        let m = ModelOracle::linear_model(quad_oracle());
        // ‖y − x‖ = 2 ⇒ curvature term is 2 but the bound with L = 1/2 is 1.
        let samples = vec![(vec![0.0, 0.0], vec![2.0, 0.0])];
        let v = model_check(&m, 0.5, 0.0, &samples);
        assert!(v >= 0.5, "violation {v} should be at least 0.5");
        assert!((v - 1.0).abs() < 1e-12, "hand computation gives exactly 1");
    }

    #[test]
    fn holder_conversion_values() {
        assert!((holder_to_smooth_l(3.0f64, 1.0, 1e-9).unwrap() - 3.0).abs() < 1e-15);
        // ν = 0 closed form L₀²/(2δ)
        let l: f64 = holder_to_smooth_l(1.0, 0.0, 0.5).unwrap();
        assert!((l - 1.0).abs() < 1e-15);
        assert!(holder_to_smooth_l(1.0, 0.5, 0.0).is_err());
        // decreasing in δ for ν < 1
        let l1: f64 = holder_to_smooth_l(1.0, 0.5, 1e-3).unwrap();
        let l2 = holder_to_smooth_l(1.0, 0.5, 1e-2).unwrap();
        assert!(l1 > l2);
    }

    #[test]
    fn inexact_wrap_is_deterministic_and_checkable() {
        let m1 = ModelOracle::linear_model(quad_oracle()).inexact_wrap(1e-3, 42, 4.0);
        let m2 = ModelOracle::linear_model(quad_oracle()).inexact_wrap(1e-3, 42, 4.0);
        let q1 = m1.query(&[0.7, -0.3]);
        let q2 = m2.query(&[0.7, -0.3]);
        assert_eq!(q1.f_delta, q2.f_delta);
        assert_eq!(q1.linear, q2.linear);

        // Sandwich with the declared (δ, L) on the working ball.
        let samples: Vec<(Vec<f64>, Vec<f64>)> = (0..200)
            .map(|i| {
                let t = i as f64 * 0.37;
                (
                    vec![t.sin(), t.cos()],
                    vec![(1.3 * t).cos(), (0.9 * t).sin()],
                )
            })
            .collect();
        let v = model_check(&m1, 1.0, 1e-3, &samples);
        assert!(v <= 0.0 + 1e-15, "violation {v}");
    }

    #[test]
    fn soft_threshold_matches_bruteforce() {
        let prox = ProxSetup::euclidean(FeasibleSet::FreeSpace);
        let comp = CompositeTerm::L1Scaled(0.3);
        let center = vec![0.8, -0.2];
        let lin = vec![0.5, -0.1];
        let h = 0.7;
        let x = solve_model_step(&prox, &comp, &center, &lin, h).unwrap();
        // brute force per coordinate
        for i in 0..2 {
            let obj = |v: f64| {
                lin[i] * v + 0.3 * v.abs() + (v - center[i]).powi(2) / (2.0 * h)
            };
            let mut best = x[i];
            let mut best_val = obj(x[i]);
            let mut t = -2.0;
            while t <= 2.0 {
                if obj(t) < best_val {
                    best_val = obj(t);
                    best = t;
                }
                t += 1e-5;
            }
            assert!((x[i] - best).abs() < 1e-4, "coordinate {i}: {} vs {}", x[i], best);
        }
    }
}
