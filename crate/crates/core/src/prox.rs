//! Prox-functions, Bregman divergences and closed-form mirror steps.

use crate::norms::NormSpec;
use crate::scalar::{real, Real};
use crate::sets::FeasibleSet;

/// Positivity floor for entropy steps: the multiplicative update preserves
/// positivity analytically but underflows numerically.
const ENTROPY_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, PartialEq)]
pub enum ProxKind<T> {
    /// `d(x) = ½‖x‖₂²`.
    EuclideanHalfSq,
    /// `d(x) = Σ x_i ln x_i` on the unit simplex.
    EntropySimplex,
    /// `d(x) = 1/(2(p−1)) ‖x‖_p²`, `1 < p ≤ 2`, free space only.
    PNormSq { p: T },
}

/// A norm, a 1-strongly-convex prox-function for it and the feasible set the
/// mirror step solves over.
#[derive(Debug, Clone, PartialEq)]
pub struct ProxSetup<T> {
    pub norm: NormSpec<T>,
    pub kind: ProxKind<T>,
    pub set: FeasibleSet<T>,
}

impl<T: Real> ProxSetup<T> {
    pub fn new(kind: ProxKind<T>, set: FeasibleSet<T>) -> crate::Result<Self> {
        set.validate()?;
        let norm = match &kind {
            ProxKind::EuclideanHalfSq => NormSpec::Euclidean,
            ProxKind::EntropySimplex => {
                if set != FeasibleSet::Simplex {
                    return Err(crate::Error::config(
                        "entropy prox is defined on the unit simplex only",
                    ));
                }
                NormSpec::Lp(T::one())
            }
            ProxKind::PNormSq { p } => {
                let one = T::one();
                let two = one + one;
                if !(*p > one && *p <= two) {
                    return Err(crate::Error::config("p-norm prox needs 1 < p <= 2"));
                }
                if set != FeasibleSet::FreeSpace {
                    return Err(crate::Error::config(
                        "p-norm prox is supported on free space only",
                    ));
                }
                NormSpec::Lp(*p)
            }
        };
        Ok(ProxSetup { norm, kind, set })
    }

    pub fn euclidean(set: FeasibleSet<T>) -> Self {
        ProxSetup::new(ProxKind::EuclideanHalfSq, set).expect("euclidean prox is unrestricted")
    }

    pub fn entropy_simplex() -> Self {
        ProxSetup::new(ProxKind::EntropySimplex, FeasibleSet::Simplex).expect("valid")
    }

    /// `d(x)` itself.
    pub fn prox_function(&self, x: &[T]) -> T {
        match &self.kind {
            ProxKind::EuclideanHalfSq => {
                real::<T>(0.5) * crate::linalg::dot(x, x)
            }
            ProxKind::EntropySimplex => x.iter().fold(T::zero(), |s, &xi| {
                if xi > T::zero() {
                    s + xi * xi.ln()
                } else {
                    s
                }
            }),
            ProxKind::PNormSq { p } => {
                let n = crate::norms::norm(x, NormSpec::Lp(*p));
                n * n / (real::<T>(2.0) * (*p - T::one()))
            }
        }
    }

    /// `∇d(x)`; entropy requires strictly positive coordinates.
    pub fn prox_gradient(&self, x: &[T]) -> crate::Result<Vec<T>> {
        match &self.kind {
            ProxKind::EuclideanHalfSq => Ok(x.to_vec()),
            ProxKind::EntropySimplex => {
                if x.iter().any(|&xi| xi <= T::zero()) {
                    return Err(crate::Error::domain(
                        "entropy gradient needs strictly positive coordinates",
                    ));
                }
                Ok(x.iter().map(|&xi| xi.ln() + T::one()).collect())
            }
            ProxKind::PNormSq { p } => Ok(pnorm_mirror_map(x, *p)),
        }
    }
}

/// Bregman divergence `V(x, y) = d(x) − d(y) − ⟨∇d(y), x − y⟩ ≥ 0`.
pub fn bregman<T: Real>(setup: &ProxSetup<T>, x: &[T], y: &[T]) -> crate::Result<T> {
    assert_eq!(x.len(), y.len(), "bregman: dimension mismatch");
    match &setup.kind {
        ProxKind::EuclideanHalfSq => {
            let d = crate::linalg::sub(x, y);
            Ok(real::<T>(0.5) * crate::linalg::dot(&d, &d))
        }
        ProxKind::EntropySimplex => {
            // KL form: Σ x_i ln(x_i / y_i); x_i ln x_i -> 0 as x_i -> 0.
            if y.iter().any(|&yi| yi <= T::zero()) {
                return Err(crate::Error::domain(
                    "entropy divergence needs strictly positive second argument",
                ));
            }
            let mut s = T::zero();
            for (&xi, &yi) in x.iter().zip(y) {
                if xi > T::zero() {
                    s = s + xi * (xi / yi).ln();
                }
            }
            Ok(s.max(T::zero()))
        }
        ProxKind::PNormSq { .. } => {
            let gy = setup.prox_gradient(y)?;
            let diff = crate::linalg::sub(x, y);
            Ok(setup.prox_function(x) - setup.prox_function(y) - crate::linalg::dot(&gy, &diff))
        }
    }
}

/// `V(x, x0)`: the squared prox-radius entering every rate bound.
pub fn prox_radius<T: Real>(setup: &ProxSetup<T>, x0: &[T], x: &[T]) -> crate::Result<T> {
    bregman(setup, x, x0)
}

/// Exact minimizer of `⟨h·g, x − x_c⟩ + V(x, x_c)` over the setup's set.
pub fn mirror_step<T: Real>(
    setup: &ProxSetup<T>,
    x: &[T],
    g: &[T],
    h: T,
) -> crate::Result<Vec<T>> {
    assert_eq!(x.len(), g.len(), "mirror_step: dimension mismatch");
    if !(h > T::zero()) {
        return Err(crate::Error::domain("mirror step needs h > 0"));
    }
    if !crate::linalg::all_finite(g) {
        return Err(crate::Error::domain("mirror step needs a finite gradient"));
    }
    match &setup.kind {
        ProxKind::EuclideanHalfSq => {
            let target = crate::linalg::axpy(x, -h, g);
            Ok(setup.set.project(&target))
        }
        ProxKind::EntropySimplex => Ok(entropy_step(x, g, h)),
        ProxKind::PNormSq { p } => {
            let mapped = pnorm_mirror_map(x, *p);
            let shifted = crate::linalg::axpy(&mapped, -h, g);
            Ok(pnorm_mirror_map_inverse(&shifted, *p))
        }
    }
}

/// Multiplicative-weights update `x_i ∝ x_i exp(−h g_i)` with renormalization
/// and the positivity floor.
fn entropy_step<T: Real>(x: &[T], g: &[T], h: T) -> Vec<T> {
    let floor = real::<T>(ENTROPY_FLOOR);
    // Sub the max exponent for overflow safety.
    let m = g.iter().fold(T::infinity(), |m, &gi| m.min(gi));
    let mut out: Vec<T> = x
        .iter()
        .zip(g)
        .map(|(&xi, &gi)| (xi.max(floor)) * (-(h * (gi - m))).exp())
        .collect();
    let sum = out.iter().fold(T::zero(), |s, &v| s + v);
    let inv = T::one() / sum;
    for o in &mut out {
        *o = (*o * inv).max(floor);
    }
    // Renormalize once more after flooring.
    let sum = out.iter().fold(T::zero(), |s, &v| s + v);
    let inv = T::one() / sum;
    for o in &mut out {
        *o = *o * inv;
    }
    out
}

/// `∇d` for `d(x) = 1/(2(p−1))‖x‖_p²`.
pub fn pnorm_mirror_map<T: Real>(x: &[T], p: T) -> Vec<T> {
    let n = crate::norms::norm(x, NormSpec::Lp(p));
    if n == T::zero() {
        return vec![T::zero(); x.len()];
    }
    let two = real::<T>(2.0);
    let scale = n.powf(two - p) / (p - T::one());
    x.iter()
        .map(|&xi| scale * xi.signum() * xi.abs().powf(p - T::one()))
        .collect()
}

/// Unique `x` with `∇d(x) = s` for the p-norm prox (conjugate-map formula:
/// the inverse is the gradient of the dual-norm square).
pub fn pnorm_mirror_map_inverse<T: Real>(s: &[T], p: T) -> Vec<T> {
    let one = T::one();
    let two = real::<T>(2.0);
    assert!(p > one && p <= two, "pnorm map needs 1 < p <= 2");
    let q = p / (p - one);
    let t: Vec<T> = s.iter().map(|&si| si * (p - one)).collect();
    let n = crate::norms::norm(&t, NormSpec::Lp(q));
    if n == T::zero() {
        return vec![T::zero(); s.len()];
    }
    let scale = n.powf(two - q);
    t.iter()
        .map(|&ti| scale * ti.signum() * ti.abs().powf(q - one))
        .collect()
}

/// Re-export of the Euclidean simplex projection, the `π_Q` specialization
/// the mirror step uses on the simplex with the Euclidean prox.
pub use crate::sets::project_simplex_euclidean as project_simplex;

/// First-order optimality residual of a mirror step on its set:
/// `max_u ⟨h·g + ∇d(x⁺) − ∇d(x), x⁺ − u⟩` over the given probe points `u`.
pub fn mirror_step_residual<T: Real>(
    setup: &ProxSetup<T>,
    x: &[T],
    g: &[T],
    h: T,
    x_plus: &[T],
    probes: &[Vec<T>],
) -> crate::Result<T> {
    let gd_plus = setup.prox_gradient(x_plus)?;
    let gd = setup.prox_gradient(x)?;
    let mut stat: Vec<T> = vec![T::zero(); x.len()];
    for i in 0..x.len() {
        stat[i] = h * g[i] + gd_plus[i] - gd[i];
    }
    let mut worst = T::neg_infinity();
    for u in probes {
        let d = crate::linalg::sub(x_plus, u);
        worst = worst.max(crate::linalg::dot(&stat, &d));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn entropy() -> ProxSetup<f64> {
        ProxSetup::entropy_simplex()
    }

    #[test]
    fn bregman_examples() {
        let euc = ProxSetup::euclidean(FeasibleSet::FreeSpace);
        let v = bregman(&euc, &[1.0f64, 2.0], &[0.0, 0.0]).unwrap();
        assert!((v - 2.5).abs() < 1e-15);

        let e = entropy();
        let z = bregman(&e, &[0.5, 0.5], &[0.5, 0.5]).unwrap();
        assert!(z.abs() < 1e-15);

        let v = bregman(&e, &[0.5, 0.5], &[0.25, 0.75]).unwrap();
        let want = 0.5 * 2f64.ln() + 0.5 * (2.0 / 3.0f64).ln();
        assert!((v - want).abs() < 1e-12, "got {v}, want {want}");
    }

    #[test]
    fn bregman_entropy_rejects_zero_coordinate_in_y() {
        let e = entropy();
        assert!(bregman(&e, &[0.5, 0.5], &[0.0, 1.0]).is_err());
    }

    #[test]
    fn mirror_step_examples() {
        let euc = ProxSetup::euclidean(FeasibleSet::FreeSpace);
        let x = mirror_step(&euc, &[1.0, 1.0], &[1.0, 0.0], 1.0).unwrap();
        assert_eq!(x, vec![0.0, 1.0]);

        // Entropy on the 2-simplex with h·g = (ln 2, 0).
        let e = entropy();
        let x = mirror_step(&e, &[0.5, 0.5], &[2f64.ln(), 0.0], 1.0).unwrap();
        assert!((x[0] - 1.0 / 3.0).abs() < 1e-12);
        assert!((x[1] - 2.0 / 3.0).abs() < 1e-12);

        let boxed = ProxSetup::euclidean(FeasibleSet::Box {
            lo: vec![0.0, 0.0],
            hi: vec![1.0, 1.0],
        });
        let x = mirror_step(&boxed, &[0.5, 0.5], &[2.0, -2.0], 1.0).unwrap();
        assert_eq!(x, vec![0.0, 1.0]);
    }

    #[test]
    fn pnorm_map_roundtrip() {
        let p = 1.5;
        let x = vec![1.0f64, 0.0];
        let s = pnorm_mirror_map(&x, p);
        let back = pnorm_mirror_map_inverse(&s, p);
        for (a, b) in x.iter().zip(&back) {
            assert!((a - b).abs() < 1e-12, "roundtrip failed: {x:?} -> {back:?}");
        }

        // identity at p = 2
        let s = vec![3.0, -4.0];
        let back = pnorm_mirror_map_inverse(&s, 2.0);
        assert_eq!(back, s);

        let z = pnorm_mirror_map_inverse(&[0.0, 0.0, 0.0], 1.7);
        assert!(z.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn prox_radius_examples() {
        let euc = ProxSetup::euclidean(FeasibleSet::FreeSpace);
        let r = prox_radius(&euc, &[0.0f64, 0.0], &[1.0, 1.0]).unwrap();
        assert!((r - 1.0).abs() < 1e-15);

        let e = entropy();
        let uniform = vec![0.25; 4];
        let vertex = vec![1.0, 0.0, 0.0, 0.0];
        let r = prox_radius(&e, &uniform, &vertex).unwrap();
        assert!((r - 4f64.ln()).abs() < 1e-12);

        let r = prox_radius(&e, &uniform, &uniform).unwrap();
        assert!(r.abs() < 1e-15);
    }

    #[test]
    fn unsupported_combinations_are_config_errors() {
        assert!(ProxSetup::new(ProxKind::EntropySimplex, FeasibleSet::<f64>::FreeSpace).is_err());
        assert!(ProxSetup::new(ProxKind::PNormSq { p: 1.5 }, FeasibleSet::<f64>::Simplex).is_err());
        assert!(ProxSetup::new(ProxKind::PNormSq { p: 2.5 }, FeasibleSet::<f64>::FreeSpace).is_err());
    }

    #[test]
    fn entropy_mirror_step_matches_kkt_bisection() {
        // Independent route: solve the simplex KKT system for the
        // multiplier by bisection instead of the closed form.
        let e = entropy();
        let x = vec![0.3, 0.45, 0.25];
        let g = vec![0.8, -0.3, 0.1];
        let h = 0.7;
        let fast = mirror_step(&e, &x, &g, h).unwrap();

        let target = |lambda: f64| -> f64 {
            x.iter()
                .zip(&g)
                .map(|(&xi, &gi)| (xi.ln() - h * gi - 1.0 - lambda).exp())
                .sum::<f64>()
                - 1.0
        };
        let (mut lo, mut hi) = (-60.0, 60.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if target(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let lambda = 0.5 * (lo + hi);
        for (i, &fi) in fast.iter().enumerate() {
            let slow = (x[i].ln() - h * g[i] - 1.0 - lambda).exp();
            assert!((fi - slow).abs() < 1e-12, "coordinate {i}: {fi} vs {slow}");
        }
    }
}
