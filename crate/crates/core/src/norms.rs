//! p-norms and their duals.

use crate::scalar::Real;

/// Which norm a prox setup or a bound is expressed in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormSpec<T> {
    /// `‖x‖_p = (Σ|x_i|^p)^{1/p}`, `p ≥ 1`.
    Lp(T),
    /// Alias for `Lp(2)` kept distinct because it is the common case.
    Euclidean,
}

impl<T: Real> NormSpec<T> {
    pub fn p(&self) -> T {
        match self {
            NormSpec::Lp(p) => *p,
            NormSpec::Euclidean => T::one() + T::one(),
        }
    }

    pub fn validate(&self) -> crate::Result<()> {
        let p = self.p();
        if !(p >= T::one()) {
            return Err(crate::Error::domain(format!("p-norm needs p >= 1, got {p}")));
        }
        Ok(())
    }
}

/// `‖v‖` per the spec; nonnegative, zero iff `v = 0`.
pub fn norm<T: Real>(v: &[T], spec: NormSpec<T>) -> T {
    match spec {
        NormSpec::Euclidean => crate::linalg::norm2(v),
        NormSpec::Lp(p) => lp_norm(v, p),
    }
}

/// Dual norm: the q-norm with `1/p + 1/q = 1`; `p = 1` dualizes to max-abs.
pub fn dual_norm<T: Real>(v: &[T], spec: NormSpec<T>) -> T {
    let p = spec.p();
    if p == T::one() {
        return v.iter().fold(T::zero(), |m, &x| m.max(x.abs()));
    }
    let q = p / (p - T::one());
    lp_norm(v, q)
}

fn lp_norm<T: Real>(v: &[T], p: T) -> T {
    if p == T::one() {
        return v.iter().fold(T::zero(), |s, &x| s + x.abs());
    }
    let two = T::one() + T::one();
    if p == two {
        return crate::linalg::norm2(v);
    }
    // Rescale by the max entry so large p stays stable.
    let m = v.iter().fold(T::zero(), |m, &x| m.max(x.abs()));
    if m == T::zero() {
        return T::zero();
    }
    let s = v
        .iter()
        .fold(T::zero(), |s, &x| s + (x.abs() / m).powf(p));
    m * s.powf(T::one() / p)
}
