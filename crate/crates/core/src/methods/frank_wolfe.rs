//! Conditional gradient (Frank-Wolfe) for quadratics on the unit simplex.

use crate::linalg::{dot, Mat};
use crate::scalar::{from_usize, real, Real};
use crate::trace::{Trace, TraceBuilder};

/// Minimizes `f(x) = ½⟨Ax, x⟩` over the unit simplex starting at a vertex.
///
/// Step `γ_k = 2/(k+2)`; the linear subproblem picks the vertex of the
/// smallest gradient coordinate with lowest-index tie-break, so traces are
/// reproducible. Iterates stay exactly on the simplex (convex combinations
/// of simplex points).
pub fn frank_wolfe_simplex<T: Real>(
    a: &Mat<T>,
    x0: &[T],
    iterations: usize,
) -> crate::Result<Trace<T>> {
    assert_eq!(a.rows, a.cols, "frank-wolfe needs a square matrix");
    assert_eq!(x0.len(), a.rows, "frank-wolfe: dimension mismatch");
    let is_vertex = x0
        .iter()
        .all(|&v| v == T::zero() || v == T::one())
        && (x0.iter().fold(T::zero(), |s, &v| s + v) - T::one()).abs() < real(1e-15);
    if !is_vertex {
        return Err(crate::Error::config("start must be a vertex of the simplex"));
    }

    let f = |x: &[T]| real::<T>(0.5) * dot(&a.matvec(x), x);
    let mut x = x0.to_vec();
    let mut builder = TraceBuilder::new(x.clone(), f(&x), T::one());
    for k in 0..iterations {
        let g = a.matvec(&x);
        // lowest index among the minimizing coordinates
        let mut best = 0usize;
        for (i, gi) in g.iter().enumerate() {
            if *gi < g[best] {
                best = i;
            }
        }
        let gamma = real::<T>(2.0) / (from_usize::<T>(k) + real::<T>(2.0));
        for (i, xi) in x.iter_mut().enumerate() {
            let vertex = if i == best { T::one() } else { T::zero() };
            *xi = (T::one() - gamma) * *xi + gamma * vertex;
        }
        builder.push(x.clone(), f(&x), T::one());
    }
    Ok(builder.finish(0, 0))
}
