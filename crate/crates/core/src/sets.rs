//! Feasible sets of simple structure: everything a mirror step can project
//! onto in closed form.

use crate::scalar::{real, Real};

#[derive(Debug, Clone, PartialEq)]
pub enum FeasibleSet<T> {
    FreeSpace,
    /// Coordinatewise bounds, `lo ≤ hi`.
    Box { lo: Vec<T>, hi: Vec<T> },
    EuclideanBall { center: Vec<T>, radius: T },
    /// Unit simplex `S_n(1)`.
    Simplex,
    NonnegOrthant,
    /// Product of a free space block (first `num_free` coordinates) and the
    /// nonnegative orthant on the rest — the shape dual variables live in.
    AffineFree { num_free: usize },
}

impl<T: Real> FeasibleSet<T> {
    pub fn validate(&self) -> crate::Result<()> {
        match self {
            FeasibleSet::Box { lo, hi } => {
                if lo.len() != hi.len() {
                    return Err(crate::Error::config("box bounds disagree in dimension"));
                }
                if lo.iter().zip(hi).any(|(l, h)| l > h) {
                    return Err(crate::Error::config("box needs lo <= hi coordinatewise"));
                }
                Ok(())
            }
            FeasibleSet::EuclideanBall { radius, .. } => {
                if *radius > T::zero() {
                    Ok(())
                } else {
                    Err(crate::Error::config("ball radius must be positive"))
                }
            }
            _ => Ok(()),
        }
    }

    /// Euclidean projection onto the set.
    pub fn project(&self, v: &[T]) -> Vec<T> {
        match self {
            FeasibleSet::FreeSpace => v.to_vec(),
            FeasibleSet::Box { lo, hi } => {
                assert_eq!(v.len(), lo.len(), "box projection: dimension mismatch");
                v.iter()
                    .zip(lo.iter().zip(hi))
                    .map(|(&x, (&l, &h))| x.max(l).min(h))
                    .collect()
            }
            FeasibleSet::EuclideanBall { center, radius } => {
                assert_eq!(v.len(), center.len(), "ball projection: dimension mismatch");
                let d = crate::linalg::sub(v, center);
                let n = crate::linalg::norm2(&d);
                if n <= *radius {
                    v.to_vec()
                } else {
                    crate::linalg::axpy(center, *radius / n, &d)
                }
            }
            FeasibleSet::Simplex => project_simplex_euclidean(v),
            FeasibleSet::NonnegOrthant => v.iter().map(|&x| x.max(T::zero())).collect(),
            FeasibleSet::AffineFree { num_free } => v
                .iter()
                .enumerate()
                .map(|(i, &x)| if i < *num_free { x } else { x.max(T::zero()) })
                .collect(),
        }
    }

    pub fn contains(&self, v: &[T], tol: T) -> bool {
        match self {
            FeasibleSet::FreeSpace => true,
            FeasibleSet::Box { lo, hi } => v
                .iter()
                .zip(lo.iter().zip(hi))
                .all(|(&x, (&l, &h))| x >= l - tol && x <= h + tol),
            FeasibleSet::EuclideanBall { center, radius } => {
                crate::linalg::norm2(&crate::linalg::sub(v, center)) <= *radius + tol
            }
            FeasibleSet::Simplex => {
                let sum = v.iter().fold(T::zero(), |s, &x| s + x);
                v.iter().all(|&x| x >= -tol) && (sum - T::one()).abs() <= tol
            }
            FeasibleSet::NonnegOrthant => v.iter().all(|&x| x >= -tol),
            FeasibleSet::AffineFree { num_free } => v
                .iter()
                .enumerate()
                .all(|(i, &x)| i < *num_free || x >= -tol),
        }
    }

    /// Exact minimizer of a linear function over the set, where one exists in
    /// closed form. Used by accuracy certificates and gap computations.
    pub fn linear_min(&self, g: &[T]) -> crate::Result<Vec<T>> {
        match self {
            FeasibleSet::Box { lo, hi } => Ok(g
                .iter()
                .zip(lo.iter().zip(hi))
                .map(|(&gi, (&l, &h))| if gi >= T::zero() { l } else { h })
                .collect()),
            FeasibleSet::EuclideanBall { center, radius } => {
                let n = crate::linalg::norm2(g);
                if n == T::zero() {
                    return Ok(center.clone());
                }
                Ok(crate::linalg::axpy(center, -*radius / n, g))
            }
            FeasibleSet::Simplex => {
                let mut best = 0usize;
                for (i, gi) in g.iter().enumerate() {
                    if *gi < g[best] {
                        best = i;
                    }
                }
                let mut v = vec![T::zero(); g.len()];
                v[best] = T::one();
                Ok(v)
            }
            _ => Err(crate::Error::config(
                "linear minimization needs a compact set (box, ball or simplex)",
            )),
        }
    }
}

/// Euclidean projection onto the unit simplex by the sorted-threshold rule.
///
/// Exact up to floating point: entries ≥ 0 and the sum is renormalized to 1.
pub fn project_simplex_euclidean<T: Real>(v: &[T]) -> Vec<T> {
    let n = v.len();
    assert!(n > 0, "empty point");
    let mut sorted: Vec<T> = v.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).expect("finite entries"));
    let mut cumsum = T::zero();
    let mut theta = T::zero();
    let mut found = false;
    for (k, &s) in sorted.iter().enumerate() {
        cumsum = cumsum + s;
        let k1 = crate::scalar::from_usize::<T>(k + 1);
        let cand = (cumsum - T::one()) / k1;
        if s - cand > T::zero() {
            theta = cand;
        } else {
            found = true;
            break;
        }
    }
    // If never broke, all entries stay active and theta is from the last k.
    let _ = found;
    let mut out: Vec<T> = v.iter().map(|&x| (x - theta).max(T::zero())).collect();
    let sum = out.iter().fold(T::zero(), |s, &x| s + x);
    if sum > T::zero() {
        let inv = T::one() / sum;
        for o in &mut out {
            *o = *o * inv;
        }
    } else {
        // Degenerate numeric corner: fall back to the uniform point.
        let u = T::one() / crate::scalar::from_usize::<T>(n);
        for o in &mut out {
            *o = u;
        }
    }
    debug_assert!({
        let s: T = out.iter().fold(T::zero(), |s, &x| s + x);
        (s - T::one()).abs() < real(1e-12)
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simplex_projection_examples() {
        let p = project_simplex_euclidean(&[0.2f64, 0.3, 0.5]);
        assert!((p[0] - 0.2).abs() < 1e-12 && (p[1] - 0.3).abs() < 1e-12);

        let p = project_simplex_euclidean(&[0.5f64, 0.5, 2.0]);
        assert!(p[0].abs() < 1e-12 && p[1].abs() < 1e-12 && (p[2] - 1.0).abs() < 1e-12);

        let p = project_simplex_euclidean(&[1.0f64, 1.0]);
        assert!((p[0] - 0.5).abs() < 1e-12 && (p[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn box_projection_clamps() {
        let set = FeasibleSet::Box {
            lo: vec![0.0, 0.0],
            hi: vec![1.0, 1.0],
        };
        let p = set.project(&[-1.5, 2.5]);
        assert_eq!(p, vec![0.0, 1.0]);
    }

    #[test]
    fn linear_min_on_simplex_picks_smallest_coordinate() {
        let set: FeasibleSet<f64> = FeasibleSet::Simplex;
        let v = set.linear_min(&[3.0, -1.0, 0.5]).unwrap();
        assert_eq!(v, vec![0.0, 1.0, 0.0]);
    }
}
