//! Dense vector/matrix helpers shared by the solvers and the problem zoo.

use crate::scalar::{from_usize, real, Real};

#[inline]
pub fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    assert_eq!(a.len(), b.len(), "dot: dimension mismatch");
    a.iter().zip(b).fold(T::zero(), |s, (&x, &y)| s + x * y)
}

#[inline]
pub fn norm2<T: Real>(a: &[T]) -> T {
    dot(a, a).sqrt()
}

/// `out = x + alpha * y`
pub fn axpy<T: Real>(x: &[T], alpha: T, y: &[T]) -> Vec<T> {
    assert_eq!(x.len(), y.len(), "axpy: dimension mismatch");
    x.iter().zip(y).map(|(&a, &b)| a + alpha * b).collect()
}

pub fn sub<T: Real>(a: &[T], b: &[T]) -> Vec<T> {
    assert_eq!(a.len(), b.len(), "sub: dimension mismatch");
    a.iter().zip(b).map(|(&x, &y)| x - y).collect()
}

pub fn add<T: Real>(a: &[T], b: &[T]) -> Vec<T> {
    assert_eq!(a.len(), b.len(), "add: dimension mismatch");
    a.iter().zip(b).map(|(&x, &y)| x + y).collect()
}

pub fn scale<T: Real>(a: &[T], s: T) -> Vec<T> {
    a.iter().map(|&x| x * s).collect()
}

pub fn all_finite<T: Real>(a: &[T]) -> bool {
    a.iter().all(|x| x.is_finite())
}

/// Dense row-major matrix; the instances here are small (n ≤ a few hundred).
#[derive(Debug, Clone, PartialEq)]
pub struct Mat<T> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<T>,
}

impl<T: Real> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.cols + j]
    }

    pub fn matvec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.cols, "matvec: dimension mismatch");
        (0..self.rows)
            .map(|i| {
                let row = &self.data[i * self.cols..(i + 1) * self.cols];
                dot(row, x)
            })
            .collect()
    }

    pub fn matvec_t(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.rows, "matvec_t: dimension mismatch");
        let mut out = vec![T::zero(); self.cols];
        for i in 0..self.rows {
            let xi = x[i];
            for j in 0..self.cols {
                out[j] = out[j] + self.get(i, j) * xi;
            }
        }
        out
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> Mat<T> {
        let mut out = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self.get(i, j);
            }
        }
        out
    }

    pub fn matmul(&self, other: &Mat<T>) -> Mat<T> {
        assert_eq!(self.cols, other.rows, "matmul: dimension mismatch");
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self.get(i, k);
                if aik == T::zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] = out[(i, j)] + aik * other.get(k, j);
                }
            }
        }
        out
    }

    /// `A A^T`, symmetric `rows × rows`.
    pub fn gram_left(&self) -> Mat<T> {
        self.matmul(&self.transpose())
    }

    /// `A^T A`, symmetric `cols × cols`.
    pub fn gram_right(&self) -> Mat<T> {
        self.transpose().matmul(self)
    }
}

impl<T: Real> std::ops::Index<(usize, usize)> for Mat<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T: Real> std::ops::IndexMut<(usize, usize)> for Mat<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

/// Eigenvalues of a symmetric matrix via cyclic Jacobi rotations.
///
/// Plenty for the small spectra needed here (Laplacians, Gram matrices).
pub fn symmetric_eigenvalues<T: Real>(m: &Mat<T>) -> Vec<T> {
    assert_eq!(m.rows, m.cols, "eigenvalues need a square matrix");
    let n = m.rows;
    let mut a = m.clone();
    let tol = real::<T>(1e-14);
    for _sweep in 0..100 {
        let mut off = T::zero();
        for i in 0..n {
            for j in (i + 1)..n {
                off = off + a[(i, j)] * a[(i, j)];
            }
        }
        let scale = (0..n).fold(T::zero(), |s, i| s + a[(i, i)].abs()) + T::one();
        if off.sqrt() <= tol * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq.abs() <= tol * scale * real(1e-3) {
                    continue;
                }
                let app = a[(p, p)];
                let aqq = a[(q, q)];
                let theta = (aqq - app) / (real::<T>(2.0) * apq);
                let t = {
                    let s = if theta >= T::zero() { T::one() } else { -T::one() };
                    s / (theta.abs() + (theta * theta + T::one()).sqrt())
                };
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[(i, i)]).collect()
}

/// Largest eigenvalue of a symmetric matrix.
pub fn lambda_max<T: Real>(m: &Mat<T>) -> T {
    symmetric_eigenvalues(m)
        .into_iter()
        .fold(T::neg_infinity(), T::max)
}

/// Smallest strictly positive eigenvalue of a symmetric PSD matrix; `None`
/// if the positive spectrum is numerically empty.
pub fn smallest_positive_eigenvalue<T: Real>(m: &Mat<T>, abs_floor: T) -> Option<T> {
    symmetric_eigenvalues(m)
        .into_iter()
        .filter(|&l| l > abs_floor)
        .fold(None, |acc, l| Some(acc.map_or(l, |a: T| a.min(l))))
}

/// Solve `T x = d` for a symmetric tridiagonal matrix given by its diagonal
/// and off-diagonal (Thomas algorithm).
pub fn tridiag_solve<T: Real>(diag: &[T], off: &[T], rhs: &[T]) -> Vec<T> {
    let n = diag.len();
    assert_eq!(off.len() + 1, n);
    assert_eq!(rhs.len(), n);
    let mut c = vec![T::zero(); n];
    let mut d = vec![T::zero(); n];
    c[0] = off.first().copied().unwrap_or(T::zero()) / diag[0];
    d[0] = rhs[0] / diag[0];
    for i in 1..n {
        let m = diag[i] - off[i - 1] * c[i - 1];
        if i < n - 1 {
            c[i] = off[i] / m;
        }
        d[i] = (rhs[i] - off[i - 1] * d[i - 1]) / m;
    }
    let mut x = vec![T::zero(); n];
    x[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    x
}

/// Random orthogonal matrix from Gram-Schmidt on a seeded Gaussian matrix.
/// Randomness is drawn in `f64` and cast, so every scalar type sees the same
/// matrix.
pub fn random_orthogonal<T: Real>(n: usize, rng: &mut impl rand::Rng) -> Mat<T> {
    use rand::distributions::Distribution;
    let normal = GaussianPairs::new();
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(n);
    while cols.len() < n {
        let mut v: Vec<f64> = (0..n).map(|_| normal.sample(rng)).collect();
        for c in &cols {
            let proj: f64 = v.iter().zip(c).map(|(a, b)| a * b).sum();
            for (vi, ci) in v.iter_mut().zip(c) {
                *vi -= proj * ci;
            }
        }
        let nrm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if nrm > 1e-8 {
            for vi in &mut v {
                *vi /= nrm;
            }
            cols.push(v);
        }
    }
    let mut m = Mat::zeros(n, n);
    for (j, col) in cols.iter().enumerate() {
        for i in 0..n {
            m[(i, j)] = real(col[i]);
        }
    }
    m
}

/// Box-Muller standard normal; avoids pulling a heavier distribution crate.
struct GaussianPairs;

impl GaussianPairs {
    fn new() -> Self {
        GaussianPairs
    }
}

impl rand::distributions::Distribution<f64> for GaussianPairs {
    fn sample<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
        let u2: f64 = rng.gen_range(0.0..1.0);
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }
}

/// Weighted running average of points, renormalized to weight one.
#[derive(Debug, Clone)]
pub struct WeightedMean<T> {
    sum: Vec<T>,
    weight: T,
}

impl<T: Real> WeightedMean<T> {
    pub fn new(dim: usize) -> Self {
        WeightedMean {
            sum: vec![T::zero(); dim],
            weight: T::zero(),
        }
    }

    pub fn push(&mut self, x: &[T], w: T) {
        assert_eq!(x.len(), self.sum.len());
        for (s, &xi) in self.sum.iter_mut().zip(x) {
            *s = *s + w * xi;
        }
        self.weight = self.weight + w;
    }

    pub fn total_weight(&self) -> T {
        self.weight
    }

    pub fn mean(&self) -> Vec<T> {
        if self.weight == T::zero() {
            return self.sum.clone();
        }
        scale(&self.sum, T::one() / self.weight)
    }
}

/// Mean of `k` equals sum of `1..=k` divided by `k`; tiny helper for uniform
/// averaging conventions.
pub fn uniform_mean_weight<T: Real>(count: usize) -> T {
    T::one() / from_usize::<T>(count.max(1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tridiag_solves_small_system() {
        // [2 -1 0; -1 2 -1; 0 -1 2] x = e1  =>  x = (3/4, 1/2, 1/4)
        let diag = vec![2.0, 2.0, 2.0];
        let off = vec![-1.0, -1.0];
        let x = tridiag_solve(&diag, &off, &[1.0f64, 0.0, 0.0]);
        assert!((x[0] - 0.75).abs() < 1e-12);
        assert!((x[1] - 0.5).abs() < 1e-12);
        assert!((x[2] - 0.25).abs() < 1e-12);
    }

    #[test]
    fn jacobi_matches_known_laplacian_spectrum() {
        // P3 path Laplacian has eigenvalues {0, 1, 3}.
        let w = Mat::from_rows(vec![
            vec![1.0f64, -1.0, 0.0],
            vec![-1.0, 2.0, -1.0],
            vec![0.0, -1.0, 1.0],
        ]);
        let mut eig = symmetric_eigenvalues(&w);
        eig.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((eig[0] - 0.0).abs() < 1e-10);
        assert!((eig[1] - 1.0).abs() < 1e-10);
        assert!((eig[2] - 3.0).abs() < 1e-10);
    }

    #[test]
    fn orthogonal_matrix_is_orthogonal() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let q: Mat<f64> = random_orthogonal(6, &mut rng);
        let qtq = q.gram_right();
        for i in 0..6 {
            for j in 0..6 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((qtq[(i, j)] - want).abs() < 1e-10);
            }
        }
    }
}
