//! Dense symmetric eigensolver: Householder reduction to tridiagonal form
//! followed by the implicitly shifted QL iteration (the EISPACK `tred2` /
//! `tql2` pair). Work arrays are column-major so the Householder updates and
//! the QL rotations both sweep contiguous columns.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Full spectrum of a symmetric matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: DVector<f64>,
    /// Orthonormal eigenvectors as columns, in the order of `values`.
    pub vectors: DMatrix<f64>,
}

impl EigenDecomposition {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Largest `‖A v_k - λ_k v_k‖₂` over all pairs.
    pub fn max_residual(&self, matrix: &DMatrix<f64>) -> f64 {
        let av = matrix * &self.vectors;
        (0..self.len())
            .map(|k| (av.column(k) - self.vectors.column(k) * self.values[k]).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entry of `|Vᵀ V - I|`.
    pub fn orthonormality_error(&self) -> f64 {
        let n = self.len();
        (self.vectors.tr_mul(&self.vectors) - DMatrix::<f64>::identity(n, n)).amax()
    }
}

/// Symmetry tolerance, relative to the largest entry.
const SYMMETRY_TOL: f64 = 1e-10;

/// Eigen-decomposition of a dense symmetric matrix.
pub fn eigh_dense(matrix: &DMatrix<f64>) -> Result<EigenDecomposition> {
    let n = matrix.nrows();
    if !matrix.is_square() {
        return Err(Error::DimensionMismatch { expected: n, found: matrix.ncols() });
    }
    let scale = matrix.amax().max(1.0);
    let asym = (matrix - matrix.transpose()).amax();
    if !(asym <= SYMMETRY_TOL * scale) {
        return Err(Error::NotSymmetric(asym));
    }
    if n == 0 {
        return Ok(EigenDecomposition { values: DVector::zeros(0), vectors: DMatrix::zeros(0, 0) });
    }

    let mut work = Work { n, v: matrix.as_slice().to_vec() };
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    work.tred2(&mut d, &mut e);
    work.tql2(&mut d, &mut e)?;
    Ok(EigenDecomposition {
        values: DVector::from_vec(d),
        vectors: DMatrix::from_vec(n, n, work.v),
    })
}

/// Eigen-decomposition of the symmetric tridiagonal matrix with diagonal
/// `diag` and off-diagonal `off` (`off.len() == diag.len() - 1`).
pub fn eigh_tridiagonal(diag: &[f64], off: &[f64]) -> Result<EigenDecomposition> {
    let n = diag.len();
    if n > 0 && off.len() + 1 != n {
        return Err(Error::DimensionMismatch { expected: n.saturating_sub(1), found: off.len() });
    }
    let mut work = Work { n, v: DMatrix::<f64>::identity(n, n).as_slice().to_vec() };
    let mut d = diag.to_vec();
    // tql2 expects the subdiagonal in e[1..]
    let mut e = vec![0.0; n];
    e[1..].copy_from_slice(off);
    work.tql2(&mut d, &mut e)?;
    Ok(EigenDecomposition {
        values: DVector::from_vec(d),
        vectors: DMatrix::from_vec(n, n, work.v),
    })
}

struct Work {
    n: usize,
    /// column-major n×n
    v: Vec<f64>,
}

impl Work {
    #[inline]
    fn at(&self, row: usize, col: usize) -> f64 {
        self.v[row + col * self.n]
    }

    #[inline]
    fn at_mut(&mut self, row: usize, col: usize) -> &mut f64 {
        &mut self.v[row + col * self.n]
    }

    /// Householder tridiagonalization; on exit `d` holds the diagonal, `e`
    /// the subdiagonal in `e[1..]`, and `v` the accumulated transformation.
    fn tred2(&mut self, d: &mut [f64], e: &mut [f64]) {
        let n = self.n;
        for j in 0..n {
            d[j] = self.at(n - 1, j);
        }

        for i in (1..n).rev() {
            let mut scale = 0.0;
            let mut h = 0.0;
            for dk in &d[..i] {
                scale += dk.abs();
            }
            if scale == 0.0 {
                e[i] = d[i - 1];
                for j in 0..i {
                    d[j] = self.at(i - 1, j);
                    *self.at_mut(i, j) = 0.0;
                    *self.at_mut(j, i) = 0.0;
                }
            } else {
                for dk in &mut d[..i] {
                    *dk /= scale;
                    h += *dk * *dk;
                }
                let mut f = d[i - 1];
                let mut g = h.sqrt();
                if f > 0.0 {
                    g = -g;
                }
                e[i] = scale * g;
                h -= f * g;
                d[i - 1] = f - g;
                e[..i].fill(0.0);

                for j in 0..i {
                    f = d[j];
                    *self.at_mut(j, i) = f;
                    g = e[j] + self.at(j, j) * f;
                    let col = &self.v[j * n..j * n + n];
                    for k in j + 1..i {
                        g += col[k] * d[k];
                        e[k] += col[k] * f;
                    }
                    e[j] = g;
                }
                f = 0.0;
                for j in 0..i {
                    e[j] /= h;
                    f += e[j] * d[j];
                }
                let hh = f / (h + h);
                for j in 0..i {
                    e[j] -= hh * d[j];
                }
                for j in 0..i {
                    f = d[j];
                    g = e[j];
                    let col = &mut self.v[j * n..j * n + n];
                    for k in j..i {
                        col[k] -= f * e[k] + g * d[k];
                    }
                    d[j] = col[i - 1];
                    col[i] = 0.0;
                }
            }
            d[i] = h;
        }

        // accumulate transformations
        for i in 0..n.saturating_sub(1) {
            let vii = self.at(i, i);
            *self.at_mut(n - 1, i) = vii;
            *self.at_mut(i, i) = 1.0;
            let h = d[i + 1];
            if h != 0.0 {
                for k in 0..=i {
                    d[k] = self.at(k, i + 1) / h;
                }
                for j in 0..=i {
                    let (head, tail) = self.v.split_at_mut((i + 1) * n);
                    let next = &tail[..n];
                    let col = &mut head[j * n..j * n + n];
                    let g: f64 = (0..=i).map(|k| next[k] * col[k]).sum();
                    for k in 0..=i {
                        col[k] -= g * d[k];
                    }
                }
            }
            for k in 0..=i {
                *self.at_mut(k, i + 1) = 0.0;
            }
        }
        for j in 0..n {
            d[j] = self.at(n - 1, j);
            *self.at_mut(n - 1, j) = 0.0;
        }
        *self.at_mut(n - 1, n - 1) = 1.0;
        e[0] = 0.0;
    }

    /// Implicit QL on the tridiagonal `(d, e[1..])`, rotating the columns of
    /// `v`. Eigenpairs are sorted ascending on exit.
    fn tql2(&mut self, d: &mut [f64], e: &mut [f64]) -> Result<()> {
        let n = self.n;
        if n == 0 {
            return Ok(());
        }
        for i in 1..n {
            e[i - 1] = e[i];
        }
        e[n - 1] = 0.0;

        let max_iterations = 30 * n;
        let mut iterations = 0;
        let mut f = 0.0;
        let mut tst1: f64 = 0.0;
        let eps = f64::EPSILON;
        for l in 0..n {
            tst1 = tst1.max(d[l].abs() + e[l].abs());
            let mut m = l;
            while m < n - 1 && e[m].abs() > eps * tst1 {
                m += 1;
            }
            if m > l {
                loop {
                    iterations += 1;
                    if iterations > max_iterations {
                        return Err(Error::NoConvergence(max_iterations));
                    }
                    let mut g = d[l];
                    let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                    let mut r = p.hypot(1.0);
                    if p < 0.0 {
                        r = -r;
                    }
                    d[l] = e[l] / (p + r);
                    d[l + 1] = e[l] * (p + r);
                    let dl1 = d[l + 1];
                    let mut h = g - d[l];
                    for di in &mut d[l + 2..] {
                        *di -= h;
                    }
                    f += h;

                    p = d[m];
                    let mut c = 1.0;
                    let mut c2 = c;
                    let mut c3 = c;
                    let el1 = e[l + 1];
                    let mut s = 0.0;
                    let mut s2 = 0.0;
                    for i in (l..m).rev() {
                        c3 = c2;
                        c2 = c;
                        s2 = s;
                        g = c * e[i];
                        h = c * p;
                        r = p.hypot(e[i]);
                        e[i + 1] = s * r;
                        s = e[i] / r;
                        c = p / r;
                        p = c * d[i] - s * g;
                        d[i + 1] = h + s * (c * g + s * d[i]);

                        let (left, right) = self.v.split_at_mut((i + 1) * n);
                        let col_i = &mut left[i * n..];
                        let col_next = &mut right[..n];
                        for (a, b) in col_i.iter_mut().zip(col_next.iter_mut()) {
                            let t = *b;
                            *b = s * *a + c * t;
                            *a = c * *a - s * t;
                        }
                    }
                    p = -s * s2 * c3 * el1 * e[l] / dl1;
                    e[l] = s * p;
                    d[l] = c * p;
                    if e[l].abs() <= eps * tst1 {
                        break;
                    }
                }
            }
            d[l] += f;
            e[l] = 0.0;
        }

        // selection sort keeps the permutation cheap on already-sorted output
        for i in 0..n.saturating_sub(1) {
            let mut k = i;
            let mut p = d[i];
            for (j, &dj) in d.iter().enumerate().skip(i + 1) {
                if dj < p {
                    k = j;
                    p = dj;
                }
            }
            if k != i {
                d[k] = d[i];
                d[i] = p;
                for row in 0..n {
                    self.v.swap(row + i * n, row + k * n);
                }
            }
        }
        Ok(())
    }
}
