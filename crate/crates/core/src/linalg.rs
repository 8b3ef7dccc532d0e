//! Dense complex matrices sized for few-mode Fock spaces.
//!
//! The dimensions in this crate stay small (a truncated Fock basis or a
//! one-photon sector, typically below ~100), so a plain row-major buffer and
//! a cyclic Jacobi eigensolver are all that is needed. Everything is generic
//! over the scalar type.

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> CMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix {
            rows,
            cols,
            data: vec![Complex::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex::new(T::one(), T::zero());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// |u⟩⟨v| for coefficient vectors `u`, `v`.
    pub fn outer(u: &[Complex<T>], v: &[Complex<T>]) -> Self {
        Self::from_fn(u.len(), v.len(), |i, j| u[i] * v[j].conj())
    }

    /// Real diagonal matrix.
    pub fn diag(d: &[T]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, &x) in d.iter().enumerate() {
            m[(i, i)] = Complex::new(x, T::zero());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| *a + *b)
            .collect();
        CMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| *a - *b)
            .collect();
        CMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        let data = self.data.iter().map(|a| *a * s).collect();
        CMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale_re(&self, s: T) -> Self {
        self.scale(Complex::new(s, T::zero()))
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] = out[(i, j)] + a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> Complex<T> {
        debug_assert!(self.is_square());
        let mut t = Complex::zero();
        for i in 0..self.rows {
            t = t + self[(i, i)];
        }
        t
    }

    /// Tr[self · other] without forming the product.
    pub fn trace_product(&self, other: &Self) -> Complex<T> {
        assert_eq!(self.cols, other.rows);
        assert_eq!(self.rows, other.cols);
        let mut t = Complex::zero();
        for i in 0..self.rows {
            for k in 0..self.cols {
                t = t + self[(i, k)] * other[(k, i)];
            }
        }
        t
    }

    /// Real part of Tr[self · other]; exact for products of Hermitian pairs.
    pub fn trace_product_re(&self, other: &Self) -> T {
        self.trace_product(other).re
    }

    pub fn frobenius_norm(&self) -> T {
        self.data
            .iter()
            .map(|z| z.norm_sqr())
            .fold(T::zero(), |a, b| a + b)
            .sqrt()
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        if !self.is_square() {
            return false;
        }
        for i in 0..self.rows {
            for j in i..self.cols {
                let d = self[(i, j)] - self[(j, i)].conj();
                if d.norm_sqr().sqrt() > tol {
                    return false;
                }
            }
        }
        true
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self[(i, j)];
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out[(i * other.rows + k, j * other.cols + l)] = a * other[(k, l)];
                    }
                }
            }
        }
        out
    }

    /// Matrix–vector product.
    pub fn matvec(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut s = Complex::zero();
                for j in 0..self.cols {
                    s = s + self[(i, j)] * v[j];
                }
                s
            })
            .collect()
    }

    /// ⟨u| self |v⟩.
    pub fn sandwich(&self, u: &[Complex<T>], v: &[Complex<T>]) -> Complex<T> {
        let av = self.matvec(v);
        u.iter()
            .zip(&av)
            .map(|(a, b)| a.conj() * *b)
            .fold(Complex::zero(), |s, z| s + z)
    }

    /// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
    ///
    /// Returns eigenvalues in ascending order together with the unitary of
    /// matching eigenvector columns. Fails if the matrix is not Hermitian or
    /// if the sweep limit is reached before the off-diagonal mass vanishes.
    pub fn eigh(&self) -> Result<(Vec<T>, CMatrix<T>)> {
        let n = self.rows;
        if !self.is_square() {
            return Err(Error::domain("eigh requires a square matrix"));
        }
        let scale = self.frobenius_norm().max(T::one());
        if !self.is_hermitian(scale * crate::scalar::cst(1e-9)) {
            return Err(Error::domain("eigh requires a Hermitian matrix"));
        }
        let mut a = self.clone();
        // Symmetrize to kill representation noise.
        for i in 0..n {
            a[(i, i)] = Complex::new(a[(i, i)].re, T::zero());
            for j in (i + 1)..n {
                let m = (a[(i, j)] + a[(j, i)].conj()).scale(crate::scalar::cst(0.5));
                a[(i, j)] = m;
                a[(j, i)] = m.conj();
            }
        }
        let mut v = Self::identity(n);
        let eps = T::epsilon();
        let tiny = scale * eps * crate::scalar::cst(1e-2);
        let max_sweeps = 60;
        for _ in 0..max_sweeps {
            let mut off = T::zero();
            for p in 0..n {
                for q in (p + 1)..n {
                    off = off + a[(p, q)].norm_sqr();
                }
            }
            if off.sqrt() <= scale * eps * crate::scalar::cst(8.0) {
                let mut pairs: Vec<(T, usize)> = (0..n).map(|i| (a[(i, i)].re, i)).collect();
                pairs.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
                let eigvals: Vec<T> = pairs.iter().map(|p| p.0).collect();
                let vecs = Self::from_fn(n, n, |i, j| v[(i, pairs[j].1)]);
                return Ok((eigvals, vecs));
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let alpha = a[(p, q)];
                    let beta = alpha.norm_sqr().sqrt();
                    if beta <= tiny {
                        continue;
                    }
                    // Phase that makes the off-diagonal element real, then a
                    // real rotation that zeroes it.
                    let phase = alpha.scale(T::one() / beta); // e^{i phi}
                    let app = a[(p, p)].re;
                    let aqq = a[(q, q)].re;
                    let tau = (aqq - app) / (beta + beta);
                    let t = if tau >= T::zero() {
                        T::one() / (tau + (T::one() + tau * tau).sqrt())
                    } else {
                        -T::one() / (-tau + (T::one() + tau * tau).sqrt())
                    };
                    let c = T::one() / (T::one() + t * t).sqrt();
                    let s = t * c;
                    // Block entries of the unitary J restricted to (p, q):
                    //   J_pp = c          J_pq = s
                    //   J_qp = -s e^{-i phi}   J_qq = c e^{-i phi}
                    let jqp = phase.conj().scale(-s);
                    let jqq = phase.conj().scale(c);
                    // Columns: A <- A J
                    for k in 0..n {
                        let akp = a[(k, p)];
                        let akq = a[(k, q)];
                        a[(k, p)] = akp.scale(c) + akq * jqp;
                        a[(k, q)] = akp.scale(s) + akq * jqq;
                    }
                    // Rows: A <- J^dagger A
                    for k in 0..n {
                        let apk = a[(p, k)];
                        let aqk = a[(q, k)];
                        a[(p, k)] = apk.scale(c) + aqk * jqp.conj();
                        a[(q, k)] = apk.scale(s) + aqk * jqq.conj();
                    }
                    a[(p, q)] = Complex::zero();
                    a[(q, p)] = Complex::zero();
                    a[(p, p)] = Complex::new(a[(p, p)].re, T::zero());
                    a[(q, q)] = Complex::new(a[(q, q)].re, T::zero());
                    // Eigenvectors: V <- V J
                    for k in 0..n {
                        let vkp = v[(k, p)];
                        let vkq = v[(k, q)];
                        v[(k, p)] = vkp.scale(c) + vkq * jqp;
                        v[(k, q)] = vkp.scale(s) + vkq * jqq;
                    }
                }
            }
        }
        Err(Error::numerical("Jacobi eigensolver did not converge"))
    }

    /// Spectral projector onto the eigenspace with eigenvalues ≤ `tol`
    /// relative to the largest eigenvalue magnitude (the numerical kernel).
    pub fn kernel_projector(&self, tol: T) -> Result<CMatrix<T>> {
        let (vals, vecs) = self.eigh()?;
        let top = vals
            .iter()
            .map(|v| v.abs())
            .fold(T::zero(), T::max)
            .max(T::epsilon());
        let n = self.rows;
        let mut p = Self::zeros(n, n);
        for (k, &lam) in vals.iter().enumerate() {
            if lam.abs() <= tol * top {
                let col: Vec<Complex<T>> = (0..n).map(|i| vecs[(i, k)]).collect();
                p = p.add(&Self::outer(&col, &col));
            }
        }
        Ok(p)
    }
}

impl<T: Real> std::ops::Index<(usize, usize)> for CMatrix<T> {
    type Output = Complex<T>;
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.cols + j]
    }
}

impl<T: Real> std::ops::IndexMut<(usize, usize)> for CMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.cols + j]
    }
}

/// Real-to-complex lift used across modules.
pub(crate) fn cre<T: Real>(re: T) -> Complex<T> {
    Complex::new(re, T::zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64 as C64;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn matmul_identity() {
        let a = CMatrix::from_fn(3, 3, |i, j| c((i * 3 + j) as f64, (i + j) as f64));
        let id = CMatrix::identity(3);
        assert_eq!(a.matmul(&id), a);
        assert_eq!(id.matmul(&a), a);
    }

    #[test]
    fn eigh_pauli_x() {
        let mut sx = CMatrix::<f64>::zeros(2, 2);
        sx[(0, 1)] = c(1.0, 0.0);
        sx[(1, 0)] = c(1.0, 0.0);
        let (vals, vecs) = sx.eigh().unwrap();
        assert!((vals[0] + 1.0).abs() < 1e-14);
        assert!((vals[1] - 1.0).abs() < 1e-14);
        // Columns are eigenvectors.
        for k in 0..2 {
            let col: Vec<C64> = (0..2).map(|i| vecs[(i, k)]).collect();
            let av = sx.matvec(&col);
            for i in 0..2 {
                let d = av[i] - col[i] * c(vals[k], 0.0);
                assert!(d.norm() < 1e-13);
            }
        }
    }

    #[test]
    fn eigh_pauli_y() {
        let mut sy = CMatrix::<f64>::zeros(2, 2);
        sy[(0, 1)] = c(0.0, -1.0);
        sy[(1, 0)] = c(0.0, 1.0);
        let (vals, _) = sy.eigh().unwrap();
        assert!((vals[0] + 1.0).abs() < 1e-14);
        assert!((vals[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn eigh_reconstructs_random_hermitian() {
        // Deterministic pseudo-random Hermitian built from an LCG.
        let mut state = 0x1234_5678_u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64) / ((1u64 << 53) as f64) - 0.5
        };
        for n in [2usize, 3, 5, 8] {
            let mut g = CMatrix::<f64>::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    g[(i, j)] = c(next(), next());
                }
            }
            let h = g.add(&g.adjoint()).scale_re(0.5);
            let (vals, vecs) = h.eigh().unwrap();
            // V^dagger V = I
            let vtv = vecs.adjoint().matmul(&vecs);
            let dev = vtv.sub(&CMatrix::identity(n)).frobenius_norm();
            assert!(dev < 1e-12, "orthonormality dev {dev}");
            // V diag(vals) V^dagger = H
            let rec = vecs
                .matmul(&CMatrix::diag(&vals))
                .matmul(&vecs.adjoint());
            let err = rec.sub(&h).frobenius_norm();
            assert!(err < 1e-12, "reconstruction err {err} at n={n}");
            // Ascending order
            for w in vals.windows(2) {
                assert!(w[0] <= w[1] + 1e-14);
            }
        }
    }

    #[test]
    fn eigh_rejects_non_hermitian() {
        let mut m = CMatrix::<f64>::zeros(2, 2);
        m[(0, 1)] = c(1.0, 0.0);
        assert!(m.eigh().is_err());
    }

    #[test]
    fn kernel_projector_of_pure_state() {
        // rho = |0><0| in dim 3: kernel projector is diag(0, 1, 1).
        let e0 = [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        let rho = CMatrix::outer(&e0, &e0);
        let p = rho.kernel_projector(1e-10).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j && i > 0 { 1.0 } else { 0.0 };
                assert!((p[(i, j)] - c(want, 0.0)).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn kron_dimensions_and_values() {
        let a = CMatrix::from_fn(2, 2, |i, j| c((i + 1) as f64 * (j + 1) as f64, 0.0));
        let id = CMatrix::<f64>::identity(2);
        let k = a.kron(&id);
        assert_eq!(k.rows(), 4);
        assert!((k[(0, 0)] - a[(0, 0)]).norm() < 1e-15);
        assert!((k[(1, 1)] - a[(0, 0)]).norm() < 1e-15);
        assert!((k[(2, 2)] - a[(1, 1)]).norm() < 1e-15);
        assert!(k[(0, 1)].norm() < 1e-15);
    }

    #[test]
    fn trace_product_matches_matmul() {
        let a = CMatrix::from_fn(3, 3, |i, j| c(i as f64 - j as f64, (i * j) as f64));
        let b = CMatrix::from_fn(3, 3, |i, j| c((i + j) as f64, i as f64));
        let direct = a.trace_product(&b);
        let full = a.matmul(&b).trace();
        assert!((direct - full).norm() < 1e-12);
    }
}
