//! Small dense matrices and a Hermitian eigenvalue solver.

use std::ops::{Index, IndexMut};

use num_complex::Complex;

use crate::scalar::Real;

/// Dense square matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix<E> {
    dim: usize,
    data: Vec<E>,
}

impl<E: Copy> SquareMatrix<E> {
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> E) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)])
    }

    pub fn map<F: Copy>(&self, f: impl Fn(E) -> F) -> SquareMatrix<F> {
        SquareMatrix { dim: self.dim, data: self.data.iter().map(|&x| f(x)).collect() }
    }

    pub fn rows(&self) -> impl Iterator<Item = &[E]> {
        self.data.chunks(self.dim.max(1))
    }
}

impl<E> Index<(usize, usize)> for SquareMatrix<E> {
    type Output = E;
    fn index(&self, (i, j): (usize, usize)) -> &E {
        &self.data[i * self.dim + j]
    }
}

impl<E> IndexMut<(usize, usize)> for SquareMatrix<E> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut E {
        &mut self.data[i * self.dim + j]
    }
}

impl<T: Real> SquareMatrix<T> {
    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim);
        Self::from_fn(self.dim, |i, j| (0..self.dim).fold(T::zero(), |acc, k| acc + self[(i, k)] * rhs[(k, j)]))
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(i, j)] - rhs[(i, j)])
    }

    pub fn scaled(&self, s: T) -> Self {
        self.map(|x| x * s)
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, x| m.max(x.abs()))
    }

    pub fn apply(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        assert_eq!(self.dim, v.len());
        self.rows()
            .map(|row| row.iter().zip(v).fold(Complex::new(T::zero(), T::zero()), |acc, (&a, &x)| acc + x * a))
            .collect()
    }
}

impl<T: Real> SquareMatrix<Complex<T>> {
    /// Largest `|A - A^dagger|` entry.
    pub fn hermiticity_defect(&self) -> T {
        let mut worst = T::zero();
        for i in 0..self.dim {
            for j in 0..self.dim {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.dim).fold(Complex::new(T::zero(), T::zero()), |acc, i| acc + self[(i, i)])
    }
}

/// Eigenvalues (ascending) of a Hermitian matrix.
///
/// The matrix `H = A + iB` is embedded as the real symmetric
/// `[[A, -B], [B, A]]`, whose spectrum is that of `H` with every eigenvalue
/// doubled; the embedding is diagonalized by cyclic Jacobi rotations.
pub fn hermitian_eigenvalues<T: Real>(h: &SquareMatrix<Complex<T>>) -> Vec<T> {
    let n = h.dim();
    let m = 2 * n;
    let mut s = SquareMatrix::from_fn(m, |i, j| {
        let z = h[(i % n, j % n)];
        // symmetrize away round-off in the input
        let zt = h[(j % n, i % n)].conj();
        let (re, im) = ((z.re + zt.re) / T::lit(2.0), (z.im + zt.im) / T::lit(2.0));
        match (i < n, j < n) {
            (true, true) | (false, false) => re,
            (true, false) => -im,
            (false, true) => im,
        }
    });
    jacobi_symmetric(&mut s);
    let mut diag: Vec<T> = (0..m).map(|i| s[(i, i)]).collect();
    diag.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    diag.chunks(2).map(|pair| (pair[0] + pair[1]) / T::lit(2.0)).collect()
}

fn jacobi_symmetric<T: Real>(a: &mut SquareMatrix<T>) {
    let n = a.dim();
    let scale = a.max_abs().max(T::min_positive_value());
    for _sweep in 0..100 {
        let mut off = T::zero();
        for p in 0..n {
            for q in (p + 1)..n {
                off = off + a[(p, q)] * a[(p, q)];
            }
        }
        if off.sqrt() <= T::epsilon() * scale * T::lit(1e-2) {
            return;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq == T::zero() {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (T::lit(2.0) * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
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
}
