//! Dense complex linear algebra: arithmetic, adjoints, Hermitian
//! eigendecomposition, operator norms, matrix absolute values, and scalar
//! functional calculus on positive semidefinite matrices.
//!
//! Everything here is sized for desk-scale operators (dimension at most a few
//! dozen); the eigensolver is a cyclic complex Jacobi iteration, which is
//! dependency-free and quadratically convergent at these sizes.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Off-diagonal Frobenius mass below `JACOBI_TOL * ||A||_F` stops the sweep.
const JACOBI_TOL: f64 = 1e-13;
/// Hard cap on Jacobi sweeps before reporting non-convergence.
const JACOBI_MAX_SWEEPS: usize = 100;
/// Hermiticity check threshold, relative to `max(1, ||A||_F)`.
const HERMITIAN_TOL: f64 = 1e-10;
/// Relative threshold separating roundoff from a genuinely indefinite input
/// when clamping eigenvalues in [`ComplexMatrix::apply_fn`].
const CLAMP_REL: f64 = 1e-8;
/// Maximum number of repeated squarings in the spectral-radius iteration.
const GELFAND_MAX_SQUARINGS: i32 = 30;
/// Norm collapse below this is treated as a nilpotent input.
const GELFAND_UNDERFLOW: f64 = 1e-100;

/// Dense complex matrix in row-major order. Immutable after construction.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries, rejecting empty shapes and
    /// non-finite values.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{rows}x{cols} with {} entries",
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0);
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn diag(values: &[Complex64]) -> Self {
        let n = values.len();
        Self::from_fn(n, n, |i, j| {
            if i == j {
                values[i]
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    /// Real-valued matrix from row-major real entries.
    pub fn from_real(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        Self::new(
            rows,
            cols,
            entries.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
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

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn scale(&self, z: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&w| w * z).collect(),
        }
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.cols, "matrix-vector shape mismatch");
        let mut out = vec![Complex64::new(0.0, 0.0); self.rows];
        for i in 0..self.rows {
            let row = &self.data[i * self.cols..(i + 1) * self.cols];
            let mut acc = Complex64::new(0.0, 0.0);
            for (a, b) in row.iter().zip(v) {
                acc += a * b;
            }
            out[i] = acc;
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
    ///
    /// Requires `||A - A*||_F <= 1e-10 * max(1, ||A||_F)`. Eigenvalues are
    /// returned ascending with matching eigenvector columns.
    pub fn herm_eig(&self) -> Result<HermEig> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} not square",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let fro = self.frobenius_norm();
        if !fro.is_finite() {
            return Err(Error::NonFinite);
        }
        let deviation = (self - &self.adjoint()).frobenius_norm();
        if deviation > HERMITIAN_TOL * fro.max(1.0) {
            return Err(Error::NotHermitian { deviation });
        }

        // Work on the exactly-Hermitized copy so roundoff asymmetry cannot
        // leak into the rotations.
        let mut a = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                a[i * n + j] = (self.get(i, j) + self.get(j, i).conj()) * 0.5;
            }
            a[i * n + i] = Complex64::new(a[i * n + i].re, 0.0);
        }
        let mut v = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            v[i * n + i] = Complex64::new(1.0, 0.0);
        }

        let target = JACOBI_TOL * fro;
        let mut converged = false;
        for _sweep in 0..JACOBI_MAX_SWEEPS {
            let off: f64 = {
                let mut s = 0.0;
                for i in 0..n {
                    for j in 0..n {
                        if i != j {
                            s += a[i * n + j].norm_sqr();
                        }
                    }
                }
                s.sqrt()
            };
            if off <= target {
                converged = true;
                break;
            }
            for p in 0..n.saturating_sub(1) {
                for q in (p + 1)..n {
                    let apq = a[p * n + q];
                    let g = apq.norm();
                    if g < f64::MIN_POSITIVE {
                        continue;
                    }
                    let app = a[p * n + p].re;
                    let aqq = a[q * n + q].re;
                    let theta = (aqq - app) / (2.0 * g);
                    let t = if theta == 0.0 {
                        1.0
                    } else {
                        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                    };
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = (apq / g) * (t * c);

                    // A <- J* A J with J embedding [[c, s], [-conj(s), c]]
                    // at (p, q); columns first, then rows.
                    for k in 0..n {
                        let x = a[k * n + p];
                        let y = a[k * n + q];
                        a[k * n + p] = x * c - y * s.conj();
                        a[k * n + q] = x * s + y * c;
                    }
                    for k in 0..n {
                        let x = a[p * n + k];
                        let y = a[q * n + k];
                        a[p * n + k] = x * c - y * s;
                        a[q * n + k] = x * s.conj() + y * c;
                    }
                    a[p * n + q] = Complex64::new(0.0, 0.0);
                    a[q * n + p] = Complex64::new(0.0, 0.0);
                    a[p * n + p] = Complex64::new(a[p * n + p].re, 0.0);
                    a[q * n + q] = Complex64::new(a[q * n + q].re, 0.0);
                    for k in 0..n {
                        let x = v[k * n + p];
                        let y = v[k * n + q];
                        v[k * n + p] = x * c - y * s.conj();
                        v[k * n + q] = x * s + y * c;
                    }
                }
            }
        }
        if !converged {
            let off: f64 = (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .filter(|&(i, j)| i != j)
                .map(|(i, j)| a[i * n + j].norm_sqr())
                .sum::<f64>()
                .sqrt();
            if off > target {
                return Err(Error::NoConvergence("Jacobi sweep cap exceeded"));
            }
        }

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| a[i * n + i].re.total_cmp(&a[j * n + j].re));
        let eigenvalues: Vec<f64> = order.iter().map(|&k| a[k * n + k].re).collect();
        let eigenvectors = ComplexMatrix::from_fn(n, n, |i, j| v[i * n + order[j]]);
        Ok(HermEig {
            eigenvalues,
            eigenvectors,
        })
    }

    /// Largest singular value, `sqrt(lambda_max(A* A))`.
    pub fn operator_norm(&self) -> f64 {
        let gram = &self.adjoint() * self;
        let eig = gram
            .herm_eig()
            .expect("Gram matrix eigendecomposition failed");
        eig.eigenvalues
            .last()
            .copied()
            .unwrap_or(0.0)
            .max(0.0)
            .sqrt()
    }

    /// PSD square root of `A* A` (the polar absolute value `|A|`).
    pub fn abs_op(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch(format!(
                "|X| requires a square matrix, got {}x{}",
                self.rows, self.cols
            )));
        }
        let gram = &self.adjoint() * self;
        let eig = gram.herm_eig()?;
        Ok(eig.map(|lam| lam.max(0.0).sqrt()))
    }

    /// Applies a scalar function to a Hermitian PSD matrix through its
    /// spectral decomposition: `V diag(f(lambda)) V*`.
    ///
    /// Eigenvalues in `[-1e-8 * ||A||, 0)` are treated as roundoff and
    /// clamped to zero; anything more negative is a misuse and errors.
    pub fn apply_fn(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        let eig = self.herm_eig()?;
        let scale = eig
            .eigenvalues
            .iter()
            .fold(0.0f64, |m, &lam| m.max(lam.abs()));
        let min = eig.eigenvalues.first().copied().unwrap_or(0.0);
        if min < -CLAMP_REL * scale {
            return Err(Error::NegativeSpectrum(min));
        }
        Ok(eig.map(|lam| f(lam.max(0.0))))
    }

    /// Spectral radius estimate via scaled repeated squaring of the limit
    /// `||A^(2^m)||^(1/2^m)`, renormalizing each step and accumulating the
    /// log magnitude. Stops once two consecutive estimates agree to `tol/8`
    /// relative, leaving the tail comfortably inside `tol`.
    pub fn gelfand_spectral_radius(&self, tol: f64) -> Result<f64> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} not square",
                self.rows, self.cols
            )));
        }
        assert!(tol > 0.0, "tolerance must be positive");
        let mut b = self.clone();
        let mut acc = 0.0f64;
        let mut prev = f64::INFINITY;
        let mut stable = 0;
        for m in 0..=GELFAND_MAX_SQUARINGS {
            let s = b.frobenius_norm();
            if s < GELFAND_UNDERFLOW {
                return Ok(0.0);
            }
            acc += s.ln() / f64::powi(2.0, m);
            let est = acc.exp();
            if (est - prev).abs() <= (tol / 8.0) * est.max(1.0) {
                stable += 1;
                if stable >= 2 {
                    return Ok(est);
                }
            } else {
                stable = 0;
            }
            prev = est;
            if m < GELFAND_MAX_SQUARINGS {
                let scaled = b.scale(Complex64::new(1.0 / s, 0.0));
                b = &scaled * &scaled;
            }
        }
        Err(Error::NoConvergence(
            "spectral radius squaring cap exceeded",
        ))
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert!(
            self.rows == rhs.rows && self.cols == rhs.cols,
            "addition shape mismatch"
        );
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert!(
            self.rows == rhs.rows && self.cols == rhs.cols,
            "subtraction shape mismatch"
        );
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "multiplication shape mismatch");
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self.data[i * self.cols + k];
                if aik.re == 0.0 && aik.im == 0.0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += aik * rhs.data[k * rhs.cols + j];
                }
            }
        }
        out
    }
}

/// Eigendecomposition of a Hermitian matrix: ascending real eigenvalues and
/// a unitary matrix whose columns are the matching eigenvectors.
#[derive(Clone, Debug)]
pub struct HermEig {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl HermEig {
    /// `sum_k f(lambda_k) v_k v_k*`, assembled with a symmetric product so
    /// the result is Hermitian to the bit.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let fv: Vec<f64> = self.eigenvalues.iter().map(|&lam| f(lam)).collect();
        let mut out = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..=i {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    let a = v.get(i, k);
                    let b = v.get(j, k);
                    // a * conj(b), expanded so (i,j) and (j,i) share products
                    acc += Complex64::new(
                        fv[k] * (a.re * b.re + a.im * b.im),
                        fv[k] * (a.im * b.re - a.re * b.im),
                    );
                }
                out.data[i * n + j] = acc;
                out.data[j * n + i] = acc.conj();
            }
            let d = out.data[i * n + i];
            out.data[i * n + i] = Complex64::new(d.re, 0.0);
        }
        out
    }

    /// `V diag(lambda) V*`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map(|lam| lam)
    }
}

/// Inner product `sum_i u_i conj(v_i)`, linear in the first argument.
pub fn inner(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    assert_eq!(u.len(), v.len(), "inner product length mismatch");
    u.iter().zip(v).map(|(a, b)| a * b.conj()).sum()
}

pub fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}
