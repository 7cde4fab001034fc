//! Dense complex linear algebra for small Hilbert spaces.
//!
//! Row-major storage, no sparsity, and a cyclic Jacobi eigensolver: every
//! operator in this crate fits in a few hundred rows, so O(n³) with dense
//! arrays is plenty. All values are immutable after construction and the
//! operations are pure functions, so everything here is freely shareable
//! across threads.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Complex amplitude. All stored values are required to be finite.
pub type Scalar = Complex64;

/// Default relative tolerance for positive-semidefiniteness tests.
///
/// Feasibility optima sit exactly on the PSD boundary, so the test must
/// accept eigenvalues down to `-PSD_TOL * max(1, spectral norm)`.
pub const PSD_TOL: f64 = 1e-10;

/// Entrywise tolerance below which a matrix is accepted as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;

const MAX_JACOBI_SWEEPS: usize = 64;

/// A ket in a finite-dimensional Hilbert space.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: Vec<Scalar>,
}

impl StateVector {
    /// Wraps raw amplitudes. Rejects empty and non-finite input.
    pub fn new(amps: Vec<Scalar>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::InvalidDimension(
                "state vector must be non-empty".into(),
            ));
        }
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::NonFinite("state vector amplitude".into()));
        }
        Ok(Self { amps })
    }

    /// The computational basis ket `|k⟩` in dimension `dim`.
    pub fn basis(dim: usize, k: usize) -> Self {
        assert!(k < dim, "basis index {k} out of range for dimension {dim}");
        let mut amps = vec![Scalar::ZERO; dim];
        amps[k] = Scalar::ONE;
        Self { amps }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amp(&self, i: usize) -> Scalar {
        self.amps[i]
    }

    pub fn amps(&self) -> &[Scalar] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm() - 1.0).abs() <= tol
    }

    /// Returns the unit-norm rescaling, or an error for the zero vector.
    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n <= f64::MIN_POSITIVE.sqrt() {
            return Err(Error::InvalidParameter(
                "cannot normalize the zero vector".into(),
            ));
        }
        Ok(self.scaled(Scalar::new(1.0 / n, 0.0)))
    }

    pub fn scaled(&self, z: Scalar) -> Self {
        Self {
            amps: self.amps.iter().map(|a| a * z).collect(),
        }
    }

    /// Inner product `⟨self|other⟩` (conjugate-linear in `self`).
    pub fn inner(&self, other: &Self) -> Result<Scalar> {
        if self.dim() != other.dim() {
            return Err(Error::DimMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Tensor product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        Self { amps }
    }
}

/// Eigensystem of a Hermitian operator: real eigenvalues in ascending order
/// with the matching eigenvectors as the columns of a unitary.
#[derive(Debug, Clone)]
pub struct HermitianEig {
    pub values: Vec<f64>,
    pub vectors: Operator,
}

/// A dense complex matrix, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

impl Operator {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "operator dimensions must be positive");
        Self {
            rows,
            cols,
            entries: vec![Scalar::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::ONE);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Builds an operator from nested rows. Rows must be non-empty and equal length.
    pub fn from_rows(rows: &[Vec<Scalar>]) -> Result<Self> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(Error::InvalidDimension("operator must be non-empty".into()));
        }
        let cols = rows[0].len();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidDimension("ragged rows".into()));
        }
        let entries: Vec<Scalar> = rows.iter().flatten().copied().collect();
        if entries
            .iter()
            .any(|a| !a.re.is_finite() || !a.im.is_finite())
        {
            return Err(Error::NonFinite("operator entry".into()));
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            entries,
        })
    }

    pub fn diag(values: &[Scalar]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, v) in values.iter().enumerate() {
            m.set(i, i, *v);
        }
        m
    }

    /// Outer product `|ket⟩⟨bra|`.
    pub fn outer(ket: &StateVector, bra: &StateVector) -> Self {
        Self::from_fn(ket.dim(), bra.dim(), |i, j| ket.amp(i) * bra.amp(j).conj())
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

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.entries[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.entries[i * self.cols + j] = v;
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimMismatch {
                left: self.cols,
                right: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == Scalar::ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimMismatch {
                left: self.rows * self.cols,
                right: other.rows * other.cols,
            });
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scaled(Scalar::new(-1.0, 0.0)))
    }

    pub fn scaled(&self, z: Scalar) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|a| a * z).collect(),
        }
    }

    pub fn trace(&self) -> Scalar {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.entries.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Kronecker product `self ⊗ other`: entry `((i·p+k),(j·q+l)) = a_ij · b_kl`
    /// for `other` of shape p×q.
    pub fn kron(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a == Scalar::ZERO {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out.set(i * other.rows + k, j * other.cols + l, a * other.get(k, l));
                    }
                }
            }
        }
        out
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &StateVector) -> Result<StateVector> {
        if self.cols != v.dim() {
            return Err(Error::DimMismatch {
                left: self.cols,
                right: v.dim(),
            });
        }
        let amps = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * v.amp(j)).sum())
            .collect();
        StateVector::new(amps)
    }

    /// Largest entrywise deviation from Hermitian symmetry, `max |a_ij - conj(a_ji)|`.
    pub fn hermitian_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut dev: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                dev = dev.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && self.hermitian_deviation() <= tol
    }

    /// Checks `self · self† = I` within `tol` (max entrywise deviation).
    pub fn is_unitary(&self, tol: f64) -> bool {
        if !self.is_square() {
            return false;
        }
        let prod = self.mul(&self.adjoint()).expect("square product");
        let dev = prod.sub(&Self::identity(self.rows)).expect("same shape");
        dev.max_abs_entry() <= tol
    }

    /// Full eigensystem of a Hermitian matrix, eigenvalues ascending.
    ///
    /// The input must be square and Hermitian within [`HERMITIAN_TOL`]
    /// entrywise; the solve runs on the Hermitian average `(A + A†)/2` so
    /// roundoff-level asymmetry cannot leak into the result.
    pub fn hermitian_eig(&self) -> Result<HermitianEig> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let dev = self.hermitian_deviation();
        if dev > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation: dev });
        }
        Ok(jacobi_hermitian(self))
    }

    /// Eigenvalues of a Hermitian matrix, ascending.
    pub fn hermitian_eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(self.hermitian_eig()?.values)
    }

    /// Positive semidefiniteness: `min eigenvalue ≥ -tol · max(1, spectral norm)`.
    pub fn is_psd(&self, tol: f64) -> Result<bool> {
        let values = self.hermitian_eigenvalues()?;
        let spectral = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let min = values.first().copied().unwrap_or(0.0);
        Ok(min >= -tol * spectral.max(1.0))
    }
}

/// Cyclic Jacobi diagonalization of a Hermitian matrix.
///
/// Each rotation first absorbs the phase of the pivot entry so the 2×2 block
/// becomes real symmetric, then applies the classic symmetric rotation. The
/// accumulated transform stays unitary, and convergence is quadratic once the
/// off-diagonal mass is small.
fn jacobi_hermitian(m: &Operator) -> HermitianEig {
    let n = m.rows();
    // Hermitian average; diagonal forced real.
    let mut a = Operator::from_fn(n, n, |i, j| {
        if i == j {
            Scalar::new(m.get(i, i).re, 0.0)
        } else {
            (m.get(i, j) + m.get(j, i).conj()) * Scalar::new(0.5, 0.0)
        }
    });
    let mut q = Operator::identity(n);
    let scale = a.frobenius_norm().max(f64::MIN_POSITIVE);

    for _ in 0..MAX_JACOBI_SWEEPS {
        let mut off2 = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                off2 += a.get(i, j).norm_sqr();
            }
        }
        if off2.sqrt() <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for r in (p + 1)..n {
                let apr = a.get(p, r);
                let beta = apr.norm();
                if beta <= 1e-300 {
                    continue;
                }
                let phase = apr / beta; // e^{iφ}
                let app = a.get(p, p).re;
                let arr = a.get(r, r).re;
                let tau = (arr - app) / (2.0 * beta);
                // Smaller-magnitude root of t² - 2τt - 1 = 0.
                let t = if tau == 0.0 {
                    1.0
                } else {
                    -tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // Unitary J differs from the real rotation by the phase on
                // column r: J_pp = c, J_pr = -s, J_rp = s·conj(φ), J_rr = c·conj(φ).
                let cphase = phase.conj();

                // Row update: A ← J† A.
                for j in 0..n {
                    let apj = a.get(p, j);
                    let arj = a.get(r, j);
                    a.set(p, j, apj * c + arj * (phase * s));
                    a.set(r, j, -apj * s + arj * (phase * c));
                }
                // Column update: A ← A J, and accumulate Q ← Q J.
                for i in 0..n {
                    let aip = a.get(i, p);
                    let air = a.get(i, r);
                    a.set(i, p, aip * c + air * (cphase * s));
                    a.set(i, r, -aip * s + air * (cphase * c));

                    let qip = q.get(i, p);
                    let qir = q.get(i, r);
                    q.set(i, p, qip * c + qir * (cphase * s));
                    q.set(i, r, -qip * s + qir * (cphase * c));
                }
                // Pin the rotated pivot pair to exact symmetry.
                a.set(p, r, Scalar::ZERO);
                a.set(r, p, Scalar::ZERO);
                a.set(p, p, Scalar::new(a.get(p, p).re, 0.0));
                a.set(r, r, Scalar::new(a.get(r, r).re, 0.0));
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a.get(i, i).re.total_cmp(&a.get(j, j).re));
    let values = order.iter().map(|&i| a.get(i, i).re).collect();
    let vectors = Operator::from_fn(n, n, |i, j| q.get(i, order[j]));
    HermitianEig { values, vectors }
}
