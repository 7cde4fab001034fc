//! Shared entangled resources.
//!
//! The protocol's channel is always a bipartite pure state in Schmidt form,
//! `Σ √p_k |k⟩|k⟩`, held here as just the probability spectrum plus the local
//! dimension. The interpolating two-qubit basis generalizes the computational
//! basis (no entanglement) and the Bell basis (maximal entanglement) with two
//! complex knobs.

use crate::error::{Error, Result};
use crate::qmath::{Operator, Scalar, StateVector};

/// Tolerance on `Σ p_k - 1` beyond which a spectrum is rejected.
const SPECTRUM_SUM_TOL: f64 = 1e-9;

/// A bipartite pure state `Σ √p_k |k⟩|k⟩` with equal local dimensions,
/// stored as its Schmidt spectrum in caller-given index order (not sorted —
/// the closed-form rate expressions single out `p_0`).
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtState {
    spectrum: Vec<f64>,
}

impl SchmidtState {
    /// Validates and stores a Schmidt spectrum.
    ///
    /// Entries must be finite and nonnegative, and sum to 1 within `1e-9`;
    /// accepted input is rescaled so the stored spectrum sums to 1 at machine
    /// precision.
    pub fn new(spectrum: Vec<f64>) -> Result<Self> {
        if spectrum.is_empty() {
            return Err(Error::InvalidSpectrum("empty spectrum".into()));
        }
        if spectrum.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidSpectrum("non-finite entry".into()));
        }
        if let Some(p) = spectrum.iter().find(|&&p| p < 0.0) {
            return Err(Error::InvalidSpectrum(format!("negative entry {p}")));
        }
        let sum: f64 = spectrum.iter().sum();
        if (sum - 1.0).abs() > SPECTRUM_SUM_TOL {
            return Err(Error::InvalidSpectrum(format!("sum is {sum}, not 1")));
        }
        Ok(Self {
            spectrum: spectrum.iter().map(|p| p / sum).collect(),
        })
    }

    /// The maximally entangled spectrum `(1/d, …, 1/d)`.
    pub fn uniform(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidDimension(
                "local dimension must be positive".into(),
            ));
        }
        Self::new(vec![1.0 / d as f64; d])
    }

    /// Local dimension of each side.
    pub fn dim(&self) -> usize {
        self.spectrum.len()
    }

    pub fn spectrum(&self) -> &[f64] {
        &self.spectrum
    }

    /// The ket `Σ √p_k |k⟩|k⟩` in dimension `d²`.
    pub fn state_vector(&self) -> StateVector {
        let d = self.dim();
        let mut amps = vec![Scalar::ZERO; d * d];
        for (k, p) in self.spectrum.iter().enumerate() {
            amps[k * d + k] = Scalar::new(p.sqrt(), 0.0);
        }
        StateVector::new(amps).expect("finite amplitudes")
    }

    /// Von Neumann entropy of either reduced state, `-Σ p_k log2 p_k`, in
    /// ebits. Zero-probability terms contribute nothing.
    pub fn entanglement_entropy(&self) -> f64 {
        -self
            .spectrum
            .iter()
            .filter(|&&p| p > 0.0)
            .map(|&p| p * p.log2())
            .sum::<f64>()
    }
}

/// Builds the Schmidt-form ket directly from a raw spectrum.
pub fn schmidt_form(spectrum: &[f64]) -> Result<StateVector> {
    Ok(SchmidtState::new(spectrum.to_vec())?.state_vector())
}

/// The four-vector interpolating basis of `ℋ² ⊗ ℋ²`:
///
/// ```text
/// |ψ1⟩ = L (|00⟩ + ℓ|11⟩)        |ψ3⟩ = P (|01⟩ + p|10⟩)
/// |ψ2⟩ = L (ℓ*|00⟩ − |11⟩)       |ψ4⟩ = P (p*|01⟩ − |10⟩)
/// ```
///
/// with `L = 1/√(1+|ℓ|²)`, `P = 1/√(1+|p|²)`. At `ℓ = p = 0` this is the
/// computational basis up to signs; at `ℓ = p = 1` the Bell basis.
#[derive(Debug, Clone)]
pub struct NmeBasis {
    pub ell: Scalar,
    pub p: Scalar,
    vectors: [StateVector; 4],
}

impl NmeBasis {
    pub fn vectors(&self) -> &[StateVector; 4] {
        &self.vectors
    }

    pub fn vector(&self, i: usize) -> &StateVector {
        &self.vectors[i]
    }

    /// Max-entry residual of the completeness sum `Σ |ψ_i⟩⟨ψ_i| - I`.
    pub fn completeness_residual(&self) -> f64 {
        let mut acc = Operator::zeros(4, 4);
        for v in &self.vectors {
            acc = acc.add(&Operator::outer(v, v)).expect("4x4");
        }
        acc.sub(&Operator::identity(4))
            .expect("4x4")
            .max_abs_entry()
    }

    /// Largest pairwise overlap magnitude `max_{i≠j} |⟨ψ_i|ψ_j⟩|`.
    pub fn max_cross_overlap(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    worst = worst.max(self.vectors[i].inner(&self.vectors[j]).unwrap().norm());
                }
            }
        }
        worst
    }
}

/// Constructs the interpolating basis for arbitrary complex `ℓ` and `p`.
pub fn nme_basis(ell: Scalar, p: Scalar) -> NmeBasis {
    let zero = Scalar::ZERO;
    let l = 1.0 / (1.0 + ell.norm_sqr()).sqrt();
    let pn = 1.0 / (1.0 + p.norm_sqr()).sqrt();
    let ket = |a00: Scalar, a01: Scalar, a10: Scalar, a11: Scalar| {
        StateVector::new(vec![a00, a01, a10, a11]).expect("finite amplitudes")
    };
    let scale = |v: StateVector, s: f64| v.scaled(Scalar::new(s, 0.0));
    let vectors = [
        scale(ket(Scalar::ONE, zero, zero, ell), l),
        scale(ket(ell.conj(), zero, zero, -Scalar::ONE), l),
        scale(ket(zero, Scalar::ONE, p, zero), pn),
        scale(ket(zero, p.conj(), -Scalar::ONE, zero), pn),
    ];
    NmeBasis { ell, p, vectors }
}

/// Result of a Schmidt decomposition: squared singular values in descending
/// order along with the matching orthonormal local bases, so that the input
/// rebuilds as `Σ √(spectrum_k) left_k ⊗ right_k`.
#[derive(Debug, Clone)]
pub struct SchmidtDecomposition {
    pub spectrum: Vec<f64>,
    pub left: Vec<StateVector>,
    pub right: Vec<StateVector>,
}

impl SchmidtDecomposition {
    pub fn reconstruct(&self) -> StateVector {
        let dim_a = self.left[0].dim();
        let dim_b = self.right[0].dim();
        let mut amps = vec![Scalar::ZERO; dim_a * dim_b];
        for (k, p) in self.spectrum.iter().enumerate() {
            let w = Scalar::new(p.max(0.0).sqrt(), 0.0);
            for a in 0..dim_a {
                for b in 0..dim_b {
                    amps[a * dim_b + b] += w * self.left[k].amp(a) * self.right[k].amp(b);
                }
            }
        }
        StateVector::new(amps).expect("finite amplitudes")
    }

    /// Largest amplitude deviation between the rebuilt vector and `v`.
    pub fn reconstruction_error(&self, v: &StateVector) -> f64 {
        let r = self.reconstruct();
        (0..v.dim())
            .map(|i| (r.amp(i) - v.amp(i)).norm())
            .fold(0.0, f64::max)
    }
}

/// Schmidt decomposition of a normalized bipartite vector with local
/// dimensions `dim_a × dim_b`.
///
/// Diagonalizes `C C†` for the `dim_a × dim_b` coefficient matrix `C`. The
/// returned spectrum has `min(dim_a, dim_b)` entries, descending. Right
/// vectors attached to (near-)zero Schmidt coefficients are filled in by
/// orthonormal completion; under degeneracy any valid basis pair may come
/// back.
pub fn schmidt_decompose(
    v: &StateVector,
    dim_a: usize,
    dim_b: usize,
) -> Result<SchmidtDecomposition> {
    if dim_a == 0 || dim_b == 0 || dim_a * dim_b != v.dim() {
        return Err(Error::DimMismatch {
            left: dim_a * dim_b,
            right: v.dim(),
        });
    }
    if !v.is_normalized(1e-9) {
        return Err(Error::InvalidParameter(format!(
            "schmidt_decompose needs a normalized vector (norm {})",
            v.norm()
        )));
    }
    let coeff = Operator::from_fn(dim_a, dim_b, |a, b| v.amp(a * dim_b + b));
    let gram_a = coeff.mul(&coeff.adjoint()).expect("dims agree");
    let eig = gram_a.hermitian_eig()?;

    let rank = dim_a.min(dim_b);
    // Ascending from the solver; take the top `rank` in descending order.
    let mut spectrum = Vec::with_capacity(rank);
    let mut left = Vec::with_capacity(rank);
    for k in 0..rank {
        let src = dim_a - 1 - k;
        spectrum.push(eig.values[src].max(0.0));
        let col: Vec<Scalar> = (0..dim_a).map(|i| eig.vectors.get(i, src)).collect();
        left.push(StateVector::new(col)?);
    }

    let cdag = coeff.adjoint();
    let mut right: Vec<StateVector> = Vec::with_capacity(rank);
    for k in 0..rank {
        if spectrum[k] > 1e-20 {
            // B-side kets are the conjugated right singular vectors:
            // C = Σ σ_k u_k w_k† means v = Σ σ_k u_k ⊗ conj(w_k).
            let w = cdag.apply(&left[k])?;
            let inv = 1.0 / spectrum[k].sqrt();
            let amps = w.amps().iter().map(|a| a.conj() * inv).collect();
            right.push(StateVector::new(amps)?);
        } else {
            let filler = orthonormal_completion(&right, dim_b);
            right.push(filler);
        }
    }
    Ok(SchmidtDecomposition {
        spectrum,
        left,
        right,
    })
}

/// Any unit vector orthogonal to everything in `have` (Gram-Schmidt over the
/// computational basis; callers guarantee `have.len() < dim`).
fn orthonormal_completion(have: &[StateVector], dim: usize) -> StateVector {
    for seed in 0..dim {
        let mut cand: Vec<Scalar> = StateVector::basis(dim, seed).amps().to_vec();
        for w in have {
            let mut ip = Scalar::ZERO;
            for (i, c) in cand.iter().enumerate() {
                ip += w.amp(i).conj() * c;
            }
            for (i, c) in cand.iter_mut().enumerate() {
                *c -= ip * w.amp(i);
            }
        }
        let norm: f64 = cand.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            let inv = Scalar::new(1.0 / norm, 0.0);
            return StateVector::new(cand.iter().map(|a| a * inv).collect()).expect("finite");
        }
    }
    unreachable!("span cannot exhaust the space")
}

/// Entanglement entropy in ebits; see [`SchmidtState::entanglement_entropy`].
pub fn entanglement_entropy(s: &SchmidtState) -> f64 {
    s.entanglement_entropy()
}
