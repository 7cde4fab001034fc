//! The receiver's side: when and how well non-orthogonal encoded states can
//! be told apart without error.
//!
//! The Gram matrix of the encoded family drives everything. A per-state
//! efficiency vector γ is achievable by an unambiguous measurement exactly
//! when `X - diag(γ)` stays positive semidefinite, so the best uniform rate
//! is the smallest Gram eigenvalue. The closed-form average bounds come from
//! summing the pairwise constraints; they are upper bounds and are reported
//! side by side with the achievable uniform operating point, never conflated
//! (for skewed spectra the bound exceeds the uniform rate).
//!
//! Realizing measurements are synthesized two ways: orthogonal projectors
//! onto the shifted-diagonal subspaces for the first stage, and
//! reciprocal-state (dual basis) POVMs for the unambiguous second stage.

use crate::coding::EncodedFamily;
use crate::error::{Error, Result};
use crate::qmath::{Operator, Scalar, StateVector, PSD_TOL};

/// Tolerance used when a Gram matrix is validated for Hermitian symmetry.
const GRAM_HERMITIAN_TOL: f64 = 1e-12;

/// Minimum Gram eigenvalue above which a family counts as linearly
/// independent.
pub const LINEAR_INDEPENDENCE_TOL: f64 = 1e-10;

/// Hermitian matrix of pairwise inner products `⟨Ψ_i|Ψ_j⟩`.
#[derive(Debug, Clone)]
pub struct GramMatrix {
    mat: Operator,
}

impl GramMatrix {
    /// Validates a square, Hermitian matrix of overlaps.
    pub fn new(mat: Operator) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::NotSquare {
                rows: mat.rows(),
                cols: mat.cols(),
            });
        }
        let dev = mat.hermitian_deviation();
        if dev > GRAM_HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation: dev });
        }
        Ok(Self { mat })
    }

    /// Gram matrix of an explicit state family (all states must share one
    /// dimension).
    pub fn from_states(states: &[StateVector]) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::InvalidDimension("empty state family".into()));
        }
        let n = states.len();
        let mut mat = Operator::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let ip = states[i].inner(&states[j])?;
                mat.set(i, j, ip);
                mat.set(j, i, ip.conj());
            }
        }
        Self::new(mat)
    }

    pub fn n(&self) -> usize {
        self.mat.rows()
    }

    pub fn entry(&self, i: usize, j: usize) -> Scalar {
        self.mat.get(i, j)
    }

    pub fn as_operator(&self) -> &Operator {
        &self.mat
    }

    /// Eigenvalues, ascending. Always real: the matrix is Hermitian by
    /// construction.
    pub fn eigenvalues(&self) -> Vec<f64> {
        self.mat
            .hermitian_eigenvalues()
            .expect("validated Hermitian")
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }
}

/// Gram matrix of an encoded family, from direct inner products.
pub fn gram(family: &EncodedFamily) -> GramMatrix {
    GramMatrix::from_states(family.states()).expect("family states share one dimension")
}

/// True when the family spans as many dimensions as it has members:
/// smallest Gram eigenvalue above `tol`.
pub fn is_linearly_independent(g: &GramMatrix, tol: f64) -> bool {
    g.min_eigenvalue() > tol
}

/// Identifies what a measurement outcome means.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutcomeLabel {
    /// Conclusive identification of family member `i`.
    State(usize),
    /// First-stage landing in shifted-diagonal subspace `m`.
    Subspace(usize),
    /// First-stage landing outside every message subspace.
    Residual,
    /// The measurement gave up.
    Inconclusive,
}

/// A positive operator-valued measure: labeled PSD elements summing to the
/// identity.
#[derive(Debug, Clone)]
pub struct Povm {
    elements: Vec<(OutcomeLabel, Operator)>,
}

impl Povm {
    /// Validates element PSD-ness (within `1e-10` relative) and completeness
    /// (sum equals identity within `1e-10` entrywise).
    pub fn new(elements: Vec<(OutcomeLabel, Operator)>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::InvalidPovm("no elements".into()));
        }
        let dim = elements[0].1.rows();
        let mut sum = Operator::zeros(dim, dim);
        for (label, op) in &elements {
            if op.rows() != dim || op.cols() != dim {
                return Err(Error::InvalidPovm(format!(
                    "element {label:?} has mismatched shape"
                )));
            }
            if !op.is_psd(PSD_TOL)? {
                return Err(Error::InvalidPovm(format!("element {label:?} is not PSD")));
            }
            sum = sum.add(op)?;
        }
        let residual = sum.sub(&Operator::identity(dim))?.max_abs_entry();
        if residual > 1e-10 {
            return Err(Error::InvalidPovm(format!(
                "completeness residual {residual:.3e}"
            )));
        }
        Ok(Self { elements })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.elements[0].1.rows()
    }

    pub fn label(&self, i: usize) -> OutcomeLabel {
        self.elements[i].0
    }

    pub fn element(&self, i: usize) -> &Operator {
        &self.elements[i].1
    }

    pub fn elements(&self) -> &[(OutcomeLabel, Operator)] {
        &self.elements
    }

    pub fn iter(&self) -> impl Iterator<Item = &(OutcomeLabel, Operator)> {
        self.elements.iter()
    }
}

/// First-stage projectors on `ℋ_dim ⊗ ℋ_dim`:
/// `P_m = Σ_{k<d} |k⊕m⟩⟨k⊕m| ⊗ |k⟩⟨k|` for `m = 0..d`, plus a residual
/// projector completing the set when `dim > d`.
pub fn subspace_projectors(d: usize, dim: usize) -> Result<Povm> {
    if d < 2 {
        return Err(Error::InvalidDimension(format!("need d >= 2, got {d}")));
    }
    if dim < d {
        return Err(Error::InvalidDimension(format!(
            "resource dimension {dim} is smaller than alphabet dimension {d}"
        )));
    }
    let full = dim * dim;
    let mut elements = Vec::with_capacity(d + 1);
    let mut sum = Operator::zeros(full, full);
    for m in 0..d {
        let mut p = Operator::zeros(full, full);
        for k in 0..d {
            let idx = ((k + m) % d) * dim + k;
            p.set(idx, idx, Scalar::ONE);
        }
        sum = sum.add(&p)?;
        elements.push((OutcomeLabel::Subspace(m), p));
    }
    if dim > d {
        let rest = Operator::identity(full).sub(&sum)?;
        elements.push((OutcomeLabel::Residual, rest));
    }
    Povm::new(elements)
}

/// The explicit two-outcome-plus-failure measurement on the `{|00⟩, |11⟩}`
/// subspace of the qubit protocol, in subspace coordinates:
///
/// ```text
/// A1 = ½ (ℓ²  ℓ; ℓ  1)    A2 = ½ (ℓ²  -ℓ; -ℓ  1)    A3 = (1-ℓ²  0; 0  0)
/// ```
///
/// `A1` identifies the `+` state, `A2` the `-` state, `A3` is inconclusive.
pub fn qubit_povm(ell: f64) -> Result<Povm> {
    if !(0.0..=1.0).contains(&ell) {
        return Err(Error::InvalidParameter(format!(
            "ell must lie in [0, 1], got {ell}"
        )));
    }
    let r = |x: f64| Scalar::new(x, 0.0);
    let a1 = Operator::from_rows(&[
        vec![r(0.5 * ell * ell), r(0.5 * ell)],
        vec![r(0.5 * ell), r(0.5)],
    ])?;
    let a2 = Operator::from_rows(&[
        vec![r(0.5 * ell * ell), r(-0.5 * ell)],
        vec![r(-0.5 * ell), r(0.5)],
    ])?;
    let a3 = Operator::from_rows(&[vec![r(1.0 - ell * ell), r(0.0)], vec![r(0.0), r(0.0)]])?;
    Povm::new(vec![
        (OutcomeLabel::State(0), a1),
        (OutcomeLabel::State(1), a2),
        (OutcomeLabel::Inconclusive, a3),
    ])
}

/// Per-state conclusive-identification probabilities with their mean.
#[derive(Debug, Clone)]
pub struct SuccessProfile {
    gammas: Vec<f64>,
    average: f64,
}

impl SuccessProfile {
    pub fn new(gammas: Vec<f64>) -> Result<Self> {
        if gammas.is_empty() {
            return Err(Error::InvalidParameter("empty efficiency vector".into()));
        }
        if let Some(g) = gammas.iter().find(|&&g| !(0.0..=1.0).contains(&g)) {
            return Err(Error::InvalidParameter(format!(
                "efficiency {g} outside [0, 1]"
            )));
        }
        let average = gammas.iter().sum::<f64>() / gammas.len() as f64;
        Ok(Self { gammas, average })
    }

    pub fn uniform(gamma: f64, n: usize) -> Result<Self> {
        Self::new(vec![gamma; n])
    }

    pub fn gammas(&self) -> &[f64] {
        &self.gammas
    }

    pub fn average(&self) -> f64 {
        self.average
    }
}

/// Feasibility of an efficiency vector: `X - diag(γ)` must be PSD within
/// `tol` (relative to its spectral norm). Boundary cases pass — achievable
/// optima sit exactly on the PSD boundary.
pub fn duan_guo_feasible(g: &GramMatrix, gammas: &[f64], tol: f64) -> Result<bool> {
    if gammas.len() != g.n() {
        return Err(Error::DimMismatch {
            left: gammas.len(),
            right: g.n(),
        });
    }
    if let Some(x) = gammas.iter().find(|&&x| !(0.0..=1.0).contains(&x)) {
        return Err(Error::InvalidParameter(format!(
            "efficiency {x} outside [0, 1]"
        )));
    }
    let shifted = Operator::from_fn(g.n(), g.n(), |i, j| {
        if i == j {
            g.entry(i, i) - Scalar::new(gammas[i], 0.0)
        } else {
            g.entry(i, j)
        }
    });
    shifted.is_psd(tol)
}

/// Largest uniform efficiency γ with `X - γI` still PSD: the smallest Gram
/// eigenvalue, floored at zero against roundoff.
pub fn max_uniform_gamma(g: &GramMatrix) -> f64 {
    g.min_eigenvalue().max(0.0)
}

/// Checks the pairwise constraint `½(γ_i + γ_j) ≤ 1 - |⟨Ψ_i|Ψ_j⟩|` for all
/// `i ≠ j`, with `1e-12` slack.
pub fn pairwise_bound_check(profile: &SuccessProfile, g: &GramMatrix) -> Result<bool> {
    let n = g.n();
    if profile.gammas().len() != n {
        return Err(Error::DimMismatch {
            left: profile.gammas().len(),
            right: n,
        });
    }
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let lhs = 0.5 * (profile.gammas()[i] + profile.gammas()[j]);
            let rhs = 1.0 - g.entry(i, j).norm();
            if lhs > rhs + 1e-12 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Average-success upper bound from summing the pairwise constraints:
/// `1 - (1/(N(N-1))) Σ_{i≠j} |⟨Ψ_i|Ψ_j⟩|`.
pub fn average_bound(g: &GramMatrix) -> Result<f64> {
    let n = g.n();
    if n < 2 {
        return Err(Error::InvalidDimension(
            "need at least two states for an average bound".into(),
        ));
    }
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                total += g.entry(i, j).norm();
            }
        }
    }
    Ok(1.0 - total / (n * (n - 1)) as f64)
}

/// Magnitude of the within-subspace overlap `Σ_k p_k e^{-2πik·t/d}` plus an
/// optional constant tail weight.
fn head_overlap_mag(spectrum: &[f64], d: usize, t: i64, tail: f64) -> f64 {
    let mut z = Scalar::new(tail, 0.0);
    for (k, p) in spectrum.iter().take(d).enumerate() {
        let angle = -2.0 * std::f64::consts::PI * (k as i64 * t) as f64 / d as f64;
        z += Scalar::from_polar(*p, angle);
    }
    z.norm()
}

/// Closed-form average bound for a `d × d` resource used with alphabet `d`:
/// `1 - (1/(d(d-1))) Σ_{n≠n'} |Σ_k p_k e^{-2πik(n-n')/d}|`.
pub fn qudit_average_bound(spectrum: &[f64]) -> Result<f64> {
    let d = spectrum.len();
    if d < 2 {
        return Err(Error::InvalidSpectrum("need at least two levels".into()));
    }
    validate_probability_vector(spectrum)?;
    let mut total = 0.0;
    for n in 0..d as i64 {
        for np in 0..d as i64 {
            if n != np {
                total += head_overlap_mag(spectrum, d, n - np, 0.0);
            }
        }
    }
    Ok(1.0 - total / (d * (d - 1)) as f64)
}

/// Three-level special case in closed form:
/// `1 - √((3/2·p0 - 1/2)² + 3/4·(p1 - p2)²)`.
pub fn qutrit_closed_form(spectrum: &[f64]) -> Result<f64> {
    if spectrum.len() != 3 {
        return Err(Error::InvalidSpectrum(format!(
            "qutrit form needs exactly 3 entries, got {}",
            spectrum.len()
        )));
    }
    validate_probability_vector(spectrum)?;
    let (p0, p1, p2) = (spectrum[0], spectrum[1], spectrum[2]);
    let inner = (1.5 * p0 - 0.5).powi(2) + 0.75 * (p1 - p2).powi(2);
    Ok(1.0 - inner.sqrt())
}

/// Average bound when a `D × D` resource carries a `d`-letter alphabet
/// (`D ≥ d`): the within-subspace overlap gains the constant tail weight
/// `Σ_{μ≥d} p_μ`. Reduces to [`qudit_average_bound`] at `D = d`, and to
/// `d/D` for the uniform spectrum.
pub fn embedded_bound(spectrum: &[f64], d: usize) -> Result<f64> {
    let dim = spectrum.len();
    if d < 2 {
        return Err(Error::InvalidDimension(format!("need d >= 2, got {d}")));
    }
    if dim < d {
        return Err(Error::InvalidDimension(format!(
            "resource dimension {dim} is smaller than alphabet dimension {d}"
        )));
    }
    validate_probability_vector(spectrum)?;
    let tail: f64 = spectrum[d..].iter().sum();
    let mut total = 0.0;
    for n in 0..d as i64 {
        for np in 0..d as i64 {
            if n != np {
                total += head_overlap_mag(spectrum, d, n - np, tail);
            }
        }
    }
    Ok(1.0 - total / (d * (d - 1)) as f64)
}

fn validate_probability_vector(spectrum: &[f64]) -> Result<()> {
    if spectrum.iter().any(|p| !p.is_finite()) {
        return Err(Error::InvalidSpectrum("non-finite entry".into()));
    }
    if let Some(p) = spectrum.iter().find(|&&p| p < 0.0) {
        return Err(Error::InvalidSpectrum(format!("negative entry {p}")));
    }
    let sum: f64 = spectrum.iter().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidSpectrum(format!("sum is {sum}, not 1")));
    }
    Ok(())
}

/// Unambiguous-discrimination POVM for linearly independent states with
/// per-state efficiencies `γ_i`.
///
/// Builds the reciprocal (dual) family `{d_i}` with `⟨d_i|Ψ_j⟩ = δ_ij` by
/// solving the Gram system (`D = S G⁻¹`, no full-space inversion), then
/// takes `A_i = γ_i |d_i⟩⟨d_i| / |⟨d_i|Ψ_i⟩|²` plus the inconclusive
/// remainder `I - Σ A_i`. Conclusive outcome `i` fires on state `j` with
/// probability `γ_i δ_ij`.
pub fn usd_povm(states: &[StateVector], gammas: &[f64]) -> Result<Povm> {
    if states.is_empty() {
        return Err(Error::InvalidDimension("empty state family".into()));
    }
    if states.len() != gammas.len() {
        return Err(Error::DimMismatch {
            left: states.len(),
            right: gammas.len(),
        });
    }
    let dim = states[0].dim();
    let n = states.len();
    let g = GramMatrix::from_states(states)?;

    let min_eig = g.min_eigenvalue();
    if min_eig <= LINEAR_INDEPENDENCE_TOL {
        return Err(Error::LinearlyDependent {
            min_eigenvalue: min_eig,
        });
    }
    if !duan_guo_feasible(&g, gammas, PSD_TOL)? {
        let shifted = Operator::from_fn(n, n, |i, j| {
            if i == j {
                g.entry(i, i) - Scalar::new(gammas[i], 0.0)
            } else {
                g.entry(i, j)
            }
        });
        let min = shifted.hermitian_eigenvalues()?[0];
        return Err(Error::Infeasible {
            min_eigenvalue: min,
        });
    }

    // G⁻¹ through the eigensystem; all eigenvalues exceed the independence
    // threshold here.
    let eig = g.as_operator().hermitian_eig()?;
    let inv_diag = Operator::diag(
        &eig.values
            .iter()
            .map(|&v| Scalar::new(1.0 / v, 0.0))
            .collect::<Vec<_>>(),
    );
    let g_inv = eig.vectors.mul(&inv_diag)?.mul(&eig.vectors.adjoint())?;

    // Dual vectors: d_i = Σ_j Ψ_j (G⁻¹)_ji.
    let mut duals = Vec::with_capacity(n);
    for i in 0..n {
        let mut amps = vec![Scalar::ZERO; dim];
        for (j, s) in states.iter().enumerate() {
            let w = g_inv.get(j, i);
            for (a, amp) in amps.iter_mut().enumerate() {
                *amp += s.amp(a) * w;
            }
        }
        duals.push(StateVector::new(amps)?);
    }

    let mut elements = Vec::with_capacity(n + 1);
    let mut sum = Operator::zeros(dim, dim);
    for i in 0..n {
        let align = duals[i].inner(&states[i])?.norm_sqr();
        let a = Operator::outer(&duals[i], &duals[i]).scaled(Scalar::new(gammas[i] / align, 0.0));
        sum = sum.add(&a)?;
        elements.push((OutcomeLabel::State(i), a));
    }
    elements.push((
        OutcomeLabel::Inconclusive,
        Operator::identity(dim).sub(&sum)?,
    ));
    Povm::new(elements)
}

/// Born-rule outcome distribution `p_μ = ⟨ψ|A_μ|ψ⟩` of a POVM on a pure
/// state. Values are clamped at zero against roundoff; for a valid POVM and
/// a normalized state they sum to 1 within `1e-10`.
pub fn born_probabilities(povm: &Povm, state: &StateVector) -> Result<Vec<f64>> {
    if povm.dim() != state.dim() {
        return Err(Error::DimMismatch {
            left: povm.dim(),
            right: state.dim(),
        });
    }
    povm.iter()
        .map(|(_, a)| {
            let av = a.apply(state)?;
            Ok(state.inner(&av)?.re.max(0.0))
        })
        .collect()
}

/// Best-effort non-uniform profile search: coordinate ascent on `Σ γ_i`
/// under the feasibility oracle, started from the uniform optimum. Reported
/// alongside the bounds, never in place of them.
pub fn optimize_profile(g: &GramMatrix, sweeps: usize) -> Result<SuccessProfile> {
    let n = g.n();
    let mut gammas = vec![max_uniform_gamma(g).min(1.0); n];
    for _ in 0..sweeps {
        let mut improved = false;
        for i in 0..n {
            // Bisect the largest feasible γ_i with the others held fixed.
            let mut lo = gammas[i];
            let mut hi = 1.0;
            let mut probe = gammas.clone();
            probe[i] = hi;
            if duan_guo_feasible(g, &probe, PSD_TOL)? {
                lo = hi;
            } else {
                for _ in 0..50 {
                    let mid = 0.5 * (lo + hi);
                    probe[i] = mid;
                    if duan_guo_feasible(g, &probe, PSD_TOL)? {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
            }
            if lo > gammas[i] + 1e-10 {
                improved = true;
            }
            gammas[i] = lo;
        }
        if !improved {
            break;
        }
    }
    SuccessProfile::new(gammas)
}
