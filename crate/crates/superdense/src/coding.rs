//! The sender's message-indexed unitary encodings.
//!
//! `d²` messages are carried by the shift/clock family `U^m V^n`, where
//! `U|k⟩ = |k⊕1⟩` cycles the basis and `V|k⟩ = e^{2πik/d}|k⟩` twists phases.
//! For a resource of local dimension `D > d` the operators act on the first
//! `d` levels and leave the tail alone. Applying `U_mn ⊗ I` to the shared
//! Schmidt-form state produces the encoded family the receiver must
//! discriminate.

use crate::error::{Error, Result};
use crate::qmath::{Operator, Scalar, StateVector};
use crate::states::SchmidtState;

/// A two-part message label `(m, n)` with `m, n ∈ [0, d)`, carrying
/// `2·log2(d)` classical bits. Flattened as `m·d + n` throughout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MessageIndex {
    pub m: usize,
    pub n: usize,
}

impl MessageIndex {
    pub fn new(m: usize, n: usize, d: usize) -> Result<Self> {
        if m >= d || n >= d {
            return Err(Error::MessageOutOfRange { m, n, d });
        }
        Ok(Self { m, n })
    }

    pub fn flat(&self, d: usize) -> usize {
        self.m * d + self.n
    }

    pub fn from_flat(idx: usize, d: usize) -> Self {
        Self {
            m: idx / d,
            n: idx % d,
        }
    }
}

/// A labeled unitary acting on the sender's side.
#[derive(Debug, Clone)]
pub struct EncodingOperator {
    pub label: MessageIndex,
    pub matrix: Operator,
}

/// The qubit encoding set `{I, σx, iσy, σz}` with labels
/// `(0,0), (1,0), (1,1), (0,1)` respectively.
pub fn pauli_encodings() -> [EncodingOperator; 4] {
    let z = Scalar::ZERO;
    let one = Scalar::ONE;
    let row = |a: Scalar, b: Scalar, c: Scalar, d: Scalar| {
        Operator::from_rows(&[vec![a, b], vec![c, d]]).expect("2x2")
    };
    [
        EncodingOperator {
            label: MessageIndex { m: 0, n: 0 },
            matrix: Operator::identity(2),
        },
        EncodingOperator {
            label: MessageIndex { m: 1, n: 0 },
            matrix: row(z, one, one, z),
        },
        EncodingOperator {
            label: MessageIndex { m: 1, n: 1 },
            matrix: row(z, one, -one, z),
        },
        EncodingOperator {
            label: MessageIndex { m: 0, n: 1 },
            matrix: row(one, z, z, -one),
        },
    ]
}

/// Cyclic shift `U|k⟩ = |(k+1) mod d⟩`.
pub fn shift_op(d: usize) -> Result<Operator> {
    if d < 2 {
        return Err(Error::InvalidDimension(format!(
            "shift operator needs d >= 2, got {d}"
        )));
    }
    let mut u = Operator::zeros(d, d);
    for k in 0..d {
        u.set((k + 1) % d, k, Scalar::ONE);
    }
    Ok(u)
}

/// Phase twist `V|k⟩ = e^{2πik/d}|k⟩`.
pub fn clock_op(d: usize) -> Result<Operator> {
    if d < 2 {
        return Err(Error::InvalidDimension(format!(
            "clock operator needs d >= 2, got {d}"
        )));
    }
    let phases: Vec<Scalar> = (0..d)
        .map(|k| Scalar::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / d as f64))
        .collect();
    Ok(Operator::diag(&phases))
}

/// The labeled product `U^m V^n` for message `(m, n)`.
pub fn weyl(m: usize, n: usize, d: usize) -> Result<EncodingOperator> {
    let label = MessageIndex::new(m, n, d)?;
    let u = shift_op(d)?;
    let v = clock_op(d)?;
    let mut matrix = Operator::identity(d);
    for _ in 0..m {
        matrix = u.mul(&matrix)?;
    }
    for _ in 0..n {
        matrix = matrix.mul(&v)?;
    }
    Ok(EncodingOperator { label, matrix })
}

/// Pads an encoding operator up to local dimension `dim`: the original block
/// on the first levels, identity on the rest.
pub fn embed_encoding(op: &EncodingOperator, dim: usize) -> Result<EncodingOperator> {
    let d = op.matrix.rows();
    if dim < d {
        return Err(Error::InvalidDimension(format!(
            "cannot embed a {d}-level operator into dimension {dim}"
        )));
    }
    if dim == d {
        return Ok(op.clone());
    }
    let matrix = Operator::from_fn(dim, dim, |i, j| {
        if i < d && j < d {
            op.matrix.get(i, j)
        } else if i == j {
            Scalar::ONE
        } else {
            Scalar::ZERO
        }
    });
    Ok(EncodingOperator {
        label: op.label,
        matrix,
    })
}

/// The `d²` states obtained by applying every encoding to one shared
/// resource, indexed by the flattened message label.
#[derive(Debug, Clone)]
pub struct EncodedFamily {
    d: usize,
    dim: usize,
    states: Vec<StateVector>,
}

impl EncodedFamily {
    /// Message alphabet dimension.
    pub fn d(&self) -> usize {
        self.d
    }

    /// Local dimension of the resource (`>= d`).
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn state(&self, msg: MessageIndex) -> &StateVector {
        &self.states[msg.flat(self.d)]
    }

    pub fn states(&self) -> &[StateVector] {
        &self.states
    }
}

/// Encodes `d²` messages on the shared state: each family member is
/// `(U_mn ⊗ I)|Ψ⟩`, with the operators identity-padded when the resource has
/// more levels than the message alphabet.
pub fn encode_family(shared: &SchmidtState, d: usize) -> Result<EncodedFamily> {
    if d < 2 {
        return Err(Error::InvalidDimension(format!(
            "message alphabet needs d >= 2, got {d}"
        )));
    }
    let dim = shared.dim();
    if dim < d {
        return Err(Error::InvalidDimension(format!(
            "resource dimension {dim} is smaller than alphabet dimension {d}"
        )));
    }
    let psi = shared.state_vector();
    let eye = Operator::identity(dim);
    let mut states = Vec::with_capacity(d * d);
    for m in 0..d {
        for n in 0..d {
            let op = embed_encoding(&weyl(m, n, d)?, dim)?;
            states.push(op.matrix.kron(&eye).apply(&psi)?);
        }
    }
    Ok(EncodedFamily { d, dim, states })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::nme_basis;

    fn re(x: f64) -> Scalar {
        Scalar::new(x, 0.0)
    }

    fn overlap_mag(a: &StateVector, b: &StateVector) -> f64 {
        a.inner(b).unwrap().norm()
    }

    #[test]
    fn pauli_set_reproduces_the_encoded_quartet() {
        // Acting on L(|00⟩ + ℓ|11⟩), the four encodings give
        // L(|00⟩+ℓ|11⟩), L(|10⟩+ℓ|01⟩), L(-|10⟩+ℓ|01⟩), L(|00⟩-ℓ|11⟩).
        let ell = 0.6;
        let l = 1.0 / 1.36f64.sqrt();
        let shared = SchmidtState::new(vec![1.0 / 1.36, 0.36 / 1.36])
            .unwrap()
            .state_vector();
        let eye = Operator::identity(2);
        let expect = [
            vec![re(l), re(0.0), re(0.0), re(l * ell)],
            vec![re(0.0), re(l * ell), re(l), re(0.0)],
            vec![re(0.0), re(l * ell), re(-l), re(0.0)],
            vec![re(l), re(0.0), re(0.0), re(-l * ell)],
        ];
        for (op, want) in pauli_encodings().iter().zip(expect) {
            let encoded = op.matrix.kron(&eye).apply(&shared).unwrap();
            for (i, amp) in want.iter().enumerate() {
                assert!(
                    (encoded.amp(i) - amp).norm() < 1e-12,
                    "encoding {:?} amplitude {i}",
                    op.label
                );
            }
        }
        // The third member coincides with the ψ4 vector of the interpolating
        // basis at p = ℓ; the tilded members do not for ℓ < 1.
        let basis = nme_basis(re(ell), re(ell));
        let third = pauli_encodings()[2]
            .matrix
            .kron(&eye)
            .apply(&shared)
            .unwrap();
        assert!((overlap_mag(&third, basis.vector(3)) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn i_sigma_y_action() {
        let ops = pauli_encodings();
        let v = ops[2].matrix.apply(&StateVector::basis(2, 0)).unwrap();
        assert!((v.amp(1) - re(-1.0)).norm() < 1e-15);
        assert!(v.amp(0).norm() < 1e-15);
    }

    #[test]
    fn pauli_set_is_unitary() {
        for op in pauli_encodings() {
            assert!(op.matrix.is_unitary(1e-15));
        }
    }

    #[test]
    fn shift_and_clock_at_qubit_dimension() {
        let u = shift_op(2).unwrap();
        assert!((u.get(0, 1) - re(1.0)).norm() < 1e-15);
        assert!((u.get(1, 0) - re(1.0)).norm() < 1e-15);
        let v = clock_op(2).unwrap();
        assert!((v.get(0, 0) - re(1.0)).norm() < 1e-15);
        assert!((v.get(1, 1) - re(-1.0)).norm() < 1e-12);
    }

    #[test]
    fn shift_wraps_modulo_d() {
        let u = shift_op(3).unwrap();
        let wrapped = u.apply(&StateVector::basis(3, 2)).unwrap();
        assert!((wrapped.amp(0) - re(1.0)).norm() < 1e-15);
    }

    #[test]
    fn clock_fourth_power_is_identity() {
        let v = clock_op(4).unwrap();
        let v4 = v.mul(&v).unwrap().mul(&v).unwrap().mul(&v).unwrap();
        assert!(v4.sub(&Operator::identity(4)).unwrap().max_abs_entry() < 1e-12);
    }

    #[test]
    fn shift_and_clock_have_order_d() {
        for d in 2..=6 {
            let u = shift_op(d).unwrap();
            let v = clock_op(d).unwrap();
            let mut up = Operator::identity(d);
            let mut vp = Operator::identity(d);
            for _ in 0..d {
                up = up.mul(&u).unwrap();
                vp = vp.mul(&v).unwrap();
            }
            assert!(up.sub(&Operator::identity(d)).unwrap().max_abs_entry() < 1e-12);
            assert!(vp.sub(&Operator::identity(d)).unwrap().max_abs_entry() < 1e-12);
            assert!(u.is_unitary(1e-12) && v.is_unitary(1e-12));
        }
    }

    #[test]
    fn weyl_identity_label() {
        let w = weyl(0, 0, 5).unwrap();
        assert!(
            w.matrix
                .sub(&Operator::identity(5))
                .unwrap()
                .max_abs_entry()
                < 1e-15
        );
    }

    #[test]
    fn weyl_eleven_is_sigma_x_sigma_z() {
        // U V at d = 2 equals σx·σz = -iσy; same ray as iσy.
        let w = weyl(1, 1, 2).unwrap();
        assert!((w.matrix.get(0, 1) - re(-1.0)).norm() < 1e-12);
        assert!((w.matrix.get(1, 0) - re(1.0)).norm() < 1e-12);
        let paper_phase = pauli_encodings()[2].matrix.scaled(re(-1.0));
        assert!(w.matrix.sub(&paper_phase).unwrap().max_abs_entry() < 1e-12);
    }

    #[test]
    fn weyl_composes_shift_and_phases() {
        // U¹V² at d = 3 sends |k⟩ to e^{4πik/3}|k⊕1⟩.
        let w = weyl(1, 2, 3).unwrap();
        for k in 0..3 {
            let out = w.matrix.apply(&StateVector::basis(3, k)).unwrap();
            let phase = Scalar::from_polar(1.0, 4.0 * std::f64::consts::PI * k as f64 / 3.0);
            assert!((out.amp((k + 1) % 3) - phase).norm() < 1e-12);
        }
    }

    #[test]
    fn weyl_rejects_out_of_range() {
        assert!(weyl(2, 0, 2).is_err());
        assert!(weyl(0, 3, 3).is_err());
    }

    #[test]
    fn weyl_commutation_phase() {
        // V U = e^{2πi/d} U V as a matrix identity.
        for d in 2..=6 {
            let u = shift_op(d).unwrap();
            let v = clock_op(d).unwrap();
            let lhs = v.mul(&u).unwrap();
            let omega = Scalar::from_polar(1.0, 2.0 * std::f64::consts::PI / d as f64);
            let rhs = u.mul(&v).unwrap().scaled(omega);
            assert!(lhs.sub(&rhs).unwrap().max_abs_entry() < 1e-12);
        }
    }

    #[test]
    fn embedding_is_identity_when_sizes_match() {
        let op = weyl(1, 0, 3).unwrap();
        let same = embed_encoding(&op, 3).unwrap();
        assert!(same.matrix.sub(&op.matrix).unwrap().max_abs_entry() == 0.0);
    }

    #[test]
    fn embedding_fixes_the_tail() {
        let op = weyl(1, 0, 2).unwrap(); // σx
        let padded = embed_encoding(&op, 3).unwrap();
        assert!(padded.matrix.is_unitary(1e-15));
        let fixed = padded.matrix.apply(&StateVector::basis(3, 2)).unwrap();
        assert!((fixed.amp(2) - re(1.0)).norm() < 1e-15);
        let swapped = padded.matrix.apply(&StateVector::basis(3, 0)).unwrap();
        assert!((swapped.amp(1) - re(1.0)).norm() < 1e-15);
        assert!(embed_encoding(&padded, 2).is_err());
    }

    #[test]
    fn embedded_encoding_leaves_tail_component_invariant() {
        let shared = SchmidtState::new(vec![0.4, 0.3, 0.3]).unwrap();
        let family = encode_family(&shared, 2).unwrap();
        // Tail amplitude √p_2 at |2⟩|2⟩ (index 2·3+2 = 8) for every message.
        for state in family.states() {
            assert!((state.amp(8) - re(0.3f64.sqrt())).norm() < 1e-12);
        }
    }

    #[test]
    fn encode_family_matches_quartet_up_to_phase() {
        let shared = SchmidtState::new(vec![0.8, 0.2]).unwrap();
        let family = encode_family(&shared, 2).unwrap();
        let psi = shared.state_vector();
        let eye = Operator::identity(2);
        for op in pauli_encodings() {
            let paper_state = op.matrix.kron(&eye).apply(&psi).unwrap();
            let ours = family.state(op.label);
            assert!((overlap_mag(ours, &paper_state) - 1.0).abs() < 1e-12);
            assert!(ours.is_normalized(1e-12));
        }
    }

    #[test]
    fn maximally_entangled_family_is_orthonormal() {
        for d in [2usize, 3, 4] {
            let family = encode_family(&SchmidtState::uniform(d).unwrap(), d).unwrap();
            for i in 0..family.len() {
                for j in 0..family.len() {
                    let ip = family.states()[i]
                        .inner(&family.states()[j])
                        .unwrap()
                        .norm();
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((ip - want).abs() < 1e-12, "d={d} ({i},{j}) overlap {ip}");
                }
            }
        }
    }

    #[test]
    fn embedded_family_overlaps_follow_the_ratio_rule() {
        // Uniform 3-level resource, 2-level alphabet:
        // ⟨Φ_mn|Φ_m'n'⟩ = (2/3) δ_mm' δ_nn' + 1/3.
        let family = encode_family(&SchmidtState::uniform(3).unwrap(), 2).unwrap();
        for m in 0..2 {
            for n in 0..2 {
                for mp in 0..2 {
                    for np in 0..2 {
                        let a = family.state(MessageIndex { m, n });
                        let b = family.state(MessageIndex { m: mp, n: np });
                        let got = a.inner(b).unwrap();
                        let want = if (m, n) == (mp, np) { 1.0 } else { 1.0 / 3.0 };
                        assert!((got - re(want)).norm() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn encode_family_rejects_small_alphabet_or_resource() {
        assert!(encode_family(&SchmidtState::uniform(3).unwrap(), 1).is_err());
        assert!(encode_family(&SchmidtState::uniform(2).unwrap(), 3).is_err());
    }
}
