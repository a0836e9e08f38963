//! State vectors, projectors, and the two Hilbert-space models of the
//! conjunction fallacy.
//!
//! The sequential ("order effects") model evaluates `A and B` as two
//! projective measurements in a row on a belief state; its structure forbids
//! the conjunction from exceeding the first-asked event. The superposition
//! ("emergence effects") model represents the conjunction as a new concept
//! state `(|A⟩+|B⟩)/√2` measured once; its interference term can push the
//! conjunction above both components.

use super::linalg::{orthonormalize, CMatrix, CVector, Complex64};
use super::QuantumError;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Entrywise tolerance for structural invariants (unit norm, hermiticity,
/// idempotence, orthogonality). Inputs failing it are rejected, not repaired.
pub const INVARIANT_TOL: f64 = 1e-10;

/// Tolerance under which an inequality at equality still counts as satisfied
/// when classifying fallacies.
pub const EQUALITY_TOL: f64 = 1e-12;

/// A unit vector in a finite-dimensional complex Hilbert space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawVector", into = "RawVector")]
pub struct StateVector {
    amplitudes: CVector,
}

impl StateVector {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self, QuantumError> {
        let v = CVector::new(amplitudes);
        let norm = v.norm();
        if (norm - 1.0).abs() > INVARIANT_TOL {
            return Err(QuantumError::NotUnitNorm { norm });
        }
        Ok(StateVector { amplitudes: v })
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        StateVector {
            amplitudes: CVector::basis(dim, index),
        }
    }

    /// Normalize an arbitrary nonzero vector into a state.
    pub fn normalized(v: CVector) -> Result<Self, QuantumError> {
        match v.normalized() {
            Some(unit) => Ok(StateVector { amplitudes: unit }),
            None => Err(QuantumError::NotUnitNorm { norm: v.norm() }),
        }
    }

    /// Haar-like random state (normalized complex Gaussian).
    pub fn random(dim: usize, rng: &mut impl Rng) -> Self {
        loop {
            if let Some(unit) = CVector::random_gaussian(dim, rng).normalized() {
                return StateVector { amplitudes: unit };
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.dim()
    }

    pub fn vector(&self) -> &CVector {
        &self.amplitudes
    }
}

#[derive(Serialize, Deserialize)]
struct RawVector(Vec<[f64; 2]>);

impl From<StateVector> for RawVector {
    fn from(s: StateVector) -> RawVector {
        RawVector(s.amplitudes.as_slice().iter().map(|c| [c.re, c.im]).collect())
    }
}

impl TryFrom<RawVector> for StateVector {
    type Error = QuantumError;
    fn try_from(raw: RawVector) -> Result<Self, QuantumError> {
        StateVector::new(
            raw.0
                .into_iter()
                .map(|[re, im]| Complex64::new(re, im))
                .collect(),
        )
    }
}

/// An orthogonal projection operator: Hermitian and idempotent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMatrix", into = "RawMatrix")]
pub struct Projector {
    matrix: CMatrix,
}

impl Projector {
    /// Validate `P = P†` and `P² = P` entrywise within [`INVARIANT_TOL`].
    pub fn new(matrix: CMatrix) -> Result<Self, QuantumError> {
        let hermitian_dev = matrix.sub(&matrix.adjoint()).max_abs_entry();
        let idempotent_dev = matrix.mul_mat(&matrix).sub(&matrix).max_abs_entry();
        let deviation = hermitian_dev.max(idempotent_dev);
        if deviation > INVARIANT_TOL {
            return Err(QuantumError::NotAProjector { deviation });
        }
        Ok(Projector { matrix })
    }

    pub fn zero(dim: usize) -> Self {
        Projector {
            matrix: CMatrix::zeros(dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Projector {
            matrix: CMatrix::identity(dim),
        }
    }

    /// Projector onto the span of the given vectors (orthonormalized first;
    /// dependent vectors are merged, so the rank is the span's dimension).
    pub fn onto_span(vectors: &[CVector]) -> Result<Self, QuantumError> {
        let dim = match vectors.first() {
            Some(v) => v.dim(),
            None => return Err(QuantumError::EmptySpan),
        };
        if vectors.iter().any(|v| v.dim() != dim) {
            return Err(QuantumError::DimensionMismatch {
                expected: dim,
                found: vectors.iter().map(CVector::dim).find(|&d| d != dim).unwrap(),
            });
        }
        let basis = orthonormalize(vectors);
        let mut matrix = CMatrix::zeros(dim);
        for b in &basis {
            matrix.add_outer(b);
        }
        Ok(Projector { matrix })
    }

    /// Random projector of the given rank (span of `rank` random vectors).
    pub fn random(dim: usize, rank: usize, rng: &mut impl Rng) -> Self {
        assert!(rank <= dim, "rank exceeds dimension");
        if rank == 0 {
            return Projector::zero(dim);
        }
        loop {
            let vectors: Vec<CVector> = (0..rank)
                .map(|_| CVector::random_gaussian(dim, rng))
                .collect();
            let basis = orthonormalize(&vectors);
            if basis.len() == rank {
                let mut matrix = CMatrix::zeros(dim);
                for b in &basis {
                    matrix.add_outer(b);
                }
                return Projector { matrix };
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// The complementary projector `I − P` (exact by construction).
    pub fn complement(&self) -> Projector {
        Projector {
            matrix: CMatrix::identity(self.dim()).sub(&self.matrix),
        }
    }

    pub fn apply(&self, v: &CVector) -> CVector {
        self.matrix.mul_vec(v)
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }
}

#[derive(Serialize, Deserialize)]
struct RawMatrix(Vec<Vec<[f64; 2]>>);

impl From<Projector> for RawMatrix {
    fn from(p: Projector) -> RawMatrix {
        RawMatrix(
            p.matrix
                .rows()
                .map(|row| row.iter().map(|c| [c.re, c.im]).collect())
                .collect(),
        )
    }
}

impl TryFrom<RawMatrix> for Projector {
    type Error = QuantumError;
    fn try_from(raw: RawMatrix) -> Result<Self, QuantumError> {
        let rows: Vec<Vec<Complex64>> = raw
            .0
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|[re, im]| Complex64::new(re, im))
                    .collect()
            })
            .collect();
        let matrix = CMatrix::from_rows(rows).ok_or(QuantumError::NotSquare)?;
        Projector::new(matrix)
    }
}

/// Expectation value `⟨v|M|v⟩`, which must be real for Hermitian `M`; an
/// imaginary residue above tolerance is an error rather than silently dropped.
fn real_expectation(v: &CVector, m: &Projector) -> Result<f64, QuantumError> {
    let value = v.inner(&m.apply(v));
    if value.im.abs() > INVARIANT_TOL {
        return Err(QuantumError::ImaginaryResidue { value: value.im });
    }
    Ok(value.re)
}

/// Sequential-measurement model: a belief state and the two yes-no questions
/// answered one after the other.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OeModel {
    pub state: StateVector,
    pub m_a: Projector,
    pub m_b: Projector,
}

impl OeModel {
    pub fn new(state: StateVector, m_a: Projector, m_b: Projector) -> Result<Self, QuantumError> {
        let dim = state.dim();
        for found in [m_a.dim(), m_b.dim()] {
            if found != dim {
                return Err(QuantumError::DimensionMismatch {
                    expected: dim,
                    found,
                });
            }
        }
        Ok(OeModel { state, m_a, m_b })
    }

    pub fn random(dim: usize, rng: &mut impl Rng) -> Self {
        let state = StateVector::random(dim, rng);
        let rank_a = rng.random_range(0..=dim);
        let rank_b = rng.random_range(0..=dim);
        OeModel {
            state,
            m_a: Projector::random(dim, rank_a, rng),
            m_b: Projector::random(dim, rank_b, rng),
        }
    }

    /// All sequential probabilities and the interference contribution.
    pub fn forward(&self) -> Result<OePrediction, QuantumError> {
        let s = self.state.vector();
        let ma_s = self.m_a.apply(s);
        let mb_s = self.m_b.apply(s);
        let maprime_s = s.sub(&ma_s);

        let p_a = ma_s.norm_sqr();
        let p_b = mb_s.norm_sqr();

        let mb_ma_s = self.m_b.apply(&ma_s);
        let p_a_then_b = mb_ma_s.norm_sqr();
        let p_b_then_a = self.m_a.apply(&mb_s).norm_sqr();
        let mb_maprime_s = self.m_b.apply(&maprime_s);
        let p_aprime_then_b = mb_maprime_s.norm_sqr();
        let p_a_then_bprime = ma_s.sub(&mb_ma_s).norm_sqr();

        // Int_B = ⟨S|M_A M_B M'_A|S⟩ + ⟨S|M'_A M_B M_A|S⟩; the two terms are
        // adjoint so the sum is real up to floating-point residue.
        let term1 = ma_s.inner(&mb_maprime_s);
        let term2 = maprime_s.inner(&mb_ma_s);
        let int_b = term1 + term2;
        if int_b.im.abs() > INVARIANT_TOL {
            return Err(QuantumError::ImaginaryResidue { value: int_b.im });
        }

        Ok(OePrediction {
            p_a,
            p_b,
            p_a_then_b,
            p_b_then_a,
            p_aprime_then_b,
            p_a_then_bprime,
            int_b: int_b.re,
        })
    }
}

/// Probabilities predicted by a sequential model.
///
/// Satisfies `p_a = p_a_then_b + p_a_then_bprime` and the interference
/// identity `p_a_then_b − p_b = −(p_aprime_then_b + int_b)` up to numerics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OePrediction {
    pub p_a: f64,
    pub p_b: f64,
    pub p_a_then_b: f64,
    pub p_b_then_a: f64,
    pub p_aprime_then_b: f64,
    pub p_a_then_bprime: f64,
    pub int_b: f64,
}

/// Witness values for the structural theorem `p(A then B) ≤ p(A)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoDoubleFallacyCheck {
    pub holds: bool,
    pub p_a: f64,
    pub p_a_then_b: f64,
    /// `p_a_then_b − p_a`; at most numerical noise for any valid model.
    pub excess: f64,
}

/// Check that a sequential prediction cannot overextend with respect to the
/// first-asked event. Exists to be property-tested: it must return `true`
/// for every valid model.
pub fn oe_no_double_fallacy_check(prediction: &OePrediction) -> NoDoubleFallacyCheck {
    let excess = prediction.p_a_then_b - prediction.p_a;
    NoDoubleFallacyCheck {
        holds: excess <= INVARIANT_TOL,
        p_a: prediction.p_a,
        p_a_then_b: prediction.p_a_then_b,
        excess,
    }
}

/// Superposition model: orthogonal component-concept states and the single
/// yes-no question asked of components and combination alike.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EeModel {
    pub state_a: StateVector,
    pub state_b: StateVector,
    pub projector: Projector,
}

impl EeModel {
    pub fn new(
        state_a: StateVector,
        state_b: StateVector,
        projector: Projector,
    ) -> Result<Self, QuantumError> {
        let dim = state_a.dim();
        for found in [state_b.dim(), projector.dim()] {
            if found != dim {
                return Err(QuantumError::DimensionMismatch {
                    expected: dim,
                    found,
                });
            }
        }
        let overlap = state_a.vector().inner(state_b.vector()).norm();
        if overlap > INVARIANT_TOL {
            return Err(QuantumError::NotOrthogonal { overlap });
        }
        Ok(EeModel {
            state_a,
            state_b,
            projector,
        })
    }

    pub fn random(dim: usize, rng: &mut impl Rng) -> Self {
        assert!(dim >= 2, "two orthogonal states need dim >= 2");
        loop {
            let raw = [
                CVector::random_gaussian(dim, rng),
                CVector::random_gaussian(dim, rng),
            ];
            let basis = orthonormalize(&raw);
            if basis.len() != 2 {
                continue;
            }
            let rank = rng.random_range(0..=dim);
            let state_a = StateVector {
                amplitudes: basis[0].clone(),
            };
            let state_b = StateVector {
                amplitudes: basis[1].clone(),
            };
            return EeModel {
                state_a,
                state_b,
                projector: Projector::random(dim, rank, rng),
            };
        }
    }

    /// The combined-concept state `(|A⟩ + |B⟩)/√2`.
    pub fn combined_state(&self) -> CVector {
        self.state_a
            .vector()
            .add(self.state_b.vector())
            .scale(Complex64::new(1.0 / std::f64::consts::SQRT_2, 0.0))
    }

    pub fn forward(&self) -> Result<EePrediction, QuantumError> {
        let p_a = real_expectation(self.state_a.vector(), &self.projector)?;
        let p_b = real_expectation(self.state_b.vector(), &self.projector)?;
        let combined = self.combined_state();
        let p_and = combined.inner(&self.projector.apply(&combined));
        if p_and.im.abs() > INVARIANT_TOL {
            return Err(QuantumError::ImaginaryResidue { value: p_and.im });
        }
        let interference = self
            .state_a
            .vector()
            .inner(&self.projector.apply(self.state_b.vector()))
            .re;

        let p_a_and_b = p_and.re;
        let margin_wrt_a = p_a_and_b - p_a;
        let margin_wrt_b = p_a_and_b - p_b;
        Ok(EePrediction {
            p_a,
            p_b,
            p_a_and_b,
            interference,
            fallacy_wrt_a: margin_wrt_a >= -EQUALITY_TOL,
            fallacy_wrt_b: margin_wrt_b >= -EQUALITY_TOL,
            margin_wrt_a,
            margin_wrt_b,
        })
    }
}

/// Probabilities predicted by a superposition model.
///
/// Satisfies `p_a_and_b = (p_a + p_b)/2 + interference` up to numerics. The
/// fallacy flags treat equality (within [`EQUALITY_TOL`]) as a fallacy; the
/// margins are reported so callers can apply stricter policies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EePrediction {
    pub p_a: f64,
    pub p_b: f64,
    pub p_a_and_b: f64,
    /// `Re⟨A|M|B⟩`.
    pub interference: f64,
    pub fallacy_wrt_a: bool,
    pub fallacy_wrt_b: bool,
    pub margin_wrt_a: f64,
    pub margin_wrt_b: f64,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn projector_onto_real(components: &[f64]) -> Projector {
        Projector::onto_span(&[CVector::from_real(components)]).unwrap()
    }

    #[test]
    fn state_vector_rejects_non_unit() {
        assert!(matches!(
            StateVector::new(vec![c(1.0), c(1.0)]).unwrap_err(),
            QuantumError::NotUnitNorm { .. }
        ));
        assert!(StateVector::new(vec![c(1.0), c(0.0)]).is_ok());
    }

    #[test]
    fn projector_rejects_non_idempotent() {
        let m = CMatrix::from_rows(vec![vec![c(0.5), c(0.0)], vec![c(0.0), c(0.7)]]).unwrap();
        assert!(matches!(
            Projector::new(m).unwrap_err(),
            QuantumError::NotAProjector { .. }
        ));
    }

    #[test]
    fn projector_rejects_non_hermitian() {
        let m = CMatrix::from_rows(vec![
            vec![c(1.0), Complex64::new(0.0, 1e-3)],
            vec![Complex64::new(0.0, 1e-3), c(0.0)],
        ])
        .unwrap();
        assert!(matches!(
            Projector::new(m).unwrap_err(),
            QuantumError::NotAProjector { .. }
        ));
    }

    #[test]
    fn complement_is_exact() {
        let p = projector_onto_real(&[0.6, 0.8]);
        let comp = p.complement();
        assert!(Projector::new(comp.matrix().clone()).is_ok());
        let sum_dev = p
            .matrix()
            .mul_mat(comp.matrix())
            .max_abs_entry();
        assert!(sum_dev < 1e-14, "P(I-P) should vanish, got {sum_dev}");
    }

    #[test]
    fn oe_forward_two_dimensional_example() {
        // |S⟩ = e0, M_A onto 45°, M_B onto e1.
        let state = StateVector::basis(2, 0);
        let half = std::f64::consts::FRAC_1_SQRT_2;
        let m_a = projector_onto_real(&[half, half]);
        let m_b = projector_onto_real(&[0.0, 1.0]);
        let model = OeModel::new(state, m_a, m_b).unwrap();
        let pred = model.forward().unwrap();

        assert!((pred.p_a - 0.5).abs() < 1e-12);
        assert!(pred.p_b.abs() < 1e-12);
        assert!((pred.p_a_then_b - 0.25).abs() < 1e-12);
        assert!((pred.p_aprime_then_b - 0.25).abs() < 1e-12);
        assert!((pred.int_b - (-0.5)).abs() < 1e-12);
        // Conjunction fallacy with respect to B: p(A then B) > p(B).
        assert!(pred.p_a_then_b > pred.p_b);
        assert!(oe_no_double_fallacy_check(&pred).holds);
    }

    #[test]
    fn commuting_projectors_have_zero_interference() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for dim in 2..=4 {
            let p = Projector::random(dim, 1, &mut rng);
            let state = StateVector::random(dim, &mut rng);
            let model = OeModel::new(state, p.clone(), p).unwrap();
            let pred = model.forward().unwrap();
            assert!(pred.int_b.abs() < 1e-12);
            assert!((pred.p_a_then_b - pred.p_b_then_a).abs() < 1e-12);
        }
    }

    #[test]
    fn identity_first_question_passes_state_through() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let state = StateVector::random(3, &mut rng);
        let m_b = Projector::random(3, 2, &mut rng);
        let model = OeModel::new(state, Projector::identity(3), m_b).unwrap();
        let pred = model.forward().unwrap();
        assert!((pred.p_a - 1.0).abs() < 1e-12);
        assert!((pred.p_a_then_b - pred.p_b).abs() < 1e-12);
    }

    #[test]
    fn identity_second_question_hits_the_boundary() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let state = StateVector::random(3, &mut rng);
        let m_a = Projector::random(3, 1, &mut rng);
        let model = OeModel::new(state, m_a, Projector::identity(3)).unwrap();
        let pred = model.forward().unwrap();
        assert!((pred.p_a_then_b - pred.p_a).abs() < 1e-12);
        assert!(oe_no_double_fallacy_check(&pred).holds);
    }

    #[test]
    fn ee_rejects_non_orthogonal_components() {
        let a = StateVector::basis(3, 0);
        let close = StateVector::new(vec![c(0.1_f64.sqrt()), c(0.9_f64.sqrt()), c(0.0)]).unwrap();
        assert!(matches!(
            EeModel::new(a, close, Projector::identity(3)).unwrap_err(),
            QuantumError::NotOrthogonal { .. }
        ));
    }

    #[test]
    fn ee_identity_projector() {
        let model = EeModel::new(
            StateVector::basis(3, 0),
            StateVector::basis(3, 1),
            Projector::identity(3),
        )
        .unwrap();
        let pred = model.forward().unwrap();
        assert!((pred.p_a - 1.0).abs() < 1e-12);
        assert!((pred.p_b - 1.0).abs() < 1e-12);
        assert!((pred.p_a_and_b - 1.0).abs() < 1e-12);
        assert!(pred.interference.abs() < 1e-12);
    }

    #[test]
    fn ee_zero_interference_averages() {
        // M diagonal in the {A, B} basis: no interference.
        let a = StateVector::basis(3, 0);
        let b = StateVector::basis(3, 1);
        let m = projector_onto_real(&[1.0, 0.0, 0.0]);
        let model = EeModel::new(a, b, m).unwrap();
        let pred = model.forward().unwrap();
        assert!(pred.interference.abs() < 1e-14);
        assert!((pred.p_a_and_b - 0.5 * (pred.p_a + pred.p_b)).abs() < 1e-12);
        // The average lies strictly between the components: never above both.
        assert!(!(pred.fallacy_wrt_a && pred.fallacy_wrt_b));
    }

    #[test]
    fn model_json_round_trips() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        let oe = OeModel::random(3, &mut rng);
        let json = serde_json::to_string(&oe).unwrap();
        let back: OeModel = serde_json::from_str(&json).unwrap();
        assert_eq!(oe, back);

        let ee = EeModel::random(3, &mut rng);
        let json = serde_json::to_string(&ee).unwrap();
        let back: EeModel = serde_json::from_str(&json).unwrap();
        assert_eq!(ee, back);
    }

    #[test]
    fn deserialization_revalidates() {
        let bad = "[[1.0,0.0],[1.0,0.0]]";
        assert!(serde_json::from_str::<StateVector>(bad).is_err());
    }
}
