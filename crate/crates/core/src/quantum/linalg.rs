//! Minimal dense complex linear algebra for small Hilbert spaces.
//!
//! Dimensions in this crate stay in the single digits, so a plain row-major
//! `Vec<Complex64>` representation is all that is needed.

use num_complex::Complex;
use rand::Rng;

pub type Complex64 = Complex<f64>;

/// A complex column vector.
#[derive(Debug, Clone, PartialEq)]
pub struct CVector {
    data: Vec<Complex64>,
}

impl CVector {
    pub fn new(data: Vec<Complex64>) -> Self {
        CVector { data }
    }

    pub fn zeros(dim: usize) -> Self {
        CVector {
            data: vec![Complex64::new(0.0, 0.0); dim],
        }
    }

    /// Computational basis vector `e_index`.
    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(index < dim, "basis index out of range");
        let mut v = Self::zeros(dim);
        v.data[index] = Complex64::new(1.0, 0.0);
        v
    }

    pub fn from_real(reals: &[f64]) -> Self {
        CVector {
            data: reals.iter().map(|&r| Complex64::new(r, 0.0)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn get(&self, i: usize) -> Complex64 {
        self.data[i]
    }

    pub fn set(&mut self, i: usize, value: Complex64) {
        self.data[i] = value;
    }

    pub fn norm_sqr(&self) -> f64 {
        self.data.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Inner product `⟨self|other⟩` (conjugate-linear in `self`).
    pub fn inner(&self, other: &CVector) -> Complex64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn add(&self, other: &CVector) -> CVector {
        debug_assert_eq!(self.dim(), other.dim());
        CVector {
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &CVector) -> CVector {
        debug_assert_eq!(self.dim(), other.dim());
        CVector {
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, factor: Complex64) -> CVector {
        CVector {
            data: self.data.iter().map(|c| c * factor).collect(),
        }
    }

    pub fn normalized(&self) -> Option<CVector> {
        let n = self.norm();
        if n < 1e-12 {
            None
        } else {
            Some(self.scale(Complex64::new(1.0 / n, 0.0)))
        }
    }

    /// Standard complex Gaussian components (isotropic direction after
    /// normalization).
    pub fn random_gaussian(dim: usize, rng: &mut impl Rng) -> CVector {
        CVector {
            data: (0..dim)
                .map(|_| Complex64::new(sample_normal(rng), sample_normal(rng)))
                .collect(),
        }
    }
}

/// A square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        CMatrix {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Option<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return None;
        }
        Some(CMatrix {
            dim,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.data[row * self.dim + col] = value;
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Complex64]> {
        self.data.chunks(self.dim)
    }

    pub fn mul_vec(&self, v: &CVector) -> CVector {
        debug_assert_eq!(self.dim, v.dim());
        let mut out = CVector::zeros(self.dim);
        for (i, row) in self.data.chunks(self.dim).enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for (a, b) in row.iter().zip(v.as_slice()) {
                acc += a * b;
            }
            out.data[i] = acc;
        }
        out
    }

    pub fn mul_mat(&self, other: &CMatrix) -> CMatrix {
        debug_assert_eq!(self.dim, other.dim);
        let d = self.dim;
        let mut out = CMatrix::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let a = self.data[i * d + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..d {
                    out.data[i * d + j] += a * other.data[k * d + j];
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> CMatrix {
        let d = self.dim;
        let mut out = CMatrix::zeros(d);
        for i in 0..d {
            for j in 0..d {
                out.data[j * d + i] = self.data[i * d + j].conj();
            }
        }
        out
    }

    pub fn sub(&self, other: &CMatrix) -> CMatrix {
        debug_assert_eq!(self.dim, other.dim);
        CMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// Accumulate the outer product `v v†`.
    pub fn add_outer(&mut self, v: &CVector) {
        debug_assert_eq!(self.dim, v.dim());
        let d = self.dim;
        for i in 0..d {
            let vi = v.get(i);
            for j in 0..d {
                self.data[i * d + j] += vi * v.get(j).conj();
            }
        }
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.data.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// Modified Gram-Schmidt with a second orthogonalization pass; vectors with
/// near-zero residual norm are dropped.
pub fn orthonormalize(vectors: &[CVector]) -> Vec<CVector> {
    let mut basis: Vec<CVector> = Vec::with_capacity(vectors.len());
    for v in vectors {
        let mut w = v.clone();
        for _ in 0..2 {
            for b in &basis {
                let overlap = b.inner(&w);
                w = w.sub(&b.scale(overlap));
            }
        }
        if let Some(unit) = w.normalized() {
            basis.push(unit);
        }
    }
    basis
}

/// One standard normal sample via Box-Muller (keeps the crate independent of a
/// distributions dependency).
pub fn sample_normal(rng: &mut impl Rng) -> f64 {
    loop {
        let u1: f64 = rng.random();
        if u1 <= f64::MIN_POSITIVE {
            continue;
        }
        let u2: f64 = rng.random();
        return (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inner_product_is_conjugate_linear() {
        let i = Complex64::new(0.0, 1.0);
        let v = CVector::new(vec![i, Complex64::new(1.0, 0.0)]);
        let w = CVector::new(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);
        // ⟨v|w⟩ = conj(i) * 1 = -i
        assert_eq!(v.inner(&w), -i);
        assert!((v.norm_sqr() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn matrix_vector_product() {
        let m = CMatrix::from_rows(vec![
            vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
            vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
        ])
        .unwrap();
        let v = CVector::from_real(&[2.0, 3.0]);
        let mv = m.mul_vec(&v);
        assert_eq!(mv.get(0), Complex64::new(3.0, 0.0));
        assert_eq!(mv.get(1), Complex64::new(2.0, 0.0));
    }

    #[test]
    fn gram_schmidt_produces_orthonormal_sets() {
        use rand::SeedableRng;
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        let vs: Vec<CVector> = (0..3).map(|_| CVector::random_gaussian(4, &mut rng)).collect();
        let basis = orthonormalize(&vs);
        assert_eq!(basis.len(), 3);
        for (i, a) in basis.iter().enumerate() {
            for (j, b) in basis.iter().enumerate() {
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((a.inner(b).norm() - expected).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn gram_schmidt_drops_dependent_vectors() {
        let v = CVector::from_real(&[1.0, 1.0, 0.0]);
        let basis = orthonormalize(&[v.clone(), v.scale(Complex64::new(2.0, 0.0))]);
        assert_eq!(basis.len(), 1);
    }
}
