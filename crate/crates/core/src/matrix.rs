//! Dense complex matrices on `C^N` and the rank/vector helpers shared by
//! the operator algebra code.

use nalgebra::{DMatrix, DVector};
use num::complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{LabError, Result};

pub type C64 = Complex64;

/// Relative singular-value threshold for all rank decisions.
pub const RANK_RTOL: f64 = 1e-8;

/// Square complex matrix in double precision.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<C64>);

impl ComplexMatrix {
    pub fn new(m: DMatrix<C64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(LabError::DimensionMismatch { expected: m.nrows(), found: m.ncols() });
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(LabError::Structural("matrix has non-finite entries".into()));
        }
        Ok(Self(m))
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    pub fn zeros(n: usize) -> Self {
        Self(DMatrix::zeros(n, n))
    }

    /// Permutation matrix sending basis vector `e_y` to `e_{perm[y]}`.
    pub fn permutation(perm: &[usize]) -> Self {
        let n = perm.len();
        let mut m = DMatrix::zeros(n, n);
        for (y, &img) in perm.iter().enumerate() {
            m[(img, y)] = C64::new(1.0, 0.0);
        }
        Self(m)
    }

    pub fn diagonal(entries: &[C64]) -> Self {
        Self(DMatrix::from_diagonal(&DVector::from_column_slice(entries)))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn inner(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<C64> {
        self.0
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self(&self.0 * &other.0)
    }

    pub fn scale(&self, z: C64) -> Self {
        Self(&self.0 * z)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(&self.0 - &other.0)
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius(&self) -> f64 {
        self.0.norm()
    }

    /// Largest singular value.
    pub fn op_norm(&self) -> f64 {
        self.0
            .clone()
            .svd(false, false)
            .singular_values
            .iter()
            .copied()
            .fold(0.0, f64::max)
    }

    /// `|| U*U - I ||` in operator norm.
    pub fn unitarity_residual(&self) -> f64 {
        let n = self.dim();
        Self(self.0.adjoint() * &self.0 - DMatrix::identity(n, n)).op_norm()
    }

    pub fn hermiticity_residual(&self) -> f64 {
        Self(&self.0 - self.0.adjoint()).op_norm()
    }

    pub fn commutator(&self, other: &Self) -> Self {
        Self(&self.0 * &other.0 - &other.0 * &self.0)
    }

    pub fn apply(&self, v: &DVector<C64>) -> DVector<C64> {
        &self.0 * v
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    dim: usize,
    entries: Vec<[f64; 2]>,
}

/// Serialized as `{"dim": N, "entries": [[re, im], ...]}` in row-major order.
impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let n = self.dim();
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let z = self.0[(i, j)];
                entries.push([z.re, z.im]);
            }
        }
        MatrixJson { dim: n, entries }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = MatrixJson::deserialize(d)?;
        if raw.entries.len() != raw.dim * raw.dim {
            return Err(serde::de::Error::custom(format!(
                "expected {} entries for dim {}, found {}",
                raw.dim * raw.dim,
                raw.dim,
                raw.entries.len()
            )));
        }
        let m = DMatrix::from_row_iterator(
            raw.dim,
            raw.dim,
            raw.entries.iter().map(|[re, im]| C64::new(*re, *im)),
        );
        ComplexMatrix::new(m).map_err(serde::de::Error::custom)
    }
}

/// Numerical rank with threshold `RANK_RTOL * sigma_max`.
pub fn numerical_rank(m: &DMatrix<C64>) -> usize {
    if m.is_empty() {
        return 0;
    }
    let sv = m.clone().svd(false, false).singular_values;
    let smax = sv.iter().copied().fold(0.0, f64::max);
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > RANK_RTOL * smax).count()
}

/// Unit vector drawn from the rotation-invariant distribution on `C^n`.
pub fn random_unit_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DVector<C64> {
    loop {
        let v = DVector::from_fn(n, |_, _| {
            C64::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
        });
        let norm = v.norm();
        if norm > 1e-12 {
            return v / C64::new(norm, 0.0);
        }
    }
}

/// `exp(2 pi i t)` for a phase given in turns.
///
/// Quarter turns are returned exactly.
pub fn phase(turns: f64) -> C64 {
    let t = turns - turns.floor();
    let quarters = t * 4.0;
    if quarters.fract() == 0.0 {
        return match quarters as u8 {
            0 => C64::new(1.0, 0.0),
            1 => C64::new(0.0, 1.0),
            2 => C64::new(-1.0, 0.0),
            _ => C64::new(0.0, -1.0),
        };
    }
    let angle = std::f64::consts::TAU * t;
    C64::new(angle.cos(), angle.sin())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutation_matrix_maps_basis_vectors() {
        let p = ComplexMatrix::permutation(&[1, 2, 0]);
        let e0 = DVector::from_column_slice(&[C64::new(1.0, 0.0), C64::default(), C64::default()]);
        let img = p.apply(&e0);
        assert_eq!(img[1], C64::new(1.0, 0.0));
        assert!(p.unitarity_residual() < 1e-12);
    }

    #[test]
    fn json_is_row_major_with_dim_header() {
        let mut m = DMatrix::zeros(2, 2);
        m[(0, 1)] = C64::new(3.0, -1.0);
        let cm = ComplexMatrix::new(m).unwrap();
        let json = serde_json::to_string(&cm).unwrap();
        assert_eq!(json, r#"{"dim":2,"entries":[[0.0,0.0],[3.0,-1.0],[0.0,0.0],[0.0,0.0]]}"#);
        let back: ComplexMatrix = serde_json::from_str(&json).unwrap();
        assert_eq!(back, cm);
        assert!(serde_json::from_str::<ComplexMatrix>(r#"{"dim":2,"entries":[[0.0,0.0]]}"#).is_err());
    }

    #[test]
    fn rank_uses_relative_threshold() {
        let mut m = DMatrix::<C64>::identity(3, 3);
        m[(2, 2)] = C64::new(1e-10, 0.0);
        assert_eq!(numerical_rank(&m), 2);
        m[(2, 2)] = C64::new(1e-6, 0.0);
        assert_eq!(numerical_rank(&m), 3);
        assert_eq!(numerical_rank(&DMatrix::<C64>::zeros(2, 2)), 0);
    }

    #[test]
    fn non_square_is_rejected() {
        assert!(ComplexMatrix::new(DMatrix::zeros(2, 3)).is_err());
    }
}
