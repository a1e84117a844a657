//! Operators of a paired system on `l^2(X, mu)` and the coupling constant
//! of the factors they generate.
//!
//! Matrices are written in the orthonormal basis `e_x = delta_x / sqrt(mu(x))`.
//! Both actions preserve `mu`, so translations become permutation matrices:
//! `U_g e_y = e_{g y}` and `V_h e_y = e_{y h^-1}`.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{joint_commutant, MatrixAlgebra};
use crate::error::{LabError, Result};
use crate::matrix::{numerical_rank, phase, random_unit_vector, ComplexMatrix, C64};
use crate::rational::{nearest_rational, Q};
use crate::systems::{orbits, PairedSystem, Side};

/// Default number of random witnesses for [`Witness::Auto`].
pub const DEFAULT_WITNESSES: usize = 7;

pub fn rep_unitary(sys: &PairedSystem, side: Side, element: usize) -> Result<ComplexMatrix> {
    let group = sys.group(side);
    group.check_element(element)?;
    let perm: Vec<usize> = match side {
        Side::G => (0..sys.len()).map(|y| sys.act(Side::G, element, y)).collect(),
        Side::H => {
            let inv = group.inv(element);
            (0..sys.len()).map(|y| sys.act(Side::H, inv, y)).collect()
        }
    };
    Ok(ComplexMatrix::permutation(&perm))
}

/// Multiplication by a function constant on the orbits of `side`, given per block.
pub fn multiplicator(sys: &PairedSystem, phi: &[C64], side: Side) -> Result<ComplexMatrix> {
    let partition = orbits(sys, side);
    if phi.len() != partition.len() {
        return Err(LabError::DimensionMismatch { expected: partition.len(), found: phi.len() });
    }
    let diag: Vec<C64> = (0..sys.len()).map(|x| phi[partition.block_of(x)]).collect();
    Ok(ComplexMatrix::diagonal(&diag))
}

/// Indicator multiplicators of every orbit of `side`.
pub fn orbit_indicators(sys: &PairedSystem, side: Side) -> Vec<ComplexMatrix> {
    let k = orbits(sys, side).len();
    (0..k)
        .map(|b| {
            let mut phi = vec![C64::default(); k];
            phi[b] = C64::new(1.0, 0.0);
            multiplicator(sys, &phi, side).expect("phi sized to partition")
        })
        .collect()
}

/// Generators of `A_G` (translations by `G`, multiplicators constant on
/// `H`-orbits) or `A_H` (translations by `H`, multiplicators constant on
/// `G`-orbits).
///
/// Translations are taken over a generating set of the group, and the
/// invariant functions are represented by a single multiplicator with
/// distinct values `exp(2 pi i b / k)` on the `k` blocks, whose powers span
/// all block functions.
pub fn side_generators(sys: &PairedSystem, side: Side) -> Vec<ComplexMatrix> {
    let mut gens: Vec<ComplexMatrix> = sys
        .group(side)
        .generating_set()
        .into_iter()
        .map(|e| rep_unitary(sys, side, e).expect("valid element"))
        .collect();
    let k = orbits(sys, side.other()).len();
    if k > 1 {
        let phi: Vec<C64> = (0..k).map(|b| phase(b as f64 / k as f64)).collect();
        gens.push(multiplicator(sys, &phi, side.other()).expect("phi sized to partition"));
    }
    gens
}

pub fn side_algebra(sys: &PairedSystem, side: Side) -> Result<MatrixAlgebra> {
    let mut alg = MatrixAlgebra::closure_in(sys.len(), &side_generators(sys, side))?;
    alg.push_log(format!("A_{side}: {side}-translations and {}-invariant multiplicators", side.other()));
    Ok(alg)
}

/// Which vectors `mvn_coupling` evaluates.
#[derive(Debug, Clone)]
pub enum Witness {
    Auto { count: usize, seed: u64 },
    Vector(DVector<C64>),
}

impl Witness {
    pub fn auto(seed: u64) -> Self {
        Witness::Auto { count: DEFAULT_WITNESSES, seed }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CouplingFlags {
    #[serde(rename = "cyclicExists")]
    pub cyclic_exists: bool,
    #[serde(rename = "separatingExists")]
    pub separating_exists: bool,
    #[serde(rename = "bicyclicExists")]
    pub bicyclic_exists: bool,
    /// The flags agree with the span ranks of the modal witnesses.
    #[serde(rename = "rankConfirmed")]
    pub rank_confirmed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CouplingCertificate {
    pub lambda: f64,
    /// `lambda` rounded to the nearest rational with denominator at most `N`.
    #[serde(rename = "lambdaRational", with = "crate::rational::serde_q")]
    pub lambda_rational: Q,
    pub spread: f64,
    pub flags: CouplingFlags,
    pub seed: Option<u64>,
    #[serde(rename = "witnessCount")]
    pub witness_count: usize,
    #[serde(skip)]
    pub witness_vectors: Vec<DVector<C64>>,
    #[serde(rename = "algebraDim")]
    pub algebra_dim: usize,
    #[serde(rename = "commutantDim")]
    pub commutant_dim: usize,
}

fn span_rank(alg: &MatrixAlgebra, v: &DVector<C64>) -> usize {
    let cols: Vec<DVector<C64>> = alg.basis().iter().map(|b| b.apply(v)).collect();
    numerical_rank(&DMatrix::from_columns(&cols))
}

/// Coupling constant `tr(P_h) / tr'(P'_h)` of a factor `b`.
///
/// `P_h` projects onto `span(B'h)` and `P'_h` onto `span(Bh)`; both traces
/// are `Tr/N`, so the ratio is `rank(B'h) / rank(Bh)`.
pub fn mvn_coupling(b: &MatrixAlgebra, witness: &Witness) -> Result<CouplingCertificate> {
    mvn_coupling_with(b, &b.commutant()?, witness)
}

/// [`mvn_coupling`] with a precomputed commutant `bp` of `b`.
pub fn mvn_coupling_with(b: &MatrixAlgebra, bp: &MatrixAlgebra, witness: &Witness) -> Result<CouplingCertificate> {
    b.ensure_factor_with(bp)?;
    let n = b.ambient_dim();
    let (vectors, seed) = match witness {
        Witness::Vector(v) => {
            if v.len() != n {
                return Err(LabError::DimensionMismatch { expected: n, found: v.len() });
            }
            let norm = v.norm();
            if norm == 0.0 {
                return Err(LabError::ZeroVector);
            }
            (vec![v / C64::new(norm, 0.0)], None)
        }
        Witness::Auto { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            ((0..(*count).max(5)).map(|_| random_unit_vector(n, &mut rng)).collect(), Some(*seed))
        }
    };
    let samples: Vec<(usize, usize)> = vectors.iter().map(|v| (span_rank(bp, v), span_rank(b, v))).collect();
    if samples.iter().any(|&(_, rb)| rb == 0) {
        return Err(LabError::ZeroVector);
    }
    // modal rank pair; ties go to the pair seen first
    let mut modal = samples[0];
    let mut best = 0;
    for s in &samples {
        let count = samples.iter().filter(|t| *t == s).count();
        if count > best {
            best = count;
            modal = *s;
        }
    }
    let lambda = modal.0 as f64 / modal.1 as f64;
    let spread = samples
        .iter()
        .map(|&(a, c)| ((a as f64 / c as f64) - lambda).abs() / lambda)
        .fold(0.0, f64::max);
    let cyclic_exists = lambda <= 1.0 + 1e-9;
    let separating_exists = lambda >= 1.0 - 1e-9;
    let rank_confirmed = cyclic_exists == (modal.1 == n) && separating_exists == (modal.0 == n);
    Ok(CouplingCertificate {
        lambda,
        lambda_rational: nearest_rational(lambda, n as u64),
        spread,
        flags: CouplingFlags {
            cyclic_exists,
            separating_exists,
            bicyclic_exists: cyclic_exists && separating_exists,
            rank_confirmed,
        },
        seed,
        witness_count: vectors.len(),
        witness_vectors: vectors,
        algebra_dim: b.dimension(),
        commutant_dim: bp.dimension(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct IrreducibilityReport {
    pub irreducible: bool,
    #[serde(rename = "commutantDim")]
    pub commutant_dim: usize,
    /// Non-scalar element of the joint commutant when reducible.
    pub witness: Option<ComplexMatrix>,
}

pub fn is_irreducible(algebras: &[&MatrixAlgebra]) -> Result<IrreducibilityReport> {
    let c = joint_commutant(algebras)?;
    let n = c.ambient_dim();
    let witness = if c.dimension() > 1 {
        let id = ComplexMatrix::identity(n);
        c.basis().into_iter().find_map(|m| {
            let t = m.trace() / C64::new(n as f64, 0.0);
            let off = m.sub(&id.scale(t));
            (off.frobenius() > 1e-6).then_some(off)
        })
    } else {
        None
    };
    Ok(IrreducibilityReport { irreducible: c.dimension() == 1, commutant_dim: c.dimension(), witness })
}

#[derive(Debug, Clone, Serialize)]
pub struct BicyclicReport {
    #[serde(rename = "cyclicForB")]
    pub cyclic_for_b: bool,
    #[serde(rename = "cyclicForCommutant")]
    pub cyclic_for_commutant: bool,
    #[serde(rename = "rankB")]
    pub rank_b: usize,
    #[serde(rename = "rankCommutant")]
    pub rank_commutant: usize,
    pub dim: usize,
}

impl BicyclicReport {
    /// Cyclic for both `B` and `B'`; cyclic for `B'` means separating for `B`.
    pub fn bicyclic(&self) -> bool {
        self.cyclic_for_b && self.cyclic_for_commutant
    }
}

pub fn bicyclic_witness(b: &MatrixAlgebra, v: &DVector<C64>) -> Result<BicyclicReport> {
    let n = b.ambient_dim();
    if v.len() != n {
        return Err(LabError::DimensionMismatch { expected: n, found: v.len() });
    }
    if v.norm() == 0.0 {
        return Err(LabError::ZeroVector);
    }
    let bp = b.commutant()?;
    let rank_b = span_rank(b, v);
    let rank_commutant = span_rank(&bp, v);
    Ok(BicyclicReport {
        cyclic_for_b: rank_b == n,
        cyclic_for_commutant: rank_commutant == n,
        rank_b,
        rank_commutant,
        dim: n,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct CartanReport {
    #[serde(rename = "abelianDim")]
    pub abelian_dim: usize,
    #[serde(rename = "commutantDim")]
    pub commutant_dim: usize,
    #[serde(rename = "maximalAbelian")]
    pub maximal_abelian: bool,
}

/// Whether the multiplicators from both invariant classes generate a
/// maximal abelian subalgebra of `M_N`.
pub fn cartan_check(sys: &PairedSystem) -> Result<CartanReport> {
    let mut gens = orbit_indicators(sys, Side::G);
    gens.extend(orbit_indicators(sys, Side::H));
    let a = MatrixAlgebra::closure_in(sys.len(), &gens)?;
    let c = a.commutant()?;
    Ok(CartanReport {
        abelian_dim: a.dimension(),
        commutant_dim: c.dimension(),
        maximal_abelian: a.same_span(&c),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use crate::systems::product_model;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn identity_element_gives_identity() {
        let sys = product_model(2, 3).unwrap();
        for side in [Side::G, Side::H] {
            let e = sys.group(side).identity();
            assert_eq!(rep_unitary(&sys, side, e).unwrap(), ComplexMatrix::identity(6));
        }
        assert!(matches!(rep_unitary(&sys, Side::G, 2), Err(LabError::UnknownElement { .. })));
    }

    #[test]
    fn g_translation_swaps_first_coordinate() {
        let sys = product_model(2, 3).unwrap();
        let u = rep_unitary(&sys, Side::G, 1).unwrap();
        for b in 0..3 {
            assert_eq!(u.inner()[(3 + b, b)], c(1.0));
            assert_eq!(u.inner()[(b, 3 + b)], c(1.0));
        }
    }

    #[test]
    fn multiplicators_commute_with_own_side() {
        let sys = product_model(2, 3).unwrap();
        let m = multiplicator(&sys, &[c(1.0), c(0.0), c(0.0)], Side::G).unwrap();
        assert_eq!(crate::matrix::numerical_rank(m.inner()), 2);
        for g in 0..2 {
            assert!(m.commutator(&rep_unitary(&sys, Side::G, g).unwrap()).max_abs() < 1e-12);
        }
        assert!(multiplicator(&sys, &[c(1.0); 2], Side::G).is_err());
        assert_eq!(multiplicator(&sys, &[c(1.0); 3], Side::G).unwrap(), ComplexMatrix::identity(6));
    }

    #[test]
    fn product_model_algebras_are_mutual_commutants() {
        let sys = product_model(2, 3).unwrap();
        let ag = side_algebra(&sys, Side::G).unwrap();
        let ah = side_algebra(&sys, Side::H).unwrap();
        assert_eq!(ag.dimension(), 4);
        assert_eq!(ah.dimension(), 9);
        assert!(ag.commutant().unwrap().same_span(&ah));
        assert!(ah.commutant().unwrap().same_span(&ag));
        let cg = mvn_coupling(&ag, &Witness::auto(1)).unwrap();
        let ch = mvn_coupling(&ah, &Witness::auto(1)).unwrap();
        assert_eq!(cg.lambda_rational, q(3, 2));
        assert_eq!(ch.lambda_rational, q(2, 3));
        assert!(cg.spread <= 1e-8 && ch.spread <= 1e-8);
        assert!(cg.flags.separating_exists && !cg.flags.cyclic_exists && cg.flags.rank_confirmed);
        assert!(ch.flags.cyclic_exists && ch.flags.rank_confirmed);
    }

    #[test]
    fn full_matrix_algebra_coupling() {
        let full = MatrixAlgebra::full(4);
        let cert = mvn_coupling(&full, &Witness::auto(3)).unwrap();
        assert!((cert.lambda - 0.25).abs() < 1e-12);
        let sc = mvn_coupling(&MatrixAlgebra::scalars(4), &Witness::auto(3)).unwrap();
        assert!((sc.lambda - 4.0).abs() < 1e-12);
        let v = DVector::from_element(4, c(1.0));
        let r = bicyclic_witness(&full, &v).unwrap();
        assert!(r.cyclic_for_b && !r.cyclic_for_commutant);
        assert!(matches!(bicyclic_witness(&full, &DVector::zeros(4)), Err(LabError::ZeroVector)));
    }

    #[test]
    fn irreducibility_of_joint_system() {
        let sys = product_model(2, 3).unwrap();
        let ag = side_algebra(&sys, Side::G).unwrap();
        let ah = side_algebra(&sys, Side::H).unwrap();
        assert!(is_irreducible(&[&ag, &ah]).unwrap().irreducible);
        let alone = is_irreducible(&[&ag]).unwrap();
        assert!(!alone.irreducible);
        let w = alone.witness.unwrap();
        assert!(ah.contains(&w));
    }

    #[test]
    fn multiplicators_form_a_cartan_subalgebra() {
        let report = cartan_check(&product_model(2, 3).unwrap()).unwrap();
        assert!(report.maximal_abelian);
        assert_eq!(report.abelian_dim, 6);
    }
}
