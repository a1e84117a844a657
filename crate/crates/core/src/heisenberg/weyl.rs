use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{MatrixAlgebra, DEFAULT_MAX_DIM};
use crate::error::{LabError, Result};
use crate::matrix::{phase, ComplexMatrix, C64};
use crate::operators::{is_irreducible, mvn_coupling, Witness};
use crate::rational::{frac, nearest_rational, to_f64, Q};

/// Largest group handled by [`weyl_check`].
pub const MAX_WEYL_ORDER: usize = 4096;

/// Translations and characters of `A = Z_{n_1} x ... x Z_{n_k}` on `l^2(A)`.
///
/// Elements are mixed-radix indices with the first factor most significant.
/// `T_x e_y = e_{y+x}` and `M_chi e_y = <chi, y> e_y` with
/// `<chi, y> = exp(2 pi i sum chi_i y_i / n_i)`.
#[derive(Debug, Clone)]
pub struct WeylSystem {
    factors: Vec<usize>,
    order: usize,
}

impl WeylSystem {
    pub fn new(factors: Vec<usize>) -> Result<Self> {
        if factors.contains(&0) {
            return Err(LabError::Structural("cyclic factors must have positive order".into()));
        }
        let order = factors.iter().product::<usize>().max(1);
        if order > MAX_WEYL_ORDER {
            return Err(LabError::DimensionCap { dim: order, cap: MAX_WEYL_ORDER });
        }
        Ok(Self { factors, order })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn factors(&self) -> &[usize] {
        &self.factors
    }

    pub fn digits(&self, mut x: usize) -> Vec<usize> {
        let mut d = vec![0; self.factors.len()];
        for (slot, &n) in d.iter_mut().zip(&self.factors).rev() {
            *slot = x % n;
            x /= n;
        }
        d
    }

    pub fn index(&self, digits: &[usize]) -> usize {
        digits.iter().zip(&self.factors).fold(0, |acc, (&d, &n)| acc * n + d % n)
    }

    pub fn add(&self, x: usize, y: usize) -> usize {
        let (dx, dy) = (self.digits(x), self.digits(y));
        let sum: Vec<usize> = dx.iter().zip(&dy).map(|(a, b)| a + b).collect();
        self.index(&sum)
    }

    /// `<chi, x>` in turns, exact.
    pub fn pairing(&self, chi: usize, x: usize) -> Q {
        let (dc, dx) = (self.digits(chi), self.digits(x));
        let total = dc
            .iter()
            .zip(&dx)
            .zip(&self.factors)
            .fold(Q::from_integer(0.into()), |acc, ((&c, &y), &n)| {
                acc + Q::new(((c * y) as i64).into(), (n as i64).into())
            });
        frac(&total)
    }

    pub fn translation(&self, x: usize) -> ComplexMatrix {
        ComplexMatrix::permutation(&(0..self.order).map(|y| self.add(y, x)).collect::<Vec<_>>())
    }

    pub fn character(&self, chi: usize) -> ComplexMatrix {
        let d: Vec<C64> = (0..self.order).map(|y| phase(to_f64(&self.pairing(chi, y)))).collect();
        ComplexMatrix::diagonal(&d)
    }

    /// Unit vector along each cyclic factor.
    pub fn generators(&self) -> Vec<usize> {
        (0..self.factors.len())
            .map(|i| {
                let mut d = vec![0; self.factors.len()];
                d[i] = 1;
                self.index(&d)
            })
            .collect()
    }

    /// Max deviation of `M_chi T_x - <chi,x> T_x M_chi`, computed on basis vectors.
    fn cocycle_residual(&self, x: usize, chi: usize) -> f64 {
        let expected = phase(to_f64(&self.pairing(chi, x)));
        (0..self.order)
            .map(|y| {
                let yx = self.add(y, x);
                let lhs = phase(to_f64(&self.pairing(chi, yx)));
                let rhs = expected * phase(to_f64(&self.pairing(chi, y)));
                (lhs - rhs).norm()
            })
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SplitReport {
    /// Orders of the two parts `A = A1 x A2`.
    pub parts: [usize; 2],
    #[serde(rename = "mutualCommutants")]
    pub mutual_commutants: bool,
    /// Coupling constants of `W(A1) x 1` and `1 x W(A2)`.
    #[serde(rename = "couplings", with = "crate::rational::serde_q_vec")]
    pub couplings: Vec<Q>,
}

#[derive(Debug, Clone, Serialize)]
pub struct WeylReport {
    pub factors: Vec<usize>,
    pub order: usize,
    #[serde(rename = "pairsChecked")]
    pub pairs_checked: usize,
    #[serde(rename = "cocycleResidual")]
    pub cocycle_residual: f64,
    /// Commutation phase of the generator pairs, in turns.
    #[serde(rename = "generatorPhases", with = "crate::rational::serde_q_vec")]
    pub generator_phases: Vec<Q>,
    #[serde(rename = "translationAlgebraDim")]
    pub translation_algebra_dim: Option<usize>,
    #[serde(rename = "jointIrreducible")]
    pub joint_irreducible: Option<bool>,
    pub split: Option<SplitReport>,
    /// Why operator-algebra checks were skipped, if they were.
    #[serde(rename = "skipReason")]
    pub skip_reason: Option<String>,
}

/// Checks the commutation phases of `A`'s Weyl system and, for
/// `|A| <= 200`, the operator-algebra structure of its parts.
pub fn weyl_check(factors: &[usize], seed: u64) -> Result<WeylReport> {
    let w = WeylSystem::new(factors.to_vec())?;
    let gens = w.generators();
    let mut pairs: Vec<(usize, usize)> = gens.iter().flat_map(|&x| gens.iter().map(move |&c| (x, c))).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sampled = if w.order <= 16 { w.order * w.order } else { 64 };
    if w.order <= 16 {
        pairs.extend((0..w.order).flat_map(|x| (0..w.order).map(move |c| (x, c))));
    } else {
        pairs.extend((0..sampled).map(|_| (rng.random_range(0..w.order), rng.random_range(0..w.order))));
    }
    let cocycle_residual = pairs.iter().map(|&(x, c)| w.cocycle_residual(x, c)).fold(0.0, f64::max);
    let generator_phases = gens.iter().map(|&g| w.pairing(g, g)).collect();

    let mut report = WeylReport {
        factors: factors.to_vec(),
        order: w.order,
        pairs_checked: pairs.len(),
        cocycle_residual,
        generator_phases,
        translation_algebra_dim: None,
        joint_irreducible: None,
        split: None,
        skip_reason: None,
    };
    if w.order > DEFAULT_MAX_DIM {
        report.skip_reason = Some(format!("order {} exceeds the operator cap {DEFAULT_MAX_DIM}", w.order));
        return Ok(report);
    }
    let translations: Vec<ComplexMatrix> = gens.iter().map(|&g| w.translation(g)).collect();
    let characters: Vec<ComplexMatrix> = gens.iter().map(|&g| w.character(g)).collect();
    let t_alg = MatrixAlgebra::closure_in(w.order, &translations)?;
    let c_alg = MatrixAlgebra::closure_in(w.order, &characters)?;
    report.translation_algebra_dim = Some(t_alg.dimension());
    report.joint_irreducible = Some(is_irreducible(&[&t_alg, &c_alg])?.irreducible);

    if factors.len() >= 2 {
        let k = factors[0];
        let rest = w.order / k;
        let part = |range: std::ops::Range<usize>| -> Vec<ComplexMatrix> {
            range
                .flat_map(|i| [w.translation(gens[i]), w.character(gens[i])])
                .collect()
        };
        let first = MatrixAlgebra::closure_in(w.order, &part(0..1))?;
        let second = MatrixAlgebra::closure_in(w.order, &part(1..factors.len()))?;
        let mutual = first.commutant()?.same_span(&second) && second.commutant()?.same_span(&first);
        let mut couplings = Vec::new();
        for alg in [&first, &second] {
            let cert = mvn_coupling(alg, &Witness::auto(seed))?;
            couplings.push(nearest_rational(cert.lambda, w.order as u64));
        }
        report.split = Some(SplitReport { parts: [k, rest], mutual_commutants: mutual, couplings });
    }
    Ok(report)
}

/// Clock `U = diag(exp(2 pi i k p / N))` and cyclic shift `V e_k = e_{k+1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ClockShiftPair {
    pub n: usize,
    pub p: usize,
}

impl ClockShiftPair {
    pub fn new(n: usize, p: usize) -> Result<Self> {
        if n == 0 || p == 0 || p >= n {
            return Err(LabError::Degenerate(format!("clock/shift needs 1 <= p < N, got p={p}, N={n}")));
        }
        Ok(Self { n, p })
    }

    pub fn clock(&self) -> ComplexMatrix {
        let d: Vec<C64> = (0..self.n)
            .map(|k| phase(((k * self.p) % self.n) as f64 / self.n as f64))
            .collect();
        ComplexMatrix::diagonal(&d)
    }

    pub fn shift(&self) -> ComplexMatrix {
        ComplexMatrix::permutation(&(0..self.n).map(|k| (k + 1) % self.n).collect::<Vec<_>>())
    }
}

/// Max-abs entry of `UV - exp(2 pi i p/N) VU`.
pub fn clock_shift_residual(cs: &ClockShiftPair) -> f64 {
    let u = cs.clock();
    let v = cs.shift();
    let theta = phase(cs.p as f64 / cs.n as f64);
    let lhs: DMatrix<C64> = u.inner() * v.inner();
    let rhs: DMatrix<C64> = v.inner() * u.inner() * theta;
    (lhs - rhs).iter().map(|z| z.norm()).fold(0.0, f64::max)
}
