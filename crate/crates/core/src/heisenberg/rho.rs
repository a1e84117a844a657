use nalgebra::DMatrix;
use num::{Integer, Zero};
use serde::{Deserialize, Serialize};

use super::HeisenbergElement;
use crate::error::{LabError, Result};
use crate::matrix::{phase, ComplexMatrix, C64};
use crate::rational::{frac, to_f64, Q};

/// Periodic window of `points` samples `x_j = j * spacing`, length `L = points * spacing`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub points: usize,
    #[serde(with = "crate::rational::serde_q")]
    pub spacing: Q,
}

impl GridSpec {
    pub fn new(points: usize, spacing: Q) -> Result<Self> {
        if points == 0 || spacing <= Q::zero() {
            return Err(LabError::Discretization("grid needs points > 0 and spacing > 0".into()));
        }
        Ok(Self { points, spacing })
    }

    pub fn length(&self) -> Q {
        &self.spacing * Q::from_integer((self.points as i64).into())
    }

    /// Shift `b` in grid steps, if it is a whole number of steps.
    pub fn steps(&self, b: &Q) -> Result<i64> {
        let k = b / &self.spacing;
        if !k.is_integer() {
            return Err(LabError::Discretization(format!(
                "shift {b} is not a multiple of the grid spacing {}",
                self.spacing
            )));
        }
        k.to_integer()
            .try_into()
            .map_err(|_| LabError::Discretization(format!("shift {b} is too large")))
    }

    /// Whether `exp(2 pi i n a x)` is periodic on the window.
    pub fn check_frequency(&self, n: i64, a: &Q) -> Result<()> {
        let cycles = Q::from_integer(n.into()) * a * self.length();
        if !cycles.is_integer() {
            return Err(LabError::Discretization(format!(
                "frequency n*a = {} does not fit the window of length {}",
                Q::from_integer(n.into()) * a,
                self.length()
            )));
        }
        Ok(())
    }
}

/// `rho_n(a, b, alpha)` on the periodic grid:
/// `(U f)(x) = alpha^n exp(2 pi i n a (x - b)) f(x - b)`.
///
/// This ordering (shift after modulation) is the one that makes `rho_n` a
/// homomorphism for the multiplication law with phase `a b'`.
pub fn rho_n_operator(n: i64, x: &HeisenbergElement, grid: &GridSpec) -> Result<ComplexMatrix> {
    if n == 0 {
        return Err(LabError::Degenerate("rho_n needs a non-zero n".into()));
    }
    let k = grid.steps(&x.b)?;
    grid.check_frequency(n, &x.a)?;
    let m = grid.points;
    let nq = Q::from_integer(n.into());
    let mut out = DMatrix::<C64>::zeros(m, m);
    for i in 0..m {
        let xi = &grid.spacing * Q::from_integer((i as i64).into());
        let turns = frac(&(&nq * &x.turns + &nq * &x.a * (xi - &x.b)));
        let src = (i as i64 - k).mod_floor(&(m as i64)) as usize;
        out[(i, src)] = phase(to_f64(&turns));
    }
    ComplexMatrix::new(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_and_pure_shift() {
        let grid = GridSpec::new(6, q(1, 3)).unwrap();
        let id = rho_n_operator(1, &HeisenbergElement::identity(), &grid).unwrap();
        assert_eq!(id, ComplexMatrix::identity(6));
        let step = HeisenbergElement::new(qi(0), q(1, 3), qi(0));
        let s = rho_n_operator(1, &step, &grid).unwrap();
        let shift = ComplexMatrix::permutation(&(0..6).map(|y| (y + 1) % 6).collect::<Vec<_>>());
        assert_eq!(s, shift);
    }

    #[test]
    fn off_grid_inputs_are_rejected() {
        let grid = GridSpec::new(6, q(1, 3)).unwrap();
        let bad_shift = HeisenbergElement::new(qi(0), q(1, 4), qi(0));
        assert!(matches!(rho_n_operator(1, &bad_shift, &grid), Err(LabError::Discretization(_))));
        // window length 2: frequency 1/3 does not close up
        let bad_freq = HeisenbergElement::new(q(1, 3), qi(0), qi(0));
        assert!(matches!(rho_n_operator(1, &bad_freq, &grid), Err(LabError::Discretization(_))));
    }

    #[test]
    fn homomorphism_on_random_grid_pairs() {
        // L = 12 * 1/4 = 3: allowed frequencies are multiples of 1/(3n)
        let grid = GridSpec::new(12, q(1, 4)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [1i64, 2, -1] {
            let draw = |rng: &mut ChaCha8Rng| {
                HeisenbergElement::new(
                    q(rng.random_range(-6..6), 3 * n.abs()),
                    q(rng.random_range(-12..12), 4),
                    q(rng.random_range(0..10), 10),
                )
            };
            for _ in 0..100 {
                let x = draw(&mut rng);
                let y = draw(&mut rng);
                let lhs = rho_n_operator(n, &x, &grid).unwrap().mul(&rho_n_operator(n, &y, &grid).unwrap());
                let rhs = rho_n_operator(n, &x.mul(&y), &grid).unwrap();
                assert!(lhs.sub(&rhs).max_abs() <= 1e-10);
                assert!(rhs.unitarity_residual() <= 1e-10);
            }
        }
    }
}
