//! The Heisenberg group `{(a, b, alpha)}`, its lattices, the representations
//! `rho_n` on periodic grids, finite Weyl systems, clock/shift pairs and the
//! rational torus models.

mod rho;
mod torus;
mod weyl;

use num::{Integer, One, Zero};
use serde::Serialize;

use crate::rational::{frac, Q};

pub use rho::{rho_n_operator, GridSpec};
pub use torus::{
    convergent_sweep, k0_positive, k0_positive_exact, rational_torus_model, torus_bridge, ConvergentRow,
    TorusReport,
};
pub use weyl::{clock_shift_residual, weyl_check, ClockShiftPair, SplitReport, WeylReport, WeylSystem};

/// `(a, b, exp(2 pi i turns))` with exact rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct HeisenbergElement {
    #[serde(with = "crate::rational::serde_q")]
    pub a: Q,
    #[serde(with = "crate::rational::serde_q")]
    pub b: Q,
    /// Central phase in turns, reduced to `[0, 1)`.
    #[serde(with = "crate::rational::serde_q")]
    pub turns: Q,
}

impl HeisenbergElement {
    pub fn new(a: Q, b: Q, turns: Q) -> Self {
        Self { a, b, turns: frac(&turns) }
    }

    pub fn identity() -> Self {
        Self::new(Q::zero(), Q::zero(), Q::zero())
    }

    pub fn inverse(&self) -> Self {
        // (a,b,t)(-a,-b,s) has phase t + s - ab, so s = ab - t
        Self::new(-&self.a, -&self.b, &self.a * &self.b - &self.turns)
    }

    pub fn mul(&self, other: &Self) -> Self {
        h_multiply(self, other)
    }
}

/// `(a,b,alpha)(a',b',alpha') = (a+a', b+b', alpha alpha' exp(2 pi i a b'))`.
pub fn h_multiply(x: &HeisenbergElement, y: &HeisenbergElement) -> HeisenbergElement {
    HeisenbergElement::new(&x.a + &y.a, &x.b + &y.b, &x.turns + &y.turns + &x.a * &y.b)
}

/// Central phase of `x y x^-1 y^-1`, in turns.
///
/// The commutator is central, so `xy = [x, y] yx` and its phase is the
/// difference of the phases of `xy` and `yx`.
pub fn commutator_turns(x: &HeisenbergElement, y: &HeisenbergElement) -> Q {
    let xy = x.mul(y);
    let yx = y.mul(x);
    debug_assert!(xy.a == yx.a && xy.b == yx.b);
    frac(&(xy.turns - yx.turns))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LatticeOrder {
    /// `Gamma(lambda1, lambda2)`
    Direct,
    /// `Gamma(lambda2, lambda1)`
    Swapped,
}

/// Integer coordinates `(m, n, r)` of a lattice point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LatticeIndex {
    pub m: i64,
    pub n: i64,
    pub r: i64,
}

impl LatticeIndex {
    pub fn new(m: i64, n: i64, r: i64) -> Self {
        Self { m, n, r }
    }
}

/// `Gamma(l1, l2) = {(m l1, n / l2, exp(2 pi i r l1 / l2))}`; `Swapped`
/// exchanges the roles of `lambda1` and `lambda2`.
pub fn lattice_embed(idx: LatticeIndex, lambda1: &Q, lambda2: &Q, order: LatticeOrder) -> HeisenbergElement {
    let (l1, l2) = match order {
        LatticeOrder::Direct => (lambda1, lambda2),
        LatticeOrder::Swapped => (lambda2, lambda1),
    };
    let m = Q::from_integer(idx.m.into());
    let n = Q::from_integer(idx.n.into());
    let r = Q::from_integer(idx.r.into());
    HeisenbergElement::new(m * l1, n / l2, r * l1 / l2)
}

/// Commutator phase of a point of `Gamma(l1, l2)` with a point of `Gamma(l2, l1)`.
pub fn cross_lattice_commutator(idx1: LatticeIndex, idx2: LatticeIndex, lambda1: &Q, lambda2: &Q) -> Q {
    let x = lattice_embed(idx1, lambda1, lambda2, LatticeOrder::Direct);
    let y = lattice_embed(idx2, lambda1, lambda2, LatticeOrder::Swapped);
    commutator_turns(&x, &y)
}

/// Commutator phase of two points of `Gamma(l1, l2)`: `(m n' - m' n) l1 / l2 mod 1`.
pub fn same_lattice_commutator(idx1: LatticeIndex, idx2: LatticeIndex, lambda1: &Q, lambda2: &Q) -> Q {
    let x = lattice_embed(idx1, lambda1, lambda2, LatticeOrder::Direct);
    let y = lattice_embed(idx2, lambda1, lambda2, LatticeOrder::Direct);
    commutator_turns(&x, &y)
}

/// A pair in `Gamma(l1, l2)` with non-zero commutator phase, if `l1/l2` is not an integer.
pub fn non_abelian_witness(lambda1: &Q, lambda2: &Q) -> Option<(LatticeIndex, LatticeIndex, Q)> {
    let ratio = lambda1 / lambda2;
    if ratio.denom().is_one() {
        return None;
    }
    let (x, y) = (LatticeIndex::new(1, 0, 0), LatticeIndex::new(0, 1, 0));
    let t = same_lattice_commutator(x, y, lambda1, lambda2);
    debug_assert!(!t.is_zero());
    Some((x, y, t))
}

/// `gcd` helper shared by the torus models.
pub(crate) fn coprime(p: u64, q: u64) -> bool {
    p.gcd(&q) == 1
}
