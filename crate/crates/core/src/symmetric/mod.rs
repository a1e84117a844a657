//! Bernoulli measures on two-sided sequences, the two commuting actions of
//! the symmetric group on negative and positive indices, and the finite
//! windows on which their fundamental domains are checked.
//!
//! A window of shape `(r, N)` records `x_{-1}, ..., x_{-N}` and
//! `x_1, ..., x_{N+r}`. Symbols are alphabet indices `0..k`; symbols `>= k`
//! stand for draws from the truncated tail and never repeat.

mod mc;
mod pseudo;

use num::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{LabError, Result};
use crate::rational::Q;

pub use mc::{mc_character, mc_coupling, Estimate};
pub use pseudo::{
    commutant_projections_report, pseudogroupoid_check, pseudogroupoid_check_with, sn_smoke, sn_system,
    CommutationWitness, Cylinder, ProjectionsReport, PseudogroupoidReport, SideSets, SmokeReport,
};

/// Weights `alpha_1 >= ... >= alpha_k > 0` with `sum = 1 - tail_mass`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BernoulliSpec {
    #[serde(with = "crate::rational::serde_q_vec")]
    weights: Vec<Q>,
    #[serde(rename = "tailMass", with = "crate::rational::serde_q")]
    tail_mass: Q,
}

impl BernoulliSpec {
    pub fn new(weights: Vec<Q>) -> Result<Self> {
        Self::with_tail(weights, Q::zero())
    }

    /// Countable alphabet truncated at `k` symbols; `tail_mass` is the
    /// probability of the symbols not listed.
    pub fn with_tail(weights: Vec<Q>, tail_mass: Q) -> Result<Self> {
        if weights.is_empty() {
            return Err(LabError::Degenerate("empty weight vector".into()));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_positive()) {
            return Err(LabError::Degenerate(format!("weight {w} is not positive")));
        }
        if weights.windows(2).any(|p| p[0] < p[1]) {
            return Err(LabError::Degenerate("weights must be sorted in descending order".into()));
        }
        if tail_mass.is_negative() || tail_mass >= Q::one() {
            return Err(LabError::Degenerate(format!("tail mass {tail_mass} outside [0, 1)")));
        }
        let total: Q = weights.iter().sum();
        if total + &tail_mass != Q::one() {
            return Err(LabError::Degenerate(format!(
                "weights sum to {} with tail {tail_mass}, expected 1",
                weights.iter().sum::<Q>()
            )));
        }
        Ok(Self { weights, tail_mass })
    }

    pub fn weights(&self) -> &[Q] {
        &self.weights
    }

    pub fn tail_mass(&self) -> &Q {
        &self.tail_mass
    }

    pub fn alphabet_size(&self) -> usize {
        self.weights.len()
    }

    /// `sum_i alpha_i^j` over the listed symbols.
    pub fn power_sum(&self, j: u32) -> Q {
        self.weights.iter().map(|a| num::pow(a.clone(), j as usize)).sum()
    }

    /// Repeated weights: the extra symmetry case in which the indicator of
    /// the symmetric sequences is not cyclic.
    pub fn degenerate_flag(&self) -> bool {
        self.weights.windows(2).any(|p| p[0] == p[1])
    }

    pub(crate) fn weight_of(&self, symbol: usize) -> Q {
        self.weights.get(symbol).cloned().unwrap_or_else(Q::zero)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct SeqWindow {
    pub r: usize,
    pub n: usize,
    /// `neg[i-1] = x_{-i}`, `i = 1..=N`
    pub neg: Vec<usize>,
    /// `pos[i-1] = x_i`, `i = 1..=N+r`
    pub pos: Vec<usize>,
}

impl SeqWindow {
    pub fn new(r: usize, neg: Vec<usize>, pos: Vec<usize>) -> Result<Self> {
        let n = neg.len();
        if pos.len() != n + r {
            return Err(LabError::Structural(format!(
                "window with N = {n}, r = {r} needs {} positive symbols, got {}",
                n + r,
                pos.len()
            )));
        }
        if n < r {
            return Err(LabError::Structural(format!("window radius {n} is smaller than r = {r}")));
        }
        Ok(Self { r, n, neg, pos })
    }

    /// Window of `X_{0,r}` with the given positive part.
    pub fn shifted_symmetric(r: usize, pos: Vec<usize>) -> Result<Self> {
        let n = pos.len().checked_sub(r).ok_or_else(|| {
            LabError::Structural("positive part shorter than r".into())
        })?;
        let neg = (1..=n).map(|i| pos[i + r - 1]).collect();
        Self::new(r, neg, pos)
    }

    /// `x_i` for `i != 0` inside the window.
    pub fn get(&self, i: isize) -> usize {
        if i < 0 {
            self.neg[(-i) as usize - 1]
        } else {
            self.pos[i as usize - 1]
        }
    }

    /// Flat layout `x_{-1..-N}, x_{1..N+r}`.
    pub fn flat(&self) -> Vec<usize> {
        self.neg.iter().chain(&self.pos).copied().collect()
    }

    pub fn from_flat(r: usize, n: usize, flat: &[usize]) -> Self {
        Self { r, n, neg: flat[..n].to_vec(), pos: flat[n..].to_vec() }
    }
}

/// `x_{-i} = x_{i+r}` for `1 <= i <= N`.
pub fn in_x0r(w: &SeqWindow) -> bool {
    (1..=w.n).all(|i| w.neg[i - 1] == w.pos[i + w.r - 1])
}

/// `in_x0r` and additionally `x_{-i} = x_i` for `1 <= i <= r`.
pub fn in_xprime0r(w: &SeqWindow) -> bool {
    in_x0r(w) && (1..=w.r).all(|i| w.neg[i - 1] == w.pos[i - 1])
}

/// Measure of `X'_{0,r}` relative to `X_{0,r}`: `(sum alpha_i^2)^r`.
pub fn coupling_formula(spec: &BernoulliSpec, r: u32) -> Q {
    num::pow(spec.power_sum(2), r as usize)
}

/// Cycle lengths of a permutation of `0..n`, sorted descending.
pub fn cycle_type(perm: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; perm.len()];
    let mut out = Vec::new();
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = perm[x];
            len += 1;
        }
        out.push(len);
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

/// `prod_{j >= 2} (sum_k alpha_k^j)^{c_j}` for the cycle lengths given.
pub fn character_value(cycle_lengths: &[usize], spec: &BernoulliSpec) -> Q {
    cycle_lengths
        .iter()
        .filter(|&&l| l >= 2)
        .map(|&l| spec.power_sum(l as u32))
        .product()
}
