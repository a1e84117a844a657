//! Pairs of commuting group actions on finite measured spaces.
//!
//! A [`PairedSystem`] is a finite set of points with positive rational
//! weights, a group `G` acting on the left and a group `H` acting on the
//! right, both measure preserving. The analysis functions in this module
//! check the pairing axioms, compute orbit partitions and fundamental
//! domains, and return the dynamical coupling constant
//! `lambda(G, H) = mu(F_H) / mu(F_G)` as an exact rational.

mod analysis;
mod file;
mod models;

use std::fmt;

use num::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::group::FiniteGroup;
use crate::rational::{frac, Q};

pub use analysis::{
    check_axioms, dyn_coupling, fundamental_domain, induced_quotient_action, orbits, AxiomReport,
    CouplingReport, FundamentalDomain, InducedAction, OrbitPartition,
};
pub use file::{parse_system_description, SystemDescription};
pub use models::{product_model, translation_pair, TranslationPair};

/// Which of the two acting groups an operation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    G,
    H,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::G => Side::H,
            Side::H => Side::G,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::G => "G",
            Side::H => "H",
        })
    }
}

/// Two lattices `Z*lambda1`, `Z*lambda2` acting on the line by translation.
///
/// Only rational parameters are stored; an irrational target is handled by
/// building one spec per continued-fraction convergent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftPairSpec {
    #[serde(with = "crate::rational::serde_q")]
    pub lambda1: Q,
    #[serde(with = "crate::rational::serde_q")]
    pub lambda2: Q,
}

impl ShiftPairSpec {
    pub fn new(lambda1: Q, lambda2: Q) -> Result<Self> {
        if !lambda1.is_positive() || !lambda2.is_positive() {
            return Err(LabError::Degenerate(format!(
                "shift parameters must be positive, got {lambda1} and {lambda2}"
            )));
        }
        Ok(Self { lambda1, lambda2 })
    }

    /// Rotation number of `H` on the circle `R / lambda1 Z`, i.e. `{lambda2/lambda1}`.
    pub fn h_on_g_orbits(&self) -> Q {
        frac(&(&self.lambda2 / &self.lambda1))
    }

    /// Rotation number of `G` on the circle `R / lambda2 Z`, i.e. `{lambda1/lambda2}`.
    pub fn g_on_h_orbits(&self) -> Q {
        frac(&(&self.lambda1 / &self.lambda2))
    }
}

/// Finite measured space with a left `G`-action and a right `H`-action.
///
/// Invariants enforced by [`PairedSystem::new`]: every group element acts
/// by a bijection, both actions are homomorphisms (`g(g'x) = (gg')x`,
/// `(xh)h' = x(hh')`), and both preserve the weights.
#[derive(Debug, Clone, PartialEq)]
pub struct PairedSystem {
    labels: Vec<String>,
    weights: Vec<Q>,
    group_g: FiniteGroup,
    group_h: FiniteGroup,
    /// `left[g][x] = g x`
    left: Vec<Vec<usize>>,
    /// `right[h][x] = x h`
    right: Vec<Vec<usize>>,
    shift: Option<ShiftPairSpec>,
}

impl PairedSystem {
    pub fn new(
        labels: Vec<String>,
        weights: Vec<Q>,
        group_g: FiniteGroup,
        group_h: FiniteGroup,
        left: Vec<Vec<usize>>,
        right: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(LabError::Structural("system has no points".into()));
        }
        if weights.len() != n {
            return Err(LabError::Structural(format!(
                "{} weights for {n} points",
                weights.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_positive()) {
            return Err(LabError::Structural(format!("non-positive weight {w}")));
        }
        validate_action("left", &group_g, &left, n, |a, b| group_g.mul(a, b))?;
        // right action: (x h) h' = x (h h'), i.e. right[h'] after right[h] equals right[h h']
        validate_action("right", &group_h, &right, n, |a, b| group_h.mul(b, a))?;
        for (name, table) in [("left", &left), ("right", &right)] {
            for (e, row) in table.iter().enumerate() {
                if let Some(x) = (0..n).find(|&x| weights[row[x]] != weights[x]) {
                    return Err(LabError::Structural(format!(
                        "{name} action of element {e} does not preserve the weight of point {}",
                        labels[x]
                    )));
                }
            }
        }
        Ok(Self { labels, weights, group_g, group_h, left, right, shift: None })
    }

    /// Attaches the shift-pair parameters this finite model approximates.
    pub fn with_shift_spec(mut self, spec: ShiftPairSpec) -> Self {
        self.shift = Some(spec);
        self
    }

    pub fn shift_spec(&self) -> Option<&ShiftPairSpec> {
        self.shift.as_ref()
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn weights(&self) -> &[Q] {
        &self.weights
    }

    pub fn group(&self, side: Side) -> &FiniteGroup {
        match side {
            Side::G => &self.group_g,
            Side::H => &self.group_h,
        }
    }

    pub fn action_table(&self, side: Side) -> &[Vec<usize>] {
        match side {
            Side::G => &self.left,
            Side::H => &self.right,
        }
    }

    /// `g x` for `Side::G`, `x h` for `Side::H`.
    pub fn act(&self, side: Side, element: usize, x: usize) -> usize {
        self.action_table(side)[element][x]
    }

    /// Same system with all weights multiplied by `factor > 0`.
    pub fn scaled(&self, factor: &Q) -> Result<Self> {
        if !factor.is_positive() {
            return Err(LabError::Degenerate("scale factor must be positive".into()));
        }
        let mut out = self.clone();
        for w in &mut out.weights {
            *w = &*w * factor;
        }
        Ok(out)
    }

    /// Same system with point ids reversed (`x -> n-1-x`).
    pub fn reversed(&self) -> Self {
        let n = self.len();
        let flip = |x: usize| n - 1 - x;
        let remap = |table: &[Vec<usize>]| {
            table
                .iter()
                .map(|row| (0..n).map(|x| flip(row[flip(x)])).collect())
                .collect()
        };
        Self {
            labels: self.labels.iter().rev().cloned().collect(),
            weights: self.weights.iter().rev().cloned().collect(),
            group_g: self.group_g.clone(),
            group_h: self.group_h.clone(),
            left: remap(&self.left),
            right: remap(&self.right),
            shift: self.shift.clone(),
        }
    }
}

fn validate_action(
    name: &str,
    group: &FiniteGroup,
    table: &[Vec<usize>],
    n: usize,
    compose: impl Fn(usize, usize) -> usize,
) -> Result<()> {
    if table.len() != group.order() {
        return Err(LabError::Structural(format!(
            "{name} action has {} rows for a group of order {}",
            table.len(),
            group.order()
        )));
    }
    for (e, row) in table.iter().enumerate() {
        if row.len() != n {
            return Err(LabError::Structural(format!(
                "{name} action row {e} has length {}, expected {n}",
                row.len()
            )));
        }
        let mut hit = vec![false; n];
        for &y in row {
            if y >= n || std::mem::replace(&mut hit[y], true) {
                return Err(LabError::Structural(format!(
                    "{name} action of element {e} is not a bijection"
                )));
            }
        }
    }
    // first apply b, then a; must equal the action of compose(a, b)
    for a in 0..group.order() {
        for b in 0..group.order() {
            let ab = compose(a, b);
            if (0..n).any(|x| table[a][table[b][x]] != table[ab][x]) {
                return Err(LabError::Structural(format!(
                    "{name} action is not a homomorphism on elements ({a}, {b})"
                )));
            }
        }
    }
    Ok(())
}
