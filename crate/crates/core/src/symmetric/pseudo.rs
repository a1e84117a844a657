use std::collections::HashMap;

use num::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{coupling_formula, BernoulliSpec, SeqWindow};
use crate::algebra::DEFAULT_MAX_DIM;
use crate::error::{LabError, Result};
use crate::group::{all_permutations, FiniteGroup};
use crate::operators::side_algebra;
use crate::rational::Q;
use crate::systems::{PairedSystem, Side};

/// Largest number of windows enumerated by [`pseudogroupoid_check`].
pub const MAX_WINDOWS: usize = 1 << 20;

/// Index sets on which the two symmetric groups act. Negative indices are
/// `-1..=-N`, positive ones `1..=N+r`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SideSets {
    pub left: Vec<isize>,
    pub right: Vec<isize>,
}

impl SideSets {
    pub fn standard(r: usize, n: usize) -> Self {
        Self {
            left: (1..=n as isize).map(|i| -i).collect(),
            right: (1..=(n + r) as isize).collect(),
        }
    }

    fn flat(&self, r: usize, n: usize) -> Result<(Vec<usize>, Vec<usize>)> {
        let conv = |i: isize| -> Result<usize> {
            match i {
                i if i < 0 && (-i) as usize <= n => Ok((-i) as usize - 1),
                i if i > 0 && i as usize <= n + r => Ok(n + i as usize - 1),
                _ => Err(LabError::Structural(format!("index {i} outside the window"))),
            }
        };
        let left = self.left.iter().map(|&i| conv(i)).collect::<Result<Vec<_>>>()?;
        let right = self.right.iter().map(|&i| conv(i)).collect::<Result<Vec<_>>>()?;
        Ok((left, right))
    }
}

/// Window and moves whose two application orders disagree.
#[derive(Debug, Clone, Serialize)]
pub struct CommutationWitness {
    pub window: SeqWindow,
    /// `sigma_left[j]` is the slot receiving the symbol at slot `j` of the left set.
    #[serde(rename = "sigmaLeft")]
    pub sigma_left: Vec<usize>,
    #[serde(rename = "sigmaRight")]
    pub sigma_right: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PseudogroupoidReport {
    pub r: usize,
    pub n: usize,
    pub alphabet: usize,
    pub windows: usize,
    pub homogeneity: bool,
    #[serde(rename = "blocksLeft")]
    pub blocks_left: usize,
    #[serde(rename = "blocksRight")]
    pub blocks_right: usize,
    #[serde(rename = "maxBlock")]
    pub max_block: usize,
    pub commutation: bool,
    pub trials: usize,
    pub witness: Option<CommutationWitness>,
    pub transitivity: bool,
    #[serde(rename = "compositionClasses")]
    pub composition_classes: usize,
    #[serde(rename = "jointOrbits")]
    pub joint_orbits: usize,
    /// The joint orbits of `X_{0,r}` windows are exactly the windows whose
    /// negative symbols form a sub-multiset of the positive ones.
    #[serde(rename = "saturationMatchesContainment")]
    pub saturation_matches_containment: bool,
}

impl PseudogroupoidReport {
    pub fn all_pass(&self) -> bool {
        self.homogeneity && self.commutation && self.transitivity
    }
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn new(n: usize) -> Self {
        Self((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a.max(b)] = a.min(b);
        }
    }
}

struct WindowSpace {
    k: usize,
    len: usize,
    count: usize,
}

impl WindowSpace {
    fn decode(&self, mut code: usize) -> Vec<usize> {
        let mut out = vec![0; self.len];
        for slot in out.iter_mut().rev() {
            *slot = code % self.k;
            code /= self.k;
        }
        out
    }

    fn encode(&self, w: &[usize]) -> usize {
        w.iter().fold(0, |acc, &s| acc * self.k + s)
    }

    /// Unions every window with its images under adjacent transpositions of `sets`.
    fn orbits(&self, sets: &[&[usize]]) -> Dsu {
        let mut dsu = Dsu::new(self.count);
        for code in 0..self.count {
            let mut w = self.decode(code);
            for set in sets {
                for pair in set.windows(2) {
                    if w[pair[0]] != w[pair[1]] {
                        w.swap(pair[0], pair[1]);
                        let other = self.encode(&w);
                        w.swap(pair[0], pair[1]);
                        dsu.union(code, other);
                    }
                }
            }
        }
        dsu
    }
}

fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v
}

/// Sub-multiset test on sorted inputs.
fn contained(small: &[usize], big: &[usize]) -> bool {
    let mut j = 0;
    for &s in small {
        while j < big.len() && big[j] < s {
            j += 1;
        }
        if j == big.len() || big[j] != s {
            return false;
        }
        j += 1;
    }
    true
}

/// Weight of the window cylinder under the invariant extension of the
/// measure on `X_{0,r}`: the product of the positive weights when the
/// negatives can be matched inside the positives, and zero otherwise.
fn window_weight(spec: &BernoulliSpec, n: usize, w: &[usize]) -> Q {
    let (neg, pos) = w.split_at(n);
    if !contained(&sorted(neg.to_vec()), &sorted(pos.to_vec())) {
        return Q::zero();
    }
    pos.iter().map(|&s| spec.weight_of(s)).product()
}

fn apply(w: &[usize], set: &[usize], sigma: &[usize]) -> Vec<usize> {
    let mut out = w.to_vec();
    for (j, &s) in sigma.iter().enumerate() {
        out[set[s]] = w[set[j]];
    }
    out
}

/// Window-scale check of homogeneity, commutation and transitivity of the
/// two symmetric group actions, with the standard index sets.
pub fn pseudogroupoid_check(r: usize, n: usize, spec: &BernoulliSpec, trials: usize, seed: u64) -> Result<PseudogroupoidReport> {
    pseudogroupoid_check_with(r, n, spec, &SideSets::standard(r, n), trials, seed)
}

pub fn pseudogroupoid_check_with(
    r: usize,
    n: usize,
    spec: &BernoulliSpec,
    sets: &SideSets,
    trials: usize,
    seed: u64,
) -> Result<PseudogroupoidReport> {
    if n < r + 2 {
        return Err(LabError::Structural(format!("window radius {n} must be at least r + 2 = {}", r + 2)));
    }
    let (left, right) = sets.flat(r, n)?;
    let k = spec.alphabet_size();
    let len = 2 * n + r;
    let count = (0..len).try_fold(1usize, |acc, _| acc.checked_mul(k).filter(|&c| c <= MAX_WINDOWS));
    let count = count.ok_or(LabError::DimensionCap { dim: usize::MAX, cap: MAX_WINDOWS })?;
    let space = WindowSpace { k, len, count };
    let weights: Vec<Q> = (0..count).map(|c| window_weight(spec, n, &space.decode(c))).collect();

    let mut homogeneity = true;
    let mut max_block = 0;
    let mut block_counts = [0usize; 2];
    for (slot, set) in [&left, &right].into_iter().enumerate() {
        let mut dsu = space.orbits(&[set]);
        let mut blocks: HashMap<usize, (usize, usize)> = HashMap::new();
        for code in 0..count {
            let root = dsu.find(code);
            let entry = blocks.entry(root).or_insert((code, 0));
            entry.1 += 1;
            if weights[entry.0] != weights[code] {
                homogeneity = false;
            }
        }
        block_counts[slot] = blocks.len();
        max_block = max_block.max(blocks.values().map(|b| b.1).max().unwrap_or(0));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut witness = None;
    for _ in 0..trials {
        let w: Vec<usize> = (0..len).map(|_| rng.random_range(0..k)).collect();
        let mut sl: Vec<usize> = (0..left.len()).collect();
        let mut sr: Vec<usize> = (0..right.len()).collect();
        sl.shuffle(&mut rng);
        sr.shuffle(&mut rng);
        let a = apply(&apply(&w, &right, &sr), &left, &sl);
        let b = apply(&apply(&w, &left, &sl), &right, &sr);
        if a != b {
            witness = Some(CommutationWitness {
                window: SeqWindow::from_flat(r, n, &w),
                sigma_left: sl,
                sigma_right: sr,
            });
            break;
        }
    }

    let mut joint = space.orbits(&[&left, &right]);
    let mut class_root: HashMap<(Vec<usize>, Vec<usize>), usize> = HashMap::new();
    let mut transitivity = true;
    let mut roots = std::collections::HashSet::new();
    let mut saturated = vec![false; count];
    for code in 0..count {
        let w = space.decode(code);
        let root = joint.find(code);
        roots.insert(root);
        let key = (sorted(w[..n].to_vec()), sorted(w[n..].to_vec()));
        if *class_root.entry(key).or_insert(root) != root {
            transitivity = false;
        }
        if super::in_x0r(&SeqWindow::from_flat(r, n, &w)) {
            saturated[root] = true;
        }
    }
    let saturation_matches_containment = (0..count).all(|code| {
        let w = space.decode(code);
        let root = joint.find(code);
        saturated[root] == contained(&sorted(w[..n].to_vec()), &sorted(w[n..].to_vec()))
    });
    if roots.len() != class_root.len() {
        transitivity = false;
    }

    Ok(PseudogroupoidReport {
        r,
        n,
        alphabet: k,
        windows: count,
        homogeneity,
        blocks_left: block_counts[0],
        blocks_right: block_counts[1],
        max_block,
        commutation: witness.is_none(),
        trials,
        witness,
        transitivity,
        composition_classes: class_root.len(),
        joint_orbits: roots.len(),
        saturation_matches_containment,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct Cylinder {
    pub label: Vec<usize>,
    #[serde(with = "crate::rational::serde_q")]
    pub weight: Q,
}

/// Decomposition into the cylinders fixed by the first `r` symbols.
#[derive(Debug, Clone, Serialize)]
pub struct ProjectionsReport {
    pub r: usize,
    pub cylinders: Vec<Cylinder>,
    #[serde(rename = "weightSum", with = "crate::rational::serde_q")]
    pub weight_sum: Q,
    /// `sum_a alpha_a^2`
    #[serde(rename = "weightedIdentity", with = "crate::rational::serde_q")]
    pub weighted_identity: Q,
    #[serde(with = "crate::rational::serde_q")]
    pub coupling: Q,
    #[serde(rename = "identityHolds")]
    pub identity_holds: bool,
}

/// Largest cylinder count listed by [`commutant_projections_report`].
pub const MAX_CYLINDERS: usize = 1 << 16;

pub fn commutant_projections_report(r: usize, spec: &BernoulliSpec) -> Result<ProjectionsReport> {
    let k = spec.alphabet_size();
    let count = (0..r).try_fold(1usize, |acc, _| acc.checked_mul(k).filter(|&c| c <= MAX_CYLINDERS));
    let count = count.ok_or(LabError::DimensionCap { dim: usize::MAX, cap: MAX_CYLINDERS })?;
    let space = WindowSpace { k, len: r, count };
    let cylinders: Vec<Cylinder> = (0..count)
        .map(|c| {
            let label = space.decode(c);
            let weight = label.iter().map(|&s| spec.weight_of(s)).product::<Q>();
            Cylinder { label, weight }
        })
        .collect();
    let weight_sum: Q = cylinders.iter().map(|c| &c.weight).sum();
    let weighted_identity: Q = cylinders.iter().map(|c| &c.weight * &c.weight).sum();
    let coupling = coupling_formula(spec, r as u32);
    let full = num::pow(Q::one() - spec.tail_mass(), r);
    Ok(ProjectionsReport {
        r,
        identity_holds: weighted_identity == coupling && weight_sum == full,
        cylinders,
        weight_sum,
        weighted_identity,
        coupling,
    })
}

/// Finite symmetric-group model on the windows of positive weight.
#[derive(Debug, Clone, Serialize)]
pub struct SmokeReport {
    pub n: usize,
    pub r: usize,
    pub points: usize,
    #[serde(rename = "dimLeft")]
    pub dim_left: usize,
    #[serde(rename = "dimRight")]
    pub dim_right: usize,
    /// Max operator norm of commutators between the two generator sets.
    #[serde(rename = "commutatorResidual")]
    pub commutator_residual: f64,
    pub commute: bool,
    #[serde(rename = "mutualCommutants")]
    pub mutual_commutants: bool,
}

/// `S_N` permuting `x_{-1..-N}` (left) and `S_{N+r}` permuting `x_{1..N+r}`
/// (right) on the windows whose negatives fit inside the positives.
pub fn sn_system(n: usize, r: usize, spec: &BernoulliSpec) -> Result<PairedSystem> {
    if spec.alphabet_size() != 2 || n == 0 || n > 4 || n + r > 5 {
        return Err(LabError::Structural(format!(
            "symmetric-group model needs a binary alphabet, 1 <= N <= 4 and N + r <= 5; got k = {}, N = {n}, r = {r}",
            spec.alphabet_size()
        )));
    }
    let len = 2 * n + r;
    let space = WindowSpace { k: 2, len, count: 1 << len };
    let points: Vec<Vec<usize>> = (0..space.count)
        .map(|c| space.decode(c))
        .filter(|w| contained(&sorted(w[..n].to_vec()), &sorted(w[n..].to_vec())))
        .collect();
    if points.len() > DEFAULT_MAX_DIM {
        return Err(LabError::DimensionCap { dim: points.len(), cap: DEFAULT_MAX_DIM });
    }
    let index: HashMap<&Vec<usize>, usize> = points.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let sg = FiniteGroup::symmetric(n);
    let sh = FiniteGroup::symmetric(n + r);
    let perms_g = all_permutations(n);
    let perms_h = all_permutations(n + r);
    let left = (0..sg.order())
        .map(|e| {
            let p = &perms_g[e];
            points
                .iter()
                .map(|w| {
                    let mut out = w.clone();
                    for i in 0..n {
                        out[p[i]] = w[i];
                    }
                    index[&out]
                })
                .collect()
        })
        .collect();
    let right = (0..sh.order())
        .map(|e| {
            let p = &perms_h[e];
            points
                .iter()
                .map(|w| {
                    let mut out = w.clone();
                    for i in 0..n + r {
                        out[n + i] = w[n + p[i]];
                    }
                    index[&out]
                })
                .collect()
        })
        .collect();
    let weights = points
        .iter()
        .map(|w| w[n..].iter().map(|&s| spec.weight_of(s)).product())
        .collect();
    let labels = points
        .iter()
        .map(|w| {
            let s: Vec<String> = w.iter().map(|x| x.to_string()).collect();
            format!("{}|{}", s[..n].join(""), s[n..].join(""))
        })
        .collect();
    PairedSystem::new(labels, weights, sg, sh, left, right)
}

pub fn sn_smoke(n: usize, r: usize, spec: &BernoulliSpec) -> Result<SmokeReport> {
    let sys = sn_system(n, r, spec)?;
    let left = side_algebra(&sys, Side::G)?;
    let right = side_algebra(&sys, Side::H)?;
    let commutator_residual = left
        .generators()
        .iter()
        .flat_map(|a| right.generators().iter().map(move |b| a.commutator(b).op_norm()))
        .fold(0.0, f64::max);
    let commute = commutator_residual <= 1e-10;
    let mutual_commutants = commute && left.commutant()?.same_span(&right);
    Ok(SmokeReport {
        n,
        r,
        points: sys.len(),
        dim_left: left.dimension(),
        dim_right: right.dimension(),
        commutator_residual,
        commute,
        mutual_commutants,
    })
}
