use std::collections::HashSet;

use num::{One, Zero};
use serde::Serialize;

use super::{PairedSystem, Side};
use crate::error::{LabError, Result};
use crate::rational::Q;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    #[serde(rename = "free_G")]
    pub free_g: bool,
    #[serde(rename = "free_H")]
    pub free_h: bool,
    pub commuting: bool,
    pub transversal: bool,
    /// Joint `G x H` action transitive on the support of the measure.
    pub ergodic: bool,
}

impl AxiomReport {
    pub fn all(&self) -> bool {
        self.free_g && self.free_h && self.commuting && self.transversal && self.ergodic
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitPartition {
    pub side: Side,
    /// Blocks sorted internally and ordered by their smallest point.
    pub blocks: Vec<Vec<usize>>,
    pub point_to_block: Vec<usize>,
}

impl OrbitPartition {
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn block_of(&self, x: usize) -> usize {
        self.point_to_block[x]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FundamentalDomain {
    pub points: Vec<usize>,
    #[serde(rename = "forGroup")]
    pub side: Side,
    #[serde(with = "crate::rational::serde_q")]
    pub measure: Q,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CouplingReport {
    #[serde(rename = "lambdaGH", with = "crate::rational::serde_q")]
    pub lambda_gh: Q,
    #[serde(rename = "lambdaHG", with = "crate::rational::serde_q")]
    pub lambda_hg: Q,
    #[serde(rename = "muFG", with = "crate::rational::serde_q")]
    pub mu_fg: Q,
    #[serde(rename = "muFH", with = "crate::rational::serde_q")]
    pub mu_fh: Q,
    #[serde(rename = "orientationNote")]
    pub orientation_note: String,
}

/// Action of one group on the orbit space of the other.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InducedAction {
    pub acting: Side,
    pub partition: OrbitPartition,
    /// `block_perms[e][b]` is the image of block `b` under element `e`.
    pub block_perms: Vec<Vec<usize>>,
    /// For shift-pair models: `{lambda2/lambda1}` when `H` acts on `G\X`,
    /// `{lambda1/lambda2}` when `G` acts on `X/H`.
    #[serde(with = "opt_q")]
    pub rotation_number: Option<Q>,
}

mod opt_q {
    use super::Q;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(x: &Option<Q>, s: S) -> Result<S::Ok, S::Error> {
        match x {
            Some(v) => s.serialize_some(&v.to_string()),
            None => s.serialize_none(),
        }
    }
}

pub const ORIENTATION_NOTE: &str = "lambdaGH = muFH/muFG; on finite models the Murray-von Neumann \
constant of the algebra generated by H-translations and G-invariant multiplicators equals \
lambdaGH, and that of the algebra generated by G-translations and H-invariant multiplicators \
equals lambdaHG";

pub fn check_axioms(sys: &PairedSystem) -> AxiomReport {
    let n = sys.len();
    let free = |side: Side| {
        let group = sys.group(side);
        (0..group.order())
            .filter(|&e| e != group.identity())
            .all(|e| (0..n).all(|x| sys.act(side, e, x) != x))
    };
    let commuting = (0..sys.group(Side::G).order()).all(|g| {
        (0..sys.group(Side::H).order()).all(|h| {
            (0..n).all(|x| {
                sys.act(Side::G, g, sys.act(Side::H, h, x)) == sys.act(Side::H, h, sys.act(Side::G, g, x))
            })
        })
    });
    let og = orbits(sys, Side::G);
    let oh = orbits(sys, Side::H);
    let mut cells = HashSet::with_capacity(n);
    let transversal = (0..n).all(|x| cells.insert((og.block_of(x), oh.block_of(x))));
    AxiomReport {
        free_g: free(Side::G),
        free_h: free(Side::H),
        commuting,
        transversal,
        ergodic: joint_components(sys) == 1,
    }
}

fn joint_components(sys: &PairedSystem) -> usize {
    // all weights are positive, so the support is every point
    let n = sys.len();
    let mut seen = vec![false; n];
    let mut components = 0;
    for start in 0..n {
        if seen[start] {
            continue;
        }
        components += 1;
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            for side in [Side::G, Side::H] {
                for row in sys.action_table(side) {
                    let y = row[x];
                    if !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
    }
    components
}

pub fn orbits(sys: &PairedSystem, side: Side) -> OrbitPartition {
    let n = sys.len();
    let mut point_to_block = vec![usize::MAX; n];
    let mut blocks = Vec::new();
    for start in 0..n {
        if point_to_block[start] != usize::MAX {
            continue;
        }
        let id = blocks.len();
        let mut block: Vec<usize> = sys
            .action_table(side)
            .iter()
            .map(|row| row[start])
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect();
        block.sort_unstable();
        for &x in &block {
            point_to_block[x] = id;
        }
        blocks.push(block);
    }
    OrbitPartition { side, blocks, point_to_block }
}

/// One representative per orbit (the least point id) and its measure.
pub fn fundamental_domain(sys: &PairedSystem, side: Side) -> FundamentalDomain {
    let partition = orbits(sys, side);
    let points: Vec<usize> = partition.blocks.iter().map(|b| b[0]).collect();
    let measure = points.iter().fold(Q::zero(), |acc, &x| acc + &sys.weights()[x]);
    FundamentalDomain { points, side, measure }
}

pub fn dyn_coupling(sys: &PairedSystem) -> Result<CouplingReport> {
    let fg = fundamental_domain(sys, Side::G);
    let fh = fundamental_domain(sys, Side::H);
    if fg.measure.is_zero() || fh.measure.is_zero() {
        return Err(LabError::Degenerate("fundamental domain of measure zero".into()));
    }
    let lambda_gh = &fh.measure / &fg.measure;
    let lambda_hg = &fg.measure / &fh.measure;
    debug_assert!((&lambda_gh * &lambda_hg).is_one());
    Ok(CouplingReport {
        lambda_gh,
        lambda_hg,
        mu_fg: fg.measure,
        mu_fh: fh.measure,
        orientation_note: ORIENTATION_NOTE.to_string(),
    })
}

/// Action of the group opposite to `side` on the orbit space of `side`.
pub fn induced_quotient_action(sys: &PairedSystem, side: Side) -> Result<InducedAction> {
    if !check_axioms(sys).commuting {
        return Err(LabError::ContractViolation(
            "induced quotient action requires commuting actions".into(),
        ));
    }
    let partition = orbits(sys, side);
    let acting = side.other();
    let mut block_perms = Vec::with_capacity(sys.group(acting).order());
    for row in sys.action_table(acting) {
        let mut perm = Vec::with_capacity(partition.len());
        for block in &partition.blocks {
            let image = partition.block_of(row[block[0]]);
            if block.iter().any(|&x| partition.block_of(row[x]) != image) {
                return Err(LabError::ContractViolation(
                    "quotient action is not well defined".into(),
                ));
            }
            perm.push(image);
        }
        block_perms.push(perm);
    }
    let rotation_number = sys.shift_spec().map(|s| match acting {
        Side::H => s.h_on_g_orbits(),
        Side::G => s.g_on_h_orbits(),
    });
    Ok(InducedAction { acting, partition, block_perms, rotation_number })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;
    use crate::rational::{q, qi};
    use crate::systems::{product_model, translation_pair};

    #[test]
    fn product_model_axioms_and_domains() {
        let sys = product_model(2, 3).unwrap();
        assert!(check_axioms(&sys).all());
        let og = orbits(&sys, Side::G);
        assert_eq!(og.blocks, vec![vec![0, 3], vec![1, 4], vec![2, 5]]);
        let fg = fundamental_domain(&sys, Side::G);
        assert_eq!(fg.points, vec![0, 1, 2]);
        assert_eq!(fg.measure, qi(3));
        assert_eq!(fundamental_domain(&sys, Side::H).measure, qi(2));
        let c = dyn_coupling(&sys).unwrap();
        assert_eq!(c.lambda_gh, q(2, 3));
        assert_eq!(c.lambda_hg, q(3, 2));
    }

    #[test]
    fn trivially_acting_group_is_not_free() {
        let z2 = FiniteGroup::cyclic(2);
        let labels = vec!["a".to_string(), "b".to_string()];
        let sys = PairedSystem::new(
            labels,
            vec![qi(1), qi(1)],
            z2.clone(),
            z2,
            vec![vec![0, 1], vec![0, 1]],
            vec![vec![0, 1], vec![0, 1]],
        );
        let sys = sys.unwrap();
        let r = check_axioms(&sys);
        assert!(!r.free_g && !r.free_h && !r.ergodic);
    }

    #[test]
    fn translation_pairs() {
        let s3 = FiniteGroup::symmetric(3);
        let e = s3.identity();
        let t = s3.find_label("(1 2)").unwrap();
        let c = s3.find_label("(1 2 3)").unwrap();
        let c2 = s3.mul(c, c);
        let pair = translation_pair(&s3, &[e, t], &[e, c, c2]).unwrap();
        assert!(pair.trivial_intersection);
        assert!(check_axioms(&pair.system).all());
        assert_eq!(dyn_coupling(&pair.system).unwrap().lambda_gh, q(2, 3));

        let z6 = FiniteGroup::cyclic(6);
        let pair = translation_pair(&z6, &[0, 2, 4], &[0, 3]).unwrap();
        assert!(check_axioms(&pair.system).all());
        assert_eq!(dyn_coupling(&pair.system).unwrap().lambda_gh, q(3, 2));

        let z4 = FiniteGroup::cyclic(4);
        let pair = translation_pair(&z4, &[0, 2], &[0, 2]).unwrap();
        assert!(!pair.trivial_intersection);
        assert!(!check_axioms(&pair.system).transversal);
    }

    #[test]
    fn induced_action_on_g_orbits_is_a_cycle() {
        let sys = product_model(2, 3).unwrap();
        let ind = induced_quotient_action(&sys, Side::G).unwrap();
        assert_eq!(ind.acting, Side::H);
        assert_eq!(ind.block_perms, vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]]);
        assert_eq!(ind.rotation_number, None);
    }

    #[test]
    fn coupling_is_invariant_under_scaling_and_relabeling() {
        let sys = product_model(3, 4).unwrap();
        let base = dyn_coupling(&sys).unwrap().lambda_gh;
        assert_eq!(dyn_coupling(&sys.scaled(&q(7, 3)).unwrap()).unwrap().lambda_gh, base);
        assert_eq!(dyn_coupling(&sys.reversed()).unwrap().lambda_gh, base);
        assert!(check_axioms(&sys.reversed()).all());
    }
}
