//! Formal crossed-product elements `sum_g phi_g U_g` over the orbit space of
//! the opposite group, their canonical trace, and the regular model.
//!
//! For `Side::G` the coefficients are functions on `X/H` (constant on
//! `H`-orbits) and `G` acts on them through the induced quotient action;
//! `Side::H` is symmetric. Products follow the covariance relation
//! `U_k M_psi U_k^* = M_{psi o k^-1}`.

use std::collections::BTreeMap;

use nalgebra::DVector;
use num::{ToPrimitive, Zero};
use rand::Rng;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{LabError, Result};
use crate::group::FiniteGroup;
use crate::matrix::{ComplexMatrix, C64};
use crate::operators::{multiplicator, rep_unitary};
use crate::rational::Q;
use crate::systems::{check_axioms, dyn_coupling, induced_quotient_action, CouplingReport, PairedSystem, Side};

const ZERO_TOL: f64 = 1e-14;

/// Group and quotient data shared by all elements of one crossed product.
#[derive(Debug, Clone)]
pub struct CrossedProduct {
    side: Side,
    group: FiniteGroup,
    /// `block_perms[k][b]`: image of quotient block `b` under group element `k`.
    block_perms: Vec<Vec<usize>>,
    block_measure: Vec<Q>,
    points: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrossedElement {
    side: Side,
    group_order: usize,
    blocks: usize,
    terms: BTreeMap<usize, Vec<C64>>,
}

impl CrossedElement {
    pub fn side(&self) -> Side {
        self.side
    }

    pub fn terms(&self) -> &BTreeMap<usize, Vec<C64>> {
        &self.terms
    }

    pub fn coefficient(&self, k: usize) -> Option<&[C64]> {
        self.terms.get(&k).map(Vec::as_slice)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest coefficient difference over all group elements.
    pub fn distance(&self, other: &CrossedElement) -> f64 {
        let keys: std::collections::BTreeSet<usize> =
            self.terms.keys().chain(other.terms.keys()).copied().collect();
        let zero = vec![C64::default(); self.blocks];
        keys.iter()
            .map(|k| {
                let a = self.terms.get(k).unwrap_or(&zero);
                let b = other.terms.get(k).unwrap_or(&zero);
                a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    }
}

#[derive(Serialize)]
struct TermJson {
    group_element: usize,
    coefficients_by_block: Vec<[f64; 2]>,
}

impl Serialize for CrossedElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (k, phi) in &self.terms {
            seq.serialize_element(&TermJson {
                group_element: *k,
                coefficients_by_block: phi.iter().map(|z| [z.re, z.im]).collect(),
            })?;
        }
        seq.end()
    }
}

impl CrossedProduct {
    /// Crossed product of the group on `side` with functions on the orbit
    /// space of the other group.
    pub fn new(sys: &PairedSystem, side: Side) -> Result<Self> {
        let induced = induced_quotient_action(sys, side.other())?;
        let block_measure = induced
            .partition
            .blocks
            .iter()
            .map(|b| b.iter().fold(Q::zero(), |acc, &x| acc + &sys.weights()[x]))
            .collect();
        Ok(Self {
            side,
            group: sys.group(side).clone(),
            block_perms: induced.block_perms,
            block_measure,
            points: sys.len(),
        })
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn blocks(&self) -> usize {
        self.block_measure.len()
    }

    pub fn block_measure(&self) -> &[Q] {
        &self.block_measure
    }

    pub fn element(&self, terms: impl IntoIterator<Item = (usize, Vec<C64>)>) -> Result<CrossedElement> {
        let mut out = self.zero();
        for (k, phi) in terms {
            self.group.check_element(k)?;
            if phi.len() != self.blocks() {
                return Err(LabError::DimensionMismatch { expected: self.blocks(), found: phi.len() });
            }
            let slot = out.terms.entry(k).or_insert_with(|| vec![C64::default(); self.blocks()]);
            for (s, z) in slot.iter_mut().zip(phi) {
                *s += z;
            }
        }
        out.prune();
        Ok(out)
    }

    pub fn zero(&self) -> CrossedElement {
        CrossedElement {
            side: self.side,
            group_order: self.group.order(),
            blocks: self.blocks(),
            terms: BTreeMap::new(),
        }
    }

    /// `phi U_k`.
    pub fn monomial(&self, k: usize, phi: Vec<C64>) -> Result<CrossedElement> {
        self.element([(k, phi)])
    }

    /// `1 U_e`.
    pub fn unit(&self) -> CrossedElement {
        self.monomial(self.group.identity(), vec![C64::new(1.0, 0.0); self.blocks()])
            .expect("identity monomial is well formed")
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R, max_terms: usize) -> CrossedElement {
        let count = rng.random_range(1..=max_terms.max(1));
        let terms: Vec<(usize, Vec<C64>)> = (0..count)
            .map(|_| {
                let k = rng.random_range(0..self.group.order());
                let phi = (0..self.blocks())
                    .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                    .collect();
                (k, phi)
            })
            .collect();
        self.element(terms).expect("random element is well formed")
    }

    fn check_tag(&self, a: &CrossedElement) -> Result<()> {
        if a.side != self.side || a.group_order != self.group.order() || a.blocks != self.blocks() {
            return Err(LabError::ContractViolation(format!(
                "crossed element tagged ({}, |group| {}, {} blocks) used in crossed product ({}, |group| {}, {} blocks)",
                a.side,
                a.group_order,
                a.blocks,
                self.side,
                self.group.order(),
                self.blocks()
            )));
        }
        Ok(())
    }

    /// Coefficient of `U_k M_psi U_k^*`, i.e. `psi o k^-1` on the quotient.
    fn transport(&self, k: usize, psi: &[C64]) -> Vec<C64> {
        match self.side {
            // (psi o g^-1)(b) = psi(g^-1 . b)
            Side::G => {
                let perm = &self.block_perms[self.group.inv(k)];
                (0..psi.len()).map(|b| psi[perm[b]]).collect()
            }
            // V_h M_psi V_h^* multiplies by x -> psi(x h)
            Side::H => {
                let perm = &self.block_perms[k];
                (0..psi.len()).map(|b| psi[perm[b]]).collect()
            }
        }
    }

    pub fn multiply(&self, a: &CrossedElement, b: &CrossedElement) -> Result<CrossedElement> {
        self.check_tag(a)?;
        self.check_tag(b)?;
        let mut out = self.zero();
        for (&g, phi) in &a.terms {
            for (&h, psi) in &b.terms {
                let moved = self.transport(g, psi);
                let k = self.group.mul(g, h);
                let slot = out.terms.entry(k).or_insert_with(|| vec![C64::default(); self.blocks()]);
                for ((s, p), m) in slot.iter_mut().zip(phi).zip(&moved) {
                    *s += p * m;
                }
            }
        }
        out.prune();
        Ok(out)
    }

    /// `(phi U_g)* = (conj(phi) o g) U_{g^-1}`.
    pub fn adjoint(&self, a: &CrossedElement) -> Result<CrossedElement> {
        self.check_tag(a)?;
        let terms = a.terms.iter().map(|(&g, phi)| {
            let gi = self.group.inv(g);
            let conj: Vec<C64> = phi.iter().map(|z| z.conj()).collect();
            (gi, self.transport(gi, &conj))
        });
        self.element(terms)
    }

    /// `integral of phi_e` against the quotient measure, normalized to total
    /// mass one when `normalized` is set.
    pub fn trace(&self, a: &CrossedElement, normalized: bool) -> Result<C64> {
        self.check_tag(a)?;
        let Some(phi) = a.terms.get(&self.group.identity()) else {
            return Ok(C64::default());
        };
        let total: Q = self.block_measure.iter().sum();
        let mut acc = C64::default();
        for (z, m) in phi.iter().zip(&self.block_measure) {
            let w = if normalized { m / &total } else { m.clone() };
            acc += z * w.to_f64().expect("finite rational");
        }
        Ok(acc)
    }

    /// `sum_k M_{phi_k} U_k` on `l^2(X)`.
    pub fn represent(&self, a: &CrossedElement, sys: &PairedSystem) -> Result<ComplexMatrix> {
        self.check_tag(a)?;
        if sys.len() != self.points || sys.group(self.side).order() != self.group.order() {
            return Err(LabError::ContractViolation(
                "crossed product and system disagree on group or space".into(),
            ));
        }
        let mut out = ComplexMatrix::zeros(sys.len());
        for (&k, phi) in &a.terms {
            let m = multiplicator(sys, phi, self.side.other())?;
            out = out.add(&m.mul(&rep_unitary(sys, self.side, k)?));
        }
        Ok(out)
    }
}

impl CrossedElement {
    fn prune(&mut self) {
        self.terms.retain(|_, phi| phi.iter().any(|z| z.norm() > ZERO_TOL));
    }
}

pub fn cp_multiply(cp: &CrossedProduct, a: &CrossedElement, b: &CrossedElement) -> Result<CrossedElement> {
    cp.multiply(a, b)
}

pub fn cp_trace(cp: &CrossedProduct, a: &CrossedElement) -> Result<C64> {
    cp.trace(a, true)
}

pub fn cp_represent(cp: &CrossedProduct, a: &CrossedElement, sys: &PairedSystem) -> Result<ComplexMatrix> {
    cp.represent(a, sys)
}

/// `X = X0 x G0` with `G0` acting on the left factor of the group
/// coordinate and on the right of both coordinates.
#[derive(Debug, Clone)]
pub struct RegularModel {
    pub base_size: usize,
    pub group: FiniteGroup,
    /// `base_action[g][x] = x g`
    pub base_action: Vec<Vec<usize>>,
    pub system: PairedSystem,
}

impl RegularModel {
    /// Point id of `(x, q)`.
    pub fn point(&self, x: usize, q: usize) -> usize {
        x * self.group.order() + q
    }

    /// `X0 x {e}`, a fundamental domain for both actions.
    pub fn common_domain(&self) -> Vec<usize> {
        (0..self.base_size).map(|x| self.point(x, self.group.identity())).collect()
    }

    /// `chi_{X0 x {e}}` in the orthonormal basis `e_x = delta_x / sqrt(mu(x))`.
    pub fn domain_indicator(&self) -> DVector<C64> {
        let mut v = DVector::zeros(self.system.len());
        for p in self.common_domain() {
            let w = self.system.weights()[p].to_f64().expect("finite weight");
            v[p] = C64::new(w.sqrt(), 0.0);
        }
        v
    }

    /// Induced actions on the common fundamental domain, read off by orbit chase.
    pub fn induced_actions(&self) -> RegularInducedReport {
        let n0 = self.base_size;
        let order = self.group.order();
        let e = self.group.identity();
        // right action on X/G: the G-orbit of (x, q) is {x} x G0
        let right: Vec<Vec<usize>> = (0..order)
            .map(|h| (0..n0).map(|x| self.system.act(Side::H, h, self.point(x, e)) / order).collect())
            .collect();
        // left action on X/H: move (x, e), then slide back to q = e along its H-orbit
        let left: Vec<Vec<usize>> = (0..order)
            .map(|g| {
                (0..n0)
                    .map(|x| {
                        let p = self.system.act(Side::G, g, self.point(x, e));
                        let q = p % order;
                        let back = self.system.act(Side::H, self.group.inv(q), p);
                        debug_assert_eq!(back % order, e);
                        back / order
                    })
                    .collect()
            })
            .collect();
        let right_is_base = right == self.base_action;
        let left_is_inverse = (0..order).all(|g| left[g] == self.base_action[self.group.inv(g)]);
        let same_orbits = orbit_labels(&left) == orbit_labels(&right);
        RegularInducedReport { right_is_base, left_is_inverse, same_orbits }
    }

    pub fn coupling(&self) -> Result<CouplingReport> {
        dyn_coupling(&self.system)
    }
}

fn orbit_labels(action: &[Vec<usize>]) -> Vec<usize> {
    let n = action.first().map_or(0, Vec::len);
    (0..n).map(|x| action.iter().map(|row| row[x]).min().unwrap_or(x)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RegularInducedReport {
    #[serde(rename = "rightIsBase")]
    pub right_is_base: bool,
    #[serde(rename = "leftIsInverse")]
    pub left_is_inverse: bool,
    #[serde(rename = "sameOrbits")]
    pub same_orbits: bool,
}

/// Builds the regular model from a free right action of `g0` on `X0`.
///
/// `base_action[g][x] = x g` must be a right action preserving `weights`.
pub fn regular_model(weights: Vec<Q>, g0: FiniteGroup, base_action: Vec<Vec<usize>>) -> Result<RegularModel> {
    let n0 = weights.len();
    let order = g0.order();
    if base_action.len() != order || base_action.iter().any(|r| r.len() != n0) {
        return Err(LabError::Structural("base action table has the wrong shape".into()));
    }
    for g in (0..order).filter(|&g| g != g0.identity()) {
        if let Some(x) = (0..n0).find(|&x| base_action[g][x] == x) {
            return Err(LabError::ContractViolation(format!(
                "base action is not free: element {} fixes point {x}",
                g0.label(g)
            )));
        }
    }
    let id = |x: usize, q: usize| x * order + q;
    let size = n0 * order;
    let mut labels = Vec::with_capacity(size);
    let mut point_weights = Vec::with_capacity(size);
    for (x, w) in weights.iter().enumerate() {
        for q in 0..order {
            labels.push(format!("({x},{})", g0.label(q)));
            point_weights.push(w.clone());
        }
    }
    let left = (0..order)
        .map(|g| (0..size).map(|p| id(p / order, g0.mul(g, p % order))).collect())
        .collect();
    let right = (0..order)
        .map(|h| (0..size).map(|p| id(base_action[h][p / order], g0.mul(p % order, h))).collect())
        .collect();
    let system = PairedSystem::new(labels, point_weights, g0.clone(), g0.clone(), left, right)?;
    debug_assert!(check_axioms(&system).commuting);
    Ok(RegularModel { base_size: n0, group: g0, base_action, system })
}

/// `X0 = Z_n` with `Z_n` acting by rotation and uniform weights.
pub fn cyclic_regular_model(n: usize) -> Result<RegularModel> {
    let g0 = FiniteGroup::cyclic(n);
    let action = (0..n).map(|g| (0..n).map(|x| (x + g) % n).collect()).collect();
    let w = Q::new(1.into(), (n as i64).into());
    regular_model(vec![w; n], g0, action)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};
    use crate::systems::product_model;
    use num::One;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn unit_is_neutral() {
        let sys = product_model(2, 3).unwrap();
        let cp = CrossedProduct::new(&sys, Side::G).unwrap();
        assert_eq!(cp.blocks(), 2);
        let a = cp.monomial(1, vec![c(2.0), c(-1.0)]).unwrap();
        assert_eq!(cp.multiply(&cp.unit(), &a).unwrap(), a);
        assert_eq!(cp.multiply(&a, &cp.unit()).unwrap(), a);
    }

    #[test]
    fn inverse_monomial_gives_unit_coefficient() {
        let sys = product_model(3, 2).unwrap();
        let cp = CrossedProduct::new(&sys, Side::G).unwrap();
        let phi = vec![c(2.0), C64::new(0.5, 1.0), c(-3.0)];
        let g = 1;
        let gi = cp.group().inv(g);
        let inv: Vec<C64> = phi.iter().map(|z| 1.0 / z).collect();
        let b = cp.monomial(gi, cp.transport(gi, &inv)).unwrap();
        let prod = cp.multiply(&cp.monomial(g, phi).unwrap(), &b).unwrap();
        let e = prod.coefficient(cp.group().identity()).unwrap();
        assert!(e.iter().all(|z| (z - c(1.0)).norm() < 1e-14));
    }

    #[test]
    fn disjoint_supports_multiply_to_zero() {
        // H-side: H = Z_3 acting on the 3 G-orbits of Z_2 x Z_3
        let sys = product_model(2, 3).unwrap();
        let cp = CrossedProduct::new(&sys, Side::H).unwrap();
        let a = cp.monomial(1, vec![c(1.0), c(0.0), c(0.0)]).unwrap();
        // U_1 chi_0 U_1^* is the indicator of block 2, disjoint from block 0
        let b = cp.monomial(2, vec![c(1.0), c(0.0), c(0.0)]).unwrap();
        assert!(cp.multiply(&a, &b).unwrap().is_zero());
    }

    #[test]
    fn trace_picks_identity_term() {
        let sys = product_model(2, 5).unwrap();
        let cp = CrossedProduct::new(&sys, Side::H).unwrap();
        assert_eq!(cp.blocks(), 5);
        assert_eq!(cp.trace(&cp.unit(), true).unwrap(), c(1.0));
        let off = cp.monomial(3, vec![c(1.0); 5]).unwrap();
        assert_eq!(cp.trace(&off, true).unwrap(), c(0.0));
        let chi = cp.monomial(0, vec![c(1.0), c(1.0), c(0.0), c(0.0), c(0.0)]).unwrap();
        assert!((cp.trace(&chi, true).unwrap() - c(0.4)).norm() < 1e-15);
        assert!((cp.trace(&chi, false).unwrap() - c(4.0)).norm() < 1e-15);
    }

    #[test]
    fn representation_is_a_star_homomorphism() {
        let sys = product_model(2, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for side in [Side::G, Side::H] {
            let cp = CrossedProduct::new(&sys, side).unwrap();
            for _ in 0..20 {
                let a = cp.random_element(&mut rng, 3);
                let b = cp.random_element(&mut rng, 3);
                let ra = cp.represent(&a, &sys).unwrap();
                let rb = cp.represent(&b, &sys).unwrap();
                let rab = cp.represent(&cp.multiply(&a, &b).unwrap(), &sys).unwrap();
                assert!(rab.sub(&ra.mul(&rb)).max_abs() < 1e-10);
                let rstar = cp.represent(&cp.adjoint(&a).unwrap(), &sys).unwrap();
                assert!(rstar.sub(&ra.adjoint()).max_abs() < 1e-10);
                let tr = ra.trace() / c(6.0);
                assert!((tr - cp.trace(&a, true).unwrap()).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn tag_mismatch_is_rejected() {
        let sys = product_model(2, 3).unwrap();
        let g = CrossedProduct::new(&sys, Side::G).unwrap();
        let h = CrossedProduct::new(&sys, Side::H).unwrap();
        assert!(g.multiply(&g.unit(), &h.unit()).is_err());
        assert!(g.trace(&h.unit(), true).is_err());
        assert!(g.monomial(0, vec![c(1.0); 3]).is_err());
    }

    #[test]
    fn regular_model_has_unit_coupling() {
        let model = cyclic_regular_model(5).unwrap();
        assert!(check_axioms(&model.system).all());
        let report = model.coupling().unwrap();
        assert_eq!(report.lambda_gh, qi(1));
        let induced = model.induced_actions();
        assert!(induced.right_is_base && induced.left_is_inverse && induced.same_orbits);
        let domain = model.common_domain();
        assert_eq!(domain, vec![0, 5, 10, 15, 20]);
    }

    #[test]
    fn one_point_model_is_degenerate_but_valid() {
        let model = regular_model(vec![Q::one()], FiniteGroup::trivial(), vec![vec![0]]).unwrap();
        assert_eq!(model.system.len(), 1);
        assert_eq!(model.coupling().unwrap().lambda_gh, qi(1));
    }

    #[test]
    fn non_free_base_action_is_rejected() {
        let z2 = FiniteGroup::cyclic(2);
        // element 1 fixes point 2
        let action = vec![vec![0, 1, 2], vec![1, 0, 2]];
        let err = regular_model(vec![q(1, 3); 3], z2, action).unwrap_err();
        assert!(matches!(err, LabError::ContractViolation(_)));
    }
}
