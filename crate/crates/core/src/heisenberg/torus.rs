use num::{One, Signed, Zero};
use serde::Serialize;

use super::coprime;
use crate::algebra::DEFAULT_MAX_DIM;
use crate::error::{LabError, Result};
use crate::group::FiniteGroup;
use crate::operators::{is_irreducible, mvn_coupling_with, side_algebra, Witness};
use crate::rational::{parse_rational, to_f64, ContinuedFraction, Q};
use crate::systems::{check_axioms, dyn_coupling, induced_quotient_action, PairedSystem, ShiftPairSpec, Side};

/// `X = Z_{pq}` with `G = <q>` (order `p`) and `H = <p>` (order `q`).
///
/// `H` rotates the `q` points of `G\X` by `p`, so this is the finite shadow
/// of the shift pair with `lambda2 / lambda1 = p / q`.
pub fn rational_torus_model(p: u64, q: u64) -> Result<PairedSystem> {
    if p == 0 || q == 0 {
        return Err(LabError::Degenerate("torus model needs p, q >= 1".into()));
    }
    if !coprime(p, q) {
        return Err(LabError::Transversality(format!(
            "gcd({p}, {q}) > 1: the subgroups <{q}> and <{p}> of Z_{} intersect",
            p * q
        )));
    }
    let (p, q) = (p as usize, q as usize);
    let n = p * q;
    let labels = (0..n).map(|x| x.to_string()).collect();
    let left = (0..p).map(|i| (0..n).map(|x| (x + q * i) % n).collect()).collect();
    let right = (0..q).map(|j| (0..n).map(|x| (x + p * j) % n).collect()).collect();
    let sys = PairedSystem::new(
        labels,
        vec![Q::one(); n],
        FiniteGroup::cyclic(p),
        FiniteGroup::cyclic(q),
        left,
        right,
    )?;
    let spec = ShiftPairSpec::new(Q::from_integer((q as i64).into()), Q::from_integer((p as i64).into()))?;
    Ok(sys.with_shift_spec(spec))
}

#[derive(Debug, Clone, Serialize)]
pub struct TorusResiduals {
    pub spread: f64,
    #[serde(rename = "commutantDistance")]
    pub commutant_distance: f64,
}

/// Bridge between the dynamical and operator couplings of a torus model.
#[derive(Debug, Clone, Serialize)]
pub struct TorusReport {
    pub p: u64,
    pub q: u64,
    #[serde(rename = "dyn_coupling", with = "crate::rational::serde_q")]
    pub dyn_coupling: Q,
    #[serde(rename = "rotationNumber", with = "crate::rational::serde_q")]
    pub rotation_number: Q,
    /// Coupling of the factor generated by `H`-translations and
    /// `G`-invariant multiplicators, then of its commutant.
    #[serde(rename = "mvn_pair", with = "crate::rational::serde_q_vec")]
    pub mvn_pair: Vec<Q>,
    /// The first factor has a cyclic vector.
    pub cyclic: bool,
    pub separating: bool,
    #[serde(rename = "rankConfirmed")]
    pub rank_confirmed: bool,
    #[serde(rename = "mutualCommutants")]
    pub mutual_commutants: bool,
    pub irreducible: bool,
    pub residuals: TorusResiduals,
}

pub fn torus_bridge(p: u64, q: u64, seed: u64) -> Result<TorusReport> {
    let n = (p * q) as usize;
    if n > DEFAULT_MAX_DIM {
        return Err(LabError::DimensionCap { dim: n, cap: DEFAULT_MAX_DIM });
    }
    let sys = rational_torus_model(p, q)?;
    debug_assert!(check_axioms(&sys).all());
    let dynamic = dyn_coupling(&sys)?;
    let rotation = induced_quotient_action(&sys, Side::G)?
        .rotation_number
        .expect("torus models carry a shift spec");
    let first = side_algebra(&sys, Side::H)?;
    let second = side_algebra(&sys, Side::G)?;
    let first_comm = first.commutant()?;
    let second_comm = second.commutant()?;
    let commutant_distance = first_comm.span_distance(&second);
    let mutual = first_comm.same_span(&second) && second_comm.same_span(&first);
    let irreducible = is_irreducible(&[&first, &second])?.irreducible;
    let c1 = mvn_coupling_with(&first, &first_comm, &Witness::auto(seed))?;
    let c2 = mvn_coupling_with(&second, &second_comm, &Witness::auto(seed))?;
    Ok(TorusReport {
        p,
        q,
        dyn_coupling: dynamic.lambda_gh,
        rotation_number: rotation,
        mvn_pair: vec![c1.lambda_rational.clone(), c2.lambda_rational.clone()],
        cyclic: c1.flags.cyclic_exists,
        separating: c1.flags.separating_exists,
        rank_confirmed: c1.flags.rank_confirmed && c2.flags.rank_confirmed,
        mutual_commutants: mutual,
        irreducible,
        residuals: TorusResiduals { spread: c1.spread.max(c2.spread), commutant_distance },
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergentRow {
    pub k: usize,
    pub p: u64,
    pub q: u64,
    /// `|p/q - gamma|`
    pub error: f64,
    #[serde(with = "opt_q")]
    pub coupling: Option<Q>,
    #[serde(rename = "skipReason")]
    pub skip_reason: Option<String>,
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

/// Torus models along the continued-fraction convergents of `gamma`.
///
/// Convergents with `p = 0` or `p q > max_dim` are listed with a skip reason.
pub fn convergent_sweep(gamma: &str, terms: usize, max_dim: usize, seed: u64) -> Result<Vec<ConvergentRow>> {
    let target = parse_rational(gamma)?;
    if !target.is_positive() {
        return Err(LabError::Degenerate(format!("gamma must be positive, got {gamma}")));
    }
    let cf = ContinuedFraction::of_decimal(gamma, terms)?;
    let mut rows = Vec::new();
    for (k, c) in cf.convergents().into_iter().enumerate() {
        let error = to_f64(&(&c - &target).abs());
        let (p, q): (u64, u64) = match (c.numer().try_into(), c.denom().try_into()) {
            (Ok(p), Ok(q)) => (p, q),
            _ => {
                rows.push(ConvergentRow { k, p: 0, q: 0, error, coupling: None, skip_reason: Some("convergent too large".into()) });
                continue;
            }
        };
        let mut row = ConvergentRow { k, p, q, error, coupling: None, skip_reason: None };
        if c.is_zero() {
            row.skip_reason = Some("zero convergent has no torus model".into());
        } else if (p * q) as usize > max_dim.min(DEFAULT_MAX_DIM) {
            row.skip_reason = Some(format!("p*q = {} exceeds max_dim {max_dim}", p * q));
        } else {
            let report = torus_bridge(p, q, seed)?;
            row.coupling = Some(report.mvn_pair[0].clone());
        }
        rows.push(row);
    }
    Ok(rows)
}

/// `m theta + n > 0`, the positive cone of `K_0` of the irrational rotation algebra.
pub fn k0_positive(m: i64, n: i64, theta: f64) -> bool {
    m as f64 * theta + n as f64 > 0.0
}

/// Exact variant; a rational `theta` gives a non-simple ordering, so a warning is logged.
pub fn k0_positive_exact(m: i64, n: i64, theta: &Q) -> bool {
    log::warn!("k0_positive called with rational theta {theta}; the cone is only meaningful for irrational theta");
    (Q::from_integer(m.into()) * theta + Q::from_integer(n.into())).is_positive()
}
