//! Unital matrix algebras on `C^N`: closure of a generating set, commutants,
//! centers and span comparisons.
//!
//! A [`MatrixAlgebra`] stores its span as orthonormal columns of an
//! `N^2 x d` matrix (column-major vectorization, Euclidean inner product).
//! Public accessors rescale to the normalized Hilbert-Schmidt inner product
//! `<A, B> = Tr(A* B) / N`, under which the identity has unit norm.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{LabError, Result};
use crate::matrix::{ComplexMatrix, C64};

/// Hard cap on the ambient dimension for closure and commutant.
pub const DEFAULT_MAX_DIM: usize = 200;
/// A product adds a new basis element when its residual exceeds this (HS units).
pub const CLOSURE_TOL: f64 = 1e-9;
/// Span equality and product-closure tolerance.
pub const SPAN_TOL: f64 = 1e-8;

const GENERIC_SEED: u64 = 0x5eed_a16e_b7a5_0001;
const CLUSTER_RTOL: f64 = 1e-7;
const NULL_RTOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct MatrixAlgebra {
    n: usize,
    basis: Vec<DVector<C64>>,
    generators: Vec<ComplexMatrix>,
    log: Vec<String>,
}

fn vec_of(m: &DMatrix<C64>) -> DVector<C64> {
    DVector::from_column_slice(m.as_slice())
}

fn mat_of(v: &DVector<C64>, n: usize) -> DMatrix<C64> {
    DMatrix::from_column_slice(n, n, v.as_slice())
}

fn check_cap(n: usize) -> Result<()> {
    if n > DEFAULT_MAX_DIM {
        return Err(LabError::DimensionCap { dim: n, cap: DEFAULT_MAX_DIM });
    }
    Ok(())
}

/// Gram-Schmidt step with one reorthogonalization pass; returns the residual.
fn residual_against(basis: &[DVector<C64>], v: &DVector<C64>) -> DVector<C64> {
    let mut r = v.clone();
    for _ in 0..2 {
        for q in basis {
            let c = q.dotc(&r);
            r.axpy(-c, q, C64::new(1.0, 0.0));
        }
    }
    r
}

impl MatrixAlgebra {
    /// Smallest unital algebra containing `generators`.
    pub fn closure(generators: &[ComplexMatrix]) -> Result<Self> {
        let n = match generators.first() {
            Some(g) => g.dim(),
            None => return Err(LabError::Structural("closure needs at least one generator".into())),
        };
        Self::closure_in(n, generators)
    }

    /// Closure in ambient dimension `n`; an empty generator list gives the scalars.
    pub fn closure_in(n: usize, generators: &[ComplexMatrix]) -> Result<Self> {
        if n == 0 {
            return Err(LabError::Structural("ambient dimension must be positive".into()));
        }
        if let Some(g) = generators.iter().find(|g| g.dim() != n) {
            return Err(LabError::DimensionMismatch { expected: n, found: g.dim() });
        }
        check_cap(n)?;
        let sqrt_n = (n as f64).sqrt();
        // generators rescaled to unit HS norm; zero generators contribute nothing
        let gens: Vec<DMatrix<C64>> = generators
            .iter()
            .filter_map(|g| {
                let hs = g.frobenius() / sqrt_n;
                (hs > 0.0).then(|| g.inner() / C64::new(hs, 0.0))
            })
            .collect();
        let mut basis = vec![vec_of(&DMatrix::identity(n, n)) / C64::new(sqrt_n, 0.0)];
        let mut cursor = 0;
        while cursor < basis.len() {
            let e = mat_of(&basis[cursor], n) * C64::new(sqrt_n, 0.0);
            cursor += 1;
            for g in &gens {
                let candidate = vec_of(&(g * &e));
                let r = residual_against(&basis, &candidate);
                let norm = r.norm();
                if norm / sqrt_n > CLOSURE_TOL {
                    if basis.len() == n * n {
                        return Err(LabError::Structural(
                            "closure exceeded N^2 basis elements".into(),
                        ));
                    }
                    basis.push(r / C64::new(norm, 0.0));
                }
            }
        }
        let log = vec![format!("closure of {} generators in dimension {n}", generators.len())];
        Ok(Self { n, basis, generators: generators.to_vec(), log })
    }

    pub fn scalars(n: usize) -> Self {
        let sqrt_n = (n as f64).sqrt();
        Self {
            n,
            basis: vec![vec_of(&DMatrix::identity(n, n)) / C64::new(sqrt_n, 0.0)],
            generators: vec![],
            log: vec![format!("scalars on C^{n}")],
        }
    }

    /// All of `M_N`, spanned by matrix units.
    pub fn full(n: usize) -> Self {
        let basis = (0..n * n)
            .map(|k| {
                let mut v = DVector::zeros(n * n);
                v[k] = C64::new(1.0, 0.0);
                v
            })
            .collect();
        Self { n, basis, generators: vec![], log: vec![format!("full matrix algebra M_{n}")] }
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    /// Linear dimension of the algebra.
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn generators(&self) -> &[ComplexMatrix] {
        &self.generators
    }

    pub fn generator_log(&self) -> &[String] {
        &self.log
    }

    pub fn push_log(&mut self, entry: impl Into<String>) {
        self.log.push(entry.into());
    }

    /// Basis element `i`, orthonormal under `Tr(A* B) / N`.
    pub fn basis_element(&self, i: usize) -> ComplexMatrix {
        let m = mat_of(&self.basis[i], self.n) * C64::new((self.n as f64).sqrt(), 0.0);
        ComplexMatrix::new(m).expect("square")
    }

    pub fn basis(&self) -> Vec<ComplexMatrix> {
        (0..self.dimension()).map(|i| self.basis_element(i)).collect()
    }

    /// Largest deviation of the HS Gram matrix from the identity.
    pub fn orthonormality_residual(&self) -> f64 {
        let d = self.dimension();
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in i..d {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((self.basis[i].dotc(&self.basis[j]) - C64::new(target, 0.0)).norm());
            }
        }
        worst
    }

    /// Distance (HS norm) from `m` to the span, relative to `max(1, ||m||_HS)`.
    pub fn membership_residual(&self, m: &ComplexMatrix) -> f64 {
        let v = vec_of(m.inner());
        let r = residual_against(&self.basis, &v);
        let scale = (v.norm() / (self.n as f64).sqrt()).max(1.0);
        r.norm() / (self.n as f64).sqrt() / scale
    }

    pub fn contains(&self, m: &ComplexMatrix) -> bool {
        self.membership_residual(m) <= SPAN_TOL
    }

    /// Largest residual of a product projected back onto the span.
    ///
    /// All basis pairs are tested when `d <= 24`. Larger algebras are tested
    /// on products of random combinations: the residual is bilinear, so it
    /// vanishes identically iff it vanishes at a generic pair.
    pub fn closure_residual(&self) -> f64 {
        let d = self.dimension();
        let mut worst: f64 = 0.0;
        if d <= 24 {
            let elems = self.basis();
            for a in &elems {
                for b in &elems {
                    worst = worst.max(self.membership_residual(&a.mul(b)));
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(GENERIC_SEED ^ 0xc105);
            for _ in 0..4 {
                let a = self.random_element(&mut rng);
                let b = self.random_element(&mut rng);
                worst = worst.max(self.membership_residual(&a.mul(&b)));
            }
        }
        worst
    }

    /// Random element with independent real Gaussian-like coordinates in `[-1, 1]`.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> ComplexMatrix {
        let mut v = DVector::zeros(self.n * self.n);
        for b in &self.basis {
            let c = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            v.axpy(c, b, C64::new(1.0, 0.0));
        }
        ComplexMatrix::new(mat_of(&v, self.n) * C64::new((self.n as f64).sqrt(), 0.0)).expect("square")
    }

    /// Whether the span is closed under adjoints, tested on basis elements
    /// for `d <= 24` and on generic combinations otherwise.
    pub fn is_star_closed(&self) -> bool {
        let d = self.dimension();
        let worst = if d <= 24 {
            (0..d)
                .map(|i| self.membership_residual(&self.basis_element(i).adjoint()))
                .fold(0.0, f64::max)
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(GENERIC_SEED ^ 0x57a2);
            (0..2)
                .map(|_| self.membership_residual(&self.random_element(&mut rng).adjoint()))
                .fold(0.0, f64::max)
        };
        worst <= SPAN_TOL
    }

    /// Whether the two algebras have the same span to `SPAN_TOL`.
    pub fn same_span(&self, other: &MatrixAlgebra) -> bool {
        self.n == other.n
            && self.dimension() == other.dimension()
            && self.span_distance(other) <= SPAN_TOL
    }

    /// Largest residual of either basis projected onto the other span.
    pub fn span_distance(&self, other: &MatrixAlgebra) -> f64 {
        if self.n != other.n {
            return f64::INFINITY;
        }
        let one_way = |a: &MatrixAlgebra, b: &MatrixAlgebra| {
            a.basis
                .iter()
                .map(|v| residual_against(&b.basis, v).norm())
                .fold(0.0, f64::max)
        };
        one_way(self, other).max(one_way(other, self))
    }

    /// Matrices used as constraints when solving for the commutant.
    fn constraint_set(&self) -> Vec<DMatrix<C64>> {
        if self.generators.is_empty() {
            self.basis().into_iter().map(ComplexMatrix::into_inner).collect()
        } else {
            self.generators.iter().map(|g| g.inner().clone()).collect()
        }
    }

    pub fn commutant(&self) -> Result<MatrixAlgebra> {
        let pool = if self.is_star_closed() { self.basis().into_iter().map(|b| b.into_inner()).collect() } else { vec![] };
        let mut out = commutant_of(self.n, &self.constraint_set(), &pool)?;
        out.log.push(format!("commutant of algebra of dimension {}", self.dimension()));
        Ok(out)
    }

    /// Intersection of two spans via principal angles.
    pub fn intersection(&self, other: &MatrixAlgebra) -> Result<MatrixAlgebra> {
        if self.n != other.n {
            return Err(LabError::DimensionMismatch { expected: self.n, found: other.n });
        }
        let qa = DMatrix::from_columns(&self.basis);
        let qb = DMatrix::from_columns(&other.basis);
        let cross = qa.adjoint() * &qb;
        let svd = cross.svd(true, false);
        let u = svd.u.expect("requested U");
        let mut basis: Vec<DVector<C64>> = Vec::new();
        for (k, &s) in svd.singular_values.iter().enumerate() {
            if s > 1.0 - SPAN_TOL {
                let v = &qa * u.column(k);
                let r = residual_against(&basis, &v);
                let norm = r.norm();
                if norm > 0.5 {
                    basis.push(r / C64::new(norm, 0.0));
                }
            }
        }
        Ok(MatrixAlgebra {
            n: self.n,
            basis,
            generators: vec![],
            log: vec![format!(
                "intersection of spans of dimensions {} and {}",
                self.dimension(),
                other.dimension()
            )],
        })
    }

    pub fn center(&self) -> Result<MatrixAlgebra> {
        self.intersection(&self.commutant()?)
    }

    /// `Ok(())` when the center is the scalars, `NotAFactor` otherwise.
    pub fn ensure_factor(&self) -> Result<()> {
        self.ensure_factor_with(&self.commutant()?)
    }

    /// [`ensure_factor`](Self::ensure_factor) with a precomputed commutant.
    pub fn ensure_factor_with(&self, commutant: &MatrixAlgebra) -> Result<()> {
        let center = self.intersection(commutant)?;
        if center.dimension() <= 1 {
            return Ok(());
        }
        let n = self.n;
        let id = vec_of(&DMatrix::identity(n, n)) / C64::new((n as f64).sqrt(), 0.0);
        // central element orthogonal to the identity
        let witness_vec = center
            .basis
            .iter()
            .map(|v| {
                let c = id.dotc(v);
                v - &id * c
            })
            .max_by(|a, b| a.norm().total_cmp(&b.norm()))
            .expect("center has at least two elements");
        let witness = mat_of(&witness_vec, n) * C64::new((n as f64).sqrt() / witness_vec.norm(), 0.0);
        let witness = ComplexMatrix::new(witness).expect("square");
        Err(LabError::NotAFactor {
            center_dim: center.dimension(),
            witness_norm: witness.max_abs(),
            witness: Box::new(witness),
        })
    }

    pub fn is_factor(&self) -> Result<bool> {
        Ok(self.center()?.dimension() == 1)
    }
}

/// Joint commutant of several algebras: matrices commuting with all of them.
pub fn joint_commutant(algebras: &[&MatrixAlgebra]) -> Result<MatrixAlgebra> {
    let n = match algebras.first() {
        Some(a) => a.n,
        None => return Err(LabError::Structural("joint commutant of an empty list".into())),
    };
    if let Some(a) = algebras.iter().find(|a| a.n != n) {
        return Err(LabError::DimensionMismatch { expected: n, found: a.n });
    }
    let constraints: Vec<DMatrix<C64>> = algebras.iter().flat_map(|a| a.constraint_set()).collect();
    let pool: Vec<DMatrix<C64>> = if algebras.iter().all(|a| a.is_star_closed()) {
        algebras.iter().flat_map(|a| a.basis().into_iter().map(|b| b.into_inner())).collect()
    } else {
        vec![]
    };
    commutant_of(n, &constraints, &pool)
}

/// Solves `[X, S] = 0` for all constraints `S`.
///
/// When `pool` is non-empty its elements must lie in the *-algebra generated
/// by the constraints. A generic Hermitian combination of the pool is then
/// diagonalized; every solution is block diagonal in its eigenbasis, which
/// shrinks the unknowns from `N^2` to the sum of squared cluster sizes. The
/// reduced homogeneous system is solved through the null space of its Gram
/// matrix.
pub(crate) fn commutant_of(
    n: usize,
    constraints: &[DMatrix<C64>],
    pool: &[DMatrix<C64>],
) -> Result<MatrixAlgebra> {
    check_cap(n)?;
    let is_scalar = |s: &DMatrix<C64>| {
        let t = s.trace() / C64::new(n as f64, 0.0);
        let off = s - DMatrix::identity(n, n) * t;
        off.norm() <= 1e-12 * s.norm().max(1e-300)
    };
    let active: Vec<&DMatrix<C64>> = constraints.iter().filter(|s| !is_scalar(s)).collect();
    if active.is_empty() {
        return Ok(MatrixAlgebra::full(n));
    }

    let (w, clusters) = if pool.is_empty() {
        (DMatrix::identity(n, n), vec![(0..n).collect::<Vec<_>>()])
    } else {
        generic_eigenbasis(n, pool)
    };

    // unknown ids for entries (a, b) inside each diagonal block
    let mut cluster_of = vec![0usize; n];
    let mut pos_in = vec![0usize; n];
    let mut offset = Vec::with_capacity(clusters.len());
    let mut u = 0;
    for (c, members) in clusters.iter().enumerate() {
        offset.push(u);
        for (p, &a) in members.iter().enumerate() {
            cluster_of[a] = c;
            pos_in[a] = p;
        }
        u += members.len() * members.len();
    }
    let id_of = |a: usize, b: usize| {
        let c = cluster_of[a];
        offset[c] + pos_in[a] * clusters[c].len() + pos_in[b]
    };

    let mut gram = DMatrix::<C64>::zeros(u, u);
    let mut row: Vec<(usize, C64)> = Vec::with_capacity(2 * n);
    for s in &active {
        let st = w.adjoint() * *s * &w;
        let scale = st.norm().max(1e-300);
        let st = st / C64::new(scale, 0.0);
        for a in 0..n {
            for b in 0..n {
                row.clear();
                // ([X, S])_{ab} = sum_c X_ac S_cb - sum_c S_ac X_cb
                for &c in &clusters[cluster_of[a]] {
                    let coef = st[(c, b)];
                    if coef != C64::default() {
                        row.push((id_of(a, c), coef));
                    }
                }
                for &c in &clusters[cluster_of[b]] {
                    let coef = st[(a, c)];
                    if coef != C64::default() {
                        row.push((id_of(c, b), -coef));
                    }
                }
                for &(p, cp) in &row {
                    let cp = cp.conj();
                    for &(q, cq) in &row {
                        gram[(p, q)] += cp * cq;
                    }
                }
            }
        }
    }

    let eig = SymmetricEigen::new(gram);
    let lmax = eig.eigenvalues.iter().copied().fold(0.0, f64::max);
    let threshold = NULL_RTOL * lmax.max(1e-300);
    let mut basis = Vec::new();
    for (k, &lam) in eig.eigenvalues.iter().enumerate() {
        if lam > threshold {
            continue;
        }
        let v = eig.eigenvectors.column(k);
        let mut xt = DMatrix::<C64>::zeros(n, n);
        for members in &clusters {
            for &a in members {
                for &b in members {
                    xt[(a, b)] = v[id_of(a, b)];
                }
            }
        }
        let x = &w * xt * w.adjoint();
        let xv = vec_of(&x);
        let r = residual_against(&basis, &xv);
        let norm = r.norm();
        if norm > 0.5 {
            basis.push(r / C64::new(norm, 0.0));
        }
    }

    let out = MatrixAlgebra {
        n,
        basis,
        generators: vec![],
        log: vec![format!("commutant solve: {u} reduced unknowns, {} constraints", active.len())],
    };
    verify_commutant(&out, &active)?;
    Ok(out)
}

/// Eigenbasis of a generic Hermitian element of the pool, with eigenvalue clusters.
fn generic_eigenbasis(n: usize, pool: &[DMatrix<C64>]) -> (DMatrix<C64>, Vec<Vec<usize>>) {
    let mut rng = ChaCha8Rng::seed_from_u64(GENERIC_SEED);
    let mut a = DMatrix::<C64>::zeros(n, n);
    for p in pool {
        let r: f64 = rng.random_range(-1.0..1.0);
        let scale = p.norm().max(1e-300);
        a += (p + p.adjoint()) * C64::new(r / scale, 0.0);
    }
    let eig = SymmetricEigen::new(a);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let spread = eig.eigenvalues.iter().map(|x| x.abs()).fold(0.0, f64::max).max(1e-300);
    let mut w = DMatrix::<C64>::zeros(n, n);
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    let mut prev = f64::NEG_INFINITY;
    for (col, &k) in order.iter().enumerate() {
        w.set_column(col, &eig.eigenvectors.column(k));
        let lam = eig.eigenvalues[k];
        if lam - prev > CLUSTER_RTOL * spread || clusters.is_empty() {
            clusters.push(vec![col]);
        } else {
            clusters.last_mut().expect("non-empty").push(col);
        }
        prev = lam;
    }
    (w, clusters)
}

fn verify_commutant(alg: &MatrixAlgebra, constraints: &[&DMatrix<C64>]) -> Result<()> {
    let n = alg.n;
    for v in &alg.basis {
        let x = mat_of(v, n) * C64::new((n as f64).sqrt(), 0.0);
        for s in constraints {
            let c = &x * *s - *s * &x;
            let rel = c.norm() / (s.norm().max(1e-300) * (n as f64).sqrt());
            if rel > SPAN_TOL {
                return Err(LabError::ContractViolation(format!(
                    "commutant solution fails a constraint with residual {rel:.3e}"
                )));
            }
        }
    }
    let closure = alg.closure_residual();
    if closure > SPAN_TOL {
        return Err(LabError::ContractViolation(format!(
            "commutant is not closed under products (residual {closure:.3e})"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shift(n: usize) -> ComplexMatrix {
        ComplexMatrix::permutation(&(0..n).map(|y| (y + 1) % n).collect::<Vec<_>>())
    }

    fn e00(n: usize) -> ComplexMatrix {
        let mut d = vec![C64::default(); n];
        d[0] = C64::new(1.0, 0.0);
        ComplexMatrix::diagonal(&d)
    }

    #[test]
    fn identity_generates_scalars() {
        let a = MatrixAlgebra::closure(&[ComplexMatrix::identity(4)]).unwrap();
        assert_eq!(a.dimension(), 1);
        assert!(a.orthonormality_residual() < 1e-10);
    }

    #[test]
    fn shift_and_projection_generate_full_algebra() {
        for n in [2, 3, 5] {
            let a = MatrixAlgebra::closure(&[shift(n), e00(n)]).unwrap();
            assert_eq!(a.dimension(), n * n);
            assert!(a.orthonormality_residual() < 1e-10);
            assert!(a.closure_residual() < 1e-8);
        }
    }

    #[test]
    fn commutants_of_extremes() {
        let full = MatrixAlgebra::full(4);
        assert_eq!(full.commutant().unwrap().dimension(), 1);
        assert_eq!(MatrixAlgebra::scalars(4).commutant().unwrap().dimension(), 16);
    }

    #[test]
    fn shift_alone_has_abelian_commutant() {
        let a = MatrixAlgebra::closure(&[shift(5)]).unwrap();
        assert_eq!(a.dimension(), 5);
        let c = a.commutant().unwrap();
        assert!(c.same_span(&a));
        assert!(!a.is_factor().unwrap());
        assert!(matches!(a.ensure_factor(), Err(LabError::NotAFactor { center_dim: 5, .. })));
    }

    #[test]
    fn non_star_closed_generators_fall_back_to_full_solve() {
        // span{I, N} for a nilpotent N is its own commutant
        let mut m = DMatrix::<C64>::zeros(2, 2);
        m[(0, 1)] = C64::new(1.0, 0.0);
        let a = MatrixAlgebra::closure(&[ComplexMatrix::new(m).unwrap()]).unwrap();
        assert_eq!(a.dimension(), 2);
        assert!(!a.is_star_closed());
        assert_eq!(a.commutant().unwrap().dimension(), 2);
    }

    #[test]
    fn dimension_cap_is_enforced() {
        assert!(matches!(
            MatrixAlgebra::closure(&[ComplexMatrix::identity(201)]),
            Err(LabError::DimensionCap { dim: 201, cap: 200 })
        ));
        assert!(matches!(
            MatrixAlgebra::closure(&[ComplexMatrix::identity(2), ComplexMatrix::identity(3)]),
            Err(LabError::DimensionMismatch { .. })
        ));
    }
}
