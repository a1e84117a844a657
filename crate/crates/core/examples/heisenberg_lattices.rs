//! Commutation of the lattices `Gamma(l1, l2)` and `Gamma(l2, l1)` and the
//! grid representation `rho_n`.

use coupling_lab::heisenberg::{
    commutator_turns, cross_lattice_commutator, lattice_embed, non_abelian_witness, rho_n_operator, GridSpec,
    LatticeIndex, LatticeOrder,
};
use coupling_lab::rational::{q, qi};
use num::Zero;

fn main() -> coupling_lab::Result<()> {
    let (l1, l2) = (qi(7), qi(3));
    let k = 3;
    let mut checked = 0;
    for m in -k..=k {
        for n in -k..=k {
            for r in -k..=k {
                let x = LatticeIndex::new(m, n, r);
                let y = LatticeIndex::new(n, r, m);
                assert!(cross_lattice_commutator(x, y, &l1, &l2).is_zero());
                checked += 1;
            }
        }
    }
    println!("Gamma(7,3) and Gamma(3,7): {checked} pairs commute");
    let (x, y, t) = non_abelian_witness(&l1, &l2).expect("7/3 is not an integer");
    println!("inside Gamma(7,3): {x:?} and {y:?} have commutator phase {t} turns");

    let grid = GridSpec::new(12, q(1, 4))?;
    let a = lattice_embed(LatticeIndex::new(1, 0, 0), &qi(1), &qi(4), LatticeOrder::Direct);
    let b = lattice_embed(LatticeIndex::new(0, 1, 0), &qi(1), &qi(4), LatticeOrder::Direct);
    let ua = rho_n_operator(1, &a, &grid)?;
    let ub = rho_n_operator(1, &b, &grid)?;
    let phase = commutator_turns(&a, &b);
    let lhs = ua.mul(&ub).mul(&ua.adjoint()).mul(&ub.adjoint());
    let rhs = rho_n_operator(1, &coupling_lab::heisenberg::HeisenbergElement::new(qi(0), qi(0), phase.clone()), &grid)?;
    println!("rho_1 commutator matches phase {phase}: residual {:e}", lhs.sub(&rhs).max_abs());
    Ok(())
}
