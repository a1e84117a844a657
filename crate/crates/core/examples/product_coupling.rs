//! Dynamical and operator coupling constants of `Z_m x Z_n`.

use coupling_lab::operators::{is_irreducible, mvn_coupling, side_algebra, Witness};
use coupling_lab::systems::{check_axioms, dyn_coupling, product_model, Side};

fn main() -> coupling_lab::Result<()> {
    for (m, n) in [(2, 3), (3, 4), (2, 5), (4, 4)] {
        let sys = product_model(m, n)?;
        assert!(check_axioms(&sys).all());
        let dc = dyn_coupling(&sys)?;
        let a_g = side_algebra(&sys, Side::G)?;
        let a_h = side_algebra(&sys, Side::H)?;
        let mutual = a_g.commutant()?.same_span(&a_h) && a_h.commutant()?.same_span(&a_g);
        let irreducible = is_irreducible(&[&a_g, &a_h])?.irreducible;
        let cg = mvn_coupling(&a_g, &Witness::auto(0))?;
        let ch = mvn_coupling(&a_h, &Witness::auto(0))?;
        println!(
            "Z{m} x Z{n}: mu(F_H)/mu(F_G) = {}, lambda(A_G) = {}, lambda(A_H) = {}, dims {}/{}, mutual commutants {mutual}, irreducible {irreducible}",
            dc.lambda_gh, cg.lambda_rational, ch.lambda_rational, cg.algebra_dim, ch.algebra_dim
        );
    }
    Ok(())
}
