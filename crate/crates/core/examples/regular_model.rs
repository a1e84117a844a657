//! The regular model `X0 x G0` and its bicyclic domain indicator.

use coupling_lab::crossed::cyclic_regular_model;
use coupling_lab::operators::{bicyclic_witness, side_algebra};
use coupling_lab::systems::Side;

fn main() -> coupling_lab::Result<()> {
    for n in [5, 7] {
        let model = cyclic_regular_model(n)?;
        let dc = model.coupling()?;
        let induced = model.induced_actions();
        let a_g = side_algebra(&model.system, Side::G)?;
        let bc = bicyclic_witness(&a_g, &model.domain_indicator())?;
        println!(
            "Z{n}: coupling {}, induced {:?}, domain indicator ranks {}/{} of {}, bicyclic {}",
            dc.lambda_gh,
            induced,
            bc.rank_b,
            bc.rank_commutant,
            bc.dim,
            bc.bicyclic()
        );
    }
    Ok(())
}
