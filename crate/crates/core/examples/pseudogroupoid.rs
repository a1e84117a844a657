//! Finite windows of the sequence space with two commuting partitions.

use coupling_lab::rational::q;
use coupling_lab::symmetric::{
    commutant_projections_report, pseudogroupoid_check, pseudogroupoid_check_with, sn_smoke, BernoulliSpec, SideSets,
};

fn main() -> coupling_lab::Result<()> {
    let spec = BernoulliSpec::new(vec![q(1, 2), q(1, 2)])?;
    let rep = pseudogroupoid_check(1, 3, &spec, 500, 0)?;
    println!(
        "r = 1, N = 3: {} windows, {} left / {} right blocks, commute {}, transitive {} ({} classes), all pass {}",
        rep.windows, rep.blocks_left, rep.blocks_right, rep.commutation, rep.transitivity, rep.composition_classes, rep.all_pass()
    );

    let mut sets = SideSets::standard(1, 3);
    sets.left.push(1);
    let bad = pseudogroupoid_check_with(1, 3, &spec, &sets, 500, 0)?;
    println!("left side also moving x_1: commute {}, witness {:?}", bad.commutation, bad.witness);

    let proj = commutant_projections_report(2, &BernoulliSpec::new(vec![q(1, 2), q(3, 10), q(1, 5)])?)?;
    println!("r = 2: {} cylinders, weighted identity {}, coupling {}", proj.cylinders.len(), proj.weighted_identity, proj.coupling);

    let smoke = sn_smoke(2, 1, &spec)?;
    println!("S_2 window model: {} points, dims {}/{}, commute {}", smoke.points, smoke.dim_left, smoke.dim_right, smoke.commute);
    Ok(())
}
