//! Rational torus models and a sweep along the convergents of the golden ratio.

use coupling_lab::heisenberg::{convergent_sweep, torus_bridge};

fn main() -> coupling_lab::Result<()> {
    for (p, q) in [(1, 2), (2, 3), (3, 2), (5, 8), (8, 5)] {
        let r = torus_bridge(p, q, 0)?;
        println!(
            "p/q = {p}/{q}: dynamical {}, rotation {}, MvN pair [{}, {}], cyclic {}, separating {}",
            r.dyn_coupling, r.rotation_number, r.mvn_pair[0], r.mvn_pair[1], r.cyclic, r.separating
        );
    }
    println!("convergents of 1.6180339887498949:");
    for row in convergent_sweep("1.6180339887498949", 10, 200, 0)? {
        match (&row.coupling, &row.skip_reason) {
            (Some(c), _) => println!("  {}/{}  error {:.2e}  coupling {c}", row.p, row.q, row.error),
            (None, Some(why)) => println!("  {}/{}  skipped: {why}", row.p, row.q),
            (None, None) => unreachable!(),
        }
    }
    Ok(())
}
