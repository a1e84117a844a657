//! Left and right translations by subgroups of `S_3`, and a Cartan check.

use coupling_lab::group::FiniteGroup;
use coupling_lab::operators::{cartan_check, mvn_coupling, side_algebra, Witness};
use coupling_lab::systems::{check_axioms, dyn_coupling, orbits, translation_pair, Side};

fn main() -> coupling_lab::Result<()> {
    let s3 = FiniteGroup::symmetric(3);
    let e = s3.identity();
    let t = s3.find_label("(1 2)").expect("transposition");
    let c = s3.find_label("(1 2 3)").expect("3-cycle");
    let pair = translation_pair(&s3, &[e, t], &[e, c, s3.mul(c, c)])?;
    let sys = &pair.system;
    println!("axioms: {:?}", check_axioms(sys));
    println!("G-orbits {}, H-orbits {}", orbits(sys, Side::G).len(), orbits(sys, Side::H).len());
    println!("dynamical coupling {}", dyn_coupling(sys)?.lambda_gh);
    let a_g = side_algebra(sys, Side::G)?;
    let cert = mvn_coupling(&a_g, &Witness::auto(1))?;
    println!("lambda(A_G) = {} (spread {:e}), flags {:?}", cert.lambda_rational, cert.spread, cert.flags);
    println!("cartan: {:?}", cartan_check(sys)?);

    let whole = translation_pair(&s3, &(0..6).collect::<Vec<_>>(), &[e])?;
    println!("S3 acting on itself, trivial right side: coupling {}", dyn_coupling(&whole.system)?.lambda_gh);
    Ok(())
}
