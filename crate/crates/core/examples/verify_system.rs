//! Axioms and couplings of a system read from a TOML description.

use coupling_lab::operators::{mvn_coupling, side_algebra, Witness};
use coupling_lab::systems::{check_axioms, dyn_coupling, fundamental_domain, parse_system_description, Side};

fn main() -> coupling_lab::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/z2xz4.toml").into());
    let text = std::fs::read_to_string(&path).map_err(|e| coupling_lab::LabError::Io { path: path.clone(), source: e })?;
    let sys = parse_system_description(&text)?;
    println!("{path}: {} points", sys.len());
    println!("axioms {:?}", check_axioms(&sys));
    let fd = fundamental_domain(&sys, Side::G);
    println!("G fundamental domain {:?}", fd);
    let dc = dyn_coupling(&sys)?;
    println!("mu(F_G) = {}, mu(F_H) = {}, coupling {}", dc.mu_fg, dc.mu_fh, dc.lambda_gh);
    let cert = mvn_coupling(&side_algebra(&sys, Side::G)?, &Witness::auto(0))?;
    println!("lambda(A_G) = {}", cert.lambda_rational);
    Ok(())
}
