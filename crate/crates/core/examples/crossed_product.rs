//! The crossed product of the invariant functions of one side by the other
//! group, its trace and its matrix representation.

use coupling_lab::crossed::{cp_multiply, cp_represent, cp_trace, CrossedProduct};
use coupling_lab::matrix::C64;
use coupling_lab::systems::{product_model, Side};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> coupling_lab::Result<()> {
    let sys = product_model(3, 4)?;
    let cp = CrossedProduct::new(&sys, Side::G)?;
    println!("{} blocks, block measures {:?}", cp.blocks(), cp.block_measure().iter().map(|q| q.to_string()).collect::<Vec<_>>());
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let a = cp.random_element(&mut rng, 3);
    let b = cp.random_element(&mut rng, 3);
    let dim = C64::new(sys.len() as f64, 0.0);
    let aa = cp_multiply(&cp, &cp.adjoint(&a)?, &a)?;
    let tau = cp_trace(&cp, &aa)?;
    let matrix = cp_represent(&cp, &aa, &sys)?.trace() / dim;
    println!("tau(a*a) = {tau:.6}, Tr(pi(a*a))/N = {matrix:.6}");
    let ab = cp_trace(&cp, &cp_multiply(&cp, &a, &b)?)?;
    let ba = cp_trace(&cp, &cp_multiply(&cp, &b, &a)?)?;
    println!("tau(ab) - tau(ba) = {:.1e}", (ab - ba).norm());
    Ok(())
}
