//! Characters of the infinite symmetric group from Bernoulli measures:
//! `chi(sigma) = prod over cycles of p_len(alpha)`.

use coupling_lab::group::cycle_notation;
use coupling_lab::rational::q;
use coupling_lab::symmetric::{character_value, cycle_type, mc_character, BernoulliSpec};

fn main() -> coupling_lab::Result<()> {
    let spec = BernoulliSpec::new(vec![q(1, 2), q(3, 10), q(1, 5)])?;
    for perm in [vec![0, 1, 2, 3], vec![1, 0, 2, 3], vec![1, 2, 0, 3], vec![1, 0, 3, 2], vec![1, 2, 3, 0]] {
        let cycles = cycle_type(&perm);
        let e = mc_character(&perm, &spec, 100_000, 0)?;
        println!(
            "{:<12} cycle type {:?}: chi = {:<10} MC {:.5} (z {:+.2})",
            cycle_notation(&perm),
            cycles,
            character_value(&cycles, &spec).to_string(),
            e.mc_mean,
            e.z_score
        );
    }
    Ok(())
}
