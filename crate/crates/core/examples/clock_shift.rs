//! Clock and shift matrices and Weyl systems of finite abelian groups.

use coupling_lab::heisenberg::{clock_shift_residual, weyl_check, ClockShiftPair};

fn main() -> coupling_lab::Result<()> {
    for (n, p) in [(4, 1), (4, 3), (12, 5), (64, 37)] {
        let cs = ClockShiftPair::new(n, p)?;
        println!("N = {n:>2}, p = {p:>2}: |UV - e(p/N) VU| = {:.1e}", clock_shift_residual(&cs));
    }
    for factors in [vec![2], vec![6], vec![2, 3]] {
        let rep = weyl_check(&factors, 0)?;
        println!(
            "A = {factors:?}: cocycle residual {:.1e}, joint irreducible {:?}, split {:?}",
            rep.cocycle_residual, rep.joint_irreducible, rep.split.as_ref().map(|s| s.couplings.iter().map(|c| c.to_string()).collect::<Vec<_>>())
        );
    }
    Ok(())
}
