//! Coupling of the shifted symmetric group actions on a Bernoulli sequence
//! space: exact `(sum a_i^2)^r` against Monte Carlo.

use coupling_lab::rational::{parse_rational_list, q};
use coupling_lab::symmetric::{coupling_formula, mc_coupling, BernoulliSpec};

fn main() -> coupling_lab::Result<()> {
    let specs = [
        BernoulliSpec::new(parse_rational_list("1/2,3/10,1/5")?)?,
        BernoulliSpec::new(parse_rational_list("1/2,1/2")?)?,
        BernoulliSpec::with_tail(vec![q(1, 2), q(1, 4)], q(1, 4))?,
    ];
    for spec in &specs {
        let weights: Vec<String> = spec.weights().iter().map(|w| w.to_string()).collect();
        println!("alpha = [{}], tail {}", weights.join(", "), spec.tail_mass());
        for r in 0..=3 {
            let e = mc_coupling(spec, r, 100_000, 0)?;
            println!(
                "  r = {r}: exact {} = {:.5}, MC {:.5} +- {:.5} (z {:+.2})",
                coupling_formula(spec, r),
                coupling_lab::rational::to_f64(&e.exact),
                e.mc_mean,
                e.mc_stderr,
                e.z_score
            );
        }
    }
    Ok(())
}
