use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{character_value, coupling_formula, cycle_type, in_xprime0r, BernoulliSpec, SeqWindow};
use crate::error::{LabError, Result};
use crate::rational::{to_f64, Q};

/// Independent ChaCha streams per estimate; results are merged in stream order.
pub const MC_STREAMS: u64 = 8;

/// Monte Carlo estimate of a probability next to its exact value.
#[derive(Debug, Clone, Serialize)]
pub struct Estimate {
    #[serde(with = "crate::rational::serde_q")]
    pub exact: Q,
    pub mc_mean: f64,
    pub mc_stderr: f64,
    pub z_score: f64,
    pub samples: u64,
    pub degenerate_flag: bool,
}

impl Estimate {
    fn new(exact: Q, hits: u64, samples: u64, degenerate_flag: bool) -> Self {
        let mean = hits as f64 / samples as f64;
        let stderr = (mean * (1.0 - mean) / samples as f64).sqrt();
        let diff = mean - to_f64(&exact);
        let z_score = if stderr > 0.0 {
            diff / stderr
        } else if diff.abs() <= 1e-12 {
            0.0
        } else {
            f64::INFINITY
        };
        Self { exact, mc_mean: mean, mc_stderr: stderr, z_score, samples, degenerate_flag }
    }

    /// `|mean - exact| <= k * stderr`, with an exact match required when the
    /// sample variance vanishes.
    pub fn within(&self, k: f64) -> bool {
        self.z_score.abs() <= k
    }
}

struct Sampler {
    cumulative: Vec<f64>,
}

impl Sampler {
    fn new(spec: &BernoulliSpec) -> Self {
        let mut acc = 0.0;
        let cumulative = spec
            .weights()
            .iter()
            .map(|w| {
                acc += to_f64(w);
                acc
            })
            .collect();
        Self { cumulative }
    }

    /// Inverse-CDF draw; tail draws get the fresh symbol `k + slot`.
    fn draw(&self, rng: &mut ChaCha8Rng, slot: usize) -> usize {
        let u: f64 = rng.random();
        let i = self.cumulative.partition_point(|&c| c <= u);
        if i < self.cumulative.len() {
            i
        } else {
            self.cumulative.len() + slot
        }
    }
}

fn count_hits<F>(samples: u64, seed: u64, trial: F) -> u64
where
    F: Fn(&mut ChaCha8Rng) -> bool + Sync,
{
    let per = samples / MC_STREAMS;
    let extra = samples % MC_STREAMS;
    let counts: Vec<u64> = (0..MC_STREAMS)
        .into_par_iter()
        .map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(s);
            let n = per + u64::from(s < extra);
            (0..n).filter(|_| trial(&mut rng)).count() as u64
        })
        .collect();
    counts.iter().sum()
}

/// Estimates `mu(X'_{0,r}) / mu(X_{0,r})` by sampling shifted-symmetric
/// windows and testing the extra symmetry.
pub fn mc_coupling(spec: &BernoulliSpec, r: u32, samples: u64, seed: u64) -> Result<Estimate> {
    if samples == 0 {
        return Err(LabError::Degenerate("Monte Carlo needs at least one sample".into()));
    }
    let r = r as usize;
    let n = r.max(1);
    let sampler = Sampler::new(spec);
    let hits = count_hits(samples, seed, |rng| {
        let pos: Vec<usize> = (0..n + r).map(|slot| sampler.draw(rng, slot)).collect();
        let w = SeqWindow::shifted_symmetric(r, pos).expect("window shape is valid");
        in_xprime0r(&w)
    });
    Ok(Estimate::new(coupling_formula(spec, r as u32), hits, samples, spec.degenerate_flag()))
}

/// Estimates the probability that a symmetric sequence is fixed by `perm`
/// acting on the positive indices `1..=perm.len()`.
pub fn mc_character(perm: &[usize], spec: &BernoulliSpec, samples: u64, seed: u64) -> Result<Estimate> {
    if samples == 0 {
        return Err(LabError::Degenerate("Monte Carlo needs at least one sample".into()));
    }
    let n = perm.len();
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || std::mem::replace(&mut seen[p], true) {
            return Err(LabError::Structural(format!("{perm:?} is not a permutation of 0..{n}")));
        }
    }
    let sampler = Sampler::new(spec);
    let hits = count_hits(samples, seed, |rng| {
        let pos: Vec<usize> = (0..n).map(|slot| sampler.draw(rng, slot)).collect();
        let w = SeqWindow::shifted_symmetric(0, pos).expect("window shape is valid");
        // (sigma x)_{sigma(i)} = x_i on the positive half
        let mut moved = w.pos.clone();
        for (i, &s) in perm.iter().enumerate() {
            moved[s] = w.pos[i];
        }
        moved == w.pos
    });
    let exact = character_value(&cycle_type(perm), spec);
    Ok(Estimate::new(exact, hits, samples, spec.degenerate_flag()))
}
