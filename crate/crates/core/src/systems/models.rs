use num::One;

use super::PairedSystem;
use crate::error::Result;
use crate::group::FiniteGroup;
use crate::rational::Q;

/// `X = Z_m x Z_n` with unit weights, `G = Z_m` translating the first
/// coordinate and `H = Z_n` the second. Point `(a, b)` has id `a*n + b`.
pub fn product_model(m: usize, n: usize) -> Result<PairedSystem> {
    let g = FiniteGroup::cyclic(m);
    let h = FiniteGroup::cyclic(n);
    let size = m * n;
    let labels = (0..size).map(|x| format!("({},{})", x / n, x % n)).collect();
    let left = (0..m)
        .map(|s| (0..size).map(|x| ((x / n + s) % m) * n + x % n).collect())
        .collect();
    let right = (0..n)
        .map(|t| (0..size).map(|x| (x / n) * n + (x % n + t) % n).collect())
        .collect();
    PairedSystem::new(labels, vec![Q::one(); size], g, h, left, right)
}

#[derive(Debug, Clone)]
pub struct TranslationPair {
    pub system: PairedSystem,
    /// Whether `G ∩ H = {e}` inside the ambient group.
    pub trivial_intersection: bool,
}

/// Left translation by the subgroup `G <= K` and right translation by
/// `H <= K` on `X = K` with uniform weights.
pub fn translation_pair(k: &FiniteGroup, g_elements: &[usize], h_elements: &[usize]) -> Result<TranslationPair> {
    let (g, g_emb) = k.subgroup(g_elements)?;
    let (h, h_emb) = k.subgroup(h_elements)?;
    let n = k.order();
    let left = g_emb.iter().map(|&a| (0..n).map(|x| k.mul(a, x)).collect()).collect();
    let right = h_emb.iter().map(|&b| (0..n).map(|x| k.mul(x, b)).collect()).collect();
    let labels = (0..n).map(|x| k.label(x).to_string()).collect();
    let trivial_intersection = g_emb
        .iter()
        .filter(|a| h_emb.contains(a))
        .all(|&a| a == k.identity());
    let system = PairedSystem::new(labels, vec![Q::one(); n], g, h, left, right)?;
    Ok(TranslationPair { system, trivial_intersection })
}
