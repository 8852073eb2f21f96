use crate::one_dim::{q_ratio, rho_1d_exact};
use lumped::{LumpedChain, LumpedPoint};

/// Lower bound on the escape probability from x to the grid origin before
/// returning to x, built from d cyclic tours of single-class escapes: the
/// chain is released along one class at a time and each tour contributes the
/// inverse of a weighted sum of single-class inverse escape probabilities.
///
/// Degenerate directions (a count already at its class centre) make the
/// single-class escape probability zero and the bound collapses to 0, which
/// is still valid.
///
/// Counts are first reflected classwise to the lower half; the grid dynamics
/// is symmetric under n_k -> |Lambda_k| - n_k so the escape probability is
/// unchanged.
pub fn path_lower_bound(chain: &LumpedChain, x: &LumpedPoint) -> f64 {
    assert!(chain.contains(x));
    let d = chain.d();
    let n = chain.n() as f64;
    let sizes = chain.sizes();

    let reflected: Vec<usize> = x
        .counts()
        .iter()
        .zip(sizes.iter())
        .map(|(&c, &m)| (c.min(m - c)) as usize)
        .collect();
    if reflected
        .iter()
        .zip(sizes.iter())
        .any(|(&j, &m)| j == (m as usize) / 2)
    {
        return 0.0;
    }

    let rho_inv: Vec<f64> = reflected
        .iter()
        .zip(sizes.iter())
        .map(|(&j, &m)| 1.0 / rho_1d_exact(m as usize, j))
        .collect();
    let q: Vec<f64> = reflected
        .iter()
        .zip(sizes.iter())
        .map(|(&j, &m)| q_ratio(m as usize, j))
        .collect();

    let mut total = 0.0;
    for mu in 0..d {
        // Tour starting at class mu, visiting classes cyclically; the weight
        // for the nu-th leg is the product of measure ratios of the classes
        // already visited.
        let mut eps = 1.0;
        let mut bracket = 0.0;
        for nu in 0..d {
            let a = (mu + nu) % d;
            bracket += eps * (n / sizes[a] as f64) * rho_inv[a];
            eps *= q[a];
        }
        total += 1.0 / bracket;
    }
    total
}
