use crate::ftable::FTable;
use crate::params::BoundParams;
use lumped::LumpedChain;
use std::f64::consts::PI;

/// Class-count budget: floor(alpha0 * N / ln N).
pub fn d0(n: u32, alpha0: f64) -> usize {
    (alpha0 * n as f64 / (n as f64).ln()).floor() as usize
}

/// ln of the coarse hitting-time ceiling for reaching the grid origin:
/// (N/4) ln N for a single class, C N^2 prod |Lambda_k| otherwise.
pub fn theta_hat_ln(chain: &LumpedChain, big_c: f64) -> f64 {
    let n = chain.n() as f64;
    if chain.d() == 1 {
        (n / 4.0).ln() + n.ln().ln()
    } else {
        big_c.ln()
            + 2.0 * n.ln()
            + chain.sizes().iter().map(|&m| (m as f64).ln()).sum::<f64>()
    }
}

/// ln of the upper end of the admissible tilting window for Laplace
/// transforms of hitting times of a family of I corners: (2^N/|I|)(1+1/N).
pub fn u_upper_inv_ln(chain: &LumpedChain, i_size: usize) -> f64 {
    assert!(i_size >= 1);
    let n = chain.n() as f64;
    n * std::f64::consts::LN_2 - (i_size as f64).ln() + (1.0 / n).ln_1p()
}

/// ln of the lower end of that window: theta_hat^2 / E(return time to the
/// origin).
pub fn u_lower_inv_ln(chain: &LumpedChain, big_c: f64) -> f64 {
    2.0 * theta_hat_ln(chain, big_c) - expected_return_time_ln(chain)
}

/// ln E(return time to the grid origin) = -ln Q(origin) (occupation-time
/// identity for the stationary chain).
pub fn expected_return_time_ln(chain: &LumpedChain) -> f64 {
    -chain.ln_measure(chain.origin())
}

/// ln of the closed-form approximation prod_k sqrt(pi |Lambda_k| / 2) to the
/// expected return time (all classes even-sized for exactness of the
/// central binomial approximation).
pub fn stirling_return_time_ln(chain: &LumpedChain) -> f64 {
    chain
        .sizes()
        .iter()
        .map(|&m| 0.5 * (PI * m as f64 / 2.0).ln())
        .sum()
}

/// Smallest admissible-start radius rho >= 0 such that
/// m_size * F(rho + 1) <= target (default 1/ln N); N when none works.
pub fn rho_of_m(table: &FTable, m_size: usize, target: Option<f64>) -> usize {
    let n = table.n() as usize;
    let target = target.unwrap_or(1.0 / (table.n() as f64).ln());
    let ln_target = target.ln() - (m_size as f64).ln();
    (0..n)
        .find(|&rho| table.ln_f(rho + 1) <= ln_target)
        .unwrap_or(n)
}

/// Uniformity envelope for harmonic measures of an |A|-point family:
/// max{interaction functional, |A| F(rho+1)} with rho chosen by `rho_of_m`.
/// Returns (envelope, rho).
pub fn theta_envelope(table: &FTable, u_value: f64, a_size: usize) -> (f64, usize) {
    let rho = rho_of_m(table, a_size, None);
    let fallback = if rho + 1 <= table.n() as usize {
        a_size as f64 * table.f(rho + 1)
    } else {
        f64::INFINITY
    };
    (u_value.max(fallback), rho)
}

/// Error envelope for conditional Laplace transforms and exponential laws
/// on an |A|-point corner family: max{interaction, 1/N^k, |A| F(rho+1)},
/// with k = 2 under well-separation and 1 otherwise. `rho` defaults to the
/// `rho_of_m` choice. Returns (envelope, rho used).
pub fn theta_tilde(
    table: &FTable,
    u_value: f64,
    a_size: usize,
    rho: Option<usize>,
    separated: bool,
) -> (f64, usize) {
    let n = table.n() as f64;
    let k = if separated { 2 } else { 1 };
    let rho = rho.unwrap_or_else(|| rho_of_m(table, a_size, None));
    let fallback = if rho + 1 <= table.n() as usize {
        a_size as f64 * table.f(rho + 1)
    } else {
        f64::INFINITY
    };
    (u_value.max(n.powi(-k)).max(fallback), rho)
}

/// Two-sided envelope for the expected hitting time of an |A|-point corner
/// family from a far-away start: base (2^N/|A|)(1+1/N) and relative slack
/// c * max{interaction, 1/N^k}, with k = 2 under well-separation and 1
/// otherwise. Returns (ln lower, ln upper); the lower end is -inf if the
/// slack eats the whole base.
pub fn mean_time_envelope_ln(
    chain: &LumpedChain,
    a_size: usize,
    u_value: f64,
    separated: bool,
    params: &BoundParams,
) -> (f64, f64) {
    let n = chain.n() as f64;
    let k = if separated { 2 } else { 1 };
    let slack = params.c_mean * u_value.max(n.powi(-k));
    let ln_base =
        n * std::f64::consts::LN_2 - (a_size as f64).ln() + (1.0 + 1.0 / n).ln();
    let ln_lower = if slack < 1.0 {
        ln_base + (-slack).ln_1p()
    } else {
        f64::NEG_INFINITY
    };
    let ln_upper = ln_base + slack.ln_1p();
    (ln_lower, ln_upper)
}
