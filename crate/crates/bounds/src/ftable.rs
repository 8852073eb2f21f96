use crate::params::BoundParams;
use lumped::comb::ln_factorial;
use lumped::LumpedChain;

/// Memoised decay function F = F1 + F2 over step distances 1..=N for one
/// chain geometry. F1 is the direct-path term kappa(n) n!/N^n; F2 collects
/// the two-step-overshoot corrections weighted by vertex sphere sizes.
/// Everything is stored in log space; linear accessors exponentiate (and may
/// underflow to 0 for very large N, which callers accept).
#[derive(Clone, Debug)]
pub struct FTable {
    n: u32,
    d: usize,
    params: BoundParams,
    ln_f1: Vec<f64>,
    ln_f2: Vec<f64>,
    ln_f: Vec<f64>,
}

/// Admissible overshoot distances: m >= 1 with m = n + 2 - 2p for p >= 0,
/// i.e. every positive integer of n's parity... shifted by 2: {n+2, n, ...}.
pub fn index_set_i(n: usize) -> Vec<usize> {
    let start = if n % 2 == 0 { 2 } else { 1 };
    (0..)
        .map(|k| start + 2 * k)
        .take_while(|&m| m <= n + 2)
        .collect()
}

fn ln_sum_exp(terms: &[f64]) -> f64 {
    let hi = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if hi == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    hi + terms.iter().map(|&t| (t - hi).exp()).sum::<f64>().ln()
}

impl FTable {
    pub fn new(chain: &LumpedChain, params: &BoundParams) -> Self {
        let n = chain.n();
        let ln_n = (n as f64).ln();
        // Vertex sphere sizes are vertex-independent; one DP pass yields all
        // radii at once.
        let mut ln_sphere = vec![f64::NEG_INFINITY; n as usize + 3];
        {
            let mut dp = vec![f64::NEG_INFINITY; n as usize + 1];
            dp[0] = 0.0;
            for &m_k in chain.sizes() {
                let mut next = vec![f64::NEG_INFINITY; n as usize + 1];
                for prev in 0..=n as usize {
                    if dp[prev] == f64::NEG_INFINITY {
                        continue;
                    }
                    for t in 0..=(m_k as usize).min(n as usize - prev) {
                        let cand = dp[prev];
                        let slot = &mut next[prev + t];
                        *slot = if *slot == f64::NEG_INFINITY {
                            cand
                        } else {
                            let (hi, lo) = if *slot >= cand { (*slot, cand) } else { (cand, *slot) };
                            hi + (lo - hi).exp().ln_1p()
                        };
                    }
                }
                dp = next;
            }
            ln_sphere[..=n as usize].copy_from_slice(&dp);
        }

        let size = n as usize + 1;
        let mut ln_f1 = vec![f64::NEG_INFINITY; size];
        let mut ln_f2 = vec![f64::NEG_INFINITY; size];
        let mut ln_f = vec![f64::NEG_INFINITY; size];
        for dist in 1..=n as usize {
            let kappa1 = params.kappa(dist, n);
            ln_f1[dist] = kappa1.ln() + ln_factorial(dist) - dist as f64 * ln_n;
            let kappa2 = params.kappa(dist + 2, n);
            let lead =
                2.0 * kappa2.ln() + ln_factorial(dist + 2) - (dist as f64 + 2.0) * ln_n;
            let terms: Vec<f64> = index_set_i(dist)
                .into_iter()
                .map(|m| {
                    let p = (dist + 2 - m) / 2;
                    p as f64 * ln_n - ln_factorial(p) + ln_sphere[m]
                })
                .collect();
            ln_f2[dist] = lead + ln_sum_exp(&terms);
            ln_f[dist] = ln_sum_exp(&[ln_f1[dist], ln_f2[dist]]);
        }
        FTable {
            n,
            d: chain.d(),
            params: params.clone(),
            ln_f1,
            ln_f2,
            ln_f,
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Number of classes of the geometry this table was built for.
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn params(&self) -> &BoundParams {
        &self.params
    }

    pub fn ln_f1(&self, dist: usize) -> f64 {
        assert!(dist >= 1 && dist <= self.n as usize, "distance {dist} out of 1..={}", self.n);
        self.ln_f1[dist]
    }

    pub fn ln_f2(&self, dist: usize) -> f64 {
        assert!(dist >= 1 && dist <= self.n as usize);
        self.ln_f2[dist]
    }

    pub fn ln_f(&self, dist: usize) -> f64 {
        assert!(dist >= 1 && dist <= self.n as usize);
        self.ln_f[dist]
    }

    pub fn f1(&self, dist: usize) -> f64 {
        self.ln_f1(dist).exp()
    }

    pub fn f2(&self, dist: usize) -> f64 {
        self.ln_f2(dist).exp()
    }

    pub fn f(&self, dist: usize) -> f64 {
        self.ln_f(dist).exp()
    }
}
