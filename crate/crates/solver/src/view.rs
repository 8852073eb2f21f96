use crate::SolverError;
use lumped::{LumpedChain, LumpedPoint};

/// A finite reversible chain presented through canonical state indices.
/// Implementations never materialize the kernel; neighbors are generated on
/// demand.
pub trait ChainView {
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Visit every neighbor of state `i` with its one-step rate.
    fn for_each_neighbor(&self, i: usize, f: &mut dyn FnMut(usize, f64));

    /// ln of the invariant measure of state `i`.
    fn ln_measure_at(&self, i: usize) -> f64;

    /// Largest |i - j| over edges (i, j); used to pick a solve backend.
    fn bandwidth(&self) -> usize {
        let mut bw = 0usize;
        for i in 0..self.len() {
            self.for_each_neighbor(i, &mut |j, _| {
                bw = bw.max(i.abs_diff(j));
            });
        }
        bw
    }

    fn neighbors_of(&self, i: usize) -> Vec<(usize, f64)> {
        let mut out = Vec::new();
        self.for_each_neighbor(i, &mut |j, r| out.push((j, r)));
        out
    }
}

/// Nearest-neighbor walk on the spin configurations of N sites: one uniformly
/// chosen coordinate flips per step. States are the bit masks 0..2^N (bit set
/// means spin down), the invariant measure is uniform.
pub struct HypercubeChain {
    n: u32,
}

pub const MAX_HYPERCUBE_SITES: u32 = 22;

impl HypercubeChain {
    pub fn new(n: u32) -> Result<Self, SolverError> {
        if n == 0 || n > MAX_HYPERCUBE_SITES {
            return Err(SolverError::BadInstance(format!(
                "site count {n} outside 1..={MAX_HYPERCUBE_SITES}"
            )));
        }
        Ok(HypercubeChain { n })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Index of the configuration with the given down-spin mask.
    pub fn state(&self, mask: u64) -> usize {
        debug_assert!(mask < (1 << self.n));
        mask as usize
    }

    pub fn hamming(&self, a: usize, b: usize) -> u32 {
        (a ^ b).count_ones()
    }
}

impl ChainView for HypercubeChain {
    fn len(&self) -> usize {
        1usize << self.n
    }

    fn for_each_neighbor(&self, i: usize, f: &mut dyn FnMut(usize, f64)) {
        let rate = 1.0 / self.n as f64;
        for bit in 0..self.n {
            f(i ^ (1usize << bit), rate);
        }
    }

    fn ln_measure_at(&self, _i: usize) -> f64 {
        -(self.n as f64) * std::f64::consts::LN_2
    }
}

/// The collapsed chain of a d-class partition, indexed row-major by the
/// per-class down counts.
pub struct GridChain {
    chain: LumpedChain,
    /// Mixed-radix strides matching LumpedChain::index.
    strides: Vec<usize>,
    sizes: Vec<u32>,
    /// ln C(M_k, n) per class, so measure lookups never allocate.
    ln_binom: Vec<Vec<f64>>,
    ln_two_n: f64,
}

pub const MAX_GRID_STATES: u128 = 5_000_000;

impl GridChain {
    pub fn new(chain: LumpedChain) -> Result<Self, SolverError> {
        let states = chain.state_count();
        if states > MAX_GRID_STATES {
            return Err(SolverError::BadInstance(format!(
                "grid has {states} states, over the {MAX_GRID_STATES} cap"
            )));
        }
        let sizes = chain.sizes().to_vec();
        let mut strides = vec![1usize; sizes.len()];
        for k in (0..sizes.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * (sizes[k + 1] as usize + 1);
        }
        let ln_binom: Vec<Vec<f64>> = sizes
            .iter()
            .map(|&m| {
                (0..=m as usize)
                    .map(|n| lumped::comb::ln_binomial(m as usize, n))
                    .collect()
            })
            .collect();
        let ln_two_n = chain.n() as f64 * std::f64::consts::LN_2;
        Ok(GridChain {
            chain,
            strides,
            sizes,
            ln_binom,
            ln_two_n,
        })
    }

    pub fn from_sizes(sizes: &[usize]) -> Result<Self, SolverError> {
        let chain = LumpedChain::from_sizes(sizes)
            .map_err(|e| SolverError::BadInstance(e.to_string()))?;
        GridChain::new(chain)
    }

    pub fn chain(&self) -> &LumpedChain {
        &self.chain
    }

    pub fn state(&self, p: &LumpedPoint) -> usize {
        self.chain.index(p) as usize
    }

    pub fn point(&self, i: usize) -> LumpedPoint {
        self.chain.point_at(i as u64)
    }

    fn count(&self, i: usize, k: usize) -> u32 {
        (i / self.strides[k] % (self.sizes[k] as usize + 1)) as u32
    }
}

impl ChainView for GridChain {
    fn len(&self) -> usize {
        self.chain.state_count() as usize
    }

    fn for_each_neighbor(&self, i: usize, f: &mut dyn FnMut(usize, f64)) {
        let n = self.chain.n() as f64;
        for k in 0..self.sizes.len() {
            let nk = self.count(i, k);
            if nk < self.sizes[k] {
                f(i + self.strides[k], (self.sizes[k] - nk) as f64 / n);
            }
            if nk > 0 {
                f(i - self.strides[k], nk as f64 / n);
            }
        }
    }

    fn ln_measure_at(&self, i: usize) -> f64 {
        let mut acc = -self.ln_two_n;
        for k in 0..self.sizes.len() {
            acc += self.ln_binom[k][self.count(i, k) as usize];
        }
        acc
    }

    fn bandwidth(&self) -> usize {
        self.strides[0]
    }
}
