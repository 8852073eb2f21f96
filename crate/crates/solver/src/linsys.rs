use crate::view::ChainView;
use crate::SolverError;
use nalgebra::{DMatrix, DVector};

/// Right-hand side of a potential equation, indexed by full state index
/// (entries at fixed states are ignored).
pub enum Rhs<'a> {
    Zero,
    Constant(f64),
    Field(&'a [f64]),
}

impl Rhs<'_> {
    fn at(&self, i: usize) -> f64 {
        match self {
            Rhs::Zero => 0.0,
            Rhs::Constant(c) => *c,
            Rhs::Field(f) => f[i],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Tridiagonal,
    DenseLu,
    BandLu,
    ConjugateGradient,
}

/// Solution of one potential equation: the full-length value field (fixed
/// entries included verbatim), the final relative residual in the unweighted
/// infinity norm, and how it was obtained.
pub struct SolveReport {
    pub values: Vec<f64>,
    pub residual: f64,
    pub method: Method,
    pub iterations: usize,
}

pub const DEFAULT_TOLERANCE: f64 = 1e-12;
const DENSE_CUTOFF: usize = 2_500;
const BAND_BUDGET: usize = 35_000_000;
const MAX_REFINEMENTS: usize = 6;

/// Solve g(i) = tilt * sum_j r(i,j) g(j) + rhs(i) on the non-fixed states,
/// g = fixed elsewhere. `fixed` lists (state, value) pairs. The kernel is
/// never materialized beyond the factorization the backend needs.
pub fn solve_potential<C: ChainView>(
    chain: &C,
    fixed: &[(usize, f64)],
    rhs: Rhs,
    tilt: f64,
    tolerance: f64,
) -> Result<SolveReport, SolverError> {
    let len = chain.len();
    let mut is_fixed = vec![false; len];
    let mut values = vec![0.0f64; len];
    for &(i, v) in fixed {
        if i >= len {
            return Err(SolverError::BadInstance(format!(
                "fixed state {i} out of range (len {len})"
            )));
        }
        if is_fixed[i] && values[i] != v {
            return Err(SolverError::BadInstance(format!(
                "state {i} fixed to two different values"
            )));
        }
        is_fixed[i] = true;
        values[i] = v;
    }

    // Compact interior indexing.
    let mut position = vec![usize::MAX; len];
    let mut interior: Vec<usize> = Vec::with_capacity(len - fixed.len().min(len));
    for i in 0..len {
        if !is_fixed[i] {
            position[i] = interior.len();
            interior.push(i);
        }
    }
    let m = interior.len();
    if m == 0 {
        return Ok(SolveReport {
            values,
            residual: 0.0,
            method: Method::DenseLu,
            iterations: 0,
        });
    }

    // Move fixed-neighbor terms to the right-hand side.
    let mut b = vec![0.0f64; m];
    let mut bandwidth = 0usize;
    for (row, &i) in interior.iter().enumerate() {
        let mut bi = rhs.at(i);
        chain.for_each_neighbor(i, &mut |j, r| {
            if is_fixed[j] {
                bi += tilt * r * values[j];
            } else {
                bandwidth = bandwidth.max(row.abs_diff(position[j]));
            }
        });
        b[row] = bi;
    }

    let mut backend = pick_backend(chain, &interior, &position, tilt, bandwidth, m)?;
    let mut x = backend.solve(&b)?;

    // Enforce the unweighted residual contract with iterative refinement.
    let mut iterations = backend.iterations();
    let mut residual = f64::INFINITY;
    for round in 0..=MAX_REFINEMENTS {
        for (row, &i) in interior.iter().enumerate() {
            values[i] = x[row];
        }
        let (res_norm, res) = residual_field(chain, &interior, &position, &values, &rhs, tilt, &x);
        residual = res_norm;
        if residual <= tolerance || round == MAX_REFINEMENTS {
            break;
        }
        let dx = backend.solve(&res)?;
        iterations += backend.iterations();
        for row in 0..m {
            x[row] += dx[row];
        }
    }
    if residual > tolerance {
        return Err(SolverError::NonConvergence { residual });
    }
    Ok(SolveReport {
        values,
        residual,
        method: backend.method(),
        iterations,
    })
}

/// Relative residual (infinity norm over interior rows, scaled by
/// max(1, |g|_inf)) plus the raw per-row defect for refinement.
fn residual_field<C: ChainView>(
    chain: &C,
    interior: &[usize],
    position: &[usize],
    values: &[f64],
    rhs: &Rhs,
    tilt: f64,
    x: &[f64],
) -> (f64, Vec<f64>) {
    let mut res = vec![0.0f64; interior.len()];
    let mut worst = 0.0f64;
    let scale = x.iter().fold(1.0f64, |a, &v| a.max(v.abs()));
    for (row, &i) in interior.iter().enumerate() {
        let mut acc = 0.0f64;
        chain.for_each_neighbor(i, &mut |j, r| {
            acc += r * values[j];
        });
        let defect = rhs.at(i) + tilt * acc - values[i];
        res[row] = defect;
        worst = worst.max(defect.abs());
    }
    let _ = position;
    (worst / scale, res)
}

trait Backend {
    fn solve(&mut self, b: &[f64]) -> Result<Vec<f64>, SolverError>;
    fn method(&self) -> Method;
    fn iterations(&self) -> usize;
}

fn pick_backend<C: ChainView>(
    chain: &C,
    interior: &[usize],
    position: &[usize],
    tilt: f64,
    bandwidth: usize,
    m: usize,
) -> Result<Box<dyn Backend>, SolverError> {
    if bandwidth <= 1 {
        if tilt == 1.0 {
            if let Ok(t) = FluxTridiagonal::build(chain, interior, position) {
                return Ok(Box::new(t));
            }
        }
        match Tridiagonal::factor(chain, interior, position, tilt) {
            Ok(t) => return Ok(Box::new(t)),
            Err(e) if m > DENSE_CUTOFF => return Err(e),
            Err(_) => return Ok(Box::new(DenseLu::factor(chain, interior, position, tilt)?)),
        }
    }
    if m <= DENSE_CUTOFF {
        return Ok(Box::new(DenseLu::factor(chain, interior, position, tilt)?));
    }
    if bandwidth <= m / 8 && (2 * bandwidth + 1).saturating_mul(m) <= BAND_BUDGET {
        match BandLu::factor(chain, interior, position, tilt, bandwidth) {
            Ok(b) => return Ok(Box::new(b)),
            // A collapsed pivot means the leading blocks go numerically
            // singular; hand the system to the iterative backend.
            Err(_) => {}
        }
    }
    Ok(Box::new(ConjGrad::build(chain, interior, position, tilt)))
}

/// Untilted bandwidth-1 systems solved in flux variables. On a line whose
/// rates sum to one at every state, multiplying row i of (I - P)x = b by the
/// measure pi_i turns it into a conservation law for the edge flux
/// psi_j = c_j (x_{j-1} - x_j), where c_j is the edge conductance
/// pi * rate: psi_{j+1} - psi_j = pi_i b_i. Fluxes are then running sums of
/// pi b and x is recovered by a second running sum of psi / c. For b >= 0
/// every operation adds nonnegative terms, so components keep full relative
/// accuracy across the chain's astronomic measure range; Gaussian
/// elimination on the same systems amplifies rounding through the measure
/// peak in either sweep direction and collapses.
struct FluxTridiagonal {
    blocks: Vec<FluxBlock>,
}

struct FluxBlock {
    /// First interior row of the block.
    start: usize,
    /// Edge conductances: slot j couples block states j-1 and j. Slot 0 is
    /// the edge to an absorbed left neighbor (present iff `left`), slot L
    /// the edge to an absorbed right neighbor (present iff `right`).
    cond: Vec<f64>,
    /// Measure of each block state.
    weight: Vec<f64>,
    left: bool,
    right: bool,
}

impl FluxTridiagonal {
    fn build<C: ChainView>(
        chain: &C,
        interior: &[usize],
        position: &[usize],
    ) -> Result<Self, SolverError> {
        let m = interior.len();
        let len = chain.len();
        let mut ends = Vec::new();
        let mut start = 0usize;
        for row in 1..=m {
            if row == m || interior[row] != interior[row - 1] + 1 {
                ends.push((start, row - 1));
                start = row;
            }
        }
        let mut blocks = Vec::with_capacity(ends.len());
        for (a, b) in ends {
            let l = b - a + 1;
            let left = interior[a] > 0;
            let right = interior[b] + 1 < len;
            if !left && !right {
                return Err(SolverError::BadInstance(
                    "potential equation with no absorbing boundary is singular".into(),
                ));
            }
            let mut cond = vec![0.0f64; l + 1];
            let mut weight = vec![0.0f64; l];
            for (k, &i) in interior[a..=b].iter().enumerate() {
                let ln_pi = chain.ln_measure_at(i);
                weight[k] = ln_pi.exp();
                let mut down = 0.0f64;
                let mut up = 0.0f64;
                let mut path = true;
                chain.for_each_neighbor(i, &mut |j, r| {
                    if j + 1 == i && down == 0.0 {
                        down = r;
                    } else if j == i + 1 && up == 0.0 {
                        up = r;
                    } else {
                        path = false;
                    }
                });
                // Flux variables are exact only on a path: one edge per
                // direction, each to the index-adjacent state, rates
                // conserving probability. Anything else falls back to
                // elimination.
                if !path || (down + up - 1.0).abs() > 1e-13 {
                    return Err(SolverError::BadInstance(
                        "chain is not a path in index order".into(),
                    ));
                }
                // Edge below, written with this state's rate (reversibility
                // gives the same number from either endpoint).
                if k > 0 || left {
                    cond[k] = (ln_pi + down.ln()).exp();
                }
                if k == l - 1 && right {
                    cond[l] = (ln_pi + up.ln()).exp();
                }
            }
            let lo = if left { 0 } else { 1 };
            let hi = if right { l } else { l - 1 };
            if cond[lo..=hi].iter().any(|&c| c == 0.0) {
                return Err(SolverError::BadInstance(
                    "zero conductance on a coupled edge".into(),
                ));
            }
            let _ = position;
            blocks.push(FluxBlock {
                start: a,
                cond,
                weight,
                left,
                right,
            });
        }
        Ok(FluxTridiagonal { blocks })
    }
}

impl Backend for FluxTridiagonal {
    fn solve(&mut self, b: &[f64]) -> Result<Vec<f64>, SolverError> {
        let mut x = vec![0.0f64; b.len()];
        for blk in &self.blocks {
            let l = blk.weight.len();
            let rows = blk.start..blk.start + l;
            let source: Vec<f64> = b[rows.clone()]
                .iter()
                .zip(&blk.weight)
                .map(|(bi, w)| bi * w)
                .collect();
            let xs = &mut x[rows];
            match (blk.left, blk.right) {
                (true, true) => {
                    // psi_j = psi_0 + prefix(source); psi_0 from the zero
                    // boundary condition at the right end. Nonnegative
                    // sources make psi nondecreasing, so it changes sign at
                    // one watershed edge; accumulating x from the nearer
                    // boundary on each side keeps every component a sum of
                    // same-sign terms (the unidirectional sum cancels
                    // catastrophically on whichever side the solution
                    // decreases).
                    let mut prefix = 0.0f64;
                    let mut num = 0.0f64;
                    let mut den = 0.0f64;
                    for j in 0..=l {
                        num += prefix / blk.cond[j];
                        den += 1.0 / blk.cond[j];
                        if j < l {
                            prefix += source[j];
                        }
                    }
                    let psi0 = -num / den;
                    let mut psi = Vec::with_capacity(l + 1);
                    let mut prefix = 0.0f64;
                    for j in 0..=l {
                        psi.push(psi0 + prefix);
                        if j < l {
                            prefix += source[j];
                        }
                    }
                    let watershed = psi.iter().position(|&v| v >= 0.0).unwrap_or(l + 1);
                    let mut acc = 0.0f64;
                    for j in 0..l.min(watershed) {
                        acc -= psi[j] / blk.cond[j];
                        xs[j] = acc;
                    }
                    let mut acc = 0.0f64;
                    for j in (watershed..l).rev() {
                        acc += psi[j + 1] / blk.cond[j + 1];
                        xs[j] = acc;
                    }
                }
                (true, false) => {
                    // No right edge: fluxes are negated tail sums and x
                    // accumulates outward from the absorbing side.
                    let mut tail = 0.0f64;
                    let tails: Vec<f64> = {
                        let mut t = vec![0.0f64; l];
                        for j in (0..l).rev() {
                            tail += source[j];
                            t[j] = tail;
                        }
                        t
                    };
                    let mut acc = 0.0f64;
                    for j in 0..l {
                        acc += tails[j] / blk.cond[j];
                        xs[j] = acc;
                    }
                }
                (false, true) => {
                    // Mirror image: fluxes are prefix sums, x accumulates
                    // from the right boundary leftward.
                    let mut prefixes = vec![0.0f64; l + 1];
                    let mut p = 0.0f64;
                    for j in 0..l {
                        p += source[j];
                        prefixes[j + 1] = p;
                    }
                    let mut acc = 0.0f64;
                    for j in (0..l).rev() {
                        acc += prefixes[j + 1] / blk.cond[j + 1];
                        xs[j] = acc;
                    }
                }
                (false, false) => unreachable!("rejected at build time"),
            }
            if xs.iter().any(|v| !v.is_finite()) {
                return Err(SolverError::OutOfDomain(
                    "measure range exceeds double precision".into(),
                ));
            }
        }
        Ok(x)
    }

    fn method(&self) -> Method {
        Method::Tridiagonal
    }

    fn iterations(&self) -> usize {
        0
    }
}

/// Thomas elimination for tilted bandwidth-1 systems. Pivots of the
/// M-matrix I - tilt*P must stay positive; elimination runs per decoupled
/// block, starting from a line end with no absorbing neighbor where the
/// pivots stay bounded below for longer. A collapsed pivot surfaces as an
/// error so the caller can fall back or refuse.
struct Tridiagonal {
    diag: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    /// (first row, last row, eliminate-downward) per decoupled block.
    blocks: Vec<(usize, usize, bool)>,
}

impl Tridiagonal {
    fn factor<C: ChainView>(
        chain: &C,
        interior: &[usize],
        position: &[usize],
        tilt: f64,
    ) -> Result<Self, SolverError> {
        let m = interior.len();
        let len = chain.len();
        let mut diag = vec![1.0f64; m];
        let mut lower = vec![0.0f64; m];
        let mut upper = vec![0.0f64; m];
        for (row, &i) in interior.iter().enumerate() {
            chain.for_each_neighbor(i, &mut |j, r| {
                let pj = position[j];
                if pj == usize::MAX {
                    return;
                }
                if pj == row {
                    diag[row] -= tilt * r;
                } else if pj + 1 == row {
                    lower[row] -= tilt * r;
                } else if pj == row + 1 {
                    upper[row] -= tilt * r;
                } else {
                    unreachable!("bandwidth-1 structure violated");
                }
            });
        }
        // Decoupled blocks are maximal runs of adjacent interior states.
        let mut blocks = Vec::new();
        let mut start = 0usize;
        for row in 1..=m {
            let joined = row < m && interior[row] == interior[row - 1] + 1 && lower[row] != 0.0;
            if !joined {
                let free_low = interior[start] == 0;
                let free_high = interior[row - 1] == len - 1;
                blocks.push((start, row - 1, free_high && !free_low));
                start = row;
            }
        }
        let fail = || {
            SolverError::OutOfDomain(
                "tridiagonal factorization lost positivity (tilt too large)".into(),
            )
        };
        for &(a, b, downward) in &blocks {
            if downward {
                for row in (a..b).rev() {
                    let f = upper[row] / diag[row + 1];
                    upper[row] = f;
                    diag[row] -= f * lower[row + 1];
                    if diag[row] <= 0.0 || !diag[row].is_finite() {
                        return Err(fail());
                    }
                }
            } else {
                for row in a + 1..=b {
                    let f = lower[row] / diag[row - 1];
                    lower[row] = f;
                    diag[row] -= f * upper[row - 1];
                    if diag[row] <= 0.0 || !diag[row].is_finite() {
                        return Err(fail());
                    }
                }
            }
        }
        Ok(Tridiagonal {
            diag,
            lower,
            upper,
            blocks,
        })
    }
}

impl Backend for Tridiagonal {
    fn solve(&mut self, b: &[f64]) -> Result<Vec<f64>, SolverError> {
        let mut x = b.to_vec();
        for &(a, b_end, downward) in &self.blocks {
            if downward {
                for row in (a..b_end).rev() {
                    let t = self.upper[row] * x[row + 1];
                    x[row] -= t;
                }
                x[a] /= self.diag[a];
                for row in a + 1..=b_end {
                    x[row] = (x[row] - self.lower[row] * x[row - 1]) / self.diag[row];
                }
            } else {
                for row in a + 1..=b_end {
                    let t = self.lower[row] * x[row - 1];
                    x[row] -= t;
                }
                x[b_end] /= self.diag[b_end];
                for row in (a..b_end).rev() {
                    x[row] = (x[row] - self.upper[row] * x[row + 1]) / self.diag[row];
                }
            }
        }
        Ok(x)
    }

    fn method(&self) -> Method {
        Method::Tridiagonal
    }

    fn iterations(&self) -> usize {
        0
    }
}

struct DenseLu {
    lu: nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
}

impl DenseLu {
    fn factor<C: ChainView>(
        chain: &C,
        interior: &[usize],
        position: &[usize],
        tilt: f64,
    ) -> Result<Self, SolverError> {
        let m = interior.len();
        let mut a = DMatrix::<f64>::identity(m, m);
        for (row, &i) in interior.iter().enumerate() {
            chain.for_each_neighbor(i, &mut |j, r| {
                let pj = position[j];
                if pj != usize::MAX {
                    a[(row, pj)] -= tilt * r;
                }
            });
        }
        Ok(DenseLu { lu: a.lu() })
    }
}

impl Backend for DenseLu {
    fn solve(&mut self, b: &[f64]) -> Result<Vec<f64>, SolverError> {
        let rhs = DVector::from_column_slice(b);
        let x = self
            .lu
            .solve(&rhs)
            .ok_or_else(|| SolverError::OutOfDomain("singular dense system".into()))?;
        Ok(x.data.into())
    }

    fn method(&self) -> Method {
        Method::DenseLu
    }

    fn iterations(&self) -> usize {
        0
    }
}

/// Banded LU without pivoting; admissible because the matrix is an
/// irreducibly diagonally dominant M-matrix for tilt <= 1 (positivity of the
/// pivots is still checked, which doubles as the tilt guard).
struct BandLu {
    band: Vec<f64>,
    bw: usize,
    m: usize,
}

impl BandLu {
    #[inline]
    fn idx(&self, row: usize, col: usize) -> usize {
        row * (2 * self.bw + 1) + (col + self.bw - row)
    }

    fn factor<C: ChainView>(
        chain: &C,
        interior: &[usize],
        position: &[usize],
        tilt: f64,
        bw: usize,
    ) -> Result<Self, SolverError> {
        let m = interior.len();
        let width = 2 * bw + 1;
        let mut this = BandLu {
            band: vec![0.0f64; m * width],
            bw,
            m,
        };
        for row in 0..m {
            let at = this.idx(row, row);
            this.band[at] = 1.0;
        }
        for (row, &i) in interior.iter().enumerate() {
            chain.for_each_neighbor(i, &mut |j, r| {
                let pj = position[j];
                if pj != usize::MAX {
                    let at = this.idx(row, pj);
                    this.band[at] -= tilt * r;
                }
            });
        }
        for col in 0..m {
            let pivot = this.band[this.idx(col, col)];
            if pivot <= 0.0 || !pivot.is_finite() {
                return Err(SolverError::OutOfDomain(
                    "band factorization lost positivity (tilt too large)".into(),
                ));
            }
            for row in col + 1..(col + bw + 1).min(m) {
                let at = this.idx(row, col);
                let f = this.band[at] / pivot;
                if f == 0.0 {
                    continue;
                }
                this.band[at] = f;
                for k in col + 1..(col + bw + 1).min(m) {
                    let u = this.band[this.idx(col, k)];
                    if u != 0.0 {
                        let t = this.idx(row, k);
                        this.band[t] -= f * u;
                    }
                }
            }
        }
        Ok(this)
    }
}

impl Backend for BandLu {
    fn solve(&mut self, b: &[f64]) -> Result<Vec<f64>, SolverError> {
        let m = self.m;
        let bw = self.bw;
        let mut x = b.to_vec();
        for col in 0..m {
            let xc = x[col];
            if xc != 0.0 {
                for row in col + 1..(col + bw + 1).min(m) {
                    x[row] -= self.band[self.idx(row, col)] * xc;
                }
            }
        }
        for row in (0..m).rev() {
            let mut acc = x[row];
            for col in row + 1..(row + bw + 1).min(m) {
                acc -= self.band[self.idx(row, col)] * x[col];
            }
            x[row] = acc / self.band[self.idx(row, row)];
        }
        Ok(x)
    }

    fn method(&self) -> Method {
        Method::BandLu
    }

    fn iterations(&self) -> usize {
        0
    }
}

/// Conjugate gradients on the symmetrized interior system. Detailed balance
/// makes sqrt(r(i,j) r(j,i)) a symmetric kernel; the similarity transform by
/// sqrt(Q) maps the potential equation onto it, and adjacent-state measure
/// ratios stay moderate so the weights never overflow.
struct ConjGrad {
    row_ptr: Vec<usize>,
    col: Vec<u32>,
    val: Vec<f64>,
    /// sqrt(Q_i) per interior row.
    weight: Vec<f64>,
    tilt: f64,
    iterations: usize,
}

impl ConjGrad {
    fn build<C: ChainView>(chain: &C, interior: &[usize], position: &[usize], tilt: f64) -> Self {
        let m = interior.len();
        let mut row_ptr = Vec::with_capacity(m + 1);
        let mut col: Vec<u32> = Vec::new();
        let mut val: Vec<f64> = Vec::new();
        let mut weight = vec![0.0f64; m];
        row_ptr.push(0);
        for (row, &i) in interior.iter().enumerate() {
            let half_ln_qi = 0.5 * chain.ln_measure_at(i);
            weight[row] = half_ln_qi.exp();
            chain.for_each_neighbor(i, &mut |j, r| {
                let pj = position[j];
                if pj != usize::MAX {
                    let s = r * (0.5 * (chain.ln_measure_at(i) - chain.ln_measure_at(j))).exp();
                    col.push(pj as u32);
                    val.push(s);
                }
            });
            row_ptr.push(col.len());
        }
        ConjGrad {
            row_ptr,
            col,
            val,
            weight,
            tilt,
            iterations: 0,
        }
    }

    /// y = (I - tilt*S) x.
    fn apply(&self, x: &[f64], y: &mut [f64]) {
        for row in 0..x.len() {
            let mut acc = 0.0f64;
            for k in self.row_ptr[row]..self.row_ptr[row + 1] {
                acc += self.val[k] * x[self.col[k] as usize];
            }
            y[row] = x[row] - self.tilt * acc;
        }
    }
}

const CG_MAX_ITERS: usize = 200_000;

impl Backend for ConjGrad {
    fn solve(&mut self, b: &[f64]) -> Result<Vec<f64>, SolverError> {
        let m = b.len();
        // Transform the right-hand side into the symmetric variables.
        let bz: Vec<f64> = (0..m).map(|i| b[i] * self.weight[i]).collect();
        let norm_b = bz.iter().map(|v| v * v).sum::<f64>().sqrt();
        let mut z = vec![0.0f64; m];
        if norm_b == 0.0 {
            return Ok(z);
        }
        let target = norm_b * 1e-15;
        let mut r = bz.clone();
        let mut p = bz;
        let mut ap = vec![0.0f64; m];
        let mut rs = r.iter().map(|v| v * v).sum::<f64>();
        let mut best = rs;
        let mut stall = 0usize;
        let mut iter = 0usize;
        // Run to the roundoff floor; stagnation hands control back to the
        // outer refinement loop, which owns the accuracy contract.
        while rs.sqrt() > target && iter < CG_MAX_ITERS && stall < 100 {
            self.apply(&p, &mut ap);
            let pap: f64 = p.iter().zip(&ap).map(|(a, b)| a * b).sum();
            if pap <= 0.0 || !pap.is_finite() {
                return Err(SolverError::OutOfDomain(
                    "symmetrized system not positive definite (tilt too large)".into(),
                ));
            }
            let alpha = rs / pap;
            for i in 0..m {
                z[i] += alpha * p[i];
                r[i] -= alpha * ap[i];
            }
            let rs_new = r.iter().map(|v| v * v).sum::<f64>();
            let beta = rs_new / rs;
            rs = rs_new;
            if rs < best * 0.9999 {
                best = rs;
                stall = 0;
            } else {
                stall += 1;
            }
            for i in 0..m {
                p[i] = r[i] + beta * p[i];
            }
            iter += 1;
        }
        self.iterations = iter;
        Ok((0..m).map(|i| z[i] / self.weight[i]).collect())
    }

    fn method(&self) -> Method {
        Method::ConjugateGradient
    }

    fn iterations(&self) -> usize {
        self.iterations
    }
}
