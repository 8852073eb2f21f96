use crate::linsys::{solve_potential, Rhs, DEFAULT_TOLERANCE};
use crate::potential::hit_field;
use crate::view::ChainView;
use crate::SolverError;

/// Value and first two derivatives in the transform variable at u = 0.
#[derive(Clone, Copy, Debug)]
pub struct Jet2 {
    pub v: f64,
    pub d1: f64,
    pub d2: f64,
}

impl Jet2 {
    /// Second-order evaluation; relative truncation error is of the order
    /// of (u * excursion length)^3.
    pub fn eval(&self, u: f64) -> f64 {
        self.v + u * self.d1 + 0.5 * u * u * self.d2
    }
}

/// Exact killed transform E[e^{u tau_x}; tau_x < tau_J] from y, by a tilted
/// linear solve. Starts on the boundary report their plain boundary value
/// (1 on x, 0 on J), matching the hitting-probability convention at u = 0.
/// For u > 0 the killed spectral radius is estimated by the power method
/// and starts at or beyond the threshold are refused.
pub fn laplace_g<C: ChainView>(
    chain: &C,
    y: usize,
    x: usize,
    j: &[usize],
    u: f64,
) -> Result<f64, SolverError> {
    if j.contains(&x) {
        return Err(SolverError::BadInstance(
            "transform target lies in the taboo set".into(),
        ));
    }
    if y == x {
        return Ok(1.0);
    }
    if j.contains(&y) {
        return Ok(0.0);
    }
    let field = laplace_field(chain, &[x], j, u)?;
    let g = field[y];
    if u <= 0.0 {
        clamp_transform(g)
    } else {
        Ok(g)
    }
}

/// Same transform with a forced first step, the return/escape convention:
/// E[e^{u tau}; the walk started at y reaches `targets` strictly after time
/// zero and before `taboo`]. y itself may belong to either set.
pub fn laplace_g_first_step<C: ChainView>(
    chain: &C,
    y: usize,
    targets: &[usize],
    taboo: &[usize],
    u: f64,
) -> Result<f64, SolverError> {
    let field = laplace_field(chain, targets, taboo, u)?;
    let mut acc = 0.0f64;
    chain.for_each_neighbor(y, &mut |w, r| acc += r * field[w]);
    let g = u.exp() * acc;
    if u <= 0.0 {
        clamp_transform(g)
    } else {
        Ok(g)
    }
}

fn laplace_field<C: ChainView>(
    chain: &C,
    targets: &[usize],
    taboo: &[usize],
    u: f64,
) -> Result<Vec<f64>, SolverError> {
    if targets.is_empty() {
        return Err(SolverError::BadInstance("empty target set".into()));
    }
    let tilt = u.exp();
    if u > 0.0 {
        if chain.len() > 100_000 {
            return Err(SolverError::OutOfDomain(
                "positive transform parameters need a spectral radius check, \
                 infeasible at this size; use the renewal evaluator"
                    .into(),
            ));
        }
        let radius = killed_radius(chain, targets, taboo);
        if tilt * radius >= 1.0 - 1e-9 {
            return Err(SolverError::OutOfDomain(format!(
                "transform parameter {u} at or beyond the killed threshold \
                 (radius estimate {radius})"
            )));
        }
    }
    let mut fixed: Vec<(usize, f64)> = Vec::with_capacity(targets.len() + taboo.len());
    fixed.extend(targets.iter().map(|&t| (t, 1.0)));
    fixed.extend(taboo.iter().map(|&t| (t, 0.0)));
    let values = solve_potential(chain, &fixed, Rhs::Zero, tilt, DEFAULT_TOLERANCE)?.values;
    // Past the threshold the algebraic solution turns negative somewhere;
    // the radius estimate converges from below, so double-check here.
    if u > 0.0 && values.iter().any(|&v| !(v >= 0.0) || !v.is_finite()) {
        return Err(SolverError::OutOfDomain(
            "killed transform solution left the cone: parameter beyond threshold".into(),
        ));
    }
    Ok(values)
}

/// Power-method estimate of the spectral radius of the kernel killed on
/// `targets` and `taboo`. Converges from below for the nonnegative kernel;
/// a small safety margin is applied at the call site.
fn killed_radius<C: ChainView>(chain: &C, targets: &[usize], taboo: &[usize]) -> f64 {
    let len = chain.len();
    let mut killed = vec![false; len];
    for &s in targets.iter().chain(taboo) {
        killed[s] = true;
    }
    let mut v = vec![0.0f64; len];
    for (i, k) in killed.iter().enumerate() {
        if !k {
            v[i] = 1.0;
        }
    }
    let mut w = vec![0.0f64; len];
    // The walk kernel is bipartite, so single-step growth factors
    // oscillate; the geometric mean of two consecutive factors converges.
    // No early exit: the infinity norm plateaus at 1 while the killing
    // still propagates, which a stopping rule would mistake for
    // convergence.
    let mut prev_norm = f64::NAN;
    let mut estimate = 0.0f64;
    for _ in 0..800 {
        let mut norm = 0.0f64;
        for i in 0..len {
            if killed[i] {
                continue;
            }
            let mut acc = 0.0f64;
            chain.for_each_neighbor(i, &mut |z, r| {
                if !killed[z] {
                    acc += r * v[z];
                }
            });
            w[i] = acc;
            norm = norm.max(acc);
        }
        if norm == 0.0 {
            return 0.0;
        }
        for i in 0..len {
            if !killed[i] {
                v[i] = w[i] / norm;
            }
        }
        if prev_norm.is_finite() {
            estimate = (norm * prev_norm).sqrt();
        }
        prev_norm = norm;
    }
    estimate
}

/// The three coefficient fields of the transform's expansion at u = 0:
/// g0 is the harmonic field of (targets, taboo), and
/// (I - P) g1 = g0, (I - P) g2 = 2 g1 - g0 off the boundary with zero
/// boundary values. g1 is E[tau; event] and g2 is E[tau^2; event].
pub fn laplace_jet_fields<C: ChainView>(
    chain: &C,
    targets: &[usize],
    taboo: &[usize],
) -> Result<[Vec<f64>; 3], SolverError> {
    let g0 = hit_field(chain, targets, taboo)?;
    let fixed: Vec<(usize, f64)> = targets
        .iter()
        .chain(taboo)
        .map(|&t| (t, 0.0))
        .collect();
    let g1 = solve_potential(chain, &fixed, Rhs::Field(&g0), 1.0, DEFAULT_TOLERANCE)?.values;
    let rhs2: Vec<f64> = g1.iter().zip(&g0).map(|(a, b)| 2.0 * a - b).collect();
    let g2 = solve_potential(chain, &fixed, Rhs::Field(&rhs2), 1.0, DEFAULT_TOLERANCE)?.values;
    Ok([g0, g1, g2])
}

/// First-step jet of the transform from y (tau > 0 convention): the
/// expansion of e^u sum_w r(y,w) g_u(w) at u = 0.
pub fn laplace_jet_first_step<C: ChainView>(
    chain: &C,
    y: usize,
    targets: &[usize],
    taboo: &[usize],
) -> Result<Jet2, SolverError> {
    let [g0, g1, g2] = laplace_jet_fields(chain, targets, taboo)?;
    let (mut v, mut d1, mut d2) = (0.0f64, 0.0f64, 0.0f64);
    chain.for_each_neighbor(y, &mut |w, r| {
        v += r * g0[w];
        d1 += r * (g1[w] + g0[w]);
        d2 += r * (g2[w] + 2.0 * g1[w] + g0[w]);
    });
    Ok(Jet2 { v, d1, d2 })
}

/// Maximum |u| accepted by the renewal evaluator; far above every use at
/// scale (where u is an inverse mean time) and far below where the cubic
/// truncation error of the excursion jets could surface.
pub const TINY_U_LIMIT: f64 = 1e-6;

/// Killed transform at asymptotically small |u| by renewal at the start:
/// excursions from y either return to y or settle the event, so
/// G = a_S(u) / (1 - a_R(u)) with both excursion transforms evaluated as
/// second-order jets. The denominator's constant term 1 - a_R(0) is the
/// escape probability, computed directly as a positive sum so that nothing
/// like 1 - (1 - 1e-70) is ever formed.
pub fn laplace_tiny<C: ChainView>(
    chain: &C,
    y: usize,
    x: usize,
    j: &[usize],
    u: f64,
) -> Result<f64, SolverError> {
    if u.abs() > TINY_U_LIMIT {
        return Err(SolverError::OutOfDomain(format!(
            "renewal evaluator restricted to |u| <= {TINY_U_LIMIT:e}, got {u:e}"
        )));
    }
    if y == x || j.contains(&y) || j.contains(&x) {
        return Err(SolverError::BadInstance(
            "renewal start must lie outside the target and taboo sets".into(),
        ));
    }
    let mut taboo_s: Vec<usize> = j.to_vec();
    taboo_s.push(y);
    let s_jet = laplace_jet_first_step(chain, y, &[x], &taboo_s)?;
    let mut taboo_r: Vec<usize> = j.to_vec();
    taboo_r.push(x);
    let r_jet = laplace_jet_first_step(chain, y, &[y], &taboo_r)?;
    // 1 - a_R(0) as a positive sum: the escape field towards {x} union J.
    let mut union: Vec<usize> = j.to_vec();
    union.push(x);
    let esc = hit_field(chain, &union, &[y])?;
    let mut a0 = 0.0f64;
    chain.for_each_neighbor(y, &mut |w, r| a0 += r * esc[w]);
    let den = a0 - u * r_jet.d1 - 0.5 * u * u * r_jet.d2;
    if den <= 0.0 {
        return Err(SolverError::OutOfDomain(
            "renewal denominator vanished: u beyond the killed threshold".into(),
        ));
    }
    Ok(s_jet.eval(u) / den)
}

/// Residual of the decomposition of the transform at visits to `pivot`:
/// G^y_{x,J} = G^y_{x,J+pivot}
///           + G^y_{pivot,J+x} * G^pivot_{x,J+pivot} / (1 - R^pivot_{J+x}),
/// where R is the pivot's return transform. All five components come from
/// exact solves; the residual is |left - right|.
pub fn laplace_decomposition_residual<C: ChainView>(
    chain: &C,
    y: usize,
    x: usize,
    j: &[usize],
    pivot: usize,
    u: f64,
) -> Result<f64, SolverError> {
    if pivot == x || pivot == y || j.contains(&pivot) {
        return Err(SolverError::BadInstance(
            "decomposition pivot must be distinct from start, target, taboo".into(),
        ));
    }
    let left = laplace_g(chain, y, x, j, u)?;
    let mut j_pivot: Vec<usize> = j.to_vec();
    j_pivot.push(pivot);
    let direct = laplace_g(chain, y, x, &j_pivot, u)?;
    let mut j_x: Vec<usize> = j.to_vec();
    j_x.push(x);
    let to_pivot = laplace_g(chain, y, pivot, &j_x, u)?;
    let from_pivot = laplace_g_first_step(chain, pivot, &[x], &j_pivot, u)?;
    let ret = laplace_g_first_step(chain, pivot, &[pivot], &j_x, u)?;
    if ret >= 1.0 {
        return Err(SolverError::OutOfDomain(
            "pivot return transform at or above one".into(),
        ));
    }
    let right = direct + to_pivot * from_pivot / (1.0 - ret);
    Ok((left - right).abs())
}

fn clamp_transform(g: f64) -> Result<f64, SolverError> {
    if (-1e-12..=1.0 + 1e-12).contains(&g) {
        Ok(g.clamp(0.0, 1.0))
    } else {
        Err(SolverError::NonConvergence {
            residual: (g - g.clamp(0.0, 1.0)).abs(),
        })
    }
}
