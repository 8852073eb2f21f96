use crate::linsys::{solve_potential, Rhs, DEFAULT_TOLERANCE};
use crate::view::ChainView;
use crate::SolverError;

/// A hitting problem: start state, target set A, taboo set B.
#[derive(Clone, Debug)]
pub struct HitSpec<'a> {
    pub start: usize,
    pub targets: &'a [usize],
    pub taboo: &'a [usize],
}

impl HitSpec<'_> {
    fn validate(&self, len: usize) -> Result<(), SolverError> {
        if self.targets.is_empty() {
            return Err(SolverError::BadInstance("empty target set".into()));
        }
        for &s in self.targets.iter().chain(self.taboo).chain([&self.start]) {
            if s >= len {
                return Err(SolverError::BadInstance(format!(
                    "state {s} out of range (len {len})"
                )));
            }
        }
        if self.targets.iter().any(|t| self.taboo.contains(t)) {
            return Err(SolverError::BadInstance(
                "target and taboo sets intersect".into(),
            ));
        }
        Ok(())
    }
}

/// Harmonic field of the hitting problem: 1 on `targets`, 0 on `taboo`,
/// mean-value property elsewhere. Entry i is P(hit targets before taboo)
/// from i for interior states and the boundary value on the sets themselves.
pub fn hit_field<C: ChainView>(
    chain: &C,
    targets: &[usize],
    taboo: &[usize],
) -> Result<Vec<f64>, SolverError> {
    let mut fixed: Vec<(usize, f64)> = Vec::with_capacity(targets.len() + taboo.len());
    fixed.extend(targets.iter().map(|&t| (t, 1.0)));
    fixed.extend(taboo.iter().map(|&t| (t, 0.0)));
    let report = solve_potential(chain, &fixed, Rhs::Zero, 1.0, DEFAULT_TOLERANCE)?;
    Ok(report.values)
}

/// P(tau_A < tau_B) from the start state, with the plain boundary
/// convention: a start inside A or B reports its boundary value. An empty
/// taboo set gives 1 by irreducibility.
pub fn hit_prob<C: ChainView>(chain: &C, spec: &HitSpec) -> Result<f64, SolverError> {
    spec.validate(chain.len())?;
    if spec.taboo.is_empty() {
        return Ok(1.0);
    }
    let field = hit_field(chain, spec.targets, spec.taboo)?;
    Ok(clamp_probability(field[spec.start])?)
}

/// P(tau_J < tau_x^+) from x: the escape probability, by explicit
/// first-step decomposition through the harmonic field of (J, {x}).
pub fn escape_prob<C: ChainView>(chain: &C, x: usize, j: &[usize]) -> Result<f64, SolverError> {
    if j.contains(&x) {
        return Err(SolverError::BadInstance(
            "escape start lies in the target set".into(),
        ));
    }
    let spec = HitSpec {
        start: x,
        targets: j,
        taboo: &[x],
    };
    spec.validate(chain.len())?;
    let field = hit_field(chain, j, &[x])?;
    let mut acc = 0.0f64;
    chain.for_each_neighbor(x, &mut |z, r| acc += r * field[z]);
    clamp_probability(acc)
}

/// Q(x) * escape probability. Prefer `capacity_ln` when Q(x) underflows.
pub fn capacity<C: ChainView>(chain: &C, x: usize, j: &[usize]) -> Result<f64, SolverError> {
    Ok(chain.ln_measure_at(x).exp() * escape_prob(chain, x, j)?)
}

/// ln capacity, stable for states of astronomically small measure.
pub fn capacity_ln<C: ChainView>(chain: &C, x: usize, j: &[usize]) -> Result<f64, SolverError> {
    Ok(chain.ln_measure_at(x) + escape_prob(chain, x, j)?.ln())
}

/// Dirichlet form of an arbitrary field: sum over unordered edges of
/// Q(i) r(i,j) (f_i - f_j)^2. Nonnegative; equals the capacity when f is
/// the solved harmonic function of the escape problem.
pub fn dirichlet_form<C: ChainView>(chain: &C, f: &[f64]) -> f64 {
    let mut acc = 0.0f64;
    for i in 0..chain.len() {
        let qi = chain.ln_measure_at(i).exp();
        chain.for_each_neighbor(i, &mut |j, r| {
            if j > i {
                let df = f[i] - f[j];
                acc += qi * r * df * df;
            }
        });
    }
    acc
}

/// Harmonic measure of A seen from y: component for each target is
/// P(tau_target < tau_rest) from y. One solve per target; the components
/// sum to 1 up to solver tolerance.
pub fn harmonic_measure<C: ChainView>(
    chain: &C,
    y: usize,
    a: &[usize],
) -> Result<Vec<f64>, SolverError> {
    if a.is_empty() {
        return Err(SolverError::BadInstance("empty target set".into()));
    }
    if a.contains(&y) {
        return Err(SolverError::BadInstance(
            "harmonic measure start lies in the target set".into(),
        ));
    }
    if a.len() == 1 {
        return Ok(vec![1.0]);
    }
    let mut out = Vec::with_capacity(a.len());
    let mut rest: Vec<usize> = Vec::with_capacity(a.len() - 1);
    for (k, &eta) in a.iter().enumerate() {
        rest.clear();
        rest.extend(a.iter().enumerate().filter(|&(i, _)| i != k).map(|(_, &s)| s));
        let field = hit_field(chain, &[eta], &rest)?;
        out.push(clamp_probability(field[y])?);
    }
    Ok(out)
}

/// Mean hitting time field of A: (I - P)m = 1 off A, m = 0 on A.
pub fn mean_time_field<C: ChainView>(chain: &C, a: &[usize]) -> Result<Vec<f64>, SolverError> {
    if a.is_empty() {
        return Err(SolverError::BadInstance("empty target set".into()));
    }
    let fixed: Vec<(usize, f64)> = a.iter().map(|&t| (t, 0.0)).collect();
    let report = solve_potential(chain, &fixed, Rhs::Constant(1.0), 1.0, DEFAULT_TOLERANCE)?;
    Ok(report.values)
}

/// E tau_A from y, for y outside A.
pub fn mean_hitting_time<C: ChainView>(
    chain: &C,
    y: usize,
    a: &[usize],
) -> Result<f64, SolverError> {
    if a.contains(&y) {
        return Err(SolverError::BadInstance(
            "mean hitting time start lies in the target set".into(),
        ));
    }
    Ok(mean_time_field(chain, a)?[y])
}

/// Expected return time to y (tau > 0 convention), by first-step
/// decomposition; equals 1/Q(y) on any irreducible reversible chain.
pub fn mean_return_time<C: ChainView>(chain: &C, y: usize) -> Result<f64, SolverError> {
    let field = mean_time_field(chain, &[y])?;
    let mut acc = 1.0f64;
    chain.for_each_neighbor(y, &mut |z, r| acc += r * field[z]);
    Ok(acc)
}

/// E(tau_A | the walk enters A at eta) from y, via the conditioned system:
/// with h the harmonic field of (eta, A\eta) and w solving (I - P)w = h off
/// A with w = 0 on A, the answer is w(y)/h(y).
pub fn conditional_mean_time<C: ChainView>(
    chain: &C,
    y: usize,
    eta: usize,
    a: &[usize],
) -> Result<f64, SolverError> {
    if a.contains(&y) {
        return Err(SolverError::BadInstance(
            "conditional mean start lies in the target set".into(),
        ));
    }
    if !a.contains(&eta) {
        return Err(SolverError::BadInstance(
            "conditioning state is not in the target set".into(),
        ));
    }
    if a.len() == 1 {
        return mean_hitting_time(chain, y, a);
    }
    let rest: Vec<usize> = a.iter().copied().filter(|&s| s != eta).collect();
    let h = hit_field(chain, &[eta], &rest)?;
    if h[y] <= 0.0 {
        return Err(SolverError::BadInstance(
            "conditioning event has probability zero".into(),
        ));
    }
    let fixed: Vec<(usize, f64)> = a.iter().map(|&t| (t, 0.0)).collect();
    let report = solve_potential(chain, &fixed, Rhs::Field(&h), 1.0, DEFAULT_TOLERANCE)?;
    Ok(report.values[y] / h[y])
}

/// Relative defect of the classical mean-time identity
/// E tau_A = [1 + sum_{eta outside A and y} (Q(eta)/Q(y)) P(tau_y < tau_A from eta)]
///           / P(tau_A < tau_y^+ from y),
/// evaluated from exact solves; small chains only (one field plus a sweep).
/// The measure ratio is identically 1 on the uniform-measure chain.
pub fn mean_time_identity_residual<C: ChainView>(
    chain: &C,
    y: usize,
    a: &[usize],
) -> Result<f64, SolverError> {
    let exact = mean_hitting_time(chain, y, a)?;
    let field = hit_field(chain, &[y], a)?;
    let ln_qy = chain.ln_measure_at(y);
    let mut numerator = 1.0f64;
    for s in 0..chain.len() {
        if s != y && !a.contains(&s) {
            numerator += (chain.ln_measure_at(s) - ln_qy).exp() * field[s];
        }
    }
    let denominator = escape_prob(chain, y, a)?;
    Ok((exact - numerator / denominator).abs() / exact)
}

fn clamp_probability(p: f64) -> Result<f64, SolverError> {
    if (-1e-12..=1.0 + 1e-12).contains(&p) {
        Ok(p.clamp(0.0, 1.0))
    } else {
        Err(SolverError::NonConvergence {
            residual: (p - p.clamp(0.0, 1.0)).abs(),
        })
    }
}
