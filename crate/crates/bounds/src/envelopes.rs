use crate::ftable::{index_set_i, FTable};
use lumped::comb::{ln_binomial, ln_factorial};

/// One closed-form upper envelope for the overshoot part F2 of the decay
/// function, with its own applicability region. Inapplicable envelopes carry
/// the reason in `note` and must not be compared against.
#[derive(Clone, Debug)]
pub struct Envelope {
    pub name: &'static str,
    pub ln_value: f64,
    pub applicable: bool,
    pub note: String,
}

/// Largest overshoot half-count p* = ceil(n/2) and the matching shortest
/// overshoot distance m* = n + 2 - 2 p* (2 for even n, 1 for odd).
pub fn p_and_m_star(n: usize) -> (usize, usize) {
    let p_star = n.div_ceil(2);
    (p_star, n + 2 - 2 * p_star)
}

fn h(x: f64) -> f64 {
    (x * x.ln()).abs() + x + x * x / 2.0
}

fn tail_base(d: usize, n: usize) -> f64 {
    2.0 * (-1.0 + 2.0 * h(d as f64 / (n as f64 + 2.0))).exp()
}

/// Smallest c >= 1 such that n + 2 > c d forces the tail-geometric base
/// 2 exp(-1 + 2 h(d/(n+2))) down to delta; requires delta > 2/e (the base's
/// infimum as d/(n+2) -> 0).
pub fn piecewise_threshold_c(delta: f64) -> f64 {
    assert!(
        delta > 2.0 / std::f64::consts::E,
        "threshold only defined above 2/e"
    );
    // g(x) = 2 exp(-1 + 2h(x)) is increasing (h'(x) = x - ln x > 0 for x < 1
    // and all three h terms increase for x >= 1); bisect for g(x) = delta.
    let g = |x: f64| 2.0 * (-1.0 + 2.0 * h(x)).exp();
    if g(1.0) <= delta {
        return 1.0;
    }
    let (mut lo, mut hi) = (1e-12, 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) <= delta {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    1.0 / lo
}

const SMALL_D_SQUARED_CUT: f64 = 0.25;
const DENSE_D_SQUARED_CUT: f64 = 1.0;
const PIECEWISE_DELTA: f64 = 0.9;

/// The closed-form envelopes dominating F2(n) for the geometry `table` was
/// built on. Each entry states where it applies; the exact F2 must stay below
/// every applicable value (asserted at acceptance level on a parameter grid).
pub fn a3_envelopes(table: &FTable, n: usize) -> Vec<Envelope> {
    let big_n = table.n();
    assert!(n >= 1 && n <= big_n as usize);
    let params = table.params();
    let nf = big_n as f64;
    let d = table.d();
    let df = d as f64;
    let ln_n = nf.ln();
    let np2 = n as f64 + 2.0;
    let kappa2 = params.kappa(n + 2, big_n);
    let ln_kappa2_sq = 2.0 * kappa2.ln();
    let big_c = params.big_c;
    let d_sq_ratio = df * df / nf;
    let sparse = d_sq_ratio <= SMALL_D_SQUARED_CUT;
    let dense = d_sq_ratio > DENSE_D_SQUARED_CUT;
    let (p_star, m_star) = p_and_m_star(n);
    let mut out = Vec::new();

    // Composition-count series: replace each sphere size by the unbounded
    // composition count C(d+m-1, m). Constant-free, applies everywhere.
    {
        let lead = ln_kappa2_sq + ln_factorial(n + 2) - np2 * ln_n;
        let terms: Vec<f64> = index_set_i(n)
            .into_iter()
            .map(|m| {
                let p = (n + 2 - m) / 2;
                p as f64 * ln_n - ln_factorial(p) + ln_binomial(d + m - 1, m)
            })
            .collect();
        let hi = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let ln_sum = hi + terms.iter().map(|&t| (t - hi).exp()).sum::<f64>().ln();
        out.push(Envelope {
            name: "series_with_composition_counts",
            ln_value: lead + ln_sum,
            applicable: true,
            note: "constant-free".into(),
        });
    }

    // Explicit constant-free forms for one and two steps.
    if n == 1 {
        let v = kappa2 * kappa2 * (6.0 * df / (nf * nf) + ((df + 2.0) / nf).powi(3));
        out.push(Envelope {
            name: "small_n_explicit",
            ln_value: v.ln(),
            applicable: true,
            note: "constant-free, n = 1".into(),
        });
    } else if n == 2 {
        let v = kappa2 * kappa2
            * (12.0 * (df + 1.0) * (df + 1.0) / nf.powi(3) + ((df + 3.0) / nf).powi(4));
        out.push(Envelope {
            name: "small_n_explicit",
            ln_value: v.ln(),
            applicable: true,
            note: "constant-free, n = 2".into(),
        });
    }

    // Fixed step count, diffusive regime: C N^{-p*} (d/N)^{m*}.
    {
        let applicable = sparse && d >= 2 && n * n <= d - 1;
        let ln_value = big_c.ln() - p_star as f64 * ln_n + m_star as f64 * (df.ln() - ln_n);
        out.push(Envelope {
            name: "fixed_order_small_d",
            ln_value,
            applicable,
            note: format!("needs d^2/N <= {SMALL_D_SQUARED_CUT} and n^2 <= d-1"),
        });
    }

    // Step count below the class count, diffusive regime.
    {
        let applicable = sparse && n + 2 <= d;
        let ln_value = if d >= 2 {
            let rho_bar = 2.0
                * (-1.0 + np2 / (df - 1.0) + (2.0 * d_sq_ratio).sqrt() * (1.0 + d_sq_ratio.sqrt()))
                    .exp();
            big_c.ln()
                + 1.5 * np2.ln()
                + ln_kappa2_sq
                + 0.5 * np2 * rho_bar.ln()
                + 0.5 * np2 * ((n as f64).ln() - ln_n)
        } else {
            f64::INFINITY
        };
        out.push(Envelope {
            name: "mid_range_geometric",
            ln_value,
            applicable,
            note: format!("needs d^2/N <= {SMALL_D_SQUARED_CUT} and n+2 <= d"),
        });
    }

    // Step count at or above the class count; uniform in the density since
    // both density regimes produce this same form.
    {
        let applicable = n + 2 >= d;
        let ln_value = big_c.ln()
            + ln_kappa2_sq
            + 0.5 * np2 * tail_base(d, n).ln()
            + (np2 - p_star as f64) * ((n as f64).ln() - ln_n);
        out.push(Envelope {
            name: "tail_geometric",
            ln_value,
            applicable,
            note: "needs n+2 >= d".into(),
        });
    }

    // Dense partitions, step count below the class count: no kappa^2 factor.
    {
        let applicable = dense && n + 2 <= d;
        let ln_value = if d >= 2 {
            big_c.ln() + 1.5 * np2.ln() + np2 * np2 / (2.0 * (df - 1.0)) + np2 * (df.ln() - ln_n)
        } else {
            f64::INFINITY
        };
        out.push(Envelope {
            name: "dense_partition_below",
            ln_value,
            applicable,
            note: format!("needs d^2/N > {DENSE_D_SQUARED_CUT} and n+2 <= d"),
        });
    }

    // Piecewise relaxation of the tail form into bases that no longer depend
    // on the step count, so each branch is decreasing in n.
    {
        let applicable = n + 2 >= d;
        let c_delta = piecewise_threshold_c(PIECEWISE_DELTA);
        let half_n = n as f64 / 2.0;
        let e = std::f64::consts::E;
        let (ln_base, branch) = if np2 <= c_delta * df {
            ((2.0 * e * e * c_delta * df / nf).ln(), "near the class count")
        } else if np2 <= nf / e {
            ((PIECEWISE_DELTA * n as f64 / nf).ln(), "middle range")
        } else {
            // d/(n+2) < d e / N and the base is increasing in that ratio.
            (((2.0 / e) * (2.0 * h(df * e / nf)).exp()).ln(), "largest steps")
        };
        out.push(Envelope {
            name: "piecewise_decreasing",
            ln_value: big_c.ln() + 2.0 * ln_n + half_n * ln_base,
            applicable,
            note: format!("needs n+2 >= d; delta = {PIECEWISE_DELTA}, branch: {branch}"),
        });
    }

    out
}

/// Monotone-profile facts that hold when d/N is small: the overshoot part
/// peaks at distance 1, and dominates the direct part from distance 3 on.
/// Returns ((peak_ok, worst_peak_slack), (dominates_ok, worst_dom_slack))
/// where slacks are log-scale margins (>= 0 means the property holds).
pub fn cor2_profile_checks(table: &FTable) -> ((bool, f64), (bool, f64)) {
    let n = table.n() as usize;
    let mut peak_slack = f64::INFINITY;
    let mut dom_slack = f64::INFINITY;
    for dist in 1..=n {
        peak_slack = peak_slack.min(table.ln_f2(1) - table.ln_f2(dist));
        if dist >= 3 {
            dom_slack = dom_slack.min(table.ln_f2(dist) - table.ln_f1(dist));
        }
    }
    ((peak_slack >= 0.0, peak_slack), (dom_slack >= 0.0, dom_slack))
}

/// Geometric-decay certificate for partitions with enough classes: the
/// largest F(n)^{1/n} over n >= max(1, d-2). Below 1 means F decays at least
/// geometrically on that range.
pub fn decreasing_envelope_rho(table: &FTable) -> f64 {
    let n = table.n() as usize;
    let start = table.d().saturating_sub(2).max(1);
    (start..=n)
        .map(|dist| (table.ln_f(dist) / dist as f64).exp())
        .fold(0.0, f64::max)
}
