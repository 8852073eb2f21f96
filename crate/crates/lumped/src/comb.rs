//! Log-scale factorials and binomials. Dimensions reach 1024 and the bound
//! functions need (n+2)! with n up to N, so everything is kept in log space
//! and exponentiated only by the caller.

use std::sync::OnceLock;

const TABLE_SIZE: usize = 4100;

fn table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = vec![0.0; TABLE_SIZE];
        for i in 2..TABLE_SIZE {
            t[i] = t[i - 1] + (i as f64).ln();
        }
        t
    })
}

/// ln(n!) from a cumulative table; panics beyond the supported range, which
/// covers every dimension this workspace accepts.
pub fn ln_factorial(n: usize) -> f64 {
    let t = table();
    assert!(n < t.len(), "ln_factorial table exceeded at n = {n}");
    t[n]
}

/// ln C(n, k); negative infinity when k is out of range.
pub fn ln_binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// Exact C(n, k) in u128; None on overflow. Sufficient for the small
/// instances where exact integer cross-checks run.
pub fn binomial_u128(n: usize, k: usize) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)?;
        acc /= (i + 1) as u128;
    }
    Some(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn small_factorials() {
        assert_eq!(ln_factorial(0), 0.0);
        assert_eq!(ln_factorial(1), 0.0);
        assert_relative_eq!(ln_factorial(5), 120.0f64.ln(), max_relative = 1e-14);
        assert_relative_eq!(ln_factorial(10), 3628800.0f64.ln(), max_relative = 1e-14);
    }

    #[test]
    fn binomials_match_exact() {
        for n in 0..40 {
            for k in 0..=n {
                let exact = binomial_u128(n, k).unwrap() as f64;
                assert_relative_eq!(ln_binomial(n, k).exp(), exact, max_relative = 1e-11);
            }
        }
    }

    #[test]
    fn binomial_out_of_range_is_zero() {
        assert_eq!(binomial_u128(5, 9), Some(0));
        assert!(ln_binomial(5, 9).is_infinite());
    }

    #[test]
    fn pascal_recurrence_holds() {
        for n in 1..60 {
            for k in 1..n {
                let lhs = binomial_u128(n, k).unwrap();
                let rhs = binomial_u128(n - 1, k - 1).unwrap() + binomial_u128(n - 1, k).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }
}
