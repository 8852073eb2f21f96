use crate::BoundsError;

/// Tunable constants for the bound functions and window checks. The defaults
/// are the proof-friendly choices; every constant that the underlying
/// estimates leave unspecified is surfaced here.
#[derive(Clone, Debug)]
pub struct BoundParams {
    /// Base factor of the decay function below the step threshold; the
    /// estimates require at least 4.
    pub kappa0: f64,
    /// Step count up to which `kappa0` applies; beyond it the factor is N.
    pub n_threshold: usize,
    /// Class-count budget coefficient: d_0(N) = floor(alpha0 * N / ln N).
    /// Must lie in (0, 1/20].
    pub alpha0: f64,
    /// Escape-window slack constant (second-order term coefficient).
    pub c_window: f64,
    /// Mean-time envelope slack constant.
    pub c_mean: f64,
    /// Laplace-window slack constant.
    pub c_eps: f64,
    /// Generic envelope prefactor for the closed-form decay envelopes whose
    /// derivations leave an unnamed constant. The default covers the largest
    /// constant measured on the N in {64,128,256}, d in {1..4} grid: the
    /// fixed-step-count form needs about 103.5 (it absorbs kappa0^2 * 3!).
    pub big_c: f64,
}

impl Default for BoundParams {
    fn default() -> Self {
        BoundParams {
            kappa0: 4.0,
            n_threshold: 10,
            alpha0: 0.05,
            c_window: 4.0,
            c_mean: 5.0,
            c_eps: 1.0,
            big_c: 128.0,
        }
    }
}

impl BoundParams {
    pub fn validate(&self) -> Result<(), BoundsError> {
        if !(self.kappa0 >= 4.0) {
            return Err(BoundsError::BadParams(format!(
                "kappa0 must be at least 4, got {}",
                self.kappa0
            )));
        }
        if !(self.alpha0 > 0.0 && self.alpha0 <= 0.05) {
            return Err(BoundsError::BadParams(format!(
                "alpha0 must lie in (0, 1/20], got {}",
                self.alpha0
            )));
        }
        for (name, v) in [
            ("c_window", self.c_window),
            ("c_mean", self.c_mean),
            ("c_eps", self.c_eps),
            ("big_c", self.big_c),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(BoundsError::BadParams(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        Ok(())
    }

    /// Decay prefactor: kappa0 up to the step threshold, N beyond it.
    pub fn kappa(&self, n: usize, big_n: u32) -> f64 {
        if n <= self.n_threshold {
            self.kappa0
        } else {
            big_n as f64
        }
    }
}
