use serde::{Deserialize, Serialize};

use crate::error::{hypothesis, Result};

/// Which regime of the interpolation parameter we are in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    GammaLt1,
    GammaGt1,
    LogSobolevLimit,
}

/// Scalar parameter block `(n, p, γ)` with the derived `α` and `p′`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub n: usize,
    pub p: f64,
    pub gamma: f64,
    pub alpha: f64,
    pub p_conj: f64,
    pub mode: Mode,
}

/// Validate `(n, p, γ)` and derive `α = 1/(p(γ−1)+1)` and `p′ = p/(p−1)`.
pub fn derive_params(n: usize, p: f64, gamma: f64) -> Result<Params> {
    if n < 2 {
        return Err(hypothesis(format!("n ≥ 2 (got n = {n})")));
    }
    if !(p.is_finite() && p > 1.0) {
        return Err(hypothesis(format!("p > 1 (got p = {p})")));
    }
    if !gamma.is_finite() {
        return Err(hypothesis(format!("γ must be finite (got {gamma})")));
    }
    let p_conj = p / (p - 1.0);
    let mode = if gamma == 1.0 {
        Mode::LogSobolevLimit
    } else if gamma > 1.0 {
        Mode::GammaGt1
    } else {
        let lower = (1.0 - 1.0 / n as f64).max(1.0 / p_conj);
        if gamma <= lower {
            return Err(hypothesis(format!(
                "γ > max(1 − 1/n, 1/p′) = {lower} (got γ = {gamma})"
            )));
        }
        Mode::GammaLt1
    };
    // Implied by the γ < 1 bound; kept for a direct message.
    let denom = p * (gamma - 1.0) + 1.0;
    if denom <= 0.0 {
        return Err(hypothesis(format!(
            "p(γ−1)+1 > 0 (got {denom} at p = {p}, γ = {gamma})"
        )));
    }
    let alpha = if mode == Mode::LogSobolevLimit {
        1.0
    } else {
        1.0 / denom
    };
    Ok(Params {
        n,
        p,
        gamma,
        alpha,
        p_conj,
        mode,
    })
}

impl Params {
    /// `1/p′ = 1 − 1/p`, computed directly rather than as a reciprocal.
    pub fn inv_p_conj(&self) -> f64 {
        1.0 - 1.0 / self.p
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn log_sobolev_limit() {
        let params = derive_params(2, 2.0, 1.0).unwrap();
        assert_eq!(params.mode, Mode::LogSobolevLimit);
        assert_eq!(params.alpha, 1.0);
    }

    #[test]
    fn gamma_three_quarters() {
        let params = derive_params(2, 2.0, 0.75).unwrap();
        assert_eq!(params.mode, Mode::GammaLt1);
        assert!((params.alpha - 2.0).abs() < 1e-15);
        assert!((params.p_conj - 2.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_boundary_gamma() {
        let err = derive_params(2, 2.0, 0.5).unwrap_err();
        assert!(err.to_string().contains("max(1 − 1/n, 1/p′)"), "{err}");
    }

    #[test]
    fn rejects_small_p_and_n() {
        assert!(derive_params(2, 0.5, 0.8).unwrap_err().to_string().contains("p > 1"));
        assert!(derive_params(1, 2.0, 0.8).unwrap_err().to_string().contains("n ≥ 2"));
    }

    proptest! {
        #[test]
        fn derived_identities(n in 2usize..6, p in 1.05f64..6.0, gamma in 0.5f64..4.0) {
            if let Ok(params) = derive_params(n, p, gamma) {
                if params.mode != Mode::LogSobolevLimit {
                    prop_assert!((params.alpha * (p * (gamma - 1.0) + 1.0) - 1.0).abs() <= 1e-15);
                }
                prop_assert!((1.0 / p + 1.0 / params.p_conj - 1.0).abs() <= 1e-15);
            }
        }
    }
}
