//! Laurent polynomials in the fugacity z = e^{βh}.
//!
//! A partition function over a finite atomic spin measure is a Laurent
//! polynomial Σ_m c_m z^m with m ranging over attainable total
//! magnetizations. Coefficients are kept max-normalized with the overall
//! scale tracked separately in log space, so strongly coupled instances do
//! not overflow.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Z_N(h) as a Laurent polynomial in z = e^{βh}.
///
/// `coeffs[i]` stores c_m for m = i - n_max; the true coefficient is
/// `coeffs[i] * exp(log_scale)`. For ferromagnetic in-scope models the
/// coefficient vector is palindromic and nonnegative with positive ends.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FugacityPolynomial {
    beta: f64,
    coeffs: Vec<f64>,
    #[serde(default, skip_serializing_if = "is_zero")]
    log_scale: f64,
}

fn is_zero(x: &f64) -> bool {
    *x == 0.0
}

impl FugacityPolynomial {
    /// Builds from coefficients `c_{-N} .. c_{N}` (ascending m). Trims zero
    /// pairs at both ends; rejects negative, non-finite, or all-zero input
    /// and a zero coefficient at only one end (palindromy violation).
    pub fn new(beta: f64, coeffs: Vec<f64>) -> Result<Self> {
        Self::with_log_scale(beta, coeffs, 0.0)
    }

    pub fn with_log_scale(beta: f64, mut coeffs: Vec<f64>, log_scale: f64) -> Result<Self> {
        if beta <= 0.0 || !beta.is_finite() {
            return Err(Error::InvalidPolynomial(format!(
                "beta must be > 0, got {beta}"
            )));
        }
        if coeffs.len().is_multiple_of(2) {
            return Err(Error::InvalidPolynomial(
                "coefficient list must have odd length c_{-N}..c_N".into(),
            ));
        }
        if let Some(bad) = coeffs.iter().find(|c| !c.is_finite() || **c < 0.0) {
            return Err(Error::InvalidPolynomial(format!(
                "coefficients must be finite and >= 0, got {bad}"
            )));
        }
        while coeffs.len() > 1 && coeffs[0] == 0.0 && coeffs[coeffs.len() - 1] == 0.0 {
            coeffs.remove(0);
            coeffs.pop();
        }
        if coeffs.iter().all(|&c| c == 0.0) {
            return Err(Error::InvalidPolynomial("all coefficients are zero".into()));
        }
        if coeffs[0] == 0.0 || coeffs[coeffs.len() - 1] == 0.0 {
            return Err(Error::InvalidPolynomial(
                "exactly one extreme coefficient is zero; input is not palindromic".into(),
            ));
        }
        Ok(FugacityPolynomial {
            beta,
            coeffs,
            log_scale,
        })
    }

    /// Max total magnetization N_max; the polynomial has 2·N_max roots.
    pub fn n_max(&self) -> usize {
        self.coeffs.len() / 2
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn log_scale(&self) -> f64 {
        self.log_scale
    }

    /// Stored (scaled) coefficients, ascending in m.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Stored coefficient of z^m, zero outside the range.
    pub fn coeff(&self, m: i64) -> f64 {
        let idx = m + self.n_max() as i64;
        if idx < 0 || idx >= self.coeffs.len() as i64 {
            0.0
        } else {
            self.coeffs[idx as usize]
        }
    }

    /// Rescales so the largest stored coefficient is 1.
    pub fn normalized(&self) -> Self {
        let max = self.coeffs.iter().cloned().fold(0.0, f64::max);
        FugacityPolynomial {
            beta: self.beta,
            coeffs: self.coeffs.iter().map(|c| c / max).collect(),
            log_scale: self.log_scale + max.ln(),
        }
    }

    /// P(z) on the stored scale (multiply by e^{log_scale} for the true value).
    pub fn eval(&self, z: Complex64) -> Complex64 {
        // Horner on Q(w) = z^N P(z), then divide by z^N.
        let q = self
            .coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c);
        q * z.powi(-(self.n_max() as i32))
    }

    /// ln Z(0) = ln P(1) + log_scale; finite and real since all coefficients
    /// are nonnegative with a positive leading one.
    pub fn log_value_at_one(&self) -> f64 {
        let s: f64 = self.coeffs.iter().sum();
        s.ln() + self.log_scale
    }

    /// Max over m of |c_m - c_{-m}| / c_max on the stored scale.
    pub fn palindromy_defect(&self) -> f64 {
        let max = self.coeffs.iter().cloned().fold(0.0, f64::max);
        let n = self.coeffs.len();
        (0..n)
            .map(|i| (self.coeffs[i] - self.coeffs[n - 1 - i]).abs() / max)
            .fold(0.0, f64::max)
    }

    /// Serializes as `{"beta": r, "coeffs": [c_{-N}, .., c_N]}` plus a
    /// `log_scale` field when the stored scale is not 1.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("polynomial serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: FugacityPolynomial = serde_json::from_str(s)
            .map_err(|e| Error::InvalidPolynomial(format!("bad polynomial JSON: {e}")))?;
        Self::with_log_scale(raw.beta, raw.coeffs, raw.log_scale)
    }
}

/// Largest relative discrepancy between true coefficients of two polynomials,
/// infinite if one has a zero where the other does not. The shared scale is
/// handled in log space so the comparison works for strongly coupled
/// instances too.
pub fn max_relative_coeff_error(a: &FugacityPolynomial, b: &FugacityPolynomial) -> f64 {
    let (a, b) = (a.normalized(), b.normalized());
    let n = a.n_max().max(b.n_max()) as i64;
    let mut worst: f64 = 0.0;
    for m in -n..=n {
        let ca = a.coeff(m);
        let cb = b.coeff(m);
        if ca == 0.0 && cb == 0.0 {
            continue;
        }
        if ca == 0.0 || cb == 0.0 {
            return f64::INFINITY;
        }
        // ratio of true values: (ca/cb) e^{La - Lb}
        let ratio = (ca / cb) * (a.log_scale() - b.log_scale()).exp();
        worst = worst.max((ratio - 1.0).abs());
    }
    worst
}
