//! Two-parameter Birnbaum–Saunders (fatigue-life) distribution.
//!
//! With `v = ρ(t/β)/α` and `ρ(z) = √z − 1/√z`, the distribution function
//! is `G(t) = Φ(v)` and `β` is the median. The density is evaluated as
//! `φ(v) · (t + β) / (2α √β t^{3/2})`, which is algebraically the usual
//! `κ(α, β) t^{−3/2} (t + β) exp(−τ(t/β)/(2α²))` with the `exp(α^{−2})`
//! factor of `κ` cancelled against the exponent, so that small shapes do
//! not overflow.

use serde::{Deserialize, Serialize};

use crate::error::{domain, overflow, Error, Result};
use crate::specfun::{
    bessel_k_scaled, log_normal_pdf_over_cdf, log_std_normal_cdf, log_std_normal_pdf, log_std_normal_sf, std_normal_cdf,
    std_normal_quantile, std_normal_sf,
};

/// Shape `alpha` and scale `beta` of a Birnbaum–Saunders law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BsParams {
    alpha: f64,
    beta: f64,
}

impl BsParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) || !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "BS parameters must be positive and finite, got alpha = {alpha}, beta = {beta}"
            )));
        }
        Ok(Self { alpha, beta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// The standardized argument `v = α^{−1}(√(t/β) − √(β/t))`.
    pub fn v(&self, t: f64) -> Result<f64> {
        check_time("bs_v", t)?;
        Ok(self.v_unchecked(t))
    }

    pub(crate) fn v_unchecked(&self, t: f64) -> f64 {
        let r = (t / self.beta).sqrt();
        (r - 1.0 / r) / self.alpha
    }

    pub fn cdf(&self, t: f64) -> Result<f64> {
        check_time("bs_cdf", t)?;
        Ok(std_normal_cdf(self.v_unchecked(t)))
    }

    pub fn sf(&self, t: f64) -> Result<f64> {
        check_time("bs_sf", t)?;
        Ok(std_normal_sf(self.v_unchecked(t)))
    }

    pub fn pdf(&self, t: f64) -> Result<f64> {
        check_time("bs_pdf", t)?;
        Ok(self.ln_pdf_unchecked(t).exp())
    }

    pub fn ln_pdf(&self, t: f64) -> Result<f64> {
        check_time("bs_pdf", t)?;
        Ok(self.ln_pdf_unchecked(t))
    }

    pub(crate) fn ln_pdf_unchecked(&self, t: f64) -> f64 {
        let v = self.v_unchecked(t);
        log_std_normal_pdf(v) + self.ln_jacobian(t)
    }

    /// log(g(t)/Φ(v)), accurate where Φ(v) underflows.
    pub(crate) fn ln_pdf_over_cdf(&self, t: f64) -> f64 {
        log_normal_pdf_over_cdf(self.v_unchecked(t)) + self.ln_jacobian(t)
    }

    /// log dv/dt = log((t + β) / (2α √β t^{3/2})).
    pub(crate) fn ln_jacobian(&self, t: f64) -> f64 {
        (t + self.beta).ln() - (2.0 * self.alpha).ln() - 0.5 * self.beta.ln() - 1.5 * t.ln()
    }

    /// (log Φ(v), log(1 − Φ(v))) at `t`.
    pub(crate) fn log_cdf_sf(&self, t: f64) -> (f64, f64) {
        let v = self.v_unchecked(t);
        (log_std_normal_cdf(v), log_std_normal_sf(v))
    }

    /// Quantile `(β/4)(x + √(x² + 4))²` with `x = αΦ^{−1}(u)`.
    pub fn quantile(&self, u: f64) -> Result<f64> {
        if !(u > 0.0 && u < 1.0) {
            return Err(domain("bs_quantile", format!("u = {u} not in (0, 1)")));
        }
        Ok(self.quantile_from_normal(std_normal_quantile(u)?))
    }

    /// BS quantile expressed through a standard normal deviate `z`.
    pub(crate) fn quantile_from_normal(&self, z: f64) -> f64 {
        let x = self.alpha * z;
        let root = (x * x + 4.0).sqrt();
        // x + √(x²+4) cancels for large negative x
        let s = if x >= 0.0 { x + root } else { 4.0 / (root - x) };
        0.25 * self.beta * s * s
    }

    /// `E(T^k) = β^k [K_{k+1/2}(α^{−2}) + K_{k−1/2}(α^{−2})] / (2 K_{1/2}(α^{−2}))`.
    pub fn fractional_moment(&self, k: f64) -> Result<f64> {
        if !k.is_finite() {
            return Err(domain("bs_fractional_moment", format!("order {k} must be finite")));
        }
        let z = 1.0 / (self.alpha * self.alpha);
        // scaled Bessel functions share the e^z factor, which cancels in the ratio
        let num = bessel_k_scaled(k + 0.5, z)? + bessel_k_scaled(k - 0.5, z)?;
        let den = 2.0 * bessel_k_scaled(0.5, z)?;
        let value = self.beta.powf(k) * num / den;
        if !value.is_finite() {
            return Err(overflow("bs_fractional_moment", format!("E(T^{k}) at alpha = {}", self.alpha)));
        }
        Ok(value)
    }

    pub fn mean(&self) -> f64 {
        self.beta * (1.0 + 0.5 * self.alpha * self.alpha)
    }
}

pub(crate) fn check_time(func: &'static str, t: f64) -> Result<()> {
    if t > 0.0 && !t.is_nan() {
        Ok(())
    } else {
        Err(domain(func, format!("t = {t} must be positive")))
    }
}
