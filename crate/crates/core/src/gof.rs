//! Model-selection criteria, Kolmogorov–Smirnov test, empirical cdf and the
//! total time on test (TTT) transform.

use serde::{Deserialize, Serialize};

use crate::competitors::ModelFit;
use crate::error::{domain, Error, Result};
use crate::sample::Sample;

/// Fit statistics of one model on one sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GofReport {
    pub neg2loglik: f64,
    pub aic: f64,
    pub bic: f64,
    pub caic: f64,
    pub ks_stat: f64,
    pub ks_pvalue: f64,
    pub k_params: usize,
    pub n_obs: usize,
}

/// `(AIC, BIC, CAIC)` with `CAIC = −2ℓ̂ + 2kn/(n − k − 1)`.
pub fn info_criteria(neg2ll: f64, k: usize, n: usize) -> Result<(f64, f64, f64)> {
    if n <= k + 1 {
        return Err(domain("info_criteria", format!("n = {n} must exceed k + 1 = {}", k + 1)));
    }
    let (kf, nf) = (k as f64, n as f64);
    Ok((neg2ll + 2.0 * kf, neg2ll + kf * nf.ln(), neg2ll + 2.0 * kf * nf / (nf - kf - 1.0)))
}

/// Asymptotic Kolmogorov survival function `Q(λ) = 2 Σ (−1)^{j−1} e^{−2j²λ²}`
/// at `λ = √n D`, clamped to `[0, 1]`. Small `λ` uses the equivalent theta
/// series `1 − (√(2π)/λ) Σ e^{−(2j−1)²π²/(8λ²)}`, which converges fast there.
pub fn kolmogorov_pvalue(n: usize, d: f64) -> f64 {
    let lambda = (n as f64).sqrt() * d;
    if lambda <= 0.0 {
        return 1.0;
    }
    let p = if lambda < 1.18 { kolmogorov_theta(lambda) } else { kolmogorov_alternating(lambda) };
    p.clamp(0.0, 1.0)
}

fn kolmogorov_theta(lambda: f64) -> f64 {
    let c = std::f64::consts::PI * std::f64::consts::PI / (8.0 * lambda * lambda);
    let mut sum = 0.0;
    for j in 1..=100 {
        let k = (2 * j - 1) as f64;
        let term = (-k * k * c).exp();
        sum += term;
        if term < 1e-16 {
            break;
        }
    }
    1.0 - (2.0 * std::f64::consts::PI).sqrt() / lambda * sum
}

fn kolmogorov_alternating(lambda: f64) -> f64 {
    let mut sum = 0.0;
    for j in 1..=100 {
        let jf = j as f64;
        let term = (-2.0 * jf * jf * lambda * lambda).exp();
        sum += if j % 2 == 1 { term } else { -term };
        if term < 1e-12 {
            break;
        }
    }
    2.0 * sum
}

/// One-sample two-sided K-S statistic and asymptotic p-value.
pub fn ks_test<F: Fn(f64) -> Result<f64>>(s: &Sample, cdf: F) -> Result<(f64, f64)> {
    let n = s.len() as f64;
    let mut d: f64 = 0.0;
    let mut prev = 0.0;
    for (i, &t) in s.sorted().iter().enumerate() {
        let f = cdf(t)?;
        if !(0.0..=1.0).contains(&f) || f < prev {
            return Err(domain("ks_test", format!("cdf is not monotone in [0, 1] at t = {t} (value {f})")));
        }
        prev = f;
        let i1 = (i + 1) as f64;
        d = d.max(i1 / n - f).max(f - i as f64 / n);
    }
    Ok((d, kolmogorov_pvalue(s.len(), d)))
}

/// Right-continuous empirical distribution function of a sample.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalCdf {
    sorted: Vec<f64>,
}

impl EmpiricalCdf {
    pub fn eval(&self, t: f64) -> f64 {
        let count = self.sorted.partition_point(|&x| x <= t);
        count as f64 / self.sorted.len() as f64
    }

    /// Jump points `(t_(i), i/n)` with ties merged to the upper value.
    pub fn steps(&self) -> Vec<(f64, f64)> {
        let n = self.sorted.len() as f64;
        let mut out: Vec<(f64, f64)> = Vec::new();
        for (i, &t) in self.sorted.iter().enumerate() {
            let y = (i + 1) as f64 / n;
            match out.last_mut() {
                Some(last) if last.0 == t => last.1 = y,
                _ => out.push((t, y)),
            }
        }
        out
    }
}

pub fn empirical_cdf(s: &Sample) -> EmpiricalCdf {
    EmpiricalCdf { sorted: s.sorted().to_vec() }
}

/// Scaled TTT curve: point `i` is `(i/n, [Σ_{j≤i} t_(j) + (n − i) t_(i)] / Σ t_j)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TttCurve {
    pub points: Vec<(f64, f64)>,
}

pub fn ttt(s: &Sample) -> Result<TttCurve> {
    let n = s.len();
    if n < 2 {
        return Err(Error::InvalidSample("TTT needs at least 2 observations".into()));
    }
    let total: f64 = s.sorted().iter().sum();
    // T_i = T_{i−1} + (n − i + 1)(t_(i) − t_(i−1)) keeps the curve monotone under rounding
    let mut acc = 0.0;
    let mut prev = 0.0;
    let mut points = Vec::with_capacity(n);
    for (idx, &t) in s.sorted().iter().enumerate() {
        let i = idx + 1;
        acc += (n - i + 1) as f64 * (t - prev);
        prev = t;
        let y = if i == n { 1.0 } else { (acc / total).min(1.0) };
        points.push((i as f64 / n as f64, y));
    }
    Ok(TttCurve { points })
}

/// Criteria and K-S statistics of a fitted model on the sample it was fitted to.
pub fn gof_report(fit: &ModelFit, s: &Sample) -> Result<GofReport> {
    let k = fit.spec.family().arity();
    let neg2loglik = fit.neg2loglik();
    let (aic, bic, caic) = info_criteria(neg2loglik, k, s.len())?;
    let (ks_stat, ks_pvalue) = ks_test(s, |t| fit.spec.cdf(t))?;
    Ok(GofReport {
        neg2loglik,
        aic,
        bic,
        caic,
        ks_stat,
        ks_pvalue,
        k_params: k,
        n_obs: s.len(),
    })
}
