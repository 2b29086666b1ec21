//! BS-family comparison models and their likelihood fits.
//!
//! With `g` the BS density, `Φ = Φ(v)` and `S = 1 − Φ`:
//!
//! | family | parameters | density |
//! |--------|------------|---------|
//! | WBS    | α β a b    | see [`crate::wbs`] |
//! | BBS    | α β a b    | `g Φ^{a−1} S^{b−1} / B(a, b)` |
//! | KBS    | α β a b    | `a b g Φ^{a−1} (1 − Φ^a)^{b−1}` |
//! | McBS   | α β a b c  | `c g Φ^{a−1} (1 − Φ^c)^{b−1} / B(a/c, b)` |
//! | MOEBS  | α β a      | `a g / [1 − (1 − a) S]²` |
//! | GBS    | α β a      | `g [−log S]^{a−1} / Γ(a)` |
//! | EBS    | α β a      | `a g Φ^{a−1}` |
//! | BS     | α β        | `g` |
//!
//! Every cdf has a closed form: `I_Φ(a, b)`, `1 − (1 − Φ^a)^b`,
//! `I_{Φ^c}(a/c, b)`, `Φ/(Φ + aS)`, `P(a, −log S)`, `Φ^a` and `Φ`.
//!
//! Competitor fits run one local optimization in log-parameters from the BS
//! modified-moment start with every extra shape set to one. Several of these
//! likelihoods are unbounded along boundary rays, so a wider search tends to
//! drift to degenerate parameter values instead of an interior maximum.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bs::{check_time, BsParams};
use crate::error::{domain, Error, Result};
use crate::mle::{self, FitOptions};
use crate::optim::{minimize, OptOptions};
use crate::sample::Sample;
use crate::specfun::{ln_gamma, log_beta, reg_inc_beta, reg_inc_gamma_lower};
use crate::wbs::WbsParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    Wbs,
    McBs,
    Moebs,
    Kbs,
    Gbs,
    Bbs,
    Ebs,
    Bs,
}

impl Family {
    /// All eight families in the order of the comparison tables.
    pub const ALL: [Family; 8] = [
        Family::Wbs,
        Family::McBs,
        Family::Moebs,
        Family::Kbs,
        Family::Gbs,
        Family::Bbs,
        Family::Ebs,
        Family::Bs,
    ];

    pub fn arity(self) -> usize {
        match self {
            Family::McBs => 5,
            Family::Wbs | Family::Bbs | Family::Kbs => 4,
            Family::Moebs | Family::Gbs | Family::Ebs => 3,
            Family::Bs => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Wbs => "WBS",
            Family::McBs => "McBS",
            Family::Moebs => "MOEBS",
            Family::Kbs => "KBS",
            Family::Gbs => "GBS",
            Family::Bbs => "BBS",
            Family::Ebs => "EBS",
            Family::Bs => "BS",
        }
    }

    pub fn param_names(self) -> &'static [&'static str] {
        const NAMES: [&str; 5] = ["alpha", "beta", "a", "b", "c"];
        &NAMES[..self.arity()]
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidParams(format!("unknown model family '{s}'")))
    }
}

/// A family together with a full parameter vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    family: Family,
    params: Vec<f64>,
}

impl ModelSpec {
    pub fn new(family: Family, params: Vec<f64>) -> Result<Self> {
        if params.len() != family.arity() {
            return Err(Error::InvalidParams(format!(
                "{family} takes {} parameters, got {}",
                family.arity(),
                params.len()
            )));
        }
        if let Some(x) = params.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
            return Err(Error::InvalidParams(format!("{family} parameters must be positive, got {x}")));
        }
        Ok(Self { family, params })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    fn baseline(&self) -> BsParams {
        BsParams::new(self.params[0], self.params[1]).expect("validated on construction")
    }

    /// Log density without the domain check on `t`.
    pub(crate) fn ln_pdf_unchecked(&self, t: f64) -> f64 {
        let p = &self.params;
        if self.family == Family::Wbs {
            return WbsParams::new(p[0], p[1], p[2], p[3]).expect("validated").ln_pdf_unchecked(t);
        }
        let g = self.baseline();
        // log g − log Φ, so that powers of Φ enter as a·log Φ without cancellation
        let lr = g.ln_pdf_over_cdf(t);
        let (lf, ls) = g.log_cdf_sf(t);
        match self.family {
            Family::Bbs => {
                let (a, b) = (p[2], p[3]);
                lr - log_beta(a, b).unwrap_or(f64::NAN) + a * lf + (b - 1.0) * ls
            }
            Family::Kbs => {
                let (a, b) = (p[2], p[3]);
                (a * b).ln() + lr + a * lf + (b - 1.0) * ln_one_minus_exp(a * lf)
            }
            Family::McBs => {
                let (a, b, c) = (p[2], p[3], p[4]);
                c.ln() + lr - log_beta(a / c, b).unwrap_or(f64::NAN) + a * lf + (b - 1.0) * ln_one_minus_exp(c * lf)
            }
            Family::Moebs => {
                let a = p[2];
                // 1 − (1 − a)S = Φ + aS
                a.ln() + g.ln_pdf_unchecked(t) - 2.0 * (lf.exp() + a * ls.exp()).ln()
            }
            Family::Gbs => {
                let a = p[2];
                lr - ln_gamma(a) + a * lf + (a - 1.0) * neg_ln_sf_excess(lf, ls)
            }
            Family::Ebs => p[2].ln() + lr + p[2] * lf,
            Family::Bs => g.ln_pdf_unchecked(t),
            Family::Wbs => unreachable!(),
        }
    }

    pub fn ln_pdf(&self, t: f64) -> Result<f64> {
        check_time("model_pdf", t)?;
        Ok(self.ln_pdf_unchecked(t))
    }

    pub fn pdf(&self, t: f64) -> Result<f64> {
        Ok(self.ln_pdf(t)?.exp())
    }

    pub fn cdf(&self, t: f64) -> Result<f64> {
        check_time("model_cdf", t)?;
        let p = &self.params;
        if self.family == Family::Wbs {
            return WbsParams::new(p[0], p[1], p[2], p[3])?.cdf(t);
        }
        let g = self.baseline();
        let (lf, ls) = g.log_cdf_sf(t);
        let phi = lf.exp();
        let value = match self.family {
            Family::Bbs => reg_inc_beta(phi, p[2], p[3])?,
            Family::Kbs => -(p[3] * ln_one_minus_exp(p[2] * lf)).exp_m1(),
            Family::McBs => reg_inc_beta((p[4] * lf).exp(), p[2] / p[4], p[3])?,
            Family::Moebs => phi / (phi + p[2] * ls.exp()),
            // −log S underflows with Φ; there P(a, x) = x^a / Γ(a + 1) to first order
            Family::Gbs if lf < -700.0 => (p[2] * lf - ln_gamma(p[2] + 1.0)).exp(),
            Family::Gbs => reg_inc_gamma_lower(p[2], -ls)?,
            Family::Ebs => (p[2] * lf).exp(),
            Family::Bs => g.cdf(t)?,
            Family::Wbs => unreachable!(),
        };
        Ok(value.clamp(0.0, 1.0))
    }

    pub fn loglik(&self, s: &Sample) -> f64 {
        let ll: f64 = s.values().iter().map(|&t| self.ln_pdf_unchecked(t)).sum();
        if ll.is_nan() {
            f64::NEG_INFINITY
        } else {
            ll
        }
    }
}

/// `log(1 − e^x)` for `x ≤ 0`.
fn ln_one_minus_exp(x: f64) -> f64 {
    if x > -std::f64::consts::LN_2 {
        (-x.exp_m1()).ln()
    } else {
        (-x.exp()).ln_1p()
    }
}

/// `log(−log(1 − Φ)) − log Φ`, which tends to zero as Φ underflows.
fn neg_ln_sf_excess(lf: f64, ls: f64) -> f64 {
    if lf < -30.0 {
        // −log(1 − Φ) = Φ(1 + Φ/2 + …)
        0.5 * lf.exp()
    } else {
        (-ls).ln() - lf
    }
}

/// Gamma-G density with the exponent printed as `b − 1` rather than `a − 1`:
/// `g [−log(1 − Φ)]^{b−1} / Γ(a)`. It integrates to one only when `a = b`
/// and is kept for comparison with the three-parameter GBS.
pub fn gbs_printed_pdf(t: f64, alpha: f64, beta: f64, a: f64, b: f64) -> Result<f64> {
    let g = BsParams::new(alpha, beta)?;
    check_time("gbs_printed_pdf", t)?;
    if !(a > 0.0 && b > 0.0) {
        return Err(domain("gbs_printed_pdf", format!("a = {a}, b = {b} must be positive")));
    }
    let (lf, ls) = g.log_cdf_sf(t);
    Ok((g.ln_pdf_over_cdf(t) - ln_gamma(a) + b * lf + (b - 1.0) * neg_ln_sf_excess(lf, ls)).exp())
}

/// Result of fitting one family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFit {
    pub spec: ModelSpec,
    pub loglik: f64,
    pub std_errors: Option<Vec<f64>>,
    pub converged: bool,
    pub iterations: usize,
}

impl ModelFit {
    pub fn neg2loglik(&self) -> f64 {
        -2.0 * self.loglik
    }

    pub fn family(&self) -> Family {
        self.spec.family()
    }
}

/// Start for a competitor: the BS modified-moment `(α₀, β₀)` and unit shapes.
pub fn default_start(family: Family, s: &Sample) -> Vec<f64> {
    let (alpha0, beta0) = s.bs_moment_start();
    let mut start = vec![alpha0, beta0];
    start.resize(family.arity(), 1.0);
    start
}

fn spec_from_eta(family: Family, eta: &[f64]) -> Option<ModelSpec> {
    if eta.iter().any(|e| e.abs() > 40.0) {
        return None;
    }
    ModelSpec::new(family, eta.iter().map(|e| e.exp()).collect()).ok()
}

/// Central-difference gradient with steps `h` in every coordinate.
fn fd_gradient<F: Fn(&[f64]) -> f64>(f: &F, x: &[f64], h: f64) -> Vec<f64> {
    let mut xp = x.to_vec();
    (0..x.len())
        .map(|i| {
            xp[i] = x[i] + h;
            let up = f(&xp);
            xp[i] = x[i] - h;
            let down = f(&xp);
            xp[i] = x[i];
            (up - down) / (2.0 * h)
        })
        .collect()
}

/// Observed information `−∂²ℓ/∂θ∂θ'` by second differences with relative steps.
pub fn numeric_information(spec: &ModelSpec, s: &Sample) -> Result<Vec<Vec<f64>>> {
    let theta = spec.params().to_vec();
    let k = theta.len();
    let ll = |th: &[f64]| -> f64 {
        match ModelSpec::new(spec.family(), th.to_vec()) {
            Ok(m) => m.loglik(s),
            Err(_) => f64::NAN,
        }
    };
    let h: Vec<f64> = theta.iter().map(|x| 1e-4 * x).collect();
    let f0 = ll(&theta);
    let mut info = vec![vec![0.0; k]; k];
    for i in 0..k {
        for j in i..k {
            let val = if i == j {
                let mut tp = theta.clone();
                let mut tm = theta.clone();
                tp[i] += h[i];
                tm[i] -= h[i];
                (ll(&tp) - 2.0 * f0 + ll(&tm)) / (h[i] * h[i])
            } else {
                let mut pts = [theta.clone(), theta.clone(), theta.clone(), theta.clone()];
                let signs = [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)];
                let mut acc = 0.0;
                for (pt, (si, sj)) in pts.iter_mut().zip(signs) {
                    pt[i] += si * h[i];
                    pt[j] += sj * h[j];
                    acc += si * sj * ll(pt);
                }
                acc / (4.0 * h[i] * h[j])
            };
            info[i][j] = -val;
            info[j][i] = -val;
        }
    }
    if info.iter().flatten().all(|x| x.is_finite()) {
        Ok(info)
    } else {
        Err(Error::IllConditioned(format!("non-finite information for {}", spec.family())))
    }
}

/// Standard errors from the inverse information, `None` unless it is positive definite.
fn std_errors(info: &[Vec<f64>]) -> Option<Vec<f64>> {
    let k = info.len();
    let m = nalgebra::DMatrix::from_fn(k, k, |i, j| info[i][j]);
    let inv = m.cholesky()?.inverse();
    let se: Vec<f64> = (0..k).map(|i| inv[(i, i)].sqrt()).collect();
    se.iter().all(|x| x.is_finite()).then_some(se)
}

/// Maximum likelihood fit of one family. WBS uses the multi-start fit of
/// [`crate::mle::fit`]; the others start from [`default_start`].
pub fn model_fit(family: Family, s: &Sample, opts: &FitOptions) -> Result<ModelFit> {
    if family == Family::Wbs {
        let r = mle::fit(s, opts)?;
        let spec = ModelSpec::new(Family::Wbs, r.params.to_array().to_vec())?;
        return Ok(ModelFit {
            spec,
            loglik: r.loglik,
            std_errors: r.std_errors().map(|x| x.to_vec()),
            converged: r.converged,
            iterations: r.iterations,
        });
    }
    if s.len() < family.arity() + 1 || s.is_degenerate() {
        return Err(Error::InvalidSample(format!(
            "{family} needs more than {} distinct observations",
            family.arity()
        )));
    }
    let objective = |eta: &[f64]| match spec_from_eta(family, eta) {
        Some(m) => {
            let ll = m.loglik(s);
            if ll.is_finite() {
                -ll
            } else {
                f64::INFINITY
            }
        }
        None => f64::INFINITY,
    };
    let grad = |eta: &[f64]| fd_gradient(&objective, eta, 1e-5);
    let eta0: Vec<f64> = default_start(family, s).iter().map(|x| x.ln()).collect();
    let opt = OptOptions {
        max_iterations: opts.max_iterations,
        // a finite-difference gradient cannot resolve the score more finely
        grad_tol: opts.grad_tol.max(1e-7),
        step_tol: 1e-8,
    };
    let r = minimize(&objective, &grad, &eta0, &opt);
    let spec = spec_from_eta(family, &r.x)
        .ok_or_else(|| crate::error::no_convergence("model_fit", format!("{family} left the parameter range")))?;
    let loglik = spec.loglik(s);
    let std_errors = numeric_information(&spec, s).ok().and_then(|i| std_errors(&i));
    Ok(ModelFit {
        spec,
        loglik,
        std_errors,
        converged: r.converged,
        iterations: r.iterations,
    })
}

/// Fit several families concurrently; results keep the input order.
pub fn fit_all(families: &[Family], s: &Sample, opts: &FitOptions) -> Vec<Result<ModelFit>> {
    families.par_iter().map(|&f| model_fit(f, s, opts)).collect()
}
