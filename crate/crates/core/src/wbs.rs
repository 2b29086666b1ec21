//! The Weibull Birnbaum–Saunders distribution.
//!
//! Feeding the BS odds `G/(1 − G)` through a Weibull cdf gives
//!
//! ```text
//! F(t) = 1 − exp(−a [Φ(v)/(1 − Φ(v))]^b),     v = α^{−1}(√(t/β) − √(β/t)).
//! ```
//!
//! Everything is evaluated through `log Φ(v)` and `log(1 − Φ(v))`, the
//! latter from the upper normal tail directly, so nothing cancels when
//! `Φ(v)` approaches one. The cumulative hazard `H = a·exp(b·[log Φ −
//! log(1 − Φ)])` gives `sf = e^{−H}` and `cdf = −expm1(−H)`; once the odds
//! underflow (`H` below about 1e−308) the cdf is exactly 0, and once `H`
//! exceeds about 745 the survival function is exactly 0 and the cdf 1.

use serde::{Deserialize, Serialize};

use crate::bs::{check_time, BsParams};
use crate::error::{domain, overflow, Error, Result};
use crate::rng::{CounterRng, RngSeed};
use crate::specfun::std_normal_quantile;

/// The four WBS parameters `(alpha, beta, a, b)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WbsParams {
    alpha: f64,
    beta: f64,
    a: f64,
    b: f64,
}

/// Log-space pieces of the WBS law at one time point.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Terms {
    /// `log g − log Φ` of the baseline.
    pub ln_ratio: f64,
    pub ln_cdf0: f64,
    pub ln_sf0: f64,
    /// `log` of the cumulative hazard `a·odds^b`.
    pub ln_h: f64,
}

impl WbsParams {
    pub fn new(alpha: f64, beta: f64, a: f64, b: f64) -> Result<Self> {
        let ok = |x: f64| x > 0.0 && x.is_finite();
        if !(ok(alpha) && ok(beta) && ok(a) && ok(b)) {
            return Err(Error::InvalidParams(format!(
                "WBS parameters must be positive and finite, got ({alpha}, {beta}, {a}, {b})"
            )));
        }
        Ok(Self { alpha, beta, a, b })
    }

    pub fn from_slice(p: &[f64]) -> Result<Self> {
        match p {
            [alpha, beta, a, b] => Self::new(*alpha, *beta, *a, *b),
            _ => Err(Error::InvalidParams(format!("WBS takes 4 parameters, got {}", p.len()))),
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn to_array(&self) -> [f64; 4] {
        [self.alpha, self.beta, self.a, self.b]
    }

    /// The Birnbaum–Saunders baseline `(alpha, beta)`.
    pub fn baseline(&self) -> BsParams {
        BsParams::new(self.alpha, self.beta).expect("validated on construction")
    }

    pub(crate) fn terms(&self, t: f64) -> Terms {
        let g = self.baseline();
        let (ln_cdf0, ln_sf0) = g.log_cdf_sf(t);
        Terms {
            ln_ratio: g.ln_pdf_over_cdf(t),
            ln_cdf0,
            ln_sf0,
            ln_h: self.a.ln() + self.b * (ln_cdf0 - ln_sf0),
        }
    }

    pub(crate) fn ln_pdf_terms(&self, k: &Terms) -> f64 {
        (self.a * self.b).ln() + k.ln_ratio + self.b * k.ln_cdf0 - (self.b + 1.0) * k.ln_sf0 - k.ln_h.exp()
    }

    pub fn cdf(&self, t: f64) -> Result<f64> {
        check_time("wbs_cdf", t)?;
        Ok(-(-self.terms(t).ln_h.exp()).exp_m1())
    }

    pub fn sf(&self, t: f64) -> Result<f64> {
        check_time("wbs_sf", t)?;
        Ok((-self.terms(t).ln_h.exp()).exp())
    }

    /// Cumulative hazard `−log sf(t) = a [Φ/(1 − Φ)]^b`.
    pub fn cum_hazard(&self, t: f64) -> Result<f64> {
        check_time("wbs_cum_hazard", t)?;
        Ok(self.terms(t).ln_h.exp())
    }

    pub fn pdf(&self, t: f64) -> Result<f64> {
        Ok(self.ln_pdf(t)?.exp())
    }

    pub fn ln_pdf(&self, t: f64) -> Result<f64> {
        check_time("wbs_pdf", t)?;
        Ok(self.ln_pdf_unchecked(t))
    }

    pub(crate) fn ln_pdf_unchecked(&self, t: f64) -> f64 {
        self.ln_pdf_terms(&self.terms(t))
    }

    /// Failure rate `f/sf`, evaluated as `exp(log f + H)`.
    pub fn hazard(&self, t: f64) -> Result<f64> {
        check_time("wbs_hazard", t)?;
        let k = self.terms(t);
        let h = (self.ln_pdf_terms(&k) + k.ln_h.exp()).exp();
        if h.is_finite() {
            Ok(h)
        } else {
            Err(overflow("wbs_hazard", format!("hazard at t = {t} exceeds f64 range")))
        }
    }

    /// Inverse cdf. With `w = (−log(1 − u)/a)^{1/b}` the BS probability is
    /// `w/(1 + w)`, whose normal quantile is taken from the nearer tail.
    pub fn quantile(&self, u: f64) -> Result<f64> {
        if !(u > 0.0 && u < 1.0) {
            return Err(domain("wbs_quantile", format!("u = {u} not in (0, 1)")));
        }
        let ln_w = ((-(-u).ln_1p()).ln() - self.a.ln()) / self.b;
        if !ln_w.is_finite() {
            return Err(overflow("wbs_quantile", format!("odds for u = {u} not representable")));
        }
        // p = 1/(1 + e^{−ln w}); the smaller of p, 1 − p is computed without cancellation
        let z = if ln_w > 0.0 {
            let q = 1.0 / (1.0 + ln_w.exp());
            if q == 0.0 {
                return Err(overflow("wbs_quantile", format!("u = {u} maps beyond the normal upper tail")));
            }
            -std_normal_quantile(q)?
        } else {
            let p = 1.0 / (1.0 + (-ln_w).exp());
            if p == 0.0 {
                return Err(overflow("wbs_quantile", format!("u = {u} maps beyond the normal lower tail")));
            }
            std_normal_quantile(p)?
        };
        let t = self.baseline().quantile_from_normal(z);
        if t > 0.0 && t.is_finite() {
            Ok(t)
        } else {
            Err(overflow("wbs_quantile", format!("quantile at u = {u} is {t}")))
        }
    }

    pub fn median(&self) -> Result<f64> {
        self.quantile(0.5)
    }

    /// `n` draws by inverse transform from the counter stream of `seed`.
    pub fn sample(&self, n: usize, seed: RngSeed) -> Result<Vec<f64>> {
        let mut rng = CounterRng::new(seed);
        self.sample_with(n, &mut rng)
    }

    pub fn sample_with(&self, n: usize, rng: &mut CounterRng) -> Result<Vec<f64>> {
        (0..n).map(|_| self.quantile(rng.next_uniform())).collect()
    }
}
