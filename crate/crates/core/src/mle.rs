//! Maximum likelihood estimation for the WBS law.
//!
//! The log-likelihood of `ξ = (α, β, a, b)` for lifetimes `t_1..t_n` is
//!
//! ```text
//! ℓ(ξ) = n[log a + log b + log κ(α, β)] − (3/2) Σ log t_i + Σ log(t_i + β)
//!        − (1/(2α²)) Σ τ(t_i/β) + (b − 1) Σ log Φ(v_i) − (b + 1) Σ log(1 − Φ(v_i))
//!        − a Σ [Φ(v_i)/(1 − Φ(v_i))]^b
//! ```
//!
//! with `κ(α, β) = exp(α^{−2}) / (2α √(2πβ))`. The `exp(α^{−2})` factor of
//! `κ` is merged with the `τ` sum as `−Σ (τ_i − 2)/(2α²)` so that small `α`
//! does not overflow.
//!
//! [`fit`] maximizes over `η = log ξ` from a grid of starts, using damped
//! Newton steps with a simplex fallback. Standard errors come from the
//! observed information obtained by central differences of the analytic
//! score; [`observed_info_analytic`] evaluates the closed-form second
//! derivative elements as published so the two can be compared element by
//! element with [`info_cross_check`].

use nalgebra::Matrix4;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, no_convergence, Error, Result};
use crate::optim::{minimize, nelder_mead, newton, relative_gradient, OptOptions, OptResult};
use crate::rng::{CounterRng, RngSeed};
use crate::sample::Sample;
use crate::specfun::{log_std_normal_cdf, log_std_normal_pdf, log_std_normal_sf, std_normal_quantile};
use crate::wbs::WbsParams;

/// Parameter names in the order used by every vector and matrix here.
pub const PARAM_NAMES: [&str; 4] = ["alpha", "beta", "a", "b"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    NewtonWithFallback,
    DerivativeFree,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitOptions {
    pub max_iterations: usize,
    pub grad_tol: f64,
    pub n_starts: usize,
    pub seed: RngSeed,
    pub algorithm: Algorithm,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            max_iterations: 500,
            grad_tol: 1e-6,
            n_starts: 16,
            seed: RngSeed(1),
            algorithm: Algorithm::NewtonWithFallback,
        }
    }
}

impl FitOptions {
    fn validate(&self) -> Result<()> {
        if !(self.grad_tol > 0.0) || self.max_iterations == 0 || self.n_starts == 0 {
            return Err(Error::InvalidParams(
                "fit options need grad_tol > 0, max_iterations >= 1 and n_starts >= 1".into(),
            ));
        }
        Ok(())
    }

    pub(crate) fn opt(&self) -> OptOptions {
        OptOptions {
            max_iterations: self.max_iterations,
            grad_tol: self.grad_tol,
            step_tol: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub params: WbsParams,
    pub loglik: f64,
    /// Euclidean norm of the score in the original coordinates.
    pub score_norm: f64,
    /// Inverse observed information; `None` when it is not positive definite.
    pub covariance: Option<[[f64; 4]; 4]>,
    pub converged: bool,
    pub iterations: usize,
    pub starts_tried: usize,
}

impl FitResult {
    pub fn neg2loglik(&self) -> f64 {
        -2.0 * self.loglik
    }

    pub fn std_errors(&self) -> Option<[f64; 4]> {
        self.covariance.map(|c| [c[0][0].sqrt(), c[1][1].sqrt(), c[2][2].sqrt(), c[3][3].sqrt()])
    }
}

/// Per-observation quantities shared by the likelihood, score and information.
struct Obs {
    v: f64,
    /// `√(t/β)`
    r: f64,
    ln_phi: f64,
    ln_cdf: f64,
    ln_sf: f64,
}

fn obs(t: f64, alpha: f64, beta: f64) -> Obs {
    let r = (t / beta).sqrt();
    let v = (r - 1.0 / r) / alpha;
    Obs {
        v,
        r,
        ln_phi: log_std_normal_pdf(v),
        ln_cdf: log_std_normal_cdf(v),
        ln_sf: log_std_normal_sf(v),
    }
}

/// Total log-likelihood; `-∞` when some observation has zero density.
pub fn loglik(s: &Sample, p: &WbsParams) -> f64 {
    let [alpha, beta, a, b] = p.to_array();
    let n = s.len() as f64;
    let ln_kappa_rest = -(2.0 * alpha).ln() - 0.5 * (2.0 * std::f64::consts::PI * beta).ln();
    let mut total = n * (a.ln() + b.ln() + ln_kappa_rest);
    for &t in s.values() {
        let o = obs(t, alpha, beta);
        // τ(t/β) − 2 = (√(t/β) − √(β/t))²
        let tau_m2 = (o.r - 1.0 / o.r).powi(2);
        total += -1.5 * t.ln() + (t + beta).ln() - tau_m2 / (2.0 * alpha * alpha) + (b - 1.0) * o.ln_cdf
            - (b + 1.0) * o.ln_sf
            - a * (b * (o.ln_cdf - o.ln_sf)).exp();
    }
    if total.is_nan() {
        f64::NEG_INFINITY
    } else {
        total
    }
}

/// Analytic score `(∂ℓ/∂α, ∂ℓ/∂β, ∂ℓ/∂a, ∂ℓ/∂b)`.
pub fn score(s: &Sample, p: &WbsParams) -> Result<[f64; 4]> {
    let [alpha, beta, a, b] = p.to_array();
    let n = s.len() as f64;
    let mut u = [0.0; 4];
    u[0] = -n / alpha;
    u[1] = -n / (2.0 * beta);
    u[2] = n / a;
    u[3] = n / b;
    for &t in s.values() {
        let o = obs(t, alpha, beta);
        let dv_da = -o.v / alpha;
        let dv_db = -(o.r + 1.0 / o.r) / (2.0 * alpha * beta);
        let r1 = (o.ln_phi - o.ln_cdf).exp();
        let r2 = (o.ln_phi - o.ln_sf).exp();
        let lo = o.ln_cdf - o.ln_sf;
        let w = (b * lo).exp();
        // derivative of everything that depends on v, per unit dv
        let dv = -o.v + (b - 1.0) * r1 + (b + 1.0) * r2 - a * b * w * (r1 + r2);
        u[0] += dv * dv_da;
        u[1] += dv * dv_db + 1.0 / (t + beta);
        u[2] -= w;
        u[3] += lo - a * w * lo;
    }
    if u.iter().all(|x| x.is_finite()) {
        Ok(u)
    } else {
        Err(domain("score", format!("non-finite score {u:?} at {:?}", p.to_array())))
    }
}

/// Observed information `−∂²ℓ` by central differences of the analytic score
/// with relative steps, symmetrized.
pub fn observed_info_numeric(s: &Sample, p: &WbsParams) -> Result<[[f64; 4]; 4]> {
    let theta = p.to_array();
    let mut h = [[0.0; 4]; 4];
    for j in 0..4 {
        let step = 1e-5 * theta[j];
        let mut tp = theta;
        let mut tm = theta;
        tp[j] += step;
        tm[j] -= step;
        let up = score(s, &WbsParams::from_slice(&tp)?)?;
        let um = score(s, &WbsParams::from_slice(&tm)?)?;
        for i in 0..4 {
            h[i][j] = -(up[i] - um[i]) / (2.0 * step);
        }
    }
    for i in 0..4 {
        for j in 0..i {
            let m = 0.5 * (h[i][j] + h[j][i]);
            h[i][j] = m;
            h[j][i] = m;
        }
    }
    Ok(h)
}

/// Observed information from the closed-form second-derivative elements
/// exactly as published, `J = −L`. Several printed elements disagree with
/// the numerical information; see [`info_cross_check`].
pub fn observed_info_analytic(s: &Sample, p: &WbsParams) -> [[f64; 4]; 4] {
    let [al, be, a, b] = p.to_array();
    let n = s.len() as f64;
    let (mut l_bta, mut l_ala, mut l_bb, mut l_ab) = (0.0, 0.0, 0.0, 0.0);
    // running sums named after the element they feed
    let mut s_al = [0.0; 9];
    let mut s_ab = [0.0; 6];
    let mut s_bt = [0.0; 10];
    let mut s_btb = [0.0; 3];
    let mut s_alb = [0.0; 3];
    for &t in s.values() {
        let o = obs(t, al, be);
        let v = o.v;
        let ph = o.ln_phi.exp();
        let cdf = o.ln_cdf.exp();
        let sf = o.ln_sf.exp();
        let ts = o.r + 1.0 / o.r; // τ(√(t/β))
        let lo = o.ln_cdf - o.ln_sf;
        let odds_b = (b * lo).exp();
        // Φ^{b−1}/(1−Φ)^{b+1}, Φ^{b−2}/(1−Φ)^{b+1}, Φ^{b−1}/(1−Φ)^{b+2}
        let q11 = ((b - 1.0) * o.ln_cdf - (b + 1.0) * o.ln_sf).exp();
        let q21 = ((b - 2.0) * o.ln_cdf - (b + 1.0) * o.ln_sf).exp();
        let q12 = ((b - 1.0) * o.ln_cdf - (b + 2.0) * o.ln_sf).exp();
        let v2 = v * v;
        let v4 = v2 * v2;

        s_al[0] += t / be + be / t;
        s_al[1] += v * ph / cdf;
        s_al[2] += v * ph / sf;
        s_al[3] += v4 * ph / cdf - al * v2 * ph * ph / (cdf * cdf);
        s_al[4] += v4 * ph / sf - al * v2 * ph * ph / (sf * sf);
        s_al[5] += v * ph * q11;
        s_al[6] += v * (v2 - 1.0) * ph * q11;
        s_al[7] += v * ph * ph * q21;
        s_al[8] += v * ph * ph * q12;

        s_ab[0] += t / be - be / t;
        s_ab[1] += al * v * ph / cdf + v4 * ph / cdf - al * v2 * ph * ph / (cdf * cdf);
        s_ab[2] += al * v * ph / sf + v4 * ph / sf - al * v2 * ph * ph / (sf * sf);
        s_ab[3] += ts * ph * (v2 * ph - 1.0) * q11;
        s_ab[4] += ts * ph * q21;
        s_ab[5] += ts * v * ph * ph * q12;

        s_bt[0] += 1.0 / (t + be).powi(2);
        s_bt[1] += t;
        s_bt[2] += ts * ph / cdf;
        s_bt[3] += -al * v * ph / cdf + v * ts * ts * ph / (al * cdf) + v * ts * ts * ph * ph / (al * cdf * cdf);
        s_bt[4] += -al * v * ph / sf + v * ts * ts * ph / (al * sf) - v * ts * ts * ph * ph / (al * sf * sf);
        s_bt[5] += ts * ph * q11;
        s_bt[6] += ts * ph / sf;
        s_bt[7] += ph * q11 * (ts * ts * v * ph - o.r + 1.0 / o.r);
        s_bt[8] += ts * ts * ph * ph * q11;
        s_bt[9] += ts * ts * ph * ph * q11 / sf;

        s_btb[0] += ts * ph / cdf;
        s_btb[1] += ts * ph / sf;
        s_btb[2] += ts * ph * q11 * (1.0 + b * lo);

        s_alb[0] += v * ph / cdf;
        s_alb[1] += v * ph / sf;
        s_alb[2] += v * ph * q11 * (1.0 + b * lo);

        l_bta += ts * ph * q11;
        l_ala += v * ph * q11;
        l_bb += odds_b * lo * lo;
        l_ab += odds_b * lo;
    }
    let al2 = al * al;
    let al3 = al2 * al;
    let al4 = al2 * al2;
    let laa_ = n / al2 + 6.0 * n / al4 - 3.0 / al4 * s_al[0] + 2.0 * (b - 1.0) / al2 * s_al[1]
        - 2.0 * (b + 1.0) / al2 * s_al[2]
        + (b - 1.0) / al3 * s_al[3]
        - (b + 1.0) / al3 * s_al[4]
        + a * b / al2 * s_al[5]
        + a * b / al2 * s_al[6]
        + (b - 1.0) * s_al[7]
        + (b + 1.0) * s_al[8];
    let c = 2.0 * be * al2;
    let lab_ = -1.0 / (al3 * be) * s_ab[0] + (b - 1.0) / c * s_ab[1] - (b - 1.0) / c * s_ab[2] + a * b / c * s_ab[3]
        - a * b * (b - 1.0) / c * s_ab[4]
        - a * b * (b + 1.0) / c * s_ab[5];
    let be2 = be * be;
    let lbb_ = n / (2.0 * be2) - s_bt[0] - 1.0 / (al2 * be2 * be) * s_bt[1] + (b - 1.0) / (2.0 * al * be2) * s_bt[2]
        - (b - 1.0) / (4.0 * al * be2) * s_bt[3]
        + (b + 1.0) / (4.0 * al * be2) * s_bt[4]
        - a * b / (2.0 * al * be2) * s_bt[5]
        - (b + 1.0) / (2.0 * al * be2) * s_bt[6]
        + a * b / (2.0 * al2 * be2) * s_bt[7]
        - a * b * (b - 1.0) / (2.0 * al2 * be2) * s_bt[8]
        + a * b * (b + 1.0) / (2.0 * al2 * be2) * s_bt[9];
    let lbb2 = (s_btb[0] + s_btb[1] - s_btb[2]) / (2.0 * be * al);
    let lab2 = (s_alb[0] + s_alb[1]) / al - a / al * s_alb[2];
    let l_beta_a = b / (2.0 * be * al) * l_bta;
    let l_alpha_a = b / al * l_ala;
    let l_bbb = -n / (b * b) - a * l_bb;
    let l_aa = -n / (a * a);
    let l_ab_ = -l_ab;

    // L in (α, β, a, b) order, then J = −L
    let l = [
        [laa_, lab_, l_alpha_a, lab2],
        [lab_, lbb_, l_beta_a, lbb2],
        [l_alpha_a, l_beta_a, l_aa, l_ab_],
        [lab2, lbb2, l_ab_, l_bbb],
    ];
    let mut j = [[0.0; 4]; 4];
    for r in 0..4 {
        for c in 0..4 {
            j[r][c] = -l[r][c];
        }
    }
    j
}

/// One element of the analytic-versus-numeric information comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InfoElement {
    pub row: &'static str,
    pub col: &'static str,
    pub analytic: f64,
    pub numeric: f64,
    pub rel_diff: f64,
    pub agrees: bool,
}

/// Compare the published closed-form information with the numeric one on
/// the upper triangle; `agrees` uses a relative tolerance of 1e−3.
pub fn info_cross_check(s: &Sample, p: &WbsParams) -> Result<Vec<InfoElement>> {
    let an = observed_info_analytic(s, p);
    let nu = observed_info_numeric(s, p)?;
    let mut out = Vec::new();
    for i in 0..4 {
        for j in i..4 {
            let denom = nu[i][j].abs().max(1e-12);
            let rel = (an[i][j] - nu[i][j]).abs() / denom;
            out.push(InfoElement {
                row: PARAM_NAMES[i],
                col: PARAM_NAMES[j],
                analytic: an[i][j],
                numeric: nu[i][j],
                rel_diff: rel,
                agrees: rel <= 1e-3,
            });
        }
    }
    Ok(out)
}

/// Inverse of a symmetric positive definite matrix, `None` otherwise.
pub fn spd_inverse(m: &[[f64; 4]; 4]) -> Option<[[f64; 4]; 4]> {
    let mat = Matrix4::from_fn(|i, j| m[i][j]);
    let inv = mat.cholesky()?.inverse();
    let mut out = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = 0.5 * (inv[(i, j)] + inv[(j, i)]);
        }
    }
    if (0..4).all(|i| out[i][i] > 0.0 && out[i][i].is_finite()) {
        Some(out)
    } else {
        None
    }
}

fn to_params(eta: &[f64]) -> Option<WbsParams> {
    if eta.iter().any(|e| e.abs() > 40.0) {
        return None;
    }
    WbsParams::new(eta[0].exp(), eta[1].exp(), eta[2].exp(), eta[3].exp()).ok()
}

fn objective(s: &Sample) -> impl Fn(&[f64]) -> f64 + '_ {
    move |eta: &[f64]| match to_params(eta) {
        Some(p) => {
            let ll = loglik(s, &p);
            if ll.is_finite() {
                -ll
            } else {
                f64::INFINITY
            }
        }
        None => f64::INFINITY,
    }
}

fn gradient(s: &Sample) -> impl Fn(&[f64]) -> Vec<f64> + '_ {
    move |eta: &[f64]| match to_params(eta).map(|p| score(s, &p)) {
        Some(Ok(u)) => (0..4).map(|i| -u[i] * eta[i].exp()).collect(),
        _ => vec![f64::NAN; 4],
    }
}

/// Deterministic starting points: `β₀` the sample median, `α₀` the BS
/// modified-moment estimate, `(a₀, b₀)` over `{0.1, 0.5, 1, 2}²`; starts
/// beyond the sixteen grid points are log-normal jitters of the grid.
pub fn start_points(s: &Sample, n_starts: usize, seed: RngSeed) -> Vec<[f64; 4]> {
    let (alpha0, _) = s.bs_moment_start();
    let beta0 = s.median();
    let grid = [0.1, 0.5, 1.0, 2.0];
    let mut starts = Vec::with_capacity(n_starts);
    for &a0 in &grid {
        for &b0 in &grid {
            starts.push([alpha0, beta0, a0, b0]);
        }
    }
    let base = CounterRng::new(seed);
    let mut i = 0;
    while starts.len() < n_starts {
        let mut rng = base.split(i as u64);
        let template = starts[i % 16];
        let mut jittered = template;
        for x in jittered.iter_mut() {
            let z = std_normal_quantile(rng.next_uniform()).unwrap_or(0.0);
            *x *= (0.5 * z).exp();
        }
        starts.push(jittered);
        i += 1;
    }
    starts.truncate(n_starts);
    starts
}

fn run_start(s: &Sample, start: &[f64; 4], opts: &FitOptions) -> OptResult {
    let f = objective(s);
    let g = gradient(s);
    let eta0: Vec<f64> = start.iter().map(|x| x.ln()).collect();
    match opts.algorithm {
        Algorithm::NewtonWithFallback => minimize(&f, &g, &eta0, &opts.opt()),
        Algorithm::DerivativeFree => {
            let (x, fx, evals) = nelder_mead(&f, &eta0, 0.5, 200 * opts.max_iterations);
            let grad = g(&x);
            let converged = fx.is_finite() && relative_gradient(&x, &grad, fx) <= opts.grad_tol.max(1e-4);
            OptResult { x, f: fx, grad, iterations: evals, converged }
        }
    }
}

/// Multi-start maximum likelihood fit of the WBS law.
pub fn fit(s: &Sample, opts: &FitOptions) -> Result<FitResult> {
    opts.validate()?;
    if s.len() < 5 {
        return Err(Error::InvalidSample(format!("need at least 5 observations, got {}", s.len())));
    }
    if s.is_degenerate() {
        return Err(Error::InvalidSample("all observations are equal".into()));
    }
    let starts = start_points(s, opts.n_starts, opts.seed);
    let results: Vec<OptResult> = starts.par_iter().map(|st| run_start(s, st, opts)).collect();
    let best = results
        .iter()
        .filter(|r| r.f.is_finite())
        .min_by(|x, y| x.f.total_cmp(&y.f))
        .ok_or_else(|| no_convergence("fit", "no start reached a finite log-likelihood"))?;
    let iterations = results.iter().map(|r| r.iterations).sum();

    // polish the winner well past the stopping tolerance
    let f = objective(s);
    let g = gradient(s);
    let polish = newton(
        &f,
        &g,
        &best.x,
        &OptOptions { max_iterations: 50, grad_tol: 1e-12, step_tol: 0.0 },
    );
    let chosen = if polish.f.is_finite() && polish.f <= best.f { &polish } else { best };
    let params = to_params(&chosen.x).ok_or_else(|| no_convergence("fit", "optimum left the parameter range"))?;
    let ll = loglik(s, &params);
    let u = score(s, &params)?;
    let score_norm = u.iter().map(|x| x * x).sum::<f64>().sqrt();
    let covariance = observed_info_numeric(s, &params).ok().and_then(|j| spd_inverse(&j));
    let converged = (best.converged || polish.converged) && score_norm <= 1e-5 * ll.abs().max(1.0);
    Ok(FitResult {
        params,
        loglik: ll,
        score_norm,
        covariance,
        converged,
        iterations,
        starts_tried: starts.len(),
    })
}

/// Wald intervals `θ̂ ± z √var(θ̂)` at confidence `level`.
pub fn confint(f: &FitResult, level: f64) -> Result<[(f64, f64); 4]> {
    if !(level > 0.0 && level < 1.0) {
        return Err(domain("confint", format!("level = {level} not in (0, 1)")));
    }
    let se = f
        .std_errors()
        .ok_or_else(|| Error::IllConditioned("observed information is not positive definite".into()))?;
    let z = std_normal_quantile(0.5 + 0.5 * level)?;
    let th = f.params.to_array();
    Ok([0, 1, 2, 3].map(|i| (th[i] - z * se[i], th[i] + z * se[i])))
}

/// Smallest eigenvalue of a symmetric 4×4 matrix.
pub fn min_eigenvalue(m: &[[f64; 4]; 4]) -> f64 {
    let mat = Matrix4::from_fn(|i, j| m[i][j]);
    mat.symmetric_eigenvalues().min()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datasets::{MEEKER_ESCOBAR, TURBOCHARGER};

    fn data1() -> Sample {
        Sample::new(MEEKER_ESCOBAR.to_vec()).unwrap()
    }

    fn data2() -> Sample {
        Sample::new(TURBOCHARGER.to_vec()).unwrap()
    }

    const T1: [f64; 4] = [0.8152, 22.9053, 0.1115, 0.2683];
    const T3: [f64; 4] = [0.2007, 3.4802, 0.1185, 0.2323];

    #[test]
    fn loglik_at_published_estimates() {
        let p = WbsParams::from_slice(&T1).unwrap();
        assert!((-2.0 * loglik(&data1(), &p) - 352.8431).abs() < 0.05);
        let q = WbsParams::from_slice(&T3).unwrap();
        assert!((-2.0 * loglik(&data2(), &q) - 157.1875).abs() < 0.05);
    }

    #[test]
    fn loglik_equals_sum_of_log_densities() {
        for (s, th) in [(data1(), T1), (data2(), T3)] {
            let p = WbsParams::from_slice(&th).unwrap();
            let direct: f64 = s.values().iter().map(|&t| p.ln_pdf(t).unwrap()).sum();
            let ll = loglik(&s, &p);
            assert!(((ll - direct) / direct).abs() < 1e-12);
        }
        let one = Sample::new(vec![2.0]).unwrap();
        let p = WbsParams::new(0.5, 2.0, 0.3, 1.2).unwrap();
        assert!((loglik(&one, &p) - p.ln_pdf(2.0).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn score_a_component_closed_form() {
        let s = data1();
        let p = WbsParams::new(1.1, 30.0, 0.2, 0.4).unwrap();
        let u = score(&s, &p).unwrap();
        let n = s.len() as f64;
        let sum_w: f64 = s
            .values()
            .iter()
            .map(|&t| {
                let big = p.baseline().cdf(t).unwrap();
                (big / (1.0 - big)).powf(0.4)
            })
            .sum();
        assert!(((u[2] - (n / 0.2 - sum_w)) / u[2]).abs() < 1e-10);
        let h = 1e-6 * 0.2;
        let fd = (loglik(&s, &WbsParams::new(1.1, 30.0, 0.2 + h, 0.4).unwrap())
            - loglik(&s, &WbsParams::new(1.1, 30.0, 0.2 - h, 0.4).unwrap()))
            / (2.0 * h);
        assert!(((u[2] - fd) / fd).abs() < 1e-6);
    }

    #[test]
    fn score_is_permutation_invariant() {
        let s = data2();
        let mut rev = s.values().to_vec();
        rev.reverse();
        let r = Sample::new(rev).unwrap();
        let p = WbsParams::from_slice(&T3).unwrap();
        let a = score(&s, &p).unwrap();
        let b = score(&r, &p).unwrap();
        for i in 0..4 {
            assert!((a[i] - b[i]).abs() <= 1e-10 * a[i].abs().max(1.0));
        }
    }

    #[test]
    fn laa_element_is_exact() {
        let s = data1();
        let p = WbsParams::from_slice(&T1).unwrap();
        let an = observed_info_analytic(&s, &p);
        let nu = observed_info_numeric(&s, &p).unwrap();
        let n = s.len() as f64;
        assert!((an[2][2] - n / (0.1115 * 0.1115)).abs() < 1e-9 * an[2][2]);
        assert!(((nu[2][2] - an[2][2]) / an[2][2]).abs() < 1e-8);
    }

    #[test]
    fn fit_rejects_small_or_degenerate_samples() {
        let opts = FitOptions::default();
        assert!(fit(&Sample::new(vec![1.0, 2.0, 3.0]).unwrap(), &opts).is_err());
        assert!(fit(&Sample::new(vec![2.0; 10]).unwrap(), &opts).is_err());
        let bad = FitOptions { n_starts: 0, ..opts };
        assert!(fit(&data1(), &bad).is_err());
    }

    #[test]
    fn start_grid() {
        let s = data1();
        let st = start_points(&s, 20, RngSeed(3));
        assert_eq!(st.len(), 20);
        assert_eq!(st[0][1], s.median());
        assert_eq!(st[0][2], 0.1);
        assert_eq!(st[15][3], 2.0);
        assert_eq!(st, start_points(&s, 20, RngSeed(3)));
        assert_eq!(start_points(&s, 4, RngSeed(3)).len(), 4);
    }

    #[test]
    fn confint_contains_estimate_and_nests() {
        let fit = fit(&data2(), &FitOptions::default()).unwrap();
        let c95 = confint(&fit, 0.95).unwrap();
        let c99 = confint(&fit, 0.99).unwrap();
        let th = fit.params.to_array();
        for i in 0..4 {
            assert!(c95[i].0 < th[i] && th[i] < c95[i].1);
            assert!(c99[i].0 <= c95[i].0 && c99[i].1 >= c95[i].1);
            let mid = 0.5 * (c95[i].0 + c95[i].1);
            assert!((mid - th[i]).abs() < 1e-9 * th[i].max(1.0));
        }
        assert!(confint(&fit, 1.0).is_err());
    }
}
