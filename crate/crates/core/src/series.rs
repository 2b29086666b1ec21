//! Mixture representation of the WBS law and quantities derived from it.
//!
//! Expanding the Weibull exponential and the negative binomial power of
//! `1 − Φ` writes the WBS cdf as a double mixture of exponentiated BS
//! (EBS) laws `H_m(t) = Φ(v)^m`:
//!
//! ```text
//! F(t) = Σ_{k,j ≥ 0} w_{k,j} H_{b(k+1)+j}(t),
//! w_{k,j} = (−1)^k b a^{k+1} Γ(bk+b+1+j) / (k! j! (bk+b+j) Γ(bk+b+1)).
//! ```
//!
//! The series here are diagnostics: exact evaluation lives in [`crate::wbs`].
//! Every truncated sum checks its own tail and returns
//! [`Error::NonConvergence`] instead of a number when the tail test fails or
//! the alternating terms cancel away too many digits.
//!
//! Moments, probability weighted moments, mean deviations, Lorenz and
//! Bonferroni curves and stress–strength reliability are computed by
//! adaptive quadrature on `(0, ∞)` with the substitution `t = scale · e^x`.

use serde::{Deserialize, Serialize};

use crate::bs::{check_time, BsParams};
use crate::error::{domain, no_convergence, overflow, Error, Result};
use crate::quad::Quadrature;
use crate::specfun::{ln_gamma, std_normal_cdf};
use crate::wbs::WbsParams;

/// Exponentiated BS law `H(t) = Φ(v)^power`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EbsParams {
    alpha: f64,
    beta: f64,
    power: f64,
}

impl EbsParams {
    pub fn new(alpha: f64, beta: f64, power: f64) -> Result<Self> {
        BsParams::new(alpha, beta)?;
        if !(power > 0.0 && power.is_finite()) {
            return Err(Error::InvalidParams(format!("EBS power must be positive, got {power}")));
        }
        Ok(Self { alpha, beta, power })
    }

    pub fn power(&self) -> f64 {
        self.power
    }

    fn baseline(&self) -> BsParams {
        BsParams::new(self.alpha, self.beta).expect("validated on construction")
    }

    pub fn cdf(&self, t: f64) -> Result<f64> {
        let g = self.baseline();
        check_time("ebs_cdf", t)?;
        if self.power == 1.0 {
            return g.cdf(t);
        }
        Ok((self.power * g.log_cdf_sf(t).0).exp())
    }

    pub fn pdf(&self, t: f64) -> Result<f64> {
        let g = self.baseline();
        check_time("ebs_pdf", t)?;
        if self.power == 1.0 {
            return g.pdf(t);
        }
        let ln = self.power.ln() + g.ln_pdf_unchecked(t) + (self.power - 1.0) * g.log_cdf_sf(t).0;
        Ok(ln.exp())
    }
}

/// Truncation orders and tolerance for the infinite series.
///
/// `k_max`, `j_max` and `r_max` count terms, so `k` runs over `0..k_max`.
/// A sum is accepted once three successive increments (or geometric tail
/// bounds) fall below `tol` relative to the running total.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesTruncation {
    pub k_max: usize,
    pub j_max: usize,
    pub r_max: usize,
    pub tol: f64,
}

impl Default for SeriesTruncation {
    fn default() -> Self {
        Self {
            k_max: 200,
            j_max: 20_000,
            r_max: 400,
            tol: 1e-12,
        }
    }
}

impl SeriesTruncation {
    pub fn new(k_max: usize, j_max: usize, r_max: usize, tol: f64) -> Result<Self> {
        if k_max == 0 || j_max == 0 || r_max == 0 || !(tol >= 0.0) {
            return Err(Error::InvalidParams(format!(
                "truncation needs positive term counts and tol >= 0, got ({k_max}, {j_max}, {r_max}, {tol})"
            )));
        }
        Ok(Self { k_max, j_max, r_max, tol })
    }
}

/// Digits we are willing to lose to cancellation between alternating terms.
const MAX_CANCELLATION: f64 = 1e8;

fn ln_abs_weight(k: usize, j: usize, a: f64, b: f64) -> f64 {
    let (kf, jf) = (k as f64, j as f64);
    let m0 = b * (kf + 1.0);
    b.ln() + (kf + 1.0) * a.ln() + ln_gamma(m0 + 1.0 + jf)
        - ln_gamma(kf + 1.0)
        - ln_gamma(jf + 1.0)
        - (m0 + jf).ln()
        - ln_gamma(m0 + 1.0)
}

/// Mixture weight `w_{k,j}`, computed in log space with explicit sign.
pub fn mixture_weight(k: usize, j: usize, a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
        return Err(domain("mixture_weight", format!("a = {a}, b = {b} must be positive")));
    }
    let ln = ln_abs_weight(k, j, a, b);
    if ln > f64::MAX.ln() {
        return Err(overflow("mixture_weight", format!("|w_{{{k},{j}}}| = exp({ln})")));
    }
    let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(sign * ln.exp())
}

/// Stop rule shared by the inner and outer sums.
struct TailTest {
    hits: usize,
}

impl TailTest {
    fn new() -> Self {
        Self { hits: 0 }
    }

    /// Feed one tail estimate; true once three in a row are within tolerance.
    fn push(&mut self, tail: f64, total: f64, tol: f64) -> bool {
        if tail.abs() <= tol * total.abs() || tail == 0.0 {
            self.hits += 1;
        } else {
            self.hits = 0;
        }
        self.hits >= 3
    }
}

/// Which EBS functional the mixture is summed over.
#[derive(Clone, Copy)]
enum Kind {
    Pdf,
    Cdf,
}

fn mixture_sum(t: f64, p: &WbsParams, tr: &SeriesTruncation, kind: Kind, func: &'static str) -> Result<f64> {
    check_time(func, t)?;
    let g = p.baseline();
    let (ln_phi, _) = g.log_cdf_sf(t);
    let phi = ln_phi.exp();
    let ln_g = g.ln_pdf_unchecked(t);
    let (a, b) = (p.a(), p.b());

    let mut total = 0.0;
    let mut abs_total = 0.0;
    let mut outer = TailTest::new();
    for k in 0..tr.k_max {
        let m0 = b * (k as f64 + 1.0);
        // log |term| at j = 0; later terms follow from the ratio recurrence
        let mut ln_term = ln_abs_weight(k, 0, a, b)
            + match kind {
                Kind::Pdf => m0.ln() + ln_g + (m0 - 1.0) * ln_phi,
                Kind::Cdf => m0 * ln_phi,
            };
        let mut row = 0.0;
        let mut inner = TailTest::new();
        let mut done = false;
        for j in 0..tr.j_max {
            let term = ln_term.exp();
            row += term;
            let jf = j as f64;
            let ratio = match kind {
                Kind::Pdf => (m0 + jf + 1.0) / (jf + 1.0) * phi,
                Kind::Cdf => (m0 + jf) / (jf + 1.0) * phi,
            };
            let tail = if ratio < 1.0 { term * ratio / (1.0 - ratio) } else { f64::INFINITY };
            if inner.push(tail, row, tr.tol) {
                done = true;
                break;
            }
            if ratio == 0.0 {
                done = true;
                break;
            }
            ln_term += ratio.ln();
        }
        if !done {
            return Err(no_convergence(
                func,
                format!("inner sum for k = {k} not settled within {} terms at t = {t}", tr.j_max),
            ));
        }
        if !row.is_finite() {
            return Err(overflow(func, format!("row {k} of the mixture overflows at t = {t}")));
        }
        let signed = if k % 2 == 0 { row } else { -row };
        total += signed;
        abs_total += row;
        if outer.push(row, total, tr.tol) {
            if abs_total > MAX_CANCELLATION * total.abs() {
                return Err(no_convergence(
                    func,
                    format!("alternating rows cancel: sum of magnitudes {abs_total:e} vs value {total:e}"),
                ));
            }
            return Ok(total);
        }
    }
    Err(no_convergence(
        func,
        format!("outer sum not settled within {} rows at t = {t}", tr.k_max),
    ))
}

/// Truncated mixture density `Σ w_{k,j} h_{b(k+1)+j}(t)` with tail checks.
pub fn pdf_series(t: f64, p: &WbsParams, tr: &SeriesTruncation) -> Result<f64> {
    mixture_sum(t, p, tr, Kind::Pdf, "pdf_series")
}

/// Truncated mixture cdf `Σ w_{k,j} H_{b(k+1)+j}(t)` with tail checks.
pub fn cdf_series(t: f64, p: &WbsParams, tr: &SeriesTruncation) -> Result<f64> {
    mixture_sum(t, p, tr, Kind::Cdf, "cdf_series")
}

/// Plain partial sum of the mixture density over `k < k_terms`, `j < j_terms`,
/// with no convergence test.
pub fn pdf_series_partial(t: f64, p: &WbsParams, k_terms: usize, j_terms: usize) -> Result<f64> {
    check_time("pdf_series_partial", t)?;
    let mut sum = 0.0;
    for k in 0..k_terms {
        for j in 0..j_terms {
            let m = p.b() * (k as f64 + 1.0) + j as f64;
            let h = EbsParams::new(p.alpha(), p.beta(), m)?.pdf(t)?;
            sum += mixture_weight(k, j, p.a(), p.b())? * h;
        }
    }
    Ok(sum)
}

/// Generalized binomial coefficient `C(x, i)` by the product recurrence.
fn gen_binomial(x: f64, i: usize) -> f64 {
    let mut c = 1.0;
    for l in 0..i {
        c *= (x - l as f64) / (l as f64 + 1.0);
    }
    c
}

fn nearest_integer(m: f64) -> Option<usize> {
    let r = m.round();
    if (m - r).abs() <= 1e-12 * m.abs().max(1.0) && r >= 0.0 {
        Some(r as usize)
    } else {
        None
    }
}

/// `s_r(m) = Σ_{l ≥ r} (−1)^{l+r} C(m, l) C(l, r)` with generalized binomials.
///
/// Since `C(m, l) C(l, r) = C(m, r) C(m − r, l − r)` the sum is
/// `C(m, r) Σ_i (−1)^i C(m − r, i)`. For integer `m` it terminates and equals
/// one when `r = m`, zero otherwise. For non-integer `m` the inner series is
/// `(1 − 1)^{m − r}`: it converges (to zero, slowly) when `m > r` and diverges
/// when `m < r`; both cases are reported when `r_max` terms do not settle it.
pub fn sr_coefficient(r: usize, m: f64, tr: &SeriesTruncation) -> Result<f64> {
    if !(m > 0.0 && m.is_finite()) {
        return Err(domain("sr_coefficient", format!("m = {m} must be positive")));
    }
    if let Some(mi) = nearest_integer(m) {
        return Ok(if mi == r { 1.0 } else { 0.0 });
    }
    let x = m - r as f64;
    let lead = gen_binomial(m, r);
    let mut sum = 0.0;
    let mut largest: f64 = 0.0;
    let mut c: f64 = 1.0;
    let mut hits = 0;
    for i in 0..tr.r_max {
        let term = if i % 2 == 0 { c } else { -c };
        sum += term;
        largest = largest.max(term.abs());
        // the partial sum through term i equals term·(x − i)/x, which bounds the tail
        let tail = term.abs() * (x - i as f64).abs() / x.abs();
        if tail <= tr.tol {
            hits += 1;
            if hits >= 3 {
                if largest * f64::EPSILON * 16.0 > tr.tol.max(f64::EPSILON) {
                    return Err(no_convergence(
                        "sr_coefficient",
                        format!("terms up to {largest:e} cancel to {sum:e} for m = {m}, r = {r}"),
                    ));
                }
                return Ok(lead * sum);
            }
        } else {
            hits = 0;
        }
        c *= (x - i as f64) / (i as f64 + 1.0);
    }
    Err(no_convergence(
        "sr_coefficient",
        format!("series for s_{r}({m}) not settled within {} terms (m - r = {x})", tr.r_max),
    ))
}

/// Sum over mixture pairs `(k, j)` of `weight(k, j, m) · s_r(shift(m))`.
fn power_coefficient(
    r: usize,
    p: &WbsParams,
    tr: &SeriesTruncation,
    shift: f64,
    scale_by_m: bool,
) -> Result<f64> {
    let (a, b) = (p.a(), p.b());
    let mut total = 0.0;
    let mut abs_total = 0.0;
    match nearest_integer(b) {
        Some(bi) if bi > 0 => {
            // integer b: s_r(m − shift) is a Kronecker delta, one j per k
            let target = r as f64 + shift;
            for k in 0..tr.k_max {
                let m0 = bi * (k + 1);
                let tj = target as usize;
                if m0 > tj {
                    break;
                }
                let j = tj - m0;
                if j >= tr.j_max {
                    continue;
                }
                let w = mixture_weight(k, j, a, b)?;
                let term = if scale_by_m { w * target } else { w };
                total += term;
                abs_total += term.abs();
            }
        }
        _ => {
            for k in 0..tr.k_max {
                for j in 0..tr.j_max {
                    let m = b * (k as f64 + 1.0) + j as f64;
                    let s = sr_coefficient(r, m - shift, tr)?;
                    let w = mixture_weight(k, j, a, b)?;
                    let term = if scale_by_m { w * m * s } else { w * s };
                    total += term;
                    abs_total += term.abs();
                }
            }
        }
    }
    if abs_total > MAX_CANCELLATION * total.abs() && abs_total > tr.tol {
        return Err(no_convergence(
            "power_coefficient",
            format!("coefficient {r} loses precision to cancellation ({abs_total:e} vs {total:e})"),
        ));
    }
    Ok(total)
}

/// `d_r = Σ_{k,j} w_{k,j} s_r(bk + b + j)`, the coefficients of `Φ^r` in
/// the power-series form of the cdf: `F(t) = Σ_r d_r Φ(v)^r`.
pub fn dr_coefficient(r: usize, p: &WbsParams, tr: &SeriesTruncation) -> Result<f64> {
    power_coefficient(r, p, tr, 0.0, false)
}

/// `e_r = Σ_{k,j} w_{k,j} m s_r(m − 1)` with `m = bk + b + j`, the coefficients
/// of the density ratio: `f(t)/g(t) = Σ_r e_r Φ(v)^r`.
pub fn density_coefficient(r: usize, p: &WbsParams, tr: &SeriesTruncation) -> Result<f64> {
    power_coefficient(r, p, tr, 1.0, true)
}

/// Probability weighted moment `τ_{p,r} = ∫ t^p g(t) Φ(v)^r dt` of the BS law.
pub fn pwm(p_ord: u32, r: u32, bsp: &BsParams) -> Result<f64> {
    let q = Quadrature::default();
    let pf = p_ord as f64;
    let rf = r as f64;
    q.integrate_lifetime(
        |t| {
            let (ln_phi, _) = bsp.log_cdf_sf(t);
            (pf * t.ln() + bsp.ln_pdf_unchecked(t) + rf * ln_phi).exp()
        },
        0.0,
        f64::INFINITY,
        bsp.beta(),
    )
}

/// Scale for quadrature: the median when it is representable, else β.
fn quad_scale(p: &WbsParams) -> f64 {
    p.median().unwrap_or(p.beta())
}

/// Raw moment `E(T^s)` by quadrature.
pub fn moment(s: u32, p: &WbsParams) -> Result<f64> {
    if s == 0 {
        return Err(domain("moment", "order must be at least 1"));
    }
    let sf = s as f64;
    let q = Quadrature::default();
    let m = q.integrate_lifetime(
        |t| (sf * t.ln() + p.ln_pdf_unchecked(t)).exp(),
        0.0,
        f64::INFINITY,
        quad_scale(p),
    )?;
    if m.is_finite() && m > 0.0 {
        Ok(m)
    } else {
        Err(overflow("moment", format!("E(T^{s}) = {m}")))
    }
}

/// Series route for `E(T^s) = Σ_r e_r τ_{s,r}`, accepted only when three
/// successive increments fall below `tr.tol` relative to the partial sum.
pub fn moment_series(s: u32, p: &WbsParams, tr: &SeriesTruncation) -> Result<f64> {
    let bsp = p.baseline();
    let mut sum = 0.0;
    let mut test = TailTest::new();
    for r in 0..tr.r_max {
        let e = density_coefficient(r, p, tr)?;
        let inc = e * pwm(s, r as u32, &bsp)?;
        sum += inc;
        if test.push(inc, sum, tr.tol) {
            return Ok(sum);
        }
    }
    Err(no_convergence(
        "moment_series",
        format!("partial sums still moving after {} coefficients (last {sum:e})", tr.r_max),
    ))
}

/// Partial first moment `J(q) = ∫_0^q t f(t) dt`.
pub fn partial_moment(q: f64, p: &WbsParams) -> Result<f64> {
    if !(q >= 0.0) {
        return Err(domain("partial_moment", format!("q = {q} must be non-negative")));
    }
    if q == 0.0 {
        return Ok(0.0);
    }
    Quadrature::default().integrate_lifetime(
        |t| (t.ln() + p.ln_pdf_unchecked(t)).exp(),
        0.0,
        q,
        quad_scale(p),
    )
}

/// Mean deviations about the mean (`δ1`) and about the median (`δ2`):
/// `δ1 = 2μF(μ) − 2J(μ)`, `δ2 = μ − 2J(m)`.
pub fn mean_deviations(p: &WbsParams) -> Result<(f64, f64)> {
    let mu = moment(1, p)?;
    let m = p.median()?;
    let d1 = 2.0 * mu * p.cdf(mu)? - 2.0 * partial_moment(mu, p)?;
    let d2 = mu - 2.0 * partial_moment(m, p)?;
    Ok((d1.max(0.0), d2.max(0.0)))
}

/// Lorenz curve `L(π) = J(q)/μ` with `q` the `π` quantile.
pub fn lorenz(p_frac: f64, p: &WbsParams) -> Result<f64> {
    if !(p_frac > 0.0 && p_frac < 1.0) {
        return Err(domain("lorenz", format!("p = {p_frac} not in (0, 1)")));
    }
    let q = p.quantile(p_frac)?;
    Ok((partial_moment(q, p)? / moment(1, p)?).clamp(0.0, 1.0))
}

/// Bonferroni curve `B(π) = L(π)/π`.
pub fn bonferroni(p_frac: f64, p: &WbsParams) -> Result<f64> {
    Ok(lorenz(p_frac, p)? / p_frac)
}

fn check_rank(func: &'static str, i: usize, n: usize) -> Result<()> {
    if i == 0 || i > n {
        return Err(domain(func, format!("rank {i} outside 1..={n}")));
    }
    Ok(())
}

fn ln_factorial(n: usize) -> f64 {
    ln_gamma(n as f64 + 1.0)
}

/// Density of the `i`-th smallest of `n` iid WBS lifetimes,
/// `n!/((i−1)!(n−i)!) f F^{i−1} (1 − F)^{n−i}`, evaluated in log space.
pub fn order_stat_pdf(t: f64, i: usize, n: usize, p: &WbsParams) -> Result<f64> {
    check_rank("order_stat_pdf", i, n)?;
    check_time("order_stat_pdf", t)?;
    let h = p.cum_hazard(t)?;
    let ln_cdf = (-(-h).exp_m1()).ln();
    let ln_norm = ln_factorial(n) - ln_factorial(i - 1) - ln_factorial(n - i);
    let mut ln = ln_norm + p.ln_pdf_unchecked(t) - (n - i) as f64 * h;
    if i > 1 {
        ln += (i - 1) as f64 * ln_cdf;
    }
    Ok(ln.exp())
}

/// The binomially expanded form
/// `n!/((i−1)!(n−i)!) f Σ_{j=0}^{n−i} (−1)^j C(n−i, j) F^{i+j−1}`.
pub fn order_stat_pdf_expanded(t: f64, i: usize, n: usize, p: &WbsParams) -> Result<f64> {
    check_rank("order_stat_pdf_expanded", i, n)?;
    let f = p.pdf(t)?;
    let big = p.cdf(t)?;
    let norm = (ln_factorial(n) - ln_factorial(i - 1) - ln_factorial(n - i)).exp();
    let mut sum = 0.0;
    for j in 0..=(n - i) {
        let c = (ln_factorial(n - i) - ln_factorial(j) - ln_factorial(n - i - j)).exp();
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * c * big.powi((i + j - 1) as i32);
    }
    Ok(norm * f * sum)
}

/// Stress–strength reliability `R = P(T₂ < T₁) = ∫ f₁(t) F₂(t) dt`.
pub fn stress_strength(p1: &WbsParams, p2: &WbsParams) -> Result<f64> {
    let r = Quadrature::new(1e-12, 1e-10).integrate_lifetime(
        |t| {
            let h2 = p2.terms(t).ln_h.exp();
            (p1.ln_pdf_unchecked(t)).exp() * -(-h2).exp_m1()
        },
        0.0,
        f64::INFINITY,
        quad_scale(p1),
    )?;
    Ok(r.clamp(0.0, 1.0))
}

/// `Φ(v)` at `t` under the BS baseline of `p`; used by the power-series checks.
pub fn baseline_cdf(t: f64, p: &WbsParams) -> Result<f64> {
    Ok(std_normal_cdf(p.baseline().v(t)?))
}
