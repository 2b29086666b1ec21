//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary (`harness = false`). The exit status is zero once
//! every criterion has been evaluated; set `WBS_ACCEPTANCE_STRICT=1` to turn
//! any FAIL into a nonzero exit.

use std::time::{Duration, Instant};

use wbs_core::competitors::{fit_all, ModelFit};
use wbs_core::datasets::{MEEKER_ESCOBAR, TURBOCHARGER};
use wbs_core::gof::{gof_report, ks_test, GofReport};
use wbs_core::quad::Quadrature;
use wbs_core::series::{order_stat_pdf, pdf_series, stress_strength};
use wbs_core::{mle, CounterRng, Family, FitOptions, RngSeed, Sample, SeriesTruncation, WbsParams};

const DEVICES_WBS: [f64; 4] = [0.8152, 22.9053, 0.1115, 0.2683];
const DEVICES_WBS_SE: [f64; 4] = [0.5466, 13.5555, 0.0674, 0.2193];
const DEVICES_BS: [f64; 2] = [1.6778, 64.0791];
const DEVICES_BS_SE: [f64; 2] = [0.2218, 14.5028];
const TURBO_WBS: [f64; 4] = [0.2007, 3.4802, 0.1185, 0.2323];
const TURBO_WBS_SE: [f64; 4] = [0.127081, 0.626594, 0.072865, 0.255233];
const TURBO_BS: [f64; 2] = [0.4139, 5.7538];
const TURBO_BS_SE: [f64; 2] = [0.0463, 0.3684];

/// Published −2ℓ per family in `Family::ALL` order.
const DEVICES_NEG2LL: [f64; 8] = [352.8431, 357.8659, 363.1652, 362.5005, 367.4188, 366.5623, 368.9539, 385.5103];
const TURBO_NEG2LL: [f64; 8] = [157.1875, 164.9313, 167.0805, 166.1958, 173.4768, 173.0616, 180.8146, 182.7348];

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self { pass, detail: detail.into() }
    }
}

struct Fitted {
    sample: Sample,
    fits: Vec<ModelFit>,
    reports: Vec<GofReport>,
    elapsed: Duration,
}

impl Fitted {
    fn new(data: &[f64]) -> Self {
        let sample = Sample::new(data.to_vec()).unwrap();
        let t0 = Instant::now();
        let fits: Vec<ModelFit> = fit_all(&Family::ALL, &sample, &FitOptions::default())
            .into_iter()
            .map(|r| r.expect("every family returns a fit"))
            .collect();
        let elapsed = t0.elapsed();
        let reports = fits.iter().map(|f| gof_report(f, &sample).unwrap()).collect();
        Self { sample, fits, reports, elapsed }
    }

    fn get(&self, family: Family) -> (&ModelFit, &GofReport) {
        let i = Family::ALL.iter().position(|&f| f == family).unwrap();
        (&self.fits[i], &self.reports[i])
    }
}

fn within(x: f64, want: f64, tol: f64) -> bool {
    (x - want).abs() <= tol
}

fn criterion_1() -> Outcome {
    let s = Sample::new(MEEKER_ESCOBAR.to_vec()).unwrap();
    let t0 = Instant::now();
    let fit = wbs_core::competitors::model_fit(Family::Wbs, &s, &FitOptions::default()).unwrap();
    let elapsed = t0.elapsed();
    let r = gof_report(&fit, &s).unwrap();
    let checks = [
        ("-2ll", r.neg2loglik, 352.8431, 0.5),
        ("AIC", r.aic, 360.8431, 0.5),
        ("BIC", r.bic, 366.4479, 0.5),
        ("CAIC", r.caic, 362.4431, 0.5),
        ("K-S", r.ks_stat, 0.1685, 0.01),
    ];
    let pass = checks.iter().all(|&(_, x, w, t)| within(x, w, t)) && elapsed < Duration::from_secs(10);
    let detail = checks
        .iter()
        .map(|(n, x, w, _)| format!("{n} {x:.4} (want {w})"))
        .collect::<Vec<_>>()
        .join(", ");
    Outcome::new(pass, format!("{detail}; {:.2?}", elapsed))
}

fn criterion_2(d2: &Fitted) -> Outcome {
    let (_, w) = d2.get(Family::Wbs);
    let (_, b) = d2.get(Family::Bs);
    let pass = within(w.neg2loglik, 157.1875, 0.5) && within(w.ks_stat, 0.0778, 0.01) && within(b.neg2loglik, 182.7348, 0.2);
    Outcome::new(
        pass,
        format!(
            "WBS -2ll {:.4} (want 157.1875), K-S {:.4} (want 0.0778); BS -2ll {:.4} (want 182.7348)",
            w.neg2loglik, w.ks_stat, b.neg2loglik
        ),
    )
}

fn recovered(est: &[f64], want: &[f64], se: &[f64], rel: f64) -> Vec<usize> {
    (0..est.len())
        .filter(|&i| {
            let close = ((est[i] - want[i]) / want[i]).abs() <= rel;
            !(close || (est[i] - want[i]).abs() <= se[i])
        })
        .collect()
}

fn criterion_3(d1: &Fitted, d2: &Fitted) -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, data, wbs_ref, wbs_se, bs_ref) in [
        ("devices", d1, DEVICES_WBS, DEVICES_WBS_SE, DEVICES_BS),
        ("turbo", d2, TURBO_WBS, TURBO_WBS_SE, TURBO_BS),
    ] {
        let w = data.get(Family::Wbs).0.spec.params().to_vec();
        let bad = recovered(&w, &wbs_ref, &wbs_se, 0.02);
        let b = data.get(Family::Bs).0.spec.params().to_vec();
        let bad_bs: Vec<usize> = (0..2).filter(|&i| ((b[i] - bs_ref[i]) / bs_ref[i]).abs() > 0.01).collect();
        pass &= bad.is_empty() && bad_bs.is_empty();
        parts.push(format!("{name} WBS {w:.4?} off {bad:?}, BS {b:.4?} off {bad_bs:?}"));
    }
    Outcome::new(pass, parts.join("; "))
}

fn criterion_4(d1: &Fitted, d2: &Fitted) -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, data, table) in [("devices", d1, DEVICES_NEG2LL), ("turbo", d2, TURBO_NEG2LL)] {
        let (_, w) = data.get(Family::Wbs);
        let metrics = |r: &GofReport| [r.neg2loglik, r.aic, r.bic, r.caic, r.ks_stat];
        let wm = metrics(w);
        let mut beaten = Vec::new();
        for (f, r) in Family::ALL.iter().zip(&data.reports).skip(1) {
            let m = metrics(r);
            if (0..5).any(|i| m[i] <= wm[i]) {
                beaten.push(f.name());
            }
        }
        let mut off = Vec::new();
        for ((f, r), want) in Family::ALL.iter().zip(&data.reports).zip(table).skip(1) {
            if !within(r.neg2loglik, want, 2.0) {
                off.push(format!("{} {:.2} vs {want}", f.name(), r.neg2loglik));
            }
        }
        pass &= beaten.is_empty() && off.is_empty();
        parts.push(format!("{name}: WBS not strictly best against {beaten:?}; rows off by > 2: [{}]", off.join(", ")));
    }
    Outcome::new(pass, parts.join("; "))
}

/// Five-point central difference of the log-likelihood along coordinate `i`.
fn fd_score(s: &Sample, p: &[f64; 4], i: usize) -> f64 {
    let h = 1e-4 * p[i];
    let at = |d: f64| {
        let mut q = *p;
        q[i] += d;
        mle::loglik(s, &WbsParams::from_slice(&q).unwrap())
    };
    (8.0 * (at(h) - at(-h)) - (at(2.0 * h) - at(-2.0 * h))) / (12.0 * h)
}

fn criterion_5() -> Outcome {
    let t0 = Instant::now();
    let mut worst: f64 = 0.0;
    for (data, centre, seed) in [(&MEEKER_ESCOBAR[..], DEVICES_WBS, 501), (&TURBOCHARGER[..], TURBO_WBS, 502)] {
        let s = Sample::new(data.to_vec()).unwrap();
        let mut rng = CounterRng::new(RngSeed(seed));
        for _ in 0..20 {
            let mut p = centre;
            for x in p.iter_mut() {
                *x *= (rng.next_uniform() - 0.5).exp();
            }
            let score = mle::score(&s, &WbsParams::from_slice(&p).unwrap()).unwrap();
            for i in 0..4 {
                let fd = fd_score(&s, &p, i);
                worst = worst.max((score[i] - fd).abs() / fd.abs().max(1e-8));
            }
        }
    }
    let elapsed = t0.elapsed();
    Outcome::new(
        worst <= 1e-5 && elapsed < Duration::from_secs(5),
        format!("max componentwise rel. err {worst:.2e} over 40 points; {elapsed:.2?}"),
    )
}

fn criterion_6(d1: &Fitted, d2: &Fitted) -> Outcome {
    let grid = [
        DEVICES_WBS,
        TURBO_WBS,
        [1.0, 1.0, 1.0, 1.0],
        [0.5, 1.7, 0.2, 0.4],
        [2.5, 2.5, 2.0, 4.0],
        [1.0, 2.0, 0.5, 1.0],
    ];
    let mut roundtrip: f64 = 0.0;
    for p in grid {
        let w = WbsParams::from_slice(&p).unwrap();
        for k in 1..100 {
            let u = k as f64 / 100.0;
            roundtrip = roundtrip.max((w.cdf(w.quantile(u).unwrap()).unwrap() - u).abs());
        }
    }
    let q = Quadrature { max_intervals: 20_000, ..Quadrature::default() };
    let mut bad = Vec::new();
    let mut worst: f64 = 0.0;
    for (name, data) in [("devices", d1), ("turbo", d2)] {
        for f in &data.fits {
            // split at the baseline median, where small-α fits change steeply
            let beta = f.spec.params()[1];
            let pdf = |t: f64| f.spec.pdf(t).unwrap_or(f64::NAN);
            let total = q
                .integrate_lifetime(pdf, 0.0, beta, beta)
                .and_then(|lo| Ok(lo + q.integrate_lifetime(pdf, beta, f64::INFINITY, beta)?));
            match total {
                Ok(v) if within(v, 1.0, 1e-7) => worst = worst.max((v - 1.0).abs()),
                Ok(v) => bad.push(format!("{name}/{} {v:.10}", f.family())),
                Err(e) => bad.push(format!("{name}/{}: {e}", f.family())),
            }
        }
    }
    Outcome::new(
        roundtrip <= 1e-9 && bad.is_empty(),
        format!(
            "roundtrip max err {roundtrip:.2e} on 99x6; integrals max |1 - I| {worst:.2e} over {} fits; failing [{}]",
            d1.fits.len() + d2.fits.len(),
            bad.join(", ")
        ),
    )
}

fn criterion_7() -> Outcome {
    let tr = SeriesTruncation::default();
    let mut worst: f64 = 0.0;
    let mut errors = Vec::new();
    for p in [[1.0, 1.0, 0.1, 0.5], TURBO_WBS, [0.5, 2.0, 0.2, 1.0]] {
        let w = WbsParams::from_slice(&p).unwrap();
        // the inner sums are power series in the baseline Φ, so abscissae are
        // placed by baseline probability
        for u in [0.1, 0.3, 0.5, 0.7, 0.9] {
            let t = w.baseline().quantile(u).unwrap();
            let exact = w.pdf(t).unwrap();
            match pdf_series(t, &w, &tr) {
                Ok(v) => worst = worst.max(((v - exact) / exact).abs()),
                Err(e) => errors.push(format!("{p:?} u={u}: {e}")),
            }
        }
    }
    let outside = WbsParams::new(2.5, 2.5, 2.0, 4.0).unwrap();
    let t = outside.baseline().quantile(0.999).unwrap();
    let detected = pdf_series(t, &outside, &tr).is_err();
    Outcome::new(
        worst <= 1e-4 && errors.is_empty() && detected,
        format!(
            "max rel. err {worst:.2e} at 15 points; errors [{}]; divergence outside region reported: {detected}",
            errors.join(", ")
        ),
    )
}

fn criterion_8() -> Outcome {
    let p = WbsParams::new(2.5, 2.5, 2.0, 4.0).unwrap();
    let s = Sample::new(p.sample(1000, RngSeed(42)).unwrap()).unwrap();
    let (_, ks_p) = ks_test(&s, |t| p.cdf(t)).unwrap();

    let same = stress_strength(&p, &p).unwrap();
    let q = WbsParams::new(1.0, 2.0, 1.0, 1.0).unwrap();
    let r = WbsParams::new(1.0, 1.0, 0.5, 1.5).unwrap();
    let exact = stress_strength(&q, &r).unwrap();
    let n = 200_000;
    let t1 = q.sample(n, RngSeed(5)).unwrap();
    let t2 = r.sample(n, RngSeed(6)).unwrap();
    let mc = t1.iter().zip(&t2).filter(|(a, b)| b < a).count() as f64 / n as f64;

    let quad = Quadrature::default();
    let w = WbsParams::new(1.0, 1.0, 1.0, 1.0).unwrap();
    let m = w.median().unwrap();
    let mut worst: f64 = 0.0;
    for (i, k) in [(1, 1), (1, 5), (3, 5), (5, 5), (7, 10)] {
        let total = quad
            .integrate_lifetime(|t| order_stat_pdf(t, i, k, &w).unwrap(), 0.0, f64::INFINITY, m)
            .unwrap();
        worst = worst.max((total - 1.0).abs());
    }
    let pass = ks_p > 0.01 && within(same, 0.5, 1e-8) && within(mc, exact, 3e-3) && worst <= 1e-7;
    Outcome::new(
        pass,
        format!(
            "sampler K-S p {ks_p:.3}; R(p,p) {same:.10}; R quadrature {exact:.5} vs MC {mc:.5}; order-stat max |1 - I| {worst:.1e}"
        ),
    )
}

fn criterion_9(d1: &Fitted, d2: &Fitted) -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, data, wse, bse) in [
        ("devices", d1, DEVICES_WBS_SE.to_vec(), DEVICES_BS_SE.to_vec()),
        ("turbo", d2, TURBO_WBS_SE.to_vec(), TURBO_BS_SE.to_vec()),
    ] {
        for (family, want) in [(Family::Wbs, wse), (Family::Bs, bse)] {
            let fit = data.get(family).0;
            match &fit.std_errors {
                Some(se) => {
                    let off: Vec<String> = se
                        .iter()
                        .zip(&want)
                        .enumerate()
                        .filter(|(_, (s, w))| ((*s - *w) / *w).abs() > 0.10)
                        .map(|(i, (s, w))| format!("{} {s:.4} vs {w}", family.param_names()[i]))
                        .collect();
                    pass &= off.is_empty();
                    parts.push(format!("{name}/{family} PD, off by > 10%: [{}]", off.join(", ")));
                }
                None => {
                    pass = false;
                    parts.push(format!("{name}/{family} information not positive definite"));
                }
            }
        }
    }
    // the same computation at the published device estimates, for reference
    let s = &d1.sample;
    let j = mle::observed_info_numeric(s, &WbsParams::from_slice(&DEVICES_WBS).unwrap()).unwrap();
    if let Some(c) = mle::spd_inverse(&j) {
        let se: Vec<f64> = (0..4).map(|i| c[i][i].sqrt()).collect();
        parts.push(format!("devices/WBS SEs at the published point {se:.4?}"));
    }
    Outcome::new(pass, parts.join("; "))
}

fn main() {
    let d1 = Fitted::new(&MEEKER_ESCOBAR);
    let d2 = Fitted::new(&TURBOCHARGER);
    println!("fitted 8 families: devices in {:.2?}, turbo in {:.2?}", d1.elapsed, d2.elapsed);
    for (name, data) in [("devices", &d1), ("turbo", &d2)] {
        for (f, r) in data.fits.iter().zip(&data.reports) {
            println!(
                "  {name:8} {:6} -2ll {:9.4} AIC {:9.4} BIC {:9.4} CAIC {:9.4} K-S {:.4} p {:.4} converged {} params {:.4?}",
                f.family().name(),
                r.neg2loglik,
                r.aic,
                r.bic,
                r.caic,
                r.ks_stat,
                r.ks_pvalue,
                f.converged,
                f.spec.params()
            );
        }
    }

    let results = [
        ("1 WBS on device data reproduces -2ll, AIC, BIC, CAIC, K-S", criterion_1()),
        ("2 turbocharger WBS and BS rows", criterion_2(&d2)),
        ("3 WBS and BS parameter recovery", criterion_3(&d1, &d2)),
        ("4 WBS ranks first; competitor rows within 2", criterion_4(&d1, &d2)),
        ("5 analytic score vs finite differences", criterion_5()),
        ("6 quantile roundtrip and unit mass", criterion_6(&d1, &d2)),
        ("7 truncated mixture series", criterion_7()),
        ("8 sampler, stress-strength, order statistics", criterion_8()),
        ("9 observed information and standard errors", criterion_9(&d1, &d2)),
    ];
    let mut failed = 0;
    for (name, o) in &results {
        let tag = if o.pass { "PASS" } else { "FAIL" };
        if !o.pass {
            failed += 1;
        }
        println!("{tag} criterion {name}: {}", o.detail);
    }
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    let strict = std::env::var("WBS_ACCEPTANCE_STRICT").is_ok_and(|v| v == "1");
    if strict && failed > 0 {
        std::process::exit(1);
    }
}
