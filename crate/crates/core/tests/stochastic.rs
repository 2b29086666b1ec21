//! Monte-Carlo cross-checks of sampling and of every quadrature-based quantity.

use wbs_core::gof::ks_test;
use wbs_core::series::{mean_deviations, moment, order_stat_pdf, partial_moment, pwm, stress_strength};
use wbs_core::{mle, BsParams, CounterRng, FitOptions, RngSeed, Sample, WbsParams};

fn w(alpha: f64, beta: f64, a: f64, b: f64) -> WbsParams {
    WbsParams::new(alpha, beta, a, b).unwrap()
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

#[test]
fn sampler_passes_ks_against_exact_cdf() {
    let p = w(2.5, 2.5, 2.0, 4.0);
    let draws = p.sample(1000, RngSeed(42)).unwrap();
    let s = Sample::new(draws).unwrap();
    let (_, pv) = ks_test(&s, |t| p.cdf(t)).unwrap();
    assert!(pv > 0.01, "p = {pv}");
}

#[test]
fn sampler_matches_for_several_shapes() {
    for (i, p) in [w(0.5, 1.0, 0.5, 2.0), w(1.0, 2.0, 0.5, 1.0), w(0.2007, 3.4802, 0.1185, 0.2323)]
        .iter()
        .enumerate()
    {
        let s = Sample::new(p.sample(2000, RngSeed(100 + i as u64)).unwrap()).unwrap();
        let (_, pv) = ks_test(&s, |t| p.cdf(t)).unwrap();
        assert!(pv > 0.01, "{p:?}: p = {pv}");
    }
}

#[test]
fn stress_strength_quadrature_vs_simulation() {
    let strength = w(1.0, 2.0, 1.0, 1.0);
    let stress = w(1.0, 1.0, 0.5, 1.5);
    let exact = stress_strength(&strength, &stress).unwrap();
    let n = 200_000;
    let t1 = strength.sample(n, RngSeed(5)).unwrap();
    let t2 = stress.sample(n, RngSeed(6)).unwrap();
    let hits = t1.iter().zip(&t2).filter(|(a, b)| b < a).count();
    let mc = hits as f64 / n as f64;
    assert!((mc - exact).abs() < 3e-3, "{mc} vs {exact}");
    assert!((stress_strength(&stress, &stress).unwrap() - 0.5).abs() < 1e-8);
}

#[test]
fn order_statistic_density_vs_simulation() {
    let p = w(1.0, 1.0, 1.0, 1.0);
    let (i, n) = (3, 5);
    let mut rng = CounterRng::new(RngSeed(7));
    let reps = 40_000;
    let mut below = 0;
    let cut = p.median().unwrap();
    for _ in 0..reps {
        let mut x = p.sample_with(n, &mut rng).unwrap();
        x.sort_by(f64::total_cmp);
        if x[i - 1] <= cut {
            below += 1;
        }
    }
    // P(T_(3:5) ≤ median) by integrating the order-statistic density
    let q = wbs_core::quad::Quadrature::default();
    let exact = q.integrate(|t| order_stat_pdf(t, i, n, &p).unwrap(), 0.0, cut).unwrap();
    assert!((exact - 0.5).abs() < 1e-8);
    let mc = below as f64 / reps as f64;
    assert!((mc - exact).abs() < 0.01, "{mc} vs {exact}");
}

#[test]
fn moments_vs_simulation() {
    let p = w(0.5, 1.7, 0.8, 1.2);
    let x = p.sample(400_000, RngSeed(21)).unwrap();
    let m1 = mean(&x);
    let m2 = mean(&x.iter().map(|t| t * t).collect::<Vec<_>>());
    let e1 = moment(1, &p).unwrap();
    let e2 = moment(2, &p).unwrap();
    let sd = (e2 - e1 * e1).sqrt();
    assert!((m1 - e1).abs() < 4.0 * sd / (x.len() as f64).sqrt(), "{m1} vs {e1}");
    assert!(((m2 - e2) / e2).abs() < 0.01, "{m2} vs {e2}");

    let q = p.quantile(0.4).unwrap();
    let j = partial_moment(q, &p).unwrap();
    let jm = x.iter().filter(|&&t| t <= q).sum::<f64>() / x.len() as f64;
    assert!((j - jm).abs() < 0.01 * j.max(1e-3), "{jm} vs {j}");

    let (d1, d2) = mean_deviations(&p).unwrap();
    let med = p.median().unwrap();
    let md1 = mean(&x.iter().map(|t| (t - e1).abs()).collect::<Vec<_>>());
    let md2 = mean(&x.iter().map(|t| (t - med).abs()).collect::<Vec<_>>());
    assert!(((md1 - d1) / d1).abs() < 0.01, "{md1} vs {d1}");
    assert!(((md2 - d2) / d2).abs() < 0.01, "{md2} vs {d2}");
}

#[test]
fn pwm_vs_simulation() {
    // τ_{p,r} = E[T^p Φ(v(T))^r] for T from the BS baseline
    let g = BsParams::new(0.6, 2.0).unwrap();
    let mut rng = CounterRng::new(RngSeed(31));
    let n = 400_000;
    let (mut acc, mut acc2) = (0.0, 0.0);
    for _ in 0..n {
        let u = rng.next_uniform();
        let t = g.quantile(u).unwrap();
        let v = t * u * u;
        acc += v;
        acc2 += v * v;
    }
    let m = acc / n as f64;
    let sd = (acc2 / n as f64 - m * m).sqrt();
    let tau = pwm(1, 2, &g).unwrap();
    assert!((m - tau).abs() < 4.0 * sd / (n as f64).sqrt(), "{m} vs {tau}");
}

#[test]
#[ignore = "b lands 20% (about two standard errors) from the truth with this generator's seed-11 stream"]
fn simulation_recovery_within_fifteen_percent() {
    let truth = w(1.0, 2.0, 0.5, 1.0);
    let s = Sample::new(truth.sample(2000, RngSeed(11)).unwrap()).unwrap();
    let fit = mle::fit(&s, &FitOptions::default()).unwrap();
    assert!(fit.converged);
    for (est, want) in fit.params.to_array().iter().zip(truth.to_array()) {
        assert!(((est - want) / want).abs() < 0.15, "{:?}", fit.params);
    }
}

#[test]
fn simulation_recovery_within_standard_errors() {
    let truth = w(1.0, 2.0, 0.5, 1.0);
    for seed in 11..15 {
        let s = Sample::new(truth.sample(2000, RngSeed(seed)).unwrap()).unwrap();
        let fit = mle::fit(&s, &FitOptions::default()).unwrap();
        assert!(fit.converged);
        assert!(fit.loglik >= mle::loglik(&s, &truth));
        let se = fit.std_errors().unwrap();
        for ((est, want), se) in fit.params.to_array().iter().zip(truth.to_array()).zip(se) {
            assert!((est - want).abs() < 3.0 * se, "seed {seed}: {:?}", fit.params);
        }
    }
}
