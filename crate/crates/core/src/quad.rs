//! Globally adaptive Gauss–Kronrod (7/15) quadrature on finite, semi-infinite
//! and doubly infinite intervals.
//!
//! Infinite ranges are mapped onto `(0, 1]` with `x = a + (1 − s)/s`. For
//! integrals over positive lifetimes, [`Quadrature::integrate_lifetime`]
//! first substitutes `t = scale · e^x` so that densities spanning several
//! decades are resolved evenly.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// Tolerances and subdivision budget for adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for Quadrature {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-8,
            max_intervals: 2000,
        }
    }
}

/// Value and error estimate of a converged integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn rescale_error(err: f64, resabs: f64, resasc: f64) -> f64 {
    let mut err = err.abs();
    if resasc != 0.0 && err != 0.0 {
        let scale = (200.0 * err / resasc).powf(1.5);
        err = if scale < 1.0 { resasc * scale } else { resasc };
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    err
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_g = fc * WG[3];
    let mut res_k = fc * WGK[7];
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let err = (res_k - res_g) * half;
    Segment {
        a,
        b,
        value: res_k * half,
        error: rescale_error(err, res_abs * half.abs(), res_asc * half.abs()),
    }
}

impl Quadrature {
    pub fn new(abs_tol: f64, rel_tol: f64) -> Self {
        Self {
            abs_tol,
            rel_tol,
            ..Self::default()
        }
    }

    /// ∫_a^b f(x) dx where either limit may be infinite.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> Result<f64> {
        self.integrate_full(f, a, b).map(|r| r.value)
    }

    /// Like [`Quadrature::integrate`] but also returns the error estimate.
    pub fn integrate_full<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> Result<QuadResult> {
        if a == b {
            return Ok(QuadResult {
                value: 0.0,
                error: 0.0,
                intervals: 0,
            });
        }
        if a > b {
            return self.integrate_full(f, b, a).map(|r| QuadResult {
                value: -r.value,
                ..r
            });
        }
        match (a.is_finite(), b.is_finite()) {
            (true, true) => self.adapt(&f, a, b),
            (true, false) => {
                let g = |s: f64| {
                    let x = a + (1.0 - s) / s;
                    guard(f(x) / (s * s))
                };
                self.adapt(&g, 0.0, 1.0)
            }
            (false, true) => {
                let g = |s: f64| {
                    let x = b - (1.0 - s) / s;
                    guard(f(x) / (s * s))
                };
                self.adapt(&g, 0.0, 1.0)
            }
            (false, false) => {
                let g = |s: f64| {
                    let x = (1.0 - s) / s;
                    guard((f(x) + f(-x)) / (s * s))
                };
                self.adapt(&g, 0.0, 1.0)
            }
        }
    }

    /// ∫_lo^hi f(t) dt over positive `t` (with `lo ≥ 0`, `hi ≤ ∞`) using the
    /// substitution `t = scale · e^x`. `scale` should sit near the bulk of
    /// the integrand, e.g. a median.
    pub fn integrate_lifetime<F: Fn(f64) -> f64>(&self, f: F, lo: f64, hi: f64, scale: f64) -> Result<f64> {
        let x_lo = if lo <= 0.0 { f64::NEG_INFINITY } else { (lo / scale).ln() };
        let x_hi = if hi == f64::INFINITY { f64::INFINITY } else { (hi / scale).ln() };
        let g = |x: f64| {
            let t = scale * x.exp();
            if t == 0.0 || !t.is_finite() {
                return 0.0;
            }
            guard(f(t) * t)
        };
        if x_lo.is_infinite() && x_hi.is_infinite() {
            // split at the scale point so each half maps separately
            let left = self.integrate_full(g, f64::NEG_INFINITY, 0.0)?;
            let right = self.integrate_full(g, 0.0, f64::INFINITY)?;
            return Ok(left.value + right.value);
        }
        self.integrate(g, x_lo, x_hi)
    }

    fn adapt<F: Fn(f64) -> f64>(&self, f: &F, a: f64, b: f64) -> Result<QuadResult> {
        let first = gk15(f, a, b);
        let mut total = first.value;
        let mut total_err = first.error;
        let mut heap = BinaryHeap::new();
        heap.push(first);
        let mut intervals = 1;
        while total_err > self.abs_tol.max(self.rel_tol * total.abs()) {
            if !total.is_finite() || !total_err.is_finite() {
                return Err(Error::Quadrature {
                    estimate: total,
                    error: total_err,
                    intervals,
                });
            }
            if intervals >= self.max_intervals {
                return Err(Error::Quadrature {
                    estimate: total,
                    error: total_err,
                    intervals,
                });
            }
            let seg = heap.pop().expect("heap holds every live segment");
            let mid = 0.5 * (seg.a + seg.b);
            if mid <= seg.a || mid >= seg.b {
                // interval cannot be split further in floating point
                return Err(Error::Quadrature {
                    estimate: total,
                    error: total_err,
                    intervals,
                });
            }
            let left = gk15(f, seg.a, mid);
            let right = gk15(f, mid, seg.b);
            total += left.value + right.value - seg.value;
            total_err += left.error + right.error - seg.error;
            heap.push(left);
            heap.push(right);
            intervals += 1;
        }
        // re-sum to shed accumulated rounding from the running updates
        let value: f64 = heap.iter().map(|s| s.value).sum();
        let error: f64 = heap.iter().map(|s| s.error).sum();
        Ok(QuadResult {
            value,
            error,
            intervals,
        })
    }
}

fn guard(v: f64) -> f64 {
    if v.is_finite() {
        v
    } else {
        0.0
    }
}
