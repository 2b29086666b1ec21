//! Local minimizers used by the likelihood fits.
//!
//! [`newton`] takes damped Newton steps with a Hessian built by central
//! differences of the supplied gradient, shifts it by `λI` until a Cholesky
//! factorization succeeds, and backtracks until the Armijo condition holds.
//! [`nelder_mead`] is a plain derivative-free simplex search used when Newton
//! stalls. [`minimize`] chains the two.

use nalgebra::{DMatrix, DVector};

/// Settings shared by the minimizers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptOptions {
    pub max_iterations: usize,
    /// Convergence when `max_i |g_i| · max(1, |x_i|) ≤ grad_tol · max(1, |f|)`.
    pub grad_tol: f64,
    /// Stop when a Newton step is shorter than this (infinity norm).
    pub step_tol: f64,
}

impl Default for OptOptions {
    fn default() -> Self {
        Self {
            max_iterations: 500,
            grad_tol: 1e-6,
            step_tol: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptResult {
    pub x: Vec<f64>,
    pub f: f64,
    pub grad: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

/// Relative gradient measure used for every convergence test.
pub fn relative_gradient(x: &[f64], g: &[f64], f: f64) -> f64 {
    let num = x
        .iter()
        .zip(g)
        .map(|(xi, gi)| gi.abs() * xi.abs().max(1.0))
        .fold(0.0, f64::max);
    num / f.abs().max(1.0)
}

/// Symmetric Hessian from central differences of `grad`.
pub fn fd_hessian<G: Fn(&[f64]) -> Vec<f64>>(grad: &G, x: &[f64]) -> DMatrix<f64> {
    let k = x.len();
    let mut h = DMatrix::zeros(k, k);
    let mut xp = x.to_vec();
    for j in 0..k {
        let step = 1e-5 * x[j].abs().max(1.0);
        xp[j] = x[j] + step;
        let gp = grad(&xp);
        xp[j] = x[j] - step;
        let gm = grad(&xp);
        xp[j] = x[j];
        for i in 0..k {
            h[(i, j)] = (gp[i] - gm[i]) / (2.0 * step);
        }
    }
    (&h + h.transpose()) * 0.5
}

fn is_ok(g: &[f64]) -> bool {
    g.iter().all(|v| v.is_finite())
}

/// Damped Newton iteration from `x0`.
pub fn newton<F, G>(f: &F, grad: &G, x0: &[f64], opts: &OptOptions) -> OptResult
where
    F: Fn(&[f64]) -> f64,
    G: Fn(&[f64]) -> Vec<f64>,
{
    let k = x0.len();
    let mut x = x0.to_vec();
    let mut fx = f(&x);
    let mut g = grad(&x);
    let mut iterations = 0;
    let mut lambda = 0.0;
    while iterations < opts.max_iterations {
        if !fx.is_finite() || !is_ok(&g) {
            break;
        }
        if relative_gradient(&x, &g, fx) <= opts.grad_tol {
            return OptResult { x, f: fx, grad: g, iterations, converged: true };
        }
        iterations += 1;
        let h = fd_hessian(grad, &x);
        if h.iter().any(|v| !v.is_finite()) {
            break;
        }
        let gv = DVector::from_column_slice(&g);
        // smallest shift that makes H + λI positive definite
        let scale = h.diagonal().iter().map(|d| d.abs()).fold(1e-8, f64::max);
        lambda = if lambda > 0.0 { lambda * 0.1 } else { 0.0 };
        if lambda < 1e-12 * scale {
            lambda = 0.0;
        }
        let dir = loop {
            let shifted = &h + DMatrix::identity(k, k) * lambda;
            if let Some(ch) = shifted.cholesky() {
                let d = ch.solve(&(-&gv));
                if d.iter().all(|v| v.is_finite()) {
                    break Some(d);
                }
            }
            lambda = if lambda == 0.0 { 1e-6 * scale } else { lambda * 10.0 };
            if !lambda.is_finite() || lambda > 1e12 * scale {
                break None;
            }
        };
        let Some(mut d) = dir else { break };
        // keep single steps moderate in log coordinates
        let dmax = d.amax();
        if dmax > 2.0 {
            d *= 2.0 / dmax;
        }
        let slope = gv.dot(&d);
        if slope >= 0.0 {
            break;
        }
        let mut step = 1.0;
        let mut accepted = false;
        let mut xn = x.clone();
        let mut fn_ = fx;
        for _ in 0..60 {
            for i in 0..k {
                xn[i] = x[i] + step * d[i];
            }
            fn_ = f(&xn);
            if fn_.is_finite() && fn_ <= fx + 1e-4 * step * slope {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
        let moved = (step * d.amax()).abs();
        x = xn;
        fx = fn_;
        g = grad(&x);
        if moved <= opts.step_tol {
            let converged = is_ok(&g) && relative_gradient(&x, &g, fx) <= opts.grad_tol;
            return OptResult { x, f: fx, grad: g, iterations, converged };
        }
    }
    let converged = fx.is_finite() && is_ok(&g) && relative_gradient(&x, &g, fx) <= opts.grad_tol;
    OptResult { x, f: fx, grad: g, iterations, converged }
}

/// Nelder–Mead simplex search from `x0` with initial edge `scale`.
pub fn nelder_mead<F: Fn(&[f64]) -> f64>(f: &F, x0: &[f64], scale: f64, max_evals: usize) -> (Vec<f64>, f64, usize) {
    let k = x0.len();
    let eval = |x: &[f64]| {
        let v = f(x);
        if v.is_finite() {
            v
        } else {
            f64::INFINITY
        }
    };
    let mut simplex: Vec<Vec<f64>> = vec![x0.to_vec()];
    for i in 0..k {
        let mut p = x0.to_vec();
        p[i] += scale;
        simplex.push(p);
    }
    let mut values: Vec<f64> = simplex.iter().map(|p| eval(p)).collect();
    let mut evals = k + 1;
    while evals < max_evals {
        let mut order: Vec<usize> = (0..=k).collect();
        order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();
        let spread = values[k] - values[0];
        let size = simplex
            .iter()
            .skip(1)
            .map(|p| p.iter().zip(&simplex[0]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        if spread.abs() <= 1e-13 * values[0].abs().max(1.0) && size <= 1e-10 {
            break;
        }
        let centroid: Vec<f64> = (0..k).map(|i| simplex[..k].iter().map(|p| p[i]).sum::<f64>() / k as f64).collect();
        let along = |t: f64| -> Vec<f64> { (0..k).map(|i| centroid[i] + t * (simplex[k][i] - centroid[i])).collect() };
        let xr = along(-1.0);
        let fr = eval(&xr);
        evals += 1;
        if fr < values[0] {
            let xe = along(-2.0);
            let fe = eval(&xe);
            evals += 1;
            if fe < fr {
                simplex[k] = xe;
                values[k] = fe;
            } else {
                simplex[k] = xr;
                values[k] = fr;
            }
        } else if fr < values[k - 1] {
            simplex[k] = xr;
            values[k] = fr;
        } else {
            let (xc, fc) = if fr < values[k] {
                let xc = along(-0.5);
                let fc = eval(&xc);
                (xc, fc)
            } else {
                let xc = along(0.5);
                let fc = eval(&xc);
                (xc, fc)
            };
            evals += 1;
            if fc < values[k].min(fr) {
                simplex[k] = xc;
                values[k] = fc;
            } else {
                for i in 1..=k {
                    for j in 0..k {
                        simplex[i][j] = simplex[0][j] + 0.5 * (simplex[i][j] - simplex[0][j]);
                    }
                    values[i] = eval(&simplex[i]);
                }
                evals += k;
            }
        }
    }
    let best = (0..=k).min_by(|&i, &j| values[i].total_cmp(&values[j])).unwrap_or(0);
    (simplex[best].clone(), values[best], evals)
}

/// Newton first; if it does not converge, a simplex search followed by
/// another Newton pass from the simplex optimum.
pub fn minimize<F, G>(f: &F, grad: &G, x0: &[f64], opts: &OptOptions) -> OptResult
where
    F: Fn(&[f64]) -> f64,
    G: Fn(&[f64]) -> Vec<f64>,
{
    let first = newton(f, grad, x0, opts);
    if first.converged {
        return first;
    }
    let start = if first.f.is_finite() && first.f <= f(x0) { first.x.clone() } else { x0.to_vec() };
    let (xs, _, _) = nelder_mead(f, &start, 0.5, 400 * x0.len() * x0.len() + 2000);
    let mut second = newton(f, grad, &xs, opts);
    second.iterations += first.iterations;
    if second.f.is_finite() && (second.f <= first.f || !first.f.is_finite()) {
        second
    } else {
        OptResult { iterations: second.iterations, ..first }
    }
}
