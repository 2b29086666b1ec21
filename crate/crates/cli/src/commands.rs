//! Subcommand bodies and report rendering.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use wbs_core::competitors::fit_all;
use wbs_core::gof::{self, empirical_cdf, gof_report, ks_test};
use wbs_core::series::{mean_deviations, moment};
use wbs_core::{datasets, Family, FitOptions, ModelFit, RngSeed, Sample, WbsParams};

use crate::input::{checksum, Loaded};
use crate::{CliError, Format};

pub const SCHEMA: u32 = 1;

pub struct Sink {
    pub format: Format,
    pub path: Option<PathBuf>,
}

impl Sink {
    fn write(&self, bytes: &[u8]) -> Result<(), CliError> {
        match &self.path {
            Some(p) => fs::write(p, bytes).map_err(|e| CliError::Data(format!("cannot write {}: {e}", p.display()))),
            None => std::io::stdout()
                .write_all(bytes)
                .map_err(|e| CliError::Data(format!("cannot write to stdout: {e}"))),
        }
    }

    fn emit<T: Serialize>(&self, report: &T, rows: impl FnOnce(&mut CsvOut) -> csv::Result<()>) -> Result<(), CliError> {
        let bytes = match self.format {
            Format::Json => {
                let mut v = serde_json::to_vec_pretty(report).map_err(|e| CliError::Numeric(e.to_string()))?;
                v.push(b'\n');
                v
            }
            Format::Csv => csv_bytes(rows)?,
        };
        self.write(&bytes)
    }
}

type CsvOut = csv::Writer<Vec<u8>>;

fn csv_bytes(rows: impl FnOnce(&mut CsvOut) -> csv::Result<()>) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    rows(&mut w).map_err(|e| CliError::Numeric(format!("CSV output: {e}")))?;
    w.into_inner().map_err(|e| CliError::Numeric(format!("CSV output: {e}")))
}

fn opt(x: Option<f64>) -> String {
    x.map_or(String::new(), |v| v.to_string())
}

#[derive(Serialize)]
struct Estimate {
    name: &'static str,
    estimate: f64,
    std_error: Option<f64>,
}

fn estimates(fit: &ModelFit) -> Vec<Estimate> {
    let f = fit.family();
    f.param_names()
        .iter()
        .zip(fit.spec.params())
        .enumerate()
        .map(|(i, (&name, &estimate))| Estimate {
            name,
            estimate,
            std_error: fit.std_errors.as_ref().map(|s| s[i]).filter(|s| s.is_finite()),
        })
        .collect()
}

#[derive(Serialize)]
struct FitRow {
    model: &'static str,
    status: &'static str,
    converged: bool,
    iterations: Option<usize>,
    neg2loglik: Option<f64>,
    params: Vec<Estimate>,
    error: Option<String>,
}

#[derive(Serialize)]
struct OptionsOut {
    starts: usize,
    tol: f64,
    seed: u64,
}

impl From<&FitOptions> for OptionsOut {
    fn from(o: &FitOptions) -> Self {
        Self {
            starts: o.n_starts,
            tol: o.grad_tol,
            seed: o.seed.0,
        }
    }
}

#[derive(Serialize)]
struct FitReport<'a> {
    schema: u32,
    command: &'static str,
    data: &'a str,
    n: usize,
    options: OptionsOut,
    fits: Vec<FitRow>,
}

fn status(fit: &ModelFit) -> &'static str {
    if fit.converged {
        "ok"
    } else {
        "not-converged"
    }
}

fn any_converged(results: &[wbs_core::Result<ModelFit>]) -> bool {
    results.iter().any(|r| r.as_ref().is_ok_and(|f| f.converged))
}

fn universal_failure(results: &[wbs_core::Result<ModelFit>]) -> CliError {
    let reasons: Vec<String> = results
        .iter()
        .filter_map(|r| r.as_ref().err().map(|e| e.to_string()))
        .collect();
    CliError::Numeric(format!("no model converged ({})", reasons.join("; ")))
}

pub fn cmd_fit(d: &Loaded, models: &[Family], opts: &FitOptions, sink: &Sink) -> Result<(), CliError> {
    let results = fit_all(models, &d.sample, opts);
    let fits: Vec<FitRow> = models
        .iter()
        .zip(&results)
        .map(|(&f, r)| match r {
            Ok(fit) => FitRow {
                model: f.name(),
                status: status(fit),
                converged: fit.converged,
                iterations: Some(fit.iterations),
                neg2loglik: Some(fit.neg2loglik()),
                params: estimates(fit),
                error: None,
            },
            Err(e) => FitRow {
                model: f.name(),
                status: "failed",
                converged: false,
                iterations: None,
                neg2loglik: None,
                params: Vec::new(),
                error: Some(e.to_string()),
            },
        })
        .collect();
    let report = FitReport {
        schema: SCHEMA,
        command: "fit",
        data: &d.label,
        n: d.sample.len(),
        options: opts.into(),
        fits,
    };
    sink.emit(&report, |w| {
        w.write_record(["model", "status", "parameter", "estimate", "std_error", "neg2loglik", "iterations"])?;
        for r in &report.fits {
            if r.params.is_empty() {
                w.write_record([r.model, r.status, "", "", "", "", ""])?;
            }
            for p in &r.params {
                w.write_record([
                    r.model.to_string(),
                    r.status.to_string(),
                    p.name.to_string(),
                    p.estimate.to_string(),
                    opt(p.std_error),
                    opt(r.neg2loglik),
                    r.iterations.map_or(String::new(), |i| i.to_string()),
                ])?;
            }
        }
        Ok(())
    })?;
    if any_converged(&results) {
        Ok(())
    } else {
        Err(universal_failure(&results))
    }
}

#[derive(Serialize)]
struct CompareRow {
    rank: Option<usize>,
    model: &'static str,
    status: &'static str,
    k: usize,
    neg2loglik: Option<f64>,
    aic: Option<f64>,
    bic: Option<f64>,
    caic: Option<f64>,
    ks: Option<f64>,
    ks_pvalue: Option<f64>,
    params: Vec<Estimate>,
    error: Option<String>,
}

#[derive(Serialize)]
struct CompareReport<'a> {
    schema: u32,
    command: &'static str,
    data: &'a str,
    n: usize,
    options: OptionsOut,
    rows: Vec<CompareRow>,
}

fn compare_row(f: Family, r: &wbs_core::Result<ModelFit>, s: &Sample) -> CompareRow {
    let failed = |e: String| CompareRow {
        rank: None,
        model: f.name(),
        status: "failed",
        k: f.arity(),
        neg2loglik: None,
        aic: None,
        bic: None,
        caic: None,
        ks: None,
        ks_pvalue: None,
        params: Vec::new(),
        error: Some(e),
    };
    let fit = match r {
        Ok(fit) => fit,
        Err(e) => return failed(e.to_string()),
    };
    match gof_report(fit, s) {
        Ok(g) => CompareRow {
            rank: None,
            model: f.name(),
            status: status(fit),
            k: g.k_params,
            neg2loglik: Some(g.neg2loglik),
            aic: Some(g.aic),
            bic: Some(g.bic),
            caic: Some(g.caic),
            ks: Some(g.ks_stat),
            ks_pvalue: Some(g.ks_pvalue),
            params: estimates(fit),
            error: None,
        },
        Err(e) => failed(e.to_string()),
    }
}

pub fn cmd_compare(d: &Loaded, models: &[Family], opts: &FitOptions, sink: &Sink) -> Result<(), CliError> {
    let results = fit_all(models, &d.sample, opts);
    let mut rows: Vec<CompareRow> = models
        .iter()
        .zip(&results)
        .map(|(&f, r)| compare_row(f, r, &d.sample))
        .collect();
    // stable sort: rows without an AIC sink to the bottom in input order
    rows.sort_by(|x, y| match (x.aic, y.aic) {
        (Some(a), Some(b)) => a.total_cmp(&b),
        (Some(_), None) => std::cmp::Ordering::Less,
        (None, Some(_)) => std::cmp::Ordering::Greater,
        (None, None) => std::cmp::Ordering::Equal,
    });
    for (i, r) in rows.iter_mut().filter(|r| r.aic.is_some()).enumerate() {
        r.rank = Some(i + 1);
    }
    let report = CompareReport {
        schema: SCHEMA,
        command: "compare",
        data: &d.label,
        n: d.sample.len(),
        options: opts.into(),
        rows,
    };
    sink.emit(&report, |w| {
        w.write_record([
            "rank",
            "model",
            "status",
            "k",
            "neg2loglik",
            "aic",
            "bic",
            "caic",
            "ks",
            "ks_pvalue",
        ])?;
        for r in &report.rows {
            w.write_record([
                r.rank.map_or(String::new(), |i| i.to_string()),
                r.model.to_string(),
                r.status.to_string(),
                r.k.to_string(),
                opt(r.neg2loglik),
                opt(r.aic),
                opt(r.bic),
                opt(r.caic),
                opt(r.ks),
                opt(r.ks_pvalue),
            ])?;
        }
        Ok(())
    })?;
    if results.iter().any(|r| r.is_ok()) {
        Ok(())
    } else {
        Err(universal_failure(&results))
    }
}

#[derive(Serialize)]
struct ParamsOut {
    alpha: f64,
    beta: f64,
    a: f64,
    b: f64,
}

impl From<&WbsParams> for ParamsOut {
    fn from(p: &WbsParams) -> Self {
        Self {
            alpha: p.alpha(),
            beta: p.beta(),
            a: p.a(),
            b: p.b(),
        }
    }
}

#[derive(Serialize)]
struct SimulateReport {
    schema: u32,
    command: &'static str,
    params: ParamsOut,
    seed: u64,
    n: usize,
    ks: f64,
    ks_pvalue: f64,
    values: Vec<f64>,
}

pub fn cmd_simulate(p: &WbsParams, n: usize, seed: u64, cdf_out: Option<&Path>, sink: &Sink) -> Result<(), CliError> {
    let values = p.sample(n, RngSeed(seed))?;
    let s = Sample::new(values.clone())?;
    let (ks, ks_pvalue) = ks_test(&s, |t| p.cdf(t))?;
    if let Some(path) = cdf_out {
        let e = empirical_cdf(&s);
        let bytes = csv_bytes(|w| {
            w.write_record(["t", "F_exact", "F_empirical"])?;
            for &t in s.sorted() {
                let exact = p.cdf(t).unwrap_or(f64::NAN);
                w.write_record([t.to_string(), exact.to_string(), e.eval(t).to_string()])?;
            }
            Ok(())
        })?;
        Sink {
            format: Format::Csv,
            path: Some(path.to_path_buf()),
        }
        .write(&bytes)?;
    }
    let report = SimulateReport {
        schema: SCHEMA,
        command: "simulate",
        params: p.into(),
        seed,
        n,
        ks,
        ks_pvalue,
        values,
    };
    sink.emit(&report, |w| {
        w.write_record(["t"])?;
        for v in &report.values {
            w.write_record([v.to_string()])?;
        }
        Ok(())
    })
}

#[derive(Serialize)]
struct TttReport<'a> {
    schema: u32,
    command: &'static str,
    data: &'a str,
    n: usize,
    points: Vec<(f64, f64)>,
}

pub fn cmd_ttt(d: &Loaded, sink: &Sink) -> Result<(), CliError> {
    let curve = gof::ttt(&d.sample)?;
    let report = TttReport {
        schema: SCHEMA,
        command: "ttt",
        data: &d.label,
        n: d.sample.len(),
        points: curve.points,
    };
    sink.emit(&report, |w| {
        w.write_record(["u", "ttt"])?;
        for (u, y) in &report.points {
            w.write_record([u.to_string(), y.to_string()])?;
        }
        Ok(())
    })
}

#[derive(Serialize)]
struct Props {
    mu1: f64,
    mu2: f64,
    mu3: f64,
    mu4: f64,
    variance: f64,
    skewness: f64,
    kurtosis: f64,
    delta1: f64,
    delta2: f64,
    median: f64,
}

#[derive(Serialize)]
struct CurvePoint {
    t: f64,
    pdf: f64,
    hazard: f64,
}

#[derive(Serialize)]
struct PropsReport {
    schema: u32,
    command: &'static str,
    params: ParamsOut,
    properties: Props,
    quantiles: Vec<(f64, f64)>,
    curve: Vec<CurvePoint>,
}

const QUANTILE_LEVELS: [f64; 5] = [0.1, 0.25, 0.5, 0.75, 0.9];

fn properties(p: &WbsParams) -> wbs_core::Result<Props> {
    let mu1 = moment(1, p)?;
    let mu2 = moment(2, p)?;
    let mu3 = moment(3, p)?;
    let mu4 = moment(4, p)?;
    let variance = (mu2 - mu1 * mu1).max(0.0);
    let sd = variance.sqrt();
    let m3 = mu3 - 3.0 * mu1 * mu2 + 2.0 * mu1.powi(3);
    let m4 = mu4 - 4.0 * mu1 * mu3 + 6.0 * mu1 * mu1 * mu2 - 3.0 * mu1.powi(4);
    let (delta1, delta2) = mean_deviations(p)?;
    Ok(Props {
        mu1,
        mu2,
        mu3,
        mu4,
        variance,
        skewness: m3 / sd.powi(3),
        kurtosis: m4 / (variance * variance),
        delta1,
        delta2,
        median: p.median()?,
    })
}

pub fn cmd_props(p: &WbsParams, points: usize, sink: &Sink) -> Result<(), CliError> {
    let properties = properties(p)?;
    let quantiles = QUANTILE_LEVELS
        .iter()
        .map(|&u| p.quantile(u).map(|q| (u, q)))
        .collect::<wbs_core::Result<Vec<_>>>()?;
    let (lo, hi) = (p.quantile(0.001)?, p.quantile(0.999)?);
    let curve = (0..points)
        .map(|i| {
            let t = lo + (hi - lo) * i as f64 / (points - 1) as f64;
            Ok(CurvePoint {
                t,
                pdf: p.pdf(t)?,
                hazard: p.hazard(t)?,
            })
        })
        .collect::<wbs_core::Result<Vec<_>>>()?;
    let report = PropsReport {
        schema: SCHEMA,
        command: "props",
        params: p.into(),
        properties,
        quantiles,
        curve,
    };
    sink.emit(&report, |w| {
        w.write_record(["quantity", "at", "value"])?;
        let pr = &report.properties;
        for (name, v) in [
            ("mu1", pr.mu1),
            ("mu2", pr.mu2),
            ("mu3", pr.mu3),
            ("mu4", pr.mu4),
            ("variance", pr.variance),
            ("skewness", pr.skewness),
            ("kurtosis", pr.kurtosis),
            ("delta1", pr.delta1),
            ("delta2", pr.delta2),
            ("median", pr.median),
        ] {
            w.write_record([name, "", &v.to_string()])?;
        }
        for (u, q) in &report.quantiles {
            w.write_record(["quantile", &u.to_string(), &q.to_string()])?;
        }
        for c in &report.curve {
            w.write_record(["pdf", &c.t.to_string(), &c.pdf.to_string()])?;
            w.write_record(["hazard", &c.t.to_string(), &c.hazard.to_string()])?;
        }
        Ok(())
    })
}

#[derive(Serialize)]
struct DatasetRow {
    name: &'static str,
    n: usize,
    sha256: String,
    source: &'static str,
}

#[derive(Serialize)]
struct DatasetsReport {
    schema: u32,
    command: &'static str,
    datasets: Vec<DatasetRow>,
}

pub fn cmd_datasets(sink: &Sink) -> Result<(), CliError> {
    let report = DatasetsReport {
        schema: SCHEMA,
        command: "datasets",
        datasets: datasets::BUILTINS
            .iter()
            .map(|d| DatasetRow {
                name: d.name,
                n: d.values.len(),
                sha256: checksum(d.values),
                source: d.source,
            })
            .collect(),
    };
    sink.emit(&report, |w| {
        w.write_record(["name", "n", "sha256", "source"])?;
        for d in &report.datasets {
            w.write_record([d.name, &d.n.to_string(), &d.sha256, d.source])?;
        }
        Ok(())
    })
}
