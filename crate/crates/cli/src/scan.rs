//! One-parameter sweeps: `--param KEY=start:stop:step`.

use std::fmt::Write;

use lsl_core::catalog::{build, Params};
use lsl_core::finite_type::{fit_spectral, residual_tan, Verdict};
use lsl_core::surface::point_geometry;
use lsl_core::verify::VerifyConfig;
use lsl_core::{AmbientVector, Tolerances};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub key: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SweepError {
    Missing,
    Several(Vec<String>),
    Empty(String),
}

impl std::fmt::Display for SweepError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SweepError::Missing => write!(f, "scan needs one --param KEY=start:stop:step"),
            SweepError::Several(keys) => write!(f, "only one parameter can be swept, got {}", keys.join(", ")),
            SweepError::Empty(key) => write!(f, "scan range for `{key}` is empty"),
        }
    }
}

fn parse_range(text: &str) -> Option<(f64, f64, f64)> {
    let parts: Vec<f64> = text.split(':').map(|p| p.trim().parse().ok()).collect::<Option<_>>()?;
    match parts[..] {
        [a, b, c] => Some((a, b, c)),
        _ => None,
    }
}

/// Values `start, start + step, …` up to `stop` inclusive, rounded to twelve
/// significant digits so that printed values stay short.
pub fn range_values(start: f64, stop: f64, step: f64) -> Vec<f64> {
    if !(step > 0.0) || !(stop >= start) || !start.is_finite() || !stop.is_finite() {
        return Vec::new();
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    (0..count)
        .map(|k| {
            let x = start + k as f64 * step;
            format!("{x:.11e}").parse().unwrap_or(x)
        })
        .collect()
}

pub fn find_sweep(params: &Params) -> Result<Sweep, SweepError> {
    let ranges: Vec<(String, (f64, f64, f64))> = params
        .iter()
        .filter_map(|(k, v)| parse_range(v).map(|r| (k.clone(), r)))
        .collect();
    match ranges.as_slice() {
        [] => Err(SweepError::Missing),
        [(key, (a, b, c))] => {
            let values = range_values(*a, *b, *c);
            if values.is_empty() {
                Err(SweepError::Empty(key.clone()))
            } else {
                Ok(Sweep {
                    key: key.clone(),
                    values,
                })
            }
        }
        many => Err(SweepError::Several(many.iter().map(|(k, _)| k.clone()).collect())),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub value: f64,
    #[serde(rename = "H")]
    pub mean: Option<f64>,
    #[serde(rename = "H2")]
    pub mean2: Option<f64>,
    #[serde(rename = "K")]
    pub gauss: Option<f64>,
    pub sigma: Option<f64>,
    pub pi: Option<f64>,
    pub verdict: Option<Verdict>,
    /// Residual of the model behind the verdict.
    pub max_residual: Option<f64>,
    /// Largest tangential characterizing residual, for two-type verdicts.
    pub tan_residual: Option<f64>,
    pub error: Option<String>,
}

impl Row {
    fn failed(value: f64, error: String) -> Self {
        Self {
            value,
            mean: None,
            mean2: None,
            gauss: None,
            sigma: None,
            pi: None,
            verdict: None,
            max_residual: None,
            tan_residual: None,
            error: Some(error),
        }
    }
}

fn row(name: &str, params: &Params, value: f64, config: &VerifyConfig, tol: &Tolerances) -> lsl_core::Result<Row> {
    let surface = build(name, params)?;
    let chart = &surface.chart;
    let (u, v) = chart.domain().center();
    let pg = point_geometry(chart, u, v)?;
    let samples = chart.sample(config.samples, config.seed);
    let fit = fit_spectral(chart, &samples, tol)?;
    let one_type = fit.one_type.max_residual < tol.fit_residual;
    let tan_residual = if matches!(
        fit.verdict,
        Verdict::TwoType | Verdict::NullTwoType | Verdict::ComplexPair
    ) {
        let a = fit.a.unwrap_or(AmbientVector::ZERO);
        let mut worst = 0.0f64;
        for &(u, v) in &samples {
            worst = worst.max(residual_tan(chart, u, v, fit.pi, &a)?);
        }
        Some(worst)
    } else {
        None
    };
    Ok(Row {
        value,
        mean: Some(pg.mean),
        mean2: Some(pg.mean2),
        gauss: Some(pg.gauss),
        sigma: Some(fit.sigma),
        pi: Some(fit.pi),
        verdict: Some(fit.verdict),
        max_residual: Some(if one_type {
            fit.one_type.max_residual
        } else {
            fit.max_residual
        }),
        tan_residual,
        error: None,
    })
}

/// Evaluates every value of the sweep. Construction or evaluation failures at
/// a value produce a row carrying the error instead of aborting the scan.
pub fn run(name: &str, base: &Params, sweep: &Sweep, config: &VerifyConfig, tol: &Tolerances) -> Vec<Row> {
    sweep
        .values
        .iter()
        .map(|&value| {
            let mut params = base.clone();
            params.set(&sweep.key, value.to_string());
            row(name, &params, value, config, tol).unwrap_or_else(|e| Row::failed(value, e.to_string()))
        })
        .collect()
}

/// Shortest round-trip text, in exponent form for very small or large values.
pub fn num(x: f64) -> String {
    if x != 0.0 && x.is_finite() && (x.abs() < 1e-4 || x.abs() >= 1e6) {
        format!("{x:e}")
    } else {
        x.to_string()
    }
}

fn cell(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

pub fn to_csv(key: &str, rows: &[Row]) -> String {
    let mut out = format!("{key},H,H2,K,sigma,pi,verdict,max_residual,tan_residual\n");
    for r in rows {
        let verdict = match (&r.verdict, &r.error) {
            (Some(v), _) => v.to_string(),
            (None, _) => "error".to_string(),
        };
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.value,
            cell(r.mean),
            cell(r.mean2),
            cell(r.gauss),
            cell(r.sigma),
            cell(r.pi),
            verdict,
            cell(r.max_residual),
            cell(r.tan_residual)
        );
    }
    out
}
