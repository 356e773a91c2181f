//! The JSON report written by `verify` and `fit`.

use lsl_core::catalog::{CatalogSurface, Expected, Params};
use lsl_core::finite_type::{ConstancyEquivalence, SpectralFit};
use lsl_core::verify::{Check, GeometrySummary, Verification, VerifyConfig};
use lsl_core::Tolerances;
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tool {
    pub name: String,
    pub version: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grid {
    pub n: usize,
    pub m: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceId {
    pub name: String,
    pub label: String,
    pub params: Params,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SurfaceReport {
    pub surface: SurfaceId,
    pub notes: Vec<String>,
    pub expected: Expected,
    pub checks: Vec<Check>,
    pub geometry_summary: GeometrySummary,
    pub fit: SpectralFit,
    pub constancy_equivalence: ConstancyEquivalence,
    pub pass: bool,
}

impl PartialEq for SurfaceReport {
    fn eq(&self, other: &Self) -> bool {
        // the closed-form closures inside `expected` are not serialized
        serde_json::to_value(self).ok() == serde_json::to_value(other).ok()
    }
}

impl SurfaceReport {
    pub fn new(surface: &CatalogSurface, v: Verification) -> Self {
        Self {
            surface: SurfaceId {
                name: surface.name.clone(),
                label: surface.chart.label().to_string(),
                params: surface.params.clone(),
            },
            notes: surface.notes.clone(),
            expected: surface.expected.clone(),
            pass: v.pass(),
            checks: v.checks,
            geometry_summary: v.summary,
            fit: v.fit,
            constancy_equivalence: v.constancy_equivalence,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool: Tool,
    pub command: String,
    pub generated_at: String,
    pub seed: u64,
    pub grid: Grid,
    pub samples: usize,
    pub tolerances: Tolerances,
    pub surfaces: Vec<SurfaceReport>,
    pub pass: bool,
}

impl Report {
    pub fn new(command: &str, config: &VerifyConfig, tol: &Tolerances, surfaces: Vec<SurfaceReport>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            tool: Tool {
                name: "lsl".into(),
                version: env!("CARGO_PKG_VERSION").into(),
            },
            command: command.into(),
            generated_at: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            seed: config.seed,
            grid: Grid {
                n: config.grid.0,
                m: config.grid.1,
            },
            samples: config.samples,
            tolerances: *tol,
            pass: surfaces.iter().all(|s| s.pass),
            surfaces,
        }
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = (&SurfaceReport, &Check)> {
        self.surfaces
            .iter()
            .flat_map(|s| s.checks.iter().filter(|c| !c.pass).map(move |c| (s, c)))
    }
}
