//! Every numeric threshold used by the checks, in one place.
//!
//! Defaults are tuned for order-4 jets, which reproduce pointwise quantities
//! to about 1e-12. Each field can be overridden by name (`--tol NAME=V` on
//! the command line).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// `|<x,x> - c|` for membership in the space form.
    pub membership: f64,
    /// Minimum `|det g|` of a nondegenerate induced metric.
    pub metric_det: f64,
    /// Frame consistency for the tangential decomposition.
    pub frame: f64,
    /// Discriminant threshold of the shape-operator classifier.
    pub classify: f64,
    /// Relative spread below which a scanned quantity counts as constant.
    pub constancy: f64,
    /// Operator identities (gradient, Hessian, L1 closed forms, product rule).
    pub identity: f64,
    /// Algebraic trace identities of the Newton transformation.
    pub trace: f64,
    /// Divergence of P1 and the derivative trace identity.
    pub divergence: f64,
    /// Nested L1² against its closed form.
    pub l1_squared: f64,
    /// Gauss equation: extrinsic against intrinsic curvature.
    pub gauss: f64,
    /// Comparisons against closed-form catalog values.
    pub expected: f64,
    /// Shape operator in a named frame against its closed form.
    pub frame_matrix: f64,
    /// Characterizing-equation residuals of the 2-type fit.
    pub characterizing: f64,
    /// Normalized model residual for a fit to be accepted.
    pub fit_residual: f64,
    /// "Approximately zero" for fitted spectral parameters, relative to 1+|σ|+|π|.
    pub zero: f64,
    /// Design-matrix condition number above which a fit is ill posed.
    pub condition: f64,
    /// Pseudo-orthonormality drift of the integrated null frame.
    pub conservation: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            membership: 1e-9,
            metric_det: 1e-8,
            frame: 1e-8,
            classify: 1e-7,
            constancy: 1e-7,
            identity: 1e-7,
            trace: 1e-9,
            divergence: 1e-6,
            l1_squared: 1e-5,
            gauss: 1e-6,
            expected: 1e-8,
            frame_matrix: 1e-6,
            characterizing: 1e-6,
            fit_residual: 1e-7,
            zero: 1e-6,
            condition: 1e10,
            conservation: 1e-8,
        }
    }
}

impl Tolerances {
    pub const NAMES: [&'static str; 17] = [
        "membership",
        "metric_det",
        "frame",
        "classify",
        "constancy",
        "identity",
        "trace",
        "divergence",
        "l1_squared",
        "gauss",
        "expected",
        "frame_matrix",
        "characterizing",
        "fit_residual",
        "zero",
        "condition",
        "conservation",
    ];

    fn slot(&mut self, name: &str) -> Option<&mut f64> {
        Some(match name {
            "membership" => &mut self.membership,
            "metric_det" => &mut self.metric_det,
            "frame" => &mut self.frame,
            "classify" => &mut self.classify,
            "constancy" => &mut self.constancy,
            "identity" => &mut self.identity,
            "trace" => &mut self.trace,
            "divergence" => &mut self.divergence,
            "l1_squared" => &mut self.l1_squared,
            "gauss" => &mut self.gauss,
            "expected" => &mut self.expected,
            "frame_matrix" => &mut self.frame_matrix,
            "characterizing" => &mut self.characterizing,
            "fit_residual" => &mut self.fit_residual,
            "zero" => &mut self.zero,
            "condition" => &mut self.condition,
            "conservation" => &mut self.conservation,
            _ => return None,
        })
    }

    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::bad_param(name, "tolerance must be positive and finite"));
        }
        let slot = self
            .slot(name)
            .ok_or_else(|| Error::UnknownTolerance(name.to_string()))?;
        *slot = value;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_name_is_settable() {
        let mut t = Tolerances::default();
        for name in Tolerances::NAMES {
            t.set(name, 0.5).unwrap();
        }
        assert_eq!(t.identity, 0.5);
        assert!(matches!(t.set("bogus", 1.0), Err(Error::UnknownTolerance(_))));
        assert!(t.set("identity", -1.0).is_err());
    }
}
