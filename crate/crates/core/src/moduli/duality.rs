use serde::{Deserialize, Serialize};

use super::{ModulusCurve, ModulusKind};
use crate::error::{Error, Result};

/// Best power-type constant of a modulus curve on its grid.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PowerFit {
    pub kind: ModulusKind,
    pub exponent: f64,
    /// `K = max ρ(τ)/τᵖ` for smoothness, `c = min δ(ε)/ε^q` for convexity.
    pub constant: f64,
    /// Grid argument where the extremum is attained.
    pub at: f64,
    /// Smoothness: `ρ(τ)/τ` does not decay toward small τ, so `K` grows
    /// without bound under refinement. Convexity: `c = 0`.
    pub degenerate: bool,
}

pub fn fit_power_constants(curve: &ModulusCurve, exponent: f64) -> Result<PowerFit> {
    let pts: Vec<_> = curve.points.iter().filter(|p| p.arg > 0.0).collect();
    if pts.is_empty() {
        return Err(Error::invalid("curve has no positive grid points"));
    }
    match curve.kind {
        ModulusKind::Smoothness => {
            if !(exponent > 1.0 && exponent <= 2.0) {
                return Err(Error::invalid(format!("smoothness power must lie in (1, 2], got {exponent}")));
            }
            let (mut constant, mut at) = (f64::NEG_INFINITY, pts[0].arg);
            for p in &pts {
                let r = p.value / p.arg.powf(exponent);
                if r > constant {
                    constant = r;
                    at = p.arg;
                }
            }
            let lo = pts.iter().min_by(|a, b| a.arg.total_cmp(&b.arg)).unwrap();
            let hi = pts.iter().max_by(|a, b| a.arg.total_cmp(&b.arg)).unwrap();
            let degenerate = hi.value > 0.0 && lo.value / lo.arg >= 0.5 * hi.value / hi.arg;
            Ok(PowerFit { kind: curve.kind, exponent, constant, at, degenerate })
        }
        ModulusKind::Convexity => {
            if !(exponent >= 2.0) || !exponent.is_finite() {
                return Err(Error::invalid(format!("convexity power must lie in [2, ∞), got {exponent}")));
            }
            let (mut constant, mut at) = (f64::INFINITY, pts[0].arg);
            for p in &pts {
                let r = p.value / p.arg.powf(exponent);
                if r < constant {
                    constant = r;
                    at = p.arg;
                }
            }
            Ok(PowerFit { kind: curve.kind, exponent, constant, at, degenerate: constant <= 0.0 })
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DualityPoint {
    pub tau: f64,
    pub predicted: f64,
    pub direct: Option<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DualityReport {
    pub points: Vec<DualityPoint>,
    /// `max |predicted − direct|` when a direct curve was supplied.
    pub residual: Option<f64>,
    /// Largest gap of the ε grid over [0, 2]; the discretization error of
    /// the predicted curve is at most `τ·gap/2`.
    pub grid_spacing: f64,
}

/// Smoothness modulus predicted from the convexity modulus of the dual
/// space: `ρ(τ) = sup_{0≤ε≤2} (τε/2 − δ*(ε))`, the sup taken over the
/// curve's grid together with ε = 0.
pub fn lindenstrauss_dual(
    dual_convexity: &ModulusCurve,
    tau_grid: &[f64],
    direct: Option<&ModulusCurve>,
) -> Result<DualityReport> {
    if dual_convexity.kind != ModulusKind::Convexity {
        return Err(Error::invalid("duality needs a convexity curve of the dual space"));
    }
    if let Some(d) = direct {
        if d.kind != ModulusKind::Smoothness {
            return Err(Error::invalid("direct curve must be a smoothness curve"));
        }
        if d.points.len() != tau_grid.len() || d.points.iter().zip(tau_grid).any(|(p, t)| p.arg != *t) {
            return Err(Error::invalid("direct curve is sampled on a different τ grid"));
        }
    }
    if tau_grid.iter().any(|t| !(*t >= 0.0)) {
        return Err(Error::invalid("τ must be nonnegative"));
    }

    let mut eps: Vec<f64> = dual_convexity.args();
    eps.push(0.0);
    eps.push(2.0);
    eps.sort_by(f64::total_cmp);
    let grid_spacing = eps.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);

    let mut residual: Option<f64> = None;
    let points = tau_grid
        .iter()
        .enumerate()
        .map(|(i, &tau)| {
            let predicted =
                dual_convexity.points.iter().map(|p| 0.5 * tau * p.arg - p.value).fold(0.0, f64::max);
            let direct = direct.map(|d| d.points[i].value);
            if let Some(v) = direct {
                let r = (predicted - v).abs();
                residual = Some(residual.map_or(r, |m: f64| m.max(r)));
            }
            DualityPoint { tau, predicted, direct }
        })
        .collect();
    Ok(DualityReport { points, residual, grid_spacing })
}
