//! Browser bindings: each export returns a JSON string for the page to plot.
//!
//! The `*_data` functions hold the logic and are what the native tests call.

use cocycle_core::groups::{
    estimate_escape_rate, exact_distance_moments, mean_distance_curve, sample_distance_profiles,
    GroupDescriptor,
};
use cocycle_core::moduli::{
    lindenstrauss_dual, modulus_convexity, modulus_smoothness, NormSpec, SearchConfig,
};
use cocycle_core::radial::{asymptotic_band, solve_psi, Field, ForcingProfile, RankOneSpace, DEFAULT_STEP};
use serde::Serialize;
use wasm_bindgen::prelude::*;

const MAX_PLOT_POINTS: usize = 2_000;
const MAX_WALK_STEPS: usize = 10_000;
const MAX_WALKS: usize = 5_000;

fn thin(len: usize, points: usize) -> Vec<usize> {
    let stride = len.div_ceil(points.max(2)).max(1);
    let mut idx: Vec<usize> = (0..len).step_by(stride).collect();
    if idx.last() != Some(&(len - 1)) {
        idx.push(len - 1);
    }
    idx
}

#[derive(Debug, Serialize)]
pub struct RadialProfile {
    pub r: Vec<f64>,
    pub psi: Vec<f64>,
    pub phi: Vec<f64>,
    pub m1: f64,
    pub m2: f64,
    pub predicted_limit: Option<f64>,
    pub band: (f64, f64),
}

pub fn radial_profile_data(field: &str, n: u32, forcing: &str, r_max: f64) -> Result<RadialProfile, String> {
    let field: Field = field.parse().map_err(|e| format!("{e}"))?;
    let space = RankOneSpace::new(field, n).map_err(|e| e.to_string())?;
    let forcing: ForcingProfile = forcing.parse().map_err(|e| format!("{e}"))?;
    let r_max = (r_max / DEFAULT_STEP).round() * DEFAULT_STEP;
    let sol = solve_psi(&space, &forcing, r_max, DEFAULT_STEP).map_err(|e| e.to_string())?;
    let idx = thin(sol.grid.len(), MAX_PLOT_POINTS);
    Ok(RadialProfile {
        r: idx.iter().map(|&i| sol.grid[i]).collect(),
        psi: idx.iter().map(|&i| sol.psi[i]).collect(),
        phi: idx.iter().map(|&i| sol.phi[i]).collect(),
        m1: space.m1(),
        m2: space.m2(),
        predicted_limit: sol.predicted_limit,
        band: asymptotic_band(&space, &forcing),
    })
}

#[derive(Debug, Serialize)]
pub struct ModuliCurves {
    pub p: f64,
    pub eps: Vec<f64>,
    pub delta: Vec<f64>,
    pub tau: Vec<f64>,
    pub rho: Vec<f64>,
    /// ρ predicted from the convexity modulus of the dual space.
    pub rho_from_dual: Vec<f64>,
    pub residual: Option<f64>,
}

pub fn moduli_data(p: f64, points: usize, restarts: usize) -> Result<ModuliCurves, String> {
    if !(2..=400).contains(&points) || !(1..=256).contains(&restarts) {
        return Err("points must lie in [2, 400] and restarts in [1, 256]".into());
    }
    let spec = NormSpec::new(p, 2).map_err(|e| e.to_string())?;
    let eps: Vec<f64> = (1..=points).map(|i| 2.0 * i as f64 / points as f64).collect();
    let tau: Vec<f64> = (1..=points).map(|i| i as f64 / points as f64).collect();
    let search = SearchConfig { restarts, ..SearchConfig::default() };
    let delta = modulus_convexity(&spec, &eps, &search).map_err(|e| e.to_string())?;
    let rho = modulus_smoothness(&spec, &tau, &search).map_err(|e| e.to_string())?;
    let dual = modulus_convexity(&spec.dual(), &eps, &search).map_err(|e| e.to_string())?;
    let report = lindenstrauss_dual(&dual, &tau, Some(&rho)).map_err(|e| e.to_string())?;
    Ok(ModuliCurves {
        p,
        eps,
        delta: delta.values(),
        tau,
        rho: rho.values(),
        rho_from_dual: report.points.iter().map(|pt| pt.predicted).collect(),
        residual: report.residual,
    })
}

#[derive(Debug, Serialize)]
pub struct EscapeCurve {
    pub n: Vec<usize>,
    pub mean: Vec<f64>,
    pub stderr: Vec<f64>,
    pub exact: Vec<f64>,
    pub rate: f64,
    pub half_width: f64,
    /// `(k−1)/k`, the limit of `E|Wₙ|/n` on the free group of rank k.
    pub limit: f64,
}

pub fn escape_data(rank: usize, steps: usize, walks: usize, seed: u64) -> Result<EscapeCurve, String> {
    if !(100..=MAX_WALK_STEPS).contains(&steps) || !(2..=MAX_WALKS).contains(&walks) {
        return Err(format!("steps must lie in [100, {MAX_WALK_STEPS}] and walks in [2, {MAX_WALKS}]"));
    }
    let desc = GroupDescriptor::free(rank).map_err(|e| e.to_string())?;
    let profiles = sample_distance_profiles(&desc, steps, walks, seed);
    let est = estimate_escape_rate(&profiles).map_err(|e| e.to_string())?;
    let curve = mean_distance_curve(&profiles);
    let exact = exact_distance_moments(&desc, steps, 1.0).map_err(|e| e.to_string())?;
    let idx = thin(steps + 1, MAX_PLOT_POINTS / 4);
    Ok(EscapeCurve {
        n: idx.clone(),
        mean: idx.iter().map(|&i| curve[i].mean).collect(),
        stderr: idx.iter().map(|&i| curve[i].stderr).collect(),
        exact: idx.iter().map(|&i| exact[i]).collect(),
        rate: est.rate,
        half_width: est.half_width,
        limit: (rank as f64 - 1.0) / rank as f64,
    })
}

fn to_json<T: Serialize>(r: Result<T, String>) -> Result<String, JsError> {
    let value = r.map_err(|e| JsError::new(&e))?;
    serde_json::to_string(&value).map_err(|e| JsError::new(&e.to_string()))
}

/// ψ and φ for the radial equation; `forcing` is `const:<v>` or
/// `band:<a>,<b>:<period>`.
#[wasm_bindgen]
pub fn radial_profile(field: &str, n: u32, forcing: &str, r_max: f64) -> Result<String, JsError> {
    to_json(radial_profile_data(field, n, forcing, r_max))
}

/// δ and ρ of ℓᵖ in the plane, with ρ predicted from the dual space.
#[wasm_bindgen]
pub fn moduli_curves(p: f64, points: usize, restarts: usize) -> Result<String, JsError> {
    to_json(moduli_data(p, points, restarts))
}

/// Monte Carlo mean of `|Wₙ|` next to the exact distance chain.
#[wasm_bindgen]
pub fn escape_curve(rank: usize, steps: usize, walks: usize, seed: u64) -> Result<String, JsError> {
    to_json(escape_data(rank, steps, walks, seed))
}
