use std::path::Path;

use cocycle_core::moduli::{
    fit_power_constants, lindenstrauss_dual, modulus_convexity, modulus_smoothness, InvariantNorm,
    ModulusCurve, Norm, NormSpec, PowerFit, SearchConfig,
};
use cocycle_core::rng::stream_rng;
use nalgebra::DMatrix;
use rand::Rng;
use serde::Serialize;

use super::{ensure, parse_exponent, parse_list, read_json};
use crate::args::{ModuliArgs, RenormArgs};
use crate::error::{CliError, CliResult};
use crate::output::Output;

#[derive(Serialize)]
struct ModuliSummary {
    #[serde(rename = "K")]
    k: Option<f64>,
    c: Option<f64>,
    p: Option<f64>,
    q: Option<f64>,
    residual_duality: Option<f64>,
}

fn usable(fit: &PowerFit) -> Option<f64> {
    (!fit.degenerate && fit.constant.is_finite()).then_some(fit.constant)
}

pub fn moduli(a: &ModuliArgs, seed: u64, out: &mut Output) -> CliResult<()> {
    let p = parse_exponent(&a.p)?;
    ensure(a.tau_max > 0.0 && a.tau_max <= 10.0, || "--tau-max must lie in (0, 10]".into())?;
    let spec = NormSpec::new(p, a.dim as usize)?;
    let points = a.points as usize;
    let eps: Vec<f64> = (1..=points).map(|i| 2.0 * i as f64 / points as f64).collect();
    let taus: Vec<f64> = (1..=points).map(|i| a.tau_max * i as f64 / points as f64).collect();
    let search = SearchConfig { restarts: a.restarts as usize, seed, ..SearchConfig::default() };

    let delta = modulus_convexity(&spec, &eps, &search)?;
    let rho = modulus_smoothness(&spec, &taus, &search)?;
    let dual_delta = modulus_convexity(&spec.dual(), &eps, &search)?;
    let duality = lindenstrauss_dual(&dual_delta, &taus, Some(&rho))?;

    let ps = (p > 1.0).then(|| p.min(2.0));
    let q = p.is_finite().then(|| p.max(2.0));
    let k_fit = ps.map(|e| fit_power_constants(&rho, e)).transpose()?;
    let c_fit = q.map(|e| fit_power_constants(&delta, e)).transpose()?;

    let rows = |curve: &ModulusCurve| {
        let kind = curve.kind.as_str();
        curve.points.iter().map(move |pt| (kind, p, a.dim, pt.arg, pt.value)).collect::<Vec<_>>()
    };
    let mut all = rows(&delta);
    all.extend(rows(&rho));
    out.csv("moduli.csv", &["kind", "p", "dim", "arg", "value"], all)?;
    let summary = ModuliSummary {
        k: k_fit.as_ref().and_then(usable),
        c: c_fit.as_ref().and_then(usable),
        p: ps,
        q,
        residual_duality: duality.residual,
    };
    out.json("moduli.json", &summary)?;
    println!(
        "K = {:?} (τ^{:?}), c = {:?} (ε^{:?}), duality residual {:.2e}, monotone violations {}/{}",
        summary.k,
        ps,
        summary.c,
        q,
        duality.residual.unwrap_or(f64::NAN),
        delta.monotone_violations,
        rho.monotone_violations
    );
    if !delta.dense_starts {
        println!("note: dimension > 2 uses random restarts; values are not certified maxima");
    }
    Ok(())
}

fn rotation8() -> DMatrix<f64> {
    let t = std::f64::consts::FRAC_PI_4;
    let r = DMatrix::from_row_slice(2, 2, &[t.cos(), -t.sin(), t.sin(), t.cos()]);
    let d = DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 1.0]);
    let di = DMatrix::from_row_slice(2, 2, &[0.5, 0.0, 0.0, 1.0]);
    d * r * di
}

fn load_generators(s: &str) -> CliResult<Vec<DMatrix<f64>>> {
    if s == "rotation8" {
        return Ok(vec![rotation8()]);
    }
    let raw: Vec<Vec<Vec<f64>>> = read_json(Path::new(s))?;
    ensure(!raw.is_empty(), || "generator list is empty".into())?;
    raw.iter()
        .map(|rows| {
            let n = rows.len();
            ensure(n > 0 && rows.iter().all(|r| r.len() == n), || {
                "generators must be square matrices given as lists of rows".into()
            })?;
            Ok(DMatrix::from_row_iterator(n, n, rows.iter().flatten().copied()))
        })
        .collect()
}

#[derive(Serialize)]
struct RenormSummary {
    orbit_size: usize,
    heuristic: bool,
    lower: f64,
    upper: f64,
    invariance_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    vector: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    base_norm: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    renormed: Option<f64>,
}

const RESIDUAL_PROBES: usize = 1_000;

pub fn renorm(a: &RenormArgs, seed: u64, out: &mut Output) -> CliResult<()> {
    let p = parse_exponent(&a.p)?;
    if let Some(m) = a.bound {
        ensure(m.is_finite() && m >= 1.0, || "--bound must be a finite number >= 1".into())?;
    }
    let generators = load_generators(&a.generators)?;
    let dim = generators[0].nrows();
    let vector = a.vector.as_deref().map(|s| parse_list::<f64>(s, "vector")).transpose()?;
    if let Some(v) = &vector {
        ensure(v.len() == dim, || format!("--vector needs {dim} entries"))?;
    }
    let base = NormSpec::new(p, dim)?;
    let norm =
        InvariantNorm::new(base, generators, a.bound, a.budget as usize, seed).map_err(|e| match e {
            cocycle_core::Error::ClosureCapExceeded { .. } => {
                CliError::validation(format!("{e}; pass --bound to use a sampled orbit"))
            }
            e => e.into(),
        })?;

    let mut rng = stream_rng(seed, 1);
    let mut residual = 0.0f64;
    for _ in 0..RESIDUAL_PROBES {
        let v: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
        residual = residual.max(norm.invariance_residual(&v));
    }
    if dim == 2 {
        let rows = (0..a.angles).map(|i| {
            let t = std::f64::consts::TAU * i as f64 / a.angles as f64;
            let v = [t.cos(), t.sin()];
            (t, base.norm(&v), norm.renorm(&v))
        });
        out.csv("renorm.csv", &["angle", "base_norm", "renormed_norm"], rows)?;
    }
    let eq = norm.equivalence();
    let summary = RenormSummary {
        orbit_size: norm.orbit_size(),
        heuristic: norm.is_heuristic(),
        lower: eq.lower,
        upper: eq.upper,
        invariance_residual: residual,
        base_norm: vector.as_ref().map(|v| base.norm(v)),
        renormed: vector.as_ref().map(|v| norm.renorm(v)),
        vector,
    };
    out.json("renorm.json", &summary)?;
    println!(
        "orbit {}{}, constants [{}, {}], invariance residual {:.1e}",
        summary.orbit_size,
        if summary.heuristic { " (sampled)" } else { "" },
        eq.lower,
        eq.upper,
        residual
    );
    Ok(())
}
