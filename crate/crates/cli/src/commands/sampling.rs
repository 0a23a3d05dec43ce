use cocycle_core::compression::{
    amenability_verdict, build_eta, estimate_compression, markov_type_ratio, sample_compression, EtaSample,
    FitConfig, MarkovConfig, SamplingConfig, Verdict,
};
use cocycle_core::groups::{
    estimate_escape_rate, exact_distance_moments, mean_distance_curve, sample_distance_profiles,
    GroupDescriptor,
};
use serde::{Deserialize, Serialize};

use super::{ensure, load_cocycle, parse_list};
use crate::args::{CompressArgs, EtaArgs, MarkovArgs, WalkArgs};
use crate::error::CliResult;
use crate::output::Output;

const MAX_WALK_CELLS: u64 = 50_000_000;
const MAX_MARKOV_STEPS: u64 = 2_000_000_000;
const MAX_EXACT_STEPS: usize = 20_000;

#[derive(Serialize)]
struct WalkSummary {
    group: String,
    n: u64,
    seeds: u64,
    escape_rate: f64,
    ci: [f64; 2],
}

pub fn walk(a: &WalkArgs, seed: u64, out: &mut Output) -> CliResult<()> {
    let desc: GroupDescriptor = a.group.parse()?;
    ensure(a.steps * a.walks <= MAX_WALK_CELLS, || {
        format!("steps × walks must not exceed {MAX_WALK_CELLS}")
    })?;
    let n = a.steps as usize;
    let profiles = sample_distance_profiles(&desc, n, a.walks as usize, seed);
    let est = estimate_escape_rate(&profiles)?;
    let curve = mean_distance_curve(&profiles);
    out.csv("walk.csv", &["step", "distance"], curve.iter().enumerate().map(|(i, m)| (i, m.mean)))?;
    out.json(
        "walk.json",
        &WalkSummary {
            group: desc.to_string(),
            n: a.steps,
            seeds: a.walks,
            escape_rate: est.rate,
            ci: [est.rate - est.half_width, est.rate + est.half_width],
        },
    )?;
    println!("escape rate {:.5} ± {:.5} ({} walks, n = {n})", est.rate, est.half_width, a.walks);
    if desc.is_free() && n <= MAX_EXACT_STEPS {
        let exact = exact_distance_moments(&desc, n, 1.0)?[n] / n as f64;
        println!("exact E|W_n|/n = {exact:.5}");
    }
    Ok(())
}

#[derive(Serialize)]
struct CompressSummary {
    alpha_envelope: f64,
    stderr: f64,
    p: f64,
    verdict: Verdict,
}

pub fn compress(a: &CompressArgs, seed: u64, out: &mut Output) -> CliResult<()> {
    ensure(a.p > 1.0 && a.p <= 2.0, || format!("--p must lie in (1, 2], got {}", a.p))?;
    ensure(a.r_min < a.r_max, || "--r-min must be below --r-max".into())?;
    if let Some(f) = a.walk_fraction {
        ensure((0.0..=1.0).contains(&f), || "--walk-fraction must lie in [0, 1]".into())?;
    }
    let c = load_cocycle(&a.cocycle)?;
    let cfg = SamplingConfig {
        samples: a.samples as usize,
        r_min: a.r_min,
        r_max: a.r_max,
        walk_fraction: a.walk_fraction,
        seed,
    };
    let samples = sample_compression(&c, &cfg)?;
    let fit = FitConfig { r_min: a.r_min as f64, r_max: a.r_max as f64, ..FitConfig::default() };
    let report = estimate_compression(&samples, &fit)?;
    let verdict =
        amenability_verdict(report.alpha_envelope, report.envelope_stderr, a.p, !c.group().is_amenable());
    out.csv(
        "compress.csv",
        &["radius", "count", "min_norm", "gmean_norm"],
        report.buckets.iter().map(|b| (b.radius, b.count, b.min_norm, b.gmean_norm)),
    )?;
    out.json(
        "compress.json",
        &CompressSummary {
            alpha_envelope: report.alpha_envelope,
            stderr: report.envelope_stderr,
            p: a.p,
            verdict,
        },
    )?;
    println!(
        "alpha_envelope {:.4} ± {:.4}, alpha_mean {:.4}, verdict {verdict:?}",
        report.alpha_envelope, report.envelope_stderr, report.alpha_mean
    );
    Ok(())
}

pub fn markov(a: &MarkovArgs, seed: u64, out: &mut Output) -> CliResult<()> {
    ensure(a.p > 1.0 && a.p <= 2.0, || format!("--p must lie in (1, 2], got {}", a.p))?;
    ensure(a.n_max * a.samples <= MAX_MARKOV_STEPS, || {
        format!("n-max × samples must not exceed {MAX_MARKOV_STEPS}")
    })?;
    let checkpoints = match &a.checkpoints {
        Some(s) => {
            let mut v: Vec<usize> = parse_list(s, "checkpoint")?;
            v.sort_unstable();
            v.dedup();
            ensure(v.iter().all(|&n| n >= 1 && n as u64 <= a.n_max), || {
                "checkpoints must lie in [1, n-max]".into()
            })?;
            Some(v)
        }
        None => None,
    };
    let c = load_cocycle(&a.cocycle)?;
    let cfg =
        MarkovConfig { p: a.p, n_max: a.n_max as usize, samples: a.samples as usize, seed, checkpoints };
    let report = markov_type_ratio(&c, &cfg)?;
    out.csv(
        "markov.csv",
        &["n", "ratio", "stderr", "exact_ratio"],
        report.points.iter().map(|p| (p.n, p.ratio, p.stderr, p.exact_ratio)),
    )?;
    if let Some(last) = report.points.last() {
        println!("ratio at n = {}: {:.5} ± {:.5}", last.n, last.ratio, last.stderr);
    }
    Ok(())
}

#[derive(Deserialize)]
struct EtaRow {
    radius: u64,
    f: f64,
    h: f64,
}

pub fn eta(a: &EtaArgs, seed: u64, out: &mut Output) -> CliResult<()> {
    ensure(a.h_power.is_finite(), || "--h-power must be finite".into())?;
    ensure(a.r_min < a.r_max, || "--r-min must be below --r-max".into())?;
    let thresholds = a.thresholds.as_deref().map(|s| parse_list::<f64>(s, "threshold")).transpose()?;
    let samples: Vec<EtaSample> = match &a.input {
        Some(path) => {
            let mut rdr = csv::Reader::from_path(path)?;
            rdr.deserialize::<EtaRow>()
                .map(|r| r.map(|r| EtaSample { radius: r.radius, f: r.f, h: r.h }))
                .collect::<Result<_, _>>()?
        }
        None => {
            let c = load_cocycle(&a.cocycle)?;
            let cfg = SamplingConfig {
                samples: a.samples as usize,
                r_min: a.r_min,
                r_max: a.r_max,
                walk_fraction: None,
                seed,
            };
            let drawn = sample_compression(&c, &cfg)?;
            out.csv(
                "lengths.csv",
                &["word_length", "cocycle_norm"],
                drawn.iter().map(|s| (s.radius, s.norm)),
            )?;
            drawn
                .iter()
                .map(|s| EtaSample { radius: s.radius, f: s.norm, h: (s.radius as f64).powf(a.h_power) })
                .collect()
        }
    };
    let eta = build_eta(&samples, thresholds.as_deref())?;
    out.csv("eta.csv", &["radius", "eta"], eta.breakpoints.iter().zip(&eta.values))?;
    out.json("eta.json", &eta)?;
    println!(
        "η on {} breakpoints, final value {:.4}, diverges: {}",
        eta.breakpoints.len(),
        eta.values.last().copied().unwrap_or(0.0),
        eta.diverges
    );
    Ok(())
}
