//! Empirical compression exponents, the Markov-type ratio along random
//! walks, the amenability consistency check, and the step-function witness
//! `η` for `f ≺ h`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{exact_distance_moments, FreeWord, GroupDescriptor, GroupElement};
use crate::repcoc::{CocycleKind, CocycleSpec};
use crate::rng::{map_indexed, stream_rng};
use crate::stats::{covariance_with_stderr, linear_fit, LinearFit, MeanEstimate};

// ---------------------------------------------------------------------------
// Markov-type ratio

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MarkovConfig {
    pub p: f64,
    pub n_max: usize,
    pub samples: usize,
    pub seed: u64,
    /// Step counts at which the ratio is reported; all of `1..=n_max` when
    /// `None`.
    pub checkpoints: Option<Vec<usize>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MarkovPoint {
    pub n: usize,
    pub ratio: f64,
    pub stderr: f64,
    pub exact_ratio: Option<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MarkovReport {
    pub p: f64,
    /// `E‖b(W₁)‖ᵖ`, exact (mean over the generating set).
    pub one_step_moment: f64,
    pub points: Vec<MarkovPoint>,
}

const WALKS_PER_CHUNK: usize = 64;

/// Monte Carlo estimate of `E‖b(Wₙ)‖ᵖ / (n·E‖b(W₁)‖ᵖ)`.
///
/// Walk `i` uses stream `i` of `seed` and draws generator slots exactly as
/// [`crate::groups::Walker`] does, so its path coincides with the walk of
/// the same stream. For the Haagerup cocycle the exact ratio from the
/// distance chain is attached to every point.
pub fn markov_type_ratio(c: &CocycleSpec, cfg: &MarkovConfig) -> Result<MarkovReport> {
    if !(cfg.p > 1.0 && cfg.p <= 2.0) {
        return Err(Error::invalid("Markov-type exponent p must lie in (1, 2]"));
    }
    if cfg.n_max == 0 {
        return Err(Error::invalid("n_max must be >= 1"));
    }
    if cfg.samples < 2 {
        return Err(Error::InsufficientSamples { needed: 2, found: cfg.samples });
    }
    let checkpoints: Vec<usize> = match &cfg.checkpoints {
        Some(cp) => {
            let mut cp = cp.clone();
            cp.sort_unstable();
            cp.dedup();
            if cp.first() == Some(&0) || cp.last().is_some_and(|&n| n > cfg.n_max) {
                return Err(Error::invalid("checkpoints must lie in 1..=n_max"));
            }
            cp
        }
        None => (1..=cfg.n_max).collect(),
    };
    let gens = c.group().generator_count();
    let one_step = (0..gens).map(|s| c.slot_value(s).norm().powf(cfg.p)).sum::<f64>() / gens as f64;
    if one_step == 0.0 {
        return Err(Error::ZeroDenominator);
    }

    let walk = |i: usize| -> Result<Vec<f64>> {
        let mut rng = stream_rng(cfg.seed, i as u64);
        let mut state = c.walk_state();
        let mut out = Vec::with_capacity(checkpoints.len());
        let mut next = checkpoints.iter().peekable();
        for n in 1..=cfg.n_max {
            state.step(rng.random_range(0..gens))?;
            if next.peek() == Some(&&n) {
                next.next();
                out.push(state.norm().powf(cfg.p));
            }
        }
        Ok(out)
    };

    // Streaming aggregation in fixed-size chunks keeps memory bounded and the
    // floating-point summation order independent of the thread count.
    let m = checkpoints.len();
    let mut sum = vec![0.0; m];
    let mut sum_sq = vec![0.0; m];
    let mut start = 0;
    while start < cfg.samples {
        let len = WALKS_PER_CHUNK.min(cfg.samples - start);
        let chunk = map_indexed(len, |j| walk(start + j));
        for values in chunk {
            for (k, x) in values?.into_iter().enumerate() {
                sum[k] += x;
                sum_sq[k] += x * x;
            }
        }
        start += len;
    }

    let exact = match (c.kind(), c.group()) {
        (CocycleKind::HaagerupTree, desc @ GroupDescriptor::Free { .. }) => {
            // ‖b(g)‖ᵖ = |g|^{p/2}; E‖b(W₁)‖ᵖ = 1
            Some(exact_distance_moments(desc, cfg.n_max, cfg.p / 2.0)?)
        }
        _ => None,
    };

    let count = cfg.samples as f64;
    let points = checkpoints
        .iter()
        .enumerate()
        .map(|(k, &n)| {
            let mean = sum[k] / count;
            let var = ((sum_sq[k] - count * mean * mean) / (count - 1.0)).max(0.0);
            let denom = n as f64 * one_step;
            MarkovPoint {
                n,
                ratio: mean / denom,
                stderr: (var / count).sqrt() / denom,
                exact_ratio: exact.as_ref().map(|e| e[n] / denom),
            }
        })
        .collect();
    Ok(MarkovReport { p: cfg.p, one_step_moment: one_step, points })
}

// ---------------------------------------------------------------------------
// Compression sampling and fitting

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleSource {
    /// Endpoint of a simple random walk.
    Walk,
    /// Uniform reduced word (free groups) or axis vector (ℤᵈ) of a chosen
    /// radius.
    Uniform,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompressionSample {
    pub radius: u64,
    pub norm: f64,
    pub source: SampleSource,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SamplingConfig {
    pub samples: usize,
    pub r_min: u64,
    pub r_max: u64,
    /// Fraction of samples taken from walk endpoints; defaults per group
    /// when `None` (free: 1/2, ℤᵈ: 0, lamplighter: 1).
    pub walk_fraction: Option<f64>,
    pub seed: u64,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        SamplingConfig { samples: 200_000, r_min: 10, r_max: 10_000, walk_fraction: None, seed: 0 }
    }
}

fn log_uniform<R: Rng + ?Sized>(lo: u64, hi: u64, rng: &mut R) -> u64 {
    let (a, b) = ((lo as f64).ln(), ((hi + 1) as f64).ln());
    (rng.random_range(a..b).exp().floor() as u64).clamp(lo, hi)
}

/// Draws group elements with radii spread over `[r_min, r_max]` and records
/// `‖b(g)‖`. Walk endpoints concentrate near `λn`, so they are mixed with
/// uniform samples per radius.
pub fn sample_compression(c: &CocycleSpec, cfg: &SamplingConfig) -> Result<Vec<CompressionSample>> {
    if cfg.r_min == 0 || cfg.r_max <= cfg.r_min {
        return Err(Error::invalid("need 1 <= r_min < r_max"));
    }
    let desc = *c.group();
    let walk_fraction = cfg.walk_fraction.unwrap_or(match desc {
        GroupDescriptor::Free { .. } => 0.5,
        GroupDescriptor::FreeAbelian { .. } => 0.0,
        GroupDescriptor::Lamplighter => 1.0,
    });
    if !(0.0..=1.0).contains(&walk_fraction) {
        return Err(Error::invalid("walk_fraction must lie in [0, 1]"));
    }
    if walk_fraction < 1.0 && matches!(desc, GroupDescriptor::Lamplighter) {
        return Err(Error::invalid("lamplighter supports walk sampling only"));
    }
    let walks = (cfg.samples as f64 * walk_fraction).round() as usize;
    let gens = desc.generator_count();
    // walk lengths reaching radius r_max at the free-group drift (k-1)/k
    let n_hi = match desc {
        GroupDescriptor::Free { rank } if rank > 1 => cfg.r_max * rank as u64 / (rank as u64 - 1),
        _ => cfg.r_max,
    };

    let draw = |i: usize| -> Result<CompressionSample> {
        let mut rng = stream_rng(cfg.seed, i as u64);
        if i < walks {
            let n = log_uniform(cfg.r_min, n_hi, &mut rng);
            let mut state = c.walk_state();
            for _ in 0..n {
                state.step(rng.random_range(0..gens))?;
            }
            return Ok(CompressionSample {
                radius: state.position().word_length(),
                norm: state.norm(),
                source: SampleSource::Walk,
            });
        }
        let r = log_uniform(cfg.r_min, cfg.r_max, &mut rng);
        let g = match desc {
            GroupDescriptor::Free { rank } => {
                GroupElement::Free(FreeWord::random(rank, r as usize, &mut rng))
            }
            GroupDescriptor::FreeAbelian { dim } => {
                let mut v = vec![0i64; dim];
                let axis = rng.random_range(0..dim);
                v[axis] = if rng.random_bool(0.5) { r as i64 } else { -(r as i64) };
                GroupElement::Abelian(v)
            }
            GroupDescriptor::Lamplighter => unreachable!("rejected above"),
        };
        Ok(CompressionSample {
            radius: g.word_length(),
            norm: c.length_function(&g)?,
            source: SampleSource::Uniform,
        })
    };
    map_indexed(cfg.samples, draw).into_iter().collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FitConfig {
    pub r_min: f64,
    pub r_max: f64,
    /// Ratio between consecutive geometric bin edges.
    pub bin_ratio: f64,
    /// Bins with fewer samples are dropped.
    pub min_count: usize,
    pub min_buckets: usize,
}

impl Default for FitConfig {
    fn default() -> Self {
        FitConfig { r_min: 10.0, r_max: 10_000.0, bin_ratio: 1.25, min_count: 30, min_buckets: 5 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bucket {
    /// Geometric mean of the sample radii in the bin.
    pub radius: f64,
    pub count: usize,
    pub min_norm: f64,
    /// Radius of the sample attaining `min_norm`.
    pub min_radius: f64,
    pub gmean_norm: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CompressionReport {
    pub buckets: Vec<Bucket>,
    /// Slope of `log min‖b‖` against `log R` (lower envelope).
    pub alpha_envelope: f64,
    pub envelope_stderr: f64,
    /// Slope of `log gmean‖b‖` against `log R`.
    pub alpha_mean: f64,
    pub mean_stderr: f64,
    pub window: (f64, f64),
    pub walk_samples: usize,
    pub uniform_samples: usize,
}

/// Least-squares compression slopes on geometric radius buckets.
pub fn estimate_compression(samples: &[CompressionSample], fit: &FitConfig) -> Result<CompressionReport> {
    if !(fit.bin_ratio > 1.0) || !(fit.r_min >= 1.0) || !(fit.r_max > fit.r_min) {
        return Err(Error::invalid("fit window must satisfy 1 <= r_min < r_max, bin_ratio > 1"));
    }
    let in_window: Vec<&CompressionSample> =
        samples.iter().filter(|s| (s.radius as f64) >= fit.r_min && (s.radius as f64) <= fit.r_max).collect();
    if in_window.is_empty() {
        return Err(Error::InsufficientSamples { needed: fit.min_count * fit.min_buckets, found: 0 });
    }
    let lo = in_window.iter().map(|s| s.radius).min().unwrap() as f64;
    let hi = in_window.iter().map(|s| s.radius).max().unwrap() as f64;
    if hi / lo < 100.0 {
        return Err(Error::InsufficientSpan { min: lo, max: hi });
    }
    if in_window.iter().all(|s| s.norm == 0.0) {
        return Err(Error::Degenerate("all cocycle norms vanish".into()));
    }

    let log_ratio = fit.bin_ratio.ln();
    let nbins = ((fit.r_max / fit.r_min).ln() / log_ratio).floor() as usize + 1;
    let mut bins: Vec<Vec<&CompressionSample>> = vec![Vec::new(); nbins];
    for s in &in_window {
        let idx = ((s.radius as f64 / fit.r_min).ln() / log_ratio).floor() as usize;
        bins[idx.min(nbins - 1)].push(s);
    }
    let mut buckets = Vec::new();
    for bin in bins.iter().filter(|b| b.len() >= fit.min_count) {
        let min = bin.iter().min_by(|a, b| a.norm.total_cmp(&b.norm)).expect("nonempty bin");
        if min.norm <= 0.0 {
            return Err(Error::Degenerate(format!("zero cocycle norm at radius {}", min.radius)));
        }
        let n = bin.len() as f64;
        buckets.push(Bucket {
            radius: (bin.iter().map(|s| (s.radius as f64).ln()).sum::<f64>() / n).exp(),
            count: bin.len(),
            min_norm: min.norm,
            min_radius: min.radius as f64,
            gmean_norm: (bin.iter().map(|s| s.norm.ln()).sum::<f64>() / n).exp(),
        });
    }
    if buckets.len() < fit.min_buckets {
        return Err(Error::InsufficientSamples { needed: fit.min_buckets, found: buckets.len() });
    }
    let log = |xs: Vec<f64>| xs.into_iter().map(f64::ln).collect::<Vec<_>>();
    let envelope = linear_fit(
        &log(buckets.iter().map(|b| b.min_radius).collect()),
        &log(buckets.iter().map(|b| b.min_norm).collect()),
    )
    .ok_or_else(|| Error::Degenerate("envelope fit failed".into()))?;
    let mean = linear_fit(
        &log(buckets.iter().map(|b| b.radius).collect()),
        &log(buckets.iter().map(|b| b.gmean_norm).collect()),
    )
    .ok_or_else(|| Error::Degenerate("mean fit failed".into()))?;
    let walk_samples = in_window.iter().filter(|s| s.source == SampleSource::Walk).count();
    Ok(CompressionReport {
        buckets,
        alpha_envelope: envelope.slope,
        envelope_stderr: envelope.slope_stderr,
        alpha_mean: mean.slope,
        mean_stderr: mean.slope_stderr,
        window: (fit.r_min, fit.r_max),
        walk_samples,
        uniform_samples: in_window.len() - walk_samples,
    })
}

// ---------------------------------------------------------------------------
// Amenability criterion

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Consistent,
    /// The fitted growth exceeds `|g|^{1/p}` by more than two standard
    /// errors on a group flagged nonamenable, which no cocycle into a
    /// p-uniformly smooth space can do.
    Inconsistent,
}

/// Flags a fitted exponent that would contradict the criterion: a
/// nonamenable group admits no cocycle into a p-uniformly smooth space
/// growing faster than `|g|^{1/p}`.
pub fn amenability_verdict(alpha_hat: f64, stderr: f64, p: f64, group_nonamenable: bool) -> Verdict {
    if group_nonamenable && alpha_hat - 2.0 * stderr > 1.0 / p {
        Verdict::Inconsistent
    } else {
        Verdict::Consistent
    }
}

/// Sample covariance of `f(X)` and `g(X)` with its standard error.
pub fn monotone_covariance(xs: &[f64], f: impl Fn(f64) -> f64, g: impl Fn(f64) -> f64) -> MeanEstimate {
    let fx: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let gx: Vec<f64> = xs.iter().map(|&x| g(x)).collect();
    let (cov, stderr) = covariance_with_stderr(&fx, &gx);
    MeanEstimate { mean: cov, stderr, count: xs.len() }
}

// ---------------------------------------------------------------------------
// η witness

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EtaSample {
    pub radius: u64,
    pub f: f64,
    pub h: f64,
}

/// Nondecreasing step function `η` with `f(g)·η(|g|) ≤ h(g)` on every
/// sample. `η(r)` is the value at the largest breakpoint `≤ r`, and `0`
/// below the first breakpoint.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EtaWitness {
    pub breakpoints: Vec<u64>,
    pub values: Vec<f64>,
    /// Heuristic: `η` ends above every threshold and its log–log trend is
    /// positive by more than two standard errors. Never a proof.
    pub diverges: bool,
    pub trend: Option<LinearFit>,
    pub thresholds: Vec<f64>,
}

impl EtaWitness {
    pub fn value_at(&self, r: u64) -> f64 {
        match self.breakpoints.partition_point(|&b| b <= r) {
            0 => 0.0,
            i => self.values[i - 1],
        }
    }
}

/// Builds the largest nondecreasing `η` compatible with the samples:
/// `m(R) = min_{|g|=R} h/f`, then `η(R) = min_{R' ≥ R} m(R')`.
///
/// Identity samples (radius 0) are ignored. `thresholds` default to
/// `2, 4, 8` times the first positive value of `η`.
pub fn build_eta(samples: &[EtaSample], thresholds: Option<&[f64]>) -> Result<EtaWitness> {
    use std::collections::BTreeMap;
    let mut per_radius: BTreeMap<u64, f64> = BTreeMap::new();
    for s in samples.iter().filter(|s| s.radius > 0) {
        if !(s.f > 0.0) {
            return Err(Error::invalid(format!(
                "f must be positive away from the identity (f = {} at radius {})",
                s.f, s.radius
            )));
        }
        let m = per_radius.entry(s.radius).or_insert(f64::INFINITY);
        *m = m.min(s.h / s.f);
    }
    if per_radius.is_empty() {
        return Err(Error::InsufficientSamples { needed: 1, found: 0 });
    }
    let breakpoints: Vec<u64> = per_radius.keys().copied().collect();
    let mut values: Vec<f64> = per_radius.values().copied().collect();
    for i in (0..values.len().saturating_sub(1)).rev() {
        values[i] = values[i].min(values[i + 1]);
    }
    // η maps into ℝ₊
    for v in &mut values {
        *v = v.max(0.0);
    }

    let positive: Vec<(f64, f64)> = breakpoints
        .iter()
        .zip(&values)
        .filter(|(_, &v)| v > 0.0)
        .map(|(&r, &v)| ((r as f64).ln(), v.ln()))
        .collect();
    let trend = linear_fit(
        &positive.iter().map(|p| p.0).collect::<Vec<_>>(),
        &positive.iter().map(|p| p.1).collect::<Vec<_>>(),
    );
    let thresholds: Vec<f64> = match thresholds {
        Some(t) => t.to_vec(),
        None => {
            let base = values.iter().copied().find(|&v| v > 0.0).unwrap_or(0.0);
            vec![2.0 * base, 4.0 * base, 8.0 * base]
        }
    };
    let last = *values.last().expect("nonempty");
    let diverges = last > 0.0
        && thresholds.iter().all(|&t| last > t)
        && trend.is_some_and(|t| t.slope - 2.0 * t.slope_stderr > 0.0);
    Ok(EtaWitness { breakpoints, values, diverges, trend, thresholds })
}
