//! Simple random walks and the exact distance chain of the free group.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{GroupDescriptor, GroupElement};
use crate::error::{Error, Result};
use crate::rng::{map_indexed, stream_rng, StreamRng};
use crate::stats::MeanEstimate;

/// Right random walk `Wₙ₊₁ = Wₙ·s` with `s` uniform on the generating set.
pub struct Walker {
    position: GroupElement,
    generators: usize,
    rng: StreamRng,
}

impl Walker {
    pub fn new(desc: &GroupDescriptor, seed: u64, stream: u64) -> Self {
        Walker {
            position: desc.identity(),
            generators: desc.generator_count(),
            rng: stream_rng(seed, stream),
        }
    }

    /// Advances one step and returns the generator slot used.
    pub fn step(&mut self) -> usize {
        let slot = self.rng.random_range(0..self.generators);
        self.position.step(slot);
        slot
    }

    pub fn position(&self) -> &GroupElement {
        &self.position
    }

    pub fn into_position(self) -> GroupElement {
        self.position
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WalkTrajectory {
    pub seed: u64,
    pub steps: Vec<GroupElement>,
}

impl WalkTrajectory {
    pub fn len(&self) -> usize {
        self.steps.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn endpoint(&self) -> &GroupElement {
        self.steps.last().expect("trajectory always contains W0")
    }

    pub fn distance_profile(&self) -> DistanceProfile {
        DistanceProfile {
            seed: self.seed,
            stream: 0,
            distances: self.steps.iter().map(GroupElement::word_length).collect(),
        }
    }
}

/// Samples `W₀ = e, W₁, …, Wₙ` on stream 0 of `seed`.
pub fn sample_walk(desc: &GroupDescriptor, n: usize, seed: u64) -> WalkTrajectory {
    let mut walker = Walker::new(desc, seed, 0);
    let mut steps = Vec::with_capacity(n + 1);
    steps.push(walker.position().clone());
    for _ in 0..n {
        walker.step();
        steps.push(walker.position().clone());
    }
    WalkTrajectory { seed, steps }
}

/// Word lengths `|W₀|, …, |Wₙ|` of one walk, without storing positions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistanceProfile {
    pub seed: u64,
    pub stream: u64,
    pub distances: Vec<u64>,
}

impl DistanceProfile {
    pub fn steps(&self) -> usize {
        self.distances.len().saturating_sub(1)
    }

    pub fn final_distance(&self) -> u64 {
        self.distances.last().copied().unwrap_or(0)
    }
}

pub fn distance_profile(desc: &GroupDescriptor, n: usize, seed: u64, stream: u64) -> DistanceProfile {
    let mut walker = Walker::new(desc, seed, stream);
    let mut distances = Vec::with_capacity(n + 1);
    distances.push(0);
    for _ in 0..n {
        walker.step();
        distances.push(walker.position().word_length());
    }
    DistanceProfile { seed, stream, distances }
}

/// `walks` independent profiles; walk `i` uses stream `i` of `seed`.
pub fn sample_distance_profiles(
    desc: &GroupDescriptor,
    n: usize,
    walks: usize,
    seed: u64,
) -> Vec<DistanceProfile> {
    map_indexed(walks, |i| distance_profile(desc, n, seed, i as u64))
}

/// Pointwise mean of `|Wₘ|` across profiles, `m = 0..=n`.
pub fn mean_distance_curve(profiles: &[DistanceProfile]) -> Vec<MeanEstimate> {
    let n = profiles.iter().map(|p| p.distances.len()).min().unwrap_or(0);
    (0..n).map(|m| MeanEstimate::from_samples(profiles.iter().map(|p| p.distances[m] as f64))).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EscapeEstimate {
    pub rate: f64,
    pub stderr: f64,
    /// Half-width of the 95% normal-approximation interval.
    pub half_width: f64,
    pub steps: usize,
    pub walks: usize,
}

pub fn estimate_escape_rate(profiles: &[DistanceProfile]) -> Result<EscapeEstimate> {
    if profiles.len() < 2 {
        return Err(Error::InsufficientSamples { needed: 2, found: profiles.len() });
    }
    let n = profiles[0].steps();
    if profiles.iter().any(|p| p.steps() != n) {
        return Err(Error::invalid("trajectories must all have the same length"));
    }
    if n < 100 {
        return Err(Error::InsufficientSamples { needed: 100, found: n });
    }
    let est = MeanEstimate::from_samples(profiles.iter().map(|p| p.final_distance() as f64 / n as f64));
    Ok(EscapeEstimate {
        rate: est.mean,
        stderr: est.stderr,
        half_width: 1.96 * est.stderr,
        steps: n,
        walks: profiles.len(),
    })
}

// Probabilities below this are dropped from the active window; they are far
// below anything that can affect a moment in double precision.
const NEGLIGIBLE: f64 = 1e-300;

/// Distance process of the simple random walk on `F_rank` as a birth–death
/// chain on ℕ: from 0 always up, from `d ≥ 1` up with probability
/// `(2k − 1)/2k` and down otherwise.
struct DistanceChain {
    up: f64,
    down: f64,
    prob: Vec<f64>,
    next: Vec<f64>,
    hi: usize,
    lo: usize,
}

impl DistanceChain {
    fn new(rank: usize, n: usize) -> Self {
        let k = rank as f64;
        let mut prob = vec![0.0; n + 2];
        prob[0] = 1.0;
        DistanceChain {
            up: (2.0 * k - 1.0) / (2.0 * k),
            down: 1.0 / (2.0 * k),
            next: vec![0.0; n + 2],
            prob,
            lo: 0,
            hi: 0,
        }
    }

    fn step(&mut self) {
        let lo = self.lo.saturating_sub(1);
        let hi = self.hi + 1;
        self.next[lo..=hi].iter_mut().for_each(|x| *x = 0.0);
        for d in self.lo..=self.hi {
            let p = self.prob[d];
            if p == 0.0 {
                continue;
            }
            if d == 0 {
                self.next[1] += p;
            } else {
                self.next[d + 1] += self.up * p;
                self.next[d - 1] += self.down * p;
            }
        }
        std::mem::swap(&mut self.prob, &mut self.next);
        self.lo = lo;
        self.hi = hi;
        while self.lo < self.hi && self.prob[self.lo] < NEGLIGIBLE {
            self.prob[self.lo] = 0.0;
            self.lo += 1;
        }
        while self.hi > self.lo && self.prob[self.hi] < NEGLIGIBLE {
            self.prob[self.hi] = 0.0;
            self.hi -= 1;
        }
    }

    fn moment(&self, powers: &[f64]) -> f64 {
        (self.lo..=self.hi).map(|d| self.prob[d] * powers[d]).sum()
    }
}

fn check_chain_args(desc: &GroupDescriptor, n: usize) -> Result<usize> {
    let GroupDescriptor::Free { rank } = *desc else {
        return Err(Error::UnsupportedGroup { required: "a free group", found: desc.to_string() });
    };
    if n > 100_000 {
        return Err(Error::invalid("exact distance chain limited to n <= 100000"));
    }
    Ok(rank)
}

/// Exact `E[|Wₘ|ᵖ]` for `m = 0..=n` on a free group.
pub fn exact_distance_moments(desc: &GroupDescriptor, n: usize, p: f64) -> Result<Vec<f64>> {
    let rank = check_chain_args(desc, n)?;
    if !(p.is_finite() && p > 0.0) {
        return Err(Error::invalid("moment exponent must be positive and finite"));
    }
    let powers: Vec<f64> = (0..n + 2).map(|d| (d as f64).powf(p)).collect();
    let mut chain = DistanceChain::new(rank, n);
    let mut out = Vec::with_capacity(n + 1);
    out.push(chain.moment(&powers));
    for _ in 0..n {
        chain.step();
        out.push(chain.moment(&powers));
    }
    Ok(out)
}

/// Exact law of `|Wₙ|` on a free group, indexed by distance.
pub fn exact_distance_distribution(desc: &GroupDescriptor, n: usize) -> Result<Vec<f64>> {
    let rank = check_chain_args(desc, n)?;
    let mut chain = DistanceChain::new(rank, n);
    for _ in 0..n {
        chain.step();
    }
    chain.prob.truncate(n + 1);
    Ok(chain.prob)
}
