use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::Serialize;

use super::{lp_norm, Norm, NormSpec};
use crate::error::{Error, Result};
use crate::linalg::{finite_closure, spectral_norm};
use crate::rng::stream_rng;

pub const CLOSURE_CAP: usize = 10_000;
const SAMPLED_WORD_LENGTH: usize = 64;

/// Orbit-sup norm `‖v‖′ = sup_g ‖π(g)v‖` of a bounded linear action.
///
/// When the generators close up into a finite group the sup runs over the
/// whole group and the result is exactly invariant. Otherwise, given a
/// uniform bound, the sup runs over a sample of the orbit and is only a
/// lower estimate of the invariant norm.
#[derive(Clone, Debug)]
pub struct InvariantNorm {
    base: NormSpec,
    generators: Vec<DMatrix<f64>>,
    orbit: Vec<DMatrix<f64>>,
    bound: f64,
    heuristic: bool,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Equivalence {
    /// `lower·‖v‖ ≤ ‖v‖′ ≤ upper·‖v‖`.
    pub lower: f64,
    pub upper: f64,
}

impl InvariantNorm {
    pub fn new(
        base: NormSpec,
        generators: Vec<DMatrix<f64>>,
        bound: Option<f64>,
        budget: usize,
        seed: u64,
    ) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::invalid("at least one generator is required"));
        }
        for g in &generators {
            if g.nrows() != base.dim || g.ncols() != base.dim {
                return Err(Error::DimensionMismatch { expected: base.dim, found: g.nrows() });
            }
        }
        if let Some(orbit) = finite_closure(&generators, CLOSURE_CAP) {
            let bound = orbit.iter().map(|g| operator_norm(g, base.p)).fold(1.0, f64::max);
            return Ok(InvariantNorm { base, generators, orbit, bound, heuristic: false });
        }
        let Some(m) = bound else {
            return Err(Error::ClosureCapExceeded { cap: CLOSURE_CAP });
        };
        if !(m >= 1.0) || !m.is_finite() {
            return Err(Error::invalid(format!("uniform bound must be finite and >= 1, got {m}")));
        }
        if budget == 0 {
            return Err(Error::invalid("orbit sampling budget must be positive"));
        }
        let mut letters = generators.clone();
        for g in &generators {
            letters.push(g.clone().try_inverse().ok_or(Error::Singular)?);
        }
        let mut rng = stream_rng(seed, 0);
        let n = base.dim;
        let mut orbit = vec![DMatrix::identity(n, n)];
        for _ in 0..budget {
            let len = rng.random_range(1..=SAMPLED_WORD_LENGTH);
            let mut g = DMatrix::identity(n, n);
            for _ in 0..len {
                g = &g * &letters[rng.random_range(0..letters.len())];
            }
            let norm = operator_norm(&g, base.p);
            if norm > m * (1.0 + 1e-9) {
                return Err(Error::invalid(format!(
                    "sampled orbit element has norm {norm} above the stated bound {m}"
                )));
            }
            orbit.push(g);
        }
        Ok(InvariantNorm { base, generators, orbit, bound: m, heuristic: true })
    }

    pub fn base(&self) -> NormSpec {
        self.base
    }

    pub fn orbit_size(&self) -> usize {
        self.orbit.len()
    }

    /// True for the sampled-orbit variant.
    pub fn is_heuristic(&self) -> bool {
        self.heuristic
    }

    pub fn renorm(&self, v: &[f64]) -> f64 {
        let x = DVector::from_column_slice(v);
        self.orbit.iter().map(|g| lp_norm((g * &x).as_slice(), self.base.p)).fold(0.0, f64::max)
    }

    /// `max_s |‖π(s)v‖′ − ‖v‖′|` over the generators.
    pub fn invariance_residual(&self, v: &[f64]) -> f64 {
        let x = DVector::from_column_slice(v);
        let r = self.renorm(v);
        self.generators.iter().map(|s| (self.renorm((s * &x).as_slice()) - r).abs()).fold(0.0, f64::max)
    }

    /// The identity lies in the orbit, so `‖v‖′ ≥ ‖v‖`; the upper constant
    /// is the largest operator norm over the orbit (or the supplied bound).
    pub fn equivalence(&self) -> Equivalence {
        Equivalence { lower: 1.0, upper: self.bound }
    }
}

impl Norm for InvariantNorm {
    fn dim(&self) -> usize {
        self.base.dim
    }

    fn norm(&self, x: &[f64]) -> f64 {
        self.renorm(x)
    }
}

/// Renormed value of `v` under the finite group generated by `generators`.
pub fn invariant_renorm(base: NormSpec, generators: &[DMatrix<f64>], v: &[f64]) -> Result<f64> {
    if v.len() != base.dim {
        return Err(Error::DimensionMismatch { expected: base.dim, found: v.len() });
    }
    Ok(InvariantNorm::new(base, generators.to_vec(), None, 0, 0)?.renorm(v))
}

/// `‖A‖_{p→p}`: exact for p ∈ {1, 2, ∞}, the Riesz–Thorin upper bound
/// `‖A‖₁^{1/p}‖A‖_∞^{1−1/p}` otherwise.
fn operator_norm(a: &DMatrix<f64>, p: f64) -> f64 {
    let col = (0..a.ncols()).map(|j| a.column(j).iter().map(|x| x.abs()).sum::<f64>()).fold(0.0, f64::max);
    let row = (0..a.nrows()).map(|i| a.row(i).iter().map(|x| x.abs()).sum::<f64>()).fold(0.0, f64::max);
    if p == 1.0 {
        col
    } else if p.is_infinite() {
        row
    } else if p == 2.0 {
        spectral_norm(a)
    } else {
        col.powf(1.0 / p) * row.powf(1.0 - 1.0 / p)
    }
}
