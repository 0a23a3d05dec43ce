use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::{invariant_decomposition, markov_operator, spectral_radius, FiniteMeasure};
use crate::error::{Error, Result};
use crate::groups::{GroupElement, Letter};
use crate::repcoc::{from_dense, to_dense, CocycleSpec};

/// Refusal threshold on the spectral radius of π(μ) restricted to `B_π`.
pub const RADIUS_TOL: f64 = 1e-8;
const DRIFT_TOL: f64 = 1e-10;

/// Result of harmonizing `b` against μ.
#[derive(Clone, Debug, Serialize)]
pub struct Harmonization {
    /// Solution of `(I − π(μ))x₁ = b(μ)` in the complement.
    pub x1: Vec<f64>,
    /// `b_K = b + (π(·)x₁ − x₁)`, given by its generator values.
    #[serde(skip)]
    pub cocycle: CocycleSpec,
    /// `‖b_K(μ)‖`.
    pub residual: f64,
    pub spectral_radius: f64,
}

/// Moves `b` within its cohomology class to the cocycle `b_K` with
/// `b_K(μ) = 0`.
///
/// Refused when π(μ) has no gap on the complement (the fixed-point problem
/// has no unique solution) or when `b(μ)` has a component in the invariant
/// space that no coboundary can cancel.
pub fn harmonize(b: &CocycleSpec, mu: &FiniteMeasure) -> Result<Harmonization> {
    let rep = b.rep();
    let dec = invariant_decomposition(rep)?;
    let n = dec.projection.nrows();
    let markov = markov_operator(rep, mu)?;

    let b_at = |g: &GroupElement| -> Result<DVector<f64>> { to_dense(&b.evaluate(g)?, n) };
    let mut b_mu = DVector::zeros(n);
    for (g, w) in mu.support().iter().zip(mu.weights()) {
        b_mu += b_at(&GroupElement::Free(g.clone()))? * *w;
    }

    let scale = 1.0 + b_mu.norm();
    let drift = (&dec.projection * &b_mu).norm();
    if drift > DRIFT_TOL * scale {
        return Err(Error::InvariantDrift(drift));
    }

    let x1 = if dec.complement_dim() == 0 {
        DVector::zeros(n)
    } else {
        let a = dec.restrict(&markov);
        let radius = spectral_radius(&a);
        if radius >= 1.0 - RADIUS_TOL {
            return Err(Error::NoSpectralGap { radius });
        }
        let m = a.nrows();
        let rhs = dec.complement.transpose() * (&b_mu - &dec.projection * &b_mu);
        let y = (DMatrix::identity(m, m) - a).lu().solve(&rhs).ok_or(Error::Singular)?;
        &dec.complement * y
    };

    let rank = match *rep.group() {
        crate::groups::GroupDescriptor::Free { rank } => rank,
        _ => unreachable!("markov_operator only accepts free groups"),
    };
    let values = (0..rank)
        .map(|i| {
            let s = GroupElement::Free(crate::groups::FreeWord::letter(Letter::new(i, false)));
            let pi = rep.matrix_of(&s)?;
            Ok(from_dense(&(b_at(&s)? + &pi * &x1 - &x1)))
        })
        .collect::<Result<Vec<_>>>()?;
    let cocycle = CocycleSpec::generator_values(rep.clone(), values)?;

    let mut bk_mu = DVector::zeros(n);
    for (g, w) in mu.support().iter().zip(mu.weights()) {
        bk_mu += to_dense(&cocycle.evaluate(&GroupElement::Free(g.clone()))?, n)? * *w;
    }
    let radius = if dec.complement_dim() == 0 { 0.0 } else { spectral_radius(&dec.restrict(&markov)) };
    Ok(Harmonization { x1: x1.as_slice().to_vec(), cocycle, residual: bk_mu.norm(), spectral_radius: radius })
}
