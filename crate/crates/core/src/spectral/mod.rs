//! Spectral gaps of finite-dimensional representations: Markov operators,
//! the invariant/complement splitting, Kazhdan constants, averaging over
//! finite subgroups and harmonization of cocycles.

mod gallery;
mod harmonize;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};
use crate::groups::{FreeWord, GroupElement};
use crate::linalg::{self, column_space, finite_closure, null_space, orthogonal_complement};
use crate::repcoc::{RepKind, RepSpec};
use crate::rng::stream_rng;

pub use gallery::{
    builtin_gallery, evaluate_gallery, Expected, Gallery, GalleryExample, GalleryOutcome, GapSummary,
};
pub use harmonize::{harmonize, Harmonization};

/// Gap threshold: the restricted Markov operator must have norm below
/// `1 − GAP_TOL`.
pub const GAP_TOL: f64 = 1e-10;
const RANK_TOL: f64 = 1e-10;
const KAZHDAN_RESTARTS: usize = 256;
const KAZHDAN_ITERATIONS: usize = 400;

/// Probability measure with finite support in a free group.
///
/// JSON: `{"support": ["a", "A"], "weights": [0.5, 0.5]}`; words may also be
/// given as signed letter lists.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "MeasureJson")]
pub struct FiniteMeasure {
    support: Vec<FreeWord>,
    weights: Vec<f64>,
}

#[derive(Deserialize)]
struct MeasureJson {
    #[serde(deserialize_with = "de_words")]
    support: Vec<FreeWord>,
    weights: Option<Vec<f64>>,
}

impl TryFrom<MeasureJson> for FiniteMeasure {
    type Error = Error;
    fn try_from(j: MeasureJson) -> Result<Self> {
        match j.weights {
            Some(w) => FiniteMeasure::new(j.support, w),
            None => FiniteMeasure::uniform(j.support),
        }
    }
}

fn de_words<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<FreeWord>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum WordInput {
        Text(String),
        Letters(FreeWord),
    }
    Vec::<WordInput>::deserialize(d)?
        .into_iter()
        .map(|w| match w {
            WordInput::Text(s) => s.parse().map_err(serde::de::Error::custom),
            WordInput::Letters(w) => Ok(w),
        })
        .collect()
}

impl FiniteMeasure {
    pub fn new(support: Vec<FreeWord>, weights: Vec<f64>) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::invalid("measure support is empty"));
        }
        if support.len() != weights.len() {
            return Err(Error::invalid(format!(
                "{} support points but {} weights",
                support.len(),
                weights.len()
            )));
        }
        if weights.iter().any(|w| !(*w > 0.0) || !w.is_finite()) {
            return Err(Error::invalid("weights must be positive"));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::invalid(format!("weights sum to {total}, not 1")));
        }
        Ok(FiniteMeasure { support, weights })
    }

    pub fn uniform(support: Vec<FreeWord>) -> Result<Self> {
        let w = 1.0 / support.len().max(1) as f64;
        let n = support.len();
        FiniteMeasure::new(support, vec![w; n])
    }

    /// Point mass at the identity.
    pub fn dirac() -> Self {
        FiniteMeasure { support: vec![FreeWord::identity()], weights: vec![1.0] }
    }

    /// Uniform measure on the generators of `F_rank` and their inverses.
    pub fn simple(rank: usize) -> Result<Self> {
        let support = (0..rank)
            .flat_map(|i| [false, true].map(|inv| FreeWord::letter(crate::groups::Letter::new(i, inv))))
            .collect();
        FiniteMeasure::uniform(support)
    }

    pub fn support(&self) -> &[FreeWord] {
        &self.support
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn is_symmetric(&self) -> bool {
        self.support.iter().zip(&self.weights).all(|(g, w)| {
            let gi = g.inverse();
            self.support.iter().zip(&self.weights).any(|(h, v)| *h == gi && (v - w).abs() <= 1e-12)
        })
    }

    /// The mixture `t·self + (1−t)·other`.
    pub fn mix(&self, other: &FiniteMeasure, t: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::invalid("mixing weight must lie in [0, 1]"));
        }
        let mut support = Vec::new();
        let mut weights = Vec::new();
        for (m, s) in [(self, t), (other, 1.0 - t)] {
            for (g, w) in m.support.iter().zip(&m.weights) {
                if s * w > 0.0 {
                    support.push(g.clone());
                    weights.push(s * w);
                }
            }
        }
        let total: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= total);
        FiniteMeasure::new(support, weights)
    }
}

/// `π(μ) = Σ μ(g)·π(g)`.
pub fn markov_operator(rep: &RepSpec, mu: &FiniteMeasure) -> Result<DMatrix<f64>> {
    let n = matrix_dim(rep)?;
    let mut m = DMatrix::zeros(n, n);
    for (g, w) in mu.support.iter().zip(&mu.weights) {
        m += rep.matrix_of(&GroupElement::Free(g.clone()))? * *w;
    }
    Ok(m)
}

fn matrix_dim(rep: &RepSpec) -> Result<usize> {
    if !rep.group().is_free() {
        return Err(Error::UnsupportedGroup { required: "a free group", found: rep.group().to_string() });
    }
    rep.dim().ok_or(Error::UnsupportedGroup {
        required: "a matrix representation",
        found: "tree permutation representation".into(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DecompositionMethod {
    /// Average over the enumerated finite image group.
    GroupAverage,
    /// Orthogonal complement of the fixed space (orthogonal images).
    Orthogonal,
    /// Orthogonal splitting of `U`, transported by `D`.
    Conjugated,
}

/// `ℝⁿ = B^π ⊕ B_π` with the projection `P` onto `B^π` along `B_π`.
#[derive(Clone, Debug)]
pub struct Decomposition {
    /// Orthonormal columns spanning the joint fixed space.
    pub invariant: DMatrix<f64>,
    /// Orthonormal columns spanning the invariant complement.
    pub complement: DMatrix<f64>,
    pub projection: DMatrix<f64>,
    pub method: DecompositionMethod,
}

impl Decomposition {
    pub fn invariant_dim(&self) -> usize {
        self.invariant.ncols()
    }

    pub fn complement_dim(&self) -> usize {
        self.complement.ncols()
    }

    /// Matrix of `a` restricted to the complement, in the coordinates of
    /// its basis. `a` must leave the complement invariant.
    pub fn restrict(&self, a: &DMatrix<f64>) -> DMatrix<f64> {
        self.complement.transpose() * a * &self.complement
    }
}

pub fn invariant_decomposition(rep: &RepSpec) -> Result<Decomposition> {
    let n = matrix_dim(rep)?;
    let gens = rep.generator_images();
    let id = DMatrix::<f64>::identity(n, n);
    let fixed = |gens: &[DMatrix<f64>]| {
        let mut stacked = DMatrix::zeros(n * gens.len(), n);
        for (i, g) in gens.iter().enumerate() {
            stacked.view_mut((i * n, 0), (n, n)).copy_from(&(g - &id));
        }
        null_space(&stacked, RANK_TOL)
    };
    let invariant = fixed(&gens);

    if let Some(elements) = finite_closure(&gens, 10_000) {
        let mut p = DMatrix::zeros(n, n);
        for g in &elements {
            p += g;
        }
        p /= elements.len() as f64;
        let complement = column_space(&(&id - &p), RANK_TOL);
        return Ok(Decomposition {
            invariant,
            complement,
            projection: p,
            method: DecompositionMethod::GroupAverage,
        });
    }
    if rep.is_orthogonal() {
        let projection = &invariant * invariant.transpose();
        let complement = orthogonal_complement(&invariant, RANK_TOL);
        return Ok(Decomposition {
            invariant,
            complement,
            projection,
            method: DecompositionMethod::Orthogonal,
        });
    }
    if let RepKind::DiagConjugated { diag, unitary } = rep.kind() {
        let d = DMatrix::from_diagonal(diag);
        let dinv = DMatrix::from_diagonal(&diag.map(|x| 1.0 / x));
        let fixed_u = fixed(unitary);
        let pu = &fixed_u * fixed_u.transpose();
        let projection = &d * pu * &dinv;
        let complement = column_space(&(&id - &projection), RANK_TOL);
        return Ok(Decomposition {
            invariant,
            complement,
            projection,
            method: DecompositionMethod::Conjugated,
        });
    }
    Err(Error::DecompositionRefused(
        "the generated group is not finite and the images are neither orthogonal nor \
         diagonally conjugated to orthogonal ones"
            .into(),
    ))
}

#[derive(Clone, Debug, Serialize)]
pub struct KazhdanReport {
    /// Value at the witness: an upper bound on the true constant.
    pub kappa: f64,
    /// `sqrt(λ_min(mean_g A_gᵀA_g))`, a certified lower bound.
    pub lower_bound: f64,
    pub witness: Vec<f64>,
    pub restarts: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct GapReport {
    pub invariant_dim: usize,
    pub complement_dim: usize,
    pub complement_norm: f64,
    /// Kazhdan constant for the support of μ; `None` when `B_π = {0}`.
    pub kazhdan: Option<KazhdanReport>,
    pub gap_present: bool,
}

/// Norm of π(μ) on the complement, with the Kazhdan constant of the
/// support of μ.
pub fn gap_norm(rep: &RepSpec, mu: &FiniteMeasure) -> Result<GapReport> {
    let dec = invariant_decomposition(rep)?;
    let markov = markov_operator(rep, mu)?;
    let complement_norm =
        if dec.complement_dim() == 0 { 0.0 } else { linalg::spectral_norm(&dec.restrict(&markov)) };
    let kazhdan = match kazhdan_with(rep, &dec, mu.support()) {
        Ok(k) => Some(k),
        Err(Error::VacuousComplement) => None,
        Err(e) => return Err(e),
    };
    Ok(GapReport {
        invariant_dim: dec.invariant_dim(),
        complement_dim: dec.complement_dim(),
        complement_norm,
        kazhdan,
        gap_present: complement_norm < 1.0 - GAP_TOL,
    })
}

/// `κ(Q) = min_{v ∈ B_π, ‖v‖=1} max_{g∈Q} ‖π(g)v − v‖`.
pub fn kazhdan_constant(rep: &RepSpec, q: &[FreeWord]) -> Result<KazhdanReport> {
    let dec = invariant_decomposition(rep)?;
    kazhdan_with(rep, &dec, q)
}

fn kazhdan_with(rep: &RepSpec, dec: &Decomposition, q: &[FreeWord]) -> Result<KazhdanReport> {
    let m = dec.complement_dim();
    if m == 0 {
        return Err(Error::VacuousComplement);
    }
    if q.is_empty() {
        return Err(Error::invalid("Kazhdan set is empty"));
    }
    let n = dec.complement.nrows();
    let id = DMatrix::<f64>::identity(n, n);
    let blocks: Vec<DMatrix<f64>> = q
        .iter()
        .map(|g| Ok((rep.matrix_of(&GroupElement::Free(g.clone()))? - &id) * &dec.complement))
        .collect::<Result<_>>()?;

    let mut gram = DMatrix::zeros(m, m);
    for a in &blocks {
        gram += a.transpose() * a;
    }
    gram /= blocks.len() as f64;
    let lower_bound = gram.symmetric_eigenvalues().min().max(0.0).sqrt();

    let objective =
        |y: &DVector<f64>| -> (f64, usize) {
            blocks
                .iter()
                .enumerate()
                .map(|(i, a)| ((a * y).norm(), i))
                .fold((f64::NEG_INFINITY, 0), |acc, x| if x.0 > acc.0 { x } else { acc })
        };

    let mut rng = stream_rng(0, 0);
    let mut best_val = f64::INFINITY;
    let mut best_y = DVector::zeros(m);
    for restart in 0..KAZHDAN_RESTARTS {
        let mut y = if restart < m {
            DVector::from_fn(m, |i, _| if i == restart { 1.0 } else { 0.0 })
        } else {
            DVector::from_fn(m, |_, _| rng.random_range(-1.0..1.0))
        };
        let len = y.norm();
        if len == 0.0 {
            continue;
        }
        y /= len;
        let (mut val, _) = objective(&y);
        let mut local_best = (val, y.clone());
        for k in 1..=KAZHDAN_ITERATIONS {
            let (_, active) = objective(&y);
            let a = &blocks[active];
            let ay = a * &y;
            let norm = ay.norm();
            if norm == 0.0 {
                break;
            }
            let mut grad = a.transpose() * ay / norm;
            // project onto the tangent space of the sphere
            grad -= &y * y.dot(&grad);
            let step = 0.5 / (k as f64).sqrt();
            y -= grad * step;
            y /= y.norm();
            val = objective(&y).0;
            if val < local_best.0 {
                local_best = (val, y.clone());
            }
        }
        if local_best.0 < best_val {
            best_val = local_best.0;
            best_y = local_best.1;
        }
    }
    let witness = &dec.complement * &best_y;
    Ok(KazhdanReport {
        kappa: best_val,
        lower_bound: lower_bound.min(best_val),
        witness: witness.as_slice().to_vec(),
        restarts: KAZHDAN_RESTARTS,
    })
}

/// `P = |K|⁻¹ Σ_{k∈K} π(k)` over the distinct images of `k`.
pub fn average_over_subgroup(rep: &RepSpec, k: &[FreeWord]) -> Result<DMatrix<f64>> {
    let n = matrix_dim(rep)?;
    let mut images: Vec<DMatrix<f64>> = Vec::new();
    for w in k {
        let m = rep.matrix_of(&GroupElement::Free(w.clone()))?;
        if !images.iter().any(|x| linalg::max_abs_diff(x, &m) < 1e-8) {
            images.push(m);
        }
    }
    if images.is_empty() {
        return Err(Error::NotASubgroup("empty set".into()));
    }
    let contains = |m: &DMatrix<f64>| images.iter().any(|x| linalg::max_abs_diff(x, m) < 1e-8);
    for a in &images {
        let inv = a.clone().try_inverse().ok_or(Error::Singular)?;
        if !contains(&inv) {
            return Err(Error::NotASubgroup("not closed under inverses".into()));
        }
        for b in &images {
            if !contains(&(a * b)) {
                return Err(Error::NotASubgroup("not closed under products".into()));
            }
        }
    }
    let mut p = DMatrix::zeros(n, n);
    for m in &images {
        p += m;
    }
    Ok(p / images.len() as f64)
}

/// Largest modulus of an eigenvalue.
pub fn spectral_radius(a: &DMatrix<f64>) -> f64 {
    if a.nrows() == 0 {
        return 0.0;
    }
    a.complex_eigenvalues().iter().map(|z| z.norm()).fold(0.0, f64::max)
}
