//! Cocycles `b(gh) = b(g) + π(g)b(h)` for the implemented representations.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Deserializer, Serialize};

use super::rep::{from_dense, to_dense, RepSpec};
use super::sparse::{BasisKey, EdgeKey, SparseVector};
use crate::error::{Error, Result};
use crate::groups::{FreeWord, GroupDescriptor, GroupElement, Letter};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CocycleKind {
    /// Signed indicator of the geodesic `[e, g]` in the Cayley tree.
    HaagerupTree,
    /// Values on the free generators; extended by the cocycle identity.
    GeneratorValues {
        #[serde(deserialize_with = "de_vectors")]
        values: Vec<SparseVector<BasisKey>>,
    },
    /// `g ↦ π(g)v − v`.
    Coboundary {
        #[serde(deserialize_with = "de_vector")]
        vector: SparseVector<BasisKey>,
    },
    /// Additive map `ℤᵈ → ℝⁿ` into the trivial representation.
    Homomorphism {
        #[serde(deserialize_with = "de_vectors")]
        values: Vec<SparseVector<BasisKey>>,
    },
}

/// Vectors may be given densely (`[1.0, 0.0]`) or as key/value pairs.
#[derive(Deserialize)]
#[serde(untagged)]
enum VectorInput {
    Dense(Vec<f64>),
    Sparse(SparseVector<BasisKey>),
}

impl From<VectorInput> for SparseVector<BasisKey> {
    fn from(v: VectorInput) -> Self {
        match v {
            VectorInput::Dense(xs) => from_dense(&DVector::from_vec(xs)),
            VectorInput::Sparse(s) => s,
        }
    }
}

fn de_vector<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<SparseVector<BasisKey>, D::Error> {
    VectorInput::deserialize(d).map(Into::into)
}

fn de_vectors<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<SparseVector<BasisKey>>, D::Error> {
    Vec::<VectorInput>::deserialize(d).map(|vs| vs.into_iter().map(Into::into).collect())
}

/// A representation together with a cocycle into it.
///
/// JSON form: `{"rep": <RepSpec>, "cocycle": {"kind": …}}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "CocycleJson", into = "CocycleJson")]
pub struct CocycleSpec {
    rep: RepSpec,
    kind: CocycleKind,
    /// `b(s)` for every generator slot `s₁, s₁⁻¹, s₂, …`.
    slot_values: Vec<SparseVector<BasisKey>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CocycleJson {
    pub rep: RepSpec,
    pub cocycle: CocycleKind,
}

impl TryFrom<CocycleJson> for CocycleSpec {
    type Error = Error;
    fn try_from(j: CocycleJson) -> Result<Self> {
        CocycleSpec::new(j.rep, j.cocycle)
    }
}

impl From<CocycleSpec> for CocycleJson {
    fn from(c: CocycleSpec) -> Self {
        CocycleJson { rep: c.rep, cocycle: c.kind }
    }
}

impl CocycleSpec {
    pub fn new(rep: RepSpec, kind: CocycleKind) -> Result<Self> {
        match &kind {
            CocycleKind::HaagerupTree => {
                if !rep.is_tree() {
                    return Err(Error::invalid(
                        "the Haagerup cocycle lives on the tree permutation representation",
                    ));
                }
            }
            CocycleKind::GeneratorValues { values } => {
                let GroupDescriptor::Free { rank } = *rep.group() else {
                    return Err(Error::UnsupportedGroup {
                        required: "a free group for generator-defined cocycles",
                        found: rep.group().to_string(),
                    });
                };
                if values.len() != rank {
                    return Err(Error::invalid(format!(
                        "need {rank} generator values, got {}",
                        values.len()
                    )));
                }
                values.iter().try_for_each(|v| rep.check_vector(v))?;
            }
            CocycleKind::Coboundary { vector } => rep.check_vector(vector)?,
            CocycleKind::Homomorphism { values } => {
                let GroupDescriptor::FreeAbelian { dim } = *rep.group() else {
                    return Err(Error::UnsupportedGroup {
                        required: "a free abelian group for homomorphism cocycles",
                        found: rep.group().to_string(),
                    });
                };
                let n = rep.dim().unwrap_or(0);
                let trivial = (0..dim).all(|i| {
                    rep.slot_matrix(2 * i).is_some_and(|m| (m - DMatrix::identity(n, n)).amax() == 0.0)
                });
                if !trivial {
                    return Err(Error::invalid("homomorphism cocycles need the trivial representation"));
                }
                if values.len() != dim {
                    return Err(Error::invalid(format!("need {dim} generator values, got {}", values.len())));
                }
                values.iter().try_for_each(|v| rep.check_vector(v))?;
            }
        }
        let mut c = CocycleSpec { rep, kind, slot_values: Vec::new() };
        c.slot_values = c.rep.group().generators().iter().map(|s| c.evaluate(s)).collect::<Result<_>>()?;
        Ok(c)
    }

    pub fn haagerup(rank: usize) -> Result<Self> {
        CocycleSpec::new(RepSpec::tree(rank)?, CocycleKind::HaagerupTree)
    }

    pub fn generator_values(rep: RepSpec, values: Vec<SparseVector<BasisKey>>) -> Result<Self> {
        CocycleSpec::new(rep, CocycleKind::GeneratorValues { values })
    }

    pub fn coboundary(rep: RepSpec, vector: SparseVector<BasisKey>) -> Result<Self> {
        CocycleSpec::new(rep, CocycleKind::Coboundary { vector })
    }

    /// The identity map `ℤᵈ → ℝᵈ`, `b(g) = g`.
    pub fn identity_homomorphism(dim: usize) -> Result<Self> {
        let group = GroupDescriptor::free_abelian(dim)?;
        let rep = RepSpec::trivial(group, dim)?;
        let values = (0..dim).map(|i| SparseVector::unit(BasisKey::Coord(i), 1.0)).collect();
        CocycleSpec::new(rep, CocycleKind::Homomorphism { values })
    }

    pub fn rep(&self) -> &RepSpec {
        &self.rep
    }

    pub fn kind(&self) -> &CocycleKind {
        &self.kind
    }

    pub fn group(&self) -> &GroupDescriptor {
        self.rep.group()
    }

    /// `b(s)` for the generator in `slot`.
    pub fn slot_value(&self, slot: usize) -> &SparseVector<BasisKey> {
        &self.slot_values[slot]
    }

    /// `b(g)`.
    pub fn evaluate(&self, g: &GroupElement) -> Result<SparseVector<BasisKey>> {
        if !self.group().contains(g) {
            return Err(Error::MismatchedGroups(self.group().to_string(), g.to_string()));
        }
        match &self.kind {
            CocycleKind::HaagerupTree => {
                let w = g.as_free().expect("checked above");
                Ok(haagerup_chain(w).to_real().map_keys(BasisKey::Edge))
            }
            CocycleKind::GeneratorValues { values } => {
                let w = g.as_free().expect("generator values live on free groups");
                self.fold_word(w, values)
            }
            CocycleKind::Coboundary { vector } => Ok(self.rep.apply(g, vector)?.sub(vector)),
            CocycleKind::Homomorphism { values } => {
                let GroupElement::Abelian(coords) = g else { unreachable!("checked above") };
                let mut out = SparseVector::zero();
                for (c, v) in coords.iter().zip(values) {
                    out.add_assign(&v.scale(*c as f64));
                }
                Ok(out)
            }
        }
    }

    /// Right fold `b(s₁⋯sₙ) = b(s₁) + π(s₁)·b(s₂⋯sₙ)`.
    fn fold_word(&self, w: &FreeWord, values: &[SparseVector<BasisKey>]) -> Result<SparseVector<BasisKey>> {
        let letter_value = |l: Letter| -> Result<SparseVector<BasisKey>> {
            let v = &values[l.index()];
            if l.is_inverse() {
                // b(s⁻¹) = −π(s⁻¹)b(s)
                Ok(self.rep.apply_letter(l, v)?.scale(-1.0))
            } else {
                Ok(v.clone())
            }
        };
        match self.rep.dim() {
            Some(n) => {
                let mut acc = DVector::zeros(n);
                for &l in w.letters().iter().rev() {
                    let m = self.rep.slot_matrix(l.slot()).expect("slot exists");
                    acc = m * acc + to_dense(&letter_value(l)?, n)?;
                }
                Ok(from_dense(&acc))
            }
            None => {
                let mut acc = SparseVector::zero();
                for &l in w.letters().iter().rev() {
                    acc = letter_value(l)?.add(&self.rep.apply_letter(l, &acc)?);
                }
                Ok(acc)
            }
        }
    }

    /// The length function `L(g) = ‖b(g)‖` (Hilbert norm).
    pub fn length_function(&self, g: &GroupElement) -> Result<f64> {
        if let (CocycleKind::HaagerupTree, GroupElement::Free(w)) = (&self.kind, g) {
            // the geodesic edges of a reduced word are distinct, each with
            // coefficient +1
            return Ok((w.len() as f64).sqrt());
        }
        Ok(self.evaluate(g)?.norm())
    }

    /// `max_{s∈S} ‖b(s)‖`.
    pub fn max_generator_norm(&self) -> f64 {
        self.slot_values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Incremental evaluator along a path `e, s₁, s₁s₂, …`.
    pub fn walk_state(&self) -> CocycleState<'_> {
        let inner = match (&self.kind, self.rep.dim()) {
            (CocycleKind::HaagerupTree, _) => StateInner::Tree,
            (_, Some(n)) => StateInner::Dense {
                pi: DMatrix::identity(n, n),
                value: DVector::zeros(n),
                slot_values: self.slot_values.iter().map(|v| to_dense(v, n).expect("validated")).collect(),
            },
            (_, None) => StateInner::Sparse { value: SparseVector::zero() },
        };
        CocycleState { cocycle: self, position: self.group().identity(), inner }
    }
}

/// Edges of the geodesic from `e` to `w`, each with coefficient `+1`.
pub fn haagerup_chain(w: &FreeWord) -> SparseVector<EdgeKey, i64> {
    let mut chain = SparseVector::zero();
    let mut vertex = FreeWord::identity();
    for &l in w.letters() {
        let (key, sign) = EdgeKey::between(&vertex, l);
        chain.add_at(key, sign);
        vertex.push(l);
    }
    chain
}

enum StateInner {
    Tree,
    Dense { pi: DMatrix<f64>, value: DVector<f64>, slot_values: Vec<DVector<f64>> },
    Sparse { value: SparseVector<BasisKey> },
}

/// Tracks `g` and `b(g)` while right-multiplying by generators, using
/// `b(gs) = b(g) + π(g)b(s)`.
pub struct CocycleState<'a> {
    cocycle: &'a CocycleSpec,
    position: GroupElement,
    inner: StateInner,
}

impl CocycleState<'_> {
    pub fn step(&mut self, slot: usize) -> Result<()> {
        match &mut self.inner {
            // π(g)b(s) is the single edge joining g and gs; it either extends
            // the geodesic chain or cancels its last edge, so b stays the
            // geodesic indicator of the current word.
            StateInner::Tree => {}
            StateInner::Dense { pi, value, slot_values } => {
                *value += &*pi * &slot_values[slot];
                *pi *= self.cocycle.rep.slot_matrix(slot).expect("slot exists");
            }
            StateInner::Sparse { value } => {
                let inc = self.cocycle.rep.apply(&self.position, self.cocycle.slot_value(slot))?;
                value.add_assign(&inc);
            }
        }
        self.position.step(slot);
        Ok(())
    }

    pub fn position(&self) -> &GroupElement {
        &self.position
    }

    pub fn norm(&self) -> f64 {
        match &self.inner {
            StateInner::Tree => (self.position.word_length() as f64).sqrt(),
            StateInner::Dense { value, .. } => value.norm(),
            StateInner::Sparse { value } => value.norm(),
        }
    }

    pub fn value(&self) -> SparseVector<BasisKey> {
        match &self.inner {
            StateInner::Tree => {
                let w = self.position.as_free().expect("tree lives on a free group");
                haagerup_chain(w).to_real().map_keys(BasisKey::Edge)
            }
            StateInner::Dense { value, .. } => from_dense(value),
            StateInner::Sparse { value } => value.clone(),
        }
    }
}

/// `max ‖b(gh) − b(g) − π(g)b(h)‖` over the given pairs.
pub fn check_cocycle_identity(c: &CocycleSpec, pairs: &[(GroupElement, GroupElement)]) -> Result<f64> {
    if pairs.is_empty() {
        return Err(Error::InsufficientSamples { needed: 1, found: 0 });
    }
    let mut worst: f64 = 0.0;
    for (g, h) in pairs {
        let gh = g.mul(h)?;
        let lhs = c.evaluate(&gh)?;
        let rhs = c.evaluate(g)?.add(&c.rep.apply(g, &c.evaluate(h)?)?);
        worst = worst.max(lhs.sub(&rhs).norm());
    }
    Ok(worst)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LipschitzReport {
    /// `max ‖b(g)‖ / |g|` over the non-identity samples.
    pub observed: f64,
    /// `M · max_{s∈S} ‖b(s)‖`.
    pub bound: f64,
    pub checked: usize,
    pub skipped_identity: usize,
}

/// Verifies `‖b(g)‖ ≤ C·|g|` with `C = M · max_s ‖b(s)‖` on every sample.
pub fn lipschitz_check(c: &CocycleSpec, samples: &[GroupElement]) -> Result<LipschitzReport> {
    if samples.is_empty() {
        return Err(Error::InsufficientSamples { needed: 1, found: 0 });
    }
    let bound = c.rep.uniform_bound() * c.max_generator_norm();
    let mut observed: f64 = 0.0;
    let mut skipped = 0;
    for g in samples {
        let len = g.word_length();
        if len == 0 {
            skipped += 1;
            continue;
        }
        let ratio = c.length_function(g)? / len as f64;
        if ratio > bound * (1.0 + 1e-9) + 1e-12 {
            return Err(Error::LipschitzViolation { witness: g.to_string(), ratio, bound });
        }
        observed = observed.max(ratio);
    }
    Ok(LipschitzReport { observed, bound, checked: samples.len() - skipped, skipped_identity: skipped })
}
