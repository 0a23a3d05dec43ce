//! Uniformly bounded representations of the implemented groups.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::sparse::{BasisKey, SparseVector};
use crate::error::{Error, Result};
use crate::groups::{FreeWord, GroupDescriptor, GroupElement, Letter};
use crate::linalg;

/// Matrix representations are desk-scale.
pub const MAX_DIM: usize = 64;

const ORTHO_TOL: f64 = 1e-9;
const CLOSURE_CAP: usize = 10_000;

#[derive(Clone, Debug)]
pub enum RepKind {
    /// Left translation of the oriented edges of the Cayley tree of a free
    /// group (a signed permutation; isometric).
    TreePermutation,
    /// Arbitrary invertible generator images.
    Matrix,
    /// `π(s) = D·U(s)·D⁻¹` with `D` positive diagonal and `U(s)` orthogonal;
    /// bounded by `cond(D)`.
    DiagConjugated { diag: DVector<f64>, unitary: Vec<DMatrix<f64>> },
}

/// A representation π of a group together with a uniform bound
/// `M ≥ sup_g ‖π(g)‖`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "RepJson", into = "RepJson")]
pub struct RepSpec {
    group: GroupDescriptor,
    kind: RepKind,
    uniform_bound: f64,
    /// Generator images in slot order `s₁, s₁⁻¹, s₂, s₂⁻¹, …` (empty for the
    /// tree representation).
    slots: Vec<DMatrix<f64>>,
}

impl RepSpec {
    pub fn tree(rank: usize) -> Result<Self> {
        Ok(RepSpec {
            group: GroupDescriptor::free(rank)?,
            kind: RepKind::TreePermutation,
            uniform_bound: 1.0,
            slots: Vec::new(),
        })
    }

    /// Matrix representation from generator images. Without an explicit
    /// bound, orthogonal images get `M = 1` and images generating a finite
    /// group get the exact `max ‖π(g)‖` over the enumerated group.
    pub fn matrix(
        group: GroupDescriptor,
        images: Vec<DMatrix<f64>>,
        uniform_bound: Option<f64>,
    ) -> Result<Self> {
        let slots = build_slots(&group, &images)?;
        let generator_max = slots.iter().map(linalg::spectral_norm).fold(0.0, f64::max);
        let uniform_bound = match uniform_bound {
            Some(m) => {
                if !(m >= 1.0 && m.is_finite()) {
                    return Err(Error::invalid("uniform bound must be finite and >= 1"));
                }
                if m + 1e-9 < generator_max {
                    return Err(Error::invalid(format!(
                        "uniform bound {m} is below a generator norm {generator_max}"
                    )));
                }
                m
            }
            None if images.iter().all(|m| linalg::is_orthogonal(m, ORTHO_TOL)) => 1.0,
            None => match linalg::finite_closure(&images, CLOSURE_CAP) {
                Some(elems) => elems.iter().map(linalg::spectral_norm).fold(1.0, f64::max),
                None => {
                    return Err(Error::invalid(
                        "uniform_bound is required for non-orthogonal images generating an \
                         infinite (or very large) group",
                    ))
                }
            },
        };
        Ok(RepSpec { group, kind: RepKind::Matrix, uniform_bound, slots })
    }

    /// The trivial representation on ℝ^dim.
    pub fn trivial(group: GroupDescriptor, dim: usize) -> Result<Self> {
        let count = match group {
            GroupDescriptor::Free { rank } => rank,
            GroupDescriptor::FreeAbelian { dim } => dim,
            GroupDescriptor::Lamplighter => {
                return Err(Error::UnsupportedGroup {
                    required: "a free or free abelian group",
                    found: group.to_string(),
                })
            }
        };
        RepSpec::matrix(group, vec![DMatrix::identity(dim, dim); count], Some(1.0))
    }

    pub fn diag_conjugated(
        group: GroupDescriptor,
        diag: Vec<f64>,
        unitary: Vec<DMatrix<f64>>,
    ) -> Result<Self> {
        if diag.iter().any(|&d| !(d > 0.0 && d.is_finite())) {
            return Err(Error::invalid("diagonal entries must be positive"));
        }
        let n = diag.len();
        for u in &unitary {
            if u.nrows() != n {
                return Err(Error::DimensionMismatch { expected: n, found: u.nrows() });
            }
            if !linalg::is_orthogonal(u, ORTHO_TOL) {
                return Err(Error::invalid("diag_conjugated requires orthogonal U images"));
            }
        }
        let d = DVector::from_vec(diag);
        let dm = DMatrix::from_diagonal(&d);
        let dinv = DMatrix::from_diagonal(&d.map(|x| 1.0 / x));
        let images: Vec<DMatrix<f64>> = unitary.iter().map(|u| &dm * u * &dinv).collect();
        let slots = build_slots(&group, &images)?;
        let uniform_bound = d.max() / d.min();
        Ok(RepSpec { group, kind: RepKind::DiagConjugated { diag: d, unitary }, uniform_bound, slots })
    }

    pub fn group(&self) -> &GroupDescriptor {
        &self.group
    }

    pub fn kind(&self) -> &RepKind {
        &self.kind
    }

    pub fn uniform_bound(&self) -> f64 {
        self.uniform_bound
    }

    pub fn is_tree(&self) -> bool {
        matches!(self.kind, RepKind::TreePermutation)
    }

    /// Dimension of a matrix-type representation; `None` for the tree.
    pub fn dim(&self) -> Option<usize> {
        self.slots.first().map(|m| m.nrows())
    }

    fn require_dim(&self) -> Result<usize> {
        self.dim().ok_or(Error::UnsupportedGroup {
            required: "a matrix representation",
            found: "tree permutation representation".into(),
        })
    }

    /// Image of the generator in `slot` (see [`GroupDescriptor::generators`]).
    pub fn slot_matrix(&self, slot: usize) -> Option<&DMatrix<f64>> {
        self.slots.get(slot)
    }

    /// Images of the generators `s₁, s₂, …` (without inverses).
    pub fn generator_images(&self) -> Vec<DMatrix<f64>> {
        self.slots.iter().step_by(2).cloned().collect()
    }

    pub fn is_orthogonal(&self) -> bool {
        self.is_tree() || self.slots.iter().all(|m| linalg::is_orthogonal(m, ORTHO_TOL))
    }

    /// The matrix `π(g)`.
    pub fn matrix_of(&self, g: &GroupElement) -> Result<DMatrix<f64>> {
        let n = self.require_dim()?;
        let mut m = DMatrix::identity(n, n);
        self.check_element(g)?;
        match g {
            GroupElement::Free(w) => {
                for l in w.letters() {
                    m *= &self.slots[l.slot()];
                }
            }
            GroupElement::Abelian(v) => {
                for (i, &c) in v.iter().enumerate() {
                    let slot = 2 * i + usize::from(c < 0);
                    for _ in 0..c.unsigned_abs() {
                        m *= &self.slots[slot];
                    }
                }
            }
            GroupElement::Lamplighter(_) => unreachable!("rejected by check_element"),
        }
        Ok(m)
    }

    fn check_element(&self, g: &GroupElement) -> Result<()> {
        if self.group.contains(g) {
            Ok(())
        } else {
            Err(Error::MismatchedGroups(self.group.to_string(), g.to_string()))
        }
    }

    /// `π(g)v` for a dense vector (matrix representations only).
    pub fn apply_dense(&self, g: &GroupElement, v: &DVector<f64>) -> Result<DVector<f64>> {
        let n = self.require_dim()?;
        if v.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: v.len() });
        }
        self.check_element(g)?;
        let mut out = v.clone();
        match g {
            GroupElement::Free(w) => {
                for l in w.letters().iter().rev() {
                    out = &self.slots[l.slot()] * out;
                }
            }
            _ => out = self.matrix_of(g)? * out,
        }
        Ok(out)
    }

    /// `π(s)v` for a single letter.
    pub fn apply_letter(&self, l: Letter, v: &SparseVector<BasisKey>) -> Result<SparseVector<BasisKey>> {
        self.apply(&GroupElement::Free(FreeWord::letter(l)), v)
    }

    /// `π(g)v`.
    pub fn apply(&self, g: &GroupElement, v: &SparseVector<BasisKey>) -> Result<SparseVector<BasisKey>> {
        self.check_element(g)?;
        match self.kind {
            RepKind::TreePermutation => {
                let w = g.as_free().expect("tree representation lives on a free group");
                let mut out = SparseVector::zero();
                for (key, &c) in v.iter() {
                    let BasisKey::Edge(edge) = key else {
                        return Err(Error::invalid(
                            "tree representation acts on edge keys, found a coordinate",
                        ));
                    };
                    let (image, sign) = edge.translate(w);
                    out.add_at(BasisKey::Edge(image), sign as f64 * c);
                }
                Ok(out)
            }
            _ => {
                let n = self.require_dim()?;
                let dense = to_dense(v, n)?;
                Ok(from_dense(&self.apply_dense(g, &dense)?))
            }
        }
    }

    /// Checks that a vector lies in the representation space.
    pub fn check_vector(&self, v: &SparseVector<BasisKey>) -> Result<()> {
        match self.dim() {
            None => {
                for k in v.keys() {
                    match k {
                        BasisKey::Edge(e) if e.is_canonical() => {
                            if let GroupDescriptor::Free { rank } = self.group {
                                if e.endpoint.rank_used() > rank || e.letter.index() >= rank {
                                    return Err(Error::invalid(format!(
                                        "edge uses a generator outside F_{rank}"
                                    )));
                                }
                            }
                        }
                        BasisKey::Edge(_) => {
                            return Err(Error::invalid("edge key is not in canonical orientation"))
                        }
                        BasisKey::Coord(_) => {
                            return Err(Error::invalid(
                                "tree representation acts on edge keys, found a coordinate",
                            ))
                        }
                    }
                }
                Ok(())
            }
            Some(n) => to_dense(v, n).map(|_| ()),
        }
    }
}

fn build_slots(group: &GroupDescriptor, images: &[DMatrix<f64>]) -> Result<Vec<DMatrix<f64>>> {
    let expected = match *group {
        GroupDescriptor::Free { rank } => rank,
        GroupDescriptor::FreeAbelian { dim } => dim,
        GroupDescriptor::Lamplighter => {
            return Err(Error::UnsupportedGroup {
                required: "a free or free abelian group for matrix representations",
                found: group.to_string(),
            })
        }
    };
    if images.len() != expected {
        return Err(Error::invalid(format!(
            "{group} needs {expected} generator images, got {}",
            images.len()
        )));
    }
    let n = images.first().map_or(0, |m| m.nrows());
    if n == 0 || n > MAX_DIM {
        return Err(Error::invalid(format!("matrix dimension must be in 1..={MAX_DIM}")));
    }
    let mut slots = Vec::with_capacity(2 * images.len());
    for m in images {
        if m.nrows() != n || m.ncols() != n {
            return Err(Error::DimensionMismatch { expected: n, found: m.nrows().max(m.ncols()) });
        }
        let inv = m.clone().try_inverse().ok_or(Error::Singular)?;
        slots.push(m.clone());
        slots.push(inv);
    }
    if let GroupDescriptor::FreeAbelian { .. } = group {
        for (i, a) in images.iter().enumerate() {
            for b in &images[i + 1..] {
                let scale = linalg::spectral_norm(a) * linalg::spectral_norm(b);
                if linalg::max_abs_diff(&(a * b), &(b * a)) > 1e-9 * scale.max(1.0) {
                    return Err(Error::invalid("images of a free abelian group's generators must commute"));
                }
            }
        }
    }
    Ok(slots)
}

pub fn to_dense(v: &SparseVector<BasisKey>, n: usize) -> Result<DVector<f64>> {
    let mut out = DVector::zeros(n);
    for (k, &c) in v.iter() {
        match *k {
            BasisKey::Coord(i) if i < n => out[i] = c,
            BasisKey::Coord(i) => return Err(Error::DimensionMismatch { expected: n, found: i + 1 }),
            BasisKey::Edge(_) => {
                return Err(Error::invalid("matrix representation acts on coordinates, found an edge key"))
            }
        }
    }
    Ok(out)
}

pub fn from_dense(v: &DVector<f64>) -> SparseVector<BasisKey> {
    v.iter().enumerate().map(|(i, &c)| (BasisKey::Coord(i), c)).collect()
}

/// A matrix entry in JSON: a real number or a `[re, im]` pair.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

pub type NestedMatrix = Vec<Vec<Entry>>;

/// JSON form of [`RepSpec`].
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RepJson {
    TreePermutation {
        rank: usize,
    },
    Matrix {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        group: Option<String>,
        generators: Vec<NestedMatrix>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        uniform_bound: Option<f64>,
    },
    DiagConjugated {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        group: Option<String>,
        diag: Vec<f64>,
        unitary: Vec<NestedMatrix>,
    },
}

/// Complex matrices are realified: `x + iy ↦ [[x, -y], [y, x]]`.
fn parse_matrices(ms: &[NestedMatrix]) -> Result<Vec<DMatrix<f64>>> {
    let complex = ms.iter().flatten().flatten().any(|e| matches!(e, Entry::Complex(_)));
    ms.iter()
        .map(|rows| {
            let n = rows.len();
            if rows.iter().any(|r| r.len() != n) {
                return Err(Error::invalid("generator matrices must be square"));
            }
            if !complex {
                return Ok(DMatrix::from_fn(n, n, |i, j| match rows[i][j] {
                    Entry::Real(x) => x,
                    Entry::Complex([x, _]) => x,
                }));
            }
            let mut m = DMatrix::zeros(2 * n, 2 * n);
            for i in 0..n {
                for j in 0..n {
                    let (x, y) = match rows[i][j] {
                        Entry::Real(x) => (x, 0.0),
                        Entry::Complex([x, y]) => (x, y),
                    };
                    m[(2 * i, 2 * j)] = x;
                    m[(2 * i, 2 * j + 1)] = -y;
                    m[(2 * i + 1, 2 * j)] = y;
                    m[(2 * i + 1, 2 * j + 1)] = x;
                }
            }
            Ok(m)
        })
        .collect()
}

fn nested(m: &DMatrix<f64>) -> NestedMatrix {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| Entry::Real(m[(i, j)])).collect()).collect()
}

fn parse_group(group: Option<String>, count: usize) -> Result<GroupDescriptor> {
    match group {
        Some(s) => s.parse(),
        None => GroupDescriptor::free(count),
    }
}

impl TryFrom<RepJson> for RepSpec {
    type Error = Error;
    fn try_from(j: RepJson) -> Result<Self> {
        match j {
            RepJson::TreePermutation { rank } => RepSpec::tree(rank),
            RepJson::Matrix { group, generators, uniform_bound } => {
                let group = parse_group(group, generators.len())?;
                RepSpec::matrix(group, parse_matrices(&generators)?, uniform_bound)
            }
            RepJson::DiagConjugated { group, diag, unitary } => {
                let group = parse_group(group, unitary.len())?;
                RepSpec::diag_conjugated(group, diag, parse_matrices(&unitary)?)
            }
        }
    }
}

impl From<RepSpec> for RepJson {
    fn from(r: RepSpec) -> Self {
        match r.kind {
            RepKind::TreePermutation => RepJson::TreePermutation {
                rank: match r.group {
                    GroupDescriptor::Free { rank } => rank,
                    _ => unreachable!("tree representation lives on a free group"),
                },
            },
            RepKind::Matrix => RepJson::Matrix {
                group: Some(r.group.to_string()),
                generators: r.slots.iter().step_by(2).map(nested).collect(),
                uniform_bound: Some(r.uniform_bound),
            },
            RepKind::DiagConjugated { diag, unitary } => RepJson::DiagConjugated {
                group: Some(r.group.to_string()),
                diag: diag.iter().copied().collect(),
                unitary: unitary.iter().map(nested).collect(),
            },
        }
    }
}
