//! Finitely generated groups with their standard symmetric generating sets,
//! word metrics, and simple random walks.

mod free;
mod lamplighter;
mod walk;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use free::{FreeWord, Letter};
pub use lamplighter::LampState;
pub use walk::{
    distance_profile, estimate_escape_rate, exact_distance_distribution, exact_distance_moments,
    mean_distance_curve, sample_distance_profiles, sample_walk, DistanceProfile, EscapeEstimate,
    WalkTrajectory, Walker,
};

/// A group together with its implied symmetric generating set.
///
/// * `Free { rank }`: letters `a, b, …` and their inverses.
/// * `FreeAbelian { dim }`: the unit vectors `±eᵢ`.
/// * `Lamplighter`: `t`, `t⁻¹` and the lamp toggle `a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupDescriptor {
    Free { rank: usize },
    FreeAbelian { dim: usize },
    Lamplighter,
}

impl GroupDescriptor {
    pub fn free(rank: usize) -> Result<Self> {
        if rank == 0 {
            return Err(Error::invalid("free group rank must be >= 1"));
        }
        Ok(GroupDescriptor::Free { rank })
    }

    pub fn free_abelian(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("free abelian dimension must be >= 1"));
        }
        Ok(GroupDescriptor::FreeAbelian { dim })
    }

    pub fn generator_count(&self) -> usize {
        match *self {
            GroupDescriptor::Free { rank } => 2 * rank,
            GroupDescriptor::FreeAbelian { dim } => 2 * dim,
            GroupDescriptor::Lamplighter => 3,
        }
    }

    pub fn identity(&self) -> GroupElement {
        match *self {
            GroupDescriptor::Free { .. } => GroupElement::Free(FreeWord::identity()),
            GroupDescriptor::FreeAbelian { dim } => GroupElement::Abelian(vec![0; dim]),
            GroupDescriptor::Lamplighter => GroupElement::Lamplighter(LampState::identity()),
        }
    }

    /// The generating set in slot order.
    pub fn generators(&self) -> Vec<GroupElement> {
        (0..self.generator_count())
            .map(|slot| {
                let mut g = self.identity();
                g.step(slot);
                g
            })
            .collect()
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        match (self, g) {
            (GroupDescriptor::Free { rank }, GroupElement::Free(w)) => w.rank_used() <= *rank,
            (GroupDescriptor::FreeAbelian { dim }, GroupElement::Abelian(v)) => v.len() == *dim,
            (GroupDescriptor::Lamplighter, GroupElement::Lamplighter(_)) => true,
            _ => false,
        }
    }

    fn check(&self, g: &GroupElement) -> Result<()> {
        if self.contains(g) {
            Ok(())
        } else {
            Err(Error::MismatchedGroups(self.to_string(), g.kind_name()))
        }
    }

    pub fn multiply(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
        self.check(g)?;
        self.check(h)?;
        g.mul(h)
    }

    pub fn is_free(&self) -> bool {
        matches!(self, GroupDescriptor::Free { .. })
    }

    pub fn is_amenable(&self) -> bool {
        match *self {
            GroupDescriptor::Free { rank } => rank == 1,
            _ => true,
        }
    }
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupDescriptor::Free { rank } => write!(f, "free:{rank}"),
            GroupDescriptor::FreeAbelian { dim } => write!(f, "abelian:{dim}"),
            GroupDescriptor::Lamplighter => write!(f, "lamplighter"),
        }
    }
}

impl FromStr for GroupDescriptor {
    type Err = Error;

    /// Accepts `free:<k>`, `abelian:<d>` (or `z:<d>`) and `lamplighter`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "lamplighter" {
            return Ok(GroupDescriptor::Lamplighter);
        }
        let (kind, arg) = s.split_once(':').ok_or_else(|| Error::invalid(format!("bad group {s:?}")))?;
        let n: usize = arg.parse().map_err(|_| Error::invalid(format!("bad group parameter in {s:?}")))?;
        match kind {
            "free" => GroupDescriptor::free(n),
            "abelian" | "z" => GroupDescriptor::free_abelian(n),
            _ => Err(Error::invalid(format!("unknown group kind {kind:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupElement {
    Free(FreeWord),
    Abelian(Vec<i64>),
    Lamplighter(LampState),
}

impl GroupElement {
    fn kind_name(&self) -> String {
        match self {
            GroupElement::Free(_) => "free word".into(),
            GroupElement::Abelian(v) => format!("vector of length {}", v.len()),
            GroupElement::Lamplighter(_) => "lamplighter element".into(),
        }
    }

    pub fn mul(&self, other: &GroupElement) -> Result<GroupElement> {
        match (self, other) {
            (GroupElement::Free(a), GroupElement::Free(b)) => Ok(GroupElement::Free(a.mul(b))),
            (GroupElement::Abelian(a), GroupElement::Abelian(b)) if a.len() == b.len() => {
                Ok(GroupElement::Abelian(a.iter().zip(b).map(|(x, y)| x + y).collect()))
            }
            (GroupElement::Lamplighter(a), GroupElement::Lamplighter(b)) => {
                Ok(GroupElement::Lamplighter(a.mul(b)))
            }
            _ => Err(Error::MismatchedGroups(self.kind_name(), other.kind_name())),
        }
    }

    pub fn inverse(&self) -> GroupElement {
        match self {
            GroupElement::Free(w) => GroupElement::Free(w.inverse()),
            GroupElement::Abelian(v) => GroupElement::Abelian(v.iter().map(|x| -x).collect()),
            GroupElement::Lamplighter(s) => GroupElement::Lamplighter(s.inverse()),
        }
    }

    /// `|g|_S` for the standard generating set of the element's group.
    pub fn word_length(&self) -> u64 {
        match self {
            GroupElement::Free(w) => w.len() as u64,
            GroupElement::Abelian(v) => v.iter().map(|x| x.unsigned_abs()).sum(),
            GroupElement::Lamplighter(s) => s.word_length(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.word_length() == 0
    }

    /// Right-multiplies in place by the generator in `slot`
    /// (see [`GroupDescriptor::generators`] for the slot order).
    pub fn step(&mut self, slot: usize) {
        match self {
            GroupElement::Free(w) => w.push(Letter::from_slot(slot)),
            GroupElement::Abelian(v) => {
                v[slot / 2] += if slot.is_multiple_of(2) { 1 } else { -1 };
            }
            GroupElement::Lamplighter(s) => match slot {
                0 => s.move_by(1),
                1 => s.move_by(-1),
                _ => s.toggle_here(),
            },
        }
    }

    pub fn as_free(&self) -> Option<&FreeWord> {
        match self {
            GroupElement::Free(w) => Some(w),
            _ => None,
        }
    }
}

impl From<FreeWord> for GroupElement {
    fn from(w: FreeWord) -> Self {
        GroupElement::Free(w)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElement::Free(w) => write!(f, "{w}"),
            GroupElement::Abelian(v) => write!(f, "{v:?}"),
            GroupElement::Lamplighter(s) => write!(f, "{s}"),
        }
    }
}
