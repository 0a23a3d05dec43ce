//! Finitely supported coefficient vectors over an abstract basis.

use std::collections::BTreeMap;
use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::groups::{FreeWord, Letter};

/// Scalar type of a [`SparseVector`]. Tree cocycles use `i64` so that
/// cancellation of backtracked edges is exact.
pub trait Coefficient:
    Copy + PartialEq + Debug + Add<Output = Self> + Sub<Output = Self> + Neg<Output = Self> + Mul<Output = Self>
{
    const ZERO: Self;
    fn to_f64(self) -> f64;
}

impl Coefficient for f64 {
    const ZERO: Self = 0.0;
    fn to_f64(self) -> f64 {
        self
    }
}

impl Coefficient for i64 {
    const ZERO: Self = 0;
    fn to_f64(self) -> f64 {
        self as f64
    }
}

/// Oriented edge `(u, u·s)` of the Cayley tree of a free group, stored with
/// the shorter endpoint first (so `u·s` is reduced and longer than `u`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeKey {
    pub endpoint: FreeWord,
    pub letter: Letter,
}

impl EdgeKey {
    /// The edge joining `u` and `u·s`, in canonical form, with `+1` if the
    /// step `u → u·s` points away from `e` and `-1` otherwise.
    pub fn between(u: &FreeWord, s: Letter) -> (EdgeKey, i64) {
        if u.last() == Some(s.inverse()) {
            let mut shorter = u.clone();
            shorter.push(s);
            (EdgeKey { endpoint: shorter, letter: s.inverse() }, -1)
        } else {
            (EdgeKey { endpoint: u.clone(), letter: s }, 1)
        }
    }

    pub fn is_canonical(&self) -> bool {
        self.endpoint.last() != Some(self.letter.inverse())
    }

    /// Image under left translation by `g`, with the orientation sign.
    pub fn translate(&self, g: &FreeWord) -> (EdgeKey, i64) {
        EdgeKey::between(&g.mul(&self.endpoint), self.letter)
    }
}

/// Basis of the value spaces: tree edges for the permutation
/// representation, coordinates for matrix representations.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BasisKey {
    Coord(usize),
    Edge(EdgeKey),
}

/// Finitely supported map from basis keys to coefficients. Zero
/// coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(
    bound(
        serialize = "K: Serialize + Clone, T: Serialize + Clone",
        deserialize = "K: Deserialize<'de> + Ord, T: Deserialize<'de> + Coefficient"
    ),
    from = "Vec<(K, T)>",
    into = "Vec<(K, T)>"
)]
pub struct SparseVector<K: Ord, T: Coefficient = f64> {
    entries: BTreeMap<K, T>,
}

impl<K: Ord, T: Coefficient> Default for SparseVector<K, T> {
    fn default() -> Self {
        SparseVector { entries: BTreeMap::new() }
    }
}

impl<K: Ord, T: Coefficient> From<Vec<(K, T)>> for SparseVector<K, T> {
    fn from(pairs: Vec<(K, T)>) -> Self {
        pairs.into_iter().collect()
    }
}

impl<K: Ord + Clone, T: Coefficient> From<SparseVector<K, T>> for Vec<(K, T)> {
    fn from(v: SparseVector<K, T>) -> Self {
        v.entries.into_iter().collect()
    }
}

impl<K: Ord, T: Coefficient> FromIterator<(K, T)> for SparseVector<K, T> {
    fn from_iter<I: IntoIterator<Item = (K, T)>>(iter: I) -> Self {
        let mut v = SparseVector::zero();
        for (k, c) in iter {
            v.add_at(k, c);
        }
        v
    }
}

impl<K: Ord, T: Coefficient> SparseVector<K, T> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn unit(key: K, coeff: T) -> Self {
        let mut v = Self::zero();
        v.add_at(key, coeff);
        v
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, key: &K) -> T {
        self.entries.get(key).copied().unwrap_or(T::ZERO)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &T)> {
        self.entries.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.entries.keys()
    }

    pub fn add_at(&mut self, key: K, coeff: T) {
        if coeff == T::ZERO {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.entries.entry(key) {
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
            Entry::Occupied(mut e) => {
                let sum = *e.get() + coeff;
                if sum == T::ZERO {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, c: T) -> Self
    where
        K: Clone,
    {
        self.entries.iter().map(|(k, &v)| (k.clone(), v * c)).collect()
    }

    pub fn add(&self, other: &Self) -> Self
    where
        K: Clone,
    {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn sub(&self, other: &Self) -> Self
    where
        K: Clone,
    {
        let mut out = self.clone();
        for (k, &c) in &other.entries {
            out.add_at(k.clone(), -c);
        }
        out
    }

    pub fn add_assign(&mut self, other: &Self)
    where
        K: Clone,
    {
        for (k, &c) in &other.entries {
            self.add_at(k.clone(), c);
        }
    }

    pub fn norm_squared(&self) -> f64 {
        self.entries.values().map(|c| c.to_f64().powi(2)).sum()
    }

    /// Hilbert (ℓ²) norm.
    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    /// ℓᵖ norm; `p = ∞` gives the max norm.
    pub fn lp_norm(&self, p: f64) -> f64 {
        if p.is_infinite() {
            return self.entries.values().map(|c| c.to_f64().abs()).fold(0.0, f64::max);
        }
        self.entries.values().map(|c| c.to_f64().abs().powf(p)).sum::<f64>().powf(1.0 / p)
    }

    pub fn to_real(&self) -> SparseVector<K, f64>
    where
        K: Clone,
    {
        self.entries.iter().map(|(k, c)| (k.clone(), c.to_f64())).collect()
    }

    pub fn map_keys<K2: Ord>(self, f: impl Fn(K) -> K2) -> SparseVector<K2, T> {
        self.entries.into_iter().map(|(k, c)| (f(k), c)).collect()
    }
}
