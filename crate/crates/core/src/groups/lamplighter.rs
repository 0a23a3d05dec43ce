//! The lamplighter group ℤ₂ ≀ ℤ with generators `t` (move right) and `a`
//! (toggle the lamp under the cursor).

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LampState {
    pub position: i64,
    pub lamps: BTreeSet<i64>,
}

impl LampState {
    pub fn identity() -> Self {
        LampState::default()
    }

    pub fn translation(steps: i64) -> Self {
        LampState { position: steps, lamps: BTreeSet::new() }
    }

    pub fn toggle() -> Self {
        LampState { position: 0, lamps: BTreeSet::from([0]) }
    }

    /// `(f, p)·(g, q) = (f Δ (g + p), p + q)`.
    pub fn mul(&self, other: &LampState) -> LampState {
        let mut lamps = self.lamps.clone();
        for &l in &other.lamps {
            toggle(&mut lamps, l + self.position);
        }
        LampState { position: self.position + other.position, lamps }
    }

    pub fn inverse(&self) -> LampState {
        LampState { position: -self.position, lamps: self.lamps.iter().map(|l| l - self.position).collect() }
    }

    pub fn move_by(&mut self, step: i64) {
        self.position += step;
    }

    pub fn toggle_here(&mut self) {
        let p = self.position;
        toggle(&mut self.lamps, p);
    }

    /// Word length for `S = {t, t⁻¹, a}`: every lit lamp costs one toggle,
    /// and the cursor must sweep from 0 over `[lo, hi]` and end at the final
    /// position, either going left first or right first.
    pub fn word_length(&self) -> u64 {
        let p = self.position;
        let lo = self.lamps.first().copied().unwrap_or(0).min(0).min(p);
        let hi = self.lamps.last().copied().unwrap_or(0).max(0).max(p);
        let left_first = -lo + (hi - lo) + (hi - p);
        let right_first = hi + (hi - lo) + (p - lo);
        self.lamps.len() as u64 + left_first.min(right_first) as u64
    }
}

fn toggle(lamps: &mut BTreeSet<i64>, l: i64) {
    if !lamps.remove(&l) {
        lamps.insert(l);
    }
}

impl fmt::Display for LampState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(pos={}, lamps={{", self.position)?;
        for (i, l) in self.lamps.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, "}})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toggle_is_an_involution() {
        let a = LampState::toggle();
        assert_eq!(a.mul(&a), LampState::identity());
    }

    #[test]
    fn conjugated_toggle_lights_a_shifted_lamp() {
        let t = LampState::translation(1);
        let g = t.mul(&LampState::toggle()).mul(&t.inverse());
        assert_eq!(g.lamps, BTreeSet::from([1]));
        assert_eq!(g.position, 0);
        assert_eq!(g.word_length(), 3);
    }

    #[test]
    fn sweep_length_examples() {
        // lamps at -2 and 3, end at 1: go left (2), right to 3 (5), back to 1 (2), plus 2 toggles
        let g = LampState { position: 1, lamps: BTreeSet::from([-2, 3]) };
        assert_eq!(g.word_length(), 2 + 2 + 5 + 2);
        assert_eq!(LampState::translation(-4).word_length(), 4);
    }
}
