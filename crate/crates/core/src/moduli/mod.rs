//! Moduli of convexity and smoothness of finite-dimensional normed spaces,
//! power-type constants, the duality between the two moduli, and invariant
//! renormings under bounded group actions.

mod duality;
mod modulus;
mod renorm;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub use duality::{fit_power_constants, lindenstrauss_dual, DualityPoint, DualityReport, PowerFit};
pub use modulus::{
    modulus_convexity, modulus_smoothness, ModulusCurve, ModulusKind, ModulusPoint, SearchConfig,
};
pub use renorm::{invariant_renorm, Equivalence, InvariantNorm, CLOSURE_CAP};

pub const MAX_NORM_DIM: usize = 16;

/// A norm on ℝⁿ.
pub trait Norm: Sync {
    fn dim(&self) -> usize;
    fn norm(&self, x: &[f64]) -> f64;
}

/// The ℓᵖ norm on ℝⁿ, `1 ≤ p ≤ ∞`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormSpec {
    #[serde(serialize_with = "ser_exponent", deserialize_with = "de_exponent")]
    pub p: f64,
    pub dim: usize,
}

impl NormSpec {
    pub fn new(p: f64, dim: usize) -> Result<Self> {
        if !(p >= 1.0) {
            return Err(Error::invalid(format!("norm exponent must be >= 1, got {p}")));
        }
        if !(2..=MAX_NORM_DIM).contains(&dim) {
            return Err(Error::invalid(format!("dimension must lie in 2..={MAX_NORM_DIM}, got {dim}")));
        }
        Ok(NormSpec { p, dim })
    }

    /// Conjugate exponent `q` with `1/p + 1/q = 1`.
    pub fn dual_exponent(p: f64) -> f64 {
        if p == 1.0 {
            f64::INFINITY
        } else if p.is_infinite() {
            1.0
        } else {
            p / (p - 1.0)
        }
    }

    pub fn dual(&self) -> NormSpec {
        NormSpec { p: NormSpec::dual_exponent(self.p), dim: self.dim }
    }
}

impl Norm for NormSpec {
    fn dim(&self) -> usize {
        self.dim
    }

    fn norm(&self, x: &[f64]) -> f64 {
        lp_norm(x, self.p)
    }
}

pub fn lp_norm(x: &[f64], p: f64) -> f64 {
    if p == 1.0 {
        x.iter().map(|v| v.abs()).sum()
    } else if p == 2.0 {
        x.iter().map(|v| v * v).sum::<f64>().sqrt()
    } else if p.is_infinite() {
        x.iter().fold(0.0, |m, v| m.max(v.abs()))
    } else {
        // scale by the max entry to avoid under/overflow in |x|^p
        let m = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if m == 0.0 {
            return 0.0;
        }
        m * x.iter().map(|v| (v.abs() / m).powf(p)).sum::<f64>().powf(1.0 / p)
    }
}

/// Exponents may be written as numbers or `"inf"` in JSON.
fn ser_exponent<S: Serializer>(p: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if p.is_infinite() {
        s.serialize_str("inf")
    } else {
        s.serialize_f64(*p)
    }
}

fn de_exponent<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Exp {
        Num(f64),
        Text(String),
    }
    match Exp::deserialize(d)? {
        Exp::Num(x) => Ok(x),
        Exp::Text(s) if s == "inf" || s == "infinity" => Ok(f64::INFINITY),
        Exp::Text(s) => Err(serde::de::Error::custom(format!("bad exponent {s:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conjugate_exponents() {
        assert_eq!(NormSpec::dual_exponent(2.0), 2.0);
        assert_eq!(NormSpec::dual_exponent(1.5), 3.0);
        assert_eq!(NormSpec::dual_exponent(3.0), 1.5);
        assert_eq!(NormSpec::dual_exponent(1.0), f64::INFINITY);
        assert_eq!(NormSpec::dual_exponent(f64::INFINITY), 1.0);
    }

    #[test]
    fn lp_norms() {
        let x = [3.0, -4.0];
        assert_eq!(lp_norm(&x, 1.0), 7.0);
        assert_eq!(lp_norm(&x, 2.0), 5.0);
        assert_eq!(lp_norm(&x, f64::INFINITY), 4.0);
        assert!((lp_norm(&x, 3.0) - 91f64.powf(1.0 / 3.0)).abs() < 1e-12);
        assert_eq!(lp_norm(&[1e-200, 0.0], 3.0), 1e-200);
    }

    #[test]
    fn spec_validation_and_json() {
        assert!(NormSpec::new(0.5, 2).is_err());
        assert!(NormSpec::new(2.0, 1).is_err());
        assert!(NormSpec::new(2.0, 17).is_err());
        let s = NormSpec::new(1.0, 2).unwrap().dual();
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(j, r#"{"p":"inf","dim":2}"#);
        assert_eq!(serde_json::from_str::<NormSpec>(&j).unwrap(), s);
    }
}
