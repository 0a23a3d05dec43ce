use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{gap_norm, FiniteMeasure};
use crate::error::Result;
use crate::groups::GroupDescriptor;
use crate::repcoc::RepSpec;
use crate::rng::map_indexed;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Gallery {
    pub examples: Vec<GalleryExample>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GalleryExample {
    pub name: String,
    pub rep: RepSpec,
    pub measure: FiniteMeasure,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<Expected>,
}

/// Reference values; absent fields are not checked.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Expected {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub invariant_dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complement_norm: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gap: Option<bool>,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
}

fn default_tolerance() -> f64 {
    1e-6
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapSummary {
    pub invariant_dim: usize,
    pub complement_norm: f64,
    pub kappa: Option<f64>,
    pub gap: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct GalleryOutcome {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<GapSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// Expected values that were not met.
    pub mismatches: Vec<String>,
}

pub fn evaluate_gallery(examples: &[GalleryExample]) -> Vec<GalleryOutcome> {
    map_indexed(examples.len(), |i| {
        let ex = &examples[i];
        match gap_norm(&ex.rep, &ex.measure) {
            Ok(r) => {
                let report = GapSummary {
                    invariant_dim: r.invariant_dim,
                    complement_norm: r.complement_norm,
                    kappa: r.kazhdan.map(|k| k.kappa),
                    gap: r.gap_present,
                };
                let mismatches = ex.expected.as_ref().map(|e| compare(e, &report)).unwrap_or_default();
                GalleryOutcome { name: ex.name.clone(), report: Some(report), error: None, mismatches }
            }
            Err(e) => GalleryOutcome {
                name: ex.name.clone(),
                report: None,
                error: Some(e.to_string()),
                mismatches: vec![],
            },
        }
    })
}

fn compare(e: &Expected, r: &GapSummary) -> Vec<String> {
    let mut out = Vec::new();
    if let Some(d) = e.invariant_dim {
        if d != r.invariant_dim {
            out.push(format!("invariant_dim {} != {d}", r.invariant_dim));
        }
    }
    if let Some(c) = e.complement_norm {
        if (c - r.complement_norm).abs() > e.tolerance {
            out.push(format!("complement_norm {} != {c}", r.complement_norm));
        }
    }
    if let Some(k) = e.kappa {
        match r.kappa {
            Some(v) if (v - k).abs() <= e.tolerance => {}
            other => out.push(format!("kappa {other:?} != {k}")),
        }
    }
    if let Some(g) = e.gap {
        if g != r.gap {
            out.push(format!("gap {} != {g}", r.gap));
        }
    }
    out
}

fn cycle3() -> DMatrix<f64> {
    DMatrix::from_row_slice(3, 3, &[0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0])
}

fn block_rotation(angles: &[f64]) -> DMatrix<f64> {
    let n = 2 * angles.len();
    let mut m = DMatrix::zeros(n, n);
    for (i, t) in angles.iter().enumerate() {
        let (s, c) = t.sin_cos();
        m[(2 * i, 2 * i)] = c;
        m[(2 * i, 2 * i + 1)] = -s;
        m[(2 * i + 1, 2 * i)] = s;
        m[(2 * i + 1, 2 * i + 1)] = c;
    }
    m
}

/// Two rotations of ℝ⁶ in general position, the second conjugated by a
/// Householder reflection so that the pair has no common invariant plane.
pub(crate) fn orthogonal_pair6() -> (DMatrix<f64>, DMatrix<f64>) {
    let a = block_rotation(&[1.0, 2.0, 2.5]);
    let u = DVector::from_vec(vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]).normalize();
    let h = DMatrix::identity(6, 6) - &u * u.transpose() * 2.0;
    let b = &h * block_rotation(&[0.7, 1.9, 2.9]) * &h;
    (a, b)
}

pub fn builtin_gallery() -> Result<Vec<GalleryExample>> {
    let f1 = GroupDescriptor::free(1)?;
    let f2 = GroupDescriptor::free(2)?;
    let z3 = RepSpec::matrix(f1, vec![cycle3()], None)?;
    let mut plus = DMatrix::identity(4, 4);
    plus.view_mut((0, 0), (3, 3)).copy_from(&cycle3());
    let z3_plus = RepSpec::matrix(f1, vec![plus], None)?;
    let z3_conj = RepSpec::diag_conjugated(f1, vec![2.0, 1.0, 1.0], vec![cycle3()])?;
    let (a, b) = orthogonal_pair6();
    let f2_rot = RepSpec::matrix(f2, vec![a, b], None)?;
    let simple1 = FiniteMeasure::simple(1)?;
    let sqrt3 = 3f64.sqrt();

    Ok(vec![
        GalleryExample {
            name: "z3_regular".into(),
            rep: z3.clone(),
            measure: simple1.clone(),
            expected: Some(Expected {
                invariant_dim: Some(1),
                complement_norm: Some(0.5),
                kappa: Some(sqrt3),
                gap: Some(true),
                tolerance: 1e-9,
            }),
        },
        GalleryExample {
            name: "z3_plus_trivial".into(),
            rep: z3_plus,
            measure: simple1.clone(),
            expected: Some(Expected {
                invariant_dim: Some(2),
                complement_norm: Some(0.5),
                kappa: Some(sqrt3),
                gap: Some(true),
                tolerance: 1e-9,
            }),
        },
        GalleryExample {
            name: "z3_dirac".into(),
            rep: z3,
            measure: FiniteMeasure::dirac(),
            expected: Some(Expected {
                invariant_dim: Some(1),
                complement_norm: Some(1.0),
                kappa: Some(0.0),
                gap: Some(false),
                tolerance: 1e-9,
            }),
        },
        GalleryExample {
            name: "trivial".into(),
            rep: RepSpec::trivial(f1, 2)?,
            measure: simple1.clone(),
            expected: Some(Expected {
                invariant_dim: Some(2),
                complement_norm: Some(0.0),
                ..Default::default()
            }),
        },
        GalleryExample {
            name: "z3_conjugated".into(),
            rep: z3_conj,
            measure: simple1,
            expected: Some(Expected { invariant_dim: Some(1), gap: Some(true), ..Default::default() }),
        },
        GalleryExample {
            name: "f2_rotations6".into(),
            rep: f2_rot,
            measure: FiniteMeasure::simple(2)?,
            expected: Some(Expected { invariant_dim: Some(0), gap: Some(true), ..Default::default() }),
        },
    ])
}
