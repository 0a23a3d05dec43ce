//! Dense linear-algebra helpers on top of nalgebra.

use std::collections::HashSet;

use nalgebra::{DMatrix, DVector};

/// Largest singular value.
pub fn spectral_norm(m: &DMatrix<f64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.singular_values().max()
}

/// Condition number `σ_max / σ_min`.
pub fn condition_number(m: &DMatrix<f64>) -> f64 {
    let s = m.singular_values();
    s.max() / s.min()
}

pub fn is_orthogonal(m: &DMatrix<f64>, tol: f64) -> bool {
    m.is_square() && (m.transpose() * m - DMatrix::identity(m.nrows(), m.ncols())).amax() <= tol
}

pub fn max_abs_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).amax()
}

fn fingerprint(m: &DMatrix<f64>) -> Vec<i64> {
    // 1e-7 grid: products of a few hundred orthogonal-ish factors stay far
    // inside it, distinct group elements differ by O(1).
    m.iter().map(|x| (x * 1e7).round() as i64).collect()
}

/// Enumerates the group generated by `gens` (which must be invertible).
/// Returns `None` once more than `cap` elements have been found.
pub fn finite_closure(gens: &[DMatrix<f64>], cap: usize) -> Option<Vec<DMatrix<f64>>> {
    let n = gens.first()?.nrows();
    let id = DMatrix::<f64>::identity(n, n);
    let mut seen: HashSet<Vec<i64>> = HashSet::from([fingerprint(&id)]);
    let mut elements = vec![id];
    let mut frontier = 0;
    while frontier < elements.len() {
        let g = elements[frontier].clone();
        frontier += 1;
        for s in gens {
            let h = &g * s;
            if seen.insert(fingerprint(&h)) {
                elements.push(h);
                if elements.len() > cap {
                    return None;
                }
            }
        }
    }
    Some(elements)
}

/// Orthonormal basis (as columns) of the null space of `m`, using singular
/// values below `tol · max(1, σ_max)`.
pub fn null_space(m: &DMatrix<f64>, tol: f64) -> DMatrix<f64> {
    let n = m.ncols();
    // pad to at least n rows so that V is complete
    let padded = if m.nrows() < n {
        let mut p = DMatrix::zeros(n, n);
        p.view_mut((0, 0), (m.nrows(), n)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested V");
    let scale = svd.singular_values.max().max(1.0);
    let cols: Vec<DVector<f64>> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s <= tol * scale)
        .map(|(i, _)| v_t.row(i).transpose())
        .collect();
    columns(n, &cols)
}

/// Orthonormal basis of the column space of `m`.
pub fn column_space(m: &DMatrix<f64>, tol: f64) -> DMatrix<f64> {
    let n = m.nrows();
    if m.ncols() == 0 {
        return DMatrix::zeros(n, 0);
    }
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("requested U");
    let scale = svd.singular_values.max().max(1.0);
    let cols: Vec<DVector<f64>> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s > tol * scale)
        .map(|(i, _)| u.column(i).into_owned())
        .collect();
    columns(n, &cols)
}

/// Orthonormal basis of the orthogonal complement of the span of the
/// (orthonormal) columns of `basis`.
pub fn orthogonal_complement(basis: &DMatrix<f64>, tol: f64) -> DMatrix<f64> {
    let n = basis.nrows();
    let proj = basis * basis.transpose();
    column_space(&(DMatrix::identity(n, n) - proj), tol)
}

pub fn columns(n: usize, cols: &[DVector<f64>]) -> DMatrix<f64> {
    if cols.is_empty() {
        DMatrix::zeros(n, 0)
    } else {
        DMatrix::from_columns(cols)
    }
}
