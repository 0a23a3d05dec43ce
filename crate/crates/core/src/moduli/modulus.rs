use rand::Rng;
use serde::{Deserialize, Serialize};

use super::Norm;
use crate::error::{Error, Result};
use crate::rng::{map_indexed, stream_rng};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModulusKind {
    Convexity,
    Smoothness,
}

impl ModulusKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ModulusKind::Convexity => "convexity",
            ModulusKind::Smoothness => "smoothness",
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Starting points per grid point. In dimension 2 these are laid out on
    /// a regular grid of the sphere parameter; otherwise they are random.
    pub restarts: usize,
    /// Coordinate steps stop halving below this size.
    pub min_step: f64,
    /// Slack allowed before a decrease along the grid counts as a
    /// monotonicity violation.
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { restarts: 64, min_step: 1.0 / 65536.0, tolerance: 1e-6, seed: 0 }
    }
}

/// One grid point with the witness pair realizing its value.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModulusPoint {
    pub arg: f64,
    pub value: f64,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModulusCurve {
    pub kind: ModulusKind,
    pub dim: usize,
    pub points: Vec<ModulusPoint>,
    pub restarts: usize,
    pub evaluations: u64,
    pub monotone_violations: usize,
    /// True when the starting points cover the sphere on a regular grid
    /// (dimension 2). Random restarts in higher dimension carry no such
    /// coverage guarantee.
    pub dense_starts: bool,
}

impl ModulusCurve {
    pub fn args(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.arg).collect()
    }

    pub fn values(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.value).collect()
    }

    pub fn is_monotone(&self) -> bool {
        self.monotone_violations == 0
    }
}

/// Upper bounds on δ(ε) = inf{1 − ‖u+v‖/2 : ‖u‖,‖v‖ ≤ 1, ‖u−v‖ ≥ ε}.
///
/// Pairs are written `u = t·x + (ε/2)·y`, `v = t·x − (ε/2)·y` with unit
/// directions `x, y`; for fixed directions the largest admissible `t` is
/// found by bisection, and the directions are optimized by coordinate
/// search.
pub fn modulus_convexity<N: Norm + ?Sized>(
    norm: &N,
    eps_grid: &[f64],
    search: &SearchConfig,
) -> Result<ModulusCurve> {
    for &e in eps_grid {
        if !(e > 0.0) {
            return Err(Error::invalid(format!("ε must be positive, got {e}")));
        }
        if e > 2.0 {
            return Err(Error::invalid(format!("ε = {e} exceeds the diameter 2 of the unit ball")));
        }
    }
    run(norm, ModulusKind::Convexity, eps_grid, search)
}

/// Lower bounds on ρ(τ) = sup{(‖u+v‖+‖u−v‖)/2 − 1 : ‖u‖ ≤ 1, ‖v‖ ≤ τ}.
pub fn modulus_smoothness<N: Norm + ?Sized>(
    norm: &N,
    tau_grid: &[f64],
    search: &SearchConfig,
) -> Result<ModulusCurve> {
    for &t in tau_grid {
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::invalid(format!("τ must be positive, got {t}")));
        }
    }
    run(norm, ModulusKind::Smoothness, tau_grid, search)
}

fn run<N: Norm + ?Sized>(
    norm: &N,
    kind: ModulusKind,
    grid: &[f64],
    search: &SearchConfig,
) -> Result<ModulusCurve> {
    let dim = norm.dim();
    if dim < 2 {
        return Err(Error::invalid("moduli need dimension at least 2"));
    }
    if search.restarts == 0 {
        return Err(Error::invalid("search needs at least one restart"));
    }
    if !(search.min_step > 0.0) {
        return Err(Error::invalid("min_step must be positive"));
    }
    let problem = Problem { norm, kind, dim };

    let mut best: Vec<(Vec<f64>, f64, u64)> = map_indexed(grid.len(), |i| {
        let mut evals = 0;
        let mut best_z = Vec::new();
        let mut best_score = f64::NEG_INFINITY;
        for start in problem.starts(search, i) {
            let (z, score) = problem.descend(start, grid[i], search.min_step, &mut evals);
            if score > best_score {
                best_score = score;
                best_z = z;
            }
        }
        (best_z, best_score, evals)
    });

    // Warm-start sweeps in both directions: each point is re-polished from
    // its neighbor's optimum so that a missed basin shows up at most once.
    for order in [false, true] {
        let idx: Vec<usize> = if order { (0..grid.len()).rev().collect() } else { (0..grid.len()).collect() };
        for w in idx.windows(2) {
            let (from, to) = (w[0], w[1]);
            let start = best[from].0.clone();
            let mut evals = 0;
            let (z, score) = problem.descend(start, grid[to], search.min_step, &mut evals);
            best[to].2 += evals;
            if score > best[to].1 {
                best[to].0 = z;
                best[to].1 = score;
            }
        }
    }

    let mut evaluations = 0;
    let points: Vec<ModulusPoint> = grid
        .iter()
        .zip(best)
        .map(|(&arg, (z, _, evals))| {
            evaluations += evals;
            problem.point(&z, arg)
        })
        .collect();

    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| points[a].arg.total_cmp(&points[b].arg));
    let monotone_violations =
        order.windows(2).filter(|w| points[w[1]].value < points[w[0]].value - search.tolerance).count();

    Ok(ModulusCurve {
        kind,
        dim,
        points,
        restarts: search.restarts,
        evaluations,
        monotone_violations,
        dense_starts: dim == 2,
    })
}

struct Problem<'a, N: Norm + ?Sized> {
    norm: &'a N,
    kind: ModulusKind,
    dim: usize,
}

impl<N: Norm + ?Sized> Problem<'_, N> {
    /// Parameter vectors: in dimension 2 two diamond coordinates, otherwise
    /// the raw coordinates of both directions.
    fn starts(&self, search: &SearchConfig, index: usize) -> Vec<Vec<f64>> {
        if self.dim == 2 {
            let side = (search.restarts as f64).sqrt().ceil() as usize;
            let step = 4.0 / side as f64;
            let mut out = Vec::with_capacity(side * side);
            'outer: for i in 0..side {
                for j in 0..side {
                    if out.len() == search.restarts {
                        break 'outer;
                    }
                    out.push(vec![i as f64 * step, j as f64 * step]);
                }
            }
            out
        } else {
            let mut rng = stream_rng(search.seed, index as u64);
            (0..search.restarts)
                .map(|_| (0..2 * self.dim).map(|_| rng.random_range(-1.0..1.0)).collect())
                .collect()
        }
    }

    fn directions(&self, z: &[f64]) -> Option<(Vec<f64>, Vec<f64>)> {
        let (x, y) = if self.dim == 2 {
            (diamond(z[0]), diamond(z[1]))
        } else {
            (z[..self.dim].to_vec(), z[self.dim..].to_vec())
        };
        Some((self.unit(x)?, self.unit(y)?))
    }

    fn unit(&self, mut x: Vec<f64>) -> Option<Vec<f64>> {
        let n = self.norm.norm(&x);
        if !(n > 0.0) || !n.is_finite() {
            return None;
        }
        x.iter_mut().for_each(|c| *c /= n);
        Some(x)
    }

    /// Witness pair for parameters `z`, or `None` on a degenerate direction.
    fn witness(&self, z: &[f64], arg: f64) -> Option<(Vec<f64>, Vec<f64>)> {
        let (x, y) = self.directions(z)?;
        match self.kind {
            ModulusKind::Convexity => {
                let c = 0.5 * arg;
                let t = self.largest_scale(&x, &y, c);
                Some((comb(t, &x, c, &y), comb(t, &x, -c, &y)))
            }
            ModulusKind::Smoothness => Some((x.clone(), comb(0.0, &x, arg, &y))),
        }
    }

    /// Largest `t ≥ 0` with `‖t·x ± c·y‖ ≤ 1`. The constraint is convex in
    /// `t` and holds at 0, so bisection on dyadic midpoints applies.
    fn largest_scale(&self, x: &[f64], y: &[f64], c: f64) -> f64 {
        let mut buf = vec![0.0; self.dim];
        let mut feasible = |t: f64| {
            for s in [c, -c] {
                for k in 0..self.dim {
                    buf[k] = t * x[k] + s * y[k];
                }
                if self.norm.norm(&buf) > 1.0 {
                    return false;
                }
            }
            true
        };
        let (mut lo, mut hi) = (0.0, 2.0);
        for _ in 0..42 {
            let mid = 0.5 * (lo + hi);
            if feasible(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }

    /// Score to maximize: −δ for convexity, ρ for smoothness.
    fn score(&self, z: &[f64], arg: f64) -> f64 {
        let Some((u, v)) = self.witness(z, arg) else {
            return f64::NEG_INFINITY;
        };
        match self.kind {
            ModulusKind::Convexity => -self.value_of(&u, &v),
            ModulusKind::Smoothness => self.value_of(&u, &v),
        }
    }

    fn value_of(&self, u: &[f64], v: &[f64]) -> f64 {
        let plus: Vec<f64> = u.iter().zip(v).map(|(a, b)| a + b).collect();
        match self.kind {
            ModulusKind::Convexity => 1.0 - 0.5 * self.norm.norm(&plus),
            ModulusKind::Smoothness => {
                let minus: Vec<f64> = u.iter().zip(v).map(|(a, b)| a - b).collect();
                0.5 * (self.norm.norm(&plus) + self.norm.norm(&minus)) - 1.0
            }
        }
    }

    fn descend(&self, mut z: Vec<f64>, arg: f64, min_step: f64, evals: &mut u64) -> (Vec<f64>, f64) {
        let mut best = self.score(&z, arg);
        *evals += 1;
        let mut h = 0.25;
        while h >= min_step {
            let mut improved = false;
            for i in 0..z.len() {
                for dir in [1.0, -1.0] {
                    let old = z[i];
                    z[i] = old + dir * h;
                    let s = self.score(&z, arg);
                    *evals += 1;
                    if s > best {
                        best = s;
                        improved = true;
                        break;
                    }
                    z[i] = old;
                }
            }
            if !improved {
                h *= 0.5;
            }
        }
        (z, best)
    }

    fn point(&self, z: &[f64], arg: f64) -> ModulusPoint {
        let (u, v) = self.witness(z, arg).expect("optimum has nondegenerate directions");
        let value = match self.kind {
            ModulusKind::Convexity => self.value_of(&u, &v).max(0.0),
            ModulusKind::Smoothness => self.value_of(&u, &v),
        };
        ModulusPoint { arg, value, u, v }
    }
}

/// Point of the ℓ¹ unit sphere in the plane, parametrized with period 4.
fn diamond(s: f64) -> Vec<f64> {
    let s = s.rem_euclid(4.0);
    let (k, f) = (s.floor(), s - s.floor());
    match k as u8 {
        0 => vec![1.0 - f, f],
        1 => vec![-f, 1.0 - f],
        2 => vec![f - 1.0, -f],
        _ => vec![f, f - 1.0],
    }
}

fn comb(a: f64, x: &[f64], b: f64, y: &[f64]) -> Vec<f64> {
    x.iter().zip(y).map(|(p, q)| a * p + b * q).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moduli::NormSpec;

    fn grid(n: usize, max: f64) -> Vec<f64> {
        (1..=n).map(|i| max * i as f64 / n as f64).collect()
    }

    #[test]
    fn diamond_covers_the_l1_sphere() {
        for k in 0..40 {
            let p = diamond(k as f64 * 0.1);
            assert!((p[0].abs() + p[1].abs() - 1.0).abs() < 1e-12);
        }
        assert_eq!(diamond(0.5), vec![0.5, 0.5]);
        assert_eq!(diamond(3.5), vec![0.5, -0.5]);
    }

    #[test]
    fn euclidean_convexity_matches_closed_form() {
        let n = NormSpec::new(2.0, 2).unwrap();
        let c = modulus_convexity(&n, &grid(20, 2.0), &SearchConfig::default()).unwrap();
        for p in &c.points {
            let exact = 1.0 - (1.0 - p.arg * p.arg / 4.0).sqrt();
            assert!((p.value - exact).abs() < 1e-6, "{} {} {}", p.arg, p.value, exact);
            // the witness certifies the reported value
            let d: Vec<f64> = p.u.iter().zip(&p.v).map(|(a, b)| a - b).collect();
            assert!(n.norm(&p.u) <= 1.0 + 1e-12 && n.norm(&p.v) <= 1.0 + 1e-12);
            assert!(n.norm(&d) >= p.arg - 1e-12);
        }
        assert!(c.is_monotone());
    }

    #[test]
    fn l1_has_flat_witness() {
        let n = NormSpec::new(1.0, 2).unwrap();
        let c = modulus_convexity(&n, &[1.0], &SearchConfig::default()).unwrap();
        assert_eq!(c.points[0].value, 0.0);
    }

    #[test]
    fn euclidean_smoothness_matches_closed_form() {
        let n = NormSpec::new(2.0, 2).unwrap();
        let c = modulus_smoothness(&n, &grid(10, 1.0), &SearchConfig::default()).unwrap();
        for p in &c.points {
            let exact = (1.0 + p.arg * p.arg).sqrt() - 1.0;
            assert!((p.value - exact).abs() < 1e-6);
        }
    }

    #[test]
    fn l1_smoothness_is_linear() {
        let n = NormSpec::new(1.0, 2).unwrap();
        let c = modulus_smoothness(&n, &[0.1, 0.5, 1.0], &SearchConfig::default()).unwrap();
        for p in &c.points {
            assert!((p.value - p.arg).abs() < 1e-12);
        }
    }

    #[test]
    fn higher_dimension_uses_random_restarts() {
        let n = NormSpec::new(2.0, 4).unwrap();
        let s = SearchConfig { restarts: 8, ..Default::default() };
        let c = modulus_convexity(&n, &[1.0], &s).unwrap();
        assert!(!c.dense_starts);
        assert!((c.points[0].value - (1.0 - 0.75f64.sqrt())).abs() < 1e-5);
    }

    #[test]
    fn rejects_bad_arguments() {
        let n = NormSpec::new(2.0, 2).unwrap();
        let s = SearchConfig::default();
        assert!(modulus_convexity(&n, &[2.5], &s).is_err());
        assert!(modulus_convexity(&n, &[0.0], &s).is_err());
        assert!(modulus_smoothness(&n, &[-1.0], &s).is_err());
    }
}
