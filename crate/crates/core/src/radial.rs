//! Radial profile of harmonic maps on rank-one symmetric spaces.
//!
//! Solves `ψ′ + m(r)ψ = 2ζ(r)`, `ψ(0) = 0`, where `ψ = φ′`, by variation of
//! constants. The homogeneous solution `ψ₀ = (sinh r)^{−m₁}(sinh 2r)^{−m₂}`
//! only enters through `exp(log ψ₀(a) − log ψ₀(b))` with `a ≥ b`, which
//! never exceeds 1.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats::linear_fit;

pub const MAX_RADIUS: f64 = 500.0;
pub const MAX_STEP: f64 = 1e-2;
pub const DEFAULT_STEP: f64 = 1e-3;
const MAX_PIECES: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    R,
    C,
    H,
    O,
}

impl Field {
    /// Real dimension of the field.
    pub fn k(self) -> u32 {
        match self {
            Field::R => 1,
            Field::C => 2,
            Field::H => 4,
            Field::O => 8,
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Field::R => "R",
            Field::C => "C",
            Field::H => "H",
            Field::O => "O",
        };
        f.write_str(s)
    }
}

impl FromStr for Field {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "R" | "r" => Ok(Field::R),
            "C" | "c" => Ok(Field::C),
            "H" | "h" => Ok(Field::H),
            "O" | "o" => Ok(Field::O),
            _ => Err(Error::invalid(format!("unknown field {s:?} (expected R, C, H or O)"))),
        }
    }
}

/// Hyperbolic space of dimension `n` over a field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankOneSpace {
    field: Field,
    n: u32,
}

impl RankOneSpace {
    pub fn new(field: Field, n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid(format!("n must be at least 2, got {n}")));
        }
        if field == Field::O && n != 2 {
            return Err(Error::invalid("the octonionic hyperbolic space only exists for n = 2"));
        }
        Ok(RankOneSpace { field, n })
    }

    /// The four planes `(𝕂, 2)`.
    pub fn presets() -> [RankOneSpace; 4] {
        [Field::R, Field::C, Field::H, Field::O].map(|field| RankOneSpace { field, n: 2 })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.field.k()
    }

    pub fn m1(&self) -> f64 {
        (self.k() * (self.n - 1)) as f64
    }

    pub fn m2(&self) -> f64 {
        (self.k() - 1) as f64
    }

    /// `m₁ + 2m₂`, the limit of the friction coefficient.
    pub fn exponential_rate(&self) -> f64 {
        self.m1() + 2.0 * self.m2()
    }
}

/// Quaternionic hyperbolic `n`-space.
pub fn sp_n1_preset(n: u32) -> Result<RankOneSpace> {
    RankOneSpace::new(Field::H, n)
}

/// `m(r) = m₁ coth r + 2m₂ coth 2r`.
pub fn friction(space: &RankOneSpace, r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::invalid(format!("friction needs r > 0, got {r}")));
    }
    Ok(space.m1() / r.tanh() + 2.0 * space.m2() / (2.0 * r).tanh())
}

fn log_sinh(x: f64) -> f64 {
    x + (-(-2.0 * x).exp_m1()).ln() - std::f64::consts::LN_2
}

fn log_psi0_unchecked(space: &RankOneSpace, r: f64) -> f64 {
    -space.m1() * log_sinh(r) - space.m2() * log_sinh(2.0 * r)
}

/// `log ψ₀(r) = −m₁ log sinh r − m₂ log sinh 2r`.
pub fn log_psi0(space: &RankOneSpace, r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::invalid(format!("log ψ₀ needs r > 0, got {r}")));
    }
    Ok(log_psi0_unchecked(space, r))
}

/// The forcing term ζ of `ψ′ + mψ = 2ζ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ForcingProfile {
    Constant {
        value: f64,
    },
    /// `ζ(r) = (min+max)/2 + (max−min)/2 · sin(2πr/period)`.
    Band {
        min: f64,
        max: f64,
        period: f64,
    },
    /// Piecewise-linear interpolation of samples with increasing radii.
    Sampled {
        radii: Vec<f64>,
        values: Vec<f64>,
    },
}

impl ForcingProfile {
    pub fn constant(value: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::invalid("forcing must be finite"));
        }
        Ok(ForcingProfile::Constant { value })
    }

    pub fn band(min: f64, max: f64, period: f64) -> Result<Self> {
        if !(min > 0.0 && min <= max && max.is_finite()) {
            return Err(Error::invalid(format!("band needs 0 < min <= max, got [{min}, {max}]")));
        }
        if !(period > 0.0 && period.is_finite()) {
            return Err(Error::invalid("band period must be positive"));
        }
        Ok(ForcingProfile::Band { min, max, period })
    }

    pub fn sampled(radii: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if radii.len() != values.len() || radii.len() < 2 {
            return Err(Error::invalid("a sampled profile needs at least two (r, ζ) pairs"));
        }
        if radii[0] != 0.0 {
            return Err(Error::invalid("a sampled profile must start at r = 0"));
        }
        if radii.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::invalid("sample radii must be strictly increasing"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("sampled forcing must be finite"));
        }
        Ok(ForcingProfile::Sampled { radii, values })
    }

    /// ζ(r), or `None` beyond the sampled range.
    pub fn value(&self, r: f64) -> Option<f64> {
        match self {
            ForcingProfile::Constant { value } => Some(*value),
            ForcingProfile::Band { min, max, period } => {
                Some(0.5 * (min + max) + 0.5 * (max - min) * (std::f64::consts::TAU * r / period).sin())
            }
            ForcingProfile::Sampled { radii, values } => {
                let last = *radii.last()?;
                if r < 0.0 || r > last {
                    return None;
                }
                let i = radii.partition_point(|&x| x <= r).min(radii.len() - 1).max(1);
                let (r0, r1) = (radii[i - 1], radii[i]);
                let t = (r - r0) / (r1 - r0);
                Some(values[i - 1] + t * (values[i] - values[i - 1]))
            }
        }
    }

    /// `[ζ_min, ζ_max]` over r ≥ 0.
    pub fn band_limits(&self) -> (f64, f64) {
        match self {
            ForcingProfile::Constant { value } => (*value, *value),
            ForcingProfile::Band { min, max, .. } => (*min, *max),
            ForcingProfile::Sampled { values, .. } => {
                values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)))
            }
        }
    }

    /// Declared limit ζ_∞, if any.
    pub fn limit(&self) -> Option<f64> {
        match self {
            ForcingProfile::Constant { value } => Some(*value),
            ForcingProfile::Band { min, max, .. } if min == max => Some(*min),
            _ => None,
        }
    }
}

/// Parses `const:<v>` or `band:<min>,<max>:<period>`.
impl FromStr for ForcingProfile {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let num = |t: &str| {
            t.trim().parse::<f64>().map_err(|_| Error::invalid(format!("bad number {t:?} in forcing {s:?}")))
        };
        if let Some(v) = s.strip_prefix("const:") {
            return ForcingProfile::constant(num(v)?);
        }
        if let Some(rest) = s.strip_prefix("band:") {
            let (range, period) = rest
                .split_once(':')
                .ok_or_else(|| Error::invalid("band forcing is band:<min>,<max>:<period>"))?;
            let (a, b) = range
                .split_once(',')
                .ok_or_else(|| Error::invalid("band forcing is band:<min>,<max>:<period>"))?;
            return ForcingProfile::band(num(a)?, num(b)?, num(period)?);
        }
        Err(Error::invalid(format!(
            "unrecognized forcing {s:?} (expected const:<v> or band:<a>,<b>:<period>)"
        )))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RadialSolution {
    pub space: RankOneSpace,
    pub step: f64,
    pub grid: Vec<f64>,
    pub psi: Vec<f64>,
    pub phi: Vec<f64>,
    pub psi_at_rmax: f64,
    /// `2ζ_∞/(m₁+2m₂)` when the forcing declares a limit.
    pub predicted_limit: Option<f64>,
}

impl RadialSolution {
    pub fn r_max(&self) -> f64 {
        *self.grid.last().expect("grid is nonempty")
    }

    /// ψ at the grid point nearest to `r`.
    pub fn psi_near(&self, r: f64) -> f64 {
        let i = ((r / self.step).round() as usize).min(self.psi.len() - 1);
        self.psi[i]
    }
}

/// Integrates on the uniform grid `0, h, 2h, …, r_max`.
pub fn solve_psi(
    space: &RankOneSpace,
    forcing: &ForcingProfile,
    r_max: f64,
    step: f64,
) -> Result<RadialSolution> {
    if !(r_max > 0.0 && r_max <= MAX_RADIUS) {
        return Err(Error::invalid(format!("r_max must lie in (0, {MAX_RADIUS}], got {r_max}")));
    }
    if !(step > 0.0 && step <= MAX_STEP) {
        return Err(Error::invalid(format!("step must lie in (0, {MAX_STEP}], got {step}")));
    }
    let cells = (r_max / step).round() as usize;
    if cells < 2 || ((cells as f64) * step - r_max).abs() > 1e-9 * r_max {
        return Err(Error::invalid("r_max must be a multiple of the step (at least two cells)"));
    }
    let zeta =
        |r: f64| forcing.value(r).ok_or_else(|| Error::invalid(format!("forcing undefined at r = {r}")));

    let grid: Vec<f64> = (0..=cells).map(|i| i as f64 * step).collect();
    let mut psi = vec![0.0; cells + 1];

    // Near 0 the kernel behaves like (s/h)^{m₁+m₂}; integrating it against a
    // linear ζ gives the seed of the first cell.
    let mm = space.m1() + space.m2();
    let (z0, z1) = (zeta(0.0)?, zeta(step)?);
    psi[1] = 2.0 * step * (z0 / (mm + 1.0) + (z1 - z0) / (mm + 2.0));

    let mut log_prev = log_psi0_unchecked(space, step);
    let mut z_prev = z1;
    for i in 1..cells {
        let next = grid[i + 1];
        let log_next = log_psi0_unchecked(space, next);
        let z_next = zeta(next)?;
        let k_cell = (log_next - log_prev).exp();
        // the kernel is close to (s/r)^{m₁+m₂} near 0, so split the first cells
        let pieces = ((8.0 * mm / i as f64).ceil() as usize).clamp(1, MAX_PIECES);
        let integral = if pieces == 1 {
            let mid = grid[i] + 0.5 * step;
            let k_mid = (log_next - log_psi0_unchecked(space, mid)).exp();
            step / 6.0 * (k_cell * z_prev + 4.0 * k_mid * zeta(mid)? + z_next)
        } else {
            let h = step / pieces as f64;
            let kernel = |s: f64| (log_next - log_psi0_unchecked(space, s)).exp();
            let mut sum = 0.0;
            let (mut a, mut fa) = (grid[i], k_cell * z_prev);
            for j in 1..=pieces {
                let b = if j == pieces { next } else { grid[i] + j as f64 * h };
                let m = 0.5 * (a + b);
                let fb = if j == pieces { z_next } else { kernel(b) * zeta(b)? };
                sum += (b - a) / 6.0 * (fa + 4.0 * kernel(m) * zeta(m)? + fb);
                (a, fa) = (b, fb);
            }
            sum
        };
        psi[i + 1] = k_cell * psi[i] + 2.0 * integral;
        log_prev = log_next;
        z_prev = z_next;
    }

    let mut phi = vec![0.0; cells + 1];
    for i in 0..cells {
        phi[i + 1] = phi[i] + 0.5 * step * (psi[i] + psi[i + 1]);
    }

    let predicted_limit = forcing.limit().map(|z| 2.0 * z / space.exponential_rate());
    Ok(RadialSolution { space: *space, step, psi_at_rmax: psi[cells], grid, psi, phi, predicted_limit })
}

/// `[2ζ_min, 2ζ_max]/(m₁+2m₂)`: the interval that eventually contains ψ.
pub fn asymptotic_band(space: &RankOneSpace, forcing: &ForcingProfile) -> (f64, f64) {
    let (lo, hi) = forcing.band_limits();
    let d = space.exponential_rate();
    (2.0 * lo / d, 2.0 * hi / d)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct GrowthFit {
    pub slope: f64,
    pub stderr: f64,
    pub window: (f64, f64),
}

/// Least-squares slope of `log √φ` against `log r` over `[r_max/10, r_max]`.
pub fn growth_exponent(solution: &RadialSolution) -> Result<GrowthFit> {
    let r_max = solution.r_max();
    if r_max < 50.0 {
        return Err(Error::invalid(format!("growth fit needs r_max >= 50, got {r_max}")));
    }
    let lo = r_max / 10.0;
    let start = (lo / solution.step).ceil() as usize;
    let count = solution.grid.len() - start;
    let stride = (count / 2000).max(1);
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for i in (start..solution.grid.len()).step_by(stride) {
        let phi = solution.phi[i];
        if !(phi > 0.0) {
            return Err(Error::Degenerate(format!(
                "φ vanishes at r = {} so log √φ is undefined",
                solution.grid[i]
            )));
        }
        xs.push(solution.grid[i].ln());
        ys.push(0.5 * phi.ln());
    }
    let fit = linear_fit(&xs, &ys).ok_or_else(|| Error::Degenerate("growth fit failed".into()))?;
    Ok(GrowthFit { slope: fit.slope, stderr: fit.slope_stderr, window: (lo, r_max) })
}

/// `sup |ψ′ + m(r)ψ − 2ζ|` over grid points in `[r_from, r_max)`, with ψ′ by
/// central differences.
pub fn ode_residual(solution: &RadialSolution, forcing: &ForcingProfile, r_from: f64) -> Result<f64> {
    let h = solution.step;
    let start = ((r_from / h).ceil() as usize).max(1);
    let mut worst = 0.0f64;
    for i in start..solution.grid.len() - 1 {
        let r = solution.grid[i];
        let d = (solution.psi[i + 1] - solution.psi[i - 1]) / (2.0 * h);
        let z = forcing.value(r).ok_or_else(|| Error::invalid(format!("forcing undefined at r = {r}")))?;
        worst = worst.max((d + friction(&solution.space, r)? * solution.psi[i] - 2.0 * z).abs());
    }
    Ok(worst)
}

/// Step-halving ratio `‖φ_h − φ_{h/2}‖∞ / ‖φ_{h/2} − φ_{h/4}‖∞` on the
/// coarse grid; close to 4 for a second-order scheme.
pub fn convergence_ratio(
    space: &RankOneSpace,
    forcing: &ForcingProfile,
    r_max: f64,
    step: f64,
) -> Result<f64> {
    let s: Vec<RadialSolution> =
        [1.0, 2.0, 4.0].iter().map(|d| solve_psi(space, forcing, r_max, step / d)).collect::<Result<_>>()?;
    let diff = |a: &RadialSolution, b: &RadialSolution| {
        let ratio = ((a.step / b.step).round()) as usize;
        a.phi.iter().enumerate().map(|(i, x)| (x - b.phi[i * ratio]).abs()).fold(0.0, f64::max)
    };
    let (d1, d2) = (diff(&s[0], &s[1]), diff(&s[1], &s[2]));
    if d2 == 0.0 {
        return Err(Error::Degenerate("solutions agree exactly; ratio undefined".into()));
    }
    Ok(d1 / d2)
}

/// JSON summary of a solver run.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RadialSummary {
    pub field: Field,
    pub n: u32,
    pub m1: f64,
    pub m2: f64,
    pub psi_at_rmax: f64,
    pub predicted_limit: Option<f64>,
    pub growth_slope: Option<f64>,
}

impl RadialSolution {
    pub fn summary(&self) -> RadialSummary {
        RadialSummary {
            field: self.space.field,
            n: self.space.n,
            m1: self.space.m1(),
            m2: self.space.m2(),
            psi_at_rmax: self.psi_at_rmax,
            predicted_limit: self.predicted_limit,
            growth_slope: growth_exponent(self).ok().map(|g| g.slope),
        }
    }
}
