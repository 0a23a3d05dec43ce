use cocycle_core::radial::{solve_psi, Field, ForcingProfile, RankOneSpace, MAX_RADIUS, MAX_STEP};

use super::ensure;
use crate::args::OdeArgs;
use crate::error::{CliError, CliResult};
use crate::output::Output;

fn load_forcing(s: &str) -> CliResult<ForcingProfile> {
    if s.starts_with("const:") || s.starts_with("band:") {
        return Ok(s.parse()?);
    }
    let mut rdr = csv::Reader::from_path(s).map_err(|e| {
        CliError::validation(format!("forcing {s:?} is neither a profile nor a readable CSV: {e}"))
    })?;
    let (mut radii, mut values) = (Vec::new(), Vec::new());
    for row in rdr.deserialize::<(f64, f64)>() {
        let (r, z) = row?;
        radii.push(r);
        values.push(z);
    }
    Ok(ForcingProfile::sampled(radii, values)?)
}

pub fn ode(a: &OdeArgs, out: &mut Output) -> CliResult<()> {
    let field: Field = a.field.parse()?;
    ensure(a.rmax > 0.0 && a.rmax <= MAX_RADIUS, || format!("--rmax must lie in (0, {MAX_RADIUS}]"))?;
    ensure(a.step > 0.0 && a.step <= MAX_STEP, || format!("--step must lie in (0, {MAX_STEP}]"))?;
    let space = RankOneSpace::new(field, a.n)?;
    let forcing = load_forcing(&a.forcing)?;
    let sol = solve_psi(&space, &forcing, a.rmax, a.step)?;
    let cells = sol.grid.len() - 1;
    let stride = cells.div_ceil(a.csv_points as usize - 1).max(1);
    let mut idx: Vec<usize> = (0..=cells).step_by(stride).collect();
    if idx.last() != Some(&cells) {
        idx.push(cells);
    }
    out.csv("ode.csv", &["r", "psi", "phi"], idx.iter().map(|&i| (sol.grid[i], sol.psi[i], sol.phi[i])))?;
    let summary = sol.summary();
    out.json("ode.json", &summary)?;
    println!(
        "ψ({}) = {:.8}{}{}",
        a.rmax,
        sol.psi_at_rmax,
        summary.predicted_limit.map_or(String::new(), |l| format!(", predicted limit {l:.8}")),
        summary.growth_slope.map_or(String::new(), |s| format!(", growth slope {s:.4}"))
    );
    Ok(())
}
