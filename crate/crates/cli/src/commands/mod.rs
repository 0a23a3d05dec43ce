mod moduli;
mod ode;
mod sampling;
mod spectral;

use std::path::Path;

use cocycle_core::groups::GroupDescriptor;
use cocycle_core::repcoc::CocycleSpec;

use crate::args::{CocycleArgs, Command};
use crate::error::{CliError, CliResult};
use crate::output::Output;

pub fn run(cmd: &Command, seed: u64, out: &mut Output) -> CliResult<()> {
    match cmd {
        Command::Walk(a) => sampling::walk(a, seed, out),
        Command::Compress(a) => sampling::compress(a, seed, out),
        Command::Markov(a) => sampling::markov(a, seed, out),
        Command::Eta(a) => sampling::eta(a, seed, out),
        Command::Moduli(a) => moduli::moduli(a, seed, out),
        Command::Renorm(a) => moduli::renorm(a, seed, out),
        Command::Gap(a) => spectral::gap(a, out),
        Command::Harmonize(a) => spectral::harmonize(a, seed, out),
        Command::Ode(a) => ode::ode(a, out),
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> CliResult<()> {
    if cond {
        Ok(())
    } else {
        Err(CliError::Validation(msg()))
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::validation(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::validation(format!("{}: {e}", path.display())))
}

/// Parses `p ≥ 1` or `inf`.
fn parse_exponent(s: &str) -> CliResult<f64> {
    let p = match s.trim() {
        "inf" | "infinity" | "∞" => f64::INFINITY,
        t => t.parse::<f64>().map_err(|_| CliError::validation(format!("bad exponent {s:?}")))?,
    };
    ensure(p >= 1.0, || format!("exponent must be at least 1, got {s}"))?;
    Ok(p)
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> CliResult<Vec<T>> {
    s.split(',')
        .map(|x| x.trim().parse().map_err(|_| CliError::validation(format!("bad {what} entry {x:?}"))))
        .collect()
}

/// Resolves `--group`/`--cocycle`: a named cocycle on the group, or a JSON
/// file whose group must agree with `--group`.
fn load_cocycle(args: &CocycleArgs) -> CliResult<CocycleSpec> {
    let group: GroupDescriptor = args.group.parse()?;
    let c = match args.cocycle.as_str() {
        "haagerup" => match group {
            GroupDescriptor::Free { rank } => CocycleSpec::haagerup(rank)?,
            _ => return Err(CliError::validation("the haagerup cocycle needs a free group")),
        },
        "homomorphism" => match group {
            GroupDescriptor::FreeAbelian { dim } => CocycleSpec::identity_homomorphism(dim)?,
            _ => return Err(CliError::validation("the homomorphism cocycle needs abelian:<d>")),
        },
        path => read_json::<CocycleSpec>(Path::new(path))?,
    };
    ensure(*c.group() == group, || format!("cocycle is defined on {} but --group is {group}", c.group()))?;
    Ok(c)
}
