use cocycle_core::groups::{FreeWord, GroupDescriptor};
use cocycle_core::repcoc::{from_dense, CocycleSpec};
use cocycle_core::rng::stream_rng;
use cocycle_core::spectral::{
    builtin_gallery, evaluate_gallery, harmonize as harmonize_cocycle, FiniteMeasure, Gallery, GalleryExample,
};
use nalgebra::DVector;
use rand::Rng;
use serde::Serialize;

use super::{parse_list, read_json};
use crate::args::{GapArgs, HarmonizeArgs};
use crate::error::{CliError, CliResult};
use crate::output::Output;

fn load_gallery(path: Option<&std::path::Path>) -> CliResult<Vec<GalleryExample>> {
    match path {
        Some(p) => Ok(read_json::<Gallery>(p)?.examples),
        None => Ok(builtin_gallery()?),
    }
}

pub fn gap(a: &GapArgs, out: &mut Output) -> CliResult<()> {
    let examples = load_gallery(a.gallery.as_deref())?;
    let outcomes = evaluate_gallery(&examples);
    out.json("gap.json", &outcomes)?;
    for o in &outcomes {
        match (&o.report, &o.error) {
            (Some(r), _) => println!(
                "{:<20} invariant_dim {} complement_norm {:.6} kappa {} gap {}",
                o.name,
                r.invariant_dim,
                r.complement_norm,
                r.kappa.map_or("-".into(), |k| format!("{k:.6}")),
                r.gap
            ),
            (None, Some(e)) => println!("{:<20} error: {e}", o.name),
            (None, None) => {}
        }
        for m in &o.mismatches {
            eprintln!("warning: {}: {m}", o.name);
        }
    }
    Ok(())
}

fn parse_measure(s: &str, rank: usize) -> CliResult<FiniteMeasure> {
    if s == "simple" {
        return Ok(FiniteMeasure::simple(rank)?);
    }
    if let Some(words) = s.strip_prefix("uniform:") {
        let support: Vec<FreeWord> = parse_list(words, "word")?;
        return Ok(FiniteMeasure::uniform(support)?);
    }
    read_json(std::path::Path::new(s))
}

#[derive(Serialize)]
struct HarmonizeReport<'a> {
    x1: &'a [f64],
    residual: f64,
    spectral_radius: f64,
    input: &'a CocycleSpec,
    harmonized: &'a CocycleSpec,
}

pub fn harmonize(a: &HarmonizeArgs, seed: u64, out: &mut Output) -> CliResult<()> {
    let (cocycle, default_measure) = match (&a.cocycle, &a.example) {
        (Some(path), _) => (read_json::<CocycleSpec>(path)?, None),
        (None, Some(name)) => {
            let ex = load_gallery(a.gallery.as_deref())?
                .into_iter()
                .find(|e| &e.name == name)
                .ok_or_else(|| CliError::validation(format!("no gallery example named {name:?}")))?;
            let n =
                ex.rep.dim().ok_or_else(|| CliError::validation("example needs a matrix representation"))?;
            let rank = ex.rep.group().generator_count() / 2;
            let mut rng = stream_rng(seed, 0);
            let mut random = || from_dense(&DVector::from_fn(n, |_, _| rng.random_range(-1.0..1.0)));
            let c = if a.kind == "coboundary" {
                CocycleSpec::coboundary(ex.rep.clone(), random())?
            } else {
                CocycleSpec::generator_values(ex.rep.clone(), (0..rank).map(|_| random()).collect())?
            };
            (c, Some(ex.measure))
        }
        (None, None) => return Err(CliError::validation("pass --cocycle FILE or --example NAME")),
    };
    let GroupDescriptor::Free { rank } = *cocycle.group() else {
        return Err(CliError::validation("harmonize needs a cocycle on a free group"));
    };
    let mu = match (&a.measure, default_measure) {
        (Some(s), _) => parse_measure(s, rank)?,
        (None, Some(m)) => m,
        (None, None) => FiniteMeasure::simple(rank)?,
    };
    let h = harmonize_cocycle(&cocycle, &mu)?;
    out.json(
        "harmonize.json",
        &HarmonizeReport {
            x1: &h.x1,
            residual: h.residual,
            spectral_radius: h.spectral_radius,
            input: &cocycle,
            harmonized: &h.cocycle,
        },
    )?;
    println!(
        "harmonized: residual {:.1e}, spectral radius on the complement {:.6}, |x1| = {:.6}",
        h.residual,
        h.spectral_radius,
        DVector::from_column_slice(&h.x1).norm()
    );
    Ok(())
}
