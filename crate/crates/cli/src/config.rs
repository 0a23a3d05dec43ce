//! Flat `key=value` configuration merged under explicit flags.

use std::ffi::OsString;
use std::path::Path;

use clap::parser::ValueSource;
use clap::{ArgMatches, Command};

use crate::error::{CliError, CliResult};

pub fn read_pairs(path: &Path) -> CliResult<Vec<(String, String)>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::validation(format!("cannot read config {}: {e}", path.display())))?;
    let mut pairs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            CliError::validation(format!("{}:{}: expected key=value", path.display(), i + 1))
        })?;
        pairs.push((k.trim().replace('-', "_"), v.trim().to_string()));
    }
    Ok(pairs)
}

/// Appends `--key=value` for every config entry whose flag was not given on
/// the command line.
pub fn merge(
    argv: Vec<OsString>,
    root: &Command,
    matches: &ArgMatches,
    pairs: &[(String, String)],
) -> CliResult<Vec<OsString>> {
    let (name, sub_matches) =
        matches.subcommand().ok_or_else(|| CliError::validation("missing subcommand"))?;
    let sub = root.find_subcommand(name).expect("parsed subcommand exists");
    let mut out = argv;
    for (key, value) in pairs {
        if key == "config" {
            return Err(CliError::validation("config files cannot include other config files"));
        }
        let (arg, source) = if let Some(a) = root.get_arguments().find(|a| a.get_id() == key) {
            (a, matches.value_source(key))
        } else if let Some(a) = sub.get_arguments().find(|a| a.get_id() == key) {
            (a, sub_matches.value_source(key))
        } else {
            return Err(CliError::validation(format!("unknown config key {key:?} for {name}")));
        };
        if source == Some(ValueSource::CommandLine) {
            continue;
        }
        let long = arg.get_long().expect("all options have long names");
        out.push(format!("--{long}={value}").into());
    }
    Ok(out)
}
