mod args;
mod commands;
mod config;
mod error;
mod output;

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{CommandFactory, FromArgMatches, Parser};

use args::Cli;
use output::{Manifest, Output};

fn main() {
    std::process::exit(run(std::env::args_os().collect()));
}

fn parse(argv: Vec<OsString>) -> Result<(Cli, Vec<OsString>), i32> {
    let clap_exit = |e: clap::Error| {
        let _ = e.print();
        if e.use_stderr() {
            1
        } else {
            0
        }
    };
    let root = Cli::command();
    let matches = root.clone().try_get_matches_from(&argv).map_err(clap_exit)?;
    let cli = Cli::from_arg_matches(&matches).map_err(clap_exit)?;
    let Some(path) = &cli.config else {
        return Ok((cli, argv));
    };
    let merged = config::read_pairs(path)
        .and_then(|pairs| config::merge(argv, &root, &matches, &pairs))
        .map_err(|e| {
            eprintln!("{e}");
            e.exit_code()
        })?;
    let cli = Cli::try_parse_from(&merged).map_err(clap_exit)?;
    Ok((cli, merged))
}

fn run(argv: Vec<OsString>) -> i32 {
    let (cli, argv) = match parse(argv) {
        Ok(x) => x,
        Err(code) => return code,
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n as usize).build_global() {
            eprintln!("error: cannot configure thread pool: {e}");
            return 1;
        }
    }
    let name = cli.command.name();
    let dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("out").join(name));
    let mut out = Output::new(dir);
    let started = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let clock = Instant::now();

    if let Err(e) = commands::run(&cli.command, cli.seed, &mut out) {
        eprintln!("{e}");
        return e.exit_code();
    }

    let parameters = serde_json::to_value(&cli.command)
        .ok()
        .and_then(|v| v.get(name).cloned())
        .unwrap_or(serde_json::Value::Null);
    let mut outputs = out.written().to_vec();
    outputs.push("manifest.json".into());
    let manifest = Manifest {
        subcommand: name,
        version: env!("CARGO_PKG_VERSION"),
        seed: cli.seed,
        threads: cli.threads,
        parameters,
        argv: argv.iter().map(|a| a.to_string_lossy().into_owned()).collect(),
        outputs,
        wall_clock_seconds: clock.elapsed().as_secs_f64(),
        started_unix: started,
    };
    match out.json("manifest.json", &manifest) {
        Ok(()) => {
            println!("wrote {}", out.dir().display());
            0
        }
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}
