use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn cocycle(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cocycle")).current_dir(dir).args(args).output().expect("binary runs")
}

fn json(path: impl AsRef<Path>) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn header(path: impl AsRef<Path>) -> String {
    std::fs::read_to_string(path).unwrap().lines().next().unwrap().to_string()
}

#[test]
fn ode_reports_the_quaternionic_limit() {
    let tmp = tempfile::tempdir().unwrap();
    let o = cocycle(
        tmp.path(),
        &["ode", "--field", "H", "--n", "2", "--forcing", "const:1", "--rmax", "20", "--out", "o"],
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let s = json(tmp.path().join("o/ode.json"));
    assert!((s["predicted_limit"].as_f64().unwrap() - 0.2).abs() < 1e-12);
    assert!((s["psi_at_rmax"].as_f64().unwrap() - 0.2).abs() < 1e-3);
    for key in ["field", "n", "m1", "m2", "growth_slope"] {
        assert!(s.get(key).is_some(), "{key}");
    }
    assert_eq!(header(tmp.path().join("o/ode.csv")), "r,psi,phi");
    let m = json(tmp.path().join("o/manifest.json"));
    assert_eq!(m["subcommand"], "ode");
    assert_eq!(m["parameters"]["step"], 1e-3);
    assert!(m["outputs"].as_array().unwrap().iter().any(|x| x == "ode.csv"));
}

#[test]
fn forcing_from_csv_matches_the_constant_profile() {
    let tmp = tempfile::tempdir().unwrap();
    let rows: String = (0..=25).map(|i| format!("{i},1.0\n")).collect();
    std::fs::write(tmp.path().join("zeta.csv"), format!("r,zeta\n{rows}")).unwrap();
    for (forcing, out) in [("zeta.csv", "a"), ("const:1", "b")] {
        let o = cocycle(tmp.path(), &["ode", "--field", "C", "--forcing", forcing, "--out", out]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let a = std::fs::read_to_string(tmp.path().join("a/ode.csv")).unwrap();
    let b = std::fs::read_to_string(tmp.path().join("b/ode.csv")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn compress_example_gives_square_root_growth() {
    let tmp = tempfile::tempdir().unwrap();
    let o = cocycle(
        tmp.path(),
        &["compress", "--group", "free:2", "--cocycle", "haagerup", "--samples", "200000", "--out", "c"],
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let s = json(tmp.path().join("c/compress.json"));
    assert!((s["alpha_envelope"].as_f64().unwrap() - 0.5).abs() <= 0.02);
    assert_eq!(s["verdict"], "CONSISTENT");
    assert!(s.get("stderr").is_some() && s.get("p").is_some());
    assert_eq!(header(tmp.path().join("c/compress.csv")), "radius,count,min_norm,gmean_norm");
}

#[test]
fn gapless_harmonization_is_refused() {
    let tmp = tempfile::tempdir().unwrap();
    let o = cocycle(tmp.path(), &["harmonize", "--example", "z3_dirac", "--out", "h"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("no spectral gap"), "{err}");
    assert!(!tmp.path().join("h/manifest.json").exists());

    let o = cocycle(tmp.path(), &["harmonize", "--example", "f2_rotations6", "--out", "ok"]);
    assert_eq!(o.status.code(), Some(0));
    let s = json(tmp.path().join("ok/harmonize.json"));
    assert!(s["residual"].as_f64().unwrap() <= 1e-10);
}

#[test]
fn validation_errors_exit_with_one() {
    let tmp = tempfile::tempdir().unwrap();
    let cases: &[&[&str]] = &[
        &["walk", "--bogus"],
        &["walk", "--steps", "0"],
        &["teleport"],
        &["ode", "--step", "0.5"],
        &["ode", "--rmax", "600"],
        &["ode", "--field", "X"],
        &["ode", "--field", "O", "--n", "3"],
        &["moduli", "--p", "0.5"],
        &["compress", "--p", "3"],
        &["markov", "--checkpoints", "0,5"],
        &["harmonize"],
        &["renorm", "--vector", "1,2,3"],
        &["walk", "--steps", "100", "--walks", "10", "--out", "/proc/nope/x"],
    ];
    for args in cases {
        let o = cocycle(tmp.path(), args);
        assert_eq!(o.status.code(), Some(1), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
    let o = cocycle(tmp.path(), &["--help"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn config_values_yield_to_flags() {
    let tmp = tempfile::tempdir().unwrap();
    std::fs::write(tmp.path().join("run.cfg"), "# walk settings\nsteps = 200\nwalks=30\nseed=4\n").unwrap();
    let o = cocycle(tmp.path(), &["walk", "--config", "run.cfg", "--walks", "12", "--out", "w"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let m = json(tmp.path().join("w/manifest.json"));
    assert_eq!(m["parameters"]["steps"], 200);
    assert_eq!(m["parameters"]["walks"], 12);
    assert_eq!(m["seed"], 4);
    let s = json(tmp.path().join("w/walk.json"));
    assert_eq!(s["seeds"], 12);
    assert_eq!(s["n"], 200);

    std::fs::write(tmp.path().join("bad.cfg"), "stepz=3\n").unwrap();
    let o = cocycle(tmp.path(), &["walk", "--config", "bad.cfg"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn manifest_replay_is_bit_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let o = cocycle(tmp.path(), &["walk", "--steps", "300", "--walks", "64", "--seed", "11", "--out", "a"]);
    assert_eq!(o.status.code(), Some(0));
    let m = json(tmp.path().join("a/manifest.json"));
    let mut argv: Vec<String> =
        m["argv"].as_array().unwrap()[1..].iter().map(|v| v.as_str().unwrap().to_string()).collect();
    let i = argv.iter().position(|a| a == "a").unwrap();
    argv[i] = "b".into();
    argv.extend(["--threads".into(), "1".into()]);
    let refs: Vec<&str> = argv.iter().map(String::as_str).collect();
    assert_eq!(cocycle(tmp.path(), &refs).status.code(), Some(0));
    for f in ["walk.csv", "walk.json"] {
        let a = std::fs::read(tmp.path().join("a").join(f)).unwrap();
        let b = std::fs::read(tmp.path().join("b").join(f)).unwrap();
        assert_eq!(a, b, "{f}");
    }
    assert_eq!(header(tmp.path().join("a/walk.csv")), "step,distance");
}

#[test]
fn markov_and_eta_emit_declared_tables() {
    let tmp = tempfile::tempdir().unwrap();
    let o = cocycle(
        tmp.path(),
        &["markov", "--n-max", "50", "--samples", "200", "--checkpoints", "1,5,50", "--out", "m"],
    );
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(tmp.path().join("m/markov.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,ratio,stderr,exact_ratio");
    assert!(lines[1].starts_with("1,1.0,0.0,1.0"));
    assert_eq!(lines.len(), 4);

    let o = cocycle(
        tmp.path(),
        &[
            "markov",
            "--group",
            "abelian:2",
            "--cocycle",
            "homomorphism",
            "--n-max",
            "20",
            "--samples",
            "50",
            "--checkpoints",
            "20",
            "--out",
            "h",
        ],
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let row = std::fs::read_to_string(tmp.path().join("h/markov.csv")).unwrap();
    assert!(row.lines().nth(1).unwrap().ends_with(','), "{row}");

    std::fs::write(tmp.path().join("fh.csv"), "radius,f,h\n1,2.0,2.0\n2,3.0,3.0\n5,0.5,0.5\n").unwrap();
    let o = cocycle(tmp.path(), &["eta", "--input", "fh.csv", "--out", "e"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let eta = json(tmp.path().join("e/eta.json"));
    assert!(eta["values"].as_array().unwrap().iter().all(|v| (v.as_f64().unwrap() - 1.0).abs() < 1e-15));
    assert_eq!(eta["diverges"], false);

    let o = cocycle(tmp.path(), &["eta", "--samples", "500", "--r-max", "200", "--out", "g"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(header(tmp.path().join("g/lengths.csv")), "word_length,cocycle_norm");
}

#[test]
fn moduli_renorm_and_gap_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let o = cocycle(tmp.path(), &["moduli", "--p", "2", "--points", "40", "--out", "mo"]);
    assert_eq!(o.status.code(), Some(0));
    let s = json(tmp.path().join("mo/moduli.json"));
    for key in ["K", "c", "p", "q", "residual_duality"] {
        assert!(s.get(key).is_some(), "{key}");
    }
    // ρ(τ) = √(1+τ²) − 1 ≤ τ²/2 with equality in the limit
    assert!((s["K"].as_f64().unwrap() - 0.5).abs() < 0.01);
    assert!(s["residual_duality"].as_f64().unwrap() < 2e-3);
    assert_eq!(header(tmp.path().join("mo/moduli.csv")), "kind,p,dim,arg,value");

    let o = cocycle(tmp.path(), &["renorm", "--vector", "0,1", "--out", "r"]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(tmp.path().join("r/renorm.json"));
    assert_eq!(r["orbit_size"], 8);
    assert!(r["invariance_residual"].as_f64().unwrap() <= 1e-9);
    assert!(r["upper"].as_f64().unwrap() <= 2.0 + 1e-12);

    let o = cocycle(tmp.path(), &["gap", "--out", "g"]);
    assert_eq!(o.status.code(), Some(0));
    let g = json(tmp.path().join("g/gap.json"));
    let z3 = g.as_array().unwrap().iter().find(|e| e["name"] == "z3_regular").unwrap();
    assert!((z3["report"]["complement_norm"].as_f64().unwrap() - 0.5).abs() <= 1e-10);
    assert!((z3["report"]["kappa"].as_f64().unwrap() - 3f64.sqrt()).abs() <= 1e-6);
}
