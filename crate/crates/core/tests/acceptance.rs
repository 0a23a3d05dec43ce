//! Acceptance gate: runs every criterion and prints one PASS/FAIL line each.
//!
//! `cargo test -p cocycle-core --test acceptance -- --nocapture`

use std::time::{Duration, Instant};

use cocycle_core::compression::{
    build_eta, estimate_compression, markov_type_ratio, sample_compression, EtaSample, FitConfig,
    MarkovConfig, SamplingConfig,
};
use cocycle_core::groups::{
    estimate_escape_rate, exact_distance_moments, mean_distance_curve, sample_distance_profiles, FreeWord,
    GroupDescriptor, GroupElement,
};
use cocycle_core::moduli::{
    lindenstrauss_dual, modulus_convexity, modulus_smoothness, InvariantNorm, NormSpec, SearchConfig,
};
use cocycle_core::radial::{
    convergence_ratio, growth_exponent, ode_residual, solve_psi, Field, ForcingProfile, RankOneSpace,
};
use cocycle_core::repcoc::{check_cocycle_identity, from_dense, CocycleSpec, RepSpec};
use cocycle_core::rng::stream_rng;
use cocycle_core::spectral::{builtin_gallery, gap_norm, harmonize, kazhdan_constant};
use cocycle_core::Error;
use nalgebra::{DMatrix, DVector};
use rand::Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn free2() -> GroupDescriptor {
    GroupDescriptor::free(2).unwrap()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let c = CocycleSpec::haagerup(2).unwrap();
    let samples = sample_compression(&c, &SamplingConfig::default()).unwrap();
    let r = estimate_compression(&samples, &FitConfig::default()).unwrap();
    let elapsed = start.elapsed();
    let pass = (r.alpha_envelope - 0.5).abs() <= 0.02 && elapsed <= Duration::from_secs(60);
    outcome(
        pass,
        format!(
            "alpha_envelope = {:.4} ± {:.1e} on {} samples in {:.1?}",
            r.alpha_envelope,
            r.envelope_stderr,
            samples.len(),
            elapsed
        ),
    )
}

fn criterion_2() -> Outcome {
    let f2 = free2();
    let profiles = sample_distance_profiles(&f2, 10_000, 1_000, 2024);
    let est = estimate_escape_rate(&profiles).unwrap();
    let rate_ok = (est.rate - 0.5).abs() <= 0.01 * 0.5;
    let exact = exact_distance_moments(&f2, 1_000, 1.0).unwrap();
    let curve = mean_distance_curve(&profiles);
    let mut worst = 0.0f64;
    let mut misses = 0;
    for n in 0..=1_000 {
        let (m, e) = (&curve[n], exact[n]);
        let dev = (m.mean - e).abs();
        if m.stderr == 0.0 {
            misses += usize::from(dev > 1e-12);
        } else {
            worst = worst.max(dev / m.stderr);
            misses += usize::from(dev > 3.0 * m.stderr);
        }
    }
    outcome(
        rate_ok && misses == 0,
        format!(
            "escape rate {:.5} (stderr {:.1e}) vs 0.5; max |MC − exact|/SE over n ≤ 1000 = {worst:.2}",
            est.rate, est.stderr
        ),
    )
}

fn criterion_3() -> Outcome {
    let c = CocycleSpec::haagerup(2).unwrap();
    let exact_run = MarkovConfig { p: 2.0, n_max: 10_000, samples: 2, seed: 0, checkpoints: None };
    let exact = markov_type_ratio(&c, &exact_run).unwrap();
    let ratios: Vec<f64> = exact.points.iter().map(|p| p.exact_ratio.unwrap()).collect();
    let bounded = ratios.iter().all(|r| *r <= 1.0) && ratios[0] == 1.0;
    // every n ≤ 10³, then log-spaced up to 10⁴
    let mut checkpoints: Vec<usize> = (1..=1_000).collect();
    checkpoints.extend((31..=40).map(|i| 10f64.powf(i as f64 / 10.0).round() as usize));
    let mc_run = MarkovConfig {
        p: 2.0,
        n_max: 10_000,
        samples: 2_000,
        seed: 7,
        checkpoints: Some(checkpoints.clone()),
    };
    let mc = markov_type_ratio(&c, &mc_run).unwrap();
    let mut worst = 0.0f64;
    let mut agree = true;
    for p in &mc.points {
        let e = p.exact_ratio.unwrap();
        let dev = (p.ratio - e).abs();
        if p.stderr > 0.0 {
            worst = worst.max(dev / p.stderr);
        }
        agree &= dev <= 3.0 * p.stderr + 1e-12;
    }
    outcome(
        bounded && agree,
        format!(
            "max exact ratio {:.6} over n ≤ 10⁴ (n=1: {}); MC at {} checkpoints, max |dev|/SE = {worst:.2}",
            ratios.iter().copied().fold(0.0, f64::max),
            ratios[0],
            checkpoints.len()
        ),
    )
}

fn criterion_4() -> Outcome {
    let search = SearchConfig::default();
    let l2 = NormSpec::new(2.0, 2).unwrap();
    let eps: Vec<f64> = (1..=200).map(|i| i as f64 / 100.0).collect();
    let delta = modulus_convexity(&l2, &eps, &search).unwrap();
    let delta_err = delta
        .points
        .iter()
        .map(|p| (p.value - (1.0 - (1.0 - p.arg * p.arg / 4.0).sqrt())).abs())
        .fold(0.0, f64::max);
    let taus: Vec<f64> = (1..=200).map(|i| i as f64 / 100.0).collect();
    let rho = modulus_smoothness(&l2, &taus, &search).unwrap();
    let rho_err =
        rho.points.iter().map(|p| (p.value - ((1.0 + p.arg * p.arg).sqrt() - 1.0)).abs()).fold(0.0, f64::max);

    let l1 = NormSpec::new(1.0, 2).unwrap();
    let w = &modulus_convexity(&l1, &[1.0], &search).unwrap().points[0];
    let diff: Vec<f64> = w.u.iter().zip(&w.v).map(|(a, b)| a - b).collect();
    let sum: Vec<f64> = w.u.iter().zip(&w.v).map(|(a, b)| a + b).collect();
    let l1_norm = |x: &[f64]| x.iter().map(|c| c.abs()).sum::<f64>();
    let witness_ok = w.value == 0.0
        && l1_norm(&w.u) <= 1.0 + 1e-12
        && l1_norm(&w.v) <= 1.0 + 1e-12
        && l1_norm(&diff) >= 1.0 - 1e-12
        && l1_norm(&sum) >= 2.0 - 1e-12;

    let tau_dual: Vec<f64> = (1..=20).map(|i| i as f64 / 20.0).collect();
    let mut residuals = Vec::new();
    for p in [1.5, 2.0, 3.0] {
        let x = NormSpec::new(p, 2).unwrap();
        let dual = modulus_convexity(&x.dual(), &eps, &search).unwrap();
        let direct = modulus_smoothness(&x, &tau_dual, &search).unwrap();
        let rep = lindenstrauss_dual(&dual, &tau_dual, Some(&direct)).unwrap();
        residuals.push(rep.residual.unwrap());
    }
    let pass = delta_err <= 1e-4 && rho_err <= 1e-4 && witness_ok && residuals.iter().all(|r| *r <= 2e-3);
    outcome(
        pass,
        format!(
            "ℓ₂ δ err {delta_err:.1e}, ρ err {rho_err:.1e}; ℓ₁ δ(1) = {} witness u={:?} v={:?}; duality residuals {:.1e}/{:.1e}/{:.1e} (p = 1.5/2/3)",
            w.value, w.u, w.v, residuals[0], residuals[1], residuals[2]
        ),
    )
}

fn criterion_5() -> Outcome {
    let t = std::f64::consts::FRAC_PI_4;
    let r = DMatrix::from_row_slice(2, 2, &[t.cos(), -t.sin(), t.sin(), t.cos()]);
    let d = DMatrix::from_diagonal(&DVector::from_vec(vec![2.0, 1.0]));
    let di = DMatrix::from_diagonal(&DVector::from_vec(vec![0.5, 1.0]));
    let g = &d * r * &di;
    let norm = InvariantNorm::new(NormSpec::new(2.0, 2).unwrap(), vec![g], None, 0, 0).unwrap();
    let mut rng = stream_rng(5, 0);
    let mut vec2 = || [rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0)];
    let mut residual = 0.0f64;
    let mut axioms = true;
    for _ in 0..1_000 {
        let (x, y) = (vec2(), vec2());
        residual = residual.max(norm.invariance_residual(&x));
        let s = [x[0] + y[0], x[1] + y[1]];
        axioms &= norm.renorm(&s) <= norm.renorm(&x) + norm.renorm(&y) + 1e-9;
        let c = y[0];
        axioms &= (norm.renorm(&[c * x[0], c * x[1]]) - c.abs() * norm.renorm(&x)).abs()
            <= 1e-9 * (1.0 + norm.renorm(&x) * c.abs());
        axioms &= norm.renorm(&x) > 0.0;
    }
    axioms &= norm.renorm(&[0.0, 0.0]) == 0.0;
    let eq = norm.equivalence();
    let constants_ok = eq.lower >= 0.5 && eq.upper <= 2.0 + 1e-12;
    outcome(
        residual <= 1e-9 && constants_ok && axioms,
        format!(
            "orbit {}, invariance residual {residual:.1e}, constants [{}, {}], axioms on 10³ pairs: {axioms}",
            norm.orbit_size(),
            eq.lower,
            eq.upper
        ),
    )
}

fn criterion_6() -> Outcome {
    let gallery = builtin_gallery().unwrap();
    let z3 = gallery.iter().find(|e| e.name == "z3_regular").unwrap();
    let report = gap_norm(&z3.rep, &z3.measure).unwrap();
    let q: Vec<FreeWord> = vec!["a".parse().unwrap(), "A".parse().unwrap()];
    let kappa = kazhdan_constant(&z3.rep, &q).unwrap().kappa;
    let norm_ok = (report.complement_norm - 0.5).abs() <= 1e-10;
    let kappa_ok = (kappa - 3f64.sqrt()).abs() <= 1e-6;

    let mut rng = stream_rng(6, 0);
    let mut cob_ok = true;
    let mut idem_ok = true;
    let (mut harmonized, mut refused) = (0, 0);
    for ex in &gallery {
        let n = ex.rep.dim().unwrap();
        let rank = match ex.rep.group() {
            GroupDescriptor::Free { rank } => *rank,
            _ => unreachable!(),
        };
        let mut random = || from_dense(&DVector::from_fn(n, |_, _| rng.random_range(-1.0..1.0)));
        let cob = CocycleSpec::coboundary(ex.rep.clone(), random()).unwrap();
        let gen =
            CocycleSpec::generator_values(ex.rep.clone(), (0..rank).map(|_| random()).collect()).unwrap();
        for (is_cob, b) in [(true, cob), (false, gen)] {
            match harmonize(&b, &ex.measure) {
                Ok(h) => {
                    harmonized += 1;
                    if is_cob {
                        let zero = (0..rank).all(|s| {
                            h.cocycle.slot_value(2 * s).norm() <= 1e-10
                                && h.cocycle.slot_value(2 * s + 1).norm() <= 1e-10
                        });
                        cob_ok &= zero && h.residual <= 1e-10;
                    }
                    let again = harmonize(&h.cocycle, &ex.measure).unwrap();
                    idem_ok &= DVector::from_vec(again.x1).norm() <= 1e-10;
                }
                Err(Error::NoSpectralGap { .. } | Error::InvariantDrift(_)) => refused += 1,
                Err(e) => {
                    idem_ok = false;
                    eprintln!("{}: {e}", ex.name);
                }
            }
        }
    }
    outcome(
        norm_ok && kappa_ok && cob_ok && idem_ok,
        format!(
            "ℤ/3 complement norm {:.12}, κ = {kappa:.9}; {harmonized} cocycles harmonized ({refused} refused by precondition), coboundaries → 0: {cob_ok}, idempotent: {idem_ok}",
            report.complement_norm
        ),
    )
}

fn criterion_7() -> Outcome {
    let one = ForcingProfile::constant(1.0).unwrap();
    let mut lines = Vec::new();
    let mut pass = true;

    let real = solve_psi(&RankOneSpace::presets()[0], &one, 20.0, 1e-3).unwrap();
    let tanh_err =
        real.grid.iter().zip(&real.psi).map(|(r, p)| (p - 2.0 * (r / 2.0).tanh()).abs()).fold(0.0, f64::max);
    pass &= tanh_err <= 1e-6;
    lines.push(format!("2tanh(r/2) err {tanh_err:.1e}"));

    let h = RankOneSpace::new(Field::H, 2).unwrap();
    let quat = solve_psi(&h, &one, 20.0, 1e-3).unwrap();
    let limit_err = (quat.psi_near(20.0) - 0.2).abs();
    pass &= limit_err <= 1e-3;
    lines.push(format!("|ψ_H(20) − 0.2| = {limit_err:.1e}"));

    for space in RankOneSpace::presets() {
        let start = Instant::now();
        let sol = solve_psi(&space, &one, 500.0, 1e-3).unwrap();
        let slope = growth_exponent(&sol).unwrap().slope;
        let residual = ode_residual(&sol, &one, 1e-3).unwrap();
        let ratio = convergence_ratio(&space, &one, 20.0, 1e-2).unwrap();
        let elapsed = start.elapsed();
        let ok = (slope - 0.5).abs() <= 0.01
            && residual <= 1e-4
            && (3.5..=4.5).contains(&ratio)
            && elapsed <= Duration::from_secs(10);
        pass &= ok;
        lines.push(format!(
            "{}: slope {slope:.4}, residual {residual:.1e}, halving ratio {ratio:.3}, {elapsed:.1?}",
            space.field()
        ));
    }
    outcome(pass, lines.join("; "))
}

fn criterion_8() -> Outcome {
    let mut rng = stream_rng(8, 0);
    let c = CocycleSpec::haagerup(2).unwrap();
    let word = |rng: &mut rand_chacha::ChaCha8Rng| {
        GroupElement::Free(FreeWord::random(2, rng.random_range(0..30), rng))
    };
    let pairs: Vec<_> = (0..10_000).map(|_| (word(&mut rng), word(&mut rng))).collect();
    let haagerup_res = check_cocycle_identity(&c, &pairs).unwrap().abs();
    let rot = |t: f64| DMatrix::from_row_slice(2, 2, &[t.cos(), -t.sin(), t.sin(), t.cos()]);
    let rep = RepSpec::matrix(free2(), vec![rot(0.7), rot(2.3)], None).unwrap();
    let v = |rng: &mut rand_chacha::ChaCha8Rng| {
        from_dense(&DVector::from_vec(vec![rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)]))
    };
    let gv = CocycleSpec::generator_values(rep, vec![v(&mut rng), v(&mut rng)]).unwrap();
    let matrix_res = check_cocycle_identity(&gv, &pairs).unwrap();

    let mut eta_ok = true;
    for _ in 0..500 {
        let k = rng.random_range(1..100);
        let samples: Vec<EtaSample> = (0..k)
            .map(|_| EtaSample {
                radius: rng.random_range(1..50),
                f: rng.random_range(0.01..10.0),
                h: rng.random_range(0.0..10.0),
            })
            .collect();
        let eta = build_eta(&samples, None).unwrap();
        eta_ok &= eta.values.windows(2).all(|w| w[0] <= w[1]);
        eta_ok &= samples.iter().all(|s| s.f * eta.value_at(s.radius) <= s.h * (1.0 + 1e-12));
        for (i, &r) in eta.breakpoints.iter().enumerate() {
            let raised = eta.values[i] + 1e-9;
            eta_ok &= samples
                .iter()
                .filter(|s| s.radius >= r)
                .any(|s| s.f * raised.max(eta.value_at(s.radius)) > s.h);
        }
    }
    outcome(
        haagerup_res <= 1e-9 && matrix_res <= 1e-9 && eta_ok,
        format!(
            "cocycle identity residual {haagerup_res:.1e} (Haagerup), {matrix_res:.1e} (rotations) on 10⁴ pairs; η monotone/feasible/maximal on 500 random inputs: {eta_ok}"
        ),
    )
}

type Criterion = fn() -> Outcome;

#[test]
fn acceptance() {
    let start = Instant::now();
    let criteria: [(&str, Criterion); 8] = [
        ("compression exponent of the Haagerup cocycle", criterion_1),
        ("escape rate against the exact chain", criterion_2),
        ("Markov-type ratio", criterion_3),
        ("moduli closed forms and duality", criterion_4),
        ("invariant renorming", criterion_5),
        ("spectral-gap gallery and harmonization", criterion_6),
        ("radial ODE", criterion_7),
        ("property suites", criterion_8),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = run();
        let status = if o.pass { "PASS" } else { "FAIL" };
        println!("[{status}] {}. {name} ({:.1?}): {}", i + 1, t.elapsed(), o.detail);
        if !o.pass {
            failed.push(i + 1);
        }
    }
    let total = start.elapsed();
    println!("acceptance total {total:.1?} (limit 5 min)");
    assert!(total <= Duration::from_secs(300), "acceptance took {total:?}");
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
