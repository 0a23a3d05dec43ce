use cocycle_core::compression::{
    amenability_verdict, build_eta, estimate_compression, markov_type_ratio, monotone_covariance,
    sample_compression, EtaSample, FitConfig, MarkovConfig, SamplingConfig, Verdict,
};
use cocycle_core::groups::{sample_distance_profiles, GroupDescriptor};
use cocycle_core::repcoc::{from_dense, CocycleSpec, RepSpec};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

fn haagerup() -> CocycleSpec {
    CocycleSpec::haagerup(2).unwrap()
}

#[test]
fn exact_ratio_never_exceeds_one() {
    let cfg =
        MarkovConfig { p: 2.0, n_max: 10_000, samples: 2, seed: 0, checkpoints: Some(vec![1, 10, 10_000]) };
    let r = markov_type_ratio(&haagerup(), &cfg).unwrap();
    assert_eq!(r.points[0].exact_ratio, Some(1.0));
    assert_eq!(r.points[0].ratio, 1.0);
    for p in &r.points {
        assert!(p.exact_ratio.unwrap() <= 1.0);
    }
}

#[test]
fn monte_carlo_ratio_tracks_the_chain() {
    let cfg = MarkovConfig {
        p: 2.0,
        n_max: 200,
        samples: 2_000,
        seed: 3,
        checkpoints: Some(vec![2, 5, 20, 50, 200]),
    };
    for p in markov_type_ratio(&haagerup(), &cfg).unwrap().points {
        let exact = p.exact_ratio.unwrap();
        assert!((p.ratio - exact).abs() <= 3.0 * p.stderr, "n={}: {} vs {exact}", p.n, p.ratio);
    }
    // p < 2 uses the fractional moments of the chain
    let cfg = MarkovConfig { p: 1.5, ..cfg };
    for p in markov_type_ratio(&haagerup(), &cfg).unwrap().points {
        let exact = p.exact_ratio.unwrap();
        assert!((p.ratio - exact).abs() <= 3.0 * p.stderr + 1e-12);
    }
}

#[test]
fn bounded_cocycle_has_vanishing_ratio() {
    let c3 = DMatrix::from_row_slice(3, 3, &[0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0]);
    let rep = RepSpec::matrix(GroupDescriptor::free(1).unwrap(), vec![c3], None).unwrap();
    let c = CocycleSpec::coboundary(rep, from_dense(&DVector::from_vec(vec![1.0, 0.0, -1.0]))).unwrap();
    let cfg =
        MarkovConfig { p: 2.0, n_max: 1_000, samples: 200, seed: 1, checkpoints: Some(vec![10, 1_000]) };
    let r = markov_type_ratio(&c, &cfg).unwrap();
    assert!(r.points[1].ratio < r.points[0].ratio);
    assert!(r.points[1].ratio < 0.01);
    assert!(r.points[0].exact_ratio.is_none());
}

#[test]
fn monotone_functions_of_the_distance_are_positively_correlated() {
    let f2 = GroupDescriptor::free(2).unwrap();
    let xs: Vec<f64> =
        sample_distance_profiles(&f2, 100, 10_000, 8).iter().map(|p| p.final_distance() as f64).collect();
    type Map = fn(f64) -> f64;
    let pairs: [(Map, Map); 3] = [
        (|x| x, |x| x * x),
        (|x| x.sqrt(), |x| x.min(50.0)),
        (|x| f64::from(u8::from(x > 40.0)), |x| (x / 10.0).exp()),
    ];
    for (f, g) in pairs {
        let c = monotone_covariance(&xs, f, g);
        assert!(c.mean >= -3.0 * c.stderr, "{} ± {}", c.mean, c.stderr);
    }
}

fn fit_small(c: &CocycleSpec, samples: usize, seed: u64) -> cocycle_core::compression::CompressionReport {
    let cfg = SamplingConfig { samples, r_min: 10, r_max: 2_000, walk_fraction: None, seed };
    let fit = FitConfig { r_max: 2_000.0, ..FitConfig::default() };
    estimate_compression(&sample_compression(c, &cfg).unwrap(), &fit).unwrap()
}

#[test]
fn envelope_slope_is_below_mean_slope() {
    let c3 = CocycleSpec::haagerup(3).unwrap();
    let hom = CocycleSpec::identity_homomorphism(2).unwrap();
    for (c, seed) in [(haagerup(), 1), (haagerup(), 2), (c3, 3), (hom, 4)] {
        let r = fit_small(&c, 20_000, seed);
        assert!(r.alpha_envelope <= r.alpha_mean + 2.0 * r.mean_stderr);
        assert!(r.buckets.windows(2).all(|w| w[0].radius < w[1].radius));
    }
}

#[test]
fn homomorphism_into_trivial_rep_has_exponent_one() {
    let r = fit_small(&CocycleSpec::identity_homomorphism(3).unwrap(), 20_000, 5);
    assert!((r.alpha_envelope - 1.0).abs() <= 0.02);
    assert_eq!(r.walk_samples, 0);
    let v = amenability_verdict(r.alpha_envelope, r.envelope_stderr, 2.0, false);
    assert_eq!(v, Verdict::Consistent);
}

#[test]
fn free_group_is_never_flagged() {
    let r = fit_small(&haagerup(), 20_000, 6);
    assert_eq!(amenability_verdict(r.alpha_envelope, r.envelope_stderr, 2.0, true), Verdict::Consistent);
    assert_eq!(amenability_verdict(0.8, 0.01, 2.0, true), Verdict::Inconsistent);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn eta_is_monotone_feasible_and_maximal(
        raw in proptest::collection::vec((1u64..40, 0.01f64..10.0, 0.0f64..10.0), 1..120)
    ) {
        let samples: Vec<EtaSample> =
            raw.iter().map(|&(radius, f, h)| EtaSample { radius, f, h }).collect();
        let eta = build_eta(&samples, None).unwrap();
        prop_assert!(eta.values.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(eta.breakpoints.windows(2).all(|w| w[0] < w[1]));
        for s in &samples {
            prop_assert!(s.f * eta.value_at(s.radius) <= s.h * (1.0 + 1e-12));
        }
        // raising η at a breakpoint (and, to stay monotone, after it) breaks
        // the constraint on some sample at or beyond that radius
        for (i, &r) in eta.breakpoints.iter().enumerate() {
            let raised = eta.values[i] + 1e-9;
            let violated = samples
                .iter()
                .filter(|s| s.radius >= r)
                .any(|s| s.f * raised.max(eta.value_at(s.radius)) > s.h);
            prop_assert!(violated);
        }
    }
}
