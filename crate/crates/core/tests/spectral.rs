use cocycle_core::groups::{FreeWord, GroupElement};
use cocycle_core::linalg::max_abs_diff;
use cocycle_core::repcoc::{check_cocycle_identity, from_dense, CocycleSpec, RepSpec};
use cocycle_core::rng::stream_rng;
use cocycle_core::spectral::{
    average_over_subgroup, builtin_gallery, gap_norm, harmonize, invariant_decomposition, kazhdan_constant,
    markov_operator, FiniteMeasure,
};
use cocycle_core::Error;
use nalgebra::DVector;
use rand::Rng;

fn gallery_rep(name: &str) -> RepSpec {
    builtin_gallery().unwrap().into_iter().find(|e| e.name == name).unwrap().rep
}

fn random_measure(rng: &mut impl Rng, rank: usize) -> FiniteMeasure {
    let k = rng.random_range(1..6);
    let support: Vec<FreeWord> =
        (0..k).map(|_| FreeWord::random(rank, rng.random_range(0..4), rng)).collect();
    let w: Vec<f64> = (0..k).map(|_| rng.random_range(0.1..1.0)).collect();
    let total: f64 = w.iter().sum();
    let mut w: Vec<f64> = w.iter().map(|x| x / total).collect();
    // absorb rounding so the weights sum to 1 within 1e-12
    let drift = 1.0 - w.iter().sum::<f64>();
    w[0] += drift;
    FiniteMeasure::new(support, w).unwrap()
}

#[test]
fn markov_operator_is_affine_in_the_measure() {
    let rep = gallery_rep("f2_rotations6");
    let mut rng = stream_rng(51, 0);
    for _ in 0..50 {
        let (m1, m2) = (random_measure(&mut rng, 2), random_measure(&mut rng, 2));
        let mix = m1.mix(&m2, 0.5).unwrap();
        let lhs = markov_operator(&rep, &mix).unwrap();
        let rhs = (markov_operator(&rep, &m1).unwrap() + markov_operator(&rep, &m2).unwrap()) * 0.5;
        assert!(max_abs_diff(&lhs, &rhs) < 1e-12);
        // ‖π(μ)‖ ≤ M
        let norm = lhs.singular_values().max();
        assert!(norm <= rep.uniform_bound() + 1e-12);
    }
    let e = markov_operator(&rep, &FiniteMeasure::dirac()).unwrap();
    assert_eq!(e, nalgebra::DMatrix::identity(6, 6));
}

#[test]
fn cyclic_spectrum_from_eigenvalue_oracle() {
    // eigenvalues of (C + C⁻¹)/2 on the 3-cycle are cos(2πj/3)
    let rep = gallery_rep("z3_regular");
    let m = markov_operator(&rep, &FiniteMeasure::simple(1).unwrap()).unwrap();
    let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    let mut oracle: Vec<f64> = (0..3).map(|j| (std::f64::consts::TAU * j as f64 / 3.0).cos()).collect();
    oracle.sort_by(f64::total_cmp);
    for (a, b) in ev.iter().zip(&oracle) {
        assert!((a - b).abs() < 1e-12);
    }
    let r = gap_norm(&rep, &FiniteMeasure::simple(1).unwrap()).unwrap();
    let second = oracle[..2].iter().map(|x| x.abs()).fold(0.0, f64::max);
    assert!((r.complement_norm - second).abs() <= 1e-10);
    let k = kazhdan_constant(&rep, &["a".parse().unwrap(), "A".parse().unwrap()]).unwrap();
    // |ω − 1| for a primitive cube root of unity
    let omega = (std::f64::consts::TAU / 3.0).cos() - 1.0;
    let oracle_kappa = (omega * omega + (std::f64::consts::TAU / 3.0).sin().powi(2)).sqrt();
    assert!((k.kappa - oracle_kappa).abs() <= 1e-6);
    assert!(k.lower_bound <= k.kappa + 1e-12);
    let trivial_q = kazhdan_constant(&rep, &[FreeWord::identity()]).unwrap();
    assert!(trivial_q.kappa.abs() < 1e-12);
}

#[test]
fn projections_commute_with_the_group() {
    for ex in builtin_gallery().unwrap() {
        let dec = invariant_decomposition(&ex.rep).unwrap();
        let p = &dec.projection;
        assert!(max_abs_diff(&(p * p), p) <= 1e-10, "{}", ex.name);
        for g in ex.rep.generator_images() {
            assert!(max_abs_diff(&(&g * p), &(p * &g)) <= 1e-10, "{}", ex.name);
        }
        assert_eq!(dec.invariant_dim() + dec.complement_dim(), p.nrows());
    }
    let rep = gallery_rep("z3_regular");
    let all: Vec<FreeWord> = ["e", "a", "aa"].iter().map(|w| w.parse().unwrap()).collect();
    let p = average_over_subgroup(&rep, &all).unwrap();
    let dec = invariant_decomposition(&rep).unwrap();
    assert!(max_abs_diff(&p, &dec.projection) <= 1e-12);
    for k in &all {
        let m = rep.matrix_of(&GroupElement::Free(k.clone())).unwrap();
        assert!(max_abs_diff(&(&m * &p), &(&p * &m)) <= 1e-10);
    }
}

#[test]
fn no_invariant_vectors_means_positive_kazhdan_constant() {
    for ex in builtin_gallery().unwrap() {
        let r = gap_norm(&ex.rep, &ex.measure).unwrap();
        if let Some(k) = &r.kazhdan {
            assert_eq!(r.gap_present, k.kappa > 1e-9, "{}", ex.name);
        }
        if r.invariant_dim == 0 && ex.measure.support().len() > 1 {
            assert!(r.kazhdan.unwrap().kappa > 0.0, "{}", ex.name);
        }
    }
}

#[test]
fn random_cocycle_on_rank_two_harmonizes() {
    let rep = gallery_rep("f2_rotations6");
    let mut rng = stream_rng(52, 0);
    let v = |rng: &mut rand_chacha::ChaCha8Rng| {
        from_dense(&DVector::from_fn(6, |_, _| rng.random_range(-1.0..1.0)))
    };
    let b = CocycleSpec::generator_values(rep, vec![v(&mut rng), v(&mut rng)]).unwrap();
    let mu = FiniteMeasure::simple(2).unwrap();
    let h = harmonize(&b, &mu).unwrap();
    assert!(h.residual <= 1e-10);
    let pairs: Vec<_> = (0..200)
        .map(|_| {
            (
                GroupElement::Free(FreeWord::random(2, rng.random_range(0..20), &mut rng)),
                GroupElement::Free(FreeWord::random(2, rng.random_range(0..20), &mut rng)),
            )
        })
        .collect();
    assert!(check_cocycle_identity(&h.cocycle, &pairs).unwrap() <= 1e-9);
    let again = harmonize(&h.cocycle, &mu).unwrap();
    assert!(DVector::from_vec(again.x1).norm() <= 1e-10);
}

#[test]
fn harmonize_is_idempotent_across_the_gallery() {
    let mut rng = stream_rng(53, 0);
    for ex in builtin_gallery().unwrap() {
        let n = ex.rep.dim().unwrap();
        let rank = match ex.rep.group() {
            cocycle_core::groups::GroupDescriptor::Free { rank } => *rank,
            _ => unreachable!(),
        };
        let values =
            (0..rank).map(|_| from_dense(&DVector::from_fn(n, |_, _| rng.random_range(-1.0..1.0)))).collect();
        let v = from_dense(&DVector::from_fn(n, |_, _| rng.random_range(-1.0..1.0)));
        let cob = CocycleSpec::coboundary(ex.rep.clone(), v).unwrap();
        let gen = CocycleSpec::generator_values(ex.rep.clone(), values).unwrap();
        for b in [cob, gen] {
            match harmonize(&b, &ex.measure) {
                Ok(h) => {
                    assert!(h.residual <= 1e-10, "{}", ex.name);
                    let again = harmonize(&h.cocycle, &ex.measure).unwrap();
                    assert!(DVector::from_vec(again.x1).norm() <= 1e-10, "{}", ex.name);
                }
                // refusals are only legitimate without a gap or with drift in
                // the invariant directions
                Err(Error::NoSpectralGap { .. }) => assert_eq!(ex.name, "z3_dirac"),
                Err(Error::InvariantDrift(_)) => {}
                Err(e) => panic!("{}: {e}", ex.name),
            }
        }
    }
}

#[test]
fn coboundaries_harmonize_to_zero() {
    let mut rng = stream_rng(54, 0);
    for name in ["z3_regular", "z3_plus_trivial", "z3_conjugated", "f2_rotations6"] {
        let ex = builtin_gallery().unwrap().into_iter().find(|e| e.name == name).unwrap();
        let n = ex.rep.dim().unwrap();
        let v = from_dense(&DVector::from_fn(n, |_, _| rng.random_range(-1.0..1.0)));
        let b = CocycleSpec::coboundary(ex.rep.clone(), v).unwrap();
        let h = harmonize(&b, &ex.measure).unwrap();
        assert!(h.residual <= 1e-10);
        for w in ["a", "A", "aa", "aA"] {
            let g = GroupElement::Free(w.parse().unwrap());
            assert!(h.cocycle.evaluate(&g).unwrap().norm() <= 1e-10, "{name} {w}");
        }
    }
}
