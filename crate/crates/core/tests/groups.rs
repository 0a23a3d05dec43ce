use std::collections::{HashMap, VecDeque};

use cocycle_core::groups::{
    distance_profile, estimate_escape_rate, exact_distance_moments, sample_distance_profiles, sample_walk,
    FreeWord, GroupDescriptor, GroupElement, LampState,
};
use cocycle_core::rng::stream_rng;
use proptest::prelude::*;
use rand::Rng;

/// Breadth-first distances in the Cayley graph, using only the group law.
fn bfs_ball(desc: &GroupDescriptor, radius: u64) -> HashMap<GroupElement, u64> {
    let gens = desc.generators();
    let mut dist = HashMap::from([(desc.identity(), 0)]);
    let mut queue = VecDeque::from([desc.identity()]);
    while let Some(g) = queue.pop_front() {
        let d = dist[&g];
        if d == radius {
            continue;
        }
        for s in &gens {
            let h = g.mul(s).unwrap();
            dist.entry(h.clone()).or_insert_with(|| {
                queue.push_back(h);
                d + 1
            });
        }
    }
    dist
}

#[test]
fn word_length_matches_bfs_in_radius_eight() {
    for desc in [
        GroupDescriptor::free(2).unwrap(),
        GroupDescriptor::free_abelian(2).unwrap(),
        GroupDescriptor::Lamplighter,
    ] {
        let ball = bfs_ball(&desc, 8);
        for (g, d) in &ball {
            assert_eq!(g.word_length(), *d, "{desc}: {g}");
        }
        // every element of the free ball is there: 1 + 4·(3⁸ − 1)/2
        if desc.is_free() {
            assert_eq!(ball.len(), 1 + 2 * (3usize.pow(8) - 1));
        }
    }
}

fn random_element(desc: &GroupDescriptor, rng: &mut impl Rng) -> GroupElement {
    match desc {
        GroupDescriptor::Free { rank } => {
            GroupElement::Free(FreeWord::random(*rank, rng.random_range(0..=50), rng))
        }
        GroupDescriptor::FreeAbelian { dim } => {
            GroupElement::Abelian((0..*dim).map(|_| rng.random_range(-40..=40)).collect())
        }
        GroupDescriptor::Lamplighter => {
            let lamps = (0..rng.random_range(0..8)).map(|_| rng.random_range(-15..=15)).collect();
            GroupElement::Lamplighter(LampState { position: rng.random_range(-15..=15), lamps })
        }
    }
}

#[test]
fn triangle_inequality_and_symmetry() {
    for desc in [
        GroupDescriptor::free(2).unwrap(),
        GroupDescriptor::free(3).unwrap(),
        GroupDescriptor::free_abelian(3).unwrap(),
        GroupDescriptor::Lamplighter,
    ] {
        let mut rng = stream_rng(11, 0);
        for _ in 0..10_000 {
            let g = random_element(&desc, &mut rng);
            let h = random_element(&desc, &mut rng);
            let gh = g.mul(&h).unwrap();
            assert!(gh.word_length() <= g.word_length() + h.word_length());
            assert_eq!(g.inverse().word_length(), g.word_length());
            assert!(g.mul(&g.inverse()).unwrap().is_identity());
        }
    }
}

#[test]
fn documented_products() {
    let f2 = GroupDescriptor::free(2).unwrap();
    let ab: GroupElement = GroupElement::Free("ab".parse().unwrap());
    let ba: GroupElement = GroupElement::Free("Ba".parse().unwrap());
    assert_eq!(f2.multiply(&ab, &ba).unwrap().to_string(), "aa");
    let z2 = GroupDescriptor::free_abelian(2).unwrap();
    let s = z2.multiply(&GroupElement::Abelian(vec![1, 2]), &GroupElement::Abelian(vec![-1, 3])).unwrap();
    assert_eq!(s, GroupElement::Abelian(vec![0, 5]));
    assert_eq!(GroupElement::Abelian(vec![3, -4]).word_length(), 7);
    assert_eq!(GroupElement::Free("abA".parse().unwrap()).word_length(), 3);
    assert!(f2.multiply(&ab, &GroupElement::Abelian(vec![1, 0])).is_err());
}

/// Distances of a free-group walk form a birth–death chain: away from the
/// identity the distance goes up with probability (2k−1)/2k.
#[test]
fn distance_process_up_frequency() {
    for k in [2usize, 3] {
        let desc = GroupDescriptor::free(k).unwrap();
        let (mut up, mut total) = (0u64, 0u64);
        for p in sample_distance_profiles(&desc, 2_000, 50, 5) {
            for w in p.distances.windows(2) {
                if w[0] >= 1 {
                    total += 1;
                    up += u64::from(w[1] > w[0]);
                }
            }
        }
        let freq = up as f64 / total as f64;
        let expected = (2 * k - 1) as f64 / (2 * k) as f64;
        assert!((freq - expected).abs() <= 0.02 * expected, "k={k}: {freq}");
    }
}

#[test]
fn exact_moments_small_cases() {
    let f2 = GroupDescriptor::free(2).unwrap();
    let m = exact_distance_moments(&f2, 4, 1.0).unwrap();
    assert_eq!(m[0], 0.0);
    assert_eq!(m[1], 1.0);
    assert!((m[2] - 1.5).abs() < 1e-15);
    // oracle: enumerate all 4⁴ walks
    let gens = f2.generators();
    let mut total = 0.0;
    for code in 0..256usize {
        let mut g = f2.identity();
        for j in 0..4 {
            g = g.mul(&gens[(code >> (2 * j)) & 3]).unwrap();
        }
        total += g.word_length() as f64;
    }
    assert!((m[4] - total / 256.0).abs() < 1e-14);
    assert!(exact_distance_moments(&GroupDescriptor::free_abelian(1).unwrap(), 4, 1.0).is_err());
}

#[test]
fn abelian_walk_has_vanishing_speed() {
    let z = GroupDescriptor::free_abelian(1).unwrap();
    let small = estimate_escape_rate(&sample_distance_profiles(&z, 100, 400, 1)).unwrap();
    let large = estimate_escape_rate(&sample_distance_profiles(&z, 10_000, 400, 1)).unwrap();
    assert!(large.rate < small.rate);
    assert!(large.rate < 0.02);
}

#[test]
fn degenerate_escape_input() {
    let mut p = distance_profile(&GroupDescriptor::free(2).unwrap(), 100, 0, 0);
    p.distances.iter_mut().for_each(|d| *d = 0);
    let e = estimate_escape_rate(&[p.clone(), p]).unwrap();
    assert_eq!(e.rate, 0.0);
    let q = distance_profile(&GroupDescriptor::free(2).unwrap(), 100, 0, 0);
    assert!(estimate_escape_rate(&[q]).is_err());
}

#[test]
fn trajectories_are_reproducible_walks() {
    let f2 = GroupDescriptor::free(2).unwrap();
    assert_eq!(sample_walk(&f2, 0, 3).steps, vec![f2.identity()]);
    let a = sample_walk(&f2, 500, 9);
    assert_eq!(a, sample_walk(&f2, 500, 9));
    let gens = f2.generators();
    for w in a.steps.windows(2) {
        let step = w[0].inverse().mul(&w[1]).unwrap();
        assert!(gens.contains(&step));
    }
}

proptest! {
    #[test]
    fn reduction_is_idempotent(signed in proptest::collection::vec(
        prop_oneof![-3i32..=-1, 1i32..=3], 0..60)) {
        let w = FreeWord::from_signed(&signed).unwrap();
        let again = FreeWord::from_signed(
            &w.letters().iter().map(|l| l.signed()).collect::<Vec<_>>()).unwrap();
        prop_assert_eq!(&w, &again);
        for pair in w.letters().windows(2) {
            prop_assert_ne!(pair[0], pair[1].inverse());
        }
    }

    #[test]
    fn free_multiplication_is_associative(
        a in proptest::collection::vec(prop_oneof![-2i32..=-1, 1i32..=2], 0..20),
        b in proptest::collection::vec(prop_oneof![-2i32..=-1, 1i32..=2], 0..20),
        c in proptest::collection::vec(prop_oneof![-2i32..=-1, 1i32..=2], 0..20),
    ) {
        let (a, b, c) = (
            FreeWord::from_signed(&a).unwrap(),
            FreeWord::from_signed(&b).unwrap(),
            FreeWord::from_signed(&c).unwrap(),
        );
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
    }

    #[test]
    fn lamplighter_group_law(p in -6i64..6, q in -6i64..6,
        f in proptest::collection::btree_set(-6i64..6, 0..5),
        g in proptest::collection::btree_set(-6i64..6, 0..5)) {
        let x = LampState { position: p, lamps: f };
        let y = LampState { position: q, lamps: g };
        prop_assert_eq!(x.mul(&x.inverse()), LampState::identity());
        prop_assert!(x.mul(&y).word_length() <= x.word_length() + y.word_length());
    }
}
