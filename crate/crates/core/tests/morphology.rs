mod common;

use common::{oracle_dilate, oracle_erode, random_grid, random_padded_grid, union};
use ecpp::{close, dilate, erode, open, BinaryGrid, DiskSE, StructuringElement};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn disk(r: usize) -> DiskSE {
    DiskSE::new(r as f64, 1.0)
}

#[test]
fn dilate_and_erode_match_set_definitions() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for k in 0..100 {
        let a = random_grid(&mut rng, 64, 64, [0.05, 0.3, 0.5, 0.8][k % 4]);
        let se = disk(1 + k % 5);
        assert_eq!(dilate(&a, &se), oracle_dilate(&a, &se), "dilate, grid {k}");
        assert_eq!(erode(&a, &se), oracle_erode(&a, &se), "erode, grid {k}");
    }
}

#[test]
fn asymmetric_elements_match_set_definitions() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let se = StructuringElement::new([(0, 0), (3, 1), (-2, 0), (1, -4), (2, 2)]);
    for _ in 0..20 {
        let a = random_grid(&mut rng, 40, 30, 0.4);
        assert_eq!(dilate(&a, &se), oracle_dilate(&a, &se));
        assert_eq!(erode(&a, &se), oracle_erode(&a, &se));
    }
}

fn arb_grid(w: usize, h: usize) -> impl Strategy<Value = BinaryGrid> {
    prop::collection::vec(any::<bool>(), w * h).prop_map(move |cells| {
        BinaryGrid::from_fn(w, h, 1.0, (0.0, 0.0), |i, j| cells[j * w + i]).unwrap()
    })
}

fn arb_element() -> impl Strategy<Value = StructuringElement> {
    prop::collection::vec((-3isize..=3, -3isize..=3), 1..8).prop_map(StructuringElement::new)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn any_element_matches_set_definitions(a in arb_grid(17, 13), se in arb_element()) {
        prop_assert_eq!(dilate(&a, &se), oracle_dilate(&a, &se));
        prop_assert_eq!(erode(&a, &se), oracle_erode(&a, &se));
    }

    #[test]
    fn dilation_by_union_is_union_of_dilations(
        a in arb_grid(16, 16),
        b1 in arb_element(),
        b2 in arb_element(),
    ) {
        let both = StructuringElement::new(b1.offsets().iter().chain(b2.offsets()).copied());
        prop_assert_eq!(dilate(&a, &both), union(&dilate(&a, &b1), &dilate(&a, &b2)));
    }

    #[test]
    fn opening_is_idempotent_and_anti_extensive(a in arb_grid(20, 20), r in 1usize..4) {
        let se = disk(r);
        let o = open(&a, &se);
        prop_assert!(o.is_subset_of(&a));
        prop_assert_eq!(open(&o, &se), o);
    }
}

/// Foreground stays two radii clear of the border, so the finite window
/// behaves like the plane with background outside.
fn padded_corpus(seed: u64) -> Vec<(BinaryGrid, DiskSE)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..100)
        .map(|k| {
            let r = 1 + k % 5;
            (random_padded_grid(&mut rng, 64, 64, 2 * r, [0.2, 0.5, 0.7][k % 3]), disk(r))
        })
        .collect()
}

#[test]
fn duality() {
    for (a, se) in padded_corpus(3) {
        let lhs = erode(&a, &se).complement();
        let rhs = dilate(&a.complement(), &se.reflect());
        assert_eq!(lhs, rhs);
        let lhs = dilate(&a, &se).complement();
        let rhs = erode(&a.complement(), &se.reflect());
        // the complement is foreground up to the border, where erosion
        // treats the outside as background
        let r = se.extent() as isize;
        for j in r..64 - r {
            for i in r..64 - r {
                assert_eq!(lhs.get((i, j)), rhs.get((i, j)));
            }
        }
    }
}

#[test]
fn monotonicity() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for (a, se) in padded_corpus(5) {
        let r = se.extent();
        let extra = random_padded_grid(&mut rng, 64, 64, 2 * r, 0.1);
        let bigger = union(&a, &extra);
        assert!(dilate(&a, &se).is_subset_of(&dilate(&bigger, &se)));
        assert!(erode(&a, &se).is_subset_of(&erode(&bigger, &se)));
        assert!(open(&a, &se).is_subset_of(&open(&bigger, &se)));
        assert!(close(&a, &se).is_subset_of(&close(&bigger, &se)));
        if r > 1 {
            // growing the element grows dilations and shrinks erosions
            let smaller = disk(r - 1);
            assert!(dilate(&a, &smaller).is_subset_of(&dilate(&a, &se)));
            assert!(erode(&a, &se).is_subset_of(&erode(&a, &smaller)));
        }
    }
}

#[test]
fn opening_and_closing_are_idempotent() {
    for (a, se) in padded_corpus(6) {
        let o = open(&a, &se);
        assert_eq!(open(&o, &se), o);
        let c = close(&a, &se);
        assert_eq!(close(&c, &se), c);
    }
}

#[test]
fn opening_shrinks_and_closing_grows() {
    for (a, se) in padded_corpus(7) {
        assert!(open(&a, &se).is_subset_of(&a));
        assert!(a.is_subset_of(&close(&a, &se)));
        assert!(erode(&a, &se).is_subset_of(&a));
        assert!(a.is_subset_of(&dilate(&a, &se)));
    }
}
