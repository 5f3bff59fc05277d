//! The augmentation catalogue against brute-force enumeration and hand counts.

mod common;

#[test]
fn augmentation_matches_brute_force() {
    for (n, e) in [(2, 4), (3, 4), (4, 3)] {
        assert_eq!(common::catalogue(n, e).len(), common::catalogue_brute(n, e), "n <= {n}, e <= {e}");
    }
}

#[test]
fn hand_counted_small_cases() {
    // Empty graph; one vertex with 0..=2 loops; two vertices with up to 2 edges (1 + 2 + 4).
    assert_eq!(common::catalogue(2, 2).len(), 1 + 3 + 7);
}
