//! Deciding whether two terminal graphs glue equally against every attachment.
//!
//! `cargo run --example gluing_conditions`

use tutte_forge::constructions::{PairSet, TerminalList};
use tutte_forge::multigraph::Multigraph;
use tutte_forge::verify::{
    check_expansion_identity, check_necessary, check_partition_condition, check_subset_condition, random_glue_probe,
};

fn main() {
    // A 4-cycle with terminals at its ends in both orders: always interchangeable.
    let c4 = Multigraph::from_edges(1..=4, &[(1, 2), (2, 3), (3, 4), (4, 1)]);
    let gt = TerminalList::of(&c4, &[1, 2, 3]);
    let ht = TerminalList::of(&c4, &[3, 2, 1]);
    let subsets = check_subset_condition(&gt, &ht).unwrap();
    let parts = check_partition_condition(&gt, &ht).unwrap();
    print!("{subsets}{parts}");
    let probe = random_glue_probe(&gt, &ht, 25, 1).unwrap();
    print!("{probe}");
    assert!(subsets.passed() && parts.passed() && probe.passed());

    // Different terminals on a path: the necessary condition already fails.
    let p3 = Multigraph::from_edges(1..=3, &[(1, 2), (2, 3)]);
    let necessary = check_necessary(&TerminalList::of(&p3, &[1, 2]), &TerminalList::of(&p3, &[1, 3])).unwrap();
    print!("{necessary}");
    assert!(!necessary.passed());

    for s in PairSet::all(3) {
        let v = check_expansion_identity(&gt, &s).unwrap();
        println!("S = {s}: {} partitions contribute", v.contributing_partitions);
    }
}
