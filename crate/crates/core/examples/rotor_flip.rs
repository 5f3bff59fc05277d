//! Gluing a rotor to random attachments in both terminal orders.
//!
//! `cargo run --example rotor_flip`

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tutte_forge::constructions::{rotor_flip_pair, TerminalList};
use tutte_forge::multigraph::Multigraph;
use tutte_forge::tutte::t_equivalent;
use tutte_forge::verify::{check_partition_condition, random_attachment};

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for k in 1..=5u32 {
        // A k-cycle of terminals with a pendant path at each, which keeps the rotation.
        let mut edges: Vec<(u32, u32)> = (1..=k).map(|i| (i, i % k + 1)).collect();
        edges.extend((1..=k).map(|i| (i, i + k)));
        if k == 1 {
            edges.remove(0);
        }
        let r = Multigraph::from_edges(1..=2 * k, &edges);
        let rt = TerminalList::of(&r, &(1..=k).collect::<Vec<_>>());

        let w = random_attachment(k as usize, &mut rng);
        let (a, b) = rotor_flip_pair(&rt, &w, false).unwrap();
        let same = t_equivalent(&a, &b);
        let parts = check_partition_condition(&rt, &rt.reversed()).unwrap();
        println!(
            "k = {k}: glued {} + {} edges, T-equivalent: {same}, partition condition: {}",
            r.edge_count(),
            w.graph.edge_count(),
            if parts.passed() { "pass" } else { "fail" }
        );
        assert!(same && parts.passed());
    }
}
