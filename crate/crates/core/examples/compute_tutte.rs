//! Tutte polynomials by both engines, with engine counters and evaluations.
//!
//! `cargo run --example compute_tutte`

use tutte_forge::bipoly::BiPoly;
use tutte_forge::multigraph::Multigraph;
use tutte_forge::tutte::{spanning_tree_count, tutte_dc_with_stats, tutte_subset_expansion, EngineConfig, MemoCache};

fn main() {
    let k4 = Multigraph::from_edges(1..=4, &[(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]);
    let theta = Multigraph::from_edges([1, 2], &[(1, 2), (1, 2), (1, 2), (1, 1)]);
    let petersen = Multigraph::from_edges(
        0..10,
        &[
            (0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 5), (1, 6), (2, 7), (3, 8), (4, 9),
            (5, 7), (7, 9), (9, 6), (6, 8), (8, 5),
        ],
    );

    for (name, g) in [("K4", &k4), ("theta with a loop", &theta), ("Petersen", &petersen)] {
        let (t, stats) = tutte_dc_with_stats(g, &EngineConfig::default(), &MemoCache::new());
        println!("{name}: {t}");
        println!("  T(1,1) = {} spanning trees", t.evaluate_int(1, 1));
        println!("  T(2,2) = {} = 2^{}", t.evaluate_int(2, 2), g.edge_count());
        println!("  {} recursion nodes, {} cache hits", stats.recursion_nodes, stats.cache_hits);
        if g.edge_count() <= 16 {
            assert_eq!(tutte_subset_expansion(g).unwrap(), t);
            assert_eq!(spanning_tree_count(g).unwrap(), t.evaluate_int(1, 1));
        }
    }

    let parsed: BiPoly = "x^3 + 3*x^2 + 2*x + 4*x*y + 2*y + 3*y^2 + y^3".parse().unwrap();
    let (t, _) = tutte_dc_with_stats(&k4, &EngineConfig::default(), &MemoCache::new());
    assert_eq!(parsed, t);

    // Single-task results match a four-task run exactly.
    let parallel = EngineConfig::default().with_parallel_tasks(4);
    let (tp, _) = tutte_dc_with_stats(&petersen, &parallel, &MemoCache::new());
    let (ts, _) = tutte_dc_with_stats(&petersen, &EngineConfig::default(), &MemoCache::new());
    assert_eq!(tp, ts);
}
