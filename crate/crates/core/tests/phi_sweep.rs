//! Exhaustive membership sweep over small connected simple graphs: the arc
//! count of every witness digraph and the end-of-edge rule on every cycle.

mod common;

use std::collections::{BTreeMap, BTreeSet};

use tutte_forge::iso::{automorphisms, canonical_code, CanonicalCode};
use tutte_forge::multigraph::{EdgeId, Multigraph};
use tutte_forge::phigen::{build_psi_digraph, check_dig1, directed_cycles, enumerate_phi_witnesses};

/// One edge per orbit of the automorphism group on edges.
fn edge_orbit_reps(g: &Multigraph) -> Vec<EdgeId> {
    let auts = automorphisms(g).unwrap();
    let mut seen: BTreeSet<(u32, u32)> = BTreeSet::new();
    let mut reps = Vec::new();
    for (e, a, b) in g.edges() {
        if seen.contains(&(a.0, b.0)) {
            continue;
        }
        reps.push(e);
        for m in &auts {
            let (x, y) = (m.apply(a), m.apply(b));
            seen.insert((x.0.min(y.0), x.0.max(y.0)));
        }
    }
    reps
}

#[test]
fn arc_law_and_end_rule_hold_on_small_graphs() {
    let mut groups: BTreeMap<(CanonicalCode, CanonicalCode), Vec<(Multigraph, EdgeId)>> = BTreeMap::new();
    for n in 2..=6 {
        for g in common::connected_simple(n) {
            for e in edge_orbit_reps(&g) {
                let key = (
                    canonical_code(&g.delete_edge(e).unwrap()).unwrap(),
                    canonical_code(&g.contract_edge(e).unwrap().0).unwrap(),
                );
                groups.entry(key).or_default().push((g.clone(), e));
            }
        }
    }

    let (mut witnesses, mut cycles, mut cross_pairs) = (0usize, 0usize, 0usize);
    for members in groups.values() {
        for (i, (g, e)) in members.iter().enumerate() {
            for (h, f) in &members[i..] {
                let all = enumerate_phi_witnesses(g, *e, h, *f).unwrap();
                assert!(!all.is_empty(), "grouped pair without a witness");
                if !std::ptr::eq(g, h) {
                    cross_pairs += 1;
                }
                for w in &all {
                    let d = build_psi_digraph(w);
                    let expected = w.n() + 1 + usize::from(w.merged_to_merged());
                    assert_eq!(d.arcs.len(), expected, "arc law on {}", w.psi);
                    for c in directed_cycles(&d) {
                        check_dig1(w, &c).unwrap();
                        cycles += 1;
                    }
                    witnesses += 1;
                }
            }
        }
    }
    println!("{} groups, {cross_pairs} cross pairs, {witnesses} witnesses, {cycles} cycles", groups.len());
    assert!(cross_pairs > 0);
}

#[test]
fn simple_catalogue_counts() {
    // Connected graphs on 1..=6 vertices: 1, 1, 2, 6, 21, 112.
    let counts: Vec<usize> = (2..=6).map(|n| common::connected_simple(n).len()).collect();
    assert_eq!(counts, vec![1, 2, 6, 21, 112]);
}
