//! Isomorphism search, automorphism groups and canonical codes.
//!
//! `cargo run --example isomorphism`

use tutte_forge::iso::{automorphisms, canonical_code, check_cyclic_orbit, find_isomorphism, VertexMapping};
use tutte_forge::multigraph::{Multigraph, VertexId};

fn main() {
    let c5 = Multigraph::from_edges(1..=5, &[(1, 2), (2, 3), (3, 4), (4, 5), (5, 1)]);
    let shuffled = c5.relabel(|v| VertexId((v.0 * 2) % 5 + 10));
    let m = find_isomorphism(&c5, &shuffled).unwrap().expect("relabelled cycle");
    println!("C5 -> relabelled C5: {m}");
    assert!(m.is_isomorphism(&c5, &shuffled));
    assert_eq!(canonical_code(&c5).unwrap(), canonical_code(&shuffled).unwrap());

    let group = automorphisms(&c5).unwrap();
    println!("|Aut(C5)| = {}", group.len());

    let ws: Vec<VertexId> = (1..=5).map(VertexId).collect();
    let xi: VertexMapping = check_cyclic_orbit(&c5, &ws).unwrap().expect("rotation");
    println!("rotation: {xi} (order {})", xi.order());

    // A doubled edge breaks the rotation.
    let mut lopsided = c5.clone();
    lopsided.add_edge(VertexId(1), VertexId(2)).unwrap();
    assert!(check_cyclic_orbit(&lopsided, &ws).unwrap().is_none());
    assert!(find_isomorphism(&c5, &lopsided).unwrap().is_none());
    println!("C5 plus a parallel edge: no cyclic orbit, not isomorphic to C5");
}
