//! Twisting one side of a 2-vertex cut keeps the Tutte polynomial.
//!
//! `cargo run --example whitney_twist`

use std::collections::BTreeSet;

use tutte_forge::constructions::whitney_twist;
use tutte_forge::corpus::{whitney_g, whitney_g_prime};
use tutte_forge::iso::Iso;
use tutte_forge::multigraph::VertexId;
use tutte_forge::tutte::tutte;

fn main() {
    let g = whitney_g();
    let side: BTreeSet<VertexId> = [6, 7, 8].into_iter().map(VertexId).collect();
    let twisted = whitney_twist(&g, (VertexId(1), VertexId(5)), &side).unwrap();

    let iso = Iso::new(12);
    println!("T(G)        = {}", tutte(&g));
    println!("T(twist G)  = {}", tutte(&twisted));
    assert_eq!(tutte(&g), tutte(&twisted));
    assert!(iso.is_isomorphic(&twisted, &whitney_g_prime()).unwrap());
    println!("twisted graph is isomorphic to the stored partner: yes");
    println!("twisted graph is isomorphic to G: {}", iso.is_isomorphic(&g, &twisted).unwrap());
}
