//! The six-terminal gadget: validation, partition witnesses and the built pair.
//!
//! `cargo run --release --example w0_flip`

use tutte_forge::constructions::{partition_witness, w0_flip_pair, validate_w0, Partition, TerminalList};
use tutte_forge::corpus::{rotor_k3, w0_centred, w0_spec};
use tutte_forge::multigraph::Multigraph;
use tutte_forge::tutte::t_equivalent;

fn main() {
    let spec = w0_spec(w0_centred());
    let report = validate_w0(&spec).unwrap();
    print!("{report}");
    assert!(report.valid);
    for q in Partition::all(3) {
        let w = partition_witness(&spec, &report, &q).unwrap().expect("every partition has a witness");
        println!("partition {q}: p = {}, d = {}", w.p, w.d);
    }

    let c6 = Multigraph::from_edges(1..=6, &[(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 1)]);
    let rt = TerminalList::of(&c6, &[1, 2, 3, 4, 5, 6]);
    let yt = TerminalList::of(&rotor_k3(), &[1, 2, 3]);
    let out = w0_flip_pair(&rt, &spec, &yt, false).unwrap();
    println!(
        "pair: {} vertices, {} edges each; T-equivalent: {}",
        out.first.vertex_count(),
        out.first.edge_count(),
        t_equivalent(&out.first, &out.second)
    );
}
