//! From a pair of paths to a new T-equivalent non-isomorphic pair by rotor attachment.
//!
//! `cargo run --example phi_generation`

use tutte_forge::corpus::{path_seed, rotor_k3, rotor_star, SEED_MARKED};
use tutte_forge::multigraph::VertexId;
use tutte_forge::phigen::{
    attach_rotors, build_psi_digraph, check_dig1, directed_cycles, enumerate_phi_witnesses, verify_new_member,
    CycleRotorAssignment,
};

fn main() {
    let (g0, h0) = path_seed();
    let witnesses = enumerate_phi_witnesses(&g0, SEED_MARKED, &h0, SEED_MARKED).unwrap();
    println!("{} witnesses", witnesses.len());

    for (i, w) in witnesses.iter().enumerate() {
        let d = build_psi_digraph(w);
        let cycles = directed_cycles(&d);
        println!("witness {i}: psi {}, arcs {d}", w.psi);
        for c in &cycles {
            let v = check_dig1(w, c).unwrap();
            println!("  cycle {c:?}: ends of e on it: {}", v.s_on_cycle);
        }
        // Attach K3 to the first 3-cycle and the star to the second if present.
        let threes: Vec<_> = cycles.iter().filter(|c| c.len() == 3).cloned().collect();
        if threes.len() < 2 {
            continue;
        }
        let ids = || vec![VertexId(1), VertexId(2), VertexId(3)];
        let a1 = CycleRotorAssignment::new(threes[0].clone(), rotor_k3(), ids()).unwrap();
        let a2 = CycleRotorAssignment::new(threes[1].clone(), rotor_star(), ids()).unwrap();
        let out = attach_rotors(w, &[a1, a2]).unwrap();
        let verdict = verify_new_member(&out.g_r, &out.h_r, SEED_MARKED, SEED_MARKED).unwrap();
        println!("  generated pair on {} vertices:\n{verdict}", out.g_r.vertex_count());
        assert!(verdict.in_phi_prime() && verdict.t_equivalent);
    }
}
