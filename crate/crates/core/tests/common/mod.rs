#![allow(dead_code)]

use std::collections::HashSet;

use rand::Rng;
use tutte_forge::iso::Iso;
use tutte_forge::multigraph::{Multigraph, VertexId};

/// Every multigraph (loops and parallels allowed) on `0..=max_n` vertices with
/// at most `max_e` edges, one per isomorphism class. Built edge by edge: each
/// class with `m + 1` edges arises from some class with `m` by adding one edge.
pub fn catalogue(max_n: u32, max_e: usize) -> Vec<Multigraph> {
    let iso = Iso::default();
    let mut all = Vec::new();
    for n in 0..=max_n {
        let slots: Vec<(u32, u32)> = (1..=n).flat_map(|a| (a..=n).map(move |b| (a, b))).collect();
        let mut level = vec![Multigraph::from_edges(1..=n, &[])];
        for _ in 0..max_e {
            all.extend(level.iter().cloned());
            let mut seen = HashSet::new();
            let mut next = Vec::new();
            for g in &level {
                for &(a, b) in &slots {
                    let mut h = g.clone();
                    h.add_edge(VertexId(a), VertexId(b)).unwrap();
                    if seen.insert(iso.canonical_code(&h).unwrap()) {
                        next.push(h);
                    }
                }
            }
            level = next;
        }
        all.extend(level);
    }
    all
}

/// Brute-force version of [`catalogue`]: every multiset of slots, deduplicated.
pub fn catalogue_brute(max_n: u32, max_e: usize) -> usize {
    let iso = Iso::default();
    let mut total = 0;
    for n in 0..=max_n {
        let slots: Vec<(u32, u32)> = (1..=n).flat_map(|a| (a..=n).map(move |b| (a, b))).collect();
        let mut seen = HashSet::new();
        let mut counts = vec![0usize; slots.len()];
        loop {
            let edges: Vec<(u32, u32)> = counts
                .iter()
                .zip(&slots)
                .flat_map(|(&c, &s)| std::iter::repeat_n(s, c))
                .collect();
            if edges.len() <= max_e {
                seen.insert(iso.canonical_code(&Multigraph::from_edges(1..=n, &edges)).unwrap());
            }
            // Odometer over multiplicities 0..=max_e.
            let mut i = 0;
            while i < counts.len() {
                counts[i] += 1;
                if counts[i] <= max_e && counts.iter().sum::<usize>() <= max_e {
                    break;
                }
                counts[i] = 0;
                i += 1;
            }
            if i == counts.len() {
                break;
            }
        }
        total += seen.len();
    }
    total
}

pub fn random_multigraph(rng: &mut impl Rng, n: u32, m: usize, loop_p: f64) -> Multigraph {
    let mut g = Multigraph::from_edges(1..=n, &[]);
    for _ in 0..m {
        let a = rng.gen_range(1..=n);
        let b = if rng.gen_bool(loop_p) { a } else { rng.gen_range(1..=n) };
        g.add_edge(VertexId(a), VertexId(b)).unwrap();
    }
    g
}

/// A random spanning tree on `1..=n` plus `extra` random non-loop edges.
pub fn random_connected(rng: &mut impl Rng, n: u32, extra: usize) -> Multigraph {
    let mut g = Multigraph::from_edges(1..=n, &[]);
    for v in 2..=n {
        let p = rng.gen_range(1..v);
        g.add_edge(VertexId(p), VertexId(v)).unwrap();
    }
    for _ in 0..extra {
        let a = rng.gen_range(1..=n);
        let b = rng.gen_range(1..=n);
        if a != b {
            g.add_edge(VertexId(a), VertexId(b)).unwrap();
        }
    }
    g
}

/// Rotor with terminals `1..=k` on a cycle and a gadget `a_i = k + i` joined
/// once to `u_i` and twice to `u_{i+1}`: rotations only, no reflection.
pub fn chiral_rotor(k: u32) -> Multigraph {
    let mut edges = Vec::new();
    if k >= 3 {
        edges.extend((1..=k).map(|i| (i, i % k + 1)));
    } else if k == 2 {
        edges.push((1, 2));
    }
    for i in 1..=k {
        let a = k + i;
        let next = i % k + 1;
        edges.extend([(a, i), (a, next), (a, next)]);
    }
    Multigraph::from_edges(1..=2 * k, &edges)
}

/// Connected simple graphs on exactly `n` vertices, one per isomorphism class.
pub fn connected_simple(n: u32) -> Vec<Multigraph> {
    let iso = Iso::default();
    let slots: Vec<(u32, u32)> = (1..=n).flat_map(|a| (a + 1..=n).map(move |b| (a, b))).collect();
    let mut level = vec![Multigraph::from_edges(1..=n, &[])];
    let mut all = Vec::new();
    for _ in 0..slots.len() {
        all.extend(level.iter().filter(|g| g.is_connected()).cloned());
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for g in &level {
            for &(a, b) in &slots {
                if g.multiplicity(VertexId(a), VertexId(b)) > 0 {
                    continue;
                }
                let mut h = g.clone();
                h.add_edge(VertexId(a), VertexId(b)).unwrap();
                if seen.insert(iso.canonical_code(&h).unwrap()) {
                    next.push(h);
                }
            }
        }
        level = next;
    }
    all.extend(level.into_iter().filter(|g| g.is_connected()));
    all
}
