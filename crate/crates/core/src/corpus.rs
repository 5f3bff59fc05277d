//! Built-in graph families with runnable property checks.
//!
//! Each entry holds hand-transcribed graphs plus a list of assertions. A
//! mis-transcribed edge shows up as a failed assertion, never as a silent fix.

use std::fmt;

use crate::constructions::{validate_w0, whitney_twist, W0Spec};
use crate::format::GraphDoc;
use crate::iso::{Iso, VertexMapping};
use crate::multigraph::{EdgeId, Multigraph, VertexId};
use crate::phigen::{
    attach_rotors, build_psi_digraph, certify_phi_prime, directed_cycles, enumerate_phi_witnesses, verify_new_member,
    CycleRotorAssignment, PhiWitness,
};
use crate::tutte::t_equivalent;

/// One graph of an entry, with optional terminals and a marked edge.
#[derive(Debug, Clone)]
pub struct CorpusGraph {
    pub label: &'static str,
    pub graph: Multigraph,
    pub terminals: Vec<VertexId>,
    pub marked: Option<EdgeId>,
}

impl CorpusGraph {
    fn new(label: &'static str, graph: Multigraph) -> Self {
        Self {
            label,
            graph: graph.with_name(label),
            terminals: Vec::new(),
            marked: None,
        }
    }

    fn terminals(mut self, ts: &[u32]) -> Self {
        self.terminals = ts.iter().copied().map(VertexId).collect();
        self
    }

    fn marked(mut self, e: u32) -> Self {
        self.marked = Some(EdgeId(e));
        self
    }

    /// Graph file text; terminals render as list `t` when present.
    pub fn render(&self) -> String {
        let mut doc = GraphDoc::new(self.graph.clone());
        if !self.terminals.is_empty() {
            doc = doc.with_terminals("t", self.terminals.clone());
        }
        let mut text = doc.render();
        if let Some(e) = self.marked {
            text.push_str(&format!("# marked edge {e}\n"));
        }
        text
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assertion {
    pub label: String,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusRun {
    pub name: &'static str,
    pub assertions: Vec<Assertion>,
}

impl CorpusRun {
    pub fn passed(&self) -> bool {
        self.assertions.iter().all(|a| a.passed)
    }
}

impl fmt::Display for CorpusRun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}: {}", self.name, if self.passed() { "pass" } else { "FAIL" })?;
        for a in &self.assertions {
            writeln!(f, "  {} {}", if a.passed { "✓" } else { "✗" }, a.label)?;
        }
        Ok(())
    }
}

pub struct CorpusEntry {
    pub name: &'static str,
    pub summary: &'static str,
    pub graphs: Vec<CorpusGraph>,
    pub mappings: Vec<(&'static str, VertexMapping)>,
    /// Directed arcs `i -> j` on indices, for digraph fixtures.
    pub arcs: Vec<(usize, usize)>,
    check: fn(&CorpusEntry) -> Vec<Assertion>,
}

impl CorpusEntry {
    pub fn graph(&self, label: &str) -> &CorpusGraph {
        self.graphs
            .iter()
            .find(|g| g.label == label)
            .unwrap_or_else(|| panic!("entry {} has no graph {label}", self.name))
    }

    pub fn mapping(&self, label: &str) -> &VertexMapping {
        &self
            .mappings
            .iter()
            .find(|(l, _)| *l == label)
            .unwrap_or_else(|| panic!("entry {} has no mapping {label}", self.name))
            .1
    }

    pub fn run(&self) -> CorpusRun {
        CorpusRun {
            name: self.name,
            assertions: (self.check)(self),
        }
    }

    /// Text listing of every graph and mapping of the entry.
    pub fn show(&self) -> String {
        let mut out = format!("{}: {}\n", self.name, self.summary);
        for g in &self.graphs {
            out.push_str(&format!("\n[{}]\n", g.label));
            out.push_str(&g.render());
        }
        for (label, m) in &self.mappings {
            out.push_str(&format!("\n[{label}]\n{m}\n"));
        }
        if !self.arcs.is_empty() {
            out.push_str("\n[arcs]\n");
            for (i, j) in &self.arcs {
                out.push_str(&format!("{i} -> {j}\n"));
            }
        }
        out
    }
}

impl fmt::Debug for CorpusEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CorpusEntry")
            .field("name", &self.name)
            .field("graphs", &self.graphs.len())
            .finish()
    }
}

fn check(label: impl Into<String>, passed: bool) -> Assertion {
    Assertion {
        label: label.into(),
        passed,
    }
}

fn iso_for(a: &Multigraph, b: &Multigraph) -> bool {
    Iso::new(a.vertex_count().max(b.vertex_count()).max(12))
        .is_isomorphic(a, b)
        .unwrap_or(false)
}

/// True iff some triangle (three vertices joined pairwise by three distinct
/// edges) shares no edge with any other triangle. Parallel edges give
/// distinct triangles, which then share edges.
pub fn triangle_edge_distinguisher(g: &Multigraph) -> bool {
    let edges: Vec<(EdgeId, VertexId, VertexId)> = g.edges().filter(|(_, a, b)| a != b).collect();
    let mut triangles: Vec<[EdgeId; 3]> = Vec::new();
    for i in 0..edges.len() {
        for j in (i + 1)..edges.len() {
            for l in (j + 1)..edges.len() {
                let mut vs = vec![edges[i].1, edges[i].2, edges[j].1, edges[j].2, edges[l].1, edges[l].2];
                vs.sort();
                vs.dedup();
                // Three non-loop edges on three vertices with no two parallel.
                let pairs = [(edges[i].1, edges[i].2), (edges[j].1, edges[j].2), (edges[l].1, edges[l].2)]
                    .map(|(a, b)| (a.min(b), a.max(b)));
                if vs.len() == 3 && pairs[0] != pairs[1] && pairs[0] != pairs[2] && pairs[1] != pairs[2] {
                    triangles.push([edges[i].0, edges[j].0, edges[l].0]);
                }
            }
        }
    }
    triangles.iter().enumerate().any(|(a, t)| {
        triangles
            .iter()
            .enumerate()
            .all(|(b, o)| a == b || !t.iter().any(|e| o.contains(e)))
    })
}

fn v(i: u32) -> VertexId {
    VertexId(i)
}

pub fn whitney_g() -> Multigraph {
    Multigraph::from_edges(
        1..=8,
        &[
            (1, 2), (2, 3), (3, 4), (4, 5), (5, 7), (7, 8), (8, 6), (6, 1), (1, 8), (6, 5), (5, 2), (1, 3), (5, 7),
        ],
    )
}

pub fn whitney_g_prime() -> Multigraph {
    Multigraph::from_edges(
        1..=8,
        &[
            (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 8), (8, 7), (7, 1), (1, 6), (8, 5), (5, 2), (1, 3), (1, 7),
        ],
    )
}

/// The smaller T-equivalent, non-isomorphic pair; marked edges are id 8.
pub fn gray_g() -> Multigraph {
    Multigraph::from_edges(1..=6, &[(2, 3), (3, 4), (4, 1), (1, 5), (5, 6), (6, 2), (2, 5), (5, 4), (1, 2), (5, 6)])
}

pub fn gray_h() -> Multigraph {
    Multigraph::from_edges(1..=6, &[(4, 3), (3, 2), (2, 6), (6, 5), (5, 4), (4, 1), (1, 5), (5, 2), (1, 3), (5, 1)])
}

pub const GRAY_MARKED: EdgeId = EdgeId(8);

/// The path seed `(G0, e, H0, f)`; `e` and `f` are id 2.
pub fn path_seed() -> (Multigraph, Multigraph) {
    (
        Multigraph::from_edges(1..=5, &[(1, 2), (2, 3), (3, 4), (4, 5)]),
        Multigraph::from_edges(1..=5, &[(3, 2), (2, 1), (1, 5), (5, 4)]),
    )
}

pub const SEED_MARKED: EdgeId = EdgeId(2);

pub fn psi_first() -> VertexMapping {
    "1->4,2->1,3->2,5->3".parse().expect("valid mapping")
}

pub fn psi_second() -> VertexMapping {
    "1->3,2->2,3->1,5->4".parse().expect("valid mapping")
}

pub const DPSI_ARCS: [(usize, usize); 6] = [(1, 4), (2, 1), (2, 5), (3, 2), (4, 2), (5, 3)];

pub fn rotor_k3() -> Multigraph {
    Multigraph::from_edges([1, 2, 3], &[(1, 2), (2, 3), (1, 3)])
}

/// `K_{1,3}` with centre 4.
pub fn rotor_star() -> Multigraph {
    Multigraph::from_edges(1..=4, &[(4, 1), (4, 2), (4, 3)])
}

/// Six-terminal rotor on `w1..w6 = 1..6` and `x1..x3 = 7..9` with centre 10.
pub fn w0_centred() -> Multigraph {
    Multigraph::from_edges(
        1..=10,
        &[
            (10, 3), (3, 4), (4, 5), (5, 10), (10, 1), (1, 6), (6, 5), (5, 8), (1, 2),
            (2, 3), (3, 7), (1, 9), (9, 2), (2, 7), (7, 4), (4, 8), (8, 6), (6, 9),
        ],
    )
}

/// The centre-free variant with three doubled edges `w1x3`, `w3x1`, `w5x2`.
pub fn w0_doubled() -> Multigraph {
    Multigraph::from_edges(
        1..=9,
        &[
            (3, 4), (4, 5), (1, 6), (6, 5), (5, 8), (1, 2), (2, 3), (3, 7), (1, 9),
            (9, 2), (2, 7), (7, 4), (4, 8), (8, 6), (6, 9), (1, 9), (3, 7), (5, 8),
        ],
    )
}

pub fn w0_spec(w0: Multigraph) -> W0Spec {
    W0Spec::new(w0, (1..=6).map(v).collect(), (7..=9).map(v).collect(), 3, 2)
}

/// Runs the rotor attachment on the path seed with the first `ψ`: `K3` along
/// `(1,4,2)` and the star's leaves along `(2,5,3)`.
pub fn generated_pair() -> (Multigraph, Multigraph) {
    let (g, h) = path_seed();
    let w = PhiWitness::new(
        g,
        SEED_MARKED,
        h,
        SEED_MARKED,
        VertexMapping::identity((1..=5).map(v)),
        psi_first(),
    )
    .expect("seed witness is valid");
    let a1 = CycleRotorAssignment::new(vec![1, 4, 2], rotor_k3(), vec![v(1), v(2), v(3)]).expect("K3 rotates");
    let a2 = CycleRotorAssignment::new(vec![2, 5, 3], rotor_star(), vec![v(1), v(2), v(3)]).expect("star rotates");
    let out = attach_rotors(&w, &[a1, a2]).expect("attachment succeeds");
    (out.g_r, out.h_r)
}

fn marked_pair_checks(g: &Multigraph, e: EdgeId, h: &Multigraph, f: EdgeId) -> Vec<Assertion> {
    let (gc, _) = g.contract_edge(e).expect("marked edge exists");
    let (hc, _) = h.contract_edge(f).expect("marked edge exists");
    vec![
        check("T-equal", t_equivalent(g, h)),
        check("non-isomorphic", !iso_for(g, h)),
        check("G\\e ≅ H\\f", iso_for(&g.delete_edge(e).unwrap(), &h.delete_edge(f).unwrap())),
        check("G/e ≅ H/f", iso_for(&gc, &hc)),
    ]
}

fn check_whitney(entry: &CorpusEntry) -> Vec<Assertion> {
    let g = &entry.graph("G").graph;
    let gp = &entry.graph("G'").graph;
    let side = [v(6), v(7), v(8)].into_iter().collect();
    let twisted = whitney_twist(g, (v(1), v(5)), &side);
    vec![
        check("T-equal", t_equivalent(g, gp)),
        check(
            "twist at {1,5} ≅ G'",
            twisted.map(|t| iso_for(&t, gp)).unwrap_or(false),
        ),
    ]
}

fn check_gray(entry: &CorpusEntry) -> Vec<Assertion> {
    let g = entry.graph("G");
    let h = entry.graph("H");
    let mut out = vec![
        check(
            "6 vertices, 10 edges, one parallel pair each",
            [&g.graph, &h.graph].iter().all(|x| {
                x.vertex_count() == 6
                    && x.edge_count() == 10
                    && x.structure().parallel_classes.values().filter(|c| c.len() > 1).count() == 1
            }),
        ),
    ];
    out.extend(marked_pair_checks(&g.graph, GRAY_MARKED, &h.graph, GRAY_MARKED));
    out.push(check(
        "triangle-distinguisher: H true, G false",
        triangle_edge_distinguisher(&h.graph) && !triangle_edge_distinguisher(&g.graph),
    ));
    out
}

fn check_path_seed(entry: &CorpusEntry) -> Vec<Assertion> {
    let g = &entry.graph("G0").graph;
    let h = &entry.graph("H0").graph;
    let p5 = Multigraph::from_edges(1..=5, &[(1, 2), (2, 3), (3, 4), (4, 5)]);
    let w = certify_phi_prime(g, SEED_MARKED, h, SEED_MARKED).ok().flatten();
    vec![
        check("both are P5", iso_for(g, &p5) && iso_for(h, &p5)),
        check("certified in Φ′", w.is_some()),
        check(
            "witness merges (3,4) and (1,5)",
            w.is_some_and(|w| (w.s1, w.s2, w.t1, w.t2) == (3, 4, 1, 5)),
        ),
    ]
}

fn check_psi_choices(entry: &CorpusEntry) -> Vec<Assertion> {
    let (g, h) = path_seed();
    let all: Vec<VertexMapping> = enumerate_phi_witnesses(&g, SEED_MARKED, &h, SEED_MARKED)
        .unwrap_or_default()
        .into_iter()
        .map(|w| w.psi)
        .collect();
    let mut out = Vec::new();
    for (label, m) in &entry.mappings {
        out.push(check(format!("{label} is an enumerated ψ"), all.contains(m)));
    }
    out
}

fn check_dpsi(entry: &CorpusEntry) -> Vec<Assertion> {
    let (g, h) = path_seed();
    let w = PhiWitness::new(g, SEED_MARKED, h, SEED_MARKED, VertexMapping::identity((1..=5).map(v)), psi_first())
        .expect("seed witness is valid");
    let d = build_psi_digraph(&w);
    let mut listed = entry.arcs.clone();
    listed.sort();
    vec![
        check("arcs match the digraph built from the seed", d.arcs == listed),
        check("n + 1 arcs", d.arcs.len() == 6),
        check(
            "cycles (1,4,2) and (2,5,3)",
            directed_cycles(&d) == vec![vec![1, 4, 2], vec![2, 5, 3]],
        ),
    ]
}

fn check_rotors(entry: &CorpusEntry) -> Vec<Assertion> {
    entry
        .graphs
        .iter()
        .map(|r| {
            let ok = Iso::default()
                .check_cyclic_orbit(&r.graph, &r.terminals)
                .map(|x| x.is_some())
                .unwrap_or(false);
            check(format!("{} rotates its terminals cyclically", r.label), ok)
        })
        .collect()
}

fn check_w0(entry: &CorpusEntry) -> Vec<Assertion> {
    entry
        .graphs
        .iter()
        .map(|w| {
            let ok = validate_w0(&w0_spec(w.graph.clone())).map(|r| r.valid).unwrap_or(false);
            check(format!("{} validates with r = 3, g = 2", w.label), ok)
        })
        .collect()
}

fn check_generated(entry: &CorpusEntry) -> Vec<Assertion> {
    let g2 = &entry.graph("G2").graph;
    let h2 = &entry.graph("H2").graph;
    let member = verify_new_member(g2, h2, SEED_MARKED, SEED_MARKED)
        .map(|m| m.in_phi_prime())
        .unwrap_or(false);
    vec![
        check("certified in Φ′", member),
        check("T-equal", t_equivalent(g2, h2)),
        check("G2 ≅ gray G", iso_for(g2, &gray_g())),
        check("H2 ≅ gray H", iso_for(h2, &gray_h())),
    ]
}

pub fn corpus() -> Vec<CorpusEntry> {
    let (g0, h0) = path_seed();
    let (g2, h2) = generated_pair();
    vec![
        CorpusEntry {
            name: "whitney-pair",
            summary: "a graph and its twist at the cut {1,5}",
            graphs: vec![
                CorpusGraph::new("G", whitney_g()).terminals(&[1, 5]),
                CorpusGraph::new("G'", whitney_g_prime()).terminals(&[1, 5]),
            ],
            mappings: Vec::new(),
            arcs: Vec::new(),
            check: check_whitney,
        },
        CorpusEntry {
            name: "gray-pair",
            summary: "T-equivalent non-isomorphic pair whose marked edges have isomorphic minors",
            graphs: vec![
                CorpusGraph::new("G", gray_g()).marked(GRAY_MARKED.0),
                CorpusGraph::new("H", gray_h()).marked(GRAY_MARKED.0),
            ],
            mappings: Vec::new(),
            arcs: Vec::new(),
            check: check_gray,
        },
        CorpusEntry {
            name: "path-seed",
            summary: "two labelled P5s with marked middle-right edges",
            graphs: vec![
                CorpusGraph::new("G0", g0).marked(SEED_MARKED.0),
                CorpusGraph::new("H0", h0).marked(SEED_MARKED.0),
            ],
            mappings: Vec::new(),
            arcs: Vec::new(),
            check: check_path_seed,
        },
        CorpusEntry {
            name: "psi-choices",
            summary: "two isomorphisms G0/e → H0/f on merged-minimum ids",
            graphs: Vec::new(),
            mappings: vec![("psi-first", psi_first()), ("psi-second", psi_second())],
            arcs: Vec::new(),
            check: check_psi_choices,
        },
        CorpusEntry {
            name: "dpsi-example",
            summary: "index digraph of the path seed under the first ψ",
            graphs: Vec::new(),
            mappings: Vec::new(),
            arcs: DPSI_ARCS.to_vec(),
            check: check_dpsi,
        },
        CorpusEntry {
            name: "rotor-w1-w2",
            summary: "K3 and K1,3 with their 3-cycle orbits",
            graphs: vec![
                CorpusGraph::new("W1", rotor_k3()).terminals(&[1, 2, 3]),
                CorpusGraph::new("W2", rotor_star()).terminals(&[1, 2, 3]),
            ],
            mappings: Vec::new(),
            arcs: Vec::new(),
            check: check_rotors,
        },
        CorpusEntry {
            name: "w0-examples",
            summary: "two six-terminal gadgets with rotation order 3 and reflection",
            graphs: vec![
                CorpusGraph::new("W0-centred", w0_centred()).terminals(&[1, 2, 3, 4, 5, 6]),
                CorpusGraph::new("W0-doubled", w0_doubled()).terminals(&[1, 2, 3, 4, 5, 6]),
            ],
            mappings: Vec::new(),
            arcs: Vec::new(),
            check: check_w0,
        },
        CorpusEntry {
            name: "generated-pair",
            summary: "rotor attachment output on the path seed; matches gray-pair",
            graphs: vec![
                CorpusGraph::new("G2", g2).marked(SEED_MARKED.0),
                CorpusGraph::new("H2", h2).marked(SEED_MARKED.0),
            ],
            mappings: Vec::new(),
            arcs: Vec::new(),
            check: check_generated,
        },
    ]
}

pub fn corpus_entry(name: &str) -> Option<CorpusEntry> {
    corpus().into_iter().find(|e| e.name == name)
}
