//! Graph constructions: terminal gluing, `G_S`, partition quotients,
//! Whitney twists, rotor flips and the `W₀` assemblies for flips of order
//! `rg`, with validators for their automorphism hypotheses.
//!
//! Index conventions follow the usual cyclic notation: terminal `i` of a list
//! of length `k` is 1-based and taken mod `k`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::iso::{reflection_pins, Iso, IsoError, VertexMapping};
use crate::multigraph::{EdgeId, GraphError, Multigraph, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("arity mismatch: {0}")]
    Arity(String),
    #[error("invalid terminal list: {0}")]
    Terminals(String),
    #[error("invalid cut: {0}")]
    InvalidCut(String),
    #[error("hypothesis not met: {0}")]
    Hypothesis(String),
    #[error("invalid partition: {0}")]
    Partition(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Iso(#[from] IsoError),
}

type Result<T, E = ConstructionError> = std::result::Result<T, E>;

/// A graph with an ordered list of distinct terminal vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TerminalList {
    pub graph: Multigraph,
    pub terminals: Vec<VertexId>,
}

impl TerminalList {
    pub fn new(graph: Multigraph, terminals: Vec<VertexId>) -> Result<Self> {
        let set: BTreeSet<VertexId> = terminals.iter().copied().collect();
        if set.len() != terminals.len() {
            return Err(ConstructionError::Terminals("repeated vertex".into()));
        }
        if let Some(v) = terminals.iter().find(|v| !graph.has_vertex(**v)) {
            return Err(ConstructionError::Terminals(format!("vertex {v} not in graph")));
        }
        Ok(Self { graph, terminals })
    }

    /// Shorthand for fixtures; panics on an invalid list.
    pub fn of(graph: &Multigraph, terminals: &[u32]) -> Self {
        Self::new(graph.clone(), terminals.iter().map(|&v| VertexId(v)).collect())
            .expect("valid terminal list")
    }

    pub fn k(&self) -> usize {
        self.terminals.len()
    }

    /// Terminal `i`, 1-based and cyclic.
    pub fn at(&self, i: i64) -> VertexId {
        let k = self.terminals.len() as i64;
        self.terminals[(i - 1).rem_euclid(k) as usize]
    }

    pub fn reversed(&self) -> Self {
        let mut t = self.terminals.clone();
        t.reverse();
        Self {
            graph: self.graph.clone(),
            terminals: t,
        }
    }
}

/// A partition of `[k]`; blocks hold 1-based indices, sorted, and the blocks
/// are ordered by their smallest element.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition {
    k: usize,
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    pub fn new(k: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; k + 1];
        let mut norm: Vec<Vec<usize>> = Vec::with_capacity(blocks.len());
        for mut b in blocks {
            if b.is_empty() {
                return Err(ConstructionError::Partition("empty block".into()));
            }
            b.sort_unstable();
            for &i in &b {
                if i == 0 || i > k {
                    return Err(ConstructionError::Partition(format!("index {i} outside 1..={k}")));
                }
                if seen[i] {
                    return Err(ConstructionError::Partition(format!("index {i} repeated")));
                }
                seen[i] = true;
            }
            norm.push(b);
        }
        if let Some(i) = (1..=k).find(|&i| !seen[i]) {
            return Err(ConstructionError::Partition(format!("index {i} not covered")));
        }
        norm.sort();
        Ok(Self { k, blocks: norm })
    }

    pub fn discrete(k: usize) -> Self {
        Self {
            k,
            blocks: (1..=k).map(|i| vec![i]).collect(),
        }
    }

    pub fn single_block(k: usize) -> Self {
        Self {
            k,
            blocks: if k == 0 { Vec::new() } else { vec![(1..=k).collect()] },
        }
    }

    /// Every partition of `[k]`, in restricted-growth-string order.
    pub fn all(k: usize) -> Vec<Self> {
        let mut out = Vec::new();
        let mut rgs = vec![0usize; k];
        fn rec(i: usize, max: usize, rgs: &mut Vec<usize>, out: &mut Vec<Partition>) {
            let k = rgs.len();
            if i == k {
                let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); max + 1];
                for (idx, &b) in rgs.iter().enumerate() {
                    blocks[b].push(idx + 1);
                }
                blocks.retain(|b| !b.is_empty());
                out.push(Partition { k, blocks });
                return;
            }
            for b in 0..=(max + 1) {
                rgs[i] = b;
                rec(i + 1, max.max(b), rgs, out);
            }
        }
        if k == 0 {
            return vec![Self { k: 0, blocks: Vec::new() }];
        }
        rec(1, 0, &mut rgs, &mut out);
        out
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_of(&self, i: usize) -> usize {
        self.blocks
            .iter()
            .position(|b| b.contains(&i))
            .expect("index covered by partition")
    }

    /// Whether every block of `self` lies inside a block of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        self.k == coarser.k
            && self
                .blocks
                .iter()
                .all(|b| coarser.blocks.iter().any(|c| b.iter().all(|i| c.contains(i))))
    }

    /// The image partition under an index map `i -> f(i)`.
    pub fn map(&self, f: impl Fn(usize) -> usize) -> Result<Self> {
        Self::new(
            self.k,
            self.blocks.iter().map(|b| b.iter().map(|&i| f(i)).collect()).collect(),
        )
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.blocks {
            write!(f, "{{")?;
            for (n, i) in b.iter().enumerate() {
                if n > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{i}")?;
            }
            write!(f, "}}")?;
        }
        Ok(())
    }
}

/// A set of index pairs `{i, j}`, `1 <= i < j <= k`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PairSet {
    k: usize,
    pairs: BTreeSet<(usize, usize)>,
}

impl PairSet {
    pub fn new(k: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (a, b) in pairs {
            let (i, j) = (a.min(b), a.max(b));
            if i == j || i == 0 || j > k {
                return Err(ConstructionError::Partition(format!("pair {{{a},{b}}} invalid for k = {k}")));
            }
            if !set.insert((i, j)) {
                return Err(ConstructionError::Partition(format!("pair {{{i},{j}}} repeated")));
            }
        }
        Ok(Self { k, pairs: set })
    }

    pub fn empty(k: usize) -> Self {
        Self {
            k,
            pairs: BTreeSet::new(),
        }
    }

    pub fn full(k: usize) -> Self {
        Self {
            k,
            pairs: all_pairs(k).into_iter().collect(),
        }
    }

    /// All `2^(k choose 2)` subsets, ordered by bitmask over the sorted pairs.
    pub fn all(k: usize) -> Vec<Self> {
        let pairs = all_pairs(k);
        (0u64..(1u64 << pairs.len()))
            .map(|mask| Self {
                k,
                pairs: pairs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &p)| p)
                    .collect(),
            })
            .collect()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

impl fmt::Display for PairSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (n, (i, j)) in self.pairs.iter().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "{{{i},{j}}}")?;
        }
        write!(f, "}}")
    }
}

fn all_pairs(k: usize) -> Vec<(usize, usize)> {
    (1..=k).flat_map(|i| ((i + 1)..=k).map(move |j| (i, j))).collect()
}

/// Result of [`glue`]: the glued graph and where each `W` vertex and edge went.
#[derive(Debug, Clone)]
pub struct Glued {
    pub graph: Multigraph,
    pub vertex_map: BTreeMap<VertexId, VertexId>,
    pub edge_map: BTreeMap<EdgeId, EdgeId>,
}

/// `G(u_1..u_k) ⊔ W(w_1..w_k)`: disjoint union with `u_i` and `w_i` identified.
///
/// All ids of `G` survive, so each merged vertex carries its `u_i` id. The
/// other vertices of `W` get fresh ids above `G`'s largest, in `W`'s id order;
/// `W`'s edges likewise get fresh edge ids.
pub fn glue(gt: &TerminalList, wt: &TerminalList) -> Result<Glued> {
    if gt.k() != wt.k() {
        return Err(ConstructionError::Arity(format!(
            "{} host terminals vs {} attached terminals",
            gt.k(),
            wt.k()
        )));
    }
    if gt.k() == 0 {
        return Err(ConstructionError::Arity("gluing needs k >= 1".into()));
    }
    let mut graph = gt.graph.clone();
    let mut vertex_map = BTreeMap::new();
    for (w, u) in wt.terminals.iter().zip(&gt.terminals) {
        vertex_map.insert(*w, *u);
    }
    let mut next = graph.next_vertex_id().0;
    for w in wt.graph.vertices() {
        if let std::collections::btree_map::Entry::Vacant(slot) = vertex_map.entry(w) {
            let fresh = VertexId(next);
            next += 1;
            graph.add_vertex(fresh)?;
            slot.insert(fresh);
        }
    }
    let mut edge_map = BTreeMap::new();
    for (e, a, b) in wt.graph.edges() {
        let id = graph.add_edge(vertex_map[&a], vertex_map[&b])?;
        edge_map.insert(e, id);
    }
    Ok(Glued {
        graph,
        vertex_map,
        edge_map,
    })
}

/// `G_S`: one fresh edge `u_i u_j` per pair of `s`, added in pair order.
pub fn add_edges_s(gt: &TerminalList, s: &PairSet) -> Result<Multigraph> {
    if s.k() != gt.k() {
        return Err(ConstructionError::Arity(format!(
            "pair set over [{}] for {} terminals",
            s.k(),
            gt.k()
        )));
    }
    let mut g = gt.graph.clone();
    for (i, j) in s.pairs() {
        g.add_edge(gt.terminals[i - 1], gt.terminals[j - 1])?;
    }
    Ok(g)
}

/// `G(P)`: terminals merged blockwise, one identification per non-singleton block.
pub fn quotient(gt: &TerminalList, p: &Partition) -> Result<Multigraph> {
    if p.k() != gt.k() {
        return Err(ConstructionError::Arity(format!(
            "partition of [{}] for {} terminals",
            p.k(),
            gt.k()
        )));
    }
    let mut g = gt.graph.clone();
    for b in p.blocks().iter().filter(|b| b.len() > 1) {
        g = g.identify_vertices(b.iter().map(|&i| gt.terminals[i - 1]))?;
    }
    Ok(g)
}

/// Re-attaches the edges between `side` and the cut vertices with the two cut
/// vertices swapped. Edge ids are preserved.
pub fn whitney_twist(
    g: &Multigraph,
    cut: (VertexId, VertexId),
    side: &BTreeSet<VertexId>,
) -> Result<Multigraph> {
    let (u1, u2) = cut;
    for v in [u1, u2] {
        if !g.has_vertex(v) {
            return Err(GraphError::UnknownVertex(v).into());
        }
    }
    if u1 == u2 {
        return Err(ConstructionError::InvalidCut("cut vertices coincide".into()));
    }
    if side.is_empty() {
        return Err(ConstructionError::InvalidCut("empty side".into()));
    }
    if side.contains(&u1) || side.contains(&u2) {
        return Err(ConstructionError::InvalidCut("side contains a cut vertex".into()));
    }
    if let Some(v) = side.iter().find(|v| !g.has_vertex(**v)) {
        return Err(GraphError::UnknownVertex(*v).into());
    }
    let inside = |v: VertexId| side.contains(&v);
    let on_cut = |v: VertexId| v == u1 || v == u2;
    for (e, a, b) in g.edges() {
        if (inside(a) && !inside(b) && !on_cut(b)) || (inside(b) && !inside(a) && !on_cut(a)) {
            return Err(ConstructionError::InvalidCut(format!(
                "edge {e} joins the side to the rest without passing the cut"
            )));
        }
    }
    let swap = |v: VertexId| {
        if v == u1 {
            u2
        } else if v == u2 {
            u1
        } else {
            v
        }
    };
    let mut out = Multigraph::new();
    for v in g.vertices() {
        out.add_vertex(v)?;
    }
    for (e, a, b) in g.edges() {
        let (a, b) = if inside(a) && on_cut(b) {
            (a, swap(b))
        } else if inside(b) && on_cut(a) {
            (swap(a), b)
        } else {
            (a, b)
        };
        out.insert_edge(e, a, b)?;
    }
    if let Some(name) = g.name() {
        out.set_name(Some(name.to_string()));
    }
    Ok(out)
}

/// An isomorphism engine sized to the graph: hypothesis checks must run even
/// on graphs above the interactive default.
pub(crate) fn iso_for(g: &Multigraph) -> Iso {
    Iso::new(g.vertex_count().max(crate::iso::DEFAULT_MAX_VERTICES))
}

/// `(R(u_1..u_k) ⊔ W, R(u_k..u_1) ⊔ W)`. The orbit hypothesis on `R` is
/// verified unless `force` is set.
pub fn rotor_flip_pair(
    rt: &TerminalList,
    wt: &TerminalList,
    force: bool,
) -> Result<(Multigraph, Multigraph)> {
    if rt.k() != wt.k() {
        return Err(ConstructionError::Arity(format!(
            "rotor has {} terminals, attachment has {}",
            rt.k(),
            wt.k()
        )));
    }
    if !force && iso_for(&rt.graph).check_cyclic_orbit(&rt.graph, &rt.terminals)?.is_none() {
        return Err(ConstructionError::Hypothesis(
            "rotor terminals are not a cyclic vertex orbit of an automorphism".into(),
        ));
    }
    let first = glue(rt, wt)?.graph;
    let second = glue(&rt.reversed(), wt)?.graph;
    Ok((first, second))
}

/// A candidate `W₀` with its `w`-list of length `rg` and `x`-list of length
/// `r`. The automorphisms and indices are searched for when absent.
#[derive(Debug, Clone)]
pub struct W0Spec {
    pub w0: Multigraph,
    pub w_list: Vec<VertexId>,
    pub x_list: Vec<VertexId>,
    pub r: usize,
    pub g: usize,
    pub phi: Option<VertexMapping>,
    pub rho: Option<VertexMapping>,
    pub c: Option<usize>,
    pub c_prime: Option<usize>,
}

impl W0Spec {
    pub fn new(w0: Multigraph, w_list: Vec<VertexId>, x_list: Vec<VertexId>, r: usize, g: usize) -> Self {
        Self {
            w0,
            w_list,
            x_list,
            r,
            g,
            phi: None,
            rho: None,
            c: None,
            c_prime: None,
        }
    }

    fn w(&self, i: i64) -> VertexId {
        let n = self.w_list.len() as i64;
        self.w_list[(i - 1).rem_euclid(n) as usize]
    }

    fn x(&self, i: i64) -> VertexId {
        let n = self.x_list.len() as i64;
        self.x_list[(i - 1).rem_euclid(n) as usize]
    }

    fn rotation_pins(&self) -> Vec<(VertexId, VertexId)> {
        let g = self.g as i64;
        let mut pins: Vec<_> = (1..=self.w_list.len() as i64).map(|i| (self.w(i), self.w(i + g))).collect();
        pins.extend((1..=self.r as i64).map(|s| (self.x(s), self.x(s + 1))));
        pins
    }

    fn reflection_pins(&self, c: usize, c_prime: usize) -> Vec<(VertexId, VertexId)> {
        let mut pins = reflection_pins(&self.w_list, c);
        pins.extend(reflection_pins(&self.x_list, c_prime));
        pins
    }
}

/// Outcome of [`validate_w0`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct W0Report {
    pub valid: bool,
    pub phi: Option<VertexMapping>,
    pub rho: Option<VertexMapping>,
    pub c: Option<usize>,
    pub c_prime: Option<usize>,
    pub violations: Vec<String>,
}

impl fmt::Display for W0Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "valid: {}", self.valid)?;
        if let Some(p) = &self.phi {
            writeln!(f, "phi: {p}")?;
        }
        if let Some(r) = &self.rho {
            writeln!(f, "rho: {r}")?;
        }
        if let (Some(c), Some(cp)) = (self.c, self.c_prime) {
            writeln!(f, "c: {c}")?;
            writeln!(f, "c': {cp}")?;
        }
        for v in &self.violations {
            writeln!(f, "violation: {v}")?;
        }
        Ok(())
    }
}

fn check_w0_arity(spec: &W0Spec) -> Result<()> {
    if spec.r == 0 || spec.g == 0 {
        return Err(ConstructionError::Arity("r and g must be at least 1".into()));
    }
    if spec.w_list.len() != spec.r * spec.g {
        return Err(ConstructionError::Arity(format!(
            "w-list has {} vertices, expected rg = {}",
            spec.w_list.len(),
            spec.r * spec.g
        )));
    }
    if spec.x_list.len() != spec.r {
        return Err(ConstructionError::Arity(format!(
            "x-list has {} vertices, expected r = {}",
            spec.x_list.len(),
            spec.r
        )));
    }
    let all: BTreeSet<VertexId> = spec.w_list.iter().chain(&spec.x_list).copied().collect();
    if all.len() != spec.w_list.len() + spec.x_list.len() {
        return Err(ConstructionError::Terminals("w- and x-lists must be disjoint and distinct".into()));
    }
    if let Some(v) = all.iter().find(|v| !spec.w0.has_vertex(**v)) {
        return Err(ConstructionError::Terminals(format!("vertex {v} not in W0")));
    }
    Ok(())
}

/// Checks that `φ` and `ρ` are automorphisms of `W₀` satisfying the rotation
/// condition (1) and the reflection condition (2), searching for whichever of
/// them and of `c`, `c'` are not supplied.
pub fn validate_w0(spec: &W0Spec) -> Result<W0Report> {
    check_w0_arity(spec)?;
    let iso = iso_for(&spec.w0);
    let w0 = &spec.w0;
    let mut violations = Vec::new();

    let phi = match &spec.phi {
        Some(phi) => {
            if !phi.is_automorphism(w0) {
                violations.push("condition 1: phi is not an automorphism of W0".into());
            } else if spec.rotation_pins().iter().any(|&(a, b)| phi.get(a) != Some(b)) {
                violations.push("condition 1: phi does not send w_i to w_{i+g} and x_s to x_{s+1}".into());
            }
            Some(phi.clone())
        }
        None => {
            let found = iso.find_isomorphism_with(w0, w0, &spec.rotation_pins())?;
            if found.is_none() {
                violations.push("condition 1: no automorphism sends w_i to w_{i+g} and x_s to x_{s+1}".into());
            }
            found
        }
    };

    let rg = spec.w_list.len();
    let c_range: Vec<usize> = spec.c.map_or((1..=rg).collect(), |c| vec![c]);
    let cp_range: Vec<usize> = spec.c_prime.map_or((1..=spec.r).collect(), |c| vec![c]);
    let mut rho = None;
    let (mut c, mut c_prime) = (None, None);
    match &spec.rho {
        Some(given) => {
            if !given.is_automorphism(w0) {
                violations.push("condition 2: rho is not an automorphism of W0".into());
            } else {
                'outer: for &ci in &c_range {
                    for &cpi in &cp_range {
                        if spec.reflection_pins(ci, cpi).iter().all(|&(a, b)| given.get(a) == Some(b)) {
                            c = Some(ci);
                            c_prime = Some(cpi);
                            break 'outer;
                        }
                    }
                }
                if c.is_none() {
                    violations.push("condition 2: rho reflects neither list as required".into());
                }
            }
            rho = Some(given.clone());
        }
        None => {
            'search: for &ci in &c_range {
                for &cpi in &cp_range {
                    if let Some(found) = iso.find_isomorphism_with(w0, w0, &spec.reflection_pins(ci, cpi))? {
                        rho = Some(found);
                        c = Some(ci);
                        c_prime = Some(cpi);
                        break 'search;
                    }
                }
            }
            if rho.is_none() {
                violations.push("condition 2: no automorphism reflects the w-list and x-list".into());
            }
        }
    }

    Ok(W0Report {
        valid: violations.is_empty(),
        phi,
        rho,
        c,
        c_prime,
        violations,
    })
}

/// Output of [`w0_flip_pair`]: `W = W₀(x) ⊔ Y(y)` and the flipped pair.
#[derive(Debug, Clone)]
pub struct W0FlipOutput {
    pub w: Multigraph,
    pub w_list: Vec<VertexId>,
    pub first: Multigraph,
    pub second: Multigraph,
}

fn attach_y(spec: &W0Spec, yt: &TerminalList, x_list: Vec<VertexId>) -> Result<Multigraph> {
    let xt = TerminalList::new(spec.w0.clone(), x_list)?;
    Ok(glue(&xt, yt)?.graph)
}

/// `R(u_1..u_rg) ⊔ W` and `R(u_rg..u_1) ⊔ W` for `W = W₀(x_1..x_r) ⊔ Y(y_1..y_r)`.
/// The T-equivalence guarantee needs a valid `W₀` and `r <= 5`; `force`
/// builds the pair regardless.
pub fn w0_flip_pair(
    rt: &TerminalList,
    spec: &W0Spec,
    yt: &TerminalList,
    force: bool,
) -> Result<W0FlipOutput> {
    check_w0_arity(spec)?;
    if rt.k() != spec.r * spec.g {
        return Err(ConstructionError::Arity(format!(
            "rotor has {} terminals, expected rg = {}",
            rt.k(),
            spec.r * spec.g
        )));
    }
    if yt.k() != spec.r {
        return Err(ConstructionError::Arity(format!(
            "Y has {} terminals, expected r = {}",
            yt.k(),
            spec.r
        )));
    }
    if !force {
        if spec.r > 5 {
            return Err(ConstructionError::Hypothesis(format!("r = {} exceeds 5", spec.r)));
        }
        let report = validate_w0(spec)?;
        if !report.valid {
            return Err(ConstructionError::Hypothesis(report.violations.join("; ")));
        }
    }
    let w = attach_y(spec, yt, spec.x_list.clone())?;
    let wt = TerminalList::new(w.clone(), spec.w_list.clone())?;
    let (first, second) = rotor_flip_pair(rt, &wt, force)?;
    Ok(W0FlipOutput {
        w,
        w_list: spec.w_list.clone(),
        first,
        second,
    })
}

/// `R(u_1..u_rg) ⊔ W` and `R(u_rg..u_1) ⊔ W'` where `W'` glues `Y` onto the
/// reversed `x`-list. These are isomorphic for any `r` and `g`.
pub fn w0_reversed_pair(
    rt: &TerminalList,
    spec: &W0Spec,
    yt: &TerminalList,
) -> Result<(Multigraph, Multigraph)> {
    check_w0_arity(spec)?;
    if rt.k() != spec.r * spec.g || yt.k() != spec.r {
        return Err(ConstructionError::Arity("terminal counts must be rg and r".into()));
    }
    let w = attach_y(spec, yt, spec.x_list.clone())?;
    let mut rev = spec.x_list.clone();
    rev.reverse();
    let w_rev = attach_y(spec, yt, rev)?;
    let first = glue(rt, &TerminalList::new(w, spec.w_list.clone())?)?.graph;
    let second = glue(&rt.reversed(), &TerminalList::new(w_rev, spec.w_list.clone())?)?.graph;
    Ok((first, second))
}

/// A witness `π = ρ φ^d` for one partition of the `x`-list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionWitness {
    pub p: usize,
    pub d: i64,
    pub b: usize,
    pub b_prime: usize,
    pub pi: VertexMapping,
}

/// Searches `b, b'` in `[r]` for `π = ρ φ^d`, `d = c' + 1 - b - b'`, with
/// `π(w_{1+s}) = w_{p-s}` for some `p` and `π` preserving the `x`-block
/// partition `q`. Needs a report from [`validate_w0`] that passed.
pub fn partition_witness(spec: &W0Spec, report: &W0Report, q: &Partition) -> Result<Option<PartitionWitness>> {
    let (Some(phi), Some(rho), Some(_), Some(c_prime)) = (&report.phi, &report.rho, report.c, report.c_prime)
    else {
        return Err(ConstructionError::Hypothesis("W0 report is not valid".into()));
    };
    if !report.valid {
        return Err(ConstructionError::Hypothesis("W0 report is not valid".into()));
    }
    if q.k() != spec.r {
        return Err(ConstructionError::Arity(format!("partition of [{}] for r = {}", q.k(), spec.r)));
    }
    let order = phi.order() as i64;
    let rg = spec.w_list.len() as i64;
    let x_index: BTreeMap<VertexId, usize> =
        spec.x_list.iter().enumerate().map(|(i, &v)| (v, i + 1)).collect();
    for b in 1..=spec.r {
        for b_prime in 1..=spec.r {
            let d = c_prime as i64 + 1 - b as i64 - b_prime as i64;
            let pi = rho.compose(&phi.pow(d.rem_euclid(order) as usize));
            // (a): read p off the image of w_1, then check every s.
            let Some(p) = spec.w_list.iter().position(|&w| w == pi.apply(spec.w(1))) else {
                continue;
            };
            let p = p as i64 + 1;
            if !(0..rg).all(|s| pi.apply(spec.w(1 + s)) == spec.w(p - s)) {
                continue;
            }
            // (b): the image of every block is a block.
            let Ok(image) = q.map(|i| x_index.get(&pi.apply(spec.x(i as i64))).copied().unwrap_or(0)) else {
                continue;
            };
            if image == *q {
                return Ok(Some(PartitionWitness {
                    p: p as usize,
                    d,
                    b,
                    b_prime,
                    pi,
                }));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iso::{find_isomorphism, is_isomorphic};
    use crate::tutte::{t_equivalent, tutte};
    use proptest::prelude::*;

    fn v(i: u32) -> VertexId {
        VertexId(i)
    }

    fn k(n: u32) -> Multigraph {
        let mut es = Vec::new();
        for a in 1..=n {
            for b in (a + 1)..=n {
                es.push((a, b));
            }
        }
        Multigraph::from_edges(1..=n, &es)
    }

    fn cycle(n: u32) -> Multigraph {
        let es: Vec<(u32, u32)> = (1..=n).map(|i| (i, i % n + 1)).collect();
        Multigraph::from_edges(1..=n, &es)
    }

    #[test]
    fn glue_examples() {
        let k2 = Multigraph::from_edges([1, 2], &[(1, 2)]);
        let path = glue(&TerminalList::of(&k2, &[2]), &TerminalList::of(&k2, &[1])).unwrap();
        assert!(is_isomorphic(&path.graph, &Multigraph::from_edges([1, 2, 3], &[(1, 2), (2, 3)])).unwrap());

        let doubled = glue(&TerminalList::of(&k(3), &[1, 2, 3]), &TerminalList::of(&k(3), &[1, 2, 3])).unwrap();
        assert_eq!(doubled.graph.vertex_count(), 3);
        assert_eq!(doubled.graph.edge_count(), 6);
        assert_eq!(doubled.graph.multiplicity(v(1), v(2)), 2);
    }

    #[test]
    fn glue_keeps_host_ids() {
        let host = Multigraph::from_edges([5, 7], &[(5, 7)]);
        let star = Multigraph::from_edges([1, 2, 3], &[(1, 2), (1, 3)]);
        let out = glue(&TerminalList::of(&host, &[5, 7]), &TerminalList::of(&star, &[2, 3])).unwrap();
        assert_eq!(out.vertex_map[&v(2)], v(5));
        assert_eq!(out.vertex_map[&v(3)], v(7));
        assert_eq!(out.vertex_map[&v(1)], v(8));
        assert_eq!(out.graph.vertex_count(), 3);
        assert_eq!(out.graph.edge_count(), 3);
    }

    #[test]
    fn glue_arity() {
        let err = glue(&TerminalList::of(&k(3), &[1, 2]), &TerminalList::of(&k(3), &[1])).unwrap_err();
        assert!(matches!(err, ConstructionError::Arity(_)));
    }

    #[test]
    fn g_s_examples() {
        let digon = Multigraph::from_edges([1, 2], &[(1, 2), (1, 2)]);
        let dt = TerminalList::of(&digon, &[1, 2]);
        assert_eq!(add_edges_s(&dt, &PairSet::empty(2)).unwrap(), digon);
        let s = PairSet::new(2, [(1, 2)]).unwrap();
        assert_eq!(add_edges_s(&dt, &s).unwrap().multiplicity(v(1), v(2)), 3);
    }

    #[test]
    fn g_s_matches_glue_with_simple_graph() {
        let g = Multigraph::from_edges([1, 2, 3, 4], &[(1, 2), (2, 3), (3, 4), (4, 1), (1, 3)]);
        let gt = TerminalList::of(&g, &[1, 2, 4]);
        for s in PairSet::all(3) {
            let es: Vec<(u32, u32)> = s.pairs().map(|(i, j)| (i as u32, j as u32)).collect();
            let w = Multigraph::from_edges([1, 2, 3], &es);
            let glued = glue(&gt, &TerminalList::of(&w, &[1, 2, 3])).unwrap().graph;
            let direct = add_edges_s(&gt, &s).unwrap();
            let m = find_isomorphism(&direct, &glued).unwrap().expect("isomorphic");
            assert!(m.is_isomorphism(&direct, &glued));
        }
    }

    #[test]
    fn quotient_examples() {
        let g = k(3);
        let gt = TerminalList::of(&g, &[1, 2, 3]);
        assert_eq!(quotient(&gt, &Partition::discrete(3)).unwrap(), g);
        let k2 = Multigraph::from_edges([1, 2], &[(1, 2)]);
        let q = quotient(&TerminalList::of(&k2, &[1, 2]), &Partition::single_block(2)).unwrap();
        assert_eq!(q.total_loops(), 1);
        assert_eq!(q.vertex_count(), 1);

        let p5 = Multigraph::from_edges(1..=5, &[(1, 2), (2, 3), (3, 4), (4, 5)]);
        let pt = TerminalList::of(&p5, &[1, 2, 3, 4, 5]);
        let part = Partition::new(5, vec![vec![1], vec![2], vec![3, 4], vec![5]]).unwrap();
        let (contracted, _) = p5.contract_edge(EdgeId(2)).unwrap();
        let quot = quotient(&pt, &part).unwrap();
        // Identification keeps the 3–4 edge as a loop; contraction drops it.
        assert_eq!(quot.total_loops(), 1);
        let stripped = quot.delete_edge(EdgeId(2)).unwrap();
        assert!(is_isomorphic(&stripped, &contracted).unwrap());
    }

    #[test]
    fn partitions_enumerate_bell_numbers() {
        let counts: Vec<usize> = (0..=6).map(|k| Partition::all(k).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 15, 52, 203]);
        let all = Partition::all(4);
        let set: BTreeSet<_> = all.iter().cloned().collect();
        assert_eq!(set.len(), 15);
        assert!(Partition::new(3, vec![vec![1, 2]]).is_err());
        assert!(Partition::new(3, vec![vec![1, 2], vec![2, 3]]).is_err());
        assert_eq!(Partition::new(3, vec![vec![3], vec![2, 1]]).unwrap().to_string(), "{1,2}{3}");
    }

    #[test]
    fn pair_sets() {
        assert_eq!(PairSet::all(3).len(), 8);
        assert_eq!(PairSet::all(4).len(), 64);
        assert!(PairSet::new(3, [(1, 4)]).is_err());
        assert!(PairSet::new(3, [(2, 2)]).is_err());
        assert_eq!(PairSet::full(3).to_string(), "{{1,2},{1,3},{2,3}}");
    }

    #[test]
    fn twist_of_symmetric_side_is_isomorphic() {
        // A vertex 3 hanging between cut vertices 1, 2 of a 4-cycle.
        let g = Multigraph::from_edges([1, 2, 3, 4], &[(1, 3), (3, 2), (2, 4), (4, 1)]);
        let t = whitney_twist(&g, (v(1), v(2)), &BTreeSet::from([v(3)])).unwrap();
        assert!(is_isomorphic(&g, &t).unwrap());
    }

    #[test]
    fn twist_twice_is_identity() {
        let g = Multigraph::from_edges(1..=6, &[(1, 3), (3, 4), (4, 2), (3, 2), (1, 5), (5, 2), (5, 6), (6, 2), (1, 2)]);
        let side = BTreeSet::from([v(3), v(4)]);
        let once = whitney_twist(&g, (v(1), v(2)), &side).unwrap();
        let twice = whitney_twist(&once, (v(1), v(2)), &side).unwrap();
        assert_eq!(twice, g);
        assert_eq!(tutte(&once), tutte(&g));
    }

    #[test]
    fn twist_rejects_bad_cuts() {
        let g = Multigraph::from_edges([1, 2, 3, 4], &[(1, 3), (3, 4), (4, 2)]);
        let err = whitney_twist(&g, (v(1), v(2)), &BTreeSet::from([v(3)])).unwrap_err();
        assert!(matches!(err, ConstructionError::InvalidCut(_)));
        let err = whitney_twist(&g, (v(1), v(2)), &BTreeSet::from([v(1)])).unwrap_err();
        assert!(matches!(err, ConstructionError::InvalidCut(_)));
    }

    #[test]
    fn rotor_flip_small_k() {
        let w = Multigraph::from_edges([1, 2, 3], &[(1, 2), (2, 3), (3, 3)]);
        let r1 = Multigraph::from_edges([1, 2], &[(1, 2), (1, 1)]);
        let (a, b) = rotor_flip_pair(&TerminalList::of(&r1, &[1]), &TerminalList::of(&w, &[2]), false).unwrap();
        assert_eq!(a, b);

        let r2 = cycle(4);
        let (a, b) = rotor_flip_pair(&TerminalList::of(&r2, &[1, 3]), &TerminalList::of(&w, &[1, 3]), false).unwrap();
        assert!(is_isomorphic(&a, &b).unwrap());
    }

    #[test]
    fn rotor_flip_checks_hypothesis() {
        let p3 = Multigraph::from_edges([1, 2, 3], &[(1, 2), (2, 3)]);
        let rt = TerminalList::of(&p3, &[1, 2, 3]);
        let wt = TerminalList::of(&k(3), &[1, 2, 3]);
        assert!(matches!(rotor_flip_pair(&rt, &wt, false), Err(ConstructionError::Hypothesis(_))));
        assert!(rotor_flip_pair(&rt, &wt, true).is_ok());
    }

    #[test]
    fn rotor_flip_with_reflecting_w_is_isomorphic() {
        // C5 rotor against a C5 attachment with a loop: C5 admits reflections.
        let r = cycle(5);
        let mut w = cycle(5);
        w.add_edge(v(1), v(1)).unwrap();
        let ws: Vec<VertexId> = (1..=5).map(v).collect();
        assert!(crate::iso::check_reflection(&w, &ws, 1).unwrap().is_some());
        let (a, b) = rotor_flip_pair(&TerminalList::of(&r, &[1, 2, 3, 4, 5]), &TerminalList::of(&w, &[1, 2, 3, 4, 5]), false)
            .unwrap();
        assert!(is_isomorphic(&a, &b).unwrap());
    }

    fn centred_w0() -> (Multigraph, Vec<VertexId>, Vec<VertexId>) {
        // w1..w6 = 1..6, x1..x3 = 7..9, centre 10.
        let edges = [
            (10, 3), (3, 4), (4, 5), (5, 10), (10, 1), (1, 6), (6, 5), (5, 8), (1, 2),
            (2, 3), (3, 7), (1, 9), (9, 2), (2, 7), (7, 4), (4, 8), (8, 6), (6, 9),
        ];
        let g = Multigraph::from_edges(1..=10, &edges);
        (g, (1..=6).map(v).collect(), (7..=9).map(v).collect())
    }

    #[test]
    fn w0_validation_and_s4() {
        let (g, ws, xs) = centred_w0();
        let spec = W0Spec::new(g, ws, xs, 3, 2);
        let report = validate_w0(&spec).unwrap();
        assert!(report.valid, "{report}");
        for q in Partition::all(3) {
            assert!(partition_witness(&spec, &report, &q).unwrap().is_some(), "{q}");
        }
    }

    #[test]
    fn w0_arity_errors() {
        let (g, ws, _) = centred_w0();
        let spec = W0Spec::new(g, ws, Vec::new(), 0, 6);
        assert!(matches!(validate_w0(&spec), Err(ConstructionError::Arity(_))));
    }

    #[test]
    fn w0_with_rotation_but_no_reflection() {
        // C6 on w's, each x_s = 7, 8, 9 joined once to w_{2s-1} and twice to w_{2s}.
        let mut edges: Vec<(u32, u32)> = (1..=6).map(|i| (i, i % 6 + 1)).collect();
        for s in 0..3u32 {
            let x = 7 + s;
            edges.extend([(x, 2 * s + 1), (x, 2 * s + 2), (x, 2 * s + 2)]);
        }
        let g = Multigraph::from_edges(1..=9, &edges);
        let spec = W0Spec::new(g, (1..=6).map(v).collect(), (7..=9).map(v).collect(), 3, 2);
        let report = validate_w0(&spec).unwrap();
        assert!(!report.valid);
        assert!(report.phi.is_some());
        assert!(report.violations.iter().all(|m| m.starts_with("condition 2")));
    }

    #[test]
    fn w0_flip_on_centred_w0() {
        let (g, ws, xs) = centred_w0();
        let spec = W0Spec::new(g, ws, xs, 3, 2);
        let rt = TerminalList::of(&cycle(6), &[1, 2, 3, 4, 5, 6]);
        let yt = TerminalList::of(&k(3), &[1, 2, 3]);
        let out = w0_flip_pair(&rt, &spec, &yt, false).unwrap();
        assert!(t_equivalent(&out.first, &out.second));
        let (a, b) = w0_reversed_pair(&rt, &spec, &yt).unwrap();
        assert!(iso_for(&a).is_isomorphic(&a, &b).unwrap());
    }

    #[test]
    fn w0_flip_with_g_one_is_a_plain_flip() {
        // W0 = C3 with w's and a pendant x per w; g = 1, r = 3.
        let g = Multigraph::from_edges(1..=6, &[(1, 2), (2, 3), (3, 1), (1, 4), (2, 5), (3, 6)]);
        let spec = W0Spec::new(g, vec![v(1), v(2), v(3)], vec![v(4), v(5), v(6)], 3, 1);
        assert!(validate_w0(&spec).unwrap().valid);
        let rt = TerminalList::of(&k(3), &[1, 2, 3]);
        let yt = TerminalList::of(&Multigraph::from_edges([1, 2, 3], &[(1, 2), (2, 3), (2, 2)]), &[1, 2, 3]);
        let out = w0_flip_pair(&rt, &spec, &yt, false).unwrap();
        assert!(t_equivalent(&out.first, &out.second));
    }

    fn arb_graph() -> impl Strategy<Value = Multigraph> {
        proptest::collection::vec((1u32..=5, 1u32..=5), 1..8).prop_map(|es| Multigraph::from_edges(1..=5, &es))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn glue_is_associative(g in arb_graph(), w in arb_graph(), y in arb_graph()) {
            // G(1,2) ⊔ [W(1,2) with Y(1) on W's 3], versus gluing W then Y.
            let w_then_y = glue(&TerminalList::of(&w, &[3]), &TerminalList::of(&y, &[1])).unwrap().graph;
            let one_shot = glue(&TerminalList::of(&g, &[1, 2]), &TerminalList::of(&w_then_y, &[1, 2])).unwrap().graph;
            let gw = glue(&TerminalList::of(&g, &[1, 2]), &TerminalList::of(&w, &[1, 2])).unwrap();
            let host3 = gw.vertex_map[&VertexId(3)];
            let stepwise = glue(&TerminalList::new(gw.graph.clone(), vec![host3]).unwrap(), &TerminalList::of(&y, &[1])).unwrap().graph;
            prop_assert!(iso_for(&one_shot).is_isomorphic(&one_shot, &stepwise).unwrap());
        }

        #[test]
        fn quotients_compose_along_refinement(g in arb_graph()) {
            let gt = TerminalList::of(&g, &[1, 2, 3, 4]);
            let parts = Partition::all(4);
            for p in parts.iter().step_by(3) {
                for q in parts.iter().filter(|q| q.refines(p)).take(3) {
                    // Merge by q first, then merge the survivors of each p block.
                    let mut stepped = quotient(&gt, q).unwrap();
                    for b in p.blocks() {
                        let reps: BTreeSet<VertexId> = b.iter().map(|&i| {
                            let qb = &q.blocks()[q.block_of(i)];
                            VertexId(qb[0] as u32)
                        }).collect();
                        if reps.len() > 1 {
                            stepped = stepped.identify_vertices(reps).unwrap();
                        }
                    }
                    prop_assert_eq!(&stepped, &quotient(&gt, p).unwrap());
                }
            }
        }

        #[test]
        fn twists_preserve_tutte(extra in proptest::collection::vec((3u32..=6, 3u32..=6), 0..4)) {
            // Side {3,4} and rest {5,6}, cut {1,2}, plus random edges inside each part.
            let mut es = vec![(1, 3), (3, 4), (4, 2), (3, 2), (1, 5), (5, 6), (6, 2), (1, 2)];
            for (a, b) in extra {
                let same_side = (a <= 4) == (b <= 4);
                if same_side { es.push((a, b)); }
            }
            let g = Multigraph::from_edges(1..=6, &es);
            let t = whitney_twist(&g, (v(1), v(2)), &BTreeSet::from([v(3), v(4)])).unwrap();
            prop_assert_eq!(tutte(&g), tutte(&t));
        }
    }
}
