//! Undirected multigraphs with loops and explicitly identified parallel edges.
//!
//! Every edge carries its own [`EdgeId`], so two parallel copies between the
//! same pair of vertices stay distinguishable through deletion, contraction
//! and gluing. Graph values are treated as immutable: all operations return a
//! new graph and leave the receiver untouched.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("unknown edge {0}")]
    UnknownEdge(EdgeId),
    #[error("vertex {0} declared twice")]
    DuplicateVertex(VertexId),
    #[error("edge {0} declared twice")]
    DuplicateEdge(EdgeId),
    #[error("vertex set to identify is empty")]
    EmptyVertexSet,
}

/// A set of edge ids drawn from one graph (the `A` of a subset expansion).
pub type EdgeSubset = BTreeSet<EdgeId>;

/// Records how [`Multigraph::contract_edge`] merged the two ends of an edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MergeRecord {
    /// The surviving (smaller) vertex id.
    pub kept: VertexId,
    /// The vertex folded into `kept`; `None` when a loop was contracted.
    pub removed: Option<VertexId>,
}

impl MergeRecord {
    /// Where `v` lives after the merge.
    pub fn map(&self, v: VertexId) -> VertexId {
        if Some(v) == self.removed {
            self.kept
        } else {
            v
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Multigraph {
    vertices: BTreeSet<VertexId>,
    edges: BTreeMap<EdgeId, (VertexId, VertexId)>,
    name: Option<String>,
}

fn ordered(u: VertexId, v: VertexId) -> (VertexId, VertexId) {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}

impl Multigraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a graph on the given vertex ids whose edges receive ids
    /// `0, 1, 2, ...` in list order.
    ///
    /// Panics if an edge names a vertex that is not listed; this is meant
    /// for literal fixtures.
    pub fn from_edges(vertices: impl IntoIterator<Item = u32>, edges: &[(u32, u32)]) -> Self {
        let mut g = Self::new();
        for v in vertices {
            g.add_vertex(VertexId(v)).expect("duplicate vertex in fixture");
        }
        for &(u, v) in edges {
            g.add_edge(VertexId(u), VertexId(v))
                .expect("fixture edge references an undeclared vertex");
        }
        g
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn set_name(&mut self, name: Option<String>) {
        self.name = name;
    }

    pub fn add_vertex(&mut self, v: VertexId) -> Result<(), GraphError> {
        if !self.vertices.insert(v) {
            return Err(GraphError::DuplicateVertex(v));
        }
        Ok(())
    }

    /// Adds an edge with the next unused id.
    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<EdgeId, GraphError> {
        let id = self.next_edge_id();
        self.insert_edge(id, u, v)?;
        Ok(id)
    }

    pub fn insert_edge(&mut self, id: EdgeId, u: VertexId, v: VertexId) -> Result<(), GraphError> {
        for w in [u, v] {
            if !self.vertices.contains(&w) {
                return Err(GraphError::UnknownVertex(w));
            }
        }
        if self.edges.contains_key(&id) {
            return Err(GraphError::DuplicateEdge(id));
        }
        self.edges.insert(id, ordered(u, v));
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices.iter().copied()
    }

    pub fn vertex_set(&self) -> &BTreeSet<VertexId> {
        &self.vertices
    }

    /// Edges in id order; endpoints are reported with the smaller id first.
    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, VertexId, VertexId)> + '_ {
        self.edges.iter().map(|(&e, &(u, v))| (e, u, v))
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges.keys().copied()
    }

    pub fn has_vertex(&self, v: VertexId) -> bool {
        self.vertices.contains(&v)
    }

    pub fn has_edge(&self, e: EdgeId) -> bool {
        self.edges.contains_key(&e)
    }

    pub fn endpoints(&self, e: EdgeId) -> Result<(VertexId, VertexId), GraphError> {
        self.edges.get(&e).copied().ok_or(GraphError::UnknownEdge(e))
    }

    pub fn is_loop(&self, e: EdgeId) -> Result<bool, GraphError> {
        let (u, v) = self.endpoints(e)?;
        Ok(u == v)
    }

    /// Number of edges joining `u` and `v` (loops at `u` when `u == v`).
    pub fn multiplicity(&self, u: VertexId, v: VertexId) -> usize {
        let key = ordered(u, v);
        self.edges.values().filter(|&&p| p == key).count()
    }

    pub fn loop_count(&self, v: VertexId) -> usize {
        self.multiplicity(v, v)
    }

    pub fn total_loops(&self) -> usize {
        self.edges.values().filter(|(u, v)| u == v).count()
    }

    /// Non-loop degree. Loops are deliberately excluded, see [`Self::loop_count`].
    pub fn degree(&self, v: VertexId) -> usize {
        self.edges
            .values()
            .filter(|&&(a, b)| a != b && (a == v || b == v))
            .count()
    }

    pub fn neighbors(&self, v: VertexId) -> BTreeSet<VertexId> {
        self.edges
            .values()
            .filter_map(|&(a, b)| {
                if a == v && b != v {
                    Some(b)
                } else if b == v && a != v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn max_vertex_id(&self) -> Option<VertexId> {
        self.vertices.iter().next_back().copied()
    }

    pub fn next_vertex_id(&self) -> VertexId {
        self.max_vertex_id().map_or(VertexId(0), |v| VertexId(v.0 + 1))
    }

    pub fn next_edge_id(&self) -> EdgeId {
        self.edges
            .keys()
            .next_back()
            .map_or(EdgeId(0), |e| EdgeId(e.0 + 1))
    }

    /// `G \ A`.
    pub fn delete_edges<I>(&self, a: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = EdgeId>,
    {
        let mut out = self.clone();
        for e in a {
            if !self.edges.contains_key(&e) {
                return Err(GraphError::UnknownEdge(e));
            }
            out.edges.remove(&e);
        }
        Ok(out)
    }

    pub fn delete_edge(&self, e: EdgeId) -> Result<Self, GraphError> {
        self.delete_edges([e])
    }

    /// `G / e`: delete `e`, then identify its ends into the smaller id.
    ///
    /// Remaining parallel copies of `e` become loops. Contracting a loop
    /// just deletes it.
    pub fn contract_edge(&self, e: EdgeId) -> Result<(Self, MergeRecord), GraphError> {
        let (u, v) = self.endpoints(e)?;
        let mut out = self.delete_edge(e)?;
        if u == v {
            return Ok((out, MergeRecord { kept: u, removed: None }));
        }
        // u < v by construction of `ordered`.
        out.merge_into(u, v);
        Ok((out, MergeRecord { kept: u, removed: Some(v) }))
    }

    fn merge_into(&mut self, keep: VertexId, gone: VertexId) {
        self.vertices.remove(&gone);
        for ends in self.edges.values_mut() {
            let a = if ends.0 == gone { keep } else { ends.0 };
            let b = if ends.1 == gone { keep } else { ends.1 };
            *ends = ordered(a, b);
        }
    }

    /// `G · V'`: identify every vertex of `vs` into the smallest of them.
    pub fn identify_vertices<I>(&self, vs: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = VertexId>,
    {
        let set: BTreeSet<VertexId> = vs.into_iter().collect();
        let Some(&keep) = set.iter().next() else {
            return Err(GraphError::EmptyVertexSet);
        };
        for &v in &set {
            if !self.vertices.contains(&v) {
                return Err(GraphError::UnknownVertex(v));
            }
        }
        let mut out = self.clone();
        for &v in set.iter().skip(1) {
            out.merge_into(keep, v);
        }
        Ok(out)
    }

    /// `(r(A), c(A))` of the spanning subgraph `(V, A)`.
    pub fn rank_and_components<I>(&self, a: I) -> Result<(usize, usize), GraphError>
    where
        I: IntoIterator<Item = EdgeId>,
    {
        let index: BTreeMap<VertexId, usize> = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i))
            .collect();
        let mut uf = UnionFind::new(self.vertices.len());
        for e in a {
            let (u, v) = self.endpoints(e)?;
            uf.union(index[&u], index[&v]);
        }
        let c = uf.count();
        Ok((self.vertices.len() - c, c))
    }

    pub fn component_count(&self) -> usize {
        self.rank_and_components(self.edge_ids().collect::<Vec<_>>())
            .map(|(_, c)| c)
            .unwrap_or(0)
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() <= 1
    }

    /// A copy with every vertex id renamed through `f`, which must be injective
    /// on the vertex set.
    pub fn relabel(&self, f: impl Fn(VertexId) -> VertexId) -> Self {
        Self {
            vertices: self.vertices.iter().map(|&v| f(v)).collect(),
            edges: self
                .edges
                .iter()
                .map(|(&e, &(u, v))| (e, ordered(f(u), f(v))))
                .collect(),
            name: self.name.clone(),
        }
    }

    /// Subgraph on the given vertices keeping every edge with both ends inside.
    pub fn induced(&self, keep: &BTreeSet<VertexId>) -> Self {
        Self {
            vertices: self.vertices.intersection(keep).copied().collect(),
            edges: self
                .edges
                .iter()
                .filter(|(_, (u, v))| keep.contains(u) && keep.contains(v))
                .map(|(&e, &p)| (e, p))
                .collect(),
            name: None,
        }
    }

    fn edge_subgraph(&self, edges: &BTreeSet<EdgeId>) -> Self {
        let mut vertices = BTreeSet::new();
        let mut kept = BTreeMap::new();
        for e in edges {
            let (u, v) = self.edges[e];
            vertices.insert(u);
            vertices.insert(v);
            kept.insert(*e, (u, v));
        }
        Self {
            vertices,
            edges: kept,
            name: None,
        }
    }

    /// Bridges, loops, blocks, components and parallel classes in one pass.
    pub fn structure(&self) -> Structure {
        let loops: BTreeSet<EdgeId> = self
            .edges
            .iter()
            .filter(|(_, (u, v))| u == v)
            .map(|(&e, _)| e)
            .collect();

        let mut parallel_classes: BTreeMap<(VertexId, VertexId), BTreeSet<EdgeId>> =
            BTreeMap::new();
        for (&e, &p) in &self.edges {
            parallel_classes.entry(p).or_default().insert(e);
        }

        let components = self.components();
        let (bridges, block_edges) = self.biconnected_edge_classes();
        let mut blocks: Vec<Multigraph> = block_edges.iter().map(|b| self.edge_subgraph(b)).collect();
        for &l in &loops {
            blocks.push(self.edge_subgraph(&BTreeSet::from([l])));
        }
        blocks.sort_by_key(|b| b.edge_ids().next());

        Structure {
            bridges,
            loops,
            blocks,
            is_connected: components.len() <= 1,
            components,
            parallel_classes,
        }
    }

    /// Connected components, each with its original ids, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Multigraph> {
        let verts: Vec<VertexId> = self.vertices.iter().copied().collect();
        let index: BTreeMap<VertexId, usize> =
            verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut uf = UnionFind::new(verts.len());
        for &(u, v) in self.edges.values() {
            uf.union(index[&u], index[&v]);
        }
        let mut groups: BTreeMap<usize, BTreeSet<VertexId>> = BTreeMap::new();
        for (i, &v) in verts.iter().enumerate() {
            groups.entry(uf.find(i)).or_default().insert(v);
        }
        let mut out: Vec<Multigraph> = groups.values().map(|s| self.induced(s)).collect();
        out.sort_by_key(|c| c.vertices().next());
        out
    }

    /// Hopcroft–Tarjan over edge ids, ignoring loops. Returns the bridges and
    /// the edge sets of all non-loop blocks (bridges included as one-edge
    /// blocks).
    fn biconnected_edge_classes(&self) -> (BTreeSet<EdgeId>, Vec<BTreeSet<EdgeId>>) {
        let verts: Vec<VertexId> = self.vertices.iter().copied().collect();
        let index: BTreeMap<VertexId, usize> =
            verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let n = verts.len();
        let mut adj: Vec<Vec<(usize, EdgeId)>> = vec![Vec::new(); n];
        for (&e, &(u, v)) in &self.edges {
            if u != v {
                let (a, b) = (index[&u], index[&v]);
                adj[a].push((b, e));
                adj[b].push((a, e));
            }
        }

        let mut disc = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut timer = 0;
        let mut edge_stack: Vec<EdgeId> = Vec::new();
        let mut blocks = Vec::new();
        let mut bridges = BTreeSet::new();

        for root in 0..n {
            if disc[root] != usize::MAX {
                continue;
            }
            disc[root] = timer;
            low[root] = timer;
            timer += 1;
            // (vertex, edge used to enter it, next adjacency position)
            let mut stack: Vec<(usize, Option<EdgeId>, usize)> = vec![(root, None, 0)];
            while let Some(&(v, via, pos)) = stack.last() {
                if pos < adj[v].len() {
                    let (w, e) = adj[v][pos];
                    if let Some(top) = stack.last_mut() {
                        top.2 += 1;
                    }
                    if Some(e) == via {
                        continue;
                    }
                    if disc[w] == usize::MAX {
                        edge_stack.push(e);
                        disc[w] = timer;
                        low[w] = timer;
                        timer += 1;
                        stack.push((w, Some(e), 0));
                    } else if disc[w] < disc[v] {
                        edge_stack.push(e);
                        low[v] = low[v].min(disc[w]);
                    }
                } else {
                    stack.pop();
                    if let Some(&(parent, _, _)) = stack.last() {
                        low[parent] = low[parent].min(low[v]);
                        if low[v] >= disc[parent] {
                            let entry = via.expect("non-root has an entry edge");
                            let mut block = BTreeSet::new();
                            while let Some(x) = edge_stack.pop() {
                                block.insert(x);
                                if x == entry {
                                    break;
                                }
                            }
                            if low[v] > disc[parent] {
                                bridges.insert(entry);
                            }
                            blocks.push(block);
                        }
                    }
                }
            }
        }
        (bridges, blocks)
    }
}

/// Result of [`Multigraph::structure`].
#[derive(Debug, Clone)]
pub struct Structure {
    pub bridges: BTreeSet<EdgeId>,
    pub loops: BTreeSet<EdgeId>,
    /// Maximal 2-connected pieces, bridges and loops, each as a graph with
    /// the original ids; ordered by smallest edge id.
    pub blocks: Vec<Multigraph>,
    pub components: Vec<Multigraph>,
    pub parallel_classes: BTreeMap<(VertexId, VertexId), BTreeSet<EdgeId>>,
    pub is_connected: bool,
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
    sets: usize,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            sets: n,
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns true when two different sets were joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        self.sets -= 1;
        true
    }

    pub(crate) fn count(&self) -> usize {
        self.sets
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: u32) -> VertexId {
        VertexId(i)
    }

    fn triangle() -> Multigraph {
        Multigraph::from_edges([1, 2, 3], &[(1, 2), (2, 3), (3, 1)])
    }

    fn path(n: u32) -> Multigraph {
        let edges: Vec<(u32, u32)> = (1..n).map(|i| (i, i + 1)).collect();
        Multigraph::from_edges(1..=n, &edges)
    }

    #[test]
    fn delete_one_triangle_edge_gives_path() {
        let g = triangle().delete_edge(EdgeId(2)).unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 2);
        assert!(g.has_edge(EdgeId(0)) && g.has_edge(EdgeId(1)));
        assert_eq!(g.structure().bridges.len(), 2);
    }

    #[test]
    fn delete_nothing_is_identity() {
        let g = triangle();
        assert_eq!(g.delete_edges([]).unwrap(), g);
    }

    #[test]
    fn delete_unknown_edge_fails() {
        assert_eq!(
            triangle().delete_edge(EdgeId(9)),
            Err(GraphError::UnknownEdge(EdgeId(9)))
        );
    }

    #[test]
    fn contract_triangle_edge_gives_digon() {
        let (g, rec) = triangle().contract_edge(EdgeId(0)).unwrap();
        assert_eq!(rec, MergeRecord { kept: v(1), removed: Some(v(2)) });
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.multiplicity(v(1), v(3)), 2);
        assert_eq!(g.total_loops(), 0);
    }

    #[test]
    fn contract_digon_edge_leaves_loop() {
        let g = Multigraph::from_edges([1, 2], &[(1, 2), (1, 2)]);
        let (h, _) = g.contract_edge(EdgeId(0)).unwrap();
        assert_eq!(h.vertex_count(), 1);
        assert_eq!(h.loop_count(v(1)), 1);
    }

    #[test]
    fn contract_loop_is_deletion() {
        let g = Multigraph::from_edges([1], &[(1, 1)]);
        let (h, rec) = g.contract_edge(EdgeId(0)).unwrap();
        assert_eq!(rec.removed, None);
        assert_eq!(h.edge_count(), 0);
        assert_eq!(h.vertex_count(), 1);
    }

    #[test]
    fn contract_middle_of_p5() {
        let (g, rec) = path(5).contract_edge(EdgeId(2)).unwrap();
        assert_eq!(rec.kept, v(3));
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.multiplicity(v(3), v(5)), 1);
        assert_eq!(g.structure().bridges.len(), 3);
    }

    #[test]
    fn identify_single_edge_ends() {
        let g = Multigraph::from_edges([1, 2], &[(1, 2)]);
        let h = g.identify_vertices([v(1), v(2)]).unwrap();
        assert_eq!(h.vertex_count(), 1);
        assert_eq!(h.loop_count(v(1)), 1);
    }

    #[test]
    fn identify_singleton_is_identity() {
        let g = triangle();
        assert_eq!(g.identify_vertices([v(2)]).unwrap(), g);
    }

    #[test]
    fn identify_two_triangle_vertices() {
        let h = triangle().identify_vertices([v(1), v(2)]).unwrap();
        assert_eq!(h.multiplicity(v(1), v(3)), 2);
        assert_eq!(h.loop_count(v(1)), 1);
    }

    #[test]
    fn identify_errors() {
        assert_eq!(
            triangle().identify_vertices([]),
            Err(GraphError::EmptyVertexSet)
        );
        assert_eq!(
            triangle().identify_vertices([v(7)]),
            Err(GraphError::UnknownVertex(v(7)))
        );
    }

    #[test]
    fn rank_and_components_examples() {
        assert_eq!(triangle().rank_and_components([]).unwrap(), (0, 3));
        let all: Vec<_> = triangle().edge_ids().collect();
        assert_eq!(triangle().rank_and_components(all).unwrap(), (2, 1));
        let p5 = path(5);
        assert_eq!(p5.rank_and_components([EdgeId(0), EdgeId(3)]).unwrap(), (2, 3));
    }

    #[test]
    fn structure_of_p3_and_digon() {
        let s = path(3).structure();
        assert_eq!(s.bridges.len(), 2);
        assert!(s.loops.is_empty());
        assert_eq!(s.blocks.len(), 2);
        assert!(s.is_connected);

        let d = Multigraph::from_edges([1, 2], &[(1, 2), (1, 2)]).structure();
        assert!(d.bridges.is_empty());
        assert_eq!(d.blocks.len(), 1);
        assert_eq!(d.parallel_classes[&(v(1), v(2))].len(), 2);
    }

    #[test]
    fn structure_blocks_of_bowtie_with_loop() {
        // Two triangles sharing vertex 3, a pendant edge and a loop.
        let g = Multigraph::from_edges(
            1..=6,
            &[(1, 2), (2, 3), (3, 1), (3, 4), (4, 5), (5, 3), (5, 6), (6, 6)],
        );
        let s = g.structure();
        assert_eq!(s.bridges, BTreeSet::from([EdgeId(6)]));
        assert_eq!(s.loops, BTreeSet::from([EdgeId(7)]));
        let sizes: Vec<usize> = s.blocks.iter().map(|b| b.edge_count()).collect();
        assert_eq!(sizes, vec![3, 3, 1, 1]);
        assert_eq!(s.components.len(), 1);
    }

    #[test]
    fn disconnected_components() {
        let g = Multigraph::from_edges(1..=5, &[(1, 2), (3, 4)]);
        let s = g.structure();
        assert!(!s.is_connected);
        assert_eq!(s.components.len(), 3);
    }

    #[test]
    fn degree_ignores_loops() {
        let g = Multigraph::from_edges([1, 2], &[(1, 1), (1, 2), (1, 2)]);
        assert_eq!(g.degree(v(1)), 2);
        assert_eq!(g.loop_count(v(1)), 1);
    }
}
