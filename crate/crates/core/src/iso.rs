//! Exact isomorphism testing, automorphism enumeration and canonical codes
//! for small multigraphs.
//!
//! Everything here works on the multiplicity matrix of a graph (loops on the
//! diagonal). Candidate vertices are filtered by colour refinement, then a
//! plain backtracking search checks multiplicities against the partial map.
//! Searches iterate source vertices in id order and candidate images in id
//! order, so the enumeration order is lexicographic in the image sequence.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::multigraph::{Multigraph, UnionFind, VertexId};

pub const DEFAULT_MAX_VERTICES: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IsoError {
    #[error("graph has {vertices} vertices, above the isomorphism limit of {limit}")]
    TooLarge { vertices: usize, limit: usize },
    #[error("invalid vertex list: {0}")]
    InvalidVertexList(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("bad mapping text: {0}")]
pub struct MappingParseError(pub String);

/// A bijection between two vertex sets, stored as `source -> target` pairs.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexMapping {
    pairs: BTreeMap<VertexId, VertexId>,
}

impl VertexMapping {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (VertexId, VertexId)>) -> Self {
        Self {
            pairs: pairs.into_iter().collect(),
        }
    }

    pub fn identity(vs: impl IntoIterator<Item = VertexId>) -> Self {
        Self::from_pairs(vs.into_iter().map(|v| (v, v)))
    }

    pub fn insert(&mut self, from: VertexId, to: VertexId) {
        self.pairs.insert(from, to);
    }

    pub fn get(&self, v: VertexId) -> Option<VertexId> {
        self.pairs.get(&v).copied()
    }

    /// Image of `v`; panics when `v` is outside the domain.
    pub fn apply(&self, v: VertexId) -> VertexId {
        self.pairs[&v]
    }

    pub fn iter(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.pairs.iter().map(|(&a, &b)| (a, b))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn domain(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.pairs.keys().copied()
    }

    pub fn image(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.pairs.values().copied()
    }

    pub fn inverse(&self) -> Self {
        Self::from_pairs(self.iter().map(|(a, b)| (b, a)))
    }

    /// `self ∘ inner`: first apply `inner`, then `self`.
    pub fn compose(&self, inner: &VertexMapping) -> Self {
        Self::from_pairs(inner.iter().map(|(a, b)| (a, self.apply(b))))
    }

    pub fn pow(&self, exp: usize) -> Self {
        let mut acc = Self::identity(self.domain());
        for _ in 0..exp {
            acc = self.compose(&acc);
        }
        acc
    }

    /// Order of the mapping viewed as a permutation of its domain.
    pub fn order(&self) -> usize {
        let mut k = 1;
        let mut cur = self.clone();
        let id = Self::identity(self.domain());
        while cur != id {
            cur = self.compose(&cur);
            k += 1;
        }
        k
    }

    /// The ε-preservation predicate: a bijection `V(g) -> V(h)` with
    /// `ε_g(a, b) = ε_h(f(a), f(b))` for every pair, loops included.
    pub fn is_isomorphism(&self, g: &Multigraph, h: &Multigraph) -> bool {
        if g.vertex_count() != h.vertex_count()
            || g.edge_count() != h.edge_count()
            || self.pairs.len() != g.vertex_count()
        {
            return false;
        }
        if !g.vertices().all(|v| self.pairs.contains_key(&v)) {
            return false;
        }
        let image: BTreeSet<VertexId> = self.image().collect();
        if image != *h.vertex_set() {
            return false;
        }
        let mut counts: BTreeMap<(VertexId, VertexId), isize> = BTreeMap::new();
        for (_, a, b) in g.edges() {
            let (fa, fb) = (self.apply(a), self.apply(b));
            *counts.entry((fa.min(fb), fa.max(fb))).or_default() += 1;
        }
        for (_, a, b) in h.edges() {
            *counts.entry((a, b)).or_default() -= 1;
        }
        counts.values().all(|&c| c == 0)
    }

    pub fn is_automorphism(&self, g: &Multigraph) -> bool {
        self.is_isomorphism(g, g)
    }
}

impl fmt::Display for VertexMapping {
    /// `i->j` pairs separated by commas, in source order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (a, b)) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}->{b}")?;
        }
        Ok(())
    }
}

impl FromStr for VertexMapping {
    type Err = MappingParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut out = Self::new();
        let s = s.trim();
        if s.is_empty() {
            return Ok(out);
        }
        for item in s.split(',') {
            let (a, b) = item
                .split_once("->")
                .ok_or_else(|| MappingParseError(format!("`{item}` lacks `->`")))?;
            let parse = |t: &str| {
                t.trim()
                    .parse::<u32>()
                    .map(VertexId)
                    .map_err(|_| MappingParseError(format!("`{t}` is not a vertex id")))
            };
            let (a, b) = (parse(a)?, parse(b)?);
            if out.pairs.insert(a, b).is_some() {
                return Err(MappingParseError(format!("vertex {a} mapped twice")));
            }
        }
        Ok(out)
    }
}

/// Isomorphism-class fingerprint: equal codes iff isomorphic graphs.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalCode(pub Vec<u32>);

impl CanonicalCode {
    pub fn to_bytes(&self) -> Vec<u8> {
        self.0.iter().flat_map(|w| w.to_le_bytes()).collect()
    }
}

/// Dense multiplicity matrix with loops on the diagonal.
#[derive(Debug, Clone)]
pub(crate) struct Dense {
    pub(crate) n: usize,
    pub(crate) m: Vec<u32>,
    pub(crate) ids: Vec<VertexId>,
}

impl Dense {
    pub(crate) fn from_graph(g: &Multigraph) -> Self {
        let ids: Vec<VertexId> = g.vertices().collect();
        let index: BTreeMap<VertexId, usize> =
            ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let n = ids.len();
        let mut m = vec![0u32; n * n];
        for (_, a, b) in g.edges() {
            let (i, j) = (index[&a], index[&b]);
            m[i * n + j] += 1;
            if i != j {
                m[j * n + i] += 1;
            }
        }
        Self { n, m, ids }
    }

    #[inline]
    pub(crate) fn get(&self, i: usize, j: usize) -> u32 {
        self.m[i * self.n + j]
    }

    fn index_of(&self, v: VertexId) -> Option<usize> {
        self.ids.binary_search(&v).ok()
    }
}

/// Colour refinement to a stable ordered partition. Colours are dense ranks
/// `0..cells`; the order of cells depends only on the isomorphism class, so the
/// result is label-invariant.
/// Own colour, loop count, sorted (neighbour colour, multiplicity) pairs.
type Signature = (u32, u32, Vec<(u32, u32)>);

pub(crate) fn refine(n: usize, m: &[u32], colors: &mut [u32]) {
    let mut cells = distinct(colors);
    loop {
        let sigs: Vec<Signature> = (0..n)
            .map(|v| {
                let mut nb: Vec<(u32, u32)> = (0..n)
                    .filter(|&w| w != v && m[v * n + w] > 0)
                    .map(|w| (colors[w], m[v * n + w]))
                    .collect();
                nb.sort_unstable();
                (colors[v], m[v * n + v], nb)
            })
            .collect();
        let mut sorted: Vec<&Signature> = sigs.iter().collect();
        sorted.sort();
        sorted.dedup();
        for v in 0..n {
            colors[v] = sorted.binary_search(&&sigs[v]).expect("signature present") as u32;
        }
        let now = sorted.len();
        if now == cells {
            return;
        }
        cells = now;
    }
}

fn distinct(colors: &[u32]) -> usize {
    colors.iter().collect::<BTreeSet<_>>().len()
}

fn individualize(colors: &[u32], v: usize) -> Vec<u32> {
    let cv = colors[v];
    colors
        .iter()
        .enumerate()
        .map(|(w, &c)| if w == v || c < cv { c } else { c + 1 })
        .collect()
}

struct CanonSearch<'a> {
    n: usize,
    m: &'a [u32],
    first: Option<(Vec<u32>, Vec<usize>)>,
    best: Option<(Vec<u32>, Vec<usize>)>,
    autos: Vec<Vec<usize>>,
}

impl CanonSearch<'_> {
    fn leaf_code(&self, order: &[usize]) -> Vec<u32> {
        let n = self.n;
        let mut code = Vec::with_capacity(1 + n * (n + 1) / 2);
        code.push(n as u32);
        for i in 0..n {
            for j in i..n {
                code.push(self.m[order[i] * n + order[j]]);
            }
        }
        code
    }

    fn record_auto(&mut self, from: &[usize], to: &[usize]) {
        let mut perm = vec![0usize; self.n];
        for i in 0..self.n {
            perm[from[i]] = to[i];
        }
        if perm.iter().enumerate().any(|(i, &p)| i != p) && !self.autos.contains(&perm) {
            self.autos.push(perm);
        }
    }

    fn dive(&mut self, colors: Vec<u32>, prefix: &mut Vec<usize>) {
        let n = self.n;
        let cells = distinct(&colors);
        if cells == n {
            let mut order = vec![0usize; n];
            for (v, &c) in colors.iter().enumerate() {
                order[c as usize] = v;
            }
            let code = self.leaf_code(&order);
            match &self.first {
                None => {
                    self.first = Some((code.clone(), order.clone()));
                    self.best = Some((code, order));
                    return;
                }
                Some((fc, fo)) if *fc == code => {
                    let fo = fo.clone();
                    self.record_auto(&fo, &order);
                }
                _ => {}
            }
            let (bc, bo) = self.best.as_ref().expect("best set with first");
            if code == *bc {
                let bo = bo.clone();
                self.record_auto(&bo, &order);
            } else if code < *bc {
                self.best = Some((code, order));
            }
            return;
        }

        // Target cell: smallest non-singleton cell, lowest colour on ties.
        let mut sizes = vec![0usize; cells];
        for &c in &colors {
            sizes[c as usize] += 1;
        }
        let target = (0..cells)
            .filter(|&c| sizes[c] > 1)
            .min_by_key(|&c| (sizes[c], c))
            .expect("non-discrete partition has a non-singleton cell") as u32;
        let cell: Vec<usize> = (0..n).filter(|&v| colors[v] == target).collect();

        let mut explored: Vec<usize> = Vec::new();
        for &v in &cell {
            if !explored.is_empty() && self.same_orbit(prefix, &explored, v) {
                continue;
            }
            let mut next = individualize(&colors, v);
            refine(n, self.m, &mut next);
            prefix.push(v);
            self.dive(next, prefix);
            prefix.pop();
            explored.push(v);
        }
    }

    /// Is `v` in the orbit of an explored vertex under the known automorphisms
    /// that fix `prefix` pointwise?
    fn same_orbit(&self, prefix: &[usize], explored: &[usize], v: usize) -> bool {
        let mut uf = UnionFind::new(self.n);
        for a in &self.autos {
            if prefix.iter().all(|&p| a[p] == p) {
                for (i, &j) in a.iter().enumerate() {
                    uf.union(i, j);
                }
            }
        }
        let rv = uf.find(v);
        explored.iter().any(|&u| uf.find(u) == rv)
    }
}

/// Canonical code and the vertex order (by dense index) that realises it.
pub(crate) fn canonical_form_dense(n: usize, m: &[u32]) -> (CanonicalCode, Vec<usize>) {
    if n == 0 {
        return (CanonicalCode(vec![0]), Vec::new());
    }
    let mut colors = vec![0u32; n];
    refine(n, m, &mut colors);
    let mut search = CanonSearch {
        n,
        m,
        first: None,
        best: None,
        autos: Vec::new(),
    };
    search.dive(colors, &mut Vec::new());
    let (code, order) = search.best.expect("at least one leaf");
    (CanonicalCode(code), order)
}

/// Isomorphism routines with a configurable vertex limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Iso {
    pub max_vertices: usize,
}

impl Default for Iso {
    fn default() -> Self {
        Self {
            max_vertices: DEFAULT_MAX_VERTICES,
        }
    }
}

struct Matching<'a> {
    src: &'a Dense,
    dst: &'a Dense,
    src_col: Vec<u32>,
    dst_col: Vec<u32>,
    forced: Vec<Option<usize>>,
    map: Vec<usize>,
    used: Vec<bool>,
}

impl Matching<'_> {
    fn compatible(&self, i: usize, j: usize) -> bool {
        if self.used[j] || self.src_col[i] != self.dst_col[j] {
            return false;
        }
        if let Some(f) = self.forced[i] {
            if f != j {
                return false;
            }
        }
        if self.src.get(i, i) != self.dst.get(j, j) {
            return false;
        }
        (0..i).all(|k| self.src.get(i, k) == self.dst.get(j, self.map[k]))
    }

    /// Depth-first over source indices; `visit` returns false to stop.
    fn run(&mut self, i: usize, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        let n = self.src.n;
        if i == n {
            return visit(&self.map);
        }
        for j in 0..n {
            if self.compatible(i, j) {
                self.map[i] = j;
                self.used[j] = true;
                let go_on = self.run(i + 1, visit);
                self.used[j] = false;
                if !go_on {
                    return false;
                }
            }
        }
        true
    }
}

impl Iso {
    pub fn new(max_vertices: usize) -> Self {
        Self { max_vertices }
    }

    fn check(&self, g: &Multigraph) -> Result<(), IsoError> {
        if g.vertex_count() > self.max_vertices {
            return Err(IsoError::TooLarge {
                vertices: g.vertex_count(),
                limit: self.max_vertices,
            });
        }
        Ok(())
    }

    /// Runs the backtracking search; `constraints` pins selected images.
    fn search(
        &self,
        g: &Multigraph,
        h: &Multigraph,
        constraints: &[(VertexId, VertexId)],
        stop_after_first: bool,
    ) -> Result<Vec<VertexMapping>, IsoError> {
        self.check(g)?;
        self.check(h)?;
        if g.vertex_count() != h.vertex_count() || g.edge_count() != h.edge_count() {
            return Ok(Vec::new());
        }
        let src = Dense::from_graph(g);
        let dst = Dense::from_graph(h);
        let n = src.n;

        let mut forced = vec![None; n];
        for &(a, b) in constraints {
            let (Some(i), Some(j)) = (src.index_of(a), dst.index_of(b)) else {
                return Ok(Vec::new());
            };
            match forced[i] {
                Some(prev) if prev != j => return Ok(Vec::new()),
                _ => forced[i] = Some(j),
            }
        }

        // Joint refinement on the block-diagonal union makes colours comparable.
        let size = 2 * n;
        let mut joint = vec![0u32; size * size];
        for i in 0..n {
            for j in 0..n {
                joint[i * size + j] = src.get(i, j);
                joint[(n + i) * size + (n + j)] = dst.get(i, j);
            }
        }
        let mut colors = vec![0u32; size];
        refine(size, &joint, &mut colors);
        let (src_col, dst_col) = (colors[..n].to_vec(), colors[n..].to_vec());
        let mut a = src_col.clone();
        let mut b = dst_col.clone();
        a.sort_unstable();
        b.sort_unstable();
        if a != b {
            return Ok(Vec::new());
        }

        let mut m = Matching {
            src: &src,
            dst: &dst,
            src_col,
            dst_col,
            forced,
            map: vec![0; n],
            used: vec![false; n],
        };
        let mut found = Vec::new();
        m.run(0, &mut |map| {
            found.push(VertexMapping::from_pairs(
                map.iter().enumerate().map(|(i, &j)| (src.ids[i], dst.ids[j])),
            ));
            !stop_after_first
        });
        Ok(found)
    }

    pub fn find_isomorphism(
        &self,
        g: &Multigraph,
        h: &Multigraph,
    ) -> Result<Option<VertexMapping>, IsoError> {
        Ok(self.search(g, h, &[], true)?.into_iter().next())
    }

    /// First isomorphism honouring the pinned `source -> target` pairs.
    pub fn find_isomorphism_with(
        &self,
        g: &Multigraph,
        h: &Multigraph,
        constraints: &[(VertexId, VertexId)],
    ) -> Result<Option<VertexMapping>, IsoError> {
        Ok(self.search(g, h, constraints, true)?.into_iter().next())
    }

    pub fn is_isomorphic(&self, g: &Multigraph, h: &Multigraph) -> Result<bool, IsoError> {
        Ok(self.find_isomorphism(g, h)?.is_some())
    }

    /// Every isomorphism, lexicographic by image sequence.
    pub fn enumerate_isomorphisms(
        &self,
        g: &Multigraph,
        h: &Multigraph,
    ) -> Result<Vec<VertexMapping>, IsoError> {
        self.search(g, h, &[], false)
    }

    pub fn automorphisms(&self, g: &Multigraph) -> Result<Vec<VertexMapping>, IsoError> {
        self.enumerate_isomorphisms(g, g)
    }

    /// An automorphism with `u_i -> u_{i+1}` (indices mod `k`), if one exists.
    pub fn check_cyclic_orbit(
        &self,
        r: &Multigraph,
        orbit: &[VertexId],
    ) -> Result<Option<VertexMapping>, IsoError> {
        validate_list(r, orbit)?;
        let k = orbit.len();
        let pins: Vec<(VertexId, VertexId)> =
            (0..k).map(|i| (orbit[i], orbit[(i + 1) % k])).collect();
        self.find_isomorphism_with(r, r, &pins)
    }

    /// An automorphism with `w_{1+s} -> w_{a-s}` for `0 <= s < k`, indices
    /// 1-based and mod `k`.
    pub fn check_reflection(
        &self,
        w: &Multigraph,
        ws: &[VertexId],
        a: usize,
    ) -> Result<Option<VertexMapping>, IsoError> {
        validate_list(w, ws)?;
        let k = ws.len();
        if a < 1 || a > k {
            return Err(IsoError::InvalidVertexList(format!(
                "reflection index {a} outside 1..={k}"
            )));
        }
        let pins = reflection_pins(ws, a);
        self.find_isomorphism_with(w, w, &pins)
    }

    pub fn canonical_code(&self, g: &Multigraph) -> Result<CanonicalCode, IsoError> {
        self.check(g)?;
        let d = Dense::from_graph(g);
        Ok(canonical_form_dense(d.n, &d.m).0)
    }
}

/// Pins `w_{1+s} -> w_{a-s}` for every `s` (1-based, cyclic).
pub(crate) fn reflection_pins(ws: &[VertexId], a: usize) -> Vec<(VertexId, VertexId)> {
    let k = ws.len() as i64;
    (0..k)
        .map(|s| {
            let target = (a as i64 - s - 1).rem_euclid(k) as usize;
            (ws[s as usize], ws[target])
        })
        .collect()
}

fn validate_list(g: &Multigraph, vs: &[VertexId]) -> Result<(), IsoError> {
    if vs.is_empty() {
        return Err(IsoError::InvalidVertexList("empty list".into()));
    }
    let set: BTreeSet<VertexId> = vs.iter().copied().collect();
    if set.len() != vs.len() {
        return Err(IsoError::InvalidVertexList("repeated vertex".into()));
    }
    if let Some(v) = vs.iter().find(|v| !g.has_vertex(**v)) {
        return Err(IsoError::InvalidVertexList(format!("vertex {v} not in graph")));
    }
    Ok(())
}

pub fn find_isomorphism(g: &Multigraph, h: &Multigraph) -> Result<Option<VertexMapping>, IsoError> {
    Iso::default().find_isomorphism(g, h)
}

pub fn is_isomorphic(g: &Multigraph, h: &Multigraph) -> Result<bool, IsoError> {
    Iso::default().is_isomorphic(g, h)
}

pub fn enumerate_isomorphisms(
    g: &Multigraph,
    h: &Multigraph,
) -> Result<Vec<VertexMapping>, IsoError> {
    Iso::default().enumerate_isomorphisms(g, h)
}

pub fn automorphisms(g: &Multigraph) -> Result<Vec<VertexMapping>, IsoError> {
    Iso::default().automorphisms(g)
}

pub fn check_cyclic_orbit(
    r: &Multigraph,
    orbit: &[VertexId],
) -> Result<Option<VertexMapping>, IsoError> {
    Iso::default().check_cyclic_orbit(r, orbit)
}

pub fn check_reflection(
    w: &Multigraph,
    ws: &[VertexId],
    a: usize,
) -> Result<Option<VertexMapping>, IsoError> {
    Iso::default().check_reflection(w, ws, a)
}

pub fn canonical_code(g: &Multigraph) -> Result<CanonicalCode, IsoError> {
    Iso::default().canonical_code(g)
}
