//! Tutte polynomials: a subset-expansion oracle and a memoized
//! deletion–contraction engine.
//!
//! The engine works on a dense multiplicity matrix. Each node strips loops,
//! splits the graph into blocks, closes two-vertex blocks with
//! `x + y + ... + y^(m-1)`, and otherwise removes a whole parallel class `F`
//! between `u` and `v` at once:
//!
//! `T(G) = T(G \ F) + (1 + y + ... + y^(|F|-1)) T((G \ F) · uv)`
//!
//! which holds inside a 2-connected block with at least three vertices
//! (there `G \ F` keeps a `u`–`v` path, so no edge of `F` is ever a bridge).

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::bipoly::BiPoly;
use crate::iso::{canonical_form_dense, CanonicalCode, Dense};
use crate::multigraph::{Multigraph, UnionFind, VertexId};

pub const DEFAULT_ORACLE_EDGE_LIMIT: usize = 20;
pub const DEFAULT_MEMO_MAX_VERTICES: usize = 10;
pub const MEMO_ENV_VAR: &str = "TUTTE_FORGE_MEMO_MAX";

/// Below this many edges a node is not worth a task split.
const PARALLEL_EDGE_CUTOFF: u32 = 14;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TutteError {
    #[error("graph has {edges} edges, above the subset-expansion limit of {limit}")]
    OracleLimit { edges: usize, limit: usize },
    #[error("spanning trees are only counted on connected graphs")]
    Disconnected,
    #[error("invalid engine configuration: {0}")]
    Config(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgePickPolicy {
    /// The pair whose endpoint degree sum is largest (ties: smallest pair).
    MaxDegreeSum,
    /// The lexicographically smallest endpoint pair.
    FirstId,
}

impl std::str::FromStr for EdgePickPolicy {
    type Err = TutteError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "max_degree_sum" | "max-degree-sum" => Ok(Self::MaxDegreeSum),
            "first_id" | "first-id" => Ok(Self::FirstId),
            other => Err(TutteError::Config(format!("unknown edge pick policy `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EngineConfig {
    pub memo_enabled: bool,
    pub memo_canonical_max_vertices: usize,
    pub edge_pick_policy: EdgePickPolicy,
    pub parallel_tasks: usize,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            memo_enabled: true,
            memo_canonical_max_vertices: DEFAULT_MEMO_MAX_VERTICES,
            edge_pick_policy: EdgePickPolicy::MaxDegreeSum,
            parallel_tasks: 1,
        }
    }
}

impl EngineConfig {
    /// Defaults with the memo threshold taken from `TUTTE_FORGE_MEMO_MAX` when set.
    pub fn from_env() -> Result<Self, TutteError> {
        let mut cfg = Self::default();
        if let Ok(raw) = std::env::var(MEMO_ENV_VAR) {
            cfg.memo_canonical_max_vertices = raw.trim().parse().map_err(|_| {
                TutteError::Config(format!("{MEMO_ENV_VAR}=`{raw}` is not a non-negative integer"))
            })?;
        }
        Ok(cfg)
    }

    pub fn without_memo(mut self) -> Self {
        self.memo_enabled = false;
        self
    }

    pub fn with_policy(mut self, p: EdgePickPolicy) -> Self {
        self.edge_pick_policy = p;
        self
    }

    pub fn with_parallel_tasks(mut self, n: usize) -> Self {
        self.parallel_tasks = n;
        self
    }
}

/// Canonical code to polynomial. Safe to share between concurrent tasks;
/// two tasks racing on one key both compute it and insert the same value.
#[derive(Debug, Default)]
pub struct MemoCache {
    map: Mutex<HashMap<CanonicalCode, BiPoly>>,
    hits: AtomicU64,
    misses: AtomicU64,
}

impl MemoCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, key: &CanonicalCode) -> Option<BiPoly> {
        let found = self.map.lock().expect("memo lock").get(key).cloned();
        let counter = if found.is_some() { &self.hits } else { &self.misses };
        counter.fetch_add(1, Ordering::Relaxed);
        found
    }

    pub fn insert(&self, key: CanonicalCode, value: BiPoly) {
        self.map.lock().expect("memo lock").entry(key).or_insert(value);
    }

    pub fn len(&self) -> usize {
        self.map.lock().expect("memo lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn hits(&self) -> u64 {
        self.hits.load(Ordering::Relaxed)
    }

    pub fn misses(&self) -> u64 {
        self.misses.load(Ordering::Relaxed)
    }
}

/// Counters from one engine run.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct EngineStats {
    pub recursion_nodes: u64,
    pub cache_hits: u64,
    pub cache_misses: u64,
    pub loops_stripped: u64,
    pub block_splits: u64,
    pub bridges: u64,
    pub two_vertex_blocks: u64,
    pub parallel_bundles: u64,
    pub single_edge_steps: u64,
}

impl fmt::Display for EngineStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "recursion_nodes: {}", self.recursion_nodes)?;
        writeln!(f, "cache_hits: {}", self.cache_hits)?;
        writeln!(f, "cache_misses: {}", self.cache_misses)?;
        writeln!(f, "loops_stripped: {}", self.loops_stripped)?;
        writeln!(f, "block_splits: {}", self.block_splits)?;
        writeln!(f, "bridges: {}", self.bridges)?;
        writeln!(f, "two_vertex_blocks: {}", self.two_vertex_blocks)?;
        writeln!(f, "parallel_bundles: {}", self.parallel_bundles)?;
        write!(f, "single_edge_steps: {}", self.single_edge_steps)
    }
}

#[derive(Default)]
struct Counters {
    nodes: AtomicU64,
    loops: AtomicU64,
    splits: AtomicU64,
    bridges: AtomicU64,
    pairs: AtomicU64,
    bundles: AtomicU64,
    singles: AtomicU64,
}

fn bump(c: &AtomicU64, by: u64) {
    c.fetch_add(by, Ordering::Relaxed);
}

/// Symmetric multiplicity matrix; the diagonal holds loop counts.
#[derive(Debug, Clone)]
struct Compact {
    n: usize,
    m: Vec<u32>,
}

impl Compact {
    fn from_graph(g: &Multigraph) -> Self {
        let d = Dense::from_graph(g);
        Self { n: d.n, m: d.m }
    }

    #[inline]
    fn get(&self, i: usize, j: usize) -> u32 {
        self.m[i * self.n + j]
    }

    #[inline]
    fn set(&mut self, i: usize, j: usize, val: u32) {
        self.m[i * self.n + j] = val;
        self.m[j * self.n + i] = val;
    }

    fn edge_count(&self) -> u32 {
        let mut total = 0;
        for i in 0..self.n {
            for j in i..self.n {
                total += self.get(i, j);
            }
        }
        total
    }

    fn degree(&self, i: usize) -> u32 {
        (0..self.n).filter(|&j| j != i).map(|j| self.get(i, j)).sum()
    }

    fn induced(&self, keep: &[usize]) -> Self {
        let n = keep.len();
        let mut m = vec![0u32; n * n];
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate() {
                m[a * n + b] = self.get(i, j);
            }
        }
        Self { n, m }
    }

    /// Folds `j` into `i`; edges between them become loops on `i`.
    fn merge(&self, i: usize, j: usize) -> Self {
        let keep: Vec<usize> = (0..self.n).filter(|&v| v != j).collect();
        let mut out = self.induced(&keep);
        let ni = keep.iter().position(|&v| v == i).expect("kept vertex");
        for (b, &w) in keep.iter().enumerate() {
            if w == i {
                continue;
            }
            let val = out.get(ni, b) + self.get(j, w);
            out.set(ni, b, val);
        }
        let loops = self.get(i, i) + self.get(j, j) + self.get(i, j);
        out.m[ni * out.n + ni] = loops;
        out
    }

    /// Vertex sets of the blocks of the underlying simple graph, ignoring
    /// isolated vertices. Each set lists vertices in increasing order.
    fn blocks(&self) -> Vec<Vec<usize>> {
        let n = self.n;
        let adj: Vec<Vec<usize>> = (0..n)
            .map(|v| (0..n).filter(|&w| w != v && self.get(v, w) > 0).collect())
            .collect();
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut time = 0;
        let mut edge_stack: Vec<(usize, usize)> = Vec::new();
        let mut out: Vec<Vec<usize>> = Vec::new();

        for root in 0..n {
            if disc[root] != usize::MAX || adj[root].is_empty() {
                continue;
            }
            // (vertex, parent, next neighbour index)
            let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
            disc[root] = time;
            low[root] = time;
            time += 1;
            while let Some(&(v, parent, pos)) = stack.last() {
                if pos < adj[v].len() {
                    if let Some(top) = stack.last_mut() {
                        top.2 += 1;
                    }
                    let w = adj[v][pos];
                    if disc[w] == usize::MAX {
                        edge_stack.push((v, w));
                        disc[w] = time;
                        low[w] = time;
                        time += 1;
                        stack.push((w, v, 0));
                    } else if w != parent && disc[w] < disc[v] {
                        edge_stack.push((v, w));
                        low[v] = low[v].min(disc[w]);
                    }
                } else {
                    stack.pop();
                    if parent != usize::MAX {
                        low[parent] = low[parent].min(low[v]);
                        if low[v] >= disc[parent] {
                            let mut verts = Vec::new();
                            while let Some((a, b)) = edge_stack.pop() {
                                verts.push(a);
                                verts.push(b);
                                if (a, b) == (parent, v) {
                                    break;
                                }
                            }
                            verts.sort_unstable();
                            verts.dedup();
                            out.push(verts);
                        }
                    }
                }
            }
        }
        out
    }

    /// The pair to eliminate next: a parallel class of size ≥ 2 when one
    /// exists, otherwise a single edge; chosen by `policy` among candidates.
    fn pick_pair(&self, policy: EdgePickPolicy) -> (usize, usize) {
        let n = self.n;
        let bundled = (0..n).any(|i| ((i + 1)..n).any(|j| self.get(i, j) > 1));
        let threshold = if bundled { 2 } else { 1 };
        let degrees: Vec<u32> = (0..n).map(|i| self.degree(i)).collect();
        let mut best: Option<((usize, usize), u32)> = None;
        for i in 0..n {
            for j in (i + 1)..n {
                if self.get(i, j) < threshold {
                    continue;
                }
                match policy {
                    EdgePickPolicy::FirstId => return (i, j),
                    EdgePickPolicy::MaxDegreeSum => {
                        let score = degrees[i] + degrees[j];
                        if best.is_none_or(|(_, s)| score > s) {
                            best = Some(((i, j), score));
                        }
                    }
                }
            }
        }
        best.expect("block with an edge").0
    }
}

struct Engine<'a> {
    cfg: &'a EngineConfig,
    cache: &'a MemoCache,
    counters: Counters,
    parallel: bool,
}

impl Engine<'_> {
    fn solve(&self, mut g: Compact) -> BiPoly {
        bump(&self.counters.nodes, 1);
        let mut loops = 0u32;
        for i in 0..g.n {
            loops += g.m[i * g.n + i];
            g.m[i * g.n + i] = 0;
        }
        if loops > 0 {
            bump(&self.counters.loops, u64::from(loops));
        }
        let mut result = BiPoly::monomial(0, loops, 1);

        let blocks = g.blocks();
        if blocks.len() > 1 {
            bump(&self.counters.splits, 1);
        }
        for verts in blocks {
            let factor = if verts.len() == 2 {
                let mult = g.get(verts[0], verts[1]);
                if mult == 1 {
                    bump(&self.counters.bridges, 1);
                } else {
                    bump(&self.counters.pairs, 1);
                }
                // x + y + ... + y^(m-1)
                &BiPoly::x() + &BiPoly::y_range_sum(1, mult)
            } else {
                self.solve_block(g.induced(&verts))
            };
            result = &result * &factor;
        }
        result
    }

    /// A loopless 2-connected block on at least three vertices.
    fn solve_block(&self, b: Compact) -> BiPoly {
        let key = if self.cfg.memo_enabled && b.n <= self.cfg.memo_canonical_max_vertices {
            let (code, order) = canonical_form_dense(b.n, &b.m);
            if let Some(hit) = self.cache.get(&code) {
                return hit;
            }
            // Recurse on the canonical relabelling so the traversal does not
            // depend on the incoming vertex order.
            Some((code, b.induced(&order)))
        } else {
            None
        };
        let (key, b) = match key {
            Some((code, canon)) => (Some(code), canon),
            None => (None, b),
        };

        let (i, j) = b.pick_pair(self.cfg.edge_pick_policy);
        let k = b.get(i, j);
        if k > 1 {
            bump(&self.counters.bundles, 1);
        } else {
            bump(&self.counters.singles, 1);
        }
        let mut deleted = b;
        deleted.set(i, j, 0);
        let merged = deleted.merge(i, j);

        let (del, con) = if self.parallel && deleted.edge_count() >= PARALLEL_EDGE_CUTOFF {
            rayon::join(|| self.solve(deleted), || self.solve(merged))
        } else {
            (self.solve(deleted), self.solve(merged))
        };
        let result = &del + &(&BiPoly::y_range_sum(0, k) * &con);

        if let Some(code) = key {
            self.cache.insert(code, result.clone());
        }
        result
    }

    fn stats(&self) -> EngineStats {
        let c = &self.counters;
        let load = |a: &AtomicU64| a.load(Ordering::Relaxed);
        EngineStats {
            recursion_nodes: load(&c.nodes),
            cache_hits: 0,
            cache_misses: 0,
            loops_stripped: load(&c.loops),
            block_splits: load(&c.splits),
            bridges: load(&c.bridges),
            two_vertex_blocks: load(&c.pairs),
            parallel_bundles: load(&c.bundles),
            single_edge_steps: load(&c.singles),
        }
    }
}

/// Deletion–contraction with the configured reductions, memo and parallelism.
/// Returns the polynomial and this run's counters.
pub fn tutte_dc_with_stats(
    g: &Multigraph,
    cfg: &EngineConfig,
    cache: &MemoCache,
) -> (BiPoly, EngineStats) {
    let (hits0, misses0) = (cache.hits(), cache.misses());
    let compact = Compact::from_graph(g);
    let tasks = cfg.parallel_tasks.max(1);
    let engine = Engine {
        cfg,
        cache,
        counters: Counters::default(),
        parallel: tasks > 1,
    };
    let poly = if tasks > 1 {
        match rayon::ThreadPoolBuilder::new().num_threads(tasks).build() {
            Ok(pool) => pool.install(|| engine.solve(compact)),
            Err(_) => engine.solve(compact),
        }
    } else {
        engine.solve(compact)
    };
    let mut stats = engine.stats();
    stats.cache_hits = cache.hits() - hits0;
    stats.cache_misses = cache.misses() - misses0;
    (poly, stats)
}

pub fn tutte_dc(g: &Multigraph, cfg: &EngineConfig, cache: &MemoCache) -> BiPoly {
    tutte_dc_with_stats(g, cfg, cache).0
}

/// The engine with default configuration and a fresh cache.
pub fn tutte(g: &Multigraph) -> BiPoly {
    tutte_dc(g, &EngineConfig::default(), &MemoCache::new())
}

pub fn t_equivalent(g: &Multigraph, h: &Multigraph) -> bool {
    let cfg = EngineConfig::default();
    let cache = MemoCache::new();
    tutte_dc(g, &cfg, &cache) == tutte_dc(h, &cfg, &cache)
}

pub fn tutte_subset_expansion(g: &Multigraph) -> Result<BiPoly, TutteError> {
    tutte_subset_expansion_limited(g, DEFAULT_ORACLE_EDGE_LIMIT)
}

/// Sums `(x-1)^(r(E)-r(A)) (y-1)^(|A|-r(A))` over every edge subset `A`.
pub fn tutte_subset_expansion_limited(g: &Multigraph, limit: usize) -> Result<BiPoly, TutteError> {
    let m = g.edge_count();
    if m > limit {
        return Err(TutteError::OracleLimit { edges: m, limit });
    }
    let index: HashMap<VertexId, usize> = g.vertices().enumerate().map(|(i, v)| (v, i)).collect();
    let ends: Vec<(usize, usize)> = g.edges().map(|(_, a, b)| (index[&a], index[&b])).collect();
    let n = g.vertex_count();

    let rank_of = |mask: u64| -> usize {
        let mut uf = UnionFind::new(n);
        let mut r = 0;
        for (k, &(a, b)) in ends.iter().enumerate() {
            if mask >> k & 1 == 1 && uf.union(a, b) {
                r += 1;
            }
        }
        r
    };
    let full = if m == 0 { 0 } else { u64::MAX >> (64 - m) };
    let r_e = rank_of(full);

    // Tally subsets by (corank, nullity), then expand the binomials once.
    let mut tally: HashMap<(usize, usize), u64> = HashMap::new();
    for mask in 0..=full {
        let r = rank_of(mask);
        let size = mask.count_ones() as usize;
        *tally.entry((r_e - r, size - r)).or_default() += 1;
    }
    let xm1 = &BiPoly::x() - &BiPoly::one();
    let ym1 = &BiPoly::y() - &BiPoly::one();
    let mut keys: Vec<_> = tally.into_iter().collect();
    keys.sort_unstable();
    let mut total = BiPoly::zero();
    for ((a, b), count) in keys {
        let term = &xm1.pow(a as u32) * &ym1.pow(b as u32);
        total.add_assign_ref(&term.scale(&BigInt::from(count)));
    }
    Ok(total)
}

/// Spanning trees counted by brute force over `(|V|-1)`-edge subsets.
pub fn spanning_tree_count(g: &Multigraph) -> Result<BigInt, TutteError> {
    if !g.is_connected() {
        return Err(TutteError::Disconnected);
    }
    let n = g.vertex_count();
    if n <= 1 {
        return Ok(BigInt::one());
    }
    let index: HashMap<VertexId, usize> = g.vertices().enumerate().map(|(i, v)| (v, i)).collect();
    let ends: Vec<(usize, usize)> = g
        .edges()
        .filter(|(_, a, b)| a != b)
        .map(|(_, a, b)| (index[&a], index[&b]))
        .collect();
    let need = n - 1;
    let mut count = BigInt::zero();
    let mut chosen: Vec<usize> = (0..need).collect();
    if ends.len() < need {
        return Ok(count);
    }
    loop {
        let mut uf = UnionFind::new(n);
        if chosen.iter().all(|&k| uf.union(ends[k].0, ends[k].1)) {
            count += 1;
        }
        // Next combination in lexicographic order.
        let mut i = need;
        loop {
            if i == 0 {
                return Ok(count);
            }
            i -= 1;
            if chosen[i] < ends.len() - need + i {
                chosen[i] += 1;
                for j in (i + 1)..need {
                    chosen[j] = chosen[j - 1] + 1;
                }
                break;
            }
        }
    }
}
