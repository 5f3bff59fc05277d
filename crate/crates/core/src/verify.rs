//! Checkers for when two terminal graphs glue to T-equivalent graphs against
//! every attachment: the pair-set and partition conditions, the
//! spanning-forest expansion behind them, necessary conditions and a random
//! gluing probe.

use std::fmt;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::bipoly::BiPoly;
use crate::constructions::{add_edges_s, glue, quotient, ConstructionError, PairSet, Partition, TerminalList};
use crate::format::render_graph;
use crate::multigraph::{Multigraph, UnionFind, VertexId};
use crate::tutte::{tutte_dc_with_stats, EngineConfig, MemoCache};

pub const DEFAULT_SUBSET_MAX_K: usize = 4;
pub const DEFAULT_PARTITION_MAX_K: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("k = {k} exceeds the work budget of {max} for {condition}")]
    Budget { condition: &'static str, k: usize, max: usize },
    #[error("terminal lists differ in length: {0} vs {1}")]
    Arity(usize, usize),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("expansion identity fails for S = {s}: {lhs} vs {rhs}")]
    IdentityViolation { s: String, lhs: String, rhs: String },
    #[error(transparent)]
    Construction(#[from] ConstructionError),
}

type Result<T, E = VerifyError> = std::result::Result<T, E>;

/// One failed instance: which `S` or partition, and both polynomials.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub instance: String,
    pub left: String,
    pub right: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquivalenceReport {
    pub condition: String,
    pub instances: usize,
    pub failures: Vec<Failure>,
    pub tutte_evaluations: u64,
    pub recursion_nodes: u64,
}

impl EquivalenceReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        v["verdict"] = serde_json::Value::from(if self.passed() { "pass" } else { "fail" });
        serde_json::to_string_pretty(&v).expect("report serializes")
    }
}

impl fmt::Display for EquivalenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "condition: {}", self.condition)?;
        writeln!(f, "verdict: {}", if self.passed() { "pass" } else { "fail" })?;
        writeln!(f, "instances: {}", self.instances)?;
        writeln!(f, "tutte_evaluations: {}", self.tutte_evaluations)?;
        writeln!(f, "recursion_nodes: {}", self.recursion_nodes)?;
        for fail in &self.failures {
            writeln!(f, "failure {}: {} != {}", fail.instance, fail.left, fail.right)?;
        }
        Ok(())
    }
}

struct Outcome {
    failure: Option<Failure>,
    nodes: u64,
}

fn compare(label: String, g: &Multigraph, h: &Multigraph) -> Outcome {
    let cfg = EngineConfig::default();
    let cache = MemoCache::new();
    let (tg, sg) = tutte_dc_with_stats(g, &cfg, &cache);
    let (th, sh) = tutte_dc_with_stats(h, &cfg, &cache);
    Outcome {
        failure: (tg != th).then(|| Failure {
            instance: label,
            left: tg.to_string(),
            right: th.to_string(),
        }),
        nodes: sg.recursion_nodes + sh.recursion_nodes,
    }
}

fn collect(condition: &str, outcomes: Vec<Outcome>) -> EquivalenceReport {
    EquivalenceReport {
        condition: condition.to_string(),
        instances: outcomes.len(),
        tutte_evaluations: 2 * outcomes.len() as u64,
        recursion_nodes: outcomes.iter().map(|o| o.nodes).sum(),
        failures: outcomes.into_iter().filter_map(|o| o.failure).collect(),
    }
}

fn same_arity(gt: &TerminalList, ht: &TerminalList) -> Result<usize> {
    if gt.k() != ht.k() {
        return Err(VerifyError::Arity(gt.k(), ht.k()));
    }
    Ok(gt.k())
}

pub fn check_subset_condition(gt: &TerminalList, ht: &TerminalList) -> Result<EquivalenceReport> {
    check_subset_condition_within(gt, ht, DEFAULT_SUBSET_MAX_K)
}

/// `T(G_S) = T(H_S)` for every pair set `S` over `[k]`.
pub fn check_subset_condition_within(gt: &TerminalList, ht: &TerminalList, max_k: usize) -> Result<EquivalenceReport> {
    let k = same_arity(gt, ht)?;
    if k > max_k {
        return Err(VerifyError::Budget {
            condition: "subsets",
            k,
            max: max_k,
        });
    }
    let outcomes = PairSet::all(k)
        .into_par_iter()
        .map(|s| -> Result<Outcome> {
            Ok(compare(format!("S = {s}"), &add_edges_s(gt, &s)?, &add_edges_s(ht, &s)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(collect("subsets", outcomes))
}

pub fn check_partition_condition(gt: &TerminalList, ht: &TerminalList) -> Result<EquivalenceReport> {
    check_partition_condition_within(gt, ht, DEFAULT_PARTITION_MAX_K)
}

/// `T(G(P)) = T(H(P))` for every partition `P` of `[k]`.
pub fn check_partition_condition_within(
    gt: &TerminalList,
    ht: &TerminalList,
    max_k: usize,
) -> Result<EquivalenceReport> {
    let k = same_arity(gt, ht)?;
    if k > max_k {
        return Err(VerifyError::Budget {
            condition: "partitions",
            k,
            max: max_k,
        });
    }
    let outcomes = Partition::all(k)
        .into_par_iter()
        .map(|p| -> Result<Outcome> {
            Ok(compare(format!("P = {p}"), &quotient(gt, &p)?, &quotient(ht, &p)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(collect("partitions", outcomes))
}

/// `a`: spanning forests of the simple graph on `[k]` with edge set `s` whose
/// components are exactly the blocks of `p`. `n = e - k + r`, with `e` the
/// number of pairs of `s` inside one block and `r` the block count.
pub fn forest_coefficients(s: &PairSet, p: &Partition, k: usize) -> (u64, i64) {
    let pairs: Vec<(usize, usize)> = s.pairs().collect();
    let inside: Vec<(usize, usize)> = pairs
        .iter()
        .copied()
        .filter(|&(i, j)| p.block_of(i) == p.block_of(j))
        .collect();
    let r = p.block_count();
    let need = k - r;
    let mut a = 0u64;
    // Forest edges must stay inside blocks, and a spanning forest of each
    // block is a tree: exactly k - r edges that join without a cycle.
    for mask in 0u64..(1u64 << inside.len()) {
        if mask.count_ones() as usize != need {
            continue;
        }
        let mut uf = UnionFind::new(k + 1);
        let acyclic = inside
            .iter()
            .enumerate()
            .filter(|(b, _)| mask >> b & 1 == 1)
            .all(|(_, &(i, j))| uf.union(i, j));
        if acyclic && uf.count() == 1 + r {
            a += 1;
        }
    }
    (a, inside.len() as i64 - k as i64 + r as i64)
}

/// Exact coefficient of `T(G(P))` in the expansion of `T(G_S)`: the sum over
/// subsets `B` of `s` whose components on `[k]` are the blocks of `p` of
/// `(y-1)^(|B| - k + r)`. At `y = 1` it is the forest count `a`, and it equals
/// `a * y^n` exactly when no block of `s` contains a cycle.
pub fn expansion_coefficient(s: &PairSet, p: &Partition, k: usize) -> BiPoly {
    let inside: Vec<(usize, usize)> = s
        .pairs()
        .filter(|&(i, j)| p.block_of(i) == p.block_of(j))
        .collect();
    let r = p.block_count();
    let y_minus_one = &BiPoly::y() - &BiPoly::one();
    let mut total = BiPoly::zero();
    for mask in 0u64..(1u64 << inside.len()) {
        let mut uf = UnionFind::new(k + 1);
        let mut size = 0u32;
        for (b, &(i, j)) in inside.iter().enumerate() {
            if mask >> b & 1 == 1 {
                uf.union(i, j);
                size += 1;
            }
        }
        // Every chosen pair lies inside a block, so reaching r components
        // means each block is connected by B.
        if uf.count() == 1 + r {
            total.add_assign_ref(&y_minus_one.pow(size - (k - r) as u32));
        }
    }
    total
}

/// Both sides of `T(G_S) = Σ_P c(P,S) T(G(P))`, plus whether the
/// forest-count monomials `a(P,S) y^n(P,S)` give the same sum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpansionVerdict {
    pub lhs: BiPoly,
    pub rhs: BiPoly,
    pub monomial_rhs: BiPoly,
    pub contributing_partitions: usize,
}

impl ExpansionVerdict {
    pub fn monomial_form_holds(&self) -> bool {
        self.lhs == self.monomial_rhs
    }
}

impl fmt::Display for ExpansionVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "condition: expansion")?;
        writeln!(f, "verdict: pass")?;
        writeln!(f, "lhs: {}", self.lhs)?;
        writeln!(f, "contributing_partitions: {}", self.contributing_partitions)?;
        writeln!(f, "monomial_form: {}", if self.monomial_form_holds() { "agrees" } else { "differs" })
    }
}

pub fn check_expansion_identity(gt: &TerminalList, s: &PairSet) -> Result<ExpansionVerdict> {
    if !gt.graph.is_connected() {
        return Err(VerifyError::Precondition("G must be connected".into()));
    }
    let k = gt.k();
    if s.k() != k {
        return Err(VerifyError::Arity(s.k(), k));
    }
    let cfg = EngineConfig::default();
    let cache = MemoCache::new();
    let lhs = tutte_dc_with_stats(&add_edges_s(gt, s)?, &cfg, &cache).0;
    let mut rhs = BiPoly::zero();
    let mut monomial_rhs = BiPoly::zero();
    let mut contributing = 0;
    for p in Partition::all(k) {
        let c = expansion_coefficient(s, &p, k);
        if c.is_zero() {
            continue;
        }
        contributing += 1;
        let t = tutte_dc_with_stats(&quotient(gt, &p)?, &cfg, &cache).0;
        rhs.add_assign_ref(&(&c * &t));
        let (a, n) = forest_coefficients(s, &p, k);
        let n = u32::try_from(n).expect("a > 0 forces n >= 0");
        monomial_rhs.add_assign_ref(&t.mul_monomial(0, n).scale(&BigInt::from(a)));
    }
    if lhs != rhs {
        return Err(VerifyError::IdentityViolation {
            s: s.to_string(),
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
        });
    }
    Ok(ExpansionVerdict {
        lhs,
        rhs,
        monomial_rhs,
        contributing_partitions: contributing,
    })
}

/// Loop counts and terminal-pair multiplicities of the two sides.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NecessaryVerdict {
    pub loops: (usize, usize),
    /// `(i, j, ε_G(u_i, u_j), ε_H(v_i, v_j))` for every mismatched pair.
    pub pair_mismatches: Vec<(usize, usize, usize, usize)>,
}

impl NecessaryVerdict {
    pub fn passed(&self) -> bool {
        self.loops.0 == self.loops.1 && self.pair_mismatches.is_empty()
    }
}

impl fmt::Display for NecessaryVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "condition: necessary")?;
        writeln!(f, "verdict: {}", if self.passed() { "pass" } else { "fail" })?;
        writeln!(f, "loops: {} vs {}", self.loops.0, self.loops.1)?;
        for (i, j, a, b) in &self.pair_mismatches {
            writeln!(f, "pair {{{i},{j}}}: {a} vs {b}")?;
        }
        Ok(())
    }
}

pub fn check_necessary(gt: &TerminalList, ht: &TerminalList) -> Result<NecessaryVerdict> {
    let k = same_arity(gt, ht)?;
    let mut mismatches = Vec::new();
    for i in 1..=k {
        for j in (i + 1)..=k {
            let a = gt.graph.multiplicity(gt.terminals[i - 1], gt.terminals[j - 1]);
            let b = ht.graph.multiplicity(ht.terminals[i - 1], ht.terminals[j - 1]);
            if a != b {
                mismatches.push((i, j, a, b));
            }
        }
    }
    Ok(NecessaryVerdict {
        loops: (gt.graph.total_loops(), ht.graph.total_loops()),
        pair_mismatches: mismatches,
    })
}

/// A random attachment: terminals `1..=k` plus up to three extra vertices,
/// each pair joined 0, 1 or 2 times, each vertex looped with probability 0.1.
pub fn random_attachment(k: usize, rng: &mut impl Rng) -> TerminalList {
    let n = k + rng.gen_range(0..=3);
    let mut g = Multigraph::new();
    for v in 1..=n as u32 {
        g.add_vertex(VertexId(v)).expect("fresh vertex");
    }
    for a in 1..=n as u32 {
        if rng.gen_bool(0.1) {
            g.add_edge(VertexId(a), VertexId(a)).expect("vertex exists");
        }
        for b in (a + 1)..=n as u32 {
            for _ in 0..rng.gen_range(0..=2) {
                g.add_edge(VertexId(a), VertexId(b)).expect("vertices exist");
            }
        }
    }
    let terminals = (1..=k as u32).map(VertexId).collect();
    TerminalList::new(g, terminals).expect("terminals are vertices")
}

/// One probe trial that separated the two sides.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub trial: usize,
    pub attachment: String,
    pub left: String,
    pub right: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProbeReport {
    pub trials: usize,
    pub seed: u64,
    pub counterexamples: Vec<Counterexample>,
}

impl ProbeReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }

    pub fn to_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        v["verdict"] = serde_json::Value::from(if self.passed() { "pass" } else { "fail" });
        serde_json::to_string_pretty(&v).expect("report serializes")
    }
}

impl fmt::Display for ProbeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "condition: probe")?;
        writeln!(f, "verdict: {}", if self.passed() { "pass" } else { "fail" })?;
        writeln!(f, "trials: {}", self.trials)?;
        writeln!(f, "seed: {}", self.seed)?;
        for c in &self.counterexamples {
            writeln!(f, "counterexample at trial {}: {} != {}", c.trial, c.left, c.right)?;
            for line in c.attachment.lines() {
                writeln!(f, "  {line}")?;
            }
        }
        Ok(())
    }
}

/// Glues `trials` random attachments onto both sides and compares; the
/// attachments depend only on `seed`.
pub fn random_glue_probe(gt: &TerminalList, ht: &TerminalList, trials: usize, seed: u64) -> Result<ProbeReport> {
    let k = same_arity(gt, ht)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let attachments: Vec<TerminalList> = (0..trials).map(|_| random_attachment(k, &mut rng)).collect();
    let results = attachments
        .par_iter()
        .enumerate()
        .map(|(trial, w)| -> Result<Option<Counterexample>> {
            let a = glue(gt, w)?.graph;
            let b = glue(ht, w)?.graph;
            let o = compare(String::new(), &a, &b);
            Ok(o.failure.map(|fail| Counterexample {
                trial,
                attachment: render_graph(&w.graph),
                left: fail.left,
                right: fail.right,
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ProbeReport {
        trials,
        seed,
        counterexamples: results.into_iter().flatten().collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tutte::tutte;
    use proptest::prelude::*;

    fn k3() -> Multigraph {
        Multigraph::from_edges([1, 2, 3], &[(1, 2), (2, 3), (1, 3)])
    }

    fn p3() -> Multigraph {
        Multigraph::from_edges([1, 2, 3], &[(1, 2), (2, 3)])
    }

    #[test]
    fn identical_sides_pass() {
        let gt = TerminalList::of(&k3(), &[1, 2]);
        assert!(check_subset_condition(&gt, &gt).unwrap().passed());
        assert!(check_partition_condition(&gt, &gt).unwrap().passed());
        assert!(check_necessary(&gt, &gt).unwrap().passed());
    }

    #[test]
    fn triangle_against_path_fails_at_the_empty_set() {
        let gt = TerminalList::of(&k3(), &[1, 2]);
        let ht = TerminalList::of(&p3(), &[1, 3]);
        let subsets = check_subset_condition(&gt, &ht).unwrap();
        assert!(!subsets.passed());
        assert_eq!(subsets.failures[0].instance, "S = {}");
        let parts = check_partition_condition(&gt, &ht).unwrap();
        assert!(parts.failures.iter().any(|f| f.instance == "P = {1}{2}"));
    }

    #[test]
    fn single_partition_for_one_terminal() {
        let gt = TerminalList::of(&k3(), &[1]);
        let report = check_partition_condition(&gt, &gt).unwrap();
        assert_eq!(report.instances, 1);
    }

    #[test]
    fn budgets_are_enforced() {
        let g = Multigraph::from_edges(1..=7, &[]);
        let gt = TerminalList::of(&g, &[1, 2, 3, 4, 5]);
        assert!(matches!(check_subset_condition(&gt, &gt), Err(VerifyError::Budget { .. })));
        let gt7 = TerminalList::of(&g, &[1, 2, 3, 4, 5, 6, 7]);
        assert!(matches!(check_partition_condition(&gt7, &gt7), Err(VerifyError::Budget { .. })));
    }

    #[test]
    fn forest_coefficient_examples() {
        let full = PairSet::full(3);
        assert_eq!(forest_coefficients(&full, &Partition::single_block(3), 3), (3, 1));
        assert_eq!(forest_coefficients(&full, &Partition::discrete(3), 3), (1, 0));
        let p = Partition::new(3, vec![vec![1, 2], vec![3]]).unwrap();
        assert_eq!(forest_coefficients(&full, &p, 3), (1, 0));
        let s = PairSet::new(3, [(1, 2)]).unwrap();
        assert_eq!(forest_coefficients(&s, &Partition::single_block(3), 3).0, 0);
    }

    #[test]
    fn expansion_examples() {
        let g = Multigraph::from_edges(1..=4, &[(1, 2), (2, 3), (3, 4), (4, 1), (1, 3)]);
        let gt = TerminalList::of(&g, &[1, 2]);
        let empty = check_expansion_identity(&gt, &PairSet::empty(2)).unwrap();
        assert_eq!(empty.rhs, tutte(&g));
        assert_eq!(empty.contributing_partitions, 1);
        let one = check_expansion_identity(&gt, &PairSet::full(2)).unwrap();
        let merged = g.identify_vertices([VertexId(1), VertexId(2)]).unwrap();
        assert_eq!(one.lhs, &tutte(&g) + &tutte(&merged));
    }

    #[test]
    fn coefficient_of_a_triangle_block() {
        let full = PairSet::full(3);
        let one = Partition::single_block(3);
        let c = expansion_coefficient(&full, &one, 3);
        assert_eq!(c.to_string(), "2 + y");
        assert_eq!(c.evaluate_int(1, 1), BigInt::from(3));
        let p = Partition::new(3, vec![vec![1, 2], vec![3]]).unwrap();
        assert_eq!(expansion_coefficient(&full, &p, 3), BiPoly::one());
        assert_eq!(expansion_coefficient(&PairSet::empty(3), &one, 3), BiPoly::zero());
    }

    #[test]
    fn monomial_form_differs_on_a_cyclic_block() {
        let g = Multigraph::from_edges(1..=3, &[(1, 2), (2, 3)]);
        let gt = TerminalList::of(&g, &[1, 2, 3]);
        let v = check_expansion_identity(&gt, &PairSet::full(3)).unwrap();
        assert!(!v.monomial_form_holds());
        let v = check_expansion_identity(&gt, &PairSet::new(3, [(1, 2), (2, 3)]).unwrap()).unwrap();
        assert!(v.monomial_form_holds());
    }

    #[test]
    fn expansion_needs_connected_host() {
        let g = Multigraph::from_edges([1, 2, 3], &[(1, 2)]);
        let gt = TerminalList::of(&g, &[1, 3]);
        assert!(matches!(
            check_expansion_identity(&gt, &PairSet::empty(2)),
            Err(VerifyError::Precondition(_))
        ));
    }

    #[test]
    fn necessary_examples() {
        let looped = Multigraph::from_edges([1, 2], &[(1, 2), (1, 1)]);
        let plain = Multigraph::from_edges([1, 2], &[(1, 2)]);
        let verdict = check_necessary(&TerminalList::of(&looped, &[1, 2]), &TerminalList::of(&plain, &[1, 2])).unwrap();
        assert!(!verdict.passed());
        assert_eq!(verdict.loops, (1, 0));
        let gap = Multigraph::from_edges([1, 2, 3], &[(1, 3), (3, 2)]);
        let verdict = check_necessary(&TerminalList::of(&plain, &[1, 2]), &TerminalList::of(&gap, &[1, 2])).unwrap();
        assert_eq!(verdict.pair_mismatches, vec![(1, 2, 1, 0)]);
    }

    #[test]
    fn probe_is_seeded() {
        let gt = TerminalList::of(&k3(), &[1, 2]);
        let a = random_glue_probe(&gt, &gt, 10, 7).unwrap();
        let b = random_glue_probe(&gt, &gt, 10, 7).unwrap();
        assert!(a.passed());
        assert_eq!(a, b);
        let mut r1 = ChaCha8Rng::seed_from_u64(3);
        let mut r2 = ChaCha8Rng::seed_from_u64(3);
        assert_eq!(random_attachment(3, &mut r1), random_attachment(3, &mut r2));
    }

    #[test]
    fn probe_with_loop_only_attachment() {
        let gt = TerminalList::of(&k3(), &[1, 2]);
        let loops = Multigraph::from_edges([1, 2], &[(1, 1), (2, 2)]);
        let glued = glue(&gt, &TerminalList::of(&loops, &[1, 2])).unwrap().graph;
        assert_eq!(tutte(&glued), &tutte(&k3()) * &BiPoly::y().pow(2));
    }

    #[test]
    fn probe_catches_a_false_pair() {
        let gt = TerminalList::of(&k3(), &[1, 2]);
        let ht = TerminalList::of(&p3(), &[1, 3]);
        assert!(!random_glue_probe(&gt, &ht, 5, 1).unwrap().passed());
    }

    #[test]
    fn report_json_carries_verdict() {
        let gt = TerminalList::of(&k3(), &[1, 2]);
        let json = check_partition_condition(&gt, &gt).unwrap().to_json();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["verdict"], "pass");
        assert_eq!(v["instances"], 2);
    }

    fn arb_connected() -> impl Strategy<Value = Multigraph> {
        // A spanning path 1..=5 plus random extra edges keeps the host connected.
        proptest::collection::vec((1u32..=5, 1u32..=5), 0..5).prop_map(|extra| {
            let mut es = vec![(1, 2), (2, 3), (3, 4), (4, 5)];
            es.extend(extra);
            Multigraph::from_edges(1..=5, &es)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn coefficient_at_one_is_forest_count(k in 1usize..=4, bits in 0u64..64, pick in 0usize..15) {
            let s = PairSet::new(k, PairSet::full(k).pairs().enumerate().filter(|(i, _)| bits >> i & 1 == 1).map(|(_, p)| p)).unwrap();
            let parts = Partition::all(k);
            let p = &parts[pick % parts.len()];
            let (a, n) = forest_coefficients(&s, p, k);
            let c = expansion_coefficient(&s, p, k);
            prop_assert_eq!(c.evaluate_int(1, 1), BigInt::from(a));
            if a > 0 && n == 0 {
                prop_assert_eq!(c, BiPoly::constant(BigInt::from(a)));
            }
        }

        #[test]
        fn expansion_holds_for_every_pair_set(g in arb_connected()) {
            let gt = TerminalList::of(&g, &[1, 3, 5]);
            for s in PairSet::all(3) {
                let r = check_expansion_identity(&gt, &s);
                prop_assert!(r.is_ok(), "{:?}", r);
            }
        }

        #[test]
        fn subsets_pass_implies_necessary(g in arb_connected(), h in arb_connected()) {
            let gt = TerminalList::of(&g, &[1, 5]);
            let ht = TerminalList::of(&h, &[1, 5]);
            let subsets = check_subset_condition(&gt, &ht).unwrap();
            let parts = check_partition_condition(&gt, &ht).unwrap();
            prop_assert_eq!(subsets.passed(), parts.passed());
            if subsets.passed() {
                prop_assert!(check_necessary(&gt, &ht).unwrap().passed());
            }
        }
    }
}
