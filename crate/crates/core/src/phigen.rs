//! Generating quadruples `(G, e, H, f)` with `G\e ≅ H\f` and `G/e ≅ H/f`
//! from a known one.
//!
//! A witness fixes an isomorphism `φ: G\e -> H\f` and an isomorphism
//! `ψ: G/e -> H/f`. Vertices of `G` are indexed `1..n` in id order (`u_i`)
//! and `H` is indexed through `φ` (`v_i = φ(u_i)`). The digraph `D_ψ` on
//! `[n]` records how `ψ` moves indices; gluing a rotor with a cyclic orbit
//! along each chosen directed cycle of `D_ψ`, on both sides, yields a new
//! quadruple of the same kind.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::constructions::{glue, ConstructionError, TerminalList};
use crate::iso::{Iso, IsoError, VertexMapping};
use crate::multigraph::{EdgeId, GraphError, Multigraph, VertexId};
use crate::tutte::t_equivalent;

/// Isomorphism limit for witness searches and re-certification.
pub const PHIGEN_ISO_LIMIT: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PhiError {
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("arity mismatch: {0}")]
    Arity(String),
    #[error("invariant violated: {0}")]
    InvariantViolated(String),
    #[error("witness file line {line}: {message}")]
    WitnessFormat { line: usize, message: String },
    #[error(transparent)]
    Iso(#[from] IsoError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
}

type Result<T, E = PhiError> = std::result::Result<T, E>;

/// A certified member `(G, e, H, f)` together with `φ` and `ψ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiWitness {
    pub g: Multigraph,
    pub h: Multigraph,
    pub e: EdgeId,
    pub f: EdgeId,
    pub phi: VertexMapping,
    pub psi: VertexMapping,
    /// Indices of the ends of `e`, `s1 < s2`.
    pub s1: usize,
    pub s2: usize,
    /// Indices of the ends of `f`, `t1 < t2`.
    pub t1: usize,
    pub t2: usize,
}

fn check_member_graph(g: &Multigraph, e: EdgeId, side: &str) -> Result<()> {
    if !g.is_connected() {
        return Err(PhiError::Precondition(format!("{side} is not connected")));
    }
    if g.total_loops() > 0 {
        return Err(PhiError::Precondition(format!("{side} has loops")));
    }
    g.endpoints(e)?;
    Ok(())
}

impl PhiWitness {
    /// Builds a witness from explicit maps, checking both isomorphisms.
    pub fn new(
        g: Multigraph,
        e: EdgeId,
        h: Multigraph,
        f: EdgeId,
        phi: VertexMapping,
        psi: VertexMapping,
    ) -> Result<Self> {
        check_member_graph(&g, e, "G")?;
        check_member_graph(&h, f, "H")?;
        let (ge, he) = (g.delete_edge(e)?, h.delete_edge(f)?);
        if !phi.is_isomorphism(&ge, &he) {
            return Err(PhiError::Precondition("phi is not an isomorphism G\\e -> H\\f".into()));
        }
        let (gc, _) = g.contract_edge(e)?;
        let (hc, _) = h.contract_edge(f)?;
        if !psi.is_isomorphism(&gc, &hc) {
            return Err(PhiError::Precondition("psi is not an isomorphism G/e -> H/f".into()));
        }
        let labels: Vec<VertexId> = g.vertices().collect();
        let idx_g = |v: VertexId| labels.iter().position(|&u| u == v).expect("vertex of G") + 1;
        let idx_h = |w: VertexId| idx_g(phi.inverse().apply(w));
        let (a, b) = g.endpoints(e)?;
        let (c, d) = h.endpoints(f)?;
        let (s1, s2) = (idx_g(a).min(idx_g(b)), idx_g(a).max(idx_g(b)));
        let (t1, t2) = (idx_h(c).min(idx_h(d)), idx_h(c).max(idx_h(d)));
        Ok(Self {
            g,
            h,
            e,
            f,
            phi,
            psi,
            s1,
            s2,
            t1,
            t2,
        })
    }

    pub fn n(&self) -> usize {
        self.g.vertex_count()
    }

    /// `u_i`, 1-based.
    pub fn u(&self, i: usize) -> VertexId {
        self.g.vertices().nth(i - 1).expect("index within [n]")
    }

    /// `v_j = φ(u_j)`, 1-based.
    pub fn v(&self, j: usize) -> VertexId {
        self.phi.apply(self.u(j))
    }

    pub fn index_g(&self, u: VertexId) -> Option<usize> {
        self.g.vertices().position(|x| x == u).map(|i| i + 1)
    }

    pub fn index_h(&self, v: VertexId) -> Option<usize> {
        self.phi.inverse().get(v).and_then(|u| self.index_g(u))
    }

    /// Id of `u_{s1 s2}` in `G/e`.
    pub fn u_merged(&self) -> VertexId {
        self.u(self.s1).min(self.u(self.s2))
    }

    /// Id of `v_{t1 t2}` in `H/f`.
    pub fn v_merged(&self) -> VertexId {
        self.v(self.t1).min(self.v(self.t2))
    }

    /// Whether `ψ(u_{s1 s2}) = v_{t1 t2}`.
    pub fn merged_to_merged(&self) -> bool {
        self.psi.apply(self.u_merged()) == self.v_merged()
    }
}

fn limit_for(g: &Multigraph, h: &Multigraph) -> Iso {
    Iso::new(PHIGEN_ISO_LIMIT.max(g.vertex_count()).max(h.vertex_count()))
}

/// All isomorphisms for both conditions, in enumeration order.
pub fn witness_maps(
    g: &Multigraph,
    e: EdgeId,
    h: &Multigraph,
    f: EdgeId,
    iso: &Iso,
) -> Result<(Vec<VertexMapping>, Vec<VertexMapping>)> {
    check_member_graph(g, e, "G")?;
    check_member_graph(h, f, "H")?;
    if g.vertex_count() != h.vertex_count() || g.edge_count() != h.edge_count() {
        return Ok((Vec::new(), Vec::new()));
    }
    let phis = iso.enumerate_isomorphisms(&g.delete_edge(e)?, &h.delete_edge(f)?)?;
    if phis.is_empty() {
        return Ok((phis, Vec::new()));
    }
    let psis = iso.enumerate_isomorphisms(&g.contract_edge(e)?.0, &h.contract_edge(f)?.0)?;
    Ok((phis, psis))
}

/// The first witness in enumeration order, or `None` when `(G, e, H, f)`
/// is not a member.
pub fn certify_phi_prime(g: &Multigraph, e: EdgeId, h: &Multigraph, f: EdgeId) -> Result<Option<PhiWitness>> {
    certify_phi_prime_indexed(g, e, h, f, 0, 0)
}

/// The witness built from the `phi_index`-th `φ` and `psi_index`-th `ψ`.
pub fn certify_phi_prime_indexed(
    g: &Multigraph,
    e: EdgeId,
    h: &Multigraph,
    f: EdgeId,
    phi_index: usize,
    psi_index: usize,
) -> Result<Option<PhiWitness>> {
    let iso = limit_for(g, h);
    check_member_graph(g, e, "G")?;
    check_member_graph(h, f, "H")?;
    if g.vertex_count() != h.vertex_count() || g.edge_count() != h.edge_count() {
        return Ok(None);
    }
    let (ge, he) = (g.delete_edge(e)?, h.delete_edge(f)?);
    let (gc, hc) = (g.contract_edge(e)?.0, h.contract_edge(f)?.0);
    let phi = if phi_index == 0 {
        iso.find_isomorphism(&ge, &he)?
    } else {
        iso.enumerate_isomorphisms(&ge, &he)?.into_iter().nth(phi_index)
    };
    let Some(phi) = phi else { return Ok(None) };
    let psi = if psi_index == 0 {
        iso.find_isomorphism(&gc, &hc)?
    } else {
        iso.enumerate_isomorphisms(&gc, &hc)?.into_iter().nth(psi_index)
    };
    let Some(psi) = psi else { return Ok(None) };
    PhiWitness::new(g.clone(), e, h.clone(), f, phi, psi).map(Some)
}

/// Every `(φ, ψ)` witness, `φ`-major.
pub fn enumerate_phi_witnesses(g: &Multigraph, e: EdgeId, h: &Multigraph, f: EdgeId) -> Result<Vec<PhiWitness>> {
    let (phis, psis) = witness_maps(g, e, h, f, &limit_for(g, h))?;
    let mut out = Vec::with_capacity(phis.len() * psis.len());
    for phi in &phis {
        for psi in &psis {
            out.push(PhiWitness::new(g.clone(), e, h.clone(), f, phi.clone(), psi.clone())?);
        }
    }
    Ok(out)
}

/// `D_ψ`: a digraph on `[n]` (1-based) with a sorted arc list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PsiDigraph {
    pub n: usize,
    pub arcs: Vec<(usize, usize)>,
}

impl PsiDigraph {
    pub fn new(n: usize, arcs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let set: BTreeSet<(usize, usize)> = arcs.into_iter().collect();
        Self {
            n,
            arcs: set.into_iter().collect(),
        }
    }

    pub fn has_arc(&self, i: usize, j: usize) -> bool {
        self.arcs.binary_search(&(i, j)).is_ok()
    }

    pub fn successors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.arcs.iter().filter(move |a| a.0 == i).map(|a| a.1)
    }

    /// Whether `cycle` (in order, closing back to its start) is a directed cycle.
    pub fn contains_cycle(&self, cycle: &[usize]) -> bool {
        !cycle.is_empty() && (0..cycle.len()).all(|k| self.has_arc(cycle[k], cycle[(k + 1) % cycle.len()]))
    }
}

impl fmt::Display for PsiDigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (i, j)) in self.arcs.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{i}->{j}")?;
        }
        Ok(())
    }
}

/// Arcs per the four cases: an index of `G` points at the indices of `H`
/// named by the image of its vertex in `G/e`, where both ends of `e` (resp.
/// `f`) stand for the merged vertex.
pub fn build_psi_digraph(w: &PhiWitness) -> PsiDigraph {
    let n = w.n();
    let (um, vm) = (w.u_merged(), w.v_merged());
    let mut arcs = Vec::with_capacity(n + 2);
    for i in 1..=n {
        let src = if i == w.s1 || i == w.s2 { um } else { w.u(i) };
        let img = w.psi.apply(src);
        if img == vm {
            arcs.push((i, w.t1));
            arcs.push((i, w.t2));
        } else {
            arcs.push((i, w.index_h(img).expect("image is a vertex of H")));
        }
    }
    PsiDigraph::new(n, arcs)
}

/// Every elementary directed cycle, rotated to start at its smallest index,
/// in lexicographic order. Fixed points appear as 1-cycles.
pub fn directed_cycles(d: &PsiDigraph) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let succ: Vec<Vec<usize>> = (0..=d.n).map(|i| d.successors(i).collect()).collect();
    for start in 1..=d.n {
        let mut path = vec![start];
        let mut on_path = vec![false; d.n + 1];
        on_path[start] = true;
        extend_cycles(start, &succ, &mut path, &mut on_path, &mut out);
    }
    out.sort();
    out
}

fn extend_cycles(
    start: usize,
    succ: &[Vec<usize>],
    path: &mut Vec<usize>,
    on_path: &mut [bool],
    out: &mut Vec<Vec<usize>>,
) {
    let last = *path.last().expect("non-empty path");
    for &next in &succ[last] {
        if next == start {
            out.push(path.clone());
        } else if next > start && !on_path[next] {
            on_path[next] = true;
            path.push(next);
            extend_cycles(start, succ, path, on_path, out);
            path.pop();
            on_path[next] = false;
        }
    }
}

/// Verdict of [`check_dig1`] on one cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dig1Verdict {
    pub s_on_cycle: bool,
    pub t_on_cycle: bool,
    /// `(s1 -> t_j, s2 -> t_{3-j})` arcs found on the cycle when both ends lie on it.
    pub special_arcs: Option<((usize, usize), (usize, usize))>,
}

/// Both ends of `e` lie on `cycle` iff both ends of `f` do; in that case
/// `ψ(u_{s1s2}) = v_{t1t2}` and the cycle uses `s1 -> t_j` and `s2 -> t_{3-j}`.
pub fn check_dig1(w: &PhiWitness, cycle: &[usize]) -> Result<Dig1Verdict> {
    let d = build_psi_digraph(w);
    if !d.contains_cycle(cycle) {
        return Err(PhiError::Precondition(format!("{cycle:?} is not a directed cycle of D_psi")));
    }
    let on = |i: usize| cycle.contains(&i);
    let s_on = on(w.s1) && on(w.s2);
    let t_on = on(w.t1) && on(w.t2);
    if s_on != t_on {
        return Err(PhiError::InvariantViolated(format!(
            "cycle {cycle:?}: ends of e on cycle = {s_on}, ends of f on cycle = {t_on}"
        )));
    }
    let mut special_arcs = None;
    if s_on {
        if !w.merged_to_merged() {
            return Err(PhiError::InvariantViolated(format!(
                "cycle {cycle:?} holds both ends of e but psi does not map merged to merged"
            )));
        }
        let next = |i: usize| cycle[(cycle.iter().position(|&c| c == i).expect("on cycle") + 1) % cycle.len()];
        let (a, b) = (next(w.s1), next(w.s2));
        if !((a == w.t1 && b == w.t2) || (a == w.t2 && b == w.t1)) {
            return Err(PhiError::InvariantViolated(format!(
                "cycle {cycle:?} leaves s1 to {a} and s2 to {b}, not to the two ends of f"
            )));
        }
        special_arcs = Some(((w.s1, a), (w.s2, b)));
    }
    Ok(Dig1Verdict {
        s_on_cycle: s_on,
        t_on_cycle: t_on,
        special_arcs,
    })
}

/// A rotor `W` with a cyclic orbit `w_1..w_k` to be glued along a cycle of `D_ψ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleRotorAssignment {
    pub cycle: Vec<usize>,
    pub rotor: Multigraph,
    pub orbit: Vec<VertexId>,
    /// The orbit automorphism `ξ` with `ξ(w_j) = w_{j+1}`.
    pub xi: VertexMapping,
}

impl CycleRotorAssignment {
    /// Finds `ξ`; fails when the lengths differ or `orbit` is not a cyclic orbit.
    pub fn new(cycle: Vec<usize>, rotor: Multigraph, orbit: Vec<VertexId>) -> Result<Self> {
        if cycle.len() != orbit.len() {
            return Err(PhiError::Arity(format!(
                "cycle of length {} against an orbit of length {}",
                cycle.len(),
                orbit.len()
            )));
        }
        let iso = Iso::new(rotor.vertex_count().max(crate::iso::DEFAULT_MAX_VERTICES));
        let xi = iso
            .check_cyclic_orbit(&rotor, &orbit)?
            .ok_or_else(|| PhiError::Precondition("orbit is not cyclic under an automorphism".into()))?;
        Ok(Self { cycle, rotor, orbit, xi })
    }
}

/// Whether a later cycle is still a cycle of the refreshed digraph after one attachment step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObligationCheck {
    pub after_step: usize,
    pub cycle: Vec<usize>,
    pub still_a_cycle: bool,
}

/// Result of [`attach_rotors`].
#[derive(Debug, Clone)]
pub struct AttachOutcome {
    pub g_r: Multigraph,
    pub h_r: Multigraph,
    /// The witness for `(G_r, e, H_r, f)` built by extending `φ` with the
    /// identity on rotor vertices and `ψ` with each `ξ_i`; both maps are
    /// checked as isomorphisms.
    pub witness: PhiWitness,
    pub obligations: Vec<ObligationCheck>,
    /// Assignments along 1-cycles (fixed points of the index map).
    pub one_cycles: usize,
}

/// Glues each assignment's rotor along its cycle on both sides, in order.
pub fn attach_rotors(w: &PhiWitness, assignments: &[CycleRotorAssignment]) -> Result<AttachOutcome> {
    let mut cur = w.clone();
    let mut obligations = Vec::new();
    for (step, a) in assignments.iter().enumerate() {
        if a.cycle.len() != a.orbit.len() {
            return Err(PhiError::Arity(format!(
                "assignment {}: cycle of length {} against an orbit of length {}",
                step + 1,
                a.cycle.len(),
                a.orbit.len()
            )));
        }
        if let Some(&bad) = a.cycle.iter().find(|&&i| i == 0 || i > cur.n()) {
            return Err(PhiError::Precondition(format!("assignment {}: index {bad} outside [n]", step + 1)));
        }
        if !build_psi_digraph(&cur).contains_cycle(&a.cycle) {
            return Err(PhiError::Precondition(format!(
                "assignment {}: {:?} is not a directed cycle of D_psi",
                step + 1,
                a.cycle
            )));
        }
        cur = attach_one(&cur, a)?;
        let d = build_psi_digraph(&cur);
        for later in &assignments[step + 1..] {
            obligations.push(ObligationCheck {
                after_step: step + 1,
                cycle: later.cycle.clone(),
                still_a_cycle: d.contains_cycle(&later.cycle),
            });
        }
    }
    Ok(AttachOutcome {
        g_r: cur.g.clone(),
        h_r: cur.h.clone(),
        one_cycles: assignments.iter().filter(|a| a.cycle.len() == 1).count(),
        witness: cur,
        obligations,
    })
}

fn attach_one(w: &PhiWitness, a: &CycleRotorAssignment) -> Result<PhiWitness> {
    let us: Vec<VertexId> = a.cycle.iter().map(|&i| w.u(i)).collect();
    let vs: Vec<VertexId> = a.cycle.iter().map(|&i| w.v(i)).collect();
    let wt = TerminalList::new(a.rotor.clone(), a.orbit.clone())?;
    let gside = glue(&TerminalList::new(w.g.clone(), us)?, &wt)?;
    let hside = glue(&TerminalList::new(w.h.clone(), vs)?, &wt)?;

    let orbit: BTreeSet<VertexId> = a.orbit.iter().copied().collect();
    let mut phi = w.phi.clone();
    let mut psi = w.psi.clone();
    for x in a.rotor.vertices().filter(|x| !orbit.contains(x)) {
        phi.insert(gside.vertex_map[&x], hside.vertex_map[&x]);
        psi.insert(gside.vertex_map[&x], hside.vertex_map[&a.xi.apply(x)]);
    }
    PhiWitness::new(gside.graph, w.e, hside.graph, w.f, phi, psi).map_err(|err| {
        PhiError::InvariantViolated(format!("extended witness after gluing along {:?} fails: {err}", a.cycle))
    })
}

/// Findings of [`verify_new_member`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MemberVerdict {
    pub deletions_isomorphic: bool,
    pub contractions_isomorphic: bool,
    pub t_equivalent: bool,
    pub isomorphic: bool,
}

impl MemberVerdict {
    pub fn in_phi_prime(&self) -> bool {
        self.deletions_isomorphic && self.contractions_isomorphic
    }
}

impl fmt::Display for MemberVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = |b: bool| if b { "yes" } else { "no" };
        writeln!(f, "G\\e ≅ H\\f: {}", mark(self.deletions_isomorphic))?;
        writeln!(f, "G/e ≅ H/f: {}", mark(self.contractions_isomorphic))?;
        writeln!(f, "T-equivalent: {}", mark(self.t_equivalent))?;
        write!(f, "isomorphic: {}", mark(self.isomorphic))
    }
}

/// Re-certifies membership by fresh isomorphism search and compares the
/// Tutte polynomials. Non-isomorphism is reported, not required.
pub fn verify_new_member(g_r: &Multigraph, h_r: &Multigraph, e: EdgeId, f: EdgeId) -> Result<MemberVerdict> {
    let iso = limit_for(g_r, h_r);
    let deletions = iso.is_isomorphic(&g_r.delete_edge(e)?, &h_r.delete_edge(f)?)?;
    let contractions = iso.is_isomorphic(&g_r.contract_edge(e)?.0, &h_r.contract_edge(f)?.0)?;
    Ok(MemberVerdict {
        deletions_isomorphic: deletions,
        contractions_isomorphic: contractions,
        t_equivalent: t_equivalent(g_r, h_r),
        isomorphic: iso.is_isomorphic(g_r, h_r)?,
    })
}

/// One small rotor with cyclic orbits of several lengths.
#[derive(Debug, Clone)]
pub struct MenuRotor {
    pub name: &'static str,
    pub graph: Multigraph,
    /// Orbits keyed by length.
    pub orbits: BTreeMap<usize, Vec<VertexId>>,
}

/// K3, K1,3 and C4 with their cyclic orbits.
pub fn standard_rotor_menu() -> Vec<MenuRotor> {
    let ids = |xs: &[u32]| xs.iter().map(|&x| VertexId(x)).collect::<Vec<_>>();
    let k3 = Multigraph::from_edges([1, 2, 3], &[(1, 2), (2, 3), (1, 3)]);
    let star = Multigraph::from_edges([1, 2, 3, 4], &[(4, 1), (4, 2), (4, 3)]);
    let c4 = Multigraph::from_edges([1, 2, 3, 4], &[(1, 2), (2, 3), (3, 4), (4, 1)]);
    vec![
        MenuRotor {
            name: "K3",
            graph: k3,
            orbits: BTreeMap::from([(1, ids(&[1])), (2, ids(&[1, 2])), (3, ids(&[1, 2, 3]))]),
        },
        MenuRotor {
            name: "K1,3",
            graph: star,
            orbits: BTreeMap::from([(1, ids(&[4])), (3, ids(&[1, 2, 3]))]),
        },
        MenuRotor {
            name: "C4",
            graph: c4,
            orbits: BTreeMap::from([(2, ids(&[1, 3])), (4, ids(&[1, 2, 3, 4]))]),
        },
    ]
}

/// A witness file: graph references, the marked edges, both maps and the
/// rotor assignments, one record per line.
///
/// ```text
/// g seed-g.graph
/// h seed-h.graph
/// e 2
/// f 2
/// phi 1->1,2->2,3->3,4->4,5->5
/// psi 1->4,2->1,3->2,5->3
/// rotor 1,4,2 k3.graph 1,2,3
/// ```
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessFile {
    pub g_path: String,
    pub h_path: String,
    pub e: EdgeId,
    pub f: EdgeId,
    pub phi: VertexMapping,
    pub psi: VertexMapping,
    pub rotors: Vec<RotorRecord>,
}

/// One `rotor` record: cycle indices, rotor graph path, orbit vertex ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RotorRecord {
    pub cycle: Vec<usize>,
    pub path: String,
    pub orbit: Vec<VertexId>,
}

fn comma_list<T: fmt::Display>(xs: &[T]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

impl WitnessFile {
    pub fn render(&self) -> String {
        let mut out = format!(
            "g {}\nh {}\ne {}\nf {}\nphi {}\npsi {}\n",
            self.g_path, self.h_path, self.e, self.f, self.phi, self.psi
        );
        for r in &self.rotors {
            out.push_str(&format!("rotor {} {} {}\n", comma_list(&r.cycle), r.path, comma_list(&r.orbit)));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut g_path = None;
        let mut h_path = None;
        let mut e = None;
        let mut f = None;
        let mut phi = None;
        let mut psi = None;
        let mut rotors = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let err = |message: String| PhiError::WitnessFormat { line, message };
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let (tag, rest) = body.split_once(char::is_whitespace).unwrap_or((body, ""));
            let rest = rest.trim();
            let edge = |s: &str| s.parse::<u32>().map(EdgeId).map_err(|_| err(format!("bad edge id `{s}`")));
            let mapping = |s: &str| s.parse::<VertexMapping>().map_err(|m| err(m.to_string()));
            let once = |slot: bool| if slot { Err(err(format!("`{tag}` given twice"))) } else { Ok(()) };
            match tag {
                "g" => {
                    once(g_path.is_some())?;
                    g_path = Some(rest.to_string());
                }
                "h" => {
                    once(h_path.is_some())?;
                    h_path = Some(rest.to_string());
                }
                "e" => {
                    once(e.is_some())?;
                    e = Some(edge(rest)?);
                }
                "f" => {
                    once(f.is_some())?;
                    f = Some(edge(rest)?);
                }
                "phi" => {
                    once(phi.is_some())?;
                    phi = Some(mapping(rest)?);
                }
                "psi" => {
                    once(psi.is_some())?;
                    psi = Some(mapping(rest)?);
                }
                "rotor" => {
                    let parts: Vec<&str> = rest.split_whitespace().collect();
                    let [cycle, path, orbit] = parts.as_slice() else {
                        return Err(err("expected `rotor <cycle> <path> <orbit>`".into()));
                    };
                    let nums = |s: &str| {
                        s.split(',')
                            .map(|t| t.trim().parse::<u32>().map_err(|_| err(format!("bad index `{t}`"))))
                            .collect::<Result<Vec<u32>>>()
                    };
                    rotors.push(RotorRecord {
                        cycle: nums(cycle)?.into_iter().map(|i| i as usize).collect(),
                        path: path.to_string(),
                        orbit: nums(orbit)?.into_iter().map(VertexId).collect(),
                    });
                }
                other => return Err(err(format!("unknown record `{other}`"))),
            }
        }
        let missing = |what: &str| PhiError::WitnessFormat {
            line: 0,
            message: format!("missing `{what}` record"),
        };
        Ok(Self {
            g_path: g_path.ok_or_else(|| missing("g"))?,
            h_path: h_path.ok_or_else(|| missing("h"))?,
            e: e.ok_or_else(|| missing("e"))?,
            f: f.ok_or_else(|| missing("f"))?,
            phi: phi.ok_or_else(|| missing("phi"))?,
            psi: psi.ok_or_else(|| missing("psi"))?,
            rotors,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iso::is_isomorphic;

    fn v(i: u32) -> VertexId {
        VertexId(i)
    }

    fn seed() -> (Multigraph, Multigraph) {
        let g = Multigraph::from_edges(1..=5, &[(1, 2), (2, 3), (3, 4), (4, 5)]);
        let h = Multigraph::from_edges(1..=5, &[(3, 2), (2, 1), (1, 5), (5, 4)]);
        (g, h)
    }

    fn first_display() -> VertexMapping {
        "1->4,2->1,3->2,5->3".parse().unwrap()
    }

    fn second_display() -> VertexMapping {
        "1->3,2->2,3->1,5->4".parse().unwrap()
    }

    #[test]
    fn seed_certifies_and_lists_both_displays() {
        let (g, h) = seed();
        let w = certify_phi_prime(&g, EdgeId(2), &h, EdgeId(2)).unwrap().unwrap();
        assert_eq!(w.phi, VertexMapping::identity((1..=5).map(v)));
        assert_eq!((w.s1, w.s2, w.t1, w.t2), (3, 4, 1, 5));
        let psis: Vec<VertexMapping> = enumerate_phi_witnesses(&g, EdgeId(2), &h, EdgeId(2))
            .unwrap()
            .into_iter()
            .map(|w| w.psi)
            .collect();
        assert!(psis.contains(&first_display()));
        assert!(psis.contains(&second_display()));
    }

    #[test]
    fn incompatible_sizes_are_not_members() {
        let k3 = Multigraph::from_edges([1, 2, 3], &[(1, 2), (2, 3), (1, 3)]);
        let p4 = Multigraph::from_edges(1..=4, &[(1, 2), (2, 3), (3, 4)]);
        assert!(certify_phi_prime(&k3, EdgeId(0), &p4, EdgeId(0)).unwrap().is_none());
    }

    #[test]
    fn loops_and_disconnection_are_rejected() {
        let looped = Multigraph::from_edges([1, 2], &[(1, 2), (1, 1)]);
        assert!(matches!(
            certify_phi_prime(&looped, EdgeId(0), &looped, EdgeId(0)),
            Err(PhiError::Precondition(_))
        ));
        let split = Multigraph::from_edges([1, 2, 3], &[(1, 2)]);
        assert!(matches!(
            certify_phi_prime(&split, EdgeId(0), &split, EdgeId(0)),
            Err(PhiError::Precondition(_))
        ));
    }

    fn running_witness() -> PhiWitness {
        let (g, h) = seed();
        PhiWitness::new(g, EdgeId(2), h, EdgeId(2), VertexMapping::identity((1..=5).map(v)), first_display()).unwrap()
    }

    #[test]
    fn running_example_digraph() {
        let w = running_witness();
        let d = build_psi_digraph(&w);
        assert_eq!(d.arcs, vec![(1, 4), (2, 1), (2, 5), (3, 2), (4, 2), (5, 3)]);
        assert_eq!(d.arcs.len(), w.n() + 1);
        assert_eq!(directed_cycles(&d), vec![vec![1, 4, 2], vec![2, 5, 3]]);
        for c in directed_cycles(&d) {
            let verdict = check_dig1(&w, &c).unwrap();
            assert!(!verdict.s_on_cycle && !verdict.t_on_cycle);
        }
    }

    #[test]
    fn merged_to_merged_gives_n_plus_two_arcs() {
        let (g, h) = seed();
        let w = PhiWitness::new(g, EdgeId(2), h, EdgeId(2), VertexMapping::identity((1..=5).map(v)), second_display())
            .unwrap();
        assert!(w.merged_to_merged());
        let d = build_psi_digraph(&w);
        assert_eq!(d.arcs.len(), w.n() + 2);
        for arc in [(3, 1), (3, 5), (4, 1), (4, 5)] {
            assert!(d.has_arc(arc.0, arc.1));
        }
    }

    #[test]
    fn cycle_enumeration_basics() {
        let ring = PsiDigraph::new(4, [(1, 2), (2, 3), (3, 4), (4, 1)]);
        assert_eq!(directed_cycles(&ring), vec![vec![1, 2, 3, 4]]);
        let fixed = PsiDigraph::new(2, [(1, 1), (2, 2)]);
        assert_eq!(directed_cycles(&fixed), vec![vec![1], vec![2]]);
        let two = PsiDigraph::new(3, [(1, 2), (2, 1), (2, 3), (3, 2), (1, 3), (3, 1)]);
        assert_eq!(directed_cycles(&two).len(), 5);
    }

    #[test]
    fn running_example_attachment_gives_the_pair() {
        let w = running_witness();
        let k3 = Multigraph::from_edges([1, 2, 3], &[(1, 2), (2, 3), (1, 3)]);
        let star = Multigraph::from_edges([1, 2, 3, 4], &[(4, 1), (4, 2), (4, 3)]);
        let a1 = CycleRotorAssignment::new(vec![1, 4, 2], k3, vec![v(1), v(2), v(3)]).unwrap();
        let a2 = CycleRotorAssignment::new(vec![2, 5, 3], star, vec![v(1), v(2), v(3)]).unwrap();
        let out = attach_rotors(&w, &[a1, a2]).unwrap();
        assert!(out.obligations.iter().all(|o| o.still_a_cycle));
        assert_eq!(out.g_r.vertex_count(), 6);
        assert_eq!(out.g_r.edge_count(), 10);
        let verdict = verify_new_member(&out.g_r, &out.h_r, EdgeId(2), EdgeId(2)).unwrap();
        assert!(verdict.in_phi_prime());
        assert!(verdict.t_equivalent);
        assert!(!verdict.isomorphic);
    }

    #[test]
    fn attachment_along_a_non_cycle_is_rejected() {
        let w = running_witness();
        let k3 = Multigraph::from_edges([1, 2, 3], &[(1, 2), (2, 3), (1, 3)]);
        let a = CycleRotorAssignment::new(vec![1, 2, 4], k3, vec![v(1), v(2), v(3)]).unwrap();
        assert!(matches!(attach_rotors(&w, &[a]), Err(PhiError::Precondition(_))));
    }

    #[test]
    fn attachment_without_assignments_is_identity() {
        let w = running_witness();
        let out = attach_rotors(&w, &[]).unwrap();
        assert_eq!(out.g_r, w.g);
        assert_eq!(out.h_r, w.h);
        assert!(verify_new_member(&out.g_r, &out.h_r, w.e, w.f).unwrap().in_phi_prime());
    }

    #[test]
    fn one_cycle_attachment_adds_the_same_block() {
        let (g, h) = seed();
        let w = PhiWitness::new(g, EdgeId(2), h, EdgeId(2), VertexMapping::identity((1..=5).map(v)), second_display())
            .unwrap();
        let d = build_psi_digraph(&w);
        let fixed = directed_cycles(&d).into_iter().find(|c| c.len() == 1).expect("2 -> 2 is a fixed point");
        let k3 = Multigraph::from_edges([1, 2, 3], &[(1, 2), (2, 3), (1, 3)]);
        let a = CycleRotorAssignment::new(fixed, k3, vec![v(1)]).unwrap();
        let out = attach_rotors(&w, &[a]).unwrap();
        assert_eq!(out.one_cycles, 1);
        assert!(is_isomorphic(&out.g_r, &out.h_r).unwrap());
    }

    #[test]
    fn assignment_arity() {
        let k3 = Multigraph::from_edges([1, 2, 3], &[(1, 2), (2, 3), (1, 3)]);
        assert!(matches!(
            CycleRotorAssignment::new(vec![1, 2], k3, vec![v(1), v(2), v(3)]),
            Err(PhiError::Arity(_))
        ));
    }

    #[test]
    fn menu_orbits_are_cyclic() {
        for r in standard_rotor_menu() {
            for (len, orbit) in &r.orbits {
                assert_eq!(orbit.len(), *len);
                assert!(crate::iso::check_cyclic_orbit(&r.graph, orbit).unwrap().is_some(), "{} {len}", r.name);
            }
        }
    }

    #[test]
    fn witness_file_roundtrip() {
        let wf = WitnessFile {
            g_path: "g.graph".into(),
            h_path: "h.graph".into(),
            e: EdgeId(2),
            f: EdgeId(2),
            phi: VertexMapping::identity((1..=5).map(v)),
            psi: first_display(),
            rotors: vec![RotorRecord {
                cycle: vec![1, 4, 2],
                path: "k3.graph".into(),
                orbit: vec![v(1), v(2), v(3)],
            }],
        };
        let text = wf.render();
        assert_eq!(WitnessFile::parse(&text).unwrap(), wf);
        assert!(matches!(
            WitnessFile::parse("g a\nh b\ne x\n"),
            Err(PhiError::WitnessFormat { line: 3, .. })
        ));
        assert!(matches!(WitnessFile::parse("g a\n"), Err(PhiError::WitnessFormat { line: 0, .. })));
    }
}
