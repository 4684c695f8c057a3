//! Digraph pair cut solvers.
//!
//! Two problem flavors live here. In the constrained arc-deletion form
//! ([`CdpcInstance`]) we may delete up to `budget` arcs from a designated
//! deletable subset so that the source reaches at most one vertex of every
//! forbidden pair. In the vertex-deletion form ([`VdpcInstance`]) we delete
//! up to `budget` non-source vertices instead. The arc form reduces to the
//! vertex form by copying every vertex `budget + 1` times and splitting arcs
//! through middle vertices ([`cdpc_to_vdpc`]); the vertex form is solved
//! exactly by min-cut-guided branching ([`solve_vdpc`]).

use std::collections::{BTreeSet, HashSet};

use thiserror::Error;

pub type VertexId = u32;
pub type ArcId = usize;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PaircutError {
    #[error("instance has no vertices")]
    NoVertices,
    #[error("vertex {0} out of range (instance has {1} vertices)")]
    UnknownVertex(VertexId, usize),
    #[error("forbidden pair ({0}, {0}) is degenerate")]
    DegeneratePair(VertexId),
}

/// A directed graph over dense vertex ids with arc-id addressing.
#[derive(Debug, Clone)]
pub struct Digraph {
    out: Vec<Vec<(VertexId, ArcId)>>,
    arcs: Vec<(VertexId, VertexId)>,
}

impl Digraph {
    pub fn new(
        vertex_count: usize,
        arcs: Vec<(VertexId, VertexId)>,
    ) -> Result<Self, PaircutError> {
        let mut out = vec![Vec::new(); vertex_count];
        for (id, &(from, to)) in arcs.iter().enumerate() {
            if from as usize >= vertex_count {
                return Err(PaircutError::UnknownVertex(from, vertex_count));
            }
            if to as usize >= vertex_count {
                return Err(PaircutError::UnknownVertex(to, vertex_count));
            }
            out[from as usize].push((to, id));
        }
        Ok(Self { out, arcs })
    }

    pub fn vertex_count(&self) -> usize {
        self.out.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn arcs(&self) -> &[(VertexId, VertexId)] {
        &self.arcs
    }

    pub fn arc(&self, id: ArcId) -> (VertexId, VertexId) {
        self.arcs[id]
    }

    /// Forward reachability from `source` after removing the given vertices
    /// and arcs. Linear in the graph size. A removed source reaches nothing.
    pub fn reachable_from(
        &self,
        source: VertexId,
        removed_vertices: &HashSet<VertexId>,
        removed_arcs: &HashSet<ArcId>,
    ) -> Vec<bool> {
        let mut seen = vec![false; self.vertex_count()];
        if removed_vertices.contains(&source) {
            return seen;
        }
        let mut stack = vec![source];
        seen[source as usize] = true;
        while let Some(v) = stack.pop() {
            for &(to, arc) in &self.out[v as usize] {
                if seen[to as usize]
                    || removed_vertices.contains(&to)
                    || removed_arcs.contains(&arc)
                {
                    continue;
                }
                seen[to as usize] = true;
                stack.push(to);
            }
        }
        seen
    }
}

fn normalize_pairs(
    pairs: Vec<(VertexId, VertexId)>,
    vertex_count: usize,
) -> Result<Vec<(VertexId, VertexId)>, PaircutError> {
    let mut out = Vec::with_capacity(pairs.len());
    for (a, b) in pairs {
        if a as usize >= vertex_count {
            return Err(PaircutError::UnknownVertex(a, vertex_count));
        }
        if b as usize >= vertex_count {
            return Err(PaircutError::UnknownVertex(b, vertex_count));
        }
        if a == b {
            return Err(PaircutError::DegeneratePair(a));
        }
        out.push((a.min(b), a.max(b)));
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Constrained digraph pair cut: delete at most `budget` arcs, all drawn
/// from the deletable set, so that the source reaches at most one vertex of
/// every forbidden pair.
#[derive(Debug, Clone)]
pub struct CdpcInstance {
    pub graph: Digraph,
    pub source: VertexId,
    /// Normalized `(min, max)` pairs, sorted and duplicate-free.
    pub pairs: Vec<(VertexId, VertexId)>,
    /// Per-arc deletability flag, parallel to `graph.arcs()`.
    pub deletable: Vec<bool>,
    pub budget: u64,
}

impl CdpcInstance {
    /// Builds an instance from `(from, to, deletable)` arc triples.
    /// Duplicate arcs merge; a duplicate is deletable only if every copy is.
    pub fn new(
        vertex_count: usize,
        arcs: Vec<(VertexId, VertexId, bool)>,
        source: VertexId,
        pairs: Vec<(VertexId, VertexId)>,
        budget: u64,
    ) -> Result<Self, PaircutError> {
        if vertex_count == 0 {
            return Err(PaircutError::NoVertices);
        }
        if source as usize >= vertex_count {
            return Err(PaircutError::UnknownVertex(source, vertex_count));
        }
        let mut merged: Vec<(VertexId, VertexId, bool)> = Vec::with_capacity(arcs.len());
        let mut sorted = arcs;
        sorted.sort_unstable_by_key(|&(f, t, _)| (f, t));
        for (from, to, deletable) in sorted {
            match merged.last_mut() {
                Some(last) if last.0 == from && last.1 == to => last.2 &= deletable,
                _ => merged.push((from, to, deletable)),
            }
        }
        let deletable = merged.iter().map(|&(_, _, d)| d).collect();
        let graph = Digraph::new(
            vertex_count,
            merged.into_iter().map(|(f, t, _)| (f, t)).collect(),
        )?;
        let pairs = normalize_pairs(pairs, vertex_count)?;
        Ok(Self {
            graph,
            source,
            pairs,
            deletable,
            budget,
        })
    }

    pub fn deletable_arcs(&self) -> Vec<ArcId> {
        (0..self.graph.arc_count())
            .filter(|&a| self.deletable[a])
            .collect()
    }

    /// True when `arcs` is a valid solution: deletable, within budget, and
    /// no forbidden pair fully reachable afterwards.
    pub fn solution_valid(&self, arcs: &[ArcId]) -> bool {
        let set: HashSet<ArcId> = arcs.iter().copied().collect();
        if set.len() as u64 > self.budget {
            return false;
        }
        if set.iter().any(|&a| a >= self.deletable.len() || !self.deletable[a]) {
            return false;
        }
        let reach = self.graph.reachable_from(self.source, &HashSet::new(), &set);
        self.pairs
            .iter()
            .all(|&(a, b)| !(reach[a as usize] && reach[b as usize]))
    }
}

/// Vertex-deletion digraph pair cut: delete at most `budget` non-source
/// vertices so that the source reaches at most one vertex of every pair.
#[derive(Debug, Clone)]
pub struct VdpcInstance {
    pub graph: Digraph,
    pub source: VertexId,
    pub pairs: Vec<(VertexId, VertexId)>,
    pub budget: u64,
}

impl VdpcInstance {
    pub fn new(
        vertex_count: usize,
        arcs: Vec<(VertexId, VertexId)>,
        source: VertexId,
        pairs: Vec<(VertexId, VertexId)>,
        budget: u64,
    ) -> Result<Self, PaircutError> {
        if vertex_count == 0 {
            return Err(PaircutError::NoVertices);
        }
        if source as usize >= vertex_count {
            return Err(PaircutError::UnknownVertex(source, vertex_count));
        }
        let mut arcs = arcs;
        arcs.sort_unstable();
        arcs.dedup();
        let graph = Digraph::new(vertex_count, arcs)?;
        let pairs = normalize_pairs(pairs, vertex_count)?;
        Ok(Self {
            graph,
            source,
            pairs,
            budget,
        })
    }

    /// True when `removed` is a valid solution: source excluded, within
    /// budget, and no forbidden pair fully reachable afterwards.
    pub fn solution_valid(&self, removed: &[VertexId]) -> bool {
        let set: HashSet<VertexId> = removed.iter().copied().collect();
        if set.len() as u64 > self.budget || set.contains(&self.source) {
            return false;
        }
        if set.iter().any(|&v| v as usize >= self.graph.vertex_count()) {
            return false;
        }
        let reach = self.graph.reachable_from(self.source, &set, &HashSet::new());
        self.pairs
            .iter()
            .all(|&(a, b)| !(reach[a as usize] && reach[b as usize]))
    }
}

/// How a vertex of the reduced vertex-deletion instance relates to the
/// original arc-deletion instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VdpcRole {
    /// The fresh source of the reduced instance.
    Source,
    /// Copy number `copy` of an original vertex.
    Copy { vertex: VertexId, copy: u32 },
    /// The single middle vertex of a deletable arc; deleting it is
    /// equivalent to deleting the arc.
    ArcProxy { arc: ArcId },
    /// One of the `budget + 1` parallel middle vertices of an undeletable
    /// arc; pointless to delete.
    ArcLane { arc: ArcId, lane: u32 },
}

/// The reduced instance together with the meaning of each new vertex.
#[derive(Debug, Clone)]
pub struct CdpcReduction {
    pub vdpc: VdpcInstance,
    pub roles: Vec<VdpcRole>,
}

impl CdpcReduction {
    /// Maps a vertex-deletion solution back to deletable arcs, dropping
    /// copies and undeletable-arc lanes (they never sever anything a proxy
    /// deletion would not).
    pub fn arcs_for(&self, removed: &[VertexId]) -> Vec<ArcId> {
        let mut arcs: Vec<ArcId> = removed
            .iter()
            .filter_map(|&v| match self.roles[v as usize] {
                VdpcRole::ArcProxy { arc } => Some(arc),
                _ => None,
            })
            .collect();
        arcs.sort_unstable();
        arcs.dedup();
        arcs
    }
}

/// Rebuilds a constrained arc-deletion instance as a vertex-deletion one:
/// `budget + 1` copies per vertex, a fresh source wired to every source
/// copy, one middle vertex per deletable arc, `budget + 1` parallel middle
/// vertices per undeletable arc, and every copy-pair of each original pair.
/// The budget is unchanged.
pub fn cdpc_to_vdpc(inst: &CdpcInstance) -> CdpcReduction {
    let copies = inst.budget as usize + 1;
    let n = inst.graph.vertex_count();
    let mut roles = vec![VdpcRole::Source];
    let copy_id = |vertex: usize, copy: usize| -> VertexId { (1 + vertex * copies + copy) as u32 };
    for vertex in 0..n {
        for copy in 0..copies {
            debug_assert_eq!(roles.len() as u32, copy_id(vertex, copy));
            roles.push(VdpcRole::Copy {
                vertex: vertex as VertexId,
                copy: copy as u32,
            });
        }
    }
    let mut arcs: Vec<(VertexId, VertexId)> = Vec::new();
    for copy in 0..copies {
        arcs.push((0, copy_id(inst.source as usize, copy)));
    }
    for (arc, &(from, to)) in inst.graph.arcs().iter().enumerate() {
        let lanes = if inst.deletable[arc] { 1 } else { copies };
        for lane in 0..lanes {
            let mid = roles.len() as VertexId;
            roles.push(if inst.deletable[arc] {
                VdpcRole::ArcProxy { arc }
            } else {
                VdpcRole::ArcLane {
                    arc,
                    lane: lane as u32,
                }
            });
            for copy in 0..copies {
                arcs.push((copy_id(from as usize, copy), mid));
                arcs.push((mid, copy_id(to as usize, copy)));
            }
        }
    }
    let mut pairs = Vec::with_capacity(inst.pairs.len() * copies * copies);
    for &(a, b) in &inst.pairs {
        for i in 0..copies {
            for j in 0..copies {
                pairs.push((copy_id(a as usize, i), copy_id(b as usize, j)));
            }
        }
    }
    let vdpc = VdpcInstance::new(roles.len(), arcs, 0, pairs, inst.budget)
        .expect("reduction produces a well-formed instance");
    CdpcReduction { vdpc, roles }
}

const INF: u64 = u64::MAX / 4;

/// Unit-capacity max-flow network used for minimum vertex cuts. Vertices of
/// the cut problem are split into an in-node and an out-node joined by a
/// unit arc; original arcs and terminal hookups get infinite capacity.
struct FlowNet {
    out: Vec<Vec<usize>>,
    to: Vec<u32>,
    cap: Vec<u64>,
}

impl FlowNet {
    fn new(nodes: usize) -> Self {
        Self {
            out: vec![Vec::new(); nodes],
            to: Vec::new(),
            cap: Vec::new(),
        }
    }

    fn add(&mut self, from: u32, to: u32, cap: u64) {
        let id = self.to.len();
        self.to.push(to);
        self.cap.push(cap);
        self.out[from as usize].push(id);
        self.to.push(from);
        self.cap.push(0);
        self.out[to as usize].push(id + 1);
    }

    /// Edmonds-Karp, stopping as soon as the flow exceeds `limit`.
    fn max_flow_limited(&mut self, source: u32, sink: u32, limit: u64) -> u64 {
        let mut flow = 0;
        while flow <= limit {
            let mut parent: Vec<Option<usize>> = vec![None; self.out.len()];
            let mut queue = std::collections::VecDeque::from([source]);
            let mut seen = vec![false; self.out.len()];
            seen[source as usize] = true;
            'bfs: while let Some(v) = queue.pop_front() {
                for &e in &self.out[v as usize] {
                    let to = self.to[e];
                    if self.cap[e] == 0 || seen[to as usize] {
                        continue;
                    }
                    seen[to as usize] = true;
                    parent[to as usize] = Some(e);
                    if to == sink {
                        break 'bfs;
                    }
                    queue.push_back(to);
                }
            }
            if parent[sink as usize].is_none() {
                break;
            }
            let mut bottleneck = INF;
            let mut v = sink;
            while v != source {
                let e = parent[v as usize].expect("path edge");
                bottleneck = bottleneck.min(self.cap[e]);
                v = self.to[e ^ 1];
            }
            let mut v = sink;
            while v != source {
                let e = parent[v as usize].expect("path edge");
                self.cap[e] -= bottleneck;
                self.cap[e ^ 1] += bottleneck;
                v = self.to[e ^ 1];
            }
            flow += bottleneck;
        }
        flow
    }

    fn residual_reachable(&self, source: u32) -> Vec<bool> {
        let mut seen = vec![false; self.out.len()];
        seen[source as usize] = true;
        let mut stack = vec![source];
        while let Some(v) = stack.pop() {
            for &e in &self.out[v as usize] {
                let to = self.to[e];
                if self.cap[e] > 0 && !seen[to as usize] {
                    seen[to as usize] = true;
                    stack.push(to);
                }
            }
        }
        seen
    }
}

/// A minimum vertex cut separating the terminals from the source, if one of
/// size at most `limit` exists. The returned cut is the closest one: among
/// all minimum cuts it has the smallest source-reachable side, which makes
/// it unique and keeps the branching solver's progress argument valid.
fn min_vertex_cut(
    graph: &Digraph,
    source: VertexId,
    terminals: &BTreeSet<VertexId>,
    limit: u64,
) -> Option<Vec<VertexId>> {
    if terminals.is_empty() {
        return Some(Vec::new());
    }
    if terminals.contains(&source) {
        return None;
    }
    let n = graph.vertex_count();
    // node 2v = in(v), 2v + 1 = out(v), 2n = super sink
    let mut net = FlowNet::new(2 * n + 1);
    for v in 0..n as u32 {
        let cap = if v == source { INF } else { 1 };
        net.add(2 * v, 2 * v + 1, cap);
    }
    for &(from, to) in graph.arcs() {
        net.add(2 * from + 1, 2 * to, INF);
    }
    let sink = 2 * n as u32;
    for &t in terminals {
        net.add(2 * t + 1, sink, INF);
    }
    let flow = net.max_flow_limited(2 * source + 1, sink, limit);
    if flow > limit {
        return None;
    }
    let residual = net.residual_reachable(2 * source + 1);
    let cut: Vec<VertexId> = (0..n as u32)
        .filter(|&v| residual[2 * v as usize] && !residual[2 * v as usize + 1])
        .collect();
    debug_assert_eq!(cut.len() as u64, flow);
    Some(cut)
}

/// Exact solver for vertex-deletion digraph pair cut by min-cut-guided
/// branching: grow a set of terminals that must become unreachable, apply
/// the closest minimum vertex cut, and branch on the endpoints of any pair
/// the cut leaves fully reachable. Every branch strictly increases the
/// minimum cut, so the search tree has at most `2^(budget + 1)` nodes.
///
/// Returns a sorted deletion set, or `None` when no solution fits the
/// budget. Pairs containing the source immediately force the other endpoint
/// into the terminal set, since the source itself can never be deleted.
pub fn solve_vdpc(inst: &VdpcInstance) -> Option<Vec<VertexId>> {
    let mut terminals = BTreeSet::new();
    for &(a, b) in &inst.pairs {
        if a == inst.source {
            terminals.insert(b);
        } else if b == inst.source {
            terminals.insert(a);
        }
    }
    branch_vdpc(inst, &terminals)
}

fn branch_vdpc(inst: &VdpcInstance, terminals: &BTreeSet<VertexId>) -> Option<Vec<VertexId>> {
    let cut = min_vertex_cut(&inst.graph, inst.source, terminals, inst.budget)?;
    let removed: HashSet<VertexId> = cut.iter().copied().collect();
    let reach = inst
        .graph
        .reachable_from(inst.source, &removed, &HashSet::new());
    let violated = inst
        .pairs
        .iter()
        .find(|&&(a, b)| reach[a as usize] && reach[b as usize]);
    match violated {
        None => Some(cut),
        Some(&(a, b)) => {
            // both endpoints survive the closest cut, so committing either
            // one raises the min cut; try the smaller endpoint first
            for candidate in [a, b] {
                let mut grown = terminals.clone();
                grown.insert(candidate);
                if let Some(solution) = branch_vdpc(inst, &grown) {
                    return Some(solution);
                }
            }
            None
        }
    }
}

/// Exact solver for the constrained arc-deletion problem via the reduction
/// to the vertex-deletion variant. Returns sorted ids of deleted arcs.
pub fn solve_cdpc(inst: &CdpcInstance) -> Option<Vec<ArcId>> {
    // budgets beyond the deletable arc count change nothing but would blow
    // up the reduction size
    let deletable_count = inst.deletable.iter().filter(|&&d| d).count() as u64;
    let clamped;
    let inst = if inst.budget > deletable_count {
        clamped = CdpcInstance {
            budget: deletable_count,
            ..inst.clone()
        };
        &clamped
    } else {
        inst
    };
    let reduction = cdpc_to_vdpc(inst);
    let removed = solve_vdpc(&reduction.vdpc)?;
    let arcs = reduction.arcs_for(&removed);
    debug_assert!(inst.solution_valid(&arcs));
    Some(arcs)
}
