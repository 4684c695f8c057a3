//! The fixed-parameter pipeline.
//!
//! Given a cover of span at most `k` for the graph minus one vertex, a
//! compression step decides whether the whole graph has a cover of span at
//! most `k`. The prior cover is summarized by a [`CompressionContext`]: the
//! *flexible* vertices (those of positive span, plus the new vertex) whose
//! activity must be re-decided, the timestamps where they were active, and
//! an *anchor* occurrence for every other vertex. Each way of re-deciding
//! the flexible vertices is a [`FeasibleAssignment`]; for each one, a
//! constrained digraph pair cut instance with one span-counting gadget per
//! remaining vertex decides whether a full cover agreeing with the guess
//! exists, and a positive answer is turned back into a cover. The outer
//! loop ([`solve_min_timeline_cover`]) adds base vertices one at a time and
//! repairs the cover after each addition.

use std::collections::{BTreeMap, HashSet};

use rayon::prelude::*;
use thiserror::Error;

use crate::paircut::{self, ArcId, CdpcInstance, VertexId};
use crate::temporal::{
    BaseVertex, Interval, ModelError, TemporalAssignment, TemporalCover, TemporalEdge,
    TemporalGraph, Timestamp,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CompressionError {
    #[error("graph horizon must be at least 3 (pad first)")]
    HorizonTooSmall,
    #[error("timestamps 1 and T must be edgeless (pad first)")]
    BoundaryNotEdgeless,
    #[error("prior cover assigns the new vertex")]
    PriorMentionsNewVertex,
    #[error("prior cover misses base vertex {0}")]
    PriorMissingVertex(BaseVertex),
    #[error("prior cover leaves edge {0:?} uncovered")]
    PriorUncoveredEdge(TemporalEdge),
    #[error("prior cover span {span} exceeds budget {budget}")]
    PriorSpanExceedsBudget { span: u64, budget: u64 },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Why an assignment fails the feasibility conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Infeasible {
    /// Assigns a vertex outside the flexible set.
    OutsideFlexible(BaseVertex),
    /// An interval leaves `[1, T]`.
    OutOfRange(Timestamp),
    /// Total span exceeds the budget.
    SpanExceedsBudget { span: u64, budget: u64 },
    /// An edge between two flexible vertices has no active endpoint.
    UncoveredFlexibleEdge(TemporalEdge),
    /// The new vertex has no active timestamp.
    NewVertexEmpty,
    /// A flexible vertex is active, but neither at a previously active
    /// timestamp nor to cover an edge the new vertex leaves uncovered.
    UnjustifiedPart(BaseVertex),
}

/// Summary of a prior cover used by one compression step.
#[derive(Debug, Clone)]
pub struct CompressionContext<'g> {
    graph: &'g TemporalGraph,
    new_vertex: BaseVertex,
    prior: TemporalAssignment,
    budget: u64,
    /// Vertices of positive span in the prior cover, plus the new vertex.
    flexible: Vec<BaseVertex>,
    flexible_mask: Vec<bool>,
    /// Timestamps where the positive-span vertices were active, sorted.
    active_times: Vec<Timestamp>,
    active_at: Vec<bool>,
    /// Span-0 vertices outside the flexible set, sorted.
    anchored: Vec<BaseVertex>,
    /// One prior occurrence per anchored vertex, relocated into
    /// `[2, T - 1]` when it sat on an edgeless boundary timestamp.
    anchors: BTreeMap<BaseVertex, Timestamp>,
    /// Edges with both endpoints flexible.
    flexible_edges: Vec<TemporalEdge>,
}

impl<'g> CompressionContext<'g> {
    pub fn graph(&self) -> &'g TemporalGraph {
        self.graph
    }

    pub fn new_vertex(&self) -> BaseVertex {
        self.new_vertex
    }

    pub fn prior(&self) -> &TemporalAssignment {
        &self.prior
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn flexible(&self) -> &[BaseVertex] {
        &self.flexible
    }

    pub fn is_flexible(&self, v: BaseVertex) -> bool {
        self.flexible_mask[v.index()]
    }

    pub fn active_times(&self) -> &[Timestamp] {
        &self.active_times
    }

    pub fn is_active_time(&self, t: Timestamp) -> bool {
        self.active_at[t as usize]
    }

    pub fn anchored(&self) -> &[BaseVertex] {
        &self.anchored
    }

    pub fn anchor_time(&self, v: BaseVertex) -> Option<Timestamp> {
        self.anchors.get(&v).copied()
    }

    pub fn flexible_edges(&self) -> &[TemporalEdge] {
        &self.flexible_edges
    }
}

/// Builds the compression context for `(graph, new_vertex, prior, budget)`.
/// The prior assignment must cover the graph minus the new vertex within the
/// budget, and the graph must have edgeless boundary timestamps.
pub fn derive_context<'g>(
    graph: &'g TemporalGraph,
    new_vertex: BaseVertex,
    prior: &TemporalAssignment,
    budget: u64,
) -> Result<CompressionContext<'g>, CompressionError> {
    if graph.horizon() < 3 {
        return Err(CompressionError::HorizonTooSmall);
    }
    if !graph.boundary_edgeless() {
        return Err(CompressionError::BoundaryNotEdgeless);
    }
    if new_vertex.index() >= graph.base_count() {
        return Err(ModelError::UnknownVertex(new_vertex).into());
    }
    if prior.get(new_vertex).is_some() {
        return Err(CompressionError::PriorMentionsNewVertex);
    }
    for (v, iv) in prior.iter() {
        if v.index() >= graph.base_count() {
            return Err(ModelError::UnknownVertex(v).into());
        }
        if iv.hi() > graph.horizon() {
            return Err(ModelError::TimestampOutOfRange {
                t: iv.hi(),
                horizon: graph.horizon(),
            }
            .into());
        }
    }
    for v in graph.vertices() {
        if v != new_vertex && prior.get(v).is_none() {
            return Err(CompressionError::PriorMissingVertex(v));
        }
    }
    for &e in graph.edges() {
        if e.touches(new_vertex) {
            continue;
        }
        if !prior.contains(e.u, e.t) && !prior.contains(e.v, e.t) {
            return Err(CompressionError::PriorUncoveredEdge(e));
        }
    }
    let span = prior.total_span();
    if span > budget {
        return Err(CompressionError::PriorSpanExceedsBudget { span, budget });
    }

    let n = graph.base_count();
    let mut flexible_mask = vec![false; n];
    flexible_mask[new_vertex.index()] = true;
    for v in graph.vertices() {
        if prior.span_of(v) > 0 {
            flexible_mask[v.index()] = true;
        }
    }
    let flexible: Vec<BaseVertex> = graph
        .vertices()
        .filter(|&v| flexible_mask[v.index()])
        .collect();

    let mut active_at = vec![false; graph.horizon() as usize + 1];
    for &v in &flexible {
        if v == new_vertex {
            continue;
        }
        let iv = prior.get(v).expect("flexible vertices have entries");
        for t in iv.timestamps() {
            active_at[t as usize] = true;
        }
    }
    let active_times: Vec<Timestamp> = (1..=graph.horizon())
        .filter(|&t| active_at[t as usize])
        .collect();

    let anchored: Vec<BaseVertex> = graph
        .vertices()
        .filter(|&v| !flexible_mask[v.index()])
        .collect();
    let mut anchors = BTreeMap::new();
    for &v in &anchored {
        let iv = prior.get(v).expect("anchored vertices have entries");
        debug_assert_eq!(iv.span(), 0);
        // boundary occurrences cover nothing, so they may move to t = 2
        let t = if iv.lo() == 1 || iv.lo() == graph.horizon() {
            2
        } else {
            iv.lo()
        };
        anchors.insert(v, t);
    }

    let flexible_edges = graph
        .edges()
        .iter()
        .copied()
        .filter(|e| flexible_mask[e.u.index()] && flexible_mask[e.v.index()])
        .collect();

    Ok(CompressionContext {
        graph,
        new_vertex,
        prior: prior.clone(),
        budget,
        flexible,
        flexible_mask,
        active_times,
        active_at,
        anchored,
        anchors,
        flexible_edges,
    })
}

/// An assignment of the flexible vertices satisfying the four feasibility
/// conditions: span within budget, every flexible-flexible edge covered, a
/// non-empty part for the new vertex, and every other active vertex either
/// touching a previously active timestamp or covering an edge the new
/// vertex leaves uncovered.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeasibleAssignment {
    assignment: TemporalAssignment,
    /// Flexible vertices with a non-empty part, sorted. Always contains the
    /// new vertex.
    assigned: Vec<BaseVertex>,
    /// Flexible vertices left empty, sorted.
    unassigned: Vec<BaseVertex>,
}

impl FeasibleAssignment {
    /// Validates the feasibility conditions and derives the partition into
    /// assigned and unassigned vertices.
    pub fn new(
        ctx: &CompressionContext,
        assignment: TemporalAssignment,
    ) -> Result<Self, Infeasible> {
        for (v, iv) in assignment.iter() {
            if v.index() >= ctx.graph.base_count() || !ctx.is_flexible(v) {
                return Err(Infeasible::OutsideFlexible(v));
            }
            if iv.hi() > ctx.graph.horizon() {
                return Err(Infeasible::OutOfRange(iv.hi()));
            }
        }
        let span = assignment.total_span();
        if span > ctx.budget {
            return Err(Infeasible::SpanExceedsBudget {
                span,
                budget: ctx.budget,
            });
        }
        let w_part = assignment
            .get(ctx.new_vertex)
            .ok_or(Infeasible::NewVertexEmpty)?;
        for &e in &ctx.flexible_edges {
            if !assignment.contains(e.u, e.t) && !assignment.contains(e.v, e.t) {
                return Err(Infeasible::UncoveredFlexibleEdge(e));
            }
        }
        for &v in &ctx.flexible {
            if v == ctx.new_vertex {
                continue;
            }
            let Some(iv) = assignment.get(v) else { continue };
            let touches_active = iv.timestamps().any(|t| ctx.is_active_time(t));
            let covers_new_edge = iv
                .timestamps()
                .any(|t| ctx.graph.has_edge(v, ctx.new_vertex, t) && !w_part.contains(t));
            if !touches_active && !covers_new_edge {
                return Err(Infeasible::UnjustifiedPart(v));
            }
        }
        let assigned: Vec<BaseVertex> = ctx
            .flexible
            .iter()
            .copied()
            .filter(|&v| assignment.get(v).is_some())
            .collect();
        let unassigned: Vec<BaseVertex> = ctx
            .flexible
            .iter()
            .copied()
            .filter(|&v| assignment.get(v).is_none())
            .collect();
        Ok(Self {
            assignment,
            assigned,
            unassigned,
        })
    }

    pub fn assignment(&self) -> &TemporalAssignment {
        &self.assignment
    }

    pub fn assigned(&self) -> &[BaseVertex] {
        &self.assigned
    }

    pub fn unassigned(&self) -> &[BaseVertex] {
        &self.unassigned
    }

    pub fn span(&self) -> u64 {
        self.assignment.total_span()
    }

    /// The gadget pivot of `v`: its anchor occurrence for anchored vertices,
    /// timestamp 2 for unassigned flexible vertices, `None` otherwise.
    pub fn pivot_of(&self, ctx: &CompressionContext, v: BaseVertex) -> Option<Timestamp> {
        if let Some(t) = ctx.anchor_time(v) {
            return Some(t);
        }
        if self.unassigned.binary_search(&v).is_ok() {
            return Some(2);
        }
        None
    }
}

fn intervals_ascending(
    horizon: Timestamp,
    max_span: u64,
    mut keep: impl FnMut(Interval) -> bool,
) -> Vec<Interval> {
    let mut out = Vec::new();
    for lo in 1..=horizon {
        for hi in lo..=horizon {
            let iv = Interval::new(lo, hi).expect("ordered loop bounds");
            if iv.span() <= max_span && keep(iv) {
                out.push(iv);
            }
        }
    }
    out
}

/// Enumerates every feasible assignment, in deterministic order and without
/// duplicates.
///
/// The search branches on the new vertex's interval first (ascending by
/// endpoints); each choice forces the flexible endpoints of the new-vertex
/// edges it leaves uncovered, and the remaining flexible vertices then range
/// over nothing, or any within-budget interval that either contains their
/// forced occurrences or touches a previously active timestamp. Branches
/// whose running span exceeds the budget are pruned; every surviving leaf is
/// checked against the feasibility conditions before emission.
pub fn enumerate_feasible_assignments(ctx: &CompressionContext) -> Vec<FeasibleAssignment> {
    let w = ctx.new_vertex;
    let horizon = ctx.graph.horizon();
    let others: Vec<BaseVertex> = ctx.flexible.iter().copied().filter(|&v| v != w).collect();
    let mut out = Vec::new();
    let mut seen: HashSet<Vec<(BaseVertex, Timestamp, Timestamp)>> = HashSet::new();

    for w_part in intervals_ascending(horizon, ctx.budget, |_| true) {
        // forced occurrences: edges to the new vertex it does not cover
        let mut forced: BTreeMap<BaseVertex, (Timestamp, Timestamp)> = BTreeMap::new();
        for &e in &ctx.flexible_edges {
            if !e.touches(w) || w_part.contains(e.t) {
                continue;
            }
            let v = e.other(w).expect("edge touches the new vertex");
            let hull = forced.entry(v).or_insert((e.t, e.t));
            hull.0 = hull.0.min(e.t);
            hull.1 = hull.1.max(e.t);
        }
        let candidates: Vec<Vec<Option<Interval>>> = others
            .iter()
            .map(|&v| match forced.get(&v) {
                Some(&(lo, hi)) => {
                    intervals_ascending(horizon, ctx.budget, |iv| {
                        iv.contains(lo) && iv.contains(hi)
                    })
                    .into_iter()
                    .map(Some)
                    .collect()
                }
                None => {
                    let mut options: Vec<Option<Interval>> = vec![None];
                    options.extend(
                        intervals_ascending(horizon, ctx.budget, |iv| {
                            iv.timestamps().any(|t| ctx.is_active_time(t))
                        })
                        .into_iter()
                        .map(Some),
                    );
                    options
                }
            })
            .collect();

        let mut partial = TemporalAssignment::new();
        partial.set(w, w_part);
        descend(
            ctx,
            &others,
            &candidates,
            0,
            w_part.span(),
            &mut partial,
            &mut seen,
            &mut out,
        );
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn descend(
    ctx: &CompressionContext,
    others: &[BaseVertex],
    candidates: &[Vec<Option<Interval>>],
    depth: usize,
    used: u64,
    partial: &mut TemporalAssignment,
    seen: &mut HashSet<Vec<(BaseVertex, Timestamp, Timestamp)>>,
    out: &mut Vec<FeasibleAssignment>,
) {
    if depth == others.len() {
        if let Ok(fa) = FeasibleAssignment::new(ctx, partial.clone()) {
            let key: Vec<_> = partial
                .iter()
                .map(|(v, iv)| (v, iv.lo(), iv.hi()))
                .collect();
            if seen.insert(key) {
                out.push(fa);
            }
        }
        return;
    }
    let v = others[depth];
    for choice in &candidates[depth] {
        match choice {
            None => {
                descend(ctx, others, candidates, depth + 1, used, partial, seen, out);
            }
            Some(iv) => {
                if used + iv.span() > ctx.budget {
                    continue;
                }
                partial.set(v, *iv);
                descend(
                    ctx,
                    others,
                    candidates,
                    depth + 1,
                    used + iv.span(),
                    partial,
                    seen,
                    out,
                );
                partial.remove(v);
            }
        }
    }
}

/// Whether `cover` agrees with the guess `fa`: exact part equality on the
/// assigned vertices, and for every unassigned vertex and previously active
/// timestamp, the cover contains each anchored neighbor of that occurrence.
pub fn agrees_with(
    ctx: &CompressionContext,
    cover: &TemporalAssignment,
    fa: &FeasibleAssignment,
) -> bool {
    for &v in fa.assigned() {
        if cover.get(v) != fa.assignment().get(v) {
            return false;
        }
    }
    let unassigned: HashSet<BaseVertex> = fa.unassigned().iter().copied().collect();
    for &e in ctx.graph.edges() {
        if !ctx.is_active_time(e.t) {
            continue;
        }
        for (a, b) in [(e.u, e.v), (e.v, e.u)] {
            if unassigned.contains(&a) && ctx.anchor_time(b).is_some() && !cover.contains(b, e.t)
            {
                return false;
            }
        }
    }
    true
}

/// Names the role of each pair-cut vertex and addresses the per-vertex
/// span gadgets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GadgetRole {
    Source,
    /// Reached by the source iff the occurrence `(v, t)` joins the cover.
    Pos(BaseVertex, Timestamp),
    /// Exists only at the gadget pivot; reached iff `(v, t)` stays out.
    Neg(BaseVertex, Timestamp),
    /// Chain node propagating reachability away from the pivot.
    Away(BaseVertex, Timestamp),
    /// Chain node propagating reachability toward the pivot.
    Toward(BaseVertex, Timestamp),
    /// Sits behind slot `t`'s deletable arc; each such deletion pays one
    /// unit of span for `v`.
    Gate(BaseVertex, Timestamp),
}

#[derive(Debug, Clone)]
struct Gadget {
    pivot: Timestamp,
    /// Per timestamp: the `Pos` vertex, or the `Neg` vertex at the pivot.
    occurrence: Vec<VertexId>,
    away: Vec<VertexId>,
    toward: Vec<VertexId>,
    gate: Vec<VertexId>,
}

const UNUSED: VertexId = VertexId::MAX;

/// Bidirectional naming between pair-cut vertices and their temporal-graph
/// meaning. Total over the instance's vertex set.
#[derive(Debug, Clone)]
pub struct GadgetMap {
    roles: Vec<GadgetRole>,
    gadgets: BTreeMap<BaseVertex, Gadget>,
    gate_arcs: BTreeMap<(BaseVertex, Timestamp), ArcId>,
}

impl GadgetMap {
    pub fn role(&self, id: VertexId) -> GadgetRole {
        self.roles[id as usize]
    }

    pub fn vertex_count(&self) -> usize {
        self.roles.len()
    }

    /// Base vertices carrying a gadget, in ascending order.
    pub fn owners(&self) -> impl Iterator<Item = BaseVertex> + '_ {
        self.gadgets.keys().copied()
    }

    pub fn pivot(&self, v: BaseVertex) -> Option<Timestamp> {
        self.gadgets.get(&v).map(|g| g.pivot)
    }

    pub fn pos_id(&self, v: BaseVertex, t: Timestamp) -> Option<VertexId> {
        let g = self.gadgets.get(&v)?;
        if t == g.pivot {
            None
        } else {
            Some(g.occurrence[t as usize - 1])
        }
    }

    pub fn neg_id(&self, v: BaseVertex, t: Timestamp) -> Option<VertexId> {
        let g = self.gadgets.get(&v)?;
        if t == g.pivot {
            Some(g.occurrence[t as usize - 1])
        } else {
            None
        }
    }

    /// Arc id of slot `t`'s deletable arc in `v`'s gadget.
    pub fn gate_arc(&self, v: BaseVertex, t: Timestamp) -> Option<ArcId> {
        self.gate_arcs.get(&(v, t)).copied()
    }

    /// The gadget owner of a vertex role, if any.
    pub fn role_owner(&self, role: GadgetRole) -> Option<BaseVertex> {
        match role {
            GadgetRole::Source => None,
            GadgetRole::Pos(v, _)
            | GadgetRole::Neg(v, _)
            | GadgetRole::Away(v, _)
            | GadgetRole::Toward(v, _)
            | GadgetRole::Gate(v, _) => Some(v),
        }
    }
}

/// Builds the pair-cut instance for one feasible assignment: a span gadget
/// per anchored or unassigned vertex, undeletable implication arcs between
/// occurrence literals for edges among them, and forcing arcs or pairs from
/// the source for edges whose flexible endpoint the guess leaves inactive.
/// The budget is the remaining span.
pub fn build_cdpc_instance(
    ctx: &CompressionContext,
    fa: &FeasibleAssignment,
) -> (CdpcInstance, GadgetMap) {
    let graph = ctx.graph;
    let horizon = graph.horizon();
    let t_len = horizon as usize;
    debug_assert!(fa.span() <= ctx.budget);

    let mut roles = vec![GadgetRole::Source];
    let mut arcs: Vec<(VertexId, VertexId, bool)> = Vec::new();
    let mut pairs: Vec<(VertexId, VertexId)> = Vec::new();
    let mut gadgets: BTreeMap<BaseVertex, Gadget> = BTreeMap::new();

    let mut owners: Vec<BaseVertex> = ctx.anchored.to_vec();
    owners.extend(fa.unassigned().iter().copied());
    owners.sort_unstable();

    for &v in &owners {
        let pivot = fa.pivot_of(ctx, v).expect("owners carry a pivot");
        debug_assert!(pivot >= 2 && pivot < horizon);
        let mut gadget = Gadget {
            pivot,
            occurrence: vec![UNUSED; t_len],
            away: vec![UNUSED; t_len],
            toward: vec![UNUSED; t_len],
            gate: vec![UNUSED; t_len],
        };
        for t in 1..=horizon {
            let id = roles.len() as VertexId;
            roles.push(if t == pivot {
                GadgetRole::Neg(v, t)
            } else {
                GadgetRole::Pos(v, t)
            });
            gadget.occurrence[t as usize - 1] = id;
        }
        for t in 1..=horizon {
            if t == pivot {
                continue;
            }
            let away = roles.len() as VertexId;
            roles.push(GadgetRole::Away(v, t));
            let toward = roles.len() as VertexId;
            roles.push(GadgetRole::Toward(v, t));
            let gate = roles.len() as VertexId;
            roles.push(GadgetRole::Gate(v, t));
            gadget.away[t as usize - 1] = away;
            gadget.toward[t as usize - 1] = toward;
            gadget.gate[t as usize - 1] = gate;
            let pos = gadget.occurrence[t as usize - 1];
            let neg = gadget.occurrence[pivot as usize - 1];
            arcs.push((pos, away, false));
            arcs.push((pos, toward, false));
            arcs.push((toward, gate, true));
            arcs.push((gate, neg, false));
        }
        let at = |slot: &[VertexId], t: Timestamp| slot[t as usize - 1];
        // chains run away from the pivot on the `away` side and toward it
        // on the `toward` side
        for t in 2..pivot {
            arcs.push((at(&gadget.away, t), at(&gadget.away, t - 1), false));
        }
        for t in 1..pivot.saturating_sub(1) {
            arcs.push((at(&gadget.toward, t), at(&gadget.toward, t + 1), false));
        }
        for t in (pivot + 1)..horizon {
            arcs.push((at(&gadget.away, t), at(&gadget.away, t + 1), false));
        }
        for t in (pivot + 2)..=horizon {
            arcs.push((at(&gadget.toward, t), at(&gadget.toward, t - 1), false));
        }
        // gate/away pairs on each side of the pivot, toward/gate across it
        for h in 1..pivot {
            for j in (h + 1)..pivot {
                pairs.push((at(&gadget.gate, h), at(&gadget.away, j)));
            }
        }
        for j in (pivot + 1)..=horizon {
            for h in (j + 1)..=horizon {
                pairs.push((at(&gadget.gate, h), at(&gadget.away, j)));
            }
        }
        for h in 1..pivot {
            for j in (pivot + 1)..=horizon {
                pairs.push((at(&gadget.toward, h), at(&gadget.gate, j)));
                pairs.push((at(&gadget.toward, j), at(&gadget.gate, h)));
            }
        }
        gadgets.insert(v, gadget);
    }

    let pivot_is = |v: BaseVertex, t: Timestamp| gadgets.get(&v).is_some_and(|g| g.pivot == t);
    let occurrence = |v: BaseVertex, t: Timestamp| gadgets[&v].occurrence[t as usize - 1];
    let unassigned: HashSet<BaseVertex> = fa.unassigned().iter().copied().collect();
    let anchored: HashSet<BaseVertex> = ctx.anchored.iter().copied().collect();

    // an occurrence is "loose" when its cover status is decided purely by
    // the pair cut: anchored vertices anywhere, unassigned flexible ones
    // outside the previously active timestamps
    let loose = |v: BaseVertex, t: Timestamp| {
        anchored.contains(&v) || (unassigned.contains(&v) && !ctx.is_active_time(t))
    };
    // occurrences whose absence from the guess forces the anchored
    // neighbor into the cover
    let forcing = |v: BaseVertex, t: Timestamp| {
        (fa.assignment().get(v).is_some() && !fa.assignment().contains(v, t))
            || (unassigned.contains(&v) && ctx.is_active_time(t))
    };

    for &e in graph.edges() {
        if loose(e.u, e.t) && loose(e.v, e.t) {
            let u_neg = pivot_is(e.u, e.t);
            let v_neg = pivot_is(e.v, e.t);
            match (u_neg, v_neg) {
                (true, true) => pairs.push((occurrence(e.u, e.t), occurrence(e.v, e.t))),
                (true, false) => arcs.push((occurrence(e.u, e.t), occurrence(e.v, e.t), false)),
                (false, true) => arcs.push((occurrence(e.v, e.t), occurrence(e.u, e.t), false)),
                (false, false) => {
                    unreachable!("edge {:?}: some endpoint must be an anchor occurrence", e)
                }
            }
            continue;
        }
        for (a, b) in [(e.u, e.v), (e.v, e.u)] {
            if anchored.contains(&b) && ctx.is_flexible(a) && forcing(a, e.t) {
                if pivot_is(b, e.t) {
                    pairs.push((0, occurrence(b, e.t)));
                } else {
                    arcs.push((0, occurrence(b, e.t), false));
                }
            }
        }
    }

    let budget = ctx.budget - fa.span();
    let inst = CdpcInstance::new(roles.len(), arcs, 0, pairs, budget)
        .expect("gadget construction produces a well-formed instance");

    let mut gate_arcs = BTreeMap::new();
    for (id, &(from, _)) in inst.graph.arcs().iter().enumerate() {
        if inst.deletable[id] {
            match roles[from as usize] {
                GadgetRole::Toward(v, t) => {
                    gate_arcs.insert((v, t), id);
                }
                other => unreachable!("deletable arc from non-gate role {:?}", other),
            }
        }
    }
    let map = GadgetMap {
        roles,
        gadgets,
        gate_arcs,
    };
    (inst, map)
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReconstructError {
    #[error("arc {0} is not deletable")]
    NotDeletable(ArcId),
    #[error("deletion set of size {got} exceeds budget {budget}")]
    BudgetExceeded { got: usize, budget: u64 },
    #[error("pair ({0}, {1}) stays fully reachable")]
    PairStillReachable(VertexId, VertexId),
    #[error(transparent)]
    Cover(#[from] crate::temporal::CoverError),
}

/// Turns a valid pair-cut solution back into a temporal cover: assigned
/// parts are copied from the guess; every gadget owner receives the
/// occurrences whose `Pos` literal the source still reaches, plus the pivot
/// when its `Neg` literal became unreachable, with gaps closed; owners left
/// empty get a span-0 singleton. Rejects deletion sets that are not valid
/// solutions of the instance.
pub fn reconstruct_cover(
    ctx: &CompressionContext,
    fa: &FeasibleAssignment,
    inst: &CdpcInstance,
    map: &GadgetMap,
    deleted: &[ArcId],
) -> Result<TemporalCover, ReconstructError> {
    for &a in deleted {
        if a >= inst.deletable.len() || !inst.deletable[a] {
            return Err(ReconstructError::NotDeletable(a));
        }
    }
    if deleted.len() as u64 > inst.budget {
        return Err(ReconstructError::BudgetExceeded {
            got: deleted.len(),
            budget: inst.budget,
        });
    }
    let removed: HashSet<ArcId> = deleted.iter().copied().collect();
    let reach = inst
        .graph
        .reachable_from(inst.source, &HashSet::new(), &removed);
    for &(a, b) in &inst.pairs {
        if reach[a as usize] && reach[b as usize] {
            return Err(ReconstructError::PairStillReachable(a, b));
        }
    }

    let mut assignment = TemporalAssignment::new();
    for &v in fa.assigned() {
        assignment.set(v, fa.assignment().get(v).expect("assigned part"));
    }
    for v in map.owners() {
        let pivot = map.pivot(v).expect("owner pivot");
        let mut lo = None;
        let mut hi = None;
        for t in 1..=ctx.graph.horizon() {
            let picked = if t == pivot {
                !reach[map.neg_id(v, t).expect("pivot literal") as usize]
            } else {
                reach[map.pos_id(v, t).expect("occurrence literal") as usize]
            };
            if picked {
                lo.get_or_insert(t);
                hi = Some(t);
            }
        }
        let interval = match (lo, hi) {
            (Some(lo), Some(hi)) => Interval::new(lo, hi).expect("ordered"),
            // unreachable in practice: the pivot literal is only reachable
            // through the gadget's own positive literals, so an owner with
            // no reachable positive keeps its pivot and never ends up empty
            _ => Interval::singleton(2),
        };
        assignment.set(v, interval);
    }
    let cover = TemporalCover::new(ctx.graph, assignment)?;
    debug_assert!(cover.span() <= ctx.budget);
    debug_assert!(agrees_with(ctx, cover.assignment(), fa));
    Ok(cover)
}

/// The deletion set the gadget analysis prescribes for a cover agreeing
/// with `fa`: in each owner's gadget, one gate arc per span unit of that
/// owner, placed between the part's endpoints and skipping the pivot slot.
pub fn canonical_deletions(
    ctx: &CompressionContext,
    map: &GadgetMap,
    cover: &TemporalAssignment,
) -> Vec<ArcId> {
    let mut deleted = Vec::new();
    let horizon = ctx.graph.horizon();
    for v in map.owners() {
        let pivot = map.pivot(v).expect("owner pivot");
        let Some(part) = cover.get(v) else { continue };
        // boundary occurrences cover nothing and drop out first
        let lo = part.lo().max(2);
        let hi = part.hi().min(horizon - 1);
        if lo >= hi {
            continue;
        }
        let slots: Vec<Timestamp> = if hi < pivot {
            (lo..hi).collect()
        } else if lo > pivot {
            ((lo + 1)..=hi).collect()
        } else {
            (lo..pivot).chain((pivot + 1)..=hi).collect()
        };
        for t in slots {
            deleted.push(map.gate_arc(v, t).expect("non-pivot slot has a gate arc"));
        }
    }
    deleted.sort_unstable();
    deleted
}

/// Decides one compression step: enumerate the feasible assignments, reduce
/// each to a pair-cut instance, and reconstruct a cover from the first
/// solvable one. Guesses are tried in enumeration order; under a parallel
/// runtime the earliest solvable guess still wins, so results do not depend
/// on the thread count.
pub fn solve_restricted(ctx: &CompressionContext) -> Option<TemporalCover> {
    let guesses = enumerate_feasible_assignments(ctx);
    guesses.par_iter().find_map_first(|fa| {
        let (inst, map) = build_cdpc_instance(ctx, fa);
        let cut = paircut::solve_cdpc(&inst)?;
        let cover = reconstruct_cover(ctx, fa, &inst, &map, &cut)
            .expect("solver output is a valid pair cut");
        Some(cover)
    })
}

/// Decides whether `graph` has a temporal cover of span at most `budget`
/// and returns one if so. Pads the time domain internally; vertices are
/// inserted in input order, starting from a singleton cover of the first
/// vertex, and each insertion is repaired by [`solve_restricted`].
pub fn solve_min_timeline_cover(graph: &TemporalGraph, budget: u64) -> Option<TemporalCover> {
    let n = graph.base_count();
    if n == 0 {
        let cover = TemporalCover::new(graph, TemporalAssignment::new()).expect("empty cover");
        return Some(cover);
    }
    let (padded, offset) = graph.pad_dummy_timestamps();
    let mut current = TemporalAssignment::new();
    current.set(BaseVertex(0), Interval::singleton(1));
    for i in 1..n {
        let keep: Vec<BaseVertex> = (0..=i as u32).map(BaseVertex).collect();
        let stage = padded
            .induced_subgraph(&keep)
            .expect("prefix vertices exist");
        let ctx = derive_context(&stage, BaseVertex(i as u32), &current, budget)
            .expect("previous stage produced a valid prior cover");
        current = solve_restricted(&ctx)?.into_assignment();
    }
    let back = current.translated_back(offset, graph.horizon());
    let cover = TemporalCover::new(graph, back).expect("translated cover stays valid");
    debug_assert!(cover.span() <= budget);
    Some(cover)
}
