//! Shared helpers for the integration suites: deterministic instance pools,
//! a pipeline replica that exposes each compression context, and an
//! independent restatement of the feasibility conditions.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use timeline_cover::compression::{
    build_cdpc_instance, derive_context, enumerate_feasible_assignments, solve_restricted,
    CompressionContext, FeasibleAssignment, GadgetRole,
};
use timeline_cover::io::generate_instance;
use timeline_cover::paircut::CdpcInstance;
use timeline_cover::temporal::{
    BaseVertex, Interval, TemporalAssignment, TemporalCover, TemporalGraph, Timestamp,
};

pub const POOL_PROBABILITIES: [f64; 3] = [0.15, 0.3, 0.5];

/// The random pool used by the end-to-end criteria: 300 instances covering
/// every (n, T, p) combination with n, T <= 5.
pub fn end_to_end_pool() -> Vec<TemporalGraph> {
    (0..300)
        .map(|i| {
            let p = POOL_PROBABILITIES[i % 3];
            let n = 1 + (i / 3) % 5;
            let horizon = 1 + ((i / 15) % 5) as Timestamp;
            generate_instance(n, horizon, p, 1000 + i as u64).expect("valid pool instance")
        })
        .collect()
}

/// Mirrors the iterative-compression outer loop through the public API,
/// handing every derived context to `on_context`.
pub fn replicate_pipeline(
    graph: &TemporalGraph,
    budget: u64,
    mut on_context: impl FnMut(&CompressionContext),
) -> Option<TemporalCover> {
    let n = graph.base_count();
    if n == 0 {
        return Some(TemporalCover::new(graph, TemporalAssignment::new()).expect("empty cover"));
    }
    let (padded, offset) = graph.pad_dummy_timestamps();
    let mut current = TemporalAssignment::new();
    current.set(BaseVertex(0), Interval::singleton(1));
    for i in 1..n {
        let keep: Vec<BaseVertex> = (0..=i as u32).map(BaseVertex).collect();
        let stage = padded.induced_subgraph(&keep).expect("prefix vertices");
        let ctx = derive_context(&stage, BaseVertex(i as u32), &current, budget)
            .expect("stage prior is valid");
        on_context(&ctx);
        current = solve_restricted(&ctx)?.into_assignment();
    }
    let back = current.translated_back(offset, graph.horizon());
    Some(TemporalCover::new(graph, back).expect("translated cover is valid"))
}

/// Restates the feasibility conditions directly from the raw inputs
/// (graph, new vertex, prior cover, budget), independently of the
/// implementation's derived sets.
pub fn feasible_by_definition(
    graph: &TemporalGraph,
    new_vertex: BaseVertex,
    prior: &TemporalAssignment,
    budget: u64,
    x: &TemporalAssignment,
) -> bool {
    let flexible: Vec<BaseVertex> = graph
        .vertices()
        .filter(|&v| v == new_vertex || prior.span_of(v) > 0)
        .collect();
    let is_flexible = |v: BaseVertex| flexible.contains(&v);
    let previously_active = |t: Timestamp| {
        flexible
            .iter()
            .any(|&v| v != new_vertex && prior.contains(v, t))
    };

    if x.iter().any(|(v, iv)| !is_flexible(v) || iv.hi() > graph.horizon()) {
        return false;
    }
    if x.total_span() > budget {
        return false;
    }
    let Some(w_part) = x.get(new_vertex) else {
        return false;
    };
    for e in graph.edges() {
        if is_flexible(e.u) && is_flexible(e.v) && !x.contains(e.u, e.t) && !x.contains(e.v, e.t)
        {
            return false;
        }
    }
    for &v in &flexible {
        if v == new_vertex {
            continue;
        }
        let Some(iv) = x.get(v) else { continue };
        let touches = iv.timestamps().any(previously_active);
        let covers = iv
            .timestamps()
            .any(|t| graph.has_edge(v, new_vertex, t) && !w_part.contains(t));
        if !touches && !covers {
            return false;
        }
    }
    true
}

/// All assignments over the flexible vertices: each vertex absent or on any
/// interval within the horizon.
pub fn all_assignments_over(
    graph: &TemporalGraph,
    flexible: &[BaseVertex],
) -> Vec<TemporalAssignment> {
    let horizon = graph.horizon();
    let mut per_vertex: Vec<Vec<Option<Interval>>> = Vec::new();
    for _ in flexible {
        let mut options = vec![None];
        for lo in 1..=horizon {
            for hi in lo..=horizon {
                options.push(Some(Interval::new(lo, hi).expect("ordered")));
            }
        }
        per_vertex.push(options);
    }
    let mut out = Vec::new();
    let mut stack: Vec<usize> = vec![0; flexible.len()];
    loop {
        let mut assignment = TemporalAssignment::new();
        for (i, &v) in flexible.iter().enumerate() {
            if let Some(iv) = per_vertex[i][stack[i]] {
                assignment.set(v, iv);
            }
        }
        out.push(assignment);
        // odometer
        let mut i = 0;
        loop {
            if i == flexible.len() {
                return out;
            }
            stack[i] += 1;
            if stack[i] < per_vertex[i].len() {
                break;
            }
            stack[i] = 0;
            i += 1;
        }
    }
}

/// Checks the context invariants: the active-time window is at most twice
/// the budget, anchors sit strictly inside the time domain (hence span 0),
/// and every edge the prior's flexible parts leave uncovered is covered by
/// an anchor occurrence.
pub fn check_context_invariants(ctx: &CompressionContext) -> Vec<String> {
    let mut violations = Vec::new();
    let k = ctx.budget();
    if ctx.active_times().len() as u64 > 2 * k {
        violations.push(format!(
            "active window {} exceeds 2k = {}",
            ctx.active_times().len(),
            2 * k
        ));
    }
    let horizon = ctx.graph().horizon();
    for &v in ctx.anchored() {
        let t = ctx.anchor_time(v).expect("anchored vertices have anchors");
        if t < 2 || t >= horizon {
            violations.push(format!("anchor {t} of {v} leaves [2, T-1]"));
        }
    }
    let w = ctx.new_vertex();
    for e in ctx.graph().edges() {
        if e.touches(w) {
            continue;
        }
        let by_flexible = [e.u, e.v]
            .iter()
            .any(|&x| ctx.is_flexible(x) && ctx.prior().contains(x, e.t));
        if by_flexible {
            continue;
        }
        let by_anchor =
            ctx.anchor_time(e.u) == Some(e.t) || ctx.anchor_time(e.v) == Some(e.t);
        if !by_anchor {
            violations.push(format!("residual edge {e:?} not covered by an anchor"));
        }
    }
    violations
}

/// Checks the gadget-structure contract of one built instance: 4T - 3
/// vertices and exactly one negative literal per gadget, deletable arcs
/// exactly the gate arcs, and the remaining-span budget.
pub fn check_gadget_structure(
    ctx: &CompressionContext,
    fa: &FeasibleAssignment,
    inst: &CdpcInstance,
    map: &timeline_cover::compression::GadgetMap,
) -> Vec<String> {
    let mut violations = Vec::new();
    let horizon = ctx.graph().horizon();
    let expected_size = 4 * horizon as usize - 3;
    let mut sizes: BTreeMap<BaseVertex, usize> = BTreeMap::new();
    let mut negatives: BTreeMap<BaseVertex, usize> = BTreeMap::new();
    for id in 0..map.vertex_count() as u32 {
        let role = map.role(id);
        if let Some(owner) = map.role_owner(role) {
            *sizes.entry(owner).or_default() += 1;
            if matches!(role, GadgetRole::Neg(_, _)) {
                *negatives.entry(owner).or_default() += 1;
            }
        }
    }
    let owners: Vec<BaseVertex> = map.owners().collect();
    for &owner in &owners {
        if sizes.get(&owner) != Some(&expected_size) {
            violations.push(format!(
                "gadget of {owner} has {:?} vertices, expected {expected_size}",
                sizes.get(&owner)
            ));
        }
        if negatives.get(&owner) != Some(&1) {
            violations.push(format!(
                "gadget of {owner} has {:?} negative literals",
                negatives.get(&owner)
            ));
        }
    }
    let mut gate_arcs = 0usize;
    for (id, &(from, to)) in inst.graph.arcs().iter().enumerate() {
        if !inst.deletable[id] {
            continue;
        }
        gate_arcs += 1;
        match (map.role(from), map.role(to)) {
            (GadgetRole::Toward(a, s), GadgetRole::Gate(b, t)) if a == b && s == t => {}
            other => violations.push(format!("deletable arc {id} is not a gate arc: {other:?}")),
        }
    }
    let expected_gates = owners.len() * (horizon as usize - 1);
    if gate_arcs != expected_gates {
        violations.push(format!(
            "{gate_arcs} deletable arcs, expected {expected_gates}"
        ));
    }
    if inst.budget != ctx.budget() - fa.span() {
        violations.push(format!(
            "budget {} differs from k - sp(X) = {}",
            inst.budget,
            ctx.budget() - fa.span()
        ));
    }
    violations
}

/// Outcome of replaying the pipeline over the end-to-end pool for every
/// budget in 0..=4, shared by several acceptance criteria.
pub struct PipelineReport {
    pub runs: usize,
    pub contexts: usize,
    pub instances: usize,
    pub sat: Vec<bool>,
    pub context_violations: Vec<String>,
    pub gadget_violations: Vec<String>,
}

pub fn pipeline_report() -> &'static PipelineReport {
    static REPORT: OnceLock<PipelineReport> = OnceLock::new();
    REPORT.get_or_init(|| {
        let pool = end_to_end_pool();
        let runs: Vec<(usize, u64)> = (0..pool.len())
            .flat_map(|i| (0..=4u64).map(move |k| (i, k)))
            .collect();
        let partials: Vec<_> = runs
            .par_iter()
            .map(|&(i, k)| {
                let mut contexts = 0usize;
                let mut instances = 0usize;
                let mut context_violations = Vec::new();
                let mut gadget_violations = Vec::new();
                let cover = replicate_pipeline(&pool[i], k, |ctx| {
                    contexts += 1;
                    context_violations.extend(check_context_invariants(ctx));
                    for fa in enumerate_feasible_assignments(ctx) {
                        let (inst, map) = build_cdpc_instance(ctx, &fa);
                        instances += 1;
                        gadget_violations.extend(check_gadget_structure(ctx, &fa, &inst, &map));
                    }
                });
                (
                    cover.is_some(),
                    contexts,
                    instances,
                    context_violations,
                    gadget_violations,
                )
            })
            .collect();
        let mut report = PipelineReport {
            runs: runs.len(),
            contexts: 0,
            instances: 0,
            sat: Vec::with_capacity(runs.len()),
            context_violations: Vec::new(),
            gadget_violations: Vec::new(),
        };
        for (sat, contexts, instances, ctx_violations, gadget_violations) in partials {
            report.sat.push(sat);
            report.contexts += contexts;
            report.instances += instances;
            report.context_violations.extend(ctx_violations);
            report.gadget_violations.extend(gadget_violations);
        }
        report
    })
}

/// Random constrained pair-cut instance with |V| <= 6, at most 12 arcs of
/// which at most 6 are deletable, 1..4 pairs, and budget <= 3.
pub fn random_cdpc(seed: u64) -> CdpcInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(2..=6usize);
    let mut arcs: Vec<(u32, u32, bool)> = Vec::new();
    let mut deletable_left = 6;
    for from in 0..n as u32 {
        for to in 0..n as u32 {
            if from == to || arcs.len() == 12 {
                continue;
            }
            if rng.random_bool((2.5 / n as f64).min(0.9)) {
                let deletable = deletable_left > 0 && rng.random_bool(0.5);
                if deletable {
                    deletable_left -= 1;
                }
                arcs.push((from, to, deletable));
            }
        }
    }
    let pair_count = rng.random_range(1..=4usize);
    let mut pairs = Vec::new();
    for _ in 0..pair_count {
        let a = rng.random_range(0..n as u32);
        let b = rng.random_range(0..n as u32);
        if a != b {
            pairs.push((a, b));
        }
    }
    if pairs.is_empty() {
        pairs.push((0, 1));
    }
    let budget = rng.random_range(0..=3u64);
    CdpcInstance::new(n, arcs, 0, pairs, budget).expect("generated instance is well-formed")
}
