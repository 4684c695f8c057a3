//! Temporal-graph data model: base vertices with timestamped edges,
//! contiguous activity assignments, covers, and span accounting.
//!
//! Base vertices are identified by strings on input and mapped to dense
//! integer ids internally; timestamps are 1-based. An assignment stores one
//! interval of active timestamps per base vertex, so contiguity cannot be
//! violated by construction. All types are immutable once built and the
//! operations here are pure functions.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use thiserror::Error;

/// 1-based timestamp.
pub type Timestamp = u32;

/// Dense index of a base vertex within its graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BaseVertex(pub u32);

impl BaseVertex {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for BaseVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// An undirected edge between two distinct base vertices at one timestamp.
/// Stored with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TemporalEdge {
    pub u: BaseVertex,
    pub v: BaseVertex,
    pub t: Timestamp,
}

impl TemporalEdge {
    /// The endpoint other than `x`, if `x` is an endpoint.
    pub fn other(&self, x: BaseVertex) -> Option<BaseVertex> {
        if x == self.u {
            Some(self.v)
        } else if x == self.v {
            Some(self.u)
        } else {
            None
        }
    }

    pub fn touches(&self, x: BaseVertex) -> bool {
        self.u == x || self.v == x
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("duplicate base vertex name '{0}'")]
    DuplicateName(String),
    #[error("horizon must be at least 1")]
    ZeroHorizon,
    #[error("unknown base vertex {0}")]
    UnknownVertex(BaseVertex),
    #[error("self-loop edge on base vertex '{0}'")]
    SelfLoop(String),
    #[error("timestamp {t} outside [1, {horizon}]")]
    TimestampOutOfRange { t: Timestamp, horizon: Timestamp },
    #[error("duplicate temporal edge ({u}, {v}, {t})")]
    DuplicateEdge { u: String, v: String, t: Timestamp },
    #[error("interval [{lo}, {hi}] has lo > hi or lo = 0")]
    BadInterval { lo: Timestamp, hi: Timestamp },
}

/// A temporal graph: a fixed set of named base vertices, a time horizon `T`,
/// and a duplicate-free set of timestamped edges within `[1, T]`.
#[derive(Debug, Clone)]
pub struct TemporalGraph {
    names: Vec<String>,
    index: HashMap<String, BaseVertex>,
    horizon: Timestamp,
    edges: Vec<TemporalEdge>,
    edge_set: HashSet<TemporalEdge>,
}

impl TemporalGraph {
    /// Creates an edgeless graph over the given base vertex names.
    pub fn new<I, S>(names: I, horizon: Timestamp) -> Result<Self, ModelError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        if horizon == 0 {
            return Err(ModelError::ZeroHorizon);
        }
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), BaseVertex(i as u32)).is_some() {
                return Err(ModelError::DuplicateName(name.clone()));
            }
        }
        Ok(Self {
            names,
            index,
            horizon,
            edges: Vec::new(),
            edge_set: HashSet::new(),
        })
    }

    /// Adds an edge, normalizing endpoint order. Rejects self-loops,
    /// out-of-range timestamps and duplicates.
    pub fn add_edge(
        &mut self,
        u: BaseVertex,
        v: BaseVertex,
        t: Timestamp,
    ) -> Result<(), ModelError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(ModelError::SelfLoop(self.names[u.index()].clone()));
        }
        if t < 1 || t > self.horizon {
            return Err(ModelError::TimestampOutOfRange {
                t,
                horizon: self.horizon,
            });
        }
        let edge = TemporalEdge {
            u: u.min(v),
            v: u.max(v),
            t,
        };
        if !self.edge_set.insert(edge) {
            return Err(ModelError::DuplicateEdge {
                u: self.names[edge.u.index()].clone(),
                v: self.names[edge.v.index()].clone(),
                t,
            });
        }
        let pos = self.edges.partition_point(|e| e < &edge);
        self.edges.insert(pos, edge);
        Ok(())
    }

    fn check_vertex(&self, v: BaseVertex) -> Result<(), ModelError> {
        if v.index() < self.names.len() {
            Ok(())
        } else {
            Err(ModelError::UnknownVertex(v))
        }
    }

    pub fn base_count(&self) -> usize {
        self.names.len()
    }

    pub fn horizon(&self) -> Timestamp {
        self.horizon
    }

    pub fn name(&self, v: BaseVertex) -> &str {
        &self.names[v.index()]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn vertex(&self, name: &str) -> Option<BaseVertex> {
        self.index.get(name).copied()
    }

    pub fn vertices(&self) -> impl Iterator<Item = BaseVertex> + '_ {
        (0..self.names.len() as u32).map(BaseVertex)
    }

    /// Edges in ascending `(u, v, t)` order.
    pub fn edges(&self) -> &[TemporalEdge] {
        &self.edges
    }

    pub fn has_edge(&self, u: BaseVertex, v: BaseVertex, t: Timestamp) -> bool {
        self.edge_set.contains(&TemporalEdge {
            u: u.min(v),
            v: u.max(v),
            t,
        })
    }

    pub fn degree(&self, v: BaseVertex) -> usize {
        self.edges.iter().filter(|e| e.touches(v)).count()
    }

    /// True when timestamps 1 and T carry no edge.
    pub fn boundary_edgeless(&self) -> bool {
        self.edges.iter().all(|e| e.t != 1 && e.t != self.horizon)
    }

    /// Restriction to the base vertices in `keep`: same horizon, exactly the
    /// edges with both endpoints kept. Kept vertices are re-indexed in
    /// ascending id order, so restricting to a prefix preserves ids.
    pub fn induced_subgraph(&self, keep: &[BaseVertex]) -> Result<TemporalGraph, ModelError> {
        let mut sorted: Vec<BaseVertex> = keep.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        for &v in &sorted {
            self.check_vertex(v)?;
        }
        let mut remap: HashMap<BaseVertex, BaseVertex> = HashMap::new();
        for (i, &v) in sorted.iter().enumerate() {
            remap.insert(v, BaseVertex(i as u32));
        }
        let mut sub = TemporalGraph::new(
            sorted.iter().map(|&v| self.names[v.index()].clone()),
            self.horizon,
        )?;
        for e in &self.edges {
            if let (Some(&u), Some(&v)) = (remap.get(&e.u), remap.get(&e.v)) {
                sub.add_edge(u, v, e.t)?;
            }
        }
        Ok(sub)
    }

    /// Adds an edgeless timestamp before 1 and after T: the result has
    /// horizon T + 2, every edge shifted by +1, and the returned offset (1)
    /// maps covers of the padded graph back to this one. Always pads, even
    /// when the boundary is already edgeless, so downstream code may assume
    /// edgeless first and last timestamps unconditionally.
    pub fn pad_dummy_timestamps(&self) -> (TemporalGraph, Timestamp) {
        let mut padded = TemporalGraph::new(self.names.clone(), self.horizon + 2)
            .expect("padded horizon is positive");
        for e in &self.edges {
            padded
                .add_edge(e.u, e.v, e.t + 1)
                .expect("shifted edge stays valid");
        }
        (padded, 1)
    }
}

/// A contiguous activity interval `[lo, hi]` with `1 <= lo <= hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Interval {
    lo: Timestamp,
    hi: Timestamp,
}

impl Interval {
    pub fn new(lo: Timestamp, hi: Timestamp) -> Result<Self, ModelError> {
        if lo == 0 || lo > hi {
            return Err(ModelError::BadInterval { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    pub fn singleton(t: Timestamp) -> Self {
        Self::new(t, t).expect("singleton interval")
    }

    pub fn lo(&self) -> Timestamp {
        self.lo
    }

    pub fn hi(&self) -> Timestamp {
        self.hi
    }

    /// Interval length minus one.
    pub fn span(&self) -> u64 {
        (self.hi - self.lo) as u64
    }

    pub fn contains(&self, t: Timestamp) -> bool {
        self.lo <= t && t <= self.hi
    }

    pub fn timestamps(&self) -> impl Iterator<Item = Timestamp> {
        self.lo..=self.hi
    }

    pub fn intersects(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// A partial map from base vertex to activity interval. A vertex absent from
/// the map has no active timestamps (span 0 by convention).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TemporalAssignment {
    intervals: BTreeMap<BaseVertex, Interval>,
}

impl TemporalAssignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, v: BaseVertex, interval: Interval) {
        self.intervals.insert(v, interval);
    }

    pub fn get(&self, v: BaseVertex) -> Option<Interval> {
        self.intervals.get(&v).copied()
    }

    pub fn contains(&self, v: BaseVertex, t: Timestamp) -> bool {
        self.get(v).is_some_and(|iv| iv.contains(t))
    }

    pub fn remove(&mut self, v: BaseVertex) -> Option<Interval> {
        self.intervals.remove(&v)
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Entries in ascending base-vertex order.
    pub fn iter(&self) -> impl Iterator<Item = (BaseVertex, Interval)> + '_ {
        self.intervals.iter().map(|(&v, &iv)| (v, iv))
    }

    /// Span of `v`: interval length minus one, or 0 when absent.
    pub fn span_of(&self, v: BaseVertex) -> u64 {
        self.get(v).map_or(0, |iv| iv.span())
    }

    /// Sum of spans over all entries.
    pub fn total_span(&self) -> u64 {
        self.intervals.values().map(Interval::span).sum()
    }

    /// Shifts every interval forward by `offset`.
    pub fn shifted(&self, offset: Timestamp) -> TemporalAssignment {
        let intervals = self
            .intervals
            .iter()
            .map(|(&v, &iv)| {
                let shifted = Interval::new(iv.lo + offset, iv.hi + offset)
                    .expect("forward shift keeps intervals valid");
                (v, shifted)
            })
            .collect();
        TemporalAssignment { intervals }
    }

    /// Maps an assignment on a padded graph back to the original time domain:
    /// endpoints move down by `offset` and are clamped to `[1, horizon]`. An
    /// interval lying entirely in the dummy range becomes the singleton
    /// `[1, 1]`, which is sound because dummy timestamps carry no edges.
    /// For assignments produced by `shifted(offset)` this is an exact inverse.
    pub fn translated_back(&self, offset: Timestamp, horizon: Timestamp) -> TemporalAssignment {
        let intervals = self
            .intervals
            .iter()
            .map(|(&v, &iv)| {
                let lo = iv.lo.saturating_sub(offset).clamp(1, horizon);
                let hi = iv.hi.saturating_sub(offset).clamp(1, horizon);
                let mapped = if iv.hi <= offset || iv.lo > horizon + offset {
                    Interval::singleton(1)
                } else {
                    Interval::new(lo, hi).expect("clamped interval is ordered")
                };
                (v, mapped)
            })
            .collect();
        TemporalAssignment { intervals }
    }
}

impl FromIterator<(BaseVertex, Interval)> for TemporalAssignment {
    fn from_iter<I: IntoIterator<Item = (BaseVertex, Interval)>>(iter: I) -> Self {
        TemporalAssignment {
            intervals: iter.into_iter().collect(),
        }
    }
}

/// Outcome of checking the two temporal-cover conditions, with the first
/// violation as a witness.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoverCheck {
    Covers,
    /// Condition 1 fails: this base vertex has no active timestamp.
    MissingVertex(BaseVertex),
    /// Condition 2 fails: neither endpoint is active at the edge's timestamp.
    UncoveredEdge(TemporalEdge),
}

impl CoverCheck {
    pub fn is_cover(&self) -> bool {
        matches!(self, CoverCheck::Covers)
    }

    pub fn describe(&self, graph: &TemporalGraph) -> String {
        match self {
            CoverCheck::Covers => "cover conditions hold".to_string(),
            CoverCheck::MissingVertex(v) => {
                format!("base vertex '{}' has no active timestamp", graph.name(*v))
            }
            CoverCheck::UncoveredEdge(e) => format!(
                "edge ({}, {}, {}) is uncovered",
                graph.name(e.u),
                graph.name(e.v),
                e.t
            ),
        }
    }
}

/// Checks whether `assignment` is a temporal cover of `graph`: every base
/// vertex active somewhere and every edge covered at its timestamp. Rejects
/// assignments that mention unknown vertices or leave `[1, T]`.
pub fn check_cover(
    graph: &TemporalGraph,
    assignment: &TemporalAssignment,
) -> Result<CoverCheck, ModelError> {
    for (v, iv) in assignment.iter() {
        if v.index() >= graph.base_count() {
            return Err(ModelError::UnknownVertex(v));
        }
        if iv.hi() > graph.horizon() {
            return Err(ModelError::TimestampOutOfRange {
                t: iv.hi(),
                horizon: graph.horizon(),
            });
        }
    }
    for v in graph.vertices() {
        if assignment.get(v).is_none() {
            return Ok(CoverCheck::MissingVertex(v));
        }
    }
    for e in graph.edges() {
        if !assignment.contains(e.u, e.t) && !assignment.contains(e.v, e.t) {
            return Ok(CoverCheck::UncoveredEdge(*e));
        }
    }
    Ok(CoverCheck::Covers)
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CoverError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("assignment is not a temporal cover: {0:?}")]
    NotACover(CoverCheck),
}

/// An assignment validated to be a temporal cover of some graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemporalCover {
    assignment: TemporalAssignment,
}

impl TemporalCover {
    pub fn new(
        graph: &TemporalGraph,
        assignment: TemporalAssignment,
    ) -> Result<Self, CoverError> {
        match check_cover(graph, &assignment)? {
            CoverCheck::Covers => Ok(Self { assignment }),
            violation => Err(CoverError::NotACover(violation)),
        }
    }

    pub fn assignment(&self) -> &TemporalAssignment {
        &self.assignment
    }

    pub fn into_assignment(self) -> TemporalAssignment {
        self.assignment
    }

    pub fn span(&self) -> u64 {
        self.assignment.total_span()
    }
}
