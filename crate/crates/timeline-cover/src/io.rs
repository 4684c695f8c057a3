//! Text formats and instance generation.
//!
//! Temporal graphs are line-oriented: `#` starts a comment, the header
//! `p tgc <n> <T>` comes first, `v <name>` declares a vertex and
//! `e <u> <v> <t>` an edge (endpoints are auto-declared). When fewer than
//! `n` names appear, the remainder are filled with `v1`, `v2`, ... skipping
//! taken names, so edgeless instances stay writable. Covers are key-value
//! documents with one `span` line and one `interval <name> <lo> <hi>` line
//! per vertex. Pair-cut instances use a `vdpc`/`cdpc` header followed by
//! `s`/`a`/`d`/`p` lines.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::paircut::{CdpcInstance, PaircutError, VdpcInstance, VertexId};
use crate::temporal::{
    BaseVertex, Interval, ModelError, TemporalAssignment, TemporalGraph, Timestamp,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: missing or malformed header, expected '{expected}'")]
    BadHeader { line: usize, expected: &'static str },
    #[error("line {line}: unknown directive '{directive}'")]
    UnknownDirective { line: usize, directive: String },
    #[error("line {line}: expected {expected} fields, found {found}")]
    BadArity {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: cannot parse number '{token}'")]
    BadNumber { line: usize, token: String },
    #[error("line {line}: vertex '{name}' exceeds the declared count {declared}")]
    TooManyVertices {
        line: usize,
        name: String,
        declared: usize,
    },
    #[error("line {line}: {source}")]
    Model {
        line: usize,
        #[source]
        source: ModelError,
    },
    #[error("line {line}: {source}")]
    Paircut {
        line: usize,
        #[source]
        source: PaircutError,
    },
    #[error("line {line}: duplicate interval for vertex '{name}'")]
    DuplicateInterval { line: usize, name: String },
    #[error("line {line}: unknown vertex '{name}'")]
    UnknownName { line: usize, name: String },
    #[error("missing '{0}' line")]
    MissingLine(&'static str),
    #[error("declared span {claimed} does not match interval span {actual}")]
    SpanMismatch { claimed: u64, actual: u64 },
    #[error("line {line}: duplicate '{directive}' line")]
    DuplicateLine { line: usize, directive: &'static str },
    #[error("expected {expected} {what} lines, found {found}")]
    CountMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
}

/// Non-comment lines with their 1-based numbers, split into tokens.
fn tokenized_lines(text: &str) -> Vec<(usize, Vec<&str>)> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let body = raw.split('#').next().unwrap_or("");
            let tokens: Vec<&str> = body.split_whitespace().collect();
            if tokens.is_empty() {
                None
            } else {
                Some((i + 1, tokens))
            }
        })
        .collect()
}

fn parse_number<T: std::str::FromStr>(line: usize, token: &str) -> Result<T, ParseError> {
    token.parse().map_err(|_| ParseError::BadNumber {
        line,
        token: token.to_string(),
    })
}

fn expect_arity(line: usize, tokens: &[&str], expected: usize) -> Result<(), ParseError> {
    if tokens.len() == expected {
        Ok(())
    } else {
        Err(ParseError::BadArity {
            line,
            expected,
            found: tokens.len(),
        })
    }
}

/// Registers names in first-appearance order, bounded by a declared count.
struct NameTable {
    names: Vec<String>,
    index: HashMap<String, u32>,
    declared: usize,
}

impl NameTable {
    fn new(declared: usize) -> Self {
        Self {
            names: Vec::new(),
            index: HashMap::new(),
            declared,
        }
    }

    fn intern(&mut self, line: usize, name: &str) -> Result<u32, ParseError> {
        if let Some(&id) = self.index.get(name) {
            return Ok(id);
        }
        if self.names.len() == self.declared {
            return Err(ParseError::TooManyVertices {
                line,
                name: name.to_string(),
                declared: self.declared,
            });
        }
        let id = self.names.len() as u32;
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), id);
        Ok(id)
    }

    /// Pads with `v1`, `v2`, ... (skipping taken names) up to the declared
    /// count.
    fn fill(mut self) -> Vec<String> {
        let mut counter = 1usize;
        while self.names.len() < self.declared {
            let candidate = format!("v{counter}");
            counter += 1;
            if !self.index.contains_key(&candidate) {
                self.index
                    .insert(candidate.clone(), self.names.len() as u32);
                self.names.push(candidate);
            }
        }
        self.names
    }
}

/// Parses the `p tgc` instance format. Base vertices are registered in
/// first-appearance order.
pub fn parse_temporal_graph(text: &str) -> Result<TemporalGraph, ParseError> {
    let lines = tokenized_lines(text);
    let Some(&(header_line, ref header)) = lines.first() else {
        return Err(ParseError::BadHeader {
            line: 1,
            expected: "p tgc <n> <T>",
        });
    };
    if header.len() != 4 || header[0] != "p" || header[1] != "tgc" {
        return Err(ParseError::BadHeader {
            line: header_line,
            expected: "p tgc <n> <T>",
        });
    }
    let n: usize = parse_number(header_line, header[2])?;
    let horizon: Timestamp = parse_number(header_line, header[3])?;

    let mut table = NameTable::new(n);
    let mut edges: Vec<(usize, u32, u32, Timestamp)> = Vec::new();
    for &(line, ref tokens) in &lines[1..] {
        match tokens[0] {
            "v" => {
                expect_arity(line, tokens, 2)?;
                table.intern(line, tokens[1])?;
            }
            "e" => {
                expect_arity(line, tokens, 4)?;
                let u = table.intern(line, tokens[1])?;
                let v = table.intern(line, tokens[2])?;
                let t: Timestamp = parse_number(line, tokens[3])?;
                edges.push((line, u, v, t));
            }
            other => {
                return Err(ParseError::UnknownDirective {
                    line,
                    directive: other.to_string(),
                })
            }
        }
    }
    let mut graph = TemporalGraph::new(table.fill(), horizon).map_err(|source| {
        ParseError::Model {
            line: header_line,
            source,
        }
    })?;
    for (line, u, v, t) in edges {
        graph
            .add_edge(BaseVertex(u), BaseVertex(v), t)
            .map_err(|source| ParseError::Model { line, source })?;
    }
    Ok(graph)
}

/// Serializes a graph in the `p tgc` format; explicit `v` lines keep
/// isolated vertices round-trippable.
pub fn serialize_temporal_graph(graph: &TemporalGraph) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "p tgc {} {}\n",
        graph.base_count(),
        graph.horizon()
    ));
    for v in graph.vertices() {
        out.push_str(&format!("v {}\n", graph.name(v)));
    }
    for e in graph.edges() {
        out.push_str(&format!(
            "e {} {} {}\n",
            graph.name(e.u),
            graph.name(e.v),
            e.t
        ));
    }
    out
}

/// Serializes an assignment as a cover document: a `span` line followed by
/// per-vertex `interval` lines in base-vertex order.
pub fn serialize_cover(graph: &TemporalGraph, assignment: &TemporalAssignment) -> String {
    let mut out = String::new();
    out.push_str(&format!("span {}\n", assignment.total_span()));
    for (v, iv) in assignment.iter() {
        out.push_str(&format!(
            "interval {} {} {}\n",
            graph.name(v),
            iv.lo(),
            iv.hi()
        ));
    }
    out
}

/// Parses a cover document against a graph's vertex names. The declared
/// span must match the parsed intervals; cover conditions are the caller's
/// check.
pub fn parse_cover(graph: &TemporalGraph, text: &str) -> Result<TemporalAssignment, ParseError> {
    let mut assignment = TemporalAssignment::new();
    let mut claimed: Option<u64> = None;
    for (line, tokens) in tokenized_lines(text) {
        match tokens[0] {
            "span" => {
                expect_arity(line, &tokens, 2)?;
                if claimed.is_some() {
                    return Err(ParseError::DuplicateLine {
                        line,
                        directive: "span",
                    });
                }
                claimed = Some(parse_number(line, tokens[1])?);
            }
            "interval" => {
                expect_arity(line, &tokens, 4)?;
                let name = tokens[1];
                let v = graph.vertex(name).ok_or_else(|| ParseError::UnknownName {
                    line,
                    name: name.to_string(),
                })?;
                if assignment.get(v).is_some() {
                    return Err(ParseError::DuplicateInterval {
                        line,
                        name: name.to_string(),
                    });
                }
                let lo: Timestamp = parse_number(line, tokens[2])?;
                let hi: Timestamp = parse_number(line, tokens[3])?;
                let iv =
                    Interval::new(lo, hi).map_err(|source| ParseError::Model { line, source })?;
                assignment.set(v, iv);
            }
            other => {
                return Err(ParseError::UnknownDirective {
                    line,
                    directive: other.to_string(),
                })
            }
        }
    }
    let claimed = claimed.ok_or(ParseError::MissingLine("span"))?;
    let actual = assignment.total_span();
    if claimed != actual {
        return Err(ParseError::SpanMismatch { claimed, actual });
    }
    Ok(assignment)
}

/// A parsed pair-cut instance with its vertex names.
#[derive(Debug, Clone)]
pub struct PaircutFile {
    pub problem: PaircutProblem,
    pub names: Vec<String>,
}

#[derive(Debug, Clone)]
pub enum PaircutProblem {
    /// Vertex-deletion instance (`vdpc` header).
    Vertex(VdpcInstance),
    /// Constrained arc-deletion instance (`cdpc` header; `d` lines mark
    /// deletable arcs, `a` lines undeletable ones).
    Arc(CdpcInstance),
}

/// Parses the `vdpc`/`cdpc` instance format: header
/// `<kind> <nVertices> <nArcs> <nPairs> <k>`, one `s <v>` source line, arc
/// lines `a <u> <v>` (plus `d <u> <v>` deletable arcs for `cdpc`), and pair
/// lines `p <u> <v>`.
pub fn parse_paircut(text: &str) -> Result<PaircutFile, ParseError> {
    let lines = tokenized_lines(text);
    let Some(&(header_line, ref header)) = lines.first() else {
        return Err(ParseError::BadHeader {
            line: 1,
            expected: "vdpc|cdpc <nVertices> <nArcs> <nPairs> <k>",
        });
    };
    let arc_deletion = match header.first().copied() {
        Some("vdpc") => false,
        Some("cdpc") => true,
        _ => {
            return Err(ParseError::BadHeader {
                line: header_line,
                expected: "vdpc|cdpc <nVertices> <nArcs> <nPairs> <k>",
            })
        }
    };
    expect_arity(header_line, header, 5)?;
    let n: usize = parse_number(header_line, header[1])?;
    let arc_count: usize = parse_number(header_line, header[2])?;
    let pair_count: usize = parse_number(header_line, header[3])?;
    let budget: u64 = parse_number(header_line, header[4])?;

    let mut table = NameTable::new(n);
    let mut source: Option<(usize, u32)> = None;
    let mut arcs: Vec<(VertexId, VertexId, bool)> = Vec::new();
    let mut pairs: Vec<(VertexId, VertexId)> = Vec::new();
    for &(line, ref tokens) in &lines[1..] {
        match tokens[0] {
            "s" => {
                expect_arity(line, tokens, 2)?;
                if source.is_some() {
                    return Err(ParseError::DuplicateLine {
                        line,
                        directive: "s",
                    });
                }
                source = Some((line, table.intern(line, tokens[1])?));
            }
            "a" | "d" => {
                if tokens[0] == "d" && !arc_deletion {
                    return Err(ParseError::UnknownDirective {
                        line,
                        directive: "d".to_string(),
                    });
                }
                expect_arity(line, tokens, 3)?;
                let u = table.intern(line, tokens[1])?;
                let v = table.intern(line, tokens[2])?;
                arcs.push((u, v, tokens[0] == "d"));
            }
            "p" => {
                expect_arity(line, tokens, 3)?;
                let u = table.intern(line, tokens[1])?;
                let v = table.intern(line, tokens[2])?;
                pairs.push((u, v));
            }
            other => {
                return Err(ParseError::UnknownDirective {
                    line,
                    directive: other.to_string(),
                })
            }
        }
    }
    if arcs.len() != arc_count {
        return Err(ParseError::CountMismatch {
            what: "arc",
            expected: arc_count,
            found: arcs.len(),
        });
    }
    if pairs.len() != pair_count {
        return Err(ParseError::CountMismatch {
            what: "pair",
            expected: pair_count,
            found: pairs.len(),
        });
    }
    let (source_line, source) = source.ok_or(ParseError::MissingLine("s"))?;
    let names = table.fill();
    let problem = if arc_deletion {
        PaircutProblem::Arc(
            CdpcInstance::new(names.len(), arcs, source, pairs, budget).map_err(|source| {
                ParseError::Paircut {
                    line: source_line,
                    source,
                }
            })?,
        )
    } else {
        PaircutProblem::Vertex(
            VdpcInstance::new(
                names.len(),
                arcs.into_iter().map(|(u, v, _)| (u, v)).collect(),
                source,
                pairs,
                budget,
            )
            .map_err(|source| ParseError::Paircut {
                line: source_line,
                source,
            })?,
        )
    };
    Ok(PaircutFile { problem, names })
}

/// Random instance: each of the `n * (n - 1) / 2 * horizon` possible edges
/// is kept independently with probability `p`. Deterministic per seed.
/// Vertices are named `v1` through `vn`.
pub fn generate_instance(
    n: usize,
    horizon: Timestamp,
    p: f64,
    seed: u64,
) -> Result<TemporalGraph, ModelError> {
    assert!(
        (0.0..=1.0).contains(&p),
        "edge probability must be in [0, 1]"
    );
    let names: Vec<String> = (1..=n).map(|i| format!("v{i}")).collect();
    let mut graph = TemporalGraph::new(names, horizon)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for u in 0..n as u32 {
        for v in (u + 1)..n as u32 {
            for t in 1..=horizon {
                if rng.random_bool(p) {
                    graph.add_edge(BaseVertex(u), BaseVertex(v), t)?;
                }
            }
        }
    }
    Ok(graph)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::temporal::check_cover;

    pub const FIG1_TEXT: &str = "\
# four base vertices over six timestamps
p tgc 4 6
v v
v u
v z
v w
e v u 2
e v w 2
e u w 2
e z w 2
e v u 3
e v z 3
e u w 3
e z w 3
e v u 4
e u z 4
e v z 4
e u w 4
e v w 5
";

    #[test]
    fn parses_fig1() {
        let g = parse_temporal_graph(FIG1_TEXT).unwrap();
        let reference = fixtures::fig1_graph();
        assert_eq!(g.base_count(), 4);
        assert_eq!(g.horizon(), 6);
        assert_eq!(g.names(), reference.names());
        assert_eq!(g.edges(), reference.edges());
    }

    #[test]
    fn parses_isolated_vertices() {
        let g = parse_temporal_graph("p tgc 1 1\n").unwrap();
        assert_eq!(g.base_count(), 1);
        assert_eq!(g.name(BaseVertex(0)), "v1");
        assert!(g.edges().is_empty());

        // fill skips names that are taken
        let g = parse_temporal_graph("p tgc 2 1\nv v1\n").unwrap();
        assert_eq!(g.names(), &["v1".to_string(), "v2".to_string()]);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        assert!(matches!(
            parse_temporal_graph(""),
            Err(ParseError::BadHeader { line: 1, .. })
        ));
        assert!(matches!(
            parse_temporal_graph("p tgc 2 2\ne u u 2\n"),
            Err(ParseError::Model {
                line: 2,
                source: ModelError::SelfLoop(_)
            })
        ));
        assert!(matches!(
            parse_temporal_graph("p tgc 2 2\ne u v 3\n"),
            Err(ParseError::Model {
                line: 2,
                source: ModelError::TimestampOutOfRange { .. }
            })
        ));
        assert!(matches!(
            parse_temporal_graph("p tgc 2 2\ne u v 1\n\ne u v 1\n"),
            Err(ParseError::Model {
                line: 4,
                source: ModelError::DuplicateEdge { .. }
            })
        ));
        assert!(matches!(
            parse_temporal_graph("p tgc 1 2\ne u v 1\n"),
            Err(ParseError::TooManyVertices { line: 2, .. })
        ));
        assert!(matches!(
            parse_temporal_graph("p tgc 1 2\nq u\n"),
            Err(ParseError::UnknownDirective { line: 2, .. })
        ));
    }

    #[test]
    fn graph_round_trip() {
        let g = fixtures::fig1_graph();
        let text = serialize_temporal_graph(&g);
        let back = parse_temporal_graph(&text).unwrap();
        assert_eq!(back.names(), g.names());
        assert_eq!(back.edges(), g.edges());
    }

    #[test]
    fn cover_round_trip_and_span_field() {
        let g = fixtures::fig1_graph();
        let x = fixtures::fig1_cover();
        let text = serialize_cover(&g, &x);
        assert!(text.starts_with("span 3\n"));
        let back = parse_cover(&g, &text).unwrap();
        assert_eq!(back, x);
        assert!(check_cover(&g, &back).unwrap().is_cover());
    }

    #[test]
    fn cover_parse_errors() {
        let g = fixtures::fig1_graph();
        assert_eq!(
            parse_cover(&g, "interval v 5 5\n"),
            Err(ParseError::MissingLine("span"))
        );
        assert_eq!(
            parse_cover(&g, "span 1\ninterval v 5 5\n"),
            Err(ParseError::SpanMismatch {
                claimed: 1,
                actual: 0
            })
        );
        assert!(matches!(
            parse_cover(&g, "span 0\ninterval q 1 1\n"),
            Err(ParseError::UnknownName { line: 2, .. })
        ));
        assert!(matches!(
            parse_cover(&g, "span 0\ninterval v 1 1\ninterval v 2 2\n"),
            Err(ParseError::DuplicateInterval { line: 3, .. })
        ));
    }

    #[test]
    fn paircut_parsing_both_kinds() {
        let vdpc = "\
vdpc 4 3 2 1
s s
a s x1
a s x2
a s x3
p x1 x2
p x2 x3
";
        let file = parse_paircut(vdpc).unwrap();
        assert_eq!(file.names, ["s", "x1", "x2", "x3"]);
        match file.problem {
            PaircutProblem::Vertex(inst) => {
                assert_eq!(inst.budget, 1);
                assert_eq!(inst.pairs.len(), 2);
                assert_eq!(crate::paircut::solve_vdpc(&inst), Some(vec![2]));
            }
            PaircutProblem::Arc(_) => panic!("expected a vertex-deletion instance"),
        }

        let cdpc = "\
cdpc 3 2 1 1
s s
d s a
a s b
p a b
";
        let file = parse_paircut(cdpc).unwrap();
        match file.problem {
            PaircutProblem::Arc(inst) => {
                let cut = crate::paircut::solve_cdpc(&inst).unwrap();
                assert_eq!(cut.len(), 1);
                assert!(inst.deletable[cut[0]]);
            }
            PaircutProblem::Vertex(_) => panic!("expected an arc-deletion instance"),
        }
    }

    #[test]
    fn paircut_parse_errors() {
        // d lines are only valid under a cdpc header
        assert!(matches!(
            parse_paircut("vdpc 2 1 0 1\ns s\nd s a\n"),
            Err(ParseError::UnknownDirective { line: 3, .. })
        ));
        assert!(matches!(
            parse_paircut("vdpc 2 2 0 1\ns s\na s a\n"),
            Err(ParseError::CountMismatch {
                what: "arc",
                expected: 2,
                found: 1
            })
        ));
        assert!(matches!(
            parse_paircut("vdpc 2 1 0 1\na s a\n"),
            Err(ParseError::MissingLine("s"))
        ));
    }

    #[test]
    fn generator_is_deterministic_and_respects_p() {
        let empty = generate_instance(5, 3, 0.0, 7).unwrap();
        assert!(empty.edges().is_empty());
        assert_eq!(empty.base_count(), 5);

        let full = generate_instance(2, 2, 1.0, 7).unwrap();
        assert_eq!(full.edges().len(), 2);

        let a = generate_instance(6, 4, 0.37, 123).unwrap();
        let b = generate_instance(6, 4, 0.37, 123).unwrap();
        assert_eq!(a.edges(), b.edges());
        let c = generate_instance(6, 4, 0.37, 124).unwrap();
        assert_ne!(a.edges(), c.edges());
    }
}
