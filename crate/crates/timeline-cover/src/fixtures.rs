//! Small hand-checked instances shared by unit and integration tests.

use crate::temporal::{Interval, TemporalAssignment, TemporalGraph};

/// Four base vertices v, u, z, w over six timestamps; timestamps 1 and 6 are
/// edgeless. Its minimum cover span is 3.
pub fn fig1_graph() -> TemporalGraph {
    let mut g = TemporalGraph::new(["v", "u", "z", "w"], 6).expect("valid fixture");
    let edges = [
        ("v", "u", 2),
        ("v", "w", 2),
        ("u", "w", 2),
        ("z", "w", 2),
        ("v", "u", 3),
        ("v", "z", 3),
        ("u", "w", 3),
        ("z", "w", 3),
        ("v", "u", 4),
        ("u", "z", 4),
        ("v", "z", 4),
        ("u", "w", 4),
        ("v", "w", 5),
    ];
    for (a, b, t) in edges {
        let u = g.vertex(a).unwrap();
        let v = g.vertex(b).unwrap();
        g.add_edge(u, v, t).expect("valid fixture edge");
    }
    g
}

/// A span-3 cover of [`fig1_graph`]: v active at 5, u on [2, 4], z on [3, 4],
/// w at 2.
pub fn fig1_cover() -> TemporalAssignment {
    let g = fig1_graph();
    let mut x = TemporalAssignment::new();
    x.set(g.vertex("v").unwrap(), Interval::singleton(5));
    x.set(g.vertex("u").unwrap(), Interval::new(2, 4).unwrap());
    x.set(g.vertex("z").unwrap(), Interval::new(3, 4).unwrap());
    x.set(g.vertex("w").unwrap(), Interval::singleton(2));
    x
}

/// Three base vertices fully connected at t = 1 and t = 2. No span-0 cover
/// exists (each timestamp's triangle needs two active vertices) but span 1
/// suffices.
pub fn double_triangle() -> TemporalGraph {
    let mut g = TemporalGraph::new(["a", "b", "c"], 2).expect("valid fixture");
    for t in 1..=2 {
        for (x, y) in [("a", "b"), ("a", "c"), ("b", "c")] {
            let u = g.vertex(x).unwrap();
            let v = g.vertex(y).unwrap();
            g.add_edge(u, v, t).expect("valid fixture edge");
        }
    }
    g
}
