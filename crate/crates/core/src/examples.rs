//! Named graphs used by tests, the CLI and the acceptance suite.

use crate::graph::Multigraph;

fn build(n: usize, edges: &[(usize, usize)]) -> Multigraph {
    Multigraph::new(n, edges).expect("named graphs are connected")
}

/// Two vertices joined by three parallel edges.
pub fn theta() -> Multigraph {
    build(2, &[(0, 1), (0, 1), (0, 1)])
}

pub fn single_loop() -> Multigraph {
    build(1, &[(0, 0)])
}

pub fn path(n: usize) -> Multigraph {
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    build(n, &edges)
}

/// Cycle on `n >= 2` vertices, edges `i -> i+1 (mod n)`.
pub fn cycle(n: usize) -> Multigraph {
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    build(n, &edges)
}

pub fn complete(n: usize) -> Multigraph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            edges.push((i, j));
        }
    }
    build(n, &edges)
}

pub fn complete_bipartite(a: usize, b: usize) -> Multigraph {
    let mut edges = Vec::new();
    for i in 0..a {
        for j in 0..b {
            edges.push((i, a + j));
        }
    }
    build(a + b, &edges)
}

/// Star with centre 0 and `k` leaves.
pub fn star(k: usize) -> Multigraph {
    let edges: Vec<_> = (1..=k).map(|i| (0, i)).collect();
    build(k + 1, &edges)
}

/// Theta graph with a pendant edge hanging off vertex 1.
pub fn theta_pendant() -> Multigraph {
    build(3, &[(0, 1), (0, 1), (0, 1), (1, 2)])
}

/// Two triangles sharing vertex 0.
pub fn bowtie() -> Multigraph {
    build(5, &[(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)])
}

/// The fixed corpus used for the structural checks.
pub fn fixed_suite() -> Vec<(&'static str, Multigraph)> {
    vec![
        ("loop", single_loop()),
        ("C3", cycle(3)),
        ("C4", cycle(4)),
        ("theta", theta()),
        ("K4", complete(4)),
        ("K2,3", complete_bipartite(2, 3)),
        ("theta+pendant", theta_pendant()),
        ("bowtie", bowtie()),
    ]
}

pub fn by_name(name: &str) -> Option<Multigraph> {
    let lower = name.to_ascii_lowercase();
    let num = |prefix: &str| lower.strip_prefix(prefix).and_then(|r| r.parse::<usize>().ok());
    match lower.as_str() {
        "theta" => return Some(theta()),
        "loop" => return Some(single_loop()),
        "theta+pendant" => return Some(theta_pendant()),
        "bowtie" => return Some(bowtie()),
        "k2,3" => return Some(complete_bipartite(2, 3)),
        _ => {}
    }
    if let Some(n) = num("c").filter(|&n| n >= 2) {
        return Some(cycle(n));
    }
    if let Some(n) = num("k").filter(|&n| n >= 1) {
        return Some(complete(n));
    }
    if let Some(n) = num("p").filter(|&n| n >= 1) {
        return Some(path(n));
    }
    if let Some(k) = num("star").filter(|&k| k >= 1) {
        return Some(star(k));
    }
    None
}
