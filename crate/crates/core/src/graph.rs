//! Finite connected multigraphs, partial orientations and cycle machinery.
//!
//! Vertices are `0..n`, edges are `0..m` in insertion order. Each edge is
//! stored as `(u, v)`; that order is its reference orientation. Loops
//! (`u == v`) and parallel edges are allowed.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{check_cap, Error, Result};

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }
}

/// Direction of an arc relative to the stored `(u, v)` of its edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Dir {
    Forward,
    Backward,
}

impl Dir {
    pub fn reversed(self) -> Dir {
        match self {
            Dir::Forward => Dir::Backward,
            Dir::Backward => Dir::Forward,
        }
    }

    /// `+1` for forward, `-1` for backward.
    pub fn sign(self) -> i64 {
        match self {
            Dir::Forward => 1,
            Dir::Backward => -1,
        }
    }
}

/// An oriented edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Arc {
    pub edge: EdgeId,
    pub dir: Dir,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Multigraph {
    labels: Vec<String>,
    edges: Vec<Edge>,
}

/// JSON mirror of the text format.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl Multigraph {
    /// Builds a graph on `n` vertices labelled `0..n`.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let labels = (0..n).map(|i| i.to_string()).collect();
        Self::with_labels(labels, edges)
    }

    pub fn with_labels(labels: Vec<String>, edges: &[(usize, usize)]) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::Empty);
        }
        let mut es = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::UnknownVertex(w));
                }
            }
            es.push(Edge { u, v });
        }
        let g = Multigraph { labels, edges: es };
        let comps = g.components(&g.all_edges());
        if comps.len() > 1 {
            return Err(Error::Disconnected { components: comps });
        }
        Ok(g)
    }

    /// Parses the `n m` / `u v` text format. `#` starts a comment.
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut header: Option<(usize, usize, usize)> = None;
        let mut edges = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let nums: Vec<usize> = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<usize>().map_err(|_| Error::Parse {
                        line: line_no,
                        msg: format!("expected a nonnegative integer, found {t:?}"),
                    })
                })
                .collect::<Result<_>>()?;
            if nums.len() != 2 {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("expected two integers, found {}", nums.len()),
                });
            }
            match header {
                None => header = Some((nums[0], nums[1], line_no)),
                Some((n, m, _)) => {
                    if edges.len() == m {
                        return Err(Error::Parse {
                            line: line_no,
                            msg: format!("more than the declared {m} edges"),
                        });
                    }
                    for &w in &nums {
                        if w >= n {
                            return Err(Error::Parse {
                                line: line_no,
                                msg: format!("vertex {w} out of range 0..{n}"),
                            });
                        }
                    }
                    edges.push((nums[0], nums[1]));
                }
            }
        }
        let Some((n, m, hline)) = header else {
            return Err(Error::Parse {
                line: 1,
                msg: "missing `n m` header".into(),
            });
        };
        if edges.len() != m {
            return Err(Error::Parse {
                line: hline,
                msg: format!("declared {m} edges, found {}", edges.len()),
            });
        }
        Self::new(n, &edges)
    }

    pub fn parse_json(text: &str) -> Result<Self> {
        let j: GraphJson = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            msg: e.to_string(),
        })?;
        let labels = match j.labels {
            Some(l) if l.len() == j.n => l,
            Some(l) => {
                return Err(Error::Parse {
                    line: 1,
                    msg: format!("{} labels for {} vertices", l.len(), j.n),
                })
            }
            None => (0..j.n).map(|i| i.to_string()).collect(),
        };
        Self::with_labels(labels, &j.edges)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.num_vertices(), self.num_edges());
        for e in &self.edges {
            s.push_str(&format!("{} {}\n", e.u, e.v));
        }
        s
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            n: self.num_vertices(),
            edges: self.edges.iter().map(|e| (e.u, e.v)).collect(),
            labels: Some(self.labels.clone()),
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.labels.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> Edge {
        self.edges[e]
    }

    pub fn all_edges(&self) -> Vec<EdgeId> {
        (0..self.num_edges()).collect()
    }

    pub fn loops(&self) -> Vec<EdgeId> {
        (0..self.num_edges())
            .filter(|&e| self.edges[e].is_loop())
            .collect()
    }

    pub fn non_loops(&self) -> Vec<EdgeId> {
        (0..self.num_edges())
            .filter(|&e| !self.edges[e].is_loop())
            .collect()
    }

    pub fn tail(&self, a: Arc) -> VertexId {
        let e = self.edges[a.edge];
        match a.dir {
            Dir::Forward => e.u,
            Dir::Backward => e.v,
        }
    }

    pub fn head(&self, a: Arc) -> VertexId {
        let e = self.edges[a.edge];
        match a.dir {
            Dir::Forward => e.v,
            Dir::Backward => e.u,
        }
    }

    /// Degree with loops counted twice.
    pub fn degree(&self, v: VertexId) -> usize {
        self.edges
            .iter()
            .map(|e| usize::from(e.u == v) + usize::from(e.v == v))
            .sum()
    }

    /// Connected components of the graph `(V, edge_set)`, every vertex included.
    pub fn components(&self, edge_set: &[EdgeId]) -> Vec<Vec<VertexId>> {
        let mut uf = UnionFind::new(self.num_vertices());
        for &e in edge_set {
            uf.union(self.edges[e].u, self.edges[e].v);
        }
        uf.groups()
    }

    /// Component index for every vertex of `(V, edge_set)`.
    pub fn component_ids(&self, edge_set: &[EdgeId]) -> Vec<usize> {
        let mut ids = vec![0; self.num_vertices()];
        for (i, comp) in self.components(edge_set).iter().enumerate() {
            for &v in comp {
                ids[v] = i;
            }
        }
        ids
    }

    fn check_edges(&self, edge_set: &[EdgeId]) -> Result<()> {
        match edge_set.iter().find(|&&e| e >= self.num_edges()) {
            Some(&e) => Err(Error::UnknownEdge(e)),
            None => Ok(()),
        }
    }

    /// Induced subgraph components on the vertex subset `mask`.
    pub(crate) fn induced_components(&self, mask: &[bool]) -> usize {
        let inside: Vec<EdgeId> = (0..self.num_edges())
            .filter(|&e| mask[self.edges[e].u] && mask[self.edges[e].v])
            .collect();
        self.components(&inside)
            .iter()
            .filter(|c| mask[c[0]])
            .count()
    }
}

/// First Betti number `|E| - |V| + 1`.
pub fn genus(g: &Multigraph) -> usize {
    g.num_edges() + 1 - g.num_vertices()
}

/// Sum of the genera of the components of the edge-induced subgraph.
pub fn subgraph_genus(g: &Multigraph, edge_set: &[EdgeId]) -> Result<usize> {
    g.check_edges(edge_set)?;
    let set: BTreeSet<EdgeId> = edge_set.iter().copied().collect();
    let mut uf = UnionFind::new(g.num_vertices());
    let mut touched = vec![false; g.num_vertices()];
    for &e in &set {
        let Edge { u, v } = g.edge(e);
        uf.union(u, v);
        touched[u] = true;
        touched[v] = true;
    }
    let verts = touched.iter().filter(|&&t| t).count();
    let comps = uf
        .groups()
        .iter()
        .filter(|c| touched[c[0]])
        .count();
    Ok(set.len() + comps - verts)
}

/// Edges whose removal disconnects their component. Loops are never bridges.
pub fn bridges(g: &Multigraph) -> Vec<EdgeId> {
    let base = g.components(&g.all_edges()).len();
    (0..g.num_edges())
        .filter(|&e| {
            if g.edge(e).is_loop() {
                return false;
            }
            let rest: Vec<EdgeId> = (0..g.num_edges()).filter(|&f| f != e).collect();
            g.components(&rest).len() > base
        })
        .collect()
}

/// A partial orientation: at most one direction per edge.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrientedSubgraph {
    dirs: Vec<Option<Dir>>,
}

impl OrientedSubgraph {
    pub fn empty(m: usize) -> Self {
        OrientedSubgraph {
            dirs: vec![None; m],
        }
    }

    pub fn from_arcs(m: usize, arcs: impl IntoIterator<Item = Arc>) -> Result<Self> {
        let mut d = Self::empty(m);
        for a in arcs {
            if a.edge >= m {
                return Err(Error::UnknownEdge(a.edge));
            }
            match d.dirs[a.edge] {
                Some(prev) if prev != a.dir => {
                    return Err(Error::Invariant(format!(
                        "edge {} given both directions",
                        a.edge
                    )))
                }
                _ => d.dirs[a.edge] = Some(a.dir),
            }
        }
        Ok(d)
    }

    pub fn from_dirs(dirs: Vec<Option<Dir>>) -> Self {
        OrientedSubgraph { dirs }
    }

    /// Parses the canonical key produced by [`OrientedSubgraph::key`].
    pub fn from_key(key: &str) -> Result<Self> {
        key.chars()
            .map(|c| match c {
                '+' => Ok(Some(Dir::Forward)),
                '-' => Ok(Some(Dir::Backward)),
                '.' => Ok(None),
                _ => Err(Error::Invariant(format!("bad orientation key {key:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Self::from_dirs)
    }

    pub fn num_edges_host(&self) -> usize {
        self.dirs.len()
    }

    pub fn dir(&self, e: EdgeId) -> Option<Dir> {
        self.dirs[e]
    }

    pub fn dirs(&self) -> &[Option<Dir>] {
        &self.dirs
    }

    pub fn set(&mut self, e: EdgeId, d: Option<Dir>) {
        self.dirs[e] = d;
    }

    pub fn arcs(&self) -> impl Iterator<Item = Arc> + '_ {
        self.dirs
            .iter()
            .enumerate()
            .filter_map(|(edge, d)| d.map(|dir| Arc { edge, dir }))
    }

    pub fn edge_set(&self) -> Vec<EdgeId> {
        self.arcs().map(|a| a.edge).collect()
    }

    pub fn len(&self) -> usize {
        self.dirs.iter().filter(|d| d.is_some()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, a: Arc) -> bool {
        self.dirs[a.edge] == Some(a.dir)
    }

    /// Every arc of `self` is an arc of `other`.
    pub fn is_subset_of(&self, other: &OrientedSubgraph) -> bool {
        self.dirs
            .iter()
            .zip(&other.dirs)
            .all(|(a, b)| a.is_none() || a == b)
    }

    /// Arcs of `self` whose reversal is an arc of `other`.
    pub fn disagreement(&self, other: &OrientedSubgraph) -> Vec<Arc> {
        self.arcs()
            .filter(|a| other.dir(a.edge) == Some(a.dir.reversed()))
            .collect()
    }

    /// True when some edge is oriented one way here and the other way in `other`.
    pub fn conflicts_with(&self, other: &OrientedSubgraph) -> bool {
        !self.disagreement(other).is_empty()
    }

    /// Union of two consistent orientations.
    pub fn union(&self, other: &OrientedSubgraph) -> Result<OrientedSubgraph> {
        OrientedSubgraph::from_arcs(self.dirs.len(), self.arcs().chain(other.arcs()))
    }

    pub fn reversed_on(&self, arcs: &[Arc]) -> OrientedSubgraph {
        let mut d = self.clone();
        for a in arcs {
            d.dirs[a.edge] = d.dirs[a.edge].map(Dir::reversed);
        }
        d
    }

    /// One character per edge: `+` forward, `-` backward, `.` absent.
    pub fn key(&self) -> String {
        self.dirs
            .iter()
            .map(|d| match d {
                Some(Dir::Forward) => '+',
                Some(Dir::Backward) => '-',
                None => '.',
            })
            .collect()
    }

    pub fn out_degrees(&self, g: &Multigraph) -> Vec<usize> {
        let mut out = vec![0; g.num_vertices()];
        for a in self.arcs() {
            out[g.tail(a)] += 1;
        }
        out
    }

    pub fn in_degrees(&self, g: &Multigraph) -> Vec<usize> {
        let mut inn = vec![0; g.num_vertices()];
        for a in self.arcs() {
            inn[g.head(a)] += 1;
        }
        inn
    }

    fn adjacency(&self, g: &Multigraph) -> Vec<Vec<VertexId>> {
        let mut adj = vec![Vec::new(); g.num_vertices()];
        for a in self.arcs() {
            adj[g.tail(a)].push(g.head(a));
        }
        adj
    }

    /// Whether `to` is reachable from `from` along arcs.
    pub fn reaches(&self, g: &Multigraph, from: VertexId, to: VertexId) -> bool {
        reach(&self.adjacency(g), from)[to]
    }
}

impl Serialize for OrientedSubgraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.key().serialize(s)
    }
}

impl fmt::Display for OrientedSubgraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key())
    }
}

fn reach(adj: &[Vec<VertexId>], from: VertexId) -> Vec<bool> {
    let mut seen = vec![false; adj.len()];
    let mut stack = vec![from];
    seen[from] = true;
    while let Some(x) = stack.pop() {
        for &y in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    seen
}

/// Every arc lies on a directed cycle of `d`.
pub fn is_strongly_connected(g: &Multigraph, d: &OrientedSubgraph) -> bool {
    let adj = d.adjacency(g);
    let mut cache: Vec<Option<Vec<bool>>> = vec![None; g.num_vertices()];
    d.arcs().all(|a| {
        let (t, h) = (g.tail(a), g.head(a));
        cache[h].get_or_insert_with(|| reach(&adj, h))[t]
    })
}

/// No directed cycle (loops count as cycles).
pub fn is_acyclic(g: &Multigraph, d: &OrientedSubgraph) -> bool {
    let adj = d.adjacency(g);
    d.arcs().all(|a| {
        let (t, h) = (g.tail(a), g.head(a));
        t != h && !reach(&adj, h)[t]
    })
}

/// A simple cycle with a traversal direction, stored in traversal order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Circuit {
    arcs: Vec<Arc>,
}

impl Circuit {
    pub fn new(g: &Multigraph, arcs: Vec<Arc>) -> Result<Self> {
        if arcs.is_empty() {
            return Err(Error::Invariant("empty circuit".into()));
        }
        for w in 0..arcs.len() {
            let next = arcs[(w + 1) % arcs.len()];
            if g.head(arcs[w]) != g.tail(next) {
                return Err(Error::Invariant("circuit arcs do not chain".into()));
            }
        }
        let verts: BTreeSet<VertexId> = arcs.iter().map(|&a| g.tail(a)).collect();
        let edges: BTreeSet<EdgeId> = arcs.iter().map(|a| a.edge).collect();
        if verts.len() != arcs.len() || edges.len() != arcs.len() {
            return Err(Error::Invariant("circuit is not simple".into()));
        }
        Ok(Circuit { arcs })
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn reversed(&self) -> Circuit {
        let arcs = self
            .arcs
            .iter()
            .rev()
            .map(|a| Arc {
                edge: a.edge,
                dir: a.dir.reversed(),
            })
            .collect();
        Circuit { arcs }
    }

    pub fn as_oriented(&self, m: usize) -> OrientedSubgraph {
        OrientedSubgraph::from_arcs(m, self.arcs.iter().copied())
            .expect("a simple circuit uses each edge once")
    }

    /// `+1`/`-1` per edge along the traversal direction.
    pub fn signs(&self, m: usize) -> Vec<i64> {
        let mut s = vec![0; m];
        for a in &self.arcs {
            s[a.edge] = a.dir.sign();
        }
        s
    }
}

/// Spanning forest by increasing edge id.
pub fn spanning_tree(g: &Multigraph) -> Vec<EdgeId> {
    let mut uf = UnionFind::new(g.num_vertices());
    (0..g.num_edges())
        .filter(|&e| uf.union(g.edge(e).u, g.edge(e).v))
        .collect()
}

/// Tree path from `from` to `to` as arcs, over the edges in `tree`.
fn tree_path(g: &Multigraph, tree: &[EdgeId], from: VertexId, to: VertexId) -> Vec<Arc> {
    let n = g.num_vertices();
    let mut parent: Vec<Option<Arc>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut adj: Vec<Vec<Arc>> = vec![Vec::new(); n];
    for &e in tree {
        let Edge { u, v } = g.edge(e);
        adj[u].push(Arc {
            edge: e,
            dir: Dir::Forward,
        });
        adj[v].push(Arc {
            edge: e,
            dir: Dir::Backward,
        });
    }
    let mut stack = vec![from];
    seen[from] = true;
    while let Some(x) = stack.pop() {
        for &a in &adj[x] {
            let y = g.head(a);
            if !seen[y] {
                seen[y] = true;
                parent[y] = Some(a);
                stack.push(y);
            }
        }
    }
    let mut path = Vec::new();
    let mut cur = to;
    while cur != from {
        let a = parent[cur].expect("tree spans the component");
        path.push(a);
        cur = g.tail(a);
    }
    path.reverse();
    path
}

/// Non-tree edges of [`spanning_tree`], in increasing id order. The i-th
/// fundamental circuit traverses the i-th of these forward.
pub fn cotree(g: &Multigraph) -> Vec<EdgeId> {
    let tree: BTreeSet<EdgeId> = spanning_tree(g).into_iter().collect();
    (0..g.num_edges()).filter(|e| !tree.contains(e)).collect()
}

/// Fundamental circuits of the smallest-id-first spanning tree.
pub fn cycle_basis(g: &Multigraph) -> Vec<Circuit> {
    let tree = spanning_tree(g);
    cotree(g)
        .into_iter()
        .map(|e| {
            let first = Arc {
                edge: e,
                dir: Dir::Forward,
            };
            let mut arcs = vec![first];
            arcs.extend(tree_path(g, &tree, g.head(first), g.tail(first)));
            Circuit::new(g, arcs).expect("fundamental cycles are simple")
        })
        .collect()
}

/// All directed simple circuits, each undirected cycle in both directions.
///
/// Circuits are listed with the smallest vertex first, then by DFS order over
/// increasing edge ids, so output is deterministic.
pub fn enumerate_circuits(g: &Multigraph, cap: usize) -> Result<Vec<Circuit>> {
    let n = g.num_vertices();
    let mut adj: Vec<Vec<Arc>> = vec![Vec::new(); n];
    for (e, edge) in g.edges().iter().enumerate() {
        if edge.is_loop() {
            continue;
        }
        adj[edge.u].push(Arc {
            edge: e,
            dir: Dir::Forward,
        });
        adj[edge.v].push(Arc {
            edge: e,
            dir: Dir::Backward,
        });
    }
    let mut out = Vec::new();
    for e in g.loops() {
        for dir in [Dir::Forward, Dir::Backward] {
            out.push(Circuit {
                arcs: vec![Arc { edge: e, dir }],
            });
        }
    }
    check_cap("circuits", out.len() as u128, cap as u128)?;

    struct Search<'a> {
        g: &'a Multigraph,
        adj: &'a [Vec<Arc>],
        start: VertexId,
        on_path: Vec<bool>,
        path: Vec<Arc>,
        out: &'a mut Vec<Circuit>,
        cap: usize,
    }
    impl Search<'_> {
        fn dfs(&mut self, x: VertexId) -> Result<()> {
            for i in 0..self.adj[x].len() {
                let a = self.adj[x][i];
                let y = self.g.head(a);
                if y == self.start {
                    // avoid reusing the first edge as the closing edge
                    if self.path.first().map(|p| p.edge) == Some(a.edge) {
                        continue;
                    }
                    let mut arcs = self.path.clone();
                    arcs.push(a);
                    self.out.push(Circuit { arcs });
                    check_cap("circuits", self.out.len() as u128, self.cap as u128)?;
                } else if y > self.start && !self.on_path[y] {
                    self.on_path[y] = true;
                    self.path.push(a);
                    self.dfs(y)?;
                    self.path.pop();
                    self.on_path[y] = false;
                }
            }
            Ok(())
        }
    }
    for s in 0..n {
        let mut search = Search {
            g,
            adj: &adj,
            start: s,
            on_path: vec![false; n],
            path: Vec::new(),
            out: &mut out,
            cap,
        };
        search.on_path[s] = true;
        search.dfs(s)?;
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    /// Returns true when the two classes were distinct.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }

    /// Classes sorted by smallest member, members ascending.
    pub(crate) fn groups(&mut self) -> Vec<Vec<usize>> {
        let n = self.parent.len();
        let mut by_root: Vec<Vec<usize>> = vec![Vec::new(); n];
        for x in 0..n {
            let r = self.find(x);
            by_root[r].push(x);
        }
        let mut groups: Vec<Vec<usize>> = by_root.into_iter().filter(|g| !g.is_empty()).collect();
        groups.sort_by_key(|g| g[0]);
        groups
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;

    fn fwd(edge: EdgeId) -> Arc {
        Arc {
            edge,
            dir: Dir::Forward,
        }
    }
    fn bwd(edge: EdgeId) -> Arc {
        Arc {
            edge,
            dir: Dir::Backward,
        }
    }

    #[test]
    fn genus_examples() {
        assert_eq!(genus(&examples::theta()), 2);
        assert_eq!(genus(&examples::path(4)), 0);
        assert_eq!(genus(&examples::single_loop()), 1);
    }

    #[test]
    fn subgraph_genus_examples() {
        let theta = examples::theta();
        assert_eq!(subgraph_genus(&theta, &[0, 1]).unwrap(), 1);
        assert_eq!(subgraph_genus(&theta, &[]).unwrap(), 0);
        assert_eq!(subgraph_genus(&theta, &[0, 1, 2]).unwrap(), genus(&theta));
        // two triangles joined by a path edge
        let g = Multigraph::new(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (2, 3)]).unwrap();
        assert_eq!(subgraph_genus(&g, &[0, 1, 2, 3, 4, 5]).unwrap(), 2);
        assert_eq!(subgraph_genus(&theta, &[7]), Err(Error::UnknownEdge(7)));
    }

    #[test]
    fn bridge_examples() {
        assert_eq!(bridges(&examples::path(3)), vec![0, 1]);
        assert!(bridges(&examples::theta()).is_empty());
        let tp = Multigraph::new(4, &[(0, 1), (1, 2), (2, 0), (2, 3)]).unwrap();
        assert_eq!(bridges(&tp), vec![3]);
        assert!(bridges(&examples::single_loop()).is_empty());
    }

    #[test]
    fn strong_connectivity_examples() {
        let theta = examples::theta();
        let d = OrientedSubgraph::from_arcs(3, [fwd(0), fwd(1), bwd(2)]).unwrap();
        assert!(is_strongly_connected(&theta, &d));
        let all = OrientedSubgraph::from_arcs(3, [fwd(0), fwd(1), fwd(2)]).unwrap();
        assert!(!is_strongly_connected(&theta, &all));
        let lp = examples::single_loop();
        for a in [fwd(0), bwd(0)] {
            assert!(is_strongly_connected(&lp, &OrientedSubgraph::from_arcs(1, [a]).unwrap()));
        }
        assert!(is_strongly_connected(&theta, &OrientedSubgraph::empty(3)));
    }

    #[test]
    fn cycle_basis_examples() {
        let theta = examples::theta();
        let basis = cycle_basis(&theta);
        // tree = {e0}; e1 and e2 each close a 2-cycle with e0 reversed
        assert_eq!(basis.len(), 2);
        assert_eq!(basis[0].arcs(), &[fwd(1), bwd(0)]);
        assert_eq!(basis[1].arcs(), &[fwd(2), bwd(0)]);
        assert!(cycle_basis(&examples::path(5)).is_empty());
        let lp = cycle_basis(&examples::single_loop());
        assert_eq!(lp.len(), 1);
        assert_eq!(lp[0].len(), 1);
    }

    /// Independent count: an edge subset is a simple cycle iff it is connected,
    /// every touched vertex has degree two in it (a loop alone counts).
    fn count_cycles_by_subsets(g: &Multigraph) -> usize {
        let m = g.num_edges();
        let mut count = 0;
        for mask in 1u32..(1 << m) {
            let es: Vec<EdgeId> = (0..m).filter(|&e| mask >> e & 1 == 1).collect();
            let mut deg = vec![0; g.num_vertices()];
            for &e in &es {
                deg[g.edge(e).u] += 1;
                deg[g.edge(e).v] += 1;
            }
            if deg.iter().any(|&d| d != 0 && d != 2) {
                continue;
            }
            if subgraph_genus(g, &es).unwrap() == 1
                && g.components(&es).iter().filter(|c| deg[c[0]] > 0).count() == 1
            {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn circuit_enumeration_examples() {
        let theta = examples::theta();
        let cs = enumerate_circuits(&theta, 1000).unwrap();
        assert_eq!(cs.len(), 6);
        assert_eq!(cs.len(), 2 * count_cycles_by_subsets(&theta));
        assert_eq!(enumerate_circuits(&examples::cycle(3), 100).unwrap().len(), 2);
        assert!(enumerate_circuits(&examples::path(4), 100).unwrap().is_empty());
        let k4 = examples::complete(4);
        assert_eq!(enumerate_circuits(&k4, 100).unwrap().len(), 14);
        assert_eq!(14, 2 * count_cycles_by_subsets(&k4));
        assert!(matches!(
            enumerate_circuits(&k4, 5),
            Err(Error::Cap { .. })
        ));
    }

    #[test]
    fn circuits_are_strong_and_avoid_bridges() {
        for g in examples::fixed_suite() {
            let br = bridges(&g.1);
            let cs = enumerate_circuits(&g.1, 10_000).unwrap();
            assert_eq!(cs.len(), 2 * count_cycles_by_subsets(&g.1), "{}", g.0);
            for c in &cs {
                let d = c.as_oriented(g.1.num_edges());
                assert!(is_strongly_connected(&g.1, &d));
                assert!(c.arcs().iter().all(|a| !br.contains(&a.edge)));
            }
            assert_eq!(cycle_basis(&g.1).len(), genus(&g.1));
            assert_eq!(subgraph_genus(&g.1, &g.1.all_edges()).unwrap(), genus(&g.1));
        }
    }

    #[test]
    fn text_format() {
        let g = Multigraph::parse_text("2 3\n0 1\n0 1\n0 1").unwrap();
        assert_eq!(g, examples::theta());
        let lp = Multigraph::parse_text("# loop\n1 1\n0 0 # the loop\n").unwrap();
        assert_eq!(lp, examples::single_loop());
        match Multigraph::parse_text("4 2\n0 1\n2 3") {
            Err(Error::Disconnected { components }) => {
                assert_eq!(components, vec![vec![0, 1], vec![2, 3]])
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            Multigraph::parse_text("2 1\n0 x"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            Multigraph::parse_text("2 1\n0 5"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            Multigraph::parse_text("2 2\n0 1"),
            Err(Error::Parse { line: 1, .. })
        ));
        let j = serde_json::to_string(&g.to_json()).unwrap();
        assert_eq!(Multigraph::parse_json(&j).unwrap(), g);
        assert_eq!(Multigraph::parse_text(&g.to_text()).unwrap(), g);
    }

    #[test]
    fn orientation_keys() {
        let d = OrientedSubgraph::from_arcs(4, [fwd(0), bwd(2)]).unwrap();
        assert_eq!(d.key(), "+.-.");
        assert_eq!(OrientedSubgraph::from_key("+.-.").unwrap(), d);
        assert!(OrientedSubgraph::from_arcs(2, [fwd(0), bwd(0)]).is_err());
        assert!(OrientedSubgraph::from_arcs(2, [fwd(3)]).is_err());
    }
}
