//! Covering numbers of the flow and cut lattices, the graph Laplacian,
//! well-balanced / well-unbalanced orientations and excess functions.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::caps::Caps;
use crate::cut::{self, VertexFunction};
use crate::error::{check_cap, Error, Result};
use crate::flow::{self, EdgeVector};
use crate::graph::{self, Dir, EdgeId, Multigraph, OrientedSubgraph};
use crate::rational::{q_int, Q};
use crate::voronoi::{self, LatticeFrame};

/// `(L f)(y) = sum over edges yz of f(y) - f(z)`; loops contribute nothing.
pub fn laplacian_apply(g: &Multigraph, f: &VertexFunction) -> VertexFunction {
    laplacian_apply_on(g, &g.all_edges(), f)
}

/// Laplacian of the spanning subgraph with edge set `edges`.
pub fn laplacian_apply_on(g: &Multigraph, edges: &[EdgeId], f: &VertexFunction) -> VertexFunction {
    let mut out = vec![Q::zero(); g.num_vertices()];
    for &e in edges {
        let edge = g.edge(e);
        let d = f.get(edge.u) - f.get(edge.v);
        out[edge.u] += &d;
        out[edge.v] -= d;
    }
    VertexFunction::new(out)
}

/// Solves `scale * L f = c` exactly with `f(0) = 0`.
pub fn solve_laplacian(g: &Multigraph, c: &VertexFunction, scale: &Q) -> Result<VertexFunction> {
    solve_laplacian_on(g, &g.all_edges(), c, scale)
}

/// Solves `scale * L_H f = c` for the spanning subgraph `H` with edge set
/// `edges`. `f` vanishes at the first vertex of every component of `H`;
/// `c` must sum to zero on each component.
pub fn solve_laplacian_on(g: &Multigraph, edges: &[EdgeId], c: &VertexFunction, scale: &Q) -> Result<VertexFunction> {
    let n = g.num_vertices();
    if c.values().len() != n {
        return Err(Error::HostMismatch(c.values().len(), n));
    }
    if scale.is_zero() {
        return Err(Error::Infeasible);
    }
    let comp = g.component_ids(edges);
    let k = comp.iter().max().map_or(0, |&x| x + 1);
    let mut sums = vec![Q::zero(); k];
    let mut grounded = vec![false; k];
    let mut index = vec![None; n];
    let mut free = Vec::new();
    for v in 0..n {
        sums[comp[v]] += c.get(v);
        if grounded[comp[v]] {
            index[v] = Some(free.len());
            free.push(v);
        } else {
            grounded[comp[v]] = true;
        }
    }
    if sums.iter().any(|s| !s.is_zero()) {
        return Err(Error::Infeasible);
    }
    let mut values = vec![Q::zero(); n];
    if free.is_empty() {
        return Ok(VertexFunction::new(values));
    }
    let rhs: Vec<Q> = free.iter().map(|&v| c.get(v) / scale).collect();
    let denom = rhs.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let b: Vec<BigInt> = rhs
        .iter()
        .map(|x| (x * Q::from_integer(denom.clone())).to_integer())
        .collect();
    let mut a = vec![vec![BigInt::zero(); free.len()]; free.len()];
    for &e in edges {
        let edge = g.edge(e);
        if edge.is_loop() {
            continue;
        }
        for (x, y) in [(edge.u, edge.v), (edge.v, edge.u)] {
            if let Some(i) = index[x] {
                a[i][i] += 1;
                if let Some(j) = index[y] {
                    a[i][j] -= 1;
                }
            }
        }
    }
    let x = crate::rational::bareiss_solve(&a, &b).ok_or_else(|| Error::Invariant("reduced Laplacian is singular".into()))?;
    let d = Q::from_integer(denom);
    for (i, &v) in free.iter().enumerate() {
        values[v] = &x[i] / &d;
    }
    Ok(VertexFunction::new(values))
}

/// Integer excess `c(y) = d_in(y) - d_out(y)` at every vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExcessFunction {
    pub values: Vec<i64>,
}

impl ExcessFunction {
    pub fn new(values: Vec<i64>) -> Self {
        ExcessFunction { values }
    }

    pub fn of_orientation(g: &Multigraph, d: &OrientedSubgraph) -> Self {
        let inn = d.in_degrees(g);
        let out = d.out_degrees(g);
        ExcessFunction {
            values: inn.iter().zip(&out).map(|(&a, &b)| a as i64 - b as i64).collect(),
        }
    }
}

fn check_excess_host(g: &Multigraph, c: &ExcessFunction, caps: &Caps) -> Result<()> {
    if c.values.len() != g.num_vertices() {
        return Err(Error::HostMismatch(c.values.len(), g.num_vertices()));
    }
    if !graph::bridges(g).is_empty() {
        return Err(Error::NotTwoEdgeConnected);
    }
    check_cap("vertices for subset scan", g.num_vertices() as u128, caps.max_vertices as u128)
}

/// `c` is the excess of a strongly connected orientation iff it sums to
/// zero, has the parity of the degree everywhere, and `c(X) < delta(X)` for
/// every proper nonempty vertex set `X`.
pub fn excess_feasible(g: &Multigraph, c: &ExcessFunction, caps: &Caps) -> Result<bool> {
    check_excess_host(g, c, caps)?;
    let n = g.num_vertices();
    if c.values.iter().sum::<i64>() != 0 {
        return Ok(false);
    }
    if (0..n).any(|v| (c.values[v] - g.degree(v) as i64).rem_euclid(2) != 0) {
        return Ok(false);
    }
    for mask in 1u64..(1u64 << n) - 1 {
        let inside = |v: usize| mask >> v & 1 == 1;
        let cx: i64 = (0..n).filter(|&v| inside(v)).map(|v| c.values[v]).sum();
        let delta = g.edges().iter().filter(|e| inside(e.u) != inside(e.v)).count() as i64;
        if cx >= delta {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Exhaustive check: some strongly connected orientation of all of `g` has
/// excess `c`.
pub fn excess_realizable(g: &Multigraph, c: &ExcessFunction, caps: &Caps) -> Result<bool> {
    check_excess_host(g, c, caps)?;
    Ok(realizable_excesses(g, caps)?.contains(&c.values))
}

/// Excess functions of all strongly connected orientations of `g`.
pub fn realizable_excesses(g: &Multigraph, caps: &Caps) -> Result<BTreeSet<Vec<i64>>> {
    let m = g.num_edges();
    check_cap("edges for 2^m orientation scan", m as u128, caps.max_edges as u128)?;
    Ok((0u64..(1u64 << m))
        .into_par_iter()
        .filter_map(|mask| {
            let d = OrientedSubgraph::from_dirs(
                (0..m)
                    .map(|e| Some(if mask >> e & 1 == 1 { Dir::Backward } else { Dir::Forward }))
                    .collect(),
            );
            graph::is_strongly_connected(g, &d).then(|| ExcessFunction::of_orientation(g, &d).values)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect())
}

/// Per-orientation data on the flow side.
#[derive(Clone, Debug)]
pub struct FlowOrientationValue {
    pub orientation: OrientedSubgraph,
    pub vertex: EdgeVector,
    pub q: Q,
    /// `|v|_1`, which should equal `2 q`.
    pub l1: Q,
    /// `<f, L f>` for `L f = d_out - d_in` on `g` minus bridges.
    pub energy: Q,
    /// `eps / 4 - <f, L f> / 4`.
    pub laplacian_value: Q,
    /// `eps / 2 - <f, L f> / 2`, the closed form with doubled constants,
    /// kept for comparison.
    pub closed_value: Q,
    pub tension_law: bool,
    pub potential_law: bool,
    pub laplacian_equation: bool,
}

/// Laplacian potential of a strong orientation: `L f = d_out - d_in` over
/// the oriented edges.
pub fn flow_potential(g: &Multigraph, d: &OrientedSubgraph) -> Result<VertexFunction> {
    let c = cut::in_minus_out(g, d).scale(&q_int(-1));
    solve_laplacian_on(g, &d.edge_set(), &c, &Q::one())
}

fn evaluate_strong(g: &Multigraph, d: &OrientedSubgraph, xi: &[EdgeVector]) -> Result<FlowOrientationValue> {
    let v = voronoi::vertex_of_orientation(g, d, xi)?;
    let q = flow::q(&v);
    let l1 = v.l1_norm();
    let edges = d.edge_set();
    let c = cut::in_minus_out(g, d).scale(&q_int(-1));
    let f = solve_laplacian_on(g, &edges, &c, &Q::one())?;
    let lf = laplacian_apply_on(g, &edges, &f);
    let energy = f.inner(&lf);
    let eps = q_int(edges.len() as i64);
    let mu = |a: graph::Arc| v.on_arc(a) * q_int(2) - q_int(1);
    let tension_law = xi
        .iter()
        .filter(|l| flow::support(l).is_subset_of(d))
        .all(|l| flow::support(l).arcs().map(mu).sum::<Q>().is_zero());
    let potential_law = d.arcs().all(|a| mu(a) == f.get(g.head(a)) - f.get(g.tail(a)));
    Ok(FlowOrientationValue {
        orientation: d.clone(),
        vertex: v,
        laplacian_value: (&eps - &energy) / q_int(4),
        closed_value: (&eps - &energy) / q_int(2),
        q,
        l1,
        energy,
        tension_law,
        potential_law,
        laplacian_equation: lf == c,
    })
}

/// Covering number of the flow lattice with its cross-checks.
#[derive(Clone, Debug)]
pub struct FlowCovering {
    pub value: Q,
    /// Orientations attaining `value`, canonical order.
    pub argmax: Vec<OrientedSubgraph>,
    /// Largest `q` over the vertices from the double description run.
    pub oracle: Option<Q>,
    pub per_orientation: Vec<FlowOrientationValue>,
    /// `value` is only a lower bound (orientation scan over the cap).
    pub lower_bound: bool,
    pub l1_identity: bool,
    pub tension_law: bool,
    pub potential_law: bool,
    pub laplacian_equation: bool,
    /// `eps / 4 - <f, L f> / 4` reproduces `q(v^D)` for every orientation.
    pub laplacian_formula: bool,
    /// The alternative constant `eps / 2 - <f, L f> / 2` at the maximiser.
    pub closed_formula_value: Option<Q>,
    /// `|E| / 2`, the Eulerian closed form, when `g` is Eulerian.
    pub eulerian_closed_form: Option<Q>,
    /// Minimisers of `<f, L f>` (well-balanced orientations).
    pub well_balanced: Vec<OrientedSubgraph>,
    pub argmax_is_argmin: bool,
}

impl FlowCovering {
    pub fn identities_hold(&self) -> bool {
        self.l1_identity
            && self.tension_law
            && self.potential_law
            && self.laplacian_equation
            && self.laplacian_formula
            && self.argmax_is_argmin
    }

    pub fn matches_oracle(&self) -> bool {
        self.oracle.as_ref() == Some(&self.value)
    }

    /// The closed forms disagree with the computed value.
    pub fn closed_form_discrepancy(&self) -> bool {
        self.closed_formula_value.as_ref().is_some_and(|p| *p != self.value)
            || self.eulerian_closed_form.as_ref().is_some_and(|p| *p != self.value)
    }
}

fn sorted_keys(items: impl IntoIterator<Item = OrientedSubgraph>) -> Vec<OrientedSubgraph> {
    let mut v: Vec<OrientedSubgraph> = items.into_iter().collect();
    v.sort_by_key(|d| d.key());
    v
}

pub fn is_eulerian_graph(g: &Multigraph) -> bool {
    (0..g.num_vertices()).all(|v| g.degree(v) % 2 == 0)
}

/// Two-colourable; a loop rules it out.
pub fn is_bipartite(g: &Multigraph) -> bool {
    let n = g.num_vertices();
    let mut colour: Vec<Option<bool>> = vec![None; n];
    for s in 0..n {
        if colour[s].is_some() {
            continue;
        }
        colour[s] = Some(false);
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            for e in g.edges() {
                let y = if e.u == x {
                    e.v
                } else if e.v == x {
                    e.u
                } else {
                    continue;
                };
                let want = !colour[x].expect("coloured");
                match colour[y] {
                    None => {
                        colour[y] = Some(want);
                        stack.push(y);
                    }
                    Some(c) if c != want => return false,
                    _ => {}
                }
            }
        }
    }
    true
}

/// Exact `Cov(Lambda)`: the largest `q(v^D)` over strongly connected
/// orientations of `g` minus bridges. Past the orientation cap, falls back
/// to a local search and flags the value as a lower bound.
pub fn covering_number_flow(g: &Multigraph, caps: &Caps) -> Result<FlowCovering> {
    let xi = voronoi::xi1(g, caps)?;
    let orientations = match voronoi::strong_orientations(g, caps) {
        Ok(o) => o,
        Err(Error::Cap { .. }) => return covering_flow_lower_bound(g, caps),
        Err(e) => return Err(e),
    };
    let per: Vec<FlowOrientationValue> = orientations
        .par_iter()
        .map(|d| evaluate_strong(g, d, &xi))
        .collect::<Result<_>>()?;
    let value = per.iter().map(|p| p.q.clone()).max().unwrap_or_else(Q::zero);
    let min_energy = per.iter().map(|p| p.energy.clone()).min().unwrap_or_else(Q::zero);
    let argmax = sorted_keys(per.iter().filter(|p| p.q == value).map(|p| p.orientation.clone()));
    let well_balanced = sorted_keys(per.iter().filter(|p| p.energy == min_energy).map(|p| p.orientation.clone()));
    let closed_formula_value = per.iter().find(|p| p.q == value).map(|p| p.closed_value.clone());
    let oracle = match voronoi::voronoi_halfspaces(g, caps)
        .and_then(|(p, _)| voronoi::oracle_covering(&LatticeFrame::flow(g), &p, caps))
    {
        Ok((o, _)) => Some(o),
        Err(Error::Cap { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(FlowCovering {
        l1_identity: per.iter().all(|p| p.l1 == &p.q * q_int(2)),
        tension_law: per.iter().all(|p| p.tension_law),
        potential_law: per.iter().all(|p| p.potential_law),
        laplacian_equation: per.iter().all(|p| p.laplacian_equation),
        laplacian_formula: per.iter().all(|p| p.laplacian_value == p.q),
        eulerian_closed_form: is_eulerian_graph(g).then(|| Q::new(BigInt::from(g.num_edges()), BigInt::from(2))),
        argmax_is_argmin: argmax == well_balanced,
        value,
        argmax,
        oracle,
        per_orientation: per,
        lower_bound: false,
        closed_formula_value,
        well_balanced,
    })
}

fn covering_flow_lower_bound(g: &Multigraph, caps: &Caps) -> Result<FlowCovering> {
    let (d, energy) = well_balanced_local_search(g, caps, 10_000)?;
    let eps = q_int(d.len() as i64);
    let value = (&eps - &energy) / q_int(4);
    Ok(FlowCovering {
        closed_formula_value: Some((&eps - &energy) / q_int(2)),
        eulerian_closed_form: is_eulerian_graph(g).then(|| Q::new(BigInt::from(g.num_edges()), BigInt::from(2))),
        value,
        argmax: vec![d.clone()],
        oracle: None,
        per_orientation: Vec::new(),
        lower_bound: true,
        l1_identity: true,
        tension_law: true,
        potential_law: true,
        laplacian_equation: true,
        laplacian_formula: true,
        well_balanced: vec![d],
        argmax_is_argmin: true,
    })
}

/// The well-balanced orientations: strong orientations of `g` minus bridges
/// minimising `<f, L f>`. Returns the minimum, all minimisers, and the first
/// one in key order.
pub fn well_balanced_search(g: &Multigraph, caps: &Caps) -> Result<(Q, Vec<OrientedSubgraph>)> {
    let c = covering_number_flow(g, caps)?;
    if c.lower_bound {
        return Err(Error::Cap {
            what: "edges for 2^m orientation scan",
            needed: g.num_edges() as u128,
            cap: caps.max_edges as u128,
        });
    }
    let min = c.per_orientation.iter().map(|p| p.energy.clone()).min().unwrap_or_else(Q::zero);
    Ok((min, c.well_balanced))
}

/// A strongly connected orientation of `g` minus bridges from a depth-first
/// search: tree edges point away from the root, the rest point back up.
pub fn dfs_strong_orientation(g: &Multigraph) -> OrientedSubgraph {
    let n = g.num_vertices();
    let br = graph::bridges(g);
    let mut d = OrientedSubgraph::empty(g.num_edges());
    let mut used = vec![false; g.num_edges()];
    let mut seen = vec![false; n];
    let mut adj: Vec<Vec<EdgeId>> = vec![Vec::new(); n];
    for (e, edge) in g.edges().iter().enumerate() {
        if br.contains(&e) {
            continue;
        }
        if edge.is_loop() {
            d.set(e, Some(Dir::Forward));
            continue;
        }
        adj[edge.u].push(e);
        adj[edge.v].push(e);
    }
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut stack = vec![(root, 0usize)];
        while let Some(&mut (x, ref mut i)) = stack.last_mut() {
            if *i == adj[x].len() {
                stack.pop();
                continue;
            }
            let e = adj[x][*i];
            *i += 1;
            if used[e] {
                continue;
            }
            used[e] = true;
            let edge = g.edge(e);
            let y = if edge.u == x { edge.v } else { edge.u };
            d.set(e, Some(if edge.u == x { Dir::Forward } else { Dir::Backward }));
            if !seen[y] {
                seen[y] = true;
                stack.push((y, 0));
            }
        }
    }
    d
}

/// `<f, L f>` of a strong orientation.
pub fn flow_energy(g: &Multigraph, d: &OrientedSubgraph) -> Result<Q> {
    let f = flow_potential(g, d)?;
    Ok(f.inner(&laplacian_apply_on(g, &d.edge_set(), &f)))
}

/// Reverses directed circuits of the current orientation while that lowers
/// `<f, L f>`. Reversing a directed circuit keeps strong connectivity.
pub fn well_balanced_local_search(g: &Multigraph, caps: &Caps, max_steps: usize) -> Result<(OrientedSubgraph, Q)> {
    let mut d = dfs_strong_orientation(g);
    let mut energy = flow_energy(g, &d)?;
    let circuits = graph::enumerate_circuits(g, caps.max_circuits)?;
    for _ in 0..max_steps {
        let mut improved = false;
        for c in &circuits {
            if !c.arcs().iter().all(|&a| d.contains(a)) {
                continue;
            }
            let next = d.reversed_on(c.arcs());
            let e = flow_energy(g, &next)?;
            if e < energy {
                d = next;
                energy = e;
                improved = true;
                break;
            }
        }
        if !improved {
            break;
        }
    }
    Ok((d, energy))
}

/// Per-orientation data on the cut side.
#[derive(Clone, Debug)]
pub struct CutOrientationValue {
    pub orientation: OrientedSubgraph,
    pub vertex: EdgeVector,
    pub q: Q,
    /// `<f, L f>` for `2 L f = d_in - d_out`.
    pub energy: Q,
    pub laplacian_equation: bool,
}

/// Covering number of the cut lattice with its cross-checks.
#[derive(Clone, Debug)]
pub struct CutCovering {
    pub value: Q,
    /// The well-unbalanced orientations.
    pub argmax: Vec<OrientedSubgraph>,
    pub oracle: Option<Q>,
    pub per_orientation: Vec<CutOrientationValue>,
    /// `q(nu^D) = <f, L f>` for every acyclic orientation.
    pub energy_identity: bool,
    pub laplacian_equation: bool,
    /// `|E| / 2`, the bipartite closed form, when `g` is bipartite.
    pub bipartite_closed_form: Option<Q>,
}

impl CutCovering {
    pub fn identities_hold(&self) -> bool {
        self.energy_identity && self.laplacian_equation
    }

    pub fn matches_oracle(&self) -> bool {
        self.oracle.as_ref() == Some(&self.value)
    }

    pub fn closed_form_discrepancy(&self) -> bool {
        self.bipartite_closed_form.as_ref().is_some_and(|p| *p != self.value)
    }
}

/// Exact `Cov(L)`: the largest `q(nu^D)` over acyclic orientations of `g`
/// minus its loops.
pub fn covering_number_cut(g: &Multigraph, caps: &Caps) -> Result<CutCovering> {
    let bonds = cut::bonds(g, caps)?;
    let per: Vec<CutOrientationValue> = cut::acyclic_orientations(g, caps)?
        .into_par_iter()
        .map(|d| {
            let nu = cut::vertex_of_acyclic(g, &d, &bonds)?;
            let f = cut::acyclic_potential(g, &d)?;
            let lf = laplacian_apply(g, &f);
            Ok(CutOrientationValue {
                laplacian_equation: lf.scale(&q_int(2)) == cut::in_minus_out(g, &d),
                energy: f.inner(&lf),
                q: flow::q(&nu),
                vertex: nu,
                orientation: d,
            })
        })
        .collect::<Result<_>>()?;
    let value = per.iter().map(|p| p.q.clone()).max().unwrap_or_else(Q::zero);
    let argmax = sorted_keys(per.iter().filter(|p| p.q == value).map(|p| p.orientation.clone()));
    let oracle = match cut::cut_halfspaces(g, caps)
        .and_then(|(p, _)| voronoi::oracle_covering(&LatticeFrame::cut(g), &p, caps))
    {
        Ok((o, _)) => Some(o),
        Err(Error::Cap { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(CutCovering {
        energy_identity: per.iter().all(|p| p.q == p.energy),
        laplacian_equation: per.iter().all(|p| p.laplacian_equation),
        bipartite_closed_form: is_bipartite(g).then(|| Q::new(BigInt::from(g.num_edges()), BigInt::from(2))),
        value,
        argmax,
        oracle,
        per_orientation: per,
    })
}

/// The well-unbalanced orientations: acyclic orientations maximising
/// `<f, L f>`.
pub fn well_unbalanced_search(g: &Multigraph, caps: &Caps) -> Result<(Q, Vec<OrientedSubgraph>)> {
    let c = covering_number_cut(g, caps)?;
    let best = c.per_orientation.iter().map(|p| p.energy.clone()).max().unwrap_or_else(Q::zero);
    let arg = sorted_keys(
        c.per_orientation
            .iter()
            .filter(|p| p.energy == best)
            .map(|p| p.orientation.clone()),
    );
    Ok((best, arg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;
    use crate::rational::q_frac;
    use proptest::prelude::*;

    fn caps() -> Caps {
        Caps::default()
    }

    fn vf(v: &[(i64, i64)]) -> VertexFunction {
        VertexFunction::new(v.iter().map(|&(n, d)| q_frac(n, d)).collect())
    }

    #[test]
    fn laplacian_examples() {
        let k2 = examples::complete(2);
        assert_eq!(laplacian_apply(&k2, &VertexFunction::from_ints(&[1, 0])), VertexFunction::from_ints(&[1, -1]));
        let theta = examples::theta();
        assert_eq!(laplacian_apply(&theta, &vf(&[(0, 1), (-1, 3)])), VertexFunction::from_ints(&[1, -1]));
        let k4 = examples::complete(4);
        assert!(laplacian_apply(&k4, &VertexFunction::from_ints(&[5, 5, 5, 5])).values().iter().all(Zero::is_zero));
        let lp = examples::single_loop();
        assert_eq!(laplacian_apply(&lp, &VertexFunction::from_ints(&[3])), VertexFunction::from_ints(&[0]));
    }

    #[test]
    fn solve_examples() {
        let k2 = examples::complete(2);
        let f = solve_laplacian(&k2, &VertexFunction::from_ints(&[1, -1]), &q_int(1)).unwrap();
        assert_eq!(f, VertexFunction::from_ints(&[0, -1]));
        let theta = examples::theta();
        let f = solve_laplacian(&theta, &VertexFunction::from_ints(&[1, -1]), &q_int(1)).unwrap();
        assert_eq!(f, vf(&[(0, 1), (-1, 3)]));
        let z = solve_laplacian(&theta, &VertexFunction::from_ints(&[0, 0]), &q_int(1)).unwrap();
        assert_eq!(z, VertexFunction::from_ints(&[0, 0]));
        assert!(matches!(
            solve_laplacian(&theta, &VertexFunction::from_ints(&[1, 0]), &q_int(1)),
            Err(Error::Infeasible)
        ));
    }

    #[test]
    fn solve_on_components() {
        // theta plus pendant, bridge removed: components {0,1} and {2}
        let g = examples::theta_pendant();
        let f = solve_laplacian_on(&g, &[0, 1, 2], &VertexFunction::from_ints(&[3, -3, 0]), &q_int(1)).unwrap();
        assert_eq!(f, VertexFunction::from_ints(&[0, -1, 0]));
        assert!(solve_laplacian_on(&g, &[0, 1, 2], &VertexFunction::from_ints(&[1, 0, -1]), &q_int(1)).is_err());
    }

    proptest! {
        #[test]
        fn solve_inverts_apply(f in proptest::collection::vec(-5i64..5, 4), idx in 0usize..4) {
            let g = examples::fixed_suite()[idx + 1].1.clone();
            let n = g.num_vertices();
            let mut vals = f.clone();
            vals.resize(n, 0);
            vals[0] = 0;
            let fv = VertexFunction::from_ints(&vals);
            let c = laplacian_apply(&g, &fv).scale(&q_int(2));
            let back = solve_laplacian(&g, &c, &q_int(2)).unwrap();
            prop_assert_eq!(back, fv);
        }
    }

    #[test]
    fn excess_examples() {
        let theta = examples::theta();
        assert!(excess_feasible(&theta, &ExcessFunction::new(vec![1, -1]), &caps()).unwrap());
        assert!(excess_realizable(&theta, &ExcessFunction::new(vec![1, -1]), &caps()).unwrap());
        assert!(!excess_feasible(&theta, &ExcessFunction::new(vec![3, -3]), &caps()).unwrap());
        let c3 = examples::cycle(3);
        assert!(!excess_feasible(&c3, &ExcessFunction::new(vec![1, -1, 0]), &caps()).unwrap());
        assert!(excess_feasible(&c3, &ExcessFunction::new(vec![0, 0, 0]), &caps()).unwrap());
        assert!(matches!(
            excess_feasible(&examples::path(3), &ExcessFunction::new(vec![0, 0, 0]), &caps()),
            Err(Error::NotTwoEdgeConnected)
        ));
    }

    #[test]
    fn cycle_covering() {
        for n in 3..=8 {
            let c = covering_number_flow(&examples::cycle(n), &caps()).unwrap();
            assert_eq!(c.value, q_frac(n as i64, 4));
            assert!(c.matches_oracle());
            assert!(c.identities_hold());
            assert!(c.closed_form_discrepancy());
        }
    }

    #[test]
    fn theta_covering() {
        let c = covering_number_flow(&examples::theta(), &caps()).unwrap();
        assert_eq!(c.value, q_frac(2, 3));
        assert_eq!(c.oracle, Some(q_frac(2, 3)));
        assert_eq!(c.argmax.len(), 6);
        assert_eq!(c.closed_formula_value, Some(q_frac(4, 3)));
        assert!(c.identities_hold());
        let (min, arg) = well_balanced_search(&examples::theta(), &caps()).unwrap();
        assert_eq!(min, q_frac(1, 3));
        assert_eq!(arg.len(), 6);
    }

    #[test]
    fn eulerian_and_tree() {
        let c4 = examples::cycle(4);
        let (min, arg) = well_balanced_search(&c4, &caps()).unwrap();
        assert!(min.is_zero());
        for d in &arg {
            assert!(flow_potential(&c4, d).unwrap().values().iter().all(Zero::is_zero));
        }
        let tree = examples::path(3);
        let c = covering_number_flow(&tree, &caps()).unwrap();
        assert!(c.value.is_zero());
        assert_eq!(c.argmax, vec![OrientedSubgraph::empty(2)]);
    }

    #[test]
    fn cut_covering_small() {
        let k2 = covering_number_cut(&examples::complete(2), &caps()).unwrap();
        assert_eq!(k2.value, q_frac(1, 4));
        assert!(k2.matches_oracle());
        assert_eq!(k2.bipartite_closed_form, Some(q_frac(1, 2)));
        assert!(k2.closed_form_discrepancy());
        let k3 = covering_number_cut(&examples::complete(3), &caps()).unwrap();
        assert_eq!(k3.value, q_frac(2, 3));
        assert!(k3.matches_oracle());
        assert!(k3.identities_hold());
        assert_eq!(k3.argmax.len(), 6);
        let star = covering_number_cut(&examples::star(2), &caps()).unwrap();
        assert!(star.matches_oracle());
        assert_eq!(star.value, q_frac(1, 2));
    }

    #[test]
    fn local_search_reaches_optimum_on_small_graphs() {
        for (name, g) in examples::fixed_suite() {
            let d = dfs_strong_orientation(&g);
            assert!(graph::is_strongly_connected(&g, &d), "{name}");
            let (_, e) = well_balanced_local_search(&g, &caps(), 100).unwrap();
            let (best, _) = well_balanced_search(&g, &caps()).unwrap();
            assert!(e >= best, "{name}");
        }
    }

    #[test]
    fn bipartite_and_eulerian() {
        assert!(is_bipartite(&examples::cycle(4)));
        assert!(!is_bipartite(&examples::cycle(3)));
        assert!(!is_bipartite(&examples::single_loop()));
        assert!(is_eulerian_graph(&examples::cycle(5)));
        assert!(!is_eulerian_graph(&examples::theta()));
    }
}
