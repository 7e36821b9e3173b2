//! The combinatorial posets: strongly connected orientations of subgraphs
//! and coherent acyclic orientations of cut subgraphs, with their quotients.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use crate::caps::Caps;
use crate::cut;
use crate::error::{check_cap, Result};
use crate::flow::EdgeVector;
use crate::graph::{self, Dir, Multigraph, OrientedSubgraph, UnionFind};
use crate::poset::GradedPoset;
use crate::rational;

/// A poset whose elements are orientations, keyed by [`OrientedSubgraph::key`].
#[derive(Clone, Debug)]
pub struct OrientationPoset {
    pub poset: GradedPoset,
    pub elements: Vec<OrientedSubgraph>,
}

/// Quotient of an [`OrientationPoset`]: one representative per class.
#[derive(Clone, Debug)]
pub struct QuotientPoset {
    pub poset: GradedPoset,
    /// Class index of every element of the original poset.
    pub class_of: Vec<usize>,
    /// Members of each class, as indices into the original poset.
    pub members: Vec<Vec<usize>>,
}

fn canonical_sort(elements: &mut [OrientedSubgraph]) {
    elements.sort_by_key(|d| (d.len(), d.key()));
}

/// Orders by reverse inclusion of arc sets: `d < d'` iff `arcs(d')` is a
/// proper subset of `arcs(d)`. The empty orientation is the maximum.
fn reverse_inclusion_poset(elements: Vec<OrientedSubgraph>, grades: Vec<i64>) -> OrientationPoset {
    let keys = elements.iter().map(OrientedSubgraph::key).collect();
    let poset = GradedPoset::from_strict_order(keys, grades, |a, b| {
        elements[b].len() < elements[a].len() && elements[b].is_subset_of(&elements[a])
    });
    OrientationPoset { poset, elements }
}

/// All strongly connected orientations of subgraphs, graded by
/// `genus(g) - genus(subgraph)`.
pub fn enumerate_sc(g: &Multigraph, caps: &Caps) -> Result<OrientationPoset> {
    let m = g.num_edges();
    check_cap("edges for 3^m orientation scan", m as u128, caps.max_edges as u128)?;
    let total = 3u64.pow(m as u32);
    let mut elements: Vec<OrientedSubgraph> = (0..total)
        .into_par_iter()
        .filter_map(|code| {
            let d = decode_ternary(code, m);
            graph::is_strongly_connected(g, &d).then_some(d)
        })
        .collect();
    check_cap("poset elements", elements.len() as u128, caps.max_poset as u128)?;
    canonical_sort(&mut elements);
    let total_genus = graph::genus(g) as i64;
    let grades = elements
        .iter()
        .map(|d| total_genus - graph::subgraph_genus(g, &d.edge_set()).expect("edges in range") as i64)
        .collect();
    Ok(reverse_inclusion_poset(elements, grades))
}

fn decode_ternary(mut code: u64, m: usize) -> OrientedSubgraph {
    let dirs = (0..m)
        .map(|_| {
            let digit = code % 3;
            code /= 3;
            match digit {
                0 => None,
                1 => Some(Dir::Forward),
                _ => Some(Dir::Backward),
            }
        })
        .collect();
    OrientedSubgraph::from_dirs(dirs)
}

/// Orientation induced by a block labelling: edges between blocks point from
/// the lower label to the higher one, edges inside a block are dropped.
pub fn orientation_from_blocks(g: &Multigraph, block: &[usize]) -> OrientedSubgraph {
    OrientedSubgraph::from_dirs(
        g.edges()
            .iter()
            .map(|e| match block[e.u].cmp(&block[e.v]) {
                std::cmp::Ordering::Less => Some(Dir::Forward),
                std::cmp::Ordering::Greater => Some(Dir::Backward),
                std::cmp::Ordering::Equal => None,
            })
            .collect(),
    )
}

/// Every ordered partition of the vertex set, as block labels `0..s`.
pub fn ordered_partitions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut labels = vec![0usize; n];
    loop {
        let mut used = vec![false; n.max(1)];
        for &l in &labels {
            used[l] = true;
        }
        let s = used.iter().take_while(|&&u| u).count();
        if used.iter().filter(|&&u| u).count() == s {
            out.push(labels.clone());
        }
        let Some(i) = (0..n).find(|&i| labels[i] + 1 < n) else {
            break;
        };
        labels[i] += 1;
        for l in &mut labels[..i] {
            *l = 0;
        }
    }
    out
}

/// Rank of the bond vectors whose support lies inside `d`.
pub fn bond_rank_inside(bonds: &[cut::Bond], d: &OrientedSubgraph) -> usize {
    let rows: Vec<Vec<rational::Q>> = bonds
        .iter()
        .filter(|b| crate::flow::support(&b.vector).is_subset_of(d))
        .map(|b| b.vector.values().to_vec())
        .collect();
    rational::rank(&rows)
}

/// All coherent acyclic orientations of cut subgraphs, graded by
/// `(n - 1) - rank(bonds inside the orientation)`.
pub fn enumerate_cac(g: &Multigraph, caps: &Caps) -> Result<OrientationPoset> {
    let n = g.num_vertices();
    check_cap("vertices for ordered partitions", n as u128, caps.max_vertices as u128)?;
    let keys: BTreeSet<OrientedSubgraph> = ordered_partitions(n)
        .into_par_iter()
        .map(|blocks| orientation_from_blocks(g, &blocks))
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    let mut elements: Vec<OrientedSubgraph> = keys.into_iter().collect();
    check_cap("poset elements", elements.len() as u128, caps.max_poset as u128)?;
    canonical_sort(&mut elements);
    let bonds = cut::bonds(g, caps)?;
    let top = n as i64 - 1;
    let grades = elements
        .iter()
        .map(|d| top - bond_rank_inside(&bonds, d) as i64)
        .collect();
    Ok(reverse_inclusion_poset(elements, grades))
}

fn is_eulerian_arc_set(g: &Multigraph, arcs: &[graph::Arc]) -> bool {
    let mut bal = vec![0i64; g.num_vertices()];
    for &a in arcs {
        bal[g.tail(a)] += 1;
        bal[g.head(a)] -= 1;
    }
    bal.iter().all(|&b| b == 0)
}

/// Same edge set and the same out-degree at every vertex. Checked against
/// the equivalent condition that the arcs where they disagree form an
/// Eulerian orientation.
pub fn sc_equivalent(g: &Multigraph, d1: &OrientedSubgraph, d2: &OrientedSubgraph) -> bool {
    if d1.edge_set() != d2.edge_set() {
        return false;
    }
    let by_degree = d1.out_degrees(g) == d2.out_degrees(g);
    let by_reversal = is_eulerian_arc_set(g, &d1.disagreement(d2));
    assert_eq!(
        by_degree, by_reversal,
        "out-degree and Eulerian-reversal characterisations disagree for {d1} / {d2}"
    );
    by_degree
}

/// Oriented cut `E(C, V \ C)`: every non-loop edge between `C` and its
/// complement, directed out of `C`.
pub fn oriented_cut(g: &Multigraph, side: &[bool]) -> OrientedSubgraph {
    OrientedSubgraph::from_dirs(
        g.edges()
            .iter()
            .map(|e| match (side[e.u], side[e.v]) {
                (true, false) => Some(Dir::Forward),
                (false, true) => Some(Dir::Backward),
                _ => None,
            })
            .collect(),
    )
}

/// Same edge set and the arcs where they disagree (read in `d1`) form an
/// oriented cut of `g`.
///
/// This relation is not transitive in general (already on `C4`);
/// [`quotient_cac`] uses its transitive closure.
pub fn cac_equivalent(g: &Multigraph, d1: &OrientedSubgraph, d2: &OrientedSubgraph) -> bool {
    if d1.edge_set() != d2.edge_set() {
        return false;
    }
    let diff = OrientedSubgraph::from_arcs(d1.num_edges_host(), d1.disagreement(d2))
        .expect("disagreement arcs are distinct edges");
    let n = g.num_vertices();
    (0u64..(1 << n)).any(|mask| {
        let side: Vec<bool> = (0..n).map(|v| mask >> v & 1 == 1).collect();
        oriented_cut(g, &side) == diff
    })
}

fn quotient_by_classes(p: &OrientationPoset, class_of: Vec<usize>) -> QuotientPoset {
    let k = class_of.iter().max().map_or(0, |&c| c + 1);
    let mut members = vec![Vec::new(); k];
    for (x, &c) in class_of.iter().enumerate() {
        members[c].push(x);
    }
    let keys = members
        .iter()
        .map(|ms| {
            ms.iter()
                .map(|&x| p.elements[x].key())
                .collect::<Vec<_>>()
                .join("|")
        })
        .collect();
    let poset = p.poset.quotient(&class_of, keys);
    QuotientPoset {
        poset,
        class_of,
        members,
    }
}

/// Renumbers class representatives in order of first appearance.
fn compact(mut uf: UnionFind, n: usize) -> Vec<usize> {
    let mut ids: BTreeMap<usize, usize> = BTreeMap::new();
    (0..n)
        .map(|x| {
            let r = uf.find(x);
            let next = ids.len();
            *ids.entry(r).or_insert(next)
        })
        .collect()
}

pub fn quotient_sc(g: &Multigraph, p: &OrientationPoset) -> QuotientPoset {
    let n = p.elements.len();
    let mut uf = UnionFind::new(n);
    let mut by_signature: BTreeMap<(Vec<usize>, Vec<usize>), usize> = BTreeMap::new();
    for (x, d) in p.elements.iter().enumerate() {
        let sig = (d.edge_set(), d.out_degrees(g));
        match by_signature.get(&sig) {
            Some(&r) => {
                assert!(sc_equivalent(g, &p.elements[r], d));
                uf.union(r, x);
            }
            None => {
                by_signature.insert(sig, x);
            }
        }
    }
    quotient_by_classes(p, compact(uf, n))
}

pub fn quotient_cac(g: &Multigraph, p: &OrientationPoset) -> QuotientPoset {
    let n = p.elements.len();
    let mut uf = UnionFind::new(n);
    let mut by_edges: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for (x, d) in p.elements.iter().enumerate() {
        by_edges.entry(d.edge_set()).or_default().push(x);
    }
    for group in by_edges.values() {
        for (i, &a) in group.iter().enumerate() {
            for &b in &group[i + 1..] {
                if cac_equivalent(g, &p.elements[a], &p.elements[b]) {
                    uf.union(a, b);
                }
            }
        }
    }
    quotient_by_classes(p, compact(uf, n))
}

/// Supports of all integer tensions, enumerated from vertex potentials
/// `f: V -> {0..n-1}`. Used to cross-check [`enumerate_cac`].
pub fn tension_supports(g: &Multigraph) -> BTreeSet<OrientedSubgraph> {
    let n = g.num_vertices();
    let mut out = BTreeSet::new();
    let mut f = vec![0i64; n];
    loop {
        let fv = cut::VertexFunction::from_ints(&f);
        let t: EdgeVector = cut::coboundary(g, &fv);
        out.insert(crate::flow::support(&t));
        let Some(i) = (0..n).find(|&i| f[i] + 1 < n as i64) else {
            break;
        };
        f[i] += 1;
        for x in &mut f[..i] {
            *x = 0;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;
    use crate::poset::poset_isomorphic;

    fn caps() -> Caps {
        Caps::default()
    }

    #[test]
    fn sc_theta() {
        let p = enumerate_sc(&examples::theta(), &caps()).unwrap();
        assert_eq!(p.poset.len(), 13);
        assert_eq!(p.poset.grade_counts(), vec![6, 6, 1]);
        let top = p.poset.maxima();
        assert_eq!(top.len(), 1);
        assert!(p.elements[top[0]].is_empty());
        assert_eq!(p.poset.grades()[top[0]], 2);
        assert!(p.poset.is_graded());
    }

    #[test]
    fn sc_small_cases() {
        let lp = enumerate_sc(&examples::single_loop(), &caps()).unwrap();
        assert_eq!(lp.poset.len(), 3);
        let tree = enumerate_sc(&examples::path(4), &caps()).unwrap();
        assert_eq!(tree.poset.len(), 1);
        assert_eq!(tree.poset.grades(), &[0]);
    }

    #[test]
    fn sc_grade_zero_are_strong_orientations_minus_bridges() {
        for (name, g) in examples::fixed_suite() {
            let p = enumerate_sc(&g, &caps()).unwrap();
            let br = graph::bridges(&g);
            let non_bridge: Vec<usize> = (0..g.num_edges()).filter(|e| !br.contains(e)).collect();
            let bottom: BTreeSet<String> = (0..p.poset.len())
                .filter(|&x| p.poset.grades()[x] == 0)
                .map(|x| p.elements[x].key())
                .collect();
            let mut expected = BTreeSet::new();
            for mask in 0u32..(1 << non_bridge.len()) {
                let mut d = OrientedSubgraph::empty(g.num_edges());
                for (i, &e) in non_bridge.iter().enumerate() {
                    d.set(e, Some(if mask >> i & 1 == 1 { Dir::Forward } else { Dir::Backward }));
                }
                if graph::is_strongly_connected(&g, &d) {
                    expected.insert(d.key());
                }
            }
            assert_eq!(bottom, expected, "{name}");
            assert!(p.poset.is_graded(), "{name}");
        }
    }

    #[test]
    fn sc_cap() {
        let tight = Caps {
            max_edges: 4,
            ..Caps::default()
        };
        assert!(enumerate_sc(&examples::complete(4), &tight).is_err());
    }

    #[test]
    fn cac_examples() {
        let k3 = enumerate_cac(&examples::complete(3), &caps()).unwrap();
        assert_eq!(k3.poset.len(), 13);
        assert_eq!(k3.poset.grade_counts(), vec![6, 6, 1]);
        assert_eq!(enumerate_cac(&examples::complete(2), &caps()).unwrap().poset.len(), 3);
        assert_eq!(enumerate_cac(&examples::single_loop(), &caps()).unwrap().poset.len(), 1);
    }

    #[test]
    fn theta_sc_matches_k3_cac() {
        let sc = enumerate_sc(&examples::theta(), &caps()).unwrap();
        let cac = enumerate_cac(&examples::complete(3), &caps()).unwrap();
        assert!(poset_isomorphic(&sc.poset, &cac.poset, 10_000).unwrap().is_some());
    }

    #[test]
    fn cac_equals_tension_supports() {
        let mut graphs = examples::fixed_suite();
        graphs.push(("star3", examples::star(3)));
        graphs.push(("P3", examples::path(3)));
        for (name, g) in graphs {
            if g.num_vertices() > 5 {
                continue;
            }
            let p = enumerate_cac(&g, &caps()).unwrap();
            let ours: BTreeSet<OrientedSubgraph> = p.elements.iter().cloned().collect();
            assert_eq!(ours, tension_supports(&g), "{name}");
        }
    }

    #[test]
    fn sc_equivalence_examples() {
        let theta = examples::theta();
        let p = enumerate_sc(&theta, &caps()).unwrap();
        let strong: Vec<&OrientedSubgraph> = p.elements.iter().filter(|d| d.len() == 3).collect();
        assert_eq!(strong.len(), 6);
        // the six strong orientations split 3/3 by out-degree at vertex 0
        let mut pairs = 0;
        for a in &strong {
            for b in &strong {
                if sc_equivalent(&theta, a, b) {
                    pairs += 1;
                }
            }
        }
        assert_eq!(pairs, 18);
        let circ = p.elements.iter().find(|d| d.len() == 2).unwrap();
        assert!(!sc_equivalent(&theta, circ, strong[0]));
        assert!(sc_equivalent(&theta, circ, circ));
    }

    fn relation(g: &Multigraph, p: &OrientationPoset, eq: fn(&Multigraph, &OrientedSubgraph, &OrientedSubgraph) -> bool) -> Vec<Vec<bool>> {
        let n = p.elements.len();
        (0..n)
            .map(|a| (0..n).map(|b| eq(g, &p.elements[a], &p.elements[b])).collect())
            .collect()
    }

    fn first_intransitive(rel: &[Vec<bool>]) -> Option<(usize, usize, usize)> {
        let n = rel.len();
        for a in 0..n {
            for b in 0..n {
                if !rel[a][b] {
                    continue;
                }
                if let Some(c) = (0..n).find(|&c| rel[b][c] && !rel[a][c]) {
                    return Some((a, b, c));
                }
            }
        }
        None
    }

    #[test]
    fn sc_equivalence_is_an_equivalence_relation() {
        for (name, g) in examples::fixed_suite() {
            if g.num_edges() > 6 {
                continue;
            }
            let rel = relation(&g, &enumerate_sc(&g, &caps()).unwrap(), sc_equivalent);
            for a in 0..rel.len() {
                assert!(rel[a][a], "{name}");
                for b in 0..rel.len() {
                    assert_eq!(rel[a][b], rel[b][a], "{name}");
                }
            }
            assert_eq!(first_intransitive(&rel), None, "{name}");
        }
    }

    #[test]
    fn cac_relation_is_symmetric_but_not_always_transitive() {
        for (name, g) in examples::fixed_suite() {
            if g.num_edges() > 6 {
                continue;
            }
            let rel = relation(&g, &enumerate_cac(&g, &caps()).unwrap(), cac_equivalent);
            for a in 0..rel.len() {
                assert!(rel[a][a], "{name}");
                for b in 0..rel.len() {
                    assert_eq!(rel[a][b], rel[b][a], "{name}");
                }
            }
        }
        // C4: flipping the cut around {0} and then the cut around {2} is
        // not a single cut flip
        let c4 = examples::cycle(4);
        let p = enumerate_cac(&c4, &caps()).unwrap();
        let (a, b, c) = first_intransitive(&relation(&c4, &p, cac_equivalent)).expect("C4 is intransitive");
        assert!(cac_equivalent(&c4, &p.elements[a], &p.elements[b]));
        assert!(cac_equivalent(&c4, &p.elements[b], &p.elements[c]));
        assert!(!cac_equivalent(&c4, &p.elements[a], &p.elements[c]));
        // complete graphs have no induced path of length two
        let k4 = examples::complete(4);
        let rel = relation(&k4, &enumerate_cac(&k4, &caps()).unwrap(), cac_equivalent);
        assert_eq!(first_intransitive(&rel), None);
    }

    #[test]
    fn quotient_counts() {
        let theta = examples::theta();
        let sc = enumerate_sc(&theta, &caps()).unwrap();
        let q = quotient_sc(&theta, &sc);
        assert_eq!(q.poset.len(), 6);
        assert_eq!(q.poset.grade_counts(), vec![2, 3, 1]);
        let lp = examples::single_loop();
        assert_eq!(quotient_sc(&lp, &enumerate_sc(&lp, &caps()).unwrap()).poset.len(), 2);
        let tree = examples::path(3);
        assert_eq!(quotient_sc(&tree, &enumerate_sc(&tree, &caps()).unwrap()).poset.len(), 1);

        let k3 = examples::complete(3);
        let cac = enumerate_cac(&k3, &caps()).unwrap();
        let qc = quotient_cac(&k3, &cac);
        assert_eq!(qc.poset.grade_counts(), vec![2, 3, 1]);
        let k2 = examples::complete(2);
        let qk2 = quotient_cac(&k2, &enumerate_cac(&k2, &caps()).unwrap());
        assert_eq!(qk2.poset.grade_counts(), vec![1, 1]);
    }

    #[test]
    fn quotient_maps_preserve_order() {
        for (name, g) in examples::fixed_suite() {
            if g.num_edges() > 6 {
                continue;
            }
            let sc = enumerate_sc(&g, &caps()).unwrap();
            let q = quotient_sc(&g, &sc);
            for &(a, b) in sc.poset.covers() {
                let (ca, cb) = (q.class_of[a], q.class_of[b]);
                assert!(ca == cb || q.poset.leq(ca, cb), "{name}");
            }
            assert!(q.members.iter().all(|m| !m.is_empty()));
        }
    }

    #[test]
    fn cac_edge_set_mismatch() {
        let k3 = examples::complete(3);
        let a = OrientedSubgraph::from_key("++.").unwrap();
        let b = OrientedSubgraph::from_key("+++").unwrap();
        assert!(!cac_equivalent(&k3, &a, &b));
        assert!(!sc_equivalent(&k3, &a, &b));
    }
}
