//! Seeded random connected multigraphs and the per-instance structural checks
//! run over them.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::caps::Caps;
use crate::covering;
use crate::cut;
use crate::error::{Error, Result};
use crate::graph::Multigraph;
use crate::orient;
use crate::voronoi::{self, AdjacencyReport, Verification};

/// Shape of the random multigraphs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CorpusParams {
    pub max_vertices: usize,
    pub max_edges: usize,
    pub loop_prob: f64,
    /// Probability that a new edge repeats the endpoints of an earlier one.
    pub parallel_prob: f64,
}

impl Default for CorpusParams {
    fn default() -> Self {
        CorpusParams {
            max_vertices: 5,
            max_edges: 8,
            loop_prob: 0.1,
            parallel_prob: 0.2,
        }
    }
}

fn sample_once(rng: &mut ChaCha8Rng, p: &CorpusParams) -> Result<Multigraph> {
    let n = rng.gen_range(1..=p.max_vertices.max(1));
    let m = rng.gen_range((n - 1).max(1)..=p.max_edges.max(n - 1).max(1));
    let mut edges: Vec<(usize, usize)> = Vec::with_capacity(m);
    for _ in 0..m {
        let e = if n == 1 || rng.gen_bool(p.loop_prob) {
            let v = rng.gen_range(0..n);
            (v, v)
        } else if !edges.is_empty() && rng.gen_bool(p.parallel_prob) {
            edges[rng.gen_range(0..edges.len())]
        } else {
            let u = rng.gen_range(0..n);
            let mut v = rng.gen_range(0..n - 1);
            if v >= u {
                v += 1;
            }
            (u.min(v), u.max(v))
        };
        edges.push(e);
    }
    Multigraph::new(n, &edges)
}

/// One connected multigraph, by rejection.
pub fn random_multigraph(rng: &mut ChaCha8Rng, p: &CorpusParams) -> Multigraph {
    loop {
        match sample_once(rng, p) {
            Ok(g) => return g,
            Err(Error::Disconnected { .. }) => continue,
            Err(e) => panic!("sampler produced an invalid graph: {e}"),
        }
    }
}

/// `count` graphs from a single stream seeded by `seed`, named `r<seed>-<i>`.
pub fn random_corpus(seed: u64, count: usize, p: &CorpusParams) -> Vec<(String, Multigraph)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| (format!("r{seed}-{i}"), random_multigraph(&mut rng, p)))
        .collect()
}

/// Every structural check on one graph.
#[derive(Clone, Debug, Serialize)]
pub struct InstanceCheck {
    pub name: String,
    pub graph: String,
    pub flow: Verification,
    pub cut: Verification,
    pub flow_quotient_counts: Vec<usize>,
    pub cut_quotient_counts: Vec<usize>,
    pub flow_quotient_passed: bool,
    pub cut_quotient_passed: bool,
    pub flow_adjacency: AdjacencyReport,
    pub cut_adjacency: AdjacencyReport,
    /// `2 q(v) = |v|_1`, the Laplacian equations, the energy identities and
    /// `argmax = argmin`, both sides.
    pub identities: bool,
}

impl InstanceCheck {
    pub fn passed(&self) -> bool {
        self.flow.passed()
            && self.cut.passed()
            && self.flow_quotient_passed
            && self.cut_quotient_passed
            && self.flow_adjacency.passed()
            && self.cut_adjacency.passed()
            && self.identities
    }
}

/// Cut-side identities: `2 q(nu) = |nu|_1` and `q(d f) = <f, L f>` for
/// the potential of every acyclic orientation.
pub fn cut_identities(g: &Multigraph, c: &covering::CutCovering) -> bool {
    c.identities_hold()
        && c.per_orientation.iter().all(|o| {
            o.q.clone() * crate::rational::q_int(2) == o.vertex.l1_norm()
                && cut::acyclic_potential(g, &o.orientation).is_ok_and(|f| cut::energy_identity_holds(g, &f))
        })
}

pub fn check_instance(name: &str, g: &Multigraph, radius: i64, caps: &Caps) -> Result<InstanceCheck> {
    let flow = voronoi::verify_flow(g, caps)?;
    let cutv = cut::verify_cut(g, caps)?;
    let fq = voronoi::quotient_face_poset(g, caps)?;
    let cq = cut::quotient_cut_face_poset(g, caps)?;
    let fa = voronoi::delaunay_adjacency_check(g, radius, caps)?;
    let ca = cut::cut_adjacency_check(g, radius, caps)?;
    let fc = covering::covering_number_flow(g, caps)?;
    let cc = covering::covering_number_cut(g, caps)?;
    let sc = orient::enumerate_sc(g, caps)?;
    let cac = orient::enumerate_cac(g, caps)?;
    let identities = fc.identities_hold()
        && !fc.lower_bound
        && fc.matches_oracle()
        && cc.matches_oracle()
        && cut_identities(g, &cc)
        && sc.poset.len() == flow.poset_size
        && cac.poset.len() == cutv.poset_size;
    Ok(InstanceCheck {
        name: name.to_string(),
        graph: g.to_text(),
        flow_quotient_counts: fq.class_counts(),
        cut_quotient_counts: cq.class_counts(),
        flow_quotient_passed: fq.passed(),
        cut_quotient_passed: cq.passed(),
        flow,
        cut: cutv,
        flow_adjacency: fa,
        cut_adjacency: ca,
        identities,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph;

    #[test]
    fn corpus_is_reproducible_and_within_bounds() {
        let p = CorpusParams::default();
        let a = random_corpus(7, 40, &p);
        let b = random_corpus(7, 40, &p);
        assert_eq!(a, b);
        assert_ne!(a, random_corpus(8, 40, &p));
        for (_, g) in &a {
            assert!(g.num_vertices() <= 5 && g.num_edges() <= 8);
            assert_eq!(g.components(&g.all_edges()).len(), 1);
        }
        assert!(a.iter().any(|(_, g)| !g.loops().is_empty()));
        assert!(a.iter().any(|(_, g)| graph::genus(g) >= 2));
    }

    #[test]
    fn loop_only_graphs_for_one_vertex() {
        let p = CorpusParams {
            max_vertices: 1,
            ..CorpusParams::default()
        };
        for (_, g) in random_corpus(1, 10, &p) {
            assert_eq!(g.loops().len(), g.num_edges());
        }
    }
}
