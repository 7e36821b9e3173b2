//! The Voronoi cell of the flow lattice: circuit halfspaces, vertices from
//! strongly connected orientations, the face poset built from them, and the
//! pieces shared with the cut side (coordinate frames, translation
//! quotients, midpoint checks).

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::caps::Caps;
use crate::cut;
use crate::error::{check_cap, Error, Result};
use crate::flow::{self, EdgeVector};
use crate::graph::{self, Dir, EdgeId, Multigraph, OrientedSubgraph};
use crate::orient::{self, OrientationPoset, QuotientPoset};
use crate::polytope::{self, FaceLattice, Halfspace, RationalPolytope};
use crate::poset::{poset_isomorphic, verify_isomorphism, GradedPoset};
use crate::rational::{self, q_int, Q};

enum FrameKind {
    /// Coordinates are the values on the cotree edges.
    Flow { cotree: Vec<EdgeId> },
    /// Coordinates are potentials relative to the last vertex.
    Cut { graph: Multigraph },
}

fn integral(basis: &[EdgeVector]) -> Vec<Vec<i64>> {
    basis
        .iter()
        .map(|b| b.to_ints().expect("lattice bases are integral"))
        .collect()
}

/// A Z-basis of one of the two lattices together with its Gram matrix.
pub struct LatticeFrame {
    pub basis: Vec<EdgeVector>,
    pub gram: Vec<Vec<Q>>,
    int_basis: Vec<Vec<i64>>,
    m: usize,
    kind: FrameKind,
}

impl LatticeFrame {
    /// Fundamental circuit flows.
    pub fn flow(g: &Multigraph) -> Self {
        let basis = flow::flow_basis(g);
        LatticeFrame {
            gram: flow::gram(&basis),
            int_basis: integral(&basis),
            basis,
            m: g.num_edges(),
            kind: FrameKind::Flow {
                cotree: graph::cotree(g),
            },
        }
    }

    /// `d(chi_v)` for every vertex but the last.
    pub fn cut(g: &Multigraph) -> Self {
        let n = g.num_vertices();
        let basis: Vec<EdgeVector> = (0..n.saturating_sub(1))
            .map(|v| cut::cut_element(g, &[v]).expect("vertex in range"))
            .collect();
        LatticeFrame {
            gram: flow::gram(&basis),
            int_basis: integral(&basis),
            basis,
            m: g.num_edges(),
            kind: FrameKind::Cut { graph: g.clone() },
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of a vector of the spanned space.
    pub fn coords(&self, x: &EdgeVector) -> Vec<Q> {
        match &self.kind {
            FrameKind::Flow { cotree } => cotree.iter().map(|&e| x.get(e).clone()).collect(),
            FrameKind::Cut { graph } => {
                let h = cut::potential(graph, x);
                let n = h.len();
                (0..n.saturating_sub(1)).map(|v| &h[v] - &h[n - 1]).collect()
            }
        }
    }

    pub fn from_coords(&self, c: &[Q]) -> EdgeVector {
        let mut values = vec![Q::zero(); self.m];
        for (b, k) in self.basis.iter().zip(c) {
            if k.is_zero() {
                continue;
            }
            for (v, x) in values.iter_mut().zip(b.values()) {
                *v += k * x;
            }
        }
        EdgeVector::new(values)
    }

    pub fn from_int_coords(&self, c: &[i64]) -> EdgeVector {
        EdgeVector::from_ints(&self.int_combination(c))
    }

    /// Edge values of the integer combination `sum c_i b_i`.
    pub fn int_combination(&self, c: &[i64]) -> Vec<i64> {
        let mut values = vec![0i64; self.m];
        for (b, &k) in self.int_basis.iter().zip(c) {
            if k != 0 {
                for (v, x) in values.iter_mut().zip(b) {
                    *v += k * x;
                }
            }
        }
        values
    }

    fn gram_int(&self) -> Vec<Vec<BigInt>> {
        self.gram
            .iter()
            .map(|row| row.iter().map(|x| x.to_integer()).collect())
            .collect()
    }

    /// `{x : 2 <x, lambda> <= q(lambda)}` for every generator, in coordinates.
    pub fn voronoi_polytope(&self, generators: &[EdgeVector]) -> RationalPolytope {
        let gram = self.gram_int();
        let halfspaces = generators
            .iter()
            .map(|lambda| {
                let c: Vec<BigInt> = self.coords(lambda).iter().map(Q::to_integer).collect();
                let normal = gram
                    .iter()
                    .map(|row| row.iter().zip(&c).fold(BigInt::zero(), |acc, (a, b)| acc + a * b) * 2)
                    .collect();
                Halfspace {
                    normal,
                    offset: flow::q(lambda).to_integer(),
                }
            })
            .collect();
        RationalPolytope::new(self.dim(), halfspaces)
    }
}

/// Circuit flows of all directed circuits.
pub fn xi1(g: &Multigraph, caps: &Caps) -> Result<Vec<EdgeVector>> {
    Ok(graph::enumerate_circuits(g, caps.max_circuits)?
        .iter()
        .map(|c| EdgeVector::from_circuit(c, g.num_edges()))
        .collect())
}

/// The cell in cycle-basis coordinates, one halfspace per element of
/// [`xi1`] (same order).
pub fn voronoi_halfspaces(g: &Multigraph, caps: &Caps) -> Result<(RationalPolytope, Vec<EdgeVector>)> {
    let xi = xi1(g, caps)?;
    check_cap("halfspaces", xi.len() as u128, caps.max_halfspaces as u128)?;
    Ok((LatticeFrame::flow(g).voronoi_polytope(&xi), xi))
}

/// Strongly connected orientations of `g` minus its bridges.
pub fn strong_orientations(g: &Multigraph, caps: &Caps) -> Result<Vec<OrientedSubgraph>> {
    let br = graph::bridges(g);
    let edges: Vec<EdgeId> = (0..g.num_edges()).filter(|e| !br.contains(e)).collect();
    check_cap("edges for 2^m orientation scan", edges.len() as u128, caps.max_edges as u128)?;
    let out: Vec<OrientedSubgraph> = (0u64..(1u64 << edges.len()))
        .into_par_iter()
        .filter_map(|mask| {
            let mut d = OrientedSubgraph::empty(g.num_edges());
            for (i, &e) in edges.iter().enumerate() {
                d.set(e, Some(if mask >> i & 1 == 1 { Dir::Backward } else { Dir::Forward }));
            }
            graph::is_strongly_connected(g, &d).then_some(d)
        })
        .collect();
    Ok(out)
}

fn check_strong_orientation(g: &Multigraph, d: &OrientedSubgraph) -> Result<()> {
    if d.num_edges_host() != g.num_edges() {
        return Err(Error::HostMismatch(d.num_edges_host(), g.num_edges()));
    }
    let br = graph::bridges(g);
    for e in 0..g.num_edges() {
        if br.contains(&e) == d.dir(e).is_some() {
            return Err(Error::NotFullOrientation(format!(
                "edge {e} must be {}",
                if br.contains(&e) { "unoriented (bridge)" } else { "oriented" }
            )));
        }
    }
    if !graph::is_strongly_connected(g, d) {
        return Err(Error::NotStronglyConnected);
    }
    Ok(())
}

/// The vertex `v^D` of the cell: the solution of `2 <x, x^C> = |C|` over
/// the circuits `C` inside `d`, checked against every circuit inequality.
pub fn vertex_of_orientation(g: &Multigraph, d: &OrientedSubgraph, xi: &[EdgeVector]) -> Result<EdgeVector> {
    check_strong_orientation(g, d)?;
    vertex_in_frame(&LatticeFrame::flow(g), d, xi)
}

fn vertex_in_frame(frame: &LatticeFrame, d: &OrientedSubgraph, xi: &[EdgeVector]) -> Result<EdgeVector> {
    let inside: Vec<bool> = xi.iter().map(|l| flow::support(l).is_subset_of(d)).collect();
    let coords = if frame.dim() == 0 {
        Vec::new()
    } else {
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for (l, _) in xi.iter().zip(&inside).filter(|(_, &i)| i) {
            let c = frame.coords(l);
            rows.push(
                frame
                    .gram
                    .iter()
                    .map(|row| rational::dot(row, &c) * q_int(2))
                    .collect::<Vec<_>>(),
            );
            rhs.push(flow::q(l));
        }
        rational::solve(&rows, &rhs)
            .ok_or_else(|| Error::Invariant(format!("circuit equalities of {d} are not uniquely solvable")))?
    };
    let v = frame.from_coords(&coords);
    for (l, &ins) in xi.iter().zip(&inside) {
        let lhs = flow::inner_product(&v, l)? * q_int(2);
        let rhs = flow::q(l);
        if lhs > rhs || ins != (lhs == rhs) {
            return Err(Error::Invariant(format!("circuit inequality fails at {d}")));
        }
    }
    Ok(v)
}

/// A vertex of a cell together with the orientation that produced it.
#[derive(Clone, Debug, Serialize)]
pub struct VertexPoint {
    pub orientation: OrientedSubgraph,
    pub edge: EdgeVector,
    #[serde(skip)]
    pub coords: Vec<Q>,
}

/// A face built as the hull of the vertices of all full orientations
/// extending `orientation`.
#[derive(Clone, Debug, Serialize)]
pub struct FaceRecord {
    pub orientation: OrientedSubgraph,
    pub vertex_ids: Vec<usize>,
    /// Generators whose support lies inside `orientation`.
    pub active: Vec<usize>,
    pub dim: usize,
}

/// Faces indexed like the orientation poset they were built from.
#[derive(Clone, Debug)]
pub struct FacePoset {
    pub poset: GradedPoset,
    pub vertices: Vec<VertexPoint>,
    pub faces: Vec<FaceRecord>,
}

impl FacePoset {
    pub fn f_vector(&self) -> Vec<usize> {
        let top = self.faces.iter().map(|f| f.dim).max().unwrap_or(0);
        let mut f = vec![0; top + 1];
        for face in &self.faces {
            f[face.dim] += 1;
        }
        f
    }
}

fn bitset(ids: &[usize], n: usize) -> Vec<u64> {
    let mut s = vec![0u64; n.div_ceil(64).max(1)];
    for &i in ids {
        s[i / 64] |= 1 << (i % 64);
    }
    s
}

/// Builds the face of every element of `p` as the hull of the vertices whose
/// orientation extends it. `tight(d)` gives the generators active on the face
/// and its expected dimension; both the expected dimension and the grade in
/// `p` must match the affine dimension of the hull.
pub(crate) fn build_face_poset<F>(p: &OrientationPoset, vertices: Vec<VertexPoint>, tight: F) -> Result<FacePoset>
where
    F: Fn(&OrientedSubgraph) -> (Vec<usize>, i64) + Sync,
{
    let faces: Vec<FaceRecord> = p
        .elements
        .par_iter()
        .enumerate()
        .map(|(x, d)| {
            let ids: Vec<usize> = (0..vertices.len())
                .filter(|&v| d.is_subset_of(&vertices[v].orientation))
                .collect();
            let pts: Vec<Vec<Q>> = ids.iter().map(|&v| vertices[v].coords.clone()).collect();
            let dim = rational::affine_dimension(&pts);
            let (active, expected) = tight(d);
            if dim < 0 || dim as i64 != expected || expected != p.poset.grades()[x] {
                return Err(Error::Invariant(format!(
                    "face of {d}: hull dimension {dim}, expected {expected}, grade {}",
                    p.poset.grades()[x]
                )));
            }
            Ok(FaceRecord {
                orientation: d.clone(),
                vertex_ids: ids,
                active,
                dim: dim as usize,
            })
        })
        .collect::<Result<_>>()?;
    let sets: Vec<Vec<u64>> = faces.iter().map(|f| bitset(&f.vertex_ids, vertices.len())).collect();
    let distinct: BTreeSet<&Vec<u64>> = sets.iter().collect();
    if distinct.len() != sets.len() {
        return Err(Error::Invariant("two orientations give the same face".into()));
    }
    let poset = GradedPoset::from_strict_order(
        p.poset.keys().to_vec(),
        faces.iter().map(|f| f.dim as i64).collect(),
        |a, b| {
            faces[a].vertex_ids.len() < faces[b].vertex_ids.len()
                && sets[a].iter().zip(&sets[b]).all(|(x, y)| x & !y == 0)
        },
    );
    Ok(FacePoset { poset, vertices, faces })
}

/// Face poset of the flow cell built from strongly connected orientations.
pub fn face_poset_combinatorial(g: &Multigraph, caps: &Caps) -> Result<FacePoset> {
    let sc = orient::enumerate_sc(g, caps)?;
    let xi = xi1(g, caps)?;
    let frame = LatticeFrame::flow(g);
    let vertices: Vec<VertexPoint> = strong_orientations(g, caps)?
        .into_par_iter()
        .map(|d| {
            let edge = vertex_in_frame(&frame, &d, &xi)?;
            Ok(VertexPoint {
                coords: frame.coords(&edge),
                orientation: d,
                edge,
            })
        })
        .collect::<Result<_>>()?;
    let supports: Vec<OrientedSubgraph> = xi.iter().map(flow::support).collect();
    let genus = graph::genus(g) as i64;
    build_face_poset(&sc, vertices, |d| {
        let active = (0..supports.len()).filter(|&i| supports[i].is_subset_of(d)).collect();
        let sub = graph::subgraph_genus(g, &d.edge_set()).expect("edges in range") as i64;
        (active, genus - sub)
    })
}

/// `phi(F)`: the union of the supports of the generators tight on `F`.
/// Fails if two of them orient an edge in opposite directions.
pub fn phi_of_faces(m: usize, lattice: &FaceLattice, supports: &[OrientedSubgraph]) -> Result<Vec<OrientedSubgraph>> {
    lattice
        .faces
        .iter()
        .map(|f| {
            f.active.iter().try_fold(OrientedSubgraph::empty(m), |acc, &a| {
                acc.union(&supports[a])
                    .map_err(|_| Error::Invariant(format!("tight supports conflict on face {:?}", f.vertex_ids)))
            })
        })
        .collect()
}

/// Brute-force face lattice of the flow cell with `phi` of every face.
pub fn flow_face_lattice_geometric(
    g: &Multigraph,
    caps: &Caps,
) -> Result<(FaceLattice, Vec<OrientedSubgraph>, Vec<EdgeVector>)> {
    let (p, xi) = voronoi_halfspaces(g, caps)?;
    let lattice = polytope::face_lattice_bruteforce(&p, caps)?;
    let supports: Vec<OrientedSubgraph> = xi.iter().map(flow::support).collect();
    let phi = phi_of_faces(g.num_edges(), &lattice, &supports)?;
    Ok((lattice, phi, xi))
}

/// Outcome of the face-poset checks on one graph, for either lattice.
#[derive(Clone, Debug, Serialize)]
pub struct Verification {
    pub side: &'static str,
    pub f_vector: Vec<usize>,
    pub poset_size: usize,
    /// Generic isomorphism test between the brute-force lattice and the
    /// orientation poset.
    pub oracle_isomorphic: bool,
    /// `phi` itself is an order isomorphism onto the orientation poset.
    pub phi_is_isomorphism: bool,
    /// The hull construction reproduces the orientation poset exactly.
    pub combinatorial_matches: bool,
    pub vertices_match: bool,
    pub grading_matches_codimension: bool,
    pub consistency: bool,
    pub phi_witness: Vec<(String, String)>,
    pub vertices: Vec<Vec<String>>,
}

impl Verification {
    pub fn passed(&self) -> bool {
        self.oracle_isomorphic
            && self.phi_is_isomorphism
            && self.combinatorial_matches
            && self.vertices_match
            && self.grading_matches_codimension
            && self.consistency
    }
}

pub(crate) struct SideData<'a> {
    pub side: &'static str,
    pub frame: &'a LatticeFrame,
    pub lattice: &'a FaceLattice,
    pub phi: &'a [OrientedSubgraph],
    pub supports: &'a [OrientedSubgraph],
    pub orientations: &'a OrientationPoset,
    pub combinatorial: &'a FacePoset,
}

pub(crate) fn assemble_verification(s: SideData<'_>, caps: &Caps) -> Result<Verification> {
    let target = &s.orientations.poset;
    let oracle = poset_isomorphic(&s.lattice.poset, target, caps.max_poset)?;
    let phi_map: Option<Vec<usize>> = s.phi.iter().map(|d| target.index_of(&d.key())).collect();
    let phi_ok = phi_map
        .as_ref()
        .is_some_and(|w| verify_isomorphism(&s.lattice.poset, target, w));
    let identity: Vec<usize> = (0..target.len()).collect();
    let combinatorial_matches = s.combinatorial.poset.len() == target.len()
        && verify_isomorphism(target, &s.combinatorial.poset, &identity)
        && target.grades() == s.combinatorial.poset.grades();
    let mut from_orientations: Vec<Vec<Q>> = s.combinatorial.vertices.iter().map(|v| v.coords.clone()).collect();
    from_orientations.sort();
    let vertices_match = from_orientations == s.lattice.vertices;
    let grading = s.lattice.faces.iter().zip(s.phi).all(|(f, d)| {
        target
            .index_of(&d.key())
            .is_some_and(|i| target.grades()[i] == f.dim as i64)
    });
    let consistency = s.lattice.faces.iter().all(|f| {
        f.active
            .iter()
            .all(|&a| f.active.iter().all(|&b| !s.supports[a].conflicts_with(&s.supports[b])))
    });
    Ok(Verification {
        side: s.side,
        f_vector: s.lattice.f_vector(),
        poset_size: target.len(),
        oracle_isomorphic: oracle.is_some(),
        phi_is_isomorphism: phi_ok,
        combinatorial_matches,
        vertices_match,
        grading_matches_codimension: grading,
        consistency,
        phi_witness: s
            .lattice
            .poset
            .keys()
            .iter()
            .zip(s.phi)
            .map(|(k, d)| (k.clone(), d.key()))
            .collect(),
        vertices: s
            .lattice
            .vertices
            .iter()
            .map(|c| s.frame.from_coords(c).to_strings())
            .collect(),
    })
}

/// Flow-side check: brute-force face lattice vs strongly connected
/// orientations.
pub fn verify_flow(g: &Multigraph, caps: &Caps) -> Result<Verification> {
    let sc = orient::enumerate_sc(g, caps)?;
    let (lattice, phi, xi) = flow_face_lattice_geometric(g, caps)?;
    let comb = face_poset_combinatorial(g, caps)?;
    let supports: Vec<OrientedSubgraph> = xi.iter().map(flow::support).collect();
    assemble_verification(
        SideData {
            side: "flow",
            frame: &LatticeFrame::flow(g),
            lattice: &lattice,
            phi: &phi,
            supports: &supports,
            orientations: &sc,
            combinatorial: &comb,
        },
        caps,
    )
}

/// Identifies faces that are lattice translates of each other. Returns the
/// class of every face and, for every non-representative face `f1`, the
/// pair `(f1, f2, shift)` with `vertices(f1) = vertices(f2) + shift` in
/// lattice coordinates.
pub fn translation_classes(lattice: &FaceLattice) -> (Vec<usize>, Vec<(usize, usize, Vec<Q>)>) {
    let mut groups: BTreeMap<Vec<Vec<Q>>, Vec<usize>> = BTreeMap::new();
    for (i, f) in lattice.faces.iter().enumerate() {
        let base = &lattice.vertices[f.vertex_ids[0]];
        let shape = f
            .vertex_ids
            .iter()
            .map(|&v| lattice.vertices[v].iter().zip(base).map(|(a, b)| a - b).collect())
            .collect();
        groups.entry(shape).or_default().push(i);
    }
    let mut rep_of = vec![usize::MAX; lattice.faces.len()];
    let mut pairs = Vec::new();
    for members in groups.values() {
        let mut reps: Vec<usize> = Vec::new();
        for &f in members {
            let base = &lattice.vertices[lattice.faces[f].vertex_ids[0]];
            let found = reps.iter().find_map(|&r| {
                let rb = &lattice.vertices[lattice.faces[r].vertex_ids[0]];
                let shift: Vec<Q> = base.iter().zip(rb).map(|(a, b)| a - b).collect();
                shift.iter().all(rational::is_integer).then_some((r, shift))
            });
            match found {
                Some((r, shift)) => {
                    rep_of[f] = r;
                    pairs.push((f, r, shift));
                }
                None => {
                    rep_of[f] = f;
                    reps.push(f);
                }
            }
        }
    }
    let mut ids: BTreeMap<usize, usize> = BTreeMap::new();
    let class_of = rep_of
        .iter()
        .map(|&r| {
            let next = ids.len();
            *ids.entry(r).or_insert(next)
        })
        .collect();
    (class_of, pairs)
}

/// The quotient of a face lattice by lattice translations.
pub fn translation_quotient(lattice: &FaceLattice) -> (QuotientPoset, Vec<(usize, usize, Vec<Q>)>) {
    let (class_of, pairs) = translation_classes(lattice);
    let k = class_of.iter().max().map_or(0, |&c| c + 1);
    let mut members = vec![Vec::new(); k];
    for (x, &c) in class_of.iter().enumerate() {
        members[c].push(x);
    }
    let keys = members
        .iter()
        .map(|ms| {
            ms.iter()
                .map(|&x| lattice.poset.keys()[x].clone())
                .collect::<Vec<_>>()
                .join("|")
        })
        .collect();
    let poset = lattice.poset.quotient(&class_of, keys);
    (
        QuotientPoset {
            poset,
            class_of,
            members,
        },
        pairs,
    )
}

/// Face classes up to translation next to the orientation classes.
#[derive(Clone, Debug)]
pub struct LatticeQuotient {
    pub side: &'static str,
    pub faces: QuotientPoset,
    pub orientations: QuotientPoset,
    pub isomorphic: bool,
    /// `phi` sends face classes bijectively onto orientation classes.
    pub phi_respects_classes: bool,
    /// For every identification `F1 = F2 + mu`: `supp(mu)` lies in
    /// `phi(F1)` and reversing it there gives `phi(F2)`.
    pub reversal_rule: bool,
}

impl LatticeQuotient {
    pub fn class_counts(&self) -> Vec<usize> {
        self.faces.poset.grade_counts()
    }

    pub fn passed(&self) -> bool {
        self.isomorphic && self.phi_respects_classes && self.reversal_rule
    }
}

pub(crate) struct QuotientData<'a> {
    pub side: &'static str,
    pub frame: &'a LatticeFrame,
    pub lattice: &'a FaceLattice,
    pub phi: &'a [OrientedSubgraph],
    pub orientations: &'a OrientationPoset,
    pub orientation_quotient: QuotientPoset,
    /// Whether a shift is an admissible lattice element for the side.
    pub admissible: &'a dyn Fn(&EdgeVector) -> bool,
    pub equivalent: &'a dyn Fn(&OrientedSubgraph, &OrientedSubgraph) -> bool,
}

pub(crate) fn assemble_quotient(d: QuotientData<'_>, caps: &Caps) -> Result<LatticeQuotient> {
    let (faces, pairs) = translation_quotient(d.lattice);
    let mut reversal = true;
    for (f1, f2, shift) in &pairs {
        let mu = d.frame.from_coords(shift);
        let supp = flow::support(&mu);
        let arcs: Vec<graph::Arc> = supp.arcs().collect();
        let (d1, d2) = (&d.phi[*f1], &d.phi[*f2]);
        reversal &= (d.admissible)(&mu)
            && supp.is_subset_of(d1)
            && d1.reversed_on(&arcs) == *d2
            && (d.equivalent)(d1, d2);
    }
    let oq = &d.orientation_quotient;
    let mut image: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    let mut respects = true;
    for (f, p) in d.phi.iter().enumerate() {
        match d.orientations.poset.index_of(&p.key()) {
            Some(x) => {
                image.entry(faces.class_of[f]).or_default().insert(oq.class_of[x]);
            }
            None => respects = false,
        }
    }
    let targets: BTreeSet<usize> = image.values().flatten().copied().collect();
    respects &= image.values().all(|s| s.len() == 1) && targets.len() == oq.members.len() && image.len() == faces.members.len();
    let isomorphic = poset_isomorphic(&faces.poset, &oq.poset, caps.max_poset)?.is_some();
    Ok(LatticeQuotient {
        side: d.side,
        faces,
        orientations: d.orientation_quotient,
        isomorphic,
        phi_respects_classes: respects,
        reversal_rule: reversal,
    })
}

/// Faces of the flow cell identified up to translation by the flow lattice.
pub fn quotient_face_poset(g: &Multigraph, caps: &Caps) -> Result<LatticeQuotient> {
    let (lattice, phi, _) = flow_face_lattice_geometric(g, caps)?;
    let sc = orient::enumerate_sc(g, caps)?;
    let sq = orient::quotient_sc(g, &sc);
    let frame = LatticeFrame::flow(g);
    assemble_quotient(
        QuotientData {
            side: "flow",
            frame: &frame,
            lattice: &lattice,
            phi: &phi,
            orientations: &sc,
            orientation_quotient: sq,
            admissible: &|mu| flow::is_eulerian_element(g, mu).unwrap_or(false),
            equivalent: &|a, b| orient::sc_equivalent(g, a, b),
        },
        caps,
    )
}

/// Integer points of the box `[-radius, radius]^dim`, odometer order.
pub fn box_points(dim: usize, radius: i64) -> impl Iterator<Item = Vec<i64>> {
    let mut cur = Some(vec![-radius; dim]);
    std::iter::from_fn(move || {
        let out = cur.clone()?;
        let mut next = out.clone();
        let mut i = 0;
        loop {
            if i == dim {
                cur = None;
                break;
            }
            if next[i] < radius {
                next[i] += 1;
                cur = Some(next);
                break;
            }
            next[i] = -radius;
            i += 1;
        }
        Some(out)
    })
}

/// Exact tests of `lambda / 2` and of the vertices shared with the
/// translated cell, for lattice points given in coordinates.
pub struct MidpointChecker {
    normals: Vec<Vec<i128>>,
    offsets: Vec<i128>,
    /// Common denominator of the vertex coordinates.
    den: i128,
    /// `den * vertex_v`.
    scaled: Vec<Vec<i128>>,
    /// `normal_h . (den * vertex_v)`, indexed `[v][h]`.
    vertex_dots: Vec<Vec<i128>>,
}

impl MidpointChecker {
    pub fn new(polytope: &RationalPolytope, vertices: &[Vec<Q>]) -> Self {
        let to = |x: &BigInt| x.to_i128().expect("small coefficients");
        let normals: Vec<Vec<i128>> = polytope.halfspaces.iter().map(|h| h.normal.iter().map(to).collect()).collect();
        let den = vertices
            .iter()
            .flatten()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let scaled: Vec<Vec<i128>> = vertices
            .iter()
            .map(|v| v.iter().map(|x| to(&(x.numer() * (&den / x.denom())))).collect())
            .collect();
        let vertex_dots = scaled
            .iter()
            .map(|v| normals.iter().map(|n| n.iter().zip(v).map(|(a, b)| a * b).sum()).collect())
            .collect();
        MidpointChecker {
            offsets: polytope.halfspaces.iter().map(|h| to(&h.offset)).collect(),
            den: to(&den),
            normals,
            scaled,
            vertex_dots,
        }
    }

    fn dots(&self, c: &[i64]) -> Vec<i128> {
        self.normals
            .iter()
            .map(|n| n.iter().zip(c).map(|(&a, &b)| a * b as i128).sum())
            .collect()
    }

    /// `c / 2` lies in the cell.
    pub fn midpoint_inside(&self, c: &[i64]) -> bool {
        self.dots(c).iter().zip(&self.offsets).all(|(&lhs, &o)| lhs <= 2 * o)
    }

    /// Vertices `v` of the cell with `v - c` also in the cell.
    pub fn shared_vertices(&self, c: &[i64]) -> Vec<usize> {
        let nc = self.dots(c);
        (0..self.vertex_dots.len())
            .filter(|&v| {
                self.vertex_dots[v]
                    .iter()
                    .zip(&nc)
                    .zip(&self.offsets)
                    .all(|((&nv, &n), &o)| nv - self.den * n <= self.den * o)
            })
            .collect()
    }

    /// Affine dimension of a set of vertices, `-1` when empty.
    pub fn dimension(&self, ids: &[usize]) -> isize {
        let Some((&first, rest)) = ids.split_first() else {
            return -1;
        };
        let base = &self.scaled[first];
        let mut rows: Vec<Vec<i128>> = rest
            .iter()
            .map(|&v| self.scaled[v].iter().zip(base).map(|(a, b)| a - b).collect())
            .collect();
        integer_rank(&mut rows) as isize
    }
}

/// Rank by fraction-free elimination, reducing rows by their gcd as it goes.
fn integer_rank(rows: &mut [Vec<i128>]) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for r in rows.iter_mut().skip(rank + 1) {
            if r[c] == 0 {
                continue;
            }
            let f = r[c];
            for (x, &y) in r.iter_mut().zip(&pivot) {
                *x = *x * pivot[c] - y * f;
            }
            let g = r.iter().fold(0i128, |acc, &x| acc.gcd(&x));
            if g > 1 {
                r.iter_mut().for_each(|x| *x /= g);
            }
        }
        rank += 1;
    }
    rank
}

/// Results of the intersection tests over a box of lattice points.
///
/// A lattice point is a *neighbour* when it is admissible in the strict
/// sense (Eulerian on the flow side, `d(chi_C)` on the cut side) and a *unit
/// neighbour* when its entries all lie in `{0, 1, -1}`. On the flow side the
/// two notions coincide.
#[derive(Clone, Debug, Serialize)]
pub struct AdjacencyReport {
    pub side: &'static str,
    pub radius: i64,
    pub points_checked: usize,
    pub neighbours: usize,
    pub unit_neighbours: usize,
    /// Midpoint inside the cell iff the point is a neighbour.
    pub midpoint_matches: bool,
    /// Midpoint inside the cell iff the point is a unit neighbour.
    pub midpoint_matches_unit: bool,
    /// Codimension of the intersection for every neighbour.
    pub codimension_matches: bool,
    /// Codimension (rank of the conformal generators) for unit neighbours
    /// that are not neighbours.
    pub codimension_matches_unit: bool,
    pub facets_match: bool,
    pub counterexamples: Vec<String>,
}

impl AdjacencyReport {
    pub fn passed(&self) -> bool {
        self.midpoint_matches && self.codimension_matches && self.facets_match
    }
}

/// Classification of a lattice point with entries in `{0, 1, -1}`.
pub(crate) struct Neighbour {
    pub strict: bool,
    pub codim: usize,
    pub generator: bool,
}

pub(crate) struct AdjacencyData<'a> {
    pub side: &'static str,
    pub frame: &'a LatticeFrame,
    pub polytope: &'a RationalPolytope,
    /// `None` for points with an entry outside `{0, 1, -1}`.
    pub classify: &'a (dyn Fn(&EdgeVector) -> Result<Option<Neighbour>> + Sync),
}

const MAX_COUNTEREXAMPLES: usize = 10;

pub(crate) fn run_adjacency(d: AdjacencyData<'_>, radius: i64, caps: &Caps) -> Result<AdjacencyReport> {
    let dim = d.frame.dim();
    let total = (2 * radius as u128 + 1).pow(dim as u32);
    check_cap("lattice box", total, caps.max_box as u128)?;
    let vertices = polytope::vertex_enumeration(d.polytope, caps)?;
    let checker = MidpointChecker::new(d.polytope, &vertices);
    let points: Vec<Vec<i64>> = box_points(dim, radius).collect();
    struct Outcome {
        class: Option<(bool, bool)>,
        midpoint: bool,
        codim_ok: bool,
        facet_ok: bool,
        note: Option<String>,
    }
    let results: Vec<Outcome> = points
        .par_iter()
        .map(|c| {
            let ints = d.frame.int_combination(c);
            let lambda = EdgeVector::from_ints(&ints);
            let class = if ints.iter().all(|x| x.abs() <= 1) {
                (d.classify)(&lambda)?
            } else {
                None
            };
            let midpoint = checker.midpoint_inside(c);
            let Some(n) = class else {
                return Ok(Outcome {
                    class: None,
                    midpoint,
                    codim_ok: true,
                    facet_ok: true,
                    note: midpoint.then(|| format!("{:?}: midpoint inside, entries outside {{0,1,-1}}", lambda.to_strings())),
                });
            };
            let mut codim_ok = false;
            let mut facet_ok = false;
            let mut codim = -1;
            if midpoint {
                let inter = checker.dimension(&checker.shared_vertices(c));
                codim = dim as isize - inter;
                codim_ok = inter >= 0 && codim == n.codim as isize;
                facet_ok = (codim == 1) == n.generator;
            }
            let note = (!n.strict && midpoint).then(|| {
                format!(
                    "{:?}: midpoint inside but not a {} element (codimension {codim})",
                    lambda.to_strings(),
                    if d.side == "cut" { "cut" } else { "Eulerian" }
                )
            });
            Ok(Outcome {
                class: Some((n.strict, midpoint)),
                midpoint,
                codim_ok,
                facet_ok,
                note,
            })
        })
        .collect::<Result<_>>()?;
    let mut report = AdjacencyReport {
        side: d.side,
        radius,
        points_checked: points.len(),
        neighbours: 0,
        unit_neighbours: 0,
        midpoint_matches: true,
        midpoint_matches_unit: true,
        codimension_matches: true,
        codimension_matches_unit: true,
        facets_match: true,
        counterexamples: Vec::new(),
    };
    for o in results {
        let strict = matches!(o.class, Some((true, _)));
        report.neighbours += usize::from(strict);
        report.unit_neighbours += usize::from(o.class.is_some());
        report.midpoint_matches &= o.midpoint == strict;
        report.midpoint_matches_unit &= o.midpoint == o.class.is_some();
        if strict {
            report.codimension_matches &= o.codim_ok;
            report.facets_match &= o.facet_ok;
        } else if o.class.is_some() {
            report.codimension_matches_unit &= o.codim_ok;
        }
        if let Some(n) = o.note {
            if report.counterexamples.len() < MAX_COUNTEREXAMPLES {
                report.counterexamples.push(n);
            }
        }
    }
    Ok(report)
}

fn is_unit(x: &EdgeVector) -> bool {
    x.values().iter().all(|v| v.is_zero() || v.abs().is_one())
}

/// Intersections of the cell with its translates by the lattice points of
/// coordinate box `[-radius, radius]^g`: nonempty iff the point is Eulerian
/// (midpoint test), of codimension the genus of its support, and a facet
/// exactly for circuit flows.
pub fn delaunay_adjacency_check(g: &Multigraph, radius: i64, caps: &Caps) -> Result<AdjacencyReport> {
    let (p, xi) = voronoi_halfspaces(g, caps)?;
    let frame = LatticeFrame::flow(g);
    let circuits: BTreeSet<Vec<String>> = xi.iter().map(EdgeVector::to_strings).collect();
    let classify = |lambda: &EdgeVector| -> Result<Option<Neighbour>> {
        if !is_unit(lambda) {
            return Ok(None);
        }
        let genus = graph::subgraph_genus(g, &flow::support(lambda).edge_set())?;
        Ok(Some(Neighbour {
            strict: flow::is_eulerian_element(g, lambda)?,
            codim: genus,
            generator: circuits.contains(&lambda.to_strings()),
        }))
    };
    run_adjacency(
        AdjacencyData {
            side: "flow",
            frame: &frame,
            polytope: &p,
            classify: &classify,
        },
        radius,
        caps,
    )
}

/// All lattice points at minimal distance from `x`.
#[derive(Clone, Debug)]
pub struct ClosestPoints {
    pub distance: Q,
    pub points: Vec<EdgeVector>,
    pub searched: usize,
}

/// Smallest integer `k >= 0` with `k^2 >= x`.
fn ceil_sqrt(x: &Q) -> BigInt {
    if !x.is_positive() {
        return BigInt::zero();
    }
    let mut k = x.ceil().to_integer().sqrt();
    while Q::from_integer(&k * &k) < *x {
        k += 1;
    }
    k
}

/// Exact nearest flow-lattice points to a rational flow `x`.
///
/// The search box comes from the covering radius (largest `q` over the
/// vertices of the cell): every nearest point `lambda` has
/// `|c_i(x - lambda)|^2 <= R^2 (G^-1)_ii`.
pub fn closest_lattice_point(g: &Multigraph, x: &EdgeVector, caps: &Caps) -> Result<ClosestPoints> {
    if !flow::is_flow(g, x) {
        return Err(Error::NotAFlow);
    }
    let frame = LatticeFrame::flow(g);
    let dim = frame.dim();
    let (p, _) = voronoi_halfspaces(g, caps)?;
    let vertices = polytope::vertex_enumeration(&p, caps)?;
    let r2 = vertices
        .iter()
        .map(|v| flow::q(&frame.from_coords(v)))
        .max()
        .unwrap_or_else(Q::zero);
    let xc = frame.coords(x);
    let mut ranges = Vec::with_capacity(dim);
    let mut total: u128 = 1;
    for i in 0..dim {
        let mut e = vec![Q::zero(); dim];
        e[i] = Q::one();
        let inv = rational::solve(&frame.gram, &e).ok_or_else(|| Error::Invariant("singular Gram matrix".into()))?;
        let k = ceil_sqrt(&(&r2 * &inv[i]));
        let lo = (&xc[i] - Q::from_integer(k.clone())).floor().to_integer();
        let hi = (&xc[i] + Q::from_integer(k)).ceil().to_integer();
        total = total.saturating_mul((&hi - &lo + 1u32).to_u128().unwrap_or(u128::MAX));
        ranges.push((lo, hi));
    }
    check_cap("lattice box", total, caps.max_box as u128)?;
    let mut best: Option<Q> = None;
    let mut points: Vec<Vec<BigInt>> = Vec::new();
    let mut cur: Vec<BigInt> = ranges.iter().map(|(lo, _)| lo.clone()).collect();
    let mut searched = 0;
    loop {
        searched += 1;
        let y: Vec<Q> = xc.iter().zip(&cur).map(|(a, b)| a - Q::from_integer(b.clone())).collect();
        let d = frame
            .gram
            .iter()
            .zip(&y)
            .fold(Q::zero(), |acc, (row, yi)| acc + rational::dot(row, &y) * yi);
        match &best {
            Some(b) if d > *b => {}
            Some(b) if d == *b => points.push(cur.clone()),
            _ => {
                best = Some(d);
                points = vec![cur.clone()];
            }
        }
        let mut i = 0;
        while i < dim {
            if cur[i] < ranges[i].1 {
                cur[i] += 1;
                break;
            }
            cur[i] = ranges[i].0.clone();
            i += 1;
        }
        if i == dim {
            break;
        }
    }
    let mut out: Vec<EdgeVector> = points
        .iter()
        .map(|c| frame.from_coords(&c.iter().cloned().map(Q::from_integer).collect::<Vec<_>>()))
        .collect();
    out.sort_by_key(EdgeVector::to_strings);
    Ok(ClosestPoints {
        distance: best.unwrap_or_else(Q::zero),
        points: out,
        searched,
    })
}

/// Largest `q` over the vertices of a cell: the covering number of the
/// lattice computed from the brute-force vertex enumeration.
pub(crate) fn oracle_covering(frame: &LatticeFrame, p: &RationalPolytope, caps: &Caps) -> Result<(Q, Vec<EdgeVector>)> {
    let vertices = polytope::vertex_enumeration(p, caps)?;
    let edge: Vec<EdgeVector> = vertices.iter().map(|v| frame.from_coords(v)).collect();
    let best = edge.iter().map(flow::q).max().unwrap_or_else(Q::zero);
    let holes = edge.into_iter().filter(|v| flow::q(v) == best).collect();
    Ok((best, holes))
}
