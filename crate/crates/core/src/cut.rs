//! The lattice of integer cuts: coboundaries, cut elements, bonds, the
//! vertices of its Voronoi cell from acyclic orientations, and the face
//! posets built from coherent acyclic orientations.

use num_traits::Zero;
use serde::Serialize;

use crate::caps::Caps;
use crate::covering;
use crate::error::{check_cap, Error, Result};
use crate::flow::{self, EdgeVector};
use crate::graph::{self, Dir, Multigraph, OrientedSubgraph, VertexId};
use crate::orient;
use crate::polytope::{self, FaceLattice, RationalPolytope};
use crate::rational::{self, q_int, Q};
use crate::voronoi::{
    self, AdjacencyData, AdjacencyReport, Neighbour, FacePoset, LatticeFrame, LatticeQuotient, QuotientData, SideData,
    Verification, VertexPoint,
};

/// A rational value per vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VertexFunction {
    values: Vec<Q>,
}

impl VertexFunction {
    pub fn new(values: Vec<Q>) -> Self {
        VertexFunction { values }
    }

    pub fn zero(n: usize) -> Self {
        VertexFunction {
            values: vec![Q::zero(); n],
        }
    }

    pub fn from_ints(values: &[i64]) -> Self {
        VertexFunction {
            values: values.iter().map(|&v| q_int(v)).collect(),
        }
    }

    /// Characteristic function of a vertex subset.
    pub fn indicator(n: usize, subset: &[VertexId]) -> Self {
        let mut values = vec![Q::zero(); n];
        for &v in subset {
            values[v] = q_int(1);
        }
        VertexFunction { values }
    }

    pub fn values(&self) -> &[Q] {
        &self.values
    }

    pub fn get(&self, v: VertexId) -> &Q {
        &self.values[v]
    }

    pub fn is_integral(&self) -> bool {
        self.values.iter().all(rational::is_integer)
    }

    pub fn inner(&self, other: &VertexFunction) -> Q {
        rational::dot(&self.values, &other.values)
    }

    pub fn sum(&self) -> Q {
        self.values.iter().sum()
    }

    pub fn scale(&self, k: &Q) -> Self {
        VertexFunction {
            values: self.values.iter().map(|v| v * k).collect(),
        }
    }
}

impl Serialize for VertexFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.values.iter().map(rational::to_string).collect::<Vec<_>>().serialize(s)
    }
}

/// `d(f)(e) = f(u) - f(v)` for the stored edge `(u, v)`; loops map to zero.
///
/// With this sign `d(chi_C)` is `+1` on edges leaving `C`.
pub fn coboundary(g: &Multigraph, f: &VertexFunction) -> EdgeVector {
    EdgeVector::new(g.edges().iter().map(|e| &f.values[e.u] - &f.values[e.v]).collect())
}

fn mask_of(g: &Multigraph, subset: &[VertexId]) -> Result<Vec<bool>> {
    let mut mask = vec![false; g.num_vertices()];
    for &v in subset {
        if v >= g.num_vertices() {
            return Err(Error::UnknownVertex(v));
        }
        mask[v] = true;
    }
    Ok(mask)
}

/// `+1` on edges from `C` to its complement, `-1` on the reverse.
pub fn cut_element(g: &Multigraph, subset: &[VertexId]) -> Result<EdgeVector> {
    let mask = mask_of(g, subset)?;
    Ok(cut_from_mask(g, &mask))
}

fn cut_from_mask(g: &Multigraph, mask: &[bool]) -> EdgeVector {
    EdgeVector::from_ints(
        &g.edges()
            .iter()
            .map(|e| i64::from(mask[e.u]) - i64::from(mask[e.v]))
            .collect::<Vec<_>>(),
    )
}

/// `components(G[C]) + components(G[V \ C]) - 1`.
pub fn cut_rank(g: &Multigraph, subset: &[VertexId]) -> Result<usize> {
    let mask = mask_of(g, subset)?;
    cut_rank_mask(g, &mask)
}

fn cut_rank_mask(g: &Multigraph, mask: &[bool]) -> Result<usize> {
    let inside = mask.iter().filter(|&&b| b).count();
    if inside == 0 || inside == mask.len() {
        return Err(Error::ImproperSubset);
    }
    let comp: Vec<bool> = mask.iter().map(|b| !b).collect();
    Ok(g.induced_components(mask) + g.induced_components(&comp) - 1)
}

/// A bond `d(chi_C)` together with its side `C`.
#[derive(Clone, Debug)]
pub struct Bond {
    pub side: Vec<bool>,
    pub vector: EdgeVector,
}

/// All cut elements of rank one, both signs.
pub fn bonds(g: &Multigraph, caps: &Caps) -> Result<Vec<Bond>> {
    let n = g.num_vertices();
    check_cap("vertices for subset scan", n as u128, caps.max_vertices as u128)?;
    let mut out = Vec::new();
    for mask in 1u64..((1u64 << n) - 1).max(1) {
        let side: Vec<bool> = (0..n).map(|v| mask >> v & 1 == 1).collect();
        if cut_rank_mask(g, &side)? == 1 {
            out.push(Bond {
                vector: cut_from_mask(g, &side),
                side,
            });
        }
    }
    Ok(out)
}

/// Coordinates on the cut lattice: the basis `d(chi_v)` for every vertex but
/// the last. Loops carry zero in every cut.
pub fn cut_frame(g: &Multigraph) -> LatticeFrame {
    LatticeFrame::cut(g)
}

/// Potential `h` with `h(u) - h(v) = x_e` along a spanning tree, `h(0) = 0`.
pub fn potential(g: &Multigraph, x: &EdgeVector) -> Vec<Q> {
    let n = g.num_vertices();
    let tree = graph::spanning_tree(g);
    let mut h: Vec<Option<Q>> = vec![None; n];
    h[0] = Some(Q::zero());
    let mut changed = true;
    while changed {
        changed = false;
        for &e in &tree {
            let edge = g.edge(e);
            match (&h[edge.u], &h[edge.v]) {
                (Some(hu), None) => {
                    h[edge.v] = Some(hu - x.get(e));
                    changed = true;
                }
                (None, Some(hv)) => {
                    h[edge.u] = Some(hv + x.get(e));
                    changed = true;
                }
                _ => {}
            }
        }
    }
    h.into_iter().map(|v| v.expect("tree spans a connected graph")).collect()
}

/// Tension test: sums to zero around every fundamental circuit.
pub fn is_tension(g: &Multigraph, x: &EdgeVector) -> bool {
    graph::cycle_basis(g).iter().all(|c| {
        c.arcs()
            .iter()
            .fold(Q::zero(), |acc, &a| acc + x.on_arc(a))
            .is_zero()
    })
}

/// A cut element is `d(f)` for an integer `f` taking two consecutive values.
pub fn cut_element_side(g: &Multigraph, x: &EdgeVector) -> Option<Vec<bool>> {
    if !is_tension(g, x) || !x.is_integral() {
        return None;
    }
    let h = potential(g, x);
    let lo = h.iter().min().expect("nonempty").clone();
    let hi = h.iter().max().expect("nonempty").clone();
    if &hi - &lo > q_int(1) {
        return None;
    }
    if hi == lo {
        return Some(vec![false; h.len()]);
    }
    Some(h.iter().map(|v| v == &hi).collect())
}

/// Orientation must orient exactly the non-loop edges and be acyclic.
fn check_acyclic_orientation(g: &Multigraph, d: &OrientedSubgraph) -> Result<()> {
    if d.num_edges_host() != g.num_edges() {
        return Err(Error::HostMismatch(d.num_edges_host(), g.num_edges()));
    }
    for (e, edge) in g.edges().iter().enumerate() {
        match (edge.is_loop(), d.dir(e)) {
            (true, Some(_)) => return Err(Error::LoopInOrientation),
            (false, None) => {
                return Err(Error::NotFullOrientation(format!("edge {e} is not oriented")))
            }
            _ => {}
        }
    }
    if !graph::is_acyclic(g, d) {
        return Err(Error::NotAcyclic);
    }
    Ok(())
}

/// Solution `f_D` of `2 L f = d_in - d_out`, grounded at vertex 0.
pub fn acyclic_potential(g: &Multigraph, d: &OrientedSubgraph) -> Result<VertexFunction> {
    check_acyclic_orientation(g, d)?;
    let c = in_minus_out(g, d);
    covering::solve_laplacian(g, &c, &q_int(2))
}

pub(crate) fn in_minus_out(g: &Multigraph, d: &OrientedSubgraph) -> VertexFunction {
    let inn = d.in_degrees(g);
    let out = d.out_degrees(g);
    VertexFunction::from_ints(
        &inn.iter()
            .zip(&out)
            .map(|(&a, &b)| a as i64 - b as i64)
            .collect::<Vec<_>>(),
    )
}

/// Bonds whose support lies inside `d`.
pub fn bonds_inside<'a>(bonds: &'a [Bond], d: &'a OrientedSubgraph) -> impl Iterator<Item = &'a Bond> {
    bonds.iter().filter(move |b| flow::support(&b.vector).is_subset_of(d))
}

/// The Voronoi-cell vertex of an acyclic orientation of `g` minus its loops.
///
/// Computed from the Laplacian potential (`nu = f_D(head) - f_D(tail)` on
/// every arc) and independently from the bond equalities
/// `2 <nu, d(chi_C)> = q(d(chi_C))`; the two must agree.
pub fn vertex_of_acyclic(g: &Multigraph, d: &OrientedSubgraph, bonds: &[Bond]) -> Result<EdgeVector> {
    let f = acyclic_potential(g, d)?;
    // the arc (u -> v) carries f(v) - f(u), i.e. nu = -d(f)
    let nu = -&coboundary(g, &f);

    let frame = cut_frame(g);
    let inside: Vec<&Bond> = bonds_inside(bonds, d).collect();
    let rows: Vec<Vec<Q>> = inside
        .iter()
        .map(|b| {
            let c = frame.coords(&b.vector);
            frame
                .gram
                .iter()
                .map(|row| rational::dot(row, &c) * q_int(2))
                .collect()
        })
        .collect();
    let rhs: Vec<Q> = inside.iter().map(|b| flow::q(&b.vector)).collect();
    let coords = if frame.dim() == 0 {
        Vec::new()
    } else {
        rational::solve(&rows, &rhs)
            .ok_or_else(|| Error::Invariant("bond equalities are not uniquely solvable".into()))?
    };
    let by_bonds = frame.from_coords(&coords);
    if by_bonds != nu {
        return Err(Error::Invariant(format!(
            "Laplacian and bond routes disagree for {d}: {:?} vs {:?}",
            nu.to_strings(),
            by_bonds.to_strings()
        )));
    }
    for b in bonds {
        let lhs = flow::inner_product(&nu, &b.vector)? * q_int(2);
        let rhs = flow::q(&b.vector);
        let inside = flow::support(&b.vector).is_subset_of(d);
        if lhs > rhs || (inside != (lhs == rhs)) {
            return Err(Error::Invariant(format!("bond inequality fails at {d}")));
        }
    }
    Ok(nu)
}

/// All acyclic orientations of `g` minus its loops.
pub fn acyclic_orientations(g: &Multigraph, caps: &Caps) -> Result<Vec<OrientedSubgraph>> {
    let edges = g.non_loops();
    check_cap("edges for 2^m orientation scan", edges.len() as u128, caps.max_edges as u128)?;
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << edges.len()) {
        let mut d = OrientedSubgraph::empty(g.num_edges());
        for (i, &e) in edges.iter().enumerate() {
            d.set(e, Some(if mask >> i & 1 == 1 { Dir::Backward } else { Dir::Forward }));
        }
        if graph::is_acyclic(g, &d) {
            out.push(d);
        }
    }
    Ok(out)
}

/// Halfspaces `2 <x, lambda> <= q(lambda)` over the bonds, in cut coordinates.
pub fn cut_halfspaces(g: &Multigraph, caps: &Caps) -> Result<(RationalPolytope, Vec<Bond>)> {
    let bs = bonds(g, caps)?;
    check_cap("halfspaces", bs.len() as u128, caps.max_halfspaces as u128)?;
    let vectors: Vec<EdgeVector> = bs.iter().map(|b| b.vector.clone()).collect();
    let p = cut_frame(g).voronoi_polytope(&vectors);
    Ok((p, bs))
}

/// Face poset of the cut-lattice Voronoi cell built from coherent acyclic
/// orientations: the face of `D` is the hull of all `nu^{D'}` with `D'` an
/// acyclic orientation extending `D`.
pub fn cut_face_poset_combinatorial(g: &Multigraph, caps: &Caps) -> Result<FacePoset> {
    let cac = orient::enumerate_cac(g, caps)?;
    let bonds = bonds(g, caps)?;
    let frame = cut_frame(g);
    let vertices: Vec<VertexPoint> = acyclic_orientations(g, caps)?
        .into_iter()
        .map(|d| {
            let edge = vertex_of_acyclic(g, &d, &bonds)?;
            Ok(VertexPoint {
                coords: frame.coords(&edge),
                orientation: d,
                edge,
            })
        })
        .collect::<Result<_>>()?;
    let top = g.num_vertices() as i64 - 1;
    let faces = voronoi::build_face_poset(&cac, vertices, |d| {
        let active: Vec<usize> = (0..bonds.len())
            .filter(|&i| flow::support(&bonds[i].vector).is_subset_of(d))
            .collect();
        let rows: Vec<Vec<Q>> = active.iter().map(|&i| bonds[i].vector.values().to_vec()).collect();
        (active, top - rational::rank(&rows) as i64)
    })?;
    Ok(faces)
}

/// Brute-force face lattice of the cut-lattice Voronoi cell, with
/// `phi^c(F)` (the union of the supports of the bonds tight on `F`).
pub fn cut_face_lattice_geometric(g: &Multigraph, caps: &Caps) -> Result<(FaceLattice, Vec<OrientedSubgraph>, Vec<Bond>)> {
    let (p, bonds) = cut_halfspaces(g, caps)?;
    let lattice = polytope::face_lattice_bruteforce(&p, caps)?;
    let supports: Vec<OrientedSubgraph> = bonds.iter().map(|b| flow::support(&b.vector)).collect();
    let phi = voronoi::phi_of_faces(g.num_edges(), &lattice, &supports)?;
    Ok((lattice, phi, bonds))
}

/// Cut-side check: brute-force face lattice vs coherent acyclic
/// orientations.
pub fn verify_cut(g: &Multigraph, caps: &Caps) -> Result<Verification> {
    let cac = orient::enumerate_cac(g, caps)?;
    let (lattice, phi, bonds) = cut_face_lattice_geometric(g, caps)?;
    let comb = cut_face_poset_combinatorial(g, caps)?;
    let supports: Vec<OrientedSubgraph> = bonds.iter().map(|b| flow::support(&b.vector)).collect();
    voronoi::assemble_verification(
        SideData {
            side: "cut",
            frame: &cut_frame(g),
            lattice: &lattice,
            phi: &phi,
            supports: &supports,
            orientations: &cac,
            combinatorial: &comb,
        },
        caps,
    )
}

/// Faces of the cut cell identified up to translation by the cut lattice.
pub fn quotient_cut_face_poset(g: &Multigraph, caps: &Caps) -> Result<LatticeQuotient> {
    let (lattice, phi, _) = cut_face_lattice_geometric(g, caps)?;
    let cac = orient::enumerate_cac(g, caps)?;
    let cq = orient::quotient_cac(g, &cac);
    // the cut relation is not transitive; compare classes of its closure
    let class_of = cq.class_of.clone();
    let class = |d: &OrientedSubgraph| cac.poset.index_of(&d.key()).map(|i| class_of[i]);
    let same_class = |a: &OrientedSubgraph, b: &OrientedSubgraph| class(a).is_some() && class(a) == class(b);
    voronoi::assemble_quotient(
        QuotientData {
            side: "cut",
            frame: &cut_frame(g),
            lattice: &lattice,
            phi: &phi,
            orientations: &cac,
            orientation_quotient: cq,
            admissible: &|mu| is_unit_tension(g, mu),
            equivalent: &|a, b| same_class(a, b),
        },
        caps,
    )
}

/// Tension with every entry in `{0, 1, -1}`. Every cut element is one; on
/// graphs with an induced path of length two the converse fails.
pub fn is_unit_tension(g: &Multigraph, x: &EdgeVector) -> bool {
    is_tension(g, x) && x.values().iter().all(|v| v.is_zero() || *v == q_int(1) || *v == q_int(-1))
}

/// Intersections of the cut cell with its translates over the coordinate
/// box `[-radius, radius]^(n-1)`. Checked against the statement that they
/// meet iff the point is a cut element, with codimension its cut rank and
/// facets exactly at bonds; unit tensions that are not cut elements are
/// reported separately, with the rank of the bonds inside their support as
/// expected codimension.
pub fn cut_adjacency_check(g: &Multigraph, radius: i64, caps: &Caps) -> Result<AdjacencyReport> {
    let (p, bonds) = cut_halfspaces(g, caps)?;
    let classify = |lambda: &EdgeVector| -> Result<Option<Neighbour>> {
        if !is_unit_tension(g, lambda) {
            return Ok(None);
        }
        let Some(side) = cut_element_side(g, lambda) else {
            let supp = flow::support(lambda);
            return Ok(Some(Neighbour {
                strict: false,
                codim: orient::bond_rank_inside(&bonds, &supp),
                generator: false,
            }));
        };
        let improper = side.iter().all(|&s| s) || side.iter().all(|&s| !s);
        let kappa = if improper { 0 } else { cut_rank_mask(g, &side)? };
        Ok(Some(Neighbour {
            strict: true,
            codim: kappa,
            generator: kappa == 1,
        }))
    };
    voronoi::run_adjacency(
        AdjacencyData {
            side: "cut",
            frame: &cut_frame(g),
            polytope: &p,
            classify: &classify,
        },
        radius,
        caps,
    )
}

/// `q(d(f)) = <f, L f>`.
pub fn energy_identity_holds(g: &Multigraph, f: &VertexFunction) -> bool {
    flow::q(&coboundary(g, f)) == f.inner(&covering::laplacian_apply(g, f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;
    use crate::rational::q_frac;
    use num_traits::Signed;
    use proptest::prelude::*;

    fn caps() -> Caps {
        Caps::default()
    }

    #[test]
    fn coboundary_examples() {
        let k2 = examples::complete(2);
        assert_eq!(coboundary(&k2, &VertexFunction::indicator(2, &[0])), EdgeVector::from_ints(&[1]));
        let k4 = examples::complete(4);
        assert!(coboundary(&k4, &VertexFunction::from_ints(&[7, 7, 7, 7])).is_zero());
        let c3 = examples::cycle(3);
        let t = coboundary(&c3, &VertexFunction::from_ints(&[0, 1, 2]));
        assert!(is_tension(&c3, &t));
        let lp = examples::single_loop();
        assert!(coboundary(&lp, &VertexFunction::from_ints(&[4])).is_zero());
    }

    #[test]
    fn cut_element_examples() {
        let k2 = examples::complete(2);
        assert_eq!(cut_element(&k2, &[0]).unwrap(), EdgeVector::from_ints(&[1]));
        assert!(cut_element(&k2, &[0, 1]).unwrap().is_zero());
        let c4 = examples::cycle(4);
        let x = cut_element(&c4, &[0, 2]).unwrap();
        assert!(x.values().iter().all(|v| v.abs() == q_int(1)));
        assert!(matches!(cut_element(&c4, &[9]), Err(Error::UnknownVertex(9))));
    }

    #[test]
    fn cut_rank_examples() {
        assert_eq!(cut_rank(&examples::complete(4), &[0]).unwrap(), 1);
        assert_eq!(cut_rank(&examples::cycle(4), &[0, 2]).unwrap(), 3);
        assert_eq!(cut_rank(&examples::path(3), &[0, 2]).unwrap(), 2);
        assert!(matches!(cut_rank(&examples::path(3), &[]), Err(Error::ImproperSubset)));
        assert!(matches!(cut_rank(&examples::path(3), &[0, 1, 2]), Err(Error::ImproperSubset)));
    }

    #[test]
    fn bond_counts() {
        assert_eq!(bonds(&examples::complete(3), &caps()).unwrap().len(), 6);
        assert_eq!(bonds(&examples::complete(2), &caps()).unwrap().len(), 2);
        assert_eq!(bonds(&examples::path(3), &caps()).unwrap().len(), 4);
        assert!(bonds(&examples::single_loop(), &caps()).unwrap().is_empty());
    }

    #[test]
    fn acyclic_vertices() {
        let k2 = examples::complete(2);
        let b = bonds(&k2, &caps()).unwrap();
        let nu = vertex_of_acyclic(&k2, &OrientedSubgraph::from_key("+").unwrap(), &b).unwrap();
        assert_eq!(nu.values()[0].abs(), q_frac(1, 2));
        assert_eq!(flow::q(&nu), q_frac(1, 4));

        // linear order 0 < 1 < 2 on K3: f = (-1/3, 0, 1/3) up to a constant
        let k3 = examples::complete(3);
        let b = bonds(&k3, &caps()).unwrap();
        let d = orient::orientation_from_blocks(&k3, &[0, 1, 2]);
        let f = acyclic_potential(&k3, &d).unwrap();
        let shifted: Vec<Q> = f.values().iter().map(|x| x - f.get(1)).collect();
        assert_eq!(shifted, vec![q_frac(-1, 3), q_int(0), q_frac(1, 3)]);
        let nu = vertex_of_acyclic(&k3, &d, &b).unwrap();
        assert_eq!(flow::q(&nu), q_frac(2, 3));
        assert_eq!(covering::laplacian_apply(&k3, &f).scale(&q_int(2)), in_minus_out(&k3, &d));
    }

    #[test]
    fn star_vertex_matches_oracle() {
        let g = examples::star(3);
        let b = bonds(&g, &caps()).unwrap();
        let inward = OrientedSubgraph::from_dirs(
            g.edges().iter().map(|e| Some(if e.v == 0 { Dir::Forward } else { Dir::Backward })).collect(),
        );
        let nu = vertex_of_acyclic(&g, &inward, &b).unwrap();
        let (p, _) = cut_halfspaces(&g, &caps()).unwrap();
        let verts = polytope::vertex_enumeration(&p, &caps()).unwrap();
        assert!(verts.contains(&cut_frame(&g).coords(&nu)));
        assert_eq!(flow::q(&nu), q_frac(3, 4));
    }

    #[test]
    fn acyclic_rejections() {
        let c3 = examples::cycle(3);
        let b = bonds(&c3, &caps()).unwrap();
        let cyclic = OrientedSubgraph::from_key("+++").unwrap();
        assert!(graph::is_acyclic(&c3, &OrientedSubgraph::from_key("++-").unwrap()));
        assert!(matches!(vertex_of_acyclic(&c3, &cyclic, &b), Err(Error::NotAcyclic)));
        let lp = examples::single_loop();
        assert!(matches!(
            vertex_of_acyclic(&lp, &OrientedSubgraph::from_key("+").unwrap(), &[]),
            Err(Error::LoopInOrientation)
        ));
    }

    #[test]
    fn face_posets() {
        let k3 = cut_face_poset_combinatorial(&examples::complete(3), &caps()).unwrap();
        assert_eq!(k3.f_vector(), vec![6, 6, 1]);
        let k2 = cut_face_poset_combinatorial(&examples::complete(2), &caps()).unwrap();
        assert_eq!(k2.f_vector(), vec![2, 1]);
        assert_eq!(acyclic_orientations(&examples::complete(4), &caps()).unwrap().len(), 24);
        let v = verify_cut(&examples::complete(4), &caps()).unwrap();
        assert!(v.passed(), "{v:?}");
        assert_eq!(v.f_vector[0], 24);
    }

    #[test]
    fn verify_small() {
        for g in [examples::complete(2), examples::complete(3), examples::theta(), examples::single_loop()] {
            let v = verify_cut(&g, &caps()).unwrap();
            assert!(v.passed(), "{v:?}");
        }
    }

    #[test]
    fn quotients() {
        let k2 = quotient_cut_face_poset(&examples::complete(2), &caps()).unwrap();
        assert_eq!(k2.class_counts(), vec![1, 1]);
        assert!(k2.passed());
        let k3 = quotient_cut_face_poset(&examples::complete(3), &caps()).unwrap();
        assert_eq!(k3.class_counts(), vec![2, 3, 1]);
        assert!(k3.passed());
        let star = quotient_cut_face_poset(&examples::star(2), &caps()).unwrap();
        assert!(star.passed());
        assert_eq!(star.class_counts(), star.orientations.poset.grade_counts());
    }

    #[test]
    fn adjacency() {
        let r = cut_adjacency_check(&examples::complete(3), 2, &caps()).unwrap();
        assert!(r.passed(), "{:?}", r.counterexamples);
        // zero and the six bonds
        assert_eq!(r.neighbours, 7);
        assert_eq!(r.unit_neighbours, 7);
        // on C4 the tension (1,1,-1,-1) is not a cut element, yet its
        // midpoint lies in both cells
        let c4 = cut_adjacency_check(&examples::cycle(4), 2, &caps()).unwrap();
        assert!(!c4.midpoint_matches);
        assert!(c4.midpoint_matches_unit);
        assert!(c4.codimension_matches && c4.codimension_matches_unit && c4.facets_match);
        assert!(c4.counterexamples.iter().any(|s| s.starts_with("[\"1/1\", \"1/1\", \"-1/1\", \"-1/1\"]")));
        let x = EdgeVector::from_ints(&[1, 1, -1, -1]);
        assert!(is_unit_tension(&examples::cycle(4), &x));
        assert!(cut_element_side(&examples::cycle(4), &x).is_none());
    }

    #[test]
    fn cut_element_recognition() {
        let c4 = examples::cycle(4);
        let x = cut_element(&c4, &[1, 2]).unwrap();
        let side = cut_element_side(&c4, &x).unwrap();
        assert_eq!(side, vec![false, true, true, false]);
        let two = x.scale(&q_int(2));
        assert!(cut_element_side(&c4, &two).is_none());
        assert!(cut_element_side(&c4, &EdgeVector::from_ints(&[1, 0, 0, 0])).is_none());
    }

    proptest! {
        #[test]
        fn energy_identity(f in proptest::collection::vec(-6i64..6, 4), den in 1i64..5) {
            let g = examples::complete(4);
            let fv = VertexFunction::new(f.iter().map(|&x| q_frac(x, den)).collect());
            prop_assert!(energy_identity_holds(&g, &fv));
            prop_assert!(is_tension(&g, &coboundary(&g, &fv)));
        }
    }
}
