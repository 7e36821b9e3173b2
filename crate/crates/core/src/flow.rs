//! Edge vectors, the flow space and the lattice of integer flows.

use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::{cycle_basis, Arc, Circuit, Dir, Multigraph, OrientedSubgraph};
use crate::rational::{self, q_int, Q};

/// A rational value per edge, read in the edge's reference orientation.
/// The value on the reversed arc is the negation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EdgeVector {
    values: Vec<Q>,
}

impl EdgeVector {
    pub fn zero(m: usize) -> Self {
        EdgeVector {
            values: vec![Q::zero(); m],
        }
    }

    pub fn new(values: Vec<Q>) -> Self {
        EdgeVector { values }
    }

    pub fn from_ints(values: &[i64]) -> Self {
        EdgeVector {
            values: values.iter().map(|&v| q_int(v)).collect(),
        }
    }

    pub fn from_circuit(c: &Circuit, m: usize) -> Self {
        Self::from_ints(&c.signs(m))
    }

    /// `+1` on every arc of `d`, read in reference orientation.
    pub fn indicator(d: &OrientedSubgraph) -> Self {
        EdgeVector {
            values: d
                .dirs()
                .iter()
                .map(|x| q_int(x.map_or(0, Dir::sign)))
                .collect(),
        }
    }

    pub fn values(&self) -> &[Q] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, e: usize) -> &Q {
        &self.values[e]
    }

    /// Value on an oriented edge.
    pub fn on_arc(&self, a: Arc) -> Q {
        match a.dir {
            Dir::Forward => self.values[a.edge].clone(),
            Dir::Backward => -self.values[a.edge].clone(),
        }
    }

    pub fn scale(&self, k: &Q) -> Self {
        EdgeVector {
            values: self.values.iter().map(|v| v * k).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.values.iter().all(rational::is_integer)
    }

    /// Integer entries, or `None` when some entry is fractional or too large.
    pub fn to_ints(&self) -> Option<Vec<i64>> {
        self.values
            .iter()
            .map(|v| {
                if rational::is_integer(v) {
                    v.numer().to_i64()
                } else {
                    None
                }
            })
            .collect()
    }

    /// Sum of absolute values.
    pub fn l1_norm(&self) -> Q {
        self.values.iter().fold(Q::zero(), |acc, v| acc + v.abs())
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.values.iter().map(rational::to_string).collect()
    }

    pub fn from_strings<S: AsRef<str>>(items: &[S]) -> Result<Self> {
        items
            .iter()
            .map(|s| rational::parse(s.as_ref()))
            .collect::<Result<Vec<_>>>()
            .map(Self::new)
    }

    fn check_host(&self, other: &EdgeVector) -> Result<()> {
        if self.len() == other.len() {
            Ok(())
        } else {
            Err(Error::HostMismatch(self.len(), other.len()))
        }
    }

    pub fn try_add(&self, other: &EdgeVector) -> Result<EdgeVector> {
        self.check_host(other)?;
        Ok(self + other)
    }
}

impl Serialize for EdgeVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for EdgeVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let items = Vec::<String>::deserialize(d)?;
        EdgeVector::from_strings(&items).map_err(serde::de::Error::custom)
    }
}

impl Add for &EdgeVector {
    type Output = EdgeVector;
    fn add(self, rhs: &EdgeVector) -> EdgeVector {
        assert_eq!(self.len(), rhs.len(), "edge vectors on different hosts");
        EdgeVector {
            values: self.values.iter().zip(&rhs.values).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &EdgeVector {
    type Output = EdgeVector;
    fn sub(self, rhs: &EdgeVector) -> EdgeVector {
        assert_eq!(self.len(), rhs.len(), "edge vectors on different hosts");
        EdgeVector {
            values: self.values.iter().zip(&rhs.values).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &EdgeVector {
    type Output = EdgeVector;
    fn neg(self) -> EdgeVector {
        EdgeVector {
            values: self.values.iter().map(|v| -v).collect(),
        }
    }
}

pub fn inner_product(a: &EdgeVector, b: &EdgeVector) -> Result<Q> {
    a.check_host(b)?;
    Ok(rational::dot(&a.values, &b.values))
}

/// The quadratic form `q(x) = <x, x>`.
pub fn q(x: &EdgeVector) -> Q {
    rational::dot(&x.values, &x.values)
}

/// Net outflow at every vertex.
pub fn divergence(g: &Multigraph, x: &EdgeVector) -> Vec<Q> {
    let mut div = vec![Q::zero(); g.num_vertices()];
    for (e, edge) in g.edges().iter().enumerate() {
        div[edge.u] += &x.values[e];
        div[edge.v] -= &x.values[e];
    }
    div
}

/// Conservation at every vertex.
pub fn is_flow(g: &Multigraph, x: &EdgeVector) -> bool {
    x.len() == g.num_edges() && divergence(g, x).iter().all(Zero::is_zero)
}

/// Circuit flows of the fundamental cycle basis: a Z-basis of the lattice.
pub fn flow_basis(g: &Multigraph) -> Vec<EdgeVector> {
    cycle_basis(g)
        .iter()
        .map(|c| EdgeVector::from_circuit(c, g.num_edges()))
        .collect()
}

/// Gram matrix of a list of vectors.
pub fn gram(vectors: &[EdgeVector]) -> Vec<Vec<Q>> {
    vectors
        .iter()
        .map(|a| vectors.iter().map(|b| rational::dot(&a.values, &b.values)).collect())
        .collect()
}

/// Arcs carrying strictly positive value.
pub fn support(x: &EdgeVector) -> OrientedSubgraph {
    OrientedSubgraph::from_dirs(
        x.values
            .iter()
            .map(|v| {
                if v.is_positive() {
                    Some(Dir::Forward)
                } else if v.is_negative() {
                    Some(Dir::Backward)
                } else {
                    None
                }
            })
            .collect(),
    )
}

/// A flow with all entries in `{0, 1, -1}`.
pub fn is_eulerian_element(g: &Multigraph, x: &EdgeVector) -> Result<bool> {
    if !is_flow(g, x) {
        return Err(Error::NotAFlow);
    }
    Ok(x.values.iter().all(|v| v.is_zero() || v.abs() == q_int(1)))
}

/// Splits an integer flow into circuit flows inside its support.
///
/// Greedy peeling: start on the smallest arc id still carrying flow, walk
/// along the smallest outgoing arc id until a vertex repeats, remove the
/// closed circuit, repeat. `lead`, when given, is removed first.
pub fn circuit_decomposition(
    g: &Multigraph,
    x: &EdgeVector,
    lead: Option<&Circuit>,
) -> Result<Vec<Circuit>> {
    if !x.is_integral() {
        return Err(Error::NotIntegral);
    }
    if !is_flow(g, x) {
        return Err(Error::NotAFlow);
    }
    let m = g.num_edges();
    // remaining[e] is the signed integral amount still to peel
    let mut remaining: Vec<BigInt> = x.values.iter().map(|v| v.numer().clone()).collect();
    let arc_of = |e: usize, r: &BigInt| Arc {
        edge: e,
        dir: if r.is_positive() {
            Dir::Forward
        } else {
            Dir::Backward
        },
    };
    let mut out = Vec::new();
    let peel = |c: &Circuit, remaining: &mut Vec<BigInt>| {
        for a in c.arcs() {
            remaining[a.edge] -= a.dir.sign();
        }
    };
    if let Some(c) = lead {
        let supp = support(x);
        if !c.as_oriented(m).is_subset_of(&supp) {
            return Err(Error::CircuitNotInSupport);
        }
        peel(c, &mut remaining);
        out.push(c.clone());
    }
    let mut out_arcs: Vec<Vec<usize>> = vec![Vec::new(); g.num_vertices()];
    for (e, edge) in g.edges().iter().enumerate() {
        out_arcs[edge.u].push(e);
        if !edge.is_loop() {
            out_arcs[edge.v].push(e);
        }
    }
    while let Some(start) = (0..m).find(|&e| !remaining[e].is_zero()) {
        let first = arc_of(start, &remaining[start]);
        let mut walk = vec![first];
        let mut visited = vec![g.tail(first)];
        let mut at = g.head(first);
        let cycle_from = loop {
            if let Some(i) = visited.iter().position(|&v| v == at) {
                break i;
            }
            visited.push(at);
            let next = out_arcs[at]
                .iter()
                .copied()
                .filter(|&e| !remaining[e].is_zero())
                .map(|e| arc_of(e, &remaining[e]))
                .find(|&a| g.tail(a) == at)
                .ok_or_else(|| Error::Invariant("flow conservation broken while peeling".into()))?;
            walk.push(next);
            at = g.head(next);
        };
        let circuit = Circuit::new(g, walk.split_off(cycle_from))?;
        peel(&circuit, &mut remaining);
        out.push(circuit);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;
    use crate::graph::enumerate_circuits;
    use crate::rational::q_frac;

    fn ev(v: &[i64]) -> EdgeVector {
        EdgeVector::from_ints(v)
    }

    #[test]
    fn inner_products() {
        assert_eq!(inner_product(&ev(&[1, 0, -1]), &ev(&[0, 1, -1])).unwrap(), q_int(1));
        assert_eq!(q(&ev(&[0, 0, 0])), q_int(0));
        for c in enumerate_circuits(&examples::complete(4), 100).unwrap() {
            assert_eq!(q(&EdgeVector::from_circuit(&c, 6)), q_int(c.len() as i64));
        }
        assert_eq!(
            inner_product(&ev(&[1]), &ev(&[1, 2])),
            Err(Error::HostMismatch(1, 2))
        );
    }

    #[test]
    fn flow_predicates() {
        let theta = examples::theta();
        assert!(is_flow(&theta, &ev(&[1, 0, -1])));
        assert!(!is_flow(&theta, &ev(&[1, 0, 0])));
        assert!(is_flow(&theta, &ev(&[0, 0, 0])));
        let lp = examples::single_loop();
        assert!(is_flow(&lp, &ev(&[5])));
    }

    #[test]
    fn basis_gram() {
        let g = gram(&flow_basis(&examples::theta()));
        assert_eq!(g, vec![vec![q_int(2), q_int(1)], vec![q_int(1), q_int(2)]]);
        assert!(flow_basis(&examples::path(3)).is_empty());
        assert_eq!(gram(&flow_basis(&examples::single_loop())), vec![vec![q_int(1)]]);
    }

    #[test]
    fn supports() {
        let s = support(&ev(&[1, 1, -2]));
        assert_eq!(s.key(), "++-");
        assert!(support(&ev(&[0, 0])).is_empty());
        let c = &enumerate_circuits(&examples::complete(4), 100).unwrap()[3];
        assert_eq!(support(&EdgeVector::from_circuit(c, 6)), c.as_oriented(6));
    }

    #[test]
    fn eulerian_elements() {
        let theta = examples::theta();
        assert!(is_eulerian_element(&theta, &ev(&[1, 0, -1])).unwrap());
        assert!(!is_eulerian_element(&theta, &ev(&[1, 1, -2])).unwrap());
        assert!(is_eulerian_element(&theta, &ev(&[0, 0, 0])).unwrap());
        assert_eq!(is_eulerian_element(&theta, &ev(&[1, 0, 0])), Err(Error::NotAFlow));
    }

    #[test]
    fn decomposition_examples() {
        let theta = examples::theta();
        let parts = circuit_decomposition(&theta, &ev(&[1, 1, -2]), None).unwrap();
        let flows: Vec<EdgeVector> = parts.iter().map(|c| EdgeVector::from_circuit(c, 3)).collect();
        assert_eq!(flows, vec![ev(&[1, 0, -1]), ev(&[0, 1, -1])]);
        let c = &enumerate_circuits(&theta, 100).unwrap()[0];
        let xc = EdgeVector::from_circuit(c, 3);
        assert_eq!(circuit_decomposition(&theta, &xc, None).unwrap(), vec![c.clone()]);
        assert!(circuit_decomposition(&theta, &ev(&[0, 0, 0]), None).unwrap().is_empty());
        assert_eq!(
            circuit_decomposition(&theta, &EdgeVector::new(vec![q_frac(1, 2), q_frac(-1, 2), q_int(0)]), None),
            Err(Error::NotIntegral)
        );
        assert_eq!(
            circuit_decomposition(&theta, &ev(&[1, 0, 0]), None),
            Err(Error::NotAFlow)
        );
    }

    #[test]
    fn decomposition_with_lead() {
        let theta = examples::theta();
        let x = ev(&[1, 1, -2]);
        let cs = enumerate_circuits(&theta, 100).unwrap();
        let lead = cs
            .iter()
            .find(|c| EdgeVector::from_circuit(c, 3) == ev(&[0, 1, -1]))
            .unwrap();
        let parts = circuit_decomposition(&theta, &x, Some(lead)).unwrap();
        assert_eq!(&parts[0], lead);
        assert_eq!(parts.len(), 2);
        let bad = cs
            .iter()
            .find(|c| EdgeVector::from_circuit(c, 3) == ev(&[1, -1, 0]))
            .unwrap();
        assert_eq!(
            circuit_decomposition(&theta, &x, Some(bad)),
            Err(Error::CircuitNotInSupport)
        );
    }

    #[test]
    fn decomposition_exhaustive_on_small_box() {
        for (_, g) in examples::fixed_suite() {
            let basis = flow_basis(&g);
            let k = basis.len();
            if k > 4 {
                continue;
            }
            let m = g.num_edges();
            let mut coeffs = vec![-2i64; k];
            loop {
                let mut x = EdgeVector::zero(m);
                for (c, b) in coeffs.iter().zip(&basis) {
                    x = &x + &b.scale(&q_int(*c));
                }
                let parts = circuit_decomposition(&g, &x, None).unwrap();
                let mut sum = EdgeVector::zero(m);
                let supp = support(&x);
                for c in &parts {
                    assert!(c.as_oriented(m).is_subset_of(&supp));
                    sum = &sum + &EdgeVector::from_circuit(c, m);
                }
                assert_eq!(sum, x);
                if is_eulerian_element(&g, &x).unwrap() {
                    let total: Q = parts.iter().map(|c| q_int(c.len() as i64)).sum();
                    assert_eq!(q(&x), total);
                    for i in 0..parts.len() {
                        for j in (i + 1)..parts.len() {
                            let a = EdgeVector::from_circuit(&parts[i], m);
                            let b = EdgeVector::from_circuit(&parts[j], m);
                            assert_eq!(inner_product(&a, &b).unwrap(), q_int(0));
                        }
                    }
                }
                let Some(i) = coeffs.iter().position(|&c| c < 2) else { break };
                coeffs[i] += 1;
                for c in &mut coeffs[..i] {
                    *c = -2;
                }
            }
        }
    }

    #[test]
    fn gram_is_positive_definite() {
        for (_, g) in examples::fixed_suite() {
            let gm = gram(&flow_basis(&g));
            for k in 1..=gm.len() {
                let minor: Vec<Vec<Q>> = gm[..k].iter().map(|r| r[..k].to_vec()).collect();
                assert!(determinant(&minor).is_positive());
            }
        }
    }

    fn determinant(m: &[Vec<Q>]) -> Q {
        let mut a = m.to_vec();
        let n = a.len();
        let mut det = q_int(1);
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
                return q_int(0);
            };
            if p != c {
                a.swap(p, c);
                det = -det;
            }
            det *= &a[c][c];
            for i in (c + 1)..n {
                let f = &a[i][c] / &a[c][c];
                for j in c..n {
                    let t = &f * &a[c][j];
                    a[i][j] -= t;
                }
            }
        }
        det
    }

    #[test]
    fn json_round_trip() {
        let x = EdgeVector::new(vec![q_frac(1, 3), q_int(-2)]);
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"["1/3","-2/1"]"#);
        assert_eq!(serde_json::from_str::<EdgeVector>(&s).unwrap(), x);
    }

    use proptest::prelude::*;

    proptest! {
        #[test]
        fn support_of_sum_without_cancellation(a in proptest::collection::vec(0i64..3, 6), b in proptest::collection::vec(0i64..3, 6), signs in proptest::collection::vec(any::<bool>(), 6)) {
            // same sign per coordinate, so no cancellation can occur
            let s = |v: &Vec<i64>| -> Vec<i64> { v.iter().zip(&signs).map(|(x, &neg)| if neg { -x } else { *x }).collect() };
            let (x, y) = (ev(&s(&a)), ev(&s(&b)));
            let sum = support(&(&x + &y));
            let ux = support(&x);
            let uy = support(&y);
            for arc in sum.arcs() {
                prop_assert!(ux.contains(arc) || uy.contains(arc));
            }
        }
    }
}
