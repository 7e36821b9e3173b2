//! Exact H-polytopes: vertex enumeration by the double description method
//! and face lattices from vertex/facet incidences.
//!
//! This module knows nothing about graphs. It is the geometric oracle the
//! combinatorial constructions are checked against.

use std::collections::{HashMap, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::caps::Caps;
use crate::error::{check_cap, Error, Result};
use crate::poset::GradedPoset;
use crate::rational::{self, Q};

/// `normal . x <= offset`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Halfspace {
    pub normal: Vec<BigInt>,
    pub offset: BigInt,
}

impl Halfspace {
    pub fn slack(&self, x: &[Q]) -> Q {
        let lhs = self
            .normal
            .iter()
            .zip(x)
            .fold(Q::zero(), |acc, (a, b)| acc + Q::from_integer(a.clone()) * b);
        Q::from_integer(self.offset.clone()) - lhs
    }
}

#[derive(Clone, Debug)]
pub struct RationalPolytope {
    pub dim: usize,
    pub halfspaces: Vec<Halfspace>,
}

impl RationalPolytope {
    pub fn new(dim: usize, halfspaces: Vec<Halfspace>) -> Self {
        debug_assert!(halfspaces.iter().all(|h| h.normal.len() == dim));
        RationalPolytope { dim, halfspaces }
    }

    pub fn contains(&self, x: &[Q]) -> bool {
        self.halfspaces.iter().all(|h| !h.slack(x).is_negative())
    }

    /// Indices of the halfspaces tight at `x`.
    pub fn active_set(&self, x: &[Q]) -> Vec<usize> {
        (0..self.halfspaces.len())
            .filter(|&i| self.halfspaces[i].slack(x).is_zero())
            .collect()
    }
}

/// The axis box `[-r, r]^dim`.
pub fn cube(dim: usize, r: i64) -> RationalPolytope {
    let mut hs = Vec::new();
    for i in 0..dim {
        for s in [1i64, -1] {
            let mut normal = vec![BigInt::zero(); dim];
            normal[i] = BigInt::from(s);
            hs.push(Halfspace {
                normal,
                offset: BigInt::from(r),
            });
        }
    }
    RationalPolytope::new(dim, hs)
}

#[derive(Clone)]
struct Ray {
    v: Vec<BigInt>,
    zero: Vec<u64>,
}

fn primitive(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in &mut v {
            *x /= &g;
        }
    }
    v
}

fn bit(words: &[u64], i: usize) -> bool {
    words[i / 64] >> (i % 64) & 1 == 1
}

fn set_bit(words: &mut [u64], i: usize) {
    words[i / 64] |= 1 << (i % 64);
}

fn is_superset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & y == *y)
}

fn dot_int(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).fold(BigInt::zero(), |acc, (x, y)| acc + x * y)
}

/// Vertices of a bounded polytope, by incremental double description on the
/// homogenised cone `{(t, x) : t >= 0, offset * t - normal . x >= 0}`.
pub fn vertex_enumeration(p: &RationalPolytope, caps: &Caps) -> Result<Vec<Vec<Q>>> {
    check_cap("polytope dimension", p.dim as u128, caps.max_dim as u128)?;
    check_cap("halfspaces", p.halfspaces.len() as u128, caps.max_halfspaces as u128)?;
    if p.dim == 0 {
        return Ok(if p.halfspaces.iter().all(|h| !h.offset.is_negative()) {
            vec![Vec::new()]
        } else {
            Vec::new()
        });
    }
    let d = p.dim + 1;
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(p.halfspaces.len() + 1);
    let mut t_row = vec![BigInt::zero(); d];
    t_row[0] = BigInt::one();
    rows.push(t_row);
    for h in &p.halfspaces {
        let mut r = Vec::with_capacity(d);
        r.push(h.offset.clone());
        r.extend(h.normal.iter().map(|a| -a));
        rows.push(r);
    }
    let words = rows.len().div_ceil(64);

    // greedy basis of d independent rows, starting with t >= 0
    let mut basis: Vec<usize> = Vec::new();
    let to_q = |r: &Vec<BigInt>| r.iter().cloned().map(Q::from_integer).collect::<Vec<Q>>();
    let mut chosen: Vec<Vec<Q>> = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        let mut trial = chosen.clone();
        trial.push(to_q(r));
        if rational::rank(&trial) == trial.len() {
            chosen = trial;
            basis.push(i);
            if basis.len() == d {
                break;
            }
        }
    }
    if basis.len() < d {
        return Err(Error::Unbounded);
    }
    // initial rays: columns of the inverse of the basis matrix
    let mut rays: Vec<Ray> = Vec::with_capacity(d);
    for j in 0..d {
        let rhs: Vec<Q> = (0..d).map(|i| if i == j { rational::q_int(1) } else { Q::zero() }).collect();
        let sol = rational::solve(&chosen, &rhs).expect("basis rows are independent");
        let den = sol.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let v = primitive(sol.iter().map(|x| x.numer() * (&den / x.denom())).collect());
        let mut zero = vec![0u64; words];
        for (k, &i) in basis.iter().enumerate() {
            if k != j {
                set_bit(&mut zero, i);
            }
        }
        rays.push(Ray { v, zero });
    }
    let in_basis: Vec<bool> = (0..rows.len()).map(|i| basis.contains(&i)).collect();
    for (i, row) in rows.iter().enumerate() {
        if in_basis[i] {
            continue;
        }
        let s: Vec<BigInt> = rays.iter().map(|r| dot_int(row, &r.v)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&k| s[k].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&k| s[k].is_negative()).collect();
        if neg.is_empty() {
            for (k, r) in rays.iter_mut().enumerate() {
                if s[k].is_zero() {
                    set_bit(&mut r.zero, i);
                }
            }
            continue;
        }
        let mut next: Vec<Ray> = Vec::new();
        for &a in &pos {
            for &b in &neg {
                let common: Vec<u64> = rays[a].zero.iter().zip(&rays[b].zero).map(|(x, y)| x & y).collect();
                let count: u32 = common.iter().map(|w| w.count_ones()).sum();
                if (count as usize) + 2 < d {
                    continue;
                }
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(k, r)| k == a || k == b || !is_superset(&r.zero, &common));
                if !adjacent {
                    continue;
                }
                let (sa, sb) = (&s[a], -&s[b]);
                let v: Vec<BigInt> = rays[a]
                    .v
                    .iter()
                    .zip(&rays[b].v)
                    .map(|(x, y)| &sb * x + sa * y)
                    .collect();
                let mut zero = common;
                set_bit(&mut zero, i);
                next.push(Ray {
                    v: primitive(v),
                    zero,
                });
            }
        }
        for (k, r) in rays.iter().enumerate() {
            if s[k].is_positive() {
                next.push(r.clone());
            } else if s[k].is_zero() {
                let mut r = r.clone();
                set_bit(&mut r.zero, i);
                next.push(r);
            }
        }
        rays = next;
    }
    let mut out = Vec::with_capacity(rays.len());
    for r in rays {
        if !r.v[0].is_positive() {
            return Err(Error::Unbounded);
        }
        let t = Q::from_integer(r.v[0].clone());
        out.push(r.v[1..].iter().map(|x| Q::from_integer(x.clone()) / &t).collect());
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// A face of a polytope, identified by its vertex set.
#[derive(Clone, Debug, Serialize)]
pub struct GeometricFace {
    pub vertex_ids: Vec<usize>,
    /// Halfspaces tight on the whole face.
    pub active: Vec<usize>,
    pub dim: usize,
}

#[derive(Clone, Debug)]
pub struct FaceLattice {
    /// Nonempty faces ordered by inclusion, graded by dimension.
    pub poset: GradedPoset,
    pub vertices: Vec<Vec<Q>>,
    pub faces: Vec<GeometricFace>,
}

impl FaceLattice {
    /// Number of faces of each dimension, vertices first.
    pub fn f_vector(&self) -> Vec<usize> {
        let top = self.faces.iter().map(|f| f.dim).max().unwrap_or(0);
        let mut f = vec![0; top + 1];
        for face in &self.faces {
            f[face.dim] += 1;
        }
        f
    }
}

fn face_key(active: &[usize]) -> String {
    let parts: Vec<String> = active.iter().map(|i| i.to_string()).collect();
    format!("[{}]", parts.join(","))
}

/// Enumerates all nonempty faces: vertices by double description, facets as
/// the halfspaces whose tight vertex set spans a hyperplane, faces as
/// intersections of facets.
pub fn face_lattice_bruteforce(p: &RationalPolytope, caps: &Caps) -> Result<FaceLattice> {
    let vertices = vertex_enumeration(p, caps)?;
    if vertices.is_empty() {
        return Err(Error::Invariant("polytope is empty".into()));
    }
    let nv = vertices.len();
    let nh = p.halfspaces.len();
    let vwords = nv.div_ceil(64);
    let hwords = nh.div_ceil(64).max(1);
    let active: Vec<Vec<u64>> = vertices
        .iter()
        .map(|v| {
            let mut w = vec![0u64; hwords];
            for i in p.active_set(v) {
                set_bit(&mut w, i);
            }
            w
        })
        .collect();
    let normals: Vec<Vec<Q>> = p
        .halfspaces
        .iter()
        .map(|h| h.normal.iter().cloned().map(Q::from_integer).collect())
        .collect();
    let tight_of = |set: &[u64]| -> Vec<u64> {
        let mut acc = vec![u64::MAX; hwords];
        for v in (0..nv).filter(|&v| bit(set, v)) {
            for (a, b) in acc.iter_mut().zip(&active[v]) {
                *a &= b;
            }
        }
        acc
    };
    let dim_of = |tight: &[u64]| -> usize {
        let rows: Vec<Vec<Q>> = (0..nh).filter(|&i| bit(tight, i)).map(|i| normals[i].clone()).collect();
        p.dim - rational::rank(&rows)
    };
    let mut facets: Vec<Vec<u64>> = Vec::new();
    for h in 0..nh {
        let mut set = vec![0u64; vwords];
        for v in 0..nv {
            if bit(&active[v], h) {
                set_bit(&mut set, v);
            }
        }
        if set.iter().all(|w| *w == 0) || facets.contains(&set) {
            continue;
        }
        if p.dim >= 1 && dim_of(&tight_of(&set)) == p.dim - 1 {
            facets.push(set);
        }
    }
    let mut full = vec![0u64; vwords];
    for v in 0..nv {
        set_bit(&mut full, v);
    }
    let mut seen: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut sets: Vec<Vec<u64>> = Vec::new();
    let mut queue = VecDeque::new();
    seen.insert(full.clone(), 0);
    sets.push(full.clone());
    queue.push_back(full);
    while let Some(s) = queue.pop_front() {
        for f in &facets {
            let t: Vec<u64> = s.iter().zip(f).map(|(a, b)| a & b).collect();
            if t.iter().all(|w| *w == 0) || seen.contains_key(&t) {
                continue;
            }
            seen.insert(t.clone(), sets.len());
            check_cap("faces", sets.len() as u128 + 1, caps.max_poset as u128)?;
            sets.push(t.clone());
            queue.push_back(t);
        }
    }
    let mut faces: Vec<GeometricFace> = sets
        .iter()
        .map(|s| {
            let tight = tight_of(s);
            GeometricFace {
                vertex_ids: (0..nv).filter(|&v| bit(s, v)).collect(),
                active: (0..nh).filter(|&i| bit(&tight, i)).collect(),
                dim: dim_of(&tight),
            }
        })
        .collect();
    faces.sort_by(|a, b| (a.dim, &a.vertex_ids).cmp(&(b.dim, &b.vertex_ids)));
    let bitsets: Vec<Vec<u64>> = faces
        .iter()
        .map(|f| {
            let mut s = vec![0u64; vwords];
            for &v in &f.vertex_ids {
                set_bit(&mut s, v);
            }
            s
        })
        .collect();
    let keys = faces.iter().map(|f| face_key(&f.active)).collect();
    let grades = faces.iter().map(|f| f.dim as i64).collect();
    let poset = GradedPoset::from_strict_order(keys, grades, |a, b| {
        faces[a].vertex_ids.len() < faces[b].vertex_ids.len() && is_superset(&bitsets[b], &bitsets[a])
    });
    Ok(FaceLattice {
        poset,
        vertices,
        faces,
    })
}
