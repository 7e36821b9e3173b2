//! Finite graded posets stored by their cover relations, and an
//! order-isomorphism checker (colour refinement plus backtracking).

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{check_cap, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedPoset {
    keys: Vec<String>,
    grades: Vec<i64>,
    /// `(lower, upper)` pairs.
    covers: Vec<(usize, usize)>,
    #[serde(skip)]
    up: Vec<Vec<usize>>,
    #[serde(skip)]
    down: Vec<Vec<usize>>,
}

/// Dense bitset rows, used for order relations.
#[derive(Clone, Debug)]
pub(crate) struct BitMatrix {
    words: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    pub(crate) fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        BitMatrix {
            words,
            bits: vec![0; words * n],
        }
    }

    pub(crate) fn set(&mut self, i: usize, j: usize) {
        self.bits[i * self.words + j / 64] |= 1 << (j % 64);
    }

    pub(crate) fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }
}

impl GradedPoset {
    /// Builds from explicit cover pairs `(lower, upper)`.
    pub fn from_covers(keys: Vec<String>, grades: Vec<i64>, mut covers: Vec<(usize, usize)>) -> Self {
        assert_eq!(keys.len(), grades.len());
        covers.sort_unstable();
        covers.dedup();
        let n = keys.len();
        let mut up = vec![Vec::new(); n];
        let mut down = vec![Vec::new(); n];
        for &(a, b) in &covers {
            up[a].push(b);
            down[b].push(a);
        }
        GradedPoset {
            keys,
            grades,
            covers,
            up,
            down,
        }
    }

    /// Builds from a strict order predicate `lt(a, b)` meaning `a < b`.
    /// Covers are computed as the transitive reduction.
    pub fn from_strict_order(
        keys: Vec<String>,
        grades: Vec<i64>,
        lt: impl Fn(usize, usize) -> bool,
    ) -> Self {
        let n = keys.len();
        let mut above = BitMatrix::new(n);
        for a in 0..n {
            for b in 0..n {
                if a != b && lt(a, b) {
                    above.set(a, b);
                }
            }
        }
        let covers = transitive_reduction(n, &above);
        Self::from_covers(keys, grades, covers)
    }

    /// Re-attaches derived adjacency after deserialisation.
    pub fn rebuilt(self) -> Self {
        Self::from_covers(self.keys, self.grades, self.covers)
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn keys(&self) -> &[String] {
        &self.keys
    }

    pub fn grades(&self) -> &[i64] {
        &self.grades
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn up(&self, x: usize) -> &[usize] {
        &self.up[x]
    }

    pub fn down(&self, x: usize) -> &[usize] {
        &self.down[x]
    }

    pub fn index_of(&self, key: &str) -> Option<usize> {
        self.keys.iter().position(|k| k == key)
    }

    /// Number of elements per grade, lowest grade first.
    pub fn grade_counts(&self) -> Vec<usize> {
        let mut counts: BTreeMap<i64, usize> = BTreeMap::new();
        for &g in &self.grades {
            *counts.entry(g).or_default() += 1;
        }
        counts.into_values().collect()
    }

    pub fn maxima(&self) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.up[x].is_empty()).collect()
    }

    /// `a <= b` by reachability along covers.
    pub fn leq(&self, a: usize, b: usize) -> bool {
        if a == b {
            return true;
        }
        let mut seen = vec![false; self.len()];
        let mut stack = vec![a];
        while let Some(x) = stack.pop() {
            for &y in &self.up[x] {
                if y == b {
                    return true;
                }
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        false
    }

    /// Covers form a DAG and raise the grade by exactly one.
    pub fn is_graded(&self) -> bool {
        self.covers
            .iter()
            .all(|&(a, b)| self.grades[b] == self.grades[a] + 1)
    }

    pub fn to_dot(&self, name: &str) -> String {
        let mut s = format!("digraph \"{}\" {{\n  rankdir=BT;\n", name.replace('"', "'"));
        for (i, k) in self.keys.iter().enumerate() {
            let _ = writeln!(
                s,
                "  n{i} [label=\"{}\\n(grade {})\"];",
                k.replace('"', "'"),
                self.grades[i]
            );
        }
        for &(a, b) in &self.covers {
            let _ = writeln!(s, "  n{a} -> n{b};");
        }
        s.push_str("}\n");
        s
    }

    /// The same poset with elements permuted: element `i` moves to `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let n = self.len();
        let mut keys = vec![String::new(); n];
        let mut grades = vec![0; n];
        for i in 0..n {
            keys[perm[i]] = self.keys[i].clone();
            grades[perm[i]] = self.grades[i];
        }
        let covers = self.covers.iter().map(|&(a, b)| (perm[a], perm[b])).collect();
        Self::from_covers(keys, grades, covers)
    }

    /// Quotient by a class assignment. Classes are ordered when some members
    /// compare; covers are the transitive reduction of that relation.
    pub fn quotient(&self, class_of: &[usize], class_keys: Vec<String>) -> Self {
        let k = class_keys.len();
        let mut grades = vec![i64::MIN; k];
        for (x, &c) in class_of.iter().enumerate() {
            grades[c] = grades[c].max(self.grades[x]);
        }
        let mut rel = BitMatrix::new(k);
        for &(a, b) in &self.covers {
            if class_of[a] != class_of[b] {
                rel.set(class_of[a], class_of[b]);
            }
        }
        let closed = transitive_closure(k, &rel);
        let covers = transitive_reduction(k, &closed);
        Self::from_covers(class_keys, grades, covers)
    }
}

fn transitive_closure(n: usize, rel: &BitMatrix) -> BitMatrix {
    let mut out = rel.clone();
    for k in 0..n {
        for i in 0..n {
            if out.get(i, k) {
                for w in 0..out.words {
                    let v = out.bits[k * out.words + w];
                    out.bits[i * out.words + w] |= v;
                }
            }
        }
    }
    out
}

/// Covers of a strict order given by its full relation `above[a][b] = a < b`.
fn transitive_reduction(n: usize, above: &BitMatrix) -> Vec<(usize, usize)> {
    // a < b implies down(a) is a proper subset of down(b)
    let mut below_count = vec![0u32; n];
    for a in 0..n {
        for b in 0..n {
            if above.get(a, b) {
                below_count[b] += 1;
            }
        }
    }
    let mut covers = Vec::new();
    for a in 0..n {
        let mut ups: Vec<usize> = (0..n).filter(|&b| above.get(a, b)).collect();
        ups.sort_by_key(|&b| (below_count[b], b));
        let mut accepted: Vec<usize> = Vec::new();
        for b in ups {
            if accepted.iter().all(|&c| !above.get(c, b)) {
                accepted.push(b);
            }
        }
        covers.extend(accepted.into_iter().map(|b| (a, b)));
    }
    covers
}

/// Finds an order isomorphism `p -> q`, returned as `witness[i] = image of i`.
/// Grades are not consulted; only the cover relation matters.
///
/// Colour refinement on the Hasse diagrams, then individualisation of one
/// element at a time with backtracking over its possible images.
pub fn poset_isomorphic(p: &GradedPoset, q: &GradedPoset, cap: usize) -> Result<Option<Vec<usize>>> {
    check_cap("poset elements", p.len().max(q.len()) as u128, cap as u128)?;
    if p.len() != q.len() || p.covers.len() != q.covers.len() {
        return Ok(None);
    }
    if p.is_empty() {
        return Ok(Some(Vec::new()));
    }
    let (cp, cq) = initial_colours(p, q);
    let found = individualise(p, q, cp, cq);
    if let Some(w) = &found {
        debug_assert!(verify_isomorphism(p, q, w));
    }
    Ok(found)
}

fn histogram(c: &[usize]) -> BTreeMap<usize, usize> {
    let mut h: BTreeMap<usize, usize> = BTreeMap::new();
    for &x in c {
        *h.entry(x).or_default() += 1;
    }
    h
}

fn individualise(p: &GradedPoset, q: &GradedPoset, cp: Vec<usize>, cq: Vec<usize>) -> Option<Vec<usize>> {
    let (cp, cq) = refine(p, q, cp, cq);
    let hist = histogram(&cp);
    if hist != histogram(&cq) {
        return None;
    }
    // smallest nontrivial colour class, first element of p in it
    let split = hist.iter().filter(|(_, &k)| k > 1).min_by_key(|(&c, &k)| (k, c));
    let Some((&colour, _)) = split else {
        let mut image: HashMap<usize, usize> = HashMap::new();
        for (y, &c) in cq.iter().enumerate() {
            image.insert(c, y);
        }
        let w: Vec<usize> = cp.iter().map(|c| image[c]).collect();
        return verify_isomorphism(p, q, &w).then_some(w);
    };
    let x = cp.iter().position(|&c| c == colour).expect("colour present");
    let fresh = hist.keys().last().expect("nonempty") + 1;
    for y in (0..q.len()).filter(|&y| cq[y] == colour) {
        let (mut cp2, mut cq2) = (cp.clone(), cq.clone());
        cp2[x] = fresh;
        cq2[y] = fresh;
        if let Some(w) = individualise(p, q, cp2, cq2) {
            return Some(w);
        }
    }
    None
}

/// Checks that `w` is a bijection carrying covers exactly onto covers.
pub fn verify_isomorphism(p: &GradedPoset, q: &GradedPoset, w: &[usize]) -> bool {
    if w.len() != p.len() || p.len() != q.len() {
        return false;
    }
    let mut hit = vec![false; q.len()];
    for &y in w {
        if y >= q.len() || hit[y] {
            return false;
        }
        hit[y] = true;
    }
    let mut mapped: Vec<(usize, usize)> = p.covers.iter().map(|&(a, b)| (w[a], w[b])).collect();
    mapped.sort_unstable();
    mapped == q.covers
}

fn initial_colours(p: &GradedPoset, q: &GradedPoset) -> (Vec<usize>, Vec<usize>) {
    let mut table: HashMap<(usize, usize), usize> = HashMap::new();
    let mut colour = |x: &GradedPoset| -> Vec<usize> {
        let h_down = longest_chain(x, true);
        let h_up = longest_chain(x, false);
        (0..x.len())
            .map(|i| {
                let next = table.len();
                *table.entry((h_down[i], h_up[i])).or_insert(next)
            })
            .collect()
    };
    let cp = colour(p);
    let cq = colour(q);
    (cp, cq)
}

/// Joint refinement: colours are renumbered from a table shared by both
/// posets, so equal colours mean equal refined signatures.
fn refine(p: &GradedPoset, q: &GradedPoset, mut cp: Vec<usize>, mut cq: Vec<usize>) -> (Vec<usize>, Vec<usize>) {
    let classes = |c: &[usize]| c.iter().collect::<std::collections::HashSet<_>>().len();
    let mut table: HashMap<Vec<usize>, usize> = HashMap::new();
    loop {
        let before = classes(&cp) + classes(&cq);
        table.clear();
        let mut step = |x: &GradedPoset, c: &[usize]| -> Vec<usize> {
            (0..x.len())
                .map(|i| {
                    let mut ups: Vec<usize> = x.up[i].iter().map(|&j| c[j]).collect();
                    let mut downs: Vec<usize> = x.down[i].iter().map(|&j| c[j]).collect();
                    ups.sort_unstable();
                    downs.sort_unstable();
                    let mut sig = vec![c[i], ups.len()];
                    sig.extend(ups);
                    sig.push(usize::MAX);
                    sig.extend(downs);
                    let next = table.len();
                    *table.entry(sig).or_insert(next)
                })
                .collect()
        };
        let np = step(p, &cp);
        let nq = step(q, &cq);
        cp = np;
        cq = nq;
        if classes(&cp) + classes(&cq) == before {
            return (cp, cq);
        }
    }
}

/// Longest chain length to a minimal (`downward`) or maximal element.
fn longest_chain(x: &GradedPoset, downward: bool) -> Vec<usize> {
    let n = x.len();
    let (nbr, rev) = if downward { (&x.down, &x.up) } else { (&x.up, &x.down) };
    let mut pending: Vec<usize> = nbr.iter().map(Vec::len).collect();
    let mut h = vec![0; n];
    let mut ready: Vec<usize> = (0..n).filter(|&i| pending[i] == 0).collect();
    while let Some(i) = ready.pop() {
        for &j in &rev[i] {
            h[j] = h[j].max(h[i] + 1);
            pending[j] -= 1;
            if pending[j] == 0 {
                ready.push(j);
            }
        }
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(n: usize) -> GradedPoset {
        let keys = (0..n).map(|i| i.to_string()).collect();
        let grades = (0..n as i64).collect();
        GradedPoset::from_covers(keys, grades, (1..n).map(|i| (i - 1, i)).collect())
    }

    fn antichain(n: usize) -> GradedPoset {
        GradedPoset::from_covers((0..n).map(|i| i.to_string()).collect(), vec![0; n], vec![])
    }

    /// Face poset of a hexagon (6 vertices, 6 edges, 1 cell), without the empty face.
    fn hexagon() -> GradedPoset {
        let mut keys = Vec::new();
        let mut grades = Vec::new();
        for i in 0..6 {
            keys.push(format!("v{i}"));
            grades.push(0);
        }
        for i in 0..6 {
            keys.push(format!("e{i}"));
            grades.push(1);
        }
        keys.push("P".into());
        grades.push(2);
        let mut covers = Vec::new();
        for i in 0..6 {
            covers.push((i, 6 + i));
            covers.push(((i + 1) % 6, 6 + i));
            covers.push((6 + i, 12));
        }
        GradedPoset::from_covers(keys, grades, covers)
    }

    #[test]
    fn chain_vs_antichain() {
        assert!(poset_isomorphic(&chain(2), &antichain(2), 100).unwrap().is_none());
        assert!(poset_isomorphic(&chain(3), &chain(3), 100).unwrap().is_some());
    }

    #[test]
    fn shuffled_copy_is_isomorphic() {
        let h = hexagon();
        let perm: Vec<usize> = (0..13).map(|i| (i * 5 + 3) % 13).collect();
        let shuffled = h.permuted(&perm);
        let w = poset_isomorphic(&h, &shuffled, 100).unwrap().unwrap();
        assert!(verify_isomorphism(&h, &shuffled, &w));
    }

    #[test]
    fn pentagon_is_not_hexagon() {
        let h = hexagon();
        let mut keys = Vec::new();
        let mut covers = Vec::new();
        for i in 0..5 {
            keys.push(format!("v{i}"));
        }
        for i in 0..5 {
            keys.push(format!("e{i}"));
            covers.push((i, 5 + i));
            covers.push(((i + 1) % 5, 5 + i));
            covers.push((5 + i, 10));
        }
        keys.push("P".into());
        let mut grades = vec![0; 5];
        grades.extend(vec![1; 5]);
        grades.push(2);
        let p = GradedPoset::from_covers(keys, grades, covers);
        assert!(poset_isomorphic(&h, &p, 100).unwrap().is_none());
    }

    #[test]
    fn transitive_reduction_of_divisibility() {
        let n = 12;
        let keys: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
        let p = GradedPoset::from_strict_order(keys, vec![0; n], |a, b| a != b && (b + 1) % (a + 1) == 0);
        assert!(p.covers().contains(&(1, 3))); // 2 | 4
        assert!(!p.covers().contains(&(0, 3))); // 1 < 2 < 4
        assert!(p.leq(0, 11));
        assert!(!p.leq(4, 5));
    }

    #[test]
    fn size_cap() {
        assert!(poset_isomorphic(&chain(5), &chain(5), 3).is_err());
    }

    #[test]
    fn quotient_of_hexagon_by_rotation() {
        let h = hexagon();
        let class_of: Vec<usize> = (0..13)
            .map(|i| if i < 6 { i % 2 } else if i < 12 { 2 + (i - 6) % 3 } else { 5 })
            .collect();
        let keys = (0..6).map(|i| format!("c{i}")).collect();
        let qp = h.quotient(&class_of, keys);
        assert_eq!(qp.grade_counts(), vec![2, 3, 1]);
        assert!(qp.is_graded());
    }

    #[test]
    fn dot_and_json() {
        let h = hexagon();
        let dot = h.to_dot("hex");
        assert!(dot.starts_with("digraph \"hex\" {"));
        assert_eq!(dot.matches("->").count(), 18);
        let js = serde_json::to_string(&h).unwrap();
        let back: GradedPoset = serde_json::from_str::<GradedPoset>(&js).unwrap().rebuilt();
        assert_eq!(back, h);
    }
}
