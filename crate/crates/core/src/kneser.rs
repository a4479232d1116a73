//! Stable n-subsets of the cyclic ground set `[2n+k]` and the stable Kneser
//! (Schrijver) graph `SG(n,k)` they span.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A cyclically stable n-subset of `{1, ..., ground}`.
///
/// Elements are kept sorted and 1-based; modular arithmetic maps `0` back to
/// `ground`. Ordering is lexicographic on the sorted elements.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct StableSet {
    elements: Vec<u32>,
    ground: u32,
}

/// Reduce `x` into the 1-based range `1..=m`.
pub(crate) fn wrap(x: i64, m: u32) -> u32 {
    let m = i64::from(m);
    ((x - 1).rem_euclid(m) + 1) as u32
}

impl StableSet {
    /// Builds a stable set from arbitrary (possibly out-of-range) integers,
    /// reducing them mod `ground` and sorting.
    pub fn new<I: IntoIterator<Item = i64>>(elements: I, ground: u32) -> Result<Self> {
        if ground == 0 {
            return Err(Error::InvalidParameters("ground set must be nonempty".into()));
        }
        let mut elements: Vec<u32> = elements.into_iter().map(|x| wrap(x, ground)).collect();
        elements.sort_unstable();
        let len = elements.len();
        elements.dedup();
        if elements.len() != len {
            return Err(Error::InvalidParameters(format!("repeated element mod {ground}")));
        }
        let set = StableSet { elements, ground };
        if !set.is_stable() {
            return Err(Error::InvalidParameters(format!("{set} is not stable in [{ground}]")));
        }
        Ok(set)
    }

    pub(crate) fn from_sorted_unchecked(elements: Vec<u32>, ground: u32) -> Self {
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        StableSet { elements, ground }
    }

    pub fn elements(&self) -> &[u32] {
        &self.elements
    }

    pub fn ground(&self) -> u32 {
        self.ground
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: u32) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    /// No two cyclically consecutive elements.
    pub fn is_stable(&self) -> bool {
        let m = self.ground;
        if m == 1 {
            return self.elements.len() <= 1;
        }
        // A 2-element ground set is a 2-cycle: 1 and 2 are adjacent.
        let cyclic = self.elements.len() > 1 && self.elements.first() == Some(&1) && self.elements.last() == Some(&m);
        !cyclic && self.elements.windows(2).all(|w| w[1] - w[0] >= 2)
    }

    pub fn is_disjoint(&self, other: &StableSet) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.elements.len() && j < other.elements.len() {
            match self.elements[i].cmp(&other.elements[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return false,
            }
        }
        true
    }

    pub fn intersection_size(&self, other: &StableSet) -> usize {
        self.elements.iter().filter(|x| other.contains(**x)).count()
    }

    /// `α ⊕ j`: shift every element by `j` modulo the ground size.
    pub fn rotate(&self, j: i64) -> StableSet {
        self.map_elements(|x| i64::from(x) + j)
    }

    /// Apply an arbitrary map on ground elements, then canonicalize. The map
    /// must be a bijection of the ground set for the result to have the same
    /// size.
    pub(crate) fn map_elements<F: Fn(u32) -> i64>(&self, f: F) -> StableSet {
        let mut elements: Vec<u32> = self.elements.iter().map(|&x| wrap(f(x), self.ground)).collect();
        elements.sort_unstable();
        StableSet { elements, ground: self.ground }
    }

    /// Replace element `from` by `to` (both taken mod ground).
    pub(crate) fn replace(&self, from: u32, to: i64) -> StableSet {
        self.map_elements(|x| if x == from { to } else { i64::from(x) })
    }

    pub fn odd_part(&self) -> Vec<u32> {
        self.elements.iter().copied().filter(|x| x % 2 == 1).collect()
    }

    pub fn even_part(&self) -> Vec<u32> {
        self.elements.iter().copied().filter(|x| x % 2 == 0).collect()
    }

    pub fn even_count(&self) -> usize {
        self.elements.iter().filter(|x| *x % 2 == 0).count()
    }

    /// Canonical string form, e.g. `1.3.5`.
    pub fn key(&self) -> String {
        self.elements.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(".")
    }
}

impl fmt::Display for StableSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.elements.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

/// Parity class of a tight set: all of its elements share it.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum Parity {
    Odd,
    Even,
}

impl Parity {
    pub fn of(x: u32) -> Parity {
        if x % 2 == 1 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    pub fn flip(self) -> Parity {
        match self {
            Parity::Odd => Parity::Even,
            Parity::Even => Parity::Odd,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Tightness {
    Tight,
    Loose,
}

fn check_params(n: usize, k: usize) -> Result<()> {
    if n < 1 {
        return Err(Error::InvalidParameters(format!("n must be at least 1, got {n}")));
    }
    if 2 * n + k > u32::MAX as usize {
        return Err(Error::InvalidParameters("ground set too large".into()));
    }
    Ok(())
}

/// All cyclically stable n-subsets of `[2n+k]`, in lexicographic order.
pub fn enumerate_stable_sets(n: usize, k: usize) -> Result<Vec<StableSet>> {
    check_params(n, k)?;
    let ground = (2 * n + k) as u32;
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(n);
    extend_stable(&mut current, 1, n, ground, &mut out);
    Ok(out)
}

fn extend_stable(current: &mut Vec<u32>, next: u32, n: usize, ground: u32, out: &mut Vec<StableSet>) {
    if current.len() == n {
        let set = StableSet::from_sorted_unchecked(current.clone(), ground);
        if set.is_stable() {
            out.push(set);
        }
        return;
    }
    let remaining = (n - current.len()) as u32;
    let mut x = next;
    // Each remaining element needs a gap of at least one after it.
    while x + 2 * (remaining - 1) <= ground {
        current.push(x);
        extend_stable(current, x + 2, n, ground, out);
        current.pop();
        x += 1;
    }
}

/// Tight iff `α = {i, i+2, ..., i+2(n-1)}` modulo the ground size.
pub fn classify(alpha: &StableSet) -> Tightness {
    let n = alpha.len() as i64;
    let m = alpha.ground();
    let tight = alpha.elements().iter().any(|&i| {
        let candidate = StableSet::new((0..n).map(|t| i64::from(i) + 2 * t), m);
        matches!(candidate, Ok(c) if &c == alpha)
    });
    if tight {
        Tightness::Tight
    } else {
        Tightness::Loose
    }
}

pub fn is_tight(alpha: &StableSet) -> bool {
    classify(alpha) == Tightness::Tight
}

/// Parity of a tight set (`None` for a loose one, or a set of mixed parity).
pub fn tight_parity(alpha: &StableSet) -> Option<Parity> {
    if !is_tight(alpha) {
        return None;
    }
    let first = Parity::of(*alpha.elements().first()?);
    alpha.elements().iter().all(|&x| Parity::of(x) == first).then_some(first)
}

/// The stable Kneser graph `SG(n,k)`: stable n-sets adjacent iff disjoint.
#[derive(Clone, Debug)]
pub struct SchrijverGraph {
    n: usize,
    k: usize,
    vertices: Vec<StableSet>,
    adjacency: Vec<Vec<usize>>,
    index: HashMap<StableSet, usize>,
}

impl SchrijverGraph {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn ground(&self) -> u32 {
        (2 * self.n + self.k) as u32
    }

    pub fn vertices(&self) -> &[StableSet] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges as index pairs `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (u, nbrs) in self.adjacency.iter().enumerate() {
            out.extend(nbrs.iter().filter(|&&v| v > u).map(|&v| (u, v)));
        }
        out
    }

    pub fn index_of(&self, v: &StableSet) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn neighbor_indices(&self, u: usize) -> &[usize] {
        &self.adjacency[u]
    }

    /// Neighbors of `v` in lexicographic order.
    pub fn neighbors(&self, v: &StableSet) -> Result<Vec<StableSet>> {
        let u = self.index_of(v).ok_or_else(|| Error::UnknownVertex(v.to_string()))?;
        Ok(self.adjacency[u].iter().map(|&w| self.vertices[w].clone()).collect())
    }

    pub fn degree(&self, v: &StableSet) -> Result<usize> {
        let u = self.index_of(v).ok_or_else(|| Error::UnknownVertex(v.to_string()))?;
        Ok(self.adjacency[u].len())
    }

    pub fn adjacent(&self, a: &StableSet, b: &StableSet) -> bool {
        match (self.index_of(a), self.index_of(b)) {
            (Some(u), Some(v)) => self.adjacency[u].binary_search(&v).is_ok(),
            _ => false,
        }
    }

    pub fn tight_vertices(&self) -> impl Iterator<Item = &StableSet> {
        self.vertices.iter().filter(|v| is_tight(v))
    }

    pub fn loose_vertices(&self) -> impl Iterator<Item = &StableSet> {
        self.vertices.iter().filter(|v| !is_tight(v))
    }
}

/// Build `SG(n,k)`.
pub fn build_graph(n: usize, k: usize) -> Result<SchrijverGraph> {
    let vertices = enumerate_stable_sets(n, k)?;
    let mut adjacency = vec![Vec::new(); vertices.len()];
    for u in 0..vertices.len() {
        for v in (u + 1)..vertices.len() {
            if vertices[u].is_disjoint(&vertices[v]) {
                adjacency[u].push(v);
                adjacency[v].push(u);
            }
        }
    }
    let index = vertices.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
    Ok(SchrijverGraph { n, k, vertices, adjacency, index })
}

/// Extra data attached to a tight vertex of `SG(n,2)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TightData {
    /// The unique outer neighbor `η_α`.
    pub eta: StableSet,
    /// The element of `η_α` with the parity of `α`.
    pub p: u32,
    /// `η_α` with `p` replaced by `p-1`.
    pub flank_low: StableSet,
    /// `η_α` with `p` replaced by `p+1`.
    pub flank_high: StableSet,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NeighborProfile {
    pub vertex: StableSet,
    pub tightness: Tightness,
    /// Lexicographically ordered.
    pub immediate: Vec<StableSet>,
    /// Lexicographically ordered.
    pub outer: Vec<StableSet>,
    pub tight: Option<TightData>,
}

/// Immediate/outer split of the neighbors of `alpha` in `SG(n,2)`.
///
/// For loose vertices the immediate neighbors are `α ⊕ 1` and `α ⊖ 1`; the
/// rest are outer. Orbit membership is not enough: `{1,3,6} ⊕ 4 = {2,5,7}` is
/// a neighbor of `{1,3,6}` in `SG(3,2)` yet an outer one. For a tight vertex
/// the immediate neighbors are the opposite-parity tight sets and the outer
/// neighbor is the unique remaining one.
pub fn neighbor_profile(g: &SchrijverGraph, alpha: &StableSet) -> Result<NeighborProfile> {
    if g.k() != 2 {
        return Err(Error::RequiresK2(g.k()));
    }
    let neighbors = g.neighbors(alpha)?;
    let tightness = classify(alpha);
    match tightness {
        Tightness::Loose => {
            let shifts = [alpha.rotate(1), alpha.rotate(-1)];
            let (immediate, outer) = neighbors.into_iter().partition(|b| shifts.contains(b));
            Ok(NeighborProfile { vertex: alpha.clone(), tightness, immediate, outer, tight: None })
        }
        Tightness::Tight => {
            let parity = Parity::of(alpha.elements()[0]);
            let (immediate, outer): (Vec<_>, Vec<_>) =
                neighbors.into_iter().partition(|b| tight_parity(b) == Some(parity.flip()));
            if outer.len() != 1 {
                return Err(Error::LemmaViolation(format!("tight vertex {alpha} has {} outer neighbors", outer.len())));
            }
            let eta = outer[0].clone();
            let p = eta.elements().iter().copied().find(|&x| Parity::of(x) == parity).ok_or_else(|| {
                Error::LemmaViolation(format!("outer neighbor {eta} of {alpha} has no element of its parity"))
            })?;
            let flank_low = eta.replace(p, i64::from(p) - 1);
            let flank_high = eta.replace(p, i64::from(p) + 1);
            Ok(NeighborProfile {
                vertex: alpha.clone(),
                tightness,
                immediate,
                outer,
                tight: Some(TightData { eta, p, flank_low, flank_high }),
            })
        }
    }
}

/// Outer neighbors recomputed from the shift form: one element moved by +2,
/// every other element by +1, and the result a neighbor of `alpha`.
pub fn outer_neighbors_by_shift(g: &SchrijverGraph, alpha: &StableSet) -> Vec<StableSet> {
    let m = alpha.ground();
    let mut out: Vec<StableSet> = alpha
        .elements()
        .iter()
        .filter_map(|&pivot| {
            let shifted: Vec<i64> =
                alpha.elements().iter().map(|&x| i64::from(x) + if x == pivot { 2 } else { 1 }).collect();
            StableSet::new(shifted, m).ok()
        })
        .filter(|b| g.adjacent(alpha, b))
        .collect();
    out.sort();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(xs: &[i64], m: u32) -> StableSet {
        StableSet::new(xs.iter().copied(), m).unwrap()
    }

    #[test]
    fn enumerate_small_cases() {
        let s = enumerate_stable_sets(1, 2).unwrap();
        assert_eq!(s.iter().map(StableSet::key).collect::<Vec<_>>(), ["1", "2", "3", "4"]);
        let s = enumerate_stable_sets(2, 2).unwrap();
        assert_eq!(s.len(), 9);
        assert_eq!(s[0], set(&[1, 3], 6));
        assert_eq!(s[8], set(&[4, 6], 6));
        assert_eq!(enumerate_stable_sets(3, 2).unwrap().len(), 16);
    }

    #[test]
    fn rejects_n_zero() {
        assert!(enumerate_stable_sets(0, 2).is_err());
        assert!(build_graph(0, 3).is_err());
    }

    #[test]
    fn unstable_sets_rejected() {
        assert!(StableSet::new([1, 6], 6).is_err());
        assert!(StableSet::new([2, 3], 6).is_err());
        assert!(StableSet::new([1, 7], 6).is_err());
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(&set(&[1, 3, 5], 8)), Tightness::Tight);
        assert_eq!(classify(&set(&[1, 4], 6)), Tightness::Loose);
        assert_eq!(classify(&set(&[2, 6], 6)), Tightness::Tight);
    }

    #[test]
    fn rotate_examples() {
        assert_eq!(set(&[1, 4], 6).rotate(1), set(&[2, 5], 6));
        assert_eq!(set(&[1, 4], 6).rotate(0), set(&[1, 4], 6));
        assert_eq!(set(&[4, 6], 6).rotate(2), set(&[2, 6], 6));
        assert_eq!(set(&[4, 6], 6).rotate(-7), set(&[3, 5], 6));
    }

    #[test]
    fn profile_loose() {
        let g = build_graph(2, 2).unwrap();
        let p = neighbor_profile(&g, &set(&[1, 4], 6)).unwrap();
        assert_eq!(p.immediate, vec![set(&[2, 5], 6), set(&[3, 6], 6)]);
        assert_eq!(p.outer, vec![set(&[2, 6], 6), set(&[3, 5], 6)]);
        assert!(p.tight.is_none());
    }

    #[test]
    fn profile_tight() {
        let g = build_graph(2, 2).unwrap();
        let p = neighbor_profile(&g, &set(&[1, 3], 6)).unwrap();
        assert_eq!(p.immediate, vec![set(&[2, 4], 6), set(&[2, 6], 6), set(&[4, 6], 6)]);
        let t = p.tight.unwrap();
        assert_eq!(t.eta, set(&[2, 5], 6));
        assert_eq!(t.p, 5);
        assert_eq!(t.flank_low, set(&[2, 4], 6));
        assert_eq!(t.flank_high, set(&[2, 6], 6));
    }

    #[test]
    fn profile_n1_is_k4() {
        let g = build_graph(1, 2).unwrap();
        let nbrs = g.neighbors(&set(&[1], 4)).unwrap();
        assert_eq!(nbrs.len(), 3);
        assert!(nbrs.iter().all(is_tight));
        let p = neighbor_profile(&g, &set(&[1], 4)).unwrap();
        assert_eq!(p.tight.unwrap().eta, set(&[3], 4));
    }

    #[test]
    fn profile_requires_k2() {
        let g = build_graph(2, 1).unwrap();
        assert_eq!(neighbor_profile(&g, &set(&[1, 3], 5)), Err(Error::RequiresK2(1)));
    }

    #[test]
    fn small_graphs() {
        let g = build_graph(1, 2).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (4, 6));
        let g = build_graph(2, 2).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (9, 18));
        assert!(g.vertices().iter().all(|v| g.degree(v).unwrap() == 4));
        let g = build_graph(3, 2).unwrap();
        assert_eq!(g.vertex_count(), 16);
        assert!(g.loose_vertices().all(|v| g.degree(v).unwrap() == 4));
    }
}
