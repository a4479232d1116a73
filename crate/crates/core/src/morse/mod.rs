//! Discrete Morse theory on face posets: matchings, acyclicity certificates
//! and execution of the induced simplicial collapse.

mod phi;

use std::collections::VecDeque;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::simplicial::{Complex, FacePoset, Vertex};

pub use phi::{build_global_matching, phi_value, FiberAudit, FiberSelection, MorseData, QElement};

/// A partial matching on the Hasse diagram of a face poset, as
/// `(face, coface)` id pairs.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matching {
    pairs: Vec<(usize, usize)>,
}

impl Matching {
    /// Checks that every pair is a cover relation of `poset` and that no face
    /// is used twice.
    pub fn new(poset: &FacePoset, mut pairs: Vec<(usize, usize)>) -> Result<Self> {
        let mut used = vec![false; poset.len()];
        for &(lo, hi) in &pairs {
            if lo >= poset.len() || hi >= poset.len() || !poset.covers(lo, hi) {
                return Err(Error::InvalidMatching(format!("({lo}, {hi}) is not a cover relation")));
            }
            for x in [lo, hi] {
                if std::mem::replace(&mut used[x], true) {
                    return Err(Error::InvalidMatching(format!("face {x} is matched twice")));
                }
            }
        }
        pairs.sort_unstable();
        Ok(Matching { pairs })
    }

    pub fn empty() -> Self {
        Matching::default()
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// `partner[i]` is the face matched with `i`, if any.
    pub fn partners(&self, faces: usize) -> Vec<Option<usize>> {
        let mut out = vec![None; faces];
        for &(lo, hi) in &self.pairs {
            out[lo] = Some(hi);
            out[hi] = Some(lo);
        }
        out
    }
}

/// Result of the strongly-connected-component analysis of the modified
/// Hasse digraph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AcyclicityCertificate {
    pub acyclic: bool,
    pub nodes: usize,
    pub arcs: usize,
    /// Size of the largest strongly connected component (1 when acyclic).
    pub largest_component: usize,
}

/// Direct every cover downward except matched covers, which point upward;
/// the matching is acyclic iff this digraph has no directed cycle.
pub fn acyclicity_certificate(m: &Matching, poset: &FacePoset) -> AcyclicityCertificate {
    let partners = m.partners(poset.len());
    let mut g: DiGraph<(), ()> = DiGraph::with_capacity(poset.len(), poset.cover_count());
    let nodes: Vec<_> = (0..poset.len()).map(|_| g.add_node(())).collect();
    for hi in 0..poset.len() {
        for &lo in poset.lower_covers(hi) {
            if partners[lo] == Some(hi) {
                g.add_edge(nodes[lo], nodes[hi], ());
            } else {
                g.add_edge(nodes[hi], nodes[lo], ());
            }
        }
    }
    let largest_component = tarjan_scc(&g).iter().map(Vec::len).max().unwrap_or(0);
    AcyclicityCertificate {
        acyclic: largest_component <= 1,
        nodes: g.node_count(),
        arcs: g.edge_count(),
        largest_component,
    }
}

pub fn verify_acyclicity(m: &Matching, poset: &FacePoset) -> bool {
    acyclicity_certificate(m, poset).acyclic
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorseReport {
    /// Critical cells per dimension.
    pub critical_counts: Vec<usize>,
    pub input_f_vector: Vec<usize>,
    pub input_euler: i64,
    pub critical_euler: i64,
    pub matched_pairs: usize,
    /// Elementary collapses performed, each certified free at removal time.
    pub collapse_steps: usize,
    pub certificate: AcyclicityCertificate,
}

/// Collapse `k` along an acyclic matching onto its critical cells.
///
/// The critical cells must form a subcomplex. The collapse itself is executed
/// as a sequence of elementary collapses `(σ, τ)` where `τ` is maximal and
/// `σ` has `τ` as its only remaining coface.
pub fn collapse_to_critical<V: Vertex>(
    k: &Complex<V>,
    poset: &FacePoset,
    m: &Matching,
) -> Result<(Complex<V>, MorseReport)> {
    let certificate = acyclicity_certificate(m, poset);
    if !certificate.acyclic {
        return Err(Error::InvalidMatching(format!(
            "matching has a cycle (strongly connected component of size {})",
            certificate.largest_component
        )));
    }
    let partners = m.partners(poset.len());
    let critical_ids: Vec<usize> = (0..poset.len()).filter(|&i| partners[i].is_none()).collect();
    let critical = k.subcomplex(critical_ids.iter().copied())?;

    let collapse_steps = execute_collapse(poset, m)?;

    let mut critical_counts = vec![0; (k.dimension() + 1).max(0) as usize];
    for &i in &critical_ids {
        critical_counts[poset.dim(i)] += 1;
    }
    let critical_euler =
        critical_counts.iter().enumerate().map(|(d, &c)| if d % 2 == 0 { c as i64 } else { -(c as i64) }).sum();
    let report = MorseReport {
        critical_counts,
        input_f_vector: k.f_vector(),
        input_euler: k.euler_characteristic(),
        critical_euler,
        matched_pairs: m.len(),
        collapse_steps,
        certificate,
    };
    Ok((critical, report))
}

/// Remove matched pairs as elementary collapses; fails if at some point no
/// remaining pair is free.
fn execute_collapse(poset: &FacePoset, m: &Matching) -> Result<usize> {
    let n = poset.len();
    let mut alive = vec![true; n];
    let mut up_count: Vec<usize> = (0..n).map(|i| poset.upper_covers(i).len()).collect();
    let mut pair_of = vec![usize::MAX; n];
    for (p, &(lo, hi)) in m.pairs().iter().enumerate() {
        pair_of[lo] = p;
        pair_of[hi] = p;
    }
    let mut done = vec![false; m.len()];
    let mut queue: VecDeque<usize> = (0..m.len()).collect();
    let mut steps = 0;
    while let Some(p) = queue.pop_front() {
        if done[p] {
            continue;
        }
        let (lo, hi) = m.pairs()[p];
        if up_count[hi] != 0 || up_count[lo] != 1 {
            continue;
        }
        done[p] = true;
        steps += 1;
        for x in [hi, lo] {
            alive[x] = false;
            for &f in poset.lower_covers(x) {
                up_count[f] -= 1;
                if alive[f] && pair_of[f] != usize::MAX && !done[pair_of[f]] {
                    queue.push_back(pair_of[f]);
                }
            }
        }
    }
    if steps != m.len() {
        return Err(Error::CollapseFailed(format!(
            "{} of {} matched pairs could not be removed as free faces",
            m.len() - steps,
            m.len()
        )));
    }
    Ok(steps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::face_poset;

    fn square() -> Complex<u32> {
        Complex::from_facets([[0u32, 1], [1, 2], [2, 3], [0, 3]])
    }

    #[test]
    fn empty_matching_is_acyclic_and_keeps_everything() {
        let k = Complex::from_facets([[0u32, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]);
        let p = face_poset(&k);
        assert!(verify_acyclicity(&Matching::empty(), &p));
        let (c, r) = collapse_to_critical(&k, &p, &Matching::empty()).unwrap();
        assert_eq!(c.f_vector(), k.f_vector());
        assert_eq!(r.critical_counts, k.f_vector());
    }

    #[test]
    fn cyclic_matching_on_square_is_rejected() {
        let k = square();
        let p = face_poset(&k);
        let id = |f: &[u32]| k.face_id(f).unwrap();
        // each vertex matched with the next edge around the square
        let pairs =
            vec![(id(&[0]), id(&[0, 1])), (id(&[1]), id(&[1, 2])), (id(&[2]), id(&[2, 3])), (id(&[3]), id(&[0, 3]))];
        let m = Matching::new(&p, pairs).unwrap();
        assert!(!verify_acyclicity(&m, &p));
        assert!(collapse_to_critical(&k, &p, &m).is_err());
    }

    #[test]
    fn triangle_collapses_to_an_edge() {
        let k = Complex::from_facets([[0u32, 1, 2]]);
        let p = face_poset(&k);
        let id = |f: &[u32]| k.face_id(f).unwrap();
        let m = Matching::new(&p, vec![(id(&[1, 2]), id(&[0, 1, 2])), (id(&[2]), id(&[0, 2]))]).unwrap();
        let (c, r) = collapse_to_critical(&k, &p, &m).unwrap();
        assert_eq!(c.f_vector(), vec![2, 1]);
        assert_eq!(r.collapse_steps, 2);
        assert_eq!(r.critical_euler, r.input_euler);
    }

    #[test]
    fn rejects_non_covers_and_double_use() {
        let k = square();
        let p = face_poset(&k);
        let id = |f: &[u32]| k.face_id(f).unwrap();
        assert!(Matching::new(&p, vec![(id(&[0]), id(&[1, 2]))]).is_err());
        assert!(Matching::new(&p, vec![(id(&[0]), id(&[0, 1])), (id(&[0]), id(&[0, 3]))]).is_err());
    }

    #[test]
    fn critical_cells_must_be_a_subcomplex() {
        let k = Complex::from_facets([[0u32, 1]]);
        let p = face_poset(&k);
        // leaves edge {0,1} critical while its vertex {0} is matched away
        let m = Matching::new(&p, vec![]).unwrap();
        assert!(collapse_to_critical(&k, &p, &m).is_ok());
        let tri = Complex::from_facets([[0u32, 1, 2]]);
        let p = face_poset(&tri);
        let id = |f: &[u32]| tri.face_id(f).unwrap();
        let m = Matching::new(&p, vec![(id(&[0]), id(&[0, 1]))]).unwrap();
        assert!(matches!(collapse_to_critical(&tri, &p, &m), Err(Error::NotASubcomplex(_))));
    }
}
