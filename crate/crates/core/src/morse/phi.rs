//! The poset map `Φ` from the face poset of `N(SG(n,2))` to `Q(n,2)` and the
//! fiberwise matchings that collapse the neighborhood complex onto a 2-sphere.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::Matching;
use crate::error::{Error, Result};
use crate::kneser::{build_graph, is_tight, neighbor_profile, tight_parity, Parity, SchrijverGraph, StableSet};
use crate::simplicial::{face_poset, neighborhood_complex, Complex, Face, FacePoset, VertexLabel};

/// Elements of the target posets: `Q(n,2)` (`A`, `B`, `Bα`, `Cα`) and the
/// two-chain poset `{0, 1_o, 1_e}` used after subdivision.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum QElement {
    A,
    B,
    BLoose(StableSet),
    CTight(StableSet),
    Zero,
    OneOdd,
    OneEven,
}

impl QElement {
    /// The partial order: `A < Bα`, `A < B < Cα`, `0 < 1_o`, `0 < 1_e`.
    pub fn le(&self, other: &QElement) -> bool {
        use QElement::*;
        self == other
            || matches!(
                (self, other),
                (A, BLoose(_)) | (A, B) | (A, CTight(_)) | (B, CTight(_)) | (Zero, OneOdd) | (Zero, OneEven)
            )
    }
}

impl fmt::Display for QElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QElement::A => write!(f, "A"),
            QElement::B => write!(f, "B"),
            QElement::BLoose(a) => write!(f, "B[{}]", a.key()),
            QElement::CTight(a) => write!(f, "C[{}]", a.key()),
            QElement::Zero => write!(f, "0"),
            QElement::OneOdd => write!(f, "1_o"),
            QElement::OneEven => write!(f, "1_e"),
        }
    }
}

/// Per-facet data `Σ_γ`, in vertex ids of the neighborhood complex.
#[derive(Clone, Debug)]
enum FacetRule {
    Loose {
        center: StableSet,
        vertices: Vec<u32>,
        /// Lex-first immediate neighbor: the vertex `a` inserted in the `Bα` fiber.
        a: u32,
        outer: [u32; 2],
    },
    Tight {
        center: StableSet,
        vertices: Vec<u32>,
        /// `v^1 .. v^{n+1}`, lexicographically.
        v: Vec<u32>,
        eta: u32,
        flank_low: u32,
        flank_high: u32,
    },
}

impl FacetRule {
    fn vertices(&self) -> &[u32] {
        match self {
            FacetRule::Loose { vertices, .. } | FacetRule::Tight { vertices, .. } => vertices,
        }
    }

    fn center(&self) -> &StableSet {
        match self {
            FacetRule::Loose { center, .. } | FacetRule::Tight { center, .. } => center,
        }
    }

    /// `θ_α` or `φ_α` on a face of this facet.
    fn evaluate(&self, x: &[u32]) -> QElement {
        match self {
            FacetRule::Loose { center, outer, .. } => {
                if x.contains(&outer[0]) && x.contains(&outer[1]) {
                    QElement::BLoose(center.clone())
                } else {
                    QElement::A
                }
            }
            FacetRule::Tight { center, v, eta, flank_low, flank_high, .. } => {
                if x.len() == 1 || x.iter().all(|y| y == eta || y == flank_low || y == flank_high) {
                    return QElement::A;
                }
                if x.contains(eta) {
                    return QElement::CTight(center.clone());
                }
                // positions 1..=n+1 in the lex labeling
                let mut pos: Vec<usize> =
                    x.iter().map(|y| v.iter().position(|w| w == y).expect("face of Σ_α") + 1).collect();
                pos.sort_unstable();
                let polygon = match pos.as_slice() {
                    [r, s] => *r == 1 || *s == r + 1,
                    [1, r, s] => *s == r + 1,
                    _ => false,
                };
                if polygon {
                    QElement::A
                } else {
                    QElement::B
                }
            }
        }
    }
}

/// Which non-`A` fibers receive their matching.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FiberSelection {
    /// `Bα`, `B` and `Cα`: the full collapse onto `Φ⁻¹(A)`.
    All,
    /// `Bα` and `Cα` only, leaving the tight simplices `F_o`, `F_e` intact.
    KeepTightSimplices,
}

/// Face counts per fiber and the matched/unmatched split.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberAudit {
    pub a_faces: usize,
    pub b_faces: usize,
    pub b_loose_faces: usize,
    pub c_faces: usize,
    pub matched_faces: usize,
    /// Faces outside `Φ⁻¹(A)` left unmatched by a selected fiber matching.
    pub unmatched_outside_a: usize,
    /// Matched pairs whose two faces lie in different fibers.
    pub cross_fiber_pairs: usize,
}

/// `N(SG(n,2))` together with the per-facet rules and the values of `Φ`.
#[derive(Clone, Debug)]
pub struct MorseData {
    n: usize,
    graph: SchrijverGraph,
    complex: Complex<VertexLabel>,
    poset: FacePoset,
    rules: Vec<FacetRule>,
    /// Facets (rule indices) containing each vertex.
    vertex_rules: Vec<Vec<usize>>,
    values: Vec<QElement>,
    /// Lex-first tight set of each parity, as vertex ids.
    v1_odd: u32,
    v1_even: u32,
}

impl MorseData {
    /// Build `N(SG(n,2))`, evaluate `Φ` on every face and assert that every
    /// per-facet evaluation agrees.
    pub fn build(n: usize) -> Result<Self> {
        let graph = build_graph(n, 2)?;
        let complex = neighborhood_complex(&graph);
        let poset = face_poset(&complex);
        let id = |s: &StableSet| complex.vertex_id(&VertexLabel::Stable(s.clone())).expect("vertex of N");
        let mut rules = Vec::with_capacity(graph.vertex_count());
        for gamma in graph.vertices() {
            let profile = neighbor_profile(&graph, gamma)?;
            let mut vertices: Vec<u32> = graph.neighbors(gamma)?.iter().map(id).collect();
            vertices.sort_unstable();
            let rule = match &profile.tight {
                None => {
                    if profile.immediate.len() != 2 || profile.outer.len() != 2 {
                        return Err(Error::LemmaViolation(format!(
                            "loose vertex {gamma} has {} immediate and {} outer neighbors",
                            profile.immediate.len(),
                            profile.outer.len()
                        )));
                    }
                    FacetRule::Loose {
                        center: gamma.clone(),
                        vertices,
                        a: id(&profile.immediate[0]),
                        outer: [id(&profile.outer[0]), id(&profile.outer[1])],
                    }
                }
                Some(t) => FacetRule::Tight {
                    center: gamma.clone(),
                    vertices,
                    v: profile.immediate.iter().map(id).collect(),
                    eta: id(&t.eta),
                    flank_low: id(&t.flank_low),
                    flank_high: id(&t.flank_high),
                },
            };
            rules.push(rule);
        }
        let mut vertex_rules = vec![Vec::new(); complex.vertex_count()];
        for (r, rule) in rules.iter().enumerate() {
            for &v in rule.vertices() {
                vertex_rules[v as usize].push(r);
            }
        }
        let lex_first = |parity: Parity| {
            graph
                .tight_vertices()
                .find(|s| tight_parity(s) == Some(parity))
                .map(id)
                .expect("tight sets of both parities")
        };
        let (v1_odd, v1_even) = (lex_first(Parity::Odd), lex_first(Parity::Even));
        let mut data = MorseData { n, graph, complex, poset, rules, vertex_rules, values: Vec::new(), v1_odd, v1_even };
        data.values =
            (0..data.complex.face_count()).map(|i| data.evaluate(&data.complex.faces()[i])).collect::<Result<_>>()?;
        Ok(data)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn graph(&self) -> &SchrijverGraph {
        &self.graph
    }

    pub fn complex(&self) -> &Complex<VertexLabel> {
        &self.complex
    }

    pub fn poset(&self) -> &FacePoset {
        &self.poset
    }

    /// `Φ` on every face, indexed by face id.
    pub fn values(&self) -> &[QElement] {
        &self.values
    }

    /// Facets `Σ_γ` containing the face.
    fn containing_rules<'a>(&'a self, x: &'a [u32]) -> impl Iterator<Item = &'a FacetRule> + 'a {
        self.vertex_rules[x[0] as usize]
            .iter()
            .map(|&r| &self.rules[r])
            .filter(move |rule| x.iter().all(|v| rule.vertices().binary_search(v).is_ok()))
    }

    fn evaluate(&self, x: &[u32]) -> Result<QElement> {
        let mut value: Option<(QElement, &StableSet)> = None;
        for rule in self.containing_rules(x) {
            let q = rule.evaluate(x);
            match &value {
                None => value = Some((q, rule.center())),
                Some((prev, center)) if *prev != q => {
                    return Err(Error::InconsistentPosetMap {
                        face: self.face_string(x),
                        detail: format!("Σ_{center} gives {prev}, Σ_{} gives {q}", rule.center()),
                    });
                }
                _ => {}
            }
        }
        value.map(|(q, _)| q).ok_or_else(|| Error::InconsistentPosetMap {
            face: self.face_string(x),
            detail: "face lies in no facet".into(),
        })
    }

    fn face_string(&self, x: &[u32]) -> String {
        let parts: Vec<String> = x.iter().map(|&v| self.complex.label(v).to_string()).collect();
        format!("{{{}}}", parts.join(", "))
    }

    /// `Φ(x)` for a face given by stable sets.
    pub fn phi_value(&self, x: &[StableSet]) -> Result<QElement> {
        let labels: Vec<VertexLabel> = x.iter().cloned().map(VertexLabel::Stable).collect();
        let face = self
            .complex
            .face_id_of_labels(&labels)
            .ok_or_else(|| Error::InvalidParameters(format!("{x:?} is not a face of N(SG({},2))", self.n)))?;
        Ok(self.values[face].clone())
    }

    /// Number of facets containing each face (≥ 2 marks a shared face).
    pub fn shared_face_count(&self) -> usize {
        self.complex.faces().iter().filter(|f| self.containing_rules(f).nth(1).is_some()).count()
    }

    /// `x ⊆ y ⇒ Φ(x) ≤ Φ(y)`, checked on every cover relation.
    pub fn is_order_preserving(&self) -> bool {
        (0..self.poset.len())
            .all(|hi| self.poset.lower_covers(hi).iter().all(|&lo| self.values[lo].le(&self.values[hi])))
    }

    fn rule_for(&self, center: &StableSet) -> &FacetRule {
        let idx = self.graph.index_of(center).expect("center is a vertex");
        &self.rules[idx]
    }

    /// The vertex inserted/removed to match face `x` within its fiber.
    fn toggle_vertex(&self, x: &Face, q: &QElement, selection: FiberSelection) -> Option<u32> {
        match q {
            QElement::BLoose(alpha) => match self.rule_for(alpha) {
                FacetRule::Loose { a, .. } => Some(*a),
                FacetRule::Tight { .. } => None,
            },
            QElement::B if selection == FiberSelection::All => {
                let parity = self.complex.label(x[0]).as_stable().and_then(tight_parity)?;
                Some(match parity {
                    Parity::Odd => self.v1_odd,
                    Parity::Even => self.v1_even,
                })
            }
            QElement::CTight(alpha) => match self.rule_for(alpha) {
                FacetRule::Tight { flank_low, .. } => Some(*flank_low),
                FacetRule::Loose { .. } => None,
            },
            _ => None,
        }
    }

    /// The fiberwise matchings, unioned.
    pub fn matching(&self, selection: FiberSelection) -> Result<Matching> {
        let mut pairs = Vec::new();
        for (i, x) in self.complex.faces().iter().enumerate() {
            let q = &self.values[i];
            let Some(t) = self.toggle_vertex(x, q, selection) else { continue };
            if x.contains(&t) {
                continue;
            }
            let mut y = x.clone();
            y.push(t);
            y.sort_unstable();
            let j = self.complex.face_id(&y).ok_or_else(|| {
                Error::InvalidMatching(format!("{} ∪ {{{}}} is not a face", self.face_string(x), self.complex.label(t)))
            })?;
            pairs.push((i, j));
        }
        Matching::new(&self.poset, pairs)
    }

    pub fn audit(&self, m: &Matching, selection: FiberSelection) -> FiberAudit {
        let partners = m.partners(self.poset.len());
        let mut audit = FiberAudit::default();
        for (i, q) in self.values.iter().enumerate() {
            match q {
                QElement::A => audit.a_faces += 1,
                QElement::B => audit.b_faces += 1,
                QElement::BLoose(_) => audit.b_loose_faces += 1,
                QElement::CTight(_) => audit.c_faces += 1,
                _ => {}
            }
            let selected = match q {
                QElement::A => false,
                QElement::B => selection == FiberSelection::All,
                _ => true,
            };
            match partners[i] {
                Some(_) => audit.matched_faces += 1,
                None if selected => audit.unmatched_outside_a += 1,
                None => {}
            }
        }
        audit.cross_fiber_pairs = m.pairs().iter().filter(|(lo, hi)| self.values[*lo] != self.values[*hi]).count();
        audit
    }

    /// Face ids of `Φ⁻¹(A)`.
    pub fn a_fiber(&self) -> Vec<usize> {
        (0..self.values.len()).filter(|&i| self.values[i] == QElement::A).collect()
    }

    /// Distinct `Φ` values with the number of faces in each fiber.
    pub fn fiber_sizes(&self) -> BTreeMap<QElement, usize> {
        let mut out = BTreeMap::new();
        for q in &self.values {
            *out.entry(q.clone()).or_insert(0) += 1;
        }
        out
    }

    /// Tight vertices of the complex, as a set of ids.
    pub fn tight_ids(&self) -> HashSet<u32> {
        (0..self.complex.vertex_count() as u32)
            .filter(|&v| self.complex.label(v).as_stable().is_some_and(is_tight))
            .collect()
    }
}

/// `Φ(x)` on `N(SG(n,2))`.
pub fn phi_value(x: &[StableSet], n: usize) -> Result<QElement> {
    MorseData::build(n)?.phi_value(x)
}

/// The union of the fiberwise matchings on `N(SG(n,2))`.
pub fn build_global_matching(n: usize) -> Result<Matching> {
    MorseData::build(n)?.matching(FiberSelection::All)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::morse::verify_acyclicity;

    fn s(xs: &[i64]) -> StableSet {
        StableSet::new(xs.iter().copied(), 6).unwrap()
    }

    #[test]
    fn phi_examples_n2() {
        let d = MorseData::build(2).unwrap();
        assert_eq!(d.phi_value(&[s(&[2, 6]), s(&[3, 5])]).unwrap(), QElement::BLoose(s(&[1, 4])));
        for v in d.graph().vertices() {
            assert_eq!(d.phi_value(std::slice::from_ref(v)).unwrap(), QElement::A);
        }
        assert_eq!(d.phi_value(&[s(&[2, 6]), s(&[4, 6]), s(&[2, 5])]).unwrap(), QElement::CTight(s(&[1, 3])));
        assert_eq!(d.phi_value(&[s(&[2, 4]), s(&[2, 6])]).unwrap(), QElement::A);
        assert!(d.phi_value(&[s(&[1, 3]), s(&[2, 4])]).is_err());
    }

    #[test]
    fn order_relation() {
        let a = s(&[1, 4]);
        assert!(QElement::A.le(&QElement::BLoose(a.clone())));
        assert!(QElement::B.le(&QElement::CTight(s(&[1, 3]))));
        assert!(!QElement::B.le(&QElement::BLoose(a.clone())));
        assert!(!QElement::BLoose(a).le(&QElement::A));
        assert!(QElement::Zero.le(&QElement::OneEven));
        assert!(!QElement::OneOdd.le(&QElement::OneEven));
    }

    #[test]
    fn bloose_fiber_pairs_n2() {
        let d = MorseData::build(2).unwrap();
        let m = d.matching(FiberSelection::All).unwrap();
        let c = d.complex();
        let face = |xs: &[&[i64]]| {
            let labels: Vec<VertexLabel> = xs.iter().map(|x| VertexLabel::Stable(s(x))).collect();
            c.face_id_of_labels(&labels).unwrap()
        };
        let pairs = m.pairs();
        assert!(pairs.contains(&(face(&[&[2, 6], &[3, 5]]), face(&[&[2, 5], &[2, 6], &[3, 5]]))));
        assert!(pairs.contains(&(face(&[&[2, 6], &[3, 5], &[3, 6]]), face(&[&[2, 5], &[2, 6], &[3, 5], &[3, 6]]))));
        // for n = 2 the tight simplices are the cap triangles: no B fiber
        assert!(d.values().iter().all(|q| *q != QElement::B));
    }

    #[test]
    fn b_fiber_inserts_v1_n3() {
        let d = MorseData::build(3).unwrap();
        let m = d.matching(FiberSelection::All).unwrap();
        let t = |xs: &[i64]| VertexLabel::Stable(StableSet::new(xs.iter().copied(), 8).unwrap());
        // odd tights in lex order: v1={1,3,5}, v2={1,3,7}, v3={1,5,7}, v4={3,5,7}
        let c = d.complex();
        let lo = c.face_id_of_labels(&[t(&[1, 3, 7]), t(&[3, 5, 7])]).unwrap();
        let hi = c.face_id_of_labels(&[t(&[1, 3, 5]), t(&[1, 3, 7]), t(&[3, 5, 7])]).unwrap();
        assert_eq!(d.values()[lo], QElement::B);
        assert!(m.pairs().contains(&(lo, hi)));
    }

    #[test]
    fn n1_is_untouched() {
        let d = MorseData::build(1).unwrap();
        assert!(d.values().iter().all(|q| *q == QElement::A));
        assert!(d.matching(FiberSelection::All).unwrap().is_empty());
    }

    #[test]
    fn global_matching_acyclic_small() {
        for n in 2..=3 {
            let d = MorseData::build(n).unwrap();
            let m = d.matching(FiberSelection::All).unwrap();
            assert!(verify_acyclicity(&m, d.poset()));
            let audit = d.audit(&m, FiberSelection::All);
            assert_eq!(audit.unmatched_outside_a, 0);
            assert_eq!(audit.cross_fiber_pairs, 0);
            assert!(d.is_order_preserving());
        }
    }
}
