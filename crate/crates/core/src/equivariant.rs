//! The dihedral action on `[2n+2]`, the invariant sphere `M(SG(n,2))` and
//! facet-invariance checks.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kneser::{build_graph, neighbor_profile, tight_parity, Parity, StableSet};
use crate::morse::{
    acyclicity_certificate, collapse_to_critical, AcyclicityCertificate, FiberSelection, Matching, MorseData,
    MorseReport, QElement,
};
use crate::simplicial::{barycentric_subdivision, complexes_identical, face_poset, Complex, Face, VertexLabel};

/// `i ↦ i + shift` or, when reflected, `i ↦ (ground + 1 - i) + shift`, mod ground.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DihedralElement {
    pub shift: u32,
    pub reflected: bool,
    pub ground: u32,
}

impl DihedralElement {
    pub fn identity(ground: u32) -> Self {
        DihedralElement { shift: 0, reflected: false, ground }
    }

    pub fn rotation(shift: i64, ground: u32) -> Self {
        DihedralElement { shift: shift.rem_euclid(i64::from(ground)) as u32, reflected: false, ground }
    }

    pub fn reflection(ground: u32) -> Self {
        DihedralElement { shift: 0, reflected: true, ground }
    }

    /// All `2 · ground` elements: rotations first, then reflections.
    pub fn all(ground: u32) -> Vec<Self> {
        [false, true]
            .into_iter()
            .flat_map(|reflected| (0..ground).map(move |shift| DihedralElement { shift, reflected, ground }))
            .collect()
    }

    /// Image of a ground element, in `1..=ground`.
    pub fn apply_point(&self, i: u32) -> u32 {
        let g = i64::from(self.ground);
        let base = if self.reflected { g + 1 - i64::from(i) } else { i64::from(i) };
        ((base + i64::from(self.shift) - 1).rem_euclid(g) + 1) as u32
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &DihedralElement) -> DihedralElement {
        assert_eq!(self.ground, other.ground);
        // both maps are i ↦ ε i + c (mod ground)
        let g = i64::from(self.ground);
        let affine = |e: &DihedralElement| {
            if e.reflected {
                (-1, g + 1 + i64::from(e.shift))
            } else {
                (1, i64::from(e.shift))
            }
        };
        let (e1, c1) = affine(self);
        let (e2, c2) = affine(other);
        let (e, c) = (e1 * e2, e1 * c2 + c1);
        let shift = if e == 1 { c } else { c - (g + 1) };
        DihedralElement { shift: shift.rem_euclid(g) as u32, reflected: e == -1, ground: self.ground }
    }

    pub fn inverse(&self) -> DihedralElement {
        DihedralElement::all(self.ground)
            .into_iter()
            .find(|h| self.compose(h) == DihedralElement::identity(self.ground))
            .expect("group element has an inverse")
    }

    /// The permutation of `1..=ground`, as images of `1, 2, …`.
    pub fn permutation(&self) -> Vec<u32> {
        (1..=self.ground).map(|i| self.apply_point(i)).collect()
    }

    /// Whether odd elements go to even ones.
    pub fn swaps_parity(&self) -> bool {
        self.apply_point(1).is_multiple_of(2)
    }

    pub fn apply_set(&self, s: &StableSet) -> StableSet {
        s.map_elements(|x| i64::from(self.apply_point(x)))
    }
}

impl fmt::Display for DihedralElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.reflected {
            write!(f, "r^{}s", self.shift)
        } else {
            write!(f, "r^{}", self.shift)
        }
    }
}

/// The induced action on vertex labels.
pub fn apply_group(g: &DihedralElement, v: &VertexLabel) -> VertexLabel {
    match v {
        VertexLabel::Stable(s) => VertexLabel::Stable(g.apply_set(s)),
        VertexLabel::Midpoint(a, b) => VertexLabel::midpoint(g.apply_set(a), g.apply_set(b)),
        VertexLabel::Barycenter(p) => VertexLabel::Barycenter(if g.swaps_parity() { p.flip() } else { *p }),
        VertexLabel::Flag(sets) => VertexLabel::flag(sets.iter().map(|s| g.apply_set(s)).collect()),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutomorphismReport {
    pub n: usize,
    pub group_order: usize,
    pub distinct_permutations: usize,
    pub automorphisms: usize,
    pub failures: Vec<String>,
    pub passed: bool,
}

/// Every dihedral element maps stable sets to stable sets and edges to edges,
/// and distinct elements permute the vertices differently.
pub fn automorphism_report(n: usize) -> Result<AutomorphismReport> {
    let g = build_graph(n, 2)?;
    let elements = DihedralElement::all(g.ground());
    let mut failures = Vec::new();
    let mut perms = HashSet::new();
    let mut automorphisms = 0;
    for e in &elements {
        let images: Vec<StableSet> = g.vertices().iter().map(|v| e.apply_set(v)).collect();
        let stable = images.iter().all(|s| s.is_stable() && g.index_of(s).is_some());
        let adjacency = stable && g.edges().iter().all(|&(a, b)| g.adjacent(&images[a], &images[b]));
        if stable && adjacency {
            automorphisms += 1;
        } else {
            failures.push(format!("{e} is not an automorphism"));
        }
        perms.insert(images);
    }
    if perms.len() != elements.len() {
        failures.push(format!("only {} distinct permutations for {} elements", perms.len(), elements.len()));
    }
    Ok(AutomorphismReport {
        n,
        group_order: elements.len(),
        distinct_permutations: perms.len(),
        automorphisms,
        passed: failures.is_empty(),
        failures,
    })
}

pub fn verify_automorphisms(n: usize) -> bool {
    automorphism_report(n).map(|r| r.passed).unwrap_or(false)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementInvariance {
    pub element: String,
    pub invariant: bool,
    /// First facet (canonical labels) whose image is not a facet.
    pub violation: Option<Vec<String>>,
    pub image: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitReport {
    pub elements: Vec<ElementInvariance>,
    pub invariant: bool,
}

fn label_strings(face: &[VertexLabel]) -> Vec<String> {
    face.iter().map(ToString::to_string).collect()
}

/// Does `g` send every facet of `k` to a facet?
pub fn element_invariance(k: &Complex<VertexLabel>, g: &DihedralElement) -> ElementInvariance {
    let facets = k.facet_label_set();
    for f in &facets {
        let mut image: Vec<VertexLabel> = f.iter().map(|v| apply_group(g, v)).collect();
        image.sort();
        if !facets.contains(&image) {
            return ElementInvariance {
                element: g.to_string(),
                invariant: false,
                violation: Some(label_strings(f)),
                image: Some(label_strings(&image)),
            };
        }
    }
    ElementInvariance { element: g.to_string(), invariant: true, violation: None, image: None }
}

pub fn check_invariance(k: &Complex<VertexLabel>, n: usize) -> OrbitReport {
    let elements: Vec<ElementInvariance> =
        DihedralElement::all((2 * n + 2) as u32).iter().map(|g| element_invariance(k, g)).collect();
    OrbitReport { invariant: elements.iter().all(|e| e.invariant), elements }
}

/// Tight sets of one parity in lexicographic (= cyclic ring) order.
fn tight_of_parity(data: &MorseData, parity: Parity) -> Vec<StableSet> {
    data.graph().tight_vertices().filter(|s| tight_parity(s) == Some(parity)).cloned().collect()
}

fn subdivision_label(subset: &[StableSet], parity: Parity, size: usize) -> VertexLabel {
    match subset.len() {
        1 => VertexLabel::Stable(subset[0].clone()),
        2 => VertexLabel::midpoint(subset[0].clone(), subset[1].clone()),
        l if l == size => VertexLabel::Barycenter(parity),
        _ => VertexLabel::flag(subset.to_vec()),
    }
}

/// Intermediate data of the two-stage construction of `M`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MReport {
    pub n: usize,
    /// After the `Bα`/`Cα` collapses, with `F_o`, `F_e` intact.
    pub intermediate_f_vector: Vec<usize>,
    pub first_collapse: MorseReport,
    /// `N̄`: tight simplices subdivided and `η`-triangles split.
    pub subdivided_f_vector: Vec<usize>,
    pub psi_order_preserving: bool,
    pub psi_one_faces: usize,
    pub psi_perfect: bool,
    pub psi_certificate: AcyclicityCertificate,
    pub second_collapse: MorseReport,
    pub f_vector: Vec<usize>,
    pub agrees_with_direct: bool,
}

/// `M(SG(n,2))` from its facet list.
pub fn build_m_direct(n: usize) -> Result<Complex<VertexLabel>> {
    if n < 2 {
        return Err(Error::InvalidParameters(format!("M(SG(n,2)) needs n >= 2, got {n}")));
    }
    let g = build_graph(n, 2)?;
    let mut facets: Vec<Vec<VertexLabel>> = Vec::new();
    for parity in [Parity::Odd, Parity::Even] {
        let v: Vec<StableSet> = g.tight_vertices().filter(|s| tight_parity(s) == Some(parity)).cloned().collect();
        let b = VertexLabel::Barycenter(parity);
        for m in 0..v.len() {
            let (a, c) = (&v[m], &v[(m + 1) % v.len()]);
            let mid = VertexLabel::midpoint(a.clone(), c.clone());
            facets.push(vec![a.clone().into(), mid.clone(), b.clone()]);
            facets.push(vec![c.clone().into(), mid, b.clone()]);
        }
    }
    for alpha in g.vertices() {
        let p = neighbor_profile(&g, alpha)?;
        match &p.tight {
            Some(t) => {
                let mid = VertexLabel::midpoint(t.flank_low.clone(), t.flank_high.clone());
                facets.push(vec![t.flank_low.clone().into(), mid.clone(), t.eta.clone().into()]);
                facets.push(vec![t.flank_high.clone().into(), mid, t.eta.clone().into()]);
            }
            None => {
                for o in &p.outer {
                    let mut f: Vec<VertexLabel> = p.immediate.iter().cloned().map(Into::into).collect();
                    f.push(o.clone().into());
                    facets.push(f);
                }
            }
        }
    }
    let k = Complex::from_facets(facets.clone());
    if k.facet_count() != facets.len() {
        return Err(Error::LemmaViolation("direct facet list of M has repeats or nested facets".into()));
    }
    Ok(k)
}

/// `M(SG(n,2))` by collapsing, subdividing and collapsing again; checked
/// against [`build_m_direct`].
pub fn build_m(n: usize) -> Result<(Complex<VertexLabel>, MReport)> {
    if n < 2 {
        return Err(Error::InvalidParameters(format!("M(SG(n,2)) needs n >= 2, got {n}")));
    }
    let data = MorseData::build(n)?;
    let m1 = data.matching(FiberSelection::KeepTightSimplices)?;
    let (k1, first_collapse) = collapse_to_critical(data.complex(), data.poset(), &m1)?;

    let caps: Vec<(Parity, Vec<StableSet>)> =
        [Parity::Odd, Parity::Even].into_iter().map(|p| (p, tight_of_parity(&data, p))).collect();

    // N̄: keep every facet of K1 except F_o, F_e and the η-triangles.
    let mut facets: Vec<Vec<VertexLabel>> = Vec::new();
    for f in k1.facet_label_set() {
        let tight: Vec<&StableSet> =
            f.iter().filter_map(VertexLabel::as_stable).filter(|s| tight_parity(s).is_some()).collect();
        let is_cap = caps.iter().any(|(_, v)| f.len() == v.len() && tight.len() == v.len());
        if is_cap {
            continue;
        }
        if f.len() == 3 && tight.len() == 2 {
            let loose = f.iter().find(|v| v.as_stable().is_some_and(|s| tight_parity(s).is_none()));
            let Some(loose) = loose else {
                return Err(Error::LemmaViolation(format!(
                    "unexpected tight triangle {}",
                    label_strings(&f).join(", ")
                )));
            };
            if tight_parity(tight[0]) == tight_parity(tight[1]) {
                let mid = VertexLabel::midpoint(tight[0].clone(), tight[1].clone());
                facets.push(vec![tight[0].clone().into(), mid.clone(), loose.clone()]);
                facets.push(vec![tight[1].clone().into(), mid, loose.clone()]);
                continue;
            }
        }
        facets.push(f);
    }
    for (parity, v) in &caps {
        let sd = barycentric_subdivision(v);
        for f in sd.facets() {
            facets.push(f.iter().map(|&x| subdivision_label(sd.label(x), *parity, v.len())).collect());
        }
    }
    let nbar = Complex::from_facets(facets);
    for (a, b) in nbar.edges() {
        let (la, lb) = (nbar.label(a), nbar.label(b));
        if let (Some(x), Some(y)) = (la.as_stable(), lb.as_stable()) {
            if tight_parity(x).is_some() && tight_parity(x) == tight_parity(y) {
                return Err(Error::LemmaViolation(format!("edge {la} - {lb} survived the subdivision")));
            }
        }
    }

    // Ψ: faces of Sd(F_o) / Sd(F_e) go to 1_o / 1_e, except those inside a
    // triangle {v^m, mid(v^m, v^{m+1}), b} or {v^{m+1}, mid, b}, which go to 0.
    let poset = face_poset(&nbar);
    let zero_triangles: Vec<BTreeSet<u32>> = caps
        .iter()
        .flat_map(|(parity, v)| {
            let b = VertexLabel::Barycenter(*parity);
            (0..v.len()).flat_map(move |m| {
                let (a, c) = (v[m].clone(), v[(m + 1) % v.len()].clone());
                let mid = VertexLabel::midpoint(a.clone(), c.clone());
                [vec![a.into(), mid.clone(), b.clone()], vec![c.into(), mid, b.clone()]]
            })
        })
        .map(|t: Vec<VertexLabel>| t.iter().map(|l| nbar.vertex_id(l).expect("cap vertex")).collect())
        .collect();
    let in_cap = |l: &VertexLabel, parity: Parity| match l {
        VertexLabel::Stable(s) => tight_parity(s) == Some(parity),
        VertexLabel::Midpoint(a, _) => tight_parity(a) == Some(parity),
        VertexLabel::Flag(sets) => tight_parity(&sets[0]) == Some(parity),
        VertexLabel::Barycenter(p) => *p == parity,
    };
    let psi: Vec<QElement> = nbar
        .faces()
        .iter()
        .map(|x| {
            if zero_triangles.iter().any(|t| x.iter().all(|v| t.contains(v))) {
                return QElement::Zero;
            }
            for (parity, _) in &caps {
                if x.iter().all(|&v| in_cap(nbar.label(v), *parity)) {
                    return if *parity == Parity::Odd { QElement::OneOdd } else { QElement::OneEven };
                }
            }
            QElement::Zero
        })
        .collect();
    let psi_order_preserving = (0..poset.len()).all(|hi| poset.lower_covers(hi).iter().all(|&lo| psi[lo].le(&psi[hi])));

    let mut pairs = Vec::new();
    for (parity, _) in &caps {
        let b = nbar.vertex_id(&VertexLabel::Barycenter(*parity)).expect("barycenter");
        for (i, x) in nbar.faces().iter().enumerate() {
            if psi[i] == QElement::Zero || x.contains(&b) {
                continue;
            }
            if !x.iter().all(|&v| in_cap(nbar.label(v), *parity)) {
                continue;
            }
            let mut y: Face = x.clone();
            y.push(b);
            y.sort_unstable();
            let j = nbar
                .face_id(&y)
                .ok_or_else(|| Error::InvalidMatching(format!("face {i} ∪ b is not a face of the subdivision")))?;
            if psi[j] != psi[i] {
                return Err(Error::InvalidMatching(format!("face {i} and its cone leave the Ψ fiber")));
            }
            pairs.push((i, j));
        }
    }
    let m2 = Matching::new(&poset, pairs)?;
    let psi_one_faces = psi.iter().filter(|q| **q != QElement::Zero).count();
    let psi_perfect = 2 * m2.len() == psi_one_faces;
    if !psi_perfect {
        return Err(Error::InvalidMatching(format!(
            "Ψ matching covers {} of {psi_one_faces} faces in the 1-fibers",
            2 * m2.len()
        )));
    }
    if !psi_order_preserving {
        return Err(Error::InconsistentPosetMap { face: "N̄".into(), detail: "Ψ is not order-preserving".into() });
    }
    let psi_certificate = acyclicity_certificate(&m2, &poset);
    let (mk, second_collapse) = collapse_to_critical(&nbar, &poset, &m2)?;

    let direct = build_m_direct(n)?;
    let agrees_with_direct = complexes_identical(&mk, &direct);
    if !agrees_with_direct {
        return Err(Error::Mismatch(format!("M(SG({n},2)): collapse result differs from the direct facet list")));
    }
    let report = MReport {
        n,
        intermediate_f_vector: k1.f_vector(),
        first_collapse,
        subdivided_f_vector: nbar.f_vector(),
        psi_order_preserving,
        psi_one_faces,
        psi_perfect,
        psi_certificate,
        second_collapse,
        f_vector: mk.f_vector(),
        agrees_with_direct,
    };
    Ok((mk, report))
}

/// `M` f-vector: `((n+1)² + 2(n+1) + 2, 3(F/2) , 2n² + 8n + 6)`.
pub fn expected_m_f_vector(n: usize) -> Vec<usize> {
    let f = 2 * n * n + 8 * n + 6;
    vec![(n + 1) * (n + 1) + 2 * (n + 1) + 2, 3 * f / 2, f]
}
