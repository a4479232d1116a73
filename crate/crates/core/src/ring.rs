//! The concentric-ring triangulation of the sphere `Ñ(SG(n,2))`.
//!
//! Ring `P_i` holds the stable `n`-sets of `[2n+2]` with exactly `i` even
//! elements, cyclically ordered by `⊖2`. The rings are drawn as nested regular
//! polygons; consecutive rings are joined through unique common neighbors and
//! the innermost and outermost polygons are fanned from their anchors.

use std::collections::BTreeSet;
use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kneser::{enumerate_stable_sets, StableSet};
use crate::planar::RotationSystem;
use crate::simplicial::{Complex, VertexLabel};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingLayout {
    pub n: usize,
    /// `P_0 .. P_n`, each starting at its lex-first entry and following `⊖2`.
    pub rings: Vec<Vec<StableSet>>,
    pub anchors: Vec<StableSet>,
    /// Fan diagonals inside `P_0` and `P_n`.
    pub cap_diagonals: Vec<(StableSet, StableSet)>,
    /// Edges between `P_i` and `P_{i+1}`.
    pub inter_ring: Vec<(StableSet, StableSet)>,
    /// `up[i][j]`: the common neighbor in `P_{i+1}` of entries `j` and `j+1` of `P_i`.
    pub up: Vec<Vec<StableSet>>,
    /// `down[i][j]`: the common neighbor in `P_{i-1}` of entries `j` and `j+1`
    /// of `P_i` (empty for `i = 0`).
    pub down: Vec<Vec<StableSet>>,
}

impl RingLayout {
    pub fn ring(&self, i: usize) -> &[StableSet] {
        &self.rings[i]
    }
}

fn lemma(msg: String) -> Error {
    Error::LemmaViolation(msg)
}

/// `{1,3,…,2(n-i)-1, 2(n-i)+2, …, 2n}`: the lex-first stable set with `i`
/// even elements.
fn ring_start(n: usize, i: usize) -> Result<StableSet> {
    let ground = (2 * n + 2) as u32;
    let odd = (1..=(n - i)).map(|t| (2 * t - 1) as i64);
    let even = ((n - i + 1)..=n).map(|t| (2 * t) as i64);
    StableSet::new(odd.chain(even), ground)
}

/// The rings `P_0 .. P_n` with the lex-order lemma checked: every ring is the
/// `⊖2` orbit of its lex-first entry, and that entry has the closed form above.
pub fn ring_partition(n: usize) -> Result<RingLayout> {
    if n < 2 {
        return Err(Error::InvalidParameters(format!("ring construction needs n >= 2, got {n}")));
    }
    let all = enumerate_stable_sets(n, 2)?;
    let mut rings = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let mut members: Vec<StableSet> = all.iter().filter(|s| s.even_count() == i).cloned().collect();
        members.sort();
        if members.len() != n + 1 {
            return Err(lemma(format!("ring {i} has {} entries, expected {}", members.len(), n + 1)));
        }
        let first = members[0].clone();
        if first != ring_start(n, i)? {
            return Err(lemma(format!("ring {i} starts at {first}, not at the closed-form entry")));
        }
        let mut order = vec![first.clone()];
        for _ in 0..n {
            order.push(order.last().expect("nonempty").rotate(-2));
        }
        if order.last().expect("nonempty").rotate(-2) != first {
            return Err(lemma(format!("ring {i} does not close up under ⊖2")));
        }
        let mut sorted_order = order.clone();
        sorted_order.sort();
        if sorted_order != members {
            return Err(lemma(format!("ring {i}: ⊖2 orbit of {first} misses some entries")));
        }
        rings.push(order);
    }
    let anchors = rings.iter().map(|r| r[0].clone()).collect();
    Ok(RingLayout {
        n,
        rings,
        anchors,
        cap_diagonals: Vec::new(),
        inter_ring: Vec::new(),
        up: Vec::new(),
        down: Vec::new(),
    })
}

fn parts(s: &StableSet) -> (BTreeSet<u32>, BTreeSet<u32>) {
    (s.odd_part().into_iter().collect(), s.even_part().into_iter().collect())
}

/// Common neighbor of `a` and `a ⊖ 2` in ring `target`, checked for
/// uniqueness and against the closed form (loose rings) or the single free
/// element (tight rings).
fn common_neighbor(a: &StableSet, target: &[StableSet], upward: bool) -> Result<StableSet> {
    let b = a.rotate(-2);
    let size = a.len();
    let hits: Vec<&StableSet> =
        target.iter().filter(|p| a.intersection_size(p) + 1 == size && b.intersection_size(p) + 1 == size).collect();
    if hits.len() != 1 {
        return Err(lemma(format!(
            "{a} and {b} have {} common neighbors in the {} ring",
            hits.len(),
            if upward { "next" } else { "previous" }
        )));
    }
    let formula = if a.even_count() == 0 || a.even_count() == size {
        // tight: π = (α ∩ (α⊖2)) ∪ {p}, and only one p avoids α ∪ (α⊖2)
        // and the neighbors of α ∩ (α⊖2)
        let common: Vec<u32> = a.elements().iter().copied().filter(|&x| b.contains(x)).collect();
        let ground = a.ground();
        let blocked = |x: u32| {
            a.contains(x) || b.contains(x) || common.iter().any(|&c| x == c % ground + 1 || c == x % ground + 1)
        };
        let free: Vec<u32> = (1..=ground).filter(|&x| !blocked(x)).collect();
        if free.len() != 1 {
            return Err(lemma(format!("{a} and {b}: {} admissible extra elements", free.len())));
        }
        StableSet::new(common.into_iter().chain(free).map(i64::from), ground)
    } else {
        let (ao, ae) = parts(a);
        let (bo, be) = parts(&b);
        let (odd, even): (Vec<u32>, Vec<u32>) = if upward {
            (ao.intersection(&bo).copied().collect(), ae.union(&be).copied().collect())
        } else {
            (ao.union(&bo).copied().collect(), ae.intersection(&be).copied().collect())
        };
        StableSet::new(odd.into_iter().chain(even).map(i64::from), a.ground())
    };
    if formula.as_ref() != Ok(hits[0]) {
        return Err(lemma(format!("common neighbor {} of {a} and {b} disagrees with the closed form", hits[0])));
    }
    Ok(hits[0].clone())
}

/// Ring `i` common neighbors: entry `j` for the pair `(ring[j], ring[j+1])`,
/// with the commutation `π(α ⊖ 2) = π(α) ⊖ 2` checked.
fn ring_neighbors(ring: &[StableSet], target: &[StableSet], upward: bool) -> Result<Vec<StableSet>> {
    let pis: Vec<StableSet> = ring.iter().map(|a| common_neighbor(a, target, upward)).collect::<Result<_>>()?;
    let m = pis.len();
    for j in 0..m {
        if pis[(j + 1) % m] != pis[j].rotate(-2) {
            return Err(lemma(format!("common neighbor of {} does not commute with ⊖2", ring[j])));
        }
    }
    Ok(pis)
}

/// Build the ring triangulation and the rotation system of its drawing.
///
/// Ring `i` is a regular polygon, each strictly enclosing the previous one. Each common neighbor in
/// `P_{i+1}` sits angularly between its two neighbors in `P_i`; the
/// commutation lemma makes this a rigid offset for the whole ring. The outer
/// cap is drawn with arcs outside `P_n`, so its triangles are oriented
/// opposite to their straight-line area.
pub fn build_ring_complex(n: usize) -> Result<(Complex<VertexLabel>, RotationSystem, RingLayout)> {
    let mut layout = ring_partition(n)?;
    let m = n + 1;
    let step = TAU / m as f64;
    let mut offset = vec![0.0f64; m];
    let mut up = Vec::new();
    let mut down = vec![Vec::new()];
    let mut triangles: Vec<([StableSet; 3], bool)> = Vec::new();

    for i in 0..n {
        let (lower, upper) = (&layout.rings[i], &layout.rings[i + 1]);
        let pis = ring_neighbors(lower, upper, true)?;
        let sigmas = ring_neighbors(upper, lower, false)?;
        let c = upper.iter().position(|p| *p == pis[0]).expect("neighbor lies in the ring");
        offset[i + 1] = offset[i] + (0.5 - c as f64) * step;
        for j in 0..m {
            let (a, b) = (&lower[j], &lower[(j + 1) % m]);
            triangles.push(([a.clone(), b.clone(), pis[j].clone()], false));
            layout.inter_ring.push((a.clone(), pis[j].clone()));
            let (a, b) = (&upper[j], &upper[(j + 1) % m]);
            triangles.push(([a.clone(), b.clone(), sigmas[j].clone()], false));
            layout.inter_ring.push((sigmas[j].clone(), a.clone()));
        }
        up.push(pis);
        down.push(sigmas);
    }
    layout.inter_ring.sort();
    layout.inter_ring.dedup();
    for &(cap, outer) in &[(0usize, false), (n, true)] {
        let ring = &layout.rings[cap];
        for j in 1..m - 1 {
            triangles.push(([ring[0].clone(), ring[j].clone(), ring[j + 1].clone()], outer));
        }
        for d in ring.iter().take(m - 1).skip(2) {
            layout.cap_diagonals.push((ring[0].clone(), d.clone()));
        }
    }
    layout.up = up;
    layout.down = down;

    let position = |s: &StableSet| -> (f64, f64) {
        let i = s.even_count();
        let j = layout.rings[i].iter().position(|x| x == s).expect("every vertex is in its ring");
        let angle = offset[i] + j as f64 * step;
        // chords of P_{i+1} must clear P_i: r_{i+1} cos(π/m) > r_i
        let r = (1.5 / (step / 2.0).cos()).powi(i as i32);
        (r * angle.cos(), r * angle.sin())
    };

    let complex = Complex::from_facets(
        triangles.iter().map(|(t, _)| t.iter().cloned().map(VertexLabel::from).collect::<Vec<_>>()),
    );
    if complex.facet_count() != triangles.len() {
        return Err(lemma("ring triangulation lists a triangle twice".into()));
    }
    let mut oriented = Vec::with_capacity(triangles.len());
    for (t, outer) in &triangles {
        let [p, q, r] = [position(&t[0]), position(&t[1]), position(&t[2])];
        let area = (q.0 - p.0) * (r.1 - p.1) - (q.1 - p.1) * (r.0 - p.0);
        if area.abs() < 1e-9 {
            return Err(lemma(format!("degenerate triangle {{{}, {}, {}}} in the drawing", t[0], t[1], t[2])));
        }
        let id = |s: &StableSet| complex.vertex_id(&VertexLabel::from(s.clone())).expect("vertex present");
        let ids = [id(&t[0]), id(&t[1]), id(&t[2])];
        oriented.push(if (area > 0.0) != *outer { ids } else { [ids[0], ids[2], ids[1]] });
    }
    let rotation = RotationSystem::from_oriented_triangles(complex.vertex_count(), &oriented)?;
    Ok((complex, rotation, layout))
}

/// `((n+1)², 3(n²+2n-1), 2n²+4n-2)`.
pub fn expected_f_vector(n: usize) -> Vec<usize> {
    vec![(n + 1) * (n + 1), 3 * (n * n + 2 * n - 1), 2 * n * n + 4 * n - 2]
}

/// The outer cap triangle `{anchor, P_n[1], P_n[2]}` containing the even
/// anchor `{2, 4, …, 2n}`, as vertex ids of `k`.
pub fn outer_cap_face(k: &Complex<VertexLabel>, layout: &RingLayout) -> Result<Vec<u32>> {
    let ring = &layout.rings[layout.n];
    let mut face = Vec::with_capacity(3);
    for s in [&ring[0], &ring[1], &ring[2]] {
        face.push(k.vertex_id(&VertexLabel::from(s.clone())).ok_or_else(|| Error::UnknownVertex(s.to_string()))?);
    }
    face.sort_unstable();
    Ok(face)
}
