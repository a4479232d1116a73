//! Brute-force recomputations of counts the library derives structurally.

use itertools::Itertools;
use kneser_sphere::equivariant::{build_m_direct, expected_m_f_vector};
use kneser_sphere::kneser::{build_graph, enumerate_stable_sets, is_tight};
use kneser_sphere::ring::{build_ring_complex, expected_f_vector};
use kneser_sphere::simplicial::{barycentric_subdivision, homology, neighborhood_complex};

fn brute_stable_sets(n: usize, k: usize) -> Vec<Vec<u32>> {
    let ground = (2 * n + k) as u32;
    (1..=ground).combinations(n).filter(|c| c.iter().all(|&x| !c.contains(&(x % ground + 1)))).collect()
}

#[test]
fn stable_sets_match_brute_force() {
    for k in 2..=3 {
        for n in 1..=6 {
            let lib: Vec<Vec<u32>> =
                enumerate_stable_sets(n, k).unwrap().iter().map(|s| s.elements().to_vec()).collect();
            assert_eq!(lib, brute_stable_sets(n, k), "n = {n}, k = {k}");
        }
    }
}

#[test]
fn graph_edges_match_disjointness() {
    for n in 1..=6 {
        let g = build_graph(n, 2).unwrap();
        let sets = brute_stable_sets(n, 2);
        let edges = sets.iter().tuple_combinations().filter(|(a, b)| a.iter().all(|x| !b.contains(x))).count();
        assert_eq!(g.edge_count(), edges, "n = {n}");
        let tight = g.vertices().iter().filter(|s| is_tight(s)).count();
        assert_eq!(tight, 2 * n + 2);
    }
}

#[test]
fn neighborhood_complex_facets_are_neighborhoods() {
    for n in 2..=4 {
        let g = build_graph(n, 2).unwrap();
        let k = neighborhood_complex(&g);
        for v in g.vertices() {
            let nbrs: Vec<_> = g.neighbors(v).unwrap().into_iter().map(Into::into).collect();
            assert!(k.contains_labels(&nbrs));
        }
        assert!(k.facet_count() <= g.vertex_count());
    }
}

/// Chains of nonempty subsets of a `(d+1)`-set, by length.
fn chain_counts(d: usize) -> Vec<usize> {
    let subsets: Vec<u32> = (1u32..(1 << (d + 1))).collect();
    let mut counts = vec![0; d + 1];
    fn extend(last: u32, len: usize, subsets: &[u32], counts: &mut [usize]) {
        counts[len - 1] += 1;
        for &s in subsets {
            if s != last && s & last == last {
                extend(s, len + 1, subsets, counts);
            }
        }
    }
    for &s in &subsets {
        extend(s, 1, &subsets, &mut counts);
    }
    counts
}

#[test]
fn subdivision_face_counts_are_chain_counts() {
    for d in 0..=4 {
        let verts: Vec<u32> = (0..=d as u32).collect();
        assert_eq!(barycentric_subdivision(&verts).f_vector(), chain_counts(d), "d = {d}");
    }
}

#[test]
fn closed_forms_match_enumeration() {
    for n in 2..=6 {
        let (k, _, _) = build_ring_complex(n).unwrap();
        assert_eq!(k.f_vector(), expected_f_vector(n));
        assert_eq!(build_m_direct(n).unwrap().f_vector(), expected_m_f_vector(n));
    }
}

#[test]
fn homology_euler_matches_face_count() {
    for n in 1..=4 {
        let k = neighborhood_complex(&build_graph(n, 2).unwrap());
        let h = homology(&k);
        let chi: i64 =
            h.betti().iter().enumerate().map(|(d, &b)| if d % 2 == 0 { b as i64 } else { -(b as i64) }).sum();
        assert_eq!(chi, k.euler_characteristic());
    }
}
