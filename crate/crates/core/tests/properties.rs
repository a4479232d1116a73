use kneser_sphere::equivariant::{apply_group, DihedralElement};
use kneser_sphere::kneser::{build_graph, classify, neighbor_profile};
use kneser_sphere::simplicial::{homology, Complex};
use proptest::prelude::*;

proptest! {
    #[test]
    fn rotation_is_invertible(n in 1usize..7, idx in 0usize..64, j in -20i64..20) {
        let g = build_graph(n, 2).unwrap();
        let v = &g.vertices()[idx % g.vertex_count()];
        prop_assert_eq!(&v.rotate(j).rotate(-j), v);
        prop_assert!(v.rotate(j).is_stable());
    }

    #[test]
    fn action_is_a_homomorphism(n in 1usize..6, a in 0usize..40, b in 0usize..40, idx in 0usize..64) {
        let ground = (2 * n + 2) as u32;
        let all = DihedralElement::all(ground);
        let (ga, gb) = (all[a % all.len()], all[b % all.len()]);
        let g = build_graph(n, 2).unwrap();
        let v = g.vertices()[idx % g.vertex_count()].clone().into();
        prop_assert_eq!(apply_group(&ga.compose(&gb), &v), apply_group(&ga, &apply_group(&gb, &v)));
    }

    #[test]
    fn action_preserves_neighbor_structure(n in 2usize..6, e in 0usize..40, idx in 0usize..64) {
        let g = build_graph(n, 2).unwrap();
        let all = DihedralElement::all(g.ground());
        let h = all[e % all.len()];
        let v = &g.vertices()[idx % g.vertex_count()];
        let p = neighbor_profile(&g, v).unwrap();
        let q = neighbor_profile(&g, &h.apply_set(v)).unwrap();
        prop_assert_eq!(classify(v), classify(&h.apply_set(v)));
        let mut outer: Vec<_> = p.outer.iter().map(|s| h.apply_set(s)).collect();
        outer.sort();
        prop_assert_eq!(outer, q.outer);
    }

    #[test]
    fn homology_euler_characteristic(facets in prop::collection::vec(prop::collection::btree_set(0u32..7, 1..4), 1..8)) {
        let k = Complex::from_facets(facets.into_iter().map(|f| f.into_iter().collect::<Vec<_>>()));
        let chi: i64 = homology(&k).betti().iter().enumerate()
            .map(|(d, &b)| if d % 2 == 0 { b as i64 } else { -(b as i64) }).sum();
        prop_assert_eq!(chi, k.euler_characteristic());
    }
}
