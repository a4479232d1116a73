use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{Complex, Vertex};

/// Closed-surface recognition. Failures are recorded, never raised.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceReport {
    pub pure_2d: bool,
    pub edges_in_two_triangles: bool,
    pub connected: bool,
    pub links_are_cycles: bool,
    pub euler_characteristic: i64,
    pub is_sphere: bool,
    pub failures: Vec<String>,
}

pub fn surface_check<V: Vertex>(k: &Complex<V>) -> SurfaceReport {
    let mut failures = Vec::new();
    let pure_2d = k.dimension() == 2 && k.is_pure();
    if !pure_2d {
        failures.push(format!("not a pure 2-dimensional complex (dimension {})", k.dimension()));
    }

    let mut edge_triangles: BTreeMap<(u32, u32), usize> = k.edges().into_iter().map(|e| (e, 0)).collect();
    // link of each vertex as a graph
    let mut links: Vec<BTreeMap<u32, BTreeSet<u32>>> = vec![BTreeMap::new(); k.vertex_count()];
    for (_, t) in k.faces_of_dim(2) {
        let (a, b, c) = (t[0], t[1], t[2]);
        for (x, y) in [(a, b), (a, c), (b, c)] {
            *edge_triangles.entry((x, y)).or_default() += 1;
        }
        for (v, x, y) in [(a, b, c), (b, a, c), (c, a, b)] {
            links[v as usize].entry(x).or_default().insert(y);
            links[v as usize].entry(y).or_default().insert(x);
        }
    }
    let bad_edges: Vec<_> = edge_triangles.iter().filter(|(_, &c)| c != 2).collect();
    let edges_in_two_triangles = bad_edges.is_empty();
    if let Some(((a, b), c)) = bad_edges.first() {
        failures.push(format!(
            "{} edges not in exactly two triangles, e.g. {:?}-{:?} in {c}",
            bad_edges.len(),
            k.label(*a),
            k.label(*b)
        ));
    }

    let adj = k.skeleton_adjacency();
    let connected = component_count(&adj) == 1;
    if !connected {
        failures.push("1-skeleton is disconnected".into());
    }

    let mut links_are_cycles = true;
    for (v, link) in links.iter().enumerate() {
        if !is_single_cycle(link) {
            links_are_cycles = false;
            failures.push(format!("link of {:?} is not a single cycle", k.label(v as u32)));
            break;
        }
    }

    let euler_characteristic = k.euler_characteristic();
    let all = pure_2d && edges_in_two_triangles && connected && links_are_cycles;
    if all && euler_characteristic != 2 {
        failures.push(format!("closed surface with Euler characteristic {euler_characteristic}"));
    }
    SurfaceReport {
        pure_2d,
        edges_in_two_triangles,
        connected,
        links_are_cycles,
        euler_characteristic,
        is_sphere: all && euler_characteristic == 2,
        failures,
    }
}

fn component_count(adj: &[Vec<u32>]) -> usize {
    let mut seen = vec![false; adj.len()];
    let mut count = 0;
    for s in 0..adj.len() {
        if seen[s] {
            continue;
        }
        count += 1;
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(u) = stack.pop() {
            for &w in &adj[u] {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    stack.push(w as usize);
                }
            }
        }
    }
    count
}

/// Connected and 2-regular, with at least three vertices.
fn is_single_cycle(link: &BTreeMap<u32, BTreeSet<u32>>) -> bool {
    if link.len() < 3 || link.values().any(|nbrs| nbrs.len() != 2) {
        return false;
    }
    let start = *link.keys().next().expect("nonempty");
    let mut seen = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some(u) = stack.pop() {
        for &w in &link[&u] {
            if seen.insert(w) {
                stack.push(w);
            }
        }
    }
    seen.len() == link.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kneser::build_graph;
    use crate::simplicial::neighborhood_complex;

    #[test]
    fn tetrahedron_is_sphere() {
        let k = Complex::from_facets([[0u32, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]);
        let r = surface_check(&k);
        assert!(r.is_sphere, "{r:?}");
    }

    #[test]
    fn n22_fails() {
        let r = surface_check(&neighborhood_complex(&build_graph(2, 2).unwrap()));
        assert!(!r.is_sphere);
        assert!(!r.pure_2d);
    }

    #[test]
    fn torus_is_not_a_sphere() {
        // 7-vertex Möbius torus
        let tris: Vec<[u32; 3]> =
            (0..7).flat_map(|i| [[i, (i + 1) % 7, (i + 3) % 7], [i, (i + 2) % 7, (i + 3) % 7]]).collect();
        let r = surface_check(&Complex::from_facets(tris));
        assert!(r.pure_2d && r.edges_in_two_triangles && r.links_are_cycles);
        assert_eq!(r.euler_characteristic, 0);
        assert!(!r.is_sphere);
    }

    #[test]
    fn two_spheres_glued_at_vertex() {
        let mut tris = vec![[0u32, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]];
        tris.extend([[0, 5, 6], [0, 5, 7], [0, 6, 7], [5, 6, 7]]);
        let r = surface_check(&Complex::from_facets(tris));
        assert!(!r.links_are_cycles);
        assert!(!r.is_sphere);
    }
}
