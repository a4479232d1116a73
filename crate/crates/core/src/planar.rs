//! Rotation systems, face tracing and vertex connectivity: the ingredients of
//! a Steinitz certificate for the 1-skeleton of a triangulated sphere.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::simplicial::{Complex, Vertex};

/// Cyclic (counterclockwise) neighbor order around every vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RotationSystem {
    rotations: Vec<Vec<u32>>,
}

impl RotationSystem {
    pub fn new(rotations: Vec<Vec<u32>>) -> Self {
        RotationSystem { rotations }
    }

    /// Derive rotations from consistently oriented triangles of a closed
    /// surface: a counterclockwise triangle `(a, b, c)` puts `c` right after
    /// `b` around `a`.
    pub fn from_oriented_triangles(vertex_count: usize, triangles: &[[u32; 3]]) -> Result<Self> {
        let mut next: Vec<BTreeMap<u32, u32>> = vec![BTreeMap::new(); vertex_count];
        for &[a, b, c] in triangles {
            for (v, x, y) in [(a, b, c), (b, c, a), (c, a, b)] {
                if next[v as usize].insert(x, y).is_some() {
                    return Err(Error::LemmaViolation(format!(
                        "inconsistent orientation: two triangles continue edge {v}-{x} on the same side"
                    )));
                }
            }
        }
        let mut rotations = Vec::with_capacity(vertex_count);
        for (v, map) in next.iter().enumerate() {
            let Some((&start, _)) = map.iter().next() else {
                rotations.push(Vec::new());
                continue;
            };
            let mut order = vec![start];
            let mut cur = start;
            loop {
                cur = *map
                    .get(&cur)
                    .ok_or_else(|| Error::LemmaViolation(format!("vertex {v}: triangles around it do not close up")))?;
                if cur == start {
                    break;
                }
                order.push(cur);
                if order.len() > map.len() {
                    return Err(Error::LemmaViolation(format!("vertex {v}: rotation is not a cycle")));
                }
            }
            if order.len() != map.len() {
                return Err(Error::LemmaViolation(format!("vertex {v}: link splits into several cycles")));
            }
            rotations.push(order);
        }
        Ok(RotationSystem { rotations })
    }

    pub fn rotation(&self, v: u32) -> &[u32] {
        &self.rotations[v as usize]
    }

    pub fn vertex_count(&self) -> usize {
        self.rotations.len()
    }

    pub fn edge_count(&self) -> usize {
        self.rotations.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Faces of the embedding, as vertex cycles. The face to the left of the
    /// dart `u → v` continues with `v → w`, `w` the clockwise successor of `u`
    /// around `v`.
    pub fn trace_faces(&self) -> Result<Vec<Vec<u32>>> {
        let mut pos: HashMap<(u32, u32), usize> = HashMap::new();
        for (v, rot) in self.rotations.iter().enumerate() {
            for (i, &w) in rot.iter().enumerate() {
                pos.insert((v as u32, w), i);
            }
        }
        for &(v, w) in pos.keys() {
            if !pos.contains_key(&(w, v)) {
                return Err(Error::LemmaViolation(format!("edge {v}-{w} appears in only one rotation")));
            }
        }
        let mut darts: Vec<(u32, u32)> = pos.keys().copied().collect();
        darts.sort_unstable();
        let mut seen: HashMap<(u32, u32), bool> = darts.iter().map(|&d| (d, false)).collect();
        let mut faces = Vec::new();
        for &d in &darts {
            if seen[&d] {
                continue;
            }
            let mut face = Vec::new();
            let mut cur = d;
            while !seen[&cur] {
                seen.insert(cur, true);
                face.push(cur.0);
                let (u, v) = cur;
                let rot = &self.rotations[v as usize];
                let i = pos[&(v, u)];
                let w = rot[(i + rot.len() - 1) % rot.len()];
                cur = (v, w);
            }
            faces.push(face);
        }
        Ok(faces)
    }
}

/// Orient the triangles of a closed surface consistently, starting from the
/// first facet in its stored vertex order. Fails on non-orientable input.
pub fn orient_surface<V: Vertex>(k: &Complex<V>) -> Result<Vec<[u32; 3]>> {
    let tris: Vec<[u32; 3]> = k
        .facets()
        .map(|f| match f.as_slice() {
            &[a, b, c] => Ok([a, b, c]),
            _ => Err(Error::InvalidParameters("surface must be pure 2-dimensional".into())),
        })
        .collect::<Result<_>>()?;
    let mut by_edge: HashMap<(u32, u32), Vec<usize>> = HashMap::new();
    for (t, tri) in tris.iter().enumerate() {
        for (a, b) in [(tri[0], tri[1]), (tri[1], tri[2]), (tri[0], tri[2])] {
            by_edge.entry((a.min(b), a.max(b))).or_default().push(t);
        }
    }
    let mut oriented: Vec<Option<[u32; 3]>> = vec![None; tris.len()];
    for start in 0..tris.len() {
        if oriented[start].is_some() {
            continue;
        }
        oriented[start] = Some(tris[start]);
        let mut queue = VecDeque::from([start]);
        while let Some(t) = queue.pop_front() {
            let o = oriented[t].expect("queued triangles are oriented");
            for (a, b) in [(o[0], o[1]), (o[1], o[2]), (o[2], o[0])] {
                for &u in &by_edge[&(a.min(b), a.max(b))] {
                    if u == t {
                        continue;
                    }
                    // the neighbor must traverse the shared edge as b -> a
                    let other = tris[u].iter().copied().find(|&x| x != a && x != b).expect("triangle");
                    let want = [b, a, other];
                    match oriented[u] {
                        None => {
                            oriented[u] = Some(want);
                            queue.push_back(u);
                        }
                        Some(existing) if !same_cycle(existing, want) => {
                            return Err(Error::LemmaViolation("surface is not orientable".into()));
                        }
                        _ => {}
                    }
                }
            }
        }
    }
    Ok(oriented.into_iter().map(|o| o.expect("all oriented")).collect())
}

fn same_cycle(a: [u32; 3], b: [u32; 3]) -> bool {
    (0..3).any(|s| (0..3).all(|i| a[i] == b[(i + s) % 3]))
}

/// Number of internally vertex-disjoint `s`–`t` paths (a direct edge counts
/// as one path), by unit-capacity max-flow on the vertex-split graph.
pub fn local_connectivity(adj: &[Vec<u32>], s: usize, t: usize) -> usize {
    assert_ne!(s, t);
    let n = adj.len();
    // node 2v = v_in, 2v+1 = v_out
    let mut graph: Vec<Vec<usize>> = vec![Vec::new(); 2 * n];
    let mut to: Vec<usize> = Vec::new();
    let mut cap: Vec<i32> = Vec::new();
    let mut add = |graph: &mut Vec<Vec<usize>>, u: usize, v: usize, c: i32| {
        graph[u].push(to.len());
        to.push(v);
        cap.push(c);
        graph[v].push(to.len());
        to.push(u);
        cap.push(0);
    };
    let big = n as i32 + 1;
    for (v, nbrs) in adj.iter().enumerate() {
        let c = if v == s || v == t { big } else { 1 };
        add(&mut graph, 2 * v, 2 * v + 1, c);
        for &w in nbrs {
            add(&mut graph, 2 * v + 1, 2 * w as usize, 1);
        }
    }
    let (source, sink) = (2 * s + 1, 2 * t);
    let mut flow = 0;
    loop {
        let mut parent: Vec<Option<usize>> = vec![None; 2 * n];
        let mut visited = vec![false; 2 * n];
        visited[source] = true;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            if u == sink {
                break;
            }
            for &e in &graph[u] {
                let v = to[e];
                if cap[e] > 0 && !visited[v] {
                    visited[v] = true;
                    parent[v] = Some(e);
                    queue.push_back(v);
                }
            }
        }
        if !visited[sink] {
            return flow;
        }
        let mut v = sink;
        while let Some(e) = parent[v] {
            cap[e] -= 1;
            cap[e ^ 1] += 1;
            v = to[e ^ 1];
        }
        flow += 1;
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SteinitzReport {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    /// `V - E + F` from the rotation-system face trace.
    pub euler_from_rotation: i64,
    pub planar: bool,
    /// Every traced face is a triangle of the complex (only meaningful for
    /// 2-dimensional input).
    pub faces_match_triangles: bool,
    pub min_connectivity: usize,
    /// A vertex pair attaining the minimum, as labels.
    pub min_pair: Option<(String, String)>,
    pub three_connected: bool,
    pub passed: bool,
    pub failures: Vec<String>,
}

/// Planarity via the genus-0 face count of `rs`, and 3-connectivity via
/// Menger's theorem over all vertex pairs.
pub fn steinitz_check<V: Vertex + fmt::Display>(k: &Complex<V>, rs: &RotationSystem) -> SteinitzReport {
    let adj = k.skeleton_adjacency();
    let mut failures = Vec::new();
    let vertices = k.vertex_count();
    let edges = k.edges().len();

    let consistent = rs.vertex_count() == vertices
        && (0..vertices).all(|v| {
            let mut r = rs.rotation(v as u32).to_vec();
            r.sort_unstable();
            r == adj[v]
        });
    if !consistent {
        failures.push("rotation system does not match the 1-skeleton".into());
    }
    let traced = if consistent { rs.trace_faces() } else { Err(Error::LemmaViolation(String::new())) };
    let (faces, faces_match_triangles) = match &traced {
        Ok(fs) => {
            let matches = k.dimension() == 2
                && fs.len() == k.faces_of_dim(2).count()
                && fs.iter().all(|f| {
                    let mut s = f.clone();
                    s.sort_unstable();
                    f.len() == 3 && k.face_id(&s).is_some()
                });
            (fs.len(), matches)
        }
        Err(e) => {
            failures.push(format!("face tracing failed: {e}"));
            (0, false)
        }
    };
    let euler_from_rotation = vertices as i64 - edges as i64 + faces as i64;
    let connected_graph = vertices > 0 && (1..vertices).all(|t| local_connectivity(&adj, 0, t) > 0);
    let planar = traced.is_ok() && connected_graph && euler_from_rotation == 2;
    if !planar {
        failures.push(format!("rotation system has genus > 0 (V - E + F = {euler_from_rotation})"));
    }

    let mut min_connectivity = usize::MAX;
    let mut min_pair = None;
    for s in 0..vertices {
        for t in (s + 1)..vertices {
            let c = local_connectivity(&adj, s, t);
            if c < min_connectivity {
                min_connectivity = c;
                min_pair = Some((k.label(s as u32).to_string(), k.label(t as u32).to_string()));
            }
        }
    }
    if vertices < 2 {
        min_connectivity = 0;
    }
    let three_connected = vertices >= 4 && min_connectivity >= 3;
    if !three_connected {
        failures.push(format!("vertex connectivity {min_connectivity} < 3"));
    }
    SteinitzReport {
        vertices,
        edges,
        faces,
        euler_from_rotation,
        planar,
        faces_match_triangles,
        min_connectivity,
        min_pair,
        three_connected,
        passed: planar && three_connected,
        failures,
    }
}

/// Rotation system of a closed orientable triangulated surface, derived from a
/// consistent orientation of its triangles.
pub fn surface_rotation_system<V: Vertex>(k: &Complex<V>) -> Result<RotationSystem> {
    let tris = orient_surface(k)?;
    RotationSystem::from_oriented_triangles(k.vertex_count(), &tris)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tetrahedron() -> Complex<u32> {
        Complex::from_facets([[0u32, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]])
    }

    #[test]
    fn k4_is_planar_and_3_connected() {
        let k = tetrahedron();
        let rs = surface_rotation_system(&k).unwrap();
        let r = steinitz_check(&k, &rs);
        assert!(r.passed, "{r:?}");
        assert_eq!(r.faces, 4);
        assert!(r.faces_match_triangles);
        assert_eq!(r.min_connectivity, 3);
    }

    #[test]
    fn five_cycle_is_planar_not_3_connected() {
        let k = Complex::from_facets((0u32..5).map(|i| [i, (i + 1) % 5]));
        let rs = RotationSystem::new((0u32..5).map(|i| vec![(i + 1) % 5, (i + 4) % 5]).collect());
        let r = steinitz_check(&k, &rs);
        assert!(r.planar);
        assert_eq!(r.min_connectivity, 2);
        assert!(!r.three_connected);
        assert!(!r.passed);
    }

    #[test]
    fn connectivity_of_small_graphs() {
        // K_{3,3}: 3-connected
        let adj: Vec<Vec<u32>> = (0..6).map(|v| if v < 3 { vec![3, 4, 5] } else { vec![0, 1, 2] }).collect();
        assert_eq!(local_connectivity(&adj, 0, 1), 3);
        assert_eq!(local_connectivity(&adj, 0, 3), 3);
        // path 0-1-2
        let adj = vec![vec![1], vec![0, 2], vec![1]];
        assert_eq!(local_connectivity(&adj, 0, 2), 1);
    }

    #[test]
    fn torus_rotation_has_genus_one() {
        let tris: Vec<[u32; 3]> =
            (0..7).flat_map(|i| [[i, (i + 1) % 7, (i + 3) % 7], [i, (i + 2) % 7, (i + 3) % 7]]).collect();
        let k = Complex::from_facets(tris);
        let rs = surface_rotation_system(&k).unwrap();
        let r = steinitz_check(&k, &rs);
        assert_eq!(r.euler_from_rotation, 0);
        assert!(!r.planar);
    }
}
