//! Convex 3D realization of a planar triangulation: Tutte embedding with unit
//! interior stresses, equilibrium stresses on the outer triangle, and a
//! Maxwell–Cremona lift.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::planar::RotationSystem;
use crate::simplicial::{Complex, Face, Vertex};

fn c<T: Float>(x: f64) -> T {
    T::from(x).expect("constant fits the scalar type")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealizeOptions {
    /// Outer face of the Tutte embedding (vertex ids); defaults to the first facet.
    pub outer_face: Option<Face>,
    /// Minimum relative convexity margin.
    pub tolerance: f64,
}

impl Default for RealizeOptions {
    fn default() -> Self {
        RealizeOptions { outer_face: None, tolerance: 1e-9 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolytopeRealization<T> {
    pub points: Vec<[T; 3]>,
    /// Facets oriented with outward normals.
    pub facets: Vec<[u32; 3]>,
    /// `(a, b, c, d)` with `a x + b y + c z = d` and the polytope on the side `≤ d`.
    pub planes: Vec<[T; 4]>,
    pub outer_face: [u32; 3],
    /// Smallest distance of a vertex to a facet plane it is not on, over the diameter.
    pub margin: T,
    pub worst_facet: [u32; 3],
    /// Largest violation of vertex equilibrium in the stress used for lifting.
    pub stress_residual: T,
}

impl<T: Float> PolytopeRealization<T> {
    pub fn vertex_count(&self) -> usize {
        self.points.len()
    }

    pub fn edge_count(&self) -> usize {
        3 * self.facets.len() / 2
    }

    pub fn to_off(&self) -> String {
        let mut out = String::from("OFF\n");
        let _ = writeln!(out, "{} {} {}", self.points.len(), self.facets.len(), self.edge_count());
        for p in &self.points {
            let [x, y, z] = p.map(|v| v.to_f64().unwrap_or(f64::NAN));
            let _ = writeln!(out, "{x:.17e} {y:.17e} {z:.17e}");
        }
        for [a, b, c] in &self.facets {
            let _ = writeln!(out, "3 {a} {b} {c}");
        }
        out
    }
}

/// Solve `a x = b` for several right-hand sides by Gaussian elimination with
/// partial pivoting.
#[allow(clippy::needless_range_loop)]
pub fn solve_linear<T: Float>(mut a: Vec<Vec<T>>, mut b: Vec<Vec<T>>) -> Result<Vec<Vec<T>>> {
    let n = a.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap_or(std::cmp::Ordering::Equal))
            .expect("nonempty range");
        if a[pivot][col].abs() <= T::epsilon() {
            return Err(Error::Realization(format!("singular system at column {col}")));
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in (col + 1)..n {
            let f = a[row][col] / a[col][col];
            if f == T::zero() {
                continue;
            }
            for k in col..n {
                let v = a[col][k];
                a[row][k] = a[row][k] - f * v;
            }
            for k in 0..b[row].len() {
                let v = b[col][k];
                b[row][k] = b[row][k] - f * v;
            }
        }
    }
    for col in (0..n).rev() {
        for k in 0..b[col].len() {
            let mut s = b[col][k];
            for j in (col + 1)..n {
                s = s - a[col][j] * b[j][k];
            }
            b[col][k] = s / a[col][col];
        }
    }
    Ok(b)
}

/// Planar Tutte embedding with unit weights and `outer` pinned to an
/// equilateral triangle.
pub fn tutte_embedding<T: Float>(adj: &[Vec<u32>], outer: [u32; 3]) -> Result<Vec<[T; 2]>> {
    let n = adj.len();
    let mut pos = vec![[T::zero(); 2]; n];
    for (t, &v) in outer.iter().enumerate() {
        let angle = c::<T>(std::f64::consts::TAU * t as f64 / 3.0 + std::f64::consts::FRAC_PI_2);
        pos[v as usize] = [angle.cos(), angle.sin()];
    }
    let interior: Vec<usize> = (0..n).filter(|v| !outer.contains(&(*v as u32))).collect();
    let slot: HashMap<usize, usize> = interior.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let m = interior.len();
    let mut a = vec![vec![T::zero(); m]; m];
    let mut b = vec![vec![T::zero(); 2]; m];
    for (i, &v) in interior.iter().enumerate() {
        a[i][i] = c(adj[v].len() as f64);
        for &w in &adj[v] {
            match slot.get(&(w as usize)) {
                Some(&j) => a[i][j] = a[i][j] - T::one(),
                None => {
                    b[i][0] = b[i][0] + pos[w as usize][0];
                    b[i][1] = b[i][1] + pos[w as usize][1];
                }
            }
        }
    }
    let x = solve_linear(a, b)?;
    for (i, &v) in interior.iter().enumerate() {
        pos[v] = [x[i][0], x[i][1]];
    }
    Ok(pos)
}

fn cross2<T: Float>(a: [T; 2], b: [T; 2]) -> T {
    a[0] * b[1] - a[1] * b[0]
}

fn sub2<T: Float>(a: [T; 2], b: [T; 2]) -> [T; 2] {
    [a[0] - b[0], a[1] - b[1]]
}

/// Lift a planar triangulation to a convex polytope and certify convexity.
pub fn realize_polytope<V: Vertex, T: Float>(
    k: &Complex<V>,
    rs: &RotationSystem,
    opts: &RealizeOptions,
) -> Result<PolytopeRealization<T>> {
    if k.dimension() != 2 {
        return Err(Error::Realization("realization needs a 2-dimensional complex".into()));
    }
    let outer_face = opts.outer_face.clone().unwrap_or_else(|| k.facets().next().expect("nonempty").clone());
    let outer: [u32; 3] =
        outer_face.as_slice().try_into().map_err(|_| Error::Realization("outer face must be a triangle".into()))?;
    if k.face_id(&outer).is_none() || k.facet_count() == 0 {
        return Err(Error::Realization(format!("outer face {outer:?} is not a facet")));
    }
    let adj = k.skeleton_adjacency();
    let pos: Vec<[T; 2]> = tutte_embedding(&adj, outer)?;

    let faces = rs.trace_faces()?;
    if faces.len() != k.facet_count() || faces.iter().any(|f| f.len() != 3) {
        return Err(Error::Realization("rotation system faces are not the facets".into()));
    }
    let key = |f: &[u32]| {
        let mut s = f.to_vec();
        s.sort_unstable();
        s
    };
    let outer_idx = faces
        .iter()
        .position(|f| key(f) == outer.to_vec())
        .ok_or_else(|| Error::Realization("outer face is not a face of the rotation system".into()))?;

    // Interior faces of a Tutte embedding are nondegenerate and all oriented alike.
    let mut sign = None;
    for (i, f) in faces.iter().enumerate() {
        if i == outer_idx {
            continue;
        }
        let [p, q, r] = [pos[f[0] as usize], pos[f[1] as usize], pos[f[2] as usize]];
        let area = cross2(sub2(q, p), sub2(r, p));
        let s = area > T::zero();
        if area.abs() <= T::epsilon() || *sign.get_or_insert(s) != s {
            return Err(Error::Realization(format!("Tutte embedding is not a proper drawing at face {f:?}")));
        }
    }

    // Stress: 1 on edges with an interior endpoint; boundary edges solved by
    // least squares on the equilibrium of the three outer vertices.
    let boundary = [(outer[0], outer[1]), (outer[1], outer[2]), (outer[0], outer[2])];
    let mut force: HashMap<u32, [T; 2]> = HashMap::new();
    for &v in &outer {
        let mut f = [T::zero(); 2];
        for &w in &adj[v as usize] {
            if !outer.contains(&w) {
                let d = sub2(pos[w as usize], pos[v as usize]);
                f = [f[0] + d[0], f[1] + d[1]];
            }
        }
        force.insert(v, f);
    }
    // rows: (vertex, coordinate); columns: boundary edges
    let mut rows: Vec<([T; 3], T)> = Vec::new();
    for &v in &outer {
        for axis in 0..2 {
            let mut coeffs = [T::zero(); 3];
            for (e, &(a, b)) in boundary.iter().enumerate() {
                if a == v {
                    coeffs[e] = pos[b as usize][axis] - pos[v as usize][axis];
                } else if b == v {
                    coeffs[e] = pos[a as usize][axis] - pos[v as usize][axis];
                }
            }
            rows.push((coeffs, -force[&v][axis]));
        }
    }
    let mut ata = vec![vec![T::zero(); 3]; 3];
    let mut atb = vec![vec![T::zero(); 1]; 3];
    for (coeffs, rhs) in &rows {
        for i in 0..3 {
            for j in 0..3 {
                ata[i][j] = ata[i][j] + coeffs[i] * coeffs[j];
            }
            atb[i][0] = atb[i][0] + coeffs[i] * *rhs;
        }
    }
    let sol = solve_linear(ata, atb)?;
    let mut stress: HashMap<(u32, u32), T> = HashMap::new();
    for (e, &(a, b)) in boundary.iter().enumerate() {
        stress.insert((a.min(b), a.max(b)), sol[e][0]);
    }
    let omega = |a: u32, b: u32| *stress.get(&(a.min(b), a.max(b))).unwrap_or(&T::one());

    let mut stress_residual = T::zero();
    for (v, nbrs) in adj.iter().enumerate() {
        let mut f = [T::zero(); 2];
        for &w in nbrs {
            let d = sub2(pos[w as usize], pos[v]);
            let s = omega(v as u32, w);
            f = [f[0] + s * d[0], f[1] + s * d[1]];
        }
        stress_residual = stress_residual.max(f[0].abs()).max(f[1].abs());
    }

    // Lift: each face gets an affine height h(x, y) = a x + b y + c; crossing
    // the dart u -> v from its left face to its right face adds
    // ω_uv · cross(p_v - p_u, p - p_u).
    let mut left_of: HashMap<(u32, u32), usize> = HashMap::new();
    for (i, f) in faces.iter().enumerate() {
        for t in 0..3 {
            left_of.insert((f[t], f[(t + 1) % 3]), i);
        }
    }
    let mut height: Vec<Option<[T; 3]>> = vec![None; faces.len()];
    height[outer_idx] = Some([T::zero(); 3]);
    let mut queue = VecDeque::from([outer_idx]);
    let mut lift_residual = T::zero();
    while let Some(fi) = queue.pop_front() {
        let h = height[fi].expect("queued faces have heights");
        let f = &faces[fi];
        for t in 0..3 {
            let (u, v) = (f[t], f[(t + 1) % 3]);
            let gi = left_of[&(v, u)];
            let (pu, pv) = (pos[u as usize], pos[v as usize]);
            let w = omega(u, v);
            let d = sub2(pv, pu);
            // cross(d, p - pu) = d.x (y - pu.y) - d.y (x - pu.x)
            let delta = [-w * d[1], w * d[0], w * (d[1] * pu[0] - d[0] * pu[1])];
            let hg = [h[0] + delta[0], h[1] + delta[1], h[2] + delta[2]];
            match height[gi] {
                None => {
                    height[gi] = Some(hg);
                    queue.push_back(gi);
                }
                Some(old) => {
                    for i in 0..3 {
                        lift_residual = lift_residual.max((old[i] - hg[i]).abs());
                    }
                }
            }
        }
    }

    let mut points = vec![[T::zero(); 3]; k.vertex_count()];
    for (fi, f) in faces.iter().enumerate() {
        let h = height[fi].ok_or_else(|| Error::Realization("dual graph is disconnected".into()))?;
        for &v in f {
            let p = pos[v as usize];
            points[v as usize] = [p[0], p[1], h[0] * p[0] + h[1] * p[1] + h[2]];
        }
    }
    certify_convexity(points, k, outer, stress_residual.max(lift_residual), opts.tolerance)
}

fn sub3<T: Float>(a: [T; 3], b: [T; 3]) -> [T; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross3<T: Float>(a: [T; 3], b: [T; 3]) -> [T; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn dot3<T: Float>(a: [T; 3], b: [T; 3]) -> T {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Compute outward facet planes and the relative convexity margin; fail if
/// some facet has a vertex on the wrong side or within `tolerance`.
pub fn certify_convexity<V: Vertex, T: Float>(
    points: Vec<[T; 3]>,
    k: &Complex<V>,
    outer_face: [u32; 3],
    stress_residual: T,
    tolerance: f64,
) -> Result<PolytopeRealization<T>> {
    let mut diameter = T::zero();
    for a in &points {
        for b in &points {
            let d = sub3(*a, *b);
            diameter = diameter.max(dot3(d, d).sqrt());
        }
    }
    if diameter <= T::zero() {
        return Err(Error::Realization("all points coincide".into()));
    }
    let mut facets = Vec::new();
    let mut planes = Vec::new();
    let mut margin = T::infinity();
    let mut worst_facet = [0; 3];
    for f in k.facets() {
        let [a, b, cc] = [f[0], f[1], f[2]];
        let (pa, pb, pc) = (points[a as usize], points[b as usize], points[cc as usize]);
        let mut normal = cross3(sub3(pb, pa), sub3(pc, pa));
        let len = dot3(normal, normal).sqrt();
        if len <= T::zero() {
            return Err(Error::Realization(format!("facet {f:?} is degenerate")));
        }
        normal = normal.map(|x| x / len);
        let mut offset = dot3(normal, pa);
        let others: Vec<T> = (0..points.len() as u32)
            .filter(|v| !f.contains(v))
            .map(|v| dot3(normal, points[v as usize]) - offset)
            .collect();
        let mut tri = [a, b, cc];
        // orient by the farthest vertex; every other vertex must then lie strictly below
        let far = others.iter().copied().fold(T::zero(), |m, d| if d.abs() > m.abs() { d } else { m });
        if far > T::zero() {
            normal = normal.map(|x| -x);
            offset = -offset;
            tri = [a, cc, b];
        }
        let depth = others.iter().map(|&d| if far > T::zero() { d } else { -d }).fold(T::infinity(), T::min);
        let relative = depth / diameter;
        if relative < margin {
            margin = relative;
            worst_facet = tri;
        }
        if relative <= c(tolerance) {
            return Err(Error::Realization(format!(
                "facet {f:?}: convexity margin {} does not exceed tolerance {tolerance}",
                relative.to_f64().unwrap_or(f64::NAN)
            )));
        }
        facets.push(tri);
        planes.push([normal[0], normal[1], normal[2], offset]);
    }
    Ok(PolytopeRealization { points, facets, planes, outer_face, margin, worst_facet, stress_residual })
}
