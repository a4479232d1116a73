//! Finite abstract simplicial complexes with explicitly stored faces.
//!
//! Vertices carry arbitrary ordered labels; internally every face is a sorted
//! list of vertex indices, and the vertex table is sorted by label, so index
//! order and label order agree.

mod homology;
mod label;
mod subdivision;
mod surface;

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::hash::Hash;

use crate::error::{Error, Result};
use crate::kneser::SchrijverGraph;

pub use homology::{boundary_matrix, homology, homology_over, smith_invariants, HomologyGroup, HomologyProfile};
pub use label::VertexLabel;
pub use subdivision::barycentric_subdivision;
pub use surface::{surface_check, SurfaceReport};

/// Bound for anything usable as a vertex label.
pub trait Vertex: Clone + Ord + Hash + fmt::Debug {}
impl<T: Clone + Ord + Hash + fmt::Debug> Vertex for T {}

/// A face as sorted vertex indices into its complex.
pub type Face = Vec<u32>;

#[derive(Clone, Debug)]
pub struct Complex<V: Vertex> {
    labels: Vec<V>,
    index: HashMap<V, u32>,
    /// Sorted by (dimension, lexicographic).
    faces: Vec<Face>,
    face_index: HashMap<Face, usize>,
    facets: Vec<usize>,
}

impl<V: Vertex> Complex<V> {
    /// The downward closure of the given simplices.
    pub fn from_facets<I, F>(simplices: I) -> Self
    where
        I: IntoIterator<Item = F>,
        F: IntoIterator<Item = V>,
    {
        let simplices: Vec<BTreeSet<V>> =
            simplices.into_iter().map(|s| s.into_iter().collect::<BTreeSet<V>>()).filter(|s| !s.is_empty()).collect();
        let labels: Vec<V> = simplices.iter().flatten().cloned().collect::<BTreeSet<_>>().into_iter().collect();
        let index: HashMap<V, u32> = labels.iter().cloned().enumerate().map(|(i, v)| (v, i as u32)).collect();
        let mut all: BTreeSet<Face> = BTreeSet::new();
        for s in &simplices {
            let ids: Face = s.iter().map(|v| index[v]).collect();
            if all.contains(&ids) {
                continue;
            }
            insert_closure(&ids, &mut all);
        }
        Self::assemble(labels, index, all.into_iter().collect())
    }

    /// Build from an explicit face list, which must be downward closed.
    pub fn from_faces<I, F>(faces: I) -> Result<Self>
    where
        I: IntoIterator<Item = F>,
        F: IntoIterator<Item = V>,
    {
        let faces: Vec<BTreeSet<V>> = faces.into_iter().map(|s| s.into_iter().collect()).collect();
        let labels: Vec<V> = faces.iter().flatten().cloned().collect::<BTreeSet<_>>().into_iter().collect();
        let index: HashMap<V, u32> = labels.iter().cloned().enumerate().map(|(i, v)| (v, i as u32)).collect();
        let set: BTreeSet<Face> =
            faces.iter().filter(|f| !f.is_empty()).map(|f| f.iter().map(|v| index[v]).collect()).collect();
        for f in &set {
            if f.len() > 1 {
                for skip in 0..f.len() {
                    let sub = without(f, skip);
                    if !set.contains(&sub) {
                        let name: Vec<&V> = f.iter().map(|&i| &labels[i as usize]).collect();
                        return Err(Error::NotASubcomplex(format!("face {name:?} is missing a boundary face")));
                    }
                }
            }
        }
        Ok(Self::assemble(labels, index, set.into_iter().collect()))
    }

    fn assemble(labels: Vec<V>, index: HashMap<V, u32>, mut faces: Vec<Face>) -> Self {
        faces.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        let face_index: HashMap<Face, usize> = faces.iter().cloned().enumerate().map(|(i, f)| (f, i)).collect();
        let mut maximal = vec![true; faces.len()];
        for f in &faces {
            if f.len() > 1 {
                for skip in 0..f.len() {
                    maximal[face_index[&without(f, skip)]] = false;
                }
            }
        }
        let facets = (0..faces.len()).filter(|&i| maximal[i]).collect();
        Complex { labels, index, faces, face_index, facets }
    }

    pub fn labels(&self) -> &[V] {
        &self.labels
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn vertex_id(&self, v: &V) -> Option<u32> {
        self.index.get(v).copied()
    }

    pub fn label(&self, id: u32) -> &V {
        &self.labels[id as usize]
    }

    /// All nonempty faces, ordered by dimension then lexicographically.
    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn face_id(&self, face: &[u32]) -> Option<usize> {
        self.face_index.get(face).copied()
    }

    /// Look up a face given by labels (in any order).
    pub fn face_id_of_labels(&self, labels: &[V]) -> Option<usize> {
        let mut ids: Face = labels.iter().map(|v| self.vertex_id(v)).collect::<Option<_>>()?;
        ids.sort_unstable();
        ids.dedup();
        (ids.len() == labels.len()).then_some(())?;
        self.face_id(&ids)
    }

    pub fn contains_labels(&self, labels: &[V]) -> bool {
        self.face_id_of_labels(labels).is_some()
    }

    pub fn face_labels(&self, face: &[u32]) -> Vec<V> {
        face.iter().map(|&i| self.labels[i as usize].clone()).collect()
    }

    pub fn facets(&self) -> impl Iterator<Item = &Face> {
        self.facets.iter().map(|&i| &self.faces[i])
    }

    pub fn facet_count(&self) -> usize {
        self.facets.len()
    }

    /// Facets as sorted label lists, for label-level comparison.
    pub fn facet_label_set(&self) -> BTreeSet<Vec<V>> {
        self.facets().map(|f| self.face_labels(f)).collect()
    }

    /// -1 for the empty complex.
    pub fn dimension(&self) -> isize {
        self.faces.last().map_or(-1, |f| f.len() as isize - 1)
    }

    pub fn f_vector(&self) -> Vec<usize> {
        let mut out = vec![0; (self.dimension() + 1).max(0) as usize];
        for f in &self.faces {
            out[f.len() - 1] += 1;
        }
        out
    }

    pub fn faces_of_dim(&self, d: usize) -> impl Iterator<Item = (usize, &Face)> {
        self.faces.iter().enumerate().filter(move |(_, f)| f.len() == d + 1)
    }

    pub fn is_pure(&self) -> bool {
        let d = self.dimension();
        self.facets().all(|f| f.len() as isize - 1 == d)
    }

    /// Edges of the 1-skeleton as vertex-id pairs.
    pub fn edges(&self) -> Vec<(u32, u32)> {
        self.faces_of_dim(1).map(|(_, f)| (f[0], f[1])).collect()
    }

    /// Adjacency lists of the 1-skeleton, indexed by vertex id.
    pub fn skeleton_adjacency(&self) -> Vec<Vec<u32>> {
        let mut adj = vec![Vec::new(); self.vertex_count()];
        for (a, b) in self.edges() {
            adj[a as usize].push(b);
            adj[b as usize].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector().iter().enumerate().map(|(d, &c)| if d % 2 == 0 { c as i64 } else { -(c as i64) }).sum()
    }

    /// Relabel vertices; the map must be injective on this complex.
    pub fn map_labels<W: Vertex, F: Fn(&V) -> W>(&self, f: F) -> Complex<W> {
        Complex::from_facets(
            self.facets().map(|face| face.iter().map(|&i| f(&self.labels[i as usize])).collect::<Vec<_>>()),
        )
    }

    /// Subcomplex on the given face ids, which must be downward closed.
    pub fn subcomplex(&self, face_ids: impl IntoIterator<Item = usize>) -> Result<Complex<V>> {
        Complex::from_faces(face_ids.into_iter().map(|i| self.face_labels(&self.faces[i])))
    }
}

/// Identical facet sets under the identity labeling.
pub fn complexes_identical<V: Vertex>(a: &Complex<V>, b: &Complex<V>) -> bool {
    a.labels == b.labels && a.facet_label_set() == b.facet_label_set()
}

pub(crate) fn without(face: &[u32], skip: usize) -> Face {
    face.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v).collect()
}

fn insert_closure(face: &Face, all: &mut BTreeSet<Face>) {
    let k = face.len();
    for mask in 1u64..(1u64 << k) {
        let sub: Face = (0..k).filter(|&i| mask & (1 << i) != 0).map(|i| face[i]).collect();
        all.insert(sub);
    }
}

/// `N(G)`: the vertex sets having a common neighbor. Facets are the maximal
/// neighborhoods `Σ_γ`.
pub fn neighborhood_complex(g: &SchrijverGraph) -> Complex<VertexLabel> {
    let vertices = g.vertices();
    Complex::from_facets(
        (0..g.vertex_count()).map(|u| {
            g.neighbor_indices(u).iter().map(|&w| VertexLabel::Stable(vertices[w].clone())).collect::<Vec<_>>()
        }),
    )
}

/// The Hasse diagram of a complex's face poset (empty face excluded).
#[derive(Clone, Debug)]
pub struct FacePoset {
    /// `covers[i]` lists the faces covered by face `i` (its codimension-1 faces).
    down: Vec<Vec<usize>>,
    /// Faces covering face `i`.
    up: Vec<Vec<usize>>,
    dims: Vec<usize>,
}

impl FacePoset {
    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn dim(&self, i: usize) -> usize {
        self.dims[i]
    }

    pub fn lower_covers(&self, i: usize) -> &[usize] {
        &self.down[i]
    }

    pub fn upper_covers(&self, i: usize) -> &[usize] {
        &self.up[i]
    }

    pub fn cover_count(&self) -> usize {
        self.down.iter().map(Vec::len).sum()
    }

    /// `lower ≺ upper` in the Hasse diagram.
    pub fn covers(&self, lower: usize, upper: usize) -> bool {
        self.down.get(upper).is_some_and(|d| d.contains(&lower))
    }
}

/// Face poset of `k`; element ids coincide with `k`'s face ids.
pub fn face_poset<V: Vertex>(k: &Complex<V>) -> FacePoset {
    let n = k.face_count();
    let mut down = vec![Vec::new(); n];
    let mut up = vec![Vec::new(); n];
    for (i, f) in k.faces().iter().enumerate() {
        if f.len() > 1 {
            for skip in 0..f.len() {
                let j = k.face_index[&without(f, skip)];
                down[i].push(j);
                up[j].push(i);
            }
        }
    }
    let dims = k.faces().iter().map(|f| f.len() - 1).collect();
    FacePoset { down, up, dims }
}
