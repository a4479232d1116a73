use super::{Complex, Vertex};

/// Barycentric subdivision of a single simplex. Vertices are the nonempty
/// subsets of `simplex` (as sorted lists); faces are chains under inclusion.
pub fn barycentric_subdivision<V: Vertex>(simplex: &[V]) -> Complex<Vec<V>> {
    let mut verts: Vec<V> = simplex.to_vec();
    verts.sort();
    verts.dedup();
    assert!(!verts.is_empty(), "cannot subdivide the empty simplex");
    // maximal chains <-> orderings of the vertex set
    let mut chains = Vec::new();
    let mut order: Vec<usize> = (0..verts.len()).collect();
    permutations(&mut order, 0, &mut |perm| {
        let chain: Vec<Vec<V>> = (1..=perm.len())
            .map(|len| {
                let mut prefix: Vec<V> = perm[..len].iter().map(|&i| verts[i].clone()).collect();
                prefix.sort();
                prefix
            })
            .collect();
        chains.push(chain);
    });
    Complex::from_facets(chains)
}

fn permutations<F: FnMut(&[usize])>(items: &mut [usize], start: usize, visit: &mut F) {
    if start == items.len() {
        visit(items);
        return;
    }
    for i in start..items.len() {
        items.swap(start, i);
        permutations(items, start + 1, visit);
        items.swap(start, i);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_subdivisions() {
        assert_eq!(barycentric_subdivision(&[0u8, 1]).f_vector(), vec![3, 2]);
        assert_eq!(barycentric_subdivision(&[0u8, 1, 2]).f_vector(), vec![7, 12, 6]);
        assert_eq!(barycentric_subdivision(&[0u8, 1, 2, 3]).f_vector(), vec![15, 50, 60, 24]);
    }

    #[test]
    fn top_faces_are_factorial() {
        for d in 0..6u8 {
            let verts: Vec<u8> = (0..=d).collect();
            let fact: usize = (1..=usize::from(d) + 1).product();
            assert_eq!(barycentric_subdivision(&verts).facet_count(), fact);
        }
    }
}
