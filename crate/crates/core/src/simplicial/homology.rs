//! Integral simplicial homology via Smith normal form.
//!
//! The elimination is generic over the coefficient ring so that the same code
//! runs over machine integers in quick checks and over `BigInt` when torsion
//! has to be certified absent.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use super::{without, Complex, Vertex};

/// Sparse boundary matrix `∂_d` as `(row, col, value)` triples, rows indexed
/// by the (d-1)-faces and columns by the d-faces, both in complex order.
pub fn boundary_matrix<V: Vertex, T: Integer + Signed + Clone>(
    k: &Complex<V>,
    d: usize,
) -> (usize, usize, Vec<(usize, usize, T)>) {
    let rows: Vec<usize> = k.faces_of_dim(d.wrapping_sub(1)).map(|(i, _)| i).collect();
    let row_pos: BTreeMap<usize, usize> = rows.iter().enumerate().map(|(p, &i)| (i, p)).collect();
    let mut entries = Vec::new();
    let mut ncols = 0;
    for (col, (_, f)) in k.faces_of_dim(d).enumerate() {
        ncols += 1;
        if d == 0 {
            continue;
        }
        for skip in 0..f.len() {
            let row = row_pos[&k.face_id(&without(f, skip)).expect("complex is closed")];
            let sign = if skip % 2 == 0 { T::one() } else { -T::one() };
            entries.push((row, col, sign));
        }
    }
    (if d == 0 { 0 } else { rows.len() }, ncols, entries)
}

/// Nonzero invariant factors (absolute values, in divisibility order) of a
/// sparse integer matrix.
pub fn smith_invariants<T: Integer + Signed + Clone>(
    nrows: usize,
    ncols: usize,
    entries: Vec<(usize, usize, T)>,
) -> Vec<T> {
    let mut rows: Vec<BTreeMap<usize, T>> = vec![BTreeMap::new(); nrows];
    let mut cols: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); ncols];
    for (r, c, v) in entries {
        let slot = rows[r].entry(c).or_insert_with(T::zero);
        *slot = slot.clone() + v;
        if slot.is_zero() {
            rows[r].remove(&c);
        }
    }
    for (r, row) in rows.iter().enumerate() {
        for &c in row.keys() {
            cols[c].insert(r);
        }
    }

    let mut units = 0usize;
    let mut alive = vec![true; nrows];
    // Unit pivots first: eliminating on a ±1 entry never changes the
    // remaining invariant factors.
    loop {
        let pivot = (0..nrows)
            .filter(|&r| alive[r])
            .find_map(|r| rows[r].iter().find(|(_, v)| v.abs().is_one()).map(|(&c, v)| (r, c, v.clone())));
        let Some((r, c, unit)) = pivot else { break };
        let pivot_row = rows[r].clone();
        let others: Vec<usize> = cols[c].iter().copied().filter(|&i| i != r).collect();
        for i in others {
            let factor = rows[i][&c].clone() * unit.clone();
            for (&cc, v) in &pivot_row {
                let slot = rows[i].entry(cc).or_insert_with(T::zero);
                *slot = slot.clone() - factor.clone() * v.clone();
                if slot.is_zero() {
                    rows[i].remove(&cc);
                    cols[cc].remove(&i);
                } else {
                    cols[cc].insert(i);
                }
            }
        }
        for &cc in pivot_row.keys() {
            cols[cc].remove(&r);
        }
        rows[r].clear();
        alive[r] = false;
        units += 1;
    }

    let rest_rows: Vec<usize> = (0..nrows).filter(|&r| alive[r] && !rows[r].is_empty()).collect();
    let rest_cols: Vec<usize> = (0..ncols).filter(|&c| !cols[c].is_empty()).collect();
    let col_pos: BTreeMap<usize, usize> = rest_cols.iter().enumerate().map(|(p, &c)| (c, p)).collect();
    let mut dense: Vec<Vec<T>> = rest_rows
        .iter()
        .map(|&r| {
            let mut row = vec![T::zero(); rest_cols.len()];
            for (c, v) in &rows[r] {
                row[col_pos[c]] = v.clone();
            }
            row
        })
        .collect();

    let mut out: Vec<T> = (0..units).map(|_| T::one()).collect();
    out.extend(dense_smith(&mut dense));
    out
}

/// In-place Smith normal form of a dense matrix; returns the nonzero
/// diagonal entries in absolute value.
#[allow(clippy::needless_range_loop)]
fn dense_smith<T: Integer + Signed + Clone>(m: &mut [Vec<T>]) -> Vec<T> {
    let nrows = m.len();
    let ncols = m.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    for t in 0..nrows.min(ncols) {
        // smallest nonzero entry of the trailing block
        let Some((pr, pc)) = smallest_entry(m, t) else { break };
        m.swap(t, pr);
        for row in m.iter_mut() {
            row.swap(t, pc);
        }
        loop {
            let mut done = true;
            for i in (t + 1)..nrows {
                if !m[i][t].is_zero() {
                    let q = m[i][t].div_floor(&m[t][t]);
                    for j in t..ncols {
                        let delta = q.clone() * m[t][j].clone();
                        m[i][j] = m[i][j].clone() - delta;
                    }
                    if !m[i][t].is_zero() {
                        done = false;
                    }
                }
            }
            for j in (t + 1)..ncols {
                if !m[t][j].is_zero() {
                    let q = m[t][j].div_floor(&m[t][t]);
                    for row in m.iter_mut().skip(t) {
                        let delta = q.clone() * row[t].clone();
                        row[j] = row[j].clone() - delta;
                    }
                    if !m[t][j].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                // enforce divisibility of the trailing block
                let bad = ((t + 1)..nrows).find(|&i| ((t + 1)..ncols).any(|j| !m[i][j].is_multiple_of(&m[t][t])));
                match bad {
                    Some(i) => {
                        for j in t..ncols {
                            let v = m[i][j].clone();
                            m[t][j] = m[t][j].clone() + v;
                        }
                    }
                    None => break,
                }
            }
            // move the smallest remaining entry of row/column t to the pivot
            let (mut br, mut bc) = (t, t);
            for i in t..nrows {
                if !m[i][t].is_zero() && (m[br][bc].is_zero() || m[i][t].abs() < m[br][bc].abs()) {
                    (br, bc) = (i, t);
                }
            }
            for j in t..ncols {
                if !m[t][j].is_zero() && (m[br][bc].is_zero() || m[t][j].abs() < m[br][bc].abs()) {
                    (br, bc) = (t, j);
                }
            }
            m.swap(t, br);
            for row in m.iter_mut() {
                row.swap(t, bc);
            }
        }
        diag.push(m[t][t].abs());
    }
    diag
}

fn smallest_entry<T: Integer + Signed + Clone>(m: &[Vec<T>], t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (i, row) in m.iter().enumerate().skip(t) {
        for (j, v) in row.iter().enumerate().skip(t) {
            if !v.is_zero() && best.is_none_or(|(bi, bj)| v.abs() < m[bi][bj].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyGroup<T> {
    pub betti: usize,
    /// Torsion coefficients, each at least 2.
    pub torsion: Vec<T>,
}

impl<T> HomologyGroup<T> {
    pub fn is_free_of_rank(&self, r: usize) -> bool {
        self.betti == r && self.torsion.is_empty()
    }
}

/// Homology groups `H_0 .. H_dim`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyProfile<T> {
    pub groups: Vec<HomologyGroup<T>>,
}

impl<T> HomologyProfile<T> {
    pub fn betti(&self) -> Vec<usize> {
        self.groups.iter().map(|g| g.betti).collect()
    }

    pub fn is_torsion_free(&self) -> bool {
        self.groups.iter().all(|g| g.torsion.is_empty())
    }

    /// `(Z, 0, ..., 0, Z, 0, ...)` with the second `Z` in degree `k`.
    pub fn is_sphere_signature(&self, k: usize) -> bool {
        self.is_torsion_free()
            && self.groups.len() > k
            && self.groups.iter().enumerate().all(|(d, g)| g.betti == usize::from(d == 0 || d == k))
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.groups.iter().enumerate().map(|(d, g)| if d % 2 == 0 { g.betti as i64 } else { -(g.betti as i64) }).sum()
    }
}

/// Integral homology over an arbitrary integer type.
pub fn homology_over<V: Vertex, T: Integer + Signed + Clone>(k: &Complex<V>) -> HomologyProfile<T> {
    let dim = k.dimension();
    if dim < 0 {
        return HomologyProfile { groups: Vec::new() };
    }
    let dim = dim as usize;
    let fv = k.f_vector();
    // invariants[d] = nonzero invariant factors of ∂_d
    let invariants: Vec<Vec<T>> = (0..=dim + 1)
        .map(|d| {
            if d == 0 || d > dim {
                Vec::new()
            } else {
                let (r, c, e) = boundary_matrix::<V, T>(k, d);
                smith_invariants(r, c, e)
            }
        })
        .collect();
    let groups = (0..=dim)
        .map(|d| {
            let betti = fv[d] - invariants[d].len() - invariants[d + 1].len();
            let torsion = invariants[d + 1].iter().filter(|v| !v.is_one()).cloned().collect();
            HomologyGroup { betti, torsion }
        })
        .collect();
    HomologyProfile { groups }
}

/// Exact integral homology with arbitrary-precision coefficients.
pub fn homology<V: Vertex>(k: &Complex<V>) -> HomologyProfile<BigInt> {
    homology_over::<V, BigInt>(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kneser::build_graph;
    use crate::simplicial::neighborhood_complex;

    #[test]
    fn tetrahedron_boundary() {
        let k = Complex::from_facets([[0u32, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]);
        let h = homology(&k);
        assert_eq!(h.betti(), vec![1, 0, 1]);
        assert!(h.is_sphere_signature(2));
    }

    #[test]
    fn odd_cycle() {
        let c5 = neighborhood_complex(&build_graph(2, 1).unwrap());
        let h = homology(&c5);
        assert_eq!(h.betti(), vec![1, 1]);
        assert!(h.is_torsion_free());
    }

    #[test]
    fn n32_is_a_two_sphere_homologically() {
        let k = neighborhood_complex(&build_graph(3, 2).unwrap());
        let h = homology(&k);
        assert_eq!(h.betti(), vec![1, 0, 1, 0, 0]);
        assert!(h.is_torsion_free());
    }

    #[test]
    fn detects_torsion() {
        // 2 and 6 on the diagonal after reduction
        let inv = smith_invariants::<i64>(2, 2, vec![(0, 0, 2), (0, 1, 4), (1, 0, -4), (1, 1, -2)]);
        assert_eq!(inv, vec![2, 6]);
        let inv = smith_invariants::<i64>(2, 2, vec![(0, 0, 2), (1, 1, 3)]);
        assert_eq!(inv, vec![1, 6]);
    }

    #[test]
    fn projective_plane_has_z2() {
        // minimal 6-vertex triangulation of RP^2
        let k = Complex::from_facets([
            [1u32, 2, 3],
            [1, 3, 4],
            [1, 4, 5],
            [1, 5, 6],
            [1, 2, 6],
            [2, 3, 5],
            [3, 4, 6],
            [2, 4, 5],
            [3, 5, 6],
            [2, 4, 6],
        ]);
        let h = homology_over::<u32, i64>(&k);
        assert_eq!(h.betti(), vec![1, 0, 0]);
        assert_eq!(h.groups[1].torsion, vec![2]);
        assert_eq!(homology(&k).groups[1].torsion, vec![BigInt::from(2)]);
    }
}
