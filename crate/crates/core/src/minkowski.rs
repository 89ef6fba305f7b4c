//! Minkowski sums of polytopes by breadth-first search over the edge graph
//! of the sum.
//!
//! A vertex of `A + B` decomposes uniquely as `a + b` with normal cones
//! `N_A(a)` and `N_B(b)` meeting in an open set. Every edge of the sum is
//! `face_w(A) + face_w(B)` where each face is a vertex or an edge (two edges
//! only when positively parallel), so the neighbours of `a + b` are found
//! among pairs adjacent to `(a, b)` in `A × B`. Each candidate is certified by
//! one small exact LP whose rows are the local edge vectors at `a` and `b`.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::geometry::{edge_pairs, AffineFrame, ExponentVector, VertexPolytope};
use crate::lp::open_cone_nonempty;
use crate::Rational;

/// Vertices of a polytope with their adjacency, carrying coordinates in a
/// shared affine frame next to the original lattice points.
#[derive(Clone, Debug)]
pub struct EdgeGraph {
    dim: usize,
    originals: Vec<ExponentVector>,
    coords: Vec<Vec<i64>>,
    adjacency: Vec<Vec<usize>>,
}

fn diff(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn positively_parallel(u: &[i64], v: &[i64]) -> bool {
    let dot: i128 = u.iter().zip(v).map(|(&a, &b)| a as i128 * b as i128).sum();
    if dot <= 0 {
        return false;
    }
    for k in 0..u.len() {
        for l in k + 1..u.len() {
            if u[k] as i128 * v[l] as i128 != u[l] as i128 * v[k] as i128 {
                return false;
            }
        }
    }
    true
}

impl EdgeGraph {
    /// Builds the edge graph of `poly`, with LP coordinates taken in `frame`
    /// (which must be injective on the affine hull of `poly`).
    pub fn from_polytope(poly: &VertexPolytope, frame: &AffineFrame) -> Self {
        let n = poly.len();
        let mut adjacency = vec![Vec::new(); n];
        for (i, j) in edge_pairs(poly) {
            adjacency[i].push(j);
            adjacency[j].push(i);
        }
        Self {
            dim: poly.dim(),
            originals: poly.vertices().to_vec(),
            coords: poly.vertices().iter().map(|v| frame.project(v)).collect(),
            adjacency,
        }
    }

    pub fn len(&self) -> usize {
        self.originals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.originals.is_empty()
    }

    pub fn vertices(&self) -> &[ExponentVector] {
        &self.originals
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adjacency[i]
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Multiplies every vertex by `k > 0`; the graph is unchanged.
    pub fn scaled(&self, k: i64) -> Self {
        Self {
            dim: self.dim,
            originals: self.originals.iter().map(|v| v.scale(k)).collect(),
            coords: self.coords.iter().map(|c| c.iter().map(|x| x * k).collect()).collect(),
            adjacency: self.adjacency.clone(),
        }
    }

    /// Primitive edge directions (first nonzero coordinate positive).
    pub fn edge_directions(&self) -> Vec<ExponentVector> {
        let mut dirs: Vec<ExponentVector> = Vec::new();
        for (i, nbrs) in self.adjacency.iter().enumerate() {
            for &j in nbrs {
                if i < j {
                    if let Some(d) = self.originals[j].sub(&self.originals[i]).primitive_up_to_sign() {
                        dirs.push(d);
                    }
                }
            }
        }
        dirs.sort();
        dirs.dedup();
        dirs
    }

    pub fn to_polytope(&self) -> VertexPolytope {
        VertexPolytope::from_vertices_unchecked(self.dim, self.originals.clone())
    }

    fn lex_max(&self) -> usize {
        (0..self.len()).max_by(|&a, &b| self.coords[a].cmp(&self.coords[b])).expect("nonempty graph")
    }

    /// Certifies that `(i, j) → (i2, j2)` is an edge of the sum.
    fn edge_certified(&self, other: &Self, (i, j): (usize, usize), (i2, j2): (usize, usize)) -> bool {
        let mut equal: Vec<Vec<i64>> = Vec::new();
        let mut strict: Vec<Vec<i64>> = Vec::new();
        if i2 != i {
            equal.push(diff(&self.coords[i], &self.coords[i2]));
        }
        if j2 != j {
            equal.push(diff(&other.coords[j], &other.coords[j2]));
        }
        for &k in &self.adjacency[i] {
            if k != i2 {
                strict.push(diff(&self.coords[i], &self.coords[k]));
            }
        }
        for &k in &other.adjacency[j] {
            if k != j2 {
                strict.push(diff(&other.coords[j], &other.coords[k]));
            }
        }
        let equal: Vec<&[i64]> = equal.iter().map(Vec::as_slice).collect();
        let strict: Vec<&[i64]> = strict.iter().map(Vec::as_slice).collect();
        open_cone_nonempty::<Rational>(&equal, &strict)
    }

    fn candidates(&self, other: &Self, (i, j): (usize, usize)) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for &i2 in &self.adjacency[i] {
            out.push((i2, j));
        }
        for &j2 in &other.adjacency[j] {
            out.push((i, j2));
        }
        for &i2 in &self.adjacency[i] {
            let u = diff(&self.coords[i2], &self.coords[i]);
            for &j2 in &other.adjacency[j] {
                let v = diff(&other.coords[j2], &other.coords[j]);
                if positively_parallel(&u, &v) {
                    out.push((i2, j2));
                }
            }
        }
        out
    }

    /// Minkowski sum with `other`; both graphs must share one frame.
    /// Returns the sum graph and, per sum vertex, its decomposition.
    pub fn minkowski_sum_with_pairs(&self, other: &Self) -> (Self, Vec<(usize, usize)>) {
        assert_eq!(self.dim, other.dim, "summands of different dimension");
        let start = (self.lex_max(), other.lex_max());
        let mut index: HashMap<(usize, usize), usize> = HashMap::new();
        let mut pairs = vec![start];
        let mut adjacency: Vec<Vec<usize>> = vec![Vec::new()];
        let mut expanded = vec![false];
        index.insert(start, 0);
        let mut frontier = vec![0usize];
        while !frontier.is_empty() {
            let mut tasks: Vec<(usize, (usize, usize))> = Vec::new();
            for &src in &frontier {
                for cand in self.candidates(other, pairs[src]) {
                    match index.get(&cand) {
                        Some(&id) if expanded[id] => {}
                        _ => tasks.push((src, cand)),
                    }
                }
            }
            let verdicts: Vec<bool> = tasks
                .par_iter()
                .map(|&(src, cand)| self.edge_certified(other, pairs[src], cand))
                .collect();
            for &src in &frontier {
                expanded[src] = true;
            }
            let mut next = Vec::new();
            for ((src, cand), ok) in tasks.into_iter().zip(verdicts) {
                if !ok {
                    continue;
                }
                let dst = *index.entry(cand).or_insert_with(|| {
                    pairs.push(cand);
                    adjacency.push(Vec::new());
                    expanded.push(false);
                    next.push(pairs.len() - 1);
                    pairs.len() - 1
                });
                if !adjacency[src].contains(&dst) {
                    adjacency[src].push(dst);
                    adjacency[dst].push(src);
                }
            }
            frontier = next;
        }
        let originals = pairs.iter().map(|&(i, j)| self.originals[i].add(&other.originals[j])).collect();
        let coords = pairs
            .iter()
            .map(|&(i, j)| self.coords[i].iter().zip(&other.coords[j]).map(|(a, b)| a + b).collect())
            .collect();
        (Self { dim: self.dim, originals, coords, adjacency }, pairs)
    }

    pub fn minkowski_sum(&self, other: &Self) -> Self {
        self.minkowski_sum_with_pairs(other).0
    }
}

/// Shared frame for a family of polytopes: the span of all their edge-free
/// difference vectors, injective on the affine hull of any partial sum.
pub fn common_frame(d: usize, polys: &[VertexPolytope]) -> AffineFrame {
    let diffs: Vec<Vec<i64>> = polys
        .iter()
        .flat_map(|p| {
            let v0 = p.vertices()[0].clone();
            p.vertices()[1..].iter().map(move |v| v.sub(&v0).0).collect::<Vec<_>>()
        })
        .collect();
    AffineFrame::of_directions(d, diffs.iter().map(Vec::as_slice))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::hull_reduce;

    fn poly(pts: &[&[i64]]) -> VertexPolytope {
        let v: Vec<ExponentVector> = pts.iter().map(|p| ExponentVector(p.to_vec())).collect();
        hull_reduce(&v, v[0].dim()).unwrap()
    }

    #[test]
    fn square_from_two_segments() {
        let a = poly(&[&[0, 0], &[1, 0]]);
        let b = poly(&[&[0, 0], &[0, 1]]);
        let f = common_frame(2, &[a.clone(), b.clone()]);
        let s = EdgeGraph::from_polytope(&a, &f).minkowski_sum(&EdgeGraph::from_polytope(&b, &f));
        assert_eq!(s.len(), 4);
        assert_eq!(s.edge_count(), 4);
    }

    #[test]
    fn cube_from_three_segments_in_four_space() {
        let segs = [
            poly(&[&[0, 0, 0, 0], &[1, 0, 0, 1]]),
            poly(&[&[0, 0, 0, 0], &[0, 1, 0, 1]]),
            poly(&[&[0, 0, 0, 0], &[0, 0, 1, 1]]),
        ];
        let f = common_frame(4, &segs);
        assert_eq!(f.rank(), 3);
        let mut acc = EdgeGraph::from_polytope(&segs[0], &f);
        for s in &segs[1..] {
            acc = acc.minkowski_sum(&EdgeGraph::from_polytope(s, &f));
        }
        assert_eq!(acc.len(), 8);
        assert_eq!(acc.edge_count(), 12);
        assert_eq!(acc.edge_directions().len(), 3);
    }

    #[test]
    fn point_summand_translates() {
        let a = poly(&[&[0, 0], &[2, 1], &[1, 3]]);
        let b = poly(&[&[5, 5]]);
        let f = common_frame(2, &[a.clone(), b.clone()]);
        let s = EdgeGraph::from_polytope(&a, &f).minkowski_sum(&EdgeGraph::from_polytope(&b, &f));
        assert_eq!(s.to_polytope(), a.translate(&ExponentVector(vec![5, 5])));
    }
}
