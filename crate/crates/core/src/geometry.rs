//! Lattice points, vertex-set polytopes, and LP-certified face queries.

use std::fmt;
use std::ops::Deref;

use num_integer::Integer as _;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::lp::open_cone_nonempty;
use crate::scalar::Scalar;
use crate::{Error, Rational, Result};

/// Integer point in `Z^d`; for model monomials, the exponent tuple.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExponentVector(pub Vec<i64>);

impl ExponentVector {
    pub fn zeros(d: usize) -> Self {
        Self(vec![0; d])
    }

    pub fn unit(d: usize, i: usize) -> Self {
        let mut v = vec![0; d];
        v[i] = 1;
        Self(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.dim(), other.dim());
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        debug_assert_eq!(self.dim(), other.dim());
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: i64) -> Self {
        Self(self.0.iter().map(|a| a * k).collect())
    }

    pub fn total_degree(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn dot(&self, w: &Direction) -> Rational {
        debug_assert_eq!(self.dim(), w.dim());
        let mut acc = Rational::zero();
        for (x, c) in self.0.iter().zip(&w.0) {
            if *x != 0 && !c.is_zero() {
                acc += c * Rational::from_integer((*x).into());
            }
        }
        acc
    }

    /// Primitive representative of this vector's direction, with its first
    /// nonzero coordinate positive. `None` for the zero vector.
    pub fn primitive_up_to_sign(&self) -> Option<Self> {
        let g = self.0.iter().fold(0i64, |g, &x| g.gcd(&x));
        if g == 0 {
            return None;
        }
        let first = *self.0.iter().find(|&&x| x != 0)?;
        let s = if first < 0 { -g } else { g };
        Some(Self(self.0.iter().map(|x| x / s).collect()))
    }
}

impl Deref for ExponentVector {
    type Target = [i64];

    fn deref(&self) -> &[i64] {
        &self.0
    }
}

impl From<Vec<i64>> for ExponentVector {
    fn from(v: Vec<i64>) -> Self {
        Self(v)
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Linear functional on `R^d` with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Direction(pub Vec<Rational>);

impl Direction {
    pub fn from_ints(v: &[i64]) -> Self {
        Self(v.iter().map(|&x| Rational::from_integer(x.into())).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }
}

/// Coordinate subset on which projection is injective over an affine hull.
///
/// Row-reducing the difference vectors of a point set yields pivot columns;
/// projecting onto them is a linear isomorphism from the linear span of the
/// differences, so every convexity question can be asked in `rank`
/// coordinates instead of `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineFrame {
    ambient: usize,
    coords: Vec<usize>,
}

impl AffineFrame {
    pub fn identity(d: usize) -> Self {
        Self { ambient: d, coords: (0..d).collect() }
    }

    /// Frame of the linear span of `directions`.
    pub fn of_directions<'a, I>(d: usize, directions: I) -> Self
    where
        I: IntoIterator<Item = &'a [i64]>,
    {
        let mut basis: Vec<(usize, Vec<Rational>)> = Vec::new();
        for dir in directions {
            if basis.len() == d {
                break;
            }
            let mut v: Vec<Rational> =
                dir.iter().map(|&x| Rational::from_integer(x.into())).collect();
            for (pivot, row) in &basis {
                if v[*pivot].is_zero() {
                    continue;
                }
                let f = v[*pivot].clone() / row[*pivot].clone();
                for k in 0..d {
                    if !row[k].is_zero() {
                        v[k] = v[k].clone() - f.clone() * row[k].clone();
                    }
                }
            }
            if let Some(p) = v.iter().position(|x| !x.is_zero()) {
                basis.push((p, v));
            }
        }
        let mut coords: Vec<usize> = basis.into_iter().map(|(p, _)| p).collect();
        coords.sort_unstable();
        Self { ambient: d, coords }
    }

    /// Frame of the affine hull of `points`.
    pub fn of_points(points: &[ExponentVector]) -> Self {
        let d = points.first().map_or(0, ExponentVector::dim);
        let Some(origin) = points.first() else {
            return Self { ambient: 0, coords: Vec::new() };
        };
        let diffs: Vec<ExponentVector> = points[1..].iter().map(|p| p.sub(origin)).collect();
        Self::of_directions(d, diffs.iter().map(|v| v.0.as_slice()))
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn coords(&self) -> &[usize] {
        &self.coords
    }

    pub fn project(&self, v: &[i64]) -> Vec<i64> {
        self.coords.iter().map(|&c| v[c]).collect()
    }
}

/// Nonempty finite set of integer points that are exactly the vertices of
/// their convex hull, stored in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexPolytope {
    dim: usize,
    vertices: Vec<ExponentVector>,
}

impl VertexPolytope {
    /// Wraps a vertex list that is already known to be in convex position.
    /// Sorts and deduplicates; does not run any LP.
    pub fn from_vertices_unchecked(dim: usize, mut vertices: Vec<ExponentVector>) -> Self {
        vertices.sort();
        vertices.dedup();
        debug_assert!(!vertices.is_empty());
        debug_assert!(vertices.iter().all(|v| v.dim() == dim));
        Self { dim, vertices }
    }

    pub fn point(p: ExponentVector) -> Self {
        Self { dim: p.dim(), vertices: vec![p] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[ExponentVector] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains_vertex(&self, p: &ExponentVector) -> bool {
        self.vertices.binary_search(p).is_ok()
    }

    pub fn translate(&self, by: &ExponentVector) -> Self {
        Self { dim: self.dim, vertices: self.vertices.iter().map(|v| v.add(by)).collect() }
    }

    pub fn scale(&self, k: i64) -> Self {
        assert!(k > 0, "scaling factor must be positive");
        Self { dim: self.dim, vertices: self.vertices.iter().map(|v| v.scale(k)).collect() }
    }

    pub fn affine_frame(&self) -> AffineFrame {
        AffineFrame::of_points(&self.vertices)
    }

    /// Renders the vertex-list text format: a `d k` header followed by one
    /// line of `d` integers per vertex.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.dim, self.vertices.len());
        for v in &self.vertices {
            let parts: Vec<String> = v.iter().map(i64::to_string).collect();
            out.push_str(&parts.join(" "));
            out.push('\n');
        }
        out
    }

    /// Parses the vertex-list text format. The listed points are trusted to
    /// be vertices; use [`hull_reduce`] on untrusted input.
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or(Error::Empty("vertex list"))?;
        let nums = parse_ints(header)?;
        let [d, k] = nums[..] else {
            return Err(Error::Parse(format!("bad vertex-list header {header:?}")));
        };
        let (d, k) = (to_count(d)?, to_count(k)?);
        let mut vertices = Vec::with_capacity(k);
        for _ in 0..k {
            let line = lines.next().ok_or_else(|| Error::Parse("truncated vertex list".into()))?;
            let v = parse_ints(line)?;
            if v.len() != d {
                return Err(Error::DimensionMismatch { expected: d, found: v.len() });
            }
            vertices.push(ExponentVector(v));
        }
        if vertices.is_empty() {
            return Err(Error::Empty("vertex list"));
        }
        Ok(Self::from_vertices_unchecked(d, vertices))
    }
}

fn parse_ints(line: &str) -> Result<Vec<i64>> {
    line.split_whitespace()
        .map(|t| t.parse::<i64>().map_err(|e| Error::Parse(format!("{t:?}: {e}"))))
        .collect()
}

fn to_count(v: i64) -> Result<usize> {
    usize::try_from(v).map_err(|_| Error::Parse(format!("negative count {v}")))
}

fn check_dims(points: &[ExponentVector], d: usize) -> Result<()> {
    for p in points {
        if p.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, found: p.dim() });
        }
    }
    Ok(())
}

/// Exact test that `p` is a vertex of `conv(set)`: some `w` has
/// `w·p > w·q` for every other point `q`.
pub fn is_vertex(p: &ExponentVector, set: &[ExponentVector]) -> Result<bool> {
    if set.is_empty() {
        return Err(Error::Empty("point set"));
    }
    check_dims(set, p.dim())?;
    let others: Vec<ExponentVector> =
        set.iter().filter(|q| *q != p).map(|q| p.sub(q)).collect();
    let strict: Vec<&[i64]> = others.iter().map(|v| v.0.as_slice()).collect();
    Ok(open_cone_nonempty::<Rational>(&[], &strict))
}

/// Integer directions whose unique maximizers certify vertices without LP.
fn probe_directions(dim: usize) -> Vec<Vec<i64>> {
    let mut dirs = Vec::new();
    for i in 0..dim {
        let mut e = vec![0; dim];
        e[i] = 1;
        dirs.push(e.clone());
        e[i] = -1;
        dirs.push(e);
    }
    // a few fixed pseudo-random directions
    let mut state: u64 = 0x9E37_79B9_7F4A_7C15;
    for _ in 0..2 * dim + 4 {
        let w: Vec<i64> = (0..dim)
            .map(|_| {
                state = state.wrapping_mul(6_364_136_223_846_793_005).wrapping_add(1_442_695_040_888_963_407);
                ((state >> 33) % 2001) as i64 - 1000
            })
            .collect();
        dirs.push(w);
    }
    dirs
}

fn dot_i(a: &[i64], b: &[i64]) -> i128 {
    a.iter().zip(b).map(|(&x, &y)| x as i128 * y as i128).sum()
}

/// Indices of the points of `pts` (distinct, all of one dimension) that are
/// vertices of their convex hull.
pub(crate) fn vertex_indices(pts: &[Vec<i64>]) -> Vec<usize> {
    let n = pts.len();
    if n <= 2 {
        return (0..n).collect();
    }
    let dim = pts[0].len();
    let mut status: Vec<Option<bool>> = vec![None; n];
    for w in probe_directions(dim) {
        let vals: Vec<i128> = pts.iter().map(|p| dot_i(p, &w)).collect();
        let max = *vals.iter().max().expect("nonempty");
        let mut arg = vals.iter().enumerate().filter(|(_, v)| **v == max).map(|(i, _)| i);
        if let (Some(i), None) = (arg.next(), arg.next()) {
            status[i] = Some(true);
        }
    }
    for i in 0..n {
        if status[i].is_some() {
            continue;
        }
        let diffs: Vec<Vec<i64>> = (0..n)
            .filter(|&j| j != i && status[j] != Some(false))
            .map(|j| pts[i].iter().zip(&pts[j]).map(|(a, b)| a - b).collect())
            .collect();
        let strict: Vec<&[i64]> = diffs.iter().map(Vec::as_slice).collect();
        status[i] = Some(open_cone_nonempty::<Rational>(&[], &strict));
    }
    (0..n).filter(|&i| status[i] == Some(true)).collect()
}

/// Reduces a point set to the vertices of its convex hull, in canonical
/// (lexicographic) order.
pub fn hull_reduce(points: &[ExponentVector], d: usize) -> Result<VertexPolytope> {
    if points.is_empty() {
        return Err(Error::Empty("point set"));
    }
    check_dims(points, d)?;
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    let frame = AffineFrame::of_points(&pts);
    let projected: Vec<Vec<i64>> = pts.iter().map(|p| frame.project(p)).collect();
    let keep = if frame.rank() == 0 { vec![0] } else { vertex_indices(&projected) };
    let vertices = keep.into_iter().map(|i| pts[i].clone()).collect();
    Ok(VertexPolytope { dim: d, vertices })
}

/// All vertices of `poly` attaining the maximum of `w·x`.
pub fn argmax_face(poly: &VertexPolytope, w: &Direction) -> Result<Vec<ExponentVector>> {
    if w.dim() != poly.dim() {
        return Err(Error::DimensionMismatch { expected: poly.dim(), found: w.dim() });
    }
    if w.is_zero() {
        return Err(Error::ZeroDirection);
    }
    let scores: Vec<Rational> = poly.vertices().iter().map(|v| v.dot(w)).collect();
    let best = scores.iter().max().expect("polytope is nonempty").clone();
    Ok(poly
        .vertices()
        .iter()
        .zip(&scores)
        .filter(|(_, s)| **s == best)
        .map(|(v, _)| v.clone())
        .collect())
}

/// Whether `pts[i]`–`pts[j]` is an edge of the convex hull of `pts` (all
/// assumed vertices): some `w` ties the pair and strictly prefers it to all
/// remaining points.
pub(crate) fn is_edge<T: Scalar>(pts: &[Vec<i64>], i: usize, j: usize) -> bool {
    let tie: Vec<i64> = pts[i].iter().zip(&pts[j]).map(|(a, b)| a - b).collect();
    let diffs: Vec<Vec<i64>> = (0..pts.len())
        .filter(|&k| k != i && k != j)
        .map(|k| pts[i].iter().zip(&pts[k]).map(|(a, b)| a - b).collect())
        .collect();
    let strict: Vec<&[i64]> = diffs.iter().map(Vec::as_slice).collect();
    open_cone_nonempty::<T>(&[tie.as_slice()], &strict)
}

/// Vertex adjacency of a polytope, computed by pairwise edge certificates.
pub fn edge_pairs(poly: &VertexPolytope) -> Vec<(usize, usize)> {
    let frame = poly.affine_frame();
    let pts: Vec<Vec<i64>> = poly.vertices().iter().map(|v| frame.project(v)).collect();
    let n = pts.len();
    let mut edges = Vec::new();
    if n == 2 {
        edges.push((0, 1));
        return edges;
    }
    if frame.rank() == 2 {
        // a polygon's edges join cyclically adjacent vertices; no LP needed
        return crate::planar::polygon_edge_pairs(&pts);
    }
    for i in 0..n {
        for j in i + 1..n {
            if is_edge::<Rational>(&pts, i, j) {
                edges.push((i, j));
            }
        }
    }
    edges
}

/// One primitive representative (first nonzero coordinate positive) per
/// parallel class of edges of `poly`, sorted.
pub fn edge_directions(poly: &VertexPolytope) -> Vec<ExponentVector> {
    let v = poly.vertices();
    let mut dirs: Vec<ExponentVector> = edge_pairs(poly)
        .into_iter()
        .filter_map(|(i, j)| v[j].sub(&v[i]).primitive_up_to_sign())
        .collect();
    dirs.sort();
    dirs.dedup();
    dirs
}

/// Exact `w·x` maximum over the polytope.
pub fn support_value(poly: &VertexPolytope, w: &Direction) -> Rational {
    poly.vertices().iter().map(|v| v.dot(w)).max().expect("polytope is nonempty")
}
