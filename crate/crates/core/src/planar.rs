//! Exact planar convex hulls and Minkowski sums by edge-vector merge.

use std::cmp::Ordering;

/// Integer point or vector in the plane.
pub type Pt = [i64; 2];

fn cross(o: Pt, a: Pt, b: Pt) -> i128 {
    let (ax, ay) = ((a[0] - o[0]) as i128, (a[1] - o[1]) as i128);
    let (bx, by) = ((b[0] - o[0]) as i128, (b[1] - o[1]) as i128);
    ax * by - ay * bx
}

fn cross_vec(a: Pt, b: Pt) -> i128 {
    a[0] as i128 * b[1] as i128 - a[1] as i128 * b[0] as i128
}

/// Strictly convex hull in counter-clockwise order, starting from the
/// lexicographically least point. Collinear points are dropped; a segment
/// comes back as its two endpoints and a point as itself.
pub fn convex_hull(points: &[Pt]) -> Vec<Pt> {
    let mut pts = points.to_vec();
    pts.sort_unstable();
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let mut hull: Vec<Pt> = Vec::with_capacity(pts.len() + 1);
    for &p in &pts {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    hull
}

/// Half-plane index for angular sorting: angles in `[0, π)` first.
fn half(v: Pt) -> u8 {
    if v[1] > 0 || (v[1] == 0 && v[0] > 0) {
        0
    } else {
        1
    }
}

/// Orders nonzero vectors by polar angle in `[0, 2π)`.
pub fn angle_cmp(a: Pt, b: Pt) -> Ordering {
    half(a).cmp(&half(b)).then_with(|| 0.cmp(&cross_vec(a, b)))
}

/// Lowest (then leftmost) vertex: the start of a counter-clockwise edge walk
/// whose edge angles increase from zero.
fn bottom_index(poly: &[Pt]) -> usize {
    (0..poly.len()).min_by_key(|&i| (poly[i][1], poly[i][0])).expect("nonempty polygon")
}

/// Vertices of the Minkowski sum of convex polygons (each given by its
/// vertices in any order), counter-clockwise from the lexicographically
/// least vertex.
pub fn minkowski_sum(polys: &[Vec<Pt>]) -> Vec<Pt> {
    let mut start = [0i64; 2];
    let mut edges: Vec<Pt> = Vec::new();
    for poly in polys {
        let hull = convex_hull(poly);
        if hull.is_empty() {
            continue;
        }
        let b = bottom_index(&hull);
        start[0] += hull[b][0];
        start[1] += hull[b][1];
        let k = hull.len();
        if k == 1 {
            continue;
        }
        for i in 0..k {
            let (p, q) = (hull[i], hull[(i + 1) % k]);
            edges.push([q[0] - p[0], q[1] - p[1]]);
        }
    }
    edges.sort_by(|a, b| angle_cmp(*a, *b));
    let mut merged: Vec<Pt> = Vec::new();
    for e in edges {
        match merged.last_mut() {
            Some(last) if angle_cmp(*last, e) == Ordering::Equal => {
                last[0] += e[0];
                last[1] += e[1];
            }
            _ => merged.push(e),
        }
    }
    let mut out = vec![start];
    let mut cur = start;
    for e in merged.iter().take(merged.len().saturating_sub(1)) {
        cur = [cur[0] + e[0], cur[1] + e[1]];
        out.push(cur);
    }
    let first = (0..out.len()).min_by_key(|&i| out[i]).unwrap_or(0);
    out.rotate_left(first);
    out
}

/// Edges of a polygon whose points (given in any order) are all vertices,
/// as index pairs `(i, j)` with `i < j`, sorted.
pub(crate) fn polygon_edge_pairs(pts: &[Vec<i64>]) -> Vec<(usize, usize)> {
    let planar: Vec<Pt> = pts.iter().map(|p| [p[0], p[1]]).collect();
    let hull = convex_hull(&planar);
    let idx = |p: Pt| planar.iter().position(|&q| q == p).expect("hull point is an input point");
    let k = hull.len();
    let mut edges: Vec<(usize, usize)> = match k {
        0 | 1 => Vec::new(),
        2 => vec![(idx(hull[0]), idx(hull[1]))],
        _ => (0..k).map(|i| (idx(hull[i]), idx(hull[(i + 1) % k]))).collect(),
    };
    for e in &mut edges {
        if e.0 > e.1 {
            *e = (e.1, e.0);
        }
    }
    edges.sort_unstable();
    edges
}

/// Twice the signed area of a counter-clockwise polygon.
pub fn twice_area(poly: &[Pt]) -> i128 {
    let k = poly.len();
    (0..k).map(|i| cross_vec(poly[i], poly[(i + 1) % k])).sum()
}
