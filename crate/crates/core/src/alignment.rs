//! Two-parameter sequence alignment: alignment polygons, the slope-family
//! construction, exhaustive inference-function counts over binary pairs,
//! and the biologically meaningful parameter region.
//!
//! An alignment with `x` mismatches, `y` spaces and `z` matches scores
//! `z − αx − βy`. Every alignment of lengths `n1, n2` has
//! `2z + 2x + y = n1 + n2`, so the 3-D Newton polytope is planar and is
//! stored in two coordinates: `(y', z)` with `y' = y/2` for equal lengths,
//! `(x, y)` otherwise.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::planar::{self, Pt};
use crate::{Error, Rational, Result};

/// Gap symbol; sorts before every alignment symbol.
pub const GAP: u8 = b'-';

/// One alignment column `(top, bottom)`, with [`GAP`] for a space.
pub type Column = (u8, u8);

/// Alignment as its column sequence. The derived order compares columns
/// lexicographically, then by length.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Alignment(pub Vec<Column>);

impl Alignment {
    pub fn top(&self) -> String {
        self.0.iter().map(|c| c.0 as char).collect()
    }

    pub fn bottom(&self) -> String {
        self.0.iter().map(|c| c.1 as char).collect()
    }

    /// `(x, y, z)`: mismatches, spaces, matches.
    pub fn counts(&self) -> [i64; 3] {
        let mut xyz = [0; 3];
        for &(a, b) in &self.0 {
            if a == GAP || b == GAP {
                xyz[1] += 1;
            } else if a == b {
                xyz[2] += 1;
            } else {
                xyz[0] += 1;
            }
        }
        xyz
    }
}

impl fmt::Display for Alignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.top(), self.bottom())
    }
}

/// Mismatch penalty `α` and space penalty `β`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScoringParams {
    pub alpha: Rational,
    pub beta: Rational,
}

impl ScoringParams {
    pub fn new(alpha: Rational, beta: Rational) -> Self {
        Self { alpha, beta }
    }

    /// Insertion penalty `β' = 2β`.
    pub fn beta_prime(&self) -> Rational {
        &self.beta * Rational::from_integer(2.into())
    }

    pub fn score(&self, xyz: [i64; 3]) -> Rational {
        let r = |v: i64| Rational::from_integer(v.into());
        r(xyz[2]) - &self.alpha * r(xyz[0]) - &self.beta * r(xyz[1])
    }
}

/// Which pair of coordinates a polygon uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PolygonCoords {
    /// `(y/2, z)`: half the spaces, and matches. Equal lengths only.
    InsertionsMatches,
    /// `(x, y)`: mismatches and spaces.
    MismatchesSpaces,
}

/// Alignment polygon of a sequence pair, vertices in lexicographic order,
/// each with its least alignment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlignmentPolygon {
    pub n1: usize,
    pub n2: usize,
    pub coords: PolygonCoords,
    pub vertices: Vec<Pt>,
    pub witnesses: Vec<Alignment>,
}

impl AlignmentPolygon {
    /// Vertex list text: `2 k` then one vertex per line.
    pub fn to_text(&self) -> String {
        let mut s = format!("2 {}\n", self.vertices.len());
        for v in &self.vertices {
            s.push_str(&format!("{} {}\n", v[0], v[1]));
        }
        s
    }

    /// Recovers `(x, y, z)` from a vertex.
    pub fn xyz(&self, v: Pt) -> [i64; 3] {
        let total = (self.n1 + self.n2) as i64;
        match self.coords {
            PolygonCoords::InsertionsMatches => [(total - 2 * v[1] - 2 * v[0]) / 2, 2 * v[0], v[1]],
            PolygonCoords::MismatchesSpaces => [v[0], v[1], (total - 2 * v[0] - v[1]) / 2],
        }
    }
}

fn check_sequences(s1: &[u8], s2: &[u8]) -> Result<()> {
    if s1.is_empty() || s2.is_empty() {
        return Err(Error::Empty("sequence"));
    }
    if let Some(&c) = s1.iter().chain(s2).find(|&&c| c <= GAP || !c.is_ascii_graphic()) {
        return Err(Error::UnknownSymbol { which: "sequence", symbol: (c as char).to_string() });
    }
    Ok(())
}

/// The three ways into cell `(i, j)`: predecessor cell, column consumed,
/// and the `(y, z)` increment. Diagonal steps add a match or a mismatch.
fn steps(s1: &[u8], s2: &[u8], i: usize, j: usize) -> impl Iterator<Item = ((usize, usize), Column, [i64; 2])> {
    let mut out: Vec<((usize, usize), Column, [i64; 2])> = Vec::with_capacity(3);
    if j > 0 {
        out.push(((i, j - 1), (GAP, s2[j - 1]), [1, 0]));
    }
    if i > 0 {
        out.push(((i - 1, j), (s1[i - 1], GAP), [1, 0]));
    }
    if i > 0 && j > 0 {
        let (a, b) = (s1[i - 1], s2[j - 1]);
        out.push(((i - 1, j - 1), (a, b), [0, i64::from(a == b)]));
    }
    out.into_iter()
}

/// Hull vertices in `(y, z)` per grid cell, by planar polytope propagation.
fn propagate<W: Clone + Ord>(
    s1: &[u8],
    s2: &[u8],
    start: W,
    extend: impl Fn(&W, Column) -> W,
) -> Vec<(Pt, W)> {
    let (n1, n2) = (s1.len(), s2.len());
    let mut grid: Vec<Vec<(Pt, W)>> = vec![Vec::new(); (n1 + 1) * (n2 + 1)];
    grid[0] = vec![([0, 0], start)];
    for i in 0..=n1 {
        for j in 0..=n2 {
            if i == 0 && j == 0 {
                continue;
            }
            let mut best: BTreeMap<Pt, W> = BTreeMap::new();
            for ((pi, pj), col, inc) in steps(s1, s2, i, j) {
                for (p, w) in &grid[pi * (n2 + 1) + pj] {
                    let q = [p[0] + inc[0], p[1] + inc[1]];
                    let w2 = extend(w, col);
                    match best.get(&q) {
                        Some(old) if *old <= w2 => {}
                        _ => {
                            best.insert(q, w2);
                        }
                    }
                }
            }
            let pts: Vec<Pt> = best.keys().copied().collect();
            let hull = planar::convex_hull(&pts);
            grid[i * (n2 + 1) + j] = hull.into_iter().map(|p| (p, best[&p].clone())).collect();
        }
    }
    grid.pop().expect("nonempty grid")
}

fn to_coords(n1: usize, n2: usize, yz: Pt) -> (PolygonCoords, Pt) {
    if n1 == n2 {
        (PolygonCoords::InsertionsMatches, [yz[0] / 2, yz[1]])
    } else {
        let x = ((n1 + n2) as i64 - yz[0] - 2 * yz[1]) / 2;
        (PolygonCoords::MismatchesSpaces, [x, yz[0]])
    }
}

/// Polygon of all achievable alignment statistics of `s1` against `s2`.
pub fn alignment_polygon(s1: &[u8], s2: &[u8]) -> Result<AlignmentPolygon> {
    check_sequences(s1, s2)?;
    let end = propagate(s1, s2, Vec::<Column>::new(), |w, c| {
        let mut w = w.clone();
        w.push(c);
        w
    });
    let mut pairs: Vec<(Pt, Alignment)> = end
        .into_iter()
        .map(|(yz, w)| (to_coords(s1.len(), s2.len(), yz).1, Alignment(w)))
        .collect();
    pairs.sort();
    let coords = to_coords(s1.len(), s2.len(), [0, 0]).0;
    Ok(AlignmentPolygon {
        n1: s1.len(),
        n2: s2.len(),
        coords,
        vertices: pairs.iter().map(|p| p.0).collect(),
        witnesses: pairs.into_iter().map(|p| p.1).collect(),
    })
}

/// Polygon vertices only, in lexicographic order.
pub fn alignment_polygon_vertices(s1: &[u8], s2: &[u8]) -> Result<Vec<Pt>> {
    check_sequences(s1, s2)?;
    let mut v: Vec<Pt> = propagate(s1, s2, (), |_, _| ())
        .into_iter()
        .map(|(yz, _)| to_coords(s1.len(), s2.len(), yz).1)
        .collect();
    v.sort_unstable();
    Ok(v)
}

/// Best alignment under `params` and its score; ties go to the least
/// column sequence.
pub fn optimal_alignment(s1: &[u8], s2: &[u8], params: &ScoringParams) -> Result<(Alignment, Rational)> {
    check_sequences(s1, s2)?;
    let (n1, n2) = (s1.len(), s2.len());
    let mut grid: Vec<Option<(Rational, Vec<Column>)>> = vec![None; (n1 + 1) * (n2 + 1)];
    grid[0] = Some((Rational::zero(), Vec::new()));
    for i in 0..=n1 {
        for j in 0..=n2 {
            if i == 0 && j == 0 {
                continue;
            }
            let mut best: Option<(Rational, Vec<Column>)> = None;
            for ((pi, pj), col, _) in steps(s1, s2, i, j) {
                let (s, w) = grid[pi * (n2 + 1) + pj].as_ref().expect("predecessors filled first");
                let single = Alignment(vec![col]).counts();
                let cand_score = s + params.score(single);
                let better = match &best {
                    None => true,
                    Some((bs, bw)) => match cand_score.cmp(bs) {
                        Ordering::Greater => true,
                        Ordering::Less => false,
                        Ordering::Equal => {
                            let mut cw = w.clone();
                            cw.push(col);
                            cw < *bw
                        }
                    },
                };
                if better {
                    let mut cw = w.clone();
                    cw.push(col);
                    best = Some((cand_score, cw));
                }
            }
            grid[i * (n2 + 1) + j] = best;
        }
    }
    let (score, cols) = grid.pop().flatten().expect("final cell reachable");
    Ok((Alignment(cols), score))
}

/// Binary pair of length `n` whose polygon has an edge of slope `u/v`,
/// together with the block sizes `a`, `b` used.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlopeFamily {
    pub s1: Vec<u8>,
    pub s2: Vec<u8>,
    pub a: usize,
    pub b: usize,
    /// Length of the common `0` padding.
    pub padding: usize,
}

impl SlopeFamily {
    /// Endpoints of the promised edge in `(y', z)`.
    pub fn edge(&self) -> (Pt, Pt) {
        let (a, b, p) = (self.a as i64, self.b as i64, self.padding as i64);
        ([b, p + 3 * b], [a + b, p + a + b])
    }
}

/// Builds `σ1 = 0^a 1^b 0^b 1^a 0^p`, `σ2 = 1^a 0^b 1^b 0^a 0^p` with slope
/// `(a − 2b)/a = u/v`. Uses `a = 2v, b = v − u` when `6v − 2u ≤ n`, else
/// `a = v, b = (v − u)/2` when `v − u` is even and `3v − u ≤ n`.
pub fn slope_family(u: usize, v: usize, n: usize) -> Result<SlopeFamily> {
    if u == 0 || u >= v {
        return Err(Error::InvalidArgument(format!("need 0 < u < v, got u={u}, v={v}")));
    }
    let (a, b) = if 6 * v - 2 * u <= n {
        (2 * v, v - u)
    } else if (v - u).is_multiple_of(2) && 3 * v - u <= n {
        (v, (v - u) / 2)
    } else {
        return Err(Error::InvalidArgument(format!("no slope-{u}/{v} pair of length {n}")));
    };
    let block = |c: u8, k: usize| std::iter::repeat_n(c, k);
    let padding = n - 2 * a - 2 * b;
    let s1: Vec<u8> = block(b'0', a).chain(block(b'1', b)).chain(block(b'0', b)).chain(block(b'1', a)).chain(block(b'0', padding)).collect();
    let s2: Vec<u8> = block(b'1', a).chain(block(b'0', b)).chain(block(b'1', b)).chain(block(b'0', a)).chain(block(b'0', padding)).collect();
    Ok(SlopeFamily { s1, s2, a, b, padding })
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Reduced slopes `u/v` with `0 < u < v` and `6v − 2u ≤ n`: each is an edge
/// slope of some length-`n` polygon, so the summed polygon has at least
/// this many edges in the meaningful region.
pub fn slope_family_slopes(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for v in 2..=n {
        for u in 1..v {
            if 6 * v <= n + 2 * u && gcd(u, v) == 1 {
                out.push((u, v));
            }
        }
    }
    out
}

/// Largest `n` accepted by the exhaustive count.
pub const ALIGNMENT_COUNT_CAP: usize = 12;

/// Result of the exhaustive count over binary pairs of length `n`.
#[derive(Clone, Debug)]
pub struct AlignmentCount {
    pub n: usize,
    /// Pairs evaluated (one per symmetry orbit).
    pub pairs_evaluated: u64,
    pub distinct_polygons: usize,
    /// Vertices of the summed polygon, counter-clockwise.
    pub polygon: Vec<Pt>,
    pub count: u64,
    pub meaningful: u64,
    pub meaningful_alpha_le_beta: u64,
    pub slope_families: u64,
}

fn complement(x: u32, n: usize) -> u32 {
    !x & ((1u32 << n) - 1)
}

fn reverse(x: u32, n: usize) -> u32 {
    x.reverse_bits() >> (32 - n)
}

/// Whether `(x, y)` is the least member of its orbit under swapping the
/// sequences, complementing both and reversing both, all of which preserve
/// the polygon.
fn orbit_minimal(x: u32, y: u32, n: usize) -> bool {
    let mut imgs = Vec::with_capacity(8);
    for (a, b) in [(x, y), (y, x)] {
        for (c, d) in [(a, b), (complement(a, n), complement(b, n))] {
            imgs.push((c, d));
            imgs.push((reverse(c, n), reverse(d, n)));
        }
    }
    imgs.iter().all(|&p| (x, y) <= p)
}

fn bits(x: u32, n: usize) -> Vec<u8> {
    (0..n).map(|k| if x >> (n - 1 - k) & 1 == 1 { b'1' } else { b'0' }).collect()
}

/// Outward edge normals of a counter-clockwise polygon.
fn edge_normals(poly: &[Pt]) -> Vec<Pt> {
    let k = poly.len();
    if k < 2 {
        return Vec::new();
    }
    let m = if k == 2 { 2 } else { k };
    (0..m)
        .map(|i| {
            let (p, q) = (poly[i], poly[(i + 1) % k]);
            [q[1] - p[1], p[0] - q[0]]
        })
        .collect()
}

fn cross(a: Pt, b: Pt) -> i128 {
    a[0] as i128 * b[1] as i128 - a[1] as i128 * b[0] as i128
}

/// Whether `w` lies strictly inside the counter-clockwise angle from `from`
/// to `to` (which spans less than a half-turn plus a quarter).
fn strictly_between(w: Pt, from: Pt, to: Pt) -> bool {
    let after_from = cross(from, w) > 0;
    let before_to = cross(w, to) > 0;
    let total = cross(from, to);
    if total > 0 {
        after_from && before_to
    } else {
        // reflex or straight sector
        after_from || before_to
    }
}

/// Vertices of the summed `(y', z)` polygon whose normal cones meet the
/// open direction sector `(from, to)` in a full-dimensional set.
fn cones_meeting(poly: &[Pt], from: Pt, to: Pt) -> u64 {
    if poly.len() == 1 {
        return 1;
    }
    1 + edge_normals(poly).into_iter().filter(|&w| strictly_between(w, from, to)).count() as u64
}

/// The direction `(α − β', 1 + α)` maximized in `(y', z)` sweeps, over
/// `α, β ≥ 0`, the open sector from `(1, 1)` counter-clockwise to `(−1, 0)`.
pub fn meaningful_vertices(poly: &[Pt]) -> u64 {
    cones_meeting(poly, [1, 1], [-1, 0])
}

/// Same, with the extra constraint `α ≤ β`: the sector from `(0, 1)` to
/// `(−1, 0)`.
pub fn meaningful_vertices_alpha_le_beta(poly: &[Pt]) -> u64 {
    cones_meeting(poly, [0, 1], [-1, 0])
}

/// Sums the polygons of all binary pairs of length `n` and counts vertices.
pub fn count_alignment_inference_functions(n: usize) -> Result<AlignmentCount> {
    if n == 0 || n > ALIGNMENT_COUNT_CAP {
        return Err(Error::OutOfBudget(format!("alignment count needs 1 <= n <= {ALIGNMENT_COUNT_CAP}, got {n}")));
    }
    let total: u32 = 1 << n;
    let polys: BTreeSet<Vec<Pt>> = (0..total)
        .into_par_iter()
        .flat_map_iter(|x| (0..total).filter(move |&y| orbit_minimal(x, y, n)).map(move |y| (x, y)))
        .map(|(x, y)| alignment_polygon_vertices(&bits(x, n), &bits(y, n)).expect("binary sequences are valid"))
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    let pairs_evaluated: u64 = (0..total).map(|x| (0..total).filter(|&y| orbit_minimal(x, y, n)).count() as u64).sum();
    let list: Vec<Vec<Pt>> = polys.into_iter().collect();
    let polygon = planar::minkowski_sum(&list);
    Ok(AlignmentCount {
        n,
        pairs_evaluated,
        distinct_polygons: list.len(),
        count: polygon.len() as u64,
        meaningful: meaningful_vertices(&polygon),
        meaningful_alpha_le_beta: meaningful_vertices_alpha_le_beta(&polygon),
        slope_families: slope_family_slopes(n).len() as u64,
        polygon,
    })
}

/// Number of biologically meaningful inference functions for length `n`.
pub fn meaningful_cone_count(n: usize) -> Result<u64> {
    Ok(count_alignment_inference_functions(n)?.meaningful)
}

/// Whether `params` lies in the meaningful region `α, β ≥ 0`.
pub fn is_meaningful(params: &ScoringParams) -> bool {
    !params.alpha.is_negative() && !params.beta.is_negative()
}

/// Direction maximized in `(y', z)` coordinates.
pub fn direction(params: &ScoringParams) -> [Rational; 2] {
    [&params.alpha - params.beta_prime(), Rational::one() + &params.alpha]
}
