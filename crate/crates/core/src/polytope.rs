//! The Newton-polytope semiring and the vertex-count bound calculators.
//!
//! Polynomial addition maps to the hull of the union of exponent sets and
//! polynomial multiplication to the Minkowski sum.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::geometry::{hull_reduce, ExponentVector, VertexPolytope};
use crate::minkowski::{common_frame, EdgeGraph};
use crate::{Error, Rational, Result};

/// Hidden-data label attached to a polytope vertex, as symbol indices.
pub type Witness = Vec<usize>;

/// A Newton polytope whose vertices may carry one explaining label each.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolytope {
    polytope: VertexPolytope,
    witness: BTreeMap<ExponentVector, Witness>,
}

impl NewtonPolytope {
    pub fn new(polytope: VertexPolytope) -> Self {
        Self { polytope, witness: BTreeMap::new() }
    }

    /// Newton polytope of a single monomial, labelled by `witness`.
    pub fn monomial(exponent: ExponentVector, witness: Witness) -> Self {
        let mut w = BTreeMap::new();
        w.insert(exponent.clone(), witness);
        Self { polytope: VertexPolytope::point(exponent), witness: w }
    }

    pub fn polytope(&self) -> &VertexPolytope {
        &self.polytope
    }

    pub fn into_polytope(self) -> VertexPolytope {
        self.polytope
    }

    pub fn witness(&self, vertex: &ExponentVector) -> Option<&Witness> {
        self.witness.get(vertex)
    }

    pub fn witnesses(&self) -> &BTreeMap<ExponentVector, Witness> {
        &self.witness
    }

    pub fn dim(&self) -> usize {
        self.polytope.dim()
    }

    pub fn len(&self) -> usize {
        self.polytope.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polytope.is_empty()
    }

    /// Shifts every vertex by `by` and extends every witness by `symbols`.
    pub fn translate_extend(&self, by: &ExponentVector, symbols: &[usize]) -> Self {
        let polytope = self.polytope.translate(by);
        let witness = self
            .witness
            .iter()
            .map(|(k, w)| {
                let mut w = w.clone();
                w.extend_from_slice(symbols);
                (k.add(by), w)
            })
            .collect();
        Self { polytope, witness }
    }
}

fn same_dim(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch { expected: a, found: b });
    }
    Ok(())
}

/// Newton polytope of a sum of polynomials. When both inputs label the same
/// surviving vertex, the lexicographically least label is kept.
pub fn np_add(p: &NewtonPolytope, q: &NewtonPolytope) -> Result<NewtonPolytope> {
    same_dim(p.dim(), q.dim())?;
    let mut pts: Vec<ExponentVector> = p.polytope.vertices().to_vec();
    pts.extend_from_slice(q.polytope.vertices());
    let hull = hull_reduce(&pts, p.dim())?;
    let mut witness = BTreeMap::new();
    for v in hull.vertices() {
        let best = match (p.witness.get(v), q.witness.get(v)) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        if let Some(w) = best {
            witness.insert(v.clone(), w.clone());
        }
    }
    Ok(NewtonPolytope { polytope: hull, witness })
}

/// Newton polytope of a product: the hull of all pairwise vertex sums.
/// A vertex's label is the concatenation of its two summands' labels.
pub fn np_mul(p: &NewtonPolytope, q: &NewtonPolytope) -> Result<NewtonPolytope> {
    same_dim(p.dim(), q.dim())?;
    let mut sums: Vec<(ExponentVector, usize, usize)> = Vec::new();
    for (i, a) in p.polytope.vertices().iter().enumerate() {
        for (j, b) in q.polytope.vertices().iter().enumerate() {
            sums.push((a.add(b), i, j));
        }
    }
    let pts: Vec<ExponentVector> = sums.iter().map(|s| s.0.clone()).collect();
    let hull = hull_reduce(&pts, p.dim())?;
    let mut witness = BTreeMap::new();
    for v in hull.vertices() {
        // a vertex of a Minkowski sum has a unique decomposition
        let &(_, i, j) = sums.iter().find(|s| &s.0 == v).expect("hull vertex is a pairwise sum");
        let (a, b) = (&p.polytope.vertices()[i], &q.polytope.vertices()[j]);
        if let (Some(wa), Some(wb)) = (p.witness.get(a), q.witness.get(b)) {
            let mut w = wa.clone();
            w.extend_from_slice(wb);
            witness.insert(v.clone(), w);
        }
    }
    Ok(NewtonPolytope { polytope: hull, witness })
}

/// Result of summing a family of polytopes.
#[derive(Clone, Debug)]
pub struct MinkowskiSum {
    pub polytope: VertexPolytope,
    /// Number of distinct summands after merging identical ones.
    pub distinct_summands: usize,
    /// Union of the summands' primitive edge directions.
    pub edge_directions: Vec<ExponentVector>,
}

/// Vertex set of the Minkowski sum of `polys`.
///
/// Identical summands are merged into one scaled copy, the rest are folded
/// largest first through the edge-graph search.
pub fn minkowski_sum_many(polys: &[VertexPolytope]) -> Result<VertexPolytope> {
    Ok(minkowski_sum_report(polys)?.polytope)
}

pub fn minkowski_sum_report(polys: &[VertexPolytope]) -> Result<MinkowskiSum> {
    let first = polys.first().ok_or(Error::Empty("summand list"))?;
    let d = first.dim();
    for p in polys {
        same_dim(d, p.dim())?;
    }
    let mut groups: BTreeMap<&VertexPolytope, i64> = BTreeMap::new();
    for p in polys {
        *groups.entry(p).or_insert(0) += 1;
    }
    let mut distinct: Vec<(&VertexPolytope, i64)> = groups.into_iter().collect();
    // stable: equal sizes keep canonical order
    distinct.sort_by_key(|(p, _)| std::cmp::Reverse(p.len()));
    let bases: Vec<VertexPolytope> = distinct.iter().map(|(p, _)| (*p).clone()).collect();
    let frame = common_frame(d, &bases);
    let graphs: Vec<EdgeGraph> = distinct
        .par_iter()
        .map(|(p, k)| {
            let g = EdgeGraph::from_polytope(p, &frame);
            if *k == 1 {
                g
            } else {
                g.scaled(*k)
            }
        })
        .collect();
    let mut edge_directions: Vec<ExponentVector> =
        graphs.iter().flat_map(EdgeGraph::edge_directions).collect();
    edge_directions.sort();
    edge_directions.dedup();
    let mut iter = graphs.into_iter();
    let mut acc = iter.next().expect("at least one summand");
    for g in iter {
        acc = acc.minkowski_sum(&g);
    }
    Ok(MinkowskiSum { polytope: acc.to_polytope(), distinct_summands: distinct.len(), edge_directions })
}

/// Upper bounds on vertex counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundReport {
    /// Number of pairwise non-parallel edge directions, when known.
    pub m: Option<u64>,
    /// Complexity of the model (maximum degree of an observation polynomial).
    pub big_m: u64,
    pub d: u64,
    /// `2 Σ_{j<d} C(m-1, j)`, present when `m` is.
    pub gs_bound: Option<BigInt>,
    /// `2 Σ_{j<d} C((2M+1)^d - 1, j)`.
    pub fif_bound: BigInt,
    /// Coefficient-times-power leading term `2^{d²-d+1}/(d-1)! · M^{d(d-1)}`.
    pub dominant_term: Rational,
}

fn binomial(n: &BigInt, k: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - BigInt::from(i)) / BigInt::from(i + 1);
    }
    acc
}

fn twice_binomial_prefix(n: &BigInt, d: u64) -> BigInt {
    let mut sum = BigInt::zero();
    for j in 0..d {
        if &BigInt::from(j) > n {
            break;
        }
        sum += binomial(n, j);
    }
    sum * 2
}

/// Vertex bound for a sum of polytopes with `m` edge directions in `R^d`.
pub fn gs_bound(m: u64, d: u64) -> BigInt {
    assert!(m >= 1 && d >= 1);
    twice_binomial_prefix(&BigInt::from(m - 1), d)
}

/// Inference-function bound in terms of complexity `M` and `d` parameters.
pub fn fif_bound(big_m: u64, d: u64) -> BigInt {
    assert!(d >= 1);
    let base = BigInt::from(2 * big_m + 1);
    let n = num_traits::pow(base, d as usize) - 1;
    twice_binomial_prefix(&n, d)
}

pub fn dominant_term(big_m: u64, d: u64) -> Rational {
    assert!(d >= 1);
    let mut fact = BigInt::one();
    for i in 1..d {
        fact *= BigInt::from(i);
    }
    let coeff = Rational::new(num_traits::pow(BigInt::from(2), (d * d - d + 1) as usize), fact);
    let power = num_traits::pow(BigInt::from(big_m), (d * (d - 1)) as usize);
    coeff * Rational::from_integer(power)
}

pub fn bounds(m: Option<u64>, big_m: u64, d: u64) -> Result<BoundReport> {
    if d == 0 {
        return Err(Error::InvalidArgument("d must be at least 1".into()));
    }
    if m == Some(0) {
        return Err(Error::InvalidArgument("m must be at least 1".into()));
    }
    Ok(BoundReport {
        m,
        big_m,
        d,
        gs_bound: m.map(|m| gs_bound(m, d)),
        fif_bound: fif_bound(big_m, d),
        dominant_term: dominant_term(big_m, d),
    })
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.m.map_or_else(|| "-".to_string(), |m| m.to_string());
        let gs = self.gs_bound.as_ref().map_or_else(|| "-".to_string(), BigInt::to_string);
        write!(
            f,
            "m={} M={} d={} gs={} fif={} dominant={}",
            m, self.big_m, self.d, gs, self.fif_bound, self.dominant_term
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planar;
    use proptest::prelude::*;

    fn ev(v: &[i64]) -> ExponentVector {
        ExponentVector(v.to_vec())
    }

    fn np(pts: &[&[i64]]) -> NewtonPolytope {
        let v: Vec<ExponentVector> = pts.iter().map(|p| ev(p)).collect();
        NewtonPolytope::new(hull_reduce(&v, v[0].dim()).unwrap())
    }

    #[test]
    fn add_examples() {
        let s = np_add(&np(&[&[3, 0]]), &np(&[&[0, 4]])).unwrap();
        assert_eq!(s.polytope().vertices(), &[ev(&[0, 4]), ev(&[3, 0])]);
        let p = np(&[&[0, 0], &[2, 1], &[1, 3]]);
        assert_eq!(np_add(&p, &p).unwrap(), p);
        let mut acc = np(&[&[3, 0]]);
        for m in [[2, 2], [1, 2], [1, 0], [0, 4]] {
            acc = np_add(&acc, &np(&[&m])).unwrap();
        }
        assert_eq!(acc.polytope().vertices(), &[ev(&[0, 4]), ev(&[1, 0]), ev(&[2, 2]), ev(&[3, 0])]);
    }

    #[test]
    fn add_keeps_least_witness() {
        let a = NewtonPolytope::monomial(ev(&[1, 1]), vec![1, 0]);
        let b = NewtonPolytope::monomial(ev(&[1, 1]), vec![0, 1]);
        assert_eq!(np_add(&a, &b).unwrap().witness(&ev(&[1, 1])), Some(&vec![0, 1]));
    }

    #[test]
    fn mul_examples() {
        let sq = np_mul(&np(&[&[0, 0], &[1, 0]]), &np(&[&[0, 0], &[0, 1]])).unwrap();
        assert_eq!(sq.len(), 4);
        let p = np(&[&[0, 0], &[2, 1], &[1, 3]]);
        assert_eq!(np_mul(&p, &np(&[&[0, 0]])).unwrap().polytope(), p.polytope());
        let seg = np_mul(&np(&[&[0, 0], &[1, 1]]), &np(&[&[0, 0], &[2, 2]])).unwrap();
        assert_eq!(seg.polytope().vertices(), &[ev(&[0, 0]), ev(&[3, 3])]);
        assert!(np_mul(&np(&[&[0, 0]]), &np(&[&[0, 0, 0]])).is_err());
    }

    #[test]
    fn mul_concatenates_witnesses() {
        let a = np_add(&NewtonPolytope::monomial(ev(&[0, 0]), vec![0]), &NewtonPolytope::monomial(ev(&[1, 0]), vec![1])).unwrap();
        let b = np_add(&NewtonPolytope::monomial(ev(&[0, 0]), vec![0]), &NewtonPolytope::monomial(ev(&[0, 1]), vec![1])).unwrap();
        let s = np_mul(&a, &b).unwrap();
        assert_eq!(s.witness(&ev(&[1, 1])), Some(&vec![1, 1]));
        assert_eq!(s.witness(&ev(&[1, 0])), Some(&vec![1, 0]));
    }

    #[test]
    fn sum_many_examples() {
        let segs: Vec<VertexPolytope> = [[1, 1], [1, 2], [2, 1]]
            .iter()
            .map(|d| np(&[&[0, 0], d]).into_polytope())
            .collect();
        assert_eq!(minkowski_sum_many(&segs).unwrap().len(), 6);
        let seg = np(&[&[0, 0], &[1, 3]]).into_polytope();
        let five = minkowski_sum_many(&vec![seg.clone(); 5]).unwrap();
        assert_eq!(five.vertices(), &[ev(&[0, 0]), ev(&[5, 15])]);
        assert!(minkowski_sum_many(&[]).is_err());
    }

    #[test]
    fn bound_examples() {
        assert_eq!(gs_bound(1, 1), BigInt::from(2));
        assert_eq!(fif_bound(9, 2), BigInt::from(722));
        assert_eq!(dominant_term(9, 2), Rational::from_integer(648.into()));
        let r = bounds(None, 9, 2).unwrap();
        assert_eq!(r.to_string(), "m=- M=9 d=2 gs=- fif=722 dominant=648");
        // d = 3: 2^7 / 2! = 64
        assert_eq!(dominant_term(1, 3), Rational::from_integer(64.into()));
        assert_eq!(gs_bound(3, 2), BigInt::from(6));
    }

    fn to_planar(p: &VertexPolytope) -> Vec<planar::Pt> {
        p.vertices().iter().map(|v| [v[0], v[1]]).collect()
    }

    fn small_poly() -> impl Strategy<Value = VertexPolytope> {
        prop::collection::vec((0i64..5, 0i64..5), 1..6).prop_map(|pts| {
            let v: Vec<ExponentVector> = pts.into_iter().map(|(x, y)| ev(&[x, y])).collect();
            hull_reduce(&v, 2).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn sum_many_matches_planar_edge_merge(polys in prop::collection::vec(small_poly(), 1..5)) {
            let ours = minkowski_sum_many(&polys).unwrap();
            let mut theirs = planar::minkowski_sum(&polys.iter().map(to_planar).collect::<Vec<_>>());
            theirs.sort_unstable();
            let ours: Vec<planar::Pt> = to_planar(&ours);
            prop_assert_eq!(ours, theirs);
        }

        #[test]
        fn sum_many_is_order_independent(mut polys in prop::collection::vec(small_poly(), 2..5)) {
            let a = minkowski_sum_many(&polys).unwrap();
            polys.reverse();
            prop_assert_eq!(a, minkowski_sum_many(&polys).unwrap());
        }

        #[test]
        fn semiring_laws(f in small_poly(), g in small_poly(), h in small_poly()) {
            let (f, g, h) = (NewtonPolytope::new(f), NewtonPolytope::new(g), NewtonPolytope::new(h));
            prop_assert_eq!(np_add(&f, &g).unwrap().into_polytope(), np_add(&g, &f).unwrap().into_polytope());
            prop_assert_eq!(np_mul(&f, &g).unwrap().into_polytope(), np_mul(&g, &f).unwrap().into_polytope());
            let left = np_mul(&np_add(&f, &g).unwrap(), &h).unwrap();
            let right = np_add(&np_mul(&f, &h).unwrap(), &np_mul(&g, &h).unwrap()).unwrap();
            prop_assert_eq!(left.polytope(), right.polytope());
        }

        #[test]
        fn vertex_count_within_gs_bound(polys in prop::collection::vec(small_poly(), 1..5)) {
            let r = minkowski_sum_report(&polys).unwrap();
            if let Some(m) = std::num::NonZeroU64::new(r.edge_directions.len() as u64) {
                prop_assert!(BigInt::from(r.polytope.len()) <= gs_bound(m.get(), 2));
            } else {
                prop_assert_eq!(r.polytope.len(), 1);
            }
        }
    }
}
