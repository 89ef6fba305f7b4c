//! Counting inference functions, hyperplane-arrangement chambers, and the
//! primitivity Monte Carlo.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rayon::prelude::*;

use crate::geometry::{edge_pairs, ExponentVector, VertexPolytope};
use crate::inference::{check_cap, inference_function, observation_polytope, InferenceFunction};
use crate::model::{FactorModel, ParameterPoint};
use crate::polytope::{bounds, minkowski_sum_report, BoundReport};
use crate::records::Record;
use crate::rng::stream;
use crate::{planar, Error, Rational, Result};

/// Outcome of an exact inference-function count.
#[derive(Clone, Debug)]
pub struct CountReport {
    pub model: String,
    /// Observations enumerated.
    pub observations: usize,
    /// Observations without any positive-probability explanation; they
    /// contribute nothing to the sum.
    pub unexplainable: usize,
    /// Distinct observation polytopes after deduplication.
    pub distinct_polytopes: usize,
    pub polytope: VertexPolytope,
    pub count: u64,
    pub bound: BoundReport,
    pub elapsed: Duration,
}

impl CountReport {
    /// Deterministic fields only; wall time is reported separately.
    pub fn record(&self) -> Record {
        let b = &self.bound;
        Record::new()
            .push("model", &self.model)
            .push("observations", self.observations)
            .push("unexplainable", self.unexplainable)
            .push("distinct", self.distinct_polytopes)
            .push("count", self.count)
            .push("m", b.m.map_or_else(|| "-".into(), |m| m.to_string()))
            .push("M", b.big_m)
            .push("d", b.d)
            .push("gs", b.gs_bound.as_ref().map_or_else(|| "-".into(), BigInt::to_string))
            .push("fif", &b.fif_bound)
    }
}

/// Runs `f` on a rayon pool with `jobs` workers.
pub fn with_jobs<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

/// Newton polytopes of every explainable observation, in observation order,
/// together with the number of unexplainable ones.
pub fn observation_polytopes(model: &FactorModel, cap: u128) -> Result<(Vec<VertexPolytope>, usize)> {
    let count = check_cap(model, cap)?;
    let polys: Vec<Option<VertexPolytope>> = (0..count)
        .into_par_iter()
        .map(|i| match observation_polytope(model, &model.observation_at(i as u128)) {
            Ok(p) => Ok(Some(p.into_polytope())),
            Err(Error::Unexplainable) => Ok(None),
            Err(e) => Err(e),
        })
        .collect::<Result<_>>()?;
    let unexplainable = polys.iter().filter(|p| p.is_none()).count();
    Ok((polys.into_iter().flatten().collect(), unexplainable))
}

/// Counts inference functions as the vertices of the Minkowski sum of all
/// observation polytopes, and checks the count against both upper bounds.
pub fn count_inference_functions(model: &FactorModel, cap: u128) -> Result<CountReport> {
    let start = Instant::now();
    let (polys, unexplainable) = observation_polytopes(model, cap)?;
    let observations = polys.len() + unexplainable;
    if polys.is_empty() {
        return Err(Error::Unexplainable);
    }
    let sum = minkowski_sum_report(&polys)?;
    let count = sum.polytope.len() as u64;
    let m = sum.edge_directions.len() as u64;
    let bound = bounds((m > 0).then_some(m), model.complexity(), model.d() as u64)?;
    if BigInt::from(count) > bound.fif_bound {
        return Err(Error::BoundViolated(format!("{count} vertices exceed fif={}", bound.fif_bound)));
    }
    if let Some(gs) = &bound.gs_bound {
        if BigInt::from(count) > *gs {
            return Err(Error::BoundViolated(format!("{count} vertices exceed gs={gs}")));
        }
    }
    Ok(CountReport {
        model: model.name.clone(),
        observations,
        unexplainable,
        distinct_polytopes: sum.distinct_summands,
        polytope: sum.polytope,
        count,
        bound,
        elapsed: start.elapsed(),
    })
}

/// Random integer direction for sample `index`; coordinates uniform in
/// `[-10^6, 10^6]`. Scaling does not change argmax, so integers suffice.
pub fn random_direction(d: usize, seed: u64, index: u64) -> ParameterPoint {
    let mut rng = stream(seed, index);
    ParameterPoint((0..d).map(|_| Rational::from_integer(rng.gen_range(-1_000_000i64..=1_000_000).into())).collect())
}

/// Number of distinct inference functions seen at `samples` random
/// directions. Always a lower bound on the exact count.
pub fn sample_inference_functions(model: &FactorModel, samples: u64, seed: u64, cap: u128) -> Result<u64> {
    check_cap(model, cap)?;
    let tables: Vec<InferenceFunction> = (0..samples)
        .into_par_iter()
        .map(|i| inference_function(model, &random_direction(model.d(), seed, i), cap))
        .collect::<Result<_>>()?;
    Ok(tables.into_iter().collect::<HashSet<_>>().len() as u64)
}

/// As [`sample_inference_functions`], with tables restricted to the given
/// observations.
pub fn sample_restricted(model: &FactorModel, observations: &[Vec<usize>], samples: u64, seed: u64) -> Result<u64> {
    let tables: Vec<Vec<Option<Vec<usize>>>> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let v = random_direction(model.d(), seed, i);
            observations
                .iter()
                .map(|tau| match crate::inference::viterbi(model, tau, &v) {
                    Ok((h, _)) => Ok(Some(h.0)),
                    Err(Error::Unexplainable) => Ok(None),
                    Err(e) => Err(e),
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    Ok(tables.into_iter().collect::<HashSet<_>>().len() as u64)
}

/// Chamber census of the central arrangement with normals
/// `{a ∈ Z^d : a_i ≥ 1, Σ a_i < n}` (primitive representatives).
#[derive(Clone, Debug)]
pub struct ArrangementReport {
    pub d: usize,
    pub n: u64,
    pub normals: Vec<ExponentVector>,
    /// Number of distinct normals; equals `normals.len()` unless the list
    /// was not materialized.
    pub normal_count: u64,
    pub chamber_count: u64,
    pub max_extreme_rays: Option<u64>,
}

impl ArrangementReport {
    pub fn record(&self) -> Record {
        let r = Record::new()
            .push("d", self.d)
            .push("n", self.n)
            .push("normals", self.normal_count)
            .push("chambers", self.chamber_count);
        match self.max_extreme_rays {
            Some(x) => r.push("max_rays", x),
            None => r,
        }
    }
}

/// Largest `n` for which the two-dimensional normals are summed explicitly.
const PLANAR_EXPLICIT_LIMIT: u64 = 2000;

fn arrangement_budget(d: usize, n: u64) -> Result<()> {
    let ok = match d {
        2 => (3..=10_000).contains(&n),
        3 => (3..=8).contains(&n),
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::OutOfBudget(format!("arrangement with d={d}, n={n} (supported: d=2 with 3<=n<=10000, d=3 with 3<=n<=8)")))
    }
}

fn gcd_all(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| g.gcd(&x))
}

/// Primitive positive vectors with coordinate sum below `n`.
pub fn arrangement_normals(d: usize, n: u64) -> Vec<ExponentVector> {
    let mut out = Vec::new();
    let mut cur = vec![1i64; d];
    fn rec(k: usize, budget: i64, cur: &mut Vec<i64>, out: &mut Vec<ExponentVector>) {
        if k == cur.len() {
            if gcd_all(cur) == 1 {
                out.push(ExponentVector(cur.clone()));
            }
            return;
        }
        let rest = (cur.len() - k - 1) as i64;
        for a in 1..=budget - rest {
            cur[k] = a;
            rec(k + 1, budget - a, cur, out);
        }
    }
    // coordinates sum to at most n - 1
    rec(0, n as i64 - 1, &mut cur, &mut out);
    out
}

/// Chambers of the arrangement as vertices of the zonotope of its normals.
pub fn arrangement_chambers(d: usize, n: u64) -> Result<ArrangementReport> {
    arrangement_budget(d, n)?;
    if d == 2 && n > PLANAR_EXPLICIT_LIMIT {
        // Distinct lines through the origin cut the plane into twice as many
        // sectors; the normals are pairwise non-parallel by primitivity.
        let k: u64 = (1..n as i64)
            .into_par_iter()
            .map(|a| (1..n as i64 - a).filter(|&b| a.gcd(&b) == 1).count() as u64)
            .sum();
        return Ok(ArrangementReport { d, n, normals: Vec::new(), normal_count: k, chamber_count: 2 * k, max_extreme_rays: None });
    }
    let normals = arrangement_normals(d, n);
    let chamber_count = if d == 2 {
        let segs: Vec<Vec<planar::Pt>> = normals.iter().map(|a| vec![[0, 0], [a[0], a[1]]]).collect();
        let z = planar::minkowski_sum(&segs).len() as u64;
        if z != 2 * normals.len() as u64 {
            return Err(Error::BoundViolated(format!("planar zonotope has {z} vertices for {} lines", normals.len())));
        }
        z
    } else {
        zonotope(d, &normals)?.len() as u64
    };
    Ok(ArrangementReport { d, n, normal_count: normals.len() as u64, normals, chamber_count, max_extreme_rays: None })
}

/// Zonotope of the normals; with no normals it is the origin, matching the
/// single chamber of an empty arrangement.
fn zonotope(d: usize, normals: &[ExponentVector]) -> Result<VertexPolytope> {
    if normals.is_empty() {
        return Ok(VertexPolytope::point(ExponentVector::zeros(d)));
    }
    let segs: Vec<VertexPolytope> = normals
        .iter()
        .map(|a| VertexPolytope::from_vertices_unchecked(d, vec![ExponentVector::zeros(d), a.clone()]))
        .collect();
    Ok(minkowski_sum_report(&segs)?.polytope)
}

fn cross3(a: &[i64], b: &[i64]) -> [i64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn primitive3(v: [i64; 3]) -> [i64; 3] {
    let g = gcd_all(&v).abs();
    [v[0] / g, v[1] / g, v[2] / g]
}

/// Extreme rays of the cone `{w : g·w ≥ 0 for all g}` in `R^3`, as
/// primitive vectors. A cone containing a line has none.
fn extreme_rays_3d(gens: &[Vec<i64>]) -> Vec<[i64; 3]> {
    let mut rays: Vec<[i64; 3]> = Vec::new();
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            let c = cross3(&gens[i], &gens[j]);
            if c == [0, 0, 0] {
                continue;
            }
            for r in [c, [-c[0], -c[1], -c[2]]] {
                if gens.iter().all(|g| dot(g, &r) >= 0) {
                    let p = primitive3(r);
                    if !rays.contains(&p) {
                        rays.push(p);
                    }
                }
            }
        }
    }
    // a ray and its negative both feasible means the cone holds a line
    let lineal = rays.iter().any(|r| rays.contains(&[-r[0], -r[1], -r[2]]));
    if lineal {
        Vec::new()
    } else {
        rays
    }
}

/// Maximum number of extreme rays over the chambers, checked against
/// `2^{d(d-1)}`.
pub fn extreme_rays_check(d: usize, n: u64) -> Result<u64> {
    let ok = match d {
        2 => (3..=50).contains(&n),
        3 => (3..=6).contains(&n),
        _ => false,
    };
    if !ok {
        return Err(Error::OutOfBudget(format!("extreme rays with d={d}, n={n} (supported: d=2 with n<=50, d=3 with n<=6)")));
    }
    let limit = 1u64 << (d * (d - 1));
    let best = if d == 2 {
        // each sector between consecutive lines is bounded by two rays; a
        // single line leaves two half-planes, which have none
        let rep = arrangement_chambers(2, n)?;
        debug_assert_eq!(rep.chamber_count, 2 * rep.normal_count);
        if rep.normal_count > 1 {
            2
        } else {
            0
        }
    } else {
        let normals = arrangement_normals(3, n);
        let z = zonotope(3, &normals)?;
        let mut nbrs: Vec<Vec<usize>> = vec![Vec::new(); z.len()];
        for (i, j) in edge_pairs(&z) {
            nbrs[i].push(j);
            nbrs[j].push(i);
        }
        (0..z.len())
            .map(|i| {
                let p = &z.vertices()[i];
                let gens: Vec<Vec<i64>> = nbrs[i].iter().map(|&j| p.sub(&z.vertices()[j]).0).collect();
                extreme_rays_3d(&gens).len() as u64
            })
            .max()
            .unwrap_or(0)
    };
    if best > limit {
        return Err(Error::BoundViolated(format!("{best} extreme rays exceed {limit}")));
    }
    Ok(best)
}

/// Determinant by fraction-free elimination.
fn det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

fn column_subsets(d: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..m).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (0..m).rev().find(|&i| cur[i] < d - m + i) else { break };
        cur[i] += 1;
        for j in i + 1..m {
            cur[j] = cur[j - 1] + 1;
        }
    }
    out
}

/// Whether the rows of `s` can be extended to a basis of `Z^d`: the gcd of
/// all maximal minors is 1.
pub fn is_primitive_set(s: &[Vec<i64>]) -> bool {
    let m = s.len();
    let d = s[0].len();
    let mut g = BigInt::zero();
    for cols in column_subsets(d, m) {
        let minor: Vec<Vec<BigInt>> = s.iter().map(|row| cols.iter().map(|&c| BigInt::from(row[c])).collect()).collect();
        g = g.gcd(&det(minor));
        if g.is_one() {
            return true;
        }
    }
    false
}

/// Fraction of `samples` random sets of `m` vectors, uniform in `[0, box]^d`,
/// that are primitive.
pub fn primitive_probability(d: usize, m: usize, bx: u64, samples: u64, seed: u64) -> Result<Rational> {
    if m == 0 || m >= d {
        return Err(Error::InvalidArgument(format!("need 1 <= m < d, got m={m}, d={d}")));
    }
    if bx < 100 || samples == 0 {
        return Err(Error::InvalidArgument("box must be at least 100 and samples positive".into()));
    }
    let bx = i64::try_from(bx).map_err(|_| Error::InvalidArgument("box too large".into()))?;
    let hits: u64 = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(seed, i);
            let s: Vec<Vec<i64>> = (0..m).map(|_| (0..d).map(|_| rng.gen_range(0..=bx)).collect()).collect();
            u64::from(is_primitive_set(&s))
        })
        .sum();
    Ok(Rational::new(hits.into(), samples.into()))
}

const ZETA_TERMS: u64 = 2000;

fn scale() -> BigInt {
    num_traits::pow(BigInt::from(10), 30)
}

/// Enclosing interval for `ζ(s)`, `s ≥ 2`, from the partial sum to
/// `ZETA_TERMS` and the integral tail bounds, with each term rounded outward.
fn zeta_interval(s: u32) -> (Rational, Rational) {
    let big = scale();
    let (mut lo, mut hi) = (BigInt::zero(), BigInt::zero());
    for i in 1..=ZETA_TERMS {
        let p = num_traits::pow(BigInt::from(i), s as usize);
        let (q, r) = big.div_rem(&p);
        hi += &q + if r.is_zero() { 0 } else { 1 };
        lo += q;
    }
    let n = BigInt::from(ZETA_TERMS);
    let tail = |base: BigInt| Rational::new(BigInt::one(), num_traits::pow(base, s as usize - 1) * BigInt::from(s - 1));
    let lo = Rational::new(lo, big.clone()) + tail(&n + 1);
    let hi = Rational::new(hi, big) + tail(n);
    (lo, hi)
}

/// Interval containing `Π_{j=d-m+1}^{d} 1/ζ(j)`.
pub fn zeta_reference(d: usize, m: usize) -> Result<(Rational, Rational)> {
    if m == 0 || m >= d {
        return Err(Error::InvalidArgument(format!("need 1 <= m < d, got m={m}, d={d}; zeta(1) diverges")));
    }
    let mut lo = Rational::one();
    let mut hi = Rational::one();
    for j in d - m + 1..=d {
        let (zl, zh) = zeta_interval(j as u32);
        lo /= zh;
        hi /= zl;
    }
    debug_assert!(lo.is_positive());
    Ok((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_homogeneous_hmm, HmmTables};

    fn f(x: &Rational) -> f64 {
        use num_traits::ToPrimitive;
        x.to_f64().unwrap()
    }

    #[test]
    fn hmm_n1_has_four() {
        let m = build_homogeneous_hmm(1, 2, 2, &HmmTables::identity(2, 2)).unwrap();
        let r = count_inference_functions(&m, 1 << 20).unwrap();
        assert_eq!(r.count, 4);
        assert_eq!(r.distinct_polytopes, 2);
        assert_eq!(sample_inference_functions(&m, 1000, 1, 1 << 20).unwrap(), 4);
        assert_eq!(sample_inference_functions(&m, 1, 1, 1 << 20).unwrap(), 1);
    }

    #[test]
    fn small_arrangements() {
        let r = arrangement_chambers(2, 4).unwrap();
        assert_eq!(r.chamber_count, 6);
        assert_eq!(arrangement_chambers(2, 3).unwrap().chamber_count, 2);
        assert!(arrangement_chambers(4, 5).is_err());
        assert_eq!(extreme_rays_check(2, 10).unwrap(), 2);
        assert!(extreme_rays_check(3, 5).unwrap() <= 64);
    }

    #[test]
    fn planar_routes_agree_at_the_switch() {
        let explicit = arrangement_chambers(2, PLANAR_EXPLICIT_LIMIT).unwrap();
        let k: u64 = (1..PLANAR_EXPLICIT_LIMIT as i64)
            .map(|a| (1..PLANAR_EXPLICIT_LIMIT as i64 - a).filter(|&b| a.gcd(&b) == 1).count() as u64)
            .sum();
        assert_eq!(explicit.chamber_count, 2 * k);
    }

    #[test]
    fn primitive_sets() {
        assert!(is_primitive_set(&[vec![2, 3]]));
        assert!(!is_primitive_set(&[vec![2, 4]]));
        assert!(!is_primitive_set(&[vec![0, 0]]));
        assert!(is_primitive_set(&[vec![1, 0, 0], vec![0, 1, 0]]));
        assert!(!is_primitive_set(&[vec![1, 1, 0], vec![1, -1, 0]]));
        assert!(primitive_probability(2, 2, 100, 10, 0).is_err());
    }

    #[test]
    fn zeta_intervals() {
        let (lo, hi) = zeta_reference(2, 1).unwrap();
        assert!(f(&lo) <= 0.607927101854027 && 0.607927101854027 <= f(&hi));
        assert!(f(&hi) - f(&lo) <= 1e-6);
        let (lo, hi) = zeta_reference(3, 1).unwrap();
        assert!(f(&lo) <= 0.831907372580707 && 0.831907372580707 <= f(&hi));
        let (lo, hi) = zeta_reference(3, 2).unwrap();
        assert!(f(&lo) <= 0.505739038023987 && 0.505739038023987 <= f(&hi));
        assert!(f(&hi) - f(&lo) <= 1e-6);
        assert!(zeta_reference(2, 2).is_err());
    }
}
