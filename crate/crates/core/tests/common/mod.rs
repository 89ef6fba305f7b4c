//! Independent oracles for the integration tests. Nothing here calls the
//! geometry or LP code of the crate under test.

#![allow(dead_code)]

use infcount::model::FactorModel;
use infcount::ExponentVector;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn ev(v: &[i64]) -> ExponentVector {
    ExponentVector(v.to_vec())
}

/// Textbook phase-one simplex: is `{x >= 0 : A x = b}` nonempty?
/// Dense tableau, largest-coefficient entering rule with Bland fallback
/// after a stall, written separately from the crate's solver.
pub fn lp_feasible(a: &[Vec<Q>], b: &[Q]) -> bool {
    let m = a.len();
    if m == 0 {
        return true;
    }
    let n = a[0].len();
    let w = n + m + 1;
    let mut t: Vec<Vec<Q>> = (0..m)
        .map(|i| {
            let neg = b[i].is_negative();
            let mut r: Vec<Q> = a[i].iter().map(|v| if neg { -v.clone() } else { v.clone() }).collect();
            r.extend((0..m).map(|k| if k == i { Q::one() } else { Q::zero() }));
            r.push(if neg { -b[i].clone() } else { b[i].clone() });
            r
        })
        .collect();
    let mut obj = vec![Q::zero(); w];
    for r in &t {
        for j in 0..n {
            obj[j] -= &r[j];
        }
        obj[w - 1] -= &r[w - 1];
    }
    let mut basis: Vec<usize> = (n..n + m).collect();
    // Bland: first improving column
    while let Some(c) = (0..n + m).find(|&j| obj[j].is_negative()) {
        let mut best: Option<(usize, Q)> = None;
        for i in 0..m {
            if t[i][c].is_positive() {
                let ratio = &t[i][w - 1] / &t[i][c];
                let take = match &best {
                    None => true,
                    Some((k, r)) => ratio < *r || (ratio == *r && basis[i] < basis[*k]),
                };
                if take {
                    best = Some((i, ratio));
                }
            }
        }
        let (r, _) = best.expect("phase one is bounded");
        let p = t[r][c].clone();
        for v in t[r].iter_mut() {
            *v /= &p;
        }
        let prow = t[r].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for j in 0..w {
                    row[j] -= &f * &prow[j];
                }
            }
        }
        let f = obj[c].clone();
        for j in 0..w {
            obj[j] -= &f * &prow[j];
        }
        basis[r] = c;
    }
    obj[w - 1].is_zero()
}

/// `p` lies in the convex hull of `others`.
pub fn in_hull(p: &[i64], others: &[Vec<i64>]) -> bool {
    if others.is_empty() {
        return false;
    }
    let d = p.len();
    let mut a = vec![vec![Q::zero(); others.len()]; d + 1];
    for (j, o) in others.iter().enumerate() {
        for k in 0..d {
            a[k][j] = Q::from_integer(o[k].into());
        }
        a[d][j] = Q::one();
    }
    let mut b: Vec<Q> = p.iter().map(|&v| Q::from_integer(v.into())).collect();
    b.push(Q::one());
    lp_feasible(&a, &b)
}

/// Vertices of the hull of `points`, sorted and deduplicated.
pub fn hull_oracle(points: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    let mut out = Vec::new();
    for (i, p) in pts.iter().enumerate() {
        let others: Vec<Vec<i64>> = pts.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, x)| x.clone()).collect();
        if !in_hull(p, &others) {
            out.push(p.clone());
        }
    }
    out
}

/// Gift-wrapping hull in the plane (strict vertices), independent of the
/// crate's monotone chain.
pub fn planar_hull_oracle(points: &[[i64; 2]]) -> Vec<[i64; 2]> {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let cross = |o: [i64; 2], a: [i64; 2], b: [i64; 2]| (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    let dist = |a: [i64; 2], b: [i64; 2]| (a[0] - b[0]).pow(2) + (a[1] - b[1]).pow(2);
    let start = pts[0];
    let mut hull = vec![start];
    let mut cur = start;
    loop {
        let mut next = if pts[0] == cur { pts[1] } else { pts[0] };
        for &c in &pts {
            if c == cur {
                continue;
            }
            let x = cross(cur, next, c);
            // clockwise of the candidate, or farther along the same ray
            if x < 0 || (x == 0 && dist(cur, c) > dist(cur, next)) {
                next = c;
            }
        }
        if next == start {
            break;
        }
        hull.push(next);
        cur = next;
        if hull.len() > pts.len() {
            break;
        }
    }
    // all points collinear: keep the two extremes
    if hull.len() == 2 || pts.iter().all(|&c| cross(pts[0], pts[pts.len() - 1], c) == 0) {
        return vec![pts[0], pts[pts.len() - 1]];
    }
    hull.sort();
    hull
}

/// `p → q` is an edge of the convex polygon `poly`: both are vertices and
/// every other vertex lies strictly on one side of the line through them.
pub fn is_polygon_edge(poly: &[[i64; 2]], p: [i64; 2], q: [i64; 2]) -> bool {
    if !poly.contains(&p) || !poly.contains(&q) {
        return false;
    }
    let side = |r: [i64; 2]| (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0]);
    let others: Vec<i64> = poly.iter().filter(|&&r| r != p && r != q).map(|&r| side(r)).collect();
    others.iter().all(|&s| s > 0) || others.iter().all(|&s| s < 0)
}

/// Every hidden assignment with its monomial for observation `tau`, read
/// straight off the factor tables. `None` entries are structural zeros.
pub fn brute_monomials(model: &FactorModel, tau: &[usize]) -> Vec<(Vec<usize>, Vec<i64>)> {
    let l = model.hidden_alphabet().len();
    let q_count = model.hidden_count();
    let total = l.pow(q_count as u32);
    let mut out = Vec::new();
    'h: for code in 0..total {
        let mut h = vec![0; q_count];
        let mut c = code;
        for k in (0..q_count).rev() {
            h[k] = c % l;
            c /= l;
        }
        let mut acc = vec![0i64; model.d()];
        for f in model.factors() {
            let hv: Vec<usize> = f.scope_hidden().iter().map(|&i| h[i]).collect();
            let ov: Vec<usize> = f.scope_observed().iter().map(|&i| tau[i]).collect();
            match f.get(&hv, &ov) {
                Some(e) => {
                    for (a, x) in acc.iter_mut().zip(&e.0) {
                        *a += x;
                    }
                }
                None => continue 'h,
            }
        }
        out.push((h, acc));
    }
    out
}

/// All observations of a model, in lexicographic order.
pub fn all_observations(model: &FactorModel) -> Vec<Vec<usize>> {
    let l = model.observed_alphabet().len();
    let n = model.observed_count();
    (0..l.pow(n as u32))
        .map(|mut code| {
            let mut tau = vec![0; n];
            for k in (0..n).rev() {
                tau[k] = code % l;
                code /= l;
            }
            tau
        })
        .collect()
}

/// Every alignment of `s1` with `s2`, as (top, bottom) strings with `-` for
/// spaces.
pub fn all_alignments(s1: &[u8], s2: &[u8]) -> Vec<(String, String)> {
    fn rec(s1: &[u8], s2: &[u8], top: &mut String, bot: &mut String, out: &mut Vec<(String, String)>) {
        if s1.is_empty() && s2.is_empty() {
            out.push((top.clone(), bot.clone()));
            return;
        }
        if let (Some(&a), Some(&b)) = (s1.first(), s2.first()) {
            top.push(a as char);
            bot.push(b as char);
            rec(&s1[1..], &s2[1..], top, bot, out);
            top.pop();
            bot.pop();
        }
        if let Some(&a) = s1.first() {
            top.push(a as char);
            bot.push('-');
            rec(&s1[1..], s2, top, bot, out);
            top.pop();
            bot.pop();
        }
        if let Some(&b) = s2.first() {
            top.push('-');
            bot.push(b as char);
            rec(s1, &s2[1..], top, bot, out);
            top.pop();
            bot.pop();
        }
    }
    let mut out = Vec::new();
    rec(s1, s2, &mut String::new(), &mut String::new(), &mut out);
    out
}

/// `(x, y, z)` = (mismatches, spaces, matches) of an alignment.
pub fn alignment_counts(top: &str, bot: &str) -> [i64; 3] {
    let mut xyz = [0; 3];
    for (a, b) in top.bytes().zip(bot.bytes()) {
        if a == b'-' || b == b'-' {
            xyz[1] += 1;
        } else if a == b {
            xyz[2] += 1;
        } else {
            xyz[0] += 1;
        }
    }
    xyz
}

/// Pairs `(a1, a2)` with `a1, a2 >= 1`, `gcd = 1`, `a1 + a2 < n`, counted by
/// walking the Stern–Brocot tree.
pub fn farey_pair_count(n: i64) -> u64 {
    // a fraction a/b of the tree is coprime by construction
    fn walk(a: i64, b: i64, c: i64, d: i64, n: i64) -> u64 {
        let (p, q) = (a + c, b + d);
        if p + q >= n {
            return 0;
        }
        1 + walk(a, b, p, q, n) + walk(p, q, c, d, n)
    }
    // left/right subtrees between 0/1 and 1/0
    walk(0, 1, 1, 0, n)
}

/// Reference values `1/ζ(2)`, `1/ζ(3)`, `1/(ζ(2)ζ(3))` to 15 places,
/// computed with an arbitrary-precision library outside this project.
pub const INV_ZETA2: f64 = 0.607927101854027;
pub const INV_ZETA3: f64 = 0.831907372580707;
pub const INV_ZETA2_ZETA3: f64 = 0.505739038023987;

/// Small deterministic generator for test inputs (SplitMix64).
pub struct Mix(pub u64);

impl Mix {
    pub fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    pub fn range(&mut self, lo: i64, hi: i64) -> i64 {
        lo + (self.next() % (hi - lo + 1) as u64) as i64
    }
}
