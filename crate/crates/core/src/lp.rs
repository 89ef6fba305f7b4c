//! Dense two-phase simplex with Bland's rule, generic over [`Scalar`].
//!
//! Problems are taken in standard form: minimize `c·x` subject to `A x = b`,
//! `x ≥ 0`. Bland's smallest-index rule guarantees termination on degenerate
//! problems, which are the norm for the homogeneous feasibility systems built
//! by the geometry code.

use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub enum LpStatus<T> {
    Optimal { x: Vec<T>, value: T },
    Infeasible,
    Unbounded,
}

impl<T> LpStatus<T> {
    pub fn is_feasible(&self) -> bool {
        !matches!(self, LpStatus::Infeasible)
    }
}

/// Simplex tableau: `rows` constraint rows followed by one cost row; each row
/// has `cols` structural entries plus one artificial per constraint and the
/// right-hand side.
#[derive(Clone, Debug)]
pub struct Simplex<T> {
    rows: usize,
    cols: usize,
    tableau: Vec<Vec<T>>,
    basis: Vec<usize>,
    active: Vec<bool>,
}

impl<T: Scalar> Simplex<T> {
    fn new(a: &[Vec<T>], b: &[T]) -> Self {
        let rows = a.len();
        assert_eq!(rows, b.len(), "row count of A and b differ");
        let cols = a.first().map_or(0, Vec::len);
        let width = cols + rows + 1;
        let mut tableau = Vec::with_capacity(rows + 1);
        for (i, (row, rhs)) in a.iter().zip(b).enumerate() {
            assert_eq!(row.len(), cols, "ragged constraint matrix");
            let flip = rhs.is_strictly_negative();
            let mut r: Vec<T> = Vec::with_capacity(width);
            for v in row {
                r.push(if flip { -v.clone() } else { v.clone() });
            }
            for k in 0..rows {
                r.push(if k == i { T::one() } else { T::zero() });
            }
            r.push(if flip { -rhs.clone() } else { rhs.clone() });
            tableau.push(r);
        }
        // phase-one cost row: minimize the sum of artificials
        let mut cost = vec![T::zero(); width];
        for r in &tableau {
            for j in 0..cols {
                if !r[j].is_zero() {
                    cost[j] = cost[j].clone() - r[j].clone();
                }
            }
            cost[width - 1] = cost[width - 1].clone() - r[width - 1].clone();
        }
        tableau.push(cost);
        Self {
            rows,
            cols,
            tableau,
            basis: (cols..cols + rows).collect(),
            active: vec![true; rows],
        }
    }

    fn width(&self) -> usize {
        self.cols + self.rows + 1
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let width = self.width();
        let p = self.tableau[r][c].clone();
        if !p.is_one() {
            for j in 0..width {
                if !self.tableau[r][j].is_zero() {
                    self.tableau[r][j] = self.tableau[r][j].clone() / p.clone();
                }
            }
        }
        let pivot_row = std::mem::take(&mut self.tableau[r]);
        let support: Vec<usize> = (0..width).filter(|&j| !pivot_row[j].is_zero()).collect();
        for (i, row) in self.tableau.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for &j in &support {
                row[j] = row[j].clone() - f.clone() * pivot_row[j].clone();
            }
            if T::tolerance() > T::zero() {
                // keep the pivot column clean in floating point
                row[c] = T::zero();
            }
        }
        self.tableau[r] = pivot_row;
        self.basis[r] = c;
    }

    /// Runs Bland pivots on the current cost row; `limit` bounds the entering
    /// column index. Returns `false` when unbounded.
    fn run(&mut self, limit: usize) -> bool {
        let cost = self.rows;
        let rhs = self.width() - 1;
        loop {
            let entering = (0..limit).find(|&j| self.tableau[cost][j].is_strictly_negative());
            let Some(c) = entering else { return true };
            let mut leave: Option<(usize, T)> = None;
            for i in 0..self.rows {
                if !self.active[i] || !self.tableau[i][c].is_strictly_positive() {
                    continue;
                }
                let ratio = self.tableau[i][rhs].clone() / self.tableau[i][c].clone();
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((best, best_ratio)) => {
                        if ratio < best_ratio
                            || (ratio == best_ratio && self.basis[i] < self.basis[best])
                        {
                            Some((i, ratio))
                        } else {
                            Some((best, best_ratio))
                        }
                    }
                };
            }
            match leave {
                Some((r, _)) => self.pivot(r, c),
                None => return false,
            }
        }
    }

    fn phase_one(&mut self) -> bool {
        let limit = self.cols;
        // phase one is bounded below by zero
        let bounded = self.run(limit);
        debug_assert!(bounded);
        let infeasibility = -self.tableau[self.rows][self.width() - 1].clone();
        !infeasibility.is_strictly_positive()
    }

    fn drive_out_artificials(&mut self) {
        for i in 0..self.rows {
            if !self.active[i] || self.basis[i] < self.cols {
                continue;
            }
            match (0..self.cols).find(|&j| !self.tableau[i][j].is_negligible()) {
                Some(j) => self.pivot(i, j),
                None => self.active[i] = false,
            }
        }
    }

    /// Decides feasibility of `A x = b, x ≥ 0`.
    pub fn is_feasible(a: &[Vec<T>], b: &[T]) -> bool {
        if a.is_empty() {
            return true;
        }
        Self::new(a, b).phase_one()
    }

    /// Minimizes `c·x` subject to `A x = b, x ≥ 0`.
    pub fn minimize(a: &[Vec<T>], b: &[T], c: &[T]) -> LpStatus<T> {
        let cols = a.first().map_or(c.len(), Vec::len);
        assert_eq!(cols, c.len(), "cost vector length differs from column count");
        if a.is_empty() {
            return if c.iter().any(|v| v.is_strictly_negative()) {
                LpStatus::Unbounded
            } else {
                LpStatus::Optimal { x: vec![T::zero(); cols], value: T::zero() }
            };
        }
        let mut s = Self::new(a, b);
        if !s.phase_one() {
            return LpStatus::Infeasible;
        }
        s.drive_out_artificials();
        let width = s.width();
        let rhs = width - 1;
        let mut cost = vec![T::zero(); width];
        cost[..cols].clone_from_slice(c);
        for i in 0..s.rows {
            if !s.active[i] {
                continue;
            }
            let cb = c[s.basis[i]].clone();
            if cb.is_zero() {
                continue;
            }
            for j in 0..width {
                if !s.tableau[i][j].is_zero() {
                    cost[j] = cost[j].clone() - cb.clone() * s.tableau[i][j].clone();
                }
            }
        }
        s.tableau[s.rows] = cost;
        if !s.run(cols) {
            return LpStatus::Unbounded;
        }
        let mut x = vec![T::zero(); cols];
        for i in 0..s.rows {
            if s.active[i] && s.basis[i] < cols {
                x[s.basis[i]] = s.tableau[i][rhs].clone();
            }
        }
        let value = -s.tableau[s.rows][rhs].clone();
        LpStatus::Optimal { x, value }
    }

    /// Maximizes `c·x` subject to `A x = b, x ≥ 0`.
    pub fn maximize(a: &[Vec<T>], b: &[T], c: &[T]) -> LpStatus<T> {
        let neg: Vec<T> = c.iter().map(|v| -v.clone()).collect();
        match Self::minimize(a, b, &neg) {
            LpStatus::Optimal { x, value } => LpStatus::Optimal { x, value: -value },
            other => other,
        }
    }
}

/// Decides whether some `w` satisfies `w·e = 0` for every `e` in `equal` and
/// `w·s > 0` for every `s` in `strict`.
///
/// Solved through the alternative system: no such `w` exists exactly when the
/// origin lies in `conv(strict) + span(equal)`.
pub fn open_cone_nonempty<T: Scalar>(equal: &[&[i64]], strict: &[&[i64]]) -> bool {
    if strict.is_empty() {
        return true;
    }
    let dim = strict[0].len();
    let cols = strict.len() + 2 * equal.len();
    let mut a = vec![vec![T::zero(); cols]; dim + 1];
    for (j, s) in strict.iter().enumerate() {
        debug_assert_eq!(s.len(), dim);
        for (k, &v) in s.iter().enumerate() {
            if v != 0 {
                a[k][j] = T::from_int(v);
            }
        }
        a[dim][j] = T::one();
    }
    for (e_idx, e) in equal.iter().enumerate() {
        debug_assert_eq!(e.len(), dim);
        let plus = strict.len() + 2 * e_idx;
        for (k, &v) in e.iter().enumerate() {
            if v != 0 {
                a[k][plus] = T::from_int(v);
                a[k][plus + 1] = T::from_int(-v);
            }
        }
    }
    // zero rows carry no information and only slow the pivots down
    let mut b = vec![T::zero(); dim + 1];
    b[dim] = T::one();
    let keep: Vec<usize> = (0..=dim).filter(|&k| a[k].iter().any(|v| !v.is_zero())).collect();
    let a: Vec<Vec<T>> = keep.iter().map(|&k| a[k].clone()).collect();
    let b: Vec<T> = keep.iter().map(|&k| b[k].clone()).collect();
    if T::tolerance().is_zero() {
        // exact scalar: the integer tableau gives the same answer, faster
        let ai: Option<Vec<Vec<i64>>> = a.iter().map(|r| r.iter().map(T::to_i64_exact).collect()).collect();
        let bi: Option<Vec<i64>> = b.iter().map(T::to_i64_exact).collect();
        if let (Some(ai), Some(bi)) = (ai, bi) {
            if let Some(feasible) = integer_feasible(&ai, &bi) {
                return !feasible;
            }
        }
    }
    !Simplex::<T>::is_feasible(&a, &b)
}

/// Phase-one feasibility of `{x ≥ 0 : A x = b}` on an integer-preserving
/// tableau: every entry is the numerator over the current pivot product `D`,
/// and updates divide exactly by the previous pivot. Returns `None` when an
/// intermediate overflows `i128`.
pub(crate) fn integer_feasible(a: &[Vec<i64>], b: &[i64]) -> Option<bool> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let width = n + m + 1;
    let rhs = width - 1;
    let mut t: Vec<Vec<i128>> = Vec::with_capacity(m + 1);
    for (i, (row, &bi)) in a.iter().zip(b).enumerate() {
        let s: i128 = if bi < 0 { -1 } else { 1 };
        let mut r = vec![0i128; width];
        for (j, &v) in row.iter().enumerate() {
            r[j] = s * v as i128;
        }
        r[n + i] = 1;
        r[rhs] = s * bi as i128;
        t.push(r);
    }
    let mut cost = vec![0i128; width];
    for r in &t {
        for j in 0..n {
            cost[j] -= r[j];
        }
        cost[rhs] -= r[rhs];
    }
    t.push(cost);
    let mut basis: Vec<usize> = (n..n + m).collect();
    let mut d: i128 = 1;
    while let Some(c) = (0..n + m).find(|&j| t[m][j] < 0 && !basis.contains(&j)) {
        let mut leave: Option<usize> = None;
        for i in 0..m {
            if t[i][c] <= 0 {
                continue;
            }
            leave = match leave {
                None => Some(i),
                Some(k) => {
                    // compare t[i][rhs]/t[i][c] with t[k][rhs]/t[k][c]
                    let lhs = t[i][rhs].checked_mul(t[k][c])?;
                    let rhs_v = t[k][rhs].checked_mul(t[i][c])?;
                    if lhs < rhs_v || (lhs == rhs_v && basis[i] < basis[k]) {
                        Some(i)
                    } else {
                        Some(k)
                    }
                }
            };
        }
        // phase one is bounded below by zero
        let r = leave?;
        let p = t[r][c];
        for i in 0..=m {
            if i == r {
                continue;
            }
            let f = t[i][c];
            for j in 0..width {
                let v = t[i][j].checked_mul(p)?.checked_sub(f.checked_mul(t[r][j])?)?;
                debug_assert_eq!(v % d, 0);
                t[i][j] = v / d;
            }
        }
        d = p;
        basis[r] = c;
    }
    Some(t[m][rhs] == 0)
}
