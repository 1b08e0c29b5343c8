//! Integer matrix algebra: Hermite and Smith normal forms with unimodular
//! transforms, kernels, and exact linear solving.
//!
//! Generic over the integer type so the same code serves fixed-width
//! finite-group computations (`i128`) and unbounded Diophantine lattices
//! (`BigInt`). All forms are canonical, which is what makes subgroup
//! equality structural elsewhere in the crate.

use alloc::vec;
use alloc::vec::Vec;
use num_integer::Integer;
use num_traits::Signed;

/// Minimal bound set for exact integer elimination.
pub trait Int: Integer + Signed + Clone + core::fmt::Debug {}
impl<T: Integer + Signed + Clone + core::fmt::Debug> Int for T {}

pub type Mat<T> = Vec<Vec<T>>;

pub fn identity<T: Int>(n: usize) -> Mat<T> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect())
        .collect()
}

pub fn mat_mul<T: Int>(a: &Mat<T>, b: &Mat<T>) -> Mat<T> {
    let cols = if b.is_empty() { 0 } else { b[0].len() };
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut acc = T::zero();
                    for (k, av) in row.iter().enumerate() {
                        if !av.is_zero() && !b[k][j].is_zero() {
                            acc = acc + av.clone() * b[k][j].clone();
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec<T: Int>(a: &Mat<T>, x: &[T]) -> Vec<T> {
    a.iter()
        .map(|row| {
            let mut acc = T::zero();
            for (k, av) in row.iter().enumerate() {
                if !av.is_zero() && !x[k].is_zero() {
                    acc = acc + av.clone() * x[k].clone();
                }
            }
            acc
        })
        .collect()
}

/// Determinant by fraction-free Bareiss elimination. Square input.
pub fn det<T: Int>(m: &Mat<T>) -> T {
    let n = m.len();
    if n == 0 {
        return T::one();
    }
    let mut a: Mat<T> = m.clone();
    let mut sign = T::one();
    let mut prev = T::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return T::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[k][k].clone() * a[i][j].clone() - a[i][k].clone() * a[k][j].clone();
                a[i][j] = num / prev.clone();
            }
            a[i][k] = T::zero();
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

/// Canonical row Hermite normal form of the lattice spanned by `rows` in
/// Z^ncols: echelon rows with positive pivots, entries above each pivot
/// reduced into `[0, pivot)`. Zero rows are dropped, so two generating sets
/// span the same lattice iff their forms are equal.
pub fn hnf<T: Int>(mut rows: Mat<T>, ncols: usize) -> Mat<T> {
    let mut r = 0usize;
    for col in 0..ncols {
        loop {
            let mut best: Option<usize> = None;
            for i in r..rows.len() {
                if !rows[i][col].is_zero()
                    && best.map_or(true, |b| rows[i][col].abs() < rows[b][col].abs())
                {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            rows.swap(r, b);
            let mut others = false;
            for i in r + 1..rows.len() {
                if !rows[i][col].is_zero() {
                    let q = rows[i][col].div_floor(&rows[r][col]);
                    for j in 0..ncols {
                        let s = rows[r][j].clone() * q.clone();
                        rows[i][j] = rows[i][j].clone() - s;
                    }
                    if !rows[i][col].is_zero() {
                        others = true;
                    }
                }
            }
            if !others {
                if rows[r][col].is_negative() {
                    for v in rows[r].iter_mut() {
                        *v = -v.clone();
                    }
                }
                // reduce the entries above the new pivot
                for i in 0..r {
                    if !rows[i][col].is_zero() {
                        let q = rows[i][col].div_floor(&rows[r][col]);
                        for j in 0..ncols {
                            let s = rows[r][j].clone() * q.clone();
                            rows[i][j] = rows[i][j].clone() - s;
                        }
                    }
                }
                r += 1;
                break;
            }
        }
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    rows
}

/// Smith normal form `U * M * V = diag(d)` with unimodular transforms and
/// their inverses, `d_1 | d_2 | ...`, all `d_i >= 0`.
#[derive(Debug, Clone)]
pub struct Snf<T> {
    pub u: Mat<T>,
    pub u_inv: Mat<T>,
    pub v: Mat<T>,
    pub v_inv: Mat<T>,
    pub diag: Vec<T>,
    pub rows: usize,
    pub cols: usize,
}

impl<T: Int> Snf<T> {
    /// Number of nonzero diagonal entries.
    pub fn rank(&self) -> usize {
        self.diag.iter().filter(|d| !d.is_zero()).count()
    }
}

struct Work<T> {
    s: Mat<T>,
    u: Mat<T>,
    u_inv: Mat<T>,
    v: Mat<T>,
    v_inv: Mat<T>,
    m: usize,
    n: usize,
}

impl<T: Int> Work<T> {
    fn row_swap(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        self.s.swap(a, b);
        self.u.swap(a, b);
        for row in self.u_inv.iter_mut() {
            row.swap(a, b);
        }
    }

    fn col_swap(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for row in self.s.iter_mut() {
            row.swap(a, b);
        }
        for row in self.v.iter_mut() {
            row.swap(a, b);
        }
        self.v_inv.swap(a, b);
    }

    /// row_i -= q * row_t  (on S and U; inverse op on columns of U_inv)
    fn row_sub(&mut self, i: usize, t: usize, q: &T) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.n {
            let s = self.s[t][j].clone() * q.clone();
            self.s[i][j] = self.s[i][j].clone() - s;
        }
        for j in 0..self.m {
            let s = self.u[t][j].clone() * q.clone();
            self.u[i][j] = self.u[i][j].clone() - s;
        }
        for row in self.u_inv.iter_mut() {
            let s = row[i].clone() * q.clone();
            row[t] = row[t].clone() + s;
        }
    }

    /// col_j -= q * col_t  (on S and V; inverse op on rows of V_inv)
    fn col_sub(&mut self, j: usize, t: usize, q: &T) {
        if q.is_zero() {
            return;
        }
        for row in self.s.iter_mut() {
            let s = row[t].clone() * q.clone();
            row[j] = row[j].clone() - s;
        }
        for row in self.v.iter_mut() {
            let s = row[t].clone() * q.clone();
            row[j] = row[j].clone() - s;
        }
        for k in 0..self.n {
            let s = self.v_inv[j][k].clone() * q.clone();
            self.v_inv[t][k] = self.v_inv[t][k].clone() + s;
        }
    }

    fn row_negate(&mut self, i: usize) {
        for v in self.s[i].iter_mut() {
            *v = -v.clone();
        }
        for v in self.u[i].iter_mut() {
            *v = -v.clone();
        }
        for row in self.u_inv.iter_mut() {
            row[i] = -row[i].clone();
        }
    }
}

pub fn snf<T: Int>(m: &Mat<T>) -> Snf<T> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut w = Work {
        s: m.clone(),
        u: identity(rows),
        u_inv: identity(rows),
        v: identity(cols),
        v_inv: identity(cols),
        m: rows,
        n: cols,
    };
    let bound = rows.min(cols);
    let mut t = 0usize;
    while t < bound {
        // position a minimal nonzero pivot at (t, t)
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !w.s[i][j].is_zero()
                    && best.map_or(true, |(bi, bj)| w.s[i][j].abs() < w.s[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        w.row_swap(t, bi);
        w.col_swap(t, bj);
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if !w.s[i][t].is_zero() {
                    let q = w.s[i][t].div_floor(&w.s[t][t]);
                    w.row_sub(i, t, &q);
                    if !w.s[i][t].is_zero() {
                        w.row_swap(t, i); // smaller remainder becomes pivot
                        dirty = true;
                    }
                }
            }
            for j in t + 1..cols {
                if !w.s[t][j].is_zero() {
                    let q = w.s[t][j].div_floor(&w.s[t][t]);
                    w.col_sub(j, t, &q);
                    if !w.s[t][j].is_zero() {
                        w.col_swap(t, j);
                        dirty = true;
                    }
                }
            }
            if !dirty {
                break;
            }
        }
        // divisibility: pivot must divide every remaining entry
        let mut offender = None;
        'scan: for i in t + 1..rows {
            for j in t + 1..cols {
                if !(w.s[i][j].clone() % w.s[t][t].clone()).is_zero() {
                    offender = Some(i);
                    break 'scan;
                }
            }
        }
        if let Some(i) = offender {
            let q = -T::one();
            w.row_sub(t, i, &q); // row_t += row_i, then redo elimination at t
            continue;
        }
        if w.s[t][t].is_negative() {
            w.row_negate(t);
        }
        t += 1;
    }
    let diag = (0..bound).map(|i| w.s[i][i].clone()).collect();
    Snf { u: w.u, u_inv: w.u_inv, v: w.v, v_inv: w.v_inv, diag, rows, cols }
}

/// Basis of the integer kernel `{x : M x = 0}`, as vectors of length
/// `cols`. Columns of V whose Smith diagonal entry vanishes.
pub fn kernel_basis<T: Int>(s: &Snf<T>) -> Vec<Vec<T>> {
    let mut out = Vec::new();
    for j in 0..s.cols {
        let dz = j >= s.diag.len() || s.diag[j].is_zero();
        if dz {
            out.push(s.v.iter().map(|row| row[j].clone()).collect());
        }
    }
    out
}

pub fn kernel<T: Int>(m: &Mat<T>) -> Vec<Vec<T>> {
    kernel_basis(&snf(m))
}

/// One integer solution of `M x = b`, if any.
pub fn solve<T: Int>(s: &Snf<T>, b: &[T]) -> Option<Vec<T>> {
    let y = mat_vec(&s.u, b);
    let mut z = vec![T::zero(); s.cols];
    for (i, yi) in y.iter().enumerate() {
        let di = if i < s.diag.len() { s.diag[i].clone() } else { T::zero() };
        if di.is_zero() {
            if !yi.is_zero() {
                return None;
            }
        } else {
            let (q, r) = yi.div_rem(&di);
            if !r.is_zero() {
                return None;
            }
            z[i] = q;
        }
    }
    Some(mat_vec(&s.v, &z))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_traits::Zero;

    fn big(m: &[&[i64]]) -> Mat<BigInt> {
        m.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect()
    }

    fn check_snf(m: &Mat<BigInt>) {
        let s = snf(m);
        let umv = mat_mul(&mat_mul(&s.u, m), &s.v);
        for i in 0..s.rows {
            for j in 0..s.cols {
                let expect = if i == j && i < s.diag.len() { s.diag[i].clone() } else { BigInt::from(0) };
                assert_eq!(umv[i][j], expect, "U M V not diagonal at ({i},{j})");
            }
        }
        assert_eq!(mat_mul(&s.u, &s.u_inv), identity(s.rows));
        assert_eq!(mat_mul(&s.v, &s.v_inv), identity(s.cols));
        assert_eq!(det(&s.u).abs(), BigInt::from(1));
        assert_eq!(det(&s.v).abs(), BigInt::from(1));
        for w in s.diag.windows(2) {
            if !w[0].is_zero() {
                assert!((w[1].clone() % w[0].clone()).is_zero(), "diag not a divisibility chain");
            } else {
                assert!(w[1].is_zero(), "zero before nonzero in diag");
            }
        }
    }

    #[test]
    fn snf_known_form() {
        let m = big(&[&[2, 4], &[6, 8]]);
        let s = snf(&m);
        assert_eq!(s.diag, vec![BigInt::from(2), BigInt::from(4)]);
        check_snf(&m);
    }

    #[test]
    fn snf_rank_deficient() {
        let m = big(&[&[2, 4], &[4, 8]]);
        let s = snf(&m);
        assert_eq!(s.diag, vec![BigInt::from(2), BigInt::from(0)]);
        check_snf(&m);
    }

    #[test]
    fn snf_misc_shapes() {
        check_snf(&big(&[&[1, 2, 3], &[4, 5, 6]]));
        check_snf(&big(&[&[0, 0], &[0, 0]]));
        check_snf(&big(&[&[5]]));
        check_snf(&big(&[&[6, 10], &[15, 4], &[9, -3]]));
        check_snf(&big(&[&[-7, 3, 11, 2]]));
    }

    #[test]
    fn hnf_canonical_and_span_invariant() {
        // two generating sets of the same lattice
        let a = hnf(big(&[&[2, 1], &[0, 3]]), 2);
        let b = hnf(big(&[&[2, 4], &[2, 1], &[4, 2]]), 2);
        assert_eq!(a, b);
        // pivots positive, above-entries reduced
        for (i, row) in a.iter().enumerate() {
            let p = row.iter().position(|v| !v.is_zero()).unwrap();
            assert!(row[p] > BigInt::from(0));
            for upper in a.iter().take(i) {
                assert!(upper[p] >= BigInt::from(0) && upper[p] < row[p]);
            }
        }
    }

    #[test]
    fn kernel_and_solve() {
        let m = big(&[&[2, 4, 6], &[1, 2, 3]]);
        let k = kernel(&m);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(mat_vec(&m, v).iter().all(|x| x.is_zero()));
        }
        let s = snf(&m);
        let b = vec![BigInt::from(10), BigInt::from(5)];
        let x = solve(&s, &b).expect("solvable");
        assert_eq!(mat_vec(&m, &x), b);
        let b2 = vec![BigInt::from(1), BigInt::from(1)];
        assert!(solve(&s, &b2).is_none());
    }

    #[test]
    fn det_matches_diag_product() {
        let m = big(&[&[3, 1, 0], &[1, 4, 1], &[0, 1, 5]]);
        let s = snf(&m);
        let prod = s.diag.iter().fold(BigInt::from(1), |a, b| a * b);
        assert_eq!(det(&m).abs(), prod);
    }
}
