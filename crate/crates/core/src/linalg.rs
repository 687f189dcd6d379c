//! Exact integer linear algebra on sparse matrices: rank over ℚ and Smith invariants over ℤ.
//!
//! Both routes first try machine integers with overflow checks and fall back to
//! arbitrary precision when an intermediate value does not fit.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{CheckedMul, CheckedSub, One, Signed, Zero};

/// A sparse integer matrix stored by columns.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: usize,
    /// `columns[j]` holds `(row, value)` pairs sorted by row, without zeros.
    pub columns: Vec<Vec<(usize, i64)>>,
}

impl SparseMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            columns: vec![Vec::new(); cols],
        }
    }

    pub fn get(&self, row: usize, col: usize) -> i64 {
        self.columns[col]
            .iter()
            .find(|&&(r, _)| r == row)
            .map_or(0, |&(_, v)| v)
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut out = vec![vec![0; self.cols]; self.rows];
        for (j, col) in self.columns.iter().enumerate() {
            for &(i, v) in col {
                out[i][j] = v;
            }
        }
        out
    }

    /// Product `self * other`, used for `∂∘∂ = 0` checks.
    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = SparseMatrix::zero(self.rows, other.cols);
        for (j, col) in other.columns.iter().enumerate() {
            let mut acc = vec![0i64; self.rows];
            for &(k, b) in col {
                for &(i, a) in &self.columns[k] {
                    acc[i] += a * b;
                }
            }
            out.columns[j] = acc.into_iter().enumerate().filter(|&(_, v)| v != 0).collect();
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }
}

trait Entry: Clone + Integer + Signed + CheckedMul + CheckedSub + From<i64> {}
impl Entry for i64 {}
impl Entry for BigInt {}

type SparseVec<T> = Vec<(usize, T)>;

/// `a*x - b*y`, or `None` on overflow.
fn combine<T: Entry>(a: &T, x: &SparseVec<T>, b: &T, y: &SparseVec<T>) -> Option<SparseVec<T>> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take_x = j == y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i == x.len() || (j < y.len() && y[j].0 < x[i].0);
        let (idx, val) = if take_x {
            let v = a.checked_mul(&x[i].1)?;
            i += 1;
            (x[i - 1].0, v)
        } else if take_y {
            let v = T::zero().checked_sub(&b.checked_mul(&y[j].1)?)?;
            j += 1;
            (y[j - 1].0, v)
        } else {
            let v = a.checked_mul(&x[i].1)?.checked_sub(&b.checked_mul(&y[j].1)?)?;
            i += 1;
            j += 1;
            (x[i - 1].0, v)
        };
        if !val.is_zero() {
            out.push((idx, val));
        }
    }
    Some(out)
}

fn normalise_content<T: Entry>(v: &mut SparseVec<T>) {
    let g = v.iter().fold(T::zero(), |g, (_, x)| g.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for (_, x) in v.iter_mut() {
            *x = x.div_floor(&g);
        }
    }
}

/// Fraction-free incremental echelon form; each vector is reduced against the
/// pivots by cross-multiplication and then divided by its content.
fn echelon_rank<T: Entry>(columns: &[Vec<(usize, i64)>], rows: usize) -> Option<usize> {
    let mut pivots: Vec<Option<SparseVec<T>>> = vec![None; rows];
    let mut rank = 0;
    for col in columns {
        let mut v: SparseVec<T> = col.iter().map(|&(i, x)| (i, T::from(x))).collect();
        while let Some(&(lead, _)) = v.first() {
            match &pivots[lead] {
                Some(p) => {
                    let a = p[0].1.clone();
                    let b = v[0].1.clone();
                    let g = a.gcd(&b);
                    v = combine(&a.div_floor(&g), &v, &b.div_floor(&g), p)?;
                    normalise_content(&mut v);
                }
                None => {
                    pivots[lead] = Some(v);
                    rank += 1;
                    break;
                }
            }
        }
    }
    Some(rank)
}

/// Rank over ℚ.
pub fn rank_rational(m: &SparseMatrix) -> usize {
    echelon_rank::<i64>(&m.columns, m.rows)
        .unwrap_or_else(|| echelon_rank::<BigInt>(&m.columns, m.rows).expect("no overflow"))
}

/// Nonzero diagonal of the Smith normal form, in divisibility order (all positive).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub invariant_factors: Vec<BigInt>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }

    /// Invariant factors greater than one.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.invariant_factors.iter().filter(|d| !d.is_one()).cloned().collect()
    }
}

/// Eliminates unit pivots with sparse row operations. Each unit pivot contributes an
/// invariant factor 1 and deletes its row and column. Returns the number of unit
/// pivots and the leftover rows, or `None` on overflow.
fn unit_elimination<T: Entry>(m: &SparseMatrix) -> Option<(usize, Vec<SparseVec<T>>)> {
    let mut rows: Vec<SparseVec<T>> = vec![Vec::new(); m.rows];
    for (j, col) in m.columns.iter().enumerate() {
        for &(i, x) in col {
            rows[i].push((j, T::from(x)));
        }
    }
    let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); m.cols];
    for (i, row) in rows.iter().enumerate() {
        for &(j, _) in row {
            col_rows[j].insert(i);
        }
    }
    let mut units = 0;
    loop {
        let mut progress = false;
        for c in 0..m.cols {
            let pivot_row = col_rows[c]
                .iter()
                .copied()
                .filter(|&r| {
                    rows[r]
                        .iter()
                        .find(|&&(j, _)| j == c)
                        .is_some_and(|(_, x)| x.abs().is_one())
                })
                .min_by_key(|&r| (rows[r].len(), r));
            let Some(r) = pivot_row else { continue };
            let pivot = std::mem::take(&mut rows[r]);
            for &(j, _) in &pivot {
                col_rows[j].remove(&r);
            }
            let unit = pivot.iter().find(|&&(j, _)| j == c).unwrap().1.clone();
            let others: Vec<usize> = col_rows[c].iter().copied().collect();
            for i in others {
                let a = rows[i].iter().find(|&&(j, _)| j == c).unwrap().1.clone();
                // row_i <- row_i - (a * unit) * pivot, since unit⁻¹ = unit
                let factor = a.checked_mul(&unit)?;
                let new_row = combine(&T::one(), &rows[i], &factor, &pivot)?;
                for &(j, _) in &rows[i] {
                    col_rows[j].remove(&i);
                }
                for &(j, _) in &new_row {
                    col_rows[j].insert(i);
                }
                rows[i] = new_row;
            }
            units += 1;
            progress = true;
        }
        if !progress {
            break;
        }
    }
    rows.retain(|r| !r.is_empty());
    Some((units, rows))
}

/// Dense Smith normal form over ℤ, pivoting on the smallest nonzero magnitude.
pub fn smith_dense(mut a: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        let Some((pi, pj)) = smallest_entry(&a, t) else {
            break;
        };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if !a[i][t].is_zero() {
                    let q = a[i][t].div_floor(&a[t][t]);
                    let (top, rest) = a.split_at_mut(i);
                    for (x, y) in rest[0][t..cols].iter_mut().zip(&top[t][t..cols]) {
                        *x -= &q * y;
                    }
                    dirty |= !a[i][t].is_zero();
                }
            }
            for j in t + 1..cols {
                if !a[t][j].is_zero() {
                    let q = a[t][j].div_floor(&a[t][t]);
                    for row in a.iter_mut().skip(t) {
                        let d = &q * &row[t];
                        row[j] -= d;
                    }
                    dirty |= !a[t][j].is_zero();
                }
            }
            if dirty {
                // a smaller remainder appeared in the pivot row or column
                let (mut bi, mut bj) = (t, t);
                for i in t..rows {
                    if !a[i][t].is_zero() && a[i][t].abs() < a[bi][bj].abs() {
                        (bi, bj) = (i, t);
                    }
                }
                for j in t..cols {
                    if !a[t][j].is_zero() && a[t][j].abs() < a[bi][bj].abs() {
                        (bi, bj) = (t, j);
                    }
                }
                a.swap(t, bi);
                for row in a.iter_mut() {
                    row.swap(t, bj);
                }
                continue;
            }
            let bad =
                (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a[i][j].is_zero() && !a[i][j].is_multiple_of(&a[t][t])));
            match bad {
                Some(i) => {
                    let (top, rest) = a.split_at_mut(i);
                    for (x, y) in top[t][t..cols].iter_mut().zip(&rest[0][t..cols]) {
                        *x += y;
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].abs());
    }
    diag
}

fn smallest_entry(a: &[Vec<BigInt>], t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (i, row) in a.iter().enumerate().skip(t) {
        for (j, x) in row.iter().enumerate().skip(t) {
            if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < a[bi][bj].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

fn finish_smith<T: Entry + Into<BigInt>>(units: usize, rows: Vec<SparseVec<T>>) -> SmithForm {
    let used: BTreeSet<usize> = rows.iter().flat_map(|r| r.iter().map(|&(j, _)| j)).collect();
    let pos: std::collections::HashMap<usize, usize> = used.iter().enumerate().map(|(k, &j)| (j, k)).collect();
    let dense: Vec<Vec<BigInt>> = rows
        .into_iter()
        .map(|r| {
            let mut d = vec![BigInt::zero(); used.len()];
            for (j, x) in r {
                d[pos[&j]] = x.into();
            }
            d
        })
        .collect();
    let mut factors = vec![BigInt::one(); units];
    let mut rest = smith_dense(dense);
    rest.sort();
    factors.extend(rest);
    SmithForm {
        invariant_factors: factors,
    }
}

/// Smith invariants of an integer matrix.
pub fn smith_form(m: &SparseMatrix) -> SmithForm {
    match unit_elimination::<i64>(m) {
        Some((units, rows)) => finish_smith(units, rows),
        None => {
            let (units, rows) = unit_elimination::<BigInt>(m).expect("no overflow");
            finish_smith(units, rows)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn from_dense(d: &[Vec<i64>]) -> SparseMatrix {
        let rows = d.len();
        let cols = d.first().map_or(0, Vec::len);
        let mut m = SparseMatrix::zero(rows, cols);
        for (i, row) in d.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                if x != 0 {
                    m.columns[j].push((i, x));
                }
            }
        }
        m
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn diagonal_torsion() {
        let m = from_dense(&[vec![2, 0], vec![0, 3]]);
        assert_eq!(smith_form(&m).invariant_factors, ints(&[1, 6]));
        assert_eq!(rank_rational(&m), 2);
    }

    #[test]
    fn non_unit_block() {
        let m = from_dense(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        assert_eq!(smith_form(&m).invariant_factors, ints(&[2, 6, 12]));
        assert_eq!(rank_rational(&m), 3);
    }

    #[test]
    fn rank_deficient() {
        let m = from_dense(&[vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 1]]);
        assert_eq!(rank_rational(&m), 2);
        assert_eq!(smith_form(&m).rank(), 2);
    }

    #[test]
    fn overflow_falls_back_to_bigint() {
        let big = i64::MAX / 3;
        let m = from_dense(&[vec![big, big - 1], vec![big - 7, big + 5]]);
        assert_eq!(rank_rational(&m), 2);
        let s = smith_form(&m);
        assert_eq!(s.rank(), 2);
        let det = BigInt::from(big) * BigInt::from(big + 5) - BigInt::from(big - 1) * BigInt::from(big - 7);
        let prod: BigInt = s.invariant_factors.iter().product();
        assert_eq!(prod, det.abs());
    }

    #[test]
    fn product_and_zero_check() {
        let a = from_dense(&[vec![1, 1]]);
        let b = from_dense(&[vec![1], vec![-1]]);
        assert!(a.mul(&b).is_zero());
        assert!(!b.mul(&a).is_zero());
    }
}
