//! Exact rank of sparse matrices by Gaussian elimination with a
//! Markowitz-style pivot choice.
//!
//! At each step the shortest remaining row is taken as pivot row and, within
//! it, the column touched by the fewest other rows. Rows are kept sorted by
//! column; a column-to-rows index is maintained lazily (stale entries are
//! skipped when the row no longer contains the column).

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{CheckedMul, CheckedSub, Zero};
use serde::{Deserialize, Serialize};

use super::Field;

/// Sparse integer matrix stored by rows; each row is sorted by column and
/// contains no zero entries.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparseMatrix {
    pub cols: usize,
    pub rows: Vec<Vec<(u32, i64)>>,
}

impl SparseMatrix {
    pub fn new(cols: usize) -> Self {
        SparseMatrix { cols, rows: Vec::new() }
    }

    /// Appends a row given as arbitrary `(column, value)` pairs; duplicate
    /// columns are summed and zeros dropped.
    pub fn push_row(&mut self, mut entries: Vec<(u32, i64)>) {
        entries.sort_unstable_by_key(|e| e.0);
        let mut row: Vec<(u32, i64)> = Vec::with_capacity(entries.len());
        for (c, v) in entries {
            debug_assert!((c as usize) < self.cols);
            match row.last_mut() {
                Some(last) if last.0 == c => last.1 += v,
                _ => row.push((c, v)),
            }
        }
        row.retain(|e| e.1 != 0);
        self.rows.push(row);
    }

    pub fn from_dense(dense: &[Vec<i64>]) -> Self {
        let cols = dense.first().map_or(0, Vec::len);
        let mut m = SparseMatrix::new(cols);
        for r in dense {
            m.push_row(r.iter().enumerate().map(|(c, &v)| (c as u32, v)).collect());
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut t = vec![Vec::new(); self.cols];
        for (r, row) in self.rows.iter().enumerate() {
            for &(c, v) in row {
                t[c as usize].push((r as u32, v));
            }
        }
        SparseMatrix {
            cols: self.rows.len(),
            rows: t,
        }
    }

    /// `(row, col, value)` triplets in row-major order.
    pub fn triplets(&self) -> Vec<(u32, u32, i64)> {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |&(c, v)| (r as u32, c, v)))
            .collect()
    }

    pub fn from_triplets(nrows: usize, cols: usize, triplets: &[(u32, u32, i64)]) -> Option<Self> {
        let mut rows = vec![Vec::new(); nrows];
        for &(r, c, v) in triplets {
            if r as usize >= nrows || c as usize >= cols {
                return None;
            }
            rows[r as usize].push((c, v));
        }
        let mut m = SparseMatrix::new(cols);
        for r in rows {
            m.push_row(r);
        }
        Some(m)
    }
}

/// Exact rank of an integer matrix over the given field.
pub fn matrix_rank(m: &SparseMatrix, field: Field) -> usize {
    match field {
        Field::Prime(p) => {
            let rows = m
                .rows
                .iter()
                .map(|row| {
                    row.iter()
                        .filter_map(|&(c, v)| {
                            let r = v.rem_euclid(p as i64) as u64;
                            (r != 0).then_some((c, r))
                        })
                        .collect()
                })
                .collect();
            eliminate(&PrimeField { p }, rows, m.cols)
        }
        Field::Rationals => {
            let rows = m
                .rows
                .iter()
                .map(|row| row.iter().map(|&(c, v)| (c, QNum::from_int(v))).collect())
                .collect();
            eliminate(&Rationals, rows, m.cols)
        }
    }
}

trait Arith {
    type E: Clone;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn div(&self, a: &Self::E, b: &Self::E) -> Self::E;
    /// `a − f·b`
    fn sub_mul(&self, a: &Self::E, f: &Self::E, b: &Self::E) -> Self::E;
    fn neg_mul(&self, f: &Self::E, b: &Self::E) -> Self::E;
}

struct PrimeField {
    p: u64,
}

impl PrimeField {
    fn inv(&self, a: u64) -> u64 {
        let (mut base, mut e, mut acc) = (a % self.p, self.p - 2, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            e >>= 1;
        }
        acc
    }
}

impl Arith for PrimeField {
    type E = u64;

    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }

    fn div(&self, a: &u64, b: &u64) -> u64 {
        a * self.inv(*b) % self.p
    }

    fn sub_mul(&self, a: &u64, f: &u64, b: &u64) -> u64 {
        (a + self.p - f * b % self.p) % self.p
    }

    fn neg_mul(&self, f: &u64, b: &u64) -> u64 {
        (self.p - f * b % self.p) % self.p
    }
}

/// A rational number kept in machine words while it fits, promoted to
/// arbitrary precision on overflow.
#[derive(Clone, Debug)]
enum QNum {
    Small(Ratio<i64>),
    Big(BigRational),
}

impl QNum {
    fn from_int(v: i64) -> Self {
        QNum::Small(Ratio::from_integer(v))
    }

    fn big(&self) -> BigRational {
        match self {
            QNum::Small(r) => BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom())),
            QNum::Big(b) => b.clone(),
        }
    }

    fn normalize(b: BigRational) -> Self {
        let (n, d) = (i64::try_from(b.numer()), i64::try_from(b.denom()));
        match (n, d) {
            (Ok(n), Ok(d)) => QNum::Small(Ratio::new_raw(n, d)),
            _ => QNum::Big(b),
        }
    }
}

struct Rationals;

impl Arith for Rationals {
    type E = QNum;

    fn is_zero(&self, a: &QNum) -> bool {
        match a {
            QNum::Small(r) => r.is_zero(),
            QNum::Big(b) => b.is_zero(),
        }
    }

    fn div(&self, a: &QNum, b: &QNum) -> QNum {
        if let (QNum::Small(x), QNum::Small(y)) = (a, b) {
            let (xn, xd, yn, yd) = (
                *x.numer() as i128,
                *x.denom() as i128,
                *y.numer() as i128,
                *y.denom() as i128,
            );
            let (n, d) = (xn * yd, xd * yn);
            if let (Ok(n), Ok(d)) = (i64::try_from(n), i64::try_from(d)) {
                return QNum::Small(Ratio::new(n, d));
            }
        }
        QNum::normalize(a.big() / b.big())
    }

    fn sub_mul(&self, a: &QNum, f: &QNum, b: &QNum) -> QNum {
        if let (QNum::Small(x), QNum::Small(y), QNum::Small(z)) = (a, f, b) {
            if let Some(r) = y.checked_mul(z).and_then(|p| x.checked_sub(&p)) {
                return QNum::Small(r);
            }
        }
        QNum::normalize(a.big() - f.big() * b.big())
    }

    fn neg_mul(&self, f: &QNum, b: &QNum) -> QNum {
        self.sub_mul(&QNum::from_int(0), f, b)
    }
}

fn eliminate<A: Arith>(ar: &A, mut rows: Vec<Vec<(u32, A::E)>>, ncols: usize) -> usize {
    let nrows = rows.len();
    let mut col_rows: Vec<Vec<u32>> = vec![Vec::new(); ncols];
    let mut col_count = vec![0u32; ncols];
    for (i, r) in rows.iter().enumerate() {
        for (c, _) in r {
            col_rows[*c as usize].push(i as u32);
            col_count[*c as usize] += 1;
        }
    }
    let mut active = vec![true; nrows];
    let mut heap: BinaryHeap<Reverse<(u32, u32)>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| Reverse((r.len() as u32, i as u32)))
        .collect();
    let mut rank = 0;
    while let Some(Reverse((len, i))) = heap.pop() {
        let i = i as usize;
        if !active[i] || rows[i].len() != len as usize {
            continue;
        }
        active[i] = false;
        if len == 0 {
            continue;
        }
        let pivot_row = std::mem::take(&mut rows[i]);
        let pos = (0..pivot_row.len())
            .min_by_key(|&k| (col_count[pivot_row[k].0 as usize], pivot_row[k].0))
            .unwrap();
        rank += 1;
        for (c, _) in &pivot_row {
            col_count[*c as usize] -= 1;
        }
        let (pc, pv) = pivot_row[pos].clone();
        let users = std::mem::take(&mut col_rows[pc as usize]);
        for s in users {
            let s = s as usize;
            if !active[s] {
                continue;
            }
            let Ok(k) = rows[s].binary_search_by_key(&pc, |e| e.0) else {
                continue;
            };
            let f = ar.div(&rows[s][k].1, &pv);
            let old = std::mem::take(&mut rows[s]);
            let mut new = Vec::with_capacity(old.len() + pivot_row.len());
            let (mut a, mut b) = (0, 0);
            while a < old.len() || b < pivot_row.len() {
                let ca = old.get(a).map_or(u32::MAX, |e| e.0);
                let cb = pivot_row.get(b).map_or(u32::MAX, |e| e.0);
                if ca < cb {
                    new.push(old[a].clone());
                    a += 1;
                } else if cb < ca {
                    let v = ar.neg_mul(&f, &pivot_row[b].1);
                    if !ar.is_zero(&v) {
                        col_rows[cb as usize].push(s as u32);
                        col_count[cb as usize] += 1;
                        new.push((cb, v));
                    }
                    b += 1;
                } else {
                    let v = ar.sub_mul(&old[a].1, &f, &pivot_row[b].1);
                    if ar.is_zero(&v) {
                        col_count[ca as usize] -= 1;
                    } else {
                        new.push((ca, v));
                    }
                    a += 1;
                    b += 1;
                }
            }
            heap.push(Reverse((new.len() as u32, s as u32)));
            rows[s] = new;
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Dense rank by textbook elimination, used as an oracle.
    fn dense_rank(m: &[Vec<i64>], field: Field) -> usize {
        let mut a: Vec<Vec<BigRational>> = m
            .iter()
            .map(|r| {
                r.iter()
                    .map(|&v| {
                        let v = match field {
                            Field::Prime(p) => v.rem_euclid(p as i64),
                            Field::Rationals => v,
                        };
                        BigRational::from_integer(BigInt::from(v))
                    })
                    .collect()
            })
            .collect();
        let p = match field {
            Field::Prime(p) => Some(BigInt::from(p)),
            Field::Rationals => None,
        };
        let reduce = |x: BigRational| -> BigRational {
            match &p {
                None => x,
                Some(p) => {
                    // Elements stay integral mod p when we divide by modular inverses.
                    let n = ((x.numer() % p) + p) % p;
                    BigRational::from_integer(n)
                }
            }
        };
        let inv = |x: &BigRational| -> BigRational {
            match &p {
                None => x.recip(),
                Some(p) => BigRational::from_integer(x.numer().modpow(&(p - 2), p)),
            }
        };
        let (rows, cols) = (a.len(), a.first().map_or(0, Vec::len));
        let mut rank = 0;
        for c in 0..cols {
            let Some(piv) = (rank..rows).find(|&r| !a[r][c].is_zero()) else {
                continue;
            };
            a.swap(rank, piv);
            let iv = inv(&a[rank][c]);
            for r in 0..rows {
                if r != rank && !a[r][c].is_zero() {
                    let f = reduce(a[r][c].clone() * iv.clone());
                    let pivot_row = a[rank].clone();
                    for (x, y) in a[r].iter_mut().zip(&pivot_row) {
                        *x = reduce(x.clone() - f.clone() * y.clone());
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    #[test]
    fn small_examples() {
        let id: Vec<Vec<i64>> = (0..5).map(|i| (0..5).map(|j| (i == j) as i64).collect()).collect();
        assert_eq!(matrix_rank(&SparseMatrix::from_dense(&id), Field::Prime(2)), 5);
        assert_eq!(matrix_rank(&SparseMatrix::from_dense(&[vec![2]]), Field::Prime(2)), 0);
        assert_eq!(matrix_rank(&SparseMatrix::from_dense(&[vec![2]]), Field::Rationals), 1);
        let m = vec![vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 1]];
        assert_eq!(matrix_rank(&SparseMatrix::from_dense(&m), Field::Rationals), 2);
    }

    #[test]
    fn large_entries_promote_to_bignum() {
        let big = i64::MAX / 3;
        let m = vec![vec![big, 1, 0], vec![1, big, 1], vec![0, 1, big], vec![big, big, big]];
        assert_eq!(
            matrix_rank(&SparseMatrix::from_dense(&m), Field::Rationals),
            dense_rank(&m, Field::Rationals)
        );
    }

    use proptest::prelude::*;

    proptest! {
        #[test]
        fn matches_dense_oracle(
            m in prop::collection::vec(prop::collection::vec(-3i64..4, 7), 1..9),
            which in 0usize..4,
        ) {
            let field = [Field::Rationals, Field::Prime(2), Field::Prime(3), Field::Prime(5)][which];
            let sparse = SparseMatrix::from_dense(&m);
            prop_assert_eq!(matrix_rank(&sparse, field), dense_rank(&m, field));
            prop_assert_eq!(matrix_rank(&sparse.transpose(), field), dense_rank(&m, field));
        }

        #[test]
        fn rank_invariant_under_shuffles(
            m in prop::collection::vec(prop::collection::vec(-2i64..3, 6), 1..8),
            seed in any::<u64>(),
        ) {
            let sparse = SparseMatrix::from_dense(&m);
            let mut rows = m.clone();
            let k = rows.len();
            rows.rotate_left((seed as usize) % k);
            let cols = rows[0].len();
            let shift = (seed as usize / 7) % cols;
            for r in &mut rows {
                r.rotate_left(shift);
            }
            let shuffled = SparseMatrix::from_dense(&rows);
            for field in [Field::Rationals, Field::Prime(2)] {
                prop_assert_eq!(matrix_rank(&sparse, field), matrix_rank(&shuffled, field));
            }
        }

        #[test]
        fn rational_rank_dominates_modular(m in prop::collection::vec(prop::collection::vec(-4i64..5, 5), 1..7)) {
            let sparse = SparseMatrix::from_dense(&m);
            let q = matrix_rank(&sparse, Field::Rationals);
            for p in [2, 3, 5, 7] {
                prop_assert!(matrix_rank(&sparse, Field::Prime(p)) <= q);
            }
        }
    }
}
