//! Exact rational matrices and order-sensitive minors.
//!
//! Minors follow ordered-index semantics: `A[rows; cols]` is the
//! determinant of the submatrix whose rows appear in the order given by
//! `rows` and whose columns appear in the order given by `cols`, so
//! permuting an index list can flip the sign.

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// An ordered list of distinct 1-based indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrderedIndexList(Vec<usize>);

impl OrderedIndexList {
    pub fn new(indices: Vec<usize>) -> Result<Self> {
        for (pos, &i) in indices.iter().enumerate() {
            if i == 0 {
                return Err(Error::IndexOutOfRange { index: 0, n: 0 });
            }
            if indices[..pos].contains(&i) {
                return Err(Error::DuplicateIndex(i));
            }
        }
        Ok(Self(indices))
    }

    /// `1..=n` in natural order with the listed indices removed.
    pub fn complement(n: usize, removed: &[usize]) -> Self {
        Self((1..=n).filter(|i| !removed.contains(i)).collect())
    }

    /// `1..=n`.
    pub fn full(n: usize) -> Self {
        Self((1..=n).collect())
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    /// The list without its first index (`'α`).
    pub fn drop_first(&self) -> Self {
        Self(self.0.iter().skip(1).copied().collect())
    }

    /// The list without its last index (`α'`).
    pub fn drop_last(&self) -> Self {
        let keep = self.0.len().saturating_sub(1);
        Self(self.0[..keep].to_vec())
    }

    /// The list without its first and last index (`'α'`).
    pub fn drop_both(&self) -> Self {
        self.drop_first().drop_last()
    }

    /// A new list with `head` placed before the current entries.
    pub fn prepend(&self, head: usize) -> Result<Self> {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(head);
        v.extend_from_slice(&self.0);
        Self::new(v)
    }

    fn check_range(&self, n: usize) -> Result<()> {
        match self.0.iter().find(|&&i| i > n) {
            Some(&index) => Err(Error::IndexOutOfRange { index, n }),
            None => Ok(()),
        }
    }
}

impl fmt::Display for OrderedIndexList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str(")")
    }
}

/// Square matrix of exact rationals, `n >= 1`, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExactMatrix {
    n: usize,
    entries: Vec<Rational>,
}

impl ExactMatrix {
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        let mut entries = Vec::with_capacity(n * n);
        for (row, r) in rows.into_iter().enumerate() {
            if r.len() != n {
                return Err(Error::NotSquare { row: row + 1, len: r.len(), expected: n });
            }
            entries.extend(r);
        }
        Ok(Self { n, entries })
    }

    pub fn from_int_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.as_ref().iter().map(|&x| rat(x)).collect()).collect())
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        let mut entries = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                entries.push(f(r, c));
            }
        }
        Ok(Self { n, entries })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::from_fn(n, |r, c| if r == c { Rational::one() } else { Rational::zero() })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Entry at 0-based `(row, col)`.
    pub fn get(&self, row: usize, col: usize) -> &Rational {
        &self.entries[row * self.n + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Rational) {
        self.entries[row * self.n + col] = value;
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Rational]> {
        self.entries.chunks(self.n)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |r, c| self.get(c, r).clone()).expect("n >= 1")
    }

    pub fn trace(&self) -> Rational {
        (0..self.n).map(|i| self.get(i, i).clone()).sum()
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::SizeMismatch { rows: self.n, cols: other.n });
        }
        Self::from_fn(self.n, |r, c| {
            (0..self.n).map(|k| self.get(r, k) * other.get(k, c)).sum()
        })
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self { n: self.n, entries: self.entries.iter().map(|x| x * s).collect() }
    }

    /// Ordered submatrix `A[rows; cols]`.
    pub fn submatrix(&self, rows: &OrderedIndexList, cols: &OrderedIndexList) -> Result<Self> {
        self.check_lists(rows, cols)?;
        if rows.is_empty() {
            return Err(Error::ListTooShort { len: 0, min: 1 });
        }
        let (r, c) = (rows.as_slice(), cols.as_slice());
        Self::from_fn(r.len(), |i, j| self.get(r[i] - 1, c[j] - 1).clone())
    }

    /// Ordered principal submatrix `A[idx]`.
    pub fn principal(&self, idx: &OrderedIndexList) -> Result<Self> {
        self.submatrix(idx, idx)
    }

    /// Principal submatrix with vertex `v` removed, remaining order natural.
    pub fn delete(&self, v: usize) -> Result<Self> {
        if v == 0 || v > self.n {
            return Err(Error::IndexOutOfRange { index: v, n: self.n });
        }
        self.principal(&OrderedIndexList::complement(self.n, &[v]))
    }

    pub fn det(&self) -> Rational {
        let all: Vec<usize> = (1..=self.n).collect();
        self.det_of(&all, &all)
    }

    /// `det A[rows; cols]`.
    pub fn minor(&self, rows: &OrderedIndexList, cols: &OrderedIndexList) -> Result<Rational> {
        self.check_lists(rows, cols)?;
        if rows.is_empty() {
            return Err(Error::ListTooShort { len: 0, min: 1 });
        }
        Ok(self.det_of(rows.as_slice(), cols.as_slice()))
    }

    /// The adjoint (adjugate): entry `(i, j)` is the `(j, i)` cofactor.
    pub fn adjoint(&self) -> Result<Self> {
        let n = self.n;
        if n < 2 {
            return Err(Error::TooSmall { n, min: 2 });
        }
        Self::from_fn(n, |i, j| self.cofactor(j + 1, i + 1))
    }

    /// Signed cofactor of 1-based `(row, col)`: `(-1)^(row+col)` times the
    /// minor with that row and column deleted.
    pub fn cofactor(&self, row: usize, col: usize) -> Rational {
        let rows = OrderedIndexList::complement(self.n, &[row]);
        let cols = OrderedIndexList::complement(self.n, &[col]);
        let m = self.det_of(rows.as_slice(), cols.as_slice());
        if (row + col).is_multiple_of(2) {
            m
        } else {
            -m
        }
    }

    /// Determinant of the ordered submatrix on 1-based `rows`/`cols`.
    /// Empty lists give 1. Lists are assumed validated.
    pub(crate) fn det_of(&self, rows: &[usize], cols: &[usize]) -> Rational {
        let k = rows.len();
        if k == 0 {
            return Rational::one();
        }
        if k == 1 {
            return self.get(rows[0] - 1, cols[0] - 1).clone();
        }
        // Clear denominators row by row, then run integer Bareiss.
        let mut scale = BigInt::one();
        let mut work: Vec<BigInt> = Vec::with_capacity(k * k);
        for &r in rows {
            let lcm = cols
                .iter()
                .fold(BigInt::one(), |acc, &c| acc.lcm(self.get(r - 1, c - 1).denom()));
            for &c in cols {
                let x = self.get(r - 1, c - 1);
                work.push(x.numer() * (&lcm / x.denom()));
            }
            scale *= lcm;
        }
        Rational::new(bareiss_det(&mut work, k), scale)
    }

    fn check_lists(&self, rows: &OrderedIndexList, cols: &OrderedIndexList) -> Result<()> {
        if rows.len() != cols.len() {
            return Err(Error::SizeMismatch { rows: rows.len(), cols: cols.len() });
        }
        rows.check_range(self.n)?;
        cols.check_range(self.n)
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.n)?;
        for row in self.rows() {
            for (k, x) in row.iter().enumerate() {
                if k > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{x}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Fraction-free Gaussian elimination on a `k x k` row-major integer
/// matrix. Every division is exact.
pub(crate) fn bareiss_det(m: &mut [BigInt], k: usize) -> BigInt {
    let mut negate = false;
    let mut prev = BigInt::one();
    for p in 0..k - 1 {
        if m[p * k + p].is_zero() {
            let Some(swap) = (p + 1..k).find(|&r| !m[r * k + p].is_zero()) else {
                return BigInt::zero();
            };
            for c in 0..k {
                m.swap(p * k + c, swap * k + c);
            }
            negate = !negate;
        }
        for i in p + 1..k {
            for j in p + 1..k {
                let v = &m[i * k + j] * &m[p * k + p] - &m[i * k + p] * &m[p * k + j];
                m[i * k + j] = v / &prev;
            }
        }
        prev = m[p * k + p].clone();
    }
    let d = m[k * k - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Sylvester identity residual, denominator-free:
/// `A[α;β]·A['α';'β'] − (A[α';β']·A['α;'β] − A[α';'β]·A['α;β'])`.
/// Zero for every matrix.
pub fn sylvester_residual(
    m: &ExactMatrix,
    alpha: &OrderedIndexList,
    beta: &OrderedIndexList,
) -> Result<Rational> {
    m.check_lists(alpha, beta)?;
    if alpha.len() < 2 {
        return Err(Error::ListTooShort { len: alpha.len(), min: 2 });
    }
    let d = |r: OrderedIndexList, c: OrderedIndexList| m.det_of(r.as_slice(), c.as_slice());
    let whole = d(alpha.clone(), beta.clone());
    let inner = d(alpha.drop_both(), beta.drop_both());
    let top_left = d(alpha.drop_last(), beta.drop_last());
    let bottom_right = d(alpha.drop_first(), beta.drop_first());
    let top_right = d(alpha.drop_last(), beta.drop_first());
    let bottom_left = d(alpha.drop_first(), beta.drop_last());
    Ok(whole * inner - (top_left * bottom_right - top_right * bottom_left))
}

/// `-1`, `0` or `1`.
pub fn sign(x: &Rational) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}
