//! Reference implementations used only by tests. They share no code with
//! the library: determinants by cofactor expansion or plain Gaussian
//! elimination, inverses by Gauss-Jordan, total positivity by definition.
#![allow(dead_code, clippy::needless_range_loop)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};
use ttp_core::ExactMatrix;

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qq(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn to_rows(a: &ExactMatrix) -> Vec<Vec<Q>> {
    a.rows().map(|r| r.to_vec()).collect()
}

/// Laplace expansion along the first row. Exponential; for `n <= 6`.
pub fn det_laplace(m: &[Vec<Q>]) -> Q {
    let n = m.len();
    if n == 0 {
        return Q::one();
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut total = Q::zero();
    for c in 0..n {
        if m[0][c].is_zero() {
            continue;
        }
        let sub: Vec<Vec<Q>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, x)| x.clone()).collect())
            .collect();
        let term = &m[0][c] * det_laplace(&sub);
        if c % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

/// Gaussian elimination with row swaps over the rationals.
pub fn det_gauss(m: &[Vec<Q>]) -> Q {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = Q::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Q::zero();
        };
        if p != col {
            a.swap(p, col);
            det = -det;
        }
        det *= &a[col][col];
        for r in col + 1..n {
            let f = &a[r][col] / &a[col][col];
            if f.is_zero() {
                continue;
            }
            for c in col..n {
                let d = &f * &a[col][c];
                a[r][c] -= d;
            }
        }
    }
    det
}

/// Minor with rows and columns taken in the given order (0-based).
pub fn minor(m: &[Vec<Q>], rows: &[usize], cols: &[usize]) -> Q {
    let sub: Vec<Vec<Q>> = rows.iter().map(|&r| cols.iter().map(|&c| m[r][c].clone()).collect()).collect();
    det_gauss(&sub)
}

/// Gauss-Jordan inverse, `None` when singular.
pub fn inverse(m: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = m.len();
    let mut a: Vec<Vec<Q>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(p, col);
        let piv = a[col][col].clone();
        for x in a[col].iter_mut() {
            *x /= &piv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..2 * n {
                    let d = &f * &a[col][c];
                    a[r][c] -= d;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Every minor positive.
pub fn tp_by_definition(m: &[Vec<Q>]) -> bool {
    let n = m.len();
    (1..=n).all(|k| {
        let sets = subsets(n, k);
        sets.iter().all(|r| sets.iter().all(|c| minor(m, r, c).is_positive()))
    })
}

/// Every principal minor positive.
pub fn p_matrix_by_definition(m: &[Vec<Q>]) -> bool {
    let n = m.len();
    (1..=n).all(|k| subsets(n, k).iter().all(|s| minor(m, s, s).is_positive()))
}

/// `det(xI − A)` evaluated exactly.
pub fn char_poly_at(m: &[Vec<Q>], x: &Q) -> Q {
    let shifted: Vec<Vec<Q>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| row.iter().enumerate().map(|(j, a)| if i == j { x - a } else { -a }).collect())
        .collect();
    det_gauss(&shifted)
}

/// Sign-change bisection on `det(xI − A)` started from a bracket
/// `[lo, hi]` with opposite signs; stops once the bracket width is at most
/// `tol` times the larger endpoint magnitude.
pub fn bisect_root(m: &[Vec<Q>], mut lo: Q, mut hi: Q, tol: f64) -> f64 {
    let two = q(2);
    let tol = Q::from_float(tol).expect("finite tolerance");
    let lo_sign = char_poly_at(m, &lo).signum();
    assert!(!lo_sign.is_zero() && lo_sign != char_poly_at(m, &hi).signum(), "not a bracket");
    while &hi - &lo > &tol * lo.abs().max(hi.abs()) {
        let mid = (&lo + &hi) / &two;
        let s = char_poly_at(m, &mid).signum();
        if s.is_zero() {
            return to_f64(&mid);
        }
        if s == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    to_f64(&((lo + hi) / two))
}

pub fn to_f64(x: &Q) -> f64 {
    let (n, d) = (x.numer().to_string(), x.denom().to_string());
    // Both parse exactly for the magnitudes used in tests; ratio rounds once.
    let n: f64 = n.parse().unwrap();
    let d: f64 = d.parse().unwrap();
    n / d
}

/// Bound on every eigenvalue modulus: the largest absolute row sum.
pub fn row_sum_bound(m: &[Vec<Q>]) -> Q {
    m.iter().map(|r| r.iter().map(|x| x.abs()).fold(Q::zero(), |a, b| a + b)).max().unwrap() + q(1)
}

/// Extreme real roots of `det(xI − A)`: scan `steps` equal cells of
/// `[-R, R]`, refined geometrically towards zero, for the outermost sign
/// changes, then bisect. Returns `None` when no sign change is seen.
pub fn extreme_real_roots(m: &[Vec<Q>], steps: i64, tol: f64) -> Option<(f64, f64)> {
    let r = row_sum_bound(m);
    let mut grid: Vec<Q> = (0..=steps).map(|i| -&r + &r * qq(2 * i, steps)).collect();
    for k in 1..=80u32 {
        let x = &r / Q::from_integer(BigInt::from(2).pow(k));
        grid.push(-&x);
        grid.push(x);
    }
    grid.sort();
    grid.dedup();
    let steps = grid.len() as i64 - 1;
    let signs: Vec<i8> = grid
        .iter()
        .map(|x| {
            let v = char_poly_at(m, x);
            if v.is_positive() {
                1
            } else if v.is_negative() {
                -1
            } else {
                0
            }
        })
        .collect();
    let changes: Vec<usize> = (0..steps as usize).filter(|&i| signs[i] * signs[i + 1] < 0).collect();
    let exact: Vec<usize> = (0..=steps as usize).filter(|&i| signs[i] == 0).collect();
    let mut roots = Vec::new();
    if let (Some(&first), Some(&last)) = (changes.first(), changes.last()) {
        roots.push(bisect_root(m, grid[first].clone(), grid[first + 1].clone(), tol));
        roots.push(bisect_root(m, grid[last].clone(), grid[last + 1].clone(), tol));
    }
    roots.extend(exact.iter().map(|&i| to_f64(&grid[i])));
    let lo = roots.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = roots.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    (!roots.is_empty()).then_some((lo, hi))
}
