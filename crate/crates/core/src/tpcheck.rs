//! Total positivity and P-matrix predicates with witnesses.
//!
//! Enumeration order is canonical (minor size first, then lexicographic
//! on rows and columns), so the reported witness is always the first
//! violation in that order.

use alloc::vec::Vec;

use num_traits::Signed;

use crate::combin::for_each_combination;
use crate::{Error, ExactMatrix, Rational, Result};

pub const BRUTE_FORCE_MAX_N: usize = 7;
pub const P_MATRIX_MAX_N: usize = 20;

/// Description of the first violation found by a check.
#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    /// A minor `A[rows; cols]` (1-based labels of the checked matrix) whose
    /// value is not positive. `path` is set when the minor came from a
    /// path submatrix of a tree.
    Minor { rows: Vec<usize>, cols: Vec<usize>, value: Rational, path: Option<Vec<usize>> },
    /// An adjoint entry (after sign conjugation) that is not positive.
    AdjointEntry { row: usize, col: usize, value: Rational },
    /// An eigenvector component that is zero or wrongly signed.
    Vertex { vertex: usize, component: f64, expected_sign: i8 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerdictReport {
    pub pass: bool,
    pub witness: Option<Witness>,
    /// Number of minors (or entries) examined before stopping.
    pub checked: u64,
}

impl VerdictReport {
    pub(crate) fn passed(checked: u64) -> Self {
        Self { pass: true, witness: None, checked }
    }

    pub(crate) fn failed(witness: Witness, checked: u64) -> Self {
        Self { pass: false, witness: Some(witness), checked }
    }
}

fn minor_witness(rows: &[usize], cols: &[usize], value: Rational) -> Witness {
    Witness::Minor { rows: rows.to_vec(), cols: cols.to_vec(), value, path: None }
}

/// Strict total positivity via Fekete's criterion: every minor with
/// contiguous rows and contiguous columns must be positive.
pub fn is_tp(m: &ExactMatrix) -> VerdictReport {
    let n = m.dim();
    let mut checked = 0u64;
    for k in 1..=n {
        for r0 in 1..=n + 1 - k {
            let rows: Vec<usize> = (r0..r0 + k).collect();
            for c0 in 1..=n + 1 - k {
                let cols: Vec<usize> = (c0..c0 + k).collect();
                let value = m.det_of(&rows, &cols);
                checked += 1;
                if !value.is_positive() {
                    return VerdictReport::failed(minor_witness(&rows, &cols, value), checked);
                }
            }
        }
    }
    VerdictReport::passed(checked)
}

/// Total positivity by the literal definition: every minor, over every
/// pair of equal-size index sets. Guarded to `n <= 7`.
pub fn is_tp_bruteforce(m: &ExactMatrix) -> Result<VerdictReport> {
    let n = m.dim();
    if n > BRUTE_FORCE_MAX_N {
        return Err(Error::DimensionGuard { n, max: BRUTE_FORCE_MAX_N });
    }
    let mut checked = 0u64;
    let mut witness = None;
    for k in 1..=n {
        let mut subsets = Vec::new();
        for_each_combination(n, k, |c| subsets.push(c.iter().map(|i| i + 1).collect::<Vec<_>>()));
        'outer: for rows in &subsets {
            for cols in &subsets {
                let value = m.det_of(rows, cols);
                checked += 1;
                if !value.is_positive() {
                    witness = Some(minor_witness(rows, cols, value));
                    break 'outer;
                }
            }
        }
        if let Some(w) = witness {
            return Ok(VerdictReport::failed(w, checked));
        }
    }
    Ok(VerdictReport::passed(checked))
}

/// P-matrix check: all `2^n - 1` principal minors positive.
pub fn is_p_matrix(m: &ExactMatrix) -> Result<VerdictReport> {
    let n = m.dim();
    if n > P_MATRIX_MAX_N {
        return Err(Error::DimensionGuard { n, max: P_MATRIX_MAX_N });
    }
    let mut checked = 0u64;
    let mut witness = None;
    for k in 1..=n {
        for_each_combination(n, k, |c| {
            if witness.is_some() {
                return;
            }
            let idx: Vec<usize> = c.iter().map(|i| i + 1).collect();
            let value = m.det_of(&idx, &idx);
            checked += 1;
            if !value.is_positive() {
                witness = Some(minor_witness(&idx, &idx, value));
            }
        });
        if let Some(w) = witness {
            return Ok(VerdictReport::failed(w, checked));
        }
    }
    Ok(VerdictReport::passed(checked))
}
