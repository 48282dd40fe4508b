//! Tree-relative total positivity, the hypothesis bundle for the
//! smallest-eigenvector sign theorem, and the exact adjoint sign pattern.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::exactmat::sign;
use crate::tpcheck::{is_p_matrix, is_tp};
use crate::{Error, ExactMatrix, LabelledTree, OrderedIndexList, Rational, Result, VerdictReport, Witness};

fn check_dims(a: &ExactMatrix, t: &LabelledTree) -> Result<()> {
    if a.dim() != t.n() {
        return Err(Error::DimensionMismatch { matrix: a.dim(), tree: t.n() });
    }
    Ok(())
}

/// `A` is T-TP when every entry is positive and `A[P]` is TP for every
/// path `P` of `T`, rows and columns taken in path order.
pub fn is_ttp(a: &ExactMatrix, t: &LabelledTree) -> Result<VerdictReport> {
    check_dims(a, t)?;
    let n = a.dim();
    let mut checked = 0u64;
    for r in 0..n {
        for c in 0..n {
            checked += 1;
            let value = a.get(r, c);
            if !value.is_positive() {
                let w = Witness::Minor {
                    rows: vec![r + 1],
                    cols: vec![c + 1],
                    value: value.clone(),
                    path: None,
                };
                return Ok(VerdictReport::failed(w, checked));
            }
        }
    }
    for path in t.enumerate_paths() {
        let labels = path.vertices().as_slice();
        let sub = a.principal(path.vertices())?;
        let verdict = is_tp(&sub);
        checked += verdict.checked;
        if let Some(Witness::Minor { rows, cols, value, .. }) = verdict.witness {
            let w = Witness::Minor {
                rows: rows.iter().map(|&i| labels[i - 1]).collect(),
                cols: cols.iter().map(|&i| labels[i - 1]).collect(),
                value,
                path: Some(labels.to_vec()),
            };
            return Ok(VerdictReport::failed(w, checked));
        }
    }
    Ok(VerdictReport::passed(checked))
}

#[derive(Debug, Clone, PartialEq)]
pub struct HypothesisReport {
    pub is_ttp: VerdictReport,
    pub det_value: Rational,
    pub det_positive: bool,
    /// P-matrix verdict for `A` with pendant `p` deleted; witness labels
    /// refer to the original matrix.
    pub pendant_reports: BTreeMap<usize, VerdictReport>,
    pub all_hold: bool,
}

/// Evaluates all three hypotheses: T-TP, `det A > 0`, and that deleting
/// any pendant vertex leaves a P-matrix.
pub fn check_hypotheses(a: &ExactMatrix, t: &LabelledTree) -> Result<HypothesisReport> {
    check_dims(a, t)?;
    let pendants = t.pendant_vertices()?;
    let is_ttp = is_ttp(a, t)?;
    let det_value = a.det();
    let det_positive = det_value.is_positive();
    let mut pendant_reports = BTreeMap::new();
    for p in pendants {
        let keep = OrderedIndexList::complement(a.dim(), &[p]);
        let mut verdict = is_p_matrix(&a.principal(&keep)?)?;
        if let Some(Witness::Minor { rows, cols, .. }) = &mut verdict.witness {
            let labels = keep.as_slice();
            for i in rows.iter_mut().chain(cols.iter_mut()) {
                *i = labels[*i - 1];
            }
        }
        pendant_reports.insert(p, verdict);
    }
    let all_hold = is_ttp.pass && det_positive && pendant_reports.values().all(|r| r.pass);
    Ok(HypothesisReport { is_ttp, det_value, det_positive, pendant_reports, all_hold })
}

/// Residual of the three-term adjoint identity for distinct `i, j, k`:
/// `A[i,ℵ;i,ℵ]·ã(k,i) + A[j,ℵ;i,ℵ]·ã(k,j) + A[k,ℵ;i,ℵ]·ã(k,k)` where `ℵ` is
/// `1..=n` without `i, j, k` in natural order and `ã` is the adjoint.
/// Zero for every matrix.
pub fn lemma22_residual(a: &ExactMatrix, i: usize, j: usize, k: usize) -> Result<Rational> {
    let adj = |row: usize, col: usize| a.cofactor(col, row);
    lemma22_terms(a, i, j, k, adj)
}

/// Same residual, reading adjoint entries from a supplied matrix.
pub fn lemma22_residual_with_adjoint(
    a: &ExactMatrix,
    adjoint: &ExactMatrix,
    i: usize,
    j: usize,
    k: usize,
) -> Result<Rational> {
    if adjoint.dim() != a.dim() {
        return Err(Error::SizeMismatch { rows: a.dim(), cols: adjoint.dim() });
    }
    lemma22_terms(a, i, j, k, |row, col| adjoint.get(row - 1, col - 1).clone())
}

fn lemma22_terms(
    a: &ExactMatrix,
    i: usize,
    j: usize,
    k: usize,
    adj: impl Fn(usize, usize) -> Rational,
) -> Result<Rational> {
    let n = a.dim();
    if n < 3 {
        return Err(Error::TooSmall { n, min: 3 });
    }
    for v in [i, j, k] {
        if v == 0 || v > n {
            return Err(Error::IndexOutOfRange { index: v, n });
        }
    }
    if i == j || j == k || i == k {
        return Err(Error::IndicesNotDistinct);
    }
    let aleph = OrderedIndexList::complement(n, &[i, j, k]);
    let cols = aleph.prepend(i)?;
    let term = |head: usize| -> Result<Rational> {
        let rows = aleph.prepend(head)?;
        Ok(a.det_of(rows.as_slice(), cols.as_slice()))
    };
    Ok(term(i)? * adj(k, i) + term(j)? * adj(k, j) + term(k)? * adj(k, k))
}

/// Which index class an adjoint position `(i, j)` falls into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum IndexClass {
    /// Both `i` and `j` pendant (includes the diagonal at a pendant).
    PendantPendant,
    /// Exactly one of `i`, `j` pendant.
    PendantOther,
    /// Neither pendant.
    OtherOther,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MismatchKind {
    WrongSign,
    Zero,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignMismatch {
    pub row: usize,
    pub col: usize,
    pub kind: MismatchKind,
    pub class: IndexClass,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ClassSummary {
    pub checked: usize,
    pub mismatches: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SignPatternReport {
    /// Sign of each adjoint entry, row-major `n x n`.
    pub entry_signs: Vec<Vec<i8>>,
    /// `σ_i σ_j`.
    pub expected: Vec<Vec<i8>>,
    pub mismatches: Vec<SignMismatch>,
    pub classes: BTreeMap<IndexClass, ClassSummary>,
}

impl SignPatternReport {
    pub fn is_clean(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compares `sign(adj(A)[i][j])` with `σ_i σ_j` at every position.
pub fn adjoint_sign_check(a: &ExactMatrix, t: &LabelledTree) -> Result<SignPatternReport> {
    check_dims(a, t)?;
    let pendants = t.pendant_vertices()?;
    let sigma = t.signing();
    let adj = a.adjoint()?;
    let n = a.dim();
    let mut entry_signs = vec![vec![0i8; n]; n];
    let mut expected = vec![vec![0i8; n]; n];
    let mut mismatches = Vec::new();
    let mut classes = BTreeMap::new();
    for class in [IndexClass::PendantPendant, IndexClass::PendantOther, IndexClass::OtherOther] {
        classes.insert(class, ClassSummary::default());
    }
    for i in 1..=n {
        for j in 1..=n {
            let s = sign(adj.get(i - 1, j - 1));
            let e = sigma.get(i) * sigma.get(j);
            entry_signs[i - 1][j - 1] = s;
            expected[i - 1][j - 1] = e;
            let class = match (pendants.contains(&i), pendants.contains(&j)) {
                (true, true) => IndexClass::PendantPendant,
                (false, false) => IndexClass::OtherOther,
                _ => IndexClass::PendantOther,
            };
            let summary = classes.get_mut(&class).expect("all classes present");
            summary.checked += 1;
            if s != e {
                summary.mismatches += 1;
                let kind = if s == 0 { MismatchKind::Zero } else { MismatchKind::WrongSign };
                mismatches.push(SignMismatch { row: i, col: j, kind, class });
            }
        }
    }
    Ok(SignPatternReport { entry_signs, expected, mismatches, classes })
}

/// Passes when `D adj(A) D` is entrywise positive, `D = diag(σ)`.
pub fn equivalence_sigma_conjugation(a: &ExactMatrix, t: &LabelledTree) -> Result<VerdictReport> {
    check_dims(a, t)?;
    let sigma = t.signing();
    let adj = a.adjoint()?;
    let n = a.dim();
    let mut checked = 0u64;
    for i in 1..=n {
        for j in 1..=n {
            checked += 1;
            let mut value = adj.get(i - 1, j - 1).clone();
            if sigma.get(i) * sigma.get(j) < 0 {
                value = -value;
            }
            if value.is_negative() || value.is_zero() {
                return Ok(VerdictReport::failed(Witness::AdjointEntry { row: i, col: j, value }, checked));
            }
        }
    }
    Ok(VerdictReport::passed(checked))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmat::rat;

    fn m(rows: &[&[i64]]) -> ExactMatrix {
        ExactMatrix::from_int_rows(rows).unwrap()
    }

    #[test]
    fn pascal_on_natural_path() {
        let p = m(&[&[1, 1, 1], &[1, 2, 3], &[1, 3, 6]]);
        let t = LabelledTree::natural_path(3).unwrap();
        assert!(is_ttp(&p, &t).unwrap().pass);
        let h = check_hypotheses(&p, &t).unwrap();
        assert!(h.all_hold);
        assert_eq!(h.det_value, rat(1));
        assert_eq!(h.pendant_reports.keys().copied().collect::<Vec<_>>(), [1, 3]);
        let s = adjoint_sign_check(&p, &t).unwrap();
        assert!(s.is_clean());
        assert_eq!(s.expected[0], [1, -1, 1]);
        assert!(equivalence_sigma_conjugation(&p, &t).unwrap().pass);
    }

    #[test]
    fn nonpositive_entry_fails_first() {
        let a = m(&[&[1, 1, 1], &[1, 0, 3], &[1, 3, 6]]);
        let t = LabelledTree::star(3).unwrap();
        let r = is_ttp(&a, &t).unwrap();
        assert_eq!(
            r.witness,
            Some(Witness::Minor { rows: [2].into(), cols: [2].into(), value: rat(0), path: None })
        );
    }

    #[test]
    fn path_witness_maps_to_labels() {
        // Star centre 1: path (2,1,3). Rows/cols 2,1 give det [[a22,a21],[a12,a11]].
        let a = m(&[&[1, 1, 1], &[5, 1, 1], &[1, 1, 1]]);
        let t = LabelledTree::star(3).unwrap();
        let r = is_ttp(&a, &t).unwrap();
        let Some(Witness::Minor { rows, cols, value, path }) = r.witness else { panic!() };
        assert_eq!(path, Some(vec![1, 2]));
        let recomputed = a
            .minor(&OrderedIndexList::new(rows).unwrap(), &OrderedIndexList::new(cols).unwrap())
            .unwrap();
        assert_eq!(recomputed, value);
        assert!(!value.is_positive());
    }

    #[test]
    fn dimension_mismatch() {
        let a = ExactMatrix::identity(2).unwrap();
        let t = LabelledTree::natural_path(3).unwrap();
        assert_eq!(is_ttp(&a, &t), Err(Error::DimensionMismatch { matrix: 2, tree: 3 }));
        assert!(check_hypotheses(&a, &t).is_err());
        assert!(adjoint_sign_check(&a, &t).is_err());
        assert!(equivalence_sigma_conjugation(&a, &t).is_err());
    }

    #[test]
    fn negative_det_breaks_hypotheses() {
        // Positive entries, det = 2 - 3 < 0.
        let a = m(&[&[1, 3], &[1, 2]]);
        let t = LabelledTree::natural_path(2).unwrap();
        let h = check_hypotheses(&a, &t).unwrap();
        assert!(!h.det_positive);
        assert!(!h.all_hold);
    }

    #[test]
    fn two_by_two_conjugation() {
        let a = m(&[&[2, 1], &[1, 2]]);
        let t = LabelledTree::natural_path(2).unwrap();
        assert!(equivalence_sigma_conjugation(&a, &t).unwrap().pass);
    }

    #[test]
    fn three_term_identity_small() {
        let id = ExactMatrix::identity(4).unwrap();
        assert_eq!(lemma22_residual(&id, 1, 2, 3).unwrap(), rat(0));
        let a = m(&[&[3, -1, 4, 1], &[5, 9, -2, 6], &[5, 3, 5, -8], &[9, 7, 9, 3]]);
        for (i, j, k) in [(1, 2, 3), (4, 2, 1), (3, 1, 4), (2, 4, 3)] {
            assert_eq!(lemma22_residual(&a, i, j, k).unwrap(), rat(0));
        }
        let adj = a.adjoint().unwrap();
        assert_eq!(lemma22_residual_with_adjoint(&a, &adj, 1, 2, 3).unwrap(), rat(0));
    }

    #[test]
    fn three_term_errors() {
        let a = ExactMatrix::identity(3).unwrap();
        assert_eq!(lemma22_residual(&a, 1, 1, 2), Err(Error::IndicesNotDistinct));
        assert_eq!(lemma22_residual(&a, 1, 2, 4), Err(Error::IndexOutOfRange { index: 4, n: 3 }));
        let small = ExactMatrix::identity(2).unwrap();
        assert_eq!(lemma22_residual(&small, 1, 2, 3), Err(Error::TooSmall { n: 2, min: 3 }));
    }

    #[test]
    fn zero_adjoint_entry_is_distinct_mismatch() {
        // Row 3 is twice row 2, so the adjoint has rank one and some zeros.
        let a = m(&[&[2, 1, 1], &[1, 2, 1], &[2, 4, 2]]);
        let t = LabelledTree::natural_path(3).unwrap();
        let s = adjoint_sign_check(&a, &t).unwrap();
        let adj = a.adjoint().unwrap();
        for mm in &s.mismatches {
            let v = adj.get(mm.row - 1, mm.col - 1);
            assert_eq!(mm.kind == MismatchKind::Zero, v.is_zero());
        }
        assert!(s.mismatches.iter().any(|mm| mm.kind == MismatchKind::Zero));
        let total: usize = s.classes.values().map(|c| c.mismatches).sum();
        assert_eq!(total, s.mismatches.len());
    }
}
