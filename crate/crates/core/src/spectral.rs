//! Eigenpairs in floating point, anchored to the exact characteristic
//! polynomial, and the tree-signing verdict for eigenvectors.
//!
//! The smallest real eigenvalue is located exactly (Sturm bisection on
//! `det(xI - A)` over the rationals) and its eigenvector is then obtained
//! by inverse iteration at that shift. The largest eigenpair of an
//! entrywise positive matrix comes from plain power iteration.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::poly::{self, Polynomial, SturmChain};
use crate::ttp::{adjoint_sign_check, check_hypotheses};
use crate::{
    Error, ExactMatrix, HypothesisReport, LabelledTree, Rational, Result, SignPatternReport, VerdictReport,
    VertexSigning, Witness,
};

/// Bits of relative precision for exact root isolation.
const ROOT_BITS: u32 = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralConfig {
    /// Residual bound, relative to `‖A‖_F`.
    pub residual_tol: f64,
    /// Eigenvector components at or below this magnitude count as zero.
    pub zero_tol: f64,
    /// Eigenvalue gap below `simple_tol · ‖A‖_F` clears the simple flag.
    pub simple_tol: f64,
    pub max_iter: usize,
}

impl Default for SpectralConfig {
    fn default() -> Self {
        Self { residual_tol: 1e-10, zero_tol: 1e-8, simple_tol: 1e-8, max_iter: 1000 }
    }
}

/// Dense `f64` matrix with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct FloatMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl FloatMatrix {
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        let mut entries = Vec::with_capacity(n * n);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotSquare { row: r + 1, len: row.len(), expected: n });
            }
            for (c, &x) in row.iter().enumerate() {
                if !x.is_finite() {
                    return Err(Error::NonFinite { row: r + 1, col: c + 1 });
                }
                entries.push(x);
            }
        }
        Ok(Self { n, entries })
    }

    pub fn from_exact(a: &ExactMatrix) -> Self {
        let n = a.dim();
        let mut entries = Vec::with_capacity(n * n);
        for row in a.rows() {
            entries.extend(row.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)));
        }
        Self { n, entries }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.entries[r * self.n + c]
    }

    pub fn frobenius_norm(&self) -> f64 {
        libm::sqrt(self.entries.iter().map(|x| x * x).sum())
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        self.entries.chunks(self.n).map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    /// `‖A v − λ v‖₂`.
    pub fn residual(&self, value: f64, v: &[f64]) -> f64 {
        let av = self.mul_vec(v);
        norm(&av.iter().zip(v).map(|(a, x)| a - value * x).collect::<Vec<_>>())
    }
}

fn norm(v: &[f64]) -> f64 {
    libm::sqrt(v.iter().map(|x| x * x).sum())
}

fn normalize(v: &mut [f64]) -> bool {
    let s = norm(v);
    if !(s.is_finite() && s > 0.0) {
        return false;
    }
    v.iter_mut().for_each(|x| *x /= s);
    true
}

/// Flips `v` so its largest-magnitude component (first on ties) is positive.
fn orient(v: &mut [f64]) {
    let mut best = 0;
    for (k, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() {
            best = k;
        }
    }
    if v[best] < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub value: f64,
    /// Unit 2-norm, largest-magnitude component positive.
    pub vector: Vec<f64>,
    /// `‖A v − λ v‖₂`.
    pub residual: f64,
    pub simple: bool,
}

/// Exact coefficients of `det(xI − A)` by Faddeev–LeVerrier, ascending.
pub fn char_poly(a: &ExactMatrix) -> Polynomial {
    let n = a.dim();
    let mut coeffs = vec![Rational::zero(); n + 1];
    coeffs[n] = Rational::one();
    let mut m = ExactMatrix::from_fn(n, |_, _| Rational::zero()).expect("n >= 1");
    for k in 1..=n {
        let mut next = a.mul(&m).expect("same size");
        for i in 0..n {
            let d = next.get(i, i) + &coeffs[n - k + 1];
            next.set(i, i, d);
        }
        m = next;
        let tr = a.mul(&m).expect("same size").trace();
        coeffs[n - k] = -tr / Rational::from_integer(BigInt::from(k));
    }
    Polynomial::new(coeffs)
}

/// LU factorization with partial pivoting; zero pivots are nudged so that
/// solves at an exact eigenvalue shift stay finite.
struct Lu {
    n: usize,
    lu: Vec<f64>,
    perm: Vec<usize>,
}

impl Lu {
    fn new(a: &FloatMatrix, shift: f64) -> Self {
        let n = a.n;
        let mut lu = a.entries.clone();
        for i in 0..n {
            lu[i * n + i] -= shift;
        }
        let tiny = f64::EPSILON * a.frobenius_norm().max(f64::MIN_POSITIVE);
        let mut perm: Vec<usize> = (0..n).collect();
        for p in 0..n {
            let pivot = (p..n).max_by(|&x, &y| lu[x * n + p].abs().total_cmp(&lu[y * n + p].abs())).unwrap_or(p);
            if pivot != p {
                for c in 0..n {
                    lu.swap(p * n + c, pivot * n + c);
                }
                perm.swap(p, pivot);
            }
            if lu[p * n + p].abs() < tiny {
                lu[p * n + p] = tiny;
            }
            for r in p + 1..n {
                let f = lu[r * n + p] / lu[p * n + p];
                lu[r * n + p] = f;
                for c in p + 1..n {
                    lu[r * n + c] -= f * lu[p * n + c];
                }
            }
        }
        Self { n, lu, perm }
    }

    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for r in 0..n {
            for c in 0..r {
                x[r] -= self.lu[r * n + c] * x[c];
            }
        }
        for r in (0..n).rev() {
            for c in r + 1..n {
                x[r] -= self.lu[r * n + c] * x[c];
            }
            x[r] /= self.lu[r * n + r];
        }
        x
    }
}

fn start_vector(n: usize, variant: usize) -> Vec<f64> {
    (0..n).map(|k| 0.1 + ((k * 7919 + 13 + variant * 104_729) % 101) as f64 / 101.0).collect()
}

/// Inverse iteration at a fixed shift until the residual bound holds.
fn inverse_iteration(a: &FloatMatrix, value: f64, tol: f64, max_iter: usize) -> Result<(Vec<f64>, f64)> {
    let lu = Lu::new(a, value);
    let mut best: Option<(Vec<f64>, f64)> = None;
    for variant in 0..3 {
        let mut v = start_vector(a.n, variant);
        normalize(&mut v);
        for _ in 0..max_iter {
            let mut w = lu.solve(&v);
            if !normalize(&mut w) {
                break;
            }
            v = w;
            let r = a.residual(value, &v);
            if best.as_ref().is_none_or(|(_, b)| r < *b) {
                best = Some((v.clone(), r));
            }
            if r <= tol {
                return Ok(best.expect("just set"));
            }
        }
    }
    Err(Error::NoConvergence(max_iter))
}

/// Eigenpair of the smallest real eigenvalue.
///
/// Fails when `A` is singular, has no real eigenvalue, or has a complex
/// eigenvalue with smaller real part or smaller modulus than the smallest
/// real one.
pub fn smallest_eigenpair(a: &ExactMatrix, cfg: &SpectralConfig) -> Result<EigenPair> {
    if a.det().is_zero() {
        return Err(Error::Singular);
    }
    let p = char_poly(a);
    let chain = SturmChain::new(&p);
    let root = poly::smallest_real_root(&chain, ROOT_BITS).ok_or(Error::NoRealEigenvalue)?;
    let value = root.to_f64();
    let fa = FloatMatrix::from_exact(a);
    let scale = fa.frobenius_norm();
    let gap_tol = cfg.simple_tol * scale;

    let n_complex = a.dim() - poly::real_root_count_with_multiplicity(&p);
    let mut complex_near = false;
    if n_complex > 0 {
        let mut roots = poly::approximate_roots(&p.to_f64_coeffs());
        roots.sort_by(|x, y| y.im.abs().total_cmp(&x.im.abs()));
        for z in &roots[..n_complex] {
            if z.re < value || z.abs() < value.abs() {
                return Err(Error::ComplexSmallest);
            }
            let d = poly::Complex { re: z.re - value, im: z.im }.abs();
            complex_near |= d <= gap_tol;
        }
    }

    let derivative_gcd = p.gcd(&p.derivative());
    let repeated =
        derivative_gcd.degree() > 0 && SturmChain::new(&derivative_gcd).count(&root.lo, &root.hi) > 0;
    let gap = Rational::from_float(gap_tol).unwrap_or_else(Rational::zero);
    let neighbour = chain.count(&root.hi, &(&root.hi + gap)) > 0;
    let simple = !repeated && !neighbour && !complex_near;

    let (mut vector, residual) = inverse_iteration(&fa, value, cfg.residual_tol * scale, cfg.max_iter)?;
    orient(&mut vector);
    Ok(EigenPair { value, vector, residual, simple })
}

/// Perron eigenpair of an entrywise positive matrix by power iteration.
pub fn largest_eigenpair(a: &FloatMatrix, cfg: &SpectralConfig) -> Result<EigenPair> {
    let n = a.n;
    for r in 0..n {
        for c in 0..n {
            if a.get(r, c) <= 0.0 {
                return Err(Error::NotPositive { row: r + 1, col: c + 1 });
            }
        }
    }
    let tol = cfg.residual_tol * a.frobenius_norm();
    let mut v = vec![1.0; n];
    normalize(&mut v);
    for _ in 0..cfg.max_iter {
        let mut w = a.mul_vec(&v);
        let value: f64 = w.iter().zip(&v).map(|(x, y)| x * y).sum();
        let residual = norm(&w.iter().zip(&v).map(|(x, y)| x - value * y).collect::<Vec<_>>());
        if residual <= tol {
            orient(&mut v);
            return Ok(EigenPair { value, vector: v, residual, simple: true });
        }
        normalize(&mut w);
        v = w;
    }
    Err(Error::NoConvergence(cfg.max_iter))
}

/// Pass when every component is nonzero (beyond `zero_tol`) and the sign
/// pattern equals `σ` or `−σ`. The witness is the first offending vertex.
pub fn signing_verdict(v: &[f64], sigma: &VertexSigning, zero_tol: f64) -> VerdictReport {
    let mut checked = 0u64;
    for (k, &x) in v.iter().enumerate() {
        checked += 1;
        if x.is_nan() || x.abs() <= zero_tol {
            let w = Witness::Vertex { vertex: k + 1, component: x, expected_sign: sigma.get(k + 1) };
            return VerdictReport::failed(w, checked);
        }
    }
    let flip: i8 = if v[0] > 0.0 { sigma.get(1) } else { -sigma.get(1) };
    for (k, &x) in v.iter().enumerate() {
        let expected = flip * sigma.get(k + 1);
        if (x > 0.0) != (expected > 0) {
            let w = Witness::Vertex { vertex: k + 1, component: x, expected_sign: expected };
            return VerdictReport::failed(w, checked);
        }
    }
    VerdictReport::passed(checked)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TheoremStatus {
    /// At least one hypothesis fails; the conclusion was not tested.
    HypothesesNotMet,
    /// Hypotheses hold and both the exact and the spectral route agree
    /// with the conclusion.
    Confirmed,
    /// Hypotheses hold but some part of the conclusion fails.
    Falsified,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TheoremVerdict {
    pub status: TheoremStatus,
    pub hypotheses: HypothesisReport,
    pub sign_pattern: Option<SignPatternReport>,
    pub eigenpair: Option<EigenPair>,
    pub signing: Option<VerdictReport>,
    /// Set when the spectral route refused (complex or missing real
    /// smallest eigenvalue) under the hypotheses.
    pub spectral_failure: Option<Error>,
    /// Whether the exact sign pattern and the eigenvector signing agree.
    pub routes_agree: Option<bool>,
}

/// Checks the hypotheses; when they hold, verifies that the smallest
/// eigenvalue is real and simple with an eigenvector signed according to
/// `T`, and that the exact adjoint sign pattern agrees.
pub fn verify_theorem(a: &ExactMatrix, t: &LabelledTree, cfg: &SpectralConfig) -> Result<TheoremVerdict> {
    let hypotheses = check_hypotheses(a, t)?;
    let mut verdict = TheoremVerdict {
        status: TheoremStatus::HypothesesNotMet,
        hypotheses,
        sign_pattern: None,
        eigenpair: None,
        signing: None,
        spectral_failure: None,
        routes_agree: None,
    };
    if !verdict.hypotheses.all_hold {
        return Ok(verdict);
    }
    let pattern = adjoint_sign_check(a, t)?;
    let exact_ok = pattern.is_clean();
    verdict.sign_pattern = Some(pattern);
    match smallest_eigenpair(a, cfg) {
        Ok(pair) => {
            let signing = signing_verdict(&pair.vector, &t.signing(), cfg.zero_tol);
            let spectral_ok = signing.pass;
            verdict.routes_agree = Some(exact_ok == spectral_ok);
            verdict.status = if exact_ok && spectral_ok && pair.simple {
                TheoremStatus::Confirmed
            } else {
                TheoremStatus::Falsified
            };
            verdict.eigenpair = Some(pair);
            verdict.signing = Some(signing);
        }
        Err(e @ (Error::ComplexSmallest | Error::NoRealEigenvalue)) => {
            verdict.spectral_failure = Some(e);
            verdict.status = TheoremStatus::Falsified;
        }
        Err(e) => return Err(e),
    }
    Ok(verdict)
}
