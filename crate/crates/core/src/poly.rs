//! Dense univariate polynomials over exact rationals, with Sturm-sequence
//! root counting and a floating-point all-roots approximation.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exactmat::sign;
use crate::Rational;

/// Coefficients in ascending powers; the leading coefficient is nonzero
/// unless the polynomial is zero (empty vector).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rational::from_integer(BigInt::from(k)))
                .collect(),
        )
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let mut rem = self.coeffs.clone();
        let dd = divisor.degree();
        let lead = divisor.leading();
        if rem.len() <= dd {
            return (Self::new(Vec::new()), self.clone());
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let q = &rem[k + dd] / &lead;
            if !q.is_zero() {
                for (i, d) in divisor.coeffs.iter().enumerate() {
                    rem[k + i] -= &q * d;
                }
            }
            quot[k] = q;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let lead = self.leading();
        Self::new(self.coeffs.iter().map(|c| c / &lead).collect())
    }

    /// Product of the distinct irreducible factors: same distinct roots,
    /// all simple.
    pub fn squarefree(&self) -> Self {
        let g = self.gcd(&self.derivative());
        if g.degree() == 0 {
            return self.monic();
        }
        self.div_rem(&g).0.monic()
    }

    /// Bound `B` with every complex root strictly inside `|z| < B`.
    pub fn cauchy_bound(&self) -> Rational {
        let lead = self.leading().abs();
        let max = self.coeffs[..self.degree()]
            .iter()
            .map(|c| c.abs() / &lead)
            .max()
            .unwrap_or_else(Rational::zero);
        max + Rational::one()
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect()
    }
}

/// Sturm chain of a polynomial's squarefree part.
#[derive(Debug, Clone)]
pub struct SturmChain {
    chain: Vec<Polynomial>,
}

impl SturmChain {
    pub fn new(p: &Polynomial) -> Self {
        let p0 = p.squarefree();
        let mut chain = vec![p0.clone()];
        if p0.degree() == 0 {
            return Self { chain };
        }
        chain.push(p0.derivative());
        loop {
            let n = chain.len();
            let r = chain[n - 2].div_rem(&chain[n - 1]).1;
            if r.is_zero() {
                break;
            }
            // Scaling by a positive constant keeps the sign sequence.
            let scale = r.leading().abs();
            chain.push(Polynomial::new(r.coeffs.iter().map(|c| -(c / &scale)).collect()));
        }
        Self { chain }
    }

    fn variations(&self, x: &Rational) -> usize {
        let mut count = 0;
        let mut last = 0i8;
        for p in &self.chain {
            let s = sign(&p.eval(x));
            if s != 0 {
                if last != 0 && s != last {
                    count += 1;
                }
                last = s;
            }
        }
        count
    }

    /// Number of distinct real roots in the half-open interval `(a, b]`.
    pub fn count(&self, a: &Rational, b: &Rational) -> usize {
        self.variations(a).saturating_sub(self.variations(b))
    }

    pub fn polynomial(&self) -> &Polynomial {
        &self.chain[0]
    }
}

/// Real roots counted with multiplicity.
pub fn real_root_count_with_multiplicity(p: &Polynomial) -> usize {
    let mut total = 0;
    let mut current = p.clone();
    while current.degree() > 0 {
        let bound = current.cauchy_bound();
        total += SturmChain::new(&current).count(&-bound.clone(), &bound);
        current = current.gcd(&current.derivative());
    }
    total
}

/// A half-open interval `(lo, hi]` holding exactly one distinct real root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootInterval {
    pub lo: Rational,
    pub hi: Rational,
}

impl RootInterval {
    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(BigInt::from(2))
    }

    pub fn to_f64(&self) -> f64 {
        self.midpoint().to_f64().unwrap_or(f64::NAN)
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }
}

fn refined(chain: &SturmChain, mut lo: Rational, mut hi: Rational, smallest: bool, bits: u32) -> RootInterval {
    let two = Rational::from_integer(BigInt::from(2));
    let floor = Rational::new(BigInt::one(), BigInt::one() << 200usize);
    loop {
        let scale = lo.abs().max(hi.abs());
        let target = (scale / Rational::from_integer(BigInt::one() << bits as usize)).max(floor.clone());
        let interior = chain.count(&lo, &hi) == 1;
        if interior && &hi - &lo <= target {
            return RootInterval { lo, hi };
        }
        let mid = (&lo + &hi) / &two;
        let below = chain.count(&lo, &mid);
        if smallest {
            if below >= 1 {
                hi = mid;
            } else {
                lo = mid;
            }
        } else if chain.count(&mid, &hi) >= 1 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

/// Isolating interval of the smallest real root, relative width at most
/// `2^-bits`. `None` when there is no real root.
pub fn smallest_real_root(chain: &SturmChain, bits: u32) -> Option<RootInterval> {
    let bound = chain.polynomial().cauchy_bound();
    let lo = -bound.clone();
    if chain.count(&lo, &bound) == 0 {
        return None;
    }
    Some(refined(chain, lo, bound, true, bits))
}

/// Isolating interval of the largest real root.
pub fn largest_real_root(chain: &SturmChain, bits: u32) -> Option<RootInterval> {
    let bound = chain.polynomial().cauchy_bound();
    let lo = -bound.clone();
    if chain.count(&lo, &bound) == 0 {
        return None;
    }
    Some(refined(chain, lo, bound, false, bits))
}

/// Approximate complex number used by the root finder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Complex {
    pub re: f64,
    pub im: f64,
}

impl Complex {
    fn add(self, o: Self) -> Self {
        Self { re: self.re + o.re, im: self.im + o.im }
    }
    fn sub(self, o: Self) -> Self {
        Self { re: self.re - o.re, im: self.im - o.im }
    }
    fn mul(self, o: Self) -> Self {
        Self { re: self.re * o.re - self.im * o.im, im: self.re * o.im + self.im * o.re }
    }
    fn div(self, o: Self) -> Self {
        let d = o.re * o.re + o.im * o.im;
        Self { re: (self.re * o.re + self.im * o.im) / d, im: (self.im * o.re - self.re * o.im) / d }
    }
    pub fn abs(self) -> f64 {
        libm::hypot(self.re, self.im)
    }
}

/// All complex roots of a polynomial (ascending `f64` coefficients, nonzero
/// leading term) by Durand–Kerner iteration.
pub fn approximate_roots(coeffs: &[f64]) -> Vec<Complex> {
    let deg = coeffs.len().saturating_sub(1);
    if deg == 0 {
        return Vec::new();
    }
    let lead = coeffs[deg];
    let monic: Vec<f64> = coeffs.iter().map(|c| c / lead).collect();
    let radius = 1.0 + monic[..deg].iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let eval = |z: Complex| {
        monic.iter().rev().fold(Complex { re: 0.0, im: 0.0 }, |acc, &c| acc.mul(z).add(Complex { re: c, im: 0.0 }))
    };
    let seed = Complex { re: 0.4, im: 0.9 };
    let mut roots: Vec<Complex> = Vec::with_capacity(deg);
    let mut z = Complex { re: radius * 0.5, im: 0.0 };
    for _ in 0..deg {
        z = z.mul(seed);
        roots.push(z);
    }
    for _ in 0..2000 {
        let mut change = 0.0f64;
        for k in 0..deg {
            let zk = roots[k];
            let mut denom = Complex { re: 1.0, im: 0.0 };
            for (j, &zj) in roots.iter().enumerate() {
                if j != k {
                    denom = denom.mul(zk.sub(zj));
                }
            }
            let step = eval(zk).div(denom);
            if step.re.is_finite() && step.im.is_finite() {
                roots[k] = zk.sub(step);
                change = change.max(step.abs());
            }
        }
        if change <= 1e-15 * radius {
            break;
        }
    }
    roots
}
