//! Instance synthesis: random TP matrices and simulated annealing over
//! exact rational matrices toward T-TP instances (optionally with a
//! negative determinant).

use alloc::collections::{BTreeSet, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::combin::for_each_combination;
use crate::exactmat::{bareiss_det, ratio};
use crate::ttp::{check_hypotheses, is_ttp};
use crate::{Error, ExactMatrix, LabelledTree, Rational, Result};

/// Required margin for minors and entries in the search objective.
pub fn margin() -> Rational {
    ratio(1, 1000)
}

/// Number of non-improving steps between coolings.
const PLATEAU: u32 = 100;
/// Coolings before restarting from the best state.
const COOLINGS_PER_RESTART: u32 = 10;
/// Moves scale an entry by `1 + step · u / GRID`, integer `u` in `[-GRID, GRID]`.
const GRID: i64 = 1024;
/// Candidate entries are multiples of `2^-q`, `q >= QUANT_BITS`.
const QUANT_BITS: usize = 20;
/// Restarts without progress before abandoning the current basin.
const IDLE_RESTARTS_PER_FRESH_START: u32 = 5;
/// Starting temperature as a fraction of the warm-start score.
const INITIAL_TEMP_FRACTION: f64 = 0.01;

#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    pub seed: u64,
    /// Maximum number of objective evaluations.
    pub budget: u64,
    /// Initial perturbation magnitude.
    pub step_scale: Rational,
    /// Entries are kept within `[lo, hi]`, `0 < lo < hi`.
    pub entry_range: (Rational, Rational),
    /// Temperature multiplier per cooling, in `(0, 1)`.
    pub anneal: f64,
    /// Also drive `det A` and the pendant-deleted principal minors above
    /// the margin, so found instances satisfy every theorem hypothesis.
    pub require_hypotheses: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            budget: 100_000,
            step_scale: ratio(1, 2),
            entry_range: (ratio(1, 64), ratio(1000, 1)),
            anneal: 0.9,
            require_hypotheses: false,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.step_scale.is_positive() {
            return Err(Error::InvalidConfig("step_scale must be positive"));
        }
        if !(self.anneal > 0.0 && self.anneal < 1.0) {
            return Err(Error::InvalidConfig("anneal must lie in (0, 1)"));
        }
        let (lo, hi) = &self.entry_range;
        if !lo.is_positive() || lo >= hi {
            return Err(Error::InvalidConfig("entry_range must satisfy 0 < lo < hi"));
        }
        Ok(())
    }
}

/// Best objective value after a given number of evaluations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TracePoint {
    pub evaluations: u64,
    pub score: Rational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome {
    pub found: bool,
    /// Present exactly when `found`; re-verified with the exact checkers.
    pub matrix: Option<ExactMatrix>,
    pub evaluations: u64,
    /// Best objective value seen; `None` when nothing was evaluated.
    pub final_score: Option<Rational>,
    /// For found instances: whether all theorem hypotheses hold as well.
    pub hypotheses_hold: Option<bool>,
    /// Strictly decreasing best-score records.
    pub trace: Vec<TracePoint>,
}

fn small_positive(rng: &mut ChaCha8Rng) -> Rational {
    ratio(rng.gen_range(1..=8), 4)
}

/// Random TP matrix as `L · D · U`, where `L` (`U`) is a product of
/// `n − 1` unit lower (upper) bidiagonal matrices with positive
/// off-diagonal parameters and `D` is a positive diagonal.
pub fn generate_tp(n: usize, seed: u64) -> Result<ExactMatrix> {
    if n == 0 {
        return Err(Error::EmptyMatrix);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lower = ExactMatrix::identity(n)?;
    let mut upper = ExactMatrix::identity(n)?;
    for _ in 1..n {
        let mut b = ExactMatrix::identity(n)?;
        for i in 1..n {
            b.set(i, i - 1, small_positive(&mut rng));
        }
        lower = lower.mul(&b)?;
        let mut b = ExactMatrix::identity(n)?;
        for i in 1..n {
            b.set(i - 1, i, small_positive(&mut rng));
        }
        upper = b.mul(&upper)?;
    }
    let mut diag = ExactMatrix::identity(n)?;
    for i in 0..n {
        diag.set(i, i, ratio(rng.gen_range(1..=4), 1));
    }
    lower.mul(&diag)?.mul(&upper)
}

/// Distinct contiguous path minors of size at least two, with reversal
/// (of both rows and columns) treated as the same minor.
fn required_minors(t: &LabelledTree) -> Vec<(Vec<usize>, Vec<usize>)> {
    let mut set = BTreeSet::new();
    for path in t.enumerate_paths() {
        let p = path.vertices().as_slice();
        let len = p.len();
        for k in 2..=len {
            for r in 0..=len - k {
                for c in 0..=len - k {
                    insert_minor(&mut set, p[r..r + k].to_vec(), p[c..c + k].to_vec());
                }
            }
        }
    }
    set.into_iter().collect()
}

fn insert_minor(set: &mut BTreeSet<(Vec<usize>, Vec<usize>)>, rows: Vec<usize>, cols: Vec<usize>) {
    let rev_rows: Vec<usize> = rows.iter().rev().copied().collect();
    let rev_cols: Vec<usize> = cols.iter().rev().copied().collect();
    set.insert((rows, cols).min((rev_rows, rev_cols)));
}

/// Path minors plus, when `hypotheses` is set, every principal minor of
/// size at least two that lives inside some pendant-deleted submatrix and
/// the full determinant.
fn objective_minors(t: &LabelledTree, hypotheses: bool) -> Vec<(Vec<usize>, Vec<usize>)> {
    let mut set: BTreeSet<_> = required_minors(t).into_iter().collect();
    if hypotheses && t.n() >= 2 {
        let n = t.n();
        let pendants = t.pendant_vertices().expect("n >= 2");
        for k in 2..=n {
            for_each_combination(n, k, |c| {
                let idx: Vec<usize> = c.iter().map(|i| i + 1).collect();
                if k == n || pendants.iter().any(|p| !idx.contains(p)) {
                    insert_minor(&mut set, idx.clone(), idx);
                }
            });
        }
    }
    set.into_iter().collect()
}

fn shortfall(value: &Rational, eps: &Rational) -> Rational {
    if value < eps {
        eps - value
    } else {
        Rational::zero()
    }
}

/// Sum of `max(0, ε − a_ij)` over entries plus `max(0, ε − m)` over every
/// distinct required contiguous path minor `m` of size at least two,
/// `ε = 1/1000`. Zero implies T-TP.
pub fn violation_score(a: &ExactMatrix, t: &LabelledTree) -> Result<Rational> {
    if a.dim() != t.n() {
        return Err(Error::DimensionMismatch { matrix: a.dim(), tree: t.n() });
    }
    let eps = margin();
    let mut total = Rational::zero();
    for row in a.rows() {
        for x in row {
            total += shortfall(x, &eps);
        }
    }
    for (rows, cols) in required_minors(t) {
        total += shortfall(&a.det_of(&rows, &cols), &eps);
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Target {
    Ttp { hypotheses: bool },
    NegativeDet,
}

/// Candidate matrices on the dyadic lattice `2^-q · Z`, stored as integer
/// numerators. All objective terms are integers over the common
/// denominator `1000 · 2^(q·n)`, so scoring is exact without rational
/// normalization.
struct LatticeMatrix {
    n: usize,
    q: usize,
    nums: Vec<i64>,
}

impl LatticeMatrix {
    fn from_exact(a: &ExactMatrix, q_min: usize) -> Self {
        let n = a.dim();
        let mut q = q_min;
        for x in a.rows().flatten() {
            let d = x.denom();
            let bits = d.bits() as usize - 1;
            assert!(*d == BigInt::one() << bits, "lattice start must be dyadic");
            q = q.max(bits);
        }
        let scale = BigInt::one() << q;
        let nums = a
            .rows()
            .flatten()
            .map(|x| (x.numer() * (&scale / x.denom())).to_i64().expect("entry fits the lattice"))
            .collect();
        Self { n, q, nums }
    }

    fn to_exact(&self) -> ExactMatrix {
        let scale = BigInt::one() << self.q;
        ExactMatrix::from_fn(self.n, |r, c| Rational::new(BigInt::from(self.nums[r * self.n + c]), scale.clone()))
            .expect("n >= 1")
    }

    /// Numerator of the ordered minor; the minor is this over `2^(q·k)`.
    fn minor(&self, rows: &[usize], cols: &[usize]) -> BigInt {
        let k = rows.len();
        let max = rows
            .iter()
            .flat_map(|&r| cols.iter().map(move |&c| self.nums[(r - 1) * self.n + c - 1].unsigned_abs()))
            .max()
            .unwrap_or(0);
        // Bareiss intermediates are minors, bounded by (sqrt(k)·max)^k
        // (Hadamard); each step multiplies two of them before dividing.
        let bits = (64 - max.leading_zeros()) as usize;
        if 2 * (k * bits + k.div_ceil(2) * (k.ilog2() as usize + 1)) < 126 {
            let mut m: Vec<i128> = Vec::with_capacity(k * k);
            for &r in rows {
                for &c in cols {
                    m.push(self.nums[(r - 1) * self.n + c - 1] as i128);
                }
            }
            BigInt::from(bareiss_i128(&mut m, k))
        } else {
            let mut m: Vec<BigInt> = Vec::with_capacity(k * k);
            for &r in rows {
                for &c in cols {
                    m.push(BigInt::from(self.nums[(r - 1) * self.n + c - 1]));
                }
            }
            bareiss_det(&mut m, k)
        }
    }
}

fn bareiss_i128(m: &mut [i128], k: usize) -> i128 {
    let mut negate = false;
    let mut prev = 1i128;
    for p in 0..k - 1 {
        if m[p * k + p] == 0 {
            let Some(swap) = (p + 1..k).find(|&r| m[r * k + p] != 0) else {
                return 0;
            };
            for c in 0..k {
                m.swap(p * k + c, swap * k + c);
            }
            negate = !negate;
        }
        for i in p + 1..k {
            for j in p + 1..k {
                m[i * k + j] = (m[i * k + j] * m[p * k + p] - m[i * k + p] * m[p * k + j]) / prev;
            }
        }
        prev = m[p * k + p];
    }
    if negate {
        -m[k * k - 1]
    } else {
        m[k * k - 1]
    }
}

/// Objective with per-term caching so that a single-entry change only
/// re-evaluates the minors that contain that entry.
struct Objective {
    target: Target,
    n: usize,
    q: usize,
    minors: Vec<(Vec<usize>, Vec<usize>)>,
    touching: Vec<Vec<usize>>,
    minor_terms: Vec<BigInt>,
    entry_terms: Vec<BigInt>,
    det_term: BigInt,
}

impl Objective {
    fn new(t: &LabelledTree, target: Target, a: &LatticeMatrix) -> Self {
        let n = t.n();
        let minors = match target {
            Target::Ttp { hypotheses } => objective_minors(t, hypotheses),
            Target::NegativeDet => required_minors(t),
        };
        let mut touching = vec![Vec::new(); n * n];
        for (k, (rows, cols)) in minors.iter().enumerate() {
            for &r in rows {
                for &c in cols {
                    touching[(r - 1) * n + (c - 1)].push(k);
                }
            }
        }
        let mut obj = Self {
            target,
            n,
            q: a.q,
            minors,
            touching,
            minor_terms: Vec::new(),
            entry_terms: Vec::new(),
            det_term: BigInt::zero(),
        };
        obj.reset(a);
        obj
    }

    /// `1000 · 2^(q·n)`: the score is the integer total over this.
    fn denominator(&self) -> BigInt {
        BigInt::from(1000) << (self.q * self.n)
    }

    /// `max(0, ε − m)` scaled by the common denominator, for a `k x k`
    /// minor with numerator `m`.
    fn shortfall(&self, m: &BigInt, k: usize) -> BigInt {
        let t: BigInt = (BigInt::one() << (self.q * k)) - m * 1000;
        if t.is_positive() {
            t << (self.q * (self.n - k))
        } else {
            BigInt::zero()
        }
    }

    fn entry_term(&self, a: &LatticeMatrix, idx: usize) -> BigInt {
        self.shortfall(&BigInt::from(a.nums[idx]), 1)
    }

    fn minor_term(&self, a: &LatticeMatrix, k: usize) -> BigInt {
        let (rows, cols) = &self.minors[k];
        self.shortfall(&a.minor(rows, cols), rows.len())
    }

    fn det_part(&self, a: &LatticeMatrix) -> BigInt {
        match self.target {
            Target::Ttp { .. } => BigInt::zero(),
            Target::NegativeDet => {
                let all: Vec<usize> = (1..=self.n).collect();
                // (det + ε) · denominator
                let d: BigInt = a.minor(&all, &all) * 1000 + (BigInt::one() << (self.q * self.n));
                if d.is_positive() {
                    d
                } else {
                    BigInt::zero()
                }
            }
        }
    }

    fn total(&self) -> BigInt {
        let mut s: BigInt = self.minor_terms.iter().sum();
        s += self.entry_terms.iter().sum::<BigInt>();
        s + &self.det_term
    }

    /// Terms affected by a change of entry `idx` of `a` (already applied).
    fn rescore(&self, a: &LatticeMatrix, idx: usize) -> Delta {
        let minors = self.touching[idx].iter().map(|&k| (k, self.minor_term(a, k))).collect();
        Delta { idx, entry: self.entry_term(a, idx), minors, det: self.det_part(a) }
    }

    fn delta_total(&self, current: &BigInt, d: &Delta) -> BigInt {
        let mut s = current + &d.entry - &self.entry_terms[d.idx];
        for (k, v) in &d.minors {
            s += v;
            s -= &self.minor_terms[*k];
        }
        s + &d.det - &self.det_term
    }

    fn commit(&mut self, d: Delta) {
        self.entry_terms[d.idx] = d.entry;
        for (k, v) in d.minors {
            self.minor_terms[k] = v;
        }
        self.det_term = d.det;
    }

    fn reset(&mut self, a: &LatticeMatrix) {
        self.minor_terms = (0..self.minors.len()).map(|k| self.minor_term(a, k)).collect();
        self.entry_terms = (0..self.n * self.n).map(|idx| self.entry_term(a, idx)).collect();
        self.det_term = self.det_part(a);
    }
}

struct Delta {
    idx: usize,
    entry: BigInt,
    minors: Vec<(usize, BigInt)>,
    det: BigInt,
}

/// Vertex order that lists a longest path first, then the remaining
/// vertices by breadth-first search from it.
fn diameter_order(t: &LabelledTree) -> Vec<usize> {
    let n = t.n();
    if n == 1 {
        return vec![1];
    }
    let farthest = |from: usize| -> (usize, Vec<usize>) {
        let mut dist = vec![usize::MAX; n + 1];
        let mut queue = VecDeque::from([from]);
        dist[from] = 0;
        let mut last = from;
        while let Some(x) = queue.pop_front() {
            last = x;
            for &y in t.neighbors(x) {
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        (last, dist)
    };
    let (a, _) = farthest(1);
    let (b, _) = farthest(a);
    let mut order = t.path_between(a, b).expect("a != b for n >= 2").vertices().as_slice().to_vec();
    let mut queue: VecDeque<usize> = order.iter().copied().collect();
    let mut seen = vec![false; n + 1];
    for &v in &order {
        seen[v] = true;
    }
    while let Some(x) = queue.pop_front() {
        for &y in t.neighbors(x) {
            if !seen[y] {
                seen[y] = true;
                order.push(y);
                queue.push_back(y);
            }
        }
    }
    order
}

/// `generate_tp` output with rows and columns permuted so that a longest
/// path of the tree reads as a leading TP block.
fn warm_start(t: &LabelledTree, seed: u64) -> Result<ExactMatrix> {
    let tp = generate_tp(t.n(), seed)?;
    let order = diameter_order(t);
    let mut position = vec![0usize; t.n() + 1];
    for (k, &v) in order.iter().enumerate() {
        position[v] = k;
    }
    ExactMatrix::from_fn(t.n(), |r, c| tp.get(position[r + 1], position[c + 1]).clone())
}

fn satisfied(a: &ExactMatrix, t: &LabelledTree, target: Target) -> Result<bool> {
    let ttp = is_ttp(a, t)?.pass;
    Ok(match target {
        Target::Ttp { hypotheses: false } => ttp,
        Target::Ttp { hypotheses: true } => ttp && check_hypotheses(a, t)?.all_hold,
        Target::NegativeDet => ttp && a.det().is_negative(),
    })
}

fn lattice_bound(x: &Rational, q: usize, ceil: bool) -> Result<i64> {
    let scaled = x * Rational::from_integer(BigInt::one() << q);
    let v = if ceil { scaled.ceil() } else { scaled.floor() };
    v.to_integer().to_i64().filter(|v| v.unsigned_abs() < 1 << 62).ok_or(Error::InvalidConfig("entry_range too wide"))
}

fn anneal(t: &LabelledTree, cfg: &SearchConfig, target: Target) -> Result<SearchOutcome> {
    cfg.validate()?;
    let mut outcome = SearchOutcome {
        found: false,
        matrix: None,
        evaluations: 0,
        final_score: None,
        hypotheses_hold: None,
        trace: Vec::new(),
    };
    if cfg.budget == 0 {
        return Ok(outcome);
    }
    let n = t.n();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    // generate_tp denominators divide 4^(2(n-1)).
    let q = QUANT_BITS.max(4 * (n - 1));
    let mut state = LatticeMatrix::from_exact(&warm_start(t, rng.gen())?, q);
    let lo = lattice_bound(&cfg.entry_range.0, state.q, true)?.max(1);
    let hi = lattice_bound(&cfg.entry_range.1, state.q, false)?;
    let mut objective = Objective::new(t, target, &state);
    let denominator = objective.denominator();
    let as_rational = |s: &BigInt| Rational::new(s.clone(), denominator.clone());
    let as_f64 = |s: &BigInt| as_rational(s).to_f64().unwrap_or(f64::INFINITY);

    let mut score = objective.total();
    outcome.evaluations = 1;
    outcome.trace.push(TracePoint { evaluations: 1, score: as_rational(&score) });
    // `best` is global; `epoch` is the best since the last fresh start and
    // is where plateau restarts return to.
    let mut best = (state.nums.clone(), score.clone());
    let mut epoch = best.clone();
    let mut found = score.is_zero() || satisfied(&state.to_exact(), t, target)?;

    let base_step = cfg.step_scale.to_f64().unwrap_or(0.5);
    let mut initial_temp = (as_f64(&score) * INITIAL_TEMP_FRACTION).max(1e-9);
    let mut temp = initial_temp;
    let mut step = base_step;
    let (mut stale, mut coolings, mut idle_restarts) = (0u32, 0u32, 0u32);
    let mut epoch_improved = false;

    while !found && outcome.evaluations < cfg.budget {
        let idx = rng.gen_range(0..n * n);
        let mut u = rng.gen_range(-GRID..GRID);
        if u >= 0 {
            u += 1;
        }
        let old = state.nums[idx];
        let factor = 1.0 + step * u as f64 / GRID as f64;
        let proposed = libm::round(old as f64 * factor).clamp(lo as f64, hi as f64) as i64;
        let mut improved = false;
        if proposed != old {
            state.nums[idx] = proposed;
            let delta = objective.rescore(&state, idx);
            let candidate = objective.delta_total(&score, &delta);
            outcome.evaluations += 1;

            let diff = as_f64(&(&candidate - &score));
            let accept = diff <= 0.0 || rng.gen::<f64>() < libm::exp(-diff / temp);
            if accept {
                objective.commit(delta);
                score = candidate;
            } else {
                state.nums[idx] = old;
            }
            if score < epoch.1 {
                epoch = (state.nums.clone(), score.clone());
                improved = true;
                epoch_improved = true;
                if score < best.1 {
                    best = epoch.clone();
                    outcome.trace.push(TracePoint { evaluations: outcome.evaluations, score: as_rational(&score) });
                    found = score.is_zero();
                }
            }
        }
        if improved {
            stale = 0;
            continue;
        }
        stale += 1;
        if stale < PLATEAU {
            continue;
        }
        stale = 0;
        temp *= cfg.anneal;
        step /= 2.0;
        coolings += 1;
        if coolings < COOLINGS_PER_RESTART {
            continue;
        }
        coolings = 0;
        step = base_step;
        idle_restarts = if epoch_improved { 0 } else { idle_restarts + 1 };
        epoch_improved = false;
        if idle_restarts >= IDLE_RESTARTS_PER_FRESH_START {
            idle_restarts = 0;
            state = LatticeMatrix::from_exact(&warm_start(t, rng.gen())?, q);
            objective.reset(&state);
            score = objective.total();
            outcome.evaluations += 1;
            epoch = (state.nums.clone(), score.clone());
            initial_temp = (as_f64(&score) * INITIAL_TEMP_FRACTION).max(1e-9);
            if score < best.1 {
                best = epoch.clone();
                outcome.trace.push(TracePoint { evaluations: outcome.evaluations, score: as_rational(&score) });
                found = score.is_zero();
            }
        } else {
            state.nums = epoch.0.clone();
            score = epoch.1.clone();
            objective.reset(&state);
        }
        temp = initial_temp;
    }

    outcome.final_score = Some(as_rational(&best.1));
    if found {
        state.nums = best.0;
        let matrix = state.to_exact();
        // The objective reaching zero is not taken on trust.
        if satisfied(&matrix, t, target)? {
            outcome.found = true;
            outcome.hypotheses_hold = Some(n >= 2 && check_hypotheses(&matrix, t)?.all_hold);
            outcome.matrix = Some(matrix);
        }
    }
    Ok(outcome)
}

/// Searches for a T-TP matrix by simulated annealing on the violation
/// score, warm-started from a permuted random TP matrix.
pub fn search_ttp(t: &LabelledTree, cfg: &SearchConfig) -> Result<SearchOutcome> {
    anneal(t, cfg, Target::Ttp { hypotheses: cfg.require_hypotheses })
}

/// Searches for a T-TP matrix with negative determinant. Rejects path
/// trees, where every T-TP matrix is permutation similar to a TP matrix.
pub fn hunt_negative_det(t: &LabelledTree, cfg: &SearchConfig) -> Result<SearchOutcome> {
    if t.is_path() {
        return Err(Error::PathTree);
    }
    anneal(t, cfg, Target::NegativeDet)
}
