//! Subcommand implementations. Each returns a complete [`RunReport`]
//! whose `exit_code` is the process exit status.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;
use ttp_core::exactmat::sylvester_residual;
use ttp_core::search::{hunt_negative_det, search_ttp};
use ttp_core::spectral::verify_theorem;
use ttp_core::tpcheck::is_tp;
use ttp_core::ttp::{check_hypotheses, is_ttp, lemma22_residual_with_adjoint};
use ttp_core::{
    Error as CoreError, ExactMatrix, LabelledTree, OrderedIndexList, Rational, SearchConfig, SpectralConfig,
    TheoremStatus, Witness,
};

use crate::format::{parse_matrix, parse_tree, signs_to_string, write_matrix, FormatError};
use crate::report::{to_value, InputDigest, RunReport, TheoremDto, VerdictDto, WitnessDto};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_HYPOTHESES: i32 = 3;
pub const EXIT_SOLVER: i32 = 4;
pub const EXIT_EXHAUSTED: i32 = 5;

pub const SELFTEST_MAX_N: usize = 8;
pub const SELFTEST_MIN_N: usize = 3;

/// A failure that ends the command with a given exit code.
struct Abort {
    code: i32,
    status: &'static str,
    message: String,
}

impl Abort {
    fn input(message: impl ToString) -> Self {
        Self { code: EXIT_INPUT, status: "input_error", message: message.to_string() }
    }
}

impl From<FormatError> for Abort {
    fn from(e: FormatError) -> Self {
        Abort::input(e)
    }
}

impl From<CoreError> for Abort {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::NoConvergence(_) | CoreError::Singular | CoreError::NonFinite { .. } => {
                Self { code: EXIT_SOLVER, status: "solver_error", message: e.to_string() }
            }
            _ => Abort::input(e),
        }
    }
}

fn finish(mut report: RunReport, start: Instant, result: Result<(), Abort>) -> RunReport {
    if let Err(abort) = result {
        report.exit_code = abort.code;
        report.status = abort.status.to_string();
        report.verdicts = json!({ "error": abort.message });
    }
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    report
}

fn read_input(report: &mut RunReport, role: &str, path: &Path) -> Result<String, Abort> {
    let bytes = fs::read(path).map_err(|e| Abort::input(format!("{}: {e}", path.display())))?;
    report.inputs.insert(role.to_string(), InputDigest::of(path, &bytes));
    String::from_utf8(bytes).map_err(|_| Abort::input(format!("{}: not valid UTF-8", path.display())))
}

fn load_tree(report: &mut RunReport, path: &Path) -> Result<LabelledTree, Abort> {
    let text = read_input(report, "tree", path)?;
    parse_tree(&text).map_err(|e| Abort::input(format!("{}: {e}", path.display())))
}

fn load_matrix(report: &mut RunReport, path: &Path) -> Result<ExactMatrix, Abort> {
    let text = read_input(report, "matrix", path)?;
    parse_matrix(&text).map_err(|e| Abort::input(format!("{}: {e}", path.display())))
}

fn check_dims(a: &ExactMatrix, t: &LabelledTree) -> Result<(), Abort> {
    if a.dim() != t.n() {
        return Err(CoreError::DimensionMismatch { matrix: a.dim(), tree: t.n() }.into());
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathVerdict {
    pub vertices: Vec<usize>,
    pub pass: bool,
    /// Offending minor with rows and columns given as tree vertices.
    pub witness: Option<WitnessDto>,
}

fn path_verdicts(a: &ExactMatrix, t: &LabelledTree) -> Result<Vec<PathVerdict>, Abort> {
    let mut out = Vec::new();
    for path in t.enumerate_paths() {
        let verts = path.vertices();
        let sub = a.submatrix(verts, verts)?;
        let v = is_tp(&sub);
        let label = |xs: &[usize]| xs.iter().map(|&x| verts.as_slice()[x - 1]).collect::<Vec<_>>();
        let witness = v.witness.map(|w| match w {
            Witness::Minor { rows, cols, value, .. } => WitnessDto::Minor {
                rows: label(&rows),
                cols: label(&cols),
                value: value.to_string(),
                path: Some(verts.as_slice().to_vec()),
            },
            other => WitnessDto::from(&other),
        });
        out.push(PathVerdict { vertices: verts.as_slice().to_vec(), pass: v.pass, witness });
    }
    Ok(out)
}

/// `check`: is the matrix totally positive relative to the tree?
pub fn cmd_check(matrix: &Path, tree: &Path) -> RunReport {
    let start = Instant::now();
    let mut report = RunReport::new("check");
    let result = (|| {
        let a = load_matrix(&mut report, matrix)?;
        let t = load_tree(&mut report, tree)?;
        check_dims(&a, &t)?;
        let verdict = is_ttp(&a, &t)?;
        let paths = path_verdicts(&a, &t)?;
        report.exit_code = if verdict.pass { EXIT_OK } else { EXIT_FAILED };
        report.status = if verdict.pass { "ttp" } else { "not_ttp" }.into();
        report.verdicts = json!({ "ttp": to_value(&VerdictDto::from(&verdict)), "paths": to_value(&paths) });
        Ok(())
    })();
    finish(report, start, result)
}

/// `theorem`: hypotheses, exact adjoint sign pattern and eigenvector signing.
pub fn cmd_theorem(matrix: &Path, tree: &Path, tol: f64) -> RunReport {
    let start = Instant::now();
    let mut report = RunReport::new("theorem");
    let result = (|| {
        if !(tol.is_finite() && tol > 0.0) {
            return Err(Abort::input("--tol must be positive and finite"));
        }
        let a = load_matrix(&mut report, matrix)?;
        let t = load_tree(&mut report, tree)?;
        check_dims(&a, &t)?;
        let cfg = SpectralConfig { residual_tol: tol, ..SpectralConfig::default() };
        let verdict = verify_theorem(&a, &t, &cfg)?;
        report.exit_code = match verdict.status {
            TheoremStatus::Confirmed => EXIT_OK,
            TheoremStatus::Falsified => EXIT_FAILED,
            TheoremStatus::HypothesesNotMet => EXIT_HYPOTHESES,
        };
        report.status = crate::report::status_name(verdict.status).into();
        report.verdicts = to_value(&TheoremDto::from(&verdict));
        Ok(())
    })();
    finish(report, start, result)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityFailure {
    pub trial: u64,
    pub matrix: String,
    pub indices: Vec<Vec<usize>>,
    pub residual: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct IdentitySummary {
    pub checked: u64,
    pub nonzero: u64,
    pub first_failure: Option<IdentityFailure>,
}

impl IdentitySummary {
    fn record(&mut self, trial: u64, a: &ExactMatrix, indices: Vec<Vec<usize>>, residual: Rational) {
        self.checked += 1;
        if residual != Rational::default() {
            self.nonzero += 1;
            if self.first_failure.is_none() {
                self.first_failure =
                    Some(IdentityFailure { trial, matrix: write_matrix(a), indices, residual: residual.to_string() });
            }
        }
    }
}

fn random_matrix(n: usize, rng: &mut ChaCha8Rng) -> ExactMatrix {
    ExactMatrix::from_fn(n, |_, _| {
        Rational::new(rng.gen_range(-9i64..=9).into(), rng.gen_range(1i64..=4).into())
    })
    .expect("n is positive")
}

fn random_list(n: usize, k: usize, rng: &mut ChaCha8Rng) -> OrderedIndexList {
    OrderedIndexList::new(sample(rng, n, k).into_iter().map(|i| i + 1).collect()).expect("distinct labels")
}

/// Triples checked per matrix: all of them for small `n`, a sample otherwise.
const SAMPLED_TRIPLES: usize = 24;

fn triples(n: usize, rng: &mut ChaCha8Rng) -> Vec<[usize; 3]> {
    if n * (n - 1) * (n - 2) <= SAMPLED_TRIPLES * 3 {
        let mut all = Vec::new();
        for i in 1..=n {
            for j in (1..=n).filter(|&j| j != i) {
                for k in (1..=n).filter(|&k| k != i && k != j) {
                    all.push([i, j, k]);
                }
            }
        }
        return all;
    }
    (0..SAMPLED_TRIPLES)
        .map(|_| {
            let s = sample(rng, n, 3);
            [s.index(0) + 1, s.index(1) + 1, s.index(2) + 1]
        })
        .collect()
}

/// `selftest`: exact identity residuals on random rational matrices.
/// `corrupt_adjoint` perturbs every adjoint entry as a negative control.
pub fn cmd_selftest(n: usize, trials: u64, seed: u64, corrupt_adjoint: bool) -> RunReport {
    let start = Instant::now();
    let mut report = RunReport::new("selftest");
    report.seed = Some(seed);
    let result = (|| {
        if !(SELFTEST_MIN_N..=SELFTEST_MAX_N).contains(&n) {
            return Err(Abort::input(format!("--n must lie in {SELFTEST_MIN_N}..={SELFTEST_MAX_N}")));
        }
        if trials == 0 {
            return Err(Abort::input("--trials must be at least 1"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut sylvester = IdentitySummary::default();
        let mut lemma = IdentitySummary::default();
        for trial in 0..trials {
            let a = random_matrix(n, &mut rng);
            let k = rng.gen_range(2..=n);
            let alpha = random_list(n, k, &mut rng);
            let beta = random_list(n, k, &mut rng);
            let r = sylvester_residual(&a, &alpha, &beta)?;
            sylvester.record(trial, &a, vec![alpha.into_vec(), beta.into_vec()], r);

            let mut adj = a.adjoint()?;
            if corrupt_adjoint {
                let one = Rational::from_integer(1.into());
                adj = ExactMatrix::from_fn(n, |r, c| adj.get(r, c) + &one)?;
            }
            for [i, j, k] in triples(n, &mut rng) {
                let r = lemma22_residual_with_adjoint(&a, &adj, i, j, k)?;
                lemma.record(trial, &a, vec![vec![i, j, k]], r);
            }
        }
        let clean = sylvester.nonzero == 0 && lemma.nonzero == 0;
        report.exit_code = if clean { EXIT_OK } else { EXIT_FAILED };
        report.status = if clean { "identities_hold" } else { "nonzero_residual" }.into();
        report.verdicts = json!({
            "n": n,
            "trials": trials,
            "corrupt_adjoint": corrupt_adjoint,
            "sylvester": to_value(&sylvester),
            "adjoint_three_term": to_value(&lemma),
        });
        Ok(())
    })();
    finish(report, start, result)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchArgs {
    pub seed: u64,
    pub budget: u64,
    pub negative_det: bool,
    pub hypotheses: bool,
    /// Where to write a found matrix.
    pub out: Option<PathBuf>,
    /// Where to write the `evaluations score` trace.
    pub log: Option<PathBuf>,
}

fn write_file(path: &Path, contents: &str) -> Result<(), Abort> {
    fs::write(path, contents).map_err(|e| Abort::input(format!("{}: {e}", path.display())))
}

/// `search`: looks for a T-TP matrix, or with `negative_det` for a T-TP
/// matrix with negative determinant.
pub fn cmd_search(tree: &Path, args: &SearchArgs) -> RunReport {
    let start = Instant::now();
    let mut report = RunReport::new("search");
    report.seed = Some(args.seed);
    let result = (|| {
        let t = load_tree(&mut report, tree)?;
        let cfg = SearchConfig {
            seed: args.seed,
            budget: args.budget,
            require_hypotheses: args.hypotheses,
            ..SearchConfig::default()
        };
        let outcome = if args.negative_det { hunt_negative_det(&t, &cfg)? } else { search_ttp(&t, &cfg)? };
        if let Some(log) = &args.log {
            let lines: String =
                outcome.trace.iter().map(|p| format!("{} {}\n", p.evaluations, p.score)).collect();
            write_file(log, &lines)?;
        }
        let mut verdicts = json!({
            "mode": if args.negative_det { "negative_det" } else { "ttp" },
            "require_hypotheses": args.hypotheses,
            "budget": args.budget,
            "found": outcome.found,
            "evaluations": outcome.evaluations,
            "final_score": outcome.final_score.as_ref().map(|s| s.to_string()),
            "trace_points": outcome.trace.len(),
        });
        if let Some(a) = &outcome.matrix {
            let text = write_matrix(a);
            if let Some(out) = &args.out {
                write_file(out, &text)?;
            }
            let ttp = is_ttp(a, &t)?;
            let hypotheses = check_hypotheses(a, &t)?;
            verdicts["matrix"] = json!(text);
            verdicts["det"] = json!(hypotheses.det_value.to_string());
            verdicts["ttp"] = to_value(&VerdictDto::from(&ttp));
            verdicts["hypotheses_hold"] = json!(hypotheses.all_hold);
        }
        report.exit_code = if outcome.found { EXIT_OK } else { EXIT_EXHAUSTED };
        report.status = if outcome.found { "found" } else { "budget_exhausted" }.into();
        report.verdicts = verdicts;
        Ok(())
    })();
    finish(report, start, result)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathEntry {
    pub endpoints: [usize; 2],
    pub vertices: Vec<usize>,
}

/// `paths`: every path of the tree and its vertex signing.
pub fn cmd_paths(tree: &Path) -> RunReport {
    let start = Instant::now();
    let mut report = RunReport::new("paths");
    let result = (|| {
        let t = load_tree(&mut report, tree)?;
        let paths: Vec<PathEntry> = t
            .enumerate_paths()
            .iter()
            .map(|p| {
                let v = p.vertices().as_slice();
                PathEntry { endpoints: [v[0], v[v.len() - 1]], vertices: v.to_vec() }
            })
            .collect();
        let sigma = t.signing();
        report.status = "ok".into();
        report.verdicts = json!({
            "n": t.n(),
            "path_count": paths.len(),
            "paths": to_value(&paths),
            "sigma": signs_to_string(sigma.as_slice()),
            "sigma_values": sigma.as_slice(),
        });
        Ok(())
    })();
    finish(report, start, result)
}
