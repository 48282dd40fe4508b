//! Acceptance suite. Prints one line per criterion and exits non-zero if
//! any criterion fails.

#[path = "../../core/tests/common/mod.rs"]
mod oracle;

use std::fs;
use std::time::{Duration, Instant};

use num_traits::{Signed, Zero};
use oracle::{det_laplace, extreme_real_roots, q, qq, to_rows, tp_by_definition};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ttp_core::exactmat::sylvester_residual;
use ttp_core::search::{generate_tp, hunt_negative_det, search_ttp};
use ttp_core::spectral::{largest_eigenpair, signing_verdict, smallest_eigenpair, verify_theorem};
use ttp_core::tpcheck::{is_tp, is_tp_bruteforce};
use ttp_core::ttp::{adjoint_sign_check, check_hypotheses, is_ttp, lemma22_residual};
use ttp_core::{
    ExactMatrix, FloatMatrix, LabelledTree, OrderedIndexList, SearchConfig, SpectralConfig, TheoremStatus,
};
use ttp_tools::commands::{cmd_search, SearchArgs};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn int_matrix(n: usize, lo: i64, hi: i64, rng: &mut ChaCha8Rng) -> ExactMatrix {
    ExactMatrix::from_fn(n, |_, _| q(rng.gen_range(lo..=hi))).unwrap()
}

fn rational_matrix(n: usize, rng: &mut ChaCha8Rng) -> ExactMatrix {
    ExactMatrix::from_fn(n, |_, _| qq(rng.gen_range(-9..=9), rng.gen_range(1..=6))).unwrap()
}

fn ordered(n: usize, k: usize, rng: &mut ChaCha8Rng) -> OrderedIndexList {
    OrderedIndexList::new(sample(rng, n, k).into_iter().map(|i| i + 1).collect()).unwrap()
}

fn sylvester() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let (mut checked, mut nonzero) = (0, 0);
    for n in 4..=6 {
        for _ in 0..200 {
            let a = int_matrix(n, -9, 9, &mut rng);
            let k = rng.gen_range(2..=n);
            let (alpha, beta) = (ordered(n, k, &mut rng), ordered(n, k, &mut rng));
            checked += 1;
            nonzero += !sylvester_residual(&a, &alpha, &beta).unwrap().is_zero() as u32;
        }
    }
    outcome(nonzero == 0, format!("{checked} residuals, {nonzero} nonzero"))
}

fn three_term() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let (mut checked, mut nonzero) = (0u64, 0u64);
    for (n, count) in [(5, 100), (7, 25)] {
        for _ in 0..count {
            let a = int_matrix(n, -9, 9, &mut rng);
            for i in 1..=n {
                for j in (1..=n).filter(|&j| j != i) {
                    for k in (1..=n).filter(|&k| k != i && k != j) {
                        checked += 1;
                        nonzero += !lemma22_residual(&a, i, j, k).unwrap().is_zero() as u64;
                    }
                }
            }
        }
    }
    outcome(nonzero == 0, format!("{checked} residuals over all ordered triples, {nonzero} nonzero"))
}

fn fekete() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let compare = |a: &ExactMatrix| -> (bool, bool) {
        let brute = is_tp_bruteforce(a).unwrap().pass;
        (brute, is_tp(a).pass != brute)
    };
    let (mut disagree, mut total) = (0, 0);
    let mut random_tp = 0;
    for _ in 0..500 {
        let (tp, differs) = compare(&int_matrix(4, -2, 9, &mut rng));
        total += 1;
        random_tp += tp as u32;
        disagree += differs as u32;
    }
    let mut generated_tp = 0;
    for n in [4, 5] {
        for seed in 0..100 {
            let (tp, differs) = compare(&generate_tp(n, seed).unwrap());
            total += 1;
            generated_tp += tp as u32;
            disagree += differs as u32;
        }
    }
    let generated_ok = generated_tp == 200;
    outcome(
        disagree == 0 && generated_ok,
        format!("{total} matrices, {disagree} disagreements, {random_tp} random TP, generated all TP: {generated_ok}"),
    )
}

fn adjoint_contract() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    let mut bad = 0;
    for _ in 0..100 {
        let a = rational_matrix(5, &mut rng);
        let expected = ExactMatrix::identity(5).unwrap().scale(&a.det());
        bad += (a.mul(&a.adjoint().unwrap()).unwrap() != expected) as u32;
    }
    outcome(bad == 0, format!("100 matrices, {bad} violations"))
}

fn path_theorem() -> Outcome {
    let cfg = SpectralConfig::default();
    let mut failures = Vec::new();
    let mut checked = 0;
    for (n, count) in [(5usize, 100u64), (6, 25)] {
        let t = LabelledTree::natural_path(n).unwrap();
        let sigma = t.signing();
        for seed in 0..count {
            checked += 1;
            let a = generate_tp(n, seed).unwrap();
            let hyp = check_hypotheses(&a, &t).unwrap();
            let pattern = adjoint_sign_check(&a, &t).unwrap();
            let ok = match smallest_eigenpair(&a, &cfg) {
                Ok(pair) => {
                    let bound = 1e-10 * FloatMatrix::from_exact(&a).frobenius_norm();
                    hyp.all_hold
                        && pattern.is_clean()
                        && pair.simple
                        && pair.residual <= bound
                        && signing_verdict(&pair.vector, &sigma, cfg.zero_tol).pass
                }
                Err(_) => false,
            };
            if !ok {
                failures.push(format!("n={n} seed={seed}"));
            }
        }
    }
    outcome(failures.is_empty(), format!("{checked} instances, failures: {failures:?}"))
}

fn star(n: usize) -> LabelledTree {
    LabelledTree::star(n).unwrap()
}

fn spider6() -> LabelledTree {
    LabelledTree::from_edges(6, &[(1, 2), (2, 3), (1, 4), (4, 5), (1, 6)]).unwrap()
}

const SEARCH_BUDGET: u64 = 1_000_000;
const INSTANCES_PER_TREE: usize = 10;
const MAX_SEEDS_PER_TREE: u64 = 40;

fn general_trees() -> Outcome {
    let spectral = SpectralConfig::default();
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, t) in [("star4", star(4)), ("star5", star(5)), ("spider6", spider6())] {
        let (mut found, mut confirmed, mut evals, mut seeds) = (0usize, 0usize, 0u64, 0u64);
        let mut falsified = Vec::new();
        while found < INSTANCES_PER_TREE && seeds < MAX_SEEDS_PER_TREE {
            let cfg =
                SearchConfig { seed: seeds, budget: SEARCH_BUDGET, require_hypotheses: true, ..SearchConfig::default() };
            seeds += 1;
            let out = search_ttp(&t, &cfg).unwrap();
            evals += out.evaluations;
            let Some(a) = out.matrix else { continue };
            if !check_hypotheses(&a, &t).unwrap().all_hold {
                continue;
            }
            found += 1;
            let clean = adjoint_sign_check(&a, &t).unwrap().is_clean();
            let verdict = verify_theorem(&a, &t, &spectral).unwrap();
            if clean && verdict.status == TheoremStatus::Confirmed {
                confirmed += 1;
            } else {
                falsified.push(format!("seed {}: {a}", seeds - 1));
            }
        }
        pass &= found >= INSTANCES_PER_TREE && falsified.is_empty();
        parts.push(format!("{name}: {found} found, {confirmed} confirmed, {seeds} seeds, {evals} evaluations"));
        for f in falsified {
            parts.push(format!("FALSIFICATION {name} {f}"));
        }
    }
    outcome(pass, parts.join("; "))
}

fn rel_close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs())
}

fn eigen_oracle() -> Outcome {
    let cfg = SpectralConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(107);
    let mut mats = Vec::new();
    for seed in 0..25u64 {
        mats.push(generate_tp(2 + seed as usize % 5, seed).unwrap());
    }
    while mats.len() < 50 {
        let n = rng.gen_range(2..=6);
        let mut a = int_matrix(n, 1, 9, &mut rng);
        for r in 0..n {
            for c in 0..r {
                a.set(r, c, a.get(c, r).clone());
            }
        }
        if !a.det().is_zero() {
            mats.push(a);
        }
    }
    let mut bad = Vec::new();
    for (idx, a) in mats.iter().enumerate() {
        let Some((lo, hi)) = extreme_real_roots(&to_rows(a), 2000, 1e-12) else {
            bad.push(format!("#{idx}: oracle found no root"));
            continue;
        };
        let small = smallest_eigenpair(a, &cfg).map(|p| p.value);
        let large = largest_eigenpair(&FloatMatrix::from_exact(a), &cfg).map(|p| p.value);
        match (small, large) {
            (Ok(s), Ok(l)) if rel_close(s, lo) && rel_close(l, hi) => {}
            other => bad.push(format!("#{idx}: solver {other:?} oracle ({lo}, {hi})")),
        }
    }
    outcome(bad.is_empty(), format!("{} matrices, mismatches: {bad:?}", mats.len()))
}

fn determinism() -> Outcome {
    let dir = tempfile::TempDir::new().unwrap();
    let tree = dir.path().join("star5.txt");
    fs::write(&tree, "1 2\n1 3\n1 4\n1 5\n").unwrap();
    let mut runs = Vec::new();
    for k in 0..2 {
        let args = SearchArgs {
            seed: 2024,
            budget: 100_000,
            negative_det: false,
            hypotheses: false,
            out: Some(dir.path().join(format!("found{k}.txt"))),
            log: Some(dir.path().join(format!("trace{k}.txt"))),
        };
        let mut report = cmd_search(&tree, &args);
        report.elapsed_ms = 0;
        let matrix = fs::read(args.out.unwrap()).unwrap_or_default();
        let log = fs::read(args.log.unwrap()).unwrap_or_default();
        runs.push((report.exit_code, report.to_json().into_bytes(), matrix, log));
    }
    let same = runs[0] == runs[1];
    outcome(same, format!("exit code {}, report/matrix/log byte-identical: {same}", runs[0].0))
}

fn negative_det_hunt() -> Outcome {
    let t = star(4);
    let cfg = SearchConfig { seed: 0, budget: SEARCH_BUDGET, ..SearchConfig::default() };
    let out = hunt_negative_det(&t, &cfg).unwrap();
    if !out.found {
        return outcome(out.evaluations <= SEARCH_BUDGET, format!("budget exhausted after {}", out.evaluations));
    }
    let a = out.matrix.unwrap();
    let det = det_laplace(&to_rows(&a));
    let blocks_tp = t.enumerate_paths().iter().all(|p| {
        let idx: Vec<usize> = p.vertices().as_slice().iter().map(|v| v - 1).collect();
        let rows = to_rows(&a);
        tp_by_definition(&idx.iter().map(|&i| idx.iter().map(|&j| rows[i][j].clone()).collect()).collect::<Vec<_>>())
    });
    let ttp = is_ttp(&a, &t).unwrap().pass;
    outcome(
        ttp && blocks_tp && det.is_negative(),
        format!("found after {} evaluations, det = {det}, T-TP: {ttp}, oracle T-TP: {blocks_tp}", out.evaluations),
    )
}

type Criterion = (u32, &'static str, fn() -> Outcome, Duration);

fn main() {
    let criteria: [Criterion; 9] = [
        (1, "Sylvester identity", sylvester, Duration::from_secs(10)),
        (2, "three-term adjoint identity", three_term, Duration::from_secs(60)),
        (3, "Fekete criterion vs brute force", fekete, Duration::from_secs(60)),
        (4, "adjoint contract", adjoint_contract, Duration::MAX),
        (5, "path-tree theorem", path_theorem, Duration::from_secs(120)),
        (6, "general-tree theorem", general_trees, Duration::from_secs(900)),
        (7, "eigen-solver oracle", eigen_oracle, Duration::MAX),
        (8, "search determinism", determinism, Duration::MAX),
        (9, "negative-determinant hunt", negative_det_hunt, Duration::MAX),
    ];
    let filter: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (id, name, run, limit) in criteria {
        if !filter.is_empty() && !filter.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let Outcome { pass, detail } = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= limit;
        let pass = pass && in_time;
        failed += !pass as u32;
        let timing = if in_time { String::new() } else { format!(" (over time limit {limit:?})") };
        println!(
            "acceptance {id} {name}: {} [{:.1} s]{timing} {detail}",
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
    }
    if failed > 0 {
        println!("acceptance: {failed} criteria failed");
        std::process::exit(1);
    }
    println!("acceptance: all criteria passed");
}
