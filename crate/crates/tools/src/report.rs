//! JSON run reports.
//!
//! Schema (all keys always present, in this order):
//!
//! ```text
//! {
//!   "command":      string,
//!   "tool_version": string,
//!   "seed":         integer | null,
//!   "inputs":       { "<role>": { "path": string, "sha256": hex string } },
//!   "exit_code":    integer,
//!   "status":       string,
//!   "verdicts":     object, command specific,
//!   "elapsed_ms":   integer
//! }
//! ```
//!
//! Rationals are written as `"p"` or `"p/q"` strings. Everything except
//! `elapsed_ms` is a deterministic function of the inputs and the seed.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use ttp_core::spectral::EigenPair;
use ttp_core::ttp::{ClassSummary, IndexClass, MismatchKind, SignMismatch};
use ttp_core::{HypothesisReport, SignPatternReport, TheoremStatus, TheoremVerdict, VerdictReport, Witness};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

impl InputDigest {
    pub fn of(path: &Path, bytes: &[u8]) -> Self {
        Self { path: path.display().to_string(), sha256: hex::encode(Sha256::digest(bytes)) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub tool_version: String,
    pub seed: Option<u64>,
    pub inputs: BTreeMap<String, InputDigest>,
    pub exit_code: i32,
    pub status: String,
    pub verdicts: serde_json::Value,
    pub elapsed_ms: u64,
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            seed: None,
            inputs: BTreeMap::new(),
            exit_code: 0,
            status: String::new(),
            verdicts: serde_json::Value::Null,
            elapsed_ms: 0,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }
}

pub fn to_value<T: Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("report section serializes")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WitnessDto {
    Minor { rows: Vec<usize>, cols: Vec<usize>, value: String, path: Option<Vec<usize>> },
    AdjointEntry { row: usize, col: usize, value: String },
    Vertex { vertex: usize, component: f64, expected_sign: i8 },
}

impl From<&Witness> for WitnessDto {
    fn from(w: &Witness) -> Self {
        match w {
            Witness::Minor { rows, cols, value, path } => WitnessDto::Minor {
                rows: rows.clone(),
                cols: cols.clone(),
                value: value.to_string(),
                path: path.clone(),
            },
            Witness::AdjointEntry { row, col, value } => {
                WitnessDto::AdjointEntry { row: *row, col: *col, value: value.to_string() }
            }
            Witness::Vertex { vertex, component, expected_sign } => {
                WitnessDto::Vertex { vertex: *vertex, component: *component, expected_sign: *expected_sign }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictDto {
    pub pass: bool,
    pub checked: u64,
    pub witness: Option<WitnessDto>,
}

impl From<&VerdictReport> for VerdictDto {
    fn from(v: &VerdictReport) -> Self {
        Self { pass: v.pass, checked: v.checked, witness: v.witness.as_ref().map(WitnessDto::from) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypothesesDto {
    pub all_hold: bool,
    pub is_ttp: VerdictDto,
    pub det: String,
    pub det_positive: bool,
    /// Keyed by pendant vertex; each verdict is the P-matrix check of the
    /// matrix with that vertex deleted, witnesses in original labels.
    pub pendant_deleted: BTreeMap<usize, VerdictDto>,
}

impl From<&HypothesisReport> for HypothesesDto {
    fn from(h: &HypothesisReport) -> Self {
        Self {
            all_hold: h.all_hold,
            is_ttp: (&h.is_ttp).into(),
            det: h.det_value.to_string(),
            det_positive: h.det_positive,
            pendant_deleted: h.pendant_reports.iter().map(|(k, v)| (*k, v.into())).collect(),
        }
    }
}

fn class_name(c: IndexClass) -> &'static str {
    match c {
        IndexClass::PendantPendant => "pendant_pendant",
        IndexClass::PendantOther => "pendant_other",
        IndexClass::OtherOther => "other_other",
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MismatchDto {
    pub row: usize,
    pub col: usize,
    pub kind: String,
    pub class: String,
}

impl From<&SignMismatch> for MismatchDto {
    fn from(m: &SignMismatch) -> Self {
        let kind = match m.kind {
            MismatchKind::WrongSign => "wrong_sign",
            MismatchKind::Zero => "zero",
        };
        Self { row: m.row, col: m.col, kind: kind.into(), class: class_name(m.class).into() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassDto {
    pub checked: usize,
    pub mismatches: usize,
}

impl From<&ClassSummary> for ClassDto {
    fn from(c: &ClassSummary) -> Self {
        Self { checked: c.checked, mismatches: c.mismatches }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignPatternDto {
    pub clean: bool,
    pub adjoint_signs: Vec<Vec<i8>>,
    pub expected_signs: Vec<Vec<i8>>,
    pub mismatches: Vec<MismatchDto>,
    pub classes: BTreeMap<String, ClassDto>,
}

impl From<&SignPatternReport> for SignPatternDto {
    fn from(s: &SignPatternReport) -> Self {
        Self {
            clean: s.is_clean(),
            adjoint_signs: s.entry_signs.clone(),
            expected_signs: s.expected.clone(),
            mismatches: s.mismatches.iter().map(Into::into).collect(),
            classes: s.classes.iter().map(|(k, v)| (class_name(*k).to_string(), v.into())).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenPairDto {
    pub value: f64,
    pub vector: Vec<f64>,
    pub residual: f64,
    pub simple: bool,
}

impl From<&EigenPair> for EigenPairDto {
    fn from(e: &EigenPair) -> Self {
        Self { value: e.value, vector: e.vector.clone(), residual: e.residual, simple: e.simple }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremDto {
    pub status: String,
    pub hypotheses: HypothesesDto,
    pub sign_pattern: Option<SignPatternDto>,
    pub eigenpair: Option<EigenPairDto>,
    pub signing: Option<VerdictDto>,
    pub spectral_failure: Option<String>,
    pub routes_agree: Option<bool>,
}

pub fn status_name(s: TheoremStatus) -> &'static str {
    match s {
        TheoremStatus::HypothesesNotMet => "hypotheses_not_met",
        TheoremStatus::Confirmed => "confirmed",
        TheoremStatus::Falsified => "falsified",
    }
}

impl From<&TheoremVerdict> for TheoremDto {
    fn from(t: &TheoremVerdict) -> Self {
        Self {
            status: status_name(t.status).into(),
            hypotheses: (&t.hypotheses).into(),
            sign_pattern: t.sign_pattern.as_ref().map(Into::into),
            eigenpair: t.eigenpair.as_ref().map(Into::into),
            signing: t.signing.as_ref().map(Into::into),
            spectral_failure: t.spectral_failure.as_ref().map(|e| e.to_string()),
            routes_agree: t.routes_agree,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ttp_core::{ExactMatrix, LabelledTree};

    #[test]
    fn theorem_report_round_trips() {
        let a = ExactMatrix::from_int_rows(&[[1, 1, 1], [1, 2, 3], [1, 3, 6]]).unwrap();
        let t = LabelledTree::natural_path(3).unwrap();
        let v = ttp_core::spectral::verify_theorem(&a, &t, &Default::default()).unwrap();
        let mut r = RunReport::new("theorem");
        r.seed = Some(7);
        r.inputs.insert("matrix".into(), InputDigest::of(Path::new("m.txt"), b"3\n"));
        r.verdicts = to_value(&TheoremDto::from(&v));
        r.elapsed_ms = 12;
        let json = r.to_json();
        let back = RunReport::from_json(&json).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.to_json(), json);
        let dto: TheoremDto = serde_json::from_value(back.verdicts).unwrap();
        assert_eq!(dto.status, "confirmed");
    }

    #[test]
    fn key_order_is_stable() {
        let json = RunReport::new("paths").to_json();
        let keys = ["command", "tool_version", "seed", "inputs", "exit_code", "status", "verdicts", "elapsed_ms"];
        let pos: Vec<usize> = keys.iter().map(|k| json.find(&format!("\"{k}\"")).unwrap()).collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn digest_is_sha256() {
        let d = InputDigest::of(Path::new("x"), b"abc");
        assert_eq!(d.sha256, "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }
}
