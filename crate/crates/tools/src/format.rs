//! Text formats for matrices and trees.
//!
//! Matrix: first line `n`, then `n` rows of `n` whitespace-separated
//! entries, each `p`, `p/q` or a decimal literal such as `-0.25` or `1.5e-3`.
//! Decimals are converted exactly. Blank lines are ignored.
//!
//! Tree: one edge `u v` per line with 1-based labels. Blank lines and
//! anything after `#` are ignored. The vertex count is the largest label.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{Pow, Zero};
use thiserror::Error;
use ttp_core::{ExactMatrix, LabelledTree, Rational};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("empty input")]
    Empty,
    #[error("expected {expected} rows, found {found}")]
    RowCount { expected: usize, found: usize },
    #[error(transparent)]
    Core(#[from] ttp_core::Error),
}

fn syntax(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Syntax { line, msg: msg.into() }
}

/// Parses `p`, `p/q` or a decimal literal into an exact rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = parse_int(p)?;
        let q: BigInt = parse_int(q)?;
        if q.is_zero() {
            return None;
        }
        return Some(Rational::new(p, q));
    }
    parse_decimal(s)
}

fn parse_int(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix(['+', '-']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

fn parse_decimal(s: &str) -> Option<Rational> {
    let (negative, body) = match s.as_bytes().first()? {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    let (mantissa, exponent) = match body.find(['e', 'E']) {
        Some(pos) => (&body[..pos], Some(&body[pos + 1..])),
        None => (body, None),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let mut num: BigInt = digits.parse().ok()?;
    if negative {
        num = -num;
    }
    let mut exp: i64 = -(frac_part.len() as i64);
    if let Some(e) = exponent {
        let e = parse_int(e)?;
        exp += i64::try_from(e).ok()?;
    }
    let ten = BigInt::from(10u8);
    let scale = ten.pow(exp.unsigned_abs());
    Some(if exp >= 0 {
        Rational::from_integer(num * scale)
    } else {
        Rational::new(num, scale)
    })
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
}

pub fn parse_matrix(text: &str) -> Result<ExactMatrix, FormatError> {
    let mut lines = content_lines(text);
    let (first, header) = lines.next().ok_or(FormatError::Empty)?;
    let n: usize = header.parse().map_err(|_| syntax(first, format!("bad dimension `{header}`")))?;
    if n == 0 {
        return Err(syntax(first, "dimension must be positive"));
    }
    let mut rows = Vec::with_capacity(n);
    for (line, l) in lines {
        if rows.len() == n {
            return Err(syntax(line, "trailing content after last row"));
        }
        let row = l
            .split_whitespace()
            .map(|tok| parse_rational(tok).ok_or_else(|| syntax(line, format!("bad entry `{tok}`"))))
            .collect::<Result<Vec<_>, _>>()?;
        if row.len() != n {
            return Err(syntax(line, format!("expected {n} entries, found {}", row.len())));
        }
        rows.push(row);
    }
    if rows.len() != n {
        return Err(FormatError::RowCount { expected: n, found: rows.len() });
    }
    Ok(ExactMatrix::from_rows(rows)?)
}

pub fn write_matrix(m: &ExactMatrix) -> String {
    let mut out = format!("{}\n", m.dim());
    for row in m.rows() {
        let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
        let _ = writeln!(out, "{}", cells.join(" "));
    }
    out
}

pub fn parse_tree(text: &str) -> Result<LabelledTree, FormatError> {
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let l = raw.split('#').next().unwrap_or("").trim();
        if l.is_empty() {
            continue;
        }
        let fields: Vec<&str> = l.split_whitespace().collect();
        let [u, v] = fields[..] else {
            return Err(syntax(line, "expected `u v`"));
        };
        let label = |s: &str| s.parse::<usize>().map_err(|_| syntax(line, format!("bad vertex `{s}`")));
        edges.push((label(u)?, label(v)?));
    }
    if edges.is_empty() {
        return Err(FormatError::Empty);
    }
    Ok(LabelledTree::from_edge_list(&edges)?)
}

pub fn write_tree(t: &LabelledTree) -> String {
    t.edges().iter().map(|(u, v)| format!("{u} {v}\n")).collect()
}

/// `(+,-,+)` style rendering of a signing.
pub fn signs_to_string(signs: &[i8]) -> String {
    let cells: Vec<&str> = signs.iter().map(|&s| if s > 0 { "+" } else { "-" }).collect();
    format!("({})", cells.join(","))
}
