//! Parsing of command-line inputs: lattices, matrices, class tuples, words.

use std::path::Path;

use serde_json::Value;
use weilform::arith::parse_rat;
use weilform::arith::Rat;
use weilform::lattice::standard;
use weilform::{Case, Error, GroupWord, KElem, Lattice, QMatrix};

use crate::CliError;

/// `--lattice` accepts a lattice document path or a built-in `std:NAME`
/// (`A<n>`, `D<n>`, `E8`, `U`).
pub fn lattice(spec: Option<&str>) -> Result<Lattice, CliError> {
    let spec = spec.ok_or_else(|| CliError::Usage("this command needs --lattice".into()))?;
    if let Some(name) = spec.strip_prefix("std:") {
        return builtin(name).ok_or_else(|| CliError::Usage(format!("unknown built-in lattice {name:?}")));
    }
    let text = read(spec)?;
    Ok(Lattice::load(&text)?)
}

fn builtin(name: &str) -> Option<Lattice> {
    let rank = |s: &str| s.parse::<usize>().ok().filter(|&n| n >= 1);
    match name {
        "E8" => Some(standard::e8()),
        "U" => Some(standard::hyperbolic()),
        _ if name.starts_with('A') => rank(&name[1..]).map(standard::a),
        _ if name.starts_with('D') => rank(&name[1..]).filter(|&n| n >= 2).map(standard::d),
        _ => None,
    }
}

pub fn read(path: &str) -> Result<String, CliError> {
    if !Path::new(path).exists() {
        return Err(CliError::Usage(format!("no such file: {path}")));
    }
    std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{path}: {e}")))
}

fn json(text: &str) -> Result<Value, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Usage(format!("not valid JSON: {e}")))
}

fn rational(v: &Value) -> Result<Rat, CliError> {
    match v {
        Value::Number(n) => Ok(parse_rat(&n.to_string())?),
        Value::String(s) => Ok(parse_rat(s)?),
        _ => Err(CliError::Usage(format!("expected a rational, found {v}"))),
    }
}

/// Square matrix given as JSON rows; entries are rationals (numbers or
/// strings such as `"1/2"`), or `[a, b]` for `a + bω` in Case 2.
pub fn kmatrix(text: &str, case: Case) -> Result<Vec<Vec<KElem>>, CliError> {
    let v = json(text)?;
    let bad = || CliError::Usage("matrix must be a nonempty square JSON array of rows".into());
    let rows = v.as_array().filter(|r| !r.is_empty()).ok_or_else(bad)?;
    let n = rows.len();
    rows.iter()
        .map(|row| {
            let row = row.as_array().filter(|r| r.len() == n).ok_or_else(bad)?;
            row.iter()
                .map(|e| match (case, e) {
                    (Case::Unitary, Value::Array(p)) if p.len() == 2 => Ok(KElem::new(rational(&p[0])?, rational(&p[1])?)),
                    _ => Ok(KElem::from_rat(rational(e)?)),
                })
                .collect()
        })
        .collect()
}

pub fn qmatrix(text: &str) -> Result<QMatrix, CliError> {
    let rows = kmatrix(text, Case::Orthogonal)?;
    Ok(QMatrix::from_rows(rows.into_iter().map(|r| r.into_iter().map(|e| e.a).collect()).collect()))
}

/// Comma-separated class indices.
pub fn classes(text: &str, len: usize, order: usize) -> Result<Vec<usize>, CliError> {
    let mu: Vec<usize> = text
        .split(',')
        .map(|s| s.trim().parse::<usize>().map_err(|_| CliError::Usage(format!("bad class index {s:?}"))))
        .collect::<Result<_, _>>()?;
    if mu.len() != len {
        return Err(CliError::Usage(format!("need {len} class indices, got {}", mu.len())));
    }
    if let Some(m) = mu.iter().find(|&&m| m >= order) {
        return Err(CliError::Usage(format!("class index {m} out of range (|D| = {order})")));
    }
    Ok(mu)
}

/// A group word: a JSON word document (inline or `@path`), or for genus 1
/// a string over `S`, `T`, `t` (= T⁻¹) and `Z` (= −1).
pub fn word(text: &str, case: Case, genus: usize) -> Result<GroupWord, CliError> {
    let text = match text.strip_prefix('@') {
        Some(path) => read(path)?,
        None => text.to_string(),
    };
    let t = text.trim();
    if t.starts_with('[') {
        return Ok(GroupWord::parse(t, case, genus)?);
    }
    if genus != 1 {
        return Err(CliError::Usage("letter words are genus 1 only; pass a JSON word document".into()));
    }
    if let Some(c) = t.chars().find(|c| !"STtZ".contains(*c)) {
        return Err(CliError::Usage(format!("unknown letter {c:?}")));
    }
    Ok(GroupWord::sl2(case, t))
}

pub fn bound(text: Option<&str>) -> Result<Rat, CliError> {
    let text = text.ok_or_else(|| CliError::Usage("this command needs --bound".into()))?;
    let b = parse_rat(text).map_err(|_| CliError::Usage(format!("bad bound {text:?}")))?;
    if b < Rat::from_integer(0.into()) {
        return Err(CliError::Usage("bound must be nonnegative".into()));
    }
    Ok(b)
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}
