//! Text formats for filtered complexes and simplicial maps.
//!
//! Complex files hold one declaration per line, `#` starting a comment:
//!
//! ```text
//! v <id> <value>          vertex with its filtration value
//! s <id> <id> ... [value] simplex, optionally with an explicit value
//! ```
//!
//! Without explicit values the filtration is the lower-star extension of the
//! vertex values and every face of a listed simplex is added automatically.
//! With explicit values every simplex, faces included, must be listed with a
//! value (a vertex may take its value from its `v` line). A trailing token is
//! read as a value when it is not a plain non-negative integer, so explicit
//! integer values are written `2.0` or `2/1`.
//!
//! Map files hold lines `m <source-id> <target-id>`.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::complex::{ComplexError, Simplex, SimplicialComplex, SimplicialMap};
use crate::filtration::{FilteredComplex, FiltrationError, FiltrationFunction};
use crate::scalar::ExtendedRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InputError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Filtration(#[from] FiltrationError),
}

impl InputError {
    fn at(line: usize, message: impl Into<String>) -> Self {
        Self::Syntax {
            line,
            message: message.into(),
        }
    }
}

fn is_vertex_token(t: &str) -> bool {
    !t.is_empty() && t.chars().all(|c| c.is_ascii_digit())
}

fn parse_id(t: &str, line: usize) -> Result<usize, InputError> {
    t.parse()
        .map_err(|_| InputError::at(line, format!("`{t}` is not a vertex id")))
}

fn parse_value(t: &str, line: usize) -> Result<ExtendedRational, InputError> {
    let v: ExtendedRational = t.parse().map_err(|e| InputError::at(line, format!("{e}")))?;
    if !v.is_finite() {
        return Err(InputError::at(line, "filtration values must be finite"));
    }
    Ok(v)
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = line.split_whitespace().collect();
        (!tokens.is_empty()).then_some((i + 1, tokens))
    })
}

pub fn parse_complex(text: &str) -> Result<FilteredComplex, InputError> {
    let mut vertex_values: BTreeMap<usize, (ExtendedRational, usize)> = BTreeMap::new();
    let mut simplices: Vec<(Simplex, Option<ExtendedRational>, usize)> = Vec::new();
    for (line, tokens) in content_lines(text) {
        match tokens[0] {
            "v" => {
                if tokens.len() != 3 {
                    return Err(InputError::at(line, "expected `v <id> <value>`"));
                }
                let id = parse_id(tokens[1], line)?;
                let value = parse_value(tokens[2], line)?;
                if vertex_values.insert(id, (value, line)).is_some() {
                    return Err(InputError::at(line, format!("vertex {id} declared twice")));
                }
            }
            "s" => {
                let mut ids = &tokens[1..];
                let mut value = None;
                if let Some(last) = ids.last() {
                    if !is_vertex_token(last) {
                        value = Some(parse_value(last, line)?);
                        ids = &ids[..ids.len() - 1];
                    }
                }
                if ids.is_empty() {
                    return Err(InputError::at(line, "a simplex needs at least one vertex"));
                }
                let mut s = ids
                    .iter()
                    .map(|t| parse_id(t, line))
                    .collect::<Result<Vec<_>, _>>()?;
                s.sort_unstable();
                if s.windows(2).any(|w| w[0] == w[1]) {
                    return Err(InputError::at(line, "simplex repeats a vertex"));
                }
                simplices.push((s, value, line));
            }
            other => {
                return Err(InputError::at(
                    line,
                    format!("unknown declaration `{other}`, expected `v` or `s`"),
                ))
            }
        }
    }

    let explicit = simplices.iter().filter(|(_, v, _)| v.is_some()).count();
    if explicit == 0 {
        for (s, _, line) in &simplices {
            if let Some(v) = s.iter().find(|v| !vertex_values.contains_key(v)) {
                return Err(InputError::at(*line, format!("vertex {v} has no `v` declaration")));
            }
        }
        let all = vertex_values
            .keys()
            .map(|&v| vec![v])
            .chain(simplices.into_iter().map(|(s, _, _)| s));
        let complex = SimplicialComplex::closure(all)?;
        let values = vertex_values.into_iter().map(|(k, (v, _))| (k, v)).collect();
        return Ok(FilteredComplex::lower_star(complex, values)?);
    }
    if let Some((_, _, line)) = simplices.iter().find(|(_, v, _)| v.is_none()) {
        return Err(InputError::at(
            *line,
            "simplex has no value but other simplices do; explicit values are needed everywhere",
        ));
    }
    let mut values: BTreeMap<Simplex, ExtendedRational> = BTreeMap::new();
    for (id, (v, _)) in vertex_values {
        values.insert(vec![id], v);
    }
    for (s, v, line) in simplices {
        let v = v.expect("checked above");
        if let Some(old) = values.insert(s.clone(), v.clone()) {
            if old != v {
                return Err(InputError::at(line, "simplex declared twice with different values"));
            }
        }
    }
    let complex = SimplicialComplex::new(values.keys().cloned())?;
    Ok(FilteredComplex::new(
        complex,
        FiltrationFunction::Explicit(values),
    )?)
}

pub fn parse_map_assignment(text: &str) -> Result<BTreeMap<usize, usize>, InputError> {
    let mut assignment = BTreeMap::new();
    for (line, tokens) in content_lines(text) {
        if tokens.len() != 3 || tokens[0] != "m" {
            return Err(InputError::at(line, "expected `m <source-id> <target-id>`"));
        }
        let src = parse_id(tokens[1], line)?;
        let dst = parse_id(tokens[2], line)?;
        if assignment.insert(src, dst).is_some() {
            return Err(InputError::at(line, format!("vertex {src} mapped twice")));
        }
    }
    Ok(assignment)
}

pub fn parse_map(
    text: &str,
    source: &SimplicialComplex,
    target: &SimplicialComplex,
) -> Result<SimplicialMap, InputError> {
    let assignment = parse_map_assignment(text)?;
    Ok(SimplicialMap::new(source.clone(), target.clone(), assignment)?)
}
