//! Line-oriented text format for digraphs.
//!
//! ```text
//! n m
//! u v
//! ...
//! ```
//!
//! Vertices are 0-based. Output lists arcs in increasing lexicographic order;
//! input accepts any order. Lines starting with `#` and blank lines are ignored.

use crate::digraph::{Arc, Digraph};
use crate::error::{Error, Result};

/// Serializes in canonical arc order, newline-terminated.
pub fn to_text(d: &Digraph) -> String {
    let mut s = format!("{} {}\n", d.n(), d.arc_count());
    for (u, v) in d.arcs() {
        s.push_str(&format!("{u} {v}\n"));
    }
    s
}

fn err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Splits a line into whitespace separated tokens with 1-based start columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((s + 1, &line[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

fn two_numbers(lineno: usize, line: &str) -> Result<[(usize, usize); 2]> {
    let toks = tokens(line);
    if toks.len() != 2 {
        let col = toks.get(2).map(|t| t.0).unwrap_or(line.len() + 1);
        return Err(err(
            lineno,
            col,
            format!("expected two integers, found {} fields", toks.len()),
        ));
    }
    let mut vals = [(0, 0); 2];
    for (slot, (col, tok)) in vals.iter_mut().zip(toks) {
        let v = tok
            .parse::<usize>()
            .map_err(|_| err(lineno, col, format!("not a non-negative integer: {tok:?}")))?;
        *slot = (v, col);
    }
    Ok(vals)
}

/// Parses the text format.
pub fn parse(text: &str) -> Result<Digraph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| {
            let t = l.trim_start();
            !t.is_empty() && !t.starts_with('#')
        });
    let (hline, header) = lines
        .next()
        .ok_or_else(|| err(1, 1, "missing header `n m`"))?;
    let [(n, ncol), (m, _)] = two_numbers(hline, header)?;
    if n == 0 {
        return Err(err(hline, ncol, "vertex count must be positive"));
    }
    let mut d = Digraph::empty(n).map_err(|e| err(hline, ncol, e.to_string()))?;
    let mut seen = 0;
    for (lineno, line) in lines {
        if seen == m {
            return Err(err(lineno, 1, format!("more than {m} arc lines")));
        }
        let [(u, ucol), (v, vcol)] = two_numbers(lineno, line)?;
        if u >= n {
            return Err(err(
                lineno,
                ucol,
                format!("endpoint {u} out of range 0..{n}"),
            ));
        }
        if v >= n {
            return Err(err(
                lineno,
                vcol,
                format!("endpoint {v} out of range 0..{n}"),
            ));
        }
        if u == v {
            return Err(err(lineno, ucol, format!("loop at vertex {u}")));
        }
        d.insert(u, v);
        seen += 1;
    }
    if seen != m {
        return Err(err(
            text.lines().count().max(1),
            1,
            format!("expected {m} arc lines, found {seen}"),
        ));
    }
    Ok(d)
}

/// Formats an arc list as `u->v` tokens separated by spaces.
pub fn arcs_to_string(arcs: &[Arc]) -> String {
    arcs.iter()
        .map(|(u, v)| format!("{u}->{v}"))
        .collect::<Vec<_>>()
        .join(" ")
}
