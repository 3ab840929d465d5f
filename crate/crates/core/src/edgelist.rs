//! Plain-text edge lists.
//!
//! ```text
//! # comment lines and blank lines are ignored
//! n m
//! u v      (m lines, 0 <= u, v < n)
//! ```

use std::collections::HashSet;
use std::path::Path;

use crate::error::{Error, ParseError, Result};
use crate::graph::Graph;

pub fn read_edge_list(path: &Path) -> Result<Graph> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_edge_list(&text, Some(path))
}

pub fn parse_edge_list(text: &str, path: Option<&Path>) -> Result<Graph> {
    let fail = |line: usize, reason: String| -> Error {
        Error::Parse(ParseError {
            path: path.map(Path::to_path_buf),
            line,
            reason,
        })
    };

    let mut lines = text
        .lines()
        .enumerate()
        .map(|(idx, l)| (idx + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (header_line, header) = lines
        .next()
        .ok_or_else(|| fail(0, "missing header line `n m`".into()))?;
    let (n, m) = parse_pair(header).map_err(|reason| fail(header_line, format!("header: {reason}")))?;
    if n == 0 {
        return Err(fail(header_line, "vertex count must be positive".into()));
    }

    let mut edges = Vec::with_capacity(m);
    let mut seen = HashSet::with_capacity(m);
    let mut last_line = header_line;
    for (line_no, line) in lines {
        last_line = line_no;
        if edges.len() == m {
            return Err(fail(line_no, format!("more than the declared {m} edges")));
        }
        let (u, v) = parse_pair(line).map_err(|reason| fail(line_no, reason))?;
        if u >= n || v >= n {
            return Err(fail(line_no, format!("vertex out of range 0..{n} in edge `{u} {v}`")));
        }
        if u == v {
            return Err(fail(line_no, format!("loop at vertex {u}")));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(fail(line_no, format!("duplicate edge `{u} {v}`")));
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(fail(
            last_line,
            format!("expected {m} edges, found {}", edges.len()),
        ));
    }
    Graph::from_edges(n, &edges)
}

fn parse_pair(line: &str) -> std::result::Result<(usize, usize), String> {
    let mut tokens = line.split_whitespace();
    let mut next = |what: &str| -> std::result::Result<usize, String> {
        let tok = tokens.next().ok_or_else(|| format!("expected two integers, missing {what}"))?;
        tok.parse::<usize>()
            .map_err(|_| format!("`{tok}` is not a nonnegative integer"))
    };
    let first = next("first")?;
    let second = next("second")?;
    if let Some(extra) = tokens.next() {
        return Err(format!("unexpected trailing token `{extra}`"));
    }
    Ok((first, second))
}
