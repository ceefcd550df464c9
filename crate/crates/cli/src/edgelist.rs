//! Plain-text edge lists.
//!
//! ```text
//! # optional comments
//! n 5
//! 1 2
//! 1 3
//! ```
//!
//! The header gives the player count. Each further line holds one edge
//! `i j` with `1 ≤ i < j ≤ n`. Duplicates and self-loops are rejected.

use std::fmt::Write as _;
use std::path::Path;

use netgame_core::Graph;

use crate::error::{CliError, Result};

pub fn parse(path: &Path, text: &str) -> Result<Graph> {
    let mut graph: Option<Graph> = None;
    for (index, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fail = |message: String| CliError::Parse {
            path: path.to_path_buf(),
            line: index + 1,
            message,
        };
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let Some(g) = graph.as_mut() else {
            let n = match tokens.as_slice() {
                ["n", count] => count
                    .parse::<usize>()
                    .ok()
                    .filter(|&n| n > 0)
                    .ok_or_else(|| fail(format!("invalid player count {count:?}")))?,
                _ => return Err(fail(format!("expected header `n <count>`, got {line:?}"))),
            };
            graph = Some(Graph::new_empty(n)?);
            continue;
        };
        let [a, b] = tokens.as_slice() else {
            return Err(fail(format!("expected `i j`, got {line:?}")));
        };
        let vertex = |t: &str| {
            t.parse::<usize>()
                .ok()
                .filter(|&v| v >= 1 && v <= g.order())
                .ok_or_else(|| fail(format!("vertex {t:?} is not in 1..={}", g.order())))
        };
        let (i, j) = (vertex(a)?, vertex(b)?);
        if i == j {
            return Err(fail(format!("self-loop on {i}")));
        }
        if i > j {
            return Err(fail(format!("edge ({i}, {j}) must be written with i < j")));
        }
        if g.has_edge(i, j) {
            return Err(fail(format!("duplicate edge ({i}, {j})")));
        }
        g.add_edge(i, j)?;
    }
    graph.ok_or_else(|| CliError::Parse {
        path: path.to_path_buf(),
        line: text.lines().count().max(1),
        message: "missing header `n <count>`".into(),
    })
}

pub fn read(path: &Path) -> Result<Graph> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse(path, &text)
}

/// Canonical form: comments, header, then edges in lexicographic order.
pub fn render(g: &Graph, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        let _ = writeln!(out, "# {c}");
    }
    let _ = writeln!(out, "n {}", g.order());
    for (i, j) in g.edges() {
        let _ = writeln!(out, "{i} {j}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse_str(text: &str) -> Result<Graph> {
        parse(Path::new("g.txt"), text)
    }

    #[test]
    fn round_trip() {
        let g = Graph::star(5).unwrap();
        let text = render(&g, &["seed = 3".into()]);
        assert!(text.starts_with("# seed = 3\nn 5\n1 2\n"));
        assert_eq!(parse_str(&text).unwrap(), g);
        assert_eq!(parse_str("n 3\n").unwrap(), Graph::new_empty(3).unwrap());
    }

    #[test]
    fn diagnostics_carry_line_numbers() {
        let cases = [
            ("n 3\n1 2\n1 2\n", "g.txt:3: duplicate edge (1, 2)"),
            ("# c\nn 3\n\n2 2\n", "g.txt:4: self-loop on 2"),
            ("n 3\n1 4\n", "g.txt:2: vertex \"4\" is not in 1..=3"),
            ("1 2\n", "g.txt:1: expected header `n <count>`, got \"1 2\""),
            ("n 3\n3 1\n", "g.txt:2: edge (3, 1) must be written with i < j"),
            ("n 3\n1 2 3\n", "g.txt:2: expected `i j`, got \"1 2 3\""),
            ("# only comments\n", "g.txt:1: missing header `n <count>`"),
        ];
        for (text, message) in cases {
            assert_eq!(parse_str(text).unwrap_err().to_string(), message);
        }
    }
}
