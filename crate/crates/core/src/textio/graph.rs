use std::fmt::Write as _;

use crate::digraph::Digraph;
use crate::error::{Error, Result};

use super::SourceSpan;

fn field(line: usize, col: usize, text: &str) -> Result<usize> {
    text.parse()
        .map_err(|_| Error::parse(SourceSpan::new(line, col), format!("expected a vertex, found `{text}`")))
}

/// Parses `digraph N`, then `u v` edge lines, then `.`.
pub fn parse_digraph(text: &str) -> Result<Digraph> {
    let mut graph: Option<Digraph> = None;
    let mut last = SourceSpan::new(1, 1);
    let mut done = false;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        let words: Vec<(usize, &str)> = content
            .split_whitespace()
            .map(|w| {
                let off = w.as_ptr() as usize - content.as_ptr() as usize;
                (content[..off].chars().count() + 1, w)
            })
            .collect();
        let Some(&(col, head)) = words.first() else {
            continue;
        };
        last = SourceSpan::new(line, col);
        if done {
            return Err(Error::parse(last, "content after the `.` terminator"));
        }
        match graph.as_mut() {
            None => {
                if head != "digraph" || words.len() != 2 {
                    return Err(Error::parse(last, "expected `digraph N`"));
                }
                graph = Some(Digraph::new(field(line, words[1].0, words[1].1)?));
            }
            Some(g) => {
                if head == "." && words.len() == 1 {
                    done = true;
                    continue;
                }
                if words.len() != 2 {
                    return Err(Error::parse(last, "expected an edge `u v`"));
                }
                let u = field(line, words[0].0, words[0].1)?;
                let v = field(line, words[1].0, words[1].1)?;
                g.add_edge(u, v).map_err(|e| Error::parse(last, e.to_string()))?;
            }
        }
    }
    match graph {
        Some(g) if done => Ok(g),
        None => Err(Error::parse(last, "empty input: expected `digraph N`")),
        Some(_) => Err(Error::parse(last, "missing `.` terminator")),
    }
}

/// Canonical digraph text with edges in lexicographic order.
pub fn print_digraph(g: &Digraph) -> String {
    let mut out = format!("digraph {}\n", g.vertex_count());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out.push_str(".\n");
    out
}
