use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::structure::{Structure, StructureBuilder};
use crate::vocab::{SymbolKind, Vocabulary};

use super::{is_symbol_name, SourceSpan};

/// A whitespace-separated word with its position.
#[derive(Debug, Clone, Copy)]
struct Word<'a> {
    text: &'a str,
    span: SourceSpan,
}

/// Non-empty lines with comments stripped, split into words.
fn lines(text: &str) -> Vec<Vec<Word<'_>>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        let mut words = Vec::new();
        let mut start = None;
        for (j, c) in content.char_indices().chain(std::iter::once((content.len(), ' '))) {
            match (c.is_whitespace(), start) {
                (false, None) => start = Some(j),
                (true, Some(s)) => {
                    words.push(Word {
                        text: &content[s..j],
                        span: SourceSpan::new(i + 1, content[..s].chars().count() + 1),
                    });
                    start = None;
                }
                _ => {}
            }
        }
        if !words.is_empty() {
            out.push(words);
        }
    }
    out
}

fn number(w: Word<'_>, what: &str) -> Result<usize> {
    w.text
        .parse()
        .map_err(|_| Error::parse(w.span, format!("expected {what}, found `{}`", w.text)))
}

fn element(w: Word<'_>, universe: usize) -> Result<usize> {
    let e = number(w, "an element")?;
    if e >= universe {
        return Err(Error::parse(
            w.span,
            format!("element {e} out of range for universe of size {universe}"),
        ));
    }
    Ok(e)
}

fn expect_len(line: &[Word<'_>], len: usize, what: &str) -> Result<()> {
    if line.len() != len {
        let span = line.get(len).unwrap_or(&line[0]).span;
        return Err(Error::parse(
            span,
            format!("{what}: expected {len} fields, found {}", line.len()),
        ));
    }
    Ok(())
}

fn symbol_name(w: Word<'_>) -> Result<String> {
    if !is_symbol_name(w.text) || w.text == "EX" || w.text == "ALL" {
        return Err(Error::parse(w.span, format!("invalid symbol name `{}`", w.text)));
    }
    Ok(w.text.to_string())
}

enum Block {
    Relation(String, Vec<(SourceSpan, Vec<usize>)>),
    Constant(String, usize),
    Function(String, usize, Vec<(SourceSpan, Vec<usize>)>, SourceSpan),
}

/// Parses the `.fos` format: a `universe N` header followed by `rel`,
/// `const` and `fun` declarations in any order.
pub fn parse_structure(text: &str) -> Result<Structure> {
    let lines = lines(text);
    let mut it = lines.iter().peekable();
    let header = it
        .next()
        .ok_or_else(|| Error::parse(SourceSpan::new(1, 1), "empty input: expected `universe N`"))?;
    if header[0].text != "universe" {
        return Err(Error::parse(header[0].span, "expected `universe N`"));
    }
    expect_len(header, 2, "universe header")?;
    let universe = number(header[1], "a universe size")?;
    if universe == 0 {
        return Err(Error::parse(header[1].span, "universe must be nonempty"));
    }

    let mut vocab = Vocabulary::new();
    let mut blocks = Vec::new();
    while let Some(line) = it.next() {
        let head = line[0];
        match head.text {
            "rel" | "fun" => {
                expect_len(line, 3, head.text)?;
                let name = symbol_name(line[1])?;
                let arity = number(line[2], "an arity")?;
                let declared = if head.text == "rel" {
                    vocab.add_relation(name.clone(), arity)
                } else {
                    vocab.add_function(name.clone(), arity)
                };
                declared.map_err(|e| Error::parse(line[1].span, e.to_string()))?;
                let width = if head.text == "rel" { arity } else { arity + 1 };
                let mut rows = Vec::new();
                let end = loop {
                    let Some(row) = it.next() else {
                        return Err(Error::parse(head.span, format!("missing `.` terminator for `{name}`")));
                    };
                    if row.len() == 1 && row[0].text == "." {
                        break row[0].span;
                    }
                    if row.len() != width {
                        return Err(Error::parse(
                            row[0].span,
                            format!(
                                "tuple arity mismatch for `{name}`: expected {width} numbers, found {}",
                                row.len()
                            ),
                        ));
                    }
                    let vals = row.iter().map(|&w| element(w, universe)).collect::<Result<Vec<_>>>()?;
                    rows.push((row[0].span, vals));
                };
                blocks.push(if head.text == "rel" {
                    Block::Relation(name, rows)
                } else {
                    Block::Function(name, arity, rows, end)
                });
            }
            "const" => {
                expect_len(line, 3, "const")?;
                let name = symbol_name(line[1])?;
                vocab
                    .add_constant(name.clone())
                    .map_err(|e| Error::parse(line[1].span, e.to_string()))?;
                blocks.push(Block::Constant(name, element(line[2], universe)?));
            }
            "universe" => return Err(Error::parse(head.span, "duplicate `universe` header")),
            other => {
                return Err(Error::parse(
                    head.span,
                    format!("expected `rel`, `const` or `fun`, found `{other}`"),
                ))
            }
        }
    }

    let mut b = StructureBuilder::new(vocab, universe)?;
    for block in blocks {
        match block {
            Block::Relation(name, rows) => {
                for (_, t) in rows {
                    b.add_tuple(&name, t)?;
                }
            }
            Block::Constant(name, value) => {
                b.set_constant(&name, value)?;
            }
            Block::Function(name, arity, rows, end) => {
                let mut seen = std::collections::BTreeSet::new();
                for (span, row) in rows {
                    let (args, value) = row.split_at(arity);
                    if !seen.insert(args.to_vec()) {
                        return Err(Error::parse(
                            span,
                            format!("function `{name}` has two rows for {args:?}"),
                        ));
                    }
                    b.set_function_value(&name, args, value[0])?;
                }
                let expected = universe.pow(arity as u32);
                if seen.len() != expected {
                    let missing = (0..expected)
                        .map(|i| decode(universe, arity, i))
                        .find(|r| !seen.contains(r))
                        .expect("some row is missing");
                    return Err(Error::parse(
                        end,
                        format!("partial function table for `{name}`: no row for {missing:?}"),
                    ));
                }
            }
        }
    }
    b.build()
}

fn decode(universe: usize, arity: usize, mut i: usize) -> Vec<usize> {
    let mut row = vec![0; arity];
    for slot in row.iter_mut().rev() {
        *slot = i % universe;
        i /= universe;
    }
    row
}

fn join(xs: &[usize]) -> String {
    xs.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

/// Canonical `.fos` text: symbols in declaration order, tuples and function
/// rows in lexicographic order.
pub fn print_structure(a: &Structure) -> String {
    let mut out = format!("universe {}\n", a.universe());
    for d in a.vocabulary().decls() {
        match d.kind {
            SymbolKind::Relation { arity } => {
                let _ = writeln!(out, "rel {} {arity}", d.name);
                for t in a.relation(&d.name).expect("declared") {
                    let _ = writeln!(out, "{}", join(t));
                }
                out.push_str(".\n");
            }
            SymbolKind::Constant => {
                let _ = writeln!(out, "const {} {}", d.name, a.constant(&d.name).expect("declared"));
            }
            SymbolKind::Function { arity } => {
                let _ = writeln!(out, "fun {} {arity}", d.name);
                for (args, v) in a.function_rows(&d.name).expect("declared") {
                    let _ = writeln!(out, "{} {v}", join(&args));
                }
                out.push_str(".\n");
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_edge() {
        let a = parse_structure("universe 2\nrel E 2\n0 1\n.\n").unwrap();
        assert_eq!(a.universe(), 2);
        assert!(a.relation("E").unwrap().contains(&vec![0, 1]));
        assert_eq!(a.relation("E").unwrap().len(), 1);
    }

    #[test]
    fn partial_function_table() {
        let err = parse_structure("universe 2\nfun f 1\n0 1\n.\n").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("partial function table") && msg.contains("[1]"), "{msg}");
        assert_eq!(err.span(), Some(SourceSpan::new(4, 1)));
    }

    #[test]
    fn missing_terminator() {
        let err = parse_structure("universe 2\nrel E 2\n0 1\n").unwrap_err();
        assert!(err.to_string().contains("terminator"), "{err}");
    }

    #[test]
    fn duplicate_symbol_and_bad_tuples() {
        assert!(parse_structure("universe 2\nrel E 2\n.\nconst E 0\n").is_err());
        let err = parse_structure("universe 2\nrel E 2\n0 1 1\n.\n").unwrap_err();
        assert!(err.to_string().contains("arity mismatch"), "{err}");
        let err = parse_structure("universe 2\nrel E 2\n0 2\n.\n").unwrap_err();
        assert!(err.to_string().contains("out of range"), "{err}");
        assert_eq!(err.span(), Some(SourceSpan::new(3, 3)));
    }

    #[test]
    fn comments_and_print() {
        let text = "# a graph\nuniverse 3\nconst c 2 # the sink\nrel E 2\n1 2\n0 1\n.\nfun f 1\n0 0\n2 1\n1 1\n.\n";
        let a = parse_structure(text).unwrap();
        assert_eq!(
            print_structure(&a),
            "universe 3\nconst c 2\nrel E 2\n0 1\n1 2\n.\nfun f 1\n0 0\n1 1\n2 1\n.\n"
        );
        assert_eq!(parse_structure(&print_structure(&a)).unwrap(), a);
    }
}
