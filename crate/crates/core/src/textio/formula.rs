use crate::error::{Error, Result};
use crate::syntax::{Formula, Term};
use crate::vocab::{SymbolKind, Vocabulary};

use super::{is_variable_name, SourceSpan};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Eq,
    Tilde,
    Amp,
    Bar,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Tilde => "`~`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Bar => "`|`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, SourceSpan)>> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut col) = (1, 1);
    while let Some(&c) = chars.peek() {
        let span = SourceSpan::new(line, col);
        if c == '\n' {
            chars.next();
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            col += 1;
            continue;
        }
        if c == '#' {
            while chars.peek().is_some_and(|&c| c != '\n') {
                chars.next();
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_ascii_alphanumeric() || c == '_' {
                    s.push(c);
                    chars.next();
                    col += 1;
                } else {
                    break;
                }
            }
            out.push((Tok::Ident(s), span));
            continue;
        }
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            '.' => Tok::Dot,
            '=' => Tok::Eq,
            '~' => Tok::Tilde,
            '&' => Tok::Amp,
            '|' => Tok::Bar,
            other => return Err(Error::parse(span, format!("unexpected character `{other}`"))),
        };
        chars.next();
        col += 1;
        out.push((tok, span));
    }
    out.push((Tok::End, SourceSpan::new(line, col)));
    Ok(out)
}

enum Symbols<'v> {
    Fixed(&'v Vocabulary),
    Inferred(Vocabulary),
}

impl Symbols<'_> {
    fn vocab(&self) -> &Vocabulary {
        match self {
            Symbols::Fixed(v) => v,
            Symbols::Inferred(v) => v,
        }
    }
}

struct Parser<'v> {
    toks: Vec<(Tok, SourceSpan)>,
    at: usize,
    symbols: Symbols<'v>,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.at + 1).min(self.toks.len() - 1)].0
    }

    fn span(&self) -> SourceSpan {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, SourceSpan) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<()> {
        let (tok, span) = self.bump();
        if tok == want {
            Ok(())
        } else {
            Err(Error::parse(
                span,
                format!("expected {}, found {}", want.describe(), tok.describe()),
            ))
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        match self.peek().clone() {
            Tok::Ident(k) if k == "EX" || k == "ALL" => {
                self.bump();
                let var = self.bound_variable()?;
                self.expect(Tok::Dot)?;
                let body = self.formula()?;
                Ok(if k == "EX" {
                    Formula::exists(var, body)
                } else {
                    Formula::forall(var, body)
                })
            }
            Tok::Tilde => {
                self.bump();
                Ok(Formula::not(self.formula()?))
            }
            Tok::LParen => {
                let open = self.span();
                self.bump();
                let lhs = self.formula()?;
                let (op, span) = self.bump();
                let rhs = match op {
                    Tok::Amp | Tok::Bar => self.formula()?,
                    other => {
                        return Err(Error::parse(
                            span,
                            format!("expected `&` or `|`, found {}", other.describe()),
                        ))
                    }
                };
                let (close, span) = self.bump();
                if close != Tok::RParen {
                    return Err(Error::parse(
                        span,
                        format!(
                            "expected `)` closing the parenthesis at {open}, found {}",
                            close.describe()
                        ),
                    ));
                }
                Ok(if op == Tok::Amp {
                    Formula::and(lhs, rhs)
                } else {
                    Formula::or(lhs, rhs)
                })
            }
            Tok::Ident(_) => self.atom(),
            other => Err(Error::parse(
                self.span(),
                format!("expected a formula, found {}", other.describe()),
            )),
        }
    }

    fn bound_variable(&mut self) -> Result<String> {
        let (tok, span) = self.bump();
        match tok {
            Tok::Ident(v) => {
                self.check_variable(&v, span)?;
                Ok(v)
            }
            other => Err(Error::parse(
                span,
                format!("expected a variable, found {}", other.describe()),
            )),
        }
    }

    fn check_variable(&self, v: &str, span: SourceSpan) -> Result<()> {
        if self.symbols.vocab().contains(v) {
            return Err(Error::parse(
                span,
                format!("variable `{v}` collides with a declared symbol"),
            ));
        }
        if !is_variable_name(v) {
            return Err(Error::parse(
                span,
                format!("`{v}` is neither a declared symbol nor a variable name"),
            ));
        }
        Ok(())
    }

    fn atom(&mut self) -> Result<Formula> {
        let span = self.span();
        if let (Tok::Ident(name), Tok::LParen) = (self.peek().clone(), self.peek2().clone()) {
            let is_relation = match &self.symbols {
                Symbols::Fixed(v) => matches!(v.kind(&name), Some(SymbolKind::Relation { .. })),
                Symbols::Inferred(v) => match v.kind(&name) {
                    Some(SymbolKind::Relation { .. }) => true,
                    Some(_) => false,
                    None => !self.followed_by_eq_after_args(),
                },
            };
            if is_relation {
                self.bump();
                let args = self.arguments()?;
                self.declare(&name, SymbolKind::Relation { arity: args.len() }, span)?;
                return Ok(Formula::rel(name, args));
            }
        }
        let lhs = self.term()?;
        self.expect(Tok::Eq)?;
        let rhs = self.term()?;
        Ok(Formula::eq(lhs, rhs))
    }

    /// With the cursor on `Name(`, whether the matching `)` is followed by `=`.
    fn followed_by_eq_after_args(&self) -> bool {
        let close = self.toks[self.at + 1..]
            .iter()
            .scan(0isize, |d, (t, _)| {
                match t {
                    Tok::LParen => *d += 1,
                    Tok::RParen => *d -= 1,
                    _ => {}
                }
                Some(*d)
            })
            .position(|d| d == 0);
        match close {
            Some(i) => matches!(self.toks.get(self.at + 2 + i), Some((Tok::Eq, _))),
            None => false,
        }
    }

    fn arguments(&mut self) -> Result<Vec<Term>> {
        self.expect(Tok::LParen)?;
        let mut args = vec![self.term()?];
        loop {
            let (tok, span) = self.bump();
            match tok {
                Tok::Comma => args.push(self.term()?),
                Tok::RParen => return Ok(args),
                other => {
                    return Err(Error::parse(
                        span,
                        format!("expected `,` or `)`, found {}", other.describe()),
                    ))
                }
            }
        }
    }

    fn term(&mut self) -> Result<Term> {
        let (tok, span) = self.bump();
        let Tok::Ident(name) = tok else {
            return Err(Error::parse(span, format!("expected a term, found {}", tok.describe())));
        };
        if *self.peek() == Tok::LParen {
            let args = self.arguments()?;
            self.declare(&name, SymbolKind::Function { arity: args.len() }, span)?;
            return Ok(Term::app(name, args));
        }
        match &self.symbols {
            Symbols::Fixed(v) => match v.kind(&name) {
                Some(SymbolKind::Constant) => Ok(Term::constant(name)),
                Some(_) => Err(Error::parse(span, format!("symbol `{name}` used without arguments"))),
                None => {
                    self.check_variable(&name, span)?;
                    Ok(Term::var(name))
                }
            },
            Symbols::Inferred(v) => match v.kind(&name) {
                Some(SymbolKind::Constant) => Ok(Term::constant(name)),
                Some(_) => Err(Error::parse(span, format!("symbol `{name}` used without arguments"))),
                None if is_variable_name(&name) => Ok(Term::var(name)),
                None => {
                    self.declare(&name, SymbolKind::Constant, span)?;
                    Ok(Term::constant(name))
                }
            },
        }
    }

    /// Checks `name` against the vocabulary, recording it when inferring.
    fn declare(&mut self, name: &str, kind: SymbolKind, span: SourceSpan) -> Result<()> {
        let what = |k: SymbolKind| match k {
            SymbolKind::Relation { arity } => format!("relation of arity {arity}"),
            SymbolKind::Function { arity } => format!("function of arity {arity}"),
            SymbolKind::Constant => "constant".to_string(),
        };
        match self.symbols.vocab().kind(name) {
            Some(k) if k == kind => Ok(()),
            Some(k) => Err(Error::parse(
                span,
                format!("`{name}` is declared as a {}, used as a {}", what(k), what(kind)),
            )),
            None => match &mut self.symbols {
                Symbols::Fixed(_) => Err(Error::parse(span, format!("unknown symbol `{name}`"))),
                Symbols::Inferred(v) => {
                    if is_variable_name(name) && kind == SymbolKind::Constant {
                        return Err(Error::parse(span, format!("`{name}` is a variable name")));
                    }
                    let r = match kind {
                        SymbolKind::Relation { arity } => v.add_relation(name, arity),
                        SymbolKind::Function { arity } => v.add_function(name, arity),
                        SymbolKind::Constant => v.add_constant(name),
                    };
                    r.map_err(|e| Error::parse(span, e.to_string()))
                }
            },
        }
    }

    fn finish(&mut self, phi: Formula) -> Result<Formula> {
        match self.peek() {
            Tok::End => Ok(phi),
            Tok::RParen => Err(Error::parse(self.span(), "unbalanced `)`")),
            other => Err(Error::parse(
                self.span(),
                format!("unexpected {} after the formula", other.describe()),
            )),
        }
    }
}

/// Parses a formula, resolving symbols against `vocab`.
pub fn parse_formula(text: &str, vocab: &Vocabulary) -> Result<Formula> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
        symbols: Symbols::Fixed(vocab),
    };
    let phi = p.formula()?;
    p.finish(phi)
}

/// Parses a formula without a vocabulary. A name applied to arguments at
/// atom position is a relation unless the application is followed by `=`;
/// elsewhere it is a function. Bare names that are not variable names are
/// constants.
pub fn parse_formula_infer(text: &str) -> Result<(Formula, Vocabulary)> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
        symbols: Symbols::Inferred(Vocabulary::new()),
    };
    let phi = p.formula()?;
    let phi = p.finish(phi)?;
    let Symbols::Inferred(vocab) = p.symbols else {
        unreachable!()
    };
    Ok((phi, vocab))
}

/// Canonical text form: single spaces around binary connectives, none
/// inside atoms.
pub fn print_formula(phi: &Formula) -> String {
    phi.to_string()
}
