use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::syntax::{Formula, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SymbolKind {
    Relation { arity: usize },
    Constant,
    Function { arity: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymbolDecl {
    pub name: String,
    pub kind: SymbolKind,
}

/// A finite set of relation, constant and function symbols, kept in
/// declaration order. Names are pairwise distinct; relation and function
/// arities are at least one.
#[derive(Debug, Clone, Default)]
pub struct Vocabulary {
    decls: Vec<SymbolDecl>,
    index: HashMap<String, usize>,
}

impl PartialEq for Vocabulary {
    fn eq(&self, other: &Self) -> bool {
        self.decls == other.decls
    }
}

impl Eq for Vocabulary {}

impl Vocabulary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_relation(&mut self, name: impl Into<String>, arity: usize) -> Result<()> {
        if arity == 0 {
            return Err(Error::Vocabulary("relation arity must be at least 1".into()));
        }
        self.add(name.into(), SymbolKind::Relation { arity })
    }

    pub fn add_constant(&mut self, name: impl Into<String>) -> Result<()> {
        self.add(name.into(), SymbolKind::Constant)
    }

    /// Nullary functions are rejected; declare a constant instead.
    pub fn add_function(&mut self, name: impl Into<String>, arity: usize) -> Result<()> {
        if arity == 0 {
            return Err(Error::Vocabulary(
                "function arity must be at least 1 (declare a constant instead)".into(),
            ));
        }
        self.add(name.into(), SymbolKind::Function { arity })
    }

    fn add(&mut self, name: String, kind: SymbolKind) -> Result<()> {
        if self.index.contains_key(&name) {
            return Err(Error::Vocabulary(format!("duplicate symbol `{name}`")));
        }
        self.index.insert(name.clone(), self.decls.len());
        self.decls.push(SymbolDecl { name, kind });
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&SymbolDecl> {
        self.index.get(name).map(|&i| &self.decls[i])
    }

    pub fn kind(&self, name: &str) -> Option<SymbolKind> {
        self.get(name).map(|d| d.kind)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    pub fn decls(&self) -> &[SymbolDecl] {
        &self.decls
    }

    pub fn len(&self) -> usize {
        self.decls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.decls.is_empty()
    }

    pub fn relations(&self) -> impl Iterator<Item = (&str, usize)> {
        self.decls.iter().filter_map(|d| match d.kind {
            SymbolKind::Relation { arity } => Some((d.name.as_str(), arity)),
            _ => None,
        })
    }

    pub fn constants(&self) -> impl Iterator<Item = &str> {
        self.decls.iter().filter_map(|d| match d.kind {
            SymbolKind::Constant => Some(d.name.as_str()),
            _ => None,
        })
    }

    pub fn functions(&self) -> impl Iterator<Item = (&str, usize)> {
        self.decls.iter().filter_map(|d| match d.kind {
            SymbolKind::Function { arity } => Some((d.name.as_str(), arity)),
            _ => None,
        })
    }

    pub fn is_relational(&self) -> bool {
        self.functions().next().is_none()
    }

    /// Checks that every symbol used in `formula` is declared with a matching arity.
    pub fn check_formula(&self, formula: &Formula) -> Result<()> {
        match formula {
            Formula::Eq(a, b) => {
                self.check_term(a)?;
                self.check_term(b)
            }
            Formula::Rel(name, args) => {
                match self.kind(name) {
                    Some(SymbolKind::Relation { arity }) if arity == args.len() => {}
                    Some(SymbolKind::Relation { arity }) => {
                        return Err(Error::Vocabulary(format!(
                            "relation `{name}` has arity {arity}, used with {} arguments",
                            args.len()
                        )))
                    }
                    _ => return Err(Error::Vocabulary(format!("unknown relation `{name}`"))),
                }
                args.iter().try_for_each(|t| self.check_term(t))
            }
            _ => formula.children().into_iter().try_for_each(|c| self.check_formula(c)),
        }
    }

    fn check_term(&self, term: &Term) -> Result<()> {
        match term {
            Term::Var(v) => {
                if self.contains(v) {
                    Err(Error::Vocabulary(format!(
                        "variable `{v}` collides with a declared symbol"
                    )))
                } else {
                    Ok(())
                }
            }
            Term::Const(c) => match self.kind(c) {
                Some(SymbolKind::Constant) => Ok(()),
                _ => Err(Error::Vocabulary(format!("unknown constant `{c}`"))),
            },
            Term::App(f, args) => {
                match self.kind(f) {
                    Some(SymbolKind::Function { arity }) if arity == args.len() => {}
                    Some(SymbolKind::Function { arity }) => {
                        return Err(Error::Vocabulary(format!(
                            "function `{f}` has arity {arity}, used with {} arguments",
                            args.len()
                        )))
                    }
                    _ => return Err(Error::Vocabulary(format!("unknown function `{f}`"))),
                }
                args.iter().try_for_each(|t| self.check_term(t))
            }
        }
    }
}
