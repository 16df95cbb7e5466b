//! First-order terms and formulas.
//!
//! Formulas are plain owned trees. A [`Position`] addresses a subformula
//! occurrence by the sequence of child indices taken from the root; `Not`,
//! `Exists` and `Forall` have a single child `0`, binary connectives have
//! children `0` and `1`.

use std::fmt;

/// A term: variable, constant symbol, or function application.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Const(String),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Self {
        Term::Var(name.into())
    }

    pub fn constant(name: impl Into<String>) -> Self {
        Term::Const(name.into())
    }

    pub fn app(name: impl Into<String>, args: Vec<Term>) -> Self {
        Term::App(name.into(), args)
    }

    /// Pushes variable occurrences in left-to-right order.
    pub(crate) fn collect_vars<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Term::Var(v) => out.push(v),
            Term::Const(_) => {}
            Term::App(_, args) => args.iter().for_each(|t| t.collect_vars(out)),
        }
    }

    pub fn has_functions(&self) -> bool {
        matches!(self, Term::App(..))
    }

    fn substitute(&self, var: &str, constant: &str) -> Term {
        match self {
            Term::Var(v) if v == var => Term::Const(constant.to_string()),
            Term::Var(_) | Term::Const(_) => self.clone(),
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|t| t.substitute(var, constant)).collect()),
        }
    }
}

/// A first-order formula.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Eq(Term, Term),
    Rel(String, Vec<Term>),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
}

/// Child-index path from the root to a subformula occurrence.
pub type Position = Vec<usize>;

impl Formula {
    pub fn eq(lhs: Term, rhs: Term) -> Self {
        Formula::Eq(lhs, rhs)
    }

    pub fn rel(name: impl Into<String>, args: Vec<Term>) -> Self {
        Formula::Rel(name.into(), args)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(inner: Formula) -> Self {
        Formula::Not(Box::new(inner))
    }

    pub fn and(lhs: Formula, rhs: Formula) -> Self {
        Formula::And(Box::new(lhs), Box::new(rhs))
    }

    pub fn or(lhs: Formula, rhs: Formula) -> Self {
        Formula::Or(Box::new(lhs), Box::new(rhs))
    }

    pub fn exists(var: impl Into<String>, body: Formula) -> Self {
        Formula::Exists(var.into(), Box::new(body))
    }

    pub fn forall(var: impl Into<String>, body: Formula) -> Self {
        Formula::Forall(var.into(), Box::new(body))
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, Formula::Eq(..) | Formula::Rel(..))
    }

    /// Atom or negated atom.
    pub fn is_literal(&self) -> bool {
        match self {
            Formula::Not(inner) => inner.is_atomic(),
            f => f.is_atomic(),
        }
    }

    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Eq(..) | Formula::Rel(..) => Vec::new(),
            Formula::Not(f) | Formula::Exists(_, f) | Formula::Forall(_, f) => vec![f],
            Formula::And(a, b) | Formula::Or(a, b) => vec![a, b],
        }
    }

    pub fn child(&self, index: usize) -> Option<&Formula> {
        match (self, index) {
            (Formula::Not(f) | Formula::Exists(_, f) | Formula::Forall(_, f), 0) => Some(f),
            (Formula::And(a, _) | Formula::Or(a, _), 0) => Some(a),
            (Formula::And(_, b) | Formula::Or(_, b), 1) => Some(b),
            _ => None,
        }
    }

    /// The subformula occurrence at `pos`.
    pub fn at(&self, pos: &[usize]) -> Option<&Formula> {
        pos.iter().try_fold(self, |node, &i| node.child(i))
    }

    /// Returns a copy with the subformula at `pos` replaced by `new`.
    ///
    /// Panics if `pos` does not address a node.
    pub fn replace_at(&self, pos: &[usize], new: Formula) -> Formula {
        let Some((&first, rest)) = pos.split_first() else {
            return new;
        };
        match (self, first) {
            (Formula::Not(f), 0) => Formula::Not(Box::new(f.replace_at(rest, new))),
            (Formula::Exists(v, f), 0) => Formula::Exists(v.clone(), Box::new(f.replace_at(rest, new))),
            (Formula::Forall(v, f), 0) => Formula::Forall(v.clone(), Box::new(f.replace_at(rest, new))),
            (Formula::And(a, b), 0) => Formula::And(Box::new(a.replace_at(rest, new)), b.clone()),
            (Formula::And(a, b), 1) => Formula::And(a.clone(), Box::new(b.replace_at(rest, new))),
            (Formula::Or(a, b), 0) => Formula::Or(Box::new(a.replace_at(rest, new)), b.clone()),
            (Formula::Or(a, b), 1) => Formula::Or(a.clone(), Box::new(b.replace_at(rest, new))),
            _ => panic!("position {pos:?} does not address a subformula"),
        }
    }

    /// All subformula positions in preorder.
    pub fn positions(&self) -> Vec<Position> {
        fn walk(f: &Formula, cur: &mut Position, out: &mut Vec<Position>) {
            out.push(cur.clone());
            for (i, c) in f.children().into_iter().enumerate() {
                cur.push(i);
                walk(c, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        walk(self, &mut Vec::new(), &mut out);
        out
    }

    /// Atomic subformulas, left to right.
    pub fn atoms(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(f) = stack.pop() {
            if f.is_atomic() {
                out.push(f);
            }
            stack.extend(f.children().into_iter().rev());
        }
        out
    }

    /// Terms of an atom, left to right; empty for non-atoms.
    pub fn atom_terms(&self) -> Vec<&Term> {
        match self {
            Formula::Eq(a, b) => vec![a, b],
            Formula::Rel(_, args) => args.iter().collect(),
            _ => Vec::new(),
        }
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::Eq(..) | Formula::Rel(..) => true,
            Formula::Not(f) => f.is_quantifier_free(),
            Formula::And(a, b) | Formula::Or(a, b) => a.is_quantifier_free() && b.is_quantifier_free(),
            Formula::Exists(..) | Formula::Forall(..) => false,
        }
    }

    /// Negations occur only directly in front of atoms.
    pub fn is_nnf(&self) -> bool {
        match self {
            Formula::Eq(..) | Formula::Rel(..) => true,
            Formula::Not(f) => f.is_atomic(),
            Formula::And(a, b) | Formula::Or(a, b) => a.is_nnf() && b.is_nnf(),
            Formula::Exists(_, f) | Formula::Forall(_, f) => f.is_nnf(),
        }
    }

    pub fn has_functions(&self) -> bool {
        match self {
            Formula::Eq(a, b) => a.has_functions() || b.has_functions(),
            Formula::Rel(_, args) => args.iter().any(Term::has_functions),
            _ => self.children().iter().any(|c| c.has_functions()),
        }
    }

    pub fn has_universal(&self) -> bool {
        match self {
            Formula::Forall(..) => true,
            _ => self.children().iter().any(|c| c.has_universal()),
        }
    }

    /// Replaces every free occurrence of `var` by the constant symbol `constant`.
    pub(crate) fn substitute_unchecked(&self, var: &str, constant: &str) -> Formula {
        match self {
            Formula::Eq(a, b) => Formula::Eq(a.substitute(var, constant), b.substitute(var, constant)),
            Formula::Rel(r, args) => {
                Formula::Rel(r.clone(), args.iter().map(|t| t.substitute(var, constant)).collect())
            }
            Formula::Not(f) => Formula::not(f.substitute_unchecked(var, constant)),
            Formula::And(a, b) => Formula::and(
                a.substitute_unchecked(var, constant),
                b.substitute_unchecked(var, constant),
            ),
            Formula::Or(a, b) => Formula::or(
                a.substitute_unchecked(var, constant),
                b.substitute_unchecked(var, constant),
            ),
            Formula::Exists(v, _) | Formula::Forall(v, _) if v == var => self.clone(),
            Formula::Exists(v, f) => Formula::exists(v.clone(), f.substitute_unchecked(var, constant)),
            Formula::Forall(v, f) => Formula::forall(v.clone(), f.substitute_unchecked(var, constant)),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) | Term::Const(v) => f.write_str(v),
            Term::App(name, args) => {
                write!(f, "{name}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Eq(a, b) => write!(f, "{a}={b}"),
            Formula::Rel(name, args) => {
                write!(f, "{name}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
            Formula::Not(inner) => write!(f, "~{inner}"),
            Formula::And(a, b) => write!(f, "({a} & {b})"),
            Formula::Or(a, b) => write!(f, "({a} | {b})"),
            Formula::Exists(v, body) => write!(f, "EX {v}. {body}"),
            Formula::Forall(v, body) => write!(f, "ALL {v}. {body}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(name: &str, vars: &[&str]) -> Formula {
        Formula::rel(name, vars.iter().map(|v| Term::var(*v)).collect())
    }

    #[test]
    fn positions_are_preorder() {
        let f = Formula::and(r("A", &["x"]), Formula::not(r("B", &["x"])));
        assert_eq!(f.positions(), vec![vec![], vec![0], vec![1], vec![1, 0]]);
        assert_eq!(f.at(&[1, 0]), Some(&r("B", &["x"])));
        assert_eq!(f.at(&[2]), None);
    }

    #[test]
    fn replace_at_rebuilds_only_the_path() {
        let f = Formula::exists("x", Formula::or(r("A", &["x"]), r("B", &["x"])));
        let g = f.replace_at(&[0, 1], r("C", &["x"]));
        assert_eq!(g, Formula::exists("x", Formula::or(r("A", &["x"]), r("C", &["x"]))));
    }

    #[test]
    fn nnf_predicate() {
        assert!(Formula::not(r("A", &["x"])).is_nnf());
        assert!(!Formula::not(Formula::not(r("A", &["x"]))).is_nnf());
    }
}
