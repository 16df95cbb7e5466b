//! Syntactic measures and rewrites: norm, width, free variables, quantifier
//! alternation levels, negation normal form, constant substitution.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::syntax::Formula;
use crate::vocab::{SymbolKind, Vocabulary};

/// Number of subformula occurrences (syntax-tree nodes).
pub fn subformula_count(phi: &Formula) -> usize {
    match phi {
        Formula::Eq(..) | Formula::Rel(..) => 1,
        Formula::Not(f) | Formula::Exists(_, f) | Formula::Forall(_, f) => 1 + subformula_count(f),
        Formula::And(a, b) | Formula::Or(a, b) => 1 + subformula_count(a) + subformula_count(b),
    }
}

/// Free variables in order of first free occurrence, scanning left to right.
pub fn free_vars(phi: &Formula) -> Vec<String> {
    fn walk<'a>(f: &'a Formula, bound: &mut Vec<&'a str>, out: &mut Vec<String>) {
        match f {
            Formula::Eq(..) | Formula::Rel(..) => {
                let mut vs = Vec::new();
                for t in f.atom_terms() {
                    t.collect_vars(&mut vs);
                }
                for v in vs {
                    if !bound.contains(&v) && !out.iter().any(|o| o == v) {
                        out.push(v.to_string());
                    }
                }
            }
            Formula::Not(g) => walk(g, bound, out),
            Formula::And(a, b) | Formula::Or(a, b) => {
                walk(a, bound, out);
                walk(b, bound, out);
            }
            Formula::Exists(v, g) | Formula::Forall(v, g) => {
                bound.push(v);
                walk(g, bound, out);
                bound.pop();
            }
        }
    }
    let mut out = Vec::new();
    walk(phi, &mut Vec::new(), &mut out);
    out
}

/// Whether `var` occurs free in `phi`.
pub fn is_free_in(var: &str, phi: &Formula) -> bool {
    match phi {
        Formula::Eq(..) | Formula::Rel(..) => {
            let mut vs = Vec::new();
            for t in phi.atom_terms() {
                t.collect_vars(&mut vs);
            }
            vs.contains(&var)
        }
        Formula::Not(g) => is_free_in(var, g),
        Formula::And(a, b) | Formula::Or(a, b) => is_free_in(var, a) || is_free_in(var, b),
        Formula::Exists(v, g) | Formula::Forall(v, g) => v != var && is_free_in(var, g),
    }
}

/// Maximum number of free variables of a subformula occurrence.
pub fn width(phi: &Formula) -> usize {
    fn walk(f: &Formula, best: &mut usize) -> BTreeSet<String> {
        let fv: BTreeSet<String> = match f {
            Formula::Eq(..) | Formula::Rel(..) => {
                let mut vs = Vec::new();
                for t in f.atom_terms() {
                    t.collect_vars(&mut vs);
                }
                vs.into_iter().map(str::to_string).collect()
            }
            Formula::Not(g) => walk(g, best),
            Formula::And(a, b) | Formula::Or(a, b) => {
                let mut s = walk(a, best);
                s.extend(walk(b, best));
                s
            }
            Formula::Exists(v, g) | Formula::Forall(v, g) => {
                let mut s = walk(g, best);
                s.remove(v);
                s
            }
        };
        *best = (*best).max(fv.len());
        fv
    }
    let mut best = 0;
    walk(phi, &mut best);
    best
}

/// Number of distinct variable names occurring in `phi`, bound or free.
pub fn num_variables(phi: &Formula) -> usize {
    variables(phi).len()
}

/// All distinct variable names in `phi`, in first-appearance order.
pub fn variables(phi: &Formula) -> Vec<String> {
    fn walk<'a>(f: &'a Formula, out: &mut Vec<&'a str>) {
        match f {
            Formula::Eq(..) | Formula::Rel(..) => {
                let mut vs = Vec::new();
                for t in f.atom_terms() {
                    t.collect_vars(&mut vs);
                }
                for v in vs {
                    if !out.contains(&v) {
                        out.push(v);
                    }
                }
            }
            Formula::Exists(v, g) | Formula::Forall(v, g) => {
                if !out.contains(&v.as_str()) {
                    out.push(v);
                }
                walk(g, out);
            }
            _ => f.children().into_iter().for_each(|c| walk(c, out)),
        }
    }
    let mut out = Vec::new();
    walk(phi, &mut out);
    out.into_iter().map(str::to_string).collect()
}

/// Syntactic measures of a formula.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Classification {
    #[serde(rename = "vars")]
    pub num_variables: usize,
    pub width: usize,
    #[serde(rename = "norm")]
    pub subformula_count: usize,
    /// Character count of the canonical printed form.
    pub encoding_length: usize,
    pub sigma_level: Option<usize>,
    pub pi_level: Option<usize>,
}

/// Least `(σ, π)` such that the negation normal form of `phi` lies in
/// `Σ_σ` and in `Π_π`.
fn raw_levels(phi: &Formula) -> (usize, usize) {
    if phi.is_quantifier_free() {
        return (0, 0);
    }
    match phi {
        Formula::Not(g) => {
            let (s, p) = raw_levels(g);
            (p, s)
        }
        Formula::And(a, b) | Formula::Or(a, b) => {
            let (sa, pa) = raw_levels(a);
            let (sb, pb) = raw_levels(b);
            (sa.max(sb), pa.max(pb))
        }
        Formula::Exists(_, g) => {
            let s = raw_levels(g).0.max(1);
            (s, s + 1)
        }
        Formula::Forall(_, g) => {
            let p = raw_levels(g).1.max(1);
            (p + 1, p)
        }
        Formula::Eq(..) | Formula::Rel(..) => unreachable!("atoms are quantifier-free"),
    }
}

/// Quantifier alternation levels, reported for the class that starts the
/// formula: a formula gets a `Σ` level unless its least `Π` level is
/// strictly smaller, and dually.
pub fn alternation_levels(phi: &Formula) -> (Option<usize>, Option<usize>) {
    let (s, p) = raw_levels(phi);
    let sigma = (s == 0 || s <= p).then_some(s);
    let pi = (p == 0 || p <= s).then_some(p);
    (sigma, pi)
}

pub fn classify(phi: &Formula) -> Classification {
    let (sigma_level, pi_level) = alternation_levels(phi);
    Classification {
        num_variables: num_variables(phi),
        width: width(phi),
        subformula_count: subformula_count(phi),
        encoding_length: phi.to_string().chars().count(),
        sigma_level,
        pi_level,
    }
}

/// Negation normal form: negations pushed onto atoms, double negations
/// removed, quantifiers dualized.
pub fn nnf(phi: &Formula) -> Formula {
    fn pos(f: &Formula) -> Formula {
        match f {
            Formula::Eq(..) | Formula::Rel(..) => f.clone(),
            Formula::Not(g) => neg(g),
            Formula::And(a, b) => Formula::and(pos(a), pos(b)),
            Formula::Or(a, b) => Formula::or(pos(a), pos(b)),
            Formula::Exists(v, g) => Formula::exists(v.clone(), pos(g)),
            Formula::Forall(v, g) => Formula::forall(v.clone(), pos(g)),
        }
    }
    fn neg(f: &Formula) -> Formula {
        match f {
            Formula::Eq(..) | Formula::Rel(..) => Formula::not(f.clone()),
            Formula::Not(g) => pos(g),
            Formula::And(a, b) => Formula::or(neg(a), neg(b)),
            Formula::Or(a, b) => Formula::and(neg(a), neg(b)),
            Formula::Exists(v, g) => Formula::forall(v.clone(), neg(g)),
            Formula::Forall(v, g) => Formula::exists(v.clone(), neg(g)),
        }
    }
    pos(phi)
}

/// Replaces the free occurrences of `var` by the constant `constant`.
pub fn substitute_const(phi: &Formula, var: &str, constant: &str, vocab: &Vocabulary) -> Result<Formula> {
    if vocab.kind(constant) != Some(SymbolKind::Constant) {
        return Err(Error::Vocabulary(format!("unknown constant `{constant}`")));
    }
    Ok(phi.substitute_unchecked(var, constant))
}
