//! Choosing the split subformula and the guarded rewrite around it.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::metrics::{free_vars, subformula_count};
use crate::syntax::{Formula, Position, Term};

/// Position of a subformula `φ₀` with `‖φ‖/3 ≤ ‖φ₀‖ ≤ 2‖φ‖/3`.
///
/// Walks from the root into the child of largest count, leftmost on ties,
/// while the current count exceeds `2‖φ‖/3`.
pub fn split_subformula(phi: &Formula) -> Result<Position> {
    let total = subformula_count(phi);
    if total < 3 {
        return Err(Error::Precondition(format!(
            "split needs a formula with at least 3 subformulas, got {total}"
        )));
    }
    let mut pos = Vec::new();
    let mut node = phi;
    let mut count = total;
    while 3 * count > 2 * total {
        let (i, child, c) = node
            .children()
            .into_iter()
            .enumerate()
            .map(|(i, c)| (i, c, subformula_count(c)))
            .fold(None, |best: Option<(usize, &Formula, usize)>, cur| match best {
                Some(b) if b.2 >= cur.2 => Some(b),
                _ => Some(cur),
            })
            .expect("a node above the window is not a leaf");
        pos.push(i);
        node = child;
        count = c;
    }
    Ok(pos)
}

/// How a free variable of `φ₀` is handled by the rewrite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GuardKind {
    /// Bound by an `∃` above `φ₀`; that quantifier received the guard.
    Bound,
    /// Free in the whole formula; its value comes from the outer assignment.
    FreeInPhi,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GuardedRewrite {
    pub phi0: Formula,
    /// `φ` with `∃yᵢχ` replaced by `∃yᵢ(yᵢ=cᵢ ∧ χ)` for each bound `yᵢ`.
    pub phi1: Formula,
    /// Position of `φ₀` inside `phi1`.
    pub pos1: Position,
    /// Free variables of `φ₀` in first-appearance order.
    pub y_vars: Vec<String>,
    pub guards: Vec<GuardKind>,
    /// `cᵢ` for each entry of `y_vars`; a single constant when `y_vars` is
    /// empty, used only by the truth atom.
    pub constants: Vec<String>,
}

/// Fresh constant `i` (1-based) of recursion level `level`.
pub fn level_constant(level: usize, i: usize) -> String {
    format!("_c{level}_{i}")
}

impl GuardedRewrite {
    /// The atom `c₁=c₁`, or its negation when `holds` is false.
    pub fn truth_atom(&self, holds: bool) -> Formula {
        let c = || Term::constant(self.constants[0].clone());
        let atom = Formula::eq(c(), c());
        if holds {
            atom
        } else {
            Formula::not(atom)
        }
    }

    /// `φ₁` with `φ₀` replaced by the truth atom.
    pub fn phi1_with(&self, holds: bool) -> Formula {
        self.phi1.replace_at(&self.pos1, self.truth_atom(holds))
    }

    /// Interpretation of the fresh constants for the tuple `bbar` over `y_vars`.
    pub fn constant_values(&self, bbar: &[usize]) -> Vec<(String, usize)> {
        if self.y_vars.is_empty() {
            return vec![(self.constants[0].clone(), 0)];
        }
        self.constants.iter().cloned().zip(bbar.iter().copied()).collect()
    }

    pub fn bound_count(&self) -> usize {
        self.guards.iter().filter(|g| **g == GuardKind::Bound).count()
    }
}

fn rebuild(
    node: &Formula,
    rest: &[usize],
    depth: usize,
    guards: &BTreeMap<usize, (String, String)>,
    pos1: &mut Position,
) -> Formula {
    let Some((&i, tail)) = rest.split_first() else {
        return node.clone();
    };
    if let Some((y, c)) = guards.get(&depth) {
        let Formula::Exists(v, chi) = node else {
            unreachable!("guards sit on existential quantifiers")
        };
        pos1.extend([0, 1]);
        let chi = rebuild(chi, tail, depth + 1, guards, pos1);
        return Formula::exists(
            v.clone(),
            Formula::and(Formula::eq(Term::var(y.clone()), Term::constant(c.clone())), chi),
        );
    }
    pos1.push(i);
    let child = node.child(i).expect("valid position");
    let child = rebuild(child, tail, depth + 1, guards, pos1);
    node.replace_at(&[i], child)
}

/// Builds the guarded rewrite of `phi` around the subformula at `pos`, with
/// fresh constants named for recursion level `level`.
pub fn build_guarded(phi: &Formula, pos: &[usize], level: usize) -> Result<GuardedRewrite> {
    if !phi.is_nnf() || phi.has_universal() {
        return Err(Error::Precondition(
            "guarded rewrite needs an existential formula in negation normal form".into(),
        ));
    }
    let phi0 = phi
        .at(pos)
        .ok_or_else(|| Error::Precondition(format!("no subformula at {pos:?}")))?
        .clone();
    let y_vars = free_vars(&phi0);
    let mut guards = Vec::with_capacity(y_vars.len());
    let mut at = BTreeMap::new();
    for (i, y) in y_vars.iter().enumerate() {
        let binder = (0..pos.len())
            .rev()
            .find(|&j| matches!(phi.at(&pos[..j]), Some(Formula::Exists(v, _)) if v == y));
        match binder {
            Some(j) => {
                at.insert(j, (y.clone(), level_constant(level, i + 1)));
                guards.push(GuardKind::Bound);
            }
            None => guards.push(GuardKind::FreeInPhi),
        }
    }
    let mut pos1 = Vec::new();
    let phi1 = rebuild(phi, pos, 0, &at, &mut pos1);
    let constants = (1..=y_vars.len().max(1)).map(|i| level_constant(level, i)).collect();
    Ok(GuardedRewrite {
        phi0,
        phi1,
        pos1,
        y_vars,
        guards,
        constants,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(name: &str) -> Formula {
        Formula::rel(name, vec![Term::var("x")])
    }

    #[test]
    fn split_small_conjunction() {
        let f = Formula::and(a("A"), Formula::and(a("B"), a("C")));
        assert_eq!(split_subformula(&f).unwrap(), vec![1]);
        assert!(split_subformula(&Formula::not(a("A"))).is_err());
    }

    #[test]
    fn guard_on_bound_variable() {
        let e = Formula::rel("E", vec![Term::var("x"), Term::var("y")]);
        let t = Formula::rel("T", vec![Term::var("y")]);
        let phi = Formula::exists("y", Formula::and(e.clone(), t.clone()));
        let g = build_guarded(&phi, &[0, 1], 1).unwrap();
        assert_eq!(g.phi0, t);
        assert_eq!(g.guards, vec![GuardKind::Bound]);
        let c = Term::constant("_c1_1");
        assert_eq!(
            g.phi1,
            Formula::exists(
                "y",
                Formula::and(Formula::eq(Term::var("y"), c), Formula::and(e, t.clone()))
            )
        );
        assert_eq!(g.phi1.at(&g.pos1), Some(&t));
    }

    #[test]
    fn free_variable_is_not_guarded() {
        let e = Formula::rel("E", vec![Term::var("x"), Term::var("y")]);
        let phi = Formula::and(e, Formula::and(a("A"), a("B")));
        let g = build_guarded(&phi, &[1], 0).unwrap();
        assert_eq!(g.guards, vec![GuardKind::FreeInPhi]);
        assert_eq!(g.phi1, phi);
    }
}
