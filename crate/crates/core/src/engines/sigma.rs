//! Evaluation of `Σ_t` formulas by replacing maximal universal subformulas
//! with fresh relations and handing the existential remainder to the
//! divide-and-conquer engine.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::metrics::{alternation_levels, free_vars, nnf, width};
use crate::structure::{Assignment, Expansion, Interpretation, TupleSet};
use crate::syntax::{Formula, Term};

use super::brute::check_assignment;
use super::dnc::{eval_dnc_sigma1, DncOptions};
use super::meter::{Counters, SpaceSnapshot};
use super::{Engine, EvalReport};

/// Fresh symbols and accumulated telemetry of one reduction.
struct Reduced {
    formula: Formula,
    relations: Vec<(String, Arc<TupleSet>)>,
    constants: Vec<(String, usize)>,
}

struct Sigma {
    w: usize,
    options: DncOptions,
    space: Option<SpaceSnapshot>,
    counters: Counters,
}

impl Sigma {
    fn dnc(&mut self, phi: &Formula, interp: &dyn Interpretation, alpha: &Assignment) -> Result<bool> {
        let out = eval_dnc_sigma1(phi, self.w, interp, alpha, self.options)?;
        self.counters.add(&out.report.counters);
        self.space = Some(match self.space {
            Some(s) => s.max(out.report.space),
            None => out.report.space,
        });
        Ok(out.report.answer)
    }

    /// Replaces the maximal universal subformulas of the NNF formula `psi`
    /// by atoms over fresh symbols interpreted in `base`.
    fn reduce(&mut self, psi: &Formula, base: &dyn Interpretation, depth: usize) -> Result<Reduced> {
        let mut found = Vec::new();
        collect_universal(psi, &mut Vec::new(), &mut found);
        let mut formula = psi.clone();
        let mut relations = Vec::new();
        let mut constants = Vec::new();
        for (j, pos) in found.iter().enumerate() {
            let sub = psi.at(pos).expect("collected position");
            let xs = free_vars(sub);
            let chi = nnf(&Formula::not(sub.clone()));
            let inner = self.reduce(&chi, base, depth + 1)?;
            let interp = Expansion::new(base)
                .with_constants(inner.constants.iter().cloned())
                .with_relations(inner.relations.iter().cloned());
            let replacement = if xs.is_empty() {
                let holds = !self.dnc(&inner.formula, &interp, &Assignment::new())?;
                let name = format!("_s{depth}_{}", j + 1);
                constants.push((name.clone(), 0));
                let atom = Formula::eq(Term::constant(name.clone()), Term::constant(name));
                if holds {
                    atom
                } else {
                    Formula::not(atom)
                }
            } else {
                let mut rows = TupleSet::new();
                let n = base.universe_size();
                let mut t = vec![0; xs.len()];
                'outer: loop {
                    if !self.dnc(&inner.formula, &interp, &Assignment::zip(&xs, &t))? {
                        rows.insert(t.clone());
                    }
                    for i in (0..t.len()).rev() {
                        t[i] += 1;
                        if t[i] < n {
                            continue 'outer;
                        }
                        t[i] = 0;
                    }
                    break;
                }
                let name = format!("_R{depth}_{}", j + 1);
                relations.push((name.clone(), Arc::new(rows)));
                Formula::rel(name, xs.into_iter().map(Term::var).collect())
            };
            formula = formula.replace_at(pos, replacement);
        }
        Ok(Reduced {
            formula,
            relations,
            constants,
        })
    }
}

/// Positions of the universal subformulas not below another universal
/// quantifier, in preorder.
fn collect_universal(f: &Formula, pos: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if let Formula::Forall(..) = f {
        out.push(pos.clone());
        return;
    }
    for (i, c) in f.children().into_iter().enumerate() {
        pos.push(i);
        collect_universal(c, pos, out);
        pos.pop();
    }
}

/// Evaluates a formula with a defined `Σ_t` level at `alpha`.
pub fn eval_sigma_t(
    phi: &Formula,
    interp: &dyn Interpretation,
    alpha: &Assignment,
    options: DncOptions,
) -> Result<EvalReport> {
    let (sigma, _) = alternation_levels(phi);
    if sigma.is_none() {
        return Err(Error::Unclassified(phi.to_string()));
    }
    check_assignment(phi, interp.universe_size(), alpha)?;
    let psi = nnf(phi);
    let mut s = Sigma {
        w: width(&psi),
        options: DncOptions {
            record_history: false,
            ..options
        },
        space: None,
        counters: Counters::default(),
    };
    let reduced = s.reduce(&psi, interp, 0)?;
    let top = Expansion::new(interp)
        .with_constants(reduced.constants)
        .with_relations(reduced.relations);
    let answer = s.dnc(&reduced.formula, &top, alpha)?;
    Ok(EvalReport {
        answer,
        engine: Engine::Dnc,
        space: s.space.expect("at least one run"),
        counters: s.counters,
        wall_ms: 0.0,
    })
}
