//! Bottom-up evaluation: one table of satisfying assignments per subformula
//! occurrence, over that occurrence's free variables.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::metrics::free_vars;
use crate::structure::{eval_atom_with, Assignment, Interpretation};
use crate::syntax::Formula;

use super::brute::check_assignment;
use super::meter::{log2_ceil, CostModel, SpaceMeter};
use super::{Engine, EvalReport};

/// Satisfying assignments of a formula, as tuples over `vars`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub vars: Vec<String>,
    pub rows: BTreeSet<Vec<usize>>,
}

impl Table {
    /// Whether the restriction of `alpha` to the table's variables is a row.
    pub fn contains(&self, alpha: &Assignment) -> Result<bool> {
        let row = self
            .vars
            .iter()
            .map(|v| alpha.get(v).ok_or_else(|| Error::Unassigned(v.clone())))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.rows.contains(&row))
    }
}

#[derive(Debug, Clone)]
pub struct BottomUpResult {
    pub report: EvalReport,
    pub table: Table,
}

/// Calls `f` on every tuple of `[0,n)^k` in lexicographic order.
fn for_each_tuple(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    let mut t = vec![0; k];
    if k > 0 && n == 0 {
        return;
    }
    loop {
        f(&t);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            t[i] += 1;
            if t[i] < n {
                break;
            }
            t[i] = 0;
        }
    }
}

/// Positions of `sub` variables inside `sup`.
fn alignment(sub: &[String], sup: &[String]) -> Vec<usize> {
    sub.iter()
        .map(|v| sup.iter().position(|w| w == v).expect("subset of variables"))
        .collect()
}

fn project(t: &[usize], idx: &[usize]) -> Vec<usize> {
    idx.iter().map(|&i| t[i]).collect()
}

struct BottomUp<'a> {
    interp: &'a dyn Interpretation,
    n: usize,
    elem_bits: u64,
    meter: SpaceMeter,
}

impl BottomUp<'_> {
    fn table_bits(&self, t: &Table) -> u64 {
        (t.rows.len() * t.vars.len()) as u64 * self.elem_bits
    }

    fn eval(&mut self, f: &Formula) -> Result<Table> {
        self.meter.counters.recursive_calls += 1;
        self.meter.push_level(0);
        let r = self.eval_node(f);
        self.meter.pop_level(0);
        let t = r?;
        self.meter.charge(self.table_bits(&t));
        Ok(t)
    }

    fn consume(&mut self, t: &Table) {
        self.meter.release(self.table_bits(t));
    }

    fn eval_node(&mut self, f: &Formula) -> Result<Table> {
        let vars = free_vars(f);
        let mut rows = BTreeSet::new();
        let n = self.n;
        match f {
            Formula::Eq(..) | Formula::Rel(..) => {
                let mut err = None;
                let interp = self.interp;
                let counters = &mut self.meter.counters;
                for_each_tuple(n, vars.len(), |t| {
                    counters.assignments_enumerated += 1;
                    let lookup = |v: &str| vars.iter().position(|w| w == v).map(|i| t[i]);
                    match eval_atom_with(f, interp, &lookup) {
                        Ok(true) => {
                            rows.insert(t.to_vec());
                        }
                        Ok(false) => {}
                        Err(e) => err = Some(e),
                    }
                });
                if let Some(e) = err {
                    return Err(e);
                }
            }
            Formula::Not(g) => {
                let tg = self.eval(g)?;
                let counters = &mut self.meter.counters;
                for_each_tuple(n, vars.len(), |t| {
                    counters.assignments_enumerated += 1;
                    if !tg.rows.contains(t) {
                        rows.insert(t.to_vec());
                    }
                });
                self.consume(&tg);
            }
            Formula::And(a, b) | Formula::Or(a, b) => {
                let conj = matches!(f, Formula::And(..));
                let ta = self.eval(a)?;
                let tb = self.eval(b)?;
                let (ia, ib) = (alignment(&ta.vars, &vars), alignment(&tb.vars, &vars));
                let counters = &mut self.meter.counters;
                for_each_tuple(n, vars.len(), |t| {
                    counters.assignments_enumerated += 1;
                    let ha = ta.rows.contains(&project(t, &ia));
                    let keep = if conj {
                        ha && tb.rows.contains(&project(t, &ib))
                    } else {
                        ha || tb.rows.contains(&project(t, &ib))
                    };
                    if keep {
                        rows.insert(t.to_vec());
                    }
                });
                self.consume(&ta);
                self.consume(&tb);
            }
            Formula::Exists(v, g) => {
                let tg = self.eval(g)?;
                self.consume(&tg);
                let Some(drop) = tg.vars.iter().position(|w| w == v) else {
                    return Ok(tg);
                };
                for r in &tg.rows {
                    self.meter.counters.assignments_enumerated += 1;
                    let mut p = r.clone();
                    p.remove(drop);
                    rows.insert(p);
                }
            }
            Formula::Forall(v, g) => {
                let tg = self.eval(g)?;
                self.consume(&tg);
                let Some(slot) = tg.vars.iter().position(|w| w == v) else {
                    return Ok(tg);
                };
                let counters = &mut self.meter.counters;
                for_each_tuple(n, vars.len(), |t| {
                    let mut full = t.to_vec();
                    full.insert(slot, 0);
                    let all = (0..n).all(|a| {
                        counters.assignments_enumerated += 1;
                        full[slot] = a;
                        tg.rows.contains(&full)
                    });
                    if all {
                        rows.insert(t.to_vec());
                    }
                });
            }
        }
        Ok(Table { vars, rows })
    }
}

/// Computes the table of `phi` over its free variables. Function symbols are
/// rejected; translate them away with
/// [`eliminate_functions`](crate::reductions::eliminate_functions) first.
pub fn eval_bottom_up(phi: &Formula, interp: &dyn Interpretation) -> Result<BottomUpResult> {
    if phi.has_functions() {
        return Err(Error::Unsupported(
            "bottom-up evaluation needs a function-free formula; run eliminate_functions first".into(),
        ));
    }
    let n = interp.universe_size();
    let mut bu = BottomUp {
        interp,
        n,
        elem_bits: log2_ceil(n).max(1),
        meter: SpaceMeter::new(CostModel::BottomUp),
    };
    let table = bu.eval(phi)?;
    let answer = !table.rows.is_empty();
    Ok(BottomUpResult {
        report: EvalReport::from_meter(answer, Engine::BottomUp, &bu.meter),
        table,
    })
}

/// Bottom-up evaluation of `phi` at `alpha`.
pub fn eval_bottom_up_at(phi: &Formula, interp: &dyn Interpretation, alpha: &Assignment) -> Result<EvalReport> {
    check_assignment(phi, interp.universe_size(), alpha)?;
    let mut r = eval_bottom_up(phi, interp)?;
    r.report.answer = r.table.contains(alpha)?;
    Ok(r.report)
}
