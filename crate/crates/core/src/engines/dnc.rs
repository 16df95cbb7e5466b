//! Divide-and-conquer evaluation of existential formulas in negation normal
//! form.
//!
//! Each level splits off a subformula `φ₀`, loops over candidate values `b̄`
//! for its free variables, decides `φ₀(b̄)` recursively (possibility `P0`)
//! and then recursively evaluates the guarded remainder with `φ₀` replaced
//! by a truth atom (`P1` if `φ₀(b̄)` held, `P2` otherwise).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::{subformula_count, width};
use crate::structure::{Assignment, Expansion, Interpretation};
use crate::syntax::Formula;

use super::brute::{brute_with_meter, check_assignment};
use super::meter::{log2_ceil, CostModel, SpaceMeter};
use super::split::{build_guarded, split_subformula, GuardKind, GuardedRewrite};
use super::{Engine, EvalReport};

/// Formulas with fewer than `C·w + C` subformulas go to the brute-force
/// base case.
pub const DNC_THRESHOLD_C: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Possibility {
    P0,
    P1,
    P2,
}

/// One level of the possibility trace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEntry {
    pub bbar: Assignment,
    pub possibility: Possibility,
}

pub type PossibilityTrace = Vec<TraceEntry>;

/// A push onto the trace: the trace length after the push and the new entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEvent {
    pub depth: usize,
    pub entry: TraceEntry,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum DncMode {
    /// Each level keeps its current formula.
    #[default]
    Direct,
    /// Each level recomputes its formula and expansion from the root and the
    /// trace.
    Faithful,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct DncOptions {
    pub mode: DncMode,
    pub record_history: bool,
}

#[derive(Debug, Clone)]
pub struct DncOutcome {
    pub report: EvalReport,
    pub history: Vec<TraceEvent>,
}

/// Current formula, constants fixed so far, and current assignment.
type Replay = (Formula, Vec<(String, usize)>, Assignment);

struct Dnc<'a> {
    w: usize,
    level_bits: u64,
    options: DncOptions,
    meter: SpaceMeter,
    trace: PossibilityTrace,
    history: Vec<TraceEvent>,
    base: &'a dyn Interpretation,
    root: &'a Formula,
    root_alpha: &'a Assignment,
}

/// The candidate tuples `b̄` over `ȳ`: bound variables range over the
/// universe, variables free in `φ` are pinned to their value in `alpha`.
fn candidates(g: &GuardedRewrite, alpha: &Assignment, n: usize) -> Result<Vec<Vec<usize>>> {
    let mut ranges = Vec::with_capacity(g.y_vars.len());
    for (y, kind) in g.y_vars.iter().zip(&g.guards) {
        ranges.push(match kind {
            GuardKind::Bound => (0..n).collect::<Vec<_>>(),
            GuardKind::FreeInPhi => vec![alpha.get(y).ok_or_else(|| Error::Unassigned(y.clone()))?],
        });
    }
    let mut out = vec![Vec::new()];
    for r in ranges {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                r.iter().map(move |&b| {
                    let mut t = prefix.clone();
                    t.push(b);
                    t
                })
            })
            .collect();
    }
    Ok(out)
}

impl Dnc<'_> {
    fn push(&mut self, bbar: Assignment, possibility: Possibility) {
        self.meter.push_level(self.level_bits);
        let entry = TraceEntry { bbar, possibility };
        if self.options.record_history {
            self.history.push(TraceEvent {
                depth: self.trace.len() + 1,
                entry: entry.clone(),
            });
        }
        self.trace.push(entry);
    }

    fn pop(&mut self) {
        self.trace.pop();
        self.meter.pop_level(self.level_bits);
    }

    /// Replays the trace from the root: the current formula, the constants
    /// fixed so far, and the current assignment.
    fn reconstruct(&self) -> Result<Replay> {
        let mut psi = self.root.clone();
        let mut alpha = self.root_alpha.clone();
        let mut constants = Vec::new();
        for (level, e) in self.trace.iter().enumerate() {
            let pos = split_subformula(&psi)?;
            let g = build_guarded(&psi, &pos, level)?;
            let values: Vec<usize> = e.bbar.pairs().iter().map(|&(_, b)| b).collect();
            match e.possibility {
                Possibility::P0 => {
                    psi = g.phi0;
                    alpha = e.bbar.clone();
                }
                Possibility::P1 | Possibility::P2 => {
                    psi = g.phi1_with(e.possibility == Possibility::P1);
                    constants.extend(g.constant_values(&values));
                }
            }
        }
        Ok((psi, constants, alpha))
    }

    fn run(&mut self, phi: &Formula, interp: &dyn Interpretation, alpha: &Assignment) -> Result<bool> {
        self.meter.counters.recursive_calls += 1;
        if subformula_count(phi) < DNC_THRESHOLD_C * (self.w + 1) {
            return brute_with_meter(phi, interp, alpha, &mut self.meter, false);
        }
        let level = self.trace.len();
        let pos = split_subformula(phi)?;
        let g = build_guarded(phi, &pos, level)?;
        for bbar in candidates(&g, alpha, interp.universe_size())? {
            self.meter.counters.assignments_enumerated += 1;
            let b = Assignment::zip(&g.y_vars, &bbar);

            self.push(b.clone(), Possibility::P0);
            let r0 = match self.options.mode {
                DncMode::Direct => self.run(&g.phi0, interp, &b),
                DncMode::Faithful => self.step(),
            };
            self.pop();
            let r0 = r0?;

            let p = if r0 { Possibility::P1 } else { Possibility::P2 };
            self.push(b, p);
            let r1 = match self.options.mode {
                DncMode::Direct => {
                    let expanded = Expansion::new(interp).with_constants(g.constant_values(&bbar));
                    self.run(&g.phi1_with(r0), &expanded, alpha)
                }
                DncMode::Faithful => self.step(),
            };
            self.pop();
            if r1? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// One faithful-mode call: rebuild the current instance from the trace.
    fn step(&mut self) -> Result<bool> {
        let (psi, constants, alpha) = self.reconstruct()?;
        let base = self.base;
        let interp = Expansion::new(base).with_constants(constants);
        self.run(&psi, &interp, &alpha)
    }
}

/// Evaluates an existential formula in negation normal form at `alpha`.
/// `w` must bound the width of `phi`; it fixes the brute-force threshold and
/// the charge of `w·⌈log₂|A|⌉+2` bits per level.
pub fn eval_dnc_sigma1(
    phi: &Formula,
    w: usize,
    interp: &dyn Interpretation,
    alpha: &Assignment,
    options: DncOptions,
) -> Result<DncOutcome> {
    if !phi.is_nnf() || phi.has_universal() {
        return Err(Error::Precondition(
            "divide-and-conquer evaluation needs an existential formula in negation normal form".into(),
        ));
    }
    let actual = width(phi);
    if w < actual {
        return Err(Error::Precondition(format!(
            "width bound {w} is below the formula width {actual}"
        )));
    }
    check_assignment(phi, interp.universe_size(), alpha)?;
    let mut d = Dnc {
        w,
        level_bits: w as u64 * log2_ceil(interp.universe_size()) + 2,
        options,
        meter: SpaceMeter::new(CostModel::Dnc),
        trace: Vec::new(),
        history: Vec::new(),
        base: interp,
        root: phi,
        root_alpha: alpha,
    };
    let answer = match options.mode {
        DncMode::Direct => d.run(phi, interp, alpha)?,
        DncMode::Faithful => d.step()?,
    };
    Ok(DncOutcome {
        report: EvalReport::from_meter(answer, Engine::Dnc, &d.meter),
        history: d.history,
    })
}
