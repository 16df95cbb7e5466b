//! Recursion on the syntax, one stack frame per open connective or
//! quantifier.

use crate::error::{Error, Result};
use crate::metrics::free_vars;
use crate::structure::{eval_atom_with, Assignment, Interpretation};
use crate::syntax::Formula;

use super::meter::{log2_ceil, CostModel, SpaceMeter};
use super::{Engine, EvalReport};

/// Checks that `alpha` covers the free variables of `phi` within range.
pub(crate) fn check_assignment(phi: &Formula, universe: usize, alpha: &Assignment) -> Result<()> {
    if let Some(v) = free_vars(phi).into_iter().find(|v| alpha.get(v).is_none()) {
        return Err(Error::Unassigned(v));
    }
    alpha.check_range(universe)
}

struct Brute<'a, 'f> {
    interp: &'a dyn Interpretation,
    meter: &'a mut SpaceMeter,
    frame_bits: u64,
    track_depth: bool,
    env: Vec<(&'f str, usize)>,
}

impl<'f> Brute<'_, 'f> {
    fn open(&mut self) {
        if self.track_depth {
            self.meter.push_level(self.frame_bits);
        } else {
            self.meter.charge(self.frame_bits);
        }
    }

    fn close(&mut self) {
        if self.track_depth {
            self.meter.pop_level(self.frame_bits);
        } else {
            self.meter.release(self.frame_bits);
        }
    }

    fn eval(&mut self, f: &'f Formula) -> Result<bool> {
        self.meter.counters.recursive_calls += 1;
        if f.is_atomic() {
            let env = &self.env;
            return eval_atom_with(f, self.interp, &|v| {
                env.iter().rev().find(|(n, _)| *n == v).map(|&(_, e)| e)
            });
        }
        self.open();
        let r = self.eval_compound(f);
        self.close();
        r
    }

    fn eval_compound(&mut self, f: &'f Formula) -> Result<bool> {
        match f {
            Formula::Not(g) => Ok(!self.eval(g)?),
            Formula::And(a, b) => Ok(self.eval(a)? && self.eval(b)?),
            Formula::Or(a, b) => Ok(self.eval(a)? || self.eval(b)?),
            Formula::Exists(v, g) | Formula::Forall(v, g) => {
                let want = matches!(f, Formula::Exists(..));
                for a in 0..self.interp.universe_size() {
                    self.meter.counters.assignments_enumerated += 1;
                    self.env.push((v, a));
                    let r = self.eval(g);
                    self.env.pop();
                    if r? == want {
                        return Ok(want);
                    }
                }
                Ok(!want)
            }
            Formula::Eq(..) | Formula::Rel(..) => unreachable!(),
        }
    }
}

/// Evaluates `phi` under `alpha`, charging `⌈log₂|A|⌉+1` bits per open
/// frame. With `track_depth` unset the frames count toward bits only, which
/// is how the divide-and-conquer engine runs its base case.
pub(crate) fn brute_with_meter(
    phi: &Formula,
    interp: &dyn Interpretation,
    alpha: &Assignment,
    meter: &mut SpaceMeter,
    track_depth: bool,
) -> Result<bool> {
    let mut b = Brute {
        interp,
        meter,
        frame_bits: log2_ceil(interp.universe_size()) + 1,
        track_depth,
        env: alpha.pairs().iter().map(|(v, e)| (v.as_str(), *e)).collect(),
    };
    b.eval(phi)
}

/// Brute-force evaluation of `phi` under `alpha`.
pub fn eval_brute(phi: &Formula, interp: &dyn Interpretation, alpha: &Assignment) -> Result<EvalReport> {
    check_assignment(phi, interp.universe_size(), alpha)?;
    let mut meter = SpaceMeter::new(CostModel::Brute);
    let answer = brute_with_meter(phi, interp, alpha, &mut meter, true)?;
    Ok(EvalReport::from_meter(answer, Engine::Brute, &meter))
}
