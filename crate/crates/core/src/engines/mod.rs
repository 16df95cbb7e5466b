//! Evaluation engines and their shared accounted-space meter.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::{alternation_levels, nnf};
use crate::structure::{Assignment, Structure};
use crate::syntax::Formula;

mod bottom_up;
mod brute;
mod dnc;
mod meter;
mod sigma;
mod split;

pub use bottom_up::{eval_bottom_up, eval_bottom_up_at, BottomUpResult, Table};
pub use brute::eval_brute;
pub use dnc::{
    eval_dnc_sigma1, DncMode, DncOptions, DncOutcome, Possibility, PossibilityTrace, TraceEntry, TraceEvent,
    DNC_THRESHOLD_C,
};
pub use meter::{log2_ceil, CostModel, Counters, SpaceMeter, SpaceSnapshot};
pub use sigma::eval_sigma_t;
pub use split::{build_guarded, level_constant, split_subformula, GuardKind, GuardedRewrite};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Brute,
    BottomUp,
    Dnc,
    Auto,
}

impl Engine {
    pub fn name(self) -> &'static str {
        match self {
            Engine::Brute => "brute",
            Engine::BottomUp => "bottomup",
            Engine::Dnc => "dnc",
            Engine::Auto => "auto",
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Engine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "brute" => Ok(Engine::Brute),
            "bottomup" => Ok(Engine::BottomUp),
            "dnc" => Ok(Engine::Dnc),
            "auto" => Ok(Engine::Auto),
            other => Err(Error::Precondition(format!("unknown engine `{other}`"))),
        }
    }
}

/// Answer of one evaluation with its telemetry. `engine` names the engine
/// that actually ran.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EvalReport {
    pub answer: bool,
    pub engine: Engine,
    pub space: SpaceSnapshot,
    pub counters: Counters,
    pub wall_ms: f64,
}

impl EvalReport {
    pub(crate) fn from_meter(answer: bool, engine: Engine, meter: &SpaceMeter) -> Self {
        Self {
            answer,
            engine,
            space: meter.snapshot(),
            counters: meter.counters,
            wall_ms: 0.0,
        }
    }
}

/// Evaluates `phi` in `a` at `alpha` with the requested engine.
///
/// `Auto` picks the `Σ_t` evaluator when `phi` has a `Σ` level, bottom-up
/// evaluation of the negation normal form when `phi` is function-free, and
/// brute force otherwise.
pub fn evaluate(phi: &Formula, a: &Structure, engine: Engine, alpha: &Assignment) -> Result<EvalReport> {
    a.vocabulary().check_formula(phi)?;
    let start = Instant::now();
    let sigma = alternation_levels(phi).0;
    let mut report = match engine {
        Engine::Brute => eval_brute(phi, a, alpha)?,
        Engine::BottomUp => eval_bottom_up_at(phi, a, alpha)?,
        Engine::Dnc => match sigma {
            Some(_) => eval_sigma_t(phi, a, alpha, DncOptions::default())?,
            None => return Err(Error::Unclassified(phi.to_string())),
        },
        Engine::Auto => {
            if sigma.is_some() {
                eval_sigma_t(phi, a, alpha, DncOptions::default())?
            } else if !phi.has_functions() {
                eval_bottom_up_at(&nnf(phi), a, alpha)?
            } else {
                eval_brute(phi, a, alpha)?
            }
        }
    };
    report.wall_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(report)
}
