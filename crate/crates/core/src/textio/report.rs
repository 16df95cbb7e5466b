use serde::{Deserialize, Serialize};

use crate::engines::EvalReport;
use crate::error::{Error, Result};
use crate::metrics::Classification;
use crate::reach::ReachReport;
use crate::structure::Assignment;

use super::{is_variable_name, SourceSpan};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ReportMetrics {
    pub norm: usize,
    pub width: usize,
    pub vars: usize,
    pub sigma_level: Option<usize>,
    pub pi_level: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ReportSpace {
    pub peak_accounted_bits: u64,
    pub peak_depth: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ReportCounters {
    pub recursive_calls: u64,
    pub assignments_enumerated: u64,
}

/// The evaluation report as written by `eval --json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct JsonReport {
    pub answer: bool,
    pub engine: String,
    pub metrics: ReportMetrics,
    pub space: ReportSpace,
    pub counters: ReportCounters,
    pub wall_ms: f64,
}

impl JsonReport {
    pub fn new(report: &EvalReport, class: &Classification) -> Self {
        Self {
            answer: report.answer,
            engine: report.engine.to_string(),
            metrics: ReportMetrics {
                norm: class.subformula_count,
                width: class.width,
                vars: class.num_variables,
                sigma_level: class.sigma_level,
                pi_level: class.pi_level,
            },
            space: ReportSpace {
                peak_accounted_bits: report.space.peak_accounted_bits,
                peak_depth: report.space.peak_depth,
            },
            counters: ReportCounters {
                recursive_calls: report.counters.recursive_calls,
                assignments_enumerated: report.counters.assignments_enumerated,
            },
            wall_ms: report.wall_ms,
        }
    }
}

/// The reachability report as written by `reach --json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ReachJson {
    pub answer: bool,
    pub algo: String,
    pub peak_depth: usize,
    pub accounted_units: u64,
    pub budget_used: Option<u64>,
    pub wall_ms: f64,
}

impl ReachJson {
    pub fn new(algo: &str, report: &ReachReport, wall_ms: f64) -> Self {
        Self {
            answer: report.answer,
            algo: algo.to_string(),
            peak_depth: report.peak_depth,
            accounted_units: report.accounted_units,
            budget_used: report.budget_used,
            wall_ms,
        }
    }
}

/// Parses an assignment such as `x=0,y=2`. Whitespace around items is
/// ignored; the empty string is the empty assignment.
pub fn parse_assignment(text: &str) -> Result<Assignment> {
    let mut pairs = Vec::new();
    let mut col = 1;
    for item in text.split(',') {
        let span = SourceSpan::new(1, col + item.len() - item.trim_start().len());
        col += item.chars().count() + 1;
        let item = item.trim();
        if item.is_empty() {
            if text.trim().is_empty() {
                break;
            }
            return Err(Error::parse(span, "empty assignment item"));
        }
        let Some((var, value)) = item.split_once('=') else {
            return Err(Error::parse(span, format!("expected `var=element`, found `{item}`")));
        };
        let var = var.trim();
        if !is_variable_name(var) {
            return Err(Error::parse(span, format!("`{var}` is not a variable name")));
        }
        let value = value
            .trim()
            .parse()
            .map_err(|_| Error::parse(span, format!("`{}` is not an element", value.trim())))?;
        pairs.push((var.to_string(), value));
    }
    Assignment::from_pairs(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn assignment_spec() {
        let a = parse_assignment("x=0, y=2").unwrap();
        assert_eq!(a.get("x"), Some(0));
        assert_eq!(a.get("y"), Some(2));
        assert!(parse_assignment("").unwrap().is_empty());
        assert!(parse_assignment("x=0,x=1").is_err());
        let err = parse_assignment("x=0,Y=1").unwrap_err();
        assert_eq!(err.span(), Some(SourceSpan::new(1, 5)));
    }
}
