//! Text formats: formulas, `.fos` structures, digraphs, JSON reports and the
//! bench CSV header.

use std::fmt;

use serde::{Deserialize, Serialize};

mod formula;
mod fos;
mod graph;
mod report;

pub use formula::{parse_formula, parse_formula_infer, print_formula};
pub use fos::{parse_structure, print_structure};
pub use graph::{parse_digraph, print_digraph};
pub use report::{parse_assignment, JsonReport, ReachJson, ReportCounters, ReportMetrics, ReportSpace};

/// Header line of the bench CSV output.
pub const BENCH_CSV_HEADER: &str = "family,k,norm,width,universe,engine,answer,peakAccountedBits,peakDepth,wallMs";

/// 1-based line and column of a parse diagnostic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SourceSpan {
    pub line: usize,
    pub column: usize,
}

impl SourceSpan {
    pub fn new(line: usize, column: usize) -> Self {
        Self { line, column }
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

/// Variable names: `[a-z][a-z0-9_]*`.
pub fn is_variable_name(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some('a'..='z')) && cs.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

/// Symbol names declared in `.fos` files: `[A-Za-z][A-Za-z0-9_]*`.
pub fn is_symbol_name(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_alphabetic()) && cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
}
