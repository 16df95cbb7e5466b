//! Benchmark rows and the CSV they are written as.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::Serialize;

use crate::digraph::Digraph;
use crate::engines::{evaluate, Engine};
use crate::error::{Error, Result};
use crate::gen::{random_sigma1_sentence, random_structure, random_vocabulary, rng, VocabParams};
use crate::metrics::{subformula_count, width};
use crate::reductions::{stcon_to_mc, StconInstance};
use crate::structure::{Assignment, Structure};
use crate::syntax::Formula;
use crate::textio::BENCH_CSV_HEADER;

/// One `(instance, engine)` measurement.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BenchRow {
    pub family: String,
    pub k: usize,
    pub norm: usize,
    pub width: usize,
    pub universe: usize,
    pub engine: Engine,
    pub answer: bool,
    pub peak_accounted_bits: u64,
    pub peak_depth: usize,
    pub wall_ms: f64,
}

impl BenchRow {
    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{:.3}",
            self.family,
            self.k,
            self.norm,
            self.width,
            self.universe,
            self.engine,
            self.answer,
            self.peak_accounted_bits,
            self.peak_depth,
            self.wall_ms
        )
    }
}

/// Instance families for the bench.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Chain sentences for path length `k` over a directed path whose end
    /// is reachable in exactly `n-1` steps.
    Chain,
    /// Random existential sentences of norm `8k+4` over a random structure.
    Random,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Chain => "chain",
            Family::Random => "random",
        })
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "chain" => Ok(Family::Chain),
            "random" => Ok(Family::Random),
            other => Err(Error::Precondition(format!("unknown bench family `{other}`"))),
        }
    }
}

/// Bench configuration. `universe` is the number of graph vertices for
/// chains and the universe size for random instances.
#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub family: Family,
    pub ks: Vec<usize>,
    pub engines: Vec<Engine>,
    pub universe: usize,
    pub seed: u64,
}

/// The instance of `family` for parameter `k`.
pub fn bench_instance(family: Family, k: usize, universe: usize, seed: u64) -> Result<(Structure, Formula)> {
    match family {
        Family::Chain => {
            let n = universe.max(1);
            let g = Digraph::from_edges(n, (1..n).map(|v| (v - 1, v)))?;
            stcon_to_mc(&StconInstance::new(g, 0, n - 1, k)?)
        }
        Family::Random => {
            let mut r = rng(seed ^ (k as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
            let voc = random_vocabulary(&mut r, &VocabParams::default())?;
            let a = random_structure(&mut r, &voc, universe.max(1), 0.3)?;
            let phi = random_sigma1_sentence(&mut r, &voc, 2, 8 * k + 4)?;
            Ok((a, phi))
        }
    }
}

/// Runs every engine on every instance, one row per pair.
pub fn run_bench(cfg: &BenchConfig) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::new();
    for &k in &cfg.ks {
        let (a, phi) = bench_instance(cfg.family, k, cfg.universe, cfg.seed)?;
        for &engine in &cfg.engines {
            let rep = evaluate(&phi, &a, engine, &Assignment::new())?;
            rows.push(BenchRow {
                family: cfg.family.to_string(),
                k,
                norm: subformula_count(&phi),
                width: width(&phi),
                universe: a.universe(),
                engine: rep.engine,
                answer: rep.answer,
                peak_accounted_bits: rep.space.peak_accounted_bits,
                peak_depth: rep.space.peak_depth,
                wall_ms: rep.wall_ms,
            });
        }
    }
    Ok(rows)
}

/// Writes the header and the rows.
pub fn write_csv<W: Write>(mut out: W, rows: &[BenchRow]) -> std::io::Result<()> {
    writeln!(out, "{BENCH_CSV_HEADER}")?;
    for r in rows {
        writeln!(out, "{}", r.csv_line())?;
    }
    Ok(())
}
