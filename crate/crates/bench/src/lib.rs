//! Fixed inputs shared by the criterion benches.

use fomc_core::bench::{bench_instance, Family};
use fomc_core::gen::{random_digraph, rng};
use fomc_core::{Digraph, Formula, Structure};

/// Chain sentence for `k` over a directed path on `n` vertices.
pub fn chain(k: usize, n: usize) -> (Structure, Formula) {
    bench_instance(Family::Chain, k, n, 0).expect("chain instances are valid")
}

/// Random digraph with edge probability `2/n`, seeded by `n`.
pub fn sparse_digraph(n: usize) -> Digraph {
    random_digraph(&mut rng(n as u64), n, (2.0 / n as f64).min(1.0))
}
