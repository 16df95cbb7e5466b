use serde::{Deserialize, Serialize};

/// Which engine's charging rules a meter applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CostModel {
    Brute,
    BottomUp,
    Dnc,
}

/// Enumeration counters reported alongside the space figures.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Counters {
    pub recursive_calls: u64,
    pub assignments_enumerated: u64,
}

impl Counters {
    pub fn add(&mut self, other: &Counters) {
        self.recursive_calls += other.recursive_calls;
        self.assignments_enumerated += other.assignments_enumerated;
    }
}

/// Peak figures of a finished run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SpaceSnapshot {
    pub model: CostModel,
    pub peak_depth: usize,
    pub peak_accounted_bits: u64,
}

impl SpaceSnapshot {
    /// Peaks of two runs whose storage is never live at the same time.
    pub fn max(self, other: SpaceSnapshot) -> SpaceSnapshot {
        SpaceSnapshot {
            model: self.model,
            peak_depth: self.peak_depth.max(other.peak_depth),
            peak_accounted_bits: self.peak_accounted_bits.max(other.peak_accounted_bits),
        }
    }
}

/// Accounted-space meter. Depth counts the frames an engine declares as
/// levels; bits are charged and released explicitly.
#[derive(Debug, Clone)]
pub struct SpaceMeter {
    model: CostModel,
    depth: usize,
    peak_depth: usize,
    bits: u64,
    peak_bits: u64,
    pub counters: Counters,
}

impl SpaceMeter {
    pub fn new(model: CostModel) -> Self {
        Self {
            model,
            depth: 0,
            peak_depth: 0,
            bits: 0,
            peak_bits: 0,
            counters: Counters::default(),
        }
    }

    pub fn model(&self) -> CostModel {
        self.model
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    /// Opens a level and charges `bits` for it.
    pub fn push_level(&mut self, bits: u64) {
        self.depth += 1;
        self.peak_depth = self.peak_depth.max(self.depth);
        self.charge(bits);
    }

    pub fn pop_level(&mut self, bits: u64) {
        debug_assert!(self.depth > 0);
        self.depth -= 1;
        self.release(bits);
    }

    pub fn charge(&mut self, bits: u64) {
        self.bits += bits;
        self.peak_bits = self.peak_bits.max(self.bits);
    }

    pub fn release(&mut self, bits: u64) {
        debug_assert!(self.bits >= bits);
        self.bits -= bits;
    }

    pub fn snapshot(&self) -> SpaceSnapshot {
        SpaceSnapshot {
            model: self.model,
            peak_depth: self.peak_depth,
            peak_accounted_bits: self.peak_bits,
        }
    }
}

/// `⌈log₂ n⌉`, with `0` for `n ≤ 1`.
pub fn log2_ceil(n: usize) -> u64 {
    if n <= 1 {
        0
    } else {
        u64::from(usize::BITS - (n - 1).leading_zeros())
    }
}
