//! Reachability: a BFS oracle, Savitch's midpoint recursion, the k-ary
//! recursion over implicit power graphs, and the diagonal budget search.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::digraph::Digraph;
use crate::engines::log2_ceil;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ReachReport {
    pub answer: bool,
    pub peak_depth: usize,
    pub accounted_units: u64,
    /// Budget of the run that produced the verdict, for diagonal runs.
    pub budget_used: Option<u64>,
}

/// Length of a shortest path from `s` to `t`, if any.
pub fn bfs_distance(g: &Digraph, s: usize, t: usize) -> Result<Option<usize>> {
    g.check(s)?;
    g.check(t)?;
    let mut dist = vec![usize::MAX; g.vertex_count()];
    dist[s] = 0;
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        if u == t {
            return Ok(Some(dist[u]));
        }
        for &v in g.successors(u) {
            if dist[v] == usize::MAX {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    Ok(None)
}

/// Whether `t` is reachable from `s` by a path of length at most `k`
/// (any length when `k` is `None`).
pub fn bfs_reach(g: &Digraph, s: usize, t: usize, k: Option<usize>) -> Result<bool> {
    Ok(match bfs_distance(g, s, t)? {
        Some(d) => k.is_none_or(|k| d <= k),
        None => false,
    })
}

struct Savitch<'a> {
    g: &'a Digraph,
    peak: usize,
}

impl Savitch<'_> {
    fn reach(&mut self, u: usize, v: usize, k: usize, depth: usize) -> bool {
        if k <= 1 {
            return u == v || (k == 1 && self.g.has_edge(u, v));
        }
        self.peak = self.peak.max(depth + 1);
        let (first, second) = (k.div_ceil(2), k / 2);
        (0..self.g.vertex_count())
            .any(|mid| self.reach(u, mid, first, depth + 1) && self.reach(mid, v, second, depth + 1))
    }
}

/// Savitch's recursion for paths of length at most `k`. Each splitting
/// level stores two endpoints, a midpoint and a length.
pub fn savitch_reach(g: &Digraph, s: usize, t: usize, k: usize) -> Result<ReachReport> {
    g.check(s)?;
    g.check(t)?;
    let mut sv = Savitch { g, peak: 0 };
    let answer = sv.reach(s, t, k, 0);
    let per_level = 3 * log2_ceil(g.vertex_count()) + log2_ceil(k + 1);
    Ok(ReachReport {
        answer,
        peak_depth: sv.peak,
        accounted_units: sv.peak as u64 * per_level,
        budget_used: None,
    })
}

/// Raised through edge queries when a budgeted run exceeds its budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OverBudget;

pub type EdgeQuery<'q> = dyn FnMut(usize, usize) -> Result<bool, OverBudget> + 'q;

/// Decides whether a graph on `0..n`, seen only through `edge`, has a path
/// of length at most `k` from `u` to `v`.
pub trait BoundedPathSolver {
    fn bounded_path(
        &self,
        n: usize,
        u: usize,
        v: usize,
        k: usize,
        edge: &mut EdgeQuery<'_>,
    ) -> Result<bool, OverBudget>;
}

/// Breadth-first search that expands layers `1..k` and only tests the
/// target on the last layer.
#[derive(Debug, Clone, Copy, Default)]
pub struct LayeredBfs;

impl BoundedPathSolver for LayeredBfs {
    fn bounded_path(
        &self,
        n: usize,
        u: usize,
        v: usize,
        k: usize,
        edge: &mut EdgeQuery<'_>,
    ) -> Result<bool, OverBudget> {
        if u == v {
            return Ok(true);
        }
        let mut visited = vec![false; n];
        visited[u] = true;
        let mut frontier = vec![u];
        for step in 1..=k {
            if step == k {
                for &x in &frontier {
                    if edge(x, v)? {
                        return Ok(true);
                    }
                }
                return Ok(false);
            }
            let mut next = Vec::new();
            for &x in &frontier {
                // `y` is also the edge query's argument.
                #[allow(clippy::needless_range_loop)]
                for y in 0..n {
                    if !visited[y] && edge(x, y)? {
                        if y == v {
                            return Ok(true);
                        }
                        visited[y] = true;
                        next.push(y);
                    }
                }
            }
            if next.is_empty() {
                return Ok(false);
            }
            frontier = next;
        }
        Ok(false)
    }
}

/// Depth-first enumeration of paths of length at most `k`.
#[derive(Debug, Clone, Copy, Default)]
pub struct PathDfs;

impl PathDfs {
    fn dfs(n: usize, x: usize, v: usize, left: usize, edge: &mut EdgeQuery<'_>) -> Result<bool, OverBudget> {
        if x == v {
            return Ok(true);
        }
        if left == 0 {
            return Ok(false);
        }
        for y in 0..n {
            if edge(x, y)? && Self::dfs(n, y, v, left - 1, edge)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

impl BoundedPathSolver for PathDfs {
    fn bounded_path(
        &self,
        n: usize,
        u: usize,
        v: usize,
        k: usize,
        edge: &mut EdgeQuery<'_>,
    ) -> Result<bool, OverBudget> {
        Self::dfs(n, u, v, k, edge)
    }
}

/// Least `ℓ` with `k^ℓ ≥ n−1`.
pub fn ck_levels(n: usize, k: usize) -> usize {
    let target = n.saturating_sub(1) as u128;
    let mut l = 0;
    let mut p: u128 = 1;
    while p < target {
        p *= k as u128;
        l += 1;
    }
    l
}

/// Units charged per level of the k-ary recursion: two vertices and a
/// step counter below `k`.
pub fn ck_level_charge(n: usize, k: usize) -> u64 {
    2 * log2_ceil(n) + log2_ceil(k)
}

struct Ck<'a> {
    g: &'a Digraph,
    k: usize,
    solver: &'a dyn BoundedPathSolver,
    per_level: u64,
    budget: Option<u64>,
    units: u64,
    peak_units: u64,
    depth: usize,
    peak_depth: usize,
}

impl Ck<'_> {
    /// Whether `(u, v)` is an edge of the `i`-th implicit power graph, whose
    /// edges are the paths of length at most `k^i`.
    fn query(&mut self, i: usize, u: usize, v: usize) -> Result<bool, OverBudget> {
        if i == 0 {
            return Ok(u == v || self.g.has_edge(u, v));
        }
        self.units += self.per_level;
        if self.budget.is_some_and(|b| self.units > b) {
            self.units -= self.per_level;
            return Err(OverBudget);
        }
        self.peak_units = self.peak_units.max(self.units);
        self.depth += 1;
        self.peak_depth = self.peak_depth.max(self.depth);
        let solver = self.solver;
        let n = self.g.vertex_count();
        let k = self.k;
        let r = solver.bounded_path(n, u, v, k, &mut |a, b| self.query(i - 1, a, b));
        self.depth -= 1;
        self.units -= self.per_level;
        r
    }
}

/// Runs the k-ary recursion with an optional abort budget on accounted
/// units. `Ok(None)` means the budget was exceeded.
pub fn ck_reach_with(
    g: &Digraph,
    s: usize,
    t: usize,
    karity: usize,
    solver: &dyn BoundedPathSolver,
    budget: Option<u64>,
) -> Result<Option<ReachReport>> {
    g.check(s)?;
    g.check(t)?;
    if karity < 2 {
        return Err(Error::Precondition(format!(
            "k-ary recursion needs k ≥ 2, got {karity}"
        )));
    }
    let n = g.vertex_count();
    let mut ck = Ck {
        g,
        k: karity,
        solver,
        per_level: ck_level_charge(n, karity),
        budget,
        units: 0,
        peak_units: 0,
        depth: 0,
        peak_depth: 0,
    };
    match ck.query(ck_levels(n, karity), s, t) {
        Ok(answer) => Ok(Some(ReachReport {
            answer,
            peak_depth: ck.peak_depth,
            accounted_units: ck.peak_units,
            budget_used: None,
        })),
        Err(OverBudget) => Ok(None),
    }
}

/// Unbounded reachability through the k-ary recursion with the layered BFS
/// inner solver.
pub fn ck_reach(g: &Digraph, s: usize, t: usize, karity: usize) -> Result<ReachReport> {
    Ok(ck_reach_with(g, s, t, karity, &LayeredBfs, None)?.expect("no budget"))
}

/// Default multiplier from budget steps to accounted units.
pub const DEFAULT_UNIT_SCALE: u64 = 16;

/// Tries budgets `S = 2, 3, ..`; under each, runs the k-ary recursion for
/// `k = 2..=S` with abort budget `S·unit_scale` and returns the first
/// verdict reached within budget.
pub fn diag_reach(g: &Digraph, s: usize, t: usize, unit_scale: u64) -> Result<ReachReport> {
    if unit_scale == 0 {
        return Err(Error::Precondition("unit scale must be positive".into()));
    }
    g.check(s)?;
    g.check(t)?;
    for big_s in 2usize.. {
        let budget = big_s as u64 * unit_scale;
        for karity in 2..=big_s {
            if let Some(mut r) = ck_reach_with(g, s, t, karity, &LayeredBfs, Some(budget))? {
                r.budget_used = Some(budget);
                return Ok(r);
            }
        }
    }
    unreachable!("the binary recursion completes once the budget covers its cost")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Digraph {
        Digraph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    #[test]
    fn bfs_examples() {
        let g = path(4);
        assert!(bfs_reach(&g, 2, 2, Some(0)).unwrap());
        assert!(!bfs_reach(&g, 0, 3, Some(2)).unwrap());
        assert!(bfs_reach(&g, 0, 3, Some(3)).unwrap());
        assert!(bfs_reach(&g, 0, 5, None).is_err());
    }

    #[test]
    fn savitch_depth() {
        let g = path(4);
        let r = savitch_reach(&g, 0, 3, 4).unwrap();
        assert!(r.answer);
        assert_eq!(r.peak_depth, 2);
        assert!(savitch_reach(&g, 1, 1, 0).unwrap().answer);
        assert!(!savitch_reach(&g, 0, 3, 2).unwrap().answer);
    }

    #[test]
    fn ck_levels_minimal() {
        assert_eq!(ck_levels(5, 2), 2);
        assert_eq!(ck_levels(1, 2), 0);
        assert_eq!(ck_levels(2, 2), 0);
        assert_eq!(ck_levels(3, 2), 1);
        assert_eq!(ck_levels(24, 3), 3);
    }

    #[test]
    fn ck_on_path() {
        let g = path(5);
        let r = ck_reach(&g, 0, 4, 2).unwrap();
        assert!(r.answer);
        assert_eq!(r.peak_depth, 2);
        assert_eq!(r.accounted_units, 2 * ck_level_charge(5, 2));
        assert!(!ck_reach(&g, 4, 0, 3).unwrap().answer);
        assert!(ck_reach(&g, 3, 3, 4).unwrap().answer);
        assert!(ck_reach(&g, 0, 1, 1).is_err());
    }

    #[test]
    fn dfs_solver_agrees() {
        let g = Digraph::from_edges(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5)]).unwrap();
        for s in 0..6 {
            for t in 0..6 {
                let a = ck_reach_with(&g, s, t, 2, &PathDfs, None).unwrap().unwrap();
                assert_eq!(a.answer, bfs_reach(&g, s, t, None).unwrap());
            }
        }
    }

    #[test]
    fn diag_examples() {
        let one = Digraph::new(1);
        let r = diag_reach(&one, 0, 0, DEFAULT_UNIT_SCALE).unwrap();
        assert!(r.answer);
        assert_eq!(r.budget_used, Some(2 * DEFAULT_UNIT_SCALE));
        let g = path(4);
        let r = diag_reach(&g, 0, 3, DEFAULT_UNIT_SCALE).unwrap();
        assert!(r.answer);
    }
}
