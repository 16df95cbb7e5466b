use fomc_core::gen::{random_digraph, rng};
use fomc_core::reach::{
    bfs_reach, ck_levels, ck_reach, ck_reach_with, diag_reach, savitch_reach, LayeredBfs, PathDfs, DEFAULT_UNIT_SCALE,
};
use fomc_core::Digraph;
use rand::Rng;

fn path(n: usize) -> Digraph {
    Digraph::from_edges(n, (1..n).map(|v| (v - 1, v))).unwrap()
}

/// Exhaustive walk enumeration: is there a walk of length at most `k`?
fn walk_exists(g: &Digraph, s: usize, t: usize, k: usize) -> bool {
    if s == t {
        return true;
    }
    k > 0 && g.successors(s).iter().any(|&v| walk_exists(g, v, t, k - 1))
}

#[test]
fn bfs_matches_enumeration() {
    let mut r = rng(31);
    for _ in 0..300 {
        let n = r.gen_range(1..=32);
        let p = r.gen_range(0.0..3.0) / n as f64;
        let g = random_digraph(&mut r, n, p);
        let (s, t) = (r.gen_range(0..n), r.gen_range(0..n));
        for k in 0..=4 {
            assert_eq!(bfs_reach(&g, s, t, Some(k)).unwrap(), walk_exists(&g, s, t, k));
        }
    }
}

#[test]
fn savitch_examples() {
    let g = path(9);
    let r = savitch_reach(&g, 0, 8, 8).unwrap();
    assert!(r.answer);
    assert_eq!(r.peak_depth, 3);
    for k in 1..=64usize {
        let r = savitch_reach(&path(2), 0, 1, k).unwrap();
        assert_eq!(r.peak_depth, (k as f64).log2().ceil() as usize, "k={k}");
    }
}

#[test]
fn ck_levels_shrink_with_arity() {
    for n in 2..200 {
        let mut k = 2;
        while k < 2 * n {
            assert!(ck_levels(n, 2 * k) <= ck_levels(n, k));
            k *= 2;
        }
    }
}

#[test]
fn inner_solvers_agree() {
    let mut r = rng(32);
    for _ in 0..100 {
        let n = r.gen_range(1..=12);
        let p = r.gen_range(0.5..2.5) / n as f64;
        let g = random_digraph(&mut r, n, p);
        let (s, t) = (r.gen_range(0..n), r.gen_range(0..n));
        let want = bfs_reach(&g, s, t, None).unwrap();
        for k in [2, 3] {
            let a = ck_reach_with(&g, s, t, k, &LayeredBfs, None).unwrap().unwrap();
            let b = ck_reach_with(&g, s, t, k, &PathDfs, None).unwrap().unwrap();
            assert_eq!((a.answer, b.answer), (want, want));
        }
    }
}

#[test]
fn diag_examples() {
    let single = Digraph::new(1);
    let r = diag_reach(&single, 0, 0, DEFAULT_UNIT_SCALE).unwrap();
    assert!(r.answer);
    assert_eq!(r.budget_used, Some(2 * DEFAULT_UNIT_SCALE));

    let g = path(4);
    let r = diag_reach(&g, 0, 3, DEFAULT_UNIT_SCALE).unwrap();
    assert!(r.answer);
    let cheapest = (2..=4)
        .map(|k| ck_reach(&g, 0, 3, k).unwrap().accounted_units)
        .min()
        .unwrap();
    assert!(r.budget_used.unwrap() >= cheapest);
}

#[test]
fn all_algorithms_agree() {
    let mut r = rng(33);
    for _ in 0..100 {
        let n = r.gen_range(1..=16);
        let p = r.gen_range(0.5..2.5) / n as f64;
        let g = random_digraph(&mut r, n, p);
        let (s, t) = (r.gen_range(0..n), r.gen_range(0..n));
        let want = bfs_reach(&g, s, t, None).unwrap();
        assert_eq!(savitch_reach(&g, s, t, n.saturating_sub(1)).unwrap().answer, want);
        assert_eq!(ck_reach(&g, s, t, 2).unwrap().answer, want);
        assert_eq!(diag_reach(&g, s, t, DEFAULT_UNIT_SCALE).unwrap().answer, want);
    }
}

#[test]
fn out_of_range_vertices() {
    let g = path(3);
    assert!(bfs_reach(&g, 0, 3, None).is_err());
    assert!(savitch_reach(&g, 5, 0, 2).is_err());
    assert!(ck_reach(&g, 0, 1, 1).is_err());
    assert!(diag_reach(&g, 0, 1, 0).is_err());
}
