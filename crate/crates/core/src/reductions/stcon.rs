use crate::digraph::Digraph;
use crate::error::Result;
use crate::structure::Structure;
use crate::syntax::{Formula, Term};
use crate::vocab::Vocabulary;

/// Bounded reachability: is there a path of length at most `k` from `s`
/// to `t`?
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StconInstance {
    pub graph: Digraph,
    pub s: usize,
    pub t: usize,
    pub k: usize,
}

impl StconInstance {
    pub fn new(graph: Digraph, s: usize, t: usize, k: usize) -> Result<Self> {
        graph.check(s)?;
        graph.check(t)?;
        Ok(Self { graph, s, t, k })
    }
}

fn v(name: &str) -> Term {
    Term::var(name)
}

/// The two-variable formula with free `x` saying that `T` is reachable from
/// `x` within `k` steps.
pub fn chain_formula(k: usize) -> Formula {
    let mut phi = Formula::rel("T", vec![v("x")]);
    for _ in 0..k {
        let step = Formula::or(Formula::eq(v("y"), v("x")), Formula::rel("E", vec![v("x"), v("y")]));
        let moved = Formula::exists("x", Formula::and(Formula::eq(v("x"), v("y")), phi));
        phi = Formula::exists("y", Formula::and(step, moved));
    }
    phi
}

/// `∃x(S(x) ∧ φ_k(x))`, of norm `8k+4`.
pub fn chain_sentence(k: usize) -> Formula {
    Formula::exists("x", Formula::and(Formula::rel("S", vec![v("x")]), chain_formula(k)))
}

/// The vocabulary `{E/2, S/1, T/1}` of chain instances.
pub fn chain_vocabulary() -> Vocabulary {
    let mut voc = Vocabulary::new();
    voc.add_relation("E", 2).expect("fresh");
    voc.add_relation("S", 1).expect("fresh");
    voc.add_relation("T", 1).expect("fresh");
    voc
}

/// The graph with `S = {s}` and `T = {t}`, and the chain sentence for `k`.
pub fn stcon_to_mc(inst: &StconInstance) -> Result<(Structure, Formula)> {
    let mut b = Structure::builder(chain_vocabulary(), inst.graph.vertex_count())?;
    for (u, w) in inst.graph.edges() {
        b.add_tuple("E", vec![u, w])?;
    }
    b.add_tuple("S", vec![inst.s])?;
    b.add_tuple("T", vec![inst.t])?;
    Ok((b.build()?, chain_sentence(inst.k)))
}
