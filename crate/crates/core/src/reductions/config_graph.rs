//! From existential model checking to reachability: the graph of
//! evaluation configurations `(ψ, α, b)`.

use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::metrics::{free_vars, is_free_in, subformula_count};
use crate::structure::{eval_atom_with, Assignment, Structure};
use crate::syntax::{Formula, Position};

use super::stcon::StconInstance;

/// Which values a configuration stores next to its subformula.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum ConfigScope {
    /// Values of all non-vacuous existential binders on the path from the
    /// root, outermost first. Every edge is then determined by its source,
    /// and reachability matches truth.
    #[default]
    Environment,
    /// Values of the free variables of the subformula only. Smaller, but a
    /// conjunction may combine conjuncts checked under different values of
    /// a variable the conjuncts do not share.
    FreeVariables,
}

/// A configuration: subformula position, stored values, and whether the
/// subformula has been verified.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigVertex {
    pub pos: Position,
    /// The stored variables and their values. Under
    /// [`ConfigScope::Environment`] a variable bound twice on the path
    /// appears twice.
    pub slots: Vec<(String, usize)>,
    pub bit: bool,
}

impl ConfigVertex {
    /// The assignment seen by the subformula (innermost binding wins).
    pub fn assignment(&self) -> Assignment {
        let mut a = Assignment::new();
        for (v, e) in &self.slots {
            a.set(v, *e);
        }
        a
    }
}

struct Block {
    pos: Position,
    slots: Vec<String>,
    offset: usize,
}

/// The configuration graph together with its vertex decoding.
#[derive(Debug, Clone)]
pub struct ConfigGraph {
    pub instance: StconInstance,
    pub scope: ConfigScope,
    universe: usize,
    blocks: Vec<(Position, Vec<String>, usize)>,
}

impl ConfigGraph {
    pub fn vertex_count(&self) -> usize {
        self.instance.graph.vertex_count()
    }

    pub fn vertex(&self, id: usize) -> ConfigVertex {
        let b = self.blocks.partition_point(|(_, _, off)| *off <= id) - 1;
        let (pos, slots, off) = &self.blocks[b];
        let mut rest = (id - off) / 2;
        let mut vals = vec![0; slots.len()];
        for v in vals.iter_mut().rev() {
            *v = rest % self.universe;
            rest /= self.universe;
        }
        ConfigVertex {
            pos: pos.clone(),
            slots: slots.iter().cloned().zip(vals).collect(),
            bit: (id - off) % 2 == 1,
        }
    }
}

fn index(block: &Block, vals: &[usize], n: usize, bit: bool) -> usize {
    let code = vals.iter().fold(0, |acc, &v| acc * n + v);
    block.offset + 2 * code + usize::from(bit)
}

/// Builds the configuration graph of an existential NNF sentence over a
/// relational structure. Source `(φ,∅,0)`, target `(φ,∅,1)`, bound
/// `k = 2‖φ‖`.
pub fn mc_to_stcon(a: &Structure, phi: &Formula, scope: ConfigScope) -> Result<ConfigGraph> {
    if !phi.is_nnf() || phi.has_universal() {
        return Err(Error::Precondition(
            "configuration graphs need an existential sentence in negation normal form".into(),
        ));
    }
    if phi.has_functions() {
        return Err(Error::Unsupported(
            "configuration graphs need a function-free formula".into(),
        ));
    }
    if let Some(v) = free_vars(phi).first() {
        return Err(Error::Precondition(format!("`{v}` is free; a sentence is required")));
    }
    a.vocabulary().check_formula(phi)?;
    let n = a.universe();

    let mut blocks: Vec<Block> = Vec::new();
    let mut offset = 0usize;
    let mut stack: Vec<(Position, Vec<String>)> = vec![(Vec::new(), Vec::new())];
    while let Some((pos, env)) = stack.pop() {
        let node = phi.at(&pos).expect("valid position");
        let slots = match scope {
            ConfigScope::Environment => env.clone(),
            ConfigScope::FreeVariables => free_vars(node),
        };
        let size = 2 * n
            .checked_pow(slots.len() as u32)
            .ok_or_else(|| Error::Precondition("configuration graph too large".into()))?;
        blocks.push(Block {
            pos: pos.clone(),
            slots,
            offset,
        });
        offset = offset
            .checked_add(size)
            .ok_or_else(|| Error::Precondition("configuration graph too large".into()))?;
        for (i, c) in node.children().into_iter().enumerate().rev() {
            let mut child_env = env.clone();
            if let Formula::Exists(y, _) = node {
                if is_free_in(y, c) {
                    child_env.push(y.clone());
                }
            }
            let mut p = pos.clone();
            p.push(i);
            stack.push((p, child_env));
        }
    }
    blocks.sort_by_key(|b| b.offset);
    let block_of = |p: &[usize]| blocks.iter().find(|b| b.pos == p).expect("every position has a block");

    let mut g = Digraph::new(offset);
    for block in &blocks {
        let node = phi.at(&block.pos).expect("valid position");
        let k = block.slots.len();
        let count = n.pow(k as u32);
        let children: Vec<&Block> = (0..node.children().len())
            .map(|i| {
                let mut p = block.pos.clone();
                p.push(i);
                block_of(&p)
            })
            .collect();
        let mut vals = vec![0; k];
        for code in 0..count {
            let mut rest = code;
            for v in vals.iter_mut().rev() {
                *v = rest % n;
                rest /= n;
            }
            let lookup = |var: &str| block.slots.iter().rposition(|s| s == var).map(|i| vals[i]);
            // Values of a child's slots: the new binder (if any) gets `bound`.
            let child_vals = |child: &Block, bound: Option<(&str, usize)>| -> Vec<usize> {
                match scope {
                    ConfigScope::Environment => {
                        let mut cv = vals.clone();
                        if child.slots.len() > vals.len() {
                            cv.push(bound.expect("binder value").1);
                        }
                        cv
                    }
                    ConfigScope::FreeVariables => child
                        .slots
                        .iter()
                        .map(|s| match bound {
                            Some((y, b)) if y == s => b,
                            _ => lookup(s).expect("child variables are parent variables"),
                        })
                        .collect(),
                }
            };
            let me0 = index(block, &vals, n, false);
            let me1 = index(block, &vals, n, true);
            match node {
                Formula::Eq(..) | Formula::Rel(..) => {
                    if eval_atom_with(node, a, &lookup)? {
                        g.add_edge(me0, me1)?;
                    }
                }
                Formula::Not(inner) => {
                    if !eval_atom_with(inner, a, &lookup)? {
                        g.add_edge(me0, me1)?;
                    }
                }
                Formula::Or(..) => {
                    for c in &children {
                        let cv = child_vals(c, None);
                        g.add_edge(me0, index(c, &cv, n, false))?;
                        g.add_edge(index(c, &cv, n, true), me1)?;
                    }
                }
                Formula::And(..) => {
                    let (c0, c1) = (children[0], children[1]);
                    let (v0, v1) = (child_vals(c0, None), child_vals(c1, None));
                    g.add_edge(me0, index(c0, &v0, n, false))?;
                    g.add_edge(index(c0, &v0, n, true), index(c1, &v1, n, false))?;
                    g.add_edge(index(c1, &v1, n, true), me1)?;
                }
                Formula::Exists(y, _) => {
                    let c = children[0];
                    for b in 0..n {
                        let cv = child_vals(c, Some((y, b)));
                        g.add_edge(me0, index(c, &cv, n, false))?;
                        g.add_edge(index(c, &cv, n, true), me1)?;
                    }
                }
                Formula::Forall(..) => unreachable!("checked above"),
            }
        }
    }

    let root = block_of(&[]);
    let (s, t) = (index(root, &[], n, false), index(root, &[], n, true));
    Ok(ConfigGraph {
        instance: StconInstance::new(g, s, t, 2 * subformula_count(phi))?,
        scope,
        universe: n,
        blocks: blocks.into_iter().map(|b| (b.pos, b.slots, b.offset)).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reach::bfs_distance;
    use crate::syntax::Term;
    use crate::vocab::Vocabulary;

    #[test]
    fn constant_equality_has_one_edge() {
        let mut voc = Vocabulary::new();
        voc.add_constant("c").unwrap();
        let mut b = Structure::builder(voc, 3).unwrap();
        b.set_constant("c", 1).unwrap();
        let a = b.build().unwrap();
        let phi = Formula::eq(Term::constant("c"), Term::constant("c"));
        for scope in [ConfigScope::Environment, ConfigScope::FreeVariables] {
            let cg = mc_to_stcon(&a, &phi, scope).unwrap();
            let inst = &cg.instance;
            assert_eq!(inst.graph.vertex_count(), 2);
            assert_eq!(inst.graph.edge_count(), 1);
            assert_eq!(bfs_distance(&inst.graph, inst.s, inst.t).unwrap(), Some(1));
            assert_eq!(inst.k, 2);
        }
    }

    /// `∃x∃y((P(x) ∧ Q(y)) ∧ R(x,y))` with `P = Q = {0}` and `R = {(1,0)}` is
    /// false, yet the free-variable graph links the verified `Q(y)` at
    /// `y=0` back to the inner conjunction at `x=1`.
    #[test]
    fn free_variable_scope_accepts_a_false_sentence() {
        let mut voc = Vocabulary::new();
        voc.add_relation("P", 1).unwrap();
        voc.add_relation("Q", 1).unwrap();
        voc.add_relation("R", 2).unwrap();
        let mut b = Structure::builder(voc, 2).unwrap();
        b.add_tuple("P", vec![0]).unwrap();
        b.add_tuple("Q", vec![0]).unwrap();
        b.add_tuple("R", vec![1, 0]).unwrap();
        let a = b.build().unwrap();
        let (x, y) = (|| Term::var("x"), || Term::var("y"));
        let phi = Formula::exists(
            "x",
            Formula::exists(
                "y",
                Formula::and(
                    Formula::and(Formula::rel("P", vec![x()]), Formula::rel("Q", vec![y()])),
                    Formula::rel("R", vec![x(), y()]),
                ),
            ),
        );
        let reach = |scope| {
            let cg = mc_to_stcon(&a, &phi, scope).unwrap();
            let i = &cg.instance;
            bfs_distance(&i.graph, i.s, i.t).unwrap().is_some()
        };
        assert!(reach(ConfigScope::FreeVariables));
        assert!(!reach(ConfigScope::Environment));
    }

    #[test]
    fn vertices_decode() {
        let mut voc = Vocabulary::new();
        voc.add_relation("S", 1).unwrap();
        let a = Structure::builder(voc, 3).unwrap().build().unwrap();
        let phi = Formula::exists("x", Formula::rel("S", vec![Term::var("x")]));
        let cg = mc_to_stcon(&a, &phi, ConfigScope::FreeVariables).unwrap();
        assert_eq!(cg.vertex_count(), 2 + 6);
        let v = cg.vertex(2 + 2 * 2 + 1);
        assert_eq!(v.pos, vec![0]);
        assert_eq!(v.slots, vec![("x".to_string(), 2)]);
        assert!(v.bit);
    }
}
