//! Seeded random generators for structures, formulas and digraphs.
//!
//! All generators take an explicit RNG; [`rng`] gives the ChaCha stream
//! used throughout so that a seed pins every output.

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::reductions::{stcon_to_mc, StconInstance};
use crate::structure::Structure;
use crate::syntax::{Formula, Term};
use crate::vocab::Vocabulary;

pub type GenRng = ChaCha8Rng;

pub fn rng(seed: u64) -> GenRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Variable names handed out in order: `x`, `y`, `z`, `u`, `v`, `w`, then
/// `x6`, `x7`, ...
pub fn variable_pool(s: usize) -> Vec<String> {
    const BASE: [&str; 6] = ["x", "y", "z", "u", "v", "w"];
    (0..s)
        .map(|i| BASE.get(i).map_or_else(|| format!("x{i}"), |v| v.to_string()))
        .collect()
}

/// Shape of a random vocabulary.
#[derive(Debug, Clone)]
pub struct VocabParams {
    pub relations: usize,
    pub max_relation_arity: usize,
    pub constants: usize,
    pub functions: usize,
    pub max_function_arity: usize,
}

impl Default for VocabParams {
    fn default() -> Self {
        Self {
            relations: 2,
            max_relation_arity: 2,
            constants: 0,
            functions: 0,
            max_function_arity: 1,
        }
    }
}

const RELATION_NAMES: [&str; 6] = ["P", "Q", "R", "E", "S", "T"];
const CONSTANT_NAMES: [&str; 4] = ["c", "d", "e", "k"];
const FUNCTION_NAMES: [&str; 4] = ["f", "g", "h", "m"];

fn name(table: &[&str], i: usize) -> String {
    match table.get(i) {
        Some(s) => s.to_string(),
        None => format!("{}{}", table[0], i),
    }
}

pub fn random_vocabulary<R: Rng>(rng: &mut R, p: &VocabParams) -> Result<Vocabulary> {
    let mut voc = Vocabulary::new();
    for i in 0..p.relations {
        voc.add_relation(name(&RELATION_NAMES, i), rng.gen_range(1..=p.max_relation_arity.max(1)))?;
    }
    for i in 0..p.constants {
        voc.add_constant(name(&CONSTANT_NAMES, i))?;
    }
    for i in 0..p.functions {
        voc.add_function(name(&FUNCTION_NAMES, i), rng.gen_range(1..=p.max_function_arity.max(1)))?;
    }
    Ok(voc)
}

fn all_tuples(n: usize, arity: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |e| {
                    let mut t = t.clone();
                    t.push(e);
                    t
                })
            })
            .collect();
    }
    out
}

/// Each relation tuple is present with probability `density`; constants
/// and function tables are uniform.
pub fn random_structure<R: Rng>(rng: &mut R, vocab: &Vocabulary, n: usize, density: f64) -> Result<Structure> {
    if n == 0 {
        return Err(Error::Precondition("universe must be non-empty".into()));
    }
    let mut b = Structure::builder(vocab.clone(), n)?;
    for (r, arity) in vocab.relations() {
        for t in all_tuples(n, arity) {
            if rng.gen_bool(density.clamp(0.0, 1.0)) {
                b.add_tuple(r, t)?;
            }
        }
    }
    for c in vocab.constants() {
        b.set_constant(c, rng.gen_range(0..n))?;
    }
    for (f, arity) in vocab.functions() {
        for t in all_tuples(n, arity) {
            b.set_function_value(f, &t, rng.gen_range(0..n))?;
        }
    }
    b.build()
}

/// Each of the `n²` possible edges (loops included) is present with
/// probability `p`.
pub fn random_digraph<R: Rng>(rng: &mut R, n: usize, p: f64) -> Digraph {
    let mut g = Digraph::new(n);
    for u in 0..n {
        for v in 0..n {
            if rng.gen_bool(p.clamp(0.0, 1.0)) {
                g.add_edge(u, v).expect("in range");
            }
        }
    }
    g
}

/// Parameters of random NNF formulas with an exact alternation level.
#[derive(Debug, Clone)]
pub struct FormulaParams {
    /// Number of distinct variable names available.
    pub s: usize,
    /// Target level; the formula is in `Σ_t` (or `Π_t`) and in no lower
    /// level of the same kind.
    pub t: usize,
    /// Target subformula count; the result hits it exactly unless it is
    /// below the minimum `t+1`.
    pub norm: usize,
    /// Start with a universal rather than an existential level.
    pub pi: bool,
    /// Variables that may occur free. Empty for sentences.
    pub free: Vec<String>,
    /// Probability that an argument is a function application.
    pub function_rate: f64,
    /// Probability that an atom is an equality.
    pub eq_rate: f64,
}

impl FormulaParams {
    pub fn sentence(s: usize, t: usize, norm: usize) -> Self {
        Self {
            s,
            t,
            norm,
            pi: false,
            free: Vec::new(),
            function_rate: 0.0,
            eq_rate: 0.2,
        }
    }
}

struct FormulaGen<'a, R> {
    rng: &'a mut R,
    pool: Vec<String>,
    relations: Vec<(String, usize)>,
    constants: Vec<String>,
    functions: Vec<(String, usize)>,
    function_rate: f64,
    eq_rate: f64,
}

impl<R: Rng> FormulaGen<'_, R> {
    fn grounded(&self, scope: &[String]) -> bool {
        !scope.is_empty() || !self.constants.is_empty()
    }

    fn leaf_term(&mut self, scope: &[String]) -> Term {
        let k = scope.len() + self.constants.len();
        let i = self.rng.gen_range(0..k);
        if i < scope.len() {
            Term::var(scope[i].clone())
        } else {
            Term::constant(self.constants[i - scope.len()].clone())
        }
    }

    fn term(&mut self, scope: &[String]) -> Term {
        if !self.functions.is_empty() && self.rng.gen_bool(self.function_rate) {
            let (f, arity) = self.functions.choose(self.rng).expect("non-empty").clone();
            let args = (0..arity).map(|_| self.leaf_term(scope)).collect();
            Term::app(f, args)
        } else {
            self.leaf_term(scope)
        }
    }

    fn atom(&mut self, scope: &[String]) -> Formula {
        if self.relations.is_empty() || self.rng.gen_bool(self.eq_rate) {
            Formula::eq(self.term(scope), self.term(scope))
        } else {
            let (r, arity) = self.relations.choose(self.rng).expect("non-empty").clone();
            Formula::rel(r, (0..arity).map(|_| self.term(scope)).collect())
        }
    }

    fn qf(&mut self, size: usize, scope: &[String]) -> Formula {
        match size {
            0 => unreachable!("sizes are positive"),
            1 => self.atom(scope),
            2 => Formula::not(self.atom(scope)),
            _ => {
                let l = self.rng.gen_range(1..=size - 2);
                let a = self.qf(l, scope);
                let b = self.qf(size - 1 - l, scope);
                if self.rng.gen_bool(0.5) {
                    Formula::and(a, b)
                } else {
                    Formula::or(a, b)
                }
            }
        }
    }

    fn quantifier(&mut self, scope: &[String]) -> (String, Vec<String>) {
        let v = self.pool.choose(self.rng).expect("s >= 1").clone();
        let mut inner = scope.to_vec();
        if !inner.contains(&v) {
            inner.push(v.clone());
        }
        (v, inner)
    }

    fn wrap(pi: bool, v: String, body: Formula) -> Formula {
        if pi {
            Formula::forall(v, body)
        } else {
            Formula::exists(v, body)
        }
    }

    fn binary(&mut self, a: Formula, b: Formula) -> Formula {
        let (a, b) = if self.rng.gen_bool(0.5) { (a, b) } else { (b, a) };
        if self.rng.gen_bool(0.5) {
            Formula::and(a, b)
        } else {
            Formula::or(a, b)
        }
    }

    /// Smallest size `any` can produce in this scope.
    fn any_min(&self, t: usize, scope: &[String]) -> usize {
        if self.grounded(scope) {
            1
        } else if t >= 1 {
            2
        } else {
            usize::MAX
        }
    }

    /// A formula of the given size in `Σ_t` (`Π_t` if `pi`).
    fn any(&mut self, t: usize, pi: bool, size: usize, scope: &[String]) -> Formula {
        if t == 0 {
            return self.qf(size, scope);
        }
        let grounded = self.grounded(scope);
        let m = self.any_min(t, scope);
        // 0: quantifier, 1: binary, 2: drop a level
        let mut options = Vec::new();
        if size >= 2 {
            options.push(0);
        }
        if size > 2 * m {
            options.push(1);
            options.push(1);
        }
        if grounded || (t >= 2 && size >= 2) {
            options.push(2);
        }
        match *options.choose(self.rng).expect("some option is feasible") {
            0 => {
                let (v, inner) = self.quantifier(scope);
                let body = self.any(t, pi, size - 1, &inner);
                Self::wrap(pi, v, body)
            }
            1 => {
                let l = self.rng.gen_range(m..=size - 1 - m);
                let a = self.any(t, pi, l, scope);
                let b = self.any(t, pi, size - 1 - l, scope);
                self.binary(a, b)
            }
            _ => self.any(t - 1, !pi, size, scope),
        }
    }

    /// A formula of the given size in `Σ_t` but not `Σ_{t-1}` (dually for
    /// `pi`). Requires `size >= t+1`.
    fn exact(&mut self, t: usize, pi: bool, size: usize, scope: &[String]) -> Formula {
        if t == 0 {
            return self.qf(size, scope);
        }
        let m = self.any_min(t, scope);
        // 0: quantifier over an exact lower level, 1: quantifier over the
        // same level, 2: binary with one exact side
        let mut options = vec![0];
        if size >= t + 2 {
            options.push(1);
        }
        if size >= t + 2 + m {
            options.push(2);
            options.push(2);
        }
        match *options.choose(self.rng).expect("non-empty") {
            0 => {
                let (v, inner) = self.quantifier(scope);
                let body = self.exact(t - 1, !pi, size - 1, &inner);
                Self::wrap(pi, v, body)
            }
            1 => {
                let (v, inner) = self.quantifier(scope);
                let body = self.exact(t, pi, size - 1, &inner);
                Self::wrap(pi, v, body)
            }
            _ => {
                let e = self.rng.gen_range(t + 1..=size - 1 - m);
                let a = self.exact(t, pi, e, scope);
                let b = self.any(t, pi, size - 1 - e, scope);
                self.binary(a, b)
            }
        }
    }
}

/// A random NNF formula over `vocab` built top-down from the level
/// grammar. Its `Σ_t` (or `Π_t`) level is exactly `p.t`.
pub fn random_formula<R: Rng>(rng: &mut R, vocab: &Vocabulary, p: &FormulaParams) -> Result<Formula> {
    if p.s == 0 && p.free.is_empty() && vocab.constants().next().is_none() {
        return Err(Error::Precondition(
            "no variables and no constants to build atoms from".into(),
        ));
    }
    if p.t > 0 && p.s == 0 {
        return Err(Error::Precondition("quantifiers need at least one variable".into()));
    }
    if p.t == 0 && p.free.is_empty() && vocab.constants().next().is_none() {
        return Err(Error::Precondition(
            "quantifier-free sentences need a constant symbol".into(),
        ));
    }
    let pool = variable_pool(p.s);
    for v in &p.free {
        if !pool.contains(v) {
            return Err(Error::Precondition(format!("free variable `{v}` is outside the pool")));
        }
    }
    let mut g = FormulaGen {
        rng,
        pool,
        relations: vocab.relations().map(|(r, a)| (r.to_string(), a)).collect(),
        constants: vocab.constants().map(str::to_string).collect(),
        functions: vocab.functions().map(|(f, a)| (f.to_string(), a)).collect(),
        function_rate: p.function_rate,
        eq_rate: p.eq_rate,
    };
    let size = p.norm.max(p.t + 1);
    Ok(g.exact(p.t, p.pi, size, &p.free))
}

/// A random existential NNF sentence: `Σ_1` with norm `norm`.
pub fn random_sigma1_sentence<R: Rng>(rng: &mut R, vocab: &Vocabulary, s: usize, norm: usize) -> Result<Formula> {
    random_formula(rng, vocab, &FormulaParams::sentence(s, 1, norm))
}

/// A chain instance: a random digraph on `n` vertices with random `s`, `t`
/// and the chain sentence for `k`.
pub fn random_chain<R: Rng>(rng: &mut R, n: usize, k: usize, p: f64) -> Result<(StconInstance, Structure, Formula)> {
    if n == 0 {
        return Err(Error::Precondition("chain graphs need at least one vertex".into()));
    }
    let g = random_digraph(rng, n, p);
    let s = rng.gen_range(0..n);
    let t = rng.gen_range(0..n);
    let inst = StconInstance::new(g, s, t, k)?;
    let (a, phi) = stcon_to_mc(&inst)?;
    Ok((inst, a, phi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::{classify, free_vars, nnf};

    #[test]
    fn levels_and_sizes_are_exact() {
        let mut r = rng(3);
        let voc = random_vocabulary(&mut r, &VocabParams::default()).unwrap();
        for t in 1..=3 {
            for norm in [t + 1, 10, 40, 60] {
                for pi in [false, true] {
                    let p = FormulaParams {
                        pi,
                        ..FormulaParams::sentence(3, t, norm)
                    };
                    let phi = random_formula(&mut r, &voc, &p).unwrap();
                    let c = classify(&phi);
                    assert_eq!(c.subformula_count, norm, "{phi}");
                    if pi {
                        assert_eq!(c.pi_level, Some(t), "{phi}");
                    } else {
                        assert_eq!(c.sigma_level, Some(t), "{phi}");
                    }
                    assert!(free_vars(&phi).is_empty());
                    assert!(c.num_variables <= 3);
                    assert_eq!(nnf(&phi), phi);
                }
            }
        }
    }

    #[test]
    fn same_seed_same_output() {
        let voc = random_vocabulary(&mut rng(1), &VocabParams::default()).unwrap();
        let a = random_formula(&mut rng(7), &voc, &FormulaParams::sentence(2, 1, 40)).unwrap();
        let b = random_formula(&mut rng(7), &voc, &FormulaParams::sentence(2, 1, 40)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn structures_are_total() {
        let p = VocabParams {
            constants: 2,
            functions: 2,
            max_function_arity: 2,
            ..VocabParams::default()
        };
        let mut r = rng(5);
        let voc = random_vocabulary(&mut r, &p).unwrap();
        let a = random_structure(&mut r, &voc, 3, 0.5).unwrap();
        for (f, arity) in voc.functions() {
            assert_eq!(a.function_rows(f).unwrap().len(), 3usize.pow(arity as u32));
        }
    }
}
