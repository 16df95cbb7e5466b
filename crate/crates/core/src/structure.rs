//! Finite structures, expansions by fresh symbols, and variable assignments.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::syntax::{Formula, Term};
use crate::vocab::{SymbolKind, Vocabulary};

pub type Tuple = Vec<usize>;
pub type TupleSet = BTreeSet<Tuple>;

/// Read access to an interpreted vocabulary over the universe `0..n`.
///
/// The engines evaluate against this trait so that the expansions built
/// during divide-and-conquer evaluation (fresh constants, derived relations)
/// never copy the underlying structure.
pub trait Interpretation {
    fn universe_size(&self) -> usize;
    fn constant_value(&self, name: &str) -> Option<usize>;
    /// `None` when `name` is not a relation symbol.
    fn relation_holds(&self, name: &str, args: &[usize]) -> Option<bool>;
    fn function_value(&self, name: &str, args: &[usize]) -> Option<usize>;
}

/// A finite structure with universe `{0, .., n-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Structure {
    vocab: Vocabulary,
    universe: usize,
    relations: HashMap<String, TupleSet>,
    constants: HashMap<String, usize>,
    functions: HashMap<String, Vec<usize>>,
}

/// Builds a [`Structure`], validating ranges as tuples are added and
/// totality of function tables on [`StructureBuilder::build`].
#[derive(Debug)]
pub struct StructureBuilder {
    vocab: Vocabulary,
    universe: usize,
    relations: HashMap<String, TupleSet>,
    constants: HashMap<String, usize>,
    functions: HashMap<String, Vec<Option<usize>>>,
}

fn table_len(universe: usize, arity: usize) -> usize {
    universe.pow(arity as u32)
}

/// Row-major index of an argument tuple in a function table.
fn table_index(universe: usize, args: &[usize]) -> usize {
    args.iter().fold(0, |acc, &a| acc * universe + a)
}

impl StructureBuilder {
    pub fn new(vocab: Vocabulary, universe: usize) -> Result<Self> {
        if universe == 0 {
            return Err(Error::Structure("universe must be nonempty".into()));
        }
        let mut relations = HashMap::new();
        let mut functions = HashMap::new();
        for d in vocab.decls() {
            match d.kind {
                SymbolKind::Relation { .. } => {
                    relations.insert(d.name.clone(), TupleSet::new());
                }
                SymbolKind::Function { arity } => {
                    functions.insert(d.name.clone(), vec![None; table_len(universe, arity)]);
                }
                SymbolKind::Constant => {}
            }
        }
        Ok(Self {
            vocab,
            universe,
            relations,
            constants: HashMap::new(),
            functions,
        })
    }

    fn check_elements(&self, elems: &[usize]) -> Result<()> {
        match elems.iter().find(|&&e| e >= self.universe) {
            Some(e) => Err(Error::Structure(format!(
                "element {e} out of range for universe of size {}",
                self.universe
            ))),
            None => Ok(()),
        }
    }

    pub fn add_tuple(&mut self, relation: &str, tuple: Tuple) -> Result<&mut Self> {
        let arity = match self.vocab.kind(relation) {
            Some(SymbolKind::Relation { arity }) => arity,
            _ => return Err(Error::Structure(format!("unknown relation `{relation}`"))),
        };
        if tuple.len() != arity {
            return Err(Error::Structure(format!(
                "tuple of length {} for relation `{relation}` of arity {arity}",
                tuple.len()
            )));
        }
        self.check_elements(&tuple)?;
        self.relations.get_mut(relation).expect("declared").insert(tuple);
        Ok(self)
    }

    pub fn set_constant(&mut self, constant: &str, value: usize) -> Result<&mut Self> {
        if self.vocab.kind(constant) != Some(SymbolKind::Constant) {
            return Err(Error::Structure(format!("unknown constant `{constant}`")));
        }
        self.check_elements(&[value])?;
        self.constants.insert(constant.to_string(), value);
        Ok(self)
    }

    pub fn set_function_value(&mut self, function: &str, args: &[usize], value: usize) -> Result<&mut Self> {
        let arity = match self.vocab.kind(function) {
            Some(SymbolKind::Function { arity }) => arity,
            _ => return Err(Error::Structure(format!("unknown function `{function}`"))),
        };
        if args.len() != arity {
            return Err(Error::Structure(format!(
                "{} arguments for function `{function}` of arity {arity}",
                args.len()
            )));
        }
        self.check_elements(args)?;
        self.check_elements(&[value])?;
        let idx = table_index(self.universe, args);
        let slot = &mut self.functions.get_mut(function).expect("declared")[idx];
        if slot.is_some_and(|v| v != value) {
            return Err(Error::Structure(format!(
                "function `{function}` assigned twice at {args:?}"
            )));
        }
        *slot = Some(value);
        Ok(self)
    }

    pub fn build(self) -> Result<Structure> {
        if let Some(c) = self.vocab.constants().find(|c| !self.constants.contains_key(*c)) {
            return Err(Error::Structure(format!("constant `{c}` is not interpreted")));
        }
        let mut functions = HashMap::new();
        for (name, table) in self.functions {
            if let Some(missing) = table.iter().position(Option::is_none) {
                let arity = match self.vocab.kind(&name) {
                    Some(SymbolKind::Function { arity }) => arity,
                    _ => unreachable!(),
                };
                let row = decode_row(self.universe, arity, missing);
                return Err(Error::Structure(format!(
                    "partial function table for `{name}`: no value at {row:?}"
                )));
            }
            functions.insert(name, table.into_iter().map(Option::unwrap).collect());
        }
        Ok(Structure {
            vocab: self.vocab,
            universe: self.universe,
            relations: self.relations,
            constants: self.constants,
            functions,
        })
    }
}

fn decode_row(universe: usize, arity: usize, mut index: usize) -> Tuple {
    let mut row = vec![0; arity];
    for slot in row.iter_mut().rev() {
        *slot = index % universe;
        index /= universe;
    }
    row
}

impl Structure {
    pub fn builder(vocab: Vocabulary, universe: usize) -> Result<StructureBuilder> {
        StructureBuilder::new(vocab, universe)
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn relation(&self, name: &str) -> Option<&TupleSet> {
        self.relations.get(name)
    }

    pub fn constant(&self, name: &str) -> Option<usize> {
        self.constants.get(name).copied()
    }

    /// The function table as `(arguments, value)` rows in lexicographic order.
    pub fn function_rows(&self, name: &str) -> Option<Vec<(Tuple, usize)>> {
        let arity = match self.vocab.kind(name)? {
            SymbolKind::Function { arity } => arity,
            _ => return None,
        };
        let table = self.functions.get(name)?;
        Some(
            table
                .iter()
                .enumerate()
                .map(|(i, &v)| (decode_row(self.universe, arity, i), v))
                .collect(),
        )
    }

    /// `|τ| + |A| + Σ_R |R|·ar(R) + Σ_f |A|^ar(f)`, constants counting as
    /// nullary functions.
    pub fn size(&self) -> usize {
        let mut size = self.vocab.len() + self.universe;
        for d in self.vocab.decls() {
            size += match d.kind {
                SymbolKind::Relation { arity } => self.relations[&d.name].len() * arity,
                SymbolKind::Constant => 1,
                SymbolKind::Function { arity } => table_len(self.universe, arity),
            };
        }
        size
    }
}

/// Size measure of a structure; see [`Structure::size`].
pub fn structure_size(structure: &Structure) -> usize {
    structure.size()
}

impl Interpretation for Structure {
    fn universe_size(&self) -> usize {
        self.universe
    }

    fn constant_value(&self, name: &str) -> Option<usize> {
        self.constants.get(name).copied()
    }

    fn relation_holds(&self, name: &str, args: &[usize]) -> Option<bool> {
        self.relations.get(name).map(|r| r.contains(args))
    }

    fn function_value(&self, name: &str, args: &[usize]) -> Option<usize> {
        self.functions.get(name).map(|t| t[table_index(self.universe, args)])
    }
}

/// An expansion of a base interpretation by extra constants and relations.
/// Extra symbols shadow base symbols of the same name.
#[derive(Clone)]
pub struct Expansion<'a> {
    base: &'a dyn Interpretation,
    constants: Vec<(String, usize)>,
    relations: Vec<(String, Arc<TupleSet>)>,
}

impl<'a> Expansion<'a> {
    pub fn new(base: &'a dyn Interpretation) -> Self {
        Self {
            base,
            constants: Vec::new(),
            relations: Vec::new(),
        }
    }

    pub fn with_constant(mut self, name: impl Into<String>, value: usize) -> Self {
        self.constants.push((name.into(), value));
        self
    }

    pub fn with_constants<I, S>(mut self, constants: I) -> Self
    where
        I: IntoIterator<Item = (S, usize)>,
        S: Into<String>,
    {
        self.constants.extend(constants.into_iter().map(|(n, v)| (n.into(), v)));
        self
    }

    pub fn with_relations<I>(mut self, relations: I) -> Self
    where
        I: IntoIterator<Item = (String, Arc<TupleSet>)>,
    {
        self.relations.extend(relations);
        self
    }

    pub fn with_relation(mut self, name: impl Into<String>, tuples: Arc<TupleSet>) -> Self {
        self.relations.push((name.into(), tuples));
        self
    }
}

impl Interpretation for Expansion<'_> {
    fn universe_size(&self) -> usize {
        self.base.universe_size()
    }

    fn constant_value(&self, name: &str) -> Option<usize> {
        self.constants
            .iter()
            .rev()
            .find(|(n, _)| n == name)
            .map(|&(_, v)| v)
            .or_else(|| self.base.constant_value(name))
    }

    fn relation_holds(&self, name: &str, args: &[usize]) -> Option<bool> {
        match self.relations.iter().rev().find(|(n, _)| n == name) {
            Some((_, r)) => Some(r.contains(args)),
            None => self.base.relation_holds(name, args),
        }
    }

    fn function_value(&self, name: &str, args: &[usize]) -> Option<usize> {
        self.base.function_value(name, args)
    }
}

/// An ordered map from variables to universe elements. Variables are
/// pairwise distinct; by convention the order is first appearance in the
/// formula being evaluated.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Assignment {
    pairs: Vec<(String, usize)>,
}

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<I, S>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, usize)>,
        S: Into<String>,
    {
        let mut a = Self::new();
        for (v, e) in pairs {
            let v = v.into();
            if a.get(&v).is_some() {
                return Err(Error::Assignment(format!("variable `{v}` assigned twice")));
            }
            a.pairs.push((v, e));
        }
        Ok(a)
    }

    /// Zips `vars` with `values`.
    pub fn zip(vars: &[String], values: &[usize]) -> Self {
        debug_assert_eq!(vars.len(), values.len());
        Self {
            pairs: vars.iter().cloned().zip(values.iter().copied()).collect(),
        }
    }

    pub fn get(&self, var: &str) -> Option<usize> {
        self.pairs.iter().find(|(v, _)| v == var).map(|&(_, e)| e)
    }

    /// Sets `var`, replacing an existing binding in place.
    pub fn set(&mut self, var: &str, value: usize) {
        match self.pairs.iter_mut().find(|(v, _)| v == var) {
            Some(slot) => slot.1 = value,
            None => self.pairs.push((var.to_string(), value)),
        }
    }

    pub fn pairs(&self) -> &[(String, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// The sub-assignment on `vars`, in the order of `vars`.
    pub fn restrict(&self, vars: &[String]) -> Result<Self> {
        let pairs = vars
            .iter()
            .map(|v| {
                self.get(v)
                    .map(|e| (v.clone(), e))
                    .ok_or_else(|| Error::Unassigned(v.clone()))
            })
            .collect::<Result<_>>()?;
        Ok(Self { pairs })
    }

    pub fn check_range(&self, universe: usize) -> Result<()> {
        match self.pairs.iter().find(|(_, e)| *e >= universe) {
            Some((v, e)) => Err(Error::Assignment(format!(
                "`{v}` mapped to {e}, outside a universe of size {universe}"
            ))),
            None => Ok(()),
        }
    }
}

/// Value of `term` under a variable lookup.
pub(crate) fn eval_term<F>(term: &Term, interp: &dyn Interpretation, lookup: &F) -> Result<usize>
where
    F: Fn(&str) -> Option<usize>,
{
    match term {
        Term::Var(v) => lookup(v).ok_or_else(|| Error::Unassigned(v.clone())),
        Term::Const(c) => interp
            .constant_value(c)
            .ok_or_else(|| Error::Vocabulary(format!("unknown constant `{c}`"))),
        Term::App(f, args) => {
            let vals = args
                .iter()
                .map(|t| eval_term(t, interp, lookup))
                .collect::<Result<Vec<_>>>()?;
            interp
                .function_value(f, &vals)
                .ok_or_else(|| Error::Vocabulary(format!("unknown function `{f}`")))
        }
    }
}

/// Truth of an atomic formula under a variable lookup.
pub(crate) fn eval_atom_with<F>(atom: &Formula, interp: &dyn Interpretation, lookup: &F) -> Result<bool>
where
    F: Fn(&str) -> Option<usize>,
{
    match atom {
        Formula::Eq(a, b) => Ok(eval_term(a, interp, lookup)? == eval_term(b, interp, lookup)?),
        Formula::Rel(r, args) => {
            let vals = args
                .iter()
                .map(|t| eval_term(t, interp, lookup))
                .collect::<Result<Vec<_>>>()?;
            interp
                .relation_holds(r, &vals)
                .ok_or_else(|| Error::Vocabulary(format!("unknown relation `{r}`")))
        }
        _ => Err(Error::Precondition(format!("`{atom}` is not atomic"))),
    }
}

/// Evaluates an atom, computing term values bottom-up through function tables.
pub fn eval_atom(atom: &Formula, interp: &dyn Interpretation, alpha: &Assignment) -> Result<bool> {
    eval_atom_with(atom, interp, &|v| alpha.get(v))
}
