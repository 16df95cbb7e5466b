//! Elimination of function and constant symbols: the structure is extended
//! by argument tuples and the formula rewritten over relations only.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::metrics::{alternation_levels, classify, free_vars, nnf, variables, Classification};
use crate::structure::Structure;
use crate::syntax::{Formula, Term};
use crate::vocab::{SymbolKind, Vocabulary};

/// The extended structure with the meaning of each of its elements.
#[derive(Debug, Clone)]
pub struct ExtendedStructure {
    pub structure: Structure,
    /// `elements[e]` is the tuple element `e` stands for; original elements
    /// are 1-tuples and the sink is the empty tuple.
    pub elements: Vec<Vec<usize>>,
    /// Target of extensions that leave the universe. Present when some
    /// relation has arity two or more.
    pub sink: Option<usize>,
}

/// Name of the relation marking the value of constant `c`.
pub fn constant_marker(c: &str) -> String {
    format!("U_{c}")
}

/// Name of the relation marking full tuples of relation `r`.
pub fn relation_marker(r: &str) -> String {
    format!("U_{r}")
}

/// Name of the graph relation of function `f`.
pub fn function_graph(f: &str) -> String {
    format!("F_{f}")
}

pub const UNIVERSE_MARKER: &str = "U";
pub const EXTENSION_RELATION: &str = "R_e";

/// Extends `a` by tuples: prefixes of length at least two of relation
/// tuples, and all argument tuples of functions of arity at least two.
pub fn extend_structure(a: &Structure) -> Result<ExtendedStructure> {
    let n = a.universe();
    if n < 2 {
        return Err(Error::Precondition(
            "function elimination needs a universe with at least two elements".into(),
        ));
    }
    let voc = a.vocabulary();
    let mut tuples: BTreeSet<(usize, Vec<usize>)> = BTreeSet::new();
    let mut needs_sink = false;
    for (r, arity) in voc.relations() {
        if arity >= 2 {
            needs_sink = true;
        }
        for t in a.relation(r).expect("declared") {
            for len in 2..=t.len() {
                tuples.insert((len, t[..len].to_vec()));
            }
        }
    }
    for (f, arity) in voc.functions() {
        for (args, _) in a.function_rows(f).expect("declared") {
            for len in 2..=arity {
                tuples.insert((len, args[..len].to_vec()));
            }
        }
    }

    let mut elements: Vec<Vec<usize>> = (0..n).map(|e| vec![e]).collect();
    elements.extend(tuples.into_iter().map(|(_, t)| t));
    let id: BTreeMap<Vec<usize>, usize> = elements.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
    let sink = needs_sink.then(|| {
        elements.push(Vec::new());
        elements.len() - 1
    });

    let mut tau = Vocabulary::new();
    tau.add_relation(UNIVERSE_MARKER, 1)?;
    for d in voc.decls() {
        match d.kind {
            SymbolKind::Constant => tau.add_relation(constant_marker(&d.name), 1)?,
            SymbolKind::Relation { .. } => tau.add_relation(relation_marker(&d.name), 1)?,
            SymbolKind::Function { .. } => tau.add_relation(function_graph(&d.name), 2)?,
        }
    }
    tau.add_relation(EXTENSION_RELATION, 3)?;

    let mut b = Structure::builder(tau, elements.len())?;
    for e in 0..n {
        b.add_tuple(UNIVERSE_MARKER, vec![e])?;
    }
    for d in voc.decls() {
        match d.kind {
            SymbolKind::Constant => {
                let c = a.constant(&d.name).expect("declared");
                b.add_tuple(&constant_marker(&d.name), vec![c])?;
            }
            SymbolKind::Relation { .. } => {
                let marker = relation_marker(&d.name);
                for t in a.relation(&d.name).expect("declared") {
                    b.add_tuple(&marker, vec![id[t]])?;
                }
            }
            SymbolKind::Function { .. } => {
                let graph = function_graph(&d.name);
                for (args, v) in a.function_rows(&d.name).expect("declared") {
                    b.add_tuple(&graph, vec![id[&args], v])?;
                }
            }
        }
    }
    for (i, t) in elements.iter().enumerate() {
        if Some(i) == sink {
            for x in 0..n {
                b.add_tuple(EXTENSION_RELATION, vec![i, x, i])?;
            }
            continue;
        }
        for x in 0..n {
            let mut ext = t.clone();
            ext.push(x);
            match (id.get(&ext), sink) {
                (Some(&j), _) => {
                    b.add_tuple(EXTENSION_RELATION, vec![i, x, j])?;
                }
                (None, Some(s)) => {
                    b.add_tuple(EXTENSION_RELATION, vec![i, x, s])?;
                }
                (None, None) => {}
            }
        }
    }
    Ok(ExtendedStructure {
        structure: b.build()?,
        elements,
        sink,
    })
}

/// The three auxiliary variables of the translation, in the roles of
/// output (`x`) and the two scratch variables (`y`, `z`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuxVars {
    pub x: String,
    pub y: String,
    pub z: String,
}

impl Default for AuxVars {
    fn default() -> Self {
        Self {
            x: "x".into(),
            y: "y".into(),
            z: "z".into(),
        }
    }
}

impl AuxVars {
    /// `x`, `y`, `z`, each suffixed with digits until it avoids `taken`.
    pub fn avoiding(taken: &[String]) -> Self {
        let mut chosen: Vec<String> = Vec::new();
        for base in ["x", "y", "z"] {
            let mut name = base.to_string();
            let mut i = 1;
            while taken.contains(&name) || chosen.contains(&name) {
                name = format!("{base}{i}");
                i += 1;
            }
            chosen.push(name);
        }
        let z = chosen.pop().expect("three names");
        let y = chosen.pop().expect("three names");
        let x = chosen.pop().expect("three names");
        Self { x, y, z }
    }
}

fn var(v: &str) -> Term {
    Term::var(v)
}

/// Formula in free `aux.x` saying that `aux.x` is the value of `m`,
/// quantifying existentially over argument tuples.
pub fn value_exists(m: &Term, aux: &AuxVars) -> Formula {
    match m {
        Term::Var(v) => Formula::eq(var(&aux.x), var(v)),
        Term::Const(c) => Formula::rel(constant_marker(c), vec![var(&aux.x)]),
        Term::App(f, args) => Formula::exists(
            aux.y.clone(),
            Formula::and(
                Formula::exists(
                    aux.x.clone(),
                    Formula::and(Formula::eq(var(&aux.x), var(&aux.y)), tuple_formula(args, aux)),
                ),
                Formula::rel(function_graph(f), vec![var(&aux.y), var(&aux.x)]),
            ),
        ),
    }
}

/// As [`value_exists`], but universal over argument tuples.
pub fn value_forall(m: &Term, aux: &AuxVars) -> Formula {
    match m {
        Term::Var(_) | Term::Const(_) => value_exists(m, aux),
        Term::App(f, args) => Formula::forall(
            aux.y.clone(),
            Formula::or(
                Formula::not(Formula::exists(
                    aux.x.clone(),
                    Formula::and(Formula::eq(var(&aux.x), var(&aux.y)), tuple_formula(args, aux)),
                )),
                Formula::rel(function_graph(f), vec![var(&aux.y), var(&aux.x)]),
            ),
        ),
    }
}

/// Formula in free `aux.x` saying that `aux.x` is the tuple of values of
/// `ms` (the sink if that tuple is not in the extended universe).
pub fn tuple_formula(ms: &[Term], aux: &AuxVars) -> Formula {
    assert!(!ms.is_empty(), "tuples have at least one component");
    let (last, init) = ms.split_last().expect("non-empty");
    if init.is_empty() {
        return value_exists(last, aux);
    }
    let pinned = |target: &str, f: Formula| {
        Formula::exists(aux.x.clone(), Formula::and(Formula::eq(var(&aux.x), var(target)), f))
    };
    Formula::exists(
        aux.y.clone(),
        Formula::exists(
            aux.z.clone(),
            Formula::and(
                Formula::and(
                    Formula::rel(EXTENSION_RELATION, vec![var(&aux.y), var(&aux.z), var(&aux.x)]),
                    pinned(&aux.y, tuple_formula(init, aux)),
                ),
                pinned(&aux.z, value_exists(last, aux)),
            ),
        ),
    )
}

/// Which of the two translations is produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransVariant {
    Existential,
    Universal,
}

fn trans(phi: &Formula, variant: TransVariant, aux: &AuxVars) -> Formula {
    use TransVariant::*;
    let x = || var(&aux.x);
    match phi {
        Formula::Eq(m1, m2) => match variant {
            Existential => Formula::exists(
                aux.x.clone(),
                Formula::and(value_exists(m1, aux), value_exists(m2, aux)),
            ),
            Universal => Formula::forall(
                aux.x.clone(),
                Formula::or(Formula::not(value_exists(m1, aux)), value_forall(m2, aux)),
            ),
        },
        Formula::Rel(r, ms) => {
            let marker = Formula::rel(relation_marker(r), vec![x()]);
            match variant {
                Existential => Formula::exists(aux.x.clone(), Formula::and(marker, tuple_formula(ms, aux))),
                Universal => Formula::forall(aux.x.clone(), Formula::or(Formula::not(tuple_formula(ms, aux)), marker)),
            }
        }
        Formula::Not(g) => {
            let flipped = match variant {
                Existential => Universal,
                Universal => Existential,
            };
            Formula::not(trans(g, flipped, aux))
        }
        Formula::And(a, b) => Formula::and(trans(a, variant, aux), trans(b, variant, aux)),
        Formula::Or(a, b) => Formula::or(trans(a, variant, aux), trans(b, variant, aux)),
        Formula::Exists(v, g) => Formula::exists(
            v.clone(),
            Formula::and(Formula::rel(UNIVERSE_MARKER, vec![var(v)]), trans(g, variant, aux)),
        ),
        Formula::Forall(v, g) => Formula::forall(
            v.clone(),
            Formula::or(
                Formula::not(Formula::rel(UNIVERSE_MARKER, vec![var(v)])),
                trans(g, variant, aux),
            ),
        ),
    }
}

/// Output of [`eliminate_functions`].
#[derive(Debug, Clone)]
pub struct Elimination {
    pub extended: ExtendedStructure,
    pub formula: Formula,
    pub variant: TransVariant,
    pub aux: AuxVars,
    /// Negation normal form of `formula` with its classification. Its
    /// alternation level is reported, not guaranteed.
    pub normalized: Formula,
    pub normalized_classification: Classification,
}

/// Rewrites a sentence over `a`'s vocabulary into an equivalent sentence
/// over the extended structure without function or constant symbols.
///
/// The existential translation is used for odd or undefined `Σ` level,
/// the universal one for even level.
pub fn eliminate_functions(a: &Structure, phi: &Formula) -> Result<Elimination> {
    a.vocabulary().check_formula(phi)?;
    if let Some(v) = free_vars(phi).first() {
        return Err(Error::Precondition(format!("`{v}` is free; a sentence is required")));
    }
    let extended = extend_structure(a)?;
    let aux = AuxVars::avoiding(&variables(phi));
    let variant = match alternation_levels(phi).0 {
        Some(t) if t % 2 == 0 => TransVariant::Universal,
        _ => TransVariant::Existential,
    };
    let formula = trans(phi, variant, &aux);
    let normalized = nnf(&formula);
    let normalized_classification = classify(&normalized);
    Ok(Elimination {
        extended,
        formula,
        variant,
        aux,
        normalized,
        normalized_classification,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engines::eval_brute;
    use crate::metrics::num_variables;
    use crate::structure::Assignment;

    fn unary_f() -> Structure {
        let mut voc = Vocabulary::new();
        voc.add_function("f", 1).unwrap();
        voc.add_relation("R", 1).unwrap();
        let mut b = Structure::builder(voc, 2).unwrap();
        b.set_function_value("f", &[0], 1).unwrap();
        b.set_function_value("f", &[1], 1).unwrap();
        b.add_tuple("R", vec![1]).unwrap();
        b.build().unwrap()
    }

    #[test]
    fn binary_function_adds_all_pairs() {
        let mut voc = Vocabulary::new();
        voc.add_function("f", 2).unwrap();
        let mut b = Structure::builder(voc, 2).unwrap();
        for (i, j) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            b.set_function_value("f", &[i, j], i & j).unwrap();
        }
        let ext = extend_structure(&b.build().unwrap()).unwrap();
        assert_eq!(ext.structure.universe(), 6);
        assert_eq!(ext.sink, None);
        let re = ext.structure.relation(EXTENSION_RELATION).unwrap();
        for (i, t) in ext.elements.iter().enumerate().filter(|(_, t)| t.len() == 2) {
            assert!(re.contains(&vec![t[0], t[1], i]));
        }
    }

    #[test]
    fn value_formulas_of_simple_terms() {
        let aux = AuxVars::default();
        let t = Term::var("x2");
        assert_eq!(value_exists(&t, &aux), Formula::eq(Term::var("x"), t.clone()));
        assert_eq!(value_forall(&t, &aux), value_exists(&t, &aux));
        let c = Term::constant("c");
        assert_eq!(value_exists(&c, &aux).to_string(), "U_c(x)");
    }

    #[test]
    fn value_of_application_is_looked_up() {
        let a = unary_f();
        let ext = extend_structure(&a).unwrap();
        let aux = AuxVars::default();
        let m = Term::app("f", vec![Term::var("x1")]);
        for (vx, expected) in [(0, false), (1, true)] {
            let alpha = Assignment::from_pairs([("x", vx), ("x1", 0)]).unwrap();
            for phi in [value_exists(&m, &aux), value_forall(&m, &aux)] {
                assert_eq!(eval_brute(&phi, &ext.structure, &alpha).unwrap().answer, expected);
            }
        }
    }

    #[test]
    fn translation_preserves_truth() {
        let a = unary_f();
        let phi = Formula::exists("x1", Formula::rel("R", vec![Term::app("f", vec![Term::var("x1")])]));
        let el = eliminate_functions(&a, &phi).unwrap();
        assert_eq!(el.variant, TransVariant::Existential);
        assert!(eval_brute(&phi, &a, &Assignment::new()).unwrap().answer);
        let ext = &el.extended.structure;
        assert!(eval_brute(&el.formula, ext, &Assignment::new()).unwrap().answer);
        assert!(eval_brute(&el.normalized, ext, &Assignment::new()).unwrap().answer);
        assert!(num_variables(&el.formula) <= 1 + 3);
    }

    #[test]
    fn sink_catches_missing_prefixes() {
        // Universal translation of a quantifier-free sentence; `E(1,1)` is
        // false and must stay false.
        let mut voc = Vocabulary::new();
        voc.add_relation("E", 2).unwrap();
        voc.add_constant("c").unwrap();
        let mut b = Structure::builder(voc, 2).unwrap();
        b.add_tuple("E", vec![0, 1]).unwrap();
        b.set_constant("c", 1).unwrap();
        let a = b.build().unwrap();
        let phi = Formula::rel("E", vec![Term::constant("c"), Term::constant("c")]);
        let el = eliminate_functions(&a, &phi).unwrap();
        assert_eq!(el.variant, TransVariant::Universal);
        assert!(el.extended.sink.is_some());
        assert!(
            !eval_brute(&el.formula, &el.extended.structure, &Assignment::new())
                .unwrap()
                .answer
        );
    }

    #[test]
    fn aux_names_avoid_formula_variables() {
        let aux = AuxVars::avoiding(&["x".into(), "y1".into(), "y".into()]);
        assert_eq!(
            aux,
            AuxVars {
                x: "x1".into(),
                y: "y2".into(),
                z: "z".into()
            }
        );
    }

    #[test]
    fn tiny_universe_is_rejected() {
        let voc = Vocabulary::new();
        let a = Structure::builder(voc, 1).unwrap().build().unwrap();
        assert!(extend_structure(&a).is_err());
    }
}
