use fomc_core::engines::eval_brute;
use fomc_core::gen::{random_formula, random_structure, random_vocabulary, rng, FormulaParams, VocabParams};
use fomc_core::metrics::{classify, nnf, num_variables, subformula_count, width};
use fomc_core::reach::{bfs_distance, bfs_reach, savitch_reach};
use fomc_core::reductions::{
    eliminate_functions, extend_structure, mc_to_stcon, stcon_to_mc, value_exists, AuxVars, ConfigScope, StconInstance,
    TransVariant, EXTENSION_RELATION,
};
use fomc_core::textio::{parse_formula, parse_structure};
use fomc_core::{evaluate, structure_size, Assignment, Digraph, Engine, Formula, Term};
use rand::Rng;

fn holds(phi: &Formula, a: &fomc_core::Structure) -> bool {
    eval_brute(phi, a, &Assignment::new()).unwrap().answer
}

#[test]
fn chain_examples() {
    let g = Digraph::from_edges(3, []).unwrap();
    let (a, phi) = stcon_to_mc(&StconInstance::new(g, 1, 1, 0).unwrap()).unwrap();
    assert_eq!(phi.to_string(), "EX x. (S(x) & T(x))");
    assert!(holds(&phi, &a));

    let edge = Digraph::from_edges(2, [(0, 1)]).unwrap();
    let (a, phi) = stcon_to_mc(&StconInstance::new(edge, 0, 1, 1).unwrap()).unwrap();
    assert!(holds(&phi, &a));
    let none = Digraph::new(2);
    let (a, phi) = stcon_to_mc(&StconInstance::new(none, 0, 1, 1).unwrap()).unwrap();
    assert!(!holds(&phi, &a));
}

#[test]
fn chain_shape() {
    for k in 1..20 {
        let g = Digraph::from_edges(2, [(0, 1)]).unwrap();
        let (_, phi) = stcon_to_mc(&StconInstance::new(g, 0, 1, k).unwrap()).unwrap();
        let c = classify(&phi);
        assert_eq!(
            (c.num_variables, c.sigma_level, c.subformula_count, c.width),
            (2, Some(1), 8 * k + 4, 2)
        );
    }
}

#[test]
fn chain_matches_bfs_on_all_three_vertex_graphs() {
    for mask in 0u32..512 {
        let g = Digraph::from_edges(3, (0..9).filter(|b| mask >> b & 1 == 1).map(|b| (b / 3, b % 3))).unwrap();
        for (s, t) in [(0, 2), (2, 0), (1, 1)] {
            for k in 0..=3 {
                let (a, phi) = stcon_to_mc(&StconInstance::new(g.clone(), s, t, k).unwrap()).unwrap();
                let got = evaluate(&phi, &a, Engine::BottomUp, &Assignment::new()).unwrap().answer;
                assert_eq!(got, bfs_reach(&g, s, t, Some(k)).unwrap());
            }
        }
    }
}

#[test]
fn config_graph_matches_truth() {
    let mut r = rng(21);
    for _ in 0..300 {
        let voc = random_vocabulary(
            &mut r,
            &VocabParams {
                constants: 1,
                ..VocabParams::default()
            },
        )
        .unwrap();
        let n = r.gen_range(1..=3);
        let a = random_structure(&mut r, &voc, n, 0.5).unwrap();
        let norm = r.gen_range(2..=10);
        let phi = random_formula(&mut r, &voc, &FormulaParams::sentence(2, 1, norm)).unwrap();
        let cg = mc_to_stcon(&a, &phi, ConfigScope::Environment).unwrap();
        let i = &cg.instance;
        let truth = holds(&phi, &a);
        let d = bfs_distance(&i.graph, i.s, i.t).unwrap();
        assert_eq!(d.is_some(), truth, "{phi}");
        if let Some(d) = d {
            assert!(d < 2 * subformula_count(&phi));
        }
        if i.graph.vertex_count() <= 40 {
            assert_eq!(savitch_reach(&i.graph, i.s, i.t, i.k).unwrap().answer, truth);
        }
    }
}

#[test]
fn free_variable_scope_size_and_contents() {
    let mut r = rng(22);
    for _ in 0..200 {
        let voc = random_vocabulary(&mut r, &VocabParams::default()).unwrap();
        let n = r.gen_range(1..=4);
        let a = random_structure(&mut r, &voc, n, 0.5).unwrap();
        let norm = r.gen_range(2..=20);
        let phi = random_formula(&mut r, &voc, &FormulaParams::sentence(3, 1, norm)).unwrap();
        let cg = mc_to_stcon(&a, &phi, ConfigScope::FreeVariables).unwrap();
        assert!(cg.vertex_count() <= 2 * subformula_count(&phi) * n.pow(width(&phi) as u32));
        for id in 0..cg.vertex_count() {
            let v = cg.vertex(id);
            let vars: Vec<_> = v.slots.iter().map(|(x, _)| x.clone()).collect();
            assert_eq!(vars, fomc_core::metrics::free_vars(phi.at(&v.pos).unwrap()));
        }
    }
}

#[test]
fn config_graph_preconditions() {
    let a = parse_structure("universe 2\nrel S 1\n0\n.\nfun f 1\n0 1\n1 0\n.\n").unwrap();
    let voc = a.vocabulary().clone();
    for text in ["ALL x. S(x)", "~EX x. S(x)", "S(x)", "EX x. S(f(x))"] {
        let phi = parse_formula(text, &voc).unwrap();
        assert!(mc_to_stcon(&a, &phi, ConfigScope::Environment).is_err(), "{text}");
    }
}

#[test]
fn extension_examples() {
    let a = parse_structure("universe 2\nfun f 2\n0 0 0\n0 1 1\n1 0 1\n1 1 0\n.\n").unwrap();
    let ext = extend_structure(&a).unwrap();
    assert_eq!(ext.structure.universe(), 6);

    let g = parse_structure("universe 3\nrel E 2\n0 1\n2 2\n.\nrel R 3\n0 1 2\n.\n").unwrap();
    let ext = extend_structure(&g).unwrap();
    let re = ext.structure.relation(EXTENSION_RELATION).unwrap();
    for (id, t) in ext.elements.iter().enumerate() {
        if t.len() == 2 {
            assert!(re.contains(&vec![t[0], t[1], id]));
        }
    }
    assert!(ext.structure.universe() <= structure_size(&g).pow(2));
}

#[test]
fn value_of_unary_application() {
    let a = parse_structure("universe 2\nfun f 1\n0 1\n1 1\n.\n").unwrap();
    let ext = extend_structure(&a).unwrap();
    let phi = value_exists(&Term::app("f", vec![Term::var("x1")]), &AuxVars::default());
    for (x, want) in [(0, false), (1, true)] {
        let alpha = Assignment::from_pairs([("x", x), ("x1", 0)]).unwrap();
        assert_eq!(eval_brute(&phi, &ext.structure, &alpha).unwrap().answer, want);
    }
}

#[test]
fn elimination_examples() {
    let a = parse_structure("universe 2\nrel R 1\n1\n.\nfun f 1\n0 1\n1 0\n.\n").unwrap();
    let voc = a.vocabulary().clone();
    let phi = parse_formula("EX x1. R(f(x1))", &voc).unwrap();
    let el = eliminate_functions(&a, &phi).unwrap();
    assert!(holds(&phi, &a) && holds(&el.formula, &el.extended.structure));

    let phi = parse_formula("ALL x1. x1=x1", &voc).unwrap();
    let el = eliminate_functions(&a, &phi).unwrap();
    assert_eq!(el.variant, TransVariant::Existential);
    assert!(holds(&el.formula, &el.extended.structure));
}

/// On a function-free input the translation only relativizes: evaluating
/// it agrees with the original, and every original quantifier is guarded
/// by `U`.
#[test]
fn elimination_on_relational_input() {
    let mut r = rng(23);
    for _ in 0..100 {
        let voc = random_vocabulary(&mut r, &VocabParams::default()).unwrap();
        let n = r.gen_range(2..=3);
        let a = random_structure(&mut r, &voc, n, 0.5).unwrap();
        let t = r.gen_range(1..=2);
        let norm = r.gen_range(t + 1..=12);
        let phi = random_formula(&mut r, &voc, &FormulaParams::sentence(2, t, norm)).unwrap();
        let el = eliminate_functions(&a, &phi).unwrap();
        assert_eq!(holds(&phi, &a), holds(&el.formula, &el.extended.structure), "{phi}");
        assert_eq!(holds(&el.normalized, &el.extended.structure), holds(&phi, &a));
        assert_eq!(el.normalized, nnf(&el.formula));
        let quantifiers = |f: &Formula| {
            f.positions()
                .iter()
                .filter(|p| matches!(f.at(p), Some(Formula::Exists(..) | Formula::Forall(..))))
                .count()
        };
        let guards = el
            .formula
            .atoms()
            .into_iter()
            .filter(|a| matches!(a, Formula::Rel(name, _) if name == "U"))
            .count();
        assert_eq!(guards, quantifiers(&phi));
        assert!(num_variables(&el.formula) <= 2 + 3);
    }
}

#[test]
fn elimination_preconditions() {
    let one = parse_structure("universe 1\nfun f 1\n0 0\n.\n").unwrap();
    let phi = parse_formula("EX x. f(x)=x", one.vocabulary()).unwrap();
    assert!(eliminate_functions(&one, &phi).is_err());
    let two = parse_structure("universe 2\nfun f 1\n0 0\n1 1\n.\n").unwrap();
    let open = parse_formula("f(x)=x", two.vocabulary()).unwrap();
    assert!(eliminate_functions(&two, &open).is_err());
}
