use fomc_core::engines::{
    build_guarded, eval_bottom_up, eval_brute, eval_dnc_sigma1, eval_sigma_t, split_subformula, DncOptions, GuardKind,
};
use fomc_core::gen::{random_formula, random_structure, random_vocabulary, rng, FormulaParams, VocabParams};
use fomc_core::metrics::{nnf, subformula_count, width};
use fomc_core::reach::bfs_reach;
use fomc_core::reductions::{stcon_to_mc, StconInstance};
use fomc_core::textio::{parse_formula, parse_formula_infer, parse_structure};
use fomc_core::{evaluate, Assignment, Digraph, Engine, Error, Formula};
use rand::Rng;

fn none() -> Assignment {
    Assignment::new()
}

fn chain_on(g: Digraph, s: usize, t: usize, k: usize) -> (fomc_core::Structure, Formula) {
    stcon_to_mc(&StconInstance::new(g, s, t, k).unwrap()).unwrap()
}

#[test]
fn brute_examples() {
    let a = parse_structure("universe 3\nrel E 2\n0 1\n1 2\n.\n").unwrap();
    let voc = a.vocabulary().clone();
    let phi = parse_formula("EX x. EX y. E(x,y)", &voc).unwrap();
    assert!(eval_brute(&phi, &a, &none()).unwrap().answer);
    let phi = parse_formula("ALL x. x=x", &voc).unwrap();
    assert!(eval_brute(&phi, &a, &none()).unwrap().answer);

    let path = Digraph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
    assert!(!bfs_reach(&path, 0, 3, Some(2)).unwrap());
    let (a, phi) = chain_on(path, 0, 3, 2);
    assert!(!eval_brute(&phi, &a, &none()).unwrap().answer);
}

#[test]
fn bottom_up_examples() {
    let a = parse_structure("universe 3\nrel S 1\n0\n.\n").unwrap();
    let voc = a.vocabulary().clone();
    let phi = parse_formula("EX x. S(x)", &voc).unwrap();
    assert!(eval_bottom_up(&phi, &a).unwrap().report.answer);
    let table = eval_bottom_up(&parse_formula("S(x)", &voc).unwrap(), &a).unwrap().table;
    assert_eq!(table.rows.len(), 1);

    // Chain k=8 over six vertices: the enumeration cap ‖φ‖·|A|^2.
    let g = Digraph::from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]).unwrap();
    let (a, phi) = chain_on(g, 0, 5, 8);
    let r = eval_bottom_up(&phi, &a).unwrap().report;
    assert!(r.answer);
    assert!(
        r.counters.assignments_enumerated <= 2448,
        "{}",
        r.counters.assignments_enumerated
    );

    let with_fun = parse_structure("universe 2\nfun f 1\n0 1\n1 0\n.\n").unwrap();
    let phi = parse_formula("EX x. f(x)=x", with_fun.vocabulary()).unwrap();
    let err = eval_bottom_up(&phi, &with_fun).unwrap_err();
    assert!(matches!(err, Error::Unsupported(ref m) if m.contains("eliminate_functions")));
}

#[test]
fn split_examples() {
    let phi = parse_formula_infer("(A(x) & (B(x) & C(x)))").unwrap().0;
    let pos = split_subformula(&phi).unwrap();
    assert_eq!(pos, vec![1]);
    assert_eq!(subformula_count(phi.at(&pos).unwrap()), 3);

    let chain = fomc_core::reductions::chain_sentence(4);
    assert_eq!(subformula_count(&chain), 36);
    let got = subformula_count(chain.at(&split_subformula(&chain).unwrap()).unwrap());
    assert!((12..=24).contains(&got), "{got}");
}

#[test]
fn split_window_on_random_formulas() {
    let mut r = rng(11);
    let voc = random_vocabulary(&mut r, &VocabParams::default()).unwrap();
    for _ in 0..500 {
        let norm = r.gen_range(3..=80);
        let phi = random_formula(&mut r, &voc, &FormulaParams::sentence(3, 1, norm)).unwrap();
        let n = subformula_count(&phi);
        let c = subformula_count(phi.at(&split_subformula(&phi).unwrap()).unwrap());
        // Leaving a node of count > 2n/3 guarantees a child of at least
        // (n-1)/3, not n/3: `EX x. EX x. (EX x. x=x & ~Q(x,x))` stops at 2 of 7.
        assert!(3 * c + 1 >= n && 3 * c <= 2 * n, "{c} of {n} in {phi}");
    }
}

#[test]
fn guarded_rewrite_examples() {
    let phi = parse_formula_infer("EX y. (E(x,y) & T(y))").unwrap().0;
    let g = build_guarded(&phi, &[0, 1], 1).unwrap();
    assert_eq!(g.phi0.to_string(), "T(y)");
    assert_eq!(g.phi1.to_string(), "EX y. (y=_c1_1 & (E(x,y) & T(y)))");
    assert_eq!(g.y_vars, ["y"]);
    assert_eq!(g.guards, [GuardKind::Bound]);

    let phi = parse_formula_infer("(E(x,y) & (R(x) | S(y)))").unwrap().0;
    let g = build_guarded(&phi, &[1, 0], 1).unwrap();
    assert!(g.guards.iter().all(|k| *k == GuardKind::FreeInPhi));
    assert_eq!(g.phi1, phi);
}

#[test]
fn guard_growth_is_two_per_bound_variable() {
    let mut r = rng(12);
    let voc = random_vocabulary(&mut r, &VocabParams::default()).unwrap();
    for _ in 0..300 {
        let norm = r.gen_range(3..=60);
        let phi = random_formula(&mut r, &voc, &FormulaParams::sentence(3, 1, norm)).unwrap();
        let pos = split_subformula(&phi).unwrap();
        let g = build_guarded(&phi, &pos, 1).unwrap();
        assert_eq!(
            subformula_count(&g.phi1),
            subformula_count(&phi) + 2 * g.bound_count(),
            "{phi}"
        );
    }
}

#[test]
fn dnc_examples() {
    let g = Digraph::from_edges(2, [(0, 1)]).unwrap();
    let (a, phi) = chain_on(g, 0, 1, 1);
    let out = eval_dnc_sigma1(&phi, width(&phi), &a, &none(), DncOptions::default()).unwrap();
    assert!(out.report.answer);
    assert!(eval_dnc_sigma1(&phi, 1, &a, &none(), DncOptions::default()).is_err());
}

#[test]
fn dnc_agrees_with_brute_on_open_formulas() {
    let mut r = rng(13);
    for _ in 0..300 {
        let voc = random_vocabulary(&mut r, &VocabParams::default()).unwrap();
        let n = r.gen_range(1..=3);
        let a = random_structure(&mut r, &voc, n, 0.4).unwrap();
        let p = FormulaParams {
            free: vec!["x".into()],
            ..FormulaParams::sentence(2, 1, r.gen_range(40..=120))
        };
        let phi = random_formula(&mut r, &voc, &p).unwrap();
        let alpha = Assignment::from_pairs([("x", r.gen_range(0..n))]).unwrap();
        let want = eval_brute(&phi, &a, &alpha).unwrap().answer;
        let got = eval_dnc_sigma1(&phi, width(&phi), &a, &alpha, DncOptions::default()).unwrap();
        assert_eq!(got.report.answer, want, "{phi}");
    }
}

#[test]
fn sigma_t_examples() {
    let dominated = parse_structure("universe 3\nrel E 2\n1 0\n1 1\n1 2\n2 0\n.\n").unwrap();
    let phi = parse_formula("EX x. ALL y. E(x,y)", dominated.vocabulary()).unwrap();
    assert!(
        eval_sigma_t(&phi, &dominated, &none(), DncOptions::default())
            .unwrap()
            .answer
    );
    let cycle = parse_structure("universe 2\nrel E 2\n0 1\n1 0\n.\n").unwrap();
    assert!(
        !eval_sigma_t(&phi, &cycle, &none(), DncOptions::default())
            .unwrap()
            .answer
    );
}

#[test]
fn sigma_t_agrees_with_brute() {
    let mut r = rng(14);
    for _ in 0..1000 {
        let vp = VocabParams {
            relations: r.gen_range(1..=3),
            constants: r.gen_range(0..=1),
            ..VocabParams::default()
        };
        let voc = random_vocabulary(&mut r, &vp).unwrap();
        let n = r.gen_range(1..=4);
        let a = random_structure(&mut r, &voc, n, 0.5).unwrap();
        let t = r.gen_range(1..=3);
        let norm = r.gen_range(t + 1..=40);
        let phi = random_formula(&mut r, &voc, &FormulaParams::sentence(3, t, norm)).unwrap();
        let want = eval_brute(&phi, &a, &none()).unwrap().answer;
        let got = eval_sigma_t(&phi, &a, &none(), DncOptions::default()).unwrap().answer;
        assert_eq!(got, want, "{phi}");
    }
}

#[test]
fn sigma_t_handles_non_nnf_input() {
    let a = parse_structure("universe 2\nrel E 2\n0 0\n0 1\n.\n").unwrap();
    let phi = parse_formula("~ALL x. ~ALL y. E(x,y)", a.vocabulary()).unwrap();
    assert_ne!(nnf(&phi), phi);
    assert!(eval_sigma_t(&phi, &a, &none(), DncOptions::default()).unwrap().answer);
}

#[test]
fn dispatch() {
    let a = parse_structure("universe 2\nrel S 1\n0\n.\n").unwrap();
    let voc = a.vocabulary().clone();
    let phi = parse_formula("EX x. S(x)", &voc).unwrap();
    let r = evaluate(&phi, &a, Engine::Auto, &none()).unwrap();
    assert_eq!(r.engine, Engine::Dnc);
    assert!(r.answer);
    let pi = parse_formula("ALL x. S(x)", &voc).unwrap();
    assert!(matches!(
        evaluate(&pi, &a, Engine::Dnc, &none()),
        Err(Error::Unclassified(_))
    ));
    assert_eq!(
        evaluate(&pi, &a, Engine::Auto, &none()).unwrap().engine,
        Engine::BottomUp
    );
    for e in [Engine::Brute, Engine::BottomUp, Engine::Auto] {
        assert!(!evaluate(&pi, &a, e, &none()).unwrap().answer);
    }
}

#[test]
fn open_formula_needs_assignment() {
    let a = parse_structure("universe 2\nrel S 1\n0\n.\n").unwrap();
    let phi = parse_formula("S(x)", a.vocabulary()).unwrap();
    for e in [Engine::Brute, Engine::BottomUp, Engine::Dnc] {
        assert!(
            matches!(evaluate(&phi, &a, e, &none()), Err(Error::Unassigned(_))),
            "{e}"
        );
    }
}
