use fomc_core::gen::{
    random_digraph, random_formula, random_structure, random_vocabulary, rng, FormulaParams, VocabParams,
};
use fomc_core::textio::{parse_digraph, parse_formula, parse_structure, print_digraph, print_formula, print_structure};
use proptest::prelude::*;

fn vocab_params() -> impl Strategy<Value = VocabParams> {
    (0usize..4, 1usize..4, 0usize..3, 0usize..3, 1usize..3).prop_map(|(r, ra, c, f, fa)| VocabParams {
        relations: r,
        max_relation_arity: ra,
        constants: c,
        functions: f,
        max_function_arity: fa,
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn structures(seed: u64, vp in vocab_params(), n in 1usize..5, density in 0.0f64..1.0) {
        let mut r = rng(seed);
        let voc = random_vocabulary(&mut r, &vp).unwrap();
        let a = random_structure(&mut r, &voc, n, density).unwrap();
        prop_assert_eq!(parse_structure(&print_structure(&a)).unwrap(), a);
    }

    #[test]
    fn formulas(seed: u64, vp in vocab_params(), s in 1usize..5, t in 1usize..4, norm in 1usize..50, pi: bool) {
        prop_assume!(vp.relations + vp.constants > 0);
        let mut r = rng(seed);
        let voc = random_vocabulary(&mut r, &vp).unwrap();
        let p = FormulaParams { pi, function_rate: 0.3, ..FormulaParams::sentence(s, t, norm) };
        let phi = random_formula(&mut r, &voc, &p).unwrap();
        prop_assert_eq!(parse_formula(&print_formula(&phi), &voc).unwrap(), phi);
    }

    #[test]
    fn digraphs(seed: u64, n in 1usize..12, p in 0.0f64..1.0) {
        let g = random_digraph(&mut rng(seed), n, p);
        prop_assert_eq!(parse_digraph(&print_digraph(&g)).unwrap(), g);
    }
}
