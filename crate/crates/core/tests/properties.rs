use std::sync::OnceLock;

use proptest::prelude::*;
use raagsep::bench::{corpus, F2, PATH3, Z2};
use raagsep::completion::{canonical_complete, canonical_complete_with, replay, CompletionConfig, ComponentRule};
use raagsep::error::ComplexError;
use raagsep::folding::{build_subgroup_complex, FoldingConfig, MoveOrder};
use raagsep::representation::RepresentationBundle;
use raagsep::word::{ball, geodesic_reduce, normal_form, same_element, word_length};
use raagsep::{DefiningGraph, Letter, Word};

fn graphs() -> [DefiningGraph; 3] {
    [F2, Z2, PATH3].map(|t| DefiningGraph::parse(t).unwrap())
}

fn word_from(graph: &DefiningGraph, raw: &[(usize, bool)]) -> Word {
    Word(raw.iter().map(|&(g, inv)| Letter { generator: g % graph.len(), inverse: inv }).collect())
}

fn raw_word(max: usize) -> impl Strategy<Value = Vec<(usize, bool)>> {
    prop::collection::vec((0usize..3, any::<bool>()), 0..=max)
}

fn bundles() -> &'static [RepresentationBundle] {
    static BUNDLES: OnceLock<Vec<RepresentationBundle>> = OnceLock::new();
    BUNDLES.get_or_init(|| corpus().iter().filter(|e| !e.expect_cap_exceeded).map(|e| e.bundle().unwrap()).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn reduction_is_idempotent_and_shortening(gi in 0usize..3, raw in raw_word(14)) {
        let g = &graphs()[gi];
        let w = word_from(g, &raw);
        let r = geodesic_reduce(g, &w);
        prop_assert!(r.len() <= w.len());
        prop_assert_eq!(geodesic_reduce(g, &r.clone()), r.clone());
        prop_assert_eq!(r.len(), word_length(g, &w));
    }

    #[test]
    fn word_times_inverse_is_trivial(gi in 0usize..3, raw in raw_word(14)) {
        let g = &graphs()[gi];
        let w = word_from(g, &raw);
        prop_assert!(geodesic_reduce(g, &w.concat(&w.inverse())).is_empty());
        prop_assert!(normal_form(g, &w.inverse().concat(&w)).is_empty());
    }

    #[test]
    fn normal_form_ignores_trivial_edits(gi in 0usize..3, raw in raw_word(12), pos in 0usize..13, x in 0usize..3, y in 0usize..3) {
        let g = &graphs()[gi];
        let w = word_from(g, &raw);
        let pos = pos.min(w.len());
        let (x, y) = (x % g.len(), y % g.len());
        // insert x x^-1
        let mut a = w.0.clone();
        a.splice(pos..pos, [Letter::pos(x), Letter::neg(x)]);
        prop_assert_eq!(normal_form(g, &Word(a)), normal_form(g, &w));
        // insert a relator [x, y] when the generators commute
        if g.generators_commute(x, y) {
            let mut b = w.0.clone();
            b.splice(pos..pos, [Letter::pos(x), Letter::pos(y), Letter::neg(x), Letter::neg(y)]);
            prop_assert_eq!(normal_form(g, &Word(b)), normal_form(g, &w));
        }
        // swap two adjacent commuting letters
        if pos + 1 < w.len() && g.commutes(w.0[pos], w.0[pos + 1]) {
            let mut c = w.0.clone();
            c.swap(pos, pos + 1);
            prop_assert_eq!(normal_form(g, &Word(c)), normal_form(g, &w));
        }
    }

    #[test]
    fn normal_forms_agree_with_rho0(gi in 0usize..3, u in raw_word(8), v in raw_word(8)) {
        let g = &graphs()[gi];
        let (u, v) = (word_from(g, &u), word_from(g, &v));
        let rho = raagsep::representation::Rho0::new(g);
        prop_assert_eq!(same_element(g, &u, &v), rho.eval(&u) == rho.eval(&v));
    }
}

fn random_subgroup(gi: usize, gens: &[Vec<(usize, bool)>]) -> (DefiningGraph, Vec<Word>) {
    let g = graphs()[gi].clone();
    let words = gens.iter().map(|r| word_from(&g, r)).filter(|w| !w.is_empty()).collect();
    (g, words)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn completions_are_covers_and_locally_isometric(gi in 0usize..3, gens in prop::collection::vec(prop::collection::vec((0usize..3, any::<bool>()), 1..=3), 1..=2)) {
        let (g, gens) = random_subgroup(gi, &gens);
        let cfg = FoldingConfig::with_cap(2_000);
        let y = match build_subgroup_complex(&g, &gens, cfg) {
            Ok(y) => y,
            Err(ComplexError::CapExceeded { .. }) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        prop_assert!(y.check_local_isometry(&g).unwrap().verdict);
        let (c, ledger) = canonical_complete(&y, &g).unwrap();
        prop_assert!(c.is_cover(&g));
        prop_assert!(c.check_local_isometry(&g).unwrap().verdict);
        prop_assert_eq!(replay(&y, &g, &ledger, None).unwrap(), c.clone());
        // the base vertex of the cover is fixed by every subgroup generator
        for w in &gens {
            prop_assert_eq!(c.trace(c.basepoint(), w), Ok(c.basepoint()));
        }
        // the component rule does not change the resulting cover's validity
        let alt = canonical_complete_with(&y, &g, CompletionConfig { component_rule: ComponentRule::IncludeLabel, ..Default::default() }).unwrap().0;
        prop_assert!(alt.is_cover(&g));
    }

    #[test]
    fn folding_is_deterministic_and_order_independent(gi in 0usize..3, gens in prop::collection::vec(prop::collection::vec((0usize..3, any::<bool>()), 1..=3), 1..=2)) {
        let (g, gens) = random_subgroup(gi, &gens);
        let rr = FoldingConfig::with_cap(2_000);
        let single = FoldingConfig { move_order: MoveOrder::SingleSpread, ..rr };
        let (a, b) = (build_subgroup_complex(&g, &gens, rr), build_subgroup_complex(&g, &gens, rr));
        prop_assert_eq!(&a, &b);
        let (Ok(a), Ok(s)) = (a, build_subgroup_complex(&g, &gens, single)) else { return Ok(()) };
        for w in ball(&g, 5) {
            let in_a = a.trace(a.basepoint(), &w) == Ok(a.basepoint());
            let in_s = s.trace(s.basepoint(), &w) == Ok(s.basepoint());
            prop_assert_eq!(in_a, in_s, "{}", w.display(&g));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn hnn_rewriting_is_sound(bi in 0usize..7, raw in raw_word(10)) {
        let bundles = bundles();
        let b = &bundles[bi % bundles.len()];
        let g = b.graph();
        let w = word_from(g, &raw);
        // push w into K by appending a coset representative
        let j = b.action().act(0, &w);
        let reps = &b.cosets().representatives;
        let k = w.concat(&reps[j].inverse());
        prop_assert!(b.is_member_k(&k));
        let h = b.rewrite_in_k_generators(&k).unwrap();
        prop_assert!(same_element(g, &h.evaluate(b.ledger()), &k));
        prop_assert_eq!(b.rho_prime_of_hnn(&h), b.rho_prime(&k).unwrap());
        prop_assert_eq!(b.rho0_by_edges(&k).unwrap(), b.rho0(&k));
    }

    #[test]
    fn rho_prime_is_well_defined(bi in 0usize..7, raw in raw_word(10), pos in 0usize..11, x in 0usize..3, y in 0usize..3) {
        let bundles = bundles();
        let b = &bundles[bi % bundles.len()];
        let g = b.graph();
        let w = word_from(g, &raw);
        let j = b.action().act(0, &w);
        let k = w.concat(&b.cosets().representatives[j].inverse());
        let pos = pos.min(k.len());
        let (x, y) = (x % g.len(), y % g.len());
        let mut edited = k.0.clone();
        edited.splice(pos..pos, [Letter::pos(x), Letter::neg(x)]);
        if g.adjacent(x, y) {
            edited.splice(pos..pos, [Letter::pos(x), Letter::pos(y), Letter::neg(x), Letter::neg(y)]);
        }
        prop_assert_eq!(b.rho_prime(&Word(edited)).unwrap(), b.rho_prime(&k).unwrap());
        // a geodesic spelling gives the same matrix as the original spelling
        prop_assert_eq!(b.rho_prime(&geodesic_reduce(g, &k)).unwrap(), b.rho_prime(&k).unwrap());
    }

    #[test]
    fn induce_is_multiplicative(bi in 0usize..7, u in raw_word(7), v in raw_word(7)) {
        let bundles = bundles();
        let b = &bundles[bi % bundles.len()];
        let g = b.graph();
        let (u, v) = (word_from(g, &u), word_from(g, &v));
        prop_assert_eq!(b.induce(&u.concat(&v)), b.induce(&u).mul(&b.induce(&v)));
        let id = b.induce(&u.concat(&u.inverse()));
        prop_assert!(id.first.to_dense().is_identity() && id.second.to_dense().is_identity());
    }
}
