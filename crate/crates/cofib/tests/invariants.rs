use proptest::prelude::*;

use cofib::cofcat::{check_axioms, CofCategory};
use cofib::corpus;
use cofib::dconstr::{b_set, FiltCategory, WeqPolicy};
use cofib::fincat::{
    canonical_json, check_degree, check_homotopical, colimit, synthesize_degree, to_file, two_out_of_six_closure,
    validate_category, CategoryFile, FinCategory,
};
use cofib::frames::Nf;
use cofib::hocat::{compare, homotopy_category, oracle_localization};
use cofib::quasicat::is_quasicategory;
use cofib::reedy::{enumerate_diagrams, reedy_colimit_checked, DirectIndex};
use cofib::simplicial::{find_isomorphism, FinSimplicialSet, Op, Simplex};

fn op(m: usize, n: usize) -> impl Strategy<Value = Op> {
    prop::collection::vec(0..=n, m + 1).prop_map(move |mut v| {
        v.sort();
        Op::new(n, v)
    })
}

/// Three composable operators [a] -> [b] -> [c] -> [d].
fn composable() -> impl Strategy<Value = (Op, Op, Op)> {
    (0usize..4, 0usize..4, 0usize..4, 0usize..4).prop_flat_map(|(a, b, c, d)| (op(a, b), op(b, c), op(c, d)))
}

/// A poset on up to `max` elements, given by the transitive closure of random
/// relations i < j.
fn poset(max: usize) -> impl Strategy<Value = FinCategory> {
    (1..=max).prop_flat_map(|n| {
        prop::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let mut rel = vec![vec![false; n]; n];
            let mut b = bits.into_iter();
            for i in 0..n {
                rel[i][i] = true;
                for j in i + 1..n {
                    rel[i][j] = b.next().unwrap();
                }
            }
            for k in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        if rel[i][k] && rel[k][j] {
                            rel[i][j] = true;
                        }
                    }
                }
            }
            FinCategory::poset((0..n).map(|i| format!("p{}", i)).collect(), |i, j| rel[i][j])
        })
    })
}

fn with_marks(max: usize) -> impl Strategy<Value = (FinCategory, Vec<bool>, Vec<bool>)> {
    poset(max).prop_flat_map(|c| {
        let n = c.n_mor();
        (Just(c), prop::collection::vec(any::<bool>(), n), prop::collection::vec(any::<bool>(), n))
    })
}

fn iso(a: &FinSimplicialSet, b: &FinSimplicialSet) -> bool {
    let n = a.vertices().len();
    n == b.vertices().len() && find_isomorphism(a, b, &(0..n).collect::<Vec<_>>()).is_some()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn op_composition_is_associative((f, g, h) in composable()) {
        prop_assert_eq!(h.compose(&g).compose(&f), h.compose(&g.compose(&f)));
        prop_assert_eq!(Op::id(g.tgt_dim()).compose(&g), g.clone());
        prop_assert_eq!(g.compose(&Op::id(g.src_dim())), g);
    }

    #[test]
    fn op_factors_uniquely(f in (0usize..5, 0usize..5).prop_flat_map(|(m, n)| op(m, n))) {
        let (epi, mono) = f.factor();
        prop_assert!(epi.is_surjective());
        prop_assert!(mono.is_injective());
        prop_assert_eq!(mono.compose(&epi), f.clone());
        prop_assert_eq!(Op::epi_from_collapsed(f.src_dim(), &f.collapsed()), epi);
        prop_assert_eq!(mono.vals.len() + f.collapsed().len(), f.vals.len());
    }

    #[test]
    fn operators_act_on_standard_simplices(
        (f, g) in (0usize..4, 0usize..4, 0usize..4).prop_flat_map(|(a, b, c)| (op(a, b), op(b, c)))
    ) {
        let n = g.tgt_dim();
        let s = FinSimplicialSet::standard(n);
        let top = Simplex::nd(s.cells_of_dim(n)[0], n);
        let x = s.apply(&top, &g);
        let seq: Vec<usize> = g.vals.iter().map(|&v| v as usize).collect();
        prop_assert_eq!(s.vertex_seq(&x), seq);
        prop_assert_eq!(s.apply(&x, &f), s.apply(&top, &g.compose(&f)));
    }

    #[test]
    fn simplicial_identities_on_horns(m in 2usize..5, i in 0usize..5, f in (0usize..4).prop_flat_map(|d| op(d, d + 1))) {
        let i = i % (m + 1);
        let h = FinSimplicialSet::horn(m, &[i]).unwrap();
        prop_assert!(h.check().is_ok());
        let d = f.tgt_dim();
        prop_assume!(d < m);
        for &c in h.cells_of_dim(d) {
            let x = Simplex::nd(c, d);
            let y = h.apply(&x, &f);
            if y.dim() >= 2 {
                for a in 0..=y.dim() {
                    for b in a..y.dim() {
                        prop_assert_eq!(h.face(&h.face(&y, b + 1), a), h.face(&h.face(&y, a), b));
                    }
                }
            }
        }
    }

    #[test]
    fn posets_satisfy_the_category_laws(c in poset(5)) {
        prop_assert!(c.check_laws().is_empty());
        let deg = synthesize_degree(&c).unwrap();
        prop_assert!(check_degree(&c, &deg).is_ok());
    }

    #[test]
    fn two_out_of_six_closure_is_idempotent_and_monotone((c, g1, g2) in with_marks(5)) {
        let w1 = two_out_of_six_closure(&c, &g1);
        prop_assert!(check_homotopical(&c, &w1).is_ok());
        prop_assert_eq!(two_out_of_six_closure(&c, &w1), w1.clone());
        let union: Vec<bool> = g1.iter().zip(&g2).map(|(a, b)| *a || *b).collect();
        let wu = two_out_of_six_closure(&c, &union);
        prop_assert!(w1.iter().zip(&wu).all(|(a, b)| !a || *b));
        prop_assert!(g1.iter().zip(&w1).all(|(a, b)| !a || *b));
    }

    #[test]
    fn category_files_round_trip((c, g, cof) in with_marks(4)) {
        let weq = two_out_of_six_closure(&c, &g);
        let file = to_file(&c, Some(&weq), Some(&cof), None);
        let text = canonical_json(&file);
        let back: CategoryFile = serde_json::from_str(&text).unwrap();
        let c2 = validate_category(&back).unwrap();
        prop_assert_eq!(canonical_json(&to_file(&c2, Some(&weq), Some(&cof), None)), text);
    }

    #[test]
    fn nerves_of_posets_are_quasicategories(c in poset(4)) {
        let n = FinSimplicialSet::nerve(&c, 3);
        prop_assert!(n.check().is_ok());
        let r = is_quasicategory(&n, 3).unwrap();
        prop_assert!(r.holds);
        prop_assert!(r.unique);
    }

    #[test]
    fn join_is_unital_and_associative(a in 0usize..3, b in 0usize..3, c in 0usize..2) {
        let (x, y, z) = (FinSimplicialSet::standard(a), FinSimplicialSet::standard(b), FinSimplicialSet::standard(c));
        let empty = FinSimplicialSet::empty();
        prop_assert!(iso(&FinSimplicialSet::join(&empty, &x), &x));
        prop_assert!(iso(&FinSimplicialSet::join(&x, &empty), &x));
        prop_assert!(iso(&FinSimplicialSet::join(&x, &y), &FinSimplicialSet::standard(a + b + 1)));
        let l = FinSimplicialSet::join(&FinSimplicialSet::join(&x, &y), &z);
        let r = FinSimplicialSet::join(&x, &FinSimplicialSet::join(&y, &z));
        prop_assert!(iso(&l, &r));
    }

    #[test]
    fn b_set_counts_odd_fibered_maps(k in 0usize..5, m in 0usize..4) {
        prop_assume!(2 * k >= m);
        let oracle = Op::all_monotone(2 * k - m, m)
            .into_iter()
            .filter(|f| (0..=m).all(|v| f.vals.iter().filter(|&&x| x as usize == v).count() % 2 == 1))
            .count();
        prop_assert_eq!(b_set(k, m).unwrap().len(), oracle);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn filtrations_are_nested_sieves(m in 0usize..3, k in 0usize..2) {
        let s = FinSimplicialSet::standard(m);
        let small = FiltCategory::build(&s, k, &WeqPolicy::Generated).unwrap();
        let big = FiltCategory::build(&s, k + 1, &WeqPolicy::Generated).unwrap();
        prop_assert!(small.degree_reflects_identities());
        prop_assert!(big.degree_reflects_identities());
        prop_assert!(small.inclusion_into(&big).is_some());
    }

    #[test]
    fn reedy_colimits_agree_with_search(index in poset(3), all_weq in any::<bool>(), pick in any::<prop::sample::Index>()) {
        let c = corpus::lattice(&["a", "b"], all_weq);
        let w: Vec<bool> = (0..index.n_mor()).map(|f| index.is_identity(f)).collect();
        let idx = DirectIndex::from_category(index, w).unwrap();
        let diagrams = enumerate_diagrams(&idx, &c, 100_000).unwrap();
        prop_assume!(!diagrams.is_empty());
        let x = &diagrams[pick.index(diagrams.len())];
        let cocone = reedy_colimit_checked(&idx, &c, x, &vec![true; idx.n_obj()]).unwrap();
        let direct = colimit(&idx.cat, &c.cat, x).unwrap();
        prop_assert_eq!(cocone.apex, direct.apex);
    }

    #[test]
    fn chain_localizations_agree_when_axioms_hold(n in 1usize..4, gens in prop::collection::vec(any::<bool>(), 10)) {
        let cat = FinCategory::chain(n);
        let g: Vec<bool> = (0..cat.n_mor()).map(|f| gens[f % gens.len()]).collect();
        let weq = two_out_of_six_closure(&cat, &g);
        let m = cat.n_mor();
        let c = CofCategory::new(cat, weq, vec![true; m]);
        prop_assume!(check_axioms(&c).all_pass());
        let ho = homotopy_category(&c).unwrap();
        let oracle = oracle_localization(&c.cat, &c.weq, None).unwrap();
        prop_assert!(compare(&ho, &oracle).isomorphic);
    }
}

#[test]
fn terminal_frames_have_one_simplex_per_dimension() {
    for k in 0..3 {
        let nf = Nf::build(&corpus::terminal(), k, 3, 10_000).unwrap();
        for m in 0..=3 {
            assert_eq!(nf.frames[m].len(), 1, "level {} dimension {}", k, m);
        }
    }
}
