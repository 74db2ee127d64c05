use alloc::vec;

use super::*;
use crate::surface::parse_presentation;

fn auto(text: &str) -> EndsAutomaton {
    ends_automaton(&parse_presentation(text).unwrap())
}

fn loch() -> EndsAutomaton {
    auto("surface loch_ness { root = H(root) }")
}

fn cantor() -> EndsAutomaton {
    auto("surface cantor { root = P(root,root) }")
}

fn flute() -> EndsAutomaton {
    auto("surface flute { root = P(root,punc); punc = A(punc) }")
}

/// Number of length-`k` root paths, by direct expansion.
fn cylinders(a: &EndsAutomaton, k: usize) -> usize {
    let mut level = vec![a.root];
    for _ in 0..k {
        level = level.iter().flat_map(|&s| a.children[s].iter().copied()).collect();
    }
    level.len()
}

/// A depth-`k` cylinder is isolated when, `extra` levels further down, it
/// still contains a single path.
fn isolated_cylinders(a: &EndsAutomaton, k: usize, extra: usize) -> usize {
    let mut level = vec![a.root];
    for _ in 0..k {
        level = level.iter().flat_map(|&s| a.children[s].iter().copied()).collect();
    }
    level
        .into_iter()
        .filter(|&s| {
            let mut l = vec![s];
            for _ in 0..extra {
                l = l.iter().flat_map(|&t| a.children[t].iter().copied()).collect();
            }
            l.len() == 1
        })
        .count()
}

#[test]
fn loch_ness_has_one_nonplanar_end() {
    let a = loch();
    assert_eq!(a.states.len(), 1);
    assert_eq!(a.nonplanar_states(), vec![0]);
    assert_eq!(a.cardinality(), Cardinality::Finite(1));
    let r = a.cb_report(Marking::All, DEFAULT_RANK_CUTOFF).unwrap();
    assert_eq!((r.rank, r.degree), (CbRank::Exact(1), Extended::ONE));
    assert_eq!(a.nonplanar_profile().cardinality(), Cardinality::Finite(1));
    assert_eq!(a.to_end_expr().unwrap(), EndExpr::Pt(Planarity::Nonplanar));
}

#[test]
fn cantor_is_perfect_and_planar() {
    let a = cantor();
    assert_eq!(a.cardinality(), Cardinality::Uncountable);
    let r = a.cb_report(Marking::All, DEFAULT_RANK_CUTOFF).unwrap();
    assert!(r.perfect_kernel);
    assert_eq!(r.rank, CbRank::Exact(0));
    assert!(a.nonplanar_profile().is_empty());
    assert_eq!(a.to_end_expr().unwrap(), EndExpr::Cantor(Planarity::Planar));
    assert_eq!(cylinders(&a, 6), 64);
}

#[test]
fn flute_accumulates_once() {
    let a = flute();
    assert_eq!(a.cardinality(), Cardinality::CountablyInfinite);
    let r = a.cb_report(Marking::All, DEFAULT_RANK_CUTOFF).unwrap();
    assert_eq!((r.rank, r.degree, r.perfect_kernel), (CbRank::Exact(2), Extended::ONE, false));
    assert_eq!(
        a.to_end_expr().unwrap(),
        EndExpr::seq(EndExpr::Pt(Planarity::Planar), Planarity::Planar)
    );
    // Cylinders grow linearly and all but one are isolated.
    for k in 1..=6 {
        assert_eq!(cylinders(&a, k), k + 1);
        assert_eq!(isolated_cylinders(&a, k, 6), k);
    }
}

#[test]
fn ends_count_examples() {
    let s = parse_presentation("surface s finite S(g=3,b=0,p=1)").unwrap();
    assert_eq!(ends_count(&s), Cardinality::Finite(1));
    assert_eq!(ends_count(&parse_presentation("surface c { root = P(root,root) }").unwrap()), Cardinality::Uncountable);
}

#[test]
fn handle_before_puncture_is_planar_but_limit_is_not() {
    let a = auto("surface x { root = P(root, y); y = H(z); z = A(z) }");
    let p = a.profile();
    assert_eq!(p.marked_ranks.get(&1), Some(&Extended::ONE));
    assert_eq!(p.marked_ranks.get(&0), None);
    assert_eq!(
        a.to_end_expr().unwrap(),
        EndExpr::seq(EndExpr::Pt(Planarity::Planar), Planarity::Nonplanar)
    );
}

#[test]
fn rank_cutoff() {
    // Nested sequences of depth 3 give rank 4.
    let a = auto("surface n { a = P(a, b); b = P(b, c); c = P(c, d); d = A(d) }");
    assert_eq!(a.cb_report(Marking::All, 16).unwrap().rank, CbRank::Exact(4));
    match a.cb_report(Marking::All, 2) {
        Err(EndsError::RankCutoffExceeded(r)) => assert_eq!(r.rank, CbRank::AtLeast(2)),
        other => panic!("{other:?}"),
    }
}

#[test]
fn isolated_planar_end() {
    let f = parse_presentation("surface flute { root = P(root,punc); punc = A(punc) }").unwrap();
    assert_eq!(find_isolated_planar_end(&f).as_deref(), Some("punc"));
    let l = parse_presentation("surface l { root = H(root) }").unwrap();
    assert_eq!(find_isolated_planar_end(&l), None);
    let s = parse_presentation("surface s finite S(g=0,b=0,p=3)").unwrap();
    assert!(find_isolated_planar_end(&s).is_some());
}

#[test]
fn pair_examples() {
    assert!(matches!(pair_homeomorphic(&loch(), &loch()), PairVerdict::Yes(_)));
    assert_eq!(pair_homeomorphic(&loch(), &flute()), PairVerdict::No(Invariant::Cardinality));
    let bloom = auto("surface b { root = H(x); x = P(root, root) }");
    assert!(matches!(pair_homeomorphic(&cantor(), &bloom), PairVerdict::No(_)));
}

#[test]
fn branching_with_exits_folds() {
    let a = auto("surface a { r = P(x, r); x = P(r, t); t = A(t) }");
    assert_eq!(a.to_end_expr(), Err(EndsError::NotConvertible));
    assert_eq!(pair_homeomorphic(&a, &a), PairVerdict::Yes(Fragment::ClassFold));
    let prefixed = auto("surface c { q = P(r, x); r = P(x, r); x = P(r, t); t = A(t) }");
    assert_eq!(pair_homeomorphic(&a, &prefixed), PairVerdict::Yes(Fragment::ClassFold));
}

fn profiles_agree(a: &EndsAutomaton) {
    if let Ok(e) = a.to_end_expr() {
        assert_eq!(e.profile(), a.profile(), "{e}");
        assert_eq!(e.nonplanar_profile(), a.nonplanar_profile(), "{e}");
    }
}

#[test]
fn expression_agreement_examples() {
    for a in [loch(), cantor(), flute()] {
        profiles_agree(&a);
    }
}

mod props {
    use super::*;
    use crate::testkit;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    proptest! {
        #[test]
        fn agreement_on_random_presentations(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let sys = testkit::random_rules(&mut rng, 5);
            profiles_agree(&EndsAutomaton::from_rules(&sys));
        }

        #[test]
        fn reflexive_and_symmetric(s1 in any::<u64>(), s2 in any::<u64>()) {
            let a = EndsAutomaton::from_rules(&testkit::random_rules(&mut ChaCha8Rng::seed_from_u64(s1), 5));
            let b = EndsAutomaton::from_rules(&testkit::random_rules(&mut ChaCha8Rng::seed_from_u64(s2), 5));
            prop_assert!(matches!(pair_homeomorphic(&a, &a), PairVerdict::Yes(_)));
            let ab = pair_homeomorphic(&a, &b);
            let ba = pair_homeomorphic(&b, &a);
            prop_assert_eq!(core::mem::discriminant(&ab), core::mem::discriminant(&ba));
        }

        #[test]
        fn expression_profiles_match_compiled(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let e = testkit::random_end_expr(&mut rng, 3, true);
            let n = e.clone().normalize();
            prop_assert_eq!(e.profile(), n.profile());
            prop_assert_eq!(e.nonplanar_profile(), n.nonplanar_profile());
        }

        #[test]
        fn nonplanar_set_is_closed(seed in any::<u64>()) {
            // A path leaving the marked states can never return: the
            // complement of the non-planar ends is a union of cylinders.
            let sys = testkit::random_rules(&mut ChaCha8Rng::seed_from_u64(seed), 5);
            let a = EndsAutomaton::from_rules(&sys);
            for (s, cs) in a.children.iter().enumerate() {
                for &c in cs {
                    prop_assert!(a.marked[s] || !a.marked[c]);
                }
            }
        }

        #[test]
        fn annulus_insertion_keeps_yes(seed in any::<u64>(), pick in any::<usize>()) {
            let sys = testkit::random_rules(&mut ChaCha8Rng::seed_from_u64(seed), 5);
            let s = pick % sys.len();
            let slot = (pick / 7) % sys.rules()[s].children.len();
            let spliced = sys.splice_annulus(s, slot);
            let v = pair_homeomorphic(&EndsAutomaton::from_rules(&sys), &EndsAutomaton::from_rules(&spliced));
            prop_assert!(matches!(v, PairVerdict::Yes(_)), "{:?}", v);
        }
    }

    #[test]
    fn finite_genus_infinite_type_has_infinitely_many_ends() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let sys = testkit::random_rules(&mut rng, 5);
            if !sys.is_finite_type() && sys.genus().is_finite() {
                let c = EndsAutomaton::from_rules(&sys).cardinality();
                assert!(!matches!(c, Cardinality::Finite(_)), "{sys:?}");
            }
        }
    }
}
