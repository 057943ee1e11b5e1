mod common;

use common::gen_algebra::{inflate, perturb, random_algebra, random_valid, Heyting};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;
use tva_core::algebra::{
    check_morphism, check_pseudo_heyting, check_tva, derive_preorder, is_heyting,
    quotient_by_equiv, MorphismKind,
};
use tva_core::completion::{complete_algebra, verify_completion};

#[test]
fn inflations_are_algebras() {
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..200 {
        let alg = random_valid(&mut rng);
        let report = check_tva(&alg);
        assert!(report.passed(), "{:?}\n{:?}", alg.tables(), report.violations());
    }
}

#[test]
fn inflating_a_lattice_with_itself_is_heyting() {
    let mut rng = StdRng::seed_from_u64(1);
    for k in 1..=4 {
        let alg = inflate(&mut rng, &Heyting::chain(k), k);
        assert!(check_tva(&alg).passed());
        assert!(is_heyting(&alg).is_heyting());
    }
    let square = inflate(&mut rng, &Heyting::square(), 4);
    assert!(is_heyting(&square).is_heyting());
}

#[test]
fn two_views_agree_on_random_algebras() {
    let mut rng = StdRng::seed_from_u64(2024);
    let (mut pass, mut fail) = (0, 0);
    for _ in 0..400 {
        let alg = random_algebra(&mut rng);
        let tva = check_tva(&alg).passed();
        let ph = check_pseudo_heyting(&alg, &derive_preorder(&alg)).passed();
        assert_eq!(tva, ph, "{:?}", alg.tables());
        if tva {
            pass += 1;
            let (q, m) = quotient_by_equiv(&alg).expect("algebras have quotients");
            assert!(is_heyting(&q).is_heyting());
            assert!(check_tva(&q).passed());
            assert!(check_morphism(&m, MorphismKind::TruthValues).passed());
        } else {
            fail += 1;
        }
    }
    assert!(pass >= 50 && fail >= 50, "pass {pass} fail {fail}");
}

#[test]
fn completions_of_random_algebras_verify() {
    let mut rng = StdRng::seed_from_u64(99);
    for _ in 0..60 {
        let alg = random_valid(&mut rng);
        let (c, e) = complete_algebra(&alg).expect("small carrier");
        let checks = verify_completion(&c, &e);
        assert!(checks.all_passed(), "{:?}\n{checks:?}", alg.tables());
    }
}

proptest! {
    #[test]
    fn derived_preorder_of_an_algebra_is_a_preorder(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let alg = random_valid(&mut rng);
        let le = derive_preorder(&alg);
        prop_assert!(le.non_reflexive_at().is_none());
        prop_assert!(le.non_transitive_at().is_none());
    }

    #[test]
    fn quotient_is_idempotent(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let alg = random_valid(&mut rng);
        let (q, _) = quotient_by_equiv(&alg).unwrap();
        let (qq, m) = quotient_by_equiv(&q).unwrap();
        prop_assert_eq!(qq.size(), q.size());
        prop_assert!(m.is_injective());
    }

    #[test]
    fn perturbation_keeps_the_views_in_step(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let base = random_valid(&mut rng);
        let alg = perturb(&mut rng, &base);
        let tva = check_tva(&alg).passed();
        let ph = check_pseudo_heyting(&alg, &derive_preorder(&alg)).passed();
        prop_assert_eq!(tva, ph);
    }
}
