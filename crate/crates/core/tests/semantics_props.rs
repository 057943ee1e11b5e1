mod common;

use common::gen_algebra::random_valid;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use tva_core::algebra::{check_morphism, quotient_by_equiv, MorphismKind, TruthValueAlgebra};
use tva_core::logic::{parse_theory, Formula, Signature, Term, Theory, Var};
use tva_core::semantics::{check_model, denote, denote_term, Assignment, BStructure};

const SIG: &str = "sort s
fun c : -> s
fun f : s -> s
fun g : s s -> s
pred P : s
pred R : s s
";

fn signature() -> Signature {
    parse_theory(SIG).unwrap().signature
}

fn var(name: &str) -> Term {
    Term::var(name, "s")
}

fn random_term(rng: &mut impl Rng, vars: &[&str], depth: usize) -> Term {
    if depth == 0 || rng.gen_bool(0.4) {
        return if vars.is_empty() || rng.gen_bool(0.3) {
            Term::constant("c")
        } else {
            var(vars[rng.gen_range(0..vars.len())])
        };
    }
    if rng.gen_bool(0.5) {
        Term::app("f", vec![random_term(rng, vars, depth - 1)])
    } else {
        let a = random_term(rng, vars, depth - 1);
        Term::app("g", vec![a, random_term(rng, vars, depth - 1)])
    }
}

/// A formula over the signature whose free variables are among `vars`.
/// Bound variables are named `y` and `z` so that substituting a term
/// mentioning them exercises renaming.
fn random_formula(rng: &mut impl Rng, vars: &mut Vec<&'static str>, depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.25) {
        return match rng.gen_range(0..4) {
            0 => Formula::Top,
            1 => Formula::Bot,
            2 => Formula::atom("P", vec![random_term(rng, vars, 2)]),
            _ => {
                let a = random_term(rng, vars, 1);
                Formula::atom("R", vec![a, random_term(rng, vars, 1)])
            }
        };
    }
    match rng.gen_range(0..5) {
        0 | 1 | 2 => {
            let a = random_formula(rng, vars, depth - 1);
            let b = random_formula(rng, vars, depth - 1);
            match rng.gen_range(0..3) {
                0 => Formula::imp(a, b),
                1 => Formula::and(a, b),
                _ => Formula::or(a, b),
            }
        }
        k => {
            let name = if rng.gen_bool(0.5) { "y" } else { "z" };
            vars.push(name);
            let body = random_formula(rng, vars, depth - 1);
            vars.pop();
            let v = Var::new(name, "s");
            if k == 3 {
                Formula::forall(v, body)
            } else {
                Formula::exists(v, body)
            }
        }
    }
}

fn random_structure(rng: &mut impl Rng, alg: &TruthValueAlgebra, n: usize) -> BStructure {
    let sig = signature();
    let domains = [("s".to_string(), n)].into_iter().collect();
    let mut st = BStructure::constant(&sig, alg, &domains, 0).unwrap();
    for t in st.funs.iter_mut() {
        t.iter_mut().for_each(|e| *e = rng.gen_range(0..n));
    }
    for t in st.preds.iter_mut() {
        t.iter_mut().for_each(|v| *v = rng.gen_range(0..alg.size()));
    }
    st
}

fn env(pairs: &[(&str, usize)]) -> Assignment<usize> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn denotation_commutes_with_substitution(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let alg = random_valid(&mut rng);
        let n = rng.gen_range(1..=3);
        let st = random_structure(&mut rng, &alg, n);
        let f = random_formula(&mut rng, &mut vec!["x", "w"], 3);
        let t = random_term(&mut rng, &["y", "w"], 2);
        let phi = env(&[("w", rng.gen_range(0..n)), ("x", rng.gen_range(0..n)), ("y", rng.gen_range(0..n))]);
        let substituted = f.instantiate(&Var::new("x", "s"), &t);
        let lhs = denote(&st, &substituted, &phi).unwrap();
        let mut psi = phi.clone();
        psi.insert("x".into(), denote_term(&st, &t, &phi).unwrap());
        let rhs = denote(&st, &f, &psi).unwrap();
        prop_assert_eq!(lhs.value(), rhs.value(), "{} [{} / x]", f, t);
    }

    #[test]
    fn alpha_equivalent_formulas_denote_alike(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let alg = random_valid(&mut rng);
        let st = random_structure(&mut rng, &alg, 2);
        let f = random_formula(&mut rng, &mut vec!["x"], 3);
        let phi = env(&[("x", 1)]);
        let a = denote(&st, &f, &phi).unwrap();
        let b = denote(&st, &f.canonical(), &phi).unwrap();
        prop_assert_eq!(a.value(), b.value());
    }

    #[test]
    fn morphisms_transport_denotations(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let alg = random_valid(&mut rng);
        let (q, m) = quotient_by_equiv(&alg).unwrap();
        prop_assert!(check_morphism(&m, MorphismKind::TruthValues).passed());
        let st = random_structure(&mut rng, &alg, 2);
        let image = st.map_values(&q, |v| m.apply(v));
        let f = random_formula(&mut rng, &mut vec![], 3);
        let a = denote(&st, &f, &Assignment::new()).unwrap().value().unwrap();
        let b = denote(&image, &f, &Assignment::new()).unwrap().value().unwrap();
        prop_assert_eq!(m.apply(a), b, "{}", f);
    }

    #[test]
    fn morphisms_transport_models(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let alg = random_valid(&mut rng);
        let (q, m) = quotient_by_equiv(&alg).unwrap();
        let th = Theory {
            signature: signature(),
            rules: parse_theory(&format!("{SIG}rule P(f(x)) --> R(x, x) => P(x)\n"))
                .unwrap()
                .rules,
            ..Theory::default()
        };
        let st = random_structure(&mut rng, &alg, 2);
        if check_model(&th, &st).unwrap().passed() {
            let image = st.map_values(&q, |v| m.apply(v));
            prop_assert!(check_model(&th, &image).unwrap().passed());
        }
    }
}
