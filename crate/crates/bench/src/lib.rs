//! Fixtures shared by the benchmarks, loaded from the bundled corpus.

use tva_core::algebra::{parse_algebra, TruthValueAlgebra};
use tva_core::logic::{parse_theory, Theory};
use tva_core::proofterms::{parse_proof, Proof};

pub const T1: &str = include_str!("../../../corpus/algebras/t1.alg");
pub const T2: &str = include_str!("../../../corpus/algebras/t2.alg");
pub const BOOL: &str = include_str!("../../../corpus/algebras/bool.alg");
pub const P_IMP_PQ: &str = include_str!("../../../corpus/theories/p_imp_pq.thy");
pub const P_IMP_BOT_IMP_P: &str = include_str!("../../../corpus/theories/p_imp_bot_imp_p.thy");

pub fn algebra(text: &str) -> TruthValueAlgebra {
    parse_algebra(text).expect("bundled algebra").algebra
}

pub fn theory(text: &str) -> Theory {
    parse_theory(text).expect("bundled theory")
}

/// `(lam f:P=>P. f (f h)) (lam a:P. a)` nested `depth` times in the
/// argument position; normalizing it fans out into many reduction paths.
pub fn twice_tower(depth: usize) -> Proof {
    let th = theory("pred P\n");
    let mut arg = "lam a:P. a".to_string();
    for _ in 0..depth {
        arg = format!("(lam f:P => P. lam b:P. f (f b)) ({arg})");
    }
    parse_proof(&format!("({arg}) h"), &th.signature).expect("fixture parses")
}
