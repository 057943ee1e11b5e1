//! End-to-end acceptance run: one PASS/FAIL line per criterion, each with
//! its wall-clock time. Runs the `tva` binary on the bundled corpus and
//! backs every verdict with an independent check.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use common::gen_algebra::random_algebra;
use common::gen_proof::{random_proof, theory as proof_theory};
use common::oracle::Oracle;
use common::{corpus_dir, read_corpus};
use rand::rngs::StdRng;
use rand::SeedableRng;
use serde_json::Value;
use std::process::Command;
use std::time::{Duration, Instant};
use tva_core::algebra::{
    boolean, check_complete, check_ordered, check_pseudo_heyting, check_tva, derive_preorder,
    find_isomorphism, is_heyting, parse_algebra, quotient_by_equiv, OrderSpec, Relation,
    TruthValueAlgebra,
};
use tva_core::logic::{parse_theory, Theory};
use tva_core::proofterms::{
    check_proof, is_neutral, reduce_step, sn_status, Proof, ReductionOutcome,
};
use tva_core::semantics::parse_structure;

const LIMIT: Duration = Duration::from_secs(10);

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

struct Run {
    code: i32,
    json: Value,
}

fn path(rel: &str) -> String {
    corpus_dir().join(rel).display().to_string()
}

fn tva(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_tva"))
        .args(["--format", "structured"])
        .args(args)
        .output()
        .expect("tva runs");
    let json = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    Run {
        code: out.status.code().unwrap_or(-1),
        json,
    }
}

fn algebra(rel: &str) -> TruthValueAlgebra {
    parse_algebra(&read_corpus(rel)).expect("corpus algebra").algebra
}

fn theory(rel: &str) -> Theory {
    parse_theory(&read_corpus(rel)).expect("corpus theory")
}

fn passes(v: &Value) -> bool {
    v["verdict"] == "pass"
}

fn c1() -> Outcome {
    let r = tva(&["check-algebra", &path("algebras/t1.alg")]);
    ensure!(r.code == 0, "exit code {}", r.code);
    let res = &r.json["result"];
    ensure!(passes(&res["tva"]), "conditions fail: {}", res["tva"]);
    ensure!(res["heyting"]["heyting"] == false, "reported Heyting");
    ensure!(
        res["heyting"]["witness"] == serde_json::json!(["I", "1"]),
        "witness {}",
        res["heyting"]["witness"]
    );
    let le = derive_preorder(&algebra("algebras/t1.alg"));
    ensure!(le.leq(1, 2) && le.leq(2, 1), "I and 1 not equivalent");
    Ok("T1 passes all conditions, not Heyting, witness (I, 1)".into())
}

/// Every partial order on `n` elements, by filtering all relations.
fn all_partial_orders(n: usize) -> Vec<Relation> {
    let mut out = Vec::new();
    for bits in 0u32..1 << (n * n) {
        let rel = Relation::from_fn(n, |a, b| bits >> (a * n + b) & 1 == 1);
        let refl = (0..n).all(|a| rel.leq(a, a));
        let anti = (0..n).all(|a| (0..n).all(|b| a == b || !(rel.leq(a, b) && rel.leq(b, a))));
        let trans = (0..n).all(|a| {
            (0..n).all(|b| (0..n).all(|c| !(rel.leq(a, b) && rel.leq(b, c)) || rel.leq(a, c)))
        });
        if refl && anti && trans {
            out.push(rel);
        }
    }
    out
}

fn c2() -> Outcome {
    let r = tva(&["check-algebra", &path("algebras/t2.alg")]);
    ensure!(r.code == 0 && passes(&r.json["result"]["tva"]), "T2 fails its check");
    let r = tva(&["find-order", &path("algebras/t2.alg")]);
    ensure!(r.code == 1, "find-order T2 exit code {}", r.code);
    ensure!(r.json["result"]["order"].is_null(), "T2 got an order");
    let t2 = algebra("algebras/t2.alg");
    let orders = all_partial_orders(3);
    ensure!(orders.len() == 19, "{} partial orders on 3 elements", orders.len());
    let good = orders
        .into_iter()
        .map(OrderSpec::new)
        .filter(|o| check_ordered(&t2, o).passed() && check_complete(&t2, o).0.passed())
        .count();
    ensure!(good == 0, "brute force found {good} orders for T2");
    let r = tva(&["find-order", &path("algebras/t1.alg")]);
    ensure!(r.code == 0, "find-order T1 exit code {}", r.code);
    let pairs = r.json["result"]["order"].as_array().cloned().unwrap_or_default();
    let has = |a: &str, b: &str| pairs.iter().any(|p| p == &serde_json::json!([a, b]));
    ensure!(has("0", "I") && has("I", "1"), "T1 order {pairs:?}");
    Ok("none of the 19 partial orders on 3 elements fits T2; T1 has 0 <= I <= 1".into())
}

fn c3() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let out = dir.path().display().to_string();
    let r = tva(&["--out", &out, "complete", &path("algebras/t2.alg")]);
    ensure!(r.code == 0, "exit code {}", r.code);
    let res = &r.json["result"];
    ensure!(res["size"] == 2, "size {}", res["size"]);
    ensure!(res["isomorphicToBool"] == true, "not isomorphic to bool");
    ensure!(res["embedding"]["injective"] == false, "embedding is injective");
    for k in ["tva", "ordered", "complete", "adjunction", "closed"] {
        ensure!(passes(&res["checks"][k]), "check {k} fails");
    }
    ensure!(res["checks"]["heyting"] == true, "not Heyting");
    let text = std::fs::read_to_string(dir.path().join("t2_completed.alg")).map_err(|e| e.to_string())?;
    let doc = parse_algebra(&text).map_err(|e| e.to_string())?;
    let c = &doc.algebra;
    ensure!(check_tva(c).passed() && is_heyting(c).is_heyting(), "written algebra fails");
    let ord = doc.order.as_ref().ok_or("written algebra has no order")?;
    ensure!(check_ordered(c, ord).passed() && check_complete(c, ord).0.passed(), "order fails");
    ensure!(find_isomorphism(c, &boolean()).is_some(), "written algebra is not bool");
    Ok("2 elements, isomorphic to {0,1}, embedding not injective, all checks pass".into())
}

fn pred_values(model: &Value, pred: &str) -> Vec<String> {
    model["predicates"][pred]
        .as_array()
        .map(|es| es.iter().map(|e| e["value"].as_str().unwrap_or("").to_string()).collect())
        .unwrap_or_default()
}

fn c4() -> Outcome {
    let th = path("theories/p_imp_pq.thy");
    let r = tva(&["find-model", &th, &path("algebras/bool.alg")]);
    ensure!(r.code == 0, "bool exit code {}", r.code);
    let m = &r.json["result"]["model"];
    ensure!(
        pred_values(m, "P") == ["1"] && pred_values(m, "Q") == ["1"],
        "bool model {m}"
    );
    let r = tva(&["find-model", &th, &path("algebras/t1.alg")]);
    ensure!(r.code == 1, "T1 exit code {}", r.code);
    ensure!(r.json["result"]["examined"] == 9, "examined {}", r.json["result"]["examined"]);
    Ok("bool: P = Q = 1; T1: none after all 9 assignments".into())
}

fn c5() -> Outcome {
    let th_path = path("theories/p_imp_qr.thy");
    let th = theory("theories/p_imp_qr.thy");
    for (s, a) in [
        ("bool", "bool"),
        ("t1", "t1"),
        ("t2_completed", "t2_completed"),
    ] {
        let st_rel = format!("structures/p_imp_qr_{s}.str");
        let r = tva(&["check-model", &th_path, &path(&st_rel)]);
        ensure!(r.code == 0, "{s}: exit code {}", r.code);
        let alg = algebra(&format!("algebras/{a}.alg"));
        let st = parse_structure(&read_corpus(&st_rel), &th.signature, &alg)
            .map_err(|e| e.to_string())?;
        let top = alg.top();
        ensure!(
            st.pred_value("P", &[]) == Some(alg.imp(top, top))
                && st.pred_value("Q", &[]) == Some(top)
                && st.pred_value("R", &[]) == Some(top),
            "{s}: structure is not P = top => top, Q = R = top"
        );
    }
    Ok("passes over bool, T1 and the completion of T2".into())
}

fn c6() -> Outcome {
    let th = path("theories/p_imp_bot_imp_p.thy");
    let r = tva(&["fixpoint-model", &th, &path("algebras/t1.alg")]);
    ensure!(r.code == 0, "exit code {}", r.code);
    let res = &r.json["result"];
    let iterations = res["iterations"].as_u64().unwrap_or(u64::MAX);
    ensure!(iterations <= 3, "{iterations} iterations");
    ensure!(passes(&res["report"]), "fixed point is not a model");
    let t1 = algebra("algebras/t1.alg");
    let p = pred_values(&res["model"], "P");
    let v = p.first().and_then(|n| t1.index_of(n)).ok_or("no value for P")?;
    ensure!(t1.imp(t1.bot(), v) == v, "P is not a fixed point of bot => _");
    let r = tva(&["find-model", &th, &path("algebras/t2.alg")]);
    ensure!(r.code == 1, "T2 exit code {}", r.code);
    Ok(format!(
        "T1 fixed point P = {} after {iterations} iterations; no T2 model",
        t1.name(v)
    ))
}

fn c7() -> Outcome {
    let mut notes = Vec::new();
    for a in ["bool", "t1"] {
        let r = tva(&["stt-model", "--depth", "2", &path(&format!("algebras/{a}.alg"))]);
        ensure!(r.code == 0, "{a}: exit code {}", r.code);
        let schemas = r.json["result"]["schemas"].as_array().cloned().unwrap_or_default();
        ensure!(schemas.len() == 9, "{a}: {} schemas", schemas.len());
        for s in &schemas {
            ensure!(s["failures"] == 0, "{a}: schema {} fails", s["schema"]);
        }
        let skipped = r.json["result"]["skipped"].as_array().map_or(0, Vec::len);
        notes.push(format!("{a} ({skipped} skipped over the domain cap)"));
    }
    Ok(format!("all 9 schemas hold on {}", notes.join(", ")))
}

fn c8() -> Outcome {
    let th = path("theories/p_imp_pq.thy");
    let prf = path("proofs/loopproof.prf");
    let r = tva(&["normalize-proof", &th, &prf]);
    ensure!(r.code == 1, "normalize-proof exit code {}", r.code);
    let res = &r.json["result"];
    ensure!(res["status"] == "Loop", "status {}", res["status"]);
    ensure!(res["cycleVerified"] == true, "cycle not verified");
    let r = tva(&["check-proof", &th, &prf]);
    ensure!(r.code == 0 && r.json["result"]["check"]["verdict"] == "valid", "check-proof fails");

    let th = proof_theory();
    let mut rng = StdRng::seed_from_u64(8);
    let (mut total, mut with_redex) = (0, 0);
    let normal = |p: &Proof| matches!(sn_status(p, 20_000), ReductionOutcome::Normal { .. });
    for _ in 0..500 {
        let (s, p) = random_proof(&mut rng, 4);
        ensure!(check_proof(&th, &s, &p, 2_000).map_err(|e| e.to_string())?.is_valid(), "{p} is ill-typed");
        ensure!(normal(&p), "{p} is not Normal");
        let reducts = reduce_step(&p);
        for q in &reducts {
            let v = check_proof(&th, &s, q, 2_000).map_err(|e| e.to_string())?;
            ensure!(v.is_valid(), "subject reduction fails: {p} ~> {q}");
            ensure!(normal(q), "reduct {q} of {p} is not Normal");
        }
        if is_neutral(&p) && reducts.iter().all(normal) {
            ensure!(normal(&p), "neutral {p} with normalizing reducts is not Normal");
        }
        total += 1;
        with_redex += usize::from(!reducts.is_empty());
    }
    Ok(format!(
        "Loop verified, proof Valid; {total} generated proofs ({with_redex} with redexes) all Normal"
    ))
}

fn c9() -> Outcome {
    let mut rng = StdRng::seed_from_u64(9);
    let (mut pass, mut fail) = (0, 0);
    for _ in 0..200 {
        let alg = random_algebra(&mut rng);
        let tva = check_tva(&alg).passed();
        let ph = check_pseudo_heyting(&alg, &derive_preorder(&alg)).passed();
        ensure!(tva == ph, "views disagree on {:?}", alg.tables());
        if tva {
            let (q, _) = quotient_by_equiv(&alg).map_err(|e| e.to_string())?;
            ensure!(is_heyting(&q).is_heyting(), "quotient not Heyting: {:?}", alg.tables());
            pass += 1;
        } else {
            fail += 1;
        }
    }
    ensure!(pass > 0 && fail > 0, "one-sided sample");
    Ok(format!("200 algebras ({pass} pass, {fail} fail), views agree, quotients Heyting"))
}

fn c10() -> Outcome {
    let list = |dir: &str, ext: &str| -> Vec<String> {
        let mut v: Vec<String> = std::fs::read_dir(corpus_dir().join(dir))
            .expect("corpus directory")
            .filter_map(|e| e.ok())
            .map(|e| e.file_name().to_string_lossy().into_owned())
            .filter(|n| n.ends_with(ext))
            .collect();
        v.sort();
        v
    };
    let mut pairs = 0;
    for a in list("algebras", ".alg") {
        let alg = algebra(&format!("algebras/{a}"));
        if alg.size() > 3 {
            continue;
        }
        for t in list("theories", ".thy") {
            let th = theory(&format!("theories/{t}"));
            if th.signature.preds.len() > 2 {
                continue;
            }
            let (expected, seen) = Oracle::new(&th, &alg, &[]).first_model();
            let r = tva(&["find-model", &path(&format!("theories/{t}")), &path(&format!("algebras/{a}"))]);
            let found = match r.code {
                0 => true,
                1 => false,
                c => return Err(format!("{t} over {a}: exit code {c}")),
            };
            ensure!(found == expected.is_some(), "{t} over {a}: oracle disagrees");
            ensure!(r.json["result"]["examined"] == seen, "{t} over {a}: candidate counts differ");
            if let Some(m) = expected {
                for (i, name) in th.signature.preds.keys().enumerate() {
                    let names: Vec<String> = m.preds[i].iter().map(|&v| alg.name(v).to_string()).collect();
                    ensure!(pred_values(&r.json["result"]["model"], name) == names, "{t} over {a}: models differ");
                }
            }
            pairs += 1;
        }
    }
    Ok(format!("{pairs} theory/algebra pairs agree with brute force"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("T1 conditions and Heyting witness", c1),
        ("T2 has no complete order, T1 does", c2),
        ("completion of T2", c3),
        ("model search for P --> P => Q", c4),
        ("valued models of P --> Q => R", c5),
        ("fixed point model of P --> bot => P", c6),
        ("simple type theory model", c7),
        ("proof normalization", c8),
        ("random algebras, two views", c9),
        ("brute-force oracle", c10),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(d) if took > LIMIT => Err(format!("{d}, but took over {}s", LIMIT.as_secs())),
            o => o,
        };
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} ({} ms): {detail}", i + 1, took.as_millis()),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({} ms): {why}", i + 1, took.as_millis());
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} criteria failed");
        std::process::exit(1);
    }
}
