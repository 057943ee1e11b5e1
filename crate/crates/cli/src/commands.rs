//! One function per subcommand. Each fills in a report; errors that escape
//! are structural (exit code 2).

use crate::report::{Report, Verdict};
use anyhow::{anyhow, bail, Context, Result};
use indexmap::IndexMap;
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use tva_core::algebra::{
    boolean, check_complete, check_ordered, check_tva, find_complete_order, find_isomorphism,
    is_heyting, parse_algebra, render_algebra, AlgebraDocument, HeytingVerdict, OrderSpec,
    TruthValueAlgebra, DEFAULT_ORDER_SEARCH_BOUND,
};
use tva_core::completion::{complete_algebra, verify_completion};
use tva_core::logic::{parse_theory, Theory};
use tva_core::proofterms::{
    check_proof, format_path, parse_proof_file, sn_status, verify_loop, ProofVerdict,
    ReductionOutcome,
};
use tva_core::semantics::stt::{build_stt_model, SttCaps};
use tva_core::semantics::{
    check_model, element_name, find_model, fixpoint_model, fixpoint_model_deterministic,
    parse_structure, probe_super_consistency, render_structure, structure_algebra_path,
    BStructure, LibraryAlgebra, ModelReport, ProbeOutcome, SemanticsError,
};

pub struct Settings {
    pub fuel: usize,
    pub bound: u64,
}

pub fn load_algebra(r: &mut Report, path: &Path) -> Result<AlgebraDocument> {
    let text = r.read(path)?;
    parse_algebra(&text).with_context(|| format!("in {}", path.display()))
}

pub fn load_theory(r: &mut Report, path: &Path) -> Result<Theory> {
    let text = r.read(path)?;
    parse_theory(&text).with_context(|| format!("in {}", path.display()))
}

fn order_text(alg: &TruthValueAlgebra, ord: &OrderSpec) -> String {
    let pairs = ord.relation().strict_pairs();
    if pairs.is_empty() {
        return "discrete".to_string();
    }
    pairs
        .iter()
        .map(|&(a, b)| format!("{} <= {}", alg.name(a), alg.name(b)))
        .collect::<Vec<_>>()
        .join(", ")
}

fn order_json(alg: &TruthValueAlgebra, ord: &OrderSpec) -> Value {
    let pairs: Vec<[&str; 2]> = ord
        .relation()
        .strict_pairs()
        .into_iter()
        .map(|(a, b)| [alg.name(a), alg.name(b)])
        .collect();
    json!(pairs)
}

pub fn structure_json(st: &BStructure) -> Value {
    let sig = &st.signature;
    let tuple = |sorts: &[String], pos: usize| -> Vec<String> {
        st.tuple_at(sorts, pos).into_iter().map(element_name).collect()
    };
    let mut funs = serde_json::Map::new();
    for (i, (f, decl)) in sig.funs.iter().enumerate() {
        let rows: Vec<Value> = st.funs[i]
            .iter()
            .enumerate()
            .map(|(pos, &v)| json!({"args": tuple(&decl.args, pos), "value": element_name(v)}))
            .collect();
        funs.insert(f.clone(), json!(rows));
    }
    let mut preds = serde_json::Map::new();
    for (i, (p, sorts)) in sig.preds.iter().enumerate() {
        let rows: Vec<Value> = st.preds[i]
            .iter()
            .enumerate()
            .map(|(pos, &v)| json!({"args": tuple(sorts, pos), "value": st.algebra.name(v)}))
            .collect();
        preds.insert(p.clone(), json!(rows));
    }
    let domains: serde_json::Map<String, Value> =
        st.domains.iter().map(|(s, n)| (s.clone(), json!(n))).collect();
    json!({"domains": domains, "functions": funs, "predicates": preds})
}

fn model_lines(r: &mut Report, report: &ModelReport) {
    for a in &report.axioms {
        let value = a.value.as_deref().unwrap_or("undefined");
        let status = if a.positive { "valid" } else { "not valid" };
        r.line(format!("  axiom {}: {value} ({status})", a.axiom));
    }
    for rc in &report.rules {
        r.line(format!(
            "  rule {}: {} instances, {} failing",
            rc.rule, rc.instances, rc.failures
        ));
    }
    if let Some(w) = &report.witness {
        let asg: Vec<String> = w.assignment.iter().map(|(k, v)| format!("{k}={v}")).collect();
        r.line(format!("  witness: {} [{}] {}", w.item, asg.join(", "), w.detail));
    }
}

pub fn check_algebra(r: &mut Report, path: &Path, find_order: bool) -> Result<()> {
    let doc = load_algebra(r, path)?;
    let alg = &doc.algebra;
    let tva = check_tva(alg);
    r.line(format!("truth values algebra: {tva}"));
    r.set("tva", &tva);
    let mut ok = tva.passed();
    match is_heyting(alg) {
        HeytingVerdict::Heyting => {
            r.line("Heyting");
            r.set("heyting", json!({"heyting": true}));
        }
        HeytingVerdict::NotHeyting(a, b) => {
            let (a, b) = (alg.name(a), alg.name(b));
            r.line(format!("not Heyting, witness ({a},{b}): {a} <= {b} and {b} <= {a}"));
            r.set("heyting", json!({"heyting": false, "witness": [a, b]}));
        }
    }
    r.line(format!("full: {}, trivial: {}", alg.is_full(), alg.is_trivial()));
    r.set("full", alg.is_full());
    r.set("trivial", alg.is_trivial());
    if let Some(ord) = &doc.order {
        let ordered = check_ordered(alg, ord);
        let (complete, _) = check_complete(alg, ord);
        r.line(format!("given order {}", order_text(alg, ord)));
        r.line(format!("  ordered: {ordered}"));
        r.line(format!("  complete: {complete}"));
        r.set("ordered", &ordered);
        r.set("complete", &complete);
        ok &= ordered.passed() && complete.passed();
    }
    if find_order {
        order_search(r, alg)?;
    }
    r.verdict = if ok { Verdict::Positive } else { Verdict::Negative };
    Ok(())
}

/// Runs the order search; returns whether an order was found.
fn order_search(r: &mut Report, alg: &TruthValueAlgebra) -> Result<bool> {
    match find_complete_order(alg, DEFAULT_ORDER_SEARCH_BOUND)? {
        Some(ord) => {
            r.line(format!("complete order: {}", order_text(alg, &ord)));
            r.set("order", order_json(alg, &ord));
            Ok(true)
        }
        None => {
            r.line(format!(
                "no complete order: none of the partial orders on {} elements makes the algebra ordered and complete",
                alg.size()
            ));
            r.set("order", Value::Null);
            Ok(false)
        }
    }
}

pub fn find_order(r: &mut Report, path: &Path) -> Result<()> {
    let doc = load_algebra(r, path)?;
    let found = order_search(r, &doc.algebra)?;
    r.verdict = if found { Verdict::Positive } else { Verdict::Negative };
    Ok(())
}

fn file_name(p: &Path) -> String {
    p.file_name()
        .map_or_else(|| p.display().to_string(), |n| n.to_string_lossy().into_owned())
}

pub fn complete(r: &mut Report, path: &Path, out_dir: Option<&Path>) -> Result<()> {
    let doc = load_algebra(r, path)?;
    let (c, emb) = complete_algebra(&doc.algebra)?;
    let checks = verify_completion(&c, &emb);
    let alg = &c.algebra;
    r.line(format!("completion with {} elements: {}", alg.size(), alg.names().join(", ")));
    r.line(format!("order: {}", order_text(alg, &c.order)));
    let pairs: Vec<String> = emb
        .named_pairs()
        .iter()
        .map(|(a, b)| format!("{a} -> {b}"))
        .collect();
    let injective = emb.is_injective();
    r.line(format!(
        "embedding: {} ({})",
        pairs.join(", "),
        if injective { "injective" } else { "non-injective" }
    ));
    let iso_bool = find_isomorphism(alg, &boolean()).is_some();
    r.line(format!("isomorphic to the two-element Boolean algebra: {iso_bool}"));
    let heyting = checks.heyting.is_heyting();
    r.line(format!("truth values algebra: {}", checks.tva));
    r.line(format!("Heyting: {heyting}"));
    r.line(format!("ordered: {}", checks.ordered));
    r.line(format!("complete: {}", checks.complete));
    r.line(format!("adjunction: {}", checks.adjunction));
    r.line(format!("embedding is a pseudo-Heyting morphism: {}", checks.embedding_pseudo_heyting));
    r.line(format!("embedding is a truth values morphism: {}", checks.embedding_truth_values));
    r.set("size", alg.size());
    r.set("elements", alg.names());
    r.set("order", order_json(alg, &c.order));
    r.set("embedding", json!({"map": emb.named_pairs(), "injective": injective}));
    r.set("isomorphicToBool", iso_bool);
    r.set(
        "checks",
        json!({
            "closed": checks.closed, "tva": checks.tva, "heyting": heyting,
            "ordered": checks.ordered, "complete": checks.complete,
            "adjunction": checks.adjunction,
            "embeddingPseudoHeyting": checks.embedding_pseudo_heyting,
            "embeddingTruthValues": checks.embedding_truth_values,
        }),
    );
    if let Some(dir) = out_dir {
        std::fs::create_dir_all(dir)?;
        let stem = path
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("algebra");
        let alg_path = dir.join(format!("{stem}_completed.alg"));
        let out_doc = AlgebraDocument {
            algebra: alg.clone(),
            order: Some(c.order.clone()),
            note: Some(format!("closed sets of {}", file_name(path))),
        };
        std::fs::write(&alg_path, render_algebra(&out_doc))?;
        let mor_path = dir.join(format!("{stem}_embedding.json"));
        let mor = json!({
            "source": file_name(path),
            "target": file_name(&alg_path),
            "map": emb.named_pairs(),
            "injective": injective,
        });
        std::fs::write(&mor_path, serde_json::to_string_pretty(&mor)? + "\n")?;
        r.line(format!("wrote {} and {}", alg_path.display(), mor_path.display()));
        r.set("files", [alg_path.display().to_string(), mor_path.display().to_string()]);
    }
    r.verdict = if checks.all_passed() {
        Verdict::Positive
    } else {
        Verdict::Negative
    };
    Ok(())
}

pub fn check_model_cmd(
    r: &mut Report,
    theory_path: &Path,
    structure_path: &Path,
    algebra: Option<&Path>,
) -> Result<()> {
    let theory = load_theory(r, theory_path)?;
    let text = r.read(structure_path)?;
    let alg_path: PathBuf = match algebra {
        Some(p) => p.to_path_buf(),
        None => {
            let rel = structure_algebra_path(&text).ok_or_else(|| {
                anyhow!("the structure names no algebra; add an `algebra` line or pass --algebra")
            })?;
            structure_path
                .parent()
                .unwrap_or_else(|| Path::new("."))
                .join(rel)
        }
    };
    let doc = load_algebra(r, &alg_path)?;
    let st = parse_structure(&text, &theory.signature, &doc.algebra)
        .with_context(|| format!("in {}", structure_path.display()))?;
    let report = check_model(&theory, &st)?;
    r.line(format!("model check: {}", report.verdict));
    model_lines(r, &report);
    r.set("report", &report);
    r.verdict = if report.passed() {
        Verdict::Positive
    } else {
        Verdict::Negative
    };
    Ok(())
}

pub fn parse_domains(specs: &[String]) -> Result<IndexMap<String, usize>> {
    let mut out = IndexMap::new();
    for s in specs {
        let (sort, n) = s
            .split_once('=')
            .ok_or_else(|| anyhow!("expected `--domain <sort>=<size>`, got `{s}`"))?;
        let n: usize = n
            .trim()
            .parse()
            .map_err(|_| anyhow!("bad domain size in `{s}`"))?;
        if n == 0 {
            bail!("domains must be non-empty (`{s}`)");
        }
        out.insert(sort.trim().to_string(), n);
    }
    Ok(out)
}

fn check_domains(theory: &Theory, domains: &IndexMap<String, usize>) -> Result<()> {
    for s in domains.keys() {
        if !theory.signature.has_sort(s) {
            bail!("unknown sort `{s}` in --domain");
        }
    }
    Ok(())
}

fn structure_lines(r: &mut Report, st: &BStructure) {
    for l in render_structure(st, None).lines() {
        r.line(format!("  {l}"));
    }
}

pub fn find_model_cmd(
    r: &mut Report,
    s: &Settings,
    theory_path: &Path,
    algebra_path: &Path,
    domains: &[String],
) -> Result<()> {
    let theory = load_theory(r, theory_path)?;
    let doc = load_algebra(r, algebra_path)?;
    let domains = parse_domains(domains)?;
    check_domains(&theory, &domains)?;
    match find_model(&theory, &doc.algebra, &domains, s.bound) {
        Ok(search) => {
            r.set("examined", search.examined);
            match search.model {
                Some(st) => {
                    r.line(format!("model found after {} candidates", search.examined));
                    structure_lines(r, &st);
                    r.set("model", structure_json(&st));
                    r.verdict = Verdict::Positive;
                }
                None => {
                    r.line(format!(
                        "no model: all {} candidate structures fail",
                        search.examined
                    ));
                    r.set("model", Value::Null);
                    r.verdict = Verdict::Negative;
                }
            }
        }
        Err(e @ SemanticsError::SearchTooLarge { .. }) => {
            r.line(format!("inconclusive: {e}"));
            r.set("reason", e.to_string());
            r.verdict = Verdict::Inconclusive;
        }
        Err(e) => return Err(e.into()),
    }
    Ok(())
}

pub fn fixpoint_cmd(
    r: &mut Report,
    s: &Settings,
    theory_path: &Path,
    algebra_path: &Path,
    domains: &[String],
    deterministic: bool,
) -> Result<()> {
    let theory = load_theory(r, theory_path)?;
    let doc = load_algebra(r, algebra_path)?;
    let domains = parse_domains(domains)?;
    check_domains(&theory, &domains)?;
    let alg = &doc.algebra;
    let order = match &doc.order {
        Some(o) => o.clone(),
        None => find_complete_order(alg, DEFAULT_ORDER_SEARCH_BOUND)?
            .ok_or_else(|| anyhow!("the algebra has no order making it ordered and complete"))?,
    };
    r.line(format!("order: {}", order_text(alg, &order)));
    let out = if deterministic {
        fixpoint_model_deterministic(&theory, alg, &order, &domains)
    } else {
        fixpoint_model(&theory, alg, &order, &domains, s.fuel)
    };
    let out = match out {
        Ok(out) => out,
        Err(e @ SemanticsError::Construction(_)) => {
            r.line(format!("inconclusive: {e}"));
            r.set("reason", e.to_string());
            r.verdict = Verdict::Inconclusive;
            return Ok(());
        }
        Err(e) => return Err(e.into()),
    };
    r.line(format!("fixed point after {} iterations", out.iterations));
    let names = |t: &Vec<Vec<usize>>| -> Vec<Vec<String>> {
        t.iter()
            .map(|row| row.iter().map(|&v| alg.name(v).to_string()).collect())
            .collect()
    };
    for (i, tables) in out.trace.iter().enumerate() {
        let shown: Vec<String> = names(tables).iter().map(|r| format!("[{}]", r.join(" "))).collect();
        r.line(format!("  round {i}: {}", shown.join(" ")));
    }
    if !out.unnormalized_rules.is_empty() {
        let rules: Vec<String> = out.unnormalized_rules.iter().map(|i| (i + 1).to_string()).collect();
        r.line(format!(
            "  rules used without a normal form for their right-hand side: {}",
            rules.join(", ")
        ));
    }
    structure_lines(r, &out.structure);
    r.line(format!("model check: {}", out.report.verdict));
    model_lines(r, &out.report);
    r.set("iterations", out.iterations);
    r.set("trace", out.trace.iter().map(names).collect::<Vec<_>>());
    r.set("unnormalizedRules", &out.unnormalized_rules);
    r.set("model", structure_json(&out.structure));
    r.set("report", &out.report);
    r.verdict = if out.report.passed() {
        Verdict::Positive
    } else {
        Verdict::Negative
    };
    Ok(())
}

pub fn probe_cmd(r: &mut Report, s: &Settings, theory_path: &Path, library: &Path) -> Result<()> {
    let theory = load_theory(r, theory_path)?;
    let mut files: Vec<PathBuf> = std::fs::read_dir(library)
        .with_context(|| format!("cannot list {}", library.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "alg"))
        .collect();
    files.sort();
    if files.is_empty() {
        bail!("no .alg files in {}", library.display());
    }
    let mut lib = Vec::new();
    for f in &files {
        let doc = load_algebra(r, f)?;
        lib.push(LibraryAlgebra {
            name: f.file_stem().unwrap().to_string_lossy().into_owned(),
            algebra: doc.algebra,
            order: doc.order,
        });
    }
    let report = probe_super_consistency(&theory, &lib, s.bound, s.fuel);
    let mut entries = Vec::new();
    for e in &report.entries {
        let (status, detail) = match &e.outcome {
            ProbeOutcome::ModelFound { structure, method } => {
                (format!("model found ({method})"), structure_json(structure))
            }
            ProbeOutcome::NoModel => ("no model".to_string(), Value::Null),
            ProbeOutcome::Inconclusive(why) => (format!("inconclusive: {why}"), Value::Null),
        };
        r.line(format!(
            "{}: {status} [full: {}, ordered and complete: {}]",
            e.name, e.full, e.ordered_complete
        ));
        entries.push(json!({
            "algebra": e.name, "full": e.full, "orderedComplete": e.ordered_complete,
            "outcome": status, "model": detail, "falsifies": e.falsifies(),
        }));
    }
    r.line(report.conclusion());
    r.set("entries", entries);
    r.set("conclusion", report.conclusion());
    r.verdict = if report.falsified() {
        Verdict::Negative
    } else if report.all_models_found() {
        Verdict::Positive
    } else {
        Verdict::Inconclusive
    };
    Ok(())
}

pub fn stt_cmd(
    r: &mut Report,
    algebra_path: &Path,
    depth: usize,
    caps: SttCaps,
    theory_out: Option<&Path>,
) -> Result<()> {
    let doc = load_algebra(r, algebra_path)?;
    let out = build_stt_model(&doc.algebra, depth, caps)?;
    let sorts: Vec<String> = out
        .model
        .sorts()
        .into_iter()
        .map(|(s, n)| match n {
            Some(n) => format!("{s}:{n}"),
            None => format!("{s}:>{}", caps.max_domain),
        })
        .collect();
    let over = sorts.iter().filter(|s| s.contains('>')).count();
    r.line(format!(
        "{} sorts up to depth {depth}, {over} of them over the domain cap",
        sorts.len()
    ));
    for sc in &out.schemas {
        r.line(format!(
            "  {}: {} sort instantiations, {} instances, {} failing",
            sc.schema, sc.instantiations, sc.instances, sc.failures
        ));
    }
    if !out.skipped.is_empty() {
        r.line(format!("  skipped (over the caps): {}", out.skipped.join(", ")));
    }
    if let Some(w) = &out.report.witness {
        r.line(format!("  witness: {} {}", w.item, w.detail));
    }
    let passed = out.passed();
    r.line(if passed {
        "every checked instance holds".to_string()
    } else {
        "some instance fails or a schema was never checked".to_string()
    });
    if let Some(p) = theory_out {
        std::fs::write(p, out.model.theory().to_string())?;
        r.line(format!("wrote {}", p.display()));
    }
    r.set("depth", depth);
    r.set("sorts", sorts);
    r.set("schemas", &out.schemas);
    r.set("skipped", &out.skipped);
    r.set("witness", &out.report.witness);
    r.verdict = if passed { Verdict::Positive } else { Verdict::Negative };
    Ok(())
}

pub fn check_proof_cmd(r: &mut Report, s: &Settings, theory_path: &Path, proof_path: &Path) -> Result<()> {
    let theory = load_theory(r, theory_path)?;
    let text = r.read(proof_path)?;
    let file = parse_proof_file(&text, &theory.signature)
        .with_context(|| format!("in {}", proof_path.display()))?;
    let verdict = check_proof(&theory, &file.sequent, &file.proof, s.fuel)?;
    r.line(format!("sequent: {}", file.sequent));
    r.line(format!("proof: {}", file.proof));
    r.line(verdict.to_string());
    r.set("sequent", file.sequent.to_string());
    r.set("proof", file.proof.to_string());
    r.set("check", &verdict);
    r.verdict = match verdict {
        ProofVerdict::Valid => Verdict::Positive,
        ProofVerdict::Invalid { .. } => Verdict::Negative,
        ProofVerdict::Unknown { .. } => Verdict::Inconclusive,
    };
    Ok(())
}

pub fn normalize_proof_cmd(
    r: &mut Report,
    s: &Settings,
    theory_path: &Path,
    proof_path: &Path,
) -> Result<()> {
    let theory = load_theory(r, theory_path)?;
    let text = r.read(proof_path)?;
    let file = parse_proof_file(&text, &theory.signature)
        .with_context(|| format!("in {}", proof_path.display()))?;
    let typing = check_proof(&theory, &file.sequent, &file.proof, s.fuel)?;
    r.line(format!("proof: {}", file.proof));
    r.line(format!("typing: {typing}"));
    r.set("proof", file.proof.to_string());
    r.set("typing", &typing);
    let outcome = sn_status(&file.proof, s.fuel);
    r.set("status", outcome.name());
    match &outcome {
        ReductionOutcome::Normal { value, steps } => {
            r.line(format!("Normal: longest reduction has {steps} steps"));
            r.line(format!("  normal form: {value}"));
            r.set("normalForm", value.to_string());
            r.set("steps", steps);
            r.verdict = Verdict::Positive;
        }
        ReductionOutcome::Loop { cycle } => {
            let verified = verify_loop(cycle);
            r.line(format!(
                "Loop: cycle of length {} ({})",
                cycle.len() - 1,
                if verified { "verified" } else { "NOT verified" }
            ));
            for p in cycle {
                r.line(format!("  {p}"));
            }
            r.set("cycle", cycle.iter().map(ToString::to_string).collect::<Vec<_>>());
            r.set("cycleVerified", verified);
            if !verified {
                bail!("internal error: the reported cycle does not verify");
            }
            r.verdict = Verdict::Negative;
        }
        ReductionOutcome::FuelExhausted { frontier } => {
            r.line(format!(
                "FuelExhausted: {frontier} reducts unexplored after {} proofs",
                s.fuel
            ));
            r.set("frontier", frontier);
            r.verdict = Verdict::Inconclusive;
        }
    }
    if let ProofVerdict::Invalid { path, .. } = &typing {
        r.set("typingFailurePath", format_path(path));
    }
    Ok(())
}
