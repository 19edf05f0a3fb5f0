//! Replays scenario checks and collects the results into a [`RunReport`].

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use crate::abelian::homology_h1;
use crate::certificate::{
    search_certificate_using, verify_certificate, verify_derivation, Certificate, Derivation, NotFound, SearchBound,
};
use crate::coset::{enumerate, Strategy, DEFAULT_MAX_COSETS};
use crate::coset_proof::{prove_words, ProofError};
use crate::corpus::{load_presentation, load_scenario_with, scenario_ids, Check, Elimination, Scenario};
use crate::error::CorpusError;
use crate::presentation::{eliminate_generator_via, parse_relation, parse_word, replay, Presentation};
use crate::word::{CommutatorConvention, Generator, Word};

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub convention: CommutatorConvention,
    pub max_cosets: usize,
    /// Strategies tried for triviality checks, in order.
    pub strategies: Vec<Strategy>,
    /// Node budget for the flat certificate search tried before falling
    /// back to enumeration proofs.
    pub search_nodes: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            convention: CommutatorConvention::Default,
            max_cosets: DEFAULT_MAX_COSETS,
            strategies: vec![Strategy::HltLookahead, Strategy::Felsch],
            search_nodes: 50_000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    /// A resource limit stopped the check before it could decide.
    Limit,
    Fail,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Pass => "pass",
            Outcome::Limit => "limit",
            Outcome::Fail => "fail",
        }
    }

    /// Process exit code for this outcome.
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Pass => 0,
            Outcome::Fail => 1,
            Outcome::Limit => 3,
        }
    }

    fn worst(items: impl IntoIterator<Item = Outcome>) -> Outcome {
        items.into_iter().max().unwrap_or(Outcome::Pass)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StepReport {
    pub check: &'static str,
    pub outcome: Outcome,
    pub detail: String,
    pub elapsed_ms: f64,
    pub data: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScenarioReport {
    pub id: String,
    pub location: String,
    pub quote: String,
    pub outcome: Outcome,
    pub elapsed_ms: f64,
    pub steps: Vec<StepReport>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub convention: CommutatorConvention,
    pub max_cosets: usize,
    pub outcome: Outcome,
    pub scenarios: Vec<ScenarioReport>,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report JSON is infallible")
    }

    /// Human-readable summary: one block per scenario with its quote.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "fpverify {} | convention {} | max cosets {}\n",
            self.version,
            self.convention.as_str(),
            self.max_cosets
        );
        for s in &self.scenarios {
            out.push_str(&format!("\n[{}] {} ({:.0} ms)\n", s.outcome.as_str().to_uppercase(), s.id, s.elapsed_ms));
            out.push_str(&format!("  quote: \"{}\"\n", s.quote));
            for st in &s.steps {
                out.push_str(&format!("  {:<5} {:<18} {}\n", st.outcome.as_str(), st.check, st.detail));
            }
        }
        out.push_str(&format!("\noverall: {}\n", self.outcome.as_str()));
        out
    }
}

/// Runs the given scenarios (all registered ones if `ids` is empty).
/// Scenarios run concurrently; the report keeps the order of `ids`.
pub fn run_scenarios(ids: &[&str], opts: &RunOptions) -> Result<RunReport, CorpusError> {
    let ids: Vec<&str> = if ids.is_empty() { scenario_ids() } else { ids.to_vec() };
    let scenarios: Vec<Scenario> =
        ids.iter().map(|id| load_scenario_with(id, opts.convention)).collect::<Result<_, _>>()?;
    let reports: Vec<ScenarioReport> = std::thread::scope(|scope| {
        let handles: Vec<_> = scenarios.iter().map(|s| scope.spawn(move || run_scenario(s, opts))).collect();
        handles.into_iter().map(|h| h.join().expect("scenario thread panicked")).collect()
    });
    Ok(RunReport {
        tool: "fpverify",
        version: env!("CARGO_PKG_VERSION"),
        convention: opts.convention,
        max_cosets: opts.max_cosets,
        outcome: Outcome::worst(reports.iter().map(|r| r.outcome)),
        scenarios: reports,
    })
}

pub fn run_scenario(s: &Scenario, opts: &RunOptions) -> ScenarioReport {
    let start = Instant::now();
    let steps: Vec<StepReport> = s
        .expectation
        .checks
        .iter()
        .map(|c| {
            let t = Instant::now();
            let (outcome, detail, data) = match run_check(s, c, opts) {
                Ok(r) => r,
                Err(e) => (Outcome::Fail, e, Value::Null),
            };
            StepReport { check: c.kind(), outcome, detail, elapsed_ms: ms(t), data }
        })
        .collect();
    ScenarioReport {
        id: s.id.clone(),
        location: s.expectation.location.clone(),
        quote: s.expectation.quote.clone(),
        outcome: Outcome::worst(steps.iter().map(|st| st.outcome)),
        elapsed_ms: ms(start),
        steps,
    }
}

fn ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1000.0
}

type CheckResult = Result<(Outcome, String, Value), String>;

fn run_check(s: &Scenario, check: &Check, opts: &RunOptions) -> CheckResult {
    let p = &s.presentation;
    match check {
        Check::Shape { generators, relators } => {
            let got = (p.generators().len(), p.relators().len());
            let ok = got == (*generators, *relators);
            Ok((
                pass_if(ok),
                format!("{} generators, {} relators (expected {generators}, {relators})", got.0, got.1),
                json!({"generators": got.0, "relators": got.1}),
            ))
        }
        Check::H1 { free_rank, torsion } => {
            let h = homology_h1(p);
            let want: Vec<num_bigint::BigInt> = torsion.iter().map(|&t| t.into()).collect();
            let ok = h.free_rank == *free_rank && h.torsion == want;
            Ok((pass_if(ok), format!("H1 = {h}"), serde_json::to_value(&h).map_err(|e| e.to_string())?))
        }
        Check::Trivial => Ok(check_trivial(p, opts)),
        Check::Consequences { over, targets, max_factors, max_conjugator_len } => {
            let base = match over {
                Some(stem) => load_presentation(stem, opts.convention).map_err(|e| e.to_string())?,
                None => p.clone(),
            };
            let stem = over.clone().unwrap_or_else(|| s.id.clone());
            check_consequences(s, &base, &stem, targets, SearchBound::new(*max_factors, *max_conjugator_len), opts)
        }
        Check::Equivalent { other, to_other, from_other } => {
            let q = load_presentation(other, opts.convention).map_err(|e| e.to_string())?;
            check_equivalent(p, &q, to_other, from_other, opts)
        }
        Check::EliminatesTo { eliminate, generators, equivalent_to } => {
            check_elimination(p, eliminate, generators, equivalent_to, opts)
        }
        Check::Redundant { at_least } => Ok(check_redundant(p, *at_least, opts)),
        Check::RedundantTogether { at_least } => Ok(check_redundant_together(p, *at_least, opts)),
    }
}

fn pass_if(ok: bool) -> Outcome {
    if ok {
        Outcome::Pass
    } else {
        Outcome::Fail
    }
}

fn check_trivial(p: &Presentation, opts: &RunOptions) -> (Outcome, String, Value) {
    let h1 = homology_h1(p);
    let mut runs = Vec::new();
    let mut completed_one = None;
    let mut wrong_index = None;
    for &strategy in &opts.strategies {
        match enumerate(p, &[], strategy, opts.max_cosets) {
            Ok(r) => {
                match r.index {
                    Some(1) => completed_one = completed_one.or(Some(strategy)),
                    Some(n) => wrong_index = wrong_index.or(Some(n)),
                    None => {}
                }
                runs.push(serde_json::to_value(&r).unwrap_or(Value::Null));
            }
            Err(e) => runs.push(json!({"strategy": strategy.as_str(), "error": e.to_string()})),
        }
    }
    let data = json!({"enumerations": runs, "h1": h1, "h1_trivial": h1.is_trivial()});
    if let Some(n) = wrong_index {
        return (Outcome::Fail, format!("enumeration completed with index {n}"), data);
    }
    match completed_one {
        Some(strategy) if h1.is_trivial() => {
            (Outcome::Pass, format!("index 1 under {}; H1 trivial", strategy.as_str()), data)
        }
        Some(_) => (Outcome::Fail, format!("index 1 but H1 = {h1}"), data),
        None if !h1.is_trivial() => (Outcome::Fail, format!("H1 = {h1} is not trivial"), data),
        None => (Outcome::Limit, format!("no strategy completed within {} cosets", opts.max_cosets), data),
    }
}

/// Checked evidence that a word lies in the normal closure.
#[derive(Clone, Debug)]
pub enum Evidence {
    Certificate(Certificate),
    Derivation(Derivation),
}

impl Evidence {
    pub fn method(&self) -> &'static str {
        match self {
            Evidence::Certificate(_) => "search",
            Evidence::Derivation(_) => "enumeration",
        }
    }

    /// Factor count for certificates, step count for derivations.
    pub fn size(&self) -> usize {
        match self {
            Evidence::Certificate(c) => c.factors.len(),
            Evidence::Derivation(d) => d.steps.len(),
        }
    }

    pub fn verify(&self, p: &Presentation) -> bool {
        match self {
            Evidence::Certificate(c) => verify_certificate(p, c) == Ok(true),
            Evidence::Derivation(d) => verify_derivation(p, d) == Ok(true),
        }
    }

    fn reindex(&self, map: impl Fn(usize) -> usize) -> Evidence {
        match self {
            Evidence::Certificate(c) => Evidence::Certificate(c.reindex(map)),
            Evidence::Derivation(d) => Evidence::Derivation(d.reindex(map)),
        }
    }

    fn summary(&self) -> Value {
        json!({"method": self.method(), "size": self.size()})
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Unproved {
    /// The target is certainly not a consequence.
    Refuted,
    /// Neither search nor enumeration settled it.
    Limit,
}

/// Tries a bounded flat search first, then a proof-producing enumeration.
/// Every returned piece of evidence has been re-verified against `p`.
pub fn prove(p: &Presentation, target: &Word, bound: SearchBound, opts: &RunOptions) -> Result<Evidence, Unproved> {
    let all: Vec<usize> = (0..p.relators().len()).collect();
    match search_certificate_using(p, target, bound, &all) {
        Ok(c) => {
            let e = Evidence::Certificate(c);
            if e.verify(p) {
                return Ok(e);
            }
        }
        Err(NotFound::ExponentObstruction) => return Err(Unproved::Refuted),
        Err(_) => {}
    }
    match prove_words(p, std::slice::from_ref(target), opts.max_cosets) {
        Ok(mut ds) => {
            let e = Evidence::Derivation(ds.remove(0));
            if e.verify(p) {
                Ok(e)
            } else {
                Err(Unproved::Limit)
            }
        }
        Err(ProofError::NotAConsequence { .. }) => Err(Unproved::Refuted),
        Err(_) => Err(Unproved::Limit),
    }
}

fn default_bound(opts: &RunOptions) -> SearchBound {
    SearchBound::new(16, None).with_nodes(opts.search_nodes)
}

fn check_consequences(
    s: &Scenario,
    base: &Presentation,
    stem: &str,
    targets: &[String],
    bound: SearchBound,
    opts: &RunOptions,
) -> CheckResult {
    let stored = s.certificates.as_ref().filter(|f| f.convention == opts.convention);
    let mut rows = Vec::new();
    let mut missed = Vec::new();
    for relation in targets {
        let relators = parse_relation(relation, base.generators(), opts.convention).map_err(|e| e.to_string())?;
        for (k, w) in relators.iter().enumerate() {
            let frozen = stored.and_then(|f| {
                f.certificates.iter().filter(|c| c.over == stem && c.relation == *relation).nth(k)
            });
            let frozen_ok = frozen.map(|c| c.certificate.target == *w && verify_certificate(base, &c.certificate) == Ok(true));
            let found = search_certificate_using(base, w, bound, &(0..base.relators().len()).collect::<Vec<_>>());
            let found_ok = found.as_ref().is_ok_and(|c| verify_certificate(base, c) == Ok(true));
            if !found_ok || frozen_ok == Some(false) {
                missed.push(relation.as_str());
            }
            rows.push(json!({
                "relation": relation,
                "relator": w.to_text(),
                "stored_certificate": frozen_ok,
                "search": match &found {
                    Ok(c) => json!({"factors": c.factors.len(), "certificate": c}),
                    Err(e) => json!({"not_found": format!("{e:?}")}),
                },
            }));
        }
    }
    let detail = format!(
        "{} relation(s) certified within {} factors{}",
        targets.len(),
        bound.max_factors,
        match stored {
            Some(_) => "; stored certificates re-verified",
            None => "",
        }
    );
    if missed.is_empty() {
        Ok((Outcome::Pass, detail, json!(rows)))
    } else {
        Ok((Outcome::Fail, format!("no certificate within {} factors for {missed:?}", bound.max_factors), json!(rows)))
    }
}

fn translate(
    w: &Word,
    dict: &BTreeMap<String, String>,
    into: &Presentation,
    conv: CommutatorConvention,
) -> Result<Word, String> {
    let mut parsed: BTreeMap<String, Word> = BTreeMap::new();
    for (g, text) in dict {
        parsed.insert(g.clone(), parse_word(text, into.generators(), conv).map_err(|e| e.to_string())?);
    }
    let mut missing = None;
    let out = w.substitute_all(|g: &Generator| {
        if let Some(x) = parsed.get(g.name()) {
            return Some(x.clone());
        }
        match into.generator(g.name()) {
            Some(h) => Some(Word::generator(h)),
            None => {
                missing = Some(g.name().to_string());
                None
            }
        }
    });
    match missing {
        Some(g) => Err(format!("generator `{g}` has no image")),
        None => Ok(out),
    }
}

/// Proves every target over `p`; returns the worst outcome and a summary.
fn prove_all(p: &Presentation, targets: &[(String, Word)], opts: &RunOptions) -> (Outcome, Vec<Value>) {
    let mut outcome = Outcome::Pass;
    let mut rows = Vec::new();
    for (label, w) in targets {
        let res = prove(p, w, default_bound(opts), opts);
        let row = match &res {
            Ok(e) => json!({"target": label, "word": w.to_text(), "evidence": e.summary()}),
            Err(u) => json!({"target": label, "word": w.to_text(), "unproved": format!("{u:?}")}),
        };
        outcome = outcome.max(match res {
            Ok(_) => Outcome::Pass,
            Err(Unproved::Refuted) => Outcome::Fail,
            Err(Unproved::Limit) => Outcome::Limit,
        });
        rows.push(row);
    }
    (outcome, rows)
}

fn check_equivalent(
    p: &Presentation,
    q: &Presentation,
    to_other: &BTreeMap<String, String>,
    from_other: &BTreeMap<String, String>,
    opts: &RunOptions,
) -> CheckResult {
    let conv = opts.convention;
    // relators of p, mapped into q, must hold in q; and the reverse
    let mut into_q = Vec::new();
    for r in p.relators() {
        into_q.push((r.to_text(), translate(r, to_other, q, conv)?));
    }
    let mut into_p = Vec::new();
    for r in q.relators() {
        into_p.push((r.to_text(), translate(r, from_other, p, conv)?));
    }
    // the two maps are mutually inverse on generators
    for g in p.generators() {
        let there = translate(&Word::generator(g), to_other, q, conv)?;
        let back = translate(&there, from_other, p, conv)?;
        into_p.push((format!("{g} round trip"), &Word::generator(g).inverse() * &back));
    }
    for g in q.generators() {
        let there = translate(&Word::generator(g), from_other, p, conv)?;
        let back = translate(&there, to_other, q, conv)?;
        into_q.push((format!("{g} round trip"), &Word::generator(g).inverse() * &back));
    }
    let (o1, rows1) = prove_all(q, &into_q, opts);
    let (o2, rows2) = prove_all(p, &into_p, opts);
    let outcome = o1.max(o2);
    let count = |rows: &[Value], m: &str| rows.iter().filter(|r| r["evidence"]["method"] == m).count();
    let all: Vec<Value> = rows1.iter().chain(&rows2).cloned().collect();
    let detail = format!(
        "{} obligations in {} and {} in {}: {} by search, {} by enumeration",
        into_q.len(),
        q.name(),
        into_p.len(),
        p.name(),
        count(&all, "search"),
        count(&all, "enumeration")
    );
    Ok((outcome, detail, json!({"in_other": rows1, "in_this": rows2})))
}

fn check_elimination(
    p: &Presentation,
    steps: &[Elimination],
    generators: &[String],
    equivalent_to: &str,
    opts: &RunOptions,
) -> CheckResult {
    let mut cur = p.clone();
    let mut moves = Vec::new();
    for e in steps {
        let gen = cur.generator(&e.generator).ok_or_else(|| format!("no generator `{}`", e.generator))?.clone();
        let via = parse_relation(&e.via, cur.generators(), opts.convention).map_err(|err| err.to_string())?;
        let [via] = via.as_slice() else { return Err(format!("`{}` is not a single relator", e.via)) };
        let (core, _) = via.cyclic_reduce();
        let index = cur
            .relators()
            .iter()
            .position(|r| r.same_relator(&core))
            .ok_or_else(|| format!("no relator matches `{}`", e.via))?;
        let (next, mv) = eliminate_generator_via(&cur, &gen, index).map_err(|err| err.to_string())?;
        moves.push(mv);
        cur = next;
    }
    let replayed = replay(p, &moves).map_err(|e| e.to_string())?;
    let names: Vec<&str> = cur.generators().iter().map(|g| g.name()).collect();
    let shape_ok = names == generators.iter().map(String::as_str).collect::<Vec<_>>() && replayed == cur;
    let target = load_presentation(equivalent_to, opts.convention).map_err(|e| e.to_string())?;
    let (outcome, detail, data) = check_equivalent(&cur, &target, &BTreeMap::new(), &BTreeMap::new(), opts)?;
    let data = json!({
        "result": cur.to_text(),
        "moves": moves,
        "equivalence": data,
    });
    if !shape_ok {
        return Ok((Outcome::Fail, format!("eliminations left generators {names:?}"), data));
    }
    Ok((outcome, format!("{} relators over {:?}; {detail}", cur.relators().len(), names), data))
}

/// The presentation keeping only the relators at `keep`, in that order.
fn without(p: &Presentation, keep: &[usize]) -> Presentation {
    p.with_relators(keep.iter().map(|&i| p.relators()[i].clone()).collect())
        .expect("subset of valid relators")
}

fn check_redundant(p: &Presentation, at_least: usize, opts: &RunOptions) -> (Outcome, String, Value) {
    let n = p.relators().len();
    let mut rows = Vec::new();
    let mut certified = Vec::new();
    let mut undecided = 0;
    for i in 0..n {
        let keep: Vec<usize> = (0..n).filter(|&j| j != i).collect();
        let sub = without(p, &keep);
        let r = &p.relators()[i];
        match prove(&sub, r, default_bound(opts), opts) {
            Ok(e) => {
                let e = e.reindex(|j| keep[j]);
                let verified = e.verify(p);
                if verified {
                    certified.push(i);
                }
                rows.push(json!({"index": i, "relator": r.to_text(), "redundant": verified, "evidence": e.summary()}));
            }
            Err(u) => {
                if u == Unproved::Limit {
                    undecided += 1;
                }
                rows.push(json!({"index": i, "relator": r.to_text(), "redundant": false, "reason": format!("{u:?}")}));
            }
        }
    }
    let outcome = if certified.len() >= at_least {
        Outcome::Pass
    } else if certified.len() + undecided >= at_least {
        Outcome::Limit
    } else {
        Outcome::Fail
    };
    (
        outcome,
        format!("{} of {n} relators certified redundant (need {at_least}): {certified:?}", certified.len()),
        json!({"certified": certified, "relators": rows}),
    )
}

fn check_redundant_together(p: &Presentation, at_least: usize, opts: &RunOptions) -> (Outcome, String, Value) {
    let mut search = Removal { p, opts, failed: Vec::new(), attempts: 0, undecided: false };
    let all: Vec<usize> = (0..p.relators().len()).collect();
    let mut best = Vec::new();
    search.extend(&all, &mut Vec::new(), 0, at_least, &mut best);
    let removed: Vec<usize> = best.iter().map(|(i, _)| *i).collect();
    let kept: Vec<usize> = all.iter().copied().filter(|i| !removed.contains(i)).collect();
    let outcome = match removed.len() >= at_least {
        true => Outcome::Pass,
        false if search.undecided => Outcome::Limit,
        false => Outcome::Fail,
    };
    (
        outcome,
        format!(
            "dropped {} relators one after another (need {at_least}): {removed:?}; {} removal attempts",
            removed.len(),
            search.attempts
        ),
        json!({"removed": removed, "kept": kept, "steps": best.iter().map(|(_, v)| v).collect::<Vec<_>>()}),
    )
}

/// Depth-first search for a long sequence of relator removals, each one
/// proved from the relators still present.
struct Removal<'a> {
    p: &'a Presentation,
    opts: &'a RunOptions,
    /// `(kept, i)`: relator `i` was not derivable from `kept`, hence from no
    /// subset of it either.
    failed: Vec<(Vec<usize>, usize)>,
    attempts: usize,
    undecided: bool,
}

impl Removal<'_> {
    fn extend(
        &mut self,
        keep: &[usize],
        path: &mut Vec<(usize, Value)>,
        from: usize,
        goal: usize,
        best: &mut Vec<(usize, Value)>,
    ) -> bool {
        if path.len() > best.len() {
            *best = path.clone();
        }
        if path.len() >= goal {
            return true;
        }
        for &i in keep.iter().filter(|&&i| i >= from) {
            let rest: Vec<usize> = keep.iter().copied().filter(|&j| j != i).collect();
            if self.failed.iter().any(|(s, k)| *k == i && rest.iter().all(|j| s.contains(j))) {
                continue;
            }
            self.attempts += 1;
            let sub = without(self.p, &rest);
            let r = &self.p.relators()[i];
            match prove(&sub, r, default_bound(self.opts), self.opts) {
                Ok(e) if e.verify(&sub) => {
                    let row = json!({"index": i, "relator": r.to_text(), "remaining": rest.len(), "evidence": e.summary()});
                    path.push((i, row));
                    if self.extend(&rest, path, i + 1, goal, best) {
                        return true;
                    }
                    path.pop();
                }
                res => {
                    self.undecided |= matches!(res, Err(Unproved::Limit));
                    self.failed.push((rest, i));
                }
            }
        }
        false
    }
}
