//! The acceptance checks, shared by the command line and the test suite.
//!
//! Each check is deterministic given the configuration seed and reports
//! its own runtime against a fixed limit.

use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::blueprint::{
    blueprint, cc_word, criticals_used, expected_critical, verify_blueprint_group, verify_blueprint_operator,
};
use crate::confluence::{commutation_relations, inheritance_relations, local_confluence_report, root_criticals, PairStatus};
use crate::group::bdot::{instances_up_to, AldLaw, BDotPresentation};
use crate::group::geo::{GeoPresentation, Identity};
use crate::group::template::{Prover, Template};
use crate::group::{words_equal, GLetter, Generator, GroupPresentation, GroupWord, Verdict};
use crate::laws::LawFamily;
use crate::operator::{PartialOperator, Sign};
use crate::term::{terms_up_to, Address, SymbolId, Term};
use crate::words::{all_letters, apply_letter, GeneratorWord};

/// Expansion budget for searches that back up structured proofs.
pub const DEFAULT_BUDGET: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Term size bound for the absorption and operator-level checks.
    pub term_size: usize,
    /// Term size bound for the group-level blueprint check.
    pub group_size: usize,
    pub budget: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { seed: 2024, term_size: 11, group_size: 11, budget: DEFAULT_BUDGET }
    }
}

#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub id: u8,
    pub title: &'static str,
    pub ok: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub limit: Duration,
}

impl CheckOutcome {
    /// Correct and within its time limit.
    pub fn passed(&self) -> bool {
        self.ok && self.elapsed <= self.limit
    }

    pub fn line(&self) -> String {
        format!(
            "[{}] C{:<2} {} — {} ({:.2}s, limit {}s)",
            if self.passed() { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.detail,
            self.elapsed.as_secs_f64(),
            self.limit.as_secs()
        )
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "id": self.id,
            "title": self.title,
            "passed": self.passed(),
            "detail": self.detail,
            "seconds": self.elapsed.as_secs_f64(),
            "limit_seconds": self.limit.as_secs(),
        })
    }
}

pub const CHECKS: [(u8, &str, u64); 12] = [
    (1, "empty operator", 1),
    (2, "letters applying to x1*((x2 o x3)*x4)", 1),
    (3, "commutation and inheritance soundness", 10),
    (4, "root critical completions", 60),
    (5, "associativity coverage", 30),
    (6, "blueprint words", 1),
    (7, "absorption by right vines", 60),
    (8, "operator-level blueprint", 120),
    (9, "group-level blueprint", 300),
    (10, "B• relations and ALD laws", 300),
    (11, "obstruction and quotient identities", 120),
    (12, "inverse monoid and shift naturality", 60),
];

pub fn run_check(id: u8, cfg: &SuiteConfig) -> CheckOutcome {
    let &(_, title, limit) = CHECKS.iter().find(|c| c.0 == id).expect("unknown check id");
    let clock = Instant::now();
    let result = match id {
        1 => empty_operator(),
        2 => exam_letters(),
        3 => schema_soundness(),
        4 => root_completions(),
        5 => associativity(),
        6 => blueprint_words(),
        7 => absorption_window(cfg),
        8 => operator_blueprint(cfg),
        9 => group_blueprint(cfg),
        10 => bdot_suite(cfg),
        11 => identity_suite(cfg),
        _ => monoid_properties(cfg),
    };
    let (ok, detail) = match result {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    CheckOutcome { id, title, ok, detail, elapsed: clock.elapsed(), limit: Duration::from_secs(limit) }
}

/// Runs all checks in id order.
pub fn run_all(cfg: &SuiteConfig) -> Vec<CheckOutcome> {
    CHECKS.iter().map(|c| run_check(c.0, cfg)).collect()
}

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ald() -> LawFamily {
    LawFamily::builtin("ALD").expect("builtin family")
}

fn word(f: &LawFamily, s: &str) -> GeneratorWord {
    GeneratorWord::parse(s, f).expect("well-formed word")
}

fn ald_terms(max_size: usize) -> Vec<Term> {
    terms_up_to(max_size, &[SymbolId(0), SymbolId(1)], 1)
}

fn empty_operator() -> Check {
    let f = ald();
    ensure(word(&f, "S+e S+1 S-e").eval(&f).is_empty(), || "S+e S+1 S-e is not empty".into())?;
    let sym = word(&f, "S+e S+1 S-e S+e S-1 S-e");
    ensure(sym.free_reduce().is_empty(), || "symmetrized word does not reduce".into())?;
    ensure(sym.eval(&f).is_empty(), || "symmetrized word is not empty".into())?;
    Ok("eval is empty; symmetrized word reduces to 1 yet evaluates to empty".into())
}

fn exam_letters() -> Check {
    let f = ald();
    let t = Term::parse("(x1*((x2 o x3)*x4))", &f.symbols).map_err(|e| e.to_string())?;
    let mut found = Vec::new();
    for l in all_letters(&f, 2, &[Sign::Pos, Sign::Neg]) {
        if let Some(u) = apply_letter(&f, &l, &t) {
            found.push((l.render(&f), u.render(&f.symbols)));
        }
    }
    found.sort();
    let want = [
        ("A+e", "((x1 o (x2 o x3))*x4)"),
        ("A-1", "(x1*(x2*(x3*x4)))"),
        ("S+e", "((x1*(x2 o x3))*(x1*x4))"),
    ];
    let want: Vec<(String, String)> = want.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
    ensure(found == want, || format!("applicable letters {found:?}"))?;
    Ok("exactly S+e, A+e, A-1 apply, with the expected images".into())
}

fn schema_soundness() -> Check {
    let f = ald();
    let run = || (commutation_relations(&f, 2), inheritance_relations(&f, 2, 1));
    let (comm, inh) = run();
    let bad = comm.iter().chain(&inh).filter(|r| !r.holds(&f)).count();
    ensure(bad == 0, || format!("{bad} relations fail"))?;
    let (comm2, inh2) = run();
    ensure(comm == comm2 && inh == inh2, || "relation lists differ between runs".into())?;
    Ok(format!("{} commutation and {} inheritance relations hold; stable across runs", comm.len(), inh.len()))
}

fn root_completions() -> Check {
    let f = ald();
    let crits = root_criticals(&f, 6);
    let displayed = [
        ("S+e", "S+1", "S+e S+1 S+e", "S+1 S+e S+1 S+0"),
        ("S+e", "A+1", "S+e S+1 A+e", "A+1 S+e S+0"),
        ("A+e", "S+1", "A+e S+e", "S+1 S+e A+1 A+0"),
    ];
    for (a, b, l, r) in displayed {
        let (a, b) = (word(&f, a).0[0].clone(), word(&f, b).0[0].clone());
        let c = crits
            .iter()
            .find(|c| (&c.a, &c.b) == (&a, &b) || (&c.a, &c.b) == (&b, &a))
            .ok_or_else(|| format!("overlap {} / {} not searched", a.render(&f), b.render(&f)))?;
        let (u, v) = c.completion.clone().ok_or_else(|| format!("no completion for {} / {}", a.render(&f), b.render(&f)))?;
        let op = u.eval(&f);
        ensure(!op.is_empty() && op == v.eval(&f), || "completion is not a relation".into())?;
        ensure(op == word(&f, l).eval(&f) && op == word(&f, r).eval(&f), || {
            format!("completion {} = {} differs from {l} = {r}", u.render(&f), v.render(&f))
        })?;
    }
    let aa = crits
        .iter()
        .find(|c| c.a.rule == 1 && c.b.rule == 1)
        .ok_or_else(|| "overlap A+e / A+1 not searched".to_string())?;
    ensure(aa.completion.is_none(), || "A+e / A+1 unexpectedly completed".into())?;
    Ok("three completions match the displayed relations; A+e / A+1 has none".into())
}

fn associativity() -> Check {
    let f = LawFamily::builtin("A").expect("builtin family");
    let report = local_confluence_report(&f, 2, 5);
    ensure(report.all_covered(), || format!("{} uncovered pairs", report.uncovered().len()))?;
    let (a, b) = (word(&f, "A+e").0[0].clone(), word(&f, "A+1").0[0].clone());
    let row = report.rows.iter().find(|r| r.a == a && r.b == b).ok_or("no row for A+e / A+1")?;
    let PairStatus::Critical { left, right } = &row.status else {
        return Err(format!("A+e / A+1 classified as {}", row.status.label()));
    };
    let op = left.eval(&f);
    ensure(!op.is_empty() && op == right.eval(&f), || "completion is not a relation".into())?;
    let displayed = word(&f, "A+e A+e").eval(&f) == word(&f, "A+1 A+e A+1").eval(&f);
    Ok(format!(
        "{} pairs covered; A+e / A+1 completed by {} = {}{}",
        report.rows.len(),
        left.render(&f),
        right.render(&f),
        if displayed { "" } else { " (differs from the displayed A A = A1 A A1, which does not hold)" }
    ))
}

fn blueprint_words() -> Check {
    let f = ald();
    for (t, want) in [
        ("x", "1"),
        ("(x o x)", "A+e"),
        ("((x o x)*x)", "A+e S+e A-1"),
        ("(x*((x o x)*x))", "A+1 S+1 A-11 S+e"),
    ] {
        let term = Term::parse(t, &f.symbols).map_err(|e| e.to_string())?;
        let got = cc_word(&term, &f.symbols).map_err(|e| e.to_string())?.render(&f);
        ensure(got == want, || format!("Cc{t} = {got}, expected {want}"))?;
    }
    Ok("all four worked examples reproduced".into())
}

fn absorption_window(cfg: &SuiteConfig) -> Check {
    let f = ald();
    let terms = ald_terms(cfg.term_size);
    for t in &terms {
        blueprint(&f, t).map_err(|e| format!("{}: {e}", t.render(&f.symbols)))?;
    }
    Ok(format!("{} terms of size ≤ {} absorbed on a 4-vine window", terms.len(), cfg.term_size))
}

fn operator_blueprint(cfg: &SuiteConfig) -> Check {
    let f = ald();
    let letters = all_letters(&f, 3, &[Sign::Pos, Sign::Neg]);
    let mut pairs = 0;
    for t in ald_terms(cfg.term_size) {
        for l in &letters {
            if apply_letter(&f, l, &t).is_none() {
                continue;
            }
            pairs += 1;
            let ok = verify_blueprint_operator(&f, &t, &GeneratorWord(vec![l.clone()])).map_err(|e| e.to_string())?;
            ensure(ok, || format!("fails for {} · {}", t.render(&f.symbols), l.render(&f)))?;
        }
    }
    Ok(format!("{pairs} (term, letter) pairs, zero failures"))
}

fn group_blueprint(cfg: &SuiteConfig) -> Check {
    let pres = GeoPresentation::ald();
    let prover = Prover::new(&pres);
    let f = pres.family.clone();
    let (mut pairs, mut structured) = (0, 0);
    for t in ald_terms(cfg.group_size) {
        for l in all_letters(&f, t.depth(), &[Sign::Pos, Sign::Neg]) {
            if apply_letter(&f, &l, &t).is_none() {
                continue;
            }
            pairs += 1;
            let name = || format!("{} · {}", t.render(&f.symbols), l.render(&f));
            let g = verify_blueprint_group(&pres, &prover, &t, &l, cfg.budget).map_err(|e| e.to_string())?;
            let Verdict::Equal(c) = &g.verdict else {
                return Err(format!("undecided for {}", name()));
            };
            ensure(c.proves(&pres, &g.start, &g.target), || format!("certificate for {} does not replay", name()))?;
            let want = expected_critical(&pres, &t, &l);
            ensure(want.is_some() && criticals_used(c) == want.into_iter().collect::<Vec<_>>(), || {
                format!("{} uses criticals {:?}, expected {want:?}", name(), criticals_used(c))
            })?;
            structured += g.structured as usize;
        }
    }
    Ok(format!("{pairs} pairs certified ({structured} by the structured proof), critical moves as predicted"))
}

/// Template proof checked by replay, else a bounded search.
pub fn prove_identity(
    pres: &dyn GroupPresentation,
    prover: &Prover<'_>,
    tpl: &Template,
    vals: &[GroupWord],
    budget: usize,
) -> (GroupWord, GroupWord, Verdict) {
    let l = tpl.lhs.concrete(vals).free_reduce();
    let r = tpl.rhs.concrete(vals).free_reduce();
    if let Ok(c) = prover.prove(tpl, vals) {
        if c.proves(pres, &l, &r) {
            return (l, r, Verdict::Equal(c));
        }
    }
    let v = words_equal(pres, &l, &r, budget);
    (l, r, v)
}

/// Freely reduced words of length at most `max_len` over `letters` and
/// their inverses.
pub fn reduced_words(letters: &[Generator], max_len: usize) -> Vec<GroupWord> {
    let alphabet: Vec<GLetter> = letters.iter().flat_map(|g| [GLetter::pos(g.clone()), GLetter::neg(g.clone())]).collect();
    let mut out = vec![GroupWord::empty()];
    let mut layer = vec![GroupWord::empty()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for l in &alphabet {
                if w.0.last().is_some_and(|p| p.cancels(l)) {
                    continue;
                }
                let mut v = w.clone();
                v.0.push(l.clone());
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// `n` triples drawn with replacement.
pub fn sample_triples(words: &[GroupWord], n: usize, rng: &mut ChaCha8Rng) -> Vec<[GroupWord; 3]> {
    (0..n).map(|_| [0, 1, 2].map(|_| words.choose(rng).expect("nonempty").clone())).collect()
}

fn bdot_suite(cfg: &SuiteConfig) -> Check {
    let pres = BDotPresentation::default();
    let rels = instances_up_to(6);
    let mut checked = 0;
    for id in rels.iter().filter(|id| matches!(id, crate::group::RelationId::BDot { i, .. } if *i <= 4)) {
        let rel = pres.instantiate(id).ok_or("instance vanished")?;
        let c = words_equal(&pres, &rel.left, &rel.right, 1);
        let moves = c.certificate().map(|c| c.relation_moves().count());
        ensure(moves == Some(1), || format!("{} needs {moves:?} moves", pres.describe(id)))?;
        checked += 1;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let words = reduced_words(&[Generator::s(1), Generator::a(1), Generator::s(2), Generator::a(2)], 2);
    let triples = sample_triples(&words, 200, &mut rng);
    let prover = Prover::new(&pres);
    let mut proved = 0;
    for law in AldLaw::ALL {
        let tpl = law.template();
        for v in &triples {
            let (_, _, verdict) = prove_identity(&pres, &prover, &tpl, v, cfg.budget);
            ensure(verdict.is_equal(), || {
                let names: Vec<String> = v.iter().map(|w| w.render(&[])).collect();
                format!("{} undecided at x, y, z = {names:?}", law.name())
            })?;
            proved += 1;
        }
    }
    Ok(format!("{checked} relation instances in one move; {proved} law instances certified (seed {})", cfg.seed))
}

fn identity_suite(cfg: &SuiteConfig) -> Check {
    let pres = GeoPresentation::ald();
    let prover = Prover::new(&pres);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x0b57);
    let gens: Vec<Generator> = ["", "0", "1"]
        .iter()
        .flat_map(|a| {
            let a = Address::parse(if a.is_empty() { "e" } else { a }).expect("address");
            [Generator::geo(0, a.clone()), Generator::geo(1, a)]
        })
        .collect();
    let words = reduced_words(&gens, 2);
    let mut proved = 0;
    for id in Identity::ALL {
        let tpl = id.template();
        for v in sample_triples(&words, 50, &mut rng) {
            let (_, _, verdict) = prove_identity(&pres, &prover, &tpl, &v, cfg.budget);
            ensure(verdict.is_equal(), || {
                let names: Vec<String> = v.iter().map(|w| w.render(&pres.rule_names())).collect();
                format!("{} undecided at x, y, z = {names:?}", id.name())
            })?;
            proved += 1;
        }
    }
    Ok(format!("{proved} instances of {} identities certified (seed {})", Identity::ALL.len(), cfg.seed))
}

fn monoid_properties(cfg: &SuiteConfig) -> Check {
    let f = ald();
    let letters = all_letters(&f, 2, &[Sign::Pos, Sign::Neg]);
    let mut corpus: Vec<GeneratorWord> = vec![GeneratorWord::empty()];
    for a in &letters {
        corpus.push(GeneratorWord(vec![a.clone()]));
        for b in &letters {
            corpus.push(GeneratorWord(vec![a.clone(), b.clone()]));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x3a1f);
    for _ in 0..400 {
        let n = rng.gen_range(3..=4);
        corpus.push(GeneratorWord((0..n).map(|_| letters.choose(&mut rng).expect("letters").clone()).collect()));
    }
    let evals: Vec<PartialOperator> = corpus.iter().map(|w| w.eval(&f)).collect();
    let shifts: Vec<Address> = ["0", "1", "10"].iter().map(|s| Address::parse(s).expect("address")).collect();
    for (w, op) in corpus.iter().zip(&evals) {
        let name = || w.render(&f);
        ensure(op.compose(&op.invert()).compose(op) == *op, || format!("f f⁻¹ f ≠ f for {}", name()))?;
        ensure(w.formal_inverse().eval(&f) == op.invert(), || format!("formal inverse of {}", name()))?;
        ensure(PartialOperator::Empty.compose(op).is_empty() && op.compose(&PartialOperator::Empty).is_empty(), || {
            "empty operator is not absorbing".into()
        })?;
        // Shifting the identity restricts it, while the empty word stays empty.
        for a in shifts.iter().filter(|_| !w.is_empty()) {
            ensure(w.shift(a).eval(&f) == op.shift(&f, a), || format!("shift by {a} of {}", name()))?;
        }
    }
    for _ in 0..2000 {
        let (i, j, k) = (rng.gen_range(0..corpus.len()), rng.gen_range(0..corpus.len()), rng.gen_range(0..corpus.len()));
        let (u, v) = (&corpus[i], &corpus[j]);
        ensure(u.concat(v).eval(&f) == evals[i].compose(&evals[j]), || {
            format!("eval({} · {}) is not the composite", u.render(&f), v.render(&f))
        })?;
        let assoc_l = evals[i].compose(&evals[j]).compose(&evals[k]);
        let assoc_r = evals[i].compose(&evals[j].compose(&evals[k]));
        ensure(assoc_l == assoc_r, || "composition is not associative".into())?;
        let e1 = evals[i].compose(&evals[i].invert());
        let e2 = evals[j].compose(&evals[j].invert());
        ensure(e1.compose(&e2) == e2.compose(&e1), || "idempotents do not commute".into())?;
    }
    Ok(format!("{} words: inverse-monoid laws, formal inverse, shift naturality; 2000 sampled morphism/associativity/idempotent checks", corpus.len()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduced_word_counts() {
        let w = reduced_words(&[Generator::s(1), Generator::a(1)], 2);
        assert_eq!(w.len(), 1 + 4 + 4 * 3);
        assert!(w.iter().all(|w| w.is_reduced()));
    }

    #[test]
    fn fast_checks_pass() {
        let cfg = SuiteConfig::default();
        for id in [1, 2, 6] {
            let o = run_check(id, &cfg);
            assert!(o.ok, "{}", o.line());
        }
    }
}
