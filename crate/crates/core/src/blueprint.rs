//! The ALD blueprint: terms over `{*, ∘}` in one variable encoded as
//! elements of the geometry monoid and of the geometry group.

use crate::error::{Error, Result};
use crate::group::cert::Certificate;
use crate::group::geo::{BoxOp, GeoPresentation, Identity};
use crate::group::template::Prover;
use crate::group::{words_equal, GLetter, Generator, GroupWord, RelationId, Shift, Verdict, WordAlgebra};
use crate::laws::LawFamily;
use crate::operator::{OperatorLetter, PartialOperator, Sign};
use crate::term::{right_vine, Address, SymbolId, SymbolRegistry, Term, Tree};
use crate::words::{apply_letter, GeneratorWord};

const S: usize = 0;
const A: usize = 1;

fn op_of(reg: &SymbolRegistry, s: SymbolId) -> Result<BoxOp> {
    match reg.token(s) {
        "*" => Ok(BoxOp::Star),
        "o" => Ok(BoxOp::Circ),
        other => Err(Error::Malformed(format!("symbol {other:?} has no blueprint"))),
    }
}

/// `Cc(t)` over any word algebra, unreduced.
pub fn cc<W: WordAlgebra>(t: &Term, reg: &SymbolRegistry) -> Result<W> {
    match t {
        Tree::Var(1) => Ok(W::unit()),
        Tree::Var(v) => Err(Error::InvalidLeaf(format!("x{v}"))),
        Tree::Node(s, l, r) => Ok(op_of(reg, *s)?.apply(&cc::<W>(l, reg)?, &cc::<W>(r, reg)?)),
    }
}

/// The freely reduced blueprint word as a group word.
pub fn cc_group(t: &Term, reg: &SymbolRegistry) -> Result<GroupWord> {
    Ok(cc::<GroupWord>(t, reg)?.free_reduce())
}

/// The freely reduced blueprint word over the ALD letters `S`, `A`.
pub fn cc_word(t: &Term, reg: &SymbolRegistry) -> Result<GeneratorWord> {
    Ok(cc_group(t, reg)?.to_generator_word().expect("blueprints use law letters only"))
}

/// `(n₀, p)` from the induction of the absorption lemma: the blueprint
/// operator maps `x^[n]` to `t * x^[n-p]` for every `n ≥ n₀`.
pub fn absorption(t: &Term, reg: &SymbolRegistry) -> Result<(usize, usize)> {
    match t {
        Tree::Var(1) => Ok((2, 1)),
        Tree::Var(v) => Err(Error::InvalidLeaf(format!("x{v}"))),
        Tree::Node(s, l, r) => {
            let (m1, p1) = absorption(l, reg)?;
            let (m2, p2) = absorption(r, reg)?;
            Ok(match op_of(reg, *s)? {
                BoxOp::Star => ((m1 + p2).max(m2 + p1), p2),
                BoxOp::Circ => (m1.max(m2 + p1), p1 + p2),
            })
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlueprintResult {
    pub word: GeneratorWord,
    pub operator: PartialOperator,
    pub n0: usize,
    pub p: usize,
}

/// Number of consecutive vines checked by [`blueprint`].
pub const WINDOW: usize = 4;

/// Blueprint word, operator and absorption pair, checked on the vines
/// `x^[n]` for `n₀ ≤ n < n₀ + WINDOW`.
pub fn blueprint(family: &LawFamily, t: &Term) -> Result<BlueprintResult> {
    let word = cc_word(t, &family.symbols)?;
    let operator = word.eval(family);
    let (n0, p) = absorption(t, &family.symbols)?;
    let star = family.symbols.lookup("*").ok_or_else(|| Error::Malformed("family lacks *".into()))?;
    for n in n0..n0 + WINDOW {
        let want = Term::node(star, t.clone(), right_vine(n - p, star)?);
        if operator.apply(&right_vine(n, star)?) != Some(want) {
            return Err(Error::ValidationFailure(format!("blueprint fails on the vine of length {n}")));
        }
    }
    Ok(BlueprintResult { word, operator, n0, p })
}

/// `Cc(t·w) ~ Cc(t) • sh₀(w)`: both operators agree on some term.
pub fn verify_blueprint_operator(family: &LawFamily, t: &Term, w: &GeneratorWord) -> Result<bool> {
    let f = w.eval(family);
    let image = f.apply(t).ok_or_else(|| Error::UndefinedAction(w.render(family)))?;
    let left = cc_word(&image, &family.symbols)?.eval(family);
    let right = cc_word(t, &family.symbols)?.eval(family).compose(&f.shift(family, &Address::parse("0")?));
    Ok(left.agree_somewhere(&right))
}

/// The blueprint of a `∘`-free term; it never involves `A`.
pub fn ld_blueprint_restriction(t: &Term, reg: &SymbolRegistry) -> Result<GeneratorWord> {
    if t.symbols_used().iter().any(|s| reg.token(*s) != "*") {
        return Err(Error::Malformed("term is not o-free".into()));
    }
    let w = cc_word(t, reg)?;
    assert!(w.letters().iter().all(|l| l.rule as usize == S), "LD blueprint contains A");
    Ok(w)
}

fn geo_letter(l: &OperatorLetter) -> GLetter {
    GLetter { gen: Generator::geo(l.rule as usize, l.address.clone()), inv: l.sign == Sign::Neg }
}

fn zero() -> Address {
    Address::from_bits(&[0])
}

/// Certificate between two words with the same free reduction.
fn through_reduction(from: &GroupWord, to: &GroupWord) -> Result<Certificate> {
    Certificate::reduction(from).then(Certificate::reduction(to).reversed()?)
}

/// `Cc(t·X_α) = Cc(t)·X_{0α}` for a positive letter, by induction on `α`.
fn main_positive(prover: &Prover<'_>, reg: &SymbolRegistry, t: &Term, rule: usize, alpha: &Address) -> Result<Certificate> {
    let Tree::Node(sym, l, r) = t else {
        return Err(Error::UndefinedAction("letter below a leaf".into()));
    };
    let op = op_of(reg, *sym)?;
    let cc = |t: &Term| cc_group(t, reg);
    match alpha.bits().first() {
        None => {
            let Tree::Node(inner, r1, r2) = &**r else {
                return Err(Error::UndefinedAction("letter does not apply".into()));
            };
            let id = match (rule, op_of(reg, *inner)?) {
                (S, b) => Identity::Obst1(b),
                (A, BoxOp::Star) => Identity::Obst2,
                _ => return Err(Error::UndefinedAction("letter does not apply".into())),
            };
            if op != BoxOp::Star {
                return Err(Error::UndefinedAction("letter does not apply".into()));
            }
            prover.prove(&id.template(), &[cc(l)?, cc(r1)?, cc(r2)?])
        }
        Some(&bit) => {
            let beta = Address::from_bits(&alpha.bits()[1..]);
            let x = GroupWord::letter(GLetter::pos(Generator::geo(rule, beta.clone())));
            let (tl, tr) = ((**l).clone(), (**r).clone());
            let (p, q) = (cc(&tl)?, cc(&tr)?);
            let one = Shift::Prefix(Address::from_bits(&[1]));
            let (sub, raw_after, id) = if bit == 0 {
                let inner = main_positive(prover, reg, &tl, rule, &beta)?;
                let p2 = inner.end()?;
                let p_img = inner.start.clone();
                let raw = op.apply(&p_img, &q);
                let mut c = inner.embedded(&GroupWord::empty(), &raw_tail(op, &p_img, &q));
                if op == BoxOp::Star {
                    let back = inner.inverted()?.shifted(&one);
                    let prefix = p2.concat(&q.shifted(&one)).concat(&GroupWord::letter(star_letter()));
                    c = c.then(back.embedded(&prefix, &GroupWord::empty()))?;
                }
                (Certificate::reduction(&raw).reversed()?.then(c)?, op.apply(&p2, &q), Identity::Quot1(op))
            } else {
                let inner = main_positive(prover, reg, &tr, rule, &beta)?;
                let q_img = inner.start.clone();
                let raw = op.apply(&p, &q_img);
                let prefix = p.clone();
                let suffix = match op {
                    BoxOp::Star => GroupWord::letter(star_letter()).concat(&p.shifted(&one).inverse()),
                    BoxOp::Circ => GroupWord::letter(circ_letter()),
                };
                let c = inner.shifted(&one).embedded(&prefix, &suffix);
                (Certificate::reduction(&raw).reversed()?.then(c)?, op.apply(&p, &inner.end()?), Identity::Quot2(op))
            };
            let (ccl, ccr) = (cc(&tl)?, cc(&tr)?);
            let quot = prover.prove(&id.template(), &[ccl, ccr, x])?;
            sub.then(through_reduction(&raw_after, &quot.start)?)?.then(quot)
        }
    }
}

fn star_letter() -> GLetter {
    GLetter::pos(Generator::geo(S, Address::root()))
}

fn circ_letter() -> GLetter {
    GLetter::pos(Generator::geo(A, Address::root()))
}

/// What follows the first argument in the raw word of `x □ y`.
fn raw_tail(op: BoxOp, x: &GroupWord, y: &GroupWord) -> GroupWord {
    let full = op.apply(x, y);
    GroupWord(full.0[x.len()..].to_vec())
}

/// Certificate for `Cc(t·X^±_α) = Cc(t)·X^±_{0α}` in the geometry group.
pub struct GroupBlueprint {
    pub start: GroupWord,
    pub target: GroupWord,
    pub verdict: Verdict,
    /// Whether the structured proof succeeded (otherwise a search was run).
    pub structured: bool,
}

/// Certify `Cc(t · letter) = Cc(t) · sh₀(letter)`; if the structured proof
/// fails, fall back to a bounded search with `budget` expansions.
pub fn verify_blueprint_group(
    pres: &GeoPresentation,
    prover: &Prover<'_>,
    t: &Term,
    letter: &OperatorLetter,
    budget: usize,
) -> Result<GroupBlueprint> {
    let family = &pres.family;
    let reg = &family.symbols;
    let image = apply_letter(family, letter, t).ok_or_else(|| Error::UndefinedAction(letter.render(family)))?;
    let start = cc_group(&image, reg)?;
    let shifted = geo_letter(&letter.shifted(&zero()));
    let target = cc_group(t, reg)?.concat(&GroupWord::letter(shifted.clone())).free_reduce();
    let structured = match letter.sign {
        Sign::Pos => main_positive(prover, reg, t, letter.rule as usize, &letter.address),
        Sign::Neg => main_positive(prover, reg, &image, letter.rule as usize, &letter.address).and_then(|c| {
            // Cc(t) = Cc(t')·X  ⟹  Cc(t') = Cc(t)·X⁻¹
            let x_inv = GroupWord::letter(shifted.clone());
            let raw = cc_group(t, reg)?.concat(&x_inv);
            let c = Certificate::reduction(&raw)
                .reversed()?
                .then(c.embedded(&GroupWord::empty(), &x_inv))?;
            let end = c.end()?;
            c.then(through_reduction(&end, &start)?)?.reversed()
        }),
    };
    if let Ok(c) = structured {
        if c.start == start && c.replay(pres).is_ok_and(|e| e == target) {
            return Ok(GroupBlueprint { start, target, verdict: Verdict::Equal(c), structured: true });
        }
    }
    let verdict = words_equal(pres, &start, &target, budget);
    Ok(GroupBlueprint { start, target, verdict, structured: false })
}

/// The root-level critical relation the proof of a letter must use: the
/// first for `Σ` over `*`, the second for `Σ` over `∘`, the third for `A`.
pub fn expected_critical(pres: &GeoPresentation, t: &Term, letter: &OperatorLetter) -> Option<u8> {
    let family = &pres.family;
    let base = match letter.sign {
        Sign::Pos => t.clone(),
        Sign::Neg => apply_letter(family, letter, t)?,
    };
    let sub = base.subterm(&letter.address).ok()?;
    let Tree::Node(_, _, r) = sub else { return None };
    let Tree::Node(inner, _, _) = &**r else { return None };
    let root = Address::root();
    let one = Address::from_bits(&[1]);
    let (a, b) = match (letter.rule as usize, family.symbols.token(*inner)) {
        (S, "*") => (OperatorLetter::pos(S, root), OperatorLetter::pos(S, one)),
        (S, _) => (OperatorLetter::pos(S, root), OperatorLetter::pos(A, one)),
        _ => (OperatorLetter::pos(A, root), OperatorLetter::pos(S, one)),
    };
    pres.critical_index(&a, &b)
}

/// The critical bases used by a certificate.
pub fn criticals_used(c: &Certificate) -> Vec<u8> {
    let mut v: Vec<u8> = c
        .relation_moves()
        .filter_map(|id| match id {
            RelationId::Crit { base, .. } => Some(*base),
            _ => None,
        })
        .collect();
    v.sort_unstable();
    v.dedup();
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ald() -> LawFamily {
        LawFamily::builtin("ALD").unwrap()
    }

    fn t(s: &str) -> Term {
        Term::parse(s, &ald().symbols).unwrap()
    }

    #[test]
    fn worked_examples() {
        let f = ald();
        let r = |s: &str| cc_word(&t(s), &f.symbols).unwrap().render(&f);
        assert_eq!(r("x"), "1");
        assert_eq!(r("(x o x)"), "A+e");
        assert_eq!(r("((x o x)*x)"), "A+e S+e A-1");
        assert_eq!(r("(x*((x o x)*x))"), "A+1 S+1 A-11 S+e");
    }

    #[test]
    fn absorption_of_small_terms() {
        let f = ald();
        assert_eq!(absorption(&t("x"), &f.symbols).unwrap(), (2, 1));
        assert_eq!(absorption(&t("(x o x)"), &f.symbols).unwrap().1, 2);
        for s in ["x", "(x*x)", "(x o x)", "((x o x)*x)", "(x*((x o x)*x))"] {
            blueprint(&f, &t(s)).unwrap();
        }
        assert!(matches!(cc_word(&t("(x1*x2)"), &f.symbols), Err(Error::InvalidLeaf(_))));
    }

    #[test]
    fn group_blueprint_at_root() {
        let pres = GeoPresentation::ald();
        let prover = Prover::new(&pres);
        let f = &pres.family;
        for (term, letter, crit) in [("(x*(x*(x*x)))", "A+e", 2u8), ("(x*(x*(x*x)))", "S+e", 0), ("(x*(x o x))", "S+e", 1), ("((x*x)*(x*(x o x)))", "S+1", 1), ("((x o x)*x)", "A-e", 2), ("(x*((x o x)*x))", "A-1", 2)] {
            let l = GeneratorWord::parse(letter, f).unwrap().0[0].clone();
            let g = verify_blueprint_group(&pres, &prover, &t(term), &l, 0).unwrap();
            assert!(g.structured);
            let c = g.verdict.certificate().unwrap();
            assert!(c.proves(&pres, &g.start, &g.target));
            assert_eq!(criticals_used(c), vec![crit], "{term} {letter}");
            assert_eq!(expected_critical(&pres, &t(term), &l), Some(crit));
        }
    }
}
