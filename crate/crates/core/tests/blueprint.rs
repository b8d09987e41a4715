use std::collections::HashMap;

use geomon::blueprint::*;
use geomon::group::geo::GeoPresentation;
use geomon::group::template::Prover;
use geomon::laws::LawFamily;
use geomon::operator::{OperatorLetter, PartialOperator, Sign};
use geomon::term::{terms_up_to, Address, SymbolId, Term, Tree};
use geomon::words::{all_letters, apply_letter, GeneratorWord};
use geomon::Error;

fn ald() -> LawFamily {
    LawFamily::builtin("ALD").unwrap()
}

fn term(s: &str) -> Term {
    Term::parse(s, &ald().symbols).unwrap()
}

/// `x * (x * ... (x * x))` with `n` leaves, built without the library.
fn vine(n: usize) -> Term {
    let mut t = Term::var(1);
    for _ in 1..n {
        t = Term::node(SymbolId(0), Term::var(1), t);
    }
    t
}

#[test]
fn ld_blueprints_use_only_sigma() {
    let f = ald();
    let reg = &f.symbols;
    let render = |s: &str| ld_blueprint_restriction(&term(s), reg).unwrap().render(&f);
    assert_eq!(render("(x*x)"), "S+e");
    assert_eq!(render("((x*x)*x)"), "S+e S+e S-1");
    for t in terms_up_to(7, &[SymbolId(0)], 1) {
        assert!(ld_blueprint_restriction(&t, reg).unwrap().letters().iter().all(|l| l.rule == 0));
    }
    assert!(ld_blueprint_restriction(&term("(x o x)"), reg).is_err());
}

#[test]
fn absorption_matches_hand_built_vines() {
    let f = ald();
    assert_eq!(absorption(&term("x"), &f.symbols).unwrap(), (2, 1));
    let op = cc_word(&term("(x o x)"), &f.symbols).unwrap().eval(&f);
    for n in 3..8 {
        let want = Term::node(SymbolId(0), term("(x o x)"), vine(n - 2));
        assert_eq!(op.apply(&vine(n)), Some(want));
    }
    for t in terms_up_to(9, &[SymbolId(0), SymbolId(1)], 1) {
        let (n0, p) = absorption(&t, &f.symbols).unwrap();
        let op = cc_word(&t, &f.symbols).unwrap().eval(&f);
        let n = n0 + 1;
        assert_eq!(op.apply(&vine(n)), Some(Term::node(SymbolId(0), t.clone(), vine(n - p))));
    }
}

#[test]
fn operator_recovers_the_term() {
    let f = ald();
    let mut seen = HashMap::new();
    for t in terms_up_to(9, &[SymbolId(0), SymbolId(1)], 1) {
        let image = cc_word(&t, &f.symbols).unwrap().eval(&f).apply(&vine(12)).expect("defined on x^[12]");
        if let Some(prev) = seen.insert(image, t.clone()) {
            panic!("{} and {} share an image", prev.render(&f.symbols), t.render(&f.symbols));
        }
    }
}

#[test]
fn operator_mirrors_the_star_clause() {
    let f = ald();
    let one = Address::parse("1").unwrap();
    let sigma = PartialOperator::elementary(&f, &OperatorLetter::pos(0, Address::root()));
    let op = |t: &Term| cc_word(t, &f.symbols).unwrap().eval(&f);
    for t in terms_up_to(9, &[SymbolId(0), SymbolId(1)], 1) {
        let Tree::Node(s, l, r) = &t else { continue };
        if *s != SymbolId(0) {
            continue;
        }
        let want = op(l).compose(&op(r).shift(&f, &one)).compose(&sigma).compose(&op(l).shift(&f, &one).invert());
        assert_eq!(op(&t), want, "{}", t.render(&f.symbols));
    }
}

#[test]
fn operator_level_examples() {
    let f = ald();
    let t = term("(x*((x o x)*x))");
    let a = GeneratorWord::parse("A+e", &f).unwrap();
    assert_eq!(a.eval(&f).apply(&t), Some(term("((x o (x o x))*x)")));
    assert!(verify_blueprint_operator(&f, &t, &a).unwrap());
    assert!(verify_blueprint_operator(&f, &t, &GeneratorWord::empty()).unwrap());
    let w = GeneratorWord::parse("A+e A-e S+e", &f).unwrap();
    assert!(verify_blueprint_operator(&f, &t, &w).unwrap());
    let bad = GeneratorWord::parse("A+0", &f).unwrap();
    assert!(matches!(verify_blueprint_operator(&f, &t, &bad), Err(Error::UndefinedAction(_))));
}

#[test]
fn group_level_cases() {
    let pres = GeoPresentation::ald();
    let prover = Prover::new(&pres);
    let f = pres.family.clone();
    let letter = |s: &str| GeneratorWord::parse(s, &f).unwrap().letters()[0].clone();
    for (t, l, crit) in [("(x*(x*(x*x)))", "A+e", 2), ("(x*(x*(x*x)))", "S+e", 0), ("(x*(x o x))", "S+e", 1)] {
        let g = verify_blueprint_group(&pres, &prover, &term(t), &letter(l), 0).unwrap();
        let c = g.verdict.certificate().expect("certified without search");
        assert!(c.proves(&pres, &g.start, &g.target));
        assert_eq!(criticals_used(c), vec![crit]);
    }
    // a ∘-free term and a Σ letter: the proof never mentions A
    let g = verify_blueprint_group(&pres, &prover, &term("((x*x)*(x*(x*x)))"), &letter("S+1"), 0).unwrap();
    let c = g.verdict.certificate().unwrap();
    assert!(c.words().unwrap().iter().all(|w| w.letters().iter().all(|l| !matches!(l.gen, geomon::group::Generator::Geo { rule: 1, .. }))));
    assert!(verify_blueprint_group(&pres, &prover, &term("(x o x)"), &letter("S+e"), 0).is_err());
}

#[test]
fn group_level_up_to_size_nine() {
    let pres = GeoPresentation::ald();
    let prover = Prover::new(&pres);
    let f = pres.family.clone();
    for t in terms_up_to(9, &[SymbolId(0), SymbolId(1)], 1) {
        for l in all_letters(&f, t.depth(), &[Sign::Pos, Sign::Neg]) {
            if apply_letter(&f, &l, &t).is_none() {
                continue;
            }
            let g = verify_blueprint_group(&pres, &prover, &t, &l, 0).unwrap();
            assert!(g.structured, "{} {}", t.render(&f.symbols), l.render(&f));
            assert_eq!(
                criticals_used(g.verdict.certificate().unwrap()),
                vec![expected_critical(&pres, &t, &l).unwrap()]
            );
        }
    }
}

#[test]
fn non_unary_terms_are_rejected() {
    let f = ald();
    assert!(matches!(cc_word(&term("(x1*x2)"), &f.symbols), Err(Error::InvalidLeaf(_))));
    assert!(matches!(absorption(&term("x2"), &f.symbols), Err(Error::InvalidLeaf(_))));
}
