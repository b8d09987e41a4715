use proptest::prelude::*;

use geomon::laws::LawFamily;
use geomon::operator::{OperatorLetter, Sign};
use geomon::term::{terms_up_to, Address, SymbolId, Term};
use geomon::words::{orbit, GeneratorWord};

fn ald() -> LawFamily {
    LawFamily::builtin("ALD").unwrap()
}

fn arb_term(max_size: usize, vars: u32) -> impl Strategy<Value = Term> {
    let all = terms_up_to(max_size, &[SymbolId(0), SymbolId(1)], vars);
    (0..all.len()).prop_map(move |i| all[i].clone())
}

fn arb_letter(max_addr: usize) -> impl Strategy<Value = OperatorLetter> {
    (0usize..2, prop::collection::vec(0u8..2, 0..=max_addr), any::<bool>()).prop_map(|(rule, bits, neg)| {
        OperatorLetter::new(rule, Address::from_bits(&bits), if neg { Sign::Neg } else { Sign::Pos })
    })
}

fn arb_word(max_len: usize, max_addr: usize) -> impl Strategy<Value = GeneratorWord> {
    prop::collection::vec(arb_letter(max_addr), 0..=max_len).prop_map(GeneratorWord)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn render_parse_round_trip(t in arb_term(9, 4)) {
        let f = ald();
        let text = t.render(&f.symbols);
        prop_assert_eq!(Term::parse(&text, &f.symbols).unwrap(), t.clone());
        prop_assert_eq!(Term::from_json(&t.to_json(&f.symbols), &f.symbols).unwrap(), t);
    }

    #[test]
    fn replace_then_read_back(t in arb_term(9, 3), s in arb_term(5, 3), pick in 0usize..100) {
        let addrs = t.addresses();
        let a = &addrs[pick % addrs.len()];
        let u = t.replace_at(a, s.clone()).unwrap();
        prop_assert_eq!(u.subterm(a).unwrap(), &s);
    }

    #[test]
    fn words_stay_inside_the_orbit(t in arb_term(5, 3), w in arb_word(3, 2)) {
        let f = ald();
        if let Some(u) = w.eval(&f).apply(&t) {
            prop_assert!(orbit(&f, &t, 3).contains(&u));
            prop_assert!(orbit(&f, &u, 3).contains(&t));
        }
    }

    #[test]
    fn seeds_agree_with_stepwise_rewriting(t in arb_term(9, 4), w in arb_word(3, 2)) {
        let f = ald();
        prop_assert_eq!(w.eval(&f).apply(&t), w.act(&f, &t));
    }

    #[test]
    fn idempotents_are_partial_identities(w in arb_word(4, 2)) {
        let f = ald();
        let e = w.concat(&w.formal_inverse()).eval(&f);
        if let Some(s) = e.seed() {
            prop_assert_eq!(&s.dom, &s.img);
        }
        prop_assert_eq!(w.formal_inverse().formal_inverse(), w.clone());
        prop_assert_eq!(w.free_reduce().free_reduce(), w.free_reduce());
    }
}

#[test]
fn orbit_symmetry() {
    let f = ald();
    let terms = terms_up_to(5, &[SymbolId(0), SymbolId(1)], 1);
    for t in &terms {
        for u in orbit(&f, t, 2) {
            assert!(orbit(&f, &u, 2).contains(t), "{} / {}", t.render(&f.symbols), u.render(&f.symbols));
        }
    }
    let x = |s: &str| Term::parse(s, &f.symbols).unwrap();
    assert_eq!(orbit(&f, &x("(x*(x*x))"), 0).len(), 1);
    assert!(orbit(&f, &x("(x*(x*x))"), 2).contains(&x("((x o x)*x)")));
}

#[test]
fn empty_operator_does_not_factor_through_reduction() {
    let f = ald();
    let w = GeneratorWord::parse("S+e S+1 S-e S+e S-1 S-e", &f).unwrap();
    assert!(w.free_reduce().is_empty());
    assert!(w.eval(&f).is_empty());
    assert!(!w.free_reduce().eval(&f).is_empty());
}
