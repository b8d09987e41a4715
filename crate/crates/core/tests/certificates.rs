use proptest::prelude::*;

use geomon::group::bdot::{instances_up_to, BDotPresentation};
use geomon::group::geo::{normal_closure_identity, GeoPresentation};
use geomon::group::search::forms;
use geomon::group::{
    words_equal, Certificate, GLetter, Generator, GroupPresentation, GroupWord, Move, Relation, RelationId, Shift,
    Verdict,
};
use geomon::term::Address;

fn bdot_word(max: usize) -> impl Strategy<Value = GroupWord> {
    prop::collection::vec((any::<bool>(), 1u32..5, any::<bool>()), 0..max).prop_map(|v| {
        GroupWord(
            v.into_iter()
                .map(|(s, i, inv)| {
                    let g = if s { Generator::s(i) } else { Generator::a(i) };
                    if inv { GLetter::neg(g) } else { GLetter::pos(g) }
                })
                .collect(),
        )
    })
}

fn bdot_relations() -> Vec<Relation> {
    let p = BDotPresentation::default();
    instances_up_to(4).iter().filter_map(|id| p.instantiate(id)).collect()
}

/// A certificate made of `picks.len()` relation moves, each performed on a
/// random factor `from` inserted in the middle of padding words.
fn chained(picks: &[(usize, usize)], pad: &GroupWord) -> Certificate {
    let rels = bdot_relations();
    let mut cert = Certificate::trivial(pad.clone());
    for &(r, k) in picks {
        let rel = &rels[r % rels.len()];
        let fs = forms(rel);
        let f = &fs[k % fs.len()];
        let end = cert.end().unwrap();
        // grow the word by f.from via cancelling insertions, then rewrite it
        let mut step = Certificate::trivial(end.clone());
        let at = end.len();
        for (i, l) in f.from.letters().iter().enumerate() {
            step.push(Move::InsertCancel { position: at + i, letter: l.clone() });
        }
        let mid = step.end().unwrap();
        let grown = GroupWord(mid.letters()[..at + f.from.len()].to_vec());
        assert_eq!(grown.letters()[at..].to_vec(), f.from.letters().to_vec());
        step.push(Move::Relation { position: at, relation: f.id.clone(), from: f.from.clone(), to: f.to.clone() });
        cert = cert.then(step).unwrap();
    }
    cert
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn certificate_transformations_replay(
        picks in prop::collection::vec((0usize..1000, 0usize..50), 1..4),
        pad in bdot_word(4),
        pre in bdot_word(3),
        suf in bdot_word(3),
    ) {
        let p = BDotPresentation::default();
        let c = chained(&picks, &pad);
        let end = c.replay(&p).unwrap();
        prop_assert_eq!(&c.end().unwrap(), &end);
        prop_assert!(c.reversed().unwrap().proves(&p, &end, &c.start));
        prop_assert!(c.inverted().unwrap().proves(&p, &c.start.inverse(), &end.inverse()));
        let sh = Shift::Index(1);
        prop_assert!(c.shifted(&sh).proves(&p, &c.start.shifted(&sh), &end.shifted(&sh)));
        let e = c.embedded(&pre, &suf);
        prop_assert!(e.proves(&p, &pre.concat(&c.start).concat(&suf), &pre.concat(&end).concat(&suf)));
    }

    #[test]
    fn reduction_certificates(w in bdot_word(8)) {
        let p = BDotPresentation::default();
        let c = Certificate::reduction(&w);
        let r = w.free_reduce();
        prop_assert!(c.proves(&p, &w, &r));
        prop_assert_eq!(r.free_reduce(), r.clone());
        prop_assert!(r.is_reduced());
        prop_assert_eq!(w.inverse().inverse(), w.clone());
    }

    #[test]
    fn single_relation_instances_are_found(r in 0usize..1000, pre in bdot_word(2), suf in bdot_word(2)) {
        let p = BDotPresentation::default();
        let rels = bdot_relations();
        let rel = &rels[r % rels.len()];
        let u = pre.concat(&rel.left).concat(&suf);
        let v = pre.concat(&rel.right).concat(&suf);
        match words_equal(&p, &u, &v, 400) {
            Verdict::Equal(c) => prop_assert!(c.proves(&p, &u, &v)),
            Verdict::Undecided(s) => prop_assert!(false, "undecided after {:?}", s),
        }
    }
}

#[test]
fn tampered_certificates_are_rejected() {
    let p = BDotPresentation::default();
    let w = |s: &str| GroupWord::parse(s, &[]).unwrap();
    let id = RelationId::BDot { schema: 4, i: 1, j: 2 };
    let good = Certificate {
        start: w("s1 s2 s1"),
        moves: vec![Move::Relation { position: 0, relation: id.clone(), from: w("s1 s2 s1"), to: w("s2 s1 s2") }],
    };
    assert_eq!(good.replay(&p).unwrap(), w("s2 s1 s2"));
    let wrong_rel = Certificate {
        moves: vec![Move::Relation {
            position: 0,
            relation: RelationId::BDot { schema: 0, i: 1, j: 3 },
            from: w("s1 s2 s1"),
            to: w("s2 s1 s2"),
        }],
        ..good.clone()
    };
    assert!(wrong_rel.replay(&p).is_err());
    let wrong_pos = Certificate {
        moves: vec![Move::Relation { position: 1, relation: id, from: w("s1 s2 s1"), to: w("s2 s1 s2") }],
        ..good.clone()
    };
    assert!(wrong_pos.replay(&p).is_err());
    let bad_delete = Certificate { start: w("s1 s2"), moves: vec![Move::DeleteCancel { position: 0 }] };
    assert!(bad_delete.replay(&p).is_err());
}

#[test]
fn exhausted_search_is_undecided_not_unequal() {
    let p = BDotPresentation::default();
    let w = |s: &str| GroupWord::parse(s, &[]).unwrap();
    assert!(matches!(words_equal(&p, &w("s1"), &w("a1"), 100), Verdict::Undecided(_)));
    assert!(words_equal(&p, &w("s1 s1^-1"), &w("1"), 0).is_equal());
}

#[test]
fn geometry_group_relations_are_sound() {
    let g = GeoPresentation::ald();
    assert_eq!(g.bases.len(), 3);
    let names = g.rule_names();
    let w = |s: &str| GroupWord::parse(s, &names).unwrap();
    for (u, v) in [
        ("S+e S+1 S+e", "S+1 S+e S+1 S+0"),
        ("A+e S+e A-1", "S+1 S+e A+0"),
        ("S+01 S+10", "S+10 S+01"),
        ("S+0 S+01 S+0", "S+01 S+0 S+00 S+01"),
    ] {
        let c = words_equal(&g, &w(u), &w(v), 2000);
        let c = c.certificate().unwrap_or_else(|| panic!("{u} = {v} undecided"));
        assert!(c.proves(&g, &w(u), &w(v)));
        let json = c.to_json(&g);
        assert_eq!(json["start"], u);
        assert_eq!(json["end"], v);
    }
}

#[test]
fn normal_closure_moves_letters_under_a() {
    let g = GeoPresentation::ald();
    let names = g.rule_names();
    let w = |s: &str| GroupWord::parse(s, &names).unwrap();
    let c = normal_closure_identity(&g, 1, 0, &Address::root()).unwrap();
    assert_eq!(c.start, w("S+10"));
    assert_eq!(c.replay(&g).unwrap(), w("A+e S+01 A-e"));
    let c = normal_closure_identity(&g, 2, 1, &Address::parse("0").unwrap()).unwrap();
    assert_eq!(c.start, w("A+1100"));
    assert_eq!(c.replay(&g).unwrap(), w("A+1 A+e A+0110 A-e A-1"));
    assert!(normal_closure_identity(&g, 0, 0, &Address::root()).is_err());
}
