//! Words over signed, address-indexed law letters and their evaluation.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::laws::LawFamily;
use crate::operator::{OperatorLetter, PartialOperator, Sign};
use crate::term::{Address, Term};

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GeneratorWord(pub Vec<OperatorLetter>);

impl GeneratorWord {
    pub fn empty() -> Self {
        GeneratorWord(Vec::new())
    }

    pub fn letters(&self) -> &[OperatorLetter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_positive(&self) -> bool {
        self.0.iter().all(|l| l.sign == Sign::Pos)
    }

    /// Parse tokens like `S+e A-10`; `1` or an empty string is the empty word.
    pub fn parse(text: &str, family: &LawFamily) -> Result<Self> {
        let mut letters = Vec::new();
        let mut offset = 0;
        for tok in text.split_whitespace() {
            offset = text[offset..].find(tok).map_or(offset, |i| offset + i);
            if tok == "1" || tok == "ε" {
                continue;
            }
            let at = tok.find(['+', '-']).ok_or_else(|| Error::Syntax {
                offset,
                message: format!("letter {tok:?} lacks a sign"),
            })?;
            let rule = family.rule_index(&tok[..at]).ok_or_else(|| Error::Syntax {
                offset,
                message: format!("unknown rule {:?}", &tok[..at]),
            })?;
            let sign = if tok.as_bytes()[at] == b'+' { Sign::Pos } else { Sign::Neg };
            let address = Address::parse(&tok[at + 1..]).map_err(|_| Error::Syntax {
                offset: offset + at + 1,
                message: format!("bad address in {tok:?}"),
            })?;
            letters.push(OperatorLetter::new(rule, address, sign));
            offset += tok.len();
        }
        Ok(GeneratorWord(letters))
    }

    pub fn render(&self, family: &LawFamily) -> String {
        if self.0.is_empty() {
            return "1".into();
        }
        let mut s = String::new();
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                s.push(' ');
            }
            let _ = write!(s, "{}", l.render(family));
        }
        s
    }

    /// Left-to-right composition of the elementary operators.
    pub fn eval(&self, family: &LawFamily) -> PartialOperator {
        let mut it = self.0.iter();
        let Some(first) = it.next() else {
            return PartialOperator::identity();
        };
        let mut op = PartialOperator::elementary(family, first);
        for l in it {
            if op.is_empty() {
                break;
            }
            op = op.compose(&PartialOperator::elementary(family, l));
        }
        op
    }

    /// Apply letter by letter (the reference semantics of `eval`).
    pub fn act(&self, family: &LawFamily, t: &Term) -> Option<Term> {
        let mut cur = t.clone();
        for l in &self.0 {
            cur = apply_letter(family, l, &cur)?;
        }
        Some(cur)
    }

    pub fn formal_inverse(&self) -> Self {
        GeneratorWord(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn shift(&self, a: &Address) -> Self {
        GeneratorWord(self.0.iter().map(|l| l.shifted(a)).collect())
    }

    pub fn concat(&self, other: &GeneratorWord) -> Self {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        GeneratorWord(v)
    }

    pub fn push(&mut self, l: OperatorLetter) {
        self.0.push(l)
    }

    /// Cancel adjacent `X X⁻¹` pairs until none remain.
    pub fn free_reduce(&self) -> Self {
        let mut out: Vec<OperatorLetter> = Vec::with_capacity(self.0.len());
        for l in &self.0 {
            if out.last().is_some_and(|last| *last == l.inverse()) {
                out.pop();
            } else {
                out.push(l.clone());
            }
        }
        GeneratorWord(out)
    }
}

/// Rewrite `t` at the letter's address directly, without seeds.
pub fn apply_letter(family: &LawFamily, l: &OperatorLetter, t: &Term) -> Option<Term> {
    let sub = t.subterm(&l.address).ok()?;
    let law = &family.laws[l.rule as usize];
    let (from, to) = match l.sign {
        Sign::Pos => (&law.lhs, &law.rhs),
        Sign::Neg => (&law.rhs, &law.lhs),
    };
    let m = crate::unify::match_term(from, sub)?;
    let image = crate::unify::instantiate(to, &m)?;
    t.replace_at(&l.address, image).ok()
}

/// Images of `t` under single letters of either sign, at every inner node.
pub fn neighbours(family: &LawFamily, t: &Term) -> Vec<Term> {
    let mut out = Vec::new();
    for a in t.inner_addresses() {
        for rule in 0..family.laws.len() {
            for sign in [Sign::Pos, Sign::Neg] {
                if let Some(u) = apply_letter(family, &OperatorLetter::new(rule, a.clone(), sign), t) {
                    out.push(u);
                }
            }
        }
    }
    out
}

/// Terms reachable from `t` in at most `depth` steps of either sign: a
/// bounded oracle for equivalence modulo the laws.
pub fn orbit(family: &LawFamily, t: &Term, depth: usize) -> BTreeSet<Term> {
    let mut all = BTreeSet::from([t.clone()]);
    let mut frontier = vec![t.clone()];
    for _ in 0..depth {
        let mut next = Vec::new();
        for u in &frontier {
            for v in neighbours(family, u) {
                if all.insert(v.clone()) {
                    next.push(v);
                }
            }
        }
        frontier = next;
    }
    all
}

/// Every letter of the family with address length at most `max_addr`,
/// positive letters first when `signs` holds both.
pub fn all_letters(family: &LawFamily, max_addr: usize, signs: &[Sign]) -> Vec<OperatorLetter> {
    let mut out = Vec::new();
    for &sign in signs {
        for a in Address::all_up_to(max_addr) {
            for rule in 0..family.laws.len() {
                out.push(OperatorLetter::new(rule, a.clone(), sign));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ald() -> LawFamily {
        LawFamily::builtin("ALD").unwrap()
    }

    #[test]
    fn parse_and_render() {
        let f = ald();
        let w = GeneratorWord::parse("S+e A-10  S+1", &f).unwrap();
        assert_eq!(w.len(), 3);
        assert_eq!(w.render(&f), "S+e A-10 S+1");
        assert!(GeneratorWord::parse("", &f).unwrap().is_empty());
        assert!(GeneratorWord::parse("1", &f).unwrap().is_empty());
        assert!(matches!(GeneratorWord::parse("S+e Q+1", &f), Err(Error::Syntax { offset: 4, .. })));
        assert!(GeneratorWord::parse("S+2", &f).is_err());
        assert!(GeneratorWord::parse("S", &f).is_err());
    }

    #[test]
    fn inverse_and_reduce() {
        let f = ald();
        let w = GeneratorWord::parse("S+e A-1", &f).unwrap();
        assert_eq!(w.formal_inverse().render(&f), "A+1 S-e");
        assert_eq!(w.formal_inverse().formal_inverse(), w);
        let sym = GeneratorWord::parse("S+e S+1 S-e S+e S-1 S-e", &f).unwrap();
        assert!(sym.free_reduce().is_empty());
        assert!(sym.eval(&f).is_empty());
        assert!(GeneratorWord::parse("S+e S-e", &f).unwrap().free_reduce().is_empty());
    }

    #[test]
    fn shift_prepends() {
        let f = ald();
        let w = GeneratorWord::parse("S+1 A-e", &f).unwrap();
        assert_eq!(w.shift(&Address::parse("0").unwrap()).render(&f), "S+01 A-0");
        assert_eq!(w.shift(&Address::root()), w);
    }

    #[test]
    fn eval_matches_stepwise_action() {
        let f = ald();
        let w = GeneratorWord::parse("S+e A+0", &f).unwrap();
        let t = Term::parse("(x1*(x2*x3))", &f.symbols).unwrap();
        assert_eq!(w.eval(&f).apply(&t), w.act(&f, &t));
        assert!(w.act(&f, &t).is_none());
        let t = Term::parse("((x1*x2)*(x3*x4))", &f.symbols).unwrap();
        let w = GeneratorWord::parse("S+e", &f).unwrap();
        assert_eq!(w.eval(&f).apply(&t).unwrap().render(&f.symbols), "(((x1*x2)*x3)*((x1*x2)*x4))");
    }
}
