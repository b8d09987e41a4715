//! Reasoning in presented groups by relation moves.
//!
//! Words are sequences of signed generators, either address-indexed law
//! letters (the geometry group `Geo_L`) or the numbered generators `s_i`,
//! `a_i` of `B•`. Equalities are witnessed by replayable certificates.

pub mod bdot;
pub mod cert;
pub mod geo;
pub mod search;
pub mod template;

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::operator::{OperatorLetter, Sign};
use crate::term::Address;
use crate::words::GeneratorWord;

pub use cert::{Certificate, Direction, Move};
pub use search::{words_equal, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BKind {
    S,
    A,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    /// Law `rule` at `address`.
    Geo { rule: u8, address: Address },
    /// `s_index` or `a_index`, index ≥ 1.
    BDot { kind: BKind, index: u32 },
}

impl Generator {
    pub fn geo(rule: usize, address: Address) -> Self {
        Generator::Geo { rule: rule as u8, address }
    }

    pub fn s(index: u32) -> Self {
        Generator::BDot { kind: BKind::S, index }
    }

    pub fn a(index: u32) -> Self {
        Generator::BDot { kind: BKind::A, index }
    }

    pub fn shifted(&self, sh: &Shift) -> Generator {
        match (self, sh) {
            (Generator::Geo { rule, address }, Shift::Prefix(p)) => {
                Generator::Geo { rule: *rule, address: p.concat(address) }
            }
            (Generator::BDot { kind, index }, Shift::Index(k)) => Generator::BDot { kind: *kind, index: index + k },
            (g, _) => panic!("shift {sh:?} does not apply to {g:?}"),
        }
    }

    pub fn address(&self) -> Option<&Address> {
        match self {
            Generator::Geo { address, .. } => Some(address),
            Generator::BDot { .. } => None,
        }
    }
}

/// A generator with exponent ±1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GLetter {
    pub gen: Generator,
    pub inv: bool,
}

impl GLetter {
    pub fn pos(gen: Generator) -> Self {
        GLetter { gen, inv: false }
    }

    pub fn neg(gen: Generator) -> Self {
        GLetter { gen, inv: true }
    }

    pub fn inverse(&self) -> Self {
        GLetter { gen: self.gen.clone(), inv: !self.inv }
    }

    pub fn shifted(&self, sh: &Shift) -> Self {
        GLetter { gen: self.gen.shifted(sh), inv: self.inv }
    }

    pub fn cancels(&self, other: &GLetter) -> bool {
        self.gen == other.gen && self.inv != other.inv
    }
}

/// Shift endomorphisms: `sh_α` on `Geo_L`, `sh^k` on `B•`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Shift {
    Prefix(Address),
    Index(u32),
}

impl Shift {
    pub fn identity_like(&self) -> bool {
        match self {
            Shift::Prefix(a) => a.is_empty(),
            Shift::Index(k) => *k == 0,
        }
    }

    /// `self ∘ inner`: first `inner`, then `self`.
    pub fn after(&self, inner: &Shift) -> Shift {
        match (self, inner) {
            (Shift::Prefix(a), Shift::Prefix(b)) => Shift::Prefix(a.concat(b)),
            (Shift::Index(j), Shift::Index(k)) => Shift::Index(j + k),
            _ => panic!("mixed shifts"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupWord(pub Vec<GLetter>);

impl GroupWord {
    pub fn empty() -> Self {
        GroupWord(Vec::new())
    }

    pub fn letter(l: GLetter) -> Self {
        GroupWord(vec![l])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[GLetter] {
        &self.0
    }

    pub fn inverse(&self) -> Self {
        GroupWord(self.0.iter().rev().map(GLetter::inverse).collect())
    }

    pub fn concat(&self, other: &GroupWord) -> Self {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        GroupWord(v)
    }

    pub fn shifted(&self, sh: &Shift) -> Self {
        GroupWord(self.0.iter().map(|l| l.shifted(sh)).collect())
    }

    pub fn free_reduce(&self) -> Self {
        self.free_reduce_traced().0
    }

    /// Reduced form plus the deletion positions that produce it, in order.
    pub fn free_reduce_traced(&self) -> (Self, Vec<usize>) {
        let mut out: Vec<GLetter> = Vec::with_capacity(self.0.len());
        let mut dels = Vec::new();
        for l in &self.0 {
            if out.last().is_some_and(|last| last.cancels(l)) {
                out.pop();
                dels.push(out.len());
            } else {
                out.push(l.clone());
            }
        }
        (GroupWord(out), dels)
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|w| !w[0].cancels(&w[1]))
    }

    pub fn generators(&self) -> BTreeSet<Generator> {
        self.0.iter().map(|l| l.gen.clone()).collect()
    }

    pub fn find(&self, pat: &[GLetter], from: usize) -> Option<usize> {
        if pat.is_empty() {
            return Some(from.min(self.0.len()));
        }
        (from..=self.0.len().saturating_sub(pat.len())).find(|&i| self.0[i..].starts_with(pat))
    }

    /// Read a positive-or-negative generator word of a family as a group word.
    pub fn from_generator_word(w: &GeneratorWord) -> Self {
        GroupWord(
            w.letters()
                .iter()
                .map(|l| GLetter { gen: Generator::Geo { rule: l.rule, address: l.address.clone() }, inv: l.sign == Sign::Neg })
                .collect(),
        )
    }

    /// The generator word with the same letters (Geo letters only).
    pub fn to_generator_word(&self) -> Option<GeneratorWord> {
        self.0
            .iter()
            .map(|l| match &l.gen {
                Generator::Geo { rule, address } => Some(OperatorLetter {
                    rule: *rule,
                    address: address.clone(),
                    sign: if l.inv { Sign::Neg } else { Sign::Pos },
                }),
                Generator::BDot { .. } => None,
            })
            .collect::<Option<Vec<_>>>()
            .map(GeneratorWord)
    }

    /// `rule_names` names Geo rules; B• letters print as `s2`, `a1^-1`.
    /// The empty word prints as `1`.
    pub fn render(&self, rule_names: &[String]) -> String {
        if self.0.is_empty() {
            return "1".into();
        }
        let mut s = String::new();
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                s.push(' ');
            }
            match &l.gen {
                Generator::Geo { rule, address } => {
                    let name = rule_names.get(*rule as usize).cloned().unwrap_or_else(|| format!("R{rule}"));
                    let _ = write!(s, "{name}{}{address}", if l.inv { '-' } else { '+' });
                }
                Generator::BDot { kind, index } => {
                    let _ = write!(s, "{}{index}", if *kind == BKind::S { 's' } else { 'a' });
                    if l.inv {
                        s.push_str("^-1");
                    }
                }
            }
        }
        s
    }

    /// Parse `S+e A-10` (Geo letters, with `rule_names`) or `s1 a2^-1` (B•).
    pub fn parse(text: &str, rule_names: &[String]) -> Result<Self> {
        let mut out = Vec::new();
        let mut offset = 0;
        for tok in text.split_whitespace() {
            offset = text[offset..].find(tok).map_or(offset, |i| offset + i);
            let bad = |m: &str| Error::Syntax { offset, message: format!("{m}: {tok:?}") };
            if tok == "1" || tok == "ε" {
                offset += tok.len();
                continue;
            }
            let body = tok.strip_suffix("^-1").unwrap_or(tok);
            let bdot = body.len() > 1 && body.starts_with(['s', 'a']) && body[1..].bytes().all(|b| b.is_ascii_digit());
            if let (false, Some(at)) = (bdot, tok.find(['+', '-'])) {
                let name = &tok[..at];
                let name = if name == "Σ" { "S" } else { name };
                let rule = rule_names.iter().position(|n| n == name).ok_or_else(|| bad("unknown rule"))?;
                let address = Address::parse(&tok[at + 1..]).map_err(|_| bad("bad address"))?;
                out.push(GLetter { gen: Generator::geo(rule, address), inv: tok.as_bytes()[at] == b'-' });
            } else {
                let (body, inv) = match tok.strip_suffix("^-1") {
                    Some(b) => (b, true),
                    None => (tok, false),
                };
                let kind = match body.chars().next() {
                    Some('s') => BKind::S,
                    Some('a') => BKind::A,
                    _ => return Err(bad("unknown letter")),
                };
                let index: u32 = body[1..].parse().ok().filter(|&i| i >= 1).ok_or_else(|| bad("bad index"))?;
                out.push(GLetter { gen: Generator::BDot { kind, index }, inv });
            }
            offset += tok.len();
        }
        Ok(GroupWord(out))
    }
}

/// Identifies one instance of a relation schema.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RelationId {
    /// `x y = y x` for incomparable addresses.
    Comm { x: Generator, y: Generator },
    /// Inheritance: letter `y` carried across `rule` at `alpha` along `var`, at depth `delta`.
    Heir { rule: u8, var: u32, alpha: Address, y: u8, delta: Address },
    /// Root critical relation number `base`, shifted to `alpha`.
    Crit { base: u8, alpha: Address },
    /// B• schema `schema` (0..7) at indices `(i, j)`.
    BDot { schema: u8, i: u32, j: u32 },
}

/// An instantiated relation `left = right`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Relation {
    pub id: RelationId,
    pub left: GroupWord,
    pub right: GroupWord,
}

impl Relation {
    /// The relator `left · right⁻¹`.
    pub fn relator(&self) -> GroupWord {
        self.left.concat(&self.right.inverse())
    }
}

/// A group given by relation schemas instantiated on demand.
pub trait GroupPresentation {
    fn instantiate(&self, id: &RelationId) -> Option<Relation>;

    /// Instances that can rewrite a word over `gens`.
    fn relations_touching(&self, gens: &BTreeSet<Generator>) -> Vec<Relation>;

    /// Names of the Geo rules, for rendering.
    fn rule_names(&self) -> Vec<String> {
        Vec::new()
    }

    fn describe(&self, id: &RelationId) -> String {
        format!("{id:?}")
    }
}

/// Algebra shared by concrete and symbolic words, so that the operations
/// of the paper can be written once.
pub trait WordAlgebra: Clone {
    fn unit() -> Self;
    fn lit(l: GLetter) -> Self;
    fn cat(&self, other: &Self) -> Self;
    fn sh(&self, s: &Shift) -> Self;
    fn inv(&self) -> Self;
}

impl WordAlgebra for GroupWord {
    fn unit() -> Self {
        GroupWord::empty()
    }
    fn lit(l: GLetter) -> Self {
        GroupWord::letter(l)
    }
    fn cat(&self, other: &Self) -> Self {
        self.concat(other)
    }
    fn sh(&self, s: &Shift) -> Self {
        self.shifted(s)
    }
    fn inv(&self) -> Self {
        self.inverse()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names() -> Vec<String> {
        vec!["S".into(), "A".into()]
    }

    #[test]
    fn parse_render_round_trip() {
        let w = GroupWord::parse("A+1 S+1 A-11 S+e", &names()).unwrap();
        assert_eq!(w.render(&names()), "A+1 S+1 A-11 S+e");
        let b = GroupWord::parse("s1 a2^-1 s3", &[]).unwrap();
        assert_eq!(b.render(&[]), "s1 a2^-1 s3");
        assert!(GroupWord::parse("q1", &[]).is_err());
        assert!(GroupWord::parse("s0", &[]).is_err());
        assert_eq!(GroupWord::parse("1", &[]).unwrap(), GroupWord::empty());
    }

    #[test]
    fn reduction_trace_replays() {
        let w = GroupWord::parse("s1 s2 s2^-1 s1^-1 a1", &[]).unwrap();
        let (r, dels) = w.free_reduce_traced();
        assert_eq!(r.render(&[]), "a1");
        assert_eq!(dels, vec![1, 0]);
        let mut cur = w.0.clone();
        for d in dels {
            assert!(cur[d].cancels(&cur[d + 1]));
            cur.drain(d..d + 2);
        }
        assert_eq!(GroupWord(cur), r);
    }

    #[test]
    fn shifts_compose() {
        let w = GroupWord::parse("s1 a3^-1", &[]).unwrap();
        assert_eq!(w.shifted(&Shift::Index(1)).render(&[]), "s2 a4^-1");
        let g = GroupWord::parse("S+0", &names()).unwrap();
        let sh = Shift::Prefix(Address::parse("1").unwrap()).after(&Shift::Prefix(Address::parse("0").unwrap()));
        assert_eq!(g.shifted(&sh).render(&names()), "S+100");
    }
}
