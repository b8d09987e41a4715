//! The geometry group of a law family, presented by commutation,
//! inheritance and critical relations instantiated on demand.

use std::collections::{BTreeSet, HashMap};
use std::sync::Mutex;

use super::cert::{Certificate, Move};
use super::template::{Atom, Step, SymWord, Template};
use super::{GLetter, Generator, GroupPresentation, GroupWord, Relation, RelationId, Shift, WordAlgebra};
use crate::confluence::{commutation_instance, inheritance_instance, root_criticals, CriticalOutcome};
use crate::error::{Error, Result};
use crate::laws::LawFamily;
use crate::operator::OperatorLetter;
use crate::term::Address;
use crate::words::GeneratorWord;

/// A critical relation found at the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseCritical {
    pub a: OperatorLetter,
    pub b: OperatorLetter,
    pub left: GeneratorWord,
    pub right: GeneratorWord,
}

/// Variable occurrence used by inheritance relations.
#[derive(Debug, Clone)]
struct Occurrence {
    rule: usize,
    var: u32,
    addr: Address,
}

pub struct GeoPresentation {
    pub family: LawFamily,
    pub bases: Vec<BaseCritical>,
    occurrences: Vec<Occurrence>,
    cache: Mutex<HashMap<RelationId, Option<Relation>>>,
}

impl GeoPresentation {
    /// Searches root criticals with completions of length at most `max_crit`.
    pub fn new(family: &LawFamily, max_crit: usize) -> Self {
        Self::from_criticals(family, &root_criticals(family, max_crit))
    }

    pub fn from_criticals(family: &LawFamily, crits: &[CriticalOutcome]) -> Self {
        let bases = crits
            .iter()
            .filter_map(|c| {
                let (left, right) = c.completion.clone()?;
                Some(BaseCritical { a: c.a.clone(), b: c.b.clone(), left, right })
            })
            .collect();
        let mut occurrences = Vec::new();
        for (rule, law) in family.laws.iter().enumerate() {
            let mut vars = law.lhs.vars();
            vars.sort_unstable();
            for var in vars {
                let mut addrs = law.lhs.variable_occurrences(var);
                addrs.extend(law.rhs.variable_occurrences(var));
                addrs.sort();
                addrs.dedup();
                occurrences.extend(addrs.into_iter().map(|addr| Occurrence { rule, var, addr }));
            }
        }
        GeoPresentation { family: family.clone(), bases, occurrences, cache: Mutex::new(HashMap::new()) }
    }

    /// The built-in ALD family with its three root criticals.
    pub fn ald() -> Self {
        Self::new(&LawFamily::builtin("ALD").expect("builtin"), 6)
    }

    /// Index of the base critical for the overlap `(a, b)`.
    pub fn critical_index(&self, a: &OperatorLetter, b: &OperatorLetter) -> Option<u8> {
        self.bases.iter().position(|c| (&c.a, &c.b) == (a, b) || (&c.a, &c.b) == (b, a)).map(|k| k as u8)
    }

    fn build(&self, id: &RelationId) -> Option<Relation> {
        let (l, r) = match id {
            RelationId::Comm { x, y } => {
                let (Generator::Geo { rule: rx, address: ax }, Generator::Geo { rule: ry, address: ay }) = (x, y)
                else {
                    return None;
                };
                if !ax.incomparable(ay) {
                    return None;
                }
                commutation_instance(
                    &OperatorLetter::pos(*rx as usize, ax.clone()),
                    &OperatorLetter::pos(*ry as usize, ay.clone()),
                )
            }
            RelationId::Heir { rule, var, alpha, y, delta } => {
                if *rule as usize >= self.family.laws.len() || *y as usize >= self.family.laws.len() {
                    return None;
                }
                inheritance_instance(&self.family, *rule as usize, *var, alpha, *y as usize, delta)?
            }
            RelationId::Crit { base, alpha } => {
                let b = self.bases.get(*base as usize)?;
                (b.left.shift(alpha), b.right.shift(alpha))
            }
            RelationId::BDot { .. } => return None,
        };
        let lo = l.eval(&self.family);
        if lo.is_empty() || lo != r.eval(&self.family) {
            return None;
        }
        Some(Relation { id: id.clone(), left: GroupWord::from_generator_word(&l), right: GroupWord::from_generator_word(&r) })
    }
}

impl GroupPresentation for GeoPresentation {
    fn instantiate(&self, id: &RelationId) -> Option<Relation> {
        if let Some(hit) = self.cache.lock().unwrap().get(id) {
            return hit.clone();
        }
        let rel = self.build(id);
        self.cache.lock().unwrap().insert(id.clone(), rel.clone());
        rel
    }

    /// Commutations between present generators, inheritance relations in
    /// which a present generator is the carried letter, and shifted
    /// criticals containing a present generator.
    fn relations_touching(&self, gens: &BTreeSet<Generator>) -> Vec<Relation> {
        let geo: Vec<(u8, &Address)> = gens
            .iter()
            .filter_map(|g| match g {
                Generator::Geo { rule, address } => Some((*rule, address)),
                Generator::BDot { .. } => None,
            })
            .collect();
        let mut ids = BTreeSet::new();
        for (i, (rx, ax)) in geo.iter().enumerate() {
            for (ry, ay) in &geo[i + 1..] {
                if ax.incomparable(ay) {
                    ids.insert(RelationId::Comm { x: Generator::geo(*rx as usize, (*ax).clone()), y: Generator::geo(*ry as usize, (*ay).clone()) });
                }
            }
            let bits = ax.bits();
            for occ in &self.occurrences {
                let o = occ.addr.bits();
                for start in 0..=bits.len().saturating_sub(o.len()) {
                    if bits.len() >= o.len() && bits[start..start + o.len()] == *o {
                        ids.insert(RelationId::Heir {
                            rule: occ.rule as u8,
                            var: occ.var,
                            alpha: Address::from_bits(&bits[..start]),
                            y: *rx,
                            delta: Address::from_bits(&bits[start + o.len()..]),
                        });
                    }
                }
            }
            for (k, b) in self.bases.iter().enumerate() {
                for l in b.left.letters().iter().chain(b.right.letters()) {
                    if l.rule != *rx {
                        continue;
                    }
                    if let Some(alpha) = ax.strip_suffix(&l.address) {
                        ids.insert(RelationId::Crit { base: k as u8, alpha });
                    }
                }
            }
        }
        ids.into_iter().filter_map(|id| self.instantiate(&id)).collect()
    }

    fn rule_names(&self) -> Vec<String> {
        self.family.laws.iter().map(|l| l.name.clone()).collect()
    }

    fn describe(&self, id: &RelationId) -> String {
        let names = self.rule_names();
        let g = |g: &Generator| GroupWord::letter(GLetter::pos(g.clone())).render(&names);
        match id {
            RelationId::Comm { x, y } => format!("commutation {} {}", g(x), g(y)),
            RelationId::Heir { rule, var, alpha, y, delta } => format!(
                "inheritance {} x{var} at {alpha} carrying {} delta {delta}",
                names[*rule as usize], names[*y as usize]
            ),
            RelationId::Crit { base, alpha } => format!("critical {} at {alpha}", base + 1),
            RelationId::BDot { .. } => format!("{id:?}"),
        }
    }
}

fn letter(rule: usize, addr: &str) -> GLetter {
    GLetter::pos(Generator::geo(rule, Address::parse(addr).expect("address literal")))
}

const S: usize = 0;
const A: usize = 1;

fn sh(a: &str) -> Shift {
    Shift::Prefix(Address::parse(a).expect("address literal"))
}

/// `x · sh₁(y) · S∅ · sh₁(x)⁻¹` over any word algebra (ALD rule numbering).
pub fn star<W: WordAlgebra>(x: &W, y: &W) -> W {
    x.cat(&y.sh(&sh("1"))).cat(&W::lit(letter(S, "e"))).cat(&x.sh(&sh("1")).inv())
}

/// `x · sh₁(y) · A∅`.
pub fn circ<W: WordAlgebra>(x: &W, y: &W) -> W {
    x.cat(&y.sh(&sh("1"))).cat(&W::lit(letter(A, "e")))
}

pub fn geo_star(x: &GroupWord, y: &GroupWord) -> GroupWord {
    star(x, y).free_reduce()
}

pub fn geo_circ(x: &GroupWord, y: &GroupWord) -> GroupWord {
    circ(x, y).free_reduce()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoxOp {
    Star,
    Circ,
}

impl BoxOp {
    pub const ALL: [BoxOp; 2] = [BoxOp::Star, BoxOp::Circ];

    pub fn apply<W: WordAlgebra>(self, x: &W, y: &W) -> W {
        match self {
            BoxOp::Star => star(x, y),
            BoxOp::Circ => circ(x, y),
        }
    }

    pub fn token(self) -> &'static str {
        match self {
            BoxOp::Star => "*",
            BoxOp::Circ => "o",
        }
    }
}

/// The four identities showing that `*` and `∘` make the coset set of
/// `sh₀` an ALD-algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Identity {
    /// `(x*y) □ (x*z) = x*(y□z) · S₀`
    Obst1(BoxOp),
    /// `(x∘y)*z = x*(y*z) · A₀`
    Obst2,
    /// `(x·sh₀z) □ y = (x□y) · sh₀₀z`
    Quot1(BoxOp),
    /// `x □ (y·sh₀z) = (x□y) · sh₀₁z`
    Quot2(BoxOp),
}

impl Identity {
    pub const ALL: [Identity; 7] = [
        Identity::Obst1(BoxOp::Star),
        Identity::Obst1(BoxOp::Circ),
        Identity::Obst2,
        Identity::Quot1(BoxOp::Star),
        Identity::Quot1(BoxOp::Circ),
        Identity::Quot2(BoxOp::Star),
        Identity::Quot2(BoxOp::Circ),
    ];

    pub fn name(self) -> String {
        match self {
            Identity::Obst1(b) => format!("(x*y) {0} (x*z) = x*(y {0} z) . S0", b.token()),
            Identity::Obst2 => "(x o y)*z = x*(y*z) . A0".into(),
            Identity::Quot1(b) => format!("(x . sh0 z) {0} y = (x {0} y) . sh00 z", b.token()),
            Identity::Quot2(b) => format!("x {0} (y . sh0 z) = (x {0} y) . sh01 z", b.token()),
        }
    }

    pub fn sides<W: WordAlgebra>(self, x: &W, y: &W, z: &W) -> (W, W) {
        match self {
            Identity::Obst1(b) => {
                (b.apply(&star(x, y), &star(x, z)), star(x, &b.apply(y, z)).cat(&W::lit(letter(S, "0"))))
            }
            Identity::Obst2 => (star(&circ(x, y), z), star(x, &star(y, z)).cat(&W::lit(letter(A, "0")))),
            Identity::Quot1(b) => (b.apply(&x.cat(&z.sh(&sh("0"))), y), b.apply(x, y).cat(&z.sh(&sh("00")))),
            Identity::Quot2(b) => (b.apply(x, &y.cat(&z.sh(&sh("0")))), b.apply(x, y).cat(&z.sh(&sh("01")))),
        }
    }

    pub fn template(self) -> Template {
        let [x, y, z] = [0, 1, 2].map(|v| SymWord::block(v, sh("e")));
        let (lhs, rhs) = self.sides(&x, &y, &z);
        let blk = |v: usize, a: &str, inv: bool| Atom::Block { var: v, shift: sh(a), inv };
        let s = |a: &str| letter(S, a);
        let am = |a: &str| letter(A, a);
        let (lhs_steps, rhs_steps) = match self {
            Identity::Obst1(BoxOp::Star) => (
                vec![
                    Step::Cancel(blk(0, "1", true)),
                    Step::PassRight { lit: s("e"), block: blk(2, "11", false), result: vec![blk(2, "11", false)] },
                    Step::PassLeft { block: blk(0, "11", true), lit: s("e"), result: vec![blk(0, "11", true)] },
                    Step::Cancel(blk(0, "11", true)),
                    Step::Local { from: vec![s("e"), s("1"), s("e"), s("1").inverse()], to: vec![s("1"), s("e"), s("0")] },
                ],
                vec![
                    Step::PassLeft { block: blk(0, "1", true), lit: s("0"), result: vec![blk(0, "1", true)] },
                    Step::PassLeft { block: blk(1, "11", true), lit: s("e"), result: vec![blk(1, "11", true)] },
                    Step::PassLeft { block: blk(1, "11", true), lit: s("0"), result: vec![blk(1, "11", true)] },
                ],
            ),
            Identity::Obst1(BoxOp::Circ) => (
                vec![
                    Step::Cancel(blk(0, "1", true)),
                    Step::PassRight { lit: s("e"), block: blk(2, "11", false), result: vec![blk(2, "11", false)] },
                    Step::PassLeft { block: blk(0, "11", true), lit: am("e"), result: vec![blk(0, "1", true)] },
                    Step::Local { from: vec![s("e"), s("1"), am("e")], to: vec![am("1"), s("e"), s("0")] },
                ],
                vec![Step::PassLeft { block: blk(0, "1", true), lit: s("0"), result: vec![blk(0, "1", true)] }],
            ),
            Identity::Obst2 => (
                vec![
                    Step::PassRight { lit: am("e"), block: blk(2, "1", false), result: vec![blk(2, "11", false)] },
                    Step::Local { from: vec![am("e"), s("e"), am("1").inverse()], to: vec![s("1"), s("e"), am("0")] },
                ],
                vec![
                    Step::PassLeft { block: blk(0, "1", true), lit: am("0"), result: vec![blk(0, "1", true)] },
                    Step::PassLeft { block: blk(1, "11", true), lit: s("e"), result: vec![blk(1, "11", true)] },
                    Step::PassLeft { block: blk(1, "11", true), lit: am("0"), result: vec![blk(1, "11", true)] },
                ],
            ),
            Identity::Quot1(BoxOp::Circ) => (
                vec![
                    Step::Swap(blk(2, "0", false), blk(1, "1", false)),
                    Step::PassLeft { block: blk(2, "0", false), lit: am("e"), result: vec![blk(2, "00", false)] },
                ],
                vec![],
            ),
            Identity::Quot1(BoxOp::Star) => (
                vec![
                    Step::Swap(blk(2, "0", false), blk(1, "1", false)),
                    Step::PassLeft {
                        block: blk(2, "0", false),
                        lit: s("e"),
                        result: vec![blk(2, "00", false), blk(2, "10", false)],
                    },
                    Step::Cancel(blk(2, "10", false)),
                ],
                vec![Step::Swap(blk(0, "1", true), blk(2, "00", false))],
            ),
            Identity::Quot2(BoxOp::Star) => (
                vec![Step::PassLeft { block: blk(2, "10", false), lit: s("e"), result: vec![blk(2, "01", false)] }],
                vec![Step::Swap(blk(0, "1", true), blk(2, "01", false))],
            ),
            Identity::Quot2(BoxOp::Circ) => (
                vec![Step::PassLeft { block: blk(2, "10", false), lit: am("e"), result: vec![blk(2, "01", false)] }],
                vec![],
            ),
        };
        Template { name: self.name(), lhs, rhs, lhs_steps, rhs_steps }
    }
}

/// `X_{1^i 0 α} = A_{1^{i-1}} ⋯ A_∅ · X_{0 1^i α} · A_∅⁻¹ ⋯ A_{1^{i-1}}⁻¹`,
/// one inheritance move per level (ALD rule numbering).
pub fn normal_closure_identity(pres: &GeoPresentation, i: usize, rule: usize, alpha: &Address) -> Result<Certificate> {
    if i == 0 {
        return Err(Error::ValidationFailure("normal closure identity needs i >= 1".into()));
    }
    let ones = |k: usize| Address::from_bits(&vec![1; k]);
    let x = |a: Address| GLetter::pos(Generator::geo(rule, a));
    let a_at = |a: Address| GLetter::pos(Generator::geo(A, a));
    let start_addr = ones(i).concat(&Address::from_bits(&[0])).concat(alpha);
    let mut cert = Certificate::trivial(GroupWord::letter(x(start_addr)));
    for step in 0..i {
        let k = i - step;
        let tail = ones(step).concat(alpha);
        let pre = ones(k - 1);
        let from = GroupWord::letter(x(pre.concat(&Address::parse("10").unwrap()).concat(&tail)));
        let to = GroupWord(vec![
            a_at(pre.clone()),
            x(pre.concat(&Address::parse("01").unwrap()).concat(&tail)),
            a_at(pre.clone()).inverse(),
        ]);
        let id = RelationId::Heir { rule: A as u8, var: 2, alpha: pre, y: rule as u8, delta: tail };
        cert.push(Move::Relation { position: step, relation: id, from, to });
    }
    cert.replay(pres)?;
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names() -> Vec<String> {
        vec!["S".into(), "A".into()]
    }

    #[test]
    fn operations_on_units() {
        let e = GroupWord::empty();
        assert_eq!(geo_circ(&e, &e).render(&names()), "A+e");
        assert_eq!(geo_star(&e, &e).render(&names()), "S+e");
    }

    #[test]
    fn templates_close_symbolically() {
        for id in Identity::ALL {
            id.template().check().unwrap();
        }
    }
}
