//! The group B• on generators `s_i`, `a_i` and its ALD operations.

use std::collections::BTreeSet;

use super::template::{Atom, Step, SymWord, Template};
use super::{GLetter, Generator, GroupPresentation, GroupWord, Relation, RelationId, Shift, WordAlgebra};

/// Number of relation schemas.
pub const SCHEMAS: u8 = 7;

const SCHEMA_TEXT: [&str; 7] = [
    "s_i s_j = s_j s_i",
    "s_i a_j = a_j s_i",
    "a_i a_{j-1} = a_j a_i",
    "a_i s_{j-1} = s_j a_i",
    "s_i s_{i+1} s_i = s_{i+1} s_i s_{i+1}",
    "s_{i+1} s_i a_{i+1} = a_i s_i",
    "s_i s_{i+1} a_i = a_{i+1} s_i",
];

fn s(i: u32) -> GLetter {
    GLetter::pos(Generator::s(i))
}

fn a(i: u32) -> GLetter {
    GLetter::pos(Generator::a(i))
}

fn word(ls: &[GLetter]) -> GroupWord {
    GroupWord(ls.to_vec())
}

/// Schemas 0–3 need `j ≥ i + 2`; schemas 4–6 only use `i`, and `j` is
/// recorded as `i + 1`.
pub fn schema_instance(schema: u8, i: u32, j: u32) -> Option<(GroupWord, GroupWord)> {
    if i < 1 {
        return None;
    }
    let (l, r) = match schema {
        0..=3 if j < i + 2 => return None,
        0 => (word(&[s(i), s(j)]), word(&[s(j), s(i)])),
        1 => (word(&[s(i), a(j)]), word(&[a(j), s(i)])),
        2 => (word(&[a(i), a(j - 1)]), word(&[a(j), a(i)])),
        3 => (word(&[a(i), s(j - 1)]), word(&[s(j), a(i)])),
        4..=6 if j != i + 1 => return None,
        4 => (word(&[s(i), s(i + 1), s(i)]), word(&[s(i + 1), s(i), s(i + 1)])),
        5 => (word(&[s(i + 1), s(i), a(i + 1)]), word(&[a(i), s(i)])),
        6 => (word(&[s(i), s(i + 1), a(i)]), word(&[a(i + 1), s(i)])),
        _ => return None,
    };
    Some((l, r))
}

/// All instances with indices at most `bound`.
pub fn instances_up_to(bound: u32) -> Vec<RelationId> {
    let mut out = Vec::new();
    for schema in 0..SCHEMAS {
        for i in 1..=bound {
            if schema <= 3 {
                for j in i + 2..=bound {
                    out.push(RelationId::BDot { schema, i, j });
                }
            } else if i < bound {
                out.push(RelationId::BDot { schema, i, j: i + 1 });
            }
        }
    }
    out
}

/// B• with relations instantiated around the letters of a word.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BDotPresentation {
    /// How far beyond the largest present index relations are instantiated.
    pub halo: u32,
}

impl Default for BDotPresentation {
    fn default() -> Self {
        BDotPresentation { halo: 2 }
    }
}

impl GroupPresentation for BDotPresentation {
    fn instantiate(&self, id: &RelationId) -> Option<Relation> {
        let RelationId::BDot { schema, i, j } = id else { return None };
        let (left, right) = schema_instance(*schema, *i, *j)?;
        Some(Relation { id: id.clone(), left, right })
    }

    fn relations_touching(&self, gens: &BTreeSet<Generator>) -> Vec<Relation> {
        let max = gens
            .iter()
            .filter_map(|g| match g {
                Generator::BDot { index, .. } => Some(*index),
                Generator::Geo { .. } => None,
            })
            .max();
        let Some(max) = max else { return Vec::new() };
        instances_up_to(max + self.halo)
            .into_iter()
            .filter_map(|id| self.instantiate(&id))
            .filter(|r| r.left.0.iter().chain(&r.right.0).any(|l| gens.contains(&l.gen)))
            .collect()
    }

    fn describe(&self, id: &RelationId) -> String {
        match id {
            RelationId::BDot { schema, i, j } if *schema <= 3 => {
                format!("{} (i={i}, j={j})", SCHEMA_TEXT[*schema as usize])
            }
            RelationId::BDot { schema, i, .. } => format!("{} (i={i})", SCHEMA_TEXT[*schema as usize]),
            other => format!("{other:?}"),
        }
    }
}

/// `sh`: every index incremented.
pub fn bdot_shift(w: &GroupWord) -> GroupWord {
    w.shifted(&Shift::Index(1))
}

fn sh() -> Shift {
    Shift::Index(1)
}

pub fn star<W: WordAlgebra>(x: &W, y: &W) -> W {
    x.cat(&y.sh(&sh())).cat(&W::lit(s(1))).cat(&x.sh(&sh()).inv())
}

pub fn circ<W: WordAlgebra>(x: &W, y: &W) -> W {
    x.cat(&y.sh(&sh())).cat(&W::lit(a(1)))
}

/// `x · sh(y) · s₁ · sh(x)⁻¹`, freely reduced.
pub fn bdot_star(x: &GroupWord, y: &GroupWord) -> GroupWord {
    star(x, y).free_reduce()
}

/// `x · sh(y) · a₁`, freely reduced.
pub fn bdot_circ(x: &GroupWord, y: &GroupWord) -> GroupWord {
    circ(x, y).free_reduce()
}

/// The three ALD laws as equalities of B• words.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AldLaw {
    /// `x*(y*z) = (x*y)*(x*z)`
    Ld,
    /// `x*(y∘z) = (x*y)∘(x*z)`
    Mixed,
    /// `(x∘y)*z = x*(y*z)`
    Assoc,
}

impl AldLaw {
    pub const ALL: [AldLaw; 3] = [AldLaw::Ld, AldLaw::Mixed, AldLaw::Assoc];

    pub fn name(self) -> &'static str {
        match self {
            AldLaw::Ld => "x*(y*z) = (x*y)*(x*z)",
            AldLaw::Mixed => "x*(y o z) = (x*y) o (x*z)",
            AldLaw::Assoc => "(x o y)*z = x*(y*z)",
        }
    }

    /// Both sides over arbitrary words.
    pub fn sides<W: WordAlgebra>(self, x: &W, y: &W, z: &W) -> (W, W) {
        match self {
            AldLaw::Ld => (star(x, &star(y, z)), star(&star(x, y), &star(x, z))),
            AldLaw::Mixed => (star(x, &circ(y, z)), circ(&star(x, y), &star(x, z))),
            AldLaw::Assoc => (star(&circ(x, y), z), star(x, &star(y, z))),
        }
    }

    /// A proof sketch valid for all `x, y, z`: letters are moved across
    /// shifted copies of the arguments, then a short local relation closes.
    pub fn template(self) -> Template {
        let [x, y, z] = [0, 1, 2].map(|v| SymWord::block(v, Shift::Index(0)));
        let (lhs, rhs) = self.sides(&x, &y, &z);
        let blk = |v: usize, k: u32, inv: bool| Atom::Block { var: v, shift: Shift::Index(k), inv };
        let (lhs_steps, rhs_steps) = match self {
            AldLaw::Ld => (
                vec![],
                vec![
                    Step::Cancel(blk(0, 1, true)),
                    Step::PassRight { lit: s(1), block: blk(2, 2, false), result: vec![blk(2, 2, false)] },
                    Step::PassLeft { block: blk(0, 2, true), lit: s(1), result: vec![blk(0, 2, true)] },
                    Step::Cancel(blk(0, 2, true)),
                    Step::Local { from: vec![s(1), s(2), s(1), s(2).inverse()], to: vec![s(2), s(1)] },
                    Step::PassRight { lit: s(1), block: blk(1, 2, true), result: vec![blk(1, 2, true)] },
                ],
            ),
            AldLaw::Mixed => (
                vec![],
                vec![
                    Step::Cancel(blk(0, 1, true)),
                    Step::PassRight { lit: s(1), block: blk(2, 2, false), result: vec![blk(2, 2, false)] },
                    Step::PassLeft { block: blk(0, 2, true), lit: a(1), result: vec![blk(0, 1, true)] },
                    Step::Local { from: vec![s(1), s(2), a(1)], to: vec![a(2), s(1)] },
                ],
            ),
            AldLaw::Assoc => (
                vec![
                    Step::PassRight { lit: a(1), block: blk(2, 1, false), result: vec![blk(2, 2, false)] },
                    Step::Local { from: vec![a(1), s(1), a(2).inverse()], to: vec![s(2), s(1)] },
                ],
                vec![Step::PassLeft { block: blk(1, 2, true), lit: s(1), result: vec![blk(1, 2, true)] }],
            ),
        };
        Template { name: self.name().to_string(), lhs, rhs, lhs_steps, rhs_steps }
    }
}

/// Every instance of the seven schemas with `i ≤ max_i`, `j ≤ max_j`.
pub fn relation_instances(max_i: u32, max_j: u32) -> Vec<Relation> {
    let p = BDotPresentation::default();
    let mut out = Vec::new();
    for schema in 0..SCHEMAS {
        for i in 1..=max_i {
            let js: Vec<u32> = if schema <= 3 { (i + 2..=max_j).collect() } else { vec![i + 1] };
            for j in js {
                if let Some(r) = p.instantiate(&RelationId::BDot { schema, i, j }) {
                    out.push(r);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::words_equal;

    fn w(s: &str) -> GroupWord {
        GroupWord::parse(s, &[]).unwrap()
    }

    #[test]
    fn operations_on_units() {
        assert_eq!(bdot_circ(&GroupWord::empty(), &GroupWord::empty()), w("a1"));
        assert_eq!(bdot_star(&GroupWord::empty(), &GroupWord::empty()), w("s1"));
        assert_eq!(bdot_shift(&w("s1 a3^-1")), w("s2 a4^-1"));
        assert_eq!(bdot_star(&w("s1"), &GroupWord::empty()), w("s1 s1 s2^-1"));
    }

    #[test]
    fn schema_examples() {
        let p = BDotPresentation::default();
        let r = p.instantiate(&RelationId::BDot { schema: 2, i: 1, j: 3 }).unwrap();
        assert_eq!((r.left, r.right), (w("a1 a2"), w("a3 a1")));
        assert!(p.instantiate(&RelationId::BDot { schema: 2, i: 1, j: 2 }).is_none());
        let r = p.instantiate(&RelationId::BDot { schema: 4, i: 2, j: 3 }).unwrap();
        assert_eq!((r.left, r.right), (w("s2 s3 s2"), w("s3 s2 s3")));
    }

    #[test]
    fn single_moves() {
        let p = BDotPresentation::default();
        for (u, v) in [("s1 s2 s1", "s2 s1 s2"), ("s2 s1 a2", "a1 s1")] {
            let c = words_equal(&p, &w(u), &w(v), 1).certificate().cloned().unwrap();
            assert_eq!(c.len(), 1);
            assert_eq!(c.replay(&p).unwrap(), w(v));
        }
    }
}
