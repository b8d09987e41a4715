//! Equality certificates: sequences of relation moves and free
//! insertions/cancellations, replayable against a presentation.

use serde_json::{json, Value};

use super::{GLetter, GroupPresentation, GroupWord, Relation, RelationId, Shift};
use crate::error::{Error, Result};

/// How a relation move uses its relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// `left → right`.
    Forward,
    /// `right → left`.
    Backward,
    /// Any other cyclic reading of the relator.
    Cyclic,
}

impl Direction {
    pub fn of(rel: &Relation, from: &GroupWord, to: &GroupWord) -> Direction {
        if *from == rel.left && *to == rel.right {
            Direction::Forward
        } else if *from == rel.right && *to == rel.left {
            Direction::Backward
        } else {
            Direction::Cyclic
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Direction::Forward => "forward",
            Direction::Backward => "backward",
            Direction::Cyclic => "cyclic",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Move {
    /// Replace the factor `from` at `position` by `to`, where
    /// `from · to⁻¹` is a cyclic permutation of the relator or its inverse.
    Relation { position: usize, relation: RelationId, from: GroupWord, to: GroupWord },
    /// Insert `letter letter⁻¹` before `position`.
    InsertCancel { position: usize, letter: GLetter },
    /// Delete the cancelling pair at `position`, `position + 1`.
    DeleteCancel { position: usize },
}

impl Move {
    pub fn position(&self) -> usize {
        match self {
            Move::Relation { position, .. } | Move::InsertCancel { position, .. } | Move::DeleteCancel { position } => {
                *position
            }
        }
    }

    fn offset(&self, by: usize) -> Move {
        match self {
            Move::Relation { position, relation, from, to } => Move::Relation {
                position: position + by,
                relation: relation.clone(),
                from: from.clone(),
                to: to.clone(),
            },
            Move::InsertCancel { position, letter } => Move::InsertCancel { position: position + by, letter: letter.clone() },
            Move::DeleteCancel { position } => Move::DeleteCancel { position: position + by },
        }
    }
}

/// `from · to⁻¹` is a rotation of the relator or of its inverse.
pub fn is_relation_form(rel: &Relation, from: &GroupWord, to: &GroupWord) -> bool {
    let c = from.concat(&to.inverse());
    let r = rel.relator();
    if c.len() != r.len() || c.is_empty() {
        return false;
    }
    let rotation_of = |r: &GroupWord| {
        let n = r.len();
        (0..n).any(|k| (0..n).all(|i| c.0[i] == r.0[(i + k) % n]))
    };
    rotation_of(&r) || rotation_of(&r.inverse())
}

/// Apply one move without consulting any presentation.
pub fn apply_move(w: &GroupWord, m: &Move) -> Result<GroupWord> {
    let bad = |msg: &str| Err(Error::ValidationFailure(format!("{msg} at position {}", m.position())));
    let mut v = w.0.clone();
    match m {
        Move::Relation { position, from, to, .. } => {
            let p = *position;
            if p + from.len() > v.len() || v[p..p + from.len()] != from.0[..] {
                return bad("factor not found");
            }
            v.splice(p..p + from.len(), to.0.iter().cloned());
        }
        Move::InsertCancel { position, letter } => {
            if *position > v.len() {
                return bad("insertion outside word");
            }
            v.splice(*position..*position, [letter.clone(), letter.inverse()]);
        }
        Move::DeleteCancel { position } => {
            let p = *position;
            if p + 1 >= v.len() || !v[p].cancels(&v[p + 1]) {
                return bad("no cancelling pair");
            }
            v.drain(p..p + 2);
        }
    }
    Ok(GroupWord(v))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub start: GroupWord,
    pub moves: Vec<Move>,
}

impl Certificate {
    pub fn trivial(start: GroupWord) -> Self {
        Certificate { start, moves: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    /// All intermediate words, `start` first; structural checks only.
    pub fn words(&self) -> Result<Vec<GroupWord>> {
        let mut out = vec![self.start.clone()];
        for m in &self.moves {
            let next = apply_move(out.last().unwrap(), m)?;
            out.push(next);
        }
        Ok(out)
    }

    pub fn end(&self) -> Result<GroupWord> {
        let mut w = self.start.clone();
        for m in &self.moves {
            w = apply_move(&w, m)?;
        }
        Ok(w)
    }

    /// Check every move against `pres`; returns the final word.
    pub fn replay(&self, pres: &dyn GroupPresentation) -> Result<GroupWord> {
        let mut w = self.start.clone();
        for (i, m) in self.moves.iter().enumerate() {
            if let Move::Relation { relation, from, to, .. } = m {
                let rel = pres
                    .instantiate(relation)
                    .ok_or_else(|| Error::ValidationFailure(format!("step {i}: unknown relation {relation:?}")))?;
                if !is_relation_form(&rel, from, to) {
                    return Err(Error::ValidationFailure(format!("step {i}: not a form of {}", pres.describe(relation))));
                }
            }
            w = apply_move(&w, m).map_err(|e| Error::ValidationFailure(format!("step {i}: {e}")))?;
        }
        Ok(w)
    }

    /// Replay and check the endpoint.
    pub fn proves(&self, pres: &dyn GroupPresentation, u: &GroupWord, v: &GroupWord) -> bool {
        self.start == *u && self.replay(pres).is_ok_and(|end| end == *v)
    }

    pub fn push(&mut self, m: Move) {
        self.moves.push(m)
    }

    /// `self` followed by `other`; `other` must start where `self` ends.
    pub fn then(mut self, other: Certificate) -> Result<Certificate> {
        let end = self.end()?;
        if end != other.start {
            return Err(Error::ValidationFailure("certificates do not chain".into()));
        }
        self.moves.extend(other.moves);
        Ok(self)
    }

    /// The certificate from the end word back to `start`.
    pub fn reversed(&self) -> Result<Certificate> {
        let words = self.words()?;
        let mut moves = Vec::with_capacity(self.moves.len());
        for (i, m) in self.moves.iter().enumerate().rev() {
            moves.push(match m {
                Move::Relation { position, relation, from, to } => Move::Relation {
                    position: *position,
                    relation: relation.clone(),
                    from: to.clone(),
                    to: from.clone(),
                },
                Move::InsertCancel { position, .. } => Move::DeleteCancel { position: *position },
                Move::DeleteCancel { position } => {
                    Move::InsertCancel { position: *position, letter: words[i].0[*position].clone() }
                }
            });
        }
        Ok(Certificate { start: words.last().unwrap().clone(), moves })
    }

    /// The image under a shift endomorphism.
    pub fn shifted(&self, sh: &Shift) -> Certificate {
        Certificate {
            start: self.start.shifted(sh),
            moves: self
                .moves
                .iter()
                .map(|m| match m {
                    Move::Relation { position, relation, from, to } => Move::Relation {
                        position: *position,
                        relation: shift_relation_id(relation, sh),
                        from: from.shifted(sh),
                        to: to.shifted(sh),
                    },
                    Move::InsertCancel { position, letter } => {
                        Move::InsertCancel { position: *position, letter: letter.shifted(sh) }
                    }
                    Move::DeleteCancel { position } => Move::DeleteCancel { position: *position },
                })
                .collect(),
        }
    }

    /// Certificate between the inverses of the endpoints.
    pub fn inverted(&self) -> Result<Certificate> {
        let words = self.words()?;
        let mut moves = Vec::with_capacity(self.moves.len());
        for (i, m) in self.moves.iter().enumerate() {
            let n = words[i].len();
            moves.push(match m {
                Move::Relation { position, relation, from, to } => Move::Relation {
                    position: n - position - from.len(),
                    relation: relation.clone(),
                    from: from.inverse(),
                    to: to.inverse(),
                },
                Move::InsertCancel { position, letter } => Move::InsertCancel { position: n - position, letter: letter.clone() },
                Move::DeleteCancel { position } => Move::DeleteCancel { position: n - position - 2 },
            });
        }
        Ok(Certificate { start: self.start.inverse(), moves })
    }

    /// The same moves performed inside `prefix · _ · suffix`.
    pub fn embedded(&self, prefix: &GroupWord, suffix: &GroupWord) -> Certificate {
        Certificate {
            start: prefix.concat(&self.start).concat(suffix),
            moves: self.moves.iter().map(|m| m.offset(prefix.len())).collect(),
        }
    }

    /// Certificate taking `w` to its free reduction.
    pub fn reduction(w: &GroupWord) -> Certificate {
        let (_, dels) = w.free_reduce_traced();
        Certificate { start: w.clone(), moves: dels.into_iter().map(|p| Move::DeleteCancel { position: p }).collect() }
    }

    pub fn relation_moves(&self) -> impl Iterator<Item = &RelationId> {
        self.moves.iter().filter_map(|m| match m {
            Move::Relation { relation, .. } => Some(relation),
            _ => None,
        })
    }

    pub fn to_json(&self, pres: &dyn GroupPresentation) -> Value {
        let names = pres.rule_names();
        let steps: Vec<Value> = self
            .moves
            .iter()
            .map(|m| match m {
                Move::Relation { position, relation, from, to } => {
                    let dir = pres.instantiate(relation).map_or("unknown", |r| Direction::of(&r, from, to).label());
                    json!({
                        "position": position,
                        "move": "relation",
                        "relation": pres.describe(relation),
                        "direction": dir,
                        "from": from.render(&names),
                        "to": to.render(&names),
                    })
                }
                Move::InsertCancel { position, letter } => json!({
                    "position": position,
                    "move": "insert",
                    "letter": GroupWord::letter(letter.clone()).render(&names),
                }),
                Move::DeleteCancel { position } => json!({"position": position, "move": "delete"}),
            })
            .collect();
        json!({
            "start": self.start.render(&names),
            "end": self.end().map(|w| w.render(&names)).unwrap_or_default(),
            "steps": steps,
        })
    }
}

pub fn shift_relation_id(id: &RelationId, sh: &Shift) -> RelationId {
    match (id, sh) {
        (RelationId::Comm { x, y }, _) => RelationId::Comm { x: x.shifted(sh), y: y.shifted(sh) },
        (RelationId::Heir { rule, var, alpha, y, delta }, Shift::Prefix(p)) => {
            RelationId::Heir { rule: *rule, var: *var, alpha: p.concat(alpha), y: *y, delta: delta.clone() }
        }
        (RelationId::Crit { base, alpha }, Shift::Prefix(p)) => RelationId::Crit { base: *base, alpha: p.concat(alpha) },
        (RelationId::BDot { schema, i, j }, Shift::Index(k)) => RelationId::BDot { schema: *schema, i: i + k, j: j + k },
        (other, _) => panic!("shift {sh:?} does not apply to {other:?}"),
    }
}
