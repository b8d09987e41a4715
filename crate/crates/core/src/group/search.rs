//! Bounded bidirectional search for equality certificates.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::sync::Arc;

use super::cert::{Certificate, Move};
use super::{Generator, GroupPresentation, GroupWord, Relation, RelationId};

/// Outcome of a bounded equality search. There is deliberately no
/// "not equal" verdict: running out of budget proves nothing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Equal(Certificate),
    Undecided(SearchStats),
}

impl Verdict {
    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            Verdict::Equal(c) => Some(c),
            Verdict::Undecided(_) => None,
        }
    }

    pub fn is_equal(&self) -> bool {
        matches!(self, Verdict::Equal(_))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub expanded: usize,
    pub visited: usize,
}

/// A rewriting form `from → to` of one relation.
#[derive(Debug, Clone)]
pub struct Form {
    pub id: RelationId,
    pub from: GroupWord,
    pub to: GroupWord,
}

/// Every rotation of `r` and `r⁻¹` cut as `s · t⁻¹` with `|s| ≥ |t|`,
/// plus the two plain readings of the relation.
pub fn forms(rel: &Relation) -> Vec<Form> {
    let r = rel.relator();
    let n = r.len();
    let mut out: Vec<Form> = Vec::new();
    let mut push = |from: GroupWord, to: GroupWord| {
        if !out.iter().any(|f| f.from == from && f.to == to) {
            out.push(Form { id: rel.id.clone(), from, to });
        }
    };
    push(rel.left.clone(), rel.right.clone());
    push(rel.right.clone(), rel.left.clone());
    for base in [r.clone(), r.inverse()] {
        for k in 0..n {
            let c: Vec<_> = base.0[k..].iter().chain(&base.0[..k]).cloned().collect();
            for cut in n.div_ceil(2)..=n {
                let from = GroupWord(c[..cut].to_vec());
                let to = GroupWord(c[cut..].to_vec()).inverse();
                push(from, to);
            }
        }
    }
    out
}

/// Relations and their forms, cached by generator set and relation id.
pub struct FormCache<'a> {
    pres: &'a dyn GroupPresentation,
    by_gens: HashMap<BTreeSet<Generator>, Arc<Vec<Form>>>,
}

impl<'a> FormCache<'a> {
    pub fn new(pres: &'a dyn GroupPresentation) -> Self {
        FormCache { pres, by_gens: HashMap::new() }
    }

    pub fn forms_for(&mut self, gens: BTreeSet<Generator>) -> Arc<Vec<Form>> {
        if let Some(f) = self.by_gens.get(&gens) {
            return f.clone();
        }
        let mut rels = self.pres.relations_touching(&gens);
        rels.sort();
        rels.dedup();
        let all: Vec<Form> = rels.iter().flat_map(forms).collect();
        let all = Arc::new(all);
        self.by_gens.insert(gens, all.clone());
        all
    }
}

struct Node {
    parent: Option<GroupWord>,
    moves: Vec<Move>,
}

/// Bidirectional breadth-first search over freely reduced words. `budget`
/// bounds the number of node expansions; a neighbour found in the other
/// side's visited set ends the search, so a single-move equality needs a
/// budget of 1.
pub fn words_equal(pres: &dyn GroupPresentation, u: &GroupWord, v: &GroupWord, budget: usize) -> Verdict {
    if u == v {
        return Verdict::Equal(Certificate::trivial(u.clone()));
    }
    let ru = u.free_reduce();
    let rv = v.free_reduce();
    let head = Certificate::reduction(u);
    let tail = Certificate::reduction(v).reversed().expect("reduction replays");
    let join = |mid: Certificate| -> Verdict {
        let cert = head.clone().then(mid).and_then(|c| c.then(tail.clone())).expect("search certificates chain");
        Verdict::Equal(cert)
    };
    if ru == rv {
        return join(Certificate::trivial(ru));
    }
    let mut cache = FormCache::new(pres);
    let mut sides: [HashMap<GroupWord, Node>; 2] = [HashMap::new(), HashMap::new()];
    let mut queues: [VecDeque<GroupWord>; 2] = [VecDeque::new(), VecDeque::new()];
    sides[0].insert(ru.clone(), Node { parent: None, moves: Vec::new() });
    sides[1].insert(rv.clone(), Node { parent: None, moves: Vec::new() });
    queues[0].push_back(ru.clone());
    queues[1].push_back(rv.clone());
    let mut stats = SearchStats { expanded: 0, visited: 2 };
    while stats.expanded < budget {
        let s = match (queues[0].is_empty(), queues[1].is_empty()) {
            (true, true) => break,
            (false, true) => 0,
            (true, false) => 1,
            _ if queues[0].len() <= queues[1].len() => 0,
            _ => 1,
        };
        let w = queues[s].pop_front().unwrap();
        stats.expanded += 1;
        for (next, moves) in neighbours(&mut cache, &w) {
            if sides[s].contains_key(&next) {
                continue;
            }
            stats.visited += 1;
            let meet = sides[1 - s].contains_key(&next);
            sides[s].insert(next.clone(), Node { parent: Some(w.clone()), moves });
            if meet {
                let a = path(&sides[s], &next);
                let b = path(&sides[1 - s], &next);
                let (fwd, bwd) = if s == 0 { (a, b) } else { (b, a) };
                let mid = fwd.then(bwd.reversed().expect("replays")).expect("paths meet");
                return join(mid);
            }
            queues[s].push_back(next);
        }
    }
    Verdict::Undecided(stats)
}

/// Certificate from the root of `side` to `w`.
fn path(side: &HashMap<GroupWord, Node>, w: &GroupWord) -> Certificate {
    let mut chunks = Vec::new();
    let mut cur = w.clone();
    loop {
        let node = &side[&cur];
        match &node.parent {
            Some(p) => {
                chunks.push(node.moves.clone());
                cur = p.clone();
            }
            None => break,
        }
    }
    Certificate { start: cur, moves: chunks.into_iter().rev().flatten().collect() }
}

/// One relation move followed by free reduction, for every form and position.
fn neighbours(cache: &mut FormCache<'_>, w: &GroupWord) -> Vec<(GroupWord, Vec<Move>)> {
    let forms = cache.forms_for(w.generators());
    let mut out = Vec::new();
    for f in forms.iter() {
        let mut from = 0;
        while let Some(p) = w.find(&f.from.0, from) {
            if f.from.is_empty() && p > w.len() {
                break;
            }
            let mut v = w.0[..p].to_vec();
            v.extend_from_slice(&f.to.0);
            v.extend_from_slice(&w.0[p + f.from.len()..]);
            let (red, dels) = GroupWord(v).free_reduce_traced();
            let mut moves =
                vec![Move::Relation { position: p, relation: f.id.clone(), from: f.from.clone(), to: f.to.clone() }];
            moves.extend(dels.into_iter().map(|d| Move::DeleteCancel { position: d }));
            out.push((red, moves));
            from = p + 1;
            if from > w.len() {
                break;
            }
        }
    }
    out
}
