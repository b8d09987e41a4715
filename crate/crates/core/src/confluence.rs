//! Confluence relations of a law family.
//!
//! Commutation and inheritance relations come from schemas; the remaining
//! overlaps are closed by a bounded breadth-first search for common
//! extensions of two operators ([`critical_completion`]).

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::time::Instant;

use serde_json::{json, Value};

use crate::laws::{inner_nodes, LawFamily};
use crate::operator::{OperatorLetter, PartialOperator, Sign};
use crate::term::{Address, Pattern, Term};
use crate::unify::mgu;
use crate::words::{apply_letter, GeneratorWord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RelationKind {
    Commutation,
    Inheritance,
    Critical,
}

impl fmt::Display for RelationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RelationKind::Commutation => "commutation",
            RelationKind::Inheritance => "inheritance",
            RelationKind::Critical => "critical",
        })
    }
}

/// Which schema instance or search produced a relation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Provenance {
    Commutation,
    /// Rule `rule` moved across the occurrences of variable `var`.
    Inheritance { rule: u8, var: u32 },
    /// Completion of the pair `(a, b)`, possibly shifted.
    Critical { a: OperatorLetter, b: OperatorLetter },
}

impl Provenance {
    pub fn render(&self, family: &LawFamily) -> String {
        match self {
            Provenance::Commutation => "commutation".into(),
            Provenance::Inheritance { rule, var } => {
                format!("inheritance {} x{var}", family.laws[*rule as usize].name)
            }
            Provenance::Critical { a, b } => {
                format!("critical {} / {}", a.render(family), b.render(family))
            }
        }
    }
}

/// `left = right` in the geometry monoid, checked on construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RelationPair {
    pub left: GeneratorWord,
    pub right: GeneratorWord,
    pub kind: RelationKind,
    pub provenance: Provenance,
}

impl RelationPair {
    /// `None` unless both sides evaluate to the same nonempty operator.
    pub fn verified(
        family: &LawFamily,
        left: GeneratorWord,
        right: GeneratorWord,
        kind: RelationKind,
        provenance: Provenance,
    ) -> Option<Self> {
        let l = left.eval(family);
        (!l.is_empty() && l == right.eval(family)).then_some(RelationPair { left, right, kind, provenance })
    }

    pub fn holds(&self, family: &LawFamily) -> bool {
        let l = self.left.eval(family);
        !l.is_empty() && l == self.right.eval(family)
    }

    pub fn mirrored(&self) -> Self {
        RelationPair { left: self.right.clone(), right: self.left.clone(), ..self.clone() }
    }

    pub fn shifted(&self, a: &Address) -> Self {
        RelationPair { left: self.left.shift(a), right: self.right.shift(a), ..self.clone() }
    }

    pub fn letters(&self) -> impl Iterator<Item = &OperatorLetter> {
        self.left.letters().iter().chain(self.right.letters())
    }

    pub fn render(&self, family: &LawFamily) -> String {
        format!("{} = {}", self.left.render(family), self.right.render(family))
    }

    pub fn to_json(&self, family: &LawFamily) -> Value {
        json!({
            "kind": self.kind.to_string(),
            "left": self.left.render(family),
            "right": self.right.render(family),
            "provenance": self.provenance.render(family),
        })
    }

    /// Key identifying a relation and its mirror.
    fn unordered_key(&self) -> (GeneratorWord, GeneratorWord) {
        if self.left <= self.right {
            (self.left.clone(), self.right.clone())
        } else {
            (self.right.clone(), self.left.clone())
        }
    }
}

/// `X_a Y_b = Y_b X_a` (unverified).
pub fn commutation_instance(x: &OperatorLetter, y: &OperatorLetter) -> (GeneratorWord, GeneratorWord) {
    (GeneratorWord(vec![x.clone(), y.clone()]), GeneratorWord(vec![y.clone(), x.clone()]))
}

/// `Y_{αβ₁δ}…Y_{αβₚδ} · L_α = L_α · Y_{αγ₁δ}…Y_{αγ_qδ}` for the occurrences
/// β of `var` in the left side of `rule` and γ in its right side.
pub fn inheritance_instance(
    family: &LawFamily,
    rule: usize,
    var: u32,
    alpha: &Address,
    y: usize,
    delta: &Address,
) -> Option<(GeneratorWord, GeneratorWord)> {
    let law = &family.laws[rule];
    let lhs = law.lhs.variable_occurrences(var);
    let rhs = law.rhs.variable_occurrences(var);
    if lhs.is_empty() || rhs.is_empty() {
        return None;
    }
    let l = OperatorLetter::pos(rule, alpha.clone());
    let ys = |occ: &[Address]| -> Vec<OperatorLetter> {
        occ.iter().map(|b| OperatorLetter::pos(y, alpha.concat(b).concat(delta))).collect()
    };
    let mut left = ys(&lhs);
    left.push(l.clone());
    let mut right = vec![l];
    right.extend(ys(&rhs));
    Some((GeneratorWord(left), GeneratorWord(right)))
}

pub fn commutation_relations(family: &LawFamily, max_addr_len: usize) -> Vec<RelationPair> {
    let addrs = Address::all_up_to(max_addr_len);
    let rules = family.laws.len();
    let mut out = Vec::new();
    for (i, a) in addrs.iter().enumerate() {
        for b in &addrs[i + 1..] {
            if !a.incomparable(b) {
                continue;
            }
            for x in 0..rules {
                for y in 0..rules {
                    let (l, r) = commutation_instance(&OperatorLetter::pos(x, a.clone()), &OperatorLetter::pos(y, b.clone()));
                    if let Some(rel) = RelationPair::verified(family, l, r, RelationKind::Commutation, Provenance::Commutation) {
                        out.push(rel);
                    }
                }
            }
        }
    }
    out
}

pub fn inheritance_relations(family: &LawFamily, max_addr_len: usize, max_delta_len: usize) -> Vec<RelationPair> {
    let mut out = Vec::new();
    for (rule, law) in family.laws.iter().enumerate() {
        let mut vars = law.lhs.vars();
        vars.sort_unstable();
        for alpha in Address::all_up_to(max_addr_len) {
            for &var in &vars {
                for y in 0..family.laws.len() {
                    for delta in Address::all_up_to(max_delta_len) {
                        let Some((l, r)) = inheritance_instance(family, rule, var, &alpha, y, &delta) else {
                            continue;
                        };
                        if let Some(rel) = RelationPair::verified(
                            family,
                            l,
                            r,
                            RelationKind::Inheritance,
                            Provenance::Inheritance { rule: rule as u8, var },
                        ) {
                            out.push(rel);
                        }
                    }
                }
            }
        }
    }
    out
}

/// Counters reported by the bounded searches.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub expanded: usize,
    pub seeds_left: usize,
    pub seeds_right: usize,
    pub depth_left: usize,
    pub depth_right: usize,
    pub millis: u128,
}

/// A common extension `start_a · u = start_b · v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Completion {
    pub u: GeneratorWord,
    pub v: GeneratorWord,
}

struct Side {
    seen: HashMap<PartialOperator, GeneratorWord>,
    frontier: Vec<(GeneratorWord, PartialOperator)>,
    depth: usize,
}

/// Positive letters whose left side fits the image of `op` at an inner node
/// without instantiating any of its variables (symbol-variables may
/// specialise). These are the rewrite steps available on the overlap term.
fn candidate_letters(family: &LawFamily, op: &PartialOperator) -> Vec<OperatorLetter> {
    let Some(seed) = op.seed() else { return Vec::new() };
    let mut out = Vec::new();
    for a in seed.img.inner_addresses() {
        let sub = seed.img.subterm(&a).expect("inner address");
        for (rule, law) in family.laws.iter().enumerate() {
            if rewrites_without_narrowing(&law.lhs, sub) {
                out.push(OperatorLetter::pos(rule, a.clone()));
            }
        }
    }
    out.sort();
    out
}

fn rewrites_without_narrowing(lhs: &Pattern, sub: &Pattern) -> bool {
    let (sub, lhs) = crate::unify::rename_apart(sub, lhs);
    let Some(s) = mgu(&sub, &lhs) else { return false };
    let vars = sub.vars();
    let mut images = HashSet::new();
    vars.iter().all(|v| match s.var_map.get(v) {
        None => images.insert(*v),
        Some(Pattern::Var(w)) => images.insert(*w),
        Some(_) => false,
    })
}

fn compatible(dom: &Pattern, other: &Pattern) -> bool {
    let (p, q) = crate::unify::rename_apart(dom, other);
    mgu(&p, &q).is_some()
}

/// `op` restricted to the instances of `dom ∧ other` (None if disjoint).
fn restrict(op: &PartialOperator, other: &Pattern) -> Option<PartialOperator> {
    let seed = op.seed()?;
    let dv = seed.dom.max_var().max(seed.img.max_var());
    let ds = seed.dom.max_sym_var().max(seed.img.max_sym_var());
    let q = other.map_vars(&|v| v + dv).map_sym_vars(&|k| k + ds);
    let s = mgu(&seed.dom, &q)?;
    Some(PartialOperator::seeded(
        crate::unify::apply_subst(&seed.dom, &s),
        crate::unify::apply_subst(&seed.img, &s),
    ))
}

/// Breadth-first search for positive `u`, `v` with `|u|, |v| ≤ max_ext` and
/// `eval(start_a·u) = eval(start_b·v) ≠ ∅`.
///
/// Both sides start from the overlap of the two domains and only take
/// rewrite steps that do not narrow it further; every meeting is then
/// re-checked on the unrestricted words. The result minimises `|u| + |v|`,
/// then `|u|`, then the words lexicographically.
pub fn common_extension(
    family: &LawFamily,
    start_a: &GeneratorWord,
    start_b: &GeneratorWord,
    max_ext: usize,
) -> (Option<Completion>, SearchStats) {
    let clock = Instant::now();
    let mut stats = SearchStats::default();
    let fa = start_a.eval(family);
    let fb = start_b.eval(family);
    let (Some(sa), Some(sb)) = (fa.seed(), fb.seed()) else {
        return (None, stats);
    };
    let (Some(ra), Some(rb)) = (restrict(&fa, &sb.dom), restrict(&fb, &sa.dom)) else {
        return (None, stats);
    };
    let mut elementary: HashMap<OperatorLetter, PartialOperator> = HashMap::new();
    let mut sides = [
        Side { seen: HashMap::new(), frontier: vec![], depth: 0 },
        Side { seen: HashMap::new(), frontier: vec![], depth: 0 },
    ];
    for (side, op) in sides.iter_mut().zip([ra, rb]) {
        side.seen.insert(op.clone(), GeneratorWord::empty());
        side.frontier.push((GeneratorWord::empty(), op));
    }
    type Key = (usize, usize, GeneratorWord, GeneratorWord);
    let mut best: Option<Key> = None;
    let mut rejected = HashSet::new();
    let mut consider = |best: &mut Option<Key>, u: &GeneratorWord, v: &GeneratorWord, elem: &mut HashMap<OperatorLetter, PartialOperator>| {
        let key = (u.len() + v.len(), u.len(), u.clone(), v.clone());
        if best.as_ref().is_some_and(|b| key >= *b) || rejected.contains(&key) {
            return;
        }
        let extend = |f: &PartialOperator, w: &GeneratorWord, elem: &mut HashMap<OperatorLetter, PartialOperator>| {
            w.letters().iter().fold(f.clone(), |acc, l| {
                let e = elem.entry(l.clone()).or_insert_with(|| PartialOperator::elementary(family, l));
                acc.compose(e)
            })
        };
        let left = extend(&fa, u, elem);
        if !left.is_empty() && left == extend(&fb, v, elem) {
            *best = Some(key);
        } else {
            rejected.insert(key);
        }
    };
    let first = sides[0].frontier[0].1.clone();
    if sides[1].seen.contains_key(&first) {
        consider(&mut best, &GeneratorWord::empty(), &GeneratorWord::empty(), &mut elementary);
    }
    loop {
        let (ka, kb) = (sides[0].depth, sides[1].depth);
        // every meeting of total ≤ min(ka, kb) has been seen
        if let Some(b) = &best {
            if b.0 <= ka.min(kb) {
                break;
            }
        }
        let open = |s: &Side| s.depth < max_ext && !s.frontier.is_empty();
        let which = match (open(&sides[0]), open(&sides[1])) {
            (false, false) => break,
            (true, false) => 0,
            (false, true) => 1,
            (true, true) => usize::from(kb < ka),
        };
        let side = &mut sides[which];
        let mut next = Vec::new();
        for (w, op) in std::mem::take(&mut side.frontier) {
            stats.expanded += 1;
            for l in candidate_letters(family, &op) {
                let e = elementary.entry(l.clone()).or_insert_with(|| PartialOperator::elementary(family, &l));
                let g = op.compose(e);
                if g.is_empty() || side.seen.contains_key(&g) {
                    continue;
                }
                let mut w2 = w.clone();
                w2.push(l);
                side.seen.insert(g.clone(), w2.clone());
                next.push((w2, g));
            }
        }
        side.depth += 1;
        side.frontier = next;
        let (mine, other) = if which == 0 {
            let (a, b) = sides.split_at(1);
            (&a[0], &b[0])
        } else {
            let (a, b) = sides.split_at(1);
            (&b[0], &a[0])
        };
        let mut meetings: Vec<(GeneratorWord, GeneratorWord)> = mine
            .frontier
            .iter()
            .filter_map(|(w, g)| other.seen.get(g).map(|wo| if which == 0 { (w.clone(), wo.clone()) } else { (wo.clone(), w.clone()) }))
            .collect();
        meetings.sort_by_key(|(u, v)| (u.len() + v.len(), u.len(), u.clone(), v.clone()));
        for (u, v) in meetings {
            consider(&mut best, &u, &v, &mut elementary);
        }
    }
    stats.seeds_left = sides[0].seen.len();
    stats.seeds_right = sides[1].seen.len();
    stats.depth_left = sides[0].depth;
    stats.depth_right = sides[1].depth;
    stats.millis = clock.elapsed().as_millis();
    (best.map(|(_, _, u, v)| Completion { u, v }), stats)
}

/// Shortest positive completion of the overlap of `a` and `b`, as the pair
/// of words `(a·u, b·v)`, with both sides at most `max_len` letters long.
pub fn critical_completion(
    family: &LawFamily,
    a: &OperatorLetter,
    b: &OperatorLetter,
    max_len: usize,
) -> (Option<(GeneratorWord, GeneratorWord)>, SearchStats) {
    if max_len == 0 {
        return (None, SearchStats::default());
    }
    let wa = GeneratorWord(vec![a.clone()]);
    let wb = GeneratorWord(vec![b.clone()]);
    let (c, stats) = common_extension(family, &wa, &wb, max_len - 1);
    (c.map(|c| (wa.concat(&c.u), wb.concat(&c.v))), stats)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bounds {
    pub max_addr: usize,
    pub max_delta: usize,
    pub max_crit: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { max_addr: 2, max_delta: 1, max_crit: 6 }
    }
}

/// A root-level overlap and its completion, if found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriticalOutcome {
    pub a: OperatorLetter,
    pub b: OperatorLetter,
    pub completion: Option<(GeneratorWord, GeneratorWord)>,
    pub stats: SearchStats,
}

/// Pairs `(X_∅, Y_β)` where `β` is an inner node of X's left side — the
/// overlaps not covered by the schemas. Each unordered pair appears once.
pub fn root_overlaps(family: &LawFamily) -> Vec<(OperatorLetter, OperatorLetter)> {
    let mut out: Vec<(OperatorLetter, OperatorLetter)> = Vec::new();
    for (x, law) in family.laws.iter().enumerate() {
        for beta in inner_nodes(&law.lhs) {
            for y in 0..family.laws.len() {
                if beta.is_empty() && y == x {
                    continue;
                }
                let a = OperatorLetter::pos(x, Address::root());
                let b = OperatorLetter::pos(y, beta.clone());
                let dup = out.iter().any(|(p, q)| (p, q) == (&b, &a));
                if !dup {
                    out.push((a, b));
                }
            }
        }
    }
    out
}

pub fn root_criticals(family: &LawFamily, max_len: usize) -> Vec<CriticalOutcome> {
    root_overlaps(family)
        .into_iter()
        .map(|(a, b)| {
            let (completion, stats) = critical_completion(family, &a, &b, max_len);
            CriticalOutcome { a, b, completion, stats }
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct Presentation {
    pub family: LawFamily,
    pub bounds: Bounds,
    pub alphabet: Vec<OperatorLetter>,
    pub relations: Vec<RelationPair>,
    /// Root-level overlap searches, including the ones that failed.
    pub criticals: Vec<CriticalOutcome>,
}

impl Presentation {
    pub fn count(&self, kind: RelationKind) -> usize {
        self.relations.iter().filter(|r| r.kind == kind).count()
    }

    /// Critical relations found at the root, as `(a·u, b·v)`.
    pub fn base_criticals(&self) -> Vec<RelationPair> {
        self.criticals
            .iter()
            .filter_map(|c| {
                let (l, r) = c.completion.clone()?;
                Some(RelationPair {
                    left: l,
                    right: r,
                    kind: RelationKind::Critical,
                    provenance: Provenance::Critical { a: c.a.clone(), b: c.b.clone() },
                })
            })
            .collect()
    }
}

pub fn assemble_presentation(family: &LawFamily, bounds: Bounds) -> Presentation {
    let mut relations = commutation_relations(family, bounds.max_addr);
    relations.extend(inheritance_relations(family, bounds.max_addr, bounds.max_delta));
    let criticals = root_criticals(family, bounds.max_crit);
    let fits = |r: &RelationPair| r.letters().all(|l| l.address.len() <= bounds.max_addr);
    for c in &criticals {
        let Some((l, r)) = &c.completion else { continue };
        for alpha in Address::all_up_to(bounds.max_addr) {
            let rel = RelationPair {
                left: l.shift(&alpha),
                right: r.shift(&alpha),
                kind: RelationKind::Critical,
                provenance: Provenance::Critical { a: c.a.clone(), b: c.b.clone() },
            };
            if fits(&rel) {
                relations.push(rel);
            }
        }
    }
    let mut seen = HashSet::new();
    relations.retain(|r| fits(r) && seen.insert(r.unordered_key()));
    let mut alphabet = Vec::new();
    for a in Address::all_up_to(bounds.max_addr) {
        for rule in 0..family.laws.len() {
            alphabet.push(OperatorLetter::pos(rule, a.clone()));
        }
    }
    Presentation { family: family.clone(), bounds, alphabet, relations, criticals }
}

/// How a pair of letters is resolved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PairStatus {
    /// The same letter twice.
    Trivial,
    /// No term admits both letters.
    Vacuous,
    Commutation,
    Inheritance { var: u32 },
    Critical { left: GeneratorWord, right: GeneratorWord },
    Uncovered,
}

impl PairStatus {
    pub fn covered(&self) -> bool {
        !matches!(self, PairStatus::Uncovered)
    }

    pub fn label(&self) -> &'static str {
        match self {
            PairStatus::Trivial => "trivial",
            PairStatus::Vacuous => "vacuous",
            PairStatus::Commutation => "commutation",
            PairStatus::Inheritance { .. } => "inheritance",
            PairStatus::Critical { .. } => "critical",
            PairStatus::Uncovered => "uncovered",
        }
    }
}

#[derive(Debug, Clone)]
pub struct PairRow {
    pub a: OperatorLetter,
    pub b: OperatorLetter,
    pub status: PairStatus,
}

#[derive(Debug, Clone)]
pub struct ConfluenceReport {
    pub rows: Vec<PairRow>,
}

impl ConfluenceReport {
    pub fn uncovered(&self) -> Vec<&PairRow> {
        self.rows.iter().filter(|r| !r.status.covered()).collect()
    }

    pub fn all_covered(&self) -> bool {
        self.rows.iter().all(|r| r.status.covered())
    }
}

/// Classify every unordered pair of positive letters with addresses of
/// length at most `max_addr`. Pairs are normalised to the shallower
/// address, so each overlap shape is searched once.
pub fn local_confluence_report(family: &LawFamily, max_addr: usize, max_crit: usize) -> ConfluenceReport {
    let letters: Vec<OperatorLetter> = (0..family.laws.len())
        .flat_map(|r| Address::all_up_to(max_addr).into_iter().map(move |a| OperatorLetter::pos(r, a)))
        .collect();
    let mut cache: BTreeMap<(OperatorLetter, OperatorLetter), PairStatus> = BTreeMap::new();
    let mut rows = Vec::new();
    for (i, a) in letters.iter().enumerate() {
        for b in &letters[i..] {
            let status = classify_pair(family, a, b, max_crit, &mut cache);
            rows.push(PairRow { a: a.clone(), b: b.clone(), status });
        }
    }
    ConfluenceReport { rows }
}

fn classify_pair(
    family: &LawFamily,
    a: &OperatorLetter,
    b: &OperatorLetter,
    max_crit: usize,
    cache: &mut BTreeMap<(OperatorLetter, OperatorLetter), PairStatus>,
) -> PairStatus {
    if a == b {
        return PairStatus::Trivial;
    }
    if a.address.incomparable(&b.address) {
        return PairStatus::Commutation;
    }
    // put the shallower letter first, then strip the common prefix
    let (a, b) = if a.address.len() <= b.address.len() { (a, b) } else { (b, a) };
    let beta = b.address.strip_prefix(&a.address).expect("comparable");
    let a0 = OperatorLetter::pos(a.rule as usize, Address::root());
    let b0 = OperatorLetter::pos(b.rule as usize, beta.clone());
    let key = if beta.is_empty() && b0 < a0 { (b0.clone(), a0.clone()) } else { (a0.clone(), b0.clone()) };
    if let Some(s) = cache.get(&key) {
        return s.clone();
    }
    let law = &family.laws[a.rule as usize];
    let status = (|| {
        let fa = PartialOperator::elementary(family, &a0);
        let fb = PartialOperator::elementary(family, &b0);
        if !compatible(&fa.seed().unwrap().dom, &fb.seed().unwrap().dom) {
            return PairStatus::Vacuous;
        }
        if let Some(var) = law.lhs.vars().into_iter().find(|&v| {
            law.lhs.variable_occurrences(v).iter().any(|occ| occ.is_prefix_of(&beta))
        }) {
            return PairStatus::Inheritance { var };
        }
        let (c, _) = critical_completion(family, &key.0, &key.1, max_crit);
        match c {
            Some((left, right)) => PairStatus::Critical { left, right },
            None => PairStatus::Uncovered,
        }
    })();
    cache.insert(key, status.clone());
    status
}

/// Common right multiple of two positive words, with the strong-sense flag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RightMultiple {
    pub u: GeneratorWord,
    pub v: GeneratorWord,
    pub strong: bool,
}

pub fn common_right_multiple(
    family: &LawFamily,
    f: &GeneratorWord,
    g: &GeneratorWord,
    max_len: usize,
) -> (Option<RightMultiple>, SearchStats) {
    let (c, stats) = common_extension(family, f, g, max_len);
    let Some(c) = c else { return (None, stats) };
    let joint = f.concat(&c.u).eval(family);
    let strong = match (f.eval(family).seed(), g.eval(family).seed(), joint.seed()) {
        (Some(sf), Some(sg), Some(sj)) => {
            let (p, q) = crate::unify::rename_apart(&sf.dom, &sg.dom);
            match mgu(&p, &q) {
                Some(s) => {
                    let meet = crate::unify::apply_subst(&p, &s);
                    crate::operator::canonicalize(&meet, &meet).0
                        == crate::operator::canonicalize(&sj.dom, &sj.dom).0
                }
                None => false,
            }
        }
        _ => false,
    };
    (Some(RightMultiple { u: c.u, v: c.v, strong }), stats)
}

/// One-step images of `t` under positive letters at every inner node.
pub fn one_step(family: &LawFamily, t: &Term) -> Vec<Term> {
    let mut out = Vec::new();
    for a in t.inner_addresses() {
        for rule in 0..family.laws.len() {
            if let Some(u) = apply_letter(family, &OperatorLetter::new(rule, a.clone(), Sign::Pos), t) {
                out.push(u);
            }
        }
    }
    out
}

/// Terms reachable from `t` by at most `degree` positive steps.
pub fn expansions(family: &LawFamily, t: &Term, degree: usize) -> BTreeSet<Term> {
    let mut all: BTreeSet<Term> = BTreeSet::from([t.clone()]);
    let mut frontier = vec![t.clone()];
    for _ in 0..degree {
        let mut next = Vec::new();
        for u in &frontier {
            for v in one_step(family, u) {
                if all.insert(v.clone()) {
                    next.push(v);
                }
            }
        }
        frontier = next;
    }
    all
}

/// A term reachable within `search_bound` positive steps from every one-step
/// expansion of `t`. The smallest such term (size, then order) at the least
/// depth is returned.
pub fn common_expansion_check(family: &LawFamily, t: &Term, search_bound: usize) -> Option<Term> {
    let starts: Vec<Term> = one_step(family, t).into_iter().collect::<BTreeSet<_>>().into_iter().collect();
    if starts.is_empty() {
        return Some(t.clone());
    }
    let mut reach: Vec<(BTreeSet<Term>, Vec<Term>)> =
        starts.iter().map(|s| (BTreeSet::from([s.clone()]), vec![s.clone()])).collect();
    for depth in 0..=search_bound {
        if depth > 0 {
            for (all, frontier) in reach.iter_mut() {
                let mut next = Vec::new();
                for u in frontier.iter() {
                    for v in one_step(family, u) {
                        if all.insert(v.clone()) {
                            next.push(v);
                        }
                    }
                }
                *frontier = next;
            }
        }
        let (first, rest) = reach.split_first().unwrap();
        let common = first
            .0
            .iter()
            .filter(|x| rest.iter().all(|(all, _)| all.contains(*x)))
            .min_by_key(|x| (x.size(), (*x).clone()));
        if let Some(e) = common {
            return Some(e.clone());
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn letter(f: &LawFamily, s: &str) -> OperatorLetter {
        GeneratorWord::parse(s, f).unwrap().0.remove(0)
    }

    #[test]
    fn ld_commutations_at_depth_one() {
        let ld = LawFamily::builtin("LD").unwrap();
        let rels = commutation_relations(&ld, 1);
        assert_eq!(rels.len(), 1);
        assert_eq!(rels[0].render(&ld), "S+0 S+1 = S+1 S+0");
    }

    #[test]
    fn inheritance_instances_hold() {
        let ald = LawFamily::builtin("ALD").unwrap();
        let (l, r) = inheritance_instance(&ald, 0, 1, &Address::root(), 1, &Address::root()).unwrap();
        assert_eq!(format!("{} = {}", l.render(&ald), r.render(&ald)), "A+0 S+e = S+e A+00 A+10");
        assert_eq!(l.eval(&ald), r.eval(&ald));
        let (l, r) = inheritance_instance(&ald, 1, 3, &Address::root(), 0, &Address::parse("0").unwrap()).unwrap();
        assert_eq!(format!("{} = {}", l.render(&ald), r.render(&ald)), "S+110 A+e = A+e S+10");
        assert_eq!(l.eval(&ald), r.eval(&ald));
    }

    #[test]
    fn ld_root_overlap_is_completed() {
        let ld = LawFamily::builtin("LD").unwrap();
        let (c, _) = critical_completion(&ld, &letter(&ld, "S+e"), &letter(&ld, "S+1"), 5);
        let (l, r) = c.unwrap();
        assert_eq!(l.render(&ld), "S+e S+1 S+e");
        assert_eq!(r.render(&ld), "S+1 S+e S+0 S+1");
    }

    #[test]
    fn identical_words_have_trivial_multiple() {
        let ld = LawFamily::builtin("LD").unwrap();
        let f = GeneratorWord::parse("S+e", &ld).unwrap();
        let (m, _) = common_right_multiple(&ld, &f, &f, 3);
        assert_eq!(m.unwrap(), RightMultiple { u: GeneratorWord::empty(), v: GeneratorWord::empty(), strong: true });
    }

    #[test]
    fn expansions_grow_monotonically() {
        let ld = LawFamily::builtin("LD").unwrap();
        let t = Term::parse("(x*(x*x))", &ld.symbols).unwrap();
        assert_eq!(expansions(&ld, &t, 0), BTreeSet::from([t.clone()]));
        let e1 = expansions(&ld, &t, 1);
        let shown: Vec<String> = e1.iter().map(|u| u.render(&ld.symbols)).collect();
        assert!(shown.contains(&"((x1*x1)*(x1*x1))".to_string()));
        assert_eq!(e1.len(), 2);
        assert!(e1.is_subset(&expansions(&ld, &t, 2)));
    }
}
