//! Proof sketches over symbolic words, compiled into certificates.
//!
//! A symbolic word mixes literal letters with blocks `sh(x)^{±1}` standing
//! for arbitrary words. A [`Template`] rewrites both sides of an identity
//! step by step until they meet; the [`Prover`] replays the steps on
//! concrete values, emitting one relation move per letter crossing.

use std::cell::RefCell;
use std::collections::{BTreeSet, HashMap};

use super::cert::{is_relation_form, Certificate, Move};
use super::search::{words_equal, Verdict};
use super::{GLetter, Generator, GroupPresentation, GroupWord, Relation, RelationId, Shift, WordAlgebra};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Atom {
    Lit(GLetter),
    /// `shift(value[var])`, inverted when `inv`.
    Block { var: usize, shift: Shift, inv: bool },
}

impl Atom {
    pub fn inverse(&self) -> Atom {
        match self {
            Atom::Lit(l) => Atom::Lit(l.inverse()),
            Atom::Block { var, shift, inv } => Atom::Block { var: *var, shift: shift.clone(), inv: !inv },
        }
    }

    fn shifted(&self, sh: &Shift) -> Atom {
        match self {
            Atom::Lit(l) => Atom::Lit(l.shifted(sh)),
            Atom::Block { var, shift, inv } => Atom::Block { var: *var, shift: sh.after(shift), inv: *inv },
        }
    }

    pub fn concrete(&self, vals: &[GroupWord]) -> GroupWord {
        match self {
            Atom::Lit(l) => GroupWord::letter(l.clone()),
            Atom::Block { var, shift, inv } => {
                let w = vals[*var].shifted(shift);
                if *inv {
                    w.inverse()
                } else {
                    w
                }
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct SymWord(pub Vec<Atom>);

impl SymWord {
    pub fn block(var: usize, shift: Shift) -> Self {
        SymWord(vec![Atom::Block { var, shift, inv: false }])
    }

    pub fn concrete(&self, vals: &[GroupWord]) -> GroupWord {
        GroupWord(self.0.iter().flat_map(|a| a.concrete(vals).0).collect())
    }
}

impl WordAlgebra for SymWord {
    fn unit() -> Self {
        SymWord(Vec::new())
    }
    fn lit(l: GLetter) -> Self {
        SymWord(vec![Atom::Lit(l)])
    }
    fn cat(&self, other: &Self) -> Self {
        SymWord(self.0.iter().chain(&other.0).cloned().collect())
    }
    fn sh(&self, s: &Shift) -> Self {
        SymWord(self.0.iter().map(|a| a.shifted(s)).collect())
    }
    fn inv(&self) -> Self {
        SymWord(self.0.iter().rev().map(Atom::inverse).collect())
    }
}

/// One rewriting step, located at the first adjacent occurrence of its atoms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Step {
    /// `a a⁻¹ → 1`.
    Cancel(Atom),
    /// `ℓ B → result ℓ`, moving the letter across the block letter by letter.
    PassRight { lit: GLetter, block: Atom, result: Vec<Atom> },
    /// `B ℓ → ℓ result`.
    PassLeft { block: Atom, lit: GLetter, result: Vec<Atom> },
    /// `B C → C B` for blocks whose letters commute.
    Swap(Atom, Atom),
    /// A literal factor rewritten by a short search.
    Local { from: Vec<GLetter>, to: Vec<GLetter> },
}

impl Step {
    fn pattern(&self) -> Vec<Atom> {
        match self {
            Step::Cancel(a) => vec![a.clone(), a.inverse()],
            Step::PassRight { lit, block, .. } => vec![Atom::Lit(lit.clone()), block.clone()],
            Step::PassLeft { block, lit, .. } => vec![block.clone(), Atom::Lit(lit.clone())],
            Step::Swap(a, b) => vec![a.clone(), b.clone()],
            Step::Local { from, .. } => from.iter().cloned().map(Atom::Lit).collect(),
        }
    }

    fn replacement(&self) -> Vec<Atom> {
        match self {
            Step::Cancel(_) => Vec::new(),
            Step::PassRight { lit, result, .. } => {
                result.iter().cloned().chain([Atom::Lit(lit.clone())]).collect()
            }
            Step::PassLeft { lit, result, .. } => [Atom::Lit(lit.clone())].into_iter().chain(result.iter().cloned()).collect(),
            Step::Swap(a, b) => vec![b.clone(), a.clone()],
            Step::Local { to, .. } => to.iter().cloned().map(Atom::Lit).collect(),
        }
    }
}

/// An identity `lhs = rhs` with two step chains meeting in the middle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Template {
    pub name: String,
    pub lhs: SymWord,
    pub rhs: SymWord,
    pub lhs_steps: Vec<Step>,
    pub rhs_steps: Vec<Step>,
}

fn locate(atoms: &[Atom], pat: &[Atom]) -> Option<usize> {
    (0..=atoms.len().saturating_sub(pat.len())).find(|&i| atoms[i..].starts_with(pat))
}

fn run_symbolic(start: &SymWord, steps: &[Step]) -> Result<SymWord> {
    let mut atoms = start.0.clone();
    for (k, st) in steps.iter().enumerate() {
        let pat = st.pattern();
        let i = locate(&atoms, &pat).ok_or_else(|| Error::ValidationFailure(format!("step {k}: pattern absent")))?;
        atoms.splice(i..i + pat.len(), st.replacement());
    }
    Ok(SymWord(atoms))
}

impl Template {
    /// Both chains end at the same symbolic word.
    pub fn check(&self) -> Result<SymWord> {
        let l = run_symbolic(&self.lhs, &self.lhs_steps)?;
        let r = run_symbolic(&self.rhs, &self.rhs_steps)?;
        if l != r {
            return Err(Error::ValidationFailure(format!("{}: chains do not meet", self.name)));
        }
        Ok(l)
    }
}

/// Compiles templates against a presentation. Relation lookups and local
/// searches are memoized, so one prover should serve many instances.
pub struct Prover<'a> {
    pres: &'a dyn GroupPresentation,
    pub local_budget: usize,
    passes: RefCell<HashMap<(GLetter, GLetter, bool), Option<(RelationId, GroupWord)>>>,
    swaps: RefCell<HashMap<(GLetter, GLetter), Option<RelationId>>>,
    locals: RefCell<HashMap<(GroupWord, GroupWord), Option<Certificate>>>,
    touching: RefCell<HashMap<BTreeSet<Generator>, Vec<Relation>>>,
}

impl<'a> Prover<'a> {
    pub fn new(pres: &'a dyn GroupPresentation) -> Self {
        Prover {
            pres,
            local_budget: 4000,
            passes: RefCell::default(),
            swaps: RefCell::default(),
            locals: RefCell::default(),
            touching: RefCell::default(),
        }
    }

    pub fn presentation(&self) -> &'a dyn GroupPresentation {
        self.pres
    }

    fn relations(&self, gens: BTreeSet<Generator>) -> Vec<Relation> {
        let mut cache = self.touching.borrow_mut();
        cache
            .entry(gens)
            .or_insert_with_key(|g| {
                let mut v = self.pres.relations_touching(g);
                v.sort();
                v.dedup();
                v
            })
            .clone()
    }

    /// A form `ℓ m → W ℓ` (right) or `m ℓ → ℓ W` (left), shortest first.
    fn pass_form(&self, lit: &GLetter, m: &GLetter, right: bool) -> Option<(RelationId, GroupWord)> {
        let key = (lit.clone(), m.clone(), right);
        if let Some(hit) = self.passes.borrow().get(&key) {
            return hit.clone();
        }
        let gens: BTreeSet<_> = [lit.gen.clone(), m.gen.clone()].into();
        let mut best: Option<(usize, RelationId, GroupWord)> = None;
        for rel in self.relations(gens) {
            let r = rel.relator();
            for base in [r.clone(), r.inverse()] {
                let n = base.len();
                if n < 3 {
                    continue;
                }
                for k in 0..n {
                    let c: Vec<GLetter> = base.0[k..].iter().chain(&base.0[..k]).cloned().collect();
                    let ok = if right {
                        c[0] == *lit && c[1] == *m && c[2] == lit.inverse()
                    } else {
                        c[0] == *m && c[1] == *lit && c[n - 1] == lit.inverse()
                    };
                    if !ok {
                        continue;
                    }
                    let to = GroupWord(c[2..].to_vec()).inverse();
                    let better = match &best {
                        None => true,
                        Some((len, id, _)) => (n, &rel.id) < (*len, id),
                    };
                    if better {
                        best = Some((n, rel.id.clone(), to));
                    }
                }
            }
        }
        let out = best.map(|(_, id, to)| (id, to));
        self.passes.borrow_mut().insert(key, out.clone());
        out
    }

    fn swap_form(&self, a: &GLetter, b: &GLetter) -> Option<RelationId> {
        let key = (a.clone(), b.clone());
        if let Some(hit) = self.swaps.borrow().get(&key) {
            return hit.clone();
        }
        let from = GroupWord(vec![a.clone(), b.clone()]);
        let to = GroupWord(vec![b.clone(), a.clone()]);
        let gens: BTreeSet<_> = [a.gen.clone(), b.gen.clone()].into();
        let out = self.relations(gens).into_iter().find(|r| is_relation_form(r, &from, &to)).map(|r| r.id);
        self.swaps.borrow_mut().insert(key, out.clone());
        out
    }

    fn local(&self, from: &GroupWord, to: &GroupWord) -> Option<Certificate> {
        let key = (from.clone(), to.clone());
        if let Some(hit) = self.locals.borrow().get(&key) {
            return hit.clone();
        }
        let gens: BTreeSet<_> = from.generators().union(&to.generators()).cloned().collect();
        let direct = self.relations(gens).into_iter().find(|r| is_relation_form(r, from, to));
        let out = match direct {
            Some(r) => Some(Certificate {
                start: from.clone(),
                moves: vec![Move::Relation { position: 0, relation: r.id, from: from.clone(), to: to.clone() }],
            }),
            None => match words_equal(self.pres, from, to, self.local_budget) {
                Verdict::Equal(c) => Some(c),
                Verdict::Undecided(_) => None,
            },
        };
        self.locals.borrow_mut().insert(key, out.clone());
        out
    }

    /// Certificate from `reduce(lhs(vals))` to `reduce(rhs(vals))`.
    pub fn prove(&self, tpl: &Template, vals: &[GroupWord]) -> Result<Certificate> {
        let left = self.chain(&tpl.lhs, &tpl.lhs_steps, vals)?;
        let right = self.chain(&tpl.rhs, &tpl.rhs_steps, vals)?;
        let l_end = left.end()?;
        let r_end = right.end()?;
        if l_end != r_end {
            return Err(Error::ValidationFailure(format!("{}: concrete chains do not meet", tpl.name)));
        }
        let l_raw = tpl.lhs.concrete(vals);
        let r_raw = tpl.rhs.concrete(vals);
        Certificate::reduction(&l_raw)
            .reversed()?
            .then(left)?
            .then(right.reversed()?)?
            .then(Certificate::reduction(&r_raw))
    }

    /// Run `steps` on the concrete word of `start`.
    pub fn chain(&self, start: &SymWord, steps: &[Step], vals: &[GroupWord]) -> Result<Certificate> {
        let mut run = Run { atoms: start.0.clone(), word: start.concrete(vals).0, moves: Vec::new(), vals };
        let start_word = GroupWord(run.word.clone());
        for (k, st) in steps.iter().enumerate() {
            self.step(&mut run, st).map_err(|e| Error::ValidationFailure(format!("step {k} ({st:?}): {e}")))?;
        }
        Ok(Certificate { start: start_word, moves: run.moves })
    }

    fn step(&self, run: &mut Run<'_>, st: &Step) -> Result<()> {
        let pat = st.pattern();
        let i = locate(&run.atoms, &pat).ok_or_else(|| Error::ValidationFailure("pattern absent".into()))?;
        let p = run.offset(i);
        match st {
            Step::Cancel(a) => {
                let k = a.concrete(run.vals).len();
                for j in (0..k).rev() {
                    run.apply(Move::DeleteCancel { position: p + j })?;
                }
            }
            Step::PassRight { lit, block, result } => {
                let blk = block.concrete(run.vals);
                let mut q = p;
                for m in &blk.0 {
                    let (id, to) = self
                        .pass_form(lit, m, true)
                        .ok_or_else(|| Error::ValidationFailure(format!("no relation moves {lit:?} across {m:?}")))?;
                    let from = GroupWord(vec![lit.clone(), m.clone()]);
                    let shift = to.len() - 1;
                    run.apply(Move::Relation { position: q, relation: id, from, to })?;
                    q += shift;
                }
                let target = SymWord(result.clone()).concrete(run.vals);
                if target.len() != q - p {
                    return Err(Error::ValidationFailure("pass produced an unexpected number of letters".into()));
                }
                self.sort(run, p, &target)?;
            }
            Step::PassLeft { block, lit, result } => {
                let blk = block.concrete(run.vals);
                let mut q = p + blk.len();
                let mut produced = 0;
                for m in blk.0.iter().rev() {
                    let (id, to) = self
                        .pass_form(lit, m, false)
                        .ok_or_else(|| Error::ValidationFailure(format!("no relation moves {lit:?} across {m:?}")))?;
                    let from = GroupWord(vec![m.clone(), lit.clone()]);
                    produced += to.len() - 1;
                    run.apply(Move::Relation { position: q - 1, relation: id, from, to })?;
                    q -= 1;
                }
                debug_assert_eq!(q, p);
                let target = SymWord(result.clone()).concrete(run.vals);
                if target.len() != produced {
                    return Err(Error::ValidationFailure("pass produced an unexpected number of letters".into()));
                }
                self.sort(run, p + 1, &target)?;
            }
            Step::Swap(a, b) => {
                let target = b.concrete(run.vals).concat(&a.concrete(run.vals));
                self.sort(run, p, &target)?;
            }
            Step::Local { from, to } => {
                let from = GroupWord(from.clone());
                let to = GroupWord(to.clone());
                let cert = self
                    .local(&from, &to)
                    .ok_or_else(|| Error::ValidationFailure("local rewrite not found".into()))?;
                for m in cert.embedded(&GroupWord(run.word[..p].to_vec()), &GroupWord::empty()).moves {
                    run.apply(m)?;
                }
            }
        }
        run.atoms.splice(i..i + pat.len(), st.replacement());
        Ok(())
    }

    /// Reorder the factor at `p` into `target` by swapping commuting neighbours.
    fn sort(&self, run: &mut Run<'_>, p: usize, target: &GroupWord) -> Result<()> {
        let n = target.len();
        if p + n > run.word.len() {
            return Err(Error::ValidationFailure("sort window outside word".into()));
        }
        for t in 0..n {
            let want = &target.0[t];
            let j = (t..n)
                .find(|&j| run.word[p + j] == *want)
                .ok_or_else(|| Error::ValidationFailure(format!("letter {want:?} missing after pass")))?;
            for k in (t..j).rev() {
                let (a, b) = (run.word[p + k].clone(), run.word[p + k + 1].clone());
                let id = self
                    .swap_form(&a, &b)
                    .ok_or_else(|| Error::ValidationFailure(format!("{a:?} and {b:?} do not commute")))?;
                run.apply(Move::Relation {
                    position: p + k,
                    relation: id,
                    from: GroupWord(vec![a.clone(), b.clone()]),
                    to: GroupWord(vec![b, a]),
                })?;
            }
        }
        Ok(())
    }
}

struct Run<'v> {
    atoms: Vec<Atom>,
    word: Vec<GLetter>,
    moves: Vec<Move>,
    vals: &'v [GroupWord],
}

impl Run<'_> {
    fn offset(&self, i: usize) -> usize {
        self.atoms[..i].iter().map(|a| a.concrete(self.vals).len()).sum()
    }

    fn apply(&mut self, m: Move) -> Result<()> {
        self.word = super::cert::apply_move(&GroupWord(std::mem::take(&mut self.word)), &m)?.0;
        self.moves.push(m);
        Ok(())
    }
}
