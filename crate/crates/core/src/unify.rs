//! Substitutions, one-sided matching and most general unifiers.
//!
//! Symbol-variables unify with constants and with each other but never with a
//! leaf. The occurs check is always on.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::term::{Pattern, Sym, SymbolId, Term, Tree};

/// A finite map on variables and symbol-variables.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Substitution {
    pub var_map: BTreeMap<u32, Pattern>,
    pub sym_map: BTreeMap<u32, Sym>,
}

impl Substitution {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn is_identity(&self) -> bool {
        self.var_map.is_empty() && self.sym_map.is_empty()
    }

    pub fn sym(&self, s: Sym) -> Sym {
        match s {
            Sym::Var(k) => self.sym_map.get(&k).copied().unwrap_or(s),
            c => c,
        }
    }
}

/// Homomorphic replacement of variables and symbol-variables.
pub fn apply_subst(p: &Pattern, s: &Substitution) -> Pattern {
    if s.is_identity() {
        return p.clone();
    }
    match p {
        Tree::Var(v) => s.var_map.get(v).cloned().unwrap_or(Tree::Var(*v)),
        Tree::Node(sym, l, r) => Tree::Node(
            s.sym(*sym),
            Arc::new(apply_subst(l, s)),
            Arc::new(apply_subst(r, s)),
        ),
    }
}

/// The minimal substitution taking `p` onto `t`, if any.
pub fn match_pattern(p: &Pattern, t: &Term) -> Option<Substitution> {
    let m = match_term(p, t)?;
    Some(Substitution {
        var_map: m.vars.into_iter().map(|(k, v)| (k, v.to_pattern())).collect(),
        sym_map: m.syms.into_iter().map(|(k, v)| (k, Sym::Const(v))).collect(),
    })
}

/// Matching result specialised to ground symbols: the fast path used when
/// operators act on terms.
#[derive(Debug, Clone, Default)]
pub struct TermMatch {
    pub vars: BTreeMap<u32, Term>,
    pub syms: BTreeMap<u32, SymbolId>,
}

pub fn match_term(p: &Pattern, t: &Term) -> Option<TermMatch> {
    fn go(p: &Pattern, t: &Term, m: &mut TermMatch) -> bool {
        match (p, t) {
            (Tree::Var(v), _) => match m.vars.get(v) {
                Some(bound) => bound == t,
                None => {
                    m.vars.insert(*v, t.clone());
                    true
                }
            },
            (Tree::Node(ps, pl, pr), Tree::Node(ts, tl, tr)) => {
                let sym_ok = match ps {
                    Sym::Const(c) => c == ts,
                    Sym::Var(k) => match m.syms.get(k) {
                        Some(b) => b == ts,
                        None => {
                            m.syms.insert(*k, *ts);
                            true
                        }
                    },
                };
                sym_ok && go(pl, tl, m) && go(pr, tr, m)
            }
            (Tree::Node(..), Tree::Var(_)) => false,
        }
    }
    let mut m = TermMatch::default();
    go(p, t, &mut m).then_some(m)
}

/// Instantiate a pattern whose variables are all bound by `m`.
pub fn instantiate(p: &Pattern, m: &TermMatch) -> Option<Term> {
    match p {
        Tree::Var(v) => m.vars.get(v).cloned(),
        Tree::Node(s, l, r) => {
            let sym = match s {
                Sym::Const(c) => *c,
                Sym::Var(k) => *m.syms.get(k)?,
            };
            Some(Tree::node(sym, instantiate(l, m)?, instantiate(r, m)?))
        }
    }
}

/// Rename `q` so that its variables and symbol-variables are disjoint from `p`'s:
/// q's indices are offset by the maxima of p.
pub fn rename_apart(p: &Pattern, q: &Pattern) -> (Pattern, Pattern) {
    let (dv, ds) = (p.max_var(), p.max_sym_var());
    (p.clone(), q.map_vars(&|v| v + dv).map_sym_vars(&|k| k + ds))
}

/// Most general unifier of `p` and `q` (assumed renamed apart).
pub fn mgu(p: &Pattern, q: &Pattern) -> Option<Substitution> {
    mgu_all(&[(p.clone(), q.clone())])
}

/// Simultaneous most general unifier of several equations.
pub fn mgu_all(eqs: &[(Pattern, Pattern)]) -> Option<Substitution> {
    let mut u = Unifier::default();
    for (p, q) in eqs {
        if !u.unify(p, q) {
            return None;
        }
    }
    Some(u.finish())
}

#[derive(Default)]
struct Unifier {
    vars: BTreeMap<u32, Pattern>,
    syms: BTreeMap<u32, Sym>,
}

impl Unifier {
    fn walk<'a>(&'a self, mut p: &'a Pattern) -> &'a Pattern {
        while let Tree::Var(v) = p {
            match self.vars.get(v) {
                Some(next) => p = next,
                None => break,
            }
        }
        p
    }

    fn walk_sym(&self, mut s: Sym) -> Sym {
        while let Sym::Var(k) = s {
            match self.syms.get(&k) {
                Some(&next) => s = next,
                None => break,
            }
        }
        s
    }

    fn occurs(&self, v: u32, p: &Pattern) -> bool {
        match self.walk(p) {
            Tree::Var(w) => *w == v,
            Tree::Node(_, l, r) => self.occurs(v, l) || self.occurs(v, r),
        }
    }

    fn unify(&mut self, p: &Pattern, q: &Pattern) -> bool {
        let mut stack = vec![(p.clone(), q.clone())];
        while let Some((a, b)) = stack.pop() {
            let a = self.walk(&a).clone();
            let b = self.walk(&b).clone();
            match (&a, &b) {
                (Tree::Var(x), Tree::Var(y)) => {
                    if x != y {
                        // bind the larger index to the smaller one
                        let (hi, lo) = if x > y { (*x, *y) } else { (*y, *x) };
                        self.vars.insert(hi, Tree::Var(lo));
                    }
                }
                (Tree::Var(x), t) | (t, Tree::Var(x)) => {
                    if self.occurs(*x, t) {
                        return false;
                    }
                    self.vars.insert(*x, t.clone());
                }
                (Tree::Node(s1, l1, r1), Tree::Node(s2, l2, r2)) => {
                    if !self.unify_sym(*s1, *s2) {
                        return false;
                    }
                    stack.push(((**r1).clone(), (**r2).clone()));
                    stack.push(((**l1).clone(), (**l2).clone()));
                }
            }
        }
        true
    }

    fn unify_sym(&mut self, a: Sym, b: Sym) -> bool {
        let a = self.walk_sym(a);
        let b = self.walk_sym(b);
        match (a, b) {
            (Sym::Const(x), Sym::Const(y)) => x == y,
            (Sym::Var(x), Sym::Var(y)) => {
                if x != y {
                    let (hi, lo) = if x > y { (x, y) } else { (y, x) };
                    self.syms.insert(hi, Sym::Var(lo));
                }
                true
            }
            (Sym::Var(x), c) | (c, Sym::Var(x)) => {
                self.syms.insert(x, c);
                true
            }
        }
    }

    fn resolve(&self, p: &Pattern) -> Pattern {
        match self.walk(p) {
            Tree::Var(v) => Tree::Var(*v),
            Tree::Node(s, l, r) => Tree::node(self.walk_sym(*s), self.resolve(l), self.resolve(r)),
        }
    }

    /// Idempotent form: every binding fully resolved.
    fn finish(&self) -> Substitution {
        Substitution {
            var_map: self.vars.keys().map(|&v| (v, self.resolve(&Tree::Var(v)))).collect(),
            sym_map: self.syms.keys().map(|&k| (k, self.walk_sym(Sym::Var(k)))).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::SymbolRegistry;

    fn reg() -> SymbolRegistry {
        SymbolRegistry::star_circ()
    }
    fn pat(s: &str) -> Pattern {
        Pattern::parse(s, &reg()).unwrap()
    }
    fn term(s: &str) -> Term {
        Term::parse(s, &reg()).unwrap()
    }

    #[test]
    fn apply_reads_merged_rule() {
        let p = pat("(x1*(x2 #1 x3))");
        let mut s = Substitution::default();
        s.var_map.insert(1, pat("x4"));
        s.var_map.insert(2, pat("(x5*x5)"));
        s.var_map.insert(3, pat("x6"));
        s.sym_map.insert(1, Sym::Const(SymbolId(1)));
        assert_eq!(apply_subst(&p, &s).render(&reg()), "(x4*((x5*x5) o x6))");
        assert_eq!(apply_subst(&p, &Substitution::identity()), p);
    }

    #[test]
    fn matches_the_worked_example() {
        let p = pat("(x1*(x2 #1 x3))");
        let t = term("(x1*((x2 o x3)*x4))");
        let s = match_pattern(&p, &t).unwrap();
        assert_eq!(s.var_map[&2].render(&reg()), "(x2 o x3)");
        assert_eq!(s.var_map[&3], pat("x4"));
        assert_eq!(s.sym_map[&1], Sym::Const(SymbolId(0)));
        assert_eq!(apply_subst(&p, &s).to_term().unwrap(), t);
        assert!(match_pattern(&pat("(x1*(x2*x3))"), &term("((x1*x2)*x3)")).is_none());
    }

    #[test]
    fn nonlinear_match_requires_equal_subterms() {
        let p = pat("(x1*x1)");
        assert!(match_term(&p, &term("(x2*x2)")).is_some());
        assert!(match_term(&p, &term("(x2*x3)")).is_none());
    }

    #[test]
    fn mgu_basic_and_occurs() {
        let t = pat("((x2 o x3)*x4)");
        let s = mgu(&pat("x1"), &t).unwrap();
        assert_eq!(apply_subst(&pat("x1"), &s), t);
        assert!(mgu(&pat("(x1*x1)"), &pat("(x2*(x2*x3))")).is_none());
        assert!(mgu(&pat("(x1*x2)"), &pat("(x3 o x4)")).is_none());
        assert!(mgu(&pat("x1"), &pat("(x1*x2)")).is_none());
    }

    #[test]
    fn symbol_variables_unify_with_each_other_and_constants() {
        let (p, q) = rename_apart(&pat("((x1*x2) #1 (x1*x3))"), &pat("(x1*(x2*x3))"));
        let s = mgu(&p, &q).unwrap();
        assert_eq!(s.sym_map[&1], Sym::Const(SymbolId(0)));
        assert_eq!(apply_subst(&p, &s), apply_subst(&q, &s));
        let s = mgu(&pat("(x1 #1 x2)"), &pat("(x3 #2 x4)")).unwrap();
        assert_eq!(s.sym_map[&2], Sym::Var(1));
        // a symbol-variable never unifies with a leaf position
        assert!(mgu(&pat("(x1 #1 x2)"), &pat("(x3 #2 x4)")).is_some());
    }

    #[test]
    fn rename_apart_offsets_second() {
        let (a, b) = rename_apart(&pat("x1"), &pat("x1"));
        assert_eq!((a, b), (pat("x1"), pat("x2")));
        let (_, b) = rename_apart(&pat("(x1 #1 x2)"), &pat("(x1 #1 x1)"));
        assert_eq!(b, pat("(x3 #2 x3)"));
    }

    #[test]
    fn result_is_idempotent() {
        let (p, q) = rename_apart(&pat("(x1*(x1*x2))"), &pat("(x1*x2)"));
        let s = mgu(&p, &q).unwrap();
        let once = apply_subst(&p, &s);
        assert_eq!(apply_subst(&once, &s), once);
    }
}
