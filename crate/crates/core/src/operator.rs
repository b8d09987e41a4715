//! Seeded partial operators: the elements of the geometry monoid.
//!
//! An operator is either empty or given by a seed `(dom, img)`: it maps every
//! instance `dom·σ` to `img·σ`. Seeds are kept in canonical numbering, so
//! operator equality is structural equality.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::laws::LawFamily;
use crate::term::{Address, Pattern, Sym, SymbolRegistry, Term, Tree};
use crate::unify::{apply_subst, instantiate, match_term, mgu, mgu_all};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Sign::Pos => '+',
            Sign::Neg => '-',
        }
    }
}

/// `O^ε_{L,α}`: apply rule `rule` at `address` in direction `sign`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OperatorLetter {
    pub rule: u8,
    pub address: Address,
    pub sign: Sign,
}

impl OperatorLetter {
    pub fn new(rule: usize, address: Address, sign: Sign) -> Self {
        OperatorLetter { rule: rule as u8, address, sign }
    }

    pub fn pos(rule: usize, address: Address) -> Self {
        Self::new(rule, address, Sign::Pos)
    }

    pub fn inverse(&self) -> Self {
        OperatorLetter { sign: self.sign.flip(), ..self.clone() }
    }

    pub fn shifted(&self, prefix: &Address) -> Self {
        OperatorLetter { address: prefix.concat(&self.address), ..self.clone() }
    }

    pub fn render(&self, family: &LawFamily) -> String {
        format!("{}{}{}", family.laws[self.rule as usize].name, self.sign.as_char(), self.address)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Seed {
    pub dom: Pattern,
    pub img: Pattern,
}

impl fmt::Debug for Seed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} -> {:?}", self.dom, self.img)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PartialOperator {
    Empty,
    Seeded(Arc<Seed>),
}

impl PartialOperator {
    /// Canonically renumbered seed operator.
    pub fn seeded(dom: Pattern, img: Pattern) -> Self {
        let (dom, img) = canonicalize(&dom, &img);
        PartialOperator::Seeded(Arc::new(Seed { dom, img }))
    }

    /// The identity, seed `(x1, x1)`.
    pub fn identity() -> Self {
        PartialOperator::seeded(Pattern::var(1), Pattern::var(1))
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, PartialOperator::Empty)
    }

    pub fn seed(&self) -> Option<&Seed> {
        match self {
            PartialOperator::Empty => None,
            PartialOperator::Seeded(s) => Some(s),
        }
    }

    pub fn elementary(family: &LawFamily, letter: &OperatorLetter) -> Self {
        let law = &family.laws[letter.rule as usize];
        let (l, r) = match letter.sign {
            Sign::Pos => (law.lhs.clone(), law.rhs.clone()),
            Sign::Neg => (law.rhs.clone(), law.lhs.clone()),
        };
        let (l, r) = wrap(family, &letter.address, l, r);
        PartialOperator::seeded(l, r)
    }

    /// "self then g".
    pub fn compose(&self, g: &PartialOperator) -> PartialOperator {
        let (Some(f), Some(g)) = (self.seed(), g.seed()) else {
            return PartialOperator::Empty;
        };
        let dv = f.dom.max_var().max(f.img.max_var());
        let ds = f.dom.max_sym_var().max(f.img.max_sym_var());
        let rename = |p: &Pattern| p.map_vars(&|v| v + dv).map_sym_vars(&|k| k + ds);
        let (gd, gi) = (rename(&g.dom), rename(&g.img));
        match mgu(&f.img, &gd) {
            None => PartialOperator::Empty,
            Some(s) => PartialOperator::seeded(apply_subst(&f.dom, &s), apply_subst(&gi, &s)),
        }
    }

    pub fn apply(&self, t: &Term) -> Option<Term> {
        let s = self.seed()?;
        let m = match_term(&s.dom, t)?;
        instantiate(&s.img, &m)
    }

    /// Act inside the subterm at `a`.
    pub fn shift(&self, family: &LawFamily, a: &Address) -> PartialOperator {
        match self.seed() {
            None => PartialOperator::Empty,
            Some(s) if a.is_empty() => PartialOperator::Seeded(Arc::new(s.clone())),
            Some(s) => {
                let (l, r) = wrap(family, a, s.dom.clone(), s.img.clone());
                PartialOperator::seeded(l, r)
            }
        }
    }

    pub fn invert(&self) -> PartialOperator {
        match self.seed() {
            None => PartialOperator::Empty,
            Some(s) => PartialOperator::seeded(s.img.clone(), s.dom.clone()),
        }
    }

    /// The relation `~`: some term on which both are defined and agree.
    pub fn agree_somewhere(&self, g: &PartialOperator) -> bool {
        let (Some(f), Some(g)) = (self.seed(), g.seed()) else {
            return false;
        };
        let dv = f.dom.max_var().max(f.img.max_var());
        let ds = f.dom.max_sym_var().max(f.img.max_sym_var());
        let rename = |p: &Pattern| p.map_vars(&|v| v + dv).map_sym_vars(&|k| k + ds);
        mgu_all(&[(f.dom.clone(), rename(&g.dom)), (f.img.clone(), rename(&g.img))]).is_some()
    }

    pub fn equal(&self, g: &PartialOperator) -> bool {
        self == g
    }

    pub fn render(&self, reg: &SymbolRegistry) -> String {
        match self.seed() {
            None => "empty".into(),
            Some(s) => format!("{} -> {}", s.dom.render(reg), s.img.render(reg)),
        }
    }

    pub fn to_json(&self, reg: &SymbolRegistry) -> Value {
        match self.seed() {
            None => json!("empty"),
            Some(s) => json!({"dom": s.dom.to_json(reg), "img": s.img.to_json(reg)}),
        }
    }

    pub fn from_json(v: &Value, reg: &SymbolRegistry) -> crate::Result<Self> {
        if v.as_str() == Some("empty") {
            return Ok(PartialOperator::Empty);
        }
        let get = |k: &str| {
            v.get(k).ok_or_else(|| crate::Error::Malformed(format!("operator without {k:?}")))
        };
        Ok(PartialOperator::seeded(Pattern::from_json(get("dom")?, reg)?, Pattern::from_json(get("img")?, reg)?))
    }
}

/// Wrap a seed pair along `a`, innermost bit first: bit 0 puts the pair on
/// the left of a fresh variable, bit 1 on the right.
fn wrap(family: &LawFamily, a: &Address, mut l: Pattern, mut r: Pattern) -> (Pattern, Pattern) {
    let mut next_var = l.max_var().max(r.max_var());
    let mut next_sym = l.max_sym_var().max(r.max_sym_var());
    for &bit in a.bits().iter().rev() {
        next_var += 1;
        next_sym += 1;
        let s = family.wrap_symbol(next_sym);
        let x = Pattern::var(next_var);
        if bit == 0 {
            l = Tree::node(s, l, x.clone());
            r = Tree::node(s, r, x);
        } else {
            l = Tree::node(s, x.clone(), l);
            r = Tree::node(s, x, r);
        }
    }
    (l, r)
}

/// Renumber variables and symbol-variables by first occurrence in the
/// preorder of `dom`, then `img`.
pub fn canonicalize(dom: &Pattern, img: &Pattern) -> (Pattern, Pattern) {
    let mut vars: BTreeMap<u32, u32> = BTreeMap::new();
    let mut syms: BTreeMap<u32, u32> = BTreeMap::new();
    fn scan(p: &Pattern, vars: &mut BTreeMap<u32, u32>, syms: &mut BTreeMap<u32, u32>) {
        match p {
            Tree::Var(v) => {
                let n = vars.len() as u32 + 1;
                vars.entry(*v).or_insert(n);
            }
            Tree::Node(s, l, r) => {
                if let Sym::Var(k) = s {
                    let n = syms.len() as u32 + 1;
                    syms.entry(*k).or_insert(n);
                }
                scan(l, vars, syms);
                scan(r, vars, syms);
            }
        }
    }
    scan(dom, &mut vars, &mut syms);
    scan(img, &mut vars, &mut syms);
    let already = vars.iter().all(|(a, b)| a == b) && syms.iter().all(|(a, b)| a == b);
    if already {
        return (dom.clone(), img.clone());
    }
    let f = |p: &Pattern| p.map_vars(&|v| vars[&v]).map_sym_vars(&|k| syms[&k]);
    (f(dom), f(img))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ald() -> LawFamily {
        LawFamily::builtin("ALD").unwrap()
    }
    fn letter(rule: usize, addr: &str, sign: Sign) -> OperatorLetter {
        OperatorLetter::new(rule, Address::parse(addr).unwrap(), sign)
    }

    #[test]
    fn elementary_seeds() {
        let f = ald();
        let s = PartialOperator::elementary(&f, &letter(0, "e", Sign::Pos));
        assert_eq!(s.render(&f.symbols), "(x1*(x2 #1 x3)) -> ((x1*x2) #1 (x1*x3))");
        let a = PartialOperator::elementary(&f, &letter(1, "e", Sign::Pos));
        assert_eq!(a.render(&f.symbols), "(x1*(x2*x3)) -> ((x1 o x2)*x3)");
        let s1 = PartialOperator::elementary(&f, &letter(0, "1", Sign::Pos));
        assert_eq!(s1.render(&f.symbols), "(x1 #1 (x2*(x3 #2 x4))) -> (x1 #1 ((x2*x3) #2 (x2*x4)))");
        assert_eq!(s.shift(&f, &Address::parse("1").unwrap()), s1);
    }

    #[test]
    fn worked_example_applications() {
        let f = ald();
        let t = Term::parse("(x1*((x2 o x3)*x4))", &f.symbols).unwrap();
        let apply = |l: OperatorLetter| {
            PartialOperator::elementary(&f, &l).apply(&t).map(|u| u.render(&f.symbols))
        };
        assert_eq!(apply(letter(0, "e", Sign::Pos)).unwrap(), "((x1*(x2 o x3))*(x1*x4))");
        assert_eq!(apply(letter(1, "e", Sign::Pos)).unwrap(), "((x1 o (x2 o x3))*x4)");
        assert_eq!(apply(letter(1, "1", Sign::Neg)).unwrap(), "(x1*(x2*(x3*x4)))");
        assert_eq!(apply(letter(0, "1", Sign::Pos)), None);
    }

    #[test]
    fn empty_operator_example() {
        let f = ald();
        let op = PartialOperator::elementary(&f, &letter(0, "e", Sign::Pos))
            .compose(&PartialOperator::elementary(&f, &letter(0, "1", Sign::Pos)))
            .compose(&PartialOperator::elementary(&f, &letter(0, "e", Sign::Neg)));
        assert!(op.is_empty());
        assert!(!op.agree_somewhere(&op));
    }

    #[test]
    fn identity_and_inverse() {
        let f = ald();
        let s = PartialOperator::elementary(&f, &letter(0, "e", Sign::Pos));
        assert_eq!(s.compose(&PartialOperator::identity()), s);
        assert_eq!(PartialOperator::identity().compose(&s), s);
        assert_eq!(s.invert().invert(), s);
        assert_eq!(s.compose(&s.invert()).compose(&s), s);
        assert!(s.agree_somewhere(&s));
        let a = PartialOperator::elementary(&f, &letter(1, "e", Sign::Pos));
        assert!(!s.equal(&a));
    }

    #[test]
    fn json_round_trip() {
        let f = ald();
        let s = PartialOperator::elementary(&f, &letter(0, "01", Sign::Neg));
        assert_eq!(PartialOperator::from_json(&s.to_json(&f.symbols), &f.symbols).unwrap(), s);
        assert_eq!(PartialOperator::Empty.to_json(&f.symbols), json!("empty"));
    }
}
