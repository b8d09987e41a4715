//! Terms, patterns and addresses.
//!
//! A term is a binary tree whose inner nodes carry an operation symbol and
//! whose leaves are variables `x1, x2, ...`. Patterns are the same trees except
//! that a node may carry a *symbol-variable* `#k` standing for any binary
//! symbol. Both are instances of [`Tree`].

use std::fmt;
use std::sync::Arc;

use serde_json::Value;

use crate::error::{Error, Result};

/// Index of a binary operation symbol in a [`SymbolRegistry`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymbolId(pub u8);

/// The symbols of one family, with their display tokens.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolRegistry {
    tokens: Vec<String>,
}

impl SymbolRegistry {
    pub fn new<S: AsRef<str>>(tokens: &[S]) -> Result<Self> {
        let mut out: Vec<String> = Vec::new();
        for t in tokens {
            let t = t.as_ref().trim().to_string();
            if t.is_empty() || t.contains(['(', ')', '#', ' ']) || t.starts_with('x') {
                return Err(Error::Malformed(format!("bad symbol token {t:?}")));
            }
            if out.contains(&t) {
                return Err(Error::Malformed(format!("duplicate symbol token {t:?}")));
            }
            out.push(t);
        }
        if out.is_empty() || out.len() > u8::MAX as usize {
            return Err(Error::Malformed("symbol registry size".into()));
        }
        Ok(SymbolRegistry { tokens: out })
    }

    /// `*` and `o` (the latter standing for ∘).
    pub fn star_circ() -> Self {
        SymbolRegistry { tokens: vec!["*".into(), "o".into()] }
    }

    pub fn star_only() -> Self {
        SymbolRegistry { tokens: vec!["*".into()] }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = SymbolId> + '_ {
        (0..self.tokens.len()).map(|i| SymbolId(i as u8))
    }

    pub fn token(&self, id: SymbolId) -> &str {
        &self.tokens[id.0 as usize]
    }

    pub fn lookup(&self, token: &str) -> Option<SymbolId> {
        let token = if token == "∘" { "o" } else { token };
        self.tokens.iter().position(|t| t == token).map(|i| SymbolId(i as u8))
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }
}

/// A position in a tree: 0 means "go left", 1 means "go right".
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Address(Vec<u8>);

/// How two addresses sit relative to each other.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AddressRelation {
    Equal,
    /// The first address is a proper prefix of the second.
    PrefixOf,
    /// The first address properly extends the second.
    Extends,
    Incomparable,
}

impl Address {
    pub fn root() -> Self {
        Address(Vec::new())
    }

    pub fn from_bits(bits: &[u8]) -> Self {
        debug_assert!(bits.iter().all(|&b| b < 2));
        Address(bits.to_vec())
    }

    /// Accepts `e`, `∅` or the empty string for the root, otherwise 0/1 digits.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "e" || s == "∅" {
            return Ok(Address::root());
        }
        let mut bits = Vec::with_capacity(s.len());
        for (i, c) in s.char_indices() {
            match c {
                '0' => bits.push(0),
                '1' => bits.push(1),
                _ => {
                    return Err(Error::Syntax {
                        offset: i,
                        message: format!("bad address digit {c:?}"),
                    })
                }
            }
        }
        Ok(Address(bits))
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, bit: u8) -> Self {
        let mut v = self.0.clone();
        v.push(bit);
        Address(v)
    }

    /// `self` followed by `other`.
    pub fn concat(&self, other: &Address) -> Self {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Address(v)
    }

    pub fn is_prefix_of(&self, other: &Address) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn strip_prefix(&self, prefix: &Address) -> Option<Address> {
        self.0.strip_prefix(prefix.0.as_slice()).map(|s| Address(s.to_vec()))
    }

    pub fn strip_suffix(&self, suffix: &Address) -> Option<Address> {
        self.0.strip_suffix(suffix.0.as_slice()).map(|s| Address(s.to_vec()))
    }

    pub fn relation(&self, other: &Address) -> AddressRelation {
        if self == other {
            AddressRelation::Equal
        } else if self.is_prefix_of(other) {
            AddressRelation::PrefixOf
        } else if other.is_prefix_of(self) {
            AddressRelation::Extends
        } else {
            AddressRelation::Incomparable
        }
    }

    pub fn incomparable(&self, other: &Address) -> bool {
        self.relation(other) == AddressRelation::Incomparable
    }

    /// All addresses of length at most `max_len`, shortest first.
    pub fn all_up_to(max_len: usize) -> Vec<Address> {
        let mut out = vec![Address::root()];
        let mut layer = vec![Address::root()];
        for _ in 0..max_len {
            let next: Vec<Address> =
                layer.iter().flat_map(|a| [a.child(0), a.child(1)]).collect();
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }
}

impl fmt::Display for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("e");
        }
        for b in &self.0 {
            f.write_str(if *b == 0 { "0" } else { "1" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "@{self}")
    }
}

/// Symbol slot of a pattern node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sym {
    Const(SymbolId),
    /// Symbol-variable `#k`, k ≥ 1.
    Var(u32),
}

/// A binary tree with variable leaves; `S` is the node label type.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tree<S> {
    Var(u32),
    Node(S, Arc<Tree<S>>, Arc<Tree<S>>),
}

pub type Term = Tree<SymbolId>;
pub type Pattern = Tree<Sym>;

impl<S: Clone + PartialEq> Tree<S> {
    pub fn var(v: u32) -> Self {
        assert!(v >= 1, "variable indices start at 1");
        Tree::Var(v)
    }

    pub fn node(s: S, l: Tree<S>, r: Tree<S>) -> Self {
        Tree::Node(s, Arc::new(l), Arc::new(r))
    }

    /// Number of nodes, leaves included.
    pub fn size(&self) -> usize {
        match self {
            Tree::Var(_) => 1,
            Tree::Node(_, l, r) => 1 + l.size() + r.size(),
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            Tree::Var(_) => 1,
            Tree::Node(_, l, r) => l.leaf_count() + r.leaf_count(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Tree::Var(_) => 0,
            Tree::Node(_, l, r) => 1 + l.depth().max(r.depth()),
        }
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Tree::Var(_))
    }

    pub fn children(&self) -> Option<(&Tree<S>, &Tree<S>)> {
        match self {
            Tree::Var(_) => None,
            Tree::Node(_, l, r) => Some((l, r)),
        }
    }

    pub fn subterm(&self, a: &Address) -> Result<&Tree<S>> {
        let mut cur = self;
        for &b in a.bits() {
            cur = match cur {
                Tree::Var(_) => return Err(Error::AddressOutOfRange(a.to_string())),
                Tree::Node(_, l, r) => {
                    if b == 0 {
                        l
                    } else {
                        r
                    }
                }
            };
        }
        Ok(cur)
    }

    pub fn replace_at(&self, a: &Address, s: Tree<S>) -> Result<Tree<S>> {
        fn go<S: Clone>(t: &Tree<S>, bits: &[u8], s: Tree<S>, a: &Address) -> Result<Tree<S>> {
            match bits.split_first() {
                None => Ok(s),
                Some((&b, rest)) => match t {
                    Tree::Var(_) => Err(Error::AddressOutOfRange(a.to_string())),
                    Tree::Node(sym, l, r) => Ok(if b == 0 {
                        Tree::Node(sym.clone(), Arc::new(go(l, rest, s, a)?), r.clone())
                    } else {
                        Tree::Node(sym.clone(), l.clone(), Arc::new(go(r, rest, s, a)?))
                    }),
                },
            }
        }
        go(self, a.bits(), s, a)
    }

    /// Addresses of all nodes (inner and leaves) in preorder.
    pub fn addresses(&self) -> Vec<Address> {
        let mut out = Vec::new();
        let mut path = Vec::new();
        fn go<S>(t: &Tree<S>, path: &mut Vec<u8>, out: &mut Vec<Address>) {
            out.push(Address(path.clone()));
            if let Tree::Node(_, l, r) = t {
                path.push(0);
                go(l, path, out);
                path.pop();
                path.push(1);
                go(r, path, out);
                path.pop();
            }
        }
        go(self, &mut path, &mut out);
        out
    }

    /// Addresses of inner nodes only, preorder.
    pub fn inner_addresses(&self) -> Vec<Address> {
        self.addresses()
            .into_iter()
            .filter(|a| !self.subterm(a).map(|t| t.is_var()).unwrap_or(true))
            .collect()
    }

    /// Leaf addresses holding variable `v`, in lexicographic order.
    pub fn variable_occurrences(&self, v: u32) -> Vec<Address> {
        let mut out = Vec::new();
        let mut path = Vec::new();
        fn go<S>(t: &Tree<S>, v: u32, path: &mut Vec<u8>, out: &mut Vec<Address>) {
            match t {
                Tree::Var(w) => {
                    if *w == v {
                        out.push(Address(path.clone()))
                    }
                }
                Tree::Node(_, l, r) => {
                    path.push(0);
                    go(l, v, path, out);
                    path.pop();
                    path.push(1);
                    go(r, v, path, out);
                    path.pop();
                }
            }
        }
        go(self, v, &mut path, &mut out);
        out
    }

    /// Variables in order of first occurrence (preorder), without repeats.
    pub fn vars(&self) -> Vec<u32> {
        let mut out = Vec::new();
        self.visit_leaves(&mut |v| {
            if !out.contains(&v) {
                out.push(v)
            }
        });
        out
    }

    pub fn max_var(&self) -> u32 {
        let mut m = 0;
        self.visit_leaves(&mut |v| m = m.max(v));
        m
    }

    fn visit_leaves(&self, f: &mut impl FnMut(u32)) {
        match self {
            Tree::Var(v) => f(*v),
            Tree::Node(_, l, r) => {
                l.visit_leaves(f);
                r.visit_leaves(f);
            }
        }
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = Vec::new();
        let mut ok = true;
        self.visit_leaves(&mut |v| {
            if seen.contains(&v) {
                ok = false
            } else {
                seen.push(v)
            }
        });
        ok
    }

    pub fn contains_var(&self, v: u32) -> bool {
        match self {
            Tree::Var(w) => *w == v,
            Tree::Node(_, l, r) => l.contains_var(v) || r.contains_var(v),
        }
    }

    /// Relabel every node.
    pub fn map_symbols<T: Clone + PartialEq>(&self, f: &impl Fn(&S) -> T) -> Tree<T> {
        match self {
            Tree::Var(v) => Tree::Var(*v),
            Tree::Node(s, l, r) => Tree::node(f(s), l.map_symbols(f), r.map_symbols(f)),
        }
    }

    /// Rename every variable.
    pub fn map_vars(&self, f: &impl Fn(u32) -> u32) -> Tree<S> {
        match self {
            Tree::Var(v) => Tree::Var(f(*v)),
            Tree::Node(s, l, r) => Tree::node(s.clone(), l.map_vars(f), r.map_vars(f)),
        }
    }
}

impl Term {
    pub fn to_pattern(&self) -> Pattern {
        self.map_symbols(&|s| Sym::Const(*s))
    }

    pub fn symbols_used(&self) -> Vec<SymbolId> {
        let mut out = Vec::new();
        fn go(t: &Term, out: &mut Vec<SymbolId>) {
            if let Tree::Node(s, l, r) = t {
                if !out.contains(s) {
                    out.push(*s)
                }
                go(l, out);
                go(r, out);
            }
        }
        go(self, &mut out);
        out
    }

    pub fn parse(text: &str, reg: &SymbolRegistry) -> Result<Term> {
        let p = Pattern::parse(text, reg)?;
        p.to_term().ok_or_else(|| Error::Syntax {
            offset: text.find('#').unwrap_or(0),
            message: "symbol-variables are not allowed in terms".into(),
        })
    }

    pub fn render(&self, reg: &SymbolRegistry) -> String {
        let mut s = String::new();
        render_into(self, &|sym: &SymbolId| reg.token(*sym).to_string(), &mut s);
        s
    }

    pub fn to_json(&self, reg: &SymbolRegistry) -> Value {
        tree_to_json(self, &|sym: &SymbolId| reg.token(*sym).to_string())
    }

    pub fn from_json(v: &Value, reg: &SymbolRegistry) -> Result<Term> {
        Pattern::from_json(v, reg)?
            .to_term()
            .ok_or_else(|| Error::Malformed("symbol-variable inside a term".into()))
    }
}

impl Pattern {
    pub fn to_term(&self) -> Option<Term> {
        match self {
            Tree::Var(v) => Some(Tree::Var(*v)),
            Tree::Node(Sym::Const(s), l, r) => Some(Tree::node(*s, l.to_term()?, r.to_term()?)),
            Tree::Node(Sym::Var(_), _, _) => None,
        }
    }

    /// Symbol-variables in order of first occurrence (preorder).
    pub fn sym_vars(&self) -> Vec<u32> {
        let mut out = Vec::new();
        fn go(p: &Pattern, out: &mut Vec<u32>) {
            if let Tree::Node(s, l, r) = p {
                if let Sym::Var(k) = s {
                    if !out.contains(k) {
                        out.push(*k)
                    }
                }
                go(l, out);
                go(r, out);
            }
        }
        go(self, &mut out);
        out
    }

    pub fn max_sym_var(&self) -> u32 {
        self.sym_vars().into_iter().max().unwrap_or(0)
    }

    pub fn map_sym_vars(&self, f: &impl Fn(u32) -> u32) -> Pattern {
        self.map_symbols(&|s| match s {
            Sym::Var(k) => Sym::Var(f(*k)),
            c => *c,
        })
    }

    pub fn parse(text: &str, reg: &SymbolRegistry) -> Result<Pattern> {
        let mut p = Parser { src: text, pos: 0, reg };
        let t = p.term()?;
        p.skip_ws();
        if p.pos != text.len() {
            return Err(Error::Syntax { offset: p.pos, message: "trailing input".into() });
        }
        Ok(t)
    }

    pub fn render(&self, reg: &SymbolRegistry) -> String {
        let mut s = String::new();
        render_into(
            self,
            &|sym: &Sym| match sym {
                Sym::Const(c) => reg.token(*c).to_string(),
                Sym::Var(k) => format!("#{k}"),
            },
            &mut s,
        );
        s
    }

    pub fn to_json(&self, reg: &SymbolRegistry) -> Value {
        tree_to_json(self, &|sym: &Sym| match sym {
            Sym::Const(c) => reg.token(*c).to_string(),
            Sym::Var(k) => format!("#{k}"),
        })
    }

    pub fn from_json(v: &Value, reg: &SymbolRegistry) -> Result<Pattern> {
        match v {
            Value::String(s) => match parse_var_token(s) {
                Some(k) => Ok(Tree::Var(k)),
                None => Err(Error::Malformed(format!("bad variable {s:?}"))),
            },
            Value::Array(items) if items.len() == 3 => {
                let op = items[0]
                    .as_str()
                    .ok_or_else(|| Error::Malformed("operator must be a string".into()))?;
                let sym = if let Some(k) = op.strip_prefix('#') {
                    Sym::Var(
                        k.parse()
                            .ok()
                            .filter(|&k| k >= 1)
                            .ok_or_else(|| Error::Malformed(format!("bad symbol-variable {op:?}")))?,
                    )
                } else {
                    Sym::Const(reg.lookup(op).ok_or_else(|| Error::UnknownOperator {
                        offset: 0,
                        token: op.to_string(),
                    })?)
                };
                Ok(Tree::node(sym, Pattern::from_json(&items[1], reg)?, Pattern::from_json(&items[2], reg)?))
            }
            _ => Err(Error::Malformed(format!("not a term: {v}"))),
        }
    }
}

fn parse_var_token(s: &str) -> Option<u32> {
    let rest = s.strip_prefix('x')?;
    if rest.is_empty() {
        return Some(1);
    }
    rest.parse().ok().filter(|&k| k >= 1)
}

fn render_into<S>(t: &Tree<S>, tok: &impl Fn(&S) -> String, out: &mut String) {
    match t {
        Tree::Var(v) => {
            out.push('x');
            out.push_str(&v.to_string());
        }
        Tree::Node(s, l, r) => {
            let op = tok(s);
            // word-like tokens need spacing to stay readable and lexable
            let spaced = op.chars().any(|c| c.is_alphanumeric());
            out.push('(');
            render_into(l, tok, out);
            if spaced {
                out.push(' ');
                out.push_str(&op);
                out.push(' ');
            } else {
                out.push_str(&op);
            }
            render_into(r, tok, out);
            out.push(')');
        }
    }
}

fn tree_to_json<S>(t: &Tree<S>, tok: &impl Fn(&S) -> String) -> Value {
    match t {
        Tree::Var(v) => Value::String(format!("x{v}")),
        Tree::Node(s, l, r) => {
            Value::Array(vec![Value::String(tok(s)), tree_to_json(l, tok), tree_to_json(r, tok)])
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    reg: &'a SymbolRegistry,
}

impl Parser<'_> {
    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn err<T>(&self, message: &str) -> Result<T> {
        Err(Error::Syntax { offset: self.pos, message: message.into() })
    }

    fn term(&mut self) -> Result<Pattern> {
        self.skip_ws();
        let rest = self.rest();
        if rest.starts_with('(') {
            self.pos += 1;
            let l = self.term()?;
            let sym = self.operator()?;
            let r = self.term()?;
            self.skip_ws();
            if !self.rest().starts_with(')') {
                return self.err("expected ')'");
            }
            self.pos += 1;
            Ok(Tree::node(sym, l, r))
        } else if rest.starts_with('x') {
            let digits: String = rest[1..].chars().take_while(|c| c.is_ascii_digit()).collect();
            let start = self.pos;
            self.pos += 1 + digits.len();
            if digits.is_empty() {
                return Ok(Tree::Var(1));
            }
            match digits.parse::<u32>() {
                Ok(k) if k >= 1 => Ok(Tree::Var(k)),
                _ => Err(Error::Syntax { offset: start, message: "variable index must be ≥ 1".into() }),
            }
        } else if rest.is_empty() {
            self.err("unexpected end of input")
        } else {
            self.err("expected a variable or '('")
        }
    }

    fn operator(&mut self) -> Result<Sym> {
        self.skip_ws();
        let rest = self.rest();
        let start = self.pos;
        if let Some(r) = rest.strip_prefix('#') {
            let digits: String = r.chars().take_while(|c| c.is_ascii_digit()).collect();
            self.pos += 1 + digits.len();
            return match digits.parse::<u32>() {
                Ok(k) if k >= 1 => Ok(Sym::Var(k)),
                _ => Err(Error::Syntax { offset: start, message: "bad symbol-variable".into() }),
            };
        }
        // longest registered token that prefixes the input
        let mut best: Option<(usize, SymbolId)> = None;
        for id in self.reg.ids() {
            let tok = self.reg.token(id);
            if rest.starts_with(tok) && best.map_or(true, |(l, _)| tok.len() > l) {
                best = Some((tok.len(), id));
            }
        }
        if rest.starts_with('∘') {
            if let Some(id) = self.reg.lookup("o") {
                best = Some(('∘'.len_utf8(), id));
            }
        }
        match best {
            Some((len, id)) => {
                self.pos += len;
                Ok(Sym::Const(id))
            }
            None => {
                let token: String =
                    rest.chars().take_while(|c| !c.is_whitespace() && *c != '(' && *c != 'x').collect();
                if token.is_empty() {
                    self.err("expected an operator")
                } else {
                    Err(Error::UnknownOperator { offset: start, token })
                }
            }
        }
    }
}

impl<S: fmt::Debug> fmt::Debug for Tree<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tree::Var(v) => write!(f, "x{v}"),
            Tree::Node(s, l, r) => write!(f, "({l:?} {s:?} {r:?})"),
        }
    }
}

/// The right vine x^[n] = x*(x*(...*x)) with n leaves, over symbol `star`.
pub fn right_vine(n: usize, star: SymbolId) -> Result<Term> {
    if n < 1 {
        return Err(Error::InvalidVine);
    }
    let mut t = Term::var(1);
    for _ in 1..n {
        t = Term::node(star, Term::var(1), t);
    }
    Ok(t)
}

/// Every term with `size` nodes over the given symbols and variables
/// `1..=vars`, in preorder-lexicographic order (symbols first, then variables).
pub fn terms_of_size(size: usize, symbols: &[SymbolId], vars: u32) -> Vec<Term> {
    if size == 0 || size % 2 == 0 {
        return Vec::new();
    }
    if size == 1 {
        return (1..=vars).map(Term::var).collect();
    }
    let mut out = Vec::new();
    for &s in symbols {
        let mut ls = 1;
        while ls < size - 1 {
            let rs = size - 1 - ls;
            let lefts = terms_of_size(ls, symbols, vars);
            let rights = terms_of_size(rs, symbols, vars);
            for l in &lefts {
                for r in &rights {
                    out.push(Term::node(s, l.clone(), r.clone()));
                }
            }
            ls += 2;
        }
    }
    // preorder-lexicographic: a node (symbol) token sorts before any variable
    out.sort_by_key(preorder_key);
    out
}

fn preorder_key(t: &Term) -> Vec<u32> {
    let mut k = Vec::new();
    fn go(t: &Term, k: &mut Vec<u32>) {
        match t {
            Tree::Node(s, l, r) => {
                k.push(s.0 as u32);
                go(l, k);
                go(r, k);
            }
            Tree::Var(v) => k.push(1000 + v),
        }
    }
    go(t, &mut k);
    k
}

/// All terms of size at most `max_size`, by size then preorder.
pub fn terms_up_to(max_size: usize, symbols: &[SymbolId], vars: u32) -> Vec<Term> {
    (1..=max_size).flat_map(|n| terms_of_size(n, symbols, vars)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reg() -> SymbolRegistry {
        SymbolRegistry::star_circ()
    }

    #[test]
    fn parses_bare_x_as_x1() {
        assert_eq!(Term::parse("x", &reg()).unwrap(), Term::var(1));
    }

    #[test]
    fn parses_spaced_and_unicode_forms() {
        let r = reg();
        let t = Term::parse("(x1 * (x2 o x3))", &r).unwrap();
        let expected =
            Term::node(SymbolId(0), Term::var(1), Term::node(SymbolId(1), Term::var(2), Term::var(3)));
        assert_eq!(t, expected);
        assert_eq!(Term::parse("(x1*(x2∘x3))", &r).unwrap(), expected);
        assert_eq!(t.render(&r), "(x1*(x2 o x3))");
    }

    #[test]
    fn syntax_errors_carry_offsets() {
        let r = reg();
        match Term::parse("(x1 + x2)", &r) {
            Err(Error::UnknownOperator { offset, token }) => {
                assert_eq!(offset, 4);
                assert_eq!(token, "+");
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(Term::parse("(x1*x2", &r), Err(Error::Syntax { offset: 6, .. })));
        assert!(matches!(Term::parse("x0", &r), Err(Error::Syntax { .. })));
        assert!(Term::parse("(x1 #1 x2)", &r).is_err());
    }

    #[test]
    fn subterm_and_replace() {
        let r = reg();
        let t = Term::parse("(x1*(x2 o x3))", &r).unwrap();
        assert_eq!(t.subterm(&Address::root()).unwrap(), &t);
        assert_eq!(t.subterm(&Address::parse("10").unwrap()).unwrap(), &Term::var(2));
        let x1 = Term::var(1);
        assert!(matches!(x1.subterm(&Address::parse("0").unwrap()), Err(Error::AddressOutOfRange(_))));
        let u = Term::parse("(x1*x2)", &r).unwrap();
        let v = u.replace_at(&Address::parse("1").unwrap(), Term::var(3)).unwrap();
        assert_eq!(v.render(&r), "(x1*x3)");
        assert_eq!(t.replace_at(&Address::root(), x1.clone()).unwrap(), x1);
    }

    #[test]
    fn vines() {
        let star = SymbolId(0);
        assert_eq!(right_vine(1, star).unwrap(), Term::var(1));
        assert_eq!(right_vine(3, star).unwrap().render(&reg()), "(x1*(x1*x1))");
        assert!(right_vine(0, star).is_err());
        for n in 1..10 {
            let v = right_vine(n, star).unwrap();
            assert_eq!(v.size(), 2 * n - 1);
            assert_eq!(v.leaf_count(), n);
            assert_eq!(v.is_injective(), n == 1);
        }
    }

    #[test]
    fn address_relations() {
        let a = |s| Address::parse(s).unwrap();
        assert_eq!(a("0").relation(&a("1")), AddressRelation::Incomparable);
        assert_eq!(a("1").relation(&a("10")), AddressRelation::PrefixOf);
        assert_eq!(a("10").relation(&a("1")), AddressRelation::Extends);
        assert_eq!(a("011").relation(&a("011")), AddressRelation::Equal);
        assert_eq!(a("e").to_string(), "e");
        assert_eq!(Address::all_up_to(2).len(), 7);
    }

    #[test]
    fn occurrences_and_injectivity() {
        let r = reg();
        let t = Term::parse("(x1*(x2*x3))", &r).unwrap();
        assert_eq!(t.variable_occurrences(1), vec![Address::parse("0").unwrap()]);
        assert!(t.is_injective());
        let u = Term::parse("((x1*x2)*(x1*x3))", &r).unwrap();
        assert_eq!(
            u.variable_occurrences(1),
            vec![Address::parse("00").unwrap(), Address::parse("10").unwrap()]
        );
        assert!(!u.is_injective());
    }

    #[test]
    fn json_round_trip() {
        let r = reg();
        let t = Term::parse("((x1 o x2)*x3)", &r).unwrap();
        let j = t.to_json(&r);
        assert_eq!(j.to_string(), r#"["*",["o","x1","x2"],"x3"]"#);
        assert_eq!(Term::from_json(&j, &r).unwrap(), t);
    }

    #[test]
    fn enumeration_counts_match_catalan() {
        // size 2k+1 over s symbols and v variables: C_k * s^k * v^(k+1)
        let catalan = [1usize, 1, 2, 5, 14];
        let syms = [SymbolId(0), SymbolId(1)];
        for k in 0..5 {
            let n = terms_of_size(2 * k + 1, &syms, 1).len();
            assert_eq!(n, catalan[k] * 2usize.pow(k as u32));
        }
        let first = &terms_of_size(3, &syms, 2)[0];
        assert_eq!(first.render(&reg()), "(x1*x1)");
    }
}
