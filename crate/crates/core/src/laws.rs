//! Oriented laws, law families and their structural classification.

use std::collections::BTreeSet;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::term::{Address, Pattern, Sym, SymbolId, SymbolRegistry, Tree};
use crate::unify::{match_pattern, Substitution};

/// A law `lhs = rhs` read left to right. `name` doubles as the letter used
/// in generator words, so it must not contain `+`, `-` or whitespace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrientedLaw {
    pub name: String,
    pub lhs: Pattern,
    pub rhs: Pattern,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Classification {
    pub balanced: bool,
    pub linear: bool,
    pub semi_linear: bool,
    /// The right side is a variable permutation of the left side
    /// (commutativity-like); confluence relations may be unsuitable.
    pub involutive: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarOccurrence {
    pub var: u32,
    pub lhs: Vec<Address>,
    pub rhs: Vec<Address>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OccurrenceProfile {
    pub vars: Vec<VarOccurrence>,
}

impl OccurrenceProfile {
    pub fn get(&self, var: u32) -> Option<&VarOccurrence> {
        self.vars.iter().find(|v| v.var == var)
    }
}

impl OrientedLaw {
    pub fn new(name: &str, lhs: Pattern, rhs: Pattern) -> Result<Self> {
        if name.is_empty() || name.contains(['+', '-']) || name.contains(char::is_whitespace) {
            return Err(Error::Malformed(format!("bad law name {name:?}")));
        }
        if lhs.is_var() && rhs.is_var() {
            return Err(Error::Malformed(format!("law {name:?} relates two variables")));
        }
        Ok(OrientedLaw { name: name.to_string(), lhs, rhs })
    }

    pub fn classify(&self) -> Classification {
        let l: BTreeSet<u32> = self.lhs.vars().into_iter().collect();
        let r: BTreeSet<u32> = self.rhs.vars().into_iter().collect();
        let ls: BTreeSet<u32> = self.lhs.sym_vars().into_iter().collect();
        let rs: BTreeSet<u32> = self.rhs.sym_vars().into_iter().collect();
        let balanced = l == r && ls == rs;
        let semi_linear = self.lhs.is_injective();
        let linear = balanced && semi_linear && self.rhs.is_injective();
        Classification { balanced, linear, semi_linear, involutive: is_permutation_of(&self.lhs, &self.rhs) }
    }

    pub fn occurrence_profile(&self) -> Result<OccurrenceProfile> {
        if !self.classify().balanced {
            return Err(Error::UnbalancedLaw(self.name.clone()));
        }
        let mut vars = self.lhs.vars();
        vars.sort_unstable();
        Ok(OccurrenceProfile {
            vars: vars
                .into_iter()
                .map(|v| VarOccurrence {
                    var: v,
                    lhs: self.lhs.variable_occurrences(v),
                    rhs: self.rhs.variable_occurrences(v),
                })
                .collect(),
        })
    }
}

fn is_permutation_of(lhs: &Pattern, rhs: &Pattern) -> bool {
    if lhs == rhs || !lhs.is_injective() {
        return false;
    }
    let Some(t) = rhs.to_term() else { return false };
    let Some(s) = match_pattern(lhs, &t) else { return false };
    s.var_map.values().all(|p| p.is_var())
}

/// A named set of laws over a symbol registry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawFamily {
    pub name: String,
    pub symbols: SymbolRegistry,
    pub laws: Vec<OrientedLaw>,
}

#[derive(Deserialize)]
struct FamilyFile {
    #[serde(default)]
    name: Option<String>,
    symbols: Vec<String>,
    laws: Vec<LawFile>,
}

#[derive(Deserialize)]
struct LawFile {
    name: String,
    lhs: serde_json::Value,
    rhs: serde_json::Value,
}

impl LawFamily {
    pub fn builtin(name: &str) -> Result<Self> {
        let star = SymbolId(0);
        let circ = SymbolId(1);
        let x = Pattern::var;
        let node = |s: Sym, l: Pattern, r: Pattern| Pattern::node(s, l, r);
        let c = Sym::Const;
        match name {
            "ALD" => {
                let sq = Sym::Var(1);
                // x1*(x2 □ x3) -> (x1*x2) □ (x1*x3), □ ranging over {*, o}
                let sigma = OrientedLaw::new(
                    "S",
                    node(c(star), x(1), node(sq, x(2), x(3))),
                    node(sq, node(c(star), x(1), x(2)), node(c(star), x(1), x(3))),
                )?;
                let assoc = OrientedLaw::new(
                    "A",
                    node(c(star), x(1), node(c(star), x(2), x(3))),
                    node(c(star), node(c(circ), x(1), x(2)), x(3)),
                )?;
                Ok(LawFamily { name: "ALD".into(), symbols: SymbolRegistry::star_circ(), laws: vec![sigma, assoc] })
            }
            "LD" => {
                let sigma = OrientedLaw::new(
                    "S",
                    node(c(star), x(1), node(c(star), x(2), x(3))),
                    node(c(star), node(c(star), x(1), x(2)), node(c(star), x(1), x(3))),
                )?;
                Ok(LawFamily { name: "LD".into(), symbols: SymbolRegistry::star_only(), laws: vec![sigma] })
            }
            "A" => {
                let assoc = OrientedLaw::new(
                    "A",
                    node(c(star), x(1), node(c(star), x(2), x(3))),
                    node(c(star), node(c(star), x(1), x(2)), x(3)),
                )?;
                Ok(LawFamily { name: "A".into(), symbols: SymbolRegistry::star_only(), laws: vec![assoc] })
            }
            other => Err(Error::UnknownFamily(other.to_string())),
        }
    }

    /// Load `{"symbols": [...], "laws": [{"name", "lhs", "rhs"}]}`; the sides
    /// may be JSON trees or strings in the term grammar.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let f: FamilyFile = serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
        let symbols = SymbolRegistry::new(&f.symbols)?;
        let side = |v: &serde_json::Value| match v {
            serde_json::Value::String(s) if s.starts_with('(') || s.starts_with('x') => {
                Pattern::parse(s, &symbols)
            }
            other => Pattern::from_json(other, &symbols),
        };
        let mut laws = Vec::new();
        for l in &f.laws {
            let law = OrientedLaw::new(&l.name, side(&l.lhs)?, side(&l.rhs)?)?;
            if laws.iter().any(|o: &OrientedLaw| o.name == law.name) {
                return Err(Error::Malformed(format!("duplicate law name {:?}", law.name)));
            }
            laws.push(law);
        }
        if laws.is_empty() {
            return Err(Error::Malformed("family without laws".into()));
        }
        Ok(LawFamily { name: f.name.unwrap_or_else(|| "custom".into()), symbols, laws })
    }

    pub fn rule_index(&self, name: &str) -> Option<usize> {
        let name = if name == "Σ" { "S" } else { name };
        self.laws.iter().position(|l| l.name == name)
    }

    /// The label put on a node created when wrapping a seed along an
    /// address: the unique symbol, or a fresh symbol-variable.
    pub fn wrap_symbol(&self, fresh: u32) -> Sym {
        if self.symbols.len() == 1 {
            Sym::Const(SymbolId(0))
        } else {
            Sym::Var(fresh)
        }
    }

    pub fn symbol_ids(&self) -> Vec<SymbolId> {
        self.symbols.ids().collect()
    }

    /// Fresh-variable instance of each law as displayed (for documentation
    /// checks): every symbol-variable is expanded over the registry.
    pub fn displayed_instances(&self) -> Vec<(String, Pattern, Pattern)> {
        let mut out = Vec::new();
        for law in &self.laws {
            let svars = law.lhs.sym_vars();
            let mut choices: Vec<Substitution> = vec![Substitution::identity()];
            for k in svars {
                choices = choices
                    .into_iter()
                    .flat_map(|s| {
                        self.symbols.ids().map(move |id| {
                            let mut s = s.clone();
                            s.sym_map.insert(k, Sym::Const(id));
                            s
                        })
                    })
                    .collect();
            }
            for s in choices {
                out.push((
                    law.name.clone(),
                    crate::unify::apply_subst(&law.lhs, &s),
                    crate::unify::apply_subst(&law.rhs, &s),
                ));
            }
        }
        out
    }
}

/// Internal nodes of a pattern that are not leaves: used to find overlaps.
pub fn inner_nodes(p: &Pattern) -> Vec<Address> {
    p.addresses().into_iter().filter(|a| matches!(p.subterm(a), Ok(Tree::Node(..)))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(s: &str) -> Address {
        Address::parse(s).unwrap()
    }

    #[test]
    fn builtin_shapes() {
        let ald = LawFamily::builtin("ALD").unwrap();
        assert_eq!(ald.laws.len(), 2);
        assert_eq!(ald.symbols.len(), 2);
        let ld = LawFamily::builtin("LD").unwrap();
        assert_eq!((ld.laws.len(), ld.symbols.len()), (1, 1));
        let assoc = LawFamily::builtin("A").unwrap();
        assert!(assoc.laws[0].classify().linear);
        assert!(LawFamily::builtin("XYZ").is_err());
    }

    #[test]
    fn classification() {
        let ld = LawFamily::builtin("LD").unwrap();
        let c = ld.laws[0].classify();
        assert!(c.balanced && !c.linear && c.semi_linear);
        let reg = SymbolRegistry::star_only();
        let bad = OrientedLaw::new(
            "B",
            Pattern::parse("x1", &reg).unwrap(),
            Pattern::parse("(x1*x2)", &reg).unwrap(),
        )
        .unwrap();
        assert!(!bad.classify().balanced);
        assert!(matches!(bad.occurrence_profile(), Err(Error::UnbalancedLaw(_))));
        let comm = OrientedLaw::new(
            "C",
            Pattern::parse("(x1*x2)", &reg).unwrap(),
            Pattern::parse("(x2*x1)", &reg).unwrap(),
        )
        .unwrap();
        assert!(comm.classify().involutive && comm.classify().linear);
    }

    #[test]
    fn profiles() {
        let ald = LawFamily::builtin("ALD").unwrap();
        let sigma = ald.laws[0].occurrence_profile().unwrap();
        assert_eq!(sigma.get(1).unwrap().lhs, vec![a("0")]);
        assert_eq!(sigma.get(1).unwrap().rhs, vec![a("00"), a("10")]);
        assert_eq!(sigma.get(2).unwrap().rhs, vec![a("01")]);
        assert_eq!(sigma.get(3).unwrap().rhs, vec![a("11")]);
        let assoc = ald.laws[1].occurrence_profile().unwrap();
        assert_eq!(assoc.get(3).unwrap().lhs, vec![a("11")]);
        assert_eq!(assoc.get(3).unwrap().rhs, vec![a("1")]);
        assert_eq!(assoc.get(2).unwrap().lhs, vec![a("10")]);
        assert_eq!(assoc.get(2).unwrap().rhs, vec![a("01")]);
    }

    #[test]
    fn displayed_laws_match_the_ald_system() {
        let ald = LawFamily::builtin("ALD").unwrap();
        let shown: Vec<String> = ald
            .displayed_instances()
            .iter()
            .map(|(_, l, r)| format!("{} = {}", l.render(&ald.symbols), r.render(&ald.symbols)))
            .collect();
        assert_eq!(
            shown,
            vec![
                "(x1*(x2*x3)) = ((x1*x2)*(x1*x3))",
                "(x1*(x2 o x3)) = ((x1*x2) o (x1*x3))",
                "(x1*(x2*x3)) = ((x1 o x2)*x3)",
            ]
        );
    }

    #[test]
    fn family_file() {
        let text = r#"{"symbols": ["*"], "laws": [
            {"name": "A", "lhs": "(x1*(x2*x3))", "rhs": ["*", ["*", "x1", "x2"], "x3"]}]}"#;
        let f = LawFamily::from_json_str(text).unwrap();
        assert_eq!(f.laws[0], LawFamily::builtin("A").unwrap().laws[0]);
        assert!(LawFamily::from_json_str(r#"{"symbols": ["*"], "laws": []}"#).is_err());
    }
}
