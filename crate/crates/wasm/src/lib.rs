//! Browser bindings: rewrite a term by a word, show its blueprint, and
//! compute in B•. Every export takes and returns strings; structured
//! results are JSON.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use geomon::blueprint;
use geomon::group::bdot::{bdot_circ, bdot_shift, bdot_star};
use geomon::group::GroupWord;
use geomon::laws::LawFamily;
use geomon::operator::Sign;
use geomon::term::Term;
use geomon::words::{all_letters, apply_letter, GeneratorWord};

fn ald() -> LawFamily {
    LawFamily::builtin("ALD").expect("builtin family")
}

fn err(e: impl ToString) -> String {
    e.to_string()
}

pub fn apply_json(word: &str, term: &str) -> Result<Value, String> {
    let f = ald();
    let t = Term::parse(term, &f.symbols).map_err(err)?;
    let w = GeneratorWord::parse(word, &f).map_err(err)?;
    let op = w.eval(&f);
    let result = op.apply(&t).map(|u| u.render(&f.symbols));
    let letters: Vec<Value> = all_letters(&f, t.depth(), &[Sign::Pos, Sign::Neg])
        .iter()
        .filter_map(|l| apply_letter(&f, l, &t).map(|u| json!({"letter": l.render(&f), "image": u.render(&f.symbols)})))
        .collect();
    Ok(json!({
        "term": t.render(&f.symbols),
        "operator": op.render(&f.symbols),
        "result": result,
        "letters": letters,
    }))
}

pub fn blueprint_json(term: &str) -> Result<Value, String> {
    let f = ald();
    let t = Term::parse(term, &f.symbols).map_err(err)?;
    let b = blueprint::blueprint(&f, &t).map_err(err)?;
    Ok(json!({
        "term": t.render(&f.symbols),
        "word": b.word.render(&f),
        "operator": b.operator.render(&f.symbols),
        "n0": b.n0,
        "p": b.p,
    }))
}

pub fn bdot_text(op: &str, x: &str, y: &str) -> Result<String, String> {
    let x = GroupWord::parse(x, &[]).map_err(err)?;
    let y = GroupWord::parse(y, &[]).map_err(err)?;
    let r = match op {
        "star" => bdot_star(&x, &y),
        "circ" => bdot_circ(&x, &y),
        "shift" => bdot_shift(&x),
        other => return Err(format!("unknown operation {other:?}")),
    };
    Ok(r.render(&[]))
}

/// `{term, operator, result, letters}` for `word` applied to `term`.
#[wasm_bindgen]
pub fn apply(word: &str, term: &str) -> Result<String, JsError> {
    apply_json(word, term).map(|v| v.to_string()).map_err(|e| JsError::new(&e))
}

/// `{term, word, operator, n0, p}`.
#[wasm_bindgen(js_name = blueprint)]
pub fn blueprint_of(term: &str) -> Result<String, JsError> {
    blueprint_json(term).map(|v| v.to_string()).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn bdot(op: &str, x: &str, y: &str) -> Result<String, JsError> {
    bdot_text(op, x, y).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exports_compute() {
        let v = apply_json("S+e", "(x1*((x2 o x3)*x4))").unwrap();
        assert_eq!(v["result"], "((x1*(x2 o x3))*(x1*x4))");
        assert_eq!(v["letters"].as_array().unwrap().len(), 3);
        assert_eq!(apply_json("S+e S+1 S-e", "x1").unwrap()["operator"], "empty");
        assert_eq!(blueprint_json("((x o x)*x)").unwrap()["word"], "A+e S+e A-1");
        assert_eq!(bdot_text("star", "s1", "1").unwrap(), "s1 s1 s2^-1");
        assert!(bdot_text("cross", "1", "1").is_err());
        assert!(blueprint_json("(x1*x2)").is_err());
    }
}
