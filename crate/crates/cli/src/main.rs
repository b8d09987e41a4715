use std::ffi::OsString;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use geomon::blueprint::{blueprint, verify_blueprint_group, verify_blueprint_operator};
use geomon::confluence::{
    assemble_presentation, commutation_relations, common_expansion_check, common_right_multiple, expansions,
    inheritance_relations, root_criticals, Bounds, RelationKind,
};
use geomon::group::bdot::{bdot_circ, bdot_shift, bdot_star, BDotPresentation};
use geomon::group::geo::GeoPresentation;
use geomon::group::template::Prover;
use geomon::group::{words_equal, GroupPresentation, GroupWord, Verdict};
use geomon::laws::LawFamily;
use geomon::operator::Sign;
use geomon::suite::{self, SuiteConfig, DEFAULT_BUDGET};
use geomon::term::{terms_up_to, Term};
use geomon::words::{all_letters, apply_letter, orbit, GeneratorWord};
use geomon::Error;

const OK: u8 = 0;
const FAILED: u8 = 1;
const USAGE: u8 = 2;
const UNDECIDED: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "geomon", version, about = "Geometry-monoid workbench for algebraic laws")]
struct Cli {
    /// Built-in law family: ALD, LD or A.
    #[arg(long, global = true, default_value = "ALD")]
    family: String,
    /// JSON family file; overrides --family.
    #[arg(long, global = true)]
    family_file: Option<String>,
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 2024)]
    seed: u64,
    /// Expansion budget for equality searches.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Parse a term (or a pattern with #k symbol-variables) and print it back.
    Parse {
        text: String,
        #[arg(long)]
        pattern: bool,
    },
    /// Apply a generator word to a term.
    Apply {
        #[arg(long)]
        word: String,
        #[arg(long)]
        term: String,
    },
    /// Terms reachable in at most DEPTH steps of either sign.
    Orbit {
        #[arg(long)]
        term: String,
        #[arg(long, default_value_t = 2)]
        depth: usize,
    },
    /// Evaluate a word to its seed.
    Op {
        #[arg(long)]
        word: String,
    },
    /// Commutation and inheritance relations.
    Relations {
        #[arg(long, default_value_t = 2)]
        max_addr: usize,
        #[arg(long, default_value_t = 1)]
        max_delta: usize,
    },
    /// Search completions of the root overlaps.
    Critical {
        #[arg(long, default_value_t = 6)]
        max_len: usize,
    },
    /// Assemble the bounded presentation.
    Present {
        #[arg(long, default_value_t = 2)]
        max_addr: usize,
        #[arg(long, default_value_t = 1)]
        max_delta: usize,
        #[arg(long, default_value_t = 6)]
        max_crit: usize,
    },
    /// Common right multiple of two words.
    Crm {
        left: String,
        right: String,
        #[arg(long, default_value_t = 5)]
        max_len: usize,
    },
    /// Positive expansions of a term.
    Expand {
        #[arg(long)]
        term: String,
        #[arg(long, default_value_t = 2)]
        degree: usize,
    },
    /// Common expansion of all one-step expansions of a term.
    Dexp {
        #[arg(long)]
        term: String,
        #[arg(long, default_value_t = 3)]
        bound: usize,
    },
    /// Certified equality of two group words.
    Geq {
        left: String,
        right: String,
        /// Work in B• instead of the geometry group.
        #[arg(long)]
        bdot: bool,
    },
    /// The operations of B•.
    Bdot {
        #[arg(value_enum)]
        op: BdotOp,
        x: String,
        #[arg(default_value = "1")]
        y: String,
    },
    /// Blueprint word, operator and absorption pair of a term.
    Blueprint { term: String },
    /// Check the blueprint property for all terms up to a size.
    VerifyBlueprint {
        #[arg(long, value_enum, default_value = "op")]
        level: Level,
        #[arg(long, default_value_t = 6)]
        size: usize,
    },
    /// Run the acceptance checks.
    Suite {
        /// Term size bound for the blueprint checks.
        #[arg(long)]
        size: Option<usize>,
        /// Run a single check.
        #[arg(long)]
        only: Option<u8>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum BdotOp {
    Star,
    Circ,
    Shift,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Level {
    Op,
    Group,
}

/// A failed command: message and exit code.
struct Exit(u8, String);

impl From<Error> for Exit {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::ValidationFailure(_) | Error::UndefinedAction(_) => FAILED,
            _ => USAGE,
        };
        Exit(code, e.to_string())
    }
}

struct Ctx {
    family: LawFamily,
    json: bool,
    seed: u64,
    budget: usize,
}

impl Ctx {
    fn term(&self, s: &str) -> Result<Term, Exit> {
        Ok(Term::parse(s, &self.family.symbols)?)
    }

    fn word(&self, s: &str) -> Result<GeneratorWord, Exit> {
        Ok(GeneratorWord::parse(s, &self.family)?)
    }

    fn emit(&self, text: impl FnOnce() -> String, value: impl FnOnce() -> Value) {
        if self.json {
            println!("{}", serde_json::to_string_pretty(&value()).expect("json"));
        } else {
            println!("{}", text());
        }
    }
}

fn main() -> ExitCode {
    ExitCode::from(run(std::env::args_os()))
}

fn run(argv: impl IntoIterator<Item = OsString>) -> u8 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { USAGE } else { OK };
        }
    };
    let family = match &cli.family_file {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| Exit(USAGE, format!("{path}: {e}")))
            .and_then(|s| LawFamily::from_json_str(&s).map_err(Exit::from)),
        None => LawFamily::builtin(&cli.family).map_err(Exit::from),
    };
    let result = family.and_then(|family| {
        let ctx = Ctx { family, json: cli.json, seed: cli.seed, budget: cli.budget };
        dispatch(&ctx, cli.cmd)
    });
    match result {
        Ok(code) => code,
        Err(Exit(code, msg)) => {
            eprintln!("geomon: {msg}");
            code
        }
    }
}

fn dispatch(ctx: &Ctx, cmd: Cmd) -> Result<u8, Exit> {
    let f = &ctx.family;
    let reg = &f.symbols;
    match cmd {
        Cmd::Parse { text, pattern } => {
            if pattern {
                let p = geomon::term::Pattern::parse(&text, reg)?;
                ctx.emit(|| p.render(reg), || p.to_json(reg));
            } else {
                let t = ctx.term(&text)?;
                ctx.emit(
                    || format!("{}\nsize {} depth {}", t.render(reg), t.size(), t.depth()),
                    || json!({"term": t.render(reg), "tree": t.to_json(reg), "size": t.size(), "depth": t.depth()}),
                );
            }
            Ok(OK)
        }
        Cmd::Apply { word, term } => {
            let (w, t) = (ctx.word(&word)?, ctx.term(&term)?);
            match w.eval(f).apply(&t) {
                Some(u) => {
                    ctx.emit(|| u.render(reg), || json!({"result": u.render(reg)}));
                    Ok(OK)
                }
                None => {
                    ctx.emit(|| "undefined".into(), || json!({"result": null}));
                    Ok(FAILED)
                }
            }
        }
        Cmd::Orbit { term, depth } => {
            let t = ctx.term(&term)?;
            let o = orbit(f, &t, depth);
            let all: Vec<String> = o.iter().map(|u| u.render(reg)).collect();
            ctx.emit(|| all.join("\n"), || json!({"term": t.render(reg), "depth": depth, "orbit": all}));
            Ok(OK)
        }
        Cmd::Op { word } => {
            let op = ctx.word(&word)?.eval(f);
            ctx.emit(|| op.render(reg), || op.to_json(reg));
            Ok(OK)
        }
        Cmd::Relations { max_addr, max_delta } => {
            let mut rels = commutation_relations(f, max_addr);
            rels.extend(inheritance_relations(f, max_addr, max_delta));
            ctx.emit(
                || rels.iter().map(|r| format!("{:<12} {}", r.kind.to_string(), r.render(f))).collect::<Vec<_>>().join("\n"),
                || Value::Array(rels.iter().map(|r| r.to_json(f)).collect()),
            );
            Ok(OK)
        }
        Cmd::Critical { max_len } => {
            let crits = root_criticals(f, max_len);
            let row = |c: &geomon::confluence::CriticalOutcome| match &c.completion {
                Some((l, r)) => format!("{} / {}: {} = {}", c.a.render(f), c.b.render(f), l.render(f), r.render(f)),
                None => format!("{} / {}: none within {max_len}", c.a.render(f), c.b.render(f)),
            };
            ctx.emit(
                || crits.iter().map(row).collect::<Vec<_>>().join("\n"),
                || {
                    Value::Array(
                        crits
                            .iter()
                            .map(|c| {
                                json!({
                                    "a": c.a.render(f),
                                    "b": c.b.render(f),
                                    "left": c.completion.as_ref().map(|p| p.0.render(f)),
                                    "right": c.completion.as_ref().map(|p| p.1.render(f)),
                                    "expanded": c.stats.expanded,
                                })
                            })
                            .collect(),
                    )
                },
            );
            Ok(if crits.iter().all(|c| c.completion.is_some()) { OK } else { UNDECIDED })
        }
        Cmd::Present { max_addr, max_delta, max_crit } => {
            let p = assemble_presentation(f, Bounds { max_addr, max_delta, max_crit });
            let counts = [RelationKind::Commutation, RelationKind::Inheritance, RelationKind::Critical]
                .map(|k| (k.to_string(), p.count(k)));
            ctx.emit(
                || {
                    let mut s = format!("{} generators, {} relations", p.alphabet.len(), p.relations.len());
                    for (k, n) in &counts {
                        s.push_str(&format!("\n  {k}: {n}"));
                    }
                    for c in p.criticals.iter().filter(|c| c.completion.is_none()) {
                        s.push_str(&format!("\n  uncompleted overlap {} / {}", c.a.render(f), c.b.render(f)));
                    }
                    s
                },
                || {
                    json!({
                        "generators": p.alphabet.iter().map(|l| l.render(f)).collect::<Vec<_>>(),
                        "relations": p.relations.iter().map(|r| r.to_json(f)).collect::<Vec<_>>(),
                    })
                },
            );
            Ok(OK)
        }
        Cmd::Crm { left, right, max_len } => {
            let (u, v) = (ctx.word(&left)?, ctx.word(&right)?);
            let (m, stats) = common_right_multiple(f, &u, &v, max_len);
            match m {
                Some(m) => {
                    ctx.emit(
                        || {
                            format!(
                                "{} · {} = {} · {}{}",
                                u.render(f),
                                m.u.render(f),
                                v.render(f),
                                m.v.render(f),
                                if m.strong { " (strong)" } else { "" }
                            )
                        },
                        || json!({"u": m.u.render(f), "v": m.v.render(f), "strong": m.strong}),
                    );
                    Ok(OK)
                }
                None => {
                    ctx.emit(
                        || format!("undecided after {} expansions", stats.expanded),
                        || json!({"undecided": true, "expanded": stats.expanded}),
                    );
                    Ok(UNDECIDED)
                }
            }
        }
        Cmd::Expand { term, degree } => {
            let t = ctx.term(&term)?;
            let all: Vec<String> = expansions(f, &t, degree).iter().map(|u| u.render(reg)).collect();
            ctx.emit(|| all.join("\n"), || json!(all));
            Ok(OK)
        }
        Cmd::Dexp { term, bound } => {
            let t = ctx.term(&term)?;
            match common_expansion_check(f, &t, bound) {
                Some(u) => {
                    ctx.emit(|| u.render(reg), || json!({"common": u.render(reg)}));
                    Ok(OK)
                }
                None => {
                    ctx.emit(|| "undecided".into(), || json!({"common": null}));
                    Ok(UNDECIDED)
                }
            }
        }
        Cmd::Geq { left, right, bdot } => {
            if bdot {
                let pres = BDotPresentation::default();
                geq(ctx, &pres, &GroupWord::parse(&left, &[])?, &GroupWord::parse(&right, &[])?)
            } else {
                let pres = GeoPresentation::new(f, 6);
                let names = pres.rule_names();
                geq(ctx, &pres, &GroupWord::parse(&left, &names)?, &GroupWord::parse(&right, &names)?)
            }
        }
        Cmd::Bdot { op, x, y } => {
            let (x, y) = (GroupWord::parse(&x, &[])?, GroupWord::parse(&y, &[])?);
            let r = match op {
                BdotOp::Star => bdot_star(&x, &y),
                BdotOp::Circ => bdot_circ(&x, &y),
                BdotOp::Shift => bdot_shift(&x),
            };
            ctx.emit(|| r.render(&[]), || json!(r.render(&[])));
            Ok(OK)
        }
        Cmd::Blueprint { term } => {
            let t = ctx.term(&term)?;
            let b = blueprint(f, &t)?;
            ctx.emit(
                || {
                    format!(
                        "word      {}\noperator  {}\nabsorbs   x^[n] -> t * x^[n-{}] for n >= {}",
                        b.word.render(f),
                        b.operator.render(reg),
                        b.p,
                        b.n0
                    )
                },
                || json!({"word": b.word.render(f), "operator": b.operator.to_json(reg), "n0": b.n0, "p": b.p}),
            );
            Ok(OK)
        }
        Cmd::VerifyBlueprint { level, size } => verify_all(ctx, level, size),
        Cmd::Suite { size, only } => {
            if f.name != "ALD" {
                return Err(Exit(USAGE, "the acceptance suite is defined for the ALD family".into()));
            }
            let mut cfg = SuiteConfig { seed: ctx.seed, budget: ctx.budget, ..SuiteConfig::default() };
            if let Some(n) = size {
                cfg.term_size = n;
                cfg.group_size = n;
            }
            let ids: Vec<u8> = match only {
                Some(id) if suite::CHECKS.iter().any(|c| c.0 == id) => vec![id],
                Some(id) => return Err(Exit(USAGE, format!("no check {id}"))),
                None => suite::CHECKS.iter().map(|c| c.0).collect(),
            };
            let mut all_ok = true;
            let mut out = Vec::new();
            for id in ids {
                let o = suite::run_check(id, &cfg);
                all_ok &= o.passed();
                if !ctx.json {
                    println!("{}", o.line());
                }
                out.push(o.to_json());
            }
            if ctx.json {
                println!("{}", serde_json::to_string_pretty(&json!({"seed": cfg.seed, "checks": out})).expect("json"));
            }
            Ok(if all_ok { OK } else { FAILED })
        }
    }
}

fn geq(ctx: &Ctx, pres: &dyn GroupPresentation, u: &GroupWord, v: &GroupWord) -> Result<u8, Exit> {
    let names = pres.rule_names();
    match words_equal(pres, u, v, ctx.budget) {
        Verdict::Equal(c) => {
            ctx.emit(
                || {
                    let mut s = format!("equal ({} steps)", c.len());
                    if let Ok(words) = c.words() {
                        for (m, w) in c.moves.iter().zip(words.iter().skip(1)) {
                            let why = match m {
                                geomon::group::Move::Relation { relation, .. } => pres.describe(relation),
                                geomon::group::Move::InsertCancel { .. } => "insert x x^-1".into(),
                                geomon::group::Move::DeleteCancel { .. } => "delete x x^-1".into(),
                            };
                            s.push_str(&format!("\n  {:<40} {why}", w.render(&names)));
                        }
                    }
                    s
                },
                || c.to_json(pres),
            );
            Ok(OK)
        }
        Verdict::Undecided(stats) => {
            ctx.emit(
                || format!("undecided after {} expansions ({} words seen)", stats.expanded, stats.visited),
                || json!({"undecided": true, "expanded": stats.expanded, "visited": stats.visited}),
            );
            Ok(UNDECIDED)
        }
    }
}

fn verify_all(ctx: &Ctx, level: Level, size: usize) -> Result<u8, Exit> {
    let f = &ctx.family;
    if f.name != "ALD" {
        return Err(Exit(USAGE, "blueprints are defined for the ALD family".into()));
    }
    let terms = terms_up_to(size, &f.symbol_ids(), 1);
    let pres = GeoPresentation::ald();
    let prover = Prover::new(&pres);
    let (mut pairs, mut failures, mut undecided) = (0usize, Vec::new(), 0usize);
    for t in &terms {
        for l in all_letters(f, t.depth(), &[Sign::Pos, Sign::Neg]) {
            if apply_letter(f, &l, t).is_none() {
                continue;
            }
            pairs += 1;
            let name = format!("{} · {}", t.render(&f.symbols), l.render(f));
            match level {
                Level::Op => {
                    if !verify_blueprint_operator(f, t, &GeneratorWord(vec![l.clone()]))? {
                        failures.push(name);
                    }
                }
                Level::Group => {
                    let g = verify_blueprint_group(&pres, &prover, t, &l, ctx.budget)?;
                    match &g.verdict {
                        Verdict::Equal(c) if c.proves(&pres, &g.start, &g.target) => {}
                        Verdict::Equal(_) => failures.push(name),
                        Verdict::Undecided(_) => undecided += 1,
                    }
                }
            }
        }
    }
    ctx.emit(
        || {
            let mut s = format!("{} terms, {pairs} pairs, {} failures, {undecided} undecided", terms.len(), failures.len());
            for n in &failures {
                s.push_str(&format!("\n  fails: {n}"));
            }
            s
        },
        || json!({"terms": terms.len(), "pairs": pairs, "failures": failures, "undecided": undecided}),
    );
    Ok(if !failures.is_empty() {
        FAILED
    } else if undecided > 0 {
        UNDECIDED
    } else {
        OK
    })
}
