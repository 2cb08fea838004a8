//! `proportia`: solve, check and audit analogical proportions from the shell.
//!
//! Exit status is 0 whenever a question was answered, negative verdicts
//! included, 1 for usage and spec errors, and 2 when a scope limit stopped
//! the computation before any verdict.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use proportia_core::algebra::{AlgebraPair, ElemId, PartialAlgebra};
use proportia_core::axioms::{Auditor, Axiom, AxiomReport, Instance};
use proportia_core::baselines::{self, Model, Witness};
use proportia_core::builtins::{allowed_keys, builtin, primitives, Params, KINDS};
use proportia_core::clone::{Bounds, ClassSet, DEFAULT_CAP, DEFAULT_MAX_ARITY, DEFAULT_MAX_DEPTH};
use proportia_core::justification::{is_characteristic, is_trivial, witnesses, Justification};
use proportia_core::naive;
use proportia_core::solver::{self, Route, SolutionReport};
use proportia_core::specfile::{bundled_registry, load_spec, Registry};
use proportia_core::{parse_query, Error, ProportionQuery};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "proportia",
    version,
    about = "Analogical proportions over finite algebras"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Algebra spec file; the bundled example structures are used otherwise.
    #[arg(long, global = true, env = "PROPORTIA_SPEC_PATH")]
    spec: Option<PathBuf>,
    /// `A` for a single algebra or `A,B` for a source/target pair.
    #[arg(long, global = true)]
    pair: Option<String>,
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_ARITY)]
    max_arity: usize,
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_DEPTH)]
    max_depth: usize,
    /// Maximum number of term classes per arity.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    cap: usize,
    #[arg(long, global = true)]
    json: bool,
    /// Re-run solve/holds through direct term enumeration and compare.
    #[arg(long, global = true)]
    oracle: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Solve `a:b::c:z`.
    Solve { query: String },
    /// Decide `a:b::c:d`.
    Holds { query: String },
    /// List the justifications of `a:b::c:d`.
    Justify {
        query: String,
        /// Maximum number of justifications listed.
        #[arg(long, default_value_t = 50)]
        limit: usize,
    },
    /// Audit the proportion axioms on one algebra.
    Axioms {
        #[arg(long)]
        algebra: Option<String>,
        #[arg(long)]
        axiom: Option<String>,
        /// Counterexamples shown per axiom.
        #[arg(long, default_value_t = 5)]
        show: usize,
    },
    /// Evaluate a baseline model on one tuple.
    Baseline {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(num_args = 4, value_names = ["A", "B", "C", "D"], allow_hyphen_values = true)]
        tuple: Vec<String>,
    },
    /// Compare a baseline model with the solver on every tuple.
    Compare {
        #[command(flatten)]
        model: ModelArgs,
        /// Maximum number of tuples scanned.
        #[arg(long, default_value_t = baselines::DEFAULT_SCOPE_LIMIT)]
        limit: usize,
        /// Disagreements listed per direction.
        #[arg(long, default_value_t = 10)]
        show: usize,
    },
    /// Print every enumerated term class with its tables.
    DumpClasses,
    /// Print the builtin algebra kinds and the loaded algebras.
    ListBuiltins,
}

#[derive(Args)]
struct ModelArgs {
    /// sy_sets, mbd_sets or sy_numbers.
    #[arg(long)]
    model: String,
    /// Universe of the set models, e.g. `a,b`.
    #[arg(long)]
    universe: Option<String>,
    /// Integers in `-N..N` for the numeric model.
    #[arg(long)]
    range: Option<i64>,
}

struct Output {
    json: Value,
    text: String,
}

enum Failure {
    Usage(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Core(Error::ScopeTooLarge { .. }) => 2,
            _ => 1,
        }
    }

    fn record(&self) -> Value {
        match self {
            Failure::Usage(message) => json!({"error": "usage", "message": message}),
            Failure::Core(e) => json!({"error": error_kind(e), "message": e.to_string()}),
        }
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Syntax { .. } => "syntax",
        Error::UnknownSymbol(_) => "unknown_symbol",
        Error::ArityMismatch { .. } => "arity_mismatch",
        Error::InvalidLanguage(_) => "invalid_language",
        Error::UnboundVariable(_) => "unbound_variable",
        Error::UnknownConstant(_) => "unknown_constant",
        Error::BadParams { .. } => "bad_params",
        Error::ElementNotInCarrier { .. } => "element_not_in_carrier",
        Error::LanguageMismatch { .. } => "language_mismatch",
        Error::MissingAlgebra(_) => "missing_algebra",
        Error::UnknownAlgebra(_) => "unknown_algebra",
        Error::Spec { .. } => "spec",
        Error::InvalidBounds(_) => "invalid_bounds",
        Error::NotAJustification => "not_a_justification",
        Error::TermOutOfBounds(_) => "term_out_of_bounds",
        Error::UndefinedAt(_) => "undefined_at",
        Error::NotSingleDomain => "not_single_domain",
        Error::NotSubsetOfUniverse { .. } => "not_subset_of_universe",
        Error::OutOfBound { .. } => "out_of_bound",
        Error::ScopeTooLarge { .. } => "scope_too_large",
        Error::Unsupported(_) => "unsupported",
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let failure = Failure::Usage(e.render().to_string().trim_end().to_string());
            eprintln!("{}", failure.record());
            return ExitCode::from(failure.code());
        }
    };
    match run(&cli) {
        Ok(out) => {
            if cli.global.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&out.json).expect("values serialize")
                );
            } else {
                print!("{}", out.text);
            }
            ExitCode::SUCCESS
        }
        Err(failure) => {
            eprintln!("{}", failure.record());
            ExitCode::from(failure.code())
        }
    }
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    let g = &cli.global;
    let bounds = Bounds::new(g.max_arity, g.max_depth, g.cap);
    match &cli.command {
        Command::Solve { query } => {
            let (reg, query) = (registry(g)?, parse_query(query)?);
            if !query.is_solve() {
                return Err(Failure::Usage(
                    "solve expects `z` in the fourth place".into(),
                ));
            }
            let pair = pair_for(&reg, g, Some(&query))?;
            let (a, b, c) = source_target(&pair, &query)?;
            let cs = ClassSet::enumerate(&pair, bounds)?;
            let report = solver::solve(&cs, a, b, c)?;
            let oracle = if g.oracle {
                Some(naive::solve(
                    &pair,
                    bounds,
                    a,
                    b,
                    c,
                    naive::DEFAULT_TERM_LIMIT,
                )?)
            } else {
                None
            };
            Ok(solve_output(&cs, &query, &report, oracle.as_ref()))
        }
        Command::Holds { query } => {
            let (reg, query) = (registry(g)?, parse_query(query)?);
            let pair = pair_for(&reg, g, Some(&query))?;
            let (a, b, c) = source_target(&pair, &query)?;
            let d = target_d(&pair, &query, "holds")?;
            let cs = ClassSet::enumerate(&pair, bounds)?;
            let report = solver::holds(&cs, a, b, c, d)?;
            let oracle = if g.oracle {
                Some(naive::solve(
                    &pair,
                    bounds,
                    a,
                    b,
                    c,
                    naive::DEFAULT_TERM_LIMIT,
                )?)
            } else {
                None
            };
            let tgt = pair.target();
            let mut text = header(&cs);
            let verdict = if report.holds { "holds" } else { "fails" };
            let _ = writeln!(text, "{query}: {verdict}");
            let mut j = json!({
                "query": query.to_string(),
                "holds": report.holds,
                "route": match report.route {
                    Route::Characteristic => "characteristic",
                    Route::Exhaustive => "exhaustive",
                },
                "characteristic": report.characteristic.map(|j| j.render(&cs)),
                "dominated_by": report.dominance.map(|dom| json!({
                    "d": tgt.literal(dom.by),
                    "separating": dom.separating.render(&cs),
                })),
            });
            if let Some(ch) = report.characteristic {
                let _ = writeln!(text, "  characteristic justification {}", ch.render(&cs));
            }
            if let Some(dom) = report.dominance {
                let _ = writeln!(
                    text,
                    "  dominated by {} via {}",
                    tgt.literal(dom.by),
                    dom.separating.render(&cs)
                );
            }
            if let Some(o) = &oracle {
                let agrees = o.solutions.contains(&d) == report.holds;
                let _ = writeln!(text, "oracle: {} ({} terms)", agreement(agrees), o.terms);
                j["oracle"] =
                    json!({"holds": o.solutions.contains(&d), "agrees": agrees, "terms": o.terms});
            }
            Ok(Output {
                json: qualified(j, &cs),
                text,
            })
        }
        Command::Justify { query, limit } => {
            let (reg, query) = (registry(g)?, parse_query(query)?);
            let pair = pair_for(&reg, g, Some(&query))?;
            let (a, b, c) = source_target(&pair, &query)?;
            let d = target_d(&pair, &query, "justify")?;
            let cs = ClassSet::enumerate(&pair, bounds)?;
            Ok(justify_output(&cs, &query, [a, b, c, d], *limit)?)
        }
        Command::Axioms {
            algebra,
            axiom,
            show,
        } => {
            let reg = registry(g)?;
            let pair = match algebra {
                Some(name) => AlgebraPair::single(reg.get(name)?),
                None => pair_for(&reg, g, None)?,
            };
            let axioms = match axiom {
                Some(id) => vec![id.parse::<Axiom>()?],
                None => Axiom::ALL.to_vec(),
            };
            let cs = ClassSet::enumerate(&pair, bounds)?;
            let mut auditor = Auditor::new(&cs)?;
            let reports = axioms
                .into_iter()
                .map(|ax| auditor.check(ax))
                .collect::<proportia_core::Result<Vec<_>>>()?;
            Ok(axioms_output(&cs, &reports, *show))
        }
        Command::Baseline { model, tuple } => baseline_output(model, tuple),
        Command::Compare { model, limit, show } => {
            let (m, alg) = model_algebra(model)?;
            let cs = ClassSet::enumerate(&AlgebraPair::single(alg.clone().into()), bounds)?;
            let report = baselines::compare(m, &cs, *limit)?;
            let lit = |t: &[ElemId; 4]| proportion_text(&alg, t);
            let mut text = format!(
                "{}  {}  saturated {:?}\n",
                alg.name(),
                cs.bounds(),
                cs.saturated()
            );
            let _ = writeln!(
                text,
                "{m}: {} tuples, both {}, neither {}, baseline only {}, solver only {}",
                report.tuples,
                report.both,
                report.neither,
                report.baseline_only.len(),
                report.solver_only.len()
            );
            let strict = report.baseline_only.is_empty() && !report.solver_only.is_empty();
            let _ = writeln!(
                text,
                "baseline implies solver: {}; strictly: {}",
                report.baseline_only.is_empty(),
                strict
            );
            for (label, list) in [
                ("baseline only", &report.baseline_only),
                ("solver only", &report.solver_only),
            ] {
                for t in list.iter().take(*show) {
                    let _ = writeln!(text, "  {label}: {}", lit(t));
                }
            }
            let j = json!({
                "model": m.id(),
                "algebra": alg.name(),
                "tuples": report.tuples,
                "both": report.both,
                "neither": report.neither,
                "baseline_only": report.baseline_only.iter().map(lit).collect::<Vec<_>>(),
                "solver_only": report.solver_only.iter().map(lit).collect::<Vec<_>>(),
            });
            Ok(Output {
                json: qualified(j, &cs),
                text,
            })
        }
        Command::DumpClasses => {
            let reg = registry(g)?;
            let pair = pair_for(&reg, g, None)?;
            let cs = ClassSet::enumerate(&pair, bounds)?;
            let mut text = format!(
                "{}  {}  saturated {:?}\n",
                pair_name(&pair),
                cs.bounds(),
                cs.saturated()
            );
            text.push_str(&cs.dump());
            let lits = |alg: &PartialAlgebra, t: &[ElemId]| -> Vec<String> {
                t.iter().map(|&e| alg.literal(e).to_string()).collect()
            };
            let classes: Vec<Value> = cs
                .classes()
                .iter()
                .map(|c| {
                    json!({
                        "arity": c.arity,
                        "depth": c.depth,
                        "representative": c.representative_text(),
                        "source": lits(pair.source(), cs.source_table(c.id)),
                        "target": lits(pair.target(), cs.target_table(c.id)),
                    })
                })
                .collect();
            Ok(Output {
                json: qualified(json!({"pair": pair_name(&pair), "classes": classes}), &cs),
                text,
            })
        }
        Command::ListBuiltins => {
            let reg = registry(g)?;
            let mut text = String::from("builtin kinds:\n");
            let mut kinds = Vec::new();
            for &kind in KINDS {
                let keys = allowed_keys(kind).unwrap_or(&[]);
                let prims: Vec<String> = primitives(kind)
                    .iter()
                    .map(|(s, r)| format!("{s}/{r}"))
                    .collect();
                let _ = writeln!(
                    text,
                    "  {kind}  keys: {}  ops: {}",
                    keys.join(", "),
                    prims.join(", ")
                );
                kinds.push(json!({"kind": kind, "keys": keys, "ops": prims}));
            }
            text.push_str("loaded algebras:\n");
            let mut loaded = Vec::new();
            for name in reg.names() {
                let alg = reg.get(name)?;
                let _ = writeln!(
                    text,
                    "  {name}  {}  |A|={}  {}",
                    alg.kind(),
                    alg.size(),
                    alg.language()
                );
                loaded.push(json!({
                    "name": name,
                    "kind": alg.kind(),
                    "size": alg.size(),
                    "language": alg.language().to_string(),
                }));
            }
            Ok(Output {
                json: json!({"kinds": kinds, "algebras": loaded}),
                text,
            })
        }
    }
}

fn registry(g: &Global) -> Result<Registry, Failure> {
    Ok(match &g.spec {
        Some(path) => load_spec(path)?,
        None => bundled_registry(),
    })
}

/// The `@` suffix of a query wins over `--pair`; a spec with one algebra
/// needs neither.
fn pair_for(
    reg: &Registry,
    g: &Global,
    query: Option<&ProportionQuery>,
) -> Result<AlgebraPair, Failure> {
    if let Some(ProportionQuery {
        source: Some(s),
        target: Some(t),
        ..
    }) = query
    {
        return Ok(AlgebraPair::new(reg.get(s)?, reg.get(t)?)?);
    }
    if let Some(p) = &g.pair {
        return Ok(reg.pair(p)?);
    }
    match reg.len() {
        1 => Ok(reg.pair(reg.names().next().expect("one algebra"))?),
        n => Err(Error::MissingAlgebra(n).into()),
    }
}

fn pair_name(pair: &AlgebraPair) -> String {
    if pair.is_single_domain() {
        pair.source().name().to_string()
    } else {
        format!("{},{}", pair.source().name(), pair.target().name())
    }
}

fn source_target(
    pair: &AlgebraPair,
    q: &ProportionQuery,
) -> Result<(ElemId, ElemId, ElemId), Failure> {
    Ok((
        pair.source().element(&q.a)?,
        pair.source().element(&q.b)?,
        pair.target().element(&q.c)?,
    ))
}

fn target_d(pair: &AlgebraPair, q: &ProportionQuery, cmd: &str) -> Result<ElemId, Failure> {
    match &q.d {
        Some(d) => Ok(pair.target().element(d)?),
        None => Err(Failure::Usage(format!(
            "{cmd} needs a literal in the fourth place"
        ))),
    }
}

fn header(cs: &ClassSet) -> String {
    let mut s = format!(
        "{}  {}  saturated {:?}\n",
        pair_name(cs.pair()),
        cs.bounds(),
        cs.saturated()
    );
    for w in cs.warnings() {
        let _ = writeln!(s, "warning: arity {}: {}", w.arity, w.message);
    }
    s
}

fn agreement(agrees: bool) -> &'static str {
    if agrees {
        "agrees"
    } else {
        "DISAGREES"
    }
}

/// Adds the bounds under which a verdict was computed.
fn qualified(mut j: Value, cs: &ClassSet) -> Value {
    j["pair"] = json!(pair_name(cs.pair()));
    j["bounds"] = json!(cs.bounds());
    j["saturated"] = json!(cs.saturated());
    j["cap_hit"] = json!(cs.cap_hit());
    j["warnings"] = json!(cs.warnings());
    j
}

fn solve_output(
    cs: &ClassSet,
    query: &ProportionQuery,
    report: &SolutionReport,
    oracle: Option<&naive::NaiveReport>,
) -> Output {
    let tgt = cs.pair().target();
    let sols: Vec<&str> = report.solutions.iter().map(|&d| tgt.literal(d)).collect();
    let mut text = header(cs);
    let _ = writeln!(text, "{query}");
    let _ = writeln!(text, "solutions: {}", sols.join(" "));
    if report.degenerate_trivial {
        let _ = writeln!(
            text,
            "every justification set is trivial; all elements are solutions"
        );
    }
    let mut j = json!({
        "query": query.to_string(),
        "solutions": sols,
        "degenerate_trivial": report.degenerate_trivial,
        "rejected": report.dominance.iter().map(|dom| json!({
            "d": tgt.literal(dom.rejected),
            "by": tgt.literal(dom.by),
            "separating": dom.separating.render(cs),
        })).collect::<Vec<_>>(),
    });
    if let Some(o) = oracle {
        let agrees = o.solutions == report.solutions;
        let lits: Vec<&str> = o.solutions.iter().map(|&d| tgt.literal(d)).collect();
        let _ = writeln!(
            text,
            "oracle: {} ({} terms): {}",
            agreement(agrees),
            o.terms,
            lits.join(" ")
        );
        j["oracle"] = json!({"solutions": lits, "agrees": agrees, "terms": o.terms});
    }
    Output {
        json: qualified(j, cs),
        text,
    }
}

fn tuple_text(alg: &PartialAlgebra, t: &[ElemId]) -> String {
    let items: Vec<&str> = t.iter().map(|&e| alg.literal(e)).collect();
    format!("({})", items.join(","))
}

fn justify_output(
    cs: &ClassSet,
    query: &ProportionQuery,
    [a, b, c, d]: [ElemId; 4],
    limit: usize,
) -> Result<Output, Failure> {
    let solutions = solver::solve(cs, a, b, c)?;
    let set = solutions.table.jus_set(cs, d);
    let mut text = header(cs);
    let verdict = if solutions.is_solution(d) {
        "holds"
    } else {
        "fails"
    };
    let _ = writeln!(text, "{query}: {verdict}, {} justification(s)", set.len());
    let mut members = Vec::new();
    for &j in set.members.iter().take(limit) {
        let (line, record) = member(cs, j, [a, b, c, d])?;
        text.push_str(&line);
        members.push(record);
    }
    if set.len() > limit {
        let _ = writeln!(text, "  ... {} more", set.len() - limit);
    }
    let j = json!({
        "query": query.to_string(),
        "holds": solutions.is_solution(d),
        "total": set.len(),
        "justifications": members,
    });
    Ok(Output {
        json: qualified(j, cs),
        text,
    })
}

fn member(
    cs: &ClassSet,
    j: Justification,
    [a, b, c, d]: [ElemId; 4],
) -> Result<(String, Value), Failure> {
    let w = witnesses(cs, j, a, b, c, d);
    let (src, tgt) = (cs.pair().source(), cs.pair().target());
    let triv = is_trivial(cs, j);
    let ch = is_characteristic(cs, j, a, b, c, d)?;
    let mut tags = Vec::new();
    if triv.trivial {
        tags.push(if triv.partial {
            "trivial (partial)"
        } else {
            "trivial"
        });
    }
    let ch_id = serde_json::to_value(ch).expect("serializes");
    if matches!(
        ch,
        proportia_core::Characteristic::YesByInjectivity
            | proportia_core::Characteristic::YesByExhaustion
    ) {
        tags.push("characteristic");
    }
    let line = format!(
        "  {}  [{} -> {}]{}\n",
        j.render(cs),
        tuple_text(src, &w.source[0]),
        tuple_text(tgt, &w.target[0]),
        if tags.is_empty() {
            String::new()
        } else {
            format!("  {}", tags.join(", "))
        }
    );
    let record = json!({
        "justification": j.render(cs),
        "source_witnesses": w.source.iter().map(|t| tuple_text(src, t)).collect::<Vec<_>>(),
        "target_witnesses": w.target.iter().map(|t| tuple_text(tgt, t)).collect::<Vec<_>>(),
        "trivial": triv.trivial,
        "partial": triv.partial,
        "characteristic": ch_id,
    });
    Ok((line, record))
}

fn proportion_text(alg: &PartialAlgebra, t: &[ElemId; 4]) -> String {
    let [a, b, c, d] = t.map(|e| alg.literal(e));
    format!("{a}:{b}::{c}:{d}")
}

fn instance_text(alg: &PartialAlgebra, cs: &ClassSet, inst: &Instance) -> String {
    let t = proportion_text(alg, &inst.tuple);
    match (&inst.holds, &inst.dominance) {
        (true, _) => format!("{t} holds"),
        (false, Some(dom)) => format!(
            "{t} fails (dominated by {} via {})",
            alg.literal(dom.by),
            dom.separating.render(cs)
        ),
        (false, None) => format!("{t} fails"),
    }
}

fn axioms_output(cs: &ClassSet, reports: &[AxiomReport], show: usize) -> Output {
    let alg = cs.pair().source();
    let mut text = format!(
        "{}  {}  saturated {:?}\n",
        alg.name(),
        cs.bounds(),
        cs.saturated()
    );
    let mut list = Vec::new();
    for r in reports {
        let verdict = match r.verdict {
            proportia_core::axioms::Verdict::HoldsExhaustively => "holds_exhaustively",
            proportia_core::axioms::Verdict::Fails => "fails",
        };
        let _ = writeln!(
            text,
            "{}: {verdict} ({} counterexamples, {} tuples checked)",
            r.axiom, r.total_counterexamples, r.tuples_checked
        );
        let mut cexs = Vec::new();
        for cex in &r.counterexamples {
            let premise = instance_text(alg, cs, &cex.premise);
            let conclusion = cex.conclusion.as_ref().map(|c| instance_text(alg, cs, c));
            if cexs.len() < show {
                match &conclusion {
                    Some(c) => {
                        let _ = writeln!(text, "  {premise}, but {c}");
                    }
                    None => {
                        let _ = writeln!(text, "  {premise}");
                    }
                }
            }
            cexs.push(json!({"premise": premise, "conclusion": conclusion}));
        }
        list.push(json!({
            "axiom": r.axiom.id(),
            "verdict": verdict,
            "total_counterexamples": r.total_counterexamples,
            "tuples_checked": r.tuples_checked,
            "counterexamples": cexs,
        }));
    }
    Output {
        json: qualified(json!({"algebra": alg.name(), "axioms": list}), cs),
        text,
    }
}

/// The algebra a baseline model is compared on: a powerset with
/// intersection, union, complement and every set named, or an integer
/// interval with addition and every number named.
fn model_algebra(args: &ModelArgs) -> Result<(Model, PartialAlgebra), Failure> {
    let model: Model = args.model.parse()?;
    let params = |items: &[(&str, String)]| -> Params {
        items
            .iter()
            .map(|(k, v)| (k.to_string(), v.clone()))
            .collect()
    };
    let alg = match model {
        Model::SySets | Model::MbdSets => {
            let universe = args
                .universe
                .as_ref()
                .ok_or_else(|| Failure::Usage(format!("{model} needs --universe")))?;
            builtin(
                "powerset",
                "universe",
                &params(&[
                    ("universe", universe.clone()),
                    ("ops", "cap,cup,comp".into()),
                    ("consts", "all".into()),
                ]),
            )?
        }
        Model::SyNumbers => {
            let n = args
                .range
                .ok_or_else(|| Failure::Usage(format!("{model} needs --range")))?;
            if n < 0 {
                return Err(Failure::Usage("--range must be non-negative".into()));
            }
            builtin(
                "int_interval",
                "range",
                &params(&[
                    ("interval", format!("{}..{n}", -n)),
                    ("ops", "add".into()),
                    ("consts", "all".into()),
                ]),
            )?
        }
    };
    Ok((model, alg))
}

fn baseline_output(args: &ModelArgs, tuple: &[String]) -> Result<Output, Failure> {
    let model: Model = args.model.parse()?;
    let mut sets = None;
    let verdict = match model {
        Model::SySets | Model::MbdSets => {
            let (_, alg) = model_algebra(args)?;
            let universe = match alg.codec() {
                proportia_core::Codec::Set { universe } => universe.len(),
                _ => unreachable!("set models use a powerset"),
            };
            let mut masks = [0u64; 4];
            for (m, lit) in masks.iter_mut().zip(tuple) {
                let e = alg.element(lit).map_err(|_| Error::NotSubsetOfUniverse {
                    literal: lit.clone(),
                })?;
                *m = match alg.value(e) {
                    proportia_core::Element::Set(s) => *s,
                    _ => unreachable!("powerset elements are sets"),
                };
            }
            let [a, b, c, d] = masks;
            sets = Some(alg);
            if model == Model::SySets {
                baselines::sy_sets(universe, a, b, c, d)?
            } else {
                baselines::mbd_sets(universe, a, b, c, d)?
            }
        }
        Model::SyNumbers => {
            let mut nums = [0i64; 4];
            for (n, lit) in nums.iter_mut().zip(tuple) {
                *n = lit
                    .parse()
                    .map_err(|_| Failure::Usage(format!("`{lit}` is not an integer")))?;
            }
            let [a, b, c, d] = nums;
            let bound = args
                .range
                .ok_or_else(|| Failure::Usage(format!("{model} needs --range")))?;
            baselines::sy_numbers(a, b, c, d, bound)?
        }
    };
    let set_text = |m: u64| {
        let alg = sets.as_ref().expect("set witnesses come from a powerset");
        let e = alg
            .element_of(&proportia_core::Element::Set(m))
            .expect("subset of universe");
        alg.literal(e).to_string()
    };
    let witness = verdict.witness.map(|w| match w {
        Witness::SySets { a1, a2, d1, d2 } => json!({
            "a1": set_text(a1), "a2": set_text(a2), "d1": set_text(d1), "d2": set_text(d2),
        }),
        Witness::MbdSets { e, f } => json!({"e": set_text(e), "f": set_text(f)}),
        Witness::SyNumbers { a1, a2, d1, d2 } => json!({"a1": a1, "a2": a2, "d1": d1, "d2": d2}),
    });
    let query = tuple.join(":");
    let mut text = format!(
        "{model} {query}: {}\n",
        if verdict.holds { "holds" } else { "fails" }
    );
    if let Some(Value::Object(w)) = &witness {
        let parts: Vec<String> = w
            .iter()
            .map(|(k, v)| {
                format!(
                    "{k}={}",
                    v.as_str().map_or_else(|| v.to_string(), str::to_string)
                )
            })
            .collect();
        let _ = writeln!(text, "  witness {}", parts.join(" "));
    }
    Ok(Output {
        json: json!({
            "model": model.id(),
            "tuple": tuple,
            "holds": verdict.holds,
            "witness": witness,
        }),
        text,
    })
}
