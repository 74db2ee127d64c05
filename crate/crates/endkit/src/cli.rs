//! Command line front end. Output is JSON on stdout, or DOT with `--dot`.
//! Exit code 2 marks an undecided answer and 1 an error.

use std::ffi::OsString;
use std::fmt::Debug;
use std::io::Read;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use endkit_core::classify::{distinct_family, kerekjarto, realize, Verdict, Witness};
use endkit_core::decompose::{
    decompose, find_essential_pants, graph_phe_equal, interchange_normalize, parse_occurrence,
    spine, Decomposer, EssentialCase, Mode, PheVerdict, PheWitness, Window, DEFAULT_DEPTH,
};
use endkit_core::degree::{infer_degree, phe_admissible, MapDescriptor};
use endkit_core::ends::{
    ends_automaton, parse_end_expr, CbReport, EndsError, Marking, DEFAULT_RANK_CUTOFF,
};
use endkit_core::rewrite::{default_schedule, run_pipeline, CurveConfig};
use endkit_core::surface::parse_presentation;
use endkit_core::{Extended, SurfacePresentation};

use crate::dot::{spine_dot, window_dot};
use crate::wire::{self, CurveConfigJson, DescriptorJson};

pub const FAMILY_CAP: usize = 64;

#[derive(Parser, Debug)]
#[command(name = "endkit", version, about = "Finitely presented non-compact surfaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Opts,
}

#[derive(Args, Debug, Clone)]
pub struct Opts {
    /// Decomposition mode.
    #[arg(long, value_enum, default_value_t = ModeArg::Lenient, global = true)]
    pub mode: ModeArg,
    /// Number of pieces in a decomposition window.
    #[arg(long, global = true)]
    pub depth: Option<usize>,
    /// Emit Graphviz instead of JSON where supported.
    #[arg(long, global = true, conflicts_with = "json")]
    pub dot: bool,
    /// Emit JSON (the default).
    #[arg(long, global = true)]
    pub json: bool,
    /// Cantor-Bendixson rank cutoff.
    #[arg(long, default_value_t = DEFAULT_RANK_CUTOFF, global = true)]
    pub rank_cutoff: u32,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeArg {
    Lenient,
    Strict,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Lenient => Mode::Lenient,
            ModeArg::Strict => Mode::Strict,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide whether two presented surfaces are homeomorphic.
    Classify { a: String, b: String },
    /// Genus and ends of a surface.
    Invariants { p: String },
    /// Piece census of a pants decomposition window.
    Decompose { p: String },
    /// Move block occurrences (`#`, `#0.1`, rule names) to the front.
    Normalize { p: String, front: Vec<String> },
    /// Spine graph and its rank.
    Spine { p: String },
    /// Compare the spines of two surfaces up to proper homotopy.
    GraphPhe { a: String, b: String },
    /// Find a pants whose complement has two or more big components.
    EssentialPants { p: String },
    /// Run rewrite steps on a curve configuration; prints JSON lines.
    Rewrite {
        config: String,
        /// Comma separated steps: r1..r4, disk:ID, relabel:ID, collapse:T:I.
        #[arg(long, default_value = "r1,r2,r3,r4")]
        schedule: String,
    },
    /// Degree ledger operations.
    Degree {
        #[command(subcommand)]
        op: DegreeOp,
    },
    /// Build a presentation from a genus (number or `inf`) and an end expression.
    Realize { genus: String, expr: String },
    /// Pairwise non-homeomorphic presentations.
    Family { n: usize },
}

#[derive(Subcommand, Debug)]
pub enum DegreeOp {
    /// Close a map descriptor under the degree rules.
    Check { descriptor: String },
}

/// Failure reported as `{"error":{"module","kind","message"}}`.
#[derive(Debug)]
pub struct CliError {
    pub module: &'static str,
    pub kind: String,
    pub message: String,
}

impl CliError {
    fn new(module: &'static str, kind: &str, message: impl Into<String>) -> CliError {
        CliError {
            module,
            kind: kind.to_owned(),
            message: message.into(),
        }
    }

    /// Uses the variant name of `e` as the kind.
    fn of<E: Debug + std::fmt::Display>(module: &'static str, e: E) -> CliError {
        let dbg = format!("{e:?}");
        let kind: String = dbg.chars().take_while(|c| c.is_alphanumeric() || *c == '_').collect();
        CliError::new(module, &kind, e.to_string())
    }

    pub fn to_json(&self) -> Value {
        json!({ "error": { "module": self.module, "kind": self.kind, "message": self.message } })
    }
}

#[derive(Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
}

impl Outcome {
    fn decided(v: Value) -> Outcome {
        Outcome {
            code: 0,
            stdout: line(&v),
        }
    }

    fn undecided(v: Value) -> Outcome {
        Outcome {
            code: 2,
            stdout: line(&v),
        }
    }

    fn text(s: String) -> Outcome {
        Outcome { code: 0, stdout: s }
    }
}

fn line(v: &Value) -> String {
    let mut s = serde_json::to_string(v).expect("values serialize");
    s.push('\n');
    s
}

pub fn main_with_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) if !e.use_stderr() => Outcome::text(e.to_string()),
        Err(e) => Outcome {
            code: 1,
            stdout: line(&CliError::new("cli", "Usage", e.kind().to_string()).to_json()),
        },
    }
}

pub fn run(cli: &Cli) -> Outcome {
    match dispatch(cli) {
        Ok(o) => o,
        Err(e) => Outcome {
            code: 1,
            stdout: line(&e.to_json()),
        },
    }
}

fn read(path: &str) -> Result<String, CliError> {
    let mut s = String::new();
    let r = if path == "-" {
        std::io::stdin().read_to_string(&mut s).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| s = t)
    };
    r.map_err(|e| CliError::new("cli", "Io", format!("{path}: {e}")))?;
    Ok(s)
}

fn surface(path: &str) -> Result<SurfacePresentation, CliError> {
    parse_presentation(&read(path)?).map_err(|e| CliError::of("surface-model", e))
}

fn json_file<T: serde::de::DeserializeOwned>(path: &str) -> Result<T, CliError> {
    serde_json::from_str(&read(path)?).map_err(|e| CliError::new("cli", "Json", format!("{path}: {e}")))
}

fn dispatch(cli: &Cli) -> Result<Outcome, CliError> {
    let o = &cli.opts;
    match &cli.command {
        Command::Classify { a, b } => classify(&surface(a)?, &surface(b)?),
        Command::Invariants { p } => invariants(&surface(p)?, o.rank_cutoff),
        Command::Decompose { p } => decompose_cmd(&surface(p)?, o),
        Command::Normalize { p, front } => {
            let front = front
                .iter()
                .flat_map(|f| f.split(','))
                .filter(|f| !f.trim().is_empty())
                .map(parse_occurrence)
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| CliError::of("decompose", e))?;
            let q = interchange_normalize(&surface(p)?, &front).map_err(|e| CliError::of("decompose", e))?;
            Ok(Outcome::decided(json!({ "presentation": q.to_string() })))
        }
        Command::Spine { p } => {
            let p = surface(p)?;
            let g = spine(&p);
            if o.dot {
                return Ok(Outcome::text(spine_dot(&p.name, &g)));
            }
            let a = g.automaton();
            Ok(Outcome::decided(json!({
                "rank": wire::extended(g.rank),
                "states": a.states,
                "edges": a.edges().into_iter().map(|(s, t)| [a.states[s].clone(), a.states[t].clone()]).collect::<Vec<_>>(),
                "root": a.states[a.root],
                "core_states": a.nonplanar_states().into_iter().map(|s| a.states[s].clone()).collect::<Vec<_>>(),
            })))
        }
        Command::GraphPhe { a, b } => {
            let v = graph_phe_equal(&spine(&surface(a)?), &spine(&surface(b)?));
            Ok(match v {
                PheVerdict::Yes => Outcome::decided(json!({ "verdict": "Equivalent" })),
                PheVerdict::No(PheWitness::Rank) => {
                    Outcome::decided(json!({ "verdict": "NotEquivalent", "witness": "rank" }))
                }
                PheVerdict::No(PheWitness::Ends(i)) => Outcome::decided(
                    json!({ "verdict": "NotEquivalent", "witness": "ends", "invariant": i.name() }),
                ),
                PheVerdict::Unknown => Outcome::undecided(json!({ "verdict": "Unknown", "witness": "undecided" })),
            })
        }
        Command::EssentialPants { p } => {
            let p = surface(p)?;
            let e = find_essential_pants(&p).map_err(|e| CliError::of("decompose", e))?;
            if o.dot {
                return Ok(Outcome::text(window_dot(&p.name, &e.window)));
            }
            let case = match e.case {
                EssentialCase::TwoHandles => "two_handles",
                EssentialCase::FivePants => "five_pants",
                EssentialCase::TorusWithEnds => "torus_with_ends",
            };
            Ok(Outcome::decided(json!({
                "case": case,
                "piece": e.piece,
                "components": e.components.iter().map(|c| json!({
                    "pieces": c.pieces,
                    "rank": wire::extended(c.rank),
                })).collect::<Vec<_>>(),
                "presentation": e.presentation.to_string(),
            })))
        }
        Command::Rewrite { config, schedule } => rewrite(config, schedule),
        Command::Degree { op: DegreeOp::Check { descriptor } } => {
            let j: DescriptorJson = json_file(descriptor)?;
            let m = MapDescriptor::from(&j);
            let closed = infer_degree(&m).map_err(|e| CliError::of("degree", e))?;
            Ok(Outcome::decided(json!({
                "descriptor": DescriptorJson::from(&closed),
                "phe_admissible": phe_admissible(&m).is_ok(),
            })))
        }
        Command::Realize { genus, expr } => {
            let g = match genus.as_str() {
                "inf" => Extended::Infinite,
                n => Extended::Finite(n.parse().map_err(|_| {
                    CliError::new("cli", "Usage", format!("genus `{n}` is neither a number nor `inf`"))
                })?),
            };
            let e = parse_end_expr(expr).map_err(|e| CliError::of("ends", e))?;
            let p = realize(g, &e).map_err(|e| CliError::of("classify", e))?;
            Ok(Outcome::decided(json!({ "presentation": p.to_string() })))
        }
        Command::Family { n } => {
            if *n > FAMILY_CAP {
                return Err(CliError::new(
                    "cli",
                    "FamilyTooLarge",
                    format!("family size {n} exceeds the cap {FAMILY_CAP}"),
                ));
            }
            let fam: Vec<String> = distinct_family(*n).iter().map(|p| p.to_string()).collect();
            Ok(Outcome::decided(json!({ "presentations": fam })))
        }
    }
}

fn classify(a: &SurfacePresentation, b: &SurfacePresentation) -> Result<Outcome, CliError> {
    let v = kerekjarto(a, b);
    Ok(match (v.verdict, v.witness) {
        (Verdict::Homeomorphic, _) => Outcome::decided(json!({ "verdict": "Homeomorphic" })),
        (Verdict::NotHomeomorphic, Witness::Ends(i)) => Outcome::decided(
            json!({ "verdict": "NotHomeomorphic", "witness": "ends", "invariant": i.name() }),
        ),
        (Verdict::NotHomeomorphic, w) => {
            Outcome::decided(json!({ "verdict": "NotHomeomorphic", "witness": w.tag() }))
        }
        (Verdict::Unknown, w) => Outcome::undecided(json!({ "verdict": "Unknown", "witness": w.tag() })),
    })
}

/// Report and whether the rank stayed under the cutoff.
fn report(r: Result<CbReport, EndsError>) -> Result<(CbReport, bool), CliError> {
    match r {
        Ok(r) => Ok((r, true)),
        Err(EndsError::RankCutoffExceeded(r)) => Ok((r, false)),
        Err(e) => Err(CliError::of("ends", e)),
    }
}

fn invariants(p: &SurfacePresentation, cutoff: u32) -> Result<Outcome, CliError> {
    let a = ends_automaton(p);
    let (all, ok1) = report(a.cb_report(Marking::All, cutoff))?;
    let (np, ok2) = report(a.cb_report(Marking::NonplanarOnly, cutoff))?;
    let v = json!({
        "genus": wire::extended(p.genus()),
        "finite_type": p.is_finite_type(),
        "ends": wire::ends(&a, &all),
        "nonplanar_ends": wire::cb_report(&np),
        "end_expr": a.to_end_expr().ok().map(|e| e.to_string()),
    });
    Ok(if ok1 && ok2 { Outcome::decided(v) } else { Outcome::undecided(v) })
}

fn decompose_cmd(p: &SurfacePresentation, o: &Opts) -> Result<Outcome, CliError> {
    let mode = Mode::from(o.mode);
    let err = |e| CliError::of("decompose", e);
    let w: Window = match o.depth {
        Some(d) => decompose(p, mode, d).map_err(err)?,
        // Finite-type surfaces are decomposed completely by default.
        None if p.is_finite_type() => Decomposer::new(p, mode).map_err(err)?.window(usize::MAX),
        None => decompose(p, mode, DEFAULT_DEPTH).map_err(err)?,
    };
    if o.dot {
        return Ok(Outcome::text(window_dot(&p.name, &w)));
    }
    let c = w.census();
    let mut v = json!({ "pants": c.pants, "punctured_disks": c.punctured_disks });
    if c.one_holed_tori > 0 {
        v["one_holed_tori"] = json!(c.one_holed_tori);
    }
    Ok(Outcome::decided(v))
}

fn rewrite(config: &str, schedule: &str) -> Result<Outcome, CliError> {
    let j: CurveConfigJson = json_file(config)?;
    let c = CurveConfig::try_from(&j).map_err(|e| CliError::of("curve-rewrite", e))?;
    let steps = if schedule.trim().is_empty() {
        default_schedule()
    } else {
        schedule
            .split(',')
            .map(|s| {
                wire::parse_step(s)
                    .ok_or_else(|| CliError::new("cli", "Usage", format!("unknown rewrite step `{s}`")))
            })
            .collect::<Result<Vec<_>, _>>()?
    };
    let (out, trace) = run_pipeline(&c, &steps).map_err(|e| CliError::of("curve-rewrite", e))?;
    let mut s = String::new();
    for e in &trace.entries {
        s.push_str(&line(&wire::trace_entry(e)));
    }
    s.push_str(&line(&json!({ "final": CurveConfigJson::from(&out) })));
    Ok(Outcome::text(s))
}
