//! `latflow`: batch front end for the flow and cut lattice checks.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use latflow::corpus::{self, CorpusParams};
use latflow::report::{self, CellReport, CoveringReport, PosetReport, QuotientReport};
use latflow::{covering, cut, examples, orient, voronoi, Caps, Error, Multigraph};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Command {
    ScPoset,
    CacPoset,
    VoronoiFlow,
    VoronoiCut,
    Verify,
    CoveringFlow,
    CoveringCut,
    Quotients,
    Corpus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Parser, Debug)]
#[command(name = "latflow", version, about = "Voronoi cells of the flow and cut lattices of a graph")]
struct Cli {
    /// Graph files (text `n m` + edge lines, or JSON). Repeatable.
    #[arg(long, short)]
    input: Vec<PathBuf>,
    /// Named graph instead of a file: theta, loop, C4, K4, K2,3, P3, star3, bowtie, theta+pendant.
    #[arg(long)]
    graph: Vec<String>,
    #[arg(long, value_enum)]
    cmd: Command,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    max_edges: Option<usize>,
    #[arg(long)]
    max_poset: Option<usize>,
    #[arg(long)]
    max_halfspaces: Option<usize>,
    #[arg(long)]
    max_dim: Option<usize>,
    /// Seed of the random corpus.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Number of random graphs for `corpus`.
    #[arg(long, default_value_t = 100)]
    count: usize,
    /// Worker threads for `corpus` (0 = all cores).
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Cap overrides such as `max_edges=10,max_dim=8`; wins over flags.
    #[arg(long, env = "LATFLOW_CAPS", hide_env_values = true)]
    caps: Option<String>,
}

/// Why a run did not succeed.
enum Failure {
    Assertion,
    Cap,
    Usage(String),
}

struct Outcome {
    report: Value,
    dot: Option<String>,
    passed: bool,
}

fn caps_of(cli: &Cli) -> Result<Caps, String> {
    let mut caps = Caps::default();
    let positive = |v: usize, name: &str| if v == 0 { Err(format!("--{name} must be positive")) } else { Ok(v) };
    if let Some(v) = cli.max_edges {
        caps.max_edges = positive(v, "max-edges")?;
    }
    if let Some(v) = cli.max_poset {
        caps.max_poset = positive(v, "max-poset")?;
    }
    if let Some(v) = cli.max_halfspaces {
        caps.max_halfspaces = positive(v, "max-halfspaces")?;
    }
    if let Some(v) = cli.max_dim {
        caps.max_dim = positive(v, "max-dim")?;
    }
    if let Some(spec) = &cli.caps {
        caps = caps.with_overrides(spec).map_err(|e| e.to_string())?;
    }
    Ok(caps)
}

fn load_graphs(cli: &Cli) -> Result<Vec<(String, Multigraph)>, String> {
    let mut out = Vec::new();
    for path in &cli.input {
        let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let parsed = if text.trim_start().starts_with('{') {
            Multigraph::parse_json(&text)
        } else {
            Multigraph::parse_text(&text)
        };
        out.push((path.display().to_string(), parsed.map_err(|e| format!("{}: {e}", path.display()))?));
    }
    for name in &cli.graph {
        let g = examples::by_name(name).ok_or_else(|| format!("unknown graph name {name:?}"))?;
        out.push((name.clone(), g));
    }
    Ok(out)
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn run_one(cmd: Command, name: &str, g: &Multigraph, caps: &Caps) -> latflow::Result<Outcome> {
    let header = json!({"name": name, "graph": g.to_json()});
    let with = |mut head: Value, key: &str, v: Value| {
        head[key] = v;
        head
    };
    Ok(match cmd {
        Command::ScPoset | Command::CacPoset => {
            let (side, p) = if cmd == Command::ScPoset {
                ("flow", orient::enumerate_sc(g, caps)?)
            } else {
                ("cut", orient::enumerate_cac(g, caps)?)
            };
            Outcome {
                dot: Some(p.poset.to_dot(name)),
                report: with(header, "poset", to_value(&PosetReport::of_orientations(side, &p))),
                passed: true,
            }
        }
        Command::VoronoiFlow | Command::VoronoiCut => {
            let (side, f) = if cmd == Command::VoronoiFlow {
                ("flow", voronoi::face_poset_combinatorial(g, caps)?)
            } else {
                ("cut", cut::cut_face_poset_combinatorial(g, caps)?)
            };
            Outcome {
                dot: Some(f.poset.to_dot(name)),
                report: with(header, "cell", to_value(&CellReport::new(side, &f))),
                passed: true,
            }
        }
        Command::Verify => {
            let flow = voronoi::verify_flow(g, caps)?;
            let cutv = cut::verify_cut(g, caps)?;
            let passed = flow.passed() && cutv.passed();
            let mut r = with(header, "flow", to_value(&flow));
            r["cut"] = to_value(&cutv);
            let mut dumps = Vec::new();
            if !flow.passed() {
                dumps.push(to_value(&report::flow_dump(g, caps)?));
            }
            if !cutv.passed() {
                dumps.push(to_value(&report::cut_dump(g, caps)?));
            }
            if !dumps.is_empty() {
                r["counterexamples"] = Value::Array(dumps);
            }
            r["passed"] = json!(passed);
            Outcome {
                report: r,
                dot: None,
                passed,
            }
        }
        Command::CoveringFlow | Command::CoveringCut => {
            let r = if cmd == Command::CoveringFlow {
                CoveringReport::flow(&covering::covering_number_flow(g, caps)?)
            } else {
                CoveringReport::cut(&covering::covering_number_cut(g, caps)?)
            };
            Outcome {
                passed: r.passed(),
                report: with(header, "covering", to_value(&r)),
                dot: None,
            }
        }
        Command::Quotients => {
            let fq = voronoi::quotient_face_poset(g, caps)?;
            let cq = cut::quotient_cut_face_poset(g, caps)?;
            let sc = orient::enumerate_sc(g, caps)?;
            let cac = orient::enumerate_cac(g, caps)?;
            let (a, b) = (QuotientReport::new(&fq, &sc.elements), QuotientReport::new(&cq, &cac.elements));
            let passed = a.passed && b.passed;
            let mut r = with(header, "flow", to_value(&a));
            r["cut"] = to_value(&b);
            Outcome {
                dot: Some(format!(
                    "{}{}",
                    fq.orientations.poset.to_dot(&format!("{name} flow quotient")),
                    cq.orientations.poset.to_dot(&format!("{name} cut quotient"))
                )),
                report: r,
                passed,
            }
        }
        Command::Corpus => unreachable!("handled by run_corpus"),
    })
}

/// Verification and quotient checks on one corpus graph; a summary line on
/// success, the full reports and dumps on failure.
fn corpus_entry(name: &str, g: &Multigraph, caps: &Caps) -> latflow::Result<Outcome> {
    let flow = voronoi::verify_flow(g, caps)?;
    let cutv = cut::verify_cut(g, caps)?;
    let fq = voronoi::quotient_face_poset(g, caps)?;
    let cq = cut::quotient_cut_face_poset(g, caps)?;
    let passed = flow.passed() && cutv.passed() && fq.passed() && cq.passed();
    let mut r = json!({
        "name": name,
        "graph": g.to_text(),
        "flow_f_vector": flow.f_vector,
        "cut_f_vector": cutv.f_vector,
        "flow_quotient": fq.class_counts(),
        "cut_quotient": cq.class_counts(),
        "passed": passed,
    });
    if !passed {
        r["flow"] = to_value(&flow);
        r["cut"] = to_value(&cutv);
        r["counterexamples"] = json!([report::flow_dump(g, caps)?, report::cut_dump(g, caps)?]);
    }
    Ok(Outcome {
        report: r,
        dot: None,
        passed,
    })
}

fn run_corpus(cli: &Cli, caps: &Caps) -> (Value, Result<(), Failure>) {
    let graphs = corpus::random_corpus(cli.seed, cli.count, &CorpusParams::default());
    let work = || -> Vec<latflow::Result<Outcome>> {
        graphs.par_iter().map(|(n, g)| corpus_entry(n, g, caps)).collect()
    };
    let results = match rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build() {
        Ok(pool) => pool.install(work),
        Err(e) => return (Value::Null, Err(Failure::Usage(e.to_string()))),
    };
    let mut entries = Vec::new();
    let mut status = Ok(());
    let mut failed = 0;
    for r in results {
        match r {
            Ok(o) => {
                if !o.passed {
                    failed += 1;
                    status = status.and(Err(Failure::Assertion));
                }
                entries.push(o.report);
            }
            Err(e) => {
                if matches!(e, Error::Cap { .. }) && status.is_ok() {
                    status = Err(Failure::Cap);
                }
                entries.push(json!({"error": e.to_string()}));
            }
        }
    }
    let report = json!({
        "seed": cli.seed,
        "count": cli.count,
        "params": CorpusParams::default(),
        "failed": failed,
        "entries": entries,
    });
    (report, status)
}

fn emit(format: Format, report: &Value, dots: &[String]) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(report).expect("json") + "\n",
        Format::Text => report::to_text(report),
        Format::Dot if dots.is_empty() => report::to_text(report),
        Format::Dot => dots.concat(),
    }
}

fn run(cli: &Cli) -> (String, Result<(), Failure>) {
    let caps = match caps_of(cli) {
        Ok(c) => c,
        Err(e) => return (String::new(), Err(Failure::Usage(e))),
    };
    if cli.cmd == Command::Corpus {
        let (report, status) = run_corpus(cli, &caps);
        return (emit(cli.format, &report, &[]), status);
    }
    let graphs = match load_graphs(cli) {
        Ok(g) if g.is_empty() => return (String::new(), Err(Failure::Usage("no --input or --graph given".into()))),
        Ok(g) => g,
        Err(e) => return (String::new(), Err(Failure::Usage(e))),
    };
    let mut reports = Vec::new();
    let mut dots = Vec::new();
    let mut status = Ok(());
    for (name, g) in &graphs {
        match run_one(cli.cmd, name, g, &caps) {
            Ok(o) => {
                if !o.passed {
                    status = status.and(Err(Failure::Assertion));
                }
                dots.extend(o.dot);
                reports.push(o.report);
            }
            Err(e) => {
                reports.push(json!({"name": name, "error": e.to_string()}));
                let cap = matches!(e, Error::Cap { .. });
                // partial report: stop at the first cap, keep what we have
                if cap {
                    if status.is_ok() {
                        status = Err(Failure::Cap);
                    }
                    break;
                }
                return (emit(cli.format, &Value::Array(reports), &dots), Err(Failure::Usage(e.to_string())));
            }
        }
    }
    let report = if reports.len() == 1 {
        reports.pop().expect("one report")
    } else {
        Value::Array(reports)
    };
    (emit(cli.format, &report, &dots), status)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(3) } else { ExitCode::SUCCESS };
        }
    };
    let (out, status) = run(&cli);
    let _ = std::io::stdout().write_all(out.as_bytes());
    match status {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Assertion) => {
            eprintln!("latflow: a check failed; see the counterexample dump");
            ExitCode::from(1)
        }
        Err(Failure::Cap) => {
            eprintln!("latflow: resource cap exceeded; partial report written");
            ExitCode::from(2)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("latflow: {msg}");
            ExitCode::from(3)
        }
    }
}
