//! `iabc`: feasibility checks, reduced-graph counts, equivalence sweeps,
//! graph generators and the simulator behind one binary.
//!
//! Exit codes: 0 ok or converged, 1 condition fails, 2 input error,
//! 3 budget exceeded, 4 frozen, 5 round budget exhausted, 6 update not well
//! defined.

mod manifest;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use iabc::analysis::{analyze, AnalysisReport};
use iabc::conditions::equivalence::{run_equivalence, EquivConfig, EquivMode};
use iabc::conditions::families::Family;
use iabc::conditions::reduced::DEFAULT_BUDGET;
use iabc::conditions::report::{L0Report, VerdictReport};
use iabc::conditions::{
    check_condition_nc, check_degree_bounds, enumerate_reduced_graphs, find_l0, unique_source_condition, ChoiceMode, ConditionKind,
    ReducedError, ReducedOptions, Verdict,
};
use iabc::consensus::trace::{write_csv, DeepTrace};
use iabc::consensus::{run, EngineError, RunOutcome, SessionConfig};
use iabc::graph::{parse_graph, write_graph, DirectedGraph};
use manifest::Recorder;

const EXIT_OK: u8 = 0;
const EXIT_FAILS: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_BUDGET: u8 = 3;
const EXIT_FROZEN: u8 = 4;
const EXIT_EXHAUSTED: u8 = 5;
const EXIT_NOT_WELL_DEFINED: u8 = 6;

#[derive(Parser)]
#[command(name = "iabc", version, about = "Relay-depth feasibility checks and consensus simulation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide the relay-depth condition for a graph.
    Check(CheckArgs),
    /// Smallest relay depth at which the condition holds.
    L0(L0Args),
    /// Count reduced graphs by source components, or cross-check the condition.
    Reduced(ReducedArgs),
    /// Run the trimmed-mean algorithm from a session config.
    Simulate(SimulateArgs),
    /// Write a member of a built-in graph family.
    Generate(GenerateArgs),
    /// Sweep random or enumerated graphs for disagreements between equivalent conditions.
    Equiv(EquivArgs),
}

#[derive(Args, Serialize)]
struct Output {
    /// Write the machine-readable report here.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Print the machine-readable report instead of the summary.
    #[arg(long)]
    json: bool,
}

#[derive(Args, Serialize)]
struct CheckArgs {
    graph: PathBuf,
    #[arg(long)]
    f: usize,
    #[arg(long)]
    l: usize,
    #[command(flatten)]
    out: Output,
}

#[derive(Args, Serialize)]
struct L0Args {
    graph: PathBuf,
    #[arg(long)]
    f: usize,
    #[command(flatten)]
    out: Output,
}

#[derive(Args, Serialize)]
struct ReducedArgs {
    graph: PathBuf,
    #[arg(long)]
    f: usize,
    #[arg(long)]
    l: usize,
    /// Compare the partition check with the unique-source check.
    #[arg(long)]
    equivalence: bool,
    /// Largest number of reduced graphs to examine.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    #[command(flatten)]
    out: Output,
}

#[derive(Args, Serialize)]
struct SimulateArgs {
    config: PathBuf,
    /// CSV of fault-free states per round.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// JSON with every round's messages, trims and tampering.
    #[arg(long)]
    deep_trace: Option<PathBuf>,
    /// JSON report of the per-round matrix checks.
    #[arg(long)]
    analyze: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum FamilyArg {
    Fig1,
    Fig2,
    Complete,
    Density,
}

impl FamilyArg {
    fn family(self) -> Family {
        match self {
            FamilyArg::Fig1 => Family::Fig1,
            FamilyArg::Fig2 => Family::Fig2,
            FamilyArg::Complete => Family::Complete,
            FamilyArg::Density => Family::Density,
        }
    }
}

#[derive(Args, Serialize)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Node count; ignored for fig1.
    #[arg(long)]
    n: Option<usize>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum ModeArg {
    Undirected,
    Directed,
    UniqueSource,
}

impl ModeArg {
    fn mode(self) -> EquivMode {
        match self {
            ModeArg::Undirected => EquivMode::Undirected,
            ModeArg::Directed => EquivMode::Directed,
            ModeArg::UniqueSource => EquivMode::UniqueSource,
        }
    }
}

#[derive(Args, Serialize)]
struct EquivArgs {
    #[arg(long, value_enum)]
    mode: ModeArg,
    #[arg(long, default_value_t = 3)]
    n_min: usize,
    #[arg(long, default_value_t = 5)]
    n_max: usize,
    #[arg(long, default_value_t = 1)]
    f: usize,
    #[arg(long, default_value_t = 300)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    out: Output,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Check(a) => cmd_check(a),
        Command::L0(a) => cmd_l0(a),
        Command::Reduced(a) => cmd_reduced(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Generate(a) => cmd_generate(a),
        Command::Equiv(a) => cmd_equiv(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}

fn load_graph(path: &Path) -> Result<DirectedGraph> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_graph(&text).map_err(|e| anyhow!("{}: {e}", path.display()))
}

fn require_depth(l: usize) -> Result<()> {
    if l == 0 {
        bail!("relay depth l must be at least 1");
    }
    Ok(())
}

/// Prints or writes `report` as the flags ask; returns whether the caller
/// should still print its human summary.
fn emit(out: &Output, recorder: &Recorder, report: &impl Serialize) -> Result<bool> {
    let text = serde_json::to_string_pretty(report)? + "\n";
    if let Some(path) = &out.report {
        recorder.write(path, &text)?;
    }
    if out.json {
        print!("{text}");
    }
    Ok(!out.json)
}

#[derive(Serialize)]
struct CheckReport {
    #[serde(flatten)]
    verdict: VerdictReport,
    /// Set when the size or in-degree bound decided the verdict without a
    /// partition search.
    #[serde(skip_serializing_if = "Option::is_none")]
    short_circuit: Option<String>,
}

fn cmd_check(args: &CheckArgs) -> Result<u8> {
    require_depth(args.l)?;
    let mut recorder = Recorder::new("check", args, None);
    recorder.input(&args.graph);
    let g = load_graph(&args.graph)?;
    let (verdict, short_circuit) = if args.f >= 1 && !check_degree_bounds(&g, args.f) {
        let v = Verdict {
            condition: ConditionKind::Nc,
            n: g.n(),
            f: args.f,
            l: Some(args.l),
            holds: false,
            witness: None,
            reduced_choices: None,
            checked_count: 0,
        };
        let note = format!("needs n >= {} and every node with at least {} in-neighbors besides itself", 3 * args.f + 1, 2 * args.f + 1);
        (v, Some(note))
    } else {
        (check_condition_nc(&g, args.f, args.l), None)
    };
    let report = CheckReport { verdict: VerdictReport::from(&verdict), short_circuit };
    if emit(&args.out, &recorder, &report)? {
        let status = if verdict.holds { "holds" } else { "fails" };
        println!("condition nc {status}: n={} f={} l={}", verdict.n, verdict.f, args.l);
        if let Some(w) = &verdict.witness {
            println!("witness: {w}");
        }
        if let Some(note) = &report.short_circuit {
            println!("degree bound fails: {note}");
        }
        println!("partitions checked: {}", verdict.checked_count);
    }
    Ok(if verdict.holds { EXIT_OK } else { EXIT_FAILS })
}

fn cmd_l0(args: &L0Args) -> Result<u8> {
    let mut recorder = Recorder::new("l0", args, None);
    recorder.input(&args.graph);
    let g = load_graph(&args.graph)?;
    let l0 = find_l0(&g, args.f);
    let report = L0Report::new(g.n(), args.f, l0);
    if emit(&args.out, &recorder, &report)? {
        println!("{l0}");
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct SourceHistogram {
    schema_version: u32,
    n: usize,
    f: usize,
    l: usize,
    reduced_graphs: u64,
    /// Number of reduced graphs with each source-component count.
    sources: BTreeMap<usize, u64>,
}

#[derive(Serialize)]
struct ReducedAgreement {
    schema_version: u32,
    agree: bool,
    nc: VerdictReport,
    unique_source: VerdictReport,
}

fn budget_exceeded(e: &ReducedError) -> u8 {
    eprintln!("budget exceeded: {e}");
    EXIT_BUDGET
}

fn cmd_reduced(args: &ReducedArgs) -> Result<u8> {
    require_depth(args.l)?;
    let mut recorder = Recorder::new("reduced", args, None);
    recorder.input(&args.graph);
    let g = load_graph(&args.graph)?;
    let opts = ReducedOptions { mode: ChoiceMode::Exhaustive, budget: args.budget };

    if args.equivalence {
        let us = match unique_source_condition(&g, args.f, args.l, opts) {
            Ok(v) => v,
            Err(e) => return Ok(budget_exceeded(&e)),
        };
        let nc = check_condition_nc(&g, args.f, args.l);
        let agree = nc.holds == us.holds;
        let report = ReducedAgreement {
            schema_version: iabc::SCHEMA_VERSION,
            agree,
            nc: VerdictReport::from(&nc),
            unique_source: VerdictReport::from(&us),
        };
        if emit(&args.out, &recorder, &report)? {
            let status = |holds: bool| if holds { "holds" } else { "fails" };
            if agree {
                println!("agree: {}", status(nc.holds));
            } else {
                println!("disagree: nc {}, unique-source {}", status(nc.holds), status(us.holds));
            }
        }
        return Ok(if agree { EXIT_OK } else { EXIT_FAILS });
    }

    let mut iterators = Vec::new();
    let mut total: u128 = 0;
    for faulty in g.nodes().subsets_up_to(args.f) {
        let it = match enumerate_reduced_graphs(&g, faulty, args.l, args.f, opts) {
            Ok(it) => it,
            Err(e) => return Ok(budget_exceeded(&e)),
        };
        total += it.total();
        if total > u128::from(args.budget) {
            return Ok(budget_exceeded(&ReducedError::BudgetExceeded { count: total, budget: args.budget }));
        }
        iterators.push(it);
    }
    let mut sources = BTreeMap::new();
    for rg in iterators.into_iter().flatten() {
        *sources.entry(rg.source_components().len()).or_insert(0u64) += 1;
    }
    let report = SourceHistogram {
        schema_version: iabc::SCHEMA_VERSION,
        n: g.n(),
        f: args.f,
        l: args.l,
        reduced_graphs: sources.values().sum(),
        sources,
    };
    if emit(&args.out, &recorder, &report)? {
        println!("reduced graphs: {}", report.reduced_graphs);
        for (k, count) in &report.sources {
            println!("{k} source component(s): {count}");
        }
    }
    Ok(EXIT_OK)
}

fn cmd_simulate(args: &SimulateArgs) -> Result<u8> {
    let (mut cfg, file) = SessionConfig::load(&args.config)?;
    let mut recorder = Recorder::new("simulate", args, Some(cfg.seed));
    recorder.input(&args.config);
    recorder.input(&file.graph_path(&args.config));

    if cfg.require_condition {
        let v = check_condition_nc(&cfg.graph, cfg.f, cfg.l);
        if let Some(w) = v.witness {
            println!("condition nc fails at l={}: {w}", cfg.l);
            return Ok(EXIT_FAILS);
        }
        cfg.require_condition = false;
    }
    cfg.record_rounds = args.deep_trace.is_some() || args.analyze.is_some();

    let trace = match run(&cfg) {
        Ok(trace) => trace,
        Err(e @ (EngineError::NotWellDefined { .. } | EngineError::EmptyKept { .. } | EngineError::MissingSelfLoop { .. })) => {
            if let Some((node, round)) = e.location() {
                eprintln!("update not well defined at node {} in round {round}", node + 1);
            }
            eprintln!("{e}");
            return Ok(EXIT_NOT_WELL_DEFINED);
        }
        Err(e) => return Err(e.into()),
    };

    if let Some(path) = &args.trace {
        recorder.write(path, &write_csv(&trace))?;
    }
    if let Some(path) = &args.deep_trace {
        recorder.write(path, &DeepTrace::from_trace(&trace).to_json())?;
    }

    let last = trace.outcome.last_round();
    println!("outcome: {} after {last} round(s)", trace.outcome.name());
    println!("spread: {} -> {}", trace.spread(0), trace.spread(last));
    println!("validity: {}", if trace.always_valid() { "ok" } else { "violated" });

    if let Some(path) = &args.analyze {
        match analyze(&trace, Some(&cfg.graph)) {
            Ok(analysis) => {
                let report = AnalysisReport::from(&analysis);
                recorder.write(path, &report.to_json())?;
                println!("analysis: {}", if report.passed { "pass" } else { "FAIL" });
            }
            Err(e) => eprintln!("analysis failed: {e}"),
        }
    }

    Ok(match trace.outcome {
        RunOutcome::Converged { .. } => EXIT_OK,
        RunOutcome::Frozen { .. } => EXIT_FROZEN,
        RunOutcome::Exhausted { .. } => EXIT_EXHAUSTED,
    })
}

fn cmd_generate(args: &GenerateArgs) -> Result<u8> {
    let family = args.family.family();
    let n = match (family, args.n) {
        (Family::Fig1, _) => 5,
        (_, Some(n)) => n,
        (_, None) => bail!("--n is required for family {}", family.name()),
    };
    let g = family.build(n)?;
    let text = write_graph(&g, Some(&format!("{} n={n}", family.name())));
    match &args.output {
        Some(path) => Recorder::new("generate", args, None).write(path, &text)?,
        None => print!("{text}"),
    }
    Ok(EXIT_OK)
}

fn cmd_equiv(args: &EquivArgs) -> Result<u8> {
    if args.n_min < 2 || args.n_min > args.n_max {
        bail!("need 2 <= n-min <= n-max");
    }
    let cfg =
        EquivConfig { mode: args.mode.mode(), f: args.f, n_min: args.n_min, n_max: args.n_max, samples: args.samples, seed: args.seed };
    let recorder = Recorder::new("equiv", args, Some(args.seed));
    let summary = match run_equivalence(&cfg) {
        Ok(s) => s,
        Err(e) => return Ok(budget_exceeded(&e)),
    };
    if emit(&args.out, &recorder, &summary)? {
        let how = if summary.exhaustive { "enumerated" } else { "sampled" };
        println!("mode {}: {} graphs {how}, {} satisfy the condition", cfg.mode, summary.instances, summary.holding);
        println!("{}/{} agree", summary.agreements, summary.instances);
        for d in &summary.disagreements {
            let verdicts: Vec<String> = d.outcome.verdicts.iter().map(|(name, holds)| format!("{name}={holds}")).collect();
            match d.seed {
                Some(seed) => println!("disagreement (seed {seed}): {}", verdicts.join(" ")),
                None => println!("disagreement: {}", verdicts.join(" ")),
            }
            print!("{}", d.graph);
        }
    }
    Ok(if summary.disagreements.is_empty() { EXIT_OK } else { EXIT_FAILS })
}
