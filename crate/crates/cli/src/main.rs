//! `cyberdyn`: scripted experiments over attack-defense structures.
//!
//! Every subcommand is deterministic: the same flags and input files produce
//! byte-identical outputs. JSON reports go to `--report` (or stdout when no
//! path is given); time series go to `--out` as CSV. Verdict content never
//! drives the exit code: 0 means the computation ran, 2 flags invalid input,
//! 3 flags a numeric failure such as non-convergence.

mod propspec;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use cyberdyn_core::dynamics::{
    init_stream_seed, mean_field_iterate, run_replicate_traces, EnsembleSummary, InitPolicy,
    MeanFieldTrace, SimTrace,
};
use cyberdyn_core::emergence::{
    compose, evaluate_emergence, CompositionOp, EmergenceConfig, SimSettings,
};
use cyberdyn_core::error::{Error, Result};
use cyberdyn_core::graph::{read_graph, to_json, write_graph, Graph};
use cyberdyn_core::hyperprop::finite::{property_to_json, read_property};
use cyberdyn_core::hyperprop::witness::{witness_non_trace_property, Witness};
use cyberdyn_core::hyperprop::{read_trace_set, Trace};
use cyberdyn_core::spectral::{
    spectral_radius, threshold_verdict, DynamicsParams, DEFAULT_CRITICAL_TOL, DEFAULT_MAX_ITER,
    DEFAULT_TOL,
};

use propspec::PropertySpec;

#[derive(Parser)]
#[command(
    name = "cyberdyn",
    version,
    about = "Spectral thresholds, attack-defense dynamics, composition and emergence, and hyperproperty checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate or compose attack-defense graphs
    #[command(subcommand)]
    Graph(GraphCommand),
    /// Compute the spectral radius of a graph
    Spectral(SpectralArgs),
    /// Compare lambda1 against beta/gamma
    Threshold(ThresholdArgs),
    /// Run stochastic attack-defense replicates
    Simulate(SimulateArgs),
    /// Run the deterministic mean-field iteration
    Meanfield(MeanFieldArgs),
    /// Evaluate components vs their composition for emergent persistence
    Emergence(EmergenceArgs),
    /// Trace-set and finite-property checks
    #[command(subcommand)]
    Hyperprop(HyperpropCommand),
}

#[derive(Subcommand)]
enum GraphCommand {
    /// Generate a graph
    Gen(GraphGenArgs),
    /// Compose graphs under union, join, or bridge
    Compose(GraphComposeArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphKind {
    Complete,
    Star,
    Path,
    ErdosRenyi,
}

#[derive(Args)]
struct GraphGenArgs {
    /// Graph family
    #[arg(long, value_enum)]
    kind: GraphKind,
    /// Node count
    #[arg(long)]
    n: usize,
    /// Edge probability (erdos-renyi only)
    #[arg(long)]
    p: Option<f64>,
    /// Generator seed (erdos-renyi only)
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output path for the graph JSON (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum OpArg {
    Union,
    Join,
    Bridge,
}

impl From<OpArg> for CompositionOp {
    fn from(op: OpArg) -> CompositionOp {
        match op {
            OpArg::Union => CompositionOp::Union,
            OpArg::Join => CompositionOp::Join,
            OpArg::Bridge => CompositionOp::Bridge,
        }
    }
}

#[derive(Args)]
struct GraphComposeArgs {
    /// Component graph files (two or more)
    #[arg(long, num_args = 2.., required = true)]
    components: Vec<PathBuf>,
    /// Composition operator
    #[arg(long, value_enum)]
    op: OpArg,
    /// JSON file with cross edges `[[u, v], ...]` (bridge only)
    #[arg(long)]
    bridge_edges: Option<PathBuf>,
    /// Output path for the graph JSON (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SpectralArgs {
    /// Graph file
    #[arg(long)]
    graph: PathBuf,
    /// Residual tolerance for power iteration
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Iteration budget
    #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
    max_iter: usize,
    /// Report path (stdout when omitted)
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct ThresholdArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Defense capability (per-node cure probability)
    #[arg(long)]
    beta: f64,
    /// Attack capability (per-edge compromise probability)
    #[arg(long)]
    gamma: f64,
    /// Half-width of the Critical band around the threshold
    #[arg(long, default_value_t = DEFAULT_CRITICAL_TOL)]
    critical_tol: f64,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
    max_iter: usize,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    beta: f64,
    #[arg(long)]
    gamma: f64,
    /// Initial state: `all`, `random:<k>`, or `nodes:<comma-list>`
    #[arg(long, default_value = "all")]
    init: String,
    /// Number of synchronous steps
    #[arg(long)]
    horizon: usize,
    /// Independent replicates
    #[arg(long, default_value_t = 1)]
    replicates: usize,
    /// Master seed; replicate r uses split(seed, r)
    #[arg(long)]
    seed: u64,
    /// CSV path for the time series `step,replicate,compromised_count`
    #[arg(long)]
    out: Option<PathBuf>,
    /// Ensemble summary JSON (stdout when omitted)
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct MeanFieldArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    beta: f64,
    #[arg(long)]
    gamma: f64,
    /// Initial probabilities from an init policy: compromised nodes start
    /// at 1, secure nodes at 0
    #[arg(long, default_value = "all", conflicts_with = "p0")]
    init: String,
    /// Uniform initial probability for every node (overrides --init)
    #[arg(long)]
    p0: Option<f64>,
    /// Seed for `--init random:<k>`
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Maximum number of steps
    #[arg(long)]
    horizon: usize,
    /// Fixed-point stop tolerance on max per-node step difference
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    /// CSV path for the time series `step,total_p,max_p`
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct EmergenceArgs {
    /// Component graph files (two or more)
    #[arg(long, num_args = 2.., required = true)]
    components: Vec<PathBuf>,
    #[arg(long, value_enum)]
    op: OpArg,
    #[arg(long)]
    bridge_edges: Option<PathBuf>,
    #[arg(long)]
    beta: f64,
    #[arg(long)]
    gamma: f64,
    #[arg(long, default_value = "all")]
    init: String,
    #[arg(long)]
    horizon: usize,
    #[arg(long)]
    replicates: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_CRITICAL_TOL)]
    critical_tol: f64,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
    max_iter: usize,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Subcommand)]
enum HyperpropCommand {
    /// Check a property against a trace set
    Check(HyperpropCheckArgs),
    /// Split a finite property into safety and liveness factors
    Decompose(HyperpropDecomposeArgs),
    /// Search for a witness that a property is not per-trace checkable
    Witness(HyperpropWitnessArgs),
}

#[derive(Args)]
struct HyperpropCheckArgs {
    /// Trace-set file
    #[arg(long)]
    traces: PathBuf,
    /// `avg-rt:<bound>`, `noninterference`, or `pointwise:max-rt:<bound>`
    #[arg(long)]
    property: String,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct HyperpropDecomposeArgs {
    /// Property file `{"sigma": [..], "L": n, "members": [[..], ..]}`
    #[arg(long)]
    property: PathBuf,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct HyperpropWitnessArgs {
    /// Property to refute: `avg-rt:<bound>`, `noninterference`, or
    /// `pointwise:max-rt:<bound>`
    #[arg(long)]
    property: String,
    /// Candidate pool file; alternative to --sigma/--len
    #[arg(long, conflicts_with_all = ["sigma", "len"])]
    traces: Option<PathBuf>,
    /// Event alphabet, e.g. `Hin:1,Lout:0,Lout:0:rt=2.5`; the pool is every
    /// event sequence of length --len
    #[arg(long, requires = "len")]
    sigma: Option<String>,
    /// Pool trace length when generating from --sigma
    #[arg(long, requires = "sigma")]
    len: Option<usize>,
    /// Largest subset size tried (at most 6)
    #[arg(long, default_value_t = 4)]
    max_set_size: usize,
    #[arg(long)]
    report: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Convergence { .. } => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Graph(GraphCommand::Gen(args)) => graph_gen(args),
        Command::Graph(GraphCommand::Compose(args)) => graph_compose(args),
        Command::Spectral(args) => spectral(args),
        Command::Threshold(args) => threshold(args),
        Command::Simulate(args) => simulate_cmd(args),
        Command::Meanfield(args) => meanfield(args),
        Command::Emergence(args) => emergence(args),
        Command::Hyperprop(HyperpropCommand::Check(args)) => hyperprop_check(args),
        Command::Hyperprop(HyperpropCommand::Decompose(args)) => hyperprop_decompose(args),
        Command::Hyperprop(HyperpropCommand::Witness(args)) => hyperprop_witness(args),
    }
}

fn emit_graph(g: &Graph, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => write_graph(g, path),
        None => {
            print!("{}", to_json(g));
            Ok(())
        }
    }
}

fn emit_report<T: Serialize>(report: &T, path: Option<&Path>) -> Result<()> {
    let mut text = serde_json::to_string_pretty(report).map_err(|e| Error::parse(e.to_string()))?;
    text.push('\n');
    match path {
        Some(path) => {
            fs::write(path, text)?;
            Ok(())
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn graph_gen(args: GraphGenArgs) -> Result<()> {
    let g = match args.kind {
        GraphKind::Complete => Graph::complete(args.n)?,
        GraphKind::Star => Graph::star(args.n)?,
        GraphKind::Path => Graph::path(args.n)?,
        GraphKind::ErdosRenyi => {
            let p = args
                .p
                .ok_or_else(|| Error::invalid("erdos-renyi requires --p"))?;
            Graph::erdos_renyi(args.n, p, args.seed)?
        }
    };
    emit_graph(&g, args.out.as_deref())
}

fn read_components(paths: &[PathBuf]) -> Result<Vec<Graph>> {
    paths.iter().map(|p| read_graph(p)).collect()
}

fn read_bridge_edges(path: &Path) -> Result<Vec<(usize, usize)>> {
    let text = fs::read_to_string(path)?;
    let pairs: Vec<[usize; 2]> = serde_json::from_str(&text)
        .map_err(|e| Error::parse(format!("{}: bridge edges: {e}", path.display())))?;
    Ok(pairs.into_iter().map(|[u, v]| (u, v)).collect())
}

fn graph_compose(args: GraphComposeArgs) -> Result<()> {
    let components = read_components(&args.components)?;
    let bridges = args
        .bridge_edges
        .as_deref()
        .map(read_bridge_edges)
        .transpose()?;
    let g = compose(&components, args.op.into(), bridges.as_deref())?;
    emit_graph(&g, args.out.as_deref())
}

fn spectral(args: SpectralArgs) -> Result<()> {
    let g = read_graph(&args.graph)?;
    let result = spectral_radius(&g, args.tol, args.max_iter)?;
    emit_report(&result, args.report.as_deref())
}

fn threshold(args: ThresholdArgs) -> Result<()> {
    let g = read_graph(&args.graph)?;
    let params = DynamicsParams::new(args.beta, args.gamma)?;
    let verdict = threshold_verdict(&g, params, args.critical_tol, args.tol, args.max_iter)?;
    emit_report(&verdict, args.report.as_deref())
}

fn parse_init(text: &str) -> Result<InitPolicy> {
    if text == "all" {
        return Ok(InitPolicy::All);
    }
    if let Some(k) = text.strip_prefix("random:") {
        let k = k
            .parse()
            .map_err(|_| Error::invalid(format!("init: bad count in `{text}`")))?;
        return Ok(InitPolicy::Random { k });
    }
    if let Some(list) = text.strip_prefix("nodes:") {
        let nodes = list
            .split(',')
            .map(|s| {
                s.trim()
                    .parse()
                    .map_err(|_| Error::invalid(format!("init: bad node id `{s}` in `{text}`")))
            })
            .collect::<Result<Vec<usize>>>()?;
        return Ok(InitPolicy::Nodes(nodes));
    }
    Err(Error::invalid(format!(
        "init must be `all`, `random:<k>`, or `nodes:<comma-list>`, got `{text}`"
    )))
}

fn write_sim_csv(traces: &[SimTrace], path: &Path) -> Result<()> {
    let mut out = String::from("step,replicate,compromised_count\n");
    for (r, trace) in traces.iter().enumerate() {
        for &(step, count) in &trace.steps {
            out.push_str(&format!("{step},{r},{count}\n"));
        }
    }
    fs::write(path, out)?;
    Ok(())
}

fn simulate_cmd(args: SimulateArgs) -> Result<()> {
    let g = read_graph(&args.graph)?;
    let params = DynamicsParams::new(args.beta, args.gamma)?;
    let init = parse_init(&args.init)?.realize(g.node_count(), init_stream_seed(args.seed, 0))?;
    let traces = run_replicate_traces(&g, params, &init, args.horizon, args.replicates, args.seed)?;
    if let Some(csv) = args.out.as_deref() {
        write_sim_csv(&traces, csv)?;
    }
    let summary = EnsembleSummary::from_traces(&traces, g.node_count(), args.horizon);
    emit_report(&summary, args.report.as_deref())
}

#[derive(Serialize)]
struct MeanFieldReport {
    steps: usize,
    converged: bool,
    final_total: f64,
    final_max: f64,
}

fn write_mean_field_csv(trace: &MeanFieldTrace, path: &Path) -> Result<()> {
    let mut out = String::from("step,total_p,max_p\n");
    for (step, p) in trace.steps.iter().enumerate() {
        let total: f64 = p.iter().sum();
        let max = p.iter().cloned().fold(0.0, f64::max);
        out.push_str(&format!("{step},{total},{max}\n"));
    }
    fs::write(path, out)?;
    Ok(())
}

fn meanfield(args: MeanFieldArgs) -> Result<()> {
    let g = read_graph(&args.graph)?;
    let params = DynamicsParams::new(args.beta, args.gamma)?;
    let n = g.node_count();
    let p0: Vec<f64> = match args.p0 {
        Some(p) => vec![p; n],
        None => {
            let init = parse_init(&args.init)?.realize(n, init_stream_seed(args.seed, 0))?;
            (0..n)
                .map(|i| if init.is_compromised(i) { 1.0 } else { 0.0 })
                .collect()
        }
    };
    let trace = mean_field_iterate(&g, params, &p0, args.horizon, args.tol)?;
    if let Some(csv) = args.out.as_deref() {
        write_mean_field_csv(&trace, csv)?;
    }
    let p = trace.final_probabilities();
    let report = MeanFieldReport {
        steps: trace.steps.len() - 1,
        converged: trace.converged,
        final_total: trace.final_total,
        final_max: p.iter().cloned().fold(0.0, f64::max),
    };
    emit_report(&report, args.report.as_deref())
}

fn emergence(args: EmergenceArgs) -> Result<()> {
    let components = read_components(&args.components)?;
    let bridges = args
        .bridge_edges
        .as_deref()
        .map(read_bridge_edges)
        .transpose()?;
    let cfg = EmergenceConfig {
        params: DynamicsParams::new(args.beta, args.gamma)?,
        critical_tol: args.critical_tol,
        spectral_tol: args.tol,
        max_iter: args.max_iter,
        sim: SimSettings {
            horizon: args.horizon,
            replicates: args.replicates,
            master_seed: args.seed,
            init: parse_init(&args.init)?,
        },
    };
    let report = evaluate_emergence(&components, args.op.into(), bridges.as_deref(), &cfg)?;
    emit_report(&report, args.report.as_deref())
}

fn hyperprop_check(args: HyperpropCheckArgs) -> Result<()> {
    let traces = read_trace_set(&args.traces)?;
    let spec: PropertySpec = args.property.parse()?;
    let verdict = spec.check(&traces)?;
    emit_report(&verdict, args.report.as_deref())
}

fn hyperprop_decompose(args: HyperpropDecomposeArgs) -> Result<()> {
    let p = read_property(&args.property)?;
    let (safe, live) = p.decompose();
    #[derive(Serialize)]
    struct DecomposeReport {
        safe: serde_json::Value,
        live: serde_json::Value,
    }
    let as_value = |p| serde_json::from_str(&property_to_json(p)).expect("property JSON is valid");
    let report = DecomposeReport {
        safe: as_value(&safe),
        live: as_value(&live),
    };
    emit_report(&report, args.report.as_deref())
}

#[derive(Serialize)]
struct WitnessReport {
    found: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<Witness>,
}

fn hyperprop_witness(args: HyperpropWitnessArgs) -> Result<()> {
    let pool: Vec<Trace> = match (&args.traces, &args.sigma, args.len) {
        (Some(path), None, None) => read_trace_set(path)?,
        (None, Some(sigma), Some(len)) => propspec::event_pool(sigma, len)?,
        _ => {
            return Err(Error::invalid(
                "witness search needs either --traces or --sigma with --len",
            ))
        }
    };
    let spec: PropertySpec = args.property.parse()?;
    let witness = witness_non_trace_property(&pool, args.max_set_size, |s| spec.passes(s))?;
    let report = WitnessReport {
        found: witness.is_some(),
        witness,
    };
    emit_report(&report, args.report.as_deref())
}
