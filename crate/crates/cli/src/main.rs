use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use pairgossip::data::{dataset_to_csv, gen_gaussian_mixture, gen_toy_auc};
use pairgossip::experiment::{build_graph, compare_baseline, run_experiment, Algorithm, DatasetSpec, RunConfig, TopologySpec};
use pairgossip::Graph;

#[derive(Parser)]
#[command(name = "pairgossip", version, about = "Gossip dual averaging for pairwise objectives")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print 1 - lambda_2 of the expected gossip matrix of a graph.
    SpectralGap(GapArgs),
    /// Write a synthetic dataset as CSV.
    GenSynthetic(GenArgs),
    /// Centralized dual averaging (deterministic unless the config says centralized_sto).
    RunCentralized(RunArgs),
    /// Synchronous gossip dual averaging.
    RunSync(RunArgs),
    /// Asynchronous gossip dual averaging.
    RunAsync(RunArgs),
    /// Run a sync or async config with gossip and unbiased-baseline gradients.
    CompareBaseline(RunArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum TopologyKind {
    Complete,
    Cycle,
    WattsStrogatz,
}

#[derive(Args)]
struct GapArgs {
    /// Take the topology and node count from a run config.
    #[arg(long, conflicts_with_all = ["topology", "edge_list"])]
    config: Option<PathBuf>,
    #[arg(long, value_enum, requires = "n")]
    topology: Option<TopologyKind>,
    #[arg(long)]
    n: Option<usize>,
    /// Even ring-lattice degree for watts-strogatz.
    #[arg(long, default_value_t = 4)]
    k: usize,
    /// Rewiring probability for watts-strogatz.
    #[arg(long, default_value_t = 0.3)]
    p: f64,
    /// Edge-list file: header `n m`, then `i j` per line.
    #[arg(long, conflicts_with = "topology")]
    edge_list: Option<PathBuf>,
    /// Replace every node by a complete graph of this many virtual nodes first.
    #[arg(long)]
    tensor: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also write the graph as an edge list.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SyntheticKind {
    Mixture,
    Toy,
}

#[derive(Args)]
struct GenArgs {
    /// JSON dataset spec (`gaussian_mixture` or `toy_auc` kind).
    #[arg(long, conflicts_with = "kind")]
    config: Option<PathBuf>,
    /// Generator with default parameters when no config is given.
    #[arg(long, value_enum, default_value = "mixture")]
    kind: SyntheticKind,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output CSV path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory; defaults to the config `output` field, then `out`.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Scientific notation with three significant digits and a two-digit
/// exponent, e.g. `5.78e-08`.
fn sci3(x: f64) -> String {
    let s = format!("{x:.2e}");
    match s.split_once('e') {
        Some((mantissa, exp)) => {
            let (sign, digits) = exp.strip_prefix('-').map_or(("+", exp), |d| ("-", d));
            format!("{mantissa}e{sign}{digits:0>2}")
        }
        None => s,
    }
}

fn spectral_gap(args: &GapArgs) -> Result<()> {
    let mut graph = if let Some(path) = &args.config {
        let cfg = RunConfig::load(path)?;
        let spec = cfg.topology.as_ref().context("config has no topology")?;
        let n = match spec {
            TopologySpec::EdgeList { .. } => 0,
            _ => cfg.dataset.load()?.len(),
        };
        match spec {
            TopologySpec::EdgeList { path } => Graph::parse_edge_list(&std::fs::read_to_string(path)?)?,
            _ => build_graph(spec, n, args.seed)?,
        }
    } else if let Some(path) = &args.edge_list {
        Graph::parse_edge_list(&std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?)?
    } else {
        let (Some(kind), Some(n)) = (args.topology, args.n) else {
            bail!("give --topology with --n, --edge-list or --config");
        };
        let spec = match kind {
            TopologyKind::Complete => TopologySpec::Complete,
            TopologyKind::Cycle => TopologySpec::Cycle,
            TopologyKind::WattsStrogatz => TopologySpec::WattsStrogatz { k: args.k, p: args.p },
        };
        build_graph(&spec, n, args.seed)?
    };
    if let Some(k) = args.tensor {
        graph = graph.tensor_with_complete(k)?;
    }
    if let Some(out) = &args.out {
        std::fs::write(out, graph.to_edge_list())?;
    }
    println!("{}", sci3(graph.spectral_gap()?));
    Ok(())
}

fn gen_synthetic(args: &GenArgs) -> Result<()> {
    let mut spec: DatasetSpec = match &args.config {
        Some(path) => serde_json::from_str(&std::fs::read_to_string(path)?).context("parsing dataset spec")?,
        None => match args.kind {
            SyntheticKind::Mixture => DatasetSpec::GaussianMixture(Default::default()),
            SyntheticKind::Toy => DatasetSpec::ToyAuc(Default::default()),
        },
    };
    match &mut spec {
        DatasetSpec::GaussianMixture(m) => {
            m.n = args.n.unwrap_or(m.n);
            m.seed = args.seed.unwrap_or(m.seed);
        }
        DatasetSpec::ToyAuc(t) => {
            t.n = args.n.unwrap_or(t.n);
            t.seed = args.seed.unwrap_or(t.seed);
        }
        _ => bail!("gen-synthetic needs a gaussian_mixture or toy_auc spec"),
    }
    let data = match &spec {
        DatasetSpec::GaussianMixture(m) => gen_gaussian_mixture(m)?,
        DatasetSpec::ToyAuc(t) => gen_toy_auc(t)?,
        _ => unreachable!(),
    };
    let csv = dataset_to_csv(&data)?;
    match &args.out {
        Some(path) => std::fs::write(path, csv)?,
        None => print!("{csv}"),
    }
    Ok(())
}

fn load_run(args: &RunArgs) -> Result<(RunConfig, PathBuf)> {
    let mut cfg = RunConfig::load(&args.config).with_context(|| format!("loading {}", args.config.display()))?;
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    let out = args
        .out
        .clone()
        .or_else(|| cfg.output.clone())
        .unwrap_or_else(|| PathBuf::from("out"));
    Ok((cfg, out))
}

fn run(args: &RunArgs, algorithm: Option<Algorithm>) -> Result<()> {
    let (mut cfg, out) = load_run(args)?;
    cfg.algorithm = match algorithm {
        Some(a) => a,
        None if cfg.algorithm == Algorithm::CentralizedSto => Algorithm::CentralizedSto,
        None => Algorithm::CentralizedDet,
    };
    if matches!(cfg.algorithm, Algorithm::CentralizedDet | Algorithm::CentralizedSto) {
        cfg.gradient_mode = Default::default();
    }
    cfg.validate()?;
    let summary = run_experiment(&cfg, &out)?;
    report(&out, summary.mean_final_obj, summary.mean_final_gap);
    Ok(())
}

fn report(out: &Path, obj: f64, gap: Option<f64>) {
    match gap {
        Some(g) => eprintln!("final objective {obj:.6} (gap {g:.3e}); results in {}", out.display()),
        None => eprintln!("final objective {obj:.6}; results in {}", out.display()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::SpectralGap(a) => spectral_gap(a),
        Command::GenSynthetic(a) => gen_synthetic(a),
        Command::RunCentralized(a) => run(a, None),
        Command::RunSync(a) => run(a, Some(Algorithm::Sync)),
        Command::RunAsync(a) => run(a, Some(Algorithm::Async)),
        Command::CompareBaseline(a) => load_run(a).and_then(|(cfg, out)| {
            let cmp = compare_baseline(&cfg, &out)?;
            println!("{}", cmp.relative_difference);
            Ok(())
        }),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
