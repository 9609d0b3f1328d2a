//! `shallow`: generate hypergraphs, search for shallow hitting edge sets,
//! verify selections and evaluate the threshold formulas.
//!
//! Exit codes: 0 success / SAT / predicate holds, 2 usage or input error,
//! 3 UNSAT / predicate fails, 4 solver gave up.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use shallow_core::bounds::{self, BoundReport};
use shallow_core::constructions::{generate, GenKind, GenParams, Generated};
use shallow_core::designs::{self, design_dual_hypergraph, verify_design};
use shallow_core::experiment::{self, ACCEPTANCE_GRID};
use shallow_core::hypergraph::{stats, verify_selection};
use shallow_core::io::{self, Format};
use shallow_core::solvers::{self, monte_carlo_experiment, Algo, SolveParams};
use shallow_core::EdgeSelection;

const EXIT_USAGE: u8 = 2;
const EXIT_FALSE: u8 = 3;

#[derive(Parser)]
#[command(name = "shallow", version, about = "Shallow hitting edge sets in hypergraphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a hypergraph or design.
    Gen(GenArgs),
    /// Search for a t-shallow hitting edge set (or, with exact-max, a maximum t-shallow set).
    Solve(SolveArgs),
    /// Check a selection file against a host; exit 0 iff it is t-shallow and hitting.
    Verify(VerifyArgs),
    /// Print structural statistics of a hypergraph as JSON.
    Stats(StatsArgs),
    /// Evaluate a threshold formula.
    Bounds(BoundsArgs),
    /// Construct, verify or dualize a combinatorial design.
    #[command(subcommand)]
    Design(DesignCommand),
    /// Run a parameter grid and write one CSV row per run.
    ///
    /// Columns: cell,kind,params,algo,t,seed,n,m,status,iterations,selection_size,elapsed_ms.
    /// `params` lists the generator parameters as key=value joined by ';'.
    /// `status` is SAT, UNSAT, GaveUp or ERROR (generator or solver rejected the cell).
    Experiment(ExperimentArgs),
    /// One-pass random experiment without repair; CSV columns trial,seed,max_deg,shallow.
    MonteCarlo(MonteCarloArgs),
}

#[derive(Args)]
struct GenArgs {
    /// projective | projective-truncated | codegree-uniform | codegree-partite |
    /// bipartite-tight | figure1 | random-regular | random-partite | random-girth4 |
    /// affine-plane | affine-plane-dual
    kind: String,
    #[arg(long)]
    t: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    q: Option<usize>,
    /// Seed for random kinds; drawn from the clock and logged when absent.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    max_tries: Option<u64>,
    /// For affine-plane: emit the dual hypergraph instead of the design.
    #[arg(long)]
    dual: bool,
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// text | json (hypergraphs only).
    #[arg(long, default_value = "text")]
    format: String,
}

#[derive(Args)]
struct SolveArgs {
    input: PathBuf,
    /// exact | exact-max | lll | lll-girth4 | partition | codegree | codegree-partite | bipartite-flow
    #[arg(long)]
    algo: String,
    #[arg(long)]
    t: usize,
    /// Seed for randomized algorithms; drawn from the clock and logged when absent.
    #[arg(long)]
    seed: Option<u64>,
    /// Node budget for the exact solvers.
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long)]
    max_resamples: Option<u64>,
    #[arg(long)]
    max_restarts: Option<u64>,
    /// Number of colour classes for partition.
    #[arg(long)]
    k: Option<usize>,
    /// Write the selected edge indices to this file.
    #[arg(long)]
    selection_out: Option<PathBuf>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Omit elapsed_ms from the report.
    #[arg(long)]
    no_timing: bool,
}

#[derive(Args)]
struct VerifyArgs {
    input: PathBuf,
    selection: PathBuf,
    #[arg(long)]
    t: usize,
    /// Only require t-shallowness, not hitting.
    #[arg(long)]
    shallow_only: bool,
}

#[derive(Args)]
struct StatsArgs {
    input: PathBuf,
    /// Also compute the co-degrees.
    #[arg(long)]
    codegree: bool,
}

#[derive(Args)]
struct BoundsArgs {
    #[command(subcommand)]
    formula: Formula,
    /// Print JSON instead of aligned text.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Formula {
    /// Smallest t meeting the general local-lemma condition, with its closed form.
    MinTGeneral {
        #[arg(long)]
        mu: f64,
        #[arg(long)]
        r: u64,
    },
    /// Smallest t for girth-four hosts and its Lambert-W closed form.
    MinTGirth4 {
        #[arg(long)]
        eta: f64,
        #[arg(long)]
        r: u64,
    },
    /// The constant e^(1+W(2/e)).
    LambertC,
    /// Principal branch W(x).
    LambertW {
        #[arg(long, allow_hyphen_values = true)]
        x: f64,
    },
    /// Number of colour classes of the partition lemma.
    PartitionK {
        #[arg(long)]
        max_delta: u64,
        #[arg(long)]
        r: u64,
        #[arg(long)]
        t: u64,
    },
    /// Guaranteed size of a t-shallow edge set.
    ShallowGuarantee {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        r: u64,
        #[arg(long)]
        t: u64,
        #[arg(long)]
        delta: u64,
        #[arg(long)]
        max_delta: u64,
    },
    /// Co-degree thresholds n/((r-1)t+1), uniform and partite.
    Codegree {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        r: u64,
        #[arg(long)]
        t: u64,
    },
    /// Perfect-matching co-degree threshold for r-uniform hosts.
    Rrs {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        r: u64,
    },
    /// Sufficient degree condition for bipartite graphs.
    Bipartite {
        #[arg(long)]
        size_a: u64,
        #[arg(long)]
        size_b: u64,
        #[arg(long)]
        delta_a: u64,
        #[arg(long)]
        delta_b: u64,
        #[arg(long)]
        t: u64,
    },
}

#[derive(Subcommand)]
enum DesignCommand {
    /// Affine plane of order q with its parallel classes.
    Construct {
        #[arg(long)]
        q: usize,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Check blocks, coverage and resolution; exit 0 iff valid.
    Verify { input: PathBuf },
    /// The dual hypergraph of a resolvable design, partitioned by parallel classes.
    Dualize {
        input: PathBuf,
        #[arg(long, short)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "text")]
        format: String,
    },
}

#[derive(Args)]
struct ExperimentArgs {
    /// Grid spec file (key = value lines, blocks separated by blank lines).
    spec: Option<PathBuf>,
    /// Run the built-in acceptance grid.
    #[arg(long, conflicts_with = "spec")]
    acceptance: bool,
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Args)]
struct MonteCarloArgs {
    input: PathBuf,
    #[arg(long)]
    t: usize,
    #[arg(long, default_value_t = 100)]
    trials: u64,
    #[arg(long)]
    seed: Option<u64>,
    /// Write per-trial CSV here.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

fn resolve_seed(seed: Option<u64>) -> u64 {
    match seed {
        Some(s) => {
            eprintln!("seed: {s}");
            s
        }
        None => {
            let s = SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_nanos() as u64)
                .unwrap_or(0);
            eprintln!("seed: {s} (auto)");
            s
        }
    }
}

fn emit(out: Option<&Path>, content: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, content).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn read_host(path: &Path) -> Result<shallow_core::Hypergraph> {
    io::read_hypergraph(path).with_context(|| format!("reading {}", path.display()))
}

fn cmd_gen(a: GenArgs) -> Result<u8> {
    let kind: GenKind = a.kind.parse()?;
    let format: Format = a.format.parse()?;
    let seed = kind.is_random().then(|| resolve_seed(a.seed));
    let p = GenParams {
        t: a.t,
        n: a.n,
        r: a.r,
        d: a.d,
        q: a.q,
        seed,
        max_tries: a.max_tries,
        dual: a.dual || a.kind == "affine-plane-dual",
    };
    let content = match generate(kind, &p)? {
        Generated::Hypergraph(h) => io::encode(&h, format),
        Generated::Design(d) => designs::design_to_text(&d)?,
    };
    emit(a.out.as_deref(), &content)?;
    Ok(0)
}

fn cmd_solve(a: SolveArgs) -> Result<u8> {
    let algo: Algo = a.algo.parse()?;
    let h = read_host(&a.input)?;
    let mut p = SolveParams::new(a.t);
    if algo.is_randomized() {
        p.seed = resolve_seed(a.seed);
    }
    p.budget = a.budget.unwrap_or(p.budget);
    p.max_resamples = a.max_resamples.unwrap_or(p.max_resamples);
    p.max_restarts = a.max_restarts.unwrap_or(p.max_restarts);
    p.k = a.k;
    let rep = solvers::run(algo, &h, &p)?;
    let text = if a.no_timing { rep.to_json_deterministic() } else { rep.to_json() };
    emit(a.report.as_deref(), &format!("{text}\n"))?;
    if let (Some(path), Some(sel)) = (&a.selection_out, &rep.selection) {
        fs::write(path, io::selection_to_text(sel)).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(rep.status.exit_code() as u8)
}

fn cmd_verify(a: VerifyArgs) -> Result<u8> {
    let h = read_host(&a.input)?;
    let src = fs::read_to_string(&a.selection).with_context(|| format!("reading {}", a.selection.display()))?;
    let sel = EdgeSelection::from_indices(&h, &io::parse_selection(&src)?)?;
    let rep = verify_selection(&sel, a.t);
    println!("{}", serde_json::to_string_pretty(&rep)?);
    let ok = if a.shallow_only { rep.is_t_shallow } else { rep.is_shallow_hitting() };
    Ok(if ok { 0 } else { EXIT_FALSE })
}

fn cmd_stats(a: StatsArgs) -> Result<u8> {
    let h = read_host(&a.input)?;
    let s = stats(&h, a.codegree)?;
    println!("{}", serde_json::to_string_pretty(&s)?);
    Ok(0)
}

fn cmd_bounds(a: BoundsArgs) -> Result<u8> {
    let rep = match a.formula {
        Formula::MinTGeneral { mu, r } => BoundReport::from_min_t(
            "min-t-general",
            &[("mu", mu.to_string()), ("r", r.to_string())],
            bounds::min_t_general(mu, r)?,
        ),
        Formula::MinTGirth4 { eta, r } => BoundReport::from_min_t(
            "min-t-girth4",
            &[("eta", eta.to_string()), ("r", r.to_string())],
            bounds::min_t_girth4(eta, r)?,
        ),
        Formula::LambertC => BoundReport::new("lambert-c", &[], format!("{:.12}", bounds::lambert_c())),
        Formula::LambertW { x } => {
            BoundReport::new("lambert-w", &[("x", x.to_string())], format!("{:.15}", bounds::lambert_w(x)?))
        }
        Formula::PartitionK { max_delta, r, t } => BoundReport::new(
            "partition-k",
            &[("max_delta", max_delta.to_string()), ("r", r.to_string()), ("t", t.to_string())],
            bounds::partition_k(max_delta, r, t)?,
        ),
        Formula::ShallowGuarantee { n, r, t, delta, max_delta } => BoundReport::new(
            "shallow-guarantee",
            &[
                ("n", n.to_string()),
                ("r", r.to_string()),
                ("t", t.to_string()),
                ("delta", delta.to_string()),
                ("max_delta", max_delta.to_string()),
            ],
            bounds::shallow_size_guarantee(n, r, t, delta, max_delta)?,
        ),
        Formula::Codegree { n, r, t } => {
            let c = bounds::codegree_thresholds(n, r, t)?;
            let mut rep = BoundReport::new(
                "codegree",
                &[("n", n.to_string()), ("r", r.to_string()), ("t", t.to_string())],
                c.uniform_sufficient,
            );
            rep.params.insert("k".into(), c.k.to_string());
            rep.value = format!(
                "uniform_lb={} uniform_sufficient={} partite_lb={} partite_sufficient={}",
                c.uniform_lb, c.uniform_sufficient, c.partite_lb, c.partite_sufficient
            );
            rep
        }
        Formula::Rrs { n, r } => BoundReport::new(
            "rrs",
            &[("n", n.to_string()), ("r", r.to_string())],
            bounds::rrs_matching_threshold(n, r)?,
        ),
        Formula::Bipartite { size_a, size_b, delta_a, delta_b, t } => BoundReport::new(
            "bipartite",
            &[
                ("size_a", size_a.to_string()),
                ("size_b", size_b.to_string()),
                ("delta_a", delta_a.to_string()),
                ("delta_b", delta_b.to_string()),
                ("t", t.to_string()),
            ],
            bounds::bipartite_sufficient(size_a, size_b, delta_a, delta_b, t),
        ),
    };
    if a.json {
        println!("{}", serde_json::to_string_pretty(&rep)?);
    } else {
        print!("{rep}");
    }
    Ok(0)
}

fn cmd_design(c: DesignCommand) -> Result<u8> {
    match c {
        DesignCommand::Construct { q, out } => {
            let d = designs::affine_plane(q)?;
            emit(out.as_deref(), &designs::design_to_text(&d)?)?;
            Ok(0)
        }
        DesignCommand::Verify { input } => {
            let d = designs::load_design(&input, false)?;
            let rep = verify_design(&d)?;
            let out = json!({
                "t": d.t, "v": d.v, "k": d.k, "lambda": d.lambda,
                "blocks": d.blocks.len(),
                "blocks_ok": rep.blocks_ok,
                "coverage_ok": rep.coverage_ok,
                "resolution_ok": rep.resolution_ok,
                "problems": rep.problems,
            });
            println!("{}", serde_json::to_string_pretty(&out)?);
            Ok(if rep.is_valid() { 0 } else { EXIT_FALSE })
        }
        DesignCommand::Dualize { input, out, format } => {
            let format: Format = format.parse()?;
            let d = designs::load_design(&input, true)?;
            let h = design_dual_hypergraph(&d)?;
            emit(out.as_deref(), &io::encode(&h, format))?;
            Ok(0)
        }
    }
}

fn cmd_experiment(a: ExperimentArgs) -> Result<u8> {
    let spec = match (&a.spec, a.acceptance) {
        (_, true) => ACCEPTANCE_GRID.to_string(),
        (Some(p), false) => fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?,
        (None, false) => bail!("give a spec file or --acceptance"),
    };
    let csv = experiment::run_spec(&spec, a.workers)?;
    emit(a.out.as_deref(), &csv)?;
    Ok(0)
}

fn cmd_monte_carlo(a: MonteCarloArgs) -> Result<u8> {
    let h = read_host(&a.input)?;
    let seed = resolve_seed(a.seed);
    let rep = monte_carlo_experiment(&h, a.t, a.trials, seed)?;
    if let Some(p) = &a.out {
        fs::write(p, rep.to_csv()).with_context(|| format!("writing {}", p.display()))?;
    }
    let summary = json!({
        "t": rep.t,
        "trials": a.trials,
        "seed": seed,
        "single_pass_success_rate": rep.single_pass_success_rate,
        "mean_max_degree": rep.mean_max_degree,
    });
    println!("{}", serde_json::to_string_pretty(&summary)?);
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Stats(a) => cmd_stats(a),
        Command::Bounds(a) => cmd_bounds(a),
        Command::Design(c) => cmd_design(c),
        Command::Experiment(a) => cmd_experiment(a),
        Command::MonteCarlo(a) => cmd_monte_carlo(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
