//! Single binary exposing graph generation, construction, certification,
//! the brute-force oracle, algebraic checks, and experiment sweeps.
//!
//! Exit codes: 0 success (`solve`: SAT, `certify`: valid, `zp-cert`:
//! accepted), 1 negative verdict (UNSAT / invalid / rejected / sweep
//! failures), 2 enumeration guard exceeded, 3 other errors.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use orientavoid_core::algebra::{
    at_number, coeff_via_permanent, naive_coeff_x, naive_coeff_y, zp_certificate,
};
use orientavoid_core::constructors::{
    alpha_gamma_floor, build_h_random, build_h_third, build_h_two_thirds, certify_h_condition,
    HCertificate, RandomOutcome,
};
use orientavoid_core::matrix::{factorial, parse_rat, ExactMatrix, Rat};
use orientavoid_core::oracle::{find_orientation, SolveOutcome};
use orientavoid_core::{balanced_orientation, ForbiddenMode, ForbiddenSets, Graph, VertexOrdering};
use orientavoid_core::{gen, io};

#[derive(Parser)]
#[command(
    name = "orientavoid",
    about = "Construct and certify orientations avoiding forbidden out-degrees",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph file.
    Gen(GenArgs),
    /// Search exhaustively for an F-avoiding orientation.
    Solve(SolveArgs),
    /// Evaluate the certificate inequality for a given (ordering, H).
    Certify(CertifyArgs),
    /// Build a certificate: third, two-thirds, or random regime.
    Construct(ConstructArgs),
    /// Randomized check of the permanent duality identity.
    DualityCheck(DualityArgs),
    /// Compute the Alon-Tarsi number of a graph.
    AtNumber(AtNumberArgs),
    /// Verify a Z_p-connectivity certificate.
    ZpCert(ZpCertArgs),
    /// Sweep random instances and report certificate/oracle outcomes.
    Experiment(ExperimentArgs),
}

#[derive(Args)]
struct GenArgs {
    #[command(subcommand)]
    kind: GenKind,
}

#[derive(Subcommand)]
enum GenKind {
    /// Complete graph K_n.
    Complete {
        n: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// K_n minus the matching {0,1}, {2,3}, ...
    CompleteMinusMatching {
        n: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Cycle C_n.
    Cycle {
        n: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Erdos-Renyi G(n, p).
    RandomGnp {
        n: usize,
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Random bipartite graph on n1 + n2 vertices.
    RandomBipartite {
        n1: usize,
        n2: usize,
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Args)]
struct OutputArgs {
    /// Output file (stdout when omitted).
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// Emit JSON instead of the text edge list.
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Outdeg,
    Imbalance,
}

#[derive(Args)]
struct SolveArgs {
    graph: PathBuf,
    forbidden: PathBuf,
    /// Convert the forbidden sets to this mode before solving.
    #[arg(long)]
    mode: Option<ModeArg>,
    /// Emit the witness as DOT instead of JSON.
    #[arg(long)]
    dot: bool,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CertifyArgs {
    graph: PathBuf,
    forbidden: PathBuf,
    /// Certificate JSON carrying "ordering" and "h_edges".
    cert: PathBuf,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum BoundArg {
    Third,
    TwoThirds,
    Random,
}

#[derive(Args)]
struct ConstructArgs {
    graph: PathBuf,
    #[arg(long, value_enum)]
    bound: BoundArg,
    /// Forbidden sets to certify against (empty sets when omitted).
    #[arg(long)]
    forbidden: Option<PathBuf>,
    /// Vertex ordering as a comma list, e.g. "2,0,1" (third bound only;
    /// defaults to the input order).
    #[arg(long)]
    ordering: Option<String>,
    /// Orientation JSON for the two-thirds bound (defaults to a balanced
    /// orientation).
    #[arg(long)]
    orientation: Option<PathBuf>,
    /// Slack parameter for the random bound, a rational in (0,1).
    #[arg(long, default_value = "1/10")]
    gamma: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 200)]
    max_attempts: u32,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DualityArgs {
    /// Maximum matrix dimension.
    #[arg(long, default_value_t = 4)]
    size: usize,
    /// Maximum multiplicity norm.
    #[arg(long, default_value_t = 8)]
    norm: usize,
    #[arg(long, default_value_t = 200)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct AtNumberArgs {
    graph: PathBuf,
}

#[derive(Args)]
struct ZpCertArgs {
    graph: PathBuf,
    p: u32,
    /// Certificate JSON: {"u": vertex, "arcs": [[tail, head], ...]}.
    cert: PathBuf,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long, value_enum)]
    bound: BoundArg,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 4)]
    n_min: usize,
    #[arg(long, default_value_t = 8)]
    n_max: usize,
    /// Comma-separated edge probabilities cycled over the trials.
    #[arg(long, default_value = "0.3,0.5,0.8")]
    probs: String,
    #[arg(long, default_value = "1/10")]
    gamma: String,
    #[arg(long, default_value_t = 200)]
    max_attempts: u32,
    /// Include per-instance runtimes (breaks byte-for-byte reproducibility).
    #[arg(long)]
    timing: bool,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            let guard = e
                .downcast_ref::<orientavoid_core::Error>()
                .is_some_and(|c| c.is_guard());
            ExitCode::from(if guard { 2 } else { 3 })
        }
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Gen(args) => cmd_gen(args),
        Command::Solve(args) => cmd_solve(args),
        Command::Certify(args) => cmd_certify(args),
        Command::Construct(args) => cmd_construct(args),
        Command::DualityCheck(args) => cmd_duality(args),
        Command::AtNumber(args) => cmd_at_number(args),
        Command::ZpCert(args) => cmd_zp_cert(args),
        Command::Experiment(args) => cmd_experiment(args),
    }
}

fn load_graph(path: &Path) -> Result<Arc<Graph>> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading graph file {}", path.display()))?;
    Ok(Arc::new(io::graph_from_str(&text)?))
}

fn load_forbidden(path: &Path, g: &Graph) -> Result<ForbiddenSets> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading forbidden sets {}", path.display()))?;
    let (f, dropped) = io::forbidden_from_json(&text, g)?;
    if dropped > 0 {
        eprintln!("warning: dropped {dropped} unattainable forbidden values");
    }
    Ok(f)
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<()> {
    match out {
        Some(path) => {
            fs::write(path, content).with_context(|| format!("writing {}", path.display()))?
        }
        None => print!("{content}"),
    }
    Ok(())
}

fn cmd_gen(args: GenArgs) -> Result<ExitCode> {
    let (g, out) = match args.kind {
        GenKind::Complete { n, out } => (gen::complete(n)?, out),
        GenKind::CompleteMinusMatching { n, out } => (gen::complete_minus_matching(n)?, out),
        GenKind::Cycle { n, out } => (gen::cycle(n)?, out),
        GenKind::RandomGnp { n, p, seed, out } => (gen::gnp(n, p, seed)?, out),
        GenKind::RandomBipartite {
            n1,
            n2,
            p,
            seed,
            out,
        } => (gen::bipartite(n1, n2, p, seed)?, out),
    };
    let content = if out.json {
        format!("{}\n", io::graph_to_json(&g))
    } else {
        io::graph_to_text(&g)
    };
    emit(&out.out, &content)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_solve(args: SolveArgs) -> Result<ExitCode> {
    let g = load_graph(&args.graph)?;
    let mut f = load_forbidden(&args.forbidden, &g)?;
    if let Some(mode) = args.mode {
        f = match mode {
            ModeArg::Outdeg => f.to_out_degree(&g)?,
            ModeArg::Imbalance => f.to_imbalance(&g)?,
        };
    }
    match find_orientation(&g, &f)? {
        SolveOutcome::Sat(d) => {
            let content = if args.dot {
                io::orientation_to_dot(&d)
            } else {
                format!("{}\n", io::orientation_to_json(&d))
            };
            emit(&args.out, &content)?;
            Ok(ExitCode::SUCCESS)
        }
        SolveOutcome::Unsat => {
            emit(&args.out, "UNSAT\n")?;
            Ok(ExitCode::from(1))
        }
    }
}

fn certificate_exit(cert: &HCertificate, out: &Option<PathBuf>) -> Result<ExitCode> {
    emit(out, &format!("{}\n", io::certificate_to_json(cert)))?;
    Ok(if cert.valid {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_certify(args: CertifyArgs) -> Result<ExitCode> {
    let g = load_graph(&args.graph)?;
    let f = load_forbidden(&args.forbidden, &g)?;
    let text = fs::read_to_string(&args.cert)
        .with_context(|| format!("reading certificate {}", args.cert.display()))?;
    let (ord, h) = io::certificate_parts_from_json(&text, &g)?;
    let cert = certify_h_condition(&g, &ord, &h, &f)?;
    certificate_exit(&cert, &args.out)
}

fn cmd_construct(args: ConstructArgs) -> Result<ExitCode> {
    let g = load_graph(&args.graph)?;
    let f = match &args.forbidden {
        Some(path) => load_forbidden(path, &g)?,
        None => ForbiddenSets::empty(g.n(), ForbiddenMode::OutDegree),
    };
    let (ord, h) = match args.bound {
        BoundArg::Third => {
            let ord = match &args.ordering {
                Some(list) => {
                    let seq = list
                        .split(',')
                        .map(|t| t.trim().parse::<usize>())
                        .collect::<std::result::Result<Vec<_>, _>>()
                        .map_err(|e| anyhow!("bad --ordering: {e}"))?;
                    VertexOrdering::new(seq)?
                }
                None => VertexOrdering::identity(g.n()),
            };
            build_h_third(&g, &ord)?
        }
        BoundArg::TwoThirds => {
            let d = match &args.orientation {
                Some(path) => {
                    let text = fs::read_to_string(path)
                        .with_context(|| format!("reading orientation {}", path.display()))?;
                    io::orientation_from_json(&text, &g)?
                }
                None => balanced_orientation(&g),
            };
            build_h_two_thirds(&g, &d)?
        }
        BoundArg::Random => {
            let gamma = parse_rat(&args.gamma)?;
            match build_h_random(&g, &gamma, args.seed, args.max_attempts)? {
                RandomOutcome::Accepted(s) => {
                    eprintln!(
                        "accepted attempt {} (guaranteed list size per vertex v: floor((sqrt(2)-1-2*gamma)*deg(v)))",
                        s.attempt
                    );
                    (s.ordering, s.h)
                }
                RandomOutcome::Exhausted(fail) => {
                    eprintln!(
                        "no attempt accepted after {}; best attempt {} violated {} vertices:",
                        fail.attempts,
                        fail.best_attempt,
                        fail.violations.len()
                    );
                    for viol in fail.violations.iter().take(10) {
                        eprintln!(
                            "  vertex {} (degree {}): weight {} <= threshold {}",
                            viol.vertex, viol.degree, viol.weight, viol.threshold
                        );
                    }
                    return Ok(ExitCode::from(1));
                }
            }
        }
    };
    let cert = certify_h_condition(&g, &ord, &h, &f)?;
    certificate_exit(&cert, &args.out)
}

fn cmd_duality(args: DualityArgs) -> Result<ExitCode> {
    #[derive(Serialize)]
    struct Report {
        trials: usize,
        size: usize,
        norm: usize,
        seed: u64,
        failures: usize,
        first_counterexample: Option<serde_json::Value>,
    }
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut failures = 0usize;
    let mut first = None;
    for _ in 0..args.trials {
        let n = rng.random_range(1..=args.size.max(1));
        let m = rng.random_range(1..=args.size.max(1));
        let rows: Vec<Vec<i64>> = (0..n)
            .map(|_| (0..m).map(|_| rng.random_range(-3..=3)).collect())
            .collect();
        let a = ExactMatrix::from_i64_rows(&rows)?;
        let total = rng.random_range(0..=args.norm);
        let mut alpha = vec![0usize; n];
        let mut beta = vec![0usize; m];
        for _ in 0..total {
            alpha[rng.random_range(0..n)] += 1;
            beta[rng.random_range(0..m)] += 1;
        }
        let dual = coeff_via_permanent(&a, &alpha, &beta)?;
        let ny = naive_coeff_y(&a, &alpha, &beta)?;
        let nx = naive_coeff_x(&a, &alpha, &beta)?;
        let bf: orientavoid_core::matrix::Int = beta.iter().map(|&k| factorial(k)).product();
        let af: orientavoid_core::matrix::Int = alpha.iter().map(|&k| factorial(k)).product();
        let ok = &ny * Rat::from_integer(bf) == dual.permanent
            && &nx * Rat::from_integer(af) == dual.permanent;
        if !ok {
            failures += 1;
            if first.is_none() {
                first = Some(serde_json::json!({
                    "matrix": rows,
                    "alpha": alpha,
                    "beta": beta,
                }));
            }
        }
    }
    let report = Report {
        trials: args.trials,
        size: args.size,
        norm: args.norm,
        seed: args.seed,
        failures,
        first_counterexample: first,
    };
    println!("{}", serde_json::to_string(&report)?);
    Ok(if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_at_number(args: AtNumberArgs) -> Result<ExitCode> {
    let g = load_graph(&args.graph)?;
    let k = at_number(&g)?;
    println!("{}", serde_json::json!({ "at_number": k }));
    Ok(ExitCode::SUCCESS)
}

fn cmd_zp_cert(args: ZpCertArgs) -> Result<ExitCode> {
    let g = load_graph(&args.graph)?;
    let text = fs::read_to_string(&args.cert)
        .with_context(|| format!("reading certificate {}", args.cert.display()))?;
    let (u, arcs) = io::zp_cert_from_json(&text)?;
    let accepted = zp_certificate(&g, args.p, &arcs, u)?;
    println!(
        "{}",
        serde_json::json!({
            "accepted": accepted,
            "p": args.p,
            "u": u,
            "arcs": arcs.len(),
            "required_arcs": (args.p as usize - 1) * (g.n() - 1),
        })
    );
    Ok(if accepted {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

#[derive(Serialize)]
struct InstanceRecord {
    instance: usize,
    n: usize,
    m: usize,
    p: f64,
    mode: &'static str,
    bound: &'static str,
    cert_valid: bool,
    oracle: &'static str,
    min_slack: i64,
    slack_hist: BTreeMap<i64, usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    attempts: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    runtime_ms: Option<u128>,
}

fn cmd_experiment(args: ExperimentArgs) -> Result<ExitCode> {
    let bound_name = match args.bound {
        BoundArg::Third => "third",
        BoundArg::TwoThirds => "two-thirds",
        BoundArg::Random => "random",
    };
    let probs: Vec<f64> = args
        .probs
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|e| anyhow!("bad --probs: {e}"))?;
    if probs.is_empty() {
        return Err(anyhow!("--probs must list at least one probability"));
    }
    let gamma = parse_rat(&args.gamma)?;
    let n_floor = match args.bound {
        BoundArg::TwoThirds => 5, // min degree 4 needs at least 5 vertices
        _ => 4,
    };
    if args.n_min < n_floor || args.n_min > args.n_max {
        return Err(anyhow!("need {n_floor} <= n-min <= n-max for this bound"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut lines = Vec::new();
    let mut cert_valid_count = 0usize;
    let mut oracle_sat = 0usize;
    let mut oracle_guard = 0usize;

    for instance in 0..args.trials {
        let t0 = Instant::now();
        let n = rng.random_range(args.n_min..=args.n_max);
        let p = probs[instance % probs.len()];
        let min_deg = match args.bound {
            BoundArg::TwoThirds => 4,
            _ => 3,
        };
        let g = Arc::new(gen::gnp_min_degree(n, p, min_deg, 26, &mut rng)?);
        let mode = if instance % 2 == 0 {
            ForbiddenMode::OutDegree
        } else {
            ForbiddenMode::Imbalance
        };
        let mode_name = match mode {
            ForbiddenMode::OutDegree => "outdeg",
            ForbiddenMode::Imbalance => "imbalance",
        };
        let mut attempts = None;
        let built: Option<(VertexOrdering, orientavoid_core::Subgraph, ForbiddenSets)> = match args
            .bound
        {
            BoundArg::Third => {
                let f =
                    random_experiment_forbidden(&g, &mut rng, mode, |v| g.degree(v) as i64 / 3 - 1);
                let (ord, h) = build_h_third(&g, &VertexOrdering::identity(n))?;
                Some((ord, h, f))
            }
            BoundArg::TwoThirds => {
                let d = gen::random_orientation_min_out(&g, 2, &mut rng)
                    .ok_or_else(|| anyhow!("no orientation with min out-degree 2"))?;
                let f = random_experiment_forbidden(&g, &mut rng, mode, |v| {
                    2 * d.out_degree(v) as i64 / 3 - 1
                });
                let (ord, h) = build_h_two_thirds(&g, &d)?;
                Some((ord, h, f))
            }
            BoundArg::Random => {
                let f = random_experiment_forbidden(&g, &mut rng, ForbiddenMode::OutDegree, |v| {
                    alpha_gamma_floor(g.degree(v), &gamma)
                });
                match build_h_random(&g, &gamma, rng.random(), args.max_attempts)? {
                    RandomOutcome::Accepted(s) => {
                        attempts = Some(s.attempt + 1);
                        Some((s.ordering, s.h, f))
                    }
                    RandomOutcome::Exhausted(fail) => {
                        attempts = Some(fail.attempts);
                        None
                    }
                }
            }
        };

        let record = match built {
            Some((ord, h, f)) => {
                let cert = certify_h_condition(&g, &ord, &h, &f)?;
                let oracle = match find_orientation(&g, &f) {
                    Ok(v) => {
                        if v.is_sat() {
                            oracle_sat += 1;
                            "sat"
                        } else {
                            "unsat"
                        }
                    }
                    Err(e) if e.is_guard() => {
                        oracle_guard += 1;
                        "guard"
                    }
                    Err(e) => return Err(e.into()),
                };
                if cert.valid {
                    cert_valid_count += 1;
                }
                let mut hist = BTreeMap::new();
                for &s in &cert.slack {
                    *hist.entry(s).or_insert(0usize) += 1;
                }
                InstanceRecord {
                    instance,
                    n,
                    m: g.m(),
                    p,
                    mode: mode_name,
                    bound: bound_name,
                    cert_valid: cert.valid,
                    oracle,
                    min_slack: cert.slack.iter().copied().min().unwrap_or(0),
                    slack_hist: hist,
                    attempts,
                    runtime_ms: args.timing.then(|| t0.elapsed().as_millis()),
                }
            }
            None => InstanceRecord {
                instance,
                n,
                m: g.m(),
                p,
                mode: mode_name,
                bound: bound_name,
                cert_valid: false,
                oracle: "skipped",
                min_slack: 0,
                slack_hist: BTreeMap::new(),
                attempts,
                runtime_ms: args.timing.then(|| t0.elapsed().as_millis()),
            },
        };
        lines.push(serde_json::to_string(&record)?);
    }

    let aggregate = serde_json::json!({
        "aggregate": true,
        "bound": bound_name,
        "trials": args.trials,
        "seed": args.seed,
        "cert_valid": cert_valid_count,
        "oracle_sat": oracle_sat,
        "oracle_guard": oracle_guard,
        "cert_valid_rate": if args.trials > 0 {
            cert_valid_count as f64 / args.trials as f64
        } else {
            0.0
        },
        "oracle_sat_rate": if args.trials > 0 {
            oracle_sat as f64 / args.trials as f64
        } else {
            0.0
        },
    });
    lines.push(serde_json::to_string(&aggregate)?);
    let mut content = lines.join("\n");
    content.push('\n');
    emit(&args.out, &content)?;
    Ok(ExitCode::SUCCESS)
}

fn random_experiment_forbidden(
    g: &Graph,
    rng: &mut ChaCha8Rng,
    mode: ForbiddenMode,
    bound: impl Fn(usize) -> i64,
) -> ForbiddenSets {
    let sets: Vec<Vec<i64>> = (0..g.n())
        .map(|v| {
            let deg = g.degree(v) as i64;
            let limit = bound(v).max(0) as usize;
            let size = rng.random_range(0..=limit);
            let domain: Vec<i64> = match mode {
                ForbiddenMode::OutDegree => (0..=deg).collect(),
                ForbiddenMode::Imbalance => (-deg..=deg).filter(|a| (a - deg) % 2 == 0).collect(),
            };
            let mut picked = Vec::new();
            while picked.len() < size {
                let cand = domain[rng.random_range(0..domain.len())];
                if !picked.contains(&cand) {
                    picked.push(cand);
                }
            }
            picked
        })
        .collect();
    ForbiddenSets::new(g, mode, sets)
        .expect("generated values are in range")
        .0
}
