//! Batch experiment driver: constructs codes from config descriptors, runs
//! the audits and simulations, and emits machine-readable reports.
//!
//! Exit codes: 0 success, 1 audit violation or failed run, 2 config error.

mod config;
mod report;

use std::net::{SocketAddr, TcpListener, ToSocketAddrs};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use serde::Serialize;

use starpir::algebra::Matrix;
use starpir::bounds::{
    self, rate_ledger, singleton_audit, RateLedger, Rational, SingletonAuditReport, Verdict,
};
use starpir::codes::LinearCode;
use starpir::netsim;
use starpir::pir;

use config::{ConfigError, ExperimentConfig};
use report::{emit, OutputFormat};

#[derive(Parser)]
#[command(name = "starpir", version, about = "Star-product PIR toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Path to the JSON experiment config.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Seed override.
    #[arg(long)]
    seed: Option<u64>,
    /// Enumeration budget override (max codewords walked per distance).
    #[arg(long)]
    budget: Option<u64>,
    /// Output format: json or csv.
    #[arg(long)]
    output: Option<OutputFormat>,
}

#[derive(Subcommand)]
enum Command {
    /// Audit the Singleton-type bound cases for the configured code pair.
    AuditBound(Common),
    /// Compute the rate ledger for the configured code pair.
    Rates(Common),
    /// Run the retrieval protocol end to end over the in-memory bus.
    Simulate(Common),
    /// Dually-BCH dimension/rate tables and the length q^m+1 row.
    BchTable {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        m: u32,
        /// Single t (or s) value; all valid values when omitted.
        #[arg(long)]
        t: Option<u32>,
        /// Designed distance for the length q^m+1 construction.
        #[arg(long)]
        delta: Option<u64>,
    },
    /// Parametric AG-code scheme calculator.
    AgParams {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        g: usize,
        #[arg(long)]
        deg1: usize,
        #[arg(long)]
        deg2: usize,
        #[arg(long)]
        deg3: Option<usize>,
        #[arg(long, default_value_t = 0)]
        byz: usize,
        #[arg(long, default_value_t = 0)]
        unresp: usize,
    },
    /// Code-family descriptor reference.
    Families {
        #[command(subcommand)]
        action: FamiliesAction,
    },
    /// Serve one storage column over the wire protocol.
    Serve {
        #[command(flatten)]
        common: Common,
        /// Server position in 0..n.
        #[arg(long)]
        index: usize,
        /// Listen address, e.g. 127.0.0.1:7701.
        #[arg(long)]
        listen: String,
    },
    /// Retrieve the target file from running servers.
    Retrieve {
        #[command(flatten)]
        common: Common,
        /// Comma-separated endpoints in server order; overrides the config.
        #[arg(long)]
        endpoints: Option<String>,
        /// Per-server timeout in milliseconds.
        #[arg(long, default_value_t = 2000)]
        timeout_ms: u64,
    },
}

#[derive(Subcommand)]
enum FamiliesAction {
    /// Print the descriptor schema of every family.
    List,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(2)
        }
    }
}

fn load(common: &Common) -> Result<(ExperimentConfig, OutputFormat), ConfigError> {
    let mut cfg = match &common.config {
        Some(path) => ExperimentConfig::from_path(path)?,
        None => serde_json::from_str("{}").map_err(|e| ConfigError(e.to_string()))?,
    };
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    if let Some(budget) = common.budget {
        cfg.budget = budget;
    }
    let format = common
        .output
        .or_else(|| {
            cfg.output
                .as_deref()
                .and_then(|s| s.parse::<OutputFormat>().ok())
        })
        .unwrap_or(OutputFormat::Json);
    Ok((cfg, format))
}

fn run(cli: Cli) -> Result<ExitCode, Box<dyn std::error::Error>> {
    match cli.command {
        Command::AuditBound(common) => {
            let (cfg, format) = load(&common)?;
            let c = cfg.storage_code()?;
            let d = cfg.retrieval_code()?;
            let report = singleton_audit(&c, &d, cfg.budget)?;
            let wrapped = AuditReport { overall: report.overall(), report };
            print!("{}", emit(&wrapped, format));
            Ok(if wrapped.overall == Verdict::Violated {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            })
        }
        Command::Rates(common) => {
            let (cfg, format) = load(&common)?;
            let c = cfg.storage_code()?;
            let d = cfg.retrieval_code()?;
            let ledger = rate_ledger(&c, &d, cfg.budget, cfg.transitive)?;
            let row = RatesReport::from_ledger(&ledger);
            print!("{}", emit(&row, format));
            Ok(ExitCode::SUCCESS)
        }
        Command::Simulate(common) => {
            let (cfg, format) = load(&common)?;
            let report = simulate(&cfg)?;
            let ok = report.results.iter().all(|r| r.success);
            print!("{}", emit(&report, format));
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::BchTable { common, q, m, t, delta } => {
            let (_, format) = load(&common)?;
            if let Some(delta) = delta {
                let row = bounds::bch_plus_one_row(q, m, delta)?;
                print!("{}", emit(&row, format));
            } else {
                let rows: Vec<bounds::BchRateRow> = match t {
                    Some(t) => vec![bounds::bch_rate_row(q, m, t)?],
                    None => (2..m)
                        .map(|t| bounds::bch_rate_row(q, m, t))
                        .collect::<Result<_, _>>()?,
                };
                print!("{}", emit(&rows, format));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::AgParams { common, n, g, deg1, deg2, deg3, byz, unresp } => {
            let (_, format) = load(&common)?;
            let robust = deg3.map(|d3| (d3, byz, unresp));
            let report = bounds::ag_params(n, g, deg1, deg2, robust)?;
            print!("{}", emit(&report, format));
            Ok(ExitCode::SUCCESS)
        }
        Command::Families { action: FamiliesAction::List } => {
            print!("{}", emit(&families_listing(), OutputFormat::Json));
            Ok(ExitCode::SUCCESS)
        }
        Command::Serve { common, index, listen } => {
            let (cfg, _) = load(&common)?;
            let system = build_system(&cfg)?;
            if index >= system.server_count() {
                return Err(Box::new(ConfigError(format!(
                    "server index {index} out of range 0..{}",
                    system.server_count()
                ))));
            }
            let column = system.server_column(index);
            let field = system.code().field().clone();
            let listener = TcpListener::bind(&listen)?;
            println!("serving column {index} on {}", listener.local_addr()?);
            let state = netsim::ServerState::new(field, Some(column));
            netsim::serve(listener, state)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Retrieve { common, endpoints, timeout_ms } => {
            let (cfg, format) = load(&common)?;
            let report = retrieve(&cfg, endpoints.as_deref(), timeout_ms)?;
            let ok = report.success;
            print!("{}", emit(&report, format));
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}

#[derive(Serialize)]
struct AuditReport {
    overall: Verdict,
    report: SingletonAuditReport,
}

/// Headline numbers of a ledger row with the full ledger attached. Rates
/// print as unreduced `numerator/n` fractions.
#[derive(Serialize)]
struct RatesReport {
    n: usize,
    t: i128,
    t_exact: bool,
    /// Transitive retrieval rate `dim((C*D)^perp) / n`.
    rate: String,
    basic_rate: String,
    basic_rate_exact: bool,
    r_storage: String,
    zero_retrieval_rate: bool,
    ledger: RateLedger,
}

impl RatesReport {
    fn from_ledger(ledger: &RateLedger) -> Self {
        RatesReport {
            n: ledger.n,
            t: ledger.t_count.0,
            t_exact: ledger.t_exact,
            rate: format!("{}/{}", ledger.dim_star_perp, ledger.n),
            basic_rate: format!(
                "{}/{}",
                ledger.star_distance.lo().saturating_sub(1),
                ledger.n
            ),
            basic_rate_exact: ledger.r_retrieval_basic.exact,
            r_storage: format!("{}/{}", ledger.storage_dim, ledger.n),
            zero_retrieval_rate: ledger.zero_retrieval_rate,
            ledger: ledger.clone(),
        }
    }
}

#[derive(Serialize)]
struct SimulateResult {
    target: usize,
    rounds: usize,
    achieved_rate: Rational,
    success: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    export: Option<netsim::SessionExport>,
}

#[derive(Serialize)]
struct SimulateReport {
    n: usize,
    file_count: usize,
    rows_per_file: usize,
    k: usize,
    seed: u64,
    byzantine_positions: Vec<usize>,
    unresponsive_positions: Vec<usize>,
    /// Structural collusion audit when the config declares `t > 0`.
    #[serde(skip_serializing_if = "Option::is_none")]
    privacy: Option<pir::StructuralPrivacyReport>,
    results: Vec<SimulateResult>,
}

fn deterministic_files(
    cfg: &ExperimentConfig,
    code: &LinearCode,
) -> Result<Vec<Matrix>, ConfigError> {
    let field = code.field().clone();
    let k = code.dim();
    let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(cfg.seed ^ 0x66696c65); // "file"
    let files = (0..cfg.files.m)
        .map(|_| {
            let rows: Vec<Vec<u64>> = (0..cfg.files.b)
                .map(|_| (0..k).map(|_| rng.next_u64() % field.q()).collect())
                .collect();
            Matrix::from_rows(field.clone(), rows)
        })
        .collect::<Result<_, _>>()
        .map_err(|e| ConfigError(e.to_string()))?;
    Ok(files)
}

fn build_system(cfg: &ExperimentConfig) -> Result<pir::StorageSystem, Box<dyn std::error::Error>> {
    let storage = cfg.storage_code()?;
    let files = deterministic_files(cfg, &storage)?;
    Ok(pir::StorageSystem::encode(storage, files)?)
}

fn plan_options(cfg: &ExperimentConfig) -> pir::PlanOptions {
    pir::PlanOptions {
        seed: cfg.seed,
        byzantine: cfg
            .adversary
            .byzantine
            .max(cfg.adversary.byzantine_positions.len()),
        unresponsive: cfg
            .adversary
            .unresponsive
            .max(cfg.adversary.unresponsive_positions.len()),
        enumeration_budget: cfg.budget,
        sampler: pir::PadSampler::Uniform,
    }
}

fn simulate(cfg: &ExperimentConfig) -> Result<SimulateReport, Box<dyn std::error::Error>> {
    let system = build_system(cfg)?;
    let retrieval = cfg.retrieval_code()?;
    let options = plan_options(cfg);
    let field_q = system.code().field().q();

    let targets: Vec<usize> = match cfg.target {
        Some(w) => vec![w],
        None => (0..system.file_count()).collect(),
    };
    let mut results = Vec::new();
    for &w in &targets {
        let session = pir::plan_retrieval(&system, w, &retrieval, &options)?;
        let mut adversary = netsim::BusAdversary::new();
        for &p in &cfg.adversary.byzantine_positions {
            adversary = adversary.mutate(p, Box::new(move |_, _, v| (v + 1) % field_q));
        }
        for &p in &cfg.adversary.unresponsive_positions {
            adversary = adversary.drop_server(p);
        }
        let run = netsim::bus_run(&system, &session, &adversary)?;
        let got = pir::decode_session(&session, &run.responses);
        let success = matches!(&got, Ok(file) if file == system.file(w));
        let export = cfg
            .export_session
            .then(|| netsim::SessionExport::new(&session, &run));
        results.push(SimulateResult {
            target: w,
            rounds: session.round_count(),
            achieved_rate: session.achieved_rate(),
            success,
            export,
        });
    }
    let privacy = (cfg.adversary.t > 0)
        .then(|| pir::privacy_audit_structural(&retrieval, cfg.adversary.t, cfg.seed));
    Ok(SimulateReport {
        n: system.server_count(),
        file_count: system.file_count(),
        rows_per_file: system.rows_per_file(),
        k: system.code().dim(),
        seed: cfg.seed,
        byzantine_positions: cfg.adversary.byzantine_positions.clone(),
        unresponsive_positions: cfg.adversary.unresponsive_positions.clone(),
        privacy,
        results,
    })
}

#[derive(Serialize)]
struct RetrieveReport {
    target: usize,
    rounds: usize,
    achieved_rate: Rational,
    missing_servers: Vec<usize>,
    file: Vec<Vec<u64>>,
    success: bool,
}

fn retrieve(
    cfg: &ExperimentConfig,
    endpoints_flag: Option<&str>,
    timeout_ms: u64,
) -> Result<RetrieveReport, Box<dyn std::error::Error>> {
    let system = build_system(cfg)?;
    let retrieval = cfg.retrieval_code()?;
    let options = plan_options(cfg);
    let w = cfg.target.unwrap_or(0);
    let session = pir::plan_retrieval(&system, w, &retrieval, &options)?;

    let endpoint_strings: Vec<String> = match endpoints_flag {
        Some(s) => s.split(',').map(|x| x.trim().to_string()).collect(),
        None => cfg.endpoints.clone(),
    };
    let mut endpoints: Vec<SocketAddr> = Vec::new();
    for e in &endpoint_strings {
        let addr = e
            .to_socket_addrs()
            .map_err(|err| ConfigError(format!("endpoint {e}: {err}")))?
            .next()
            .ok_or_else(|| ConfigError(format!("endpoint {e} resolves to nothing")))?;
        endpoints.push(addr);
    }

    let field = system.code().field().clone();
    let (file, responses) = netsim::client_retrieve(
        &endpoints,
        &session,
        &field,
        Duration::from_millis(timeout_ms),
    )?;
    let missing: Vec<usize> = (0..session.server_count())
        .filter(|&j| responses.iter().any(|round| round[j].is_none()))
        .collect();
    let success = &file == system.file(w);
    Ok(RetrieveReport {
        target: w,
        rounds: session.round_count(),
        achieved_rate: session.achieved_rate(),
        missing_servers: missing,
        file: (0..file.rows()).map(|r| file.row(r).to_vec()).collect(),
        success,
    })
}

#[derive(Serialize)]
struct FamilyDoc {
    family: &'static str,
    params: &'static [&'static str],
    notes: &'static str,
}

fn families_listing() -> Vec<FamilyDoc> {
    vec![
        FamilyDoc {
            family: "grs",
            params: &["field", "n", "k", "evals?", "mults?"],
            notes: "generalized Reed-Solomon; evals default to 0..n, mults to 1",
        },
        FamilyDoc {
            family: "rm",
            params: &["m", "r"],
            notes: "binary Reed-Muller RM(m, r) of length 2^m",
        },
        FamilyDoc {
            family: "cyclic",
            params: &["field", "n", "generator"],
            notes: "cyclic code from a generator polynomial dividing x^n - 1",
        },
        FamilyDoc {
            family: "bch",
            params: &["field", "n", "delta"],
            notes: "narrow-sense BCH of any length coprime to q",
        },
        FamilyDoc {
            family: "elliptic",
            params: &["field", "a1..a6", "m", "points?"],
            notes: "functional code L(m*O) on a Weierstrass curve",
        },
        FamilyDoc {
            family: "repetition",
            params: &["field", "n"],
            notes: "[n, 1, n] replicated storage",
        },
    ]
}
