//! `cicpc`: classify channels, check structural conditions and trace rate
//! region frontiers from the command line.

mod output;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use cicpc::bounds::Theorem;
use cicpc::channel::{classify, load_channel, ChannelLaw, DEFAULT_CLASSIFY_TOL};
use cicpc::conditions::{check_high_gain, check_more_capable, ConditionVerdict};
use cicpc::distributions::AuxCardinalities;
use cicpc::region::{compute_frontier, SearchConfig};
use cicpc::Error;

use output::{frontier_csv, Manifest};

const THREADS_ENV: &str = "CICPC_THREADS";

#[derive(Parser)]
#[command(name = "cicpc", version, about = "Rate regions of cognitive interference channels with partially cooperating destinations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report whether a channel is semideterministic and/or degraded.
    Classify {
        channel: PathBuf,
        /// Tolerance of both classifiers.
        #[arg(long, default_value_t = DEFAULT_CLASSIFY_TOL)]
        tol: f64,
        /// Write the report here (plus a manifest sidecar) instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Trace the Pareto frontier of a region and write it as CSV.
    Frontier {
        channel: PathBuf,
        #[arg(long, value_enum)]
        theorem: TheoremArg,
        #[command(flatten)]
        search: SearchArgs,
        /// Number of weights in [0, 1], endpoints included.
        #[arg(long = "mu-grid", default_value_t = SearchConfig::default().mu_grid_size)]
        mu_grid: usize,
        /// Auxiliary cardinalities as u,v,t.
        #[arg(long = "aux-cards", value_parser = parse_aux)]
        aux_cards: Option<AuxCardinalities>,
        /// Replace the frontier by its upper concave envelope.
        #[arg(long)]
        hull: bool,
        /// CSV destination; the manifest goes to `<out>.manifest.json`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for a distribution violating a channel condition.
    Check {
        channel: PathBuf,
        #[arg(long, value_enum)]
        condition: ConditionArg,
        #[command(flatten)]
        search: SearchArgs,
        /// Cardinality of the auxiliary V.
        #[arg(long = "card-v")]
        card_v: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(clap::Args)]
struct SearchArgs {
    #[arg(long, default_value_t = SearchConfig::default().restarts)]
    restarts: usize,
    #[arg(long = "local-steps", default_value_t = SearchConfig::default().local_steps)]
    local_steps: usize,
    #[arg(long, default_value_t = SearchConfig::default().seed)]
    seed: u64,
}

impl SearchArgs {
    fn config(&self) -> SearchConfig {
        SearchConfig {
            restarts: self.restarts,
            local_steps: self.local_steps,
            seed: self.seed,
            ..SearchConfig::default()
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum TheoremArg {
    T1,
    T2,
    T3,
    T4,
}

impl From<TheoremArg> for Theorem {
    fn from(t: TheoremArg) -> Self {
        match t {
            TheoremArg::T1 => Theorem::T1,
            TheoremArg::T2 => Theorem::T2,
            TheoremArg::T3 => Theorem::T3,
            TheoremArg::T4 => Theorem::T4,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ConditionArg {
    MoreCapable,
    HighGain,
}

fn parse_aux(s: &str) -> Result<AuxCardinalities, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [u, v, t] = parts.as_slice() else {
        return Err(format!("expected u,v,t, got {s:?}"));
    };
    let card = |x: &str| x.parse::<usize>().map_err(|e| format!("{x:?}: {e}"));
    AuxCardinalities::new(card(u)?, card(v)?, card(t)?).map_err(|e| e.to_string())
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Json(_) | Error::Io(_) | Error::DimensionMismatch { .. } | Error::Config(_) => 2,
            e if e.is_class_mismatch() => 4,
            _ => 3,
        };
        Self { code, message: e.to_string() }
    }
}

fn load(path: &Path) -> Result<(ChannelLaw, Vec<u8>), Failure> {
    let bytes = fs::read(path).map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
    let law = load_channel(path).map_err(|e| {
        let mut f = Failure::from(e);
        f.message = format!("{}: {}", path.display(), f.message);
        f
    })?;
    Ok((law, bytes))
}

fn emit(body: &str, out: Option<&Path>, manifest: Manifest) -> Result<(), Failure> {
    match out {
        Some(path) => {
            let write = |p: &Path, text: &str| {
                fs::write(p, text).map_err(|e| Failure::usage(format!("cannot write {}: {e}", p.display())))
            };
            write(path, body)?;
            write(&output::sidecar(path), &manifest.to_json())
        }
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn json_body<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents are plain data");
    s.push('\n');
    s
}

fn class_mismatch(theorem: Theorem, e: Error) -> Failure {
    let mut f = Failure::from(e);
    if f.code == 4 {
        let needs = match theorem {
            Theorem::T3 => "a degraded channel",
            _ => "a semideterministic channel",
        };
        f.message = format!("theorem {theorem} needs {needs}: {}", f.message);
    }
    f
}

fn verdict_doc(v: &ConditionVerdict, cfg: &SearchConfig) -> serde_json::Value {
    json!({
        "status": v.status,
        "margin_bits": v.margin,
        "witness_seed": v.witness_seed,
        "witness": v.witness,
        "budget": {
            "restarts": v.restarts,
            "local_steps": cfg.local_steps,
            "seed": cfg.seed,
            "card_v": v.card_v,
            "samples_used": v.samples_used,
        },
    })
}

fn run(cli: Cli, argv: Vec<String>) -> Result<(), Failure> {
    let start = Instant::now();
    match cli.command {
        Command::Classify { channel, tol, out } => {
            let (law, bytes) = load(&channel)?;
            let report = classify(&law, tol);
            let doc = json!({
                "semideterministic": report.semideterministic,
                "degraded": report.degraded,
                "max_deviation": report.max_deviation,
                "y1_map": report.y1_map,
                "degrading_kernel": report.extracted_degrading_kernel,
            });
            let body = json_body(&doc);
            let manifest = Manifest::new("classify", argv, &channel, &bytes, json!({ "tol": tol }), &body, start);
            emit(&body, out.as_deref(), manifest)
        }
        Command::Frontier {
            channel,
            theorem,
            search,
            mu_grid,
            aux_cards,
            hull,
            out,
        } => {
            let (law, bytes) = load(&channel)?;
            let theorem = Theorem::from(theorem);
            let cfg = SearchConfig {
                mu_grid_size: mu_grid,
                aux: aux_cards,
                hull,
                ..search.config()
            };
            let frontier = compute_frontier(&law, theorem, &cfg).map_err(|e| class_mismatch(theorem, e))?;
            let body = frontier_csv(&frontier);
            let resolved = SearchConfig {
                aux: frontier.aux,
                ..cfg
            };
            let config = json!({ "theorem": theorem, "search": resolved });
            let manifest = Manifest::new("frontier", argv, &channel, &bytes, config, &body, start);
            emit(&body, out.as_deref(), manifest)
        }
        Command::Check {
            channel,
            condition,
            search,
            card_v,
            out,
        } => {
            let (law, bytes) = load(&channel)?;
            let mut cfg = search.config();
            if let Some(v) = card_v {
                cfg.aux = Some(AuxCardinalities::new(1, v, 1)?);
            }
            let doc = match condition {
                ConditionArg::MoreCapable => {
                    let v = check_more_capable(&law, &cfg)?;
                    let mut doc = verdict_doc(&v, &cfg);
                    doc["condition"] = json!("more-capable");
                    doc
                }
                ConditionArg::HighGain => {
                    let (x2, v) = check_high_gain(&law, &cfg)?;
                    let (dx2, dv) = (verdict_doc(&x2, &cfg), verdict_doc(&v, &cfg));
                    // The condition holds only if both gaps are nonnegative.
                    let worst = if x2.margin <= v.margin { &dx2 } else { &dv };
                    json!({
                        "condition": "high-gain",
                        "status": worst["status"],
                        "margin_bits": worst["margin_bits"],
                        "witness": worst["witness"],
                        "budget": worst["budget"],
                        "verdicts": [
                            { "term": "x2", "verdict": dx2 },
                            { "term": "v", "verdict": dv },
                        ],
                    })
                }
            };
            let body = json_body(&doc);
            let manifest = Manifest::new("check", argv, &channel, &bytes, json!({ "search": cfg }), &body, start);
            emit(&body, out.as_deref(), manifest)
        }
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::usage(format!("{THREADS_ENV} must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::usage(format!("cannot size the thread pool: {e}")))
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    match configure_threads().and_then(|()| run(cli, argv)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("cicpc: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
