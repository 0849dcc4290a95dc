//! `matchkit` — command-line harness for the matching toolkit.
//!
//! Subcommands: `gen` (instance generation), `twopass` (streaming
//! pipeline), `dynamic` (update replay with size estimation), `verify`
//! (certificate reconstruction and checking), `bench` (config-driven
//! experiment suites). Streams are line-oriented text: a `n <count>`
//! header, then `+ u v`, `- u v`, or `q` per line. `MATCHKIT_SEED` sets
//! the default seed when `--seed` is absent.

mod config;
mod gen;

use clap::{Parser, Subcommand, ValueEnum};
use config::{BenchConfig, Mode};
use gen::GenSpec;
use matchkit_core::estimator::{run_fully_dynamic, EstimatorConfig, StepRecord};
use matchkit_core::exact::maximum_matching;
use matchkit_core::numeric::Epsilon;
use matchkit_core::twopass::{run_two_pass, StreamParams, TwoPassOutput};
use matchkit_core::verify::{
    build_fractional, check_blossom, check_claims, check_value_caps, split_optimum,
    BlossomReport, WeightRule,
};
use matchkit_core::{Edge, UpdateStream};
use serde::Serialize;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(
    name = "matchkit",
    about = "Streaming, dynamic, and exact matching pipelines with certificate checking",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum DumpFormat {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate an update stream from a family spec (see --spec help)
    Gen {
        /// Family spec, e.g. path:4, erdos_renyi:100:0.05,
        /// random_bipartiteish:100:0.1:0.4, triangle_chain:8, gadget:6,
        /// update_mix:300:0.03:10000:0.3
        #[arg(long)]
        spec: String,
        #[arg(long)]
        seed: Option<u64>,
        /// Output path (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the two-pass streaming pipeline over an insert-only stream
    Twopass {
        /// Stream file, "-" for stdin, or gen:SPEC to generate inline
        #[arg(long)]
        input: String,
        #[arg(long, default_value = "0.1")]
        epsilon: String,
        /// Override the per-vertex storage capacity derived from epsilon
        #[arg(long)]
        k: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        /// Also compute the exact maximum matching and the ratio to it
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Replay updates, maintaining a maximal matching and estimating size
    Dynamic {
        /// Stream file, "-" for stdin, or gen:SPEC to generate inline
        #[arg(long)]
        input: String,
        #[arg(long, default_value = "0.25")]
        epsilon: String,
        /// Override the capacity parameter derived from epsilon
        #[arg(long)]
        k: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        /// Recompute the estimate every this many updates
        #[arg(long)]
        requery: Option<usize>,
        /// Exploration budget per estimate
        #[arg(long)]
        budget: Option<u64>,
        /// Also compute the exact maximum matching size at every event
        #[arg(long)]
        oracle: bool,
        #[arg(long, value_enum, default_value_t = DumpFormat::Csv)]
        format: DumpFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rebuild the fractional certificate for a streaming run and check it
    Verify {
        /// Stream file, "-" for stdin, or gen:SPEC to generate inline
        #[arg(long)]
        input: String,
        #[arg(long, default_value = "0.1")]
        epsilon: String,
        /// Override the per-vertex storage capacity derived from epsilon
        #[arg(long)]
        k: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        /// Report path (stdout when omitted)
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Run an experiment suite described by a config file
    Bench {
        #[arg(long)]
        config: PathBuf,
    },
}

fn main() -> ExitCode {
    match dispatch(Cli::parse().cmd) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(cmd: Cmd) -> Result<ExitCode, String> {
    match cmd {
        Cmd::Gen { spec, seed, out } => {
            let spec: GenSpec = spec.parse().map_err(|e| format!("{e}"))?;
            let stream = spec.generate(resolve_seed(seed)?);
            write_out(&out, &stream.render())?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Twopass { input, epsilon, k, seed, oracle, out } => {
            let seed = resolve_seed(seed)?;
            let stream = load_stream(&input, seed)?;
            let params = stream_params(&epsilon, k)?;
            let run = run_two_pass(&stream, &params).map_err(|e| format!("{e}"))?;
            let report = twopass_report(&stream, &params, &run, oracle);
            write_out(&out, &to_json(&report)?)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Dynamic { input, epsilon, k, seed, requery, budget, oracle, format, out } => {
            let seed = resolve_seed(seed)?;
            let stream = load_stream(&input, seed)?;
            let eps = parse_epsilon(&epsilon)?;
            let mut cfg = EstimatorConfig::new(eps, seed);
            if let Some(k) = k {
                cfg = cfg.with_k(k);
            }
            if let Some(b) = budget {
                cfg = cfg.with_budget(b);
            }
            if let Some(r) = requery {
                cfg = cfg.with_requery_interval(r);
            }
            let records = run_fully_dynamic(&stream, &cfg, oracle);
            let text = match format {
                DumpFormat::Csv => dynamic_csv(&records, oracle),
                DumpFormat::Json => to_json(&records)?,
            };
            write_out(&out, &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Verify { input, epsilon, k, seed, report } => {
            let seed = resolve_seed(seed)?;
            let stream = load_stream(&input, seed)?;
            let params = stream_params(&epsilon, k)?;
            let rep = verify_stream(&stream, &params)?;
            write_out(&report, &to_json(&rep)?)?;
            if rep.clean {
                Ok(ExitCode::SUCCESS)
            } else {
                eprintln!("verification found violations");
                Ok(ExitCode::from(2))
            }
        }
        Cmd::Bench { config } => {
            let text = std::fs::read_to_string(&config)
                .map_err(|e| format!("{}: {e}", config.display()))?;
            let cfg = config::parse(&text).map_err(|e| format!("{e}"))?;
            run_bench(&cfg)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn resolve_seed(flag: Option<u64>) -> Result<u64, String> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var("MATCHKIT_SEED") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| format!("MATCHKIT_SEED is not a valid seed: {v}")),
        Err(_) => Ok(0),
    }
}

fn parse_epsilon(s: &str) -> Result<Epsilon, String> {
    Epsilon::parse(s).map_err(|e| format!("--epsilon {s}: {e}"))
}

fn stream_params(epsilon: &str, k: Option<u64>) -> Result<StreamParams, String> {
    let eps = parse_epsilon(epsilon)?;
    Ok(match k {
        Some(k) => StreamParams::with_k(eps, k),
        None => StreamParams::new(eps),
    })
}

fn load_stream(input: &str, seed: u64) -> Result<UpdateStream, String> {
    if let Some(spec) = input.strip_prefix("gen:") {
        let spec: GenSpec = spec.parse().map_err(|e| format!("{e}"))?;
        return Ok(spec.generate(seed));
    }
    let text = if input == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| format!("stdin: {e}"))?;
        buf
    } else {
        std::fs::read_to_string(input).map_err(|e| format!("{input}: {e}"))?
    };
    UpdateStream::parse(&text).map_err(|e| format!("{input}: {e}"))
}

fn write_out(path: &Option<PathBuf>, content: &str) -> Result<(), String> {
    let content = if content.ends_with('\n') {
        content.to_string()
    } else {
        format!("{content}\n")
    };
    match path {
        Some(p) => std::fs::write(p, content).map_err(|e| format!("{}: {e}", p.display())),
        None => {
            use std::io::Write;
            match std::io::stdout().write_all(content.as_bytes()) {
                Ok(()) => Ok(()),
                // Downstream consumers like `head` close the pipe early;
                // that is not an error worth reporting.
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {
                    std::process::exit(0)
                }
                Err(e) => Err(format!("stdout: {e}")),
            }
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String, String> {
    serde_json::to_string_pretty(value).map_err(|e| format!("serialization: {e}"))
}

#[derive(Serialize)]
struct TwopassReport {
    n: usize,
    events: usize,
    epsilon: f64,
    k: u64,
    kb_ceil: u64,
    pass1_size: usize,
    stored_edges: usize,
    size: usize,
    matching: Vec<Edge>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mu_exact: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ratio: Option<f64>,
}

fn twopass_report(
    stream: &UpdateStream,
    params: &StreamParams,
    run: &TwoPassOutput,
    oracle: bool,
) -> TwopassReport {
    let mu_exact = oracle.then(|| maximum_matching(&stream.final_graph()).size);
    let ratio = mu_exact
        .filter(|&mu| mu > 0)
        .map(|mu| run.size as f64 / mu as f64);
    TwopassReport {
        n: stream.n,
        events: stream.events.len(),
        epsilon: params.epsilon.to_f64(),
        k: params.k,
        kb_ceil: params.kb_ceil,
        pass1_size: run.pass1.len(),
        stored_edges: run.stored_edges(),
        size: run.size,
        matching: run.final_matching.edges(),
        mu_exact,
        ratio,
    }
}

fn dynamic_csv(records: &[StepRecord], with_exact: bool) -> String {
    let mut out = String::from(
        "event_index,kind,mu_tilde,matched_samples,r,explored_edges,budget_exhausted,fresh",
    );
    if with_exact {
        out.push_str(",mu_exact");
    }
    out.push('\n');
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}",
            r.event_index,
            r.kind.as_str(),
            r.mu_tilde,
            r.matched_samples,
            r.r,
            r.explored_edges,
            r.budget_exhausted,
            r.fresh
        ));
        if with_exact {
            out.push(',');
            if let Some(mu) = r.mu_exact {
                out.push_str(&mu.to_string());
            }
        }
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
struct ClaimRow {
    label: &'static str,
    holds: bool,
    lhs: f64,
    rhs: f64,
    slack: f64,
}

#[derive(Serialize)]
struct VerifyReport {
    n: usize,
    size: usize,
    mu_exact: usize,
    epsilon: f64,
    k: u64,
    kb_ceil: u64,
    feasible: bool,
    claims: Vec<ClaimRow>,
    caps_ok: bool,
    cap_issues: Vec<String>,
    blossom: BlossomReport,
    clean: bool,
}

fn verify_stream(stream: &UpdateStream, params: &StreamParams) -> Result<VerifyReport, String> {
    let run = run_two_pass(stream, params).map_err(|e| format!("{e}"))?;
    let g = stream.final_graph();
    let split = split_optimum(&g, &run.pass1).map_err(|e| format!("{e}"))?;
    let x = build_fractional(&run.pass1, &run.pass2, &split, params, WeightRule::UnitPerEdge)
        .map_err(|e| format!("{e}"))?;
    let feasible = x.validate().is_ok();
    let claims = check_claims(&x, &run.pass1, &run.pass2, &split, params);
    let caps = check_value_caps(
        &x,
        &run.pass1,
        &run.pass2,
        &split,
        params,
        WeightRule::UnitPerEdge,
    );
    let blossom = check_blossom(&x, params.epsilon, None);
    let clean = feasible && claims.all_hold() && caps.ok() && blossom.clean();
    Ok(VerifyReport {
        n: stream.n,
        size: run.size,
        mu_exact: split.mu(),
        epsilon: params.epsilon.to_f64(),
        k: params.k,
        kb_ceil: params.kb_ceil,
        feasible,
        claims: claims
            .checks
            .iter()
            .map(|c| ClaimRow {
                label: c.label,
                holds: c.holds,
                lhs: c.lhs,
                rhs: c.rhs,
                slack: c.lhs - c.rhs,
            })
            .collect(),
        caps_ok: caps.ok(),
        cap_issues: caps.issues,
        blossom,
        clean,
    })
}

#[derive(Serialize)]
struct BenchRecord {
    spec: String,
    seed: u64,
    n: usize,
    events: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mu_tilde: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mu_exact: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    verified: Option<bool>,
    explored_edges: u64,
    elapsed_ms: u128,
}

fn opt_cell<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(|x| x.to_string()).unwrap_or_default()
}

fn bench_csv(records: &[BenchRecord]) -> String {
    let mut out =
        String::from("spec,seed,n,events,size,mu_tilde,mu_exact,ratio,verified,explored_edges,elapsed_ms\n");
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            r.spec,
            r.seed,
            r.n,
            r.events,
            opt_cell(&r.size),
            opt_cell(&r.mu_tilde),
            opt_cell(&r.mu_exact),
            opt_cell(&r.ratio),
            opt_cell(&r.verified),
            r.explored_edges,
            r.elapsed_ms
        ));
    }
    out
}

fn run_bench(cfg: &BenchConfig) -> Result<(), String> {
    let eps = parse_epsilon(&cfg.epsilon)?;
    let mut records = Vec::new();
    for (spec_str, spec) in &cfg.gens {
        for seed in cfg.seeds.clone() {
            let stream = spec.generate(seed);
            let started = Instant::now();
            let mut record = BenchRecord {
                spec: spec_str.clone(),
                seed,
                n: stream.n,
                events: stream.events.len(),
                size: None,
                mu_tilde: None,
                mu_exact: None,
                ratio: None,
                verified: None,
                explored_edges: 0,
                elapsed_ms: 0,
            };
            let params = match cfg.k {
                Some(k) => StreamParams::with_k(eps, k),
                None => StreamParams::new(eps),
            };
            match cfg.mode {
                Mode::Twopass => {
                    let run = run_two_pass(&stream, &params).map_err(|e| format!("{e}"))?;
                    record.size = Some(run.size);
                    if cfg.oracle {
                        record.mu_exact = Some(maximum_matching(&stream.final_graph()).size);
                    }
                }
                Mode::Verify => {
                    let rep = verify_stream(&stream, &params)?;
                    record.size = Some(rep.size);
                    record.mu_exact = Some(rep.mu_exact);
                    record.verified = Some(rep.clean);
                }
                Mode::Dynamic => {
                    let mut est_cfg = EstimatorConfig::new(eps, seed);
                    if let Some(k) = cfg.k {
                        est_cfg = est_cfg.with_k(k);
                    }
                    if let Some(b) = cfg.budget {
                        est_cfg = est_cfg.with_budget(b);
                    }
                    if let Some(r) = cfg.requery {
                        est_cfg = est_cfg.with_requery_interval(r);
                    }
                    let rows = run_fully_dynamic(&stream, &est_cfg, false);
                    record.mu_tilde = rows.last().map(|r| r.mu_tilde);
                    record.explored_edges =
                        rows.iter().filter(|r| r.fresh).map(|r| r.explored_edges).sum();
                    if cfg.oracle {
                        record.mu_exact = Some(maximum_matching(&stream.final_graph()).size);
                    }
                }
            }
            let reference = record.mu_exact.filter(|&mu| mu > 0).map(|mu| mu as f64);
            let output = record
                .size
                .map(|s| s as f64)
                .or(record.mu_tilde);
            record.ratio = match (output, reference) {
                (Some(o), Some(mu)) => Some(o / mu),
                _ => None,
            };
            record.elapsed_ms = started.elapsed().as_millis();
            records.push(record);
        }
    }

    // Per-spec ratio summary on stdout.
    for (spec_str, _) in &cfg.gens {
        let ratios: Vec<f64> = records
            .iter()
            .filter(|r| &r.spec == spec_str)
            .filter_map(|r| r.ratio)
            .collect();
        if ratios.is_empty() {
            println!("{spec_str}: {} runs", cfg.seeds.end - cfg.seeds.start);
        } else {
            let min = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
            let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
            println!(
                "{spec_str}: {} runs, ratio min {min:.4} mean {mean:.4}",
                ratios.len()
            );
        }
    }
    if let Some(path) = &cfg.out_csv {
        std::fs::write(path, bench_csv(&records)).map_err(|e| format!("{path}: {e}"))?;
    }
    if let Some(path) = &cfg.out_json {
        std::fs::write(path, to_json(&records)? + "\n").map_err(|e| format!("{path}: {e}"))?;
    }
    Ok(())
}
