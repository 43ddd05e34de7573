use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use umbilic::config::{RunConfig, UsageError};
use umbilic::json;
use umbilic::record::{AnalyzeReport, ModuliRecord, ModuliReport, PointRecord, VerifySummary};
use umbilic::verify;
use umbilic_core::analysis::Tolerances;
use umbilic_core::catalog::{self, Params};
use umbilic_core::congruence::moduli_demo;
use umbilic_core::JetOrder;

#[derive(Parser)]
#[command(name = "umbilic", version, about = "Checks totally umbilical immersions into pseudo-Riemannian space forms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(clap::Args)]
struct Common {
    /// Base tolerance T: zero = T, pass = 10T, finite differences = 1000T.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, default_value_t = 16)]
    samples: usize,
    #[arg(long, env = "UMBILIC_SEED", default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u8).range(2..=3))]
    order: u8,
    /// Also write the JSON report to PATH.
    #[arg(long, value_name = "PATH")]
    json: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
}

impl Common {
    fn config(&self) -> Result<RunConfig, UsageError> {
        let mut config = RunConfig { samples: self.samples, seed: self.seed, ..RunConfig::default() };
        if let Some(t) = self.tol {
            config.tol = Tolerances::scaled(t).map_err(|e| UsageError(e.to_string()))?;
        }
        config.order = JetOrder::from_int(self.order).ok_or_else(|| UsageError("--order must be 2 or 3".into()))?;
        config.validate()?;
        Ok(config)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check every catalog entry at its defaults and random parameter draws.
    VerifyAll {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 3)]
        draws: usize,
    },
    /// Report the geometry of one catalog entry.
    Analyze {
        #[arg(long)]
        family: String,
        /// Parameter override, repeatable.
        #[arg(long = "param", value_name = "K=V", value_parser = parse_param)]
        params: Vec<(String, f64)>,
        /// Chart point, comma separated.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        point: Option<Vec<f64>>,
        #[command(flatten)]
        common: Common,
    },
    /// Congruence classes and distances along the family x -> (a, x, a).
    Moduli {
        #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
        a: Vec<f64>,
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        s: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Catalog commands.
    Catalog {
        #[command(subcommand)]
        command: CatalogCommand,
    },
}

#[derive(Subcommand)]
enum CatalogCommand {
    /// List family ids, parameters and maps.
    List,
}

fn parse_param(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected K=V, got `{s}`"))?;
    let v: f64 = v.trim().parse().map_err(|e| format!("bad value for {k}: {e}"))?;
    Ok((k.trim().to_string(), v))
}

enum Failure {
    Usage(String),
    Run(String),
}

impl From<UsageError> for Failure {
    fn from(e: UsageError) -> Self {
        Failure::Usage(e.0)
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String, Failure> {
    json::to_string(value).map_err(|e| Failure::Run(e.to_string()))
}

fn write_json<T: Serialize>(path: Option<&Path>, value: &T) -> Result<(), Failure> {
    if let Some(path) = path {
        fs::write(path, to_json(value)? + "\n")
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn fmt_params(p: &Params) -> String {
    p.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(",")
}

fn print_verify(summary: &VerifySummary) {
    for r in &summary.records {
        let status = if r.passed() { "pass" } else { "FAIL" };
        let noted = if r.discrepancies().next().is_some() { " (discrepancy noted)" } else { "" };
        println!("{status:4}  {:<12} {:<32} {}{noted}", r.family, fmt_params(&r.params), r.ambient);
        for c in r.failures() {
            println!("        {}: expected {}, computed {}", c.field, c.expected, c.computed);
        }
    }
    println!(
        "{} records: {} passed, {} failed, {} with discrepancy notes",
        summary.total, summary.passed, summary.failed, summary.discrepancies_noted
    );
}

fn fmt_opt<T: std::fmt::Display>(v: Option<T>) -> String {
    v.map_or_else(|| "-".to_string(), |x| x.to_string())
}

fn print_point(p: &PointRecord) {
    let u: Vec<String> = p.u.iter().map(|x| format!("{x:.6}")).collect();
    println!(
        "u=({})  sig={:?}  radical={}  H_norm={}  umb={} geo={} min={} mt={} par={}  res_umb={:.3e}",
        u.join(", "),
        p.signature,
        p.radical_rank,
        p.h_norm.map_or_else(|| "-".to_string(), |h| format!("{h:.6}")),
        p.flags.umbilical,
        p.flags.geodesic,
        p.flags.minimal,
        fmt_opt(p.flags.marginally_trapped),
        fmt_opt(p.flags.parallel),
        p.residuals.umbilicity,
    );
    if let Some(h) = &p.h_rel {
        let h: Vec<String> = h.iter().map(|x| format!("{x:.6}")).collect();
        println!("    H_rel=({})", h.join(", "));
    }
}

fn print_analyze(r: &AnalyzeReport) {
    println!("{} [{}] in {}", r.family, fmt_params(&r.params), r.ambient);
    r.points.iter().for_each(print_point);
    if let Some(red) = &r.reduction {
        println!(
            "hull_dim={}  direction_signature={:?}  translation_class={}  rho={}",
            red.hull_dim,
            red.direction_signature,
            red.translation_class,
            red.rho.map_or_else(|| "-".to_string(), |x| format!("{x:.6}"))
        );
    }
    println!("full={}", fmt_opt(r.full));
    for n in &r.notes {
        println!("note: {n}");
    }
}

fn run(cli: Cli) -> Result<bool, Failure> {
    match cli.command {
        Command::VerifyAll { common, draws } => {
            let config = RunConfig { draws, ..common.config()? };
            let summary = verify::verify_all(&config);
            write_json(common.json.as_deref(), &summary)?;
            match common.format {
                Format::Table => print_verify(&summary),
                Format::Json => println!("{}", to_json(&summary)?),
            }
            Ok(summary.failed == 0)
        }
        Command::Analyze { family, params, point, common } => {
            let config = common.config()?;
            let spec = catalog::find(&family).map_err(|e| Failure::Usage(e.to_string()))?;
            let params: Params = params.into_iter().collect::<BTreeMap<_, _>>();
            let report = verify::analyze(spec, &params, point.as_deref(), &config)
                .map_err(|e| Failure::Run(e.to_string()))?;
            write_json(common.json.as_deref(), &report)?;
            match common.format {
                Format::Table => print_analyze(&report),
                Format::Json => println!("{}", to_json(&report)?),
            }
            Ok(true)
        }
        Command::Moduli { a, m, s, common } => {
            let config = common.config()?;
            let demo = moduli_demo(&a, m, s, config.samples, config.seed, &config.tol)
                .map_err(|e| Failure::Run(e.to_string()))?;
            let report = ModuliReport {
                m,
                s,
                rows: demo
                    .rows
                    .iter()
                    .map(|r| ModuliRecord { a: r.a, class: r.class.label().to_string(), distance: r.distance })
                    .collect(),
                pairwise_congruent: demo.pairwise.clone(),
                demonstrated: demo.demonstrated(),
            };
            write_json(common.json.as_deref(), &report)?;
            match common.format {
                Format::Table => {
                    println!("{:>12}  class  {:>14}", "a", "sup distance");
                    for r in &report.rows {
                        println!("{:>12.6}  {:^5}  {:>14.6}", r.a, r.class, r.distance);
                    }
                    if report.demonstrated {
                        println!("closure(u) \u{220b} g: demonstrated");
                    } else {
                        println!("closure(u) \u{220b} g: not demonstrated by these values");
                    }
                }
                Format::Json => println!("{}", to_json(&report)?),
            }
            Ok(true)
        }
        Command::Catalog { command: CatalogCommand::List } => {
            for f in catalog::families() {
                let params: Vec<String> = f.params.iter().map(|p| format!("{} in {}", p.name, p.domain())).collect();
                println!("{:<12} {:<20} {}", f.id, format!("{:?}", f.group), f.display);
                if !params.is_empty() {
                    println!("{:<12} params: {}", "", params.join("; "));
                }
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Run(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
