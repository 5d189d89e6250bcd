//! Command-line driver for the exact variational-principle toolkit.
//!
//! Subcommands: `validate` audits an instance file; `solve` runs a
//! certified solver (weak Ekeland, quantitative Ekeland, Takahashi,
//! Caristi); `lab` cross-checks the principle equivalences against
//! brute-force oracles, on one file or a generated corpus; `gen` prints a
//! seeded random instance file; `witness` builds the truncated descent
//! chain and reports why no endpoint exists on it.
//!
//! Exit codes: 0 when the requested result is certified; 1 when the run
//! finishes but the mathematical hypothesis fails (audit failure, violated
//! Ekeland gate, infeasible Caristi map, violated Takahashi hypothesis),
//! which is a legitimate finding; 2 for unusable input or arguments.

mod mapfile;
mod render;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use quasivar::gen::{gen_instance, gen_instance_file, GenParams, PreorderKind};
use quasivar::io::{self, CompiledInstance};
use quasivar::oracle;
use quasivar::principles::{
    self, Certificate, Strengthened, T1Caristi, T1Ekeland, T1Takahashi, TakahashiVariant,
};
use quasivar::report::{Format, Report};
use quasivar::witness;
use quasivar::{Instance, PointId, Rat, SolveError};

#[derive(Parser)]
#[command(
    name = "quasivar",
    version,
    about = "Exact certified solvers for variational principles on finite preordered quasi-metric spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Report output format.
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    /// Indented name: value lines.
    Text,
    /// Flat dotted path=value lines.
    Machine,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Text => Format::Text,
            FormatArg::Machine => Format::Machine,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Parse and compile an instance file, reporting its audits.
    Validate { file: PathBuf },
    /// Run a certified solver on an instance file.
    #[command(subcommand)]
    Solve(SolveCommand),
    /// Cross-check the principle equivalences with brute-force oracles.
    #[command(subcommand)]
    Lab(LabCommand),
    /// Generate a seeded random instance file on standard output.
    Gen(GenArgs),
    /// Build the truncated descent chain and report its mechanism.
    Witness {
        /// Number of chain points (at least 2).
        #[arg(long = "N")]
        n: usize,
    },
}

#[derive(Subcommand)]
enum SolveCommand {
    /// Weak Ekeland endpoint with a full certificate.
    Wek {
        file: PathBuf,
        /// Start point (label or index); defaults to the first domain point.
        #[arg(long)]
        start: Option<String>,
    },
    /// Quantitative Ekeland bound for given eps and lambda.
    Ekeland {
        file: PathBuf,
        /// Slack above the infimum allowed at the start (positive rational).
        #[arg(long)]
        eps: Rat,
        /// Radius within which the endpoint must stay (positive rational).
        #[arg(long)]
        lambda: Rat,
        /// Start point (label or index); defaults to the first domain point.
        #[arg(long)]
        start: Option<String>,
    },
    /// Takahashi minimization criterion.
    Takahashi { file: PathBuf },
    /// Caristi fixed point for the map in a map file.
    Caristi {
        file: PathBuf,
        /// Map file: `map single <n>` or `map multi <n>` plus one line per point.
        #[arg(long)]
        map: PathBuf,
    },
}

#[derive(Subcommand)]
enum LabCommand {
    /// Equivalence report for one instance file.
    Equivalence { file: PathBuf },
    /// Equivalence reports over a generated corpus, cycling preorder kinds.
    Corpus {
        /// Points per generated instance.
        #[arg(long)]
        n: usize,
        /// Number of instances.
        #[arg(long)]
        count: usize,
        /// Base seed; instance i uses seed + i.
        #[arg(long)]
        seed: u64,
    },
}

#[derive(Args)]
struct GenArgs {
    /// Point count.
    #[arg(long)]
    n: usize,
    #[arg(long)]
    seed: u64,
    /// Chance per eligible edge of a zero weight, as an exact rational.
    #[arg(long, default_value = "1/4")]
    zero_edge_prob: Rat,
    /// Chance per point of an infinite potential draw, as an exact rational.
    #[arg(long, default_value = "1/8")]
    inf_phi_prob: Rat,
    #[arg(long, value_enum, default_value_t = KindArg::Total)]
    preorder: KindArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Total,
    Pairs,
    Reachability,
    SpecializationConjugate,
}

impl From<KindArg> for PreorderKind {
    fn from(k: KindArg) -> PreorderKind {
        match k {
            KindArg::Total => PreorderKind::Total,
            KindArg::Pairs => PreorderKind::Pairs,
            KindArg::Reachability => PreorderKind::Reachability,
            KindArg::SpecializationConjugate => PreorderKind::SpecializationConjugate,
        }
    }
}

/// A finished run: what to print and whether it is a certification (0) or
/// a mathematical finding (1). Unusable input never reaches this type.
struct Success {
    output: String,
    code: u8,
}

impl Success {
    fn certified(r: Report, format: Format) -> Success {
        Success { output: r.render(format), code: 0 }
    }

    fn finding(r: Report, format: Format) -> Success {
        Success { output: r.render(format), code: 1 }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format: Format = cli.format.into();
    match run(cli.command, format) {
        Ok(s) => {
            print!("{}", s.output);
            ExitCode::from(s.code)
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cmd: Command, format: Format) -> Result<Success, String> {
    match cmd {
        Command::Validate { file } => {
            let c = load(&file)?;
            let report = render::validate_report(&c);
            Ok(if c.instance().audits().all() {
                Success::certified(report, format)
            } else {
                Success::finding(report, format)
            })
        }
        Command::Solve(cmd) => run_solve(cmd, format),
        Command::Lab(cmd) => run_lab(cmd, format),
        Command::Gen(args) => {
            let params = GenParams {
                n: args.n,
                seed: args.seed,
                zero_edge_prob: args.zero_edge_prob,
                inf_phi_prob: args.inf_phi_prob,
                preorder_kind: args.preorder.into(),
            };
            let file = gen_instance_file(&params).map_err(|e| e.to_string())?;
            Ok(Success { output: io::serialize(&file), code: 0 })
        }
        Command::Witness { n } => {
            let w = witness::build_witness(n).map_err(|e| e.to_string())?;
            let rep = witness::witness_noncompleteness_report(&w).map_err(|e| e.to_string())?;
            Ok(Success::certified(render::witness_report(&w, &rep), format))
        }
    }
}

fn run_solve(cmd: SolveCommand, format: Format) -> Result<Success, String> {
    match cmd {
        SolveCommand::Wek { file, start } => {
            let c = load(&file)?;
            let x0 = resolve_start(&c, start.as_deref())?;
            match principles::weak_ekeland(c.instance(), x0) {
                Ok(cert) => {
                    let t1 = strengthen_ekeland(
                        c.instance(),
                        Certificate::WeakEkeland(cert.clone()),
                    )?;
                    Ok(Success::certified(
                        render::wek_report(&c, &cert, t1.as_ref()),
                        format,
                    ))
                }
                Err(e) => finding_or_error(e, format, c.labels()),
            }
        }
        SolveCommand::Ekeland { file, eps, lambda, start } => {
            let c = load(&file)?;
            let x0 = match resolve_start(&c, start.as_deref())? {
                Some(x) => x,
                None => c
                    .instance()
                    .dom()
                    .first()
                    .ok_or("instance has an empty domain; no start point exists")?,
            };
            match principles::full_ekeland(c.instance(), &eps, &lambda, x0) {
                Ok(cert) => {
                    let t1 = strengthen_ekeland(
                        c.instance(),
                        Certificate::FullEkeland(cert.clone()),
                    )?;
                    Ok(Success::certified(
                        render::ekeland_report(&c, &cert, t1.as_ref()),
                        format,
                    ))
                }
                Err(e) => finding_or_error(e, format, c.labels()),
            }
        }
        SolveCommand::Takahashi { file } => {
            let c = load(&file)?;
            match principles::takahashi(c.instance(), TakahashiVariant::StrictPhi) {
                Ok(rep) => {
                    let t1 = strengthen_takahashi(c.instance(), &rep)?;
                    let report = render::takahashi_report(&c, &rep, t1.as_ref());
                    Ok(if rep.hypothesis_ok {
                        Success::certified(report, format)
                    } else {
                        Success::finding(report, format)
                    })
                }
                Err(e) => finding_or_error(e, format, c.labels()),
            }
        }
        SolveCommand::Caristi { file, map } => {
            let c = load(&file)?;
            let text = read(&map)?;
            let parsed = mapfile::parse_map(&text, &c)?;
            let result = match &parsed {
                mapfile::MapFile::Single(t) => principles::caristi_single(c.instance(), t),
                mapfile::MapFile::Multi(t) => principles::caristi_multi(c.instance(), t),
            };
            match result {
                Ok(res) => {
                    let t1 = strengthen_caristi(c.instance(), &res)?;
                    Ok(Success::certified(
                        render::caristi_report(&c, &res, t1.as_ref()),
                        format,
                    ))
                }
                Err(e) => finding_or_error(e, format, c.labels()),
            }
        }
    }
}

fn run_lab(cmd: LabCommand, format: Format) -> Result<Success, String> {
    match cmd {
        LabCommand::Equivalence { file } => {
            let c = load(&file)?;
            let rep = oracle::check_equivalences(c.instance()).map_err(|e| e.to_string())?;
            Ok(Success::certified(
                render::equivalence_report(c.labels(), &rep),
                format,
            ))
        }
        LabCommand::Corpus { n, count, seed } => {
            const KINDS: [PreorderKind; 4] = [
                PreorderKind::Total,
                PreorderKind::Pairs,
                PreorderKind::Reachability,
                PreorderKind::SpecializationConjugate,
            ];
            let labels = render::default_labels(n);
            let mut entries = Vec::with_capacity(count);
            for i in 0..count {
                let run_seed = seed.wrapping_add(i as u64);
                let params = GenParams {
                    preorder_kind: KINDS[i % KINDS.len()],
                    ..GenParams::new(n, run_seed)
                };
                let inst = gen_instance(&params).map_err(|e| e.to_string())?;
                let rep = oracle::check_equivalences(&inst).map_err(|e| {
                    format!("seed {run_seed}: {e}")
                })?;
                entries.push((run_seed, params.preorder_kind, rep));
            }
            let wek_count = entries.iter().filter(|(_, _, r)| r.wek_holds).count();
            let mut report = Report::new();
            report.section("params", |s| {
                s.value("n", n);
                s.value("count", count);
                s.value("seed", seed);
            });
            report.section("runs", |s| {
                for (run_seed, kind, rep) in &entries {
                    s.section(format!("seed-{run_seed}"), |run| {
                        run.value("preorder", render::kind_name(*kind));
                        render::fill_equivalence(run, &labels, rep);
                    });
                }
            });
            report.section("summary", |s| {
                s.value("instances", count);
                s.value("wek_holds", wek_count);
                s.value("tak_negation", count - wek_count);
                s.value("all_consistent", true);
            });
            Ok(Success::certified(report, format))
        }
    }
}

fn read(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn load(path: &Path) -> Result<CompiledInstance, String> {
    let text = read(path)?;
    let file = io::parse(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    io::compile(&file).map_err(|e| format!("{}: {e}", path.display()))
}

fn resolve_start(c: &CompiledInstance, name: Option<&str>) -> Result<Option<PointId>, String> {
    match name {
        None => Ok(None),
        Some(n) => c
            .resolve(n)
            .map(Some)
            .ok_or_else(|| format!("unknown start point `{n}`")),
    }
}

/// Findings are expected negative results and exit 1 with a report on
/// standard output; everything else is an input or internal error.
fn is_finding(e: &SolveError) -> bool {
    matches!(
        e,
        SolveError::AuditNotSatisfied { .. }
            | SolveError::StartOutsideDomain { .. }
            | SolveError::HypothesisViolated { .. }
            | SolveError::InfeasibleMap { .. }
            | SolveError::NotT1 { .. }
    )
}

fn finding_or_error(e: SolveError, format: Format, labels: &[String]) -> Result<Success, String> {
    if is_finding(&e) {
        let mut r = Report::new();
        r.value("finding", &e);
        match &e {
            SolveError::InfeasibleMap { witness } => r.value("at", &labels[witness.0]),
            SolveError::StartOutsideDomain { x } => r.value("at", &labels[x.0]),
            SolveError::NotT1 { x, y } => {
                r.value("at", format!("{}, {}", labels[x.0], labels[y.0]))
            }
            _ => {}
        }
        Ok(Success::finding(r, format))
    } else {
        Err(e.to_string())
    }
}

fn strengthen_ekeland(inst: &Instance, cert: Certificate) -> Result<Option<T1Ekeland>, String> {
    if !inst.space().is_t1() {
        return Ok(None);
    }
    match principles::t1_strengthen(inst, &cert).map_err(|e| e.to_string())? {
        Strengthened::WeakEkeland(t) | Strengthened::FullEkeland(t) => Ok(Some(t)),
        _ => Err("strengthening returned a mismatched certificate kind".to_string()),
    }
}

fn strengthen_takahashi(
    inst: &Instance,
    rep: &principles::TakahashiReport,
) -> Result<Option<T1Takahashi>, String> {
    if !inst.space().is_t1() {
        return Ok(None);
    }
    match principles::t1_strengthen(inst, &Certificate::Takahashi(rep.clone()))
        .map_err(|e| e.to_string())?
    {
        Strengthened::Takahashi(t) => Ok(Some(t)),
        _ => Err("strengthening returned a mismatched certificate kind".to_string()),
    }
}

fn strengthen_caristi(
    inst: &Instance,
    res: &principles::CaristiResult,
) -> Result<Option<T1Caristi>, String> {
    if !inst.space().is_t1() {
        return Ok(None);
    }
    match principles::t1_strengthen(inst, &Certificate::Caristi(res.clone()))
        .map_err(|e| e.to_string())?
    {
        Strengthened::Caristi(t) => Ok(Some(t)),
        _ => Err("strengthening returned a mismatched certificate kind".to_string()),
    }
}
