mod cache;
mod record;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use nimgen_core::diagram::{DotStyle, ToDot};
use nimgen_core::lattice::LatticeConfig;
use nimgen_core::solver::{SolveOptions, DEFAULT_BRUTE_MAX};
use nimgen_core::suite::{run_suite, suite_exit_code, SUITES};
use nimgen_core::theory::{verify_family, AbelianSpec};
use nimgen_core::{Analysis, GameVariant, GroupSpec, SolveMode};

use cache::Cache;
use record::{solve_spec, solve_text, to_csv, to_text, ResultRecord};

#[derive(Parser, Debug)]
#[command(name = "nimgen", version, about = "Nim-numbers of generation games on finite groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute the nim-number of GEN(G) or DNG(G) for each spec.
    Solve {
        #[arg(required = true)]
        specs: Vec<String>,
        #[command(flatten)]
        solve: SolveArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Emit the structure digraph of GEN(G).
    Diagram {
        spec: String,
        #[arg(long, value_parser = parse_variant, default_value = "gen")]
        game: GameVariant,
        /// Merge vertices with equal type and option types.
        #[arg(long)]
        simplified: bool,
        #[arg(long, value_enum, default_value_t = Format::Dot)]
        format: Format,
        /// Only the type on each node.
        #[arg(long)]
        plain: bool,
        #[arg(long, default_value_t = nimgen_core::lattice::DEFAULT_ORDER_MAX)]
        order_max: usize,
    },
    /// Run a verification suite, or check the dihedral predictions for the given abelian groups.
    Verify {
        /// Abelian groups A (e.g. Z3xZ3); `Dih(A)` is accepted too.
        #[arg(conflicts_with = "suite")]
        specs: Vec<String>,
        #[arg(long)]
        suite: Option<String>,
        #[command(flatten)]
        solve: SolveArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Tabulate a family such as `Dih(Zn)` over a range of n, as CSV.
    Table {
        family: String,
        /// Inclusive range `a..b`.
        #[arg(long = "n", value_parser = parse_range)]
        range: (usize, usize),
        #[command(flatten)]
        solve: SolveArgs,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        cache: Option<PathBuf>,
    },
}

#[derive(Args, Debug, Clone)]
struct SolveArgs {
    #[arg(long, value_parser = parse_variant, default_value = "gen")]
    game: GameVariant,
    #[arg(long, value_parser = parse_mode, default_value = "auto")]
    mode: SolveMode,
    #[arg(long, default_value_t = DEFAULT_BRUTE_MAX)]
    brute_max: usize,
    #[arg(long, default_value_t = nimgen_core::lattice::DEFAULT_ORDER_MAX)]
    order_max: usize,
    /// Run both solvers where both apply and fail if they disagree.
    #[arg(long)]
    cross_check: bool,
}

impl SolveArgs {
    fn options(&self) -> SolveOptions {
        SolveOptions {
            brute_max: self.brute_max,
            lattice: LatticeConfig { order_max: self.order_max },
            cross_check: self.cross_check,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
    Dot,
    Text,
}

fn parse_variant(s: &str) -> Result<GameVariant, String> {
    s.parse().map_err(|e: nimgen_core::Error| e.to_string())
}

fn parse_mode(s: &str) -> Result<SolveMode, String> {
    s.parse().map_err(|e: nimgen_core::Error| e.to_string())
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("expected a..b, got {s:?}"))?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let num = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("{t:?}: {e}"));
    Ok((num(a)?, num(b)?))
}

fn require_format(command: &str, format: Format, allowed: &[Format]) -> anyhow::Result<()> {
    if !allowed.contains(&format) {
        let names: Vec<String> = allowed.iter().map(|f| format!("{f:?}").to_lowercase()).collect();
        bail!("{command} supports --format {}", names.join("|"));
    }
    Ok(())
}

/// `NIMGEN_CACHE` takes precedence over `--cache`.
fn cache_path(flag: Option<PathBuf>) -> Option<PathBuf> {
    std::env::var_os("NIMGEN_CACHE").filter(|v| !v.is_empty()).map(PathBuf::from).or(flag)
}

fn json<T: Serialize + ?Sized>(value: &T) -> anyhow::Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

/// Solves every spec in parallel, reading and then updating the cache.
/// A cached record is reused when it was produced by the requested mode (any
/// mode satisfies `auto`).
fn solve_all(specs: &[Result<GroupSpec, String>], raw: &[String], args: &SolveArgs, cache: Option<&mut Cache>) -> Vec<ResultRecord> {
    let opts = args.options();
    let cached: Vec<Option<ResultRecord>> = specs
        .iter()
        .map(|s| {
            let c = cache.as_deref()?;
            let spec = s.as_ref().ok()?;
            let hit = c.get(&spec.canonical(), args.game)?;
            (args.mode == SolveMode::Auto || hit.mode == Some(args.mode)).then(|| hit.clone())
        })
        .collect();
    let records: Vec<ResultRecord> = specs
        .par_iter()
        .zip(raw.par_iter())
        .zip(cached.into_par_iter())
        .map(|((spec, text), hit)| match (hit, spec) {
            (Some(r), _) => r,
            (None, Ok(spec)) => solve_spec(spec, args.game, args.mode, opts),
            (None, Err(_)) => solve_text(text, args.game, args.mode, opts),
        })
        .collect();
    if let Some(c) = cache {
        for r in &records {
            c.insert(r);
        }
    }
    records
}

fn render_records(records: &[ResultRecord], format: Format) -> anyhow::Result<String> {
    Ok(match format {
        Format::Json => json(records)?,
        Format::Csv => to_csv(records)?,
        _ => records.iter().map(|r| to_text(r) + "\n").collect(),
    })
}

fn exit_for(records: &[ResultRecord]) -> u8 {
    if records.iter().any(|r| r.error.is_some()) {
        2
    } else {
        0
    }
}

fn with_cache<T>(flag: Option<PathBuf>, run: impl FnOnce(Option<&mut Cache>) -> T) -> anyhow::Result<T> {
    match cache_path(flag) {
        Some(path) => {
            let mut cache = Cache::open(&path);
            let out = run(Some(&mut cache));
            cache.save()?;
            Ok(out)
        }
        None => Ok(run(None)),
    }
}

fn substitute(family: &str, n: usize) -> String {
    family.replace("Zn", &format!("Z{n}"))
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.command {
        Command::Solve { specs, solve, format, cache } => {
            require_format("solve", format, &[Format::Json, Format::Csv, Format::Text])?;
            let parsed: Vec<_> = specs.iter().map(|s| GroupSpec::parse(s).map_err(|e| e.to_string())).collect();
            let records = with_cache(cache, |c| solve_all(&parsed, &specs, &solve, c))?;
            print!("{}", render_records(&records, format)?);
            Ok(exit_for(&records))
        }
        Command::Diagram { spec, game, simplified, format, plain, order_max } => {
            require_format("diagram", format, &[Format::Dot, Format::Json])?;
            if game == GameVariant::Dng {
                bail!("structure digraphs are only defined for GEN");
            }
            let g = GroupSpec::parse(&spec)?.build()?;
            let an = Analysis::new(g, LatticeConfig { order_max })?;
            let style = if plain { DotStyle::Plain } else { DotStyle::Full };
            let out = match (simplified, format) {
                (false, Format::Dot) => an.digraph.to_dot(style),
                (false, _) => json(&an.digraph)?,
                (true, Format::Dot) => an.digraph.simplify().to_dot(style),
                (true, _) => json(&an.digraph.simplify())?,
            };
            print!("{out}");
            Ok(0)
        }
        Command::Verify { specs, suite, solve, format } => {
            require_format("verify", format, &[Format::Json, Format::Text])?;
            let opts = solve.options();
            if specs.is_empty() {
                let name = suite.as_deref().unwrap_or("all");
                let outcomes = run_suite(name, &opts).with_context(|| format!("suites: {}", SUITES.join(", ")))?;
                match format {
                    Format::Json => {
                        let rows: Vec<_> = outcomes
                            .iter()
                            .map(|o| {
                                serde_json::json!({
                                    "id": o.id,
                                    "title": o.title,
                                    "passed": o.passed,
                                    "detail": o.detail,
                                })
                            })
                            .collect();
                        print!("{}", json(&rows)?)
                    }
                    _ => outcomes.iter().for_each(|o| println!("{o}")),
                }
                return Ok(suite_exit_code(&outcomes) as u8);
            }
            let mut abelian = Vec::new();
            for s in &specs {
                let parsed = GroupSpec::parse(s)?;
                let inner = match parsed {
                    GroupSpec::Dih(a) => *a,
                    other => other,
                };
                abelian.push(AbelianSpec::from_group_spec(&inner).with_context(|| format!("{s} is not a product of cyclic groups"))?);
            }
            let report = verify_family(&abelian, solve.game, opts);
            match format {
                Format::Json => print!("{}", json(&report)?),
                _ => print!("{}", report.to_text()),
            }
            Ok(report.exit_code() as u8)
        }
        Command::Table { family, range: (lo, hi), solve, format, cache } => {
            require_format("table", format, &[Format::Csv, Format::Json])?;
            if !family.contains("Zn") {
                bail!("family {family:?} must mention Zn");
            }
            let raw: Vec<String> = (lo..=hi).map(|n| substitute(&family, n)).collect();
            let parsed: Vec<_> = raw.iter().map(|s| GroupSpec::parse(s).map_err(|e| e.to_string())).collect();
            let records = with_cache(cache, |c| solve_all(&parsed, &raw, &solve, c))?;
            print!("{}", render_records(&records, format)?);
            Ok(exit_for(&records))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
