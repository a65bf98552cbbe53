//! Command-line front end: argument parsing, dispatch, report rendering
//! and exit codes.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{fmt_ratio, parse_ratio, ratio_to_f64};
use crate::blocks::{verify_bound, BoundReport, CyclicTowerTable};
use crate::catalog;
use crate::error::{Error, Result};
use crate::group::{GroupSpec, PermGroup, DEFAULT_ENUMERATION_CAP};
use crate::report::{csv_string, document, write_atomic, Document, Format};
use crate::stability::{
    chebotarev_compare, density_scan, ScanOptions, SequenceSpec, StabilityReport, Strategy, DEFAULT_WORK_CAP,
};
use crate::wreath::{full_wreath_pi, iterated_wreath_with_cap, subkernel_check, DEFAULT_AMBIENT_CAP};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "cyclelab", version, about = "Full-cycle proportions, wreath products and stable primes")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Write the report to PATH instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "json-doc")]
    pub format: Format,
    /// Worker threads; defaults to one per core.
    #[arg(long, global = true, value_name = "W", value_parser = clap::value_parser!(u64).range(1..=1024))]
    pub workers: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count full cycles of a group and check every maximal chain's bound.
    Census {
        /// Catalog name (e.g. S4, AGL1(7), C3wrC2) or a group-spec JSON file.
        group: String,
        #[arg(long, value_name = "LIMIT", default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
        chains: u64,
        /// Largest group order enumerated element by element.
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP as u64, value_parser = clap::value_parser!(u64).range(1..))]
        cap: u64,
    },
    /// Bundled groups.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Iterated wreath product of PARTS (top action first), or with
    /// `--subkernels R` the subkernel check for one bottom group and R blocks.
    Wreath {
        #[arg(required = true)]
        parts: Vec<String>,
        #[arg(long, value_name = "R", value_parser = clap::value_parser!(u64).range(2..))]
        subkernels: Option<u64>,
        /// Random subkernels tried by the subkernel check.
        #[arg(long, default_value_t = 16, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long, value_name = "S", default_value_t = 0)]
        seed: u64,
        /// Largest wreath degree built.
        #[arg(long, default_value_t = DEFAULT_AMBIENT_CAP as u64, value_parser = clap::value_parser!(u64).range(1..=1024))]
        ambient_cap: u64,
    },
    /// Stable depth of every prime up to X for a sequence spec (a JSON
    /// file, or inline JSON starting with `{`).
    Scan {
        sequence: String,
        #[arg(long, value_name = "X", value_parser = clap::value_parser!(u64).range(100..))]
        primes: u64,
        #[arg(long, value_name = "N", value_parser = clap::value_parser!(u64).range(1..=4096))]
        depth: u64,
        #[arg(long, value_enum, default_value = "auto")]
        strategy: Strategy,
        /// Also write per-prime records as CSV.
        #[arg(long, value_name = "PATH")]
        records: Option<PathBuf>,
        /// Largest accepted depth times prime count.
        #[arg(long, default_value_t = DEFAULT_WORK_CAP, value_parser = clap::value_parser!(u64).range(1..))]
        work_cap: u64,
    },
    /// Score a scan report against candidate proportions, one per depth.
    Compare {
        /// Scan report written with `--format json-doc`.
        report: PathBuf,
        /// Comma- or space-separated rationals, or `@FILE`.
        #[arg(long)]
        candidates: String,
    },
    /// Largest order of a transitive tower of cyclic groups of degree n.
    Cmax {
        #[arg(long, default_value_t = 32, value_parser = clap::value_parser!(u64).range(1..=4096))]
        max: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum CatalogAction {
    List,
    /// Group-spec JSON for one group; accepted back by `census`.
    Export { name: String },
    /// Census and bound check for every bundled group up to an order.
    Sweep {
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP as u64, value_parser = clap::value_parser!(u64).range(1..))]
        max_order: u64,
        #[arg(long, value_name = "LIMIT", default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
        chains: u64,
    },
}

/// Finished command: rendered report and whether a checked property failed.
struct Outcome {
    text: String,
    violation: bool,
    extra: Vec<(PathBuf, String)>,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::ResourceCap(_) | Error::Size(_) | Error::TooLargeToEnumerate { .. } | Error::NotEnumerated(_) => {
            EXIT_RESOURCE
        }
        _ => EXIT_USAGE,
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(&cfg) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn check_out_path(p: &Path) -> Result<()> {
    let dir = p.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    if !dir.is_dir() {
        return Err(Error::Parse(format!("output directory {} does not exist", dir.display())));
    }
    if p.is_dir() {
        return Err(Error::Parse(format!("output path {} is a directory", p.display())));
    }
    Ok(())
}

fn execute(cfg: &RunConfig) -> Result<i32> {
    if let Some(p) = &cfg.common.out {
        check_out_path(p)?;
    }
    if let Command::Scan { records: Some(p), .. } = &cfg.command {
        check_out_path(p)?;
    }
    let outcome = match cfg.common.workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w as usize)
            .build()
            .map_err(|e| Error::ResourceCap(format!("cannot start {w} workers: {e}")))?
            .install(|| dispatch(cfg))?,
        None => dispatch(cfg)?,
    };
    match &cfg.common.out {
        Some(p) => write_atomic(p, &outcome.text)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(outcome.text.as_bytes())?;
            out.flush()?;
        }
    }
    for (p, text) in &outcome.extra {
        write_atomic(p, text)?;
    }
    Ok(if outcome.violation { EXIT_VIOLATION } else { EXIT_OK })
}

fn render<B: Serialize, R: Serialize>(format: Format, kind: &str, body: B, rows: &[R]) -> Result<String> {
    match format {
        Format::JsonDoc => document(kind, body)?.to_json(),
        Format::Csv => csv_string(rows),
    }
}

fn dispatch(cfg: &RunConfig) -> Result<Outcome> {
    let format = cfg.common.format;
    let plain = |text: String, violation: bool| Outcome { text, violation, extra: Vec::new() };
    match &cfg.command {
        Command::Census { group, chains, cap } => {
            let g = load_group(group, *cap as usize)?;
            let rep = verify_bound(group, &g, *chains as usize)?;
            warn_truncated(&rep);
            let rows = census_rows(&rep);
            let violation = rep.violated;
            Ok(plain(render(format, "census", &rep, &rows)?, violation))
        }
        Command::Catalog { action } => match action {
            CatalogAction::List => {
                let entries = catalog::catalog();
                Ok(plain(render(format, "catalog", &entries, &entries)?, false))
            }
            CatalogAction::Export { name } => {
                if format == Format::Csv {
                    return Err(Error::Parse("export writes group-spec JSON only".into()));
                }
                let spec = catalog::load(name)?.to_spec(name);
                Ok(plain(serde_json::to_string_pretty(&spec)? + "\n", false))
            }
            CatalogAction::Sweep { max_order, chains } => {
                let names = catalog::names_up_to_order(*max_order);
                let reports = names
                    .par_iter()
                    .map(|n| verify_bound(n, &catalog::load(n)?, *chains as usize))
                    .collect::<Result<Vec<_>>>()?;
                reports.iter().for_each(warn_truncated);
                let rows: Vec<SweepRow> = reports.iter().map(SweepRow::from).collect();
                let violation = reports.iter().any(|r| r.violated);
                Ok(plain(render(format, "catalog-sweep", &reports, &rows)?, violation))
            }
        },
        Command::Wreath {
            parts,
            subkernels,
            trials,
            seed,
            ambient_cap,
        } => {
            if let Some(r) = subkernels {
                let [bottom] = parts.as_slice() else {
                    return Err(Error::Parse("the subkernel check takes exactly one bottom group".into()));
                };
                let h = catalog::load(bottom)?;
                let rep = subkernel_check(bottom, &h, *r as usize, *trials as usize, *seed)?;
                let violation = !rep.all_ok;
                return Ok(plain(render(format, "subkernel-check", &rep, &rep.rows)?, violation));
            }
            let groups = parts.iter().map(|p| catalog::load(p)).collect::<Result<Vec<_>>>()?;
            let w = iterated_wreath_with_cap(&groups, *ambient_cap as usize)?;
            let formula = full_wreath_pi(&groups)?;
            let census = if w.is_enumerated() {
                Some(w.full_cycle_census()?.proportion)
            } else {
                None
            };
            let rep = WreathReport {
                parts: parts.clone(),
                degree: w.degree(),
                order: w.order().to_string(),
                formula_proportion: fmt_ratio(&formula),
                formula_decimal: ratio_to_f64(&formula),
                census_proportion: census.as_ref().map(fmt_ratio),
                agrees: census.as_ref().map(|c| c == &formula),
            };
            let violation = rep.agrees == Some(false);
            let rows = [WreathRow::from(&rep)];
            Ok(plain(render(format, "wreath", &rep, &rows)?, violation))
        }
        Command::Scan {
            sequence,
            primes,
            depth,
            strategy,
            records,
            work_cap,
        } => {
            let text = if sequence.trim_start().starts_with('{') {
                sequence.clone()
            } else {
                std::fs::read_to_string(sequence)?
            };
            let seq = SequenceSpec::from_json(&text)?.build()?;
            let opts = ScanOptions {
                workers: 0,
                strategy: *strategy,
                work_cap: *work_cap,
            };
            let rep = density_scan(&seq, *primes, *depth as usize, opts)?;
            let extra = match records {
                Some(p) => vec![(p.clone(), rep.records_csv()?)],
                None => Vec::new(),
            };
            Ok(Outcome {
                text: render(format, "stability-scan", &rep, &rep.survival)?,
                violation: false,
                extra,
            })
        }
        Command::Compare { report, candidates } => {
            let cands = parse_candidates(candidates)?;
            let doc: Document<StabilityReport> = serde_json::from_str(&std::fs::read_to_string(report)?)?;
            let cmp = chebotarev_compare(&doc.body, &cands)?;
            let violation = cmp.any_flagged;
            Ok(plain(render(format, "comparison", &cmp, &cmp.rows)?, violation))
        }
        Command::Cmax { max } => {
            let table = CyclicTowerTable::build(*max)?;
            let violation = !table.all_within_bound();
            Ok(plain(render(format, "cmax", &table, &table.rows)?, violation))
        }
    }
}

/// A catalog name, or a path to a group-spec JSON file.
fn load_group(arg: &str, cap: usize) -> Result<PermGroup> {
    let path = Path::new(arg);
    if arg.ends_with(".json") || path.is_file() {
        return GroupSpec::from_json(&std::fs::read_to_string(path)?)?.build(cap);
    }
    catalog::load(arg)
}

fn parse_candidates(arg: &str) -> Result<Vec<BigRational>> {
    let text = match arg.strip_prefix('@') {
        Some(p) => std::fs::read_to_string(p)?,
        None => arg.to_string(),
    };
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(parse_ratio)
        .collect()
}

fn warn_truncated(rep: &BoundReport) {
    if rep.chains_truncated {
        eprintln!("warning: chain enumeration for {} stopped at {} chains", rep.group, rep.chains.len());
    }
}

#[derive(Serialize)]
struct CensusRow {
    group: String,
    degree: usize,
    order: String,
    proportion: String,
    chain: usize,
    step_degrees: String,
    d: usize,
    bound: String,
    holds: bool,
}

fn census_rows(rep: &BoundReport) -> Vec<CensusRow> {
    let proportion = rep.proportion();
    rep.chains
        .iter()
        .enumerate()
        .map(|(i, c)| CensusRow {
            group: rep.group.clone(),
            degree: rep.degree,
            order: rep.order.clone(),
            proportion: rep.proportion.clone(),
            chain: i + 1,
            step_degrees: c.step_degrees.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("x"),
            d: c.d,
            bound: c.bound.clone(),
            holds: parse_ratio(&c.bound).is_ok_and(|b| proportion <= b),
        })
        .collect()
}

#[derive(Serialize)]
struct SweepRow {
    group: String,
    degree: usize,
    order: String,
    full_cycles: String,
    proportion: String,
    proportion_decimal: f64,
    chains: usize,
    min_d: Option<usize>,
    max_d: Option<usize>,
    tightest_bound: Option<String>,
    violated: bool,
}

impl From<&BoundReport> for SweepRow {
    fn from(r: &BoundReport) -> Self {
        let tightest = r.chains.iter().filter_map(|c| parse_ratio(&c.bound).ok()).min();
        SweepRow {
            group: r.group.clone(),
            degree: r.degree,
            order: r.order.clone(),
            full_cycles: r.full_cycle_count.clone(),
            proportion: r.proportion.clone(),
            proportion_decimal: r.proportion_decimal,
            chains: r.chains.len(),
            min_d: r.min_d,
            max_d: r.max_d,
            tightest_bound: tightest.as_ref().map(fmt_ratio),
            violated: r.violated,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct WreathReport {
    pub parts: Vec<String>,
    pub degree: usize,
    pub order: String,
    /// Product of the parts' full-cycle proportions.
    pub formula_proportion: String,
    pub formula_decimal: f64,
    /// Direct count, when the product was small enough to enumerate.
    pub census_proportion: Option<String>,
    pub agrees: Option<bool>,
}

#[derive(Serialize)]
struct WreathRow {
    parts: String,
    degree: usize,
    order: String,
    formula_proportion: String,
    formula_decimal: f64,
    census_proportion: Option<String>,
    agrees: Option<bool>,
}

impl From<&WreathReport> for WreathRow {
    fn from(r: &WreathReport) -> Self {
        WreathRow {
            parts: r.parts.join(" "),
            degree: r.degree,
            order: r.order.clone(),
            formula_proportion: r.formula_proportion.clone(),
            formula_decimal: r.formula_decimal,
            census_proportion: r.census_proportion.clone(),
            agrees: r.agrees,
        }
    }
}
