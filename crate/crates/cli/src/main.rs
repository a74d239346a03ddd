use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use tc_core::arnold::{build_presentation, AlgebraElement, ArnoldAlgebra, Edge, Presentation};
use tc_core::bounds::{assemble_report, BoundsError, BoundsReport, ReportStatus};
use tc_core::export::{export_algebra, load_algebra, AlgebraDocument, CacheError};
use tc_core::field::{FieldSpec, PrimeField, Rationals};
use tc_core::selftest::{run_selftest, SelftestConfig};
use tc_core::zero_divisors::{
    bar_product_witness, bar_span_dims, zero_divisor_power_dims, Caps, PowerStrategy, SearchError,
};

const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_UNPINCHED: u8 = 3;
const EXIT_CONTRADICTION: u8 = 4;
const EXIT_CAP: u8 = 5;

#[derive(Parser)]
#[command(name = "tccert", version, about = "Certified bounds for TC(F(R^m, n))")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Output {
    Text,
    Json,
}

#[derive(Args, Clone)]
struct Common {
    /// Coefficient field: `q` or `zp:P` for a prime P.
    #[arg(long, default_value = "q")]
    field: FieldSpec,
    #[arg(long, default_value_t = Caps::default().max_n)]
    max_n: u32,
    #[arg(long, default_value_t = Caps::default().max_m)]
    max_m: u32,
    /// Cap on the top degree of X × X.
    #[arg(long, default_value_t = Caps::default().max_degree)]
    max_degree: u32,
    #[arg(long, value_enum, default_value = "text")]
    output: Output,
    /// Structure-constant cache file. Defaults to a file under $TC_CACHE_DIR.
    #[arg(long)]
    cache_path: Option<PathBuf>,
}

impl Common {
    fn caps(&self) -> Caps {
        Caps {
            max_n: self.max_n,
            max_m: self.max_m,
            max_degree: self.max_degree,
        }
    }
}

#[derive(Args, Clone, Copy)]
struct Cell {
    #[arg(long)]
    m: i64,
    #[arg(long)]
    n: i64,
}

#[derive(Subcommand)]
enum Command {
    /// Bounds report for one configuration space.
    Report {
        #[command(flatten)]
        cell: Cell,
        #[command(flatten)]
        common: Common,
    },
    /// Reports over ranges such as `--m 2..5 --n 2..3` (inclusive).
    Grid {
        #[arg(long, value_parser = parse_range)]
        m: (u32, u32),
        #[arg(long, value_parser = parse_range)]
        n: (u32, u32),
        /// Worker threads; defaults to the available parallelism.
        #[arg(long)]
        jobs: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Admissible basis, by weight.
    Basis {
        #[command(flatten)]
        cell: Cell,
        /// Only this weight.
        #[arg(long)]
        weight: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Normal form of a product of words like `e1_2*e1_3`.
    Multiply {
        #[command(flatten)]
        cell: Cell,
        #[arg(required = true)]
        words: Vec<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Zero-divisor cup-length and the dimensions of the ideal powers.
    Zcl {
        #[command(flatten)]
        cell: Cell,
        #[command(flatten)]
        common: Common,
    },
    /// Span dimensions of products of generator bars.
    Barspan {
        #[command(flatten)]
        cell: Cell,
        #[command(flatten)]
        common: Common,
    },
    /// Runs the invariant suites.
    Selftest {
        #[arg(long, default_value_t = SelftestConfig::default().seed)]
        seed: u64,
        /// Largest point count for the ring fuzzers.
        #[arg(long, default_value_t = SelftestConfig::default().max_n)]
        fuzz_n: u32,
        #[arg(long, default_value_t = SelftestConfig::default().ring_samples)]
        samples: usize,
        /// Also verify every structure constant in this cache file.
        #[arg(long)]
        cache_path: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        output: Output,
    },
    /// Writes the structure-constant document.
    ExportAlgebra {
        #[command(flatten)]
        cell: Cell,
        #[command(flatten)]
        common: Common,
    },
}

fn parse_range(s: &str) -> Result<(u32, u32), String> {
    let bad = || format!("expected `A..B` or `A`, got `{s}`");
    match s.split_once("..") {
        Some((a, b)) => {
            let b = b.strip_prefix('=').unwrap_or(b);
            Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
        }
        None => {
            let v = s.trim().parse().map_err(|_| bad())?;
            Ok((v, v))
        }
    }
}

/// Failure carrying its exit status.
struct Failure(u8, String);

impl From<CacheError> for Failure {
    fn from(e: CacheError) -> Self {
        Failure(EXIT_FAILURE, format!("cache refused: {e}"))
    }
}

impl From<SearchError> for Failure {
    fn from(e: SearchError) -> Self {
        match e {
            SearchError::CapExceeded { .. } => Failure(EXIT_CAP, e.to_string()),
            SearchError::Algebra(e) => Failure(EXIT_USAGE, e.to_string()),
        }
    }
}

impl From<BoundsError> for Failure {
    fn from(e: BoundsError) -> Self {
        Failure(EXIT_USAGE, e.to_string())
    }
}

fn presentation(cell: Cell) -> Result<Presentation, Failure> {
    build_presentation(cell.n, cell.m).map_err(|e| Failure(EXIT_USAGE, e.to_string()))
}

fn report_cell(cell: Cell) -> Result<(u32, u32), Failure> {
    let p = presentation(cell)?;
    Ok((p.m, p.n))
}

fn status_code(status: ReportStatus) -> u8 {
    match status {
        ReportStatus::Pinched => 0,
        ReportStatus::Unpinched => EXIT_UNPINCHED,
        ReportStatus::Contradiction => EXIT_CONTRADICTION,
        ReportStatus::CapExceeded => EXIT_CAP,
    }
}

fn default_cache_file(p: Presentation) -> Option<PathBuf> {
    let dir = std::env::var_os("TC_CACHE_DIR")?;
    Some(Path::new(&dir).join(format!("arnold-n{}-m{}.json", p.n, p.m)))
}

/// Algebra for `p`, from the cache when one is configured. An explicit path
/// must load; the default location is used only if the file exists.
fn algebra(p: Presentation, common: &Common) -> Result<ArnoldAlgebra, Failure> {
    let (path, required) = match &common.cache_path {
        Some(path) => (Some(path.clone()), true),
        None => (default_cache_file(p), false),
    };
    let Some(path) = path else {
        return Ok(ArnoldAlgebra::new(p));
    };
    let text = match std::fs::read_to_string(&path) {
        Ok(text) => text,
        Err(_) if !required => return Ok(ArnoldAlgebra::new(p)),
        Err(e) => return Err(Failure(EXIT_FAILURE, format!("{}: {e}", path.display()))),
    };
    let doc = AlgebraDocument::from_json(&text)?;
    Ok(load_algebra(&doc, p, &mut rand::thread_rng())?)
}

fn print_json(v: &impl serde::Serialize) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn emit_report(r: &BoundsReport, output: Output) {
    match output {
        Output::Json => print_json(r),
        Output::Text => {
            println!("{}", r.summary_line());
            for w in &r.warnings {
                println!("warning: {w}");
            }
        }
    }
}

fn cmd_report(cell: Cell, common: &Common) -> Result<u8, Failure> {
    let (m, n) = report_cell(cell)?;
    let report = assemble_report(m, n, common.field, &common.caps())?;
    emit_report(&report, common.output);
    Ok(status_code(report.status))
}

fn cmd_grid(m: (u32, u32), n: (u32, u32), jobs: Option<usize>, common: &Common) -> Result<u8, Failure> {
    let cells: Vec<(u32, u32)> = (m.0..=m.1).flat_map(|m| (n.0..=n.1).map(move |n| (m, n))).collect();
    for &(m, n) in &cells {
        report_cell(Cell { m: m.into(), n: n.into() })?;
    }
    let workers = jobs
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |k| k.get()))
        .clamp(1, cells.len().max(1));
    let caps = common.caps();
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<Result<BoundsReport, BoundsError>>>> = Mutex::new(vec![None; cells.len()]);
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::Relaxed);
                let Some(&(m, n)) = cells.get(k) else { break };
                let r = assemble_report(m, n, common.field, &caps);
                results.lock().expect("no poisoned workers")[k] = Some(r);
            });
        }
    });
    let mut reports = Vec::with_capacity(cells.len());
    for r in results.into_inner().expect("no poisoned workers") {
        reports.push(r.expect("every cell ran")?);
    }

    let pinched = reports.iter().filter(|r| r.status == ReportStatus::Pinched).count();
    let summary = format!("pinched {pinched}/{}", reports.len());
    match common.output {
        Output::Json => print_json(&json!({
            "cells": reports,
            "pinched": pinched,
            "total": reports.len(),
        })),
        Output::Text => {
            for r in &reports {
                emit_report(r, Output::Text);
            }
            println!("{summary}");
        }
    }
    let worst = [ReportStatus::Contradiction, ReportStatus::CapExceeded, ReportStatus::Unpinched]
        .into_iter()
        .find(|s| reports.iter().any(|r| r.status == *s));
    Ok(worst.map_or(0, status_code))
}

fn cmd_basis(cell: Cell, weight: Option<usize>, common: &Common) -> Result<u8, Failure> {
    let p = presentation(cell)?;
    common.caps().check(p)?;
    let alg = algebra(p, common)?;
    let weights: Vec<usize> = match weight {
        Some(w) if w > alg.top_weight() => Vec::new(),
        Some(w) => vec![w],
        None => (0..=alg.top_weight()).collect(),
    };
    match common.output {
        Output::Json => {
            let pieces: Vec<_> = weights
                .iter()
                .map(|&w| {
                    json!({
                        "weight": w,
                        "degree": p.degree_of_weight(w),
                        "basis": alg.basis(w).iter().map(ToString::to_string).collect::<Vec<_>>(),
                    })
                })
                .collect();
            print_json(&json!({ "n": p.n, "m": p.m, "total": alg.total_dim(), "pieces": pieces }));
        }
        Output::Text => {
            for w in weights {
                let shown: Vec<String> = alg.basis(w).iter().map(ToString::to_string).collect();
                println!("weight {w} degree {} rank {}: {}", p.degree_of_weight(w), shown.len(), shown.join(" "));
            }
        }
    }
    Ok(0)
}

fn parse_word(p: Presentation, s: &str) -> Result<Vec<Edge>, Failure> {
    let usage = |msg: String| Failure(EXIT_USAGE, msg);
    let s = s.trim();
    if s == "1" {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for factor in s.split('*') {
        let body = factor
            .trim()
            .strip_prefix('e')
            .ok_or_else(|| usage(format!("bad factor `{factor}`; expected e<i>_<j>")))?;
        let (i, j) = body
            .split_once('_')
            .ok_or_else(|| usage(format!("bad factor `{factor}`; expected e<i>_<j>")))?;
        let parse = |x: &str| x.parse::<u32>().map_err(|_| usage(format!("bad index in `{factor}`")));
        let e = Edge::new(parse(i)?, parse(j)?).map_err(|e| usage(e.to_string()))?;
        p.check_edge(e).map_err(|e| usage(e.to_string()))?;
        out.push(e);
    }
    Ok(out)
}

fn cmd_multiply(cell: Cell, words: &[String], common: &Common) -> Result<u8, Failure> {
    let p = presentation(cell)?;
    common.caps().check(p)?;
    let alg = algebra(p, common)?;
    let mut acc = AlgebraElement::one(p);
    for w in words {
        let x = p.straighten(&parse_word(p, w)?).map_err(|e| Failure(EXIT_USAGE, e.to_string()))?;
        acc = alg.multiply(&acc, &x).map_err(|e| Failure(EXIT_FAILURE, e.to_string()))?;
    }
    match common.output {
        Output::Json => {
            let terms: Vec<_> = acc
                .terms()
                .iter()
                .map(|(m, c)| json!({ "monomial": m, "coefficient": c.to_string() }))
                .collect();
            print_json(&json!({ "n": p.n, "m": p.m, "degree": acc.degree(), "terms": terms }));
        }
        Output::Text => println!("{acc}"),
    }
    Ok(0)
}

fn power_dims(alg: &ArnoldAlgebra, field: FieldSpec) -> Vec<Vec<usize>> {
    match field {
        FieldSpec::Rational => zero_divisor_power_dims(alg, Rationals, PowerStrategy::IdealGenerators),
        FieldSpec::Prime(p) => zero_divisor_power_dims(
            alg,
            PrimeField::new(p).expect("validated on parse"),
            PowerStrategy::IdealGenerators,
        ),
    }
}

fn cmd_zcl(cell: Cell, common: &Common) -> Result<u8, Failure> {
    let p = presentation(cell)?;
    common.caps().check(p)?;
    let alg = algebra(p, common)?;
    let dims = power_dims(&alg, common.field);
    let totals: Vec<usize> = dims.iter().map(|d| d.iter().sum()).collect();
    let zcl = totals.iter().take_while(|&&t| t > 0).count();
    match common.output {
        Output::Json => print_json(&json!({
            "n": p.n, "m": p.m, "field": common.field,
            "zcl": zcl, "lower": zcl + 1, "power_dims": totals,
        })),
        Output::Text => {
            println!("n={} m={} field={} zcl={zcl} lower={}", p.n, p.m, common.field, zcl + 1);
            for (k, t) in totals.iter().enumerate() {
                println!("Z^{}: {t}", k + 1);
            }
        }
    }
    Ok(0)
}

fn cmd_barspan(cell: Cell, common: &Common) -> Result<u8, Failure> {
    let p = presentation(cell)?;
    common.caps().check(p)?;
    let alg = algebra(p, common)?;
    let (dims, witness) = match common.field {
        FieldSpec::Rational => {
            let d = bar_span_dims(&alg, Rationals);
            let len = d.iter().take_while(|&&x| x > 0).count();
            (d, bar_product_witness(&alg, Rationals, len))
        }
        FieldSpec::Prime(q) => {
            let f = PrimeField::new(q).expect("validated on parse");
            let d = bar_span_dims(&alg, f);
            let len = d.iter().take_while(|&&x| x > 0).count();
            (d, bar_product_witness(&alg, f, len))
        }
    };
    let length = dims.iter().take_while(|&&x| x > 0).count();
    let witness: Option<Vec<String>> = witness.map(|w| w.iter().map(ToString::to_string).collect());
    match common.output {
        Output::Json => print_json(&json!({
            "n": p.n, "m": p.m, "field": common.field,
            "length": length, "span_dims": dims, "witness": witness,
        })),
        Output::Text => {
            println!("n={} m={} field={} length={length}", p.n, p.m, common.field);
            for (k, d) in dims.iter().enumerate() {
                println!("V_{}: {d}", k + 1);
            }
            if let Some(w) = witness {
                println!("witness: {}", w.join(" "));
            }
        }
    }
    Ok(0)
}

fn cmd_selftest(seed: u64, fuzz_n: u32, samples: usize, cache: Option<&Path>, output: Output) -> Result<u8, Failure> {
    let cache = match cache {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure(EXIT_FAILURE, format!("{}: {e}", path.display())))?;
            Some(AlgebraDocument::from_json(&text)?)
        }
        None => None,
    };
    let cfg = SelftestConfig {
        seed,
        max_n: fuzz_n,
        ring_samples: samples,
        cache,
        ..SelftestConfig::default()
    };
    let results = run_selftest(&cfg);
    let ok = results.iter().all(|r| r.ok());
    match output {
        Output::Json => {
            let suites: Vec<_> = results
                .iter()
                .map(|r| {
                    json!({
                        "suite": r.name, "cases": r.cases, "passed": r.passed,
                        "failure": r.failure, "case_digest": r.case_digest,
                    })
                })
                .collect();
            print_json(&json!({ "seed": seed, "ok": ok, "suites": suites }));
        }
        Output::Text => {
            for r in &results {
                let verdict = if r.ok() { "PASS" } else { "FAIL" };
                println!("{verdict} {} {}/{}", r.name, r.passed, r.cases);
                if let Some(f) = &r.failure {
                    println!("  minimized: {f}");
                }
            }
        }
    }
    Ok(if ok { 0 } else { EXIT_FAILURE })
}

fn cmd_export(cell: Cell, common: &Common) -> Result<u8, Failure> {
    let p = presentation(cell)?;
    common.caps().check(p)?;
    let doc = export_algebra(&ArnoldAlgebra::new(p));
    match common.cache_path.clone().or_else(|| default_cache_file(p)) {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir).map_err(|e| Failure(EXIT_FAILURE, format!("{}: {e}", dir.display())))?;
            }
            std::fs::write(&path, doc.to_json())
                .map_err(|e| Failure(EXIT_FAILURE, format!("{}: {e}", path.display())))?;
            eprintln!("wrote {} ({} basis monomials)", path.display(), doc.basis.len());
        }
        None => print!("{}", doc.to_json()),
    }
    Ok(0)
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Report { cell, common } => cmd_report(cell, &common),
        Command::Grid { m, n, jobs, common } => cmd_grid(m, n, jobs, &common),
        Command::Basis { cell, weight, common } => cmd_basis(cell, weight, &common),
        Command::Multiply { cell, words, common } => cmd_multiply(cell, &words, &common),
        Command::Zcl { cell, common } => cmd_zcl(cell, &common),
        Command::Barspan { cell, common } => cmd_barspan(cell, &common),
        Command::Selftest {
            seed,
            fuzz_n,
            samples,
            cache_path,
            output,
        } => cmd_selftest(seed, fuzz_n, samples, cache_path.as_deref(), output),
        Command::ExportAlgebra { cell, common } => cmd_export(cell, &common),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, msg)) => {
            eprintln!("tccert: {msg}");
            ExitCode::from(code)
        }
    }
}
