//! Command-line front end: analyze a graph and print the JSON report.
//!
//! Exit codes: 0 ok, 1 not distance-regular, 2 no Q-polynomial ordering,
//! 3 input or usage error, 4 numerical failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use drg_norton::edgelist::read_edge_list;
use drg_norton::error::Error;
use drg_norton::families::{generate_with_limit, FamilySpec, DEFAULT_MAX_VERTICES};
use drg_norton::report::{analyze, products_csv, AnalysisOptions, ProductDump};
use drg_norton::tolerance::{Tolerance, DEFAULT_NZ_RELATIVE, DEFAULT_TOLERANCE};

const EXIT_INPUT: u8 = 3;
const EXIT_NUMERICAL: u8 = 4;

#[derive(Parser)]
#[command(name = "drg-norton", version, about = "Distance-regular graphs, Krein parameters and the Norton algebra")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline on one graph and emit a JSON report
    Analyze(AnalyzeArgs),
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Edge-list file (`n m` header, then `u v` lines)
    #[arg(long, value_name = "PATH", conflicts_with = "family", required_unless_present = "family")]
    graph: Option<PathBuf>,

    /// Graph family: cycle, hamming, johnson, petersen, hypercube
    #[arg(long, value_name = "NAME")]
    family: Option<String>,

    /// Comma-separated family parameters, e.g. `3,2`
    #[arg(long, value_name = "INTS", value_delimiter = ',', requires = "family")]
    params: Vec<usize>,

    #[arg(long, value_name = "REAL", default_value_t = DEFAULT_TOLERANCE)]
    tolerance: f64,

    /// Relative threshold (times the largest Krein parameter) for q ≠ 0
    #[arg(long, value_name = "REAL", default_value_t = DEFAULT_NZ_RELATIVE)]
    nz_threshold: f64,

    /// Write the report here instead of standard output
    #[arg(long, value_name = "PATH")]
    output: Option<PathBuf>,

    /// Include the table of products Ex̂ ⋆ Eŷ
    #[arg(long)]
    dump_products: bool,

    /// Dump only distances and closed-form coefficients
    #[arg(long, requires = "dump_products")]
    compressed: bool,

    /// Format of the product dump
    #[arg(long, value_enum, default_value_t = DumpFormat::Json)]
    format: DumpFormat,

    /// Destination of a CSV product dump
    #[arg(long, value_name = "PATH")]
    products_output: Option<PathBuf>,

    /// Also compute the maximal associator norm over all vertex triples
    #[arg(long)]
    associators: bool,

    /// Refuse generated graphs with more vertices than this
    #[arg(long, value_name = "N", default_value_t = DEFAULT_MAX_VERTICES)]
    max_vertices: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DumpFormat {
    Json,
    Csv,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return if err.use_stderr() { ExitCode::from(EXIT_INPUT) } else { ExitCode::SUCCESS };
        }
    };
    match cli.command {
        Command::Analyze(args) => run_analyze(args),
    }
}

fn run_analyze(args: AnalyzeArgs) -> ExitCode {
    if args.tolerance.is_nan() || args.tolerance <= 0.0 || args.nz_threshold.is_nan() || args.nz_threshold < 0.0 {
        eprintln!("error: --tolerance must be positive and --nz-threshold nonnegative");
        return ExitCode::from(EXIT_INPUT);
    }
    let csv_dump = args.dump_products && args.format == DumpFormat::Csv;
    if csv_dump && args.products_output.is_none() {
        eprintln!("error: --format csv needs --products-output PATH");
        return ExitCode::from(EXIT_INPUT);
    }

    let loaded = match (&args.graph, &args.family) {
        (Some(path), _) => read_edge_list(path).map(|g| (g, format!("file:{}", path.display()))),
        (None, Some(name)) => FamilySpec::from_name(name, &args.params)
            .and_then(|spec| generate_with_limit(&spec, args.max_vertices).map(|g| (g, format!("family:{spec}")))),
        (None, None) => unreachable!("clap requires --graph or --family"),
    };
    let (graph, source) = match loaded {
        Ok(pair) => pair,
        Err(err) => {
            eprintln!("error: {err}");
            return ExitCode::from(EXIT_INPUT);
        }
    };

    let options = AnalysisOptions {
        tolerance: Tolerance(args.tolerance),
        nz_relative: args.nz_threshold,
        associators: args.associators,
        dump_products: args.dump_products.then_some(if args.compressed {
            ProductDump::Compressed
        } else {
            ProductDump::Full
        }),
    };
    let mut report = match analyze(&graph, &source, &options) {
        Ok(report) => report,
        Err(err) => {
            eprintln!("error: {err}");
            return ExitCode::from(EXIT_NUMERICAL);
        }
    };

    if csv_dump {
        let mode = options.dump_products.expect("dump requested");
        let path = args.products_output.as_ref().expect("checked above");
        if let Err(err) = write_file(path, &products_csv(&report, mode)) {
            eprintln!("error: {err}");
            return ExitCode::from(EXIT_INPUT);
        }
        for ordering in &mut report.q_orderings {
            ordering.products = None;
        }
    }

    let json = report.to_json();
    let written = match &args.output {
        Some(path) => write_file(path, &json),
        None => {
            print!("{json}");
            Ok(())
        }
    };
    if let Err(err) = written {
        eprintln!("error: {err}");
        return ExitCode::from(EXIT_INPUT);
    }
    if let Some(failure) = &report.failure {
        eprintln!("{}: {}", failure.kind, failure.message);
    }
    ExitCode::from(report.exit_code() as u8)
}

fn write_file(path: &PathBuf, contents: &str) -> Result<(), Error> {
    std::fs::write(path, contents).map_err(|source| Error::Io { path: path.clone(), source })
}
