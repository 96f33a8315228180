//! Benchmark driver for the append-only postings-list representations.
//!
//! Four subcommands: `model` writes the analytical space-cost curves,
//! `generate` writes a synthetic record stream, `index` builds one inverted
//! index and reports its figures, and `bench` repeats timed builds and
//! reports per-run and mean rows. Table output is TSV on stdout; `--format
//! csv` switches the bench table to CSV. The synthetic seed comes from
//! `--seed`, else the `POSTINGS_BENCH_SEED` environment variable, else 42.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use postings_core::arena;
use postings_core::corpus::{self, GenStats, SynthConfig, DEFAULT_SEED};
use postings_core::invert::{self, BuildStats, Method};
use postings_core::model::{self, ModelSummary};
use postings_core::Unit;

const SEED_ENV: &str = "POSTINGS_BENCH_SEED";

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse()
}

#[derive(Parser)]
#[command(
    name = "postings-bench",
    version,
    about = "Compare append-only postings-list representations for space and build speed"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write analytical space-cost curves (CSV) and a summary block.
    Model(ModelArgs),
    /// Write a synthetic record stream.
    Generate(GenerateArgs),
    /// Build one index, traverse it, and report its figures.
    Index(IndexArgs),
    /// Repeat timed builds per method; report per-run and mean rows.
    Bench(BenchArgs),
}

#[derive(Args)]
struct ModelArgs {
    /// Largest list length to model.
    #[arg(long, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    max_length: u64,
    /// Emit a CSV row every this many lengths (default: max_length / 1000,
    /// at least 1). The final length is always emitted.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    stride: Option<u64>,
    /// Write the CSV here; the summary then goes to stdout instead of stderr.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SynthArgs {
    /// Stop at the first record boundary at or past this many postings.
    #[arg(long = "postings", default_value_t = 10_000_000)]
    target_postings: u64,
    /// Distinct term ranks available to the sampler.
    #[arg(long = "vocab", default_value_t = 100_000)]
    vocab_size: u64,
    /// Zipf exponent for term ranks.
    #[arg(long = "zipf", default_value_t = 1.0)]
    zipf_exponent: f64,
    /// Mean record length (truncated geometric distribution).
    #[arg(long = "mean-len", default_value_t = 3.0)]
    mean_record_len: f64,
    /// Record lengths are clamped to this many terms.
    #[arg(long = "max-len", default_value_t = 20)]
    max_record_len: u64,
    /// RNG seed; overrides POSTINGS_BENCH_SEED (default 42).
    #[arg(long)]
    seed: Option<u64>,
}

impl SynthArgs {
    fn to_config(&self) -> Result<SynthConfig> {
        Ok(SynthConfig {
            target_postings: self.target_postings,
            vocab_size: self.vocab_size,
            zipf_exponent: self.zipf_exponent,
            mean_record_len: self.mean_record_len,
            max_record_len: self.max_record_len,
            seed: resolve_seed(self.seed)?,
        })
    }
}

fn resolve_seed(flag: Option<u64>) -> Result<u64> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match std::env::var(SEED_ENV) {
        Ok(value) => value
            .trim()
            .parse()
            .with_context(|| format!("{SEED_ENV} must be an unsigned integer, got {value:?}")),
        Err(std::env::VarError::NotPresent) => Ok(DEFAULT_SEED),
        Err(err) => Err(err).with_context(|| format!("reading {SEED_ENV}")),
    }
}

#[derive(Args)]
struct ArenaArgs {
    /// Arena block size in bytes.
    #[arg(long, default_value_t = 64 * 1024 * 1024)]
    block_bytes: u64,
    /// Memory unit width in bytes: 4 or 8.
    #[arg(long, default_value_t = 4)]
    unit_bytes: u64,
}

#[derive(Args)]
struct GenerateArgs {
    #[command(flatten)]
    synth: SynthArgs,
    /// Output path for the record stream.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct IndexArgs {
    /// Record file to invert, one record per line.
    #[arg(long, conflicts_with = "synth")]
    corpus: Option<PathBuf>,
    /// Invert an in-memory synthetic stream instead of a file.
    #[arg(long)]
    synth: bool,
    #[command(flatten)]
    synth_args: SynthArgs,
    /// Postings-list representation: fbb or sqa.
    #[arg(long, value_parser = parse_method)]
    method: Method,
    #[command(flatten)]
    arena: ArenaArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Csv,
}

#[derive(Args)]
struct BenchArgs {
    /// Record file to invert, one record per line.
    #[arg(long, conflicts_with = "synth")]
    corpus: Option<PathBuf>,
    /// Invert an in-memory synthetic stream instead of a file.
    #[arg(long)]
    synth: bool,
    #[command(flatten)]
    synth_args: SynthArgs,
    /// Methods to benchmark, comma-separated.
    #[arg(
        long = "method",
        alias = "methods",
        value_delimiter = ',',
        value_parser = parse_method,
        default_values_t = [Method::Fbb, Method::Sqa]
    )]
    methods: Vec<Method>,
    /// Timed build+traverse repetitions per method.
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u32).range(1..))]
    runs: u32,
    #[command(flatten)]
    arena: ArenaArgs,
    /// Table layout: tab-separated or CSV.
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Model(args) => cmd_model(args),
        Command::Generate(args) => cmd_generate(args),
        Command::Index(args) => cmd_index(args),
        Command::Bench(args) => cmd_bench(args),
    }
}

fn cmd_model(args: ModelArgs) -> Result<()> {
    let stride = args.stride.unwrap_or_else(|| (args.max_length / 1000).max(1));
    let summary = model::summarize(args.max_length);
    match &args.out {
        Some(path) => {
            let file = File::create(path)
                .with_context(|| format!("creating {}", path.display()))?;
            let mut out = BufWriter::new(file);
            model::emit_curves(args.max_length, stride, &mut out)
                .with_context(|| format!("writing {}", path.display()))?;
            out.flush().with_context(|| format!("writing {}", path.display()))?;
            write_model_summary(&mut io::stdout().lock(), &summary)?;
        }
        None => {
            let mut out = BufWriter::new(io::stdout().lock());
            model::emit_curves(args.max_length, stride, &mut out)?;
            out.flush()?;
            write_model_summary(&mut io::stderr().lock(), &summary)?;
        }
    }
    Ok(())
}

/// The summary block: one `name value` pair per line, covering components,
/// allocation, largest component, and the mean costs under each accounting
/// (with and without the vocabulary-handle charge).
fn write_model_summary(out: &mut impl Write, s: &ModelSummary) -> io::Result<()> {
    writeln!(out, "max_length {}", s.max_length)?;
    writeln!(out, "fbb_components {}", s.fbb.components)?;
    writeln!(out, "fbb_allocated_units {}", s.fbb.allocated_units)?;
    writeln!(out, "fbb_waste_units {}", s.fbb.waste_units)?;
    writeln!(out, "fbb_max_component_units {}", s.fbb.max_component_units)?;
    writeln!(out, "fbb_mean_cost {:.6}", s.fbb_mean_cost)?;
    writeln!(out, "fbb_mean_cost_bare {:.6}", s.fbb_mean_cost_bare())?;
    writeln!(out, "sqa_components {}", s.sqa.components)?;
    writeln!(out, "sqa_allocated_units {}", s.sqa.allocated_units)?;
    writeln!(out, "sqa_waste_units {}", s.sqa.waste_units)?;
    writeln!(out, "sqa_max_component_units {}", s.sqa.max_component_units)?;
    writeln!(out, "sqa_dope_capacity {}", s.sqa.dope_capacity)?;
    writeln!(out, "sqa_discarded_dope_units {}", s.sqa.discarded_dope_units)?;
    writeln!(out, "sqa_mean_cost_a {:.6}", s.sqa_mean_cost_a)?;
    writeln!(out, "sqa_mean_cost_b {:.6}", s.sqa_mean_cost_b)?;
    writeln!(out, "sqa_mean_cost_a_bare {:.6}", s.sqa_mean_cost_a_bare())?;
    writeln!(out, "sqa_mean_cost_b_bare {:.6}", s.sqa_mean_cost_b_bare())?;
    Ok(())
}

fn cmd_generate(args: GenerateArgs) -> Result<()> {
    let config = args.synth.to_config()?;
    let file = File::create(&args.out)
        .with_context(|| format!("creating {}", args.out.display()))?;
    let mut out = BufWriter::new(file);
    let stats = corpus::generate(&config, &mut out)
        .with_context(|| format!("writing {}", args.out.display()))?;
    out.flush().with_context(|| format!("writing {}", args.out.display()))?;
    print_gen_stats(&stats);
    Ok(())
}

fn print_gen_stats(stats: &GenStats) {
    println!("records {}", stats.records);
    println!("postings {}", stats.postings);
    println!("distinct_terms {}", stats.distinct_terms);
}

/// Loads the record source fully into memory, so anything timed later
/// excludes I/O.
fn load_records(
    corpus_path: &Option<PathBuf>,
    synth: bool,
    synth_args: &SynthArgs,
) -> Result<(String, Vec<Box<[u8]>>, Option<GenStats>)> {
    match (corpus_path, synth) {
        (Some(path), false) => {
            let mut records = Vec::new();
            for line in corpus::open_records(path)? {
                records.push(line?.into_bytes().into_boxed_slice());
            }
            let label = path
                .file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_else(|| "corpus".to_string());
            Ok((label, records, None))
        }
        (None, true) => {
            let config = synth_args.to_config()?;
            let (records, stats) = corpus::generate_records(&config)?;
            Ok(("synthetic".to_string(), records, Some(stats)))
        }
        (None, false) => bail!("specify a record source: --corpus <FILE> or --synth"),
        (Some(_), true) => unreachable!("clap rejects --corpus with --synth"),
    }
}

fn cmd_index(args: IndexArgs) -> Result<()> {
    arena::validate_config(args.arena.block_bytes, args.arena.unit_bytes)?;
    let (label, records, gen_stats) = load_records(&args.corpus, args.synth, &args.synth_args)?;
    if let Some(stats) = gen_stats {
        eprintln!(
            "generated {} records, {} postings, {} distinct terms",
            stats.records, stats.postings, stats.distinct_terms
        );
    }
    match args.arena.unit_bytes {
        4 => index_one::<u32>(&label, &records, args.method, args.arena.block_bytes),
        8 => index_one::<u64>(&label, &records, args.method, args.arena.block_bytes),
        _ => unreachable!("validate_config admits only 4 and 8"),
    }
}

fn index_one<U: Unit>(
    label: &str,
    records: &[Box<[u8]>],
    method: Method,
    block_bytes: u64,
) -> Result<()> {
    let (index, stats) = invert::build_index::<U, _>(records, method, block_bytes)?;
    let traversal = invert::traverse_index(&index)?;
    let stats = stats.with_traversal(traversal.seconds);
    println!("{}", invert::REPORT_COLUMNS.join("\t"));
    println!("{}", invert::report_row(label, method, &stats));
    println!("checksum {:#018x}", traversal.checksum);
    println!(
        "memory arena_bytes {} vocab_bytes {}",
        index.arena().total_bytes(),
        index.vocab_bytes()
    );
    Ok(())
}

fn cmd_bench(args: BenchArgs) -> Result<()> {
    arena::validate_config(args.arena.block_bytes, args.arena.unit_bytes)?;
    let mut methods: Vec<Method> = Vec::new();
    for method in &args.methods {
        if !methods.contains(method) {
            methods.push(*method);
        }
    }
    let (label, records, _) = load_records(&args.corpus, args.synth, &args.synth_args)?;
    match args.arena.unit_bytes {
        4 => bench_all::<u32>(&label, &records, &methods, args.runs, args.arena.block_bytes, args.format),
        8 => bench_all::<u64>(&label, &records, &methods, args.runs, args.arena.block_bytes, args.format),
        _ => unreachable!("validate_config admits only 4 and 8"),
    }
}

fn bench_all<U: Unit>(
    label: &str,
    records: &[Box<[u8]>],
    methods: &[Method],
    runs: u32,
    block_bytes: u64,
    format: Format,
) -> Result<()> {
    let sep = match format {
        Format::Table => "\t",
        Format::Csv => ",",
    };
    let mut header: Vec<String> = invert::REPORT_COLUMNS.iter().map(|c| c.to_string()).collect();
    header.insert(2, "Run".to_string());
    println!("{}", header.join(sep));

    let mut per_method: Vec<(Method, u64, f64)> = Vec::new(); // (method, checksum, mean rate)
    for &method in methods {
        let mut checksum: Option<u64> = None;
        let mut run_stats: Vec<BuildStats> = Vec::new();
        for run in 1..=runs {
            let (index, stats) = invert::build_index::<U, _>(records, method, block_bytes)?;
            let traversal = invert::traverse_index(&index)?;
            let stats = stats.with_traversal(traversal.seconds);
            match checksum {
                None => checksum = Some(traversal.checksum),
                Some(expected) if expected != traversal.checksum => bail!(
                    "{method} checksum varied between runs: {expected:#018x} vs {:#018x}",
                    traversal.checksum
                ),
                Some(_) => {}
            }
            print_bench_row(label, method, &run.to_string(), &stats, sep);
            run_stats.push(stats);
        }
        // Mean row: counts are identical across runs; times are averaged and
        // the rate recomputed from the mean times, as in a "means of N runs"
        // table.
        let n = run_stats.len() as f64;
        let mean_build = run_stats.iter().map(|s| s.build_seconds).sum::<f64>() / n;
        let mean_trav = run_stats.iter().map(|s| s.traversal_seconds).sum::<f64>() / n;
        let mean = BuildStats {
            build_seconds: mean_build,
            ..run_stats[0]
        }
        .with_traversal(mean_trav);
        print_bench_row(label, method, "mean", &mean, sep);
        per_method.push((method, checksum.expect("runs >= 1"), mean.indexing_rate_millions_per_sec));
    }

    if let [(first_method, first_sum, _), rest @ ..] = per_method.as_slice() {
        for (method, sum, _) in rest {
            if sum != first_sum {
                bail!(
                    "traversal checksums disagree: {first_method} {first_sum:#018x} vs {method} {sum:#018x}"
                );
            }
        }
        if !rest.is_empty() {
            println!("checksums_agree {first_sum:#018x}");
        } else {
            println!("checksum {first_sum:#018x}");
        }
    }
    let fbb = per_method.iter().find(|(m, _, _)| *m == Method::Fbb);
    let sqa = per_method.iter().find(|(m, _, _)| *m == Method::Sqa);
    if let (Some((_, _, fbb_rate)), Some((_, _, sqa_rate))) = (fbb, sqa) {
        if *sqa_rate > 0.0 {
            println!(
                "fbb_vs_sqa_rate_margin_percent {:+.1}",
                (fbb_rate / sqa_rate - 1.0) * 100.0
            );
        }
    }
    Ok(())
}

fn print_bench_row(label: &str, method: Method, run: &str, stats: &BuildStats, sep: &str) {
    let mut cells: Vec<String> = invert::report_cells(label, method, stats).into();
    cells.insert(2, run.to_string());
    println!("{}", cells.join(sep));
}
