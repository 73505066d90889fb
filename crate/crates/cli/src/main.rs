//! Command-line front end: word enumeration, count tables, statistics,
//! verification and normality diagnostics.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error, 3 an
//! enumeration request beyond the crossing-number cap.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use bridge_genus::counts::{table_rows, write_table_csv, TableRow};
use bridge_genus::oracle::{stream_word_records, StreamError};
use bridge_genus::stats::{normality_row, stats_document, NormalityRow, StatsDocument, NORMALITY_HEADER};
use bridge_genus::word::{EnumerationCap, WordRecord, DEFAULT_MAX_ENUM_CROSSINGS, MIN_CROSSINGS};
use bridge_genus::{verify_all, EnumerationError, Fault, VerifyConfig, WordEnsemble};

const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_CAP: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "bridge-genus", version, about = "Exact genus statistics of 2-bridge knots")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List every word with `c` crossings and its genus.
    Enumerate(EnumerateArgs),
    /// Counts t, t_p and tbar for every (c, g) in a range.
    Table(TableArgs),
    /// Mean, variance, median, mode and quasi-symmetry class for one c.
    Stats(StatsArgs),
    /// Check every formula against enumeration and each other.
    Verify(VerifyArgs),
    /// Distances to the binomial and normal limits for a list of c.
    Normality(NormalityArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Jsonl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Ensemble {
    Knots,
    Words,
    Palindromic,
}

#[derive(Debug, Args)]
struct Common {
    /// Output format.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write to this file instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Worker threads for enumeration.
    #[arg(long, env = "BRIDGE_GENUS_THREADS", default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    threads: u16,
}

#[derive(Debug, Args)]
struct EnumerateArgs {
    #[arg(long)]
    crossings: usize,
    /// Only words equal to their own reversal.
    #[arg(long)]
    palindromic_only: bool,
    /// One word per knot class, with its multiplicity.
    #[arg(long)]
    dedupe: bool,
    /// Largest crossing number that may be enumerated.
    #[arg(long, default_value_t = DEFAULT_MAX_ENUM_CROSSINGS)]
    max_enum_c: usize,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct TableArgs {
    /// Single crossing number; shorthand for equal --min-c and --max-c.
    #[arg(long, conflicts_with_all = ["min_c", "max_c"])]
    crossings: Option<usize>,
    #[arg(long, default_value_t = MIN_CROSSINGS)]
    min_c: usize,
    #[arg(long, default_value_t = 20)]
    max_c: usize,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct StatsArgs {
    #[arg(long)]
    crossings: usize,
    #[arg(long, value_enum, default_value_t = Ensemble::Knots, conflicts_with = "palindromic_only")]
    ensemble: Ensemble,
    /// Shorthand for --ensemble palindromic.
    #[arg(long)]
    palindromic_only: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Largest crossing number checked against enumeration.
    #[arg(long, default_value_t = 16)]
    max_enum_c: usize,
    /// Largest crossing number for closed form against recursion.
    #[arg(long, default_value_t = 60)]
    max_c: usize,
    /// Enumerate up to 22 crossings instead of 16.
    #[arg(long, conflicts_with = "max_enum_c")]
    slow: bool,
    /// Deliberately corrupt one recursion seed to prove the harness fails.
    #[arg(long, value_parser = parse_fault)]
    inject_fault: Option<Fault>,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct NormalityArgs {
    /// Comma-separated crossing numbers, each at least 5.
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["min_c", "max_c"])]
    crossings_list: Option<Vec<usize>>,
    #[arg(long)]
    min_c: Option<usize>,
    #[arg(long)]
    max_c: Option<usize>,
    #[command(flatten)]
    common: Common,
}

fn parse_fault(s: &str) -> Result<Fault, String> {
    s.parse()
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Cap(EnumerationError),
    Io(io::Error),
    Verify,
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<EnumerationError> for Failure {
    fn from(e: EnumerationError) -> Self {
        match e {
            EnumerationError::Unsupported { .. } => Failure::Cap(e),
            EnumerationError::TooFewCrossings { .. } => Failure::Usage(e.to_string()),
        }
    }
}

impl From<StreamError> for Failure {
    fn from(e: StreamError) -> Self {
        match e {
            StreamError::Enumeration(e) => e.into(),
            StreamError::Io(e) => Failure::Io(e),
        }
    }
}

/// Destination that only appears under its final name once complete.
struct Sink {
    out: BufWriter<Box<dyn Write>>,
    target: Option<(PathBuf, PathBuf)>,
}

impl Sink {
    fn open(path: Option<&Path>) -> io::Result<Self> {
        match path {
            None => Ok(Sink { out: BufWriter::new(Box::new(io::stdout().lock())), target: None }),
            Some(p) => {
                let mut name = p.file_name().map(|n| n.to_os_string()).unwrap_or_default();
                name.push(".partial");
                let tmp = p.with_file_name(name);
                let file = File::create(&tmp)?;
                Ok(Sink { out: BufWriter::new(Box::new(file)), target: Some((tmp, p.to_path_buf())) })
            }
        }
    }

    fn finish(mut self) -> io::Result<()> {
        self.out.flush()?;
        drop(self.out);
        if let Some((tmp, path)) = self.target.take() {
            fs::rename(tmp, path)?;
        }
        Ok(())
    }

    fn abandon(self) {
        if let Some((tmp, _)) = &self.target {
            let _ = fs::remove_file(tmp);
        }
    }
}

/// Opens the sink, runs `body`, and either publishes or discards the output.
fn with_sink(path: Option<&Path>, body: impl FnOnce(&mut dyn Write) -> Result<(), Failure>) -> Result<(), Failure> {
    let mut sink = Sink::open(path)?;
    match body(&mut sink.out) {
        Ok(()) => Ok(sink.finish()?),
        Err(e) => {
            sink.abandon();
            Err(e)
        }
    }
}

fn csv_record(r: &WordRecord) -> String {
    let eps: String = r.eps.iter().map(|e| char::from(b'0' + e)).collect();
    let opt = |v: Option<u32>| v.map(|x| x.to_string()).unwrap_or_default();
    format!("{},{},{},{},{},{}", r.c, eps, r.symbols, r.palindromic, opt(r.genus), opt(r.multiplicity.map(u32::from)))
}

fn run_enumerate(a: EnumerateArgs) -> Result<(), Failure> {
    let format = a.common.format.unwrap_or(Format::Jsonl);
    if a.crossings < MIN_CROSSINGS {
        return Err(Failure::Usage(format!("--crossings must be at least {MIN_CROSSINGS}")));
    }
    let cap = EnumerationCap::new(a.max_enum_c);
    cap.check(a.crossings)?;
    let threads = usize::from(a.common.threads);
    with_sink(a.common.output.as_deref(), |out| {
        let mut first = true;
        if format == Format::Csv {
            writeln!(out, "c,eps,symbols,palindromic,genus,multiplicity")?;
        } else if format == Format::Json {
            write!(out, "[")?;
        }
        stream_word_records(a.crossings, a.palindromic_only, a.dedupe, cap, threads, |r| match format {
            Format::Jsonl => writeln!(out, "{}", r.to_json_line()),
            Format::Csv => writeln!(out, "{}", csv_record(r)),
            Format::Json => {
                let sep = if first { "" } else { "," };
                first = false;
                write!(out, "{sep}\n  {}", r.to_json_line())
            }
        })?;
        if format == Format::Json {
            writeln!(out, "{}]", if first { "" } else { "\n" })?;
        }
        Ok(())
    })
}

/// Writes pre-serialized objects as a JSON array, one element per line.
fn write_json_array(out: &mut dyn Write, items: &[String]) -> io::Result<()> {
    if items.is_empty() {
        return writeln!(out, "[]");
    }
    writeln!(out, "[")?;
    for (i, item) in items.iter().enumerate() {
        let sep = if i + 1 < items.len() { "," } else { "" };
        writeln!(out, "  {item}{sep}")?;
    }
    writeln!(out, "]")
}

fn table_json(r: &TableRow) -> String {
    format!(r#"{{"c":{},"g":{},"t":{},"tp":{},"tbar":{}}}"#, r.c, r.g, r.t, r.tp, r.tbar)
}

fn run_table(a: TableArgs) -> Result<(), Failure> {
    let (lo, hi) = a.crossings.map_or((a.min_c, a.max_c), |c| (c, c));
    if lo < MIN_CROSSINGS {
        return Err(Failure::Usage(format!("crossing numbers start at {MIN_CROSSINGS}")));
    }
    let rows = table_rows(lo, hi).map_err(|e| Failure::Usage(e.to_string()))?;
    with_sink(a.common.output.as_deref(), |out| {
        match a.common.format.unwrap_or(Format::Csv) {
            Format::Csv => write_table_csv(out, &rows)?,
            Format::Jsonl => rows.iter().try_for_each(|r| writeln!(out, "{}", table_json(r)))?,
            Format::Json => write_json_array(out, &rows.iter().map(table_json).collect::<Vec<_>>())?,
        }
        Ok(())
    })
}

fn stats_csv(doc: &StatsDocument) -> String {
    let set = |v: &[usize]| v.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(";");
    fn opt<T: ToString>(v: &Option<T>) -> String {
        v.as_ref().map(T::to_string).unwrap_or_default()
    }
    format!(
        "c,ensemble,mean,variance,median_set,mode_set,qs_class,mean_gap,var_gap,ks_to_normal\n{},{},{},{},{},{},{},{},{},{}\n",
        doc.c,
        doc.ensemble.as_str(),
        doc.mean,
        doc.variance,
        set(&doc.median_set),
        set(&doc.mode_set),
        doc.qs_class,
        opt(&doc.mean_gap),
        opt(&doc.var_gap),
        opt(&doc.ks_to_normal)
    )
}

fn run_stats(a: StatsArgs) -> Result<(), Failure> {
    if a.crossings < MIN_CROSSINGS {
        return Err(Failure::Usage(format!("--crossings must be at least {MIN_CROSSINGS}")));
    }
    let ensemble = match (a.palindromic_only, a.ensemble) {
        (true, _) | (false, Ensemble::Palindromic) => WordEnsemble::PalindromicWords,
        (false, Ensemble::Words) => WordEnsemble::AllWords,
        (false, Ensemble::Knots) => WordEnsemble::KnotClasses,
    };
    let doc = stats_document(a.crossings, ensemble).map_err(|e| Failure::Usage(e.to_string()))?;
    with_sink(a.common.output.as_deref(), |out| {
        match a.common.format.unwrap_or(Format::Json) {
            Format::Json => writeln!(out, "{}", doc.to_json())?,
            Format::Jsonl => writeln!(out, "{}", doc.to_json_line())?,
            Format::Csv => write!(out, "{}", stats_csv(&doc))?,
        }
        Ok(())
    })
}

fn run_verify(a: VerifyArgs) -> Result<(), Failure> {
    let c_enum_max = if a.slow { 22 } else { a.max_enum_c };
    let cfg = VerifyConfig {
        threads: usize::from(a.common.threads),
        fault: a.inject_fault,
        ..VerifyConfig::new(c_enum_max, a.max_c)
    };
    if cfg.c_enum_max >= MIN_CROSSINGS && cfg.c_formula_max < 7 {
        return Err(Failure::Usage("--max-c must be at least 7".to_string()));
    }
    let format = a.common.format.unwrap_or(Format::Json);
    if format == Format::Csv {
        return Err(Failure::Usage("verify writes json or jsonl".to_string()));
    }
    let report = verify_all(&cfg)?;
    with_sink(a.common.output.as_deref(), |out| {
        match format {
            Format::Jsonl => {
                for line in report.to_json_lines() {
                    writeln!(out, "{line}")?;
                }
            }
            _ => writeln!(out, "{}", report.to_json())?,
        }
        Ok(())
    })?;
    let failed = report.failures().count();
    eprintln!("{} checks, {} failed", report.checks.len(), failed);
    if failed > 0 {
        return Err(Failure::Verify);
    }
    Ok(())
}

fn normality_json(r: &NormalityRow) -> String {
    use bridge_genus::stats::format_float as f;
    format!(
        r#"{{"c":{},"ks_to_normal":{},"binom_n":{},"binom_tv":{},"mean_gap":{},"var_gap":{}}}"#,
        r.c,
        f(r.ks_to_normal),
        r.binom_n,
        f(r.binom_tv),
        f(r.mean_gap),
        f(r.var_gap)
    )
}

fn run_normality(a: NormalityArgs) -> Result<(), Failure> {
    let cs: Vec<usize> = match (&a.crossings_list, a.min_c, a.max_c) {
        (Some(list), _, _) => list.clone(),
        (None, Some(lo), Some(hi)) => (lo..=hi).collect(),
        _ => return Err(Failure::Usage("give --crossings-list or both --min-c and --max-c".to_string())),
    };
    if cs.is_empty() {
        return Err(Failure::Usage("no crossing numbers given".to_string()));
    }
    if let Some(c) = cs.iter().find(|&&c| c < 5) {
        return Err(Failure::Usage(format!("normality needs c >= 5, got {c}")));
    }
    let rows: Vec<NormalityRow> = cs.iter().map(|&c| normality_row(c)).collect();
    with_sink(a.common.output.as_deref(), |out| {
        match a.common.format.unwrap_or(Format::Csv) {
            Format::Csv => {
                writeln!(out, "{NORMALITY_HEADER}")?;
                rows.iter().try_for_each(|r| writeln!(out, "{r}"))?;
            }
            Format::Jsonl => rows.iter().try_for_each(|r| writeln!(out, "{}", normality_json(r)))?,
            Format::Json => write_json_array(out, &rows.iter().map(normality_json).collect::<Vec<_>>())?,
        }
        Ok(())
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Enumerate(a) => run_enumerate(a),
        Command::Table(a) => run_table(a),
        Command::Stats(a) => run_stats(a),
        Command::Verify(a) => run_verify(a),
        Command::Normality(a) => run_normality(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Cap(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_CAP)
        }
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Verify) => ExitCode::from(EXIT_VERIFY_FAILED),
    }
}
