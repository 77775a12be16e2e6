use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};

use seqinfo::benchmark::{correction_table, EnsembleConfig, DEFAULT_ENSEMBLE_SIZE, DEFAULT_SEED};
use seqinfo::correlate::{autocorrelation, substitute, DEFAULT_MAX_LAG};
use seqinfo::entropy::{entropy_profile, BlockRange, CountMode};
use seqinfo::report::{self, Format, RunMetadata, WalshRow};
use seqinfo::walsh::randomness_coefficient;
use seqinfo::{Error, Result};

#[derive(Parser)]
#[command(name = "seqinfo", version, about = "Block entropy, finite-length correction, autocorrelation and Walsh randomness of DNA sequences")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write one FASTA record per feature plus the concatenated exons (`total_coding`).
    Extract(ExtractArgs),
    /// Raw block entropy per L.
    Entropy(EntropyArgs),
    /// Random-ensemble correction factors for a sequence length.
    Benchmark(BenchmarkArgs),
    /// Normalised autocorrelation over lags -m..m.
    Autocorr(AutocorrArgs),
    /// Walsh randomness coefficient.
    Walsh(WalshArgs),
    /// Raw, correction factor and corrected entropy per sequence and L.
    Report(ReportArgs),
}

#[derive(Args)]
struct InputArgs {
    /// Sequence file (FASTA or ORIGIN block).
    #[arg(long)]
    input: PathBuf,
    /// Feature TSV; when given, each feature and the joined exons are analysed.
    #[arg(long)]
    features: Option<PathBuf>,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    /// Output file; standard output when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct EntropyParams {
    /// Block lengths, e.g. `3..9`, `3-9` or `5`.
    #[arg(long = "L", default_value = "2..9")]
    block_range: BlockRange,
    #[arg(long, value_enum, default_value = "blocks")]
    mode: ModeArg,
    /// Additive smoothing (0 = maximum likelihood, 1 = Laplace).
    #[arg(long, default_value_t = 0.0)]
    beta: f64,
}

#[derive(Args)]
struct EnsembleParams {
    #[arg(long = "ensemble-size", default_value_t = DEFAULT_ENSEMBLE_SIZE)]
    ensemble_size: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Seed from the system clock instead of `--seed` (the seed used is recorded).
    #[arg(long = "clock-seed", conflicts_with = "seed")]
    clock_seed: bool,
}

impl EnsembleParams {
    fn seed(&self) -> u64 {
        if self.clock_seed {
            SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_nanos() as u64)
                .unwrap_or(DEFAULT_SEED)
        } else {
            self.seed
        }
    }
}

#[derive(Args)]
struct ExtractArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    features: PathBuf,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct EntropyArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    params: EntropyParams,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct BenchmarkArgs {
    /// Sequence length to build the table for.
    #[arg(long, required_unless_present = "input")]
    length: Option<usize>,
    /// Build one table per distinct record length of this file instead.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    features: Option<PathBuf>,
    #[command(flatten)]
    params: EntropyParams,
    #[command(flatten)]
    ensemble: EnsembleParams,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct AutocorrArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Record to analyse when the input holds several.
    #[arg(long)]
    record: Option<String>,
    #[arg(long = "max-lag", default_value_t = DEFAULT_MAX_LAG)]
    max_lag: usize,
    /// Subtract the signal mean before correlating.
    #[arg(long)]
    center: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct WalshArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct ReportArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    params: EntropyParams,
    #[command(flatten)]
    ensemble: EnsembleParams,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Blocks,
    Sliding,
}

impl From<ModeArg> for CountMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Blocks => CountMode::NonOverlapping,
            ModeArg::Sliding => CountMode::Sliding,
        }
    }
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    match path {
        None => Ok(Box::new(BufWriter::new(io::stdout().lock()))),
        Some(p) => File::create(p)
            .map(|f| Box::new(BufWriter::new(f)) as Box<dyn Write>)
            .map_err(|e| io_error(p, e)),
    }
}

fn io_error(path: &Path, e: io::Error) -> Error {
    Error::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    }
}

fn emit(path: Option<&Path>, f: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> Result<()> {
    let mut out = open_output(path)?;
    let label = path.unwrap_or(Path::new("<stdout>"));
    f(&mut out).map_err(|e| io_error(label, e))?;
    out.flush().map_err(|e| io_error(label, e))
}

fn load(input: &InputArgs) -> Result<Vec<seqinfo::DnaSequence>> {
    let loaded = report::load_inputs(&input.input, input.features.as_deref())?;
    for w in &loaded.warnings {
        eprintln!("warning: {w}");
    }
    Ok(loaded.sequences)
}

fn check_beta(beta: f64) -> Result<()> {
    if beta.is_finite() && beta >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidRange(format!("beta must be a finite value >= 0, got {beta}")))
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Extract(args) => {
            let genome = seqinfo::load_annotated(&args.input, &args.features)?;
            let extracted = report::feature_sequences(&genome)?;
            for w in &extracted.warnings {
                eprintln!("warning: {w}");
            }
            emit(args.output.as_deref(), |w| report::write_fasta(w, &extracted.sequences))
        }
        Command::Entropy(args) => {
            let p = &args.params;
            check_beta(p.beta)?;
            let mode = p.mode.into();
            let profiles = load(&args.input)?
                .iter()
                .map(|s| {
                    entropy_profile(s, p.block_range, mode, p.beta)
                        .map_err(|e| e.in_sequence(s.id()))
                })
                .collect::<Result<Vec<_>>>()?;
            let meta = RunMetadata::new("entropy", p.block_range, mode, p.beta);
            let rows = report::entropy_rows(&profiles);
            emit(args.output.output.as_deref(), |w| {
                report::write_entropy(w, args.output.format.into(), &meta, &rows)
            })
        }
        Command::Benchmark(args) => {
            let p = &args.params;
            check_beta(p.beta)?;
            let mode = p.mode.into();
            let seed = args.ensemble.seed();
            let mut lengths: Vec<usize> = match (&args.input, args.length) {
                (Some(input), _) => load(&InputArgs {
                    input: input.clone(),
                    features: args.features.clone(),
                })?
                .iter()
                .map(|s| s.len())
                .collect(),
                (None, Some(n)) => vec![n],
                (None, None) => unreachable!("clap requires one of --length/--input"),
            };
            lengths.sort_unstable();
            lengths.dedup();
            let tables = lengths
                .into_iter()
                .map(|length| {
                    let cfg = EnsembleConfig::new(length, p.block_range)
                        .ensemble_size(args.ensemble.ensemble_size)
                        .seed(seed)
                        .mode(mode)
                        .beta(p.beta);
                    correction_table(&cfg)
                })
                .collect::<Result<Vec<_>>>()?;
            let meta = RunMetadata::new("benchmark", p.block_range, mode, p.beta)
                .with_ensemble(seed, args.ensemble.ensemble_size);
            let rows = report::benchmark_rows(&tables);
            emit(args.output.output.as_deref(), |w| {
                report::write_benchmark(w, args.output.format.into(), &meta, &rows)
            })
        }
        Command::Autocorr(args) => {
            let sequences = load(&args.input)?;
            let seq = match &args.record {
                Some(id) => sequences
                    .iter()
                    .find(|s| s.id() == id)
                    .ok_or_else(|| Error::InvalidRange(format!("no record named '{id}'")))?,
                None if sequences.len() == 1 => &sequences[0],
                None => {
                    return Err(Error::InvalidRange(format!(
                        "input holds {} records; choose one with --record",
                        sequences.len()
                    )))
                }
            };
            let mut signal = substitute(seq);
            if args.center {
                signal = signal.centered();
            }
            let series = autocorrelation(&signal, args.max_lag).map_err(|e| e.in_sequence(seq.id()))?;
            emit(args.output.output.as_deref(), |w| {
                report::write_autocorr(w, args.output.format.into(), &series)
            })
        }
        Command::Walsh(args) => {
            let rows = load(&args.input)?
                .iter()
                .map(|s| randomness_coefficient(s).map(|r| WalshRow::from(&r)))
                .collect::<Result<Vec<_>>>()?;
            emit(args.output.output.as_deref(), |w| {
                report::write_walsh(w, args.output.format.into(), &rows)
            })
        }
        Command::Report(args) => {
            let p = &args.params;
            check_beta(p.beta)?;
            if args.ensemble.ensemble_size == 0 {
                return Err(Error::EmptyEnsemble);
            }
            let mode = p.mode.into();
            let seed = args.ensemble.seed();
            let sequences = load(&args.input)?;
            let cfg = EnsembleConfig::new(0, p.block_range)
                .ensemble_size(args.ensemble.ensemble_size)
                .seed(seed)
                .mode(mode)
                .beta(p.beta);
            let (profiles, _) = report::corrected_profiles(&sequences, &cfg)?;
            let meta = RunMetadata::new("report", p.block_range, mode, p.beta)
                .with_ensemble(seed, args.ensemble.ensemble_size);
            let rows = report::report_rows(&profiles);
            emit(args.output.output.as_deref(), |w| {
                report::write_report(w, args.output.format.into(), &meta, &rows)
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
