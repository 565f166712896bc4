//! Command-line interface: the full `analyze` pipeline plus per-stage
//! subcommands. Exit codes: 0 success, 1 validation error, 2 analysis error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use punctstats::corpus::{self, Document, ScriptClass};
use punctstats::mfdfa::{self, MfdfaOptions, ScalingMode};
use punctstats::pipeline::{self, AnalysisConfig, PipelineError, PlotFormat};
use punctstats::series::{self, OutlierPolicy, Scope, Unit};
use punctstats::tokenizer::{self, PunctPolicy, TokenSequence};
use punctstats::weibull;
use punctstats::zipf::{self, FitRange};

#[derive(Parser)]
#[command(name = "punctstats", version, about = "Punctuation and sentence-length statistics for literary texts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScriptArg {
    Cjk,
    Latin,
}

impl From<ScriptArg> for ScriptClass {
    fn from(s: ScriptArg) -> Self {
        match s {
            ScriptArg::Cjk => ScriptClass::Cjk,
            ScriptArg::Latin => ScriptClass::Latin,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum UnitArg {
    Words,
    Chars,
}

impl From<UnitArg> for Unit {
    fn from(u: UnitArg) -> Self {
        match u {
            UnitArg::Words => Unit::Words,
            UnitArg::Chars => Unit::Characters,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ScopeArg {
    All,
    Terminal,
}

impl From<ScopeArg> for Scope {
    fn from(s: ScopeArg) -> Self {
        match s {
            ScopeArg::All => Scope::AllPunct,
            ScopeArg::Terminal => Scope::TerminalOnly,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Svg,
    Csv,
}

#[derive(Args)]
struct InputArgs {
    /// UTF-8 text file to analyze.
    #[arg(long)]
    input: PathBuf,
    /// Force the script class instead of auto-detection.
    #[arg(long)]
    script: Option<ScriptArg>,
    /// Word-frequency dictionary (required for CJK input).
    #[arg(long)]
    lexicon: Option<PathBuf>,
}

#[derive(Args)]
struct SeriesArgs {
    #[arg(long, value_enum, default_value = "words")]
    unit: UnitArg,
    #[arg(long, value_enum, default_value = "all")]
    scope: ScopeArg,
    /// Remove the N largest values before fitting.
    #[arg(long, value_name = "N")]
    drop_largest: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline from a JSON config file.
    Analyze {
        #[arg(long)]
        config: PathBuf,
        /// Override the config's output directory.
        #[arg(long)]
        output_dir: Option<PathBuf>,
        /// Also render figures in this format.
        #[arg(long, value_enum)]
        plots: Option<FormatArg>,
    },
    /// Tokenize a document and print JSON Lines, one token per line.
    Tokenize {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Extract a distance series and print CSV (metadata goes to stderr-free JSON with --meta).
    Series {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        series: SeriesArgs,
        /// Print the JSON metadata sidecar instead of the CSV body.
        #[arg(long)]
        meta: bool,
    },
    /// Rank-frequency table and power-law fit.
    Zipf {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = true)]
        include_punct: bool,
        #[arg(long, default_value_t = true)]
        case_fold: bool,
        /// Manual fit range (defaults to auto).
        #[arg(long)]
        r_lo: Option<usize>,
        #[arg(long)]
        r_hi: Option<usize>,
        /// Also scan for a two-regime crossover.
        #[arg(long)]
        crossover: bool,
        #[arg(long, default_value_t = 10)]
        min_segment: usize,
    },
    /// Fit a discrete Weibull distribution to a distance series.
    Weibull {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        series: SeriesArgs,
        #[arg(long, default_value_t = weibull::DEFAULT_FIT_FLOOR)]
        floor: usize,
    },
    /// Multifractal detrended fluctuation analysis of a distance series.
    Mfdfa {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        series: SeriesArgs,
        #[arg(long, default_value_t = 2)]
        detrend_order: usize,
        #[arg(long, default_value_t = -4.0)]
        q_min: f64,
        #[arg(long, default_value_t = 4.0)]
        q_max: f64,
        #[arg(long, default_value_t = 0.25)]
        q_step: f64,
        /// auto, two-ranges, or LO:HI.
        #[arg(long, default_value = "auto")]
        scale_mode: String,
    },
    /// Render figures for a previously configured pipeline run.
    Plot {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum, default_value = "svg")]
        format: FormatArg,
        #[arg(long)]
        output_dir: Option<PathBuf>,
    },
}

struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn validation(message: impl Into<String>) -> Self {
        CliError {
            code: 1,
            message: message.into(),
        }
    }

    fn analysis(message: impl Into<String>) -> Self {
        CliError {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<PipelineError> for CliError {
    fn from(e: PipelineError) -> Self {
        match e {
            PipelineError::Validation(_) => CliError::validation(e.to_string()),
            _ => CliError::analysis(e.to_string()),
        }
    }
}

fn load_and_tokenize(input: &InputArgs) -> Result<(Document, TokenSequence), CliError> {
    let doc = corpus::load_document(&input.input, input.script.map(Into::into))
        .map_err(|e| CliError::validation(e.to_string()))?;
    let tokens = match doc.script {
        ScriptClass::Cjk => {
            let lex_path = input.lexicon.as_ref().ok_or_else(|| {
                CliError::validation("CJK input requires --lexicon")
            })?;
            let lexicon = tokenizer::load_lexicon(lex_path)
                .map_err(|e| CliError::validation(e.to_string()))?;
            tokenizer::segment_cjk(&doc, &lexicon, &PunctPolicy::cjk_default())
        }
        ScriptClass::Latin => tokenizer::tokenize_latin(&doc, &PunctPolicy::latin_default()),
    }
    .map_err(|e| CliError::analysis(e.to_string()))?;
    Ok((doc, tokens))
}

fn extract(
    tokens: &TokenSequence,
    args: &SeriesArgs,
) -> Result<series::DistanceSeries, CliError> {
    let s = series::extract_distances(tokens, args.unit.into(), args.scope.into())
        .map_err(|e| CliError::analysis(e.to_string()))?;
    match args.drop_largest {
        Some(m) => series::trim_outliers(&s, OutlierPolicy::DropLargest(m))
            .map_err(|e| CliError::analysis(e.to_string())),
        None => Ok(s),
    }
}

fn parse_scale_mode(raw: &str) -> Result<ScalingMode, CliError> {
    match raw {
        "auto" => Ok(ScalingMode::Auto),
        "two-ranges" => Ok(ScalingMode::TwoRanges),
        other => {
            let (lo, hi) = other
                .split_once(':')
                .ok_or_else(|| CliError::validation(format!("bad scale mode {other:?}")))?;
            let s_lo = lo
                .parse()
                .map_err(|_| CliError::validation(format!("bad scale bound {lo:?}")))?;
            let s_hi = hi
                .parse()
                .map_err(|_| CliError::validation(format!("bad scale bound {hi:?}")))?;
            Ok(ScalingMode::Manual { s_lo, s_hi })
        }
    }
}

fn load_config(path: &Path) -> Result<AnalysisConfig, CliError> {
    let body = std::fs::read_to_string(path)
        .map_err(|e| CliError::validation(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&body)
        .map_err(|e| CliError::validation(format!("bad config {}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Analyze {
            config,
            output_dir,
            plots,
        } => {
            let mut cfg = load_config(&config)?;
            if let Some(dir) = output_dir {
                cfg.output_dir = dir.display().to_string();
            }
            let bundle = pipeline::run_pipeline(&cfg)?;
            let dir = PathBuf::from(&cfg.output_dir);
            let files = pipeline::write_report(&bundle, &dir)?;
            if let Some(format) = plots {
                let format = match format {
                    FormatArg::Svg => PlotFormat::Svg,
                    FormatArg::Csv => PlotFormat::Csv,
                };
                pipeline::emit_plots(&bundle, format, &dir)?;
            }
            eprintln!("wrote {} files to {}", files.len(), dir.display());
            Ok(())
        }
        Command::Tokenize { input } => {
            let (_, tokens) = load_and_tokenize(&input)?;
            print!("{}", tokens.to_jsonl());
            Ok(())
        }
        Command::Series {
            input,
            series: sargs,
            meta,
        } => {
            let (_, tokens) = load_and_tokenize(&input)?;
            let s = extract(&tokens, &sargs)?;
            if meta {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&serde_json::json!({
                        "unit": s.unit,
                        "scope": s.scope,
                        "source_id": s.source_id,
                        "n": s.values.len(),
                        "outliers_removed": s.outliers_removed,
                    }))
                    .expect("meta serializes")
                );
            } else {
                print!("{}", s.to_csv());
            }
            Ok(())
        }
        Command::Zipf {
            input,
            include_punct,
            case_fold,
            r_lo,
            r_hi,
            crossover,
            min_segment,
        } => {
            let (_, tokens) = load_and_tokenize(&input)?;
            let table = zipf::rank_frequency(&tokens, include_punct, case_fold)
                .map_err(|e| CliError::analysis(e.to_string()))?;
            let range = match (r_lo, r_hi) {
                (Some(lo), Some(hi)) => FitRange::Manual(lo, hi),
                (None, None) => FitRange::Auto,
                _ => return Err(CliError::validation("--r-lo and --r-hi go together")),
            };
            let fit = zipf::fit_power_law(&table, range)
                .map_err(|e| CliError::analysis(e.to_string()))?;
            let cross = if crossover {
                Some(
                    zipf::detect_crossover(&table, min_segment)
                        .map_err(|e| CliError::analysis(e.to_string()))?,
                )
            } else {
                None
            };
            println!(
                "{}",
                serde_json::to_string_pretty(&serde_json::json!({
                    "vocabulary": table.entries.len(),
                    "total_tokens": table.total_tokens,
                    "fit": fit,
                    "crossover": cross,
                }))
                .expect("fit serializes")
            );
            Ok(())
        }
        Command::Weibull {
            input,
            series: sargs,
            floor,
        } => {
            let (_, tokens) = load_and_tokenize(&input)?;
            let s = extract(&tokens, &sargs)?;
            let fit = weibull::fit_discrete_weibull_with_floor(&s, floor)
                .map_err(|e| CliError::analysis(e.to_string()))?;
            println!(
                "{}",
                serde_json::to_string_pretty(&fit).expect("fit serializes")
            );
            Ok(())
        }
        Command::Mfdfa {
            input,
            series: sargs,
            detrend_order,
            q_min,
            q_max,
            q_step,
            scale_mode,
        } => {
            let (_, tokens) = load_and_tokenize(&input)?;
            let s = extract(&tokens, &sargs)?;
            let options = MfdfaOptions {
                detrend_order,
                q_min,
                q_max,
                q_step,
                scaling_mode: parse_scale_mode(&scale_mode)?,
                ..MfdfaOptions::default()
            };
            let result = mfdfa::run_mfdfa(&s, &options)
                .map_err(|e| CliError::analysis(e.to_string()))?;
            let summary: Vec<_> = result
                .ranges
                .iter()
                .map(|rr| {
                    serde_json::json!({
                        "range": rr.range,
                        "h2": rr.hurst.h_at(2.0),
                        "delta_alpha": rr.spectrum.delta_alpha,
                        "label": rr.label,
                    })
                })
                .collect();
            println!(
                "{}",
                serde_json::to_string_pretty(&serde_json::json!({
                    "n": s.values.len(),
                    "scales": result.matrix.scales,
                    "finite_size_warning": result.finite_size_warning,
                    "ranges": summary,
                }))
                .expect("summary serializes")
            );
            Ok(())
        }
        Command::Plot {
            config,
            format,
            output_dir,
        } => {
            let mut cfg = load_config(&config)?;
            if let Some(dir) = output_dir {
                cfg.output_dir = dir.display().to_string();
            }
            let bundle = pipeline::run_pipeline(&cfg)?;
            let format = match format {
                FormatArg::Svg => PlotFormat::Svg,
                FormatArg::Csv => PlotFormat::Csv,
            };
            let files = pipeline::emit_plots(&bundle, format, Path::new(&cfg.output_dir))?;
            eprintln!("wrote {} figures to {}", files.len(), cfg.output_dir);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
