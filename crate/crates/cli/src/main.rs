//! `biozip` command-line front end.
//!
//! Exit codes: 0 success, 1 runtime failure, 2 usage error. Every failure
//! prints exactly one line to stderr.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use biozip::bench::{self, SweepConfig, SweepSpec};
use biozip::pipeline::{evaluate, Segmentation};
use biozip::signal_io::{read_signal, synth_eeg, write_signal, DEFAULT_SAMPLE_RATE};
use biozip::transform::MAX_DWT_LEVELS;
use biozip::{decompress, deserialize, CodecKind, PipelineConfig, SignalFormat, TransformKind};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "biozip",
    version,
    about = "Transform + entropy codec for biosignals"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a synthetic EEG-like recording.
    Gen {
        /// Duration in seconds.
        duration: f64,
        /// Sample rate in Hz.
        rate: f64,
        seed: u64,
        output: PathBuf,
        /// Output format; inferred from the extension when omitted.
        #[arg(long, value_parser = parse_format)]
        format: Option<SignalFormat>,
    },
    /// Compress a signal file into a container and print the run report as JSON.
    Compress {
        input: PathBuf,
        output: PathBuf,
        #[command(flatten)]
        pipeline: PipelineArgs,
        #[arg(long, default_value_t = 0.01, value_parser = parse_thr)]
        thr: f64,
        #[command(flatten)]
        segmentation: SegmentationArgs,
        #[command(flatten)]
        input_opts: InputArgs,
        /// Also write the JSON report to this path.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Reconstruct a signal from a container and print stage timings as JSON.
    Decompress {
        input: PathBuf,
        output: PathBuf,
        /// Output format; inferred from the extension when omitted.
        #[arg(long, value_parser = parse_format)]
        format: Option<SignalFormat>,
    },
    /// Run every configuration × segmentation × threshold and emit CSV rows.
    Sweep {
        /// Signal file; a synthetic recording is generated when omitted.
        #[arg(long)]
        input: Option<PathBuf>,
        #[command(flatten)]
        input_opts: InputArgs,
        /// Seed for the synthetic recording.
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Duration of the synthetic recording in seconds.
        #[arg(long, default_value_t = 60.0)]
        duration: f64,
        /// Restrict to one transform (default: both).
        #[arg(long, value_parser = parse_transform)]
        transform: Option<TransformKind>,
        /// Restrict to one codec (default: both).
        #[arg(long, value_parser = parse_codec)]
        codec: Option<CodecKind>,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..=MAX_DWT_LEVELS as i64))]
        levels: u32,
        /// Explicit thresholds (comma separated); overrides the grid flags.
        #[arg(long, value_delimiter = ',', value_parser = parse_thr)]
        thr: Vec<f64>,
        #[arg(long, default_value_t = bench::DEFAULT_THR_MIN, value_parser = parse_thr)]
        thr_min: f64,
        #[arg(long, default_value_t = bench::DEFAULT_THR_MAX, value_parser = parse_thr)]
        thr_max: f64,
        #[arg(long, default_value_t = bench::DEFAULT_THR_POINTS)]
        points: usize,
        /// Space the threshold grid linearly instead of logarithmically.
        #[arg(long)]
        linear: bool,
        /// Segment counts to sweep (comma separated).
        #[arg(long, value_delimiter = ',', conflicts_with = "ts")]
        segments: Vec<usize>,
        /// Seconds of signal per segment; converted to a segment count.
        #[arg(long, value_parser = parse_positive)]
        ts: Option<f64>,
        /// CSV destination; standard output when omitted.
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Args)]
struct PipelineArgs {
    #[arg(long, default_value = "dct", value_parser = parse_transform)]
    transform: TransformKind,
    #[arg(long, default_value = "rle", value_parser = parse_codec)]
    codec: CodecKind,
    /// Haar decomposition depth.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..=MAX_DWT_LEVELS as i64))]
    levels: u32,
}

#[derive(Args)]
struct SegmentationArgs {
    /// Number of segments (default 1).
    #[arg(long, conflicts_with = "ts", value_parser = clap::value_parser!(u64).range(1..))]
    segments: Option<u64>,
    /// Seconds of signal per segment.
    #[arg(long, value_parser = parse_positive)]
    ts: Option<f64>,
}

impl SegmentationArgs {
    fn resolve(&self) -> Segmentation {
        match (self.segments, self.ts) {
            (_, Some(ts)) => Segmentation::SamplingTime(ts),
            (Some(n), None) => Segmentation::Count(n as usize),
            (None, None) => Segmentation::Count(1),
        }
    }
}

#[derive(Args)]
struct InputArgs {
    /// Sample rate of the input in Hz.
    #[arg(long, default_value_t = DEFAULT_SAMPLE_RATE, value_parser = parse_positive)]
    rate: f64,
    /// Input format; inferred from the extension when omitted.
    #[arg(long, value_parser = parse_format)]
    format: Option<SignalFormat>,
}

fn parse_thr(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("{s:?} is not a number"))?;
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(format!("{v} is outside [0, 1]"))
    }
}

fn parse_positive(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("{s:?} is not a number"))?;
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(format!("{v} must be a positive number"))
    }
}

fn parse_format(s: &str) -> Result<SignalFormat, String> {
    s.parse().map_err(|e: biozip::Error| e.to_string())
}

fn parse_transform(s: &str) -> Result<TransformKind, String> {
    s.parse().map_err(|e: biozip::Error| e.to_string())
}

fn parse_codec(s: &str) -> Result<CodecKind, String> {
    s.parse().map_err(|e: biozip::Error| e.to_string())
}

/// `.csv`/`.txt` files are text, everything else raw binary64.
fn infer_format(path: &Path, explicit: Option<SignalFormat>) -> SignalFormat {
    explicit.unwrap_or_else(|| match path.extension().and_then(|e| e.to_str()) {
        Some(ext) if ext.eq_ignore_ascii_case("csv") || ext.eq_ignore_ascii_case("txt") => {
            SignalFormat::Csv
        }
        _ => SignalFormat::Raw,
    })
}

type CmdResult = Result<(), Box<dyn std::error::Error>>;

fn write_file(path: &Path, bytes: &[u8]) -> CmdResult {
    fs::write(path, bytes).map_err(|e| format!("io error on {}: {e}", path.display()).into())
}

fn print_json(value: &impl serde::Serialize) -> CmdResult {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn run(command: Command) -> CmdResult {
    match command {
        Command::Gen {
            duration,
            rate,
            seed,
            output,
            format,
        } => {
            let signal = synth_eeg(duration, rate, seed)?;
            write_signal(&signal, &output, infer_format(&output, format))?;
        }
        Command::Compress {
            input,
            output,
            pipeline,
            thr,
            segmentation,
            input_opts,
            report,
        } => {
            let signal = read_signal(
                &input,
                infer_format(&input, input_opts.format),
                input_opts.rate,
            )?;
            let config = PipelineConfig::new(pipeline.transform, pipeline.codec, thr)?
                .with_levels(pipeline.levels)
                .with_segmentation(segmentation.resolve());
            let outcome = evaluate(&signal, &config)?;
            write_file(&output, &outcome.bytes)?;
            if let Some(path) = report {
                write_file(
                    &path,
                    serde_json::to_string_pretty(&outcome.report)?.as_bytes(),
                )?;
            }
            print_json(&outcome.report)?;
        }
        Command::Decompress {
            input,
            output,
            format,
        } => {
            let bytes =
                fs::read(&input).map_err(|e| format!("io error on {}: {e}", input.display()))?;
            let file = deserialize(&bytes)?;
            let (signal, timings) = decompress(&file)?;
            write_signal(&signal, &output, infer_format(&output, format))?;
            let (_, t_reconst, _) = biozip::metrics::total_time(&timings);
            print_json(&serde_json::json!({
                "t_ilossless": timings.t_ilossless,
                "t_ilossy": timings.t_ilossy,
                "t_reconst": t_reconst,
                "samples": signal.len(),
            }))?;
        }
        Command::Sweep {
            input,
            input_opts,
            seed,
            duration,
            transform,
            codec,
            levels,
            thr,
            thr_min,
            thr_max,
            points,
            linear,
            segments,
            ts,
            report,
        } => {
            let signal = match &input {
                Some(path) => {
                    read_signal(path, infer_format(path, input_opts.format), input_opts.rate)?
                }
                None => synth_eeg(duration, input_opts.rate, seed)?,
            };
            let thresholds = if !thr.is_empty() {
                thr
            } else if linear {
                bench::linear_spaced(thr_min, thr_max, points)?
            } else {
                bench::log_spaced(thr_min, thr_max, points)?
            };
            let segment_counts =
                match (ts, segments.is_empty()) {
                    (Some(ts), _) => vec![Segmentation::SamplingTime(ts)
                        .resolve(signal.sample_rate(), signal.len())?],
                    (None, true) => vec![1],
                    (None, false) => segments,
                };
            let configs = SweepConfig::all(levels)
                .into_iter()
                .filter(|c| transform.is_none_or(|t| t == c.transform))
                .filter(|c| codec.is_none_or(|k| k == c.codec))
                .collect();
            let spec = SweepSpec {
                thresholds,
                segment_counts,
                configs,
            };
            let rows = bench::run_sweep(&signal, &spec)?;
            match report {
                Some(path) => {
                    let file = fs::File::create(&path)
                        .map_err(|e| format!("io error on {}: {e}", path.display()))?;
                    bench::write_csv(&rows, file)?;
                }
                None => bench::write_csv(&rows, io::stdout().lock())?,
            }
        }
    }
    Ok(())
}

/// Collapses a possibly multi-line message onto its first non-empty line.
fn one_line(msg: &str) -> &str {
    msg.lines()
        .map(str::trim)
        .find(|l| !l.is_empty())
        .unwrap_or("error")
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help / --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprintln!("{}", one_line(&e.render().to_string()));
            return ExitCode::from(2);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", one_line(&e.to_string()));
            ExitCode::from(1)
        }
    }
}
