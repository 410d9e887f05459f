//! `uscode` command-line front end.

pub mod pipeline;

use std::ffi::OsString;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use clap::{Args, Parser, Subcommand, ValueEnum};
use uscode_core::fold::{fold_to_sections, FoldOptions};
use uscode_core::ingest::{export_canonical, generate_synthetic, parse_date, SourceFormat, SyntheticSpec, UslmConfig};
use uscode_core::metrics::DegreeMode;
use uscode_core::report::{emit_layout, layout_tree};

use pipeline::{
    analyze, prepare, read_snapshot, write_analysis, write_diff, write_table, MetricOptions, PipelineOptions,
};

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or unreadable input paths; exit status 2.
    Usage(String),
    /// A pipeline stage failed; exit status 1.
    Pipeline { module: &'static str, message: String },
}

impl CliError {
    pub fn pipeline(module: &'static str, e: impl fmt::Display) -> Self {
        CliError::Pipeline {
            module,
            message: e.to_string(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Pipeline { .. } => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Pipeline { module, message } => write!(f, "{module}: {message}"),
        }
    }
}

impl std::error::Error for CliError {}

#[derive(Debug, Parser)]
#[command(
    name = "uscode",
    version,
    about = "Structure, citation and language measurements over statutory corpus snapshots"
)]
pub struct Cli {
    /// Worker threads (default: available cores). Results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a snapshot and write it as canonical JSON.
    Ingest(IngestArgs),
    /// Full pipeline on one snapshot.
    Analyze(AnalyzeArgs),
    /// Compare two or more snapshots: histogram deltas and growth rates.
    Diff(DiffArgs),
    /// Generate a synthetic corpus as canonical JSON.
    Synth(SynthArgs),
    /// Radial tidy-tree coordinates for the folded hierarchy.
    Layout(LayoutArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FormatArg {
    UslmXml,
    CanonicalJson,
}

impl From<FormatArg> for SourceFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::UslmXml => SourceFormat::UslmXml,
            FormatArg::CanonicalJson => SourceFormat::CanonicalJson,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum DegreeModeArg {
    Total,
    In,
    Out,
}

impl From<DegreeModeArg> for DegreeMode {
    fn from(d: DegreeModeArg) -> Self {
        match d {
            DegreeModeArg::Total => DegreeMode::Total,
            DegreeModeArg::In => DegreeMode::In,
            DegreeModeArg::Out => DegreeMode::Out,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ScaleArg {
    Small,
    Code,
}

#[derive(Debug, Args)]
pub struct InputArgs {
    #[arg(long, value_enum, default_value = "canonical-json")]
    pub format: FormatArg,
    /// JSON object mapping XML element names to level names.
    #[arg(long)]
    pub level_map: Option<PathBuf>,
    /// Snapshot dates overriding those in the inputs, one per input.
    #[arg(long, value_delimiter = ',', value_parser = parse_date_arg)]
    pub dates: Vec<NaiveDate>,
}

#[derive(Debug, Args)]
pub struct PipelineArgs {
    /// Lowercase tokens.
    #[arg(long)]
    pub case_fold: bool,
    /// Fold subdivision headings into section text.
    #[arg(long)]
    pub include_headings: bool,
    /// Cite every existing section inside `sections N through M` ranges.
    #[arg(long)]
    pub expand_ranges: bool,
}

impl From<&PipelineArgs> for PipelineOptions {
    fn from(a: &PipelineArgs) -> Self {
        PipelineOptions {
            case_fold: a.case_fold,
            include_headings: a.include_headings,
            expand_ranges: a.expand_ranges,
        }
    }
}

#[derive(Debug, Args)]
pub struct MetricArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Bootstrap replicates for the power-law p-value.
    #[arg(long, default_value_t = 1000)]
    pub bootstrap: usize,
    #[arg(long, default_value_t = 0.1)]
    pub bin_width_log10: f64,
    #[arg(long, default_value_t = 0.25)]
    pub bin_width_entropy: f64,
    #[arg(long, value_enum, default_value = "total")]
    pub degree_mode: DegreeModeArg,
}

impl From<&MetricArgs> for MetricOptions {
    fn from(a: &MetricArgs) -> Self {
        MetricOptions {
            degree_mode: a.degree_mode.into(),
            bootstrap_n: a.bootstrap,
            seed: a.seed,
            bin_width_log10: a.bin_width_log10,
            bin_width_entropy: a.bin_width_entropy,
        }
    }
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    pub input: PathBuf,
    #[command(flatten)]
    pub input_args: InputArgs,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    pub input: PathBuf,
    #[command(flatten)]
    pub input_args: InputArgs,
    #[command(flatten)]
    pub pipeline: PipelineArgs,
    #[command(flatten)]
    pub metrics: MetricArgs,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct DiffArgs {
    #[arg(required = true, num_args = 2..)]
    pub inputs: Vec<PathBuf>,
    #[command(flatten)]
    pub input_args: InputArgs,
    #[command(flatten)]
    pub pipeline: PipelineArgs,
    #[command(flatten)]
    pub metrics: MetricArgs,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "small")]
    pub scale: ScaleArg,
    /// Number of titles (overrides the preset).
    #[arg(long)]
    pub titles: Option<u32>,
    /// Approximate node count after folding (overrides the preset).
    #[arg(long)]
    pub target_nodes: Option<u32>,
    #[arg(long, value_parser = parse_date_arg)]
    pub date: Option<NaiveDate>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct LayoutArgs {
    pub input: PathBuf,
    #[command(flatten)]
    pub input_args: InputArgs,
    /// Lay out every vertex instead of folding subdivisions into sections.
    #[arg(long)]
    pub unfolded: bool,
    #[arg(long)]
    pub out: PathBuf,
}

fn parse_date_arg(s: &str) -> Result<NaiveDate, String> {
    parse_date(s).map_err(|e| e.to_string())
}

fn level_map(path: Option<&Path>) -> Result<UslmConfig, CliError> {
    let Some(path) = path else {
        return Ok(UslmConfig::default());
    };
    let bytes = fs::read(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    UslmConfig::from_json(&bytes).map_err(|e| CliError::pipeline("ingest", e))
}

fn dates_for(args: &InputArgs, inputs: usize) -> Result<Vec<Option<NaiveDate>>, CliError> {
    match args.dates.len() {
        0 => Ok(vec![None; inputs]),
        n if n == inputs => Ok(args.dates.iter().copied().map(Some).collect()),
        n => Err(CliError::Usage(format!("--dates has {n} entries for {inputs} inputs"))),
    }
}

fn single_input(path: &Path, args: &InputArgs) -> Result<uscode_core::CodeGraph, CliError> {
    let config = level_map(args.level_map.as_deref())?;
    let date = dates_for(args, 1)?[0];
    read_snapshot(path, args.format.into(), date, &config)
}

fn check_bins(m: &MetricArgs) -> Result<(), CliError> {
    for (flag, w) in [
        ("--bin-width-log10", m.bin_width_log10),
        ("--bin-width-entropy", m.bin_width_entropy),
    ] {
        if !(w > 0.0 && w.is_finite()) {
            return Err(CliError::Usage(format!("{flag} must be positive, got {w}")));
        }
    }
    Ok(())
}

pub fn execute(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Ingest(a) => {
            let g = single_input(&a.input, &a.input_args)?;
            write_file(&a.out, "canonical.json", &export_canonical(&g))
        }
        Command::Analyze(a) => {
            check_bins(&a.metrics)?;
            let g = single_input(&a.input, &a.input_args)?;
            let p = prepare(g, (&a.pipeline).into())?;
            let m = (&a.metrics).into();
            let analysis = analyze(&p, m, true)?;
            write_analysis(&a.out, &p, &analysis, m)
        }
        Command::Diff(a) => {
            check_bins(&a.metrics)?;
            let config = level_map(a.input_args.level_map.as_deref())?;
            let dates = dates_for(&a.input_args, a.inputs.len())?;
            let m: MetricOptions = (&a.metrics).into();
            let mut snapshots = Vec::new();
            for (path, date) in a.inputs.iter().zip(dates) {
                let g = read_snapshot(path, a.input_args.format.into(), date, &config)?;
                let p = prepare(g, (&a.pipeline).into())?;
                let analysis = analyze(&p, m, false)?;
                snapshots.push((p, analysis));
            }
            write_diff(&a.out, snapshots)
        }
        Command::Synth(a) => {
            let mut spec = match a.scale {
                ScaleArg::Small => SyntheticSpec::small(a.seed),
                ScaleArg::Code => SyntheticSpec::code_scale(a.seed),
            };
            if let Some(t) = a.titles {
                spec.title_count = t;
            }
            if a.target_nodes.is_some() {
                spec.target_nodes = a.target_nodes;
            }
            if let Some(d) = a.date {
                spec.snapshot_date = d;
            }
            let g = generate_synthetic(&spec).map_err(|e| CliError::pipeline("ingest", e))?;
            write_file(&a.out, "synthetic.json", &export_canonical(&g))
        }
        Command::Layout(a) => {
            let g = single_input(&a.input, &a.input_args)?;
            let g = if a.unfolded {
                g
            } else {
                fold_to_sections(&g, FoldOptions::default())
                    .map_err(|e| CliError::pipeline("fold", e))?
                    .graph
            };
            write_table(&a.out, "layout", &emit_layout(&layout_tree(&g)))
        }
    }
}

fn write_file(dir: &Path, name: &str, bytes: &[u8]) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::pipeline("report", format!("{}: {e}", dir.display()));
    fs::create_dir_all(dir).map_err(io)?;
    fs::write(dir.join(name), bytes).map_err(io)
}

/// Parses `args`, runs the command and returns the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("usage error: --threads must be at least 1");
            return 2;
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("usage error: cannot size thread pool: {e}");
            return 2;
        }
    }
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("uscode: {e}");
            e.exit_code()
        }
    }
}
