use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use blindspot::alert::Placement;
use blindspot::config::ConfigError;
use blindspot::dataset::AugmentationParams;
use blindspot::pipeline::{
    eval_reports, report_dir, run_augment, run_eval, run_pipeline, run_reports, run_scenario, run_summarize,
    PipelineConfig, PipelineError, Reports, Source,
};
use blindspot::scenario::ScenarioConfig;

/// Cyclist blind-spot detection: pipeline, evaluation and dataset tools.
#[derive(Debug, Parser)]
#[command(name = "blindspot", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a replay or live source through detection, NMS and alerting.
    Run(RunArgs),
    /// Score a detections file against a VOC ground-truth directory.
    Eval(EvalArgs),
    /// Closed loop: synthesize a track, replay it through the pipeline, score it.
    Scenario(ScenarioArgs),
    /// Dataset statistics of a VOC directory.
    Summarize(SummarizeArgs),
    /// Triple a VOC dataset with seeded augmentation.
    Augment(AugmentArgs),
}

#[derive(Debug, Args)]
struct PipelineFlags {
    /// Pipeline configuration (TOML).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Camera placement: A, B or C.
    #[arg(long)]
    placement: Option<String>,
    #[arg(long = "score-thresh")]
    score_thresh: Option<f64>,
    #[arg(long = "nms-thresh")]
    nms_thresh: Option<f64>,
    /// Directory for report files; reports go to stdout when absent.
    #[arg(long = "report-dir")]
    report_dir: Option<PathBuf>,
    /// Also write wall-clock timing reports (not reproducible run to run).
    #[arg(long)]
    timing: bool,
}

#[derive(Debug, Args)]
struct RunArgs {
    #[command(flatten)]
    pipeline: PipelineFlags,
    /// Replay file; overrides the configured source.
    #[arg(long)]
    replay: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EvalArgs {
    /// VOC ground-truth directory.
    #[arg(long = "gt-dir")]
    gt_dir: PathBuf,
    /// Detections file: image_id, x_min, y_min, x_max, y_max, score per line.
    #[arg(long)]
    detections: PathBuf,
    #[arg(long = "report-dir")]
    report_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ScenarioArgs {
    #[command(flatten)]
    pipeline: PipelineFlags,
    /// Scenario configuration (TOML); defaults when absent.
    #[arg(long)]
    scenario: Option<PathBuf>,
    /// Noise seed; overrides the scenario file.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Args)]
struct SummarizeArgs {
    #[arg(long = "voc-dir")]
    voc_dir: PathBuf,
    /// Heatmap cells per side.
    #[arg(long, default_value_t = 10)]
    grid: usize,
    #[arg(long = "report-dir")]
    report_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct AugmentArgs {
    #[arg(long = "voc-dir")]
    voc_dir: PathBuf,
    /// Where the images live; defaults to the annotation directory.
    #[arg(long = "image-dir")]
    image_dir: Option<PathBuf>,
    /// Split off a test set first, keeping this fraction for training.
    #[arg(long)]
    split: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory for the augmented dataset and its manifest.
    #[arg(long = "report-dir")]
    report_dir: Option<PathBuf>,
}

fn pipeline_config(flags: &PipelineFlags) -> Result<PipelineConfig, ConfigError> {
    let mut cfg = match &flags.config {
        Some(p) => blindspot::config::load_toml(p)?,
        None => PipelineConfig::default(),
    };
    if let Some(p) = &flags.placement {
        cfg.placement = p.parse::<Placement>()?;
    }
    if let Some(v) = flags.score_thresh {
        cfg.score_threshold = v;
    }
    if let Some(v) = flags.nms_thresh {
        cfg.nms_threshold = v;
    }
    Ok(cfg)
}

fn emit(reports: &Reports, dir: Option<&Path>, stdout_file: &str) -> Result<(), PipelineError> {
    if let Some(text) = reports.get(stdout_file) {
        print!("{}", String::from_utf8_lossy(text));
    }
    match dir {
        Some(d) => reports.write(d),
        None => Ok(()),
    }
}

fn run(cli: Cli) -> Result<ExitCode, PipelineError> {
    match cli.command {
        Command::Run(args) => {
            let mut cfg = pipeline_config(&args.pipeline)?;
            if let Some(r) = args.replay {
                cfg.source = Some(Source::Replay(r));
            }
            let summary = run_pipeline(&cfg)?;
            let dir = report_dir(args.pipeline.report_dir, &cfg);
            emit(&run_reports(&summary, args.pipeline.timing), dir.as_deref(), "summary.txt")?;
            Ok(if summary.backend_failure.is_some() { ExitCode::from(3) } else { ExitCode::SUCCESS })
        }
        Command::Eval(args) => {
            let metrics = run_eval(&args.gt_dir, &args.detections)?;
            emit(&eval_reports(&metrics), args.report_dir.as_deref(), "metrics.txt")?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Scenario(args) => {
            let cfg = pipeline_config(&args.pipeline)?;
            let mut scenario = match &args.scenario {
                Some(p) => ScenarioConfig::load(p)?,
                None => ScenarioConfig::default(),
            };
            if let Some(s) = args.seed {
                scenario.seed = s;
            }
            let outcome = run_scenario(&scenario, &cfg)?;
            let dir = report_dir(args.pipeline.report_dir, &cfg);
            emit(&outcome.reports(&cfg, args.pipeline.timing), dir.as_deref(), "scenario.txt")?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Summarize(args) => {
            let (_, reports) = run_summarize(&args.voc_dir, args.grid)?;
            emit(&reports, args.report_dir.as_deref(), "summary.txt")?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Augment(args) => {
            let out = run_augment(
                &args.voc_dir,
                args.image_dir.as_deref(),
                &AugmentationParams::default(),
                args.split,
                args.seed,
            )?;
            let manifest = out.reports.get("augment.txt").unwrap_or_default();
            match &args.report_dir {
                Some(d) => out.reports.write(d)?,
                None => log::warn!("no --report-dir given; augmented images were not written"),
            }
            print!("{}", String::from_utf8_lossy(manifest).lines().take(5).collect::<Vec<_>>().join("\n") + "\n");
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("BLINDSPOT_LOG", "error")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
