//! Orchestration behind the command-line tool: the live/replay pipeline,
//! evaluation, the closed-loop scenario and the dataset commands.

mod config;
mod run;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Duration;

use thiserror::Error;

pub use config::{PipelineConfig, Source};
pub use run::{run_stream, EventRecord, FrameOutput, RunSummary, QUEUE_DEPTH};

use crate::alert::{AlertSink, CommandSink, LogSink};
use crate::backend::{open_live, BackendError, ReplayBackend, ReplayTable};
use crate::config::ConfigError;
use crate::dataset::{
    load_images, load_voc_dir, split_dataset, summarize, triple_dataset, AugmentationParams, DatasetError,
    DatasetSummary, ImageAnnotation,
};
use crate::eval::{coco_map, format_detections, join_detections, parse_detections, DetectionRecord, ImageEval, MetricsBundle};
use crate::scenario::{export_replay, frame_image_id, generate_track, ScenarioConfig, SyntheticTrack};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Backend(#[from] BackendError),
    #[error("cannot write {path}: {source}")]
    Write { path: String, source: std::io::Error },
}

impl PipelineError {
    /// 2 for configuration and input problems, 3 for backend failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Backend(_) => 3,
            _ => 2,
        }
    }

    fn input(context: impl std::fmt::Display, err: impl std::fmt::Display) -> Self {
        PipelineError::Input(format!("{context}: {err}"))
    }
}

impl From<DatasetError> for PipelineError {
    fn from(e: DatasetError) -> Self {
        PipelineError::Input(e.to_string())
    }
}

/// Named report files produced by a command.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Reports(pub Vec<(String, Vec<u8>)>);

impl Reports {
    pub fn add(&mut self, name: impl Into<String>, content: impl Into<Vec<u8>>) {
        self.0.push((name.into(), content.into()));
    }

    pub fn get(&self, name: &str) -> Option<&[u8]> {
        self.0.iter().find(|(n, _)| n == name).map(|(_, c)| c.as_slice())
    }

    /// Writes every file under `dir`, creating directories as needed.
    pub fn write(&self, dir: &Path) -> Result<(), PipelineError> {
        for (name, content) in &self.0 {
            let path = dir.join(name);
            let wrap = |source| PipelineError::Write { path: path.display().to_string(), source };
            if let Some(parent) = path.parent() {
                std::fs::create_dir_all(parent).map_err(wrap)?;
            }
            std::fs::write(&path, content).map_err(wrap)?;
        }
        Ok(())
    }
}

fn default_sinks(cfg: &PipelineConfig) -> Vec<Box<dyn AlertSink>> {
    let mut sinks: Vec<Box<dyn AlertSink>> = vec![Box::new(LogSink)];
    if let Some(c) = cfg.sound_command.as_deref().and_then(CommandSink::parse) {
        sinks.push(Box::new(c));
    }
    sinks
}

fn frame_detection_records(outputs: &[FrameOutput]) -> Vec<DetectionRecord> {
    outputs
        .iter()
        .flat_map(|o| o.detections.iter().map(move |d| DetectionRecord { image_id: frame_image_id(o.frame_id), detection: *d }))
        .collect()
}

fn summary_reports(summary: &RunSummary, timing: bool) -> Reports {
    let mut r = Reports::default();
    r.add("summary.txt", summary.report());
    r.add("alerts.csv", summary.event_log());
    r.add("detections.csv", format_detections(&frame_detection_records(&summary.outputs)));
    if timing {
        r.add("timing.txt", summary.timing.report());
        r.add("latency.csv", summary.timing.per_frame_csv());
    }
    r
}

/// Runs the configured source through the pipeline.
pub fn run_pipeline(cfg: &PipelineConfig) -> Result<RunSummary, PipelineError> {
    cfg.validate()?;
    let zone = cfg.zone()?;
    let mut sinks = default_sinks(cfg);
    match &cfg.source {
        None => Err(ConfigError::invalid("source", "no replay file or live adapter configured").into()),
        Some(Source::Live(id)) => {
            let backend = open_live(id)?;
            // a live stream has no natural end; the adapter reports end of stream
            Ok(run_stream(cfg, &zone, backend, u64::MAX, &mut sinks))
        }
        Some(Source::Replay(path)) => {
            let table = ReplayTable::load(path).map_err(|e| PipelineError::Input(e.to_string()))?;
            let frames = table.stream_len();
            let backend =
                ReplayBackend::new(table).with_delay(Duration::from_secs_f64(cfg.replay_delay_ms / 1e3));
            Ok(run_stream(cfg, &zone, backend, frames, &mut sinks))
        }
    }
}

/// Reports of a `run` invocation.
pub fn run_reports(summary: &RunSummary, timing: bool) -> Reports {
    summary_reports(summary, timing)
}

/// Evaluates a detections file against a VOC ground-truth directory.
pub fn run_eval(gt_dir: &Path, det_file: &Path) -> Result<MetricsBundle, PipelineError> {
    let gt = load_voc_dir(gt_dir).map_err(|e| PipelineError::input(gt_dir.display(), e))?;
    let text = std::fs::read_to_string(det_file).map_err(|e| PipelineError::input(det_file.display(), e))?;
    let records = parse_detections(&text).map_err(|e| PipelineError::input(det_file.display(), e))?;
    let images = join_detections(&gt, &records).map_err(|e| PipelineError::input(det_file.display(), e))?;
    Ok(coco_map(&images))
}

pub fn eval_reports(metrics: &MetricsBundle) -> Reports {
    let mut r = Reports::default();
    r.add("metrics.txt", metrics.report());
    for (name, csv) in metrics.pr_curve_csvs() {
        r.add(name, csv);
    }
    r
}

#[derive(Debug, Clone)]
pub struct ScenarioOutcome {
    pub track: SyntheticTrack,
    pub replay: ReplayTable,
    pub summary: RunSummary,
    pub metrics: MetricsBundle,
}

impl ScenarioOutcome {
    pub fn reports(&self, pipeline: &PipelineConfig, timing: bool) -> Reports {
        let p = pipeline.placement;
        let mut r = summary_reports(&self.summary, timing);
        let mut combined = String::new();
        let _ = writeln!(combined, "placement={p}");
        combined.push_str(&self.summary.report());
        combined.push_str(&self.metrics.report());
        r.add("scenario.txt", combined);
        r.add("replay.csv", self.replay.dump());
        for a in self.track.annotations(p) {
            r.add(format!("ground_truth/{}.xml", a.image_id), crate::dataset::serialize_voc(&a));
        }
        for (name, csv) in self.metrics.pr_curve_csvs() {
            r.add(name, csv);
        }
        r
    }
}

/// Generates the track, exports it as replay detections, runs the pipeline on
/// them and scores the pipeline output against the track's ground truth.
pub fn run_scenario(scenario: &ScenarioConfig, pipeline: &PipelineConfig) -> Result<ScenarioOutcome, PipelineError> {
    scenario.validate()?;
    // the scenario dictates the stream geometry
    let cfg = PipelineConfig {
        frame_rate: scenario.frame_rate,
        frame_width: scenario.image_width,
        frame_height: scenario.image_height,
        ..pipeline.clone()
    };
    cfg.validate()?;
    let zone = cfg.zone()?;
    let track = generate_track(scenario)?;
    let replay = export_replay(&track, cfg.placement, &scenario.noise, scenario.seed);
    let backend = ReplayBackend::new(replay.clone()).with_delay(Duration::from_secs_f64(cfg.replay_delay_ms / 1e3));
    let mut sinks = default_sinks(&cfg);
    let summary = run_stream(&cfg, &zone, backend, track.frame_count(), &mut sinks);
    if let Some(e) = &summary.backend_failure {
        return Err(PipelineError::Backend(e.clone()));
    }
    let truth = track.annotations(cfg.placement);
    let images: Vec<ImageEval> = truth
        .iter()
        .zip(&summary.outputs)
        .map(|(gt, out)| ImageEval { image_id: gt.image_id.clone(), detections: out.detections.clone(), ground_truth: gt.boxes.clone() })
        .collect();
    let metrics = coco_map(&images);
    Ok(ScenarioOutcome { track, replay, summary, metrics })
}

/// Dataset statistics of a VOC directory.
pub fn run_summarize(voc_dir: &Path, grid: usize) -> Result<(DatasetSummary, Reports), PipelineError> {
    let items = load_voc_dir(voc_dir).map_err(|e| PipelineError::input(voc_dir.display(), e))?;
    let s = summarize(&items, grid)?;
    let mut r = Reports::default();
    r.add("summary.txt", s.report());
    r.add("heatmap.csv", s.heatmap_csv());
    r.add("histogram.csv", s.histogram_csv());
    Ok((s, r))
}

#[derive(Debug, Clone, PartialEq)]
pub struct AugmentOutcome {
    pub input_count: usize,
    pub train_count: usize,
    pub test_count: usize,
    pub output_count: usize,
    pub reports: Reports,
}

/// Optionally splits a VOC directory, then triples the training part.
/// Augmented images are written as PPM next to their annotations.
pub fn run_augment(
    voc_dir: &Path,
    image_dir: Option<&Path>,
    params: &AugmentationParams,
    split: Option<f64>,
    seed: u64,
) -> Result<AugmentOutcome, PipelineError> {
    params.validate()?;
    let items = load_voc_dir(voc_dir).map_err(|e| PipelineError::input(voc_dir.display(), e))?;
    let input_count = items.len();
    let (train, test) = match split {
        Some(f) => split_dataset(items, f, seed)?,
        None => (items, Vec::new()),
    };
    let images = load_images(image_dir.unwrap_or(voc_dir), &train)?;
    let tripled = triple_dataset(&train, &images, params, seed)?;

    let mut reports = Reports::default();
    let mut manifest = String::new();
    let _ = writeln!(manifest, "input_images={input_count}");
    let _ = writeln!(manifest, "train_images={}", train.len());
    let _ = writeln!(manifest, "test_images={}", test.len());
    let _ = writeln!(manifest, "augmented_images={}", tripled.len());
    let _ = writeln!(manifest, "seed={seed}");
    for (a, img) in &tripled {
        reports.add(format!("train/{}.xml", a.image_id), crate::dataset::serialize_voc(a));
        reports.add(format!("train/{}.ppm", a.image_id), img.to_ppm());
        let _ = writeln!(manifest, "train,{},{}", a.image_id, a.boxes.len());
    }
    if !test.is_empty() {
        let test_images = load_images(image_dir.unwrap_or(voc_dir), &test)?;
        for (a, img) in test.iter().zip(&test_images) {
            reports.add(format!("test/{}.xml", a.image_id), crate::dataset::serialize_voc(a));
            reports.add(format!("test/{}.ppm", a.image_id), img.to_ppm());
            let _ = writeln!(manifest, "test,{},{}", a.image_id, a.boxes.len());
        }
    }
    reports.add("augment.txt", manifest);
    Ok(AugmentOutcome {
        input_count,
        train_count: train.len(),
        test_count: test.len(),
        output_count: tripled.len(),
        reports,
    })
}

/// Loads an annotation directory and reports the parse into a readable error.
pub fn load_annotations(dir: &Path) -> Result<Vec<ImageAnnotation>, PipelineError> {
    load_voc_dir(dir).map_err(|e| PipelineError::input(dir.display(), e))
}

/// Resolves a report directory: the command-line flag wins over the config.
pub fn report_dir(flag: Option<PathBuf>, cfg: &PipelineConfig) -> Option<PathBuf> {
    flag.or_else(|| cfg.report_dir.clone())
}
