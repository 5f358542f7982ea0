//! Command-line interface: `detect`, `evaluate`, `generate` and `dump-stages`.
//!
//! Exit status is 0 on success, 2 for input/output problems and 3 for
//! pipeline failures. Failures also produce a JSON object
//! `{"error": kind, "message": text, "exit_code": n}` on stderr and, when an
//! output directory is known, in `error.json` there.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::config::{PipelineConfig, SurfaceMode};
use crate::error::{Error, Result};
use crate::evaluation::{evaluate_dataset, EvalReport};
use crate::image::{extract_channels, IntensityImage};
use crate::io::{encode_gray8, encode_labels16, load_channel, load_image, write_atomic, LoadedImage};
use crate::level_select::MinimaxResult;
use crate::pipeline::{run_method, Method, PipelineRun};
use crate::render::{colour_labels, cost_plot, overlay};
use crate::synthetic::{generate_suite, write_suite, Suite};

#[derive(Debug, Parser)]
#[command(name = "oslo", version, about = "Detect, count and segment cells in two-channel fluorescence images")]
pub struct Cli {
    /// Worker threads for dataset commands; 0 uses every core.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Detect and segment cells in one image.
    Detect(DetectArgs),
    /// Score methods on a dataset manifest.
    Evaluate(EvaluateArgs),
    /// Write a synthetic suite with ground truth and a manifest.
    Generate(GenerateArgs),
    /// Write every intermediate map of one run as PNG.
    DumpStages(DumpArgs),
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// RGB image whose green channel holds the body stain and whose grey
    /// component holds the nuclear stain.
    #[arg(long, conflicts_with_all = ["green", "white"], required_unless_present = "green")]
    pub combined: Option<PathBuf>,
    #[arg(long, requires = "white")]
    pub green: Option<PathBuf>,
    #[arg(long, requires = "green")]
    pub white: Option<PathBuf>,
}

impl InputArgs {
    pub fn load(&self) -> Result<(IntensityImage, IntensityImage)> {
        if let Some(path) = &self.combined {
            return match load_image(path)? {
                LoadedImage::Color(c) => Ok(extract_channels(&c)),
                LoadedImage::Gray(_) => Err(Error::InvalidArgument(format!(
                    "{} is grayscale; pass --green and --white instead",
                    path.display()
                ))),
            };
        }
        match (&self.green, &self.white) {
            (Some(g), Some(w)) => {
                let green = load_channel(g)?;
                let white = load_channel(w)?;
                crate::error::check_dims(green.dims(), white.dims())?;
                Ok((green, white))
            }
            _ => Err(Error::InvalidArgument("need --combined or --green with --white".into())),
        }
    }
}

/// A config file plus per-key overrides; flags win over the file.
#[derive(Debug, Clone, Default, Args)]
pub struct ConfigArgs {
    /// Flat `key = value` settings file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub blur_radius: Option<usize>,
    #[arg(long)]
    pub canny_blur_radius: Option<usize>,
    #[arg(long)]
    pub canny_low: Option<f64>,
    #[arg(long)]
    pub canny_high: Option<f64>,
    #[arg(long)]
    pub level_grid: Option<usize>,
    #[arg(long)]
    pub lambda_grid: Option<usize>,
    #[arg(long)]
    pub min_region_area: Option<usize>,
    /// distance | gradient
    #[arg(long)]
    pub watershed_surface: Option<String>,
    #[arg(long)]
    pub match_radius: Option<f64>,
    /// Fixes the weight instead of choosing it by minimax.
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub bradley_window: Option<usize>,
    #[arg(long)]
    pub bradley_sensitivity: Option<f64>,
}

impl ConfigArgs {
    pub fn resolve(&self) -> Result<PipelineConfig> {
        let mut cfg = match &self.config {
            Some(p) => PipelineConfig::from_file(p)?,
            None => PipelineConfig::default(),
        };
        macro_rules! take {
            ($($f:ident),*) => { $( if let Some(v) = self.$f { cfg.$f = v; } )* };
        }
        take!(blur_radius, canny_blur_radius, canny_low, canny_high, level_grid, lambda_grid, min_region_area, match_radius, bradley_sensitivity);
        if let Some(s) = &self.watershed_surface {
            cfg.watershed_surface = s.parse::<SurfaceMode>()?;
        }
        if self.lambda.is_some() {
            cfg.lambda = self.lambda;
        }
        if self.bradley_window.is_some() {
            cfg.bradley_window = self.bradley_window;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
pub struct DetectArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub out: PathBuf,
    /// oslo | otsu | canny | bradley
    #[arg(long, default_value = "oslo")]
    pub method: String,
    #[command(flatten)]
    pub cfg: ConfigArgs,
    /// Adds per-stage wall-clock times to summary.json.
    #[arg(long)]
    pub timings: bool,
    /// Also write regions.csv with one row per segment.
    #[arg(long)]
    pub regions_csv: bool,
    /// Also write diagnostics.json with the full ratio table and cost curves.
    #[arg(long)]
    pub diagnostics: bool,
    /// Also write cost_curves.png.
    #[arg(long)]
    pub plot: bool,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// CSV `image_id,green_path,white_path,truth_path`.
    #[arg(long)]
    pub manifest: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Comma-separated: oslo, otsu, canny, bradley, or all.
    #[arg(long, default_value = "all", value_delimiter = ',')]
    pub methods: Vec<String>,
    #[command(flatten)]
    pub cfg: ConfigArgs,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// easy | hard
    #[arg(long)]
    pub suite: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = Suite::SIZE)]
    pub count: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct DumpArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value = "oslo")]
    pub method: String,
    #[command(flatten)]
    pub cfg: ConfigArgs,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let out_dir = match &cli.command {
        Command::Detect(a) => Some(a.out.clone()),
        Command::Evaluate(a) => Some(a.out.clone()),
        Command::Generate(a) => Some(a.out.clone()),
        Command::DumpStages(a) => Some(a.out.clone()),
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build() {
        Ok(p) => p,
        Err(e) => return fail(&Error::InvalidArgument(e.to_string()), None),
    };
    match pool.install(|| dispatch(&cli.command)) {
        Ok(code) => code,
        Err(e) => fail(&e, out_dir.as_deref()),
    }
}

fn dispatch(cmd: &Command) -> Result<i32> {
    match cmd {
        Command::Detect(a) => cmd_detect(a).map(|_| 0),
        Command::Evaluate(a) => cmd_evaluate(a),
        Command::Generate(a) => cmd_generate(a).map(|_| 0),
        Command::DumpStages(a) => cmd_dump_stages(a).map(|_| 0),
    }
}

fn fail(err: &Error, out_dir: Option<&Path>) -> i32 {
    let code = err.exit_code();
    let body = json!({ "error": err.kind(), "message": err.to_string(), "exit_code": code });
    let text = serde_json::to_string_pretty(&body).expect("json");
    eprintln!("{text}");
    if let Some(dir) = out_dir {
        if std::fs::create_dir_all(dir).is_ok() {
            let _ = write_atomic(dir.join("error.json"), text.as_bytes());
        }
    }
    code
}

fn create_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::Io {
        path: dir.to_owned(),
        source: e,
    })
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

#[derive(Serialize)]
struct Summary<'a> {
    method: Method,
    width: usize,
    height: usize,
    count: usize,
    lambda_star: Option<f64>,
    l_g: Option<f64>,
    e_star: Option<f64>,
    r_uwi: Option<f64>,
    m_count: usize,
    config: &'a PipelineConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    timings_ms: Option<serde_json::Map<String, serde_json::Value>>,
}

fn summary<'a>(run: &PipelineRun, cfg: &'a PipelineConfig, timings: bool) -> Summary<'a> {
    let sel: Option<&MinimaxResult> = run.selection.as_ref();
    Summary {
        method: run.method,
        width: run.result.width,
        height: run.result.height,
        count: run.result.count,
        lambda_star: sel.map(|s| s.lambda_star),
        l_g: sel.map(|s| s.l_g),
        e_star: sel.map(|s| s.e_star),
        r_uwi: run.r_uwi,
        m_count: run.m_count,
        config: cfg,
        timings_ms: timings.then(|| run.timings.iter().map(|&(k, v)| (k.to_owned(), json!(v))).collect()),
    }
}

fn detections_csv(run: &PipelineRun) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["id", "centroid_x", "centroid_y", "marker_area", "r_wi"]).expect("in-memory csv");
    for d in &run.result.detections {
        w.write_record([
            d.id.to_string(),
            format!("{:.3}", d.nucleus_centroid.0),
            format!("{:.3}", d.nucleus_centroid.1),
            d.marker_area.to_string(),
            format!("{:.6}", d.r_wi),
        ])
        .expect("in-memory csv");
    }
    w.into_inner().expect("in-memory csv")
}

/// One row per watershed segment: label, area and centroid.
fn regions_csv(run: &PipelineRun) -> Vec<u8> {
    let r = &run.result;
    let n = r.detections.iter().map(|d| d.id).max().unwrap_or(0) as usize;
    let mut acc = vec![(0usize, 0.0f64, 0.0f64); n + 1];
    for (i, &l) in r.label_map.iter().enumerate() {
        if l != 0 {
            let a = &mut acc[l as usize];
            a.0 += 1;
            a.1 += (i % r.width) as f64;
            a.2 += (i / r.width) as f64;
        }
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["label", "area", "x", "y"]).expect("in-memory csv");
    for (l, &(area, sx, sy)) in acc.iter().enumerate().skip(1) {
        if area > 0 {
            w.write_record([
                l.to_string(),
                area.to_string(),
                format!("{:.3}", sx / area as f64),
                format!("{:.3}", sy / area as f64),
            ])
            .expect("in-memory csv");
        }
    }
    w.into_inner().expect("in-memory csv")
}

/// Runs one method and writes `labels.png`, `overlay.png`, `detections.csv`
/// and `summary.json`, plus the optional extras.
pub fn cmd_detect(a: &DetectArgs) -> Result<PipelineRun> {
    let cfg = a.cfg.resolve()?;
    let method: Method = a.method.parse()?;
    let (green, white) = a.input.load()?;
    create_dir(&a.out)?;
    let run = run_method(&green, &white, &cfg, method)?;
    let (w, h) = green.dims();
    write_atomic(a.out.join("labels.png"), &encode_labels16(w, h, &run.result.label_map))?;
    write_atomic(a.out.join("overlay.png"), &overlay(&green, &white, &run.result)?.to_png())?;
    write_atomic(a.out.join("detections.csv"), &detections_csv(&run))?;
    write_json(&a.out.join("summary.json"), &summary(&run, &cfg, a.timings))?;
    if a.regions_csv {
        write_atomic(a.out.join("regions.csv"), &regions_csv(&run))?;
    }
    if a.diagnostics {
        let diag = json!({
            "ratio_table": run.table.as_ref().map(|t| &t.rows),
            "e_star_curve": run.selection.as_ref().map(|s| s.e_star_curve()),
            "r_uwi": run.r_uwi,
            "detections": run.result.detections.iter().map(|d| json!({
                "id": d.id, "x": d.nucleus_centroid.0, "y": d.nucleus_centroid.1, "r_wi": d.r_wi,
            })).collect::<Vec<_>>(),
        });
        write_json(&a.out.join("diagnostics.json"), &diag)?;
    }
    if a.plot {
        if let Some(sel) = &run.selection {
            write_atomic(a.out.join("cost_curves.png"), &cost_plot(sel, 800, 300).to_png())?;
        }
    }
    Ok(run)
}

fn parse_methods(raw: &[String]) -> Result<Vec<Method>> {
    let mut out = Vec::new();
    for m in raw {
        if m == "all" {
            out.extend(Method::ALL);
        } else {
            out.push(m.parse()?);
        }
    }
    out.sort();
    out.dedup();
    if out.is_empty() {
        return Err(Error::InvalidArgument("no methods selected".into()));
    }
    let order = |m: &Method| Method::ALL.iter().position(|x| x == m);
    out.sort_by_key(order);
    Ok(out)
}

/// Writes `report.csv`, `report.json` and `report.txt`, and prints the table.
/// Returns a nonzero status only when no image could be scored.
pub fn cmd_evaluate(a: &EvaluateArgs) -> Result<i32> {
    let cfg = a.cfg.resolve()?;
    let methods = parse_methods(&a.methods)?;
    let report = evaluate_dataset(&a.manifest, &methods, &cfg)?;
    create_dir(&a.out)?;
    write_report(&a.out, &report)?;
    print!("{}", report.to_table());
    if report.scored_images() == 0 {
        let io_only = report.failures.iter().all(|f| is_io_kind(&f.kind));
        let code = if io_only { 2 } else { 3 };
        let body = json!({
            "error": "all_images_failed",
            "message": format!("{} failures, no image scored", report.failures.len()),
            "exit_code": code,
        });
        let text = serde_json::to_string_pretty(&body).expect("json");
        eprintln!("{text}");
        write_atomic(a.out.join("error.json"), text.as_bytes())?;
        return Ok(code);
    }
    Ok(0)
}

fn is_io_kind(kind: &str) -> bool {
    matches!(
        kind,
        "io" | "decode"
            | "unsupported_format"
            | "zero_area"
            | "malformed_input"
            | "dimension_mismatch"
            | "invalid_argument"
    )
}

pub fn write_report(dir: &Path, report: &EvalReport) -> Result<()> {
    write_atomic(dir.join("report.csv"), &report.to_csv())?;
    write_atomic(dir.join("report.json"), report.to_json().as_bytes())?;
    write_atomic(dir.join("report.txt"), report.to_table().as_bytes())
}

pub fn cmd_generate(a: &GenerateArgs) -> Result<()> {
    let suite: Suite = a.suite.parse()?;
    let samples = generate_suite(suite, a.seed, a.count)?;
    write_suite(&a.out, &samples)
}

/// Writes `s_w.png`, `s_g.png`, `b_w.png`, `b_g.png`, `b_c.png`,
/// `markers.png`, `labels.png` and, for OSLO, `cost_curves.png` and
/// `cost_curves.csv`.
pub fn cmd_dump_stages(a: &DumpArgs) -> Result<()> {
    let cfg = a.cfg.resolve()?;
    let method: Method = a.method.parse()?;
    let (green, white) = a.input.load()?;
    create_dir(&a.out)?;
    let run = run_method(&green, &white, &cfg, method)?;
    let st = &run.stages;
    let (w, h) = green.dims();
    let gray = |name: &str, values: &[f64]| write_atomic(a.out.join(name), &encode_gray8(w, h, values));
    gray("s_w.png", st.s_w.values())?;
    gray("s_g.png", st.s_g.values())?;
    gray("b_w.png", st.b_w.to_image().pixels())?;
    gray("b_g.png", st.b_g.to_image().pixels())?;
    gray("b_c.png", st.b_c.to_image().pixels())?;
    write_atomic(a.out.join("markers.png"), &colour_labels(w, h, st.markers.label_map()).to_png())?;
    write_atomic(a.out.join("labels.png"), &colour_labels(w, h, &run.result.label_map).to_png())?;
    if let (Some(sel), Some(table)) = (&run.selection, &run.table) {
        write_atomic(a.out.join("cost_curves.png"), &cost_plot(sel, 800, 300).to_png())?;
        let mut csv = csv::Writer::from_writer(Vec::new());
        csv.write_record(["level", "r1_mean", "r2_mean", "m_count", "cost_at_lambda_star"])
            .expect("in-memory csv");
        for r in &table.rows {
            csv.write_record([
                format!("{:.6}", r.level),
                r.r1_mean.to_string(),
                r.r2_mean.to_string(),
                r.m_count.to_string(),
                r.cost(sel.lambda_star).to_string(),
            ])
            .expect("in-memory csv");
        }
        write_atomic(a.out.join("cost_curves.csv"), &csv.into_inner().expect("in-memory csv"))?;
    }
    Ok(())
}
