//! Detection scoring against ground truth, and multi-method reports.
//!
//! Predictions and truths are matched one-to-one by centroid distance:
//! all pairs within the radius are visited nearest first and a pair is taken
//! when neither end is matched yet.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::PipelineConfig;
use crate::error::{Error, Result};
use crate::image::{extract_channels, IntensityImage};
use crate::io::{load_channel, load_image, load_labels, LoadedImage};
use crate::pipeline::{run_method, Method};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TruthCell {
    pub centroid: (f64, f64),
    /// Label in the source mask, when truth came from a label image.
    pub label: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GroundTruth {
    pub image_id: String,
    pub cells: Vec<TruthCell>,
}

impl GroundTruth {
    pub fn from_centroids(image_id: impl Into<String>, centroids: &[(f64, f64)]) -> Self {
        GroundTruth {
            image_id: image_id.into(),
            cells: centroids
                .iter()
                .map(|&centroid| TruthCell { centroid, label: None })
                .collect(),
        }
    }

    /// One cell per nonzero label, at the label's pixel centroid.
    pub fn from_label_map(image_id: impl Into<String>, width: usize, labels: &[u32]) -> Self {
        let mut acc: BTreeMap<u32, (f64, f64, usize)> = BTreeMap::new();
        for (i, &l) in labels.iter().enumerate() {
            if l != 0 {
                let e = acc.entry(l).or_default();
                e.0 += (i % width) as f64;
                e.1 += (i / width) as f64;
                e.2 += 1;
            }
        }
        GroundTruth {
            image_id: image_id.into(),
            cells: acc
                .into_iter()
                .map(|(l, (sx, sy, n))| TruthCell {
                    centroid: (sx / n as f64, sy / n as f64),
                    label: Some(l),
                })
                .collect(),
        }
    }

    pub fn centroids(&self) -> Vec<(f64, f64)> {
        self.cells.iter().map(|c| c.centroid).collect()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct MatchCounts {
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
}

impl MatchCounts {
    pub fn precision(&self) -> f64 {
        ratio(self.tp, self.tp + self.fp)
    }

    pub fn recall(&self) -> f64 {
        ratio(self.tp, self.tp + self.fn_)
    }

    pub fn f1(&self) -> f64 {
        f1_score(self.precision(), self.recall())
    }
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Harmonic mean of precision and recall; 0 when both are 0.
pub fn f1_score(precision: f64, recall: f64) -> f64 {
    let s = precision + recall;
    if s == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / s
    }
}

/// Greedy nearest-first one-to-one matching within `radius` (inclusive).
///
/// Equal distances are ordered by the coordinates of both ends, so the
/// counts do not depend on the order of `pred`.
pub fn match_detections(pred: &[(f64, f64)], truth: &GroundTruth, radius: f64) -> MatchCounts {
    assert!(radius > 0.0, "match radius must be positive");
    let truth = truth.centroids();
    let r2 = radius * radius;
    let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
    for (i, p) in pred.iter().enumerate() {
        for (j, t) in truth.iter().enumerate() {
            let d2 = (p.0 - t.0).powi(2) + (p.1 - t.1).powi(2);
            if d2 <= r2 {
                pairs.push((d2, i, j));
            }
        }
    }
    pairs.sort_by(|a, b| {
        a.0.total_cmp(&b.0)
            .then(pred[a.1].0.total_cmp(&pred[b.1].0))
            .then(pred[a.1].1.total_cmp(&pred[b.1].1))
            .then(a.2.cmp(&b.2))
    });
    let mut pred_used = vec![false; pred.len()];
    let mut truth_used = vec![false; truth.len()];
    let mut tp = 0;
    for (_, i, j) in pairs {
        if !pred_used[i] && !truth_used[j] {
            pred_used[i] = true;
            truth_used[j] = true;
            tp += 1;
        }
    }
    MatchCounts {
        tp,
        fp: pred.len() - tp,
        fn_: truth.len() - tp,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub image_id: String,
    pub green_path: PathBuf,
    /// Empty when `green_path` is a combined color image.
    pub white_path: PathBuf,
    pub truth_path: PathBuf,
}

#[derive(Deserialize)]
struct TruthRow {
    image_id: String,
    x: f64,
    y: f64,
}

fn csv_error(what: &'static str, path: &Path, e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line() as usize);
    match e.into_kind() {
        csv::ErrorKind::Io(source) => Error::io(path, source),
        other => Error::Malformed {
            what,
            path: path.to_owned(),
            line,
            reason: format!("{other:?}"),
        },
    }
}

/// Reads `image_id,green_path,white_path,truth_path`. Relative paths are
/// resolved against the manifest's directory.
pub fn load_manifest(path: impl AsRef<Path>) -> Result<Vec<ManifestEntry>> {
    let path = path.as_ref();
    let base = path.parent().unwrap_or(Path::new(""));
    let mut reader = csv::Reader::from_path(path).map_err(|e| csv_error("manifest", path, e))?;
    let resolve = |p: PathBuf| if p.as_os_str().is_empty() || p.is_absolute() { p } else { base.join(p) };
    let mut entries = Vec::new();
    for row in reader.deserialize::<ManifestEntry>() {
        let e = row.map_err(|e| csv_error("manifest", path, e))?;
        entries.push(ManifestEntry {
            image_id: e.image_id,
            green_path: resolve(e.green_path),
            white_path: resolve(e.white_path),
            truth_path: resolve(e.truth_path),
        });
    }
    if entries.is_empty() {
        return Err(Error::EmptyManifest(path.to_owned()));
    }
    Ok(entries)
}

pub fn write_manifest(entries: &[ManifestEntry]) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for e in entries {
        w.serialize(e).expect("in-memory csv");
    }
    w.into_inner().expect("in-memory csv")
}

/// Truth centroids per image from an `image_id,x,y` CSV.
pub fn load_truth_csv(path: impl AsRef<Path>) -> Result<BTreeMap<String, GroundTruth>> {
    let path = path.as_ref();
    let mut reader = csv::Reader::from_path(path).map_err(|e| csv_error("ground truth", path, e))?;
    let mut out: BTreeMap<String, GroundTruth> = BTreeMap::new();
    for row in reader.deserialize::<TruthRow>() {
        let r = row.map_err(|e| csv_error("ground truth", path, e))?;
        if !(r.x.is_finite() && r.y.is_finite()) {
            return Err(Error::Malformed {
                what: "ground truth",
                path: path.to_owned(),
                line: 0,
                reason: format!("non-finite centroid for {}", r.image_id),
            });
        }
        out.entry(r.image_id.clone())
            .or_insert_with(|| GroundTruth::from_centroids(r.image_id.clone(), &[]))
            .cells
            .push(TruthCell {
                centroid: (r.x, r.y),
                label: None,
            });
    }
    Ok(out)
}

pub fn write_truth_csv(truths: &[GroundTruth]) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["image_id", "x", "y"]).expect("in-memory csv");
    for t in truths {
        for c in &t.cells {
            w.write_record([t.image_id.clone(), format!("{:.3}", c.centroid.0), format!("{:.3}", c.centroid.1)])
                .expect("in-memory csv");
        }
    }
    w.into_inner().expect("in-memory csv")
}

/// Truth for one image: a label PNG, or the image's rows of a centroid CSV
/// (no rows means no cells).
pub fn load_truth(path: &Path, image_id: &str, dims: (usize, usize)) -> Result<GroundTruth> {
    let is_png = path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("png"));
    let truth = if is_png {
        let (w, h, labels) = load_labels(path)?;
        crate::error::check_dims(dims, (w, h))?;
        GroundTruth::from_label_map(image_id, w, &labels)
    } else {
        load_truth_csv(path)?
            .remove(image_id)
            .unwrap_or_else(|| GroundTruth::from_centroids(image_id, &[]))
    };
    let (w, h) = dims;
    if let Some(c) = truth.cells.iter().find(|c| {
        let (x, y) = c.centroid;
        !(0.0..w as f64).contains(&x) || !(0.0..h as f64).contains(&y)
    }) {
        return Err(Error::Malformed {
            what: "ground truth",
            path: path.to_owned(),
            line: 0,
            reason: format!("centroid {:?} of {image_id} lies outside the {w}x{h} image", c.centroid),
        });
    }
    Ok(truth)
}

/// Green and white channels named by a manifest entry.
pub fn load_pair(entry: &ManifestEntry) -> Result<(IntensityImage, IntensityImage)> {
    if entry.white_path.as_os_str().is_empty() {
        return match load_image(&entry.green_path)? {
            LoadedImage::Color(c) => Ok(extract_channels(&c)),
            LoadedImage::Gray(_) => Err(Error::InvalidArgument(format!(
                "{} has no white_path and is not a color image",
                entry.image_id
            ))),
        };
    }
    let green = load_channel(&entry.green_path)?;
    let white = load_channel(&entry.white_path)?;
    crate::error::check_dims(green.dims(), white.dims())?;
    Ok((green, white))
}

/// One image, ready to evaluate.
#[derive(Clone, Debug)]
pub struct EvalSample {
    pub image_id: String,
    pub green: IntensityImage,
    pub white: IntensityImage,
    pub truth: GroundTruth,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ImageScore {
    pub image_id: String,
    pub method: Method,
    pub count: usize,
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl ImageScore {
    fn new(image_id: &str, method: Method, count: usize, m: MatchCounts) -> Self {
        ImageScore {
            image_id: image_id.to_owned(),
            method,
            count,
            tp: m.tp,
            fp: m.fp,
            fn_: m.fn_,
            precision: m.precision(),
            recall: m.recall(),
            f1: m.f1(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MethodAverage {
    pub method: Method,
    pub images: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ImageFailure {
    pub image_id: String,
    /// Absent when the inputs themselves failed to load.
    pub method: Option<Method>,
    pub kind: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EvalReport {
    pub methods: Vec<Method>,
    /// Sorted by image id, then method.
    pub per_image: Vec<ImageScore>,
    /// In the order of `methods`.
    pub averages: Vec<MethodAverage>,
    pub failures: Vec<ImageFailure>,
}

impl EvalReport {
    fn assemble(methods: &[Method], mut per_image: Vec<ImageScore>, mut failures: Vec<ImageFailure>) -> Self {
        per_image.sort_by(|a, b| a.image_id.cmp(&b.image_id).then(a.method.cmp(&b.method)));
        failures.sort_by(|a, b| a.image_id.cmp(&b.image_id).then(a.method.cmp(&b.method)));
        let averages = methods
            .iter()
            .map(|&m| {
                let rows: Vec<&ImageScore> = per_image.iter().filter(|s| s.method == m).collect();
                let n = rows.len();
                let avg = |f: fn(&ImageScore) -> f64| {
                    if n == 0 {
                        0.0
                    } else {
                        rows.iter().map(|s| f(s)).sum::<f64>() / n as f64
                    }
                };
                MethodAverage {
                    method: m,
                    images: n,
                    precision: avg(|s| s.precision),
                    recall: avg(|s| s.recall),
                    f1: avg(|s| s.f1),
                }
            })
            .collect();
        EvalReport {
            methods: methods.to_vec(),
            per_image,
            averages,
            failures,
        }
    }

    pub fn average(&self, method: Method) -> Option<&MethodAverage> {
        self.averages.iter().find(|a| a.method == method)
    }

    /// Number of distinct images with at least one scored method.
    pub fn scored_images(&self) -> usize {
        let mut ids: Vec<&str> = self.per_image.iter().map(|s| s.image_id.as_str()).collect();
        ids.dedup();
        ids.len()
    }

    pub fn to_csv(&self) -> Vec<u8> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["image_id", "method", "count", "tp", "fp", "fn", "precision", "recall", "f1"])
            .expect("in-memory csv");
        for s in &self.per_image {
            w.write_record([
                s.image_id.clone(),
                s.method.name().to_owned(),
                s.count.to_string(),
                s.tp.to_string(),
                s.fp.to_string(),
                s.fn_.to_string(),
                format!("{:.6}", s.precision),
                format!("{:.6}", s.recall),
                format!("{:.6}", s.f1),
            ])
            .expect("in-memory csv");
        }
        for a in &self.averages {
            w.write_record([
                "average".to_owned(),
                a.method.name().to_owned(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                format!("{:.6}", a.precision),
                format!("{:.6}", a.recall),
                format!("{:.6}", a.f1),
            ])
            .expect("in-memory csv");
        }
        w.into_inner().expect("in-memory csv")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// F1 per image and method, one row per image and a final `Ave` row.
    pub fn to_table(&self) -> String {
        let mut ids: Vec<&str> = self.per_image.iter().map(|s| s.image_id.as_str()).collect();
        ids.dedup();
        let id_w = ids.iter().map(|s| s.len()).max().unwrap_or(0).max(3);
        let mut out = String::new();
        let _ = write!(out, "{:<id_w$}", "No.");
        for m in &self.methods {
            let _ = write!(out, "  {:>8}", m.title());
        }
        out.push('\n');
        for id in &ids {
            let _ = write!(out, "{id:<id_w$}");
            for &m in &self.methods {
                match self.per_image.iter().find(|s| s.image_id == *id && s.method == m) {
                    Some(s) => {
                        let _ = write!(out, "  {:>8.2}", s.f1);
                    }
                    None => {
                        let _ = write!(out, "  {:>8}", "-");
                    }
                }
            }
            out.push('\n');
        }
        let _ = write!(out, "{:<id_w$}", "Ave");
        for a in &self.averages {
            let _ = write!(out, "  {:>8.2}", a.f1);
        }
        out.push('\n');
        out
    }
}

fn score_one(sample: &EvalSample, method: Method, cfg: &PipelineConfig) -> std::result::Result<ImageScore, ImageFailure> {
    match run_method(&sample.green, &sample.white, cfg, method) {
        Ok(run) => {
            let pred: Vec<(f64, f64)> = run.result.detections.iter().map(|d| d.nucleus_centroid).collect();
            let m = match_detections(&pred, &sample.truth, cfg.match_radius);
            Ok(ImageScore::new(&sample.image_id, method, run.result.count, m))
        }
        Err(e) => Err(ImageFailure {
            image_id: sample.image_id.clone(),
            method: Some(method),
            kind: e.kind().to_owned(),
            message: e.to_string(),
        }),
    }
}

/// Scores in-memory samples. Work runs on the current rayon pool.
pub fn evaluate_samples(samples: &[EvalSample], methods: &[Method], cfg: &PipelineConfig) -> EvalReport {
    let jobs: Vec<(&EvalSample, Method)> = samples
        .iter()
        .flat_map(|s| methods.iter().map(move |&m| (s, m)))
        .collect();
    let results: Vec<_> = jobs.par_iter().map(|&(s, m)| score_one(s, m, cfg)).collect();
    let (mut ok, mut failed) = (Vec::new(), Vec::new());
    for r in results {
        match r {
            Ok(s) => ok.push(s),
            Err(f) => failed.push(f),
        }
    }
    EvalReport::assemble(methods, ok, failed)
}

/// Loads and scores every manifest entry. Entries whose inputs fail to load
/// are recorded as failures; only an unreadable or empty manifest is an
/// error.
pub fn evaluate_dataset(manifest: impl AsRef<Path>, methods: &[Method], cfg: &PipelineConfig) -> Result<EvalReport> {
    let entries = load_manifest(manifest)?;
    let loaded: Vec<std::result::Result<EvalSample, ImageFailure>> = entries
        .par_iter()
        .map(|e| {
            let load = || -> Result<EvalSample> {
                let (green, white) = load_pair(e)?;
                let truth = load_truth(&e.truth_path, &e.image_id, green.dims())?;
                Ok(EvalSample {
                    image_id: e.image_id.clone(),
                    green,
                    white,
                    truth,
                })
            };
            load().map_err(|err| ImageFailure {
                image_id: e.image_id.clone(),
                method: None,
                kind: err.kind().to_owned(),
                message: err.to_string(),
            })
        })
        .collect();
    let (mut samples, mut failures) = (Vec::new(), Vec::new());
    for l in loaded {
        match l {
            Ok(s) => samples.push(s),
            Err(f) => failures.push(f),
        }
    }
    let report = evaluate_samples(&samples, methods, cfg);
    failures.extend(report.failures);
    Ok(EvalReport::assemble(methods, report.per_image, failures))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn truth(pts: &[(f64, f64)]) -> GroundTruth {
        GroundTruth::from_centroids("t", pts)
    }

    #[test]
    fn f1_hand_values() {
        assert_eq!(f1_score(1.0, 1.0), 1.0);
        assert_eq!(f1_score(0.5, 1.0), 2.0 / 3.0);
        assert_eq!(f1_score(0.0, 0.0), 0.0);
        let m = MatchCounts { tp: 9, fp: 0, fn_: 1 };
        assert_eq!(m.recall(), 0.9);
        assert_eq!(m.precision(), 1.0);
        assert!((m.f1() - 18.0 / 19.0).abs() < 1e-15);
        assert_eq!(MatchCounts::default().f1(), 0.0);
    }

    #[test]
    fn matching_examples() {
        let pts = [(1.0, 1.0), (50.0, 50.0), (100.0, 3.0)];
        assert_eq!(match_detections(&pts, &truth(&pts), 0.5), MatchCounts { tp: 3, fp: 0, fn_: 0 });
        assert_eq!(
            match_detections(&[(30.0, 0.0)], &truth(&[(0.0, 0.0)]), 15.0),
            MatchCounts { tp: 0, fp: 1, fn_: 1 }
        );
        assert_eq!(
            match_detections(&[(1.0, 0.0), (0.0, 2.0)], &truth(&[(0.0, 0.0)]), 15.0),
            MatchCounts { tp: 1, fp: 1, fn_: 0 }
        );
    }

    #[test]
    fn nearest_pair_wins() {
        // greedy takes (p1, t0) first; p0 then matches t1
        let t = truth(&[(0.0, 0.0), (10.0, 0.0)]);
        let pred = [(4.0, 0.0), (1.0, 0.0)];
        assert_eq!(match_detections(&pred, &t, 15.0).tp, 2);
    }

    #[test]
    fn label_map_truth() {
        let labels = vec![0, 1, 1, 0, 0, 2, 0, 2, 0];
        let t = GroundTruth::from_label_map("x", 3, &labels);
        assert_eq!(t.centroids(), vec![(1.5, 0.0), (1.5, 1.5)]);
        assert_eq!(t.cells[1].label, Some(2));
    }

    #[test]
    fn report_table_and_averages() {
        let scores = vec![
            ImageScore::new("b", Method::Oslo, 10, MatchCounts { tp: 9, fp: 0, fn_: 1 }),
            ImageScore::new("a", Method::Oslo, 10, MatchCounts { tp: 10, fp: 0, fn_: 0 }),
            ImageScore::new("a", Method::OtsuBaseline, 4, MatchCounts { tp: 2, fp: 2, fn_: 8 }),
        ];
        let r = EvalReport::assemble(&[Method::OtsuBaseline, Method::Oslo], scores, vec![]);
        assert_eq!(r.per_image[0].image_id, "a");
        let oslo = r.average(Method::Oslo).unwrap();
        assert_eq!(oslo.images, 2);
        assert!((oslo.f1 - (1.0 + 18.0 / 19.0) / 2.0).abs() < 1e-12);
        let table = r.to_table();
        let lines: Vec<&str> = table.lines().collect();
        assert_eq!(lines.len(), 4);
        assert!(lines[0].contains("Otsu") && lines[0].contains("OSLO"));
        assert!(lines[2].contains('-'));
        assert!(lines[3].starts_with("Ave"));
        let csv = String::from_utf8(r.to_csv()).unwrap();
        assert_eq!(csv.lines().count(), 1 + 3 + 2);
    }

    #[test]
    fn manifest_and_truth_files() {
        let dir = tempfile::tempdir().unwrap();
        let m = dir.path().join("manifest.csv");
        std::fs::write(&m, "image_id,green_path,white_path,truth_path\n").unwrap();
        assert!(matches!(load_manifest(&m), Err(Error::EmptyManifest(_))));
        std::fs::write(&m, "image_id,green_path,white_path,truth_path\nx,g.png,w.png,/abs/t.csv\n").unwrap();
        let e = &load_manifest(&m).unwrap()[0];
        assert_eq!(e.green_path, dir.path().join("g.png"));
        assert_eq!(e.truth_path, PathBuf::from("/abs/t.csv"));

        let t = dir.path().join("truth.csv");
        std::fs::write(&t, "image_id,x,y\na,1.5,2\nb,3,4\na,5,6\n").unwrap();
        let all = load_truth_csv(&t).unwrap();
        assert_eq!(all["a"].centroids(), vec![(1.5, 2.0), (5.0, 6.0)]);
        assert_eq!(load_truth(&t, "zzz", (10, 10)).unwrap().len(), 0);
        assert!(load_truth(&t, "b", (3, 3)).is_err());
        std::fs::write(&t, "image_id,x,y\na,one,2\n").unwrap();
        let err = load_truth_csv(&t).unwrap_err();
        assert!(matches!(err, Error::Malformed { .. }));
        assert_eq!(err.exit_code(), 2);

        let written = write_truth_csv(&[truth(&[(1.0, 2.0)])]);
        std::fs::write(&t, written).unwrap();
        assert_eq!(load_truth_csv(&t).unwrap()["t"].centroids(), vec![(1.0, 2.0)]);
    }

    proptest! {
        #[test]
        fn matching_conserves_counts_and_ignores_order(
            pred in prop::collection::vec((0u8..40, 0u8..40), 0..12),
            tr in prop::collection::vec((0u8..40, 0u8..40), 0..12),
            radius in 1u8..20,
        ) {
            let pred: Vec<(f64, f64)> = pred.iter().map(|&(x, y)| (x as f64, y as f64)).collect();
            let t = truth(&tr.iter().map(|&(x, y)| (x as f64, y as f64)).collect::<Vec<_>>());
            let m = match_detections(&pred, &t, radius as f64);
            prop_assert_eq!(m.tp + m.fn_, t.len());
            prop_assert_eq!(m.tp + m.fp, pred.len());
            let mut rev = pred.clone();
            rev.reverse();
            prop_assert_eq!(match_detections(&rev, &t, radius as f64), m);
        }

        #[test]
        fn f1_bracket(p in 0.0f64..=1.0, r in 0.0f64..=1.0) {
            let f = f1_score(p, r);
            prop_assert_eq!(f, f1_score(r, p));
            if p > 0.0 && r > 0.0 {
                let lo = p.min(r);
                prop_assert!(lo <= f * (1.0 + 1e-12));
                prop_assert!(f <= 2.0 * lo * (1.0 + 1e-12));
                prop_assert!(f <= (p + r) / 2.0 * (1.0 + 1e-12));
            }
        }
    }
}
