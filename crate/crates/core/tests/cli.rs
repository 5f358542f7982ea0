use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use oslo::evaluation::{load_manifest, load_truth};
use oslo::image::IntensityImage;
use oslo::io::{encode_gray16, encode_rgb8, write_atomic};
use oslo::synthetic::{generate, generate_suite, write_suite, Suite, SynthConfig};

fn oslo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oslo"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn p(path: &Path) -> &str {
    path.to_str().expect("utf-8 path")
}

fn json(path: PathBuf) -> serde_json::Value {
    serde_json::from_slice(&std::fs::read(path).expect("json file")).expect("valid json")
}

fn save(path: &Path, img: &IntensityImage) {
    write_atomic(path, &encode_gray16(img.width(), img.height(), img.pixels())).unwrap();
}

#[test]
fn blank_pair_counts_zero() {
    let dir = tempfile::tempdir().unwrap();
    let blank = IntensityImage::filled(64, 48, 0.0).unwrap();
    let (g, w) = (dir.path().join("g.png"), dir.path().join("w.png"));
    save(&g, &blank);
    save(&w, &blank);
    let out = dir.path().join("out");
    let r = oslo(&["detect", "--green", p(&g), "--white", p(&w), "--out", p(&out)]);
    assert_eq!(r.status.code(), Some(0), "{}", String::from_utf8_lossy(&r.stderr));
    let s = json(out.join("summary.json"));
    assert_eq!(s["count"], 0);
    for key in ["lambda_star", "l_g", "r_uwi", "m_count"] {
        assert!(s.get(key).is_some(), "{key} missing");
    }
    assert!(s.get("timings_ms").is_none());
    for f in ["labels.png", "overlay.png", "detections.csv"] {
        assert!(out.join(f).exists(), "{f}");
    }
}

#[test]
fn missing_input_exits_two_with_error_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let missing = dir.path().join("nope.png");
    let r = oslo(&["detect", "--green", p(&missing), "--white", p(&missing), "--out", p(&out)]);
    assert_eq!(r.status.code(), Some(2));
    let e = json(out.join("error.json"));
    assert_eq!(e["error"], "io");
    assert_eq!(e["exit_code"], 2);
    let stderr: serde_json::Value = serde_json::from_slice(&r.stderr).unwrap();
    assert_eq!(stderr, e);
}

#[test]
fn uniform_green_field_counts_each_nucleus_once() {
    let dir = tempfile::tempdir().unwrap();
    let green = IntensityImage::filled(64, 64, 0.1).unwrap();
    let white = IntensityImage::from_fn(64, 64, |x, y| {
        if (x as f64 - 32.0).hypot(y as f64 - 32.0) < 6.0 { 0.9 } else { 0.1 }
    })
    .unwrap();
    let (g, w) = (dir.path().join("g.png"), dir.path().join("w.png"));
    save(&g, &green);
    save(&w, &white);
    let out = dir.path().join("out");
    let r = oslo(&["detect", "--green", p(&g), "--white", p(&w), "--out", p(&out)]);
    assert_eq!(r.status.code(), Some(0));
    let s = json(out.join("summary.json"));
    assert_eq!(s["count"], 1);
    assert_eq!(s["l_g"], 0.0);
}

#[test]
fn easy_sample_count_matches_truth() {
    let dir = tempfile::tempdir().unwrap();
    // first image of the suite scored by the acceptance run
    let (id, s) = generate_suite(Suite::Easy, 7, 1).unwrap().remove(0);
    write_suite(dir.path(), &[(id.clone(), s.clone())]).unwrap();
    let out = dir.path().join("det");
    let g = dir.path().join(format!("{id}_green.png"));
    let w = dir.path().join(format!("{id}_white.png"));
    let r = oslo(&[
        "detect", "--green", p(&g), "--white", p(&w), "--out", p(&out), "--timings", "--regions-csv",
        "--diagnostics", "--plot",
    ]);
    assert_eq!(r.status.code(), Some(0));
    let summary = json(out.join("summary.json"));
    assert_eq!(summary["count"], s.truth.len());
    assert!(summary["timings_ms"]["saliency"].is_number());
    let rows = std::fs::read_to_string(out.join("detections.csv")).unwrap();
    assert_eq!(rows.lines().count(), s.truth.len() + 1);
    let regions = std::fs::read_to_string(out.join("regions.csv")).unwrap();
    assert_eq!(regions.lines().count(), s.truth.len() + 1);
    assert!(json(out.join("diagnostics.json"))["ratio_table"].is_array());
    assert!(out.join("cost_curves.png").exists());
}

#[test]
fn combined_image_input() {
    let dir = tempfile::tempdir().unwrap();
    let s = generate(&SynthConfig {
        width: 256,
        height: 256,
        cell_count: 4,
        ..SynthConfig::easy(3)
    })
    .unwrap();
    let byte = |v: f64| (v * 255.0).round() as u8;
    let rgb: Vec<[u8; 3]> = s
        .green
        .pixels()
        .iter()
        .zip(s.white.pixels())
        .map(|(&g, &w)| [byte(w), byte(g.max(w)), byte(w)])
        .collect();
    let path = dir.path().join("rgb.png");
    write_atomic(&path, &encode_rgb8(256, 256, &rgb)).unwrap();
    let out = dir.path().join("out");
    let r = oslo(&["detect", "--combined", p(&path), "--out", p(&out)]);
    assert_eq!(r.status.code(), Some(0), "{}", String::from_utf8_lossy(&r.stderr));
    assert!(json(out.join("summary.json"))["count"].as_u64().unwrap() > 0);
}

#[test]
fn config_file_and_flag_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let blank = IntensityImage::filled(32, 32, 0.2).unwrap();
    let (g, w) = (dir.path().join("g.png"), dir.path().join("w.png"));
    save(&g, &blank);
    save(&w, &blank);
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# test\nlevel_grid = 64\nmatch_radius = 9\n").unwrap();
    let out = dir.path().join("out");
    let r = oslo(&[
        "detect", "--green", p(&g), "--white", p(&w), "--out", p(&out), "--config", p(&cfg), "--level-grid", "32",
    ]);
    assert_eq!(r.status.code(), Some(0));
    let c = &json(out.join("summary.json"))["config"];
    assert_eq!(c["level_grid"], 32);
    assert_eq!(c["match_radius"], 9.0);

    std::fs::write(&cfg, "level_grid = 1\n").unwrap();
    let r = oslo(&["detect", "--green", p(&g), "--white", p(&w), "--out", p(&out), "--config", p(&cfg)]);
    assert_eq!(r.status.code(), Some(2));
    assert_eq!(json(out.join("error.json"))["error"], "invalid_config");
}

#[test]
fn generate_then_evaluate_all_methods() {
    let dir = tempfile::tempdir().unwrap();
    let suite = dir.path().join("suite");
    let r = oslo(&["generate", "--suite", "hard", "--seed", "5", "--count", "2", "--out", p(&suite)]);
    assert_eq!(r.status.code(), Some(0));
    let entries = load_manifest(suite.join("manifest.csv")).unwrap();
    assert_eq!(entries.len(), 2);
    for e in &entries {
        assert_eq!(load_truth(&e.truth_path, &e.image_id, (1024, 1024)).unwrap().len(), 20);
    }

    let out = dir.path().join("eval");
    let r = oslo(&[
        "--threads", "1", "evaluate", "--manifest", p(&suite.join("manifest.csv")), "--out", p(&out),
    ]);
    assert_eq!(r.status.code(), Some(0), "{}", String::from_utf8_lossy(&r.stderr));
    let report = json(out.join("report.json"));
    assert_eq!(report["averages"].as_array().unwrap().len(), 4);
    let table = std::fs::read_to_string(out.join("report.txt")).unwrap();
    assert!(table.lines().last().unwrap().starts_with("Ave"));
    assert_eq!(String::from_utf8_lossy(&r.stdout), table);
    let csv = std::fs::read_to_string(out.join("report.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 2 * 4 + 4);
}

#[test]
fn evaluate_errors() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.csv");
    std::fs::write(&empty, "image_id,green_path,white_path,truth_path\n").unwrap();
    let r = oslo(&["evaluate", "--manifest", p(&empty), "--out", p(&dir.path().join("e1"))]);
    assert_eq!(r.status.code(), Some(2));

    let broken = dir.path().join("broken.csv");
    std::fs::write(
        &broken,
        "image_id,green_path,white_path,truth_path\na,missing_g.png,missing_w.png,truth.csv\n",
    )
    .unwrap();
    let out = dir.path().join("e2");
    let r = oslo(&["evaluate", "--manifest", p(&broken), "--out", p(&out)]);
    assert_eq!(r.status.code(), Some(2));
    assert_eq!(json(out.join("error.json"))["error"], "all_images_failed");
    assert_eq!(json(out.join("report.json"))["failures"].as_array().unwrap().len(), 1);
}

#[test]
fn partial_failures_still_succeed() {
    let dir = tempfile::tempdir().unwrap();
    let samples = generate_suite(Suite::Easy, 2, 1).unwrap();
    write_suite(dir.path(), &samples).unwrap();
    let manifest = dir.path().join("manifest.csv");
    let mut text = std::fs::read_to_string(&manifest).unwrap();
    text.push_str("ghost,ghost_green.png,ghost_white.png,truth.csv\n");
    std::fs::write(&manifest, text).unwrap();
    let out = dir.path().join("eval");
    let r = oslo(&["evaluate", "--manifest", p(&manifest), "--methods", "oslo", "--out", p(&out)]);
    assert_eq!(r.status.code(), Some(0));
    let report = json(out.join("report.json"));
    assert_eq!(report["failures"][0]["image_id"], "ghost");
    assert_eq!(report["averages"].as_array().unwrap().len(), 1);
}

#[test]
fn dump_stages_writes_every_map() {
    let dir = tempfile::tempdir().unwrap();
    let s = generate(&SynthConfig {
        width: 200,
        height: 200,
        cell_count: 3,
        ..SynthConfig::easy(4)
    })
    .unwrap();
    let (g, w) = (dir.path().join("g.png"), dir.path().join("w.png"));
    save(&g, &s.green);
    save(&w, &s.white);
    let out = dir.path().join("stages");
    let r = oslo(&["dump-stages", "--green", p(&g), "--white", p(&w), "--out", p(&out)]);
    assert_eq!(r.status.code(), Some(0));
    for f in [
        "s_w.png", "s_g.png", "b_w.png", "b_g.png", "b_c.png", "markers.png", "labels.png", "cost_curves.png",
        "cost_curves.csv",
    ] {
        assert!(out.join(f).exists(), "{f}");
    }
}

#[test]
fn generate_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for d in [&a, &b] {
        let r = oslo(&["generate", "--suite", "easy", "--seed", "7", "--count", "2", "--out", p(d)]);
        assert_eq!(r.status.code(), Some(0));
    }
    for f in ["easy_000_green.png", "easy_001_white.png", "truth.csv", "manifest.csv"] {
        assert_eq!(std::fs::read(a.join(f)).unwrap(), std::fs::read(b.join(f)).unwrap(), "{f}");
    }
}

#[test]
fn usage_errors() {
    assert_eq!(oslo(&["detect", "--out", "x"]).status.code(), Some(2));
    assert_eq!(oslo(&["generate", "--suite", "medium", "--out", "/nonexistent/x"]).status.code(), Some(2));
    assert_eq!(oslo(&["--help"]).status.code(), Some(0));
}
