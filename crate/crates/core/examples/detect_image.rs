//! Detects, counts and segments cells in one image pair and writes the label
//! map and an overlay. Without arguments a generated easy-suite image is used
//! and the detections are scored against its ground truth.
//!
//! ```text
//! cargo run --release --example detect_image -- [green.png white.png] [out_dir]
//! ```

use std::path::PathBuf;

use oslo::config::PipelineConfig;
use oslo::evaluation::match_detections;
use oslo::io::{encode_labels16, load_channel, write_atomic};
use oslo::pipeline::{run_method, Method};
use oslo::render::overlay;
use oslo::synthetic::{generate, SynthConfig};

fn main() -> oslo::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let (green, white, truth, out) = if args.len() >= 2 {
        let out = args.get(2).map_or_else(|| std::env::temp_dir().join("oslo_detect"), PathBuf::from);
        (load_channel(&args[0])?, load_channel(&args[1])?, None, out)
    } else {
        let s = generate(&SynthConfig::easy(7))?;
        let out = args.first().map_or_else(|| std::env::temp_dir().join("oslo_detect"), PathBuf::from);
        (s.green, s.white, Some(s.truth), out)
    };

    let run = run_method(&green, &white, &PipelineConfig::default(), Method::Oslo)?;
    let sel = run.selection.as_ref();
    println!("count {}", run.result.count);
    println!("lambda* {:?}  L_g {:?}  M {}", sel.map(|s| s.lambda_star), sel.map(|s| s.l_g), run.m_count);
    for (stage, ms) in &run.timings {
        println!("  {stage:<11} {ms:8.1} ms");
    }
    if let Some(truth) = truth {
        let pred: Vec<(f64, f64)> = run.result.detections.iter().map(|d| d.nucleus_centroid).collect();
        let m = match_detections(&pred, &truth, 15.0);
        println!("truth {}  tp {} fp {} fn {}  f1 {:.3}", truth.len(), m.tp, m.fp, m.fn_, m.f1());
    }

    std::fs::create_dir_all(&out).map_err(|e| oslo::Error::Io { path: out.clone(), source: e })?;
    let (w, h) = green.dims();
    write_atomic(out.join("labels.png"), &encode_labels16(w, h, &run.result.label_map))?;
    write_atomic(out.join("overlay.png"), &overlay(&green, &white, &run.result)?.to_png())?;
    println!("wrote {}", out.display());
    Ok(())
}
