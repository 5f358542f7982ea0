//! Frequency-tuned saliency of both channels of a generated image, with the
//! white-channel mask built from it.
//!
//! ```text
//! cargo run --release --example saliency_maps -- [seed] [out_dir]
//! ```

use std::path::PathBuf;

use oslo::binarize::{otsu_binarize, otsu_threshold};
use oslo::config::PipelineConfig;
use oslo::image::histogram;
use oslo::io::{encode_gray8, write_atomic};
use oslo::pipeline::white_mask;
use oslo::regions::{label_components, Connectivity};
use oslo::saliency::ft_saliency;
use oslo::synthetic::{generate, SynthConfig};

fn main() -> oslo::Result<()> {
    let mut args = std::env::args().skip(1);
    let seed: u64 = args.next().map_or(Ok(3), |s| s.parse()).expect("seed");
    let out = args.next().map_or_else(|| std::env::temp_dir().join("oslo_saliency"), PathBuf::from);
    let cfg = PipelineConfig::default();
    let sample = generate(&SynthConfig::hard(seed))?;
    let kernel = cfg.saliency_kernel();

    std::fs::create_dir_all(&out).map_err(|e| oslo::Error::Io { path: out.clone(), source: e })?;
    for (name, img) in [("white", &sample.white), ("green", &sample.green)] {
        let raw = ft_saliency(img, &kernel);
        let s = raw.clone().normalize();
        let otsu = otsu_threshold(&histogram(&s.to_image(), 256))?;
        println!(
            "{name:<5} mean feature {:.4}  raw peak {:.4}  Otsu level {:.4}  Otsu foreground {:.2}%",
            raw.mean_feature(),
            raw.max(),
            otsu,
            100.0 * otsu_binarize(&s.to_image()).count() as f64 / s.values().len() as f64,
        );
        let (w, h) = s.dims();
        write_atomic(out.join(format!("s_{name}.png")), &encode_gray8(w, h, s.values()))?;
    }

    let s_w = ft_saliency(&sample.white, &kernel).normalize();
    let b_w = white_mask(&s_w, &cfg);
    let nuclei = label_components(&b_w, Connectivity::Eight).filter_min_area(cfg.min_region_area);
    println!(
        "white mask: {} regions for {} cells and {} distractors",
        nuclei.len(),
        sample.truth.len(),
        sample.distractors.len()
    );
    println!("wrote {}", out.display());
    Ok(())
}
