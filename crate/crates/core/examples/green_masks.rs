//! The four ways of binarizing the green saliency map on one generated
//! image: the level chosen by minimax selection and the Otsu, filled-Canny
//! and Bradley baselines. Prints coverage, component counts and how many
//! nuclei each mask touches.
//!
//! ```text
//! cargo run --release --example green_masks -- [easy|hard] [seed]
//! ```

use oslo::config::PipelineConfig;
use oslo::pipeline::{run_method, Method};
use oslo::regions::{label_components, Connectivity};
use oslo::synthetic::{generate, Suite};

fn main() -> oslo::Result<()> {
    let mut args = std::env::args().skip(1);
    let suite: Suite = args.next().as_deref().unwrap_or("hard").parse()?;
    let seed: u64 = args.next().map_or(Ok(5), |s| s.parse()).expect("seed");
    let sample = generate(&suite.config(seed))?;
    let cfg = PipelineConfig::default();

    println!(
        "{} cells, {} distractor nuclei\n",
        sample.truth.len(),
        sample.distractors.len()
    );
    println!("{:<8} {:>9} {:>10} {:>12} {:>7}", "method", "coverage", "components", "intersections", "count");
    for method in Method::ALL {
        let run = run_method(&sample.green, &sample.white, &cfg, method)?;
        let b_g = &run.stages.b_g;
        let comps = label_components(b_g, Connectivity::Eight).filter_min_area(cfg.min_region_area);
        println!(
            "{:<8} {:>8.2}% {:>10} {:>12} {:>7}",
            method.title(),
            100.0 * b_g.count() as f64 / b_g.bits().len() as f64,
            comps.len(),
            run.m_count,
            run.result.count,
        );
    }
    Ok(())
}
