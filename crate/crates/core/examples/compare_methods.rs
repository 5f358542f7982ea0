//! Scores OSLO and the three threshold baselines on a generated suite.
//!
//! ```text
//! cargo run --release --example compare_methods -- [easy|hard] [images] [seed]
//! ```

use std::time::Instant;

use oslo::config::PipelineConfig;
use oslo::evaluation::{evaluate_samples, EvalSample};
use oslo::pipeline::Method;
use oslo::synthetic::{generate_suite, Suite};

fn main() -> oslo::Result<()> {
    let mut args = std::env::args().skip(1);
    let suite: Suite = args.next().as_deref().unwrap_or("hard").parse()?;
    let images: usize = args.next().map_or(Ok(10), |s| s.parse()).expect("image count");
    let seed: u64 = args.next().map_or(Ok(1), |s| s.parse()).expect("seed");

    let t = Instant::now();
    let samples: Vec<EvalSample> = generate_suite(suite, seed, images)?
        .into_iter()
        .map(|(image_id, s)| EvalSample {
            image_id,
            green: s.green,
            white: s.white,
            truth: s.truth,
        })
        .collect();
    eprintln!("generated {images} images in {:.1?}", t.elapsed());

    let t = Instant::now();
    let report = evaluate_samples(&samples, &Method::ALL, &PipelineConfig::default());
    eprintln!("evaluated in {:.1?}", t.elapsed());
    print!("{}", report.to_table());
    for a in &report.averages {
        println!("{:<8} precision {:.3} recall {:.3} f1 {:.3}", a.method.title(), a.precision, a.recall, a.f1);
    }
    for f in &report.failures {
        eprintln!("failed: {} {:?}: {}", f.image_id, f.method, f.message);
    }
    Ok(())
}
