//! Writes a synthetic suite (16-bit channel PNGs, ground-truth CSV and a
//! manifest) and reads the manifest back.
//!
//! ```text
//! cargo run --release --example generate_suite -- [easy|hard] [seed] [count] [out_dir]
//! ```

use std::path::PathBuf;

use oslo::evaluation::{load_manifest, load_truth};
use oslo::synthetic::{generate_suite, write_suite, Suite};

fn main() -> oslo::Result<()> {
    let mut args = std::env::args().skip(1);
    let suite: Suite = args.next().as_deref().unwrap_or("hard").parse()?;
    let seed: u64 = args.next().map_or(Ok(7), |s| s.parse()).expect("seed");
    let count: usize = args.next().map_or(Ok(4), |s| s.parse()).expect("count");
    let out = args.next().map_or_else(|| std::env::temp_dir().join("oslo_suite"), PathBuf::from);

    let samples = generate_suite(suite, seed, count)?;
    write_suite(&out, &samples)?;
    for (id, s) in &samples {
        println!(
            "{id}: {} cells, {} distractors, {} crossing process pairs",
            s.truth.len(),
            s.distractors.len(),
            s.crossing_pairs.len()
        );
    }
    let entries = load_manifest(out.join("manifest.csv"))?;
    let first = &entries[0];
    let truth = load_truth(&first.truth_path, &first.image_id, (samples[0].1.green.width(), samples[0].1.green.height()))?;
    println!("manifest: {} entries, first has {} truth cells", entries.len(), truth.len());
    println!("wrote {}", out.display());
    Ok(())
}
