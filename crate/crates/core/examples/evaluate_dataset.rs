//! Scores every method on a dataset manifest and writes the report files.
//! Without a manifest a small hard suite is generated first.
//!
//! ```text
//! cargo run --release --example evaluate_dataset -- [manifest.csv] [out_dir]
//! ```

use std::path::PathBuf;

use oslo::cli::write_report;
use oslo::config::PipelineConfig;
use oslo::evaluation::evaluate_dataset;
use oslo::pipeline::Method;
use oslo::synthetic::{generate_suite, write_suite, Suite};

fn main() -> oslo::Result<()> {
    let mut args = std::env::args().skip(1);
    let out = std::env::temp_dir().join("oslo_evaluate");
    let manifest = match args.next() {
        Some(m) => PathBuf::from(m),
        None => {
            let dir = out.join("suite");
            write_suite(&dir, &generate_suite(Suite::Hard, 11, 4)?)?;
            dir.join("manifest.csv")
        }
    };
    let out = args.next().map_or(out, PathBuf::from);

    let report = evaluate_dataset(&manifest, &Method::ALL, &PipelineConfig::default())?;
    std::fs::create_dir_all(&out).map_err(|e| oslo::Error::Io { path: out.clone(), source: e })?;
    write_report(&out, &report)?;
    print!("{}", report.to_table());
    println!("{} failures; wrote {}", report.failures.len(), out.display());
    Ok(())
}
