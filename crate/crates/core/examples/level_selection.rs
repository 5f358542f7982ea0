//! Shows how the green saliency level is chosen for one generated image:
//! the ratio table, the minimax weight and the resulting detections.
//!
//! ```text
//! cargo run --release --example level_selection -- [easy|hard] [seed] [index]
//! ```

use oslo::config::PipelineConfig;
use oslo::pipeline::{run_method, Method};
use oslo::synthetic::{generate_suite, Suite};

fn main() -> oslo::Result<()> {
    let mut args = std::env::args().skip(1);
    let suite: Suite = args.next().as_deref().unwrap_or("easy").parse()?;
    let seed: u64 = args.next().map_or(Ok(1), |s| s.parse()).expect("seed");
    let index: usize = args.next().map_or(Ok(0), |s| s.parse()).expect("index");
    let (id, sample) = generate_suite(suite, seed, index + 1)?.remove(index);

    let run = run_method(&sample.green, &sample.white, &PipelineConfig::default(), Method::Oslo)?;
    let sel = run.selection.as_ref().expect("white regions present");
    let table = run.table.as_ref().expect("table");
    println!("{id}: {} cells in truth", sample.truth.len());
    println!("lambda* = {:.2}  L_g = {:.4}  E* = {:.4}", sel.lambda_star, sel.l_g, sel.e_star);
    println!("intersections M = {}  ratio bound = {:?}", run.m_count, run.r_uwi);
    println!("detections = {}", run.result.count);

    println!("\n level      r1        r2     M");
    let stride = if std::env::var_os("ALL_LEVELS").is_some() { 1 } else { 8 };
    for row in table.rows.iter().step_by(stride) {
        println!("{:6.4} {:9.3} {:9.3} {:5}", row.level, row.r1_mean, row.r2_mean, row.m_count);
    }
    println!("\n lambda   L*(lambda)   E*(lambda)");
    for c in sel.curves.iter().step_by(10) {
        if let Some((l, e)) = c.best {
            println!("{:6.2} {:12.4} {:12.4}", c.lambda, l, e);
        }
    }
    Ok(())
}
