//! Marker-controlled watershed on the negated distance transform: two
//! overlapping disks with one marker each are split along the neck.
//!
//! ```text
//! cargo run --release --example watershed_split
//! ```

use oslo::binarize::BinaryMap;
use oslo::regions::{Region, RegionSet};
use oslo::segment::{watershed, Surface};

fn main() -> oslo::Result<()> {
    let (w, h) = (40usize, 20usize);
    let inside = |x: usize, y: usize, cx: f64, r: f64| (x as f64 - cx).hypot(y as f64 - 9.5) <= r;
    let mask = BinaryMap::from_fn(w, h, |x, y| inside(x, y, 12.0, 8.0) || inside(x, y, 27.0, 8.0));
    let seed = |label: u32, cx: usize| Region::from_pixels(label, vec![9 * w + cx, 10 * w + cx], w);
    let markers = RegionSet::from_regions(w, h, vec![seed(1, 12), seed(2, 27)]);

    let labels = watershed(&Surface::negated_distance(&mask), &markers, &mask)?;
    for y in 0..h {
        let row: String = (0..w)
            .map(|x| match labels[y * w + x] {
                0 => '.',
                1 => 'a',
                _ => 'b',
            })
            .collect();
        println!("{row}");
    }
    let area = |l: u32| labels.iter().filter(|&&v| v == l).count();
    println!("\nmask {} px  segment a {} px  segment b {} px", mask.count(), area(1), area(2));
    Ok(())
}
