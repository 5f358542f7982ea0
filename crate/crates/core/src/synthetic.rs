//! Seeded two-channel synthetic images with known cell positions.
//!
//! The green label sits on the cell surface, so each cell body is drawn as
//! the projection of a spherical shell: bright near the rim, dim over the
//! middle where the nucleus is. Processes are thin random-walk strokes
//! leaving the rim. The nucleus label fills the nucleus, drawn in white as
//! a projected solid sphere at the body centre. Distractor nuclei are white
//! spheres with no green.
//!
//! At distance `d` from the centre, a solid sphere of radius `r` has
//! intensity `sqrt(r² - d²)` and a shell between `r - t` and `r` has
//! `sqrt(r² - d²) - sqrt(max(0, (r - t)² - d²))`, both scaled so their
//! peak equals the drawn amplitude. The
//! green channel may carry a smooth haze of broad Gaussian bumps. Both
//! channels get additive Gaussian noise and are clipped to `[0, 1]`.
//!
//! All randomness comes from ChaCha8 seeded with `SynthConfig::seed`, so a
//! sample is a pure function of its config. Suites draw one seed per image
//! from a ChaCha8 stream seeded with the suite seed.

use std::path::Path;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::evaluation::{write_manifest, write_truth_csv, GroundTruth, ManifestEntry};
use crate::image::IntensityImage;
use crate::io::{encode_gray16, write_atomic};

const PLACEMENT_ATTEMPTS: usize = 20_000;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SynthConfig {
    pub seed: u64,
    pub width: usize,
    pub height: usize,
    pub cell_count: usize,
    pub nucleus_radius: (f64, f64),
    pub body_radius: (f64, f64),
    /// Thickness of the labeled surface layer of a body.
    pub shell_thickness: (f64, f64),
    pub process_count: (usize, usize),
    pub process_length: (f64, f64),
    /// Stroke width range in pixels.
    pub process_width: (f64, f64),
    /// Minimum distance between any two nucleus centres.
    pub min_separation: f64,
    pub noise_sigma: f64,
    pub background_level: f64,
    pub distractor_nuclei: usize,
    /// Peak nucleus intensity above background.
    pub nucleus_amplitude: f64,
    /// Fraction of cells drawn with `low_contrast_amplitude` instead.
    pub low_contrast_fraction: f64,
    pub low_contrast_amplitude: f64,
    /// Body intensity above background, drawn per cell.
    pub body_amplitude: (f64, f64),
    /// Process intensity as a fraction of its body's.
    pub process_fraction: (f64, f64),
    /// Number of cells placed as close pairs joined by crossing processes.
    pub close_pairs: usize,
    /// Gap between the two body rims of a close pair; negative overlaps.
    pub pair_gap: (f64, f64),
    /// Process strokes from cells outside the counted set, scattered over
    /// the whole field.
    pub meshwork_strokes: usize,
    /// Meshwork stroke intensity above background.
    pub meshwork_amplitude: (f64, f64),
    pub meshwork_length: (f64, f64),
    /// Peak of the smooth green haze; 0 disables it.
    pub haze_amplitude: f64,
    pub haze_blobs: usize,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            seed: 0,
            width: 1024,
            height: 1024,
            cell_count: 20,
            nucleus_radius: (7.0, 8.0),
            body_radius: (11.5, 12.5),
            shell_thickness: (2.5, 3.0),
            process_count: (2, 4),
            process_length: (15.0, 35.0),
            process_width: (2.0, 3.0),
            min_separation: 30.0,
            noise_sigma: 0.01,
            background_level: 0.05,
            distractor_nuclei: 0,
            nucleus_amplitude: 0.8,
            low_contrast_fraction: 0.0,
            low_contrast_amplitude: 0.45,
            body_amplitude: (0.65, 0.8),
            process_fraction: (0.6, 0.8),
            close_pairs: 0,
            pair_gap: (-2.0, 4.0),
            meshwork_strokes: 0,
            meshwork_amplitude: (0.2, 0.4),
            meshwork_length: (40.0, 160.0),
            haze_amplitude: 0.0,
            haze_blobs: 0,
        }
    }
}

impl SynthConfig {
    /// Well separated cells, low noise.
    pub fn easy(seed: u64) -> Self {
        SynthConfig {
            seed,
            min_separation: 80.0,
            ..SynthConfig::default()
        }
    }

    /// Close bodies with crossing processes, a meshwork of processes from
    /// uncounted cells, distractor nuclei, dim nuclei and stronger noise.
    pub fn hard(seed: u64) -> Self {
        SynthConfig {
            seed,
            min_separation: 30.0,
            noise_sigma: 0.03,
            distractor_nuclei: 4,
            low_contrast_fraction: 0.25,
            close_pairs: 3,
            meshwork_strokes: 500,
            ..SynthConfig::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidArgument(format!("synthetic config: {m}")));
        let range_ok = |(a, b): (f64, f64)| a.is_finite() && b.is_finite() && 0.0 <= a && a <= b;
        if self.width == 0 || self.height == 0 {
            return Err(Error::ZeroArea);
        }
        if ![
            self.nucleus_radius,
            self.body_radius,
            self.shell_thickness,
            self.process_length,
            self.process_width,
            self.body_amplitude,
            self.process_fraction,
            self.meshwork_amplitude,
            self.meshwork_length,
        ]
        .into_iter()
        .all(range_ok)
        {
            return bad("ranges must be finite, non-negative and ordered");
        }
        if self.nucleus_radius.1 >= self.body_radius.0 {
            return bad("nucleus radii must stay below body radii");
        }
        if self.process_count.0 > self.process_count.1 {
            return bad("process count range is reversed");
        }
        if !(self.min_separation >= 0.0 && self.noise_sigma >= 0.0) {
            return bad("min_separation and noise_sigma must be non-negative");
        }
        if !(0.0..=1.0).contains(&self.low_contrast_fraction) {
            return bad("low_contrast_fraction must be in [0, 1]");
        }
        if 2 * self.close_pairs > self.cell_count {
            return bad("close pairs need two cells each");
        }
        if self.pair_gap.0.partial_cmp(&self.pair_gap.1).is_none_or(|o| o.is_gt()) {
            return bad("pair gap range is reversed");
        }
        Ok(())
    }
}

/// Where one cell was drawn.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SynthCell {
    pub centre: (f64, f64),
    pub nucleus_radius: f64,
    pub body_radius: f64,
    pub shell_thickness: f64,
    pub nucleus_amplitude: f64,
    pub body_amplitude: f64,
}

#[derive(Clone, Debug)]
pub struct SynthSample {
    pub green: IntensityImage,
    pub white: IntensityImage,
    pub truth: GroundTruth,
    pub cells: Vec<SynthCell>,
    pub distractors: Vec<(f64, f64)>,
    /// White channel before noise.
    pub clean_white: IntensityImage,
    /// Cell index pairs whose process strokes share pixels.
    pub crossing_pairs: Vec<(usize, usize)>,
}

fn uniform(rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)) -> f64 {
    if lo == hi {
        lo
    } else {
        rng.random_range(lo..hi)
    }
}

/// Coverage of a disk with a 2 px linear edge centred on `radius`.
fn soft_edge(d: f64, radius: f64) -> f64 {
    ((radius + 1.0 - d) / 2.0).clamp(0.0, 1.0)
}

struct Canvas {
    w: usize,
    h: usize,
    v: Vec<f64>,
}

impl Canvas {
    fn new(w: usize, h: usize) -> Self {
        Canvas { w, h, v: vec![0.0; w * h] }
    }

    /// Max-composites a soft disk and records the pixels at least half covered.
    fn disk(&mut self, cx: f64, cy: f64, r: f64, amp: f64, touched: &mut Vec<usize>) {
        let reach = r + 1.0;
        let x0 = (cx - reach).floor().max(0.0) as usize;
        let y0 = (cy - reach).floor().max(0.0) as usize;
        let x1 = ((cx + reach).ceil() as isize).min(self.w as isize - 1);
        let y1 = ((cy + reach).ceil() as isize).min(self.h as isize - 1);
        if x1 < 0 || y1 < 0 {
            return;
        }
        for y in y0..=y1 as usize {
            for x in x0..=x1 as usize {
                let c = soft_edge((x as f64 - cx).hypot(y as f64 - cy), r);
                if c > 0.0 {
                    let i = y * self.w + x;
                    self.v[i] = self.v[i].max(amp * c);
                    if c >= 0.5 {
                        touched.push(i);
                    }
                }
            }
        }
    }

    /// Max-composites a projected spherical shell of outer radius `r` and
    /// thickness `t`.
    fn shell(&mut self, cx: f64, cy: f64, r: f64, t: f64, amp: f64) {
        let inner = (r - t).max(0.0);
        let peak = (r * r - inner * inner).sqrt();
        let x0 = (cx - r).floor().max(0.0) as usize;
        let y0 = (cy - r).floor().max(0.0) as usize;
        let x1 = ((cx + r).ceil() as usize).min(self.w - 1);
        let y1 = ((cy + r).ceil() as usize).min(self.h - 1);
        for y in y0..=y1 {
            for x in x0..=x1 {
                let d2 = (x as f64 - cx).powi(2) + (y as f64 - cy).powi(2);
                if d2 < r * r {
                    let v = (r * r - d2).sqrt() - (inner * inner - d2).max(0.0).sqrt();
                    let i = y * self.w + x;
                    self.v[i] = self.v[i].max(amp * v / peak);
                }
            }
        }
    }

    /// Max-composites a projected sphere.
    fn sphere(&mut self, cx: f64, cy: f64, r: f64, amp: f64) {
        let x0 = (cx - r).floor().max(0.0) as usize;
        let y0 = (cy - r).floor().max(0.0) as usize;
        let x1 = ((cx + r).ceil() as usize).min(self.w - 1);
        let y1 = ((cy + r).ceil() as usize).min(self.h - 1);
        for y in y0..=y1 {
            for x in x0..=x1 {
                let t = 1.0 - ((x as f64 - cx).powi(2) + (y as f64 - cy).powi(2)) / (r * r);
                if t > 0.0 {
                    let i = y * self.w + x;
                    self.v[i] = self.v[i].max(amp * t.sqrt());
                }
            }
        }
    }

    /// Stamps a stroke along `path` with the given width.
    fn stroke(&mut self, path: &[(f64, f64)], width: f64, amp: f64, touched: &mut Vec<usize>) {
        for &(x, y) in path {
            self.disk(x, y, width / 2.0, amp, touched);
        }
    }
}

/// Random walk of unit steps starting at `start` heading `angle`.
fn random_walk(rng: &mut ChaCha8Rng, start: (f64, f64), angle: f64, length: f64) -> Vec<(f64, f64)> {
    let turn = Normal::new(0.0, 0.2).expect("valid sigma");
    let (mut x, mut y, mut a) = (start.0, start.1, angle);
    let mut path = vec![(x, y)];
    for _ in 0..length.round() as usize {
        a += turn.sample(rng);
        x += a.cos();
        y += a.sin();
        path.push((x, y));
    }
    path
}

/// Mostly straight stroke from `from` to `to`, with a little wobble.
fn bridge(rng: &mut ChaCha8Rng, from: (f64, f64), to: (f64, f64)) -> Vec<(f64, f64)> {
    let wobble = Normal::new(0.0, 0.6).expect("valid sigma");
    let len = (to.0 - from.0).hypot(to.1 - from.1);
    let steps = len.ceil().max(1.0) as usize;
    let (nx, ny) = (-(to.1 - from.1) / len.max(1e-9), (to.0 - from.0) / len.max(1e-9));
    let mut off = 0.0f64;
    (0..=steps)
        .map(|i| {
            let t = i as f64 / steps as f64;
            off = (off + wobble.sample(rng) * 0.3).clamp(-2.0, 2.0);
            let taper = (t * (1.0 - t) * 4.0).min(1.0);
            (
                from.0 + (to.0 - from.0) * t + nx * off * taper,
                from.1 + (to.1 - from.1) * t + ny * off * taper,
            )
        })
        .collect()
}

fn placement_error(what: &'static str, placed: usize, requested: usize, constraint: String) -> Error {
    Error::Placement {
        what,
        placed,
        requested,
        constraint,
    }
}

/// Draws one sample.
pub fn generate(cfg: &SynthConfig) -> Result<SynthSample> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let (w, h) = (cfg.width, cfg.height);
    let margin = cfg.body_radius.1 + 2.0;
    if 2.0 * margin >= w.min(h) as f64 && cfg.cell_count > 0 {
        return Err(placement_error("cells", 0, cfg.cell_count, "image smaller than one body".into()));
    }

    // cell geometry
    let mut cells: Vec<SynthCell> = Vec::with_capacity(cfg.cell_count);
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let new_cell = |rng: &mut ChaCha8Rng, centre: (f64, f64)| {
        let low = rng.random_bool(cfg.low_contrast_fraction);
        SynthCell {
            centre,
            nucleus_radius: uniform(rng, cfg.nucleus_radius),
            body_radius: uniform(rng, cfg.body_radius),
            shell_thickness: uniform(rng, cfg.shell_thickness),
            nucleus_amplitude: if low { cfg.low_contrast_amplitude } else { cfg.nucleus_amplitude },
            body_amplitude: uniform(rng, cfg.body_amplitude),
        }
    };
    let inside = |(x, y): (f64, f64)| x >= margin && y >= margin && x <= w as f64 - margin && y <= h as f64 - margin;
    let clear = |cells: &[SynthCell], p: (f64, f64), sep: f64| {
        cells
            .iter()
            .all(|c| (c.centre.0 - p.0).hypot(c.centre.1 - p.1) >= sep)
    };
    let mut attempts = 0;
    while cells.len() < cfg.cell_count {
        attempts += 1;
        if attempts > PLACEMENT_ATTEMPTS {
            return Err(placement_error(
                "cells",
                cells.len(),
                cfg.cell_count,
                format!("min_separation {}", cfg.min_separation),
            ));
        }
        let p = (
            rng.random_range(margin..w as f64 - margin),
            rng.random_range(margin..h as f64 - margin),
        );
        let pairing = pairs.len() < cfg.close_pairs;
        let far = if pairing {
            // keep a close pair away from everything else
            cfg.min_separation.max(4.0 * cfg.body_radius.1 + 2.0 * cfg.process_length.1)
        } else {
            cfg.min_separation
        };
        if !clear(&cells, p, far) {
            continue;
        }
        let a = new_cell(&mut rng, p);
        if !pairing {
            cells.push(a);
            continue;
        }
        let mut b = new_cell(&mut rng, (0.0, 0.0));
        let dist = (a.body_radius + b.body_radius + uniform(&mut rng, cfg.pair_gap)).max(cfg.min_separation);
        let theta = rng.random_range(0.0..std::f64::consts::TAU);
        b.centre = (p.0 + dist * theta.cos(), p.1 + dist * theta.sin());
        if !inside(b.centre) || !clear(&cells, b.centre, far) {
            continue;
        }
        pairs.push((cells.len(), cells.len() + 1));
        cells.push(a);
        cells.push(b);
    }

    // distractor nuclei keep clear of every body and process reach
    let mut distractors: Vec<(f64, f64)> = Vec::new();
    let keep_out = cfg.body_radius.1 + cfg.process_length.1 + cfg.nucleus_radius.1 + 4.0;
    let mut attempts = 0;
    while distractors.len() < cfg.distractor_nuclei {
        attempts += 1;
        if attempts > PLACEMENT_ATTEMPTS {
            return Err(placement_error(
                "distractor nuclei",
                distractors.len(),
                cfg.distractor_nuclei,
                format!("clearance {keep_out} from cells"),
            ));
        }
        let p = (
            rng.random_range(margin..w as f64 - margin),
            rng.random_range(margin..h as f64 - margin),
        );
        let clear_of_others = distractors
            .iter()
            .all(|d| (d.0 - p.0).hypot(d.1 - p.1) >= cfg.min_separation.max(4.0 * cfg.nucleus_radius.1));
        if clear(&cells, p, keep_out) && clear_of_others {
            distractors.push(p);
        }
    }
    let distractor_radius: Vec<f64> = distractors.iter().map(|_| uniform(&mut rng, cfg.nucleus_radius)).collect();

    // green: bodies, processes, bridges
    let mut green = Canvas::new(w, h);
    let mut strokes: Vec<Vec<usize>> = vec![Vec::new(); cells.len()];
    for (i, c) in cells.iter().enumerate() {
        green.shell(c.centre.0, c.centre.1, c.body_radius, c.shell_thickness, c.body_amplitude);
        let n = rng.random_range(cfg.process_count.0..=cfg.process_count.1);
        let start_angle = rng.random_range(0.0..std::f64::consts::TAU);
        for k in 0..n {
            let angle = start_angle + k as f64 * std::f64::consts::TAU / n as f64 + rng.random_range(-0.4..0.4);
            let rim = (
                c.centre.0 + (c.body_radius - 1.0) * angle.cos(),
                c.centre.1 + (c.body_radius - 1.0) * angle.sin(),
            );
            let length = uniform(&mut rng, cfg.process_length);
            let path = random_walk(&mut rng, rim, angle, length);
            let amp = c.body_amplitude * uniform(&mut rng, cfg.process_fraction);
            let width = uniform(&mut rng, cfg.process_width);
            green.stroke(&path, width, amp, &mut strokes[i]);
        }
    }
    for &(i, j) in &pairs {
        // one process from each cell, reaching into the other's body
        for (from, to) in [(i, j), (j, i)] {
            let (a, b) = (&cells[from], &cells[to]);
            let d = (b.centre.0 - a.centre.0).hypot(b.centre.1 - a.centre.1);
            let (ux, uy) = ((b.centre.0 - a.centre.0) / d, (b.centre.1 - a.centre.1) / d);
            let side = if from == i { 1.0 } else { -1.0 };
            let lateral = side * rng.random_range(2.0..5.0);
            let start = (
                a.centre.0 + ux * (a.body_radius - 1.0) - uy * lateral,
                a.centre.1 + uy * (a.body_radius - 1.0) + ux * lateral,
            );
            let end = (
                b.centre.0 - ux * (b.body_radius * 0.5) + uy * lateral,
                b.centre.1 - uy * (b.body_radius * 0.5) - ux * lateral,
            );
            let path = bridge(&mut rng, start, end);
            let amp = a.body_amplitude * uniform(&mut rng, cfg.process_fraction);
            let width = uniform(&mut rng, cfg.process_width);
            green.stroke(&path, width, amp, &mut strokes[from]);
        }
    }

    let mut scratch = Vec::new();
    for _ in 0..cfg.meshwork_strokes {
        let start = (rng.random_range(0.0..w as f64), rng.random_range(0.0..h as f64));
        let angle = rng.random_range(0.0..std::f64::consts::TAU);
        let length = uniform(&mut rng, cfg.meshwork_length);
        let path = random_walk(&mut rng, start, angle, length);
        let amp = uniform(&mut rng, cfg.meshwork_amplitude);
        let width = uniform(&mut rng, cfg.process_width);
        green.stroke(&path, width, amp, &mut scratch);
        scratch.clear();
    }

    let crossing_pairs = crossing(&strokes, w * h);

    // white: nuclei and distractors
    let mut white = Canvas::new(w, h);
    for c in &cells {
        white.sphere(c.centre.0, c.centre.1, c.nucleus_radius, c.nucleus_amplitude);
    }
    for (p, &r) in distractors.iter().zip(&distractor_radius) {
        white.sphere(p.0, p.1, r, cfg.nucleus_amplitude);
    }

    let haze = haze_field(&mut rng, cfg);
    let bg = cfg.background_level;
    let clean_white: Vec<f64> = white.v.iter().map(|v| (bg + v).clamp(0.0, 1.0)).collect();
    let noise = Normal::new(0.0, cfg.noise_sigma.max(f64::MIN_POSITIVE)).expect("valid sigma");
    let mut noisy = |v: f64| {
        let n = if cfg.noise_sigma > 0.0 { noise.sample(&mut rng) } else { 0.0 };
        (v + n).clamp(0.0, 1.0)
    };
    let green_px: Vec<f64> = green
        .v
        .iter()
        .zip(&haze)
        .map(|(g, z)| noisy(bg + z + g))
        .collect();
    let white_px: Vec<f64> = clean_white.iter().map(|&v| noisy(v)).collect();

    let truth = GroundTruth::from_centroids(
        format!("seed{}", cfg.seed),
        &cells.iter().map(|c| c.centre).collect::<Vec<_>>(),
    );
    Ok(SynthSample {
        green: IntensityImage::new(w, h, green_px)?,
        white: IntensityImage::new(w, h, white_px)?,
        clean_white: IntensityImage::new(w, h, clean_white)?,
        truth,
        cells,
        distractors,
        crossing_pairs,
    })
}

/// Pairs of cells whose stroke pixel sets intersect.
fn crossing(strokes: &[Vec<usize>], n: usize) -> Vec<(usize, usize)> {
    let mut owner: Vec<u32> = vec![u32::MAX; n];
    let mut found = std::collections::BTreeSet::new();
    for (i, s) in strokes.iter().enumerate() {
        for &p in s {
            let o = owner[p];
            if o == u32::MAX || o as usize == i {
                owner[p] = i as u32;
            } else {
                found.insert((o as usize, i));
            }
        }
    }
    found.into_iter().collect()
}

fn haze_field(rng: &mut ChaCha8Rng, cfg: &SynthConfig) -> Vec<f64> {
    let (w, h) = (cfg.width, cfg.height);
    let mut field = vec![0.0; w * h];
    if cfg.haze_amplitude <= 0.0 || cfg.haze_blobs == 0 {
        return field;
    }
    let scale = w.max(h) as f64;
    for _ in 0..cfg.haze_blobs {
        let cx = rng.random_range(0.0..w as f64);
        let cy = rng.random_range(0.0..h as f64);
        let sigma = rng.random_range(0.08..0.2) * scale;
        let amp = rng.random_range(0.5..1.0) * cfg.haze_amplitude;
        let inv = 1.0 / (2.0 * sigma * sigma);
        let gx: Vec<f64> = (0..w).map(|x| (-(x as f64 - cx).powi(2) * inv).exp()).collect();
        for y in 0..h {
            let gy = amp * (-(y as f64 - cy).powi(2) * inv).exp();
            for (f, g) in field[y * w..(y + 1) * w].iter_mut().zip(&gx) {
                *f += gy * g;
            }
        }
    }
    let peak = field.iter().cloned().fold(0.0, f64::max);
    if peak > cfg.haze_amplitude {
        let k = cfg.haze_amplitude / peak;
        field.iter_mut().for_each(|f| *f *= k);
    }
    field
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Easy,
    Hard,
}

impl Suite {
    pub const SIZE: usize = 50;

    pub fn name(self) -> &'static str {
        match self {
            Suite::Easy => "easy",
            Suite::Hard => "hard",
        }
    }

    pub fn config(self, seed: u64) -> SynthConfig {
        match self {
            Suite::Easy => SynthConfig::easy(seed),
            Suite::Hard => SynthConfig::hard(seed),
        }
    }
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "easy" => Ok(Suite::Easy),
            "hard" => Ok(Suite::Hard),
            other => Err(Error::InvalidArgument(format!("unknown suite {other:?}"))),
        }
    }
}

/// Per-image configs of a suite; ids are `<suite>_<index:03>`.
pub fn suite_configs(suite: Suite, seed: u64, count: usize) -> Vec<(String, SynthConfig)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| (format!("{}_{i:03}", suite.name()), suite.config(rng.next_u64())))
        .collect()
}

/// Generates a suite of `count` images. Hard-suite images are redrawn with
/// the next seed until at least one pair of cells has crossing processes.
pub fn generate_suite(suite: Suite, seed: u64, count: usize) -> Result<Vec<(String, SynthSample)>> {
    suite_configs(suite, seed, count)
        .into_iter()
        .map(|(id, mut cfg)| {
            let mut sample = generate(&cfg)?;
            let mut tries = 0;
            while suite == Suite::Hard && sample.crossing_pairs.is_empty() {
                tries += 1;
                if tries > 16 {
                    return Err(placement_error("crossing process pairs", 0, 1, format!("image {id}")));
                }
                cfg.seed = cfg.seed.wrapping_add(1);
                sample = generate(&cfg)?;
            }
            sample.truth.image_id = id.clone();
            Ok((id, sample))
        })
        .collect()
}

/// Writes 16-bit `<id>_green.png` / `<id>_white.png`, `truth.csv` and
/// `manifest.csv` (paths relative to `dir`).
pub fn write_suite(dir: impl AsRef<Path>, samples: &[(String, SynthSample)]) -> Result<()> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut entries = Vec::new();
    for (id, s) in samples {
        let g = format!("{id}_green.png");
        let wh = format!("{id}_white.png");
        write_atomic(dir.join(&g), &encode_gray16(s.green.width(), s.green.height(), s.green.pixels()))?;
        write_atomic(dir.join(&wh), &encode_gray16(s.white.width(), s.white.height(), s.white.pixels()))?;
        entries.push(ManifestEntry {
            image_id: id.clone(),
            green_path: g.into(),
            white_path: wh.into(),
            truth_path: "truth.csv".into(),
        });
    }
    let truths: Vec<GroundTruth> = samples.iter().map(|(_, s)| s.truth.clone()).collect();
    write_atomic(dir.join("truth.csv"), &write_truth_csv(&truths))?;
    write_atomic(dir.join("manifest.csv"), &write_manifest(&entries))
}
