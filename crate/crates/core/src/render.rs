//! RGB renderings for inspection: detection overlays, label colourings and
//! cost-curve plots.

use crate::error::{check_dims, Result};
use crate::image::IntensityImage;
use crate::level_select::MinimaxResult;
use crate::segment::SegmentationResult;

pub type Rgb = [u8; 3];

const BOUNDARY: Rgb = [255, 220, 0];
const CENTROID: Rgb = [255, 0, 255];
const AXIS: Rgb = [90, 90, 90];
const CURVE: Rgb = [30, 110, 220];
const CHOSEN: Rgb = [220, 40, 40];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RgbImage {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<Rgb>,
}

impl RgbImage {
    pub fn filled(width: usize, height: usize, colour: Rgb) -> Self {
        RgbImage {
            width,
            height,
            pixels: vec![colour; width * height],
        }
    }

    fn put(&mut self, x: isize, y: isize, colour: Rgb) {
        if x >= 0 && y >= 0 && (x as usize) < self.width && (y as usize) < self.height {
            self.pixels[y as usize * self.width + x as usize] = colour;
        }
    }

    fn line(&mut self, (x0, y0): (isize, isize), (x1, y1): (isize, isize), colour: Rgb) {
        let (dx, dy) = ((x1 - x0).abs(), -(y1 - y0).abs());
        let (sx, sy) = ((x1 - x0).signum(), (y1 - y0).signum());
        let (mut x, mut y, mut err) = (x0, y0, dx + dy);
        loop {
            self.put(x, y, colour);
            if x == x1 && y == y1 {
                break;
            }
            let e2 = 2 * err;
            if e2 >= dy {
                err += dy;
                x += sx;
            }
            if e2 <= dx {
                err += dx;
                y += sy;
            }
        }
    }

    fn cross(&mut self, x: isize, y: isize, arm: isize, colour: Rgb) {
        self.line((x - arm, y), (x + arm, y), colour);
        self.line((x, y - arm), (x, y + arm), colour);
    }

    pub fn to_png(&self) -> Vec<u8> {
        crate::io::encode_rgb8(self.width, self.height, &self.pixels)
    }
}

/// Green channel in green, white channel as grey on top.
pub fn composite(green: &IntensityImage, white: &IntensityImage) -> Result<RgbImage> {
    check_dims(green.dims(), white.dims())?;
    let byte = |v: f64| (v.clamp(0.0, 1.0) * 255.0).round() as u8;
    let pixels = green
        .pixels()
        .iter()
        .zip(white.pixels())
        .map(|(&g, &w)| [byte(w), byte(g.max(w)), byte(w)])
        .collect();
    Ok(RgbImage {
        width: green.width(),
        height: green.height(),
        pixels,
    })
}

/// Pixels whose 4-neighbourhood contains a different label.
pub fn label_boundaries(width: usize, height: usize, labels: &[u32]) -> Vec<bool> {
    let mut out = vec![false; labels.len()];
    for y in 0..height {
        for x in 0..width {
            let i = y * width + x;
            let l = labels[i];
            if l == 0 {
                continue;
            }
            let differs = |j: usize| labels[j] != l;
            out[i] = x == 0
                || y == 0
                || x + 1 == width
                || y + 1 == height
                || differs(i - 1)
                || differs(i + 1)
                || differs(i - width)
                || differs(i + width);
        }
    }
    out
}

/// Segment boundaries and nucleus centroids drawn over the composite.
pub fn overlay(green: &IntensityImage, white: &IntensityImage, result: &SegmentationResult) -> Result<RgbImage> {
    let mut img = composite(green, white)?;
    check_dims((img.width, img.height), (result.width, result.height))?;
    for (i, edge) in label_boundaries(result.width, result.height, &result.label_map)
        .into_iter()
        .enumerate()
    {
        if edge {
            img.pixels[i] = BOUNDARY;
        }
    }
    for d in &result.detections {
        let (x, y) = d.nucleus_centroid;
        img.cross(x.round() as isize, y.round() as isize, 3, CENTROID);
    }
    Ok(img)
}

/// Deterministic distinct-ish colour per label; 0 is black.
pub fn label_colour(label: u32) -> Rgb {
    if label == 0 {
        return [0, 0, 0];
    }
    let mut h = label.wrapping_mul(0x9E37_79B9);
    h ^= h >> 15;
    h = h.wrapping_mul(0x85EB_CA6B);
    h ^= h >> 13;
    let c = |s: u32| 64 + ((h >> s) & 0xFF) as u8 % 192;
    [c(0), c(8), c(16)]
}

pub fn colour_labels(width: usize, height: usize, labels: &[u32]) -> RgbImage {
    RgbImage {
        width,
        height,
        pixels: labels.iter().map(|&l| label_colour(l)).collect(),
    }
}

struct Panel {
    x0: isize,
    y0: isize,
    w: isize,
    h: isize,
}

impl Panel {
    fn frame(&self, img: &mut RgbImage) {
        let (x1, y1) = (self.x0 + self.w, self.y0 + self.h);
        img.line((self.x0, y1), (x1, y1), AXIS);
        img.line((self.x0, self.y0), (self.x0, y1), AXIS);
    }

    /// Polyline of `(x, y)` points with `x` in `[0, 1]`; non-finite `y`
    /// values break the line. `y` is plotted on a log scale.
    fn plot(&self, img: &mut RgbImage, points: &[(f64, f64)], colour: Rgb) -> Option<(f64, f64)> {
        let logs: Vec<(f64, f64)> = points
            .iter()
            .filter(|p| p.1.is_finite() && p.1 > 0.0)
            .map(|&(x, y)| (x, y.log10()))
            .collect();
        let lo = logs.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
        let hi = logs.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
        if !lo.is_finite() {
            return None;
        }
        let span = if hi > lo { hi - lo } else { 1.0 };
        let map = |x: f64, y: f64| -> (isize, isize) {
            let px = self.x0 + (x * self.w as f64).round() as isize;
            let py = self.y0 + self.h - (((y.log10() - lo) / span) * self.h as f64).round() as isize;
            (px, py)
        };
        let mut prev = None;
        for &(x, y) in points {
            if y.is_finite() && y > 0.0 {
                let p = map(x, y);
                if let Some(q) = prev {
                    img.line(q, p, colour);
                }
                prev = Some(p);
            } else {
                prev = None;
            }
        }
        Some((lo, span))
    }

    fn mark(&self, img: &mut RgbImage, x: f64, y: f64, scale: (f64, f64)) {
        let (lo, span) = scale;
        let px = self.x0 + (x * self.w as f64).round() as isize;
        let py = self.y0 + self.h - (((y.log10() - lo) / span) * self.h as f64).round() as isize;
        img.line((px, self.y0), (px, self.y0 + self.h), [235, 190, 190]);
        img.cross(px, py, 4, CHOSEN);
    }
}

/// Two panels on a log cost axis: `E(λ*, L)` against the level, with the
/// chosen level marked, and `E*(λ)` against the weight, with `λ*` marked.
pub fn cost_plot(selection: &MinimaxResult, width: usize, height: usize) -> RgbImage {
    let mut img = RgbImage::filled(width, height, [255, 255, 255]);
    let margin = 12isize;
    let half = width as isize / 2;
    let left = Panel {
        x0: margin,
        y0: margin,
        w: half - 2 * margin,
        h: height as isize - 2 * margin,
    };
    let right = Panel {
        x0: half + margin,
        ..left
    };
    left.frame(&mut img);
    right.frame(&mut img);

    let chosen = selection
        .curves
        .iter()
        .find(|c| c.lambda == selection.lambda_star);
    if let Some(curve) = chosen {
        let pts: Vec<(f64, f64)> = curve.samples.iter().map(|s| (s.level, s.cost)).collect();
        if let Some(scale) = left.plot(&mut img, &pts, CURVE) {
            left.mark(&mut img, selection.l_g, selection.e_star, scale);
        }
    }
    let e_star = selection.e_star_curve();
    if let Some(scale) = right.plot(&mut img, &e_star, CURVE) {
        right.mark(&mut img, selection.lambda_star, selection.e_star, scale);
    }
    img
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::level_select::{minimax_select, uniform_grid, LevelStats, RatioTable};

    #[test]
    fn boundaries_ring_a_square() {
        let w = 6;
        let mut labels = vec![0u32; 36];
        for y in 1..5 {
            for x in 1..5 {
                labels[y * w + x] = 1;
            }
        }
        let b = label_boundaries(w, 6, &labels);
        assert_eq!(b.iter().filter(|&&e| e).count(), 12);
        assert!(!b[2 * w + 2] && b[w + 1]);
    }

    #[test]
    fn overlay_marks_centroids_and_keeps_size() {
        let g = IntensityImage::filled(20, 10, 0.1).unwrap();
        let wh = IntensityImage::filled(20, 10, 0.0).unwrap();
        let empty = SegmentationResult::empty(20, 10);
        let img = overlay(&g, &wh, &empty).unwrap();
        assert_eq!(img.pixels.len(), 200);
        assert!(img.pixels.iter().all(|&p| p == [0, 26, 0]));
        let bad = SegmentationResult::empty(5, 5);
        assert!(overlay(&g, &wh, &bad).is_err());
    }

    #[test]
    fn label_colours_are_stable_and_nonblack() {
        assert_eq!(label_colour(0), [0, 0, 0]);
        for l in 1..50 {
            assert_eq!(label_colour(l), label_colour(l));
            assert!(label_colour(l).iter().all(|&c| c >= 64));
        }
    }

    #[test]
    fn cost_plot_draws_something() {
        let rows = (0..8)
            .map(|i| LevelStats {
                level: i as f64 / 7.0,
                r1_mean: 1.0 + i as f64,
                r2_mean: 10.0 - i as f64,
                m_count: 3,
            })
            .collect();
        let table = RatioTable::new(rows).unwrap();
        let sel = minimax_select(&uniform_grid(11), &table).unwrap();
        let img = cost_plot(&sel, 200, 100);
        assert!(img.pixels.contains(&CURVE));
        assert!(img.pixels.contains(&CHOSEN));
        assert_eq!(img.to_png()[1..4], *b"PNG");
    }
}
