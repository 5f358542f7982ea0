//! Foreground masks and every way the pipeline produces them: Otsu, fixed
//! saliency levels, Canny edges with hole filling, the white-channel fusion,
//! and the Bradley local-mean baseline.

use std::collections::VecDeque;

use crate::error::{check_dims, Error, Result};
use crate::image::{bin_of, convolve_separable, histogram, GaussianKernel, IntensityImage};
use crate::saliency::SaliencyMap;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryMap {
    width: usize,
    height: usize,
    bits: Vec<bool>,
}

impl BinaryMap {
    pub fn new(width: usize, height: usize, bits: Vec<bool>) -> Self {
        assert_eq!(bits.len(), width * height, "binary map size");
        BinaryMap {
            width,
            height,
            bits,
        }
    }

    pub fn empty(width: usize, height: usize) -> Self {
        Self::new(width, height, vec![false; width * height])
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut bits = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                bits.push(f(x, y));
            }
        }
        Self::new(width, height, bits)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn get(&self, x: usize, y: usize) -> bool {
        self.bits[y * self.width + x]
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|b| **b).count()
    }

    pub fn is_subset_of(&self, other: &BinaryMap) -> bool {
        self.dims() == other.dims() && self.bits.iter().zip(&other.bits).all(|(a, b)| !a || *b)
    }

    pub fn or(&self, other: &BinaryMap) -> Result<BinaryMap> {
        check_dims(self.dims(), other.dims())?;
        Ok(Self::new(
            self.width,
            self.height,
            self.bits.iter().zip(&other.bits).map(|(a, b)| *a || *b).collect(),
        ))
    }

    pub fn and(&self, other: &BinaryMap) -> Result<BinaryMap> {
        check_dims(self.dims(), other.dims())?;
        Ok(Self::new(
            self.width,
            self.height,
            self.bits.iter().zip(&other.bits).map(|(a, b)| *a && *b).collect(),
        ))
    }

    pub fn to_image(&self) -> IntensityImage {
        IntensityImage::new(
            self.width,
            self.height,
            self.bits.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect(),
        )
        .expect("binary map has valid dimensions")
    }
}

/// Otsu's threshold over a histogram, as a bin index.
///
/// Class 0 is `bins[0..=t]`. Between-class variance is evaluated from exact
/// integer moments, so splits that differ only by empty bins compare equal
/// and the lowest such `t` wins. A histogram whose mass sits in one bin
/// returns that bin.
pub fn otsu_bin(hist: &[u64]) -> Result<usize> {
    let total: u64 = hist.iter().sum();
    if hist.is_empty() || total == 0 {
        return Err(Error::EmptyHistogram);
    }
    let occupied: Vec<usize> = (0..hist.len()).filter(|&i| hist[i] > 0).collect();
    if occupied.len() == 1 {
        return Ok(occupied[0]);
    }

    let n = total as i128;
    let moment: i128 = hist.iter().enumerate().map(|(i, &c)| i as i128 * c as i128).sum();
    let mut w0: i128 = 0;
    let mut s0: i128 = 0;
    let mut best = (0usize, f64::NEG_INFINITY);
    for (t, &c) in hist.iter().enumerate().take(hist.len() - 1) {
        w0 += c as i128;
        s0 += t as i128 * c as i128;
        let w1 = n - w0;
        if w0 == 0 || w1 == 0 {
            // one class empty: variance zero
            if best.1 < 0.0 {
                best = (t, 0.0);
            }
            continue;
        }
        // n^2 * sigma_b^2 = (s0 * n - moment * w0)^2 / (w0 * w1)
        let d = (s0 * n - moment * w0) as f64;
        let score = d * d / (w0 as f64 * w1 as f64);
        if score > best.1 {
            best = (t, score);
        }
    }
    Ok(best.0)
}

/// Otsu's threshold mapped to `[0, 1]` as `bin / (bins - 1)`.
pub fn otsu_threshold(hist: &[u64]) -> Result<f64> {
    let t = otsu_bin(hist)?;
    Ok(t as f64 / (hist.len() - 1) as f64)
}

/// Foreground is every pixel whose 256-bin histogram bin lies strictly above
/// the Otsu bin.
pub fn otsu_binarize(img: &IntensityImage) -> BinaryMap {
    const BINS: usize = 256;
    let t = otsu_bin(&histogram(img, BINS)).expect("non-empty image has positive mass");
    BinaryMap::new(
        img.width(),
        img.height(),
        img.pixels().iter().map(|&v| bin_of(v, BINS) > t).collect(),
    )
}

/// Foreground where saliency is at or above `level`. Expects a normalized
/// map so that `level` lives in `[0, 1]`.
pub fn threshold_at(map: &SaliencyMap, level: f64) -> BinaryMap {
    debug_assert!(map.is_normalized(), "saliency levels apply to normalized maps");
    BinaryMap::new(
        map.width(),
        map.height(),
        map.values().iter().map(|&v| v >= level).collect(),
    )
}

#[derive(Clone, Debug, PartialEq)]
pub struct CannyParams {
    pub blur_kernel: GaussianKernel,
    /// Weak-edge threshold as a fraction of the maximum gradient magnitude.
    pub low_ratio: f64,
    /// Strong-edge threshold as a fraction of the maximum gradient magnitude.
    pub high_ratio: f64,
}

impl CannyParams {
    pub fn new(blur_kernel: GaussianKernel, low_ratio: f64, high_ratio: f64) -> Result<Self> {
        if !(0.0 < low_ratio && low_ratio < high_ratio && high_ratio < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "canny ratios must satisfy 0 < low ({low_ratio}) < high ({high_ratio}) < 1"
            )));
        }
        Ok(CannyParams {
            blur_kernel,
            low_ratio,
            high_ratio,
        })
    }
}

impl Default for CannyParams {
    fn default() -> Self {
        CannyParams {
            blur_kernel: GaussianKernel::binomial(2),
            low_ratio: 0.1,
            high_ratio: 0.25,
        }
    }
}

/// Sobel gradients with replicated borders, returned as `(gx, gy)`.
pub(crate) fn sobel(values: &[f64], width: usize, height: usize) -> (Vec<f64>, Vec<f64>) {
    let (w, h) = (width as isize, height as isize);
    let at = |x: isize, y: isize| -> f64 {
        values[(y.clamp(0, h - 1) * w + x.clamp(0, w - 1)) as usize]
    };
    let mut gx = vec![0.0; values.len()];
    let mut gy = vec![0.0; values.len()];
    for y in 0..h {
        for x in 0..w {
            let i = (y * w + x) as usize;
            gx[i] = (at(x + 1, y - 1) + 2.0 * at(x + 1, y) + at(x + 1, y + 1))
                - (at(x - 1, y - 1) + 2.0 * at(x - 1, y) + at(x - 1, y + 1));
            gy[i] = (at(x - 1, y + 1) + 2.0 * at(x, y + 1) + at(x + 1, y + 1))
                - (at(x - 1, y - 1) + 2.0 * at(x, y - 1) + at(x + 1, y - 1));
        }
    }
    (gx, gy)
}

/// Canny edge detector: blur, Sobel, non-maximum suppression, double
/// threshold relative to the peak gradient, 8-connected hysteresis.
///
/// Along the gradient direction a pixel survives suppression when it is
/// strictly greater than its predecessor and at least its successor, so a
/// symmetric ridge yields a one-pixel line. The outermost ring of pixels
/// never carries an edge.
pub fn canny_edges(img: &IntensityImage, params: &CannyParams) -> BinaryMap {
    let (width, height) = img.dims();
    let mut edges = BinaryMap::empty(width, height);
    if width < 3 || height < 3 {
        return edges;
    }
    let blurred = convolve_separable(img.pixels(), width, height, &params.blur_kernel);
    let (gx, gy) = sobel(&blurred, width, height);
    let mag: Vec<f64> = gx.iter().zip(&gy).map(|(a, b)| a.hypot(*b)).collect();
    let peak = mag.iter().copied().fold(0.0, f64::max);
    if peak <= 0.0 {
        return edges;
    }

    let mut thin = vec![0.0; mag.len()];
    for y in 1..height - 1 {
        for x in 1..width - 1 {
            let i = y * width + x;
            let m = mag[i];
            if m == 0.0 {
                continue;
            }
            let mut angle = gy[i].atan2(gx[i]).to_degrees();
            if angle < 0.0 {
                angle += 180.0;
            }
            // (predecessor, successor) along the gradient
            let (prev, next) = if !(22.5..157.5).contains(&angle) {
                (i - 1, i + 1)
            } else if angle < 67.5 {
                (i - width - 1, i + width + 1)
            } else if angle < 112.5 {
                (i - width, i + width)
            } else {
                (i - width + 1, i + width - 1)
            };
            if m > mag[prev] && m >= mag[next] {
                thin[i] = m;
            }
        }
    }

    let high = params.high_ratio * peak;
    let low = params.low_ratio * peak;
    let mut stack = Vec::new();
    for i in 0..thin.len() {
        if thin[i] >= high && !edges.bits[i] {
            edges.bits[i] = true;
            stack.push(i);
            while let Some(p) = stack.pop() {
                let (px, py) = ((p % width) as isize, (p / width) as isize);
                for dy in -1..=1isize {
                    for dx in -1..=1isize {
                        let (nx, ny) = (px + dx, py + dy);
                        if (dx, dy) == (0, 0)
                            || nx < 0
                            || ny < 0
                            || nx >= width as isize
                            || ny >= height as isize
                        {
                            continue;
                        }
                        let q = ny as usize * width + nx as usize;
                        if !edges.bits[q] && thin[q] >= low {
                            edges.bits[q] = true;
                            stack.push(q);
                        }
                    }
                }
            }
        }
    }
    edges
}

/// Turns every background pocket that cannot reach the image border through
/// 4-connected background into foreground.
pub fn fill_holes(map: &BinaryMap) -> BinaryMap {
    let (w, h) = map.dims();
    let mut outside = vec![false; w * h];
    let mut queue = VecDeque::new();
    let seed = |i: usize, outside: &mut Vec<bool>, queue: &mut VecDeque<usize>| {
        if !map.bits[i] && !outside[i] {
            outside[i] = true;
            queue.push_back(i);
        }
    };
    for x in 0..w {
        seed(x, &mut outside, &mut queue);
        seed((h - 1) * w + x, &mut outside, &mut queue);
    }
    for y in 0..h {
        seed(y * w, &mut outside, &mut queue);
        seed(y * w + w - 1, &mut outside, &mut queue);
    }
    while let Some(i) = queue.pop_front() {
        let (x, y) = (i % w, i / w);
        let mut visit = |j: usize| {
            if !map.bits[j] && !outside[j] {
                outside[j] = true;
                queue.push_back(j);
            }
        };
        if x > 0 {
            visit(i - 1);
        }
        if x + 1 < w {
            visit(i + 1);
        }
        if y > 0 {
            visit(i - w);
        }
        if y + 1 < h {
            visit(i + w);
        }
    }
    BinaryMap::new(w, h, outside.into_iter().map(|o| !o).collect())
}

/// Final white-channel mask: Otsu mask OR hole-filled edge mask.
pub fn fuse_white(b1: &BinaryMap, b2: &BinaryMap) -> Result<BinaryMap> {
    b1.or(b2)
}

/// Summed-area table with a zero row and column prepended.
pub(crate) struct IntegralImage {
    stride: usize,
    sums: Vec<f64>,
}

impl IntegralImage {
    pub(crate) fn new(values: &[f64], width: usize, height: usize) -> Self {
        let stride = width + 1;
        let mut sums = vec![0.0; stride * (height + 1)];
        for y in 0..height {
            let mut row = 0.0;
            for x in 0..width {
                row += values[y * width + x];
                sums[(y + 1) * stride + x + 1] = sums[y * stride + x + 1] + row;
            }
        }
        IntegralImage { stride, sums }
    }

    /// Sum over `x0..x1` by `y0..y1` (half-open).
    pub(crate) fn sum(&self, x0: usize, y0: usize, x1: usize, y1: usize) -> f64 {
        let s = self.stride;
        self.sums[y1 * s + x1] - self.sums[y0 * s + x1] - self.sums[y1 * s + x0]
            + self.sums[y0 * s + x0]
    }
}

/// Window means clipped to the image, via an integral image.
pub fn local_means(img: &IntensityImage, window: usize) -> Vec<f64> {
    let (w, h) = img.dims();
    let half = window / 2;
    let table = IntegralImage::new(img.pixels(), w, h);
    let mut means = Vec::with_capacity(w * h);
    for y in 0..h {
        let (y0, y1) = (y.saturating_sub(half), (y + half + 1).min(h));
        for x in 0..w {
            let (x0, x1) = (x.saturating_sub(half), (x + half + 1).min(w));
            let area = ((x1 - x0) * (y1 - y0)) as f64;
            means.push(table.sum(x0, y0, x1, y1) / area);
        }
    }
    means
}

/// Bradley's adaptive threshold: foreground iff the pixel exceeds its
/// window mean scaled by `1 - sensitivity`. Differences below `1e-12` count
/// as equal, absorbing integral-image rounding.
pub fn bradley_threshold(img: &IntensityImage, window: usize, sensitivity: f64) -> Result<BinaryMap> {
    if window < 3 || window.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "bradley window must be odd and at least 3, got {window}"
        )));
    }
    if !(0.0..=1.0).contains(&sensitivity) {
        return Err(Error::InvalidArgument(format!(
            "bradley sensitivity must be in [0, 1], got {sensitivity}"
        )));
    }
    let means = local_means(img, window);
    Ok(BinaryMap::new(
        img.width(),
        img.height(),
        img.pixels()
            .iter()
            .zip(&means)
            .map(|(&v, &m)| v - m * (1.0 - sensitivity) > 1e-12)
            .collect(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regions::{label_components, Connectivity};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn between_class_oracle(hist: &[u64]) -> usize {
        // exact rational comparison by cross-multiplication in u128 / i128
        let n: i128 = hist.iter().map(|&c| c as i128).sum();
        let m: i128 = hist.iter().enumerate().map(|(i, &c)| i as i128 * c as i128).sum();
        let occupied = hist.iter().filter(|&&c| c > 0).count();
        if occupied == 1 {
            return hist.iter().position(|&c| c > 0).unwrap();
        }
        let mut best: Option<(usize, i128, i128)> = None;
        for t in 0..hist.len() - 1 {
            let w0: i128 = hist[..=t].iter().map(|&c| c as i128).sum();
            let s0: i128 = hist[..=t].iter().enumerate().map(|(i, &c)| i as i128 * c as i128).sum();
            let w1 = n - w0;
            let (num, den) = if w0 == 0 || w1 == 0 {
                (0, 1)
            } else {
                let d = s0 * n - m * w0;
                (d * d, w0 * w1)
            };
            match best {
                None => best = Some((t, num, den)),
                Some((_, bn, bd)) if num * bd > bn * den => best = Some((t, num, den)),
                _ => {}
            }
        }
        best.unwrap().0
    }

    #[test]
    fn otsu_two_spikes_takes_lowest_separator() {
        let mut hist = vec![0u64; 256];
        hist[50] = 500;
        hist[200] = 500;
        assert_eq!(otsu_threshold(&hist).unwrap(), 50.0 / 255.0);
    }

    #[test]
    fn otsu_degenerate_and_empty() {
        let mut hist = vec![0u64; 256];
        hist[0] = 10;
        assert_eq!(otsu_threshold(&hist).unwrap(), 0.0);
        let mut hist = vec![0u64; 256];
        hist[100] = 7;
        assert_eq!(otsu_bin(&hist).unwrap(), 100);
        assert!(matches!(otsu_bin(&[0, 0, 0]), Err(Error::EmptyHistogram)));
        assert!(matches!(otsu_bin(&[]), Err(Error::EmptyHistogram)));
    }

    #[test]
    fn otsu_matches_small_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let bins = rng.random_range(2..40);
            let hist: Vec<u64> = (0..bins)
                .map(|_| if rng.random_bool(0.3) { 0 } else { rng.random_range(0..50) })
                .collect();
            if hist.iter().sum::<u64>() == 0 {
                continue;
            }
            assert_eq!(otsu_bin(&hist).unwrap(), between_class_oracle(&hist), "{hist:?}");
        }
    }

    #[test]
    fn threshold_boundaries() {
        let map = SaliencyMap::from_values(3, 1, vec![0.0, 0.5, 1.0]).normalize();
        assert_eq!(threshold_at(&map, 0.0).bits(), &[true, true, true]);
        assert_eq!(threshold_at(&map, 0.5).bits(), &[false, true, true]);
        assert_eq!(threshold_at(&map, 1.0 + 1e-9).count(), 0);
    }

    fn square(w: usize, x0: usize, x1: usize) -> IntensityImage {
        IntensityImage::from_fn(w, w, |x, y| {
            if (x0..x1).contains(&x) && (x0..x1).contains(&y) {
                1.0
            } else {
                0.0
            }
        })
        .unwrap()
    }

    #[test]
    fn canny_on_constant_image() {
        let img = IntensityImage::filled(16, 16, 0.3).unwrap();
        assert_eq!(canny_edges(&img, &CannyParams::default()).count(), 0);
    }

    #[test]
    fn canny_square_is_one_closed_loop() {
        let img = square(32, 11, 21);
        let edges = canny_edges(&img, &CannyParams::default());
        let loops = label_components(&edges, Connectivity::Eight);
        assert_eq!(loops.len(), 1);
        let filled = fill_holes(&edges);
        assert_eq!(label_components(&filled, Connectivity::Eight).len(), 1);
        // filling added an interior, so the loop is closed
        assert!(filled.count() > edges.count());
        // the loop surrounds the square boundary
        assert!(filled.get(15, 15) && filled.get(11, 11) && filled.get(20, 20));
        assert!(!filled.get(5, 5));
    }

    #[test]
    fn canny_vertical_step_is_single_pixel_wide() {
        let img = IntensityImage::from_fn(24, 24, |x, _| if x >= 12 { 0.8 } else { 0.2 }).unwrap();
        let edges = canny_edges(&img, &CannyParams::default());
        for y in 4..20 {
            let cols: Vec<usize> = (0..24).filter(|&x| edges.get(x, y)).collect();
            assert_eq!(cols.len(), 1, "row {y}: {cols:?}");
            assert!(cols[0] == 11 || cols[0] == 12);
        }
    }

    #[test]
    fn fill_holes_cases() {
        let ring = BinaryMap::from_fn(9, 9, |x, y| {
            
            (x == 2 || x == 6) && (2..=6).contains(&y)
                || (y == 2 || y == 6) && (2..=6).contains(&x)
        });
        let filled = fill_holes(&ring);
        assert_eq!(filled.count(), 25);

        let mut bits = ring.bits().to_vec();
        bits[2 * 9 + 4] = false;
        let gap = BinaryMap::new(9, 9, bits);
        assert_eq!(fill_holes(&gap), gap);

        let none = BinaryMap::empty(5, 4);
        assert_eq!(fill_holes(&none), none);
    }

    #[test]
    fn fill_holes_respects_background_four_connectivity() {
        // a diagonal gap in the ring does not let 4-connected background escape
        let ring = BinaryMap::from_fn(7, 7, |x, y| {
            let d = (x as i32 - 3).abs() + (y as i32 - 3).abs();
            d == 2
        });
        let filled = fill_holes(&ring);
        assert!(filled.get(3, 3));
    }

    #[test]
    fn fuse_white_examples() {
        let b2 = BinaryMap::from_fn(6, 4, |x, y| (x + y) % 3 == 0);
        assert_eq!(fuse_white(&BinaryMap::empty(6, 4), &b2).unwrap(), b2);
        let left = BinaryMap::from_fn(6, 4, |x, _| x < 3);
        let right = BinaryMap::from_fn(6, 4, |x, _| x >= 3);
        assert_eq!(fuse_white(&left, &right).unwrap().count(), 24);
        assert!(matches!(
            fuse_white(&left, &BinaryMap::empty(4, 6)),
            Err(Error::DimensionMismatch { .. })
        ));

        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let a = BinaryMap::from_fn(20, 20, |_, _| rng.random_bool(0.4));
        let b = BinaryMap::from_fn(20, 20, |_, _| rng.random_bool(0.4));
        let fused = fuse_white(&a, &b).unwrap();
        for y in 0..20 {
            for x in 0..20 {
                assert_eq!(fused.get(x, y), a.get(x, y) || b.get(x, y));
            }
        }
    }

    fn brute_window_means(img: &IntensityImage, window: usize) -> Vec<f64> {
        let (w, h) = img.dims();
        let half = (window / 2) as isize;
        let mut out = Vec::new();
        for y in 0..h as isize {
            for x in 0..w as isize {
                let (mut sum, mut n) = (0.0, 0usize);
                for yy in y - half..=y + half {
                    for xx in x - half..=x + half {
                        if xx >= 0 && yy >= 0 && xx < w as isize && yy < h as isize {
                            sum += img.get(xx as usize, yy as usize);
                            n += 1;
                        }
                    }
                }
                out.push(sum / n as f64);
            }
        }
        out
    }

    #[test]
    fn integral_means_match_sliding_window() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for window in [3, 5, 9, 31] {
            let img = IntensityImage::from_fn(23, 17, |_, _| rng.random()).unwrap();
            for (a, b) in local_means(&img, window).iter().zip(brute_window_means(&img, window)) {
                assert!((a - b).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn bradley_cases() {
        let flat = IntensityImage::filled(10, 10, 0.4).unwrap();
        assert_eq!(bradley_threshold(&flat, 5, 0.0).unwrap().count(), 0);

        let img = IntensityImage::from_fn(40, 40, |x, y| {
            if (18..22).contains(&x) && (18..22).contains(&y) {
                0.9
            } else {
                0.1
            }
        })
        .unwrap();
        let map = bradley_threshold(&img, 31, 0.15).unwrap();
        let means = brute_window_means(&img, 31);
        for ((&bit, &v), &m) in map.bits().iter().zip(img.pixels()).zip(&means) {
            assert_eq!(bit, v > m * 0.85);
        }
        for y in 18..22 {
            for x in 18..22 {
                assert!(map.get(x, y));
            }
        }
        // flat background sits above a discounted mean of itself
        assert!(map.get(2, 2));
        let strict = bradley_threshold(&img, 31, 0.0).unwrap();
        assert!(!strict.get(2, 2));

        assert!(bradley_threshold(&img, 4, 0.1).is_err());
        assert!(bradley_threshold(&img, 1, 0.1).is_err());
        assert!(bradley_threshold(&img, 5, 1.5).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn maps(w: usize, h: usize) -> impl Strategy<Value = BinaryMap> {
            prop::collection::vec(any::<bool>(), w * h).prop_map(move |b| BinaryMap::new(w, h, b))
        }

        proptest! {
            #[test]
            fn fill_holes_idempotent_superset(m in maps(12, 9)) {
                let f = fill_holes(&m);
                prop_assert!(m.is_subset_of(&f));
                prop_assert_eq!(fill_holes(&f), f);
            }

            #[test]
            fn fusion_algebra(a in maps(7, 5), b in maps(7, 5), c in maps(7, 5)) {
                prop_assert_eq!(fuse_white(&a, &b).unwrap(), fuse_white(&b, &a).unwrap());
                prop_assert_eq!(
                    fuse_white(&fuse_white(&a, &b).unwrap(), &c).unwrap(),
                    fuse_white(&a, &fuse_white(&b, &c).unwrap()).unwrap()
                );
                prop_assert_eq!(fuse_white(&a, &a).unwrap(), a);
            }

            #[test]
            fn threshold_is_antitone(v in prop::collection::vec(0.0f64..=1.0, 30), a in 0.0f64..=1.0, b in 0.0f64..=1.0) {
                let map = SaliencyMap::from_values(6, 5, v).normalize();
                let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
                prop_assert!(threshold_at(&map, hi).is_subset_of(&threshold_at(&map, lo)));
            }
        }
    }
}
