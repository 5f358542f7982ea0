//! Pixel containers and the shared filtering primitives.
//!
//! Every grid in the crate is stored row-major with `index = y * width + x`.
//! Intensities are normalized to `[0, 1]` on load, so every threshold and
//! saliency level downstream is independent of the source bit depth.

use crate::error::{Error, Result};

/// A single-channel image with intensities in `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct IntensityImage {
    width: usize,
    height: usize,
    pixels: Vec<f64>,
}

impl IntensityImage {
    pub fn new(width: usize, height: usize, pixels: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::ZeroArea);
        }
        if pixels.len() != width * height {
            return Err(Error::InvalidArgument(format!(
                "{} pixels for a {width}x{height} image",
                pixels.len()
            )));
        }
        if let Some(bad) = pixels.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::InvalidArgument(format!(
                "intensity {bad} outside [0, 1]"
            )));
        }
        Ok(IntensityImage {
            width,
            height,
            pixels,
        })
    }

    /// Builds an image, clamping every value into `[0, 1]`.
    pub fn from_clamped(width: usize, height: usize, mut pixels: Vec<f64>) -> Result<Self> {
        for v in &mut pixels {
            *v = if v.is_nan() { 0.0 } else { v.clamp(0.0, 1.0) };
        }
        Self::new(width, height, pixels)
    }

    pub fn filled(width: usize, height: usize, value: f64) -> Result<Self> {
        Self::new(width, height, vec![value; width * height])
    }

    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> f64,
    ) -> Result<Self> {
        let mut pixels = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                pixels.push(f(x, y));
            }
        }
        Self::new(width, height, pixels)
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

    pub fn pixels(&self) -> &[f64] {
        &self.pixels
    }

    pub fn into_pixels(self) -> Vec<f64> {
        self.pixels
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.pixels[y * self.width + x]
    }

    /// Mean taken about the first pixel, so constant images return their
    /// value exactly.
    pub fn mean(&self) -> f64 {
        let (lo, hi) = self.min_max();
        let pivot = self.pixels[0];
        let shift = self.pixels.iter().map(|v| v - pivot).sum::<f64>() / self.pixels.len() as f64;
        (pivot + shift).clamp(lo, hi)
    }

    pub fn min_max(&self) -> (f64, f64) {
        self.pixels
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            })
    }
}

/// A pseudo-colored RGB image, components in `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct CombinedImage {
    width: usize,
    height: usize,
    pixels: Vec<[f64; 3]>,
}

impl CombinedImage {
    pub fn new(width: usize, height: usize, pixels: Vec<[f64; 3]>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::ZeroArea);
        }
        if pixels.len() != width * height {
            return Err(Error::InvalidArgument(format!(
                "{} pixels for a {width}x{height} image",
                pixels.len()
            )));
        }
        if pixels.iter().flatten().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::InvalidArgument(
                "color component outside [0, 1]".into(),
            ));
        }
        Ok(CombinedImage {
            width,
            height,
            pixels,
        })
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

    pub fn pixels(&self) -> &[[f64; 3]] {
        &self.pixels
    }
}

/// Splits a green/white pseudo-colored image into its two channels.
///
/// White contributes equally to all three components, so `white = min(r, g, b)`
/// and whatever green remains above it is the surface-marker signal.
pub fn extract_channels(img: &CombinedImage) -> (IntensityImage, IntensityImage) {
    let (w, h) = img.dims();
    let mut green = Vec::with_capacity(w * h);
    let mut white = Vec::with_capacity(w * h);
    for &[r, g, b] in img.pixels() {
        let wv = r.min(g).min(b).clamp(0.0, 1.0);
        white.push(wv);
        green.push((g - wv).clamp(0.0, 1.0));
    }
    (
        IntensityImage::new(w, h, green).expect("dimensions come from a valid image"),
        IntensityImage::new(w, h, white).expect("dimensions come from a valid image"),
    )
}

/// Inverse of [`extract_channels`]: `r = b = white`, `g = green + white`.
pub fn recompose(green: &IntensityImage, white: &IntensityImage) -> Result<CombinedImage> {
    crate::error::check_dims(green.dims(), white.dims())?;
    let pixels = green
        .pixels()
        .iter()
        .zip(white.pixels())
        .map(|(&g, &w)| [w, (g + w).min(1.0), w])
        .collect();
    CombinedImage::new(green.width(), green.height(), pixels)
}

/// Normalized, symmetric 1D smoothing kernel applied separably.
///
/// The band-pass view of saliency sums narrow difference-of-Gaussian bands
/// whose standard deviations grow geometrically by a ratio `rho` over `N`
/// steps starting at `sigma`; the sum telescopes to a single wide-minus-narrow
/// pair. Letting the wide Gaussian grow without bound turns it into the image
/// mean, which leaves only the narrow blur as a runtime object. That is what
/// this type holds: `rho` and `N` never take concrete values.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussianKernel {
    radius: usize,
    weights: Vec<f64>,
}

impl GaussianKernel {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.len().is_multiple_of(2) {
            return Err(Error::InvalidArgument(
                "kernel length must be odd".into(),
            ));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidArgument(
                "kernel weights must be finite and non-negative".into(),
            ));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidArgument(format!(
                "kernel weights sum to {sum}, not 1"
            )));
        }
        let n = weights.len();
        if (0..n).any(|i| weights[i] != weights[n - 1 - i]) {
            return Err(Error::InvalidArgument("kernel is not symmetric".into()));
        }
        Ok(GaussianKernel {
            radius: n / 2,
            weights,
        })
    }

    /// Binomial approximation of a Gaussian: row `2 * radius` of Pascal's
    /// triangle over `4^radius`. Radius 2 gives `(1, 4, 6, 4, 1) / 16`.
    pub fn binomial(radius: usize) -> Self {
        let n = 2 * radius;
        let mut row = vec![1.0f64; n + 1];
        for k in 1..n {
            row[k] = row[k - 1] * (n - k + 1) as f64 / k as f64;
        }
        let total = 2f64.powi(n as i32);
        let weights = row.into_iter().map(|c| c / total).collect();
        GaussianKernel { radius, weights }
    }

    /// Sampled Gaussian truncated at `ceil(3 * sigma)`.
    pub fn from_sigma(sigma: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidArgument(format!("sigma {sigma} must be positive")));
        }
        let radius = (3.0 * sigma).ceil() as usize;
        let raw: Vec<f64> = (0..=2 * radius)
            .map(|i| {
                let d = i as f64 - radius as f64;
                (-d * d / (2.0 * sigma * sigma)).exp()
            })
            .collect();
        let sum: f64 = raw.iter().sum();
        let mut weights: Vec<f64> = raw.iter().map(|w| w / sum).collect();
        // exact symmetry after rounding
        for i in 0..radius {
            weights[2 * radius - i] = weights[i];
        }
        Ok(GaussianKernel { radius, weights })
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

impl Default for GaussianKernel {
    fn default() -> Self {
        GaussianKernel::binomial(2)
    }
}

/// Separable convolution of a raw grid, rows first, replicating edge pixels.
pub(crate) fn convolve_separable(
    values: &[f64],
    width: usize,
    height: usize,
    kernel: &GaussianKernel,
) -> Vec<f64> {
    let r = kernel.radius() as isize;
    let wts = kernel.weights();
    let (w, h) = (width as isize, height as isize);

    let mut tmp = vec![0.0; values.len()];
    for y in 0..height {
        let row = &values[y * width..(y + 1) * width];
        for x in 0..w {
            let mut acc = 0.0;
            for (k, wt) in wts.iter().enumerate() {
                let sx = (x + k as isize - r).clamp(0, w - 1) as usize;
                acc += wt * row[sx];
            }
            tmp[y * width + x as usize] = acc;
        }
    }

    let mut out = vec![0.0; values.len()];
    for y in 0..h {
        for (k, wt) in wts.iter().enumerate() {
            let sy = (y + k as isize - r).clamp(0, h - 1) as usize;
            let src = &tmp[sy * width..(sy + 1) * width];
            let dst = &mut out[y as usize * width..(y as usize + 1) * width];
            for (d, s) in dst.iter_mut().zip(src) {
                *d += wt * s;
            }
        }
    }
    out
}

/// Blurs with border replication. Output is a convex combination of input
/// pixels and is clamped to the input's range so rounding never escapes it.
pub fn gaussian_blur(img: &IntensityImage, kernel: &GaussianKernel) -> IntensityImage {
    let (lo, hi) = img.min_max();
    let mut out = convolve_separable(img.pixels(), img.width(), img.height(), kernel);
    for v in &mut out {
        *v = v.clamp(lo, hi);
    }
    IntensityImage {
        width: img.width,
        height: img.height,
        pixels: out,
    }
}

/// Bin index of an intensity for a histogram of `bins` bins.
#[inline]
pub fn bin_of(value: f64, bins: usize) -> usize {
    ((value * (bins - 1) as f64 + 0.5).floor() as usize).min(bins - 1)
}

/// Counts intensities into `bins` bins; `v` lands in `floor(v * (bins - 1) + 0.5)`.
pub fn histogram(img: &IntensityImage, bins: usize) -> Vec<u64> {
    assert!(bins >= 2, "histogram needs at least two bins");
    let mut counts = vec![0u64; bins];
    for &v in img.pixels() {
        counts[bin_of(v, bins)] += 1;
    }
    counts
}
