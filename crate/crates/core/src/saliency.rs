//! Frequency-tuned saliency.
//!
//! Saliency at a pixel is the distance between the image's mean feature and
//! the pixel's feature after a small blur. Each fluorescence channel is a
//! single scalar per pixel, so the feature norm is an absolute difference.

use crate::image::{gaussian_blur, GaussianKernel, IntensityImage};

#[derive(Clone, Debug, PartialEq)]
pub struct SaliencyMap {
    width: usize,
    height: usize,
    values: Vec<f64>,
    normalized: bool,
    /// Mean intensity of the source image (the reference feature).
    mean_feature: f64,
}

impl SaliencyMap {
    /// Wraps raw non-negative values; used for fixtures and by callers that
    /// compute saliency elsewhere.
    pub fn from_values(width: usize, height: usize, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), width * height, "saliency grid size");
        assert!(
            values.iter().all(|v| *v >= 0.0 && v.is_finite()),
            "saliency values must be finite and non-negative"
        );
        SaliencyMap {
            width,
            height,
            values,
            normalized: false,
            mean_feature: 0.0,
        }
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

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn mean_feature(&self) -> f64 {
        self.mean_feature
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    /// Rescales so the maximum is 1. An identically zero map is returned
    /// unchanged but flagged as normalized.
    pub fn normalize(mut self) -> Self {
        let max = self.max();
        if max > 0.0 && !(self.normalized && max == 1.0) {
            for v in &mut self.values {
                *v /= max;
            }
        }
        self.normalized = true;
        self
    }

    /// Views a normalized map as an intensity image (for Otsu, Canny and
    /// debug output).
    pub fn to_image(&self) -> IntensityImage {
        let max = self.max();
        let scale = if self.normalized || max == 0.0 { 1.0 } else { 1.0 / max };
        IntensityImage::from_clamped(
            self.width,
            self.height,
            self.values.iter().map(|v| v * scale).collect(),
        )
        .expect("saliency map has valid dimensions")
    }
}

/// Unnormalized saliency: `|mean(img) - blur(img)(x, y)|` per pixel.
pub fn ft_saliency(img: &IntensityImage, kernel: &GaussianKernel) -> SaliencyMap {
    let mean = img.mean();
    let blurred = gaussian_blur(img, kernel);
    SaliencyMap {
        width: img.width(),
        height: img.height(),
        values: blurred.pixels().iter().map(|b| (mean - b).abs()).collect(),
        normalized: false,
        mean_feature: mean,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn constant_image_has_no_saliency() {
        let img = IntensityImage::filled(12, 9, 0.42).unwrap();
        let s = ft_saliency(&img, &GaussianKernel::default());
        assert!(s.values().iter().all(|&v| v == 0.0));
        let n = s.normalize();
        assert!(n.is_normalized());
        assert_eq!(n.max(), 0.0);
    }

    #[test]
    fn normalize_examples() {
        let s = SaliencyMap::from_values(3, 1, vec![0.0, 2.0, 4.0]).normalize();
        assert_eq!(s.values(), &[0.0, 0.5, 1.0]);
        assert_eq!(s.clone().normalize(), s);
    }

    #[test]
    fn bright_square_on_dark_field() {
        // independent per-pixel evaluation: mean of the raw image, binomial
        // blur written out by hand, absolute difference
        let img = IntensityImage::from_fn(32, 32, |x, y| {
            if (12..20).contains(&x) && (12..20).contains(&y) {
                0.9
            } else {
                0.1
            }
        })
        .unwrap();
        let mean = (64.0 * 0.9 + (1024.0 - 64.0) * 0.1) / 1024.0;
        assert!((mean - 0.15f64).abs() < 1e-15);
        let s = ft_saliency(&img, &GaussianKernel::default());
        assert!((s.mean_feature() - mean).abs() < 1e-12);

        let k = [1.0, 4.0, 6.0, 4.0, 1.0];
        let at = |x: i64, y: i64| -> f64 {
            let mut acc = 0.0;
            for dy in -2..=2i64 {
                for dx in -2..=2i64 {
                    let (sx, sy) = ((x + dx).clamp(0, 31), (y + dy).clamp(0, 31));
                    acc += k[(dx + 2) as usize] * k[(dy + 2) as usize] / 256.0
                        * img.get(sx as usize, sy as usize);
                }
            }
            (mean - acc).abs()
        };
        for y in 0..32 {
            for x in 0..32 {
                assert!((s.values()[y * 32 + x] - at(x as i64, y as i64)).abs() < 1e-12);
            }
        }
        // deep inside the square the blur sees only 0.9
        assert!((s.values()[15 * 32 + 15] - 0.75).abs() < 1e-12);
        let max = s.max();
        assert_eq!(max, s.values()[15 * 32 + 15]);
    }

    #[test]
    fn offset_and_scale_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let kernel = GaussianKernel::default();
        for _ in 0..20 {
            let base: Vec<f64> = (0..20 * 15).map(|_| rng.random_range(0.0..0.5)).collect();
            let c = rng.random_range(0.0..0.5);
            let img = IntensityImage::new(20, 15, base.clone()).unwrap();
            let shifted =
                IntensityImage::new(20, 15, base.iter().map(|v| v + c).collect()).unwrap();
            let a = ft_saliency(&img, &kernel);
            let b = ft_saliency(&shifted, &kernel);
            for (x, y) in a.values().iter().zip(b.values()) {
                assert!((x - y).abs() < 1e-9);
            }

            let k = 1.5;
            let scaled = IntensityImage::new(20, 15, base.iter().map(|v| v * k).collect()).unwrap();
            let sa = ft_saliency(&scaled, &kernel);
            for (x, y) in a.values().iter().zip(sa.values()) {
                assert!((x * k - y).abs() < 1e-9);
            }
            let (na, nb) = (a.normalize(), sa.normalize());
            for (x, y) in na.values().iter().zip(nb.values()) {
                assert!((x - y).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn blur_preserves_mean_on_interior_dominated_image() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        // content far from the border: replication does not move mass
        let img = IntensityImage::from_fn(64, 64, |x, y| {
            if (8..56).contains(&x) && (8..56).contains(&y) {
                rng.random::<f64>()
            } else {
                0.0
            }
        })
        .unwrap();
        let blurred = gaussian_blur(&img, &GaussianKernel::default());
        assert!((blurred.mean() - img.mean()).abs() < 1e-6);
    }

    #[test]
    fn zero_iff_blur_constant() {
        // a checkerboard blurred with (1/4, 1/2, 1/4) becomes constant in the interior
        // but not at the replicated border, so it is not identically zero
        let img = IntensityImage::from_fn(8, 8, |x, y| ((x + y) % 2) as f64).unwrap();
        let s = ft_saliency(&img, &GaussianKernel::binomial(1));
        let blurred = gaussian_blur(&img, &GaussianKernel::binomial(1));
        let (lo, hi) = blurred.min_max();
        assert_eq!(s.max() == 0.0, lo == hi);
    }
}
