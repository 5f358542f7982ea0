//! Pipeline configuration and its flat `key = value` file format.
//!
//! ```text
//! # comment lines start with '#'; blank lines are ignored
//! blur_radius = 2            # saliency blur, binomial kernel radius
//! canny_blur_radius = 2
//! canny_low = 0.1            # fraction of the peak gradient
//! canny_high = 0.25
//! level_grid = 256           # saliency levels in [0, 1]
//! lambda_grid = 101          # weights in [0, 1]
//! min_region_area = 5        # pixels
//! watershed_surface = distance   # distance | gradient
//! match_radius = 15          # pixels
//! lambda = 0.4               # fixes the weight instead of the minimax choice
//! bradley_window = 129       # odd; default scales with the image
//! bradley_sensitivity = 0.15
//! ```
//!
//! Keys are case-sensitive; a key may appear once. Unknown keys are errors.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;

use crate::binarize::CannyParams;
use crate::error::{Error, Result};
use crate::image::GaussianKernel;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SurfaceMode {
    /// Negated distance transform of the candidate mask.
    Distance,
    /// Gradient magnitude of the green saliency map.
    Gradient,
}

impl FromStr for SurfaceMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "distance" => Ok(SurfaceMode::Distance),
            "gradient" => Ok(SurfaceMode::Gradient),
            other => Err(Error::InvalidConfig(format!(
                "watershed_surface must be distance or gradient, got {other:?}"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PipelineConfig {
    pub blur_radius: usize,
    pub canny_blur_radius: usize,
    pub canny_low: f64,
    pub canny_high: f64,
    pub level_grid: usize,
    pub lambda_grid: usize,
    pub min_region_area: usize,
    pub watershed_surface: SurfaceMode,
    pub match_radius: f64,
    pub lambda: Option<f64>,
    pub bradley_window: Option<usize>,
    pub bradley_sensitivity: f64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            blur_radius: 2,
            canny_blur_radius: 2,
            canny_low: 0.1,
            canny_high: 0.25,
            level_grid: 256,
            lambda_grid: 101,
            min_region_area: 5,
            watershed_surface: SurfaceMode::Distance,
            match_radius: 15.0,
            lambda: None,
            bradley_window: None,
            bradley_sensitivity: 0.15,
        }
    }
}

fn parse_value<T: FromStr>(key: &str, raw: &str) -> Result<T> {
    raw.parse()
        .map_err(|_| Error::InvalidConfig(format!("{key}: cannot parse {raw:?}")))
}

impl PipelineConfig {
    pub fn saliency_kernel(&self) -> GaussianKernel {
        GaussianKernel::binomial(self.blur_radius)
    }

    pub fn canny_params(&self) -> CannyParams {
        CannyParams::new(
            GaussianKernel::binomial(self.canny_blur_radius),
            self.canny_low,
            self.canny_high,
        )
        .expect("validated config")
    }

    /// Bradley window for an image: the configured value, or
    /// `2 * floor(max(w, h) / 16) + 1`.
    pub fn bradley_window_for(&self, width: usize, height: usize) -> usize {
        self.bradley_window
            .unwrap_or(2 * (width.max(height) / 16) + 1)
            .max(3)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if !(0.0 < self.canny_low && self.canny_low < self.canny_high && self.canny_high < 1.0) {
            return bad(format!(
                "canny ratios must satisfy 0 < low ({}) < high ({}) < 1",
                self.canny_low, self.canny_high
            ));
        }
        if self.level_grid < 2 {
            return bad("level_grid must be at least 2".into());
        }
        if self.lambda_grid < 2 {
            return bad("lambda_grid must be at least 2".into());
        }
        if self.min_region_area == 0 {
            return bad("min_region_area must be at least 1".into());
        }
        if !(self.match_radius > 0.0 && self.match_radius.is_finite()) {
            return bad("match_radius must be positive".into());
        }
        if let Some(l) = self.lambda {
            if !(0.0..=1.0).contains(&l) {
                return bad(format!("lambda {l} outside [0, 1]"));
            }
        }
        if let Some(win) = self.bradley_window {
            if win < 3 || win % 2 == 0 {
                return bad(format!("bradley_window must be odd and at least 3, got {win}"));
            }
        }
        if !(0.0..=1.0).contains(&self.bradley_sensitivity) {
            return bad("bradley_sensitivity must be in [0, 1]".into());
        }
        Ok(())
    }

    /// Applies `key = value` settings on top of `self`.
    pub fn apply(&mut self, settings: &BTreeMap<String, String>) -> Result<()> {
        for (key, raw) in settings {
            let raw = raw.as_str();
            match key.as_str() {
                "blur_radius" => self.blur_radius = parse_value(key, raw)?,
                "canny_blur_radius" => self.canny_blur_radius = parse_value(key, raw)?,
                "canny_low" => self.canny_low = parse_value(key, raw)?,
                "canny_high" => self.canny_high = parse_value(key, raw)?,
                "level_grid" => self.level_grid = parse_value(key, raw)?,
                "lambda_grid" => self.lambda_grid = parse_value(key, raw)?,
                "min_region_area" => self.min_region_area = parse_value(key, raw)?,
                "watershed_surface" => self.watershed_surface = raw.parse()?,
                "match_radius" => self.match_radius = parse_value(key, raw)?,
                "lambda" => self.lambda = Some(parse_value(key, raw)?),
                "bradley_window" => self.bradley_window = Some(parse_value(key, raw)?),
                "bradley_sensitivity" => self.bradley_sensitivity = parse_value(key, raw)?,
                other => return Err(Error::InvalidConfig(format!("unknown key {other:?}"))),
            }
        }
        self.validate()
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let settings = parse_settings(&text, path)?;
        let mut cfg = PipelineConfig::default();
        cfg.apply(&settings)?;
        Ok(cfg)
    }
}

/// Parses the flat `key = value` grammar. Trailing `# comments` are allowed.
pub fn parse_settings(text: &str, origin: &Path) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let malformed = |reason: &str| Error::Malformed {
            what: "config",
            path: origin.to_owned(),
            line: n + 1,
            reason: reason.to_owned(),
        };
        let (k, v) = line.split_once('=').ok_or_else(|| malformed("expected key = value"))?;
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() || v.is_empty() {
            return Err(malformed("empty key or value"));
        }
        if out.insert(k.to_owned(), v.to_owned()).is_some() {
            return Err(malformed("duplicate key"));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_documented_grammar() {
        let text = "# header\nlevel_grid = 128\n\nwatershed_surface = gradient  # inline\nlambda=0.25\n";
        let settings = parse_settings(text, Path::new("cfg")).unwrap();
        let mut cfg = PipelineConfig::default();
        cfg.apply(&settings).unwrap();
        assert_eq!(cfg.level_grid, 128);
        assert_eq!(cfg.watershed_surface, SurfaceMode::Gradient);
        assert_eq!(cfg.lambda, Some(0.25));
        assert_eq!(cfg.lambda_grid, 101);
    }

    #[test]
    fn rejects_bad_settings() {
        let p = Path::new("cfg");
        assert!(parse_settings("level_grid 12", p).is_err());
        assert!(parse_settings("a = 1\na = 2", p).is_err());
        let cfg = PipelineConfig::default();
        for bad in ["nonsense = 1", "canny_low = 0.5", "lambda = 2", "bradley_window = 8", "level_grid = x"] {
            let s = parse_settings(bad, p).unwrap();
            assert!(cfg.clone().apply(&s).is_err(), "{bad}");
        }
        cfg.validate().unwrap();
    }

    #[test]
    fn bradley_window_scales_with_image() {
        let cfg = PipelineConfig::default();
        assert_eq!(cfg.bradley_window_for(1024, 1024), 129);
        assert_eq!(cfg.bradley_window_for(20, 8), 3);
    }
}
