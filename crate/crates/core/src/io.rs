//! Raster input and output.
//!
//! Inputs: PNG (8/16-bit gray, 8-bit RGB) and single-plane TIFF (8/16-bit
//! gray). Outputs are always PNG. Every write goes through a temporary file
//! in the destination directory followed by a rename.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use image::codecs::png::{CompressionType, FilterType, PngEncoder};
use image::{DynamicImage, ExtendedColorType, ImageEncoder, ImageReader};

use crate::error::{Error, Result};
use crate::image::{CombinedImage, IntensityImage};

/// A decoded raster: grayscale sources become a single channel, color
/// sources keep their three components.
#[derive(Clone, Debug, PartialEq)]
pub enum LoadedImage {
    Gray(IntensityImage),
    Color(CombinedImage),
}

pub fn load_image(path: impl AsRef<Path>) -> Result<LoadedImage> {
    let path = path.as_ref();
    let reader = ImageReader::open(path)
        .map_err(|e| Error::io(path, e))?
        .with_guessed_format()
        .map_err(|e| Error::io(path, e))?;
    if reader.format().is_none() {
        return Err(Error::UnsupportedFormat {
            path: path.to_owned(),
            format: "unrecognized".into(),
        });
    }
    let decoded = reader.decode().map_err(|e| match e {
        image::ImageError::Unsupported(u) => Error::UnsupportedFormat {
            path: path.to_owned(),
            format: u.to_string(),
        },
        image::ImageError::IoError(io) => Error::io(path, io),
        other => Error::Decode {
            path: path.to_owned(),
            reason: other.to_string(),
        },
    })?;

    let (w, h) = (decoded.width() as usize, decoded.height() as usize);
    if w == 0 || h == 0 {
        return Err(Error::ZeroArea);
    }
    let gray8 = |buf: &[u8], stride: usize| -> Vec<f64> {
        buf.chunks_exact(stride).map(|p| p[0] as f64 / 255.0).collect()
    };
    let gray16 = |buf: &[u16], stride: usize| -> Vec<f64> {
        buf.chunks_exact(stride).map(|p| p[0] as f64 / 65535.0).collect()
    };
    let rgb8 = |buf: &[u8], stride: usize| -> Vec<[f64; 3]> {
        buf.chunks_exact(stride)
            .map(|p| [p[0] as f64 / 255.0, p[1] as f64 / 255.0, p[2] as f64 / 255.0])
            .collect()
    };
    let rgb16 = |buf: &[u16], stride: usize| -> Vec<[f64; 3]> {
        buf.chunks_exact(stride)
            .map(|p| {
                [
                    p[0] as f64 / 65535.0,
                    p[1] as f64 / 65535.0,
                    p[2] as f64 / 65535.0,
                ]
            })
            .collect()
    };

    let loaded = match &decoded {
        DynamicImage::ImageLuma8(b) => LoadedImage::Gray(IntensityImage::new(w, h, gray8(b, 1))?),
        DynamicImage::ImageLumaA8(b) => LoadedImage::Gray(IntensityImage::new(w, h, gray8(b, 2))?),
        DynamicImage::ImageLuma16(b) => {
            LoadedImage::Gray(IntensityImage::new(w, h, gray16(b, 1))?)
        }
        DynamicImage::ImageLumaA16(b) => {
            LoadedImage::Gray(IntensityImage::new(w, h, gray16(b, 2))?)
        }
        DynamicImage::ImageRgb8(b) => LoadedImage::Color(CombinedImage::new(w, h, rgb8(b, 3))?),
        DynamicImage::ImageRgba8(b) => {
            LoadedImage::Color(CombinedImage::new(w, h, rgb8(b, 4))?)
        }
        DynamicImage::ImageRgb16(b) => {
            LoadedImage::Color(CombinedImage::new(w, h, rgb16(b, 3))?)
        }
        DynamicImage::ImageRgba16(b) => {
            LoadedImage::Color(CombinedImage::new(w, h, rgb16(b, 4))?)
        }
        other => {
            return Err(Error::UnsupportedFormat {
                path: path.to_owned(),
                format: format!("{:?}", other.color()),
            })
        }
    };
    Ok(loaded)
}

/// Loads a file that should hold a single channel. Color files are averaged
/// over their three components.
pub fn load_channel(path: impl AsRef<Path>) -> Result<IntensityImage> {
    match load_image(path)? {
        LoadedImage::Gray(img) => Ok(img),
        LoadedImage::Color(img) => {
            let px = img
                .pixels()
                .iter()
                .map(|p| (p[0] + p[1] + p[2]) / 3.0)
                .collect();
            IntensityImage::new(img.width(), img.height(), px)
        }
    }
}

/// Writes `bytes` to `path` via a sibling temporary file and a rename.
pub fn write_atomic(path: impl AsRef<Path>, bytes: &[u8]) -> Result<()> {
    let path = path.as_ref();
    let tmp = temp_sibling(path);
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if let Err(e) = result {
        let _ = fs::remove_file(&tmp);
        return Err(Error::io(path, e));
    }
    Ok(())
}

fn temp_sibling(path: &Path) -> PathBuf {
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    path.with_file_name(format!(".{name}.{}.tmp", std::process::id()))
}

fn encode_png(width: usize, height: usize, raw: &[u8], color: ExtendedColorType) -> Vec<u8> {
    let mut out = Vec::new();
    PngEncoder::new_with_quality(&mut out, CompressionType::Default, FilterType::Adaptive)
        .write_image(raw, width as u32, height as u32, color)
        .expect("in-memory PNG encoding cannot fail for valid buffers");
    out
}

/// Encodes values in `[0, 1]` as 8-bit grayscale PNG bytes.
pub fn encode_gray8(width: usize, height: usize, values: &[f64]) -> Vec<u8> {
    let raw: Vec<u8> = values
        .iter()
        .map(|v| (v.clamp(0.0, 1.0) * 255.0).round() as u8)
        .collect();
    encode_png(width, height, &raw, ExtendedColorType::L8)
}

/// Encodes values in `[0, 1]` as 16-bit grayscale PNG bytes.
pub fn encode_gray16(width: usize, height: usize, values: &[f64]) -> Vec<u8> {
    let raw: Vec<u8> = values
        .iter()
        .flat_map(|v| ((v.clamp(0.0, 1.0) * 65535.0).round() as u16).to_ne_bytes())
        .collect();
    encode_png(width, height, &raw, ExtendedColorType::L16)
}

/// Encodes a label grid as 16-bit grayscale PNG bytes; labels above 65535
/// saturate.
pub fn encode_labels16(width: usize, height: usize, labels: &[u32]) -> Vec<u8> {
    let raw: Vec<u8> = labels
        .iter()
        .flat_map(|&l| (l.min(u16::MAX as u32) as u16).to_ne_bytes())
        .collect();
    encode_png(width, height, &raw, ExtendedColorType::L16)
}

pub fn encode_rgb8(width: usize, height: usize, rgb: &[[u8; 3]]) -> Vec<u8> {
    let raw: Vec<u8> = rgb.iter().flatten().copied().collect();
    encode_png(width, height, &raw, ExtendedColorType::Rgb8)
}

pub fn save_gray8(path: impl AsRef<Path>, img: &IntensityImage) -> Result<()> {
    write_atomic(path, &encode_gray8(img.width(), img.height(), img.pixels()))
}

pub fn save_gray16(path: impl AsRef<Path>, img: &IntensityImage) -> Result<()> {
    write_atomic(path, &encode_gray16(img.width(), img.height(), img.pixels()))
}

/// Reads a 16-bit (or 8-bit) label PNG back into integer labels.
pub fn load_labels(path: impl AsRef<Path>) -> Result<(usize, usize, Vec<u32>)> {
    let path = path.as_ref();
    let decoded = ImageReader::open(path)
        .map_err(|e| Error::io(path, e))?
        .with_guessed_format()
        .map_err(|e| Error::io(path, e))?
        .decode()
        .map_err(|e| Error::Decode {
            path: path.to_owned(),
            reason: e.to_string(),
        })?;
    let (w, h) = (decoded.width() as usize, decoded.height() as usize);
    let labels = match decoded {
        DynamicImage::ImageLuma16(b) => b.into_raw().into_iter().map(u32::from).collect(),
        DynamicImage::ImageLuma8(b) => b.into_raw().into_iter().map(u32::from).collect(),
        other => {
            return Err(Error::UnsupportedFormat {
                path: path.to_owned(),
                format: format!("label mask must be grayscale, got {:?}", other.color()),
            })
        }
    };
    Ok((w, h, labels))
}
