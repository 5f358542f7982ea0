//! End-to-end composition: saliency, masks, level selection, counting and
//! watershed, for OSLO and the three threshold baselines.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;

use crate::binarize::{
    bradley_threshold, canny_edges, fill_holes, fuse_white, otsu_binarize, threshold_at, BinaryMap,
};
use crate::config::{PipelineConfig, SurfaceMode};
use crate::error::{check_dims, Error, Result};
use crate::image::IntensityImage;
use crate::level_select::{minimax_select, select_with_lambda, sweep_level_stats, uniform_grid, MinimaxResult, RatioTable};
use crate::regions::{label_components, pair_regions, Connectivity, RegionSet};
use crate::saliency::{ft_saliency, SaliencyMap};
use crate::segment::{candidate_map, count_and_mark, ratio_upper_bound, watershed, SegmentationResult, Surface};

/// How the green mask is produced. Everything else is shared.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Minimax saliency level selection.
    Oslo,
    OtsuBaseline,
    /// Filled Canny edges.
    CannyBaseline,
    BradleyBaseline,
}

impl Method {
    pub const ALL: [Method; 4] = [
        Method::OtsuBaseline,
        Method::CannyBaseline,
        Method::BradleyBaseline,
        Method::Oslo,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Oslo => "oslo",
            Method::OtsuBaseline => "otsu_baseline",
            Method::CannyBaseline => "canny_baseline",
            Method::BradleyBaseline => "bradley_baseline",
        }
    }

    /// Column heading for report tables.
    pub fn title(self) -> &'static str {
        match self {
            Method::Oslo => "OSLO",
            Method::OtsuBaseline => "Otsu",
            Method::CannyBaseline => "Canny",
            Method::BradleyBaseline => "Bradley",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "oslo" => Ok(Method::Oslo),
            "otsu" | "otsu_baseline" => Ok(Method::OtsuBaseline),
            "canny" | "canny_baseline" => Ok(Method::CannyBaseline),
            "bradley" | "bradley_baseline" => Ok(Method::BradleyBaseline),
            other => Err(Error::InvalidArgument(format!("unknown method {other:?}"))),
        }
    }
}

/// Intermediate maps of one run.
#[derive(Clone, Debug)]
pub struct Stages {
    pub s_w: SaliencyMap,
    pub s_g: SaliencyMap,
    pub b_w: BinaryMap,
    pub b_g: BinaryMap,
    pub b_c: BinaryMap,
    pub markers: RegionSet,
}

#[derive(Clone, Debug)]
pub struct PipelineRun {
    pub method: Method,
    pub result: SegmentationResult,
    /// Present for OSLO once at least one white region exists.
    pub selection: Option<MinimaxResult>,
    pub table: Option<RatioTable>,
    /// Ratio bound used by the counting gate; absent with no intersections.
    pub r_uwi: Option<f64>,
    /// Number of intersecting regions at the final green mask.
    pub m_count: usize,
    /// Wall-clock milliseconds per stage, in execution order.
    pub timings: Vec<(&'static str, f64)>,
    pub stages: Stages,
}

struct Clock {
    last: Instant,
    laps: Vec<(&'static str, f64)>,
}

impl Clock {
    fn start() -> Self {
        Clock {
            last: Instant::now(),
            laps: Vec::new(),
        }
    }

    fn lap(&mut self, name: &'static str) {
        let now = Instant::now();
        self.laps.push((name, (now - self.last).as_secs_f64() * 1e3));
        self.last = now;
    }
}

/// White-channel mask: Otsu on the saliency map OR its filled Canny edges.
pub fn white_mask(s_w: &SaliencyMap, cfg: &PipelineConfig) -> BinaryMap {
    let img = s_w.to_image();
    let edges = fill_holes(&canny_edges(&img, &cfg.canny_params()));
    fuse_white(&otsu_binarize(&img), &edges).expect("maps share dimensions")
}

pub fn run_method(
    green: &IntensityImage,
    white: &IntensityImage,
    cfg: &PipelineConfig,
    method: Method,
) -> Result<PipelineRun> {
    check_dims(white.dims(), green.dims())?;
    cfg.validate()?;
    let (w, h) = green.dims();
    let mut clock = Clock::start();

    let kernel = cfg.saliency_kernel();
    let s_w = ft_saliency(white, &kernel).normalize();
    let s_g = ft_saliency(green, &kernel).normalize();
    clock.lap("saliency");

    let b_w = white_mask(&s_w, cfg);
    let white_set = label_components(&b_w, Connectivity::Eight).filter_min_area(cfg.min_region_area);
    clock.lap("white_mask");

    let mut selection = None;
    let mut table = None;
    let b_g = if white_set.is_empty() {
        BinaryMap::empty(w, h)
    } else {
        match method {
            Method::Oslo => {
                let t = sweep_level_stats(&uniform_grid(cfg.level_grid), &white_set, &s_g, cfg.min_region_area)?;
                let sel = match cfg.lambda {
                    Some(l) => select_with_lambda(l, &t)?,
                    None => minimax_select(&uniform_grid(cfg.lambda_grid), &t)?,
                };
                let b_g = threshold_at(&s_g, sel.l_g);
                selection = Some(sel);
                table = Some(t);
                b_g
            }
            Method::OtsuBaseline => otsu_binarize(&s_g.to_image()),
            Method::CannyBaseline => fill_holes(&canny_edges(&s_g.to_image(), &cfg.canny_params())),
            Method::BradleyBaseline => bradley_threshold(
                &s_g.to_image(),
                cfg.bradley_window_for(w, h),
                cfg.bradley_sensitivity,
            )?,
        }
    };
    clock.lap("green_mask");

    let green_set = label_components(&b_g, Connectivity::Eight).filter_min_area(cfg.min_region_area);
    let pairing = pair_regions(&b_g, &white_set, &green_set)?;
    let m_count = pairing.m_count();
    let (r_uwi, detections) = if m_count == 0 {
        (None, Vec::new())
    } else {
        let bound = ratio_upper_bound(&pairing.r_wi())?;
        (Some(bound), count_and_mark(&pairing, bound))
    };
    clock.lap("count");

    let b_c = candidate_map(&b_w, &b_g)?;
    let markers = RegionSet::from_regions(
        w,
        h,
        detections.iter().map(|d| d.marker_region.clone()).collect(),
    );
    let result = if detections.is_empty() {
        SegmentationResult::empty(w, h)
    } else {
        let surface = match cfg.watershed_surface {
            SurfaceMode::Distance => Surface::negated_distance(&b_c),
            SurfaceMode::Gradient => Surface::gradient(s_g.values(), w, h),
        };
        let label_map = watershed(&surface, &markers, &b_c)?;
        SegmentationResult {
            width: w,
            height: h,
            label_map,
            count: detections.len(),
            detections,
        }
    };
    clock.lap("watershed");

    Ok(PipelineRun {
        method,
        result,
        selection,
        table,
        r_uwi,
        m_count,
        timings: clock.laps,
        stages: Stages {
            s_w,
            s_g,
            b_w,
            b_g,
            b_c,
            markers,
        },
    })
}

/// OSLO on a green/white pair.
pub fn run_pipeline(green: &IntensityImage, white: &IntensityImage, cfg: &PipelineConfig) -> Result<SegmentationResult> {
    run_method(green, white, cfg, Method::Oslo).map(|r| r.result)
}
