//! Counting rule, internal markers, and marker-controlled watershed.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};

use serde::Serialize;

use crate::binarize::BinaryMap;
use crate::error::{check_dims, Error, Result};
use crate::regions::{Region, RegionPairing, RegionSet};

/// Cell-candidate mask: white mask OR green mask.
pub fn candidate_map(b_w: &BinaryMap, b_g: &BinaryMap) -> Result<BinaryMap> {
    b_w.or(b_g)
}

/// Upper bound on nucleus/intersection ratios: mean plus three population
/// standard deviations (divisor `M`).
///
/// The mean is accumulated as offsets from the first value, so inputs with
/// zero spread return that value exactly.
pub fn ratio_upper_bound(r_wi: &[f64]) -> Result<f64> {
    let (&first, rest) = r_wi.split_first().ok_or(Error::NoIntersections)?;
    let m = r_wi.len() as f64;
    let shift: f64 = rest.iter().map(|v| v - first).sum();
    let mean = first + shift / m;
    let var = r_wi.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / m;
    Ok(mean + 3.0 * var.sqrt())
}

/// One counted cell.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Detection {
    pub id: u32,
    /// Internal marker seeding the watershed.
    #[serde(skip)]
    pub marker_region: Region,
    /// Centroid of the nucleus region, `(x, y)`.
    pub nucleus_centroid: (f64, f64),
    /// Nucleus area over the summed area of its accepted intersections.
    pub r_wi: f64,
    pub marker_area: usize,
}

/// Applies the ratio gate and builds one detection per accepted nucleus.
///
/// Entries with `r_wi <= bound` are accepted; all accepted entries sharing a
/// nucleus collapse into one detection. The marker is the nucleus joined with
/// every body that no other detected nucleus touches. A body touched by
/// several detected nuclei is left out of all their markers so the markers
/// stay disjoint and the watershed decides how it is split.
pub fn count_and_mark(pairing: &RegionPairing<'_>, bound: f64) -> Vec<Detection> {
    let mut accepted: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for (i, e) in pairing.entries.iter().enumerate() {
        if e.r_wi <= bound {
            accepted.entry(e.nucleus).or_default().push(i);
        }
    }
    // every detected nucleus that touches each body, accepted entry or not
    let mut touching: BTreeMap<u32, BTreeSet<u32>> = BTreeMap::new();
    for e in &pairing.entries {
        if accepted.contains_key(&e.nucleus) {
            touching.entry(e.body).or_default().insert(e.nucleus);
        }
    }

    let width = pairing.white.width();
    accepted
        .iter()
        .enumerate()
        .map(|(k, (&nucleus_label, idx))| {
            let nucleus = pairing.white.get(nucleus_label).expect("nucleus label");
            let mut pixels = nucleus.pixels.clone();
            let bodies: BTreeSet<u32> = idx.iter().map(|&i| pairing.entries[i].body).collect();
            for body in bodies {
                if touching[&body].len() == 1 {
                    pixels.extend(
                        pairing
                            .green
                            .get(body)
                            .expect("body label")
                            .pixels
                            .iter()
                            .filter(|&&p| pairing.white.label_at(p) != nucleus_label),
                    );
                }
            }
            let id = k as u32 + 1;
            let marker_region = Region::from_pixels(id, pixels, width);
            let inter_area: usize = idx.iter().map(|&i| pairing.entries[i].intersection.area).sum();
            Detection {
                id,
                marker_area: marker_region.area,
                marker_region,
                nucleus_centroid: nucleus.centroid,
                r_wi: nucleus.area as f64 / inter_area as f64,
            }
        })
        .collect()
}

/// Exact squared Euclidean distance from every pixel to the nearest
/// `false` pixel of `map`, by two passes of the 1D lower-envelope-of-
/// parabolas transform. Pixels of an all-foreground map get `+∞`.
pub fn squared_distance_transform(map: &BinaryMap) -> Vec<f64> {
    let (w, h) = map.dims();
    let mut d: Vec<f64> = map
        .bits()
        .iter()
        .map(|&b| if b { f64::INFINITY } else { 0.0 })
        .collect();
    let mut buf = Vec::new();
    for x in 0..w {
        let col: Vec<f64> = (0..h).map(|y| d[y * w + x]).collect();
        envelope_1d(&col, &mut buf);
        for y in 0..h {
            d[y * w + x] = buf[y];
        }
    }
    for y in 0..h {
        let row = d[y * w..(y + 1) * w].to_vec();
        envelope_1d(&row, &mut buf);
        d[y * w..(y + 1) * w].copy_from_slice(&buf);
    }
    d
}

/// `out[q] = min_p (q - p)^2 + f[p]` over finite `f[p]`.
fn envelope_1d(f: &[f64], out: &mut Vec<f64>) {
    let n = f.len();
    out.clear();
    out.resize(n, f64::INFINITY);
    let sites: Vec<usize> = (0..n).filter(|&p| f[p].is_finite()).collect();
    if sites.is_empty() {
        return;
    }
    let mut v: Vec<usize> = Vec::with_capacity(sites.len());
    let mut z: Vec<f64> = Vec::with_capacity(sites.len() + 1);
    let meet = |a: usize, b: usize| -> f64 {
        ((f[b] + (b * b) as f64) - (f[a] + (a * a) as f64)) / (2.0 * (b as f64 - a as f64))
    };
    v.push(sites[0]);
    z.push(f64::NEG_INFINITY);
    for &q in &sites[1..] {
        let mut s = meet(*v.last().unwrap(), q);
        while s <= *z.last().unwrap() {
            v.pop();
            z.pop();
            s = meet(*v.last().unwrap(), q);
        }
        v.push(q);
        z.push(s);
    }
    z.push(f64::INFINITY);
    let mut j = 0;
    for (q, o) in out.iter_mut().enumerate() {
        while z[j + 1] < q as f64 {
            j += 1;
        }
        let dq = q as f64 - v[j] as f64;
        *o = dq * dq + f[v[j]];
    }
}

/// Topographic surface for the watershed.
#[derive(Clone, Debug, PartialEq)]
pub struct Surface {
    pub width: usize,
    pub height: usize,
    pub values: Vec<f64>,
}

impl Surface {
    /// Negated Euclidean distance to the background of `mask`: region
    /// centres become the deepest basins. An all-foreground mask yields a
    /// flat surface.
    pub fn negated_distance(mask: &BinaryMap) -> Surface {
        let d2 = squared_distance_transform(mask);
        let values = d2
            .into_iter()
            .map(|v| if v.is_finite() { -v.sqrt() } else { 0.0 })
            .collect();
        Surface {
            width: mask.width(),
            height: mask.height(),
            values,
        }
    }

    /// Sobel gradient magnitude of a grid.
    pub fn gradient(values: &[f64], width: usize, height: usize) -> Surface {
        let (gx, gy) = crate::binarize::sobel(values, width, height);
        Surface {
            width,
            height,
            values: gx.iter().zip(&gy).map(|(a, b)| a.hypot(*b)).collect(),
        }
    }

    pub fn flat(width: usize, height: usize) -> Surface {
        Surface {
            width,
            height,
            values: vec![0.0; width * height],
        }
    }
}

#[derive(PartialEq)]
struct Queued {
    value: f64,
    seq: u64,
    pixel: usize,
}

impl Eq for Queued {}

impl Ord for Queued {
    // BinaryHeap is a max-heap: reverse for lowest value, then oldest
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .value
            .total_cmp(&self.value)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

impl PartialOrd for Queued {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Marker-controlled flooding restricted to `mask`.
///
/// Marker pixels enter the queue in ascending label then pixel order. A
/// popped pixel hands its label to every unlabeled 8-neighbour inside the
/// mask, which then enters the queue keyed by `(surface value, insertion
/// sequence)`. Mask pixels no flood reaches stay 0.
pub fn watershed(surface: &Surface, markers: &RegionSet, mask: &BinaryMap) -> Result<Vec<u32>> {
    let (w, h) = mask.dims();
    check_dims((surface.width, surface.height), (w, h))?;
    check_dims(markers.dims(), (w, h))?;
    if markers.is_empty() {
        return Err(Error::EmptyMarkers);
    }
    let mut labels = vec![0u32; w * h];
    let mut heap = BinaryHeap::new();
    let mut seq = 0u64;
    for region in markers.regions() {
        for &p in &region.pixels {
            if !mask.bits()[p] {
                return Err(Error::MarkerOutsideMask {
                    label: region.label,
                    pixel: p,
                });
            }
            labels[p] = region.label;
            heap.push(Queued {
                value: surface.values[p],
                seq,
                pixel: p,
            });
            seq += 1;
        }
    }
    while let Some(Queued { pixel, .. }) = heap.pop() {
        let label = labels[pixel];
        let (x, y) = ((pixel % w) as isize, (pixel / w) as isize);
        for dy in -1isize..=1 {
            for dx in -1isize..=1 {
                let (nx, ny) = (x + dx, y + dy);
                if (dx, dy) == (0, 0) || nx < 0 || ny < 0 || nx >= w as isize || ny >= h as isize {
                    continue;
                }
                let q = ny as usize * w + nx as usize;
                if mask.bits()[q] && labels[q] == 0 {
                    labels[q] = label;
                    heap.push(Queued {
                        value: surface.values[q],
                        seq,
                        pixel: q,
                    });
                    seq += 1;
                }
            }
        }
    }
    Ok(labels)
}

/// Final per-image output.
#[derive(Clone, Debug, PartialEq)]
pub struct SegmentationResult {
    pub width: usize,
    pub height: usize,
    /// 0 is background, `k` is the cell with detection id `k`.
    pub label_map: Vec<u32>,
    pub detections: Vec<Detection>,
    pub count: usize,
}

impl SegmentationResult {
    pub fn empty(width: usize, height: usize) -> Self {
        SegmentationResult {
            width,
            height,
            label_map: vec![0; width * height],
            detections: Vec::new(),
            count: 0,
        }
    }
}
