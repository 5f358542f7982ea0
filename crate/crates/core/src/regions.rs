//! Connected components and the nucleus/body/intersection bookkeeping.

use crate::binarize::BinaryMap;
use crate::error::{check_dims, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Connectivity {
    Four,
    Eight,
}

impl Connectivity {
    /// Offsets of neighbours already visited in a raster scan.
    fn causal_offsets(self) -> &'static [(isize, isize)] {
        match self {
            Connectivity::Four => &[(-1, 0), (0, -1)],
            Connectivity::Eight => &[(-1, 0), (-1, -1), (0, -1), (1, -1)],
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Region {
    pub label: u32,
    pub area: usize,
    /// `(x, y)` mean of the pixel coordinates.
    pub centroid: (f64, f64),
    /// Row-major pixel indices in ascending order.
    pub pixels: Vec<usize>,
}

impl Region {
    pub fn from_pixels(label: u32, mut pixels: Vec<usize>, width: usize) -> Region {
        assert!(!pixels.is_empty(), "a region has at least one pixel");
        pixels.sort_unstable();
        let (mut sx, mut sy) = (0.0, 0.0);
        for &p in &pixels {
            sx += (p % width) as f64;
            sy += (p / width) as f64;
        }
        let n = pixels.len() as f64;
        Region {
            label,
            area: pixels.len(),
            centroid: (sx / n, sy / n),
            pixels,
        }
    }

    /// First pixel in raster order.
    pub fn first_pixel(&self) -> usize {
        self.pixels[0]
    }
}

/// Labeled components: labels `1..=K`, `0` is background.
#[derive(Clone, Debug, PartialEq)]
pub struct RegionSet {
    width: usize,
    height: usize,
    regions: Vec<Region>,
    label_map: Vec<u32>,
}

impl RegionSet {
    /// Builds a set from disjoint regions, relabeling them `1..=K` in the
    /// given order.
    pub fn from_regions(width: usize, height: usize, regions: Vec<Region>) -> RegionSet {
        let mut label_map = vec![0u32; width * height];
        let regions: Vec<Region> = regions
            .into_iter()
            .enumerate()
            .map(|(i, mut r)| {
                r.label = i as u32 + 1;
                for &p in &r.pixels {
                    assert_eq!(label_map[p], 0, "regions must be disjoint");
                    label_map[p] = r.label;
                }
                r
            })
            .collect();
        RegionSet {
            width,
            height,
            regions,
            label_map,
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

    pub fn regions(&self) -> &[Region] {
        &self.regions
    }

    pub fn len(&self) -> usize {
        self.regions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.regions.is_empty()
    }

    pub fn label_map(&self) -> &[u32] {
        &self.label_map
    }

    pub fn label_at(&self, pixel: usize) -> u32 {
        self.label_map[pixel]
    }

    pub fn get(&self, label: u32) -> Option<&Region> {
        label
            .checked_sub(1)
            .and_then(|i| self.regions.get(i as usize))
    }

    pub fn mask(&self) -> BinaryMap {
        BinaryMap::new(
            self.width,
            self.height,
            self.label_map.iter().map(|&l| l != 0).collect(),
        )
    }

    /// Drops regions smaller than `min_area` and relabels the rest
    /// contiguously, preserving order.
    pub fn filter_min_area(self, min_area: usize) -> RegionSet {
        if self.regions.iter().all(|r| r.area >= min_area) {
            return self;
        }
        let kept = self
            .regions
            .into_iter()
            .filter(|r| r.area >= min_area)
            .collect();
        RegionSet::from_regions(self.width, self.height, kept)
    }
}

pub(crate) struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = p;
        }
        x
    }

    /// Unions two sets; the smaller index becomes the root.
    pub(crate) fn union(&mut self, a: u32, b: u32) -> u32 {
        let (ra, rb) = (self.find(a), self.find(b));
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi as usize] = lo;
        lo
    }
}

/// Two-pass union-find labeling. Labels follow the raster order of each
/// component's first pixel.
pub fn label_components(map: &BinaryMap, connectivity: Connectivity) -> RegionSet {
    let (w, h) = map.dims();
    let bits = map.bits();
    let mut uf = UnionFind::new(w * h);
    for y in 0..h {
        for x in 0..w {
            let i = y * w + x;
            if !bits[i] {
                continue;
            }
            for &(dx, dy) in connectivity.causal_offsets() {
                let (nx, ny) = (x as isize + dx, y as isize + dy);
                if nx < 0 || ny < 0 || nx >= w as isize {
                    continue;
                }
                let j = ny as usize * w + nx as usize;
                if bits[j] {
                    uf.union(i as u32, j as u32);
                }
            }
        }
    }

    // roots are the smallest index of each component, i.e. its first pixel
    let mut label_map = vec![0u32; w * h];
    let mut pixels: Vec<Vec<usize>> = Vec::new();
    for i in 0..w * h {
        if !bits[i] {
            continue;
        }
        let root = uf.find(i as u32) as usize;
        let label = if root == i {
            pixels.push(Vec::new());
            pixels.len() as u32
        } else {
            label_map[root]
        };
        label_map[i] = label;
        pixels[label as usize - 1].push(i);
    }
    let regions = pixels
        .into_iter()
        .enumerate()
        .map(|(k, px)| Region::from_pixels(k as u32 + 1, px, w))
        .collect();
    RegionSet {
        width: w,
        height: h,
        regions,
        label_map,
    }
}

/// One intersecting region and the ratios it contributes.
#[derive(Clone, Debug, PartialEq)]
pub struct PairEntry {
    pub intersection: Region,
    /// Label of the containing white-channel region.
    pub nucleus: u32,
    /// Label of the containing green-channel region.
    pub body: u32,
    /// Nucleus area over intersection area.
    pub r_wi: f64,
    /// Body area over intersection area.
    pub r_gw: f64,
}

/// Intersections between a green mask and the white regions, with their
/// area ratios. Borrows the two region sets it indexes into.
#[derive(Clone, Debug)]
pub struct RegionPairing<'a> {
    pub entries: Vec<PairEntry>,
    pub white: &'a RegionSet,
    pub green: &'a RegionSet,
}

impl<'a> RegionPairing<'a> {
    pub fn m_count(&self) -> usize {
        self.entries.len()
    }

    pub fn nucleus(&self, entry: &PairEntry) -> &'a Region {
        self.white.get(entry.nucleus).expect("entry references a white region")
    }

    pub fn body(&self, entry: &PairEntry) -> &'a Region {
        self.green.get(entry.body).expect("entry references a green region")
    }

    pub fn r_wi(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.r_wi).collect()
    }

    pub fn r_gw(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.r_gw).collect()
    }
}

/// Pairs every 8-connected component of `green ∩ white` with the white
/// region (nucleus) and green region (body) that contain it.
///
/// Only pixels covered by a surviving region of both sets take part, so
/// area-filtered specks on either side never form intersections. `b_g` is
/// accepted for dimension checking and must be the mask `green_set` was
/// labeled from.
pub fn pair_regions<'a>(
    b_g: &BinaryMap,
    white_set: &'a RegionSet,
    green_set: &'a RegionSet,
) -> Result<RegionPairing<'a>> {
    check_dims(white_set.dims(), b_g.dims())?;
    check_dims(green_set.dims(), b_g.dims())?;
    let (w, h) = b_g.dims();
    let both = BinaryMap::new(
        w,
        h,
        (0..w * h)
            .map(|i| b_g.bits()[i] && white_set.label_at(i) != 0 && green_set.label_at(i) != 0)
            .collect(),
    );
    let inter = label_components(&both, Connectivity::Eight);
    let entries = inter
        .regions
        .into_iter()
        .map(|region| {
            let first = region.first_pixel();
            let nucleus = white_set.label_at(first);
            let body = green_set.label_at(first);
            debug_assert!(region
                .pixels
                .iter()
                .all(|&p| white_set.label_at(p) == nucleus && green_set.label_at(p) == body));
            let a = region.area as f64;
            let r_wi = white_set.get(nucleus).unwrap().area as f64 / a;
            let r_gw = green_set.get(body).unwrap().area as f64 / a;
            PairEntry {
                intersection: region,
                nucleus,
                body,
                r_wi,
                r_gw,
            }
        })
        .collect();
    Ok(RegionPairing {
        entries,
        white: white_set,
        green: green_set,
    })
}

/// Arithmetic mean; `None` for an empty slice (no intersecting regions).
pub fn mean_ratio(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        None
    } else {
        Some(values.iter().sum::<f64>() / values.len() as f64)
    }
}
