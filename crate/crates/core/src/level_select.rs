//! Green-channel saliency level selection.
//!
//! For a level `L` the green saliency map is thresholded and every connected
//! piece of `green ∩ white` is an intersecting region. Two mean ratios
//! summarize the level:
//!
//! * `r1(L)`: mean over intersections of nucleus area / intersection area.
//!   Small when the green mask covers whole nuclei, i.e. when `L` is low.
//! * `r2(L)`: mean over intersections of body area / intersection area.
//!   Small when green components hug the nuclei, i.e. when `L` is high.
//!
//! The cost `E(λ, L) = λ·r1(L) + (1 − λ)·r2(L)` is minimized over `L` for a
//! fixed weight, giving `E*(λ)`. The weight itself is chosen by the minimax
//! rule `λ* = argmax E*(λ)`: the weight at which the cheaper of the two
//! objectives is as expensive as possible, so neither objective can be
//! ignored. The selected level is `L_g = L*(λ*)`.
//!
//! `E*` is a pointwise minimum of functions linear in `λ` and is therefore
//! concave; the search is still exhaustive over both grids. Ties go to the
//! smallest level and the smallest weight. Costs closer than rounding can
//! resolve are compared exactly, so ties are decided by the ratios' true
//! values and scaling every ratio by a constant cannot move the selection.
//!
//! Because `r1` and `r2` depend on `L` alone, each level is labeled once and
//! reduced to a [`LevelStats`] row; the `λ` sweep is arithmetic on that
//! table. [`sweep_level_stats`] builds the whole table in one pass by
//! growing union-find forests from the highest level down, which is exactly
//! equivalent to thresholding and labeling at every level
//! ([`direct_level_stats`]).

use std::cmp::Ordering;

use num_bigint::BigInt;
use serde::Serialize;

use crate::binarize::threshold_at;
use crate::error::{Error, Result};
use crate::regions::{label_components, pair_regions, Connectivity, RegionSet};
use crate::saliency::SaliencyMap;

/// `n` evenly spaced values from 0 to 1 inclusive.
pub fn uniform_grid(n: usize) -> Vec<f64> {
    assert!(n >= 2, "a grid spanning [0, 1] needs at least two points");
    (0..n).map(|i| i as f64 / (n - 1) as f64).collect()
}

#[inline]
pub fn weighted_cost(lambda: f64, r1: f64, r2: f64) -> f64 {
    lambda * r1 + (1.0 - lambda) * r2
}

/// Ratio summary of one saliency level.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LevelStats {
    pub level: f64,
    /// Mean nucleus/intersection ratio; `+∞` when `m_count` is 0.
    pub r1_mean: f64,
    /// Mean body/intersection ratio; `+∞` when `m_count` is 0.
    pub r2_mean: f64,
    pub m_count: usize,
}

impl LevelStats {
    pub fn infeasible(level: f64) -> Self {
        LevelStats {
            level,
            r1_mean: f64::INFINITY,
            r2_mean: f64::INFINITY,
            m_count: 0,
        }
    }

    pub fn is_feasible(&self) -> bool {
        self.m_count > 0
    }

    /// `E(λ, L)`, or `+∞` for a level with no intersections.
    pub fn cost(&self, lambda: f64) -> f64 {
        if self.is_feasible() {
            weighted_cost(lambda, self.r1_mean, self.r2_mean)
        } else {
            f64::INFINITY
        }
    }
}

/// Per-level ratio statistics over an ascending level grid.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatioTable {
    pub rows: Vec<LevelStats>,
}

impl RatioTable {
    pub fn new(rows: Vec<LevelStats>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::InvalidArgument("level grid is empty".into()));
        }
        if rows.windows(2).any(|w| w[0].level.partial_cmp(&w[1].level) != Some(Ordering::Less)) {
            return Err(Error::InvalidArgument("level grid must ascend".into()));
        }
        Ok(RatioTable { rows })
    }

    /// Multiplies every ratio by `k`.
    pub fn scaled(&self, k: f64) -> RatioTable {
        RatioTable {
            rows: self
                .rows
                .iter()
                .map(|r| LevelStats {
                    r1_mean: r.r1_mean * k,
                    r2_mean: r.r2_mean * k,
                    ..*r
                })
                .collect(),
        }
    }
}

fn mean_of_sorted(mut entries: Vec<(usize, f64, f64)>) -> (f64, f64, usize) {
    // summation order is raster order of each intersection's first pixel
    entries.sort_unstable_by_key(|e| e.0);
    let m = entries.len();
    let (mut s1, mut s2) = (0.0, 0.0);
    for &(_, a, b) in &entries {
        s1 += a;
        s2 += b;
    }
    (s1 / m as f64, s2 / m as f64, m)
}

/// Ratio statistics of one level by direct thresholding, labeling and
/// pairing. Green components smaller than `min_area` are discarded.
pub fn level_stats(level: f64, white: &RegionSet, s_g: &SaliencyMap, min_area: usize) -> LevelStats {
    let b_g = threshold_at(s_g, level);
    let green = label_components(&b_g, Connectivity::Eight).filter_min_area(min_area);
    let pairing = pair_regions(&b_g, white, &green).expect("white set shares the map dimensions");
    if pairing.m_count() == 0 {
        return LevelStats::infeasible(level);
    }
    let entries = pairing
        .entries
        .iter()
        .map(|e| (e.intersection.first_pixel(), e.r_wi, e.r_gw))
        .collect();
    let (r1_mean, r2_mean, m_count) = mean_of_sorted(entries);
    LevelStats {
        level,
        r1_mean,
        r2_mean,
        m_count,
    }
}

/// One evaluation of the weighted cost.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CostSample {
    pub level: f64,
    /// `E(λ, L)`; `+∞` marks an unusable level.
    pub cost: f64,
    pub r1_mean: f64,
    pub r2_mean: f64,
    pub m_count: usize,
}

pub fn cost_at(
    lambda: f64,
    level: f64,
    white: &RegionSet,
    s_g: &SaliencyMap,
    min_area: usize,
) -> CostSample {
    let stats = level_stats(level, white, s_g, min_area);
    CostSample {
        level,
        cost: stats.cost(lambda),
        r1_mean: stats.r1_mean,
        r2_mean: stats.r2_mean,
        m_count: stats.m_count,
    }
}

pub fn direct_level_stats(
    level_grid: &[f64],
    white: &RegionSet,
    s_g: &SaliencyMap,
    min_area: usize,
) -> Result<RatioTable> {
    RatioTable::new(
        level_grid
            .iter()
            .map(|&l| level_stats(l, white, s_g, min_area))
            .collect(),
    )
}

struct SizedForest {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl SizedForest {
    fn new(n: usize) -> Self {
        SizedForest {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = p;
        }
        x
    }

    // the smaller root survives, so every root is its set's first pixel
    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi as usize] = lo;
        self.size[lo as usize] += self.size[hi as usize];
    }
}

/// Builds the full level table in one descending sweep.
///
/// A pixel with normalized saliency `s` belongs to the mask of every grid
/// level `≤ s`, so pixels are bucketed by the highest such level and added
/// to two forests as the level drops: one over the green mask and one over
/// green ∩ white. After each level's pixels are in, the live intersection
/// roots are exactly that level's intersecting regions.
pub fn sweep_level_stats(
    level_grid: &[f64],
    white: &RegionSet,
    s_g: &SaliencyMap,
    min_area: usize,
) -> Result<RatioTable> {
    if level_grid.is_empty() || level_grid.windows(2).any(|w| w[0].partial_cmp(&w[1]) != Some(Ordering::Less)) {
        return Err(Error::InvalidArgument("level grid must be non-empty and ascending".into()));
    }
    crate::error::check_dims(white.dims(), s_g.dims())?;
    let (w, h) = s_g.dims();
    let n = w * h;
    let k = level_grid.len();

    // entry[p] = number of levels at or below s(p); pixel p first appears at
    // level index entry[p] - 1 and never if entry[p] == 0
    let entry: Vec<usize> = s_g
        .values()
        .iter()
        .map(|&s| level_grid.partition_point(|&l| l <= s))
        .collect();
    let mut counts = vec![0usize; k + 1];
    for &e in &entry {
        counts[e] += 1;
    }
    // bucket e occupies order[offsets[e]..offsets[e + 1]]
    let mut offsets = vec![0usize; k + 2];
    for e in 1..=k {
        offsets[e + 1] = offsets[e] + counts[e];
    }
    let mut order = vec![0u32; offsets[k + 1]];
    let mut fill = offsets.clone();
    for (p, &e) in entry.iter().enumerate() {
        if e > 0 {
            order[fill[e]] = p as u32;
            fill[e] += 1;
        }
    }

    let white_labels = white.label_map();
    let mut green = SizedForest::new(n);
    let mut inter = SizedForest::new(n);
    let mut active = vec![false; n];
    let mut roots: Vec<u32> = Vec::new();
    let mut rows = vec![LevelStats::infeasible(0.0); k];

    for li in (0..k).rev() {
        for &p in &order[offsets[li + 1]..offsets[li + 2]] {
            let pu = p as usize;
            active[pu] = true;
            let in_white = white_labels[pu] != 0;
            if in_white {
                roots.push(p);
            }
            let (x, y) = (pu % w, pu / w);
            for dy in -1isize..=1 {
                for dx in -1isize..=1 {
                    if dx == 0 && dy == 0 {
                        continue;
                    }
                    let (nx, ny) = (x as isize + dx, y as isize + dy);
                    if nx < 0 || ny < 0 || nx >= w as isize || ny >= h as isize {
                        continue;
                    }
                    let q = ny as usize * w + nx as usize;
                    if !active[q] {
                        continue;
                    }
                    green.union(p, q as u32);
                    if in_white && white_labels[q] != 0 {
                        inter.union(p, q as u32);
                    }
                }
            }
        }

        roots.retain(|&r| inter.parent[r as usize] == r);
        let mut entries = Vec::with_capacity(roots.len());
        for &r in &roots {
            let root = green.find(r) as usize;
            let body_area = green.size[root] as usize;
            if body_area < min_area {
                continue;
            }
            let nucleus_area = white
                .get(white_labels[r as usize])
                .expect("intersection pixel lies in a white region")
                .area;
            let a = inter.size[r as usize] as f64;
            entries.push((r as usize, nucleus_area as f64 / a, body_area as f64 / a));
        }
        rows[li] = if entries.is_empty() {
            LevelStats::infeasible(level_grid[li])
        } else {
            let (r1_mean, r2_mean, m_count) = mean_of_sorted(entries);
            LevelStats {
                level: level_grid[li],
                r1_mean,
                r2_mean,
                m_count,
            }
        };
    }
    RatioTable::new(rows)
}

/// An exact binary fraction `m · 2^e`.
struct Dyadic {
    m: BigInt,
    e: i32,
}

impl Dyadic {
    fn from_f64(v: f64) -> Dyadic {
        debug_assert!(v.is_finite());
        let bits = v.to_bits();
        let sign = if bits >> 63 == 0 { 1i64 } else { -1 };
        let exp = ((bits >> 52) & 0x7ff) as i32;
        let frac = (bits & ((1u64 << 52) - 1)) as i64;
        let (m, e) = if exp == 0 { (frac, -1074) } else { (frac | (1i64 << 52), exp - 1075) };
        Dyadic {
            m: BigInt::from(sign * m),
            e,
        }
    }

    fn shifted(&self, e: i32) -> BigInt {
        &self.m << (self.e - e) as usize
    }

    fn add(&self, o: &Dyadic) -> Dyadic {
        let e = self.e.min(o.e);
        Dyadic {
            m: self.shifted(e) + o.shifted(e),
            e,
        }
    }

    fn mul(&self, o: &Dyadic) -> Dyadic {
        Dyadic {
            m: &self.m * &o.m,
            e: self.e + o.e,
        }
    }

    fn neg(&self) -> Dyadic {
        Dyadic {
            m: -&self.m,
            e: self.e,
        }
    }

    fn cmp(&self, o: &Dyadic) -> Ordering {
        let e = self.e.min(o.e);
        self.shifted(e).cmp(&o.shifted(e))
    }
}

fn exact_cost(lambda: f64, r1: f64, r2: f64) -> Dyadic {
    let l = Dyadic::from_f64(lambda);
    let rest = Dyadic::from_f64(1.0).add(&l.neg());
    l.mul(&Dyadic::from_f64(r1)).add(&rest.mul(&Dyadic::from_f64(r2)))
}

/// Orders `E(λa, row a)` against `E(λb, row b)` by their exact values.
/// Both rows must be feasible.
fn cmp_cost(la: f64, a: &LevelStats, lb: f64, b: &LevelStats) -> Ordering {
    let (ea, eb) = (a.cost(la), b.cost(lb));
    // each cost carries at most a few units of relative rounding
    if (ea - eb).abs() > 1e-13 * ea.abs().max(eb.abs()) {
        return ea.partial_cmp(&eb).expect("finite costs");
    }
    exact_cost(la, a.r1_mean, a.r2_mean).cmp(&exact_cost(lb, b.r1_mean, b.r2_mean))
}

/// Index of the cheapest feasible row, smallest level on ties.
fn inner_argmin(lambda: f64, table: &RatioTable) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, row) in table.rows.iter().enumerate() {
        if !row.is_feasible() {
            continue;
        }
        if best.is_none_or(|b| cmp_cost(lambda, row, lambda, &table.rows[b]) == Ordering::Less) {
            best = Some(i);
        }
    }
    best
}

/// `(L*(λ), E*(λ))` over the table, smallest level on ties; `None` when
/// every level is unusable.
pub fn inner_minimize(lambda: f64, table: &RatioTable) -> Option<(f64, f64)> {
    inner_argmin(lambda, table).map(|i| {
        let row = &table.rows[i];
        (row.level, row.cost(lambda))
    })
}

/// The cost over all levels for one weight, with its minimum.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CostCurve {
    pub lambda: f64,
    pub samples: Vec<CostSample>,
    /// `(L*, E*)`, absent when no level is usable.
    pub best: Option<(f64, f64)>,
}

pub fn cost_curve(lambda: f64, table: &RatioTable) -> CostCurve {
    CostCurve {
        lambda,
        samples: table
            .rows
            .iter()
            .map(|r| CostSample {
                level: r.level,
                cost: r.cost(lambda),
                r1_mean: r.r1_mean,
                r2_mean: r.r2_mean,
                m_count: r.m_count,
            })
            .collect(),
        best: inner_minimize(lambda, table),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MinimaxResult {
    pub lambda_star: f64,
    pub l_g: f64,
    pub e_star: f64,
    pub curves: Vec<CostCurve>,
}

impl MinimaxResult {
    /// `(λ, E*(λ))` for every weight with a usable level.
    pub fn e_star_curve(&self) -> Vec<(f64, f64)> {
        self.curves
            .iter()
            .filter_map(|c| c.best.map(|(_, e)| (c.lambda, e)))
            .collect()
    }
}

/// Minimax weight and the level it selects.
pub fn minimax_select(lambda_grid: &[f64], table: &RatioTable) -> Result<MinimaxResult> {
    if lambda_grid.is_empty()
        || lambda_grid.windows(2).any(|w| w[0].partial_cmp(&w[1]) != Some(Ordering::Less))
        || lambda_grid[0] != 0.0
        || *lambda_grid.last().unwrap() != 1.0
    {
        return Err(Error::InvalidArgument(
            "lambda grid must ascend from 0 to 1 inclusive".into(),
        ));
    }
    let curves: Vec<CostCurve> = lambda_grid.iter().map(|&l| cost_curve(l, table)).collect();
    let mut star: Option<(f64, usize)> = None;
    for &lambda in lambda_grid {
        if let Some(i) = inner_argmin(lambda, table) {
            let better = star.is_none_or(|(bl, bi)| {
                cmp_cost(lambda, &table.rows[i], bl, &table.rows[bi]) == Ordering::Greater
            });
            if better {
                star = Some((lambda, i));
            }
        }
    }
    let star = star.map(|(lambda, i)| (lambda, table.rows[i].level, table.rows[i].cost(lambda)));
    let (lambda_star, l_g, e_star) = star.ok_or(Error::NoFeasibleLevel)?;
    Ok(MinimaxResult {
        lambda_star,
        l_g,
        e_star,
        curves,
    })
}

/// Level selection with the weight fixed by the caller instead of chosen
/// by the minimax rule.
pub fn select_with_lambda(lambda: f64, table: &RatioTable) -> Result<MinimaxResult> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::InvalidArgument(format!("lambda {lambda} outside [0, 1]")));
    }
    let curve = cost_curve(lambda, table);
    let (l_g, e_star) = curve.best.ok_or(Error::NoFeasibleLevel)?;
    Ok(MinimaxResult {
        lambda_star: lambda,
        l_g,
        e_star,
        curves: vec![curve],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binarize::BinaryMap;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn table_from(levels: &[f64], r1: &[f64], r2: &[f64]) -> RatioTable {
        RatioTable::new(
            levels
                .iter()
                .zip(r1.iter().zip(r2))
                .map(|(&level, (&a, &b))| {
                    if a.is_finite() {
                        LevelStats {
                            level,
                            r1_mean: a,
                            r2_mean: b,
                            m_count: 1,
                        }
                    } else {
                        LevelStats::infeasible(level)
                    }
                })
                .collect(),
        )
        .unwrap()
    }

    fn rect(w: usize, h: usize, x0: usize, y0: usize, x1: usize, y1: usize) -> BinaryMap {
        BinaryMap::from_fn(w, h, |x, y| (x0..x1).contains(&x) && (y0..y1).contains(&y))
    }

    #[test]
    fn cost_weight_collapse_and_containment() {
        let (w, h) = (20, 20);
        let body = rect(w, h, 5, 5, 15, 15);
        let nucleus = rect(w, h, 7, 7, 12, 12);
        let white = label_components(&nucleus, Connectivity::Eight);
        let s_g = SaliencyMap::from_values(
            w,
            h,
            body.bits().iter().map(|&b| if b { 1.0 } else { 0.0 }).collect(),
        )
        .normalize();
        let half = cost_at(0.5, 0.5, &white, &s_g, 5);
        assert_eq!((half.r1_mean, half.r2_mean, half.m_count), (1.0, 4.0, 1));
        assert_eq!(half.cost, 2.5);
        assert_eq!(cost_at(1.0, 0.5, &white, &s_g, 5).cost, half.r1_mean);
        assert_eq!(cost_at(0.0, 0.5, &white, &s_g, 5).cost, half.r2_mean);
        // above every saliency value nothing intersects
        let none = cost_at(0.5, 1.0 + 1e-9, &white, &s_g, 5);
        assert_eq!(none.m_count, 0);
        assert_eq!(none.cost, f64::INFINITY);
    }

    #[test]
    fn inner_minimize_examples() {
        let levels = [0.2, 0.5, 0.8];
        // λ = 1 makes the cost equal to r1
        let t = table_from(&levels, &[10.0, 3.0, 7.0], &[0.0; 3]);
        assert_eq!(inner_minimize(1.0, &t), Some((0.5, 3.0)));
        let t = table_from(&levels, &[f64::INFINITY; 3], &[f64::INFINITY; 3]);
        assert_eq!(inner_minimize(0.3, &t), None);
        let t = table_from(&[0.2, 0.5], &[3.0, 3.0], &[0.0, 0.0]);
        assert_eq!(inner_minimize(1.0, &t), Some((0.2, 3.0)));
    }

    #[test]
    fn crossing_lines_peak_at_half() {
        let levels = uniform_grid(256);
        let r1: Vec<f64> = levels.clone();
        let r2: Vec<f64> = levels.iter().map(|l| 1.0 - l).collect();
        let t = table_from(&levels, &r1, &r2);
        let res = minimax_select(&uniform_grid(101), &t).unwrap();
        assert_eq!(res.lambda_star, 0.5);
        assert_eq!(res.e_star, 0.5);
        for (lambda, e) in res.e_star_curve() {
            assert!((e - lambda.min(1.0 - lambda)).abs() < 1e-12);
        }
    }

    #[test]
    fn constant_ratios_pick_zero_weight() {
        let levels = uniform_grid(16);
        let t = table_from(&levels, &[2.0; 16], &[5.0; 16]);
        let res = minimax_select(&uniform_grid(101), &t).unwrap();
        assert_eq!(res.lambda_star, 0.0);
        assert_eq!(res.e_star, 5.0);
        assert_eq!(res.l_g, 0.0);
    }

    #[test]
    fn infeasible_everywhere_is_an_error() {
        let levels = uniform_grid(8);
        let t = table_from(&levels, &[f64::INFINITY; 8], &[f64::INFINITY; 8]);
        assert!(matches!(
            minimax_select(&uniform_grid(11), &t),
            Err(Error::NoFeasibleLevel)
        ));
        assert!(minimax_select(&[0.0, 0.5], &t).is_err());
        assert!(minimax_select(&[], &t).is_err());
    }

    #[test]
    fn fixed_lambda_override() {
        let levels = uniform_grid(5);
        let t = table_from(&levels, &[1.0, 2.0, 3.0, 4.0, 5.0], &[5.0, 3.0, 2.0, 1.5, 1.0]);
        let r = select_with_lambda(0.5, &t).unwrap();
        assert_eq!(r.lambda_star, 0.5);
        // costs 3, 2.5, 2.5, 2.75, 3: smallest tied level wins
        assert_eq!(r.l_g, 0.25);
        assert_eq!(r.e_star, 2.5);
        assert!(select_with_lambda(1.5, &t).is_err());
    }

    #[test]
    fn sweep_equals_direct_labeling() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for trial in 0..12 {
            let (w, h) = (37, 29);
            // smooth-ish saliency: sum of a few bumps plus noise
            let bumps: Vec<(f64, f64, f64)> = (0..5)
                .map(|_| (rng.random_range(0.0..w as f64), rng.random_range(0.0..h as f64), rng.random_range(3.0..9.0)))
                .collect();
            let vals: Vec<f64> = (0..w * h)
                .map(|i| {
                    let (x, y) = ((i % w) as f64, (i / w) as f64);
                    let b: f64 = bumps
                        .iter()
                        .map(|&(cx, cy, r)| (-((x - cx).powi(2) + (y - cy).powi(2)) / (r * r)).exp())
                        .sum();
                    b + 0.2 * rng.random::<f64>()
                })
                .collect();
            let s_g = SaliencyMap::from_values(w, h, vals).normalize();
            let white = label_components(
                &BinaryMap::from_fn(w, h, |x, y| {
                    bumps.iter().any(|&(cx, cy, r)| {
                        (x as f64 - cx).powi(2) + (y as f64 - cy).powi(2) < (r * 0.6).powi(2)
                    })
                }),
                Connectivity::Eight,
            )
            .filter_min_area(3);
            let grid = uniform_grid(if trial % 2 == 0 { 64 } else { 256 });
            let min_area = trial % 4 + 1;
            let fast = sweep_level_stats(&grid, &white, &s_g, min_area).unwrap();
            let slow = direct_level_stats(&grid, &white, &s_g, min_area).unwrap();
            assert_eq!(fast, slow, "trial {trial}");
        }
    }

    #[test]
    fn minimum_never_exceeds_any_level() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let levels = uniform_grid(40);
        let r1: Vec<f64> = (0..40).map(|_| rng.random_range(1.0..5.0)).collect();
        let r2: Vec<f64> = (0..40).map(|_| rng.random_range(1.0..5.0)).collect();
        let t = table_from(&levels, &r1, &r2);
        for lambda in uniform_grid(21) {
            let (_, e) = inner_minimize(lambda, &t).unwrap();
            for row in &t.rows {
                assert!(e <= row.cost(lambda));
            }
        }
    }

    #[test]
    fn tied_costs_survive_scaling() {
        // quarter-step ratios produce exact ties that rounding would split
        let mut rng = ChaCha8Rng::seed_from_u64(35);
        let levels = uniform_grid(64);
        let lambdas = uniform_grid(101);
        for _ in 0..50 {
            let q = |rng: &mut ChaCha8Rng, hi: f64| (rng.random_range(1.0..hi) * 4.0f64).round() / 4.0;
            let r1: Vec<f64> = (0..64).map(|_| q(&mut rng, 3.0)).collect();
            let r2: Vec<f64> = (0..64).map(|_| q(&mut rng, 6.0)).collect();
            let t = table_from(&levels, &r1, &r2);
            let base = minimax_select(&lambdas, &t).unwrap();
            for k in [0.5, 3.0, 10.0] {
                let s = minimax_select(&lambdas, &t.scaled(k)).unwrap();
                assert_eq!((s.lambda_star, s.l_g), (base.lambda_star, base.l_g), "k = {k}");
            }
        }
    }

    #[test]
    fn exact_comparison_breaks_rounding_ties() {
        let a = LevelStats { level: 0.0, r1_mean: 0.1, r2_mean: 0.2, m_count: 1 };
        assert_eq!(cmp_cost(0.3, &a, 0.3, &a), Ordering::Equal);
        let b = LevelStats { r1_mean: 0.2, r2_mean: 0.1, ..a };
        assert_eq!(cmp_cost(0.5, &a, 0.5, &b), Ordering::Equal);
        assert_eq!(cmp_cost(0.25, &a, 0.25, &b), Ordering::Greater);
        assert_eq!(Dyadic::from_f64(-0.75).cmp(&Dyadic::from_f64(0.5)), Ordering::Less);
        assert_eq!(Dyadic::from_f64(5e-324).cmp(&Dyadic::from_f64(0.0)), Ordering::Greater);
    }
}
