//! Tukey depth, the normalized target `Q_TD`, and the private Tukey median.
//!
//! Depth uses closed halfspaces: `TD_S(p) = min_v |{s : <v, s - p> >= 0}|`.
//! In the plane the depth regions `D_k = {p : TD_S(p) >= k}` are convex
//! polygons cut out by halfplanes whose boundary passes through two data
//! points (or one, when the data is degenerate), so slice maxima are computed
//! exactly from a finite family of normal directions.

use std::collections::{BTreeMap, HashSet};

use num_integer::Integer;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dp_core::{inverse_composition, RandomSource};
use crate::error::{Error, Result};
use crate::geometry::{angle_cmp, cross, Frac, HPoint, Interval};
use crate::interior_point::{n_ip, q_ip_score};
use crate::optimizer::{ip_concave_high_dim, CoordinateTrace, OptimizerConfig, TargetFunction};
use crate::rationals::{tukey_domain, BoundedRational, RationalGrid, TukeyGridConfig};
use crate::{CompositionLedger, PrivacyParams};

/// Largest dimension with exact depth evaluation.
pub const MAX_DEPTH_DIM: usize = 3;
/// Largest dimension supported by the private median.
pub const MAX_MEDIAN_DIM: usize = 2;

/// Multiset of integer points with coordinates in `[-X, X]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointSet {
    pub d: usize,
    pub x_bound: u64,
    pub points: Vec<Vec<i64>>,
}

impl PointSet {
    pub fn new(d: usize, x_bound: u64, points: Vec<Vec<i64>>) -> Result<Self> {
        if d == 0 {
            return Err(Error::param("dimension must be positive"));
        }
        for (i, p) in points.iter().enumerate() {
            if p.len() != d {
                return Err(Error::param(format!("point {i} has {} coordinates, expected {d}", p.len())));
            }
            if p.iter().any(|c| c.unsigned_abs() > x_bound) {
                return Err(Error::param(format!("point {i} leaves the box [-{x_bound}, {x_bound}]")));
            }
        }
        Ok(Self { d, x_bound, points })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Distinct points with multiplicities, in lexicographic order.
pub fn weighted(points: &[Vec<i64>]) -> Vec<(Vec<i64>, usize)> {
    let mut m: BTreeMap<&[i64], usize> = BTreeMap::new();
    for p in points {
        *m.entry(p.as_slice()).or_default() += 1;
    }
    m.into_iter().map(|(k, v)| (k.to_vec(), v)).collect()
}

fn check_query(d: usize, p: &[BoundedRational]) -> Result<()> {
    if p.len() != d {
        return Err(Error::param(format!("query has {} coordinates, expected {d}", p.len())));
    }
    if d > MAX_DEPTH_DIM {
        return Err(Error::UnsupportedDimension {
            dim: d,
            max: MAX_DEPTH_DIM,
        });
    }
    Ok(())
}

/// Exact Tukey depth of `p` with respect to `points` (closed halfspaces).
pub fn tukey_depth_of(points: &[Vec<i64>], d: usize, p: &[BoundedRational]) -> Result<usize> {
    check_query(d, p)?;
    let w = weighted(points);
    match d {
        1 => {
            let vals: Vec<BoundedRational> = points.iter().map(|s| BoundedRational::from(s[0])).collect();
            Ok(q_ip_score(&vals, &p[0]))
        }
        2 => Ok(depth_2d(&w, &HPoint::from_rationals(&p[0], &p[1])?)),
        _ => depth_3d(&w, p),
    }
}

/// Planar Tukey depth over a multiset already grouped by [`weighted`].
pub fn weighted_depth_2d(points: &[(Vec<i64>, usize)], p: &[BoundedRational]) -> Result<usize> {
    check_query(2, p)?;
    Ok(depth_2d(points, &HPoint::from_rationals(&p[0], &p[1])?))
}

pub fn tukey_depth(s: &PointSet, p: &[BoundedRational]) -> Result<usize> {
    tukey_depth_of(&s.points, s.d, p)
}

/// `TD_S(p) / |S|`.
pub fn q_td(s: &PointSet, p: &[BoundedRational]) -> Result<f64> {
    if s.is_empty() {
        return Err(Error::param("Q_TD needs a non-empty point set"));
    }
    Ok(tukey_depth(s, p)? as f64 / s.len() as f64)
}

/// Angular sweep around `p`: depth = (points at `p`) + (other points) - (most
/// points in an open half-circle of directions).
pub(crate) fn depth_2d(pts: &[(Vec<i64>, usize)], p: &HPoint) -> usize {
    let mut zeros = 0;
    let mut vecs: Vec<((i128, i128), usize)> = Vec::with_capacity(pts.len());
    for (s, c) in pts {
        let v = (s[0] as i128 * p.w - p.x, s[1] as i128 * p.w - p.y);
        if v == (0, 0) {
            zeros += c;
        } else {
            vecs.push((v, *c));
        }
    }
    zeros + vecs.iter().map(|v| v.1).sum::<usize>() - max_open_half_circle(vecs)
}

/// Largest weight of vectors inside an open half-plane through the origin.
fn max_open_half_circle(mut vecs: Vec<((i128, i128), usize)>) -> usize {
    if vecs.is_empty() {
        return 0;
    }
    vecs.sort_by(|a, b| angle_cmp(a.0, b.0));
    // merge equal directions
    let mut groups: Vec<((i128, i128), usize)> = Vec::with_capacity(vecs.len());
    for (v, c) in vecs {
        match groups.last_mut() {
            Some((u, k)) if cross(*u, v) == 0 && u.0 * v.0 + u.1 * v.1 > 0 => *k += c,
            _ => groups.push((v, c)),
        }
    }
    let m = groups.len();
    let mut best = 0;
    let mut end = 0;
    let mut sum = 0;
    for i in 0..m {
        if end < i + 1 {
            end = i + 1;
            sum = groups[i].1;
        }
        while end < i + m && cross(groups[i].0, groups[end % m].0) > 0 {
            sum += groups[end % m].1;
            end += 1;
        }
        best = best.max(sum);
        sum -= groups[i].1;
    }
    best
}

fn cross3(a: [i128; 3], b: [i128; 3]) -> [i128; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn dot3(a: [i128; 3], b: [i128; 3]) -> i128 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Depth in three dimensions by enumerating the vertices `v_i x v_j` of the
/// great-circle arrangement and resolving the in-plane vectors at each one.
fn depth_3d(pts: &[(Vec<i64>, usize)], p: &[BoundedRational]) -> Result<usize> {
    let overflow = || Error::Overflow("query point exceeds exact range".into());
    let mut w: i128 = 1;
    let mut pairs = Vec::with_capacity(3);
    for c in p {
        let pr = c.to_i128_pair().ok_or_else(overflow)?;
        w = w.lcm(&pr.1);
        pairs.push(pr);
    }
    if w > 1 << 30 {
        return Err(overflow());
    }
    let scaled: Vec<i128> = pairs.iter().map(|(n, d)| n * (w / d)).collect();
    if scaled.iter().any(|v| v.abs() > 1 << 36) {
        return Err(overflow());
    }
    let mut zeros = 0;
    let mut vecs: Vec<([i128; 3], usize)> = Vec::new();
    for (s, c) in pts {
        let v = [
            s[0] as i128 * w - scaled[0],
            s[1] as i128 * w - scaled[1],
            s[2] as i128 * w - scaled[2],
        ];
        if v == [0, 0, 0] {
            zeros += c;
        } else {
            vecs.push((v, *c));
        }
    }
    if vecs.is_empty() {
        return Ok(zeros);
    }
    let mut normals: HashSet<[i128; 3]> = HashSet::new();
    for i in 0..vecs.len() {
        for j in i + 1..vecs.len() {
            let c = cross3(vecs[i].0, vecs[j].0);
            if c != [0, 0, 0] {
                let g = c[0].gcd(&c[1]).gcd(&c[2]);
                let c = [c[0] / g, c[1] / g, c[2] / g];
                normals.insert(c);
                normals.insert([-c[0], -c[1], -c[2]]);
            }
        }
    }
    if normals.is_empty() {
        // all vectors on one line through p
        let v = vecs[0].0;
        let n = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
            .into_iter()
            .map(|e| cross3(v, e))
            .find(|c| *c != [0, 0, 0])
            .expect("nonzero vector");
        normals.insert(n);
    }
    let mut best = usize::MAX;
    for n0 in normals {
        let mut count = 0;
        let mut plane: Vec<([i128; 3], usize)> = Vec::new();
        for &(v, c) in &vecs {
            match dot3(n0, v).cmp(&0) {
                std::cmp::Ordering::Greater => count += c,
                std::cmp::Ordering::Equal => plane.push((v, c)),
                std::cmp::Ordering::Less => {}
            }
        }
        let total: usize = plane.iter().map(|x| x.1).sum();
        let mut open = 0;
        for &(a, _) in &plane {
            let s: usize = plane
                .iter()
                .filter(|(b, _)| {
                    let o = dot3(n0, cross3(a, *b));
                    o > 0 || (o == 0 && dot3(a, *b) > 0)
                })
                .map(|x| x.1)
                .sum();
            open = open.max(s);
        }
        best = best.min(count + total - open);
    }
    Ok(zeros + best)
}

/// Depth regions of a planar multiset.
///
/// For every normal `v` in the family, the tightest closed halfplane
/// `<v, z> >= c` holding more than `n - k` points has `c` equal to the
/// `(n - k + 1)`-th largest projection. `D_k` is the intersection of these.
#[derive(Debug, Clone)]
pub struct DepthLevels2 {
    n: usize,
    /// Normal and the projections in decreasing order with cumulative weights.
    dirs: Vec<((i128, i128), Vec<(i128, usize)>)>,
}

impl DepthLevels2 {
    pub fn new(points: &[Vec<i64>]) -> Self {
        let pts = weighted(points);
        let mut normals: HashSet<(i128, i128)> = [(1, 0), (-1, 0), (0, 1), (0, -1)].into_iter().collect();
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                let dx = (pts[j].0[0] - pts[i].0[0]) as i128;
                let dy = (pts[j].0[1] - pts[i].0[1]) as i128;
                let g = dx.gcd(&dy);
                normals.insert((-dy / g, dx / g));
                normals.insert((dy / g, -dx / g));
            }
        }
        let mut normals: Vec<(i128, i128)> = normals.into_iter().collect();
        normals.sort_by(|a, b| angle_cmp(*a, *b));
        let dirs = normals
            .into_iter()
            .map(|v| {
                let mut proj: Vec<(i128, usize)> =
                    pts.iter().map(|(s, c)| (v.0 * s[0] as i128 + v.1 * s[1] as i128, *c)).collect();
                proj.sort_by(|a, b| b.0.cmp(&a.0));
                let mut acc = 0;
                for e in proj.iter_mut() {
                    acc += e.1;
                    e.1 = acc;
                }
                (v, proj)
            })
            .collect();
        Self { n: points.len(), dirs }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Active halfplanes `<v, z> >= c` for level `k` in `1..=n`.
    fn halfplanes(&self, k: usize) -> Vec<((i128, i128), i128)> {
        let need = self.n + 1 - k;
        self.dirs
            .iter()
            .map(|(v, proj)| {
                let at = proj.partition_point(|e| e.1 < need);
                (*v, proj[at].0)
            })
            .collect()
    }

    /// Projection of `D_k` on the first axis; `None` when `D_k` is empty.
    pub fn x_projection(&self, k: usize) -> Option<Interval> {
        if k == 0 {
            return Some(Interval::ALL);
        }
        if k > self.n {
            return None;
        }
        let hs = self.halfplanes(k);
        let mut lo: Option<Frac> = None;
        let mut hi: Option<Frac> = None;
        let mut bound = |a: i128, c: i128| -> bool {
            // a x >= c
            match a.cmp(&0) {
                std::cmp::Ordering::Greater => {
                    let f = Frac::new(c, a);
                    lo = Some(lo.map_or(f, |l| l.max(f)));
                }
                std::cmp::Ordering::Less => {
                    let f = Frac::new(c, a);
                    hi = Some(hi.map_or(f, |h| h.min(f)));
                }
                std::cmp::Ordering::Equal => return c <= 0,
            }
            true
        };
        let lowers: Vec<_> = hs.iter().filter(|h| h.0 .1 > 0).collect();
        let uppers: Vec<_> = hs.iter().filter(|h| h.0 .1 < 0).collect();
        for h in hs.iter().filter(|h| h.0 .1 == 0) {
            if !bound(h.0 .0, h.1) {
                return None;
            }
        }
        for &&((ai, bi), ci) in &lowers {
            for &&((aj, bj), cj) in &uppers {
                let (a, c) = (ai * -bj + aj * bi, ci * -bj + cj * bi);
                if !bound(a, c) {
                    return None;
                }
            }
        }
        match (lo, hi) {
            (Some(l), Some(h)) if l > h => None,
            _ => Some(Interval { lo, hi }),
        }
    }

    /// `{y : (x, y) in D_k}`; `None` when empty.
    pub fn y_interval(&self, k: usize, x: Frac) -> Option<Interval> {
        if k == 0 {
            return Some(Interval::ALL);
        }
        if k > self.n {
            return None;
        }
        let mut lo: Option<Frac> = None;
        let mut hi: Option<Frac> = None;
        for ((a, b), c) in self.halfplanes(k) {
            // a x + b y >= c  =>  b y >= c - a x
            let rhs = Frac::new(c * x.d - a * x.n, x.d);
            match b.cmp(&0) {
                std::cmp::Ordering::Equal => {
                    if rhs.n > 0 {
                        return None;
                    }
                }
                std::cmp::Ordering::Greater => {
                    let f = Frac::new(rhs.n, rhs.d * b);
                    lo = Some(lo.map_or(f, |l| l.max(f)));
                }
                std::cmp::Ordering::Less => {
                    let f = Frac::new(rhs.n, rhs.d * b);
                    hi = Some(hi.map_or(f, |h| h.min(f)));
                }
            }
        }
        match (lo, hi) {
            (Some(l), Some(h)) if l > h => None,
            _ => Some(Interval { lo, hi }),
        }
    }

    /// `max_y TD(x, y)`.
    pub fn slice_depth(&self, x: Frac) -> usize {
        last_true(self.n, |k| self.x_projection(k).is_some_and(|iv| iv.contains(x)))
    }

    /// Maximum depth over the plane.
    pub fn max_depth(&self) -> usize {
        last_true(self.n, |k| self.x_projection(k).is_some())
    }
}

/// Largest `k` in `0..=n` with `pred(k)`, for a predicate that holds at 0 and
/// is monotone decreasing.
fn last_true(n: usize, pred: impl Fn(usize) -> bool) -> usize {
    let (mut lo, mut hi) = (0, n);
    while lo < hi {
        let mid = lo + (hi - lo + 1) / 2;
        if pred(mid) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    lo
}

/// `{x : TD(x) >= k}` on the line: `[v_(k), v_(n-k+1)]`.
fn level_interval_1d(sorted: &[i64], k: usize) -> Option<Interval> {
    let n = sorted.len();
    if k == 0 {
        return Some(Interval::ALL);
    }
    if k > n {
        return None;
    }
    let (lo, hi) = (sorted[k - 1], sorted[n - k]);
    (lo <= hi).then(|| Interval {
        lo: Some(Frac::new(lo as i128, 1)),
        hi: Some(Frac::new(hi as i128, 1)),
    })
}

/// Maximum of `Q_TD` over the coordinates after `prefix` and `x` (over all
/// reals, exact for `d <= 2`).
pub fn td_slice_max(s: &PointSet, prefix: &[BoundedRational], x: &BoundedRational) -> Result<f64> {
    if s.is_empty() {
        return Err(Error::param("Q_TD needs a non-empty point set"));
    }
    TukeyTarget::new(s.d, s.x_bound, TukeyGridConfig::default())?.slice_eval(&s.points, prefix, x)
}

/// `Q_TD` as an optimizer target for `d <= 2`.
#[derive(Debug, Clone)]
pub struct TukeyTarget {
    pub d: usize,
    pub x_bound: u64,
    pub grid: TukeyGridConfig,
}

impl TukeyTarget {
    pub fn new(d: usize, x_bound: u64, grid: TukeyGridConfig) -> Result<Self> {
        if d == 0 || d > MAX_MEDIAN_DIM {
            return Err(Error::UnsupportedDimension {
                dim: d,
                max: MAX_MEDIAN_DIM,
            });
        }
        Ok(Self { d, x_bound, grid })
    }

    fn level_fn<'a>(&self, data: &'a [Vec<i64>], prefix: &'a [BoundedRational]) -> Result<Box<dyn Fn(usize) -> Option<Interval> + 'a>> {
        if self.d == 1 {
            let mut v: Vec<i64> = data.iter().map(|p| p[0]).collect();
            v.sort_unstable();
            return Ok(Box::new(move |k| level_interval_1d(&v, k)));
        }
        let levels = DepthLevels2::new(data);
        match prefix {
            [] => Ok(Box::new(move |k| levels.x_projection(k))),
            [x1] => {
                let x = Frac::from_rational(x1)?;
                Ok(Box::new(move |k| levels.y_interval(k, x)))
            }
            _ => Err(Error::param("prefix longer than the dimension")),
        }
    }
}

impl TargetFunction for TukeyTarget {
    type Item = Vec<i64>;

    fn dim(&self) -> usize {
        self.d
    }

    fn eval(&self, data: &[Vec<i64>], point: &[BoundedRational]) -> Result<f64> {
        if data.is_empty() {
            return Err(Error::param("Q_TD needs a non-empty point set"));
        }
        Ok(tukey_depth_of(data, self.d, point)? as f64 / data.len() as f64)
    }

    fn slice_eval(&self, data: &[Vec<i64>], prefix: &[BoundedRational], x: &BoundedRational) -> Result<f64> {
        if data.is_empty() {
            return Err(Error::param("Q_TD needs a non-empty point set"));
        }
        if prefix.len() + 1 == self.d {
            let mut p = prefix.to_vec();
            p.push(x.clone());
            return self.eval(data, &p);
        }
        let xf = Frac::from_rational(x)?;
        let level = self.level_fn(data, prefix)?;
        Ok(last_true(data.len(), |k| level(k).is_some_and(|iv| iv.contains(xf))) as f64 / data.len() as f64)
    }

    fn domain(&self, prefix: &[BoundedRational]) -> Result<RationalGrid> {
        let prev = match prefix.last() {
            Some(v) => u64::try_from(v.denom()).map_err(|_| Error::Overflow("prefix denominator".into()))?,
            None => 1,
        };
        tukey_domain(prefix.len() + 1, self.d, self.x_bound, prev, &self.grid)
    }

    fn slice_argmax(&self, data: &[Vec<i64>], prefix: &[BoundedRational], grid: &RationalGrid) -> Result<(BoundedRational, f64)> {
        if data.is_empty() {
            return Err(Error::param("Q_TD needs a non-empty point set"));
        }
        let level = self.level_fn(data, prefix)?;
        let k = last_true(data.len(), |k| level(k).is_some_and(|iv| iv.first_grid_point(grid).is_some()));
        let x = level(k)
            .and_then(|iv| iv.first_grid_point(grid))
            .ok_or_else(|| Error::param("empty candidate domain"))?;
        Ok((x, k as f64 / data.len() as f64))
    }
}

/// Settings of [`private_tukey_median`] beyond the accuracy and privacy targets.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TukeyConfig {
    #[serde(default)]
    pub grid: TukeyGridConfig,
    /// Block count; derived from the interior point requirement when absent.
    #[serde(default)]
    pub t: Option<usize>,
    #[serde(default)]
    pub trace_full_values: bool,
}

/// Output of [`private_tukey_median`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TukeyResult {
    pub point: Vec<BoundedRational>,
    /// Depth of `point`, recomputed on the full input.
    pub depth: usize,
    pub n: usize,
    pub t: usize,
    pub per_step: PrivacyParams,
    /// Total budget by advanced composition over the coordinates.
    pub composed: PrivacyParams,
    pub trace: Vec<CoordinateTrace>,
    pub ledger: CompositionLedger,
    /// Whether the grids are the derived (provably proper) ones.
    pub default_grids: bool,
}

/// Per-coordinate budget and composition slack for a `d`-coordinate run.
///
/// One coordinate needs no composition. With `delta = 0` and `d > 1` basic
/// composition `eps / d` is used instead of the advanced bound.
pub fn per_coordinate_privacy(privacy: PrivacyParams, d: usize) -> Result<(PrivacyParams, f64)> {
    if d == 1 {
        return Ok((privacy, 0.0));
    }
    if privacy.delta == 0.0 {
        return Ok((PrivacyParams::pure(privacy.epsilon / d as f64)?, 0.0));
    }
    inverse_composition(privacy.epsilon, privacy.delta, d)
}

/// Block count `t` solving `t = n_ip(|X|, beta/(t+d), eps, delta)`.
pub fn solve_block_count(domain_size: u128, beta: f64, step: PrivacyParams, d: usize) -> usize {
    let mut t = n_ip(domain_size, beta, step.epsilon, step.delta);
    for _ in 0..64 {
        let next = n_ip(domain_size, beta / (t + d) as f64, step.epsilon, step.delta);
        if next == t {
            break;
        }
        t = next;
    }
    t
}

/// Largest candidate domain over the coordinates, taking the largest possible
/// previous denominator for the cascaded ones.
pub fn largest_domain(d: usize, x_bound: u64, grid: &TukeyGridConfig) -> Result<u128> {
    let mut prev = 1;
    let mut best = 0;
    for i in 1..=d {
        let g = tukey_domain(i, d, x_bound, prev, grid)?;
        best = best.max(g.size());
        prev = g.t_max();
    }
    Ok(best)
}

/// Sample requirement of the subsampling reduction, `t * m` with the substituted accuracy, for
/// reporting next to the baseline requirement `t`.
pub fn reduction_sample_requirement(t: usize, d: usize, alpha: f64, beta: f64) -> f64 {
    let a = alpha / (2.0 * d as f64 * (d as f64 + 1.0));
    let b = beta / (t + d) as f64;
    let m = crate::approximation::m_subset_size(&crate::approximation::ApproxSpec::new(a, b, d).expect("valid spec"));
    t as f64 * m as f64
}

/// Private approximate Tukey median for `d <= 2`.
pub fn private_tukey_median(
    s: &PointSet,
    alpha: f64,
    beta: f64,
    privacy: PrivacyParams,
    config: &TukeyConfig,
    rng: &mut RandomSource,
) -> Result<TukeyResult> {
    let d = s.d;
    let target = TukeyTarget::new(d, s.x_bound, config.grid.clone())?;
    let (step, delta_prime) = per_coordinate_privacy(privacy, d)?;
    let t = match config.t {
        Some(t) => t,
        None => solve_block_count(largest_domain(d, s.x_bound, &config.grid)?, beta, step, d),
    };
    if s.len() < t {
        return Err(Error::InsufficientSamples {
            needed: t,
            got: s.len(),
            detail: format!(
                "baseline interior point needs t = {t} blocks; subsampling requirement t*m = {:.0}",
                reduction_sample_requirement(t, d, alpha, beta)
            ),
        });
    }
    let ip_beta = beta / (t + d) as f64;
    let mut opt = OptimizerConfig::new(alpha / (2.0 * d as f64 * (d as f64 + 1.0)), ip_beta, step, t)?;
    opt.trace_full_values = config.trace_full_values;
    let out = ip_concave_high_dim(&s.points, &target, &opt, rng)?;
    let depth = tukey_depth(s, &out.point)?;
    let composed = if d == 1 || privacy.delta == 0.0 {
        PrivacyParams::new(step.epsilon * d as f64, step.delta * d as f64)?
    } else {
        out.composed_privacy(delta_prime)?
    };
    Ok(TukeyResult {
        point: out.point,
        depth,
        n: s.len(),
        t,
        per_step: step,
        composed,
        trace: out.trace,
        ledger: out.ledger,
        default_grids: config.grid.is_default(),
    })
}

/// `n` points in four symmetric clusters around `(+-c, +-c)` with `c = X/2`
/// and uniform jitter of one unit; `d = 1` gives two clusters.
pub fn cluster_points(n: usize, d: usize, x_bound: u64, rng: &mut RandomSource) -> Result<PointSet> {
    let x = x_bound as i64;
    let c = (x / 2).max(1);
    let pts = (0..n)
        .map(|i| {
            (0..d)
                .map(|j| {
                    let sign = if (i >> j) & 1 == 0 { 1 } else { -1 };
                    (sign * c + rng.gen_range(-1..=1)).clamp(-x, x)
                })
                .collect()
        })
        .collect();
    PointSet::new(d, x_bound, pts)
}
