//! Linear feasibility: depth, its convexification cdepth, the private
//! solver and the halfspace learner built on it.
//!
//! A constraint `(a, w)` is satisfied at `x` when `<a, x> >= w`. In the plane
//! `cdepth` is computed from the arrangement of constraint boundaries plus the
//! two coordinate axes (so every face has a vertex): the level set
//! `{z : depth(z) >= y}` is a union of closed faces, and its closed convex hull
//! is `conv(V) + cone(R)` for the vertices `V` and unbounded-edge directions
//! `R` of depth at least `y`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dp_core::RandomSource;
use crate::error::{Error, Result};
use crate::geometry::{convex_hull, cross, Frac, HPoint, Interval, Line};
use crate::optimizer::{ip_concave_high_dim, CoordinateTrace, OptimizerConfig, TargetFunction};
use crate::rationals::{lf_domain, BoundedRational, RationalGrid};
use crate::tukey::{per_coordinate_privacy, solve_block_count};
use crate::{CompositionLedger, PrivacyParams};

/// Largest dimension with exact cdepth.
pub const MAX_CDEPTH_DIM: usize = 2;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Constraint {
    pub a: Vec<i64>,
    pub w: i64,
}

impl Constraint {
    pub fn satisfied(&self, x: &[BoundedRational]) -> bool {
        let mut acc = BigRational::zero();
        for (ai, xi) in self.a.iter().zip(x) {
            acc += xi.inner() * BigRational::from_integer((*ai).into());
        }
        acc >= BigRational::from_integer(self.w.into())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintSet {
    pub d: usize,
    pub x_bound: u64,
    pub constraints: Vec<Constraint>,
}

impl ConstraintSet {
    pub fn new(d: usize, x_bound: u64, constraints: Vec<Constraint>) -> Result<Self> {
        if d == 0 {
            return Err(Error::param("dimension must be positive"));
        }
        for (i, c) in constraints.iter().enumerate() {
            if c.a.len() != d {
                return Err(Error::param(format!("constraint {i} has {} coefficients, expected {d}", c.a.len())));
            }
            if c.a.iter().chain(std::iter::once(&c.w)).any(|v| v.unsigned_abs() > x_bound) {
                return Err(Error::param(format!("constraint {i} has a coefficient above {x_bound}")));
            }
        }
        Ok(Self { d, x_bound, constraints })
    }

    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledExample {
    pub x: Vec<i64>,
    pub y: i8,
}

impl LabeledExample {
    pub fn new(x: Vec<i64>, y: i8) -> Result<Self> {
        if y != 1 && y != -1 {
            return Err(Error::param(format!("label must be -1 or +1, got {y}")));
        }
        Ok(Self { x, y })
    }
}

/// Number of satisfied constraints at `x`.
pub fn depth(s: &ConstraintSet, x: &[BoundedRational]) -> Result<usize> {
    depth_of(&s.constraints, s.d, x)
}

fn depth_of(cs: &[Constraint], d: usize, x: &[BoundedRational]) -> Result<usize> {
    if x.len() != d {
        return Err(Error::param(format!("point has {} coordinates, expected {d}", x.len())));
    }
    Ok(cs.iter().filter(|c| c.satisfied(x)).count())
}

fn weighted(cs: &[Constraint]) -> Vec<(Constraint, usize)> {
    let mut m: BTreeMap<&Constraint, usize> = BTreeMap::new();
    for c in cs {
        *m.entry(c).or_default() += 1;
    }
    m.into_iter().map(|(k, v)| (k.clone(), v)).collect()
}

fn primitive(v: (i128, i128)) -> (i128, i128) {
    let g = v.0.gcd(&v.1).max(1);
    (v.0 / g, v.1 / g)
}

/// Closed convex set `conv(hull) + cone(rays)` in the plane.
#[derive(Debug, Clone, PartialEq)]
pub struct Region {
    pub hull: Vec<HPoint>,
    pub rays: Vec<(i128, i128)>,
}

impl Region {
    fn new(points: Vec<HPoint>, mut rays: Vec<(i128, i128)>) -> Self {
        rays.sort_unstable();
        rays.dedup();
        Self {
            hull: convex_hull(points),
            rays,
        }
    }

    /// Whether `r` lies in the cone spanned by the rays.
    pub fn recession_contains(&self, r: (i128, i128)) -> bool {
        if r == (0, 0) {
            return true;
        }
        let rs = &self.rays;
        for (i, &p) in rs.iter().enumerate() {
            if cross(p, r) == 0 && p.0 * r.0 + p.1 * r.1 > 0 {
                return true;
            }
            for &q in &rs[i + 1..] {
                let c = cross(p, q);
                let inside = match c.cmp(&0) {
                    Ordering::Greater => cross(p, r) >= 0 && cross(r, q) >= 0,
                    Ordering::Less => cross(q, r) >= 0 && cross(r, p) >= 0,
                    // opposite rays span a line
                    Ordering::Equal => p.0 * q.0 + p.1 * q.1 < 0 && cross(p, r) == 0,
                };
                if inside {
                    return true;
                }
            }
        }
        false
    }

    /// Projection on the first axis.
    pub fn x_range(&self) -> Interval {
        let xs = || self.hull.iter().map(|p| Frac::new(p.x, p.w));
        Interval {
            lo: if self.rays.iter().any(|r| r.0 < 0) { None } else { xs().min() },
            hi: if self.rays.iter().any(|r| r.0 > 0) { None } else { xs().max() },
        }
    }

    /// `{y : (x, y) in region}`; `None` when empty.
    pub fn y_interval_at(&self, x: Frac) -> Option<Interval> {
        if !self.x_range().contains(x) {
            return None;
        }
        let mut ys: Vec<Frac> = Vec::new();
        let h = &self.hull;
        let pf = |p: &HPoint| (Frac::new(p.x, p.w), Frac::new(p.y, p.w));
        let mut segs: Vec<(HPoint, HPoint)> = Vec::new();
        match h.len() {
            1 => segs.push((h[0], h[0])),
            2 => segs.push((h[0], h[1])),
            _ => segs.extend((0..h.len()).map(|i| (h[i], h[(i + 1) % h.len()]))),
        }
        for (p, q) in segs {
            let ((px, py), (qx, qy)) = (pf(&p), pf(&q));
            if px == qx {
                if px == x {
                    ys.push(py);
                    ys.push(qy);
                }
            } else if (px <= x && x <= qx) || (qx <= x && x <= px) {
                ys.push(py.add(x.sub(px).mul(qy.sub(py)).div(qx.sub(px))));
            }
        }
        for v in h {
            let (vx, vy) = pf(v);
            for &(rx, ry) in &self.rays {
                if rx == 0 {
                    if vx == x {
                        ys.push(vy);
                    }
                } else {
                    let t = x.sub(vx).div(Frac::int(rx));
                    if t.n >= 0 {
                        ys.push(vy.add(t.mul(Frac::int(ry))));
                    }
                }
            }
        }
        let lo = if self.recession_contains((0, -1)) { None } else { Some(*ys.iter().min()?) };
        let hi = if self.recession_contains((0, 1)) { None } else { Some(*ys.iter().max()?) };
        Some(Interval { lo, hi })
    }

    pub fn contains(&self, p: &HPoint) -> bool {
        self.y_interval_at(Frac::new(p.x, p.w))
            .is_some_and(|iv| iv.contains(Frac::new(p.y, p.w)))
    }

    /// Whether `other` is a subset of `self`.
    pub fn contains_region(&self, other: &Region) -> bool {
        other.hull.iter().all(|p| self.contains(p)) && other.rays.iter().all(|r| self.recession_contains(*r))
    }
}

/// Depth labels of the planar constraint arrangement.
#[derive(Debug, Clone)]
pub struct CdepthLevels {
    n: usize,
    vertices: Vec<(HPoint, usize)>,
    rays: Vec<((i128, i128), usize)>,
    /// Distinct depth values in increasing order, starting at 0.
    levels: Vec<usize>,
}

impl CdepthLevels {
    /// Arrangement of planar constraints; one-dimensional constraints are
    /// embedded as `(a, 0)`.
    pub fn new(cs: &[Constraint], d: usize) -> Result<Self> {
        if d == 0 || d > MAX_CDEPTH_DIM {
            return Err(Error::UnsupportedDimension {
                dim: d,
                max: MAX_CDEPTH_DIM,
            });
        }
        let ws: Vec<((i128, i128), i128, usize)> = weighted(cs)
            .into_iter()
            .map(|(c, k)| {
                let a1 = if d == 2 { c.a[1] as i128 } else { 0 };
                ((c.a[0] as i128, a1), c.w as i128, k)
            })
            .collect();
        let depth_at = |p: &HPoint| -> usize {
            ws.iter()
                .filter(|(a, w, _)| p.side(*a, *w) != Ordering::Less)
                .map(|x| x.2)
                .sum()
        };
        let mut lines: Vec<Line> = ws.iter().filter_map(|(a, w, _)| Line::new(a.0, a.1, *w)).collect();
        lines.push(Line::new(1, 0, 0).expect("axis"));
        lines.push(Line::new(0, 1, 0).expect("axis"));
        lines.sort();
        lines.dedup();
        let mut on_line: Vec<Vec<HPoint>> = vec![Vec::new(); lines.len()];
        for i in 0..lines.len() {
            for j in i + 1..lines.len() {
                if let Some(p) = lines[i].intersect(&lines[j]) {
                    on_line[i].push(p);
                    on_line[j].push(p);
                }
            }
        }
        let mut cache: HashMap<HPoint, usize> = HashMap::new();
        let mut rays = Vec::new();
        for (l, pts) in lines.iter().zip(on_line.iter_mut()) {
            pts.sort_by(|p, q| l.cmp_along(p, q));
            pts.dedup();
            for p in pts.iter() {
                cache.entry(*p).or_insert_with(|| depth_at(p));
            }
            let dir = primitive(l.direction());
            let (first, last) = (pts[0], pts[pts.len() - 1]);
            rays.push((dir, depth_at(&last.offset(dir)?)));
            let back = (-dir.0, -dir.1);
            rays.push((back, depth_at(&first.offset(back)?)));
        }
        let mut vertices: Vec<(HPoint, usize)> = cache.into_iter().collect();
        vertices.sort_by(|a, b| a.0.cmp_lex(&b.0));
        let mut levels: Vec<usize> = vertices.iter().map(|v| v.1).chain(rays.iter().map(|r| r.1)).collect();
        levels.push(0);
        levels.sort_unstable();
        levels.dedup();
        Ok(Self {
            n: cs.len(),
            vertices,
            rays,
            levels,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn levels(&self) -> &[usize] {
        &self.levels
    }

    /// Closed convex hull of `{z : depth(z) >= y}`; `None` when empty.
    pub fn region(&self, y: usize) -> Option<Region> {
        let pts: Vec<HPoint> = self.vertices.iter().filter(|v| v.1 >= y).map(|v| v.0).collect();
        if pts.is_empty() {
            return None;
        }
        let rays = self.rays.iter().filter(|r| r.1 >= y).map(|r| r.0).collect();
        Some(Region::new(pts, rays))
    }

    /// Largest level whose region satisfies `pred` (level 0 always does).
    pub fn last_level(&self, mut pred: impl FnMut(&Region) -> bool) -> usize {
        let (mut lo, mut hi) = (0usize, self.levels.len() - 1);
        while lo < hi {
            let mid = lo + (hi - lo + 1) / 2;
            if self.region(self.levels[mid]).is_some_and(|r| pred(&r)) {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        self.levels[lo]
    }

    pub fn cdepth(&self, p: &HPoint) -> usize {
        self.last_level(|r| r.contains(p))
    }

    pub fn max_cdepth(&self) -> usize {
        *self.levels.last().expect("level 0")
    }
}

fn to_hpoint(d: usize, x: &[BoundedRational]) -> Result<HPoint> {
    match d {
        1 => HPoint::from_rationals(&x[0], &BoundedRational::zero()),
        _ => HPoint::from_rationals(&x[0], &x[1]),
    }
}

/// Convexified depth `max{y : x in ConvexHull({z : depth(z) >= y})}` with the
/// closed hull, for `d <= 2`.
pub fn cdepth(s: &ConstraintSet, x: &[BoundedRational]) -> Result<usize> {
    if x.len() != s.d {
        return Err(Error::param(format!("point has {} coordinates, expected {}", x.len(), s.d)));
    }
    let lv = CdepthLevels::new(&s.constraints, s.d)?;
    Ok(lv.cdepth(&to_hpoint(s.d, x)?))
}

/// `cdepth / |S|`.
pub fn q_lf(s: &ConstraintSet, x: &[BoundedRational]) -> Result<f64> {
    if s.is_empty() {
        return Err(Error::param("Q_LF needs a non-empty constraint set"));
    }
    Ok(cdepth(s, x)? as f64 / s.len() as f64)
}

/// Exact `sup_x |cdepth_a(x)/|a| - cdepth_b(x)/|b||` from level-set
/// containment.
pub fn cdepth_sup_gap(a: &CdepthLevels, b: &CdepthLevels) -> f64 {
    fn one_way(a: &CdepthLevels, b: &CdepthLevels) -> f64 {
        let mut best: f64 = 0.0;
        for &l in a.levels.iter().filter(|&&l| l > 0) {
            let ra = a.region(l).expect("level is attained");
            let z = b.last_level(|rb| rb.contains_region(&ra));
            best = best.max(l as f64 / a.n as f64 - z as f64 / b.n as f64);
        }
        best
    }
    one_way(a, b).max(one_way(b, a))
}

/// `Q_LF` as an optimizer target for `d <= 2`.
#[derive(Debug, Clone)]
pub struct LfTarget {
    pub d: usize,
    pub x_bound: u64,
}

impl LfTarget {
    pub fn new(d: usize, x_bound: u64) -> Result<Self> {
        if d == 0 || d > MAX_CDEPTH_DIM {
            return Err(Error::UnsupportedDimension {
                dim: d,
                max: MAX_CDEPTH_DIM,
            });
        }
        Ok(Self { d, x_bound })
    }

    /// Slice interval of a level region for the coordinate after `prefix`.
    fn slice_interval(&self, r: &Region, prefix: &[BoundedRational]) -> Result<Option<Interval>> {
        match (self.d, prefix) {
            (1, []) | (2, []) => Ok(Some(r.x_range())),
            (2, [x1]) => Ok(r.y_interval_at(Frac::from_rational(x1)?)),
            _ => Err(Error::param("prefix longer than the dimension")),
        }
    }
}

impl TargetFunction for LfTarget {
    type Item = Constraint;

    fn dim(&self) -> usize {
        self.d
    }

    fn eval(&self, data: &[Constraint], point: &[BoundedRational]) -> Result<f64> {
        if data.is_empty() {
            return Err(Error::param("Q_LF needs a non-empty constraint set"));
        }
        let lv = CdepthLevels::new(data, self.d)?;
        Ok(lv.cdepth(&to_hpoint(self.d, point)?) as f64 / data.len() as f64)
    }

    fn slice_eval(&self, data: &[Constraint], prefix: &[BoundedRational], x: &BoundedRational) -> Result<f64> {
        if data.is_empty() {
            return Err(Error::param("Q_LF needs a non-empty constraint set"));
        }
        let lv = CdepthLevels::new(data, self.d)?;
        let xf = Frac::from_rational(x)?;
        let mut err = None;
        let l = lv.last_level(|r| match self.slice_interval(r, prefix) {
            Ok(iv) => iv.is_some_and(|iv| iv.contains(xf)),
            Err(e) => {
                err = Some(e);
                false
            }
        });
        match err {
            Some(e) => Err(e),
            None => Ok(l as f64 / data.len() as f64),
        }
    }

    fn domain(&self, prefix: &[BoundedRational]) -> Result<RationalGrid> {
        let prev = match prefix.last() {
            Some(v) => u64::try_from(v.denom()).map_err(|_| Error::Overflow("prefix denominator".into()))?,
            None => 1,
        };
        lf_domain(prefix.len() + 1, self.d, self.x_bound, prev)
    }

    fn slice_argmax(&self, data: &[Constraint], prefix: &[BoundedRational], grid: &RationalGrid) -> Result<(BoundedRational, f64)> {
        if data.is_empty() {
            return Err(Error::param("Q_LF needs a non-empty constraint set"));
        }
        if prefix.len() >= self.d {
            return Err(Error::param("prefix longer than the dimension"));
        }
        let lv = CdepthLevels::new(data, self.d)?;
        let first = |r: &Region| -> Option<BoundedRational> {
            self.slice_interval(r, prefix).ok().flatten().and_then(|iv| iv.first_grid_point(grid))
        };
        let l = lv.last_level(|r| first(r).is_some());
        let x = if l == 0 {
            grid.min()
        } else {
            lv.region(l).and_then(|r| first(&r)).expect("level satisfies the predicate")
        };
        Ok((x, l as f64 / data.len() as f64))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct LfConfig {
    #[serde(default)]
    pub t: Option<usize>,
    #[serde(default)]
    pub trace_full_values: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LfResult {
    pub point: Vec<BoundedRational>,
    /// Satisfied constraints at `point`, recomputed on the full input.
    pub depth: usize,
    pub n: usize,
    pub t: usize,
    pub per_step: PrivacyParams,
    pub composed: PrivacyParams,
    pub trace: Vec<CoordinateTrace>,
    pub ledger: CompositionLedger,
}

/// Largest cascaded linear feasibility domain.
pub fn largest_lf_domain(d: usize, x_bound: u64) -> Result<u128> {
    let mut prev = 1;
    let mut best = 0;
    for i in 1..=d {
        let g = lf_domain(i, d, x_bound, prev)?;
        best = best.max(g.size());
        prev = g.t_max();
    }
    Ok(best)
}

/// Private point satisfying most constraints, for `d <= 2`.
pub fn private_linear_feasibility(
    s: &ConstraintSet,
    alpha: f64,
    beta: f64,
    privacy: PrivacyParams,
    config: &LfConfig,
    rng: &mut RandomSource,
) -> Result<LfResult> {
    let d = s.d;
    let target = LfTarget::new(d, s.x_bound)?;
    let (step, delta_prime) = per_coordinate_privacy(privacy, d)?;
    let t = match config.t {
        Some(t) => t,
        None => solve_block_count(largest_lf_domain(d, s.x_bound)?, beta, step, d),
    };
    if s.len() < t {
        return Err(Error::InsufficientSamples {
            needed: t,
            got: s.len(),
            detail: format!("baseline interior point needs t = {t} blocks"),
        });
    }
    let mut opt = OptimizerConfig::new(alpha / (4.0 * (d * d) as f64), beta / (t + d) as f64, step, t)?;
    opt.trace_full_values = config.trace_full_values;
    let out = ip_concave_high_dim(&s.constraints, &target, &opt, rng)?;
    let dep = depth(s, &out.point)?;
    let composed = if d == 1 || privacy.delta == 0.0 {
        PrivacyParams::new(step.epsilon * d as f64, step.delta * d as f64)?
    } else {
        out.composed_privacy(delta_prime)?
    };
    Ok(LfResult {
        point: out.point,
        depth: dep,
        n: s.len(),
        t,
        per_step: step,
        composed,
        trace: out.trace,
        ledger: out.ledger,
    })
}

/// `((x), y) -> (a = y (x, -1), w = 0)` in dimension `d + 1`.
pub fn reduce_examples_to_constraints(examples: &[LabeledExample], x_bound: u64) -> Result<ConstraintSet> {
    reduce_with_offset(examples, x_bound, 0)
}

/// Margin form `(a = y (x, -1), w = 1)` used by the learner: the zero vector
/// satisfies every constraint of the plain reduction.
pub fn reduce_examples_with_margin(examples: &[LabeledExample], x_bound: u64) -> Result<ConstraintSet> {
    reduce_with_offset(examples, x_bound, 1)
}

fn reduce_with_offset(examples: &[LabeledExample], x_bound: u64, w: i64) -> Result<ConstraintSet> {
    let d = examples.first().map_or(1, |e| e.x.len());
    let cs = examples
        .iter()
        .map(|e| {
            if e.x.len() != d {
                return Err(Error::param("examples have mixed dimensions"));
            }
            let y = e.y as i64;
            let mut a: Vec<i64> = e.x.iter().map(|v| y * v).collect();
            a.push(-y);
            Ok(Constraint { a, w })
        })
        .collect::<Result<Vec<_>>>()?;
    ConstraintSet::new(d + 1, x_bound.max(1), cs)
}

/// Halfspace hypothesis `h(x) = 1` iff `<weights, x> >= threshold`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hypothesis {
    pub weights: Vec<BoundedRational>,
    pub threshold: BoundedRational,
}

impl Hypothesis {
    pub fn predict(&self, x: &[i64]) -> i8 {
        let mut acc = BigRational::zero();
        for (w, xi) in self.weights.iter().zip(x) {
            acc += w.inner() * BigRational::from_integer((*xi).into());
        }
        if acc >= *self.threshold.inner() {
            1
        } else {
            -1
        }
    }

    pub fn error(&self, examples: &[LabeledExample]) -> f64 {
        if examples.is_empty() {
            return 0.0;
        }
        examples.iter().filter(|e| self.predict(&e.x) != e.y).count() as f64 / examples.len() as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LearnResult {
    pub hypothesis: Hypothesis,
    pub training_error: f64,
    pub solver: LfResult,
    /// Sample size from the PAC bound with VC dimension `d + 1`.
    pub pac_bound: usize,
}

/// Private halfspace learner for `d = 1` examples (two-variable feasibility).
pub fn learn_halfspace(
    examples: &[LabeledExample],
    x_bound: u64,
    alpha: f64,
    beta: f64,
    privacy: PrivacyParams,
    config: &LfConfig,
    rng: &mut RandomSource,
) -> Result<LearnResult> {
    let d = examples.first().map_or(1, |e| e.x.len());
    let pac_bound = crate::approximation::pac_sample_size(alpha, beta, d + 1)?;
    if examples.len() < pac_bound {
        return Err(Error::InsufficientSamples {
            needed: pac_bound,
            got: examples.len(),
            detail: "PAC sample bound with VC dimension d + 1".into(),
        });
    }
    let cs = reduce_examples_with_margin(examples, x_bound)?;
    let solver = private_linear_feasibility(&cs, alpha / 10.0, beta, privacy, config, rng)?;
    let hypothesis = Hypothesis {
        weights: solver.point[..d].to_vec(),
        threshold: solver.point[d].clone(),
    };
    Ok(LearnResult {
        training_error: hypothesis.error(examples),
        hypothesis,
        solver,
        pac_bound,
    })
}

/// `n` constraints with coefficients in `[-X, X]` all satisfied by `planted`.
pub fn planted_feasible(n: usize, d: usize, x_bound: u64, planted: &[i64], rng: &mut RandomSource) -> Result<ConstraintSet> {
    if planted.len() != d {
        return Err(Error::param("planted point has the wrong dimension"));
    }
    let x = x_bound as i64;
    let mut cs = Vec::with_capacity(n);
    while cs.len() < n {
        let a: Vec<i64> = (0..d).map(|_| rng.gen_range(-x..=x)).collect();
        let ap: i64 = a.iter().zip(planted).map(|(u, v)| u * v).sum();
        let hi = ap.min(x);
        if hi < -x {
            continue;
        }
        cs.push(Constraint {
            a,
            w: rng.gen_range(-x..=hi),
        });
    }
    ConstraintSet::new(d, x_bound, cs)
}

/// `m` one-dimensional examples uniform on `[-X, X]`, labelled `+1` iff
/// `x >= threshold`.
pub fn threshold_examples(m: usize, x_bound: u64, threshold: i64, rng: &mut RandomSource) -> Vec<LabeledExample> {
    let x = x_bound as i64;
    (0..m)
        .map(|_| {
            let v = rng.gen_range(-x..=x);
            LabeledExample {
                x: vec![v],
                y: if v >= threshold { 1 } else { -1 },
            }
        })
        .collect()
}

/// Exact sign of `<a, x> - w` for a rational point.
pub fn slack_sign(c: &Constraint, x: &[BoundedRational]) -> Ordering {
    let mut acc = BigRational::zero();
    for (ai, xi) in c.a.iter().zip(x) {
        acc += xi.inner() * BigRational::from_integer((*ai).into());
    }
    acc -= BigRational::from_integer(c.w.into());
    if acc.is_positive() {
        Ordering::Greater
    } else if acc.is_negative() {
        Ordering::Less
    } else {
        Ordering::Equal
    }
}
