//! Exact planar primitives on small integers: homogeneous rational points,
//! integer lines, orientation tests and convex hulls.

use std::cmp::Ordering;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::rationals::BoundedRational;

/// Largest magnitude accepted for a homogeneous component. Keeps every 3x3
/// determinant below `2^127`.
pub const MAX_COMPONENT: i128 = 1 << 40;

/// Rational point `(x/w, y/w)` with `w > 0` and `gcd(x, y, w) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HPoint {
    pub x: i128,
    pub y: i128,
    pub w: i128,
}

impl HPoint {
    pub fn new(x: i128, y: i128, w: i128) -> Result<Self> {
        if w == 0 {
            return Err(Error::Degenerate("point at infinity".into()));
        }
        let (mut x, mut y, mut w) = if w < 0 { (-x, -y, -w) } else { (x, y, w) };
        let g = x.gcd(&y).gcd(&w);
        if g > 1 {
            x /= g;
            y /= g;
            w /= g;
        }
        if x.abs() > MAX_COMPONENT || y.abs() > MAX_COMPONENT || w > MAX_COMPONENT {
            return Err(Error::Overflow(format!("point ({x}, {y}) / {w} exceeds exact range")));
        }
        Ok(Self { x, y, w })
    }

    pub fn int(x: i64, y: i64) -> Self {
        Self {
            x: x as i128,
            y: y as i128,
            w: 1,
        }
    }

    pub fn from_rationals(x: &BoundedRational, y: &BoundedRational) -> Result<Self> {
        let overflow = || Error::Overflow(format!("point ({x}, {y}) exceeds exact range"));
        let (xn, xd) = x.to_i128_pair().ok_or_else(overflow)?;
        let (yn, yd) = y.to_i128_pair().ok_or_else(overflow)?;
        if xd > MAX_COMPONENT || yd > MAX_COMPONENT {
            return Err(overflow());
        }
        let w = xd.lcm(&yd);
        let xs = xn.checked_mul(w / xd).ok_or_else(overflow)?;
        let ys = yn.checked_mul(w / yd).ok_or_else(overflow)?;
        Self::new(xs, ys, w)
    }

    pub fn x_rational(&self) -> BoundedRational {
        BoundedRational::new(self.x, self.w)
    }

    pub fn y_rational(&self) -> BoundedRational {
        BoundedRational::new(self.y, self.w)
    }

    pub fn to_rationals(&self) -> [BoundedRational; 2] {
        [self.x_rational(), self.y_rational()]
    }

    pub fn cmp_x(&self, o: &Self) -> Ordering {
        (self.x * o.w).cmp(&(o.x * self.w))
    }

    pub fn cmp_y(&self, o: &Self) -> Ordering {
        (self.y * o.w).cmp(&(o.y * self.w))
    }

    /// Lexicographic order on `(x, y)`.
    pub fn cmp_lex(&self, o: &Self) -> Ordering {
        self.cmp_x(o).then_with(|| self.cmp_y(o))
    }

    /// `self + dir` for an integer direction.
    pub fn offset(&self, dir: (i128, i128)) -> Result<Self> {
        Self::new(self.x + dir.0 * self.w, self.y + dir.1 * self.w, self.w)
    }

    /// Sign of `<n, self> - c` for an integer normal `n`.
    pub fn side(&self, n: (i128, i128), c: i128) -> Ordering {
        (n.0 * self.x + n.1 * self.y).cmp(&(c * self.w))
    }
}

/// Orientation of the triangle `(p, q, r)`: `Greater` for counter-clockwise.
pub fn orient(p: &HPoint, q: &HPoint, r: &HPoint) -> Ordering {
    let det = p.x * (q.y * r.w - r.y * q.w) - q.x * (p.y * r.w - r.y * p.w) + r.x * (p.y * q.w - q.y * p.w);
    det.cmp(&0)
}

/// Integer line `a x + b y = c` with `gcd(a, b, c) = 1` and `(a, b)`
/// lexicographically positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Line {
    pub a: i128,
    pub b: i128,
    pub c: i128,
}

impl Line {
    pub fn new(a: i128, b: i128, c: i128) -> Option<Self> {
        if a == 0 && b == 0 {
            return None;
        }
        let g = a.gcd(&b).gcd(&c);
        let (mut a, mut b, mut c) = (a / g, b / g, c / g);
        if a < 0 || (a == 0 && b < 0) {
            a = -a;
            b = -b;
            c = -c;
        }
        Some(Self { a, b, c })
    }

    /// Line through two distinct integer points.
    pub fn through(p: (i128, i128), q: (i128, i128)) -> Option<Self> {
        let a = q.1 - p.1;
        let b = p.0 - q.0;
        Self::new(a, b, a * p.0 + b * p.1)
    }

    pub fn is_parallel(&self, o: &Self) -> bool {
        self.a * o.b == self.b * o.a
    }

    pub fn intersect(&self, o: &Self) -> Option<HPoint> {
        let det = self.a * o.b - self.b * o.a;
        if det == 0 {
            return None;
        }
        HPoint::new(self.c * o.b - self.b * o.c, self.a * o.c - self.c * o.a, det).ok()
    }

    /// Direction vector along the line.
    pub fn direction(&self) -> (i128, i128) {
        (-self.b, self.a)
    }

    pub fn contains(&self, p: &HPoint) -> bool {
        p.side((self.a, self.b), self.c) == Ordering::Equal
    }

    /// Order of two points on this line by their position along `direction()`.
    pub fn cmp_along(&self, p: &HPoint, q: &HPoint) -> Ordering {
        let (dx, dy) = self.direction();
        ((dx * p.x + dy * p.y) * q.w).cmp(&((dx * q.x + dy * q.y) * p.w))
    }
}

/// Total order of nonzero integer vectors by angle in `[0, 2pi)`.
pub fn angle_cmp(u: (i128, i128), v: (i128, i128)) -> Ordering {
    let half = |p: (i128, i128)| u8::from(p.1 < 0 || (p.1 == 0 && p.0 < 0));
    half(u).cmp(&half(v)).then_with(|| (u.1 * v.0).cmp(&(u.0 * v.1)))
}

/// 2D cross product.
pub fn cross(u: (i128, i128), v: (i128, i128)) -> i128 {
    u.0 * v.1 - u.1 * v.0
}

/// Convex hull in counter-clockwise order without collinear points.
/// Degenerate inputs give one or two points.
pub fn convex_hull(mut pts: Vec<HPoint>) -> Vec<HPoint> {
    pts.sort_by(HPoint::cmp_lex);
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let mut hull: Vec<HPoint> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &HPoint>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for p in iter {
            while hull.len() >= start + 2 && orient(&hull[hull.len() - 2], &hull[hull.len() - 1], p) != Ordering::Greater {
                hull.pop();
            }
            hull.push(*p);
        }
        hull.pop();
    }
    if hull.len() == 2 && hull[0] == hull[1] {
        hull.truncate(1);
    }
    hull
}

/// Exact fraction `n / d` with `d > 0` compared without division.
#[derive(Debug, Clone, Copy)]
pub struct Frac {
    pub n: i128,
    pub d: i128,
}

impl Frac {
    pub fn new(n: i128, d: i128) -> Self {
        assert!(d != 0, "zero denominator");
        let g = n.gcd(&d).max(1) * d.signum();
        Self { n: n / g, d: d / g }
    }

    pub fn from_rational(v: &BoundedRational) -> Result<Self> {
        let (n, d) = v
            .to_i128_pair()
            .filter(|(n, d)| n.abs() <= MAX_COMPONENT && *d <= MAX_COMPONENT)
            .ok_or_else(|| Error::Overflow(format!("{v} exceeds exact range")))?;
        Ok(Self { n, d })
    }

    pub fn to_rational(self) -> BoundedRational {
        BoundedRational::new(self.n, self.d)
    }

    pub fn int(v: i128) -> Self {
        Self { n: v, d: 1 }
    }

    pub fn add(self, o: Self) -> Self {
        Self::new(self.n * o.d + o.n * self.d, self.d * o.d)
    }

    pub fn sub(self, o: Self) -> Self {
        Self::new(self.n * o.d - o.n * self.d, self.d * o.d)
    }

    pub fn mul(self, o: Self) -> Self {
        Self::new(self.n * o.n, self.d * o.d)
    }

    pub fn div(self, o: Self) -> Self {
        Self::new(self.n * o.d, self.d * o.n)
    }
}

impl PartialEq for Frac {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}

impl Eq for Frac {}

impl PartialOrd for Frac {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Frac {
    fn cmp(&self, o: &Self) -> Ordering {
        (self.n * o.d).cmp(&(o.n * self.d))
    }
}

/// Closed interval with optional infinite ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Interval {
    pub lo: Option<Frac>,
    pub hi: Option<Frac>,
}

impl Interval {
    pub const ALL: Interval = Interval { lo: None, hi: None };

    pub fn contains(&self, v: Frac) -> bool {
        self.lo.map_or(true, |l| l <= v) && self.hi.map_or(true, |h| v <= h)
    }

    /// Smallest grid element inside the interval.
    pub fn first_grid_point(&self, grid: &crate::RationalGrid) -> Option<BoundedRational> {
        let cand = match self.lo {
            None => grid.min(),
            Some(l) => grid.ceil(&l.to_rational(), false)?,
        };
        match self.hi {
            Some(h) if h.to_rational() < cand => None,
            _ => Some(cand),
        }
    }
}

/// One point in every face, edge and vertex of the arrangement of `lines`.
pub fn arrangement_probes(lines: &[Line]) -> Result<Vec<HPoint>> {
    let mut lines = lines.to_vec();
    lines.sort();
    lines.dedup();
    let mut out: Vec<HPoint> = Vec::new();
    let mut on_line: Vec<Vec<HPoint>> = vec![Vec::new(); lines.len()];
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            if let Some(p) = lines[i].intersect(&lines[j]) {
                on_line[i].push(p);
                on_line[j].push(p);
            }
        }
    }
    let mut xs: Vec<Frac> = Vec::new();
    for (l, pts) in lines.iter().zip(on_line.iter_mut()) {
        pts.sort_by(|p, q| l.cmp_along(p, q));
        pts.dedup();
        out.extend(pts.iter().copied());
        xs.extend(pts.iter().map(|p| Frac::new(p.x, p.w)));
        let dir = l.direction();
        match (pts.first(), pts.last()) {
            (Some(first), Some(last)) => {
                out.push(first.offset((-dir.0, -dir.1))?);
                out.push(last.offset(dir)?);
                for w in pts.windows(2) {
                    out.push(HPoint::new(w[0].x * w[1].w + w[1].x * w[0].w, w[0].y * w[1].w + w[1].y * w[0].w, 2 * w[0].w * w[1].w)?);
                }
            }
            _ => out.push(if l.b != 0 { HPoint::new(0, l.c, l.b)? } else { HPoint::new(l.c, 0, l.a)? }),
        }
        if l.b == 0 {
            xs.push(Frac::new(l.c, l.a));
        }
    }
    xs.sort();
    xs.dedup();
    let mut slabs: Vec<Frac> = Vec::new();
    match (xs.first(), xs.last()) {
        (Some(f), Some(l)) => {
            slabs.push(Frac::new(f.n - f.d, f.d));
            slabs.push(Frac::new(l.n + l.d, l.d));
            for w in xs.windows(2) {
                slabs.push(Frac::new(w[0].n * w[1].d + w[1].n * w[0].d, 2 * w[0].d * w[1].d));
            }
        }
        _ => slabs.push(Frac::new(0, 1)),
    }
    for x in slabs {
        let mut ys: Vec<Frac> = lines
            .iter()
            .filter(|l| l.b != 0)
            .map(|l| Frac::new(l.c * x.d - l.a * x.n, l.b * x.d))
            .collect();
        ys.sort();
        ys.dedup();
        let mut reps: Vec<Frac> = Vec::new();
        match (ys.first(), ys.last()) {
            (Some(f), Some(l)) => {
                reps.push(Frac::new(f.n - f.d, f.d));
                reps.push(Frac::new(l.n + l.d, l.d));
                for w in ys.windows(2) {
                    reps.push(Frac::new(w[0].n * w[1].d + w[1].n * w[0].d, 2 * w[0].d * w[1].d));
                }
            }
            _ => reps.push(Frac::new(0, 1)),
        }
        for y in reps {
            out.push(HPoint::new(x.n * y.d, y.n * x.d, x.d * y.d)?);
        }
    }
    out.sort_by(HPoint::cmp_lex);
    out.dedup();
    Ok(out)
}
