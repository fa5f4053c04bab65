//! Independent brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use qcdp::BoundedRational;

pub fn br(n: i64, d: i64) -> BoundedRational {
    BoundedRational::new(n, d)
}

fn q(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Tukey depth by trying one normal inside every arc between the critical
/// normals `+-perp(s - p)`, plus the critical normals themselves.
pub fn tukey_depth_directions(points: &[Vec<i64>], p: &[BoundedRational]) -> usize {
    let (px, py) = (p[0].inner().clone(), p[1].inner().clone());
    let vecs: Vec<(BigRational, BigRational)> = points.iter().map(|s| (q(s[0]) - &px, q(s[1]) - &py)).collect();
    let count = |n: &(BigRational, BigRational)| {
        vecs.iter().filter(|v| !(&n.0 * &v.0 + &n.1 * &v.1).is_negative()).count()
    };
    let mut crit: Vec<(BigRational, BigRational)> = Vec::new();
    for v in &vecs {
        if v.0.is_zero() && v.1.is_zero() {
            continue;
        }
        crit.push((-v.1.clone(), v.0.clone()));
        crit.push((v.1.clone(), -v.0.clone()));
    }
    if crit.is_empty() {
        return points.len();
    }
    // float angles only order the arcs; every count below is exact
    crit.sort_by(|a, b| f64_atan2(a).partial_cmp(&f64_atan2(b)).unwrap());
    let mut best = usize::MAX;
    for i in 0..crit.len() {
        let a = &crit[i];
        let b = &crit[(i + 1) % crit.len()];
        best = best.min(count(a));
        let cr = &a.0 * &b.1 - &a.1 * &b.0;
        let dot = &a.0 * &b.0 + &a.1 * &b.1;
        if cr.is_zero() && dot.is_positive() {
            continue;
        }
        let mid = if cr.is_positive() {
            (&a.0 + &b.0, &a.1 + &b.1)
        } else {
            // arc of at least half a turn: rotate `a` a quarter turn forward
            (-a.1.clone(), a.0.clone())
        };
        if !(mid.0.is_zero() && mid.1.is_zero()) {
            best = best.min(count(&mid));
        }
    }
    best
}

fn f64_atan2(n: &(BigRational, BigRational)) -> f64 {
    let f = |r: &BigRational| {
        let num: f64 = r.numer().to_string().parse().unwrap();
        let den: f64 = r.denom().to_string().parse().unwrap();
        num / den
    };
    f(&n.1).atan2(f(&n.0))
}

/// Data points and all intersections of lines through pairs of data points.
pub fn tukey_candidates(points: &[Vec<i64>]) -> Vec<[BoundedRational; 2]> {
    let mut pts: Vec<(i64, i64)> = points.iter().map(|p| (p[0], p[1])).collect();
    pts.sort_unstable();
    pts.dedup();
    let mut lines: Vec<(i64, i64, i64)> = Vec::new();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let (a, b) = (pts[j].1 - pts[i].1, pts[i].0 - pts[j].0);
            lines.push((a, b, a * pts[i].0 + b * pts[i].1));
        }
    }
    let mut out: Vec<[BoundedRational; 2]> = pts.iter().map(|&(x, y)| [br(x, 1), br(y, 1)]).collect();
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            let (a1, b1, c1) = lines[i];
            let (a2, b2, c2) = lines[j];
            let det = a1 * b2 - a2 * b1;
            if det != 0 {
                out.push([br(c1 * b2 - b1 * c2, det), br(a1 * c2 - c1 * a2, det)]);
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// `max_y TD(x, y)` by testing every breakpoint of the vertical slice and
/// one point between consecutive breakpoints.
pub fn tukey_slice_brute(points: &[Vec<i64>], x: &BoundedRational) -> usize {
    let mut pts: Vec<(i64, i64)> = points.iter().map(|p| (p[0], p[1])).collect();
    pts.sort_unstable();
    pts.dedup();
    let mut ys: Vec<BoundedRational> = pts.iter().map(|p| br(p.1, 1)).collect();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let (x1, y1) = pts[i];
            let (x2, y2) = pts[j];
            if x1 != x2 {
                // y = y1 + (x - x1) (y2 - y1) / (x2 - x1)
                let t = &(x - &br(x1, 1)) / &br(x2 - x1, 1);
                ys.push(&br(y1, 1) + &(&t * &br(y2 - y1, 1)));
            }
        }
    }
    ys.sort();
    ys.dedup();
    let mut probes = ys.clone();
    for w in ys.windows(2) {
        probes.push(BoundedRational::midpoint(&w[0], &w[1]));
    }
    probes
        .iter()
        .map(|y| tukey_depth_directions(points, &[x.clone(), y.clone()]))
        .max()
        .unwrap_or(0)
}

/// Small random planar multiset with coordinates in `[-x, x]`.
pub fn random_points(rng: &mut impl rand::Rng, n: usize, x: i64) -> Vec<Vec<i64>> {
    (0..n).map(|_| vec![rng.gen_range(-x..=x), rng.gen_range(-x..=x)]).collect()
}

fn sat(a: &[i64], w: i64, z: &[BigRational]) -> bool {
    let s: BigRational = a.iter().zip(z).map(|(ai, zi)| q(*ai) * zi).sum();
    s >= q(w)
}

fn depth_at(cs: &[qcdp::linfeas::Constraint], z: &[BigRational]) -> usize {
    cs.iter().filter(|c| sat(&c.a, c.w, z)).count()
}

type P2 = (BigRational, BigRational);

fn orient(a: &P2, b: &P2, c: &P2) -> BigRational {
    (&b.0 - &a.0) * (&c.1 - &a.1) - (&b.1 - &a.1) * (&c.0 - &a.0)
}

fn dist2_to_segment(p: &P2, a: &P2, b: &P2) -> BigRational {
    let (dx, dy) = (&b.0 - &a.0, &b.1 - &a.1);
    let (ex, ey) = (&p.0 - &a.0, &p.1 - &a.1);
    let len = &dx * &dx + &dy * &dy;
    let mut t = if len.is_zero() { BigRational::zero() } else { (&ex * &dx + &ey * &dy) / &len };
    if t.is_negative() {
        t = BigRational::zero();
    }
    if t > q(1) {
        t = q(1);
    }
    let (fx, fy) = (&ex - &t * &dx, &ey - &t * &dy);
    &fx * &fx + &fy * &fy
}

/// Squared distance from `p` to the convex hull of `pts` (zero inside).
fn dist2_to_hull(p: &P2, pts: &[P2]) -> BigRational {
    let mut best: Option<BigRational> = None;
    let mut upd = |v: BigRational| {
        if best.as_ref().map_or(true, |b| v < *b) {
            best = Some(v);
        }
    };
    for i in 0..pts.len() {
        upd(dist2_to_segment(p, &pts[i], &pts[i]));
        for j in i + 1..pts.len() {
            upd(dist2_to_segment(p, &pts[i], &pts[j]));
            for k in j + 1..pts.len() {
                let (o1, o2, o3) = (orient(&pts[i], &pts[j], p), orient(&pts[j], &pts[k], p), orient(&pts[k], &pts[i], p));
                let neg = o1.is_negative() || o2.is_negative() || o3.is_negative();
                let pos = o1.is_positive() || o2.is_positive() || o3.is_positive();
                if !(neg && pos) {
                    return BigRational::zero();
                }
            }
        }
    }
    best.unwrap_or_else(|| q(1))
}

fn hull_points(mut pts: Vec<P2>) -> Vec<P2> {
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut h: Vec<P2> = Vec::new();
    for pass in 0..2 {
        let start = h.len();
        let it: Vec<&P2> = if pass == 0 { pts.iter().collect() } else { pts.iter().rev().collect() };
        for p in it {
            while h.len() >= start + 2 && !orient(&h[h.len() - 2], &h[h.len() - 1], p).is_positive() {
                h.pop();
            }
            h.push(p.clone());
        }
        h.pop();
    }
    h
}

/// Convexified depth by brute force. One dimension: `p` is in the hull of a
/// level set iff the level is reached at some breakpoint (or beyond all
/// breakpoints) on each side of `p`. Two dimensions: the level set is cut by
/// the box `[-B, B]^2` with huge `B`, and `p` counts as inside the closed
/// hull when it is within a vanishing distance of the truncated hull.
pub fn cdepth_oracle(cs: &[qcdp::linfeas::Constraint], d: usize, p: &[BoundedRational]) -> usize {
    let n = cs.len();
    if d == 1 {
        let px = p[0].inner().clone();
        let mut bps: Vec<BigRational> = cs.iter().filter(|c| c.a[0] != 0).map(|c| q(c.w) / q(c.a[0])).collect();
        bps.push(px.clone());
        let lo = bps.iter().min().unwrap() - q(1);
        let hi = bps.iter().max().unwrap() + q(1);
        let left: Vec<usize> = bps.iter().chain([&lo]).filter(|b| **b <= px).map(|b| depth_at(cs, &[b.clone()])).collect();
        let right: Vec<usize> = bps.iter().chain([&hi]).filter(|b| **b >= px).map(|b| depth_at(cs, &[b.clone()])).collect();
        return (0..=n)
            .rev()
            .find(|&y| left.iter().any(|&v| v >= y) && right.iter().any(|&v| v >= y))
            .unwrap_or(0);
    }
    let big = q(1_000_000_000_000);
    let mut lines: Vec<(BigRational, BigRational, BigRational)> = cs
        .iter()
        .filter(|c| c.a[0] != 0 || c.a[1] != 0)
        .map(|c| (q(c.a[0]), q(c.a[1]), q(c.w)))
        .collect();
    lines.push((q(1), q(0), big.clone()));
    lines.push((q(1), q(0), -big.clone()));
    lines.push((q(0), q(1), big.clone()));
    lines.push((q(0), q(1), -big.clone()));
    let mut verts: Vec<(P2, usize)> = Vec::new();
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            let (a1, b1, c1) = &lines[i];
            let (a2, b2, c2) = &lines[j];
            let det = a1 * b2 - a2 * b1;
            if det.is_zero() {
                continue;
            }
            let x = (c1 * b2 - b1 * c2) / &det;
            let y = (a1 * c2 - c1 * a2) / &det;
            if x.abs() <= big && y.abs() <= big {
                let dep = depth_at(cs, &[x.clone(), y.clone()]);
                verts.push(((x, y), dep));
            }
        }
    }
    let pp = (p[0].inner().clone(), p[1].inner().clone());
    let tol = BigRational::new(BigInt::from(1), BigInt::from(100_000_000));
    for y in (1..=n).rev() {
        let pts: Vec<P2> = verts.iter().filter(|v| v.1 >= y).map(|v| v.0.clone()).collect();
        if pts.is_empty() {
            continue;
        }
        if dist2_to_hull(&pp, &hull_points(pts)) <= tol {
            return y;
        }
    }
    0
}
