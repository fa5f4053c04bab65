//! Empirical privacy auditing, and a reproduction of the `A_SimpleH`
//! halfspace learner together with the neighbouring datasets that break it.
//!
//! Angles live on a uniform grid and are handled by index. The halfspace of
//! angle `phi` is `h_phi(x) = 1` iff `<(-sin phi, cos phi), x> >= 0`: with this
//! normal the counterexample scores are `n/2 + 1` exactly on `(0, pi)`.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{Beta, ContinuousCDF};

use crate::dp_core::{laplace_sample, RandomSource};
use crate::error::{Error, Result};
use crate::interior_point::{n_ip, private_interior_point, IntegerRange, IpSolverSpec};
use crate::PrivacyParams;

const SIGN_TOL: f64 = 1e-12;

/// Uniform grid `{k gamma : 0 <= k < ceil(2 pi / gamma)}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngleGrid {
    pub gamma: f64,
    pub size: usize,
}

impl AngleGrid {
    pub fn new(gamma: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma <= TAU) {
            return Err(Error::param(format!("gamma must lie in (0, 2pi], got {gamma}")));
        }
        let size = (TAU / gamma - 1e-9).ceil().max(1.0) as usize;
        Ok(Self { gamma, size })
    }

    /// Grid with `size` equally spaced angles.
    pub fn with_size(size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::param("angle grid must be non-empty"));
        }
        Ok(Self {
            gamma: TAU / size as f64,
            size,
        })
    }

    pub fn angle(&self, k: usize) -> f64 {
        k as f64 * self.gamma
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledPoint {
    pub x: [i64; 2],
    pub y: i8,
}

impl LabeledPoint {
    pub fn new(x: [i64; 2], y: i8) -> Result<Self> {
        if x == [0, 0] {
            return Err(Error::param("the origin has no angle"));
        }
        if y != 1 && y != -1 {
            return Err(Error::param(format!("label must be -1 or +1, got {y}")));
        }
        Ok(Self { x, y })
    }

    /// Angle of `x` in `[0, 2 pi)`.
    pub fn angle(&self) -> f64 {
        let a = (self.x[1] as f64).atan2(self.x[0] as f64);
        if a < 0.0 {
            a + TAU
        } else {
            a
        }
    }
}

/// `h_phi(x)` as a label.
pub fn h_phi(phi: f64, x: [i64; 2]) -> i8 {
    let v = -phi.sin() * x[0] as f64 + phi.cos() * x[1] as f64;
    let scale = (x[0] as f64).hypot(x[1] as f64);
    if v >= -SIGN_TOL * scale {
        1
    } else {
        -1
    }
}

/// Number of examples `h_phi` labels correctly.
pub fn q_angle(s: &[LabeledPoint], phi: f64) -> usize {
    s.iter().filter(|e| h_phi(phi, e.x) == e.y).count()
}

fn circular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

/// Noisy per-angle copy counts: entry `k` is the number of copies of the
/// grid angle `k gamma`, `max(ceil(n_phi + Lap(1/eps)), 1)`.
pub fn make_data(epsilon: f64, grid: &AngleGrid, s: &[LabeledPoint], rng: &mut RandomSource) -> Result<Vec<u64>> {
    if !(epsilon > 0.0) {
        return Err(Error::param("epsilon must be positive"));
    }
    (0..grid.size)
        .map(|k| {
            let phi = grid.angle(k);
            let n_phi = s
                .iter()
                .filter(|e| circular_distance(e.angle(), phi) < grid.gamma - SIGN_TOL && h_phi(phi, e.x) == e.y)
                .count();
            let noisy = (n_phi as f64 + laplace_sample(1.0 / epsilon, rng)?).ceil();
            Ok(noisy.max(1.0) as u64)
        })
        .collect()
}

/// Labelled angles handed to the threshold learner.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThrData {
    /// Grid index of the angle rotated to 0.
    pub rotation: usize,
    /// Selected grid indices before rotation, one entry per copy.
    pub pre_rotation: Vec<usize>,
    /// `(rotated index, label)` per selected copy.
    pub labeled: Vec<(usize, i8)>,
    /// Rotated index of the best selected angle.
    pub phi_star: usize,
}

/// Keeps the `C` copies largest in `(q(S, phi), phi)`, rotates a random
/// discarded copy to angle 0 and labels each kept angle `+1` iff it is at most
/// the best kept angle after rotation.
pub fn make_thr_data(counts: &[u64], grid: &AngleGrid, s: &[LabeledPoint], c: usize, rng: &mut RandomSource) -> Result<ThrData> {
    if counts.len() != grid.size {
        return Err(Error::param("one count per grid angle expected"));
    }
    let total: u64 = counts.iter().sum();
    if total <= c as u64 {
        return Err(Error::param(format!("need more than C = {c} angles, got {total}")));
    }
    let q: Vec<usize> = (0..grid.size).map(|k| q_angle(s, grid.angle(k))).collect();
    let mut order: Vec<usize> = (0..grid.size).collect();
    order.sort_by(|&a, &b| (q[b], b).cmp(&(q[a], a)));
    let mut left = counts.to_vec();
    let mut pre_rotation = Vec::with_capacity(c);
    for &k in &order {
        while pre_rotation.len() < c && left[k] > 0 {
            pre_rotation.push(k);
            left[k] -= 1;
        }
    }
    let mut pick = rng.below(total - c as u64);
    let mut rotation = 0;
    for (k, &m) in left.iter().enumerate() {
        if pick < m {
            rotation = k;
            break;
        }
        pick -= m;
    }
    let rot = |k: usize| (k + grid.size - rotation) % grid.size;
    let phi_star = rot(pre_rotation[0]);
    let labeled = pre_rotation
        .iter()
        .map(|&k| (rot(k), if rot(k) <= phi_star { 1 } else { -1 }))
        .collect();
    Ok(ThrData {
        rotation,
        pre_rotation,
        labeled,
        phi_star,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimpleHParams {
    pub gamma: f64,
    /// Number of kept angles; defaults to the threshold learner's sample need.
    pub c: Option<usize>,
    pub epsilon: f64,
    pub delta: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl SimpleHParams {
    pub fn threshold_samples(&self, grid: &AngleGrid) -> usize {
        self.c.unwrap_or_else(|| n_ip(grid.size as u128, self.beta, self.epsilon, self.delta))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimpleHOutcome {
    pub angle: f64,
    pub index: usize,
    pub thr: ThrData,
}

/// `A_SimpleH`. The threshold learner is the private interior point of the
/// kept rotated angles over the grid indices they span; its output is
/// rotated back.
pub fn a_simple_h(s: &[LabeledPoint], params: &SimpleHParams, rng: &mut RandomSource) -> Result<SimpleHOutcome> {
    let grid = AngleGrid::new(params.gamma)?;
    let counts = make_data(params.epsilon, &grid, s, rng)?;
    let c = params.threshold_samples(&grid).max(1);
    let thr = make_thr_data(&counts, &grid, s, c, rng)?;
    let values: Vec<i64> = thr.labeled.iter().map(|&(k, _)| k as i64).collect();
    let lo = *values.iter().min().expect("C > 0 angles kept");
    let domain = IntegerRange::new(lo, *values.iter().max().expect("non-empty"))?;
    let spec = IpSolverSpec::baseline(PrivacyParams::new(params.epsilon, params.delta)?, params.beta)?;
    let r = private_interior_point(&values, &domain, &spec, rng)? as usize;
    let index = (r + thr.rotation) % grid.size;
    Ok(SimpleHOutcome {
        angle: grid.angle(index),
        index,
        thr,
    })
}

/// `S`: `n/2 + 1` copies of `((1,0), -1)` and `n/2 - 1` of `((-1,0), -1)`;
/// `S'` moves one example from the first group to the second.
pub fn counterexample_datasets(n: usize) -> Result<(Vec<LabeledPoint>, Vec<LabeledPoint>)> {
    if n < 4 || n % 2 == 1 {
        return Err(Error::param(format!("n must be even and at least 4, got {n}")));
    }
    let right = LabeledPoint { x: [1, 0], y: -1 };
    let left = LabeledPoint { x: [-1, 0], y: -1 };
    let build = |r: usize| {
        let mut v = vec![right; r];
        v.extend(std::iter::repeat(left).take(n - r));
        v
    };
    Ok((build(n / 2 + 1), build(n / 2)))
}

/// Output lies strictly inside the upper half-circle.
pub fn in_upper_half(angle: f64) -> bool {
    angle > SIGN_TOL && angle < PI - SIGN_TOL
}

/// Exact two-sided binomial interval at the given level.
pub fn clopper_pearson(successes: usize, trials: usize, level: f64) -> Result<(f64, f64)> {
    if trials == 0 || successes > trials {
        return Err(Error::param("invalid binomial counts"));
    }
    let a = (1.0 - level) / 2.0;
    let (k, n) = (successes as f64, trials as f64);
    let beta = |p: f64, q: f64| Beta::new(p, q).map_err(|e| Error::param(e.to_string()));
    let lo = if successes == 0 { 0.0 } else { beta(k, n - k + 1.0)?.inverse_cdf(a) };
    let hi = if successes == trials { 1.0 } else { beta(k + 1.0, n - k)?.inverse_cdf(1.0 - a) };
    Ok((lo, hi))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub trials: usize,
    pub delta: f64,
    /// Which event and ordering gave the reported bound, e.g. `E on (S, S')`.
    pub event: String,
    pub count_s: usize,
    pub count_s_prime: usize,
    pub ci_s: (f64, f64),
    pub ci_s_prime: (f64, f64),
    /// `ln((p_S - delta) / p_S')` from point estimates; `None` when `p_S' = 0`.
    pub epsilon_point: Option<f64>,
    /// Same ratio with the lower interval end on `S` and the upper on `S'`;
    /// `None` when the numerator is not positive.
    pub epsilon_lower_bound: Option<f64>,
    pub claimed_epsilon: Option<f64>,
    pub verdict: String,
}

impl AuditReport {
    pub fn unbounded_at_resolution(&self) -> bool {
        self.epsilon_point.is_none() && self.count_s as f64 / self.trials as f64 > self.delta
    }
}

fn bound_for(k_s: usize, k_t: usize, trials: usize, delta: f64) -> Result<(Option<f64>, Option<f64>, (f64, f64), (f64, f64))> {
    let (ci_s, ci_t) = (clopper_pearson(k_s, trials, 0.95)?, clopper_pearson(k_t, trials, 0.95)?);
    let (p_s, p_t) = (k_s as f64 / trials as f64, k_t as f64 / trials as f64);
    let point = (p_s - delta > 0.0 && p_t > 0.0).then(|| ((p_s - delta) / p_t).ln());
    let lower = (ci_s.0 - delta > 0.0).then(|| ((ci_s.0 - delta) / ci_t.1).ln());
    Ok((point, lower, ci_s, ci_t))
}

/// Runs `mechanism` `trials` times on each input and bounds epsilon from
/// below, maximizing over both orderings of the inputs and over the event and
/// its complement. Trial `i` uses a source seeded with `seed ^ i` on `S` and
/// `!seed ^ i` on `S'`.
pub fn estimate_epsilon_lower_bound<T, O, M, E>(
    mechanism: M,
    s: &[T],
    s_prime: &[T],
    event: E,
    trials: usize,
    delta: f64,
    claimed_epsilon: Option<f64>,
    seed: u64,
) -> Result<AuditReport>
where
    T: Sync,
    M: Fn(&[T], &mut RandomSource) -> Result<O> + Sync,
    E: Fn(&O) -> bool + Sync,
{
    if trials < 100 {
        return Err(Error::param("at least 100 trials are required"));
    }
    let hits = |data: &[T], base: u64| -> Result<usize> {
        let v: Vec<bool> = (0..trials as u64)
            .into_par_iter()
            .map(|i| {
                let mut rng = RandomSource::new(base ^ i);
                mechanism(data, &mut rng).map(|o| event(&o))
            })
            .collect::<Result<_>>()?;
        Ok(v.into_iter().filter(|&b| b).count())
    };
    let (a, b) = (hits(s, seed)?, hits(s_prime, !seed)?);
    let cases = [
        ("E on (S, S')", a, b, false),
        ("E on (S', S)", b, a, true),
        ("not E on (S, S')", trials - a, trials - b, false),
        ("not E on (S', S)", trials - b, trials - a, true),
    ];
    let key = |x: &(Option<f64>, Option<f64>)| (x.1.unwrap_or(f64::NEG_INFINITY), x.0.is_none() as u8, x.0.unwrap_or(0.0));
    let mut best: Option<AuditReport> = None;
    for (label, ks, kt, swapped) in cases {
        let (point, lower, ci_s, ci_t) = bound_for(ks, kt, trials, delta)?;
        let better = best
            .as_ref()
            .map_or(true, |r| key(&(point, lower)) > key(&(r.epsilon_point, r.epsilon_lower_bound)));
        if better {
            let (count_s, count_s_prime, ci_s, ci_s_prime) = if swapped { (kt, ks, ci_t, ci_s) } else { (ks, kt, ci_s, ci_t) };
            best = Some(AuditReport {
                trials,
                delta,
                event: label.to_string(),
                count_s,
                count_s_prime,
                ci_s,
                ci_s_prime,
                epsilon_point: point,
                epsilon_lower_bound: lower,
                claimed_epsilon,
                verdict: String::new(),
            });
        }
    }
    let mut r = best.expect("four cases");
    r.verdict = match (r.epsilon_lower_bound, claimed_epsilon) {
        (Some(e), Some(c)) if e > c => "DP violated".to_string(),
        (_, Some(_)) => "no violation detected".to_string(),
        (Some(e), None) => format!("epsilon >= {e:.4}"),
        (None, None) => "no bound at this resolution".to_string(),
    };
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_covers_circle() {
        let g = AngleGrid::new(TAU / 256.0).unwrap();
        assert_eq!(g.size, 256);
        assert_eq!(AngleGrid::new(1.0).unwrap().size, 7);
        assert!(AngleGrid::new(0.0).is_err());
    }

    #[test]
    fn counterexample_shape() {
        let (s, t) = counterexample_datasets(4).unwrap();
        assert_eq!(s.iter().filter(|e| e.x == [1, 0]).count(), 3);
        assert_eq!(t.iter().filter(|e| e.x == [1, 0]).count(), 2);
        assert_eq!(s.len(), t.len());
        assert!(counterexample_datasets(5).is_err());
        let (s, t) = counterexample_datasets(10).unwrap();
        let g = AngleGrid::with_size(64).unwrap();
        // S' scores n/2 on both half-circles; the angle tie-break then keeps (pi, 2 pi)
        for k in 1..32 {
            assert_eq!(q_angle(&s, g.angle(k)), 6);
            assert_eq!(q_angle(&t, g.angle(k)), 5);
        }
        for k in 33..64 {
            assert_eq!(q_angle(&s, g.angle(k)), 4);
            assert_eq!(q_angle(&t, g.angle(k)), 5);
        }
        assert_eq!(q_angle(&s, 0.0), 0);
        assert_eq!(q_angle(&s, g.angle(32)), 0);
    }

    #[test]
    fn make_data_clamps_to_one() {
        let g = AngleGrid::with_size(32).unwrap();
        let mut rng = RandomSource::new(1);
        let c = make_data(0.5, &g, &[], &mut rng).unwrap();
        assert!(c.iter().all(|&m| m >= 1));
        let ex = [LabeledPoint::new([0, 1], 1).unwrap()];
        let c = make_data(1e9, &g, &ex, &mut rng).unwrap();
        // ceil(1 + noise) with |noise| tiny
        assert!((1..=2).contains(&c[8]));
        assert!(c.iter().enumerate().all(|(k, &m)| k == 8 || m == 1));
    }

    #[test]
    fn thr_data_ties_fall_back_to_angle() {
        let g = AngleGrid::with_size(8).unwrap();
        let mut rng = RandomSource::new(2);
        let t = make_thr_data(&[1; 8], &g, &[], 3, &mut rng).unwrap();
        assert_eq!(t.pre_rotation, vec![7, 6, 5]);
        assert!(t.rotation < 5);
        assert!(make_thr_data(&[1; 8], &g, &[], 8, &mut rng).is_err());
    }

    #[test]
    fn clopper_pearson_known_values() {
        let (lo, hi) = clopper_pearson(0, 1000, 0.95).unwrap();
        assert_eq!(lo, 0.0);
        assert!((hi - (1.0 - 0.025f64.powf(1.0 / 1000.0))).abs() < 1e-9);
        let (lo, hi) = clopper_pearson(5, 10, 0.95).unwrap();
        assert!((lo - 0.187086).abs() < 1e-5 && (hi - 0.812914).abs() < 1e-5);
    }
}
