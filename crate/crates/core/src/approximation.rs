//! Subset sizing from VC bounds and empirical checks of approximation,
//! low sensitivity and shattering.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{arrangement_probes, Line};
use crate::optimizer::TargetFunction;
use crate::rationals::BoundedRational;

/// Default constant inside the VC sample bound.
pub const DEFAULT_C_VC: f64 = 8.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ApproxSpec {
    pub alpha: f64,
    pub beta: f64,
    pub vc_dimension: usize,
    pub c_vc: f64,
}

impl ApproxSpec {
    pub fn new(alpha: f64, beta: f64, vc_dimension: usize) -> Result<Self> {
        Self::with_constant(alpha, beta, vc_dimension, DEFAULT_C_VC)
    }

    pub fn with_constant(alpha: f64, beta: f64, vc_dimension: usize, c_vc: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0 && beta > 0.0 && beta < 1.0) {
            return Err(Error::param("alpha and beta must lie in (0,1)"));
        }
        if vc_dimension == 0 || !(c_vc > 0.0) {
            return Err(Error::param("VC dimension and constant must be positive"));
        }
        Ok(Self {
            alpha,
            beta,
            vc_dimension,
            c_vc,
        })
    }
}

/// `ceil(C_VC (d ln(d/alpha) + ln(1/beta)) / alpha^2)`.
pub fn m_subset_size(spec: &ApproxSpec) -> usize {
    let d = spec.vc_dimension as f64;
    let v = spec.c_vc * (d * (d / spec.alpha).ln() + (1.0 / spec.beta).ln()) / (spec.alpha * spec.alpha);
    (v.ceil() as usize).max(1)
}

/// Learner sample size `48/alpha (10 VC log(48e/alpha) + log(5/beta))`,
/// natural logarithms.
pub fn pac_sample_size(alpha: f64, beta: f64, vc_dimension: usize) -> Result<usize> {
    if !(alpha > 0.0 && alpha < 1.0 && beta > 0.0 && beta < 1.0) {
        return Err(Error::param("alpha and beta must lie in (0,1)"));
    }
    let e = std::f64::consts::E;
    let v = 48.0 / alpha * (10.0 * vc_dimension as f64 * (48.0 * e / alpha).ln() + (5.0 / beta).ln());
    Ok(v.ceil() as usize)
}

/// Largest `|Q(a, x) - Q(b, x)|` over the probes.
pub fn sup_gap<Q: TargetFunction>(q: &Q, a: &[Q::Item], b: &[Q::Item], probes: &[Vec<BoundedRational>]) -> Result<f64> {
    let gaps: Vec<f64> = probes
        .par_iter()
        .map(|x| Ok((q.eval(a, x)? - q.eval(b, x)?).abs()))
        .collect::<Result<_>>()?;
    Ok(gaps.into_iter().fold(0.0, f64::max))
}

/// Whether `s_sub` approximates `s` within `alpha` on every probe, and the
/// worst gap.
pub fn check_alpha_approx<Q: TargetFunction>(
    q: &Q,
    s: &[Q::Item],
    s_sub: &[Q::Item],
    probes: &[Vec<BoundedRational>],
    alpha: f64,
) -> Result<(bool, f64)> {
    if probes.is_empty() {
        return Err(Error::param("probe set must be non-empty"));
    }
    let g = sup_gap(q, s, s_sub, probes)?;
    Ok((g <= alpha, g))
}

/// Worst gap over neighbouring pairs; the probe set is built per pair.
pub fn sensitivity_probe<Q, P>(q: &Q, pairs: &[(Vec<Q::Item>, Vec<Q::Item>)], probes: P) -> Result<f64>
where
    Q: TargetFunction,
    P: Fn(&[Q::Item], &[Q::Item]) -> Result<Vec<Vec<BoundedRational>>>,
{
    let mut worst: f64 = 0.0;
    for (a, b) in pairs {
        let pr = probes(a, b)?;
        worst = worst.max(sup_gap(q, a, b, &pr)?);
    }
    Ok(worst)
}

/// Probe points on which Tukey depth attains every value it takes: data
/// values and gaps in one dimension, the cells of the arrangement of lines
/// through point pairs in two.
pub fn tukey_probes(points: &[Vec<i64>], d: usize) -> Result<Vec<Vec<BoundedRational>>> {
    match d {
        1 => {
            let mut v: Vec<i64> = points.iter().map(|p| p[0]).collect();
            v.sort_unstable();
            v.dedup();
            let mut out: Vec<Vec<BoundedRational>> = Vec::with_capacity(2 * v.len() + 1);
            for (i, x) in v.iter().enumerate() {
                out.push(vec![BoundedRational::from(*x)]);
                let next = v.get(i + 1).map_or(BoundedRational::from(x + 1), |n| BoundedRational::new(x + n, 2));
                out.push(vec![next]);
            }
            out.push(vec![BoundedRational::from(v.first().copied().unwrap_or(0) - 1)]);
            Ok(out)
        }
        2 => {
            let mut distinct: Vec<(i128, i128)> = points.iter().map(|p| (p[0] as i128, p[1] as i128)).collect();
            distinct.sort_unstable();
            distinct.dedup();
            let mut lines = Vec::new();
            for i in 0..distinct.len() {
                for j in i + 1..distinct.len() {
                    lines.extend(Line::through(distinct[i], distinct[j]));
                }
                // a pair of axis lines through each point keeps every cell pointed
                lines.extend(Line::new(1, 0, distinct[i].0));
                lines.extend(Line::new(0, 1, distinct[i].1));
            }
            Ok(arrangement_probes(&lines)?.iter().map(|p| p.to_rationals().to_vec()).collect())
        }
        _ => Err(Error::UnsupportedDimension { dim: d, max: 2 }),
    }
}

/// Number of distinct membership vectors of planar points in the closed
/// halfplanes `<a, x> >= w`. The boundary lines must be in general position.
pub fn count_realized_dichotomies(halfspaces: &[([i64; 2], i64)]) -> Result<usize> {
    let mut lines = Vec::with_capacity(halfspaces.len());
    for (a, w) in halfspaces {
        let l = Line::new(a[0] as i128, a[1] as i128, *w as i128)
            .ok_or_else(|| Error::Degenerate("halfplane with zero normal has no boundary".into()))?;
        lines.push(l);
    }
    let hint = "perturb the offsets (for example w -> w + k/(n+1)) to restore general position";
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            if lines[i].is_parallel(&lines[j]) {
                return Err(Error::Degenerate(format!("boundaries {i} and {j} are parallel; {hint}")));
            }
            for k in j + 1..lines.len() {
                let p = lines[i].intersect(&lines[j]).expect("not parallel");
                if lines[k].contains(&p) {
                    return Err(Error::Degenerate(format!("boundaries {i}, {j}, {k} are concurrent; {hint}")));
                }
            }
        }
    }
    let probes = arrangement_probes(&lines)?;
    let patterns: HashSet<Vec<bool>> = probes
        .iter()
        .map(|p| {
            halfspaces
                .iter()
                .map(|(a, w)| p.side((a[0] as i128, a[1] as i128), *w as i128) != std::cmp::Ordering::Less)
                .collect()
        })
        .collect();
    Ok(patterns.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subset_size_examples() {
        let spec = ApproxSpec::new(0.1, 0.05, 2).unwrap();
        assert_eq!(m_subset_size(&spec), 7190);
        let half = m_subset_size(&ApproxSpec::new(0.05, 0.05, 2).unwrap());
        let ratio = half as f64 / 7190.0;
        assert!(ratio > 4.0 && ratio < 5.0, "{ratio}");
        assert!(m_subset_size(&ApproxSpec::new(0.1, 0.05, 3).unwrap()) > 7190);
        assert!(m_subset_size(&ApproxSpec::new(0.1, 0.1, 2).unwrap()) < 7190);
    }

    #[test]
    fn dichotomy_examples() {
        assert_eq!(count_realized_dichotomies(&[([1, 0], 0), ([0, 1], 0)]).unwrap(), 4);
        assert_eq!(count_realized_dichotomies(&[([1, 1], 2)]).unwrap(), 2);
        assert_eq!(count_realized_dichotomies(&[([1, 0], 0), ([0, 1], 0), ([1, 1], 1)]).unwrap(), 7);
        assert!(matches!(
            count_realized_dichotomies(&[([1, 0], 0), ([2, 0], 1)]),
            Err(Error::Degenerate(_))
        ));
        assert!(matches!(
            count_realized_dichotomies(&[([1, 0], 0), ([0, 1], 0), ([1, 1], 0)]),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn pac_size_grows_as_alpha_shrinks() {
        let a = pac_sample_size(0.2, 0.1, 2).unwrap();
        let b = pac_sample_size(0.1, 0.1, 2).unwrap();
        assert!(b > 2 * a);
        let direct = 48.0 / 0.2 * (20.0 * (48.0 * std::f64::consts::E / 0.2).ln() + 50f64.ln());
        assert_eq!(a, direct.ceil() as usize);
    }
}
