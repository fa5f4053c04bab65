//! Per-coordinate candidate domains for the two geometric applications.

use serde::{Deserialize, Serialize};

use super::RationalGrid;
use crate::error::{Error, Result};

fn factorial(n: u64) -> Option<u128> {
    (1..=n as u128).try_fold(1u128, |acc, k| acc.checked_mul(k))
}

fn checked_pow(base: u128, exp: u64) -> Option<u128> {
    (0..exp).try_fold(1u128, |acc, _| acc.checked_mul(base))
}

fn to_grid(s: Option<u128>, t: Option<u128>) -> Result<RationalGrid> {
    let too_big = || Error::param("domain bounds overflow the supported grid size");
    let s = u64::try_from(s.ok_or_else(too_big)?).map_err(|_| too_big())?;
    let t = u64::try_from(t.ok_or_else(too_big)?).map_err(|_| too_big())?;
    RationalGrid::new(s, t)
}

fn check_coord(i: usize, d: usize, x: u64, prev: u64) -> Result<()> {
    if d == 0 || i == 0 || i > d {
        return Err(Error::param(format!("coordinate index {i} out of range for dimension {d}")));
    }
    if x == 0 || prev == 0 {
        return Err(Error::param("coordinate bound and previous denominator must be positive"));
    }
    Ok(())
}

/// Cascading domain for linear feasibility: numerators bounded by
/// `(d*d!)^i * X^(d*i)` and denominators by `d! * prev * X^d`, where `prev`
/// is the denominator of the previously chosen coordinate (1 when `i = 1`).
pub fn lf_domain(i: usize, d: usize, x: u64, prev_denominator: u64) -> Result<RationalGrid> {
    check_coord(i, d, x, prev_denominator)?;
    let prev = if i == 1 { 1 } else { prev_denominator as u128 };
    let (d64, x128) = (d as u64, x as u128);
    let fact = factorial(d64);
    let s = fact
        .and_then(|f| f.checked_mul(d as u128))
        .and_then(|dd| checked_pow(dd, i as u64))
        .and_then(|a| checked_pow(x128, d64 * i as u64).and_then(|b| a.checked_mul(b)));
    let t = fact
        .and_then(|f| f.checked_mul(prev))
        .and_then(|a| checked_pow(x128, d64).and_then(|b| a.checked_mul(b)));
    to_grid(s, t)
}

/// Explicit bounds for one coordinate, replacing the derived ones.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct GridOverride {
    #[serde(default)]
    pub s_max: Option<u64>,
    #[serde(default)]
    pub t_max: Option<u64>,
}

/// Scaling knobs for the Tukey candidate grids.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TukeyGridConfig {
    /// Divides every derived denominator bound (rounding up); values above 1
    /// shrink the grids below the provable bounds.
    #[serde(default)]
    pub denominator_divisor: Option<u64>,
    /// Per-coordinate overrides, indexed from coordinate 1.
    #[serde(default)]
    pub overrides: Vec<GridOverride>,
}

impl TukeyGridConfig {
    /// True when no knob moves the grids away from the derived bounds.
    pub fn is_default(&self) -> bool {
        self.denominator_divisor.map_or(true, |v| v <= 1)
            && self.overrides.iter().all(|o| o.s_max.is_none() && o.t_max.is_none())
    }
}

/// Cascading Tukey domain from Cramer's rule.
///
/// A hyperplane through `d` points of `[[X]]^d` has integer normal entries of
/// magnitude at most `A = (d-1)! (2X)^(d-1)`. A slice maximizer of the depth is
/// a vertex of the arrangement of such hyperplanes restricted to the current
/// prefix, so its `i`-th coordinate has denominator at most
/// `(d-i+1)! * A^(d-i+1) * prev`. Maximizers lie in the bounding box, so the
/// numerator bound is `X` times the denominator bound.
pub fn tukey_domain(
    i: usize,
    d: usize,
    x: u64,
    prev_denominator: u64,
    config: &TukeyGridConfig,
) -> Result<RationalGrid> {
    check_coord(i, d, x, prev_denominator)?;
    let prev = if i == 1 { 1 } else { prev_denominator as u128 };
    let a = factorial(d as u64 - 1).and_then(|f| checked_pow(2 * x as u128, d as u64 - 1).and_then(|p| f.checked_mul(p)));
    let k = (d - i + 1) as u64;
    let mut t = a
        .and_then(|a| checked_pow(a, k))
        .and_then(|ak| factorial(k).and_then(|f| f.checked_mul(ak)))
        .and_then(|v| v.checked_mul(prev));
    if let (Some(div), Some(tv)) = (config.denominator_divisor, t) {
        if div > 1 {
            t = Some(tv.div_ceil(div as u128).max(1));
        }
    }
    let ov = config.overrides.get(i - 1).copied().unwrap_or_default();
    if let Some(tt) = ov.t_max {
        t = Some(tt as u128);
    }
    let mut s = t.and_then(|t| t.checked_mul(x as u128));
    if let Some(ss) = ov.s_max {
        s = Some(ss as u128);
    }
    to_grid(s, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::BoundedRational;

    #[test]
    fn lf_domain_examples() {
        let g = lf_domain(1, 2, 2, 99).unwrap();
        assert_eq!((g.s_max(), g.t_max()), (16, 8));
        let g = lf_domain(2, 2, 2, 3).unwrap();
        assert_eq!((g.s_max(), g.t_max()), (256, 24));
        let g = lf_domain(1, 1, 1, 1).unwrap();
        assert_eq!((g.s_max(), g.t_max()), (1, 1));
        assert_eq!(g.iter().map(|v| v.to_string()).collect::<Vec<_>>(), ["-1", "0", "1"]);
        assert!(lf_domain(3, 2, 2, 1).is_err());
        assert!(lf_domain(1, 2, 0, 1).is_err());
    }

    #[test]
    fn tukey_domain_one_dim_contains_data_range() {
        let g = tukey_domain(1, 1, 8, 1, &TukeyGridConfig::default()).unwrap();
        for v in -8..=8 {
            assert!(g.contains(&BoundedRational::from(v)));
        }
        assert_eq!((g.s_max(), g.t_max()), (8, 1));
    }

    #[test]
    fn tukey_domain_two_dim_bounds() {
        let cfg = TukeyGridConfig::default();
        let g1 = tukey_domain(1, 2, 4, 1, &cfg).unwrap();
        assert_eq!((g1.s_max(), g1.t_max()), (512, 128));
        // the first coordinate ignores the previous denominator
        assert_eq!(tukey_domain(1, 2, 4, 77, &cfg).unwrap(), g1);
        let g2 = tukey_domain(2, 2, 4, 3, &cfg).unwrap();
        assert_eq!((g2.s_max(), g2.t_max()), (96, 24));
        let shrunk = TukeyGridConfig {
            denominator_divisor: Some(4),
            overrides: vec![GridOverride { s_max: None, t_max: Some(1) }],
        };
        assert!(!shrunk.is_default());
        let g = tukey_domain(1, 2, 4, 1, &shrunk).unwrap();
        assert_eq!((g.s_max(), g.t_max()), (4, 1));
        let g = tukey_domain(2, 2, 4, 3, &shrunk).unwrap();
        assert_eq!((g.s_max(), g.t_max()), (24, 6));
    }
}
