//! Empirical check that candidate grids keep the slice maximum.

use serde::{Deserialize, Serialize};

use super::{BoundedRational, RationalGrid};
use crate::error::{Error, Result};
use crate::optimizer::TargetFunction;

/// One compared prefix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProperCheck {
    /// 1-based coordinate whose grid was tested.
    pub coordinate: usize,
    pub prefix: Vec<BoundedRational>,
    pub grid_max: f64,
    pub mesh_max: f64,
    pub shortfall: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProperReport {
    pub checks: Vec<ProperCheck>,
    pub worst_shortfall: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Compares, for grid prefixes, the best slice value on the candidate grid
/// with the best value on a dense reference mesh.
///
/// `domains(prefix)` gives the candidate grid of coordinate `prefix.len() + 1`
/// and `mesh(prefix)` the reference mesh. At most `branching` grid points per
/// coordinate (evenly spaced by rank, plus the grid argmax) extend a prefix.
pub fn validate_properness<Q, D, M>(
    data: &[Q::Item],
    q: &Q,
    domains: D,
    mesh: M,
    branching: usize,
    tolerance: f64,
) -> Result<ProperReport>
where
    Q: TargetFunction,
    D: Fn(&[BoundedRational]) -> Result<RationalGrid>,
    M: Fn(&[BoundedRational]) -> Result<RationalGrid>,
{
    if branching == 0 {
        return Err(Error::param("branching must be positive"));
    }
    let mut checks = Vec::new();
    let mut frontier: Vec<Vec<BoundedRational>> = vec![Vec::new()];
    for i in 1..=q.dim() {
        let mut next = Vec::new();
        for prefix in &frontier {
            let grid = domains(prefix)?;
            let (arg, grid_max) = q.slice_argmax(data, prefix, &grid)?;
            let (_, mesh_max) = q.slice_argmax(data, prefix, &mesh(prefix)?)?;
            checks.push(ProperCheck {
                coordinate: i,
                prefix: prefix.clone(),
                grid_max,
                mesh_max,
                shortfall: (mesh_max - grid_max).max(0.0),
            });
            if i < q.dim() {
                for x in spread(&grid, branching, arg) {
                    let mut p = prefix.clone();
                    p.push(x);
                    next.push(p);
                }
            }
        }
        frontier = next;
    }
    let worst_shortfall = checks.iter().map(|c| c.shortfall).fold(0.0, f64::max);
    Ok(ProperReport {
        checks,
        worst_shortfall,
        tolerance,
        passed: worst_shortfall <= tolerance,
    })
}

fn spread(grid: &RationalGrid, k: usize, arg: BoundedRational) -> Vec<BoundedRational> {
    let size = grid.size();
    let k = (k as u128).min(size);
    let mut out: Vec<BoundedRational> = (0..k)
        .filter_map(|j| grid.element_at_rank(if k == 1 { 0 } else { j * (size - 1) / (k - 1) }))
        .collect();
    out.push(arg);
    out.sort();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tukey::TukeyTarget;
    use crate::rationals::TukeyGridConfig;

    #[test]
    fn undersized_grid_is_detected() {
        let pts = vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]];
        let q = TukeyTarget::new(2, 1, TukeyGridConfig::default()).unwrap();
        let ints = |_: &[BoundedRational]| RationalGrid::new(1, 1);
        let fine = |_: &[BoundedRational]| RationalGrid::new(64, 64);
        let r = validate_properness(&pts, &q, ints, fine, 3, 1e-9).unwrap();
        assert!(!r.passed);
        assert!((r.worst_shortfall - 0.25).abs() < 1e-12, "{r:?}");
        let r = validate_properness(&pts, &q, |p: &[BoundedRational]| q.domain(p), fine, 3, 1e-9).unwrap();
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn one_dim_tukey_grid_is_proper() {
        let pts: Vec<Vec<i64>> = [3, -2, 5, 5, 0, 1].iter().map(|&v| vec![v]).collect();
        let q = TukeyTarget::new(1, 8, TukeyGridConfig::default()).unwrap();
        let r = validate_properness(&pts, &q, |p: &[BoundedRational]| q.domain(p), |_: &[BoundedRational]| RationalGrid::new(8 * 64, 64), 1, 0.0).unwrap();
        assert!(r.passed);
        assert_eq!(r.checks.len(), 1);
    }
}
