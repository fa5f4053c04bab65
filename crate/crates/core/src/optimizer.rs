//! Private optimization of approximated quasi-concave functions by reduction
//! to the interior point problem.
//!
//! [`ip_concave`] splits the data into `t` blocks, maximizes the target on
//! every block over a finite candidate domain, and returns a private interior
//! point of the block maximizers. [`ip_concave_high_dim`] fixes one partition
//! and runs the one-dimensional step coordinate by coordinate on the slice
//! functions `x -> max over the remaining coordinates of Q(S, prefix, x, ...)`.

use std::cmp::Ordering;

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dp_core::{advanced_composition, RandomSource};
use crate::error::{Error, Result};
use crate::interior_point::{private_interior_point, IpSolverSpec};
use crate::rationals::{BoundedRational, RationalGrid};
use crate::{CompositionLedger, PrivacyParams};

/// A data-dependent score `Q(S, x)` on `R^d` together with the machinery the
/// optimizer needs: slice maxima, per-coordinate candidate domains and the
/// breakpoints of every slice function.
pub trait TargetFunction: Sync {
    type Item: Clone + Send + Sync;

    fn dim(&self) -> usize;

    /// `Q(S, point)` for a full point of length `dim()`.
    fn eval(&self, data: &[Self::Item], point: &[BoundedRational]) -> Result<f64>;

    /// `max over x_{i+1..d}` of `Q(S, (prefix, x, x_{i+1}, ..., x_d))`.
    fn slice_eval(&self, data: &[Self::Item], prefix: &[BoundedRational], x: &BoundedRational) -> Result<f64>;

    /// Candidate domain for coordinate `prefix.len() + 1`.
    fn domain(&self, prefix: &[BoundedRational]) -> Result<RationalGrid>;

    /// Sorted breakpoints of the slice function: it is constant on every open
    /// interval between consecutive breakpoints and beyond the extreme ones.
    /// `None` makes the optimizer fall back to enumerating the domain.
    fn slice_breakpoints(&self, _data: &[Self::Item], _prefix: &[BoundedRational]) -> Result<Option<Vec<BoundedRational>>> {
        Ok(None)
    }

    /// Smallest maximizer over `grid` of the slice function and its value.
    fn slice_argmax(
        &self,
        data: &[Self::Item],
        prefix: &[BoundedRational],
        grid: &RationalGrid,
    ) -> Result<(BoundedRational, f64)>
    where
        Self: Sized,
    {
        profile_slice_argmax(self, data, prefix, grid)
    }
}

/// One constant piece of a slice function.
#[derive(Debug, Clone, PartialEq)]
pub struct Piece {
    /// Lower end, `None` for `-inf`. Open unless `point`.
    pub lo: Option<BoundedRational>,
    /// Upper end, `None` for `+inf`. Open unless `point`.
    pub hi: Option<BoundedRational>,
    /// Degenerate piece `{lo}`.
    pub point: bool,
    pub value: f64,
}

/// Constant pieces of a slice function in increasing order.
pub fn slice_profile<Q: TargetFunction>(
    q: &Q,
    data: &[Q::Item],
    prefix: &[BoundedRational],
    breakpoints: &[BoundedRational],
) -> Result<Vec<Piece>> {
    let one = BoundedRational::from(1);
    if breakpoints.is_empty() {
        let value = q.slice_eval(data, prefix, &BoundedRational::zero())?;
        return Ok(vec![Piece {
            lo: None,
            hi: None,
            point: false,
            value,
        }]);
    }
    let mut out = Vec::with_capacity(2 * breakpoints.len() + 1);
    let first = &breakpoints[0];
    out.push(Piece {
        lo: None,
        hi: Some(first.clone()),
        point: false,
        value: q.slice_eval(data, prefix, &(first - &one))?,
    });
    for (k, b) in breakpoints.iter().enumerate() {
        out.push(Piece {
            lo: Some(b.clone()),
            hi: Some(b.clone()),
            point: true,
            value: q.slice_eval(data, prefix, b)?,
        });
        let (probe, hi) = match breakpoints.get(k + 1) {
            Some(nb) => (BoundedRational::midpoint(b, nb), Some(nb.clone())),
            None => (b + &one, None),
        };
        out.push(Piece {
            lo: Some(b.clone()),
            hi,
            point: false,
            value: q.slice_eval(data, prefix, &probe)?,
        });
    }
    Ok(out)
}

fn smallest_in_piece(grid: &RationalGrid, p: &Piece) -> Option<BoundedRational> {
    if p.point {
        let v = p.lo.as_ref()?;
        return grid.contains(v).then(|| v.clone());
    }
    let cand = match &p.lo {
        None => Some(grid.min()),
        Some(lo) => grid.ceil(lo, true),
    }?;
    match &p.hi {
        Some(hi) if &cand >= hi => None,
        _ => Some(cand),
    }
}

/// Smallest maximizer over `grid` of a piecewise-constant slice function.
pub fn argmax_over_pieces(grid: &RationalGrid, pieces: &[Piece]) -> Option<(BoundedRational, f64)> {
    let mut order: Vec<usize> = (0..pieces.len()).collect();
    order.sort_by(|&a, &b| {
        pieces[b]
            .value
            .partial_cmp(&pieces[a].value)
            .unwrap_or(Ordering::Equal)
            .then(a.cmp(&b))
    });
    order
        .into_iter()
        .find_map(|i| smallest_in_piece(grid, &pieces[i]).map(|x| (x, pieces[i].value)))
}

/// Exact maximizer of `f` over an enumerable domain by full enumeration,
/// ties broken towards the smallest element.
pub fn argmax_over_domain<E, I, F>(domain: I, mut f: F) -> Result<Option<(E, f64)>>
where
    I: IntoIterator<Item = E>,
    F: FnMut(&E) -> Result<f64>,
{
    let mut best: Option<(E, f64)> = None;
    for x in domain {
        let v = f(&x)?;
        if best.as_ref().map_or(true, |(_, bv)| v > *bv) {
            best = Some((x, v));
        }
    }
    Ok(best)
}

/// Smallest maximizer over `grid` of the slice function of `q` on `data`,
/// from the breakpoint profile or by enumeration.
pub fn profile_slice_argmax<Q: TargetFunction>(
    q: &Q,
    data: &[Q::Item],
    prefix: &[BoundedRational],
    grid: &RationalGrid,
) -> Result<(BoundedRational, f64)> {
    match q.slice_breakpoints(data, prefix)? {
        Some(bps) => {
            let pieces = slice_profile(q, data, prefix, &bps)?;
            argmax_over_pieces(grid, &pieces).ok_or_else(|| Error::param("empty candidate domain"))
        }
        None => argmax_over_domain(grid.iter(), |x| q.slice_eval(data, prefix, x))?
            .ok_or_else(|| Error::param("empty candidate domain")),
    }
}

/// Assignment of item indices to `t` disjoint blocks covering the data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    pub blocks: Vec<Vec<usize>>,
}

impl Partition {
    pub fn t(&self) -> usize {
        self.blocks.len()
    }

    /// Consecutive blocks over an already ordered index list; the first
    /// `n mod t` blocks receive one extra element.
    pub fn contiguous(order: &[usize], t: usize) -> Result<Self> {
        let n = order.len();
        if t == 0 {
            return Err(Error::param("partition needs t >= 1"));
        }
        if n < t {
            return Err(Error::InsufficientSamples {
                needed: t,
                got: n,
                detail: "partition into t non-empty blocks".into(),
            });
        }
        let (base, extra) = (n / t, n % t);
        let mut blocks = Vec::with_capacity(t);
        let mut at = 0;
        for b in 0..t {
            let len = base + usize::from(b < extra);
            blocks.push(order[at..at + len].to_vec());
            at += len;
        }
        Ok(Self { blocks })
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        let mut seen = vec![false; n];
        for idx in self.blocks.iter().flatten() {
            if *idx >= n || std::mem::replace(&mut seen[*idx], true) {
                return Err(Error::param("partition blocks must be disjoint and in range"));
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::param("partition must cover the dataset"));
        }
        Ok(())
    }

    pub fn gather<T: Clone>(&self, data: &[T]) -> Vec<Vec<T>> {
        self.blocks
            .iter()
            .map(|b| b.iter().map(|&i| data[i].clone()).collect())
            .collect()
    }
}

/// Uniformly random partition of `n` items into `t` blocks of size
/// `floor(n/t)` or `floor(n/t) + 1`.
pub fn partition(n: usize, t: usize, rng: &mut RandomSource) -> Result<Partition> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    Partition::contiguous(&order, t)
}

/// Parameters of one optimizer run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub alpha: f64,
    pub beta: f64,
    /// Budget of every interior point call.
    pub privacy: PrivacyParams,
    pub t: usize,
    #[serde(default)]
    pub fixed_partition: Option<Partition>,
    /// Record slice values on the whole dataset in the trace.
    #[serde(default)]
    pub trace_full_values: bool,
}

impl OptimizerConfig {
    pub fn new(alpha: f64, beta: f64, privacy: PrivacyParams, t: usize) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) || !(beta > 0.0 && beta < 1.0) {
            return Err(Error::param("alpha and beta must lie in (0,1)"));
        }
        if t == 0 {
            return Err(Error::param("t must be at least 1"));
        }
        Ok(Self {
            alpha,
            beta,
            privacy,
            t,
            fixed_partition: None,
            trace_full_values: false,
        })
    }

    fn ip_spec(&self) -> Result<IpSolverSpec> {
        IpSolverSpec::baseline(self.privacy, self.beta)
    }
}

/// Record of one coordinate step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoordinateTrace {
    pub coordinate: usize,
    pub domain: RationalGrid,
    pub block_maximizers: Vec<BoundedRational>,
    /// Block maximum value on its own block.
    pub block_values: Vec<f64>,
    pub chosen: BoundedRational,
    /// Slice value at `chosen` on the whole dataset, if requested.
    pub full_value: Option<f64>,
}

/// Result of [`ip_concave_high_dim`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HighDimOutcome {
    pub point: Vec<BoundedRational>,
    pub trace: Vec<CoordinateTrace>,
    pub ledger: CompositionLedger,
    pub partition: Partition,
}

fn resolve_partition(n: usize, config: &OptimizerConfig, rng: &mut RandomSource) -> Result<Partition> {
    match &config.fixed_partition {
        Some(p) => {
            p.validate(n)?;
            if p.t() != config.t {
                return Err(Error::param("fixed partition block count differs from t"));
            }
            Ok(p.clone())
        }
        None => partition(n, config.t, rng),
    }
}

fn coordinate_step<Q: TargetFunction>(
    data: &[Q::Item],
    blocks: &[Vec<Q::Item>],
    q: &Q,
    prefix: &[BoundedRational],
    domain: &RationalGrid,
    config: &OptimizerConfig,
    rng: &mut RandomSource,
) -> Result<CoordinateTrace> {
    let maxima: Vec<(BoundedRational, f64)> = blocks
        .par_iter()
        .map(|b| q.slice_argmax(b, prefix, domain))
        .collect::<Result<_>>()?;
    let ys: Vec<BoundedRational> = maxima.iter().map(|(y, _)| y.clone()).collect();
    let chosen = private_interior_point(&ys, domain, &config.ip_spec()?, rng)?;
    let full_value = if config.trace_full_values {
        Some(q.slice_eval(data, prefix, &chosen)?)
    } else {
        None
    };
    Ok(CoordinateTrace {
        coordinate: prefix.len() + 1,
        domain: domain.clone(),
        block_values: maxima.iter().map(|(_, v)| *v).collect(),
        block_maximizers: ys,
        chosen,
        full_value,
    })
}

/// One-dimensional step: private interior point of the block maximizers of
/// the slice function after `prefix` over `domain`.
pub fn ip_concave<Q: TargetFunction>(
    data: &[Q::Item],
    q: &Q,
    prefix: &[BoundedRational],
    domain: &RationalGrid,
    config: &OptimizerConfig,
    rng: &mut RandomSource,
) -> Result<CoordinateTrace> {
    if data.len() < config.t {
        return Err(Error::InsufficientSamples {
            needed: config.t,
            got: data.len(),
            detail: "need at least one item per block".into(),
        });
    }
    let part = resolve_partition(data.len(), config, rng)?;
    let blocks = part.gather(data);
    coordinate_step(data, &blocks, q, prefix, domain, config, rng)
}

/// Coordinate-by-coordinate optimization with one fixed partition.
///
/// Every coordinate spends `config.privacy`; the ledger records the steps and
/// [`HighDimOutcome::composed_privacy`] reports the advanced-composition total.
pub fn ip_concave_high_dim<Q: TargetFunction>(
    data: &[Q::Item],
    q: &Q,
    config: &OptimizerConfig,
    rng: &mut RandomSource,
) -> Result<HighDimOutcome> {
    let d = q.dim();
    if d == 0 {
        return Err(Error::param("target dimension must be positive"));
    }
    if data.len() < config.t {
        return Err(Error::InsufficientSamples {
            needed: config.t,
            got: data.len(),
            detail: "need at least one item per block".into(),
        });
    }
    let part = resolve_partition(data.len(), config, rng)?;
    let blocks = part.gather(data);
    let mut prefix: Vec<BoundedRational> = Vec::with_capacity(d);
    let mut trace = Vec::with_capacity(d);
    let mut ledger = CompositionLedger::new();
    for i in 0..d {
        let domain = q.domain(&prefix)?;
        let step = coordinate_step(data, &blocks, q, &prefix, &domain, config, rng)?;
        ledger.record(config.privacy, format!("interior point, coordinate {}", i + 1));
        prefix.push(step.chosen.clone());
        trace.push(step);
    }
    Ok(HighDimOutcome {
        point: prefix,
        trace,
        ledger,
        partition: part,
    })
}

impl HighDimOutcome {
    /// `(eps sqrt(2d ln(1/delta')), d delta + delta')` for the recorded steps.
    pub fn composed_privacy(&self, delta_prime: f64) -> Result<PrivacyParams> {
        let first = self
            .ledger
            .entries
            .first()
            .ok_or_else(|| Error::param("empty ledger"))?;
        let (e, d) = advanced_composition(first.epsilon, first.delta, self.ledger.len(), delta_prime)?;
        Ok(PrivacyParams { epsilon: e, delta: d })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interior_point::q_ip_score;

    /// `Q(S, x) = q_ip_score(S, x) / |S|` on integer data.
    struct Median {
        bound: u64,
    }

    impl TargetFunction for Median {
        type Item = i64;
        fn dim(&self) -> usize {
            1
        }
        fn eval(&self, data: &[i64], point: &[BoundedRational]) -> Result<f64> {
            let vals: Vec<BoundedRational> = data.iter().map(|&v| BoundedRational::from(v)).collect();
            Ok(q_ip_score(&vals, &point[0]) as f64 / data.len() as f64)
        }
        fn slice_eval(&self, data: &[i64], _prefix: &[BoundedRational], x: &BoundedRational) -> Result<f64> {
            self.eval(data, std::slice::from_ref(x))
        }
        fn domain(&self, _prefix: &[BoundedRational]) -> Result<RationalGrid> {
            RationalGrid::integers(self.bound)
        }
        fn slice_breakpoints(&self, data: &[i64], _prefix: &[BoundedRational]) -> Result<Option<Vec<BoundedRational>>> {
            let mut v: Vec<BoundedRational> = data.iter().map(|&x| BoundedRational::from(x)).collect();
            v.sort();
            v.dedup();
            Ok(Some(v))
        }
    }

    #[test]
    fn partition_sizes() {
        let mut rng = RandomSource::new(1);
        let p = partition(10, 3, &mut rng).unwrap();
        let sizes: Vec<usize> = p.blocks.iter().map(Vec::len).collect();
        assert_eq!(sizes, [4, 3, 3]);
        p.validate(10).unwrap();
        let p = partition(5, 5, &mut rng).unwrap();
        assert!(p.blocks.iter().all(|b| b.len() == 1));
        assert!(matches!(partition(3, 4, &mut rng), Err(Error::InsufficientSamples { .. })));
    }

    #[test]
    fn argmax_tie_break_and_unique() {
        let g = RationalGrid::integers(6).unwrap();
        let (x, _) = argmax_over_domain(g.iter(), |_| Ok(1.0)).unwrap().unwrap();
        assert_eq!(x, BoundedRational::from(-6));
        let q = Median { bound: 6 };
        let data = [1, 3, 5];
        let (x, v) = argmax_over_domain(g.iter(), |x| q.slice_eval(&data, &[], x)).unwrap().unwrap();
        assert_eq!(x, BoundedRational::from(3));
        assert!((v - 2.0 / 3.0).abs() < 1e-12);
        let (y, _) = q.slice_argmax(&data, &[], &g).unwrap();
        assert_eq!(y, x);
    }

    #[test]
    fn pieces_argmax_matches_enumeration_on_fine_grid() {
        let q = Median { bound: 4 };
        let g = RationalGrid::new(4, 3).unwrap();
        for data in [vec![1, 2], vec![-3, 0, 0, 4], vec![2, 2, 2], vec![-4, 4]] {
            let want = argmax_over_domain(g.iter(), |x| q.slice_eval(&data, &[], x)).unwrap().unwrap();
            let got = q.slice_argmax(&data, &[], &g).unwrap();
            assert_eq!(got.0, want.0, "data {data:?}");
            assert_eq!(got.1, want.1);
        }
    }

    #[test]
    fn identical_values_recovered() {
        let q = Median { bound: 20 };
        let data = vec![5i64; 200];
        let privacy = PrivacyParams::pure(1e6).unwrap();
        let config = OptimizerConfig::new(0.1, 0.05, privacy, 20).unwrap();
        let mut rng = RandomSource::new(3);
        let dom = q.domain(&[]).unwrap();
        let step = ip_concave(&data, &q, &[], &dom, &config, &mut rng).unwrap();
        assert_eq!(step.chosen, BoundedRational::from(5));
    }

    #[test]
    fn high_dim_d1_matches_ip_concave() {
        let q = Median { bound: 30 };
        let data: Vec<i64> = (0..400).map(|i| (i * 7919 % 41) - 20).collect();
        let config = OptimizerConfig::new(0.1, 0.05, PrivacyParams::pure(1.0).unwrap(), 40).unwrap();
        let dom = q.domain(&[]).unwrap();
        for seed in 0..5 {
            let a = ip_concave(&data, &q, &[], &dom, &config, &mut RandomSource::new(seed)).unwrap();
            let b = ip_concave_high_dim(&data, &q, &config, &mut RandomSource::new(seed)).unwrap();
            assert_eq!(b.point, vec![a.chosen.clone()]);
            assert_eq!(b.trace[0], a);
        }
    }

    #[test]
    fn fixed_partition_must_match() {
        let q = Median { bound: 5 };
        let data = vec![1i64; 40];
        let mut config = OptimizerConfig::new(0.1, 0.05, PrivacyParams::pure(1.0).unwrap(), 4).unwrap();
        config.fixed_partition = Some(Partition::contiguous(&(0..40).collect::<Vec<_>>(), 5).unwrap());
        let mut rng = RandomSource::new(0);
        assert!(ip_concave_high_dim(&data, &q, &config, &mut rng).is_err());
    }
}
