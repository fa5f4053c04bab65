//! The private interior point interface and its exponential-mechanism
//! realization over enumerable ordered domains.
//!
//! The baseline solver runs the exponential mechanism with the score
//! `min(#{v <= x}, #{v >= x})` over the whole domain. The score is constant
//! between consecutive distinct input values, so the mechanism is sampled
//! exactly without enumerating the domain: each gap is weighted by its number
//! of domain elements, and a uniform element of the selected gap is returned.
//! Its sample requirement is `O(log|X| / epsilon)` rather than the
//! `O(log* |X|)` of the best known solvers; [`n_ip`] reports the bound in force.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::dp_core::{exp_mechanism, exp_mechanism_grouped, RandomSource};
use crate::error::{Error, Result};
use crate::rationals::{BoundedRational, RationalGrid};
use crate::PrivacyParams;

/// Interval endpoint: the value and whether it is excluded.
pub type Endpoint<'a, E> = Option<(&'a E, bool)>;

/// A finite, totally ordered, enumerable candidate set.
pub trait OrderedDomain {
    type Elem: Ord + Clone;

    fn size(&self) -> u128;

    fn contains(&self, x: &Self::Elem) -> bool;

    /// Number of elements inside an interval.
    fn count_in(&self, lo: Endpoint<'_, Self::Elem>, hi: Endpoint<'_, Self::Elem>) -> u128;

    /// Uniform element inside an interval, `None` when it is empty.
    fn sample_in(
        &self,
        lo: Endpoint<'_, Self::Elem>,
        hi: Endpoint<'_, Self::Elem>,
        rng: &mut RandomSource,
    ) -> Option<Self::Elem>;

    /// Elements in increasing order.
    fn elements(&self) -> Box<dyn Iterator<Item = Self::Elem> + '_>;

    /// Number of elements strictly below `x`.
    fn rank_of(&self, x: &Self::Elem) -> u128 {
        self.count_in(None, Some((x, true)))
    }

    fn element_at_rank(&self, rank: u128) -> Option<Self::Elem> {
        self.elements().nth(usize::try_from(rank).ok()?)
    }
}

impl OrderedDomain for RationalGrid {
    type Elem = BoundedRational;

    fn size(&self) -> u128 {
        RationalGrid::size(self)
    }

    fn contains(&self, x: &BoundedRational) -> bool {
        RationalGrid::contains(self, x)
    }

    fn count_in(&self, lo: Endpoint<'_, BoundedRational>, hi: Endpoint<'_, BoundedRational>) -> u128 {
        RationalGrid::count_in(self, lo, hi)
    }

    fn sample_in(
        &self,
        lo: Endpoint<'_, BoundedRational>,
        hi: Endpoint<'_, BoundedRational>,
        rng: &mut RandomSource,
    ) -> Option<BoundedRational> {
        RationalGrid::sample_in(self, lo, hi, rng)
    }

    fn elements(&self) -> Box<dyn Iterator<Item = BoundedRational> + '_> {
        Box::new(self.iter())
    }

    fn element_at_rank(&self, rank: u128) -> Option<BoundedRational> {
        RationalGrid::element_at_rank(self, rank)
    }
}

/// The integers `lo..=hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegerRange {
    pub lo: i64,
    pub hi: i64,
}

impl IntegerRange {
    pub fn new(lo: i64, hi: i64) -> Result<Self> {
        if lo > hi {
            return Err(Error::param("empty integer range"));
        }
        Ok(Self { lo, hi })
    }

    fn bounds(&self, lo: Endpoint<'_, i64>, hi: Endpoint<'_, i64>) -> (i64, i64) {
        let l = match lo {
            None => self.lo,
            Some((&x, open)) => x.saturating_add(open as i64).max(self.lo),
        };
        let h = match hi {
            None => self.hi,
            Some((&x, open)) => x.saturating_sub(open as i64).min(self.hi),
        };
        (l, h)
    }
}

impl OrderedDomain for IntegerRange {
    type Elem = i64;

    fn size(&self) -> u128 {
        (self.hi as i128 - self.lo as i128 + 1) as u128
    }

    fn contains(&self, x: &i64) -> bool {
        (self.lo..=self.hi).contains(x)
    }

    fn count_in(&self, lo: Endpoint<'_, i64>, hi: Endpoint<'_, i64>) -> u128 {
        let (l, h) = self.bounds(lo, hi);
        if l > h {
            0
        } else {
            (h as i128 - l as i128 + 1) as u128
        }
    }

    fn sample_in(&self, lo: Endpoint<'_, i64>, hi: Endpoint<'_, i64>, rng: &mut RandomSource) -> Option<i64> {
        let (l, h) = self.bounds(lo, hi);
        if l > h {
            return None;
        }
        let width = (h as i128 - l as i128 + 1) as u128;
        Some((l as i128 + rng.below_u128(width) as i128) as i64)
    }

    fn elements(&self) -> Box<dyn Iterator<Item = i64> + '_> {
        Box::new(self.lo..=self.hi)
    }

    fn element_at_rank(&self, rank: u128) -> Option<i64> {
        (rank < self.size()).then(|| (self.lo as i128 + rank as i128) as i64)
    }
}

/// `min(#{v <= x}, #{v >= x})` over the multiset `values`.
pub fn q_ip_score<E: Ord>(values: &[E], x: &E) -> usize {
    let le = values.iter().filter(|v| *v <= x).count();
    let ge = values.iter().filter(|v| *v >= x).count();
    le.min(ge)
}

/// Which interior point algorithm realizes the interface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IpSolverKind {
    /// Exponential mechanism over the domain with the interior point score.
    #[default]
    ExpMechBaseline,
}

/// Solver choice plus its privacy and confidence parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IpSolverSpec {
    pub kind: IpSolverKind,
    pub privacy: PrivacyParams,
    pub beta: f64,
}

impl IpSolverSpec {
    pub fn baseline(privacy: PrivacyParams, beta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta < 1.0) {
            return Err(Error::param(format!("beta must lie in (0,1), got {beta}")));
        }
        Ok(Self {
            kind: IpSolverKind::ExpMechBaseline,
            privacy,
            beta,
        })
    }

    /// Samples this solver needs over a domain of the given size.
    pub fn required_samples(&self, domain_size: u128) -> usize {
        n_ip(domain_size, self.beta, self.privacy.epsilon, self.privacy.delta)
    }
}

/// Sample requirement of the baseline solver: `ceil((4/eps) ln(|X|/beta)) + 2`.
///
/// With this many values the median scores at least `(2/eps) ln(|X|/beta) + 1`,
/// so the mechanism returns a positive-score (interior) element with
/// probability at least `1 - beta`. `delta` is unused by the pure-DP baseline.
pub fn n_ip(domain_size: u128, beta: f64, epsilon: f64, _delta: f64) -> usize {
    let size = (domain_size.max(1)) as f64;
    ((4.0 / epsilon) * (size / beta).ln()).max(0.0).ceil() as usize + 2
}

struct Gap<'a, E> {
    lo: Endpoint<'a, E>,
    hi: Endpoint<'a, E>,
    score: usize,
}

/// Private interior point of `values` over `domain`.
///
/// Fails with [`Error::InsufficientSamples`] when fewer values than the
/// solver's requirement are supplied.
pub fn private_interior_point<D: OrderedDomain>(
    values: &[D::Elem],
    domain: &D,
    spec: &IpSolverSpec,
    rng: &mut RandomSource,
) -> Result<D::Elem> {
    let needed = spec.required_samples(domain.size());
    if values.len() < needed {
        return Err(Error::InsufficientSamples {
            needed,
            got: values.len(),
            detail: format!("interior point over a domain of {} elements", domain.size()),
        });
    }
    private_interior_point_unchecked(values, domain, spec.privacy.epsilon, rng)
}

/// The baseline mechanism without the sample-size gate.
pub(crate) fn private_interior_point_unchecked<D: OrderedDomain>(
    values: &[D::Elem],
    domain: &D,
    epsilon: f64,
    rng: &mut RandomSource,
) -> Result<D::Elem> {
    if values.is_empty() {
        return Err(Error::param("interior point of an empty multiset"));
    }
    if let Some(bad) = values.iter().position(|v| !domain.contains(v)) {
        return Err(Error::param(format!("value #{bad} lies outside the domain")));
    }
    let mut sorted: Vec<&D::Elem> = values.iter().collect();
    sorted.sort();
    let t = sorted.len();
    let gaps = gaps(&sorted, t);
    let scores: Vec<f64> = gaps.iter().map(|g| g.score as f64).collect();
    let log_mult: Vec<f64> = gaps
        .iter()
        .map(|g| {
            let c = domain.count_in(g.lo, g.hi);
            if c == 0 {
                f64::NEG_INFINITY
            } else {
                (c as f64).ln()
            }
        })
        .collect();
    let pick = exp_mechanism_grouped(&scores, Some(&log_mult), 1.0, epsilon, rng)?;
    let g = &gaps[pick];
    domain
        .sample_in(g.lo, g.hi, rng)
        .ok_or_else(|| Error::param("selected an empty gap"))
}

/// Pieces on which the score is constant: open gaps and the distinct values.
fn gaps<'a, E: Ord>(sorted: &[&'a E], t: usize) -> Vec<Gap<'a, E>> {
    let mut out = Vec::with_capacity(2 * sorted.len() + 1);
    let mut below = 0usize; // values strictly below the current piece
    let mut prev: Option<&'a E> = None;
    let mut i = 0;
    while i < t {
        let v = sorted[i];
        let mut j = i;
        while j < t && sorted[j].cmp(v) == Ordering::Equal {
            j += 1;
        }
        // open gap (prev, v): #<= = below, #>= = t - below
        out.push(Gap {
            lo: prev.map(|p| (p, true)),
            hi: Some((v, true)),
            score: below.min(t - below),
        });
        // the point v itself
        out.push(Gap {
            lo: Some((v, false)),
            hi: Some((v, false)),
            score: j.min(t - below),
        });
        below = j;
        prev = Some(v);
        i = j;
    }
    out.push(Gap {
        lo: prev.map(|p| (p, true)),
        hi: None,
        score: 0,
    });
    out
}

/// Reference realization that enumerates the domain; identical output
/// distribution to [`private_interior_point`], usable only on small domains.
pub fn private_interior_point_enumerated<D: OrderedDomain>(
    values: &[D::Elem],
    domain: &D,
    epsilon: f64,
    rng: &mut RandomSource,
) -> Result<D::Elem> {
    let elems: Vec<D::Elem> = domain.elements().collect();
    let scores: Vec<f64> = elems.iter().map(|x| q_ip_score(values, x) as f64).collect();
    let i = exp_mechanism(&scores, 1.0, epsilon, rng)?;
    Ok(elems[i].clone())
}

/// Exact output distribution of the baseline over a small domain, in domain order.
pub fn interior_point_distribution<D: OrderedDomain>(values: &[D::Elem], domain: &D, epsilon: f64) -> Result<Vec<(D::Elem, f64)>> {
    let elems: Vec<D::Elem> = domain.elements().collect();
    let scores: Vec<f64> = elems.iter().map(|x| q_ip_score(values, x) as f64).collect();
    let probs = crate::dp_core::exp_mechanism_probabilities(&scores, None, 1.0, epsilon)?;
    Ok(elems.into_iter().zip(probs).collect())
}

/// True when `p` lies between the smallest and largest value.
pub fn is_interior<E: Ord>(values: &[E], p: &E) -> bool {
    match (values.iter().min(), values.iter().max()) {
        (Some(lo), Some(hi)) => lo <= p && p <= hi,
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn score_examples() {
        let v = [1, 3, 5];
        assert_eq!(q_ip_score(&v, &3), 2);
        assert_eq!(q_ip_score(&v, &0), 0);
        assert_eq!(q_ip_score(&v, &5), 1);
    }

    #[test]
    fn n_ip_examples() {
        assert_eq!(n_ip(65537, 0.05, 1.0, 0.0), 59);
        let a = n_ip(65537, 0.05, 1.0, 0.0) as f64;
        let b = n_ip(65537, 0.05, 2.0, 0.0) as f64;
        assert!((b - 2.0) / (a - 2.0) > 0.45 && (b - 2.0) / (a - 2.0) < 0.55);
        assert!(n_ip(1, 0.05, 1.0, 0.0) <= 16);
    }

    #[test]
    fn rejects_too_few_values() {
        let dom = IntegerRange::new(0, 1 << 16).unwrap();
        let spec = IpSolverSpec::baseline(PrivacyParams::pure(1.0).unwrap(), 0.05).unwrap();
        let mut rng = RandomSource::new(0);
        match private_interior_point(&[1i64, 2, 3], &dom, &spec, &mut rng) {
            Err(Error::InsufficientSamples { needed, got, .. }) => {
                assert_eq!((needed, got), (59, 3));
            }
            other => panic!("unexpected {other:?}"),
        }
        let outside = vec![1i64 << 20; 100];
        assert!(private_interior_point(&outside, &dom, &spec, &mut rng).is_err());
    }

    #[test]
    fn constant_input_large_epsilon() {
        let dom = IntegerRange::new(-50, 50).unwrap();
        let spec = IpSolverSpec::baseline(PrivacyParams::pure(1e6).unwrap(), 0.05).unwrap();
        let mut rng = RandomSource::new(5);
        let values = vec![7i64; 10];
        for _ in 0..50 {
            assert_eq!(private_interior_point(&values, &dom, &spec, &mut rng).unwrap(), 7);
        }
    }

    #[test]
    fn grouped_sampling_matches_enumerated_distribution() {
        let dom = RationalGrid::new(3, 3).unwrap();
        let values: Vec<BoundedRational> = ["-1", "1/3", "1/3", "2"].iter().map(|s| s.parse().unwrap()).collect();
        let eps = 1.3;
        let exact = interior_point_distribution(&values, &dom, eps).unwrap();
        let mut rng = RandomSource::new(77);
        let draws = 60_000;
        let mut counts = std::collections::BTreeMap::new();
        for _ in 0..draws {
            let x = private_interior_point_unchecked(&values, &dom, eps, &mut rng).unwrap();
            *counts.entry(x).or_insert(0usize) += 1;
        }
        for (x, p) in &exact {
            let got = *counts.get(x).unwrap_or(&0) as f64 / draws as f64;
            let sd = (p * (1.0 - p) / draws as f64).sqrt();
            assert!((got - p).abs() <= 4.0 * sd + 1e-4, "{x}: got {got}, want {p}");
        }
    }

    #[test]
    fn integer_range_domain_ops() {
        let d = IntegerRange::new(-3, 4).unwrap();
        assert_eq!(d.size(), 8);
        assert_eq!(d.count_in(Some((&-3, true)), Some((&4, false))), 7);
        assert_eq!(d.rank_of(&0), 3);
        assert_eq!(d.element_at_rank(3), Some(0));
        assert_eq!(d.element_at_rank(8), None);
        let mut rng = RandomSource::new(1);
        assert_eq!(d.sample_in(Some((&1, true)), Some((&2, true)), &mut rng), None);
        assert_eq!(d.sample_in(Some((&1, false)), Some((&1, false)), &mut rng), Some(1));
    }
}
