use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;
use std::fmt;
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::numtheory::{floor_sum, Sieve};
use super::{cmp_fractions, BoundedRational};
use crate::dp_core::RandomSource;
use crate::error::{Error, Result};

/// Largest denominator bound a grid may carry.
pub const MAX_GRID_DENOMINATOR: u64 = 1 << 22;
const MAX_GRID_NUMERATOR: u64 = 1 << 60;

static SIEVE: RwLock<Option<Arc<Sieve>>> = RwLock::new(None);
static SIEVE_LIMIT: RwLock<usize> = RwLock::new(0);

fn shared_sieve(limit: usize) -> Arc<Sieve> {
    {
        let have = *SIEVE_LIMIT.read().unwrap();
        if have >= limit {
            if let Some(s) = SIEVE.read().unwrap().as_ref() {
                return s.clone();
            }
        }
    }
    let mut lim = SIEVE_LIMIT.write().unwrap();
    let mut slot = SIEVE.write().unwrap();
    if *lim < limit || slot.is_none() {
        let size = limit.next_power_of_two().max(1024);
        *slot = Some(Arc::new(Sieve::new(size)));
        *lim = size;
    }
    slot.as_ref().unwrap().clone()
}

#[derive(Serialize, Deserialize)]
struct GridBounds {
    s_max: u64,
    t_max: u64,
}

/// The set `{ s/t : |s| <= s_max, 1 <= t <= t_max }` of distinct rationals.
///
/// Grids are never materialized: membership, rank counting, successor search
/// and uniform sampling inside an interval all run in time polynomial in
/// `t_max` (counting in `O(sqrt(t_max) + sqrt(s_max))` floor sums).
#[derive(Clone, Serialize, Deserialize)]
#[serde(into = "GridBounds", try_from = "GridBounds")]
pub struct RationalGrid {
    s_max: u64,
    t_max: u64,
    sieve: Arc<Sieve>,
}

impl From<RationalGrid> for GridBounds {
    fn from(g: RationalGrid) -> Self {
        GridBounds {
            s_max: g.s_max,
            t_max: g.t_max,
        }
    }
}

impl TryFrom<GridBounds> for RationalGrid {
    type Error = Error;
    fn try_from(b: GridBounds) -> Result<Self> {
        RationalGrid::new(b.s_max, b.t_max)
    }
}

impl PartialEq for RationalGrid {
    fn eq(&self, other: &Self) -> bool {
        self.s_max == other.s_max && self.t_max == other.t_max
    }
}

impl Eq for RationalGrid {}

impl fmt::Debug for RationalGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalGrid(|s|<={}, t<={})", self.s_max, self.t_max)
    }
}

/// One endpoint of an interval: the value and whether it is excluded.
pub(crate) type Endpoint<'a> = Option<(&'a BoundedRational, bool)>;

impl RationalGrid {
    pub fn new(s_max: u64, t_max: u64) -> Result<Self> {
        if s_max < 1 || t_max < 1 {
            return Err(Error::param("grid bounds must be at least 1"));
        }
        if t_max > MAX_GRID_DENOMINATOR || s_max > MAX_GRID_NUMERATOR {
            return Err(Error::param(format!(
                "grid bounds (s_max={s_max}, t_max={t_max}) exceed the supported size; shrink them with grid overrides"
            )));
        }
        Ok(Self {
            s_max,
            t_max,
            sieve: shared_sieve(t_max as usize),
        })
    }

    /// Integer grid `{-x, ..., x}`.
    pub fn integers(x: u64) -> Result<Self> {
        Self::new(x, 1)
    }

    pub fn s_max(&self) -> u64 {
        self.s_max
    }

    pub fn t_max(&self) -> u64 {
        self.t_max
    }

    pub fn min(&self) -> BoundedRational {
        BoundedRational::from_integer(-(self.s_max as i128))
    }

    pub fn max(&self) -> BoundedRational {
        BoundedRational::from_integer(self.s_max as i128)
    }

    pub fn contains(&self, x: &BoundedRational) -> bool {
        match (x.denom().to_u64(), x.numer().magnitude().to_u64()) {
            (Some(t), Some(s)) => t <= self.t_max && s <= self.s_max,
            _ => false,
        }
    }

    /// Number of distinct values in the grid.
    pub fn size(&self) -> u128 {
        self.mobius_sum(|t, s| t * (2 * s + 1))
    }

    /// Number of grid values `<= x`.
    pub fn count_le(&self, x: &BoundedRational) -> u128 {
        let s = self.s_max as i128;
        if x >= &BoundedRational::from_integer(s) {
            return self.size();
        }
        if x < &BoundedRational::from_integer(-s) {
            return 0;
        }
        let small = x
            .to_i128_pair()
            .filter(|&(_, b)| b as u128 <= self.t_max as u128);
        match small {
            None => match self.floor(x, false) {
                Some(y) => self.count_le(&y),
                None => 0,
            },
            Some((a, b)) if a >= 0 => self.mobius_sum(|t, s| pairs_le(a as u128, b as u128, t, s)),
            Some(_) => {
                let neg = -x;
                self.size() - self.count_lt(&neg)
            }
        }
    }

    /// Number of grid values `< x`.
    pub fn count_lt(&self, x: &BoundedRational) -> u128 {
        self.count_le(x) - self.contains(x) as u128
    }

    /// Number of grid values inside the interval with the given endpoints
    /// (`None` means unbounded).
    pub(crate) fn count_in(&self, lo: Endpoint<'_>, hi: Endpoint<'_>) -> u128 {
        let upper = match hi {
            None => self.size(),
            Some((x, true)) => self.count_lt(x),
            Some((x, false)) => self.count_le(x),
        };
        let lower = match lo {
            None => 0,
            Some((x, true)) => self.count_le(x),
            Some((x, false)) => self.count_lt(x),
        };
        upper.saturating_sub(lower)
    }

    fn mobius_sum(&self, pairs: impl Fn(u128, u128) -> u128) -> u128 {
        let (t_max, s_max) = (self.t_max as usize, self.s_max as usize);
        let mut total: i128 = 0;
        let mut e = 1usize;
        while e <= t_max {
            let tq = t_max / e;
            let sq = s_max / e;
            let mut next = t_max / tq;
            if sq > 0 {
                next = next.min(s_max / sq);
            }
            let mu = self.sieve.mertens(next) - self.sieve.mertens(e - 1);
            if mu != 0 {
                total += mu as i128 * pairs(tq as u128, sq as u128) as i128;
            }
            e = next + 1;
        }
        debug_assert!(total >= 0);
        total as u128
    }

    /// `floor(x*q)` clamped to `[-s_max-1, s_max+1]`.
    fn scaled_floor(&self, x: &BoundedRational, small: Option<(i128, i128)>, q: i128) -> i128 {
        let bound = self.s_max as i128 + 1;
        let raw = small
            .and_then(|(a, b)| a.checked_mul(q).map(|aq| Integer::div_floor(&aq, &b)))
            .unwrap_or_else(|| clamp_big(x.floor_times(q), bound));
        raw.clamp(-bound, bound)
    }

    fn scaled_ceil(&self, x: &BoundedRational, small: Option<(i128, i128)>, q: i128) -> i128 {
        let bound = self.s_max as i128 + 1;
        let raw = small
            .and_then(|(a, b)| a.checked_mul(q).map(|aq| Integer::div_ceil(&aq, &b)))
            .unwrap_or_else(|| clamp_big(x.ceil_times(q), bound));
        raw.clamp(-bound, bound)
    }

    /// Smallest grid value `>= x` (or `> x` when `strict`).
    pub fn ceil(&self, x: &BoundedRational, strict: bool) -> Option<BoundedRational> {
        let s = self.s_max as i128;
        let small = x.to_i128_pair();
        let mut best: Option<(i128, i128)> = None;
        for q in 1..=self.t_max as i128 {
            let mut p = if strict {
                self.scaled_floor(x, small.clone(), q) + 1
            } else {
                self.scaled_ceil(x, small.clone(), q)
            };
            p = p.max(-s);
            if p > s {
                continue;
            }
            if best.map_or(true, |(bp, bq)| cmp_fractions(p, q, bp, bq) == Ordering::Less) {
                best = Some((p, q));
            }
        }
        best.map(|(p, q)| BoundedRational::new(p, q))
    }

    /// Largest grid value `<= x` (or `< x` when `strict`).
    pub fn floor(&self, x: &BoundedRational, strict: bool) -> Option<BoundedRational> {
        let neg = -x;
        self.ceil(&neg, strict).map(|v| -v)
    }

    /// Uniform draw among the grid values inside an interval; `None` if the
    /// interval holds no grid value.
    pub(crate) fn sample_in(&self, lo: Endpoint<'_>, hi: Endpoint<'_>, rng: &mut RandomSource) -> Option<BoundedRational> {
        let s = self.s_max as i128;
        let lo_small = lo.and_then(|(x, _)| x.to_i128_pair());
        let hi_small = hi.and_then(|(x, _)| x.to_i128_pair());
        let mut ranges = Vec::with_capacity(self.t_max as usize);
        let mut total: i128 = 0;
        for q in 1..=self.t_max as i128 {
            let l = match lo {
                None => -s,
                Some((x, true)) => self.scaled_floor(x, lo_small, q) + 1,
                Some((x, false)) => self.scaled_ceil(x, lo_small, q),
            }
            .max(-s);
            let u = match hi {
                None => s,
                Some((x, true)) => self.scaled_ceil(x, hi_small, q) - 1,
                Some((x, false)) => self.scaled_floor(x, hi_small, q),
            }
            .min(s);
            let c = self.sieve.coprime_in_range(q as usize, l, u);
            total += c;
            ranges.push((l, u, total));
        }
        if total == 0 {
            return None;
        }
        let pick = rng.below_u128(total as u128) as i128;
        let idx = ranges.partition_point(|&(_, _, cum)| cum <= pick);
        let (l, u, _) = ranges[idx];
        let q = idx as i128 + 1;
        let width = (u - l + 1) as u128;
        loop {
            let p = l + rng.below_u128(width) as i128;
            if p.unsigned_abs().gcd(&(q as u128)) == 1 {
                return Some(BoundedRational::new(p, q));
            }
        }
    }

    /// Values in increasing order.
    pub fn iter(&self) -> GridIter {
        GridIter::new(self.s_max as i128, self.t_max as i128)
    }

    /// Value of the given rank (0-based); walks the enumeration.
    pub fn element_at_rank(&self, rank: u128) -> Option<BoundedRational> {
        let r = usize::try_from(rank).ok()?;
        self.iter().nth(r)
    }
}

fn clamp_big(v: BigInt, bound: i128) -> i128 {
    v.to_i128().unwrap_or(if v.sign() == num_bigint::Sign::Minus { -bound } else { bound })
}

/// Number of pairs `(p, q)` with `1 <= q <= t`, `|p| <= s`, `p/q <= a/b` (`a >= 0`).
fn pairs_le(a: u128, b: u128, t: u128, s: u128) -> u128 {
    let q0 = if a == 0 { t } else { t.min(((s + 1) * b - 1) / a) };
    t * (s + 1) + floor_sum(q0 + 1, b, a, 0) + (t - q0) * s
}

#[derive(PartialEq, Eq)]
struct Head {
    p: i128,
    q: i128,
}

impl Ord for Head {
    fn cmp(&self, other: &Self) -> Ordering {
        cmp_fractions(self.p, self.q, other.p, other.q)
    }
}

impl PartialOrd for Head {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Increasing, duplicate-free enumeration of a [`RationalGrid`], produced by a
/// k-way merge of the per-denominator streams of reduced fractions.
pub struct GridIter {
    s: i128,
    heap: BinaryHeap<Reverse<Head>>,
}

impl GridIter {
    fn new(s: i128, t: i128) -> Self {
        let mut heap = BinaryHeap::with_capacity(t as usize);
        for q in 1..=t {
            if let Some(p) = next_coprime(-s, s, q) {
                heap.push(Reverse(Head { p, q }));
            }
        }
        Self { s, heap }
    }
}

fn next_coprime(from: i128, s: i128, q: i128) -> Option<i128> {
    (from..=s).find(|p| p.unsigned_abs().gcd(&(q as u128)) == 1)
}

impl Iterator for GridIter {
    type Item = BoundedRational;

    fn next(&mut self) -> Option<BoundedRational> {
        let Reverse(Head { p, q }) = self.heap.pop()?;
        if let Some(np) = next_coprime(p + 1, self.s, q) {
            self.heap.push(Reverse(Head { p: np, q }));
        }
        Some(BoundedRational::new(p, q))
    }
}
