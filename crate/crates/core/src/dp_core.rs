//! Privacy primitives: seeded randomness, Laplace noise, the exponential
//! mechanism and advanced-composition accounting.
//!
//! Everything here is generic over the floating-point scalar. Noise is drawn
//! with ordinary floating-point arithmetic and is not hardened against
//! side channels or floating-point attacks; this is a research artifact.

use std::fmt;

use num_traits::{Float, FromPrimitive};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Floating-point scalar used by the privacy primitives (`f32` or `f64`).
pub trait DpFloat: Float + FromPrimitive + fmt::Debug + fmt::Display + Send + Sync + 'static {}

impl DpFloat for f32 {}
impl DpFloat for f64 {}

#[inline]
fn lit<F: DpFloat>(x: f64) -> F {
    F::from_f64(x).expect("literal representable in scalar type")
}

/// An `(epsilon, delta)` privacy budget.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrivacyParams<F> {
    pub epsilon: F,
    pub delta: F,
}

impl<F: DpFloat> PrivacyParams<F> {
    pub fn new(epsilon: F, delta: F) -> Result<Self> {
        if !(epsilon > F::zero()) || !epsilon.is_finite() {
            return Err(Error::param(format!("epsilon must be positive and finite, got {epsilon}")));
        }
        if !(delta >= F::zero() && delta < F::one()) {
            return Err(Error::param(format!("delta must lie in [0,1), got {delta}")));
        }
        Ok(Self { epsilon, delta })
    }

    /// Pure `epsilon`-DP.
    pub fn pure(epsilon: F) -> Result<Self> {
        Self::new(epsilon, F::zero())
    }

    /// Componentwise `self <= other`, up to a relative slack of a few ulps.
    pub fn within(&self, other: &Self) -> bool {
        let slack = lit::<F>(1e-9);
        self.epsilon <= other.epsilon * (F::one() + slack) && self.delta <= other.delta * (F::one() + slack) + slack * slack
    }
}

/// Seeded random source. Identical seeds yield identical draw sequences.
///
/// Each source is meant to be owned by a single execution strand; use
/// [`RandomSource::derive`] to obtain independent per-trial streams.
#[derive(Debug, Clone)]
pub struct RandomSource {
    seed: u64,
    rng: ChaCha8Rng,
}

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Fresh source seeded with `seed ^ index`.
    pub fn derive(&self, index: u64) -> Self {
        Self::new(self.seed ^ index)
    }

    /// Uniform draw from `[0, 1)`.
    pub fn uniform<F: DpFloat>(&mut self) -> F {
        lit(self.rng.gen::<f64>())
    }

    /// Uniform integer in `[0, n)`.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "empty range");
        self.rng.gen_range(0..n)
    }

    /// Uniform `u128` in `[0, n)`.
    pub fn below_u128(&mut self, n: u128) -> u128 {
        assert!(n > 0, "empty range");
        self.rng.gen_range(0..n)
    }
}

impl RngCore for RandomSource {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.rng.fill_bytes(dest)
    }

    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> std::result::Result<(), rand::Error> {
        self.rng.try_fill_bytes(dest)
    }
}

/// Draw from Laplace(0, `scale`) by inverting the CDF of a uniform draw.
pub fn laplace_sample<F: DpFloat>(scale: F, rng: &mut RandomSource) -> Result<F> {
    if !(scale > F::zero()) || !scale.is_finite() {
        return Err(Error::param(format!("laplace scale must be positive, got {scale}")));
    }
    let half = lit::<F>(0.5);
    // u in (-1/2, 1/2); the endpoint -1/2 would map to -inf
    let mut u = rng.uniform::<F>() - half;
    while u == -half {
        u = rng.uniform::<F>() - half;
    }
    let two = lit::<F>(2.0);
    let mag = -(F::one() - two * u.abs()).ln() * scale;
    Ok(if u < F::zero() { -mag } else { mag })
}

/// Normalized selection probabilities of the exponential mechanism with
/// per-candidate log multiplicities.
///
/// Candidate `i` is drawn with probability proportional to
/// `exp(log_mult_i + epsilon * score_i / (2 * sensitivity))`.
pub fn exp_mechanism_probabilities<F: DpFloat>(
    scores: &[F],
    log_mult: Option<&[F]>,
    sensitivity: F,
    epsilon: F,
) -> Result<Vec<F>> {
    let logits = logits(scores, log_mult, sensitivity, epsilon)?;
    let top = logits.iter().copied().fold(F::neg_infinity(), F::max);
    let weights: Vec<F> = logits.iter().map(|&l| (l - top).exp()).collect();
    let total = weights.iter().copied().fold(F::zero(), |a, b| a + b);
    Ok(weights.into_iter().map(|w| w / total).collect())
}

fn logits<F: DpFloat>(scores: &[F], log_mult: Option<&[F]>, sensitivity: F, epsilon: F) -> Result<Vec<F>> {
    if scores.is_empty() {
        return Err(Error::param("exponential mechanism needs at least one candidate"));
    }
    if !(sensitivity > F::zero()) || !(epsilon > F::zero()) {
        return Err(Error::param("sensitivity and epsilon must be positive"));
    }
    if let Some(m) = log_mult {
        if m.len() != scores.len() {
            return Err(Error::param("multiplicity vector length mismatch"));
        }
    }
    if scores.iter().any(|s| !s.is_finite()) {
        return Err(Error::param("scores must be finite"));
    }
    let factor = epsilon / (lit::<F>(2.0) * sensitivity);
    Ok(scores
        .iter()
        .enumerate()
        .map(|(i, &s)| {
            let base = factor * s;
            match log_mult {
                Some(m) => base + m[i],
                None => base,
            }
        })
        .collect())
}

/// Exponential mechanism: returns the index of the selected candidate.
pub fn exp_mechanism<F: DpFloat>(scores: &[F], sensitivity: F, epsilon: F, rng: &mut RandomSource) -> Result<usize> {
    exp_mechanism_grouped(scores, None, sensitivity, epsilon, rng)
}

/// Exponential mechanism over groups of equally scored candidates.
///
/// `log_mult[i]` is the natural log of the number of candidates in group `i`
/// (`-inf` for empty groups). Returns the selected group; the caller picks a
/// uniform member of it.
pub fn exp_mechanism_grouped<F: DpFloat>(
    scores: &[F],
    log_mult: Option<&[F]>,
    sensitivity: F,
    epsilon: F,
    rng: &mut RandomSource,
) -> Result<usize> {
    let logits = logits(scores, log_mult, sensitivity, epsilon)?;
    let top = logits.iter().copied().fold(F::neg_infinity(), F::max);
    if !top.is_finite() {
        return Err(Error::param("every candidate group is empty"));
    }
    let weights: Vec<F> = logits.iter().map(|&l| (l - top).exp()).collect();
    let total = weights.iter().copied().fold(F::zero(), |a, b| a + b);
    let target = rng.uniform::<F>() * total;
    let mut acc = F::zero();
    let mut last_positive = 0;
    for (i, &w) in weights.iter().enumerate() {
        if w > F::zero() {
            last_positive = i;
        }
        acc = acc + w;
        if target < acc {
            return Ok(i);
        }
    }
    Ok(last_positive)
}

/// k-fold advanced composition: `(sqrt(2k ln(1/delta')) * epsilon, k delta + delta')`.
pub fn advanced_composition<F: DpFloat>(epsilon: F, delta: F, k: usize, delta_prime: F) -> Result<(F, F)> {
    if k == 0 {
        return Err(Error::param("composition needs k >= 1"));
    }
    if !(epsilon > F::zero()) {
        return Err(Error::param("epsilon must be positive"));
    }
    if !(delta_prime > F::zero() && delta_prime < F::one()) {
        return Err(Error::param("delta' must lie in (0,1)"));
    }
    let k_f: F = lit(k as f64);
    let eps_total = (lit::<F>(2.0) * k_f * (F::one() / delta_prime).ln()).sqrt() * epsilon;
    Ok((eps_total, k_f * delta + delta_prime))
}

/// Per-step budget such that `k` steps composed with `delta' = delta/2`
/// stay within `(epsilon, delta)`.
///
/// Returns the per-step parameters and the `delta'` to compose with.
pub fn inverse_composition<F: DpFloat>(epsilon: F, delta: F, k: usize) -> Result<(PrivacyParams<F>, F)> {
    if k == 0 {
        return Err(Error::param("composition needs k >= 1"));
    }
    if !(epsilon > F::zero() && delta > F::zero() && delta < F::one()) {
        return Err(Error::param("targets must satisfy epsilon > 0 and delta in (0,1)"));
    }
    let two = lit::<F>(2.0);
    let k_f: F = lit(k as f64);
    let step_eps = epsilon / (two * k_f * (two / delta).ln()).sqrt();
    let step_delta = delta / (two * k_f);
    Ok((PrivacyParams::new(step_eps, step_delta)?, delta / two))
}

/// One recorded privacy expenditure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LedgerEntry<F> {
    pub epsilon: F,
    pub delta: F,
    pub label: String,
}

/// Record of mechanism invocations against one dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompositionLedger<F> {
    pub entries: Vec<LedgerEntry<F>>,
}

impl<F: DpFloat> Default for CompositionLedger<F> {
    fn default() -> Self {
        Self { entries: Vec::new() }
    }
}

impl<F: DpFloat> CompositionLedger<F> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&mut self, params: PrivacyParams<F>, label: impl Into<String>) {
        self.entries.push(LedgerEntry {
            epsilon: params.epsilon,
            delta: params.delta,
            label: label.into(),
        });
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Basic composition: sums of epsilons and deltas.
    pub fn basic_total(&self) -> (F, F) {
        self.entries
            .iter()
            .fold((F::zero(), F::zero()), |(e, d), x| (e + x.epsilon, d + x.delta))
    }

    /// Advanced composition of all entries, each bounded by the largest
    /// recorded `(epsilon, delta)`.
    pub fn advanced_total(&self, delta_prime: F) -> Result<(F, F)> {
        if self.entries.is_empty() {
            return Ok((F::zero(), F::zero()));
        }
        let eps = self.entries.iter().map(|e| e.epsilon).fold(F::zero(), F::max);
        let delta = self.entries.iter().map(|e| e.delta).fold(F::zero(), F::max);
        advanced_composition(eps, delta, self.entries.len(), delta_prime)
    }

    /// The tighter of basic and advanced composition.
    pub fn total(&self, delta_prime: F) -> Result<PrivacyParams<F>> {
        let (be, bd) = self.basic_total();
        let (ae, ad) = self.advanced_total(delta_prime)?;
        // both bounds are valid; report the one with the smaller epsilon
        let (e, d) = if ae < be { (ae, ad) } else { (be, bd) };
        Ok(PrivacyParams { epsilon: e, delta: d })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_params() {
        assert!(PrivacyParams::<f64>::new(0.0, 0.1).is_err());
        assert!(PrivacyParams::<f64>::new(1.0, 1.0).is_err());
        assert!(PrivacyParams::<f64>::new(1.0, -0.1).is_err());
        assert!(PrivacyParams::<f64>::new(1.0, 0.0).is_ok());
        let mut rng = RandomSource::new(1);
        assert!(laplace_sample(0.0f64, &mut rng).is_err());
        assert!(laplace_sample(-1.0f64, &mut rng).is_err());
        assert!(exp_mechanism::<f64>(&[], 1.0, 1.0, &mut rng).is_err());
        assert!(exp_mechanism(&[f64::NAN], 1.0, 1.0, &mut rng).is_err());
    }

    #[test]
    fn advanced_composition_examples() {
        let dp = (-2.0f64).exp();
        let (e, d) = advanced_composition(0.1, 0.0, 8, dp).unwrap();
        assert!((e - 32f64.sqrt() * 0.1).abs() < 1e-12);
        assert!((e - 0.56569).abs() < 1e-5);
        assert!((d - dp).abs() < 1e-15);

        let (e1, d1) = advanced_composition(0.3, 0.01, 1, 0.05).unwrap();
        assert!((e1 - (2.0 * (1.0f64 / 0.05).ln()).sqrt() * 0.3).abs() < 1e-12);
        assert!((d1 - 0.06).abs() < 1e-12);

        let (ed, dd) = advanced_composition(0.5, 1e-4, 3, 1e-3).unwrap();
        assert!((ed - 0.5 * (6.0 * (1e3f64).ln()).sqrt()).abs() < 1e-12);
        assert!((dd - (3e-4 + 1e-3)).abs() < 1e-15);
    }

    #[test]
    fn inverse_composition_examples() {
        let (p, dp) = inverse_composition(1.0f64, 0.1, 1).unwrap();
        assert!((p.epsilon - 1.0 / (2.0 * 20f64.ln()).sqrt()).abs() < 1e-12);
        assert!((p.epsilon - 0.4087).abs() < 5e-4);
        assert!((dp - 0.05).abs() < 1e-15);
        let (p3, _) = inverse_composition(1.0f64, 1e-6, 3).unwrap();
        assert!((p3.epsilon - 0.1072).abs() < 1e-4);
    }

    #[test]
    fn ledger_totals() {
        let mut ledger = CompositionLedger::<f64>::new();
        let step = PrivacyParams::new(0.2, 1e-6).unwrap();
        for i in 0..4 {
            ledger.record(step, format!("step {i}"));
        }
        let (be, bd) = ledger.basic_total();
        assert!((be - 0.8).abs() < 1e-12 && (bd - 4e-6).abs() < 1e-18);
        let (ae, ad) = ledger.advanced_total(1e-3).unwrap();
        assert!((ae - 0.2 * (8.0 * 1e3f64.ln()).sqrt()).abs() < 1e-12);
        assert!((ad - (4e-6 + 1e-3)).abs() < 1e-15);
        let t = ledger.total(1e-3).unwrap();
        assert!((t.epsilon - 0.8).abs() < 1e-12);
    }

    #[test]
    fn same_seed_same_draws() {
        let mut a = RandomSource::new(42);
        let mut b = RandomSource::new(42);
        for _ in 0..100 {
            assert_eq!(
                laplace_sample(1.5f64, &mut a).unwrap().to_bits(),
                laplace_sample(1.5f64, &mut b).unwrap().to_bits()
            );
        }
        let scores = [0.0, 1.0, 2.0, 0.5];
        for _ in 0..100 {
            assert_eq!(
                exp_mechanism(&scores, 1.0, 1.0, &mut a).unwrap(),
                exp_mechanism(&scores, 1.0, 1.0, &mut b).unwrap()
            );
        }
    }

    #[test]
    fn single_precision_works() {
        let mut rng = RandomSource::new(3);
        let x: f32 = laplace_sample(2.0f32, &mut rng).unwrap();
        assert!(x.is_finite());
        let probs = exp_mechanism_probabilities(&[1.0f32, 0.0], None, 1.0, 2.0).unwrap();
        let e = std::f32::consts::E;
        assert!((probs[0] - e / (1.0 + e)).abs() < 1e-6);
        let p = PrivacyParams::<f32>::new(0.5, 0.0).unwrap();
        assert!(p.within(&PrivacyParams::new(0.5, 0.01).unwrap()));
    }
}
