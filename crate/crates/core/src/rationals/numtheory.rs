//! Counting helpers for reduced fractions.

/// `sum_{i=0}^{n-1} floor((a*i + b) / m)` for non-negative `a`, `b` and `m > 0`.
pub fn floor_sum(mut n: u128, mut m: u128, mut a: u128, mut b: u128) -> u128 {
    assert!(m > 0);
    let mut ans = 0u128;
    loop {
        if n == 0 {
            return ans;
        }
        if a >= m {
            ans += (n * (n - 1) / 2) * (a / m);
            a %= m;
        }
        if b >= m {
            ans += n * (b / m);
            b %= m;
        }
        let y_max = a * n + b;
        if y_max < m {
            return ans;
        }
        n = y_max / m;
        b = y_max % m;
        std::mem::swap(&mut m, &mut a);
    }
}

/// Smallest-prime-factor table with Mertens prefix sums up to `limit`.
#[derive(Debug)]
pub(crate) struct Sieve {
    spf: Vec<u32>,
    mertens: Vec<i32>,
}

impl Sieve {
    pub(crate) fn new(limit: usize) -> Self {
        let n = limit.max(1);
        let mut spf = vec![0u32; n + 1];
        let mut primes: Vec<u32> = Vec::new();
        let mut mu = vec![0i8; n + 1];
        mu[1] = 1;
        for i in 2..=n {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u32);
                mu[i] = -1;
            }
            for &p in &primes {
                let ip = i * p as usize;
                if p > spf[i] || ip > n {
                    break;
                }
                spf[ip] = p;
                mu[ip] = if p == spf[i] { 0 } else { -mu[i] };
            }
        }
        let mut mertens = vec![0i32; n + 1];
        for i in 1..=n {
            mertens[i] = mertens[i - 1] + mu[i] as i32;
        }
        Self { spf, mertens }
    }

    pub(crate) fn mertens(&self, x: usize) -> i64 {
        self.mertens[x] as i64
    }

    /// Distinct prime factors of `q`.
    pub(crate) fn prime_factors(&self, mut q: usize) -> Vec<usize> {
        let mut out = Vec::new();
        while q > 1 {
            let p = self.spf[q] as usize;
            out.push(p);
            while q % p == 0 {
                q /= p;
            }
        }
        out
    }

    /// Number of integers `p` in `[lo, hi]` with `gcd(|p|, q) = 1`.
    pub(crate) fn coprime_in_range(&self, q: usize, lo: i128, hi: i128) -> i128 {
        if lo > hi {
            return 0;
        }
        let primes = self.prime_factors(q);
        let mut total = 0i128;
        // inclusion-exclusion over squarefree divisors of q
        for mask in 0u32..(1u32 << primes.len()) {
            let mut d = 1i128;
            for (k, &p) in primes.iter().enumerate() {
                if mask & (1 << k) != 0 {
                    d *= p as i128;
                }
            }
            let cnt = hi.div_euclid(d) - (lo - 1).div_euclid(d);
            if mask.count_ones() % 2 == 0 {
                total += cnt;
            } else {
                total -= cnt;
            }
        }
        total
    }
}
