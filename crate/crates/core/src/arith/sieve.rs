use crate::error::{Error, Result};

/// Default upper limit for sieves built by the CLI and the verification suites.
pub const DEFAULT_SIEVE_LIMIT: u64 = 1_000_000;

/// Primes up to `limit` together with a least-prime-factor table.
#[derive(Debug, Clone)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
    smallest_factor: Vec<u32>,
}

/// Prime factorization `n = p1^e1 * ... * pk^ek` with strictly increasing primes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub n: u64,
    pub factors: Vec<(u64, u32)>,
}

impl PrimeTable {
    /// Linear least-prime-factor sieve over `0..=limit`.
    pub fn new(limit: u64) -> Result<Self> {
        if limit < 2 {
            return Err(Error::InvalidArgument(format!(
                "sieve limit must be at least 2, got {limit}"
            )));
        }
        if limit > u32::MAX as u64 {
            return Err(Error::InvalidArgument(format!(
                "sieve limit {limit} exceeds the supported range"
            )));
        }
        let size = limit as usize + 1;
        let mut smallest_factor = vec![0u32; size];
        let mut primes: Vec<u64> = Vec::new();
        for n in 2..size {
            if smallest_factor[n] == 0 {
                smallest_factor[n] = n as u32;
                primes.push(n as u64);
            }
            let lp = smallest_factor[n] as u64;
            for &p in &primes {
                let m = p as usize * n;
                if p > lp || m >= size {
                    break;
                }
                smallest_factor[m] = p as u32;
            }
        }
        Ok(PrimeTable {
            limit,
            primes,
            smallest_factor,
        })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Primes `p <= bound` (bounded by the table limit).
    pub fn primes_up_to(&self, bound: u64) -> &[u64] {
        let end = self.primes.partition_point(|&p| p <= bound);
        &self.primes[..end]
    }

    /// Least prime factor of `n`, for `2 <= n <= limit`.
    pub fn smallest_factor(&self, n: u64) -> Option<u64> {
        if n < 2 || n > self.limit {
            return None;
        }
        Some(self.smallest_factor[n as usize] as u64)
    }

    pub fn is_prime(&self, n: u64) -> bool {
        n >= 2 && n <= self.limit && self.smallest_factor[n as usize] as u64 == n
    }

    /// Zero-based position of the prime `p` in the ascending prime list.
    pub fn prime_index(&self, p: u64) -> Option<usize> {
        self.primes.binary_search(&p).ok()
    }

    pub fn factorize(&self, n: u64) -> Result<Factorization> {
        if n == 0 {
            return Err(Error::InvalidArgument("cannot factor 0".into()));
        }
        if n > self.limit {
            return Err(Error::OutOfRange {
                value: n,
                limit: self.limit,
            });
        }
        let mut factors: Vec<(u64, u32)> = Vec::new();
        let mut m = n;
        while m > 1 {
            let p = self.smallest_factor[m as usize] as u64;
            let mut e = 0;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            factors.push((p, e));
        }
        Ok(Factorization { n, factors })
    }

    /// Factor `n`, falling back to trial division above the table limit.
    pub fn factorize_any(&self, n: u64) -> Result<Factorization> {
        if n <= self.limit {
            self.factorize(n)
        } else {
            Ok(factor_by_trial_division(n))
        }
    }
}

pub(crate) fn factor_by_trial_division(n: u64) -> Factorization {
    let mut factors = Vec::new();
    let mut m = n;
    let mut p = 2u64;
    while p.saturating_mul(p) <= m {
        if m.is_multiple_of(p) {
            let mut e = 0;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            factors.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        factors.push((m, 1));
    }
    Factorization { n, factors }
}

pub(crate) fn is_prime_trial(n: u64) -> bool {
    n >= 2 && factor_by_trial_division(n).factors == [(n, 1)]
}

impl Factorization {
    pub fn product(&self) -> u64 {
        self.factors.iter().map(|&(p, e)| p.pow(e)).product()
    }

    /// Number of prime factors counted with multiplicity.
    pub fn big_omega(&self) -> u32 {
        self.factors.iter().map(|&(_, e)| e).sum()
    }

    /// `(p, k)` when `n = p^k` with `k >= 1`.
    pub fn prime_power(&self) -> Option<(u64, u32)> {
        match self.factors.as_slice() {
            [(p, k)] => Some((*p, *k)),
            _ => None,
        }
    }

    /// All positive divisors in ascending order.
    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for &(p, e) in &self.factors {
            let len = divs.len();
            let mut pk = 1u64;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        divs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_primes(limit: u64) -> Vec<u64> {
        (2..=limit)
            .filter(|&n| (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0))
            .collect()
    }

    #[test]
    fn small_sieves() {
        assert_eq!(PrimeTable::new(10).unwrap().primes(), &[2, 3, 5, 7]);
        assert_eq!(PrimeTable::new(2).unwrap().primes(), &[2]);
        let t = PrimeTable::new(30).unwrap();
        assert_eq!(t.primes().len(), 10);
        assert_eq!(*t.primes().last().unwrap(), 29);
    }

    #[test]
    fn sieve_matches_trial_division() {
        let t = PrimeTable::new(5000).unwrap();
        assert_eq!(t.primes(), trial_primes(5000).as_slice());
        for n in 2..=5000u64 {
            let p = t.smallest_factor(n).unwrap();
            assert_eq!(n % p, 0);
            assert!(t.is_prime(p));
        }
        for &p in t.primes() {
            assert_eq!(t.smallest_factor(p), Some(p));
        }
    }

    #[test]
    fn rejects_tiny_limit() {
        assert!(matches!(PrimeTable::new(1), Err(Error::InvalidArgument(_))));
        assert!(matches!(PrimeTable::new(0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn factorize_examples() {
        let t = PrimeTable::new(1000).unwrap();
        assert_eq!(
            t.factorize(360).unwrap().factors,
            vec![(2, 3), (3, 2), (5, 1)]
        );
        assert!(t.factorize(1).unwrap().factors.is_empty());
        assert_eq!(t.factorize(97).unwrap().factors, vec![(97, 1)]);
        assert_eq!(
            t.factorize(1001),
            Err(Error::OutOfRange {
                value: 1001,
                limit: 1000
            })
        );
        assert_eq!(
            t.factorize_any(1001).unwrap().factors,
            vec![(7, 1), (11, 1), (13, 1)]
        );
    }

    #[test]
    fn factorization_invariants() {
        let t = PrimeTable::new(20_000).unwrap();
        for n in 1..=20_000u64 {
            let f = t.factorize(n).unwrap();
            assert_eq!(f.product(), n);
            assert!(f.factors.windows(2).all(|w| w[0].0 < w[1].0));
            assert_eq!(f.factors.is_empty(), n == 1);
        }
    }

    #[test]
    fn divisors_of_360() {
        let t = PrimeTable::new(1000).unwrap();
        let d = t.factorize(360).unwrap().divisors();
        assert_eq!(d.len(), 24);
        assert!(d.iter().all(|x| 360 % x == 0));
    }
}
