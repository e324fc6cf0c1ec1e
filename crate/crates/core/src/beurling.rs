//! Generalized (Beurling) prime systems.
//!
//! A system assigns to every rational prime `p` a real `beta(p) > 1` and is
//! extended completely multiplicatively, `beta(p1^m1 ... pk^mk) = prod beta(pi)^mi`.
//! Built-in systems are the classical one (`beta(n) = n`), the ideal norms of a
//! quadratic field matched to the rational primes in ascending order, and custom
//! tables read from text.

use std::path::Path;
use std::sync::Arc;

use crate::arith::character::pow_mod;
use crate::arith::{CoefficientFunction, PrimeTable};
use crate::dirichlet::{eval_dirichlet_truncated, ComplexPoint, SeriesValue};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
enum PrimeBeta {
    Classical,
    /// `beta` of the k-th prime (zero based); primes past the end are uncovered.
    Table(Vec<f64>),
}

#[derive(Debug, Clone)]
pub struct BeurlingSystem {
    label: String,
    beta_min: f64,
    degree: f64,
    abscissa: f64,
    table: Arc<PrimeTable>,
    source: PrimeBeta,
}

/// Splitting type of a rational prime in a quadratic field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Splitting {
    Split,
    Inert,
    Ramified,
}

/// A quadratic field `Q(sqrt d)` and the bound on the ideal norms to enumerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadraticFieldSpec {
    d: i64,
    norm_limit: u64,
}

fn is_squarefree(d: i64) -> bool {
    let m = d.unsigned_abs();
    let mut p = 2u64;
    while p * p <= m {
        if m.is_multiple_of(p * p) {
            return false;
        }
        p += 1;
    }
    true
}

impl QuadraticFieldSpec {
    pub fn new(d: i64, norm_limit: u64) -> Result<Self> {
        if d == 0 || d == 1 || !is_squarefree(d) {
            return Err(Error::InvalidArgument(format!(
                "d = {d} must be squarefree and different from 0 and 1"
            )));
        }
        if norm_limit < 2 {
            return Err(Error::InvalidArgument(
                "norm limit must be at least 2".into(),
            ));
        }
        Ok(QuadraticFieldSpec { d, norm_limit })
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn norm_limit(&self) -> u64 {
        self.norm_limit
    }

    /// Field discriminant: `d` when `d = 1 mod 4`, else `4d`.
    pub fn discriminant(&self) -> i64 {
        if self.d.rem_euclid(4) == 1 {
            self.d
        } else {
            4 * self.d
        }
    }

    pub fn splitting(&self, p: u64) -> Splitting {
        let disc = self.discriminant();
        if disc.rem_euclid(p as i64) == 0 {
            return Splitting::Ramified;
        }
        if p == 2 {
            // 2 is unramified only for d = 1 mod 4
            return if disc.rem_euclid(8) == 1 {
                Splitting::Split
            } else {
                Splitting::Inert
            };
        }
        let residue = disc.rem_euclid(p as i64) as u64;
        if pow_mod(residue, (p - 1) / 2, p) == 1 {
            Splitting::Split
        } else {
            Splitting::Inert
        }
    }

    /// All prime-ideal norms `<= norm_limit`, ascending, split primes listed twice.
    pub fn sorted_norms(&self) -> Result<Vec<u64>> {
        let sieve = PrimeTable::new(self.norm_limit)?;
        let mut norms = Vec::new();
        for &p in sieve.primes() {
            match self.splitting(p) {
                Splitting::Split => {
                    norms.push(p);
                    norms.push(p);
                }
                Splitting::Ramified => norms.push(p),
                Splitting::Inert => {
                    if p.saturating_mul(p) <= self.norm_limit {
                        norms.push(p * p);
                    }
                }
            }
        }
        norms.sort_unstable();
        Ok(norms)
    }
}

impl BeurlingSystem {
    /// `beta(n) = n`.
    pub fn classical(table: Arc<PrimeTable>) -> Self {
        BeurlingSystem {
            label: "classical".into(),
            beta_min: 2.0,
            degree: 1.0,
            abscissa: 1.0,
            table,
            source: PrimeBeta::Classical,
        }
    }

    /// The k-th smallest prime-ideal norm is assigned to the k-th rational prime.
    pub fn quadratic_field(spec: QuadraticFieldSpec, table: Arc<PrimeTable>) -> Result<Self> {
        let norms = spec.sorted_norms()?;
        let covered = norms.len().min(table.primes().len());
        if covered == 0 {
            return Err(Error::LimitExhausted(format!(
                "no ideal norms up to {}",
                spec.norm_limit
            )));
        }
        let betas: Vec<f64> = norms[..covered].iter().map(|&n| n as f64).collect();
        let system = BeurlingSystem {
            label: format!("quadratic:{}", spec.d),
            beta_min: betas[0],
            degree: 2.0,
            abscissa: 1.0,
            table,
            source: PrimeBeta::Table(betas),
        };
        system.validate()?;
        Ok(system)
    }

    /// A finite table of prime values; `degree` bounds `beta(p) >= p^(1/degree)`.
    pub fn custom(
        label: impl Into<String>,
        beta_min: f64,
        degree: f64,
        prime_betas: &[(u64, f64)],
        table: Arc<PrimeTable>,
    ) -> Result<Self> {
        if !(beta_min > 1.0 && beta_min.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "beta0 = {beta_min} must exceed 1"
            )));
        }
        if !(degree >= 1.0 && degree.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "degree = {degree} must be at least 1"
            )));
        }
        let mut sorted = prime_betas.to_vec();
        sorted.sort_by_key(|&(p, _)| p);
        let mut betas = Vec::with_capacity(sorted.len());
        for (k, &(p, beta)) in sorted.iter().enumerate() {
            if table.primes().get(k) != Some(&p) {
                return Err(Error::InvalidArgument(format!(
                    "custom table must list consecutive primes from 2 within the sieve; entry {} is {p}",
                    k + 1
                )));
            }
            betas.push(beta);
        }
        if betas.is_empty() {
            return Err(Error::InvalidArgument("custom table is empty".into()));
        }
        let system = BeurlingSystem {
            label: label.into(),
            beta_min,
            degree,
            abscissa: degree,
            table,
            source: PrimeBeta::Table(betas),
        };
        system.validate()?;
        Ok(system)
    }

    /// Parses a header `#beta0=<v> degree=<D>` followed by `p beta_p` lines.
    pub fn parse_custom(text: &str, table: Arc<PrimeTable>) -> Result<Self> {
        let mut header: Option<(f64, f64)> = None;
        let mut entries = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let parse_err = |message: String| Error::Parse {
                line: i + 1,
                message,
            };
            if let Some(rest) = line.strip_prefix("#beta0=") {
                let mut fields = rest.split_whitespace();
                let beta0 = fields
                    .next()
                    .and_then(|v| v.parse::<f64>().ok())
                    .ok_or_else(|| parse_err("bad beta0 in header".into()))?;
                let degree = fields
                    .next()
                    .and_then(|v| v.strip_prefix("degree="))
                    .and_then(|v| v.parse::<f64>().ok())
                    .ok_or_else(|| parse_err("header needs `degree=<D>`".into()))?;
                header = Some((beta0, degree));
                continue;
            }
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 2 {
                return Err(parse_err(format!("expected `p beta_p`, got `{line}`")));
            }
            let p: u64 = fields[0]
                .parse()
                .map_err(|_| parse_err(format!("bad prime `{}`", fields[0])))?;
            let beta: f64 = fields[1]
                .parse()
                .map_err(|_| parse_err(format!("bad value `{}`", fields[1])))?;
            entries.push((p, beta));
        }
        let (beta0, degree) = header.ok_or(Error::Parse {
            line: 1,
            message: "missing `#beta0=<v> degree=<D>` header".into(),
        })?;
        Self::custom("custom", beta0, degree, &entries, table)
    }

    pub fn load_custom(path: impl AsRef<Path>, table: Arc<PrimeTable>) -> Result<Self> {
        Self::parse_custom(&std::fs::read_to_string(path)?, table)
    }

    /// Every covered prime satisfies `beta(p) >= max(beta0, p^(1/D))` and `beta(p) > 1`.
    fn validate(&self) -> Result<()> {
        if let PrimeBeta::Table(betas) = &self.source {
            for (&p, &beta) in self.table.primes().iter().zip(betas) {
                let floor = (p as f64).powf(1.0 / self.degree);
                if !(beta.is_finite()
                    && beta > 1.0
                    && beta >= self.beta_min
                    && beta >= floor * (1.0 - 1e-12))
                {
                    return Err(Error::Precondition(format!(
                        "beta({p}) = {beta} violates beta >= max(beta0 = {}, p^(1/{}) = {floor})",
                        self.beta_min, self.degree
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// `beta0`, a lower bound for every `beta(p)`.
    pub fn beta_min(&self) -> f64 {
        self.beta_min
    }

    /// `D` with `beta(n) >= n^(1/D)`.
    pub fn degree(&self) -> f64 {
        self.degree
    }

    /// Upper bound for the abscissa where `Z(sigma)` diverges.
    pub fn abscissa(&self) -> f64 {
        self.abscissa
    }

    pub fn prime_table(&self) -> &PrimeTable {
        &self.table
    }

    pub fn shared_prime_table(&self) -> Arc<PrimeTable> {
        Arc::clone(&self.table)
    }

    /// Largest `n` whose prime factors all have a defined `beta`.
    pub fn coverage(&self) -> u64 {
        match &self.source {
            PrimeBeta::Classical => self.table.limit(),
            PrimeBeta::Table(betas) => {
                let primes = self.table.primes();
                match primes.get(betas.len()) {
                    Some(&next) => next - 1,
                    None => self.table.limit(),
                }
            }
        }
    }

    pub fn prime_beta(&self, p: u64) -> Result<f64> {
        match &self.source {
            PrimeBeta::Classical => Ok(p as f64),
            PrimeBeta::Table(betas) => {
                let idx = self.table.prime_index(p).ok_or(Error::OutOfRange {
                    value: p,
                    limit: self.table.limit(),
                })?;
                betas.get(idx).copied().ok_or(Error::OutOfRange {
                    value: p,
                    limit: self.coverage(),
                })
            }
        }
    }

    /// `beta(n) = prod beta(p)^mu`.
    pub fn beta_value(&self, n: u64) -> Result<f64> {
        let f = self.table.factorize(n)?;
        let mut acc = 1.0;
        for (p, e) in f.factors {
            acc *= self.prime_beta(p)?.powi(e as i32);
        }
        Ok(acc)
    }

    /// `log beta(0..=n_max)` built additively from the least-prime-factor table.
    pub fn log_beta_up_to(&self, n_max: u64) -> Result<Vec<f64>> {
        if n_max > self.coverage() {
            return Err(Error::OutOfRange {
                value: n_max,
                limit: self.coverage(),
            });
        }
        let len = n_max as usize + 1;
        let primes = self.table.primes_up_to(n_max);
        let mut log_prime = Vec::with_capacity(primes.len());
        for &p in primes {
            log_prime.push(self.prime_beta(p)?.ln());
        }
        let mut out = vec![0.0f64; len.max(2)];
        for n in 2..len {
            let p = self.table.smallest_factor(n as u64).unwrap_or(n as u64);
            let idx = self.table.prime_index(p).unwrap_or(0);
            out[n] = log_prime[idx] + out[n / p as usize];
        }
        out.truncate(len);
        Ok(out)
    }

    /// `Lambda_beta(n)`: `log beta(p)` when `n = p^k`, else 0.
    pub fn von_mangoldt(&self, n: u64) -> Result<f64> {
        if n < 2 {
            return Ok(0.0);
        }
        match self.table.factorize(n)?.prime_power() {
            Some((p, _)) => Ok(self.prime_beta(p)?.ln()),
            None => Ok(0.0),
        }
    }
}

pub fn classical_system(table: Arc<PrimeTable>) -> BeurlingSystem {
    BeurlingSystem::classical(table)
}

pub fn quadratic_field_system(
    spec: QuadraticFieldSpec,
    table: Arc<PrimeTable>,
) -> Result<BeurlingSystem> {
    BeurlingSystem::quadratic_field(spec, table)
}

pub fn beta_value(system: &BeurlingSystem, n: u64) -> Result<f64> {
    system.beta_value(n)
}

pub fn beur_von_mangoldt(system: &BeurlingSystem, n: u64) -> Result<f64> {
    system.von_mangoldt(n)
}

/// `|sum_{d | n} Lambda_beta(d) - log beta(n)|` with `beta(n)` formed as a product.
pub fn beur_mangoldt_identity_residual(system: &BeurlingSystem, n: u64) -> Result<f64> {
    let divisors = system.prime_table().factorize(n)?.divisors();
    let mut sum = 0.0;
    for d in divisors {
        sum += system.von_mangoldt(d)?;
    }
    Ok((sum - system.beta_value(n)?.ln()).abs())
}

/// `Z(s) = sum_{n <= N} beta(n)^(-s)` with a tail bound.
pub fn zeta_system_eval(
    system: &BeurlingSystem,
    s: ComplexPoint,
    terms: u64,
) -> Result<SeriesValue> {
    eval_dirichlet_truncated(&CoefficientFunction::Unit, system, s, terms)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DivergenceProbe {
    pub sigmas: Vec<f64>,
    pub values: Vec<f64>,
    pub strictly_increasing: bool,
}

/// `sum_{p <= N} beta(p)^(-sigma)` along a list of exponents decreasing toward the abscissa.
pub fn prime_sum_divergence_probe(
    system: &BeurlingSystem,
    sigmas: &[f64],
    terms: u64,
) -> Result<DivergenceProbe> {
    if terms > system.coverage() {
        return Err(Error::OutOfRange {
            value: terms,
            limit: system.coverage(),
        });
    }
    let mut log_betas = Vec::new();
    for &p in system.prime_table().primes_up_to(terms) {
        log_betas.push(system.prime_beta(p)?.ln());
    }
    let mut values = Vec::with_capacity(sigmas.len());
    for &sigma in sigmas {
        if !(sigma > system.abscissa()) {
            return Err(Error::Window {
                point: sigma,
                bound: system.abscissa(),
            });
        }
        values.push(log_betas.iter().map(|lb| (-sigma * lb).exp()).sum());
    }
    let strictly_increasing = values.windows(2).all(|w| w[1] > w[0]);
    Ok(DivergenceProbe {
        sigmas: sigmas.to_vec(),
        values,
        strictly_increasing,
    })
}
