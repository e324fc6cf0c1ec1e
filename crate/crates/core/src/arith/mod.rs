//! Prime sieving, factorization and the classical arithmetic functions.

pub(crate) mod character;
mod coefficient;
mod sieve;

pub use character::{
    character_mod, characters_mod, root_of_unity, DirichletCharacter, MAX_CHARACTER_MODULUS,
};
pub use coefficient::{CoefficientFunction, PrimeValueTable};
pub use sieve::{Factorization, PrimeTable, DEFAULT_SIEVE_LIMIT};

use num_complex::Complex64;

use crate::error::Result;

/// Builds a [`PrimeTable`] for `0..=limit`.
pub fn sieve_primes(limit: u64) -> Result<PrimeTable> {
    PrimeTable::new(limit)
}

/// `Lambda(n)`: `log p` when `n = p^k`, else 0.
pub fn von_mangoldt(table: &PrimeTable, n: u64) -> f64 {
    if n < 2 {
        return 0.0;
    }
    match table.factorize_any(n).ok().and_then(|f| f.prime_power()) {
        Some((p, _)) => (p as f64).ln(),
        None => 0.0,
    }
}

/// `Omega(n)`, the number of prime factors counted with multiplicity.
pub fn big_omega(table: &PrimeTable, n: u64) -> u32 {
    table
        .factorize_any(n.max(1))
        .map(|f| f.big_omega())
        .unwrap_or(0)
}

/// `lambda(n) = (-1)^Omega(n)`.
pub fn liouville(table: &PrimeTable, n: u64) -> i8 {
    if big_omega(table, n).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

pub fn extend_completely_multiplicative(
    f: &CoefficientFunction,
    table: &PrimeTable,
    n: u64,
) -> Result<Complex64> {
    f.value(table, n)
}

/// `|sum_{d | n} Lambda(d) - log n|`, with the divisors enumerated explicitly.
pub fn mangoldt_divisor_identity_residual(table: &PrimeTable, n: u64) -> Result<f64> {
    let divisors = table.factorize_any(n)?.divisors();
    let sum: f64 = divisors.iter().map(|&d| von_mangoldt(table, d)).sum();
    Ok((sum - (n as f64).ln()).abs())
}
