//! Dirichlet characters as dense value tables.
//!
//! The unit group `(Z/qZ)^*` is split into cyclic factors: one per odd prime
//! power (generated by a primitive root), and for the 2-part either nothing
//! (`2 || q`), a single factor of order 2 (`4 || q`), or the pair `<-1> x <5>`
//! (`8 | q`). A character is determined by an exponent tuple `(k_1, .., k_m)`
//! with `0 <= k_j < order_j`, and takes the value
//! `exp(2 pi i sum_j k_j l_j(r) / order_j)` on a unit `r` with discrete logs
//! `l_j(r)`. Index 0 is the principal character; the remaining indices follow
//! the lexicographic order of the exponent tuples.

use num_complex::Complex64;

use super::sieve::factor_by_trial_division;
use crate::error::{Error, Result};

/// Largest modulus for which value tables are built.
pub const MAX_CHARACTER_MODULUS: u64 = 1_000_000;

#[derive(Debug, Clone)]
pub struct DirichletCharacter {
    modulus: u64,
    index: usize,
    exponents: Vec<u64>,
    /// Exponent of the unit group; every angle below is a multiple of `1/order`.
    group_exponent: u64,
    /// `Some(k)` encodes `exp(2 pi i k / group_exponent)`, `None` a non-unit.
    angles: Vec<Option<u64>>,
    values: Vec<Complex64>,
}

#[derive(Debug, Clone)]
enum Factor {
    /// Cyclic factor of `(Z/mZ)^*` for `m = modulus` with a known generator.
    Cyclic {
        modulus: u64,
        order: u64,
        dlog: Vec<u32>,
    },
    /// The `<-1>` factor of `(Z/2^eZ)^*`, `e >= 3`.
    TwoSign,
    /// The `<5>` factor of `(Z/2^eZ)^*`, `e >= 3`.
    TwoFive {
        modulus: u64,
        order: u64,
        dlog: Vec<u32>,
    },
}

impl Factor {
    fn order(&self) -> u64 {
        match self {
            Factor::Cyclic { order, .. } | Factor::TwoFive { order, .. } => *order,
            Factor::TwoSign => 2,
        }
    }

    fn log(&self, r: u64) -> u64 {
        match self {
            Factor::Cyclic { modulus, dlog, .. } => dlog[(r % modulus) as usize] as u64,
            Factor::TwoSign => {
                if r % 4 == 3 {
                    1
                } else {
                    0
                }
            }
            Factor::TwoFive { modulus, dlog, .. } => {
                let m = r % modulus;
                let m = if m % 4 == 3 { modulus - m } else { m };
                dlog[m as usize] as u64
            }
        }
    }
}

/// Cyclic decomposition of `(Z/qZ)^*`.
#[derive(Debug, Clone)]
struct UnitGroup {
    modulus: u64,
    factors: Vec<Factor>,
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

fn primitive_root_mod_prime(p: u64) -> u64 {
    let phi = p - 1;
    let divisors: Vec<u64> = factor_by_trial_division(phi)
        .factors
        .iter()
        .map(|&(r, _)| r)
        .collect();
    (2..p)
        .find(|&g| divisors.iter().all(|&r| pow_mod(g, phi / r, p) != 1))
        .unwrap_or(1)
}

/// Discrete-log table of the powers of `g` modulo `m`; non-powers map to `u32::MAX`.
fn dlog_table(g: u64, m: u64, order: u64) -> Vec<u32> {
    let mut table = vec![u32::MAX; m as usize];
    let mut x = 1 % m;
    for k in 0..order {
        table[x as usize] = k as u32;
        x = x * g % m;
    }
    table
}

impl UnitGroup {
    fn new(q: u64) -> Self {
        let mut factors = Vec::new();
        for (p, e) in factor_by_trial_division(q).factors {
            let pe = p.pow(e);
            if p == 2 {
                match e {
                    1 => {}
                    2 => factors.push(Factor::Cyclic {
                        modulus: 4,
                        order: 2,
                        dlog: dlog_table(3, 4, 2),
                    }),
                    _ => {
                        let order = pe / 4;
                        factors.push(Factor::TwoSign);
                        factors.push(Factor::TwoFive {
                            modulus: pe,
                            order,
                            dlog: dlog_table(5, pe, order),
                        });
                    }
                }
            } else {
                let mut g = primitive_root_mod_prime(p);
                // A primitive root mod p lifts to all p^e unless g^(p-1) = 1 mod p^2.
                if e > 1 && pow_mod(g, p - 1, p * p) == 1 {
                    g += p;
                }
                let order = pe / p * (p - 1);
                factors.push(Factor::Cyclic {
                    modulus: pe,
                    order,
                    dlog: dlog_table(g, pe, order),
                });
            }
        }
        UnitGroup {
            modulus: q,
            factors,
        }
    }

    fn size(&self) -> u64 {
        self.factors.iter().map(Factor::order).product()
    }

    fn exponent(&self) -> u64 {
        self.factors.iter().map(Factor::order).fold(1, lcm)
    }

    /// Mixed-radix digits of `index`, first factor most significant.
    fn exponents_of(&self, mut index: u64) -> Vec<u64> {
        let mut digits = vec![0u64; self.factors.len()];
        for (slot, f) in digits.iter_mut().zip(&self.factors).rev() {
            *slot = index % f.order();
            index /= f.order();
        }
        digits
    }

    fn character(&self, index: usize) -> DirichletCharacter {
        let q = self.modulus;
        let exponents = self.exponents_of(index as u64);
        let group_exponent = self.exponent();
        let angles: Vec<Option<u64>> = (0..q)
            .map(|r| {
                if gcd(r, q) != 1 {
                    return None;
                }
                let mut acc = 0u64;
                for (f, &k) in self.factors.iter().zip(&exponents) {
                    let scale = group_exponent / f.order();
                    acc = (acc + k * f.log(r) % f.order() * scale) % group_exponent;
                }
                Some(acc)
            })
            .collect();
        let values = angles
            .iter()
            .map(|a| match a {
                Some(k) => root_of_unity(*k, group_exponent),
                None => Complex64::new(0.0, 0.0),
            })
            .collect();
        DirichletCharacter {
            modulus: q,
            index,
            exponents,
            group_exponent,
            angles,
            values,
        }
    }
}

/// `exp(2 pi i num / den)`, exact on the real and imaginary axes.
pub fn root_of_unity(num: u64, den: u64) -> Complex64 {
    let g = gcd(num % den, den);
    let (n, d) = ((num % den) / g, den / g);
    match (n, d) {
        (0, _) => Complex64::new(1.0, 0.0),
        (1, 2) => Complex64::new(-1.0, 0.0),
        (1, 4) => Complex64::new(0.0, 1.0),
        (3, 4) => Complex64::new(0.0, -1.0),
        _ => {
            let theta = std::f64::consts::TAU * (n as f64) / (d as f64);
            Complex64::new(theta.cos(), theta.sin())
        }
    }
}

fn check_modulus(q: u64) -> Result<()> {
    if q < 2 {
        return Err(Error::InvalidArgument(format!(
            "character modulus must be at least 2, got {q}"
        )));
    }
    if q > MAX_CHARACTER_MODULUS {
        return Err(Error::OutOfRange {
            value: q,
            limit: MAX_CHARACTER_MODULUS,
        });
    }
    Ok(())
}

/// All `phi(q)` characters modulo `q`, principal first.
pub fn characters_mod(q: u64) -> Result<Vec<DirichletCharacter>> {
    check_modulus(q)?;
    let group = UnitGroup::new(q);
    Ok((0..group.size() as usize)
        .map(|i| group.character(i))
        .collect())
}

/// The character with the given index modulo `q`.
pub fn character_mod(q: u64, index: usize) -> Result<DirichletCharacter> {
    check_modulus(q)?;
    let group = UnitGroup::new(q);
    if index as u64 >= group.size() {
        return Err(Error::OutOfRange {
            value: index as u64,
            limit: group.size() - 1,
        });
    }
    Ok(group.character(index))
}

impl DirichletCharacter {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn is_principal(&self) -> bool {
        self.exponents.iter().all(|&k| k == 0)
    }

    /// True when every value is real (`+1`, `-1` or `0`).
    pub fn is_real(&self) -> bool {
        self.angles
            .iter()
            .flatten()
            .all(|&k| (2 * k) % self.group_exponent == 0)
    }

    /// Value table indexed by residue `0..q`.
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Exact angle of `chi(r)` as `k / group_exponent` turns, `None` off the unit group.
    pub fn angle(&self, r: u64) -> Option<(u64, u64)> {
        self.angles[(r % self.modulus) as usize].map(|k| (k, self.group_exponent))
    }

    pub fn value(&self, n: u64) -> Complex64 {
        self.values[(n % self.modulus) as usize]
    }
}
