use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;

use super::character::{character_mod, DirichletCharacter};
use super::sieve::{is_prime_trial, PrimeTable};
use crate::error::{Error, Result};

/// Slack allowed on `|a(p)| <= 1` for values read from text.
const MODULUS_SLACK: f64 = 1e-12;

/// Values of a completely multiplicative function on a finite set of primes.
#[derive(Debug, Clone, PartialEq)]
pub struct PrimeValueTable {
    values: BTreeMap<u64, Complex64>,
}

impl PrimeValueTable {
    pub fn new(entries: impl IntoIterator<Item = (u64, Complex64)>) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (p, z) in entries {
            Self::check_entry(p, z)?;
            values.insert(p, z);
        }
        Ok(PrimeValueTable { values })
    }

    fn check_entry(p: u64, z: Complex64) -> Result<()> {
        if !is_prime_trial(p) {
            return Err(Error::InvalidArgument(format!("{p} is not prime")));
        }
        if !(z.re.is_finite() && z.im.is_finite()) || z.norm() > 1.0 + MODULUS_SLACK {
            return Err(Error::InvalidArgument(format!(
                "prime value at {p} has modulus {} > 1",
                z.norm()
            )));
        }
        Ok(())
    }

    /// Parses `p re im` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parse_err = |message: String| Error::Parse {
                line: i + 1,
                message,
            };
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(parse_err(format!("expected `p re im`, got `{line}`")));
            }
            let p: u64 = fields[0]
                .parse()
                .map_err(|_| parse_err(format!("bad prime `{}`", fields[0])))?;
            let re: f64 = fields[1]
                .parse()
                .map_err(|_| parse_err(format!("bad real part `{}`", fields[1])))?;
            let im: f64 = fields[2]
                .parse()
                .map_err(|_| parse_err(format!("bad imaginary part `{}`", fields[2])))?;
            let z = Complex64::new(re, im);
            Self::check_entry(p, z).map_err(|e| parse_err(e.to_string()))?;
            values.insert(p, z);
        }
        Ok(PrimeValueTable { values })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn get(&self, p: u64) -> Option<Complex64> {
        self.values.get(&p).copied()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// A bounded completely multiplicative arithmetic function, given by its prime values.
#[derive(Debug, Clone)]
pub enum CoefficientFunction {
    /// `a(n) = 1`.
    Unit,
    /// `a(n) = (-1)^Omega(n)`.
    Liouville,
    Character(Arc<DirichletCharacter>),
    /// `a(n) = n^(-i t0)`.
    VerticalTwist(f64),
    Custom(Arc<PrimeValueTable>),
}

impl fmt::Display for CoefficientFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefficientFunction::Unit => write!(f, "unit"),
            CoefficientFunction::Liouville => write!(f, "liouville"),
            CoefficientFunction::Character(c) => {
                write!(f, "character:{}:{}", c.modulus(), c.index())
            }
            CoefficientFunction::VerticalTwist(t0) => write!(f, "twist:{t0}"),
            CoefficientFunction::Custom(t) => write!(f, "custom({} primes)", t.len()),
        }
    }
}

impl CoefficientFunction {
    pub fn character(q: u64, index: usize) -> Result<Self> {
        Ok(CoefficientFunction::Character(Arc::new(character_mod(
            q, index,
        )?)))
    }

    pub fn custom(table: PrimeValueTable) -> Self {
        CoefficientFunction::Custom(Arc::new(table))
    }

    /// The value `a(p)` at a prime.
    pub fn prime_value(&self, p: u64) -> Result<Complex64> {
        match self {
            CoefficientFunction::Unit => Ok(Complex64::new(1.0, 0.0)),
            CoefficientFunction::Liouville => Ok(Complex64::new(-1.0, 0.0)),
            CoefficientFunction::Character(chi) => Ok(chi.value(p)),
            CoefficientFunction::VerticalTwist(t0) => {
                Ok(Complex64::from_polar(1.0, -t0 * (p as f64).ln()))
            }
            CoefficientFunction::Custom(table) => {
                table.get(p).ok_or(Error::IncompleteDefinition(p))
            }
        }
    }

    /// True when every value `a(n)` is real.
    pub fn is_real(&self) -> bool {
        match self {
            CoefficientFunction::Unit | CoefficientFunction::Liouville => true,
            CoefficientFunction::Character(chi) => chi.is_real(),
            CoefficientFunction::VerticalTwist(t0) => *t0 == 0.0,
            CoefficientFunction::Custom(table) => table.values.values().all(|z| z.im == 0.0),
        }
    }

    /// `a(n) = prod a(p)^mu` over the factorization of `n`.
    pub fn value(&self, table: &PrimeTable, n: u64) -> Result<Complex64> {
        let f = table.factorize_any(n)?;
        let mut acc = Complex64::new(1.0, 0.0);
        for (p, e) in f.factors {
            acc *= self.prime_value(p)?.powu(e);
        }
        Ok(acc)
    }

    /// `a(0..=n_max)` via `a(n) = a(p) a(n/p)` with `p` the least prime factor; `a(0)` is 0.
    pub fn values_up_to(&self, table: &PrimeTable, n_max: u64) -> Result<Vec<Complex64>> {
        if n_max > table.limit() {
            return Err(Error::OutOfRange {
                value: n_max,
                limit: table.limit(),
            });
        }
        let len = n_max as usize + 1;
        let mut out = vec![Complex64::new(0.0, 0.0); len.max(2)];
        out[1] = Complex64::new(1.0, 0.0);
        let mut prime_vals: Vec<Complex64> = Vec::new();
        for (k, &p) in table.primes_up_to(n_max).iter().enumerate() {
            debug_assert_eq!(k, prime_vals.len());
            prime_vals.push(self.prime_value(p)?);
        }
        for n in 2..len {
            let p = table.smallest_factor(n as u64).unwrap_or(n as u64);
            let idx = table.prime_index(p).unwrap_or(0);
            out[n] = prime_vals[idx] * out[n / p as usize];
        }
        out.truncate(len);
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extension_examples() {
        let t = PrimeTable::new(1000).unwrap();
        let twist = CoefficientFunction::VerticalTwist(0.0);
        assert_eq!(twist.value(&t, 100).unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(
            CoefficientFunction::Liouville.value(&t, 12).unwrap(),
            Complex64::new(-1.0, 0.0)
        );
        let custom = CoefficientFunction::custom(
            PrimeValueTable::new([(2, Complex64::new(0.0, 1.0))]).unwrap(),
        );
        assert_eq!(custom.value(&t, 8).unwrap(), Complex64::new(0.0, -1.0));
        assert_eq!(custom.value(&t, 6), Err(Error::IncompleteDefinition(3)));
    }

    #[test]
    fn bulk_values_agree_with_pointwise() {
        let t = PrimeTable::new(2000).unwrap();
        let fns = [
            CoefficientFunction::Unit,
            CoefficientFunction::Liouville,
            CoefficientFunction::character(12, 3).unwrap(),
            CoefficientFunction::VerticalTwist(14.1347),
        ];
        for a in &fns {
            let bulk = a.values_up_to(&t, 2000).unwrap();
            for n in 1..=2000u64 {
                let z = a.value(&t, n).unwrap();
                assert!((bulk[n as usize] - z).norm() < 1e-12, "{a} at {n}");
            }
        }
    }

    #[test]
    fn parses_prime_value_file() {
        let text = "# custom table\n2 0 1\n3 -0.5 0.5   # inline\n\n5 1 0\n";
        let table = PrimeValueTable::parse(text).unwrap();
        assert_eq!(table.len(), 3);
        assert_eq!(table.get(3), Some(Complex64::new(-0.5, 0.5)));
    }

    #[test]
    fn rejects_bad_prime_value_files() {
        assert!(matches!(
            PrimeValueTable::parse("4 1 0"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            PrimeValueTable::parse("2 1 0\n3 1 1"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(PrimeValueTable::parse("2 x 0").is_err());
        assert!(PrimeValueTable::parse("2 1").is_err());
    }

    #[test]
    fn realness() {
        assert!(CoefficientFunction::Unit.is_real());
        assert!(CoefficientFunction::character(4, 1).unwrap().is_real());
        assert!(!CoefficientFunction::character(5, 1).unwrap().is_real());
        assert!(!CoefficientFunction::VerticalTwist(1.0).is_real());
    }
}
