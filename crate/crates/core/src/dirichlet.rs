//! Dirichlet series evaluation: truncated sums over Beurling systems,
//! Euler–Maclaurin continuation of the Riemann and Hurwitz zeta functions,
//! Dirichlet L-functions, and the logarithmic coefficient streams whose
//! exponential reproduces a series with completely multiplicative coefficients.

use num_complex::Complex64;

use crate::arith::{CoefficientFunction, DirichletCharacter};
use crate::beurling::BeurlingSystem;
use crate::error::{Error, Result};

/// Default number of explicitly summed terms before the Euler–Maclaurin tail.
pub const EM_DEFAULT_TERMS: u64 = 50;
/// Default number of Bernoulli correction terms.
pub const EM_DEFAULT_CORRECTIONS: usize = 6;

/// `B_2, B_4, ..., B_32`.
const BERNOULLI_EVEN: [f64; 16] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
    -7709321041217.0 / 510.0,
];

/// Largest supported number of Bernoulli corrections (one entry is kept for the error term).
pub const EM_MAX_CORRECTIONS: usize = BERNOULLI_EVEN.len() - 1;

/// A point `s = sigma + i t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexPoint {
    pub sigma: f64,
    pub t: f64,
}

impl ComplexPoint {
    pub fn new(sigma: f64, t: f64) -> Result<Self> {
        if !(sigma.is_finite() && t.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "non-finite point {sigma} + {t}i"
            )));
        }
        Ok(ComplexPoint { sigma, t })
    }

    pub fn real(sigma: f64) -> Self {
        ComplexPoint { sigma, t: 0.0 }
    }

    pub fn conj(self) -> Self {
        ComplexPoint {
            sigma: self.sigma,
            t: -self.t,
        }
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.sigma, self.t)
    }
}

impl From<Complex64> for ComplexPoint {
    fn from(z: Complex64) -> Self {
        ComplexPoint {
            sigma: z.re,
            t: z.im,
        }
    }
}

/// A computed value and how far it may be from the true one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: Complex64,
    /// Bound on `|value - exact|`; only an estimate when `rigorous` is false.
    pub error_bound: f64,
    pub rigorous: bool,
    pub terms_used: u64,
}

/// `sigma0 < sigma1 <= sigma2`: extension boundary, abscissa, safe summation boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvaluationWindow {
    pub sigma0: f64,
    pub sigma1: f64,
    pub sigma2: f64,
}

impl EvaluationWindow {
    pub fn new(sigma0: f64, sigma1: f64, sigma2: f64) -> Result<Self> {
        if !(sigma0 < sigma1 && sigma1 <= sigma2) {
            return Err(Error::InvalidArgument(format!(
                "window needs sigma0 < sigma1 <= sigma2, got ({sigma0}, {sigma1}, {sigma2})"
            )));
        }
        Ok(EvaluationWindow {
            sigma0,
            sigma1,
            sigma2,
        })
    }
}

/// `sum_{n > N} n^(-alpha) <= (N + 1/2)^(1 - alpha) / (alpha - 1)` for `alpha > 1` (midpoint rule on a convex integrand).
fn power_tail_bound(terms: u64, alpha: f64) -> Option<f64> {
    (alpha > 1.0).then(|| (terms as f64 + 0.5).powf(1.0 - alpha) / (alpha - 1.0))
}

/// `sum_{n <= N} a(n) beta(n)^(-s)`.
///
/// The tail is bounded by `sum_{n > N} n^(-sigma/D)`, which needs `sigma > D`;
/// otherwise the value is still returned with a heuristic error estimate.
pub fn eval_dirichlet_truncated(
    a: &CoefficientFunction,
    system: &BeurlingSystem,
    s: ComplexPoint,
    terms: u64,
) -> Result<SeriesValue> {
    if terms == 0 {
        return Err(Error::InvalidArgument("need at least one term".into()));
    }
    let coeffs = a.values_up_to(system.prime_table(), terms)?;
    let log_beta = system.log_beta_up_to(terms)?;
    let s = s.to_complex();
    let mut acc = Complex64::new(0.0, 0.0);
    let mut magnitude = 0.0;
    for n in 1..=terms as usize {
        let term = coeffs[n] * (-s * log_beta[n]).exp();
        magnitude += term.norm();
        acc += term;
    }
    let rounding = rounding_bound(terms, s, log_beta[terms as usize], magnitude);
    let alpha = s.re / system.degree();
    let (error_bound, rigorous) = match power_tail_bound(terms, alpha) {
        Some(tail) => (tail + rounding, true),
        None => ((terms as f64).powf(1.0 - alpha.max(0.0)) + rounding, false),
    };
    Ok(SeriesValue {
        value: acc,
        error_bound,
        rigorous,
        terms_used: terms,
    })
}

/// Floating-point error of summing `count` terms `exp(-s log m)` with `log m <= log_max`
/// and total magnitude `magnitude`.
fn rounding_bound(count: u64, s: Complex64, log_max: f64, magnitude: f64) -> f64 {
    f64::EPSILON * (count as f64 + 4.0 + s.norm() * log_max) * magnitude
}

fn check_em_parameters(terms: u64, corrections: usize) -> Result<()> {
    if terms == 0 {
        return Err(Error::InvalidArgument(
            "Euler–Maclaurin needs N >= 1".into(),
        ));
    }
    if corrections == 0 || corrections > EM_MAX_CORRECTIONS {
        return Err(Error::InvalidArgument(format!(
            "number of Bernoulli corrections must be in 1..={EM_MAX_CORRECTIONS}"
        )));
    }
    Ok(())
}

/// Pieces of the Euler–Maclaurin formula for `sum_{n >= 0} (n + x)^(-s)`.
struct EmParts {
    /// `sum_{n < N} (n + x)^(-s)` plus the boundary and Bernoulli terms.
    regular: Complex64,
    /// `u^(1 - s)` with `u = N + x`; the integral term is this over `s - 1`.
    log_u: f64,
    error: f64,
    magnitude: f64,
}

fn em_parts(s: Complex64, x: f64, terms: u64, corrections: usize) -> EmParts {
    let mut regular = Complex64::new(0.0, 0.0);
    let mut magnitude = 0.0;
    for n in 0..terms {
        let term = (-s * (n as f64 + x).ln()).exp();
        magnitude += term.norm();
        regular += term;
    }
    let u = terms as f64 + x;
    let log_u = u.ln();
    let u_pow = (-s * log_u).exp();
    regular += 0.5 * u_pow;
    // Bernoulli terms B_2k / (2k)! * s (s+1) ... (s+2k-2) * u^(-s-2k+1)
    let mut rising = s;
    let mut power = u_pow / u;
    let mut factorial = 2.0;
    for (k, b) in BERNOULLI_EVEN.iter().take(corrections).enumerate() {
        regular += b / factorial * rising * power;
        let m = 2.0 * k as f64;
        rising *= (s + (m + 1.0)) * (s + (m + 2.0));
        power /= u * u;
        factorial *= (m + 3.0) * (m + 4.0);
    }
    // First omitted term, scaled by |s + 2M + 1| / (sigma + 2M + 1).
    let b = BERNOULLI_EVEN[corrections];
    let shift = 2.0 * corrections as f64 + 1.0;
    let next = (b / factorial * rising * power).norm();
    let scale = (s + shift).norm() / (s.re + shift);
    let error = next * scale + rounding_bound(terms, s, log_u, magnitude);
    EmParts {
        regular,
        log_u,
        error,
        magnitude,
    }
}

/// `u^(1-s) / (s-1)` with `log u` given.
fn integral_term(s: Complex64, log_u: f64) -> Complex64 {
    ((1.0 - s) * log_u).exp() / (s - 1.0)
}

/// `(u^(1-s) - 1) / (s-1)`, finite at `s = 1` where it equals `-log u`.
fn integral_term_regularized(s: Complex64, log_u: f64) -> Complex64 {
    let z = (1.0 - s) * log_u;
    let expm1_over_z = if z.norm() < 1e-3 {
        Complex64::new(1.0, 0.0) + z / 2.0 + z * z / 6.0 + z * z * z / 24.0 + z * z * z * z / 120.0
    } else {
        (z.exp() - 1.0) / z
    };
    -log_u * expm1_over_z
}

fn em_rigorous(s: Complex64) -> bool {
    s.re >= 1.0
}

fn is_pole(s: Complex64) -> bool {
    s.re == 1.0 && s.im == 0.0
}

/// Hurwitz zeta `sum_{n >= 0} (n + x)^(-s)` for `x` in `(0, 1]`, continued by Euler–Maclaurin.
pub fn hurwitz_zeta(
    s: ComplexPoint,
    x: f64,
    terms: u64,
    corrections: usize,
) -> Result<SeriesValue> {
    check_em_parameters(terms, corrections)?;
    if !(x > 0.0 && x <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "Hurwitz shift x = {x} must lie in (0, 1]"
        )));
    }
    let z = s.to_complex();
    if is_pole(z) {
        return Err(Error::Pole {
            sigma: s.sigma,
            t: s.t,
        });
    }
    if z.re <= 1.0 - 2.0 * corrections as f64 {
        return Err(Error::Window {
            point: z.re,
            bound: 1.0 - 2.0 * corrections as f64,
        });
    }
    let parts = em_parts(z, x, terms, corrections);
    Ok(SeriesValue {
        value: parts.regular + integral_term(z, parts.log_u),
        error_bound: parts.error,
        rigorous: em_rigorous(z),
        terms_used: terms,
    })
}

/// Riemann zeta by Euler–Maclaurin with `terms` explicit terms and `corrections` Bernoulli terms.
pub fn zeta_euler_maclaurin(
    s: ComplexPoint,
    terms: u64,
    corrections: usize,
) -> Result<SeriesValue> {
    hurwitz_zeta(s, 1.0, terms, corrections)
}

/// `zeta(s)` with the default parameters, widening `N` when `|t|` is large.
pub fn zeta(s: ComplexPoint) -> Result<SeriesValue> {
    let terms = EM_DEFAULT_TERMS.max((2.0 * s.t.abs()).ceil() as u64);
    zeta_euler_maclaurin(s, terms, EM_DEFAULT_CORRECTIONS)
}

/// Real `zeta(sigma)` for `sigma != 1`.
pub fn zeta_real(sigma: f64) -> Result<f64> {
    Ok(zeta(ComplexPoint::real(sigma))?.value.re)
}

/// `L(chi, s) = q^(-s) sum_r chi(r) zeta(s, r/q)`.
///
/// For non-principal characters the `1/(s-1)` parts of the Hurwitz terms cancel
/// because `sum_r chi(r) = 0`, so the regularized integral term is used and the
/// result is finite at `s = 1`.
pub fn l_function_with(
    chi: &DirichletCharacter,
    s: ComplexPoint,
    terms: u64,
    corrections: usize,
) -> Result<SeriesValue> {
    check_em_parameters(terms, corrections)?;
    let z = s.to_complex();
    let principal = chi.is_principal();
    if principal && is_pole(z) {
        return Err(Error::Pole {
            sigma: s.sigma,
            t: s.t,
        });
    }
    if z.re <= 1.0 - 2.0 * corrections as f64 {
        return Err(Error::Window {
            point: z.re,
            bound: 1.0 - 2.0 * corrections as f64,
        });
    }
    let q = chi.modulus();
    let mut acc = Complex64::new(0.0, 0.0);
    let mut error = 0.0;
    let mut magnitude = 0.0;
    for r in 1..=q {
        let c = chi.value(r);
        if c.norm() == 0.0 {
            continue;
        }
        let parts = em_parts(z, r as f64 / q as f64, terms, corrections);
        let integral = if principal {
            integral_term(z, parts.log_u)
        } else {
            integral_term_regularized(z, parts.log_u)
        };
        acc += c * (parts.regular + integral);
        error += parts.error;
        magnitude += parts.magnitude;
    }
    let scale = (-z * (q as f64).ln()).exp();
    Ok(SeriesValue {
        value: scale * acc,
        error_bound: scale.norm() * (error + 4.0 * f64::EPSILON * magnitude),
        rigorous: em_rigorous(z),
        terms_used: terms * q,
    })
}

pub fn l_function(chi: &DirichletCharacter, s: ComplexPoint) -> Result<SeriesValue> {
    let terms = EM_DEFAULT_TERMS.max((2.0 * s.t.abs()).ceil() as u64);
    l_function_with(chi, s, terms, EM_DEFAULT_CORRECTIONS)
}

/// Coefficients `d(n)` paired with `log beta(n)` for `n = 1..=N`.
#[derive(Debug, Clone)]
pub struct CoefficientStream {
    coefficients: Vec<Complex64>,
    log_beta: Vec<f64>,
    degree: f64,
}

impl CoefficientStream {
    /// Index `n` holds `d(n)`; index 0 is unused and zero.
    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn log_beta(&self) -> &[f64] {
        &self.log_beta
    }

    pub fn len(&self) -> u64 {
        self.coefficients.len().saturating_sub(1) as u64
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Absolute summation is guaranteed for `Re s` above this bound (the system degree).
    pub fn summation_bound(&self) -> f64 {
        self.degree
    }

    pub fn get(&self, n: u64) -> Complex64 {
        self.coefficients
            .get(n as usize)
            .copied()
            .unwrap_or_default()
    }

    pub fn is_real(&self) -> bool {
        self.coefficients.iter().all(|c| c.im == 0.0)
    }

    /// `sum_n d(n) beta(n)^(-s)` in index order.
    pub fn eval(&self, s: Complex64) -> Complex64 {
        self.coefficients
            .iter()
            .zip(&self.log_beta)
            .skip(1)
            .filter(|(c, _)| c.norm_sqr() != 0.0)
            .fold(Complex64::new(0.0, 0.0), |acc, (c, lb)| {
                acc + c * (-s * lb).exp()
            })
    }

    pub fn eval_real(&self, sigma: f64) -> f64 {
        self.eval(Complex64::new(sigma, 0.0)).re
    }
}

/// Prime-power structure of `n`: `Some(k)` when `n = p^k`.
fn prime_power_exponent(system: &BeurlingSystem, n: u64) -> Option<u32> {
    let table = system.prime_table();
    let p = table.smallest_factor(n)?;
    let mut m = n;
    let mut k = 0;
    while m.is_multiple_of(p) {
        m /= p;
        k += 1;
    }
    (m == 1).then_some(k)
}

fn mangoldt_ratio_stream(
    a: &CoefficientFunction,
    system: &BeurlingSystem,
    terms: u64,
    weight: impl Fn(Complex64) -> Complex64,
) -> Result<CoefficientStream> {
    if terms < 2 {
        return Err(Error::InvalidArgument(
            "coefficient streams need N >= 2".into(),
        ));
    }
    let values = a.values_up_to(system.prime_table(), terms)?;
    let log_beta = system.log_beta_up_to(terms)?;
    let mut coefficients = vec![Complex64::new(0.0, 0.0); terms as usize + 1];
    for n in 2..=terms {
        if let Some(k) = prime_power_exponent(system, n) {
            let lambda = log_beta[n as usize] / k as f64;
            coefficients[n as usize] = weight(values[n as usize]) * (lambda / log_beta[n as usize]);
        }
    }
    Ok(CoefficientStream {
        coefficients,
        log_beta,
        degree: system.degree(),
    })
}

/// `c(n) = a(n) Lambda_beta(n) / log beta(n)`, so that `sum a(n) beta(n)^-s = exp(sum c(n) beta(n)^-s)`.
pub fn log_coefficients(
    a: &CoefficientFunction,
    system: &BeurlingSystem,
    terms: u64,
) -> Result<CoefficientStream> {
    mangoldt_ratio_stream(a, system, terms, |z| z)
}

/// `|sum_{n <= N} a(n) beta(n)^-sigma - exp(sum_{n <= N} c(n) beta(n)^-sigma)|`.
pub fn exp_identity_residual(
    a: &CoefficientFunction,
    system: &BeurlingSystem,
    sigma: f64,
    terms: u64,
) -> Result<f64> {
    let bound = system.abscissa().max(1.0);
    if !(sigma > bound) {
        return Err(Error::Window {
            point: sigma,
            bound,
        });
    }
    let direct = eval_dirichlet_truncated(a, system, ComplexPoint::real(sigma), terms)?.value;
    let log_side = log_coefficients(a, system, terms)?.eval(Complex64::new(sigma, 0.0));
    Ok((direct - log_side.exp()).norm())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairSign {
    Plus,
    Minus,
}

/// `d(n) = 2 (1 +- Re a(n)) Lambda_beta(n) / log beta(n)`, nonnegative when `|a| <= 1`.
pub fn square_pair_coefficients(
    a: &CoefficientFunction,
    system: &BeurlingSystem,
    sign: PairSign,
    terms: u64,
) -> Result<CoefficientStream> {
    let signum = match sign {
        PairSign::Plus => 1.0,
        PairSign::Minus => -1.0,
    };
    mangoldt_ratio_stream(a, system, terms, |z| {
        Complex64::new(2.0 * (1.0 + signum * z.re), 0.0)
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct LimitProbe {
    /// `(sigma, |F(sigma) - a(1)| * beta0^sigma)`.
    pub points: Vec<(f64, f64)>,
    pub nonincreasing: bool,
    pub max_ratio: f64,
}

/// Checks `F(sigma) -> a(1) = 1` at the rate `beta0^(-sigma)`.
pub fn first_coefficient_limit_probe(
    a: &CoefficientFunction,
    system: &BeurlingSystem,
    sigmas: &[f64],
    terms: u64,
) -> Result<LimitProbe> {
    if sigmas.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument(
            "sigma list must be strictly ascending".into(),
        ));
    }
    let bound = system.abscissa() + 1.0;
    if let Some(&lowest) = sigmas.first() {
        if !(lowest > bound) {
            return Err(Error::Window {
                point: lowest,
                bound,
            });
        }
    }
    let mut points = Vec::with_capacity(sigmas.len());
    for &sigma in sigmas {
        let f = eval_dirichlet_truncated(a, system, ComplexPoint::real(sigma), terms)?.value;
        let ratio = (f - 1.0).norm() * system.beta_min().powf(sigma);
        points.push((sigma, ratio));
    }
    let nonincreasing = points.windows(2).all(|w| w[1].1 <= w[0].1);
    let max_ratio = points.iter().map(|p| p.1).fold(0.0, f64::max);
    Ok(LimitProbe {
        points,
        nonincreasing,
        max_ratio,
    })
}
