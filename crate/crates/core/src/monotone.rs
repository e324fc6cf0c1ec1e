//! Truncated power series, radius-of-convergence estimation, and finite-difference
//! probes for complete and absolute monotonicity.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;

use crate::dirichlet::{CoefficientStream, EvaluationWindow};
use crate::error::{Error, Result};

/// Radii above `BEYOND_FACTOR * WINDOW_SCALE` are reported as beyond the window.
pub const WINDOW_SCALE: f64 = 1.0;
pub const BEYOND_FACTOR: f64 = 10.0;
/// Local radius growth across the tail window that marks super-geometric decay.
pub const SUPERGEOMETRIC_GROWTH: f64 = 1.1;
/// Minimum number of nonzero tail coefficients for a fit.
pub const MIN_TAIL_COEFFICIENTS: usize = 16;

/// Coefficients `c_0..c_N` of `sum c_n (z - center)^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSeries {
    coefficients: Vec<f64>,
    center: f64,
}

impl PowerSeries {
    pub fn new(coefficients: Vec<f64>) -> Result<Self> {
        Self::with_center(coefficients, 0.0)
    }

    pub fn with_center(coefficients: Vec<f64>, center: f64) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::InvalidArgument(
                "a power series needs at least c_0".into(),
            ));
        }
        if let Some(i) = coefficients.iter().position(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "coefficient {i} is not finite"
            )));
        }
        Ok(PowerSeries {
            coefficients,
            center,
        })
    }

    /// Series of length `order + 1` with `c_n = f(n)`.
    pub fn from_fn(order: usize, f: impl Fn(usize) -> f64) -> Result<Self> {
        Self::new((0..=order).map(f).collect())
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    /// Truncation order `N`.
    pub fn order(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn eval(&self, z: f64) -> f64 {
        self.coefficients
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * z + c)
    }

    /// `index,coefficient` lines under a header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,coefficient\n");
        for (i, c) in self.coefficients.iter().enumerate() {
            let _ = writeln!(out, "{i},{c:e}");
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut coefficients: Vec<Option<f64>> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with("index") {
                continue;
            }
            let parse_err = |message: String| Error::Parse {
                line: lineno + 1,
                message,
            };
            let (i, c) = line
                .split_once(',')
                .ok_or_else(|| parse_err(format!("expected `index,coefficient`, got `{line}`")))?;
            let i: usize = i
                .trim()
                .parse()
                .map_err(|_| parse_err(format!("bad index `{i}`")))?;
            let c: f64 = c
                .trim()
                .parse()
                .map_err(|_| parse_err(format!("bad coefficient `{c}`")))?;
            if i >= coefficients.len() {
                coefficients.resize(i + 1, None);
            }
            if coefficients[i].replace(c).is_some() {
                return Err(parse_err(format!("index {i} appears twice")));
            }
        }
        if let Some(missing) = coefficients.iter().position(Option::is_none) {
            return Err(Error::Parse {
                line: 0,
                message: format!("index {missing} is missing"),
            });
        }
        Self::new(coefficients.into_iter().flatten().collect())
    }

    pub fn load_csv(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_csv(&std::fs::read_to_string(path)?)
    }
}

/// Coefficients of `exp(f)`: `A_0 = exp(a_0)`, `A_n = (1/n) sum_{k=1..n} k a_k A_{n-k}`.
pub fn exp_series(f: &PowerSeries) -> PowerSeries {
    let a = f.coefficients();
    let mut out = Vec::with_capacity(a.len());
    out.push(a[0].exp());
    for n in 1..a.len() {
        let s: f64 = (1..=n).map(|k| k as f64 * a[k] * out[n - k]).sum();
        out.push(s / n as f64);
    }
    PowerSeries {
        coefficients: out,
        center: f.center,
    }
}

/// Coefficients of `log(F)` for `F_0 > 0`, inverting the recurrence of [`exp_series`].
pub fn log_series(big_f: &PowerSeries) -> Result<PowerSeries> {
    let c = big_f.coefficients();
    if !(c[0] > 0.0) {
        return Err(Error::Domain(format!(
            "logarithm needs a positive constant term, got {}",
            c[0]
        )));
    }
    let mut out = Vec::with_capacity(c.len());
    out.push(c[0].ln());
    for n in 1..c.len() {
        let s: f64 = (1..n).map(|k| k as f64 * out[k] * c[n - k]).sum();
        out.push((c[n] - s / n as f64) / c[0]);
    }
    Ok(PowerSeries {
        coefficients: out,
        center: big_f.center,
    })
}

fn truncated_product(a: &[f64], b: &[f64], len: usize) -> Vec<f64> {
    let mut out = vec![0.0; len];
    for (i, &x) in a.iter().enumerate().take(len) {
        if x == 0.0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(len - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// Coefficients of `E(f(z))` for `f(0) = 0`, truncated to the order of `f`.
pub fn compose_series(outer: &PowerSeries, f: &PowerSeries) -> Result<PowerSeries> {
    let fc = f.coefficients();
    if fc[0] != 0.0 {
        return Err(Error::ShiftRequired(fc[0]));
    }
    let len = fc.len();
    let mut acc = vec![0.0; len];
    for &e in outer.coefficients().iter().rev() {
        acc = truncated_product(&acc, fc, len);
        acc[0] += e;
    }
    Ok(PowerSeries {
        coefficients: acc,
        center: f.center,
    })
}

/// Taylor coefficients of `z -> F(center - z)` for `F(s) = sum d(k) beta(k)^(-s)`:
/// `c_n = (1/n!) sum_k d(k) (log beta(k))^n beta(k)^(-center)`.
pub fn taylor_from_dirichlet(
    stream: &CoefficientStream,
    center: f64,
    order: usize,
) -> Result<PowerSeries> {
    if !(center > stream.summation_bound()) {
        return Err(Error::Window {
            point: center,
            bound: stream.summation_bound(),
        });
    }
    if !stream.is_real() {
        return Err(Error::Domain(
            "Taylor re-expansion needs real coefficients".into(),
        ));
    }
    let mut out = vec![0.0; order + 1];
    for (d, &lb) in stream.coefficients().iter().zip(stream.log_beta()).skip(1) {
        if d.re == 0.0 {
            continue;
        }
        let mut term = d.re * (-center * lb).exp();
        out[0] += term;
        for (n, slot) in out.iter_mut().enumerate().skip(1) {
            term *= lb / n as f64;
            *slot += term;
        }
    }
    PowerSeries::with_center(out, center)
}

/// Taylor coefficients at 0 of an analytic `f` from `points` samples on `|z| = radius`.
///
/// Aliasing contributes `c_{n+points} radius^points`, so `radius` should sit well
/// inside the disk of convergence.
pub fn taylor_by_contour(
    f: impl Fn(Complex64) -> Result<Complex64>,
    radius: f64,
    order: usize,
    points: usize,
) -> Result<PowerSeries> {
    if points <= order {
        return Err(Error::InvalidArgument(format!(
            "need more than {order} contour points, got {points}"
        )));
    }
    let samples: Vec<Complex64> = (0..points)
        .map(|j| {
            f(Complex64::from_polar(
                radius,
                std::f64::consts::TAU * j as f64 / points as f64,
            ))
        })
        .collect::<Result<_>>()?;
    let coefficients = (0..=order)
        .map(|n| {
            let sum: Complex64 = samples
                .iter()
                .enumerate()
                .map(|(j, v)| {
                    let theta = std::f64::consts::TAU * ((n * j) % points) as f64 / points as f64;
                    v * Complex64::from_polar(1.0, -theta)
                })
                .sum();
            sum.re / points as f64 / radius.powi(n as i32)
        })
        .collect();
    PowerSeries::new(coefficients)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RadiusEstimate {
    Finite(f64),
    BeyondWindow,
}

impl RadiusEstimate {
    pub fn value(self) -> Option<f64> {
        match self {
            RadiusEstimate::Finite(r) => Some(r),
            RadiusEstimate::BeyondWindow => None,
        }
    }
}

/// Least-squares slope of `ys` against `xs`.
fn fit_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

/// `1 / limsup |c_n|^(1/n)` estimated from a linear fit of `log|c_n|` on the tail half.
///
/// A tail that is identically zero (a polynomial) or whose local decay rate
/// keeps accelerating across the window is reported as beyond the window.
pub fn radius_estimate(p: &PowerSeries) -> Result<RadiusEstimate> {
    let c = p.coefficients();
    let order = p.order();
    if order + 1 < 2 * MIN_TAIL_COEFFICIENTS {
        return Err(Error::InsufficientData(format!(
            "order {order} leaves fewer than {MIN_TAIL_COEFFICIENTS} tail coefficients"
        )));
    }
    let start = order.div_ceil(2);
    let tail: Vec<(f64, f64)> = (start..=order)
        .filter(|&n| c[n].abs() > f64::MIN_POSITIVE)
        .map(|n| (n as f64, c[n].abs().ln()))
        .collect();
    if tail.is_empty() {
        return Ok(RadiusEstimate::BeyondWindow);
    }
    if tail.len() < MIN_TAIL_COEFFICIENTS {
        return Err(Error::InsufficientData(format!(
            "only {} nonzero tail coefficients",
            tail.len()
        )));
    }
    let radius = (-fit_slope(&tail)).exp();
    let half = tail.len() / 2;
    let early = (-fit_slope(&tail[..half])).exp();
    let late = (-fit_slope(&tail[half..])).exp();
    if !radius.is_finite()
        || radius > BEYOND_FACTOR * WINDOW_SCALE
        || late > SUPERGEOMETRIC_GROWTH * early
    {
        return Ok(RadiusEstimate::BeyondWindow);
    }
    Ok(RadiusEstimate::Finite(radius))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadiusEqualityReport {
    pub radius_f: RadiusEstimate,
    pub radius_exp_f: RadiusEstimate,
    pub pass: bool,
}

/// Relative tolerance for two finite radius estimates to count as equal.
pub const RADIUS_AGREEMENT: f64 = 0.15;

/// Compares the estimated radii of `f` and `exp(f)` for nonnegative `f`.
pub fn radius_equality_check(f: &PowerSeries) -> Result<RadiusEqualityReport> {
    if let Some(i) = f.coefficients().iter().position(|&c| c < 0.0) {
        return Err(Error::Precondition(format!("coefficient {i} is negative")));
    }
    let radius_f = radius_estimate(f)?;
    let radius_exp_f = radius_estimate(&exp_series(f))?;
    let pass = match (radius_f, radius_exp_f) {
        (RadiusEstimate::BeyondWindow, RadiusEstimate::BeyondWindow) => true,
        (RadiusEstimate::Finite(a), RadiusEstimate::Finite(b)) => {
            (a - b).abs() <= RADIUS_AGREEMENT * a.max(b)
        }
        _ => false,
    };
    Ok(RadiusEqualityReport {
        radius_f,
        radius_exp_f,
        pass,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneReport {
    pub order_checked: usize,
    pub grid: Vec<f64>,
    /// Signed value `(+-1)^k Delta_h^k f(x) / h^k` of the worst sample.
    pub worst_violation: f64,
    /// Tolerance that applies at the worst sample.
    pub tolerance: f64,
    pub worst_order: usize,
    pub worst_point: f64,
    /// Smallest order with a sample below its tolerance.
    pub first_failing_order: Option<usize>,
    pub passed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SignPattern {
    Alternating,
    Positive,
}

fn binomial_row(k: usize) -> Vec<f64> {
    let mut row = vec![1.0];
    for _ in 0..k {
        let mut next = vec![1.0; row.len() + 1];
        for i in 1..row.len() {
            next[i] = row[i - 1] + row[i];
        }
        row = next;
    }
    row
}

fn probe(
    f: impl Fn(f64) -> Result<f64>,
    x0: f64,
    x1: f64,
    h: f64,
    k_max: usize,
    pattern: SignPattern,
) -> Result<MonotoneReport> {
    if !(h > 0.0 && x1 > x0 && h.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "need x0 < x1 and h > 0, got [{x0}, {x1}] with h = {h}"
        )));
    }
    let steps = ((x1 - x0) / h + 1e-9).floor() as usize;
    if steps < k_max {
        return Err(Error::InvalidArgument(format!(
            "interval holds {steps} steps of {h}, fewer than k_max = {k_max}"
        )));
    }
    let grid: Vec<f64> = (0..=steps).map(|i| x0 + i as f64 * h).collect();
    let values: Vec<f64> = grid
        .iter()
        .map(|&x| {
            let v = f(x)?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::Evaluation {
                    x,
                    message: format!("non-finite value {v}"),
                })
            }
        })
        .collect::<Result<_>>()?;
    let scale = values[0].abs().max(1.0);
    let mut worst: Option<(f64, f64, usize, f64)> = None;
    let mut first_failing_order = None;
    let mut factorial = 1.0;
    for k in 0..=k_max {
        if k > 0 {
            factorial *= k as f64;
        }
        let tol = 1e-8 * scale * factorial * h.powi(-(k as i32));
        let row = binomial_row(k);
        let sign = match pattern {
            SignPattern::Alternating if k % 2 == 1 => -1.0,
            _ => 1.0,
        };
        for i in 0..grid.len() - k {
            // Delta_h^k f(x_i) = sum_j (-1)^(k-j) C(k, j) f(x_{i+j})
            let diff: f64 = (0..=k)
                .map(|j| {
                    let parity = if (k - j) % 2 == 1 { -1.0 } else { 1.0 };
                    parity * row[j] * values[i + j]
                })
                .sum();
            let v = sign * diff / h.powi(k as i32);
            if v < -tol && first_failing_order.is_none() {
                first_failing_order = Some(k);
            }
            let margin = v / tol;
            if worst.is_none_or(|w| margin < w.0 / w.1) {
                worst = Some((v, tol, k, grid[i]));
            }
        }
    }
    let (worst_violation, tolerance, worst_order, worst_point) = worst.unwrap_or((0.0, 0.0, 0, x0));
    Ok(MonotoneReport {
        order_checked: k_max,
        grid,
        worst_violation,
        tolerance,
        worst_order,
        worst_point,
        first_failing_order,
        passed: worst_violation >= -tolerance,
    })
}

/// `(-1)^k Delta_h^k f >= -tol` for `k = 0..=k_max` on the grid `x0, x0 + h, ..., <= x1`.
pub fn completely_monotone_probe(
    f: impl Fn(f64) -> Result<f64>,
    x0: f64,
    x1: f64,
    h: f64,
    k_max: usize,
) -> Result<MonotoneReport> {
    probe(f, x0, x1, h, k_max, SignPattern::Alternating)
}

/// `Delta_h^k F >= -tol` for `k = 0..=k_max`.
pub fn absolutely_monotone_probe(
    f: impl Fn(f64) -> Result<f64>,
    x0: f64,
    x1: f64,
    h: f64,
    k_max: usize,
) -> Result<MonotoneReport> {
    probe(f, x0, x1, h, k_max, SignPattern::Positive)
}

/// A center `a = sigma2 + j eps` (`j <= max_steps`) whose disk `|s - a| < a - sigma0` contains `s`.
pub fn exhaustion_center(
    s: Complex64,
    window: &EvaluationWindow,
    eps: f64,
    max_steps: usize,
) -> Option<f64> {
    (0..=max_steps)
        .map(|j| window.sigma2 + j as f64 * eps)
        .find(|&a| (s - a).norm() < a - window.sigma0)
}
