//! Numerical checks behind the nonvanishing arguments: the `-9/8` lower bound for
//! `Re w + Re w^2` on the unit disk, the per-prime `7/8` chain, the factorization
//! `zeta(s)^2 zeta(s + i t0) zeta(s - i t0) = exp f(s)`, the Liouville example, and
//! the ping-pong closure on finite grids.

mod pingpong;

pub use pingpong::{
    pingpong_derive, pingpong_disjoint_resolve, validate_model, Membership, PingPongState,
    Resolution, Truth, DEFAULT_GRID_HALF_WIDTH,
};

use num_complex::Complex64;

use crate::arith::{CoefficientFunction, PrimeTable};
use crate::beurling::BeurlingSystem;
use crate::dirichlet::{
    eval_dirichlet_truncated, square_pair_coefficients, zeta, zeta_real, ComplexPoint, PairSign,
};
use crate::error::{Error, Result};

/// The exact minimum of `Re w + Re w^2` over `|w| <= 1`.
pub const DISK_MINIMUM: f64 = -9.0 / 8.0;

/// Region over which `Re w + Re w^2` is minimized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    Disk,
    RealSegment,
    UnitCircle,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub value: f64,
    pub argmin: Vec<Complex64>,
}

fn re_w_plus_w2(r: f64, theta: f64) -> f64 {
    r * theta.cos() + r * r * (2.0 * theta).cos()
}

/// Pattern search in `(r, theta)` with `r` clamped to `[r_lo, r_hi]`; 20 rounds, step halved each round.
fn refine(
    mut r: f64,
    mut theta: f64,
    mut step: f64,
    r_lo: f64,
    r_hi: f64,
    theta_free: bool,
) -> (f64, f64) {
    let mut best = re_w_plus_w2(r, theta);
    for _ in 0..20 {
        loop {
            let mut improved = false;
            let mut moves: Vec<(f64, f64)> =
                vec![((r + step).min(r_hi), theta), ((r - step).max(r_lo), theta)];
            if theta_free {
                moves.push((r, theta + step));
                moves.push((r, theta - step));
            }
            for (nr, nt) in moves {
                let v = re_w_plus_w2(nr, nt);
                if v < best {
                    best = v;
                    r = nr;
                    theta = nt;
                    improved = true;
                }
            }
            if !improved {
                break;
            }
        }
        step *= 0.5;
    }
    (r, theta)
}

/// Minimum of `Re w + Re w^2` on a grid of `grid_n` points per axis, refined by local descent.
pub fn min_re_w_plus_w2(grid_n: usize, region: Region) -> Result<Minimum> {
    if grid_n < 100 {
        return Err(Error::InvalidArgument(format!(
            "grid size {grid_n} must be at least 100"
        )));
    }
    let spacing = 2.0 / (grid_n - 1) as f64;
    // Candidates in polar form (r, theta) with theta in (-pi, pi].
    let mut candidates: Vec<(f64, f64)> = Vec::new();
    match region {
        Region::Disk => {
            for i in 0..grid_n {
                for j in 0..grid_n {
                    let w = Complex64::new(-1.0 + i as f64 * spacing, -1.0 + j as f64 * spacing);
                    if w.norm() <= 1.0 {
                        candidates.push((w.norm(), w.arg()));
                    }
                }
            }
        }
        Region::RealSegment => {
            for i in 0..grid_n {
                let x = -1.0 + i as f64 * spacing;
                candidates.push((x, 0.0));
            }
        }
        Region::UnitCircle => {
            for i in 0..grid_n {
                let theta = -std::f64::consts::PI
                    + std::f64::consts::TAU * (i as f64 + 0.5) / grid_n as f64;
                candidates.push((1.0, theta));
            }
        }
    }
    let value_of = |&(r, t): &(f64, f64)| re_w_plus_w2(r, t);
    let grid_min = candidates
        .iter()
        .map(value_of)
        .fold(f64::INFINITY, f64::min);
    // Seeds: best grid point in each half plane (the objective is symmetric under conjugation).
    let mut seeds: Vec<(f64, f64)> = Vec::new();
    for upper in [true, false] {
        let best = candidates
            .iter()
            .filter(|&&(r, t)| {
                if upper {
                    r * t.sin() >= 0.0
                } else {
                    r * t.sin() <= 0.0
                }
            })
            .min_by(|a, b| value_of(a).total_cmp(&value_of(b)));
        if let Some(&seed) = best {
            if value_of(&seed) <= grid_min + 4.0 * spacing {
                seeds.push(seed);
            }
        }
    }
    let mut refined: Vec<(f64, f64)> = seeds
        .into_iter()
        .map(|(r, t)| match region {
            Region::Disk => refine(r, t, spacing, 0.0, 1.0, true),
            Region::RealSegment => refine(r, t, spacing, -1.0, 1.0, false),
            Region::UnitCircle => refine(r, t, spacing, 1.0, 1.0, true),
        })
        .collect();
    let value = refined.iter().map(value_of).fold(f64::INFINITY, f64::min);
    refined.retain(|p| value_of(p) <= value + 1e-9);
    let mut argmin: Vec<Complex64> = Vec::new();
    for (r, t) in refined {
        let w = Complex64::from_polar(r, t);
        if argmin.iter().all(|z| (z - w).norm() > 1e-6) {
            argmin.push(w);
        }
    }
    argmin.sort_by(|a, b| b.im.total_cmp(&a.im));
    Ok(Minimum { value, argmin })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerPrimeBound {
    pub lhs: f64,
    pub mid: f64,
    pub rhs: f64,
    pub pass: bool,
}

/// Slack on the chain `lhs >= mid >= rhs`.
pub const CHAIN_SLACK: f64 = 1e-12;

/// The chain `sum_{m=1,2} 2(1 + Re a^m)/(m b^{m sigma}) >= (2 + Re a + Re a^2)/b^{2 sigma} >= (7/8)/b^{2 sigma}`
/// for a prime image `beta_p = b`.
pub fn per_prime_bound_check_beta(
    a_p: Complex64,
    beta_p: f64,
    sigma: f64,
) -> Result<PerPrimeBound> {
    if a_p.norm() > 1.0 + CHAIN_SLACK {
        return Err(Error::Precondition(format!(
            "|a_p| = {} exceeds 1",
            a_p.norm()
        )));
    }
    if !(sigma > 0.0) || !(beta_p > 1.0) {
        return Err(Error::InvalidArgument(format!(
            "need sigma > 0 and beta_p > 1, got sigma = {sigma}, beta_p = {beta_p}"
        )));
    }
    let a2 = a_p * a_p;
    let x = beta_p.powf(-sigma);
    let x2 = x * x;
    let lhs = 2.0 * (1.0 + a_p.re) * x + (1.0 + a2.re) * x2;
    let mid = (2.0 + a_p.re + a2.re) * x2;
    let rhs = 0.875 * x2;
    let pass = lhs >= mid - CHAIN_SLACK && mid >= rhs - CHAIN_SLACK;
    Ok(PerPrimeBound {
        lhs,
        mid,
        rhs,
        pass,
    })
}

pub fn per_prime_bound_check(a_p: Complex64, p: u64, sigma: f64) -> Result<PerPrimeBound> {
    per_prime_bound_check_beta(a_p, p as f64, sigma)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrimeSumBound {
    /// Truncated `f(sigma) = sum_{n <= N} 2(1 + Re a(n)) Lambda_beta(n) / (beta(n)^sigma log beta(n))`.
    pub series: f64,
    /// `(7/8) sum_{p <= N} beta(p)^(-2 sigma)`.
    pub bound: f64,
    pub pass: bool,
}

/// The summed form of the chain over a Beurling system.
pub fn prime_sum_bound_check(
    a: &CoefficientFunction,
    system: &BeurlingSystem,
    sigma: f64,
    terms: u64,
) -> Result<PrimeSumBound> {
    let stream = square_pair_coefficients(a, system, PairSign::Plus, terms)?;
    let series = stream.eval_real(sigma);
    let mut bound = 0.0;
    for &p in system.prime_table().primes_up_to(terms) {
        bound += system.prime_beta(p)?.powf(-2.0 * sigma);
    }
    bound *= 0.875;
    Ok(PrimeSumBound {
        series,
        bound,
        pass: series >= bound - CHAIN_SLACK,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToyFactorization {
    /// `zeta(sigma)^2 zeta(sigma + i t0) zeta(sigma - i t0)` via Euler–Maclaurin.
    pub product: f64,
    /// `exp f_N(sigma)` from the truncated logarithmic series.
    pub exponential: f64,
    pub relative_residual: f64,
}

/// Compares `F(sigma) = zeta(sigma)^2 |zeta(sigma + i t0)|^2` with `exp` of the
/// truncated series `sum 2(1 + cos(t0 log n)) Lambda(n) / (n^sigma log n)`.
pub fn toy_factorization_check(
    table: &PrimeTable,
    t0: f64,
    sigma: f64,
    terms: u64,
) -> Result<ToyFactorization> {
    if !(sigma > 1.0) {
        return Err(Error::Window {
            point: sigma,
            bound: 1.0,
        });
    }
    let z = zeta_real(sigma)?;
    let up = zeta(ComplexPoint::new(sigma, t0)?)?.value;
    let down = zeta(ComplexPoint::new(sigma, -t0)?)?.value;
    let product = (z * z * up * down).re;
    let system = BeurlingSystem::classical(std::sync::Arc::new(table.clone()));
    let twist = CoefficientFunction::VerticalTwist(t0);
    let f = square_pair_coefficients(&twist, &system, PairSign::Plus, terms)?.eval_real(sigma);
    let exponential = f.exp();
    Ok(ToyFactorization {
        product,
        exponential,
        relative_residual: (product - exponential).abs() / product.abs(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LiouvilleConverse {
    /// `zeta(2 sigma)^2`.
    pub target: f64,
    /// `zeta(sigma)^2 L_N(sigma)^2` with `L_N = sum_{n <= N} lambda(n) n^-sigma`.
    pub product: f64,
    /// `exp sum_{n <= N} 2(1 + lambda(n)) Lambda(n) / (n^sigma log n)`.
    pub exponential: f64,
    pub relative_residual: f64,
}

pub fn liouville_converse_check(
    table: &PrimeTable,
    sigma: f64,
    terms: u64,
) -> Result<LiouvilleConverse> {
    if !(sigma > 1.0) {
        return Err(Error::Window {
            point: sigma,
            bound: 1.0,
        });
    }
    let system = BeurlingSystem::classical(std::sync::Arc::new(table.clone()));
    let z = zeta_real(sigma)?;
    let z2 = zeta_real(2.0 * sigma)?;
    let target = z2 * z2;
    let l = eval_dirichlet_truncated(
        &CoefficientFunction::Liouville,
        &system,
        ComplexPoint::real(sigma),
        terms,
    )?
    .value
    .re;
    let product = z * z * l * l;
    let f = square_pair_coefficients(
        &CoefficientFunction::Liouville,
        &system,
        PairSign::Plus,
        terms,
    )?
    .eval_real(sigma);
    let exponential = f.exp();
    let relative_residual = (product - target).abs().max((exponential - target).abs()) / target;
    Ok(LiouvilleConverse {
        target,
        product,
        exponential,
        relative_residual,
    })
}
