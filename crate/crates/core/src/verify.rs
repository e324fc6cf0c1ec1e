//! The invariant suites of every module, run as one batch.
//!
//! Checks run concurrently but each one is sequential and seeded, and results
//! are collected in a fixed order, so the report does not depend on the number
//! of threads.

use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::arith::character::gcd;
use crate::arith::{
    characters_mod, liouville, mangoldt_divisor_identity_residual, CoefficientFunction, PrimeTable,
    PrimeValueTable,
};
use crate::beurling::{
    beur_mangoldt_identity_residual, prime_sum_divergence_probe, zeta_system_eval, BeurlingSystem,
    QuadraticFieldSpec,
};
use crate::dirichlet::{
    eval_dirichlet_truncated, exp_identity_residual, first_coefficient_limit_probe, l_function,
    square_pair_coefficients, zeta, ComplexPoint, EvaluationWindow, PairSign,
};
use crate::error::{Error, Result};
use crate::monotone::{
    absolutely_monotone_probe, completely_monotone_probe, compose_series, exhaustion_center,
    exp_series, log_series, radius_equality_check, PowerSeries,
};
use crate::report::Record;
use crate::zerofree::{
    liouville_converse_check, min_re_w_plus_w2, per_prime_bound_check, prime_sum_bound_check,
    toy_factorization_check, Region, DISK_MINIMUM,
};
use crate::zerofree::{
    pingpong_derive, pingpong_disjoint_resolve, validate_model, PingPongState, Resolution, Truth,
};

pub const DEFAULT_MAX_N: u64 = 10_000;
pub const MIN_MAX_N: u64 = 100;
pub const MAX_MAX_N: u64 = 10_000_000;
/// Sieve size below which the fixed-size checks would lose accuracy.
const MIN_TABLE: u64 = 200_000;

/// Classical value of `sum_p p^-2`.
const PRIME_ZETA_2: f64 = 0.452_247_420_041_065_5;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub module: &'static str,
    pub name: &'static str,
    pub passed: bool,
    /// The worst observed quantity; compared against `threshold` where that makes sense.
    pub metric: f64,
    pub threshold: f64,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub max_n: u64,
    pub results: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn failures(&self) -> usize {
        self.results.iter().filter(|r| !r.passed).count()
    }

    pub fn passed(&self) -> bool {
        self.failures() == 0
    }

    pub fn records(&self) -> Vec<Record> {
        let mut out: Vec<Record> = self
            .results
            .iter()
            .map(|r| {
                let rec = Record::new("verify")
                    .field("module", r.module)
                    .field("check", r.name)
                    .field("passed", r.passed)
                    .field("metric", r.metric)
                    .field("threshold", r.threshold);
                match &r.error {
                    Some(e) => rec.field("error", e.as_str()),
                    None => rec,
                }
            })
            .collect();
        out.push(
            Record::new("verify-all")
                .param("max_n", self.max_n)
                .field("checks", self.results.len())
                .field("failures", self.failures())
                .field("passed", self.passed()),
        );
        out
    }
}

struct Outcome {
    passed: bool,
    metric: f64,
    threshold: f64,
}

/// `metric <= threshold`.
fn at_most(metric: f64, threshold: f64) -> Outcome {
    Outcome {
        passed: metric <= threshold,
        metric,
        threshold,
    }
}

/// A yes/no check reported as a count of violations.
fn violations(count: usize) -> Outcome {
    at_most(count as f64, 0.0)
}

struct Context {
    max_n: u64,
    table: Arc<PrimeTable>,
    gaussian: BeurlingSystem,
}

impl Context {
    fn classical(&self) -> BeurlingSystem {
        BeurlingSystem::classical(Arc::clone(&self.table))
    }

    fn systems(&self) -> Result<Vec<BeurlingSystem>> {
        let limit = 2 * self.table.limit();
        Ok(vec![
            self.classical(),
            self.gaussian.clone(),
            BeurlingSystem::quadratic_field(
                QuadraticFieldSpec::new(5, limit)?,
                Arc::clone(&self.table),
            )?,
            BeurlingSystem::quadratic_field(
                QuadraticFieldSpec::new(-3, limit)?,
                Arc::clone(&self.table),
            )?,
            random_custom_system(&self.table, 11)?,
        ])
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_disk_point(rng: &mut ChaCha8Rng) -> Complex64 {
    let r = rng.gen::<f64>().sqrt();
    Complex64::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU))
}

fn random_prime_values(table: &PrimeTable, bound: u64, seed: u64) -> Result<PrimeValueTable> {
    let mut rng = rng(seed);
    PrimeValueTable::new(
        table
            .primes_up_to(bound)
            .iter()
            .map(|&p| (p, random_disk_point(&mut rng))),
    )
}

/// `beta(p) = p (1 + u_p)` with `u_p` uniform on `[0, 1)`, degree 1.
fn random_custom_system(table: &Arc<PrimeTable>, seed: u64) -> Result<BeurlingSystem> {
    let mut rng = rng(seed);
    let entries: Vec<(u64, f64)> = table
        .primes_up_to(10_000)
        .iter()
        .map(|&p| (p, p as f64 * (1.0 + rng.gen::<f64>())))
        .collect();
    BeurlingSystem::custom("random", 2.0, 1.0, &entries, Arc::clone(table))
}

type CheckFn = fn(&Context) -> Result<Outcome>;

const CHECKS: &[(&str, &str, CheckFn)] = &[
    ("arith", "sieve-structure", sieve_structure),
    ("arith", "divisor-identity", divisor_identity),
    (
        "arith",
        "complete-multiplicativity",
        complete_multiplicativity,
    ),
    ("arith", "liouville-exact", liouville_exact),
    ("arith", "character-structure", character_structure),
    ("arith", "character-orthogonality", character_orthogonality),
    ("dirichlet", "zeta-vs-direct", zeta_vs_direct),
    ("dirichlet", "lfunction-vs-direct", lfunction_vs_direct),
    (
        "dirichlet",
        "exp-identity-convergence",
        exp_identity_convergence,
    ),
    ("dirichlet", "conjugation-symmetry", conjugation_symmetry),
    (
        "dirichlet",
        "square-pair-nonnegative",
        square_pair_nonnegative,
    ),
    (
        "dirichlet",
        "first-coefficient-limit",
        first_coefficient_limit,
    ),
    ("monotone", "exp-log-roundtrip", exp_log_roundtrip),
    (
        "monotone",
        "composition-consistency",
        composition_consistency,
    ),
    ("monotone", "sign-closure", sign_closure),
    ("monotone", "radius-equality", radius_equality),
    (
        "monotone",
        "finite-difference-probes",
        finite_difference_probes,
    ),
    (
        "monotone",
        "dirichlet-stream-monotone",
        dirichlet_stream_monotone,
    ),
    ("monotone", "half-plane-exhaustion", half_plane_exhaustion),
    ("beurling", "beta-multiplicative", beta_multiplicative),
    ("beurling", "beta-growth", beta_growth),
    ("beurling", "mangoldt-identity", beurling_mangoldt_identity),
    ("beurling", "dedekind-consistency", dedekind_consistency),
    ("beurling", "norm-order-invariance", norm_order_invariance),
    ("beurling", "divergence-probe", divergence_probe),
    ("zerofree", "disk-minimum", disk_minimum),
    ("zerofree", "per-prime-chain", per_prime_chain),
    ("zerofree", "prime-sum-bound", prime_sum_bound),
    ("zerofree", "toy-factorization", toy_factorization),
    ("zerofree", "liouville-converse", liouville_converse),
    ("zerofree", "pingpong-derivation", pingpong_derivation),
    ("zerofree", "pingpong-disjoint", pingpong_disjoint),
    ("zerofree", "pingpong-soundness", pingpong_soundness),
];

/// Names of all checks as `module/check`, in report order.
pub fn check_names() -> Vec<String> {
    CHECKS.iter().map(|(m, n, _)| format!("{m}/{n}")).collect()
}

/// Runs every invariant suite with `max_n` as the scale of the sweeps.
pub fn verify_all(max_n: u64, threads: usize) -> Result<VerifyReport> {
    if !(MIN_MAX_N..=MAX_MAX_N).contains(&max_n) {
        return Err(Error::InvalidArgument(format!(
            "max-n must be in {MIN_MAX_N}..={MAX_MAX_N}, got {max_n}"
        )));
    }
    if threads == 0 {
        return Err(Error::InvalidArgument("threads must be at least 1".into()));
    }
    let table = Arc::new(PrimeTable::new((2 * max_n).max(MIN_TABLE))?);
    let gaussian = BeurlingSystem::quadratic_field(
        QuadraticFieldSpec::new(-1, 2 * table.limit())?,
        Arc::clone(&table),
    )?;
    let ctx = Context {
        max_n,
        table,
        gaussian,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let results = pool.install(|| {
        CHECKS
            .par_iter()
            .map(|&(module, name, check)| match check(&ctx) {
                Ok(o) => CheckResult {
                    module,
                    name,
                    passed: o.passed,
                    metric: o.metric,
                    threshold: o.threshold,
                    error: None,
                },
                Err(e) => CheckResult {
                    module,
                    name,
                    passed: false,
                    metric: f64::NAN,
                    threshold: f64::NAN,
                    error: Some(e.to_string()),
                },
            })
            .collect()
    });
    Ok(VerifyReport { max_n, results })
}

// arith

fn sieve_structure(ctx: &Context) -> Result<Outcome> {
    let t = &ctx.table;
    let bound = ctx.max_n.min(100_000).min(t.limit());
    let mut bad = 0;
    let mut expected_primes = Vec::new();
    for n in 2..=bound {
        let spf = t.smallest_factor(n).unwrap_or(0);
        let trial = (2..)
            .take_while(|d| d * d <= n)
            .find(|d| n % d == 0)
            .unwrap_or(n);
        if spf != trial {
            bad += 1;
        }
        if trial == n {
            expected_primes.push(n);
        }
        let f = t.factorize(n)?;
        if f.product() != n || f.factors.windows(2).any(|w| w[0].0 >= w[1].0) {
            bad += 1;
        }
    }
    if t.primes_up_to(bound) != expected_primes.as_slice() || !t.factorize(1)?.factors.is_empty() {
        bad += 1;
    }
    Ok(violations(bad))
}

fn divisor_identity(ctx: &Context) -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for n in 1..=ctx.max_n {
        worst = worst.max(mangoldt_divisor_identity_residual(&ctx.table, n)?);
    }
    Ok(at_most(worst, 1e-12))
}

fn complete_multiplicativity(ctx: &Context) -> Result<Outcome> {
    let side = (ctx.max_n as f64).sqrt() as u64;
    let n_max = side * side;
    let functions = vec![
        CoefficientFunction::Unit,
        CoefficientFunction::Liouville,
        CoefficientFunction::character(4, 1)?,
        CoefficientFunction::character(5, 1)?,
        CoefficientFunction::character(12, 3)?,
        CoefficientFunction::VerticalTwist(14.134725),
        CoefficientFunction::custom(random_prime_values(&ctx.table, n_max, 3)?),
    ];
    let mut worst: f64 = 0.0;
    for f in &functions {
        let v = f.values_up_to(&ctx.table, n_max)?;
        if v[1] != Complex64::new(1.0, 0.0) {
            worst = f64::INFINITY;
        }
        for n in 1..=side as usize {
            for m in 1..=side as usize {
                worst = worst.max((v[n * m] - v[n] * v[m]).norm());
            }
        }
        for z in &v {
            worst = worst.max(z.norm() - 1.0);
        }
    }
    Ok(at_most(worst, 1e-12))
}

fn liouville_exact(ctx: &Context) -> Result<Outcome> {
    let side = (ctx.max_n as f64).sqrt() as u64;
    let mut bad = 0;
    for n in 1..=side {
        for m in 1..=side {
            if liouville(&ctx.table, n * m) != liouville(&ctx.table, n) * liouville(&ctx.table, m) {
                bad += 1;
            }
        }
    }
    Ok(violations(bad))
}

fn euler_phi(q: u64) -> u64 {
    (1..=q).filter(|&r| gcd(r, q) == 1).count() as u64
}

fn character_structure(_: &Context) -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for q in 2..=100u64 {
        let phi = euler_phi(q);
        for chi in characters_mod(q)? {
            let v = chi.values();
            for r in 0..q {
                let coprime = gcd(r, q) == 1;
                if coprime == (v[r as usize] == Complex64::new(0.0, 0.0)) {
                    worst = f64::INFINITY;
                }
                if coprime {
                    worst = worst.max((v[r as usize].powu(phi as u32) - 1.0).norm());
                    for s in 0..q {
                        if gcd(s, q) == 1 {
                            let prod = v[r as usize] * v[s as usize];
                            worst = worst.max((v[(r * s % q) as usize] - prod).norm());
                        }
                    }
                }
            }
            worst = worst.max((chi.value(1) - 1.0).norm());
        }
    }
    Ok(at_most(worst, 1e-12))
}

fn character_orthogonality(_: &Context) -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for q in 2..=100u64 {
        let phi = euler_phi(q) as f64;
        let chars = characters_mod(q)?;
        if chars.len() as f64 != phi {
            worst = f64::INFINITY;
        }
        for (i, x) in chars.iter().enumerate() {
            for (j, y) in chars.iter().enumerate() {
                let inner: Complex64 = x
                    .values()
                    .iter()
                    .zip(y.values())
                    .map(|(a, b)| a * b.conj())
                    .sum();
                let want = if i == j { phi } else { 0.0 };
                worst = worst.max((inner - want).norm());
            }
        }
    }
    Ok(at_most(worst, 1e-9))
}

// dirichlet

fn zeta_vs_direct(ctx: &Context) -> Result<Outcome> {
    let system = ctx.classical();
    let mut worst: f64 = f64::NEG_INFINITY;
    for sigma in [2.0, 3.0, 4.0] {
        for t in [0.0, 5.0, -21.0] {
            let s = ComplexPoint::new(sigma, t)?;
            let em = zeta(s)?;
            let direct =
                eval_dirichlet_truncated(&CoefficientFunction::Unit, &system, s, ctx.max_n)?;
            let excess = (em.value - direct.value).norm() - (em.error_bound + direct.error_bound);
            worst = worst.max(excess);
        }
    }
    Ok(at_most(worst, 0.0))
}

fn lfunction_vs_direct(ctx: &Context) -> Result<Outcome> {
    let system = ctx.classical();
    let terms = ctx.table.limit() / 2;
    let mut worst: f64 = 0.0;
    for q in [3u64, 4, 5, 7, 8, 12] {
        for chi in characters_mod(q)?.into_iter().filter(|c| !c.is_principal()) {
            let a = CoefficientFunction::Character(Arc::new(chi.clone()));
            for sigma in [2.0, 3.0] {
                for t in [0.0, 3.0] {
                    let s = ComplexPoint::new(sigma, t)?;
                    let direct = eval_dirichlet_truncated(&a, &system, s, terms)?.value;
                    // Partial sums of a nonprincipal character are bounded by phi(q).
                    let tail =
                        q as f64 * s.to_complex().norm() / sigma * (terms as f64).powf(-sigma);
                    let diff = (l_function(&chi, s)?.value - direct).norm() - tail;
                    worst = worst.max(diff);
                }
            }
        }
    }
    Ok(at_most(worst, 1e-8))
}

fn exp_identity_convergence(ctx: &Context) -> Result<Outcome> {
    let cases = [
        (CoefficientFunction::Unit, ctx.classical(), 3.0),
        (CoefficientFunction::Liouville, ctx.classical(), 3.0),
        (CoefficientFunction::character(5, 1)?, ctx.classical(), 2.5),
        (CoefficientFunction::Unit, ctx.gaussian.clone(), 3.0),
        (CoefficientFunction::Liouville, ctx.gaussian.clone(), 3.0),
    ];
    let mut bad = 0;
    for (a, system, sigma) in &cases {
        let ns = [ctx.max_n / 100, ctx.max_n / 10, ctx.max_n];
        let r: Vec<f64> = ns
            .iter()
            .map(|&n| exp_identity_residual(a, system, *sigma, n))
            .collect::<Result<_>>()?;
        let alpha = sigma / system.degree();
        let tail = (ctx.max_n as f64).powf(1.0 - alpha) / (alpha - 1.0);
        if !(r[1] < r[0] && r[2] < r[1]) || r[2] > 2.0 * tail + 1e-12 {
            bad += 1;
        }
    }
    Ok(violations(bad))
}

fn conjugation_symmetry(ctx: &Context) -> Result<Outcome> {
    let real_functions = [
        CoefficientFunction::Unit,
        CoefficientFunction::Liouville,
        CoefficientFunction::character(4, 1)?,
        CoefficientFunction::character(5, 2)?,
    ];
    let points = [(2.0, 3.0), (1.5, -7.5), (0.7, 14.1), (3.0, 30.0)];
    let terms = ctx.max_n.min(10_000);
    let mut worst: f64 = 0.0;
    for system in [ctx.classical(), ctx.gaussian.clone()] {
        for a in &real_functions {
            for &(sigma, t) in &points {
                let s = ComplexPoint::new(sigma, t)?;
                let up = eval_dirichlet_truncated(a, &system, s, terms)?.value;
                let down = eval_dirichlet_truncated(a, &system, s.conj(), terms)?.value;
                worst = worst.max((down - up.conj()).norm());
            }
        }
    }
    for &(sigma, t) in &points {
        let s = ComplexPoint::new(sigma, t)?;
        worst = worst.max((zeta(s.conj())?.value - zeta(s)?.value.conj()).norm());
        for chi in characters_mod(12)?
            .into_iter()
            .filter(|c| !c.is_principal())
        {
            worst = worst.max(
                (l_function(&chi, s.conj())?.value - l_function(&chi, s)?.value.conj()).norm(),
            );
        }
    }
    Ok(at_most(worst, 1e-10))
}

fn square_pair_nonnegative(ctx: &Context) -> Result<Outcome> {
    let functions = [
        CoefficientFunction::Unit,
        CoefficientFunction::Liouville,
        CoefficientFunction::character(4, 1)?,
        CoefficientFunction::character(5, 1)?,
        CoefficientFunction::VerticalTwist(1.0),
        CoefficientFunction::VerticalTwist(14.134725),
        CoefficientFunction::custom(random_prime_values(&ctx.table, ctx.max_n, 5)?),
    ];
    let mut worst: f64 = 0.0;
    for system in [ctx.classical(), ctx.gaussian.clone()] {
        for a in &functions {
            for sign in [PairSign::Plus, PairSign::Minus] {
                let d = square_pair_coefficients(a, &system, sign, ctx.max_n)?;
                for c in d.coefficients() {
                    worst = worst.max(-c.re).max(c.im.abs());
                }
            }
        }
    }
    Ok(at_most(worst, 1e-12))
}

fn first_coefficient_limit(ctx: &Context) -> Result<Outcome> {
    let terms = ctx.max_n.min(10_000);
    let mut bad = 0;
    let mut worst: f64 = 0.0;
    for a in [CoefficientFunction::Unit, CoefficientFunction::Liouville] {
        for (system, monotone) in [(ctx.classical(), true), (ctx.gaussian.clone(), false)] {
            let probe = first_coefficient_limit_probe(&a, &system, &[4.0, 6.0, 8.0, 10.0], terms)?;
            // With repeated prime images the ratio may approach its limit from below.
            if monotone && !probe.nonincreasing {
                bad += 1;
            }
            worst = worst.max(probe.max_ratio);
            let far = eval_dirichlet_truncated(&a, &system, ComplexPoint::real(40.0), terms)?.value;
            if (far - 1.0).norm() > 1e-10 {
                bad += 1;
            }
        }
    }
    Ok(Outcome {
        passed: bad == 0 && worst < 3.0,
        metric: worst,
        threshold: 3.0,
    })
}

// monotone

fn random_series(rng: &mut ChaCha8Rng, order: usize, zero_constant: bool) -> Result<PowerSeries> {
    let mut c: Vec<f64> = (0..=order).map(|_| rng.gen::<f64>()).collect();
    if zero_constant {
        c[0] = 0.0;
    }
    PowerSeries::new(c)
}

fn exp_log_roundtrip(_: &Context) -> Result<Outcome> {
    let mut rng = rng(21);
    let mut worst: f64 = 0.0;
    for _ in 0..500 {
        let order = rng.gen_range(0..=30);
        let f = random_series(&mut rng, order, false)?;
        let back = log_series(&exp_series(&f))?;
        for (x, y) in back.coefficients().iter().zip(f.coefficients()) {
            worst = worst.max((x - y).abs());
        }
    }
    Ok(at_most(worst, 1e-9))
}

fn composition_consistency(_: &Context) -> Result<Outcome> {
    let mut rng = rng(22);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let order = rng.gen_range(1..=30);
        let f = random_series(&mut rng, order, true)?;
        let e = PowerSeries::from_fn(order, |k| {
            (1..=k).map(|j| j as f64).product::<f64>().recip()
        })?;
        let composed = compose_series(&e, &f)?;
        for (x, y) in composed
            .coefficients()
            .iter()
            .zip(exp_series(&f).coefficients())
        {
            worst = worst.max((x - y).abs());
        }
    }
    Ok(at_most(worst, 1e-9))
}

fn sign_closure(_: &Context) -> Result<Outcome> {
    let mut rng = rng(23);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let order = rng.gen_range(1..=30);
        let outer_order = rng.gen_range(1..=30);
        let outer = random_series(&mut rng, outer_order, false)?;
        let f = random_series(&mut rng, order, true)?;
        for c in compose_series(&outer, &f)?.coefficients() {
            worst = worst.max(-c);
        }
        for c in exp_series(&f).coefficients() {
            worst = worst.max(-c);
        }
    }
    Ok(at_most(worst, 1e-12))
}

/// The reference series with known radii.
pub fn radius_corpus(order: usize) -> Result<Vec<(&'static str, PowerSeries)>> {
    Ok(vec![
        (
            "log",
            PowerSeries::from_fn(order, |n| if n == 0 { 0.0 } else { 1.0 / n as f64 })?,
        ),
        (
            "dilog",
            PowerSeries::from_fn(order, |n| if n == 0 { 0.0 } else { 1.0 / (n * n) as f64 })?,
        ),
        (
            "log-half",
            PowerSeries::from_fn(order, |n| {
                if n == 0 {
                    0.0
                } else {
                    1.0 / (n as f64 * 2f64.powi(n as i32))
                }
            })?,
        ),
        (
            "z",
            PowerSeries::from_fn(order, |n| if n == 1 { 1.0 } else { 0.0 })?,
        ),
        (
            "z-plus-half-square",
            PowerSeries::from_fn(order, |n| match n {
                1 => 1.0,
                2 => 0.5,
                _ => 0.0,
            })?,
        ),
    ])
}

fn radius_equality(_: &Context) -> Result<Outcome> {
    let mut bad = 0;
    for (_, f) in radius_corpus(100)? {
        if !radius_equality_check(&f)?.pass {
            bad += 1;
        }
    }
    Ok(violations(bad))
}

fn finite_difference_probes(_: &Context) -> Result<Outcome> {
    let mut bad = 0;
    let log_zeta = |x: f64| Ok(crate::dirichlet::zeta_real(x)?.ln());
    if !completely_monotone_probe(log_zeta, 1.5, 5.0, 0.1, 6)?.passed {
        bad += 1;
    }
    if completely_monotone_probe(Ok, 1.5, 5.0, 0.1, 6)?.first_failing_order != Some(1) {
        bad += 1;
    }
    if !completely_monotone_probe(|x| Ok((-x).exp()), 0.0, 5.0, 0.1, 6)?.passed {
        bad += 1;
    }
    if !absolutely_monotone_probe(|x| Ok(x.exp()), 0.0, 2.0, 0.1, 6)?.passed {
        bad += 1;
    }
    if absolutely_monotone_probe(|x| Ok(x.sin()), 0.0, 3.0, 0.1, 6)?.passed {
        bad += 1;
    }
    Ok(violations(bad))
}

fn dirichlet_stream_monotone(ctx: &Context) -> Result<Outcome> {
    let mut bad = 0;
    let functions = [
        CoefficientFunction::Unit,
        CoefficientFunction::Liouville,
        CoefficientFunction::VerticalTwist(14.134725),
    ];
    for system in [ctx.classical(), ctx.gaussian.clone()] {
        let s1 = system.abscissa();
        for a in &functions {
            let d = square_pair_coefficients(a, &system, PairSign::Plus, ctx.max_n)?;
            let report =
                completely_monotone_probe(|x| Ok(d.eval_real(x)), s1 + 0.5, s1 + 4.0, 0.1, 6)?;
            if !report.passed {
                bad += 1;
            }
        }
    }
    Ok(violations(bad))
}

fn half_plane_exhaustion(_: &Context) -> Result<Outcome> {
    let window = EvaluationWindow::new(0.5, 1.0, 2.0)?;
    let eps = 0.05;
    let mut missing = 0;
    for i in 1..=16 {
        let sigma = window.sigma0 + eps * i as f64 * 1.5;
        for j in -8..=8 {
            let s = Complex64::new(sigma, 2.5 * j as f64);
            if exhaustion_center(s, &window, eps, 200_000).is_none() {
                missing += 1;
            }
        }
    }
    Ok(violations(missing))
}

// beurling

fn beta_multiplicative(ctx: &Context) -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for system in ctx.systems()? {
        let side = ((system.coverage() as f64).sqrt() as u64).min(1000);
        let side = side.min((ctx.max_n as f64).sqrt() as u64 * 4);
        let betas: Vec<f64> = (0..=side * side)
            .map(|n| {
                if n == 0 {
                    Ok(0.0)
                } else {
                    system.beta_value(n)
                }
            })
            .collect::<Result<_>>()?;
        for n in 1..=side as usize {
            for m in 1..=side as usize {
                let prod = betas[n] * betas[m];
                worst = worst.max((betas[n * m] - prod).abs() / prod);
            }
        }
    }
    Ok(at_most(worst, 1e-12))
}

fn beta_growth(ctx: &Context) -> Result<Outcome> {
    let mut bad = 0;
    for system in ctx.systems()? {
        let bound = system
            .coverage()
            .min(ctx.max_n.max(100_000))
            .min(ctx.table.limit());
        let log_beta = system.log_beta_up_to(bound)?;
        for (n, &lb) in log_beta.iter().enumerate().skip(2) {
            let floor = (n as f64).ln() / system.degree();
            if !(lb > 0.0) || lb < floor - 1e-12 * floor.max(1.0) {
                bad += 1;
            }
        }
        for &p in system.prime_table().primes_up_to(bound) {
            if system.prime_beta(p)? < system.beta_min() {
                bad += 1;
            }
        }
    }
    Ok(violations(bad))
}

fn beurling_mangoldt_identity(ctx: &Context) -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for system in [ctx.classical(), ctx.gaussian.clone()] {
        for n in 1..=ctx.max_n.min(10_000) {
            worst = worst.max(beur_mangoldt_identity_residual(&system, n)?);
        }
    }
    Ok(at_most(worst, 1e-10))
}

fn dedekind_consistency(ctx: &Context) -> Result<Outcome> {
    let chi4 = crate::arith::character_mod(4, 1)?;
    let mut worst: f64 = f64::NEG_INFINITY;
    for (sigma, t) in [(2.0, 0.0), (3.0, 0.0), (4.0, 0.0), (3.0, 4.0)] {
        let s = ComplexPoint::new(sigma, t)?;
        let z = zeta_system_eval(&ctx.gaussian, s, ctx.max_n)?;
        let (a, b) = (zeta(s)?, l_function(&chi4, s)?);
        let product = a.value * b.value;
        let combined =
            z.error_bound + a.error_bound * b.value.norm() + b.error_bound * a.value.norm();
        worst = worst.max((z.value - product).norm() - combined);
    }
    Ok(at_most(worst, 0.0))
}

/// Z depends only on the multiset of prime images: reassigning them changes
/// the truncated sums but not the Euler product.
fn norm_order_invariance(ctx: &Context) -> Result<Outcome> {
    let primes = ctx.table.primes_up_to(10_000);
    let betas: Vec<f64> = primes
        .iter()
        .map(|&p| ctx.gaussian.prime_beta(p))
        .collect::<Result<_>>()?;
    let as_entries = |order: &[f64]| {
        primes
            .iter()
            .copied()
            .zip(order.iter().copied())
            .collect::<Vec<_>>()
    };
    let tie_swapped = {
        let mut b = betas.clone();
        for i in 0..b.len() - 1 {
            if b[i] == b[i + 1] {
                b.swap(i, i + 1);
            }
        }
        b
    };
    let mut shuffled = betas.clone();
    for i in (1..shuffled.len() - 1).step_by(2) {
        if shuffled[i + 1] >= (primes[i] as f64).sqrt()
            && shuffled[i] >= (primes[i + 1] as f64).sqrt()
        {
            shuffled.swap(i, i + 1);
        }
    }
    let s = Complex64::new(3.0, 2.0);
    let euler = |order: &[f64]| -> Complex64 {
        order
            .iter()
            .map(|&b| 1.0 / (1.0 - (-s * b.ln()).exp()))
            .product()
    };
    let reference = euler(&betas);
    let mut worst: f64 = 0.0;
    for order in [&tie_swapped, &shuffled] {
        worst = worst.max((euler(order) - reference).norm() / reference.norm());
        let system = BeurlingSystem::custom(
            "permuted",
            2.0,
            2.0,
            &as_entries(order),
            Arc::clone(&ctx.table),
        )?;
        let original = BeurlingSystem::custom(
            "original",
            2.0,
            2.0,
            &as_entries(&betas),
            Arc::clone(&ctx.table),
        )?;
        let n = ctx.max_n.min(system.coverage());
        let point = ComplexPoint::new(s.re, s.im)?;
        let (x, y) = (
            zeta_system_eval(&system, point, n)?,
            zeta_system_eval(&original, point, n)?,
        );
        let excess = (x.value - y.value).norm() - (x.error_bound + y.error_bound);
        worst = worst.max(excess);
    }
    Ok(at_most(worst, 1e-12))
}

fn divergence_probe(ctx: &Context) -> Result<Outcome> {
    let sigmas = [1.5, 1.2, 1.05];
    let mut bad = 0;
    for system in [ctx.classical(), ctx.gaussian.clone()] {
        let terms = ctx.max_n.min(system.coverage());
        if !prime_sum_divergence_probe(&system, &sigmas, terms)?.strictly_increasing {
            bad += 1;
        }
    }
    let at_two = prime_sum_divergence_probe(&ctx.classical(), &[2.0], ctx.max_n)?.values[0];
    let gap = PRIME_ZETA_2 - at_two;
    if !(gap >= 0.0 && gap <= 1.0 / ctx.max_n as f64) {
        bad += 1;
    }
    Ok(violations(bad))
}

// zerofree

fn disk_minimum(_: &Context) -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    let mut below = false;
    for grid in [100, 137, 401, 1000] {
        let m = min_re_w_plus_w2(grid, Region::Disk)?;
        below |= m.value < DISK_MINIMUM - 1e-9;
        worst = worst.max((m.value - DISK_MINIMUM).abs());
        for w in &m.argmin {
            let v = w.re + (w * w).re;
            below |= v < DISK_MINIMUM - 1e-9 || w.norm() > 1.0 + 1e-12;
        }
    }
    Ok(Outcome {
        passed: !below && worst <= 1e-6,
        metric: worst,
        threshold: 1e-6,
    })
}

fn per_prime_chain(_: &Context) -> Result<Outcome> {
    let mut rng = rng(41);
    let mut bad = 0;
    for _ in 0..10_000 {
        let a = random_disk_point(&mut rng);
        for p in [2u64, 3, 5, 7, 11] {
            for sigma in [0.6, 1.0, 2.0] {
                if !per_prime_bound_check(a, p, sigma)?.pass {
                    bad += 1;
                }
            }
        }
    }
    for k in 0..64 {
        let a = Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / 64.0);
        if !per_prime_bound_check(a, 2, 0.6)?.pass {
            bad += 1;
        }
    }
    Ok(violations(bad))
}

fn prime_sum_bound(ctx: &Context) -> Result<Outcome> {
    let functions = [
        CoefficientFunction::Unit,
        CoefficientFunction::Liouville,
        CoefficientFunction::VerticalTwist(14.134725),
        CoefficientFunction::custom(random_prime_values(&ctx.table, ctx.max_n, 43)?),
    ];
    let mut bad = 0;
    for system in [ctx.classical(), ctx.gaussian.clone()] {
        for a in &functions {
            for sigma in [1.5, 2.0] {
                if !prime_sum_bound_check(a, &system, sigma, ctx.max_n)?.pass {
                    bad += 1;
                }
            }
        }
    }
    Ok(violations(bad))
}

fn toy_factorization(ctx: &Context) -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    let mut bad = 0;
    for t0 in [1.0, 14.0, 25.0] {
        let coarse =
            toy_factorization_check(&ctx.table, t0, 2.0, ctx.max_n / 10)?.relative_residual;
        let fine = toy_factorization_check(&ctx.table, t0, 2.0, ctx.max_n)?.relative_residual;
        if !(fine < coarse) {
            bad += 1;
        }
        worst = worst.max(fine);
    }
    let tolerance = 10.0 / ctx.max_n as f64;
    Ok(Outcome {
        passed: bad == 0 && worst <= tolerance,
        metric: worst,
        threshold: tolerance,
    })
}

fn liouville_converse(ctx: &Context) -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for sigma in [2.0, 3.0] {
        worst =
            worst.max(liouville_converse_check(&ctx.table, sigma, ctx.max_n)?.relative_residual);
    }
    Ok(at_most(worst, 1e-3))
}

fn pingpong_derivation(_: &Context) -> Result<Outcome> {
    let k = crate::zerofree::DEFAULT_GRID_HALF_WIDTH;
    let mut bad = 0;
    for g in [1.0, -0.5, std::f64::consts::SQRT_2] {
        for (seed_in_b, point) in [(true, 1i64), (true, -2), (false, 1), (false, 2)] {
            if (3 * point).abs() > k {
                continue;
            }
            let mut state = PingPongState::new(g, k)?;
            if seed_in_b {
                state.assert_b(point, true)?;
            } else {
                state.assert_a(point, true)?;
            }
            let closed = pingpong_derive(&state);
            let target = if seed_in_b { 3 * point } else { -3 * point };
            if closed.a(target) != Truth::True || closed.b(target) != Truth::True {
                bad += 1;
            }
            if closed.applications > (k * k) as usize {
                bad += 1;
            }
            let again = pingpong_derive(&closed);
            if again.applications != 0 || again.memberships() != closed.memberships() {
                bad += 1;
            }
            for j in -k..=k {
                let grew =
                    |before: Truth, after: Truth| before == Truth::Unknown || before == after;
                if !grew(state.a(j), closed.a(j)) && closed.a(j) != Truth::Conflict {
                    bad += 1;
                }
            }
        }
    }
    Ok(violations(bad))
}

fn pingpong_disjoint(_: &Context) -> Result<Outcome> {
    let k = crate::zerofree::DEFAULT_GRID_HALF_WIDTH;
    let mut bad = 0;
    for seed in (-k..=k).filter(|&j| j != 0) {
        for in_a in [true, false] {
            let mut state = PingPongState::new(1.0, k)?;
            if in_a {
                state.assert_a(seed, true)?;
            } else {
                state.assert_b(seed, true)?;
            }
            if (3 * seed).abs() <= k
                && !matches!(
                    pingpong_disjoint_resolve(&state)?,
                    Resolution::Contradiction { .. }
                )
            {
                bad += 1;
            }
        }
    }
    match pingpong_disjoint_resolve(&PingPongState::new(1.0, k)?)? {
        Resolution::Consistent { a, b, forced } if a == vec![0] && b.is_empty() && forced => {}
        _ => bad += 1,
    }
    Ok(violations(bad))
}

/// A random complete model satisfying the midpoint rule, built by extending
/// the closure of `0 ∈ A, b ∈ B` with random decisions.
fn random_model(rng: &mut ChaCha8Rng, k: i64, b: i64) -> Result<Option<(Vec<bool>, Vec<bool>)>> {
    let mut state = PingPongState::new(1.0, k)?;
    state.assert_b(b, true)?;
    state = pingpong_derive(&state);
    for j in -k..=k {
        for side_a in [true, false] {
            let current = if side_a { state.a(j) } else { state.b(j) };
            if current != Truth::Unknown {
                continue;
            }
            let value = rng.gen_bool(0.3);
            if side_a {
                state.assert_a(j, value)?;
            } else {
                state.assert_b(j, value)?;
            }
            state = pingpong_derive(&state);
            if state.has_contradiction() {
                return Ok(None);
            }
        }
    }
    let a = (-k..=k).map(|j| state.a(j) == Truth::True).collect();
    let bs = (-k..=k).map(|j| state.b(j) == Truth::True).collect();
    Ok(Some((a, bs)))
}

fn pingpong_soundness(_: &Context) -> Result<Outcome> {
    let mut counterexamples = 0;
    // Exhaustive at K = 4 with 0 ∈ A fixed: 2^17 models.
    let k = 4i64;
    let size = (2 * k + 1) as u32;
    for bits in 0u64..(1 << (2 * size - 1)) {
        let full = (bits << 1) | 1;
        let in_a = |j: i64| full >> (j + k) & 1 == 1;
        let in_b = |j: i64| full >> (size as i64 + j + k) & 1 == 1;
        if !in_a(0) || !validate_model(k, |j, a| if a { in_a(j) } else { in_b(j) }) {
            continue;
        }
        for b in [-1i64, 1] {
            if in_b(b) && !(in_a(3 * b) && in_b(3 * b)) {
                counterexamples += 1;
            }
        }
    }
    // Randomized at K = 8.
    let k = 8i64;
    let mut rng = rng(61);
    let mut models = 0;
    let mut attempts = 0;
    while models < 1000 && attempts < 100_000 {
        attempts += 1;
        let b = [-2i64, -1, 1, 2][rng.gen_range(0..4)];
        let Some((a, bs)) = random_model(&mut rng, k, b)? else {
            continue;
        };
        let member = |j: i64, side_a: bool| {
            if side_a {
                a[(j + k) as usize]
            } else {
                bs[(j + k) as usize]
            }
        };
        if !validate_model(k, member) {
            continue;
        }
        models += 1;
        if !(member(3 * b, true) && member(3 * b, false)) {
            counterexamples += 1;
        }
    }
    if models < 1000 {
        counterexamples += 1;
    }
    Ok(violations(counterexamples))
}
