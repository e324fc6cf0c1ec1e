//! End-to-end acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::process::{Command, ExitCode};
use std::sync::Arc;
use std::time::{Duration, Instant};

use dirichlet_forge::arith::{
    character_mod, mangoldt_divisor_identity_residual, CoefficientFunction, PrimeTable,
};
use dirichlet_forge::beurling::{
    beur_mangoldt_identity_residual, prime_sum_divergence_probe, zeta_system_eval, BeurlingSystem,
    QuadraticFieldSpec,
};
use dirichlet_forge::dirichlet::{l_function, log_coefficients, zeta, zeta_real, ComplexPoint};
use dirichlet_forge::monotone::{completely_monotone_probe, radius_equality_check};
use dirichlet_forge::verify::radius_corpus;
use dirichlet_forge::zerofree::{
    liouville_converse_check, min_re_w_plus_w2, per_prime_bound_check, pingpong_derive,
    pingpong_disjoint_resolve, toy_factorization_check, Membership, PingPongState, Region,
    Resolution, Truth,
};
use dirichlet_forge::Result;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: impl Into<String>) -> Result<Verdict> {
    Ok(Verdict {
        passed,
        detail: detail.into(),
    })
}

fn table() -> Arc<PrimeTable> {
    Arc::new(PrimeTable::new(1_000_000).expect("sieve"))
}

fn gaussian(table: Arc<PrimeTable>) -> Result<BeurlingSystem> {
    BeurlingSystem::quadratic_field(QuadraticFieldSpec::new(-1, 2_000_000)?, table)
}

fn divisor_identity() -> Result<Verdict> {
    let table = PrimeTable::new(100_000)?;
    let mut worst: f64 = 0.0;
    for n in 1..=100_000 {
        worst = worst.max(mangoldt_divisor_identity_residual(&table, n)?);
    }
    verdict(
        worst <= 1e-12,
        format!("max residual {worst:.3e} over n <= 1e5 (limit 1e-12)"),
    )
}

fn exponential_representation() -> Result<Verdict> {
    let table = table();
    let classical = BeurlingSystem::classical(table);
    let unit = log_coefficients(&CoefficientFunction::Unit, &classical, 100_000)?
        .eval_real(3.0)
        .exp();
    let unit_err = (zeta_real(3.0)? - unit).abs();
    let liou = log_coefficients(&CoefficientFunction::Liouville, &classical, 1_000_000)?
        .eval_real(2.0)
        .exp();
    let liou_err = (zeta_real(4.0)? / zeta_real(2.0)? - liou).abs();
    verdict(
        unit_err <= 1e-5 && liou_err <= 1e-4,
        format!(
            "unit at 3: {unit_err:.3e} (limit 1e-5); liouville at 2: {liou_err:.3e} (limit 1e-4)"
        ),
    )
}

fn boxed_inequality() -> Result<Verdict> {
    let m = min_re_w_plus_w2(2001, Region::Disk)?;
    let value_ok = (m.value + 1.125).abs() <= 1e-6;
    let targets = [
        Complex64::new(0.25, 0.9682458),
        Complex64::new(0.25, -0.9682458),
    ];
    let argmin_ok = m.argmin.len() == 2
        && targets
            .iter()
            .all(|t| m.argmin.iter().any(|w| (w - t).norm() <= 1e-4));
    let found: Vec<String> = m
        .argmin
        .iter()
        .map(|w| format!("{:.7}{:+.7}i", w.re, w.im))
        .collect();
    verdict(
        value_ok && argmin_ok,
        format!(
            "minimum {:.9} (target -1.125 within 1e-6: {value_ok}); minimizers [{}] vs 0.25 +- 0.9682458i within 1e-4: {argmin_ok}",
            m.value,
            found.join(", ")
        ),
    )
}

fn per_prime_chain() -> Result<Verdict> {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut violations = 0;
    let mut cases = 0;
    for _ in 0..10_000 {
        let r = rng.gen::<f64>().sqrt();
        let theta = rng.gen_range(0.0..std::f64::consts::TAU);
        let a = Complex64::from_polar(r, theta);
        for p in [2u64, 3, 5, 7, 11] {
            for sigma in [0.6, 1.0, 2.0] {
                cases += 1;
                if !per_prime_bound_check(a, p, sigma)?.pass {
                    violations += 1;
                }
            }
        }
    }
    verdict(
        violations == 0,
        format!("{violations} violations in {cases} cases"),
    )
}

fn radius_equality() -> Result<Verdict> {
    let mut failing = Vec::new();
    for (name, f) in radius_corpus(100)? {
        if !radius_equality_check(&f)?.pass {
            failing.push(name);
        }
    }
    verdict(
        failing.is_empty(),
        format!("corpus of 5 series, failing: {failing:?}"),
    )
}

fn monotonicity_probe() -> Result<Verdict> {
    let log_zeta = completely_monotone_probe(|x| Ok(zeta_real(x)?.ln()), 1.5, 5.0, 0.1, 6)?;
    let identity = completely_monotone_probe(Ok, 1.5, 5.0, 0.1, 6)?;
    verdict(
        log_zeta.passed && identity.first_failing_order == Some(1),
        format!(
            "log zeta passes k <= 6: {}; identity first fails at k = {:?}",
            log_zeta.passed, identity.first_failing_order
        ),
    )
}

fn dedekind_consistency() -> Result<Verdict> {
    let g = gaussian(table())?;
    let chi4 = character_mod(4, 1)?;
    let mut worst: f64 = 0.0;
    for sigma in [2.0, 3.0, 4.0] {
        let s = ComplexPoint::real(sigma);
        let z = zeta_system_eval(&g, s, 1_000_000)?.value;
        let product = zeta(s)?.value * l_function(&chi4, s)?.value;
        worst = worst.max((z - product).norm());
    }
    verdict(
        worst <= 1e-4,
        format!("max |Z - zeta L| {worst:.3e} at s = 2, 3, 4 (limit 1e-4)"),
    )
}

fn mangoldt_identity() -> Result<Verdict> {
    let table = table();
    let systems = [
        BeurlingSystem::classical(Arc::clone(&table)),
        gaussian(table)?,
    ];
    let mut worst: f64 = 0.0;
    for system in &systems {
        for n in 1..=10_000 {
            worst = worst.max(beur_mangoldt_identity_residual(system, n)?);
        }
    }
    verdict(
        worst <= 1e-10,
        format!("max residual {worst:.3e} (limit 1e-10)"),
    )
}

fn divergence() -> Result<Verdict> {
    let table = table();
    let classical = BeurlingSystem::classical(Arc::clone(&table));
    let g = gaussian(table)?;
    let sigmas = [1.5, 1.2, 1.05];
    let c = prime_sum_divergence_probe(&classical, &sigmas, 1_000_000)?;
    let q = prime_sum_divergence_probe(&g, &sigmas, 1_000_000)?;
    let at_two = prime_sum_divergence_probe(&classical, &[2.0], 1_000_000)?.values[0];
    let close = (at_two - 0.4522474).abs() <= 1e-4;
    verdict(
        c.strictly_increasing && q.strictly_increasing && close,
        format!(
            "classical {:?}, gaussian {:?}, classical at 2 = {at_two:.7}",
            c.values, q.values
        ),
    )
}

fn toy_factorization() -> Result<Verdict> {
    let table = PrimeTable::new(1_000_000)?;
    let mut ok = true;
    let mut parts = Vec::new();
    for t0 in [1.0, 14.0] {
        let r: Vec<f64> = [10_000, 100_000, 1_000_000]
            .iter()
            .map(|&n| Ok(toy_factorization_check(&table, t0, 1.5, n)?.relative_residual))
            .collect::<Result<_>>()?;
        ok &= r[2] <= 1e-3 && r[1] < r[0] && r[2] < r[1];
        parts.push(format!(
            "t0 = {t0}: {:.2e} > {:.2e} > {:.2e}",
            r[0], r[1], r[2]
        ));
    }
    verdict(ok, parts.join("; "))
}

fn liouville_converse() -> Result<Verdict> {
    let table = PrimeTable::new(1_000_000)?;
    let mut worst: f64 = 0.0;
    for sigma in [1.5, 2.0] {
        worst = worst.max(liouville_converse_check(&table, sigma, 1_000_000)?.relative_residual);
    }
    verdict(
        worst <= 1e-3,
        format!("max relative residual {worst:.3e} (limit 1e-3)"),
    )
}

fn midpoint_rule_holds(k: i64, in_a: &dyn Fn(i64) -> bool, in_b: &dyn Fn(i64) -> bool) -> bool {
    (-k..=k).all(|x| {
        (-k..=k).all(|y| x == y || (x + y) % 2 != 0 || !in_a((x + y) / 2) || in_a(x) == in_b(y))
    })
}

fn pingpong() -> Result<Verdict> {
    let k = 8;
    let mut derivation = true;
    for b in [1i64, -1, 2, -2] {
        let mut s = PingPongState::new(1.0, k)?;
        s.assert_b(b, true)?;
        derivation &= pingpong_derive(&s).membership(3 * b) == Membership::InBoth;
        let mut s = PingPongState::new(1.0, k)?;
        s.assert_a(b, true)?;
        derivation &= pingpong_derive(&s).membership(-3 * b) == Membership::InBoth;
    }
    let mut disjoint = true;
    for j in [-2i64, -1, 1, 2] {
        for in_a in [true, false] {
            let mut s = PingPongState::new(1.0, k)?;
            if in_a {
                s.assert_a(j, true)?;
            } else {
                s.assert_b(j, true)?;
            }
            disjoint &= matches!(
                pingpong_disjoint_resolve(&s)?,
                Resolution::Contradiction { .. }
            );
        }
    }
    disjoint &= matches!(
        pingpong_disjoint_resolve(&PingPongState::new(1.0, k)?)?,
        Resolution::Consistent { ref a, ref b, .. } if a == &[0] && b.is_empty()
    );
    // Random complete models grown from {0 in A, b in B}.
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let (mut models, mut counterexamples, mut attempts) = (0, 0, 0);
    while models < 1000 && attempts < 200_000 {
        attempts += 1;
        let b = [-2i64, -1, 1, 2][rng.gen_range(0..4)];
        let mut s = PingPongState::new(1.0, k)?;
        s.assert_b(b, true)?;
        s = pingpong_derive(&s);
        for j in -k..=k {
            for side_a in [true, false] {
                if (if side_a { s.a(j) } else { s.b(j) }) != Truth::Unknown {
                    continue;
                }
                let v = rng.gen_bool(0.3);
                if side_a {
                    s.assert_a(j, v)?;
                } else {
                    s.assert_b(j, v)?;
                }
                s = pingpong_derive(&s);
            }
        }
        if s.has_contradiction() {
            continue;
        }
        let in_a = |j: i64| s.a(j) == Truth::True;
        let in_b = |j: i64| s.b(j) == Truth::True;
        if !midpoint_rule_holds(k, &in_a, &in_b) {
            continue;
        }
        models += 1;
        if !(in_a(3 * b) && in_b(3 * b)) {
            counterexamples += 1;
        }
    }
    verdict(
        derivation && disjoint && models >= 1000 && counterexamples == 0,
        format!("derivation {derivation}; disjoint resolution {disjoint}; {counterexamples} counterexamples in {models} random models"),
    )
}

fn determinism() -> Result<Verdict> {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_dirichlet-forge"))
            .args(["--threads", "4", "verify-all"])
            .env_remove("DIRICHLET_FORGE_CONFIG")
            .output()
    };
    let (first, second) = (run()?, run()?);
    let same = first.stdout == second.stdout && !first.stdout.is_empty();
    verdict(
        same,
        format!(
            "{} bytes, identical: {same}, exit codes {:?}/{:?}",
            first.stdout.len(),
            first.status.code(),
            second.status.code()
        ),
    )
}

fn main() -> ExitCode {
    type Check = fn() -> Result<Verdict>;
    let criteria: [(&str, Check, Option<Duration>); 13] = [
        (
            "divisor identity",
            divisor_identity,
            Some(Duration::from_secs(5)),
        ),
        (
            "exponential representation",
            exponential_representation,
            Some(Duration::from_secs(30)),
        ),
        ("disk inequality", boxed_inequality, None),
        ("per-prime chain", per_prime_chain, None),
        (
            "radius equality",
            radius_equality,
            Some(Duration::from_secs(1)),
        ),
        ("complete monotonicity probe", monotonicity_probe, None),
        (
            "gaussian dedekind consistency",
            dedekind_consistency,
            Some(Duration::from_secs(60)),
        ),
        ("generalized mangoldt identity", mangoldt_identity, None),
        ("prime sum divergence", divergence, None),
        ("toy factorization", toy_factorization, None),
        ("liouville converse", liouville_converse, None),
        ("ping-pong closure", pingpong, None),
        ("determinism", determinism, None),
    ];
    let mut failures = 0;
    for (name, check, budget) in criteria {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let (mut passed, mut detail) = match outcome {
            Ok(v) => (v.passed, v.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if let Some(limit) = budget {
            if elapsed > limit {
                passed = false;
                detail += &format!("; over time budget of {limit:?}");
            }
        }
        if !passed {
            failures += 1;
        }
        let status = if passed { "PASS" } else { "FAIL" };
        println!("{status} {name}: {detail} [{:.2}s]", elapsed.as_secs_f64());
    }
    println!("{} of 13 criteria passed", 13 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
