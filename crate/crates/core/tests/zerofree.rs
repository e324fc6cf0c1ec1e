use std::sync::{Arc, OnceLock};

use dirichlet_forge::arith::{CoefficientFunction, PrimeTable};
use dirichlet_forge::beurling::{BeurlingSystem, QuadraticFieldSpec};
use dirichlet_forge::dirichlet::zeta_real;
use dirichlet_forge::zerofree::{
    liouville_converse_check, min_re_w_plus_w2, per_prime_bound_check, per_prime_bound_check_beta,
    pingpong_derive, pingpong_disjoint_resolve, prime_sum_bound_check, toy_factorization_check,
    Membership, PingPongState, Region, Resolution, Truth, DISK_MINIMUM,
};
use dirichlet_forge::Error;
use num_complex::Complex64;
use proptest::prelude::*;

fn table() -> &'static PrimeTable {
    static TABLE: OnceLock<PrimeTable> = OnceLock::new();
    TABLE.get_or_init(|| PrimeTable::new(1_000_000).unwrap())
}

fn re_w_plus_w2(w: Complex64) -> f64 {
    w.re + (w * w).re
}

#[test]
fn disk_minimum() {
    let w_star = Complex64::new(-0.25, 15f64.sqrt() / 4.0);
    assert!((re_w_plus_w2(w_star) + 1.125).abs() < 1e-15);
    for grid in [100, 401, 2001] {
        let m = min_re_w_plus_w2(grid, Region::Disk).unwrap();
        assert!(
            (m.value - DISK_MINIMUM).abs() < 1e-6,
            "grid {grid}: {}",
            m.value
        );
        assert_eq!(m.argmin.len(), 2);
        assert!((m.argmin[0] - w_star).norm() < 1e-4, "{:?}", m.argmin);
        assert!((m.argmin[1] - w_star.conj()).norm() < 1e-4);
    }
}

#[test]
fn restricted_minima() {
    let m = min_re_w_plus_w2(2001, Region::RealSegment).unwrap();
    assert!((m.value + 0.25).abs() < 1e-9);
    assert_eq!(m.argmin.len(), 1);
    assert!((m.argmin[0] - Complex64::new(-0.5, 0.0)).norm() < 1e-4);
    // On |w| = 1 the objective is 2c^2 + c - 1 with c = cos(theta).
    let m = min_re_w_plus_w2(2001, Region::UnitCircle).unwrap();
    let c = -0.25;
    assert!((m.value - (2.0 * c * c + c - 1.0)).abs() < 1e-9);
    for w in &m.argmin {
        assert!((w.norm() - 1.0).abs() < 1e-12);
        assert!((w.re - c).abs() < 1e-4);
    }
    assert!(min_re_w_plus_w2(99, Region::Disk).is_err());
}

#[test]
fn per_prime_examples() {
    let a = Complex64::new(0.25, 15f64.sqrt() / 4.0);
    let r = per_prime_bound_check(a, 2, 1.0).unwrap();
    assert!((r.lhs - 1.28125).abs() < 1e-12);
    assert!((r.mid - 0.34375).abs() < 1e-12);
    assert!((r.rhs - 0.21875).abs() < 1e-12);
    assert!(r.pass);
    let r = per_prime_bound_check(Complex64::new(1.0, 0.0), 2, 1.0).unwrap();
    assert_eq!((r.lhs, r.mid, r.rhs, r.pass), (2.5, 1.0, 0.21875, true));
    let r = per_prime_bound_check(Complex64::new(-1.0, 0.0), 2, 1.0).unwrap();
    assert_eq!((r.lhs, r.mid, r.rhs, r.pass), (0.5, 0.5, 0.21875, true));
    // The worst unit-disk value makes the middle term meet 7/8 exactly.
    let w = Complex64::new(-0.25, 15f64.sqrt() / 4.0);
    let r = per_prime_bound_check(w, 3, 2.0).unwrap();
    assert!((r.mid - r.rhs).abs() < 1e-15);
    assert!(r.pass);
    assert!(matches!(
        per_prime_bound_check(Complex64::new(0.8, 0.8), 2, 1.0),
        Err(Error::Precondition(_))
    ));
    assert!(per_prime_bound_check_beta(Complex64::new(0.5, 0.0), 1.0, 1.0).is_err());
    assert!(per_prime_bound_check(Complex64::new(0.5, 0.0), 2, 0.0).is_err());
}

#[test]
fn prime_sum_bound() {
    let classical = BeurlingSystem::classical(Arc::new(table().clone()));
    let gaussian = BeurlingSystem::quadratic_field(
        QuadraticFieldSpec::new(-1, 2_000_000).unwrap(),
        Arc::new(table().clone()),
    )
    .unwrap();
    for system in [&classical, &gaussian] {
        for a in [
            CoefficientFunction::Unit,
            CoefficientFunction::Liouville,
            CoefficientFunction::VerticalTwist(14.134725),
            CoefficientFunction::character(5, 2).unwrap(),
        ] {
            for sigma in [1.5, 2.0, 3.0] {
                let r = prime_sum_bound_check(&a, system, sigma, 100_000).unwrap();
                assert!(r.pass && r.series >= r.bound);
            }
        }
    }
    let r = prime_sum_bound_check(&CoefficientFunction::Unit, &classical, 2.0, 1_000_000).unwrap();
    let primes: f64 = table()
        .primes()
        .iter()
        .rev()
        .map(|&p| (p as f64).powi(-4))
        .sum();
    assert!((r.bound - 0.875 * primes).abs() < 1e-14);
}

#[test]
fn toy_factorization_examples() {
    let r = toy_factorization_check(table(), 14.0, 2.0, 100_000).unwrap();
    assert!(r.relative_residual <= 1e-3);
    let r = toy_factorization_check(table(), 0.0, 2.0, 100_000).unwrap();
    assert!((r.product - zeta_real(2.0).unwrap().powi(4)).abs() < 1e-10);
    assert!(r.relative_residual <= 1e-4);
    for t0 in [0.0, 14.0, 100.0] {
        let r = toy_factorization_check(table(), t0, 30.0, 1_000).unwrap();
        assert!((r.product - 1.0).abs() <= 1e-8);
        assert!((r.exponential - 1.0).abs() <= 1e-8);
    }
    for t0 in [1.0, 14.0, 25.0] {
        let coarse = toy_factorization_check(table(), t0, 1.5, 10_000).unwrap();
        let fine = toy_factorization_check(table(), t0, 1.5, 1_000_000).unwrap();
        assert!(
            fine.relative_residual < coarse.relative_residual,
            "t0 = {t0}"
        );
        assert!(fine.relative_residual <= 1e-3);
    }
    assert!(matches!(
        toy_factorization_check(table(), 14.0, 1.0, 100),
        Err(Error::Window { .. })
    ));
}

#[test]
fn liouville_converse_examples() {
    let z3 = zeta_real(3.0).unwrap();
    let r = liouville_converse_check(table(), 1.5, 1_000_000).unwrap();
    assert!((r.target - z3 * z3).abs() < 1e-12);
    assert!((r.target - 1.4449415).abs() < 1e-6);
    assert!(r.relative_residual <= 1e-3);
    let r = liouville_converse_check(table(), 2.0, 1_000_000).unwrap();
    assert!((r.target - 1.1714236).abs() < 1e-6);
    assert!(r.relative_residual <= 1e-4);
    let r = liouville_converse_check(table(), 30.0, 1_000).unwrap();
    for v in [r.target, r.product, r.exponential] {
        assert!((v - 1.0).abs() <= 1e-8);
    }
    assert!(liouville_converse_check(table(), 0.9, 100).is_err());
}

fn seeded(k: i64, b: &[i64], a: &[i64]) -> PingPongState {
    let mut s = PingPongState::new(1.0, k).unwrap();
    for &j in b {
        s.assert_b(j, true).unwrap();
    }
    for &j in a {
        s.assert_a(j, true).unwrap();
    }
    s
}

#[test]
fn pingpong_proof_chain() {
    for b in [1i64, -1, 2] {
        let d = pingpong_derive(&seeded(8, &[b], &[]));
        for j in [-b, 2 * b, -3 * b, 3 * b] {
            assert_eq!(d.a(j), Truth::True, "b = {b}, j = {j}");
        }
        assert_eq!(d.b(-2 * b), Truth::True);
        assert_eq!(d.membership(3 * b), Membership::InBoth);
    }
    for a in [1i64, -2] {
        let d = pingpong_derive(&seeded(8, &[], &[a]));
        assert_eq!(d.membership(-3 * a), Membership::InBoth);
    }
    let d = pingpong_derive(&seeded(8, &[0], &[]));
    assert_eq!(d.membership(0), Membership::InBoth);
    let s = PingPongState::new(0.37, 8).unwrap();
    assert_eq!(s.generator(), 0.37);
    assert_eq!(s.membership(0), Membership::InA);
    assert!(PingPongState::new(0.0, 8).is_err());
    assert!(PingPongState::new(1.0, 0).is_err());
    assert!(seeded(3, &[], &[]).clone().assert_a(4, true).is_err());
}

#[test]
fn pingpong_reaches_a_fixpoint() {
    for (b, a) in [
        (vec![1], vec![]),
        (vec![], vec![1]),
        (vec![2, -3], vec![5]),
        (vec![], vec![]),
    ] {
        let k = 8;
        let seed = seeded(k, &b, &a);
        let d = pingpong_derive(&seed);
        assert!(d.applications <= (k * k) as usize);
        for j in -k..=k {
            if seed.a(j) != Truth::Unknown {
                assert!(d.a(j) == seed.a(j) || d.a(j) == Truth::Conflict);
            }
            if seed.b(j) != Truth::Unknown {
                assert!(d.b(j) == seed.b(j) || d.b(j) == Truth::Conflict);
            }
        }
        let again = pingpong_derive(&d);
        assert_eq!(again.applications, 0);
        assert_eq!(again.memberships(), d.memberships());
    }
}

#[test]
fn pingpong_disjoint_examples() {
    for seed in [
        seeded(8, &[1], &[]),
        seeded(8, &[], &[1]),
        seeded(8, &[-2], &[]),
        seeded(8, &[], &[3, -1]),
    ] {
        assert!(matches!(
            pingpong_disjoint_resolve(&seed).unwrap(),
            Resolution::Contradiction { .. }
        ));
    }
    match pingpong_disjoint_resolve(&seeded(8, &[], &[])).unwrap() {
        Resolution::Consistent { a, b, forced } => {
            assert_eq!(a, vec![0]);
            assert!(b.is_empty());
            assert!(forced);
        }
        other => panic!("{other:?}"),
    }
}

/// The midpoint rule checked over every pair `x != y` with `(x + y)/2` on the grid.
fn satisfies_rule(k: i64, in_a: &dyn Fn(i64) -> bool, in_b: &dyn Fn(i64) -> bool) -> bool {
    for x in -k..=k {
        for y in -k..=k {
            if x == y || (x + y) % 2 != 0 {
                continue;
            }
            if in_a((x + y) / 2) && in_a(x) != in_b(y) {
                return false;
            }
        }
    }
    true
}

fn valid_models(k: i64) -> Vec<(u32, u32)> {
    let size = (2 * k + 1) as u32;
    let mut out = Vec::new();
    for a_bits in 0u32..(1 << size) {
        let in_a = |j: i64| a_bits >> (j + k) & 1 == 1;
        if !in_a(0) {
            continue;
        }
        for b_bits in 0u32..(1 << size) {
            let in_b = |j: i64| b_bits >> (j + k) & 1 == 1;
            if satisfies_rule(k, &in_a, &in_b) {
                out.push((a_bits, b_bits));
            }
        }
    }
    out
}

#[test]
fn pingpong_soundness_exhaustive() {
    let k = 4i64;
    let models = valid_models(k);
    assert!(!models.is_empty());
    let mut with_b = 0;
    for &(a_bits, b_bits) in &models {
        let in_a = |j: i64| a_bits >> (j + k) & 1 == 1;
        let in_b = |j: i64| b_bits >> (j + k) & 1 == 1;
        for b in [-1i64, 1] {
            if in_b(b) {
                with_b += 1;
                assert!(
                    in_a(3 * b) && in_b(3 * b),
                    "model A={a_bits:b} B={b_bits:b}"
                );
            }
        }
        // The closure of any seed taken from a valid model never contradicts it.
        for j in -k..=k {
            let mut s = PingPongState::new(1.0, k).unwrap();
            s.assert_a(j, in_a(j)).unwrap();
            s.assert_b(-j, in_b(-j)).unwrap();
            let d = pingpong_derive(&s);
            for i in -k..=k {
                assert!(matches!(
                    (d.a(i), in_a(i)),
                    (Truth::Unknown, _) | (Truth::True, true) | (Truth::False, false)
                ));
                assert!(matches!(
                    (d.b(i), in_b(i)),
                    (Truth::Unknown, _) | (Truth::True, true) | (Truth::False, false)
                ));
            }
        }
    }
    assert!(with_b > 0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn pingpong_soundness_randomized(b in prop_oneof![Just(-2i64), Just(-1), Just(1), Just(2)], decisions in proptest::collection::vec(any::<bool>(), 34)) {
        // Extend the closure of {0 in A, b in B} by the given decisions to a complete model.
        let k = 8i64;
        let mut state = pingpong_derive(&seeded(k, &[b], &[]));
        let mut next = decisions.into_iter();
        for j in -k..=k {
            for side_a in [true, false] {
                let current = if side_a { state.a(j) } else { state.b(j) };
                if current != Truth::Unknown {
                    continue;
                }
                let v = next.next().unwrap_or(false);
                if side_a { state.assert_a(j, v).unwrap() } else { state.assert_b(j, v).unwrap() }
                state = pingpong_derive(&state);
            }
        }
        prop_assume!(!state.has_contradiction());
        let in_a = |j: i64| state.a(j) == Truth::True;
        let in_b = |j: i64| state.b(j) == Truth::True;
        prop_assume!(satisfies_rule(k, &in_a, &in_b));
        prop_assert!(in_a(3 * b) && in_b(3 * b));
    }

    #[test]
    fn disk_objective_never_below_minimum(r in 0.0f64..=1.0, theta in -std::f64::consts::PI..std::f64::consts::PI) {
        prop_assert!(re_w_plus_w2(Complex64::from_polar(r, theta)) >= DISK_MINIMUM - 1e-12);
    }

    #[test]
    fn computed_minimum_is_never_below_the_bound(grid in 100usize..400) {
        let m = min_re_w_plus_w2(grid, Region::Disk).unwrap();
        prop_assert!(m.value >= DISK_MINIMUM - 1e-9);
    }

    #[test]
    fn per_prime_chain_holds_on_the_disk(
        r in 0.0f64..=1.0,
        theta in 0.0f64..std::f64::consts::TAU,
        p in prop_oneof![Just(2u64), Just(3), Just(5), Just(7), Just(11)],
        sigma in prop_oneof![Just(0.6), Just(1.0), Just(2.0)],
    ) {
        let r = per_prime_bound_check(Complex64::from_polar(r, theta), p, sigma).unwrap();
        prop_assert!(r.pass);
        prop_assert!(r.lhs >= r.mid - 1e-12 && r.mid >= r.rhs - 1e-12);
    }
}
