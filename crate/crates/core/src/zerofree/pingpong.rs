//! Finite models for the midpoint rule on two sets `A, B` of reals.
//!
//! Points are the multiples `k g` of a generator `g` with `|k| <= K`. Whenever
//! `(x + y)/2` is in `A` for distinct grid points `x, y`, the rule demands
//! `x in A <=> y in B`. Closure propagates known memberships and known
//! non-memberships through this rule (and through `A ∩ B = ∅` when requested)
//! until nothing changes.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

pub const DEFAULT_GRID_HALF_WIDTH: i64 = 8;

/// Three-valued membership plus the inconsistent state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Truth {
    #[default]
    Unknown,
    True,
    False,
    Conflict,
}

impl Truth {
    fn merge(self, value: bool) -> Truth {
        let incoming = if value { Truth::True } else { Truth::False };
        match self {
            Truth::Unknown => incoming,
            Truth::Conflict => Truth::Conflict,
            current if current == incoming => current,
            _ => Truth::Conflict,
        }
    }

    fn known(self) -> Option<bool> {
        match self {
            Truth::True => Some(true),
            Truth::False => Some(false),
            _ => None,
        }
    }
}

/// Summary label of a grid point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    InA,
    InB,
    InBoth,
    Unknown,
    Contradiction,
}

impl fmt::Display for Membership {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Membership::InA => "in-A",
            Membership::InB => "in-B",
            Membership::InBoth => "in-both",
            Membership::Unknown => "unknown",
            Membership::Contradiction => "contradiction",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PingPongState {
    generator: f64,
    half_width: i64,
    disjoint: bool,
    in_a: Vec<Truth>,
    in_b: Vec<Truth>,
    /// Rule applications that changed the state during the last closure.
    pub applications: usize,
}

impl PingPongState {
    /// Empty model with `0 ∈ A`.
    pub fn new(generator: f64, half_width: i64) -> Result<Self> {
        if generator == 0.0 || !generator.is_finite() {
            return Err(Error::InvalidArgument(
                "generator must be a nonzero real".into(),
            ));
        }
        if half_width < 1 {
            return Err(Error::InvalidArgument(
                "grid half width must be at least 1".into(),
            ));
        }
        let size = (2 * half_width + 1) as usize;
        let mut state = PingPongState {
            generator,
            half_width,
            disjoint: false,
            in_a: vec![Truth::Unknown; size],
            in_b: vec![Truth::Unknown; size],
            applications: 0,
        };
        state.assert_a(0, true)?;
        Ok(state)
    }

    /// Adds the constraint `A ∩ B = ∅`.
    pub fn with_disjointness(mut self) -> Self {
        self.disjoint = true;
        self
    }

    pub fn generator(&self) -> f64 {
        self.generator
    }

    pub fn half_width(&self) -> i64 {
        self.half_width
    }

    pub fn is_disjoint(&self) -> bool {
        self.disjoint
    }

    fn slot(&self, k: i64) -> Result<usize> {
        if k.abs() > self.half_width {
            return Err(Error::OutOfRange {
                value: k.unsigned_abs(),
                limit: self.half_width as u64,
            });
        }
        Ok((k + self.half_width) as usize)
    }

    /// Record `k g ∈ A` (or `∉ A` when `value` is false).
    pub fn assert_a(&mut self, k: i64, value: bool) -> Result<()> {
        let i = self.slot(k)?;
        self.in_a[i] = self.in_a[i].merge(value);
        Ok(())
    }

    pub fn assert_b(&mut self, k: i64, value: bool) -> Result<()> {
        let i = self.slot(k)?;
        self.in_b[i] = self.in_b[i].merge(value);
        Ok(())
    }

    pub fn a(&self, k: i64) -> Truth {
        self.slot(k).map(|i| self.in_a[i]).unwrap_or_default()
    }

    pub fn b(&self, k: i64) -> Truth {
        self.slot(k).map(|i| self.in_b[i]).unwrap_or_default()
    }

    pub fn membership(&self, k: i64) -> Membership {
        match (self.a(k), self.b(k)) {
            (Truth::Conflict, _) | (_, Truth::Conflict) => Membership::Contradiction,
            (Truth::True, Truth::True) => Membership::InBoth,
            (Truth::True, _) => Membership::InA,
            (_, Truth::True) => Membership::InB,
            _ => Membership::Unknown,
        }
    }

    pub fn has_contradiction(&self) -> bool {
        self.in_a
            .iter()
            .chain(&self.in_b)
            .any(|t| *t == Truth::Conflict)
    }

    /// Grid multiples with their labels, skipping unknown points.
    pub fn memberships(&self) -> BTreeMap<i64, Membership> {
        (-self.half_width..=self.half_width)
            .map(|k| (k, self.membership(k)))
            .filter(|(_, m)| *m != Membership::Unknown)
            .collect()
    }

    /// Members of `A` (`which = true`) or `B` as grid multiples.
    pub fn members(&self, which_a: bool) -> Vec<i64> {
        (-self.half_width..=self.half_width)
            .filter(|&k| {
                let t = if which_a { self.a(k) } else { self.b(k) };
                t == Truth::True
            })
            .collect()
    }

    fn count_known(&self) -> usize {
        self.in_a
            .iter()
            .chain(&self.in_b)
            .filter(|t| **t != Truth::Unknown)
            .count()
    }

    fn set(&mut self, a_side: bool, idx: usize, value: bool) -> bool {
        let cell = if a_side {
            &mut self.in_a[idx]
        } else {
            &mut self.in_b[idx]
        };
        let next = cell.merge(value);
        let changed = next != *cell;
        *cell = next;
        changed
    }

    /// One pass over all rule instances; returns the number of changes.
    fn sweep(&mut self) -> usize {
        let size = self.in_a.len() as i64;
        let mut changes = 0;
        if self.disjoint {
            for i in 0..size as usize {
                if self.in_a[i] == Truth::True && self.set(false, i, false) {
                    changes += 1;
                }
                if self.in_b[i] == Truth::True && self.set(true, i, false) {
                    changes += 1;
                }
            }
        }
        for m in 0..size {
            if self.in_a[m as usize] != Truth::True {
                continue;
            }
            // x = m - d, y = m + d, both on the grid, d != 0.
            let reach = m.min(size - 1 - m);
            for d in 1..=reach {
                let (x, y) = ((m - d) as usize, (m + d) as usize);
                // x in A <=> y in B, and symmetrically y in A <=> x in B.
                for (ax, by) in [(x, y), (y, x)] {
                    if let Some(v) = self.in_a[ax].known() {
                        if self.set(false, by, v) {
                            changes += 1;
                        }
                    }
                    if let Some(v) = self.in_b[by].known() {
                        if self.set(true, ax, v) {
                            changes += 1;
                        }
                    }
                }
            }
        }
        changes
    }
}

/// Closes the model under the midpoint rule. Monotone: known facts are never dropped.
pub fn pingpong_derive(state: &PingPongState) -> PingPongState {
    let mut next = state.clone();
    next.applications = 0;
    loop {
        let changes = next.sweep();
        next.applications += changes;
        if changes == 0 || next.has_contradiction() {
            break;
        }
    }
    debug_assert!(next.count_known() >= state.count_known());
    next
}

/// Outcome of closing a model under `A ∩ B = ∅`.
#[derive(Debug, Clone, PartialEq)]
pub enum Resolution {
    /// Closure produced a point that must be both in and out of a set.
    Contradiction { point: i64 },
    /// The closed-world reading of the closure, together with whether every
    /// nonzero interior seed would have been refuted.
    Consistent {
        a: Vec<i64>,
        b: Vec<i64>,
        forced: bool,
    },
}

/// Closes the seeds with the disjointness constraint. Any nonzero seed is refuted;
/// with the bare seed `0 ∈ A` the answer is `A = {0}, B = ∅`.
pub fn pingpong_disjoint_resolve(seeds: &PingPongState) -> Result<Resolution> {
    if seeds.a(0) != Truth::True {
        return Err(Error::Precondition("0 must belong to A".into()));
    }
    let closed = pingpong_derive(&seeds.clone().with_disjointness());
    if let Some(point) = (-closed.half_width..=closed.half_width)
        .find(|&k| closed.membership(k) == Membership::Contradiction)
    {
        return Ok(Resolution::Contradiction { point });
    }
    let a = closed.members(true);
    let b = closed.members(false);
    let model = |k: i64, which_a: bool| {
        if which_a {
            a.contains(&k)
        } else {
            b.contains(&k)
        }
    };
    if !validate_model(closed.half_width, model) {
        return Err(Error::Precondition(
            "closed-world reading violates the midpoint rule".into(),
        ));
    }
    // Every nonzero point whose proof chain fits on the grid cannot be added to either set.
    let interior = closed.half_width / 3;
    let forced = (-interior..=interior).filter(|&k| k != 0).all(|k| {
        [true, false].iter().all(|&in_a| {
            let mut trial = closed.clone();
            let ok = if in_a {
                trial.assert_a(k, true)
            } else {
                trial.assert_b(k, true)
            };
            ok.is_ok() && pingpong_derive(&trial).has_contradiction()
        })
    });
    Ok(Resolution::Consistent { a, b, forced })
}

/// Checks the midpoint rule on a complete model `k -> (k in A?, k in B?)` over `|k| <= K`.
pub fn validate_model(half_width: i64, member: impl Fn(i64, bool) -> bool) -> bool {
    for m in -half_width..=half_width {
        if !member(m, true) {
            continue;
        }
        let reach = half_width - m.abs();
        for d in 1..=reach {
            let (x, y) = (m - d, m + d);
            if member(x, true) != member(y, false) || member(y, true) != member(x, false) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn b_in_b_forces_three_b_in_both() {
        let mut s = PingPongState::new(1.0, 8).unwrap();
        s.assert_b(1, true).unwrap();
        let d = pingpong_derive(&s);
        assert_eq!(d.a(-1), Truth::True);
        assert_eq!(d.a(2), Truth::True);
        assert_eq!(d.b(-2), Truth::True);
        assert_eq!(d.a(-3), Truth::True);
        assert_eq!(d.membership(3), Membership::InBoth);
        assert!(!d.has_contradiction());
    }

    #[test]
    fn a_in_a_forces_minus_three_a_in_both() {
        let mut s = PingPongState::new(2.5, 8).unwrap();
        s.assert_a(1, true).unwrap();
        let d = pingpong_derive(&s);
        assert_eq!(d.b(-1), Truth::True);
        assert_eq!(d.membership(-3), Membership::InBoth);
    }

    #[test]
    fn zero_in_both() {
        let mut s = PingPongState::new(1.0, 8).unwrap();
        s.assert_b(0, true).unwrap();
        assert_eq!(pingpong_derive(&s).membership(0), Membership::InBoth);
    }

    #[test]
    fn derivation_is_idempotent() {
        let mut s = PingPongState::new(1.0, 8).unwrap();
        s.assert_b(2, true).unwrap();
        let once = pingpong_derive(&s);
        let twice = pingpong_derive(&once);
        assert_eq!(twice.applications, 0);
        assert_eq!(once.memberships(), twice.memberships());
    }

    #[test]
    fn disjoint_resolution() {
        let mut s = PingPongState::new(1.0, 8).unwrap();
        s.assert_b(1, true).unwrap();
        assert!(matches!(
            pingpong_disjoint_resolve(&s).unwrap(),
            Resolution::Contradiction { .. }
        ));
        let mut s = PingPongState::new(1.0, 8).unwrap();
        s.assert_a(1, true).unwrap();
        assert!(matches!(
            pingpong_disjoint_resolve(&s).unwrap(),
            Resolution::Contradiction { .. }
        ));
        let s = PingPongState::new(1.0, 8).unwrap();
        assert_eq!(
            pingpong_disjoint_resolve(&s).unwrap(),
            Resolution::Consistent {
                a: vec![0],
                b: vec![],
                forced: true
            }
        );
    }

    #[test]
    fn bad_construction() {
        assert!(PingPongState::new(0.0, 8).is_err());
        assert!(PingPongState::new(1.0, 0).is_err());
        let mut s = PingPongState::new(1.0, 3).unwrap();
        assert!(s.assert_a(4, true).is_err());
    }
}
