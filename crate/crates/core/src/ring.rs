//! Exact arithmetic in the commutative coefficient ring `R`.
//!
//! Two families are supported: the integers `Z` and the residue rings `Z/mZ`.
//! Raw values are plain `i64`s; for `Z/mZ` they are always canonical
//! residues in `[0, m)`, so equality of values is equality of ring elements.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("elements belong to different base rings ({0} and {1})")]
    MixedRings(BaseRing, BaseRing),
    #[error("modulus must be at least 2, got {0}")]
    BadModulus(i64),
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
}

/// A commutative ring with identity: `Z` or `Z/mZ` with `m >= 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BaseRing {
    Integers,
    Modular(i64),
}

impl fmt::Display for BaseRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseRing::Integers => write!(f, "Z"),
            BaseRing::Modular(m) => write!(f, "Z/{m}"),
        }
    }
}

impl BaseRing {
    pub fn modular(m: i64) -> Result<Self, RingError> {
        if m < 2 {
            return Err(RingError::BadModulus(m));
        }
        Ok(BaseRing::Modular(m))
    }

    pub fn integers() -> Self {
        BaseRing::Integers
    }

    /// Number of elements, `None` for `Z`.
    pub fn order(&self) -> Option<u64> {
        match *self {
            BaseRing::Integers => None,
            BaseRing::Modular(m) => Some(m as u64),
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, BaseRing::Modular(_))
    }

    /// All elements in increasing residue order, `None` for `Z`.
    pub fn elements(&self) -> Option<Vec<i64>> {
        match *self {
            BaseRing::Integers => None,
            BaseRing::Modular(m) => Some((0..m).collect()),
        }
    }

    /// Reduce an arbitrary integer to its canonical representative.
    pub fn reduce(&self, v: i64) -> i64 {
        match *self {
            BaseRing::Integers => v,
            BaseRing::Modular(m) => v.rem_euclid(m),
        }
    }

    /// Whether `v` is a canonical representative of an element of this ring.
    pub fn contains(&self, v: i64) -> bool {
        match *self {
            BaseRing::Integers => true,
            BaseRing::Modular(m) => (0..m).contains(&v),
        }
    }

    pub fn element(&self, v: i64) -> RingElement {
        RingElement {
            value: self.reduce(v),
            ring: *self,
        }
    }

    pub fn zero(&self) -> RingElement {
        self.element(0)
    }

    pub fn one(&self) -> RingElement {
        self.element(1)
    }

    // Raw arithmetic on canonical values. Overflow in `Z` panics; callers that
    // need a recoverable error go through `RingElement`.

    pub fn add(&self, a: i64, b: i64) -> i64 {
        self.try_add(a, b)
            .expect("integer overflow in ring addition")
    }

    pub fn mul(&self, a: i64, b: i64) -> i64 {
        self.try_mul(a, b)
            .expect("integer overflow in ring multiplication")
    }

    pub fn neg(&self, a: i64) -> i64 {
        match *self {
            BaseRing::Integers => a.checked_neg().expect("integer overflow in ring negation"),
            BaseRing::Modular(m) => (m - a) % m,
        }
    }

    pub fn sub(&self, a: i64, b: i64) -> i64 {
        self.add(a, self.neg(b))
    }

    pub fn pow(&self, a: i64, e: u32) -> i64 {
        self.try_pow(a, e).expect("integer overflow in ring power")
    }

    pub fn try_add(&self, a: i64, b: i64) -> Result<i64, RingError> {
        match *self {
            BaseRing::Integers => a.checked_add(b).ok_or(RingError::Overflow("addition")),
            BaseRing::Modular(m) => Ok(((a as i128 + b as i128) % m as i128) as i64),
        }
    }

    pub fn try_mul(&self, a: i64, b: i64) -> Result<i64, RingError> {
        match *self {
            BaseRing::Integers => a
                .checked_mul(b)
                .ok_or(RingError::Overflow("multiplication")),
            BaseRing::Modular(m) => Ok(((a as i128 * b as i128) % m as i128) as i64),
        }
    }

    pub fn try_pow(&self, a: i64, e: u32) -> Result<i64, RingError> {
        let mut acc = self.reduce(1);
        let mut base = a;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.try_mul(acc, base)?;
            }
            e >>= 1;
            if e > 0 {
                base = self.try_mul(base, base)?;
            }
        }
        Ok(acc)
    }

    pub fn is_unit_value(&self, v: i64) -> bool {
        match *self {
            BaseRing::Integers => v == 1 || v == -1,
            BaseRing::Modular(m) => gcd(v, m) == 1,
        }
    }

    /// Repeated squaring-free power scan. For `Z/m`, `x^k = 0` for some `k`
    /// implies `x^ceil(log2 m) = 0`, so the scan stops there.
    pub fn is_nilpotent_value(&self, v: i64) -> bool {
        match *self {
            BaseRing::Integers => v == 0,
            BaseRing::Modular(m) => {
                let bound = ceil_log2(m as u64) + 1;
                let mut p = v;
                for _ in 0..bound {
                    if p == 0 {
                        return true;
                    }
                    p = self.mul(p, v);
                }
                p == 0
            }
        }
    }

    /// The prime radical `P(R)`, which for a commutative ring is the set of
    /// nilpotent elements. For `Z` this is `{0}`.
    pub fn nilradical(&self) -> Vec<RingElement> {
        match *self {
            BaseRing::Integers => vec![self.zero()],
            BaseRing::Modular(m) => {
                let r = radical(m as u64) as i64;
                (0..m)
                    .filter(|v| v % r == 0)
                    .map(|v| self.element(v))
                    .collect()
            }
        }
    }

    /// `rad(m)` for `Z/m`: `P(R)` is generated by it and `R/P(R) = Z/rad(m)`.
    pub fn radical_modulus(&self) -> Option<i64> {
        match *self {
            BaseRing::Integers => None,
            BaseRing::Modular(m) => Some(radical(m as u64) as i64),
        }
    }

    /// Canonical generator of the nilradical (`rad(m) mod m`, or 0 in `Z`).
    pub fn nilradical_generator(&self) -> RingElement {
        match *self {
            BaseRing::Integers => self.zero(),
            BaseRing::Modular(m) => self.element(radical(m as u64) as i64),
        }
    }

    /// The reduced ring `R/P(R)`.
    pub fn residue_ring(&self) -> BaseRing {
        match *self {
            BaseRing::Integers => BaseRing::Integers,
            BaseRing::Modular(m) => BaseRing::Modular(radical(m as u64) as i64),
        }
    }

    /// True iff `R/P(R)` has no central idempotents besides 0 and 1. For `Z/m`
    /// that is exactly when `m` is a prime power.
    pub fn indecomposable_mod_radical(&self) -> bool {
        match *self {
            BaseRing::Integers => true,
            BaseRing::Modular(m) => prime_factors(m as u64).len() == 1,
        }
    }
}

/// An element of a [`BaseRing`]; operations across different rings fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RingElement {
    value: i64,
    ring: BaseRing,
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl RingElement {
    pub fn value(&self) -> i64 {
        self.value
    }

    pub fn ring(&self) -> BaseRing {
        self.ring
    }

    fn same_ring(&self, other: &RingElement) -> Result<(), RingError> {
        if self.ring != other.ring {
            return Err(RingError::MixedRings(self.ring, other.ring));
        }
        Ok(())
    }

    pub fn add(&self, other: &RingElement) -> Result<RingElement, RingError> {
        self.same_ring(other)?;
        Ok(RingElement {
            value: self.ring.try_add(self.value, other.value)?,
            ring: self.ring,
        })
    }

    pub fn mul(&self, other: &RingElement) -> Result<RingElement, RingError> {
        self.same_ring(other)?;
        Ok(RingElement {
            value: self.ring.try_mul(self.value, other.value)?,
            ring: self.ring,
        })
    }

    pub fn neg(&self) -> Result<RingElement, RingError> {
        let value = match self.ring {
            BaseRing::Integers => self
                .value
                .checked_neg()
                .ok_or(RingError::Overflow("negation"))?,
            _ => self.ring.neg(self.value),
        };
        Ok(RingElement {
            value,
            ring: self.ring,
        })
    }

    pub fn pow(&self, e: u32) -> Result<RingElement, RingError> {
        Ok(RingElement {
            value: self.ring.try_pow(self.value, e)?,
            ring: self.ring,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn is_one(&self) -> bool {
        self.value == 1
    }

    pub fn is_unit(&self) -> bool {
        self.ring.is_unit_value(self.value)
    }

    pub fn is_nilpotent(&self) -> bool {
        self.ring.is_nilpotent_value(self.value)
    }
}

pub(crate) fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a as i64
}

fn ceil_log2(m: u64) -> u32 {
    64 - (m - 1).leading_zeros()
}

fn prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            out.push(p);
            while m.is_multiple_of(p) {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

fn radical(m: u64) -> u64 {
    prime_factors(m).into_iter().product::<u64>().max(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zm(m: i64) -> BaseRing {
        BaseRing::modular(m).unwrap()
    }

    #[test]
    fn ring_ops_examples() {
        let r = zm(4);
        assert_eq!(r.element(3).add(&r.element(3)).unwrap().value(), 2);
        assert_eq!(r.element(2).mul(&r.element(2)).unwrap().value(), 0);
        let z = BaseRing::integers();
        assert_eq!(z.element(-1).mul(&z.element(5)).unwrap().value(), -5);
        assert_eq!(r.element(-1).value(), 3);
    }

    #[test]
    fn mixed_rings_rejected() {
        let a = zm(4).element(1);
        let b = zm(8).element(1);
        assert!(matches!(a.add(&b), Err(RingError::MixedRings(..))));
        assert!(matches!(a.mul(&b), Err(RingError::MixedRings(..))));
    }

    #[test]
    fn bad_modulus() {
        assert_eq!(BaseRing::modular(1), Err(RingError::BadModulus(1)));
        assert_eq!(BaseRing::modular(0), Err(RingError::BadModulus(0)));
    }

    #[test]
    fn integer_overflow_is_an_error() {
        let z = BaseRing::integers();
        let big = z.element(i64::MAX);
        assert!(matches!(big.add(&z.one()), Err(RingError::Overflow(_))));
        assert!(matches!(z.element(3).pow(63), Err(RingError::Overflow(_))));
    }

    #[test]
    fn units() {
        assert!(zm(4).element(3).is_unit());
        assert!(!zm(4).element(2).is_unit());
        assert!(!BaseRing::integers().element(2).is_unit());
        assert!(BaseRing::integers().element(-1).is_unit());
    }

    #[test]
    fn nilpotents() {
        assert!(zm(8).element(2).is_nilpotent());
        assert!(!zm(8).element(3).is_nilpotent());
        assert!(zm(12).element(6).is_nilpotent());
        assert!(!zm(12).element(2).is_nilpotent());
        assert!(BaseRing::integers().element(0).is_nilpotent());
        assert!(!BaseRing::integers().element(7).is_nilpotent());
    }

    #[test]
    fn nilradical_examples() {
        let vals = |r: BaseRing| r.nilradical().iter().map(|e| e.value()).collect::<Vec<_>>();
        assert_eq!(vals(zm(4)), vec![0, 2]);
        assert_eq!(vals(zm(12)), vec![0, 6]);
        assert_eq!(vals(BaseRing::integers()), vec![0]);
        assert_eq!(zm(9).nilradical_generator().value(), 3);
        assert_eq!(zm(6).nilradical_generator().value(), 0);
    }

    #[test]
    fn indecomposability_examples() {
        assert!(zm(8).indecomposable_mod_radical());
        assert!(!zm(6).indecomposable_mod_radical());
        assert!(BaseRing::integers().indecomposable_mod_radical());
        assert_eq!(zm(12).residue_ring(), zm(6));
    }

    // Brute-force oracles, exhaustive over every modulus up to 64.

    fn brute_nilpotent(r: BaseRing, v: i64) -> bool {
        let mut p = v;
        for _ in 0..70 {
            if p == 0 {
                return true;
            }
            p = r.mul(p, v);
        }
        false
    }

    #[test]
    fn unit_xor_zero_divisor_exhaustive() {
        for m in 2..=64 {
            let r = zm(m);
            for x in 0..m {
                let has_inverse = (0..m).any(|y| r.mul(x, y) == 1);
                let zero_divisor = x == 0 || (1..m).any(|y| r.mul(x, y) == 0);
                assert_eq!(r.is_unit_value(x), has_inverse, "m={m} x={x}");
                assert!(has_inverse ^ zero_divisor, "m={m} x={x}");
            }
        }
    }

    #[test]
    fn nilradical_matches_brute_force_and_is_an_ideal() {
        for m in 2..=64 {
            let r = zm(m);
            let expected: Vec<i64> = (0..m).filter(|&v| brute_nilpotent(r, v)).collect();
            let got: Vec<i64> = r.nilradical().iter().map(|e| e.value()).collect();
            assert_eq!(got, expected, "m={m}");
            for &a in &got {
                assert!(r.is_nilpotent_value(a));
                for &b in &got {
                    assert!(got.contains(&r.add(a, b)));
                }
                for x in 0..m {
                    assert!(got.contains(&r.mul(a, x)));
                }
            }
        }
    }

    #[test]
    fn indecomposability_matches_idempotent_scan() {
        for m in 2..=64 {
            let r = zm(m);
            let nil: Vec<i64> = (0..m).filter(|&v| brute_nilpotent(r, v)).collect();
            // Cosets of P(R) whose square minus itself lies in P(R).
            let mut reps: Vec<i64> = Vec::new();
            for e in 0..m {
                if !nil.contains(&r.sub(r.mul(e, e), e)) {
                    continue;
                }
                if reps.iter().all(|&f| !nil.contains(&r.sub(e, f))) {
                    reps.push(e);
                }
            }
            assert_eq!(r.indecomposable_mod_radical(), reps.len() == 2, "m={m}");
        }
    }
}
