//! Weights for the algorithms in this crate.
//!
//! Both semirings carry a cost in the negative-log domain. They share
//! `⊗ = +`, `0̄ = +∞` and `1̄ = 0` and differ only in `⊕`: the tropical
//! semiring keeps the cheaper alternative, the log semiring adds the
//! probabilities the two costs stand for.

use std::fmt;

/// A commutative semiring over negative-log costs.
pub trait Semiring: Copy + fmt::Debug + PartialEq + Send + Sync + 'static {
    /// Short name used in diagnostics.
    const NAME: &'static str;

    fn new(cost: f64) -> Self;
    fn value(&self) -> f64;

    fn zero() -> Self {
        Self::new(f64::INFINITY)
    }

    fn one() -> Self {
        Self::new(0.0)
    }

    fn plus(&self, rhs: &Self) -> Self;

    fn times(&self, rhs: &Self) -> Self {
        Self::new(self.value() + rhs.value())
    }

    /// `self ⊗ rhs⁻¹`. Dividing zero gives zero; `rhs` must not be zero.
    fn divide(&self, rhs: &Self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        debug_assert!(!rhs.is_zero(), "division by the zero weight");
        Self::new(self.value() - rhs.value())
    }

    fn is_zero(&self) -> bool {
        self.value() == f64::INFINITY
    }

    fn is_one(&self) -> bool {
        self.value() == 0.0
    }

    /// Equality up to `delta` on the cost; two zeros are always equal.
    fn approx_eq(&self, other: &Self, delta: f64) -> bool {
        let (a, b) = (self.value(), other.value());
        if a.is_infinite() || b.is_infinite() {
            return a == b;
        }
        (a - b).abs() <= delta
    }
}

/// `(min, +, +∞, 0)`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Tropical(pub f64);

/// `(−ln(e^−a + e^−b), +, +∞, 0)`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Log(pub f64);

impl Semiring for Tropical {
    const NAME: &'static str = "tropical";

    #[inline]
    fn new(cost: f64) -> Self {
        Tropical(cost)
    }

    #[inline]
    fn value(&self) -> f64 {
        self.0
    }

    #[inline]
    fn plus(&self, rhs: &Self) -> Self {
        if rhs.0 < self.0 {
            *rhs
        } else {
            *self
        }
    }
}

impl Semiring for Log {
    const NAME: &'static str = "log";

    #[inline]
    fn new(cost: f64) -> Self {
        Log(cost)
    }

    #[inline]
    fn value(&self) -> f64 {
        self.0
    }

    fn plus(&self, rhs: &Self) -> Self {
        let (a, b) = (self.0, rhs.0);
        if a == f64::INFINITY {
            return *rhs;
        }
        if b == f64::INFINITY {
            return *self;
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        Log(lo - (-(hi - lo)).exp().ln_1p())
    }
}

impl fmt::Display for Tropical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Log {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Reinterprets a weight from one semiring in another (same cost).
pub fn convert<A: Semiring, B: Semiring>(w: A) -> B {
    B::new(w.value())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cost() -> impl Strategy<Value = f64> {
        prop_oneof![
            9 => (-20i32..20).prop_map(|v| v as f64 * 0.5),
            1 => Just(f64::INFINITY),
        ]
    }

    fn check_axioms<W: Semiring>(a: W, b: W, c: W, tol: f64) {
        assert!(a.plus(&b.plus(&c)).approx_eq(&a.plus(&b).plus(&c), tol));
        assert!(a.times(&b.times(&c)).approx_eq(&a.times(&b).times(&c), tol));
        assert!(a.plus(&b).approx_eq(&b.plus(&a), tol));
        assert!(a
            .times(&b.plus(&c))
            .approx_eq(&a.times(&b).plus(&a.times(&c)), tol));
        assert!(a.times(&W::zero()).is_zero());
        assert!(a.times(&W::one()).approx_eq(&a, tol));
        assert!(a.plus(&W::zero()).approx_eq(&a, tol));
    }

    proptest! {
        #[test]
        fn tropical_axioms(a in cost(), b in cost(), c in cost()) {
            check_axioms(Tropical(a), Tropical(b), Tropical(c), 0.0);
        }

        #[test]
        fn log_axioms(a in cost(), b in cost(), c in cost()) {
            check_axioms(Log(a), Log(b), Log(c), 1e-9);
        }

        #[test]
        fn log_plus_matches_probability_sum(a in 0.0f64..30.0, b in 0.0f64..30.0) {
            let expected = -((-a).exp() + (-b).exp()).ln();
            prop_assert!((Log(a).plus(&Log(b)).0 - expected).abs() < 1e-9);
        }
    }

    #[test]
    fn identities() {
        assert_eq!(Tropical::zero().0, f64::INFINITY);
        assert_eq!(Tropical::one().0, 0.0);
        assert_eq!(Tropical(3.0).plus(&Tropical(5.0)), Tropical(3.0));
        assert_eq!(Tropical(-1.0).times(&Tropical(2.5)), Tropical(1.5));
        assert!(Log(2.0f64.ln()).plus(&Log(2.0f64.ln())).approx_eq(&Log(0.0), 1e-12));
        assert_eq!(Tropical(4.0).divide(&Tropical(1.5)), Tropical(2.5));
        assert!(Tropical::zero().divide(&Tropical(1.0)).is_zero());
    }
}
