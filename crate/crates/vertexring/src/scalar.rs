//! Scalar abstraction: the coefficient fields all higher layers are generic over.
//!
//! The two concrete scalars used in practice are [`Rat`] (arbitrary-precision
//! rationals) and [`crate::cyclotomic::Cyc`] (cyclotomic numbers). Both are
//! exact; the trait deliberately has no notion of approximation or rounding.

use std::fmt::{Debug, Display};
use std::ops::{Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision rational number.
pub type Rat = num_rational::BigRational;

/// A field of characteristic zero, suitable as a coefficient domain.
///
/// The supertraits give us exact ring arithmetic by value; the methods add
/// what the algebra layers need: embedding of rationals, division, and roots
/// of unity where the field has them.
pub trait Field:
    Clone
    + PartialEq
    + Debug
    + Display
    + Zero
    + One
    + Neg<Output = Self>
    + Sub<Output = Self>
{
    /// Embed a rational number.
    fn from_rat(q: &Rat) -> Self;

    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;

    /// A fixed primitive root of unity of the given order, if the field has
    /// one. Rationals only have orders 1 and 2; cyclotomic numbers have all.
    ///
    /// The choices are compatible: the root of order `m` equals the root of
    /// order `m*l` raised to the power `l`.
    fn root_of_unity(order: u32) -> Option<Self>;

    /// Embed a machine integer.
    fn from_int(n: i64) -> Self {
        Self::from_rat(&Rat::from_integer(BigInt::from(n)))
    }

    /// Recover a rational if the value lies in the prime field.
    fn as_rat(&self) -> Option<Rat>;

    /// Exact division, `None` when dividing by zero.
    fn div_exact(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.clone() * i)
    }
}

impl Field for Rat {
    fn from_rat(q: &Rat) -> Self {
        q.clone()
    }

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn root_of_unity(order: u32) -> Option<Self> {
        match order {
            1 => Some(Rat::one()),
            2 => Some(-Rat::one()),
            _ => None,
        }
    }

    fn as_rat(&self) -> Option<Rat> {
        Some(self.clone())
    }
}

/// Generalized binomial coefficient `binom(q, i)` for rational `q`:
/// `q (q-1) ... (q-i+1) / i!`, computed exactly.
pub fn binom_frac(q: &Rat, i: u64) -> Rat {
    let mut num = Rat::one();
    for k in 0..i {
        num *= q - Rat::from_integer(BigInt::from(k));
    }
    let mut fact = BigInt::one();
    for k in 2..=i {
        fact *= BigInt::from(k);
    }
    num / Rat::from_integer(fact)
}

/// Generalized binomial coefficient for integer upper argument (which may be
/// negative). Always an integer.
pub fn binom_int(m: i64, i: u64) -> BigInt {
    let q = binom_frac(&Rat::from_integer(BigInt::from(m)), i);
    debug_assert!(q.denom().is_one() || q.denom() == &BigInt::from(-1));
    q.to_integer()
}

/// `(-1)^i` as a machine-friendly sign.
pub fn neg_one_pow(i: i64) -> i64 {
    if i.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Convenience: a `Rat` from a numerator/denominator pair.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Convenience: an integer `Rat`.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// True if the rational is a nonnegative integer.
pub fn is_nonneg_integer(q: &Rat) -> bool {
    q.denom().is_one() && !q.numer().is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binom_frac_integer_cases() {
        // Matches ordinary binomial coefficients on nonnegative integers.
        assert_eq!(binom_frac(&rat_int(5), 2), rat_int(10));
        assert_eq!(binom_frac(&rat_int(5), 0), rat_int(1));
        assert_eq!(binom_frac(&rat_int(3), 5), rat_int(0));
        // Negative upper argument.
        assert_eq!(binom_frac(&rat_int(-1), 3), rat_int(-1));
        assert_eq!(binom_frac(&rat_int(-2), 2), rat_int(3));
    }

    #[test]
    fn binom_frac_half_integer() {
        // binom(1/2, 2) = (1/2)(-1/2)/2 = -1/8.
        assert_eq!(binom_frac(&rat(1, 2), 2), rat(-1, 8));
        // binom(1/2, 1) = 1/2.
        assert_eq!(binom_frac(&rat(1, 2), 1), rat(1, 2));
        // binom(-1/2, 2) = (-1/2)(-3/2)/2 = 3/8.
        assert_eq!(binom_frac(&rat(-1, 2), 2), rat(3, 8));
    }

    #[test]
    fn binom_frac_pascal_identity() {
        // binom(q, i) = binom(q-1, i) + binom(q-1, i-1) for a sweep of
        // rational q and small i.
        for num in -6..=6 {
            for den in 1..=4 {
                let q = rat(num, den);
                let qm1 = &q - rat_int(1);
                for i in 1..=6u64 {
                    let lhs = binom_frac(&q, i);
                    let rhs = binom_frac(&qm1, i) + binom_frac(&qm1, i - 1);
                    assert_eq!(lhs, rhs, "Pascal fails at q={q}, i={i}");
                }
            }
        }
    }

    #[test]
    fn binom_int_matches() {
        assert_eq!(binom_int(-3, 2), BigInt::from(6));
        assert_eq!(binom_int(7, 3), BigInt::from(35));
        assert_eq!(binom_int(0, 0), BigInt::from(1));
        assert_eq!(binom_int(0, 1), BigInt::from(0));
    }

    #[test]
    fn rat_field_ops() {
        let a = rat(3, 4);
        assert_eq!(a.inv().unwrap(), rat(4, 3));
        assert_eq!(Rat::from_int(-2), rat_int(-2));
        assert!(Rat::zero().inv().is_none());
        assert_eq!(Rat::root_of_unity(2).unwrap(), rat_int(-1));
        assert_eq!(Rat::root_of_unity(1).unwrap(), rat_int(1));
        assert!(Rat::root_of_unity(4).is_none());
    }
}
