//! Exact coefficient rings.
//!
//! Every bilinear operation in the engine is computed once on basis
//! forests with rational structure constants and then lifted to an
//! arbitrary commutative coefficient ring through [`Coeff`].

use std::fmt::Debug;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub type Rational = num_rational::BigRational;

/// A commutative ring of exact coefficients containing the rationals.
pub trait Coeff: Clone + PartialEq + Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_rational(q: &Rational) -> Self;
    fn add_assign_ref(&mut self, other: &Self);
    fn mul_ref(&self, other: &Self) -> Self;
    fn scale(&self, q: &Rational) -> Self;
    fn neg_ref(&self) -> Self;

    fn sub_assign_ref(&mut self, other: &Self) {
        self.add_assign_ref(&other.neg_ref());
    }
}

impl Coeff for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
    fn add_assign_ref(&mut self, other: &Self) {
        *self += other;
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn scale(&self, q: &Rational) -> Self {
        self * q
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn sub_assign_ref(&mut self, other: &Self) {
        *self -= other;
    }
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `1/n!`
pub fn inv_factorial(n: usize) -> Rational {
    let mut f = BigInt::one();
    for k in 2..=n {
        f *= k;
    }
    Rational::new(BigInt::one(), f)
}

/// Lowest-terms `p/q`, or `p` when the denominator is one.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses the `p/q` form produced by [`format_rational`].
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() || d.is_negative() {
                return None;
            }
            Some(Rational::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formatting_round_trips() {
        for q in [rat(1, 2), rat(-3, 4), int(7), int(0), rat(6, 4)] {
            assert_eq!(parse_rational(&format_rational(&q)), Some(q));
        }
        assert_eq!(format_rational(&rat(6, 4)), "3/2");
        assert_eq!(parse_rational("1/0"), None);
    }

    #[test]
    fn factorials() {
        assert_eq!(inv_factorial(0), int(1));
        assert_eq!(inv_factorial(5), rat(1, 120));
    }
}
