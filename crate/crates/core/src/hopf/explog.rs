//! Truncated exponential and logarithm series for an associative product.

use crate::algebra::{AlgebraContext, Product};
use crate::coeff::{inv_factorial, rat, Coeff};
use crate::error::{AlgebraError, Result};
use crate::series::Series;

/// `Σ_k x^k/k!`; `x` must have no constant term.
pub fn exp<R: Coeff>(ctx: &AlgebraContext, p: Product, x: &Series<R>) -> Result<Series<R>> {
    ctx.check(x)?;
    if !x.constant_term().is_zero() {
        return Err(AlgebraError::Precondition(
            "exponential of a series with nonzero constant term".into(),
        ));
    }
    let mut out = Series::one(x.order());
    let mut power = Series::one(x.order());
    for k in 1..=x.order() {
        power = ctx.mul(p, &power, x)?;
        if power.is_zero() {
            break;
        }
        out.add_scaled_rational(&power, &inv_factorial(k));
    }
    Ok(out)
}

/// `Σ_k (−1)^{k+1} (s − 1)^k / k`; `s` must have constant term one.
pub fn log<R: Coeff>(ctx: &AlgebraContext, p: Product, s: &Series<R>) -> Result<Series<R>> {
    ctx.check(s)?;
    if s.constant_term() != R::one() {
        return Err(AlgebraError::Precondition(
            "logarithm of a series whose constant term is not one".into(),
        ));
    }
    let y = s.without_constant();
    let mut out = Series::zero(s.order());
    let mut power = Series::one(s.order());
    for k in 1..=s.order() {
        power = ctx.mul(p, &power, &y)?;
        if power.is_zero() {
            break;
        }
        let sign = if k % 2 == 1 { 1 } else { -1 };
        out.add_scaled_rational(&power, &rat(sign, k as i64));
    }
    Ok(out)
}

pub fn exp_conc<R: Coeff>(ctx: &AlgebraContext, x: &Series<R>) -> Result<Series<R>> {
    exp(ctx, Product::Conc, x)
}

pub fn log_conc<R: Coeff>(ctx: &AlgebraContext, s: &Series<R>) -> Result<Series<R>> {
    log(ctx, Product::Conc, s)
}

pub fn exp_gl<R: Coeff>(ctx: &AlgebraContext, x: &Series<R>) -> Result<Series<R>> {
    exp(ctx, Product::Gl, x)
}

pub fn log_gl<R: Coeff>(ctx: &AlgebraContext, s: &Series<R>) -> Result<Series<R>> {
    log(ctx, Product::Gl, s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_series;
    use crate::series::Tensor;
    use crate::trees::Alphabet;

    fn ctx(order: usize) -> AlgebraContext {
        AlgebraContext::new(Alphabet::single(), order).unwrap()
    }

    fn s(text: &str, order: usize) -> Series {
        parse_series(text, &Alphabet::single(), order).unwrap()
    }

    #[test]
    fn trivial_values() {
        let c = ctx(4);
        assert_eq!(exp_conc(&c, &Series::<crate::Rational>::zero(4)).unwrap(), Series::one(4));
        assert!(log_conc(&c, &Series::<crate::Rational>::one(4)).unwrap().is_zero());
        assert_eq!(exp_gl(&c, &Series::<crate::Rational>::zero(4)).unwrap(), Series::one(4));
    }

    #[test]
    fn inverse_pairs() {
        let c = ctx(6);
        let x = s("a[] + a[a[]]", 6);
        assert_eq!(log_conc(&c, &exp_conc(&c, &x).unwrap()).unwrap(), x);
        let y = s("a[]", 6);
        assert_eq!(log_gl(&c, &exp_gl(&c, &y).unwrap()).unwrap(), y);
    }

    #[test]
    fn gl_exponential_at_order_two() {
        let c = ctx(2);
        assert_eq!(
            exp_gl(&c, &s("a[]", 2)).unwrap(),
            s("1 + a[] + 1/2*a[] a[] + 1/2*a[a[]]", 2)
        );
    }

    #[test]
    fn exponential_of_a_primitive_is_grouplike() {
        let c = ctx(4);
        let g = exp_conc(&c, &s("a[]", 4)).unwrap();
        assert_eq!(c.unshuffle(&g).unwrap(), Tensor::product(&g, &g).unwrap());
    }

    #[test]
    fn preconditions() {
        let c = ctx(3);
        assert!(matches!(exp_conc(&c, &s("1 + a[]", 3)), Err(AlgebraError::Precondition(_))));
        assert!(matches!(log_gl(&c, &s("a[]", 3)), Err(AlgebraError::Precondition(_))));
    }
}
