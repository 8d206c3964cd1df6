//! Characters and infinitesimal characters of the shuffle algebra on
//! forests. A character is stored through the grouplike element `g` with
//! `χ(w) = ⟨g, w⟩`; an infinitesimal character through a Lie element.

use crate::algebra::{AlgebraContext, Coproduct};
use crate::coeff::{inv_factorial, Coeff, Rational};
use crate::error::{AlgebraError, Result};
use crate::hopf::explog::{exp_conc, log_conc};
use crate::series::Series;
use crate::trees::Forest;

#[derive(Clone, Debug, PartialEq)]
pub struct Character {
    values: Series,
}

#[derive(Clone, Debug, PartialEq)]
pub struct InfinitesimalCharacter {
    values: Series,
}

/// `(α ⋆ β)(w) = Σ α(w₁) β(w₂)` over the chosen coproduct, on every
/// forest of grade at most the common order.
pub fn convolve_functionals(
    ctx: &AlgebraContext,
    c: Coproduct,
    a: &Series,
    b: &Series,
) -> Result<Series> {
    crate::series::check_orders(a.order(), b.order())?;
    ctx.check(a)?;
    let order = a.order();
    let mut out = Series::zero(order);
    for w in ctx.forests_up_to(order) {
        let mut total = Rational::zero();
        for (l, r, q) in ctx.coproduct_basis(c, w).iter() {
            let x = a.coeff(l);
            if x.is_zero() {
                continue;
            }
            total += q * x * b.coeff(r);
        }
        out.add_term(w.clone(), total);
    }
    Ok(out)
}

impl Character {
    /// The counit: `1 ↦ 1`, every nonempty forest to zero.
    pub fn counit(order: usize) -> Self {
        Character {
            values: Series::one(order),
        }
    }

    /// `χ(w) = ⟨exp•(ℓ), w⟩`.
    pub fn from_lie(ctx: &AlgebraContext, lie: &Series) -> Result<Self> {
        ctx.require_primitive(lie, "infinitesimal character")?;
        Ok(Character {
            values: exp_conc(ctx, lie)?,
        })
    }

    /// Wraps a table of values after checking `χ(1) = 1` and
    /// `χ(u ⧢ v) = χ(u)χ(v)` on all basis pairs within the order.
    pub fn from_values(ctx: &AlgebraContext, values: Series) -> Result<Self> {
        ctx.check(&values)?;
        let order = values.order();
        if values.constant_term() != Rational::one() {
            return Err(AlgebraError::NotMultiplicative);
        }
        for u in ctx.forests_up_to(order) {
            if u.is_empty() {
                continue;
            }
            for v in ctx.forests_up_to(order - u.grade()) {
                if v.is_empty() || v < u {
                    continue;
                }
                let mut lhs = Rational::zero();
                for (f, q) in ctx.product_basis(crate::algebra::Product::Shuffle, u, v).iter() {
                    lhs += q * values.coeff(f);
                }
                if lhs != values.coeff(u) * values.coeff(v) {
                    return Err(AlgebraError::NotMultiplicative);
                }
            }
        }
        Ok(Character { values })
    }

    pub fn value(&self, w: &Forest) -> Rational {
        self.values.coeff(w)
    }

    pub fn order(&self) -> usize {
        self.values.order()
    }

    /// The grouplike element representing the character.
    pub fn grouplike(&self) -> &Series {
        &self.values
    }

    /// The Lie element `log•` of the grouplike.
    pub fn to_lie(&self, ctx: &AlgebraContext) -> Result<Series> {
        let l = log_conc(ctx, &self.values)?;
        ctx.require_primitive(&l, "logarithm of the character")?;
        Ok(l)
    }

    pub fn infinitesimal(&self, ctx: &AlgebraContext) -> Result<InfinitesimalCharacter> {
        Ok(InfinitesimalCharacter {
            values: self.to_lie(ctx)?,
        })
    }

    /// Convolution for deconcatenation, unshuffle, `Δ_*` or `Δ_▷`.
    pub fn convolve(&self, ctx: &AlgebraContext, other: &Character, c: Coproduct) -> Result<Character> {
        Ok(Character {
            values: convolve_functionals(ctx, c, &self.values, &other.values)?,
        })
    }
}

impl InfinitesimalCharacter {
    /// Checks `α(1) = 0` and that `α` vanishes on shuffles of nonempty
    /// forests, i.e. that the representing element is a Lie element.
    pub fn new(ctx: &AlgebraContext, lie: Series) -> Result<Self> {
        ctx.require_primitive(&lie, "infinitesimal character")?;
        Ok(InfinitesimalCharacter { values: lie })
    }

    pub fn value(&self, w: &Forest) -> Rational {
        self.values.coeff(w)
    }

    pub fn lie(&self) -> &Series {
        &self.values
    }

    /// `exp⋆(α) = Σ α^{⋆k}/k!` for deconcatenation, computed by repeated
    /// convolution of functionals.
    pub fn exp(&self, ctx: &AlgebraContext) -> Result<Character> {
        let order = self.values.order();
        let mut out = Series::one(order);
        let mut power = Series::one(order);
        for k in 1..=order {
            power = convolve_functionals(ctx, Coproduct::Deconcat, &power, &self.values)?;
            if power.is_zero() {
                break;
            }
            out.add_scaled_rational(&power, &inv_factorial(k));
        }
        Ok(Character { values: out })
    }
}
