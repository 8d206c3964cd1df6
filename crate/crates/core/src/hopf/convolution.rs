//! Convolution of linear maps on forests: `(f ⋆ g) = μ ∘ (f ⊗ g) ∘ Δ`,
//! generic over the product/coproduct pair.

use std::collections::HashMap;

use crate::algebra::{Acc, AlgebraContext, Coproduct, Product, Terms};
use crate::coeff::{Coeff, Rational};
use crate::trees::Forest;

/// `(f ⋆ g)(w)` for a basis forest `w`.
pub fn convolve(
    ctx: &AlgebraContext,
    product: Product,
    coproduct: Coproduct,
    f: &dyn Fn(&Forest) -> Terms,
    g: &dyn Fn(&Forest) -> Terms,
    w: &Forest,
) -> Terms {
    let mut acc = Acc::default();
    for (l, r, q) in ctx.coproduct_basis(coproduct, w).iter() {
        let fl = f(l);
        if fl.is_empty() {
            continue;
        }
        let gr = g(r);
        for (a, x) in fl.iter() {
            for (b, y) in gr.iter() {
                let c: Rational = q * x * y;
                for (h, z) in ctx.product_basis(product, a, b).iter() {
                    acc.add(h.clone(), &c * z);
                }
            }
        }
    }
    acc.freeze()
}

/// Convolution powers `f^{⋆j}` of a fixed map, memoized per `(j, w)`.
pub struct ConvolutionPowers<'a> {
    ctx: &'a AlgebraContext,
    product: Product,
    coproduct: Coproduct,
    base: Box<dyn Fn(&Forest) -> Terms + 'a>,
    memo: HashMap<(usize, Forest), Terms>,
}

impl<'a> ConvolutionPowers<'a> {
    pub fn new(
        ctx: &'a AlgebraContext,
        product: Product,
        coproduct: Coproduct,
        base: impl Fn(&Forest) -> Terms + 'a,
    ) -> Self {
        ConvolutionPowers {
            ctx,
            product,
            coproduct,
            base: Box::new(base),
            memo: HashMap::new(),
        }
    }

    /// `f^{⋆j}(w)`; `f^{⋆0}` is the unit-counit map.
    pub fn power(&mut self, j: usize, w: &Forest) -> Terms {
        if j == 0 {
            return if w.is_empty() {
                vec![(Forest::empty(), Rational::one())].into()
            } else {
                Vec::new().into()
            };
        }
        if j == 1 {
            return (self.base)(w);
        }
        if let Some(t) = self.memo.get(&(j, w.clone())) {
            return t.clone();
        }
        let mut acc = Acc::default();
        let coproduct = self.ctx.coproduct_basis(self.coproduct, w);
        for (l, r, q) in coproduct.iter() {
            let fl = (self.base)(l);
            if fl.is_empty() {
                continue;
            }
            let gr = self.power(j - 1, r);
            for (a, x) in fl.iter() {
                for (b, y) in gr.iter() {
                    let c: Rational = q * x * y;
                    for (h, z) in self.ctx.product_basis(self.product, a, b).iter() {
                        acc.add(h.clone(), &c * z);
                    }
                }
            }
        }
        let t = acc.freeze();
        self.memo.insert((j, w.clone()), t.clone());
        t
    }
}

/// The augmentation-ideal projection `J`: identity on nonempty forests.
pub(crate) fn projection_j(w: &Forest) -> Terms {
    if w.is_empty() {
        Vec::new().into()
    } else {
        vec![(w.clone(), Rational::one())].into()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::int;
    use crate::parse::parse_forest;
    use crate::trees::Alphabet;

    #[test]
    fn identity_squared_counts_cuts() {
        // (J ⋆ J)(w) for conc/deconcat is (len − 1)·w
        let a = Alphabet::single();
        let ctx = AlgebraContext::new(a.clone(), 4).unwrap();
        let w = parse_forest("a[] a[a[]] a[]", &a).unwrap();
        let mut p = ConvolutionPowers::new(&ctx, Product::Conc, Coproduct::Deconcat, projection_j);
        let t = p.power(2, &w);
        assert_eq!(&*t, &[(w.clone(), int(2))]);
        let direct = convolve(
            &ctx,
            Product::Conc,
            Coproduct::Deconcat,
            &projection_j,
            &projection_j,
            &w,
        );
        assert_eq!(direct, t);
        assert_eq!(&*p.power(4, &w), &[]);
    }
}
