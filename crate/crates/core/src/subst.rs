//! Post-Lie endomorphisms of the free algebra, their substitution action
//! `★`, and the dual (co-substitution) side computed by recursion over a
//! polynomial coefficient ring.

use std::collections::HashMap;

use crate::algebra::{AlgebraContext, Coproduct};
use crate::coeff::{Coeff, Rational};
use crate::error::{AlgebraError, Result};
use crate::hopf::{euler_transpose, exp_conc, LieIndex};
use crate::parse::parse_assignments;
use crate::poly::{Poly, Var};
use crate::series::{Series, Tensor};
use crate::trees::{Color, Forest, PlanarTree};

/// A map from colors to Lie elements without constant term; it extends
/// uniquely to a post-Lie endomorphism.
#[derive(Clone, Debug, PartialEq)]
pub struct Endomorphism<R: Coeff = Rational> {
    order: usize,
    images: Vec<Series<R>>,
}

impl<R: Coeff> Endomorphism<R> {
    /// One image per color of the context alphabet, in color order.
    pub fn new(ctx: &AlgebraContext, images: Vec<Series<R>>) -> Result<Self> {
        if images.len() != ctx.alphabet().len() {
            return Err(AlgebraError::Precondition(format!(
                "{} images for {} colors",
                images.len(),
                ctx.alphabet().len()
            )));
        }
        let order = images[0].order();
        for (i, img) in images.iter().enumerate() {
            crate::series::check_orders(order, img.order())?;
            let name = ctx.alphabet().name(Color(i as u8)).to_string();
            ctx.require_primitive(img, &format!("image of `{name}`"))?;
        }
        Ok(Endomorphism { order, images })
    }

    /// `c ↦ c` for every color.
    pub fn identity(ctx: &AlgebraContext, order: usize) -> Self {
        let images = ctx
            .alphabet()
            .colors()
            .map(|c| Series::monomial(PlanarTree::leaf(c).as_forest(), R::one(), order))
            .collect();
        Endomorphism { order, images }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn image(&self, c: Color) -> &Series<R> {
        &self.images[c.0 as usize]
    }

    pub fn images(&self) -> &[Series<R>] {
        &self.images
    }
}

impl Endomorphism<Rational> {
    /// Reads `color := series` lines; unlisted colors map to themselves.
    pub fn parse(ctx: &AlgebraContext, text: &str, order: usize) -> Result<Self> {
        let mut images: Vec<Series> = Endomorphism::identity(ctx, order).images;
        for (c, s) in parse_assignments(text, ctx.alphabet(), order)? {
            images[c.0 as usize] = s;
        }
        Endomorphism::new(ctx, images)
    }

    /// Coordinates `a_c(l)` of the images in the Lie basis.
    pub fn coordinates(&self, ctx: &AlgebraContext) -> Result<HashMap<Var, Rational>> {
        let basis = ctx.lie_basis();
        let mut out = HashMap::new();
        for c in ctx.alphabet().colors() {
            for (ix, q) in basis.coordinates(self.image(c))? {
                out.insert(Var::new(c, ix.grade, ix.index), q);
            }
        }
        Ok(out)
    }

    /// The endomorphism with the given Lie coordinates.
    pub fn from_coordinates(
        ctx: &AlgebraContext,
        values: &HashMap<Var, Rational>,
        order: usize,
    ) -> Result<Self> {
        let basis = ctx.lie_basis();
        let mut images = vec![Series::zero(order); ctx.alphabet().len()];
        for (v, q) in values {
            let ix = LieIndex {
                grade: v.grade as usize,
                index: v.index as usize,
            };
            if ix.grade > order {
                continue;
            }
            images[v.color.0 as usize].add_scaled(&basis.element(ix, order), q);
        }
        Ok(Endomorphism { order, images })
    }
}

/// Applies an endomorphism to forests, memoizing per forest.
pub struct Substitution<'a, R: Coeff> {
    ctx: &'a AlgebraContext,
    endo: &'a Endomorphism<R>,
    memo: HashMap<Forest, Series<R>>,
}

impl<'a, R: Coeff> Substitution<'a, R> {
    pub fn new(ctx: &'a AlgebraContext, endo: &'a Endomorphism<R>) -> Self {
        Substitution {
            ctx,
            endo,
            memo: HashMap::new(),
        }
    }

    /// `a★w`: multiplicative on words, and on a tree `B+^c(ω)` equal to
    /// `(a★ω) ▷ a(c)`.
    pub fn forest(&mut self, w: &Forest) -> Result<Series<R>> {
        let order = self.endo.order;
        if w.is_empty() {
            return Ok(Series::one(order));
        }
        if let Some(s) = self.memo.get(w) {
            return Ok(s.clone());
        }
        let out = match w.as_tree() {
            Some(t) => {
                let inner = self.forest(&t.children())?;
                self.ctx.graft(&inner, self.endo.image(t.root()))?
            }
            None => {
                let mut acc = Series::one(order);
                for t in w.trees() {
                    let img = self.forest(&t.as_forest())?;
                    acc = self.ctx.conc_mul(&acc, &img)?;
                }
                acc
            }
        };
        self.memo.insert(w.clone(), out.clone());
        Ok(out)
    }

    pub fn series(&mut self, u: &Series<R>) -> Result<Series<R>> {
        crate::series::check_orders(self.endo.order, u.order())?;
        self.ctx.check(u)?;
        let mut out = Series::zero(u.order());
        for (f, c) in u.terms() {
            out.add_scaled(&self.forest(f)?, c);
        }
        Ok(out)
    }
}

/// The substitution action `a★u`.
pub fn apply_endomorphism<R: Coeff>(
    ctx: &AlgebraContext,
    a: &Endomorphism<R>,
    u: &Series<R>,
) -> Result<Series<R>> {
    Substitution::new(ctx, a).series(u)
}

/// `(a∘b)(c) = a★(b(c))`, so that `(a∘b)★u = a★(b★u)`.
pub fn compose<R: Coeff>(
    ctx: &AlgebraContext,
    a: &Endomorphism<R>,
    b: &Endomorphism<R>,
) -> Result<Endomorphism<R>> {
    crate::series::check_orders(a.order, b.order)?;
    let mut s = Substitution::new(ctx, a);
    let images = b
        .images
        .iter()
        .map(|img| s.series(img))
        .collect::<Result<Vec<_>>>()?;
    Ok(Endomorphism {
        order: a.order,
        images,
    })
}

/// The endomorphism `c ↦ Σ_l a_c(l)·l` over the polynomial ring.
pub fn universal_endomorphism(ctx: &AlgebraContext, order: usize) -> Endomorphism<Poly> {
    let basis = ctx.lie_basis();
    let images = ctx
        .alphabet()
        .colors()
        .map(|c| {
            let mut s: Series<Poly> = Series::zero(order);
            for ix in basis.indices(order) {
                let var = Poly::var(Var::new(c, ix.grade, ix.index));
                s.add_scaled(&basis.element(ix, order), &var);
            }
            s
        })
        .collect();
    Endomorphism { order, images }
}

/// Substitutes rational values for the variables of every coefficient.
pub fn evaluate(s: &Series<Poly>, values: &HashMap<Var, Rational>) -> Series {
    Series::from_terms(s.terms().map(|(f, p)| (f.clone(), p.evaluate(values))), s.order())
}

/// The transpose of `a★` applied to a dual forest, by brute force over
/// every forest of grade at most the order.
pub fn transpose_substitution<R: Coeff>(
    ctx: &AlgebraContext,
    a: &Endomorphism<R>,
    omega: &Forest,
) -> Result<Series<R>> {
    let mut s = Substitution::new(ctx, a);
    let mut out = Series::zero(a.order);
    for n in 0..=omega.grade().min(a.order) {
        for v in ctx.forests(n) {
            let c = s.forest(v)?.coeff(omega);
            out.add_term(v.clone(), c);
        }
    }
    Ok(out)
}

/// The co-substitution recursions over the polynomial ring `K`.
///
/// `U^T(ω) = Σ_v ⟨a★v, ω⟩ v` with the coordinates of `a` left symbolic.
/// It is computed by peeling the last factor of a deconcatenation,
/// `U^T(ω) = Σ_{ω = ω₁ω₂, ω₂ ≠ 1} U^T(ω₁) · Ū^T(ω₂)`, where the tree part
/// `Ū^T(ω) = Σ_{Δ_▷(ω)} U^T(ω⁽¹⁾) ↷ U^t(ω⁽²⁾)` grafts onto a new root
/// of each color weighted by the linear coordinate `U^t`.
pub struct UniversalSubstitution<'a> {
    ctx: &'a AlgebraContext,
    order: usize,
    forest_memo: HashMap<Forest, Series<Poly>>,
    tree_memo: HashMap<Forest, Series<Poly>>,
    ut_memo: HashMap<Forest, Vec<Poly>>,
}

impl<'a> UniversalSubstitution<'a> {
    pub fn new(ctx: &'a AlgebraContext, order: usize) -> Result<Self> {
        if order > ctx.order() {
            return Err(AlgebraError::ContextMismatch(format!(
                "order {order} in a context of order {}",
                ctx.order()
            )));
        }
        Ok(UniversalSubstitution {
            ctx,
            order,
            forest_memo: HashMap::new(),
            tree_memo: HashMap::new(),
            ut_memo: HashMap::new(),
        })
    }

    /// `U^t(ω)`, one polynomial per color: `Σ_l a_c(l) ⟨l, e^T(ω)⟩`.
    pub fn ut_projection(&mut self, omega: &Forest) -> Result<Vec<Poly>> {
        if let Some(v) = self.ut_memo.get(omega) {
            return Ok(v.clone());
        }
        let n = omega.grade();
        let mut out = vec![Poly::zero(); self.ctx.alphabet().len()];
        if n > 0 && n <= self.order {
            let projected = euler_transpose(self.ctx, &Series::forest(omega.clone(), self.order))?;
            let basis = self.ctx.lie_basis();
            for (index, el) in basis.grade(n).iter().enumerate() {
                let mut q = Rational::zero();
                for (f, c) in el.terms.iter() {
                    q += c * projected.coeff(f);
                }
                if q.is_zero() {
                    continue;
                }
                for c in self.ctx.alphabet().colors() {
                    let var = Poly::var(Var::new(c, n, index)).scale(&q);
                    out[c.0 as usize].add_assign_ref(&var);
                }
            }
        }
        self.ut_memo.insert(omega.clone(), out.clone());
        Ok(out)
    }

    /// `Ū^T(ω)`: supported on single trees.
    pub fn tree(&mut self, omega: &Forest) -> Result<Series<Poly>> {
        if let Some(s) = self.tree_memo.get(omega) {
            return Ok(s.clone());
        }
        let mut out: Series<Poly> = Series::zero(self.order);
        if !omega.is_empty() && omega.grade() <= self.order {
            let terms = self.ctx.coproduct_basis(Coproduct::Graft, omega);
            for (u, w, q) in terms.iter() {
                if w.is_empty() {
                    continue;
                }
                let ut = self.ut_projection(w)?;
                let left = self.forest(u)?;
                for c in self.ctx.alphabet().colors() {
                    let weight = ut[c.0 as usize].scale(q);
                    if weight.is_zero() {
                        continue;
                    }
                    for (v, k) in left.terms() {
                        let t = PlanarTree::new(c, v).as_forest();
                        out.add_term(t, k.mul_ref(&weight));
                    }
                }
            }
        }
        self.tree_memo.insert(omega.clone(), out.clone());
        Ok(out)
    }

    /// `U^T(ω)`.
    pub fn forest(&mut self, omega: &Forest) -> Result<Series<Poly>> {
        if omega.is_empty() {
            return Ok(Series::one(self.order));
        }
        if let Some(s) = self.forest_memo.get(omega) {
            return Ok(s.clone());
        }
        let mut out: Series<Poly> = Series::zero(self.order);
        for (w1, w2, _) in self.ctx.coproduct_basis(Coproduct::Deconcat, omega).iter() {
            if w2.is_empty() {
                continue;
            }
            let head = self.forest(w1)?;
            let tail = self.tree(w2)?;
            out = &out + &self.ctx.conc_mul(&head, &tail)?;
        }
        self.forest_memo.insert(omega.clone(), out.clone());
        Ok(out)
    }

    /// `Δ★` of a dual series: the linear extension of [`Self::forest`].
    /// Coefficients are functions on endomorphisms, forests the second leg.
    pub fn cosubstitution(&mut self, u_dual: &Series) -> Result<Series<Poly>> {
        let mut out: Series<Poly> = Series::zero(self.order);
        for (f, q) in u_dual.terms() {
            let s = self.forest(f)?;
            out.add_scaled_rational(&s, q);
        }
        Ok(out)
    }
}

/// The one-generator co-substitution with the endomorphism leg kept in
/// the shuffle algebra of dual forests: a function on endomorphisms is a
/// dual forest `k`, evaluated at `a` as `⟨exp•(a(•)), k⟩`. Products of
/// such functions are shuffles and the linear coordinate of a dual forest
/// `w` is `e^T(w)`.
pub struct OneGeneratorCosubstitution<'a> {
    ctx: &'a AlgebraContext,
    order: usize,
    forest_memo: HashMap<Forest, Tensor>,
    tree_memo: HashMap<Forest, Tensor>,
}

impl<'a> OneGeneratorCosubstitution<'a> {
    pub fn new(ctx: &'a AlgebraContext, order: usize) -> Result<Self> {
        if ctx.alphabet().len() != 1 {
            return Err(AlgebraError::Precondition(
                "one-generator co-substitution needs a single color".into(),
            ));
        }
        if order > ctx.order() {
            return Err(AlgebraError::ContextMismatch(format!(
                "order {order} in a context of order {}",
                ctx.order()
            )));
        }
        Ok(OneGeneratorCosubstitution {
            ctx,
            order,
            forest_memo: HashMap::new(),
            tree_memo: HashMap::new(),
        })
    }

    fn tensor_order(&self) -> usize {
        2 * self.order
    }

    /// `(k₁ ⊗ v₁)(k₂ ⊗ v₂) = (k₁ ⧢ k₂) ⊗ (v₁ v₂)`.
    fn mul(&self, x: &Tensor, y: &Tensor) -> Tensor {
        let mut out = Tensor::zero(self.tensor_order());
        for (k1, v1, p) in x.terms() {
            for (k2, v2, q) in y.terms() {
                if v1.grade() + v2.grade() > self.order {
                    continue;
                }
                let v = v1.concat(v2);
                let pq = p * q;
                for (k, r) in self
                    .ctx
                    .product_basis(crate::algebra::Product::Shuffle, k1, k2)
                    .iter()
                {
                    out.add_term(k.clone(), v.clone(), &pq * r);
                }
            }
        }
        out
    }

    pub fn tree(&mut self, omega: &Forest) -> Result<Tensor> {
        if let Some(t) = self.tree_memo.get(omega) {
            return Ok(t.clone());
        }
        let mut out = Tensor::zero(self.tensor_order());
        let root = Color(0);
        if !omega.is_empty() && omega.grade() <= self.order {
            for (u, w, q) in self.ctx.coproduct_basis(Coproduct::Graft, omega).iter() {
                if w.is_empty() {
                    continue;
                }
                let pi = euler_transpose(self.ctx, &Series::forest(w.clone(), self.order))?;
                let left = self.forest(u)?;
                for (k, v, p) in left.terms() {
                    let t = PlanarTree::new(root, v).as_forest();
                    for (pk, r) in pi.terms() {
                        for (kk, s) in self
                            .ctx
                            .product_basis(crate::algebra::Product::Shuffle, k, pk)
                            .iter()
                        {
                            out.add_term(kk.clone(), t.clone(), q * p * r * s);
                        }
                    }
                }
            }
        }
        self.tree_memo.insert(omega.clone(), out.clone());
        Ok(out)
    }

    pub fn forest(&mut self, omega: &Forest) -> Result<Tensor> {
        if omega.is_empty() {
            let mut t = Tensor::zero(self.tensor_order());
            t.add_term(Forest::empty(), Forest::empty(), Rational::one());
            return Ok(t);
        }
        if let Some(t) = self.forest_memo.get(omega) {
            return Ok(t.clone());
        }
        let mut out = Tensor::zero(self.tensor_order());
        for (w1, w2, _) in self.ctx.coproduct_basis(Coproduct::Deconcat, omega).iter() {
            if w2.is_empty() {
                continue;
            }
            let head = self.forest(w1)?;
            let tail = self.tree(w2)?;
            out.add_scaled(&self.mul(&head, &tail), &Rational::one());
        }
        self.forest_memo.insert(omega.clone(), out.clone());
        Ok(out)
    }

    /// Evaluates the endomorphism leg at `a`: `Σ ⟨exp•(a(•)), k⟩ v`.
    pub fn evaluate(&self, t: &Tensor, a: &Endomorphism) -> Result<Series> {
        let g = exp_conc(self.ctx, a.image(Color(0)))?;
        let mut out = Series::zero(self.order);
        for (k, v, q) in t.terms() {
            out.add_term(v.clone(), q * g.coeff(k));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{int, rat};
    use crate::parse::parse_series;
    use crate::trees::Alphabet;

    fn setup(order: usize) -> (Alphabet, AlgebraContext) {
        let a = Alphabet::single();
        let ctx = AlgebraContext::new(a.clone(), order).unwrap();
        (a, ctx)
    }

    #[test]
    fn identity_acts_trivially() {
        let (a, ctx) = setup(4);
        let id = Endomorphism::identity(&ctx, 4);
        let u = parse_series("a[a[] a[]] - 1/2*a[] a[a[]] + 3", &a, 4).unwrap();
        assert_eq!(apply_endomorphism(&ctx, &id, &u).unwrap(), u);
    }

    #[test]
    fn scaling_multiplies_by_powers() {
        let (a, ctx) = setup(4);
        let lambda = rat(-2, 3);
        let endo = Endomorphism::new(
            &ctx,
            vec![parse_series("a[]", &a, 4).unwrap().scale(&lambda)],
        )
        .unwrap();
        for n in 1..=4 {
            for t in ctx.trees(n) {
                let got = apply_endomorphism(&ctx, &endo, &Series::tree(t, 4)).unwrap();
                let mut p = int(1);
                for _ in 0..n {
                    p *= &lambda;
                }
                assert_eq!(got, Series::tree(t, 4).scale(&p));
            }
        }
    }

    #[test]
    fn chain_under_perturbed_leaf() {
        let (a, ctx) = setup(3);
        let endo = Endomorphism::new(&ctx, vec![parse_series("a[] + a[a[]]", &a, 3).unwrap()])
            .unwrap();
        let got = apply_endomorphism(&ctx, &endo, &parse_series("a[a[]]", &a, 3).unwrap()).unwrap();
        assert_eq!(
            got,
            parse_series("a[a[]] + a[a[] a[]] + 2*a[a[a[]]]", &a, 3).unwrap()
        );
    }

    #[test]
    fn lowest_grade_universal_values() {
        let (a, ctx) = setup(3);
        let mut us = UniversalSubstitution::new(&ctx, 3).unwrap();
        let leaf = ctx.forests(1)[0].clone();
        let v = Poly::var(Var::new(Color(0), 1, 0));
        let expected: Series<Poly> = Series::monomial(leaf.clone(), v.clone(), 3);
        assert_eq!(us.forest(&Forest::empty()).unwrap(), Series::one(3));
        assert_eq!(us.forest(&leaf).unwrap(), expected);
        assert_eq!(us.tree(&leaf).unwrap(), expected);
        assert_eq!(us.ut_projection(&leaf).unwrap(), vec![v]);
        let square = parse_series("a[] a[]", &a, 3).unwrap();
        let (w, _) = square.terms().next().unwrap();
        assert!(us.ut_projection(w).unwrap()[0].is_zero());
    }

    #[test]
    fn recursion_matches_symbolic_brute_force() {
        let a = Alphabet::new(["a", "b"]).unwrap();
        let ctx = AlgebraContext::new(a, 3).unwrap();
        let universal = universal_endomorphism(&ctx, 3);
        let mut us = UniversalSubstitution::new(&ctx, 3).unwrap();
        for n in 0..=3 {
            for w in ctx.forests(n) {
                let brute = transpose_substitution(&ctx, &universal, w).unwrap();
                assert_eq!(us.forest(w).unwrap(), brute);
                if w.len() == 1 {
                    assert_eq!(us.tree(w).unwrap(), brute);
                }
            }
        }
    }

    #[test]
    fn coordinates_round_trip() {
        let (a, ctx) = setup(4);
        let endo = Endomorphism::new(
            &ctx,
            vec![parse_series("a[] - a[a[a[]]] + 1/2*a[] a[a[]] - 1/2*a[a[]] a[]", &a, 4).unwrap()],
        )
        .unwrap();
        let coords = endo.coordinates(&ctx).unwrap();
        assert_eq!(Endomorphism::from_coordinates(&ctx, &coords, 4).unwrap(), endo);
    }

    #[test]
    fn composition_is_sequential_substitution() {
        let (a, ctx) = setup(4);
        let x = Endomorphism::new(&ctx, vec![parse_series("a[] + a[a[]]", &a, 4).unwrap()]).unwrap();
        let y = Endomorphism::new(&ctx, vec![parse_series("2*a[] - a[a[] a[]]", &a, 4).unwrap()])
            .unwrap();
        let xy = compose(&ctx, &x, &y).unwrap();
        let u = parse_series("a[a[]] + a[] a[]", &a, 4).unwrap();
        let lhs = apply_endomorphism(&ctx, &xy, &u).unwrap();
        let rhs = apply_endomorphism(&ctx, &x, &apply_endomorphism(&ctx, &y, &u).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn one_generator_form_evaluates_to_the_transpose() {
        let (a, ctx) = setup(3);
        let endo = Endomorphism::new(&ctx, vec![parse_series("a[] - 2*a[a[]] + a[a[] a[]]", &a, 3).unwrap()])
            .unwrap();
        let mut og = OneGeneratorCosubstitution::new(&ctx, 3).unwrap();
        for n in 0..=3 {
            for w in ctx.forests(n) {
                let t = og.forest(w).unwrap();
                assert_eq!(
                    og.evaluate(&t, &endo).unwrap(),
                    transpose_substitution(&ctx, &endo, w).unwrap()
                );
            }
        }
        let leaf = ctx.forests(1)[0].clone();
        let t = og.forest(&leaf).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t.coeff(&leaf, &leaf), int(1));
    }

    #[test]
    fn parse_endomorphism_file() {
        let (_, ctx) = setup(3);
        let e = Endomorphism::parse(&ctx, "a := a[] + 1/2*a[a[]]\n", 3).unwrap();
        assert_eq!(e.image(Color(0)).len(), 2);
        assert!(matches!(
            Endomorphism::parse(&ctx, "a := a[] a[]", 3),
            Err(AlgebraError::NotPrimitive(_))
        ));
    }
}
