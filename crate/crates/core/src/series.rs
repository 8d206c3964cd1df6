//! Truncated graded series over forests, and tensors of them.

use std::collections::hash_map::Entry;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::coeff::{format_rational, Coeff, Rational};
use crate::error::{AlgebraError, Result};
use crate::poly::Poly;
use crate::trees::{Alphabet, Forest, PlanarTree};

/// A finite linear combination of forests of grade at most `order`:
/// an element of the completed tensor algebra known modulo grade `order + 1`.
#[derive(Clone, PartialEq)]
pub struct Series<R: Coeff = Rational> {
    order: usize,
    terms: HashMap<Forest, R>,
}

pub(crate) fn check_orders(left: usize, right: usize) -> Result<()> {
    if left != right {
        return Err(AlgebraError::OrderMismatch { left, right });
    }
    Ok(())
}

impl<R: Coeff> Series<R> {
    pub fn zero(order: usize) -> Self {
        Series {
            order,
            terms: HashMap::new(),
        }
    }

    /// The unit: the empty forest with coefficient one.
    pub fn one(order: usize) -> Self {
        Self::monomial(Forest::empty(), R::one(), order)
    }

    pub fn monomial(forest: Forest, coeff: R, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.add_term(forest, coeff);
        s
    }

    pub fn from_terms<I: IntoIterator<Item = (Forest, R)>>(terms: I, order: usize) -> Self {
        let mut s = Self::zero(order);
        for (f, c) in terms {
            s.add_term(f, c);
        }
        s
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Forest, &R)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Forest, R)> {
        self.terms.into_iter()
    }

    /// Terms in canonical forest order.
    pub fn sorted_terms(&self) -> Vec<(&Forest, &R)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| a.0.cmp(b.0));
        v
    }

    pub fn coeff(&self, f: &Forest) -> R {
        self.terms.get(f).cloned().unwrap_or_else(R::zero)
    }

    pub fn constant_term(&self) -> R {
        self.coeff(&Forest::empty())
    }

    /// Adds `coeff * forest`, silently dropping forests above the order.
    pub fn add_term(&mut self, forest: Forest, coeff: R) {
        if coeff.is_zero() || forest.grade() > self.order {
            return;
        }
        match self.terms.entry(forest) {
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
            Entry::Occupied(mut e) => {
                e.get_mut().add_assign_ref(&coeff);
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// `self += scale * other`. Panics on order mismatch.
    pub fn add_scaled(&mut self, other: &Series<R>, scale: &R) {
        assert_eq!(self.order, other.order, "series orders differ");
        for (f, c) in &other.terms {
            self.add_term(f.clone(), c.mul_ref(scale));
        }
    }

    pub fn add_scaled_rational(&mut self, other: &Series<R>, scale: &Rational) {
        assert_eq!(self.order, other.order, "series orders differ");
        for (f, c) in &other.terms {
            self.add_term(f.clone(), c.scale(scale));
        }
    }

    pub fn try_add(&self, other: &Series<R>) -> Result<Series<R>> {
        check_orders(self.order, other.order)?;
        Ok(self + other)
    }

    pub fn try_sub(&self, other: &Series<R>) -> Result<Series<R>> {
        check_orders(self.order, other.order)?;
        Ok(self - other)
    }

    pub fn scale(&self, c: &R) -> Series<R> {
        let mut s = Self::zero(self.order);
        for (f, x) in &self.terms {
            s.add_term(f.clone(), x.mul_ref(c));
        }
        s
    }

    pub fn scale_rational(&self, q: &Rational) -> Series<R> {
        let mut s = Self::zero(self.order);
        for (f, x) in &self.terms {
            s.add_term(f.clone(), x.scale(q));
        }
        s
    }

    /// The part of exactly the given grade.
    pub fn homogeneous(&self, grade: usize) -> Series<R> {
        Series {
            order: self.order,
            terms: self
                .terms
                .iter()
                .filter(|(f, _)| f.grade() == grade)
                .map(|(f, c)| (f.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn without_constant(&self) -> Series<R> {
        let mut s = self.clone();
        s.terms.remove(&Forest::empty());
        s
    }

    pub fn max_grade(&self) -> usize {
        self.terms.keys().map(Forest::grade).max().unwrap_or(0)
    }

    pub fn min_grade(&self) -> Option<usize> {
        self.terms.keys().map(Forest::grade).min()
    }

    /// Explicit re-truncation to a lower or higher order.
    pub fn truncated(&self, order: usize) -> Series<R> {
        Series::from_terms(
            self.terms.iter().map(|(f, c)| (f.clone(), c.clone())),
            order,
        )
    }

    pub fn map_coeffs<S: Coeff>(&self, f: impl Fn(&R) -> S) -> Series<S> {
        Series::from_terms(
            self.terms.iter().map(|(k, c)| (k.clone(), f(c))),
            self.order,
        )
    }

    pub fn lift<S: Coeff>(&self) -> Series<S>
    where
        R: Into<Rational> + Clone,
    {
        self.map_coeffs(|c| S::from_rational(&c.clone().into()))
    }
}

impl Series<Rational> {
    /// A single forest with coefficient one.
    pub fn forest(forest: Forest, order: usize) -> Self {
        Self::monomial(forest, Rational::one(), order)
    }

    pub fn tree(tree: &PlanarTree, order: usize) -> Self {
        Self::forest(tree.as_forest(), order)
    }

    /// Embeds a rational series into another coefficient ring.
    pub fn to_ring<S: Coeff>(&self) -> Series<S> {
        self.map_coeffs(S::from_rational)
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> impl fmt::Display + 'a {
        DisplaySeries {
            series: self,
            alphabet,
        }
    }
}

impl Series<Poly> {
    /// Terms `(p)*forest` in canonical forest order.
    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> impl fmt::Display + 'a {
        DisplayPolySeries {
            series: self,
            alphabet,
        }
    }
}

struct DisplayPolySeries<'a> {
    series: &'a Series<Poly>,
    alphabet: &'a Alphabet,
}

impl fmt::Display for DisplayPolySeries<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.series.sorted_terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (forest, p)) in terms.into_iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({})", p.display(self.alphabet))?;
            if !forest.is_empty() {
                write!(f, "*{}", forest.display(self.alphabet))?;
            }
        }
        Ok(())
    }
}

/// `Σ_f u(f) w(f)`: forests are an orthonormal basis.
pub fn pair<R: Coeff>(u: &Series<R>, w: &Series<R>) -> Result<R> {
    check_orders(u.order, w.order)?;
    let (small, large) = if u.len() <= w.len() { (u, w) } else { (w, u) };
    let mut total = R::zero();
    for (f, c) in &small.terms {
        if let Some(d) = large.terms.get(f) {
            total.add_assign_ref(&c.mul_ref(d));
        }
    }
    Ok(total)
}

impl<R: Coeff> Add for &Series<R> {
    type Output = Series<R>;
    fn add(self, rhs: &Series<R>) -> Series<R> {
        let mut s = self.clone();
        s.add_scaled(rhs, &R::one());
        s
    }
}

impl<R: Coeff> Sub for &Series<R> {
    type Output = Series<R>;
    fn sub(self, rhs: &Series<R>) -> Series<R> {
        let mut s = self.clone();
        s.add_scaled(rhs, &R::one().neg_ref());
        s
    }
}

impl<R: Coeff> Neg for &Series<R> {
    type Output = Series<R>;
    fn neg(self) -> Series<R> {
        self.scale(&R::one().neg_ref())
    }
}

impl<R: Coeff> fmt::Debug for Series<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Series")
            .field("order", &self.order)
            .field("terms", &self.sorted_terms())
            .finish()
    }
}

struct DisplaySeries<'a> {
    series: &'a Series<Rational>,
    alphabet: &'a Alphabet,
}

/// Writes `coeff*forest` in the canonical print form.
pub(crate) fn write_term(
    f: &mut fmt::Formatter<'_>,
    first: bool,
    coeff: &Rational,
    body: Option<&dyn fmt::Display>,
) -> fmt::Result {
    let negative = coeff < &<Rational as Coeff>::zero();
    let abs = if negative { -coeff.clone() } else { coeff.clone() };
    match (first, negative) {
        (true, true) => write!(f, "-")?,
        (true, false) => {}
        (false, true) => write!(f, " - ")?,
        (false, false) => write!(f, " + ")?,
    }
    match body {
        None => write!(f, "{}", format_rational(&abs)),
        Some(b) if abs == <Rational as Coeff>::one() => write!(f, "{b}"),
        Some(b) => write!(f, "{}*{b}", format_rational(&abs)),
    }
}

impl fmt::Display for DisplaySeries<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.series.sorted_terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (forest, c)) in terms.into_iter().enumerate() {
            if forest.is_empty() {
                write_term(f, i == 0, c, None)?;
            } else {
                let body = forest.display(self.alphabet);
                write_term(f, i == 0, c, Some(&body))?;
            }
        }
        Ok(())
    }
}

/// An element of `T ⊗ T`, truncated by total grade.
#[derive(Clone, PartialEq)]
pub struct Tensor<R: Coeff = Rational> {
    order: usize,
    terms: HashMap<(Forest, Forest), R>,
}

impl<R: Coeff> Tensor<R> {
    pub fn zero(order: usize) -> Self {
        Tensor {
            order,
            terms: HashMap::new(),
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, left: Forest, right: Forest, coeff: R) {
        if coeff.is_zero() || left.grade() + right.grade() > self.order {
            return;
        }
        match self.terms.entry((left, right)) {
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
            Entry::Occupied(mut e) => {
                e.get_mut().add_assign_ref(&coeff);
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn coeff(&self, left: &Forest, right: &Forest) -> R {
        self.terms
            .get(&(left.clone(), right.clone()))
            .cloned()
            .unwrap_or_else(R::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Forest, &Forest, &R)> {
        self.terms.iter().map(|((l, r), c)| (l, r, c))
    }

    pub fn sorted_terms(&self) -> Vec<(&Forest, &Forest, &R)> {
        let mut v: Vec<_> = self.terms().collect();
        v.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        v
    }

    /// `u ⊗ v`.
    pub fn product(u: &Series<R>, v: &Series<R>) -> Result<Self> {
        check_orders(u.order(), v.order())?;
        let mut t = Tensor::zero(u.order());
        for (fu, cu) in u.terms() {
            for (fv, cv) in v.terms() {
                t.add_term(fu.clone(), fv.clone(), cu.mul_ref(cv));
            }
        }
        Ok(t)
    }

    /// `⟨self, u ⊗ v⟩`.
    pub fn pair_with(&self, u: &Series<R>, v: &Series<R>) -> Result<R> {
        check_orders(self.order, u.order())?;
        check_orders(self.order, v.order())?;
        let mut total = R::zero();
        for ((l, r), c) in &self.terms {
            let a = u.coeff(l);
            if a.is_zero() {
                continue;
            }
            let b = v.coeff(r);
            if b.is_zero() {
                continue;
            }
            total.add_assign_ref(&c.mul_ref(&a).mul_ref(&b));
        }
        Ok(total)
    }

    pub fn add_scaled(&mut self, other: &Tensor<R>, scale: &R) {
        for ((l, r), c) in &other.terms {
            self.add_term(l.clone(), r.clone(), c.mul_ref(scale));
        }
    }
}

impl Tensor<Rational> {
    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> impl fmt::Display + 'a {
        DisplayTensor {
            tensor: self,
            alphabet,
        }
    }
}

impl<R: Coeff> fmt::Debug for Tensor<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Tensor")
            .field("order", &self.order)
            .field("terms", &self.sorted_terms())
            .finish()
    }
}

struct DisplayTensor<'a> {
    tensor: &'a Tensor<Rational>,
    alphabet: &'a Alphabet,
}

impl fmt::Display for DisplayTensor<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.tensor.sorted_terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (l, r, c)) in terms.into_iter().enumerate() {
            let body = format!(
                "{} ⊗ {}",
                l.display(self.alphabet),
                r.display(self.alphabet)
            );
            write_term(f, i == 0, c, Some(&body))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{int, rat};
    use crate::trees::Color;

    fn leaf() -> Forest {
        PlanarTree::leaf(Color(0)).as_forest()
    }

    #[test]
    fn pairing_is_orthonormal_and_bilinear() {
        let f = leaf();
        let g = f.concat(&f);
        let u: Series = Series::from_terms([(f.clone(), int(2)), (g.clone(), int(3))], 4);
        assert_eq!(pair(&Series::forest(f.clone(), 4), &Series::forest(f.clone(), 4)).unwrap(), int(1));
        assert_eq!(pair(&Series::forest(f.clone(), 4), &Series::forest(g, 4)).unwrap(), int(0));
        assert_eq!(pair(&u, &Series::forest(f, 4)).unwrap(), int(2));
    }

    #[test]
    fn order_mismatch_is_reported() {
        let a: Series = Series::one(3);
        let b: Series = Series::one(4);
        assert_eq!(
            pair(&a, &b),
            Err(AlgebraError::OrderMismatch { left: 3, right: 4 })
        );
        assert!(a.try_add(&b).is_err());
    }

    #[test]
    fn truncation_drops_high_grades_and_zeros_vanish() {
        let f = leaf();
        let mut s: Series = Series::zero(1);
        s.add_term(f.concat(&f), int(1));
        assert!(s.is_zero());
        s.add_term(f.clone(), rat(1, 2));
        s.add_term(f, rat(-1, 2));
        assert!(s.is_zero());
    }

    #[test]
    fn module_laws() {
        let f = leaf();
        let u: Series = Series::from_terms([(f.clone(), int(2))], 3);
        let v: Series = Series::from_terms([(f.concat(&f), rat(1, 3))], 3);
        let w: Series = Series::one(3);
        assert_eq!(&(&u + &v) + &w, &u + &(&v + &w));
        assert_eq!((&u + &v).scale(&int(2)), &u.scale(&int(2)) + &v.scale(&int(2)));
        assert!((&u - &u).is_zero());
        assert_eq!(-&(-&u), u);
    }

    #[test]
    fn tensor_pairing() {
        let f = leaf();
        let u: Series = Series::forest(f.clone(), 3);
        let one: Series = Series::one(3);
        let t = Tensor::product(&u, &one).unwrap();
        assert_eq!(t.pair_with(&u, &one).unwrap(), int(1));
        assert_eq!(t.pair_with(&one, &u).unwrap(), int(0));
    }
}
