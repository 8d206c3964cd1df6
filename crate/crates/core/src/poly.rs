//! Sparse multivariate polynomials over the rationals.
//!
//! Used as the coefficient ring of the universal substitution: the
//! variables are the coordinates `a_c(l)` of an endomorphism, one per
//! color `c` and Lie basis element `l`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use smallvec::SmallVec;

use crate::coeff::{format_rational, Coeff, Rational};
use crate::trees::{Alphabet, Color};

/// The coordinate `a_c(l)`; `l` is addressed by its grade and its
/// position inside the Lie basis of that grade.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var {
    pub color: Color,
    pub grade: u16,
    pub index: u32,
}

impl Var {
    pub fn new(color: Color, grade: usize, index: usize) -> Self {
        Var {
            color,
            grade: grade as u16,
            index: index as u32,
        }
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> impl fmt::Display + 'a {
        DisplayVar { var: self, alphabet }
    }
}

struct DisplayVar<'a> {
    var: &'a Var,
    alphabet: &'a Alphabet,
}

impl fmt::Display for DisplayVar<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "a_{}({}.{})",
            self.alphabet.name(self.var.color),
            self.var.grade,
            self.var.index
        )
    }
}

/// Sorted list of `(variable, exponent)` with positive exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(SmallVec<[(Var, u32); 4]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn var(v: Var) -> Self {
        let mut m = SmallVec::new();
        m.push((v, 1));
        Monomial(m)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn factors(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = SmallVec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let (a, ea) = self.0[i];
            let (b, eb) = other.0[j];
            match a.cmp(&b) {
                std::cmp::Ordering::Less => {
                    out.push((a, ea));
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push((b, eb));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a, ea + eb));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn constant(q: Rational) -> Self {
        let mut p = Poly::default();
        p.add_term(Monomial::one(), q);
        p
    }

    pub fn var(v: Var) -> Self {
        let mut p = Poly::default();
        p.add_term(Monomial::var(v), Coeff::one());
        p
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Monomial, q: Rational) {
        if Coeff::is_zero(&q) {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(q);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += q;
                if Coeff::is_zero(e.get()) {
                    e.remove();
                }
            }
        }
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Coeff::zero)
    }

    /// Substitutes a rational value for every variable; missing variables are zero.
    pub fn evaluate(&self, values: &HashMap<Var, Rational>) -> Rational {
        let mut total: Rational = Coeff::zero();
        'terms: for (m, q) in &self.terms {
            let mut v = q.clone();
            for (var, e) in m.factors() {
                match values.get(var) {
                    Some(x) if !Coeff::is_zero(x) => {
                        for _ in 0..*e {
                            v *= x;
                        }
                    }
                    _ => continue 'terms,
                }
            }
            total += v;
        }
        total
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> impl fmt::Display + 'a {
        DisplayPoly {
            poly: self,
            alphabet,
        }
    }
}

struct DisplayPoly<'a> {
    poly: &'a Poly,
    alphabet: &'a Alphabet,
}

impl fmt::Display for DisplayPoly<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, q)) in self.poly.terms.iter().enumerate() {
            let negative = q < &<Rational as Coeff>::zero();
            let abs = if negative { -q.clone() } else { q.clone() };
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let unit = abs == <Rational as Coeff>::one();
            if m.factors().is_empty() {
                write!(f, "{}", format_rational(&abs))?;
                continue;
            }
            if !unit {
                write!(f, "{}*", format_rational(&abs))?;
            }
            for (k, (v, e)) in m.factors().iter().enumerate() {
                if k > 0 {
                    write!(f, "*")?;
                }
                write!(f, "{}", v.display(self.alphabet))?;
                if *e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}

impl Coeff for Poly {
    fn zero() -> Self {
        Poly::default()
    }
    fn one() -> Self {
        Poly::constant(Coeff::one())
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn from_rational(q: &Rational) -> Self {
        Poly::constant(q.clone())
    }
    fn add_assign_ref(&mut self, other: &Self) {
        for (m, q) in &other.terms {
            self.add_term(m.clone(), q.clone());
        }
    }
    fn mul_ref(&self, other: &Self) -> Self {
        let mut out = Poly::default();
        for (ma, qa) in &self.terms {
            for (mb, qb) in &other.terms {
                out.add_term(ma.mul(mb), qa * qb);
            }
        }
        out
    }
    fn scale(&self, q: &Rational) -> Self {
        if Coeff::is_zero(q) {
            return Poly::default();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c * q))
                .collect(),
        }
    }
    fn neg_ref(&self) -> Self {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{int, rat};

    fn x(i: usize) -> Var {
        Var::new(Color(0), 1, i)
    }

    #[test]
    fn ring_laws_on_small_polynomials() {
        let p = Poly::var(x(0)).scale(&rat(1, 2));
        let mut q = Poly::var(x(1));
        q.add_assign_ref(&Poly::one());
        let pq = p.mul_ref(&q);
        assert_eq!(pq.len(), 2);
        assert_eq!(pq, q.mul_ref(&p));
        let mut zero = pq.clone();
        zero.add_assign_ref(&pq.neg_ref());
        assert!(zero.is_zero());
        let sq = Poly::var(x(0)).mul_ref(&Poly::var(x(0)));
        assert_eq!(sq.terms().next().unwrap().0.degree(), 2);
    }

    #[test]
    fn evaluation_is_a_ring_map() {
        let mut p = Poly::var(x(0));
        p.add_term(Monomial::var(x(1)).mul(&Monomial::var(x(1))), int(3));
        let values: HashMap<Var, Rational> = [(x(0), rat(2, 3)), (x(1), int(-1))].into();
        assert_eq!(p.evaluate(&values), rat(2, 3) + int(3));
        let sq = p.mul_ref(&p);
        assert_eq!(sq.evaluate(&values), p.evaluate(&values) * p.evaluate(&values));
    }

    #[test]
    fn printing_is_sorted() {
        let alphabet = Alphabet::single();
        let mut p = Poly::var(Var::new(Color(0), 2, 0)).scale(&rat(-1, 2));
        p.add_assign_ref(&Poly::var(Var::new(Color(0), 1, 0)));
        assert_eq!(p.display(&alphabet).to_string(), "a_a(1.0) - 1/2*a_a(2.0)");
    }
}
