//! Products and coproducts on forests: concatenation, shuffle, grafting,
//! the Grossman–Larson product, deconcatenation and unshuffle.
//!
//! Every bilinear operation is first computed on a pair of basis forests
//! (exactly, with rational structure constants) and then extended
//! bilinearly to series over any coefficient ring.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use crate::coeff::{Coeff, Rational};
use crate::error::{AlgebraError, Result};
use crate::series::{check_orders, Series, Tensor};
use crate::trees::{build_tables, check_capacity, tree_slices, Alphabet, Code, Forest, Tables, CLOSE};

/// A basis-level result: a sparse combination of forests.
pub type Terms = Arc<[(Forest, Rational)]>;

/// A basis-level coproduct: a sparse combination of forest pairs.
pub type TensorTerms = Arc<[(Forest, Forest, Rational)]>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Product {
    /// Concatenation `•`.
    Conc,
    Shuffle,
    /// Grafting `▷`.
    Graft,
    /// Grossman–Larson `*`.
    Gl,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Coproduct {
    Deconcat,
    Unshuffle,
    /// `Δ_*`, transpose of `*`.
    Gl,
    /// `Δ_▷`, transpose of `▷`.
    Graft,
}

type Memo<K, V> = RwLock<HashMap<K, V>>;

fn memo_get<K: std::hash::Hash + Eq, V: Clone>(m: &Memo<K, V>, k: &K) -> Option<V> {
    m.read().expect("memo lock").get(k).cloned()
}

fn memo_put<K: std::hash::Hash + Eq, V: Clone>(m: &Memo<K, V>, k: K, v: V) -> V {
    m.write().expect("memo lock").entry(k).or_insert(v).clone()
}

/// Accumulates a sparse combination and freezes it into [`Terms`].
#[derive(Default)]
pub(crate) struct Acc(HashMap<Forest, Rational>);

impl Acc {
    pub(crate) fn add(&mut self, f: Forest, q: Rational) {
        if q.is_zero() {
            return;
        }
        let slot = self.0.entry(f).or_insert_with(Coeff::zero);
        *slot += q;
    }

    pub(crate) fn freeze(self) -> Terms {
        let mut v: Vec<(Forest, Rational)> =
            self.0.into_iter().filter(|(_, q)| !q.is_zero()).collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v.into()
    }
}

/// Colors, truncation bound and memo tables shared by all operations.
///
/// Series of any order up to the context order may be combined; the memo
/// tables hold exact basis-level results and never depend on truncation.
pub struct AlgebraContext {
    alphabet: Alphabet,
    order: usize,
    tables: OnceLock<Tables>,
    graft_memo: Memo<(Forest, Forest), Terms>,
    gl_memo: Memo<(Forest, Forest), Terms>,
    pub(crate) euler_memo: Memo<Forest, Terms>,
    pub(crate) euler_dual_memo: Memo<Forest, Terms>,
    pub(crate) coproduct_memo: Memo<(Coproduct, usize), Arc<HashMap<Forest, TensorTerms>>>,
    pub(crate) lie_basis: OnceLock<crate::hopf::LieBasis>,
}

impl std::fmt::Debug for AlgebraContext {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("AlgebraContext")
            .field("alphabet", &self.alphabet)
            .field("order", &self.order)
            .finish_non_exhaustive()
    }
}

impl AlgebraContext {
    pub fn new(alphabet: Alphabet, order: usize) -> Result<Self> {
        check_capacity(order)?;
        Ok(AlgebraContext {
            alphabet,
            order,
            tables: OnceLock::new(),
            graft_memo: RwLock::default(),
            gl_memo: RwLock::default(),
            euler_memo: RwLock::default(),
            euler_dual_memo: RwLock::default(),
            coproduct_memo: RwLock::default(),
            lie_basis: OnceLock::new(),
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Forests of exactly `grade` vertices in canonical order.
    pub fn forests(&self, grade: usize) -> &[Forest] {
        assert!(grade <= self.order, "grade above context order");
        &self
            .tables
            .get_or_init(|| build_tables(&self.alphabet, self.order))
            .forests[grade]
    }

    /// All forests of grade at most `order`.
    pub fn forests_up_to(&self, order: usize) -> impl Iterator<Item = &Forest> {
        (0..=order).flat_map(move |n| self.forests(n).iter())
    }

    pub fn trees(&self, grade: usize) -> &[crate::trees::PlanarTree] {
        assert!(grade <= self.order, "grade above context order");
        &self
            .tables
            .get_or_init(|| build_tables(&self.alphabet, self.order))
            .trees[grade]
    }

    pub(crate) fn check<R: Coeff>(&self, s: &Series<R>) -> Result<()> {
        if s.order() > self.order {
            return Err(AlgebraError::ContextMismatch(format!(
                "series of order {} in a context of order {}",
                s.order(),
                self.order
            )));
        }
        for f in s.terms().map(|(f, _)| f) {
            if let Some(c) = f.colors().find(|c| !self.alphabet.contains(*c)) {
                return Err(AlgebraError::UnknownColor(format!("#{}", c.0)));
            }
        }
        Ok(())
    }

    fn check_pair<R: Coeff>(&self, u: &Series<R>, v: &Series<R>) -> Result<()> {
        check_orders(u.order(), v.order())?;
        self.check(u)?;
        self.check(v)
    }

    /// Basis-level product of two forests.
    pub fn product_basis(&self, p: Product, a: &Forest, b: &Forest) -> Terms {
        match p {
            Product::Conc => vec![(a.concat(b), Rational::one())].into(),
            Product::Shuffle => shuffle_basis(a, b),
            Product::Graft => self.graft_basis(a, b),
            Product::Gl => self.gl_basis(a, b),
        }
    }

    /// Bilinear extension of a basis product, truncated at the common order.
    pub fn mul<R: Coeff>(&self, p: Product, u: &Series<R>, v: &Series<R>) -> Result<Series<R>> {
        self.check_pair(u, v)?;
        let order = u.order();
        let mut out = Series::zero(order);
        for (fa, ca) in u.terms() {
            for (fb, cb) in v.terms() {
                if fa.grade() + fb.grade() > order {
                    continue;
                }
                let c = ca.mul_ref(cb);
                for (f, q) in self.product_basis(p, fa, fb).iter() {
                    out.add_term(f.clone(), c.scale(q));
                }
            }
        }
        Ok(out)
    }

    pub fn conc_mul<R: Coeff>(&self, u: &Series<R>, v: &Series<R>) -> Result<Series<R>> {
        self.mul(Product::Conc, u, v)
    }

    pub fn shuffle_mul<R: Coeff>(&self, u: &Series<R>, v: &Series<R>) -> Result<Series<R>> {
        self.mul(Product::Shuffle, u, v)
    }

    pub fn graft<R: Coeff>(&self, u: &Series<R>, v: &Series<R>) -> Result<Series<R>> {
        self.mul(Product::Graft, u, v)
    }

    pub fn gl_mul<R: Coeff>(&self, u: &Series<R>, v: &Series<R>) -> Result<Series<R>> {
        self.mul(Product::Gl, u, v)
    }

    /// `[x, y] = x•y − y•x`.
    pub fn bracket_conc<R: Coeff>(&self, x: &Series<R>, y: &Series<R>) -> Result<Series<R>> {
        Ok(&self.conc_mul(x, y)? - &self.conc_mul(y, x)?)
    }

    /// `⟦x, y⟧ = x▷y − y▷x + [x, y]` on primitive arguments.
    pub fn double_bracket<R: Coeff>(&self, x: &Series<R>, y: &Series<R>) -> Result<Series<R>> {
        for (name, s) in [("left argument", x), ("right argument", y)] {
            if !self.is_primitive(s)? {
                return Err(AlgebraError::NotPrimitive(name.into()));
            }
        }
        let g = &self.graft(x, y)? - &self.graft(y, x)?;
        Ok(&g + &self.bracket_conc(x, y)?)
    }

    /// Basis-level coproduct of one forest.
    pub fn coproduct_basis(&self, c: Coproduct, w: &Forest) -> TensorTerms {
        match c {
            Coproduct::Deconcat => deconcat_basis(w),
            Coproduct::Unshuffle => unshuffle_basis(w),
            Coproduct::Gl | Coproduct::Graft => self.dual_coproduct_basis(c, w),
        }
    }

    /// Linear extension of a basis coproduct.
    pub fn coproduct<R: Coeff>(&self, c: Coproduct, w: &Series<R>) -> Result<Tensor<R>> {
        self.check(w)?;
        let mut out = Tensor::zero(w.order());
        for (f, x) in w.terms() {
            for (l, r, q) in self.coproduct_basis(c, f).iter() {
                out.add_term(l.clone(), r.clone(), x.scale(q));
            }
        }
        Ok(out)
    }

    pub fn deconcat<R: Coeff>(&self, w: &Series<R>) -> Result<Tensor<R>> {
        self.coproduct(Coproduct::Deconcat, w)
    }

    pub fn unshuffle<R: Coeff>(&self, w: &Series<R>) -> Result<Tensor<R>> {
        self.coproduct(Coproduct::Unshuffle, w)
    }

    /// Primitive for the unshuffle coproduct: `Δ(x) = x⊗1 + 1⊗x`.
    pub fn is_primitive<R: Coeff>(&self, x: &Series<R>) -> Result<bool> {
        if !x.constant_term().is_zero() {
            return Ok(false);
        }
        let t = self.unshuffle(x)?;
        let one = Forest::empty();
        let mut expected = Tensor::zero(x.order());
        for (f, c) in x.terms() {
            expected.add_term(f.clone(), one.clone(), c.clone());
            expected.add_term(one.clone(), f.clone(), c.clone());
        }
        Ok(t == expected)
    }

    pub(crate) fn require_primitive<R: Coeff>(&self, x: &Series<R>, what: &str) -> Result<()> {
        if self.is_primitive(x)? {
            Ok(())
        } else {
            Err(AlgebraError::NotPrimitive(what.into()))
        }
    }

    fn graft_basis(&self, a: &Forest, b: &Forest) -> Terms {
        if a.is_empty() {
            return vec![(b.clone(), Rational::one())].into();
        }
        if b.is_empty() {
            return Vec::new().into();
        }
        let key = (a.clone(), b.clone());
        if let Some(t) = memo_get(&self.graft_memo, &key) {
            return t;
        }
        let codes = a.tree_codes();
        let result = if codes.len() == 1 {
            graft_tree(codes[0], b)
        } else {
            // (x•A)▷B = x▷(A▷B) − (x▷A)▷B
            let x = codes[0];
            let rest = Forest::from_code(&a.code()[x.len()..]);
            let mut acc = Acc::default();
            for (f, c) in self.graft_basis(&rest, b).iter() {
                for (g, d) in graft_tree(x, f).iter() {
                    acc.add(g.clone(), c * d);
                }
            }
            for (f, c) in graft_tree(x, &rest).iter() {
                for (g, d) in self.graft_basis(f, b).iter() {
                    acc.add(g.clone(), -(c * d));
                }
            }
            acc.freeze()
        };
        memo_put(&self.graft_memo, key, result)
    }

    /// `Δ_*` or `Δ_▷` of a basis forest: the transpose of the product
    /// restricted to pairs whose grades sum to the grade of `w`.
    fn dual_coproduct_basis(&self, c: Coproduct, w: &Forest) -> TensorTerms {
        let n = w.grade();
        let key = (c, n);
        let index = match memo_get(&self.coproduct_memo, &key) {
            Some(ix) => ix,
            None => {
                let p = match c {
                    Coproduct::Gl => Product::Gl,
                    _ => Product::Graft,
                };
                let mut cols: HashMap<Forest, HashMap<(Forest, Forest), Rational>> =
                    HashMap::new();
                for k in 0..=n {
                    for u in self.forests(k) {
                        for v in self.forests(n - k) {
                            for (f, q) in self.product_basis(p, u, v).iter() {
                                *cols
                                    .entry(f.clone())
                                    .or_default()
                                    .entry((u.clone(), v.clone()))
                                    .or_insert_with(Coeff::zero) += q;
                            }
                        }
                    }
                }
                let ix: HashMap<Forest, TensorTerms> = cols
                    .into_iter()
                    .map(|(f, m)| (f, freeze_tensor(m)))
                    .collect();
                memo_put(&self.coproduct_memo, key, Arc::new(ix))
            }
        };
        index.get(w).cloned().unwrap_or_else(|| Vec::new().into())
    }

    fn gl_basis(&self, a: &Forest, b: &Forest) -> Terms {
        if a.is_empty() {
            return vec![(b.clone(), Rational::one())].into();
        }
        if b.is_empty() {
            return vec![(a.clone(), Rational::one())].into();
        }
        let key = (a.clone(), b.clone());
        if let Some(t) = memo_get(&self.gl_memo, &key) {
            return t;
        }
        // A*B = Σ A(1)•(A(2)▷B) over the unshuffle of A
        let mut acc = Acc::default();
        for (l, r, q) in unshuffle_basis(a).iter() {
            for (g, d) in self.graft_basis(r, b).iter() {
                acc.add(l.concat(g), q * d);
            }
        }
        memo_put(&self.gl_memo, key, acc.freeze())
    }
}

/// `x▷B` for a single tree `x`: the sum over all vertices of `B` of `x`
/// attached there as the leftmost child.
fn graft_tree(x: &[u8], b: &Forest) -> Terms {
    let code = b.code();
    let mut acc = Acc::default();
    for i in 0..code.len() {
        if code[i] == CLOSE {
            continue;
        }
        let mut out = Code::with_capacity(code.len() + x.len());
        out.extend_from_slice(&code[..=i]);
        out.extend_from_slice(x);
        out.extend_from_slice(&code[i + 1..]);
        acc.add(Forest::from_code_vec(out), Rational::one());
    }
    acc.freeze()
}

fn shuffle_basis(a: &Forest, b: &Forest) -> Terms {
    let xs = a.tree_codes();
    let ys = b.tree_codes();
    let mut acc = Acc::default();
    let mut buf = Code::new();
    shuffle_rec(&xs, &ys, &mut buf, &mut acc);
    acc.freeze()
}

fn shuffle_rec(xs: &[&[u8]], ys: &[&[u8]], buf: &mut Code, acc: &mut Acc) {
    if xs.is_empty() || ys.is_empty() {
        let mark = buf.len();
        for t in xs.iter().chain(ys) {
            buf.extend_from_slice(t);
        }
        acc.add(Forest::from_code(buf), Rational::one());
        buf.truncate(mark);
        return;
    }
    for (first, rest_x, rest_y) in [(xs[0], &xs[1..], ys), (ys[0], xs, &ys[1..])] {
        let mark = buf.len();
        buf.extend_from_slice(first);
        shuffle_rec(rest_x, rest_y, buf, acc);
        buf.truncate(mark);
    }
}

fn freeze_tensor(map: HashMap<(Forest, Forest), Rational>) -> TensorTerms {
    let mut v: Vec<(Forest, Forest, Rational)> = map
        .into_iter()
        .filter(|(_, q)| !q.is_zero())
        .map(|((l, r), q)| (l, r, q))
        .collect();
    v.sort_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
    v.into()
}

fn deconcat_basis(w: &Forest) -> TensorTerms {
    let code = w.code();
    let mut cuts = vec![0];
    let mut pos = 0;
    for t in tree_slices(code) {
        pos += t.len();
        cuts.push(pos);
    }
    cuts.into_iter()
        .map(|c| {
            (
                Forest::from_code(&code[..c]),
                Forest::from_code(&code[c..]),
                Rational::one(),
            )
        })
        .collect::<Vec<_>>()
        .into()
}

fn unshuffle_basis(w: &Forest) -> TensorTerms {
    let trees = w.tree_codes();
    let k = trees.len();
    let mut map: HashMap<(Forest, Forest), Rational> = HashMap::new();
    for mask in 0u32..(1 << k) {
        let mut l = Code::new();
        let mut r = Code::new();
        for (i, t) in trees.iter().enumerate() {
            if mask & (1 << i) != 0 {
                l.extend_from_slice(t);
            } else {
                r.extend_from_slice(t);
            }
        }
        *map.entry((Forest::from_code_vec(l), Forest::from_code_vec(r)))
            .or_insert_with(Coeff::zero) += Rational::one();
    }
    freeze_tensor(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_forest, parse_series};

    fn ctx(order: usize) -> AlgebraContext {
        AlgebraContext::new(Alphabet::single(), order).unwrap()
    }

    fn s(text: &str, order: usize) -> Series {
        parse_series(text, &Alphabet::single(), order).unwrap()
    }

    fn show(x: &Series) -> String {
        x.display(&Alphabet::single()).to_string()
    }

    fn show_t(t: &Tensor) -> String {
        t.display(&Alphabet::single()).to_string()
    }

    #[test]
    fn concatenation() {
        let c = ctx(4);
        assert_eq!(show(&c.conc_mul(&s("a[]", 4), &s("a[]", 4)).unwrap()), "a[] a[]");
        let u = s("a[] + 1/2*a[a[]]", 4);
        assert_eq!(c.conc_mul(&Series::one(4), &u).unwrap(), u);
        let x = c.conc_mul(&s("a[]", 4), &s("a[a[]]", 4)).unwrap();
        let y = c.conc_mul(&s("a[a[]]", 4), &s("a[]", 4)).unwrap();
        assert_eq!(show(&x), "a[] a[a[]]");
        assert_ne!(x, y);
    }

    #[test]
    fn shuffles() {
        let c = ctx(4);
        assert_eq!(show(&c.shuffle_mul(&s("a[]", 4), &s("a[]", 4)).unwrap()), "2*a[] a[]");
        assert_eq!(
            show(&c.shuffle_mul(&s("a[]", 4), &s("a[] a[]", 4)).unwrap()),
            "3*a[] a[] a[]"
        );
        let u = s("a[] + a[a[]] a[]", 4);
        assert_eq!(c.shuffle_mul(&u, &Series::one(4)).unwrap(), u);
    }

    #[test]
    fn deconcatenation_and_unshuffle() {
        let c = ctx(4);
        assert_eq!(show_t(&c.deconcat(&s("a[]", 4)).unwrap()), "1 ⊗ a[] + a[] ⊗ 1");
        assert_eq!(
            show_t(&c.deconcat(&s("a[] a[a[]]", 4)).unwrap()),
            "1 ⊗ a[] a[a[]] + a[] ⊗ a[a[]] + a[] a[a[]] ⊗ 1"
        );
        assert_eq!(show_t(&c.deconcat(&Series::one(4)).unwrap()), "1 ⊗ 1");
        assert_eq!(
            show_t(&c.unshuffle(&s("a[a[] a[]]", 4)).unwrap()),
            "1 ⊗ a[a[] a[]] + a[a[] a[]] ⊗ 1"
        );
        assert_eq!(
            show_t(&c.unshuffle(&s("a[] a[]", 4)).unwrap()),
            "1 ⊗ a[] a[] + 2*a[] ⊗ a[] + a[] a[] ⊗ 1"
        );
    }

    #[test]
    fn grafting() {
        let c = ctx(4);
        assert_eq!(show(&c.graft(&s("a[]", 4), &s("a[]", 4)).unwrap()), "a[a[]]");
        assert_eq!(
            show(&c.graft(&s("a[]", 4), &s("a[a[]]", 4)).unwrap()),
            "a[a[a[]]] + a[a[] a[]]"
        );
        assert_eq!(show(&c.graft(&s("a[] a[]", 4), &s("a[]", 4)).unwrap()), "a[a[] a[]]");
        // u▷1 = ε(u)1 and 1▷v = v
        assert!(c.graft(&s("a[]", 4), &Series::one(4)).unwrap().is_zero());
        assert_eq!(
            c.graft(&s("2 + a[]", 4), &Series::one(4)).unwrap(),
            s("2", 4)
        );
        let v = s("a[] a[a[]]", 4);
        assert_eq!(c.graft(&Series::one(4), &v).unwrap(), v);
    }

    #[test]
    fn graft_is_a_derivation_for_trees_on_words() {
        let c = ctx(5);
        let x = s("a[a[]]", 5);
        let (b1, b2) = (s("a[]", 5), s("a[a[]]", 5));
        let lhs = c.graft(&x, &c.conc_mul(&b1, &b2).unwrap()).unwrap();
        let rhs = &c.conc_mul(&c.graft(&x, &b1).unwrap(), &b2).unwrap()
            + &c.conc_mul(&b1, &c.graft(&x, &b2).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn grossman_larson() {
        let c = ctx(4);
        assert_eq!(show(&c.gl_mul(&s("a[]", 4), &s("a[]", 4)).unwrap()), "a[] a[] + a[a[]]");
        assert_eq!(
            show(&c.gl_mul(&s("a[]", 4), &s("a[a[]]", 4)).unwrap()),
            "a[] a[a[]] + a[a[a[]]] + a[a[] a[]]"
        );
        let u = s("a[] - 3*a[a[]] a[]", 4);
        assert_eq!(c.gl_mul(&u, &Series::one(4)).unwrap(), u);
        assert_eq!(c.gl_mul(&Series::one(4), &u).unwrap(), u);
    }

    #[test]
    fn brackets() {
        let c = ctx(4);
        let x = s("a[] + a[a[]]", 4);
        assert!(c.bracket_conc(&x, &x).unwrap().is_zero());
        assert_eq!(
            show(&c.bracket_conc(&s("a[]", 4), &s("a[a[]]", 4)).unwrap()),
            "a[] a[a[]] - a[a[]] a[]"
        );
        assert!(c.double_bracket(&x, &x).unwrap().is_zero());
        assert!(c.double_bracket(&s("a[]", 4), &s("a[]", 4)).unwrap().is_zero());
        let d = c.double_bracket(&s("a[]", 4), &s("a[a[]]", 4)).unwrap();
        // a▷a[a] − a[a]▷a + [a, a[a]]
        assert_eq!(show(&d), "a[] a[a[]] - a[a[]] a[] + a[a[] a[]]");
        assert!(c.is_primitive(&d).unwrap());
        assert!(matches!(
            c.double_bracket(&s("a[] a[]", 4), &s("a[]", 4)),
            Err(AlgebraError::NotPrimitive(_))
        ));
    }

    #[test]
    fn jacobi_for_concatenation_bracket() {
        let c = ctx(6);
        let (x, y, z) = (s("a[]", 6), s("a[a[]]", 6), s("a[a[] a[]]", 6));
        let j = |p: &Series, q: &Series, r: &Series| {
            c.bracket_conc(p, &c.bracket_conc(q, r).unwrap()).unwrap()
        };
        let total = &(&j(&x, &y, &z) + &j(&y, &z, &x)) + &j(&z, &x, &y);
        assert!(total.is_zero());
    }

    #[test]
    fn order_mismatch_is_an_error() {
        let c = ctx(4);
        assert_eq!(
            c.conc_mul(&s("a[]", 3), &s("a[]", 4)),
            Err(AlgebraError::OrderMismatch { left: 3, right: 4 })
        );
        assert!(matches!(
            c.conc_mul(&Series::<Rational>::one(5), &Series::one(5)),
            Err(AlgebraError::ContextMismatch(_))
        ));
    }

    #[test]
    fn truncation() {
        let c = ctx(4);
        let x = c.conc_mul(&s("a[] a[]", 3), &s("a[a[]]", 3)).unwrap();
        assert!(x.is_zero());
        let one = parse_forest("1", &Alphabet::single()).unwrap();
        assert_eq!(c.coproduct_basis(Coproduct::Unshuffle, &one).len(), 1);
    }
}
