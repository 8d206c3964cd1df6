//! The free pre-Lie side: forests of non-planar trees with the commutative
//! product, grafting and the Grossman–Larson product, plus the scalar ODE
//! evaluation of trees as elementary differentials.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Sub};

use crate::coeff::{format_rational, inv_factorial, parse_rational, Coeff, Rational};
use crate::error::{AlgebraError, Result};
use crate::series::{check_orders, Series};
use crate::trees::{abelianize, canonical_tree_code, Alphabet, Forest, NonPlanarTree, CLOSE};

/// A monomial of the symmetric algebra on non-planar trees: a sorted
/// multiset of trees.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NonPlanarForest {
    trees: Vec<NonPlanarTree>,
}

impl NonPlanarForest {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_trees(mut trees: Vec<NonPlanarTree>) -> Self {
        trees.sort();
        NonPlanarForest { trees }
    }

    pub fn trees(&self) -> &[NonPlanarTree] {
        &self.trees
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }

    pub fn len(&self) -> usize {
        self.trees.len()
    }

    pub fn grade(&self) -> usize {
        self.trees.iter().map(NonPlanarTree::grade).sum()
    }

    /// The commutative product: union of multisets.
    pub fn union(&self, other: &NonPlanarForest) -> NonPlanarForest {
        let mut trees = self.trees.clone();
        trees.extend(other.trees.iter().cloned());
        Self::from_trees(trees)
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> impl fmt::Display + 'a {
        DisplayForest {
            forest: self,
            alphabet,
        }
    }
}

struct DisplayForest<'a> {
    forest: &'a NonPlanarForest,
    alphabet: &'a Alphabet,
}

impl fmt::Display for DisplayForest<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.forest.is_empty() {
            return write!(f, "1");
        }
        for (i, t) in self.forest.trees.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", t.display(self.alphabet))?;
        }
        Ok(())
    }
}

/// A truncated series in the symmetric algebra on non-planar trees.
#[derive(Clone, Debug, PartialEq)]
pub struct PreLieSeries {
    order: usize,
    terms: HashMap<NonPlanarForest, Rational>,
}

impl PreLieSeries {
    pub fn zero(order: usize) -> Self {
        PreLieSeries {
            order,
            terms: HashMap::new(),
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.add_term(NonPlanarForest::empty(), Rational::one());
        s
    }

    pub fn monomial(f: NonPlanarForest, q: Rational, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.add_term(f, q);
        s
    }

    pub fn tree(t: NonPlanarTree, order: usize) -> Self {
        Self::monomial(NonPlanarForest::from_trees(vec![t]), Rational::one(), order)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, f: &NonPlanarForest) -> Rational {
        self.terms.get(f).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&NonPlanarForest, &Rational)> {
        self.terms.iter()
    }

    /// Terms in canonical order: grade, then tree-wise.
    pub fn sorted_terms(&self) -> Vec<(&NonPlanarForest, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| (a.0.grade(), a.0).cmp(&(b.0.grade(), b.0)));
        v
    }

    /// Terms above the order are dropped.
    pub fn add_term(&mut self, f: NonPlanarForest, q: Rational) {
        if q.is_zero() || f.grade() > self.order {
            return;
        }
        let slot = self.terms.entry(f.clone()).or_insert_with(Rational::zero);
        *slot += q;
        if slot.is_zero() {
            self.terms.remove(&f);
        }
    }

    pub fn add_scaled(&mut self, other: &PreLieSeries, q: &Rational) {
        for (f, c) in &other.terms {
            self.add_term(f.clone(), c * q);
        }
    }

    pub fn scale(&self, q: &Rational) -> PreLieSeries {
        let mut out = Self::zero(self.order);
        out.add_scaled(self, q);
        out
    }

    pub fn homogeneous(&self, n: usize) -> PreLieSeries {
        let mut out = Self::zero(self.order);
        for (f, c) in &self.terms {
            if f.grade() == n {
                out.add_term(f.clone(), c.clone());
            }
        }
        out
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> impl fmt::Display + 'a {
        DisplaySeries {
            series: self,
            alphabet,
        }
    }
}

struct DisplaySeries<'a> {
    series: &'a PreLieSeries,
    alphabet: &'a Alphabet,
}

impl fmt::Display for DisplaySeries<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.series.sorted_terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (forest, q)) in terms.into_iter().enumerate() {
            let negative = *q < Rational::zero();
            let abs = if negative { -q.clone() } else { q.clone() };
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if forest.is_empty() {
                write!(f, "{}", format_rational(&abs))?;
            } else if abs == Rational::one() {
                write!(f, "{}", forest.display(self.alphabet))?;
            } else {
                write!(f, "{}*{}", format_rational(&abs), forest.display(self.alphabet))?;
            }
        }
        Ok(())
    }
}

impl Add for &PreLieSeries {
    type Output = PreLieSeries;

    fn add(self, rhs: &PreLieSeries) -> PreLieSeries {
        check_orders(self.order, rhs.order).expect("order mismatch");
        let mut out = self.clone();
        out.add_scaled(rhs, &Rational::one());
        out
    }
}

impl Sub for &PreLieSeries {
    type Output = PreLieSeries;

    fn sub(self, rhs: &PreLieSeries) -> PreLieSeries {
        check_orders(self.order, rhs.order).expect("order mismatch");
        let mut out = self.clone();
        out.add_scaled(rhs, &-Rational::one());
        out
    }
}

/// The algebra map forgetting the order of words and of siblings.
pub fn project_abelian(u: &Series) -> PreLieSeries {
    let mut out = PreLieSeries::zero(u.order());
    for (f, q) in u.terms() {
        out.add_term(project_forest(f), q.clone());
    }
    out
}

pub fn project_forest(f: &Forest) -> NonPlanarForest {
    NonPlanarForest::from_trees(f.trees().map(|t| abelianize(&t)).collect())
}

/// A tree with mutable children, used to attach grafted trees.
#[derive(Clone)]
struct Node {
    color: u8,
    kids: Vec<Node>,
}

impl Node {
    fn from_code(code: &[u8]) -> Node {
        let mut pos = 0;
        Node::read(code, &mut pos)
    }

    fn read(code: &[u8], pos: &mut usize) -> Node {
        let color = code[*pos];
        *pos += 1;
        let mut kids = Vec::new();
        while code[*pos] != CLOSE {
            kids.push(Node::read(code, pos));
        }
        *pos += 1;
        Node { color, kids }
    }

    fn write(&self, out: &mut Vec<u8>) {
        out.push(self.color);
        for k in &self.kids {
            k.write(out);
        }
        out.push(CLOSE);
    }

    fn vertices(&self) -> usize {
        1 + self.kids.iter().map(Node::vertices).sum::<usize>()
    }

    /// Attaches `t` below the vertex with preorder index `target`.
    fn attach(&mut self, target: usize, t: Node) -> std::result::Result<(), (usize, Node)> {
        if target == 0 {
            self.kids.push(t);
            return Ok(());
        }
        let (mut target, mut t) = (target - 1, t);
        for k in self.kids.iter_mut() {
            match k.attach(target, t) {
                Ok(()) => return Ok(()),
                Err((rest, back)) => {
                    target = rest;
                    t = back;
                }
            }
        }
        Err((target, t))
    }

    fn canonical(&self) -> NonPlanarTree {
        let mut code = Vec::new();
        self.write(&mut code);
        NonPlanarTree::from_canonical_code(&canonical_tree_code(&code))
    }
}

/// `A ▷ B` on monomials: every way of attaching each tree of `A` to a
/// vertex of `B`; `A ▷ 1 = ε(A)`.
pub fn graft_monomial(a: &NonPlanarForest, b: &NonPlanarForest) -> Vec<NonPlanarForest> {
    if a.is_empty() {
        return vec![b.clone()];
    }
    if b.is_empty() {
        return Vec::new();
    }
    let base: Vec<Node> = b.trees.iter().map(|t| Node::from_code(t.code())).collect();
    let sizes: Vec<usize> = base.iter().map(Node::vertices).collect();
    let total: usize = sizes.iter().sum();
    let moving: Vec<Node> = a.trees.iter().map(|t| Node::from_code(t.code())).collect();
    let mut out = Vec::new();
    let mut choice = vec![0usize; moving.len()];
    loop {
        let mut trees = base.clone();
        for (m, &v) in moving.iter().zip(&choice) {
            let (mut tree, mut local) = (0, v);
            while local >= sizes[tree] {
                local -= sizes[tree];
                tree += 1;
            }
            trees[tree]
                .attach(local, m.clone())
                .unwrap_or_else(|_| unreachable!("vertex index within tree"));
        }
        out.push(NonPlanarForest::from_trees(
            trees.iter().map(Node::canonical).collect(),
        ));
        let Some(i) = choice.iter().rposition(|&c| c + 1 < total) else {
            break;
        };
        choice[i] += 1;
        for c in &mut choice[i + 1..] {
            *c = 0;
        }
    }
    out
}

fn bilinear(
    u: &PreLieSeries,
    v: &PreLieSeries,
    mut basis: impl FnMut(&NonPlanarForest, &NonPlanarForest) -> Vec<(NonPlanarForest, Rational)>,
) -> Result<PreLieSeries> {
    check_orders(u.order, v.order)?;
    let mut out = PreLieSeries::zero(u.order);
    for (a, p) in &u.terms {
        for (b, q) in &v.terms {
            if a.grade() + b.grade() > u.order {
                continue;
            }
            let pq = p * q;
            for (f, r) in basis(a, b) {
                out.add_term(f, &pq * r);
            }
        }
    }
    Ok(out)
}

/// The commutative product.
pub fn sym_mul(u: &PreLieSeries, v: &PreLieSeries) -> Result<PreLieSeries> {
    bilinear(u, v, |a, b| vec![(a.union(b), Rational::one())])
}

pub fn prelie_graft(u: &PreLieSeries, v: &PreLieSeries) -> Result<PreLieSeries> {
    bilinear(u, v, |a, b| {
        graft_monomial(a, b)
            .into_iter()
            .map(|f| (f, Rational::one()))
            .collect()
    })
}

/// `A * B = Σ A₁ (A₂ ▷ B)` over the splittings of `A` into two
/// sub-multisets, counted by positions.
pub fn prelie_gl(u: &PreLieSeries, v: &PreLieSeries) -> Result<PreLieSeries> {
    bilinear(u, v, |a, b| {
        let k = a.len();
        let mut out = Vec::new();
        for mask in 0..1usize << k {
            let (mut left, mut right) = (Vec::new(), Vec::new());
            for (i, t) in a.trees.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    right.push(t.clone());
                } else {
                    left.push(t.clone());
                }
            }
            let left = NonPlanarForest::from_trees(left);
            for g in graft_monomial(&NonPlanarForest::from_trees(right), b) {
                out.push((left.union(&g), Rational::one()));
            }
        }
        out
    })
}

/// `Σ x^k / k!` for the commutative product.
pub fn exp_sym(x: &PreLieSeries) -> Result<PreLieSeries> {
    if !x.coeff(&NonPlanarForest::empty()).is_zero() {
        return Err(AlgebraError::Precondition("exp_sym needs zero constant term".into()));
    }
    let mut out = PreLieSeries::one(x.order);
    let mut power = PreLieSeries::one(x.order);
    for k in 1..=x.order {
        power = sym_mul(&power, x)?;
        if power.is_zero() {
            break;
        }
        out.add_scaled(&power, &inv_factorial(k));
    }
    Ok(out)
}

fn require_trees(x: &PreLieSeries, what: &str) -> Result<()> {
    if x.terms.keys().any(|f| f.len() != 1) {
        return Err(AlgebraError::NotPrimitive(format!(
            "{what} must be a combination of single trees"
        )));
    }
    Ok(())
}

/// The pre-Lie composition `x ♯ y = x + exp(x) ▷ y` on combinations of trees.
pub fn prelie_sharp(x: &PreLieSeries, y: &PreLieSeries) -> Result<PreLieSeries> {
    require_trees(x, "left argument")?;
    require_trees(y, "right argument")?;
    let moved = prelie_graft(&exp_sym(x)?, y)?;
    Ok(x + &moved)
}

/// Substitution by `c ↦ images[c]` (combinations of trees): multiplicative,
/// and `B+^c(ω) ↦ (ā★ω) ▷ images[c]`.
pub fn prelie_substitute(images: &[PreLieSeries], u: &PreLieSeries) -> Result<PreLieSeries> {
    for img in images {
        check_orders(img.order, u.order)?;
        require_trees(img, "image")?;
    }
    let order = u.order;
    let mut memo: HashMap<NonPlanarTree, PreLieSeries> = HashMap::new();
    fn tree(
        t: &NonPlanarTree,
        images: &[PreLieSeries],
        order: usize,
        memo: &mut HashMap<NonPlanarTree, PreLieSeries>,
    ) -> Result<PreLieSeries> {
        if let Some(s) = memo.get(t) {
            return Ok(s.clone());
        }
        let node = Node::from_code(t.code());
        let mut inner = PreLieSeries::one(order);
        for k in &node.kids {
            let img = tree(&k.canonical(), images, order, memo)?;
            inner = sym_mul(&inner, &img)?;
        }
        let out = prelie_graft(&inner, &images[node.color as usize])?;
        memo.insert(t.clone(), out.clone());
        Ok(out)
    }
    let mut out = PreLieSeries::zero(order);
    for (f, q) in &u.terms {
        let mut acc = PreLieSeries::one(order);
        for t in &f.trees {
            let img = tree(t, images, order, &mut memo)?;
            acc = sym_mul(&acc, &img)?;
        }
        out.add_scaled(&acc, q);
    }
    Ok(out)
}

/// A polynomial in one variable `y` with rational coefficients, stored
/// densely by ascending degree.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ScalarPolynomial {
    coeffs: Vec<Rational>,
}

impl ScalarPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(q: Rational) -> Self {
        Self::from_coeffs(vec![q])
    }

    /// The polynomial `y`.
    pub fn y() -> Self {
        Self::from_coeffs(vec![Rational::zero(), Rational::one()])
    }

    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        ScalarPolynomial { coeffs }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coefficient(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::from_coeffs((0..n).map(|k| self.coefficient(k) + other.coefficient(k)).collect())
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|c| c * q).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::from_coeffs(out)
    }

    pub fn derivative(&self) -> Self {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rational::from_integer(k.into()))
                .collect(),
        )
    }

    /// The `k`-th derivative.
    pub fn derivative_n(&self, k: usize) -> Self {
        (0..k).fold(self.clone(), |p, _| p.derivative())
    }

    pub fn evaluate(&self, y: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * y + c)
    }

    /// Reads sums of terms `q`, `q*y`, `q*y^k`, `y^k`, e.g. `y^2 + 1`.
    pub fn parse(text: &str) -> Result<Self> {
        let err = |column: usize, message: &str| AlgebraError::Syntax {
            line: 1,
            column,
            message: message.to_string(),
        };
        let chars: Vec<char> = text.chars().collect();
        let mut pos = 0;
        let skip = |pos: &mut usize| {
            while *pos < chars.len() && chars[*pos].is_whitespace() {
                *pos += 1;
            }
        };
        let mut out = Self::zero();
        let mut first = true;
        loop {
            skip(&mut pos);
            let mut sign = Rational::one();
            if pos < chars.len() && (chars[pos] == '+' || chars[pos] == '-') {
                if chars[pos] == '-' {
                    sign = -sign;
                } else if first {
                    return Err(err(pos + 1, "unexpected `+`"));
                }
                pos += 1;
                skip(&mut pos);
            } else if !first {
                return Err(err(pos + 1, "expected `+` or `-`"));
            }
            first = false;
            let start = pos;
            while pos < chars.len() && (chars[pos].is_ascii_digit() || chars[pos] == '/') {
                pos += 1;
            }
            let mut coeff = Rational::one();
            let has_number = pos > start;
            if has_number {
                let s: String = chars[start..pos].iter().collect();
                coeff = parse_rational(&s).ok_or_else(|| err(start + 1, "invalid number"))?;
                skip(&mut pos);
            }
            let mut degree = 0;
            let mut star = false;
            if has_number && pos < chars.len() && chars[pos] == '*' {
                star = true;
                pos += 1;
                skip(&mut pos);
            }
            if pos < chars.len() && chars[pos] == 'y' {
                pos += 1;
                degree = 1;
                skip(&mut pos);
                if pos < chars.len() && chars[pos] == '^' {
                    pos += 1;
                    skip(&mut pos);
                    let s = pos;
                    while pos < chars.len() && chars[pos].is_ascii_digit() {
                        pos += 1;
                    }
                    let digits: String = chars[s..pos].iter().collect();
                    degree = digits.parse().map_err(|_| err(s + 1, "expected exponent"))?;
                }
            } else if star || !has_number {
                return Err(err(pos + 1, "expected `y` or a number"));
            }
            let mut c = vec![Rational::zero(); degree + 1];
            c[degree] = sign * coeff;
            out = out.add(&Self::from_coeffs(c));
            skip(&mut pos);
            if pos == chars.len() {
                return Ok(out);
            }
        }
    }
}

impl fmt::Display for ScalarPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let negative = *c < Rational::zero();
            let abs = if negative { -c.clone() } else { c.clone() };
            match (first, negative) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            first = false;
            let var = match k {
                0 => String::new(),
                1 => "y".to_string(),
                _ => format!("y^{k}"),
            };
            if var.is_empty() {
                write!(f, "{}", format_rational(&abs))?;
            } else if abs == Rational::one() {
                write!(f, "{var}")?;
            } else {
                write!(f, "{}*{var}", format_rational(&abs))?;
            }
        }
        Ok(())
    }
}

/// The elementary differential `F(t)` of a tree for the scalar field `f`:
/// `F(B+(t₁…t_k)) = f⁽ᵏ⁾ · Π F(tᵢ)`. Colors are ignored.
pub fn elementary_differential(t: &NonPlanarTree, f: &ScalarPolynomial) -> ScalarPolynomial {
    fn go(n: &Node, f: &ScalarPolynomial) -> ScalarPolynomial {
        n.kids
            .iter()
            .fold(f.derivative_n(n.kids.len()), |acc, k| acc.mul(&go(k, f)))
    }
    go(&Node::from_code(t.code()), f)
}

/// Evaluates `u` as a differential operator on the observable `φ` along
/// the field `h·f`: a multiset of `k` trees gives `h^{grade} φ⁽ᵏ⁾ Π F(tᵢ)`.
/// Entry `n` of the result is the coefficient of `h^n`.
pub fn elementary_differential_eval(
    u: &PreLieSeries,
    f: &ScalarPolynomial,
    phi: &ScalarPolynomial,
) -> Vec<ScalarPolynomial> {
    let mut out = vec![ScalarPolynomial::zero(); u.order + 1];
    let mut cache: HashMap<NonPlanarTree, ScalarPolynomial> = HashMap::new();
    for (forest, q) in u.terms() {
        let mut p = phi.derivative_n(forest.len());
        for t in forest.trees() {
            let e = cache
                .entry(t.clone())
                .or_insert_with(|| elementary_differential(t, f));
            p = p.mul(e);
        }
        let n = forest.grade();
        out[n] = out[n].add(&p.scale(q));
    }
    out
}

/// Taylor coefficients `y_n = Dⁿ(y)/n!` of the exact solution of `y' = f(y)`
/// as polynomials in the initial value, where `Dg = f g'`; `n = 0..=order`.
pub fn exact_flow_taylor(f: &ScalarPolynomial, order: usize) -> Vec<ScalarPolynomial> {
    let mut out = Vec::with_capacity(order + 1);
    let mut d = ScalarPolynomial::y();
    for n in 0..=order {
        out.push(d.scale(&inv_factorial(n)));
        d = f.mul(&d.derivative());
    }
    out
}
