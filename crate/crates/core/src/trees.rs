//! Colored planar rooted trees, forests of them, and their non-planar
//! quotients.
//!
//! A forest is stored as a flat token string: every vertex contributes
//! its color index when it opens and [`CLOSE`] when its subtree ends.
//! A tree is a forest with exactly one top-level tree. With this layout
//! concatenation of forests is concatenation of codes, and grafting a
//! tree onto a vertex as its leftmost child is an insertion right after
//! that vertex's opening token.

use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

use crate::error::{AlgebraError, Result};

/// Token closing a vertex. Color tokens are always smaller.
pub const CLOSE: u8 = u8::MAX;

/// Default cap on truncation orders, overridable through `LBK_MAX_ORDER`.
pub const DEFAULT_MAX_ORDER: usize = 8;

pub const MAX_ORDER_ENV: &str = "LBK_MAX_ORDER";

pub(crate) type Code = SmallVec<[u8; 16]>;

/// The configured maximum truncation order.
pub fn max_order() -> usize {
    std::env::var(MAX_ORDER_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|n| *n > 0)
        .unwrap_or(DEFAULT_MAX_ORDER)
}

pub(crate) fn check_capacity(order: usize) -> Result<()> {
    let max = max_order();
    if order > max {
        return Err(AlgebraError::Capacity {
            requested: order,
            max,
        });
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Color(pub u8);

/// A finite ordered set of colors. The order is the declaration order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    names: Vec<String>,
}

impl Alphabet {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(AlgebraError::InvalidAlphabet("no colors".into()));
        }
        if names.len() >= CLOSE as usize {
            return Err(AlgebraError::InvalidAlphabet("too many colors".into()));
        }
        for (i, name) in names.iter().enumerate() {
            let mut chars = name.chars();
            let ok = matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
                && chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !ok {
                return Err(AlgebraError::InvalidAlphabet(format!(
                    "`{name}` is not an identifier"
                )));
            }
            if names[..i].contains(name) {
                return Err(AlgebraError::InvalidAlphabet(format!(
                    "`{name}` declared twice"
                )));
            }
        }
        Ok(Alphabet { names })
    }

    /// The one-color alphabet `{a}`.
    pub fn single() -> Self {
        Alphabet {
            names: vec!["a".to_string()],
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, c: Color) -> &str {
        &self.names[c.0 as usize]
    }

    pub fn lookup(&self, name: &str) -> Option<Color> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| Color(i as u8))
    }

    pub fn colors(&self) -> impl Iterator<Item = Color> + '_ {
        (0..self.names.len()).map(|i| Color(i as u8))
    }

    pub fn contains(&self, c: Color) -> bool {
        (c.0 as usize) < self.names.len()
    }
}

/// Splits a forest code into the codes of its top-level trees.
pub(crate) fn tree_slices(code: &[u8]) -> TreeSlices<'_> {
    TreeSlices { code, pos: 0 }
}

pub(crate) struct TreeSlices<'a> {
    code: &'a [u8],
    pos: usize,
}

impl<'a> Iterator for TreeSlices<'a> {
    type Item = &'a [u8];

    fn next(&mut self) -> Option<&'a [u8]> {
        if self.pos >= self.code.len() {
            return None;
        }
        let start = self.pos;
        let mut depth = 0usize;
        for (i, &b) in self.code[start..].iter().enumerate() {
            if b == CLOSE {
                depth -= 1;
                if depth == 0 {
                    self.pos = start + i + 1;
                    return Some(&self.code[start..self.pos]);
                }
            } else {
                depth += 1;
            }
        }
        unreachable!("unbalanced forest code")
    }
}

fn code_grade(code: &[u8]) -> usize {
    code.iter().filter(|&&b| b != CLOSE).count()
}

/// Token order on single trees: color tokens before closings, colors by
/// declaration order.
fn cmp_tree_codes(a: &[u8], b: &[u8]) -> Ordering {
    code_grade(a).cmp(&code_grade(b)).then_with(|| a.cmp(b))
}

/// A colored planar rooted tree.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PlanarTree {
    code: Code,
}

impl PlanarTree {
    pub fn leaf(c: Color) -> Self {
        let mut code = Code::new();
        code.push(c.0);
        code.push(CLOSE);
        PlanarTree { code }
    }

    /// `B+^c`: attaches the trees of `children` to a new root of color `c`.
    pub fn new(c: Color, children: &Forest) -> Self {
        let mut code = Code::with_capacity(children.code.len() + 2);
        code.push(c.0);
        code.extend_from_slice(&children.code);
        code.push(CLOSE);
        PlanarTree { code }
    }

    pub(crate) fn from_code(code: &[u8]) -> Self {
        debug_assert_eq!(tree_slices(code).count(), 1);
        PlanarTree {
            code: Code::from_slice(code),
        }
    }

    pub fn code(&self) -> &[u8] {
        &self.code
    }

    pub fn root(&self) -> Color {
        Color(self.code[0])
    }

    pub fn children(&self) -> Forest {
        Forest {
            code: Code::from_slice(&self.code[1..self.code.len() - 1]),
        }
    }

    pub fn grade(&self) -> usize {
        self.code.len() / 2
    }

    pub fn as_forest(&self) -> Forest {
        Forest {
            code: self.code.clone(),
        }
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> impl fmt::Display + 'a {
        CodeDisplay {
            code: &self.code,
            alphabet,
        }
    }
}

impl Ord for PlanarTree {
    fn cmp(&self, other: &Self) -> Ordering {
        cmp_tree_codes(&self.code, &other.code)
    }
}

impl PartialOrd for PlanarTree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for PlanarTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PlanarTree({:?})", self.code.as_slice())
    }
}

/// A word of planar trees: the monomial basis of the tensor algebra.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Forest {
    code: Code,
}

impl Forest {
    pub fn empty() -> Self {
        Forest::default()
    }

    pub(crate) fn from_code(code: &[u8]) -> Self {
        Forest {
            code: Code::from_slice(code),
        }
    }

    pub(crate) fn from_code_vec(code: Code) -> Self {
        Forest { code }
    }

    pub fn from_trees<'a, I>(trees: I) -> Self
    where
        I: IntoIterator<Item = &'a PlanarTree>,
    {
        let mut code = Code::new();
        for t in trees {
            code.extend_from_slice(&t.code);
        }
        Forest { code }
    }

    pub fn code(&self) -> &[u8] {
        &self.code
    }

    pub fn is_empty(&self) -> bool {
        self.code.is_empty()
    }

    /// Number of vertices.
    pub fn grade(&self) -> usize {
        self.code.len() / 2
    }

    /// Number of trees in the word.
    pub fn len(&self) -> usize {
        tree_slices(&self.code).count()
    }

    pub fn trees(&self) -> impl Iterator<Item = PlanarTree> + '_ {
        tree_slices(&self.code).map(PlanarTree::from_code)
    }

    pub(crate) fn tree_codes(&self) -> Vec<&[u8]> {
        tree_slices(&self.code).collect()
    }

    pub fn as_tree(&self) -> Option<PlanarTree> {
        let mut it = tree_slices(&self.code);
        match (it.next(), it.next()) {
            (Some(t), None) => Some(PlanarTree::from_code(t)),
            _ => None,
        }
    }

    pub fn concat(&self, other: &Forest) -> Forest {
        let mut code = Code::with_capacity(self.code.len() + other.code.len());
        code.extend_from_slice(&self.code);
        code.extend_from_slice(&other.code);
        Forest { code }
    }

    /// Colors occurring anywhere in the forest.
    pub fn colors(&self) -> impl Iterator<Item = Color> + '_ {
        self.code.iter().filter(|&&b| b != CLOSE).map(|&b| Color(b))
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> impl fmt::Display + 'a {
        CodeDisplay {
            code: &self.code,
            alphabet,
        }
    }
}

impl From<PlanarTree> for Forest {
    fn from(t: PlanarTree) -> Self {
        Forest { code: t.code }
    }
}

/// Total grade, then tree by tree (grade, then token string).
impl Ord for Forest {
    fn cmp(&self, other: &Self) -> Ordering {
        self.grade().cmp(&other.grade()).then_with(|| {
            let mut a = tree_slices(&self.code);
            let mut b = tree_slices(&other.code);
            loop {
                match (a.next(), b.next()) {
                    (None, None) => return Ordering::Equal,
                    (None, Some(_)) => return Ordering::Less,
                    (Some(_), None) => return Ordering::Greater,
                    (Some(x), Some(y)) => match cmp_tree_codes(x, y) {
                        Ordering::Equal => continue,
                        o => return o,
                    },
                }
            }
        })
    }
}

impl PartialOrd for Forest {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Forest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Forest({:?})", self.code.as_slice())
    }
}

struct CodeDisplay<'a> {
    code: &'a [u8],
    alphabet: &'a Alphabet,
}

impl fmt::Display for CodeDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.code.is_empty() {
            return write!(f, "1");
        }
        let mut prev_closed = false;
        for &b in self.code {
            if b == CLOSE {
                write!(f, "]")?;
                prev_closed = true;
            } else {
                if prev_closed {
                    write!(f, " ")?;
                }
                write!(f, "{}[", self.alphabet.name(Color(b)))?;
                prev_closed = false;
            }
        }
        Ok(())
    }
}

/// A colored rooted tree without sibling order, stored with children in
/// canonical order (grade, then token string).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NonPlanarTree {
    code: Code,
}

impl NonPlanarTree {
    pub fn code(&self) -> &[u8] {
        &self.code
    }

    pub fn grade(&self) -> usize {
        self.code.len() / 2
    }

    pub fn root(&self) -> Color {
        Color(self.code[0])
    }

    /// The canonical planar representative.
    pub fn to_planar(&self) -> PlanarTree {
        PlanarTree::from_code(&self.code)
    }

    pub(crate) fn from_canonical_code(code: &[u8]) -> Self {
        NonPlanarTree {
            code: Code::from_slice(code),
        }
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> impl fmt::Display + 'a {
        CodeDisplay {
            code: &self.code,
            alphabet,
        }
    }
}

impl Ord for NonPlanarTree {
    fn cmp(&self, other: &Self) -> Ordering {
        cmp_tree_codes(&self.code, &other.code)
    }
}

impl PartialOrd for NonPlanarTree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for NonPlanarTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NonPlanarTree({:?})", self.code.as_slice())
    }
}

/// Canonical code of the tree whose (arbitrarily ordered) code is given.
pub(crate) fn canonical_tree_code(code: &[u8]) -> Code {
    let inner = &code[1..code.len() - 1];
    let mut kids: Vec<Code> = tree_slices(inner).map(canonical_tree_code).collect();
    kids.sort_by(|a, b| cmp_tree_codes(a, b));
    let mut out = Code::with_capacity(code.len());
    out.push(code[0]);
    for k in &kids {
        out.extend_from_slice(k);
    }
    out.push(CLOSE);
    out
}

/// Forgets sibling order.
pub fn abelianize(t: &PlanarTree) -> NonPlanarTree {
    NonPlanarTree {
        code: canonical_tree_code(&t.code),
    }
}

/// Per-grade tables of planar trees and forests, built bottom-up.
pub(crate) struct Tables {
    pub trees: Vec<Vec<PlanarTree>>,
    pub forests: Vec<Vec<Forest>>,
}

pub(crate) fn build_tables(alphabet: &Alphabet, max_grade: usize) -> Tables {
    let mut trees: Vec<Vec<PlanarTree>> = vec![Vec::new()];
    let mut forests: Vec<Vec<Forest>> = vec![vec![Forest::empty()]];
    for n in 1..=max_grade {
        let mut tn: Vec<PlanarTree> = alphabet
            .colors()
            .flat_map(|c| forests[n - 1].iter().map(move |ch| PlanarTree::new(c, ch)))
            .collect();
        tn.sort();
        trees.push(tn);
        let mut fs = Vec::new();
        for k in 1..=n {
            for t in &trees[k] {
                for rest in &forests[n - k] {
                    fs.push(t.as_forest().concat(rest));
                }
            }
        }
        fs.sort();
        forests.push(fs);
    }
    Tables { trees, forests }
}

/// Every forest of exactly `grade` vertices, each once, in canonical order.
pub fn enumerate_forests(alphabet: &Alphabet, grade: usize) -> Result<Vec<Forest>> {
    check_capacity(grade)?;
    Ok(build_tables(alphabet, grade).forests.swap_remove(grade))
}

/// Every planar tree of exactly `grade` vertices, in canonical order.
pub fn enumerate_trees(alphabet: &Alphabet, grade: usize) -> Result<Vec<PlanarTree>> {
    check_capacity(grade)?;
    Ok(build_tables(alphabet, grade).trees.swap_remove(grade))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(alphabet: &Alphabet, fs: &[Forest]) -> Vec<String> {
        fs.iter().map(|f| f.display(alphabet).to_string()).collect()
    }

    #[test]
    fn grade_zero_is_the_empty_forest() {
        let a = Alphabet::single();
        let fs = enumerate_forests(&a, 0).unwrap();
        assert_eq!(fs, vec![Forest::empty()]);
        assert_eq!(fs[0].display(&a).to_string(), "1");
    }

    #[test]
    fn grade_three_in_canonical_order() {
        let a = Alphabet::single();
        let fs = enumerate_forests(&a, 3).unwrap();
        assert_eq!(
            names(&a, &fs),
            ["a[] a[] a[]", "a[] a[a[]]", "a[a[]] a[]", "a[a[a[]]]", "a[a[] a[]]"]
        );
    }

    #[test]
    fn catalan_counts() {
        let a = Alphabet::single();
        let tables = build_tables(&a, 8);
        let counts: Vec<usize> = (1..=8).map(|n| tables.forests[n].len()).collect();
        assert_eq!(counts, [1, 2, 5, 14, 42, 132, 429, 1430]);
        // recurrence C_{n+1} = sum C_k C_{n-k}
        let mut catalan = vec![1usize];
        for n in 0..8 {
            catalan.push((0..=n).map(|k| catalan[k] * catalan[n - k]).sum());
        }
        for n in 1..=8 {
            assert_eq!(tables.forests[n].len(), catalan[n]);
            assert_eq!(tables.trees[n].len(), catalan[n - 1]);
        }
    }

    #[test]
    fn colored_counts_scale_by_color_powers() {
        let a = Alphabet::new(["a", "b"]).unwrap();
        let tables = build_tables(&a, 4);
        assert_eq!(tables.forests[3].len(), 8 * 5);
        assert_eq!(tables.trees[4].len(), 16 * 5);
    }

    #[test]
    fn capacity_is_enforced() {
        let a = Alphabet::single();
        assert!(matches!(
            enumerate_forests(&a, max_order() + 1),
            Err(AlgebraError::Capacity { .. })
        ));
    }

    #[test]
    fn abelianized_tree_counts() {
        let a = Alphabet::single();
        let tables = build_tables(&a, 8);
        let counts: Vec<usize> = (1..=8)
            .map(|n| {
                let set: std::collections::HashSet<_> =
                    tables.trees[n].iter().map(abelianize).collect();
                set.len()
            })
            .collect();
        assert_eq!(counts, [1, 1, 2, 4, 9, 20, 48, 115]);
    }

    /// Reads the balanced-word notation where `a` opens and `b` closes a vertex.
    fn from_ab(word: &str) -> PlanarTree {
        let code: Code = word
            .chars()
            .map(|ch| if ch == 'a' { 0 } else { CLOSE })
            .collect();
        PlanarTree::from_code(&code)
    }

    #[test]
    fn sibling_order_is_forgotten() {
        let (x, y) = (from_ab("aabaabbb"), from_ab("aaabbabb"));
        assert_ne!(x, y);
        assert_eq!(abelianize(&x), abelianize(&y));
    }

    #[test]
    fn leaf_abelianizes_to_leaf() {
        let leaf = PlanarTree::leaf(Color(0));
        assert_eq!(abelianize(&leaf).to_planar(), leaf);
    }

    #[test]
    fn tree_accessors() {
        let a = Alphabet::new(["a", "b"]).unwrap();
        let kids = Forest::from_trees(&[PlanarTree::leaf(Color(1)), PlanarTree::leaf(Color(0))]);
        let t = PlanarTree::new(Color(0), &kids);
        assert_eq!(t.display(&a).to_string(), "a[b[] a[]]");
        assert_eq!(t.root(), Color(0));
        assert_eq!(t.children(), kids);
        assert_eq!(t.grade(), 3);
        assert_eq!(kids.len(), 2);
        assert_eq!(t.as_forest().as_tree(), Some(t));
        assert_eq!(kids.as_tree(), None);
    }

    #[test]
    fn alphabet_validation() {
        assert!(Alphabet::new(Vec::<String>::new()).is_err());
        assert!(Alphabet::new(["a", "a"]).is_err());
        assert!(Alphabet::new(["1x"]).is_err());
        let a = Alphabet::new(["x", "y_2"]).unwrap();
        assert_eq!(a.lookup("y_2"), Some(Color(1)));
        assert_eq!(a.lookup("z"), None);
    }
}
