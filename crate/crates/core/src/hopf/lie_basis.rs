//! A basis of the free Lie algebra on planar trees: standard bracketings
//! of Lyndon words whose letters are trees, ordered by tree order.

use std::collections::HashMap;

use crate::algebra::{AlgebraContext, Terms};
use crate::coeff::{Coeff, Rational};
use crate::error::{AlgebraError, Result};
use crate::series::Series;
use crate::trees::{Forest, PlanarTree};

/// Position of a basis element: its grade and its index in that grade.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LieIndex {
    pub grade: usize,
    pub index: usize,
}

#[derive(Clone, Debug)]
pub struct LieElement {
    /// The Lyndon word; its forest is the smallest word in the support.
    pub word: Forest,
    pub terms: Terms,
}

/// Lie basis elements for every grade up to the context order.
#[derive(Debug)]
pub struct LieBasis {
    grades: Vec<Vec<LieElement>>,
    lookup: HashMap<Forest, LieIndex>,
}

/// Lyndon: strictly smaller than each of its proper suffixes.
pub fn is_lyndon(letters: &[PlanarTree]) -> bool {
    !letters.is_empty() && (1..letters.len()).all(|i| letters < &letters[i..])
}

impl LieBasis {
    pub(crate) fn build(ctx: &AlgebraContext) -> LieBasis {
        let order = ctx.order();
        let mut grades: Vec<Vec<LieElement>> = vec![Vec::new()];
        let mut lookup: HashMap<Forest, LieIndex> = HashMap::new();
        let mut polys: HashMap<Forest, Series> = HashMap::new();
        for n in 1..=order {
            let mut level = Vec::new();
            for w in ctx.forests(n) {
                let letters: Vec<PlanarTree> = w.trees().collect();
                if !is_lyndon(&letters) {
                    continue;
                }
                let p = if letters.len() == 1 {
                    Series::forest(w.clone(), order)
                } else {
                    let split = (1..letters.len())
                        .find(|&i| is_lyndon(&letters[i..]))
                        .expect("a single letter is Lyndon");
                    let u = Forest::from_trees(&letters[..split]);
                    let v = Forest::from_trees(&letters[split..]);
                    ctx.bracket_conc(&polys[&u], &polys[&v])
                        .expect("same order")
                };
                lookup.insert(
                    w.clone(),
                    LieIndex {
                        grade: n,
                        index: level.len(),
                    },
                );
                let mut terms: Vec<(Forest, Rational)> = p
                    .terms()
                    .map(|(f, c)| (f.clone(), c.clone()))
                    .collect();
                terms.sort_by(|a, b| a.0.cmp(&b.0));
                polys.insert(w.clone(), p);
                level.push(LieElement {
                    word: w.clone(),
                    terms: terms.into(),
                });
            }
            grades.push(level);
        }
        LieBasis { grades, lookup }
    }

    pub fn max_grade(&self) -> usize {
        self.grades.len() - 1
    }

    pub fn dim(&self, grade: usize) -> usize {
        self.grades.get(grade).map_or(0, Vec::len)
    }

    pub fn grade(&self, grade: usize) -> &[LieElement] {
        self.grades.get(grade).map_or(&[], Vec::as_slice)
    }

    pub fn get(&self, ix: LieIndex) -> &LieElement {
        &self.grades[ix.grade][ix.index]
    }

    /// Indices of every element of grade at most `order`.
    pub fn indices(&self, order: usize) -> impl Iterator<Item = LieIndex> + '_ {
        (1..=order.min(self.max_grade())).flat_map(move |g| {
            (0..self.grades[g].len()).map(move |index| LieIndex { grade: g, index })
        })
    }

    pub fn index_of(&self, word: &Forest) -> Option<LieIndex> {
        self.lookup.get(word).copied()
    }

    /// The element as a series of the given order.
    pub fn element<R: Coeff>(&self, ix: LieIndex, order: usize) -> Series<R> {
        Series::from_terms(
            self.get(ix)
                .terms
                .iter()
                .map(|(f, q)| (f.clone(), R::from_rational(q))),
            order,
        )
    }

    /// Coordinates of a Lie element in this basis. Fails with
    /// [`AlgebraError::NotPrimitive`] when `x` is not a Lie element.
    pub fn coordinates(&self, x: &Series) -> Result<Vec<(LieIndex, Rational)>> {
        if x.max_grade() > self.max_grade() {
            return Err(AlgebraError::ContextMismatch(
                "series order above the Lie basis order".into(),
            ));
        }
        let mut rest = x.clone();
        let mut out = Vec::new();
        // Each bracketing is its Lyndon word plus strictly larger words of
        // the same grade, so the smallest remaining word is always a leading term.
        while let Some((w, c)) = rest.sorted_terms().first().map(|(f, c)| ((*f).clone(), (*c).clone())) {
            let Some(ix) = self.index_of(&w) else {
                return Err(AlgebraError::NotPrimitive("series".into()));
            };
            let p: Series = self.element(ix, x.order());
            rest.add_scaled(&p, &(-c.clone()));
            out.push((ix, c));
        }
        out.sort_by_key(|(ix, _)| *ix);
        Ok(out)
    }
}

impl AlgebraContext {
    /// The Lie basis up to the context order, built on first use.
    pub fn lie_basis(&self) -> &LieBasis {
        self.lie_basis.get_or_init(|| LieBasis::build(self))
    }
}
