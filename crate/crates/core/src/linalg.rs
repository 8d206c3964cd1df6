//! Graded linear maps in the forest basis, and exact dense linear algebra
//! over the rationals.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Value};

use crate::coeff::{format_rational, Coeff, Rational};
use crate::trees::{Alphabet, Forest};

/// A basis vector of `T` or of `T ⊗ T`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BasisKey {
    Forest(Forest),
    Tensor(Forest, Forest),
}

impl BasisKey {
    pub fn label(&self, alphabet: &Alphabet) -> String {
        match self {
            BasisKey::Forest(f) => f.display(alphabet).to_string(),
            BasisKey::Tensor(l, r) => {
                format!("{} ⊗ {}", l.display(alphabet), r.display(alphabet))
            }
        }
    }
}

/// The grade of a homogeneous piece: a single grade or a bigrade of `T ⊗ T`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Grade {
    Single(usize),
    Pair(usize, usize),
}

impl Grade {
    fn to_json(self) -> Value {
        match self {
            Grade::Single(n) => json!(n),
            Grade::Pair(p, q) => json!([p, q]),
        }
    }
}

impl fmt::Display for Grade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Grade::Single(n) => write!(f, "{n}"),
            Grade::Pair(p, q) => write!(f, "({p},{q})"),
        }
    }
}

/// One homogeneous block, stored by columns (domain basis vectors).
#[derive(Clone, Debug, PartialEq)]
pub struct LinearBlock {
    pub domain_grade: Grade,
    pub codomain_grade: Grade,
    columns: BTreeMap<BasisKey, BTreeMap<BasisKey, Rational>>,
}

impl LinearBlock {
    pub fn new(domain_grade: Grade, codomain_grade: Grade) -> Self {
        LinearBlock {
            domain_grade,
            codomain_grade,
            columns: BTreeMap::new(),
        }
    }

    pub fn add_entry(&mut self, row: BasisKey, col: BasisKey, value: Rational) {
        if value.is_zero() {
            return;
        }
        let column = self.columns.entry(col.clone()).or_default();
        let slot = column.entry(row.clone()).or_insert_with(Coeff::zero);
        *slot += value;
        if slot.is_zero() {
            column.remove(&row);
            if column.is_empty() {
                self.columns.remove(&col);
            }
        }
    }

    pub fn entry(&self, row: &BasisKey, col: &BasisKey) -> Rational {
        self.columns
            .get(col)
            .and_then(|c| c.get(row))
            .cloned()
            .unwrap_or_else(Coeff::zero)
    }

    pub fn column(&self, col: &BasisKey) -> impl Iterator<Item = (&BasisKey, &Rational)> {
        self.columns.get(col).into_iter().flat_map(|c| c.iter())
    }

    /// All nonzero entries as `(row, col, value)`, sorted by row then column.
    pub fn entries(&self) -> Vec<(&BasisKey, &BasisKey, &Rational)> {
        let mut v: Vec<_> = self
            .columns
            .iter()
            .flat_map(|(col, rows)| rows.iter().map(move |(row, q)| (row, col, q)))
            .collect();
        v.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        v
    }

    pub fn transpose(&self) -> LinearBlock {
        let mut t = LinearBlock::new(self.codomain_grade, self.domain_grade);
        for (col, rows) in &self.columns {
            for (row, q) in rows {
                t.add_entry(col.clone(), row.clone(), q.clone());
            }
        }
        t
    }

    pub fn to_json(&self, alphabet: &Alphabet) -> Value {
        let entries: Vec<Value> = self
            .entries()
            .into_iter()
            .map(|(r, c, q)| json!([r.label(alphabet), c.label(alphabet), format_rational(q)]))
            .collect();
        json!({
            "domain_grade": self.domain_grade.to_json(),
            "codomain_grade": self.codomain_grade.to_json(),
            "entries": entries,
        })
    }
}

/// A linear map given by its homogeneous blocks.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct GradedLinearMap {
    blocks: BTreeMap<(Grade, Grade), LinearBlock>,
}

impl GradedLinearMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, block: LinearBlock) {
        self.blocks
            .insert((block.domain_grade, block.codomain_grade), block);
    }

    pub fn block(&self, domain: Grade, codomain: Grade) -> Option<&LinearBlock> {
        self.blocks.get(&(domain, codomain))
    }

    pub fn blocks(&self) -> impl Iterator<Item = &LinearBlock> {
        self.blocks.values()
    }

    pub fn transpose(&self) -> GradedLinearMap {
        let mut t = GradedLinearMap::new();
        for b in self.blocks.values() {
            t.insert(b.transpose());
        }
        t
    }

    /// Applies the map to a combination of basis vectors.
    pub fn apply<'a, I>(&self, input: I) -> BTreeMap<BasisKey, Rational>
    where
        I: IntoIterator<Item = (&'a BasisKey, &'a Rational)>,
    {
        let mut out: BTreeMap<BasisKey, Rational> = BTreeMap::new();
        for (key, c) in input {
            for b in self.blocks.values() {
                for (row, q) in b.column(key) {
                    let slot = out.entry(row.clone()).or_insert_with(Coeff::zero);
                    *slot += c * q;
                }
            }
        }
        out.retain(|_, q| !q.is_zero());
        out
    }

    pub fn to_json(&self, alphabet: &Alphabet) -> Value {
        Value::Array(self.blocks.values().map(|b| b.to_json(alphabet)).collect())
    }
}

/// Rank of a dense rational matrix given by rows.
pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    row_reduce(&mut m)
}

/// Reduces to row echelon form in place and returns the rank.
fn row_reduce(m: &mut [Vec<Rational>]) -> usize {
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let pivot = m[r][c].clone();
        for i in r + 1..m.len() {
            if m[i][c].is_zero() {
                continue;
            }
            let factor = &m[i][c] / &pivot;
            let (top, bottom) = m.split_at_mut(i);
            for (x, p) in bottom[0][c..cols].iter_mut().zip(&top[r][c..cols]) {
                *x -= &factor * p;
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

/// Inverse of a square rational matrix, or `None` when singular.
pub fn inverse(matrix: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = matrix.len();
    let mut m: Vec<Vec<Rational>> = matrix
        .iter()
        .enumerate()
        .map(|(i, row)| {
            assert_eq!(row.len(), n, "matrix is not square");
            let mut r = row.clone();
            r.extend((0..n).map(|j| {
                if i == j {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !m[i][c].is_zero())?;
        m.swap(c, p);
        let pivot = m[c][c].clone();
        for x in m[c].iter_mut() {
            *x /= &pivot;
        }
        for i in 0..n {
            if i == c || m[i][c].is_zero() {
                continue;
            }
            let factor = m[i][c].clone();
            let pivot_row = m[c].clone();
            for (x, p) in m[i].iter_mut().zip(&pivot_row) {
                *x -= &factor * p;
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}
