//! The PBW isomorphism on the dual side: multisets of Lie basis elements
//! map to shuffle products of dual basis vectors embedded through the
//! transposed Euler idempotent.

use crate::algebra::{AlgebraContext, Terms};
use crate::coeff::{Coeff, Rational};
use crate::error::{AlgebraError, Result};
use crate::hopf::euler::euler_dual_basis;
use crate::hopf::lie_basis::LieIndex;
use crate::linalg::{inverse, rank};
use crate::series::Series;

/// Functionals `λ_i` on grade `n`, supported on Lyndon words, with
/// `⟨λ_i, P_j⟩ = δ_ij` for the Lie basis elements `P_j` of that grade.
pub fn pbw_dual_basis(ctx: &AlgebraContext, grade: usize) -> Vec<Terms> {
    let basis = ctx.lie_basis().grade(grade);
    let n = basis.len();
    // m[k][j] = coefficient of Lyndon word k in P_j
    let m: Vec<Vec<Rational>> = (0..n)
        .map(|k| {
            (0..n)
                .map(|j| {
                    basis[j]
                        .terms
                        .iter()
                        .find(|(f, _)| *f == basis[k].word)
                        .map_or_else(Rational::zero, |(_, q)| q.clone())
                })
                .collect()
        })
        .collect();
    let inv = inverse(&m).expect("Lyndon bracketings are unitriangular");
    (0..n)
        .map(|i| {
            let v: Vec<_> = (0..n)
                .filter(|&k| !inv[i][k].is_zero())
                .map(|k| (basis[k].word.clone(), inv[i][k].clone()))
                .collect();
            v.into()
        })
        .collect()
}

/// `ψ` of a multiset of Lie basis elements: the shuffle product of their
/// Euler-embedded duals.
pub fn pbw_iso(ctx: &AlgebraContext, multiset: &[LieIndex], order: usize) -> Result<Series> {
    let total: usize = multiset.iter().map(|ix| ix.grade).sum();
    if total > order || order > ctx.order() {
        return Err(AlgebraError::Precondition(format!(
            "multiset of total grade {total} at order {order}"
        )));
    }
    let mut out = Series::one(order);
    for ix in multiset {
        let lambda = &pbw_dual_basis(ctx, ix.grade)[ix.index];
        let mut embedded = Series::zero(order);
        for (f, q) in lambda.iter() {
            for (g, r) in euler_dual_basis(ctx, f).iter() {
                embedded.add_term(g.clone(), q * r);
            }
        }
        out = ctx.shuffle_mul(&out, &embedded)?;
    }
    Ok(out)
}

/// Every multiset of Lie basis indices of total grade `n`.
pub(crate) fn multisets(ctx: &AlgebraContext, n: usize) -> Vec<Vec<LieIndex>> {
    let all: Vec<LieIndex> = ctx.lie_basis().indices(n).collect();
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(
        all: &[LieIndex],
        start: usize,
        left: usize,
        cur: &mut Vec<LieIndex>,
        out: &mut Vec<Vec<LieIndex>>,
    ) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..all.len() {
            if all[i].grade <= left {
                cur.push(all[i]);
                rec(all, i, left - all[i].grade, cur, out);
                cur.pop();
            }
        }
    }
    rec(&all, 0, n, &mut cur, &mut out);
    out
}

/// Rank of `ψ` at grade `n` together with the number of forests there.
pub fn pbw_rank(ctx: &AlgebraContext, n: usize) -> Result<(usize, usize)> {
    let forests = ctx.forests(n);
    let rows: Vec<Vec<Rational>> = multisets(ctx, n)
        .iter()
        .map(|m| {
            let s = pbw_iso(ctx, m, n)?;
            Ok(forests.iter().map(|f| s.coeff(f)).collect())
        })
        .collect::<Result<_>>()?;
    Ok((rank(&rows), forests.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::pair;
    use crate::trees::Alphabet;

    #[test]
    fn duals_are_dual() {
        let ctx = AlgebraContext::new(Alphabet::single(), 5).unwrap();
        for n in 1..=5 {
            let duals = pbw_dual_basis(&ctx, n);
            for (i, lambda) in duals.iter().enumerate() {
                let l = Series::from_terms(lambda.iter().cloned(), 5);
                for j in 0..duals.len() {
                    let p: Series = ctx.lie_basis().element(LieIndex { grade: n, index: j }, 5);
                    let expected = if i == j { Rational::one() } else { Rational::zero() };
                    assert_eq!(pair(&l, &p).unwrap(), expected);
                }
            }
        }
    }

    #[test]
    fn singleton_is_the_embedded_dual() {
        let ctx = AlgebraContext::new(Alphabet::single(), 3).unwrap();
        let ix = LieIndex { grade: 1, index: 0 };
        assert_eq!(pbw_iso(&ctx, &[ix], 3).unwrap(), Series::forest(ctx.forests(1)[0].clone(), 3));
    }

    #[test]
    fn full_rank_in_low_grades() {
        let ctx = AlgebraContext::new(Alphabet::single(), 4).unwrap();
        assert_eq!(multisets(&ctx, 3).len(), 5);
        for n in 1..=4 {
            let (r, t) = pbw_rank(&ctx, n).unwrap();
            assert_eq!(r, t);
        }
    }

    #[test]
    fn algebra_map() {
        let ctx = AlgebraContext::new(Alphabet::single(), 5).unwrap();
        let m1 = vec![LieIndex { grade: 1, index: 0 }, LieIndex { grade: 2, index: 0 }];
        let m2 = vec![LieIndex { grade: 1, index: 0 }];
        let lhs = ctx
            .shuffle_mul(&pbw_iso(&ctx, &m1, 5).unwrap(), &pbw_iso(&ctx, &m2, 5).unwrap())
            .unwrap();
        let mut m = m1.clone();
        m.extend(m2);
        assert_eq!(lhs, pbw_iso(&ctx, &m, 5).unwrap());
    }
}
