//! The Euler idempotent `e = log⋆(id)` and its convolution powers.

use crate::algebra::{Acc, AlgebraContext, Coproduct, Product, Terms};
use crate::coeff::{inv_factorial, rat, Coeff, Rational};
use crate::error::{AlgebraError, Result};
use crate::hopf::convolution::{projection_j, ConvolutionPowers};
use crate::linalg::rank;
use crate::series::Series;
use crate::trees::Forest;

/// `Σ_{j≥1} (−1)^{j+1}/j · J^{⋆j}(w)`.
fn log_of_identity(powers: &mut ConvolutionPowers<'_>, w: &Forest) -> Terms {
    let mut acc = Acc::default();
    for j in 1..=w.len() {
        let sign = if j % 2 == 1 { 1 } else { -1 };
        let c = rat(sign, j as i64);
        for (f, q) in powers.power(j, w).iter() {
            acc.add(f.clone(), &c * q);
        }
    }
    acc.freeze()
}

fn cached<'a>(
    ctx: &'a AlgebraContext,
    dual: bool,
    w: &Forest,
    powers: &mut Option<ConvolutionPowers<'a>>,
) -> Terms {
    let memo = if dual {
        &ctx.euler_dual_memo
    } else {
        &ctx.euler_memo
    };
    if let Some(t) = memo.read().expect("memo lock").get(w) {
        return t.clone();
    }
    let powers = powers.get_or_insert_with(|| {
        let (p, c) = if dual {
            (Product::Shuffle, Coproduct::Deconcat)
        } else {
            (Product::Conc, Coproduct::Unshuffle)
        };
        ConvolutionPowers::new(ctx, p, c, projection_j)
    });
    let t = log_of_identity(powers, w);
    memo.write()
        .expect("memo lock")
        .entry(w.clone())
        .or_insert(t)
        .clone()
}

pub(crate) fn euler_basis(ctx: &AlgebraContext, w: &Forest) -> Terms {
    cached(ctx, false, w, &mut None)
}

pub(crate) fn euler_dual_basis(ctx: &AlgebraContext, w: &Forest) -> Terms {
    cached(ctx, true, w, &mut None)
}

fn apply<R: Coeff>(ctx: &AlgebraContext, dual: bool, s: &Series<R>) -> Result<Series<R>> {
    ctx.check(s)?;
    let mut powers = None;
    let mut out = Series::zero(s.order());
    for (f, c) in s.terms() {
        for (g, q) in cached(ctx, dual, f, &mut powers).iter() {
            out.add_term(g.clone(), c.scale(q));
        }
    }
    Ok(out)
}

/// The Euler idempotent for concatenation and unshuffle; projects onto the
/// Lie elements.
pub fn euler_idempotent<R: Coeff>(ctx: &AlgebraContext, s: &Series<R>) -> Result<Series<R>> {
    apply(ctx, false, s)
}

/// The transpose of [`euler_idempotent`], computed independently as the
/// convolution logarithm of the identity for shuffle and deconcatenation.
pub fn euler_transpose<R: Coeff>(ctx: &AlgebraContext, s: &Series<R>) -> Result<Series<R>> {
    apply(ctx, true, s)
}

/// `e^{⋆p}/p!`, the projection onto the `p`-th symmetrized component.
pub fn eulerian_component(ctx: &AlgebraContext, s: &Series, p: usize) -> Result<Series> {
    ctx.check(s)?;
    if p > s.order() {
        return Err(AlgebraError::Precondition(format!(
            "component {p} exceeds order {}",
            s.order()
        )));
    }
    let mut powers = ConvolutionPowers::new(ctx, Product::Conc, Coproduct::Unshuffle, |w| {
        euler_basis(ctx, w)
    });
    let scale = inv_factorial(p);
    let mut out = Series::zero(s.order());
    for (f, c) in s.terms() {
        for (g, q) in powers.power(p, f).iter() {
            out.add_term(g.clone(), c * q * &scale);
        }
    }
    Ok(out)
}

/// Rows are the images `e(f)` of the forests of grade `n`, in the
/// canonical basis of that grade.
pub fn euler_matrix(ctx: &AlgebraContext, n: usize) -> Vec<Vec<Rational>> {
    let basis = ctx.forests(n);
    let index: std::collections::HashMap<&Forest, usize> =
        basis.iter().enumerate().map(|(i, f)| (f, i)).collect();
    basis
        .iter()
        .map(|f| {
            let mut row = vec![Rational::zero(); basis.len()];
            for (g, q) in euler_basis(ctx, f).iter() {
                row[index[g]] = q.clone();
            }
            row
        })
        .collect()
}

/// Rank of the Euler idempotent at grade `n`: the dimension of the Lie
/// elements of that grade.
pub fn euler_rank(ctx: &AlgebraContext, n: usize) -> usize {
    rank(&euler_matrix(ctx, n))
}
