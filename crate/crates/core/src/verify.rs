//! Exhaustive and randomized property checks with readable
//! counterexamples. Cases are visited by increasing total grade, so the
//! first failure reported is a smallest one.

use std::fmt;

use crate::algebra::{AlgebraContext, Coproduct, Product};
use crate::coeff::Rational;
use crate::error::Result;
use crate::hopf::{euler_idempotent, euler_rank, pbw_rank};
use crate::prelie::{elementary_differential_eval, exact_flow_taylor, project_abelian, ScalarPolynomial};
use crate::random::RandomSource;
use crate::series::{Series, Tensor};
use crate::subst::{
    compose, evaluate, transpose_substitution, universal_endomorphism,
    OneGeneratorCosubstitution, UniversalSubstitution,
};
use crate::trees::{Forest, PlanarTree};

/// The outcome of one property over a family of cases.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub cases: usize,
    pub counterexample: Option<String>,
}

impl Check {
    fn new(name: &str) -> Self {
        Check {
            name: name.to_string(),
            cases: 0,
            counterexample: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }

    /// Records one case; keeps only the first failure.
    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.counterexample.is_none() {
            self.counterexample = Some(describe());
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.counterexample {
            None => write!(f, "PASS {} ({} cases)", self.name, self.cases),
            Some(c) => write!(f, "FAIL {} after {} cases: {}", self.name, self.cases, c),
        }
    }
}

fn trees_up_to(ctx: &AlgebraContext, n: usize) -> Vec<PlanarTree> {
    (1..=n).flat_map(|g| ctx.trees(g).iter().cloned()).collect()
}

/// Triples of trees with total grade at most `n`, by increasing total grade.
fn tree_triples(ctx: &AlgebraContext, n: usize) -> Vec<[PlanarTree; 3]> {
    let trees = trees_up_to(ctx, n);
    let mut out = Vec::new();
    for total in 3..=n {
        for x in &trees {
            for y in &trees {
                for z in &trees {
                    if x.grade() + y.grade() + z.grade() == total {
                        out.push([x.clone(), y.clone(), z.clone()]);
                    }
                }
            }
        }
    }
    out
}

/// Basis forests of positive grade with total grade at most `n`.
fn forest_triples(ctx: &AlgebraContext, n: usize) -> Vec<[Forest; 3]> {
    let forests: Vec<&Forest> = (1..=n).flat_map(|g| ctx.forests(g)).collect();
    let mut out = Vec::new();
    for total in 3..=n {
        for x in &forests {
            for y in &forests {
                for z in &forests {
                    if x.grade() + y.grade() + z.grade() == total {
                        out.push([(*x).clone(), (*y).clone(), (*z).clone()]);
                    }
                }
            }
        }
    }
    out
}

fn describe(ctx: &AlgebraContext, labels: &[&str], values: &[Series], diff: &Series) -> String {
    let a = ctx.alphabet();
    let mut parts: Vec<String> = labels
        .iter()
        .zip(values)
        .map(|(l, v)| format!("{l} = {}", v.display(a)))
        .collect();
    parts.push(format!("difference = {}", diff.display(a)));
    parts.join("; ")
}

/// `x ▷ [y,z] = [x▷y, z] + [y, x▷z]` and
/// `[x,y] ▷ z = a(x,y,z) − a(y,x,z)` with `a(x,y,z) = x▷(y▷z) − (x▷y)▷z`,
/// over all tree triples of total grade at most `n`.
pub fn check_post_lie_axioms(ctx: &AlgebraContext, n: usize) -> Result<Vec<Check>> {
    let mut first = Check::new("graft is a derivation of the bracket");
    let mut second = Check::new("bracket grafts as the associator difference");
    for [x, y, z] in tree_triples(ctx, n) {
        let (x, y, z) = (Series::tree(&x, n), Series::tree(&y, n), Series::tree(&z, n));
        let lhs = ctx.graft(&x, &ctx.bracket_conc(&y, &z)?)?;
        let rhs = &ctx.bracket_conc(&ctx.graft(&x, &y)?, &z)?
            + &ctx.bracket_conc(&y, &ctx.graft(&x, &z)?)?;
        let diff = &lhs - &rhs;
        first.record(diff.is_zero(), || {
            describe(ctx, &["x", "y", "z"], &[x.clone(), y.clone(), z.clone()], &diff)
        });

        let assoc = |p: &Series, q: &Series, r: &Series| -> Result<Series> {
            Ok(&ctx.graft(p, &ctx.graft(q, r)?)? - &ctx.graft(&ctx.graft(p, q)?, r)?)
        };
        let lhs = ctx.graft(&ctx.bracket_conc(&x, &y)?, &z)?;
        let rhs = &assoc(&x, &y, &z)? - &assoc(&y, &x, &z)?;
        let diff = &lhs - &rhs;
        second.record(diff.is_zero(), || {
            describe(ctx, &["x", "y", "z"], &[x.clone(), y.clone(), z.clone()], &diff)
        });
    }
    Ok(vec![first, second])
}

/// Associativity of `•` and `*` on basis triples of total grade at most `n`.
pub fn check_associativity(ctx: &AlgebraContext, n: usize) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for (p, name) in [(Product::Conc, "concatenation"), (Product::Gl, "Grossman-Larson")] {
        let mut c = Check::new(&format!("{name} product is associative"));
        for [u, v, w] in forest_triples(ctx, n) {
            let (u, v, w) = (Series::forest(u, n), Series::forest(v, n), Series::forest(w, n));
            let lhs = ctx.mul(p, &ctx.mul(p, &u, &v)?, &w)?;
            let rhs = ctx.mul(p, &u, &ctx.mul(p, &v, &w)?)?;
            let diff = &lhs - &rhs;
            c.record(diff.is_zero(), || {
                describe(ctx, &["u", "v", "w"], &[u.clone(), v.clone(), w.clone()], &diff)
            });
        }
        checks.push(c);
    }
    Ok(checks)
}

/// `⟨Δ(w), u⊗v⟩ = ⟨w, u·v⟩` for `Δ_*` against `*` and `Δ_▷` against `▷`,
/// on all basis triples with `|u| + |v| = |w| ≤ n`.
pub fn check_duality(ctx: &AlgebraContext, n: usize) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for (c, p, name) in [
        (Coproduct::Gl, Product::Gl, "Grossman-Larson coproduct is dual to the product"),
        (Coproduct::Graft, Product::Graft, "grafting coproduct is dual to grafting"),
    ] {
        let mut check = Check::new(name);
        for g in 0..=n {
            for w in ctx.forests(g) {
                let cop = ctx.coproduct_basis(c, w);
                let mut t = Tensor::zero(n);
                for (l, r, q) in cop.iter() {
                    t.add_term(l.clone(), r.clone(), q.clone());
                }
                for gu in 0..=g {
                    for u in ctx.forests(gu) {
                        for v in ctx.forests(g - gu) {
                            let lhs = t.coeff(u, v);
                            let rhs: Rational = ctx
                                .product_basis(p, u, v)
                                .iter()
                                .filter(|(f, _)| f == w)
                                .map(|(_, q)| q.clone())
                                .sum();
                            check.record(lhs == rhs, || {
                                let a = ctx.alphabet();
                                format!(
                                    "w = {}, u = {}, v = {}: coproduct gives {}, product gives {}",
                                    w.display(a),
                                    u.display(a),
                                    v.display(a),
                                    lhs,
                                    rhs
                                )
                            });
                        }
                    }
                }
            }
        }
        checks.push(check);
    }
    Ok(checks)
}

pub fn verify_axioms(ctx: &AlgebraContext, n: usize) -> Result<Vec<Check>> {
    let mut out = check_post_lie_axioms(ctx, n)?;
    out.extend(check_associativity(ctx, n)?);
    out.extend(check_duality(ctx, n)?);
    Ok(out)
}

/// `e ∘ e = e` on every basis forest of grade at most `n`.
pub fn check_euler_idempotent(ctx: &AlgebraContext, n: usize) -> Result<Check> {
    let mut c = Check::new("Euler idempotent is idempotent");
    for g in 1..=n {
        for w in ctx.forests(g) {
            let s = Series::forest(w.clone(), n);
            let e = euler_idempotent(ctx, &s)?;
            let diff = &euler_idempotent(ctx, &e)? - &e;
            c.record(diff.is_zero(), || describe(ctx, &["w"], std::slice::from_ref(&s), &diff));
        }
    }
    Ok(c)
}

/// `Π_k (1 − x^k)^{−d_k} = Σ t_n x^n` with `d_k` the Lie ranks and `t_n`
/// the forest counts, through grade `n`.
pub fn check_generating_function(ctx: &AlgebraContext, n: usize) -> Result<Check> {
    let mut c = Check::new("PBW generating function matches forest counts");
    let ranks: Vec<usize> = (0..=n).map(|k| if k == 0 { 0 } else { euler_rank(ctx, k) }).collect();
    let mut series = vec![0u128; n + 1];
    series[0] = 1;
    for (k, &d) in ranks.iter().enumerate().skip(1) {
        // multiply by (1 − x^k)^{−1}, d times
        for _ in 0..d {
            for i in k..=n {
                series[i] += series[i - k];
            }
        }
    }
    for (g, predicted) in series.iter().enumerate().skip(1) {
        let actual = ctx.forests(g).len() as u128;
        c.record(*predicted == actual, || {
            format!("grade {g}: Lie ranks {:?} predict {predicted} forests, found {actual}", &ranks[1..])
        });
    }
    Ok(c)
}

/// `ψ` has full rank at every grade up to `n`.
pub fn check_pbw_rank(ctx: &AlgebraContext, n: usize) -> Result<Check> {
    let mut c = Check::new("PBW map has full rank");
    for g in 1..=n {
        let (r, dim) = pbw_rank(ctx, g)?;
        c.record(r == dim, || format!("grade {g}: rank {r} of {dim}"));
    }
    Ok(c)
}

pub fn verify_pbw(ctx: &AlgebraContext, n: usize) -> Result<Vec<Check>> {
    Ok(vec![
        check_euler_idempotent(ctx, n)?,
        check_generating_function(ctx, n)?,
        check_pbw_rank(ctx, n)?,
    ])
}

/// The co-substitution recursions against brute-force transposes, over
/// every dual forest of grade at most `n`.
pub fn verify_recursion(ctx: &AlgebraContext, n: usize, seed: u64) -> Result<Vec<Check>> {
    let a = ctx.alphabet();
    let universal = universal_endomorphism(ctx, n);
    let mut us = UniversalSubstitution::new(ctx, n)?;
    let mut symbolic = Check::new("recursion equals the symbolic transpose");
    let mut trees = Check::new("tree recursion agrees on single trees");
    let mut counit = Check::new("identity endomorphism acts trivially");
    let mut evaluated = Check::new("evaluation at random endomorphisms equals the transpose");
    let mut rng = RandomSource::new(seed);
    let endos: Vec<_> = (0..3).map(|_| rng.endomorphism(ctx, n)).collect();
    let id_values = crate::subst::Endomorphism::identity(ctx, n).coordinates(ctx)?;
    for g in 0..=n {
        for w in ctx.forests(g) {
            let rec = us.forest(w)?;
            let brute = transpose_substitution(ctx, &universal, w)?;
            symbolic.record(rec == brute, || {
                format!(
                    "ω = {}: recursion {} but brute force {}",
                    w.display(a),
                    rec.display(a),
                    brute.display(a)
                )
            });
            if w.len() == 1 {
                let t = us.tree(w)?;
                trees.record(t == rec, || {
                    format!("ω = {}: tree recursion {}", w.display(a), t.display(a))
                });
            }
            let at_id = evaluate(&rec, &id_values);
            counit.record(at_id == Series::forest(w.clone(), n), || {
                format!("ω = {}: identity gives {}", w.display(a), at_id.display(a))
            });
            for e in &endos {
                let got = evaluate(&rec, &e.coordinates(ctx)?);
                let expected = transpose_substitution(ctx, e, w)?;
                evaluated.record(got == expected, || {
                    format!(
                        "ω = {}, a = {}: {} vs {}",
                        w.display(a),
                        e.image(crate::trees::Color(0)).display(a),
                        got.display(a),
                        expected.display(a)
                    )
                });
            }
        }
    }
    let mut out = vec![symbolic, trees, counit, evaluated];
    out.push(check_coassociativity(ctx, n.min(3), &mut rng)?);
    if a.len() == 1 {
        out.push(check_one_generator(ctx, n, &endos)?);
    }
    Ok(out)
}

/// `((a∘b)★)^T ω = Σ_v ⟨(a★)^T ω, v⟩ (b★)^T v`, with every transpose taken
/// from the universal recursion evaluated at the endomorphism.
pub fn check_coassociativity(ctx: &AlgebraContext, n: usize, rng: &mut RandomSource) -> Result<Check> {
    let a = ctx.alphabet();
    let mut c = Check::new("co-substitution is coassociative under evaluation");
    let mut us = UniversalSubstitution::new(ctx, n)?;
    for _ in 0..2 {
        let x = rng.endomorphism(ctx, n);
        let y = rng.endomorphism(ctx, n);
        let xy = compose(ctx, &x, &y)?;
        let (vx, vy, vxy) = (x.coordinates(ctx)?, y.coordinates(ctx)?, xy.coordinates(ctx)?);
        for g in 0..=n {
            for w in ctx.forests(g) {
                let lhs = evaluate(&us.forest(w)?, &vxy);
                let mut rhs = Series::zero(n);
                for (v, q) in evaluate(&us.forest(w)?, &vx).terms() {
                    rhs.add_scaled(&evaluate(&us.forest(v)?, &vy), q);
                }
                let diff = &lhs - &rhs;
                c.record(diff.is_zero(), || {
                    format!("ω = {}: difference {}", w.display(a), diff.display(a))
                });
            }
        }
    }
    Ok(c)
}

fn check_one_generator(
    ctx: &AlgebraContext,
    n: usize,
    endos: &[crate::subst::Endomorphism],
) -> Result<Check> {
    let a = ctx.alphabet();
    let mut c = Check::new("one-generator form evaluates to the transpose");
    let mut og = OneGeneratorCosubstitution::new(ctx, n)?;
    for g in 0..=n {
        for w in ctx.forests(g) {
            let t = og.forest(w)?;
            for e in endos {
                let got = og.evaluate(&t, e)?;
                let expected = transpose_substitution(ctx, e, w)?;
                c.record(got == expected, || {
                    format!("ω = {}: {} vs {}", w.display(a), got.display(a), expected.display(a))
                });
            }
        }
    }
    Ok(c)
}

/// One row per power of `h`: the algebraic and the exact coefficient.
#[derive(Clone, Debug, PartialEq)]
pub struct FlowReport {
    pub rows: Vec<(usize, ScalarPolynomial, ScalarPolynomial)>,
}

impl FlowReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|(_, x, y)| x == y)
    }

    /// The lowest power of `h` where the two sides differ.
    pub fn first_mismatch(&self) -> Option<usize> {
        self.rows.iter().find(|(_, x, y)| x != y).map(|(n, _, _)| *n)
    }
}

/// Compares `exp*(h·c)` for the single color `c`, evaluated on the
/// observable `y` through elementary differentials of `f`, with the
/// Taylor expansion of the exact flow of `y' = f(y)`.
pub fn verify_flow(ctx: &AlgebraContext, f: &ScalarPolynomial, n: usize) -> Result<FlowReport> {
    let leaf = Series::tree(&PlanarTree::leaf(crate::trees::Color(0)), n);
    let u = project_abelian(&crate::hopf::exp_gl(ctx, &leaf)?);
    let algebraic = elementary_differential_eval(&u, f, &ScalarPolynomial::y());
    let exact = exact_flow_taylor(f, n);
    Ok(FlowReport {
        rows: algebraic
            .into_iter()
            .zip(exact)
            .enumerate()
            .map(|(k, (x, y))| (k, x, y))
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trees::Alphabet;

    #[test]
    fn axioms_hold_at_low_grade() {
        let ctx = AlgebraContext::new(Alphabet::new(["a", "b"]).unwrap(), 4).unwrap();
        for c in verify_axioms(&ctx, 4).unwrap() {
            assert!(c.passed(), "{c}");
            assert!(c.cases > 0);
        }
    }

    #[test]
    fn pbw_checks() {
        let ctx = AlgebraContext::new(Alphabet::single(), 5).unwrap();
        for c in verify_pbw(&ctx, 5).unwrap() {
            assert!(c.passed(), "{c}");
        }
    }

    #[test]
    fn recursion_checks() {
        let ctx = AlgebraContext::new(Alphabet::single(), 3).unwrap();
        let checks = verify_recursion(&ctx, 3, 1).unwrap();
        assert_eq!(checks.len(), 6);
        for c in checks {
            assert!(c.passed(), "{c}");
        }
    }

    #[test]
    fn flow_check_and_counterexample() {
        let ctx = AlgebraContext::new(Alphabet::single(), 6).unwrap();
        let f = ScalarPolynomial::parse("y^2").unwrap();
        let report = verify_flow(&ctx, &f, 6).unwrap();
        assert!(report.passed());
        assert_eq!(report.rows.len(), 7);
        let mut broken = report.clone();
        broken.rows[3].2 = ScalarPolynomial::zero();
        assert_eq!(broken.first_mismatch(), Some(3));
    }

    #[test]
    fn failures_keep_the_first_case() {
        let mut c = Check::new("demo");
        c.record(true, || unreachable!());
        c.record(false, || "first".into());
        c.record(false, || "second".into());
        assert_eq!(c.to_string(), "FAIL demo after 3 cases: first");
    }
}
