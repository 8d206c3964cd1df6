//! Acceptance suite: every criterion is checked with exact rational
//! equality and reported on one PASS/FAIL line. Exits nonzero if any fail.

use std::collections::HashSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use lbk::algebra::Coproduct;
use lbk::flows::{backward_error, bch_conc, field_to_flow, sharp, sharp_by_definition, sharp_by_graft};
use lbk::hopf::{euler_idempotent, exp_conc, exp_gl, log_conc, log_gl, Character, LieIndex};
use lbk::prelie::{exact_flow_taylor, ScalarPolynomial};
use lbk::random::RandomSource;
use lbk::subst::{apply_endomorphism, evaluate, transpose_substitution, UniversalSubstitution};
use lbk::verify::{
    check_duality, check_euler_idempotent, check_generating_function, check_pbw_rank,
    check_post_lie_axioms, verify_flow,
};
use lbk::{abelianize, enumerate_forests, enumerate_trees, AlgebraContext, Alphabet, Rational, Series};

type Outcome = Result<(), String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn single(order: usize) -> AlgebraContext {
    AlgebraContext::new(Alphabet::single(), order).expect("context")
}

fn enumeration() -> Outcome {
    let a = Alphabet::single();
    let forests: Vec<usize> = (1..=8)
        .map(|n| enumerate_forests(&a, n).map(|v| v.len()))
        .collect::<lbk::Result<_>>()
        .map_err(|e| e.to_string())?;
    ensure(forests == [1, 2, 5, 14, 42, 132, 429, 1430], || {
        format!("forest counts {forests:?}")
    })?;
    let catalan = [1, 1, 2, 5, 14, 42, 132, 429];
    let mut abelian = Vec::new();
    for n in 1..=8 {
        let trees = enumerate_trees(&a, n).map_err(|e| e.to_string())?;
        ensure(trees.len() == catalan[n - 1], || {
            format!("grade {n}: {} trees, expected {}", trees.len(), catalan[n - 1])
        })?;
        abelian.push(trees.iter().map(abelianize).collect::<HashSet<_>>().len());
    }
    ensure(abelian == [1, 1, 2, 4, 9, 20, 48, 115], || {
        format!("abelianized tree counts {abelian:?}")
    })
}

fn checks_pass(checks: Vec<lbk::verify::Check>) -> Outcome {
    for c in checks {
        ensure(c.passed() && c.cases > 0, || c.to_string())?;
    }
    Ok(())
}

fn post_lie_axioms() -> Outcome {
    checks_pass(check_post_lie_axioms(&single(5), 5).map_err(|e| e.to_string())?)?;
    let two = AlgebraContext::new(Alphabet::new(["a", "b"]).expect("alphabet"), 5).expect("context");
    checks_pass(check_post_lie_axioms(&two, 5).map_err(|e| e.to_string())?)
}

fn euler_pbw() -> Outcome {
    let ctx = single(6);
    checks_pass(vec![
        check_euler_idempotent(&ctx, 5).map_err(|e| e.to_string())?,
        check_generating_function(&ctx, 6).map_err(|e| e.to_string())?,
        check_pbw_rank(&ctx, 5).map_err(|e| e.to_string())?,
    ])
}

fn exp_log_inverses() -> Outcome {
    let ctx = single(6);
    let mut rng = RandomSource::new(4);
    for i in 0..50 {
        let x = rng.primitive(&ctx, 6);
        let conc = log_conc(&ctx, &exp_conc(&ctx, &x).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        ensure(conc == x, || format!("concatenation, sample {i}"))?;
        let gl = log_gl(&ctx, &exp_gl(&ctx, &x).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        ensure(gl == x, || format!("Grossman-Larson, sample {i}"))?;
    }
    Ok(())
}

fn composition_routes_agree() -> Outcome {
    let ctx = single(5);
    let basis = ctx.lie_basis();
    let elements: Vec<(LieIndex, Series)> =
        basis.indices(4).map(|ix| (ix, basis.element(ix, 5))).collect();
    let mut pairs = 0;
    for (i, x) in &elements {
        for (j, y) in &elements {
            if i.grade + j.grade > 5 {
                continue;
            }
            pairs += 1;
            let d = sharp_by_definition(&ctx, x, y).map_err(|e| e.to_string())?;
            let g = sharp_by_graft(&ctx, x, y).map_err(|e| e.to_string())?;
            ensure(d == g, || format!("basis pair {i:?}, {j:?}"))?;
        }
    }
    ensure(pairs > 0, || "no basis pairs".into())?;
    let mut rng = RandomSource::new(5);
    for i in 0..50 {
        let x = rng.primitive(&ctx, 5);
        let y = rng.primitive(&ctx, 5);
        let d = sharp_by_definition(&ctx, &x, &y).map_err(|e| e.to_string())?;
        let g = sharp_by_graft(&ctx, &x, &y).map_err(|e| e.to_string())?;
        ensure(d == g, || format!("random pair {i}"))?;
    }
    Ok(())
}

fn flow_semantics() -> Outcome {
    let ctx = single(6);
    let parse = |s: &str| ScalarPolynomial::parse(s).map_err(|e| e.to_string());
    let report = verify_flow(&ctx, &parse("y^2")?, 6).map_err(|e| e.to_string())?;
    for (n, algebraic, _) in &report.rows {
        let mut c = vec![Rational::from_integer(0.into()); n + 2];
        c[n + 1] = Rational::from_integer(1.into());
        ensure(*algebraic == ScalarPolynomial::from_coeffs(c), || {
            format!("f = y^2, h^{n}: got {algebraic}")
        })?;
    }
    for f in ["y", "1", "y^2 + 1"] {
        let f = parse(f)?;
        let report = verify_flow(&ctx, &f, 6).map_err(|e| e.to_string())?;
        ensure(report.rows.len() == 7 && report.passed(), || {
            format!("f = {f}: first mismatch at h^{:?}", report.first_mismatch())
        })?;
        let exact: Vec<_> = report.rows.iter().map(|r| r.2.clone()).collect();
        ensure(exact == exact_flow_taylor(&f, 6), || format!("f = {f}: oracle rows"))?;
    }
    Ok(())
}

fn backward_error_inverse() -> Outcome {
    let ctx = single(6);
    let mut rng = RandomSource::new(7);
    for i in 0..50 {
        let x = rng.primitive(&ctx, 6);
        let there = field_to_flow(&ctx, &x).map_err(|e| e.to_string())?;
        ensure(backward_error(&ctx, &there).map_err(|e| e.to_string())? == x, || {
            format!("backward error of flow, sample {i}")
        })?;
        let back = backward_error(&ctx, &x).map_err(|e| e.to_string())?;
        ensure(field_to_flow(&ctx, &back).map_err(|e| e.to_string())? == x, || {
            format!("flow of backward error, sample {i}")
        })?;
    }
    Ok(())
}

fn substitution_coherence() -> Outcome {
    let ctx = single(4);
    let mut rng = RandomSource::new(8);
    let mut us = UniversalSubstitution::new(&ctx, 4).map_err(|e| e.to_string())?;
    for i in 0..20 {
        let a = rng.endomorphism(&ctx, 4);
        let u = rng.primitive(&ctx, 4);
        let v = rng.primitive(&ctx, 4);
        let star = |s: &Series| apply_endomorphism(&ctx, &a, s).map_err(|e| e.to_string());
        let lhs = star(&sharp(&ctx, &u, &v).map_err(|e| e.to_string())?)?;
        let rhs = sharp(&ctx, &star(&u)?, &star(&v)?).map_err(|e| e.to_string())?;
        ensure(lhs == rhs, || format!("composition product, endomorphism {i}"))?;
        let lhs = star(&ctx.graft(&u, &v).map_err(|e| e.to_string())?)?;
        let rhs = ctx.graft(&star(&u)?, &star(&v)?).map_err(|e| e.to_string())?;
        ensure(lhs == rhs, || format!("grafting, endomorphism {i}"))?;
        let values = a.coordinates(&ctx).map_err(|e| e.to_string())?;
        for w in ctx.forests_up_to(4) {
            let got = evaluate(&us.forest(w).map_err(|e| e.to_string())?, &values);
            let expected = transpose_substitution(&ctx, &a, w).map_err(|e| e.to_string())?;
            ensure(got == expected, || {
                format!("transpose at {}, endomorphism {i}", w.display(ctx.alphabet()))
            })?;
        }
    }
    Ok(())
}

fn duality_wiring() -> Outcome {
    let ctx = single(4);
    checks_pass(check_duality(&ctx, 4).map_err(|e| e.to_string())?)?;
    let mut rng = RandomSource::new(9);
    for i in 0..10 {
        let x = rng.primitive(&ctx, 4);
        let y = rng.primitive(&ctx, 4);
        let cx = Character::from_lie(&ctx, &x).map_err(|e| e.to_string())?;
        let cy = Character::from_lie(&ctx, &y).map_err(|e| e.to_string())?;
        let bch = cx
            .convolve(&ctx, &cy, Coproduct::Deconcat)
            .and_then(|c| c.to_lie(&ctx))
            .map_err(|e| e.to_string())?;
        ensure(bch == bch_conc(&ctx, &x, &y).map_err(|e| e.to_string())?, || {
            format!("deconcatenation convolution, sample {i}")
        })?;
        let composed = cx
            .convolve(&ctx, &cy, Coproduct::Gl)
            .and_then(|c| c.to_lie(&ctx))
            .map_err(|e| e.to_string())?;
        ensure(composed == sharp(&ctx, &x, &y).map_err(|e| e.to_string())?, || {
            format!("Grossman-Larson convolution, sample {i}")
        })?;
    }
    Ok(())
}

fn euler_equivariance() -> Outcome {
    let ctx = single(4);
    let mut rng = RandomSource::new(10);
    for i in 0..10 {
        let a = rng.endomorphism(&ctx, 4);
        for w in ctx.forests_up_to(4) {
            let s = Series::forest(w.clone(), 4);
            let lhs = apply_endomorphism(&ctx, &a, &euler_idempotent(&ctx, &s).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
            let rhs = euler_idempotent(&ctx, &apply_endomorphism(&ctx, &a, &s).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
            ensure(lhs == rhs, || {
                format!("{}, endomorphism {i}", w.display(ctx.alphabet()))
            })?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Outcome, Option<Duration>);
    let criteria: [Criterion; 10] = [
        ("enumeration", enumeration, Some(Duration::from_secs(10))),
        ("post-Lie axioms", post_lie_axioms, Some(Duration::from_secs(60))),
        ("Euler idempotent and PBW", euler_pbw, None),
        ("exp/log inverses", exp_log_inverses, None),
        ("composition product routes agree", composition_routes_agree, None),
        ("flow semantics", flow_semantics, Some(Duration::from_secs(10))),
        ("backward error", backward_error_inverse, None),
        ("substitution coherence", substitution_coherence, None),
        ("duality wiring", duality_wiring, None),
        ("Euler equivariance", euler_equivariance, None),
    ];
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut outcome = run();
        let elapsed = start.elapsed();
        if let (Ok(()), Some(limit)) = (&outcome, limit) {
            if elapsed > *limit {
                outcome = Err(format!("took {elapsed:.2?}, limit {limit:?}"));
            }
        }
        match outcome {
            Ok(()) => println!("PASS {:>2} {name} ({elapsed:.2?})", i + 1),
            Err(e) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({elapsed:.2?}): {e}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
