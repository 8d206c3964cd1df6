//! Text and JSON renderings shared by the subcommands.

use lbk::linalg::GradedLinearMap;
use lbk::prelie::ScalarPolynomial;
use lbk::verify::Check;
use lbk::{format_rational, Alphabet, Poly, Series, Tensor};
use serde_json::{json, Value};

pub fn series_json(s: &Series, a: &Alphabet) -> Value {
    let terms: Vec<Value> = s
        .sorted_terms()
        .into_iter()
        .map(|(f, q)| json!({"forest": f.display(a).to_string(), "coeff": format_rational(q)}))
        .collect();
    json!({"order": s.order(), "terms": terms})
}

pub fn tensor_json(t: &Tensor, a: &Alphabet) -> Value {
    let terms: Vec<Value> = t
        .sorted_terms()
        .into_iter()
        .map(|(l, r, q)| {
            json!({
                "left": l.display(a).to_string(),
                "right": r.display(a).to_string(),
                "coeff": format_rational(q),
            })
        })
        .collect();
    json!({"order": t.order(), "terms": terms})
}

pub fn map_text(m: &GradedLinearMap, a: &Alphabet) -> String {
    let mut out = String::new();
    for b in m.blocks() {
        if b.entries().is_empty() {
            continue;
        }
        out.push_str(&format!("block {} -> {}\n", b.domain_grade, b.codomain_grade));
        for (row, col, q) in b.entries() {
            out.push_str(&format!(
                "  {} <- {} : {}\n",
                row.label(a),
                col.label(a),
                format_rational(q)
            ));
        }
    }
    out
}

/// `{"coeff", "target"}` rows of a universal co-substitution table.
pub fn universal_json(omega: String, terms: Vec<(String, String)>) -> Value {
    let terms: Vec<Value> = terms
        .into_iter()
        .map(|(coeff, target)| json!({"coeff": coeff, "target": target}))
        .collect();
    json!({"omega": omega, "terms": terms})
}

pub fn poly_series_rows(s: &Series<Poly>, a: &Alphabet) -> Vec<(String, String)> {
    s.sorted_terms()
        .into_iter()
        .map(|(f, p)| (p.display(a).to_string(), f.display(a).to_string()))
        .collect()
}

pub fn checks_json(checks: &[Check]) -> Value {
    let list: Vec<Value> = checks
        .iter()
        .map(|c| {
            json!({
                "name": c.name,
                "cases": c.cases,
                "passed": c.passed(),
                "counterexample": c.counterexample,
            })
        })
        .collect();
    json!({"checks": list, "passed": checks.iter().all(Check::passed)})
}

pub fn flow_rows_json(rows: &[(usize, ScalarPolynomial, ScalarPolynomial)]) -> Vec<Value> {
    rows.iter()
        .map(|(n, x, y)| {
            json!({
                "power": n,
                "algebraic": x.to_string(),
                "exact": y.to_string(),
                "match": x == y,
            })
        })
        .collect()
}
