mod output;

use std::fs;
use std::io::{self, Read};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use lbk::algebra::{Coproduct, Product};
use lbk::flows::{backward_error, bch_conc, field_to_flow, sharp};
use lbk::hopf::{coproduct_map, euler_idempotent, eulerian_component, exp, log};
use lbk::parse::parse_series_list;
use lbk::prelie::ScalarPolynomial;
use lbk::subst::{apply_endomorphism, Endomorphism, OneGeneratorCosubstitution, UniversalSubstitution};
use lbk::verify::{verify_axioms, verify_flow, verify_pbw, verify_recursion, Check};
use lbk::{
    abelianize, max_order, AlgebraContext, AlgebraError, Alphabet, Series, DEFAULT_MAX_ORDER,
    MAX_ORDER_ENV,
};

use output::*;

#[derive(Parser)]
#[command(name = "lbk", version, about = "Exact computation with planar forests, post-Lie products and their Hopf algebras")]
struct Cli {
    /// Truncation order.
    #[arg(long, global = true, default_value_t = 4)]
    order: usize,
    /// Color names, separated by commas or spaces.
    #[arg(long, global = true, default_value = "a")]
    colors: String,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Read series from this file instead of standard input.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProductArg {
    Conc,
    Shuffle,
    Gl,
    Graft,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExpProduct {
    Conc,
    Gl,
}

#[derive(Clone, Copy, ValueEnum)]
enum CoproductArg {
    Gl,
    Graft,
    Deconcat,
    Unshuffle,
}

#[derive(Clone, Copy, Subcommand)]
enum FlowOp {
    /// Principal flow of a vector field.
    Phi,
    /// BCH product of two primitives (input `x ; y`).
    Bch,
    /// Composition product of two principal flows (input `x ; y`).
    Sharp,
    /// Vector field whose flow is the input.
    BackwardError,
}

#[derive(Subcommand)]
enum Command {
    /// List planar trees (or forests) per grade.
    Trees {
        #[arg(long)]
        grade: Option<usize>,
        #[arg(long)]
        forests: bool,
    },
    /// Print input series in canonical form.
    Parse,
    /// Multiply two series (input `u ; v`).
    Mul {
        #[arg(long, value_enum)]
        product: ProductArg,
    },
    /// Apply the Euler idempotent, or an Eulerian component.
    Euler {
        #[arg(long)]
        component: Option<usize>,
    },
    Exp {
        #[arg(long, value_enum)]
        product: ExpProduct,
    },
    Log {
        #[arg(long, value_enum)]
        product: ExpProduct,
    },
    /// List the Lie basis per grade.
    LieBasis {
        #[arg(long)]
        grade: Option<usize>,
    },
    /// Apply a coproduct to the input, or print its table.
    Coproduct {
        #[arg(long, value_enum)]
        which: CoproductArg,
        #[arg(long)]
        table: bool,
    },
    Phi,
    Bch,
    Sharp,
    BackwardError,
    /// Flow operations: phi, bch, sharp, backward-error.
    Flow {
        #[command(subcommand)]
        op: FlowOp,
    },
    /// Substitution by endomorphisms.
    Subst {
        #[command(subcommand)]
        op: SubstOp,
    },
    /// Property checks; exit status 1 on failure.
    Verify {
        #[command(subcommand)]
        what: VerifyOp,
    },
    /// Dimensions per grade.
    Dims,
}

#[derive(Subcommand)]
enum SubstOp {
    /// Apply the endomorphism in `--endo` to the input series.
    Apply {
        #[arg(long)]
        endo: PathBuf,
    },
    /// Co-substitution table for every dual forest of the given grade.
    Universal {
        #[arg(long)]
        grade: usize,
        #[arg(long)]
        one_generator: bool,
    },
}

#[derive(Subcommand)]
enum VerifyOp {
    /// Compare the algebraic flow with the exact Taylor expansion of y' = f(y).
    Flow {
        #[arg(long)]
        f: String,
    },
    Axioms,
    Pbw,
    Recursion {
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

enum Failure {
    Usage(String),
    Capacity(String),
    Verify,
}

impl From<AlgebraError> for Failure {
    fn from(e: AlgebraError) -> Self {
        match e {
            AlgebraError::Capacity { .. } => Failure::Capacity(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

struct Session {
    ctx: AlgebraContext,
    format: Format,
    input: Option<PathBuf>,
}

impl Session {
    fn alphabet(&self) -> &Alphabet {
        self.ctx.alphabet()
    }

    fn order(&self) -> usize {
        self.ctx.order()
    }

    fn read_text(path: Option<&Path>) -> Result<String, Failure> {
        match path {
            Some(p) => fs::read_to_string(p)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", p.display()))),
            None => {
                let mut s = String::new();
                io::stdin()
                    .read_to_string(&mut s)
                    .map_err(|e| Failure::Usage(format!("cannot read standard input: {e}")))?;
                Ok(s)
            }
        }
    }

    fn series(&self, count: usize) -> Result<Vec<Series>, Failure> {
        let text = Self::read_text(self.input.as_deref())?;
        let list = parse_series_list(&text, self.alphabet(), self.order())?;
        if list.len() != count {
            return Err(Failure::Usage(format!(
                "expected {count} series separated by `;`, found {}",
                list.len()
            )));
        }
        Ok(list)
    }

    fn one(&self) -> Result<Series, Failure> {
        Ok(self.series(1)?.remove(0))
    }

    fn two(&self) -> Result<(Series, Series), Failure> {
        let mut v = self.series(2)?;
        let y = v.remove(1);
        Ok((v.remove(0), y))
    }

    fn emit_json(&self, v: &Value) {
        println!("{}", serde_json::to_string_pretty(v).expect("json"));
    }

    fn emit_series(&self, s: &Series) {
        match self.format {
            Format::Text => println!("{}", s.display(self.alphabet())),
            Format::Json => self.emit_json(&series_json(s, self.alphabet())),
        }
    }

    fn emit_checks(&self, checks: &[Check]) -> Outcome {
        let passed = checks.iter().all(Check::passed);
        match self.format {
            Format::Text => {
                for c in checks {
                    println!("{c}");
                }
                println!("{}", if passed { "PASS" } else { "FAIL" });
            }
            Format::Json => self.emit_json(&checks_json(checks)),
        }
        if passed {
            Ok(())
        } else {
            Err(Failure::Verify)
        }
    }
}

fn parse_colors(text: &str) -> Result<Alphabet, Failure> {
    let names: Vec<&str> = text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .collect();
    Ok(Alphabet::new(names)?)
}

fn flow(s: &Session, op: FlowOp) -> Outcome {
    let ctx = &s.ctx;
    let out = match op {
        FlowOp::Phi => field_to_flow(ctx, &s.one()?)?,
        FlowOp::BackwardError => backward_error(ctx, &s.one()?)?,
        FlowOp::Bch => {
            let (x, y) = s.two()?;
            bch_conc(ctx, &x, &y)?
        }
        FlowOp::Sharp => {
            let (x, y) = s.two()?;
            sharp(ctx, &x, &y)?
        }
    };
    s.emit_series(&out);
    Ok(())
}

fn grades(s: &Session, grade: Option<usize>) -> Result<Vec<usize>, Failure> {
    match grade {
        Some(g) if g > s.order() => Err(Failure::Usage(format!(
            "grade {g} exceeds truncation order {}",
            s.order()
        ))),
        Some(g) => Ok(vec![g]),
        None => Ok((1..=s.order()).collect()),
    }
}

fn trees(s: &Session, grade: Option<usize>, forests: bool) -> Outcome {
    let a = s.alphabet();
    let mut blocks = Vec::new();
    for g in grades(s, grade)? {
        let items: Vec<String> = if forests {
            s.ctx.forests(g).iter().map(|f| f.display(a).to_string()).collect()
        } else {
            s.ctx.trees(g).iter().map(|t| t.display(a).to_string()).collect()
        };
        blocks.push((g, items));
    }
    match s.format {
        Format::Text => {
            for (g, items) in &blocks {
                println!("grade {g} ({})", items.len());
                for i in items {
                    println!("  {i}");
                }
            }
        }
        Format::Json => s.emit_json(&Value::Array(
            blocks
                .into_iter()
                .map(|(g, items)| json!({"grade": g, "count": items.len(), "items": items}))
                .collect(),
        )),
    }
    Ok(())
}

fn lie_basis(s: &Session, grade: Option<usize>) -> Outcome {
    let a = s.alphabet();
    let basis = s.ctx.lie_basis();
    let mut rows = Vec::new();
    for g in grades(s, grade)? {
        for (i, el) in basis.grade(g).iter().enumerate() {
            let element: Series = basis.element(lbk::hopf::LieIndex { grade: g, index: i }, s.order());
            rows.push((g, i, el.word.display(a).to_string(), element));
        }
    }
    match s.format {
        Format::Text => {
            for (g, i, word, el) in &rows {
                println!("{g}.{i}  [{word}]  {}", el.display(a));
            }
        }
        Format::Json => s.emit_json(&Value::Array(
            rows.iter()
                .map(|(g, i, word, el)| {
                    json!({"grade": g, "index": i, "word": word, "element": series_json(el, a)})
                })
                .collect(),
        )),
    }
    Ok(())
}

fn coproduct(s: &Session, which: CoproductArg, table: bool) -> Outcome {
    let c = match which {
        CoproductArg::Gl => Coproduct::Gl,
        CoproductArg::Graft => Coproduct::Graft,
        CoproductArg::Deconcat => Coproduct::Deconcat,
        CoproductArg::Unshuffle => Coproduct::Unshuffle,
    };
    let a = s.alphabet();
    if table {
        let m = coproduct_map(&s.ctx, c, s.order());
        match s.format {
            Format::Text => print!("{}", map_text(&m, a)),
            Format::Json => s.emit_json(&m.to_json(a)),
        }
        return Ok(());
    }
    let t = s.ctx.coproduct(c, &s.one()?)?;
    match s.format {
        Format::Text => println!("{}", t.display(a)),
        Format::Json => s.emit_json(&tensor_json(&t, a)),
    }
    Ok(())
}

fn dims(s: &Session) -> Outcome {
    let rows: Vec<[usize; 5]> = (1..=s.order())
        .map(|g| {
            let abelian: std::collections::HashSet<_> = s.ctx.trees(g).iter().map(abelianize).collect();
            [
                g,
                s.ctx.forests(g).len(),
                s.ctx.trees(g).len(),
                s.ctx.lie_basis().dim(g),
                abelian.len(),
            ]
        })
        .collect();
    match s.format {
        Format::Text => {
            println!("grade  forests  trees  lie  nonplanar");
            for r in &rows {
                println!("{:>5}  {:>7}  {:>5}  {:>3}  {:>9}", r[0], r[1], r[2], r[3], r[4]);
            }
        }
        Format::Json => s.emit_json(&Value::Array(
            rows.iter()
                .map(|r| {
                    json!({"grade": r[0], "forests": r[1], "trees": r[2], "lie": r[3], "nonplanar_trees": r[4]})
                })
                .collect(),
        )),
    }
    Ok(())
}

fn subst(s: &Session, op: &SubstOp) -> Outcome {
    let a = s.alphabet();
    match op {
        SubstOp::Apply { endo } => {
            let text = Session::read_text(Some(endo))?;
            let e = Endomorphism::parse(&s.ctx, &text, s.order())?;
            let out = apply_endomorphism(&s.ctx, &e, &s.one()?)?;
            s.emit_series(&out);
        }
        SubstOp::Universal {
            grade,
            one_generator,
        } => {
            if *grade > s.order() {
                return Err(AlgebraError::GradeAboveOrder {
                    grade: *grade,
                    order: s.order(),
                }
                .into());
            }
            let mut tables = Vec::new();
            if *one_generator {
                let mut og = OneGeneratorCosubstitution::new(&s.ctx, *grade)?;
                for w in s.ctx.forests(*grade) {
                    let t = og.forest(w)?;
                    // collect the endomorphism leg per target forest
                    let mut by_target: std::collections::BTreeMap<_, Series> = Default::default();
                    for (k, v, q) in t.terms() {
                        by_target
                            .entry(v.clone())
                            .or_insert_with(|| Series::zero(2 * grade))
                            .add_term(k.clone(), q.clone());
                    }
                    let rows = by_target
                        .into_iter()
                        .map(|(v, k)| (k.display(a).to_string(), v.display(a).to_string()))
                        .collect();
                    tables.push((w.display(a).to_string(), rows));
                }
            } else {
                let mut us = UniversalSubstitution::new(&s.ctx, *grade)?;
                for w in s.ctx.forests(*grade) {
                    let rows = poly_series_rows(&us.forest(w)?, a);
                    tables.push((w.display(a).to_string(), rows));
                }
            }
            match s.format {
                Format::Text => {
                    for (omega, rows) in &tables {
                        println!("{omega}");
                        for (coeff, target) in rows {
                            println!("  ({coeff}) {target}");
                        }
                    }
                }
                Format::Json => s.emit_json(&Value::Array(
                    tables
                        .into_iter()
                        .map(|(omega, rows)| universal_json(omega, rows))
                        .collect(),
                )),
            }
        }
    }
    Ok(())
}

fn verify(s: &Session, what: &VerifyOp) -> Outcome {
    match what {
        VerifyOp::Flow { f } => {
            if s.alphabet().len() != 1 {
                return Err(Failure::Usage("verify flow needs a single color".into()));
            }
            let poly = ScalarPolynomial::parse(f)?;
            let report = verify_flow(&s.ctx, &poly, s.order())?;
            match s.format {
                Format::Text => {
                    println!("f = {poly}");
                    println!("power  algebraic  exact");
                    for (n, x, y) in &report.rows {
                        let mark = if x == y { "" } else { "  MISMATCH" };
                        println!("h^{n}  {x}  {y}{mark}");
                    }
                    match report.first_mismatch() {
                        None => println!("PASS"),
                        Some(n) => println!("FAIL first mismatch at h^{n}"),
                    }
                }
                Format::Json => s.emit_json(&json!({
                    "f": poly.to_string(),
                    "order": s.order(),
                    "rows": flow_rows_json(&report.rows),
                    "passed": report.passed(),
                })),
            }
            if report.passed() {
                Ok(())
            } else {
                Err(Failure::Verify)
            }
        }
        VerifyOp::Axioms => s.emit_checks(&verify_axioms(&s.ctx, s.order())?),
        VerifyOp::Pbw => s.emit_checks(&verify_pbw(&s.ctx, s.order())?),
        VerifyOp::Recursion { seed } => s.emit_checks(&verify_recursion(&s.ctx, s.order(), *seed)?),
    }
}

fn run(cli: Cli) -> Outcome {
    let alphabet = parse_colors(&cli.colors)?;
    let max = max_order();
    if max != DEFAULT_MAX_ORDER {
        eprintln!("warning: maximum order set to {max} by {MAX_ORDER_ENV}");
    }
    if cli.order > max {
        return Err(Failure::Capacity(format!(
            "order {} exceeds the maximum {max}; set {MAX_ORDER_ENV} to raise it",
            cli.order
        )));
    }
    let session = Session {
        ctx: AlgebraContext::new(alphabet, cli.order)?,
        format: cli.format,
        input: cli.input,
    };
    let s = &session;
    let ctx = &s.ctx;
    match &cli.command {
        Command::Trees { grade, forests } => trees(s, *grade, *forests),
        Command::Parse => {
            s.emit_series(&s.one()?);
            Ok(())
        }
        Command::Mul { product } => {
            let p = match product {
                ProductArg::Conc => Product::Conc,
                ProductArg::Shuffle => Product::Shuffle,
                ProductArg::Gl => Product::Gl,
                ProductArg::Graft => Product::Graft,
            };
            let (u, v) = s.two()?;
            s.emit_series(&ctx.mul(p, &u, &v)?);
            Ok(())
        }
        Command::Euler { component } => {
            let x = s.one()?;
            let out = match component {
                Some(p) => eulerian_component(ctx, &x, *p)?,
                None => euler_idempotent(ctx, &x)?,
            };
            s.emit_series(&out);
            Ok(())
        }
        Command::Exp { product } | Command::Log { product } => {
            let p = match product {
                ExpProduct::Conc => Product::Conc,
                ExpProduct::Gl => Product::Gl,
            };
            let x = s.one()?;
            let out = if matches!(cli.command, Command::Exp { .. }) {
                exp(ctx, p, &x)?
            } else {
                log(ctx, p, &x)?
            };
            s.emit_series(&out);
            Ok(())
        }
        Command::LieBasis { grade } => lie_basis(s, *grade),
        Command::Coproduct { which, table } => coproduct(s, *which, *table),
        Command::Phi => flow(s, FlowOp::Phi),
        Command::Bch => flow(s, FlowOp::Bch),
        Command::Sharp => flow(s, FlowOp::Sharp),
        Command::BackwardError => flow(s, FlowOp::BackwardError),
        Command::Flow { op } => flow(s, *op),
        Command::Subst { op } => subst(s, op),
        Command::Verify { what } => verify(s, what),
        Command::Dims => dims(s),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verify) => ExitCode::from(1),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Capacity(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
    }
}
