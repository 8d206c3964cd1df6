//! Text syntax for series.
//!
//! ```text
//! series := "0" | ["-"] term (("+" | "-") term)*
//! term   := rational ["*" forest] | forest
//! forest := tree+ | "1"
//! tree   := color "[" tree* "]"
//! ```
//!
//! A bare rational denotes a multiple of the empty forest. Several series
//! may be given in one text separated by `;`.

use num_bigint::BigInt;

use crate::coeff::{Coeff, Rational};
use crate::error::{AlgebraError, Result};
use crate::series::Series;
use crate::trees::{Alphabet, Forest, PlanarTree};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Open,
    Close,
    Star,
    Slash,
    Plus,
    Minus,
    Semi,
    Assign,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> AlgebraError {
    AlgebraError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<(Vec<Token>, (usize, usize))> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut line, mut column) = (1, 1);
    let mut i = 0;
    while i < chars.len() {
        let ch = chars[i];
        let (tl, tc) = (line, column);
        if ch == '\n' {
            line += 1;
            column = 1;
            i += 1;
            continue;
        }
        if ch.is_whitespace() {
            column += 1;
            i += 1;
            continue;
        }
        let single = match ch {
            '[' => Some(Tok::Open),
            ']' => Some(Tok::Close),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            ';' => Some(Tok::Semi),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Token {
                tok,
                line: tl,
                column: tc,
            });
            i += 1;
            column += 1;
            continue;
        }
        if ch == ':' && chars.get(i + 1) == Some(&'=') {
            out.push(Token {
                tok: Tok::Assign,
                line: tl,
                column: tc,
            });
            i += 2;
            column += 2;
            continue;
        }
        if ch.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            column += i - start;
            out.push(Token {
                tok: Tok::Int(s.parse().expect("digits")),
                line: tl,
                column: tc,
            });
            continue;
        }
        if ch.is_ascii_alphabetic() || ch == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            column += i - start;
            out.push(Token {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                line: tl,
                column: tc,
            });
            continue;
        }
        return Err(syntax(tl, tc, format!("unexpected character `{ch}`")));
    }
    Ok((out, (line, column)))
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    end: (usize, usize),
    alphabet: &'a Alphabet,
    order: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.tokens
            .get(self.pos)
            .map_or(self.end, |t| (t.line, t.column))
    }

    fn error(&self, message: impl Into<String>) -> AlgebraError {
        let (l, c) = self.here();
        syntax(l, c, message)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.tokens.get(self.pos).map(|t| t.tok.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected {what}")))
        }
    }

    fn at_series_end(&self) -> bool {
        matches!(self.peek(), None | Some(Tok::Semi))
    }

    fn series(&mut self) -> Result<Series> {
        let mut s = Series::zero(self.order);
        let mut negate = false;
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            negate = true;
        }
        loop {
            let (coeff, forest) = self.term()?;
            if forest.grade() > self.order {
                return Err(AlgebraError::GradeAboveOrder {
                    grade: forest.grade(),
                    order: self.order,
                });
            }
            s.add_term(forest, if negate { -coeff } else { coeff });
            match self.peek() {
                Some(Tok::Plus) => negate = false,
                Some(Tok::Minus) => negate = true,
                None | Some(Tok::Semi) => return Ok(s),
                _ => return Err(self.error("expected `+`, `-`, `;` or end of input")),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<(Rational, Forest)> {
        match self.peek() {
            Some(Tok::Int(_)) => {
                let q = self.rational()?;
                if self.peek() == Some(&Tok::Star) {
                    self.pos += 1;
                    Ok((q, self.forest()?))
                } else {
                    Ok((q, Forest::empty()))
                }
            }
            Some(Tok::Ident(_)) => Ok((Rational::one(), self.forest()?)),
            _ => Err(self.error("expected a coefficient or a tree")),
        }
    }

    fn rational(&mut self) -> Result<Rational> {
        let Some(Tok::Int(n)) = self.bump() else {
            unreachable!("caller checked for an integer")
        };
        if self.peek() != Some(&Tok::Slash) {
            return Ok(Rational::from_integer(n));
        }
        self.pos += 1;
        match self.peek() {
            Some(Tok::Int(d)) if *d != BigInt::from(0) => {
                let d = d.clone();
                self.pos += 1;
                Ok(Rational::new(n, d))
            }
            _ => Err(self.error("expected a positive denominator")),
        }
    }

    fn forest(&mut self) -> Result<Forest> {
        if let Some(Tok::Int(n)) = self.peek() {
            if *n == BigInt::from(1) {
                self.pos += 1;
                return Ok(Forest::empty());
            }
            return Err(self.error("expected a forest"));
        }
        let mut trees = Vec::new();
        while let Some(Tok::Ident(_)) = self.peek() {
            trees.push(self.tree()?);
        }
        if trees.is_empty() {
            return Err(self.error("expected a forest"));
        }
        Ok(Forest::from_trees(&trees))
    }

    fn tree(&mut self) -> Result<PlanarTree> {
        let Some(Tok::Ident(name)) = self.bump() else {
            unreachable!("caller checked for an identifier")
        };
        let color = self
            .alphabet
            .lookup(&name)
            .ok_or(AlgebraError::UnknownColor(name))?;
        self.expect(Tok::Open, "`[`")?;
        let mut kids = Vec::new();
        while let Some(Tok::Ident(_)) = self.peek() {
            kids.push(self.tree()?);
        }
        self.expect(Tok::Close, "`]` or a child tree")?;
        Ok(PlanarTree::new(color, &Forest::from_trees(&kids)))
    }

    fn maybe_zero(&mut self) -> Option<Series> {
        if let Some(Tok::Int(n)) = self.peek() {
            let next = self.tokens.get(self.pos + 1).map(|t| &t.tok);
            if *n == BigInt::from(0) && matches!(next, None | Some(Tok::Semi)) {
                self.pos += 1;
                return Some(Series::zero(self.order));
            }
        }
        None
    }

    fn one_series(&mut self) -> Result<Series> {
        match self.maybe_zero() {
            Some(z) => Ok(z),
            None => self.series(),
        }
    }
}

fn parser<'a>(text: &str, alphabet: &'a Alphabet, order: usize) -> Result<Parser<'a>> {
    let (tokens, end) = lex(text)?;
    Ok(Parser {
        tokens,
        pos: 0,
        end,
        alphabet,
        order,
    })
}

/// Parses one series.
pub fn parse_series(text: &str, alphabet: &Alphabet, order: usize) -> Result<Series> {
    let mut p = parser(text, alphabet, order)?;
    let s = p.one_series()?;
    if !p.at_series_end() || p.peek().is_some() {
        return Err(p.error("unexpected input after series"));
    }
    Ok(s)
}

/// Parses a `;`-separated list of series.
pub fn parse_series_list(text: &str, alphabet: &Alphabet, order: usize) -> Result<Vec<Series>> {
    let mut p = parser(text, alphabet, order)?;
    let mut out = vec![p.one_series()?];
    while p.peek() == Some(&Tok::Semi) {
        p.pos += 1;
        out.push(p.one_series()?);
    }
    if p.peek().is_some() {
        return Err(p.error("unexpected input after series"));
    }
    Ok(out)
}

/// Parses a single forest such as `a[] a[a[]]` or `1`.
pub fn parse_forest(text: &str, alphabet: &Alphabet) -> Result<Forest> {
    let mut p = parser(text, alphabet, usize::MAX)?;
    let f = p.forest()?;
    if p.peek().is_some() {
        return Err(p.error("unexpected input after forest"));
    }
    Ok(f)
}

/// Parses an endomorphism description: one `color := series` per line.
/// Blank lines and lines starting with `#` are skipped. Colors without a
/// line map to themselves.
pub fn parse_assignments(
    text: &str,
    alphabet: &Alphabet,
    order: usize,
) -> Result<Vec<(crate::trees::Color, Series)>> {
    let mut out = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (tokens, _) = lex(line).map_err(|e| relocate(e, ln + 1))?;
        let (Some(Tok::Ident(name)), Some(Tok::Assign)) =
            (tokens.first().map(|t| &t.tok), tokens.get(1).map(|t| &t.tok))
        else {
            return Err(syntax(ln + 1, 1, "expected `color := series`"));
        };
        let color = alphabet
            .lookup(name)
            .ok_or_else(|| AlgebraError::UnknownColor(name.clone()))?;
        let mut p = Parser {
            tokens,
            pos: 2,
            end: (1, line.chars().count() + 1),
            alphabet,
            order,
        };
        let s = p.one_series().map_err(|e| relocate(e, ln + 1))?;
        if p.peek().is_some() {
            return Err(relocate(p.error("unexpected input after series"), ln + 1));
        }
        out.push((color, s));
    }
    Ok(out)
}

fn relocate(e: AlgebraError, line: usize) -> AlgebraError {
    match e {
        AlgebraError::Syntax {
            column, message, ..
        } => AlgebraError::Syntax {
            line,
            column,
            message,
        },
        other => other,
    }
}

/// Canonical print of a rational series.
pub fn print_series(s: &Series, alphabet: &Alphabet) -> String {
    s.display(alphabet).to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{int, rat};
    use crate::trees::enumerate_forests;

    fn a() -> Alphabet {
        Alphabet::single()
    }

    #[test]
    fn single_leaf() {
        let s = parse_series("a[]", &a(), 3).unwrap();
        assert_eq!(s.len(), 1);
        let (f, c) = s.terms().next().unwrap();
        assert_eq!(f.grade(), 1);
        assert_eq!(*c, int(1));
    }

    #[test]
    fn coefficients_and_words() {
        let s = parse_series("1/2 * a[a[]] + 2 * a[] a[]", &a(), 3).unwrap();
        let chain = parse_forest("a[a[]]", &a()).unwrap();
        let word = parse_forest("a[] a[]", &a()).unwrap();
        assert_eq!(s.coeff(&chain), rat(1, 2));
        assert_eq!(s.coeff(&word), int(2));
        assert_eq!(print_series(&s, &a()), "2*a[] a[] + 1/2*a[a[]]");
    }

    #[test]
    fn sibling_whitespace_is_irrelevant() {
        assert_eq!(
            parse_series("a[a[] a[]]", &a(), 3).unwrap(),
            parse_series("a[a[]a[]]", &a(), 3).unwrap()
        );
    }

    #[test]
    fn canonical_round_trip() {
        let alphabet = Alphabet::new(["a", "b"]).unwrap();
        for n in 0..=3 {
            for f in enumerate_forests(&alphabet, n).unwrap() {
                let text = f.display(&alphabet).to_string();
                assert_eq!(parse_forest(&text, &alphabet).unwrap(), f);
            }
        }
        let text = "-3/4 + a[] - 1/2*a[] b[] + b[a[]]";
        let s = parse_series(text, &alphabet, 3).unwrap();
        assert_eq!(print_series(&s, &alphabet), text);
        let again = parse_series(&print_series(&s, &alphabet), &alphabet, 3).unwrap();
        assert_eq!(again, s);
    }

    #[test]
    fn zero_and_unit() {
        assert!(parse_series("0", &a(), 2).unwrap().is_zero());
        assert_eq!(parse_series("1", &a(), 2).unwrap(), Series::one(2));
        assert_eq!(print_series(&Series::zero(2), &a()), "0");
        assert_eq!(parse_series("a[] - a[]", &a(), 2).unwrap(), Series::zero(2));
    }

    #[test]
    fn errors_carry_positions() {
        match parse_series("a[] +\n  a[", &a(), 3) {
            Err(AlgebraError::Syntax { line, column, .. }) => {
                assert_eq!((line, column), (2, 5));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(
            parse_series("b[]", &a(), 3),
            Err(AlgebraError::UnknownColor("b".into()))
        );
        assert_eq!(
            parse_series("a[a[a[]]]", &a(), 2),
            Err(AlgebraError::GradeAboveOrder { grade: 3, order: 2 })
        );
        assert!(parse_series("1/0*a[]", &a(), 2).is_err());
        assert!(parse_series("a[] a[", &a(), 2).is_err());
    }

    #[test]
    fn lists_and_assignments() {
        let v = parse_series_list("a[] ; 0; 2*a[a[]]", &a(), 3).unwrap();
        assert_eq!(v.len(), 3);
        assert!(v[1].is_zero());
        let text = "# scaled\na := 2*a[] + a[a[]]\n";
        let asg = parse_assignments(text, &a(), 3).unwrap();
        assert_eq!(asg.len(), 1);
        assert_eq!(asg[0].1.len(), 2);
        assert!(matches!(
            parse_assignments("a = a[]", &a(), 3),
            Err(AlgebraError::Syntax { line: 1, .. })
        ));
    }
}
