//! Expression parser for germ input: a parenthesized, comma-separated tuple
//! of polynomial expressions over named variables, with `+ - * ^`, integer
//! and rational literals, and no implicit multiplication. Variables are
//! either declared up front or inferred in first-appearance order.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::Error;
use crate::germ::MapGerm;
use crate::poly::{Poly, Rat};

/// A parsed germ together with its source text and variable order.
#[derive(Debug, Clone)]
pub struct GermExpression {
    source: String,
    germ: MapGerm,
    variables: Vec<String>,
}

impl GermExpression {
    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn germ(&self) -> &MapGerm {
        &self.germ
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    LParen,
    RParen,
    Comma,
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    Int(String),
    Ident(String),
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax { line, column, message: message.into() }
}

fn lex(text: &str) -> Result<Vec<Spanned>, Error> {
    let mut toks = Vec::new();
    let mut line = 1usize;
    let mut column = 1usize;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (l, col) = (line, column);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next().unwrap();
            if c == '\n' {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
            c
        };
        if c.is_whitespace() {
            bump(&mut chars);
            continue;
        }
        let tok = match c {
            '(' => {
                bump(&mut chars);
                Tok::LParen
            }
            ')' => {
                bump(&mut chars);
                Tok::RParen
            }
            ',' => {
                bump(&mut chars);
                Tok::Comma
            }
            '+' => {
                bump(&mut chars);
                Tok::Plus
            }
            '-' => {
                bump(&mut chars);
                Tok::Minus
            }
            '*' => {
                bump(&mut chars);
                Tok::Star
            }
            '^' => {
                bump(&mut chars);
                Tok::Caret
            }
            '/' => {
                bump(&mut chars);
                Tok::Slash
            }
            c if c.is_ascii_digit() => {
                let mut s = String::new();
                while matches!(chars.peek(), Some(d) if d.is_ascii_digit()) {
                    s.push(bump(&mut chars));
                }
                Tok::Int(s)
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut s = String::new();
                while matches!(chars.peek(), Some(d) if d.is_ascii_alphanumeric() || *d == '_') {
                    s.push(bump(&mut chars));
                }
                Tok::Ident(s)
            }
            other => return Err(syntax(l, col, format!("unexpected character '{}'", other))),
        };
        toks.push(Spanned { tok, line: l, column: col });
    }
    Ok(toks)
}

fn valid_name(s: &str) -> bool {
    let mut it = s.chars();
    match it.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    it.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

struct Parser<'a> {
    toks: &'a [Spanned],
    pos: usize,
    vars: HashMap<String, usize>,
    nvars: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Spanned> {
        self.toks.get(self.pos)
    }

    fn end_position(&self) -> (usize, usize) {
        self.toks.last().map(|s| (s.line, s.column + 1)).unwrap_or((1, 1))
    }

    fn next(&mut self) -> Option<&Spanned> {
        let t = self.toks.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), Error> {
        match self.peek() {
            Some(s) if s.tok == tok => {
                self.pos += 1;
                Ok(())
            }
            Some(s) => Err(syntax(s.line, s.column, format!("expected {}", what))),
            None => {
                let (l, c) = self.end_position();
                Err(syntax(l, c, format!("expected {} before end of input", what)))
            }
        }
    }

    fn parse_expr(&mut self) -> Result<Poly, Error> {
        let mut negate = false;
        if let Some(s) = self.peek() {
            match s.tok {
                Tok::Plus => {
                    self.pos += 1;
                }
                Tok::Minus => {
                    self.pos += 1;
                    negate = true;
                }
                _ => {}
            }
        }
        let mut acc = self.parse_term()?;
        if negate {
            acc = acc.neg();
        }
        while let Some(s) = self.peek() {
            match s.tok {
                Tok::Plus => {
                    self.pos += 1;
                    let t = self.parse_term()?;
                    acc = acc.add(&t);
                }
                Tok::Minus => {
                    self.pos += 1;
                    let t = self.parse_term()?;
                    acc = acc.sub(&t);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn parse_term(&mut self) -> Result<Poly, Error> {
        let mut acc = self.parse_factor()?;
        loop {
            match self.peek() {
                Some(s) if s.tok == Tok::Star => {
                    self.pos += 1;
                    let f = self.parse_factor()?;
                    acc = acc.mul(&f);
                }
                Some(s) if s.tok == Tok::Slash => {
                    return Err(syntax(
                        s.line,
                        s.column,
                        "division is only allowed inside rational literals",
                    ));
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn parse_factor(&mut self) -> Result<Poly, Error> {
        let mut base = self.parse_atom()?;
        while matches!(self.peek(), Some(s) if s.tok == Tok::Caret) {
            self.pos += 1;
            let e = self.parse_exponent()?;
            base = base.pow(e);
        }
        Ok(base)
    }

    fn parse_exponent(&mut self) -> Result<u32, Error> {
        match self.next() {
            Some(s) => match &s.tok {
                Tok::Int(digits) => digits
                    .parse::<u32>()
                    .map_err(|_| syntax(s.line, s.column, "exponent too large")),
                _ => Err(syntax(s.line, s.column, "expected a non-negative integer exponent")),
            },
            None => {
                let (l, c) = self.end_position();
                Err(syntax(l, c, "expected a non-negative integer exponent before end of input"))
            }
        }
    }

    fn parse_atom(&mut self) -> Result<Poly, Error> {
        let Some(s) = self.next() else {
            let (l, c) = self.end_position();
            return Err(syntax(l, c, "expected an expression before end of input"));
        };
        let (line, column) = (s.line, s.column);
        match s.tok.clone() {
            Tok::Int(digits) => {
                let num: BigInt = digits
                    .parse()
                    .map_err(|_| syntax(line, column, "malformed integer literal"))?;
                if matches!(self.peek(), Some(t) if t.tok == Tok::Slash) {
                    self.pos += 1;
                    match self.next().cloned() {
                        Some(Spanned { tok: Tok::Int(den), line: dl, column: dc }) => {
                            let den: BigInt = den
                                .parse()
                                .map_err(|_| syntax(dl, dc, "malformed integer literal"))?;
                            if den.is_zero() {
                                return Err(syntax(dl, dc, "zero denominator"));
                            }
                            Ok(Poly::constant(self.nvars, Rat::new(num, den)))
                        }
                        Some(t) => Err(syntax(
                            t.line,
                            t.column,
                            "expected an integer denominator after '/'",
                        )),
                        None => {
                            let (l, c) = self.end_position();
                            Err(syntax(l, c, "expected an integer denominator before end of input"))
                        }
                    }
                } else {
                    Ok(Poly::constant(self.nvars, Rat::from_integer(num)))
                }
            }
            Tok::Ident(name) => match self.vars.get(&name) {
                Some(&i) => Ok(Poly::var(self.nvars, i)),
                None => Err(syntax(line, column, format!("unknown identifier '{}'", name))),
            },
            Tok::LParen => {
                let e = self.parse_expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(e)
            }
            _ => Err(syntax(line, column, "expected a number, variable, or parenthesized expression")),
        }
    }
}

/// Parses a germ tuple. With `declared` the identifiers must come from that
/// list (in that variable order); otherwise variables are inferred in order
/// of first appearance.
pub fn parse_germ(text: &str, declared: Option<&[String]>) -> Result<GermExpression, Error> {
    let toks = lex(text)?;
    let variables: Vec<String> = match declared {
        Some(vs) => {
            for v in vs {
                if !valid_name(v) {
                    return Err(Error::BadNames(format!("'{}' is not a valid variable name", v)));
                }
            }
            let mut seen = std::collections::HashSet::new();
            for v in vs {
                if !seen.insert(v.clone()) {
                    return Err(Error::BadNames(format!("duplicate variable name '{}'", v)));
                }
            }
            vs.to_vec()
        }
        None => {
            let mut out: Vec<String> = Vec::new();
            for s in &toks {
                if let Tok::Ident(name) = &s.tok {
                    if !out.iter().any(|v| v == name) {
                        out.push(name.clone());
                    }
                }
            }
            out
        }
    };
    if variables.is_empty() {
        return Err(syntax(1, 1, "no variables: declare them explicitly or use at least one"));
    }
    let vars: HashMap<String, usize> =
        variables.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
    let mut parser = Parser { toks: &toks, pos: 0, vars, nvars: variables.len() };

    parser.expect(Tok::LParen, "'('")?;
    let mut comps: Vec<(Poly, usize, usize)> = Vec::new();
    loop {
        let (l, c) = match parser.peek() {
            Some(s) => (s.line, s.column),
            None => parser.end_position(),
        };
        let e = parser.parse_expr()?;
        comps.push((e, l, c));
        match parser.peek() {
            Some(s) if s.tok == Tok::Comma => {
                parser.pos += 1;
            }
            Some(s) if s.tok == Tok::RParen => {
                parser.pos += 1;
                break;
            }
            Some(s) => return Err(syntax(s.line, s.column, "expected ',' or ')'")),
            None => {
                let (l, c) = parser.end_position();
                return Err(syntax(l, c, "expected ',' or ')' before end of input"));
            }
        }
    }
    if let Some(s) = parser.peek() {
        return Err(syntax(s.line, s.column, "unexpected input after the closing ')'"));
    }

    let positions: Vec<(usize, usize)> = comps.iter().map(|(_, l, c)| (*l, *c)).collect();
    let germ = MapGerm::new(comps.into_iter().map(|(p, _, _)| p).collect()).map_err(|e| {
        match e {
            Error::NonzeroConstantTerm { component } => {
                let (l, c) = positions[component];
                syntax(l, c, "component has a nonzero constant term")
            }
            other => other,
        }
    })?;
    Ok(GermExpression { source: text.to_string(), germ, variables })
}

/// Renders a germ as a tuple expression in the given variable names; the
/// output parses back to the identical germ.
pub fn render_germ(f: &MapGerm, names: &[String]) -> Result<String, Error> {
    if names.len() != f.nvars() {
        return Err(Error::BadNames(format!(
            "{} names supplied for {} variables",
            names.len(),
            f.nvars()
        )));
    }
    let comps: Vec<String> =
        f.components().iter().map(|p| p.display(names).to_string()).collect();
    Ok(format!("({})", comps.join(", ")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat_frac;

    fn vars(list: &[&str]) -> Vec<String> {
        list.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn parses_a_plane_germ() {
        let g = parse_germ("(x, y^4 + x*y)", None).unwrap();
        assert_eq!(g.variables(), &vars(&["x", "y"])[..]);
        let x = Poly::var(2, 0);
        let y = Poly::var(2, 1);
        let expected = MapGerm::new(vec![x.clone(), y.pow(4).add(&x.mul(&y))]).unwrap();
        assert_eq!(g.germ(), &expected);
    }

    #[test]
    fn parses_the_preform_example() {
        let g = parse_germ("(x, y, z^4 + (x^2 - y^2)*z + y^2*z^2)", None).unwrap();
        assert_eq!(g.variables(), &vars(&["x", "y", "z"])[..]);
        let x = Poly::var(3, 0);
        let y = Poly::var(3, 1);
        let z = Poly::var(3, 2);
        let third = z
            .pow(4)
            .add(&x.pow(2).sub(&y.pow(2)).mul(&z))
            .add(&y.pow(2).mul(&z.pow(2)));
        let expected = MapGerm::new(vec![x, y, third]).unwrap();
        assert_eq!(g.germ(), &expected);
    }

    #[test]
    fn rational_literals_and_signs() {
        let g = parse_germ("(-1/2*t^3 + 2*t^2)", None).unwrap();
        let t = Poly::var(1, 0);
        let expected = MapGerm::new(vec![t
            .pow(3)
            .scale(&rat_frac(-1, 2))
            .add(&t.pow(2).scale(&rat_frac(2, 1)))])
        .unwrap();
        assert_eq!(g.germ(), &expected);
    }

    #[test]
    fn constant_term_is_a_positioned_error() {
        let e = parse_germ("(x, y^4 + 1)", None).unwrap_err();
        match e {
            Error::Syntax { line, column, message } => {
                assert_eq!(line, 1);
                assert_eq!(column, 5);
                assert!(message.contains("constant term"));
            }
            other => panic!("expected a syntax error, got {:?}", other),
        }
    }

    #[test]
    fn unknown_identifier_under_declared_variables() {
        let e = parse_germ("(x, w)", Some(&vars(&["x", "y"]))).unwrap_err();
        match e {
            Error::Syntax { column, message, .. } => {
                assert_eq!(column, 5);
                assert!(message.contains("unknown identifier"));
            }
            other => panic!("expected a syntax error, got {:?}", other),
        }
    }

    #[test]
    fn juxtaposition_is_rejected() {
        assert!(matches!(parse_germ("(x y)", None), Err(Error::Syntax { .. })));
        assert!(matches!(parse_germ("(2x)", None), Err(Error::Syntax { .. })));
    }

    #[test]
    fn dangling_operator_is_positioned() {
        let e = parse_germ("(x, y^)", None).unwrap_err();
        match e {
            Error::Syntax { column, .. } => assert_eq!(column, 7),
            other => panic!("expected a syntax error, got {:?}", other),
        }
    }

    #[test]
    fn round_trips_through_rendering() {
        for text in [
            "(x, y^4 + x*y)",
            "(x, y, z^4 + (x^2 - y^2)*z + y^2*z^2)",
            "(-1/2*t^3 + 2*t, t^2)",
            "(y, x)",
        ] {
            let g = parse_germ(text, None).unwrap();
            let printed = render_germ(g.germ(), g.variables()).unwrap();
            let again = parse_germ(&printed, Some(g.variables())).unwrap();
            assert_eq!(g.germ(), again.germ(), "round-trip failed for {}", text);
        }
    }
}
