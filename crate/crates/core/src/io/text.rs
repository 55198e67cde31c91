//! Text syntax for forms.
//!
//! ```text
//! form  := [sign] term {("+"|"-") term}
//! term  := poly | poly "*"? basis | basis
//! basis := "d" var {"^" "d" var}
//! poly  := "(" polynomial ")" | rational
//! ```
//!
//! Variables are `x1..xn`. For `n <= 3` the aliases `x, y, z` name
//! `x1, x2, x3`; for `n = 4` the aliases `t, x, y, z` name `x1..x4`.
//! Text is always in absolute coordinates.

use num_traits::One;

use crate::error::{Error, Result};
use crate::forms::{Blade, Form};
use crate::polyring::{parse_rational, Context, Poly, Rational};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rational),
    Var(usize),
    Diff(usize),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    End,
}

fn describe(t: &Tok) -> &'static str {
    match t {
        Tok::Num(_) => "a rational literal",
        Tok::Var(_) => "a variable",
        Tok::Diff(_) => "a differential",
        Tok::Plus => "`+`",
        Tok::Minus => "`-`",
        Tok::Star => "`*`",
        Tok::Caret => "`^`",
        Tok::LParen => "`(`",
        Tok::RParen => "`)`",
        Tok::End => "end of input",
    }
}

fn alias_axis(c: char, n: usize) -> Option<usize> {
    match (n, c) {
        (4, 't') => Some(0),
        (4, 'x') => Some(1),
        (4, 'y') => Some(2),
        (4, 'z') => Some(3),
        (1..=3, 'x') => Some(0),
        (1..=3, 'y') => Some(1),
        (1..=3, 'z') => Some(2),
        _ => None,
    }
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
    n: usize,
}

impl<'a> Lexer<'a> {
    fn peek_char(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek_char() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> &'a str {
        let start = self.pos;
        while let Some(c) = self.peek_char() {
            if f(c) {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
        &self.src[start..self.pos]
    }

    /// Reads a variable name at the current position; returns the 0-based axis.
    fn variable(&mut self) -> Result<usize> {
        let start = self.pos;
        let Some(c) = self.peek_char() else {
            return Err(Error::Syntax {
                pos: start,
                expected: "a variable name".into(),
            });
        };
        self.pos += c.len_utf8();
        if c == 'x' {
            let digits = self.take_while(|c| c.is_ascii_digit());
            if !digits.is_empty() {
                let axis: usize = digits.parse().map_err(|_| Error::Syntax {
                    pos: start,
                    expected: "a variable index".into(),
                })?;
                if axis == 0 || axis > self.n {
                    return Err(Error::AxisOutOfRange { axis, dim: self.n });
                }
                return Ok(axis - 1);
            }
        }
        alias_axis(c, self.n).ok_or_else(|| Error::Syntax {
            pos: start,
            expected: format!("a variable x1..x{}", self.n),
        })
    }

    fn next(&mut self) -> Result<(usize, Tok)> {
        self.skip_ws();
        let start = self.pos;
        let Some(c) = self.peek_char() else {
            return Ok((start, Tok::End));
        };
        let single = |t| Ok((start, t));
        match c {
            '+' | '-' | '*' | '^' | '(' | ')' => {
                self.pos += 1;
                single(match c {
                    '+' => Tok::Plus,
                    '-' => Tok::Minus,
                    '*' => Tok::Star,
                    '^' => Tok::Caret,
                    '(' => Tok::LParen,
                    _ => Tok::RParen,
                })
            }
            '0'..='9' => {
                self.take_while(|c| c.is_ascii_digit());
                let rest = &self.src[self.pos..];
                if rest.starts_with('/') && rest[1..].starts_with(|c: char| c.is_ascii_digit()) {
                    self.pos += 1;
                    self.take_while(|c| c.is_ascii_digit());
                }
                if self.peek_char().is_some_and(|c| matches!(c, '.' | 'e' | 'E')) {
                    self.take_while(|c| c.is_ascii_alphanumeric() || matches!(c, '.' | '+' | '-'));
                    return Err(Error::NonRationalLiteral(self.src[start..self.pos].to_string()));
                }
                let lit = &self.src[start..self.pos];
                Ok((start, Tok::Num(parse_rational(lit)?)))
            }
            '.' => {
                self.take_while(|c| c.is_ascii_digit() || c == '.');
                Err(Error::NonRationalLiteral(self.src[start..self.pos].to_string()))
            }
            'd' => {
                self.pos += 1;
                let axis = self.variable()?;
                Ok((start, Tok::Diff(axis)))
            }
            _ => {
                let axis = self.variable()?;
                Ok((start, Tok::Var(axis)))
            }
        }
    }
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    n: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn pos(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].1.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &str) -> Result<T> {
        Err(Error::Syntax {
            pos: self.pos(),
            expected: format!("{expected}, found {}", describe(self.peek())),
        })
    }

    fn expect(&mut self, t: Tok) -> Result<()> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            self.fail(describe(&t))
        }
    }

    fn starts_atom(&self) -> bool {
        matches!(self.peek(), Tok::Num(_) | Tok::Var(_) | Tok::LParen)
    }

    fn form(&mut self) -> Result<Form> {
        let mut out = Form::zero(self.n);
        let mut sign = match self.peek() {
            Tok::Minus => {
                self.bump();
                -Rational::one()
            }
            Tok::Plus => {
                self.bump();
                Rational::one()
            }
            _ => Rational::one(),
        };
        loop {
            let t = self.term()?;
            out = &out + &t.scale(&sign);
            sign = match self.peek() {
                Tok::Plus => Rational::one(),
                Tok::Minus => -Rational::one(),
                Tok::End => return Ok(out),
                _ => return self.fail("`+`, `-` or end of input"),
            };
            self.bump();
        }
    }

    fn term(&mut self) -> Result<Form> {
        let coef = match self.peek() {
            Tok::Num(_) | Tok::LParen => {
                let mut c = self.coef_atom()?;
                loop {
                    if *self.peek() == Tok::Star {
                        self.bump();
                        if matches!(self.peek(), Tok::Diff(_)) {
                            break;
                        }
                        c = &c * &self.coef_atom()?;
                    } else if matches!(self.peek(), Tok::Num(_) | Tok::LParen) {
                        c = &c * &self.coef_atom()?;
                    } else {
                        break;
                    }
                }
                Some(c)
            }
            Tok::Diff(_) => None,
            _ => return self.fail("a coefficient or a differential"),
        };
        let basis = if matches!(self.peek(), Tok::Diff(_)) {
            Some(self.basis()?)
        } else {
            None
        };
        let coef = coef.unwrap_or_else(|| Poly::one(self.n));
        Ok(match basis {
            None => Form::scalar(coef),
            Some(None) => Form::zero(self.n),
            Some(Some((blade, sign))) => {
                let p = if sign < 0 { -coef } else { coef };
                Form::term(blade, p)
            }
        })
    }

    /// `None` inside means a repeated differential (the term vanishes).
    fn basis(&mut self) -> Result<Option<(Blade, i8)>> {
        let mut axes = Vec::new();
        loop {
            match *self.peek() {
                Tok::Diff(a) => axes.push(a),
                _ => return self.fail("a differential such as dx1"),
            }
            self.bump();
            if *self.peek() == Tok::Caret {
                self.bump();
            } else {
                break;
            }
        }
        Ok(Blade::from_axes(&axes))
    }

    fn coef_atom(&mut self) -> Result<Poly> {
        match self.peek().clone() {
            Tok::Num(r) => {
                self.bump();
                Ok(Poly::constant(self.n, r))
            }
            Tok::LParen => {
                self.bump();
                let p = self.poly_expr()?;
                self.expect(Tok::RParen)?;
                Ok(p)
            }
            _ => self.fail("a rational, `(` or a differential"),
        }
    }

    fn poly_expr(&mut self) -> Result<Poly> {
        let mut sign = Rational::one();
        match self.peek() {
            Tok::Minus => {
                self.bump();
                sign = -sign;
            }
            Tok::Plus => {
                self.bump();
            }
            _ => {}
        }
        let mut acc = Poly::zero(self.n);
        loop {
            acc = &acc + &self.poly_term()?.scale(&sign);
            match self.peek() {
                Tok::Plus => sign = Rational::one(),
                Tok::Minus => sign = -Rational::one(),
                _ => return Ok(acc),
            }
            self.bump();
        }
    }

    fn poly_term(&mut self) -> Result<Poly> {
        let mut acc = self.poly_factor()?;
        loop {
            if *self.peek() == Tok::Star {
                self.bump();
                acc = &acc * &self.poly_factor()?;
            } else if self.starts_atom() {
                acc = &acc * &self.poly_factor()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn poly_factor(&mut self) -> Result<Poly> {
        if !self.starts_atom() {
            return self.fail("a number, variable or `(`");
        }
        let base = match self.bump() {
            Tok::Num(r) => Poly::constant(self.n, r),
            Tok::Var(a) => Poly::var(self.n, a),
            _ => {
                let p = self.poly_expr()?;
                self.expect(Tok::RParen)?;
                p
            }
        };
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let e = match self.peek() {
            Tok::Num(r) if r.is_integer() => r.to_integer(),
            _ => return self.fail("a non-negative integer exponent"),
        };
        self.bump();
        let e: u32 = e.try_into().map_err(|_| Error::Syntax {
            pos: self.pos(),
            expected: "an exponent below 2^32".into(),
        })?;
        let mut out = Poly::one(self.n);
        for _ in 0..e {
            out = &out * &base;
        }
        Ok(out)
    }
}

/// Parses form text in absolute coordinates and rebases it to the chart center.
pub fn parse_form(text: &str, ctx: &Context) -> Result<Form> {
    let n = ctx.dim();
    let mut lexer = Lexer { src: text, pos: 0, n };
    let mut toks = Vec::new();
    loop {
        let (p, t) = lexer.next()?;
        let end = t == Tok::End;
        toks.push((p, t));
        if end {
            break;
        }
    }
    let mut parser = Parser { toks, at: 0, n };
    let absolute = parser.form()?;
    Ok(absolute.map_coeffs(|p| ctx.from_absolute(p)))
}

/// Canonical text in absolute coordinates: `(poly) dx1^dx2 + ...`, grade 0
/// as `(poly)`, the zero form as `0`.
pub fn format_form(form: &Form, ctx: &Context) -> String {
    let parts: Vec<String> = form
        .components()
        .map(|(b, p)| {
            let abs = ctx.to_absolute(p);
            if b.grade() == 0 {
                format!("({abs})")
            } else {
                let basis: Vec<String> = b.axes().map(|a| format!("dx{}", a + 1)).collect();
                format!("({abs}) {}", basis.join("^"))
            }
        })
        .collect();
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ")
    }
}
