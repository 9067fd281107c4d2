//! Recursive-descent parser for polynomial expressions.
//!
//! Grammar: sums and differences of products of powers of atoms, where an
//! atom is a number, a variable `x<i>`, `sqrt(<int>)`, or a parenthesized
//! expression. Division is by nonzero constants only.

use std::collections::BTreeMap;
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;

use super::Form;
use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};

/// Sparse polynomial with trailing-zero-trimmed exponent vectors.
pub(crate) type Poly = BTreeMap<Vec<u32>, Scalar>;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Var(usize),
    Sqrt,
    LParen,
    RParen,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
}

fn syntax(pos: usize, msg: impl Into<String>) -> Error {
    Error::Syntax {
        pos,
        msg: msg.into(),
    }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        match c {
            _ if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '0'..='9' | '.' => {
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                if s.matches('.').count() > 1 || s == "." {
                    return Err(syntax(start, format!("malformed number '{s}'")));
                }
                out.push((start, Tok::Num(s)));
                continue;
            }
            'x' | 'X' => {
                i += 1;
                let ds = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                if ds == i {
                    return Err(syntax(start, "expected variable index after 'x'"));
                }
                let s: String = chars[ds..i].iter().collect();
                let k: usize = s
                    .parse()
                    .map_err(|_| syntax(start, "variable index too large"))?;
                if k == 0 {
                    return Err(syntax(start, "variables are numbered from x1"));
                }
                out.push((start, Tok::Var(k - 1)));
                continue;
            }
            's' => {
                let word: String = chars[i..].iter().take(4).collect();
                if word != "sqrt" {
                    return Err(syntax(start, "unknown identifier"));
                }
                i += 4;
                out.push((start, Tok::Sqrt));
                continue;
            }
            '(' => out.push((start, Tok::LParen)),
            ')' => out.push((start, Tok::RParen)),
            '+' => out.push((start, Tok::Plus)),
            '-' => out.push((start, Tok::Minus)),
            '*' => out.push((start, Tok::Star)),
            '/' => out.push((start, Tok::Slash)),
            '^' => out.push((start, Tok::Caret)),
            _ => return Err(syntax(start, format!("unexpected character '{c}'"))),
        }
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    field: &'a Field,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        let at = self.here();
        match self.bump() {
            Some(t) if t == want => Ok(()),
            _ => Err(syntax(at, format!("expected {what}"))),
        }
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = Poly::new();
        let mut sign = match self.peek() {
            Some(Tok::Plus) => {
                self.bump();
                1
            }
            Some(Tok::Minus) => {
                self.bump();
                -1
            }
            _ => 1,
        };
        loop {
            let t = self.term()?;
            if sign < 0 {
                add_into(&mut acc, &negate(&t));
            } else {
                add_into(&mut acc, &t);
            }
            sign = match self.peek() {
                Some(Tok::Plus) => 1,
                Some(Tok::Minus) => -1,
                _ => break,
            };
            self.bump();
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    let rhs = self.power()?;
                    acc = mul(&acc, &rhs);
                }
                Some(Tok::Slash) => {
                    let at = self.here();
                    self.bump();
                    let rhs = self.power()?;
                    let c = constant_of(&rhs, self.field)
                        .ok_or_else(|| syntax(at, "division by a non-constant"))?;
                    let inv = c.inv().map_err(|_| Error::DivisionByZero)?;
                    acc = scale(&acc, &inv);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.bump();
        let at = self.here();
        let k = match self.bump() {
            Some(Tok::Num(s)) if !s.contains('.') => s
                .parse::<u32>()
                .map_err(|_| syntax(at, "exponent too large"))?,
            _ => return Err(syntax(at, "expected a nonnegative integer exponent")),
        };
        let mut out = constant(self.field.one());
        for _ in 0..k {
            out = mul(&out, &base);
        }
        Ok(out)
    }

    fn atom(&mut self) -> Result<Poly> {
        let at = self.here();
        match self.bump() {
            Some(Tok::Num(s)) => Ok(constant(number(&s, self.field, at)?)),
            Some(Tok::Var(i)) => {
                let mut e = vec![0u32; i + 1];
                e[i] = 1;
                Ok(Poly::from([(e, self.field.one())]))
            }
            Some(Tok::Sqrt) => {
                self.expect(Tok::LParen, "'(' after sqrt")?;
                let neg = match self.peek() {
                    Some(Tok::Minus) => {
                        self.bump();
                        true
                    }
                    Some(Tok::Plus) => {
                        self.bump();
                        false
                    }
                    _ => false,
                };
                let nat = self.here();
                let m = match self.bump() {
                    Some(Tok::Num(s)) if !s.contains('.') => s
                        .parse::<i64>()
                        .map_err(|_| syntax(nat, "radicand too large"))?,
                    _ => return Err(syntax(nat, "sqrt takes an integer literal")),
                };
                let m = if neg { -m } else { m };
                self.expect(Tok::RParen, "')'")?;
                let root = self.field.sqrt_int(m).ok_or(Error::UnknownRadical(m))?;
                Ok(constant(root))
            }
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            Some(Tok::Minus) => {
                let inner = self.power()?;
                Ok(negate(&inner))
            }
            Some(Tok::Plus) => self.power(),
            Some(_) => Err(syntax(at, "unexpected token")),
            None => Err(syntax(at, "unexpected end of input")),
        }
    }
}

fn number(s: &str, field: &Field, at: usize) -> Result<Scalar> {
    if !field.is_exact() {
        let v = f64::from_str(s).map_err(|_| syntax(at, format!("malformed number '{s}'")))?;
        return Ok(field.complex(num::complex::Complex64::new(v, 0.0)).expect("float field"));
    }
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    let digits = format!("{int}{frac}");
    let digits = if digits.is_empty() { "0".to_string() } else { digits };
    let numer =
        BigInt::from_str(&digits).map_err(|_| syntax(at, format!("malformed number '{s}'")))?;
    let denom = num::pow(BigInt::from(10), frac.len());
    Ok(field.rational(BigRational::new(numer, denom)))
}

fn trim(mut e: Vec<u32>) -> Vec<u32> {
    while e.last() == Some(&0) {
        e.pop();
    }
    e
}

fn constant(c: Scalar) -> Poly {
    let mut p = Poly::new();
    if !c.is_exact_zero() {
        p.insert(Vec::new(), c);
    }
    p
}

fn constant_of(p: &Poly, field: &Field) -> Option<Scalar> {
    match p.len() {
        0 => Some(field.zero()),
        1 => p.get(&Vec::new()).cloned(),
        _ => None,
    }
}

fn negate(p: &Poly) -> Poly {
    p.iter().map(|(e, c)| (e.clone(), -c)).collect()
}

fn scale(p: &Poly, s: &Scalar) -> Poly {
    p.iter()
        .map(|(e, c)| (e.clone(), c * s))
        .filter(|(_, c)| !c.is_exact_zero())
        .collect()
}

fn add_into(acc: &mut Poly, p: &Poly) {
    for (e, c) in p {
        let sum = match acc.remove(e) {
            Some(old) => &old + c,
            None => c.clone(),
        };
        if !sum.is_exact_zero() {
            acc.insert(e.clone(), sum);
        }
    }
}

fn mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let len = ea.len().max(eb.len());
            let e: Vec<u32> = (0..len)
                .map(|i| ea.get(i).copied().unwrap_or(0) + eb.get(i).copied().unwrap_or(0))
                .collect();
            add_into(&mut out, &Poly::from([(trim(e), ca * cb)]));
        }
    }
    out
}

/// Parses an arbitrary polynomial expression into a sparse map.
pub(crate) fn parse_polynomial(text: &str, field: &Field) -> Result<Poly> {
    let toks = tokenize(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.chars().count(),
        field,
    };
    if p.toks.is_empty() {
        return Err(syntax(0, "empty expression"));
    }
    let poly = p.expr()?;
    if p.pos < p.toks.len() {
        return Err(syntax(p.here(), "unexpected trailing input"));
    }
    Ok(poly
        .into_iter()
        .filter(|(_, c)| !field.is_zero(c))
        .collect())
}

fn homogeneous(poly: &Poly, n_override: Option<usize>, field: &Field) -> Result<Form> {
    let n_vars = poly.keys().map(|e| e.len()).max().unwrap_or(0);
    let n = match n_override {
        Some(n) if n < n_vars => {
            return Err(Error::DimensionMismatch(format!(
                "expression uses x{n_vars} but only {n} variables were requested"
            )))
        }
        Some(n) => n,
        None => n_vars,
    };
    let mut degrees = poly.keys().map(|e| e.iter().sum::<u32>());
    let Some(d) = degrees.next() else {
        return Err(syntax(0, "polynomial is identically zero"));
    };
    if degrees.any(|k| k != d) {
        return Err(Error::NotHomogeneous);
    }
    let mut f = Form::zero(n, d, field);
    for (e, c) in poly {
        let mut full = e.clone();
        full.resize(n, 0);
        f.add_term(full, c.clone());
    }
    Ok(f)
}

/// Parses a homogeneous form of degree at least 3; `n` is the highest variable index.
pub fn parse_form(text: &str, field: &Field) -> Result<Form> {
    let f = homogeneous(&parse_polynomial(text, field)?, None, field)?;
    if f.d() < 3 {
        return Err(Error::DegreeTooLow(f.d()));
    }
    Ok(f)
}

/// As [`parse_form`], in exactly `n` variables.
pub fn parse_form_with_vars(text: &str, field: &Field, n: usize) -> Result<Form> {
    let f = homogeneous(&parse_polynomial(text, field)?, Some(n), field)?;
    if f.d() < 3 {
        return Err(Error::DegreeTooLow(f.d()));
    }
    Ok(f)
}

/// Parses a linear form in `n` variables into its coefficient row.
pub fn parse_linear_form(text: &str, field: &Field, n: usize) -> Result<Vec<Scalar>> {
    let f = homogeneous(&parse_polynomial(text, field)?, Some(n), field)?;
    if f.d() != 1 {
        return Err(Error::DimensionMismatch(format!(
            "expected a linear form, got degree {}",
            f.d()
        )));
    }
    let field = f.field().clone();
    Ok((0..n)
        .map(|i| {
            let mut e = vec![0u32; n];
            e[i] = 1;
            field.lift(&f.coeff(&e))
        })
        .collect())
}

/// Parses a constant expression such as `3/2`, `-sqrt(2)` or `(1+sqrt(5))/2`.
pub fn parse_scalar(text: &str, field: &Field) -> Result<Scalar> {
    let poly = parse_polynomial(text, field)?;
    if poly.keys().any(|e| !e.is_empty()) {
        return Err(syntax(0, "expected a constant"));
    }
    Ok(poly
        .get(&Vec::new())
        .map(|c| field.lift(c))
        .unwrap_or_else(|| field.zero()))
}
