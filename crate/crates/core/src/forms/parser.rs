//! Recursive-descent parser for polynomial expressions.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := base ('^' nat)?
//! base   := var | integer ['/' integer] | '(' expr ')'
//! var    := 'x' digits | 'x' | 'y' | 'z' | 't' | 'w' | 'u'
//! ```
//!
//! Whitespace is ignored. Products must be written with `*`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{Form, Monomial};
use crate::error::{Error, Result};
use crate::exactalg::Field;

/// Letter aliases, in variable order: `x ↦ x0, y ↦ x1, …, u ↦ x5`.
pub const VARIABLE_LETTERS: [char; 6] = ['x', 'y', 'z', 't', 'w', 'u'];

/// Largest exponent accepted after `^`.
const MAX_EXPONENT: u32 = 1000;

type Poly = BTreeMap<Vec<u32>, BigRational>;

/// Parses a homogeneous form with rational coefficients.
pub fn parse_form(text: &str, num_vars: usize) -> Result<Form> {
    parse_form_in(text, num_vars, Field::Rational)
}

/// Parses over `Q`, then maps the coefficients into `field`.
pub fn parse_form_in(text: &str, num_vars: usize, field: Field) -> Result<Form> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, num_vars };
    let poly = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error(format!("unexpected character {:?}", p.src[p.pos] as char)));
    }
    let mut degrees: Vec<u32> = poly.keys().map(|e| e.iter().sum()).collect();
    degrees.sort_unstable_by(|a, b| b.cmp(a));
    degrees.dedup();
    if let [first, second, ..] = degrees[..] {
        return Err(Error::Inhomogeneous { first, second });
    }
    let degree = degrees.first().copied().unwrap_or(0);
    let terms = poly
        .into_iter()
        .map(|(e, c)| Ok((Monomial::new(e), field.from_rational(&c)?)))
        .collect::<Result<Vec<_>>>()?;
    Form::from_terms(num_vars, degree, field, terms)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    num_vars: usize,
}

impl Parser<'_> {
    fn error(&self, message: impl Into<String>) -> Error {
        Error::Syntax { position: self.pos, message: message.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut negate = false;
        match self.peek() {
            Some(b'+') => self.pos += 1,
            Some(b'-') => {
                self.pos += 1;
                negate = true;
            }
            _ => {}
        }
        let mut acc = self.term()?;
        if negate {
            acc = scale(&acc, &-BigRational::one());
        }
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let t = self.term()?;
                    add_into(&mut acc, &t, false);
                }
                Some(b'-') => {
                    self.pos += 1;
                    let t = self.term()?;
                    add_into(&mut acc, &t, true);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let f = self.factor()?;
            acc = mul(&acc, &f);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly> {
        let base = self.base()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            let digits = self.digits();
            if digits.is_empty() {
                return Err(self.error("expected a natural number after '^'"));
            }
            let e: u32 = digits
                .parse()
                .ok()
                .filter(|&e| e <= MAX_EXPONENT)
                .ok_or_else(|| Error::Syntax { position: start, message: format!("exponent {digits} too large") })?;
            return Ok(pow(&base, e, self.num_vars));
        }
        Ok(base)
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn base(&mut self) -> Result<Poly> {
        let Some(c) = self.peek() else {
            return Err(self.error("unexpected end of input"));
        };
        match c {
            b'(' => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            b'0'..=b'9' => {
                let n: BigInt = self.digits().parse().expect("digits");
                let mut value = BigRational::from_integer(n);
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    self.skip_ws();
                    let d = self.digits();
                    if d.is_empty() {
                        return Err(self.error("expected a denominator after '/'"));
                    }
                    let d: BigInt = d.parse().expect("digits");
                    if d.is_zero() {
                        return Err(self.error("zero denominator"));
                    }
                    value /= BigRational::from_integer(d);
                }
                Ok(constant(value, self.num_vars))
            }
            c if c.is_ascii_alphabetic() => {
                let start = self.pos;
                self.pos += 1;
                let index = if c == b'x' && self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
                    let d = self.digits();
                    d.parse::<usize>().map_err(|_| Error::Syntax { position: start, message: format!("bad variable x{d}") })?
                } else {
                    VARIABLE_LETTERS.iter().position(|&l| l as u8 == c).ok_or_else(|| Error::Syntax {
                        position: start,
                        message: format!("unknown variable {:?}", c as char),
                    })?
                };
                if self.src.get(self.pos).is_some_and(u8::is_ascii_alphanumeric) {
                    return Err(self.error("implicit multiplication is not supported; write '*'"));
                }
                if index >= self.num_vars {
                    return Err(Error::Syntax {
                        position: start,
                        message: format!("variable x{index} out of range for {} variables", self.num_vars),
                    });
                }
                let mut e = vec![0; self.num_vars];
                e[index] = 1;
                Ok(BTreeMap::from([(e, BigRational::one())]))
            }
            other => Err(self.error(format!("unexpected character {:?}", other as char))),
        }
    }
}

fn constant(c: BigRational, n: usize) -> Poly {
    let mut p = Poly::new();
    if !c.is_zero() {
        p.insert(vec![0; n], c);
    }
    p
}

fn scale(p: &Poly, c: &BigRational) -> Poly {
    p.iter().map(|(e, v)| (e.clone(), v * c)).collect()
}

fn add_into(acc: &mut Poly, other: &Poly, subtract: bool) {
    for (e, v) in other {
        let v = if subtract { -v } else { v.clone() };
        let slot = acc.entry(e.clone()).or_insert_with(BigRational::zero);
        *slot += v;
        if slot.is_zero() {
            acc.remove(e);
        }
    }
}

fn mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (ea, va) in a {
        for (eb, vb) in b {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            let slot = out.entry(e.clone()).or_insert_with(BigRational::zero);
            *slot += va * vb;
            if slot.is_zero() {
                out.remove(&e);
            }
        }
    }
    out
}

fn pow(base: &Poly, mut e: u32, n: usize) -> Poly {
    let mut acc = constant(BigRational::one(), n);
    let mut b = base.clone();
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(&acc, &b);
        }
        e >>= 1;
        if e > 0 {
            b = mul(&b, &b);
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_forms() {
        let f = parse_form("x0^2 + 3*x1*x2", 3).unwrap();
        assert_eq!((f.degree(), f.num_terms()), (2, 2));
        let g = parse_form("(x0+x1)^2", 2).unwrap();
        assert_eq!(g, parse_form("x0^2 + 2*x0*x1 + x1^2", 2).unwrap());
    }

    #[test]
    fn inhomogeneous_is_rejected() {
        assert_eq!(parse_form("x0^2 + x1", 2), Err(Error::Inhomogeneous { first: 2, second: 1 }));
    }

    #[test]
    fn cancellation_before_homogeneity_check() {
        let f = parse_form("x0^2 - x0^2 + x1", 2).unwrap();
        assert_eq!(f.degree(), 1);
    }

    #[test]
    fn letter_aliases() {
        assert_eq!(parse_form("x*y + z*t", 4).unwrap(), parse_form("x0*x1 + x2*x3", 4).unwrap());
        assert_eq!(parse_form("w + u", 6).unwrap(), parse_form("x4 + x5", 6).unwrap());
    }

    #[test]
    fn syntax_errors_carry_positions() {
        assert!(matches!(parse_form("x0 + * x1", 2), Err(Error::Syntax { position: 5, .. })));
        assert!(matches!(parse_form("2x0", 2), Err(Error::Syntax { .. })));
        assert!(matches!(parse_form("x0 x1", 2), Err(Error::Syntax { position: 3, .. })));
        assert!(matches!(parse_form("(x0 + x1", 2), Err(Error::Syntax { position: 8, .. })));
        assert!(matches!(parse_form("x5", 3), Err(Error::Syntax { position: 0, .. })));
        assert!(matches!(parse_form("xy", 3), Err(Error::Syntax { .. })));
    }

    #[test]
    fn rational_literals() {
        let f = parse_form("1/2*x0 + 2/4*x1", 2).unwrap();
        assert_eq!(f.to_string(), "1/2*x0 + 1/2*x1");
        assert!(parse_form("1/0*x0", 2).is_err());
    }

    #[test]
    fn zero_polynomial() {
        let f = parse_form("0", 3).unwrap();
        assert!(f.is_zero());
        assert_eq!(f.degree(), 0);
    }

    #[test]
    fn prime_field_parse() {
        let f = parse_form_in("x0 - x1", 2, Field::prime(5).unwrap()).unwrap();
        assert_eq!(f.to_string(), "x0 + 4*x1");
        assert_eq!(parse_form_in(&f.to_string(), 2, f.field()).unwrap(), f);
    }
}
