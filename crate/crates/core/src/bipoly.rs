//! Sparse bivariate polynomials in `x`, `y` with arbitrary-precision integer
//! coefficients.
//!
//! The canonical text form lists terms by descending `x` exponent and, within
//! one `x` exponent, ascending `y` exponent:
//! `x^3 + 3*x^2 + 2*x + 4*x*y + 2*y + 3*y^2 + y^3`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct BiPoly {
    /// (x exponent, y exponent) -> non-zero coefficient
    terms: BTreeMap<(u32, u32), BigInt>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("polynomial parse error at byte {position}: {message}")]
pub struct PolyParseError {
    pub position: usize,
    pub message: String,
}

impl BiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(0, 0, c)
    }

    pub fn x() -> Self {
        Self::monomial(1, 0, 1)
    }

    pub fn y() -> Self {
        Self::monomial(0, 1, 1)
    }

    pub fn monomial(i: u32, j: u32, c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero();
        p.add_term(i, j, c.into());
        p
    }

    /// `y^lo + y^(lo+1) + ... + y^(hi-1)`.
    pub fn y_range_sum(lo: u32, hi: u32) -> Self {
        let mut p = Self::zero();
        for j in lo..hi {
            p.add_term(0, j, BigInt::one());
        }
        p
    }

    /// All `(i, j, coefficient)` triples in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (u32, u32, &BigInt)> {
        canonical_order(&self.terms).into_iter()
    }

    pub fn coefficient(&self, i: u32, j: u32) -> BigInt {
        self.terms.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest `r` with `y^r` dividing `self`; `None` for the zero polynomial.
    pub fn y_valuation(&self) -> Option<u32> {
        self.terms.keys().map(|&(_, j)| j).min()
    }

    fn add_term(&mut self, i: u32, j: u32, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry((i, j)).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn add_assign_ref(&mut self, other: &BiPoly) {
        for (&(i, j), c) in &other.terms {
            self.add_term(i, j, c.clone());
        }
    }

    pub fn mul_monomial(&self, a: u32, b: u32) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(&(i, j), c)| ((i + a, j + b), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(&e, c)| (e, c * k)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Exact evaluation at a rational point.
    pub fn evaluate(&self, x0: &BigRational, y0: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for (&(i, j), c) in &self.terms {
            let term = BigRational::from_integer(c.clone()) * Pow::pow(x0, i) * Pow::pow(y0, j);
            acc += term;
        }
        acc
    }

    pub fn evaluate_int(&self, x0: i64, y0: i64) -> BigInt {
        let (x0, y0) = (BigInt::from(x0), BigInt::from(y0));
        let mut acc = BigInt::zero();
        for (&(i, j), c) in &self.terms {
            acc += c * Pow::pow(&x0, i) * Pow::pow(&y0, j);
        }
        acc
    }
}

fn canonical_order(terms: &BTreeMap<(u32, u32), BigInt>) -> Vec<(u32, u32, &BigInt)> {
    let mut v: Vec<(u32, u32, &BigInt)> = terms.iter().map(|(&(i, j), c)| (i, j, c)).collect();
    v.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    v
}

impl Add for &BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl Add for BiPoly {
    type Output = BiPoly;
    fn add(mut self, rhs: BiPoly) -> BiPoly {
        self.add_assign_ref(&rhs);
        self
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        BiPoly {
            terms: self.terms.iter().map(|(&e, c)| (e, -c)).collect(),
        }
    }
}

impl Sub for &BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: &BiPoly) -> BiPoly {
        self + &(-rhs)
    }
}

impl Sub for BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: BiPoly) -> BiPoly {
        &self - &rhs
    }
}

impl Mul for &BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: &BiPoly) -> BiPoly {
        let mut out = BiPoly::zero();
        for (&(i1, j1), c1) in &self.terms {
            for (&(i2, j2), c2) in &rhs.terms {
                out.add_term(i1 + i2, j1 + j2, c1 * c2);
            }
        }
        out
    }
}

impl Mul for BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: BiPoly) -> BiPoly {
        &self * &rhs
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, var: &str, e: u32) -> fmt::Result {
    match e {
        0 => Ok(()),
        1 => write!(f, "{var}"),
        _ => write!(f, "{var}^{e}"),
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (i, j, c)) in canonical_order(&self.terms).into_iter().enumerate() {
            let neg = c.is_negative();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let mag = c.abs();
            let constant = i == 0 && j == 0;
            if constant {
                write!(f, "{mag}")?;
                continue;
            }
            if !mag.is_one() {
                write!(f, "{mag}*")?;
            }
            write_monomial(f, "x", i)?;
            if i > 0 && j > 0 {
                write!(f, "*")?;
            }
            write_monomial(f, "y", j)?;
        }
        Ok(())
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, message: impl Into<String>) -> PolyParseError {
        PolyParseError {
            position: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn number(&mut self) -> Result<BigInt, PolyParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        let text = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii digits");
        Ok(text.parse().expect("digits parse as integer"))
    }

    fn exponent(&mut self) -> Result<u32, PolyParseError> {
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let at = self.pos;
            let n = self.number()?;
            u32::try_from(n).map_err(|_| PolyParseError {
                position: at,
                message: "exponent out of range".into(),
            })
        } else {
            Ok(1)
        }
    }

    /// factor ('*' factor)*, where factor is an integer, `x[^n]` or `y[^n]`.
    fn term(&mut self) -> Result<(u32, u32, BigInt), PolyParseError> {
        let (mut i, mut j, mut c) = (0u32, 0u32, BigInt::one());
        loop {
            match self.peek() {
                Some(b'x') => {
                    self.pos += 1;
                    i += self.exponent()?;
                }
                Some(b'y') => {
                    self.pos += 1;
                    j += self.exponent()?;
                }
                Some(d) if d.is_ascii_digit() => {
                    c *= self.number()?;
                }
                Some(_) => return Err(self.err("expected a number, `x` or `y`")),
                None => return Err(self.err("unexpected end of input")),
            }
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else {
                return Ok((i, j, c));
            }
        }
    }

    fn poly(&mut self) -> Result<BiPoly, PolyParseError> {
        let mut out = BiPoly::zero();
        let mut sign = BigInt::one();
        if self.peek() == Some(b'-') {
            self.pos += 1;
            sign = -sign;
        }
        loop {
            let (i, j, c) = self.term()?;
            out.add_term(i, j, c * &sign);
            match self.peek() {
                None => return Ok(out),
                Some(b'+') => sign = BigInt::one(),
                Some(b'-') => sign = -BigInt::one(),
                Some(_) => return Err(self.err("expected `+` or `-`")),
            }
            self.pos += 1;
        }
    }
}

impl FromStr for BiPoly {
    type Err = PolyParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Parser { s: s.as_bytes(), pos: 0 }.poly()
    }
}
