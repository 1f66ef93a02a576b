//! Operator DSL and series-file reader/writer.
//!
//! ```text
//! expr   := ('+'|'-')? term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*        division by constants only
//! factor := ('+'|'-')? base ('^' uint)?
//! base   := 'Dt' | 'Dz' | number | 'i' | '(' expr ')'
//! number := decimal | p/q, optional 'i' suffix (no spaces inside)
//! ```
//!
//! Series files: a header `trunc Kt Kz`, then entries `(k,b)=value`
//! separated by newlines or `;`, `#` starting a comment.

use crate::numeric::RationalComplex;
use crate::series_core::BiSeries;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// P(∂t, ∂z) = Σ a_{jα} ∂t^j ∂z^α with exact coefficients.
///
/// Invariants: at least one term, no zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Operator {
    terms: BTreeMap<(u32, u32), RationalComplex>,
}

impl Operator {
    pub fn new(terms: BTreeMap<(u32, u32), RationalComplex>) -> Result<Self, ParseError> {
        let terms: BTreeMap<_, _> = terms.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        if terms.is_empty() {
            return Err(ParseError::EmptyOperator);
        }
        Ok(Self { terms })
    }

    pub fn from_terms(terms: &[((u32, u32), RationalComplex)]) -> Result<Self, ParseError> {
        let mut m: BTreeMap<(u32, u32), RationalComplex> = BTreeMap::new();
        for (k, v) in terms {
            *m.entry(*k).or_default() += v;
        }
        Self::new(m)
    }

    pub fn terms(&self) -> &BTreeMap<(u32, u32), RationalComplex> {
        &self.terms
    }

    pub fn coeff(&self, j: u32, a: u32) -> RationalComplex {
        self.terms.get(&(j, a)).cloned().unwrap_or_default()
    }

    /// M: the largest t-order.
    pub fn t_order(&self) -> u32 {
        self.terms.keys().map(|k| k.0).max().unwrap()
    }

    pub fn z_order(&self) -> u32 {
        self.terms.keys().map(|k| k.1).max().unwrap()
    }

    /// P(λ, ζ) evaluated exactly.
    pub fn eval(&self, lambda: &RationalComplex, zeta: &RationalComplex) -> RationalComplex {
        let mut acc = RationalComplex::zero();
        for (&(j, a), c) in &self.terms {
            acc += &(&(c * &lambda.pow(j)) * &zeta.pow(a));
        }
        acc
    }

    /// Sub-operator restricted to the given keys.
    pub fn restrict(&self, keep: impl Fn(u32, u32) -> bool) -> Option<Self> {
        let terms: BTreeMap<_, _> = self.terms.iter().filter(|(k, _)| keep(k.0, k.1)).map(|(k, v)| (*k, v.clone())).collect();
        (!terms.is_empty()).then_some(Self { terms })
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut m: BTreeMap<(u32, u32), RationalComplex> = BTreeMap::new();
        for (&(j1, a1), x) in &self.terms {
            for (&(j2, a2), y) in &o.terms {
                *m.entry((j1 + j2, a1 + a2)).or_default() += &(x * y);
            }
        }
        Self::new(m).expect("product of nonzero operators is nonzero")
    }
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_operator(self))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at {position}: expected {expected}")]
    SyntaxError { position: usize, expected: String },
    #[error("non-constant coefficient '{name}' at {position}")]
    NonConstantCoefficient { name: String, position: usize },
    #[error("operator is empty (all terms cancel)")]
    EmptyOperator,
    #[error("division by a non-constant expression at {position}")]
    DivisionByOperator { position: usize },
    #[error("division by zero at {position}")]
    DivisionByZero { position: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeriesParseError {
    #[error("line {line}: {message}")]
    SyntaxError { line: usize, message: String },
    #[error("duplicate index ({k},{b})")]
    DuplicateIndex { k: u32, b: u32 },
    #[error("index ({k},{b}) beyond declared truncation ({tt},{tz})")]
    IndexBeyondDeclaredTruncation { k: u32, b: u32, tt: u32, tz: u32 },
}

type Poly = BTreeMap<(u32, u32), RationalComplex>;

fn poly_const(c: RationalComplex) -> Poly {
    let mut p = Poly::new();
    if !c.is_zero() {
        p.insert((0, 0), c);
    }
    p
}

fn poly_add(a: Poly, b: &Poly, sign: i64) -> Poly {
    let mut a = a;
    for (k, v) in b {
        let e = a.entry(*k).or_default();
        if sign > 0 {
            *e += v;
        } else {
            *e -= v;
        }
    }
    a.retain(|_, v| !v.is_zero());
    a
}

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut m = Poly::new();
    for (&(j1, a1), x) in a {
        for (&(j2, a2), y) in b {
            *m.entry((j1 + j2, a1 + a2)).or_default() += &(x * y);
        }
    }
    m.retain(|_, v| !v.is_zero());
    m
}

fn as_constant(p: &Poly) -> Option<RationalComplex> {
    match p.len() {
        0 => Some(RationalComplex::zero()),
        1 => p.get(&(0, 0)).cloned(),
        _ => None,
    }
}

const MAX_EXPONENT: u64 = 512;

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn err(&self, expected: &str) -> ParseError {
        ParseError::SyntaxError { position: self.pos, expected: expected.to_string() }
    }

    fn expr(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let t = self.term()?;
            acc = poly_add(acc, &t, if c == b'+' { 1 } else { -1 });
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let f = self.factor()?;
                    acc = poly_mul(&acc, &f);
                }
                Some(b'/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let f = self.factor()?;
                    let c = as_constant(&f).ok_or(ParseError::DivisionByOperator { position: at })?;
                    if c.is_zero() {
                        return Err(ParseError::DivisionByZero { position: at });
                    }
                    let inv = c.inv();
                    acc = poly_mul(&acc, &poly_const(inv));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Poly, ParseError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                let f = self.factor()?;
                return Ok(poly_mul(&f, &poly_const(RationalComplex::from_int(-1))));
            }
            Some(b'+') => {
                self.pos += 1;
                return self.factor();
            }
            _ => {}
        }
        let base = self.base()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos {
                return Err(self.err("unsigned integer exponent"));
            }
            let txt = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
            let e: u64 = match txt.parse() {
                Ok(e) if e <= MAX_EXPONENT => e,
                _ => {
                    self.pos = start;
                    return Err(self.err(&format!("exponent ≤ {MAX_EXPONENT}")));
                }
            };
            let mut acc = poly_const(RationalComplex::one());
            for _ in 0..e {
                acc = poly_mul(&acc, &base);
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<Poly, ParseError> {
        let Some(c) = self.peek() else {
            return Err(self.err("Dt, Dz, number, i or '('"));
        };
        if c == b'(' {
            self.pos += 1;
            let e = self.expr()?;
            if self.peek() != Some(b')') {
                return Err(self.err("')'"));
            }
            self.pos += 1;
            return Ok(e);
        }
        if c.is_ascii_digit() || c == b'.' {
            return self.number().map(poly_const);
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            let start = self.pos;
            while self.pos < self.s.len() && (self.s[self.pos].is_ascii_alphanumeric() || self.s[self.pos] == b'_') {
                self.pos += 1;
            }
            let name = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
            let mut p = Poly::new();
            match name {
                "Dt" => {
                    p.insert((1, 0), RationalComplex::one());
                }
                "Dz" => {
                    p.insert((0, 1), RationalComplex::one());
                }
                "i" => {
                    p.insert((0, 0), RationalComplex::imag_unit());
                }
                _ => {
                    return Err(ParseError::NonConstantCoefficient { name: name.to_string(), position: start });
                }
            }
            return Ok(p);
        }
        Err(self.err("Dt, Dz, number, i or '('"))
    }

    fn digits(&mut self) -> &'a str {
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos]).unwrap()
    }

    /// decimal `12`, `1.25`, `.5` or rational `p/q`, then optional `i`.
    fn number(&mut self) -> Result<RationalComplex, ParseError> {
        let start = self.pos;
        let int = self.digits();
        let mut val =
            if int.is_empty() { BigRational::zero() } else { BigRational::from_integer(int.parse::<BigInt>().unwrap()) };
        if self.s.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            let frac = self.digits();
            if frac.is_empty() && int.is_empty() {
                self.pos = start;
                return Err(self.err("digits"));
            }
            if !frac.is_empty() {
                let den = BigInt::from(10).pow(frac.len() as u32);
                val += BigRational::new(frac.parse::<BigInt>().unwrap(), den);
            }
        } else if self.s.get(self.pos) == Some(&b'/')
            && self.s.get(self.pos + 1).is_some_and(|c| c.is_ascii_digit())
            && !int.is_empty()
        {
            let slash = self.pos;
            self.pos += 1;
            let den = self.digits().parse::<BigInt>().unwrap();
            if den.is_zero() {
                return Err(ParseError::DivisionByZero { position: slash });
            }
            val /= BigRational::from_integer(den);
        }
        if self.s.get(self.pos) == Some(&b'i') && !self.s.get(self.pos + 1).is_some_and(|c| c.is_ascii_alphanumeric()) {
            self.pos += 1;
            return Ok(RationalComplex::new(BigRational::zero(), val));
        }
        Ok(RationalComplex::real(val))
    }
}

fn parse_poly(text: &str) -> Result<Poly, ParseError> {
    let mut p = Parser { s: text.as_bytes(), pos: 0 };
    let e = p.expr()?;
    if p.peek().is_some() {
        return Err(p.err("operator, ')' or end of input"));
    }
    Ok(e)
}

/// Parse, expand and normalize an operator expression.
pub fn parse_operator(text: &str) -> Result<Operator, ParseError> {
    Operator::new(parse_poly(text)?)
}

/// Parse a constant expression such as `1/2-3i`.
pub fn parse_constant(text: &str) -> Result<RationalComplex, ParseError> {
    let p = parse_poly(text)?;
    as_constant(&p).ok_or(ParseError::SyntaxError { position: 0, expected: "constant".into() })
}

fn fmt_rat(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn monomial(j: u32, a: u32) -> String {
    let p = |name: &str, e: u32| if e == 1 { name.to_string() } else { format!("{name}^{e}") };
    match (j, a) {
        (0, 0) => String::new(),
        (j, 0) => p("Dt", j),
        (0, a) => p("Dz", a),
        (j, a) => format!("{}*{}", p("Dt", j), p("Dz", a)),
    }
}

/// Returns (negative, magnitude text) for a coefficient; magnitude text is
/// empty for unit coefficients in front of a monomial.
fn coeff_text(c: &RationalComplex, has_mono: bool) -> (bool, String) {
    if c.im.is_zero() {
        let neg = c.re.is_negative();
        let m = c.re.abs();
        if m.is_one() && has_mono {
            return (neg, String::new());
        }
        return (neg, fmt_rat(&m));
    }
    if c.re.is_zero() {
        let neg = c.im.is_negative();
        let m = c.im.abs();
        if m.is_one() {
            return (neg, "i".into());
        }
        return (neg, format!("{}i", fmt_rat(&m)));
    }
    let sign = if c.im.is_negative() { '-' } else { '+' };
    let im = c.im.abs();
    let im_s = if im.is_one() { "i".to_string() } else { format!("{}i", fmt_rat(&im)) };
    (false, format!("({}{}{})", fmt_rat(&c.re), sign, im_s))
}

/// Canonical rendering, terms in descending (j, α) order.
pub fn format_operator(op: &Operator) -> String {
    let mut out = String::new();
    for (i, (&(j, a), c)) in op.terms.iter().rev().enumerate() {
        let mono = monomial(j, a);
        let (neg, mag) = coeff_text(c, !mono.is_empty());
        let body = match (mag.is_empty(), mono.is_empty()) {
            (true, _) => mono,
            (false, true) => mag,
            (false, false) => format!("{mag}*{mono}"),
        };
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&body);
    }
    out
}

/// Parse the series file format into a [`BiSeries`].
pub fn parse_series(text: &str) -> Result<BiSeries, SeriesParseError> {
    let mut header: Option<(u32, u32)> = None;
    let mut map: BTreeMap<(u32, u32), RationalComplex> = BTreeMap::new();
    for (ln, raw) in text.lines().enumerate() {
        let line_no = ln + 1;
        let line = raw.split('#').next().unwrap();
        for item in line.split(';') {
            let item = item.trim();
            if item.is_empty() {
                continue;
            }
            let syn = |m: &str| SeriesParseError::SyntaxError { line: line_no, message: m.to_string() };
            if let Some(rest) = item.strip_prefix("trunc") {
                if header.is_some() {
                    return Err(syn("duplicate trunc header"));
                }
                let nums: Vec<&str> = rest.split_whitespace().collect();
                if nums.len() != 2 || !rest.starts_with(char::is_whitespace) {
                    return Err(syn("expected 'trunc Kt Kz'"));
                }
                let kt = nums[0].parse().map_err(|_| syn("truncation must be a non-negative integer"))?;
                let kz = nums[1].parse().map_err(|_| syn("truncation must be a non-negative integer"))?;
                header = Some((kt, kz));
                continue;
            }
            let Some((tt, tz)) = header else {
                return Err(syn("expected 'trunc Kt Kz' header first"));
            };
            let (idx, val) = item.split_once('=').ok_or_else(|| syn("expected '(k,b)=value'"))?;
            let idx = idx.trim();
            let inner = idx.strip_prefix('(').and_then(|s| s.strip_suffix(')')).ok_or_else(|| syn("expected '(k,b)'"))?;
            let (ks, bs) = inner.split_once(',').ok_or_else(|| syn("expected '(k,b)'"))?;
            let k: u32 = ks.trim().parse().map_err(|_| syn("index must be a non-negative integer"))?;
            let b: u32 = bs.trim().parse().map_err(|_| syn("index must be a non-negative integer"))?;
            if k > tt || b > tz {
                return Err(SeriesParseError::IndexBeyondDeclaredTruncation { k, b, tt, tz });
            }
            let v = parse_constant(val.trim()).map_err(|e| syn(&format!("bad value '{}': {e}", val.trim())))?;
            if map.insert((k, b), v).is_some() {
                return Err(SeriesParseError::DuplicateIndex { k, b });
            }
        }
    }
    let (tt, tz) = header.ok_or(SeriesParseError::SyntaxError { line: 0, message: "missing 'trunc Kt Kz' header".into() })?;
    Ok(BiSeries::from_map(map, tt, tz).expect("indices checked against truncation"))
}

/// Canonical series file: header then nonzero entries in ascending (k, β).
pub fn format_series(s: &BiSeries) -> String {
    let mut out = format!("trunc {} {}\n", s.trunc_t(), s.trunc_z());
    for (&(k, b), c) in s.iter() {
        out.push_str(&format!("({k},{b})={c}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rc(n: i64, d: i64) -> RationalComplex {
        RationalComplex::from_frac(n, d)
    }

    fn op(t: &[((u32, u32), RationalComplex)]) -> Operator {
        Operator::from_terms(t).unwrap()
    }

    #[test]
    fn parse_examples() {
        assert_eq!(parse_operator("Dt").unwrap(), op(&[((1, 0), rc(1, 1))]));
        assert_eq!(parse_operator("Dt^2 - Dz^3").unwrap(), op(&[((2, 0), rc(1, 1)), ((0, 3), rc(-1, 1))]));
        assert_eq!(
            parse_operator("(Dt - 2*Dz)*(Dt - Dz/2)").unwrap(),
            op(&[((2, 0), rc(1, 1)), ((1, 1), rc(-5, 2)), ((0, 2), rc(1, 1))])
        );
    }

    #[test]
    fn literals() {
        assert_eq!(parse_constant("0.5").unwrap(), rc(1, 2));
        assert_eq!(
            parse_constant("1/2i").unwrap(),
            RationalComplex::new(BigRational::zero(), BigRational::new(1.into(), 2.into()))
        );
        assert_eq!(parse_constant("1 / 2").unwrap(), rc(1, 2));
        assert_eq!(parse_constant("-i").unwrap(), -RationalComplex::imag_unit());
        assert_eq!(parse_constant("2.5i*i").unwrap(), rc(-5, 2));
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_operator("Dt +"), Err(ParseError::SyntaxError { position: 4, .. })));
        assert!(matches!(parse_operator("a*Dt"), Err(ParseError::NonConstantCoefficient { .. })));
        assert!(matches!(parse_operator("Dt - Dt"), Err(ParseError::EmptyOperator)));
        assert!(matches!(parse_operator("1/Dt"), Err(ParseError::DivisionByOperator { .. })));
        assert!(matches!(parse_operator("Dt/(1-1)"), Err(ParseError::DivisionByZero { .. })));
        assert!(matches!(parse_operator("Dt^"), Err(ParseError::SyntaxError { .. })));
        assert!(matches!(parse_operator("(Dt"), Err(ParseError::SyntaxError { .. })));
        assert!(matches!(parse_operator("2Dt"), Err(ParseError::SyntaxError { .. })));
        assert!(matches!(parse_operator(""), Err(ParseError::SyntaxError { .. })));
    }

    #[test]
    fn format_examples() {
        assert_eq!(format_operator(&op(&[((1, 0), rc(1, 1))])), "Dt");
        assert_eq!(format_operator(&op(&[((2, 0), rc(1, 1)), ((0, 3), rc(-1, 1))])), "Dt^2 - Dz^3");
        let o = op(&[
            ((1, 1), RationalComplex::new(BigRational::new(1.into(), 2.into()), BigRational::from_integer((-3).into()))),
            ((0, 1), RationalComplex::new(BigRational::zero(), BigRational::new((-1).into(), 2.into()))),
            ((0, 0), rc(-7, 1)),
        ]);
        let s = format_operator(&o);
        assert_eq!(s, "(1/2-3i)*Dt*Dz - 1/2i*Dz - 7");
        assert_eq!(parse_operator(&s).unwrap(), o);
    }

    #[test]
    fn series_examples() {
        let s = parse_series("trunc 2 2; (0,0)=1").unwrap();
        assert_eq!((s.trunc_t(), s.trunc_z()), (2, 2));
        assert_eq!(s.get(0, 0), rc(1, 1));
        assert_eq!(s.len(), 1);
        let s = parse_series("trunc 1 1; (0,0)=1; (0,1)=1/2+1/3i").unwrap();
        assert_eq!(s.get(0, 1), RationalComplex::new(BigRational::new(1.into(), 2.into()), BigRational::new(1.into(), 3.into())));
        assert!(matches!(parse_series("trunc 1 1; (0,)=1"), Err(SeriesParseError::SyntaxError { .. })));
        assert!(matches!(parse_series("trunc 1 1\n(0,0)=1\n(0,0)=2"), Err(SeriesParseError::DuplicateIndex { k: 0, b: 0 })));
        assert!(matches!(parse_series("trunc 1 1\n(2,0)=1"), Err(SeriesParseError::IndexBeyondDeclaredTruncation { k: 2, .. })));
        let round = parse_series(&format_series(&s)).unwrap();
        assert_eq!(round, s);
        let c = parse_series("# heading\ntrunc 3 0   # box\n(1,0) = -2/4 # half\n").unwrap();
        assert_eq!(c.get(1, 0), rc(-1, 2));
    }
}
