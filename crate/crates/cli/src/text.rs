//! Parsers and canonical printers for polynomials, branches and matrices.
//!
//! Every printer emits text its parser reads back to an equal object.

use num_traits::{ToPrimitive, Zero};
use rootval::branch::Branch;
use rootval::scalar::format_rational;
use rootval::spectral::MatrixSeries;
use rootval::{Error, QPoly, Rational, Result};

pub const GERM_VARS: &[&str] = &["x", "y"];
pub const DEMO_VARS: &[&str] = &["x", "y", "a2", "a3", "a4", "a5", "a6", "a7", "a8", "a9"];

const MAX_EXPONENT: i64 = 1000;

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    /// Offset of `src` inside the full input.
    base: usize,
    vars: &'a [&'a str],
    /// Matrix entry being parsed, which turns negative exponents into
    /// their own error.
    entry: Option<usize>,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, base: usize, vars: &'a [&'a str]) -> Self {
        Parser { src: src.as_bytes(), pos: 0, base, vars, entry: None }
    }

    fn error<T>(&self, at: usize, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { offset: self.base + at, message: message.into() })
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

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn parse_all(mut self) -> Result<QPoly> {
        let p = self.expr()?;
        match self.peek() {
            None => Ok(p),
            Some(c) => self.error(self.pos, format!("unexpected `{}`", c as char)),
        }
    }

    fn expr(&mut self) -> Result<QPoly> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = acc.add(&self.term()?);
            } else if self.eat(b'-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<QPoly> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc = acc.mul(&self.unary()?);
            } else if self.peek() == Some(b'/') {
                let at = self.pos;
                self.pos += 1;
                let d = self.unary()?;
                match d.as_constant() {
                    Some(c) if !c.is_zero() => acc = acc.scale(&c.recip()),
                    Some(_) => return self.error(at, "division by zero"),
                    None => return self.error(at, "division by a non-constant"),
                }
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<QPoly> {
        if self.eat(b'-') {
            Ok(self.unary()?.neg())
        } else if self.eat(b'+') {
            self.unary()
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<QPoly> {
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let at = self.pos;
        let negative = self.eat(b'-');
        self.skip_ws();
        let Some(k) = self.integer()? else {
            return self.error(at, "expected an integer exponent");
        };
        let k = if negative { -k } else { k };
        if k < 0 {
            return match self.entry {
                Some(entry) => Err(Error::NegativeExponent { entry, exponent: k }),
                None => self.error(at, "negative exponent"),
            };
        }
        if k > MAX_EXPONENT {
            return self.error(at, format!("exponent exceeds {MAX_EXPONENT}"));
        }
        Ok(base.pow(k as u32))
    }

    fn integer(&mut self) -> Result<Option<i64>> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Ok(None);
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        match text.parse::<i64>() {
            Ok(k) => Ok(Some(k)),
            Err(_) => self.error(start, "integer out of range"),
        }
    }

    fn atom(&mut self) -> Result<QPoly> {
        self.skip_ws();
        let at = self.pos;
        match self.src.get(self.pos).copied() {
            None => self.error(at, "unexpected end of input"),
            Some(b'(') => {
                self.pos += 1;
                let p = self.expr()?;
                if !self.eat(b')') {
                    return self.error(self.pos, "expected `)`");
                }
                Ok(p)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
                let n: num_bigint::BigInt = digits.parse().expect("digits");
                Ok(QPoly::constant(Rational::from_integer(n)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii identifier");
                if self.vars.contains(&name) {
                    Ok(QPoly::var(name))
                } else {
                    Err(Error::UnknownVariable { name: name.to_string(), offset: self.base + start })
                }
            }
            Some(c) => self.error(at, format!("unexpected `{}`", char::from(c))),
        }
    }
}

fn check_ascii(src: &str) -> Result<()> {
    match src.char_indices().find(|(_, c)| !c.is_ascii()) {
        Some((at, c)) => Err(Error::Syntax { offset: at, message: format!("unexpected `{c}`") }),
        None => Ok(()),
    }
}

/// Parses a polynomial over the given variables.
pub fn parse_polynomial(src: &str, vars: &[&str]) -> Result<QPoly> {
    check_ascii(src)?;
    Parser::new(src, 0, vars).parse_all()
}

/// A germ in `x, y`.
pub fn parse_germ(src: &str) -> Result<QPoly> {
    parse_polynomial(src, GERM_VARS)
}

/// `;`-separated fields with their byte offsets, trimmed.
fn fields(src: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = 0;
    for part in src.split(';') {
        let lead = part.len() - part.trim_start().len();
        out.push((start + lead, part.trim()));
        start += part.len() + 1;
    }
    if out.len() > 1 && out.last().is_some_and(|(_, s)| s.is_empty()) {
        out.pop();
    }
    out
}

fn key_value<'a>(field: &'a str, at: usize, key: &str) -> Result<Option<(usize, &'a str)>> {
    let Some(eq) = field.find('=') else { return Ok(None) };
    if field[..eq].trim() != key {
        return Ok(None);
    }
    let rest = &field[eq + 1..];
    let lead = rest.len() - rest.trim_start().len();
    let value = rest.trim();
    if value.is_empty() {
        return Err(Error::Syntax { offset: at + field.len(), message: format!("missing value for {key}") });
    }
    Ok(Some((at + eq + 1 + lead, value)))
}

fn parse_int_field(value: &str, at: usize) -> Result<i64> {
    let (neg, digits) = match value.strip_prefix('-') {
        Some(d) => (true, d.trim_start()),
        None => (false, value),
    };
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Syntax { offset: at, message: format!("expected an integer, found `{value}`") });
    }
    let k: i64 = digits.parse().map_err(|_| Error::Syntax { offset: at, message: "integer out of range".into() })?;
    Ok(if neg { -k } else { k })
}

/// `trunc=<int>` or `trunc=inf`.
fn parse_trunc(value: &str, at: usize) -> Result<Option<i64>> {
    if value == "inf" {
        return Ok(None);
    }
    let k = parse_int_field(value, at)?;
    if k < 1 {
        return Err(Error::InvalidInput(format!("truncation must be positive, got {k}")));
    }
    Ok(Some(k))
}

fn univariate_terms(p: &QPoly, var: &str) -> Vec<(i64, Rational)> {
    p.named_terms()
        .into_iter()
        .map(|(mono, c)| (mono.iter().find(|(v, _)| v == var).map_or(0, |(_, e)| *e as i64), c))
        .collect()
}

/// `x = t^d; y = <poly in t>[; trunc=<int>|inf]`.
pub fn parse_branch(src: &str) -> Result<Branch> {
    check_ascii(src)?;
    let parts = fields(src);
    if parts.len() < 2 || parts.len() > 3 {
        return Err(Error::Syntax {
            offset: 0,
            message: "expected `x = t^d; y = ...` with an optional `; trunc=N`".into(),
        });
    }
    let (xat, xfield) = parts[0];
    let Some((xv, xsrc)) = key_value(xfield, xat, "x")? else {
        return Err(Error::Syntax { offset: xat, message: "expected `x = t^d`".into() });
    };
    let d = parse_ramification(xsrc, xv)?;
    let (yat, yfield) = parts[1];
    let Some((yv, ysrc)) = key_value(yfield, yat, "y")? else {
        return Err(Error::Syntax { offset: yat, message: "expected `y = ...`".into() });
    };
    let y = Parser::new(ysrc, yv, &["t"]).parse_all()?;
    let terms = univariate_terms(&y, "t");
    let trunc = match parts.get(2) {
        Some(&(tat, tfield)) => {
            let Some((tv, tsrc)) = key_value(tfield, tat, "trunc")? else {
                return Err(Error::Syntax { offset: tat, message: "expected `trunc=N`".into() });
            };
            let t = parse_trunc(tsrc, tv)?;
            if let (Some(t), Some((k, _))) = (t, terms.iter().max_by_key(|(k, _)| *k)) {
                if *k >= t {
                    return Err(Error::InvalidInput(format!("term t^{k} lies at or beyond trunc={t}")));
                }
            }
            t
        }
        None => Some(terms.iter().map(|(k, _)| *k).max().unwrap_or(0) + 1),
    };
    Branch::from_rational(d, &terms, trunc)
}

fn parse_ramification(src: &str, at: usize) -> Result<u64> {
    let mut p = Parser::new(src, at, &["t"]);
    p.skip_ws();
    if p.src.get(p.pos) != Some(&b't') {
        return p.error(p.pos, "expected `t^d`");
    }
    p.pos += 1;
    let d = if p.eat(b'^') {
        let start = p.pos;
        let negative = p.eat(b'-');
        p.skip_ws();
        match p.integer()? {
            Some(k) => {
                if negative {
                    -k
                } else {
                    k
                }
            }
            None => return p.error(start, "expected an integer exponent"),
        }
    } else {
        1
    };
    if let Some(c) = p.peek() {
        return p.error(p.pos, format!("unexpected `{}`", c as char));
    }
    if d <= 0 {
        return Err(Error::NonPositiveRamification(d));
    }
    Ok(d as u64)
}

/// `d=<int>; trunc=<int>;` followed by `d²` row-major entries in `e`.
pub fn parse_matrix(src: &str) -> Result<MatrixSeries> {
    check_ascii(src)?;
    let parts = fields(src);
    let header = |i: usize, key: &str| -> Result<(usize, &str)> {
        let Some(&(at, field)) = parts.get(i) else {
            return Err(Error::Syntax { offset: src.len(), message: format!("expected `{key}=`") });
        };
        key_value(field, at, key)?.ok_or(Error::Syntax { offset: at, message: format!("expected `{key}=`") })
    };
    let (dv, dsrc) = header(0, "d")?;
    let d = parse_int_field(dsrc, dv)?;
    if d < 1 {
        return Err(Error::InvalidInput(format!("matrix size must be positive, got {d}")));
    }
    let (tv, tsrc) = header(1, "trunc")?;
    let trunc =
        parse_trunc(tsrc, tv)?.ok_or_else(|| Error::InvalidInput("matrix entries need a finite truncation".into()))?;
    let d = d as usize;
    let entries = &parts[2..];
    if entries.len() != d * d {
        return Err(Error::WrongEntryCount { expected: d * d, found: entries.len() });
    }
    let mut rows = vec![Vec::with_capacity(d); d];
    for (i, &(at, field)) in entries.iter().enumerate() {
        let mut p = Parser::new(field, at, &["e"]);
        p.entry = Some(i);
        let poly = p.parse_all()?;
        rows[i / d].push(univariate_terms(&poly, "e"));
    }
    MatrixSeries::new(d, trunc, rows)
}

fn poly_in(var: &str, terms: impl IntoIterator<Item = (i64, Rational)>) -> QPoly {
    QPoly::from_terms(terms.into_iter().map(|(k, c)| (vec![(var.to_string(), k as u32)], c)))
}

pub fn format_polynomial(p: &QPoly) -> String {
    p.to_text()
}

/// Canonical branch text; non-rational coefficients print in cyclotomic
/// notation, which the parser does not read.
pub fn format_branch(b: &Branch) -> String {
    let x = if b.d() == 1 { "t".to_string() } else { format!("t^{}", b.d()) };
    let rational: Option<Vec<(i64, Rational)>> =
        b.y().terms().iter().map(|(k, c)| c.as_rational().map(|q| (*k, q))).collect();
    let y = match rational {
        Some(terms) => poly_in("t", terms).to_text(),
        None => {
            let exact = rootval::Series::new(1, b.y().terms().iter().map(|(k, c)| (*k, c.clone())), None);
            exact.format_with("t")
        }
    };
    let trunc = match b.trunc() {
        Some(t) => t.to_string(),
        None => "inf".into(),
    };
    format!("x = {x}; y = {y}; trunc={trunc}")
}

pub fn format_matrix(m: &MatrixSeries) -> String {
    let mut out = format!("d={}; trunc={}", m.size(), m.trunc());
    for i in 0..m.size() {
        for j in 0..m.size() {
            let terms = m.entry(i, j).terms().iter().map(|(k, c)| (*k, c.clone()));
            out.push_str("; ");
            out.push_str(&poly_in("e", terms).to_text());
        }
    }
    out
}

pub fn format_rat(q: &Rational) -> String {
    format_rational(q)
}

/// Comma-separated rationals, as in `1,2,-1,1/2`.
pub fn parse_samples(src: &str) -> Result<Vec<Rational>> {
    check_ascii(src)?;
    let mut out = Vec::new();
    let mut start = 0;
    for part in src.split(',') {
        let lead = part.len() - part.trim_start().len();
        let value = Parser::new(part, start, &[]).parse_all()?;
        let q =
            value.as_constant().ok_or(Error::Syntax { offset: start + lead, message: "expected a rational".into() })?;
        out.push(q);
        start += part.len() + 1;
    }
    Ok(out)
}

/// Small helper for integer-valued rationals in reports.
pub fn as_integer(q: &Rational) -> Option<i64> {
    if q.is_integer() {
        q.to_integer().to_i64()
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rootval::branch::characteristic_exponents;
    use rootval::scalar::{int, rat};

    #[test]
    fn polynomials() {
        let p = parse_germ("y^2 - x^3").unwrap();
        assert_eq!(format_polynomial(&p), "-x^3 + y^2");
        let q = parse_germ("y^2 - (x^4 + 1/2*x^2)").unwrap();
        assert_eq!(format_polynomial(&q), "-x^4 - 1/2*x^2 + y^2");
        assert_eq!(parse_germ(&format_polynomial(&q)).unwrap(), q);
        assert!(matches!(parse_germ("y^2 - z"), Err(Error::UnknownVariable { offset: 6, .. })));
        assert!(matches!(parse_germ("y^2 -"), Err(Error::Syntax { offset: 5, .. })));
        assert!(matches!(parse_germ("(x + y"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_germ("x^-1"), Err(Error::Syntax { offset: 2, .. })));
        assert_eq!(parse_germ("x*y/2").unwrap(), parse_germ("1/2*x*y").unwrap());
        assert!(matches!(parse_germ("x/y"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_germ("x/0"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn branches() {
        let b = parse_branch("x = t^4; y = t^6 + t^7").unwrap();
        assert_eq!(characteristic_exponents(&b).unwrap().beta(), &[4, 6, 7]);
        assert_eq!(b.trunc(), Some(8));
        let c = parse_branch("x = t^2; y = t^3; trunc=10").unwrap();
        assert_eq!(c.trunc(), Some(10));
        assert!(matches!(parse_branch("x = t^0; y = t"), Err(Error::NonPositiveRamification(0))));
        assert!(matches!(parse_branch("x = t^-2; y = t"), Err(Error::NonPositiveRamification(-2))));
        let e = parse_branch("x = t^2; y = 1/3*t^3 - t^5; trunc=inf").unwrap();
        assert_eq!(e.trunc(), None);
        for b in [b, c, e] {
            assert_eq!(parse_branch(&format_branch(&b)).unwrap(), b);
        }
        assert!(matches!(parse_branch("x = t^2; y = s"), Err(Error::UnknownVariable { offset: 13, .. })));
    }

    #[test]
    fn matrices() {
        let m = parse_matrix("d=2; trunc=6; 0; 1; e^3; 0").unwrap();
        assert_eq!(m.entry(1, 0).terms().get(&3), Some(&int(1)));
        assert_eq!(format_matrix(&m), "d=2; trunc=6; 0; 1; e^3; 0");
        let n = parse_matrix("d=2; trunc=6; e; 0; 0; 2*e").unwrap();
        assert_eq!(parse_matrix(&format_matrix(&n)).unwrap(), n);
        assert!(matches!(
            parse_matrix("d=2; trunc=6; 0; 1; e^3"),
            Err(Error::WrongEntryCount { expected: 4, found: 3 })
        ));
        assert!(matches!(
            parse_matrix("d=2; trunc=6; 0; e^-1; 1; 0"),
            Err(Error::NegativeExponent { entry: 1, exponent: -1 })
        ));
        // Terms at or above the truncation are unknown and dropped.
        let t = parse_matrix("d=1; trunc=3; e + e^5").unwrap();
        assert_eq!(format_matrix(&t), "d=1; trunc=3; e");
    }

    #[test]
    fn samples() {
        assert_eq!(parse_samples("1, 2,-1,1/2").unwrap(), vec![int(1), int(2), int(-1), rat(1, 2)]);
        assert!(parse_samples("1,,2").is_err());
    }
}
