//! Canonical text form of polynomials and rational functions.
//!
//! ```text
//! prod[ lam3^-1 ; lam1 + lam2 + lam3^2 ] * ( m - 2 ) / ( 1 )
//! ```

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::{self, Write};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::form::{LinearForm, VAR_NAMES};
use super::poly::{Monomial, MultiPoly, NVARS};
use super::ratfun::RatFun;
use super::Scalar;
use crate::error::{Error, Result};

fn write_monomial(out: &mut String, m: &Monomial) {
    let mut first = true;
    for (i, &e) in m.0.iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !first {
            out.push('*');
        }
        out.push_str(VAR_NAMES[i]);
        if e > 1 {
            let _ = write!(out, "^{}", e);
        }
        first = false;
    }
}

/// Graded-lex ordered rendering, e.g. `lam1^2 - 2/3*lam2*m + 5`.
pub fn format_poly(p: &MultiPoly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (idx, (m, c)) in p.terms().iter().enumerate() {
        let neg = c.is_negative();
        if idx == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let a = c.abs();
        if *m == Monomial::ONE {
            let _ = write!(out, "{}", a);
        } else {
            if !a.is_one() {
                let _ = write!(out, "{}*", a);
            }
            write_monomial(&mut out, m);
        }
    }
    out
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_poly(self))
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("prod[")?;
        let mut first = true;
        for (form, e) in self.factored() {
            f.write_str(if first { " " } else { " ; " })?;
            write!(f, "{}^{}", form, e)?;
            first = false;
        }
        f.write_str(" ] * ( ")?;
        f.write_str(&format_poly(self.residual_num()))?;
        f.write_str(" ) / ( ")?;
        f.write_str(&format_poly(self.residual_den()))?;
        f.write_str(" )")
    }
}

struct Lexer<'a> {
    s: &'a [u8],
    pos: usize,
    linear: bool,
}

impl<'a> Lexer<'a> {
    fn new(s: &'a str) -> Self {
        Lexer {
            s: s.as_bytes(),
            pos: 0,
            linear: false,
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

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }

    fn expect_word(&mut self, w: &str) -> Result<()> {
        self.skip_ws();
        if self.s[self.pos..].starts_with(w.as_bytes()) {
            self.pos += w.len();
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", w)))
        }
    }

    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{} at byte {}", msg, self.pos))
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn digits(&mut self) -> Result<&'a str> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        Ok(core::str::from_utf8(&self.s[start..self.pos]).unwrap_or("0"))
    }

    fn integer(&mut self) -> Result<BigInt> {
        let neg = self.eat(b'-');
        let d = self.digits()?;
        let v: BigInt = d.parse().map_err(|_| self.err("bad integer"))?;
        Ok(if neg { -v } else { v })
    }

    fn small_int(&mut self) -> Result<i64> {
        let v = self.integer()?;
        i64::try_from(v).map_err(|_| self.err("integer out of range"))
    }

    fn var(&mut self) -> Option<usize> {
        self.skip_ws();
        let rest = &self.s[self.pos..];
        for (i, name) in VAR_NAMES.iter().enumerate() {
            if rest.starts_with(name.as_bytes()) {
                let next = rest.get(name.len()).copied();
                if next.map(|c| c.is_ascii_alphanumeric()).unwrap_or(false) {
                    continue;
                }
                self.pos += name.len();
                return Some(i);
            }
        }
        None
    }

    fn monomial(&mut self) -> Result<Monomial> {
        let mut e = [0u32; NVARS];
        loop {
            let v = self.var().ok_or_else(|| self.err("expected variable"))?;
            let mut p = 1u32;
            if !self.linear && self.eat(b'^') {
                p = self.digits()?.parse().map_err(|_| self.err("bad exponent"))?;
            }
            e[v] += p;
            let save = self.pos;
            if self.eat(b'*') {
                if self.var_ahead() {
                    continue;
                }
                self.pos = save;
            }
            return Ok(Monomial(e));
        }
    }

    fn var_ahead(&mut self) -> bool {
        let save = self.pos;
        let r = self.var().is_some();
        self.pos = save;
        r
    }

    /// One unsigned term: `c`, `c*mono`, `mono`, with `c = n` or `n/d`.
    fn term(&mut self) -> Result<(Monomial, Scalar)> {
        if self.var_ahead() {
            return Ok((self.monomial()?, Scalar::one()));
        }
        let n: BigInt = self.digits()?.parse().map_err(|_| self.err("bad integer"))?;
        let mut c = Scalar::from_integer(n);
        if self.eat(b'/') {
            let d: BigInt = self.digits()?.parse().map_err(|_| self.err("bad integer"))?;
            if d.is_zero() {
                return Err(Error::DivisionByZero);
            }
            c /= Scalar::from_integer(d);
        }
        if self.eat(b'*') {
            return Ok((self.monomial()?, c));
        }
        Ok((Monomial::ONE, c))
    }

    fn poly(&mut self) -> Result<MultiPoly> {
        let mut terms = Vec::new();
        let mut neg = self.eat(b'-');
        loop {
            let (m, c) = self.term()?;
            terms.push((m, if neg { -c } else { c }));
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    neg = false;
                }
                Some(b'-') => {
                    self.pos += 1;
                    neg = true;
                }
                _ => break,
            }
        }
        Ok(MultiPoly::from_terms(terms))
    }

    fn form(&mut self) -> Result<LinearForm> {
        self.linear = true;
        let p = self.poly();
        self.linear = false;
        let p = p?;
        let mut c = [0i64; NVARS];
        for (m, k) in p.terms() {
            if m.degree() != 1 || !k.is_integer() {
                return Err(self.err("not an integral linear form"));
            }
            let i = m.0.iter().position(|&e| e == 1).unwrap_or(0);
            c[i] = i64::try_from(k.to_integer()).map_err(|_| self.err("coefficient out of range"))?;
        }
        let s = LinearForm::canonical(c)?;
        if s.scale != 1 {
            return Err(self.err("linear form is not in canonical form"));
        }
        Ok(s.form)
    }
}

pub fn parse_poly(s: &str) -> Result<MultiPoly> {
    let mut lx = Lexer::new(s);
    let p = lx.poly()?;
    if !lx.at_end() {
        return Err(lx.err("trailing input"));
    }
    Ok(p)
}

pub fn parse_form(s: &str) -> Result<LinearForm> {
    let mut lx = Lexer::new(s);
    let f = lx.form()?;
    if !lx.at_end() {
        return Err(lx.err("trailing input"));
    }
    Ok(f)
}

/// Parses the canonical `prod[...] * (...) / (...)` form back into the same representation.
pub fn parse_ratfun(s: &str) -> Result<RatFun> {
    let mut lx = Lexer::new(s);
    lx.expect_word("prod")?;
    lx.expect(b'[')?;
    let mut factored = BTreeMap::new();
    if !lx.eat(b']') {
        loop {
            let f = lx.form()?;
            lx.expect(b'^')?;
            let e = lx.small_int()?;
            let e = i32::try_from(e).map_err(|_| lx.err("exponent out of range"))?;
            if e == 0 || factored.insert(f, e).is_some() {
                return Err(lx.err("zero or repeated factor"));
            }
            if lx.eat(b']') {
                break;
            }
            lx.expect(b';')?;
        }
    }
    lx.expect(b'*')?;
    lx.expect(b'(')?;
    let num = lx.poly()?;
    lx.expect(b')')?;
    lx.expect(b'/')?;
    lx.expect(b'(')?;
    let den = lx.poly()?;
    lx.expect(b')')?;
    if !lx.at_end() {
        return Err(lx.err("trailing input"));
    }
    if den.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(RatFun::from_raw(factored, num, den))
}

impl core::str::FromStr for RatFun {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_ratfun(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn roundtrip_simple() {
        let r = RatFun::var(3).div(&RatFun::var(2)).unwrap().neg();
        let s = r.to_string();
        assert_eq!(s, "prod[ m^1 ; lam3^-1 ] * ( -1 ) / ( 1 )");
        assert!(parse_ratfun(&s).unwrap().same_repr(&r));
    }

    #[test]
    fn roundtrip_residuals() {
        let p = parse_poly("lam1^2 - 2/3*lam2*m + 5").unwrap();
        assert_eq!(format_poly(&p), "lam1^2 - 2/3*lam2*m + 5");
        let r = RatFun::from_poly(p).div(&RatFun::from_coeffs([2, 0, -1, 1]).unwrap()).unwrap();
        let s = r.to_string();
        assert!(s.contains("2*lam1 - lam3 + m^-1"));
        assert!(parse_ratfun(&s).unwrap().same_repr(&r));
    }

    #[test]
    fn rejects_noncanonical_form() {
        assert!(parse_form("-lam1 + lam2").is_err());
        assert!(parse_form("2*lam1").is_err());
        assert!(parse_ratfun("prod[ ] * ( 1 ) / ( 0 )").is_err());
    }
}
