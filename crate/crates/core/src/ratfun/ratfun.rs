//! Rational functions kept as a product of linear-form powers times a residual quotient.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::form::LinearForm;
use super::modp::{EvalPoint, Fp};
use super::poly::{MultiPoly, NVARS};
use super::Scalar;
use crate::error::{Error, Result};

/// Exact element of `Q(lam1, lam2, lam3, m)`.
///
/// The value is `prod(form^exp) * num / den`. After normalization `den` is
/// monic and not divisible by any form stored in `factored`, `num` is not
/// divisible by any stored form either, and zero exponents are dropped.
#[derive(Debug, Clone)]
pub struct RatFun {
    factored: BTreeMap<LinearForm, i32>,
    num: MultiPoly,
    den: MultiPoly,
}

impl Default for RatFun {
    fn default() -> Self {
        Self::zero()
    }
}

impl RatFun {
    pub fn zero() -> Self {
        RatFun {
            factored: BTreeMap::new(),
            num: MultiPoly::zero(),
            den: MultiPoly::one(),
        }
    }

    pub fn one() -> Self {
        Self::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        RatFun {
            factored: BTreeMap::new(),
            num: MultiPoly::constant(c),
            den: MultiPoly::one(),
        }
    }

    pub fn from_int(v: i64) -> Self {
        Self::constant(Scalar::from_integer(BigInt::from(v)))
    }

    pub fn from_ratio(n: i64, d: i64) -> Result<Self> {
        if d == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::constant(Scalar::new(BigInt::from(n), BigInt::from(d))))
    }

    /// The variable `lam1`, `lam2`, `lam3` or `m` by index.
    pub fn var(i: usize) -> Self {
        Self::form_pow(LinearForm::var(i), 1)
    }

    pub fn lam0() -> Self {
        Self::form_pow(LinearForm::canonical([1, 1, 1, 0]).expect("nonzero").form, 1).neg()
    }

    pub fn form_pow(form: LinearForm, exp: i32) -> Self {
        let mut factored = BTreeMap::new();
        if exp != 0 {
            factored.insert(form, exp);
        }
        RatFun {
            factored,
            num: MultiPoly::one(),
            den: MultiPoly::one(),
        }
    }

    /// `scale * form`, from an arbitrary nonzero coefficient vector.
    pub fn from_coeffs(coeffs: [i64; NVARS]) -> Result<Self> {
        let s = LinearForm::canonical(coeffs)?;
        Ok(Self::form_pow(s.form, 1).scale(&Scalar::from_integer(BigInt::from(s.scale))))
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        RatFun {
            factored: BTreeMap::new(),
            num: p,
            den: MultiPoly::one(),
        }
        .normalized()
    }

    /// Assembles raw parts and normalizes them.
    pub fn from_parts(factored: BTreeMap<LinearForm, i32>, num: MultiPoly, den: MultiPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RatFun { factored, num, den }.normalized())
    }

    /// Assembles raw parts without normalizing; used by the parser so that
    /// printing reproduces the input exactly.
    pub(crate) fn from_raw(factored: BTreeMap<LinearForm, i32>, num: MultiPoly, den: MultiPoly) -> Self {
        RatFun { factored, num, den }
    }

    pub fn factored(&self) -> &BTreeMap<LinearForm, i32> {
        &self.factored
    }

    pub fn residual_num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn residual_den(&self) -> &MultiPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Structural equality of the stored representation.
    pub fn same_repr(&self, other: &Self) -> bool {
        self.factored == other.factored && self.num == other.num && self.den == other.den
    }

    /// Mathematical equality.
    pub fn equals(&self, other: &Self) -> bool {
        if self.same_repr(other) {
            return true;
        }
        self.sub(other).is_zero()
    }

    /// The value as a rational constant, if it is one.
    pub fn as_constant(&self) -> Option<Scalar> {
        if self.is_zero() {
            return Some(Scalar::zero());
        }
        if !self.factored.is_empty() {
            return None;
        }
        let n = self.num.as_constant()?;
        let d = self.den.as_constant()?;
        Some(n / d)
    }

    /// Upper bound on the total degree of numerator and denominator.
    pub fn degree_bound(&self) -> (u32, u32) {
        let mut n = self.num.total_degree();
        let mut d = self.den.total_degree();
        for &e in self.factored.values() {
            if e > 0 {
                n += e as u32;
            } else {
                d += e.unsigned_abs();
            }
        }
        (n, d)
    }

    fn normalized(mut self) -> Self {
        if self.num.is_zero() {
            return Self::zero();
        }
        // linear residuals move into the factored part
        if let Some((c, f)) = self.num.as_scaled_form() {
            self.num = MultiPoly::constant(c);
            *self.factored.entry(f).or_insert(0) += 1;
        }
        if let Some((c, f)) = self.den.as_scaled_form() {
            self.den = MultiPoly::constant(c);
            *self.factored.entry(f).or_insert(0) -= 1;
        }
        if self.num.total_degree() > 0 || self.den.total_degree() > 0 {
            let forms: Vec<LinearForm> = self.factored.keys().copied().collect();
            for f in forms {
                let mut e = self.factored[&f];
                while self.den.total_degree() > 0 {
                    match self.den.div_form(&f) {
                        Some(q) => {
                            self.den = q;
                            e -= 1;
                        }
                        None => break,
                    }
                }
                while self.num.total_degree() > 0 {
                    match self.num.div_form(&f) {
                        Some(q) => {
                            self.num = q;
                            e += 1;
                        }
                        None => break,
                    }
                }
                self.factored.insert(f, e);
            }
        }
        self.factored.retain(|_, e| *e != 0);
        if let Some(lc) = self.den.leading_coeff().cloned() {
            if !lc.is_one() {
                let inv = Scalar::one() / lc;
                self.num = self.num.scale(&inv);
                self.den = self.den.scale(&inv);
            }
        }
        self
    }

    pub fn neg(&self) -> Self {
        RatFun {
            factored: self.factored.clone(),
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        RatFun {
            factored: self.factored.clone(),
            num: self.num.scale(s),
            den: self.den.clone(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, true)
    }

    fn combine(&self, other: &Self, negate: bool) -> Self {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if negate { other.neg() } else { other.clone() };
        }
        // common factor: minimum exponent of every form over both sides
        let mut common: BTreeMap<LinearForm, i32> = BTreeMap::new();
        for (f, &e) in &self.factored {
            let o = other.factored.get(f).copied().unwrap_or(0);
            common.insert(*f, e.min(o));
        }
        for (f, &e) in &other.factored {
            if !self.factored.contains_key(f) {
                common.insert(*f, e.min(0));
            }
        }
        let expand = |x: &RatFun| -> MultiPoly {
            let mut p = x.num.clone();
            for (f, &g) in &common {
                let e = x.factored.get(f).copied().unwrap_or(0);
                for _ in 0..(e - g) {
                    p = p.mul_form(f);
                }
            }
            p
        };
        let mut pa = expand(self);
        let mut pb = expand(other);
        let den = if self.den == other.den {
            self.den.clone()
        } else {
            pa = pa.mul(&other.den);
            pb = pb.mul(&self.den);
            self.den.mul(&other.den)
        };
        let num = if negate { pa.sub(&pb) } else { pa.add(&pb) };
        common.retain(|_, e| *e != 0);
        RatFun {
            factored: common,
            num,
            den,
        }
        .normalized()
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut factored = self.factored.clone();
        for (f, &e) in &other.factored {
            *factored.entry(*f).or_insert(0) += e;
        }
        factored.retain(|_, e| *e != 0);
        let num = self.num.mul(&other.num);
        let den = self.den.mul(&other.den);
        let plain = self.num.total_degree() == 0
            && self.den.total_degree() == 0
            && other.num.total_degree() == 0
            && other.den.total_degree() == 0;
        let r = RatFun { factored, num, den };
        if plain {
            // constant residuals: only rescale so that den = 1
            let c = r.num.as_constant().unwrap_or_default() / r.den.as_constant().unwrap_or_else(Scalar::one);
            RatFun {
                factored: r.factored,
                num: MultiPoly::constant(c),
                den: MultiPoly::one(),
            }
        } else {
            r.normalized()
        }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RatFun {
            factored: self.factored.iter().map(|(f, e)| (*f, -e)).collect(),
            num: self.den.clone(),
            den: self.num.clone(),
        }
        .normalized())
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: i32) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    /// Value at an evaluation point; `None` if a denominator vanishes there.
    pub fn eval(&self, pt: &EvalPoint) -> Option<Fp> {
        let mut acc = pt.poly(&self.num)?;
        let d = pt.poly(&self.den)?;
        acc = acc * d.inv()?;
        for (f, &e) in &self.factored {
            acc = acc * pt.form(f).powi(e as i64)?;
        }
        Some(acc)
    }

    /// Specializes `m := lam3`.
    pub fn substitute_m_lam3(&self) -> Result<Self> {
        let mut out = RatFun {
            factored: BTreeMap::new(),
            num: self.num.substitute_m_lam3(),
            den: self.den.substitute_m_lam3(),
        };
        if out.den.is_zero() {
            return Err(Error::PoleAtSubstitution);
        }
        let mut scale = Scalar::one();
        for (f, &e) in &self.factored {
            let mut c = *f.coeffs();
            c[2] += c[3];
            c[3] = 0;
            match LinearForm::canonical(c) {
                Ok(s) => {
                    *out.factored.entry(s.form).or_insert(0) += e;
                    let k = Scalar::from_integer(BigInt::from(s.scale));
                    scale *= if e >= 0 {
                        num_traits::pow(k, e as usize)
                    } else {
                        Scalar::one() / num_traits::pow(k, e.unsigned_abs() as usize)
                    };
                }
                Err(_) if e > 0 => return Ok(Self::zero()),
                Err(_) => return Err(Error::PoleAtSubstitution),
            }
        }
        out.num = out.num.scale(&scale);
        Ok(out.normalized())
    }

    /// Expands everything into a single quotient of polynomials.
    pub fn expanded(&self) -> (MultiPoly, MultiPoly) {
        let mut n = self.num.clone();
        let mut d = self.den.clone();
        for (f, &e) in &self.factored {
            for _ in 0..e.unsigned_abs() {
                if e > 0 {
                    n = n.mul_form(f);
                } else {
                    d = d.mul_form(f);
                }
            }
        }
        (n, d)
    }

}

/// Accumulates a product of integer linear factors and rational constants.
#[derive(Debug, Clone)]
pub struct ProductBuilder {
    factored: BTreeMap<LinearForm, i32>,
    scale: Scalar,
    zero: bool,
}

impl Default for ProductBuilder {
    fn default() -> Self {
        Self::new()
    }
}

impl ProductBuilder {
    pub fn new() -> Self {
        ProductBuilder {
            factored: BTreeMap::new(),
            scale: Scalar::one(),
            zero: false,
        }
    }

    pub fn scale(&mut self, s: &Scalar) {
        if s.is_zero() {
            self.zero = true;
        } else {
            self.scale *= s;
        }
    }

    /// Multiplies by `(c . (lam1, lam2, lam3, m))^exp`. A vanishing factor
    /// zeroes the product for `exp > 0` and is a pole for `exp < 0`.
    pub fn linear(&mut self, coeffs: [i64; NVARS], exp: i32) -> Result<()> {
        if exp == 0 {
            return Ok(());
        }
        match LinearForm::canonical(coeffs) {
            Ok(s) => {
                *self.factored.entry(s.form).or_insert(0) += exp;
                if s.scale != 1 {
                    let k = Scalar::from_integer(BigInt::from(s.scale));
                    let p = num_traits::pow(k, exp.unsigned_abs() as usize);
                    if exp > 0 {
                        self.scale *= p;
                    } else {
                        self.scale /= p;
                    }
                }
                Ok(())
            }
            Err(_) if exp > 0 => {
                self.zero = true;
                Ok(())
            }
            Err(_) => Err(Error::PoleAtZeroWeight(exp as i64)),
        }
    }

    pub fn finish(mut self) -> RatFun {
        if self.zero {
            return RatFun::zero();
        }
        self.factored.retain(|_, e| *e != 0);
        RatFun {
            factored: self.factored,
            num: MultiPoly::constant(self.scale),
            den: MultiPoly::one(),
        }
    }
}

/// `x (x-1) ... (x-d+1) / d!`.
pub fn binomial_rf(x: &RatFun, d: u32) -> RatFun {
    let mut acc = RatFun::one();
    let mut fact = BigInt::one();
    for i in 0..d {
        acc = acc.mul(&x.sub(&RatFun::from_int(i as i64)));
        fact *= BigInt::from(i + 1);
    }
    acc.scale(&Scalar::new(BigInt::one(), fact))
}
