//! Virtual characters of `T0 x C*_m` and their Euler classes.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::ratfun::{EvalPoint, Fp, LinearForm, ProductBuilder, RatFun};

/// Exponents of `t1, t2, t3, e^m` with `t0 = (t1 t2 t3)^-1` folded in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Weight(pub [i64; 4]);

impl Weight {
    pub const ZERO: Weight = Weight([0; 4]);
    pub const T1: Weight = Weight([1, 0, 0, 0]);
    pub const T2: Weight = Weight([0, 1, 0, 0]);
    pub const T3: Weight = Weight([0, 0, 1, 0]);
    pub const EM: Weight = Weight([0, 0, 0, 1]);
    pub const T0: Weight = Weight([-1, -1, -1, 0]);

    /// From exponents `(w0, w1, w2, w3, wm)` of `t0, t1, t2, t3, e^m`.
    pub fn from_t0(w: [i64; 5]) -> Self {
        let [w0, w1, w2, w3, wm] = w;
        Weight([w1 - w0, w2 - w0, w3 - w0, wm])
    }

    pub fn t0_pow(k: i64) -> Self {
        Weight([-k, -k, -k, 0])
    }

    pub fn add(self, o: Weight) -> Weight {
        let mut r = self.0;
        for (a, b) in r.iter_mut().zip(o.0.iter()) {
            *a += *b;
        }
        Weight(r)
    }

    pub fn neg(self) -> Weight {
        Weight(self.0.map(|x| -x))
    }

    pub fn scale(self, k: i64) -> Weight {
        Weight(self.0.map(|x| x * k))
    }

    pub fn is_zero(&self) -> bool {
        self.0 == [0; 4]
    }

    /// `w1 lam1 + w2 lam2 + w3 lam3 + wm m`, `None` for the zero weight.
    pub fn form(&self) -> Option<crate::ratfun::ScaledForm> {
        LinearForm::canonical(self.0).ok()
    }

    pub fn eval(&self, pt: &EvalPoint) -> Fp {
        let mut acc = Fp::ZERO;
        for (c, v) in self.0.iter().zip(pt.values.iter()) {
            if *c != 0 {
                acc = acc + Fp::from_i64(*c) * *v;
            }
        }
        acc
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.0;
        write!(f, "({},{},{},{})", a, b, c, d)
    }
}

/// Finite formal sum of weights with nonzero integer multiplicities.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct KClass {
    terms: BTreeMap<Weight, i64>,
}

impl KClass {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(w: Weight, mult: i64) -> Self {
        let mut k = Self::new();
        k.push(w, mult);
        k
    }

    pub fn from_terms<I: IntoIterator<Item = (Weight, i64)>>(iter: I) -> Self {
        let mut k = Self::new();
        for (w, m) in iter {
            k.push(w, m);
        }
        k
    }

    pub fn push(&mut self, w: Weight, mult: i64) {
        if mult == 0 {
            return;
        }
        let e = self.terms.entry(w).or_insert(0);
        *e += mult;
        if *e == 0 {
            self.terms.remove(&w);
        }
    }

    pub fn terms(&self) -> &BTreeMap<Weight, i64> {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn mult(&self, w: &Weight) -> i64 {
        self.terms.get(w).copied().unwrap_or(0)
    }

    pub fn add(&self, o: &KClass) -> KClass {
        let mut r = self.clone();
        for (w, m) in &o.terms {
            r.push(*w, *m);
        }
        r
    }

    pub fn sub(&self, o: &KClass) -> KClass {
        let mut r = self.clone();
        for (w, m) in &o.terms {
            r.push(*w, -*m);
        }
        r
    }

    pub fn neg(&self) -> KClass {
        KClass {
            terms: self.terms.iter().map(|(w, m)| (*w, -m)).collect(),
        }
    }

    pub fn tensor(&self, o: &KClass) -> KClass {
        let mut r = KClass::new();
        for (w, m) in &self.terms {
            for (w2, m2) in &o.terms {
                r.push(w.add(*w2), m * m2);
            }
        }
        r
    }

    /// Shifts every weight by `w`.
    pub fn twist(&self, w: Weight) -> KClass {
        KClass {
            terms: self.terms.iter().map(|(x, m)| (x.add(w), *m)).collect(),
        }
    }

    pub fn dual(&self) -> KClass {
        KClass {
            terms: self.terms.iter().map(|(w, m)| (w.neg(), *m)).collect(),
        }
    }

    pub fn rank(&self) -> i64 {
        self.terms.values().sum()
    }

    pub fn zero_mult(&self) -> i64 {
        self.mult(&Weight::ZERO)
    }

    /// Product of weight forms raised to their multiplicities.
    pub fn euler_class(&self) -> Result<RatFun> {
        let z = self.zero_mult();
        if z < 0 {
            return Err(Error::PoleAtZeroWeight(z));
        }
        if z > 0 {
            return Ok(RatFun::zero());
        }
        let mut b = ProductBuilder::new();
        for (w, &m) in &self.terms {
            let e = i32::try_from(m).map_err(|_| Error::UnsupportedConfiguration(format!("multiplicity {}", m)))?;
            b.linear(w.0, e)?;
        }
        Ok(b.finish())
    }

    /// Euler class at an evaluation point; `Ok(None)` if a denominator weight vanishes there.
    pub fn euler_mod(&self, pt: &EvalPoint) -> Result<Option<Fp>> {
        let z = self.zero_mult();
        if z < 0 {
            return Err(Error::PoleAtZeroWeight(z));
        }
        if z > 0 {
            return Ok(Some(Fp::ZERO));
        }
        let mut acc = Fp::ONE;
        let mut den = Fp::ONE;
        for (w, &m) in &self.terms {
            let v = w.eval(pt);
            if m > 0 {
                acc = acc * v.pow(m as u64);
            } else {
                den = den * v.pow(m.unsigned_abs());
            }
        }
        Ok(den.inv().map(|d| acc * d))
    }
}

/// `chi(P1, O(a Z0 + b Zinf))` as a character, in powers of `t0`.
pub fn chi_p1(a: i64, b: i64) -> KClass {
    let mut k = KClass::new();
    if -a <= b {
        for e in -a..=b {
            k.push(Weight::t0_pow(e), 1);
        }
    } else if b < -a - 1 {
        for e in (b + 1)..=(-a - 1) {
            k.push(Weight::t0_pow(e), -1);
        }
    }
    k
}

impl fmt::Display for KClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("sum[")?;
        let mut first = true;
        for (w, m) in &self.terms {
            f.write_str(if first { " " } else { " ; " })?;
            write!(f, "{}*{}", m, w)?;
            first = false;
        }
        f.write_str(" ]")
    }
}

/// Parses `sum[ 2*(1,0,0,0) ; -1*(0,0,-1,0) ]`.
pub fn parse_kclass(s: &str) -> Result<KClass> {
    let bad = |m: &str| Error::Parse(String::from(m));
    let body = s
        .trim()
        .strip_prefix("sum[")
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| bad("expected sum[ ... ]"))?;
    let mut k = KClass::new();
    let body = body.trim();
    if body.is_empty() {
        return Ok(k);
    }
    for item in body.split(';') {
        let (m, w) = item.trim().split_once('*').ok_or_else(|| bad("expected mult*(weight)"))?;
        let m: i64 = m.trim().parse().map_err(|_| bad("bad multiplicity"))?;
        let w = w
            .trim()
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| bad("expected (w1,w2,w3,wm)"))?;
        let parts: Vec<i64> = w
            .split(',')
            .map(|x| x.trim().parse::<i64>())
            .collect::<core::result::Result<_, _>>()
            .map_err(|_| bad("bad weight"))?;
        let arr: [i64; 4] = parts.try_into().map_err(|_| bad("weight needs four entries"))?;
        if m == 0 || k.terms.contains_key(&Weight(arr)) {
            return Err(bad("zero or repeated term"));
        }
        k.push(Weight(arr), m);
    }
    Ok(k)
}
