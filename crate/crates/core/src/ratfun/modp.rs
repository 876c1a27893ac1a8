//! Arithmetic modulo the Mersenne prime `2^61 - 1` and seeded evaluation points.

use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use super::form::LinearForm;
use super::poly::{MultiPoly, NVARS};
use super::Scalar;

/// The evaluation prime `2^61 - 1`.
pub const PRIME: u64 = (1u64 << 61) - 1;

/// Residue modulo [`PRIME`], always reduced into `0..PRIME`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fp(u64);

impl Fp {
    pub const ZERO: Fp = Fp(0);
    pub const ONE: Fp = Fp(1);

    pub fn new(v: u64) -> Self {
        Fp(v % PRIME)
    }

    pub fn from_i64(v: i64) -> Self {
        let r = v.rem_euclid(PRIME as i64);
        Fp(r as u64)
    }

    pub fn from_bigint(v: &BigInt) -> Self {
        let p = BigInt::from(PRIME);
        let r = v.mod_floor(&p);
        Fp(r.to_u64().unwrap_or(0))
    }

    /// `None` when the denominator is divisible by the prime.
    pub fn from_scalar(v: &Scalar) -> Option<Self> {
        let d = Fp::from_bigint(v.denom());
        let n = Fp::from_bigint(v.numer());
        Some(n * d.inv()?)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = Fp::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    pub fn powi(self, e: i64) -> Option<Self> {
        if e >= 0 {
            Some(self.pow(e as u64))
        } else {
            Some(self.inv()?.pow(e.unsigned_abs()))
        }
    }

    pub fn inv(self) -> Option<Self> {
        if self.0 == 0 {
            None
        } else {
            Some(self.pow(PRIME - 2))
        }
    }
}

fn reduce(x: u128) -> u64 {
    let lo = (x as u64) & PRIME;
    let hi = (x >> 61) as u64;
    let mut s = lo + (hi & PRIME) + ((x >> 122) as u64);
    while s >= PRIME {
        s -= PRIME;
    }
    s
}

impl core::ops::Add for Fp {
    type Output = Fp;
    fn add(self, o: Fp) -> Fp {
        let s = self.0 + o.0;
        Fp(if s >= PRIME { s - PRIME } else { s })
    }
}

impl core::ops::Sub for Fp {
    type Output = Fp;
    fn sub(self, o: Fp) -> Fp {
        Fp(if self.0 >= o.0 {
            self.0 - o.0
        } else {
            self.0 + PRIME - o.0
        })
    }
}

impl core::ops::Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        Fp(if self.0 == 0 { 0 } else { PRIME - self.0 })
    }
}

impl core::ops::Mul for Fp {
    type Output = Fp;
    fn mul(self, o: Fp) -> Fp {
        Fp(reduce(self.0 as u128 * o.0 as u128))
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Assignment of `lam1, lam2, lam3, m` to nonzero residues.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalPoint {
    pub seed: u64,
    pub values: [Fp; NVARS],
}

impl EvalPoint {
    pub fn prime(&self) -> u64 {
        PRIME
    }

    pub fn form(&self, f: &LinearForm) -> Fp {
        let mut acc = Fp::ZERO;
        for (c, v) in f.coeffs().iter().zip(self.values.iter()) {
            if *c != 0 {
                acc = acc + Fp::from_i64(*c) * *v;
            }
        }
        acc
    }

    /// Value of a polynomial; `None` if a coefficient denominator is divisible by the prime.
    pub fn poly(&self, p: &MultiPoly) -> Option<Fp> {
        eval_poly(p, &self.values)
    }
}

pub(crate) fn eval_poly(p: &MultiPoly, values: &[Fp; NVARS]) -> Option<Fp> {
    let mut acc = Fp::ZERO;
    for (m, c) in p.terms() {
        let mut t = Fp::from_scalar(c)?;
        for (e, v) in m.0.iter().zip(values.iter()) {
            if *e > 0 {
                t = t * v.pow(*e as u64);
            }
        }
        acc = acc + t;
    }
    Some(acc)
}

/// Deterministic stream of evaluation points drawn from a seed.
#[derive(Debug, Clone)]
pub struct PointStream {
    seed: u64,
    rng: ChaCha8Rng,
}

impl PointStream {
    pub fn new(seed: u64) -> Self {
        PointStream {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    fn draw(&mut self) -> Fp {
        loop {
            let x = self.rng.next_u64() >> 3;
            if x != 0 && x < PRIME {
                return Fp(x);
            }
        }
    }

    pub fn next_point(&mut self) -> EvalPoint {
        let mut values = [Fp::ZERO; NVARS];
        for v in values.iter_mut() {
            *v = self.draw();
        }
        EvalPoint {
            seed: self.seed,
            values,
        }
    }
}

/// Cheap necessary condition for `form | p`: `p` vanishes at a fixed point of
/// the hyperplane `form = 0`. Returns `false` only when division certainly fails.
pub(crate) fn may_vanish_on(p: &MultiPoly, form: &LinearForm) -> bool {
    const PROBE: [u64; NVARS] = [
        0x1d8e_4e27_c47d_124f,
        0x0b3a_5f1c_92e4_7a61,
        0x17f0_29c3_8d5b_e0a3,
        0x0a64_f3b7_1e28_95cd,
    ];
    let lead = form.leading_var();
    let mut values = [Fp::ZERO; NVARS];
    let mut rest = Fp::ZERO;
    for i in 0..NVARS {
        if i == lead {
            continue;
        }
        values[i] = Fp::new(PROBE[i]);
        rest = rest + Fp::from_i64(form.coeffs()[i]) * values[i];
    }
    let c = Fp::from_i64(form.coeffs()[lead]);
    let Some(ci) = c.inv() else { return true };
    values[lead] = -(rest * ci);
    match eval_poly(p, &values) {
        Some(v) => v.is_zero(),
        None => true,
    }
}
