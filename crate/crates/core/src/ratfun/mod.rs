//! Exact rational functions in `lam1, lam2, lam3, m` and identity testing.

pub mod form;
pub mod modp;
pub mod poly;
#[allow(clippy::module_inception)]
pub mod ratfun;
pub mod text;

use crate::error::{Error, Result};

pub use form::{LinearForm, ScaledForm};
pub use modp::{EvalPoint, Fp, PointStream, PRIME};
pub use poly::{Monomial, MultiPoly};
pub use ratfun::{binomial_rf, ProductBuilder, RatFun};
pub use text::{format_poly, parse_form, parse_poly, parse_ratfun};

/// Exact rational coefficient.
pub type Scalar = num_rational::BigRational;

/// How identities are decided.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    Symbolic,
    Eval { points: usize, seed: u64 },
}

/// Upper bound on the failure probability of a passing evaluation check:
/// `(degree / prime)^points`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SzBound {
    pub degree: u64,
    pub prime: u64,
    pub points: usize,
}

#[derive(Debug, Clone)]
pub enum Witness {
    /// Values of both sides at a point where they differ.
    Point { point: EvalPoint, lhs: Fp, rhs: Fp },
    /// The nonzero symbolic difference `lhs - rhs`.
    Difference(RatFun),
}

#[derive(Debug, Clone)]
pub enum Verdict {
    Equal(Option<SzBound>),
    Unequal(Witness),
}

impl Verdict {
    pub fn is_equal(&self) -> bool {
        matches!(self, Verdict::Equal(_))
    }
}

/// Resampling attempts per requested point before giving up.
pub const MAX_RESAMPLE: usize = 64;

/// Decides `a == b` with the chosen backend.
pub fn rf_equal(a: &RatFun, b: &RatFun, backend: Backend) -> Result<Verdict> {
    match backend {
        Backend::Symbolic => {
            let diff = a.sub(b);
            Ok(if diff.is_zero() {
                Verdict::Equal(None)
            } else {
                Verdict::Unequal(Witness::Difference(diff))
            })
        }
        Backend::Eval { points, seed } => {
            let (an, ad) = a.degree_bound();
            let (bn, bd) = b.degree_bound();
            let degree = u64::from((an + bd).max(bn + ad)).max(1);
            let mut stream = PointStream::new(seed);
            for _ in 0..points {
                let mut found = None;
                for _ in 0..MAX_RESAMPLE {
                    let pt = stream.next_point();
                    if let (Some(x), Some(y)) = (a.eval(&pt), b.eval(&pt)) {
                        found = Some((pt, x, y));
                        break;
                    }
                }
                let (point, lhs, rhs) = found.ok_or(Error::EvalDegenerate(MAX_RESAMPLE))?;
                if lhs != rhs {
                    return Ok(Verdict::Unequal(Witness::Point { point, lhs, rhs }));
                }
            }
            Ok(Verdict::Equal(Some(SzBound {
                degree,
                prime: PRIME,
                points,
            })))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symbolic_equal_and_expansion() {
        let a = RatFun::var(3).div(&RatFun::var(2)).unwrap();
        assert!(rf_equal(&a, &a.clone(), Backend::Symbolic).unwrap().is_equal());
        let s = RatFun::var(0).add(&RatFun::var(1));
        let sq = s.mul(&s);
        let l1 = RatFun::var(0);
        let l2 = RatFun::var(1);
        let rhs = l1.mul(&l1).add(&l1.mul(&l2).scale(&Scalar::from_integer(2.into()))).add(&l2.mul(&l2));
        assert!(rf_equal(&sq, &rhs, Backend::Symbolic).unwrap().is_equal());
    }

    #[test]
    fn eval_finds_witness() {
        let v = rf_equal(&RatFun::var(3), &RatFun::var(2), Backend::Eval { points: 3, seed: 1 }).unwrap();
        assert!(matches!(v, Verdict::Unequal(Witness::Point { .. })));
    }
}
