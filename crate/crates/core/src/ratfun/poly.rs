//! Sparse polynomials in `lam1, lam2, lam3, m` over the rationals.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::form::LinearForm;
use super::modp;
use super::Scalar;

/// Number of polynomial variables: `lam1, lam2, lam3, m`.
pub const NVARS: usize = 4;

/// Exponent vector over `(lam1, lam2, lam3, m)`.
///
/// Ordered graded-lexicographically: total degree first, then the exponent
/// of `lam1`, `lam2`, ... with larger exponents ranking higher.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial(pub [u32; NVARS]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0; NVARS]);

    pub fn var(i: usize) -> Self {
        let mut e = [0; NVARS];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(other.0.iter()) {
            *a += *b;
        }
        Monomial(e)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Multivariate polynomial with exact rational coefficients.
///
/// Terms are kept sorted by descending graded-lex order with no zero
/// coefficients, so structural equality is value equality.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MultiPoly {
    terms: Vec<(Monomial, Scalar)>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            MultiPoly {
                terms: alloc::vec![(Monomial::ONE, c)],
            }
        }
    }

    pub fn var(i: usize) -> Self {
        MultiPoly {
            terms: alloc::vec![(Monomial::var(i), Scalar::one())],
        }
    }

    pub fn from_form(form: &LinearForm) -> Self {
        let mut terms = Vec::with_capacity(NVARS);
        for (i, &c) in form.coeffs().iter().enumerate() {
            if c != 0 {
                terms.push((Monomial::var(i), Scalar::from_integer(BigInt::from(c))));
            }
        }
        MultiPoly { terms }
    }

    /// Builds a polynomial from arbitrary terms, merging duplicates.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, Scalar)>>(iter: I) -> Self {
        let mut acc: BTreeMap<Monomial, Scalar> = BTreeMap::new();
        for (m, c) in iter {
            let slot = acc.entry(m).or_insert_with(Scalar::zero);
            *slot += c;
        }
        Self::from_map(acc)
    }

    fn from_map(map: BTreeMap<Monomial, Scalar>) -> Self {
        let terms = map.into_iter().rev().filter(|(_, c)| !c.is_zero()).collect();
        MultiPoly { terms }
    }

    pub fn terms(&self) -> &[(Monomial, Scalar)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == Monomial::ONE && self.terms[0].1.is_one()
    }

    /// The constant value, if the polynomial has degree at most zero.
    pub fn as_constant(&self) -> Option<Scalar> {
        match self.terms.as_slice() {
            [] => Some(Scalar::zero()),
            [(m, c)] if *m == Monomial::ONE => Some(c.clone()),
            _ => None,
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.first().map(|(m, _)| m.degree()).unwrap_or(0)
    }

    pub fn leading_coeff(&self) -> Option<&Scalar> {
        self.terms.first().map(|(_, c)| c)
    }

    /// `Some((c, L))` with `self = c * L` when the polynomial is a nonzero
    /// homogeneous linear form.
    pub fn as_scaled_form(&self) -> Option<(Scalar, LinearForm)> {
        if self.terms.is_empty() || self.terms.iter().any(|(m, _)| m.degree() != 1) {
            return None;
        }
        // clear denominators, then split off the content
        let mut lcm = BigInt::one();
        for (_, c) in &self.terms {
            lcm = num_integer::Integer::lcm(&lcm, c.denom());
        }
        let mut coeffs = [0i64; NVARS];
        for (m, c) in &self.terms {
            let i = m.0.iter().position(|&e| e == 1)?;
            let v = c * Scalar::from_integer(lcm.clone());
            coeffs[i] = i64::try_from(v.to_integer()).ok()?;
        }
        let scaled = LinearForm::canonical(coeffs).ok()?;
        let c = Scalar::new(BigInt::from(scaled.scale), lcm);
        Some((c, scaled.form))
    }

    pub fn neg(&self) -> Self {
        MultiPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        MultiPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, c * s)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        merge(&self.terms, &other.terms, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        merge(&self.terms, &other.terms, true)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if let Some(c) = other.as_constant() {
            return self.scale(&c);
        }
        if let Some(c) = self.as_constant() {
            return other.scale(&c);
        }
        let (small, big) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        // shifting by a monomial preserves the term order, so each partial
        // product is already sorted and can be merged linearly
        let mut acc = MultiPoly::zero();
        for (m, c) in &small.terms {
            let shifted: Vec<(Monomial, Scalar)> =
                big.terms.iter().map(|(bm, bc)| (bm.mul(m), bc * c)).collect();
            acc = merge(&acc.terms, &shifted, false);
        }
        acc
    }

    pub fn mul_form(&self, form: &LinearForm) -> Self {
        let mut acc = MultiPoly::zero();
        for (i, &c) in form.coeffs().iter().enumerate() {
            if c == 0 {
                continue;
            }
            let v = Monomial::var(i);
            let s = Scalar::from_integer(BigInt::from(c));
            let shifted: Vec<(Monomial, Scalar)> =
                self.terms.iter().map(|(m, k)| (m.mul(&v), k * &s)).collect();
            acc = merge(&acc.terms, &shifted, false);
        }
        acc
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Exact quotient by a linear form, or `None` if it does not divide.
    pub fn div_form(&self, form: &LinearForm) -> Option<Self> {
        if self.is_zero() {
            return Some(Self::zero());
        }
        if !modp::may_vanish_on(self, form) {
            return None;
        }
        let lead = form.leading_var();
        let c = Scalar::from_integer(BigInt::from(form.coeffs()[lead]));
        // rest = form - c * x_lead
        let mut rest_coeffs = *form.coeffs();
        rest_coeffs[lead] = 0;
        let rest = MultiPoly::from_terms(
            rest_coeffs
                .iter()
                .enumerate()
                .filter(|(_, &k)| k != 0)
                .map(|(i, &k)| (Monomial::var(i), Scalar::from_integer(BigInt::from(k)))),
        );
        // slice self into coefficients of powers of the leading variable
        let top = self.terms.iter().map(|(m, _)| m.0[lead]).max().unwrap_or(0) as usize;
        let mut slices: Vec<BTreeMap<Monomial, Scalar>> = alloc::vec![BTreeMap::new(); top + 1];
        for (m, k) in &self.terms {
            let mut e = m.0;
            let p = e[lead] as usize;
            e[lead] = 0;
            slices[p].insert(Monomial(e), k.clone());
        }
        let slices: Vec<MultiPoly> = slices.into_iter().map(MultiPoly::from_map).collect();
        if top == 0 {
            // lead variable absent: divisible only if rest divides, which needs
            // the lead coefficient to vanish; impossible for a canonical form
            return None;
        }
        let inv_c = Scalar::one() / c;
        let mut quot: Vec<MultiPoly> = alloc::vec![MultiPoly::zero(); top];
        quot[top - 1] = slices[top].scale(&inv_c);
        for i in (1..top).rev() {
            quot[i - 1] = slices[i].sub(&rest.mul(&quot[i])).scale(&inv_c);
        }
        if !slices[0].sub(&rest.mul(&quot[0])).is_zero() {
            return None;
        }
        let mut out = MultiPoly::zero();
        for (p, q) in quot.into_iter().enumerate() {
            if q.is_zero() {
                continue;
            }
            let shifted: Vec<(Monomial, Scalar)> = q
                .terms
                .into_iter()
                .map(|(mut m, k)| {
                    m.0[lead] += p as u32;
                    (m, k)
                })
                .collect();
            let shifted = MultiPoly::from_terms(shifted);
            out = out.add(&shifted);
        }
        Some(out)
    }

    /// Substitutes `m := lam3`.
    pub fn substitute_m_lam3(&self) -> Self {
        MultiPoly::from_terms(self.terms.iter().map(|(m, c)| {
            let mut e = m.0;
            e[2] += e[3];
            e[3] = 0;
            (Monomial(e), c.clone())
        }))
    }
}

fn merge(a: &[(Monomial, Scalar)], b: &[(Monomial, Scalar)], negate_b: bool) -> MultiPoly {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Less => {
                let c = if negate_b { -&b[j].1 } else { b[j].1.clone() };
                out.push((b[j].0, c));
                j += 1;
            }
            Ordering::Equal => {
                let c = if negate_b {
                    &a[i].1 - &b[j].1
                } else {
                    &a[i].1 + &b[j].1
                };
                if !c.is_zero() {
                    out.push((a[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend(a[i..].iter().cloned());
    for (m, c) in &b[j..] {
        out.push((*m, if negate_b { -c } else { c.clone() }));
    }
    MultiPoly { terms: out }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lam(i: usize) -> MultiPoly {
        MultiPoly::var(i)
    }

    #[test]
    fn square_of_sum_expands() {
        let s = lam(0).add(&lam(1));
        let lhs = s.mul(&s);
        let two = MultiPoly::constant(Scalar::from_integer(2.into()));
        let rhs = lam(0).mul(&lam(0)).add(&two.mul(&lam(0)).mul(&lam(1))).add(&lam(1).mul(&lam(1)));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn graded_lex_order_puts_degree_first() {
        let a = Monomial([0, 0, 0, 2]);
        let b = Monomial([1, 0, 0, 0]);
        assert!(a > b);
        assert!(Monomial([1, 0, 0, 0]) > Monomial([0, 1, 0, 0]));
    }

    #[test]
    fn divide_by_form_roundtrip() {
        let l = LinearForm::canonical([1, -2, 0, 3]).unwrap().form;
        let p = lam(2).mul(&lam(3)).add(&lam(0).pow(2)).add(&MultiPoly::constant(Scalar::from_integer(5.into())).mul(&lam(1)).mul(&lam(2)));
        let prod = p.mul_form(&l);
        assert_eq!(prod.div_form(&l), Some(p.clone()));
        assert_eq!(p.div_form(&l), None);
    }

    #[test]
    fn scaled_form_detection() {
        let p = MultiPoly::from_terms([
            (Monomial::var(0), Scalar::new((-2).into(), 3.into())),
            (Monomial::var(3), Scalar::new(4.into(), 3.into())),
        ]);
        let (c, f) = p.as_scaled_form().unwrap();
        assert_eq!(f.coeffs(), &[1, 0, 0, -2]);
        assert_eq!(c, Scalar::new((-2).into(), 3.into()));
    }
}
