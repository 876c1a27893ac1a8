//! Truncated generating series, reference products and the identity checkers.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::exec::{tree_reduce, Executor};
use crate::geom::{
    example_term_l1_k2, fiber_minus, fiber_plus, i0_contribution, js_fixed_points, chiz_class, chi_x,
    compositions, FixedPoint, Support, I0,
};
use crate::kclass::Weight;
use crate::quiver::WallLabel;
use crate::ratfun::{
    binomial_rf, Backend, EvalPoint, Fp, PointStream, ProductBuilder, RatFun, Scalar, SzBound, Verdict,
    Witness, MAX_RESAMPLE, PRIME,
};
use crate::ring::Ring;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    T,
    TInv,
}

/// `sum_{d <= order} c_d x^d` with `x = t` or `x = t^-1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncSeries<C> {
    var: Var,
    coeffs: Vec<C>,
}

impl<C: Ring> TruncSeries<C> {
    /// Pads or truncates `coeffs` to `order + 1` entries.
    pub fn new(var: Var, order: u32, mut coeffs: Vec<C>) -> Self {
        coeffs.resize(order as usize + 1, C::zero());
        TruncSeries { var, coeffs }
    }

    pub fn zero(var: Var, order: u32) -> Self {
        Self::new(var, order, Vec::new())
    }

    pub fn one(var: Var, order: u32) -> Self {
        Self::new(var, order, vec![C::one()])
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn order(&self) -> u32 {
        self.coeffs.len() as u32 - 1
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn coeff(&self, d: u32) -> C {
        self.coeffs.get(d as usize).cloned().unwrap_or_else(C::zero)
    }

    pub fn truncate(&self, order: u32) -> Self {
        Self::new(self.var, order, self.coeffs.clone())
    }

    fn common(&self, o: &Self) -> Result<u32> {
        if self.var != o.var {
            return Err(Error::ShapeMismatch("series in t and t^-1 cannot be combined".to_string()));
        }
        Ok(self.order().min(o.order()))
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        let n = self.common(o)?;
        let c = (0..=n).map(|d| self.coeff(d).add(&o.coeff(d))).collect();
        Ok(Self::new(self.var, n, c))
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        let n = self.common(o)?;
        let c = (0..=n).map(|d| self.coeff(d).sub(&o.coeff(d))).collect();
        Ok(Self::new(self.var, n, c))
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        let n = self.common(o)? as usize;
        let mut c = vec![C::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(n + 1 - i) {
                c[i + j] = c[i + j].add(&a.mul(b));
            }
        }
        Ok(Self::new(self.var, n as u32, c))
    }

    /// Formal division; the divisor's constant term must be a unit.
    pub fn div(&self, o: &Self) -> Result<Self> {
        let n = self.common(o)? as usize;
        let b0 = o.coeff(0);
        if b0.is_zero() {
            return Err(Error::NonUnitDivisor);
        }
        let inv0 = b0.inv()?;
        let mut q: Vec<C> = Vec::with_capacity(n + 1);
        for d in 0..=n {
            let mut s = self.coeff(d as u32);
            for (i, qi) in q.iter().enumerate() {
                let b = o.coeff((d - i) as u32);
                if !b.is_zero() {
                    s = s.sub(&qi.mul(&b));
                }
            }
            q.push(s.mul(&inv0));
        }
        Ok(Self::new(self.var, n as u32, q))
    }
}

/// `sum_d (-1)^d C(x, d) x^(+-d)`, the expansion of `(1 - t^(+-1))^x`.
pub fn binom_series(x: &RatFun, var: Var, order: u32) -> TruncSeries<RatFun> {
    let c = (0..=order)
        .map(|d| {
            let b = binomial_rf(x, d);
            if d % 2 == 1 {
                b.neg()
            } else {
                b
            }
        })
        .collect();
    TruncSeries::new(var, order, c)
}

fn binomial_fp(x: Fp, d: u32) -> Fp {
    let mut num = Fp::ONE;
    let mut den = Fp::ONE;
    for i in 0..d {
        num = num * (x - Fp::from_i64(i as i64));
        den = den * Fp::from_i64(i as i64 + 1);
    }
    num * den.inv().expect("factorials below the prime are units")
}

/// `k m / lam3`.
pub fn m_over_lam3(k: i64) -> RatFun {
    RatFun::var(3)
        .div(&RatFun::var(2))
        .expect("lam3 is nonzero")
        .scale(&Scalar::from_integer(k.into()))
}

/// Series in `q` (truncated) and Laurent `t`; every `t`-exponent is bounded by the `q`-exponent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QtSeries<C> {
    q_order: u32,
    terms: BTreeMap<(u32, i64), C>,
}

impl<C: Ring> QtSeries<C> {
    pub fn one(q_order: u32) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert((0, 0), C::one());
        QtSeries { q_order, terms }
    }

    pub fn from_terms(q_order: u32, items: impl IntoIterator<Item = ((u32, i64), C)>) -> Self {
        let mut s = QtSeries {
            q_order,
            terms: BTreeMap::new(),
        };
        for (k, c) in items {
            s.push(k, c);
        }
        s
    }

    fn push(&mut self, key: (u32, i64), c: C) {
        if key.0 > self.q_order || c.is_zero() {
            return;
        }
        let v = match self.terms.remove(&key) {
            Some(old) => old.add(&c),
            None => c,
        };
        if !v.is_zero() {
            self.terms.insert(key, v);
        }
    }

    pub fn q_order(&self) -> u32 {
        self.q_order
    }

    pub fn terms(&self) -> &BTreeMap<(u32, i64), C> {
        &self.terms
    }

    pub fn coeff(&self, q: u32, t: i64) -> C {
        self.terms.get(&(q, t)).cloned().unwrap_or_else(C::zero)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.q_order.min(o.q_order);
        let mut r = QtSeries {
            q_order: n,
            terms: BTreeMap::new(),
        };
        for ((qa, ta), a) in &self.terms {
            for ((qb, tb), b) in &o.terms {
                if qa + qb <= n {
                    r.push((qa + qb, ta + tb), a.mul(b));
                }
            }
        }
        r
    }
}

/// `(1 - q^k t^s)^x` truncated at `q^q_order`.
fn power_factor(x: &RatFun, k: u32, s: i64, q_order: u32) -> QtSeries<RatFun> {
    let b = binom_series(x, Var::T, q_order / k);
    QtSeries::from_terms(
        q_order,
        b.coeffs()
            .iter()
            .enumerate()
            .map(|(j, c)| ((k * j as u32, s * j as i64), c.clone())),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProductKind {
    /// `prod_k (1 - q^k t)^(k m / lam3)`.
    Pt,
    /// `M(q)^(2m/lam3) prod_k (1 - q^k t)^(k m/lam3) (1 - q^k t^-1)^(k m/lam3)`.
    Nc,
    /// `M(q)^(2m/lam3) = prod_k (1 - q^k)^(-2k m/lam3)`.
    MacMahon,
}

pub fn product_series(kind: ProductKind, q_order: u32) -> QtSeries<RatFun> {
    let mut acc = QtSeries::one(q_order);
    for k in 1..=q_order {
        let x = m_over_lam3(k as i64);
        match kind {
            ProductKind::Pt => acc = acc.mul(&power_factor(&x, k, 1, q_order)),
            ProductKind::Nc => {
                acc = acc.mul(&power_factor(&x, k, 1, q_order));
                acc = acc.mul(&power_factor(&x, k, -1, q_order));
                acc = acc.mul(&power_factor(&m_over_lam3(-2 * k as i64), k, 0, q_order));
            }
            ProductKind::MacMahon => acc = acc.mul(&power_factor(&m_over_lam3(-2 * k as i64), k, 0, q_order)),
        }
    }
    acc
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrimaryChamber {
    I,
    IIIII,
    IV,
    Other,
}

/// `exp(g q x)` for a Laurent polynomial `x = sum c_t t^e`.
fn exp_series(g: i64, x: &[(i64, i64)], q_order: u32) -> QtSeries<RatFun> {
    let mut out = QtSeries::one(q_order);
    let base = QtSeries::from_terms(
        q_order,
        x.iter().map(|&(c, e)| ((1u32, e), RatFun::from_int(c * g))),
    );
    let mut pow = QtSeries::one(q_order);
    let mut fact = BigInt::one();
    for n in 1..=q_order {
        pow = pow.mul(&base);
        fact *= n;
        let s = Scalar::new(BigInt::one(), fact.clone());
        for (k, c) in pow.terms() {
            out.push(*k, c.scale(&s));
        }
    }
    out
}

/// Closed series of a compact chamber with `int gamma . E = gamma_e`.
pub fn primary_series(chamber: PrimaryChamber, gamma_e: i64, q_order: u32) -> QtSeries<RatFun> {
    match chamber {
        PrimaryChamber::I => exp_series(gamma_e, &[(1, 1)], q_order),
        PrimaryChamber::IIIII => exp_series(gamma_e, &[(1, 1), (-1, -1)], q_order),
        PrimaryChamber::IV => exp_series(gamma_e, &[(-1, -1)], q_order),
        PrimaryChamber::Other => QtSeries::one(q_order),
    }
}

/// A product of linear forms with a rational prefactor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearProduct {
    pub scale: Scalar,
    pub factors: BTreeMap<[i64; 4], i32>,
}

impl LinearProduct {
    fn new(scale: Scalar) -> Self {
        LinearProduct {
            scale,
            factors: BTreeMap::new(),
        }
    }

    fn push(&mut self, c: [i64; 4], e: i32) {
        let x = self.factors.entry(c).or_insert(0);
        *x += e;
        if *x == 0 {
            self.factors.remove(&c);
        }
    }

    pub fn to_ratfun(&self) -> Result<RatFun> {
        let mut b = ProductBuilder::new();
        b.scale(&self.scale);
        for (c, e) in &self.factors {
            b.linear(*c, *e)?;
        }
        Ok(b.finish())
    }

    pub fn eval(&self, pt: &EvalPoint) -> Option<Fp> {
        let mut acc = Fp::from_scalar(&self.scale)?;
        for (c, e) in &self.factors {
            acc = acc * Weight(*c).eval(pt).powi(i64::from(*e))?;
        }
        Some(acc)
    }
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, x| a * x)
}

/// Terms of the closed JS formula on wall `Lmm(k)` in degree `d`, one per composition.
pub fn js_closed_terms(k: u32, d: u32) -> Vec<LinearProduct> {
    const LAM0: [i64; 4] = [-1, -1, -1, 0];
    const LAM3: [i64; 4] = [0, 0, 1, 0];
    let kk = k as i64 - 1;
    let n = d as i64 * k as i64;
    let mut pre = Scalar::from_integer(if n % 2 == 0 { BigInt::one() } else { -BigInt::one() });
    for j in 1..=kk as u32 {
        pre /= Scalar::from_integer(factorial(j));
    }
    compositions(d, k as usize)
        .into_iter()
        .map(|ds| {
            let mut s = pre.clone();
            for &x in &ds {
                s /= Scalar::from_integer(factorial(x));
            }
            let mut p = LinearProduct::new(s);
            let di = |i: i64| ds[i as usize] as i64;
            for i in 0..=kk {
                for j in (i + 1)..=kk {
                    let c = (di(i) - di(j), j - i);
                    p.push([-c.1, -c.1, c.0 - c.1, 0], 1);
                    p.push(LAM0, -1);
                }
            }
            for i in 0..=kk {
                for a in 0..di(i) {
                    for b in -i..=(kk - i) {
                        p.push([b, b, b - a, 1], 1);
                        p.push(LAM3, -1);
                    }
                }
                for a in 1..=di(i) {
                    for b in 1..=(kk - i) {
                        p.push(LAM3, 1);
                        p.push([-b, -b, a - b, 0], -1);
                    }
                    for b in 1..=i {
                        p.push(LAM3, 1);
                        p.push([b, b, a + b, 0], -1);
                    }
                }
            }
            p
        })
        .collect()
}

pub fn js_closed_formula(k: u32, d: u32) -> Result<RatFun> {
    let mut acc = RatFun::zero();
    for t in js_closed_terms(k, d) {
        acc = acc.add(&t.to_ratfun()?);
    }
    Ok(acc)
}

/// `m |-> lam3`.
pub fn substitute_m(v: &RatFun) -> Result<RatFun> {
    v.substitute_m_lam3()
}

/// One side of a comparison.
#[derive(Debug, Clone)]
pub enum Value {
    Exact(RatFun),
    /// One residue per evaluation point.
    Residues(Vec<Fp>),
}

#[derive(Debug, Clone)]
pub struct DegreeRecord {
    pub d: u32,
    pub check: String,
    pub lhs: Value,
    pub rhs: Value,
    pub verdict: Verdict,
    pub backend: Backend,
}

impl DegreeRecord {
    pub fn points(&self) -> usize {
        match self.backend {
            Backend::Symbolic => 0,
            Backend::Eval { points, .. } => points,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CheckReport {
    pub command: String,
    pub params: Vec<(String, String)>,
    pub seed: Option<u64>,
    pub degrees: Vec<DegreeRecord>,
    pub sz_bound: Option<SzBound>,
    pub notes: Vec<String>,
}

impl CheckReport {
    fn new(command: &str, params: Vec<(String, String)>, backend: Backend) -> Self {
        CheckReport {
            command: command.to_string(),
            params,
            seed: match backend {
                Backend::Symbolic => None,
                Backend::Eval { seed, .. } => Some(seed),
            },
            degrees: Vec::new(),
            sz_bound: None,
            notes: Vec::new(),
        }
    }

    pub fn pass(&self) -> bool {
        self.degrees.iter().all(|r| r.verdict.is_equal())
    }

    fn push_exact(&mut self, d: u32, check: &str, lhs: RatFun, rhs: RatFun) {
        let verdict = if lhs.equals(&rhs) {
            Verdict::Equal(None)
        } else {
            Verdict::Unequal(Witness::Difference(lhs.sub(&rhs)))
        };
        self.degrees.push(DegreeRecord {
            d,
            check: check.to_string(),
            lhs: Value::Exact(lhs),
            rhs: Value::Exact(rhs),
            verdict,
            backend: Backend::Symbolic,
        });
    }

    fn push_residues(&mut self, d: u32, check: &str, lhs: Vec<Fp>, rhs: Vec<Fp>, pts: &[EvalPoint], backend: Backend) {
        let verdict = residue_verdict(&lhs, &rhs, pts);
        let (lhs, rhs) = (Value::Residues(lhs), Value::Residues(rhs));
        self.degrees.push(DegreeRecord {
            d,
            check: check.to_string(),
            lhs,
            rhs,
            verdict,
            backend,
        });
    }

    fn bound(&mut self, degree: u64, points: usize) {
        let degree = degree.max(1);
        let b = self.sz_bound.get_or_insert(SzBound {
            degree,
            prime: PRIME,
            points,
        });
        b.degree = b.degree.max(degree);
    }
}

fn residue_verdict(a: &[Fp], b: &[Fp], pts: &[EvalPoint]) -> Verdict {
    for ((x, y), pt) in a.iter().zip(b.iter()).zip(pts.iter()) {
        if x != y {
            return Verdict::Unequal(Witness::Point {
                point: *pt,
                lhs: *x,
                rhs: *y,
            });
        }
    }
    Verdict::Equal(None)
}

fn param(k: &str, v: impl ToString) -> (String, String) {
    (k.to_string(), v.to_string())
}

/// Per-label overrides of the extra sign factor.
pub type SignOverrides = BTreeMap<String, i64>;

fn override_for(p: &FixedPoint, ov: &SignOverrides) -> Option<i64> {
    ov.get(&p.label.to_string()).copied()
}

fn sum_exact<E: Executor>(exec: &E, pts: &[FixedPoint], ov: &SignOverrides) -> Result<RatFun> {
    let vals: Vec<Result<RatFun>> = exec.map(pts, |p| p.contribution_with(override_for(p, ov)));
    let vals = vals.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(tree_reduce(exec, vals, RatFun::zero(), |a, b| a.add(b)))
}

/// `Ok(None)` when some denominator vanishes at the point.
fn sum_mod<E: Executor>(exec: &E, pts: &[FixedPoint], pt: &EvalPoint, ov: &SignOverrides) -> Result<Option<Fp>> {
    let vals: Vec<Result<Option<Fp>>> = exec.map(pts, |p| p.contribution_mod(pt, override_for(p, ov)));
    let mut acc = Fp::ZERO;
    for v in vals {
        match v? {
            Some(x) => acc = acc + x,
            None => return Ok(None),
        }
    }
    Ok(Some(acc))
}

fn weight_count(p: &FixedPoint) -> u64 {
    let w = p.sqrt_class().add(&p.taut_class());
    w.terms().values().map(|m| m.unsigned_abs()).sum()
}

/// Draws evaluation points until `f` is defined, at most [`MAX_RESAMPLE`] tries per point.
fn sample<T>(
    stream: &mut PointStream,
    points: usize,
    mut f: impl FnMut(&EvalPoint) -> Result<Option<T>>,
) -> Result<(Vec<EvalPoint>, Vec<T>)> {
    let mut used = Vec::with_capacity(points);
    let mut out = Vec::with_capacity(points);
    for _ in 0..points {
        let mut got = None;
        for _ in 0..MAX_RESAMPLE {
            let pt = stream.next_point();
            if let Some(v) = f(&pt)? {
                got = Some((pt, v));
                break;
            }
        }
        let (pt, v) = got.ok_or(Error::EvalDegenerate(MAX_RESAMPLE))?;
        used.push(pt);
        out.push(v);
    }
    Ok((used, out))
}

fn m_over_lam3_mod(pt: &EvalPoint, k: i64) -> Option<Fp> {
    Some(Fp::from_i64(k) * pt.values[3] * pt.values[2].inv()?)
}

/// Compares the JS localization sum, the closed formula and `(-1)^d C(k m/lam3, d)`.
pub fn check_js<E: Executor>(exec: &E, k: u32, d_max: u32, backend: Backend) -> Result<CheckReport> {
    let mut rep = CheckReport::new("js", vec![param("k", k), param("dmax", d_max)], backend);
    for d in 1..=d_max {
        let pts = js_fixed_points(k, d)?;
        let ov = SignOverrides::new();
        match backend {
            Backend::Symbolic => {
                let loc = sum_exact(exec, &pts, &ov)?;
                let terms = js_closed_terms(k, d);
                let closed: Vec<Result<RatFun>> = exec.map(&terms, |t| t.to_ratfun());
                let closed = closed.into_iter().collect::<Result<Vec<_>>>()?;
                let closed = tree_reduce(exec, closed, RatFun::zero(), |a, b| a.add(b));
                let b = binomial_rf(&m_over_lam3(k as i64), d);
                let b = if d % 2 == 1 { b.neg() } else { b };
                rep.push_exact(d, "localization=binomial", loc.clone(), b.clone());
                rep.push_exact(d, "closed=binomial", closed.clone(), b);
                rep.push_exact(d, "localization=closed", loc, closed);
            }
            Backend::Eval { points, seed } => {
                let terms = js_closed_terms(k, d);
                let mut stream = PointStream::new(seed);
                let (used, vals) = sample(&mut stream, points, |pt| {
                    let Some(loc) = sum_mod(exec, &pts, pt, &ov)? else { return Ok(None) };
                    let mut closed = Fp::ZERO;
                    for t in &terms {
                        match t.eval(pt) {
                            Some(v) => closed = closed + v,
                            None => return Ok(None),
                        }
                    }
                    let Some(x) = m_over_lam3_mod(pt, k as i64) else { return Ok(None) };
                    let b = binomial_fp(x, d);
                    Ok(Some((loc, closed, if d % 2 == 1 { -b } else { b })))
                })?;
                let loc: Vec<Fp> = vals.iter().map(|v| v.0).collect();
                let closed: Vec<Fp> = vals.iter().map(|v| v.1).collect();
                let bin: Vec<Fp> = vals.iter().map(|v| v.2).collect();
                let deg = pts.iter().map(weight_count).sum::<u64>()
                    + terms.iter().map(|t| t.factors.values().map(|e| e.unsigned_abs() as u64).sum::<u64>()).sum::<u64>()
                    + 2 * d as u64;
                rep.bound(deg, points);
                rep.push_residues(d, "localization=binomial", loc.clone(), bin.clone(), &used, backend);
                rep.push_residues(d, "closed=binomial", closed.clone(), bin, &used, backend);
                rep.push_residues(d, "localization=closed", loc, closed, &used, backend);
            }
        }
    }
    Ok(rep)
}

/// Fixed points by degree.
pub type Fibers = Vec<Vec<FixedPoint>>;

/// Fixed points on both sides of the wall for every degree up to `t_max`.
pub fn wall_fibers(wall: &WallLabel, i0: I0, t_max: u32) -> Result<(Fibers, Fibers)> {
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    for d in 0..=t_max {
        plus.push(fiber_plus(wall, i0, d)?);
        minus.push(fiber_minus(wall, i0, d)?);
    }
    Ok((plus, minus))
}

/// `[sum_d t^d sum_+ contribution] / [sum_d t^d sum_- contribution]`.
pub fn wallcross_quotient<E: Executor>(
    exec: &E,
    wall: &WallLabel,
    i0: I0,
    t_max: u32,
    ov: &SignOverrides,
) -> Result<TruncSeries<RatFun>> {
    let (plus, minus) = wall_fibers(wall, i0, t_max)?;
    let p = plus.iter().map(|f| sum_exact(exec, f, ov)).collect::<Result<Vec<_>>>()?;
    let m = minus.iter().map(|f| sum_exact(exec, f, ov)).collect::<Result<Vec<_>>>()?;
    TruncSeries::new(Var::T, t_max, p).div(&TruncSeries::new(Var::T, t_max, m))
}

/// Same quotient with coefficients reduced at one evaluation point.
pub fn wallcross_quotient_mod<E: Executor>(
    exec: &E,
    plus: &[Vec<FixedPoint>],
    minus: &[Vec<FixedPoint>],
    pt: &EvalPoint,
    ov: &SignOverrides,
) -> Result<Option<TruncSeries<Fp>>> {
    let t_max = plus.len() as u32 - 1;
    let mut p = Vec::new();
    let mut m = Vec::new();
    for (fp, fm) in plus.iter().zip(minus.iter()) {
        let (Some(a), Some(b)) = (sum_mod(exec, fp, pt, ov)?, sum_mod(exec, fm, pt, ov)?) else {
            return Ok(None);
        };
        p.push(a);
        m.push(b);
    }
    if m[0].is_zero() {
        return Ok(None);
    }
    Ok(Some(TruncSeries::new(Var::T, t_max, p).div(&TruncSeries::new(Var::T, t_max, m))?))
}

/// Compares the wall-crossing quotient with `(1 - t)^(k m / lam3)`.
pub fn check_wallcross<E: Executor>(
    exec: &E,
    wall: &WallLabel,
    i0: I0,
    t_max: u32,
    backend: Backend,
    ov: &SignOverrides,
) -> Result<CheckReport> {
    let k = wall.k as i64;
    let mut rep = CheckReport::new(
        "wallcross",
        vec![param("wall", wall), param("i0", i0), param("tmax", t_max)],
        backend,
    );
    let (plus, minus) = wall_fibers(wall, i0, t_max)?;
    let labels: Vec<String> = plus
        .iter()
        .chain(minus.iter())
        .flatten()
        .map(|p| p.label.to_string())
        .collect();
    for l in ov.keys() {
        if !labels.contains(l) {
            rep.notes.push(format!("sign override {} matches no fixed point", l));
        }
    }
    match backend {
        Backend::Symbolic => {
            let p = plus.iter().map(|f| sum_exact(exec, f, ov)).collect::<Result<Vec<_>>>()?;
            let m = minus.iter().map(|f| sum_exact(exec, f, ov)).collect::<Result<Vec<_>>>()?;
            let q = TruncSeries::new(Var::T, t_max, p).div(&TruncSeries::new(Var::T, t_max, m))?;
            let rhs = binom_series(&m_over_lam3(k), Var::T, t_max);
            for d in 0..=t_max {
                rep.push_exact(d, "quotient=binomial", q.coeff(d), rhs.coeff(d));
            }
        }
        Backend::Eval { points, seed } => {
            let mut stream = PointStream::new(seed);
            let (used, vals) = sample(&mut stream, points, |pt| {
                let Some(q) = wallcross_quotient_mod(exec, &plus, &minus, pt, ov)? else { return Ok(None) };
                let Some(x) = m_over_lam3_mod(pt, k) else { return Ok(None) };
                let rhs: Vec<Fp> = (0..=t_max)
                    .map(|d| {
                        let b = binomial_fp(x, d);
                        if d % 2 == 1 {
                            -b
                        } else {
                            b
                        }
                    })
                    .collect();
                Ok(Some((q, rhs)))
            })?;
            let mut acc = 0u64;
            for d in 0..=t_max {
                let w: u64 = plus[d as usize].iter().chain(minus[d as usize].iter()).map(weight_count).sum();
                acc += w;
                rep.bound((d as u64 + 1) * acc + 2 * d as u64, points);
                let lhs = vals.iter().map(|v| v.0.coeff(d)).collect();
                let rhs = vals.iter().map(|v| v.1[d as usize]).collect();
                rep.push_residues(d, "quotient=binomial", lhs, rhs, &used, backend);
            }
        }
    }
    Ok(rep)
}

/// Checks the `m = lam3` specialization of every JS fixed point.
pub fn check_dimred<E: Executor>(exec: &E, k: u32, d_max: u32) -> Result<CheckReport> {
    let mut rep = CheckReport::new("dimred", vec![param("k", k), param("dmax", d_max)], Backend::Symbolic);
    for d in 1..=d_max {
        let pts = js_fixed_points(k, d)?;
        let rows: Vec<Result<(RatFun, Option<RatFun>, bool)>> = exec.map(&pts, |p| {
            let s = substitute_m(&p.contribution()?)?;
            match p.support {
                Support::Thickened => Ok((s, None, chi_x(&p.sheaf).mult(&Weight::T3) != 0)),
                Support::OnZ => Ok((s, Some(chiz_class(&p.sheaf).euler_class()?), true)),
            }
        });
        let mut total = RatFun::zero();
        for (p, row) in pts.iter().zip(rows) {
            let (s, z, has_t3) = row?;
            total = total.add(&s);
            match z {
                None => {
                    rep.push_exact(d, &format!("thickened-zero {}", p.label), s, RatFun::zero());
                    if !has_t3 {
                        rep.notes.push(format!("{}: chi_X(F) lacks the weight t3", p.label));
                    }
                }
                Some(e) => rep.push_exact(d, &format!("on-z-euler {}", p.label), s, e),
            }
        }
        let c = binomial_rf(&RatFun::from_int(k as i64), d);
        let c = if d % 2 == 1 { c.neg() } else { c };
        rep.push_exact(d, "total=binomial", total, c);
    }
    Ok(rep)
}

/// `sum_d t^d sum sign e(sqrt)` against `exp(-t/lam3)` for `k = 1` and `1` otherwise.
pub fn check_insertion_free<E: Executor>(exec: &E, k: u32, d_max: u32) -> Result<CheckReport> {
    let mut rep = CheckReport::new("insertion-free", vec![param("k", k), param("dmax", d_max)], Backend::Symbolic);
    let inv_l3 = RatFun::var(2).inv()?;
    for d in 0..=d_max {
        let pts = js_fixed_points(k, d)?;
        let vals: Vec<Result<RatFun>> = exec.map(&pts, |p| p.insertion_free());
        let vals = vals.into_iter().collect::<Result<Vec<_>>>()?;
        let lhs = tree_reduce(exec, vals, RatFun::zero(), |a, b| a.add(b));
        let rhs = if k == 1 {
            inv_l3
                .neg()
                .pow(d as i32)?
                .scale(&Scalar::new(BigInt::one(), factorial(d)))
        } else if d == 0 {
            RatFun::one()
        } else {
            RatFun::zero()
        };
        rep.push_exact(d, "series=expected", lhs, rhs);
    }
    Ok(rep)
}

/// Sum of the closed example products against the fiber sum over `Lmm(2)`, `I_{lP1}` with `l = 1`.
pub fn check_example<E: Executor>(exec: &E, d_max: u32) -> Result<CheckReport> {
    let mut rep = CheckReport::new("example", vec![param("dmax", d_max)], Backend::Symbolic);
    let wall = WallLabel::lmm(2);
    let i0 = I0::IlP1(1);
    let base = i0_contribution(i0)?;
    for d in 0..=d_max {
        let quads: Vec<[u32; 4]> = compositions(d, 4)
            .into_iter()
            .map(|c| [c[0], c[1], c[2], c[3]])
            .collect();
        let ex: Vec<Result<RatFun>> = exec.map(&quads, |q| example_term_l1_k2(*q));
        let ex = ex.into_iter().collect::<Result<Vec<_>>>()?;
        let ex = tree_reduce(exec, ex, RatFun::zero(), |a, b| a.add(b));
        let pts = fiber_plus(&wall, i0, d)?;
        let fib = sum_exact(exec, &pts, &SignOverrides::new())?.div(&base)?;
        let b = binomial_rf(&m_over_lam3(2), d);
        let b = if d % 2 == 1 { b.neg() } else { b };
        rep.push_exact(d, "example=fiber", ex.clone(), fib.clone());
        rep.push_exact(d, "fiber=binomial", fib, b.clone());
        rep.push_exact(d, "example=binomial", ex, b);
    }
    Ok(rep)
}

/// Hard cap on the number of points in [`sign_search`].
pub const SIGN_SEARCH_CAP: usize = 20;

/// First sign vector (lexicographic, `+1` before `-1`) making the signed sum
/// of contributions equal `target`.
pub fn sign_search(points: &[FixedPoint], target: &RatFun) -> Result<Option<Vec<i64>>> {
    if points.len() > SIGN_SEARCH_CAP {
        return Err(Error::CapExceeded {
            points: points.len(),
            cap: SIGN_SEARCH_CAP,
        });
    }
    let n = points.len();
    let exact = points.iter().map(|p| p.contribution()).collect::<Result<Vec<_>>>()?;
    let mut stream = PointStream::new(0x5167);
    let (_, screens) = sample(&mut stream, 2, |pt| {
        let mut v = Vec::with_capacity(n);
        for c in &exact {
            match c.eval(pt) {
                Some(x) => v.push(x),
                None => return Ok(None),
            }
        }
        Ok(target.eval(pt).map(|t| (v, t)))
    })?;
    for mask in 0u32..(1u32 << n) {
        let signs: Vec<i64> = (0..n)
            .map(|i| if mask & (1 << (n - 1 - i)) == 0 { 1 } else { -1 })
            .collect();
        let ok = screens.iter().all(|(v, t)| {
            let s = v
                .iter()
                .zip(signs.iter())
                .fold(Fp::ZERO, |a, (x, &s)| if s > 0 { a + *x } else { a - *x });
            s == *t
        });
        if !ok {
            continue;
        }
        let sum = exact
            .iter()
            .zip(signs.iter())
            .fold(RatFun::zero(), |a, (x, &s)| if s > 0 { a.add(x) } else { a.sub(x) });
        if sum.equals(target) {
            return Ok(Some(signs));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::Sequential;
    use num_traits::Zero;

    fn tser(c: &[i64], order: u32) -> TruncSeries<RatFun> {
        TruncSeries::new(Var::T, order, c.iter().map(|&x| RatFun::from_int(x)).collect())
    }

    #[test]
    fn series_arith_examples() {
        let a = tser(&[1, 1], 2);
        let b = tser(&[1, -1], 2);
        assert_eq!(a.mul(&b).unwrap().coeffs().iter().map(|c| c.as_constant().unwrap()).collect::<Vec<_>>(), [
            Scalar::one(),
            Scalar::zero(),
            -Scalar::one()
        ]);
        let q = tser(&[1], 3).div(&tser(&[1, -1], 3)).unwrap();
        assert!(q.coeffs().iter().all(|c| c.equals(&RatFun::one())));
        assert!(matches!(tser(&[1], 2).div(&tser(&[0, 1], 2)), Err(Error::NonUnitDivisor)));
    }

    #[test]
    fn binom_series_examples() {
        let x = m_over_lam3(1);
        let s = binom_series(&x, Var::T, 2);
        assert!(s.coeff(1).equals(&x.neg()));
        let half = Scalar::new(1.into(), 2.into());
        assert!(s.coeff(2).equals(&x.mul(&x.sub(&RatFun::one())).scale(&half)));
        assert_eq!(binom_series(&x, Var::T, 0).order(), 0);
    }

    #[test]
    fn product_examples() {
        let pt = product_series(ProductKind::Pt, 2);
        assert!(pt.coeff(1, 1).equals(&m_over_lam3(-1)));
        let mm = product_series(ProductKind::MacMahon, 2);
        assert!(mm.coeff(1, 0).equals(&m_over_lam3(2)));
        let nc = product_series(ProductKind::Nc, 2);
        assert!(nc.coeff(1, -1).equals(&m_over_lam3(-1)));
        assert!(nc.coeff(1, 0).equals(&m_over_lam3(2)));
    }

    #[test]
    fn primary_examples() {
        let s = primary_series(PrimaryChamber::I, 1, 3);
        assert!(s.coeff(2, 2).equals(&RatFun::from_ratio(1, 2).unwrap()));
        let s = primary_series(PrimaryChamber::IIIII, 1, 3);
        assert!(s.coeff(1, -1).equals(&RatFun::from_int(-1)));
        let o = primary_series(PrimaryChamber::Other, 5, 3);
        assert_eq!(o.terms().len(), 1);
    }

    #[test]
    fn js_small() {
        let r = check_js(&Sequential, 1, 2, Backend::Symbolic).unwrap();
        assert!(r.pass());
        let r = check_js(&Sequential, 2, 2, Backend::Eval { points: 3, seed: 42 }).unwrap();
        assert!(r.pass());
    }

    #[test]
    fn wallcross_small() {
        let ov = SignOverrides::new();
        let q = wallcross_quotient(&Sequential, &WallLabel::lmm(2), I0::IlP1(1), 1, &ov).unwrap();
        assert!(q.coeff(1).equals(&m_over_lam3(-2)));
        let q = wallcross_quotient(&Sequential, &WallLabel::lmm(3), I0::Ox, 0, &ov).unwrap();
        assert!(q.coeff(0).equals(&RatFun::one()));
    }

    #[test]
    fn sign_search_examples() {
        let p = js_fixed_points(1, 1).unwrap();
        assert_eq!(sign_search(&p, &m_over_lam3(-1)).unwrap(), Some(vec![1]));
        assert_eq!(sign_search(&p, &m_over_lam3(1)).unwrap(), Some(vec![-1]));
    }
}
