//! Stability walls in the `(theta0, theta1)` plane and framed quiver representations.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::ratfun::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WallFamily {
    /// `k th0 + (k-1) th1 = 0`, `th0 < th1`, `k >= 1`.
    Lmm,
    /// `k th0 + (k+1) th1 = 0`, `th0 < th1`, `k >= 0`.
    Lmp,
    /// `k th0 + (k-1) th1 = 0`, `th0 > th1`, `k >= 1`.
    Lpm,
    /// `k th0 + (k+1) th1 = 0`, `th0 > th1`, `k >= 0`.
    Lpp,
    /// `th0 + th1 = 0`, `th0 < th1`.
    LinfMinus,
    /// `th0 + th1 = 0`, `th0 > th1`.
    LinfPlus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WallLabel {
    pub family: WallFamily,
    pub k: u32,
}

impl WallLabel {
    pub fn lmm(k: u32) -> Self {
        WallLabel { family: WallFamily::Lmm, k }
    }

    pub fn new(family: WallFamily, k: u32) -> Result<Self> {
        let min = match family {
            WallFamily::Lmm | WallFamily::Lpm => 1,
            WallFamily::Lmp | WallFamily::Lpp => 0,
            WallFamily::LinfMinus | WallFamily::LinfPlus => {
                return Ok(WallLabel { family, k: 0 });
            }
        };
        if k < min {
            return Err(Error::UnsupportedConfiguration(format!("wall index {} below {}", k, min)));
        }
        Ok(WallLabel { family, k })
    }

    /// Coefficients `(p, q)` of the line `p th0 + q th1 = 0`.
    pub fn line(&self) -> (i64, i64) {
        let k = self.k as i64;
        match self.family {
            WallFamily::Lmm | WallFamily::Lpm => (k, k - 1),
            WallFamily::Lmp | WallFamily::Lpp => (k, k + 1),
            WallFamily::LinfMinus | WallFamily::LinfPlus => (1, 1),
        }
    }

    /// `true` for the side `th0 < th1`.
    pub fn minus_side(&self) -> bool {
        matches!(self.family, WallFamily::Lmm | WallFamily::Lmp | WallFamily::LinfMinus)
    }

    pub fn contains(&self, th: &Theta) -> bool {
        let (p, q) = self.line();
        let on_line = (Scalar::from_integer(p.into()) * &th.0 + Scalar::from_integer(q.into()) * &th.1).is_zero();
        let side = if self.minus_side() { th.0 < th.1 } else { th.0 > th.1 };
        on_line && side
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self.family, WallFamily::LinfMinus | WallFamily::LinfPlus)
    }
}

impl fmt::Display for WallLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            WallFamily::Lmm => write!(f, "Lmm:{}", self.k),
            WallFamily::Lmp => write!(f, "Lmp:{}", self.k),
            WallFamily::Lpm => write!(f, "Lpm:{}", self.k),
            WallFamily::Lpp => write!(f, "Lpp:{}", self.k),
            WallFamily::LinfMinus => f.write_str("Linf-"),
            WallFamily::LinfPlus => f.write_str("Linf+"),
        }
    }
}

impl core::str::FromStr for WallLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "Linf-" => return WallLabel::new(WallFamily::LinfMinus, 0),
            "Linf+" => return WallLabel::new(WallFamily::LinfPlus, 0),
            _ => {}
        }
        let (fam, k) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("bad wall label '{}'", s)))?;
        let family = match fam {
            "Lmm" => WallFamily::Lmm,
            "Lmp" => WallFamily::Lmp,
            "Lpm" => WallFamily::Lpm,
            "Lpp" => WallFamily::Lpp,
            _ => return Err(Error::Parse(format!("unknown wall family '{}'", fam))),
        };
        let k: u32 = k.parse().map_err(|_| Error::Parse(format!("bad wall index '{}'", k)))?;
        WallLabel::new(family, k)
    }
}

/// Stability parameter `(theta0, theta1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Theta(pub Scalar, pub Scalar);

impl Theta {
    pub fn new(t0: Scalar, t1: Scalar) -> Self {
        Theta(t0, t1)
    }

    pub fn from_ints(a: i64, b: i64) -> Self {
        Theta(Scalar::from_integer(a.into()), Scalar::from_integer(b.into()))
    }

    /// `theta(V) = th0 d0 + th1 d1`.
    pub fn of_dims(&self, d0: usize, d1: usize) -> Scalar {
        &self.0 * Scalar::from_integer(BigInt::from(d0)) + &self.1 * Scalar::from_integer(BigInt::from(d1))
    }
}

/// Parses `p/q,r/s` (or plain integers) into a stability parameter.
pub fn parse_theta(s: &str) -> Result<Theta> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| Error::Parse(format!("expected 'p/q,r/s', got '{}'", s)))?;
    Ok(Theta(parse_rational(a)?, parse_rational(b)?))
}

pub fn parse_rational(s: &str) -> Result<Scalar> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational '{}'", s));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(Scalar::new(n, d))
}

/// All walls with index at most `k_max`, in a fixed order.
pub fn walls_up_to(k_max: u32) -> Vec<WallLabel> {
    let mut out = Vec::new();
    for k in 1..=k_max {
        out.push(WallLabel::lmm(k));
    }
    for k in 0..=k_max {
        out.push(WallLabel { family: WallFamily::Lmp, k });
    }
    for k in 1..=k_max {
        out.push(WallLabel { family: WallFamily::Lpm, k });
    }
    for k in 0..=k_max {
        out.push(WallLabel { family: WallFamily::Lpp, k });
    }
    out.push(WallLabel { family: WallFamily::LinfMinus, k: 0 });
    out.push(WallLabel { family: WallFamily::LinfPlus, k: 0 });
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Chamber {
    /// `th0, th1 > 0`.
    Empty,
    /// `th0, th1 < 0`.
    Nc,
    /// `th0 < 0 < th1`, `th0 + th1 > 0`: between `Lmm(lower)` and `Lmm(lower + 1)`.
    Zt { t: Scalar, lower: u32, upper: u32 },
    /// Any other chamber, bounded by two walls of the same family.
    Between { lower: WallLabel, upper: WallLabel, t: Scalar },
}

/// Side of the accumulation line `th0 + th1 = 0` approached beyond the resolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Limit {
    /// `t -> +inf` on `th0 < th1`.
    Pt,
    /// `t -> -inf` on `th0 < th1`.
    Dt,
    /// `th0 > th1`, the flop side.
    Flop,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Classification {
    OnWall(WallLabel),
    Chamber(Chamber),
    /// `theta = (0, 0)`, the common point of all wall closures.
    Origin,
    Inconclusive(Limit),
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::OnWall(w) => write!(f, "on_wall {}", w),
            Classification::Origin => f.write_str("origin"),
            Classification::Inconclusive(l) => write!(f, "inconclusive near {:?} limit", l),
            Classification::Chamber(Chamber::Empty) => f.write_str("chamber empty"),
            Classification::Chamber(Chamber::Nc) => f.write_str("chamber NC"),
            Classification::Chamber(Chamber::Zt { t, lower, upper }) => {
                write!(f, "chamber Z_t t={} in ({},{}) between Lmm:{} and Lmm:{}", t, lower, upper, lower, upper)
            }
            Classification::Chamber(Chamber::Between { lower, upper, t }) => {
                write!(f, "chamber between {} and {} t={}", lower, upper, t)
            }
        }
    }
}

/// `t = th1 / (th0 + th1)`.
pub fn theta_to_zt(th: &Theta) -> Result<Scalar> {
    let s = &th.0 + &th.1;
    if s.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(&th.1 / s)
}

/// Locates `theta` relative to all walls of index at most `k_max`.
pub fn classify_theta(th: &Theta, k_max: u32) -> Classification {
    if th.0.is_zero() && th.1.is_zero() {
        return Classification::Origin;
    }
    for w in walls_up_to(k_max) {
        if w.contains(th) {
            return Classification::OnWall(w);
        }
    }
    let zero = Scalar::zero();
    if th.0 > zero && th.1 > zero {
        return Classification::Chamber(Chamber::Empty);
    }
    if th.0 < zero && th.1 < zero {
        return Classification::Chamber(Chamber::Nc);
    }
    // mixed signs, off the axes and off th0 + th1 = 0
    let minus = th.0 < th.1;
    let t = match theta_to_zt(th) {
        Ok(t) => t,
        Err(_) => return Classification::Inconclusive(if minus { Limit::Pt } else { Limit::Flop }),
    };
    let (above, below) = if minus {
        (WallFamily::Lmm, WallFamily::Lmp)
    } else {
        (WallFamily::Lpm, WallFamily::Lpp)
    };
    if t > Scalar::one() {
        // between walls at t = n and t = n + 1
        let n = t.floor().to_integer();
        let n = u32::try_from(n).unwrap_or(u32::MAX);
        if n.saturating_add(1) > k_max || t.is_integer() {
            return Classification::Inconclusive(if minus { Limit::Pt } else { Limit::Flop });
        }
        if minus {
            return Classification::Chamber(Chamber::Zt { t, lower: n, upper: n + 1 });
        }
        return Classification::Chamber(Chamber::Between {
            lower: WallLabel { family: above, k: n },
            upper: WallLabel { family: above, k: n + 1 },
            t,
        });
    }
    // t < 0: between walls at t = -n and t = -(n + 1)
    let n = (-&t).floor().to_integer();
    let n = u32::try_from(n).unwrap_or(u32::MAX);
    if n.saturating_add(1) > k_max || t.is_integer() {
        return Classification::Inconclusive(if minus { Limit::Dt } else { Limit::Flop });
    }
    Classification::Chamber(Chamber::Between {
        lower: WallLabel { family: below, k: n },
        upper: WallLabel { family: below, k: n + 1 },
        t,
    })
}

/// `(dim V0, dim V1) = (n, n - d)`.
pub fn dimvec(n: i64, d: i64) -> (i64, i64) {
    (n, n - d)
}

/// Inverse of [`dimvec`].
pub fn dimvec_inverse(d0: i64, d1: i64) -> (i64, i64) {
    (d0, d0 - d1)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WallObject {
    pub description: String,
    pub dimvec: (u32, u32),
    pub flop: bool,
}

/// The stable object destabilizing along a wall.
pub fn wall_object(w: &WallLabel) -> WallObject {
    let k = w.k;
    let (description, dimvec, flop) = match w.family {
        WallFamily::Lmm => (format!("O_P1({})", k as i64 - 1), (k, k.saturating_sub(1)), false),
        WallFamily::Lmp => (format!("O_P1({})[1]", -(k as i64) - 1), (k, k + 1), false),
        WallFamily::Lpm => (format!("flop O_P1({})[1]", -(k as i64) - 1), (k, k.saturating_sub(1)), true),
        WallFamily::Lpp => (format!("flop O_P1({})", k as i64 - 1), (k, k + 1), true),
        WallFamily::LinfMinus => ("O_x, x in X0".to_string(), (1, 1), false),
        WallFamily::LinfPlus => ("flop O_x, x in X0+".to_string(), (1, 1), true),
    };
    WallObject {
        description,
        dimvec,
        flop,
    }
}

/// Dense matrix over the rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Scalar>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn from_ints(rows: usize, cols: usize, v: &[i64]) -> Result<Self> {
        if v.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!("{} entries for {}x{}", v.len(), rows, cols)));
        }
        Ok(Mat {
            rows,
            cols,
            data: v.iter().map(|&x| Scalar::from_integer(x.into())).collect(),
        })
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn mul(&self, o: &Mat) -> Mat {
        let mut out = Mat::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        let cur = out.get(i, j) + a * b;
                        out.set(i, j, cur);
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        (0..self.rows)
            .map(|i| (0..self.cols).fold(Scalar::zero(), |acc, j| acc + self.get(i, j) * &v[j]))
            .collect()
    }
}

/// Torus weight of a graded basis vector or arrow.
pub type GradeWeight = [i64; 5];

/// Weights of basis vectors and arrows; the framing vector has weight zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grading {
    pub v0: Vec<GradeWeight>,
    pub v1: Vec<GradeWeight>,
    /// Arrow weights in the order `a1, a2, b1, b2, c, d`.
    pub arrows: [GradeWeight; 6],
}

/// Representation of the framed quiver with `V_inf = C`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FramedRep {
    pub d0: usize,
    pub d1: usize,
    pub a1: Mat,
    pub a2: Mat,
    pub b1: Mat,
    pub b2: Mat,
    pub c: Mat,
    pub dd: Mat,
    pub framing: Vec<Scalar>,
    pub grading: Option<Grading>,
}

impl FramedRep {
    /// All arrows zero and framing zero.
    pub fn zero(d0: usize, d1: usize) -> Self {
        FramedRep {
            d0,
            d1,
            a1: Mat::zeros(d1, d0),
            a2: Mat::zeros(d1, d0),
            b1: Mat::zeros(d0, d1),
            b2: Mat::zeros(d0, d1),
            c: Mat::zeros(d0, d0),
            dd: Mat::zeros(d1, d1),
            framing: vec![Scalar::zero(); d0],
            grading: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let shapes = [
            ("a1", &self.a1, self.d1, self.d0),
            ("a2", &self.a2, self.d1, self.d0),
            ("b1", &self.b1, self.d0, self.d1),
            ("b2", &self.b2, self.d0, self.d1),
            ("c", &self.c, self.d0, self.d0),
            ("d", &self.dd, self.d1, self.d1),
        ];
        for (name, m, r, c) in shapes {
            if m.rows != r || m.cols != c || m.data.len() != r * c {
                return Err(Error::ShapeMismatch(format!("{} is {}x{}, expected {}x{}", name, m.rows, m.cols, r, c)));
            }
        }
        if self.framing.len() != self.d0 {
            return Err(Error::ShapeMismatch(format!("framing has length {}", self.framing.len())));
        }
        Ok(())
    }

    fn arrows(&self) -> [(&Mat, bool, bool); 6] {
        // (matrix, source is V0, target is V0)
        [
            (&self.a1, true, false),
            (&self.a2, true, false),
            (&self.b1, false, true),
            (&self.b2, false, true),
            (&self.c, true, true),
            (&self.dd, false, false),
        ]
    }
}

/// Checks the eight quiver relations; `Err` carries the first violated one.
pub fn check_relations(rep: &FramedRep) -> core::result::Result<(), String> {
    let a = [(&rep.a1, "a1"), (&rep.a2, "a2")];
    let b = [(&rep.b1, "b1"), (&rep.b2, "b2")];
    for (bi, bn) in b {
        if rep.a2.mul(bi).mul(&rep.a1) != rep.a1.mul(bi).mul(&rep.a2) {
            return Err(format!("a2*{bn}*a1 = a1*{bn}*a2"));
        }
    }
    for (ai, an) in a {
        if rep.b2.mul(ai).mul(&rep.b1) != rep.b1.mul(ai).mul(&rep.b2) {
            return Err(format!("b2*{an}*b1 = b1*{an}*b2"));
        }
    }
    for (ai, an) in a {
        if rep.dd.mul(ai) != ai.mul(&rep.c) {
            return Err(format!("d*{an} = {an}*c"));
        }
    }
    for (bi, bn) in b {
        if rep.c.mul(bi) != bi.mul(&rep.dd) {
            return Err(format!("c*{bn} = {bn}*d"));
        }
    }
    Ok(())
}

/// Row-reduced basis of a subspace.
#[derive(Debug, Clone, Default)]
struct Span {
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl Span {
    fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Inserts `v`; returns whether the span grew.
    fn insert(&mut self, v: &[Scalar]) -> bool {
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(self.pivots.iter()) {
            if !v[p].is_zero() {
                let f = v[p].clone();
                for (x, y) in v.iter_mut().zip(row.iter()) {
                    *x -= &f * y;
                }
            }
        }
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = Scalar::one() / &v[p];
        for x in v.iter_mut() {
            *x *= &inv;
        }
        for row in self.rows.iter_mut() {
            if !row[p].is_zero() {
                let f = row[p].clone();
                for (x, y) in row.iter_mut().zip(v.iter()) {
                    *x -= &f * y;
                }
            }
        }
        self.rows.push(v);
        self.pivots.push(p);
        true
    }
}

/// Dimension vector of the smallest arrow-stable subspace pair containing the seeds.
pub fn subrep_closure(rep: &FramedRep, seeds0: &[Vec<Scalar>], seeds1: &[Vec<Scalar>]) -> (usize, usize) {
    let mut s0 = Span::default();
    let mut s1 = Span::default();
    for v in seeds0 {
        s0.insert(v);
    }
    for v in seeds1 {
        s1.insert(v);
    }
    loop {
        let mut grew = false;
        let v0: Vec<Vec<Scalar>> = s0.rows.clone();
        let v1: Vec<Vec<Scalar>> = s1.rows.clone();
        for (m, from0, to0) in rep.arrows() {
            let src = if from0 { &v0 } else { &v1 };
            for v in src {
                let w = m.apply(v);
                grew |= if to0 { s0.insert(&w) } else { s1.insert(&w) };
            }
        }
        if !grew {
            return (s0.dim(), s1.dim());
        }
    }
}

/// The framing vector generates the whole representation.
pub fn is_cyclic(rep: &FramedRep) -> bool {
    subrep_closure(rep, core::slice::from_ref(&rep.framing), &[]) == (rep.d0, rep.d1)
}

/// Subrepresentation `(dim V0', dim V1', contains framing)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubrepWitness {
    pub d0: usize,
    pub d1: usize,
    pub framed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Stability {
    Stable,
    /// No violation, but some subrepresentation attains equality.
    Semistable(SubrepWitness),
    Unstable(SubrepWitness),
}

fn check_grading(rep: &FramedRep) -> Result<&Grading> {
    let g = rep
        .grading
        .as_ref()
        .ok_or_else(|| Error::NotMultiplicityFree("no grading supplied".to_string()))?;
    if g.v0.len() != rep.d0 || g.v1.len() != rep.d1 {
        return Err(Error::ShapeMismatch("grading length".to_string()));
    }
    for ws in [&g.v0, &g.v1] {
        let mut seen = BTreeMap::new();
        for w in ws.iter() {
            if seen.insert(*w, ()).is_some() {
                return Err(Error::NotMultiplicityFree(format!("weight {:?} repeated", w)));
            }
        }
    }
    for (idx, (m, from0, to0)) in rep.arrows().into_iter().enumerate() {
        let src = if from0 { &g.v0 } else { &g.v1 };
        let dst = if to0 { &g.v0 } else { &g.v1 };
        for i in 0..m.rows {
            for j in 0..m.cols {
                if m.get(i, j).is_zero() {
                    continue;
                }
                let mut want = src[j];
                for (x, y) in want.iter_mut().zip(g.arrows[idx].iter()) {
                    *x += *y;
                }
                if dst[i] != want {
                    return Err(Error::NotMultiplicityFree(format!("arrow {} breaks the grading", idx)));
                }
            }
        }
    }
    for (j, x) in rep.framing.iter().enumerate() {
        if !x.is_zero() && g.v0[j] != [0; 5] {
            return Err(Error::NotMultiplicityFree("framing vector is not of weight zero".to_string()));
        }
    }
    Ok(g)
}

/// Exact framed stability for graded multiplicity-free representations, by
/// enumerating arrow-stable subsets of the graded basis.
pub fn is_stable_graded(rep: &FramedRep, th: &Theta) -> Result<Stability> {
    rep.validate()?;
    check_grading(rep)?;
    let n = rep.d0 + rep.d1;
    if n > 24 {
        return Err(Error::UnsupportedConfiguration(format!("{} basis vectors", n)));
    }
    let total = th.of_dims(rep.d0, rep.d1);
    let framing_support: Vec<usize> = (0..rep.d0).filter(|&j| !rep.framing[j].is_zero()).collect();
    let arrows = rep.arrows();
    let closed = |mask: u32| -> bool {
        for (m, from0, to0) in arrows.iter() {
            for j in 0..m.cols {
                let sj = if *from0 { j } else { rep.d0 + j };
                if mask & (1 << sj) == 0 {
                    continue;
                }
                for i in 0..m.rows {
                    let ti = if *to0 { i } else { rep.d0 + i };
                    if !m.get(i, j).is_zero() && mask & (1 << ti) == 0 {
                        return false;
                    }
                }
            }
        }
        true
    };
    let full: u32 = if n == 0 { 0 } else { (1u32 << n) - 1 };
    // (excess, dim, witness): larger excess first, then larger dimension
    let mut worst: Option<(Scalar, usize, SubrepWitness)> = None;
    let mut tie: Option<SubrepWitness> = None;
    for mask in 0..=full {
        if !closed(mask) {
            continue;
        }
        let d0 = (0..rep.d0).filter(|&j| mask & (1 << j) != 0).count();
        let d1 = (rep.d0..n).filter(|&j| mask & (1 << j) != 0).count();
        let has_framing = framing_support.iter().all(|&j| mask & (1 << j) != 0);
        let val = th.of_dims(d0, d1);
        let mut cases = Vec::with_capacity(2);
        if mask != 0 {
            cases.push((false, val.clone()));
        }
        if has_framing && mask != full {
            cases.push((true, &val - &total));
        }
        for (framed, excess) in cases {
            let w = SubrepWitness { d0, d1, framed };
            if excess.is_positive() {
                let better = match &worst {
                    None => true,
                    Some((e, dim, _)) => excess > *e || (excess == *e && d0 + d1 > *dim),
                };
                if better {
                    worst = Some((excess, d0 + d1, w));
                }
            } else if excess.is_zero() && tie.is_none() {
                tie = Some(w);
            }
        }
    }
    Ok(match (worst, tie) {
        (Some((_, _, w)), _) => Stability::Unstable(w),
        (None, Some(w)) => Stability::Semistable(w),
        (None, None) => Stability::Stable,
    })
}

/// Propagates basis weights from the framing vector along nonzero arrow
/// entries. Unreached vectors receive distinct far-away weights. Returns
/// `None` if propagation is inconsistent.
pub fn infer_grading(rep: &FramedRep, arrows: [GradeWeight; 6]) -> Option<Grading> {
    let n = rep.d0 + rep.d1;
    let mut w: Vec<Option<GradeWeight>> = vec![None; n];
    for j in 0..rep.d0 {
        if !rep.framing[j].is_zero() {
            w[j] = Some([0; 5]);
        }
    }
    let edges: Vec<(usize, usize, usize)> = rep
        .arrows()
        .iter()
        .enumerate()
        .flat_map(|(idx, (m, from0, to0))| {
            let mut e = Vec::new();
            for i in 0..m.rows {
                for j in 0..m.cols {
                    if !m.get(i, j).is_zero() {
                        let s = if *from0 { j } else { rep.d0 + j };
                        let t = if *to0 { i } else { rep.d0 + i };
                        e.push((idx, s, t));
                    }
                }
            }
            e
        })
        .collect();
    let mut fresh = 1000i64;
    loop {
        let mut changed = true;
        while changed {
            changed = false;
            for &(idx, s, t) in &edges {
                let add = |x: GradeWeight, sign: i64| {
                    let mut r = x;
                    for (a, b) in r.iter_mut().zip(arrows[idx].iter()) {
                        *a += sign * *b;
                    }
                    r
                };
                match (w[s], w[t]) {
                    (Some(ws), Some(wt)) => {
                        if add(ws, 1) != wt {
                            return None;
                        }
                    }
                    (Some(ws), None) => {
                        w[t] = Some(add(ws, 1));
                        changed = true;
                    }
                    (None, Some(wt)) => {
                        w[s] = Some(add(wt, -1));
                        changed = true;
                    }
                    (None, None) => {}
                }
            }
        }
        match w.iter().position(|x| x.is_none()) {
            Some(i) => {
                w[i] = Some([fresh, 0, 0, 0, 0]);
                fresh += 1000;
            }
            None => break,
        }
    }
    let w: Vec<GradeWeight> = w.into_iter().map(|x| x.unwrap_or([0; 5])).collect();
    Some(Grading {
        v0: w[..rep.d0].to_vec(),
        v1: w[rep.d0..].to_vec(),
        arrows,
    })
}
