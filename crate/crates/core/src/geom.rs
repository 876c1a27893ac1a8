//! Equivariant sheaves on the zero section `P1`, localization classes and
//! the torus-fixed points on the walls `Lmm(k)`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::kclass::{chi_p1, KClass, Weight};
use crate::quiver::{WallFamily, WallLabel};
use crate::ratfun::{EvalPoint, Fp, ProductBuilder, RatFun};

/// `O(a Z0 + b Zinf) (x) twist`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LineBundle {
    pub a: i64,
    pub b: i64,
    pub twist: Weight,
}

impl LineBundle {
    pub fn new(a: i64, b: i64, twist: Weight) -> Self {
        LineBundle { a, b, twist }
    }

    /// `L (x) sum_{j < r} t3^j`.
    pub fn thickened(self, r: u32) -> impl Iterator<Item = LineBundle> {
        (0..r as i64).map(move |j| LineBundle {
            twist: self.twist.add(Weight::T3.scale(j)),
            ..self
        })
    }
}

/// Direct sum of equivariant line bundles on `P1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct EquivSheaf {
    pub summands: Vec<LineBundle>,
}

impl EquivSheaf {
    pub fn new(summands: Vec<LineBundle>) -> Self {
        EquivSheaf { summands }
    }

    pub fn push_thickened(&mut self, l: LineBundle, r: u32) {
        self.summands.extend(l.thickened(r));
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ambient {
    P1,
    Y3fold,
    Z3fold,
    X4fold,
}

impl Ambient {
    /// Normal bundle of the zero section.
    pub fn normal(&self) -> Vec<LineBundle> {
        let n1 = LineBundle::new(0, -1, Weight::T1.neg());
        let n2 = LineBundle::new(0, -1, Weight::T2.neg());
        let n3 = LineBundle::new(0, 0, Weight::T3.neg());
        match self {
            Ambient::P1 => vec![],
            Ambient::Y3fold => vec![n1, n3],
            Ambient::Z3fold => vec![n1, n2],
            Ambient::X4fold => vec![n1, n2, n3],
        }
    }
}

/// `chi_X(F) = sum twist (x) chi_p1(a, b)`.
pub fn chi_x(f: &EquivSheaf) -> KClass {
    let mut k = KClass::new();
    for l in &f.summands {
        k = k.add(&chi_p1(l.a, l.b).twist(l.twist));
    }
    k
}

fn exterior_powers(n: &[LineBundle]) -> Vec<Vec<LineBundle>> {
    let mut out = vec![Vec::new(); n.len() + 1];
    for mask in 0u32..(1 << n.len()) {
        let mut l = LineBundle::new(0, 0, Weight::ZERO);
        for (i, s) in n.iter().enumerate() {
            if mask & (1 << i) != 0 {
                l.a += s.a;
                l.b += s.b;
                l.twist = l.twist.add(s.twist);
            }
        }
        out[mask.count_ones() as usize].push(l);
    }
    out
}

/// `sum_p (-1)^p chi_P1(F, G (x) wedge^p N)` over all summand pairs.
pub fn chi_pair(f: &EquivSheaf, g: &EquivSheaf, ambient: Ambient) -> Result<KClass> {
    if ambient == Ambient::X4fold {
        return Err(Error::UnsupportedConfiguration(
            "pairing over the 4-fold has no three-term adjunction".to_string(),
        ));
    }
    let wedges = exterior_powers(&ambient.normal());
    let mut acc: alloc::collections::BTreeMap<(i64, i64, Weight), i64> = alloc::collections::BTreeMap::new();
    for (p, ws) in wedges.iter().enumerate() {
        let sign = if p % 2 == 0 { 1 } else { -1 };
        for li in &f.summands {
            for lj in &g.summands {
                for w in ws {
                    let key = (
                        lj.a + w.a - li.a,
                        lj.b + w.b - li.b,
                        lj.twist.add(w.twist).add(li.twist.neg()),
                    );
                    *acc.entry(key).or_insert(0) += sign;
                }
            }
        }
    }
    let mut k = KClass::new();
    for ((a, b, tw), m) in acc {
        if m != 0 {
            for (w, c) in chi_p1(a, b).terms() {
                k.push(w.add(tw), c * m);
            }
        }
    }
    Ok(k)
}

/// `-chi_X(F) + chi_Y(F, F)`.
pub fn sqrt_class(f: &EquivSheaf) -> KClass {
    chi_pair(f, f, Ambient::Y3fold)
        .expect("Y3fold pairing is supported")
        .sub(&chi_x(f))
}

/// `chi_X(F)^dual (x) e^m`.
pub fn taut_class(f: &EquivSheaf) -> KClass {
    chi_x(f).dual().twist(Weight::EM)
}

/// `chi_Z(F, F) - chi_X(F) + chi_X(F)^dual (x) t3`.
pub fn chiz_class(f: &EquivSheaf) -> KClass {
    let c = chi_x(f);
    chi_pair(f, f, Ambient::Z3fold)
        .expect("Z3fold pairing is supported")
        .sub(&c)
        .add(&c.dual().twist(Weight::T3))
}

/// The pair `O_X -> I0`-part on the wall.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum I0 {
    Ox,
    IlP1(u32),
    IP1,
}

impl I0 {
    /// Sheaf part of the pair.
    pub fn sheaf(&self) -> EquivSheaf {
        let mut s = EquivSheaf::default();
        match self {
            I0::Ox => {}
            I0::IlP1(l) => s.push_thickened(LineBundle::new(0, 0, Weight::ZERO), *l),
            I0::IP1 => s.summands.push(LineBundle::new(0, 0, Weight::ZERO)),
        }
        s
    }
}

impl fmt::Display for I0 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            I0::Ox => f.write_str("OX"),
            I0::IlP1(l) => write!(f, "IlP1:{}", l),
            I0::IP1 => f.write_str("IP1"),
        }
    }
}

impl core::str::FromStr for I0 {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "OX" => Ok(I0::Ox),
            "IP1" => Ok(I0::IP1),
            other => {
                let l = other
                    .strip_prefix("IlP1:")
                    .and_then(|x| x.parse::<u32>().ok())
                    .filter(|&l| l >= 1)
                    .ok_or_else(|| Error::Parse(format!("bad I0 '{}'", other)))?;
                Ok(I0::IlP1(l))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Support {
    /// Every summand has trivial `t3`-weight.
    OnZ,
    Thickened,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Label {
    Js { k: u32, comp: Vec<u32> },
    Plus { wall: u32, i0: I0, comp: Vec<u32> },
    Minus { wall: u32, i0: I0, subset: Vec<u32> },
}

fn join(v: &[u32]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Js { k, comp } => {
                write!(f, "js:k={},d={},comp={}", k, comp.iter().sum::<u32>(), join(comp))
            }
            Label::Plus { wall, i0, comp } => write!(f, "plus:Lmm{},i0={},comp={}", wall, i0, join(comp)),
            Label::Minus { wall, i0, subset } => {
                write!(f, "minus:Lmm{},i0={},subset={}", wall, i0, join(subset))
            }
        }
    }
}

fn parse_list(s: &str) -> Result<Vec<u32>> {
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|x| x.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad entry '{}'", x))))
        .collect()
}

impl core::str::FromStr for Label {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad fixed-point label '{}'", s));
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("js:") {
            let rest = rest.strip_prefix("k=").ok_or_else(bad)?;
            let (k, rest) = rest.split_once(",d=").ok_or_else(bad)?;
            let (d, comp) = rest.split_once(",comp=").ok_or_else(bad)?;
            let k: u32 = k.parse().map_err(|_| bad())?;
            let d: u32 = d.parse().map_err(|_| bad())?;
            let comp = parse_list(comp)?;
            if comp.iter().sum::<u32>() != d || comp.len() != k as usize {
                return Err(bad());
            }
            return Ok(Label::Js { k, comp });
        }
        let (kind, rest) = s.split_once(':').ok_or_else(bad)?;
        let rest = rest.strip_prefix("Lmm").ok_or_else(bad)?;
        let (wall, rest) = rest.split_once(",i0=").ok_or_else(bad)?;
        let wall: u32 = wall.parse().map_err(|_| bad())?;
        match kind {
            "plus" => {
                let (i0, comp) = rest.split_once(",comp=").ok_or_else(bad)?;
                Ok(Label::Plus {
                    wall,
                    i0: i0.parse()?,
                    comp: parse_list(comp)?,
                })
            }
            "minus" => {
                let (i0, subset) = rest.split_once(",subset=").ok_or_else(bad)?;
                Ok(Label::Minus {
                    wall,
                    i0: i0.parse()?,
                    subset: parse_list(subset)?,
                })
            }
            _ => Err(bad()),
        }
    }
}

/// A torus-fixed pair with its sheaf and sign data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedPoint {
    pub label: Label,
    pub sheaf: EquivSheaf,
    pub chi: i64,
    pub deg: i64,
    pub sign_extra: i64,
    pub support: Support,
}

impl FixedPoint {
    fn build(label: Label, sheaf: EquivSheaf, sign_extra: i64) -> Self {
        let chi = chi_x(&sheaf).rank();
        let deg = sheaf.summands.len() as i64;
        let support = if sheaf.summands.iter().all(|l| l.twist.0[2] == 0) {
            Support::OnZ
        } else {
            Support::Thickened
        };
        FixedPoint {
            label,
            sheaf,
            chi,
            deg,
            sign_extra,
            support,
        }
    }

    /// Total sign `(-1)^(chi + deg + sign_extra)`, or `(-1)^(chi + deg) * o`
    /// when the extra sign factor is overridden by `o = +-1`.
    pub fn sign(&self, override_extra: Option<i64>) -> i64 {
        let base = if (self.chi + self.deg).rem_euclid(2) == 0 { 1 } else { -1 };
        match override_extra {
            Some(o) => base * o.signum(),
            None => {
                if self.sign_extra.rem_euclid(2) == 0 {
                    base
                } else {
                    -base
                }
            }
        }
    }

    pub fn sqrt_class(&self) -> KClass {
        sqrt_class(&self.sheaf)
    }

    pub fn taut_class(&self) -> KClass {
        taut_class(&self.sheaf)
    }

    pub fn contribution(&self) -> Result<RatFun> {
        self.contribution_with(None)
    }

    /// Signed `e(sqrt) * e(taut)`.
    pub fn contribution_with(&self, override_extra: Option<i64>) -> Result<RatFun> {
        let both = self.sqrt_class().add(&self.taut_class());
        let sq = self.sqrt_class();
        if sq.zero_mult() < 0 {
            return Err(Error::PoleAtZeroWeight(sq.zero_mult()));
        }
        let e = both.euler_class()?;
        Ok(if self.sign(override_extra) < 0 { e.neg() } else { e })
    }

    /// Contribution at an evaluation point; `Ok(None)` on a denominator zero.
    pub fn contribution_mod(&self, pt: &EvalPoint, override_extra: Option<i64>) -> Result<Option<Fp>> {
        let sq = self.sqrt_class();
        if sq.zero_mult() < 0 {
            return Err(Error::PoleAtZeroWeight(sq.zero_mult()));
        }
        let v = sq.add(&self.taut_class()).euler_mod(pt)?;
        Ok(v.map(|x| if self.sign(override_extra) < 0 { -x } else { x }))
    }

    /// Signed `e(sqrt)` alone.
    pub fn insertion_free(&self) -> Result<RatFun> {
        let e = self.sqrt_class().euler_class()?;
        Ok(if self.sign(None) < 0 { e.neg() } else { e })
    }
}

/// Compositions of `d` into `parts` nonnegative parts, in descending lexicographic order.
pub fn compositions(d: u32, parts: usize) -> Vec<Vec<u32>> {
    fn rec(d: u32, parts: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if parts == 1 {
            cur.push(d);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for first in (0..=d).rev() {
            cur.push(first);
            rec(d - first, parts - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if parts == 0 {
        if d == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(d, parts, &mut Vec::with_capacity(parts), &mut out);
    out
}

/// Size-`d` subsets of `{lo..=hi}` in lexicographic order.
pub fn subsets(lo: u32, hi: u32, d: usize) -> Vec<Vec<u32>> {
    fn rec(start: u32, hi: u32, d: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == d {
            out.push(cur.clone());
            return;
        }
        let mut x = start;
        while x <= hi {
            cur.push(x);
            rec(x + 1, hi, d, cur, out);
            cur.pop();
            x += 1;
        }
    }
    let mut out = Vec::new();
    rec(lo, hi, d, &mut Vec::new(), &mut out);
    out
}

fn js_point(k: u32, comp: Vec<u32>) -> FixedPoint {
    let mut sheaf = EquivSheaf::default();
    for (i, &di) in comp.iter().enumerate() {
        let i = i as i64;
        sheaf.push_thickened(LineBundle::new(i, k as i64 - 1 - i, Weight::ZERO), di);
    }
    FixedPoint::build(Label::Js { k, comp }, sheaf, 0)
}

/// One point per composition of `d` into `k` parts.
pub fn js_fixed_points(k: u32, d: u32) -> Result<Vec<FixedPoint>> {
    if k == 0 {
        return Err(Error::UnsupportedConfiguration("wall index k must be at least 1".to_string()));
    }
    Ok(compositions(d, k as usize).into_iter().map(|c| js_point(k, c)).collect())
}

fn wall_index(wall: &WallLabel) -> Result<u32> {
    if wall.family != WallFamily::Lmm {
        return Err(Error::UnsupportedConfiguration(format!(
            "no fixed-point classification on wall {}",
            wall
        )));
    }
    Ok(wall.k)
}

fn check_pair(k: u32, i0: I0) -> Result<()> {
    let ok = match i0 {
        I0::Ox => k >= 1,
        I0::IlP1(l) => k == 2 && l >= 1,
        I0::IP1 => k >= 3,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::UnsupportedConfiguration(format!(
            "no fixed-point classification for wall Lmm:{} with I0 = {}",
            k, i0
        )))
    }
}

fn comp_len(k: u32, i0: I0) -> usize {
    match i0 {
        I0::Ox => k as usize,
        I0::IlP1(_) => 4,
        I0::IP1 => 3 * k as usize - 2,
    }
}

fn plus_point(k: u32, i0: I0, comp: Vec<u32>) -> Result<FixedPoint> {
    check_pair(k, i0)?;
    if comp.len() != comp_len(k, i0) {
        return Err(Error::Parse(format!("composition needs {} parts", comp_len(k, i0))));
    }
    match i0 {
        I0::Ox => {
            let p = js_point(k, comp.clone());
            Ok(FixedPoint {
                label: Label::Plus { wall: k, i0, comp },
                ..p
            })
        }
        I0::IlP1(l) => {
            let mut sheaf = i0.sheaf();
            let t3l = Weight::T3.scale(l as i64);
            let parts = [
                LineBundle::new(0, 1, Weight::T1),
                LineBundle::new(0, 1, Weight::T2),
                LineBundle::new(0, 1, t3l),
                LineBundle::new(1, 0, t3l),
            ];
            for (lb, &di) in parts.iter().zip(comp.iter()) {
                sheaf.push_thickened(*lb, di);
            }
            let sign = if comp[1] > 0 { 1 } else { 0 };
            Ok(FixedPoint::build(Label::Plus { wall: k, i0, comp }, sheaf, sign))
        }
        I0::IP1 => {
            let km = k as usize - 1;
            let (ds, rest) = comp.split_at(km);
            let (es, fs) = rest.split_at(km);
            let mut sheaf = i0.sheaf();
            let ki = k as i64;
            for (i, &di) in ds.iter().enumerate() {
                let i = i as i64 + 1;
                sheaf.push_thickened(LineBundle::new(ki - 1 - i, i, Weight::T1), di);
            }
            for (i, &ei) in es.iter().enumerate() {
                let i = i as i64 + 1;
                sheaf.push_thickened(LineBundle::new(ki - 1 - i, i, Weight::T2), ei);
            }
            for (i, &fi) in fs.iter().enumerate() {
                let i = i as i64;
                sheaf.push_thickened(LineBundle::new(ki - 1 - i, i, Weight::T3), fi);
            }
            let sign = es.iter().filter(|&&e| e > 0).count() as i64;
            Ok(FixedPoint::build(Label::Plus { wall: k, i0, comp }, sheaf, sign))
        }
    }
}

fn minus_point(k: u32, i0: I0, subset: Vec<u32>) -> Result<FixedPoint> {
    check_pair(k, i0)?;
    let mut sheaf = i0.sheaf();
    match i0 {
        I0::Ox | I0::IlP1(_) => {
            if !subset.is_empty() {
                return Err(Error::Parse("fiber over the minus side is a single point".to_string()));
            }
        }
        I0::IP1 => {
            let mut prev = 0;
            for &i in &subset {
                if i <= prev || i > k - 2 {
                    return Err(Error::Parse(format!("subset must increase within 1..={}", k - 2)));
                }
                prev = i;
                let i = i as i64;
                sheaf.summands.push(LineBundle::new(k as i64 - 1 - i, i, Weight::ZERO));
            }
        }
    }
    Ok(FixedPoint::build(Label::Minus { wall: k, i0, subset }, sheaf, 0))
}

/// Fixed points over `I0` on the `+` side of the wall.
pub fn fiber_plus(wall: &WallLabel, i0: I0, d: u32) -> Result<Vec<FixedPoint>> {
    let k = wall_index(wall)?;
    check_pair(k, i0)?;
    compositions(d, comp_len(k, i0))
        .into_iter()
        .map(|c| plus_point(k, i0, c))
        .collect()
}

/// Fixed points over `I0` on the `-` side of the wall.
pub fn fiber_minus(wall: &WallLabel, i0: I0, d: u32) -> Result<Vec<FixedPoint>> {
    let k = wall_index(wall)?;
    check_pair(k, i0)?;
    match i0 {
        I0::Ox | I0::IlP1(_) => {
            if d == 0 {
                Ok(vec![minus_point(k, i0, Vec::new())?])
            } else {
                Ok(Vec::new())
            }
        }
        I0::IP1 => {
            if d > k - 2 {
                return Ok(Vec::new());
            }
            subsets(1, k - 2, d as usize)
                .into_iter()
                .map(|s| minus_point(k, i0, s))
                .collect()
        }
    }
}

/// Rebuilds a fixed point from its text label.
pub fn fixed_point_from_label(label: &Label) -> Result<FixedPoint> {
    match label {
        Label::Js { k, comp } => {
            if *k == 0 || comp.len() != *k as usize {
                return Err(Error::Parse("composition length must equal k".to_string()));
            }
            Ok(js_point(*k, comp.clone()))
        }
        Label::Plus { wall, i0, comp } => plus_point(*wall, *i0, comp.clone()),
        Label::Minus { wall, i0, subset } => minus_point(*wall, *i0, subset.clone()),
    }
}

/// Contribution of the bare `I0` point.
pub fn i0_contribution(i0: I0) -> Result<RatFun> {
    let k = match i0 {
        I0::Ox => 1,
        I0::IlP1(_) => 2,
        I0::IP1 => 3,
    };
    minus_point(k, i0, Vec::new())?.contribution()
}

/// Closed product for one quadruple `(d1, d2, d3, d4)` on `Lmm(2)` over `I_P1`,
/// with `lam4 = lam1 + lam2 + 2 lam3`.
pub fn example_term_l1_k2(ds: [u32; 4]) -> Result<RatFun> {
    const LAMS: [[i64; 4]; 4] = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [1, 1, 2, 0]];
    let lin = |terms: &[(i64, [i64; 4])]| -> [i64; 4] {
        let mut c = [0; 4];
        for (s, v) in terms {
            for (x, y) in c.iter_mut().zip(v.iter()) {
                *x += s * y;
            }
        }
        c
    };
    let l3 = [0, 0, 1, 0];
    let m = [0, 0, 0, 1];
    let d: u32 = ds.iter().sum();
    let mut b = ProductBuilder::new();
    if d % 2 == 1 {
        b.scale(&crate::ratfun::Scalar::from_integer((-1).into()));
    }
    for i in 0..4 {
        for k in 0..ds[i] as i64 {
            for j in 0..4 {
                let c = lin(&[(k - ds[j] as i64, l3), (1, LAMS[i]), (-1, LAMS[j])]);
                b.linear(c, -1)?;
            }
            for j in 0..2 {
                let c = lin(&[(k - 1, l3), (1, LAMS[i]), (-1, LAMS[j])]);
                b.linear(c, 1)?;
            }
            b.linear(lin(&[(1, m), (-k, l3), (-1, LAMS[i])]), 1)?;
            b.linear(
                lin(&[
                    (1, m),
                    (-k, l3),
                    (-1, LAMS[i]),
                    (1, LAMS[0]),
                    (1, LAMS[1]),
                    (1, LAMS[2]),
                ]),
                1,
            )?;
        }
    }
    Ok(b.finish())
}
