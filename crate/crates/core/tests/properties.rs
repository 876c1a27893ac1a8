use proptest::prelude::*;

use wallx_core::geom::{compositions, fiber_minus, fiber_plus, js_fixed_points, subsets, I0};
use wallx_core::kclass::{chi_p1, KClass, Weight};
use wallx_core::quiver::WallLabel;
use wallx_core::ratfun::{parse_ratfun, Fp, PointStream, ProductBuilder, RatFun, Scalar};
use wallx_core::series::{TruncSeries, Var};

fn small_form() -> impl Strategy<Value = [i64; 4]> {
    prop::array::uniform4(-2i64..=2).prop_filter("nonzero", |c| c.iter().any(|&x| x != 0))
}

fn ratfun() -> impl Strategy<Value = RatFun> {
    (
        prop::collection::vec((small_form(), -2i32..=2), 0..4),
        -5i64..=5,
        1i64..=4,
        prop::collection::vec((0usize..4, -3i64..=3), 0..3),
    )
        .prop_map(|(forms, n, d, extra)| {
            let mut b = ProductBuilder::new();
            b.scale(&Scalar::new(n.into(), d.into()));
            for (c, e) in forms {
                b.linear(c, e).unwrap();
            }
            let mut r = b.finish();
            // a non-linear residual numerator
            let mut p = RatFun::one();
            for (v, c) in extra {
                p = p.mul(&RatFun::var(v).add(&RatFun::from_int(c)));
            }
            if !p.is_zero() {
                r = r.mul(&p.add(&RatFun::var(0).mul(&RatFun::var(1))));
            }
            r
        })
}

fn weight() -> impl Strategy<Value = Weight> {
    prop::array::uniform4(-2i64..=2).prop_map(Weight)
}

fn kclass() -> impl Strategy<Value = KClass> {
    prop::collection::vec((weight(), -2i64..=2), 0..5).prop_map(|v| {
        let mut k = KClass::from_terms(v);
        let z = k.zero_mult();
        k.push(Weight::ZERO, -z);
        k
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn add_commutes(a in ratfun(), b in ratfun()) {
        prop_assert!(a.add(&b).equals(&b.add(&a)));
    }

    #[test]
    fn mul_distributes(a in ratfun(), b in ratfun(), c in ratfun()) {
        let l = a.mul(&b.add(&c));
        let r = a.mul(&b).add(&a.mul(&c));
        prop_assert!(l.equals(&r));
    }

    #[test]
    fn div_inverts_mul(a in ratfun(), b in ratfun()) {
        prop_assume!(!b.is_zero());
        prop_assert!(a.mul(&b).div(&b).unwrap().equals(&a));
    }

    #[test]
    fn print_parse_roundtrip(a in ratfun()) {
        let s = a.to_string();
        let back = parse_ratfun(&s).unwrap();
        prop_assert!(back.same_repr(&a));
        prop_assert_eq!(back.to_string(), s);
    }

    #[test]
    fn eval_is_a_homomorphism(a in ratfun(), b in ratfun(), seed in 0u64..1000) {
        let pt = PointStream::new(seed).next_point();
        if let (Some(x), Some(y), Some(z)) = (a.eval(&pt), b.eval(&pt), a.mul(&b).eval(&pt)) {
            prop_assert_eq!(x * y, z);
        }
    }

    #[test]
    fn euler_is_multiplicative(a in kclass(), b in kclass()) {
        let lhs = a.add(&b).euler_class().unwrap();
        let rhs = a.euler_class().unwrap().mul(&b.euler_class().unwrap());
        prop_assert!(lhs.equals(&rhs));
    }

    #[test]
    fn series_ring_laws(a in prop::collection::vec(-4i64..=4, 1..5), b in prop::collection::vec(-4i64..=4, 1..5), b0 in 1i64..=3) {
        let s = |v: &[i64]| TruncSeries::new(Var::T, 4, v.iter().map(|&x| Fp::from_i64(x)).collect());
        let x = s(&a);
        let mut bv = b.clone();
        bv[0] = b0;
        let y = s(&bv);
        prop_assert_eq!(x.mul(&y).unwrap(), y.mul(&x).unwrap());
        prop_assert_eq!(x.mul(&y).unwrap().div(&y).unwrap(), x.clone());
        let z = x.add(&y).unwrap().sub(&y).unwrap();
        prop_assert_eq!(z, x);
    }
}

#[test]
fn chi_p1_rank() {
    for a in -5..=5 {
        for b in -5..=5 {
            assert_eq!(chi_p1(a, b).rank(), a + b + 1, "a={a} b={b}");
        }
    }
}

fn binom(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn enumerator_cardinalities() {
    for k in 1..=3u32 {
        for d in 1..=4u32 {
            let n = js_fixed_points(k, d).unwrap().len() as u64;
            assert_eq!(n, binom((d + k - 1) as u64, (k - 1) as u64));
        }
    }
    let w2 = WallLabel::lmm(2);
    for l in 1..=3 {
        for d in 0..=8u32 {
            assert_eq!(fiber_plus(&w2, I0::IlP1(l), d).unwrap().len() as u64, binom(d as u64 + 3, 3));
            assert_eq!(fiber_minus(&w2, I0::IlP1(l), d).unwrap().len(), usize::from(d == 0));
        }
    }
    for k in 3..=8u32 {
        let parts = 3 * k as u64 - 2;
        for d in 0..=if k == 3 { 3 } else { 1 } {
            let w = WallLabel::lmm(k);
            assert_eq!(fiber_plus(&w, I0::IP1, d).unwrap().len() as u64, binom(d as u64 + parts - 1, parts - 1));
            let m = fiber_minus(&w, I0::IP1, d).unwrap().len() as u64;
            assert_eq!(m, if d <= k - 2 { binom((k - 2) as u64, d as u64) } else { 0 });
        }
    }
}

#[test]
fn compositions_are_descending_and_complete() {
    let c = compositions(3, 3);
    assert_eq!(c.len(), 10);
    assert_eq!(c[0], vec![3, 0, 0]);
    assert_eq!(c[9], vec![0, 0, 3]);
    assert!(c.windows(2).all(|w| w[0] > w[1]));
    assert_eq!(subsets(1, 4, 2).len(), 6);
    assert_eq!(compositions(0, 0), vec![Vec::<u32>::new()]);
    assert!(compositions(1, 0).is_empty());
}
