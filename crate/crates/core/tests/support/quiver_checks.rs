use num_traits::Signed;
use wallx_core::quiver::*;
use wallx_core::ratfun::Scalar;

fn rat(n: i64, d: i64) -> Scalar {
    Scalar::new(n.into(), d.into())
}

fn functional(w: &WallLabel, th: &Theta) -> Scalar {
    let (p, q) = w.line();
    rat(p, 1) * &th.0 + rat(q, 1) * &th.1
}

fn strictly_between(a: &WallLabel, b: &WallLabel, th: &Theta) -> bool {
    let x = functional(a, th);
    let y = functional(b, th);
    (x.is_positive() && y.is_negative()) || (x.is_negative() && y.is_positive())
}

/// Every grid point of `[-3, 3]^2` with step `3/10` receives a label
/// consistent with the wall inequalities.
pub fn grid_is_consistent(k_max: u32) -> usize {
    let walls = walls_up_to(k_max);
    let mut inconclusive = 0;
    for i in -10..=10 {
        for j in -10..=10 {
            let th = Theta::new(rat(3 * i, 10), rat(3 * j, 10));
            let on: Vec<&WallLabel> = walls.iter().filter(|w| w.contains(&th)).collect();
            let c = classify_theta(&th, k_max);
            let zero = Scalar::from_integer(0.into());
            match &c {
                Classification::Origin => assert!(i == 0 && j == 0),
                Classification::OnWall(w) => assert_eq!(on, vec![w], "({i},{j})"),
                Classification::Chamber(ch) => {
                    assert!(on.is_empty(), "({i},{j}) lies on {:?}", on);
                    match ch {
                        Chamber::Empty => assert!(th.0 > zero && th.1 > zero),
                        Chamber::Nc => assert!(th.0 < zero && th.1 < zero),
                        Chamber::Zt { t, lower, upper } => {
                            assert!(th.0 < th.1 && (&th.0 + &th.1).is_positive());
                            assert_eq!(*upper, lower + 1);
                            assert!(strictly_between(&WallLabel::lmm(*lower), &WallLabel::lmm(*upper), &th));
                            assert_eq!(*t, theta_to_zt(&th).unwrap());
                        }
                        Chamber::Between { lower, upper, .. } => {
                            assert_eq!(lower.family, upper.family);
                            assert_eq!(upper.k, lower.k + 1);
                            assert_eq!(lower.minus_side(), th.0 < th.1);
                            assert!(strictly_between(lower, upper, &th), "({i},{j}) {c}");
                        }
                    }
                }
                Classification::Inconclusive(_) => {
                    assert!(on.is_empty());
                    let t = theta_to_zt(&th).unwrap();
                    assert!(t.abs() >= rat(k_max as i64, 1), "({i},{j}) t={t}");
                    inconclusive += 1;
                }
            }
        }
    }
    inconclusive
}

type M = Vec<i64>;

fn mm(a: &M, b: &M, r: usize, k: usize, c: usize) -> M {
    let mut out = vec![0; r * c];
    for i in 0..r {
        for j in 0..c {
            out[i * c + j] = (0..k).map(|x| a[i * k + x] * b[x * c + j]).sum();
        }
    }
    out
}

fn all01(n: usize) -> Vec<M> {
    (0..1u32 << n).map(|m| (0..n).map(|i| ((m >> i) & 1) as i64).collect()).collect()
}

fn to_mat(v: &M, r: usize, c: usize) -> Mat {
    Mat::from_ints(r, c, v).unwrap()
}

/// All 0/1 representations of dimension at most (2,2) that satisfy the relations.
fn representations() -> Vec<FramedRep> {
    let mut out = Vec::new();
    for d0 in 0..=2usize {
        for d1 in 0..=2usize {
            let (n00, n11, n10, n01) = (d0 * d0, d1 * d1, d1 * d0, d0 * d1);
            for c in all01(n00) {
                for d in all01(n11) {
                    // d*a = a*c, c*b = b*d
                    let avs: Vec<M> = all01(n10)
                        .into_iter()
                        .filter(|a| mm(&d, a, d1, d1, d0) == mm(a, &c, d1, d0, d0))
                        .collect();
                    let bvs: Vec<M> = all01(n01)
                        .into_iter()
                        .filter(|b| mm(&c, b, d0, d0, d1) == mm(b, &d, d0, d1, d1))
                        .collect();
                    for a1 in &avs {
                        for a2 in &avs {
                            for b1 in &bvs {
                                for b2 in &bvs {
                                    let aba = |x: &M, b: &M, y: &M| mm(&mm(x, b, d1, d0, d1), y, d1, d1, d0);
                                    let bab = |x: &M, a: &M, y: &M| mm(&mm(x, a, d0, d1, d0), y, d0, d0, d1);
                                    let ok = aba(a2, b1, a1) == aba(a1, b1, a2)
                                        && aba(a2, b2, a1) == aba(a1, b2, a2)
                                        && bab(b2, a1, b1) == bab(b1, a1, b2)
                                        && bab(b2, a2, b1) == bab(b1, a2, b2);
                                    if !ok {
                                        continue;
                                    }
                                    for f in all01(d0) {
                                        let mut rep = FramedRep::zero(d0, d1);
                                        rep.a1 = to_mat(a1, d1, d0);
                                        rep.a2 = to_mat(a2, d1, d0);
                                        rep.b1 = to_mat(b1, d0, d1);
                                        rep.b2 = to_mat(b2, d0, d1);
                                        rep.c = to_mat(&c, d0, d0);
                                        rep.dd = to_mat(&d, d1, d1);
                                        rep.framing = f.iter().map(|&x| rat(x, 1)).collect();
                                        out.push(rep);
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

const ARROWS: [GradeWeight; 6] = [
    [1, 0, 0, 0, 0],
    [0, 1, 0, 0, 0],
    [0, 0, 1, 0, 0],
    [0, 0, 0, 1, 0],
    [0, 0, 0, 0, 1],
    [0, 0, 0, 0, 1],
];

/// Compares stability with cyclicity over the enumerated graded representations.
/// Returns the number of comparisons made.
pub fn nc_stable_iff_cyclic() -> usize {
    let reps = representations();
    assert!(!reps.is_empty());
    let thetas = [Theta::from_ints(-1, -1), Theta::from_ints(-2, -5), Theta::new(rat(-1, 3), rat(-7, 2))];
    let mut compared = 0;
    for mut rep in reps {
        check_relations(&rep).unwrap();
        let Some(g) = infer_grading(&rep, ARROWS) else { continue };
        rep.grading = Some(g);
        for th in &thetas {
            match is_stable_graded(&rep, th) {
                Ok(s) => {
                    assert_eq!(s == Stability::Stable, is_cyclic(&rep), "{:?}", rep);
                    compared += 1;
                }
                Err(wallx_core::Error::NotMultiplicityFree(_)) => break,
                Err(e) => panic!("{e}"),
            }
        }
    }
    compared
}
