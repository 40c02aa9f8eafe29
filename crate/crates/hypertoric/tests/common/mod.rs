#![allow(dead_code)]

use hypertoric::arrangement::{NormalFan, StackyArrangement};
use hypertoric::crring::Var;
use hypertoric::exactalg::rational::solve;
use hypertoric::exactalg::{gale_dual, FgAbelianGroup, GroupHom, IntMatrix};
use hypertoric::localize::{orbifold_degrees, RatFunc, WeightedModel};
use hypertoric::multifan::{box_elements, box_inverse, circuits, multi_fan, Circuit};
use hypertoric::{Int, Rat};
use num_integer::Integer;
use num_traits::{One, Zero};
use proptest::prelude::*;

pub fn ints(v: &[i64]) -> Vec<Int> {
    v.iter().map(|&x| Int::from(x)).collect()
}

pub fn q(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

pub fn projective_line() -> StackyArrangement {
    StackyArrangement::from_small(1, &[&[-1], &[1]], &[1], None).unwrap()
}

/// `T*P(1,2)`: `b = (−2, 1)`.
pub fn weighted_line() -> StackyArrangement {
    StackyArrangement::from_small(1, &[&[-2], &[1]], &[1], None).unwrap()
}

/// `b = (1,0), (0,−1), (0,1), last` with `ψ = (0,0,−1,−1)`.
pub fn hirzebruch(last: &[i64]) -> StackyArrangement {
    let columns: Vec<Vec<Int>> = [&[1, 0][..], &[0, -1], &[0, 1], last]
        .iter()
        .map(|c| ints(c))
        .collect();
    let beta = GroupHom::new(FgAbelianGroup::free(2), &columns).unwrap();
    let theta = gale_dual(&beta).unwrap().apply(&ints(&[0, 0, 1, 1]));
    StackyArrangement::new(
        FgAbelianGroup::free(2),
        &columns,
        theta,
        Some(ints(&[0, 0, -1, -1])),
    )
    .unwrap()
}

pub fn all_examples() -> Vec<(&'static str, StackyArrangement)> {
    vec![
        ("projective line", projective_line()),
        ("weighted line", weighted_line()),
        ("hirzebruch", hirzebruch(&[-1, -1])),
        ("hirzebruch weighted", hirzebruch(&[-1, -2])),
    ]
}

/// Shape of a complete two-dimensional fan, read from its rays alone.
#[derive(Debug, PartialEq, Eq)]
pub enum SurfaceType {
    Hirzebruch(i64),
    WeightedPlane(Vec<i64>),
    Other,
}

fn angle(v: &[Int]) -> f64 {
    let (x, y) = (
        v[0].to_string().parse::<f64>().unwrap(),
        v[1].to_string().parse::<f64>().unwrap(),
    );
    y.atan2(x)
}

pub fn classify(fan: &NormalFan) -> SurfaceType {
    let mut rays: Vec<Vec<Int>> = fan.rays.iter().map(|(_, r)| r.clone()).collect();
    rays.sort_by(|a, b| angle(a).partial_cmp(&angle(b)).unwrap());
    let n = rays.len();
    let int = |x: &Int| i64::try_from(x).unwrap();
    match n {
        3 => {
            // Positive weights with Σ w_i v_i = 0: w_i = |det(v_{i+1}, v_{i+2})|.
            let det = |a: &[Int], b: &[Int]| int(&(&a[0] * &b[1] - &a[1] * &b[0]));
            let mut w: Vec<i64> = (0..3)
                .map(|i| det(&rays[(i + 1) % 3], &rays[(i + 2) % 3]).abs())
                .collect();
            let g = w.iter().fold(0i64, |acc, x| acc.gcd(x));
            w.iter_mut().for_each(|x| *x /= g);
            w.sort();
            SurfaceType::WeightedPlane(w)
        }
        4 => {
            // v_{i-1} + v_{i+1} = a_i v_i.
            let mut a = Vec::new();
            for i in 0..4 {
                let s: Vec<Int> = (0..2)
                    .map(|k| &rays[(i + 3) % 4][k] + &rays[(i + 1) % 4][k])
                    .collect();
                let v = &rays[i];
                let k = (0..2).find(|&k| !v[k].is_zero()).unwrap();
                let c = int(&s[k]) / int(&v[k]);
                if (0..2).any(|j| int(&s[j]) != c * int(&v[j])) {
                    return SurfaceType::Other;
                }
                a.push(c);
            }
            let zeros = a.iter().filter(|&&x| x == 0).count();
            if zeros >= 2 && a.iter().sum::<i64>() == 0 {
                SurfaceType::Hirzebruch(a.iter().map(|x| x.abs()).max().unwrap())
            } else {
                SurfaceType::Other
            }
        }
        _ => SurfaceType::Other,
    }
}

pub fn find<'a>(cs: &'a [Circuit], support: &[usize]) -> &'a Circuit {
    cs.iter().find(|c| c.support == support).unwrap()
}

/// Coordinates of `x` in the columns `basis`, by rational solve.
fn coordinates(basis: &[Vec<Int>], x: &[Int]) -> Vec<Rat> {
    let a: Vec<Vec<Rat>> = (0..x.len())
        .map(|i| {
            basis
                .iter()
                .map(|b| Rat::from_integer(b[i].clone()))
                .collect()
        })
        .collect();
    let rhs: Vec<Rat> = x.iter().map(|v| Rat::from_integer(v.clone())).collect();
    solve(&a, &rhs).unwrap()
}

/// The defining formula `Σ_{S⁺} w_i e_i − Σ_{S⁻} w_j e_j`.
fn defining_vector(c: &Circuit, m: usize) -> Vec<Int> {
    let mut v = vec![Int::zero(); m];
    for (s, &i) in c.support.iter().enumerate() {
        v[i] = if c.is_positive(i) {
            c.weights[s].clone()
        } else {
            -c.weights[s].clone()
        };
    }
    v
}

/// Curve classes in the basis `{e_2 + e_3, e_1 − k e_2 + e_4}` used by the worked examples.
pub fn check_hirzebruch(
    last: &[i64],
    k: i64,
    expected: &[(&[usize], &[usize], &[i64], (i64, i64))],
) {
    let arr = hirzebruch(last);
    let cs = circuits(&arr).unwrap();
    assert_eq!(cs.len(), 3);
    let reference_basis = vec![ints(&[0, 1, 1, 0]), ints(&[1, -k, 0, 1])];
    // Change of basis from the computed kernel basis; it must be unimodular.
    let change: Vec<Vec<Rat>> = arr
        .kernel_basis()
        .iter()
        .map(|b| coordinates(&reference_basis, b))
        .collect();
    assert!(change.iter().flatten().all(|x| x.is_integer()));
    let det = &change[0][0] * &change[1][1] - &change[0][1] * &change[1][0];
    assert!(det == Rat::one() || det == -Rat::one());
    for (support, positive, weights, class) in expected {
        let c = find(&cs, support);
        assert_eq!(&c.positive, positive);
        assert_eq!(c.weights, ints(weights));
        assert_eq!(c.beta_s, defining_vector(c, 4));
        assert!(arr.beta.apply(&c.beta_s).iter().all(Zero::is_zero));
        let in_reference: Vec<Rat> = (0..2)
            .map(|j| {
                c.h2_class
                    .iter()
                    .zip(&change)
                    .map(|(h, row)| Rat::from_integer(h.clone()) * &row[j])
                    .sum()
            })
            .collect();
        assert_eq!(
            in_reference,
            vec![
                Rat::from_integer(class.0.into()),
                Rat::from_integer(class.1.into())
            ]
        );
    }
}

pub fn check_boxes(arr: &StackyArrangement) {
    let fan = multi_fan(arr);
    for b in box_elements(arr) {
        assert!(fan.contains(&b.sigma));
        let inv = box_inverse(&b, arr);
        assert_eq!(box_inverse(&inv, arr), b);
        for (a, c) in b.alphas.iter().zip(&inv.alphas) {
            assert_eq!(a + c, Rat::one());
        }
        // v̄ = Σ α_i b̄_i.
        for r in 0..arr.d() {
            let s: Rat = b
                .sigma
                .iter()
                .zip(&b.alphas)
                .map(|(&i, a)| a * Rat::from_integer(arr.b_bar(i)[r].clone()))
                .sum();
            assert_eq!(s, Rat::from_integer(b.v[r].clone()));
        }
    }
}

/// Determinant by rational elimination, independent of the library.
pub fn det(m: &IntMatrix) -> Rat {
    let n = m.rows();
    let mut a: Vec<Vec<Rat>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| Rat::from_integer(m[(i, j)].clone()))
                .collect()
        })
        .collect();
    let mut out = Rat::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return Rat::zero();
        };
        if p != c {
            a.swap(p, c);
            out = -out;
        }
        out *= a[c][c].clone();
        for r in c + 1..n {
            let f = &a[r][c] / &a[c][c];
            for k in c..n {
                let t = &f * &a[c][k];
                a[r][k] -= t;
            }
        }
    }
    out
}

/// Independent count: `#{j : f w_j ∈ Z}` and the age `n + 1 − that count`.
fn expected_degrees(weights: &[u32]) -> Vec<usize> {
    let n = weights.len() - 1;
    let mut fractions: Vec<Rat> = weights
        .iter()
        .flat_map(|&w| (0..w).map(move |a| q(a.into(), w.into())))
        .collect();
    fractions.sort();
    fractions.dedup();
    let support = |f: &Rat| {
        weights
            .iter()
            .filter(|&&w| (f * Rat::from_integer(w.into())).is_integer())
            .count()
    };
    let mut out = Vec::new();
    for f in &fractions {
        let s = support(f);
        out.push(2 * (s - 1) + 2 * (n + 1 - s));
    }
    for f in &fractions {
        for g in &fractions {
            let (s, t) = (support(f), support(g));
            out.push((s - 1) + (t - 1) + (n + 1 - s) + (n + 1 - t));
        }
    }
    out
}

pub fn check_degrees(weights: &[u32]) {
    let n = weights.len() - 1;
    let model = WeightedModel::new(weights.to_vec()).unwrap();
    let got: Vec<usize> = orbifold_degrees(&model).iter().map(|c| c.degree).collect();
    assert_eq!(got, expected_degrees(weights));
    assert!(got.iter().all(|&d| d == 2 * n), "{weights:?}");
}

pub fn points() -> Vec<(Rat, Rat, Rat)> {
    vec![
        (q(3, 5), q(7, 11), q(13, 2)),
        (q(-2, 3), q(5, 7), q(1, 9)),
        (q(11, 4), q(-3, 8), q(17, 5)),
    ]
}

pub fn at(l1: &Rat, l2: &Rat, h: &Rat) -> impl Fn(Var) -> Rat {
    let (l1, l2, h) = (l1.clone(), l2.clone(), h.clone());
    move |v| match v {
        Var::Lambda(0) => l1.clone(),
        Var::Lambda(1) => l2.clone(),
        Var::Hbar => h.clone(),
        _ => Rat::zero(),
    }
}

/// `½ ((ħ − λ2)/λ1 + (ħ − λ1)/λ2 − 2)` evaluated directly.
pub fn square_integral(l1: &Rat, l2: &Rat, h: &Rat) -> Rat {
    q(1, 2) * ((h - l2) / l1 + (h - l1) / l2 - Rat::from_integer(2.into()))
}

pub fn assert_matches(f: &RatFunc, oracle: impl Fn(&Rat, &Rat, &Rat) -> Rat) {
    for (l1, l2, h) in points() {
        assert_eq!(f.evaluate(&at(&l1, &l2, &h)), Some(oracle(&l1, &l2, &h)));
    }
}

pub fn constant(c: Rat) -> impl Fn(&Rat, &Rat, &Rat) -> Rat {
    move |_, _, _| c.clone()
}

pub fn small_matrix() -> impl Strategy<Value = IntMatrix> {
    (1usize..=8, 1usize..=8).prop_flat_map(|(r, c)| {
        proptest::collection::vec(-9i64..=9, r * c)
            .prop_map(move |v| IntMatrix::from_fn(r, c, |i, j| Int::from(v[i * c + j])))
    })
}
