//! Acceptance suite: one PASS/FAIL line per criterion. Exits nonzero when any
//! criterion fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};

use common::*;
use hypertoric::arrangement::{check_generic, core, StackyArrangement};
use hypertoric::crring::{CRClass, CrRing, Poly, ProductConvention};
use hypertoric::exactalg::{gale_dual, smith_normal_form, FgAbelianGroup, GroupHom};
use hypertoric::lawrence::lawrence_fan;
use hypertoric::localize::{
    composition_differs_from_identity, is_injective, paper_table_p12, standard_table,
    steinberg_apply, steinberg_operator, Direction, WeightedModel,
};
use hypertoric::multifan::box_elements;
use hypertoric::quantum::{
    eliminated_relation, qsr_presentation, Divisor, QuantumEngine, SignConvention,
};
use hypertoric::{Error, Int, Rat};
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

const UNTWISTED: usize = 0;
const HALF: usize = 1;

/// Failed sub-checks of one criterion.
#[derive(Default)]
struct Outcome {
    failures: Vec<String>,
    log: Vec<String>,
}

impl Outcome {
    fn part(&mut self, label: &str, check: impl FnOnce()) {
        if let Err(payload) = catch_unwind(AssertUnwindSafe(check)) {
            let message = payload
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            let detail: Vec<&str> = message
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty())
                .collect();
            self.failures
                .push(format!("{label}: {}", detail.join("; ")));
        }
    }
}

fn run_proptest<S: Strategy>(cases: u32, strategy: S, check: impl Fn(S::Value)) {
    let mut runner = TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    });
    runner
        .run(&strategy, |v| {
            check(v);
            Ok(())
        })
        .unwrap();
}

fn gale_dual_criterion(o: &mut Outcome) {
    o.part("dual of (-2, 1)", || {
        let beta = GroupHom::new(FgAbelianGroup::free(1), &[ints(&[-2]), ints(&[1])]).unwrap();
        let dual = gale_dual(&beta).unwrap();
        assert!(dual.target.is_free());
        let row: Vec<Int> = (0..2).map(|j| dual.column(j)[0].clone()).collect();
        // Rank one: the only unimodular changes of basis are ±1.
        assert!(row == ints(&[1, 2]) || row == ints(&[-1, -2]), "{row:?}");
    });
}

fn circuits_criterion(o: &mut Outcome) {
    o.part("unweighted surface", || {
        check_hirzebruch(
            &[-1, -1],
            1,
            &[
                (&[0, 1, 3], &[0, 3], &[1, 1, 1], (0, 1)),
                (&[0, 2, 3], &[0, 2, 3], &[1, 1, 1], (1, 1)),
                (&[1, 2], &[1, 2], &[1, 1], (1, 0)),
            ],
        )
    });
    o.part("weighted surface", || {
        check_hirzebruch(
            &[-1, -2],
            2,
            &[
                (&[0, 1, 3], &[0, 3], &[1, 2, 1], (0, 1)),
                (&[0, 2, 3], &[0, 2, 3], &[1, 2, 1], (2, 1)),
                (&[1, 2], &[1, 2], &[1, 1], (1, 0)),
            ],
        )
    });
    o.part("e1 + 2e3 + e4", || {
        let arr = hirzebruch(&[-1, -2]);
        let cs = hypertoric::multifan::circuits(&arr).unwrap();
        let c = find(&cs, &[0, 2, 3]);
        assert_eq!(c.beta_s, ints(&[1, 0, 2, 1]));
    });
}

fn core_criterion(o: &mut Outcome) {
    o.part("bounded chambers", || {
        let parts = core(&hirzebruch(&[-1, -2])).unwrap();
        assert_eq!(parts.len(), 2);
        let mut types: Vec<String> = parts
            .iter()
            .map(|(_, f)| format!("{:?}", classify(f)))
            .collect();
        types.sort();
        assert_eq!(
            types,
            vec![
                "Hirzebruch(2)".to_string(),
                "WeightedPlane([1, 1, 2])".to_string()
            ]
        );
    });
}

fn cr_ring_criterion(o: &mut Outcome) {
    let arr = weighted_line();
    o.part("u1 u2 = 0", || {
        let ring = CrRing::new(&arr).unwrap();
        assert!(ring.normal_form(0, &(Poly::u(0) * Poly::u(1))).is_zero());
    });
    o.part("1_1/2 u_i = 0", || {
        let ring = CrRing::new(&arr).unwrap();
        for i in 0..2 {
            assert!(ring
                .multiply_unchecked(&CRClass::generator(HALF), &CRClass::from_poly(Poly::u(i)))
                .is_zero());
        }
    });
    o.part("1_1/2 squared", || {
        let example = CrRing::with_convention(&arr, ProductConvention::Example).unwrap();
        let shipped = CrRing::new(&arr).unwrap();
        let g = CRClass::generator(HALF);
        assert_eq!(
            example.multiply(&g, &g).unwrap(),
            CRClass::from_poly(Poly::u(0).pow(2))
        );
        let sq = shipped.multiply(&g, &g).unwrap();
        // Localization: ∫ 1_{1/2}·1_{1/2} must equal the twisted-point pairing ½.
        let model = WeightedModel::new(vec![1, 2]).unwrap();
        let table = standard_table(&model);
        let pairing = table.integrate(HALF, &Poly::one()).unwrap();
        assert_eq!(table.integrate(0, &sq.component(0)).unwrap(), pairing);
        assert_ne!(table.integrate(0, &Poly::u(0).pow(2)).unwrap(), pairing);
    });
}

fn steinberg_criterion(o: &mut Outcome) {
    let t = paper_table_p12();
    let forward =
        |sector: usize, p: Poly| steinberg_apply(&t, Direction::Forward, sector, &p).unwrap();
    o.part("L(u1)", || {
        let x = forward(UNTWISTED, Poly::u(0));
        assert_matches(&x.coefficient(UNTWISTED), constant(q(1, 2)));
        assert_matches(&x.coefficient(HALF), constant(q(1, 2)));
    });
    o.part("L(u2) = (hbar - u1 - u2) + 1/2 1_1/2", || {
        let x = forward(UNTWISTED, Poly::u(1));
        assert_matches(&x.coefficient(UNTWISTED), constant(Rat::one()));
        assert_matches(&x.coefficient(HALF), constant(q(1, 2)));
    });
    o.part("L(1_1/2)", || {
        let x = forward(HALF, Poly::one());
        assert_matches(&x.coefficient(UNTWISTED), constant(q(1, 2)));
        assert_matches(&x.coefficient(HALF), constant(q(1, 2)));
    });
    o.part("L^-1(1_1/2)", || {
        let x = steinberg_apply(&t, Direction::Inverse, HALF, &Poly::one()).unwrap();
        assert_matches(&x.coefficient(UNTWISTED), constant(q(1, 2)));
        assert_matches(&x.coefficient(HALF), constant(q(1, 2)));
    });
    o.part("square integral", || {
        let p = Poly::hbar() - Poly::u(0) - Poly::u(1);
        assert_matches(&t.integrate(UNTWISTED, &p.pow(2)).unwrap(), square_integral);
    });
    o.part("L injective, L^-1 L != id", || {
        let f = steinberg_operator(&t, Direction::Forward, true).unwrap();
        let i = steinberg_operator(&t, Direction::Inverse, true).unwrap();
        assert!(is_injective(&f));
        assert!(composition_differs_from_identity(&i, &f));
    });
}

fn orbifold_degree_criterion(o: &mut Outcome) {
    o.part("all sorted weights", || {
        let mut count = 0;
        for len in 2..=7usize {
            let mut w = vec![1u32; len];
            loop {
                check_degrees(&w);
                count += 1;
                let Some(i) = (0..len).rev().find(|&i| w[i] < 6) else {
                    break;
                };
                let v = w[i] + 1;
                w[i..].iter_mut().for_each(|x| *x = v);
            }
        }
        assert!(count > 1000, "{count}");
    });
    o.part("random weight orders", || {
        run_proptest(3000, proptest::collection::vec(1u32..=6, 2..=7), |w| {
            check_degrees(&w)
        });
    });
}

fn quantum_product_criterion(o: &mut Outcome) {
    let dual_product = || (Poly::hbar() - Poly::u(0)) * (Poly::hbar() - Poly::u(1));
    o.part("projective line through Q^6", || {
        let engine = QuantumEngine::new(&projective_line()).unwrap();
        let s = engine
            .multiply_u(0, &CRClass::from_poly(Poly::u(1)), 6)
            .unwrap();
        assert!(engine
            .ring
            .equivalent(&s.coefficient_q(0), &CRClass::zero()));
        for k in 1..=6 {
            assert!(
                engine
                    .ring
                    .equivalent(&s.coefficient_q(k), &CRClass::from_poly(dual_product())),
                "Q^{k}"
            );
        }
    });
    o.part("weighted line at Q^1 and Q^2", || {
        let engine = QuantumEngine::new(&weighted_line()).unwrap();
        let s = engine
            .multiply_u(0, &CRClass::from_poly(Poly::u(1)), 2)
            .unwrap();
        assert!(engine.ring.equivalent(
            &s.coefficient_q(1),
            &CRClass::in_sector(HALF, -Poly::hbar())
        ));
        assert!(engine
            .ring
            .equivalent(&s.coefficient_q(2), &CRClass::from_poly(dual_product())));
    });
    let engine = QuantumEngine::new(&weighted_line()).unwrap();
    let report = engine
        .differential_report(&Divisor::u(0), &CRClass::from_poly(Poly::u(1)), 6)
        .unwrap();
    for p in report
        .pairs
        .iter()
        .filter(|p| p.convention == SignConvention::ClosedFormLiteral)
    {
        o.log.push(format!("divergence: {p}"));
    }
    o.part("closed-form divergence at Q^4", || {
        let untwisted = report
            .pairs
            .iter()
            .find(|p| {
                p.convention == SignConvention::ClosedFormLiteral
                    && p.first.is_zero()
                    && p.target.is_zero()
            })
            .unwrap();
        assert_eq!(untwisted.degree, Some(4));
    });
}

fn qsr_criterion(o: &mut Outcome) {
    o.part("m relations", || {
        for (name, arr) in all_examples() {
            let fan = lawrence_fan(&arr).unwrap();
            assert_eq!(
                qsr_presentation(&arr, &fan).relations.len(),
                arr.m(),
                "{name}"
            );
        }
    });
    o.part("projective line relation through Q^6", || {
        let arr = projective_line();
        let engine = QuantumEngine::new(&arr).unwrap();
        let rel = eliminated_relation(&engine, &lawrence_fan(&arr).unwrap(), 0).unwrap();
        let report = engine.verify_relation(&rel, 6).unwrap();
        assert!(report.holds, "{report:?}");
    });
    o.part("weighted line relation through Q^3", || {
        let arr = weighted_line();
        let engine = QuantumEngine::new(&arr).unwrap();
        let rel = eliminated_relation(&engine, &lawrence_fan(&arr).unwrap(), 0).unwrap();
        let report = engine.verify_relation(&rel, 3).unwrap();
        assert!(
            report.holds,
            "first failure in Novikov degree {:?}",
            report.first_failure.as_deref().unwrap_or_default()
        );
    });
    o.part("same-cone pairing", || {
        let examples = all_examples();
        let strategy = (
            0..examples.len(),
            0usize..64,
            proptest::collection::vec(0u8..5, 8),
            proptest::collection::vec(0u8..5, 8),
        );
        run_proptest(512, strategy, |(e, pick, a, b)| {
            let arr = &examples[e].1;
            let fan = lawrence_fan(arr).unwrap();
            let cone = &fan.max_cones[pick % fan.max_cones.len()];
            let point = |coefficients: &[u8]| {
                let mut out = vec![Rat::zero(); fan.d + fan.m];
                for (&j, &c) in cone.iter().zip(coefficients) {
                    for (x, r) in out.iter_mut().zip(fan.ray(j)) {
                        *x += r * Rat::from_integer(c.into());
                    }
                }
                out
            };
            let l = fan.l_pairing(arr, &point(&a), &point(&b)).unwrap();
            assert!(l.is_zero() && l.novikov_degree.iter().all(Zero::is_zero));
        });
    });
}

fn foundation_criterion(o: &mut Outcome) {
    o.part("smith normal form", || {
        run_proptest(1000, small_matrix(), |a| {
            let s = smith_normal_form(&a);
            assert_eq!(s.u.mul(&a).mul(&s.v), s.d);
            assert!(det(&s.u).abs().is_one() && det(&s.v).abs().is_one());
            for i in 0..a.rows() {
                for j in 0..a.cols() {
                    assert!(i == j || s.d[(i, j)].is_zero());
                }
            }
        });
    });
    o.part("box involution", || {
        for (_, arr) in all_examples() {
            assert!(!box_elements(&arr).is_empty());
            check_boxes(&arr);
        }
    });
    o.part("theta = 0 rejected", || {
        for (name, arr) in all_examples() {
            let zero = vec![Int::zero(); arr.theta.len()];
            assert!(!check_generic(&arr.gale.dual, &zero), "{name}");
            let cols: Vec<Vec<Int>> = (0..arr.m()).map(|i| arr.b(i)).collect();
            let err = StackyArrangement::new(arr.group_n.clone(), &cols, zero, None).unwrap_err();
            assert_eq!(err, Error::NonGeneric, "{name}");
        }
    });
}

fn main() {
    std::panic::set_hook(Box::new(|_| {}));
    let criteria: [(&str, fn(&mut Outcome)); 9] = [
        ("Gale dual", gale_dual_criterion),
        ("circuits and curve classes", circuits_criterion),
        ("core", core_criterion),
        ("Chen-Ruan ring of T*P(1,2)", cr_ring_criterion),
        ("Steinberg operators", steinberg_criterion),
        ("orbifold degrees", orbifold_degree_criterion),
        ("quantum products", quantum_product_criterion),
        ("quantum Stanley-Reisner ring", qsr_criterion),
        ("foundations", foundation_criterion),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let started = std::time::Instant::now();
        let mut outcome = Outcome::default();
        run(&mut outcome);
        let elapsed = started.elapsed().as_secs_f64();
        if outcome.failures.is_empty() {
            println!("criterion {} ({name}): PASS [{elapsed:.2}s]", k + 1);
        } else {
            failed += 1;
            println!("criterion {} ({name}): FAIL [{elapsed:.2}s]", k + 1);
            for f in &outcome.failures {
                println!("  - {f}");
            }
        }
        for line in &outcome.log {
            println!("  {line}");
        }
    }
    println!(
        "{} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
