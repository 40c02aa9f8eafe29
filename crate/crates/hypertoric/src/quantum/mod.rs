//! Quantum multiplication by divisors as truncated Novikov series, and the
//! quantum Stanley-Reisner ring of the Lawrence fan.
//!
//! Every circuit `S` contributes through its local model `T*P^n_w` with
//! `w` the circuit weights and `n = |S| − 1`. Classes move into the model by
//! `u_j ↦ U_j` on `S⁺`, `u_j ↦ ħ − U_j` on `S⁻` and `u_k ↦ 0` off `S`; a
//! model sector `f` is the box with `σ = {j ∈ S : f·w_j ∉ Z}`.

mod qsr;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, ToPrimitive, Zero};

pub use qsr::{
    eliminated_relation, qsr_circuit_degrees, qsr_multiply, qsr_presentation, QsrElement,
    QsrPresentation,
};

use crate::arrangement::StackyArrangement;
use crate::crring::{CRClass, CrRing, Poly, Var};
use crate::localize::{standard_table, zero_section_class, FixedPointTable, Sector, WeightedModel};
use crate::parallel::{map_collect, Strategy};
use crate::{Error, Int, Rat, Result};

/// Sign and degree rule for the sector-pair series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, PartialOrd, Ord)]
pub enum SignConvention {
    /// Signs `(−1)^{n+1} (−1)^{n − dim P_g}` and exponent `l·⟨f1 − g⟩`; reproduces
    /// both worked series on `T*P^1` and `T*P(1,2)`.
    #[default]
    ExampleCalibrated,
    /// `(−1)^n Γ-sign` with `Q^{γ + l δ_{γ,0}} / (1 − Q^l)` and `γ` the scanned pair degree.
    TheoremLiteral,
    /// As above with the extra per-degree sign `(−1)^{⌊d Σ 1/w_i⌋}`.
    ClosedFormLiteral,
}

impl SignConvention {
    pub const ALL: [SignConvention; 3] = [
        SignConvention::ExampleCalibrated,
        SignConvention::TheoremLiteral,
        SignConvention::ClosedFormLiteral,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SignConvention::ExampleCalibrated => "example-calibrated",
            SignConvention::TheoremLiteral => "theorem-literal",
            SignConvention::ClosedFormLiteral => "closed-form-literal",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        SignConvention::ALL.into_iter().find(|c| c.name() == s)
    }
}

impl fmt::Display for SignConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A truncated series `Σ_d Q^d x_d`, one exponent per circuit. Terms with any
/// exponent above the truncation order are dropped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NovikovSeries {
    truncation_order: u32,
    circuits: usize,
    terms: BTreeMap<Vec<u32>, CRClass>,
}

impl NovikovSeries {
    pub fn zero(circuits: usize, truncation_order: u32) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![0; circuits], CRClass::zero());
        NovikovSeries {
            truncation_order,
            circuits,
            terms,
        }
    }

    pub fn constant(circuits: usize, truncation_order: u32, class: CRClass) -> Self {
        let mut s = NovikovSeries::zero(circuits, truncation_order);
        s.add_term(&vec![0; circuits], &class);
        s
    }

    pub fn truncation_order(&self) -> u32 {
        self.truncation_order
    }

    pub fn circuit_count(&self) -> usize {
        self.circuits
    }

    /// Nonzero terms in lexicographic degree order, plus the degree-0 term.
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &CRClass)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, degree: &[u32]) -> CRClass {
        self.terms.get(degree).cloned().unwrap_or_default()
    }

    /// Coefficient of `Q^k` in a single-circuit series.
    pub fn coefficient_q(&self, k: u32) -> CRClass {
        let mut d = vec![0; self.circuits];
        if let Some(x) = d.first_mut() {
            *x = k;
        }
        self.coefficient(&d)
    }

    pub fn add_term(&mut self, degree: &[u32], class: &CRClass) {
        if degree.iter().any(|&e| e > self.truncation_order) || class.is_zero() {
            return;
        }
        let sum = self.coefficient(degree).add(class);
        if sum.is_zero() && degree.iter().any(|&e| e > 0) {
            self.terms.remove(degree);
        } else {
            self.terms.insert(degree.to_vec(), sum);
        }
    }

    pub fn add(&self, other: &NovikovSeries) -> NovikovSeries {
        let mut out = self.clone();
        out.truncation_order = self.truncation_order.min(other.truncation_order);
        out.terms
            .retain(|d, _| d.iter().all(|&e| e <= out.truncation_order));
        for (d, x) in &other.terms {
            out.add_term(d, x);
        }
        out
    }

    pub fn sub(&self, other: &NovikovSeries) -> NovikovSeries {
        self.add(&other.scale(&-Rat::one()))
    }

    pub fn scale(&self, c: &Rat) -> NovikovSeries {
        let mut out = NovikovSeries::zero(self.circuits, self.truncation_order);
        for (d, x) in &self.terms {
            out.add_term(d, &x.scale(c));
        }
        out
    }

    /// Multiplies by `Q^shift`.
    pub fn shifted(&self, shift: &[u32]) -> NovikovSeries {
        let mut out = NovikovSeries::zero(self.circuits, self.truncation_order);
        for (d, x) in &self.terms {
            let e: Vec<u32> = d.iter().zip(shift).map(|(a, b)| a + b).collect();
            out.add_term(&e, x);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.values().all(CRClass::is_zero)
    }

    pub fn format(&self, ring: &CrRing) -> String {
        let parts: Vec<String> = self
            .terms
            .iter()
            .filter(|(_, x)| !x.is_zero())
            .map(|(d, x)| {
                let q = format_degree(d);
                let body = ring.format_class(x);
                if q.is_empty() {
                    body
                } else {
                    format!("{q}*({body})")
                }
            })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

fn format_degree(d: &[u32]) -> String {
    let single = d.len() == 1;
    d.iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(s, e)| {
            if single {
                format!("Q^{e}")
            } else {
                format!("Q{}^{e}", s + 1)
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

/// A linear divisor `c ħ + Σ_i c_i u_i`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Divisor {
    pub hbar: Rat,
    pub u: BTreeMap<usize, Rat>,
}

impl Divisor {
    pub fn u(i: usize) -> Self {
        Divisor {
            hbar: Rat::zero(),
            u: BTreeMap::from([(i, Rat::one())]),
        }
    }

    /// `ħ − u_i`.
    pub fn dual(i: usize) -> Self {
        Divisor {
            hbar: Rat::one(),
            u: BTreeMap::from([(i, -Rat::one())]),
        }
    }

    pub fn as_poly(&self) -> Poly {
        self.u
            .iter()
            .fold(Poly::hbar().scale(&self.hbar), |acc, (&i, c)| {
                acc + Poly::u(i).scale(c)
            })
    }
}

/// The local model of one circuit.
#[derive(Debug, Clone)]
struct CircuitModel {
    slots: Vec<usize>,
    positive: Vec<bool>,
    weights: Vec<u32>,
    beta: Vec<Int>,
    table: FixedPointTable,
    sectors: Vec<Sector>,
    /// Box index of each model sector.
    boxes: Vec<usize>,
}

impl CircuitModel {
    fn lcm(&self) -> u32 {
        self.table.model.lcm()
    }

    fn to_model(&self, p: &Poly) -> Poly {
        p.substitute(&|v| match v {
            Var::U(k) => Some(match self.slots.iter().position(|&s| s == k) {
                Some(s) if self.positive[s] => Poly::u(s),
                Some(s) => Poly::hbar() - Poly::u(s),
                None => Poly::zero(),
            }),
            _ => None,
        })
    }

    fn from_model(&self, p: &Poly) -> Poly {
        p.substitute(&|v| match v {
            Var::U(s) if self.positive[s] => Some(Poly::u(self.slots[s])),
            Var::U(s) => Some(Poly::hbar() - Poly::u(self.slots[s])),
            _ => None,
        })
    }

    /// `∫_{P_f} x` at `λ = 0`.
    fn integral(&self, f: usize, p: &Poly) -> Result<Poly> {
        let value = self.table.integrate_compact(f, &self.to_model(p))?;
        let poly = value
            .to_poly()
            .ok_or_else(|| Error::Shape(format!("compact integral {value} is not a polynomial")))?;
        Ok(poly.at_lambda_zero())
    }
}

/// Sector pairs of one circuit with their scanned degrees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircuitQuantumData {
    pub circuit: usize,
    pub weights: Vec<u32>,
    pub lcm: u32,
    pub pairs: Vec<SectorPair>,
    pub convention: SignConvention,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectorPair {
    pub first: Rat,
    pub second: Rat,
    pub r: Option<u32>,
}

/// Quantum multiplication by divisors on a fixed arrangement.
#[derive(Debug, Clone)]
pub struct QuantumEngine {
    pub ring: CrRing,
    pub convention: SignConvention,
    pub strategy: Strategy,
    models: Vec<CircuitModel>,
}

impl QuantumEngine {
    pub fn new(arr: &StackyArrangement) -> Result<Self> {
        Self::with_convention(arr, SignConvention::default())
    }

    pub fn with_convention(arr: &StackyArrangement, convention: SignConvention) -> Result<Self> {
        Self::from_ring(CrRing::new(arr)?, convention)
    }

    pub fn from_ring(ring: CrRing, convention: SignConvention) -> Result<Self> {
        if !ring.arrangement.group_n.is_free() {
            return Err(Error::Unsupported(
                "quantum products need a torsion-free N".into(),
            ));
        }
        let models = ring
            .circuits
            .iter()
            .map(|c| circuit_model(&ring, c))
            .collect::<Result<Vec<_>>>()?;
        Ok(QuantumEngine {
            ring,
            convention,
            strategy: Strategy::default(),
            models,
        })
    }

    pub fn with_strategy(mut self, strategy: Strategy) -> Self {
        self.strategy = strategy;
        self
    }

    pub fn circuit_count(&self) -> usize {
        self.models.len()
    }

    pub fn circuit_data(&self) -> Vec<CircuitQuantumData> {
        self.models
            .iter()
            .enumerate()
            .map(|(circuit, model)| {
                let mut pairs = Vec::new();
                for a in &model.sectors {
                    for b in &model.sectors {
                        let r = r_of_sector_pair(&a.fraction, &b.fraction, &model.weights);
                        pairs.push(SectorPair {
                            first: a.fraction.clone(),
                            second: b.fraction.clone(),
                            r,
                        });
                    }
                }
                CircuitQuantumData {
                    circuit,
                    weights: model.weights.clone(),
                    lcm: model.lcm(),
                    pairs,
                    convention: self.convention,
                }
            })
            .collect()
    }

    /// Signed series coefficients `(degree, sign)` of the pair `f1 → g`.
    fn pair_series(
        &self,
        model: &CircuitModel,
        f1: usize,
        g: usize,
        order: u32,
    ) -> Vec<(u32, i32)> {
        pair_series(
            self.convention,
            &model.weights,
            &model.sectors[f1],
            &model.sectors[g],
            order,
        )
    }

    /// `u_i ⋆ x`.
    pub fn multiply_u(&self, i: usize, x: &CRClass, order: u32) -> Result<NovikovSeries> {
        if order < 1 {
            return Err(Error::TruncationTooSmall);
        }
        if i >= self.ring.m() {
            return Err(Error::Shape(format!(
                "divisor index {} out of range",
                i + 1
            )));
        }
        let x = self.ring.reduce(x);
        let classical = self
            .ring
            .multiply_unchecked(&CRClass::from_poly(Poly::u(i)), &x);
        let mut out = NovikovSeries::constant(self.models.len(), order, classical);
        let mut jobs = Vec::new();
        for (s, model) in self.models.iter().enumerate() {
            if model.beta[i].is_zero() {
                continue;
            }
            for f1 in 0..model.sectors.len() {
                let p = x.component(model.boxes[f1]);
                if !p.is_zero() {
                    jobs.push((s, f1, p));
                }
            }
        }
        let parts = map_collect(jobs, self.strategy, |(s, f1, p)| {
            self.sector_contribution(s, i, f1, &p, order)
        });
        for part in parts {
            for (degree, class) in part? {
                out.add_term(&degree, &class);
            }
        }
        Ok(out)
    }

    /// Contributions of one input sector of one circuit.
    fn sector_contribution(
        &self,
        s: usize,
        i: usize,
        f1: usize,
        p: &Poly,
        order: u32,
    ) -> Result<Vec<(Vec<u32>, CRClass)>> {
        let model = &self.models[s];
        let integral = model.integral(f1, p)?;
        if integral.is_zero() {
            return Ok(Vec::new());
        }
        let scalar = integral * Poly::hbar().scale(&Rat::from_integer(model.beta[i].clone()));
        let mut out = Vec::new();
        for g in 0..model.sectors.len() {
            let series = self.pair_series(model, f1, g, order);
            if series.is_empty() {
                continue;
            }
            let target = model.boxes[g];
            let zero_section = model.from_model(&zero_section_class(&model.sectors[g]));
            let class = self.ring.normal_form(target, &(&zero_section * &scalar));
            if class.is_zero() {
                continue;
            }
            for (d, sign) in series {
                let mut degree = vec![0; self.models.len()];
                degree[s] = d;
                out.push((
                    degree,
                    CRClass::in_sector(target, class.scale(&Rat::from_integer(sign.into()))),
                ));
            }
        }
        Ok(out)
    }

    /// `D ⋆ x` for a linear divisor.
    pub fn multiply_divisor(
        &self,
        divisor: &Divisor,
        x: &CRClass,
        order: u32,
    ) -> Result<NovikovSeries> {
        if order < 1 {
            return Err(Error::TruncationTooSmall);
        }
        let hbar_part = self
            .ring
            .reduce(&x.mul_scalar(&Poly::hbar().scale(&divisor.hbar)));
        let mut out = NovikovSeries::constant(self.models.len(), order, hbar_part);
        for (&i, c) in &divisor.u {
            out = out.add(&self.multiply_u(i, x, order)?.scale(c));
        }
        Ok(out)
    }

    /// `D ⋆ series`, term by term.
    pub fn multiply_series(
        &self,
        divisor: &Divisor,
        series: &NovikovSeries,
    ) -> Result<NovikovSeries> {
        let order = series.truncation_order();
        let mut out = NovikovSeries::zero(self.models.len(), order);
        for (d, x) in series.terms() {
            if x.is_zero() {
                continue;
            }
            out = out.add(&self.multiply_divisor(divisor, x, order)?.shifted(d));
        }
        Ok(out)
    }

    /// `D_1 ⋆ D_2 ⋆ … ⋆ 1`.
    pub fn word(&self, divisors: &[Divisor], order: u32) -> Result<NovikovSeries> {
        if order < 1 {
            return Err(Error::TruncationTooSmall);
        }
        let mut s = NovikovSeries::constant(self.models.len(), order, CRClass::unit());
        for d in divisors.iter().rev() {
            s = self.multiply_series(d, &s)?;
        }
        Ok(s)
    }

    pub fn evaluate(&self, relation: &QuantumRelation, order: u32) -> Result<NovikovSeries> {
        let mut out = NovikovSeries::zero(self.models.len(), order);
        for t in &relation.terms {
            let shift = if t.shift.is_empty() {
                vec![0; self.models.len()]
            } else {
                t.shift.clone()
            };
            out = out.add(
                &self
                    .word(&t.word, order)?
                    .shifted(&shift)
                    .scale(&t.coefficient),
            );
        }
        Ok(out)
    }

    /// Whether every coefficient vanishes modulo the Chen-Ruan ideal; reports
    /// the lowest total degree where it does not.
    pub fn verify_series(&self, series: &NovikovSeries) -> RelationReport {
        let mut degrees: Vec<&Vec<u32>> = series.terms.keys().collect();
        degrees.sort_by_key(|d| (d.iter().sum::<u32>(), (*d).clone()));
        let first_failure = degrees
            .into_iter()
            .find(|d| !self.ring.equivalent(&series.terms[*d], &CRClass::zero()))
            .cloned();
        RelationReport {
            holds: first_failure.is_none(),
            first_failure,
            order: series.truncation_order(),
        }
    }

    pub fn verify_relation(
        &self,
        relation: &QuantumRelation,
        order: u32,
    ) -> Result<RelationReport> {
        Ok(self.verify_series(&self.evaluate(relation, order)?))
    }

    /// `∏_{S⁺} u_i^{⋆w_i} ⋆ ∏_{S⁻} (ħ−u_j)^{⋆w_j} − ε Q^l ∏_{S⁺} (ħ−u_i)^{⋆w_i} ⋆ ∏_{S⁻} u_j^{⋆w_j}`
    /// with `ε = (−1)^{Σ w}`, the sign the engine satisfies.
    pub fn circuit_relation(&self, circuit: usize) -> Result<QuantumRelation> {
        let model = self
            .models
            .get(circuit)
            .ok_or_else(|| Error::Shape(format!("no circuit {}", circuit + 1)))?;
        let total: u32 = model.weights.iter().sum();
        let sign = if total.is_multiple_of(2) {
            Rat::one()
        } else {
            -Rat::one()
        };
        Ok(self.circuit_relation_with_sign(circuit, -sign, model.lcm()))
    }

    /// The same products with an explicit coefficient `c` on `Q^e ∏ (dual)`.
    pub fn circuit_relation_with_sign(
        &self,
        circuit: usize,
        c: Rat,
        exponent: u32,
    ) -> QuantumRelation {
        let model = &self.models[circuit];
        let mut lhs = Vec::new();
        let mut rhs = Vec::new();
        for (s, &slot) in model.slots.iter().enumerate() {
            for _ in 0..model.weights[s] {
                let (a, b) = if model.positive[s] {
                    (Divisor::u(slot), Divisor::dual(slot))
                } else {
                    (Divisor::dual(slot), Divisor::u(slot))
                };
                lhs.push(a);
                rhs.push(b);
            }
        }
        let mut shift = vec![0; self.models.len()];
        shift[circuit] = exponent;
        QuantumRelation {
            terms: vec![
                RelationTerm {
                    coefficient: Rat::one(),
                    shift: vec![0; self.models.len()],
                    word: lhs,
                },
                RelationTerm {
                    coefficient: c,
                    shift,
                    word: rhs,
                },
            ],
        }
    }

    /// First degree at which each convention departs from the default, for
    /// the full product and for every sector pair.
    pub fn differential_report(
        &self,
        divisor: &Divisor,
        x: &CRClass,
        order: u32,
    ) -> Result<DifferentialReport> {
        let mut series = Vec::new();
        for c in SignConvention::ALL {
            let engine = QuantumEngine {
                convention: c,
                ..self.clone()
            };
            series.push((c, engine.multiply_divisor(divisor, x, order)?));
        }
        let reference = series[0].1.clone();
        let product_divergence = series
            .iter()
            .skip(1)
            .map(|(c, s)| (*c, self.verify_series(&s.sub(&reference)).first_failure))
            .collect();
        let mut pairs = Vec::new();
        for (circuit, model) in self.models.iter().enumerate() {
            for a in &model.sectors {
                for g in &model.sectors {
                    let base = pair_series(
                        SignConvention::ExampleCalibrated,
                        &model.weights,
                        a,
                        g,
                        order,
                    );
                    for c in &SignConvention::ALL[1..] {
                        let other = pair_series(*c, &model.weights, a, g, order);
                        pairs.push(PairDivergence {
                            circuit,
                            first: a.fraction.clone(),
                            target: g.fraction.clone(),
                            convention: *c,
                            degree: first_difference(&base, &other),
                        });
                    }
                }
            }
        }
        Ok(DifferentialReport {
            series,
            product_divergence,
            pairs,
        })
    }
}

fn circuit_model(ring: &CrRing, circuit: &crate::multifan::Circuit) -> Result<CircuitModel> {
    let arr = &ring.arrangement;
    let weights = circuit
        .weights
        .iter()
        .map(|w| {
            w.to_u32()
                .ok_or_else(|| Error::Unsupported(format!("circuit weight {w} too large")))
        })
        .collect::<Result<Vec<u32>>>()?;
    let model = WeightedModel::new(weights.clone())?;
    let sectors = model.sectors();
    let positive: Vec<bool> = circuit
        .support
        .iter()
        .map(|&i| circuit.is_positive(i))
        .collect();
    let mut boxes = Vec::with_capacity(sectors.len());
    for sector in &sectors {
        let mut sigma = Vec::new();
        let mut v = vec![Rat::zero(); arr.d()];
        for (s, &slot) in circuit.support.iter().enumerate() {
            let t = fract(&(&sector.fraction * Rat::from_integer(weights[s].into())));
            if t.is_zero() {
                continue;
            }
            let alpha = if positive[s] { t } else { Rat::one() - t };
            sigma.push(slot);
            for (x, b) in v.iter_mut().zip(arr.b_bar(slot)) {
                *x += &alpha * Rat::from_integer(b);
            }
        }
        if v.iter().any(|x| !x.is_integer()) {
            return Err(Error::Shape(format!(
                "sector {} of circuit {:?} is not a lattice point",
                sector.label(),
                circuit.support
            )));
        }
        let v: Vec<Int> = v.into_iter().map(|x| x.to_integer()).collect();
        let index = ring.sector_of(&sigma, &v).ok_or_else(|| {
            Error::Shape(format!(
                "sector {} of circuit {:?} has no box element",
                sector.label(),
                circuit.support
            ))
        })?;
        boxes.push(index);
    }
    Ok(CircuitModel {
        slots: circuit.support.clone(),
        positive,
        weights,
        beta: circuit.beta_s.clone(),
        table: standard_table(&model),
        sectors,
        boxes,
    })
}

fn fract(x: &Rat) -> Rat {
    x - x.floor()
}

fn parity(e: i64) -> i32 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// `Σ_j ⟨f w_j⟩`.
fn model_age(f: &Rat, weights: &[u32]) -> Rat {
    weights
        .iter()
        .map(|&w| fract(&(f * Rat::from_integer(w.into()))))
        .sum()
}

/// `(−1)^{⌊−age(f1)⌋ + ⌊−age(f2)⌋}`.
pub fn gamma_sign(f1: &Rat, f2: &Rat, weights: &[u32]) -> i32 {
    let e = |f: &Rat| {
        (-model_age(f, weights))
            .floor()
            .to_integer()
            .to_i64()
            .expect("small age")
    };
    parity(e(f1) + e(f2))
}

/// Every `r ∈ [0, l)` with `⟨r / w_i⟩ = f1`, `⟨r / w_j⟩ = f2` for some slots
/// `i ≠ j`, and `w_k | r` for the remaining slots.
pub fn compatible_degrees(f1: &Rat, f2: &Rat, weights: &[u32]) -> Vec<u32> {
    let l = weights
        .iter()
        .fold(1u32, |acc, &w| num_integer::lcm(acc, w));
    let frac_of = |r: u32, w: u32| Rat::new(Int::from(r % w), Int::from(w));
    (0..l)
        .filter(|&r| {
            (0..weights.len()).any(|i| {
                (0..weights.len()).any(|j| {
                    i != j
                        && &frac_of(r, weights[i]) == f1
                        && &frac_of(r, weights[j]) == f2
                        && (0..weights.len()).all(|k| k == i || k == j || r % weights[k] == 0)
                })
            })
        })
        .collect()
}

/// The least compatible degree of a sector pair, if any.
pub fn r_of_sector_pair(f1: &Rat, f2: &Rat, weights: &[u32]) -> Option<u32> {
    compatible_degrees(f1, f2, weights).first().copied()
}

/// `(degree, sign)` pairs up to `order` for the input sector `a` and output sector `g`.
fn pair_series(
    convention: SignConvention,
    weights: &[u32],
    a: &Sector,
    g: &Sector,
    order: u32,
) -> Vec<(u32, i32)> {
    let l = weights
        .iter()
        .fold(1u32, |acc, &w| num_integer::lcm(acc, w));
    let n = weights.len() as i64 - 1;
    let (r, sign): (u32, Box<dyn Fn(u32) -> i32>) = match convention {
        SignConvention::ExampleCalibrated => {
            let t = fract(&(&a.fraction - &g.fraction)) * Rat::from_integer(l.into());
            let r = t.to_integer().to_u32().expect("r below l");
            let s = parity(n + 1) * parity(n - g.dim() as i64);
            (r, Box::new(move |_| s))
        }
        SignConvention::TheoremLiteral | SignConvention::ClosedFormLiteral => {
            let f2 = fract(&-g.fraction.clone());
            let Some(r) = r_of_sector_pair(&a.fraction, &f2, weights) else {
                return Vec::new();
            };
            let base = parity(n) * gamma_sign(&a.fraction, &f2, weights);
            if convention == SignConvention::TheoremLiteral {
                (r, Box::new(move |_| base))
            } else {
                let inv_sum: Rat = weights
                    .iter()
                    .map(|&w| Rat::new(Int::one(), Int::from(w)))
                    .sum();
                (
                    r,
                    Box::new(move |d| {
                        let e = (Rat::from_integer(d.into()) * &inv_sum)
                            .floor()
                            .to_integer();
                        base * parity(e.to_i64().expect("small degree"))
                    }),
                )
            }
        }
    };
    let start = if r == 0 { l } else { r };
    (0..)
        .map(|k| start + k * l)
        .take_while(|&d| d <= order)
        .map(|d| (d, sign(d)))
        .collect()
}

fn first_difference(a: &[(u32, i32)], b: &[(u32, i32)]) -> Option<u32> {
    let max = a.iter().chain(b).map(|(d, _)| *d).max()?;
    let at = |s: &[(u32, i32)], d: u32| s.iter().find(|(e, _)| *e == d).map_or(0, |(_, c)| *c);
    (1..=max).find(|&d| at(a, d) != at(b, d))
}

/// `Σ c · Q^shift · (D_1 ⋆ … ⋆ D_k)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct QuantumRelation {
    pub terms: Vec<RelationTerm>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationTerm {
    pub coefficient: Rat,
    pub shift: Vec<u32>,
    pub word: Vec<Divisor>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationReport {
    pub holds: bool,
    pub first_failure: Option<Vec<u32>>,
    pub order: u32,
}

#[derive(Debug, Clone)]
pub struct DifferentialReport {
    pub series: Vec<(SignConvention, NovikovSeries)>,
    /// First degree where the product differs from the default convention.
    pub product_divergence: Vec<(SignConvention, Option<Vec<u32>>)>,
    pub pairs: Vec<PairDivergence>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairDivergence {
    pub circuit: usize,
    pub first: Rat,
    pub target: Rat,
    pub convention: SignConvention,
    pub degree: Option<u32>,
}

impl fmt::Display for PairDivergence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "circuit {} pair ({}, {}) {}: ",
            self.circuit + 1,
            self.first,
            self.target,
            self.convention
        )?;
        match self.degree {
            Some(d) => write!(f, "first differs at Q^{d}"),
            None => write!(f, "agrees"),
        }
    }
}

/// `u_i ⋆ x` with the default sign convention.
pub fn quantum_divisor_product(
    arr: &StackyArrangement,
    i: usize,
    x: &CRClass,
    order: u32,
) -> Result<NovikovSeries> {
    if order < 1 {
        return Err(Error::TruncationTooSmall);
    }
    QuantumEngine::new(arr)?.multiply_u(i, x, order)
}

/// `e_𝕋(N) = ħ^{m − d}` for the trivial normal bundle of `X_θ` in `X_A`.
pub fn lawrence_euler_constant(arr: &StackyArrangement) -> Poly {
    let e = arr.m().saturating_sub(arr.d());
    Poly::hbar().pow(e as u32)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(b1: i64) -> StackyArrangement {
        StackyArrangement::from_small(1, &[&[b1], &[1]], &[1], None).unwrap()
    }

    fn half() -> Rat {
        Rat::new(1.into(), 2.into())
    }

    #[test]
    fn scanned_degrees() {
        assert_eq!(
            r_of_sector_pair(&Rat::zero(), &Rat::zero(), &[1, 2]),
            Some(0)
        );
        assert_eq!(r_of_sector_pair(&Rat::zero(), &half(), &[1, 2]), Some(1));
        assert_eq!(r_of_sector_pair(&half(), &Rat::zero(), &[2, 2]), None);
    }

    #[test]
    fn projective_line_product() {
        let engine = QuantumEngine::new(&line(-1)).unwrap();
        let s = engine
            .multiply_u(0, &CRClass::from_poly(Poly::u(1)), 6)
            .unwrap();
        let expected = (Poly::hbar() - Poly::u(0)) * (Poly::hbar() - Poly::u(1));
        for k in 1..=6 {
            let target = CRClass::from_poly(expected.clone());
            assert!(
                engine.ring.equivalent(&s.coefficient_q(k), &target),
                "Q^{k}"
            );
        }
        assert!(s.coefficient_q(0).is_zero());
    }

    #[test]
    fn weighted_line_relation_sign() {
        let engine = QuantumEngine::new(&line(-2)).unwrap();
        let rel = engine.circuit_relation(0).unwrap();
        assert!(engine.verify_relation(&rel, 4).unwrap().holds);
    }

    #[test]
    fn truncation_order_zero_is_rejected() {
        let err = quantum_divisor_product(&line(-1), 0, &CRClass::unit(), 0).unwrap_err();
        assert_eq!(err, Error::TruncationTooSmall);
    }
}
