//! The quantum Stanley-Reisner ring: symbols `y^c` for lattice points of the
//! Lawrence fan with `y^{c1} ⋆ y^{c2} = Q^{l(c1,c2)} y^{c1+c2}`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{QuantumEngine, QuantumRelation, RelationTerm};
use crate::arrangement::StackyArrangement;
use crate::crring::Poly;
use crate::exactalg::rational::to_rat_vec;
use crate::lawrence::LawrenceFan;
use crate::multifan::circuits;
use crate::{Error, Int, Rat, Result};

/// `Σ coefficient · Q^degree · y^point`, the degree in kernel coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct QsrElement {
    terms: BTreeMap<(Vec<Int>, Vec<Rat>), Poly>,
}

impl QsrElement {
    pub fn zero() -> Self {
        QsrElement::default()
    }

    /// `y^0`, the unit.
    pub fn unit(fan: &LawrenceFan, kernel_rank: usize) -> Self {
        QsrElement::monomial(
            vec![Int::zero(); fan.d + fan.m],
            vec![Rat::zero(); kernel_rank],
            Poly::one(),
        )
    }

    pub fn monomial(point: Vec<Int>, degree: Vec<Rat>, coefficient: Poly) -> Self {
        let mut out = QsrElement::zero();
        out.add_term(point, degree, &coefficient);
        out
    }

    /// `y^{ray_j}`.
    pub fn ray(fan: &LawrenceFan, kernel_rank: usize, j: usize) -> Self {
        QsrElement::monomial(
            fan.rays[j].clone(),
            vec![Rat::zero(); kernel_rank],
            Poly::one(),
        )
    }

    pub fn add_term(&mut self, point: Vec<Int>, degree: Vec<Rat>, coefficient: &Poly) {
        let key = (point, degree);
        let sum = &self.terms.get(&key).cloned().unwrap_or_default() + coefficient;
        if sum.is_zero() {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, sum);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Int>, &Vec<Rat>, &Poly)> {
        self.terms.iter().map(|((p, d), c)| (p, d, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &QsrElement) -> QsrElement {
        let mut out = self.clone();
        for ((p, d), c) in &other.terms {
            out.add_term(p.clone(), d.clone(), c);
        }
        out
    }

    pub fn scale(&self, c: &Poly) -> QsrElement {
        let mut out = QsrElement::zero();
        for ((p, d), x) in &self.terms {
            out.add_term(p.clone(), d.clone(), &(x * c));
        }
        out
    }
}

impl fmt::Display for QsrElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((p, d), c)| {
                let p: Vec<String> = p.iter().map(Int::to_string).collect();
                let d: Vec<String> = d.iter().map(Rat::to_string).collect();
                format!("({c})*Q^({})*y^({})", d.join(","), p.join(","))
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Bilinear product; terms whose total Novikov degree exceeds `order` are dropped.
pub fn qsr_multiply(
    a: &QsrElement,
    b: &QsrElement,
    fan: &LawrenceFan,
    arr: &StackyArrangement,
    order: u32,
) -> Result<QsrElement> {
    let bound = Rat::from_integer(order.into());
    let mut out = QsrElement::zero();
    for ((p1, d1), c1) in &a.terms {
        for ((p2, d2), c2) in &b.terms {
            let l = fan.l_pairing(arr, &to_rat_vec(p1), &to_rat_vec(p2))?;
            let degree: Vec<Rat> = d1
                .iter()
                .zip(d2)
                .zip(&l.novikov_degree)
                .map(|((x, y), z)| x + y + z)
                .collect();
            if degree.iter().sum::<Rat>() > bound {
                continue;
            }
            let point: Vec<Int> = p1.iter().zip(p2).map(|(x, y)| x + y).collect();
            out.add_term(point, degree, &(c1 * c2));
        }
    }
    Ok(out)
}

/// Generators `y^{b_{L,i}}`, `y^{b'_{L,i}}` and the relations
/// `y^{b_{L,i}} + y^{b'_{L,i}} − ħ`, one per hyperplane.
#[derive(Debug, Clone)]
pub struct QsrPresentation {
    pub generators: Vec<Vec<Int>>,
    pub relations: Vec<QsrElement>,
}

impl fmt::Display for QsrPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.generators.len() / 2;
        writeln!(f, "generators:")?;
        for (j, g) in self.generators.iter().enumerate() {
            let name = if j < m {
                format!("y^bL{}", j + 1)
            } else {
                format!("y^bL'{}", j - m + 1)
            };
            let g: Vec<String> = g.iter().map(Int::to_string).collect();
            writeln!(f, "  {name} = y^({})", g.join(","))?;
        }
        writeln!(f, "relations:")?;
        for i in 0..m {
            writeln!(f, "  y^bL{0} + y^bL'{0} - hbar", i + 1)?;
        }
        Ok(())
    }
}

pub fn qsr_presentation(arr: &StackyArrangement, fan: &LawrenceFan) -> QsrPresentation {
    let m = arr.m();
    let k = arr.dual_rank();
    let relations = (0..m)
        .map(|i| {
            let mut r = QsrElement::ray(fan, k, i).add(&QsrElement::ray(fan, k, m + i));
            r.add_term(
                vec![Int::zero(); fan.d + fan.m],
                vec![Rat::zero(); k],
                &-Poly::hbar(),
            );
            r
        })
        .collect();
    QsrPresentation {
        generators: fan.rays.clone(),
        relations,
    }
}

/// Novikov degrees of `∏_{S⁺} y^{b_{L,i} w_i} ∏_{S⁻} y^{b'_{L,j} w_j}` and of the
/// product with the two ray families exchanged. Both products land on the
/// same lattice point.
pub fn qsr_circuit_degrees(
    arr: &StackyArrangement,
    fan: &LawrenceFan,
    circuit: usize,
) -> Result<(Vec<Rat>, Vec<Rat>)> {
    let cs = circuits(arr)?;
    let c = cs
        .get(circuit)
        .ok_or_else(|| Error::Shape(format!("no circuit {}", circuit + 1)))?;
    let m = arr.m();
    let k = arr.dual_rank();
    let product = |swap: bool| -> Result<(Vec<Int>, Vec<Rat>)> {
        let mut acc = QsrElement::unit(fan, k);
        for (s, &i) in c.support.iter().enumerate() {
            let lifted = c.is_positive(i) != swap;
            let ray = if lifted { i } else { m + i };
            for _ in 0..c.weights[s].to_u32().unwrap_or(0) {
                acc = qsr_multiply(&acc, &QsrElement::ray(fan, k, ray), fan, arr, u32::MAX)?;
            }
        }
        let ((point, degree), _) = acc.terms.into_iter().next().expect("a monomial product");
        Ok((point, degree))
    };
    let (p1, d1) = product(false)?;
    let (p2, d2) = product(true)?;
    if p1 != p2 {
        return Err(Error::Shape(
            "circuit products land on different lattice points".into(),
        ));
    }
    Ok((d1, d2))
}

/// The relation `∏ u ⋆ … = Q^t ∏ (ħ − u) ⋆ …` obtained by reading `y^{b_{L,i}}` as
/// `u_i` and `y^{b'_{L,i}}` as `ħ − u_i`, with `t` the degree difference measured
/// in units of `β^S / l`.
pub fn eliminated_relation(
    engine: &QuantumEngine,
    fan: &LawrenceFan,
    circuit: usize,
) -> Result<QuantumRelation> {
    let arr = &engine.ring.arrangement;
    let (d1, d2) = qsr_circuit_degrees(arr, fan, circuit)?;
    let c = &engine.ring.circuits[circuit];
    let diff: Vec<Rat> = d1.iter().zip(&d2).map(|(a, b)| a - b).collect();
    let l = Rat::from_integer(c.lcm_w.clone());
    let mut units: Option<Rat> = None;
    for (x, h) in diff.iter().zip(&c.h2_class) {
        if h.is_zero() {
            if !x.is_zero() {
                return Err(Error::Shape(
                    "degree difference is not a multiple of the circuit class".into(),
                ));
            }
            continue;
        }
        let t = x * &l / Rat::from_integer(h.clone());
        if units.as_ref().is_some_and(|u| u != &t) {
            return Err(Error::Shape(
                "degree difference is not a multiple of the circuit class".into(),
            ));
        }
        units = Some(t);
    }
    let t = units.unwrap_or_else(Rat::zero);
    if !t.is_integer() {
        return Err(Error::Shape(format!("degree difference {t} is fractional")));
    }
    let e = t
        .abs()
        .to_integer()
        .to_u32()
        .ok_or_else(|| Error::Shape("degree too large".into()))?;
    let rel = engine.circuit_relation_with_sign(circuit, -Rat::one(), 0);
    let mut shift = vec![0; engine.circuit_count()];
    shift[circuit] = e;
    let [lhs, rhs]: [RelationTerm; 2] = rel.terms.try_into().expect("two terms");
    let (lhs, rhs) = if t.is_negative() {
        (RelationTerm { shift, ..lhs }, rhs)
    } else {
        (lhs, RelationTerm { shift, ..rhs })
    };
    Ok(QuantumRelation {
        terms: vec![lhs, rhs],
    })
}
