//! Fixed-point localization on `X = T*P^n_w`: twisted sectors, restriction
//! tables, equivariant integrals and the Steinberg operators.
//!
//! Model variables: `U(j)` is the hyperplane class of coordinate `j`,
//! `Lambda(j)` the torus weight of coordinate `j`, and `Hbar` the weight of
//! the cotangent scaling.

mod ratfunc;

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Zero};

pub use ratfunc::RatFunc;

use crate::crring::{Poly, Var};
use crate::exactalg::rational::{rank, RatMatrix};
use crate::{Error, Int, Rat, Result};

/// Weights `w_0, …, w_n` of the weighted projective space `P^n_w`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedModel {
    weights: Vec<u32>,
}

/// A twisted sector `f ∈ [0, 1)` with support `[w:d] = {j : d | w_j}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sector {
    pub fraction: Rat,
    pub order: u32,
    pub support: Vec<usize>,
    /// Number of weights not divisible by the order.
    pub age: usize,
}

impl Sector {
    /// Dimension of the compact part `P([w:d])`.
    pub fn dim(&self) -> usize {
        self.support.len() - 1
    }

    pub fn label(&self) -> String {
        if self.fraction.is_zero() {
            "1".to_string()
        } else {
            format!("1_{{{}}}", self.fraction)
        }
    }
}

impl WeightedModel {
    pub fn new(weights: Vec<u32>) -> Result<Self> {
        if weights.len() < 2 || weights.contains(&0) {
            return Err(Error::Shape(
                "a weighted model needs at least two positive weights".into(),
            ));
        }
        Ok(WeightedModel { weights })
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn n(&self) -> usize {
        self.weights.len() - 1
    }

    pub fn lcm(&self) -> u32 {
        self.weights.iter().fold(1, |acc, w| acc.lcm(w))
    }

    fn weight(&self, j: usize) -> Rat {
        Rat::from_integer(Int::from(self.weights[j]))
    }

    /// Sectors `{a / w_i}` in increasing order; the untwisted sector is first.
    pub fn sectors(&self) -> Vec<Sector> {
        let mut fractions: Vec<Rat> = self
            .weights
            .iter()
            .flat_map(|&w| (0..w).map(move |a| Rat::new(Int::from(a), Int::from(w))))
            .collect();
        fractions.sort();
        fractions.dedup();
        fractions
            .into_iter()
            .map(|f| {
                let order = u32::try_from(f.denom()).expect("small weights");
                let support: Vec<usize> = (0..self.weights.len())
                    .filter(|&j| self.weights[j].is_multiple_of(order))
                    .collect();
                let age = self.weights.len() - support.len();
                Sector {
                    fraction: f,
                    order,
                    support,
                    age,
                }
            })
            .collect()
    }

    pub fn sector_index(&self, fraction: &Rat) -> Option<usize> {
        self.sectors().iter().position(|s| &s.fraction == fraction)
    }

    /// Tangent weight `λ_j − (w_j / w_k) λ_k` of coordinate `j` at the point `P_k`.
    pub fn tangent_weight(&self, j: usize, k: usize) -> Poly {
        Poly::lambda(j) - Poly::lambda(k).scale(&(self.weight(j) / self.weight(k)))
    }
}

/// Which restriction data a table carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TableConvention {
    /// Derived from the quotient construction; defined for every weight vector.
    #[default]
    Standard,
    /// The hard-coded data of the worked `T*P(1,2)` example.
    Paper,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedPoint {
    pub sector: usize,
    /// Coordinate index `k` of the fixed point `P_k`.
    pub point: usize,
    pub multiplicity: Rat,
    pub tangent: Vec<Poly>,
    pub fiber: Vec<Poly>,
    /// Restrictions of every `U(j)`, when the table fixes them.
    pub hyperplanes: Option<Vec<Poly>>,
    /// Restriction of `Σ_j U(j)`.
    pub hyperplane_sum: Poly,
}

impl FixedPoint {
    pub fn tangent_euler(&self) -> Poly {
        self.tangent.iter().fold(Poly::one(), |acc, t| acc * t)
    }

    pub fn fiber_euler(&self) -> Poly {
        self.fiber.iter().fold(Poly::one(), |acc, t| acc * t)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedPointTable {
    pub model: WeightedModel,
    pub convention: TableConvention,
    pub sectors: Vec<Sector>,
    pub points: Vec<FixedPoint>,
}

pub fn standard_table(model: &WeightedModel) -> FixedPointTable {
    let sectors = model.sectors();
    let mut points = Vec::new();
    for (s, sector) in sectors.iter().enumerate() {
        for &k in &sector.support {
            let tangent: Vec<Poly> = sector
                .support
                .iter()
                .filter(|&&j| j != k)
                .map(|&j| model.tangent_weight(j, k))
                .collect();
            let fiber = tangent.iter().map(|t| Poly::hbar() - t).collect();
            let hyperplanes: Vec<Poly> = (0..=model.n())
                .map(|j| model.tangent_weight(j, k))
                .collect();
            let hyperplane_sum = hyperplanes.iter().fold(Poly::zero(), |acc, h| acc + h);
            points.push(FixedPoint {
                sector: s,
                point: k,
                multiplicity: model.weight(k).recip(),
                tangent,
                fiber,
                hyperplanes: Some(hyperplanes),
                hyperplane_sum,
            });
        }
    }
    FixedPointTable {
        model: model.clone(),
        convention: TableConvention::Standard,
        sectors,
        points,
    }
}

/// The `T*P(1,2)` table of the worked example: tangent weight `λ_k` at
/// `P_k`, fiber weight `ħ − λ_1 − λ_2` at both points, a uniform factor `1/2`,
/// and `(u_1 + u_2)|_{P_k} = λ_1 + λ_2`. Individual hyperplane restrictions
/// are left unfixed because no choice is compatible with the rest.
pub fn paper_table_p12() -> FixedPointTable {
    let model = WeightedModel::new(vec![1, 2]).expect("valid weights");
    let sectors = model.sectors();
    let half = Rat::new(Int::one(), Int::from(2));
    let sum = Poly::lambda(0) + Poly::lambda(1);
    let fiber = Poly::hbar() - &sum;
    let untwisted = |k: usize| FixedPoint {
        sector: 0,
        point: k,
        multiplicity: half.clone(),
        tangent: vec![Poly::lambda(k)],
        fiber: vec![fiber.clone()],
        hyperplanes: None,
        hyperplane_sum: sum.clone(),
    };
    let twisted = FixedPoint {
        sector: 1,
        point: 1,
        multiplicity: half.clone(),
        tangent: Vec::new(),
        fiber: Vec::new(),
        hyperplanes: None,
        hyperplane_sum: sum.clone(),
    };
    FixedPointTable {
        model,
        convention: TableConvention::Paper,
        sectors,
        points: vec![untwisted(0), untwisted(1), twisted],
    }
}

pub fn table(model: &WeightedModel, convention: TableConvention) -> Result<FixedPointTable> {
    match convention {
        TableConvention::Standard => Ok(standard_table(model)),
        TableConvention::Paper if model.weights() == [1, 2] => Ok(paper_table_p12()),
        TableConvention::Paper => Err(Error::Unsupported(
            "the `paper` table convention exists only for weights (1,2)".into(),
        )),
    }
}

impl FixedPointTable {
    pub fn points_of(&self, sector: usize) -> impl Iterator<Item = (usize, &FixedPoint)> {
        self.points
            .iter()
            .enumerate()
            .filter(move |(_, p)| p.sector == sector)
    }

    /// Restriction of a model class to a fixed point. Without individual
    /// hyperplane data the class must be a polynomial in `Σ_j U(j)`.
    pub fn restrict(&self, point: usize, class: &Poly) -> Result<Poly> {
        let p = &self.points[point];
        if let Some(h) = &p.hyperplanes {
            return Ok(class.substitute(&|v| match v {
                Var::U(j) => Some(h[j].clone()),
                _ => None,
            }));
        }
        let last = self.model.n();
        let rest = (0..last).fold(p.hyperplane_sum.clone(), |acc, j| acc - Poly::u(j));
        let reduced = class.substitute(&|v| (v == Var::U(last)).then(|| rest.clone()));
        if reduced.variables().iter().any(|v| matches!(v, Var::U(_))) {
            return Err(Error::Unsupported(format!(
                "the {:?} table does not fix the restriction of {class}",
                self.convention
            )));
        }
        Ok(reduced)
    }

    fn localized_sum(&self, sector: usize, class: &Poly, with_fiber: bool) -> Result<RatFunc> {
        let mut total = RatFunc::zero();
        for (i, p) in self.points_of(sector) {
            let value = self.restrict(i, class)?.scale(&p.multiplicity);
            let mut factors = p.tangent.clone();
            if with_fiber {
                factors.extend(p.fiber.iter().cloned());
            }
            total = total.add(&RatFunc::new(value, &factors).ok_or(Error::ZeroEuler { point: i })?);
        }
        Ok(total)
    }

    /// `∫_{X_f} class` over the whole sector `T*P([w:d])`.
    pub fn integrate(&self, sector: usize, class: &Poly) -> Result<RatFunc> {
        self.localized_sum(sector, class, true)
    }

    /// `∫_{P_f} class` over the compact part `P([w:d])`.
    pub fn integrate_compact(&self, sector: usize, class: &Poly) -> Result<RatFunc> {
        self.localized_sum(sector, class, false)
    }

    /// `∫_{X_f} class ∪ [P_f]`, where `[P_f]` restricts to the fiber Euler class.
    pub fn integrate_against_zero_section(&self, sector: usize, class: &Poly) -> Result<RatFunc> {
        let mut total = RatFunc::zero();
        for (i, p) in self.points_of(sector) {
            let value = (self.restrict(i, class)? * p.fiber_euler()).scale(&p.multiplicity);
            let mut factors = p.tangent.clone();
            factors.extend(p.fiber.iter().cloned());
            total = total.add(&RatFunc::new(value, &factors).ok_or(Error::ZeroEuler { point: i })?);
        }
        Ok(total)
    }
}

/// Class of the zero section `P_f` in `X_f`:
/// `(∏_{j∈S} (ħ − U_j) − (−1)^{|S|} ∏_{j∈S} U_j) / ħ` over the support `S`.
pub fn zero_section_class(sector: &Sector) -> Poly {
    let dual = sector
        .support
        .iter()
        .fold(Poly::one(), |acc, &j| acc * (Poly::hbar() - Poly::u(j)));
    let plain = sector
        .support
        .iter()
        .fold(Poly::one(), |acc, &j| acc * Poly::u(j));
    let sign = if sector.support.len().is_multiple_of(2) {
        Rat::one()
    } else {
        -Rat::one()
    };
    (dual - plain.scale(&sign))
        .div_linear(&Poly::hbar())
        .expect("ħ divides the difference")
}

/// `L`, or `L⁻¹` with the roles of the two factors exchanged.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

/// `Σ_g c_g [P_g]`, keyed by sector.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SteinbergImage {
    pub coefficients: BTreeMap<usize, RatFunc>,
}

impl SteinbergImage {
    pub fn coefficient(&self, sector: usize) -> RatFunc {
        self.coefficients
            .get(&sector)
            .cloned()
            .unwrap_or_else(RatFunc::zero)
    }

    pub fn format(&self, sectors: &[Sector]) -> String {
        if self.coefficients.is_empty() {
            return "0".to_string();
        }
        self.coefficients
            .iter()
            .map(|(g, c)| {
                let class = if sectors[*g].fraction.is_zero() {
                    format!("({})", zero_section_class(&sectors[*g]))
                } else {
                    sectors[*g].label()
                };
                format!("({c})*{class}")
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// The Lagrangian part of the Steinberg correspondence applied to a class
/// in sector `f`: each component `P_f × P_g` sends it to `(∫ x) [P_g]`.
///
/// The forward direction integrates over the compact `P_f`, the inverse one
/// over `X_f` against `[P_f]`. A top-degree class in the `U(j)` alone has a
/// number as its integral, the same for every table, so when a table leaves
/// the restriction open the standard table supplies it.
pub fn steinberg_apply(
    table: &FixedPointTable,
    direction: Direction,
    sector: usize,
    class: &Poly,
) -> Result<SteinbergImage> {
    let computed = match direction {
        Direction::Forward => table.integrate_compact(sector, class),
        Direction::Inverse => table.integrate_against_zero_section(sector, class),
    };
    let c = match computed {
        Err(Error::Unsupported(_))
            if is_top_hyperplane_class(class, table.sectors[sector].dim()) =>
        {
            standard_table(&table.model).integrate_compact(sector, class)?
        }
        other => other?,
    };
    let mut image = SteinbergImage::default();
    if !c.is_zero() {
        for g in 0..table.sectors.len() {
            image.coefficients.insert(g, c.clone());
        }
    }
    Ok(image)
}

fn is_top_hyperplane_class(class: &Poly, dim: usize) -> bool {
    class.is_homogeneous()
        && class.degree() == Some(dim as u32)
        && class.variables().iter().all(|v| matches!(v, Var::U(_)))
}

/// Matrix of the correspondence in the fixed-point basis `δ_{(f,k)}`
/// (ordered as `table.points`); `with_diagonal` adds the identity coming
/// from the diagonal components.
pub fn steinberg_operator(
    table: &FixedPointTable,
    direction: Direction,
    with_diagonal: bool,
) -> Result<Vec<Vec<RatFunc>>> {
    let n = table.points.len();
    let mut columns = Vec::with_capacity(n);
    for (i, p) in table.points.iter().enumerate() {
        let coefficient = match direction {
            Direction::Forward => RatFunc::new(Poly::constant(p.multiplicity.clone()), &p.tangent),
            Direction::Inverse => {
                let mut factors = p.tangent.clone();
                factors.extend(p.fiber.iter().cloned());
                RatFunc::new(p.fiber_euler().scale(&p.multiplicity), &factors)
            }
        }
        .ok_or(Error::ZeroEuler { point: i })?;
        let column: Vec<RatFunc> = (0..n)
            .map(|r| {
                let mut entry = coefficient.mul_poly(&table.points[r].fiber_euler());
                if with_diagonal && r == i {
                    entry = entry.add(&RatFunc::one());
                }
                entry
            })
            .collect();
        columns.push(column);
    }
    Ok((0..n)
        .map(|r| (0..n).map(|c| columns[c][r].clone()).collect())
        .collect())
}

/// Evaluates a matrix of rational functions at a point, `None` on a pole.
pub fn evaluate_matrix(m: &[Vec<RatFunc>], at: &dyn Fn(Var) -> Rat) -> Option<RatMatrix> {
    m.iter()
        .map(|row| row.iter().map(|x| x.evaluate(at)).collect())
        .collect()
}

/// Sample points with distinct generic-looking coordinates.
pub fn sample_points() -> Vec<impl Fn(Var) -> Rat> {
    const PRIMES: [i64; 12] = [3, 7, 13, 29, 53, 101, 211, 409, 821, 1619, 3251, 6521];
    (0..4)
        .map(|s| {
            move |v: Var| {
                let k = match v {
                    Var::Hbar => 0,
                    Var::Lambda(j) => j + 1,
                    Var::U(j) => j + 7,
                };
                Rat::new(
                    Int::from(PRIMES[(k + s) % PRIMES.len()]),
                    Int::from(17 + 2 * s as i64),
                )
            }
        })
        .collect()
}

/// Injectivity over the fraction field: full rank at some point.
pub fn is_injective(m: &[Vec<RatFunc>]) -> bool {
    sample_points()
        .iter()
        .any(|at| evaluate_matrix(m, at).is_some_and(|x| rank(&x) == m.len()))
}

/// Whether `a · b` differs from the identity (witnessed at a sample point).
pub fn composition_differs_from_identity(a: &[Vec<RatFunc>], b: &[Vec<RatFunc>]) -> bool {
    sample_points().iter().any(|at| {
        let (Some(x), Some(y)) = (evaluate_matrix(a, at), evaluate_matrix(b, at)) else {
            return false;
        };
        let n = x.len();
        (0..n).any(|i| {
            (0..n).any(|j| {
                let v: Rat = (0..n).map(|k| &x[i][k] * &y[k][j]).sum();
                v != if i == j { Rat::one() } else { Rat::zero() }
            })
        })
    })
}

/// A component of `I(P_w × P_w)` or a diagonal sector, with its orbifold degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IzComponent {
    pub first: usize,
    pub second: usize,
    pub diagonal: bool,
    pub degree: usize,
}

impl fmt::Display for IzComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = if self.diagonal { "diagonal" } else { "Z" };
        write!(
            f,
            "{kind}({}, {}): {}",
            self.first, self.second, self.degree
        )
    }
}

/// Orbifold degrees `A_{d1} − 1 + A_{d2} − 1 + Ā_{d1} + Ā_{d2}` of every
/// `Z_{(f1,f2)}` and `2(A_d − 1) + 2Ā_d` of every diagonal sector.
pub fn orbifold_degrees(model: &WeightedModel) -> Vec<IzComponent> {
    let sectors = model.sectors();
    let mut out = Vec::new();
    for (a, s) in sectors.iter().enumerate() {
        out.push(IzComponent {
            first: a,
            second: a,
            diagonal: true,
            degree: 2 * s.dim() + 2 * s.age,
        });
    }
    for (a, s) in sectors.iter().enumerate() {
        for (b, t) in sectors.iter().enumerate() {
            out.push(IzComponent {
                first: a,
                second: b,
                diagonal: false,
                degree: s.dim() + t.dim() + s.age + t.age,
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::rat;

    fn half() -> Rat {
        Rat::new(1.into(), 2.into())
    }

    #[test]
    fn sectors_of_p12() {
        let model = WeightedModel::new(vec![1, 2]).unwrap();
        let s = model.sectors();
        assert_eq!(s.len(), 2);
        assert_eq!(s[1].fraction, half());
        assert_eq!(s[1].support, vec![1]);
        assert_eq!(s[1].age, 1);
        assert_eq!(
            zero_section_class(&s[0]),
            Poly::hbar() - Poly::u(0) - Poly::u(1)
        );
        assert_eq!(zero_section_class(&s[1]), Poly::one());
    }

    #[test]
    fn standard_tangent_weights() {
        let model = WeightedModel::new(vec![1, 2]).unwrap();
        assert_eq!(
            model.tangent_weight(1, 0),
            Poly::lambda(1) - Poly::lambda(0).scale(&rat(2))
        );
        let t = standard_table(&model);
        for p in &t.points {
            for (a, b) in p.tangent.iter().zip(&p.fiber) {
                assert_eq!(a + b, Poly::hbar());
            }
        }
    }

    #[test]
    fn hyperplane_degrees() {
        let t = standard_table(&WeightedModel::new(vec![1, 2]).unwrap());
        assert_eq!(
            t.integrate_compact(0, &Poly::u(0)).unwrap(),
            RatFunc::constant(half())
        );
        assert_eq!(t.integrate_compact(0, &Poly::u(1)).unwrap(), RatFunc::one());
        assert!(t.integrate_compact(0, &Poly::one()).unwrap().is_zero());
        assert_eq!(
            t.integrate_compact(1, &Poly::one()).unwrap(),
            RatFunc::constant(half())
        );
    }

    #[test]
    fn worked_table_needs_the_sum() {
        let t = paper_table_p12();
        assert!(t.restrict(0, &Poly::u(0)).is_err());
        let p = Poly::hbar() - Poly::u(0) - Poly::u(1);
        assert_eq!(
            t.restrict(1, &p).unwrap(),
            Poly::hbar() - Poly::lambda(0) - Poly::lambda(1)
        );
    }

    #[test]
    fn projective_line_degrees() {
        let d = orbifold_degrees(&WeightedModel::new(vec![1, 1]).unwrap());
        assert_eq!(d.len(), 2);
        assert!(d.iter().all(|c| c.degree == 2));
    }
}
