//! Presentations of `H*_T`, `H*_𝕋` and the equivariant Chen-Ruan ring, and
//! the Chen-Ruan product of sector classes.
//!
//! Classes live in the `λ = 0` specialization: polynomials in `u_i` and `ħ`
//! per twisted sector. In a sector `(v, σ)` the variables `u_j` with
//! `σ ∪ {j}` not a cone vanish, and `u_i` for `i ∈ σ` is eliminated through
//! the linear relations `Σ_i b̄_i u_i = 0`.

mod ideal;
pub mod poly;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

pub use ideal::in_homogeneous_ideal;
pub use poly::{Monomial, Poly, Var};

use crate::arrangement::StackyArrangement;
use crate::exactalg::rational::{self, RatMatrix};
use crate::multifan::{
    self, box_elements, box_index, circuits, flat_circuits, BoxElement, Circuit, FlatCircuit,
};
use crate::{Error, Int, Rat, Result};

/// How the factor of a twisted-sector product is written.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ProductConvention {
    /// `u_i (ħ − u_i)` factors, as forced by localization; at `ħ = 0` this is
    /// the signed rule `(−1)^{|J|} ∏_J u_i²`.
    #[default]
    Relation,
    /// Every `(ħ − u_i)` factor replaced by `u_i`, which reproduces the
    /// unsigned worked example `1_{1/2} · 1_{1/2} = u_1²`.
    Example,
}

/// A Chen-Ruan class: one polynomial per sector, keyed by box index.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CRClass {
    sectors: BTreeMap<usize, Poly>,
}

impl CRClass {
    pub fn zero() -> Self {
        CRClass::default()
    }

    pub fn unit() -> Self {
        CRClass::from_poly(Poly::one())
    }

    /// An untwisted class.
    pub fn from_poly(p: Poly) -> Self {
        CRClass::in_sector(0, p)
    }

    pub fn in_sector(sector: usize, p: Poly) -> Self {
        let mut sectors = BTreeMap::new();
        if !p.is_zero() {
            sectors.insert(sector, p);
        }
        CRClass { sectors }
    }

    /// The generator `1_{(v,σ)}`.
    pub fn generator(sector: usize) -> Self {
        CRClass::in_sector(sector, Poly::one())
    }

    pub fn component(&self, sector: usize) -> Poly {
        self.sectors.get(&sector).cloned().unwrap_or_default()
    }

    pub fn components(&self) -> impl Iterator<Item = (usize, &Poly)> {
        self.sectors.iter().map(|(k, p)| (*k, p))
    }

    pub fn is_zero(&self) -> bool {
        self.sectors.is_empty()
    }

    pub fn add_in_sector(&mut self, sector: usize, p: &Poly) {
        let sum = &self.component(sector) + p;
        if sum.is_zero() {
            self.sectors.remove(&sector);
        } else {
            self.sectors.insert(sector, sum);
        }
    }

    pub fn add(&self, other: &CRClass) -> CRClass {
        let mut out = self.clone();
        for (s, p) in &other.sectors {
            out.add_in_sector(*s, p);
        }
        out
    }

    pub fn sub(&self, other: &CRClass) -> CRClass {
        self.add(&other.scale(&-Rat::one()))
    }

    pub fn scale(&self, c: &Rat) -> CRClass {
        self.map(|p| p.scale(c))
    }

    /// Multiplies every component by a scalar polynomial (in `ħ` or `λ`).
    pub fn mul_scalar(&self, p: &Poly) -> CRClass {
        self.map(|q| q * p)
    }

    pub fn map(&self, f: impl Fn(&Poly) -> Poly) -> CRClass {
        let mut out = CRClass::zero();
        for (s, p) in &self.sectors {
            out.add_in_sector(*s, &f(p));
        }
        out
    }
}

/// One relation of a ring presentation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Relation {
    /// A polynomial in `u_i`, `ħ` that vanishes.
    Untwisted(Poly),
    /// `1_{sector} · factor = 0`.
    SectorAnnihilator { sector: usize, factor: Poly },
    /// `1_{left} · 1_{right} = value`.
    SectorProduct {
        left: usize,
        right: usize,
        value: CRClass,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingPresentation {
    pub generators: Vec<String>,
    /// Linear relations `Σ_i ⟨m, b_i⟩ u_i` at `λ = 0`, one per coordinate of `N̄`.
    pub linear: Vec<Poly>,
    pub relations: Vec<Relation>,
}

/// Per-sector data for normal forms and ideal membership.
#[derive(Debug, Clone)]
struct SectorData {
    /// `j ∉ σ` with `σ ∪ {j}` not a cone.
    killed: Vec<usize>,
    /// `u_i ↦ poly` for `i ∈ σ`.
    substitution: Vec<(usize, Poly)>,
    circuits: Vec<FlatCircuit>,
}

/// The Chen-Ruan ring of an arrangement.
#[derive(Debug, Clone)]
pub struct CrRing {
    pub arrangement: StackyArrangement,
    pub boxes: Vec<BoxElement>,
    pub circuits: Vec<Circuit>,
    pub convention: ProductConvention,
    sectors: Vec<SectorData>,
}

impl CrRing {
    pub fn new(arr: &StackyArrangement) -> Result<Self> {
        Self::with_convention(arr, ProductConvention::default())
    }

    pub fn with_convention(arr: &StackyArrangement, convention: ProductConvention) -> Result<Self> {
        let boxes = box_elements(arr);
        let circuits = circuits(arr)?;
        let mut cache: BTreeMap<Vec<usize>, SectorData> = BTreeMap::new();
        let mut sectors = Vec::with_capacity(boxes.len());
        for b in &boxes {
            if !cache.contains_key(&b.sigma) {
                cache.insert(b.sigma.clone(), sector_data(arr, &b.sigma)?);
            }
            sectors.push(cache[&b.sigma].clone());
        }
        Ok(CrRing {
            arrangement: arr.clone(),
            boxes,
            circuits,
            convention,
            sectors,
        })
    }

    pub fn m(&self) -> usize {
        self.arrangement.m()
    }

    /// `1_{(v,σ)}` with 1-based cone indices, or `1` for the trivial box.
    pub fn sector_label(&self, sector: usize) -> String {
        let b = &self.boxes[sector];
        if b.is_trivial() {
            return "1".to_string();
        }
        let v: Vec<String> = b.v.iter().map(Int::to_string).collect();
        let s: Vec<String> = b.sigma.iter().map(|i| (i + 1).to_string()).collect();
        format!("1_(v=({}),sigma={{{}}})", v.join(","), s.join(","))
    }

    pub fn format_class(&self, x: &CRClass) -> String {
        if x.is_zero() {
            return "0".to_string();
        }
        x.components()
            .map(|(s, p)| {
                if s == 0 {
                    format!("{p}")
                } else {
                    format!("({p})*{}", self.sector_label(s))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// `1_{(v,σ)}` for a box given by its cone and lattice point.
    pub fn sector_of(&self, sigma: &[usize], v: &[Int]) -> Option<usize> {
        box_index(&self.boxes, sigma, v)
    }

    /// Orbifold degree of a homogeneous component: polynomial degree plus age.
    pub fn degree_of(&self, sector: usize, p: &Poly) -> Option<u32> {
        p.degree().map(|d| d + self.boxes[sector].age as u32)
    }

    /// Reduces one sector polynomial: sector elimination, then removal of
    /// monomials divisible by a circuit monomial `∏_{S} u_i` with `S⁻ = ∅`.
    pub fn normal_form(&self, sector: usize, p: &Poly) -> Poly {
        let data = &self.sectors[sector];
        let p = p.at_lambda_zero();
        let p = p.substitute(&|v| match v {
            Var::U(j) if data.killed.contains(&j) => Some(Poly::zero()),
            Var::U(j) => data
                .substitution
                .iter()
                .find(|(i, _)| *i == j)
                .map(|(_, q)| q.clone()),
            _ => None,
        });
        let vanishing = self.vanishing_monomials(sector);
        p.filter_terms(|m| !vanishing.iter().any(|v| v.divides(m)))
    }

    fn vanishing_monomials(&self, sector: usize) -> Vec<Monomial> {
        let mut out: Vec<Monomial> = self.sectors[sector]
            .circuits
            .iter()
            .filter(|c| c.negative.is_empty())
            .map(|c| Monomial::from_powers(c.support.iter().map(|&i| (Var::U(i), 1)).collect()))
            .collect();
        out.extend(
            self.circuits
                .iter()
                .filter(|c| c.negative.is_empty())
                .map(|c| {
                    Monomial::from_powers(c.support.iter().map(|&i| (Var::U(i), 1)).collect())
                }),
        );
        out.sort();
        out.dedup();
        out
    }

    pub fn reduce(&self, x: &CRClass) -> CRClass {
        let mut out = CRClass::zero();
        for (s, p) in x.components() {
            out.add_in_sector(s, &self.normal_form(s, p));
        }
        out
    }

    /// Rejects sector polynomials containing a monomial that the relations
    /// force to vanish.
    pub fn check_reduced(&self, x: &CRClass) -> Result<()> {
        for (s, p) in x.components() {
            let data = &self.sectors[s];
            let vanishing = self.vanishing_monomials(s);
            for (m, _) in p.terms() {
                let killed = data.killed.iter().any(|&j| m.contains(Var::U(j)));
                if killed || vanishing.iter().any(|v| v.divides(m)) {
                    return Err(Error::UnreducedInput {
                        monomial: format!("{m} in {}", self.sector_label(s)),
                    });
                }
            }
        }
        Ok(())
    }

    /// The product `1_{b1} · 1_{b2}` as `(sector, factor)`, or `None` when
    /// `τ1 ∪ τ2` is not a cone.
    ///
    /// Lifting each box to `Σ α_i b_{L,i} + Σ (1 − α_i) b'_{L,i}` in the
    /// Lawrence fan, the toric product rule gives the factor
    /// `∏ u_i^{c_i} (ħ − u_i)^{c'_i}` where `c`, `c'` are the integer parts
    /// of the summed coefficients and the product sector is `v1 + v2` reduced
    /// into the box.
    pub fn generator_product(&self, b1: usize, b2: usize) -> Option<(usize, Poly)> {
        let (x, y) = (&self.boxes[b1], &self.boxes[b2]);
        let mut union: Vec<usize> = x.sigma.iter().chain(&y.sigma).copied().collect();
        union.sort_unstable();
        union.dedup();
        if !multifan::is_cone(&self.arrangement, &union) {
            return None;
        }
        let mut factor = Poly::one();
        let mut v3: Vec<Int> = x.v.iter().zip(&y.v).map(|(a, b)| a + b).collect();
        let mut sigma3 = Vec::new();
        for &i in &union {
            let (a1, a2) = (x.alpha(i), y.alpha(i));
            let s = &a1 + &a2;
            let whole = s.floor().to_integer();
            let frac = &s - s.floor();
            let mut dual = Rat::zero();
            if x.sigma.contains(&i) {
                dual += Rat::one() - &a1;
            }
            if y.sigma.contains(&i) {
                dual += Rat::one() - &a2;
            }
            if !frac.is_zero() {
                dual -= Rat::one() - &frac;
                sigma3.push(i);
            }
            let whole_u = u32::try_from(&whole).expect("small exponent");
            let whole_dual = u32::try_from(&dual.to_integer()).expect("small exponent");
            let dual_factor = match self.convention {
                ProductConvention::Relation => Poly::dual_u(i),
                ProductConvention::Example => Poly::u(i),
            };
            factor = factor * Poly::u(i).pow(whole_u) * dual_factor.pow(whole_dual);
            if !whole.is_zero() {
                for (c, b) in v3.iter_mut().zip(self.arrangement.b(i)) {
                    *c -= &whole * b;
                }
            }
        }
        self.arrangement.group_n.reduce(&mut v3);
        let sector = self
            .sector_of(&sigma3, &v3)
            .expect("box sum lands in a box");
        Some((sector, factor))
    }

    /// The Chen-Ruan product of reduced classes.
    pub fn multiply(&self, x: &CRClass, y: &CRClass) -> Result<CRClass> {
        self.check_reduced(x)?;
        self.check_reduced(y)?;
        Ok(self.multiply_unchecked(x, y))
    }

    /// The product without the reducedness check; inputs are reduced first.
    pub fn multiply_unchecked(&self, x: &CRClass, y: &CRClass) -> CRClass {
        let mut out = CRClass::zero();
        for (s1, p1) in x.components() {
            for (s2, p2) in y.components() {
                let (sector, factor) = if s1 == 0 {
                    (s2, Poly::one())
                } else if s2 == 0 {
                    (s1, Poly::one())
                } else {
                    match self.generator_product(s1, s2) {
                        Some(r) => r,
                        None => continue,
                    }
                };
                let prod = p1 * p2 * factor;
                out.add_in_sector(sector, &self.normal_form(sector, &prod));
            }
        }
        out
    }

    /// Ideal generators of the sector module at `λ = 0`: linear relations,
    /// circuit relations, circuits of the sector's flat and annihilated `u_j`.
    pub fn sector_ideal(&self, sector: usize) -> Vec<Poly> {
        let data = &self.sectors[sector];
        let mut gens = linear_relations(&self.arrangement);
        gens.extend(
            self.circuits
                .iter()
                .map(|c| circuit_poly(&c.positive, &c.negative)),
        );
        gens.extend(
            data.circuits
                .iter()
                .map(|c| circuit_poly(&c.positive, &c.negative)),
        );
        gens.extend(data.killed.iter().map(|&j| Poly::u(j)));
        gens
    }

    /// Whether `p` vanishes in the given sector, decided degree by degree by
    /// linear algebra on the homogeneous ideal.
    pub fn vanishes_in_sector(&self, sector: usize, p: &Poly) -> bool {
        let vars: Vec<Var> = (0..self.m()).map(Var::U).chain([Var::Hbar]).collect();
        in_homogeneous_ideal(&p.at_lambda_zero(), &self.sector_ideal(sector), &vars)
    }

    /// Equality modulo the full ideal, sector by sector.
    pub fn equivalent(&self, x: &CRClass, y: &CRClass) -> bool {
        let diff = x.sub(y);
        let ok = diff
            .components()
            .all(|(s, p)| self.vanishes_in_sector(s, p));
        ok
    }

    pub fn ht_presentation(&self) -> RingPresentation {
        let generators = (0..self.m()).map(|i| Var::U(i).to_string()).collect();
        let relations = self
            .circuits
            .iter()
            .map(|c| Relation::Untwisted(Poly::term(Rat::one(), squarefree(&c.support))))
            .collect();
        RingPresentation {
            generators,
            linear: linear_relations(&self.arrangement),
            relations,
        }
    }

    pub fn htt_presentation(&self) -> RingPresentation {
        let mut generators: Vec<String> = (0..self.m()).map(|i| Var::U(i).to_string()).collect();
        generators.push(Var::Hbar.to_string());
        let relations = self
            .circuits
            .iter()
            .map(|c| Relation::Untwisted(circuit_poly(&c.positive, &c.negative)))
            .collect();
        RingPresentation {
            generators,
            linear: linear_relations(&self.arrangement),
            relations,
        }
    }

    pub fn cr_presentation(&self) -> RingPresentation {
        let mut p = self.htt_presentation();
        for s in 1..self.boxes.len() {
            p.generators.push(self.sector_label(s));
        }
        for s in 1..self.boxes.len() {
            let data = &self.sectors[s];
            for &j in &data.killed {
                p.relations.push(Relation::SectorAnnihilator {
                    sector: s,
                    factor: Poly::u(j),
                });
            }
            for (i, q) in &data.substitution {
                p.relations.push(Relation::SectorAnnihilator {
                    sector: s,
                    factor: Poly::u(*i) - q,
                });
            }
        }
        for s1 in 1..self.boxes.len() {
            for s2 in s1..self.boxes.len() {
                let value = match self.generator_product(s1, s2) {
                    Some((s3, f)) => CRClass::in_sector(s3, self.normal_form(s3, &f)),
                    None => CRClass::zero(),
                };
                p.relations.push(Relation::SectorProduct {
                    left: s1,
                    right: s2,
                    value,
                });
            }
        }
        p
    }

    pub fn format_relation(&self, r: &Relation) -> String {
        match r {
            Relation::Untwisted(p) => format!("{p} = 0"),
            Relation::SectorAnnihilator { sector, factor } => {
                format!("{}*({factor}) = 0", self.sector_label(*sector))
            }
            Relation::SectorProduct { left, right, value } => format!(
                "{}*{} = {}",
                self.sector_label(*left),
                self.sector_label(*right),
                self.format_class(value)
            ),
        }
    }
}

impl fmt::Display for RingPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "generators: {}", self.generators.join(", "))?;
        for l in &self.linear {
            writeln!(f, "linear: {l} = 0")?;
        }
        for r in &self.relations {
            match r {
                Relation::Untwisted(p) => writeln!(f, "{p} = 0")?,
                other => writeln!(f, "{other:?}")?,
            }
        }
        Ok(())
    }
}

fn squarefree(indices: &[usize]) -> Monomial {
    Monomial::from_powers(indices.iter().map(|&i| (Var::U(i), 1)).collect())
}

/// `∏_{S+} u_i · ∏_{S−} (ħ − u_j)`.
pub fn circuit_poly(positive: &[usize], negative: &[usize]) -> Poly {
    let mut p = Poly::term(Rat::one(), squarefree(positive));
    for &j in negative {
        p = p * Poly::dual_u(j);
    }
    p
}

/// `Σ_i b̄_i[r] u_i` for each coordinate `r` of `N̄`, dropping zero rows.
pub fn linear_relations(arr: &StackyArrangement) -> Vec<Poly> {
    (0..arr.d())
        .map(|r| {
            let mut p = Poly::zero();
            for i in 0..arr.m() {
                p.add_term(
                    Rat::from_integer(arr.b_bar(i)[r].clone()),
                    Monomial::var(Var::U(i)),
                );
            }
            p
        })
        .filter(|p| !p.is_zero())
        .collect()
}

fn sector_data(arr: &StackyArrangement, sigma: &[usize]) -> Result<SectorData> {
    let mut alive = Vec::new();
    let mut killed = Vec::new();
    for j in (0..arr.m()).filter(|j| !sigma.contains(j)) {
        let mut s = sigma.to_vec();
        s.push(j);
        if multifan::is_cone(arr, &s) {
            alive.push(j);
        } else {
            killed.push(j);
        }
    }
    // u_σ = −P Σ_{alive} b̄_j u_j with P = (BᵀB)⁻¹ Bᵀ the Moore-Penrose left
    // inverse of B = [b̄_i]_{i∈σ}.
    let mut substitution = Vec::new();
    if !sigma.is_empty() {
        let b: Vec<Vec<Rat>> = sigma.iter().map(|&i| arr.b_bar_rat(i)).collect();
        let k = sigma.len();
        let gram: RatMatrix = (0..k)
            .map(|a| (0..k).map(|c| dot(&b[a], &b[c])).collect())
            .collect();
        let gram_inv = rational::inverse(&gram)
            .ok_or_else(|| Error::Shape("sector cone is not independent".into()))?;
        for (a, &i) in sigma.iter().enumerate() {
            let mut q = Poly::zero();
            for &j in &alive {
                let bj = arr.b_bar_rat(j);
                let coeff: Rat = (0..k).map(|c| &gram_inv[a][c] * dot(&b[c], &bj)).sum();
                q.add_term(-coeff, Monomial::var(Var::U(j)));
            }
            substitution.push((i, q));
        }
    }
    let circuits = if sigma.is_empty() {
        Vec::new()
    } else {
        flat_circuits(arr, sigma)?
    };
    Ok(SectorData {
        killed,
        substitution,
        circuits,
    })
}

fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Convenience wrappers mirroring the ring operations.
pub fn ht_presentation(arr: &StackyArrangement) -> Result<RingPresentation> {
    Ok(CrRing::new(arr)?.ht_presentation())
}

pub fn htt_presentation(arr: &StackyArrangement) -> Result<RingPresentation> {
    Ok(CrRing::new(arr)?.htt_presentation())
}

pub fn cr_presentation(arr: &StackyArrangement) -> Result<RingPresentation> {
    Ok(CrRing::new(arr)?.cr_presentation())
}

pub fn cr_multiply(x: &CRClass, y: &CRClass, ring: &CrRing) -> Result<CRClass> {
    ring.multiply(x, y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::rat;

    fn weighted_line() -> CrRing {
        let arr = StackyArrangement::from_small(1, &[&[-2], &[1]], &[1], None).unwrap();
        CrRing::new(&arr).unwrap()
    }

    #[test]
    fn twisted_sector_relations() {
        let ring = weighted_line();
        assert_eq!(ring.boxes.len(), 2);
        let half = CRClass::generator(1);
        for i in 0..2 {
            let x = ring.multiply_unchecked(&half, &CRClass::from_poly(Poly::u(i)));
            assert!(x.is_zero());
        }
        let u1u2 = ring.normal_form(0, &(Poly::u(0) * Poly::u(1)));
        assert!(u1u2.is_zero());
    }

    #[test]
    fn self_inverse_square() {
        let ring = weighted_line();
        let sq = ring
            .multiply(&CRClass::generator(1), &CRClass::generator(1))
            .unwrap();
        assert_eq!(sq, CRClass::from_poly(Poly::u(0) * Poly::dual_u(0)));
        let ex = CrRing::with_convention(&ring.arrangement, ProductConvention::Example).unwrap();
        let sq = ex
            .multiply(&CRClass::generator(1), &CRClass::generator(1))
            .unwrap();
        assert_eq!(sq, CRClass::from_poly(Poly::u(0).pow(2)));
    }

    #[test]
    fn unit_and_unreduced_input() {
        let ring = weighted_line();
        let x = CRClass::from_poly(Poly::u(0) + Poly::hbar());
        assert_eq!(ring.multiply(&CRClass::unit(), &x).unwrap(), x);
        let bad = CRClass::from_poly(Poly::u(0) * Poly::u(1));
        assert!(matches!(
            ring.multiply(&bad, &x),
            Err(Error::UnreducedInput { .. })
        ));
    }

    #[test]
    fn full_ideal_sees_linear_relations() {
        let ring = weighted_line();
        // u2 = 2 u1 at λ = 0, so u1² = u1 u2 / 2 = 0.
        assert!(ring.vanishes_in_sector(0, &Poly::u(0).pow(2)));
        assert!(!ring.vanishes_in_sector(0, &Poly::u(0)));
        assert!(ring.vanishes_in_sector(0, &(Poly::u(1) - Poly::u(0).scale(&rat(2)))));
    }

    #[test]
    fn projective_line_presentation() {
        let arr = StackyArrangement::from_small(1, &[&[-1], &[1]], &[1], None).unwrap();
        let ring = CrRing::new(&arr).unwrap();
        let p = ring.htt_presentation();
        assert_eq!(
            p.relations,
            vec![Relation::Untwisted(Poly::u(0) * Poly::u(1))]
        );
    }
}
