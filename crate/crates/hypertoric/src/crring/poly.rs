//! Sparse multivariate polynomials over `Q` in `u_i`, `ħ` and `λ_i`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::{Int, Rat};

/// Indices are 0-based; `Display` prints them 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    U(usize),
    Hbar,
    Lambda(usize),
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::U(i) => write!(f, "u{}", i + 1),
            Var::Hbar => write!(f, "hbar"),
            Var::Lambda(i) => write!(f, "lambda{}", i + 1),
        }
    }
}

/// Sorted list of `(variable, exponent)` with positive exponents.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn from_powers(mut powers: Vec<(Var, u32)>) -> Self {
        powers.retain(|(_, e)| *e > 0);
        powers.sort();
        let mut out: Vec<(Var, u32)> = Vec::with_capacity(powers.len());
        for (v, e) in powers {
            match out.last_mut() {
                Some((w, f)) if *w == v => *f += e,
                _ => out.push((v, e)),
            }
        }
        Monomial(out)
    }

    pub fn powers(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.0.iter().find(|(w, _)| *w == v).map_or(0, |(_, e)| *e)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let (a, b) = (self.0[i], other.0[j]);
            match a.0.cmp(&b.0) {
                std::cmp::Ordering::Less => {
                    out.push(a);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a.0, a.1 + b.1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().all(|&(v, e)| other.exponent(v) >= e)
    }

    pub fn contains(&self, v: Var) -> bool {
        self.exponent(v) > 0
    }

    /// All monomials of total degree `deg` in `vars`.
    pub fn all_of_degree(vars: &[Var], deg: u32) -> Vec<Monomial> {
        fn rec(vars: &[Var], deg: u32, cur: &mut Vec<(Var, u32)>, out: &mut Vec<Monomial>) {
            let Some((&first, rest)) = vars.split_first() else {
                if deg == 0 {
                    out.push(Monomial::from_powers(cur.clone()));
                }
                return;
            };
            for e in (0..=deg).rev() {
                cur.push((first, e));
                rec(rest, deg - e, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(vars, deg, &mut Vec::new(), &mut out);
        out
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (k, (v, e)) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rat>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Poly::term(c, Monomial::one())
    }

    pub fn int(c: i64) -> Self {
        Poly::constant(Rat::from_integer(Int::from(c)))
    }

    pub fn term(c: Rat, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn var(v: Var) -> Self {
        Poly::term(Rat::one(), Monomial::var(v))
    }

    pub fn u(i: usize) -> Self {
        Poly::var(Var::U(i))
    }

    pub fn hbar() -> Self {
        Poly::var(Var::Hbar)
    }

    pub fn lambda(i: usize) -> Self {
        Poly::var(Var::Lambda(i))
    }

    /// `ħ − u_i`.
    pub fn dual_u(i: usize) -> Self {
        Poly::hbar() - Poly::u(i)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    /// The constant term.
    pub fn constant_term(&self) -> Rat {
        self.coefficient(&Monomial::one())
    }

    pub fn add_term(&mut self, c: Rat, m: Monomial) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, c: &Rat, mono: &Monomial) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, x)| (m.mul(mono), x * c))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut out = Poly::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Maximum total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    /// Homogeneous components by degree.
    pub fn homogeneous_parts(&self) -> BTreeMap<u32, Poly> {
        let mut out: BTreeMap<u32, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.degree())
                .or_default()
                .add_term(c.clone(), m.clone());
        }
        out
    }

    pub fn variables(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self
            .terms
            .keys()
            .flat_map(|m| m.0.iter().map(|(v, _)| *v))
            .collect();
        vs.sort();
        vs.dedup();
        vs
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.terms.keys().any(|m| m.contains(v))
    }

    /// Replaces every variable by `f(var)`, leaving it alone when `f` returns `None`.
    pub fn substitute(&self, f: &dyn Fn(Var) -> Option<Poly>) -> Poly {
        let mut cache: BTreeMap<(Var, u32), Poly> = BTreeMap::new();
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut acc = Poly::constant(c.clone());
            let mut kept = Vec::new();
            for &(v, e) in &m.0 {
                match f(v) {
                    Some(p) => {
                        let pe = cache.entry((v, e)).or_insert_with(|| p.pow(e)).clone();
                        acc = &acc * &pe;
                    }
                    None => kept.push((v, e)),
                }
                if acc.is_zero() {
                    break;
                }
            }
            if !acc.is_zero() {
                out = &out + &acc.mul_monomial(&Rat::one(), &Monomial(kept));
            }
        }
        out
    }

    /// Sets every `λ_i` to zero.
    pub fn at_lambda_zero(&self) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| !m.0.iter().any(|(v, _)| matches!(v, Var::Lambda(_))))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Evaluates at rational values; variables mapped to `None` must not occur.
    pub fn evaluate(&self, f: &dyn Fn(Var) -> Rat) -> Rat {
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut x = c.clone();
                for &(v, e) in &m.0 {
                    x *= num_traits::pow(f(v), e as usize);
                }
                x
            })
            .sum()
    }

    /// Keeps the terms whose monomial satisfies `keep`.
    pub fn filter_terms(&self, keep: impl Fn(&Monomial) -> bool) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Exact division by the linear form `divisor`; `None` if it does not divide.
    pub fn div_linear(&self, divisor: &Poly) -> Option<Poly> {
        divide_exact(self, divisor)
    }

    /// Leading term in the (reverse) monomial order of the map.
    pub fn leading(&self) -> Option<(&Monomial, &Rat)> {
        self.terms.iter().next_back()
    }

    /// Splits off the leading coefficient: `self = c * monic`.
    pub fn monic(&self) -> (Rat, Poly) {
        match self.leading() {
            None => (Rat::one(), Poly::zero()),
            Some((_, c)) => {
                let c = c.clone();
                (c.clone(), self.scale(&c.recip()))
            }
        }
    }
}

/// Multivariate exact division by repeated leading-term elimination in the
/// graded lex order on the variables present.
fn divide_exact(num: &Poly, den: &Poly) -> Option<Poly> {
    if den.is_zero() {
        return None;
    }
    let mut vars = num.variables();
    vars.extend(den.variables());
    vars.sort();
    vars.dedup();
    let key = |m: &Monomial| {
        (
            m.degree(),
            vars.iter().map(|&v| m.exponent(v)).collect::<Vec<_>>(),
        )
    };
    let leading = |p: &Poly| {
        p.terms
            .iter()
            .max_by_key(|(m, _)| key(m))
            .map(|(m, c)| (m.clone(), c.clone()))
    };
    let (lm, lc) = leading(den)?;
    let mut rem = num.clone();
    let mut quot = Poly::zero();
    while let Some((m, c)) = leading(&rem) {
        let q = monomial_quotient(&m, &lm)?;
        let coeff = &c / &lc;
        quot.add_term(coeff.clone(), q.clone());
        rem = &rem - &den.mul_monomial(&coeff, &q);
    }
    Some(quot)
}

fn monomial_quotient(a: &Monomial, b: &Monomial) -> Option<Monomial> {
    if !b.divides(a) {
        return None;
    }
    let powers = a.0.iter().map(|&(v, e)| (v, e - b.exponent(v))).collect();
    Some(Monomial::from_powers(powers))
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // Highest degree first, then by monomial.
        let mut items: Vec<(&Monomial, &Rat)> = self.terms.iter().collect();
        items.sort_by(|a, b| b.0.degree().cmp(&a.0.degree()).then_with(|| a.0.cmp(b.0)));
        for (k, (m, c)) in items.into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let is_one = m.0.is_empty();
            if abs.is_one() && !is_one {
                write!(f, "{m}")?;
            } else if is_one {
                write!(f, "{abs}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(c.clone(), m.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(-c.clone(), m.clone());
        }
        out
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(c1 * c2, m1.mul(m2));
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-Rat::one())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $f(self, rhs: Poly) -> Poly {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $f(self, rhs: &Poly) -> Poly {
                (&self).$f(rhs)
            }
        }
        impl $tr<Poly> for &Poly {
            type Output = Poly;
            fn $f(self, rhs: Poly) -> Poly {
                self.$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::rat;

    #[test]
    fn arithmetic_and_display() {
        let p = Poly::u(0) * Poly::dual_u(1);
        assert_eq!(p.to_string(), "-u1*u2 + u1*hbar");
        assert_eq!((&p - &p), Poly::zero());
        let sq = (Poly::hbar() - Poly::u(0) - Poly::u(1)).pow(2);
        assert_eq!(sq.len(), 6);
        assert!(sq.is_homogeneous());
    }

    #[test]
    fn substitution_and_division() {
        let p = Poly::u(0) * Poly::u(0) - Poly::u(1) * Poly::u(1);
        let q = p.substitute(&|v| (v == Var::U(1)).then(|| Poly::int(2) * Poly::u(0)));
        assert_eq!(q, Poly::u(0).pow(2).scale(&rat(-3)));
        let f = Poly::u(0) - Poly::u(1);
        assert_eq!(p.div_linear(&f), Some(Poly::u(0) + Poly::u(1)));
        assert_eq!(Poly::u(0).div_linear(&f), None);
    }

    #[test]
    fn monomials_of_degree() {
        let ms = Monomial::all_of_degree(&[Var::U(0), Var::U(1), Var::Hbar], 2);
        assert_eq!(ms.len(), 6);
    }
}
