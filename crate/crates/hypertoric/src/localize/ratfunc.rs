//! Rational functions whose denominators are products of linear forms, the
//! only kind that fixed-point localization produces.

use std::fmt;

use num_traits::{One, Zero};

use crate::crring::{Poly, Var};
use crate::Rat;

#[derive(Debug, Clone)]
pub struct RatFunc {
    num: Poly,
    /// Monic linear factors, with repetition.
    den: Vec<Poly>,
}

impl RatFunc {
    pub fn zero() -> Self {
        RatFunc::from_poly(Poly::zero())
    }

    pub fn one() -> Self {
        RatFunc::from_poly(Poly::one())
    }

    pub fn from_poly(num: Poly) -> Self {
        RatFunc {
            num,
            den: Vec::new(),
        }
    }

    pub fn constant(c: Rat) -> Self {
        RatFunc::from_poly(Poly::constant(c))
    }

    /// `num / ∏ factors`; each factor must be a nonzero linear form.
    pub fn new(num: Poly, factors: &[Poly]) -> Option<Self> {
        let mut out = RatFunc::from_poly(num);
        for f in factors {
            out = out.div_linear(f)?;
        }
        Some(out)
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> Poly {
        self.den.iter().fold(Poly::one(), |acc, f| acc * f)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Divides by a linear form, cancelling against the numerator when possible.
    /// Returns `None` for a zero divisor.
    pub fn div_linear(&self, f: &Poly) -> Option<RatFunc> {
        if f.is_zero() {
            return None;
        }
        if f.degree() == Some(0) {
            return Some(self.scale(&f.constant_term().recip()));
        }
        let (c, monic) = f.monic();
        let num = self.num.scale(&c.recip());
        if let Some(q) = num.div_linear(&monic) {
            return Some(RatFunc {
                num: q,
                den: self.den.clone(),
            });
        }
        let mut den = self.den.clone();
        den.push(monic);
        den.sort();
        Some(RatFunc { num, den })
    }

    pub fn scale(&self, c: &Rat) -> RatFunc {
        RatFunc {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn mul_poly(&self, p: &Poly) -> RatFunc {
        RatFunc {
            num: &self.num * p,
            den: self.den.clone(),
        }
        .cancelled()
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        let mut den = self.den.clone();
        den.extend(other.den.iter().cloned());
        den.sort();
        RatFunc {
            num: &self.num * &other.num,
            den,
        }
        .cancelled()
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        let common = multiset_union(&self.den, &other.den);
        let lift = |x: &RatFunc| {
            let extra = multiset_difference(&common, &x.den);
            extra.iter().fold(x.num.clone(), |acc, f| acc * f)
        };
        RatFunc {
            num: lift(self) + lift(other),
            den: common,
        }
        .cancelled()
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        self.add(&other.scale(&-Rat::one()))
    }

    fn cancelled(mut self) -> RatFunc {
        if self.num.is_zero() {
            self.den.clear();
            return self;
        }
        let mut kept = Vec::new();
        for f in std::mem::take(&mut self.den) {
            match self.num.div_linear(&f) {
                Some(q) => self.num = q,
                None => kept.push(f),
            }
        }
        self.den = kept;
        self
    }

    /// The polynomial this function equals, if the denominator cancels.
    pub fn to_poly(&self) -> Option<Poly> {
        self.den.is_empty().then(|| self.num.clone())
    }

    /// Value at a point; `None` when the denominator vanishes there.
    pub fn evaluate(&self, at: &dyn Fn(Var) -> Rat) -> Option<Rat> {
        let d = self.denominator().evaluate(at);
        (!d.is_zero()).then(|| self.num.evaluate(at) / d)
    }
}

impl PartialEq for RatFunc {
    fn eq(&self, other: &Self) -> bool {
        &self.num * &other.denominator() == &other.num * &self.denominator()
    }
}

impl Eq for RatFunc {}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() {
            return write!(f, "{}", self.num);
        }
        let den: Vec<String> = self.den.iter().map(|d| format!("({d})")).collect();
        write!(f, "({})/({})", self.num, den.join("*"))
    }
}

fn multiset_union(a: &[Poly], b: &[Poly]) -> Vec<Poly> {
    let mut out = a.to_vec();
    out.extend(multiset_difference(b, a));
    out.sort();
    out
}

/// Elements of `a` not matched one-for-one in `b`.
fn multiset_difference(a: &[Poly], b: &[Poly]) -> Vec<Poly> {
    let mut rest = b.to_vec();
    let mut out = Vec::new();
    for x in a {
        match rest.iter().position(|y| y == x) {
            Some(i) => {
                rest.remove(i);
            }
            None => out.push(x.clone()),
        }
    }
    out
}
