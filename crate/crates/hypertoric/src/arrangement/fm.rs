//! Exact Fourier-Motzkin feasibility for mixed strict/non-strict systems.

use std::collections::HashMap;

use num_traits::{Signed, Zero};

use crate::Rat;

/// `coeffs · x + constant > 0` (strict) or `>= 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ineq {
    pub coeffs: Vec<Rat>,
    pub constant: Rat,
    pub strict: bool,
}

impl Ineq {
    pub fn new(coeffs: Vec<Rat>, constant: Rat, strict: bool) -> Self {
        Ineq {
            coeffs,
            constant,
            strict,
        }
    }

    pub fn holds_at(&self, x: &[Rat]) -> bool {
        let v: Rat = self.coeffs.iter().zip(x).map(|(a, b)| a * b).sum::<Rat>() + &self.constant;
        if self.strict {
            v.is_positive()
        } else {
            !v.is_negative()
        }
    }

    /// Positive rescaling so that the first nonzero coefficient is `±1`.
    fn normalized(mut self) -> Self {
        let lead = self.coeffs.iter().find(|c| !c.is_zero()).map(|c| c.abs());
        if let Some(s) = lead {
            for c in self.coeffs.iter_mut() {
                *c /= &s;
            }
            self.constant /= &s;
        }
        self
    }
}

/// Decides whether the system has a rational (equivalently real) solution.
pub fn feasible(system: &[Ineq], nvars: usize) -> bool {
    let mut current: Vec<Ineq> = system.iter().cloned().map(Ineq::normalized).collect();
    for var in (0..nvars).rev() {
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        let mut rest = Vec::new();
        for q in current {
            if q.coeffs[var].is_positive() {
                pos.push(q);
            } else if q.coeffs[var].is_negative() {
                neg.push(q);
            } else {
                rest.push(q);
            }
        }
        for p in &pos {
            for n in &neg {
                let a = &p.coeffs[var];
                let b = -&n.coeffs[var];
                let coeffs: Vec<Rat> = p
                    .coeffs
                    .iter()
                    .zip(&n.coeffs)
                    .map(|(x, y)| x / a + y / &b)
                    .collect();
                let constant = &p.constant / a + &n.constant / &b;
                rest.push(Ineq::new(coeffs, constant, p.strict || n.strict).normalized());
            }
        }
        current = dedupe(rest);
        if current.iter().any(trivially_false) {
            return false;
        }
    }
    !current.iter().any(trivially_false)
}

fn trivially_false(q: &Ineq) -> bool {
    q.coeffs.iter().all(Zero::is_zero)
        && (q.constant.is_negative() || (q.strict && q.constant.is_zero()))
}

/// Drops duplicates and tautologies; when a constraint occurs both strict and
/// non-strict only the strict copy is kept.
fn dedupe(system: Vec<Ineq>) -> Vec<Ineq> {
    let mut seen: HashMap<(Vec<Rat>, Rat), bool> = HashMap::new();
    let mut order = Vec::new();
    for q in system {
        if q.coeffs.iter().all(Zero::is_zero) && !trivially_false(&q) {
            continue;
        }
        let key = (q.coeffs, q.constant);
        match seen.get_mut(&key) {
            Some(strict) => *strict |= q.strict,
            None => {
                seen.insert(key.clone(), q.strict);
                order.push(key);
            }
        }
    }
    order
        .into_iter()
        .map(|key| {
            let strict = seen[&key];
            Ineq::new(key.0, key.1, strict)
        })
        .collect()
}
