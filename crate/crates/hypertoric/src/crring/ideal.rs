//! Membership in a homogeneous ideal by linear algebra in each degree.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::poly::{Monomial, Poly, Var};
use crate::exactalg::rational::rref;
use crate::Rat;

/// Whether `p` lies in the ideal generated by `generators`, all variables in
/// `vars` having degree 1. Generators must be homogeneous; `p` is split into
/// homogeneous parts and each is tested against the span of `monomial · g`.
pub fn in_homogeneous_ideal(p: &Poly, generators: &[Poly], vars: &[Var]) -> bool {
    p.homogeneous_parts()
        .into_iter()
        .all(|(deg, part)| part.is_zero() || in_degree(&part, deg, generators, vars))
}

fn in_degree(part: &Poly, deg: u32, generators: &[Poly], vars: &[Var]) -> bool {
    let mut rows: Vec<Poly> = Vec::new();
    for g in generators {
        let Some(gd) = g.degree() else { continue };
        debug_assert!(g.is_homogeneous());
        if gd > deg {
            continue;
        }
        for m in Monomial::all_of_degree(vars, deg - gd) {
            rows.push(g.mul_monomial(&Rat::from_integer(1.into()), &m));
        }
    }
    let mut index: BTreeMap<Monomial, usize> = BTreeMap::new();
    for r in rows.iter().chain(std::iter::once(part)) {
        for (m, _) in r.terms() {
            let n = index.len();
            index.entry(m.clone()).or_insert(n);
        }
    }
    let dense = |q: &Poly| {
        let mut v = vec![Rat::zero(); index.len()];
        for (m, c) in q.terms() {
            v[index[m]] = c.clone();
        }
        v
    };
    let mut span: Vec<Vec<Rat>> = rows.iter().map(dense).collect();
    let before = rref(&mut span.clone()).len();
    span.push(dense(part));
    rref(&mut span).len() == before
}
