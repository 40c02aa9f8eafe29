use num_traits::{One, Signed, Zero};

use super::IntMatrix;
use crate::Int;

/// Smith normal form `U * A * V = D` with unimodular `U`, `V`.
#[derive(Clone, Debug)]
pub struct Snf {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub rank: usize,
}

impl Snf {
    /// Nonzero diagonal entries `d_1 | d_2 | ... | d_rank`, all positive.
    pub fn invariant_factors(&self) -> Vec<Int> {
        (0..self.rank).map(|i| self.d[(i, i)].clone()).collect()
    }
}

/// Computes the Smith normal form.
///
/// The pivot at each stage is the entry of smallest absolute value in the
/// remaining block, ties broken by row-major position. This fixed order makes
/// `V` (and hence [`kernel_basis`]) deterministic.
pub fn smith_normal_form(a: &IntMatrix) -> Snf {
    let (rows, cols) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let mut rank = 0;

    for t in 0..rows.min(cols) {
        loop {
            let Some((pi, pj)) = smallest_entry(&d, t) else {
                break;
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..rows {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = -(&d[(i, t)] / &d[(t, t)]);
                d.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                clean &= d[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = -(&d[(t, j)] / &d[(t, t)]);
                d.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                clean &= d[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }
            // Divisibility chain: fold an offending row into the pivot row and
            // let the next round shrink the pivot.
            let pivot = d[(t, t)].clone();
            let offending =
                (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(&d[(i, j)] % &pivot).is_zero()));
            match offending {
                Some(i) => {
                    d.add_row_multiple(t, i, &Int::one());
                    u.add_row_multiple(t, i, &Int::one());
                }
                None => break,
            }
        }
        if d[(t, t)].is_zero() {
            break;
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
        rank = t + 1;
    }
    Snf { u, d, v, rank }
}

fn smallest_entry(d: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, Int)> = None;
    for i in t..d.rows() {
        for j in t..d.cols() {
            let x = d[(i, j)].abs();
            if x.is_zero() {
                continue;
            }
            if best.as_ref().is_none_or(|(_, _, b)| x < *b) {
                best = Some((i, j, x));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

/// A basis of the integer kernel `{x : A x = 0}`.
///
/// The vectors are the trailing columns of `V` from the Smith normal form,
/// each scaled by `±1` so that its first nonzero entry is positive.
pub fn kernel_basis(a: &IntMatrix) -> Vec<Vec<Int>> {
    let snf = smith_normal_form(a);
    (snf.rank..a.cols())
        .map(|j| {
            let mut col = snf.v.column(j);
            if col
                .iter()
                .find(|x| !x.is_zero())
                .is_some_and(|x| x.is_negative())
            {
                col.iter_mut().for_each(|x| *x = -std::mem::take(x));
            }
            col
        })
        .collect()
}
