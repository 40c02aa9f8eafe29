//! Dense linear algebra over the rationals.

use num_traits::{One, Zero};

use crate::{Int, Rat};

pub type RatMatrix = Vec<Vec<Rat>>;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(Int::from(n))
}

pub fn to_rat_vec(v: &[Int]) -> Vec<Rat> {
    v.iter().map(|x| Rat::from_integer(x.clone())).collect()
}

/// Reduced row echelon form; returns the pivot columns.
pub fn rref(m: &mut RatMatrix) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let delta = &f * &m[r][j];
                    m[i][j] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &RatMatrix) -> usize {
    let mut w = m.clone();
    rref(&mut w).len()
}

/// Rank of the vectors listed as columns.
pub fn column_rank(columns: &[Vec<Rat>]) -> usize {
    if columns.is_empty() {
        return 0;
    }
    let rows = columns[0].len();
    let m: RatMatrix = (0..rows)
        .map(|i| columns.iter().map(|c| c[i].clone()).collect())
        .collect();
    rank(&m)
}

/// Some solution of `A x = b`, free variables set to zero; `None` if the
/// system is inconsistent.
pub fn solve(a: &RatMatrix, b: &[Rat]) -> Option<Vec<Rat>> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut aug: RatMatrix = (0..rows)
        .map(|i| {
            let mut r = a[i].clone();
            r.push(b[i].clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![Rat::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[r][cols].clone();
    }
    Some(x)
}

/// Basis of `{x : A x = 0}` over the rationals (one vector per free column).
pub fn nullspace(a: &RatMatrix, cols: usize) -> Vec<Vec<Rat>> {
    let mut w = a.clone();
    let pivots = rref(&mut w);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![Rat::zero(); cols];
            x[f] = Rat::one();
            for (r, &p) in pivots.iter().enumerate() {
                x[p] = -w[r][f].clone();
            }
            x
        })
        .collect()
}

pub fn inverse(a: &RatMatrix) -> Option<RatMatrix> {
    let n = a.len();
    let mut aug: RatMatrix = (0..n)
        .map(|i| {
            let mut r = a[i].clone();
            r.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn mat_vec(a: &RatMatrix, x: &[Rat]) -> Vec<Rat> {
    a.iter()
        .map(|row| row.iter().zip(x).map(|(p, q)| p * q).sum())
        .collect()
}

/// Scales a rational vector to the primitive integer vector on the same ray.
pub fn primitive_integer(v: &[Rat]) -> Vec<Int> {
    use num_integer::Integer;
    let mut l = Int::one();
    for x in v {
        l = l.lcm(x.denom());
    }
    let ints: Vec<Int> = v
        .iter()
        .map(|x| (x * Rat::from_integer(l.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(Int::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> RatMatrix {
        rows.iter()
            .map(|r| r.iter().map(|&x| rat(x)).collect())
            .collect()
    }

    #[test]
    fn solve_and_nullspace() {
        let a = m(&[&[1, 1, 0], &[0, 1, 1]]);
        let x = solve(&a, &[rat(2), rat(3)]).unwrap();
        assert_eq!(mat_vec(&a, &x), vec![rat(2), rat(3)]);
        let ns = nullspace(&a, 3);
        assert_eq!(ns.len(), 1);
        assert!(mat_vec(&a, &ns[0]).iter().all(Zero::is_zero));
        assert!(solve(&m(&[&[1, 1], &[1, 1]]), &[rat(0), rat(1)]).is_none());
    }

    #[test]
    fn inverse_round_trip() {
        let a = m(&[&[2, 1], &[1, 1]]);
        let inv = inverse(&a).unwrap();
        assert_eq!(inv, m(&[&[1, -1], &[-1, 2]]));
        assert!(inverse(&m(&[&[1, 2], &[2, 4]])).is_none());
    }

    #[test]
    fn primitive_scaling() {
        let v = vec![Rat::new(Int::from(1), Int::from(2)), rat(-3)];
        assert_eq!(primitive_integer(&v), vec![Int::from(1), Int::from(-6)]);
    }
}
