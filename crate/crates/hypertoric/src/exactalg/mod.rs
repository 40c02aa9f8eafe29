//! Exact integer linear algebra: Smith normal form, kernels, finitely
//! generated abelian groups and Gale duality.

mod matrix;
pub mod rational;
mod snf;

use num_integer::Integer;
use num_traits::{One, Zero};

pub use matrix::IntMatrix;
pub use snf::{kernel_basis, smith_normal_form, Snf};

use crate::{Error, Int, Result};

/// `Z^rank ⊕ Z/d_1 ⊕ ... ⊕ Z/d_k` with `d_1 | d_2 | ...`, each `d_i >= 2`.
///
/// Elements are written in coordinates: `rank` free entries followed by one
/// entry per torsion factor, the latter reduced into `0..d_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FgAbelianGroup {
    pub rank: usize,
    pub torsion: Vec<Int>,
}

impl FgAbelianGroup {
    pub fn free(rank: usize) -> Self {
        FgAbelianGroup {
            rank,
            torsion: Vec::new(),
        }
    }

    /// Validates the invariant-factor chain.
    pub fn new(rank: usize, torsion: Vec<Int>) -> Result<Self> {
        for (i, t) in torsion.iter().enumerate() {
            if *t < Int::from(2) {
                return Err(Error::Shape(format!(
                    "torsion[{i}] = {t} must be at least 2"
                )));
            }
            if i > 0 && !(t % &torsion[i - 1]).is_zero() {
                return Err(Error::Shape(format!(
                    "torsion[{i}] = {t} is not a multiple of torsion[{}]",
                    i - 1
                )));
            }
        }
        Ok(FgAbelianGroup { rank, torsion })
    }

    pub fn coordinate_count(&self) -> usize {
        self.rank + self.torsion.len()
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    /// Reduces torsion coordinates into their canonical range.
    pub fn reduce(&self, v: &mut [Int]) {
        for (k, t) in self.torsion.iter().enumerate() {
            v[self.rank + k] = v[self.rank + k].mod_floor(t);
        }
    }

    pub fn is_zero_element(&self, v: &[Int]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(Zero::is_zero)
    }

    /// All torsion elements, in lexicographic order.
    pub fn torsion_elements(&self) -> Vec<Vec<Int>> {
        let mut out = vec![vec![Int::zero(); self.coordinate_count()]];
        for (k, t) in self.torsion.iter().enumerate() {
            let mut next = Vec::new();
            for base in &out {
                let mut c = Int::zero();
                while &c < t {
                    let mut e = base.clone();
                    e[self.rank + k] = c.clone();
                    next.push(e);
                    c += 1;
                }
            }
            out = next;
        }
        out
    }
}

/// A homomorphism `Z^m -> G` (sources are always free here) written as a
/// matrix whose columns are the images of the standard basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupHom {
    pub source_rank: usize,
    pub target: FgAbelianGroup,
    pub matrix: IntMatrix,
}

impl GroupHom {
    pub fn new(target: FgAbelianGroup, columns: &[Vec<Int>]) -> Result<Self> {
        for (j, c) in columns.iter().enumerate() {
            if c.len() != target.coordinate_count() {
                return Err(Error::Shape(format!(
                    "column {j} has {} entries, expected {}",
                    c.len(),
                    target.coordinate_count()
                )));
            }
        }
        let mut cols: Vec<Vec<Int>> = columns.to_vec();
        for c in cols.iter_mut() {
            target.reduce(c);
        }
        let matrix = IntMatrix::from_columns(&cols, target.coordinate_count());
        Ok(GroupHom {
            source_rank: columns.len(),
            target,
            matrix,
        })
    }

    pub fn column(&self, j: usize) -> Vec<Int> {
        self.matrix.column(j)
    }

    /// Free part of column `j`.
    pub fn free_column(&self, j: usize) -> Vec<Int> {
        self.matrix.column(j)[..self.target.rank].to_vec()
    }

    /// The matrix of the free part `Z^m -> Z^rank`.
    pub fn free_matrix(&self) -> IntMatrix {
        let rows: Vec<usize> = (0..self.target.rank).collect();
        self.matrix.select_rows(&rows)
    }

    pub fn apply(&self, x: &[Int]) -> Vec<Int> {
        let mut y = self.matrix.mul_vec(x);
        self.target.reduce(&mut y);
        y
    }
}

/// Output of [`gale_dual_data`]: the dual map together with the kernel basis
/// of `beta` that realizes `DG(beta)^*` inside `Z^m`.
#[derive(Debug, Clone)]
pub struct GaleDual {
    pub dual: GroupHom,
    /// Basis of `{x in Z^m : beta(x) = 0}`; the free rows of `dual` are these
    /// vectors read as rows.
    pub kernel: Vec<Vec<Int>>,
}

/// Gale dual `beta^∨ : Z^m -> DG(beta)`.
pub fn gale_dual(beta: &GroupHom) -> Result<GroupHom> {
    gale_dual_data(beta).map(|g| g.dual)
}

/// Gale dual via the free resolution `Z^k --Q--> Z^(d+k) -> N`.
///
/// With `M = [B | Q]`, `DG(beta) = coker(M^T)`. Free coordinates come from the
/// kernel basis of `M` restricted to the first `m` entries, torsion
/// coordinates from the rows of `U` in the Smith form of `M^T` whose invariant
/// factor exceeds one.
pub fn gale_dual_data(beta: &GroupHom) -> Result<GaleDual> {
    let n = &beta.target;
    let (d, k, m) = (n.rank, n.torsion.len(), beta.source_rank);
    for j in 0..m {
        if beta.free_column(j).iter().all(Zero::is_zero) {
            return Err(Error::TorsionColumn { index: j });
        }
    }
    let free_rank = smith_normal_form(&beta.free_matrix()).rank;
    if free_rank < d {
        return Err(Error::InfiniteCokernel {
            rank: free_rank,
            expected: d,
        });
    }

    let resolved = IntMatrix::from_fn(d + k, m + k, |i, j| {
        if j < m {
            beta.matrix[(i, j)].clone()
        } else if i >= d && i - d == j - m {
            n.torsion[i - d].clone()
        } else {
            Int::zero()
        }
    });
    let full_kernel = kernel_basis(&resolved);
    let kernel: Vec<Vec<Int>> = full_kernel.iter().map(|v| v[..m].to_vec()).collect();

    let snf = smith_normal_form(&resolved.transpose());
    let mut torsion = Vec::new();
    let mut torsion_rows = Vec::new();
    for i in 0..snf.rank {
        let di = snf.d[(i, i)].clone();
        if di > Int::one() {
            torsion.push(di);
            torsion_rows.push(snf.u.row(i));
        }
    }
    let target = FgAbelianGroup {
        rank: kernel.len(),
        torsion,
    };
    let columns: Vec<Vec<Int>> = (0..m)
        .map(|j| {
            kernel
                .iter()
                .map(|kv| kv[j].clone())
                .chain(torsion_rows.iter().map(|r| r[j].clone()))
                .collect()
        })
        .collect();
    let dual = GroupHom::new(target, &columns)?;
    Ok(GaleDual { dual, kernel })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&x| Int::from(x)).collect()
    }

    fn hom(rank: usize, cols: &[&[i64]]) -> GroupHom {
        let cols: Vec<Vec<Int>> = cols.iter().map(|c| ints(c)).collect();
        GroupHom::new(FgAbelianGroup::free(rank), &cols).unwrap()
    }

    #[test]
    fn weighted_line_dual() {
        let g = gale_dual(&hom(1, &[&[-2], &[1]])).unwrap();
        assert_eq!(g.matrix, IntMatrix::from_rows(&[vec![1, 2]]));
        assert_eq!(g.target, FgAbelianGroup::free(1));
    }

    #[test]
    fn identity_has_trivial_dual() {
        let g = gale_dual(&hom(2, &[&[1, 0], &[0, 1]])).unwrap();
        assert_eq!(g.target, FgAbelianGroup::free(0));
        assert_eq!(g.matrix.rows(), 0);
    }

    #[test]
    fn hirzebruch_dual_is_exact() {
        let beta = hom(2, &[&[1, 0], &[0, -1], &[0, 1], &[-1, -1]]);
        let g = gale_dual_data(&beta).unwrap();
        assert_eq!(g.dual.target, FgAbelianGroup::free(2));
        // beta^∨ composed with the kernel inclusion is the identity pairing and
        // beta composed with the kernel vectors vanishes.
        for v in &g.kernel {
            assert!(beta.apply(v).iter().all(Zero::is_zero));
        }
        // Exactness of 0 -> N* -> Z^m -> DG: rows of beta lie in ker(beta^∨).
        let composite = g.dual.matrix.mul(&beta.matrix.transpose());
        assert!(composite.is_zero());
        // beta^∨ is onto: its 2x2 minors have gcd 1.
        let a = &g.dual.matrix;
        let mut gcd = Int::zero();
        for i in 0..4 {
            for j in i + 1..4 {
                gcd = gcd.gcd(&a.select_columns(&[i, j]).det());
            }
        }
        assert!(gcd.is_one());
    }

    #[test]
    fn errors_are_reported() {
        assert_eq!(
            gale_dual(&hom(2, &[&[1, 0], &[2, 0]])),
            Err(Error::InfiniteCokernel {
                rank: 1,
                expected: 2
            })
        );
        assert_eq!(
            gale_dual(&hom(1, &[&[1], &[0]])),
            Err(Error::TorsionColumn { index: 1 })
        );
    }

    #[test]
    fn torsion_in_the_resolution_dualizes() {
        // N = Z ⊕ Z/2, b_1 = (1, 1), b_2 = (1, 0): ker beta is generated by (2, -2)
        // and coker beta = 0, so DG(beta) is free of rank one.
        let n = FgAbelianGroup::new(1, vec![Int::from(2)]).unwrap();
        let beta = GroupHom::new(n, &[ints(&[1, 1]), ints(&[1, 0])]).unwrap();
        let g = gale_dual_data(&beta).unwrap();
        assert_eq!(g.kernel, vec![ints(&[2, -2])]);
        assert_eq!(g.dual.target, FgAbelianGroup::free(1));
    }

    #[test]
    fn finite_cokernel_gives_torsion_dual() {
        // beta = (2, 2): coker beta = Z/2, so DG(beta) = Z ⊕ Z/2.
        let g = gale_dual_data(&hom(1, &[&[2], &[2]])).unwrap();
        assert_eq!(g.kernel, vec![ints(&[1, -1])]);
        assert_eq!(g.dual.target.torsion, vec![Int::from(2)]);
        assert_eq!(g.dual.target.rank, 1);
    }
}
