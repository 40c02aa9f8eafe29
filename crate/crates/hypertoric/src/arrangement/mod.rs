//! Stacky hyperplane arrangements `(N, beta, theta)`: genericity, the lifting
//! `psi`, the cooriented hyperplanes, bounded chambers and the core.

pub mod fm;

use num_traits::{One, Zero};

use crate::exactalg::rational::{self, rat, to_rat_vec, RatMatrix};
use crate::exactalg::{
    gale_dual_data, smith_normal_form, FgAbelianGroup, GaleDual, GroupHom, IntMatrix,
};
use crate::parallel::{map_collect, Strategy};
use crate::{Error, Int, Rat, Result};
use fm::{feasible, Ineq};

pub const MAX_DIMENSION: usize = 6;
pub const MAX_HYPERPLANES: usize = 16;

/// The arrangement data together with its Gale dual and a lifting `psi`.
#[derive(Debug, Clone)]
pub struct StackyArrangement {
    pub group_n: FgAbelianGroup,
    pub beta: GroupHom,
    pub gale: GaleDual,
    /// Coordinates in `DG(beta)`: free part first, then torsion.
    pub theta: Vec<Int>,
    pub psi: Vec<Int>,
    /// `true` when `psi` came from the input rather than [`lift_theta`].
    pub psi_supplied: bool,
}

impl StackyArrangement {
    /// Validates the data and computes the Gale dual. A supplied `psi` is
    /// checked against `theta = -beta^∨ psi`; otherwise one is computed.
    pub fn new(
        group_n: FgAbelianGroup,
        columns: &[Vec<Int>],
        theta: Vec<Int>,
        psi: Option<Vec<Int>>,
    ) -> Result<Self> {
        let beta = GroupHom::new(group_n.clone(), columns)?;
        let gale = gale_dual_data(&beta)?;
        let dg = &gale.dual.target;
        if theta.len() != dg.coordinate_count() {
            return Err(Error::Shape(format!(
                "theta has {} entries, DG(beta) has {} coordinates",
                theta.len(),
                dg.coordinate_count()
            )));
        }
        let mut theta = theta;
        dg.reduce(&mut theta);
        let (psi, psi_supplied) = match psi {
            Some(p) => {
                if p.len() != columns.len() {
                    return Err(Error::Shape(format!(
                        "psi has {} entries, expected {}",
                        p.len(),
                        columns.len()
                    )));
                }
                let expected = negated(&gale.dual.apply(&p));
                if expected != theta {
                    return Err(Error::PsiMismatch {
                        expected: theta.iter().map(|x| x.to_string()).collect(),
                        found: expected.iter().map(|x| x.to_string()).collect(),
                    });
                }
                (p, true)
            }
            None => (lift_theta(&gale.dual, &theta)?, false),
        };
        if !check_generic(&gale.dual, &theta) {
            return Err(Error::NonGeneric);
        }
        Ok(StackyArrangement {
            group_n,
            beta,
            gale,
            theta,
            psi,
            psi_supplied,
        })
    }

    /// Convenience constructor for free `N = Z^d` with small entries.
    pub fn from_small(
        d: usize,
        columns: &[&[i64]],
        theta: &[i64],
        psi: Option<&[i64]>,
    ) -> Result<Self> {
        let cols: Vec<Vec<Int>> = columns
            .iter()
            .map(|c| c.iter().map(|&x| Int::from(x)).collect())
            .collect();
        let theta = theta.iter().map(|&x| Int::from(x)).collect();
        let psi = psi.map(|p| p.iter().map(|&x| Int::from(x)).collect());
        Self::new(FgAbelianGroup::free(d), &cols, theta, psi)
    }

    /// Number of hyperplanes `m`.
    pub fn m(&self) -> usize {
        self.beta.source_rank
    }

    /// Rank `d` of `N`.
    pub fn d(&self) -> usize {
        self.group_n.rank
    }

    /// Free rank of `DG(beta)`, i.e. `m - d`.
    pub fn dual_rank(&self) -> usize {
        self.gale.dual.target.rank
    }

    /// The image `b̄_i` of `b_i` in `N / N_tor`.
    pub fn b_bar(&self, i: usize) -> Vec<Int> {
        self.beta.free_column(i)
    }

    pub fn b_bar_rat(&self, i: usize) -> Vec<Rat> {
        to_rat_vec(&self.b_bar(i))
    }

    /// Full column `b_i` including torsion coordinates.
    pub fn b(&self, i: usize) -> Vec<Int> {
        self.beta.column(i)
    }

    pub fn a_bar(&self, i: usize) -> Vec<Int> {
        self.gale.dual.free_column(i)
    }

    pub fn theta_bar(&self) -> Vec<Int> {
        self.theta[..self.dual_rank()].to_vec()
    }

    /// Integer basis of `ker beta`, the lattice `DG(beta)^*`.
    pub fn kernel_basis(&self) -> &[Vec<Int>] {
        &self.gale.kernel
    }

    pub fn hyperplanes(&self) -> Vec<Hyperplane> {
        (0..self.m())
            .map(|i| Hyperplane {
                index: i,
                normal: self.b_bar(i),
                offset: self.psi[i].clone(),
            })
            .collect()
    }

    /// `<b_i, v> + r_i` as an affine form in `v ∈ M_R`.
    fn affine(&self, i: usize) -> (Vec<Rat>, Rat) {
        (self.b_bar_rat(i), Rat::from_integer(self.psi[i].clone()))
    }

    /// Half-space `s (<b_i, v> + r_i) >= 0` (or `> 0`).
    pub(crate) fn half_space(&self, i: usize, sign: i8, strict: bool) -> Ineq {
        let (mut c, mut k) = self.affine(i);
        if sign < 0 {
            c.iter_mut().for_each(|x| *x = -x.clone());
            k = -k;
        }
        Ineq::new(c, k, strict)
    }

    pub(crate) fn check_size(&self) -> Result<()> {
        if self.d() > MAX_DIMENSION || self.m() > MAX_HYPERPLANES {
            return Err(Error::DimensionTooLarge {
                d: self.d(),
                m: self.m(),
            });
        }
        Ok(())
    }
}

fn negated(v: &[Int]) -> Vec<Int> {
    v.iter().map(|x| -x).collect()
}

/// Cooriented hyperplane `H_i = {<b_i, v> + r_i = 0}` with positive side
/// `F_i = {<b_i, v> + r_i >= 0}` and negative side `G_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hyperplane {
    pub index: usize,
    pub normal: Vec<Int>,
    pub offset: Int,
}

/// The polytope `P_U`: `F_i` for `i ∈ U`, `G_i` otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chamber {
    pub flips: Vec<usize>,
    /// `+1` for `i ∈ U`, `-1` otherwise.
    pub signs: Vec<i8>,
    pub facet_normals: Vec<Ineq>,
    pub bounded: bool,
}

/// Whether `theta` avoids every hyperplane spanned by the `ā_i`.
///
/// Equivalent formulation used here: in every basis of `DG(beta) ⊗ Q` chosen
/// among the `ā_i`, all coordinates of `θ̄` are nonzero. When `DG(beta)` has
/// rank zero there are no walls and the answer is `true`.
pub fn check_generic(beta_dual: &GroupHom, theta: &[Int]) -> bool {
    let r = beta_dual.target.rank;
    if r == 0 {
        return true;
    }
    let theta_bar = to_rat_vec(&theta[..r]);
    if theta_bar.iter().all(Zero::is_zero) {
        return false;
    }
    let m = beta_dual.source_rank;
    let cols: Vec<Vec<Rat>> = (0..m)
        .map(|j| to_rat_vec(&beta_dual.free_column(j)))
        .collect();
    subsets(m, r)
        .into_iter()
        .all(|c| match basis_coordinates(&cols, &c, &theta_bar) {
            Some(lam) => lam.iter().all(|x| !x.is_zero()),
            None => true,
        })
}

/// Coordinates of `target` in the basis `{cols[i] : i ∈ subset}`, or `None`
/// when those vectors are dependent.
pub(crate) fn basis_coordinates(
    cols: &[Vec<Rat>],
    subset: &[usize],
    target: &[Rat],
) -> Option<Vec<Rat>> {
    let r = target.len();
    let a: RatMatrix = (0..r)
        .map(|i| subset.iter().map(|&j| cols[j][i].clone()).collect())
        .collect();
    let inv = rational::inverse(&a)?;
    Some(rational::mat_vec(&inv, target))
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, &mut Vec::new(), &mut out);
    }
    out
}

/// Integer `psi` with `theta = -beta^∨ psi`.
///
/// Solves `[A | T] x = -theta` (with `T` the torsion orders of `DG(beta)`) by
/// Smith form back-substitution, setting free coordinates to zero.
pub fn lift_theta(beta_dual: &GroupHom, theta: &[Int]) -> Result<Vec<Int>> {
    let dg = &beta_dual.target;
    let m = beta_dual.source_rank;
    let rows = dg.coordinate_count();
    let k = dg.torsion.len();
    let system = IntMatrix::from_fn(rows, m + k, |i, j| {
        if j < m {
            beta_dual.matrix[(i, j)].clone()
        } else if i >= dg.rank && i - dg.rank == j - m {
            dg.torsion[j - m].clone()
        } else {
            Int::zero()
        }
    });
    let snf = smith_normal_form(&system);
    let rhs = snf.u.mul_vec(&negated(theta));
    let mut y = vec![Int::zero(); m + k];
    for (i, value) in rhs.iter().enumerate() {
        if i < snf.rank {
            let di = &snf.d[(i, i)];
            if !(value % di).is_zero() {
                return Err(Error::NotInImage);
            }
            y[i] = value / di;
        } else if !value.is_zero() {
            return Err(Error::NotInImage);
        }
    }
    Ok(snf.v.mul_vec(&y)[..m].to_vec())
}

/// All nonempty chambers, sorted by their sign vector (as a bitmask of `U`).
pub fn chambers(arr: &StackyArrangement, strategy: Strategy) -> Result<Vec<Chamber>> {
    arr.check_size()?;
    let m = arr.m();
    let d = arr.d();
    // Seed the search with feasible prefixes so independent branches can run
    // in parallel.
    let depth = m.min(4);
    let mut prefixes: Vec<Vec<i8>> = vec![Vec::new()];
    for i in 0..depth {
        let mut next = Vec::new();
        for p in prefixes {
            for s in [1i8, -1] {
                let mut q = p.clone();
                q.push(s);
                if open_cell_feasible(arr, &q, d) {
                    next.push(q);
                }
            }
        }
        prefixes = next;
        let _ = i;
    }
    let found: Vec<Vec<Vec<i8>>> = map_collect(prefixes, strategy, |p| {
        let mut out = Vec::new();
        extend_signs(arr, p, &mut out);
        out
    });
    let mut sign_vectors: Vec<Vec<i8>> = found.into_iter().flatten().collect();
    sign_vectors.sort_by_key(|s| flips_mask(s));
    let chambers = map_collect(sign_vectors, strategy, |signs| build_chamber(arr, signs));
    Ok(chambers)
}

fn flips_mask(signs: &[i8]) -> u64 {
    signs
        .iter()
        .enumerate()
        .filter(|(_, &s)| s > 0)
        .map(|(i, _)| 1u64 << i)
        .sum()
}

fn open_cell_feasible(arr: &StackyArrangement, signs: &[i8], d: usize) -> bool {
    let sys: Vec<Ineq> = signs
        .iter()
        .enumerate()
        .map(|(i, &s)| arr.half_space(i, s, true))
        .collect();
    feasible(&sys, d)
}

fn extend_signs(arr: &StackyArrangement, prefix: Vec<i8>, out: &mut Vec<Vec<i8>>) {
    if prefix.len() == arr.m() {
        out.push(prefix);
        return;
    }
    for s in [1i8, -1] {
        let mut q = prefix.clone();
        q.push(s);
        if open_cell_feasible(arr, &q, arr.d()) {
            extend_signs(arr, q, out);
        }
    }
}

fn build_chamber(arr: &StackyArrangement, signs: Vec<i8>) -> Chamber {
    let facet_normals: Vec<Ineq> = signs
        .iter()
        .enumerate()
        .map(|(i, &s)| arr.half_space(i, s, false))
        .collect();
    let bounded = is_bounded(arr, &signs);
    let flips = signs
        .iter()
        .enumerate()
        .filter(|(_, &s)| s > 0)
        .map(|(i, _)| i)
        .collect();
    Chamber {
        flips,
        signs,
        facet_normals,
        bounded,
    }
}

/// `P_U` is bounded iff its recession cone `{s_i <b_i, v> >= 0}` is zero,
/// which is tested coordinate by coordinate against `±v_j >= 1`.
fn is_bounded(arr: &StackyArrangement, signs: &[i8]) -> bool {
    let d = arr.d();
    let cone: Vec<Ineq> = signs
        .iter()
        .enumerate()
        .map(|(i, &s)| {
            let mut q = arr.half_space(i, s, false);
            q.constant = Rat::zero();
            q
        })
        .collect();
    for j in 0..d {
        for s in [1i64, -1] {
            let mut sys = cone.clone();
            let mut c = vec![Rat::zero(); d];
            c[j] = rat(s);
            sys.push(Ineq::new(c, -Rat::one(), false));
            if feasible(&sys, d) {
                return false;
            }
        }
    }
    true
}

/// Bounded chambers `P_U`, sorted by `U`.
pub fn bounded_chambers(arr: &StackyArrangement) -> Result<Vec<Chamber>> {
    bounded_chambers_with(arr, Strategy::default())
}

pub fn bounded_chambers_with(arr: &StackyArrangement, strategy: Strategy) -> Result<Vec<Chamber>> {
    Ok(chambers(arr, strategy)?
        .into_iter()
        .filter(|c| c.bounded)
        .collect())
}

/// Normal fan of a bounded chamber. Ray `i` is `s_i b̄_i`; each vertex of the
/// polytope contributes the cone on its `d` tight hyperplanes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalFan {
    pub rays: Vec<(usize, Vec<Int>)>,
    pub cones: Vec<Vec<usize>>,
    pub vertices: Vec<Vec<Rat>>,
}

impl NormalFan {
    pub fn ray(&self, index: usize) -> Option<&[Int]> {
        self.rays
            .iter()
            .find(|(i, _)| *i == index)
            .map(|(_, v)| v.as_slice())
    }
}

pub fn normal_fan(arr: &StackyArrangement, chamber: &Chamber) -> NormalFan {
    let d = arr.d();
    let cols: Vec<Vec<Rat>> = (0..arr.m()).map(|i| arr.b_bar_rat(i)).collect();
    let mut cones = Vec::new();
    let mut vertices = Vec::new();
    for t in subsets(arr.m(), d) {
        // Solve <b_i, v> = -r_i for i ∈ t.
        let a: RatMatrix = t.iter().map(|&i| cols[i].clone()).collect();
        let Some(inv) = rational::inverse(&a) else {
            continue;
        };
        let rhs: Vec<Rat> = t
            .iter()
            .map(|&i| -Rat::from_integer(arr.psi[i].clone()))
            .collect();
        let v = rational::mat_vec(&inv, &rhs);
        if chamber.facet_normals.iter().all(|q| q.holds_at(&v)) {
            cones.push(t);
            vertices.push(v);
        }
    }
    let mut used: Vec<usize> = cones.iter().flatten().copied().collect();
    used.sort_unstable();
    used.dedup();
    let rays = used
        .into_iter()
        .map(|i| {
            let s = Int::from(chamber.signs[i]);
            (i, arr.b_bar(i).iter().map(|x| x * &s).collect())
        })
        .collect();
    NormalFan {
        rays,
        cones,
        vertices,
    }
}

/// The core: every bounded chamber with its normal fan.
pub fn core(arr: &StackyArrangement) -> Result<Vec<(Chamber, NormalFan)>> {
    Ok(bounded_chambers(arr)?
        .into_iter()
        .map(|c| {
            let fan = normal_fan(arr, &c);
            (c, fan)
        })
        .collect())
}

/// Checks `theta = -beta^∨ psi`, the defining relation of a lifting.
pub fn lifts(arr: &StackyArrangement, psi: &[Int]) -> bool {
    negated(&arr.gale.dual.apply(psi)) == arr.theta
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&x| Int::from(x)).collect()
    }

    fn dual(row: &[i64]) -> GroupHom {
        let cols: Vec<Vec<Int>> = row.iter().map(|&x| vec![Int::from(x)]).collect();
        GroupHom::new(FgAbelianGroup::free(1), &cols).unwrap()
    }

    #[test]
    fn genericity_examples() {
        assert!(check_generic(&dual(&[1, 2]), &ints(&[1])));
        assert!(!check_generic(&dual(&[1, 2]), &ints(&[0])));
    }

    #[test]
    fn lift_examples() {
        assert_eq!(
            lift_theta(&dual(&[1, 1]), &ints(&[1])).unwrap(),
            ints(&[-1, 0])
        );
        assert_eq!(
            lift_theta(&dual(&[1, 2]), &ints(&[1])).unwrap(),
            ints(&[-1, 0])
        );
        assert_eq!(
            lift_theta(&dual(&[1, 2]), &ints(&[0])).unwrap(),
            ints(&[0, 0])
        );
        assert_eq!(
            lift_theta(&dual(&[2, 2]), &ints(&[1])),
            Err(Error::NotInImage)
        );
    }

    #[test]
    fn projective_line_core_is_a_segment() {
        let arr = StackyArrangement::from_small(1, &[&[-1], &[1]], &[1], None).unwrap();
        let core = core(&arr).unwrap();
        assert_eq!(core.len(), 1);
        let fan = &core[0].1;
        assert_eq!(fan.cones.len(), 2);
        let mut rays: Vec<Vec<Int>> = fan.rays.iter().map(|(_, r)| r.clone()).collect();
        rays.sort();
        assert_eq!(rays, vec![ints(&[-1]), ints(&[1])]);
    }

    #[test]
    fn single_hyperplane_has_no_bounded_chamber() {
        let arr = StackyArrangement::from_small(1, &[&[1]], &[], None).unwrap();
        assert!(bounded_chambers(&arr).unwrap().is_empty());
        assert_eq!(chambers(&arr, Strategy::Sequential).unwrap().len(), 2);
    }

    #[test]
    fn non_generic_theta_is_rejected() {
        let err = StackyArrangement::from_small(1, &[&[-1], &[1]], &[0], None).unwrap_err();
        assert_eq!(err, Error::NonGeneric);
    }

    #[test]
    fn dimension_guard() {
        let cols: Vec<Vec<i64>> = (0..17).map(|i| vec![1 + i as i64]).collect();
        let refs: Vec<&[i64]> = cols.iter().map(|c| c.as_slice()).collect();
        let kernel_rank = 16;
        let mut theta = vec![0i64; kernel_rank];
        theta[0] = 1;
        if let Ok(arr) = StackyArrangement::from_small(1, &refs, &theta, None) {
            assert!(matches!(
                bounded_chambers(&arr),
                Err(Error::DimensionTooLarge { .. })
            ));
        }
    }
}
