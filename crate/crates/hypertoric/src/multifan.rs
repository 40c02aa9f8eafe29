//! The multi-fan `Δ_β`, matroid circuits with their orientation and curve
//! classes, and box elements indexing twisted sectors.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arrangement::fm::{feasible, Ineq};
use crate::arrangement::{subsets, StackyArrangement};
use crate::exactalg::rational::{self, nullspace, primitive_integer, to_rat_vec, RatMatrix};
use crate::exactalg::{smith_normal_form, IntMatrix};
use crate::parallel::{map_collect, Strategy};
use crate::{Error, Int, Rat, Result};

/// All cones of `Δ_β`: index sets whose `b̄_i` are linearly independent,
/// ordered by size and then lexicographically. The first cone is `0̂`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiFan {
    pub cones: Vec<Vec<usize>>,
    pub dimension: usize,
}

impl MultiFan {
    pub fn contains(&self, cone: &[usize]) -> bool {
        let mut c = cone.to_vec();
        c.sort_unstable();
        c.dedup();
        c.len() == cone.len() && self.cones.binary_search_by(|x| cmp_cones(x, &c)).is_ok()
    }

    pub fn top_cones(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.cones.iter().filter(move |c| c.len() == self.dimension)
    }
}

fn cmp_cones(a: &[usize], b: &[usize]) -> std::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

pub fn multi_fan(arr: &StackyArrangement) -> MultiFan {
    let cols: Vec<Vec<Rat>> = (0..arr.m()).map(|i| arr.b_bar_rat(i)).collect();
    let mut cones = Vec::new();
    for k in 0..=arr.d().min(arr.m()) {
        for s in subsets(arr.m(), k) {
            if is_independent(&cols, &s) {
                cones.push(s);
            }
        }
    }
    MultiFan {
        cones,
        dimension: arr.d(),
    }
}

fn is_independent(cols: &[Vec<Rat>], subset: &[usize]) -> bool {
    let sel: Vec<Vec<Rat>> = subset.iter().map(|&i| cols[i].clone()).collect();
    rational::column_rank(&sel) == subset.len()
}

/// Whether `{b̄_i : i ∈ subset}` is linearly independent.
pub fn is_cone(arr: &StackyArrangement, subset: &[usize]) -> bool {
    let mut s = subset.to_vec();
    s.sort_unstable();
    s.dedup();
    if s.len() != subset.len() {
        return false;
    }
    let cols: Vec<Vec<Rat>> = s.iter().map(|&i| arr.b_bar_rat(i)).collect();
    rational::column_rank(&cols) == s.len()
}

/// A minimal dependent set with its geometric splitting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    pub support: Vec<usize>,
    pub positive: Vec<usize>,
    pub negative: Vec<usize>,
    /// Positive weights aligned with `support`.
    pub weights: Vec<Int>,
    /// `Σ_{S+} w_i e_i − Σ_{S−} w_j e_j` in `Z^m`.
    pub beta_s: Vec<Int>,
    /// Coordinates of `beta_s` in the kernel basis of `beta`.
    pub h2_class: Vec<Int>,
    pub lcm_w: Int,
    /// Complement of the support, the index set of the root hyperplane.
    pub root_hyperplane: Vec<usize>,
}

impl Circuit {
    pub fn weight(&self, index: usize) -> Option<&Int> {
        self.support
            .iter()
            .position(|&i| i == index)
            .map(|p| &self.weights[p])
    }

    pub fn is_positive(&self, index: usize) -> bool {
        self.positive.contains(&index)
    }
}

/// All circuits, sorted by support.
pub fn circuits(arr: &StackyArrangement) -> Result<Vec<Circuit>> {
    circuits_with(arr, Strategy::default())
}

pub fn circuits_with(arr: &StackyArrangement, strategy: Strategy) -> Result<Vec<Circuit>> {
    arr.check_size()?;
    let cols: Vec<Vec<Rat>> = (0..arr.m()).map(|i| arr.b_bar_rat(i)).collect();
    let mut candidates = Vec::new();
    for k in 2..=(arr.d() + 1).min(arr.m()) {
        candidates.extend(subsets(arr.m(), k));
    }
    let found = map_collect(candidates, strategy, |s| circuit_on(arr, &cols, s));
    found.into_iter().flatten().collect()
}

fn circuit_on(
    arr: &StackyArrangement,
    cols: &[Vec<Rat>],
    support: Vec<usize>,
) -> Option<Result<Circuit>> {
    let d = arr.d();
    let a: RatMatrix = (0..d)
        .map(|r| support.iter().map(|&j| cols[j][r].clone()).collect())
        .collect();
    let ns = nullspace(&a, support.len());
    if ns.len() != 1 || ns[0].iter().any(Zero::is_zero) {
        return None;
    }
    let kernel = primitive_integer(&ns[0]);
    Some(orient(arr, support, kernel))
}

/// Picks the splitting for which the mixed intersection of half-spaces
/// `∩_{S+} F_i ∩ ∩_{S−} G_j` is empty.
fn orient(arr: &StackyArrangement, support: Vec<usize>, kernel: Vec<Int>) -> Result<Circuit> {
    let empty_for = |flip: i8| {
        let sys: Vec<Ineq> = support
            .iter()
            .zip(&kernel)
            .map(|(&i, k)| {
                let s = if k.is_positive() { flip } else { -flip };
                arr.half_space(i, s, false)
            })
            .collect();
        !feasible(&sys, arr.d())
    };
    let sign = match (empty_for(1), empty_for(-1)) {
        (true, false) => Int::one(),
        (false, true) => -Int::one(),
        _ => return Err(Error::AmbiguousSplit { support }),
    };
    let oriented: Vec<Int> = kernel.iter().map(|k| k * &sign).collect();
    let mut beta_s = vec![Int::zero(); arr.m()];
    let mut positive = Vec::new();
    let mut negative = Vec::new();
    for (&i, k) in support.iter().zip(&oriented) {
        beta_s[i] = k.clone();
        if k.is_positive() {
            positive.push(i);
        } else {
            negative.push(i);
        }
    }
    let weights: Vec<Int> = oriented.iter().map(Signed::abs).collect();
    let lcm_w = weights.iter().fold(Int::one(), |l, w| l.lcm(w));
    let h2_class = kernel_coordinates(arr, &beta_s)?;
    let root_hyperplane = (0..arr.m()).filter(|i| !support.contains(i)).collect();
    Ok(Circuit {
        support,
        positive,
        negative,
        weights,
        beta_s,
        h2_class,
        lcm_w,
        root_hyperplane,
    })
}

/// A circuit of the arrangement restricted to the flat `∩_{i∈flat} H_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlatCircuit {
    pub support: Vec<usize>,
    pub positive: Vec<usize>,
    pub negative: Vec<usize>,
}

/// Circuits among the indices `j ∉ flat` whose images in `N̄ / span(b̄_flat)`
/// are minimally dependent, oriented by the same emptiness test carried out
/// inside the flat. With `flat` empty these are the ordinary circuits.
pub fn flat_circuits(arr: &StackyArrangement, flat: &[usize]) -> Result<Vec<FlatCircuit>> {
    let cols: Vec<Vec<Rat>> = (0..arr.m()).map(|i| arr.b_bar_rat(i)).collect();
    let base = flat.len();
    let alive: Vec<usize> = (0..arr.m())
        .filter(|j| !flat.contains(j))
        .filter(|&j| {
            let mut s = flat.to_vec();
            s.push(j);
            is_independent(&cols, &s)
        })
        .collect();
    let mut out = Vec::new();
    let max = (arr.d() - base + 1).min(alive.len());
    for k in 2..=max {
        for pick in subsets(alive.len(), k) {
            let support: Vec<usize> = pick.iter().map(|&p| alive[p]).collect();
            let all: Vec<usize> = flat.iter().chain(&support).copied().collect();
            let a: RatMatrix = (0..arr.d())
                .map(|r| all.iter().map(|&j| cols[j][r].clone()).collect())
                .collect();
            let ns = nullspace(&a, all.len());
            if ns.len() != 1 || ns[0][base..].iter().any(Zero::is_zero) {
                continue;
            }
            let kernel = primitive_integer(&ns[0][base..]);
            let empty_for = |flip: i8| {
                let mut sys: Vec<Ineq> = Vec::new();
                for &i in flat {
                    sys.push(arr.half_space(i, 1, false));
                    sys.push(arr.half_space(i, -1, false));
                }
                for (&i, k) in support.iter().zip(&kernel) {
                    let s = if k.is_positive() { flip } else { -flip };
                    sys.push(arr.half_space(i, s, false));
                }
                !feasible(&sys, arr.d())
            };
            let flip = match (empty_for(1), empty_for(-1)) {
                (true, false) => 1,
                (false, true) => -1,
                _ => return Err(Error::AmbiguousSplit { support }),
            };
            let (mut positive, mut negative) = (Vec::new(), Vec::new());
            for (&i, k) in support.iter().zip(&kernel) {
                if k.is_positive() == (flip > 0) {
                    positive.push(i);
                } else {
                    negative.push(i);
                }
            }
            out.push(FlatCircuit {
                support,
                positive,
                negative,
            });
        }
    }
    Ok(out)
}

/// Coordinates of `x ∈ ker beta` in the kernel basis.
pub fn kernel_coordinates(arr: &StackyArrangement, x: &[Int]) -> Result<Vec<Int>> {
    let coords = kernel_coordinates_rat(arr, &to_rat_vec(x))?;
    coords
        .into_iter()
        .map(|c| {
            if c.is_integer() {
                Ok(c.to_integer())
            } else {
                Err(Error::NotInImage)
            }
        })
        .collect()
}

/// Rational coordinates of `x` in the span of the kernel basis.
pub fn kernel_coordinates_rat(arr: &StackyArrangement, x: &[Rat]) -> Result<Vec<Rat>> {
    let basis = arr.kernel_basis();
    let m = arr.m();
    let a: RatMatrix = (0..m)
        .map(|i| {
            basis
                .iter()
                .map(|k| Rat::from_integer(k[i].clone()))
                .collect()
        })
        .collect();
    rational::solve(&a, x).ok_or(Error::NotInImage)
}

pub fn curve_class_coordinates(circuit: &Circuit, arr: &StackyArrangement) -> Result<Vec<Int>> {
    kernel_coordinates(arr, &circuit.beta_s)
}

/// A twisted sector `(v, σ)` with `v̄ = Σ_{i∈σ} α_i b̄_i`, `0 < α_i < 1`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct BoxElement {
    pub sigma: Vec<usize>,
    /// Full coordinates in `N` (free part, then torsion).
    pub v: Vec<Int>,
    pub alphas: Vec<Rat>,
    pub age: usize,
}

impl BoxElement {
    pub fn is_trivial(&self) -> bool {
        self.sigma.is_empty() && self.v.iter().all(Zero::is_zero)
    }

    pub fn alpha(&self, index: usize) -> Rat {
        self.sigma
            .iter()
            .position(|&i| i == index)
            .map_or_else(Rat::zero, |p| self.alphas[p].clone())
    }
}

/// All box elements; the trivial box comes first.
pub fn box_elements(arr: &StackyArrangement) -> Vec<BoxElement> {
    let fan = multi_fan(arr);
    let torsion = arr.group_n.torsion_elements();
    let d = arr.d();
    let mut out = Vec::new();
    for sigma in &fan.cones {
        for (v_bar, alphas) in open_parallelepiped(arr, sigma) {
            for t in &torsion {
                let mut v = v_bar.clone();
                v.extend_from_slice(&t[d..]);
                out.push(BoxElement {
                    sigma: sigma.clone(),
                    v,
                    alphas: alphas.clone(),
                    age: sigma.len(),
                });
            }
        }
    }
    out.sort_by(|a, b| cmp_cones(&a.sigma, &b.sigma).then_with(|| a.v.cmp(&b.v)));
    out
}

/// Lattice points `v̄ = B_σ α` with every `α_i ∈ (0, 1)`.
///
/// With `U B_σ V = D`, the points of `N̄ ∩ span(σ)` are `U⁻¹ (c, 0)` and have
/// `α = V D⁻¹ c`; taking `c_i ∈ [0, d_i)` and fractional parts of `α` gives
/// one representative per coset.
fn open_parallelepiped(arr: &StackyArrangement, sigma: &[usize]) -> Vec<(Vec<Int>, Vec<Rat>)> {
    let d = arr.d();
    let k = sigma.len();
    if k == 0 {
        return vec![(vec![Int::zero(); d], Vec::new())];
    }
    let cols: Vec<Vec<Int>> = sigma.iter().map(|&i| arr.b_bar(i)).collect();
    let b = IntMatrix::from_columns(&cols, d);
    let snf = smith_normal_form(&b);
    let factors = snf.invariant_factors();
    let v = snf.v.to_rational();
    let mut out = Vec::new();
    let mut c = vec![Int::zero(); k];
    loop {
        let y: Vec<Rat> = c
            .iter()
            .zip(&factors)
            .map(|(ci, di)| Rat::new(ci.clone(), di.clone()))
            .collect();
        let alphas: Vec<Rat> = rational::mat_vec(&v, &y)
            .into_iter()
            .map(|a| &a - a.floor())
            .collect();
        if alphas.iter().all(|a| !a.is_zero()) {
            let point: Vec<Rat> = (0..d)
                .map(|r| {
                    cols.iter()
                        .zip(&alphas)
                        .map(|(col, a)| a * Rat::from_integer(col[r].clone()))
                        .sum()
                })
                .collect();
            out.push((point.into_iter().map(|x| x.to_integer()).collect(), alphas));
        }
        // Odometer over c_i ∈ [0, d_i).
        let mut idx = 0;
        loop {
            if idx == k {
                out.sort();
                out.dedup();
                return out;
            }
            c[idx] += 1;
            if c[idx] < factors[idx] {
                break;
            }
            c[idx] = Int::zero();
            idx += 1;
        }
    }
}

/// `v̌ = Σ_{i∈σ} b_i − v`, with `α̌_i = 1 − α_i`.
pub fn box_inverse(b: &BoxElement, arr: &StackyArrangement) -> BoxElement {
    let mut v: Vec<Int> = b.v.iter().map(|x| -x).collect();
    for &i in &b.sigma {
        for (x, y) in v.iter_mut().zip(arr.b(i)) {
            *x += y;
        }
    }
    arr.group_n.reduce(&mut v);
    let alphas = b.alphas.iter().map(|a| Rat::one() - a).collect();
    BoxElement {
        sigma: b.sigma.clone(),
        v,
        alphas,
        age: b.age,
    }
}

/// Position of `target` in `boxes`, matching on `σ` and `v`.
pub fn box_index(boxes: &[BoxElement], sigma: &[usize], v: &[Int]) -> Option<usize> {
    boxes.iter().position(|b| b.sigma == sigma && b.v == v)
}
