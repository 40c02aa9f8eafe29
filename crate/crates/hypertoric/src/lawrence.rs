//! Lawrence lifting: the fan `Σ_θ` in `N_L = N ⊕ Z^m`, cone location and
//! the pairing `l(c1, c2)`.
//!
//! Rays `0..m` are `b_{L,i} = (b_i, e_i)`, rays `m..2m` are `b'_{L,i} = (0, e_i)`.
//! Points of `N_L` are written in the free coordinates `N̄ ⊕ Z^m`.

use num_traits::{Signed, Zero};

use crate::arrangement::{basis_coordinates, subsets, StackyArrangement};
use crate::exactalg::rational::{self, to_rat_vec, RatMatrix};
use crate::multifan::kernel_coordinates_rat;
use crate::parallel::{map_collect, Strategy};
use crate::{Error, Int, Rat, Result};

#[derive(Debug, Clone)]
pub struct LawrenceFan {
    pub m: usize,
    pub d: usize,
    pub rays: Vec<Vec<Int>>,
    /// Ray index sets `σ̄(C, θ)`, aligned with `irrelevant`.
    pub max_cones: Vec<Vec<usize>>,
    /// Variable sets `C(θ)` of the irrelevant ideal: index `i < m` is `z_i`,
    /// index `m + i` is `w_i`.
    pub irrelevant: Vec<Vec<usize>>,
    inverses: Vec<RatMatrix>,
}

/// Simplicial coordinates of a point: one entry per ray, zero off the cone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeCoordinates {
    pub cone: usize,
    pub coefficients: Vec<Rat>,
}

impl ConeCoordinates {
    /// Rays with a positive coefficient: the minimal cone containing the point.
    pub fn support(&self) -> Vec<usize> {
        (0..self.coefficients.len())
            .filter(|&i| self.coefficients[i].is_positive())
            .collect()
    }
}

/// The pairing vector in `Q^{2m}` and its class in the kernel basis of `beta`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LPairing {
    pub vector: Vec<Rat>,
    pub novikov_degree: Vec<Rat>,
}

impl LPairing {
    pub fn is_zero(&self) -> bool {
        self.vector.iter().all(Zero::is_zero)
    }
}

pub fn lawrence_fan(arr: &StackyArrangement) -> Result<LawrenceFan> {
    lawrence_fan_with(arr, Strategy::default())
}

pub fn lawrence_fan_with(arr: &StackyArrangement, strategy: Strategy) -> Result<LawrenceFan> {
    arr.check_size()?;
    let (m, d) = (arr.m(), arr.d());
    let r = arr.dual_rank();
    let a_bar: Vec<Vec<Rat>> = (0..m).map(|i| to_rat_vec(&arr.a_bar(i))).collect();
    let theta_bar = to_rat_vec(&arr.theta_bar());
    let found: Vec<Result<Option<Vec<usize>>>> = map_collect(subsets(m, r), strategy, |c| {
        let Some(lambda) = basis_coordinates(&a_bar, &c, &theta_bar) else {
            return Ok(None);
        };
        if lambda.iter().any(Zero::is_zero) {
            return Err(Error::NonGeneric);
        }
        let mut sigma: Vec<usize> = c
            .iter()
            .zip(&lambda)
            .map(|(&i, l)| if l.is_positive() { i } else { m + i })
            .collect();
        sigma.sort_unstable();
        Ok(Some(sigma))
    });
    let mut irrelevant = Vec::new();
    for f in found {
        if let Some(s) = f? {
            irrelevant.push(s);
        }
    }
    irrelevant.sort();
    irrelevant.dedup();
    let max_cones: Vec<Vec<usize>> = irrelevant
        .iter()
        .map(|s| (0..2 * m).filter(|i| !s.contains(i)).collect())
        .collect();
    let rays = lawrence_rays(arr);
    let inverses = max_cones
        .iter()
        .map(|cone| {
            let a: RatMatrix = (0..d + m)
                .map(|row| {
                    cone.iter()
                        .map(|&j| Rat::from_integer(rays[j][row].clone()))
                        .collect()
                })
                .collect();
            rational::inverse(&a)
                .ok_or_else(|| Error::Shape(format!("Lawrence cone {cone:?} is not simplicial")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LawrenceFan {
        m,
        d,
        rays,
        max_cones,
        irrelevant,
        inverses,
    })
}

fn lawrence_rays(arr: &StackyArrangement) -> Vec<Vec<Int>> {
    let (m, d) = (arr.m(), arr.d());
    let unit = |i: usize| (0..m).map(move |j| Int::from(u8::from(i == j)));
    let mut rays: Vec<Vec<Int>> = (0..m)
        .map(|i| arr.b_bar(i).into_iter().chain(unit(i)).collect())
        .collect();
    rays.extend((0..m).map(|i| std::iter::repeat_n(Int::zero(), d).chain(unit(i)).collect()));
    rays
}

impl LawrenceFan {
    pub fn ray_count(&self) -> usize {
        self.rays.len()
    }

    /// Finds a maximal cone containing `c` and its simplicial coordinates.
    pub fn locate(&self, c: &[Rat]) -> Result<ConeCoordinates> {
        for (k, cone) in self.max_cones.iter().enumerate() {
            let local = rational::mat_vec(&self.inverses[k], c);
            if local.iter().all(|x| !x.is_negative()) {
                let mut coefficients = vec![Rat::zero(); 2 * self.m];
                for (&j, x) in cone.iter().zip(local) {
                    coefficients[j] = x;
                }
                return Ok(ConeCoordinates {
                    cone: k,
                    coefficients,
                });
            }
        }
        Err(Error::OutsideSupport {
            point: c.iter().map(|x| x.to_string()).collect(),
        })
    }

    pub fn locate_int(&self, c: &[Int]) -> Result<ConeCoordinates> {
        self.locate(&to_rat_vec(c))
    }

    /// `Σ_j coefficients_j · ray_j`.
    pub fn expand(&self, coords: &ConeCoordinates) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); self.d + self.m];
        for (ray, x) in self.rays.iter().zip(&coords.coefficients) {
            for (o, r) in out.iter_mut().zip(ray) {
                *o += x * Rat::from_integer(r.clone());
            }
        }
        out
    }

    /// Whether some maximal cone contains every point.
    pub fn same_cone(&self, points: &[&[Rat]]) -> bool {
        (0..self.max_cones.len()).any(|k| {
            points.iter().all(|c| {
                rational::mat_vec(&self.inverses[k], c)
                    .iter()
                    .all(|x| !x.is_negative())
            })
        })
    }

    /// `l(c1, c2) = coords(c1) + coords(c2) − coords(c1 + c2)`.
    pub fn l_pairing(&self, arr: &StackyArrangement, c1: &[Rat], c2: &[Rat]) -> Result<LPairing> {
        let sum: Vec<Rat> = c1.iter().zip(c2).map(|(a, b)| a + b).collect();
        let (x1, x2, x12) = (self.locate(c1)?, self.locate(c2)?, self.locate(&sum)?);
        let vector: Vec<Rat> = (0..2 * self.m)
            .map(|j| &x1.coefficients[j] + &x2.coefficients[j] - &x12.coefficients[j])
            .collect();
        // The vector lies in ker beta_L = {(x, -x) : x ∈ ker beta}.
        let novikov_degree = kernel_coordinates_rat(arr, &vector[..self.m])?;
        Ok(LPairing {
            vector,
            novikov_degree,
        })
    }

    /// The ray as a rational point.
    pub fn ray(&self, j: usize) -> Vec<Rat> {
        to_rat_vec(&self.rays[j])
    }
}
