//! Rational polyhedral cones in `N¹(X) ⊗ R` with exact integer arithmetic.
//!
//! A [`RationalCone`] is given by primitive integer generators together with
//! the diagonal intersection form used for duality. Duals are computed with
//! the double description method; all arithmetic is on primitive integer
//! vectors, so ray identities are exact.

use std::fmt;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::linalg::{self, IntMatrix, MatrixError};
use crate::lattice::{DivisorClass, LatticeError, PicLattice};

/// Largest ambient rank handled by the cone code.
pub const MAX_RANK: usize = 9;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConeError {
    #[error("vector has length {got}, cone lives in rank {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("the Mori cone is only modelled for r <= 7 blow-ups (got r = {0})")]
    UnsupportedBlowups(usize),
    #[error("ambient rank {0} exceeds the supported maximum {MAX_RANK}")]
    RankTooLarge(usize),
    #[error("{0} is not a nef conic class")]
    NotNefConic(DivisorClass),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    RayMatch(#[from] RayMatchFailure),
}

/// Cone generated by finitely many integer vectors, with a diagonal pairing.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RationalCone {
    rank: usize,
    form: Vec<i64>,
    generators: Vec<Vec<i64>>,
}

impl fmt::Debug for RationalCone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RationalCone")
            .field("rank", &self.rank)
            .field("generators", &self.generators)
            .finish()
    }
}

impl RationalCone {
    /// Normalizes generators (primitive, zero vectors dropped, duplicates
    /// removed, lexicographically sorted).
    pub fn new(form: Vec<i64>, generators: Vec<Vec<i64>>) -> Result<Self, ConeError> {
        let rank = form.len();
        if rank > MAX_RANK {
            return Err(ConeError::RankTooLarge(rank));
        }
        if let Some(g) = generators.iter().find(|g| g.len() != rank) {
            return Err(ConeError::DimensionMismatch {
                expected: rank,
                got: g.len(),
            });
        }
        let mut gens: Vec<Vec<i64>> = generators
            .iter()
            .filter(|g| g.iter().any(|c| *c != 0))
            .map(|g| linalg::primitive(g))
            .collect();
        gens.sort();
        gens.dedup();
        Ok(Self {
            rank,
            form,
            generators: gens,
        })
    }

    /// Cone in the lattice's `N¹`, paired by its intersection form.
    pub fn in_lattice(lattice: &PicLattice, generators: Vec<Vec<i64>>) -> Result<Self, ConeError> {
        Self::new(lattice.form(), generators)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn form(&self) -> &[i64] {
        &self.form
    }

    pub fn generators(&self) -> &[Vec<i64>] {
        &self.generators
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn pair(&self, a: &[i64], b: &[i64]) -> i64 {
        self.form
            .iter()
            .zip(a)
            .zip(b)
            .map(|((f, x), y)| f * x * y)
            .sum()
    }

    fn check(&self, v: &[i64]) -> Result<(), ConeError> {
        if v.len() != self.rank {
            return Err(ConeError::DimensionMismatch {
                expected: self.rank,
                got: v.len(),
            });
        }
        Ok(())
    }

    /// Linear functionals (in the standard dot product) cutting out this cone.
    fn functionals(&self) -> Vec<Vec<i64>> {
        self.generators
            .iter()
            .map(|g| g.iter().zip(&self.form).map(|(x, f)| x * f).collect())
            .collect()
    }

    /// `{x : x·g >= 0 for every generator g}` under the pairing, returned by
    /// its extremal rays plus `±` a basis of its lineality space.
    pub fn dual(&self) -> RationalCone {
        let (rays, lineality) = double_description(&self.functionals(), self.rank);
        let mut gens = rays;
        for l in lineality {
            gens.push(l.iter().map(|x| -x).collect());
            gens.push(l);
        }
        RationalCone::new(self.form.clone(), gens).expect("dual has the same rank")
    }

    /// Membership `v ∈ cone`, decided against the facet description
    /// (the generators of the dual cone).
    pub fn contains(&self, v: &[i64]) -> Result<bool, ConeError> {
        self.check(v)?;
        Ok(self.membership().contains(v))
    }

    /// Precomputed facet description for repeated membership queries.
    pub fn membership(&self) -> Membership {
        let dual = self.dual();
        Membership {
            inequalities: dual.functionals(),
        }
    }

    /// Whether both cones are the same set (mutual containment of generators).
    pub fn same_set(&self, other: &RationalCone) -> bool {
        if self.rank != other.rank {
            return false;
        }
        let a = self.membership();
        let b = other.membership();
        other.generators.iter().all(|g| a.contains(g))
            && self.generators.iter().all(|g| b.contains(g))
    }

    /// Index of the generator spanning the same ray as `v`, if any.
    pub fn ray_index(&self, v: &[i64]) -> Option<usize> {
        if v.iter().all(|c| *c == 0) {
            return None;
        }
        let p = linalg::primitive(v);
        self.generators.binary_search(&p).ok()
    }

    pub fn export(&self) -> ConeExport {
        ConeExport {
            rank: self.rank,
            form: self.form.clone(),
            generators: self.generators.clone(),
        }
    }
}

/// Facet description of a cone.
#[derive(Debug, Clone)]
pub struct Membership {
    inequalities: Vec<Vec<i64>>,
}

impl Membership {
    pub fn contains(&self, v: &[i64]) -> bool {
        self.inequalities.iter().all(|h| {
            h.iter()
                .zip(v)
                .map(|(a, b)| *a as i128 * *b as i128)
                .sum::<i128>()
                >= 0
        })
    }

    pub fn inequalities(&self) -> &[Vec<i64>] {
        &self.inequalities
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeExport {
    pub rank: usize,
    pub form: Vec<i64>,
    pub generators: Vec<Vec<i64>>,
}

/// Mori cone of the blow-up at `r <= 7` points.
///
/// For `2 <= r <= 7` it is spanned by the lines. The two cases without
/// enough lines use explicit generators: `r = 0` gives `{H}` and `r = 1`
/// gives `{E_1, H - E_1}` (the exceptional curve and the ruling of `F_1`).
pub fn mori_cone(lattice: &PicLattice) -> Result<RationalCone, ConeError> {
    let r = lattice.blowups();
    let gens: Vec<Vec<i64>> = match r {
        0 => vec![vec![1]],
        1 => vec![vec![0, 1], vec![1, -1]],
        2..=7 => lattice
            .enumerate_lines()?
            .into_iter()
            .map(|d| d.into_coeffs())
            .collect(),
        _ => return Err(ConeError::UnsupportedBlowups(r)),
    };
    RationalCone::in_lattice(lattice, gens)
}

/// Nef cone, computed as the dual of the Mori cone.
pub fn nef_cone(lattice: &PicLattice) -> Result<RationalCone, ConeError> {
    Ok(mori_cone(lattice)?.dual())
}

/// Face `C^⊥ ∩ NE(X)` cut out by a conic class: the subcone spanned by the
/// lines orthogonal to `C`.
pub fn face_of_conic(lattice: &PicLattice, c: &DivisorClass) -> Result<RationalCone, ConeError> {
    lattice.check(c)?;
    let nef = nef_cone(lattice)?;
    if !lattice.is_conic(c) || !nef.contains(c.coeffs())? {
        return Err(ConeError::NotNefConic(c.clone()));
    }
    let gens = lattice
        .enumerate_lines()?
        .into_iter()
        .filter(|d| lattice.intersect(c, d) == Ok(0))
        .map(|d| d.into_coeffs())
        .collect();
    RationalCone::in_lattice(lattice, gens)
}

/// Adjoint of `m` with respect to the diagonal form `J`: `J mᵀ J`, so that
/// `(m x)·y = x·(adj y)`.
pub fn form_adjoint(m: &IntMatrix, form: &[i64]) -> IntMatrix {
    let n = m.dim();
    let mut out = IntMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            out.set(i, j, form[i] * m.get(j, i) * form[j]);
        }
    }
    out
}

/// Permutation of cone generators induced by a linear map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RayPermutation {
    /// `images[i] = j` when the map sends generator `i` onto the ray of generator `j`.
    pub images: Vec<usize>,
    /// Smallest `k >= 1` with `π^k = id`.
    pub order: usize,
}

impl RayPermutation {
    pub fn from_images(images: Vec<usize>) -> Self {
        let order = cycle_lengths(&images)
            .into_iter()
            .fold(1usize, num_integer::lcm);
        Self { images, order }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_images((0..n).collect())
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, j)| i == *j)
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &Self) -> Self {
        Self::from_images(other.images.iter().map(|&j| self.images[j]).collect())
    }

    pub fn cycle_type(&self) -> Vec<usize> {
        let mut c = cycle_lengths(&self.images);
        c.sort_unstable_by(|a, b| b.cmp(a));
        c
    }
}

fn cycle_lengths(images: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; images.len()];
    let mut out = Vec::new();
    for start in 0..images.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = images[i];
            len += 1;
        }
        out.push(len);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum RayMatchReason {
    /// The image is not a positive multiple of any generator.
    NotARay,
    /// Two generators land on the same ray.
    Collision {
        other: usize,
    },
    /// Matrix and cone ranks differ.
    RankMismatch,
    Overflow,
}

/// Why a matrix fails to permute the rays of a cone.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, thiserror::Error)]
#[error("generator {generator_index} {generator:?} maps to {image:?}: {reason:?}")]
pub struct RayMatchFailure {
    pub generator_index: usize,
    pub generator: Vec<i64>,
    pub image: Vec<i64>,
    pub reason: RayMatchReason,
}

/// The permutation of generators induced by `m`, when `m` maps each
/// generator to a positive multiple of some generator bijectively.
pub fn ray_permutation(
    m: &IntMatrix,
    cone: &RationalCone,
) -> Result<RayPermutation, RayMatchFailure> {
    if m.dim() != cone.rank() {
        return Err(RayMatchFailure {
            generator_index: 0,
            generator: Vec::new(),
            image: Vec::new(),
            reason: RayMatchReason::RankMismatch,
        });
    }
    let mut images = Vec::with_capacity(cone.generators.len());
    let mut hit: Vec<Option<usize>> = vec![None; cone.generators.len()];
    for (i, g) in cone.generators.iter().enumerate() {
        let fail = |image: Vec<i64>, reason| RayMatchFailure {
            generator_index: i,
            generator: g.clone(),
            image,
            reason,
        };
        let image = m
            .apply(g)
            .map_err(|_| fail(Vec::new(), RayMatchReason::Overflow))?;
        let Some(j) = cone.ray_index(&image) else {
            return Err(fail(image, RayMatchReason::NotARay));
        };
        if let Some(other) = hit[j] {
            return Err(fail(image, RayMatchReason::Collision { other }));
        }
        hit[j] = Some(i);
        images.push(j);
    }
    Ok(RayPermutation::from_images(images))
}

/// Smallest `k` such that `m^k` fixes every ray of `cone`, together with `m^k`.
pub fn iterate_to_fix_rays(
    m: &IntMatrix,
    cone: &RationalCone,
) -> Result<(usize, IntMatrix), ConeError> {
    let perm = ray_permutation(m, cone)?;
    let k = perm.order;
    let mk = m.pow(k as u32)?;
    debug_assert!(ray_permutation(&mk, cone).is_ok_and(|p| p.is_identity()));
    Ok((k, mk))
}

// ---------------------------------------------------------------------------
// Double description
// ---------------------------------------------------------------------------

#[derive(Clone)]
struct DdRay {
    v: Vec<i64>,
    zeros: Vec<u64>,
}

fn dot(a: &[i64], b: &[i64]) -> i128 {
    a.iter().zip(b).map(|(x, y)| *x as i128 * *y as i128).sum()
}

/// `alpha * x - beta * y`, made primitive.
fn combine(alpha: i128, x: &[i64], beta: i128, y: &[i64]) -> Vec<i64> {
    let raw: Vec<i128> = x
        .iter()
        .zip(y)
        .map(|(a, b)| {
            alpha
                .checked_mul(*a as i128)
                .and_then(|p| beta.checked_mul(*b as i128).and_then(|q| p.checked_sub(q)))
                .expect("double description coordinate overflow")
        })
        .collect();
    let g = raw.iter().fold(0i128, |acc, v| num_integer::gcd(acc, *v));
    raw.iter()
        .map(|v| {
            let q = if g == 0 { *v } else { v / g };
            i64::try_from(q).expect("double description coordinate overflow")
        })
        .collect()
}

fn set_bit(bits: &mut [u64], k: usize) {
    bits[k / 64] |= 1 << (k % 64);
}

fn subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

/// Extreme rays and lineality basis of `{x : a·x >= 0 for all rows a}`.
///
/// Rays are returned primitive and orthogonal (standard dot product) to the
/// lineality space, which makes the output canonical.
pub fn double_description(rows: &[Vec<i64>], n: usize) -> (Vec<Vec<i64>>, Vec<Vec<i64>>) {
    let words = rows.len().div_ceil(64).max(1);
    let mut lin: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            let mut e = vec![0; n];
            e[i] = 1;
            e
        })
        .collect();
    let mut rays: Vec<DdRay> = Vec::new();

    for (k, a) in rows.iter().enumerate() {
        if let Some(pos) = lin.iter().position(|l| dot(a, l) != 0) {
            let mut l0 = lin.swap_remove(pos);
            if dot(a, &l0) < 0 {
                l0.iter_mut().for_each(|x| *x = -*x);
            }
            let s0 = dot(a, &l0);
            for l in lin.iter_mut() {
                let s = dot(a, l);
                if s != 0 {
                    *l = combine(s0, l, s, &l0);
                }
            }
            for r in rays.iter_mut() {
                let s = dot(a, &r.v);
                if s != 0 {
                    r.v = combine(s0, &r.v, s, &l0);
                }
                set_bit(&mut r.zeros, k);
            }
            let mut zeros = vec![0u64; words];
            for j in 0..k {
                set_bit(&mut zeros, j);
            }
            rays.push(DdRay { v: l0, zeros });
            continue;
        }

        let dim = n - lin.len();
        let values: Vec<i128> = rays.iter().map(|r| dot(a, &r.v)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| values[i] > 0).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| values[i] < 0).collect();
        if neg.is_empty() {
            for (r, v) in rays.iter_mut().zip(&values) {
                if *v == 0 {
                    set_bit(&mut r.zeros, k);
                }
            }
            continue;
        }

        let mut next: Vec<DdRay> = Vec::new();
        for &p in &pos {
            for &q in &neg {
                let common: Vec<u64> = rays[p]
                    .zeros
                    .iter()
                    .zip(&rays[q].zeros)
                    .map(|(x, y)| x & y)
                    .collect();
                let size: u32 = common.iter().map(|w| w.count_ones()).sum();
                if dim >= 2 && (size as usize) < dim - 2 {
                    continue;
                }
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(t, r)| t == p || t == q || !subset(&common, &r.zeros));
                if !adjacent {
                    continue;
                }
                let v = combine(values[p], &rays[q].v, values[q], &rays[p].v);
                let mut zeros = common;
                set_bit(&mut zeros, k);
                next.push(DdRay { v, zeros });
            }
        }
        for (i, r) in rays.into_iter().enumerate() {
            if values[i] > 0 {
                next.push(r);
            } else if values[i] == 0 {
                let mut r = r;
                set_bit(&mut r.zeros, k);
                next.push(r);
            }
        }
        rays = next;
    }

    let lineality = if lin.is_empty() {
        Vec::new()
    } else {
        linalg::integer_kernel(rows, n)
    };
    let rays = rays
        .into_iter()
        .map(|r| project_out(&r.v, &lineality))
        .collect();
    (rays, lineality)
}

/// Orthogonal projection (standard dot product) away from `span(basis)`,
/// scaled back to a primitive integer vector.
fn project_out(v: &[i64], basis: &[Vec<i64>]) -> Vec<i64> {
    if basis.is_empty() {
        return linalg::primitive(v);
    }
    let n = v.len();
    // Solve the normal equations G c = B v, then subtract B^T c.
    let k = basis.len();
    let gram: Vec<Vec<BigRational>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| BigRational::from_integer(dot(&basis[i], &basis[j]).into()))
                .collect()
        })
        .collect();
    let rhs: Vec<BigRational> = basis
        .iter()
        .map(|b| BigRational::from_integer(dot(b, v).into()))
        .collect();
    let mut aug: Vec<Vec<BigRational>> = gram
        .into_iter()
        .zip(rhs)
        .map(|(mut row, r)| {
            row.push(r);
            row
        })
        .collect();
    linalg::row_reduce(&mut aug);
    let coeffs: Vec<BigRational> = aug.iter().map(|r| r[k].clone()).collect();
    let projected: Vec<BigRational> = (0..n)
        .map(|t| {
            let mut x = BigRational::from_integer(v[t].into());
            for (c, b) in coeffs.iter().zip(basis) {
                x -= c * BigRational::from_integer(b[t].into());
            }
            x
        })
        .collect();
    debug_assert!(projected.iter().any(|x| !x.is_zero()));
    linalg::clear_denominators(&projected)
}

/// Rational membership oracle by Carathéodory: `v` is in the cone iff it is
/// a non-negative combination of some linearly independent set of
/// generators. Exponential; meant for tests and small cones.
pub fn contains_by_caratheodory(cone: &RationalCone, v: &[i64]) -> bool {
    if v.iter().all(|c| *c == 0) {
        return true;
    }
    let gens = cone.generators();
    let n = cone.rank();
    let mut subset: Vec<usize> = Vec::new();
    fn rec(gens: &[Vec<i64>], v: &[i64], n: usize, start: usize, subset: &mut Vec<usize>) -> bool {
        if !subset.is_empty() && solves_nonneg(gens, subset, v) {
            return true;
        }
        if subset.len() == n {
            return false;
        }
        for i in start..gens.len() {
            subset.push(i);
            let cols: Vec<Vec<i64>> = subset.iter().map(|&j| gens[j].clone()).collect();
            if linalg::rank(&cols) == subset.len() && rec(gens, v, n, i + 1, subset) {
                return true;
            }
            subset.pop();
        }
        false
    }
    rec(gens, v, n, 0, &mut subset)
}

fn solves_nonneg(gens: &[Vec<i64>], subset: &[usize], v: &[i64]) -> bool {
    // Least-squares-free exact solve: columns are independent, so solve the
    // normal equations and verify.
    let k = subset.len();
    let cols: Vec<&Vec<i64>> = subset.iter().map(|&j| &gens[j]).collect();
    let gram: Vec<Vec<i64>> = (0..k)
        .map(|i| (0..k).map(|j| dot(cols[i], cols[j]) as i64).collect())
        .collect();
    let rhs: Vec<i64> = cols.iter().map(|c| dot(c, v) as i64).collect();
    let Some(x) = linalg::solve_rational(&gram, &rhs) else {
        return false;
    };
    if x.iter().any(|c| c.is_negative()) {
        return false;
    }
    (0..v.len()).all(|t| {
        let s: BigRational = x
            .iter()
            .zip(&cols)
            .map(|(c, col)| c * BigRational::from_integer(col[t].into()))
            .sum();
        s == BigRational::from_integer(v[t].into())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lat(r: usize) -> PicLattice {
        PicLattice::new(r).unwrap()
    }

    #[test]
    fn mori_cone_small_cases() {
        assert_eq!(mori_cone(&lat(0)).unwrap().generators(), &[vec![1]]);
        assert_eq!(
            mori_cone(&lat(1)).unwrap().generators(),
            &[vec![0, 1], vec![1, -1]]
        );
        assert_eq!(mori_cone(&lat(4)).unwrap().generators().len(), 10);
        assert_eq!(mori_cone(&lat(8)), Err(ConeError::UnsupportedBlowups(8)));
    }

    #[test]
    fn dual_examples() {
        let p2 = mori_cone(&lat(0)).unwrap();
        assert_eq!(p2.dual(), p2);
        let f1 = mori_cone(&lat(1)).unwrap();
        let nef = f1.dual();
        assert_eq!(nef.generators(), &[vec![1, -1], vec![1, 0]]);
        assert_eq!(nef.dual(), f1);
    }

    #[test]
    fn dual_of_zero_cone_is_everything() {
        let zero = RationalCone::new(vec![1, -1], vec![]).unwrap();
        let all = zero.dual();
        assert_eq!(all.generators().len(), 4);
        assert!(all.contains(&[5, -7]).unwrap());
        assert_eq!(all.dual(), zero);
    }

    #[test]
    fn membership_examples() {
        let l = lat(4);
        let nef = nef_cone(&l).unwrap();
        assert!(nef.contains(l.anticanonical().coeffs()).unwrap());
        assert!(!nef.contains(l.exceptional(1).coeffs()).unwrap());
        let p2nef = nef_cone(&lat(0)).unwrap();
        assert!(!p2nef.contains(&[-1]).unwrap());
        assert_eq!(
            nef.contains(&[1, 0]),
            Err(ConeError::DimensionMismatch {
                expected: 5,
                got: 2
            })
        );
    }

    #[test]
    fn faces_of_conics() {
        let l = lat(4);
        let f = face_of_conic(&l, &DivisorClass::new(vec![1, -1, 0, 0, 0])).unwrap();
        assert_eq!(f.generators().len(), 6);
        let g = face_of_conic(&l, &DivisorClass::new(vec![2, -1, -1, -1, -1])).unwrap();
        assert!(g.generators().iter().all(|v| v[0] == 1));
        assert_eq!(g.generators().len(), 6);
        let one = lat(1);
        assert!(face_of_conic(&one, &DivisorClass::new(vec![1, -1]))
            .unwrap()
            .is_zero());
        assert!(matches!(
            face_of_conic(&l, &l.exceptional(1)),
            Err(ConeError::NotNefConic(_))
        ));
    }

    #[test]
    fn ray_permutations_of_scalars() {
        let cone = mori_cone(&lat(4)).unwrap();
        let id = ray_permutation(&IntMatrix::identity(5), &cone).unwrap();
        assert!(id.is_identity());
        assert_eq!(id.order, 1);
        let two = ray_permutation(&IntMatrix::scalar(5, 2), &cone).unwrap();
        assert!(two.is_identity());
        let neg = ray_permutation(&IntMatrix::scalar(5, -1), &cone).unwrap_err();
        assert_eq!(neg.reason, RayMatchReason::NotARay);
    }

    #[test]
    fn swap_e1_e2_is_an_involution_on_rays() {
        let cone = mori_cone(&lat(4)).unwrap();
        let mut m = IntMatrix::identity(5);
        m.set(1, 1, 0);
        m.set(2, 2, 0);
        m.set(1, 2, 1);
        m.set(2, 1, 1);
        let p = ray_permutation(&m, &cone).unwrap();
        assert_eq!(p.order, 2);
        assert_eq!(p.cycle_type(), vec![2, 2, 2, 1, 1, 1, 1]);
        let (k, mk) = iterate_to_fix_rays(&m, &cone).unwrap();
        assert_eq!(k, 2);
        assert!(mk.is_identity());
    }

    #[test]
    fn adjoint_of_form_preserving_map_is_inverse() {
        let mut m = IntMatrix::identity(5);
        m.set(1, 1, 0);
        m.set(2, 2, 0);
        m.set(1, 2, 1);
        m.set(2, 1, 1);
        let adj = form_adjoint(&m, &lat(4).form());
        assert!(adj.mul(&m).unwrap().is_identity());
    }

    #[test]
    fn caratheodory_oracle_agrees_on_small_cone() {
        let nef = nef_cone(&lat(2)).unwrap();
        for a in -2..=3 {
            for b in -2..=2 {
                for c in -2..=2 {
                    let v = [a, b, c];
                    assert_eq!(
                        nef.contains(&v).unwrap(),
                        contains_by_caratheodory(&nef, &v),
                        "{v:?}"
                    );
                }
            }
        }
    }
}
