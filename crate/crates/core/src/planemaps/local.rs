//! Local computations at a rational point: coordinate changes moving the
//! point to the origin and intersection multiplicities of two affine curves.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{Poly, Rationals};

use super::bipoly::BiPoly;
use super::form::{other_two, HomogeneousForm};
use super::PlanemapError;

/// Rows of an invertible `T` with `T·[0:0:1] = p`; its first two columns are
/// coordinate vectors, so `f ∘ T` dehomogenized at `x2 = 1` is `f` in local
/// coordinates centred at `p`.
pub fn move_to_origin(p: &[BigRational; 3]) -> [[BigRational; 3]; 3] {
    let k = (0..3)
        .rev()
        .find(|&i| !p[i].is_zero())
        .expect("nonzero point");
    let (i, j) = other_two(k);
    std::array::from_fn(|r| {
        [
            if r == i {
                BigRational::one()
            } else {
                BigRational::zero()
            },
            if r == j {
                BigRational::one()
            } else {
                BigRational::zero()
            },
            p[r].clone(),
        ]
    })
}

/// `f` in affine coordinates centred at `p`.
pub fn localize(f: &HomogeneousForm, p: &[BigRational; 3]) -> BiPoly<Rationals> {
    f.linear_change(&move_to_origin(p)).dehomogenize(2)
}

fn low_order(p: &Poly<Rationals>) -> usize {
    p.coeffs()
        .iter()
        .position(|c| !c.is_zero())
        .expect("nonzero polynomial")
}

fn divide_by_y(p: &BiPoly<Rationals>) -> BiPoly<Rationals> {
    BiPoly::new(Rationals, p.rows()[1..].to_vec())
}

/// Intersection multiplicity `I_0(P, Q)` at the origin, computed with the
/// axiomatic reduction on the restrictions to `y = 0`.
pub fn intersection_multiplicity(
    p: &BiPoly<Rationals>,
    q: &BiPoly<Rationals>,
) -> Result<usize, PlanemapError> {
    let zero = BigRational::zero();
    let (mut p, mut q) = (p.clone(), q.clone());
    let mut total = 0;
    loop {
        if p.is_zero() || q.is_zero() {
            return Err(PlanemapError::CommonComponent);
        }
        if !p.eval(&zero, &zero).is_zero() || !q.eval(&zero, &zero).is_zero() {
            return Ok(total);
        }
        let (p0, q0) = (p.row(0), q.row(0));
        let (dp, dq) = (p0.degree(), q0.degree());
        // Order so that the first restriction has the smaller degree, with the
        // zero restriction counting as infinite.
        let swap = match (dp, dq) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(a), Some(b)) => a > b,
        };
        if swap {
            std::mem::swap(&mut p, &mut q);
        }
        let (p0, q0) = if swap { (q0, p0) } else { (p0, q0) };
        match (p0.degree(), q0.degree()) {
            (None, _) => return Err(PlanemapError::CommonComponent),
            (Some(_), None) => {
                total += low_order(&p0);
                q = divide_by_y(&q);
            }
            (Some(r), Some(s)) => {
                let lp = p0.lc();
                let lq = q0.lc();
                let shifted = p.mul_x(&Poly::monomial(Rationals, lq, s - r));
                q = q.scale(&lp).sub(&shifted);
            }
        }
    }
}

/// Order of vanishing of an affine polynomial at the origin.
pub fn order_at_origin(p: &BiPoly<Rationals>) -> Option<usize> {
    p.terms().into_iter().map(|((i, j), _)| i + j).min()
}

/// Evaluates a bivariate polynomial at `(x(θ), y(θ))` modulo `m(θ)`.
pub fn eval_mod(
    p: &BiPoly<Rationals>,
    x: &Poly<Rationals>,
    y: &Poly<Rationals>,
    m: &Poly<Rationals>,
) -> Poly<Rationals> {
    let f = Rationals;
    let mut acc = Poly::zero(f);
    for row in p.rows().iter().rev() {
        let mut r = Poly::zero(f);
        for c in row.coeffs().iter().rev() {
            r = r.mul_mod(x, m).add(&Poly::constant(f, c.clone()));
        }
        acc = acc.mul_mod(y, m).add(&r).rem(m);
    }
    acc
}
