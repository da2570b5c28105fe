//! Common zeros of the three forms of a map, over the algebraic closure.
//!
//! Affine common zeros are found by eliminating `y` with resultants of random
//! combinations, then splitting the system along the squarefree eliminant with
//! a dynamic-evaluation gcd over `Q[x]/(m)`. Each component is a point or a
//! Galois-stable cluster of conjugate points parametrised by a root `θ` of a
//! univariate polynomial.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use serde::Serialize;

use crate::arith::field::fmt_rational;
use crate::arith::roots::{certify_irreducible, rational_roots, QPoly};
use crate::arith::{Poly, Rationals};

use super::bipoly::BiPoly;
use super::form::univariate_from_form;
use super::local::eval_mod;
use super::map::PlaneRationalMap;
use super::PlanemapError;

const SHEAR_ATTEMPTS: usize = 12;

/// A conjugacy class of base points: for every root `θ` of
/// `defining_polynomial` the point `[c0(θ) : c1(θ) : c2(θ)]`.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraicCluster {
    pub defining_polynomial: QPoly,
    /// `Some(true)` when irreducibility over `Q` is certified.
    pub irreducible: Option<bool>,
    pub coordinates: [QPoly; 3],
}

#[derive(Clone, Debug, PartialEq)]
pub enum BasePoint {
    Rational([BigRational; 3]),
    Cluster(AlgebraicCluster),
}

impl BasePoint {
    /// Number of geometric points represented.
    pub fn geometric_count(&self) -> usize {
        match self {
            BasePoint::Rational(_) => 1,
            BasePoint::Cluster(c) => c.defining_polynomial.deg0(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BaseLocus {
    pub points: Vec<BasePoint>,
    /// Every geometric base point is represented by exactly one entry.
    pub complete_over_closure: bool,
}

impl BaseLocus {
    pub fn rational_points(&self) -> Vec<[BigRational; 3]> {
        self.points
            .iter()
            .filter_map(|p| match p {
                BasePoint::Rational(c) => Some(c.clone()),
                BasePoint::Cluster(_) => None,
            })
            .collect()
    }

    pub fn clusters(&self) -> Vec<&AlgebraicCluster> {
        self.points
            .iter()
            .filter_map(|p| match p {
                BasePoint::Cluster(c) => Some(c),
                BasePoint::Rational(_) => None,
            })
            .collect()
    }

    pub fn geometric_count(&self) -> usize {
        self.points.iter().map(BasePoint::geometric_count).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn export(&self) -> BaseLocusExport {
        BaseLocusExport {
            rational_points: self.rational_points().iter().map(format_point).collect(),
            clusters: self
                .clusters()
                .iter()
                .map(|c| ClusterExport {
                    defining_polynomial: format_poly(&c.defining_polynomial, "t"),
                    degree: c.defining_polynomial.deg0(),
                    irreducible: c.irreducible,
                    coordinates: std::array::from_fn(|i| format_poly(&c.coordinates[i], "t")),
                })
                .collect(),
            geometric_count: self.geometric_count(),
            complete_over_closure: self.complete_over_closure,
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct ClusterExport {
    pub defining_polynomial: String,
    pub degree: usize,
    pub irreducible: Option<bool>,
    pub coordinates: [String; 3],
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct BaseLocusExport {
    pub rational_points: Vec<String>,
    pub clusters: Vec<ClusterExport>,
    pub geometric_count: usize,
    pub complete_over_closure: bool,
}

impl fmt::Display for BaseLocus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.points.is_empty() {
            return f.write_str("empty");
        }
        let parts: Vec<String> = self
            .points
            .iter()
            .map(|p| match p {
                BasePoint::Rational(c) => format_point(c),
                BasePoint::Cluster(c) => format!(
                    "{} points [{} : {} : {}] with {} = 0",
                    c.defining_polynomial.deg0(),
                    format_poly(&c.coordinates[0], "t"),
                    format_poly(&c.coordinates[1], "t"),
                    format_poly(&c.coordinates[2], "t"),
                    format_poly(&c.defining_polynomial, "t"),
                ),
            })
            .collect();
        f.write_str(&parts.join("; "))
    }
}

pub fn format_point(p: &[BigRational; 3]) -> String {
    format!(
        "[{} : {} : {}]",
        fmt_rational(&p[0]),
        fmt_rational(&p[1]),
        fmt_rational(&p[2])
    )
}

pub fn format_poly(p: &QPoly, var: &str) -> String {
    crate::endo::p1::format_qpoly(p, var)
}

/// Scales so that the last nonzero coordinate is 1.
pub fn normalize_point(p: &[BigRational; 3]) -> [BigRational; 3] {
    let k = (0..3)
        .rev()
        .find(|&i| !p[i].is_zero())
        .expect("nonzero point");
    let s = p[k].clone();
    std::array::from_fn(|i| &p[i] / &s)
}

/// Affine common zeros: rational points and clusters `(m, x(θ), y(θ))`.
#[derive(Clone, Debug, Default)]
pub struct AffineSolution {
    pub rational: Vec<(BigRational, BigRational)>,
    pub clusters: Vec<(QPoly, QPoly, QPoly)>,
}

impl AffineSolution {
    pub fn geometric_count(&self) -> usize {
        self.rational.len() + self.clusters.iter().map(|c| c.0.deg0()).sum::<usize>()
    }
}

/// Polynomial in `y` with coefficients in `Q[x]/(m)`; `c[j]` multiplies `y^j`.
type YPoly = Vec<QPoly>;

fn trim(mut a: YPoly) -> YPoly {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

fn reduce_y(a: &[QPoly], m: &QPoly) -> YPoly {
    trim(a.iter().map(|c| c.rem(m)).collect())
}

enum Unit {
    Ok(YPoly),
    Split(QPoly, QPoly),
}

/// Drops leading coefficients that vanish mod `m` and checks that the
/// remaining one is invertible, splitting `m` when it is a zero divisor.
fn make_unit_lc(a: YPoly, m: &QPoly) -> Unit {
    let a = trim(a);
    let Some(c) = a.last() else {
        return Unit::Ok(a);
    };
    let g = c.gcd(m);
    if g.is_constant() {
        Unit::Ok(a)
    } else {
        let other = m.div_exact(&g).expect("gcd divides");
        Unit::Split(g, other.monic())
    }
}

fn monic_y(a: &[QPoly], m: &QPoly) -> YPoly {
    let inv = a
        .last()
        .unwrap()
        .inv_mod(m)
        .expect("unit leading coefficient");
    a.iter().map(|c| c.mul_mod(&inv, m)).collect()
}

/// Division by a monic `b` over `Q[x]/(m)`.
fn div_rem_y(a: &[QPoly], b: &[QPoly], m: &QPoly) -> (YPoly, YPoly) {
    let mut r: YPoly = a.to_vec();
    let db = b.len() - 1;
    let mut q = vec![Poly::zero(Rationals); a.len().saturating_sub(db).max(1)];
    loop {
        r = trim(r);
        if r.len() < b.len() {
            return (trim(q), r);
        }
        let k = r.len() - 1 - db;
        let c = r.last().unwrap().clone();
        q[k] = q[k].add(&c);
        for (j, bj) in b.iter().enumerate() {
            r[k + j] = r[k + j].sub(&c.mul_mod(bj, m)).rem(m);
        }
    }
}

/// Gcd of `a` and `b` over `Q[x]/(m)` for squarefree `m`, as a list of
/// `(m_k, g_k)` with `Π m_k = m` (up to dropped constant factors) and `g_k`
/// monic or empty (both inputs vanish identically over `m_k`).
fn gcd_split(a: YPoly, b: YPoly, m: QPoly) -> Vec<(QPoly, YPoly)> {
    let mut out = Vec::new();
    let mut stack = vec![(m, a, b)];
    while let Some((m, a, b)) = stack.pop() {
        if m.is_constant() {
            continue;
        }
        let a = match make_unit_lc(reduce_y(&a, &m), &m) {
            Unit::Ok(a) => a,
            Unit::Split(m1, m2) => {
                stack.push((m1, a.clone(), b.clone()));
                stack.push((m2, a, b));
                continue;
            }
        };
        let b = match make_unit_lc(reduce_y(&b, &m), &m) {
            Unit::Ok(b) => b,
            Unit::Split(m1, m2) => {
                stack.push((m1, a.clone(), b.clone()));
                stack.push((m2, a, b));
                continue;
            }
        };
        if b.is_empty() {
            let g = if a.is_empty() { a } else { monic_y(&a, &m) };
            out.push((m, g));
            continue;
        }
        if a.is_empty() || a.len() < b.len() {
            stack.push((m, b, a));
            continue;
        }
        let b = monic_y(&b, &m);
        let (_, r) = div_rem_y(&a, &b, &m);
        stack.push((m, b, r));
    }
    out
}

fn rows_of(p: &BiPoly<Rationals>) -> YPoly {
    p.rows().to_vec()
}

fn derivative_y(a: &[QPoly]) -> YPoly {
    trim(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(j, c)| c.scale(&BigRational::from_integer((j as i64).into())))
            .collect(),
    )
}

enum Attempt {
    Done(AffineSolution),
    Retry,
}

fn random_combination(polys: &[BiPoly<Rationals>], rng: &mut impl Rng) -> BiPoly<Rationals> {
    polys.iter().fold(BiPoly::zero(Rationals), |acc, p| {
        acc.add(&p.scale(&BigRational::from_integer(rng.gen_range(1..=29i64).into())))
    })
}

/// Squarefree polynomial in `x` whose roots contain the `x`-coordinates of
/// all common zeros; `None` if the random combinations share a factor.
pub fn eliminant(polys: &[BiPoly<Rationals>], rng: &mut impl Rng) -> Option<QPoly> {
    let mut acc: Option<QPoly> = None;
    for _ in 0..2 {
        let a = random_combination(polys, rng);
        let b = random_combination(polys, rng);
        if a.is_zero() || b.is_zero() {
            return None;
        }
        let r = a.resultant_y_int(&b);
        if r.is_zero() {
            return None;
        }
        acc = Some(match acc {
            None => r,
            Some(g) => g.gcd(&r),
        });
    }
    acc.map(|g| g.squarefree_part().monic())
}

fn try_shear(
    polys: &[BiPoly<Rationals>],
    lambda: &BigRational,
    rng: &mut impl Rng,
) -> Result<Attempt, PlanemapError> {
    let sheared: Vec<BiPoly<Rationals>> = polys.iter().map(|p| p.shear(lambda)).collect();
    if polys.len() == 1 {
        return Err(PlanemapError::CommonComponent);
    }
    let Some(m) = eliminant(&sheared, rng) else {
        return Ok(Attempt::Retry);
    };
    if m.is_constant() {
        return Ok(Attempt::Done(AffineSolution::default()));
    }

    let mut components = vec![(m, rows_of(&sheared[0]))];
    for p in &sheared[1..] {
        let b = rows_of(p);
        components = components
            .into_iter()
            .flat_map(|(mk, g)| gcd_split(g, b.clone(), mk))
            .collect();
    }

    let mut solved: Vec<(QPoly, QPoly)> = Vec::new();
    for (mk, g) in components {
        if g.is_empty() {
            return Err(PlanemapError::CommonComponent);
        }
        match g.len() {
            1 => continue,
            2 => solved.push((mk.clone(), g[0].neg().rem(&mk))),
            _ => {
                // Reduce to the squarefree part in y; a multiple root can
                // come from a singular base point rather than a bad shear.
                for (mj, h) in gcd_split(g.clone(), derivative_y(&g), mk) {
                    let (q, _) = div_rem_y(&reduce_y(&g, &mj), &h, &mj);
                    let q = monic_y(&q, &mj);
                    if q.len() != 2 {
                        return Ok(Attempt::Retry);
                    }
                    solved.push((mj.clone(), q[0].neg().rem(&mj)));
                }
            }
        }
    }

    let mut out = AffineSolution::default();
    for (mk, y) in solved {
        let roots = rational_roots(&mk);
        let mut rest = mk.monic();
        for a in &roots {
            let yv = y.eval(a);
            out.rational.push((a + lambda * &yv, yv));
            rest = rest
                .div_exact(&Poly::linear_root(Rationals, a))
                .expect("root divides");
        }
        if !rest.is_constant() {
            let theta = Poly::monomial(Rationals, BigRational::one(), 1);
            let y = y.rem(&rest);
            let x = theta.add(&y.scale(lambda)).rem(&rest);
            out.clusters.push((rest, x, y));
        }
    }
    for (m, x, y) in &out.clusters {
        if polys.iter().any(|p| !eval_mod(p, x, y, m).is_zero()) {
            return Err(PlanemapError::Internal(
                "cluster does not satisfy the system".into(),
            ));
        }
    }
    for (x, y) in &out.rational {
        if polys.iter().any(|p| !p.eval(x, y).is_zero()) {
            return Err(PlanemapError::Internal(
                "rational solution does not satisfy the system".into(),
            ));
        }
    }
    out.rational.sort();
    Ok(Attempt::Done(out))
}

/// Common zeros in `Q̄²` of finitely many polynomials without a common factor.
pub fn solve_affine(
    polys: &[BiPoly<Rationals>],
    rng: &mut impl Rng,
) -> Result<AffineSolution, PlanemapError> {
    let polys: Vec<BiPoly<Rationals>> = polys.iter().filter(|p| !p.is_zero()).cloned().collect();
    if polys.is_empty() {
        return Err(PlanemapError::CommonComponent);
    }
    if polys.iter().any(|p| p.total_degree() == Some(0)) {
        return Ok(AffineSolution::default());
    }
    for attempt in 0..SHEAR_ATTEMPTS {
        let lambda = BigRational::from_integer(
            if attempt == 0 {
                0
            } else {
                rng.gen_range(-25..=25i64)
            }
            .into(),
        );
        if let Attempt::Done(s) = try_shear(&polys, &lambda, rng)? {
            return Ok(s);
        }
    }
    Err(PlanemapError::Internal(
        "no separating coordinate found".into(),
    ))
}

/// Base locus of a map: common zeros of its three forms in `P²(Q̄)`.
pub fn base_locus(map: &PlaneRationalMap, rng: &mut impl Rng) -> Result<BaseLocus, PlanemapError> {
    let forms: Vec<_> = map.forms().iter().filter(|f| !f.is_zero()).collect();
    let mut points = Vec::new();
    if map.algebraic_degree() == 0 {
        return Ok(BaseLocus {
            points,
            complete_over_closure: true,
        });
    }
    let one = BigRational::one();
    let zero = BigRational::zero();

    let affine: Vec<BiPoly<Rationals>> = forms.iter().map(|f| f.dehomogenize(2)).collect();
    let sol = solve_affine(&affine, rng)?;
    for (x, y) in sol.rational {
        points.push(BasePoint::Rational([x, y, one.clone()]));
    }
    for (m, x, y) in sol.clusters {
        points.push(cluster(m, [x, y, Poly::one(Rationals)]));
    }

    // The line x2 = 0, chart x1 = 1.
    let g = forms.iter().fold(Poly::zero(Rationals), |acc, f| {
        acc.gcd(&univariate_from_form(
            f,
            0,
            &[(1, one.clone()), (2, zero.clone())],
        ))
    });
    if g.is_zero() {
        return Err(PlanemapError::CommonComponent);
    }
    if !g.is_constant() {
        let g = g.squarefree_part().monic();
        let mut rest = g.clone();
        for t in rational_roots(&g) {
            rest = rest
                .div_exact(&Poly::linear_root(Rationals, &t))
                .expect("root divides");
            points.push(BasePoint::Rational([t, one.clone(), zero.clone()]));
        }
        if !rest.is_constant() {
            let theta = Poly::monomial(Rationals, one.clone(), 1);
            points.push(cluster(
                rest,
                [theta, Poly::one(Rationals), Poly::zero(Rationals)],
            ));
        }
    }

    let corner = [one.clone(), zero.clone(), zero.clone()];
    if forms.iter().all(|f| f.eval(&corner).is_zero()) {
        points.push(BasePoint::Rational(corner));
    }
    Ok(BaseLocus {
        points,
        complete_over_closure: true,
    })
}

fn cluster(m: QPoly, coordinates: [QPoly; 3]) -> BasePoint {
    let irreducible = certify_irreducible(&m);
    BasePoint::Cluster(AlgebraicCluster {
        defining_polynomial: m,
        irreducible,
        coordinates,
    })
}

/// Whether every form vanishes at `p`.
pub fn is_base_point(map: &PlaneRationalMap, p: &[BigRational; 3]) -> bool {
    map.forms().iter().all(|f| f.eval(p).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::field::rat;
    use crate::planemaps::parse_map;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(7)
    }

    fn texts(b: &BaseLocus) -> Vec<String> {
        b.rational_points().iter().map(format_point).collect()
    }

    #[test]
    fn standard_examples() {
        let mut r = rng();
        let ex = parse_map("x0*x2 + x1^2, x1*x2 + x0^2, x0^2 + x1^2").unwrap();
        let b = base_locus(&ex, &mut r).unwrap();
        assert_eq!(texts(&b), vec!["[0 : 0 : 1]"]);
        assert_eq!(b.geometric_count(), 1);
        assert!(base_locus(&parse_map("x0^2, x1^2, x2^2").unwrap(), &mut r)
            .unwrap()
            .is_empty());
        assert!(base_locus(&PlaneRationalMap::identity(), &mut r)
            .unwrap()
            .is_empty());
        let cremona = base_locus(&parse_map("x1*x2, x0*x2, x0*x1").unwrap(), &mut r).unwrap();
        let mut t = texts(&cremona);
        t.sort();
        assert_eq!(t, vec!["[0 : 0 : 1]", "[0 : 1 : 0]", "[1 : 0 : 0]"]);
    }

    #[test]
    fn conjugate_points() {
        // Quadratic map through the two points x0^2 + x1^2 = 0 on x2 = 0 and [0:0:1].
        let mut r = rng();
        let m = parse_map("x0^2 + x1^2, x0*x2, x1*x2").unwrap();
        let b = base_locus(&m, &mut r).unwrap();
        assert_eq!(b.geometric_count(), 3);
        assert_eq!(texts(&b), vec!["[0 : 0 : 1]"]);
        let c = &b.clusters()[0];
        assert_eq!(c.defining_polynomial.deg0(), 2);
        assert_eq!(c.irreducible, Some(true));
    }

    #[test]
    fn singular_base_point() {
        // A de Jonquieres-type cubic with a double base point at the origin.
        let mut r = rng();
        let m = parse_map("x0*(x0^2 + x1*x2), x1*(x0^2 + x1*x2), x0^2*x2 + x1^3").unwrap();
        let b = base_locus(&m, &mut r).unwrap();
        assert!(b.rational_points().contains(&[rat(0), rat(0), rat(1)]));
        for p in b.rational_points() {
            assert!(is_base_point(&m, &p));
        }
    }
}
