//! Rational self-maps of the plane given by three coprime forms.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::arith::expr::{self, SparsePoly};
use crate::arith::PrimeField;

use super::bipoly::BiPoly;
use super::form::{FpForm, HomogeneousForm};
use super::PlanemapError;

/// `[f0 : f1 : f2]` with `gcd(f0, f1, f2) = 1`, scaled to primitive integer
/// coefficients whose first printed coefficient is positive.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PlaneRationalMap {
    forms: [HomogeneousForm; 3],
    degree: u32,
}

const VARS: [&str; 3] = ["x0", "x1", "x2"];

impl PlaneRationalMap {
    /// Builds a map, removing common factors and fixing the scaling.
    pub fn new(forms: [HomogeneousForm; 3]) -> Result<Self, PlanemapError> {
        let nonzero: Vec<&HomogeneousForm> = forms.iter().filter(|f| !f.is_zero()).collect();
        let Some(first) = nonzero.first() else {
            return Err(PlanemapError::AllZero);
        };
        let d = first.degree();
        if nonzero.iter().any(|f| f.degree() != d) {
            return Err(PlanemapError::DegreeMismatch(
                forms.iter().map(|f| f.degree()).collect(),
            ));
        }

        let k = nonzero.iter().map(|f| f.valuation(2)).min().unwrap_or(0);
        let reduced: Vec<HomogeneousForm> = forms
            .iter()
            .map(|f| {
                if f.is_zero() {
                    HomogeneousForm::zero(d - k)
                } else {
                    f.div_var_power(2, k)
                }
            })
            .collect();
        let affine: Vec<BiPoly<crate::arith::Rationals>> =
            reduced.iter().map(|f| f.dehomogenize(2)).collect();
        let g = affine
            .iter()
            .filter(|p| !p.is_zero())
            .fold(BiPoly::zero(crate::arith::Rationals), |acc, p| acc.gcd(p));
        let e = g.total_degree().unwrap_or(0) as u32;
        let new_degree = d - k - e;
        let divided: Vec<HomogeneousForm> = reduced
            .iter()
            .zip(&affine)
            .map(|(f, a)| {
                if f.is_zero() {
                    HomogeneousForm::zero(new_degree)
                } else if e == 0 {
                    f.clone()
                } else {
                    let q = a.div_exact(&g).expect("gcd divides every component");
                    HomogeneousForm::homogenize(&q, 2, new_degree)
                }
            })
            .collect();
        let forms: [HomogeneousForm; 3] = divided.try_into().expect("three forms");
        Ok(Self {
            forms: normalize_scaling(forms),
            degree: new_degree,
        })
    }

    pub fn forms(&self) -> &[HomogeneousForm; 3] {
        &self.forms
    }

    pub fn identity() -> Self {
        Self::new([
            HomogeneousForm::variable(0),
            HomogeneousForm::variable(1),
            HomogeneousForm::variable(2),
        ])
        .expect("identity")
    }

    /// Algebraic degree: the common degree of the normalized forms.
    pub fn algebraic_degree(&self) -> u32 {
        self.degree
    }

    /// Jacobian determinant `det(∂f_i/∂x_j)`, a form of degree `3(d - 1)`.
    pub fn jacobian_curve(&self) -> Result<HomogeneousForm, PlanemapError> {
        let j = self.jacobian_determinant();
        if j.is_zero() {
            return Err(PlanemapError::NotDominant);
        }
        Ok(j)
    }

    fn jacobian_determinant(&self) -> HomogeneousForm {
        if self.degree == 0 {
            return HomogeneousForm::zero(0);
        }
        let p: Vec<Vec<HomogeneousForm>> = self
            .forms
            .iter()
            .map(|f| (0..3).map(|j| f.partial(j)).collect())
            .collect();
        let minor = |a: usize, b: usize| p[1][a].mul(&p[2][b]).sub(&p[1][b].mul(&p[2][a]));
        p[0][0]
            .mul(&minor(1, 2))
            .sub(&p[0][1].mul(&minor(0, 2)))
            .add(&p[0][2].mul(&minor(0, 1)))
    }

    /// Generic rank of the Jacobian, tested at `3(d - 1) + 1` random points of
    /// a random line (the determinant restricted to the line has degree at
    /// most `3(d - 1)`). A vanishing sample is confirmed symbolically.
    pub fn dominance_check(&self, rng: &mut impl Rng) -> bool {
        if self.degree == 0 {
            return false;
        }
        let partials: Vec<Vec<HomogeneousForm>> = self
            .forms
            .iter()
            .map(|f| (0..3).map(|j| f.partial(j)).collect())
            .collect();
        let a: [i64; 3] = std::array::from_fn(|_| rng.gen_range(-20..=20));
        let b: [i64; 3] = std::array::from_fn(|_| rng.gen_range(-20..=20));
        let samples = 3 * (self.degree as i64 - 1) + 1;
        for s in 0..samples {
            let pt: [BigRational; 3] =
                std::array::from_fn(|i| BigRational::from_integer((a[i] + s * b[i]).into()));
            let m: Vec<Vec<BigRational>> = partials
                .iter()
                .map(|row| row.iter().map(|f| f.eval(&pt)).collect())
                .collect();
            let det = &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1])
                - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
                + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0]);
            if !det.is_zero() {
                return true;
            }
        }
        !self.jacobian_determinant().is_zero()
    }

    /// `self ∘ other`: substitutes `other` into `self`.
    pub fn compose(&self, other: &PlaneRationalMap) -> Result<PlaneRationalMap, PlanemapError> {
        let composed: Vec<HomogeneousForm> = self
            .forms
            .iter()
            .map(|f| f.substitute(&other.forms))
            .collect();
        if composed.iter().all(|f| f.is_zero()) {
            return Err(PlanemapError::AllZero);
        }
        Self::new(composed.try_into().expect("three forms"))
    }

    /// `C ∘ F` and the class multiple `d · deg C` of `f*[C]` in `N¹(P²) = Z·H`.
    pub fn pullback_on_classes(
        &self,
        c: &HomogeneousForm,
    ) -> Result<(HomogeneousForm, u32), PlanemapError> {
        if c.is_zero() {
            return Err(PlanemapError::ZeroForm);
        }
        let pulled = c.substitute(&self.forms);
        Ok((pulled, self.degree * c.degree()))
    }

    /// Image of a point; `None` at a base point.
    pub fn apply(&self, p: &[BigRational; 3]) -> Option<[BigRational; 3]> {
        let v: [BigRational; 3] = std::array::from_fn(|i| self.forms[i].eval(p));
        (!v.iter().all(|c| c.is_zero())).then_some(v)
    }

    pub fn reduce(&self, field: PrimeField) -> Option<[FpForm; 3]> {
        let v: Vec<FpForm> = self
            .forms
            .iter()
            .map(|f| f.reduce(field))
            .collect::<Option<_>>()?;
        Some(v.try_into().expect("three forms"))
    }

    /// The map with every form multiplied by the same nonzero constant
    /// (normalization undoes the scaling).
    pub fn scaled(&self, s: &BigRational) -> Result<Self, PlanemapError> {
        Self::new(std::array::from_fn(|i| self.forms[i].scale(s)))
    }

    pub fn to_text(&self) -> String {
        self.forms
            .iter()
            .map(|f| f.to_text())
            .collect::<Vec<_>>()
            .join(", ")
    }
}

impl fmt::Display for PlaneRationalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for PlaneRationalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PlaneRationalMap[d={}]({})", self.degree, self.to_text())
    }
}

impl Serialize for PlaneRationalMap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_text())
    }
}

impl<'de> Deserialize<'de> for PlaneRationalMap {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_map(&s).map_err(serde::de::Error::custom)
    }
}

/// Common rational scaling to primitive integer coefficients, with the first
/// coefficient (in printing order) of the first nonzero form positive.
fn normalize_scaling(forms: [HomogeneousForm; 3]) -> [HomogeneousForm; 3] {
    let mut den = BigInt::one();
    for f in &forms {
        den = den.lcm(&f.denominator_lcm());
    }
    let mut content = BigInt::zero();
    for f in &forms {
        for c in f.terms().values() {
            content = content.gcd(&(c * BigRational::from_integer(den.clone())).to_integer());
        }
    }
    let lead_negative = forms
        .iter()
        .find(|f| !f.is_zero())
        .and_then(|f| f.terms().iter().next_back())
        .is_some_and(|(_, c)| c.is_negative());
    let mut s = BigRational::new(den, content);
    if lead_negative {
        s = -s;
    }
    std::array::from_fn(|i| forms[i].scale(&s))
}

fn to_form(p: &SparsePoly, component: usize) -> Result<Option<HomogeneousForm>, PlanemapError> {
    let mut degrees = p.total_degrees();
    let Some(d) = degrees.next() else {
        return Ok(None);
    };
    if let Some((e, _)) = p.terms().iter().find(|(e, _)| e.iter().sum::<u32>() != d) {
        return Err(PlanemapError::Inhomogeneous {
            component,
            degrees: (d, e.iter().sum()),
        });
    }
    let form = HomogeneousForm::new(
        d,
        p.terms()
            .iter()
            .map(|(e, c)| ([e[0], e[1], e[2]], BigRational::from_integer(c.clone()))),
    )
    .expect("checked homogeneous");
    Ok(Some(form))
}

/// Parses `"f0, f1, f2"` in the polynomial grammar of [`crate::arith::expr`].
pub fn parse_map(text: &str) -> Result<PlaneRationalMap, PlanemapError> {
    let polys = expr::parse_list(text, &VARS)?;
    if polys.len() != 3 {
        return Err(PlanemapError::ComponentCount(polys.len()));
    }
    let forms: Vec<Option<HomogeneousForm>> = polys
        .iter()
        .enumerate()
        .map(|(i, p)| to_form(p, i))
        .collect::<Result<_, _>>()?;
    let degrees: Vec<u32> = forms.iter().flatten().map(|f| f.degree()).collect();
    let Some(&d) = degrees.first() else {
        return Err(PlanemapError::AllZero);
    };
    if degrees.iter().any(|&e| e != d) {
        return Err(PlanemapError::DegreeMismatch(degrees));
    }
    let forms: [HomogeneousForm; 3] =
        std::array::from_fn(|i| forms[i].clone().unwrap_or_else(|| HomogeneousForm::zero(d)));
    PlaneRationalMap::new(forms)
}

/// Parses a single form (for curves to pull back).
pub fn parse_form(text: &str) -> Result<HomogeneousForm, PlanemapError> {
    let p = expr::parse_expr(text, &VARS)?;
    to_form(&p, 0)?.ok_or(PlanemapError::ZeroForm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn parse_examples() {
        let ex = parse_map("x0*x2 + x1^2, x1*x2 + x0^2, x0^2 + x1^2").unwrap();
        assert_eq!(ex.algebraic_degree(), 2);
        assert_eq!(
            parse_map("x0, x1, x2").unwrap(),
            PlaneRationalMap::identity()
        );
        assert_eq!(parse_map("x0^2, x1^2, x2^2").unwrap().algebraic_degree(), 2);
        assert_eq!(
            parse_map("x0^2, x0*x1, x0*x2").unwrap(),
            PlaneRationalMap::identity()
        );
        assert_eq!(
            parse_map("-2*x0, -2*x1, -2*x2").unwrap(),
            PlaneRationalMap::identity()
        );
        assert_eq!(
            parse_map("(x0 + x1)*x2^2, (x0 + x1)*x1*x2, (x0 + x1)*x0^2")
                .unwrap()
                .to_text(),
            "x2^2, x1*x2, x0^2"
        );
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            parse_map("x0 + x1^2, x1, x2"),
            Err(PlanemapError::Inhomogeneous { component: 0, .. })
        ));
        assert!(matches!(
            parse_map("x0^2, x1, x2"),
            Err(PlanemapError::DegreeMismatch(_))
        ));
        assert!(matches!(
            parse_map("x0, x1"),
            Err(PlanemapError::ComponentCount(2))
        ));
        assert!(matches!(parse_map("0, 0, 0"), Err(PlanemapError::AllZero)));
        match parse_map("x0, x1, 2x2") {
            Err(PlanemapError::Parse(e)) => assert_eq!(e.position, 9),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn jacobian_and_dominance() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let sq = parse_map("x0^2, x1^2, x2^2").unwrap();
        assert_eq!(sq.jacobian_curve().unwrap().to_text(), "8*x0*x1*x2");
        assert!(sq.dominance_check(&mut rng));
        let id = PlaneRationalMap::identity();
        assert_eq!(id.jacobian_curve().unwrap().degree(), 0);
        let flat = parse_map("x0^2, x1^2, (x0 + x1)^2").unwrap();
        assert!(!flat.dominance_check(&mut rng));
        assert_eq!(flat.jacobian_curve(), Err(PlanemapError::NotDominant));
    }

    #[test]
    fn composition() {
        let sq = parse_map("x0^2, x1^2, x2^2").unwrap();
        let four = sq.compose(&sq).unwrap();
        assert_eq!(four, parse_map("x0^4, x1^4, x2^4").unwrap());
        let id = PlaneRationalMap::identity();
        assert_eq!(id.compose(&sq).unwrap(), sq);
        assert_eq!(sq.compose(&id).unwrap(), sq);
        // The standard Cremona involution squares to the identity after
        // removing the common factor.
        let cremona = parse_map("x1*x2, x0*x2, x0*x1").unwrap();
        assert_eq!(cremona.compose(&cremona).unwrap(), id);
    }

    #[test]
    fn pullbacks() {
        let sq = parse_map("x0^2, x1^2, x2^2").unwrap();
        let (f, k) = sq.pullback_on_classes(&parse_form("x0").unwrap()).unwrap();
        assert_eq!((f.to_text().as_str(), k), ("x0^2", 2));
        let ex = parse_map("x0*x2 + x1^2, x1*x2 + x0^2, x0^2 + x1^2").unwrap();
        let (g, k) = ex
            .pullback_on_classes(&parse_form("x0 + 2*x1 - x2").unwrap())
            .unwrap();
        assert_eq!((g.degree(), k), (2, 2));
        let origin = [BigRational::zero(), BigRational::zero(), BigRational::one()];
        assert!(g.eval(&origin).is_zero());
        let conic = parse_form("x0^2 + x1*x2").unwrap();
        assert_eq!(
            PlaneRationalMap::identity()
                .pullback_on_classes(&conic)
                .unwrap()
                .0,
            conic
        );
    }
}
