//! Self-maps of `P¹` over the rationals and the preimage containment test
//! `h⁻¹(Δ) ⊆ Δ`.
//!
//! Points are `[x : y]` with affine coordinate `t = x/y`; `∞ = [1 : 0]`. A map
//! `t ↦ P(t)/Q(t)` of degree `d = max(deg P, deg Q)` has the binary forms
//! `h_0 = y^d P(x/y)` and `h_1 = y^d Q(x/y)`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::expr::{self, ParseError};
use crate::arith::field::fmt_rational;
use crate::arith::roots::{rational_roots, QPoly};
use crate::arith::{Poly, Rationals};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum P1Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("critical set is empty")]
    EmptyDelta,
    #[error("map is constant")]
    Constant,
    #[error("denominator is zero")]
    ZeroDenominator,
    #[error("cannot read point '{0}' (expected an integer, p/q or inf)")]
    BadPoint(String),
}

/// A point of `P¹(Q)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum P1Point {
    Finite(BigRational),
    Infinity,
}

impl fmt::Display for P1Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            P1Point::Finite(q) => f.write_str(&fmt_rational(q)),
            P1Point::Infinity => f.write_str("inf"),
        }
    }
}

impl P1Point {
    pub fn parse(s: &str) -> Result<Self, P1Error> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") || s == "∞" {
            return Ok(P1Point::Infinity);
        }
        s.parse::<BigRational>()
            .map(P1Point::Finite)
            .map_err(|_| P1Error::BadPoint(s.to_string()))
    }
}

/// Finite set of points of `P¹(Q)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CriticalSet {
    finite: Vec<BigRational>,
    infinity: bool,
}

impl CriticalSet {
    pub fn new(points: impl IntoIterator<Item = P1Point>) -> Self {
        let mut set = Self::default();
        for p in points {
            match p {
                P1Point::Finite(q) => set.finite.push(q),
                P1Point::Infinity => set.infinity = true,
            }
        }
        set.finite.sort();
        set.finite.dedup();
        set
    }

    /// Reads a comma-separated list such as `0, 1, -1/2, inf`.
    pub fn parse(s: &str) -> Result<Self, P1Error> {
        let pts = s
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(P1Point::parse)
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::new(pts))
    }

    pub fn finite(&self) -> &[BigRational] {
        &self.finite
    }

    pub fn contains_infinity(&self) -> bool {
        self.infinity
    }

    pub fn len(&self) -> usize {
        self.finite.len() + usize::from(self.infinity)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn points(&self) -> Vec<P1Point> {
        let mut v: Vec<P1Point> = self.finite.iter().cloned().map(P1Point::Finite).collect();
        if self.infinity {
            v.push(P1Point::Infinity);
        }
        v
    }

    /// `Π (t - δ)` over the finite points.
    pub fn defining_polynomial(&self) -> QPoly {
        self.finite.iter().fold(Poly::one(Rationals), |acc, d| {
            acc.mul(&Poly::linear_root(Rationals, d))
        })
    }
}

/// `t ↦ P(t)/Q(t)` with `gcd(P, Q) = 1`, degree at least 1.
#[derive(Debug, Clone, PartialEq)]
pub struct P1SelfMap {
    num: QPoly,
    den: QPoly,
    degree: usize,
}

impl P1SelfMap {
    pub fn new(num: QPoly, den: QPoly) -> Result<Self, P1Error> {
        if den.is_zero() {
            return Err(P1Error::ZeroDenominator);
        }
        let g = num.gcd(&den);
        let num = num.div_exact(&g).expect("gcd divides");
        let den = den.div_exact(&g).expect("gcd divides");
        let degree = num.deg0().max(den.deg0());
        if degree == 0 {
            return Err(P1Error::Constant);
        }
        Ok(Self { num, den, degree })
    }

    /// Polynomial map `t ↦ P(t)`.
    pub fn polynomial(p: QPoly) -> Result<Self, P1Error> {
        Self::new(p, Poly::one(Rationals))
    }

    /// Reads `P` or `P/Q` with `P`, `Q` integer polynomial expressions in `t`.
    pub fn parse(s: &str) -> Result<Self, P1Error> {
        let mut depth = 0i32;
        let mut slash = None;
        for (i, c) in s.char_indices() {
            match c {
                '(' => depth += 1,
                ')' => depth -= 1,
                '/' if depth == 0 => {
                    if slash.is_some() {
                        return Err(ParseError {
                            position: i,
                            expected: "at most one top-level '/'".into(),
                            found: "'/'".into(),
                        }
                        .into());
                    }
                    slash = Some(i);
                }
                _ => {}
            }
        }
        let univariate = |text: &str, offset: usize| -> Result<QPoly, P1Error> {
            let sp = expr::parse_expr(text, &["t"]).map_err(|mut e| {
                e.position += offset;
                e
            })?;
            let deg = sp.total_degrees().max().unwrap_or(0) as usize;
            let mut coeffs = vec![BigRational::zero(); deg + 1];
            for (e, c) in sp.terms() {
                coeffs[e[0] as usize] = BigRational::from_integer(c.clone());
            }
            Ok(Poly::new(Rationals, coeffs))
        };
        match slash {
            None => Self::new(univariate(s, 0)?, Poly::one(Rationals)),
            Some(i) => Self::new(univariate(&s[..i], 0)?, univariate(&s[i + 1..], i + 1)?),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn numerator(&self) -> &QPoly {
        &self.num
    }

    pub fn denominator(&self) -> &QPoly {
        &self.den
    }

    /// Image of a point.
    pub fn apply(&self, p: &P1Point) -> P1Point {
        let (a, b) = match p {
            P1Point::Finite(t) => (self.num.eval(t), self.den.eval(t)),
            P1Point::Infinity => (self.num.coeff(self.degree), self.den.coeff(self.degree)),
        };
        if b.is_zero() {
            P1Point::Infinity
        } else {
            P1Point::Finite(a / b)
        }
    }

    /// Dehomogenized preimage form `δ_1 h_0 - δ_0 h_1` of a point; its
    /// multiplicity at `∞` is `degree - deg`.
    pub fn preimage_polynomial(&self, p: &P1Point) -> QPoly {
        match p {
            P1Point::Finite(d) => self.num.sub(&self.den.scale(d)),
            P1Point::Infinity => self.den.neg(),
        }
    }
}

impl fmt::Display for P1SelfMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() {
            let c = self.den.coeff(0);
            write!(f, "{}", format_qpoly(&self.num.scale(&c.recip()), "t"))
        } else {
            write!(
                f,
                "({})/({})",
                format_qpoly(&self.num, "t"),
                format_qpoly(&self.den, "t")
            )
        }
    }
}

/// Human-readable univariate polynomial with rational coefficients.
pub fn format_qpoly(p: &QPoly, var: &str) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, c) in p.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let a = c.abs();
        let mono = match k {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{k}"),
        };
        let body = if k == 0 {
            fmt_rational(&a)
        } else if a.is_one() {
            mono
        } else {
            format!("{}*{mono}", fmt_rational(&a))
        };
        if out.is_empty() {
            out = if neg { format!("-{body}") } else { body };
        } else {
            out.push_str(if neg { " - " } else { " + " });
            out.push_str(&body);
        }
    }
    out
}

/// Preimage of one point of `Δ`, split into rational roots and the rest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreimageFactorization {
    pub point: String,
    pub polynomial: String,
    pub infinity_multiplicity: usize,
    /// `(root, multiplicity)` for every rational root.
    pub rational_roots: Vec<(String, usize)>,
    /// Cofactor without rational roots (`1` when it splits over the rationals).
    pub residual: String,
    pub contained: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreimageReport {
    pub map: String,
    pub delta: Vec<String>,
    pub contained: bool,
    pub preimages: Vec<PreimageFactorization>,
}

/// `h⁻¹(Δ) ⊆ Δ`, decided without root finding: the product of all preimage
/// forms has radical dividing the defining polynomial of `Δ`, and vanishes at
/// `∞` only if `∞ ∈ Δ`.
pub fn preimage_containment(h: &P1SelfMap, delta: &CriticalSet) -> Result<bool, P1Error> {
    if delta.is_empty() {
        return Err(P1Error::EmptyDelta);
    }
    let mut product = Poly::one(Rationals);
    for p in delta.points() {
        product = product.mul(&h.preimage_polynomial(&p));
    }
    let at_infinity = h.degree * delta.len() - product.deg0();
    if at_infinity > 0 && !delta.contains_infinity() {
        return Ok(false);
    }
    Ok(product
        .squarefree_part()
        .divides(&delta.defining_polynomial()))
}

/// Containment verdict together with the factorization of each preimage.
pub fn preimage_report(h: &P1SelfMap, delta: &CriticalSet) -> Result<PreimageReport, P1Error> {
    let contained = preimage_containment(h, delta)?;
    let delta_poly = delta.defining_polynomial();
    let preimages = delta
        .points()
        .into_iter()
        .map(|p| {
            let poly = h.preimage_polynomial(&p);
            let infinity_multiplicity = h.degree - poly.deg0();
            let mut residual = poly.clone();
            let mut roots = Vec::new();
            for r in rational_roots(&poly) {
                let m = residual.root_multiplicity(&r);
                for _ in 0..m {
                    residual = residual
                        .div_exact(&Poly::linear_root(Rationals, &r))
                        .expect("root divides");
                }
                roots.push((r, m));
            }
            let residual = residual.monic();
            let contained = residual.is_constant()
                && (infinity_multiplicity == 0 || delta.contains_infinity())
                && poly.squarefree_part().divides(&delta_poly);
            PreimageFactorization {
                point: p.to_string(),
                polynomial: format_qpoly(&poly, "t"),
                infinity_multiplicity,
                rational_roots: roots
                    .into_iter()
                    .map(|(r, m)| (fmt_rational(&r), m))
                    .collect(),
                residual: format_qpoly(&residual, "t"),
                contained,
            }
        })
        .collect();
    Ok(PreimageReport {
        map: h.to_string(),
        delta: delta.points().iter().map(|p| p.to_string()).collect(),
        contained,
        preimages,
    })
}

/// The power map `t ↦ t^k`.
pub fn monomial_map(k: usize) -> P1SelfMap {
    P1SelfMap::polynomial(Poly::monomial(
        Rationals,
        BigRational::from_integer(BigInt::one()),
        k,
    ))
    .expect("degree >= 1")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn delta(s: &str) -> CriticalSet {
        CriticalSet::parse(s).unwrap()
    }

    #[test]
    fn squaring_examples() {
        let sq = P1SelfMap::parse("t^2").unwrap();
        assert_eq!(preimage_containment(&sq, &delta("0, inf")), Ok(true));
        assert_eq!(preimage_containment(&sq, &delta("0, 1, -1")), Ok(false));
        // Adding ∞ does not help: the preimage of -1 is still {±i}.
        assert_eq!(
            preimage_containment(&sq, &delta("0, 1, -1, inf")),
            Ok(false)
        );
        assert_eq!(
            preimage_containment(&sq, &delta("")),
            Err(P1Error::EmptyDelta)
        );
        assert_eq!(preimage_containment(&sq, &delta("0, 1")), Ok(false));
    }

    #[test]
    fn report_lists_factors() {
        let sq = monomial_map(2);
        let rep = preimage_report(&sq, &delta("0, 1, -1")).unwrap();
        assert!(!rep.contained);
        let minus_one = rep.preimages.iter().find(|p| p.point == "-1").unwrap();
        assert_eq!(minus_one.residual, "t^2 + 1");
        assert!(!minus_one.contained);
        let one = rep.preimages.iter().find(|p| p.point == "1").unwrap();
        assert_eq!(
            one.rational_roots,
            vec![("-1".to_string(), 1), ("1".to_string(), 1)]
        );
    }

    #[test]
    fn rational_maps_and_infinity() {
        // t ↦ 1/t swaps 0 and ∞.
        let inv = P1SelfMap::parse("1/t").unwrap();
        assert_eq!(
            inv.apply(&P1Point::Infinity),
            P1Point::Finite(BigRational::zero())
        );
        assert_eq!(preimage_containment(&inv, &delta("0")), Ok(false));
        assert_eq!(preimage_containment(&inv, &delta("0, inf")), Ok(true));
        let m = P1SelfMap::parse("(t^2 + 1)/(t - 1)").unwrap();
        assert_eq!(m.degree(), 2);
        assert_eq!(P1SelfMap::parse("(t^2 - 1)/(t - 1)").unwrap().degree(), 1);
        assert_eq!(P1SelfMap::parse("t/t"), Err(P1Error::Constant));
        assert!(matches!(
            P1SelfMap::parse("t/0"),
            Err(P1Error::ZeroDenominator)
        ));
        let e = P1SelfMap::parse("t^2/(t + )").unwrap_err();
        match e {
            P1Error::Parse(p) => assert_eq!(p.position, 9),
            other => panic!("{other:?}"),
        }
    }
}
