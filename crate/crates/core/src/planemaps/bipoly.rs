//! Dense bivariate polynomials `Σ c_{ij} x^i y^j`, stored as polynomials in
//! `y` whose coefficients are univariate polynomials in `x`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::linalg::bareiss_determinant;
use crate::arith::{Field, Poly, PrimeField, Rationals};

#[derive(Clone, PartialEq)]
pub struct BiPoly<F: Field> {
    field: F,
    /// `rows[j]` is the coefficient of `y^j`.
    rows: Vec<Poly<F>>,
}

impl<F: Field> std::fmt::Debug for BiPoly<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BiPoly{:?}", self.rows)
    }
}

impl<F: Field> BiPoly<F> {
    pub fn new(field: F, mut rows: Vec<Poly<F>>) -> Self {
        while rows.last().is_some_and(|r| r.is_zero()) {
            rows.pop();
        }
        Self { field, rows }
    }

    pub fn zero(field: F) -> Self {
        Self {
            field,
            rows: Vec::new(),
        }
    }

    pub fn from_terms(field: F, terms: impl IntoIterator<Item = ((u32, u32), F::Elem)>) -> Self {
        let mut dense: Vec<Vec<F::Elem>> = Vec::new();
        for ((i, j), c) in terms {
            let (i, j) = (i as usize, j as usize);
            if dense.len() <= j {
                dense.resize(j + 1, Vec::new());
            }
            if dense[j].len() <= i {
                dense[j].resize(i + 1, field.zero());
            }
            dense[j][i] = field.add(&dense[j][i], &c);
        }
        let rows = dense
            .into_iter()
            .map(|r| Poly::new(field.clone(), r))
            .collect();
        Self::new(field, rows)
    }

    /// Polynomial in `x` only.
    pub fn from_x(p: Poly<F>) -> Self {
        let field = p.field().clone();
        Self::new(field, vec![p])
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn rows(&self) -> &[Poly<F>] {
        &self.rows
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn deg_y(&self) -> Option<usize> {
        self.rows.len().checked_sub(1)
    }

    pub fn deg_x(&self) -> usize {
        self.rows
            .iter()
            .filter_map(|r| r.degree())
            .max()
            .unwrap_or(0)
    }

    pub fn total_degree(&self) -> Option<usize> {
        self.rows
            .iter()
            .enumerate()
            .filter_map(|(j, r)| r.degree().map(|d| d + j))
            .max()
    }

    pub fn row(&self, j: usize) -> Poly<F> {
        self.rows
            .get(j)
            .cloned()
            .unwrap_or_else(|| Poly::zero(self.field.clone()))
    }

    pub fn lc_y(&self) -> Poly<F> {
        self.rows
            .last()
            .cloned()
            .unwrap_or_else(|| Poly::zero(self.field.clone()))
    }

    pub fn terms(&self) -> Vec<((usize, usize), F::Elem)> {
        let mut out = Vec::new();
        for (j, r) in self.rows.iter().enumerate() {
            for (i, c) in r.coeffs().iter().enumerate() {
                if !self.field.is_zero(c) {
                    out.push(((i, j), c.clone()));
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.rows.len().max(other.rows.len());
        let rows = (0..n).map(|j| self.row(j).add(&other.row(j))).collect();
        Self::new(self.field.clone(), rows)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.rows.len().max(other.rows.len());
        let rows = (0..n).map(|j| self.row(j).sub(&other.row(j))).collect();
        Self::new(self.field.clone(), rows)
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        Self::new(
            self.field.clone(),
            self.rows.iter().map(|r| r.scale(c)).collect(),
        )
    }

    pub fn mul_x(&self, p: &Poly<F>) -> Self {
        Self::new(
            self.field.clone(),
            self.rows.iter().map(|r| r.mul(p)).collect(),
        )
    }

    /// Multiplies by `y^k`.
    pub fn shift_y(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut rows = vec![Poly::zero(self.field.clone()); k];
        rows.extend(self.rows.iter().cloned());
        Self::new(self.field.clone(), rows)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.field.clone());
        }
        let mut rows = vec![Poly::zero(self.field.clone()); self.rows.len() + other.rows.len() - 1];
        for (i, a) in self.rows.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.rows.iter().enumerate() {
                rows[i + j] = rows[i + j].add(&a.mul(b));
            }
        }
        Self::new(self.field.clone(), rows)
    }

    /// Specializes `x = a`, giving a polynomial in `y`.
    pub fn eval_x(&self, a: &F::Elem) -> Poly<F> {
        Poly::new(
            self.field.clone(),
            self.rows.iter().map(|r| r.eval(a)).collect(),
        )
    }

    /// Specializes `y = b`, giving a polynomial in `x`.
    pub fn eval_y(&self, b: &F::Elem) -> Poly<F> {
        let mut acc = Poly::zero(self.field.clone());
        for r in self.rows.iter().rev() {
            acc = acc.scale(b).add(r);
        }
        acc
    }

    pub fn eval(&self, a: &F::Elem, b: &F::Elem) -> F::Elem {
        self.eval_x(a).eval(b)
    }

    /// Exchanges the roles of `x` and `y`.
    pub fn swap_xy(&self) -> Self {
        let terms = self
            .terms()
            .into_iter()
            .map(|((i, j), c)| ((j as u32, i as u32), c));
        Self::from_terms(self.field.clone(), terms)
    }

    /// Substitutes `x ↦ x + λ y`.
    pub fn shear(&self, lambda: &F::Elem) -> Self {
        let f = &self.field;
        let lin = Self::from_terms(f.clone(), [((1, 0), f.one()), ((0, 1), lambda.clone())]);
        let mut powers = vec![Self::from_x(Poly::one(f.clone()))];
        let mut out = Self::zero(f.clone());
        for ((i, j), c) in self.terms() {
            while powers.len() <= i {
                let next = powers.last().unwrap().mul(&lin);
                powers.push(next);
            }
            out = out.add(&powers[i].shift_y(j).scale(&c));
        }
        out
    }

    /// Bound on the `x`-degree of `Res_y(self, other)` for the actual `y`-degrees.
    fn resultant_degree_bound(&self, other: &Self) -> usize {
        let (m, n) = (self.deg_y().unwrap_or(0), other.deg_y().unwrap_or(0));
        n * self.deg_x() + m * other.deg_x()
    }

    /// `Res_y(self, other)` as a polynomial in `x`, by evaluation at
    /// `0, 1, 2, ...` and interpolation. Both inputs must be nonzero.
    pub fn resultant_y(&self, other: &Self) -> Poly<F> {
        assert!(
            !self.is_zero() && !other.is_zero(),
            "resultant with zero polynomial"
        );
        let (m, n) = (self.deg_y().unwrap(), other.deg_y().unwrap());
        let bound = self.resultant_degree_bound(other);
        let f = &self.field;
        let xs: Vec<F::Elem> = (0..=bound as i64).map(|k| f.from_i64(k)).collect();
        let ys: Vec<F::Elem> = xs
            .iter()
            .map(|x| self.eval_x(x).resultant_formal(m, &other.eval_x(x), n))
            .collect();
        Poly::interpolate(f.clone(), &xs, &ys)
    }

    /// Division with remainder in `y` by a polynomial whose leading
    /// coefficient in `y` is a nonzero constant.
    pub fn div_rem_monic_y(&self, d: &Self) -> (Self, Self) {
        let f = &self.field;
        let lc = d.lc_y();
        assert!(
            lc.is_constant() && !lc.is_zero(),
            "divisor must have constant leading coefficient in y"
        );
        let inv = f.inv(&lc.coeff(0));
        let dy = d.deg_y().unwrap();
        let mut rem = self.clone();
        let mut quo = Self::zero(f.clone());
        while let Some(ry) = rem.deg_y() {
            if ry < dy {
                break;
            }
            let c = rem.lc_y().scale(&inv);
            let term = Self::from_x(c).shift_y(ry - dy);
            quo = quo.add(&term);
            rem = rem.sub(&term.mul(d));
        }
        (quo, rem)
    }
}

const COPRIME_CHECK_PRIME: u64 = 1_000_003;

impl BiPoly<Rationals> {
    /// Integer multiple with content 1 (in both variables).
    pub fn primitive_integer(&self) -> Self {
        let mut den = BigInt::one();
        let mut g = BigInt::zero();
        for (_, c) in self.terms() {
            den = den.lcm(c.denom());
        }
        for (_, c) in self.terms() {
            g = g.gcd(&(c * BigRational::from_integer(den.clone())).to_integer());
        }
        if g.is_zero() {
            return self.clone();
        }
        self.scale(&BigRational::new(den, g))
    }

    /// `Res_y` for integer-coefficient inputs using fraction-free determinants.
    /// The result is a polynomial in `x` with the same roots (and
    /// multiplicities) as the exact resultant, up to a nonzero constant.
    pub fn resultant_y_int(&self, other: &Self) -> Poly<Rationals> {
        assert!(
            !self.is_zero() && !other.is_zero(),
            "resultant with zero polynomial"
        );
        let a = self.primitive_integer();
        let b = other.primitive_integer();
        let (m, n) = (a.deg_y().unwrap(), b.deg_y().unwrap());
        let bound = a.resultant_degree_bound(&b);
        let xs: Vec<BigRational> = (0..=bound as i64)
            .map(|k| BigRational::from_integer(k.into()))
            .collect();
        let ys: Vec<BigRational> = xs
            .iter()
            .map(|x| {
                let pa = a.eval_x(x);
                let pb = b.eval_x(x);
                BigRational::from_integer(sylvester_int(&pa, m, &pb, n))
            })
            .collect();
        Poly::interpolate(Rationals, &xs, &ys)
    }

    /// Gcd of the `x`-coefficients.
    pub fn content_x(&self) -> Poly<Rationals> {
        self.rows
            .iter()
            .fold(Poly::zero(Rationals), |acc, r| acc.gcd(r))
    }

    pub fn primitive_part_x(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let c = self.content_x();
        Self::new(
            Rationals,
            self.rows
                .iter()
                .map(|r| r.div_exact(&c).expect("content divides"))
                .collect(),
        )
    }

    /// Pseudo-remainder `lc(d)^k · self mod d` in `y`.
    pub fn pseudo_rem(&self, d: &Self) -> Self {
        let dy = d.deg_y().expect("nonzero divisor");
        let lc = d.lc_y();
        let mut rem = self.clone();
        while let Some(ry) = rem.deg_y() {
            if ry < dy {
                break;
            }
            let c = rem.lc_y();
            rem = rem.mul_x(&lc).sub(&d.mul_x(&c).shift_y(ry - dy));
        }
        rem
    }

    fn reduce(&self, field: PrimeField) -> Option<BiPoly<PrimeField>> {
        let rows = self
            .rows
            .iter()
            .map(|r| {
                r.coeffs()
                    .iter()
                    .map(|c| field.reduce(c))
                    .collect::<Option<Vec<u64>>>()
                    .map(|c| Poly::new(field, c))
            })
            .collect::<Option<Vec<_>>>()?;
        Some(BiPoly::new(field, rows))
    }

    /// Certifies that `self` and `other` have no common factor of positive
    /// degree in `y`: modulo a prime that keeps both `y`-degrees, a
    /// specialization `x = t` keeping both leading coefficients nonzero has
    /// coprime images. `false` means only "not certified".
    fn coprime_in_y(&self, other: &Self) -> bool {
        if self.deg_y() == Some(0) || other.deg_y() == Some(0) {
            return true;
        }
        let field = PrimeField::new(COPRIME_CHECK_PRIME).expect("prime");
        let (Some(a), Some(b)) = (self.reduce(field), other.reduce(field)) else {
            return false;
        };
        if a.deg_y() != self.deg_y() || b.deg_y() != other.deg_y() {
            return false;
        }
        (1..=8u64)
            .filter(|t| a.lc_y().eval(t) != 0 && b.lc_y().eval(t) != 0)
            .take(3)
            .any(|t| a.eval_x(&t).gcd(&b.eval_x(&t)).is_constant())
    }

    /// Greatest common divisor in `Q[x, y]` (up to a constant), by the
    /// primitive Euclidean algorithm over `Q[x][y]`. Coprime inputs, the
    /// usual case, are recognized modularly first since the remainder
    /// sequence over `Q[x]` can be slow.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.primitive_integer();
        }
        if other.is_zero() {
            return self.primitive_integer();
        }
        if self.coprime_in_y(other) && self.swap_xy().coprime_in_y(&other.swap_xy()) {
            return Self::from_x(Poly::one(Rationals));
        }
        if let Some(g) = self.heuristic_gcd(other) {
            return g;
        }
        let content = self.content_x().gcd(&other.content_x());
        let mut a = self.primitive_part_x();
        let mut b = other.primitive_part_x();
        if a.deg_y() < b.deg_y() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            b = if r.is_zero() { r } else { r.primitive_part_x() };
        }
        let g = if a.deg_y() == Some(0) {
            Self::from_x(Poly::one(Rationals))
        } else {
            a
        };
        g.mul_x(&content).primitive_integer()
    }

    fn integer_rows(&self) -> Vec<ZPoly> {
        self.primitive_integer()
            .rows
            .iter()
            .map(|r| r.coeffs().iter().map(|c| c.to_integer()).collect())
            .collect()
    }

    /// Gcd by evaluation at a large integer `ξ`, an integer gcd in `Z[x]`
    /// and `ξ`-adic reconstruction, accepted only if it divides both inputs.
    fn heuristic_gcd(&self, other: &Self) -> Option<Self> {
        let (a, b) = (self.integer_rows(), other.integer_rows());
        let norm = |rows: &[ZPoly]| {
            rows.iter()
                .flat_map(|r| r.iter().map(|c| c.abs()))
                .max()
                .unwrap_or_default()
        };
        let mut xi: BigInt = norm(&a).min(norm(&b)) * 2 + 29;
        for _ in 0..HEURISTIC_ATTEMPTS {
            let eval_y = |rows: &[ZPoly]| -> ZPoly {
                let mut acc: ZPoly = Vec::new();
                for r in rows.iter().rev() {
                    let len = acc.len().max(r.len());
                    acc = (0..len)
                        .map(|i| {
                            acc.get(i).map_or_else(BigInt::zero, |c| c * &xi)
                                + r.get(i).cloned().unwrap_or_default()
                        })
                        .collect();
                }
                z_trim(acc)
            };
            let g = z_gcd(&eval_y(&a), &eval_y(&b))?;
            let mut rows: Vec<Vec<BigRational>> = Vec::new();
            for (i, c) in g.iter().enumerate() {
                for (j, d) in symmetric_digits(c, &xi).into_iter().enumerate() {
                    if rows.len() <= j {
                        rows.resize(j + 1, Vec::new());
                    }
                    if rows[j].len() <= i {
                        rows[j].resize(i + 1, BigRational::zero());
                    }
                    rows[j][i] = BigRational::from_integer(d);
                }
            }
            let candidate = Self::new(
                Rationals,
                rows.into_iter().map(|r| Poly::new(Rationals, r)).collect(),
            )
            .primitive_integer();
            if !candidate.is_zero()
                && self.div_exact(&candidate).is_some()
                && other.div_exact(&candidate).is_some()
            {
                return Some(candidate);
            }
            xi = xi * 73794 / 27011;
        }
        None
    }

    /// Exact quotient, if `d` divides `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let dy = d.deg_y()?;
        let lc = d.lc_y();
        let mut rem = self.clone();
        let mut quo = Self::zero(Rationals);
        while let Some(ry) = rem.deg_y() {
            if ry < dy {
                return None;
            }
            let c = rem.lc_y().div_exact(&lc)?;
            let term = Self::from_x(c).shift_y(ry - dy);
            quo = quo.add(&term);
            rem = rem.sub(&term.mul(d));
        }
        Some(quo)
    }
}

const HEURISTIC_ATTEMPTS: usize = 6;

/// Integer polynomial, lowest degree first, without trailing zeros.
type ZPoly = Vec<BigInt>;

fn z_trim(mut p: ZPoly) -> ZPoly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn z_content(p: &[BigInt]) -> BigInt {
    p.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

/// Primitive part with a positive leading coefficient.
fn z_primitive(p: ZPoly) -> ZPoly {
    let p = z_trim(p);
    let Some(lead) = p.last() else { return p };
    let mut c = z_content(&p);
    if lead.is_negative() {
        c = -c;
    }
    p.iter().map(|x| x / &c).collect()
}

fn z_eval(p: &[BigInt], x: &BigInt) -> BigInt {
    p.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
}

fn z_divides(d: &[BigInt], p: &[BigInt]) -> bool {
    if p.is_empty() {
        return true;
    }
    if d.is_empty() || d.len() > p.len() {
        return false;
    }
    let lead = d.last().unwrap();
    let mut rem = p.to_vec();
    for k in (0..=p.len() - d.len()).rev() {
        let c = rem[k + d.len() - 1].clone();
        if !c.is_multiple_of(lead) {
            return false;
        }
        let q = c / lead;
        for (i, di) in d.iter().enumerate() {
            rem[k + i] -= &q * di;
        }
    }
    rem.iter().all(Zero::is_zero)
}

/// Base-`xi` digits of `v` taken in `(-xi/2, xi/2]`, least significant first.
fn symmetric_digits(v: &BigInt, xi: &BigInt) -> Vec<BigInt> {
    let half: BigInt = xi / 2;
    let mut v = v.clone();
    let mut out = Vec::new();
    while !v.is_zero() {
        let mut d = v.mod_floor(xi);
        if d > half {
            d -= xi;
        }
        v = (&v - &d) / xi;
        out.push(d);
    }
    out
}

/// Gcd in `Z[x]`, content included, by the same evaluation heuristic.
/// `None` if no attempt produced a verified divisor.
fn z_gcd(a: &[BigInt], b: &[BigInt]) -> Option<ZPoly> {
    if a.is_empty() || b.is_empty() {
        let p = if a.is_empty() { b } else { a };
        let sign = if p.last().is_some_and(|c| c.is_negative()) {
            -BigInt::one()
        } else {
            BigInt::one()
        };
        return Some(p.iter().map(|c| c * &sign).collect());
    }
    let content = z_content(a).gcd(&z_content(b));
    let (a, b) = (z_primitive(a.to_vec()), z_primitive(b.to_vec()));
    if a.len() == 1 || b.len() == 1 {
        return Some(vec![content]);
    }
    let norm = |p: &[BigInt]| p.iter().map(|c| c.abs()).max().unwrap_or_default();
    let mut xi: BigInt = norm(&a).min(norm(&b)) * 2 + 29;
    for _ in 0..HEURISTIC_ATTEMPTS {
        let g = z_eval(&a, &xi).gcd(&z_eval(&b, &xi));
        let candidate = z_primitive(symmetric_digits(&g, &xi));
        if !candidate.is_empty() && z_divides(&candidate, &a) && z_divides(&candidate, &b) {
            return Some(candidate.into_iter().map(|c| c * &content).collect());
        }
        xi = xi * 73794 / 27011;
    }
    None
}

/// Sylvester determinant of integer-valued univariate polynomials with
/// formal degrees `m`, `n`.
fn sylvester_int(a: &Poly<Rationals>, m: usize, b: &Poly<Rationals>, n: usize) -> BigInt {
    let size = m + n;
    if size == 0 {
        return BigInt::one();
    }
    let int = |p: &Poly<Rationals>, k: usize| -> BigInt {
        let c = p.coeff(k);
        debug_assert!(c.is_integer());
        c.to_integer()
    };
    let mut mat = vec![vec![BigInt::zero(); size]; size];
    for i in 0..n {
        for j in 0..=m {
            mat[i][i + j] = int(a, m - j);
        }
    }
    for i in 0..m {
        for j in 0..=n {
            mat[n + i][i + j] = int(b, n - j);
        }
    }
    bareiss_determinant(mat)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::field::rat;
    use crate::arith::PrimeField;

    fn q(terms: &[((u32, u32), i64)]) -> BiPoly<Rationals> {
        BiPoly::from_terms(Rationals, terms.iter().map(|(e, c)| (*e, rat(*c))))
    }

    #[test]
    fn resultant_of_circle_and_line() {
        // x^2 + y^2 - 1 and y - x: resultant 2x^2 - 1 up to sign.
        let a = q(&[((2, 0), 1), ((0, 2), 1), ((0, 0), -1)]);
        let b = q(&[((0, 1), 1), ((1, 0), -1)]);
        let r = a.resultant_y(&b);
        assert_eq!(
            r.monic(),
            Poly::new(Rationals, vec![rat(-1) / rat(2), rat(0), rat(1)])
        );
        assert_eq!(a.resultant_y_int(&b).monic(), r.monic());
        let fp = PrimeField::new(101).unwrap();
        let af = BiPoly::from_terms(fp, [((2, 0), 1), ((0, 2), 1), ((0, 0), 100)]);
        let bf = BiPoly::from_terms(fp, [((0, 1), 1), ((1, 0), 100)]);
        assert_eq!(af.resultant_y(&bf).degree(), Some(2));
    }

    #[test]
    fn gcd_and_division() {
        let f = q(&[((1, 0), 1), ((0, 1), 1), ((0, 0), 1)]); // x + y + 1
        let g = q(&[((2, 0), 1), ((0, 1), -1)]); // x^2 - y
        let h = q(&[((1, 1), 1), ((0, 0), 3)]); // xy + 3
        let a = f.mul(&g);
        let b = f.mul(&h);
        let gcd = a.gcd(&b);
        assert!(gcd.div_exact(&f).is_some() && f.div_exact(&gcd).is_some());
        assert_eq!(a.div_exact(&f), Some(g.clone()));
        assert!(a.div_exact(&h).is_none());
        assert_eq!(g.gcd(&h).total_degree(), Some(0));
    }

    #[test]
    fn gcd_with_large_coefficients() {
        // f = 123456789 x^3 - 987654321 x y^2 + 55555 y + 17
        let f = q(&[
            ((3, 0), 123456789),
            ((1, 2), -987654321),
            ((0, 1), 55555),
            ((0, 0), 17),
        ]);
        let g = q(&[((2, 1), 31), ((0, 3), -7), ((1, 0), 1000003)]);
        let h = q(&[((4, 0), 5), ((1, 1), -99991), ((0, 0), 2)]);
        let (a, b) = (f.mul(&g).mul(&g), f.mul(&h).scale(&rat(-3)));
        let gcd = a.gcd(&b);
        assert!(gcd == f.primitive_integer() || gcd == f.primitive_integer().scale(&rat(-1)));
        assert_eq!(a.gcd(&f.mul(&g)).total_degree(), Some(6));
    }

    #[test]
    fn shear_and_swap() {
        let f = q(&[((1, 0), 1)]);
        let s = f.shear(&rat(2));
        assert_eq!(s, q(&[((1, 0), 1), ((0, 1), 2)]));
        assert_eq!(s.swap_xy(), q(&[((0, 1), 1), ((1, 0), 2)]));
    }
}
