//! Dense univariate polynomials over a [`Field`].

use std::fmt;

use super::field::Field;

/// Dense polynomial, coefficients in increasing degree, no trailing zeros.
#[derive(Clone, PartialEq)]
pub struct Poly<F: Field> {
    field: F,
    coeffs: Vec<F::Elem>,
}

impl<F: Field> fmt::Debug for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly{:?}", self.coeffs)
    }
}

impl<F: Field> Poly<F> {
    pub fn new(field: F, mut coeffs: Vec<F::Elem>) -> Self {
        while coeffs.last().is_some_and(|c| field.is_zero(c)) {
            coeffs.pop();
        }
        Self { field, coeffs }
    }

    pub fn zero(field: F) -> Self {
        Self {
            field,
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: F) -> Self {
        let one = field.one();
        Self::new(field, vec![one])
    }

    pub fn constant(field: F, c: F::Elem) -> Self {
        Self::new(field, vec![c])
    }

    /// `c * x^k`.
    pub fn monomial(field: F, c: F::Elem, k: usize) -> Self {
        let mut coeffs = vec![field.zero(); k + 1];
        coeffs[k] = c;
        Self::new(field, coeffs)
    }

    /// `x - a`.
    pub fn linear_root(field: F, a: &F::Elem) -> Self {
        let c0 = field.neg(a);
        let c1 = field.one();
        Self::new(field, vec![c0, c1])
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn coeffs(&self) -> &[F::Elem] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<F::Elem> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial counted as 0.
    pub fn deg0(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn coeff(&self, i: usize) -> F::Elem {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn lc(&self) -> F::Elem {
        self.coeffs
            .last()
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n)
            .map(|i| self.field.add(&self.coeff(i), &other.coeff(i)))
            .collect();
        Self::new(self.field.clone(), c)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n)
            .map(|i| self.field.sub(&self.coeff(i), &other.coeff(i)))
            .collect();
        Self::new(self.field.clone(), c)
    }

    pub fn neg(&self) -> Self {
        let c = self.coeffs.iter().map(|a| self.field.neg(a)).collect();
        Self::new(self.field.clone(), c)
    }

    pub fn scale(&self, s: &F::Elem) -> Self {
        let c = self.coeffs.iter().map(|a| self.field.mul(a, s)).collect();
        Self::new(self.field.clone(), c)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.field.clone());
        }
        let f = &self.field;
        let mut c = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] = f.add(&c[i + j], &f.mul(a, b));
            }
        }
        Self::new(f.clone(), c)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.field.clone());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiplies by `x^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![self.field.zero(); k];
        c.extend(self.coeffs.iter().cloned());
        Self::new(self.field.clone(), c)
    }

    /// Euclidean division. Panics when `d` is zero.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let f = &self.field;
        let dd = d.degree().expect("division by zero polynomial");
        let inv_lc = f.inv(&d.lc());
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(f.clone()), self.clone());
        }
        let mut quot = vec![f.zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = f.mul(&rem[k + dd], &inv_lc);
            if f.is_zero(&c) {
                continue;
            }
            for (j, dj) in d.coeffs.iter().enumerate() {
                rem[k + j] = f.sub(&rem[k + j], &f.mul(&c, dj));
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Self::new(f.clone(), quot), Self::new(f.clone(), rem))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    /// Quotient of an exact division; `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    pub fn divides(&self, other: &Self) -> bool {
        other.rem(self).is_zero()
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.field.inv(&self.lc());
        self.scale(&inv)
    }

    /// Monic greatest common divisor; zero only when both inputs are zero.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns `(g, s, t)` with `s*self + t*other = g`, `g` monic.
    pub fn xgcd(&self, other: &Self) -> (Self, Self, Self) {
        let field = self.field.clone();
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(field.clone()), Self::zero(field.clone()));
        let (mut t0, mut t1) = (Self::zero(field.clone()), Self::one(field.clone()));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = field.inv(&r0.lc());
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    pub fn derivative(&self) -> Self {
        let f = &self.field;
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, a)| f.mul(a, &f.from_i64(i as i64)))
            .collect();
        Self::new(f.clone(), c)
    }

    pub fn eval(&self, x: &F::Elem) -> F::Elem {
        let f = &self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
    }

    /// Monic product of the distinct irreducible factors.
    ///
    /// Valid in characteristic zero and in characteristic `p` for degrees
    /// below `p`, which covers every use in this crate.
    pub fn squarefree_part(&self) -> Self {
        if self.is_constant() {
            return Self::one(self.field.clone());
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    pub fn is_squarefree(&self) -> bool {
        self.is_constant() || self.gcd(&self.derivative()).is_constant()
    }

    /// Multiplicity of `x = a` as a root.
    pub fn root_multiplicity(&self, a: &F::Elem) -> usize {
        if self.is_zero() {
            return usize::MAX;
        }
        let lin = Self::linear_root(self.field.clone(), a);
        let mut p = self.clone();
        let mut m = 0;
        while let Some(q) = p.div_exact(&lin) {
            p = q;
            m += 1;
        }
        m
    }

    /// Removes from `self` every root shared with `other`, with full multiplicity.
    /// Returns the remaining factor and the removed degree.
    pub fn saturate(&self, other: &Self) -> (Self, usize) {
        let mut p = self.clone();
        let mut removed = 0;
        loop {
            let g = p.gcd(other);
            if g.is_constant() {
                return (p, removed);
            }
            removed += g.deg0();
            p = p.div_rem(&g).0;
        }
    }

    /// Composes with another polynomial: `self(g(x))`.
    pub fn compose(&self, g: &Self) -> Self {
        let mut acc = Self::zero(self.field.clone());
        for c in self.coeffs.iter().rev() {
            acc = acc
                .mul(g)
                .add(&Self::constant(self.field.clone(), c.clone()));
        }
        acc
    }

    pub fn mul_mod(&self, other: &Self, m: &Self) -> Self {
        self.mul(other).rem(m)
    }

    pub fn pow_mod(&self, mut e: u64, m: &Self) -> Self {
        let mut base = self.rem(m);
        let mut acc = Self::one(self.field.clone()).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_mod(&base, m);
            }
            base = base.mul_mod(&base, m);
            e >>= 1;
        }
        acc
    }

    /// Inverse modulo `m`, if it exists.
    pub fn inv_mod(&self, m: &Self) -> Option<Self> {
        let (g, s, _) = self.xgcd(m);
        (g.degree() == Some(0)).then(|| s.rem(m))
    }

    /// Resultant with another polynomial using the formal degrees `da`, `db`
    /// (which may exceed the actual degrees when leading coefficients vanish).
    pub fn resultant_formal(&self, da: usize, other: &Self, db: usize) -> F::Elem {
        let f = &self.field;
        let n = da + db;
        if n == 0 {
            return f.one();
        }
        let mut m = vec![vec![f.zero(); n]; n];
        for i in 0..db {
            for j in 0..=da {
                m[i][i + j] = self.coeff(da - j);
            }
        }
        for i in 0..da {
            for j in 0..=db {
                m[db + i][i + j] = other.coeff(db - j);
            }
        }
        determinant(f, m)
    }

    pub fn resultant(&self, other: &Self) -> F::Elem {
        self.resultant_formal(self.deg0(), other, other.deg0())
    }

    /// Newton interpolation through `(x_i, y_i)` with distinct `x_i`.
    pub fn interpolate(field: F, xs: &[F::Elem], ys: &[F::Elem]) -> Self {
        assert_eq!(xs.len(), ys.len());
        let f = &field;
        let n = xs.len();
        let mut dd: Vec<F::Elem> = ys.to_vec();
        for level in 1..n {
            for i in (level..n).rev() {
                let num = f.sub(&dd[i], &dd[i - 1]);
                let den = f.sub(&xs[i], &xs[i - level]);
                dd[i] = f.div(&num, &den);
            }
        }
        let mut acc = Self::zero(field.clone());
        for i in (0..n).rev() {
            acc = acc
                .mul(&Self::linear_root(field.clone(), &xs[i]))
                .add(&Self::constant(field.clone(), dd[i].clone()));
        }
        acc
    }
}

/// Determinant by Gaussian elimination over a field.
pub fn determinant<F: Field>(f: &F, mut m: Vec<Vec<F::Elem>>) -> F::Elem {
    let n = m.len();
    let mut det = f.one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !f.is_zero(&m[r][col])) else {
            return f.zero();
        };
        if piv != col {
            m.swap(piv, col);
            det = f.neg(&det);
        }
        det = f.mul(&det, &m[col][col]);
        let inv = f.inv(&m[col][col]);
        for r in col + 1..n {
            if f.is_zero(&m[r][col]) {
                continue;
            }
            let factor = f.mul(&m[r][col], &inv);
            for c in col..n {
                let t = f.mul(&factor, &m[col][c]);
                m[r][c] = f.sub(&m[r][c], &t);
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::field::{rat, PrimeField, Rationals};

    fn q(c: &[i64]) -> Poly<Rationals> {
        Poly::new(Rationals, c.iter().map(|&x| rat(x)).collect())
    }

    #[test]
    fn division_and_gcd() {
        // (x-1)(x-2) and (x-1)(x+3)
        let a = q(&[2, -3, 1]);
        let b = q(&[-3, 2, 1]);
        assert_eq!(a.gcd(&b), q(&[-1, 1]));
        let (qq, r) = a.mul(&b).div_rem(&a);
        assert!(r.is_zero());
        assert_eq!(qq, b);
    }

    #[test]
    fn xgcd_identity() {
        let a = q(&[1, 0, 1]);
        let b = q(&[-1, 1]);
        let (g, s, t) = a.xgcd(&b);
        assert_eq!(g, q(&[1]));
        assert_eq!(s.mul(&a).add(&t.mul(&b)), g);
    }

    #[test]
    fn squarefree_and_multiplicity() {
        let p = q(&[-1, 1]).pow(3).mul(&q(&[2, 1]));
        assert_eq!(p.squarefree_part(), q(&[-2, 1, 1]));
        assert_eq!(p.root_multiplicity(&rat(1)), 3);
        assert_eq!(p.root_multiplicity(&rat(0)), 0);
    }

    #[test]
    fn resultant_matches_root_product() {
        // Res(x^2 - 1, x - 3) = (1-3)(-1-3)... computed as prod g(roots of f) = (3-1)(3+1) with sign
        let f = q(&[-1, 0, 1]);
        let g = q(&[-3, 1]);
        // Res(f, g) = lc(f)^deg g * prod_{f(a)=0} g(a) = (1-3)(-1-3) = 8
        assert_eq!(f.resultant(&g), rat(8));
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let p = q(&[5, -2, 0, 7]);
        let xs: Vec<_> = (0..4).map(rat).collect();
        let ys: Vec<_> = xs.iter().map(|x| p.eval(x)).collect();
        assert_eq!(Poly::interpolate(Rationals, &xs, &ys), p);
    }

    #[test]
    fn pow_mod_fermat() {
        let f = PrimeField::new(13).unwrap();
        let m = Poly::new(f, vec![2, 0, 1]);
        let x = Poly::new(f, vec![0, 1]);
        // x^(13^2) == x mod an irreducible quadratic only if degree divides 2
        let r = x.pow_mod(169, &m);
        let irreducible = m.degree() == Some(2) && (0..13).all(|a| m.eval(&a) != 0);
        assert_eq!(r == x, irreducible);
    }
}
