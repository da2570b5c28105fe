//! Homogeneous forms in `x0, x1, x2` with rational coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::field::fmt_rational;
use crate::arith::{Field, Poly, PrimeField, Rationals};

use super::bipoly::BiPoly;

pub type Exponent = [u32; 3];

/// A form of fixed degree; every stored monomial has that total degree and a
/// nonzero coefficient. The zero form still carries a degree.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HomogeneousForm {
    degree: u32,
    terms: BTreeMap<Exponent, BigRational>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("monomial {monomial:?} has degree {got}, expected {expected}")]
pub struct NotHomogeneous {
    pub monomial: Exponent,
    pub expected: u32,
    pub got: u32,
}

impl HomogeneousForm {
    pub fn new(
        degree: u32,
        terms: impl IntoIterator<Item = (Exponent, BigRational)>,
    ) -> Result<Self, NotHomogeneous> {
        let mut out = Self::zero(degree);
        for (e, c) in terms {
            let got: u32 = e.iter().sum();
            if got != degree {
                return Err(NotHomogeneous {
                    monomial: e,
                    expected: degree,
                    got,
                });
            }
            out.add_term(e, c);
        }
        Ok(out)
    }

    pub fn zero(degree: u32) -> Self {
        Self {
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(0, [([0, 0, 0], c)]).expect("degree 0")
    }

    pub fn variable(i: usize) -> Self {
        let mut e = [0; 3];
        e[i] = 1;
        Self::new(1, [(e, BigRational::one())]).expect("degree 1")
    }

    /// Linear form `a0 x0 + a1 x1 + a2 x2`.
    pub fn linear(a: &[BigRational; 3]) -> Self {
        Self::new(
            1,
            (0..3).map(|i| {
                let mut e = [0; 3];
                e[i] = 1;
                (e, a[i].clone())
            }),
        )
        .expect("degree 1")
    }

    fn add_term(&mut self, e: Exponent, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, BigRational> {
        &self.terms
    }

    pub fn coeff(&self, e: &Exponent) -> BigRational {
        self.terms.get(e).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        assert_eq!(
            self.degree, other.degree,
            "adding forms of different degree"
        );
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self {
            degree: self.degree,
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        if s.is_zero() {
            return Self::zero(self.degree);
        }
        Self {
            degree: self.degree,
            terms: self.terms.iter().map(|(e, c)| (*e, c * s)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.degree + other.degree);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_term([ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]], ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::constant(BigRational::one());
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Partial derivative with respect to `x_i`.
    pub fn partial(&self, i: usize) -> Self {
        let mut out = Self::zero(self.degree.saturating_sub(1));
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut f = *e;
            f[i] -= 1;
            out.add_term(f, c * BigRational::from_integer(e[i].into()));
        }
        out
    }

    pub fn eval(&self, p: &[BigRational; 3]) -> BigRational {
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for i in 0..3 {
                for _ in 0..e[i] {
                    t *= &p[i];
                }
            }
            acc += t;
        }
        acc
    }

    /// Substitutes `x_i ↦ subs[i]`; all substitutes must share one degree.
    pub fn substitute(&self, subs: &[HomogeneousForm; 3]) -> Self {
        let e = subs
            .iter()
            .find(|s| !s.is_zero())
            .map_or(subs[0].degree, |s| s.degree);
        assert!(
            subs.iter().all(|s| s.is_zero() || s.degree == e),
            "substitutes of different degree"
        );
        let mut powers: Vec<Vec<HomogeneousForm>> = Vec::with_capacity(3);
        for s in subs {
            let mut pw = vec![HomogeneousForm::constant(BigRational::one())];
            for k in 1..=self.degree {
                let next = pw[k as usize - 1].mul(s);
                pw.push(next);
            }
            powers.push(pw);
        }
        let mut out = Self::zero(self.degree * e);
        for (ex, c) in &self.terms {
            let t = powers[0][ex[0] as usize]
                .mul(&powers[1][ex[1] as usize])
                .mul(&powers[2][ex[2] as usize]);
            for (m, v) in t.terms {
                out.add_term(m, v * c);
            }
        }
        out
    }

    /// Linear change of coordinates `x ↦ T x` (T given by rows).
    pub fn linear_change(&self, t: &[[BigRational; 3]; 3]) -> Self {
        let subs = [
            HomogeneousForm::linear(&t[0]),
            HomogeneousForm::linear(&t[1]),
            HomogeneousForm::linear(&t[2]),
        ];
        self.substitute(&subs)
    }

    /// Smallest exponent of `x_i` over all monomials (0 for the zero form).
    pub fn valuation(&self, i: usize) -> u32 {
        self.terms.keys().map(|e| e[i]).min().unwrap_or(0)
    }

    /// Divides by `x_i^k`, which must divide every monomial.
    pub fn div_var_power(&self, i: usize, k: u32) -> Self {
        let mut out = Self::zero(self.degree - k);
        for (e, c) in &self.terms {
            let mut f = *e;
            f[i] -= k;
            out.terms.insert(f, c.clone());
        }
        out
    }

    /// Affine polynomial obtained by setting `x_k = 1`, in the remaining
    /// variables `(x, y)` taken in increasing index order.
    pub fn dehomogenize(&self, k: usize) -> BiPoly<Rationals> {
        let (a, b) = other_two(k);
        BiPoly::from_terms(
            Rationals,
            self.terms.iter().map(|(e, c)| ((e[a], e[b]), c.clone())),
        )
    }

    /// Inverse of [`Self::dehomogenize`] at the given degree.
    pub fn homogenize(p: &BiPoly<Rationals>, k: usize, degree: u32) -> Self {
        let (a, b) = other_two(k);
        let mut out = Self::zero(degree);
        for ((i, j), c) in p.terms() {
            let mut e = [0u32; 3];
            e[a] = i as u32;
            e[b] = j as u32;
            e[k] = degree - (i + j) as u32;
            out.terms.insert(e, c);
        }
        out
    }

    /// Least common multiple of the coefficient denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    /// Gcd of the numerators after clearing denominators.
    pub fn integer_content(&self) -> BigInt {
        let den = BigRational::from_integer(self.denominator_lcm());
        self.terms
            .values()
            .fold(BigInt::zero(), |acc, c| acc.gcd(&(c * &den).to_integer()))
    }

    /// Reduction modulo `p`; `None` if some denominator vanishes.
    pub fn reduce(&self, field: PrimeField) -> Option<FpForm> {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| field.reduce(c).map(|v| (*e, v)))
            .collect::<Option<Vec<_>>>()?;
        Some(FpForm {
            field,
            degree: self.degree,
            terms: terms.into_iter().filter(|(_, v)| *v != 0).collect(),
        })
    }

    /// Text in the input grammar; rational coefficients print as `p/q`.
    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (e, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let a = c.abs();
            let vars: Vec<String> = (0..3)
                .filter(|&i| e[i] > 0)
                .map(|i| {
                    if e[i] == 1 {
                        format!("x{i}")
                    } else {
                        format!("x{i}^{}", e[i])
                    }
                })
                .collect();
            let body = if vars.is_empty() {
                fmt_rational(&a)
            } else if a.is_one() {
                vars.join("*")
            } else {
                format!("{}*{}", fmt_rational(&a), vars.join("*"))
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
}

impl fmt::Display for HomogeneousForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for HomogeneousForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Form[{}]({})", self.degree, self.to_text())
    }
}

pub(crate) fn other_two(k: usize) -> (usize, usize) {
    match k {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

/// A form over a prime field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpForm {
    field: PrimeField,
    degree: u32,
    terms: Vec<(Exponent, u64)>,
}

impl FpForm {
    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, p: &[u64; 3]) -> u64 {
        let f = &self.field;
        self.terms.iter().fold(0, |acc, (e, c)| {
            let mut t = *c;
            for i in 0..3 {
                t = f.mul(&t, &f.pow(&p[i], e[i] as u64));
            }
            f.add(&acc, &t)
        })
    }

    pub fn lin_comb(&self, a: u64, other: &Self, b: u64) -> Self {
        let f = self.field;
        let mut map: BTreeMap<Exponent, u64> = BTreeMap::new();
        for (e, c) in &self.terms {
            let v = map.entry(*e).or_insert(0);
            *v = f.add(v, &f.mul(c, &a));
        }
        for (e, c) in &other.terms {
            let v = map.entry(*e).or_insert(0);
            *v = f.add(v, &f.mul(c, &b));
        }
        let degree = if self.is_zero() {
            other.degree
        } else {
            self.degree
        };
        FpForm {
            field: f,
            degree,
            terms: map.into_iter().filter(|(_, v)| *v != 0).collect(),
        }
    }

    /// Linear change of coordinates `x ↦ T x` over the field.
    pub fn linear_change(&self, t: &[[u64; 3]; 3]) -> Self {
        let f = self.field;
        let linear: Vec<Vec<(Exponent, u64)>> = (0..3)
            .map(|i| {
                (0..3)
                    .map(|j| {
                        let mut e = [0; 3];
                        e[j] = 1;
                        (e, t[i][j])
                    })
                    .collect()
            })
            .collect();
        let mul = |a: &BTreeMap<Exponent, u64>, b: &[(Exponent, u64)]| {
            let mut out: BTreeMap<Exponent, u64> = BTreeMap::new();
            for (ea, ca) in a {
                for (eb, cb) in b {
                    let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
                    let v = out.entry(e).or_insert(0);
                    *v = f.add(v, &f.mul(ca, cb));
                }
            }
            out
        };
        let mut powers: Vec<Vec<BTreeMap<Exponent, u64>>> = Vec::new();
        for lin in &linear {
            let mut pw = vec![BTreeMap::from([([0u32; 3], 1u64)])];
            for k in 1..=self.degree as usize {
                let next = mul(&pw[k - 1], lin);
                pw.push(next);
            }
            powers.push(pw);
        }
        let mut out: BTreeMap<Exponent, u64> = BTreeMap::new();
        for (e, c) in &self.terms {
            let a = &powers[0][e[0] as usize];
            let b: Vec<(Exponent, u64)> = powers[1][e[1] as usize]
                .iter()
                .map(|(k, v)| (*k, *v))
                .collect();
            let ab = mul(a, &b);
            let cterm: Vec<(Exponent, u64)> = powers[2][e[2] as usize]
                .iter()
                .map(|(k, v)| (*k, *v))
                .collect();
            for (m, v) in mul(&ab, &cterm) {
                let slot = out.entry(m).or_insert(0);
                *slot = f.add(slot, &f.mul(&v, c));
            }
        }
        FpForm {
            field: f,
            degree: self.degree,
            terms: out.into_iter().filter(|(_, v)| *v != 0).collect(),
        }
    }

    /// Affine polynomial at `x2 = 1` in `(x0, x1)`.
    pub fn dehomogenize_last(&self) -> BiPoly<PrimeField> {
        BiPoly::from_terms(
            self.field,
            self.terms.iter().map(|(e, c)| ((e[0], e[1]), *c)),
        )
    }
}

/// Evaluates a rational form modulo `p` at an `F_p` point (coefficients reduced first).
pub fn eval_mod(form: &HomogeneousForm, field: PrimeField, p: &[u64; 3]) -> Option<u64> {
    form.reduce(field).map(|f| f.eval(p))
}

/// Converts a univariate polynomial in one variable to a [`Poly`].
pub fn univariate_from_form(
    form: &HomogeneousForm,
    var: usize,
    fixed: &[(usize, BigRational)],
) -> Poly<Rationals> {
    let mut coeffs = vec![BigRational::zero(); form.degree as usize + 1];
    for (e, c) in &form.terms {
        let mut t = c.clone();
        for (i, v) in fixed {
            for _ in 0..e[*i] {
                t *= v;
            }
        }
        coeffs[e[var] as usize] += t;
    }
    Poly::new(Rationals, coeffs)
}
