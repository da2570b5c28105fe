//! Root finding and factorization shapes.
//!
//! Rational roots are found p-adically: roots modulo a good prime are lifted
//! by Newton iteration and turned back into fractions by rational
//! reconstruction, then confirmed by exact evaluation. This avoids factoring
//! the constant and leading coefficients, which can be large after
//! elimination.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::field::{Field, PrimeField, Rationals};
use super::poly::Poly;

pub type QPoly = Poly<Rationals>;
pub type FpPoly = Poly<PrimeField>;

/// Integer coefficients of the primitive multiple of `p` with positive leading coefficient.
pub fn primitive_integer_coeffs(p: &QPoly) -> Vec<BigInt> {
    if p.is_zero() {
        return Vec::new();
    }
    let den = p
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let mut ints: Vec<BigInt> = p
        .coeffs()
        .iter()
        .map(|c| (c * BigRational::from_integer(den.clone())).to_integer())
        .collect();
    let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let sign = if ints.last().unwrap().is_negative() {
        -1
    } else {
        1
    };
    for c in ints.iter_mut() {
        *c = &*c / &content * sign;
    }
    ints
}

pub fn reduce_poly(field: PrimeField, p: &QPoly) -> Option<FpPoly> {
    let coeffs = p
        .coeffs()
        .iter()
        .map(|c| field.reduce(c))
        .collect::<Option<Vec<_>>>()?;
    Some(Poly::new(field, coeffs))
}

fn reduce_ints(field: PrimeField, ints: &[BigInt]) -> FpPoly {
    let p = BigInt::from(field.modulus());
    let coeffs = ints
        .iter()
        .map(|c| c.mod_floor(&p).to_u64().unwrap())
        .collect();
    Poly::new(field, coeffs)
}

/// Roots in `F_p` by exhaustive evaluation, each listed once.
pub fn fp_roots_by_enumeration(p: &FpPoly) -> Vec<u64> {
    if p.is_zero() {
        return p.field().elements().collect();
    }
    p.field().elements().filter(|a| p.eval(a) == 0).collect()
}

/// Roots in `F_p` via `gcd(f, x^p - x)` followed by equal-degree splitting.
pub fn fp_roots(f: &FpPoly) -> Vec<u64> {
    let field = *f.field();
    if f.is_zero() {
        return field.elements().collect();
    }
    if f.is_constant() {
        return Vec::new();
    }
    let x = Poly::new(field, vec![0, 1]);
    let xp = x.pow_mod(field.modulus(), f);
    let g = f.gcd(&xp.sub(&x));
    let mut roots = Vec::new();
    split_linear(&g, &mut roots, 1);
    roots.sort_unstable();
    roots.dedup();
    roots
}

fn split_linear(g: &FpPoly, out: &mut Vec<u64>, mut shift: u64) {
    let field = *g.field();
    match g.degree() {
        None | Some(0) => {}
        Some(1) => {
            let m = g.monic();
            out.push(field.neg(&m.coeff(0)));
        }
        Some(_) => {
            let p = field.modulus();
            if p == 2 {
                for a in 0..2 {
                    if g.eval(&a) == 0 {
                        out.push(a);
                    }
                }
                return;
            }
            // (x + s)^((p-1)/2) - 1 splits the roots by quadratic character.
            loop {
                let xs = Poly::new(field, vec![shift % p, 1]);
                let h = xs.pow_mod((p - 1) / 2, g).sub(&Poly::one(field));
                let d = g.gcd(&h);
                shift += 1;
                if let Some(dd) = d.degree() {
                    if dd > 0 && dd < g.deg0() {
                        let rest = g.div_rem(&d).0;
                        split_linear(&d, out, shift);
                        split_linear(&rest, out, shift);
                        return;
                    }
                }
            }
        }
    }
}

/// Distinct-degree factorization of a squarefree polynomial over `F_p`.
/// Returns `(k, product of the irreducible factors of degree k)` pairs.
pub fn distinct_degree_factorization(f: &FpPoly) -> Vec<(usize, FpPoly)> {
    let field = *f.field();
    let mut out = Vec::new();
    let mut rest = f.monic();
    let x = Poly::new(field, vec![0, 1]);
    let mut h = x.clone();
    let mut k = 0;
    while rest.deg0() >= 2 * (k + 1) {
        k += 1;
        h = h.pow_mod(field.modulus(), &rest);
        let g = rest.gcd(&h.sub(&x));
        if !g.is_constant() {
            rest = rest.div_rem(&g).0;
            h = h.rem(&rest);
            out.push((k, g));
        }
    }
    if !rest.is_constant() {
        out.push((rest.deg0(), rest));
    }
    out
}

/// Number of irreducible factors of each degree (as `(degree, count)` pairs)
/// of a squarefree polynomial over `F_p`.
pub fn factor_degree_pattern(f: &FpPoly) -> Vec<(usize, usize)> {
    distinct_degree_factorization(f)
        .into_iter()
        .map(|(k, g)| (k, g.deg0() / k))
        .collect()
}

const GOOD_PRIMES_START: u64 = 1009;

fn good_primes() -> impl Iterator<Item = PrimeField> {
    (GOOD_PRIMES_START..).filter_map(PrimeField::new)
}

/// All rational roots of a nonzero polynomial, sorted, without multiplicity.
pub fn rational_roots(p: &QPoly) -> Vec<BigRational> {
    assert!(!p.is_zero(), "rational roots of the zero polynomial");
    let mut roots = Vec::new();
    let mut work = p.clone();
    if work.coeff(0).is_zero() {
        roots.push(BigRational::zero());
        while work.coeff(0).is_zero() {
            work = Poly::new(Rationals, work.coeffs()[1..].to_vec());
        }
    }
    let sq = work.squarefree_part();
    if sq.is_constant() {
        return roots;
    }
    let ints = primitive_integer_coeffs(&sq);
    let c0 = ints[0].abs();
    let cn = ints.last().unwrap().abs();
    let bound = c0.clone().max(cn.clone());
    let needed: BigInt = BigInt::from(2) * &bound * &bound + BigInt::one();

    for field in good_primes().take(200) {
        let pm = BigInt::from(field.modulus());
        if (&cn % &pm).is_zero() || (&c0 % &pm).is_zero() {
            continue;
        }
        let reduced = reduce_ints(field, &ints);
        if !reduced.is_squarefree() {
            continue;
        }
        for r in fp_roots(&reduced) {
            if let Some(q) = lift_and_reconstruct(&ints, r, &pm, &needed) {
                if eval_ints(&ints, &q).is_zero() {
                    roots.push(q);
                }
            }
        }
        roots.sort();
        roots.dedup();
        return roots;
    }
    panic!("no good prime found for rational root search");
}

fn eval_ints(ints: &[BigInt], x: &BigRational) -> BigRational {
    ints.iter().rev().fold(BigRational::zero(), |acc, c| {
        acc * x + BigRational::from_integer(c.clone())
    })
}

fn eval_mod(ints: &[BigInt], x: &BigInt, m: &BigInt) -> BigInt {
    ints.iter()
        .rev()
        .fold(BigInt::zero(), |acc, c| (acc * x + c).mod_floor(m))
}

fn inverse_mod(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    e.gcd.is_one().then(|| e.x.mod_floor(m))
}

/// Newton-lifts a simple root modulo `p` until the modulus exceeds `needed`,
/// then recovers the unique fraction `a/b` with `|a|, |b| <= sqrt(N/2)`.
fn lift_and_reconstruct(
    ints: &[BigInt],
    root: u64,
    p: &BigInt,
    needed: &BigInt,
) -> Option<BigRational> {
    let deriv: Vec<BigInt> = ints
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i))
        .collect();
    let mut modulus = p.clone();
    let mut r = BigInt::from(root);
    while &modulus <= needed {
        modulus = &modulus * &modulus;
        let fr = eval_mod(ints, &r, &modulus);
        let dfr = eval_mod(&deriv, &r, &modulus);
        let inv = inverse_mod(&dfr, &modulus)?;
        r = (r - fr * inv).mod_floor(&modulus);
    }
    rational_reconstruction(&r, &modulus)
}

/// Finds `a/b` with `a ≡ b r (mod m)` and `|a|, b <= sqrt(m/2)`.
pub fn rational_reconstruction(r: &BigInt, m: &BigInt) -> Option<BigRational> {
    let half_bound = (m / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (m.clone(), r.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > half_bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        r0 = std::mem::replace(&mut r1, r2);
        let t2 = &t0 - &q * &t1;
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > half_bound {
        return None;
    }
    Some(BigRational::new(r1, t1))
}

/// Certifies irreducibility over the rationals by finding a prime of good
/// reduction modulo which the polynomial stays irreducible.
///
/// `Some(true)` is a proof, `Some(false)` means a rational root was found,
/// `None` means no certificate was found (the polynomial may still be irreducible).
pub fn certify_irreducible(p: &QPoly) -> Option<bool> {
    let n = p.degree()?;
    if n == 0 {
        return None;
    }
    if n == 1 {
        return Some(true);
    }
    if !rational_roots(p).is_empty() {
        return Some(false);
    }
    if n <= 3 {
        return Some(true);
    }
    if !p.is_squarefree() {
        return Some(false);
    }
    let ints = primitive_integer_coeffs(p);
    let cn = ints.last().unwrap().clone();
    for field in good_primes().take(60) {
        if (&cn % BigInt::from(field.modulus())).is_zero() {
            continue;
        }
        let red = reduce_ints(field, &ints);
        if !red.is_squarefree() {
            continue;
        }
        let pattern = factor_degree_pattern(&red);
        if pattern == vec![(n, 1)] {
            return Some(true);
        }
    }
    None
}
