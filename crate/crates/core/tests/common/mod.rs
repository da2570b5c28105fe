//! Shared generators and oracles for the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use delpezzo::arith::field::rat;
use delpezzo::planemaps::{HomogeneousForm, PlaneRationalMap};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Point = [i64; 3];

pub fn monomials(d: u32) -> Vec<[u32; 3]> {
    (0..=d)
        .flat_map(|a| (0..=d - a).map(move |b| [a, b, d - a - b]))
        .collect()
}

pub fn monomial_value(m: &[u32; 3], p: &Point) -> BigRational {
    (0..3).fold(BigRational::one(), |acc, i| acc * rat(p[i].pow(m[i])))
}

/// Basis of the kernel of `rows` (each row a linear functional).
pub fn nullspace(mut rows: Vec<Vec<BigRational>>, n: usize) -> Vec<Vec<BigRational>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        rows[r].iter_mut().for_each(|x| *x *= &inv);
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in 0..n {
                    let t = &rows[r][j] * &f;
                    rows[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (0..n)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![BigRational::zero(); n];
            v[free] = BigRational::one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -rows[i][free].clone();
            }
            v
        })
        .collect()
}

pub fn det3(a: &Point, b: &Point, c: &Point) -> i64 {
    a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
        + a[2] * (b[0] * c[1] - b[1] * c[0])
}

pub fn proportional(a: &Point, b: &Point) -> bool {
    (0..3).all(|i| a[(i + 1) % 3] * b[(i + 2) % 3] == a[(i + 2) % 3] * b[(i + 1) % 3])
}

/// No three points collinear and no six on a conic.
pub fn general_position(pts: &[Point]) -> bool {
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            for k in j + 1..pts.len() {
                if det3(&pts[i], &pts[j], &pts[k]) == 0 {
                    return false;
                }
            }
        }
    }
    if pts.len() >= 6 {
        let conics = monomials(2);
        let mut sub = vec![0; 6];
        fn choose(
            start: usize,
            depth: usize,
            sub: &mut Vec<usize>,
            n: usize,
            f: &mut impl FnMut(&[usize]) -> bool,
        ) -> bool {
            if depth == sub.len() {
                return f(sub);
            }
            (start..n).all(|i| {
                sub[depth] = i;
                choose(i + 1, depth + 1, sub, n, f)
            })
        }
        return choose(0, 0, &mut sub, pts.len(), &mut |idx| {
            let rows: Vec<Vec<BigRational>> = idx
                .iter()
                .map(|&i| conics.iter().map(|m| monomial_value(m, &pts[i])).collect())
                .collect();
            nullspace(rows, 6).is_empty()
        });
    }
    true
}

pub fn same_projective_point(a: &[BigRational; 3], b: &Point) -> bool {
    let b: Vec<BigRational> = b.iter().map(|&x| rat(x)).collect();
    (0..3).all(|i| {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        &a[j] * &b[k] == &a[k] * &b[j]
    })
}

pub struct Sample {
    pub map: PlaneRationalMap,
    pub degree: u32,
    pub points: Vec<Point>,
}

/// Three random members of the degree `d` system through `k` random points.
pub fn sample(rng: &mut ChaCha8Rng, d: u32, k: usize) -> Sample {
    loop {
        let mut points: Vec<Point> = Vec::new();
        while points.len() < k {
            let p = [
                rng.gen_range(-3..=3),
                rng.gen_range(-3..=3),
                rng.gen_range(-2..=2),
            ];
            if p != [0, 0, 0] && !points.iter().any(|q| proportional(q, &p)) {
                points.push(p);
            }
        }
        if !general_position(&points) {
            continue;
        }
        let mons = monomials(d);
        let rows: Vec<Vec<BigRational>> = points
            .iter()
            .map(|p| mons.iter().map(|m| monomial_value(m, p)).collect())
            .collect();
        let basis = nullspace(rows, mons.len());
        assert_eq!(
            basis.len(),
            mons.len() - k,
            "general points impose independent conditions"
        );
        let forms: [HomogeneousForm; 3] = std::array::from_fn(|_| {
            let weights: Vec<BigRational> =
                basis.iter().map(|_| rat(rng.gen_range(-4..=4))).collect();
            let coeffs: Vec<BigRational> = (0..mons.len())
                .map(|j| basis.iter().zip(&weights).map(|(b, w)| &b[j] * w).sum())
                .collect();
            HomogeneousForm::new(d, mons.iter().copied().zip(coeffs)).unwrap()
        });
        let Ok(map) = PlaneRationalMap::new(forms) else {
            continue;
        };
        if map.algebraic_degree() != d || map.jacobian_curve().is_err() {
            continue;
        }
        return Sample {
            map,
            degree: d,
            points,
        };
    }
}

pub fn corpus() -> Vec<Sample> {
    let mut rng = ChaCha8Rng::seed_from_u64(314);
    let mut out = Vec::new();
    for i in 0..60 {
        let (d, k) = match i % 6 {
            0 => (1, 0),
            1 => (2, 0),
            2 => (2, rng.gen_range(1..=3)),
            3 => (3, 0),
            _ => (3, rng.gen_range(1..=7)),
        };
        out.push(sample(&mut rng, d, k));
    }
    out
}

pub const ORACLE_PRIMES: [i64; 5] = [1009, 1013, 1019, 1021, 1031];

pub fn mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub fn trim(mut v: Vec<i64>) -> Vec<i64> {
    while v.len() > 1 && *v.last().unwrap() == 0 {
        v.pop();
    }
    v
}

pub fn eval(p: &[i64], t: i64) -> i64 {
    p.iter().rev().fold(0, |acc, c| acc * t + c)
}

/// Multiplicity of `x` as a root of `f` over `F_p`, by repeated synthetic
/// division.
pub fn fp_multiplicity(f: &[i64], x: i64, p: i64) -> usize {
    let mut f: Vec<i64> = f.iter().map(|c| c.rem_euclid(p)).collect();
    let mut m = 0;
    while f.len() > 1 {
        let mut q = vec![0; f.len() - 1];
        let mut acc = 0;
        for i in (0..f.len()).rev() {
            acc = (acc * x + f[i]) % p;
            if i > 0 {
                q[i - 1] = acc;
            }
        }
        if acc != 0 {
            break;
        }
        m += 1;
        f = q;
    }
    m
}

/// Containment decided prime by prime: over each `F_p` every preimage
/// polynomial must split into linear factors whose roots reduce from `Δ`.
/// A point outside `Δ`, rational or not, is seen by at least one of the
/// primes unless it happens to collide with `Δ` modulo all of them.
pub fn finite_field_containment(num: &[i64], den: &[i64], finite: &[i64], infinity: bool) -> bool {
    let degree = (num.len() - 1).max(den.len() - 1);
    ORACLE_PRIMES.iter().all(|&p| {
        let mut targets: Vec<Option<i64>> = finite.iter().copied().map(Some).collect();
        if infinity {
            targets.push(None);
        }
        targets.into_iter().all(|d| {
            let pre: Vec<i64> = match d {
                Some(d) => {
                    let len = num.len().max(den.len());
                    (0..len)
                        .map(|i| num.get(i).unwrap_or(&0) - d * den.get(i).unwrap_or(&0))
                        .collect()
                }
                None => den.to_vec(),
            };
            let pre: Vec<i64> = trim(pre.iter().map(|c| c.rem_euclid(p)).collect());
            let finite_degree = pre.len() - 1;
            if finite_degree < degree && !infinity {
                return false;
            }
            let roots: Vec<(i64, usize)> = (0..p)
                .map(|x| (x, fp_multiplicity(&pre, x, p)))
                .filter(|&(_, m)| m > 0)
                .collect();
            let all_in_delta = roots
                .iter()
                .all(|(x, _)| finite.iter().any(|a| a.rem_euclid(p) == *x));
            all_in_delta && roots.iter().map(|(_, m)| m).sum::<usize>() == finite_degree
        })
    })
}

pub struct P1Instance {
    pub num: Vec<i64>,
    pub den: Vec<i64>,
    pub finite: Vec<i64>,
    pub infinity: bool,
}

/// A random `h = num/den` of degree at most 3 with coprime numerator and
/// denominator, and a random `Δ` of small integers, possibly with `∞`.
pub fn p1_instance(rng: &mut ChaCha8Rng, case: usize) -> P1Instance {
    let mut finite: Vec<i64> = (-2..=2).filter(|_| rng.gen_bool(0.5)).collect();
    let infinity = rng.gen_bool(0.6);
    if finite.is_empty() {
        finite.push(0);
    }
    // Half of the maps are built to send a point of Δ onto Δ with all
    // preimages in Δ, which makes containment likely.
    let num: Vec<i64> = if case.is_multiple_of(2) {
        let base = finite[rng.gen_range(0..finite.len())];
        let mut p = vec![rng.gen_range(1..=2) * if rng.gen_bool(0.5) { 1 } else { -1 }];
        for _ in 0..rng.gen_range(1..=3) {
            let a = finite[rng.gen_range(0..finite.len())];
            p = mul(&p, &[-a, 1]);
        }
        p[0] += base;
        p
    } else {
        let deg = rng.gen_range(1..=3);
        let mut p: Vec<i64> = (0..=deg).map(|_| rng.gen_range(-3..=3)).collect();
        p[deg] = rng.gen_range(1..=3);
        p
    };
    let den: Vec<i64> = match rng.gen_range(0..3) {
        0 => {
            let a = rng.gen_range(-2..=2);
            if eval(&num, a) != 0 {
                vec![-a, 1]
            } else {
                vec![1]
            }
        }
        _ => vec![1],
    };
    P1Instance {
        num,
        den,
        finite,
        infinity,
    }
}

/// Integer vectors of length `n` with `Σ v² <= q`, grouped by `(Σ v, Σ v²)`.
fn half_vectors(n: usize, q: i64) -> HashMap<(i64, i64), Vec<Vec<i64>>> {
    let bound = (q as f64).sqrt() as i64 + 1;
    let mut out: HashMap<(i64, i64), Vec<Vec<i64>>> = HashMap::new();
    let mut v = vec![0i64; n];
    fn rec(
        v: &mut Vec<i64>,
        i: usize,
        sq: i64,
        q: i64,
        bound: i64,
        out: &mut HashMap<(i64, i64), Vec<Vec<i64>>>,
    ) {
        if i == v.len() {
            out.entry((v.iter().sum(), sq)).or_default().push(v.clone());
            return;
        }
        for x in -bound..=bound {
            if sq + x * x <= q {
                v[i] = x;
                rec(v, i + 1, sq + x * x, q, bound, out);
            }
        }
    }
    rec(&mut v, 0, 0, q, bound, &mut out);
    out
}

/// All `(a, b)` with `a` in `a_range` and `Σ b = s(a)`, `Σ b² = q(a)`.
pub fn numeric_classes(
    r: usize,
    a_range: std::ops::RangeInclusive<i64>,
    s: impl Fn(i64) -> i64,
    q: impl Fn(i64) -> i64,
) -> BTreeSet<Vec<i64>> {
    let (n1, n2) = (r / 2, r - r / 2);
    let mut found = BTreeSet::new();
    for a in a_range {
        let (s_a, q_a) = (s(a), q(a));
        if q_a < 0 {
            continue;
        }
        let left = half_vectors(n1, q_a);
        let right = half_vectors(n2, q_a);
        for ((s1, q1), lv) in &left {
            if let Some(rv) = right.get(&(s_a - s1, q_a - q1)) {
                for l in lv {
                    for rr in rv {
                        let mut c = vec![a];
                        c.extend(l.iter().chain(rr).map(|b| -b));
                        found.insert(c);
                    }
                }
            }
        }
    }
    found
}
