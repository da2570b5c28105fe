//! Topological degree by counting points in general fibers.
//!
//! For a target `[a : b : 1]` the fiber is cut out by `P = f0 - a f2` and
//! `Q = f1 - b f2`. After a random change of source coordinates, the
//! resultant `Res_y(P, Q)` has degree `d²` and its roots are the
//! `x`-coordinates of fiber points and of base points. Removing every root it
//! shares with the eliminant of the base locus leaves a squarefree factor
//! whose degree is the fiber size. The count is carried out independently over
//! `Q` and over a large prime field; the two must agree.

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::field::{fmt_rational, is_prime};
use crate::arith::roots::{factor_degree_pattern, FpPoly, QPoly};
use crate::arith::{Field, PrimeField, Rationals};

use super::base_locus::{base_locus, eliminant, format_point};
use super::bipoly::BiPoly;
use super::form::{FpForm, HomogeneousForm};
use super::local::{intersection_multiplicity, localize};
use super::map::PlaneRationalMap;
use super::PlanemapError;

pub const DEFAULT_PRIME: u64 = 1_000_003;
pub const MIN_PRIME: u64 = 10_000;
const TRANSFORM_ATTEMPTS: usize = 6;

#[derive(Clone, Debug)]
pub struct DegreeOptions {
    /// Accepted targets required before the count is reported.
    pub targets: usize,
    /// Total targets tried per coordinate change.
    pub max_attempts: usize,
    pub seed: u64,
    pub prime: u64,
}

impl Default for DegreeOptions {
    fn default() -> Self {
        Self {
            targets: 20,
            max_attempts: 200,
            seed: 0x0dd_5eed,
            prime: DEFAULT_PRIME,
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct TargetSample {
    pub target: [String; 2],
    pub resultant_degree: usize,
    pub base_contribution: usize,
    pub fiber_count: usize,
    pub squarefree: bool,
    /// `(k, n)`: the fiber polynomial has `n` irreducible factors of degree
    /// `k` over the prime field. Empty over `Q`.
    pub extension_degrees: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct FultonCheck {
    pub point: String,
    pub intersection_multiplicity: usize,
    pub resultant_order: usize,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct RouteReport {
    pub field: String,
    pub degree: usize,
    pub base_contribution: usize,
    pub accepted: usize,
    pub rejected: usize,
    pub transform: [[i64; 3]; 3],
    pub samples: Vec<TargetSample>,
    pub fulton_checks: Vec<FultonCheck>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct DegreeReport {
    pub topological_degree: usize,
    pub algebraic_degree: u32,
    pub bezout_bound: u32,
    pub base_contribution: usize,
    pub exact: RouteReport,
    pub modular: RouteReport,
}

/// Raw per-target data before the acceptance rule.
struct Sample {
    data: TargetSample,
    removed: usize,
}

/// Keeps the targets with minimal base contribution and a squarefree fiber
/// polynomial, and checks that they all report the same count.
fn accept(
    samples: &[Sample],
    needed: usize,
) -> Result<Option<(usize, usize, Vec<usize>)>, PlanemapError> {
    let Some(min) = samples.iter().map(|s| s.removed).min() else {
        return Ok(None);
    };
    let idx: Vec<usize> = (0..samples.len())
        .filter(|&i| samples[i].removed == min && samples[i].data.squarefree)
        .collect();
    if idx.len() < needed {
        return Ok(None);
    }
    let counts: Vec<usize> = idx.iter().map(|&i| samples[i].data.fiber_count).collect();
    if counts.iter().any(|&c| c != counts[0]) {
        return Err(PlanemapError::UnstableCount(counts));
    }
    Ok(Some((counts[0], min, idx)))
}

fn random_rational(rng: &mut impl Rng) -> BigRational {
    BigRational::new(
        rng.gen_range(-60..=60i64).into(),
        rng.gen_range(1..=9i64).into(),
    )
}

fn random_integer_transform(rng: &mut impl Rng) -> [[i64; 3]; 3] {
    loop {
        let t: [[i64; 3]; 3] =
            std::array::from_fn(|_| std::array::from_fn(|_| rng.gen_range(-3..=3)));
        let det = t[0][0] * (t[1][1] * t[2][2] - t[1][2] * t[2][1])
            - t[0][1] * (t[1][0] * t[2][2] - t[1][2] * t[2][0])
            + t[0][2] * (t[1][0] * t[2][1] - t[1][1] * t[2][0]);
        if det != 0 {
            return t;
        }
    }
}

fn to_rational(t: &[[i64; 3]; 3]) -> [[BigRational; 3]; 3] {
    std::array::from_fn(|i| std::array::from_fn(|j| BigRational::from_integer(t[i][j].into())))
}

/// Solves `T q = p`.
fn preimage_point(t: &[[i64; 3]; 3], p: &[BigRational; 3]) -> Option<[BigRational; 3]> {
    let rows: Vec<Vec<i64>> = t.iter().map(|r| r.to_vec()).collect();
    let den = p.iter().fold(num_bigint::BigInt::one(), |acc, c| {
        num_integer::Integer::lcm(&acc, c.denom())
    });
    let ints: Vec<i64> = p
        .iter()
        .map(|c| {
            (c * BigRational::from_integer(den.clone()))
                .to_integer()
                .try_into()
                .ok()
        })
        .collect::<Option<_>>()?;
    let q = crate::arith::linalg::solve_rational(&rows, &ints)?;
    Some([q[0].clone(), q[1].clone(), q[2].clone()])
}

fn fiber_pair(
    g: &[HomogeneousForm; 3],
    a: &BigRational,
    b: &BigRational,
) -> (HomogeneousForm, HomogeneousForm) {
    (g[0].sub(&g[2].scale(a)), g[1].sub(&g[2].scale(b)))
}

fn check_dominant(map: &PlaneRationalMap, seed: u64) -> Result<u32, PlanemapError> {
    let d = map.algebraic_degree();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xd0);
    if d == 0 || !map.dominance_check(&mut rng) {
        return Err(PlanemapError::NotDominant);
    }
    Ok(d)
}

/// Fiber count over `Q`, with a cross-check of the base contribution against
/// local intersection multiplicities at the rational base points.
pub fn topological_degree_exact(
    map: &PlaneRationalMap,
    opts: &DegreeOptions,
) -> Result<RouteReport, PlanemapError> {
    let d = check_dominant(map, opts.seed)? as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let locus = base_locus(map, &mut rng)?;
    let rational = locus.rational_points();
    let mut last_err = PlanemapError::UnstableCount(Vec::new());

    'transform: for _ in 0..TRANSFORM_ATTEMPTS {
        let t = random_integer_transform(&mut rng);
        let tq = to_rational(&t);
        let g: [HomogeneousForm; 3] = std::array::from_fn(|i| map.forms()[i].linear_change(&tq));
        let affine: Vec<BiPoly<Rationals>> = g
            .iter()
            .filter(|f| !f.is_zero())
            .map(|f| f.dehomogenize(2))
            .collect();
        let Some(base) = eliminant(&affine, &mut rng) else {
            continue;
        };

        let mut samples: Vec<Sample> = Vec::new();
        let mut kept: Vec<(BigRational, BigRational, QPoly)> = Vec::new();
        let mut rejected = 0;
        for _ in 0..opts.max_attempts {
            if samples.len() >= opts.targets + opts.targets / 2 {
                break;
            }
            let (a, b) = (random_rational(&mut rng), random_rational(&mut rng));
            let (pf, qf) = fiber_pair(&g, &a, &b);
            let (p, q) = (pf.dehomogenize(2), qf.dehomogenize(2));
            if p.deg_y() != Some(d) || q.deg_y() != Some(d) {
                rejected += 1;
                continue;
            }
            let r = p.resultant_y_int(&q);
            if r.degree() != Some(d * d) {
                rejected += 1;
                continue;
            }
            let (fiber, removed) = r.saturate(&base);
            samples.push(Sample {
                data: TargetSample {
                    target: [fmt_rational(&a), fmt_rational(&b)],
                    resultant_degree: d * d,
                    base_contribution: removed,
                    fiber_count: fiber.deg0(),
                    squarefree: fiber.is_squarefree(),
                    extension_degrees: Vec::new(),
                },
                removed,
            });
            kept.push((a, b, r));
        }
        let (count, contribution, idx) = match accept(&samples, opts.targets) {
            Ok(Some(v)) => v,
            Ok(None) => continue,
            Err(e) => {
                last_err = e;
                continue;
            }
        };

        let (a, b, r) = &kept[idx[0]];
        let (pf, qf) = fiber_pair(map.forms(), a, b);
        let mut checks = Vec::new();
        for p in &rational {
            let Some(q) = preimage_point(&t, p) else {
                continue 'transform;
            };
            if q[2].is_zero() {
                continue 'transform;
            }
            let xi = &q[0] / &q[2];
            let local = intersection_multiplicity(&localize(&pf, p), &localize(&qf, p))?;
            let order = r.root_multiplicity(&xi);
            if local != order {
                // Another base point or fiber point shares this x-coordinate.
                continue 'transform;
            }
            checks.push(FultonCheck {
                point: format_point(p),
                intersection_multiplicity: local,
                resultant_order: order,
            });
        }
        if checks
            .iter()
            .map(|c| c.intersection_multiplicity)
            .sum::<usize>()
            > contribution
        {
            return Err(PlanemapError::Internal(
                "local multiplicities exceed the base contribution".into(),
            ));
        }
        return Ok(RouteReport {
            field: "Q".into(),
            degree: count,
            base_contribution: contribution,
            accepted: idx.len(),
            rejected: rejected + samples.len() - idx.len(),
            transform: t,
            samples: idx.iter().map(|&i| samples[i].data.clone()).collect(),
            fulton_checks: checks,
        });
    }
    Err(last_err)
}

fn field_for(prime: u64) -> Result<PrimeField, PlanemapError> {
    if prime < MIN_PRIME || !is_prime(prime) {
        return Err(PlanemapError::BadField(prime));
    }
    PrimeField::new(prime).ok_or(PlanemapError::BadField(prime))
}

/// Fiber count over `F_p`, with the degree pattern of each fiber polynomial.
pub fn topological_degree_modular(
    map: &PlaneRationalMap,
    opts: &DegreeOptions,
) -> Result<RouteReport, PlanemapError> {
    let d = check_dominant(map, opts.seed)? as usize;
    let field = field_for(opts.prime)?;
    let forms: [FpForm; 3] = map
        .reduce(field)
        .ok_or(PlanemapError::BadField(opts.prime))?;
    let p = field.modulus();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(p));
    let mut last_err = PlanemapError::UnstableCount(Vec::new());

    for _ in 0..TRANSFORM_ATTEMPTS {
        let t: [[u64; 3]; 3] =
            std::array::from_fn(|_| std::array::from_fn(|_| rng.gen_range(0..p)));
        let det = crate::arith::poly::determinant(&field, t.iter().map(|r| r.to_vec()).collect());
        if det == 0 {
            continue;
        }
        let g: [FpForm; 3] = std::array::from_fn(|i| forms[i].linear_change(&t));

        let mut raw: Vec<(u64, u64, FpPoly)> = Vec::new();
        let mut rejected = 0;
        for _ in 0..opts.max_attempts {
            if raw.len() >= opts.targets + opts.targets / 2 {
                break;
            }
            let (a, b) = (rng.gen_range(0..p), rng.gen_range(0..p));
            let pp = g[0].lin_comb(1, &g[2], field.neg(&a)).dehomogenize_last();
            let qq = g[1].lin_comb(1, &g[2], field.neg(&b)).dehomogenize_last();
            if pp.deg_y() != Some(d) || qq.deg_y() != Some(d) {
                rejected += 1;
                continue;
            }
            let r = pp.resultant_y(&qq);
            if r.degree() != Some(d * d) {
                rejected += 1;
                continue;
            }
            raw.push((a, b, r));
        }
        if raw.len() < 3 {
            continue;
        }
        let base = raw[1..3]
            .iter()
            .fold(raw[0].2.clone(), |acc, (_, _, r)| acc.gcd(r))
            .squarefree_part();
        let samples: Vec<Sample> = raw
            .iter()
            .map(|(a, b, r)| {
                let (fiber, removed) = r.saturate(&base);
                let squarefree = fiber.is_squarefree();
                Sample {
                    data: TargetSample {
                        target: [a.to_string(), b.to_string()],
                        resultant_degree: d * d,
                        base_contribution: removed,
                        fiber_count: fiber.deg0(),
                        squarefree,
                        extension_degrees: if squarefree {
                            factor_degree_pattern(&fiber)
                        } else {
                            Vec::new()
                        },
                    },
                    removed,
                }
            })
            .collect();
        let (count, contribution, idx) = match accept(&samples, opts.targets) {
            Ok(Some(v)) => v,
            Ok(None) => continue,
            Err(e) => {
                last_err = e;
                continue;
            }
        };
        return Ok(RouteReport {
            field: format!("F_{p}"),
            degree: count,
            base_contribution: contribution,
            accepted: idx.len(),
            rejected: rejected + samples.len() - idx.len(),
            transform: std::array::from_fn(|i| std::array::from_fn(|j| field.lift(t[i][j]))),
            samples: idx.iter().map(|&i| samples[i].data.clone()).collect(),
            fulton_checks: Vec::new(),
        });
    }
    Err(last_err)
}

/// Topological degree, computed over `Q` and over `F_p`; a disagreement is an error.
pub fn topological_degree(
    map: &PlaneRationalMap,
    opts: &DegreeOptions,
) -> Result<DegreeReport, PlanemapError> {
    let exact = topological_degree_exact(map, opts)?;
    let modular = topological_degree_modular(map, opts)?;
    if exact.degree != modular.degree || exact.base_contribution != modular.base_contribution {
        return Err(PlanemapError::OracleDisagreement {
            exact: exact.degree,
            modular: modular.degree,
        });
    }
    let d = map.algebraic_degree();
    Ok(DegreeReport {
        topological_degree: exact.degree,
        algebraic_degree: d,
        bezout_bound: d * d,
        base_contribution: exact.base_contribution,
        exact,
        modular,
    })
}
