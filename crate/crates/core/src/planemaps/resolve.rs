//! One point blowup at a rational base point.
//!
//! With the point moved to the origin of the affine chart, the blowup is
//! covered by the charts `(x, y) = (u, u v)` and `(x, y) = (s t, t)`; the
//! exceptional curve is `u = 0`, respectively `t = 0`, and the point `v = ∞`
//! of the first chart is `s = 0` in the second.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::Serialize;

use crate::arith::field::fmt_rational;
use crate::arith::linalg::row_reduce;
use crate::arith::roots::{rational_roots, QPoly};
use crate::arith::{Poly, Rationals};

use super::base_locus::{format_point, is_base_point, normalize_point, solve_affine};
use super::bipoly::BiPoly;
use super::form::HomogeneousForm;
use super::local::{localize, order_at_origin};
use super::map::PlaneRationalMap;
use super::PlanemapError;

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ChartReport {
    pub chart: String,
    pub strict_transforms: [String; 3],
    /// Distinct common zeros of the strict transforms on the exceptional curve.
    pub exceptional_common_zeros: usize,
    pub rational_exceptional_zeros: Vec<String>,
    /// Distinct common zeros in the chart off the exceptional curve.
    pub other_common_zeros: usize,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExceptionalImage {
    Point { point: String },
    Curve { equation: String, degree: u32 },
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ResolutionReport {
    pub point: String,
    /// Least order of vanishing of the forms at the point.
    pub exceptional_multiplicity: usize,
    pub charts: [ChartReport; 2],
    /// No common zero of the strict transforms lies on the exceptional curve.
    pub resolved: bool,
    pub exceptional_image: ExceptionalImage,
}

fn strict_transform(p: &BiPoly<Rationals>, m: usize, first_chart: bool) -> BiPoly<Rationals> {
    let terms = p.terms().into_iter().map(|((i, j), c)| {
        let e = if first_chart {
            ((i + j - m) as u32, j as u32)
        } else {
            (i as u32, (i + j - m) as u32)
        };
        (e, c)
    });
    BiPoly::from_terms(Rationals, terms)
}

fn bi_text(p: &BiPoly<Rationals>, x: &str, y: &str) -> String {
    let mut terms = p.terms();
    if terms.is_empty() {
        return "0".into();
    }
    terms.sort_by_key(|&((i, j), _)| std::cmp::Reverse((i + j, (i, j))));
    let mut out = String::new();
    for ((i, j), c) in terms {
        let a = c.abs();
        let vars: Vec<String> = [(x, i), (y, j)]
            .iter()
            .filter(|(_, e)| *e > 0)
            .map(|(v, e)| {
                if *e == 1 {
                    v.to_string()
                } else {
                    format!("{v}^{e}")
                }
            })
            .collect();
        let body = match (vars.is_empty(), a.is_one()) {
            (true, _) => fmt_rational(&a),
            (false, true) => vars.join("*"),
            (false, false) => format!("{}*{}", fmt_rational(&a), vars.join("*")),
        };
        if out.is_empty() {
            out = if c.is_negative() {
                format!("-{body}")
            } else {
                body
            };
        } else {
            out.push_str(if c.is_negative() { " - " } else { " + " });
            out.push_str(&body);
        }
    }
    out
}

fn gcd_all(polys: &[QPoly]) -> QPoly {
    polys
        .iter()
        .fold(Poly::zero(Rationals), |acc, p| acc.gcd(p))
}

/// Squarefree gcd of the restrictions together with its rational roots.
fn exceptional_zeros(restrictions: &[QPoly]) -> (QPoly, Vec<BigRational>) {
    let g = gcd_all(restrictions);
    if g.is_zero() || g.is_constant() {
        return (Poly::one(Rationals), Vec::new());
    }
    let g = g.squarefree_part().monic();
    let roots = rational_roots(&g);
    (g, roots)
}

/// Primitive integer scaling with a positive leading coefficient.
fn primitive_form(f: &HomogeneousForm) -> HomogeneousForm {
    let den = f.denominator_lcm();
    let content = f.integer_content();
    let mut s = BigRational::new(den, content);
    if f.terms()
        .iter()
        .next_back()
        .is_some_and(|(_, c)| c.is_negative())
    {
        s = -s;
    }
    f.scale(&s)
}

/// Least-degree form vanishing on the parametrized curve `[φ0 : φ1 : φ2]`.
fn implicitize(phi: &[QPoly; 3]) -> HomogeneousForm {
    let e = phi.iter().map(|p| p.deg0()).max().unwrap_or(0);
    for k in 1..=e as u32 {
        let monomials: Vec<[u32; 3]> = (0..=k)
            .flat_map(|a| (0..=k - a).map(move |b| [a, b, k - a - b]))
            .collect();
        let images: Vec<QPoly> = monomials
            .iter()
            .map(|m| (0..3).fold(Poly::one(Rationals), |acc, i| acc.mul(&phi[i].pow(m[i]))))
            .collect();
        let rows = k as usize * e + 1;
        let mut mat: Vec<Vec<BigRational>> = (0..rows)
            .map(|s| images.iter().map(|p| p.coeff(s)).collect())
            .collect();
        let pivots = row_reduce(&mut mat);
        let Some(free) = (0..monomials.len()).find(|c| !pivots.contains(c)) else {
            continue;
        };
        let mut coeffs = vec![BigRational::zero(); monomials.len()];
        coeffs[free] = BigRational::one();
        for (r, &pc) in pivots.iter().enumerate() {
            coeffs[pc] = -mat[r][free].clone();
        }
        let form = HomogeneousForm::new(k, monomials.into_iter().zip(coeffs)).expect("homogeneous");
        return primitive_form(&form);
    }
    unreachable!("a curve of degree e is cut out by a form of degree at most e")
}

/// Blows up the rational base point `p` once and reports the strict
/// transforms in both charts, their common zeros and the image of the
/// exceptional curve.
pub fn resolve_one_blowup(
    map: &PlaneRationalMap,
    p: &[BigRational; 3],
    rng: &mut impl Rng,
) -> Result<ResolutionReport, PlanemapError> {
    if p.iter().all(|c| c.is_zero()) || !is_base_point(map, p) {
        return Err(PlanemapError::NotBasePoint(
            p.iter().map(fmt_rational).collect::<Vec<_>>().join(", "),
        ));
    }
    let p = normalize_point(p);
    let local: Vec<BiPoly<Rationals>> = map.forms().iter().map(|f| localize(f, &p)).collect();
    let m = local
        .iter()
        .filter_map(order_at_origin)
        .min()
        .expect("some form is nonzero");

    let h1: [BiPoly<Rationals>; 3] = std::array::from_fn(|i| strict_transform(&local[i], m, true));
    let h2: [BiPoly<Rationals>; 3] = std::array::from_fn(|i| strict_transform(&local[i], m, false));
    let zero = BigRational::zero();
    let r1: Vec<QPoly> = h1.iter().map(|h| h.eval_x(&zero)).collect();
    let r2: Vec<QPoly> = h2.iter().map(|h| h.eval_y(&zero)).collect();
    let (g1, roots1) = exceptional_zeros(&r1);
    let (g2, roots2) = exceptional_zeros(&r2);

    let mut charts = Vec::new();
    for (name, vars, h, g, roots) in [
        ("x = u, y = u*v", ("u", "v"), &h1, &g1, &roots1),
        ("x = s*t, y = t", ("s", "t"), &h2, &g2, &roots2),
    ] {
        let on_e = g.deg0();
        let exceptional_var = if name.starts_with("x = u") {
            vars.1
        } else {
            vars.0
        };
        let total = solve_affine(h, rng)?.geometric_count();
        charts.push(ChartReport {
            chart: name.into(),
            strict_transforms: std::array::from_fn(|i| bi_text(&h[i], vars.0, vars.1)),
            exceptional_common_zeros: on_e,
            rational_exceptional_zeros: roots
                .iter()
                .map(|r| format!("{exceptional_var} = {}", fmt_rational(r)))
                .collect(),
            other_common_zeros: total.saturating_sub(on_e),
        });
    }
    let charts: [ChartReport; 2] = charts.try_into().expect("two charts");
    let resolved = charts.iter().all(|c| c.exceptional_common_zeros == 0);

    let common = gcd_all(&r1);
    let phi: [QPoly; 3] = std::array::from_fn(|i| r1[i].div_exact(&common).expect("gcd divides"));
    let exceptional_image = if phi.iter().all(|q| q.is_constant()) {
        let point: [BigRational; 3] = std::array::from_fn(|i| phi[i].coeff(0));
        ExceptionalImage::Point {
            point: format_point(&normalize_point(&point)),
        }
    } else {
        let c = implicitize(&phi);
        ExceptionalImage::Curve {
            equation: c.to_text(),
            degree: c.degree(),
        }
    };

    Ok(ResolutionReport {
        point: format_point(&p),
        exceptional_multiplicity: m,
        charts,
        resolved,
        exceptional_image,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::field::rat;
    use crate::planemaps::parse_map;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn origin() -> [BigRational; 3] {
        [rat(0), rat(0), rat(1)]
    }

    #[test]
    fn resolves_the_quadratic_example() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let ex = parse_map("x0*x2 + x1^2, x1*x2 + x0^2, x0^2 + x1^2").unwrap();
        let r = resolve_one_blowup(&ex, &origin(), &mut rng).unwrap();
        assert_eq!(r.exceptional_multiplicity, 1);
        assert!(r.resolved);
        assert_eq!(
            r.exceptional_image,
            ExceptionalImage::Curve {
                equation: "x2".into(),
                degree: 1
            }
        );
        assert_eq!(r.charts[0].strict_transforms[1], "u + v");
    }

    #[test]
    fn cremona_point() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = parse_map("x0*x1, x1*x2, x0*x2").unwrap();
        let r = resolve_one_blowup(&m, &origin(), &mut rng).unwrap();
        assert_eq!(r.exceptional_multiplicity, 1);
        assert!(r.resolved);
        assert_eq!(
            r.exceptional_image,
            ExceptionalImage::Curve {
                equation: "x0".into(),
                degree: 1
            }
        );
    }

    #[test]
    fn unresolved_after_one_blowup() {
        // An infinitely near base point over [0:0:1] survives the first blowup.
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = parse_map("x1^2, x0*x1, x0^2 + x1*x2").unwrap();
        let r = resolve_one_blowup(&m, &origin(), &mut rng).unwrap();
        assert!(!r.resolved);
    }

    #[test]
    fn rejects_non_base_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let id = PlaneRationalMap::identity();
        assert!(matches!(
            resolve_one_blowup(&id, &origin(), &mut rng),
            Err(PlanemapError::NotBasePoint(_))
        ));
    }
}
