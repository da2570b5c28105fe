//! Property tests for invariants that hold for every input.

use std::collections::BTreeSet;
use std::sync::LazyLock;

use delpezzo::arith::field::rat;
use delpezzo::arith::IntMatrix;
use delpezzo::cones::{
    face_of_conic, iterate_to_fix_rays, mori_cone, nef_cone, ray_permutation, RationalCone,
};
use delpezzo::endo::{
    conic_multipliers, enumerate_lattice_automorphisms, log_degree_obstruction, validate_pullback,
    PullbackAction,
};
use delpezzo::lattice::{pair, DivisorClass, PicLattice};
use delpezzo::planemaps::{parse_form, parse_map, HomogeneousForm, PlaneRationalMap};
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

static R4: LazyLock<PicLattice> = LazyLock::new(|| PicLattice::new(4).unwrap());
static POOL: LazyLock<Vec<PullbackAction>> =
    LazyLock::new(|| enumerate_lattice_automorphisms(&R4).unwrap());
static NE4: LazyLock<RationalCone> = LazyLock::new(|| mori_cone(&R4).unwrap());

fn vector(n: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-6i64..=6, n)
}

fn lattice_and_vectors() -> impl Strategy<Value = (usize, Vec<i64>, Vec<i64>, Vec<i64>)> {
    (0usize..=8).prop_flat_map(|r| (Just(r), vector(r + 1), vector(r + 1), vector(r + 1)))
}

fn form(d: u32) -> impl Strategy<Value = HomogeneousForm> {
    let monomials: Vec<[u32; 3]> = (0..=d)
        .flat_map(|a| (0..=d - a).map(move |b| [a, b, d - a - b]))
        .collect();
    let n = monomials.len();
    prop::collection::vec(-5i64..=5, n).prop_map(move |c| {
        HomogeneousForm::new(d, monomials.iter().copied().zip(c.into_iter().map(rat))).unwrap()
    })
}

fn plane_map() -> impl Strategy<Value = PlaneRationalMap> {
    (1u32..=3)
        .prop_flat_map(|d| [form(d), form(d), form(d)])
        .prop_filter_map("all forms vanish", |f| PlaneRationalMap::new(f).ok())
}

fn proportional(a: &[BigRational; 3], b: &[BigRational; 3]) -> bool {
    (0..3).all(|i| &a[(i + 1) % 3] * &b[(i + 2) % 3] == &a[(i + 2) % 3] * &b[(i + 1) % 3])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn intersection_form_is_symmetric_and_bilinear((r, a, b, c) in lattice_and_vectors(), s in -4i64..=4) {
        let lat = PicLattice::new(r).unwrap();
        let (a, b, c) = (DivisorClass::new(a), DivisorClass::new(b), DivisorClass::new(c));
        prop_assert_eq!(lat.intersect(&a, &b).unwrap(), lat.intersect(&b, &a).unwrap());
        prop_assert_eq!(
            lat.intersect(&a.add(&b.scale(s)), &c).unwrap(),
            lat.intersect(&a, &c).unwrap() + s * lat.intersect(&b, &c).unwrap()
        );
        prop_assert_eq!(lat.self_intersection(&lat.canonical()).unwrap(), 9 - r as i64);
    }

    #[test]
    fn automorphisms_preserve_form_lines_and_line_graph(i in 0usize..120) {
        let a = &POOL[i];
        prop_assert!(a.preserves_form());
        prop_assert!(validate_pullback(a).valid);
        prop_assert_eq!(a.apply(&R4.canonical()).unwrap(), R4.canonical());
        let graph = R4.line_graph().unwrap();
        let index: Vec<usize> = graph
            .vertices
            .iter()
            .map(|l| graph.vertices.iter().position(|m| *m == a.apply(l).unwrap()).expect("lines go to lines"))
            .collect();
        let edges: BTreeSet<(usize, usize)> = graph.edges.iter().copied().collect();
        for &(u, v) in &graph.edges {
            let (x, y) = (index[u].min(index[v]), index[u].max(index[v]));
            prop_assert!(edges.contains(&(x, y)));
        }
    }

    #[test]
    fn ray_permutation_is_a_homomorphism(i in 0usize..120, j in 0usize..120) {
        let (a, b) = (POOL[i].matrix(), POOL[j].matrix());
        let pa = ray_permutation(a, &NE4).unwrap();
        let pb = ray_permutation(b, &NE4).unwrap();
        let pab = ray_permutation(&a.mul(b).unwrap(), &NE4).unwrap();
        prop_assert_eq!(pab.images, pa.compose(&pb).images);
    }

    #[test]
    fn iterates_fix_every_conic_face(i in 0usize..120) {
        let (k, mk) = iterate_to_fix_rays(POOL[i].matrix(), &NE4).unwrap();
        prop_assert!(k <= 6);
        for c in R4.enumerate_conics().unwrap() {
            let face = face_of_conic(&R4, &c).unwrap();
            for g in face.generators() {
                prop_assert!(face.contains(&mk.apply(g).unwrap()).unwrap());
            }
        }
    }

    #[test]
    fn dual_generators_pair_nonnegatively(r in 0usize..=7, weights in prop::collection::vec(0i64..=5, 1..8)) {
        let lat = PicLattice::new(r).unwrap();
        let ne = mori_cone(&lat).unwrap();
        let nef = nef_cone(&lat).unwrap();
        let gens = ne.generators();
        let mut v = vec![0i64; r + 1];
        for (k, w) in weights.iter().enumerate() {
            let g = &gens[(k * 7 + *w as usize) % gens.len()];
            v.iter_mut().zip(g).for_each(|(x, y)| *x += w * y);
        }
        for g in nef.generators() {
            prop_assert!(pair(&v, g) >= 0);
        }
    }

    #[test]
    fn multipliers_of_scalar_actions_multiply(m1 in 1i64..=6, m2 in 1i64..=6) {
        let a = PullbackAction::scalar(*R4, m1);
        let b = PullbackAction::scalar(*R4, m2);
        let ab = a.compose(&b).unwrap();
        let (ma, mb, mab) = (conic_multipliers(&a).unwrap(), conic_multipliers(&b).unwrap(), conic_multipliers(&ab).unwrap());
        for ((x, y), z) in ma.iter().zip(&mb).zip(&mab) {
            prop_assert_eq!(x.multiplier * y.multiplier, z.multiplier);
        }
    }

    #[test]
    fn obstruction_is_negative_with_three_critical_points(d in 2i64..1000) {
        prop_assert!(log_degree_obstruction(d, 3).unwrap() < 0);
        prop_assert_eq!(log_degree_obstruction(d, 3).unwrap(), 1 - d);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn map_text_round_trips(map in plane_map()) {
        prop_assert_eq!(parse_map(&map.to_text()).unwrap(), map.clone());
        for f in map.forms() {
            if !f.is_zero() {
                prop_assert_eq!(&parse_form(&f.to_text()).unwrap(), f);
            }
        }
    }

    #[test]
    fn normalization_ignores_scaling(map in plane_map(), s in prop::sample::select(vec![-7i64, -2, 3, 11])) {
        prop_assert_eq!(map.scaled(&rat(s)).unwrap(), map.clone());
        let id = PlaneRationalMap::identity();
        prop_assert_eq!(map.compose(&id).unwrap(), map.clone());
        prop_assert_eq!(id.compose(&map).unwrap(), map);
    }

    #[test]
    fn composition_agrees_with_pointwise_evaluation(
        f in plane_map(),
        g in plane_map(),
        p in prop::array::uniform3(-4i64..=4),
    ) {
        let p: [BigRational; 3] = p.map(rat);
        prop_assume!(!p.iter().all(Zero::is_zero));
        let Some(gp) = g.apply(&p) else { return Ok(()) };
        let Some(fgp) = f.apply(&gp) else { return Ok(()) };
        let fg = f.compose(&g).unwrap();
        if let Some(direct) = fg.apply(&p) {
            prop_assert!(proportional(&direct, &fgp));
        }
    }

    #[test]
    fn pullback_multiplies_class_degrees(map in plane_map(), c in (1u32..=2).prop_flat_map(form)) {
        prop_assume!(!c.is_zero());
        let (pulled, class) = map.pullback_on_classes(&c).unwrap();
        prop_assert_eq!(class, map.algebraic_degree() * c.degree());
        prop_assert!(pulled.is_zero() || pulled.degree() == class);
    }

    #[test]
    fn jacobian_degree_is_three_d_minus_three(map in plane_map()) {
        if let Ok(j) = map.jacobian_curve() {
            prop_assert_eq!(j.degree(), 3 * (map.algebraic_degree() - 1));
        }
    }
}

#[test]
fn matrix_identity_is_neutral_for_ray_permutations() {
    let id = IntMatrix::identity(5);
    assert!(ray_permutation(&id, &NE4).unwrap().is_identity());
}
