//! Rational self-maps of the projective plane: normalization, Jacobian,
//! base locus, topological degree, one-step resolution and pullbacks.

pub mod base_locus;
pub mod bipoly;
pub mod degree;
pub mod form;
pub mod local;
pub mod map;
pub mod resolve;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::expr::ParseError;

pub use base_locus::{base_locus, is_base_point, BaseLocus, BaseLocusExport, BasePoint};
pub use degree::{
    topological_degree, topological_degree_exact, topological_degree_modular, DegreeOptions,
    DegreeReport, RouteReport,
};
pub use form::HomogeneousForm;
pub use local::intersection_multiplicity;
pub use map::{parse_form, parse_map, PlaneRationalMap};
pub use resolve::{resolve_one_blowup, ExceptionalImage, ResolutionReport};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PlanemapError {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("expected 3 components, found {0}")]
    ComponentCount(usize),
    #[error("component {component} is not homogeneous (degrees {} and {})", degrees.0, degrees.1)]
    Inhomogeneous {
        component: usize,
        degrees: (u32, u32),
    },
    #[error("components have different degrees {0:?}")]
    DegreeMismatch(Vec<u32>),
    #[error("all components vanish identically")]
    AllZero,
    #[error("the zero form has no class")]
    ZeroForm,
    #[error("map is not dominant (the Jacobian determinant vanishes identically)")]
    NotDominant,
    #[error("curves share a component through the point")]
    CommonComponent,
    #[error("[{0}] is not a base point")]
    NotBasePoint(String),
    #[error("fiber counts disagree across general targets: {0:?}")]
    UnstableCount(Vec<usize>),
    #[error("exact fiber count {exact} disagrees with the modular count {modular}")]
    OracleDisagreement { exact: usize, modular: usize },
    #[error("field modulus {0} must be a prime of at least 10000")]
    BadField(u64),
    #[error("internal error: {0}")]
    Internal(String),
}

/// Everything the `analyze-map` command reports.
#[derive(Clone, Debug, Serialize)]
pub struct MapAnalysis {
    pub map: String,
    pub algebraic_degree: u32,
    pub dominant: bool,
    pub jacobian: Option<String>,
    pub base_locus: BaseLocusExport,
    pub topological_degree: Option<DegreeReport>,
    pub resolutions: Vec<ResolutionReport>,
}

pub fn analyze_map(
    map: &PlaneRationalMap,
    opts: &DegreeOptions,
) -> Result<MapAnalysis, PlanemapError> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let dominant = map.dominance_check(&mut rng);
    let locus = base_locus(map, &mut rng)?;
    let topological_degree = if dominant {
        Some(topological_degree(map, opts)?)
    } else {
        None
    };
    let resolutions = locus
        .rational_points()
        .iter()
        .map(|p| resolve_one_blowup(map, p, &mut rng))
        .collect::<Result<_, _>>()?;
    Ok(MapAnalysis {
        map: map.to_text(),
        algebraic_degree: map.algebraic_degree(),
        dominant,
        jacobian: map.jacobian_curve().ok().map(|j| j.to_text()),
        base_locus: locus.export(),
        topological_degree,
        resolutions,
    })
}
