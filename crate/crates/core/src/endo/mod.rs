//! Candidate pullback actions `f*` on `N¹(X)` and the reduction steps that
//! rule out surjective endomorphisms of degree > 1 on del Pezzo surfaces of
//! degree <= 5.
//!
//! A [`PullbackAction`] is validated data: an integer matrix on the lattice
//! that is checked to behave like a pullback (invertible, preserving the nef
//! cone). Matrices act on column vectors, and the same matrix is applied to
//! curve classes when permuting the rays of the Mori cone.

pub mod p1;

use serde::{Deserialize, Serialize};

use crate::arith::linalg::{self, IntMatrix, MatrixError};
use crate::cones::{self, ConeError, RayMatchFailure, RayPermutation};
use crate::lattice::{pair, DivisorClass, LatticeError, PicLattice};

pub use p1::{
    preimage_containment, preimage_report, CriticalSet, P1Error, P1SelfMap, PreimageReport,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EndoError {
    #[error("matrix has rank {got}, lattice needs {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("automorphism enumeration is limited to r <= 5 (got r = {0})")]
    UnsupportedBlowups(usize),
    #[error("action does not fix the ray of {0}")]
    RayNotFixed(DivisorClass),
    #[error("{0} is not an exceptional basis class; move it into basis position with a lattice automorphism first")]
    NotBasisClass(DivisorClass),
    #[error("image of conic {conic} is {image}, not a positive integer multiple")]
    NotProportional {
        conic: DivisorClass,
        image: DivisorClass,
    },
    #[error("identity forcing needs r = 4 (got r = {0})")]
    NeedsDegreeFive(usize),
    #[error("action does not fix every ray of the Mori cone")]
    RaysNotFixed,
    #[error("all conic multipliers are 1 but the action is not the identity")]
    ConicsDoNotForceIdentity,
    #[error("invalid obstruction input: {0}")]
    ObstructionInput(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Cone(#[from] ConeError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// Integer linear self-map of `N¹(X)` standing in for `f*`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PullbackAction {
    lattice: PicLattice,
    matrix: IntMatrix,
}

impl PullbackAction {
    pub fn new(lattice: PicLattice, matrix: IntMatrix) -> Result<Self, EndoError> {
        if matrix.dim() != lattice.rank() {
            return Err(EndoError::DimensionMismatch {
                expected: lattice.rank(),
                got: matrix.dim(),
            });
        }
        Ok(Self { lattice, matrix })
    }

    pub fn identity(lattice: PicLattice) -> Self {
        Self::scalar(lattice, 1)
    }

    pub fn scalar(lattice: PicLattice, m: i64) -> Self {
        let matrix = IntMatrix::scalar(lattice.rank(), m);
        Self { lattice, matrix }
    }

    /// The lattice automorphism induced by permuting the exceptional classes:
    /// `E_i ↦ E_{perm[i-1]}` (1-based targets).
    pub fn exceptional_permutation(lattice: PicLattice, perm: &[usize]) -> Result<Self, EndoError> {
        let n = lattice.rank();
        if perm.len() != lattice.blowups() {
            return Err(EndoError::DimensionMismatch {
                expected: lattice.blowups(),
                got: perm.len(),
            });
        }
        let mut m = IntMatrix::zeros(n);
        m.set(0, 0, 1);
        for (i, &j) in perm.iter().enumerate() {
            m.set(j, i + 1, 1);
        }
        Self::new(lattice, m)
    }

    pub fn lattice(&self) -> &PicLattice {
        &self.lattice
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn apply(&self, d: &DivisorClass) -> Result<DivisorClass, EndoError> {
        self.lattice.check(d)?;
        Ok(DivisorClass::new(self.matrix.apply(d.coeffs())?))
    }

    pub fn compose(&self, other: &Self) -> Result<Self, EndoError> {
        Self::new(self.lattice, self.matrix.mul(&other.matrix)?)
    }

    /// Whether the matrix preserves the intersection form.
    pub fn preserves_form(&self) -> bool {
        let n = self.lattice.rank();
        let cols: Vec<Vec<i64>> = (0..n).map(|j| self.matrix.column(j)).collect();
        (0..n).all(|i| {
            (0..n).all(|j| {
                let expected = if i != j {
                    0
                } else if i == 0 {
                    1
                } else {
                    -1
                };
                pair(&cols[i], &cols[j]) == expected
            })
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub determinant: String,
    pub invertible: bool,
    /// Every nef generator maps into the nef cone.
    pub nef_into: bool,
    /// The map permutes the extremal rays of the nef cone, so the image is all of Nef.
    pub nef_permutation: Option<RayPermutation>,
    /// Induced permutation of the Mori cone generators.
    pub ne_permutation: Option<RayPermutation>,
    pub ne_failure: Option<RayMatchFailure>,
    /// Set when the cones are not modelled for this lattice.
    pub unsupported: Option<String>,
    pub valid: bool,
}

/// Checks the properties a pullback action must have: invertibility over the
/// rationals and `A(Nef) = Nef`, and extracts the induced permutation of the
/// Mori cone rays.
pub fn validate_pullback(a: &PullbackAction) -> ValidationReport {
    let det = a.matrix.determinant();
    let invertible = det != 0.into();
    let mut report = ValidationReport {
        determinant: det.to_string(),
        invertible,
        nef_into: false,
        nef_permutation: None,
        ne_permutation: None,
        ne_failure: None,
        unsupported: None,
        valid: false,
    };
    let ne = match cones::mori_cone(&a.lattice) {
        Ok(c) => c,
        Err(e) => {
            report.unsupported = Some(e.to_string());
            return report;
        }
    };
    let nef = ne.dual();
    let membership = nef.membership();
    report.nef_into = nef
        .generators()
        .iter()
        .all(|g| a.matrix.apply(g).is_ok_and(|img| membership.contains(&img)));
    report.nef_permutation = cones::ray_permutation(&a.matrix, &nef).ok();
    match cones::ray_permutation(&a.matrix, &ne) {
        Ok(p) => report.ne_permutation = Some(p),
        Err(f) => report.ne_failure = Some(f),
    }
    report.valid = invertible && report.nef_into && report.nef_permutation.is_some();
    report
}

/// All integer matrices preserving the intersection form and fixing `K`.
///
/// Such a matrix sends the orthogonal exceptional classes `E_i` to pairwise
/// disjoint lines `D_i`, and fixing `K = -3H + ΣE_i` forces
/// `H ↦ (ΣD_i - K)/3`. The search runs over ordered tuples of disjoint lines
/// and keeps the integral, form-preserving candidates.
pub fn enumerate_lattice_automorphisms(
    lattice: &PicLattice,
) -> Result<Vec<PullbackAction>, EndoError> {
    let r = lattice.blowups();
    if r > 5 {
        return Err(EndoError::UnsupportedBlowups(r));
    }
    if r == 0 {
        return Ok(vec![PullbackAction::identity(*lattice)]);
    }
    let lines = lattice.enumerate_lines()?;
    let k = lattice.canonical();
    let mut out = Vec::new();
    let mut chosen: Vec<usize> = Vec::new();

    fn extend(
        lattice: &PicLattice,
        lines: &[DivisorClass],
        k: &DivisorClass,
        chosen: &mut Vec<usize>,
        out: &mut Vec<PullbackAction>,
    ) {
        if chosen.len() == lattice.blowups() {
            let sum = chosen
                .iter()
                .fold(DivisorClass::new(vec![0; lattice.rank()]), |acc, &i| {
                    acc.add(&lines[i])
                });
            let num = sum.sub(k);
            if num.coeffs().iter().any(|c| c % 3 != 0) {
                return;
            }
            let h: Vec<i64> = num.coeffs().iter().map(|c| c / 3).collect();
            let mut cols = vec![h];
            cols.extend(chosen.iter().map(|&i| lines[i].coeffs().to_vec()));
            let m = IntMatrix::from_columns(&cols).expect("square");
            let action = PullbackAction {
                lattice: *lattice,
                matrix: m,
            };
            if action.preserves_form() {
                out.push(action);
            }
            return;
        }
        for i in 0..lines.len() {
            if chosen.contains(&i) {
                continue;
            }
            if chosen
                .iter()
                .all(|&j| lattice.intersect(&lines[i], &lines[j]) == Ok(0))
            {
                chosen.push(i);
                extend(lattice, lines, k, chosen, out);
                chosen.pop();
            }
        }
    }

    extend(lattice, &lines, &k, &mut chosen, &mut out);
    out.sort_by(|a, b| a.matrix.rows().cmp(b.matrix.rows()));
    Ok(out)
}

/// Induced action on the blow-down along the exceptional basis class `d`:
/// the action on `N¹(X)/⟨d⟩`, i.e. the matrix with the row and column of `d`
/// removed.
pub fn descend_action(
    a: &PullbackAction,
    d: &DivisorClass,
) -> Result<(PullbackAction, PicLattice), EndoError> {
    let (lower, projection) = a.lattice.blow_down(d).map_err(|e| match e {
        LatticeError::NotContractible(c) => EndoError::NotBasisClass(c),
        other => other.into(),
    })?;
    let image = a.apply(d)?;
    match linalg::proportionality(d.coeffs(), image.coeffs()) {
        Some(l) if l > num_rational::BigRational::from_integer(0.into()) => {}
        _ => return Err(EndoError::RayNotFixed(d.clone())),
    }
    let drop = projection.dropped_index();
    let keep: Vec<usize> = (0..a.lattice.rank()).filter(|&i| i != drop).collect();
    let rows: Vec<Vec<i64>> = keep
        .iter()
        .map(|&i| keep.iter().map(|&j| a.matrix.get(i, j)).collect())
        .collect();
    let matrix = IntMatrix::from_rows(rows)?;
    Ok((
        PullbackAction {
            lattice: lower,
            matrix,
        },
        lower,
    ))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConicMultiplier {
    pub conic: DivisorClass,
    pub multiplier: i64,
}

/// For each conic class `C_j`, the positive integer `m_j` with `A·C_j = m_j C_j`.
pub fn conic_multipliers(a: &PullbackAction) -> Result<Vec<ConicMultiplier>, EndoError> {
    let mut out = Vec::new();
    for conic in a.lattice.enumerate_conics()? {
        let image = a.apply(&conic)?;
        let factor = linalg::proportionality(conic.coeffs(), image.coeffs());
        let multiplier = factor
            .filter(|f| f.is_integer() && *f > num_rational::BigRational::from_integer(0.into()))
            .and_then(|f| i64::try_from(f.to_integer()).ok())
            .ok_or_else(|| EndoError::NotProportional {
                conic: conic.clone(),
                image: image.clone(),
            })?;
        out.push(ConicMultiplier { conic, multiplier });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum IdentityForcing {
    /// All multipliers are 1 and the action is the identity.
    Identity,
    /// Some conic has multiplier `m > 1`.
    Witness(ConicMultiplier),
}

impl IdentityForcing {
    pub fn is_identity(&self) -> bool {
        matches!(self, IdentityForcing::Identity)
    }
}

/// On the degree-5 surface with every Mori ray fixed: either all conic
/// multipliers are 1, in which case the conics (which span `N¹`) force
/// `A = Id`, or some `m_{j0} > 1` is returned as a witness.
pub fn identity_forcing_check(a: &PullbackAction) -> Result<IdentityForcing, EndoError> {
    if a.lattice.blowups() != 4 {
        return Err(EndoError::NeedsDegreeFive(a.lattice.blowups()));
    }
    let ne = cones::mori_cone(&a.lattice)?;
    match cones::ray_permutation(&a.matrix, &ne) {
        Ok(p) if p.is_identity() => {}
        _ => return Err(EndoError::RaysNotFixed),
    }
    let multipliers = conic_multipliers(a)?;
    if let Some(w) = multipliers.iter().find(|m| m.multiplier > 1) {
        return Ok(IdentityForcing::Witness(w.clone()));
    }
    let conics: Vec<Vec<i64>> = multipliers
        .iter()
        .map(|m| m.conic.coeffs().to_vec())
        .collect();
    debug_assert_eq!(linalg::rank(&conics), a.lattice.rank());
    if !a.matrix.is_identity() {
        return Err(EndoError::ConicsDoNotForceIdentity);
    }
    Ok(IdentityForcing::Identity)
}

/// `deg(K + Δ) - deg_h · deg(K + Δ)` on `P¹` for `|Δ| = n_critical`, which
/// equals `(n_critical - 2)(1 - deg_h)`. A negative value is the contradiction.
pub fn log_degree_obstruction(deg_h: i64, n_critical: i64) -> Result<i64, EndoError> {
    if deg_h < 1 {
        return Err(EndoError::ObstructionInput(format!(
            "map degree must be >= 1, got {deg_h}"
        )));
    }
    if n_critical < 0 {
        return Err(EndoError::ObstructionInput(format!(
            "critical count must be >= 0, got {n_critical}"
        )));
    }
    Ok((n_critical - 2) * (1 - deg_h))
}

// ---------------------------------------------------------------------------
// Pipeline
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PipelineStage {
    Validate,
    IterateToFixRays,
    Descend,
    ConicMultipliers,
    IdentityForcing,
    Obstruction,
}

impl std::fmt::Display for PipelineStage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            PipelineStage::Validate => "validate",
            PipelineStage::IterateToFixRays => "iterate_to_fix_rays",
            PipelineStage::Descend => "descend",
            PipelineStage::ConicMultipliers => "conic_multipliers",
            PipelineStage::IdentityForcing => "identity_forcing_check",
            PipelineStage::Obstruction => "log_degree_obstruction",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error, Serialize, Deserialize)]
#[error("stage {stage} failed: {message}")]
pub struct PipelineError {
    pub stage: PipelineStage,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "branch", rename_all = "snake_case")]
pub enum PipelineOutcome {
    /// All multipliers are 1 after iteration: the iterate is the identity,
    /// so `f` has degree 1.
    IdentityBranch,
    /// Some conic bundle has base map of degree `m > 1` with `critical_points`
    /// singular fibers, and the logarithmic degree count is negative.
    ObstructionBranch {
        conic: DivisorClass,
        multiplier: i64,
        critical_points: i64,
        obstruction: i64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineReport {
    pub blowups: usize,
    pub validation: ValidationReport,
    pub iteration_order: usize,
    pub iterated: IntMatrix,
    /// Exceptional classes contracted (in the lattice current at each step).
    pub descended_along: Vec<DivisorClass>,
    pub reduced: IntMatrix,
    pub multipliers: Vec<ConicMultiplier>,
    pub outcome: PipelineOutcome,
}

/// Runs validate → iterate to fix rays → descend to degree 5 → conic
/// multipliers → identity forcing → logarithmic obstruction.
pub fn run_theorem_pipeline(a: &PullbackAction) -> Result<PipelineReport, PipelineError> {
    let fail = |stage: PipelineStage| {
        move |e: EndoError| PipelineError {
            stage,
            message: e.to_string(),
        }
    };
    let validation = validate_pullback(a);
    if !validation.valid {
        let why = if let Some(u) = &validation.unsupported {
            u.clone()
        } else if !validation.invertible {
            "matrix is singular".into()
        } else {
            "the nef cone is not mapped onto itself".into()
        };
        return Err(PipelineError {
            stage: PipelineStage::Validate,
            message: why,
        });
    }
    if a.lattice.blowups() < 4 {
        return Err(PipelineError {
            stage: PipelineStage::Descend,
            message: format!(
                "needs r >= 4 to reach the degree-5 surface, got r = {}",
                a.lattice.blowups()
            ),
        });
    }
    let ne = cones::mori_cone(&a.lattice)
        .map_err(|e| fail(PipelineStage::IterateToFixRays)(e.into()))?;
    let (k, mk) = cones::iterate_to_fix_rays(&a.matrix, &ne)
        .map_err(|e| fail(PipelineStage::IterateToFixRays)(e.into()))?;
    let mut current = PullbackAction {
        lattice: a.lattice,
        matrix: mk.clone(),
    };
    let mut descended = Vec::new();
    while current.lattice.blowups() > 4 {
        let e = current.lattice.exceptional(current.lattice.blowups());
        let (next, _) = descend_action(&current, &e).map_err(fail(PipelineStage::Descend))?;
        descended.push(e);
        current = next;
    }
    let multipliers = conic_multipliers(&current).map_err(fail(PipelineStage::ConicMultipliers))?;
    let forcing = identity_forcing_check(&current).map_err(fail(PipelineStage::IdentityForcing))?;
    let outcome = match forcing {
        IdentityForcing::Identity => PipelineOutcome::IdentityBranch,
        IdentityForcing::Witness(w) => {
            let n = current
                .lattice
                .singular_fibers(&w.conic)
                .map_err(|e| fail(PipelineStage::Obstruction)(e.into()))?
                .len() as i64;
            let obstruction = log_degree_obstruction(w.multiplier, n)
                .map_err(fail(PipelineStage::Obstruction))?;
            if obstruction >= 0 {
                return Err(PipelineError {
                    stage: PipelineStage::Obstruction,
                    message: format!("obstruction {obstruction} is not negative"),
                });
            }
            PipelineOutcome::ObstructionBranch {
                conic: w.conic,
                multiplier: w.multiplier,
                critical_points: n,
                obstruction,
            }
        }
    };
    Ok(PipelineReport {
        blowups: a.lattice.blowups(),
        validation,
        iteration_order: k,
        iterated: mk,
        descended_along: descended,
        reduced: current.matrix,
        multipliers,
        outcome,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dp5() -> PicLattice {
        PicLattice::new(4).unwrap()
    }

    fn swap12(l: PicLattice) -> PullbackAction {
        let mut perm: Vec<usize> = (1..=l.blowups()).collect();
        perm.swap(0, 1);
        PullbackAction::exceptional_permutation(l, &perm).unwrap()
    }

    #[test]
    fn validation_examples() {
        let id = validate_pullback(&PullbackAction::identity(dp5()));
        assert!(id.valid);
        assert!(id.ne_permutation.unwrap().is_identity());
        for m in 1..4 {
            let r = validate_pullback(&PullbackAction::scalar(dp5(), m));
            assert!(r.valid && r.ne_permutation.unwrap().is_identity());
        }
        let s = validate_pullback(&swap12(dp5()));
        assert!(s.valid);
        assert_eq!(s.ne_permutation.unwrap().order, 2);
        let neg = validate_pullback(&PullbackAction::scalar(dp5(), -1));
        assert!(!neg.valid && !neg.nef_into && neg.ne_failure.is_some());
        assert!(!validate_pullback(&PullbackAction::scalar(dp5(), 0)).valid);
    }

    #[test]
    fn automorphism_counts() {
        let counts: Vec<usize> = (0..=5)
            .map(|r| {
                enumerate_lattice_automorphisms(&PicLattice::new(r).unwrap())
                    .unwrap()
                    .len()
            })
            .collect();
        assert_eq!(counts, vec![1, 1, 2, 12, 120, 1920]);
        assert_eq!(
            enumerate_lattice_automorphisms(&PicLattice::new(6).unwrap()).unwrap_err(),
            EndoError::UnsupportedBlowups(6)
        );
    }

    #[test]
    fn descent_examples() {
        let e4 = dp5().exceptional(4);
        let (id, lower) = descend_action(&PullbackAction::identity(dp5()), &e4).unwrap();
        assert_eq!(lower.blowups(), 3);
        assert!(id.matrix().is_identity());
        let (two, _) = descend_action(&PullbackAction::scalar(dp5(), 2), &e4).unwrap();
        assert_eq!(two.matrix(), &IntMatrix::scalar(4, 2));
        let (sw, lower) = descend_action(&swap12(dp5()), &e4).unwrap();
        assert_eq!(sw, swap12(lower));
        assert_eq!(
            descend_action(&swap12(dp5()), &dp5().exceptional(1)).unwrap_err(),
            EndoError::RayNotFixed(dp5().exceptional(1))
        );
        let line = DivisorClass::new(vec![1, -1, -1, 0, 0]);
        assert!(matches!(
            descend_action(&PullbackAction::identity(dp5()), &line),
            Err(EndoError::NotBasisClass(_))
        ));
    }

    #[test]
    fn multipliers_and_forcing() {
        let id = PullbackAction::identity(dp5());
        assert!(conic_multipliers(&id)
            .unwrap()
            .iter()
            .all(|m| m.multiplier == 1));
        assert_eq!(
            identity_forcing_check(&id).unwrap(),
            IdentityForcing::Identity
        );
        for m in [2, 3] {
            let a = PullbackAction::scalar(dp5(), m);
            assert!(conic_multipliers(&a)
                .unwrap()
                .iter()
                .all(|c| c.multiplier == m));
            match identity_forcing_check(&a).unwrap() {
                IdentityForcing::Witness(w) => assert_eq!(w.multiplier, m),
                other => panic!("{other:?}"),
            }
        }
        assert_eq!(
            identity_forcing_check(&swap12(dp5())).unwrap_err(),
            EndoError::RaysNotFixed
        );
        assert!(matches!(
            conic_multipliers(&swap12(dp5())),
            Err(EndoError::NotProportional { .. })
        ));
    }

    #[test]
    fn obstruction_values() {
        assert_eq!(log_degree_obstruction(2, 3), Ok(-1));
        assert_eq!(log_degree_obstruction(1, 3), Ok(0));
        assert_eq!(log_degree_obstruction(3, 2), Ok(0));
        assert!(log_degree_obstruction(0, 3).is_err());
        assert!(log_degree_obstruction(2, -1).is_err());
    }

    #[test]
    fn pipeline_branches() {
        let id = run_theorem_pipeline(&PullbackAction::identity(dp5())).unwrap();
        assert_eq!(id.outcome, PipelineOutcome::IdentityBranch);
        let two = run_theorem_pipeline(&PullbackAction::scalar(dp5(), 2)).unwrap();
        match two.outcome {
            PipelineOutcome::ObstructionBranch {
                multiplier,
                critical_points,
                obstruction,
                ..
            } => {
                assert_eq!((multiplier, critical_points, obstruction), (2, 3, -1));
            }
            other => panic!("{other:?}"),
        }
        let sw = run_theorem_pipeline(&swap12(dp5())).unwrap();
        assert_eq!(sw.iteration_order, 2);
        let five = run_theorem_pipeline(&swap12(PicLattice::new(5).unwrap())).unwrap();
        assert_eq!(five.descended_along.len(), 1);
        assert_eq!(five.outcome, PipelineOutcome::IdentityBranch);
        let err = run_theorem_pipeline(&PullbackAction::identity(PicLattice::new(3).unwrap()))
            .unwrap_err();
        assert_eq!(err.stage, PipelineStage::Descend);
        let err = run_theorem_pipeline(&PullbackAction::scalar(dp5(), -1)).unwrap_err();
        assert_eq!(err.stage, PipelineStage::Validate);
    }
}
