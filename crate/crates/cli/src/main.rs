use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use delpezzo::arith::IntMatrix;
use delpezzo::endo::{
    enumerate_lattice_automorphisms, log_degree_obstruction, preimage_report, run_theorem_pipeline,
    validate_pullback, CriticalSet, P1SelfMap, PipelineOutcome, PullbackAction,
};
use delpezzo::lattice::PicLattice;
use delpezzo::planemaps::{self, analyze_map, parse_map, DegreeOptions, ExceptionalImage};

/// Degrees stated for well-known maps in the literature, printed next to the
/// computed value so that any mismatch is visible.
const STATED_DEGREES: &[(&str, usize)] = &[("x0*x2 + x1^2, x1*x2 + x0^2, x0^2 + x1^2", 4)];

#[derive(Parser)]
#[command(
    name = "delpezzo",
    version,
    about = "Picard lattices of del Pezzo surfaces and rational self-maps of the plane"
)]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the (-1)-classes of the blow-up at r points.
    Lines {
        #[arg(long, value_name = "R")]
        blowups: usize,
    },
    /// List the conic classes (C² = 0, -K·C = 2).
    Conics {
        #[arg(long, value_name = "R")]
        blowups: usize,
    },
    /// Intersection graph of the lines with its basic invariants.
    Graph {
        #[arg(long, value_name = "R")]
        blowups: usize,
    },
    /// Count the lattice automorphisms fixing K (r <= 5).
    Automorphisms {
        #[arg(long, value_name = "R")]
        blowups: usize,
    },
    /// Run the reduction steps on a candidate pullback matrix.
    TheoremPipeline {
        /// Lattice size; defaults to the rank given in the matrix file, or 4.
        #[arg(long, value_name = "R")]
        blowups: Option<usize>,
        /// Matrix file: first line the rank, then the entries row by row.
        /// Defaults to the identity.
        #[arg(long, value_name = "FILE")]
        matrix: Option<PathBuf>,
    },
    /// Degree, base locus, topological degree, Jacobian and one-blowup
    /// resolution of a plane rational map "f0, f1, f2".
    AnalyzeMap {
        #[arg(value_name = "POLYS")]
        polys: String,
        /// Prime (at least 10000) for the modular fiber count.
        #[arg(long, value_name = "P")]
        field: Option<u64>,
    },
    /// Decide h⁻¹(Δ) ⊆ Δ for a self-map h of the projective line.
    P1Check {
        /// Map as "P" or "P/Q" in t, e.g. "t^2" or "(t^2 + 1)/t".
        #[arg(value_name = "MAP")]
        map: String,
        /// Comma-separated rationals and "inf", e.g. "0, 1, -1, inf".
        #[arg(value_name = "DELTA")]
        delta: String,
    },
    /// Logarithmic degree count (n - 2)(1 - deg h) for a base map of
    /// degree deg h with n critical values.
    Obstruction {
        #[arg(long, value_name = "D")]
        base_degree: i64,
        #[arg(long, value_name = "N")]
        critical_points: i64,
    },
}

enum Failure {
    Domain(String),
    Usage(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Domain(e.to_string())
    }
}

type Outcome = Result<(String, serde_json::Value), Failure>;

fn json<T: Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("serializable")
}

fn lattice(r: usize) -> Result<PicLattice, Failure> {
    Ok(PicLattice::new(r)?)
}

fn cmd_lines(r: usize) -> Outcome {
    let lines = lattice(r)?.enumerate_lines()?;
    let mut text = format!("{} lines on the blow-up at {r} points\n", lines.len());
    for l in &lines {
        writeln!(text, "  {l}").unwrap();
    }
    Ok((
        text,
        serde_json::json!({ "blowups": r, "count": lines.len(), "lines": lines }),
    ))
}

fn cmd_conics(r: usize) -> Outcome {
    let lat = lattice(r)?;
    let conics = lat.enumerate_conics()?;
    let mut text = format!(
        "{} conic classes on the blow-up at {r} points\n",
        conics.len()
    );
    let mut entries = Vec::new();
    for c in &conics {
        let fibers = lat.singular_fibers(c)?;
        writeln!(text, "  {c}  ({} singular fibers)", fibers.len()).unwrap();
        entries.push(serde_json::json!({ "class": c, "singular_fibers": fibers }));
    }
    Ok((
        text,
        serde_json::json!({ "blowups": r, "count": conics.len(), "conics": entries }),
    ))
}

fn cmd_graph(r: usize) -> Outcome {
    let g = lattice(r)?.line_graph()?;
    let autos = g.automorphisms().len();
    let regular = g.regular_degree();
    let girth = g.girth();
    let mut text = format!(
        "{} vertices, {} edges, regular degree {}, girth {}, {} automorphisms\n",
        g.vertex_count(),
        g.edges.len(),
        regular.map_or("-".into(), |d| d.to_string()),
        girth.map_or("-".into(), |d| d.to_string()),
        autos,
    );
    for (i, v) in g.vertices.iter().enumerate() {
        let nbrs: Vec<String> = g
            .edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == i {
                    Some(b)
                } else if b == i {
                    Some(a)
                } else {
                    None
                }
            })
            .map(|j| j.to_string())
            .collect();
        writeln!(text, "  {i}: {v}  -- {}", nbrs.join(" ")).unwrap();
    }
    Ok((
        text,
        serde_json::json!({
            "blowups": r,
            "graph": g,
            "regular_degree": regular,
            "girth": girth,
            "automorphisms": autos,
        }),
    ))
}

fn cmd_automorphisms(r: usize) -> Outcome {
    let autos = enumerate_lattice_automorphisms(&lattice(r)?)?;
    let mut orders = std::collections::BTreeMap::<usize, usize>::new();
    for a in &autos {
        let mut k = 1;
        let mut m = a.matrix().clone();
        while !m.is_identity() {
            m = m.mul(a.matrix())?;
            k += 1;
        }
        *orders.entry(k).or_default() += 1;
    }
    let mut text = format!(
        "{} automorphisms of the lattice fixing K (r = {r})\n",
        autos.len()
    );
    for (k, n) in &orders {
        writeln!(text, "  order {k}: {n}").unwrap();
    }
    let matrices: Vec<&IntMatrix> = autos.iter().map(|a| a.matrix()).collect();
    Ok((
        text,
        serde_json::json!({ "blowups": r, "count": autos.len(), "orders": orders, "matrices": matrices }),
    ))
}

fn read_matrix(path: &Path) -> Result<IntMatrix, Failure> {
    let src = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let mut lines = src.lines().filter(|l| !l.trim().is_empty());
    let bad = |m: &str| Failure::Usage(format!("{}: {m}", path.display()));
    let n: usize = lines
        .next()
        .ok_or_else(|| bad("empty matrix file"))?
        .trim()
        .parse()
        .map_err(|_| bad("first line must be the rank"))?;
    let entries: Vec<i64> = lines
        .flat_map(str::split_whitespace)
        .map(|t| t.parse().map_err(|_| bad(&format!("not an integer: {t}"))))
        .collect::<Result<_, _>>()?;
    if n == 0 || entries.len() != n * n {
        return Err(bad(&format!(
            "expected {} entries for rank {n}, found {}",
            n * n,
            entries.len()
        )));
    }
    Ok(IntMatrix::from_rows(
        entries.chunks(n).map(<[i64]>::to_vec).collect(),
    )?)
}

fn cmd_pipeline(blowups: Option<usize>, matrix: Option<&Path>) -> Outcome {
    let m = matrix.map(read_matrix).transpose()?;
    let r = match (&m, blowups) {
        (Some(m), Some(r)) if m.dim() != r + 1 => {
            return Err(Failure::Domain(format!(
                "matrix has rank {} but --blowups {r} needs rank {}",
                m.dim(),
                r + 1
            )))
        }
        (Some(m), _) => m.dim() - 1,
        (None, r) => r.unwrap_or(4),
    };
    let lat = lattice(r)?;
    let action = match m {
        Some(m) => PullbackAction::new(lat, m)?,
        None => PullbackAction::identity(lat),
    };
    let report = match run_theorem_pipeline(&action) {
        Ok(r) => r,
        Err(e) => {
            let v = validate_pullback(&action);
            return Err(Failure::Domain(format!(
                "{e} (determinant {})",
                v.determinant
            )));
        }
    };
    let mut text = String::new();
    writeln!(
        text,
        "validate: ok (determinant {})",
        report.validation.determinant
    )
    .unwrap();
    writeln!(
        text,
        "iterate_to_fix_rays: order {}",
        report.iteration_order
    )
    .unwrap();
    if report.descended_along.is_empty() {
        writeln!(text, "descend: already on the degree-5 surface").unwrap();
    } else {
        let along: Vec<String> = report
            .descended_along
            .iter()
            .map(ToString::to_string)
            .collect();
        writeln!(text, "descend: contracted {}", along.join(", ")).unwrap();
    }
    let ms: Vec<String> = report
        .multipliers
        .iter()
        .map(|c| format!("{}: {}", c.conic, c.multiplier))
        .collect();
    writeln!(text, "conic_multipliers: {}", ms.join("; ")).unwrap();
    match &report.outcome {
        PipelineOutcome::IdentityBranch => {
            writeln!(
                text,
                "identity_forcing_check: all multipliers are 1, the iterate is the identity"
            )
            .unwrap();
            writeln!(text, "result: identity branch (deg f = 1)").unwrap();
        }
        PipelineOutcome::ObstructionBranch {
            conic,
            multiplier,
            critical_points,
            obstruction,
        } => {
            writeln!(
                text,
                "identity_forcing_check: {conic} has multiplier {multiplier}"
            )
            .unwrap();
            writeln!(
                text,
                "log_degree_obstruction: ({critical_points} - 2)(1 - {multiplier}) = {obstruction} < 0"
            )
            .unwrap();
            writeln!(text, "result: obstruction branch").unwrap();
        }
    }
    Ok((text, json(&report)))
}

fn stated_degree(map: &planemaps::PlaneRationalMap) -> Option<usize> {
    STATED_DEGREES
        .iter()
        .find(|(text, _)| parse_map(text).is_ok_and(|m| &m == map))
        .map(|&(_, d)| d)
}

fn cmd_analyze(polys: &str, field: Option<u64>) -> Outcome {
    let map = parse_map(polys)?;
    let mut opts = DegreeOptions::default();
    if let Some(p) = field {
        opts.prime = p;
    }
    let a = analyze_map(&map, &opts)?;
    let stated = stated_degree(&map);

    let mut text = String::new();
    writeln!(text, "map: {}", a.map).unwrap();
    writeln!(text, "algebraic degree: {}", a.algebraic_degree).unwrap();
    writeln!(text, "dominant: {}", a.dominant).unwrap();
    match &a.jacobian {
        Some(j) => writeln!(
            text,
            "jacobian: {j} (degree {})",
            3 * (a.algebraic_degree.max(1) - 1)
        )
        .unwrap(),
        None => writeln!(text, "jacobian: identically zero").unwrap(),
    }
    let b = &a.base_locus;
    if b.geometric_count == 0 {
        writeln!(text, "base locus: empty").unwrap();
    } else {
        writeln!(
            text,
            "base locus: {} point(s) over the algebraic closure",
            b.geometric_count
        )
        .unwrap();
        for p in &b.rational_points {
            writeln!(text, "  {p}").unwrap();
        }
        for c in &b.clusters {
            writeln!(
                text,
                "  {} conjugate points [{} : {} : {}] with {} = 0",
                c.degree,
                c.coordinates[0],
                c.coordinates[1],
                c.coordinates[2],
                c.defining_polynomial
            )
            .unwrap();
        }
    }
    if let Some(d) = &a.topological_degree {
        writeln!(
            text,
            "topological degree: {} (= {} - {} absorbed by base points; {} targets over {}, {} over {})",
            d.topological_degree, d.bezout_bound, d.base_contribution, d.exact.accepted, d.exact.field,
            d.modular.accepted, d.modular.field
        )
        .unwrap();
        if let Some(s) = stated {
            let verdict = if s == d.topological_degree {
                "agrees"
            } else {
                "differs from the computed value"
            };
            writeln!(text, "stated degree in the literature: {s} ({verdict})").unwrap();
        }
        for c in &d.exact.fulton_checks {
            writeln!(
                text,
                "  local intersection multiplicity at {}: {} (resultant order {})",
                c.point, c.intersection_multiplicity, c.resultant_order
            )
            .unwrap();
        }
    }
    for r in &a.resolutions {
        let image = match &r.exceptional_image {
            ExceptionalImage::Point { point } => format!("the point {point}"),
            ExceptionalImage::Curve { equation, degree } => {
                format!("the curve {equation} = 0 of degree {degree}")
            }
        };
        writeln!(
            text,
            "blowup at {}: multiplicity {}, {}, exceptional curve maps to {image}",
            r.point,
            r.exceptional_multiplicity,
            if r.resolved {
                "resolved"
            } else {
                "base points remain on the exceptional curve"
            }
        )
        .unwrap();
    }
    let mut value = json(&a);
    value["stated_topological_degree"] = json(&stated);
    Ok((text, value))
}

fn cmd_p1(map: &str, delta: &str) -> Outcome {
    let h = P1SelfMap::parse(map)?;
    let d = CriticalSet::parse(delta)?;
    let report = preimage_report(&h, &d)?;
    let mut text = format!(
        "h = {}, Δ = {{{}}}: preimage {} contained\n",
        report.map,
        report.delta.join(", "),
        if report.contained { "is" } else { "is not" }
    );
    for p in &report.preimages {
        let roots: Vec<String> = p
            .rational_roots
            .iter()
            .map(|(r, m)| format!("{r} (x{m})"))
            .collect();
        let mut parts = Vec::new();
        if !roots.is_empty() {
            parts.push(roots.join(", "));
        }
        if p.infinity_multiplicity > 0 {
            parts.push(format!("inf (x{})", p.infinity_multiplicity));
        }
        if p.residual != "1" {
            parts.push(format!("roots of {}", p.residual));
        }
        writeln!(
            text,
            "  h⁻¹({}) = {}{}",
            p.point,
            parts.join(", "),
            if p.contained { "" } else { "  [not in Δ]" }
        )
        .unwrap();
    }
    Ok((text, json(&report)))
}

fn cmd_obstruction(deg_h: i64, n: i64) -> Outcome {
    let v = log_degree_obstruction(deg_h, n)?;
    let text = format!(
        "({n} - 2)(1 - {deg_h}) = {v}{}\n",
        if v < 0 { " < 0" } else { "" }
    );
    Ok((
        text,
        serde_json::json!({ "base_degree": deg_h, "critical_points": n, "obstruction": v, "negative": v < 0 }),
    ))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Lines { blowups } => cmd_lines(*blowups),
        Command::Conics { blowups } => cmd_conics(*blowups),
        Command::Graph { blowups } => cmd_graph(*blowups),
        Command::Automorphisms { blowups } => cmd_automorphisms(*blowups),
        Command::TheoremPipeline { blowups, matrix } => cmd_pipeline(*blowups, matrix.as_deref()),
        Command::AnalyzeMap { polys, field } => cmd_analyze(polys, *field),
        Command::P1Check { map, delta } => cmd_p1(map, delta),
        Command::Obstruction {
            base_degree,
            critical_points,
        } => cmd_obstruction(*base_degree, *critical_points),
    };
    match result {
        Ok((text, value)) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&value).expect("json"));
            } else {
                print!("{text}");
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Domain(msg)) => {
            if cli.json {
                println!("{}", serde_json::json!({ "error": msg }));
            }
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
