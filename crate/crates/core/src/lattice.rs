//! The Néron–Severi lattice of a blow-up of the plane at `r` general points.
//!
//! Classes are integer vectors in the basis `(H, E_1, ..., E_r)`, where `H`
//! is the pullback of a line and `E_i` are the exceptional curves. The
//! intersection form is `diag(1, -1, ..., -1)` and the canonical class is
//! `K = -3H + E_1 + ... + E_r`. For `r <= 8` the surface is del Pezzo of
//! degree `K·K = 9 - r`.
//!
//! Points are assumed general, so a class with `D·D = -1` and `D·K = -1` is
//! identified with an actual `(-1)`-curve (a "line" in the anticanonical
//! model), and a class with `C·C = 0`, `C·K = -2` with a conic pencil.

use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

pub const MAX_BLOWUPS: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error("blow-ups of {0} points are not del Pezzo surfaces (at most {MAX_BLOWUPS} supported)")]
    Unsupported(usize),
    #[error("class has length {got}, lattice rank is {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("{0} is not a conic class (need C·C = 0, C·(-K) = 2, primitive, H-degree >= 1)")]
    NotConic(DivisorClass),
    #[error("{0} is not an exceptional basis class E_i; move it to a basis position with a lattice automorphism first")]
    NotContractible(DivisorClass),
    #[error(
        "Euler characteristic data inconsistent: ({numerator}) / ({denominator}) is not an integer"
    )]
    InconsistentEuler { numerator: i64, denominator: i64 },
    #[error(
        "singular and smooth fibers have equal Euler characteristic; the count is undetermined"
    )]
    DegenerateEuler,
}

/// Picard lattice of the plane blown up at `r` general points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PicLattice {
    r: usize,
}

/// Integer class in the `(H, E_1, ..., E_r)` basis.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DivisorClass(Vec<i64>);

impl DivisorClass {
    pub fn new(coeffs: Vec<i64>) -> Self {
        Self(coeffs)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    pub fn into_coeffs(self) -> Vec<i64> {
        self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    /// Coefficient of `H`.
    pub fn degree(&self) -> i64 {
        self.0[0]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| *c == 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, s: i64) -> Self {
        Self(self.0.iter().map(|a| a * s).collect())
    }

    fn canonical_key(&self) -> (i64, Reverse<Vec<i64>>) {
        (
            self.0[0],
            Reverse(self.0[1..].iter().map(|c| c.abs()).collect()),
        )
    }
}

impl Ord for DivisorClass {
    /// Canonical order: by `H`-degree, then `E_1` before `E_2` and so on.
    fn cmp(&self, other: &Self) -> Ordering {
        self.canonical_key()
            .cmp(&other.canonical_key())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for DivisorClass {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, &c) in self.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let name = if i == 0 {
                "H".to_string()
            } else {
                format!("E{i}")
            };
            let body = match c.abs() {
                1 => name,
                k => format!("{k}{name}"),
            };
            let sign = if c < 0 { "-" } else { "+" };
            terms.push((sign, body));
        }
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (sign, body)) in terms.iter().enumerate() {
            match (k, *sign) {
                (0, "-") => write!(f, "-{body}")?,
                (0, _) => write!(f, "{body}")?,
                (_, s) => write!(f, " {s} {body}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl PicLattice {
    pub fn new(r: usize) -> Result<Self, LatticeError> {
        if r > MAX_BLOWUPS {
            return Err(LatticeError::Unsupported(r));
        }
        Ok(Self { r })
    }

    pub fn blowups(&self) -> usize {
        self.r
    }

    pub fn rank(&self) -> usize {
        self.r + 1
    }

    /// Anticanonical degree `K·K = 9 - r`.
    pub fn degree(&self) -> i64 {
        9 - self.r as i64
    }

    /// Topological Euler characteristic of the surface, `3 + r`.
    pub fn euler_characteristic(&self) -> i64 {
        3 + self.r as i64
    }

    /// Diagonal of the intersection form.
    pub fn form(&self) -> Vec<i64> {
        std::iter::once(1)
            .chain(std::iter::repeat_n(-1, self.r))
            .collect()
    }

    pub fn basis_labels(&self) -> Vec<String> {
        std::iter::once("H".to_string())
            .chain((1..=self.r).map(|i| format!("E{i}")))
            .collect()
    }

    pub fn hyperplane(&self) -> DivisorClass {
        self.basis(0)
    }

    /// Exceptional class `E_i`, `1 <= i <= r`.
    pub fn exceptional(&self, i: usize) -> DivisorClass {
        assert!(
            (1..=self.r).contains(&i),
            "E_{i} out of range for r = {}",
            self.r
        );
        self.basis(i)
    }

    fn basis(&self, i: usize) -> DivisorClass {
        let mut v = vec![0; self.rank()];
        v[i] = 1;
        DivisorClass(v)
    }

    pub fn canonical(&self) -> DivisorClass {
        DivisorClass(
            std::iter::once(-3)
                .chain(std::iter::repeat_n(1, self.r))
                .collect(),
        )
    }

    pub fn anticanonical(&self) -> DivisorClass {
        self.canonical().scale(-1)
    }

    /// Builds a class from `a` and multiplicities: `a H - Σ b_i E_i`.
    pub fn class_from_multiplicities(&self, a: i64, b: &[i64]) -> DivisorClass {
        assert_eq!(b.len(), self.r);
        DivisorClass(std::iter::once(a).chain(b.iter().map(|x| -x)).collect())
    }

    pub fn check(&self, d: &DivisorClass) -> Result<(), LatticeError> {
        if d.rank() != self.rank() {
            return Err(LatticeError::DimensionMismatch {
                expected: self.rank(),
                got: d.rank(),
            });
        }
        Ok(())
    }

    pub fn intersect(&self, a: &DivisorClass, b: &DivisorClass) -> Result<i64, LatticeError> {
        self.check(a)?;
        self.check(b)?;
        Ok(pair(&a.0, &b.0))
    }

    pub fn self_intersection(&self, a: &DivisorClass) -> Result<i64, LatticeError> {
        self.intersect(a, a)
    }

    /// Anticanonical degree `D·(-K)`.
    pub fn anticanonical_degree(&self, d: &DivisorClass) -> Result<i64, LatticeError> {
        self.intersect(d, &self.anticanonical())
    }

    pub fn is_line(&self, d: &DivisorClass) -> bool {
        self.check(d).is_ok()
            && pair(&d.0, &d.0) == -1
            && pair(&d.0, &self.anticanonical().0) == 1
            && d.degree() >= 0
    }

    pub fn is_conic(&self, c: &DivisorClass) -> bool {
        self.check(c).is_ok()
            && pair(&c.0, &c.0) == 0
            && pair(&c.0, &self.anticanonical().0) == 2
            && c.degree() >= 1
            && crate::arith::linalg::gcd_slice(&c.0) == 1
    }

    /// All `(-1)`-classes `D = aH - Σ b_i E_i` with `D·D = -1`, `D·(-K) = 1`.
    ///
    /// Search bounds. Write `s = Σ b_i = 3a - 1` and `q = Σ b_i² = a² + 1`.
    /// Cauchy–Schwarz gives `s² <= r q`, i.e. `(3a - 1)² <= r (a² + 1)`, which
    /// caps `a` (for `r = 8`: `a² - 6a - 7 <= 0`, so `a <= 7`). Each
    /// `b_i² <= q = a² + 1` gives `|b_i| <= a + 1`. The recursion below
    /// enumerates exactly that box and prunes partial assignments with the
    /// same Cauchy–Schwarz inequality on the unassigned coordinates, so no
    /// solution is skipped. Negative `a` never occurs: by Riemann–Roch such a
    /// class is effective, and `H` is nef.
    pub fn enumerate_lines(&self) -> Result<Vec<DivisorClass>, LatticeError> {
        let r = self.r as i64;
        let mut out = Vec::new();
        let a_max = (0..)
            .take_while(|&a: &i64| (3 * a - 1).pow(2) <= r * (a * a + 1))
            .last();
        let Some(a_max) = a_max else { return Ok(out) };
        for a in 0..=a_max {
            let mut b = vec![0i64; self.r];
            search_multiplicities(&mut b, 0, 3 * a - 1, a * a + 1, a + 1, &mut |b| {
                out.push(self.class_from_multiplicities(a, b));
            });
        }
        out.sort();
        Ok(out)
    }

    /// All primitive classes with `C·C = 0`, `C·(-K) = 2` and `H`-degree `a >= 1`.
    ///
    /// Here `Σ b_i = 3a - 2` and `Σ b_i² = a²`, so Cauchy–Schwarz gives
    /// `(3a - 2)² <= r a²` and `|b_i| <= a`.
    pub fn enumerate_conics(&self) -> Result<Vec<DivisorClass>, LatticeError> {
        let r = self.r as i64;
        let mut out = Vec::new();
        // The admissible degrees form an interval starting at a = 1 (for r >= 1).
        for a in (1..).take_while(|&a: &i64| (3 * a - 2).pow(2) <= r * a * a) {
            let mut b = vec![0i64; self.r];
            search_multiplicities(&mut b, 0, 3 * a - 2, a * a, a, &mut |b| {
                let c = self.class_from_multiplicities(a, b);
                if crate::arith::linalg::gcd_slice(&c.0) == 1 {
                    out.push(c);
                }
            });
        }
        out.sort();
        Ok(out)
    }

    /// Intersection graph of the lines: an edge joins `D`, `D'` when `D·D' = 1`.
    pub fn line_graph(&self) -> Result<LineGraph, LatticeError> {
        let vertices = self.enumerate_lines()?;
        let mut edges = Vec::new();
        for i in 0..vertices.len() {
            for j in i + 1..vertices.len() {
                if pair(&vertices[i].0, &vertices[j].0) == 1 {
                    edges.push((i, j));
                }
            }
        }
        Ok(LineGraph { vertices, edges })
    }

    /// Reducible fibers of the conic bundle `|C|`: unordered pairs of lines
    /// `{D, D'}` with `D + D' = C`.
    pub fn singular_fibers(
        &self,
        c: &DivisorClass,
    ) -> Result<Vec<(DivisorClass, DivisorClass)>, LatticeError> {
        self.check(c)?;
        if !self.is_conic(c) {
            return Err(LatticeError::NotConic(c.clone()));
        }
        let lines = self.enumerate_lines()?;
        let set: BTreeSet<&DivisorClass> = lines.iter().collect();
        let mut pairs = Vec::new();
        for d in &lines {
            let rest = c.sub(d);
            if d < &rest && set.contains(&rest) {
                pairs.push((d.clone(), rest));
            }
        }
        Ok(pairs)
    }

    /// Whether the sum of all lines equals `-2K`.
    pub fn sum_of_lines_identity(&self) -> Result<bool, LatticeError> {
        let lines = self.enumerate_lines()?;
        let total = lines
            .iter()
            .fold(DivisorClass(vec![0; self.rank()]), |acc, d| acc.add(d));
        Ok(total == self.canonical().scale(-2))
    }

    /// Contracts the exceptional basis class `E_i`.
    pub fn blow_down(
        &self,
        d: &DivisorClass,
    ) -> Result<(PicLattice, ClassProjection), LatticeError> {
        self.check(d)?;
        let index = (1..=self.r)
            .find(|&i| *d == self.exceptional(i))
            .ok_or_else(|| LatticeError::NotContractible(d.clone()))?;
        Ok((
            PicLattice { r: self.r - 1 },
            ClassProjection {
                source_rank: self.rank(),
                dropped: index,
            },
        ))
    }

    pub fn export(&self) -> LatticeExport {
        LatticeExport {
            blowups: self.r,
            degree: self.degree(),
            basis: self.basis_labels(),
            form: self.form(),
            canonical: self.canonical(),
        }
    }
}

/// Intersection pairing for the diagonal form `diag(1, -1, ..., -1)`.
pub fn pair(a: &[i64], b: &[i64]) -> i64 {
    debug_assert_eq!(a.len(), b.len());
    match (a.split_first(), b.split_first()) {
        (Some((a0, ar)), Some((b0, br))) => {
            a0 * b0 - ar.iter().zip(br).map(|(x, y)| x * y).sum::<i64>()
        }
        _ => 0,
    }
}

/// Depth-first search over integer vectors `b` with `Σ b = sum`, `Σ b² = sq`,
/// `|b_i| <= bound`. Prunes with `(Σ rest)² <= (#rest)(Σ rest²)`.
fn search_multiplicities(
    b: &mut [i64],
    pos: usize,
    sum: i64,
    sq: i64,
    bound: i64,
    emit: &mut dyn FnMut(&[i64]),
) {
    let remaining = (b.len() - pos) as i64;
    if sq < 0 || sum * sum > remaining * sq {
        return;
    }
    if remaining == 0 {
        if sum == 0 && sq == 0 {
            emit(b);
        }
        return;
    }
    for v in -bound..=bound {
        if v * v > sq {
            continue;
        }
        b[pos] = v;
        search_multiplicities(b, pos + 1, sum - v, sq - v * v, bound, emit);
    }
    b[pos] = 0;
}

/// Projection `N¹(X) → N¹(X')` that forgets the contracted `E_i` coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassProjection {
    source_rank: usize,
    /// Index of the contracted class, `1..=r`.
    dropped: usize,
}

impl ClassProjection {
    pub fn dropped_index(&self) -> usize {
        self.dropped
    }

    pub fn project(&self, d: &DivisorClass) -> DivisorClass {
        assert_eq!(d.rank(), self.source_rank);
        DivisorClass(
            d.0.iter()
                .enumerate()
                .filter(|(i, _)| *i != self.dropped)
                .map(|(_, c)| *c)
                .collect(),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeExport {
    pub blowups: usize,
    pub degree: i64,
    pub basis: Vec<String>,
    pub form: Vec<i64>,
    pub canonical: DivisorClass,
}

/// Simple undirected graph on line classes; edges are sorted index pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineGraph {
    pub vertices: Vec<DivisorClass>,
    pub edges: Vec<(usize, usize)>,
}

impl LineGraph {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn adjacency(&self) -> Vec<Vec<bool>> {
        let n = self.vertices.len();
        let mut adj = vec![vec![false; n]; n];
        for &(i, j) in &self.edges {
            adj[i][j] = true;
            adj[j][i] = true;
        }
        adj
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertices.len()];
        for &(i, j) in &self.edges {
            deg[i] += 1;
            deg[j] += 1;
        }
        deg
    }

    /// Common degree if the graph is regular.
    pub fn regular_degree(&self) -> Option<usize> {
        let deg = self.degrees();
        let first = *deg.first()?;
        deg.iter().all(|d| *d == first).then_some(first)
    }

    /// Length of a shortest cycle, `None` for forests.
    pub fn girth(&self) -> Option<usize> {
        let n = self.vertices.len();
        let adj = self.adjacency();
        let mut best: Option<usize> = None;
        for s in 0..n {
            let mut dist = vec![usize::MAX; n];
            let mut parent = vec![usize::MAX; n];
            dist[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for v in 0..n {
                    if !adj[u][v] {
                        continue;
                    }
                    if dist[v] == usize::MAX {
                        dist[v] = dist[u] + 1;
                        parent[v] = u;
                        queue.push_back(v);
                    } else if parent[u] != v {
                        let len = dist[u] + dist[v] + 1;
                        best = Some(best.map_or(len, |b| b.min(len)));
                    }
                }
            }
        }
        best
    }

    /// All vertex permutations preserving adjacency, found by backtracking.
    pub fn automorphisms(&self) -> Vec<Vec<usize>> {
        let n = self.vertices.len();
        let adj = self.adjacency();
        let deg = self.degrees();
        let mut out = Vec::new();
        let mut image = vec![usize::MAX; n];
        let mut used = vec![false; n];
        extend_automorphism(0, &adj, &deg, &mut image, &mut used, &mut out);
        out
    }

    /// Whether a vertex permutation preserves adjacency.
    pub fn is_automorphism(&self, perm: &[usize]) -> bool {
        let adj = self.adjacency();
        let n = self.vertices.len();
        perm.len() == n && (0..n).all(|i| (0..n).all(|j| adj[i][j] == adj[perm[i]][perm[j]]))
    }

    pub fn is_vertex_transitive(&self) -> bool {
        let n = self.vertices.len();
        if n == 0 {
            return true;
        }
        let orbit: BTreeSet<usize> = self.automorphisms().iter().map(|p| p[0]).collect();
        orbit.len() == n
    }
}

fn extend_automorphism(
    k: usize,
    adj: &[Vec<bool>],
    deg: &[usize],
    image: &mut [usize],
    used: &mut [bool],
    out: &mut Vec<Vec<usize>>,
) {
    let n = adj.len();
    if k == n {
        out.push(image.to_vec());
        return;
    }
    for cand in 0..n {
        if used[cand] || deg[cand] != deg[k] {
            continue;
        }
        if (0..k).all(|j| adj[k][j] == adj[cand][image[j]]) {
            image[k] = cand;
            used[cand] = true;
            extend_automorphism(k + 1, adj, deg, image, used, out);
            used[cand] = false;
        }
    }
    image[k] = usize::MAX;
}

/// Number of reducible fibers of a conic bundle from Euler characteristics:
/// `e(X) = e(base)·e(fiber) + s·(e(singular fiber) - e(fiber))`.
pub fn euler_singular_fiber_count(
    e_total: i64,
    e_base: i64,
    e_fiber: i64,
    e_sing: i64,
) -> Result<i64, LatticeError> {
    let denominator = e_sing - e_fiber;
    if denominator == 0 {
        return Err(LatticeError::DegenerateEuler);
    }
    let numerator = e_total - e_base * e_fiber;
    if numerator % denominator != 0 {
        return Err(LatticeError::InconsistentEuler {
            numerator,
            denominator,
        });
    }
    Ok(numerator / denominator)
}
