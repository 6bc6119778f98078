//! Equivariant simplicial surfaces: a triangulated closed oriented surface
//! carrying a free orientation-reversing involution, an odd vertex function,
//! and per-triangle area weights. This is the double-cover model of a
//! non-orientable surface with density; all downstream invariants are
//! computed from this data.

use crate::rat::{fmt_rat, Rat};
use num_traits::Zero;
use std::collections::{BTreeMap, HashMap};

pub type VertexIdx = usize;
pub type TriIdx = usize;

#[derive(Debug, Clone)]
pub struct Vertex {
    /// External id, preserved from the input file.
    pub id: i64,
    pub f: Rat,
}

#[derive(Debug, Clone)]
pub struct SurfaceComplex {
    pub vertices: Vec<Vertex>,
    /// Ordered triples of vertex indices; the ordering is the orientation.
    pub triangles: Vec<[VertexIdx; 3]>,
    pub areas: Vec<Rat>,
    /// Vertex involution, index to index.
    pub involution: Vec<VertexIdx>,
}

#[derive(Debug, thiserror::Error)]
pub enum MeshError {
    #[error("unknown vertex id {0}")]
    UnknownVertex(i64),
    #[error("duplicate vertex id {0}")]
    DuplicateVertex(i64),
    #[error("triangle count {tris} does not match area count {areas}")]
    AreaCountMismatch { tris: usize, areas: usize },
    #[error("involution must list every vertex exactly once")]
    BadInvolutionTable,
    #[error("degenerate triangle {0:?} (repeated vertex)")]
    DegenerateTriangle([i64; 3]),
    #[error("Euler characteristic {0} is odd; a free involution pairs all cells")]
    OddEuler(i64),
    #[error("link-degenerate vertex {0} (monkey saddle); value perturbation cannot fix it")]
    LinkDegenerate(i64),
    #[error("{0}")]
    Invalid(String),
}

impl SurfaceComplex {
    /// Builds a complex from raw id-based data. Structural defects (unknown
    /// ids, count mismatches) are hard errors; semantic invariants are left
    /// to [`validate_surface`].
    pub fn new(
        vertices: Vec<(i64, Rat)>,
        triangles: Vec<[i64; 3]>,
        areas: Vec<Rat>,
        involution_pairs: Vec<(i64, i64)>,
    ) -> Result<Self, MeshError> {
        let mut id_index = HashMap::new();
        for (k, (id, _)) in vertices.iter().enumerate() {
            if id_index.insert(*id, k).is_some() {
                return Err(MeshError::DuplicateVertex(*id));
            }
        }
        let lookup = |id: i64| id_index.get(&id).copied().ok_or(MeshError::UnknownVertex(id));
        if triangles.len() != areas.len() {
            return Err(MeshError::AreaCountMismatch { tris: triangles.len(), areas: areas.len() });
        }
        let mut tris = Vec::with_capacity(triangles.len());
        for t in &triangles {
            let [a, b, c] = [lookup(t[0])?, lookup(t[1])?, lookup(t[2])?];
            if a == b || b == c || a == c {
                return Err(MeshError::DegenerateTriangle(*t));
            }
            tris.push([a, b, c]);
        }
        let mut inv = vec![usize::MAX; vertices.len()];
        for (a, b) in involution_pairs {
            let (a, b) = (lookup(a)?, lookup(b)?);
            if inv[a] != usize::MAX {
                return Err(MeshError::BadInvolutionTable);
            }
            inv[a] = b;
        }
        if inv.iter().any(|&x| x == usize::MAX) {
            return Err(MeshError::BadInvolutionTable);
        }
        Ok(SurfaceComplex {
            vertices: vertices.into_iter().map(|(id, f)| Vertex { id, f }).collect(),
            triangles: tris,
            areas,
            involution: inv,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn f(&self, v: VertexIdx) -> &Rat {
        &self.vertices[v].f
    }

    pub fn id(&self, v: VertexIdx) -> i64 {
        self.vertices[v].id
    }

    /// Strict order on vertices with index tie-break, so that equal f-values
    /// still yield a total order (simulation-of-simplicity convention).
    pub fn below(&self, u: VertexIdx, v: VertexIdx) -> bool {
        (self.f(u), u) < (self.f(v), v)
    }

    /// Undirected edge map: (min idx, max idx) -> incident triangles with the
    /// sign of the induced orientation (+ if the triangle traverses min->max).
    pub fn edge_map(&self) -> BTreeMap<(VertexIdx, VertexIdx), Vec<(TriIdx, i8)>> {
        let mut m: BTreeMap<(VertexIdx, VertexIdx), Vec<(TriIdx, i8)>> = BTreeMap::new();
        for (t, tri) in self.triangles.iter().enumerate() {
            for k in 0..3 {
                let (a, b) = (tri[k], tri[(k + 1) % 3]);
                let (key, sign) = if a < b { ((a, b), 1) } else { ((b, a), -1) };
                m.entry(key).or_default().push((t, sign));
            }
        }
        m
    }

    pub fn total_area(&self) -> Rat {
        self.areas.iter().sum()
    }

    /// Neighbors of each vertex and, per vertex, the link edges (the sides of
    /// incident triangles opposite to it).
    fn link_edges(&self) -> Vec<Vec<(VertexIdx, VertexIdx)>> {
        let mut links = vec![Vec::new(); self.vertices.len()];
        for tri in &self.triangles {
            for k in 0..3 {
                links[tri[k]].push((tri[(k + 1) % 3], tri[(k + 2) % 3]));
            }
        }
        links
    }

    /// Image triangle index under the involution, if the involution maps
    /// triangles to triangles.
    pub fn image_triangle(&self, t: TriIdx) -> Option<TriIdx> {
        let key = |mut v: [usize; 3]| {
            v.sort_unstable();
            v
        };
        // Built lazily; callers that need this in bulk use `triangle_image_map`.
        let tri = self.triangles[t];
        let img = key([self.involution[tri[0]], self.involution[tri[1]], self.involution[tri[2]]]);
        self.triangles.iter().position(|s| key(*s) == img)
    }

    /// Map from each triangle to its image under the involution.
    pub fn triangle_image_map(&self) -> Option<Vec<TriIdx>> {
        let mut by_key = HashMap::new();
        for (t, tri) in self.triangles.iter().enumerate() {
            let mut k = *tri;
            k.sort_unstable();
            by_key.insert(k, t);
        }
        let mut out = Vec::with_capacity(self.triangles.len());
        for tri in &self.triangles {
            let mut k = [self.involution[tri[0]], self.involution[tri[1]], self.involution[tri[2]]];
            k.sort_unstable();
            out.push(*by_key.get(&k)?);
        }
        Some(out)
    }
}

/// True when `b` is a cyclic rotation of `a`.
fn same_cyclic(a: [usize; 3], b: [usize; 3]) -> bool {
    (0..3).any(|r| (0..3).all(|k| a[k] == b[(k + r) % 3]))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NonManifoldEdge { u: i64, v: i64, count: usize },
    OrientationMismatch { u: i64, v: i64 },
    Disconnected,
    NotInvolution { v: i64 },
    FixedVertex { v: i64 },
    TriangleNotMapped { t: TriIdx },
    ImageOrientationNotReversed { t: TriIdx },
    FunctionNotOdd { v: i64 },
    AreaNotEven { t: TriIdx },
    NonPositiveArea { t: TriIdx },
    DuplicateFValue { value: Rat, ids: Vec<i64> },
    ZeroFValue { v: i64 },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, w: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::NonManifoldEdge { u, v, count } => {
                write!(w, "non-manifold edge ({u},{v}) lies in {count} triangles")
            }
            Violation::OrientationMismatch { u, v } => {
                write!(w, "edge ({u},{v}) has matching induced orientations; surface not globally oriented")
            }
            Violation::Disconnected => write!(w, "triangle adjacency graph is disconnected"),
            Violation::NotInvolution { v } => write!(w, "involution is not self-inverse at vertex {v}"),
            Violation::FixedVertex { v } => write!(w, "involution fixes vertex {v}"),
            Violation::TriangleNotMapped { t } => {
                write!(w, "involution does not map triangle #{t} to a triangle")
            }
            Violation::ImageOrientationNotReversed { t } => {
                write!(w, "involution preserves orientation of triangle #{t}")
            }
            Violation::FunctionNotOdd { v } => write!(w, "f(I({v})) != -f({v})"),
            Violation::AreaNotEven { t } => write!(w, "area of image of triangle #{t} differs"),
            Violation::NonPositiveArea { t } => write!(w, "triangle #{t} has non-positive area"),
            Violation::DuplicateFValue { value, ids } => {
                write!(w, "duplicate f-value {} at vertices {:?}", fmt_rat(value), ids)
            }
            Violation::ZeroFValue { v } => write!(w, "zero f-value at vertex {v}"),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    /// Valid except possibly for the vertex-level genericity convention
    /// (distinct nonzero values). Operations like perturbation only need the
    /// manifold and equivariance invariants.
    pub fn is_structurally_valid(&self) -> bool {
        self.violations.iter().all(|v| {
            matches!(v, Violation::DuplicateFValue { .. } | Violation::ZeroFValue { .. })
        })
    }
}

/// Checks every invariant of [`SurfaceComplex`]; violations are report
/// entries, never failures.
pub fn validate_surface(s: &SurfaceComplex) -> ValidationReport {
    let mut out = Vec::new();

    // Closed oriented manifold: every edge in exactly two triangles with
    // opposite induced orientations.
    let edges = s.edge_map();
    for (&(u, v), inc) in &edges {
        if inc.len() != 2 {
            out.push(Violation::NonManifoldEdge { u: s.id(u), v: s.id(v), count: inc.len() });
        } else if inc[0].1 == inc[1].1 {
            out.push(Violation::OrientationMismatch { u: s.id(u), v: s.id(v) });
        }
    }

    // Connectivity of the triangle adjacency graph.
    if !s.triangles.is_empty() {
        let mut uf = UnionFind::new(s.triangles.len());
        for inc in edges.values() {
            for w in inc.windows(2) {
                uf.union(w[0].0, w[1].0);
            }
        }
        let root = uf.find(0);
        if (0..s.triangles.len()).any(|t| uf.find(t) != root) {
            out.push(Violation::Disconnected);
        }
    }

    // Involution: self-inverse, free, odd f.
    for v in 0..s.vertex_count() {
        let iv = s.involution[v];
        if s.involution[iv] != v {
            out.push(Violation::NotInvolution { v: s.id(v) });
        }
        if iv == v {
            out.push(Violation::FixedVertex { v: s.id(v) });
        }
        if s.f(iv) != &(-s.f(v)) {
            out.push(Violation::FunctionNotOdd { v: s.id(v) });
        }
    }

    // Involution on triangles: bijective on cells, orientation-reversing,
    // area-preserving.
    match s.triangle_image_map() {
        None => {
            for (t, tri) in s.triangles.iter().enumerate() {
                let mut k = [s.involution[tri[0]], s.involution[tri[1]], s.involution[tri[2]]];
                k.sort_unstable();
                let found = s.triangles.iter().any(|s2| {
                    let mut k2 = *s2;
                    k2.sort_unstable();
                    k2 == k
                });
                if !found {
                    out.push(Violation::TriangleNotMapped { t });
                }
            }
        }
        Some(img) => {
            for (t, tri) in s.triangles.iter().enumerate() {
                let mapped = [s.involution[tri[0]], s.involution[tri[1]], s.involution[tri[2]]];
                // Reversal required: the ordered image must NOT be a cyclic
                // rotation of the stored image triangle.
                if same_cyclic(mapped, s.triangles[img[t]]) {
                    out.push(Violation::ImageOrientationNotReversed { t });
                }
                if s.areas[img[t]] != s.areas[t] {
                    out.push(Violation::AreaNotEven { t });
                }
            }
        }
    }

    for (t, a) in s.areas.iter().enumerate() {
        if a <= &Rat::zero() {
            out.push(Violation::NonPositiveArea { t });
        }
    }

    // Genericity convention: all vertex values pairwise distinct and nonzero.
    let mut by_value: BTreeMap<Rat, Vec<i64>> = BTreeMap::new();
    for v in 0..s.vertex_count() {
        by_value.entry(s.f(v).clone()).or_default().push(s.id(v));
        if s.f(v).is_zero() {
            out.push(Violation::ZeroFValue { v: s.id(v) });
        }
    }
    for (value, ids) in by_value {
        if ids.len() > 1 {
            out.push(Violation::DuplicateFValue { value, ids });
        }
    }

    ValidationReport { violations: out }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CriticalTag {
    Regular,
    Min,
    Max,
    Saddle,
    Degenerate,
}

impl CriticalTag {
    pub fn is_critical(self) -> bool {
        !matches!(self, CriticalTag::Regular)
    }

    /// Partner tag under the involution: min and max trade places.
    pub fn dual(self) -> Self {
        match self {
            CriticalTag::Min => CriticalTag::Max,
            CriticalTag::Max => CriticalTag::Min,
            other => other,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CriticalReport {
    pub tags: Vec<CriticalTag>,
    /// f-values of critical vertices, ascending.
    pub critical_values: Vec<Rat>,
    pub violations: Vec<String>,
}

impl CriticalReport {
    pub fn count(&self, tag: CriticalTag) -> usize {
        self.tags.iter().filter(|&&t| t == tag).count()
    }
}

/// Tags each vertex by lower-link component count: 0 components is a minimum,
/// 1 is regular (or a maximum when the upper link is empty), 2 a saddle, and
/// three or more a degenerate (monkey-saddle) point. Value ties are broken by
/// vertex index so the classification is total.
pub fn classify_critical_vertices(s: &SurfaceComplex) -> CriticalReport {
    let links = s.link_edges();
    let mut tags = Vec::with_capacity(s.vertex_count());
    let mut critical_values = Vec::new();
    let mut violations = Vec::new();

    for v in 0..s.vertex_count() {
        let lower = link_component_count(s, v, &links[v], true);
        let upper = link_component_count(s, v, &links[v], false);
        let tag = match (lower, upper) {
            (0, _) => CriticalTag::Min,
            (_, 0) => CriticalTag::Max,
            (1, 1) => CriticalTag::Regular,
            (2, _) | (_, 2) => CriticalTag::Saddle,
            _ => CriticalTag::Degenerate,
        };
        if tag.is_critical() {
            critical_values.push(s.f(v).clone());
            if tag == CriticalTag::Degenerate {
                violations.push(format!(
                    "degenerate vertex {} ({} lower-link components)",
                    s.id(v),
                    lower
                ));
            }
        }
        tags.push(tag);
    }
    critical_values.sort();

    // Value-level genericity violations, restricted to critical vertices for
    // the report; the full vertex-level convention lives in validate_surface.
    let mut by_value: BTreeMap<Rat, Vec<i64>> = BTreeMap::new();
    for v in 0..s.vertex_count() {
        if tags[v].is_critical() {
            by_value.entry(s.f(v).clone()).or_default().push(s.id(v));
        }
        if tags[v].is_critical() && s.f(v).is_zero() {
            violations.push(format!("critical value 0 at vertex {}", s.id(v)));
        }
    }
    for (value, ids) in by_value {
        if ids.len() > 1 {
            violations.push(format!(
                "duplicate critical value {} at {} vertices {:?}",
                fmt_rat(&value),
                ids.len(),
                ids
            ));
        }
    }

    CriticalReport { tags, critical_values, violations }
}

fn link_component_count(
    s: &SurfaceComplex,
    v: VertexIdx,
    link: &[(VertexIdx, VertexIdx)],
    lower: bool,
) -> usize {
    let side = |u: VertexIdx| if lower { s.below(u, v) } else { s.below(v, u) };
    let mut members: Vec<VertexIdx> = Vec::new();
    for &(a, b) in link {
        for u in [a, b] {
            if side(u) && !members.contains(&u) {
                members.push(u);
            }
        }
    }
    if members.is_empty() {
        return 0;
    }
    let index_of = |u: VertexIdx| members.iter().position(|&x| x == u).unwrap();
    let mut uf = UnionFind::new(members.len());
    for &(a, b) in link {
        if side(a) && side(b) {
            uf.union(index_of(a), index_of(b));
        }
    }
    let mut roots: Vec<usize> = (0..members.len()).map(|i| uf.find(i)).collect();
    roots.sort_unstable();
    roots.dedup();
    roots.len()
}

/// Violations of the simple-Morse-odd genericity conditions: degenerate
/// vertices, duplicate vertex values, values at zero.
pub fn check_simple_morse_odd(s: &SurfaceComplex) -> Vec<String> {
    let mut out = Vec::new();
    let report = classify_critical_vertices(s);
    for v in report.violations.iter().filter(|m| m.starts_with("degenerate")) {
        out.push(v.clone());
    }
    let mut by_value: BTreeMap<Rat, Vec<i64>> = BTreeMap::new();
    for v in 0..s.vertex_count() {
        by_value.entry(s.f(v).clone()).or_default().push(s.id(v));
        if s.f(v).is_zero() {
            out.push(format!("value 0 at vertex {}", s.id(v)));
        }
    }
    for (value, ids) in by_value {
        if ids.len() > 1 {
            out.push(format!(
                "duplicate value {} at {} vertices {:?}",
                fmt_rat(&value),
                ids.len(),
                ids
            ));
        }
    }
    out
}

/// Euler characteristics and first Betti numbers of the double cover M and
/// of the non-orientable quotient N: χ(M), b₁(M), χ(N), b₁(N).
pub fn topology_invariants(s: &SurfaceComplex) -> Result<(i64, i64, i64, i64), MeshError> {
    let v = s.vertex_count() as i64;
    let e = s.edge_map().len() as i64;
    let f = s.triangles.len() as i64;
    let chi_m = v - e + f;
    if chi_m.rem_euclid(2) != 0 {
        return Err(MeshError::OddEuler(chi_m));
    }
    let b1_m = 2 - chi_m;
    let chi_n = chi_m / 2;
    let b1_n = 2 - chi_n;
    Ok((chi_m, b1_m, chi_n, b1_n))
}

/// Breaks value collisions by odd per-orbit offsets below `eps`, preserving
/// f(I(v)) = -f(v) exactly. Leaves already-simple input untouched; rejects
/// link-degenerate (monkey-saddle) input, which no value perturbation fixes.
pub fn perturb_to_simple(s: &SurfaceComplex, eps: &Rat, seed: u64) -> Result<SurfaceComplex, MeshError> {
    use rand::{Rng, SeedableRng};
    assert!(eps > &Rat::zero(), "eps must be positive");

    if check_simple_morse_odd(s).is_empty() {
        return Ok(s.clone());
    }

    // Offsets must stay below every gap between distinct values, so that
    // breaking ties cannot reorder vertices that were already distinct.
    let mut values: Vec<Rat> = s.vertices.iter().map(|v| v.f.clone()).collect();
    values.sort();
    values.dedup();
    let mut bound = eps.clone();
    for w in values.windows(2) {
        let gap = (&w[1] - &w[0]) / Rat::from_integer(2.into());
        if gap < bound {
            bound = gap;
        }
    }
    // Nonzero values must also not cross zero.
    for v in &values {
        if !v.is_zero() {
            let a = crate::rat::rat_abs(v);
            if a < bound {
                bound = a;
            }
        }
    }

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut out = s.clone();
    for _attempt in 0..64 {
        // Perturb one representative per orbit among vertices involved in a
        // collision or sitting at zero; mirror with the opposite sign.
        let mut counts: HashMap<Rat, usize> = HashMap::new();
        for v in &out.vertices {
            *counts.entry(v.f.clone()).or_insert(0) += 1;
        }
        let mut done = vec![false; out.vertex_count()];
        for v in 0..out.vertex_count() {
            if done[v] {
                continue;
            }
            let iv = out.involution[v];
            let needs = counts[out.f(v)] > 1 || out.f(v).is_zero();
            if needs {
                let num = rng.gen_range(1..=4096i64);
                let delta = &bound * crate::rat::rat(num, 8192);
                out.vertices[v].f += &delta;
                out.vertices[iv].f -= &delta;
            }
            done[v] = true;
            done[iv] = true;
        }
        let remaining = check_simple_morse_odd(&out);
        if remaining.is_empty() {
            return Ok(out);
        }
        if remaining.iter().any(|m| m.starts_with("degenerate")) &&
            !remaining.iter().any(|m| m.starts_with("duplicate") || m.starts_with("value 0"))
        {
            // Values are generic but a monkey saddle persists.
            let msg = remaining.iter().find(|m| m.starts_with("degenerate")).unwrap();
            let id: i64 = msg
                .split_whitespace()
                .nth(2)
                .and_then(|x| x.parse().ok())
                .unwrap_or(-1);
            return Err(MeshError::LinkDegenerate(id));
        }
    }
    Err(MeshError::Invalid("perturbation failed to converge".into()))
}

/// Plain union-find with path halving.
pub struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), rank: vec![0; n] }
    }

    /// Adds a fresh singleton and returns its index.
    pub fn push(&mut self) -> usize {
        let i = self.parent.len();
        self.parent.push(i);
        self.rank.push(0);
        i
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
        true
    }
}
