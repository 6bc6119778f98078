//! Circulation: per-edge flux ∫ f dμ, the affine solver for even circulation
//! functions (Kirchhoff + evenness), and the discrete 1-form pathway
//! (Whitney interpolation over level polylines, curl, cosets).

use crate::linalg::{solve_affine, Matrix};
use crate::mesh::{MeshError, SurfaceComplex, TriIdx, VertexIdx};
use crate::rat::{fmt_rat, rat_int, Rat};
use crate::reeb::{MeasuredReebGraph, MeshEdges, ReebError};
use num_traits::{Signed, Zero};
use std::collections::HashMap;

#[derive(Debug, thiserror::Error)]
pub enum CirculationError {
    #[error("inconsistent system: {0}")]
    Inconsistent(String),
    #[error("level {0} hits a vertex value")]
    LevelAtVertex(String),
    #[error("one-form is not even at mesh edge ({0},{1})")]
    NotEven(i64, i64),
    #[error("discrete Stokes defect {defect} exceeds the bound {bound}")]
    DefectTooLarge { defect: String, bound: String },
    #[error(transparent)]
    Reeb(#[from] ReebError),
    #[error(transparent)]
    Mesh(#[from] MeshError),
}

/// ∫ f dμ over one edge, exact from the piecewise-quadratic profile.
pub fn edge_flux(g: &MeasuredReebGraph, e: usize) -> Result<Rat, ReebError> {
    Ok(g.profile(e)?.flux())
}

/// A measured Reeb graph together with an even circulation function,
/// recorded by its tail-limit `cref` per edge. The value at level t inside
/// edge e is cref[e] + ∫_{tail}^{t} s dμ_e(s).
#[derive(Debug, Clone)]
pub struct CirculationGraph {
    pub base: MeasuredReebGraph,
    pub cref: Vec<Rat>,
}

impl CirculationGraph {
    pub fn value(&self, e: usize, t: &Rat) -> Result<Rat, ReebError> {
        Ok(&self.cref[e] + self.base.profile(e)?.partial_flux(t))
    }

    pub fn head_limit(&self, e: usize) -> Result<Rat, ReebError> {
        Ok(&self.cref[e] + self.base.profile(e)?.flux())
    }

    /// Exact residuals of the circulation-graph invariants: Kirchhoff at
    /// every node and evenness across every edge orbit.
    pub fn check(&self) -> Result<Vec<String>, ReebError> {
        let g = &self.base;
        let mut out = Vec::new();
        for n in 0..g.nodes.len() {
            let mut sum = Rat::zero();
            for (e, edge) in g.edges.iter().enumerate() {
                if edge.head == n {
                    sum += self.head_limit(e)?;
                }
                if edge.tail == n {
                    sum -= &self.cref[e];
                }
            }
            if !sum.is_zero() {
                out.push(format!("Kirchhoff residual {} at node {n}", fmt_rat(&sum)));
            }
        }
        let iota = g.iota()?;
        for e in 0..g.edges.len() {
            let ie = iota.edges[e];
            if e != ie {
                let lhs = &self.cref[e];
                let rhs = self.head_limit(ie)?;
                if lhs != &rhs {
                    out.push(format!("evenness residual {} at edge {e}", fmt_rat(&(lhs - rhs))));
                }
            }
        }
        Ok(out)
    }
}

/// Solves for all even circulation functions on g: one unknown cref per
/// edge, Kirchhoff at every node, evenness per non-fixed edge orbit.
/// Returns a particular solution and a basis of the homogeneous space,
/// whose dimension is dim H₁ᵒᵈᵈ(Γ).
pub fn solve_circulation_space(
    g: &MeasuredReebGraph,
) -> Result<(CirculationGraph, Vec<Vec<Rat>>), CirculationError> {
    let iota = g.iota()?;
    let ne = g.edges.len();
    let fluxes: Vec<Rat> = (0..ne).map(|e| edge_flux(g, e)).collect::<Result<_, _>>()?;

    let mut rows: Vec<Vec<Rat>> = Vec::new();
    let mut rhs: Vec<Rat> = Vec::new();

    // Kirchhoff: sum of incoming head-limits equals sum of outgoing
    // tail-limits; the empty side of a 1-valent node forces the limit to 0.
    for n in 0..g.nodes.len() {
        let mut row = vec![Rat::zero(); ne];
        let mut b = Rat::zero();
        for (e, edge) in g.edges.iter().enumerate() {
            if edge.head == n {
                row[e] += rat_int(1);
                b -= &fluxes[e];
            }
            if edge.tail == n {
                row[e] -= rat_int(1);
            }
        }
        rows.push(row);
        rhs.push(b);
    }
    // Evenness: cref(e) = cref(ι(e)) + flux(ι(e)) per non-fixed orbit; on
    // fixed edges the mirror profile makes evenness automatic.
    for e in 0..ne {
        let ie = iota.edges[e];
        if e < ie {
            let mut row = vec![Rat::zero(); ne];
            row[e] += rat_int(1);
            row[ie] -= rat_int(1);
            rows.push(row);
            rhs.push(fluxes[ie].clone());
        }
    }

    let a = Matrix::from_rows(rows);
    let (particular, basis) = solve_affine(&a, &rhs)
        .ok_or_else(|| CirculationError::Inconsistent("no even circulation function".into()))?;
    Ok((CirculationGraph { base: g.clone(), cref: particular }, basis))
}

/// A discrete 1-form: one rational per unordered mesh edge, read with a sign
/// through [`DiscreteOneForm::get`]. Evenness α(I(u), I(v)) = α(u, v) is a
/// property checked by [`check_even`], not forced by the container.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DiscreteOneForm {
    /// Keyed by (min vertex idx, max vertex idx); value is α oriented
    /// min -> max.
    pub values: HashMap<(VertexIdx, VertexIdx), Rat>,
}

impl DiscreteOneForm {
    pub fn get(&self, u: VertexIdx, v: VertexIdx) -> Rat {
        if u < v {
            self.values.get(&(u, v)).cloned().unwrap_or_else(Rat::zero)
        } else {
            -self.values.get(&(v, u)).cloned().unwrap_or_else(Rat::zero)
        }
    }

    pub fn set(&mut self, u: VertexIdx, v: VertexIdx, value: Rat) {
        if u < v {
            self.values.insert((u, v), value);
        } else {
            self.values.insert((v, u), -value);
        }
    }

    /// The discrete differential of a vertex function: α(u,v) = h(v) − h(u).
    pub fn exact(h: &[Rat], s: &SurfaceComplex) -> Self {
        let mut out = DiscreteOneForm::default();
        for (&(u, v), _) in s.edge_map().iter() {
            out.set(u, v, &h[v] - &h[u]);
        }
        out
    }

    pub fn add(&self, other: &DiscreteOneForm) -> Self {
        let mut out = self.clone();
        for (&(u, v), val) in &other.values {
            let cur = out.get(u, v);
            out.set(u, v, cur + val);
        }
        out
    }

    /// Pullback under the involution followed by averaging:
    /// (α + I*α)/2, which is even and has the same curl when the curl data
    /// is odd under I.
    pub fn symmetrize(&self, s: &SurfaceComplex) -> Self {
        let mut out = DiscreteOneForm::default();
        for &(u, v) in s.edge_map().keys() {
            let pulled = self.get(s.involution[u], s.involution[v]);
            out.set(u, v, (self.get(u, v) + pulled) / rat_int(2));
        }
        out
    }

    /// Mesh edges where evenness fails, as id pairs.
    pub fn check_even(&self, s: &SurfaceComplex) -> Vec<(i64, i64)> {
        let mut bad = Vec::new();
        for (&(u, v), val) in &self.values {
            if &self.get(s.involution[u], s.involution[v]) != val {
                bad.push((s.id(u), s.id(v)));
            }
        }
        bad.sort_unstable();
        bad
    }
}

/// (Σ α over the oriented boundary of T) / area(T): the discrete vorticity
/// dα/ρ per triangle.
pub fn discrete_curl(s: &SurfaceComplex, alpha: &DiscreteOneForm) -> Vec<Rat> {
    s.triangles
        .iter()
        .zip(&s.areas)
        .map(|(tri, area)| {
            let sum: Rat = (0..3).map(|k| alpha.get(tri[k], tri[(k + 1) % 3])).sum();
            sum / area
        })
        .collect()
}

/// Builds an even discrete 1-form whose curl is the mean vertex value F̄(T)
/// on every triangle: a mesh-level primitive of F·ω. Works over a dual
/// spanning tree, then symmetrizes.
pub fn build_primitive(s: &SurfaceComplex) -> Result<DiscreteOneForm, CirculationError> {
    let target: Vec<Rat> = s
        .triangles
        .iter()
        .map(|tri| (s.f(tri[0]) + s.f(tri[1]) + s.f(tri[2])) / rat_int(3))
        .collect();
    let alpha = solve_curl(s, &target)?;
    let even = alpha.symmetrize(s);
    debug_assert!(even.check_even(s).is_empty());
    Ok(even)
}

/// Solves Σ_{∂T} α = curl(T)·area(T) for all T. Consistency requires
/// Σ curl·area = 0 (the surface is closed).
pub fn solve_curl(s: &SurfaceComplex, curl: &[Rat]) -> Result<DiscreteOneForm, CirculationError> {
    let total: Rat = curl.iter().zip(&s.areas).map(|(c, a)| c * a).sum();
    if !total.is_zero() {
        return Err(CirculationError::Inconsistent(format!(
            "total curl mass {} is nonzero on a closed surface",
            fmt_rat(&total)
        )));
    }
    // Dual spanning tree: co-tree mesh edges carry α = 0; peel leaves of the
    // tree, each determining the α value toward its parent.
    let mesh = MeshEdges::new(s);
    let nt = s.triangles.len();
    let mut uf = crate::mesh::UnionFind::new(nt);
    let mut tree_adj: Vec<Vec<(TriIdx, usize)>> = vec![Vec::new(); nt];
    for (me, &[a, b]) in mesh.tris.iter().enumerate() {
        if uf.union(a, b) {
            tree_adj[a].push((b, me));
            tree_adj[b].push((a, me));
        }
    }
    let mut alpha = DiscreteOneForm::default();
    let need: Vec<Rat> =
        curl.iter().zip(&s.areas).map(|(c, a)| c * a).collect();
    let mut degree: Vec<usize> = tree_adj.iter().map(|l| l.len()).collect();
    let mut resolved = vec![false; nt];
    let mut stack: Vec<TriIdx> = (0..nt).filter(|&t| degree[t] == 1).collect();
    while let Some(t) = stack.pop() {
        if resolved[t] || degree[t] == 0 {
            continue;
        }
        // the single unresolved tree edge of t absorbs the remaining need
        let &(parent, me) = tree_adj[t]
            .iter()
            .find(|&&(p, _)| !resolved[p])
            .expect("leaf must have an unresolved neighbor");
        let (u, v) = mesh.edges[me];
        // orient (u, v) as traversed by t's boundary
        let tri = s.triangles[t];
        let k = (0..3)
            .find(|&k| {
                (tri[k] == u && tri[(k + 1) % 3] == v) || (tri[k] == v && tri[(k + 1) % 3] == u)
            })
            .unwrap();
        let (bu, bv) = (tri[k], tri[(k + 1) % 3]);
        let missing = need[t].clone() - {
            // boundary sum of already-known values
            let mut sum = Rat::zero();
            for j in 0..3 {
                if j != k {
                    sum += alpha.get(tri[j], tri[(j + 1) % 3]);
                }
            }
            sum
        };
        alpha.set(bu, bv, missing);
        resolved[t] = true;
        degree[parent] -= 1;
        if degree[parent] == 1 {
            stack.push(parent);
        }
    }
    // the root's equation must close by global consistency
    debug_assert!({
        let curls = discrete_curl(s, &alpha);
        curls.iter().zip(curl).all(|(a, b)| a == b)
    });
    Ok(alpha)
}

/// Crossing points of the level t inside a triangle: barycentric coordinates
/// of the intersection of the level line with mesh edge (u, v).
fn bary_point(s: &SurfaceComplex, tri: [VertexIdx; 3], u: VertexIdx, v: VertexIdx, t: &Rat) -> [Rat; 3] {
    let (fu, fv) = (s.f(u), s.f(v));
    let lam_u = (fv - t) / (fv - fu);
    let lam_v = rat_int(1) - &lam_u;
    let mut out = [Rat::zero(), Rat::zero(), Rat::zero()];
    for k in 0..3 {
        if tri[k] == u {
            out[k] = lam_u.clone();
        } else if tri[k] == v {
            out[k] = lam_v.clone();
        }
    }
    out
}

fn det3(a: &[Rat; 3], b: &[Rat; 3], c: &[Rat; 3]) -> Rat {
    &a[0] * (&b[1] * &c[2] - &b[2] * &c[1]) - &a[1] * (&b[0] * &c[2] - &b[2] * &c[0])
        + &a[2] * (&b[0] * &c[1] - &b[1] * &c[0])
}

/// Chord integral of the Whitney interpolant of α across one triangle, from
/// barycentric X to Y: Σ_{p<q} α(p,q) (X_p Y_q − X_q Y_p).
fn whitney_chord(alpha: &DiscreteOneForm, tri: [VertexIdx; 3], x: &[Rat; 3], y: &[Rat; 3]) -> Rat {
    let mut total = Rat::zero();
    for p in 0..3 {
        for q in (p + 1)..3 {
            let a = alpha.get(tri[p], tri[q]);
            total += a * (&x[p] * &y[q] - &x[q] * &y[p]);
        }
    }
    total
}

/// The triangles of the level component of {f = t} through `start_tri`,
/// found by brute traversal over shared crossing edges.
fn level_component(s: &SurfaceComplex, mesh: &MeshEdges, t: &Rat, start_tri: TriIdx) -> Vec<TriIdx> {
    let crosses = |me: usize| {
        let (a, b) = mesh.edges[me];
        (s.f(a) < t) != (s.f(b) < t)
    };
    let mut seen = vec![false; s.triangles.len()];
    let mut out = Vec::new();
    let mut stack = vec![start_tri];
    seen[start_tri] = true;
    while let Some(tri) = stack.pop() {
        out.push(tri);
        let vs = s.triangles[tri];
        for k in 0..3 {
            let me = mesh.idx(vs[k], vs[(k + 1) % 3]);
            if crosses(me) {
                let other = if mesh.tris[me][0] == tri { mesh.tris[me][1] } else { mesh.tris[me][0] };
                if !seen[other] {
                    seen[other] = true;
                    stack.push(other);
                }
            }
        }
    }
    out
}

/// Integrates the Whitney interpolant of α over the PL level circle of
/// {f = t} through `start_tri`, oriented so that f increases to the left of
/// the traversal (in the surface orientation).
pub fn level_cycle_circulation(
    s: &SurfaceComplex,
    alpha: &DiscreteOneForm,
    t: &Rat,
    start_tri: TriIdx,
) -> Result<Rat, CirculationError> {
    if s.vertices.iter().any(|v| &v.f == t) {
        return Err(CirculationError::LevelAtVertex(fmt_rat(t)));
    }
    let mesh = MeshEdges::new(s);
    let mut total = Rat::zero();
    for tri in level_component(s, &mesh, t, start_tri) {
        let vs = s.triangles[tri];
        // the two crossing edges of this triangle
        let mut pts: Vec<[Rat; 3]> = Vec::with_capacity(2);
        for k in 0..3 {
            let (u, v) = (vs[k], vs[(k + 1) % 3]);
            if (s.f(u) < t) != (s.f(v) < t) {
                pts.push(bary_point(s, vs, u, v, t));
            }
        }
        debug_assert_eq!(pts.len(), 2);
        let (x, y) = (pts.swap_remove(0), pts.swap_remove(0));
        // orient the chord so the top vertex (f > t) lies on its left:
        // det[X; Y; e_w] > 0 in the triangle's oriented barycentric chart
        let w = (0..3).find(|&k| s.f(vs[k]) > t).unwrap();
        let mut ew = [Rat::zero(), Rat::zero(), Rat::zero()];
        ew[w] = rat_int(1);
        let d = det3(&x, &y, &ew);
        debug_assert!(!d.is_zero());
        let chord = if d.is_positive() {
            whitney_chord(alpha, vs, &x, &y)
        } else {
            whitney_chord(alpha, vs, &y, &x)
        };
        total += chord;
    }
    Ok(total)
}

/// Circulation graph of a 1-form coset: cref(e) is the level integral just
/// above the tail of e, corrected by the partial flux to the sample level.
/// The reported defect is the worst disagreement between the tail-side and
/// head-side estimates over all edges.
pub fn coset_to_circulation_graph(
    s: &SurfaceComplex,
    alpha: &DiscreteOneForm,
    g: &MeasuredReebGraph,
    defect_bound: Option<&Rat>,
) -> Result<(CirculationGraph, Rat), CirculationError> {
    let mut values: Vec<Rat> = s.vertices.iter().map(|v| v.f.clone()).collect();
    values.sort();
    values.dedup();

    // a regular level strictly between `a` and the next vertex value
    let next_above = |a: &Rat| {
        let i = values.partition_point(|v| v <= a);
        (a + &values[i]) / rat_int(2)
    };
    let sample_below = |a: &Rat| {
        let i = values.partition_point(|v| v < a);
        debug_assert!(i > 0);
        (&values[i - 1] + a) / rat_int(2)
    };

    let mut cref = Vec::with_capacity(g.edges.len());
    let mut defect = Rat::zero();
    for (e, edge) in g.edges.iter().enumerate() {
        let profile = g.profile(e)?;
        // a triangle carrying this edge near its tail and near its head
        let find_tri = |t: &Rat| {
            g.cellmap
                .iter()
                .position(|pieces| pieces.iter().any(|p| p.edge == e && &p.lo < t && t < &p.hi))
                .ok_or_else(|| CirculationError::Inconsistent(format!("no cell for edge {e}")))
        };
        let t_lo = next_above(&g.nodes[edge.tail].f);
        let t_hi = sample_below(&g.nodes[edge.head].f);
        let tri_lo = find_tri(&t_lo)?;
        let c_lo = level_cycle_circulation(s, alpha, &t_lo, tri_lo)? - profile.partial_flux(&t_lo);
        let tri_hi = find_tri(&t_hi)?;
        let c_hi = level_cycle_circulation(s, alpha, &t_hi, tri_hi)? - profile.partial_flux(&t_hi);
        let gap = (&c_lo - &c_hi).abs();
        if gap > defect {
            defect = gap;
        }
        cref.push(c_lo);
    }
    if let Some(bound) = defect_bound {
        if &defect > bound {
            return Err(CirculationError::DefectTooLarge {
                defect: fmt_rat(&defect),
                bound: fmt_rat(bound),
            });
        }
    }
    Ok((CirculationGraph { base: g.clone(), cref }, defect))
}

/// Per-edge and global moments Iₖ = ∫ tᵏ dμ; for even k the non-orientable
/// quotient carries Iₖ/2.
#[derive(Debug, Clone)]
pub struct CasimirTable {
    pub ks: Vec<u32>,
    pub per_edge: Vec<Vec<Rat>>,
    pub global: Vec<Rat>,
    pub quotient: Vec<Option<Rat>>,
}

pub fn casimir_moments(g: &MeasuredReebGraph, ks: &[u32]) -> Result<CasimirTable, ReebError> {
    let mut per_edge = vec![Vec::with_capacity(ks.len()); g.edges.len()];
    let mut global = Vec::with_capacity(ks.len());
    let mut quotient = Vec::with_capacity(ks.len());
    for &k in ks {
        let mut total = Rat::zero();
        for e in 0..g.edges.len() {
            let m = g.profile(e)?.moment(k);
            total += &m;
            per_edge[e].push(m);
        }
        quotient.push(if k % 2 == 0 { Some(&total / rat_int(2)) } else { None });
        global.push(total);
    }
    Ok(CasimirTable { ks: ks.to_vec(), per_edge, global, quotient })
}

/// Compatibility of a graph with a surface: 2·b₁(Γ) = b₁(M) and total mass
/// equals total area.
pub fn compatibility_check(g: &MeasuredReebGraph, s: &SurfaceComplex) -> Vec<String> {
    let mut out = Vec::new();
    match (crate::homology::graph_first_betti(g), crate::mesh::topology_invariants(s)) {
        (Ok(b1g), Ok((_, b1m, _, _))) => {
            if 2 * b1g as i64 != b1m {
                out.push(format!("2 b1(Gamma) = {} but b1(M) = {}", 2 * b1g, b1m));
            }
        }
        (Err(e), _) => out.push(e.to_string()),
        (_, Err(e)) => out.push(e.to_string()),
    }
    match g.total_mass() {
        Ok(mass) => {
            if mass != s.total_area() {
                out.push(format!(
                    "total measure mismatch: mass {} vs area {}",
                    fmt_rat(&mass),
                    fmt_rat(&s.total_area())
                ));
            }
        }
        Err(e) => out.push(e.to_string()),
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{figure2_graph, figure3_graph, path_graph, perturbed_octahedron, vertical_torus};
    use crate::rat::rat;

    #[test]
    fn path_circulation_unique() {
        let (c, basis) = solve_circulation_space(&path_graph()).unwrap();
        assert!(basis.is_empty());
        assert_eq!(c.cref[0], rat_int(0));
        // C(t) = t^2 - 1 for the uniform mass-4 profile on [-1, 1]
        assert_eq!(c.value(0, &rat(1, 2)).unwrap(), rat(-3, 4));
        assert_eq!(c.value(0, &rat_int(0)).unwrap(), rat_int(-1));
        assert!(c.check().unwrap().is_empty());
    }

    #[test]
    fn figure2_dim0_figure3_dim1() {
        let (c2, basis2) = solve_circulation_space(&figure2_graph()).unwrap();
        assert_eq!(basis2.len(), 0);
        assert!(c2.check().unwrap().is_empty());

        let (c3, basis3) = solve_circulation_space(&figure3_graph()).unwrap();
        assert_eq!(basis3.len(), 1);
        assert!(c3.check().unwrap().is_empty());
        // basis supported on the parallel pair with opposite signs
        let v = &basis3[0];
        assert!(v[0].is_zero() && v[3].is_zero());
        assert_eq!(v[1], -v[2].clone());
        assert!(!v[1].is_zero());
    }

    #[test]
    fn flux_antisymmetry() {
        for g in [figure2_graph(), figure3_graph(), path_graph()] {
            let iota = g.iota().unwrap().clone();
            for e in 0..g.edges.len() {
                let f = edge_flux(&g, e).unwrap();
                let fi = edge_flux(&g, iota.edges[e]).unwrap();
                assert_eq!(f, -fi);
            }
        }
    }

    #[test]
    fn exact_form_has_zero_curl_and_zero_cycles() {
        let s = perturbed_octahedron();
        let h: Vec<Rat> = (0..s.vertex_count()).map(|v| s.f(v) * s.f(v)).collect();
        let dh = DiscreteOneForm::exact(&h, &s);
        assert!(discrete_curl(&s, &dh).iter().all(|c| c.is_zero()));
        let t = rat(1, 2);
        let val = level_cycle_circulation(&s, &dh, &t, 0).unwrap();
        assert!(val.is_zero(), "got {}", fmt_rat(&val));
    }

    #[test]
    fn primitive_has_prescribed_curl_and_is_even() {
        for s in [perturbed_octahedron(), vertical_torus(6, 6)] {
            let alpha = build_primitive(&s).unwrap();
            assert!(alpha.check_even(&s).is_empty());
            let curls = discrete_curl(&s, &alpha);
            for (tri, c) in s.triangles.iter().zip(&curls) {
                let mean = (s.f(tri[0]) + s.f(tri[1]) + s.f(tri[2])) / rat_int(3);
                assert_eq!(c, &mean);
            }
            // equivariance of the curl: odd under the triangle involution
            let img = s.triangle_image_map().unwrap();
            for t in 0..s.triangles.len() {
                assert_eq!(curls[img[t]], -curls[t].clone());
            }
        }
    }

    #[test]
    fn coset_invariance_under_exact_shift() {
        let s = perturbed_octahedron();
        let g = crate::reeb::measured_reeb_graph(&s).unwrap();
        let alpha = build_primitive(&s).unwrap();
        // even exact shift: h odd makes dh even
        let h: Vec<Rat> = (0..s.vertex_count()).map(|v| s.f(v).clone()).collect();
        let shifted = alpha.add(&DiscreteOneForm::exact(&h, &s));
        let (c1, _) = coset_to_circulation_graph(&s, &alpha, &g, None).unwrap();
        let (c2, _) = coset_to_circulation_graph(&s, &shifted, &g, None).unwrap();
        assert_eq!(c1.cref, c2.cref);
    }

    #[test]
    fn casimirs_on_path() {
        let t = casimir_moments(&path_graph(), &[0, 1, 2]).unwrap();
        assert_eq!(t.global[0], rat_int(4)); // total mass
        assert_eq!(t.global[1], rat_int(0)); // odd moment vanishes
        assert_eq!(t.global[2], rat(4, 3));
        assert_eq!(t.quotient[2], Some(rat(2, 3)));
        assert!(t.quotient[1].is_none());
    }

    #[test]
    fn compatibility_on_fixture() {
        let s = vertical_torus(8, 8);
        let g = crate::reeb::measured_reeb_graph(&s).unwrap();
        assert!(compatibility_check(&g, &s).is_empty());
        let s2 = perturbed_octahedron();
        assert!(!compatibility_check(&g, &s2).is_empty());
    }
}
