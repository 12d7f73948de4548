//! Conforming triangle meshes with edge adjacency and newest vertex bisection.
//!
//! Local edge `i` of a triangle is the edge opposite its local vertex `i`.
//! Triangles are stored counter-clockwise. Every edge carries a fixed unit
//! tangent `τ_E` and normal `ν_E = (τ_y, -τ_x)`, where `ν_E` points out of the
//! first adjacent triangle.

mod domains;
mod io;
mod nvb;

use std::collections::HashMap;

pub use domains::{initial_mesh, Domain};
pub use io::{read_mesh, write_mesh};
pub use nvb::bisect;

use crate::{Error, Result, Vec2};

#[derive(Clone, Debug, PartialEq)]
pub struct Triangle {
    pub vertices: [usize; 3],
    /// Local index of the edge bisected next.
    pub refinement_edge: usize,
    pub region: i32,
    pub generation: u32,
}

impl Triangle {
    pub fn new(vertices: [usize; 3], refinement_edge: usize) -> Self {
        Self { vertices, refinement_edge, region: 0, generation: 0 }
    }

    /// Global vertex ids of local edge `i`, in counter-clockwise order.
    pub fn edge_vertices(&self, i: usize) -> [usize; 2] {
        [self.vertices[(i + 1) % 3], self.vertices[(i + 2) % 3]]
    }
}

#[derive(Clone, Debug)]
pub struct Edge {
    /// Endpoints, ordered as traversed by the first adjacent triangle.
    pub vertices: [usize; 2],
    /// First adjacent triangle and, for interior edges, the second.
    pub triangles: (usize, Option<usize>),
    /// Local index of this edge in each adjacent triangle.
    pub local: (usize, usize),
    pub tangent: Vec2,
    pub normal: Vec2,
    pub length: f64,
}

impl Edge {
    pub fn is_boundary(&self) -> bool {
        self.triangles.1.is_none()
    }

    pub fn adjacent(&self) -> impl Iterator<Item = usize> + '_ {
        std::iter::once(self.triangles.0).chain(self.triangles.1)
    }

    /// `+1` if `ν_E` points out of `t`, `-1` otherwise.
    pub fn orientation(&self, t: usize) -> f64 {
        if self.triangles.0 == t {
            1.0
        } else {
            -1.0
        }
    }
}

/// Per-triangle geometric data.
#[derive(Clone, Debug)]
pub struct TriangleGeometry {
    pub area: f64,
    pub centroid: Vec2,
    /// Longest edge length.
    pub diameter: f64,
    /// Outward unit normals of local edges 0, 1, 2.
    pub normals: [Vec2; 3],
    /// Counter-clockwise unit tangents of local edges 0, 1, 2.
    pub tangents: [Vec2; 3],
}

#[derive(Clone, Debug)]
pub struct Mesh {
    vertices: Vec<Vec2>,
    triangles: Vec<Triangle>,
    edges: Vec<Edge>,
    triangle_edges: Vec<[usize; 3]>,
    boundary_edges: Vec<usize>,
    areas: Vec<f64>,
    level: usize,
    parents: Vec<usize>,
}

/// Orientation tolerance relative to the squared local edge length.
const DEGENERATE_REL: f64 = 1e-12;

impl Mesh {
    /// Builds edge adjacency and validates the triangulation.
    ///
    /// Clockwise triangles are flipped (swapping local vertices 1 and 2 and
    /// remapping the refinement edge). Rejects collinear triangles, repeated
    /// vertices, edges shared by more than two triangles and neighbours that
    /// traverse their common edge in the same direction.
    pub fn from_parts(vertices: Vec<Vec2>, mut triangles: Vec<Triangle>) -> Result<Self> {
        if triangles.is_empty() {
            return Err(Error::InvalidMesh("no triangles".into()));
        }
        if let Some(i) = vertices.iter().position(|v| !(v.x.is_finite() && v.y.is_finite())) {
            return Err(Error::InvalidMesh(format!("vertex {i} has non-finite coordinates")));
        }
        let mut areas = Vec::with_capacity(triangles.len());
        for (t, tri) in triangles.iter_mut().enumerate() {
            if tri.refinement_edge > 2 {
                return Err(Error::InvalidMesh(format!(
                    "triangle {t} has refinement edge {} (expected 0, 1 or 2)",
                    tri.refinement_edge
                )));
            }
            for &v in &tri.vertices {
                if v >= vertices.len() {
                    return Err(Error::InvalidId { kind: "vertex", id: v, len: vertices.len() });
                }
            }
            let [a, b, c] = tri.vertices;
            if a == b || b == c || a == c {
                return Err(Error::InvalidMesh(format!("triangle {t} repeats a vertex")));
            }
            let mut area = signed_area(&vertices[a], &vertices[b], &vertices[c]);
            let scale = [(a, b), (b, c), (c, a)]
                .iter()
                .map(|&(i, j)| (vertices[i] - vertices[j]).norm_squared())
                .fold(0.0, f64::max);
            if !(area.abs() > DEGENERATE_REL * scale) {
                return Err(Error::DegenerateTriangle { triangle: t, area });
            }
            if area < 0.0 {
                tri.vertices.swap(1, 2);
                tri.refinement_edge = match tri.refinement_edge {
                    1 => 2,
                    2 => 1,
                    e => e,
                };
                area = -area;
            }
            areas.push(area);
        }

        let mut lookup: HashMap<(usize, usize), usize> = HashMap::with_capacity(triangles.len() * 2);
        let mut edges: Vec<Edge> = Vec::with_capacity(triangles.len() * 3 / 2 + 2);
        let mut triangle_edges = Vec::with_capacity(triangles.len());
        for (t, tri) in triangles.iter().enumerate() {
            let mut ids = [0; 3];
            for (i, id) in ids.iter_mut().enumerate() {
                let [p, q] = tri.edge_vertices(i);
                let key = (p.min(q), p.max(q));
                match lookup.get(&key) {
                    Some(&e) => {
                        let edge = &mut edges[e];
                        if edge.triangles.1.is_some() {
                            return Err(Error::InvalidMesh(format!(
                                "edge ({p}, {q}) is shared by more than two triangles"
                            )));
                        }
                        if edge.vertices == [p, q] {
                            return Err(Error::InvalidMesh(format!(
                                "triangles {} and {t} overlap across edge ({p}, {q})",
                                edge.triangles.0
                            )));
                        }
                        edge.triangles.1 = Some(t);
                        edge.local.1 = i;
                        *id = e;
                    }
                    None => {
                        let d = vertices[q] - vertices[p];
                        let length = d.norm();
                        let tangent = d / length;
                        edges.push(Edge {
                            vertices: [p, q],
                            triangles: (t, None),
                            local: (i, i),
                            tangent,
                            normal: Vec2::new(tangent.y, -tangent.x),
                            length,
                        });
                        lookup.insert(key, edges.len() - 1);
                        *id = edges.len() - 1;
                    }
                }
            }
            triangle_edges.push(ids);
        }
        let boundary_edges = (0..edges.len()).filter(|&e| edges[e].is_boundary()).collect();
        Ok(Self {
            vertices,
            triangles,
            edges,
            triangle_edges,
            boundary_edges,
            areas,
            level: 0,
            parents: Vec::new(),
        })
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[Triangle] {
        &self.triangles
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Degrees of freedom of the RT0 x P0 pair: one per edge plus one per triangle.
    pub fn ndof(&self) -> usize {
        self.edges.len() + self.triangles.len()
    }

    pub fn boundary_edges(&self) -> &[usize] {
        &self.boundary_edges
    }

    /// Edge ids of local edges 0, 1, 2 of triangle `t`.
    pub fn triangle_edges(&self, t: usize) -> [usize; 3] {
        self.triangle_edges[t]
    }

    pub fn level(&self) -> usize {
        self.level
    }

    /// For a refined mesh, the parent triangle (in the previous level) of each triangle.
    pub fn parents(&self) -> &[usize] {
        &self.parents
    }

    pub fn area(&self, t: usize) -> f64 {
        self.areas[t]
    }

    pub fn total_area(&self) -> f64 {
        self.areas.iter().sum()
    }

    pub fn corners(&self, t: usize) -> [Vec2; 3] {
        self.triangles[t].vertices.map(|v| self.vertices[v])
    }

    pub fn centroid(&self, t: usize) -> Vec2 {
        let [a, b, c] = self.corners(t);
        (a + b + c) / 3.0
    }

    pub fn edge_midpoint(&self, e: usize) -> Vec2 {
        let [p, q] = self.edges[e].vertices;
        (self.vertices[p] + self.vertices[q]) * 0.5
    }

    /// Longest edge length of triangle `t`.
    pub fn diameter(&self, t: usize) -> f64 {
        self.triangle_edges[t].iter().map(|&e| self.edges[e].length).fold(0.0, f64::max)
    }

    pub fn triangle_geometry(&self, t: usize) -> Result<TriangleGeometry> {
        if t >= self.triangles.len() {
            return Err(Error::InvalidId { kind: "triangle", id: t, len: self.triangles.len() });
        }
        let tri = &self.triangles[t];
        let mut normals = [Vec2::zeros(); 3];
        let mut tangents = [Vec2::zeros(); 3];
        for i in 0..3 {
            let [p, q] = tri.edge_vertices(i);
            let tau = (self.vertices[q] - self.vertices[p]).normalize();
            tangents[i] = tau;
            normals[i] = Vec2::new(tau.y, -tau.x);
        }
        Ok(TriangleGeometry {
            area: self.areas[t],
            centroid: self.centroid(t),
            diameter: self.diameter(t),
            normals,
            tangents,
        })
    }

    /// Gradients of the barycentric coordinates of triangle `t`.
    pub fn barycentric_gradients(&self, t: usize) -> [Vec2; 3] {
        let x = self.corners(t);
        let two_area = 2.0 * self.areas[t];
        std::array::from_fn(|i| {
            let d = x[(i + 2) % 3] - x[(i + 1) % 3];
            Vec2::new(-d.y, d.x) / two_area
        })
    }

    /// Checks the combinatorial conformity invariants; used by tests and the
    /// refinement routine.
    pub fn check_conforming(&self) -> Result<()> {
        for (e, edge) in self.edges.iter().enumerate() {
            let (t0, t1) = edge.triangles;
            let tv = self.triangles[t0].edge_vertices(edge.local.0);
            if tv != edge.vertices {
                return Err(Error::InvalidMesh(format!("edge {e} disagrees with triangle {t0}")));
            }
            if let Some(t1) = t1 {
                let [p, q] = self.triangles[t1].edge_vertices(edge.local.1);
                if [q, p] != edge.vertices {
                    return Err(Error::InvalidMesh(format!("edge {e} disagrees with triangle {t1}")));
                }
            }
        }
        for (t, ids) in self.triangle_edges.iter().enumerate() {
            for (i, &e) in ids.iter().enumerate() {
                let edge = &self.edges[e];
                let ok = (edge.triangles.0 == t && edge.local.0 == i)
                    || (edge.triangles.1 == Some(t) && edge.local.1 == i);
                if !ok {
                    return Err(Error::InvalidMesh(format!("triangle {t} edge {i} incidence broken")));
                }
            }
        }
        Ok(())
    }

    pub(crate) fn with_history(mut self, level: usize, parents: Vec<usize>) -> Self {
        self.level = level;
        self.parents = parents;
        self
    }
}

pub(crate) fn signed_area(a: &Vec2, b: &Vec2, c: &Vec2) -> f64 {
    0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y))
}

/// Which entities a [`MarkSet`] refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MarkKind {
    Edges,
    Triangles,
}

/// Which rule produced a marking.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CaseLabel {
    /// Edge-estimator bulk marking.
    A,
    /// Volume-estimator bulk marking.
    B,
    Collective,
    Uniform,
}

impl CaseLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            CaseLabel::A => "A",
            CaseLabel::B => "B",
            CaseLabel::Collective => "collective",
            CaseLabel::Uniform => "uniform",
        }
    }
}

impl std::str::FromStr for CaseLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" => Ok(CaseLabel::A),
            "B" => Ok(CaseLabel::B),
            "collective" => Ok(CaseLabel::Collective),
            "uniform" => Ok(CaseLabel::Uniform),
            _ => Err(Error::Config(format!("unknown marking case `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MarkSet {
    pub kind: MarkKind,
    pub ids: Vec<usize>,
    pub case: CaseLabel,
}

impl MarkSet {
    pub fn triangles(ids: Vec<usize>, case: CaseLabel) -> Self {
        Self { kind: MarkKind::Triangles, ids, case }
    }

    pub fn edges(ids: Vec<usize>, case: CaseLabel) -> Self {
        Self { kind: MarkKind::Edges, ids, case }
    }

    pub fn all_triangles(mesh: &Mesh) -> Self {
        Self::triangles((0..mesh.num_triangles()).collect(), CaseLabel::Uniform)
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single(p: [Vec2; 3]) -> Mesh {
        Mesh::from_parts(p.to_vec(), vec![Triangle::new([0, 1, 2], 0)]).unwrap()
    }

    #[test]
    fn unit_right_triangle_geometry() {
        let m = single([Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)]);
        let g = m.triangle_geometry(0).unwrap();
        assert!((g.area - 0.5).abs() < 1e-15);
        assert!((g.centroid - Vec2::new(1.0 / 3.0, 1.0 / 3.0)).norm() < 1e-15);
        assert!((g.diameter - 2f64.sqrt()).abs() < 1e-15);
        for i in 0..3 {
            assert!(g.normals[i].dot(&g.tangents[i]).abs() < 1e-15);
            // outward: the normal points away from the opposite vertex
            let mid = m.edge_midpoint(m.triangle_edges(0)[i]);
            assert!(g.normals[i].dot(&(mid - m.corners(0)[i])) > 0.0);
        }
        assert!(matches!(m.triangle_geometry(1), Err(Error::InvalidId { .. })));
    }

    #[test]
    fn equilateral_area() {
        let h = 3f64.sqrt() / 2.0;
        let m = single([Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(0.5, h)]);
        assert!((m.area(0) - 3f64.sqrt() / 4.0).abs() < 1e-15);
    }

    #[test]
    fn collinear_rejected() {
        let p = vec![Vec2::new(0.0, 0.0), Vec2::new(1.0, 1.0), Vec2::new(2.0, 2.0)];
        let r = Mesh::from_parts(p, vec![Triangle::new([0, 1, 2], 0)]);
        assert!(matches!(r, Err(Error::DegenerateTriangle { triangle: 0, .. })));
    }

    #[test]
    fn clockwise_input_is_flipped() {
        let p = vec![Vec2::new(0.0, 0.0), Vec2::new(0.0, 1.0), Vec2::new(1.0, 0.0)];
        // local edge 1 is (v2, v0) = the bottom leg
        let m = Mesh::from_parts(p, vec![Triangle::new([0, 1, 2], 1)]).unwrap();
        let t = &m.triangles()[0];
        assert_eq!(t.vertices, [0, 2, 1]);
        let [a, b] = t.edge_vertices(t.refinement_edge);
        let mut ends = [a, b];
        ends.sort();
        assert_eq!(ends, [0, 2]);
    }

    #[test]
    fn normals_point_out_of_first_triangle() {
        let p = vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(1.0, 1.0),
            Vec2::new(0.0, 1.0),
        ];
        let m = Mesh::from_parts(p, vec![Triangle::new([0, 1, 2], 1), Triangle::new([0, 2, 3], 2)])
            .unwrap();
        m.check_conforming().unwrap();
        assert_eq!(m.num_edges(), 5);
        assert_eq!(m.boundary_edges().len(), 4);
        for edge in m.edges() {
            let t = edge.triangles.0;
            let c = m.centroid(t);
            let mid = (m.vertices()[edge.vertices[0]] + m.vertices()[edge.vertices[1]]) * 0.5;
            assert!(edge.normal.dot(&(mid - c)) > 0.0);
            assert!((edge.normal.norm() - 1.0).abs() < 1e-15);
            assert!(edge.normal.dot(&edge.tangent).abs() < 1e-15);
        }
    }

    #[test]
    fn overlapping_triangles_rejected() {
        let p = vec![Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0), Vec2::new(0.2, 0.2)];
        let r = Mesh::from_parts(p, vec![Triangle::new([0, 1, 2], 0), Triangle::new([0, 1, 3], 0)]);
        assert!(matches!(r, Err(Error::InvalidMesh(_))));
    }

    #[test]
    fn barycentric_gradients_sum_to_zero() {
        let m = single([Vec2::new(0.1, 0.2), Vec2::new(1.3, 0.0), Vec2::new(0.4, 0.9)]);
        let g = m.barycentric_gradients(0);
        assert!((g[0] + g[1] + g[2]).norm() < 1e-14);
        let x = m.corners(0);
        for i in 0..3 {
            for j in 0..3 {
                // λ_i(x_j) - λ_i(x_0) = ∇λ_i · (x_j - x_0)
                let expect = (i == j) as i32 as f64 - (i == 0) as i32 as f64;
                assert!((g[i].dot(&(x[j] - x[0])) - expect).abs() < 1e-14);
            }
        }
    }
}
