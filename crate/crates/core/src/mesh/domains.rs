use std::collections::HashMap;

use super::{Mesh, Triangle};
use crate::{Error, Result, Vec2};

/// Benchmark domains with built-in initial triangulations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    /// `(0,1)²`, each grid square split into four by both diagonals.
    UnitSquareCrissCross,
    /// `(-1,1)² \ [0,1]×[-1,0]`, criss-cross squares.
    LShape,
    /// The disk `|x|₁ < 1` slit along `[0,1]×{0}`, with duplicated slit vertices.
    Crack,
}

impl Domain {
    pub fn name(self) -> &'static str {
        match self {
            Domain::UnitSquareCrissCross => "unit_square_crisscross",
            Domain::LShape => "l_shape",
            Domain::Crack => "crack",
        }
    }
}

impl std::str::FromStr for Domain {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unit_square_crisscross" | "unit_square" => Ok(Domain::UnitSquareCrissCross),
            "l_shape" => Ok(Domain::LShape),
            "crack" => Ok(Domain::Crack),
            _ => Err(Error::UnknownDomain(s.to_string())),
        }
    }
}

fn grid_count(side: f64, h: f64) -> Result<usize> {
    let n = side / h;
    if !(h > 0.0) || !n.is_finite() || n.round() < 1.0 || (n - n.round()).abs() > 1e-9 * n.max(1.0) {
        return Err(Error::NonDivisibleMeshSize { h, side });
    }
    Ok(n.round() as usize)
}

/// Initial triangulation of `domain` with mesh size `target_h`.
///
/// Refinement edges are the longest edge of each triangle, ties broken by
/// the lowest global edge index.
pub fn initial_mesh(domain: Domain, target_h: f64) -> Result<Mesh> {
    let (vertices, triangles) = match domain {
        Domain::UnitSquareCrissCross => {
            let n = grid_count(1.0, target_h)?;
            crisscross(n, Vec2::new(0.0, 0.0), 1.0 / n as f64, |_, _| true)
        }
        Domain::LShape => {
            let n = grid_count(1.0, target_h)?;
            let h = 1.0 / n as f64;
            // squares (i, j) with lower-left corner (-1 + i h, -1 + j h); drop x >= 0, y < 0
            crisscross(2 * n, Vec2::new(-1.0, -1.0), h, |i, j| !(i >= n && j < n))
        }
        Domain::Crack => {
            let n = grid_count(1.0, target_h)?;
            slit_diamond(n)
        }
    };
    let mesh = Mesh::from_parts(vertices, triangles)?;
    Ok(assign_longest_edges(mesh))
}

fn crisscross(
    n: usize,
    origin: Vec2,
    h: f64,
    keep: impl Fn(usize, usize) -> bool,
) -> (Vec<Vec2>, Vec<Triangle>) {
    let mut vertices = Vec::new();
    let mut corner_ids: HashMap<(usize, usize), usize> = HashMap::new();
    let mut corner = |i: usize, j: usize, vertices: &mut Vec<Vec2>| -> usize {
        *corner_ids.entry((i, j)).or_insert_with(|| {
            vertices.push(origin + Vec2::new(i as f64 * h, j as f64 * h));
            vertices.len() - 1
        })
    };
    let mut triangles = Vec::new();
    for j in 0..n {
        for i in 0..n {
            if !keep(i, j) {
                continue;
            }
            let c00 = corner(i, j, &mut vertices);
            let c10 = corner(i + 1, j, &mut vertices);
            let c11 = corner(i + 1, j + 1, &mut vertices);
            let c01 = corner(i, j + 1, &mut vertices);
            vertices.push(origin + Vec2::new((i as f64 + 0.5) * h, (j as f64 + 0.5) * h));
            let m = vertices.len() - 1;
            for (a, b) in [(c00, c10), (c10, c11), (c11, c01), (c01, c00)] {
                triangles.push(Triangle::new([m, a, b], 0));
            }
        }
    }
    (vertices, triangles)
}

/// The slit disk `{|x|₁ < 1} \ [0,1]×{0}`: each quadrant triangle is cut
/// into `n²` right triangles, with the vertices on the positive x-axis
/// duplicated so the two faces of the slit are separate boundary edges.
fn slit_diamond(n: usize) -> (Vec<Vec2>, Vec<Triangle>) {
    let h = 1.0 / n as f64;
    let mut vertices = Vec::new();
    let mut ids: HashMap<(i64, i64, u8), usize> = HashMap::new();
    let mut triangles = Vec::new();
    for q in 0..4u8 {
        let mut vertex = |i: usize, j: usize| -> usize {
            let (i, j) = (i as i64, j as i64);
            let (x, y) = match q {
                0 => (i, j),
                1 => (-j, i),
                2 => (-i, -j),
                _ => (j, -i),
            };
            // the lower face of the slit belongs to the last quadrant only
            let face = u8::from(q == 3 && y == 0 && x > 0);
            *ids.entry((x, y, face)).or_insert_with(|| {
                vertices.push(Vec2::new(x as f64 * h, y as f64 * h));
                vertices.len() - 1
            })
        };
        for j in 0..n {
            for i in 0..n - j {
                triangles.push(Triangle::new([vertex(i, j), vertex(i + 1, j), vertex(i, j + 1)], 0));
                if i + j + 1 < n {
                    triangles.push(Triangle::new([vertex(i + 1, j), vertex(i + 1, j + 1), vertex(i, j + 1)], 0));
                }
            }
        }
    }
    (vertices, triangles)
}

fn assign_longest_edges(mut mesh: Mesh) -> Mesh {
    for t in 0..mesh.triangles.len() {
        let ids = mesh.triangle_edges[t];
        let mut best = 0;
        for i in 1..3 {
            let (li, lb) = (mesh.edges[ids[i]].length, mesh.edges[ids[best]].length);
            let longer = li > lb * (1.0 + 1e-12);
            let tie = (li - lb).abs() <= lb * 1e-12;
            if longer || (tie && ids[i] < ids[best]) {
                best = i;
            }
        }
        mesh.triangles[t].refinement_edge = best;
    }
    mesh
}

#[cfg(test)]
mod tests {
    use super::*;

    fn euler_holds(m: &Mesh) -> bool {
        m.num_edges() + 1 == m.num_vertices() + m.num_triangles()
    }

    #[test]
    fn crisscross_quarter() {
        let m = initial_mesh(Domain::UnitSquareCrissCross, 0.25).unwrap();
        assert_eq!((m.num_triangles(), m.num_vertices(), m.num_edges()), (64, 41, 104));
        assert_eq!(m.ndof(), 168);
        assert!(euler_holds(&m));
        assert!((m.total_area() - 1.0).abs() < 1e-12);
        // every refinement edge is a grid side of length h
        for t in 0..m.num_triangles() {
            let e = m.triangle_edges(t)[m.triangles()[t].refinement_edge];
            assert!((m.edges()[e].length - 0.25).abs() < 1e-14);
        }
    }

    #[test]
    fn crisscross_half() {
        let m = initial_mesh(Domain::UnitSquareCrissCross, 0.5).unwrap();
        assert_eq!((m.num_triangles(), m.num_vertices(), m.num_edges()), (16, 13, 28));
    }

    #[test]
    fn l_shape_area_and_euler() {
        let m = initial_mesh(Domain::LShape, 0.25).unwrap();
        assert!((m.total_area() - 3.0).abs() < 3e-12);
        assert!(euler_holds(&m));
        assert_eq!(m.num_triangles(), 4 * 48);
        m.check_conforming().unwrap();
    }

    #[test]
    fn slit_diamond_is_split_along_the_crack() {
        let m = initial_mesh(Domain::Crack, 0.25).unwrap();
        m.check_conforming().unwrap();
        assert_eq!(m.num_triangles(), 64);
        assert!((m.total_area() - 2.0).abs() < 1e-12);
        // cut open along the slit the domain is still simply connected
        assert_eq!(m.num_vertices(), 41 + 4);
        assert!(euler_holds(&m));
        // the slit contributes 2n boundary edges on top of the 4n outer ones
        assert_eq!(m.boundary_edges().len(), 16 + 8);
        let on_slit = m
            .boundary_edges()
            .iter()
            .filter(|&&e| {
                let mid = m.edge_midpoint(e);
                mid.y.abs() < 1e-14 && mid.x > 0.0
            })
            .count();
        assert_eq!(on_slit, 8);
    }

    #[test]
    fn coarse_slit_diamond() {
        let m = initial_mesh(Domain::Crack, 0.5).unwrap();
        assert_eq!((m.num_triangles(), m.num_edges(), m.num_vertices()), (16, 30, 15));
        assert_eq!(m.ndof(), 46);
        assert_eq!(m.boundary_edges().len(), 12);
    }

    #[test]
    fn bad_sizes_rejected() {
        assert!(matches!(
            initial_mesh(Domain::UnitSquareCrissCross, 0.3),
            Err(Error::NonDivisibleMeshSize { .. })
        ));
        assert!(initial_mesh(Domain::LShape, 0.0).is_err());
        assert!(initial_mesh(Domain::Crack, -1.0).is_err());
        assert!(matches!("disk".parse::<Domain>(), Err(Error::UnknownDomain(_))));
    }
}
