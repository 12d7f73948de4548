//! Plain-text mesh format.
//!
//! ```text
//! ntriangles nvertices nedges
//! x y                        (nvertices lines)
//! v0 v1 v2 refedge regiontag (ntriangles lines)
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. The edge count is
//! checked against the adjacency rebuilt from the triangles.

use std::fmt::Write as _;

use super::{Mesh, Triangle};
use crate::{Error, Result, Vec2};

pub fn write_mesh(mesh: &Mesh) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{} {} {}", mesh.num_triangles(), mesh.num_vertices(), mesh.num_edges());
    for v in mesh.vertices() {
        let _ = writeln!(s, "{:?} {:?}", v.x, v.y);
    }
    for t in mesh.triangles() {
        let [a, b, c] = t.vertices;
        let _ = writeln!(s, "{a} {b} {c} {} {}", t.refinement_edge, t.region);
    }
    s
}

pub fn read_mesh(text: &str) -> Result<Mesh> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (ln, header) = lines.next().ok_or_else(|| Error::parse(1, "missing header"))?;
    let counts: Vec<usize> = fields(ln, header, 3)?;
    let (nt, nv, ne) = (counts[0], counts[1], counts[2]);

    // cap preallocation so a hostile header cannot exhaust memory
    let mut vertices = Vec::with_capacity(nv.min(1 << 16));
    for _ in 0..nv {
        let (ln, l) = lines.next().ok_or_else(|| Error::parse(ln, "unexpected end of vertex list"))?;
        let xy: Vec<f64> = fields(ln, l, 2)?;
        vertices.push(Vec2::new(xy[0], xy[1]));
    }
    let mut triangles = Vec::with_capacity(nt.min(1 << 16));
    for _ in 0..nt {
        let (ln, l) = lines.next().ok_or_else(|| Error::parse(ln, "unexpected end of triangle list"))?;
        let parts: Vec<&str> = l.split_whitespace().collect();
        if parts.len() != 5 {
            return Err(Error::parse(ln, format!("expected 5 fields, found {}", parts.len())));
        }
        let idx = |k: usize| -> Result<usize> {
            parts[k].parse().map_err(|_| Error::parse(ln, format!("bad integer `{}`", parts[k])))
        };
        let region: i32 = parts[4]
            .parse()
            .map_err(|_| Error::parse(ln, format!("bad region tag `{}`", parts[4])))?;
        let mut t = Triangle::new([idx(0)?, idx(1)?, idx(2)?], idx(3)?);
        t.region = region;
        triangles.push(t);
    }
    if let Some((ln, _)) = lines.next() {
        return Err(Error::parse(ln, "trailing data after triangle list"));
    }
    let mesh = Mesh::from_parts(vertices, triangles)?;
    if mesh.num_edges() != ne {
        return Err(Error::InvalidMesh(format!(
            "header declares {ne} edges, triangles define {}",
            mesh.num_edges()
        )));
    }
    Ok(mesh)
}

fn fields<T: std::str::FromStr>(ln: usize, l: &str, n: usize) -> Result<Vec<T>> {
    let out: Vec<T> = l
        .split_whitespace()
        .map(|s| s.parse().map_err(|_| Error::parse(ln, format!("cannot parse `{s}`"))))
        .collect::<Result<_>>()?;
    if out.len() != n {
        return Err(Error::parse(ln, format!("expected {n} fields, found {}", out.len())));
    }
    Ok(out)
}
