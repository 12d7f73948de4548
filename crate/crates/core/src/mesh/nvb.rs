use std::collections::HashMap;

use super::{MarkKind, MarkSet, Mesh, Triangle};
use crate::{Error, Result};

/// Newest vertex bisection with closure.
///
/// Marked triangles contribute their refinement edge, marked edges are taken
/// as is. The edge set is then closed so that every triangle with a marked
/// edge also has its refinement edge marked. Each triangle is bisected
/// through its refinement edge and the children are bisected again through
/// whichever of the parent's remaining edges are marked, giving 2, 3 or 4
/// children. The input mesh is left untouched.
pub fn bisect(mesh: &Mesh, marks: &MarkSet) -> Result<Mesh> {
    let (len, kind) = match marks.kind {
        MarkKind::Edges => (mesh.num_edges(), "edge"),
        MarkKind::Triangles => (mesh.num_triangles(), "triangle"),
    };
    if let Some(&id) = marks.ids.iter().find(|&&id| id >= len) {
        return Err(Error::InvalidId { kind, id, len });
    }
    if marks.ids.is_empty() {
        return Ok(mesh.clone());
    }

    let mut marked = vec![false; mesh.num_edges()];
    match marks.kind {
        MarkKind::Edges => marks.ids.iter().for_each(|&e| marked[e] = true),
        MarkKind::Triangles => {
            for &t in &marks.ids {
                marked[mesh.triangle_edges(t)[mesh.triangles[t].refinement_edge]] = true;
            }
        }
    }
    close_marks(mesh, &mut marked);

    let mut vertices = mesh.vertices.clone();
    let mut midpoint = HashMap::new();
    for (e, _) in marked.iter().enumerate().filter(|(_, &m)| m) {
        vertices.push(mesh.edge_midpoint(e));
        let [p, q] = mesh.edges[e].vertices;
        midpoint.insert((p.min(q), p.max(q)), vertices.len() - 1);
    }

    let mut triangles = Vec::with_capacity(mesh.num_triangles() + 2 * midpoint.len());
    let mut parents = Vec::with_capacity(triangles.capacity());
    for (t, tri) in mesh.triangles.iter().enumerate() {
        let before = triangles.len();
        split(tri, &midpoint, 2, &mut triangles);
        parents.extend(std::iter::repeat_n(t, triangles.len() - before));
    }

    let refined = Mesh::from_parts(vertices, triangles)?;
    Ok(refined.with_history(mesh.level + 1, parents))
}

/// Marks refinement edges until every triangle touching a marked edge has
/// its own refinement edge marked.
fn close_marks(mesh: &Mesh, marked: &mut [bool]) {
    let mut stack: Vec<usize> = (0..mesh.num_edges()).filter(|&e| marked[e]).collect();
    while let Some(e) = stack.pop() {
        for t in mesh.edges[e].adjacent() {
            let r = mesh.triangle_edges(t)[mesh.triangles[t].refinement_edge];
            if !marked[r] {
                marked[r] = true;
                stack.push(r);
            }
        }
    }
}

fn split(
    tri: &Triangle,
    midpoint: &HashMap<(usize, usize), usize>,
    depth: u8,
    out: &mut Vec<Triangle>,
) {
    let i = tri.refinement_edge;
    let [b, c] = tri.edge_vertices(i);
    let Some(&m) = midpoint.get(&(b.min(c), b.max(c))) else {
        out.push(tri.clone());
        return;
    };
    let a = tri.vertices[i];
    let child = |vertices, refinement_edge| Triangle {
        vertices,
        refinement_edge,
        region: tri.region,
        generation: tri.generation + 1,
    };
    // the newest vertex m sits at local index 2 resp. 1; the edge opposite it
    // is the parent edge (a, b) resp. (c, a)
    let first = child([a, b, m], 2);
    let second = child([a, m, c], 1);
    for kid in [first, second] {
        if depth > 1 {
            split(&kid, midpoint, depth - 1, out);
        } else {
            out.push(kid);
        }
    }
}
