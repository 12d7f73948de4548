//! Legacy ASCII VTK output of a mesh with cellwise `u_h` and `p_h(mid T)`.

use std::fmt::Write as _;
use std::path::Path;

use crate::mesh::Mesh;
use crate::solver::MixedSolution;
use crate::{Error, Result};

const VTK_TRIANGLE: u32 = 5;

pub fn format_vtk(mesh: &Mesh, sol: &MixedSolution) -> String {
    let mut s = String::new();
    s.push_str("# vtk DataFile Version 3.0\namfem solution\nASCII\nDATASET UNSTRUCTURED_GRID\n");
    writeln!(s, "POINTS {} double", mesh.num_vertices()).unwrap();
    for p in mesh.vertices() {
        writeln!(s, "{} {} 0", p.x, p.y).unwrap();
    }
    let nt = mesh.num_triangles();
    writeln!(s, "CELLS {nt} {}", 4 * nt).unwrap();
    for t in mesh.triangles() {
        let [a, b, c] = t.vertices;
        writeln!(s, "3 {a} {b} {c}").unwrap();
    }
    writeln!(s, "CELL_TYPES {nt}").unwrap();
    for _ in 0..nt {
        writeln!(s, "{VTK_TRIANGLE}").unwrap();
    }
    writeln!(s, "CELL_DATA {nt}\nSCALARS u_h double 1\nLOOKUP_TABLE default").unwrap();
    for u in &sol.u {
        writeln!(s, "{u}").unwrap();
    }
    writeln!(s, "VECTORS p_h_mid double").unwrap();
    for t in 0..nt {
        let p = sol.flux_at(mesh, t, mesh.centroid(t));
        writeln!(s, "{} {} 0", p.x, p.y).unwrap();
    }
    s
}

pub fn emit_vtk(mesh: &Mesh, sol: &MixedSolution, path: &Path) -> Result<()> {
    std::fs::write(path, format_vtk(mesh, sol)).map_err(|e| Error::io(path, e))
}

/// What [`read_vtk`] recovers from a triangle grid.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct VtkGrid {
    pub points: Vec<[f64; 3]>,
    pub cells: Vec<Vec<usize>>,
    pub cell_types: Vec<u32>,
    pub cell_scalars: Vec<(String, Vec<f64>)>,
    pub cell_vectors: Vec<(String, Vec<[f64; 3]>)>,
}

struct Tokens<'a> {
    iter: std::iter::Peekable<Box<dyn Iterator<Item = (usize, &'a str)> + 'a>>,
    line: usize,
}

impl<'a> Tokens<'a> {
    fn new(body: &'a str, first_line: usize) -> Self {
        let iter: Box<dyn Iterator<Item = (usize, &'a str)> + 'a> = Box::new(
            body.lines()
                .enumerate()
                .flat_map(move |(i, l)| l.split_whitespace().map(move |w| (i + first_line, w))),
        );
        Self { iter: iter.peekable(), line: first_line }
    }

    fn next(&mut self) -> Result<&'a str> {
        let (line, w) = self.iter.next().ok_or_else(|| Error::parse(self.line, "unexpected end of file"))?;
        self.line = line;
        Ok(w)
    }

    fn peek(&mut self) -> Option<&'a str> {
        self.iter.peek().map(|(_, w)| *w)
    }

    fn parse<T: std::str::FromStr>(&mut self, what: &str) -> Result<T> {
        let w = self.next()?;
        w.parse().map_err(|_| Error::parse(self.line, format!("expected {what}, got `{w}`")))
    }

    fn expect(&mut self, keyword: &str) -> Result<()> {
        let w = self.next()?;
        if w.eq_ignore_ascii_case(keyword) {
            Ok(())
        } else {
            Err(Error::parse(self.line, format!("expected `{keyword}`, got `{w}`")))
        }
    }

    fn count(&mut self, what: &str, limit: usize) -> Result<usize> {
        let n: usize = self.parse(what)?;
        if n > limit {
            return Err(Error::parse(self.line, format!("{what} {n} exceeds the file size")));
        }
        Ok(n)
    }
}

/// Minimal reader for ASCII unstructured grids with cell data, enough to
/// read back what [`format_vtk`] writes.
pub fn read_vtk(text: &str) -> Result<VtkGrid> {
    let mut lines = text.lines();
    let version = lines.next().unwrap_or("");
    if !version.starts_with("# vtk DataFile") {
        return Err(Error::parse(1, "missing `# vtk DataFile` header"));
    }
    lines.next().ok_or_else(|| Error::parse(2, "missing title line"))?;
    let header_len: usize = text.lines().take(2).map(|l| l.len() + 1).sum();
    let body = text.get(header_len.min(text.len())..).unwrap_or("");
    // no count can exceed the number of tokens left
    let limit = body.len();
    let mut tok = Tokens::new(body, 3);
    tok.expect("ASCII")?;
    tok.expect("DATASET")?;
    tok.expect("UNSTRUCTURED_GRID")?;
    let mut grid = VtkGrid::default();
    let mut cell_count = None;
    while let Some(word) = tok.peek() {
        match word.to_ascii_uppercase().as_str() {
            "POINTS" => {
                tok.next()?;
                let n = tok.count("point count", limit)?;
                tok.next()?;
                grid.points = (0..n)
                    .map(|_| Ok([tok.parse("coordinate")?, tok.parse("coordinate")?, tok.parse("coordinate")?]))
                    .collect::<Result<_>>()?;
            }
            "CELLS" => {
                tok.next()?;
                let n = tok.count("cell count", limit)?;
                let _size: usize = tok.parse("cell list size")?;
                for _ in 0..n {
                    let k = tok.count("cell size", limit)?;
                    let cell = (0..k)
                        .map(|_| {
                            let v: usize = tok.parse("point index")?;
                            if v >= grid.points.len() {
                                return Err(Error::parse(tok.line, format!("point index {v} out of range")));
                            }
                            Ok(v)
                        })
                        .collect::<Result<_>>()?;
                    grid.cells.push(cell);
                }
            }
            "CELL_TYPES" => {
                tok.next()?;
                let n = tok.count("cell type count", limit)?;
                grid.cell_types = (0..n).map(|_| tok.parse("cell type")).collect::<Result<_>>()?;
            }
            "CELL_DATA" => {
                tok.next()?;
                cell_count = Some(tok.count("cell data count", limit)?);
            }
            "SCALARS" => {
                tok.next()?;
                let name = tok.next()?.to_string();
                tok.next()?;
                if tok.peek() == Some("1") {
                    tok.next()?;
                }
                tok.expect("LOOKUP_TABLE")?;
                tok.next()?;
                let n = cell_count.ok_or_else(|| Error::parse(tok.line, "SCALARS before CELL_DATA"))?;
                let values = (0..n).map(|_| tok.parse("value")).collect::<Result<_>>()?;
                grid.cell_scalars.push((name, values));
            }
            "VECTORS" => {
                tok.next()?;
                let name = tok.next()?.to_string();
                tok.next()?;
                let n = cell_count.ok_or_else(|| Error::parse(tok.line, "VECTORS before CELL_DATA"))?;
                let values = (0..n)
                    .map(|_| Ok([tok.parse("component")?, tok.parse("component")?, tok.parse("component")?]))
                    .collect::<Result<_>>()?;
                grid.cell_vectors.push((name, values));
            }
            other => return Err(Error::parse(tok.line, format!("unsupported section `{other}`"))),
        }
    }
    if grid.cell_types.len() != grid.cells.len() {
        return Err(Error::parse(tok.line, "CELL_TYPES count differs from CELLS"));
    }
    Ok(grid)
}
