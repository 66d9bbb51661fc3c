use std::io::{BufRead, Write};

use super::{BoundaryMesh, Mesh, Panel, PanelTag};
use crate::error::{Error, Result};

/// Writes a mesh and its tagged boundary as plain text: a header `nv nt np`,
/// then vertex lines `x y`, triangle lines `i j k` and panel lines `i j tag`
/// with tag `D` or `N`. Coordinates use the shortest round-trip
/// representation, so reading back is bit-exact.
pub fn write_mesh<W: Write>(mesh: &Mesh, boundary: &BoundaryMesh, mut w: W) -> Result<()> {
    writeln!(w, "{} {} {}", mesh.num_vertices(), mesh.num_triangles(), boundary.len())?;
    for v in &mesh.vertices {
        writeln!(w, "{:?} {:?}", v[0], v[1])?;
    }
    for t in &mesh.triangles {
        writeln!(w, "{} {} {}", t[0], t[1], t[2])?;
    }
    for p in &boundary.panels {
        let tag = match p.tag {
            PanelTag::Dirichlet => 'D',
            PanelTag::Neumann => 'N',
        };
        writeln!(w, "{} {} {}", p.v[0], p.v[1], tag)?;
    }
    Ok(())
}

struct Lines<R> {
    inner: std::io::Lines<R>,
    line: usize,
}

impl<R: BufRead> Lines<R> {
    fn next(&mut self) -> Result<String> {
        loop {
            self.line += 1;
            match self.inner.next() {
                None => return Err(self.err("unexpected end of file")),
                Some(l) => {
                    let l = l?;
                    let t = l.trim();
                    if !t.is_empty() && !t.starts_with('#') {
                        return Ok(t.to_string());
                    }
                }
            }
        }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse { line: self.line, msg: msg.into() }
    }

    fn fields<T: std::str::FromStr, const N: usize>(&mut self) -> Result<([T; N], Option<String>)> {
        let l = self.next()?;
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() < N || toks.len() > N + 1 {
            return Err(self.err(format!("expected {N} fields, got {}", toks.len())));
        }
        let mut vals = Vec::with_capacity(N);
        for t in &toks[..N] {
            vals.push(t.parse::<T>().map_err(|_| self.err(format!("cannot parse `{t}`")))?);
        }
        let extra = toks.get(N).map(|s| s.to_string());
        Ok((vals.try_into().ok().unwrap(), extra))
    }
}

pub fn read_mesh<R: BufRead>(r: R) -> Result<(Mesh, BoundaryMesh)> {
    let mut lines = Lines { inner: r.lines(), line: 0 };
    let ([nv, nt, np], extra) = lines.fields::<usize, 3>()?;
    if extra.is_some() {
        return Err(lines.err("header must be `nv nt np`"));
    }
    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (v, extra) = lines.fields::<f64, 2>()?;
        if extra.is_some() {
            return Err(lines.err("trailing field on vertex line"));
        }
        vertices.push(v);
    }
    let mut triangles = Vec::with_capacity(nt);
    for _ in 0..nt {
        let (t, extra) = lines.fields::<usize, 3>()?;
        if extra.is_some() {
            return Err(lines.err("trailing field on triangle line"));
        }
        triangles.push(t);
    }
    let mesh = Mesh::new(vertices, triangles)?;
    let mut lookup = std::collections::HashMap::new();
    for e in 0..mesh.num_edges() {
        if mesh.is_boundary_edge(e) {
            lookup.insert(mesh.edges[e], e);
        }
    }
    let mut panels = Vec::with_capacity(np);
    for _ in 0..np {
        let (v, tag) = lines.fields::<usize, 2>()?;
        let tag = match tag.as_deref() {
            Some("D") => PanelTag::Dirichlet,
            Some("N") => PanelTag::Neumann,
            _ => return Err(lines.err("panel tag must be D or N")),
        };
        let key = if v[0] < v[1] { v } else { [v[1], v[0]] };
        let e = *lookup.get(&key).ok_or_else(|| lines.err("panel is not a boundary edge"))?;
        let t = mesh.edge_tris[e][0].unwrap();
        let k = mesh.tri_edges[t].iter().position(|&x| x == e).unwrap();
        if mesh.triangles[t][k] != v[0] {
            return Err(lines.err("panel orientation disagrees with the mesh"));
        }
        panels.push(Panel { v, edge: e, tri: t, tag });
    }
    if panels.len() != lookup.len() {
        return Err(Error::Geometry("panel list does not cover the boundary".into()));
    }
    let boundary = BoundaryMesh::from_panels(panels)?;
    Ok((mesh, boundary))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{generate_polygon_mesh, Region};

    #[test]
    fn round_trip_is_bit_exact() {
        let poly = [[0.1, 0.0], [1.3, 0.2], [0.9, 1.7], [-0.4, 0.8]];
        let m = generate_polygon_mesh(&poly, 0.25).unwrap();
        let region = Region::HalfPlane { normal: [1.0, 0.0], offset: 0.5 };
        let b = BoundaryMesh::extract_region(&m, &region).unwrap();
        let mut buf = Vec::new();
        write_mesh(&m, &b, &mut buf).unwrap();
        let (m2, b2) = read_mesh(buf.as_slice()).unwrap();
        assert_eq!(m.triangles, m2.triangles);
        for (p, q) in m.vertices.iter().zip(&m2.vertices) {
            assert_eq!(p[0].to_bits(), q[0].to_bits());
            assert_eq!(p[1].to_bits(), q[1].to_bits());
        }
        assert_eq!(b.panels, b2.panels);
    }

    #[test]
    fn malformed_input_reports_line() {
        let text = "1 0 0\n0.0 abc\n";
        match read_mesh(text.as_bytes()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }
}
