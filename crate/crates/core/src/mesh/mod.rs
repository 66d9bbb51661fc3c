//! Conforming triangular meshes of polygonal domains and their oriented
//! boundary panel meshes.

mod boundary;
mod io;
mod polygon;
mod rect;

pub use boundary::{BoundaryMesh, Panel, PanelTag, Region};
pub use io::{read_mesh, write_mesh};
pub use polygon::generate_polygon_mesh;
pub use rect::{generate_rect_mesh, DiagonalPattern};

use std::collections::HashMap;

use crate::error::{Error, Result};

pub type Point = [f64; 2];

/// Conforming triangulation with edge connectivity.
///
/// Triangles are stored counterclockwise. Local edge `k` of a triangle joins
/// its local vertices `k` and `(k + 1) % 3`.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    pub vertices: Vec<Point>,
    pub triangles: Vec<[usize; 3]>,
    /// Vertex pairs with `edges[e][0] < edges[e][1]`.
    pub edges: Vec<[usize; 2]>,
    pub tri_edges: Vec<[usize; 3]>,
    pub edge_tris: Vec<[Option<usize>; 2]>,
}

impl Mesh {
    /// Builds connectivity and checks orientation and conformity.
    pub fn new(vertices: Vec<Point>, triangles: Vec<[usize; 3]>) -> Result<Self> {
        let nv = vertices.len();
        let mut edge_index: HashMap<[usize; 2], usize> = HashMap::new();
        let mut edges = Vec::new();
        let mut edge_tris: Vec<[Option<usize>; 2]> = Vec::new();
        let mut tri_edges = Vec::with_capacity(triangles.len());
        for (t, tri) in triangles.iter().enumerate() {
            if tri.iter().any(|&v| v >= nv) {
                return Err(Error::Geometry(format!("triangle {t} references a missing vertex")));
            }
            let area = signed_area(vertices[tri[0]], vertices[tri[1]], vertices[tri[2]]);
            if area <= 0.0 {
                return Err(Error::Geometry(format!("triangle {t} has non-positive signed area {area:e}")));
            }
            let mut te = [0usize; 3];
            for k in 0..3 {
                let (a, b) = (tri[k], tri[(k + 1) % 3]);
                let key = if a < b { [a, b] } else { [b, a] };
                let e = *edge_index.entry(key).or_insert_with(|| {
                    edges.push(key);
                    edge_tris.push([None, None]);
                    edges.len() - 1
                });
                match edge_tris[e] {
                    [None, _] => edge_tris[e][0] = Some(t),
                    [Some(_), None] => edge_tris[e][1] = Some(t),
                    _ => return Err(Error::Geometry(format!("edge {key:?} shared by more than two triangles"))),
                }
                te[k] = e;
            }
            tri_edges.push(te);
        }
        // Two triangles sharing an edge must traverse it in opposite directions.
        for (e, pair) in edge_tris.iter().enumerate() {
            if let [Some(t0), Some(t1)] = *pair {
                let dir = |t: usize| {
                    let k = tri_edges[t].iter().position(|&x| x == e).unwrap();
                    triangles[t][k] == edges[e][0]
                };
                if dir(t0) == dir(t1) {
                    return Err(Error::Geometry(format!("inconsistent orientation across edge {e}")));
                }
            }
        }
        Ok(Self { vertices, triangles, edges, tri_edges, edge_tris })
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

    /// `V - E + F`; equals 1 for a simply connected domain.
    pub fn euler_characteristic(&self) -> i64 {
        self.num_vertices() as i64 - self.num_edges() as i64 + self.num_triangles() as i64
    }

    pub fn triangle_points(&self, t: usize) -> [Point; 3] {
        let [a, b, c] = self.triangles[t];
        [self.vertices[a], self.vertices[b], self.vertices[c]]
    }

    pub fn triangle_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangle_points(t);
        signed_area(a, b, c)
    }

    pub fn total_area(&self) -> f64 {
        (0..self.num_triangles()).map(|t| self.triangle_area(t)).sum()
    }

    pub fn edge_length(&self, e: usize) -> f64 {
        let [a, b] = self.edges[e];
        dist(self.vertices[a], self.vertices[b])
    }

    pub fn max_edge_length(&self) -> f64 {
        (0..self.num_edges()).map(|e| self.edge_length(e)).fold(0.0, f64::max)
    }

    pub fn edge_midpoint(&self, e: usize) -> Point {
        let [a, b] = self.edges[e];
        midpoint(self.vertices[a], self.vertices[b])
    }

    pub fn is_boundary_edge(&self, e: usize) -> bool {
        self.edge_tris[e][1].is_none()
    }

    /// Splits every triangle into four through its edge midpoints.
    /// New vertex `V + e` sits at the midpoint of edge `e`.
    pub fn refine_uniform(&self) -> Mesh {
        let nv = self.num_vertices();
        let mut vertices = self.vertices.clone();
        vertices.extend((0..self.num_edges()).map(|e| self.edge_midpoint(e)));
        let mut triangles = Vec::with_capacity(4 * self.num_triangles());
        for (tri, te) in self.triangles.iter().zip(&self.tri_edges) {
            let [a, b, c] = *tri;
            let (mab, mbc, mca) = (nv + te[0], nv + te[1], nv + te[2]);
            triangles.push([a, mab, mca]);
            triangles.push([mab, b, mbc]);
            triangles.push([mca, mbc, c]);
            triangles.push([mab, mbc, mca]);
        }
        Mesh::new(vertices, triangles).expect("uniform refinement preserves validity")
    }
}

pub(crate) fn signed_area(a: Point, b: Point, c: Point) -> f64 {
    0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]))
}

pub(crate) fn dist(a: Point, b: Point) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

pub(crate) fn midpoint(a: Point, b: Point) -> Point {
    [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rect(h: f64) -> Mesh {
        generate_rect_mesh([1.0, 1.0], [3.0, 2.0], h, DiagonalPattern::Right).unwrap()
    }

    #[test]
    fn smallest_rectangle_grid() {
        let m = rect(1.0);
        assert_eq!(m.num_vertices(), 6);
        assert_eq!(m.num_triangles(), 4);
        assert_eq!(m.num_edges(), 9);
        assert_eq!(m.euler_characteristic(), 1);
    }

    #[test]
    fn half_spacing_counts() {
        let m = rect(0.5);
        assert_eq!(m.num_triangles(), 16);
        assert_eq!(m.num_vertices(), 15);
        assert!((m.total_area() - 2.0).abs() < 1e-12);
        assert!(m.max_edge_length() <= 0.5 * 2f64.sqrt() + 1e-14);
    }

    #[test]
    fn zero_spacing_is_rejected() {
        assert!(matches!(
            generate_rect_mesh([1.0, 1.0], [3.0, 2.0], 0.0, DiagonalPattern::Right),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn refinement_counts_and_spacing() {
        let m = rect(1.0);
        let r = m.refine_uniform();
        assert_eq!(r.num_triangles(), 16);
        assert_eq!(r.num_vertices(), m.num_vertices() + m.num_edges());
        assert_eq!(r.euler_characteristic(), 1);
        let rr = r.refine_uniform();
        assert!((rr.max_edge_length() - m.max_edge_length() / 4.0).abs() < 1e-14);
        assert!((rr.total_area() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn criss_cross_is_conforming() {
        let m = generate_rect_mesh([0.0, 0.0], [1.0, 1.0], 0.25, DiagonalPattern::CrissCross).unwrap();
        assert_eq!(m.num_triangles(), 64);
        assert_eq!(m.euler_characteristic(), 1);
        assert!((m.total_area() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_clockwise_triangle() {
        let v = vec![[0.0, 0.0], [0.0, 1.0], [1.0, 0.0]];
        assert!(Mesh::new(v, vec![[0, 1, 2]]).is_err());
    }
}
