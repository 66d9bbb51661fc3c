use super::{Mesh, Point};
use crate::error::{param, Result};

/// Triangulation pattern for structured rectangle meshes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DiagonalPattern {
    /// Each cell split along its lower-left to upper-right diagonal.
    #[default]
    Right,
    /// Each cell split into four triangles through its centre.
    CrissCross,
}

/// Structured mesh of the rectangle spanned by two opposite corners.
///
/// The cell count per side is `ceil(side / h)`, so boundary panels never
/// exceed `h` and interior edges never exceed `h·√2`.
pub fn generate_rect_mesh(a: Point, b: Point, h: f64, pattern: DiagonalPattern) -> Result<Mesh> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(param(format!("mesh size must be positive, got {h}")));
    }
    let (x0, x1) = (a[0].min(b[0]), a[0].max(b[0]));
    let (y0, y1) = (a[1].min(b[1]), a[1].max(b[1]));
    let (w, ht) = (x1 - x0, y1 - y0);
    if !(w > 0.0 && ht > 0.0) {
        return Err(param("rectangle sides must be positive"));
    }
    if h > w.min(ht) * (1.0 + 1e-12) {
        return Err(param(format!("mesh size {h} exceeds the shorter side {}", w.min(ht))));
    }
    let nx = ((w / h) - 1e-9).ceil().max(1.0) as usize;
    let ny = ((ht / h) - 1e-9).ceil().max(1.0) as usize;
    let mut vertices = Vec::with_capacity((nx + 1) * (ny + 1));
    for j in 0..=ny {
        for i in 0..=nx {
            vertices.push([x0 + w * i as f64 / nx as f64, y0 + ht * j as f64 / ny as f64]);
        }
    }
    let id = |i: usize, j: usize| j * (nx + 1) + i;
    let mut triangles = Vec::new();
    for j in 0..ny {
        for i in 0..nx {
            let (v00, v10, v01, v11) = (id(i, j), id(i + 1, j), id(i, j + 1), id(i + 1, j + 1));
            match pattern {
                DiagonalPattern::Right => {
                    triangles.push([v00, v10, v11]);
                    triangles.push([v00, v11, v01]);
                }
                DiagonalPattern::CrissCross => {
                    let c = vertices.len();
                    let (p, q) = (vertices[v00], vertices[v11]);
                    vertices.push([0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])]);
                    triangles.push([v00, v10, c]);
                    triangles.push([v10, v11, c]);
                    triangles.push([v11, v01, c]);
                    triangles.push([v01, v00, c]);
                }
            }
        }
    }
    Mesh::new(vertices, triangles)
}
