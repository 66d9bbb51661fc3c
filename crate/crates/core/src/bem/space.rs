use crate::error::{param, Result};
use crate::mesh::{BoundaryMesh, Mesh, PanelTag, Point};

/// Straight boundary panel parametrized by `t ∈ [0, 1]` from `a` to `b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PanelGeom {
    pub a: Point,
    pub b: Point,
    pub len: f64,
    /// Unit tangent.
    pub tau: Point,
    /// Exterior unit normal.
    pub nu: Point,
    pub tag: PanelTag,
}

impl PanelGeom {
    pub fn new(a: Point, b: Point, tag: PanelTag) -> Self {
        let d = [b[0] - a[0], b[1] - a[1]];
        let len = d[0].hypot(d[1]);
        let tau = [d[0] / len, d[1] / len];
        PanelGeom { a, b, len, tau, nu: [tau[1], -tau[0]], tag }
    }

    pub fn point(&self, t: f64) -> Point {
        [self.a[0] + t * (self.b[0] - self.a[0]), self.a[1] + t * (self.b[1] - self.a[1])]
    }

    pub fn midpoint(&self) -> Point {
        self.point(0.5)
    }
}

/// Boundary element spaces on the panel mesh: `X_h` is discontinuous
/// 𝒫ₖ₋₁ and `Y_h` continuous 𝒫ₖ.
///
/// `X_h` dofs of panel `p` are `p·k .. p·k + k`. For k = 2 the local `X_h`
/// basis is `1 - t, t`. Local `Y_h` nodes are start, end and (k = 2) midpoint
/// with basis `(1-t)(1-2t), t(2t-1), 4t(1-t)`.
#[derive(Debug, Clone)]
pub struct BoundarySpaces {
    pub degree: usize,
    pub panels: Vec<PanelGeom>,
    /// Index of each panel in the parent `BoundaryMesh`.
    pub source_panel: Vec<usize>,
    pub y_local: Vec<[usize; 3]>,
    /// FEM node carrying each `Y_h` dof.
    pub y_fem_node: Vec<usize>,
    pub n_x: usize,
    pub n_y: usize,
}

impl BoundarySpaces {
    pub fn new(mesh: &Mesh, boundary: &BoundaryMesh, degree: usize) -> Result<Self> {
        if degree != 1 && degree != 2 {
            return Err(param(format!("polynomial degree must be 1 or 2, got {degree}")));
        }
        let nv = mesh.num_vertices();
        let mut vertex_dof = std::collections::HashMap::new();
        let mut panels = Vec::with_capacity(boundary.len());
        let mut source = Vec::with_capacity(boundary.len());
        let mut y_fem_node = Vec::new();
        let mut mids = Vec::new();
        for lp in &boundary.loops {
            for &pi in lp {
                let p = &boundary.panels[pi];
                vertex_dof.entry(p.v[0]).or_insert_with(|| {
                    y_fem_node.push(p.v[0]);
                    y_fem_node.len() - 1
                });
                let mid = if degree == 2 {
                    y_fem_node.push(nv + p.edge);
                    y_fem_node.len() - 1
                } else {
                    usize::MAX
                };
                mids.push(mid);
                let [a, b] = boundary.endpoints(mesh, pi);
                panels.push(PanelGeom::new(a, b, p.tag));
                source.push(pi);
            }
        }
        let y_local = source
            .iter()
            .zip(&mids)
            .map(|(&pi, &m)| {
                let p = &boundary.panels[pi];
                [vertex_dof[&p.v[0]], vertex_dof[&p.v[1]], m]
            })
            .collect();
        let n_y = y_fem_node.len();
        Ok(BoundarySpaces {
            degree,
            n_x: degree * panels.len(),
            panels,
            source_panel: source,
            y_local,
            y_fem_node,
            n_y,
        })
    }

    /// Spaces on a closed polygonal loop without a volume mesh (counterclockwise
    /// vertices). `y_fem_node` then simply numbers the `Y_h` nodes.
    pub fn from_polygon(vertices: &[Point], degree: usize) -> Result<Self> {
        if degree != 1 && degree != 2 {
            return Err(param(format!("polynomial degree must be 1 or 2, got {degree}")));
        }
        let n = vertices.len();
        if n < 3 {
            return Err(param("a boundary loop needs at least three vertices"));
        }
        let panels: Vec<PanelGeom> =
            (0..n).map(|i| PanelGeom::new(vertices[i], vertices[(i + 1) % n], PanelTag::Dirichlet)).collect();
        let y_local = (0..n)
            .map(|i| {
                let j = (i + 1) % n;
                if degree == 1 {
                    [i, j, usize::MAX]
                } else {
                    [2 * i, 2 * j, 2 * i + 1]
                }
            })
            .collect();
        let n_y = degree * n;
        Ok(BoundarySpaces {
            degree,
            n_x: degree * n,
            panels,
            source_panel: (0..n).collect(),
            y_local,
            y_fem_node: (0..n_y).collect(),
            n_y,
        })
    }

    /// Coordinates of the `Y_h` nodes.
    pub fn y_points(&self) -> Vec<Point> {
        let mut pts = vec![[0.0; 2]; self.n_y];
        for (p, pg) in self.panels.iter().enumerate() {
            pts[self.y_local[p][0]] = pg.a;
            pts[self.y_local[p][1]] = pg.b;
            if self.degree == 2 {
                pts[self.y_local[p][2]] = pg.midpoint();
            }
        }
        pts
    }

    pub fn num_panels(&self) -> usize {
        self.panels.len()
    }

    pub fn h(&self) -> f64 {
        self.panels.iter().map(|p| p.len).fold(0.0, f64::max)
    }

    /// Number of local `Y_h` basis functions per panel.
    pub fn y_count(&self) -> usize {
        self.degree + 1
    }

    /// `X_h` basis values at `t`.
    pub fn x_basis(&self, t: f64) -> [f64; 2] {
        if self.degree == 1 {
            [1.0, 0.0]
        } else {
            [1.0 - t, t]
        }
    }

    /// `Y_h` basis values and `t`-derivatives at `t`.
    pub fn y_basis(&self, t: f64) -> ([f64; 3], [f64; 3]) {
        if self.degree == 1 {
            ([1.0 - t, t, 0.0], [-1.0, 1.0, 0.0])
        } else {
            (
                [(1.0 - t) * (1.0 - 2.0 * t), t * (2.0 * t - 1.0), 4.0 * t * (1.0 - t)],
                [4.0 * t - 3.0, 4.0 * t - 1.0, 4.0 - 8.0 * t],
            )
        }
    }

    pub fn x_dof(&self, panel: usize, local: usize) -> usize {
        panel * self.degree + local
    }

    /// Boundary mass matrix `M[i, j] = ∫ ξ_i χ_j` between `X_h` (rows) and
    /// `Y_h` (columns), as triplets.
    pub fn mass_xy(&self) -> Vec<(usize, usize, f64)> {
        let g = crate::quadrature::gauss(3);
        let mut trips = Vec::new();
        for (p, pg) in self.panels.iter().enumerate() {
            let mut loc = [[0.0; 3]; 2];
            for (t, w) in g.iter() {
                let xb = self.x_basis(t);
                let (yb, _) = self.y_basis(t);
                for i in 0..self.degree {
                    for j in 0..self.y_count() {
                        loc[i][j] += w * pg.len * xb[i] * yb[j];
                    }
                }
            }
            for i in 0..self.degree {
                for j in 0..self.y_count() {
                    trips.push((self.x_dof(p, i), self.y_local[p][j], loc[i][j]));
                }
            }
        }
        trips
    }

    /// `L²` projection coefficients onto `X_h` (exact per panel).
    pub fn project_x<T>(&self, f: impl Fn(Point, Point) -> T) -> Vec<T>
    where
        T: Copy + std::ops::Mul<f64, Output = T> + std::ops::Add<Output = T> + Default,
    {
        let g = crate::quadrature::gauss(8);
        let mut out = Vec::with_capacity(self.n_x);
        for pg in &self.panels {
            // Moments against the local basis, then the inverse local mass.
            let mut m = [T::default(); 2];
            for (t, w) in g.iter() {
                let v = f(pg.point(t), pg.nu);
                let xb = self.x_basis(t);
                for i in 0..self.degree {
                    m[i] = m[i] + v * (w * xb[i]);
                }
            }
            if self.degree == 1 {
                out.push(m[0]);
            } else {
                // Inverse of [[1/3, 1/6], [1/6, 1/3]].
                out.push(m[0] * 4.0 + m[1] * -2.0);
                out.push(m[0] * -2.0 + m[1] * 4.0);
            }
        }
        out
    }

    /// Moments `∫_Γ f χ_i` against the `Y_h` basis, for `f(x, ν)`.
    pub fn moments_y<T>(&self, f: impl Fn(Point, Point) -> T) -> Vec<T>
    where
        T: Copy + std::ops::Mul<f64, Output = T> + std::ops::Add<Output = T> + Default,
    {
        let g = crate::quadrature::gauss(8);
        let mut out = vec![T::default(); self.n_y];
        for (p, pg) in self.panels.iter().enumerate() {
            for (t, w) in g.iter() {
                let v = f(pg.point(t), pg.nu);
                let (yb, _) = self.y_basis(t);
                for j in 0..self.y_count() {
                    let k = self.y_local[p][j];
                    out[k] = out[k] + v * (w * pg.len * yb[j]);
                }
            }
        }
        out
    }

    /// Nodal interpolation onto `Y_h`.
    pub fn interpolate_y<T>(&self, fem_nodes: &[Point], f: impl Fn(Point) -> T) -> Vec<T> {
        self.y_fem_node.iter().map(|&n| f(fem_nodes[n])).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{generate_rect_mesh, DiagonalPattern, Region};

    #[test]
    fn dof_counts_and_continuity() {
        let m = generate_rect_mesh([1.0, 1.0], [3.0, 2.0], 0.5, DiagonalPattern::Right).unwrap();
        let b = BoundaryMesh::extract_region(&m, &Region::Everywhere).unwrap();
        for k in [1, 2] {
            let s = BoundarySpaces::new(&m, &b, k).unwrap();
            assert_eq!(s.n_x, k * 12);
            assert_eq!(s.n_y, k * 12);
            for p in 0..s.num_panels() {
                let q = (p + 1) % s.num_panels();
                assert_eq!(s.y_local[p][1], s.y_local[q][0]);
            }
        }
    }

    #[test]
    fn mass_reproduces_length() {
        let m = generate_rect_mesh([1.0, 1.0], [3.0, 2.0], 0.5, DiagonalPattern::Right).unwrap();
        let b = BoundaryMesh::extract_region(&m, &Region::Everywhere).unwrap();
        for k in [1, 2] {
            let s = BoundarySpaces::new(&m, &b, k).unwrap();
            // Constant functions have all coefficients equal to one.
            let total: f64 = s.mass_xy().iter().map(|t| t.2).sum();
            assert!((total - 6.0).abs() < 1e-12);
            let ones_x = s.project_x(|_, _| 1.0);
            assert!(ones_x.iter().all(|v| (v - 1.0).abs() < 1e-12));
        }
    }
}
