use crate::error::{param, Result};
use crate::mesh::{BoundaryMesh, Mesh, PanelTag, Point};
use crate::quadrature::TriangleRule;

/// Scalar continuous 𝒫ₖ space. Vector-valued fields use two copies with
/// component-blocked numbering `comp·n_nodes + node`.
///
/// Nodes are the mesh vertices followed, for k = 2, by edge midpoints
/// (`n_vertices + edge`). Local nodes: vertices 0, 1, 2 then the midpoints
/// of local edges (0,1), (1,2), (2,0).
#[derive(Debug, Clone)]
pub struct FeSpace {
    pub degree: usize,
    pub n_nodes: usize,
    pub nodes: Vec<Point>,
    pub tri_nodes: Vec<[usize; 6]>,
    /// Nodes lying on a Dirichlet panel, sorted.
    pub dirichlet_nodes: Vec<usize>,
    /// Nodes lying on the boundary, sorted.
    pub boundary_nodes: Vec<usize>,
}

/// Affine triangle map `x = a + J ξ`.
#[derive(Debug, Clone, Copy)]
pub struct Element {
    pub a: Point,
    pub jac: [[f64; 2]; 2],
    pub det: f64,
    /// `J⁻ᵀ`, maps reference gradients to physical gradients.
    pub inv_t: [[f64; 2]; 2],
}

impl Element {
    pub fn new(p: [Point; 3]) -> Self {
        let jac = [[p[1][0] - p[0][0], p[2][0] - p[0][0]], [p[1][1] - p[0][1], p[2][1] - p[0][1]]];
        let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
        let inv_t = [[jac[1][1] / det, -jac[1][0] / det], [-jac[0][1] / det, jac[0][0] / det]];
        Element { a: p[0], jac, det, inv_t }
    }

    pub fn map(&self, xi: [f64; 2]) -> Point {
        [
            self.a[0] + self.jac[0][0] * xi[0] + self.jac[0][1] * xi[1],
            self.a[1] + self.jac[1][0] * xi[0] + self.jac[1][1] * xi[1],
        ]
    }

    pub fn grad(&self, g: [f64; 2]) -> [f64; 2] {
        [self.inv_t[0][0] * g[0] + self.inv_t[0][1] * g[1], self.inv_t[1][0] * g[0] + self.inv_t[1][1] * g[1]]
    }
}

/// Reference shape functions and gradients at `ξ`; only the first 3 (k=1)
/// or 6 (k=2) entries are meaningful.
pub fn shape(degree: usize, xi: [f64; 2]) -> ([f64; 6], [[f64; 2]; 6]) {
    let l = [1.0 - xi[0] - xi[1], xi[0], xi[1]];
    let dl = [[-1.0, -1.0], [1.0, 0.0], [0.0, 1.0]];
    let mut n = [0.0; 6];
    let mut g = [[0.0; 2]; 6];
    if degree == 1 {
        n[..3].copy_from_slice(&l);
        g[..3].copy_from_slice(&dl);
        return (n, g);
    }
    for i in 0..3 {
        n[i] = l[i] * (2.0 * l[i] - 1.0);
        for d in 0..2 {
            g[i][d] = (4.0 * l[i] - 1.0) * dl[i][d];
        }
    }
    for (m, (i, j)) in [(0, 1), (1, 2), (2, 0)].into_iter().enumerate() {
        n[3 + m] = 4.0 * l[i] * l[j];
        for d in 0..2 {
            g[3 + m][d] = 4.0 * (dl[i][d] * l[j] + l[i] * dl[j][d]);
        }
    }
    (n, g)
}

/// Physical quadrature point with tabulated basis data.
#[derive(Debug, Clone, Copy)]
pub struct QuadPoint {
    pub x: Point,
    /// Weight including the Jacobian.
    pub w: f64,
    pub n: [f64; 6],
    pub g: [[f64; 2]; 6],
}

impl FeSpace {
    pub fn new(mesh: &Mesh, boundary: &BoundaryMesh, degree: usize) -> Result<Self> {
        if degree != 1 && degree != 2 {
            return Err(param(format!("polynomial degree must be 1 or 2, got {degree}")));
        }
        let nv = mesh.num_vertices();
        let mut nodes = mesh.vertices.clone();
        if degree == 2 {
            nodes.extend((0..mesh.num_edges()).map(|e| mesh.edge_midpoint(e)));
        }
        let tri_nodes = mesh
            .triangles
            .iter()
            .zip(&mesh.tri_edges)
            .map(|(t, te)| {
                if degree == 2 {
                    [t[0], t[1], t[2], nv + te[0], nv + te[1], nv + te[2]]
                } else {
                    [t[0], t[1], t[2], usize::MAX, usize::MAX, usize::MAX]
                }
            })
            .collect();
        let mut dirichlet = Vec::new();
        let mut bnd = Vec::new();
        for p in &boundary.panels {
            let mut ns = vec![p.v[0], p.v[1]];
            if degree == 2 {
                ns.push(nv + p.edge);
            }
            if p.tag == PanelTag::Dirichlet {
                dirichlet.extend_from_slice(&ns);
            }
            bnd.extend(ns);
        }
        dirichlet.sort_unstable();
        dirichlet.dedup();
        bnd.sort_unstable();
        bnd.dedup();
        Ok(FeSpace { degree, n_nodes: nodes.len(), nodes, tri_nodes, dirichlet_nodes: dirichlet, boundary_nodes: bnd })
    }

    pub fn local_count(&self) -> usize {
        if self.degree == 1 {
            3
        } else {
            6
        }
    }

    pub fn local_nodes(&self, t: usize) -> &[usize] {
        &self.tri_nodes[t][..self.local_count()]
    }

    /// Default rule: exact for mass matrices with constant density.
    pub fn default_rule(&self) -> &'static TriangleRule {
        if self.degree == 1 {
            TriangleRule::midpoint3()
        } else {
            TriangleRule::radon7()
        }
    }

    pub fn quad_points(&self, mesh: &Mesh, t: usize, rule: &TriangleRule) -> Vec<QuadPoint> {
        let el = Element::new(mesh.triangle_points(t));
        rule.points
            .iter()
            .zip(&rule.weights)
            .map(|(&xi, &w)| {
                let (n, gr) = shape(self.degree, xi);
                let mut g = [[0.0; 2]; 6];
                for i in 0..self.local_count() {
                    g[i] = el.grad(gr[i]);
                }
                QuadPoint { x: el.map(xi), w: w * el.det, n, g }
            })
            .collect()
    }

    /// Nodal interpolation of a scalar function.
    pub fn interpolate<T>(&self, f: impl Fn(Point) -> T) -> Vec<T> {
        self.nodes.iter().map(|&p| f(p)).collect()
    }

    /// Nodal interpolation of a vector field in component-blocked layout.
    pub fn interpolate_vector<T: Copy>(&self, f: impl Fn(Point) -> [T; 2]) -> Vec<T> {
        let vals: Vec<[T; 2]> = self.nodes.iter().map(|&p| f(p)).collect();
        vals.iter().map(|v| v[0]).chain(vals.iter().map(|v| v[1])).collect()
    }

    /// Nodes not on the Dirichlet boundary, sorted.
    pub fn free_nodes(&self) -> Vec<usize> {
        let mut mask = vec![true; self.n_nodes];
        for &d in &self.dirichlet_nodes {
            mask[d] = false;
        }
        (0..self.n_nodes).filter(|&i| mask[i]).collect()
    }
}

/// Nodal lifting of Dirichlet values: boundary nodes take the data, all
/// other nodes are zero. Returns the lift and the mask of free nodes.
pub fn dirichlet_lift<T: Copy + Default>(space: &FeSpace, values: &[T]) -> Result<(Vec<T>, Vec<bool>)> {
    if values.len() != space.dirichlet_nodes.len() {
        return Err(param(format!("expected {} Dirichlet values, got {}", space.dirichlet_nodes.len(), values.len())));
    }
    let mut lift = vec![T::default(); space.n_nodes];
    let mut free = vec![true; space.n_nodes];
    for (&n, &v) in space.dirichlet_nodes.iter().zip(values) {
        lift[n] = v;
        free[n] = false;
    }
    Ok((lift, free))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{generate_rect_mesh, DiagonalPattern, Region};

    #[test]
    fn shape_functions_partition_unity() {
        for k in [1, 2] {
            for xi in [[0.2, 0.3], [0.0, 0.0], [0.5, 0.5]] {
                let (n, g) = shape(k, xi);
                let m = if k == 1 { 3 } else { 6 };
                assert!((n[..m].iter().sum::<f64>() - 1.0).abs() < 1e-14);
                let gs = g[..m].iter().fold([0.0, 0.0], |a, b| [a[0] + b[0], a[1] + b[1]]);
                assert!(gs[0].abs() < 1e-14 && gs[1].abs() < 1e-14);
            }
        }
        // Kronecker property at P2 nodes.
        let pts = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [0.5, 0.0], [0.5, 0.5], [0.0, 0.5]];
        for (i, p) in pts.iter().enumerate() {
            let (n, _) = shape(2, *p);
            for (j, v) in n.iter().enumerate() {
                assert!((v - if i == j { 1.0 } else { 0.0 }).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn dof_counts() {
        let m = generate_rect_mesh([1.0, 1.0], [3.0, 2.0], 0.5, DiagonalPattern::Right).unwrap();
        let b = BoundaryMesh::extract_region(&m, &Region::Everywhere).unwrap();
        let s1 = FeSpace::new(&m, &b, 1).unwrap();
        let s2 = FeSpace::new(&m, &b, 2).unwrap();
        assert_eq!(s1.n_nodes, m.num_vertices());
        assert_eq!(s2.n_nodes, m.num_vertices() + m.num_edges());
        assert_eq!(s1.dirichlet_nodes.len(), 12);
        assert_eq!(s2.dirichlet_nodes.len(), 24);
        assert!(FeSpace::new(&m, &b, 3).is_err());
    }

    #[test]
    fn lift_checks_length() {
        let m = generate_rect_mesh([0.0, 0.0], [1.0, 1.0], 0.5, DiagonalPattern::Right).unwrap();
        let b = BoundaryMesh::extract_region(&m, &Region::Everywhere).unwrap();
        let s = FeSpace::new(&m, &b, 1).unwrap();
        assert!(dirichlet_lift(&s, &[1.0]).is_err());
        let vals: Vec<f64> = s.dirichlet_nodes.iter().map(|&n| s.nodes[n][0]).collect();
        let (lift, free) = dirichlet_lift(&s, &vals).unwrap();
        for &n in &s.dirichlet_nodes {
            assert_eq!(lift[n], s.nodes[n][0]);
            assert!(!free[n]);
        }
        assert_eq!(free.iter().filter(|f| **f).count(), 1);
    }
}
