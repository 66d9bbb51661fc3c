use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{dist, midpoint, Mesh, Point};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PanelTag {
    Dirichlet,
    Neumann,
}

/// One boundary edge, oriented so that the domain lies on its left.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Panel {
    pub v: [usize; 2],
    pub edge: usize,
    pub tri: usize,
    pub tag: PanelTag,
}

/// Region of the plane used to select the Dirichlet part of the boundary.
/// A panel is Dirichlet when its midpoint lies in the region.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Region {
    Everywhere,
    Nowhere,
    Box {
        min: Point,
        max: Point,
    },
    /// Points with `normal · x >= offset`.
    HalfPlane {
        normal: Point,
        offset: f64,
    },
    Union {
        parts: Vec<Region>,
    },
}

impl Region {
    pub fn contains(&self, p: Point) -> bool {
        match self {
            Region::Everywhere => true,
            Region::Nowhere => false,
            Region::Box { min, max } => p[0] >= min[0] && p[0] <= max[0] && p[1] >= min[1] && p[1] <= max[1],
            Region::HalfPlane { normal, offset } => normal[0] * p[0] + normal[1] * p[1] >= *offset,
            Region::Union { parts } => parts.iter().any(|r| r.contains(p)),
        }
    }
}

/// Oriented boundary panels of a mesh, grouped into closed loops.
#[derive(Debug, Clone)]
pub struct BoundaryMesh {
    pub panels: Vec<Panel>,
    /// Panel indices of each closed loop in traversal order.
    pub loops: Vec<Vec<usize>>,
}

impl BoundaryMesh {
    /// Collects boundary edges of `mesh` and tags them with `is_dirichlet`
    /// evaluated at the panel midpoint.
    pub fn extract(mesh: &Mesh, is_dirichlet: impl Fn(Point) -> bool) -> Result<Self> {
        let mut panels = Vec::new();
        for e in 0..mesh.num_edges() {
            if !mesh.is_boundary_edge(e) {
                continue;
            }
            let t = mesh.edge_tris[e][0].expect("edge without triangle");
            let k = mesh.tri_edges[t].iter().position(|&x| x == e).unwrap();
            let tri = mesh.triangles[t];
            let v = [tri[k], tri[(k + 1) % 3]];
            let tag = if is_dirichlet(midpoint(mesh.vertices[v[0]], mesh.vertices[v[1]])) {
                PanelTag::Dirichlet
            } else {
                PanelTag::Neumann
            };
            panels.push(Panel { v, edge: e, tri: t, tag });
        }
        Self::from_panels(panels)
    }

    pub fn extract_region(mesh: &Mesh, dirichlet: &Region) -> Result<Self> {
        Self::extract(mesh, |p| dirichlet.contains(p))
    }

    pub(crate) fn from_panels(panels: Vec<Panel>) -> Result<Self> {
        let mut outgoing: HashMap<usize, usize> = HashMap::new();
        for (i, p) in panels.iter().enumerate() {
            if outgoing.insert(p.v[0], i).is_some() {
                return Err(Error::Geometry(format!("boundary vertex {} starts more than one panel", p.v[0])));
            }
        }
        let mut visited = vec![false; panels.len()];
        let mut loops = Vec::new();
        for start in 0..panels.len() {
            if visited[start] {
                continue;
            }
            let mut lp = Vec::new();
            let mut cur = start;
            while !visited[cur] {
                visited[cur] = true;
                lp.push(cur);
                cur = *outgoing
                    .get(&panels[cur].v[1])
                    .ok_or_else(|| Error::Geometry("boundary is not a union of closed loops".into()))?;
            }
            if cur != start {
                return Err(Error::Geometry("boundary loop does not close".into()));
            }
            loops.push(lp);
        }
        Ok(Self { panels, loops })
    }

    pub fn len(&self) -> usize {
        self.panels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.panels.is_empty()
    }

    pub fn endpoints(&self, mesh: &Mesh, i: usize) -> [Point; 2] {
        let p = &self.panels[i];
        [mesh.vertices[p.v[0]], mesh.vertices[p.v[1]]]
    }

    pub fn length(&self, mesh: &Mesh, i: usize) -> f64 {
        let [a, b] = self.endpoints(mesh, i);
        dist(a, b)
    }

    /// Exterior unit normal: the tangent rotated clockwise.
    pub fn normal(&self, mesh: &Mesh, i: usize) -> Point {
        let [a, b] = self.endpoints(mesh, i);
        let l = dist(a, b);
        [(b[1] - a[1]) / l, -(b[0] - a[0]) / l]
    }

    pub fn max_length(&self, mesh: &Mesh) -> f64 {
        (0..self.len()).map(|i| self.length(mesh, i)).fold(0.0, f64::max)
    }

    pub fn perimeter(&self, mesh: &Mesh) -> f64 {
        (0..self.len()).map(|i| self.length(mesh, i)).sum()
    }

    pub fn count(&self, tag: PanelTag) -> usize {
        self.panels.iter().filter(|p| p.tag == tag).count()
    }

    /// Mesh vertices lying on the boundary, in increasing order.
    pub fn vertices(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.panels.iter().map(|p| p.v[0]).collect();
        v.sort_unstable();
        v
    }
}
