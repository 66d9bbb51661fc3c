use super::{dist, signed_area, Mesh, Point};
use crate::error::{param, Error, Result};

/// Unstructured mesh of a simple polygon with all edges at most `h`.
///
/// Boundary edges are split uniformly, a triangular lattice fills the
/// interior and a Delaunay triangulation connects the points. Missing
/// boundary segments and overlong edges are repaired by inserting midpoints.
pub fn generate_polygon_mesh(polygon: &[Point], h: f64) -> Result<Mesh> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(param(format!("mesh size must be positive, got {h}")));
    }
    let poly = normalize_polygon(polygon)?;
    let n = poly.len();

    let spacing = 0.75 * h;
    // Boundary chain, kept as an ordered list of points per polygon edge.
    let mut chain: Vec<Point> = Vec::new();
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        let m = (dist(a, b) / spacing).ceil().max(1.0) as usize;
        for j in 0..m {
            let t = j as f64 / m as f64;
            chain.push([a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]);
        }
    }

    let (lo, hi) = bbox(&poly);
    let mut interior = Vec::new();
    let dy = spacing * 3f64.sqrt() / 2.0;
    let rows = ((hi[1] - lo[1]) / dy).ceil() as usize + 1;
    let cols = ((hi[0] - lo[0]) / spacing).ceil() as usize + 2;
    for r in 0..rows {
        let y = lo[1] + r as f64 * dy;
        let shift = if r % 2 == 1 { 0.5 * spacing } else { 0.0 };
        for c in 0..cols {
            let p = [lo[0] + shift + c as f64 * spacing, y];
            if point_in_polygon(p, &poly) && boundary_distance(p, &poly) > 0.45 * spacing {
                interior.push(p);
            }
        }
    }

    for _ in 0..64 {
        let mut pts = chain.clone();
        pts.extend_from_slice(&interior);
        let tris = delaunay(&pts)?;
        let tris: Vec<[usize; 3]> = tris
            .into_iter()
            .filter(|t| {
                let c = centroid(pts[t[0]], pts[t[1]], pts[t[2]]);
                point_in_polygon(c, &poly)
            })
            .collect();

        // Every chain segment has to be a triangle edge.
        let nc = chain.len();
        let mut present = std::collections::HashSet::new();
        for t in &tris {
            for k in 0..3 {
                present.insert((t[k], t[(k + 1) % 3]));
            }
        }
        let missing: Vec<usize> = (0..nc).filter(|&i| !present.contains(&(i, (i + 1) % nc))).collect();
        if !missing.is_empty() {
            let mut next = Vec::with_capacity(nc + missing.len());
            let mut mi = missing.iter().peekable();
            for i in 0..nc {
                next.push(chain[i]);
                if mi.peek() == Some(&&i) {
                    mi.next();
                    let (a, b) = (chain[i], chain[(i + 1) % nc]);
                    next.push([0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])]);
                }
            }
            chain = next;
            continue;
        }

        let mut long = Vec::new();
        for t in &tris {
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                if a < b && dist(pts[a], pts[b]) > h {
                    long.push((a, b));
                }
            }
        }
        if long.is_empty() {
            return compact(pts, tris);
        }
        // Overlong interior edges get a midpoint; boundary chain edges are
        // already at most `spacing`.
        for (a, b) in long {
            let m = [0.5 * (pts[a][0] + pts[b][0]), 0.5 * (pts[a][1] + pts[b][1])];
            if !interior.iter().any(|q| dist(*q, m) < 1e-12) {
                interior.push(m);
            }
        }
    }
    Err(Error::Geometry("polygon mesher did not converge".into()))
}

fn compact(pts: Vec<Point>, tris: Vec<[usize; 3]>) -> Result<Mesh> {
    let mut map = vec![usize::MAX; pts.len()];
    let mut vertices = Vec::new();
    let mut out = Vec::with_capacity(tris.len());
    for t in tris {
        let mut nt = [0; 3];
        for k in 0..3 {
            if map[t[k]] == usize::MAX {
                map[t[k]] = vertices.len();
                vertices.push(pts[t[k]]);
            }
            nt[k] = map[t[k]];
        }
        out.push(nt);
    }
    Mesh::new(vertices, out)
}

/// Drops repeated vertices, checks simplicity and returns a
/// counterclockwise copy.
fn normalize_polygon(polygon: &[Point]) -> Result<Vec<Point>> {
    let mut poly: Vec<Point> = Vec::with_capacity(polygon.len());
    for &p in polygon {
        if !p[0].is_finite() || !p[1].is_finite() {
            return Err(Error::Geometry("polygon vertex is not finite".into()));
        }
        if !matches!(poly.last(), Some(q) if !(dist(*q, p) > 0.0)) {
            poly.push(p);
        }
    }
    while poly.len() > 1 && dist(poly[0], *poly.last().unwrap()) == 0.0 {
        poly.pop();
    }
    if poly.len() < 3 {
        return Err(Error::Geometry("polygon needs at least three distinct vertices".into()));
    }
    let area = polygon_area(&poly);
    let (lo, hi) = bbox(&poly);
    let diam = dist(lo, hi);
    if area.abs() <= 1e-12 * diam * diam {
        return Err(Error::Geometry("polygon is degenerate (zero area)".into()));
    }
    if area < 0.0 {
        poly.reverse();
    }
    let n = poly.len();
    for i in 0..n {
        for j in i + 1..n {
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            let (a, b) = (poly[i], poly[(i + 1) % n]);
            let (c, d) = (poly[j], poly[(j + 1) % n]);
            if adjacent {
                // Folding back onto the previous edge.
                let shared = if j == i + 1 { b } else { a };
                let (p, q) = if j == i + 1 { (a, d) } else { (b, c) };
                if signed_area(p, shared, q).abs() < 1e-14 * diam * diam
                    && (p[0] - shared[0]) * (q[0] - shared[0]) + (p[1] - shared[1]) * (q[1] - shared[1]) > 0.0
                {
                    return Err(Error::Geometry(format!("polygon edges {i} and {j} overlap")));
                }
            } else if segments_intersect(a, b, c, d) {
                return Err(Error::Geometry(format!("polygon edges {i} and {j} intersect")));
            }
        }
    }
    Ok(poly)
}

fn polygon_area(p: &[Point]) -> f64 {
    let n = p.len();
    0.5 * (0..n).map(|i| p[i][0] * p[(i + 1) % n][1] - p[(i + 1) % n][0] * p[i][1]).sum::<f64>()
}

fn bbox(p: &[Point]) -> (Point, Point) {
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for q in p {
        for k in 0..2 {
            lo[k] = lo[k].min(q[k]);
            hi[k] = hi[k].max(q[k]);
        }
    }
    (lo, hi)
}

fn centroid(a: Point, b: Point, c: Point) -> Point {
    [(a[0] + b[0] + c[0]) / 3.0, (a[1] + b[1] + c[1]) / 3.0]
}

fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1])
}

fn on_segment(a: Point, b: Point, p: Point) -> bool {
    p[0] >= a[0].min(b[0]) && p[0] <= a[0].max(b[0]) && p[1] >= a[1].min(b[1]) && p[1] <= a[1].max(b[1])
}

fn segments_intersect(a: Point, b: Point, c: Point, d: Point) -> bool {
    let (d1, d2) = (orient(c, d, a), orient(c, d, b));
    let (d3, d4) = (orient(a, b, c), orient(a, b, d));
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0)) {
        return true;
    }
    (d1 == 0.0 && on_segment(c, d, a))
        || (d2 == 0.0 && on_segment(c, d, b))
        || (d3 == 0.0 && on_segment(a, b, c))
        || (d4 == 0.0 && on_segment(a, b, d))
}

pub(crate) fn point_in_polygon(p: Point, poly: &[Point]) -> bool {
    let n = poly.len();
    let mut inside = false;
    let mut j = n - 1;
    for i in 0..n {
        let (a, b) = (poly[i], poly[j]);
        if (a[1] > p[1]) != (b[1] > p[1]) {
            let x = a[0] + (p[1] - a[1]) * (b[0] - a[0]) / (b[1] - a[1]);
            if p[0] < x {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

fn boundary_distance(p: Point, poly: &[Point]) -> f64 {
    let n = poly.len();
    (0..n)
        .map(|i| {
            let (a, b) = (poly[i], poly[(i + 1) % n]);
            let ab = [b[0] - a[0], b[1] - a[1]];
            let t = (((p[0] - a[0]) * ab[0] + (p[1] - a[1]) * ab[1]) / (ab[0] * ab[0] + ab[1] * ab[1])).clamp(0.0, 1.0);
            dist(p, [a[0] + t * ab[0], a[1] + t * ab[1]])
        })
        .fold(f64::INFINITY, f64::min)
}

/// Bowyer-Watson triangulation. Returns counterclockwise triangles over the
/// input point indices.
fn delaunay(pts: &[Point]) -> Result<Vec<[usize; 3]>> {
    let (lo, hi) = bbox(pts);
    let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-300);
    let c = [0.5 * (lo[0] + hi[0]), 0.5 * (lo[1] + hi[1])];
    let n = pts.len();
    let mut p: Vec<Point> = pts.to_vec();
    p.push([c[0] - 20.0 * span, c[1] - 10.0 * span]);
    p.push([c[0] + 20.0 * span, c[1] - 10.0 * span]);
    p.push([c[0], c[1] + 20.0 * span]);

    struct Tri {
        v: [usize; 3],
        cc: Point,
        r2: f64,
        alive: bool,
    }
    let make = |p: &[Point], v: [usize; 3]| -> Tri {
        let (a, b, c) = (p[v[0]], p[v[1]], p[v[2]]);
        let d = 2.0 * orient(a, b, c);
        let (a2, b2, c2) = (a[0] * a[0] + a[1] * a[1], b[0] * b[0] + b[1] * b[1], c[0] * c[0] + c[1] * c[1]);
        let ux = (a2 * (b[1] - c[1]) + b2 * (c[1] - a[1]) + c2 * (a[1] - b[1])) / d;
        let uy = (a2 * (c[0] - b[0]) + b2 * (a[0] - c[0]) + c2 * (b[0] - a[0])) / d;
        let cc = [ux, uy];
        let r2 = (a[0] - ux).powi(2) + (a[1] - uy).powi(2);
        Tri { v, cc, r2, alive: true }
    };
    let mut tris = vec![make(&p, [n, n + 1, n + 2])];
    for i in 0..n {
        let q = p[i];
        let mut bad = Vec::new();
        for (t, tri) in tris.iter().enumerate() {
            if tri.alive {
                let d2 = (q[0] - tri.cc[0]).powi(2) + (q[1] - tri.cc[1]).powi(2);
                if d2 < tri.r2 * (1.0 - 1e-12) {
                    bad.push(t);
                }
            }
        }
        if bad.is_empty() {
            return Err(Error::Geometry("duplicate point in triangulation".into()));
        }
        let mut cavity: Vec<[usize; 2]> = Vec::new();
        for &t in &bad {
            let v = tris[t].v;
            for k in 0..3 {
                let e = [v[k], v[(k + 1) % 3]];
                if let Some(pos) = cavity.iter().position(|f| f[0] == e[1] && f[1] == e[0]) {
                    cavity.swap_remove(pos);
                } else {
                    cavity.push(e);
                }
            }
            tris[t].alive = false;
        }
        for e in cavity {
            if orient(p[e[0]], p[e[1]], q) <= 0.0 {
                return Err(Error::Geometry("triangulation cavity is not star-shaped".into()));
            }
            tris.push(make(&p, [e[0], e[1], i]));
        }
        if tris.len() > 4 * n + 64 && tris.iter().filter(|t| !t.alive).count() > tris.len() / 2 {
            tris.retain(|t| t.alive);
        }
    }
    Ok(tris.into_iter().filter(|t| t.alive && t.v.iter().all(|&v| v < n)).map(|t| t.v).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{BoundaryMesh, Region};

    fn pentagon() -> Vec<Point> {
        (0..5)
            .map(|k| {
                let a = std::f64::consts::FRAC_PI_2 + 2.0 * std::f64::consts::PI * k as f64 / 5.0;
                [a.cos(), a.sin()]
            })
            .collect()
    }

    #[test]
    fn pentagon_mesh_is_valid() {
        let poly = pentagon();
        let m = generate_polygon_mesh(&poly, 0.2).unwrap();
        assert_eq!(m.euler_characteristic(), 1);
        assert!(m.max_edge_length() <= 0.2 + 1e-12);
        assert!((m.total_area() - polygon_area(&poly)).abs() < 1e-12);
        let b = BoundaryMesh::extract_region(&m, &Region::Everywhere).unwrap();
        assert_eq!(b.loops.len(), 1);
    }

    #[test]
    fn clockwise_input_and_nonconvex_shape() {
        let poly = vec![[0.0, 0.0], [0.0, 2.0], [1.0, 2.0], [1.0, 1.0], [2.0, 1.0], [2.0, 0.0]];
        let m = generate_polygon_mesh(&poly, 0.3).unwrap();
        assert!((m.total_area() - 3.0).abs() < 1e-12);
        assert!(m.max_edge_length() <= 0.3 + 1e-12);
    }

    #[test]
    fn self_intersecting_polygon_is_rejected() {
        let bowtie = vec![[0.0, 0.0], [1.0, 1.0], [1.0, 0.0], [0.0, 1.0]];
        assert!(matches!(generate_polygon_mesh(&bowtie, 0.2), Err(Error::Geometry(_))));
    }

    #[test]
    fn collinear_polygon_is_rejected() {
        let line = vec![[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]];
        assert!(matches!(generate_polygon_mesh(&line, 0.2), Err(Error::Geometry(_))));
    }
}
