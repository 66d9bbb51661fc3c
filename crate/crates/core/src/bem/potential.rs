use std::f64::consts::PI;

use super::bessel::k0_k1;
use super::pairs::{gauss_order, subdivisions};
use super::space::{BoundarySpaces, PanelGeom};
use crate::mesh::Point;
use crate::par;
use crate::quadrature::{gauss, graded_default};
use crate::C64;

/// Field values of the representation formula `v = D φ - S λ`.
#[derive(Debug, Clone)]
pub struct PotentialEval {
    pub values: Vec<C64>,
    /// Points closer than `h/2` to Γ, where accuracy may degrade.
    pub near: Vec<bool>,
}

impl PotentialEval {
    pub fn any_near(&self) -> bool {
        self.near.iter().any(|&b| b)
    }
}

/// Evaluates `D(κ)φ - S(κ)λ` at the given points. Either density may be
/// absent, in which case it is treated as zero.
pub fn eval_potentials(
    kappa: C64,
    bs: &BoundarySpaces,
    lambda: Option<&[C64]>,
    phi: Option<&[C64]>,
    points: &[Point],
) -> PotentialEval {
    let h = bs.h();
    let res = par::map_slice(points, |&x| {
        let mut v = C64::new(0.0, 0.0);
        let mut dmin = f64::INFINITY;
        for (q, pg) in bs.panels.iter().enumerate() {
            let (t0, dist) = foot(pg, x);
            dmin = dmin.min(dist);
            if kappa.re * dist > 40.0 {
                continue;
            }
            let mut add = |t: f64, w: f64| {
                let y = pg.point(t);
                let d = [y[0] - x[0], y[1] - x[1]];
                let r = d[0].hypot(d[1]);
                if r == 0.0 {
                    return;
                }
                let (k0, k1) = k0_k1(kappa * r);
                let ww = w * pg.len / (2.0 * PI);
                if let Some(l) = lambda {
                    let xb = bs.x_basis(t);
                    let dens: C64 = (0..bs.degree).map(|i| l[bs.x_dof(q, i)] * xb[i]).sum();
                    v -= k0 * dens * ww;
                }
                if let Some(f) = phi {
                    let (yb, _) = bs.y_basis(t);
                    let dens: C64 = (0..bs.y_count()).map(|j| f[bs.y_local[q][j]] * yb[j]).sum();
                    let dn = -kappa * k1 * ((d[0] * pg.nu[0] + d[1] * pg.nu[1]) / r);
                    v += dn * dens * ww;
                }
            };
            if dist < pg.len {
                // Graded towards the foot point on both sides.
                for (u, w) in graded_default().iter() {
                    if t0 > 0.0 {
                        add(t0 - u * t0, w * t0);
                    }
                    if t0 < 1.0 {
                        add(t0 + u * (1.0 - t0), w * (1.0 - t0));
                    }
                }
            } else {
                let n = gauss_order(dist / pg.len);
                let m = subdivisions(kappa.norm() * pg.len);
                let g = gauss(n);
                for a in 0..m {
                    for (y, w) in g.iter() {
                        add((a as f64 + y) / m as f64, w / m as f64);
                    }
                }
            }
        }
        (v, dmin < 0.5 * h)
    });
    PotentialEval { values: res.iter().map(|r| r.0).collect(), near: res.iter().map(|r| r.1).collect() }
}

/// Closest parameter on the panel and the distance to it.
fn foot(pg: &PanelGeom, x: Point) -> (f64, f64) {
    let ab = [pg.b[0] - pg.a[0], pg.b[1] - pg.a[1]];
    let t = (((x[0] - pg.a[0]) * ab[0] + (x[1] - pg.a[1]) * ab[1]) / (pg.len * pg.len)).clamp(0.0, 1.0);
    let y = pg.point(t);
    (t, (x[0] - y[0]).hypot(x[1] - y[1]))
}
