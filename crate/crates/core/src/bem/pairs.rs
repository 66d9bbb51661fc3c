//! Quadrature rules for panel pairs on `[0,1]²`, returned as `(t, τ, w)`
//! with `t` on the test panel and `τ` on the trial panel.

use std::sync::OnceLock;

use super::space::PanelGeom;
use crate::quadrature::{gauss, graded, graded_default, Rule1d};

pub type PairRule = Vec<(f64, f64, f64)>;

/// Identical panels: relative coordinate `u = |t - τ|`, graded towards 0,
/// with Gauss in the remaining variable (exact for the polynomial factors).
/// Entries are `(t, τ, w, τ - t)`; the offset is kept exactly since `u`
/// reaches below machine epsilon.
pub fn coincident() -> &'static Vec<(f64, f64, f64, f64)> {
    static RULE: OnceLock<Vec<(f64, f64, f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| {
        let g = gauss(3);
        let mut out = Vec::new();
        for (u, wu) in graded_default().iter() {
            for (x, wx) in g.iter() {
                let tau = (1.0 - u) * x;
                let w = wu * wx * (1.0 - u);
                out.push((tau + u, tau, w, -u));
                out.push((tau, tau + u, w, u));
            }
        }
        out
    })
}

fn radial() -> &'static Rule1d {
    static RULE: OnceLock<Rule1d> = OnceLock::new();
    RULE.get_or_init(|| graded(20, 0.3, 12, 3))
}

/// Panels meeting at a corner placed at `t = τ = 0`. Duffy transform of the
/// two triangles of the square, graded in the radial variable.
fn corner_canonical() -> &'static PairRule {
    static RULE: OnceLock<PairRule> = OnceLock::new();
    RULE.get_or_init(|| {
        let gw = gauss(10);
        let mut out = Vec::new();
        for (rho, wr) in radial().iter() {
            for (w, ww) in gw.iter() {
                let wt = wr * ww * rho;
                out.push((rho, rho * w, wt));
                out.push((rho * w, rho, wt));
            }
        }
        out
    })
}

/// Shared-vertex rule: `p_at_end` says whether the corner is at `t = 1` on the
/// test panel, `q_at_end` likewise for `τ` on the trial panel.
pub fn corner(p_at_end: bool, q_at_end: bool) -> impl Iterator<Item = (f64, f64, f64)> {
    corner_raw().map(move |(a, b, w)| (if p_at_end { 1.0 - a } else { a }, if q_at_end { 1.0 - b } else { b }, w))
}

/// Corner rule in distances `(a, b)` from the shared vertex along each panel.
pub fn corner_raw() -> impl Iterator<Item = (f64, f64, f64)> {
    corner_canonical().iter().copied()
}

/// Smallest distance between two segments that do not touch.
pub fn segment_distance(p: &PanelGeom, q: &PanelGeom) -> f64 {
    let d = |x: [f64; 2], s: &PanelGeom| {
        let ab = [s.b[0] - s.a[0], s.b[1] - s.a[1]];
        let t = (((x[0] - s.a[0]) * ab[0] + (x[1] - s.a[1]) * ab[1]) / (s.len * s.len)).clamp(0.0, 1.0);
        let y = s.point(t);
        (x[0] - y[0]).hypot(x[1] - y[1])
    };
    d(p.a, q).min(d(p.b, q)).min(d(q.a, p)).min(d(q.b, p))
}

/// Points per Gauss subinterval for a smooth kernel at relative distance
/// `ratio = dist / len`, aiming at about 1e-12.
pub fn gauss_order(ratio: f64) -> usize {
    let n = (12.0 * std::f64::consts::LN_10 / (2.0 * (1.0 + 2.0 * ratio).ln())).ceil() as usize + 1;
    n.clamp(3, 20)
}

/// Subintervals needed so that the kernel's exponential factor varies by a
/// bounded amount over each piece.
pub fn subdivisions(kappa_len: f64) -> usize {
    ((kappa_len / 6.0).ceil() as usize).clamp(1, 32)
}

/// Composite tensor Gauss rule for well separated panels.
pub fn separated(p: &PanelGeom, q: &PanelGeom, kappa_abs: f64, dist: f64) -> PairRule {
    let lmax = p.len.max(q.len);
    let n = gauss_order(dist / lmax);
    let g = gauss(n);
    let mp = subdivisions(kappa_abs * p.len);
    let mq = subdivisions(kappa_abs * q.len);
    let mut out = Vec::with_capacity(mp * mq * n * n);
    for a in 0..mp {
        for (x, wx) in g.iter() {
            let t = (a as f64 + x) / mp as f64;
            let wt = wx / mp as f64;
            for b in 0..mq {
                for (y, wy) in g.iter() {
                    out.push((t, (b as f64 + y) / mq as f64, wt * wy / mq as f64));
                }
            }
        }
    }
    out
}
