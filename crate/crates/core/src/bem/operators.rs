use std::f64::consts::PI;

use faer::Mat;

use super::bessel::k0_k1;
use super::pairs::{coincident, corner_raw, segment_distance, separated};
use super::space::BoundarySpaces;
use crate::error::{param, Result};
use crate::par;
use crate::C64;

/// Pairs whose closest points satisfy `Re κ · dist > DECAY_CUTOFF` are
/// dropped; the kernel there is below `e^-40` of its near-field size.
const DECAY_CUTOFF: f64 = 40.0;

/// Galerkin matrices of the boundary integral operators at wavenumber
/// `κ = s/c`.
#[derive(Debug, Clone)]
pub struct CalderonBlock {
    pub kappa: C64,
    /// `X_h × X_h`.
    pub v: Mat<C64>,
    /// `X_h × Y_h`.
    pub k: Mat<C64>,
    /// `Y_h × X_h`.
    pub kt: Mat<C64>,
    /// `Y_h × Y_h`.
    pub w: Mat<C64>,
    /// Boundary mass `X_h × Y_h`.
    pub m_xy: Mat<f64>,
}

#[derive(Clone, Copy, Default)]
struct Block {
    v: [[C64; 2]; 2],
    w: [[C64; 3]; 3],
    /// K entries with test functions on the first panel.
    k_pq: [[C64; 3]; 2],
    /// K entries with test functions on the second panel.
    k_qp: [[C64; 3]; 2],
}

/// Validates `Re s > 0` and returns `κ = s/c`.
pub fn wavenumber(s: C64, c: f64) -> Result<C64> {
    if !(s.re > 0.0) {
        return Err(param(format!("Laplace parameter must satisfy Re s > 0, got {s}")));
    }
    if !(c > 0.0) {
        return Err(param("sound speed must be positive"));
    }
    Ok(s / c)
}

impl CalderonBlock {
    /// Assembles V, K, Kᵀ and W for `Re s > 0`.
    pub fn assemble(s: C64, c: f64, bs: &BoundarySpaces) -> Result<Self> {
        Ok(Self::assemble_kappa(wavenumber(s, c)?, bs))
    }

    /// Assembly for any `κ ≠ 0` with `Re κ ≥ 0` (the imaginary axis is allowed
    /// for frequency-domain tests).
    pub fn assemble_kappa(kappa: C64, bs: &BoundarySpaces) -> Self {
        let np = bs.num_panels();
        let rows = par::map_indexed(np, |p| {
            (p..np).filter_map(|q| pair_block(kappa, bs, p, q).map(|b| (q, b))).collect::<Vec<_>>()
        });
        let (nx, ny) = (bs.n_x, bs.n_y);
        let mut v = Mat::<C64>::zeros(nx, nx);
        let mut w = Mat::<C64>::zeros(ny, ny);
        let mut k = Mat::<C64>::zeros(nx, ny);
        let kx = bs.degree;
        let ky = bs.y_count();
        for (p, row) in rows.iter().enumerate() {
            for &(q, ref b) in row {
                for i in 0..kx {
                    for j in 0..kx {
                        v[(bs.x_dof(p, i), bs.x_dof(q, j))] += b.v[i][j];
                        if p != q {
                            v[(bs.x_dof(q, j), bs.x_dof(p, i))] += b.v[i][j];
                        }
                    }
                    for j in 0..ky {
                        k[(bs.x_dof(p, i), bs.y_local[q][j])] += b.k_pq[i][j];
                        if p != q {
                            k[(bs.x_dof(q, i), bs.y_local[p][j])] += b.k_qp[i][j];
                        }
                    }
                }
                for i in 0..ky {
                    for j in 0..ky {
                        w[(bs.y_local[p][i], bs.y_local[q][j])] += b.w[i][j];
                        if p != q {
                            w[(bs.y_local[q][j], bs.y_local[p][i])] += b.w[i][j];
                        }
                    }
                }
            }
        }
        let kt = k.transpose().to_owned();
        let mut m_xy = Mat::<f64>::zeros(nx, ny);
        for (i, j, val) in bs.mass_xy() {
            m_xy[(i, j)] += val;
        }
        CalderonBlock { kappa, v, k, kt, w, m_xy }
    }

    /// Dense `𝔻 = [V, ½M - K; -½Mᵀ + Kᵀ, W]` of size `(n_x + n_y)²`.
    pub fn operator_matrix(&self) -> Mat<C64> {
        let (nx, ny) = (self.v.nrows(), self.w.nrows());
        let mut d = Mat::<C64>::zeros(nx + ny, nx + ny);
        for i in 0..nx {
            for j in 0..nx {
                d[(i, j)] = self.v[(i, j)];
            }
            for j in 0..ny {
                d[(i, nx + j)] = C64::new(0.5 * self.m_xy[(i, j)], 0.0) - self.k[(i, j)];
            }
        }
        for i in 0..ny {
            for j in 0..nx {
                d[(nx + i, j)] = C64::new(-0.5 * self.m_xy[(j, i)], 0.0) + self.kt[(i, j)];
            }
            for j in 0..ny {
                d[(nx + i, nx + j)] = self.w[(i, j)];
            }
        }
        d
    }
}

fn pair_block(kappa: C64, bs: &BoundarySpaces, p: usize, q: usize) -> Option<Block> {
    let pp = &bs.panels[p];
    let pq = &bs.panels[q];
    let mut blk = Block::default();
    if p == q {
        let e = sub(pp.b, pp.a);
        let rule = coincident().iter().map(|&(t, tau, w, u)| (t, tau, w, [u * e[0], u * e[1]]));
        accumulate(kappa, bs, p, q, rule, &mut blk);
        return Some(blk);
    }
    let (yp, yq) = (&bs.y_local[p], &bs.y_local[q]);
    let shared_end = yp[1] == yq[0];
    let shared_start = yp[0] == yq[1];
    if shared_end != shared_start {
        // Offsets from the shared vertex are exact in the distances (a, b).
        let (ep, eq) = if shared_end { (sub(pp.a, pp.b), sub(pq.b, pq.a)) } else { (sub(pp.b, pp.a), sub(pq.a, pq.b)) };
        let rule = corner_raw().map(|(a, b, w)| {
            let (t, tau) = if shared_end { (1.0 - a, b) } else { (a, 1.0 - b) };
            (t, tau, w, [b * eq[0] - a * ep[0], b * eq[1] - a * ep[1]])
        });
        accumulate(kappa, bs, p, q, rule, &mut blk);
        return Some(blk);
    }
    let dist = segment_distance(pp, pq);
    if kappa.re * dist > DECAY_CUTOFF {
        return None;
    }
    let rule = separated(pp, pq, kappa.norm(), dist)
        .into_iter()
        .map(|(t, tau, w)| (t, tau, w, sub(pq.point(tau), pp.point(t))));
    accumulate(kappa, bs, p, q, rule, &mut blk);
    Some(blk)
}

fn sub(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [a[0] - b[0], a[1] - b[1]]
}

fn accumulate(
    kappa: C64,
    bs: &BoundarySpaces,
    p: usize,
    q: usize,
    rule: impl Iterator<Item = (f64, f64, f64, [f64; 2])>,
    blk: &mut Block,
) {
    let pp = &bs.panels[p];
    let pq = &bs.panels[q];
    let scale = pp.len * pq.len;
    let nudot = pp.nu[0] * pq.nu[0] + pp.nu[1] * pq.nu[1];
    let k2 = kappa * kappa * nudot;
    let kx = bs.degree;
    let ky = bs.y_count();
    let same = p == q;
    for (t, tau, wq, d) in rule {
        let r = d[0].hypot(d[1]);
        let (k0, k1) = k0_k1(kappa * r);
        let w = wq * scale;
        let g = k0 * (w / (2.0 * PI));
        let xt = bs.x_basis(t);
        let xs = bs.x_basis(tau);
        let (yt, dyt) = bs.y_basis(t);
        let (ys, dys) = bs.y_basis(tau);
        for i in 0..kx {
            for j in 0..kx {
                blk.v[i][j] += g * (xt[i] * xs[j]);
            }
        }
        for i in 0..ky {
            let di = dyt[i] / pp.len;
            for j in 0..ky {
                let dj = dys[j] / pq.len;
                blk.w[i][j] += g * (di * dj) + g * k2 * (yt[i] * ys[j]);
            }
        }
        if !same {
            // ∂G/∂ν_y = -κ K₁(κr)/(2π) · ((y - x)·ν_y)/r
            let f = -kappa * k1 * (w / (2.0 * PI * r));
            let dny = f * (d[0] * pq.nu[0] + d[1] * pq.nu[1]);
            let dnx = f * -(d[0] * pp.nu[0] + d[1] * pp.nu[1]);
            for i in 0..kx {
                for j in 0..ky {
                    blk.k_pq[i][j] += dny * (xt[i] * ys[j]);
                    blk.k_qp[i][j] += dnx * (xs[i] * yt[j]);
                }
            }
        }
    }
}
