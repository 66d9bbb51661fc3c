use super::space::{FeSpace, QuadPoint};
use crate::bem::BoundarySpaces;
use crate::materials::{Density, MaterialSet};
use crate::mesh::{Mesh, PanelTag, Point};
use crate::par;
use crate::quadrature::{gauss, TriangleRule};
use crate::sparse::Csr;
use crate::C64;

/// Sparse FEM matrices; the `s²` factor of the mass term is applied when the
/// frequency system is built.
#[derive(Debug, Clone)]
pub struct FemBlock {
    pub k_c: Csr,
    pub m: Csr,
    /// Rows: displacement test dofs, columns: potential dofs.
    pub e_c: Csr,
    pub k_eps: Csr,
}

impl FemBlock {
    pub fn assemble(mesh: &Mesh, space: &FeSpace, mat: &MaterialSet) -> Self {
        FemBlock {
            k_c: assemble_elastic_stiffness(mesh, space, mat),
            m: assemble_mass(mesh, space, &mat.rho_solid),
            e_c: assemble_piezo_coupling(mesh, space, mat),
            k_eps: assemble_dielectric(mesh, space, mat),
        }
    }

    /// Rows of `A(s) z` for `A = [K_C + s²M, E_c; -E_cᵀ, K_ε]`, with `psi`
    /// over all nodes.
    pub fn apply(&self, s: C64, u: &[C64], psi: &[C64]) -> (Vec<C64>, Vec<C64>) {
        let ku = self.k_c.mul_cvec(u);
        let mu = self.m.mul_cvec(u);
        let ep = self.e_c.mul_cvec(psi);
        let ru = (0..u.len()).map(|i| ku[i] + s * s * mu[i] + ep[i]).collect();
        let etu = self.e_c.transpose().mul_cvec(u);
        let kp = self.k_eps.mul_cvec(psi);
        let rp = etu.iter().zip(&kp).map(|(a, b)| b - a).collect();
        (ru, rp)
    }

    /// `zᴴK_C z + |s|² zᴴM z + zᴴK_ε z`, the FEM part of the energy norm.
    pub fn energy_norm_sq(&self, s: C64, u: &[C64], psi: &[C64]) -> f64 {
        let q = |a: &Csr, x: &[C64]| -> f64 { dotc(x, &a.mul_cvec(x)).re };
        q(&self.k_c, u) + s.norm_sqr() * q(&self.m, u) + q(&self.k_eps, psi)
    }

    /// `Re(s̄ uᴴ(A z)_u + s ψᴴ(A z)_ψ)`. Equals `Re s` times
    /// [`energy_norm_sq`](Self::energy_norm_sq) since the coupling blocks
    /// cancel.
    pub fn weighted_form(&self, s: C64, u: &[C64], psi: &[C64]) -> f64 {
        let (ru, rp) = self.apply(s, u, psi);
        (s.conj() * dotc(u, &ru) + s * dotc(psi, &rp)).re
    }
}

fn dotc(x: &[C64], y: &[C64]) -> C64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

/// Element loop: `local` fills a dense `rows × cols` block from the
/// tabulated quadrature points; `map_row`/`map_col` send local indices to
/// global ones. Local blocks are computed in parallel and merged in triangle
/// order.
fn assemble<F>(
    mesh: &Mesh,
    space: &FeSpace,
    rule: &TriangleRule,
    shape: (usize, usize),
    size: (usize, usize),
    local: F,
) -> Csr
where
    F: Fn(&[QuadPoint], &mut [f64]) + Sync + Send,
{
    let nl = space.local_count();
    let (rc, cc) = shape;
    let (lr, lc) = (rc * nl, cc * nl);
    let nn = space.n_nodes;
    let blocks = par::map_indexed(mesh.num_triangles(), |t| {
        let qp = space.quad_points(mesh, t, rule);
        let mut buf = vec![0.0; lr * lc];
        local(&qp, &mut buf);
        buf
    });
    let mut trips = Vec::with_capacity(blocks.len() * lr * lc);
    for (t, buf) in blocks.iter().enumerate() {
        let nodes = space.local_nodes(t);
        for i in 0..lr {
            let gi = (i / nl) * nn + nodes[i % nl];
            for j in 0..lc {
                let gj = (j / nl) * nn + nodes[j % nl];
                trips.push((gi, gj, buf[i * lc + j]));
            }
        }
    }
    Csr::from_triplets(size.0, size.1, &trips)
}

/// Voigt strain of the vector basis function (component `c`, node `a`).
fn strain_of(g: [f64; 2], c: usize) -> [f64; 3] {
    if c == 0 {
        [g[0], 0.0, g[1]]
    } else {
        [0.0, g[1], g[0]]
    }
}

fn rule_for(space: &FeSpace, rho: Option<&Density>) -> &'static TriangleRule {
    match rho {
        Some(r) if !r.is_constant() => TriangleRule::radon7(),
        _ => space.default_rule(),
    }
}

/// `K_C[I, J] = ∫ C ε(φ_J) : ε(φ_I)`.
pub fn assemble_elastic_stiffness(mesh: &Mesh, space: &FeSpace, mat: &MaterialSet) -> Csr {
    let nl = space.local_count();
    let n = 2 * space.n_nodes;
    assemble(mesh, space, space.default_rule(), (2, 2), (n, n), |qp, buf| {
        let lc = 2 * nl;
        for q in qp {
            for i in 0..lc {
                let bi = strain_of(q.g[i % nl], i / nl);
                for j in 0..lc {
                    let bj = strain_of(q.g[j % nl], j / nl);
                    let mut v = 0.0;
                    for a in 0..3 {
                        for b in 0..3 {
                            v += bi[a] * mat.c[a][b] * bj[b];
                        }
                    }
                    buf[i * lc + j] += q.w * v;
                }
            }
        }
    })
}

/// Scalar mass `∫ ρ χ_J χ_I`.
pub fn assemble_scalar_mass(mesh: &Mesh, space: &FeSpace, rho: &Density) -> Csr {
    let nl = space.local_count();
    let n = space.n_nodes;
    assemble(mesh, space, rule_for(space, Some(rho)), (1, 1), (n, n), |qp, buf| {
        for q in qp {
            let r = rho.at(q.x);
            for i in 0..nl {
                for j in 0..nl {
                    buf[i * nl + j] += q.w * r * q.n[i] * q.n[j];
                }
            }
        }
    })
}

/// Vector mass `∫ ρ φ_J · φ_I` in component-blocked layout.
pub fn assemble_mass(mesh: &Mesh, space: &FeSpace, rho: &Density) -> Csr {
    let s = assemble_scalar_mass(mesh, space, rho);
    let nn = space.n_nodes;
    let trips: Vec<_> = s.iter().flat_map(|(r, c, v)| [(r, c, v), (r + nn, c + nn, v)]).collect();
    Csr::from_triplets(2 * nn, 2 * nn, &trips)
}

/// `E_c[I, J] = ∫ e ∇χ_J : ε(φ_I)`.
pub fn assemble_piezo_coupling(mesh: &Mesh, space: &FeSpace, mat: &MaterialSet) -> Csr {
    let nl = space.local_count();
    let nn = space.n_nodes;
    assemble(mesh, space, space.default_rule(), (2, 1), (2 * nn, nn), |qp, buf| {
        for q in qp {
            for j in 0..nl {
                let g = q.g[j];
                let sig: [f64; 3] = std::array::from_fn(|a| mat.e[0][a] * g[0] + mat.e[1][a] * g[1]);
                for i in 0..2 * nl {
                    let bi = strain_of(q.g[i % nl], i / nl);
                    buf[i * nl + j] += q.w * (sig[0] * bi[0] + sig[1] * bi[1] + sig[2] * bi[2]);
                }
            }
        }
    })
}

/// `K_ϵ[I, J] = ∫ ϵ ∇χ_J · ∇χ_I`.
pub fn assemble_dielectric(mesh: &Mesh, space: &FeSpace, mat: &MaterialSet) -> Csr {
    let nl = space.local_count();
    let nn = space.n_nodes;
    let e = mat.eps;
    assemble(mesh, space, space.default_rule(), (1, 1), (nn, nn), |qp, buf| {
        for q in qp {
            for i in 0..nl {
                let gi = q.g[i];
                for j in 0..nl {
                    let gj = q.g[j];
                    let v = gi[0] * (e[0][0] * gj[0] + e[0][1] * gj[1]) + gi[1] * (e[1][0] * gj[0] + e[1][1] * gj[1]);
                    buf[i * nl + j] += q.w * v;
                }
            }
        }
    })
}

/// `∫ f · φ_I` for a vector field, component-blocked.
pub fn load_vector<F>(mesh: &Mesh, space: &FeSpace, rule: &TriangleRule, f: F) -> Vec<C64>
where
    F: Fn(Point) -> [C64; 2] + Sync + Send,
{
    let nl = space.local_count();
    let nn = space.n_nodes;
    let locals = par::map_indexed(mesh.num_triangles(), |t| {
        let mut loc = [C64::new(0.0, 0.0); 12];
        for q in space.quad_points(mesh, t, rule) {
            let v = f(q.x);
            for i in 0..nl {
                loc[i] += v[0] * (q.w * q.n[i]);
                loc[nl + i] += v[1] * (q.w * q.n[i]);
            }
        }
        loc
    });
    let mut out = vec![C64::new(0.0, 0.0); 2 * nn];
    for (t, loc) in locals.iter().enumerate() {
        for (i, &n) in space.local_nodes(t).iter().enumerate() {
            out[n] += loc[i];
            out[nn + n] += loc[nl + i];
        }
    }
    out
}

/// `∫ f χ_I` for a scalar field.
pub fn load_scalar<F>(mesh: &Mesh, space: &FeSpace, rule: &TriangleRule, f: F) -> Vec<C64>
where
    F: Fn(Point) -> C64 + Sync + Send,
{
    let nl = space.local_count();
    let locals = par::map_indexed(mesh.num_triangles(), |t| {
        let mut loc = [C64::new(0.0, 0.0); 6];
        for q in space.quad_points(mesh, t, rule) {
            let v = f(q.x);
            for i in 0..nl {
                loc[i] += v * (q.w * q.n[i]);
            }
        }
        loc
    });
    let mut out = vec![C64::new(0.0, 0.0); space.n_nodes];
    for (t, loc) in locals.iter().enumerate() {
        for (i, &n) in space.local_nodes(t).iter().enumerate() {
            out[n] += loc[i];
        }
    }
    out
}

/// `NΓ[i, J] = ∫_Γ (φ_J · ν) χ_i` with rows in `Y_h` and columns in the
/// displacement space.
pub fn assemble_normal_trace(space: &FeSpace, bs: &BoundarySpaces) -> Csr {
    let g = gauss(3);
    let nn = space.n_nodes;
    let ny = bs.y_count();
    let mut trips = Vec::new();
    for (p, pg) in bs.panels.iter().enumerate() {
        let mut loc = [[0.0; 3]; 3];
        for (t, w) in g.iter() {
            let (yb, _) = bs.y_basis(t);
            for i in 0..ny {
                for j in 0..ny {
                    loc[i][j] += w * pg.len * yb[i] * yb[j];
                }
            }
        }
        for i in 0..ny {
            for j in 0..ny {
                let node = bs.y_fem_node[bs.y_local[p][j]];
                for c in 0..2 {
                    trips.push((bs.y_local[p][i], c * nn + node, loc[i][j] * pg.nu[c]));
                }
            }
        }
    }
    Csr::from_triplets(bs.n_y, 2 * nn, &trips)
}

/// `∫_Γ τ · φ_I` for a traction field `τ(x, ν)`, panel-wise Gauss.
pub fn boundary_load_vector<F>(space: &FeSpace, bs: &BoundarySpaces, f: F) -> Vec<C64>
where
    F: Fn(Point, Point) -> [C64; 2],
{
    let g = gauss(6);
    let nn = space.n_nodes;
    let mut out = vec![C64::new(0.0, 0.0); 2 * nn];
    for (p, pg) in bs.panels.iter().enumerate() {
        for (t, w) in g.iter() {
            let v = f(pg.point(t), pg.nu);
            let (yb, _) = bs.y_basis(t);
            for j in 0..bs.y_count() {
                let node = bs.y_fem_node[bs.y_local[p][j]];
                let wj = w * pg.len * yb[j];
                out[node] += v[0] * wj;
                out[nn + node] += v[1] * wj;
            }
        }
    }
    out
}

/// `∫_{Γ_N} η χ_I` for a scalar flux `η(x, ν)`.
pub fn boundary_load_scalar<F>(space: &FeSpace, bs: &BoundarySpaces, f: F) -> Vec<C64>
where
    F: Fn(Point, Point) -> C64,
{
    let g = gauss(6);
    let mut out = vec![C64::new(0.0, 0.0); space.n_nodes];
    for (p, pg) in bs.panels.iter().enumerate() {
        if pg.tag != PanelTag::Neumann {
            continue;
        }
        for (t, w) in g.iter() {
            let v = f(pg.point(t), pg.nu);
            let (yb, _) = bs.y_basis(t);
            for j in 0..bs.y_count() {
                out[bs.y_fem_node[bs.y_local[p][j]]] += v * (w * pg.len * yb[j]);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{generate_rect_mesh, BoundaryMesh, DiagonalPattern, Region};

    fn setup(k: usize, h: f64) -> (Mesh, BoundaryMesh, FeSpace) {
        let m = generate_rect_mesh([1.0, 1.0], [3.0, 2.0], h, DiagonalPattern::Right).unwrap();
        let b = BoundaryMesh::extract_region(&m, &Region::Everywhere).unwrap();
        let s = FeSpace::new(&m, &b, k).unwrap();
        (m, b, s)
    }

    #[test]
    fn rigid_motions_in_kernel() {
        for k in [1, 2] {
            let (m, _, s) = setup(k, 0.25);
            let kc = assemble_elastic_stiffness(&m, &s, &MaterialSet::standard());
            for rm in [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]] {
                let u = s.interpolate_vector(|p| [rm[0] - rm[2] * p[1], rm[1] + rm[2] * p[0]]);
                let r = kc.mul_vec(&u);
                assert!(r.iter().all(|v| v.abs() < 1e-10), "k={k}");
            }
            assert!(kc.asymmetry() <= 1e-12 * kc.max_abs());
        }
    }

    #[test]
    fn mass_total() {
        for k in [1, 2] {
            let (m, _, s) = setup(k, 0.25);
            let mm = assemble_mass(&m, &s, &Density::Constant(5.0));
            let ones = vec![1.0; 2 * s.n_nodes];
            assert!((mm.bilinear(&ones, &ones) - 20.0).abs() < 1e-10);
        }
    }

    #[test]
    fn dielectric_energy_of_linear_potential() {
        for k in [1, 2] {
            let (m, _, s) = setup(k, 0.25);
            let ke = assemble_dielectric(&m, &s, &MaterialSet::standard());
            let psi = s.interpolate(|p| p[0]);
            assert!((ke.bilinear(&psi, &psi) - 8.0).abs() < 1e-10);
            let ones = vec![1.0; s.n_nodes];
            assert!(ke.mul_vec(&ones).iter().all(|v| v.abs() < 1e-10));
        }
    }

    #[test]
    fn normal_trace_row_sum_is_perimeter() {
        for k in [1, 2] {
            let (m, b, s) = setup(k, 0.25);
            let bs = BoundarySpaces::new(&m, &b, k).unwrap();
            let ng = assemble_normal_trace(&s, &bs);
            // Extend ν piecewise: on the rectangle only corner nodes are ambiguous,
            // so test against u = (x - 2, y - 1.5) whose normal trace is known.
            let u = s.interpolate_vector(|p| [p[0] - 2.0, p[1] - 1.5]);
            let total: f64 = ng.mul_vec(&u).iter().sum();
            // ∫_Γ u·ν = ∫_Ω div u = 2·area.
            assert!((total - 4.0).abs() < 1e-12);
        }
    }
}
