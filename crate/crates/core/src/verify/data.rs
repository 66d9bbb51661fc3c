//! Boundary data and forcing vectors derived from exact fields, and error
//! norms against them.

use crate::coupled::{BoundaryData, CoupledProblem, Solution};
use crate::fem::{boundary_load_scalar, boundary_load_vector, load_scalar, load_vector, FeSpace};
use crate::mesh::{Mesh, Point};
use crate::par;
use crate::quadrature::TriangleRule;
use crate::C64;

use super::fields::ExactFields;

/// Rule for forcing terms and error norms: Radon's rule on four subtriangles.
pub fn fine_rule() -> &'static TriangleRule {
    static RULE: std::sync::OnceLock<TriangleRule> = std::sync::OnceLock::new();
    RULE.get_or_init(|| TriangleRule::subdivided(TriangleRule::radon7(), 1))
}

fn dot(a: [C64; 2], n: Point) -> C64 {
    a[0] * n[0] + a[1] * n[1]
}

/// Data making `fields` the exact solution of the coupled problem:
/// `α = -u̇·ν - ∂_ν v`, `β = -v`, `η = D·ν`, `μ = ψ|_{Γ_D}`, plus the
/// traction `σν` and the forcings `f₁`, `f₂` as load vectors.
pub fn manufactured_data<F: ExactFields>(problem: &CoupledProblem, fields: &F) -> BoundaryData {
    let sp = &problem.space;
    let bs = &problem.bs;
    let alpha = bs.moments_y(|x, n| -dot(fields.u_dot(x), n) - dot(fields.grad_v(x), n));
    let beta = bs.interpolate_y(&sp.nodes, |x| -fields.v(x));
    let eta = boundary_load_scalar(sp, bs, |x, n| dot(fields.elec_displacement(x), n));
    let mu = sp.dirichlet_nodes.iter().map(|&i| fields.psi(sp.nodes[i])).collect();
    let rule = fine_rule();
    let traction = boundary_load_vector(sp, bs, |x, n| {
        let s = fields.stress(x);
        [s[0][0] * n[0] + s[0][1] * n[1], s[1][0] * n[0] + s[1][1] * n[1]]
    });
    let body = load_vector(&problem.mesh, sp, rule, |x| fields.f1(x));
    let load_u = traction.iter().zip(&body).map(|(t, b)| t - b).collect();
    let load_psi = load_scalar(&problem.mesh, sp, rule, |x| fields.f2(x));
    BoundaryData { alpha, beta, eta, mu, load_u, load_psi }
}

/// Absolute and exact-solution norms of an error.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ErrorNorm {
    pub error: f64,
    pub exact: f64,
}

impl ErrorNorm {
    /// Relative error, or the absolute one when the exact norm vanishes.
    pub fn relative(&self) -> f64 {
        if self.exact > 0.0 {
            self.error / self.exact
        } else {
            self.error
        }
    }

    pub fn is_absolute(&self) -> bool {
        self.exact == 0.0
    }
}

/// `L²` and `H¹` errors of a discrete field with `ncomp` component-blocked
/// components.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FieldErrors {
    pub l2: ErrorNorm,
    pub h1: ErrorNorm,
}

/// Quadrature error norms of the FEM function with coefficients `coef`
/// (`ncomp` blocks of `n_nodes`) against `exact`, which returns values and
/// gradients `g[c][j] = ∂_j f_c`.
pub fn error_norms<const N: usize>(
    mesh: &Mesh,
    space: &FeSpace,
    coef: &[C64],
    exact: impl Fn(Point) -> ([C64; N], [[C64; 2]; N]) + Sync,
) -> FieldErrors {
    let nn = space.n_nodes;
    let rule = fine_rule();
    let parts = par::map_indexed(mesh.num_triangles(), |t| {
        let nodes = space.local_nodes(t);
        let mut acc = [0.0f64; 4];
        for q in space.quad_points(mesh, t, rule) {
            let (f, g) = exact(q.x);
            for c in 0..N {
                let mut v = C64::new(0.0, 0.0);
                let mut dv = [C64::new(0.0, 0.0); 2];
                for (i, &n) in nodes.iter().enumerate() {
                    let a = coef[c * nn + n];
                    v += a * q.n[i];
                    dv[0] += a * q.g[i][0];
                    dv[1] += a * q.g[i][1];
                }
                acc[0] += q.w * (v - f[c]).norm_sqr();
                acc[1] += q.w * f[c].norm_sqr();
                acc[2] += q.w * ((dv[0] - g[c][0]).norm_sqr() + (dv[1] - g[c][1]).norm_sqr());
                acc[3] += q.w * (g[c][0].norm_sqr() + g[c][1].norm_sqr());
            }
        }
        acc
    });
    let mut s = [0.0; 4];
    for p in &parts {
        for k in 0..4 {
            s[k] += p[k];
        }
    }
    FieldErrors {
        l2: ErrorNorm { error: s[0].sqrt(), exact: s[1].sqrt() },
        h1: ErrorNorm { error: (s[0] + s[2]).sqrt(), exact: (s[1] + s[3]).sqrt() },
    }
}

/// Largest pointwise discrepancy relative to the largest exact value.
pub fn pointwise_error(exact: &[C64], computed: &[C64]) -> ErrorNorm {
    let error = exact.iter().zip(computed).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    let scale = exact.iter().map(|a| a.norm()).fold(0.0, f64::max);
    ErrorNorm { error, exact: scale }
}

/// Errors of one solve against exact fields.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SolutionErrors {
    pub v: ErrorNorm,
    pub u: FieldErrors,
    pub psi: FieldErrors,
}

/// Errors of `sol` (and of the exterior field `v_h` at `points`) against
/// `fields`.
pub fn solution_errors<F: ExactFields>(
    problem: &CoupledProblem,
    fields: &F,
    sol: &Solution,
    points: &[Point],
    v_h: &[C64],
) -> SolutionErrors {
    let u = error_norms::<2>(&problem.mesh, &problem.space, &sol.u, |x| (fields.u(x), fields.grad_u(x)));
    let psi = error_norms::<1>(&problem.mesh, &problem.space, &sol.psi, |x| ([fields.psi(x)], [fields.grad_psi(x)]));
    let exact: Vec<C64> = points.iter().map(|&x| fields.v(x)).collect();
    SolutionErrors { v: pointwise_error(&exact, v_h), u, psi }
}
