//! Frequency-domain FEM/BEM coupled system.
//!
//! Unknowns are ordered `[u (2·n_nodes, component-blocked) | ψ (free nodes) |
//! λ (X_h) | φ (Y_h)]` and the matrix is
//!
//! ```text
//! [ K_C + s²M   E_c     0        sρ_f NΓᵀ ]
//! [ -E_cᵀ       K_ε     0        0        ]
//! [ 0           0       ρ_f V    ρ_f(½M - K) ]
//! [ -sρ_f NΓ    0  ρ_f(-½Mᵀ + Kᵀ)  ρ_f W  ]
//! ```
//!
//! with Dirichlet values of ψ moved to the right-hand side.

use std::io::Write;
use std::sync::OnceLock;

use faer::Mat;

use crate::bem::{eval_potentials, BoundarySpaces, CalderonBlock, PotentialEval};
use crate::error::{param, Error, Result};
use crate::fem::{assemble_normal_trace, FeSpace, FemBlock};
use crate::materials::MaterialSet;
use crate::mesh::{BoundaryMesh, Mesh, Point};
use crate::sparse::{Csr, LuPattern, SparseLu};
use crate::C64;

const ZERO: C64 = C64::new(0.0, 0.0);

/// Data of the coupled problem at one frequency (or one time step).
///
/// `alpha` holds the moments `⟨α, χ_i⟩` over `Y_h`, `beta` the `Y_h`
/// coefficients of `β`, `eta` the moments `⟨η, χ_I⟩` over `Γ_N` for every
/// FEM node, and `mu` the values of ψ at the Dirichlet nodes. `load_u` and
/// `load_psi` are extra FEM load vectors (volume forcing, traction) added to
/// the right-hand side unchanged.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryData {
    pub alpha: Vec<C64>,
    pub beta: Vec<C64>,
    pub eta: Vec<C64>,
    pub mu: Vec<C64>,
    pub load_u: Vec<C64>,
    pub load_psi: Vec<C64>,
}

/// Lengths of the `BoundaryData` fields in flattening order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DataLayout {
    pub n_y: usize,
    pub n_nodes: usize,
    pub n_dirichlet: usize,
}

impl DataLayout {
    fn sizes(&self) -> [usize; 6] {
        [self.n_y, self.n_y, self.n_nodes, self.n_dirichlet, 2 * self.n_nodes, self.n_nodes]
    }

    pub fn len(&self) -> usize {
        self.sizes().iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl BoundaryData {
    pub fn zeros(layout: DataLayout) -> Self {
        let [a, b, e, m, lu, lp] = layout.sizes();
        BoundaryData {
            alpha: vec![ZERO; a],
            beta: vec![ZERO; b],
            eta: vec![ZERO; e],
            mu: vec![ZERO; m],
            load_u: vec![ZERO; lu],
            load_psi: vec![ZERO; lp],
        }
    }

    fn fields(&self) -> [&Vec<C64>; 6] {
        [&self.alpha, &self.beta, &self.eta, &self.mu, &self.load_u, &self.load_psi]
    }

    pub fn layout(&self) -> DataLayout {
        DataLayout { n_y: self.alpha.len(), n_nodes: self.eta.len(), n_dirichlet: self.mu.len() }
    }

    /// Concatenation of all fields.
    pub fn flatten(&self) -> Vec<C64> {
        self.fields().iter().flat_map(|f| f.iter().copied()).collect()
    }

    pub fn unflatten(layout: DataLayout, flat: &[C64]) -> Result<Self> {
        if flat.len() != layout.len() {
            return Err(param(format!("data vector has length {}, expected {}", flat.len(), layout.len())));
        }
        let mut parts = Vec::with_capacity(6);
        let mut off = 0;
        for n in layout.sizes() {
            parts.push(flat[off..off + n].to_vec());
            off += n;
        }
        let mut it = parts.into_iter();
        let mut next = || it.next().unwrap();
        Ok(BoundaryData { alpha: next(), beta: next(), eta: next(), mu: next(), load_u: next(), load_psi: next() })
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: C64, other: &BoundaryData, b: C64) -> Self {
        let f = |x: &[C64], y: &[C64]| x.iter().zip(y).map(|(p, q)| a * p + b * q).collect();
        BoundaryData {
            alpha: f(&self.alpha, &other.alpha),
            beta: f(&self.beta, &other.beta),
            eta: f(&self.eta, &other.eta),
            mu: f(&self.mu, &other.mu),
            load_u: f(&self.load_u, &other.load_u),
            load_psi: f(&self.load_psi, &other.load_psi),
        }
    }
}

/// Which direct method to use for a frequency solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Deserialize, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverKind {
    /// One sparse LU of the whole system (the boundary block stored densely
    /// inside it).
    #[default]
    Monolithic,
    /// Eliminate the FEM unknowns, solve the dense boundary system.
    Schur,
}

/// Coefficient vectors of a frequency solve.
#[derive(Debug, Clone)]
pub struct Solution {
    /// Displacement, component-blocked over all FEM nodes.
    pub u: Vec<C64>,
    /// Potential at all FEM nodes, Dirichlet values included.
    pub psi: Vec<C64>,
    pub lambda: Vec<C64>,
    pub phi: Vec<C64>,
    /// `‖A z - b‖ / ‖b‖` of the reduced system (0 for zero data).
    pub residual: f64,
}

impl Solution {
    /// Writes `dof_kind index re im` lines.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "dof_kind,index,re,im")?;
        let nn = self.psi.len();
        for (kind, vals) in [
            ("ux", &self.u[..nn]),
            ("uy", &self.u[nn..]),
            ("psi", &self.psi[..]),
            ("lambda", &self.lambda[..]),
            ("phi", &self.phi[..]),
        ] {
            for (i, v) in vals.iter().enumerate() {
                writeln!(w, "{kind},{i},{:?},{:?}", v.re, v.im)?;
            }
        }
        Ok(())
    }
}

/// Everything about the coupled discretization that does not depend on `s`.
#[derive(Debug)]
pub struct CoupledProblem {
    pub mesh: Mesh,
    pub boundary: BoundaryMesh,
    pub materials: MaterialSet,
    pub space: FeSpace,
    pub bs: BoundarySpaces,
    pub fem: FemBlock,
    /// `Y_h × (displacement dofs)`.
    pub n_gamma: Csr,
    free_psi: Vec<usize>,
    /// Position of each FEM node among the free ψ unknowns.
    psi_pos: Vec<Option<usize>>,
    e_dir: Csr,
    k_eps_free_dir: Csr,
    fem_pattern: OnceLock<LuPattern>,
    full_pattern: OnceLock<LuPattern>,
}

impl CoupledProblem {
    pub fn new(mesh: Mesh, boundary: BoundaryMesh, materials: MaterialSet, degree: usize) -> Result<Self> {
        materials.validate()?;
        let space = FeSpace::new(&mesh, &boundary, degree)?;
        let bs = BoundarySpaces::new(&mesh, &boundary, degree)?;
        let fem = FemBlock::assemble(&mesh, &space, &materials);
        let n_gamma = assemble_normal_trace(&space, &bs);
        let free_psi = space.free_nodes();
        let mut psi_pos = vec![None; space.n_nodes];
        for (i, &n) in free_psi.iter().enumerate() {
            psi_pos[n] = Some(i);
        }
        let nu: Vec<usize> = (0..2 * space.n_nodes).collect();
        let e_dir = fem.e_c.submatrix(&nu, &space.dirichlet_nodes);
        let k_eps_free_dir = fem.k_eps.submatrix(&free_psi, &space.dirichlet_nodes);
        Ok(CoupledProblem {
            mesh,
            boundary,
            materials,
            space,
            bs,
            fem,
            n_gamma,
            free_psi,
            psi_pos,
            e_dir,
            k_eps_free_dir,
            fem_pattern: OnceLock::new(),
            full_pattern: OnceLock::new(),
        })
    }

    pub fn n_u(&self) -> usize {
        2 * self.space.n_nodes
    }

    pub fn n_psi_free(&self) -> usize {
        self.free_psi.len()
    }

    pub fn free_psi(&self) -> &[usize] {
        &self.free_psi
    }

    /// Size of the FEM part after Dirichlet elimination.
    pub fn n_fem(&self) -> usize {
        self.n_u() + self.n_psi_free()
    }

    pub fn n_bem(&self) -> usize {
        self.bs.n_x + self.bs.n_y
    }

    /// Total number of unknowns.
    pub fn dim(&self) -> usize {
        self.n_fem() + self.n_bem()
    }

    pub fn data_layout(&self) -> DataLayout {
        DataLayout { n_y: self.bs.n_y, n_nodes: self.space.n_nodes, n_dirichlet: self.space.dirichlet_nodes.len() }
    }

    /// System at `Re s > 0`.
    pub fn build(&self, s: C64) -> Result<FrequencySystem<'_>> {
        let kappa = crate::bem::wavenumber(s, self.materials.c_sound)?;
        Ok(self.build_kappa(s, kappa))
    }

    /// System for `Re s ≥ 0`, `s ≠ 0`. The imaginary axis lies outside the
    /// theory but the discrete system is used there by the frequency-domain
    /// experiments.
    pub fn build_on_axis(&self, s: C64) -> Result<FrequencySystem<'_>> {
        if !(s.re >= 0.0) || s.norm() == 0.0 {
            return Err(param(format!("need Re s >= 0 and s != 0, got {s}")));
        }
        Ok(self.build_kappa(s, s / self.materials.c_sound))
    }

    fn build_kappa(&self, s: C64, kappa: C64) -> FrequencySystem<'_> {
        FrequencySystem { problem: self, s, bem: CalderonBlock::assemble_kappa(kappa, &self.bs) }
    }

    /// Structural entries of the FEM block, in a fixed order shared with
    /// `fem_values`.
    fn fem_indices(&self) -> Vec<(usize, usize)> {
        let nu = self.n_u();
        let mut idx: Vec<(usize, usize)> = self.fem.k_c.iter().map(|(r, c, _)| (r, c)).collect();
        idx.extend(self.fem.m.iter().map(|(r, c, _)| (r, c)));
        for (r, c, _) in self.fem.e_c.iter() {
            if let Some(j) = self.psi_pos[c] {
                idx.push((r, nu + j));
                idx.push((nu + j, r));
            }
        }
        for (r, c, _) in self.fem.k_eps.iter() {
            if let (Some(i), Some(j)) = (self.psi_pos[r], self.psi_pos[c]) {
                idx.push((nu + i, nu + j));
            }
        }
        idx
    }

    fn fem_values(&self, s: C64) -> Vec<C64> {
        let s2 = s * s;
        let mut vals: Vec<C64> = self.fem.k_c.iter().map(|(_, _, v)| C64::new(v, 0.0)).collect();
        vals.extend(self.fem.m.iter().map(|(_, _, v)| s2 * v));
        for (_, c, v) in self.fem.e_c.iter() {
            if self.psi_pos[c].is_some() {
                vals.push(C64::new(v, 0.0));
                vals.push(C64::new(-v, 0.0));
            }
        }
        for (r, c, v) in self.fem.k_eps.iter() {
            if self.psi_pos[r].is_some() && self.psi_pos[c].is_some() {
                vals.push(C64::new(v, 0.0));
            }
        }
        vals
    }

    fn fem_pattern(&self) -> Result<&LuPattern> {
        if let Some(p) = self.fem_pattern.get() {
            return Ok(p);
        }
        let p = LuPattern::new(self.n_fem(), &self.fem_indices())?;
        Ok(self.fem_pattern.get_or_init(|| p))
    }

    fn full_indices(&self) -> Vec<(usize, usize)> {
        let nf = self.n_fem();
        let nx = self.bs.n_x;
        let mut idx = self.fem_indices();
        for (i, j, _) in self.n_gamma.iter() {
            idx.push((j, nf + nx + i));
            idx.push((nf + nx + i, j));
        }
        let nb = self.n_bem();
        for i in 0..nb {
            for j in 0..nb {
                idx.push((nf + i, nf + j));
            }
        }
        idx
    }

    fn full_pattern(&self) -> Result<&LuPattern> {
        if let Some(p) = self.full_pattern.get() {
            return Ok(p);
        }
        let p = LuPattern::new(self.dim(), &self.full_indices())?;
        Ok(self.full_pattern.get_or_init(|| p))
    }

    /// Re-inserts Dirichlet values into a free-node ψ vector.
    pub fn expand_psi(&self, free: &[C64], mu: &[C64]) -> Vec<C64> {
        let mut psi = vec![ZERO; self.space.n_nodes];
        for (&n, &v) in self.free_psi.iter().zip(free) {
            psi[n] = v;
        }
        for (&n, &v) in self.space.dirichlet_nodes.iter().zip(mu) {
            psi[n] = v;
        }
        psi
    }
}

/// The coupled system at one value of `s`.
#[derive(Debug)]
pub struct FrequencySystem<'a> {
    pub problem: &'a CoupledProblem,
    pub s: C64,
    pub bem: CalderonBlock,
}

impl FrequencySystem<'_> {
    pub fn dim(&self) -> usize {
        self.problem.dim()
    }

    fn check(&self, data: &BoundaryData) -> Result<()> {
        if data.layout() != self.problem.data_layout()
            || data.load_u.len() != self.problem.n_u()
            || data.beta.len() != self.problem.bs.n_y
            || data.load_psi.len() != self.problem.space.n_nodes
        {
            return Err(param("boundary data sizes do not match the discretization"));
        }
        Ok(())
    }

    /// Right-hand side of the reduced system.
    pub fn rhs(&self, data: &BoundaryData) -> Result<Vec<C64>> {
        self.check(data)?;
        let p = self.problem;
        let rho_f = p.materials.rho_fluid;
        let s = self.s;
        let mut b = vec![ZERO; p.dim()];
        let nb = p.n_gamma.transpose().mul_cvec(&data.beta);
        let e_mu = p.e_dir.mul_cvec(&data.mu);
        for j in 0..p.n_u() {
            b[j] = -s * rho_f * nb[j] + data.load_u[j] - e_mu[j];
        }
        let k_mu = p.k_eps_free_dir.mul_cvec(&data.mu);
        let nu = p.n_u();
        for (i, &n) in p.free_psi.iter().enumerate() {
            b[nu + i] = -data.eta[n] + data.load_psi[n] - k_mu[i];
        }
        let off = p.n_fem() + p.bs.n_x;
        for (i, a) in data.alpha.iter().enumerate() {
            b[off + i] = a * rho_f;
        }
        Ok(b)
    }

    /// Boundary operator block `ρ_f 𝔻` as a dense matrix.
    fn bem_matrix(&self) -> Mat<C64> {
        let rho_f = self.problem.materials.rho_fluid;
        let mut d = self.bem.operator_matrix();
        for j in 0..d.ncols() {
            for i in 0..d.nrows() {
                d[(i, j)] *= rho_f;
            }
        }
        d
    }

    /// Matrix-vector product with the reduced system matrix.
    pub fn apply(&self, z: &[C64]) -> Vec<C64> {
        let p = self.problem;
        let (nu, nf, nx) = (p.n_u(), p.n_fem(), p.bs.n_x);
        let rho_f = p.materials.rho_fluid;
        let s = self.s;
        let u = &z[..nu];
        let mut psi_full = vec![ZERO; p.space.n_nodes];
        for (i, &n) in p.free_psi.iter().enumerate() {
            psi_full[n] = z[nu + i];
        }
        let phi = &z[nf + nx..];
        let mut out = vec![ZERO; p.dim()];
        let ku = p.fem.k_c.mul_cvec(u);
        let mu = p.fem.m.mul_cvec(u);
        let ep = p.fem.e_c.mul_cvec(&psi_full);
        let ngt = p.n_gamma.transpose().mul_cvec(phi);
        for j in 0..nu {
            out[j] = ku[j] + s * s * mu[j] + ep[j] + s * rho_f * ngt[j];
        }
        let etu = p.fem.e_c.transpose().mul_cvec(u);
        let kp = p.fem.k_eps.mul_cvec(&psi_full);
        for (i, &n) in p.free_psi.iter().enumerate() {
            out[nu + i] = -etu[n] + kp[n];
        }
        let d = self.bem_matrix();
        let zb = &z[nf..];
        for i in 0..d.nrows() {
            out[nf + i] = (0..d.ncols()).map(|j| d[(i, j)] * zb[j]).sum();
        }
        let ngu = p.n_gamma.mul_cvec(u);
        for (i, v) in ngu.iter().enumerate() {
            out[nf + nx + i] -= s * rho_f * v;
        }
        out
    }

    fn residual(&self, z: &[C64], b: &[C64]) -> f64 {
        let bn = norm(b);
        if bn == 0.0 {
            return norm(z);
        }
        let az = self.apply(z);
        let rn: f64 = az.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt();
        rn / bn
    }

    fn finish(&self, z: Vec<C64>, data: &BoundaryData, residual: f64) -> Solution {
        let p = self.problem;
        let (nu, nf, nx) = (p.n_u(), p.n_fem(), p.bs.n_x);
        Solution {
            u: z[..nu].to_vec(),
            psi: p.expand_psi(&z[nu..nf], &data.mu),
            lambda: z[nf..nf + nx].to_vec(),
            phi: z[nf + nx..].to_vec(),
            residual,
        }
    }

    pub fn solve_with(&self, data: &BoundaryData, kind: SolverKind) -> Result<Solution> {
        match kind {
            SolverKind::Monolithic => self.solve(data),
            SolverKind::Schur => self.schur_solve(data),
        }
    }

    /// Direct sparse LU of the whole system, with one refinement step.
    pub fn solve(&self, data: &BoundaryData) -> Result<Solution> {
        let b = self.rhs(data)?;
        let p = self.problem;
        let pat = p.full_pattern()?;
        let mut vals = p.fem_values(self.s);
        let rho_f = p.materials.rho_fluid;
        for (_, _, v) in p.n_gamma.iter() {
            vals.push(self.s * rho_f * v);
            vals.push(-self.s * rho_f * v);
        }
        let d = self.bem_matrix();
        for i in 0..d.nrows() {
            for j in 0..d.ncols() {
                vals.push(d[(i, j)]);
            }
        }
        let lu = pat.factor(&vals, self.s)?;
        let mut z = lu.solve(&b);
        self.refine(&mut z, &b, |r| Ok(lu.solve(r)))?;
        let res = self.residual(&z, &b);
        self.accept(z, data, res)
    }

    fn refine(&self, z: &mut [C64], b: &[C64], solve: impl Fn(&[C64]) -> Result<Vec<C64>>) -> Result<()> {
        let az = self.apply(z);
        let r: Vec<C64> = b.iter().zip(&az).map(|(x, y)| x - y).collect();
        if norm(&r) <= 1e-13 * norm(b) {
            return Ok(());
        }
        let dz = solve(&r)?;
        for (a, d) in z.iter_mut().zip(dz) {
            *a += d;
        }
        Ok(())
    }

    fn accept(&self, z: Vec<C64>, data: &BoundaryData, res: f64) -> Result<Solution> {
        if !res.is_finite() || res > 1e-6 {
            return Err(Error::Solver { s: self.s, reason: format!("relative residual {res:e}") });
        }
        Ok(self.finish(z, data, res))
    }

    /// Factorizes the FEM block alone.
    pub fn factor_fem(&self) -> Result<SparseLu> {
        let p = self.problem;
        p.fem_pattern()?.factor(&p.fem_values(self.s), self.s)
    }

    /// Eliminates the FEM unknowns and solves the dense boundary system.
    pub fn schur_solve(&self, data: &BoundaryData) -> Result<Solution> {
        let b = self.rhs(data)?;
        let lu = self.factor_fem()?;
        let schur = SchurFactors::new(self, lu)?;
        let mut z = schur.solve(&b)?;
        self.refine(&mut z, &b, |r| schur.solve(r))?;
        let res = self.residual(&z, &b);
        self.accept(z, data, res)
    }

    /// Exterior field `v = D(s/c)φ - S(s/c)λ` at the given points.
    pub fn exterior_field(&self, sol: &Solution, points: &[Point]) -> PotentialEval {
        eval_potentials(self.bem.kappa, &self.problem.bs, Some(&sol.lambda), Some(&sol.phi), points)
    }
}

/// Factorized Schur complement `ρ_f𝔻 + s²ρ_f² NΓ A⁻¹ NΓᵀ`.
struct SchurFactors<'s, 'a> {
    sys: &'s FrequencySystem<'a>,
    fem: SparseLu,
    lu: faer::linalg::solvers::PartialPivLu<C64>,
}

/// Columns of `NΓᵀ` handled per block of FEM solves.
const SCHUR_BLOCK: usize = 48;

impl<'s, 'a> SchurFactors<'s, 'a> {
    fn new(sys: &'s FrequencySystem<'a>, fem: SparseLu) -> Result<Self> {
        let p = sys.problem;
        let (nf, nx, ny) = (p.n_fem(), p.bs.n_x, p.bs.n_y);
        let rho_f = p.materials.rho_fluid;
        let scale = sys.s * sys.s * rho_f * rho_f;
        let mut d = sys.bem_matrix();
        let mut start = 0;
        while start < ny {
            let cols = SCHUR_BLOCK.min(ny - start);
            let mut x = Mat::<C64>::zeros(nf, cols);
            for j in 0..cols {
                for (r, v) in p.n_gamma.row(start + j) {
                    x[(r, j)] = C64::new(v, 0.0);
                }
            }
            fem.solve_in_place(x.as_mut());
            for i in 0..ny {
                for (r, v) in p.n_gamma.row(i) {
                    for j in 0..cols {
                        d[(nx + i, nx + start + j)] += scale * v * x[(r, j)];
                    }
                }
            }
            start += cols;
        }
        let lu = d.partial_piv_lu();
        Ok(SchurFactors { sys, fem, lu })
    }

    fn solve(&self, b: &[C64]) -> Result<Vec<C64>> {
        use faer::linalg::solvers::Solve;
        let p = self.sys.problem;
        let (nf, nx) = (p.n_fem(), p.bs.n_x);
        let s = self.sys.s;
        let rho_f = p.materials.rho_fluid;
        let af = self.fem.solve(&b[..nf]);
        let ng = p.n_gamma.mul_cvec(&af[..p.n_u()]);
        let mut rb = Mat::<C64>::from_fn(p.n_bem(), 1, |i, _| b[nf + i]);
        for (i, v) in ng.iter().enumerate() {
            rb[(nx + i, 0)] += s * rho_f * v;
        }
        self.lu.solve_in_place(rb.as_mut());
        let zb: Vec<C64> = (0..p.n_bem()).map(|i| rb[(i, 0)]).collect();
        let ngt = p.n_gamma.transpose().mul_cvec(&zb[nx..]);
        let mut rf = b[..nf].to_vec();
        for (j, v) in ngt.iter().enumerate() {
            rf[j] -= s * rho_f * v;
        }
        let mut z = self.fem.solve(&rf);
        z.extend(zb);
        if z.iter().any(|v| !v.is_finite()) {
            return Err(Error::Solver { s, reason: "non-finite Schur solution".into() });
        }
        Ok(z)
    }
}

fn norm(x: &[C64]) -> f64 {
    x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}
