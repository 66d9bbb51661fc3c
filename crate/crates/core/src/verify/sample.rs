//! Scattering of an acoustic pulse by a pentagonal piezoelectric body.

use std::f64::consts::PI;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::coupled::{BoundaryData, CoupledProblem, SolverKind};
use crate::cq::{CqScheme, SchemeKind, DEFAULT_EPS};
use crate::error::Result;
use crate::fem::FemBlock;
use crate::materials::{DensitySpec, MaterialsConfig};
use crate::mesh::{generate_polygon_mesh, BoundaryMesh, Point, Region};
use crate::C64;

/// Incident plane pulse `A χ_[0,w](ω s̃) sin(ω s̃)` with
/// `s̃ = t - delay - x·d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Pulse {
    pub amplitude: f64,
    pub omega: f64,
    pub width: f64,
    /// Unnormalized direction.
    pub direction: Point,
    pub delay: f64,
}

impl Default for Pulse {
    fn default() -> Self {
        Pulse { amplitude: 3.0, omega: 88.0, width: 0.3, direction: [1.0, 5.0], delay: 0.55 }
    }
}

impl Pulse {
    fn dir(&self) -> Point {
        let n = self.direction[0].hypot(self.direction[1]);
        [self.direction[0] / n, self.direction[1] / n]
    }

    /// Value and derivative of the profile at `σ = ω s̃`.
    fn profile(&self, st: f64) -> (f64, f64) {
        let a = self.omega * st;
        if !(0.0..=self.width).contains(&a) {
            return (0.0, 0.0);
        }
        (self.amplitude * a.sin(), self.amplitude * self.omega * a.cos())
    }

    pub fn value(&self, x: Point, t: f64) -> f64 {
        let d = self.dir();
        self.profile(t - self.delay - (x[0] * d[0] + x[1] * d[1])).0
    }

    pub fn gradient(&self, x: Point, t: f64) -> Point {
        let d = self.dir();
        let g = -self.profile(t - self.delay - (x[0] * d[0] + x[1] * d[1])).1;
        [g * d[0], g * d[1]]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SampleConfig {
    /// Circumradius of the regular pentagon centred at the origin.
    pub radius: f64,
    /// Counterclockwise polygon replacing the pentagon.
    pub vertices: Option<Vec<Point>>,
    /// Part of Γ where ψ is grounded.
    pub dirichlet: Region,
    pub materials: MaterialsConfig,
    pub h: f64,
    pub degree: usize,
    pub scheme: SchemeKind,
    pub kappa: f64,
    pub t_final: f64,
    /// Contour radius is `cq_eps^(1/(2N+2))`.
    pub cq_eps: f64,
    pub snapshots: Vec<f64>,
    /// Sampling box `[min, max]` of the exterior field.
    pub grid_min: Point,
    pub grid_max: Point,
    pub grid_n: usize,
    pub pulse: Pulse,
    pub solver: SolverKind,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig {
            radius: 0.5,
            vertices: None,
            dirichlet: Region::Everywhere,
            materials: MaterialsConfig { rho_solid: DensitySpec::Preset("gaussian_bump".into()), ..Default::default() },
            h: 0.1,
            degree: 2,
            scheme: SchemeKind::Tr,
            kappa: 0.005,
            t_final: 1.75,
            cq_eps: DEFAULT_EPS,
            snapshots: (1..=10).map(|i| 0.175 * i as f64).collect(),
            grid_min: [-1.5, -1.5],
            grid_max: [1.5, 1.5],
            grid_n: 41,
            pulse: Pulse::default(),
            solver: SolverKind::Schur,
        }
    }
}

/// Regular pentagon with a vertex on the positive `y` axis.
pub fn pentagon(radius: f64) -> Vec<Point> {
    (0..5)
        .map(|k| {
            let a = PI / 2.0 + 2.0 * PI * k as f64 / 5.0;
            [radius * a.cos(), radius * a.sin()]
        })
        .collect()
}

/// Even-odd rule; points on the boundary may go either way.
pub fn inside_polygon(poly: &[Point], x: Point) -> bool {
    let mut inside = false;
    for i in 0..poly.len() {
        let (a, b) = (poly[i], poly[(i + 1) % poly.len()]);
        if (a[1] > x[1]) != (b[1] > x[1]) {
            let xc = a[0] + (x[1] - a[1]) / (b[1] - a[1]) * (b[0] - a[0]);
            if x[0] < xc {
                inside = !inside;
            }
        }
    }
    inside
}

impl SampleConfig {
    pub fn polygon(&self) -> Vec<Point> {
        self.vertices.clone().unwrap_or_else(|| pentagon(self.radius))
    }

    pub fn scheme(&self) -> Result<CqScheme> {
        CqScheme::with_final_time(self.scheme, self.kappa, self.t_final)?.with_eps(self.cq_eps)
    }

    /// Exterior grid points, with those inside the body removed.
    pub fn grid(&self) -> Vec<Point> {
        let poly = self.polygon();
        let n = self.grid_n.max(2);
        let mut grid = Vec::new();
        for j in 0..n {
            for i in 0..n {
                let fx = i as f64 / (n - 1) as f64;
                let fy = j as f64 / (n - 1) as f64;
                let x = [
                    self.grid_min[0] + fx * (self.grid_max[0] - self.grid_min[0]),
                    self.grid_min[1] + fy * (self.grid_max[1] - self.grid_min[1]),
                ];
                if !inside_polygon(&poly, x) {
                    grid.push(x);
                }
            }
        }
        grid
    }
}

/// Fields at one snapshot time.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    /// `(x, y, v_inc + v)` at exterior grid points.
    pub acoustic: Vec<(Point, f64)>,
    /// `(x, y, |u|)` at FEM nodes.
    pub displacement: Vec<(Point, f64)>,
    pub potential: Vec<(Point, f64)>,
}

#[derive(Debug, Clone)]
pub struct SampleRun {
    pub snapshots: Vec<Snapshot>,
    /// Elastic plus dielectric energy `½(uᵀK_C u + ψᵀK_ε ψ + u̇ᵀM u̇)` per step.
    pub energy: Vec<(f64, f64)>,
}

/// The body: by default the pentagon with the bump density and ψ grounded
/// on all of Γ.
pub fn sample_problem(cfg: &SampleConfig) -> Result<CoupledProblem> {
    let mesh = generate_polygon_mesh(&cfg.polygon(), cfg.h)?;
    let boundary = BoundaryMesh::extract_region(&mesh, &cfg.dirichlet)?;
    CoupledProblem::new(mesh, boundary, cfg.materials.build()?, cfg.degree)
}

/// Data of the incident pulse at time `t`: `α = ∂_ν v_inc`, `β = v_inc`.
pub fn pulse_data(problem: &CoupledProblem, pulse: &Pulse, t: f64) -> BoundaryData {
    let mut d = BoundaryData::zeros(problem.data_layout());
    d.alpha = problem.bs.moments_y(|x, n| {
        let g = pulse.gradient(x, t);
        C64::new(g[0] * n[0] + g[1] * n[1], 0.0)
    });
    d.beta = problem.bs.interpolate_y(&problem.space.nodes, |x| C64::new(pulse.value(x, t), 0.0));
    d
}

fn energy(fem: &FemBlock, u: &[f64], u_prev: &[f64], psi: &[f64], kappa: f64) -> f64 {
    let q = |a: &crate::sparse::Csr, x: &[f64]| a.bilinear(x, x);
    let ud: Vec<f64> = u.iter().zip(u_prev).map(|(a, b)| (a - b) / kappa).collect();
    0.5 * (q(&fem.k_c, u) + q(&fem.k_eps, psi) + q(&fem.m, &ud))
}

pub fn run_sample_simulation(cfg: &SampleConfig) -> Result<SampleRun> {
    let problem = sample_problem(cfg)?;
    let scheme = cfg.scheme()?;
    let grid = cfg.grid();
    let times = scheme.times();
    let data: Vec<Vec<f64>> =
        times.iter().map(|&t| pulse_data(&problem, &cfg.pulse, t).flatten().iter().map(|z| z.re).collect()).collect();
    let out = super::runs::solve_time_domain(&problem, &scheme, &data, &grid, cfg.solver)?;

    let (nu, nn, nx, ny) = (problem.n_u(), problem.space.n_nodes, problem.bs.n_x, problem.bs.n_y);
    let v_off = nu + nn + nx + ny;
    let energy_series = (0..out.len())
        .map(|k| {
            let prev = if k == 0 { vec![0.0; nu] } else { out[k - 1][..nu].to_vec() };
            (times[k], energy(&problem.fem, &out[k][..nu], &prev, &out[k][nu..nu + nn], cfg.kappa))
        })
        .collect();
    let mut snapshots = Vec::new();
    for &ts in &cfg.snapshots {
        let k = ((ts / cfg.kappa).round() as usize).min(out.len() - 1);
        let row = &out[k];
        let t = times[k];
        let acoustic = grid.iter().enumerate().map(|(i, &x)| (x, row[v_off + i] + cfg.pulse.value(x, t))).collect();
        let nodes = &problem.space.nodes;
        let displacement = (0..nn).map(|i| (nodes[i], row[i].hypot(row[nn + i]))).collect();
        let potential = (0..nn).map(|i| (nodes[i], row[nu + i])).collect();
        snapshots.push(Snapshot { t, acoustic, displacement, potential });
    }
    Ok(SampleRun { snapshots, energy: energy_series })
}

fn write_points(path: &Path, pts: &[(Point, f64)]) -> Result<()> {
    let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
    for (x, v) in pts {
        writeln!(w, "{:?} {:?} {:?}", x[0], x[1], v)?;
    }
    Ok(())
}

impl SampleRun {
    /// One `x y value` file per snapshot and field, plus `energy.csv`.
    /// Returns the manifest entries `(time, field, file name)`.
    pub fn write(&self, dir: &Path) -> Result<Vec<(f64, &'static str, String)>> {
        std::fs::create_dir_all(dir)?;
        let mut entries = Vec::new();
        for s in &self.snapshots {
            for (field, pts) in
                [("acoustic", &s.acoustic), ("displacement", &s.displacement), ("potential", &s.potential)]
            {
                let name = format!("{field}_t{:.4}.txt", s.t);
                write_points(&dir.join(&name), pts)?;
                entries.push((s.t, field, name));
            }
        }
        let mut w = std::io::BufWriter::new(std::fs::File::create(dir.join("energy.csv"))?);
        writeln!(w, "time,energy")?;
        for (t, e) in &self.energy {
            writeln!(w, "{t:?},{e:?}")?;
        }
        Ok(entries)
    }
}
