//! Refinement studies on the rectangle `(1, 3) × (1, 2)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::coupled::{BoundaryData, CoupledProblem, SolverKind};
use crate::cq::{self, CqScheme, SchemeKind};
use crate::error::{Error, Result};
use crate::materials::MaterialSet;
use crate::mesh::{generate_rect_mesh, BoundaryMesh, DiagonalPattern, Point, Region};
use crate::C64;

use super::data::{manufactured_data, solution_errors, ErrorNorm, SolutionErrors};
use super::fields::{ExactFields, FrequencyCase, TimeCase};
use super::table::{ConvergenceTable, TableRow};

pub const RECT_MIN: Point = [1.0, 1.0];
pub const RECT_MAX: Point = [3.0, 2.0];
/// Box the exterior sample points are drawn from.
pub const SAMPLE_BOX: [Point; 2] = [[0.2, 0.2], [3.8, 2.8]];
pub const DEFAULT_SEED: u64 = 20;

/// Serializable choice of [`DiagonalPattern`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeshPattern {
    #[default]
    Right,
    CrissCross,
}

impl From<MeshPattern> for DiagonalPattern {
    fn from(p: MeshPattern) -> Self {
        match p {
            MeshPattern::Right => DiagonalPattern::Right,
            MeshPattern::CrissCross => DiagonalPattern::CrissCross,
        }
    }
}

/// The test rectangle with ψ prescribed on the whole boundary.
pub fn rectangle_problem(
    h: f64,
    degree: usize,
    materials: MaterialSet,
    pattern: DiagonalPattern,
) -> Result<CoupledProblem> {
    let mesh = generate_rect_mesh(RECT_MIN, RECT_MAX, h, pattern)?;
    let boundary = BoundaryMesh::extract_region(&mesh, &Region::Everywhere)?;
    CoupledProblem::new(mesh, boundary, materials, degree)
}

fn rect_distance(x: Point) -> f64 {
    let dx = (RECT_MIN[0] - x[0]).max(x[0] - RECT_MAX[0]).max(0.0);
    let dy = (RECT_MIN[1] - x[1]).max(x[1] - RECT_MAX[1]).max(0.0);
    dx.hypot(dy)
}

/// `n` reproducible points in [`SAMPLE_BOX`] at distance at least `margin`
/// from the rectangle.
pub fn sample_points(seed: u64, n: usize, margin: f64) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let x = [rng.gen_range(SAMPLE_BOX[0][0]..SAMPLE_BOX[1][0]), rng.gen_range(SAMPLE_BOX[0][1]..SAMPLE_BOX[1][1])];
        if rect_distance(x) >= margin {
            out.push(x);
        }
    }
    out
}

/// A ladder that stopped early; `table` holds the completed levels.
#[derive(Debug, thiserror::Error)]
#[error("refinement level {level} failed: {source}")]
pub struct LevelFailure {
    pub level: usize,
    pub table: ConvergenceTable,
    #[source]
    pub source: Error,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FreqStudy {
    pub degree: usize,
    /// Laplace parameter `[re, im]`.
    pub s: [f64; 2],
    pub h: Vec<f64>,
    pub seed: u64,
    pub n_points: usize,
    pub solver: SolverKind,
    pub pattern: MeshPattern,
}

impl Default for FreqStudy {
    fn default() -> Self {
        FreqStudy {
            degree: 1,
            s: [0.0, -2.5],
            h: vec![0.2, 0.1, 0.05, 0.025],
            seed: DEFAULT_SEED,
            n_points: 20,
            solver: SolverKind::Monolithic,
            pattern: MeshPattern::CrissCross,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TimeStudy {
    pub degree: usize,
    pub scheme: SchemeKind,
    pub t_final: f64,
    pub h: Vec<f64>,
    /// Time steps, one per mesh size.
    pub kappa: Vec<f64>,
    /// Contour radius is `cq_eps^(1/(2N+2))`.
    pub cq_eps: f64,
    pub seed: u64,
    pub n_points: usize,
    pub solver: SolverKind,
    pub pattern: MeshPattern,
}

impl Default for TimeStudy {
    fn default() -> Self {
        TimeStudy {
            degree: 2,
            scheme: SchemeKind::Tr,
            t_final: 1.5,
            h: vec![0.2, 0.1, 0.05, 0.025],
            kappa: vec![0.075, 0.0375, 0.01875, 0.009375],
            cq_eps: cq::DEFAULT_EPS,
            seed: DEFAULT_SEED,
            n_points: 20,
            solver: SolverKind::Monolithic,
            pattern: MeshPattern::Right,
        }
    }
}

fn margin(h: &[f64]) -> f64 {
    2.0 * h.iter().copied().fold(0.0, f64::max)
}

/// Errors of the frequency-domain manufactured solution on one mesh.
pub fn freq_level(study: &FreqStudy, h: f64, points: &[Point]) -> Result<SolutionErrors> {
    let s = C64::new(study.s[0], study.s[1]);
    let mat = MaterialSet::standard();
    let case = FrequencyCase::new(s, mat.clone(), c_l(&mat));
    let problem = rectangle_problem(h, study.degree, mat, study.pattern.into())?;
    let data = manufactured_data(&problem, &case);
    let sys = problem.build_on_axis(s)?;
    let sol = sys.solve_with(&data, study.solver)?;
    let v = sys.exterior_field(&sol, points);
    Ok(solution_errors(&problem, &case, &sol, points, &v.values))
}

/// `c_L = sqrt((2μ+λ)/ρ)` of the test material, `sqrt(8/5)`.
pub fn c_l(_mat: &MaterialSet) -> f64 {
    MaterialSet::pressure_speed(2.0, 3.0, 5.0)
}

/// Frequency-domain refinement study. `progress` sees each finished row.
pub fn run_freq_convergence(
    study: &FreqStudy,
    mut progress: impl FnMut(&TableRow),
) -> std::result::Result<ConvergenceTable, LevelFailure> {
    let points = sample_points(study.seed, study.n_points, margin(&study.h));
    let mut table = ConvergenceTable::default();
    for (level, &h) in study.h.iter().enumerate() {
        match freq_level(study, h, &points) {
            Ok(e) => {
                let row = TableRow::new(h, None, &e);
                progress(&row);
                table.push(row);
            }
            Err(source) => return Err(LevelFailure { level, table, source }),
        }
    }
    Ok(table)
}

/// Real time samples of the manufactured data on the CQ grid.
pub fn time_data(problem: &CoupledProblem, mat: &MaterialSet, times: &[f64]) -> Vec<Vec<f64>> {
    let cl = c_l(mat);
    times
        .iter()
        .map(|&t| {
            let case = TimeCase::new(t, mat.clone(), cl);
            manufactured_data(problem, &case).flatten().iter().map(|z| z.re).collect()
        })
        .collect()
}

/// Solves the coupled convolution equation for real data samples and
/// returns, per time step, `[u | ψ | λ | φ | v(points)]`.
pub fn solve_time_domain(
    problem: &CoupledProblem,
    scheme: &CqScheme,
    data: &[Vec<f64>],
    points: &[Point],
    solver: SolverKind,
) -> Result<Vec<Vec<f64>>> {
    let layout = problem.data_layout();
    cq::solve(scheme, data, |s, g| {
        let d = BoundaryData::unflatten(layout, g)?;
        let sys = problem.build(s)?;
        let sol = sys.solve_with(&d, solver)?;
        let v = sys.exterior_field(&sol, points);
        let mut out = sol.u;
        out.extend(sol.psi);
        out.extend(sol.lambda);
        out.extend(sol.phi);
        out.extend(v.values);
        Ok(out)
    })
}

/// Errors at the final time on one mesh/step pair.
pub fn time_level(study: &TimeStudy, h: f64, kappa: f64, points: &[Point]) -> Result<SolutionErrors> {
    let mat = MaterialSet::standard();
    let problem = rectangle_problem(h, study.degree, mat.clone(), study.pattern.into())?;
    let scheme = CqScheme::with_final_time(study.scheme, kappa, study.t_final)?.with_eps(study.cq_eps)?;
    let data = time_data(&problem, &mat, &scheme.times());
    let out = solve_time_domain(&problem, &scheme, &data, points, study.solver)?;
    let last = out.last().ok_or_else(|| Error::Configuration("empty time grid".into()))?;
    let c = |x: &[f64]| x.iter().map(|&v| C64::new(v, 0.0)).collect::<Vec<_>>();
    let (nu, nn, nx, ny) = (problem.n_u(), problem.space.n_nodes, problem.bs.n_x, problem.bs.n_y);
    let sol = crate::coupled::Solution {
        u: c(&last[..nu]),
        psi: c(&last[nu..nu + nn]),
        lambda: c(&last[nu + nn..nu + nn + nx]),
        phi: c(&last[nu + nn + nx..nu + nn + nx + ny]),
        residual: 0.0,
    };
    let v_h = c(&last[nu + nn + nx + ny..]);
    let case = TimeCase::new(study.t_final, mat.clone(), c_l(&mat));
    Ok(solution_errors(&problem, &case, &sol, points, &v_h))
}

/// Time-domain refinement study with simultaneous mesh and step halving.
pub fn run_time_convergence(
    study: &TimeStudy,
    mut progress: impl FnMut(&TableRow),
) -> std::result::Result<ConvergenceTable, LevelFailure> {
    let mut table = ConvergenceTable::default();
    if study.h.len() != study.kappa.len() {
        let source = Error::Config("time study needs one time step per mesh size".into());
        return Err(LevelFailure { level: 0, table, source });
    }
    let points = sample_points(study.seed, study.n_points, margin(&study.h));
    for (level, (&h, &k)) in study.h.iter().zip(&study.kappa).enumerate() {
        match time_level(study, h, k, &points) {
            Ok(e) => {
                let row = TableRow::new(h, Some(k), &e);
                progress(&row);
                table.push(row);
            }
            Err(source) => return Err(LevelFailure { level, table, source }),
        }
    }
    Ok(table)
}

/// Exact `v` of a case at the sample points, for reporting.
pub fn exact_v<F: ExactFields>(fields: &F, points: &[Point]) -> Vec<C64> {
    points.iter().map(|&x| fields.v(x)).collect()
}

/// Relative error norm helper re-exported for the acceptance checks.
pub fn relative(e: &ErrorNorm) -> f64 {
    e.relative()
}
