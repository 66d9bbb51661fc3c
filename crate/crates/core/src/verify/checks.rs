//! Property checks shared by the self test and the acceptance suite. Each
//! returns the measured quantity; thresholds live with the caller.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bem::{eval_potentials, k0_k1, BoundarySpaces};
use crate::coupled::{BoundaryData, CoupledProblem};
use crate::cq::{convolve_scalar, CqScheme, SchemeKind};
use crate::error::Result;
use crate::materials::MaterialSet;
use crate::mesh::{DiagonalPattern, Point};
use crate::C64;

use super::fields::{smooth_step, smooth_step_integral};
use super::runs::{rectangle_problem, RECT_MAX, RECT_MIN};

/// Reference values of `K0`, `K1`: `re, im, k0_re, k0_im, k1_re, k1_im`.
pub const BESSEL_FIXTURE: &str = include_str!("../../tests/fixtures/bessel_k.csv");

/// Worst relative error of `K0` over fixture points with
/// `|z| ∈ [1e-6, 100]` and `|arg z| ≤ π/3`, and the number of such points.
pub fn bessel_k0_error() -> (f64, usize) {
    let mut worst = 0.0f64;
    let mut count = 0;
    for line in BESSEL_FIXTURE.lines().skip(1) {
        let v: Vec<f64> = line.split(',').filter_map(|x| x.parse().ok()).collect();
        if v.len() != 6 {
            continue;
        }
        let z = C64::new(v[0], v[1]);
        let (r, a) = z.to_polar();
        if !(1e-6 * (1.0 - 1e-12)..=100.0 * (1.0 + 1e-12)).contains(&r) || a.abs() > PI / 3.0 + 1e-12 {
            continue;
        }
        let want = C64::new(v[2], v[3]);
        worst = worst.max((k0_k1(z).0 - want).norm() / want.norm());
        count += 1;
    }
    (worst, count)
}

/// The test rectangle's boundary split into panels no longer than `h`.
pub fn rectangle_loop(h: f64) -> Vec<Point> {
    let corners = [RECT_MIN, [RECT_MAX[0], RECT_MIN[1]], RECT_MAX, [RECT_MIN[0], RECT_MAX[1]]];
    let mut out = Vec::new();
    for i in 0..4 {
        let (a, b) = (corners[i], corners[(i + 1) % 4]);
        let n = ((b[0] - a[0]).hypot(b[1] - a[1]) / h).ceil() as usize;
        for k in 0..n {
            let t = k as f64 / n as f64;
            out.push([a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]);
        }
    }
    out
}

/// Quadratic extrapolation to `δ = 0` from samples at `δ, 2δ, 3δ`.
fn extrapolate(f: [C64; 3]) -> C64 {
    f[0] * 3.0 - f[1] * 3.0 + f[2]
}

/// Largest relative mismatch between the limits of `S(κ)λ` from both sides
/// of Γ, at the midpoints of a few panels, for a smooth density `λ`.
pub fn single_layer_jump(h: f64, kappa: C64, degree: usize) -> Result<f64> {
    let bs = BoundarySpaces::from_polygon(&rectangle_loop(h), degree)?;
    let lambda = bs.project_x(|x, _| C64::new((2.0 * x[0]).cos() + x[1] * x[1], 0.3 * x[0]));
    let delta = 1e-3 * h;
    let mut worst = 0.0f64;
    let step = (bs.panels.len() / 7).max(1);
    for p in (0..bs.panels.len()).step_by(step) {
        let pg = &bs.panels[p];
        let m = pg.midpoint();
        let side = |sign: f64| {
            let pts: Vec<Point> = (1..=3)
                .map(|k| [m[0] + sign * k as f64 * delta * pg.nu[0], m[1] + sign * k as f64 * delta * pg.nu[1]])
                .collect();
            let v = eval_potentials(kappa, &bs, Some(&lambda), None, &pts).values;
            extrapolate([v[0], v[1], v[2]])
        };
        let (outer, inner) = (side(1.0), side(-1.0));
        worst = worst.max((outer - inner).norm() / outer.norm().max(inner.norm()));
    }
    Ok(worst)
}

/// Point source centred inside the rectangle.
pub const SOURCE_INSIDE: Point = [2.2, 1.4];

/// Interior probes, away from the source.
pub const INTERIOR_PROBES: [Point; 3] = [[1.5, 1.5], [2.6, 1.25], [1.8, 1.75]];

/// Max `|Dφ - Sλ|` at [`INTERIOR_PROBES`] when `(φ, λ)` are the traces of a
/// point source inside the body, one value per mesh size.
pub fn interior_vanishing(kappa: C64, degree: usize, hs: &[f64]) -> Result<Vec<f64>> {
    let g = |x: Point| {
        let r = (x[0] - SOURCE_INSIDE[0]).hypot(x[1] - SOURCE_INSIDE[1]);
        k0_k1(kappa * r).0 / (2.0 * PI)
    };
    let dn = |x: Point, nu: Point| {
        let d = [x[0] - SOURCE_INSIDE[0], x[1] - SOURCE_INSIDE[1]];
        let r = d[0].hypot(d[1]);
        -kappa * k0_k1(kappa * r).1 / (2.0 * PI) * ((d[0] * nu[0] + d[1] * nu[1]) / r)
    };
    hs.iter()
        .map(|&h| {
            let bs = BoundarySpaces::from_polygon(&rectangle_loop(h), degree)?;
            let lambda = bs.project_x(dn);
            let phi: Vec<C64> = bs.y_points().into_iter().map(g).collect();
            let v = eval_potentials(kappa, &bs, Some(&lambda), Some(&phi), &INTERIOR_PROBES);
            Ok(v.values.iter().map(|z| z.norm()).fold(0.0, f64::max))
        })
        .collect()
}

fn random_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<C64> {
    (0..n).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()
}

/// Largest relative deviation of `Re(s̄ uᴴ(Az)_u + s ψᴴ(Az)_ψ)` from
/// `Re s · ⫼z⫼²` over `n` random pairs `(z, s)`.
pub fn coercivity_deviation(n: usize, seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let problems = [
        rectangle_problem(0.5, 1, MaterialSet::standard(), DiagonalPattern::Right)?,
        rectangle_problem(0.5, 2, MaterialSet::standard(), DiagonalPattern::Right)?,
    ];
    let mut worst = 0.0f64;
    for i in 0..n {
        let p = &problems[i % 2];
        let s = C64::new(rng.gen_range(0.05..5.0), rng.gen_range(-10.0..10.0));
        let u = random_vec(&mut rng, p.n_u());
        let mut psi = random_vec(&mut rng, p.space.n_nodes);
        for &d in &p.space.dirichlet_nodes {
            psi[d] = C64::new(0.0, 0.0);
        }
        let lhs = p.fem.weighted_form(s, &u, &psi);
        let rhs = s.re * p.fem.energy_norm_sq(s, &u, &psi);
        worst = worst.max((lhs - rhs).abs() / rhs.abs());
    }
    Ok(worst)
}

/// Observed orders of `1/s` applied to the smooth step on `[0, 3]` for
/// `κ = 0.02, 0.01, 0.005`.
pub fn cq_integration_orders(kind: SchemeKind) -> Result<Vec<f64>> {
    let mut errs = Vec::new();
    for kappa in [0.02, 0.01, 0.005] {
        let sc = CqScheme::with_final_time(kind, kappa, 3.0)?;
        let times = sc.times();
        let g: Vec<f64> = times.iter().map(|&t| smooth_step(t)[0]).collect();
        let out = convolve_scalar(&sc, &g, |s| 1.0 / s)?;
        let e = times.iter().zip(&out).map(|(&t, y)| (y - smooth_step_integral(t)).abs()).fold(0.0, f64::max);
        errs.push(e);
    }
    Ok(errs.windows(2).map(|w| (w[0] / w[1]).log2()).collect())
}

/// For `n` random `s` with `Re s ∈ [0.1, 5]`: the largest magnitude of the
/// solution for zero data, and the largest relative residual for random
/// data.
pub fn unique_solvability(problem: &CoupledProblem, n: usize, seed: u64) -> Result<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let layout = problem.data_layout();
    let (mut mag, mut res) = (0.0f64, 0.0f64);
    for _ in 0..n {
        let s = C64::new(rng.gen_range(0.1..5.0), rng.gen_range(-5.0..5.0));
        let sys = problem.build(s)?;
        let zero = sys.solve(&BoundaryData::zeros(layout))?;
        let m = [&zero.u[..], &zero.psi, &zero.lambda, &zero.phi]
            .iter()
            .flat_map(|v| v.iter())
            .fold(0.0f64, |a, z| a.max(z.norm()));
        mag = mag.max(m);
        let flat = random_vec(&mut rng, layout.len());
        let sol = sys.solve(&BoundaryData::unflatten(layout, &flat)?)?;
        res = res.max(sol.residual);
    }
    Ok((mag, res))
}
