//! Convolution quadrature on a uniform grid `tₙ = nκ`, `n = 0..=N`, by the
//! scaled discrete Fourier method: all `N + 1` frequencies at once.

use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par;
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeKind {
    Bdf2,
    #[serde(alias = "trapezoidal")]
    Tr,
}

impl std::fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SchemeKind::Bdf2 => "BDF2",
            SchemeKind::Tr => "TR",
        })
    }
}

/// Characteristic function `δ(ζ)` of the multistep method.
pub fn symbol(kind: SchemeKind, z: C64) -> Result<C64> {
    match kind {
        SchemeKind::Bdf2 => Ok(1.5 - 2.0 * z + 0.5 * z * z),
        SchemeKind::Tr => {
            if (z + 1.0).norm() < 1e-300 {
                return Err(Error::Configuration("trapezoidal symbol has a pole at ζ = -1".into()));
            }
            Ok(2.0 * (1.0 - z) / (1.0 + z))
        }
    }
}

/// Default contour accuracy `ε` in `R = ε^{1/(2N+2)}`.
pub const DEFAULT_EPS: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CqScheme {
    pub kind: SchemeKind,
    /// Time step.
    pub kappa: f64,
    /// Number of steps; the grid has `N + 1` points.
    pub n_steps: usize,
    /// Contour radius.
    pub radius: f64,
}

impl CqScheme {
    pub fn new(kind: SchemeKind, kappa: f64, n_steps: usize) -> Result<Self> {
        if !(kappa > 0.0 && kappa.is_finite()) {
            return Err(Error::Configuration(format!("time step must be positive, got {kappa}")));
        }
        if n_steps == 0 {
            return Err(Error::Configuration("at least one time step is required".into()));
        }
        CqScheme { kind, kappa, n_steps, radius: 0.5 }.with_eps(DEFAULT_EPS)
    }

    /// Scheme with `N = round(T/κ)` steps.
    pub fn with_final_time(kind: SchemeKind, kappa: f64, t_final: f64) -> Result<Self> {
        let n = (t_final / kappa).round();
        if !(n >= 1.0) || ((n * kappa - t_final).abs() > 1e-9 * t_final.max(1.0)) {
            return Err(Error::Configuration(format!("final time {t_final} is not a multiple of the step {kappa}")));
        }
        Self::new(kind, kappa, n as usize)
    }

    pub fn with_radius(mut self, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius < 1.0) {
            return Err(Error::Configuration(format!("contour radius must lie in (0, 1), got {radius}")));
        }
        self.radius = radius;
        Ok(self)
    }

    /// Radius `eps^(1/(2N+2))`.
    pub fn with_eps(self, eps: f64) -> Result<Self> {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::Configuration(format!("contour tolerance must lie in (0, 1), got {eps}")));
        }
        let r = eps.powf(1.0 / (2.0 * self.n_steps as f64 + 2.0));
        self.with_radius(r)
    }

    pub fn len(&self) -> usize {
        self.n_steps + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn final_time(&self) -> f64 {
        self.n_steps as f64 * self.kappa
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.len()).map(|n| n as f64 * self.kappa).collect()
    }

    /// `s_l = δ(R ζ_l)/κ` with `ζ_l = e^{-2πil/(N+1)}`.
    pub fn frequencies(&self) -> Result<Vec<C64>> {
        let m = self.len() as f64;
        (0..self.len())
            .map(|l| {
                let z = C64::from_polar(self.radius, -2.0 * std::f64::consts::PI * l as f64 / m);
                let s = symbol(self.kind, z)? / self.kappa;
                if !(s.re > 0.0) {
                    return Err(Error::Configuration(format!("contour frequency {s} is not in the right half plane")));
                }
                Ok(s)
            })
            .collect()
    }
}

/// Evaluates the discrete convolution `F(∂_t^κ) g` for real samples
/// `g[n]` (all of one length). `transfer(s, ĝ)` applies `F(s)` and must
/// return vectors of one fixed length; it must satisfy
/// `F(s̄) x̄ = conj(F(s) x)`, which is used to solve only half the
/// frequencies unless `all_frequencies` is set.
pub fn convolve<F>(scheme: &CqScheme, signal: &[Vec<f64>], transfer: F, all_frequencies: bool) -> Result<Vec<Vec<f64>>>
where
    F: Fn(C64, &[C64]) -> Result<Vec<C64>> + Sync + Send,
{
    let m = scheme.len();
    if signal.len() != m {
        return Err(Error::Configuration(format!("expected {m} samples, got {}", signal.len())));
    }
    let dim = signal[0].len();
    if signal.iter().any(|g| g.len() != dim) {
        return Err(Error::Configuration("samples differ in length".into()));
    }
    let freqs = scheme.frequencies()?;
    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(m);
    let inv = planner.plan_fft_inverse(m);
    let rpow: Vec<f64> = (0..m).map(|n| scheme.radius.powi(n as i32)).collect();

    // Transform each component; hat[l][j].
    let mut hat = vec![vec![C64::new(0.0, 0.0); dim]; m];
    let mut buf = vec![C64::new(0.0, 0.0); m];
    for j in 0..dim {
        for n in 0..m {
            buf[n] = C64::new(rpow[n] * signal[n][j], 0.0);
        }
        fwd.process(&mut buf);
        for l in 0..m {
            hat[l][j] = buf[l];
        }
    }

    let count = if all_frequencies { m } else { m / 2 + 1 };
    let solved = par::map_indexed(count, |l| transfer(freqs[l], &hat[l]));
    let mut out_hat: Vec<Vec<C64>> = Vec::with_capacity(m);
    for r in solved {
        out_hat.push(r?);
    }
    let odim = out_hat[0].len();
    if out_hat.iter().any(|y| y.len() != odim) {
        return Err(Error::Configuration("transfer returned vectors of different lengths".into()));
    }
    for l in count..m {
        let mirror: Vec<C64> = out_hat[m - l].iter().map(|v| v.conj()).collect();
        out_hat.push(mirror);
    }

    let mut out = vec![vec![0.0; odim]; m];
    for j in 0..odim {
        for l in 0..m {
            buf[l] = out_hat[l][j];
        }
        inv.process(&mut buf);
        for n in 0..m {
            out[n][j] = buf[n].re / (m as f64 * rpow[n]);
        }
    }
    Ok(out)
}

/// Discrete convolution of a scalar transfer function with a scalar signal.
pub fn convolve_scalar(scheme: &CqScheme, signal: &[f64], f: impl Fn(C64) -> C64 + Sync + Send) -> Result<Vec<f64>> {
    let sig: Vec<Vec<f64>> = signal.iter().map(|&g| vec![g]).collect();
    let out = convolve(scheme, &sig, |s, x| Ok(vec![f(s) * x[0]]), false)?;
    Ok(out.into_iter().map(|v| v[0]).collect())
}

/// Solves the convolution equation `A(∂_t^κ) x = g`, where `solve(s, ĝ)`
/// returns `A(s)⁻¹ĝ`. Failures report the offending frequency.
pub fn solve<F>(scheme: &CqScheme, data: &[Vec<f64>], solve: F) -> Result<Vec<Vec<f64>>>
where
    F: Fn(C64, &[C64]) -> Result<Vec<C64>> + Sync + Send,
{
    convolve(scheme, data, solve, false)
}
