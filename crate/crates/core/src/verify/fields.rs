//! Closed-form fields of the manufactured test problems.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::bem::bessel::k0_k1;
use crate::materials::{Density, MaterialSet};
use crate::mesh::Point;
use crate::quadrature::gauss;
use crate::C64;

/// Monomial coefficients of the quintic smooth step on `[0, 1]`.
const STEP: [f64; 11] = [0.0, 0.0, 0.0, 0.0, 0.0, 252.0, -1050.0, 1800.0, -1575.0, 700.0, -126.0];

/// Smooth step `𝓗` and its first two derivatives.
pub fn smooth_step(t: f64) -> [f64; 3] {
    if t <= 0.0 {
        return [0.0; 3];
    }
    if t >= 1.0 {
        return [1.0, 0.0, 0.0];
    }
    let mut out = [0.0; 3];
    for (k, &c) in STEP.iter().enumerate().skip(5) {
        let k = k as i32;
        out[0] += c * t.powi(k);
        out[1] += c * k as f64 * t.powi(k - 1);
        out[2] += c * (k * (k - 1)) as f64 * t.powi(k - 2);
    }
    out
}

/// `∫₀ᵗ 𝓗`.
pub fn smooth_step_integral(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        6.0 / 11.0 + (t - 1.0)
    } else {
        STEP.iter().enumerate().map(|(k, &c)| c * t.powi(k as i32 + 1) / (k as f64 + 1.0)).sum()
    }
}

/// The cubic potential `x³ + x³y - 3xy² - y³/3`: value, gradient, Hessian.
pub fn cubic_potential(x: Point) -> (f64, [f64; 2], [[f64; 2]; 2]) {
    let (a, b) = (x[0], x[1]);
    let v = a.powi(3) + a.powi(3) * b - 3.0 * a * b * b - b.powi(3) / 3.0;
    let g = [3.0 * a * a + 3.0 * a * a * b - 3.0 * b * b, a.powi(3) - 6.0 * a * b - b * b];
    let hxy = 3.0 * a * a - 6.0 * b;
    let h = [[6.0 * a + 6.0 * a * b, hxy], [hxy, -6.0 * a - 2.0 * b]];
    (v, g, h)
}

/// Propagation direction `(1, 1)/√2` of the elastic plane wave.
pub const PLANE_DIR: [f64; 2] = [FRAC_1_SQRT_2, FRAC_1_SQRT_2];
/// Source point of the cylindrical acoustic wave.
pub const SOURCE: [f64; 2] = [2.0, 1.5];

/// Pointwise values of an exact solution at one frequency or one instant.
pub trait ExactFields: Sync {
    fn u(&self, x: Point) -> [C64; 2];
    /// `g[i][j] = ∂_j u_i`.
    fn grad_u(&self, x: Point) -> [[C64; 2]; 2];
    /// Time derivative of `u` (`s·u` in the Laplace domain).
    fn u_dot(&self, x: Point) -> [C64; 2];
    fn psi(&self, x: Point) -> C64;
    fn grad_psi(&self, x: Point) -> [C64; 2];
    /// Body force balancing the elastic equation: `∇·σ - ρ ü`.
    fn f1(&self, x: Point) -> [C64; 2];
    /// `∇·D`.
    fn f2(&self, x: Point) -> C64;
    /// Scattered acoustic field.
    fn v(&self, x: Point) -> C64;
    fn grad_v(&self, x: Point) -> [C64; 2];
    fn materials(&self) -> &MaterialSet;

    /// `σ(u, ψ)` as `[[σ11, σ12], [σ12, σ22]]`.
    fn stress(&self, x: Point) -> [[C64; 2]; 2] {
        let m = self.materials();
        let ev = strain_voigt(self.grad_u(x));
        let gp = self.grad_psi(x);
        let mut s = [C64::new(0.0, 0.0); 3];
        for (i, si) in s.iter_mut().enumerate() {
            *si = (0..3).map(|j| ev[j] * m.c[i][j]).sum::<C64>() + gp[0] * m.e[0][i] + gp[1] * m.e[1][i];
        }
        [[s[0], s[2]], [s[2], s[1]]]
    }

    /// `D(u, ψ) = e ε_V - ϵ∇ψ`.
    fn elec_displacement(&self, x: Point) -> [C64; 2] {
        let m = self.materials();
        let ev = strain_voigt(self.grad_u(x));
        let gp = self.grad_psi(x);
        let mut d = [C64::new(0.0, 0.0); 2];
        for (k, dk) in d.iter_mut().enumerate() {
            *dk = (0..3).map(|j| ev[j] * m.e[k][j]).sum::<C64>() - gp[0] * m.eps[k][0] - gp[1] * m.eps[k][1];
        }
        d
    }
}

fn strain_voigt(g: [[C64; 2]; 2]) -> [C64; 3] {
    [g[0][0], g[1][1], g[0][1] + g[1][0]]
}

/// `∇·σ` and `∇·D` for `u = A(x)·d` with `∂_j u_i = a1 d_i d_j`,
/// `∂_jk u_i = a2 d_i d_j d_k`, and a potential with Hessian `hp`.
fn divergences(m: &MaterialSet, d: [f64; 2], a2: C64, hp: [[C64; 2]; 2]) -> ([C64; 2], C64) {
    let w = [d[0] * d[0], d[1] * d[1], 2.0 * d[0] * d[1]];
    // ∂_k σ_V
    let mut ds = [[C64::new(0.0, 0.0); 3]; 2];
    let mut div_d = C64::new(0.0, 0.0);
    for k in 0..2 {
        let dev: [C64; 3] = std::array::from_fn(|j| a2 * (d[k] * w[j]));
        for i in 0..3 {
            ds[k][i] = (0..3).map(|j| dev[j] * m.c[i][j]).sum::<C64>() + hp[k][0] * m.e[0][i] + hp[k][1] * m.e[1][i];
        }
        div_d += (0..3).map(|j| dev[j] * m.e[k][j]).sum::<C64>() - hp[k][0] * m.eps[k][0] - hp[k][1] * m.eps[k][1];
    }
    ([ds[0][0] + ds[1][2], ds[0][2] + ds[1][1]], div_d)
}

fn rho_at(rho: &Density, x: Point) -> f64 {
    rho.at(x)
}

/// Laplace-domain manufactured solution: plane wave `e^{-s c_L x·d} d`,
/// the cubic potential and `v = K₀(s r / c) / 2π` centred at [`SOURCE`].
#[derive(Debug, Clone)]
pub struct FrequencyCase {
    pub s: C64,
    pub c_l: f64,
    pub materials: MaterialSet,
}

impl FrequencyCase {
    pub fn new(s: C64, materials: MaterialSet, c_l: f64) -> Self {
        FrequencyCase { s, c_l, materials }
    }

    fn amp(&self, x: Point) -> (C64, C64) {
        let a = -self.s * self.c_l;
        let xd = x[0] * PLANE_DIR[0] + x[1] * PLANE_DIR[1];
        ((a * xd).exp(), a)
    }

    fn kappa(&self) -> C64 {
        self.s / self.materials.c_sound
    }
}

impl ExactFields for FrequencyCase {
    fn u(&self, x: Point) -> [C64; 2] {
        let (e, _) = self.amp(x);
        [e * PLANE_DIR[0], e * PLANE_DIR[1]]
    }

    fn grad_u(&self, x: Point) -> [[C64; 2]; 2] {
        let (e, a) = self.amp(x);
        let d = PLANE_DIR;
        std::array::from_fn(|i| std::array::from_fn(|j| a * e * (d[i] * d[j])))
    }

    fn u_dot(&self, x: Point) -> [C64; 2] {
        let u = self.u(x);
        [self.s * u[0], self.s * u[1]]
    }

    fn psi(&self, x: Point) -> C64 {
        C64::new(cubic_potential(x).0, 0.0)
    }

    fn grad_psi(&self, x: Point) -> [C64; 2] {
        let g = cubic_potential(x).1;
        [C64::new(g[0], 0.0), C64::new(g[1], 0.0)]
    }

    fn f1(&self, x: Point) -> [C64; 2] {
        let (e, a) = self.amp(x);
        let h = cubic_potential(x).2;
        let hp = h.map(|r| r.map(|v| C64::new(v, 0.0)));
        let (ds, _) = divergences(&self.materials, PLANE_DIR, a * a * e, hp);
        let rs2 = self.s * self.s * rho_at(&self.materials.rho_solid, x);
        let u = self.u(x);
        [ds[0] - rs2 * u[0], ds[1] - rs2 * u[1]]
    }

    fn f2(&self, x: Point) -> C64 {
        let (e, a) = self.amp(x);
        let h = cubic_potential(x).2;
        let hp = h.map(|r| r.map(|v| C64::new(v, 0.0)));
        divergences(&self.materials, PLANE_DIR, a * a * e, hp).1
    }

    fn v(&self, x: Point) -> C64 {
        let r = dist(x, SOURCE);
        k0_k1(self.kappa() * r).0 / (2.0 * PI)
    }

    fn grad_v(&self, x: Point) -> [C64; 2] {
        let r = dist(x, SOURCE);
        let k = self.kappa();
        let f = -k * k0_k1(k * r).1 / (2.0 * PI * r);
        [f * (x[0] - SOURCE[0]), f * (x[1] - SOURCE[1])]
    }

    fn materials(&self) -> &MaterialSet {
        &self.materials
    }
}

fn dist(a: Point, b: Point) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// Time signal `𝓗(t) sin(2t)` driving the cylindrical wave, and its
/// derivative.
fn wave_signal(t: f64) -> (f64, f64) {
    let h = smooth_step(t);
    ((h[0]) * (2.0 * t).sin(), h[1] * (2.0 * t).sin() + 2.0 * h[0] * (2.0 * t).cos())
}

/// Composite Gauss rule on `[a, b]` with `m` panels of 16 points.
fn integrate(a: f64, b: f64, m: usize, f: impl Fn(f64) -> f64) -> f64 {
    let g = gauss(16);
    let h = (b - a) / m as f64;
    (0..m).map(|i| g.integrate(a + i as f64 * h, a + (i + 1) as f64 * h, &f)).sum()
}

/// Causal cylindrical wave `(2/π) ∫₀^{acosh(t/ρ)} g(t - ρ cosh θ) dθ`,
/// `ρ = r/c`, and its derivative in `r`. This is the inverse Laplace
/// transform of `(2/π) K₀(s r / c) ĝ(s)`.
pub fn cylindrical_wave(r: f64, t: f64, c: f64) -> (f64, f64) {
    let rho = r / c;
    if t <= rho {
        return (0.0, 0.0);
    }
    let top = (t / rho).acosh();
    let mut cuts = vec![0.0];
    if t - 1.0 > rho {
        cuts.push(((t - 1.0) / rho).acosh());
    }
    cuts.push(top);
    let mut v = 0.0;
    let mut dv = 0.0;
    for w in cuts.windows(2) {
        v += integrate(w[0], w[1], 4, |th| wave_signal(t - rho * th.cosh()).0);
        dv -= integrate(w[0], w[1], 4, |th| th.cosh() * wave_signal(t - rho * th.cosh()).1);
    }
    (2.0 / PI * v, 2.0 / PI * dv / c)
}

/// Time-domain manufactured solution at time `t`: the travelling wave
/// `𝓗(c_L t - x·d) sin(3(c_L t - x·d)) d`, `𝓗(t)` times the cubic potential
/// and the causal cylindrical wave.
#[derive(Debug, Clone)]
pub struct TimeCase {
    pub t: f64,
    pub c_l: f64,
    pub materials: MaterialSet,
}

impl TimeCase {
    pub fn new(t: f64, materials: MaterialSet, c_l: f64) -> Self {
        TimeCase { t, c_l, materials }
    }

    /// `G(ξ) = 𝓗(ξ) sin 3ξ` and two derivatives at `ξ = c_L t - x·d`.
    fn profile(&self, x: Point) -> [f64; 3] {
        let xi = self.c_l * self.t - (x[0] * PLANE_DIR[0] + x[1] * PLANE_DIR[1]);
        let h = smooth_step(xi);
        let (s, c) = (3.0 * xi).sin_cos();
        [h[0] * s, h[1] * s + 3.0 * h[0] * c, h[2] * s + 6.0 * h[1] * c - 9.0 * h[0] * s]
    }
}

fn re(v: f64) -> C64 {
    C64::new(v, 0.0)
}

impl ExactFields for TimeCase {
    fn u(&self, x: Point) -> [C64; 2] {
        let g = self.profile(x)[0];
        [re(g * PLANE_DIR[0]), re(g * PLANE_DIR[1])]
    }

    fn grad_u(&self, x: Point) -> [[C64; 2]; 2] {
        let g1 = self.profile(x)[1];
        let d = PLANE_DIR;
        std::array::from_fn(|i| std::array::from_fn(|j| re(-g1 * d[i] * d[j])))
    }

    fn u_dot(&self, x: Point) -> [C64; 2] {
        let g1 = self.profile(x)[1] * self.c_l;
        [re(g1 * PLANE_DIR[0]), re(g1 * PLANE_DIR[1])]
    }

    fn psi(&self, x: Point) -> C64 {
        re(smooth_step(self.t)[0] * cubic_potential(x).0)
    }

    fn grad_psi(&self, x: Point) -> [C64; 2] {
        let h = smooth_step(self.t)[0];
        let g = cubic_potential(x).1;
        [re(h * g[0]), re(h * g[1])]
    }

    fn f1(&self, x: Point) -> [C64; 2] {
        let p = self.profile(x);
        let h = smooth_step(self.t)[0];
        let hp = cubic_potential(x).2.map(|r| r.map(|v| re(h * v)));
        let (ds, _) = divergences(&self.materials, PLANE_DIR, re(p[2]), hp);
        let acc = rho_at(&self.materials.rho_solid, x) * self.c_l * self.c_l * p[2];
        [ds[0] - acc * PLANE_DIR[0], ds[1] - acc * PLANE_DIR[1]]
    }

    fn f2(&self, x: Point) -> C64 {
        let p = self.profile(x);
        let h = smooth_step(self.t)[0];
        let hp = cubic_potential(x).2.map(|r| r.map(|v| re(h * v)));
        divergences(&self.materials, PLANE_DIR, re(p[2]), hp).1
    }

    fn v(&self, x: Point) -> C64 {
        re(cylindrical_wave(dist(x, SOURCE), self.t, self.materials.c_sound).0)
    }

    fn grad_v(&self, x: Point) -> [C64; 2] {
        let r = dist(x, SOURCE);
        let dv = cylindrical_wave(r, self.t, self.materials.c_sound).1;
        [re(dv * (x[0] - SOURCE[0]) / r), re(dv * (x[1] - SOURCE[1]) / r)]
    }

    fn materials(&self) -> &MaterialSet {
        &self.materials
    }
}
