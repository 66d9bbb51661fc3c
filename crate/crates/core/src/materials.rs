//! Piezoelectric constitutive data in 2D Voigt form.
//!
//! Strains are stored as `(ε11, ε22, 2ε12)` (engineering shear) and stresses
//! as `(σ11, σ22, σ12)`, so that `σ:ε = σ_V·ε_V`.

use faer::{Mat, Side};
use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};

pub type Sym2 = [[f64; 2]; 2];

/// Solid mass density as a function of position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Density {
    Constant(f64),
    /// `base + amplitude·exp(-(|x - centre| / width)²)`
    GaussianBump {
        base: f64,
        amplitude: f64,
        width: f64,
        centre: [f64; 2],
    },
}

impl Density {
    pub fn at(&self, x: [f64; 2]) -> f64 {
        match *self {
            Density::Constant(r) => r,
            Density::GaussianBump { base, amplitude, width, centre } => {
                let r2 = ((x[0] - centre[0]).powi(2) + (x[1] - centre[1]).powi(2)) / (width * width);
                base + amplitude * (-r2).exp()
            }
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, Density::Constant(_))
    }

    /// Density profile `5 + 25·exp(-(10|x|)²)` of the pentagon example.
    pub fn sample_bump() -> Self {
        Density::GaussianBump { base: 5.0, amplitude: 25.0, width: 0.1, centre: [0.0, 0.0] }
    }

    /// Lower bound on the density.
    pub fn minimum(&self) -> f64 {
        match *self {
            Density::Constant(r) => r,
            Density::GaussianBump { base, amplitude, .. } => base + amplitude.min(0.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaterialSet {
    /// Elastic tensor in Voigt form.
    pub c: [[f64; 3]; 3],
    /// Piezoelectric coupling, row `k` holds `e_{k,J}` for Voigt index `J`.
    pub e: [[f64; 3]; 2],
    /// Dielectric tensor.
    pub eps: Sym2,
    pub rho_solid: Density,
    pub rho_fluid: f64,
    /// Acoustic sound speed.
    pub c_sound: f64,
}

/// Young's modulus and Poisson ratio as defined for the isotropic test
/// material: `E = 2μ(1+λ)/(2μ+λ)`, `ν = λ/(2μ+λ)`.
pub fn young_poisson(lambda: f64, mu: f64) -> (f64, f64) {
    let d = 2.0 * mu + lambda;
    (2.0 * mu * (1.0 + lambda) / d, lambda / d)
}

/// Plane-stress style elastic matrix built from `E` and `ν`.
pub fn isotropic_voigt(young: f64, poisson: f64) -> [[f64; 3]; 3] {
    let a = young / (1.0 - poisson * poisson);
    [[a, a * poisson, 0.0], [a * poisson, a, 0.0], [0.0, 0.0, young / (2.0 * (1.0 + poisson))]]
}

/// Maps a 1-based tensor index pair to its 1-based Voigt index.
pub fn voigt_index(i: usize, j: usize) -> Result<usize> {
    match (i, j) {
        (1, 1) => Ok(1),
        (2, 2) => Ok(2),
        (1, 2) | (2, 1) => Ok(3),
        _ => Err(param(format!("tensor index pair ({i}, {j}) out of range"))),
    }
}

/// Voigt strain vector of a symmetric strain tensor.
pub fn strain_voigt(eps_u: &Sym2) -> [f64; 3] {
    [eps_u[0][0], eps_u[1][1], eps_u[0][1] + eps_u[1][0]]
}

fn stress_tensor(v: [f64; 3]) -> Sym2 {
    [[v[0], v[2]], [v[2], v[1]]]
}

/// Summary produced by [`MaterialSet::validate`].
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    /// Smallest eigenvalue of the elastic matrix.
    pub c0: f64,
    /// Smallest eigenvalue of the dielectric tensor.
    pub d0: f64,
    pub c_symmetry_residual: f64,
    pub eps_symmetry_residual: f64,
    pub rho_min: f64,
}

impl MaterialSet {
    /// Isotropic material from Lamé parameters with the coupling and
    /// dielectric data of the test problems.
    pub fn from_lame(lambda: f64, mu: f64, rho: Density, c_sound: f64, rho_fluid: f64) -> Self {
        let (young, poisson) = young_poisson(lambda, mu);
        MaterialSet {
            c: isotropic_voigt(young, poisson),
            e: [[1.0, 5.0, 5.0], [5.0, 1.0, 5.0]],
            eps: [[4.0, 1.0], [1.0, 4.0]],
            rho_solid: rho,
            rho_fluid,
            c_sound,
        }
    }

    /// λ = 2, μ = 3, ρ = 5, c = 1, ρ_f = 1.
    pub fn standard() -> Self {
        Self::from_lame(2.0, 3.0, Density::Constant(5.0), 1.0, 1.0)
    }

    /// Same material with the coupling switched off.
    pub fn without_coupling(mut self) -> Self {
        self.e = [[0.0; 3]; 2];
        self
    }

    /// `σ_V = C ε_V + eᵀ ∇ψ`.
    pub fn stress_voigt(&self, eps_v: [f64; 3], grad_psi: [f64; 2]) -> [f64; 3] {
        let mut s = [0.0; 3];
        for (i, si) in s.iter_mut().enumerate() {
            *si = (0..3).map(|j| self.c[i][j] * eps_v[j]).sum::<f64>()
                + self.e[0][i] * grad_psi[0]
                + self.e[1][i] * grad_psi[1];
        }
        s
    }

    /// `D = e ε_V - ϵ ∇ψ`.
    pub fn displacement_from_voigt(&self, eps_v: [f64; 3], grad_psi: [f64; 2]) -> [f64; 2] {
        let mut d = [0.0; 2];
        for (k, dk) in d.iter_mut().enumerate() {
            *dk = (0..3).map(|j| self.e[k][j] * eps_v[j]).sum::<f64>()
                - self.eps[k][0] * grad_psi[0]
                - self.eps[k][1] * grad_psi[1];
        }
        d
    }

    pub fn stress(&self, eps_u: &Sym2, grad_psi: [f64; 2]) -> Sym2 {
        stress_tensor(self.stress_voigt(strain_voigt(eps_u), grad_psi))
    }

    pub fn elec_displacement(&self, eps_u: &Sym2, grad_psi: [f64; 2]) -> [f64; 2] {
        self.displacement_from_voigt(strain_voigt(eps_u), grad_psi)
    }

    /// Checks symmetry and positivity; returns the coercivity constants.
    pub fn validate(&self) -> Result<ValidationReport> {
        let mut c_res = 0.0f64;
        for i in 0..3 {
            for j in 0..3 {
                c_res = c_res.max((self.c[i][j] - self.c[j][i]).abs());
            }
        }
        let eps_res = (self.eps[0][1] - self.eps[1][0]).abs();
        let scale_c = self.c.iter().flatten().fold(0.0f64, |m, x| m.max(x.abs())).max(1e-300);
        let scale_e = self.eps.iter().flatten().fold(0.0f64, |m, x| m.max(x.abs())).max(1e-300);
        if c_res > 1e-12 * scale_c {
            return Err(Error::Validation(format!("elastic matrix is not symmetric (residual {c_res:e})")));
        }
        if eps_res > 1e-12 * scale_e {
            return Err(Error::Validation(format!("dielectric tensor is not symmetric (residual {eps_res:e})")));
        }
        let cm = Mat::<f64>::from_fn(3, 3, |i, j| self.c[i][j]);
        let c0 = cm
            .self_adjoint_eigenvalues(Side::Lower)
            .map_err(|e| Error::Validation(format!("eigenvalue solver failed: {e:?}")))?[0];
        let (a, b, d) = (self.eps[0][0], self.eps[0][1], self.eps[1][1]);
        let d0 = 0.5 * (a + d) - (0.25 * (a - d) * (a - d) + b * b).sqrt();
        if !(c0 > 0.0) {
            return Err(Error::Validation(format!("elastic matrix is not positive definite (c0 = {c0})")));
        }
        if !(d0 > 0.0) {
            return Err(Error::Validation(format!("dielectric tensor is not positive definite (d0 = {d0})")));
        }
        if self.e.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::Validation("coupling tensor has non-finite entries".into()));
        }
        let rho_min = self.rho_solid.minimum();
        if !(rho_min > 0.0) {
            return Err(Error::Validation(format!("solid density must be positive (min {rho_min})")));
        }
        if !(self.rho_fluid > 0.0) {
            return Err(Error::Validation("fluid density must be positive".into()));
        }
        if !(self.c_sound > 0.0) {
            return Err(Error::Validation("sound speed must be positive".into()));
        }
        Ok(ValidationReport { c0, d0, c_symmetry_residual: c_res, eps_symmetry_residual: eps_res, rho_min })
    }

    /// Longitudinal wave speed `sqrt((2μ+λ)/ρ)` for the isotropic case.
    pub fn pressure_speed(lambda: f64, mu: f64, rho: f64) -> f64 {
        ((2.0 * mu + lambda) / rho).sqrt()
    }
}

/// Density entry of a materials block: a number or a named preset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DensitySpec {
    Constant(f64),
    Preset(String),
}

impl DensitySpec {
    pub fn resolve(&self) -> Result<Density> {
        match self {
            DensitySpec::Constant(r) => Ok(Density::Constant(*r)),
            DensitySpec::Preset(name) if name == "gaussian_bump" => Ok(Density::sample_bump()),
            DensitySpec::Preset(name) => Err(Error::Config(format!("unknown density preset `{name}`"))),
        }
    }
}

/// Materials block of a run configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MaterialsConfig {
    pub lambda: f64,
    pub mu: f64,
    pub rho_solid: DensitySpec,
    /// Sound speed of the fluid.
    pub c: f64,
    pub rho_fluid: f64,
    /// Optional replacement for the elastic matrix built from `lambda`, `mu`.
    pub c_voigt: Option<[[f64; 3]; 3]>,
    pub e: Option<[[f64; 3]; 2]>,
    pub eps: Option<Sym2>,
}

impl Default for MaterialsConfig {
    fn default() -> Self {
        MaterialsConfig {
            lambda: 2.0,
            mu: 3.0,
            rho_solid: DensitySpec::Constant(5.0),
            c: 1.0,
            rho_fluid: 1.0,
            c_voigt: None,
            e: None,
            eps: None,
        }
    }
}

impl MaterialsConfig {
    /// Builds and validates the material.
    pub fn build(&self) -> Result<MaterialSet> {
        if !(self.lambda >= 0.0 && self.mu > 0.0) {
            return Err(Error::Config(format!("need lambda >= 0 and mu > 0, got {} and {}", self.lambda, self.mu)));
        }
        let mut m = MaterialSet::from_lame(self.lambda, self.mu, self.rho_solid.resolve()?, self.c, self.rho_fluid);
        if let Some(c) = self.c_voigt {
            m.c = c;
        }
        if let Some(e) = self.e {
            m.e = e;
        }
        if let Some(eps) = self.eps {
            m.eps = eps;
        }
        m.validate()?;
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_constants() {
        let (e, nu) = young_poisson(2.0, 3.0);
        assert!((e - 2.25).abs() < 1e-15 && (nu - 0.25).abs() < 1e-15);
        let m = MaterialSet::standard();
        assert!((m.c[0][0] - 2.4).abs() < 1e-14);
        assert!((m.c[1][1] - 2.4).abs() < 1e-14);
        assert!((m.c[2][2] - 0.9).abs() < 1e-14);
        assert!((m.c[0][1] - 0.6).abs() < 1e-14);
        assert_eq!(m.c[0][2], 0.0);
        let r = m.validate().unwrap();
        assert!((r.d0 - 3.0).abs() < 1e-14);
    }

    #[test]
    fn voigt_indices() {
        assert_eq!(voigt_index(1, 1).unwrap(), 1);
        assert_eq!(voigt_index(2, 2).unwrap(), 2);
        assert_eq!(voigt_index(1, 2).unwrap(), 3);
        assert_eq!(voigt_index(2, 1).unwrap(), 3);
        assert!(voigt_index(3, 1).is_err());
    }

    #[test]
    fn identity_strain_stress() {
        let m = MaterialSet::standard();
        let s = m.stress(&[[1.0, 0.0], [0.0, 1.0]], [0.0, 0.0]);
        assert!((s[0][0] - 3.0).abs() < 1e-14 && (s[1][1] - 3.0).abs() < 1e-14 && s[0][1] == 0.0);
        let z = m.stress(&[[0.0; 2]; 2], [0.0; 2]);
        assert_eq!(z, [[0.0; 2]; 2]);
        assert_eq!(m.elec_displacement(&[[0.0; 2]; 2], [0.0; 2]), [0.0; 2]);
    }

    #[test]
    fn validation_failures() {
        let mut m = MaterialSet::standard();
        m.eps = [[4.0, 10.0], [10.0, 4.0]];
        assert!(matches!(m.validate(), Err(Error::Validation(_))));
        let mut m = MaterialSet::standard();
        m.c[0][1] = 0.7;
        assert!(matches!(m.validate(), Err(Error::Validation(_))));
    }

    #[test]
    fn bump_density() {
        let d = Density::sample_bump();
        assert!((d.at([0.0, 0.0]) - 30.0).abs() < 1e-14);
        assert!((d.at([0.1, 0.0]) - (5.0 + 25.0 * (-1f64).exp())).abs() < 1e-13);
    }
}
