use proptest::prelude::*;
use pzwave::materials::{
    isotropic_voigt, strain_voigt, young_poisson, Density, DensitySpec, MaterialSet, MaterialsConfig, Sym2,
};
use pzwave::Error;

fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn sym(a: f64, b: f64, c: f64) -> Sym2 {
    [[a, c], [c, b]]
}

#[test]
fn isotropic_constants() {
    let (e, nu) = young_poisson(2.0, 3.0);
    assert_eq!((e, nu), (2.25, 0.25));
    let c = isotropic_voigt(e, nu);
    let want = [[2.4, 0.6, 0.0], [0.6, 2.4, 0.0], [0.0, 0.0, 0.9]];
    for i in 0..3 {
        for j in 0..3 {
            assert!((c[i][j] - want[i][j]).abs() < 1e-14);
        }
    }
    assert_eq!(MaterialSet::standard().c, c);
}

#[test]
fn coercivity_constants() {
    let r = MaterialSet::standard().validate().unwrap();
    // eps = [[4, 1], [1, 4]] has eigenvalues 3 and 5; C has eigenvalues 0.9, 1.8, 3.
    assert!((r.d0 - 3.0).abs() < 1e-14);
    assert!((r.c0 - 0.9).abs() < 1e-12);
    assert_eq!(r.rho_min, 5.0);
    assert_eq!(r.c_symmetry_residual, 0.0);
}

#[test]
fn identity_strain_gives_isotropic_stress() {
    let m = MaterialSet::standard();
    let s = m.stress(&sym(1.0, 1.0, 0.0), [0.0, 0.0]);
    assert!((s[0][0] - 3.0).abs() < 1e-14);
    assert!((s[1][1] - 3.0).abs() < 1e-14);
    assert_eq!(s[0][1], 0.0);
    assert_eq!(s[0][1], s[1][0]);
}

#[test]
fn invalid_materials_are_rejected() {
    let mut m = MaterialSet::standard();
    m.eps = [[4.0, 10.0], [10.0, 4.0]];
    assert!(matches!(m.validate(), Err(Error::Validation(_))));
    let mut m = MaterialSet::standard();
    m.c[0][1] = 0.7;
    assert!(matches!(m.validate(), Err(Error::Validation(_))));
    let mut m = MaterialSet::standard();
    m.rho_solid = Density::Constant(0.0);
    assert!(m.validate().is_err());
    let mut m = MaterialSet::standard();
    m.e[1][2] = f64::NAN;
    assert!(m.validate().is_err());
}

#[test]
fn config_builds_and_validates() {
    let m = MaterialsConfig::default().build().unwrap();
    assert_eq!(m, MaterialSet::standard());
    let cfg = MaterialsConfig { rho_solid: DensitySpec::Preset("gaussian_bump".into()), ..Default::default() };
    assert_eq!(cfg.build().unwrap().rho_solid, Density::sample_bump());
    let cfg = MaterialsConfig { rho_solid: DensitySpec::Preset("lead".into()), ..Default::default() };
    assert!(matches!(cfg.build(), Err(Error::Config(_))));
    let cfg = MaterialsConfig { e: Some([[0.0; 3]; 2]), ..Default::default() };
    assert_eq!(cfg.build().unwrap(), MaterialSet::standard().without_coupling());
    let cfg = MaterialsConfig { eps: Some([[1.0, 2.0], [2.0, 1.0]]), ..Default::default() };
    assert!(matches!(cfg.build(), Err(Error::Validation(_))));
    let cfg = MaterialsConfig { mu: -1.0, ..Default::default() };
    assert!(cfg.build().is_err());
}

#[test]
fn bump_density_profile() {
    let d = Density::sample_bump();
    assert_eq!(d.at([0.0, 0.0]), 30.0);
    assert!((d.at([0.0, -0.1]) - (5.0 + 25.0 / std::f64::consts::E)).abs() < 1e-13);
    assert!((d.at([1.0, 0.0]) - 5.0).abs() < 1e-40);
    assert_eq!(d.minimum(), 5.0);
}

fn strain() -> impl Strategy<Value = Sym2> {
    (-2.0f64..2.0, -2.0f64..2.0, -2.0f64..2.0).prop_map(|(a, b, c)| sym(a, b, c))
}

fn vec2() -> impl Strategy<Value = [f64; 2]> {
    (-2.0f64..2.0, -2.0f64..2.0).prop_map(|(a, b)| [a, b])
}

proptest! {
    #[test]
    fn constitutive_laws_are_linear(e1 in strain(), e2 in strain(), g1 in vec2(), g2 in vec2(), a in -3.0f64..3.0) {
        let m = MaterialSet::standard();
        let comb = |x: Sym2, y: Sym2| sym(x[0][0] + a * y[0][0], x[1][1] + a * y[1][1], x[0][1] + a * y[0][1]);
        let g = [g1[0] + a * g2[0], g1[1] + a * g2[1]];
        let lhs = m.stress(&comb(e1, e2), g);
        let (s1, s2) = (m.stress(&e1, g1), m.stress(&e2, g2));
        for i in 0..2 {
            for j in 0..2 {
                prop_assert!((lhs[i][j] - s1[i][j] - a * s2[i][j]).abs() < 1e-12);
            }
        }
        let d = m.elec_displacement(&comb(e1, e2), g);
        let (d1, d2) = (m.elec_displacement(&e1, g1), m.elec_displacement(&e2, g2));
        for k in 0..2 {
            prop_assert!((d[k] - d1[k] - a * d2[k]).abs() < 1e-11);
        }
    }

    #[test]
    fn elastic_part_is_self_adjoint(e1 in strain(), e2 in strain()) {
        let m = MaterialSet::standard();
        let (v1, v2) = (strain_voigt(&e1), strain_voigt(&e2));
        let a = dot3(m.stress_voigt(v1, [0.0; 2]), v2);
        let b = dot3(m.stress_voigt(v2, [0.0; 2]), v1);
        prop_assert!((a - b).abs() < 1e-12);
        // Voigt pairing equals the tensor contraction σ:ε.
        let s = m.stress(&e1, [0.0; 2]);
        let full: f64 = (0..2).flat_map(|i| (0..2).map(move |j| (i, j))).map(|(i, j)| s[i][j] * e2[i][j]).sum();
        prop_assert!((full - b).abs() < 1e-12);
        prop_assert!(dot3(m.stress_voigt(v1, [0.0; 2]), v1) >= 0.9 * dot3(v1, v1) - 1e-12);
    }

    #[test]
    fn coupling_terms_are_adjoint(e in strain(), g in vec2()) {
        // eᵀ∇ψ : ε = ∇ψ · e ε
        let m = MaterialSet::standard();
        let v = strain_voigt(&e);
        let lhs = dot3(m.stress_voigt([0.0; 3], g), v);
        let d = m.displacement_from_voigt(v, [0.0; 2]);
        prop_assert!((lhs - (d[0] * g[0] + d[1] * g[1])).abs() < 1e-12);
        let de = m.displacement_from_voigt([0.0; 3], g);
        prop_assert!(-(de[0] * g[0] + de[1] * g[1]) >= 3.0 * (g[0] * g[0] + g[1] * g[1]) - 1e-12);
    }
}
