use proptest::prelude::*;
use pzwave::bem::k0_k1;
use pzwave::cq::{convolve_scalar, CqScheme, SchemeKind};
use pzwave::materials::MaterialSet;
use pzwave::mesh::DiagonalPattern;
use pzwave::verify::runs::{c_l, rectangle_problem, sample_points};
use pzwave::verify::*;
use pzwave::C64;

// (r, t, v, ∂_r v) from tests/oracles/cylindrical_wave.py.
const WAVE: [(f64, f64, f64, f64); 5] = [
    (0.5, 1.5, 0.8078738664129377814, -1.1349448019144798388),
    (0.7, 1.5, 0.55956165747045363647, -1.3581585949142801714),
    (1.2, 1.5, 0.014626296329428534809, -0.24802504540660497536),
    (0.3, 0.8, 0.2603546379780929254, -2.226107860481736819),
    (0.9, 2.5, 0.4204309024012170272, 0.75811663704324355385),
];

// ∫₀ᵗ 𝓗 from the same script.
const STEP_INTEGRAL: [(f64, f64); 4] =
    [(0.25, 0.003928314555775036), (0.5, 0.08425071022727272), (1.0, 6.0 / 11.0), (3.0, 28.0 / 11.0)];

#[test]
fn cylindrical_wave_matches_oracle() {
    for (r, t, v, dv) in WAVE {
        let (a, b) = cylindrical_wave(r, t, 1.0);
        assert!((a - v).abs() < 1e-11, "v({r}, {t})");
        assert!((b - dv).abs() < 1e-11, "dv({r}, {t})");
    }
    assert_eq!(cylindrical_wave(1.0, 0.9, 1.0), (0.0, 0.0));
}

#[test]
fn step_integral_matches_oracle() {
    for (t, v) in STEP_INTEGRAL {
        assert!((smooth_step_integral(t) - v).abs() < 1e-14, "t = {t}");
    }
}

#[test]
fn step_is_flat_at_both_ends() {
    assert_eq!(smooth_step(0.0)[0], 0.0);
    assert_eq!(smooth_step(1.0)[0], 1.0);
    assert_eq!(smooth_step(7.0)[0], 1.0);
    // t⁵ behaviour at 0 and (1-t)⁶ at 1.
    for e in [1e-2, 1e-3] {
        assert!((smooth_step(e)[0] / e.powi(5) - 252.0).abs() < 3000.0 * e);
    }
    // Rounding near 1 limits how small e can be.
    for e in [2e-2, 1e-2] {
        assert!(((1.0 - smooth_step(1.0 - e)[0]) / e.powi(6) - 210.0).abs() < 1000.0 * e);
    }
}

#[test]
fn pressure_speed_of_test_material() {
    assert!((c_l(&MaterialSet::standard()) - (8.0f64 / 5.0).sqrt()).abs() < 1e-15);
    assert!((c_l(&MaterialSet::standard()) - 1.264911).abs() < 1e-6);
}

#[test]
fn travelling_wave_is_causal() {
    let mat = MaterialSet::standard();
    let cl = c_l(&mat);
    let case = TimeCase::new(0.9, mat, cl);
    // x·d > c_L t ≈ 1.138 at (1, 1), behind the front at (0.5, 0.5).
    assert_eq!(case.u([1.0, 1.0]), [C64::new(0.0, 0.0); 2]);
    assert!(case.u([0.5, 0.3])[0].norm() > 0.0);
}

/// Fourth-order central difference of `f` along coordinate `k`.
fn fd<T, F>(f: F, x: [f64; 2], k: usize, h: f64) -> T
where
    F: Fn([f64; 2]) -> T,
    T: std::ops::Sub<Output = T> + std::ops::Mul<f64, Output = T> + std::ops::Add<Output = T>,
{
    let at = |d: f64| {
        let mut y = x;
        y[k] += d;
        f(y)
    };
    (at(-2.0 * h) - at(2.0 * h)) * (1.0 / (12.0 * h)) + (at(h) - at(-h)) * (8.0 / (12.0 * h))
}

fn check_forcing<F: ExactFields>(case: &F, accel: impl Fn([f64; 2]) -> [C64; 2], x: [f64; 2]) {
    let h = 1e-3;
    let rho = case.materials().rho_solid.at(x);
    let sig = |k: usize, i: usize, j: usize| fd(|y| case.stress(y)[i][j], x, k, h);
    let div = [sig(0, 0, 0) + sig(1, 0, 1), sig(0, 1, 0) + sig(1, 1, 1)];
    let acc = accel(x);
    let f1 = case.f1(x);
    for c in 0..2 {
        let r = div[c] - acc[c] * rho - f1[c];
        assert!(r.norm() <= 1e-6 * (1.0 + f1[c].norm()), "f1 residual {r} at {x:?}");
    }
    let div_d = fd(|y| case.elec_displacement(y)[0], x, 0, h) + fd(|y| case.elec_displacement(y)[1], x, 1, h);
    let r = div_d - case.f2(x);
    assert!(r.norm() <= 1e-6 * (1.0 + case.f2(x).norm()), "f2 residual {r} at {x:?}");
}

fn interior_points(n: usize) -> Vec<[f64; 2]> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
    (0..n).map(|_| [rng.gen_range(1.01..2.99), rng.gen_range(1.01..1.99)]).collect()
}

#[test]
fn frequency_forcing_satisfies_the_equations() {
    let mat = MaterialSet::standard();
    for s in [C64::new(0.0, -2.5), C64::new(1.0, 0.5)] {
        let case = FrequencyCase::new(s, mat.clone(), c_l(&mat));
        for x in interior_points(50) {
            check_forcing(&case, |y| case.u(y).map(|v| v * s * s), x);
        }
    }
}

#[test]
fn time_forcing_satisfies_the_equations() {
    let mat = MaterialSet::standard();
    let cl = c_l(&mat);
    for t in [0.9, 1.5] {
        let case = TimeCase::new(t, mat.clone(), cl);
        let dt = 1e-3;
        let u_at = |tt: f64, y| TimeCase::new(tt, mat.clone(), cl).u(y);
        for x in interior_points(50) {
            let accel = |y: [f64; 2]| {
                let a = [-2.0, -1.0, 0.0, 1.0, 2.0].map(|k| u_at(t + k * dt, y));
                [0, 1]
                    .map(|c| (-a[0][c] + a[1][c] * 16.0 - a[2][c] * 30.0 + a[3][c] * 16.0 - a[4][c]) / (12.0 * dt * dt))
            };
            check_forcing(&case, accel, x);
        }
    }
}

#[test]
fn frequency_gradients_are_consistent() {
    let mat = MaterialSet::standard();
    let case = FrequencyCase::new(C64::new(0.3, -2.5), mat.clone(), c_l(&mat));
    for x in [[0.3, 0.4], [3.5, 2.5], [1.5, 1.2]] {
        for k in 0..2 {
            let g = fd(|y| case.v(y), x, k, 1e-3);
            assert!((g - case.grad_v(x)[k]).norm() < 1e-8);
            for c in 0..2 {
                let g = fd(|y| case.u(y)[c], x, k, 1e-3);
                assert!((g - case.grad_u(x)[c][k]).norm() < 1e-8);
            }
            let g = fd(|y| case.psi(y), x, k, 1e-3);
            assert!((g - case.grad_psi(x)[k]).norm() < 1e-8);
        }
    }
}

#[test]
fn time_wave_gradient_and_equation() {
    // v solves v_tt = Δv away from the source.
    let mat = MaterialSet::standard();
    let at = |t: f64, x: [f64; 2]| TimeCase::new(t, mat.clone(), 1.0).v(x);
    let x = [3.0, 2.3];
    let case = TimeCase::new(1.6, mat.clone(), 1.0);
    for k in 0..2 {
        let g = fd(|y| case.v(y), x, k, 1e-3);
        assert!((g - case.grad_v(x)[k]).norm() < 1e-7);
    }
    let h = 1e-2;
    let lap = (0..2)
        .map(|k| {
            let mut p = x;
            let mut m = x;
            p[k] += h;
            m[k] -= h;
            (case.v(p) - case.v(x) * 2.0 + case.v(m)) / (h * h)
        })
        .sum::<C64>();
    let vtt = (at(1.6 + h, x) - at(1.6, x) * 2.0 + at(1.6 - h, x)) / (h * h);
    assert!((lap - vtt).norm() < 1e-3, "{lap} {vtt}");
}

#[test]
fn cylindrical_wave_agrees_with_scalar_cq() {
    // v(r, ·) = CQ of (2/π)K₀(s r) applied to 𝓗(t) sin 2t.
    let r = 0.7;
    let t_end = 2.0;
    let mut errs = Vec::new();
    for kappa in [0.02, 0.01] {
        let sc = CqScheme::with_final_time(SchemeKind::Tr, kappa, t_end).unwrap();
        let g: Vec<f64> = sc.times().iter().map(|&t| smooth_step(t)[0] * (2.0 * t).sin()).collect();
        let out = convolve_scalar(&sc, &g, |s| k0_k1(s * r).0 * (2.0 / std::f64::consts::PI)).unwrap();
        let err =
            sc.times().iter().zip(&out).map(|(&t, v)| (v - cylindrical_wave(r, t, 1.0).0).abs()).fold(0.0, f64::max);
        errs.push(err);
    }
    assert!(errs[1] < 2e-3, "{errs:?}");
    assert!(errs[0] / errs[1] > 3.0, "{errs:?}");
}

#[test]
fn interpolation_error_trend_and_exact_reproduction() {
    let mat = MaterialSet::standard();
    let cl = c_l(&mat);
    let case = FrequencyCase::new(C64::new(0.0, -2.5), mat.clone(), cl);
    let mut prev: Option<f64> = None;
    for h in [0.2, 0.1, 0.05] {
        let p = rectangle_problem(h, 1, mat.clone(), DiagonalPattern::Right).unwrap();
        let u = p.space.interpolate_vector(|x| case.u(x));
        let e = error_norms::<2>(&p.mesh, &p.space, &u, |x| (case.u(x), case.grad_u(x)));
        if let Some(q) = prev {
            let rate = ecr(q, e.l2.relative());
            assert!(rate > 1.8, "interpolation L² rate {rate}");
        }
        prev = Some(e.l2.relative());

        // ψ = x₁ is reproduced exactly by P1.
        let psi = p.space.interpolate(|x| C64::new(x[0], 0.0));
        let e = error_norms::<1>(&p.mesh, &p.space, &psi, |x| {
            ([C64::new(x[0], 0.0)], [[C64::new(1.0, 0.0), C64::new(0.0, 0.0)]])
        });
        assert!(e.l2.error < 1e-13 && e.h1.error < 1e-12);
    }
}

#[test]
fn zero_exact_norm_reports_absolute_error() {
    let e = pointwise_error(&[C64::new(0.0, 0.0); 3], &[C64::new(0.5, 0.0); 3]);
    assert!(e.is_absolute());
    assert_eq!(e.relative(), 0.5);
    let e = pointwise_error(&[C64::new(2.0, 0.0)], &[C64::new(2.0, 0.0)]);
    assert_eq!(e.relative(), 0.0);
}

#[test]
fn sample_points_are_reproducible_and_exterior() {
    let a = sample_points(20, 20, 0.4);
    assert_eq!(a, sample_points(20, 20, 0.4));
    assert_ne!(a, sample_points(21, 20, 0.4));
    for x in a {
        let dx = (1.0 - x[0]).max(x[0] - 3.0).max(0.0);
        let dy = (1.0 - x[1]).max(x[1] - 2.0).max(0.0);
        assert!(dx.hypot(dy) >= 0.4, "{x:?}");
    }
}

#[test]
fn table_csv_layout() {
    let mut t = ConvergenceTable::default();
    t.push(TableRow { h: 0.2, kappa: None, errors: [1.0, 2.0, 4.0, 8.0, 16.0] });
    t.push(TableRow { h: 0.1, kappa: None, errors: [0.25, 1.0, 1.0, 4.0, 16.0] });
    let mut buf = Vec::new();
    t.write_csv(&mut buf).unwrap();
    let s = String::from_utf8(buf).unwrap();
    let lines: Vec<&str> = s.lines().collect();
    assert_eq!(
        lines[0],
        "h,E_v,ecr_E_v,E_u_L2,ecr_E_u_L2,E_psi_L2,ecr_E_psi_L2,E_u_H1,ecr_E_u_H1,E_psi_H1,ecr_E_psi_H1"
    );
    assert!(lines[1].ends_with(",-"));
    assert_eq!(t.final_rates().unwrap(), [2.0, 1.0, 2.0, 1.0, 0.0]);
}

proptest! {
    #[test]
    fn ecr_is_log2_of_ratios(e0 in 1e-8f64..1.0, rates in prop::collection::vec(0.1f64..4.0, 1..5)) {
        let mut t = ConvergenceTable::default();
        let mut e = e0;
        let mut h = 0.2;
        t.push(TableRow { h, kappa: Some(h), errors: [e; 5] });
        for &r in &rates {
            e /= 2f64.powf(r);
            h /= 2.0;
            t.push(TableRow { h, kappa: Some(h), errors: [e; 5] });
        }
        for (i, &r) in rates.iter().enumerate() {
            let got = t.rates(i + 1).unwrap();
            prop_assert!((got[0] - r).abs() < 1e-9);
        }
        prop_assert!(t.rates(0).is_none());
    }

    #[test]
    fn frequency_v_is_the_bessel_kernel(r in 0.2f64..3.0, im in -4.0f64..-0.5) {
        let mat = MaterialSet::standard();
        let s = C64::new(0.0, im);
        let case = FrequencyCase::new(s, mat.clone(), c_l(&mat));
        let x = [2.0 + r, 1.5];
        let want = k0_k1(s * r).0 / (2.0 * std::f64::consts::PI);
        prop_assert!((case.v(x) - want).norm() <= 1e-14 * want.norm().max(1.0));
    }
}
