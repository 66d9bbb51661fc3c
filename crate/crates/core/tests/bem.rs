use std::f64::consts::PI;

use faer::Mat;
use pzwave::bem::bessel::{bessel_k0, k0_k1};
use pzwave::bem::{eval_potentials, BoundarySpaces, CalderonBlock};
use pzwave::C64;

fn ngon(n: usize, r: f64) -> Vec<[f64; 2]> {
    (0..n)
        .map(|i| {
            let a = 2.0 * PI * i as f64 / n as f64;
            [r * a.cos(), r * a.sin()]
        })
        .collect()
}

const X0: [f64; 2] = [0.2, 0.1];

fn source(kappa: C64, x: [f64; 2]) -> C64 {
    let r = (x[0] - X0[0]).hypot(x[1] - X0[1]);
    k0_k1(kappa * r).0 / (2.0 * PI)
}

fn source_dn(kappa: C64, x: [f64; 2], nu: [f64; 2]) -> C64 {
    let d = [x[0] - X0[0], x[1] - X0[1]];
    let r = d[0].hypot(d[1]);
    -kappa * k0_k1(kappa * r).1 / (2.0 * PI) * ((d[0] * nu[0] + d[1] * nu[1]) / r)
}

fn matvec(a: &Mat<C64>, x: &[C64]) -> Vec<C64> {
    (0..a.nrows()).map(|i| (0..a.ncols()).map(|j| a[(i, j)] * x[j]).sum()).collect()
}

fn norm(x: &[C64]) -> f64 {
    x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

#[test]
fn self_entry_matches_adaptive_oracle() {
    // Values from tests/oracles/v_self_entry.py.
    let cases = [
        (0.2, C64::new(0.1, 0.0), C64::new(0.035192646871111864319, 0.0)),
        (0.2, C64::new(2.0, -2.5), C64::new(0.013166381720871171436, 0.0054557504895123658747)),
        (1.0, C64::new(2.0, 0.0), C64::new(0.17722565254616065699, 0.0)),
    ];
    for (l, kappa, want) in cases {
        let tri = [[0.0, 0.0], [l, 0.0], [0.3 * l, 0.8 * l]];
        let bs = BoundarySpaces::from_polygon(&tri, 1).unwrap();
        let c = CalderonBlock::assemble_kappa(kappa, &bs);
        let got = c.v[(0, 0)];
        assert!((got - want).norm() < 1e-8 * want.norm(), "{got} vs {want}");
    }
}

#[test]
fn symmetry_and_scaling() {
    let bs = BoundarySpaces::from_polygon(&ngon(24, 1.0), 2).unwrap();
    let s = C64::new(2.0, -2.5);
    let a = CalderonBlock::assemble(s, 2.0, &bs).unwrap();
    let b = CalderonBlock::assemble(s / 2.0, 1.0, &bs).unwrap();
    let vmax = (0..bs.n_x).flat_map(|i| (0..bs.n_x).map(move |j| (i, j))).map(|ij| a.v[ij].norm()).fold(0.0, f64::max);
    let wmax = (0..bs.n_y).flat_map(|i| (0..bs.n_y).map(move |j| (i, j))).map(|ij| a.w[ij].norm()).fold(0.0, f64::max);
    for i in 0..bs.n_x {
        for j in 0..bs.n_x {
            assert!((a.v[(i, j)] - a.v[(j, i)]).norm() <= 1e-10 * vmax);
            assert!((a.v[(i, j)] - b.v[(i, j)]).norm() <= 1e-13 * vmax);
        }
    }
    for i in 0..bs.n_y {
        for j in 0..bs.n_y {
            assert!((a.w[(i, j)] - a.w[(j, i)]).norm() <= 1e-10 * wmax);
        }
        for j in 0..bs.n_x {
            assert_eq!(a.kt[(i, j)], a.k[(j, i)]);
        }
    }
}

#[test]
fn real_frequency_positivity() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let bs = BoundarySpaces::from_polygon(&ngon(20, 1.0), 1).unwrap();
    let c = CalderonBlock::assemble(C64::new(2.0, 0.0), 1.0, &bs).unwrap();
    for _ in 0..100 {
        let l: Vec<C64> = (0..bs.n_x).map(|_| C64::new(rng.gen_range(-1.0..1.0), 0.0)).collect();
        let vl = matvec(&c.v, &l);
        assert!(l.iter().zip(&vl).map(|(a, b)| (a.conj() * b).re).sum::<f64>() > 0.0);
        let f: Vec<C64> = (0..bs.n_y).map(|_| C64::new(rng.gen_range(-1.0..1.0), 0.0)).collect();
        let wf = matvec(&c.w, &f);
        assert!(f.iter().zip(&wf).map(|(a, b)| (a.conj() * b).re).sum::<f64>() > 0.0);
    }
}

/// Residuals of the two boundary equations for the traces of an exterior
/// point-source field.
fn calderon_residuals(n: usize, k: usize, kappa: C64) -> (f64, f64) {
    let bs = BoundarySpaces::from_polygon(&ngon(n, 1.0), k).unwrap();
    let c = CalderonBlock::assemble_kappa(kappa, &bs);
    let lam = bs.project_x(|x, nu| source_dn(kappa, x, nu));
    let phi: Vec<C64> = bs.y_points().iter().map(|&x| source(kappa, x)).collect();
    let d = c.operator_matrix();
    let mut z = lam.clone();
    z.extend_from_slice(&phi);
    let r = matvec(&d, &z);
    let (r1, r2) = r.split_at(bs.n_x);
    // Second row of 𝔻 carries -½M; the exterior traces need +½M overall.
    let ml: Vec<C64> = (0..bs.n_y).map(|i| (0..bs.n_x).map(|j| lam[j] * c.m_xy[(j, i)]).sum()).collect();
    let r2: Vec<C64> = r2.iter().zip(&ml).map(|(a, b)| a + b).collect();
    let scale = norm(&matvec(&c.v, &lam));
    (norm(r1) / scale, norm(&r2) / norm(&matvec(&c.w, &phi)))
}

#[test]
fn calderon_equations_converge() {
    for k in [1, 2] {
        let kappa = C64::new(2.0, -1.0);
        let (a1, a2) = calderon_residuals(16, k, kappa);
        let (b1, b2) = calderon_residuals(32, k, kappa);
        let (c1, c2) = calderon_residuals(64, k, kappa);
        eprintln!("k={k}: {a1:e} {b1:e} {c1:e} | {a2:e} {b2:e} {c2:e}");
        assert!(c1 < b1 && b1 < a1 && c1 < 1e-2);
        assert!(c2 < b2 && b2 < a2 && c2 < 1e-2);
    }
}

#[test]
fn representation_reproduces_point_source() {
    let kappa = C64::new(1.5, -2.0);
    let ext = [[2.0, 0.5], [-1.5, -1.5], [0.3, 3.0]];
    let int = [[-0.4, 0.3], [0.0, -0.5]];
    let mut prev = (f64::INFINITY, f64::INFINITY);
    for n in [16, 32, 64] {
        let bs = BoundarySpaces::from_polygon(&ngon(n, 1.0), 2).unwrap();
        let lam = bs.project_x(|x, nu| source_dn(kappa, x, nu));
        let phi: Vec<C64> = bs.y_points().iter().map(|&x| source(kappa, x)).collect();
        let e = eval_potentials(kappa, &bs, Some(&lam), Some(&phi), &ext);
        let i = eval_potentials(kappa, &bs, Some(&lam), Some(&phi), &int);
        let eerr = ext.iter().zip(&e.values).map(|(&x, v)| (v - source(kappa, x)).norm()).fold(0.0, f64::max);
        let ierr = i.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        eprintln!("n={n}: exterior {eerr:e} interior {ierr:e}");
        assert!(eerr < prev.0 && ierr < prev.1);
        prev = (eerr, ierr);
    }
    assert!(prev.0 < 1e-4 && prev.1 < 1e-4);
}

#[test]
fn bessel_matches_fixture() {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/bessel_k.csv")).unwrap();
    let mut worst: f64 = 0.0;
    for line in text.lines().skip(1) {
        let v: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        let z = C64::new(v[0], v[1]);
        let (k0, k1) = k0_k1(z);
        let e0 = (k0 - C64::new(v[2], v[3])).norm() / C64::new(v[2], v[3]).norm();
        let e1 = (k1 - C64::new(v[4], v[5])).norm() / C64::new(v[4], v[5]).norm();
        worst = worst.max(e0).max(e1);
    }
    assert!(worst < 1e-12, "worst relative error {worst:e}");
    assert!(bessel_k0(C64::new(0.0, 0.0)).is_err());
    assert!(bessel_k0(C64::new(-1.0, 0.3)).is_err());
}
