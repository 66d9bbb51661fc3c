//! Modified Bessel functions `K₀`, `K₁` for complex arguments with
//! `Re z ≥ 0`: ascending series for `|z| < 2`, Steed's continued fraction
//! (Temme's method at order zero) otherwise.

use std::f64::consts::PI;

use crate::error::{param, Result};
use crate::C64;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// `K₀(z)`. Fails at `z = 0` and for `Re z < 0`.
pub fn bessel_k0(z: C64) -> Result<C64> {
    check(z)?;
    Ok(k0_k1(z).0)
}

/// `K₁(z)`, same domain as [`bessel_k0`].
pub fn bessel_k1(z: C64) -> Result<C64> {
    check(z)?;
    Ok(k0_k1(z).1)
}

fn check(z: C64) -> Result<()> {
    if z == C64::new(0.0, 0.0) {
        return Err(param("K0 is singular at z = 0"));
    }
    if z.re < 0.0 || !z.re.is_finite() || !z.im.is_finite() {
        return Err(param(format!("K0 argument {z} outside the closed right half-plane")));
    }
    Ok(())
}

/// `(K₀(z), K₁(z))` without argument checks.
pub fn k0_k1(z: C64) -> (C64, C64) {
    if z.norm() < 2.0 {
        series(z)
    } else {
        steed(z)
    }
}

fn series(z: C64) -> (C64, C64) {
    let y = z * z * 0.25;
    let mut t = C64::new(1.0, 0.0);
    let mut t1 = z * 0.5;
    let (mut i0, mut s0, mut i1, mut s1) = (C64::default(), C64::default(), C64::default(), C64::default());
    let mut harmonic = 0.0;
    let mut psi = -EULER_GAMMA;
    let mut k = 0usize;
    loop {
        i0 += t;
        s0 += t * harmonic;
        i1 += t1;
        // ψ(k+1) + ψ(k+2)
        s1 += t1 * (2.0 * psi + 1.0 / (k as f64 + 1.0));
        k += 1;
        let kf = k as f64;
        harmonic += 1.0 / kf;
        psi += 1.0 / kf;
        t *= y / (kf * kf);
        t1 *= y / (kf * (kf + 1.0));
        if k > 2 && t.norm() < 1e-17 * i0.norm() {
            break;
        }
    }
    let l = (z * 0.5).ln();
    let k0 = -(l + EULER_GAMMA) * i0 + s0;
    let k1 = z.inv() + l * i1 - s1 * 0.5;
    (k0, k1)
}

fn steed(x: C64) -> (C64, C64) {
    let one = C64::new(1.0, 0.0);
    let mut b = (one + x) * 2.0;
    let mut d = b.inv();
    let mut delh = d;
    let mut h = d;
    let (mut q1, mut q2) = (C64::default(), one);
    let a1 = 0.25;
    let mut q = C64::new(a1, 0.0);
    let mut c = C64::new(a1, 0.0);
    let mut a = -a1;
    let mut s = one + q * delh;
    for i in 2..20_000usize {
        a -= 2.0 * (i - 1) as f64;
        c *= -a / i as f64;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = (b + d * a).inv();
        delh = (b * d - 1.0) * delh;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).norm() < 1e-16 {
            break;
        }
    }
    h *= a1;
    let k0 = (PI / (2.0 * x)).sqrt() * (-x).exp() / s;
    let k1 = k0 * (x + 0.5 - h) / x;
    (k0, k1)
}
