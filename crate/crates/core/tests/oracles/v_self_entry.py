"""Single-panel P0 Galerkin entry of the single layer operator:
(L^2 / 2pi) * 2 * int_0^1 (1 - u) K0(kappa L u) du, by adaptive quadrature."""
import mpmath as mp

mp.mp.dps = 30
for L, kappa in [(0.2, mp.mpf("0.1")), (0.2, mp.mpc(2, -2.5)), (1.0, mp.mpf(2))]:
    f = lambda u: (1 - u) * mp.besselk(0, kappa * L * u)
    val = L**2 / (2 * mp.pi) * 2 * mp.quad(f, [0, mp.mpf("1e-8"), mp.mpf("1e-4"), mp.mpf("0.01"), 1])
    print(L, kappa, mp.nstr(val, 20))
