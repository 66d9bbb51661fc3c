"""Reference values of the causal cylindrical wave

    v(r, t) = (2/pi) * int_0^{acosh(t/r)} g(t - r cosh th) dth,
    g(t) = H(t) sin(2t),

with H the quintic smooth step, and of its radial derivative
dv/dr = -(2/pi) int_0^{acosh(t/r)} cosh(th) g'(t - r cosh th) dth.
Also prints the antiderivative of H at a few times.
"""
import mpmath as mp

mp.mp.dps = 40
C = [0, 0, 0, 0, 0, 252, -1050, 1800, -1575, 700, -126]


def H(t):
    if t <= 0:
        return mp.mpf(0)
    if t >= 1:
        return mp.mpf(1)
    return sum(c * t**k for k, c in enumerate(C))


def dH(t):
    if t <= 0 or t >= 1:
        return mp.mpf(0)
    return sum(k * c * t**(k - 1) for k, c in enumerate(C) if k > 0)


def g(t):
    return H(t) * mp.sin(2 * t)


def dg(t):
    return dH(t) * mp.sin(2 * t) + 2 * H(t) * mp.cos(2 * t)


def v(r, t):
    if t <= r:
        return mp.mpf(0)
    top = mp.acosh(t / r)
    # breakpoints where the argument crosses 1
    pts = [0, top]
    if t - 1 > r:
        pts = [0, mp.acosh((t - 1) / r), top]
    return 2 / mp.pi * mp.quad(lambda th: g(t - r * mp.cosh(th)), pts)


def dv(r, t):
    if t <= r:
        return mp.mpf(0)
    top = mp.acosh(t / r)
    pts = [0, top]
    if t - 1 > r:
        pts = [0, mp.acosh((t - 1) / r), top]
    return -2 / mp.pi * mp.quad(lambda th: mp.cosh(th) * dg(t - r * mp.cosh(th)), pts)


def int_H(t):
    if t <= 1:
        return sum(c * t**(k + 1) / (k + 1) for k, c in enumerate(C))
    return mp.mpf(6) / 11 + (t - 1)


for r, t in [(0.5, 1.5), (0.7, 1.5), (1.2, 1.5), (0.3, 0.8), (0.9, 2.5)]:
    print(f"({r}, {t}, {mp.nstr(v(r, t), 20)}, {mp.nstr(dv(r, t), 20)}),")
for t in [0.25, 0.5, 1.0, 3.0]:
    print(t, mp.nstr(int_H(t), 20))
