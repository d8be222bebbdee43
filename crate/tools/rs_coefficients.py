"""Taylor coefficients of the Riemann-Siegel correction functions C0..C4.

Each C_k(p) is expanded in w = 2p - 1 (p is the fractional part of
sqrt(t / 2pi)). The output is pasted into crates/core/src/specfun/rs_coeffs.rs.
"""
import mpmath as mp

mp.mp.dps = 80
DEG = 120


def psi_series():
    # Psi(1/2 + z) = cos(2 pi z^2 - 5 pi / 8) / (-cos(2 pi z))
    num = [mp.mpf(0)] * (DEG + 1)
    den = [mp.mpf(0)] * (DEG + 1)
    c58, s58 = mp.cos(5 * mp.pi / 8), mp.sin(5 * mp.pi / 8)
    # cos(x - a) = cos x cos a + sin x sin a, x = 2 pi z^2
    for j in range(0, DEG // 2 + 1):
        x = (2 * mp.pi) ** j / mp.factorial(j)
        if 2 * j > DEG:
            break
        if j % 2 == 0:
            num[2 * j] += c58 * x * (-1) ** (j // 2)
        else:
            num[2 * j] += s58 * x * (-1) ** (j // 2)
    for j in range(0, DEG + 1, 2):
        den[j] = -((2 * mp.pi) ** j) / mp.factorial(j) * (-1) ** (j // 2)
    out = [mp.mpf(0)] * (DEG + 1)
    for n in range(DEG + 1):
        acc = num[n]
        for k in range(1, n + 1):
            acc -= den[k] * out[n - k]
        out[n] = acc / den[0]
    return out


def deriv(s, m):
    r = s[:]
    for _ in range(m):
        r = [r[j + 1] * (j + 1) for j in range(len(r) - 1)]
    return r


def combo(terms):
    n = min(len(deriv(PSI, m)) for m, _ in terms)
    out = [mp.mpf(0)] * n
    for m, c in terms:
        d = deriv(PSI, m)
        for j in range(n):
            out[j] += c * d[j]
    return out


PSI = psi_series()
pi = mp.pi
C = [
    combo([(0, 1)]),
    combo([(3, -1 / (96 * pi**2))]),
    combo([(2, 1 / (64 * pi**2)), (6, 1 / (18432 * pi**4))]),
    combo([(1, -1 / (64 * pi**2)), (5, -1 / (3840 * pi**4)), (9, -1 / (5308416 * pi**6))]),
    combo([(0, 1 / (128 * pi**2)), (4, mp.mpf(19) / (24576 * pi**4)),
           (8, mp.mpf(11) / (5898240 * pi**6)), (12, 1 / (2038431744 * pi**8))]),
]


def in_w(series):
    # z = w / 2
    coeffs = [series[j] / mp.mpf(2) ** j for j in range(len(series))]
    last = 0
    for j, c in enumerate(coeffs):
        if abs(c) > mp.mpf("1e-22"):
            last = j
    return coeffs[: last + 1]


if __name__ == "__main__":
    for k, s in enumerate(C):
        w = in_w(s)
        print(f"pub(super) const C{k}: [f64; {len(w)}] = [")
        for c in w:
            print(f"    {mp.nstr(c, 20, min_fixed=0, max_fixed=0)},")
        print("];")
