"""Independent derivation of frozen test values.

Run with python3; prints the constants that are pasted into the C++ tests.
Uses exact rational arithmetic (sympy) and arbitrary precision quadrature
(mpmath) only; nothing here calls the C++ implementation.
"""
from fractions import Fraction as Fr

import mpmath as mp
import sympy as sp

mp.mp.dps = 30

# --- three-point sample [(0,0),(1,1),(2,4)] ---------------------------------
xs = [Fr(0), Fr(1), Fr(2)]
ys = [Fr(0), Fr(1), Fr(4)]
n = len(xs)
xb = sum(xs) / n
yb = sum(ys) / n
beta = sum((x - xb) * (y - yb) for x, y in zip(xs, ys)) / sum((y - yb) ** 2 for y in ys)
# brute-force ranks with the 1/(n+1) empirical cdf and w(t) = t
w = [Fr(sum(1 for yy in ys if yy <= y), n + 1) for y in ys]
zb = sum(w) / n
beta_g = sum((x - xb) * (wk - zb) for x, wk in zip(xs, w)) / sum((y - yb) * (wk - zb) for y, wk in zip(ys, w))
print("three_point beta", beta, float(beta))
print("three_point beta_g", beta_g, float(beta_g))
print("three_point delta", beta_g - beta, float(beta_g - beta))

# --- quadratic-uniform model: Y ~ U(0,1), X = Y^2 + sigma*eps -----------------
t, s, u = sp.symbols("t s u", real=True)
EX = sp.integrate(t**2, (t, 0, 1))
EY = sp.Rational(1, 2)
D = sp.integrate((t - EY) ** 2, (t, 0, 1))
beta_q = sp.integrate(t**2 * (t - EY), (t, 0, 1)) / D

# identity weight on the same model
z0i = sp.Rational(1, 2)
Bi = sp.integrate(t * (t - z0i), (t, 0, 1))
bgi = sp.integrate(t**2 * (t - z0i), (t, 0, 1)) / Bi
print("quadratic identity beta_g", bgi)

for nu in (sp.Rational(1, 2), sp.Rational(3, 4)):

    def cte_pieces(expr_lo, expr_hi):
        return sp.integrate(expr_lo, (t, 0, nu)) + sp.integrate(expr_hi, (t, nu, 1))

    z0 = cte_pieces(0 * t, 1 + 0 * t)
    B = cte_pieces(t * (0 - z0), t * (1 - z0))
    beta_g_q = cte_pieces(t**2 * (0 - z0), t**2 * (1 - z0)) / B
    tag = "quadratic cte%s" % nu
    print(tag, "z0,B,D", z0, B, D)
    print(tag, "beta,beta_g,delta", beta_q, beta_g_q, beta_g_q - beta_q)

    # Upsilon_2^2 = Var_U[T(U)], T(u) = int_u^1 dM, with
    # dM = (w0(s)/B) dH1(s) - dH2(s)/D
    H1 = (t**2 - EX) - beta_g_q * (t - EY)
    H2 = (t**2 - EX) * (t - EY) - beta_q * (t - EY) ** 2
    dH1 = sp.diff(H1, t)
    dH2 = sp.diff(H2, t)
    m_lo = ((0 - z0) / B) * dH1 - dH2 / D
    m_hi = ((1 - z0) / B) * dH1 - dH2 / D
    T_hi = sp.integrate(m_hi, (t, u, 1))
    T_lo = sp.integrate(m_lo, (t, u, nu)) + sp.integrate(m_hi, (t, nu, 1))
    ET = sp.integrate(T_lo, (u, 0, nu)) + sp.integrate(T_hi, (u, nu, 1))
    ET2 = sp.integrate(T_lo**2, (u, 0, nu)) + sp.integrate(T_hi**2, (u, nu, 1))
    ups2 = sp.nsimplify(sp.simplify(ET2 - ET**2))
    print(tag, "upsilon2_sq", ups2, sp.N(ups2, 20))

    # Upsilon_1^2 with v^2 = sigma^2
    ups1_unit = cte_pieces(((0 - z0) / B - (t - EY) / D) ** 2, ((1 - z0) / B - (t - EY) / D) ** 2)
    print(tag, "upsilon1_sq / sigma^2", ups1_unit, sp.N(ups1_unit, 20))

# Uniform(0,1), w(t) = t
print("uniform identity z0,B,D", z0i, Bi, D)

# --- Gaussian cells: closed-form conditional-noise integral by mpmath ----------
def phi_inv(p):
    return -mp.sqrt(2) * mp.erfinv(1 - 2 * p)  # = sqrt(2)*erfinv(2p-1)


def gaussian_cell(rho, wfun, breaks):
    pts = [mp.mpf(0)] + [mp.mpf(b) for b in breaks] + [mp.mpf(1)]
    z0 = mp.quad(wfun, pts)
    Bz = mp.quad(lambda p: phi_inv(p) * (wfun(p) - z0), pts)
    integ = mp.quad(lambda p: ((wfun(p) - z0) / Bz - phi_inv(p)) ** 2, pts)
    return (1 - rho**2) * integ, z0, Bz


weights = {
    "identity": (lambda p: p, []),
    "pht2": (lambda p: 2 * (1 - p), []),
    "cte0.75": (lambda p: mp.mpf(1) if p > mp.mpf("0.75") else mp.mpf(0), ["0.75"]),
}
for rho in ["0.3", "0.6", "0.9"]:
    for name, (wf, br) in weights.items():
        v, z0g, Bg = gaussian_cell(mp.mpf(rho), wf, br)
        print("gaussian", rho, name, mp.nstr(v, 17), "z0", mp.nstr(z0g, 17), "B", mp.nstr(Bg, 17))

# standard normal, CTE 0.5: B = 1/sqrt(2 pi)
print("normal cte0.5 B", mp.nstr(1 / mp.sqrt(2 * mp.pi), 17))
