"""Symbolic derivation of the second-order reduction coefficients.

Eliminates the 2x2 eigenvalue system  A v' = (E - lambda I - A_x) v  to a scalar
equation  u2'' + (f1 lam + f2) u2' + (f3 lam^2 + f4 lam) u2 = 0  with
v = T2 u, T2 = [[1, 0], [c, 1]], and prints closed forms of f1..f4 together with
the combinations used by the C++ code. x-derivatives along the profile are
taken as d/dH times G(H).

Run:  python3 docs/reduction_worksheet.py
"""
import sympy as sp

H, F, s, lam = sp.symbols("H F s lambda", positive=True)  # s = sqrt(H_R)
HR = s**2
nu = 1 / s
c = (1 - s**3) / (1 - s**2)
q0 = sp.simplify(c - 1)
Q = c * H - q0
Hs3 = F**2 * q0**2
H3 = sp.simplify(q0**2 / HR)

G = F**2 * (H - 1) * (H - HR) * (H - H3) / (H**3 - Hs3)
assert sp.simplify(sp.expand((H - 1) * (H - HR) * (H - H3)) - (H**3 - Q**2)) == 0


def ddx(expr):
    return sp.diff(expr, H) * G


A = sp.Matrix([[-c, 1], [H / F**2 - Q**2 / H**2, 2 * Q / H - c]])
E = sp.Matrix([[0, 0], [2 * Q**2 / H**3 + 1, -2 * Q / H**2]])
Ax = A.applyfunc(ddx)
P = A
R = E - lam * sp.eye(2) - Ax
T2 = sp.Matrix([[1, 0], [-P[0, 0] / P[0, 1], 1]])
T1 = sp.Matrix([[1, 0], [-P[1, 1] / P[0, 1], 1]])
M = (T1 * R * T2).applyfunc(sp.simplify)
detA = sp.simplify(A.det())
assert sp.simplify(M[0, 0] + lam) == 0 and sp.simplify(M[0, 1]) == 0
# -detA u1' = m21 u1 + m22 u2,  u1 = -u2'/lam
#  => u2'' + (m21/detA) u2' - lam m22/detA u2 = 0
m21 = sp.expand(M[1, 0])
m22 = sp.expand(M[1, 1])
f1 = sp.simplify(m21.coeff(lam, 1) / detA)
f2 = sp.simplify(m21.coeff(lam, 0) / detA)
rest = sp.expand(-lam * m22 / detA)
f3 = sp.simplify(rest.coeff(lam, 2))
f4 = sp.simplify(rest.coeff(lam, 1))

Hs = sp.Symbol("H_s", positive=True)
print("detA =", sp.factor(detA))
for name, f in [("f1", f1), ("f2", f2), ("f3", f3), ("f4", f4)]:
    print(name, "=", sp.factor(f))

# f2 = -G'(H)
assert sp.simplify(f2 + sp.diff(G, H)) == 0
# beta = -f3 + f1^2/4 = F^2 H^5/(H^3-Hs^3)^2
beta = -f3 + f1**2 / 4
assert sp.simplify(beta - F**2 * H**5 / (H**3 - Hs3) ** 2) == 0
# alpha = -f4 + f1 f2/2 + f1'/2
alpha = -f4 + f1 * f2 / 2 + ddx(f1) / 2
fFHR = 2 * (s + 1) ** 2 * H**3 - F**2 * HR * (HR + s + 1) * H + F**2 * HR**2
alpha_closed = F**2 * (H - HR + H * (s + HR)) * fFHR / ((s + 1) ** 3 * (H**3 - Hs3) ** 2)
assert sp.simplify(alpha - alpha_closed) == 0
print("alpha =", sp.factor(alpha))
print("identities f2=-G', beta, alpha verified")
