"""Independent reference values for the acceptance checks (sympy/numpy)."""
import numpy as np
import sympy as sp

lam, q = sp.symbols("lambda q", real=True)
X = sp.Matrix([[1, 1], [1, 2]])
Y = sp.Matrix([[2, 1], [1, 1]])
I2, Z2 = sp.eye(2), sp.zeros(2)


def limit_form(T, Q, R, C, z):
    left = sp.BlockMatrix([[Z2, -C], [C.H, Z2]]).as_explicit()
    B = sp.BlockMatrix([[Z2, I2], [-R, z * T - Q]]).as_explicit()
    F = left * B
    return sp.expand((F + F.H) / 2)


def minors(M):
    return [sp.expand(sp.factor(M[:k, :k].det())) for k in range(1, M.shape[0] + 1)]


# constant family a = X, b = Y
# ||a|| F is the limit form with C = a in place of a / ||a||
nX = (3 + np.sqrt(5)) / 2
scaled = limit_form(X.inv(), X.inv() * Y, X.inv() * X.H, X, lam)
mc = minors(scaled)
printed = [sp.Integer(1), sp.Integer(1), -sp.Rational(1, 2) * lam**2 + sp.Rational(3, 2) * lam - sp.Rational(1, 4),
           sp.Rational(1, 16) * lam**4 - sp.Rational(3, 8) * lam**3 - sp.Rational(17, 16) * lam**2
           + sp.Rational(21, 8) * lam - sp.Rational(11, 16)]
print("constant minors:", mc)
print("match printed:", all(sp.simplify(a - b) == 0 for a, b in zip(mc, printed)))
print("values at 1:", [float(p.subs(lam, 1)) for p in printed])
roots = sorted(float(r) for r in sp.solve(printed[3], lam) if r.is_real)
print("quartic roots:", roots)
print("(-3+sqrt13)/2 =", (-3 + np.sqrt(13)) / 2, " (9-sqrt37)/2 =", (9 - np.sqrt(37)) / 2)
m3, m4 = (sp.lambdify(lam, p) for p in printed[2:])
grid = np.linspace(-5, 10, 15001)
pos = grid[(m3(grid) > 0) & (m4(grid) > 0)]
print("positive region approx:", pos[0], pos[-1])

# unbounded family a_n = (n+1) X, b_n = q (n+1) Y: T = 0, Q = q X^{-1} Y, R = Id
mu = minors(limit_form(Z2, q * X.inv() * Y, I2, X, lam))
print("unbounded minors:", mu)
print("q roots of last minor:", sorted(float(r) for r in sp.solve(mu[3], q) if r.is_real))
print("3 - sqrt5 =", 3 - np.sqrt(5))

# geometric family a_n = 2^n X: Carleman sum and its limit
s = sum(1 / (2**n * nX) for n in range(200))
print("carleman partial sum:", s, " limit 2/||a_0|| =", 2 / nX)
