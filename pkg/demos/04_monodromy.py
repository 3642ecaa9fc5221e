"""Individual periods are multivalued in t; their determinant is not.

Carry a cycle basis of x^3 + y^3 - 0.3x - 0.6y once around a small loop
enclosing one critical value.  The basis comes back transformed by a
monodromy matrix (a Picard-Lefschetz transvection), so periods change,
but that matrix has determinant one.
"""
import numpy as np

from abeldet import BivarPoly, critical_data, period_matrix, prepare_basis, transport_t

x, y = BivarPoly.x(), BivarPoly.y()
h = x ** 3 + y ** 3 - 0.3 * x - 0.6 * y

crit = critical_data(h).values
a = crit[np.argmin(np.abs(crit - 0.24))]
radius = 0.06
t0 = a + radius

basis = transport_t(prepare_basis(h), [1.0, t0])
loop = a + radius * np.exp(2j * np.pi * np.linspace(0, 1, 97))
loop[0] = loop[-1] = t0
after = transport_t(basis, loop)

p0 = period_matrix(h, t0, basis, 1e-12)
p1 = period_matrix(h, t0, after, 1e-12)
print(f"critical value enclosed: {a:.6f}")
print(f"det before: {p0.det:.15g}")
print(f"det after:  {p1.det:.15g}")

# express the new cycles in the old ones: an integer matrix
M = np.linalg.solve(p0.entries, p1.entries)
print("monodromy matrix (rounded):")
print(np.round(M.real).astype(int))
print("distance to integers:", float(np.max(np.abs(M - np.round(M.real)))))
