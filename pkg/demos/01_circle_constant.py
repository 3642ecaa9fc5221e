"""The degree-two case: for h = x^2 + y^2 the period of y dx is the area pi.

The level curve x^2 + y^2 = t is a circle of area pi*t, so the 1x1 period
determinant is a degree-one polynomial in t with root at the single
critical value 0 and leading coefficient pi.
"""
import math

from abeldet import BivarPoly, C_of_H, fermat_basis, period_matrix, verify

x, y = BivarPoly.x(), BivarPoly.y()
h = x ** 2 + y ** 2

# one cycle: a loop around the two branch points x = +-1 on the t = 1 circle
pm = period_matrix(h, 1.0, fermat_basis(1))
print(f"period of y dx at t=1: {pm.entries[0, 0]:.15f}")
print(f"pi:                    {math.pi:.15f}")

# closed form for the constant: 2*pi*i * Sigma**(-1/2) with Sigma = -4
print("closed form C(H):", C_of_H(h.top()).both())

rep = verify(h)
print("fitted polynomial (ascending):", [f"{c:.6g}" for c in rep.coefficients])
print("verification passed:", rep.passed)
