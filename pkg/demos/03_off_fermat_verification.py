"""The determinant formula away from the Fermat locus.

For h = x^3 + y^3 - a x - b y the cycle basis is obtained by deforming the
Fermat basis along the straight coefficient path, then carried in t around
a circle of sample levels.  The sampled determinants must fit a quartic
whose roots are the critical values and whose leading coefficient is the
closed-form constant C(H).
"""
from abeldet import BivarPoly, VerifyConfig, critical_data, verify

x, y = BivarPoly.x(), BivarPoly.y()

for a, b in [(0.3, 0.6), (0.2 + 0.1j, 0.5)]:
    h = x ** 3 + y ** 3 - a * x - b * y
    rep = verify(h, VerifyConfig(), label=f"a={a}, b={b}")
    print(rep.polynomial)
    print("  critical values:", [f"{v:.6f}" for v in critical_data(h).values])
    print(f"  fit residual     {rep.fit_residual:.2e}")
    for value, root, dist, mult in rep.root_table:
        print(f"  critical {value:.6f}  fitted {root:.6f}  |diff| {dist:.1e}  x{mult}")
    print(f"  leading / C(H) = {rep.ratio:.12f} (sign {rep.sign:+d})")
    print("  passed:", rep.passed)
