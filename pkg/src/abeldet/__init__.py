"""Period determinants of Abelian integrals for plane polynomials with generic top part.

The determinant of the ``n**2 x n**2`` matrix of integrals of
``x**l y**(m+1) dx`` over a cycle basis of ``{h = t}`` is a polynomial
``C(H) prod (t - a_i)`` in ``t``; this package computes both sides.
"""
__version__ = "0.1.0"

from .closedform import C_of_H, SignAmbiguous, build_A, build_E, c_constant
from .cycles import CycleBasis, LiftedChain, deform_basis, fermat_basis, transport_t
from .parsing import parse_poly
from .periods import VerifyConfig, det_samples, period_matrix, prepare_basis, verify
from .polyring import BivarPoly, HomogeneousTop, critical_data, discriminant_sigma

__all__ = [
    "BivarPoly", "HomogeneousTop", "critical_data", "discriminant_sigma",
    "C_of_H", "SignAmbiguous", "build_A", "build_E", "c_constant",
    "CycleBasis", "LiftedChain", "deform_basis", "fermat_basis", "transport_t",
    "VerifyConfig", "det_samples", "period_matrix", "prepare_basis", "verify", "parse_poly",
]
