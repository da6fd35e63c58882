"""Exact desk-scale certificates for iterated-preimage Galois towers of cubic
polynomials over Q: obstruction checks, ramification prime witnesses,
level-maximality certificates, stunted trees and multitrees, canonical and
gcd heights, and Frobenius cycle-type cross-validation.
"""

__version__ = "0.1.0"

from .maps import CubicMap, PolyMap, normalize_cubic
from .polynomials import UniPoly

__all__ = ["CubicMap", "PolyMap", "UniPoly", "normalize_cubic", "__version__"]
