"""Reference implementations that share no code with the package.

Exact rational arithmetic is used wherever the inputs allow it, so these
values are ground truth rather than a second floating-point opinion.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from itertools import product

INF = "inf"


def chordal(p, q) -> float:
    """2|p-q| / sqrt((1+|p|^2)(1+|q|^2)), with the limit form at infinity."""
    if p == INF and q == INF:
        return 0.0
    if p == INF or q == INF:
        z = q if p == INF else p
        return 2 / math.sqrt(1 + abs(z) ** 2)
    return 2 * abs(p - q) / math.sqrt((1 + abs(p) ** 2) * (1 + abs(q) ** 2))


def mobius(a, b, c, d, z):
    """(az+b)/(cz+d) on the extended line, exact for Fractions."""
    if z == INF:
        return INF if c == 0 else a / c
    den = c * z + d
    if den == 0:
        return INF
    return (a * z + b) / den


def caruso_preimage(beta: int, sign: int, z):
    """Inverse of z -> sign*beta + 1/z, namely z -> 1/(z - sign*beta)."""
    return mobius(0, 1, 1, -sign * beta, z)


def caruso_atoms(beta: int, depth: int, a=Fraction(0), weights=(Fraction(1, 2), Fraction(1, 2))):
    """All 2^depth backward words of caruso(beta) from a, as (word, point, weight).

    Word (i_1, ..., i_n) gives f_{i_n}^{-1} o ... o f_{i_1}^{-1}(a), generator 0
    is +beta and 1 is -beta.
    """
    out = []
    for word in product((0, 1), repeat=depth):
        z, w = a, Fraction(1)
        for j in word:
            z = caruso_preimage(beta, 1 if j == 0 else -1, z)
            w *= weights[j]
        out.append((word, z, w))
    return out


def trace_squared(a, b, c, d) -> complex:
    return (a + d) ** 2 / (a * d - b * c)


def reference_class(a, b, c, d, tol=1e-9) -> str:
    det = a * d - b * c
    s = cmath.sqrt(det)
    a, b, c, d = (x / s for x in (a, b, c, d))
    if max(abs(a - 1), abs(b), abs(c), abs(d - 1)) < 1e-12 or max(abs(a + 1), abs(b), abs(c), abs(d + 1)) < 1e-12:
        return "identity"
    t = (a + d) ** 2
    if abs(t - 4) < tol:
        return "parabolic"
    if abs(t.imag) < tol:
        if -tol < t.real < 4:
            return "elliptic"
        if t.real > 4:
            return "hyperbolic"
    return "strictly_loxodromic"


def quadratic_fixed_points(a, b, c, d):
    """Roots of c z^2 + (d - a) z - b = 0 (infinity when c = 0), cancellation-free form."""
    if c == 0:
        return [b / (d - a), INF]
    A, B, C = c, d - a, -b
    disc = cmath.sqrt(B * B - 4 * A * C)
    if abs(B + disc) < abs(B - disc):
        disc = -disc
    q = -(B + disc) / 2
    return [q / A, C / q]


def derivative(a, b, c, d, z) -> complex:
    """m'(z) = det / (cz+d)^2, or the derivative in the chart w = 1/z at infinity."""
    det = a * d - b * c
    if z == INF:
        # conjugate by w = 1/z: w -> (c + d w)/(a + b w), derivative at w = 0
        return det / a**2
    return det / (c * z + d) ** 2
