"""Möbius maps z -> (az+b)/(cz+d): algebra, classification and fixed points."""

from __future__ import annotations

import cmath
import enum
from dataclasses import dataclass

import numpy as np

from .sphere import INF, SNAP_RADIUS, as_point, chordal_distance, inf_mask, is_inf

DET_TOL = 1e-12
IDENTITY_TOL = 1e-12
# entries smaller than this do not decide the canonical sign
_SIGN_EPS = 1e-14


class MapClass(str, enum.Enum):
    IDENTITY = "identity"
    PARABOLIC = "parabolic"
    ELLIPTIC = "elliptic"
    HYPERBOLIC = "hyperbolic"
    STRICTLY_LOXODROMIC = "strictly_loxodromic"

    @property
    def loxodromic(self) -> bool:
        return self in (MapClass.HYPERBOLIC, MapClass.STRICTLY_LOXODROMIC)


def _canonical_sign(entries):
    for x in entries:
        if abs(x) > _SIGN_EPS:
            if x.imag > 0 or (x.imag == 0 and x.real > 0):
                return entries
            return tuple(-e for e in entries)
    return entries


@dataclass(frozen=True)
class MoebiusMap:
    """A Möbius map stored as a determinant-one matrix with a canonical sign.

    The raw entries passed to the constructor may have any nonzero
    determinant; they are rescaled so ``ad - bc = 1`` and the sign is fixed
    so that the first nonzero entry of ``(a, b, c, d)`` has argument in
    ``[0, pi)``.
    """

    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        a, b, c, d = complex(self.a), complex(self.b), complex(self.c), complex(self.d)
        if not (cmath.isfinite(a) and cmath.isfinite(b) and cmath.isfinite(c) and cmath.isfinite(d)):
            raise ValueError("matrix entries must be finite")
        det = a * d - b * c
        scale = max(abs(a), abs(b), abs(c), abs(d))
        if scale == 0 or abs(det) <= DET_TOL * scale * scale:
            raise ValueError(f"singular matrix (det={det})")
        # already-normalized inputs are kept bit-for-bit
        if abs(det - 1) > 1e-13:
            r = cmath.sqrt(det)
            a, b, c, d = a / r, b / r, c / r, d / r
        a, b, c, d = _canonical_sign((a, b, c, d))
        self.__dict__.update(a=a, b=b, c=c, d=d)  # frozen: bypass __setattr__

    @classmethod
    def identity(cls) -> "MoebiusMap":
        return cls(1, 0, 0, 1)

    @classmethod
    def scaling(cls, k) -> "MoebiusMap":
        """The map z -> k z."""
        return cls(k, 0, 0, 1)

    @classmethod
    def translation(cls, t) -> "MoebiusMap":
        return cls(1, t, 0, 1)

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=np.complex128)

    @property
    def det(self) -> complex:
        return self.a * self.d - self.b * self.c

    @property
    def trace(self) -> complex:
        return self.a + self.d

    def __call__(self, z):
        return apply(self, z)

    def __matmul__(self, other: "MoebiusMap") -> "MoebiusMap":
        return compose(self, other)

    def inverse(self) -> "MoebiusMap":
        return inverse(self)

    def apply_array(self, z: np.ndarray) -> np.ndarray:
        return apply_array(self, z)

    def isclose(self, other: "MoebiusMap", tol: float = 1e-9) -> bool:
        p = (self.a, self.b, self.c, self.d)
        q = (other.a, other.b, other.c, other.d)
        return max(abs(x - y) for x, y in zip(p, q)) < tol or max(abs(x + y) for x, y in zip(p, q)) < tol

    def is_identity(self, tol: float = IDENTITY_TOL) -> bool:
        if abs(self.b) >= tol or abs(self.c) >= tol:
            return False
        return max(abs(self.a - 1), abs(self.d - 1)) < tol or max(abs(self.a + 1), abs(self.d + 1)) < tol

    def __str__(self) -> str:
        def fmt(x):
            return f"{x.real:.6g}{x.imag:+.6g}i"

        return f"[[{fmt(self.a)}, {fmt(self.b)}], [{fmt(self.c)}, {fmt(self.d)}]]"


def apply(m: MoebiusMap, z):
    """Evaluate m at a sphere point; infinity and poles are handled exactly."""
    z = as_point(z)
    if is_inf(z):
        if m.c == 0:
            return INF
        return as_point(m.a / m.c)
    num = m.a * z + m.b
    den = m.c * z + m.d
    if abs(num) > SNAP_RADIUS * abs(den):
        return INF
    return complex(num / den)


def apply_array(m: MoebiusMap, z: np.ndarray) -> np.ndarray:
    """Vectorized :func:`apply` over a complex128 point array."""
    z = np.asarray(z, dtype=np.complex128)
    inf = inf_mask(z)
    zf = np.where(inf, 0, z)
    num = m.a * zf + m.b
    den = m.c * zf + m.d
    big = np.abs(num) > SNAP_RADIUS * np.abs(den)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(big, INF, num / np.where(big, 1, den))
    if inf.any():
        out[inf] = apply(m, INF)
    return out


def compose(m1: MoebiusMap, m2: MoebiusMap) -> MoebiusMap:
    """The map m1 ∘ m2 (matrix product M1·M2)."""
    return MoebiusMap(
        m1.a * m2.a + m1.b * m2.c,
        m1.a * m2.b + m1.b * m2.d,
        m1.c * m2.a + m1.d * m2.c,
        m1.c * m2.b + m1.d * m2.d,
    )


def inverse(m: MoebiusMap) -> MoebiusMap:
    # the adjugate has the same determinant, so no rescaling happens and
    # inverse(inverse(m)) == m exactly
    return MoebiusMap(m.d, -m.b, -m.c, m.a)


def trace_squared_invariant(m: MoebiusMap) -> complex:
    """tr²[m] = tr(M)² / det(M), independent of the matrix representative."""
    return (m.a + m.d) ** 2 / m.det


def classify(m: MoebiusMap, tol: float = 1e-9) -> MapClass:
    if m.is_identity():
        return MapClass.IDENTITY
    t2 = trace_squared_invariant(m)
    if abs(t2 - 4) < tol:
        return MapClass.PARABOLIC
    if abs(t2.imag) < tol:
        if -tol < t2.real < 4:
            return MapClass.ELLIPTIC
        if t2.real > 4:
            return MapClass.HYPERBOLIC
    return MapClass.STRICTLY_LOXODROMIC


@dataclass(frozen=True)
class FixedPoint:
    point: complex
    multiplier: complex
    kind: str  # "attracting" | "repelling" | "neutral"


@dataclass(frozen=True)
class FixedPointReport:
    map_class: MapClass
    points: tuple[FixedPoint, ...]

    @property
    def parabolic(self) -> bool:
        return self.map_class is MapClass.PARABOLIC

    def of_kind(self, kind: str) -> list[complex]:
        return [fp.point for fp in self.points if fp.kind == kind]

    def residual(self, m: MoebiusMap) -> float:
        return max(chordal_distance(apply(m, fp.point), fp.point) for fp in self.points)


def _kind(multiplier: complex, tol: float) -> str:
    r = abs(multiplier)
    if abs(r - 1) <= tol:
        return "neutral"
    return "attracting" if r < 1 else "repelling"


def fixed_points(m: MoebiusMap, tol: float = 1e-9) -> FixedPointReport:
    """Fixed points of m with their multipliers.

    The multiplier at a fixed point whose eigenvalue is ``lam`` equals
    ``det / lam**2``; at infinity this is the derivative in the 1/z chart.
    Parabolic maps report their single (double) fixed point as neutral.
    """
    cls = classify(m, tol)
    if cls is MapClass.IDENTITY:
        raise ValueError("every point is fixed by the identity")
    if cls is MapClass.PARABOLIC:
        if abs(m.c) < 1e-14:
            p = INF
        else:
            p = as_point(-(m.d - m.a) / (2 * m.c))
        return FixedPointReport(cls, (FixedPoint(p, 1 + 0j, "neutral"),))
    det = m.det
    if abs(m.c) <= _SIGN_EPS * max(abs(m.a), abs(m.b), abs(m.d)):
        # z -> (az + b)/d fixes infinity (eigenvalue a) and b/(d - a) (eigenvalue d)
        pts = [FixedPoint(INF, det / m.a**2, _kind(det / m.a**2, tol)),
               FixedPoint(as_point(m.b / (m.d - m.a)), det / m.d**2, _kind(det / m.d**2, tol))]
        return FixedPointReport(cls, tuple(pts))
    # roots of c z^2 + (d - a) z - b = 0 without cancellation; the same
    # discriminant gives the eigenvalues, (tr - s)/2 at z1 and (tr + s)/2 at z2
    B = m.d - m.a
    s = cmath.sqrt(B * B + 4 * m.b * m.c)
    if abs(B + s) < abs(B - s):
        s = -s
    q = (B + s) / 2
    z1, z2 = as_point(-q / m.c), as_point(m.b / q)
    tr = m.a + m.d
    if abs(tr + s) >= abs(tr - s):
        lam2 = (tr + s) / 2
        lam1 = det / lam2
    else:
        lam1 = (tr - s) / 2
        lam2 = det / lam1
    pts = []
    for z, lam in ((z1, lam1), (z2, lam2)):
        mult = det / lam**2
        pts.append(FixedPoint(z, mult, _kind(mult, tol)))
    return FixedPointReport(cls, tuple(pts))


def random_moebius(rng: np.random.Generator, scale: float = 1.0) -> MoebiusMap:
    """A map with i.i.d. complex Gaussian matrix entries (test helper)."""
    while True:
        e = scale * (rng.standard_normal(4) + 1j * rng.standard_normal(4))
        if abs(e[0] * e[3] - e[1] * e[2]) > 1e-3 * scale * scale:
            return MoebiusMap(*e)
