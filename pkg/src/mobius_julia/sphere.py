"""Points of the Riemann sphere and the chordal metric.

A point is stored as a Python ``complex`` (or an element of a complex128
array).  The point at infinity is the single sentinel ``INF = complex(inf, 0)``;
every other value must have finite real and imaginary parts.
"""

from __future__ import annotations

import cmath
import math
from typing import Iterable

import numpy as np
from scipy.spatial import cKDTree

INF = complex(math.inf, 0.0)

# |z| above this is treated as infinity after a map is applied
SNAP_RADIUS = 1e15
# chordal distance below which two points are considered the same
POINT_TOL = 1e-12


def is_inf(z) -> bool:
    return math.isinf(z.real) or math.isinf(z.imag)


def as_point(z) -> complex:
    """Coerce ``z`` to a canonical sphere point.

    Accepts numbers and the strings ``"inf"``/``"infinity"``/``"∞"``.  Huge
    finite values are snapped to ``INF``; NaN is rejected.
    """
    if isinstance(z, str):
        s = z.strip().lower()
        if s in ("inf", "infinity", "∞", "+inf"):
            return INF
        z = complex(s.replace(" ", "").replace("i", "j"))
    z = complex(z)
    if cmath.isnan(z):
        raise ValueError("NaN is not a point of the sphere")
    if is_inf(z) or abs(z) > SNAP_RADIUS:
        return INF
    return z


def canonical(points) -> np.ndarray:
    """Complex128 copy of ``points`` with huge/infinite entries set to ``INF``."""
    z = np.array(points, dtype=np.complex128).reshape(-1)
    if np.isnan(z).any():
        raise ValueError("NaN is not a point of the sphere")
    with np.errstate(invalid="ignore", over="ignore"):
        big = ~np.isfinite(z) | (np.abs(z) > SNAP_RADIUS)
    z[big] = INF
    return z


def inf_mask(points: np.ndarray) -> np.ndarray:
    return np.isinf(points.real) | np.isinf(points.imag)


def chordal_distance(p, q) -> float:
    """Chordal distance ``2|p-q| / sqrt((1+|p|^2)(1+|q|^2))``, in ``[0, 2]``."""
    pi, qi = is_inf(p), is_inf(q)
    if pi and qi:
        return 0.0
    if pi:
        return 2.0 / math.sqrt(1.0 + abs(q) ** 2)
    if qi:
        return 2.0 / math.sqrt(1.0 + abs(p) ** 2)
    return 2.0 * abs(p - q) / math.sqrt((1.0 + abs(p) ** 2) * (1.0 + abs(q) ** 2))


def chordal_distances(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Elementwise chordal distance of two broadcastable point arrays."""
    p = np.asarray(p, dtype=np.complex128)
    q = np.asarray(q, dtype=np.complex128)
    p, q = np.broadcast_arrays(p, q)
    pi, qi = inf_mask(p), inf_mask(q)
    pf = np.where(pi, 0, p)
    qf = np.where(qi, 0, q)
    ap2 = np.abs(pf) ** 2
    aq2 = np.abs(qf) ** 2
    out = 2.0 * np.abs(pf - qf) / np.sqrt((1.0 + ap2) * (1.0 + aq2))
    out = np.where(pi & ~qi, 2.0 / np.sqrt(1.0 + aq2), out)
    out = np.where(qi & ~pi, 2.0 / np.sqrt(1.0 + ap2), out)
    out = np.where(pi & qi, 0.0, out)
    return out


def to_sphere(points) -> np.ndarray:
    """Inverse stereographic projection onto the unit sphere in R^3.

    Euclidean distance between images equals chordal distance, so R^3
    nearest-neighbour structures give exact chordal answers.
    """
    z = np.asarray(points, dtype=np.complex128).reshape(-1)
    inf = inf_mask(z)
    zf = np.where(inf, 0, z)
    r2 = np.abs(zf) ** 2
    den = 1.0 + r2
    xyz = np.empty((z.size, 3))
    xyz[:, 0] = 2 * zf.real / den
    xyz[:, 1] = 2 * zf.imag / den
    xyz[:, 2] = (r2 - 1.0) / den
    xyz[inf] = (0.0, 0.0, 1.0)
    return xyz


def from_sphere(xyz: np.ndarray) -> np.ndarray:
    """Stereographic projection back to the extended plane."""
    xyz = np.atleast_2d(np.asarray(xyz, dtype=float))
    x, y, h = xyz[:, 0], xyz[:, 1], xyz[:, 2]
    with np.errstate(divide="ignore", invalid="ignore"):
        z = (x + 1j * y) / (1.0 - h)
    return canonical(np.where(h >= 1.0 - 1e-15, INF, z))


def distance_to_set(p, points: Iterable) -> float:
    """Chordal distance from ``p`` to the nearest member of a nonempty set."""
    pts = canonical(list(points) if not isinstance(points, np.ndarray) else points)
    if pts.size == 0:
        raise ValueError("distance to an empty set is undefined")
    return float(chordal_distances(as_point(p), pts).min())


class PointIndex:
    """Nearest-neighbour queries in the chordal metric over a fixed point set."""

    def __init__(self, points):
        pts = canonical(points)
        if pts.size == 0:
            raise ValueError("cannot index an empty point set")
        self.points = pts
        self._tree = cKDTree(to_sphere(pts))

    def __len__(self) -> int:
        return self.points.size

    def distances(self, query) -> np.ndarray:
        d, _ = self._tree.query(to_sphere(query), k=1)
        return np.minimum(d, 2.0)

    def nearest(self, query):
        d, i = self._tree.query(to_sphere(query), k=1)
        return np.minimum(d, 2.0), i
