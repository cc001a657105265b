"""Set-level checks against rasterized Julia set approximations."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..full_backward import BudgetExceeded
from ..moebius import MapClass, apply_array, compose, fixed_points
from ..random_backward import RandomOrbit
from ..raster import RasterSet
from ..semigroup import GeneratorSet
from ..sphere import PointIndex, canonical, chordal_distances

DEFAULT_WORD_BUDGET = 1_000_000
KINDS = ("repelling", "attracting", "parabolic")


def _point_set(x) -> np.ndarray:
    if isinstance(x, RasterSet):
        pts = x.centers
    else:
        pts = canonical(x)
    if pts.size == 0:
        raise ValueError("set is empty")
    return pts


def directed_hausdorff(A, B) -> float:
    """max over a in A of d(a, B)."""
    b_index = B.index if isinstance(B, RasterSet) else PointIndex(_point_set(B))
    return float(b_index.distances(_point_set(A)).max())


def hausdorff_distance(A, B) -> float:
    """Symmetric chordal Hausdorff distance (rasters compare by occupied cell centers)."""
    return max(directed_hausdorff(A, B), directed_hausdorff(B, A))


@dataclass
class OrbitDistances:
    distances: np.ndarray
    tail_max: float
    tail_median: float
    head_median: float  # over steps (n/10, 2n/10]


def orbit_to_julia_distance(orbit: RandomOrbit, J: RasterSet, tail_fraction: float = 0.1) -> OrbitDistances:
    d = J.distances(orbit.points)
    n = d.size
    tail = d[n - max(1, int(round(n * tail_fraction))) :]
    head = d[n // 10 : max(n // 10 + 1, 2 * n // 10)]
    return OrbitDistances(d, float(tail.max()), float(np.median(tail)), float(np.median(head)))


@dataclass
class FixedPointCloud:
    points: np.ndarray
    words: list[tuple[int, ...]]
    kind: str
    skipped: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return self.points.size


def fixed_point_cloud(
    G: GeneratorSet, max_word_len: int, kind: str = "repelling", budget: int = DEFAULT_WORD_BUDGET
) -> FixedPointCloud:
    """Fixed points of the requested kind of every word map of length 1..L.

    The word (i_1, ..., i_n) stands for f_{i_1} ∘ ... ∘ f_{i_n}.  Words whose
    class carries no fixed point of that kind are counted in ``skipped``.
    Parabolic points belong to J(G) and J(G^{-1}) alike.
    """
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}")
    if max_word_len < 1:
        raise ValueError("max_word_len must be >= 1")
    total = sum(G.k**n for n in range(1, max_word_len + 1))
    if total > budget:
        raise BudgetExceeded(f"{total} words exceed the budget of {budget}")
    skipped = {c.value: 0 for c in MapClass}
    pts, words = [], []
    level = [((j,), m) for j, m in enumerate(G.maps)]
    for n in range(1, max_word_len + 1):
        for word, m in level:
            try:
                rep = fixed_points(m)
            except ValueError:
                skipped[MapClass.IDENTITY.value] += 1
                continue
            wanted = rep.parabolic if kind == "parabolic" else rep.map_class.loxodromic
            if not wanted:
                skipped[rep.map_class.value] += 1
                continue
            for p in rep.of_kind("neutral" if kind == "parabolic" else kind):
                pts.append(p)
                words.append(word)
        if n < max_word_len:
            level = [(w + (j,), compose(m, f)) for w, m in level for j, f in enumerate(G.maps)]
    skipped = {k: v for k, v in skipped.items() if v}
    return FixedPointCloud(canonical(pts), words, kind, skipped)


def backward_invariance_check(G: GeneratorSet, J: RasterSet) -> float:
    """max over occupied cells z and generators j of d(f_j^{-1}(z), J)."""
    centers = J.centers
    return max(float(J.distances(apply_array(inv, centers)).max()) for inv in G.inverses)


def well_separated_count(points, separation: float, limit: int = 3) -> int:
    """Farthest-point count (capped at ``limit``) of points pairwise farther apart than ``separation``."""
    pts = canonical(points)
    if pts.size == 0:
        return 0
    nearest = chordal_distances(pts, pts[0])
    count = 1
    while count < limit:
        i = int(np.argmax(nearest))
        if nearest[i] <= separation:
            break
        count += 1
        nearest = np.minimum(nearest, chordal_distances(pts, pts[i]))
    return count


def interior_cells(J: RasterSet) -> int:
    """Number of occupied cells whose 8 neighbours (same chart) are all occupied."""
    occ = J.occupied
    inner = occ[:, 1:-1, 1:-1].copy()
    for dr in (-1, 0, 1):
        for dc in (-1, 0, 1):
            if dr or dc:
                inner &= occ[:, 1 + dr : occ.shape[1] - 1 + dr, 1 + dc : occ.shape[2] - 1 + dc]
    return int(inner.sum())
