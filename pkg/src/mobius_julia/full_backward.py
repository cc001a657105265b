"""Full backward iteration: exact measures mu_n^{a,b} built by repeated pullback."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.spatial import cKDTree

from .moebius import apply_array
from .semigroup import GeneratorSet, ProbabilityVector
from .sphere import INF, as_point, canonical, inf_mask, to_sphere

DEFAULT_ATOM_BUDGET = 20_000_000


class BudgetExceeded(RuntimeError):
    """The requested expansion would exceed the configured atom budget."""


@dataclass
class WeightedPointSet:
    """A finitely supported probability measure on the sphere.

    ``codes`` optionally holds, for each atom, the backward word that produced
    it encoded as a base-k integer of fixed length ``depth``.
    """

    points: np.ndarray
    weights: np.ndarray
    codes: np.ndarray | None = None
    k: int | None = None
    depth: int | None = None
    stats: dict = field(default_factory=dict)

    def __post_init__(self):
        self.points = canonical(self.points)
        self.weights = np.asarray(self.weights, dtype=float).reshape(-1)
        if self.points.shape != self.weights.shape:
            raise ValueError("points and weights must have the same length")
        if self.weights.size == 0:
            raise ValueError("a probability measure needs at least one atom")
        if (self.weights <= 0).any():
            raise ValueError("atom weights must be positive")
        if abs(self.weights.sum() - 1) >= 1e-9:
            raise ValueError(f"total mass {self.weights.sum()!r} is not 1")

    @classmethod
    def dirac(cls, z) -> "WeightedPointSet":
        return cls(np.array([as_point(z)]), np.array([1.0]), np.zeros(1, dtype=np.int64), depth=0)

    @classmethod
    def uniform(cls, points) -> "WeightedPointSet":
        pts = canonical(points)
        return cls(pts, np.full(pts.size, 1.0 / pts.size))

    def __len__(self) -> int:
        return self.points.size

    @property
    def mass(self) -> float:
        return float(self.weights.sum())

    def merged(self) -> "WeightedPointSet":
        """Merge atoms at exactly the same point; order of first occurrence kept."""
        return coalesce(self, 0.0)

    def words(self) -> list[tuple[int, ...]] | None:
        if self.codes is None or self.k is None or self.depth is None:
            return None
        return [decode_word(int(c), self.k, self.depth) for c in self.codes]


def decode_word(code: int, k: int, depth: int) -> tuple[int, ...]:
    out = []
    for _ in range(depth):
        code, r = divmod(code, k)
        out.append(r)
    return tuple(reversed(out))


@dataclass(frozen=True)
class FullRunConfig:
    depth: int
    seed_point: complex = 0j
    b: ProbabilityVector | None = None
    coalesce_tol: float = 0.0
    weight_floor: float = 0.0
    atom_budget: int = DEFAULT_ATOM_BUDGET

    def __post_init__(self):
        if self.depth < 0:
            raise ValueError("depth must be >= 0")
        if self.coalesce_tol < 0 or self.weight_floor < 0:
            raise ValueError("coalesce_tol and weight_floor must be >= 0")
        object.__setattr__(self, "seed_point", as_point(self.seed_point))

    @property
    def approximate(self) -> bool:
        return self.coalesce_tol > 0 or self.weight_floor > 0


def pullback_step(G: GeneratorSet, b: ProbabilityVector, mu: WeightedPointSet) -> WeightedPointSet:
    """Apply T_b^*: each atom (z, w) becomes the k atoms (f_j^{-1}(z), b_j w).

    Children are laid out parent-major, so atoms stay in lexicographic word
    order.  Coincident children are not merged here (see ``merged``).
    """
    k = G.k
    if len(b) != k:
        raise ValueError("probability vector length does not match generator count")
    n = len(mu)
    pts = np.empty(n * k, dtype=np.complex128)
    for j, inv in enumerate(G.inverses):
        pts[j::k] = apply_array(inv, mu.points)
    weights = (mu.weights[:, None] * b.array[None, :]).reshape(-1)
    codes = None
    depth = None if mu.depth is None else mu.depth + 1
    if mu.codes is not None and depth is not None and depth * math.log2(k) < 62:
        codes = (mu.codes[:, None] * k + np.arange(k)[None, :]).reshape(-1)
    return WeightedPointSet(pts, weights, codes, k, depth, dict(mu.stats))


def full_backward_measure(G: GeneratorSet, cfg: FullRunConfig) -> WeightedPointSet:
    """mu_n^{a,b}; exact unless coalescing or a weight floor is configured."""
    b = cfg.b or G.uniform()
    if G.k ** cfg.depth > cfg.atom_budget and not cfg.approximate:
        raise BudgetExceeded(
            f"{G.k}^{cfg.depth} atoms exceed the budget of {cfg.atom_budget}; enable coalescing"
        )
    mu = WeightedPointSet.dirac(cfg.seed_point)
    mu.k = G.k
    merged = 0
    dropped = 0.0
    for _ in range(cfg.depth):
        if len(mu) * G.k > cfg.atom_budget:
            raise BudgetExceeded(f"level would hold {len(mu) * G.k} atoms (budget {cfg.atom_budget})")
        mu = pullback_step(G, b, mu)
        if cfg.weight_floor > 0:
            keep = mu.weights >= cfg.weight_floor
            lost = float(mu.weights[~keep].sum())
            if lost > 0:
                dropped += lost
                mu = _subset(mu, keep)
        if cfg.coalesce_tol > 0:
            before = len(mu)
            mu = coalesce(mu, cfg.coalesce_tol)
            merged += before - len(mu)
    mu.stats = {
        "depth": cfg.depth,
        "exact": not cfg.approximate,
        "coalesce_tol": cfg.coalesce_tol,
        "weight_floor": cfg.weight_floor,
        "merged_atoms": merged,
        "dropped_mass": dropped,
    }
    return mu


def _subset(mu: WeightedPointSet, keep: np.ndarray) -> WeightedPointSet:
    if not keep.any():
        raise ValueError("weight floor removed every atom")
    w = mu.weights[keep]
    codes = None if mu.codes is None else mu.codes[keep]
    return WeightedPointSet(mu.points[keep], w / w.sum(), codes, mu.k, mu.depth, dict(mu.stats))


def transition_operator_apply(
    G: GeneratorSet, b: ProbabilityVector, phi: Callable[[np.ndarray], np.ndarray], z
):
    """(T phi)(z) = sum_j b_j phi(f_j^{-1}(z)); ``z`` may be a point or an array."""
    scalar = np.ndim(z) == 0
    pts = canonical(np.atleast_1d(np.asarray(z, dtype=np.complex128)))
    total = np.zeros(pts.size)
    for bj, inv in zip(b.weights, G.inverses):
        total += bj * np.asarray(phi(apply_array(inv, pts)), dtype=float)
    return float(total[0]) if scalar else total


def coalesce(mu: WeightedPointSet, tol: float) -> WeightedPointSet:
    """Greedy merge of atoms closer than ``tol`` (chordal).

    Atoms are visited in order; each unassigned atom absorbs every unassigned
    atom within ``tol`` of it.  The merged atom sits at the weighted mean in
    the finite chart and carries the first member's word code.  Infinity only
    merges with infinity.  Passes repeat until no two atoms are within ``tol``.
    With ``tol == 0`` only exact duplicates merge.
    """
    if tol < 0:
        raise ValueError("tol must be >= 0")
    out = _merge_exact(mu)
    if tol == 0:
        return out
    while True:
        nxt = _greedy_pass(out, tol)
        if len(nxt) == len(out):
            return nxt
        out = nxt


def _merge_exact(mu: WeightedPointSet) -> WeightedPointSet:
    _, first, inv = np.unique(mu.points, return_index=True, return_inverse=True)
    if first.size == len(mu):
        return mu
    order = np.argsort(first, kind="stable")  # group ids in first-occurrence order
    rank = np.empty_like(order)
    rank[order] = np.arange(order.size)
    gid = rank[inv.reshape(-1)]
    w = np.bincount(gid, weights=mu.weights, minlength=order.size)
    reps = first[order]
    codes = None if mu.codes is None else mu.codes[reps]
    return WeightedPointSet(mu.points[reps], w / w.sum(), codes, mu.k, mu.depth, dict(mu.stats))


def _greedy_pass(mu: WeightedPointSet, tol: float) -> WeightedPointSet:
    n = len(mu)
    inf = inf_mask(mu.points)
    finite_idx = np.flatnonzero(~inf)
    cluster = np.full(n, -1, dtype=np.int64)
    if finite_idx.size:
        xyz = to_sphere(mu.points[finite_idx])
        tree = cKDTree(xyz)
        hoods = tree.query_ball_point(xyz, r=tol)
        for local, i in enumerate(finite_idx):
            if cluster[i] >= 0:
                continue
            cluster[i] = i
            nb = hoods[local]
            if len(nb) > 1:
                members = finite_idx[np.asarray(nb)]
                members = members[cluster[members] < 0]
                cluster[members] = i
    inf_idx = np.flatnonzero(inf)
    if inf_idx.size:
        cluster[inf_idx] = inf_idx[0]
    heads, gid = np.unique(cluster, return_inverse=True)  # heads sorted = first-member order
    gid = gid.reshape(-1)
    w = np.bincount(gid, weights=mu.weights, minlength=heads.size)
    pts = mu.points[heads].copy()
    fin = ~inf
    re = np.bincount(gid[fin], weights=(mu.weights * mu.points.real)[fin], minlength=heads.size)
    im = np.bincount(gid[fin], weights=(mu.weights * mu.points.imag)[fin], minlength=heads.size)
    head_fin = ~inf_mask(pts)
    pts[head_fin] = (re[head_fin] + 1j * im[head_fin]) / w[head_fin]
    pts[~head_fin] = INF
    codes = None if mu.codes is None else mu.codes[heads]
    return WeightedPointSet(pts, w / w.sum(), codes, mu.k, mu.depth, dict(mu.stats))

