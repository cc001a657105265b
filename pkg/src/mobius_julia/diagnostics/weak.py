"""Weak* comparisons of measures through a finite family of bump functions."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from ..full_backward import WeightedPointSet, pullback_step
from ..random_backward import RandomOrbit
from ..semigroup import GeneratorSet, ProbabilityVector
from ..sphere import canonical, from_sphere, to_sphere

_CHUNK = 1 << 16


def fibonacci_sphere(n: int) -> np.ndarray:
    """n nearly uniform points on the unit sphere (none at the poles)."""
    i = np.arange(n)
    h = 1 - (2 * i + 1) / n
    r = np.sqrt(1 - h * h)
    theta = i * math.pi * (3 - math.sqrt(5))
    return np.column_stack([r * np.cos(theta), r * np.sin(theta), h])


@dataclass(frozen=True)
class TestFunctionFamily:
    """Bumps phi_c(z) = exp(-d(z, c)^2 / s^2) around a set of centers."""

    centers: np.ndarray
    width: float = 0.35

    __test__ = False  # not a pytest class

    def __post_init__(self):
        c = canonical(self.centers)
        if c.size < 8:
            raise ValueError("a test family needs at least 8 members")
        if not self.width > 0:
            raise ValueError("width must be positive")
        object.__setattr__(self, "centers", c)

    @classmethod
    def default(cls, n: int = 64, width: float = 0.35) -> "TestFunctionFamily":
        return cls(from_sphere(fibonacci_sphere(n)), width)

    def __len__(self) -> int:
        return self.centers.size

    def evaluate(self, points) -> np.ndarray:
        """Matrix of phi_c(z), shape (len(points), len(family))."""
        return _bump_matrix(points, self.centers, self.width)

    def pairings(self, mu: WeightedPointSet) -> np.ndarray:
        """<phi_c, mu> for every member."""
        out = np.zeros(len(self))
        for s in range(0, len(mu), _CHUNK):
            out += mu.weights[s : s + _CHUNK] @ self.evaluate(mu.points[s : s + _CHUNK])
        return out

    def member(self, i: int) -> Callable[[np.ndarray], np.ndarray]:
        return bump(self.centers[i], self.width)


def _bump_matrix(points, centers, width: float) -> np.ndarray:
    x = to_sphere(points)
    c = to_sphere(centers)
    d2 = np.maximum(2.0 - 2.0 * (x @ c.T), 0.0)
    return np.exp(-d2 / width**2)


def bump(center, width: float = 0.35) -> Callable[[np.ndarray], np.ndarray]:
    c = canonical([center])
    return lambda z: _bump_matrix(z, c, width)[:, 0]


def integrate(phi: Callable[[np.ndarray], np.ndarray], mu: WeightedPointSet) -> float:
    """<phi, mu> = sum_i w_i phi(z_i)."""
    total = 0.0
    for s in range(0, len(mu), _CHUNK):
        vals = np.asarray(phi(mu.points[s : s + _CHUNK]), dtype=float)
        total += float(mu.weights[s : s + _CHUNK] @ vals)
    return total


def weak_star_discrepancy(
    mu1: WeightedPointSet, mu2: WeightedPointSet, family: TestFunctionFamily | None = None
) -> float:
    """max over the family of |<phi, mu1> - <phi, mu2>|."""
    family = family or TestFunctionFamily.default()
    return float(np.abs(family.pairings(mu1) - family.pairings(mu2)).max())


def pairwise_discrepancies(measures: Sequence[WeightedPointSet], family=None) -> np.ndarray:
    family = family or TestFunctionFamily.default()
    p = np.array([family.pairings(m) for m in measures])
    return np.abs(p[:, None, :] - p[None, :, :]).max(axis=-1)


def invariance_residual(
    G: GeneratorSet, b: ProbabilityVector, mu: WeightedPointSet, family: TestFunctionFamily | None = None
) -> float:
    """Distance between mu and its pullback T_b^* mu."""
    return weak_star_discrepancy(pullback_step(G, b, mu), mu, family)


def cesaro_convergence_check(
    orbit: RandomOrbit,
    phi: Callable[[np.ndarray], np.ndarray],
    mu_ref: WeightedPointSet,
    checkpoints: Sequence[int] | None = None,
) -> list[tuple[int, float]]:
    """Residuals |(1/N) sum_{j<=N} phi(z_j) - <phi, mu_ref>| at N = 10^2, 10^3, ..."""
    n = len(orbit)
    if n < 1000:
        raise ValueError("Cesàro check needs an orbit of length >= 1000")
    if checkpoints is None:
        checkpoints = [10**e for e in range(2, 20) if 10**e <= n]
    target = integrate(phi, mu_ref)
    partial = np.cumsum(np.asarray(phi(orbit.points), dtype=float))
    return [(N, abs(partial[N - 1] / N - target)) for N in checkpoints]
