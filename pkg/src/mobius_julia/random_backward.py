"""Random backward iteration (the chaos game) as a seeded Markov chain.

Random streams are Philox generators keyed by ``SeedSequence(rng_seed,
spawn_key=(chain,))``; chain 0 is the single-run stream.  One uniform double
is consumed per step and mapped to a generator index by inverse CDF, so
``(G, a, b, n, rng_seed, chain)`` pins the orbit on every platform.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numba
import numpy as np

from .full_backward import WeightedPointSet
from .semigroup import GeneratorSet, ProbabilityVector
from .sphere import SNAP_RADIUS, as_point

RNG_ALGORITHM = "philox4x64-10/seedsequence"


@dataclass(frozen=True)
class ChainConfig:
    length: int
    burn_in: int = 100
    rng_seed: int = 0
    b: ProbabilityVector | None = None
    chain_count: int = 1

    def __post_init__(self):
        if self.length < 1:
            raise ValueError("chain length must be >= 1")
        if not 0 <= self.burn_in < self.length:
            raise ValueError(f"burn_in must satisfy 0 <= burn_in < length, got {self.burn_in}")
        if self.chain_count < 1:
            raise ValueError("chain_count must be >= 1")
        if self.rng_seed < 0:
            raise ValueError("rng_seed must be a non-negative integer")


@dataclass
class RandomOrbit:
    seed_point: complex
    indices: np.ndarray  # 0-based generator index chosen at each step
    points: np.ndarray  # z_1, ..., z_n
    rng_seed: int
    chain: int = 0

    def __len__(self) -> int:
        return self.points.size


def make_rng(rng_seed: int, chain: int = 0) -> np.random.Generator:
    ss = np.random.SeedSequence(rng_seed, spawn_key=(chain,))
    return np.random.Generator(np.random.Philox(ss))


def sample_index(b: ProbabilityVector, rng: np.random.Generator) -> int:
    """Draw j with probability b_j from a single uniform (inverse CDF)."""
    return int(_indices_from_uniforms(b, np.array([rng.random()]))[0])


def sample_indices(b: ProbabilityVector, rng: np.random.Generator, n: int) -> np.ndarray:
    return _indices_from_uniforms(b, rng.random(n))


def _indices_from_uniforms(b: ProbabilityVector, u: np.ndarray) -> np.ndarray:
    idx = np.searchsorted(b.cumulative, u, side="right")
    return np.minimum(idx, len(b) - 1).astype(np.int64)


@numba.njit(cache=True, nogil=True)
def _walk(z0, start_inf, idx, mats, snap):
    n = idx.shape[0]
    out = np.empty(n, np.complex128)
    inf_val = complex(np.inf, 0.0)
    z = z0
    at_inf = start_inf
    for m in range(n):
        j = idx[m]
        a = mats[j, 0]
        b = mats[j, 1]
        c = mats[j, 2]
        d = mats[j, 3]
        if at_inf:
            if c != 0:
                num = a
                den = c
                if abs(num) > snap * abs(den):
                    at_inf = True
                else:
                    z = num / den
                    at_inf = False
        else:
            num = a * z + b
            den = c * z + d
            if abs(num) > snap * abs(den):
                at_inf = True
            else:
                z = num / den
        out[m] = inf_val if at_inf else z
    return out


def walk(G: GeneratorSet, a, indices: np.ndarray) -> np.ndarray:
    """Points z_1..z_n of the backward orbit of ``a`` along a fixed index sequence."""
    a = as_point(a)
    start_inf = bool(np.isinf(a.real))
    z0 = 0j if start_inf else a
    idx = np.ascontiguousarray(indices, dtype=np.int64)
    if idx.size and (idx.min() < 0 or idx.max() >= G.k):
        raise IndexError("generator index out of range")
    return _walk(z0, start_inf, idx, G.inverse_matrices(), SNAP_RADIUS)


def random_backward_orbit(G: GeneratorSet, a, cfg: ChainConfig, chain: int = 0) -> RandomOrbit:
    b = cfg.b or G.uniform()
    if len(b) != G.k:
        raise ValueError("probability vector length does not match generator count")
    rng = make_rng(cfg.rng_seed, chain)
    idx = sample_indices(b, rng, cfg.length)
    return RandomOrbit(as_point(a), idx, walk(G, a, idx), cfg.rng_seed, chain)


def run_ensemble(G: GeneratorSet, a, cfg: ChainConfig, workers: int | None = None) -> list[RandomOrbit]:
    """``cfg.chain_count`` independent chains on streams 0, 1, ...; result order is stream order."""
    chains = range(cfg.chain_count)
    if workers and workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            return list(pool.map(lambda c: random_backward_orbit(G, a, cfg, c), chains))
    return [random_backward_orbit(G, a, cfg, c) for c in chains]


def empirical_measure(orbit: RandomOrbit, burn_in: int = 0) -> WeightedPointSet:
    """Uniform measure on z_{burn_in+1}, ..., z_n, coincident points merged."""
    n = len(orbit)
    if not 0 <= burn_in < n:
        raise ValueError(f"burn_in must satisfy 0 <= burn_in < {n}")
    pts, counts = np.unique(orbit.points[burn_in:], return_counts=True)
    return WeightedPointSet(pts, counts / (n - burn_in))
