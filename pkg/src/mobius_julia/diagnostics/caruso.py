"""Intersection checks for the Caruso family and a scan over beta."""

from __future__ import annotations

import csv
import hashlib
import io
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..raster import RasterSet
from ..semigroup import caruso, inverse_semigroup
from .advisor import julia_raster
from .report import ConvergenceReport, point_str
from .sets import directed_hausdorff, hausdorff_distance

_UNIT = (1, -1, 1j, -1j)


def canonical_beta(beta: complex) -> complex:
    """Representative of {beta, -beta}: Re > 0, or Re = 0 and Im > 0."""
    beta = complex(beta)
    if beta == 0:
        raise ValueError("beta must be nonzero")
    if beta.real < 0 or (beta.real == 0 and beta.imag < 0):
        beta = -beta
    return complex(beta.real + 0.0, beta.imag + 0.0)  # drop signed zeros


def known_intersections(beta: complex) -> tuple[complex, ...]:
    """Points common to J(S_beta) and J(S_beta') for the listed betas."""
    b = canonical_beta(beta)
    if b == 1 + 1j or b == 1 - 1j:
        return _UNIT
    if b in (2, 2j):
        return (b / 2, -b / 2)
    raise ValueError(f"no known intersection set for beta = {point_str(complex(beta))}")


@dataclass
class CarusoRasters:
    beta: complex
    forward: RasterSet  # J(S_beta)
    inverse: RasterSet  # J(S_beta')


def caruso_rasters(
    beta: complex, steps: int = 1_000_000, resolution: int = 512, rng_seed: int = 0, cloud_len: int = 8
) -> CarusoRasters:
    G = caruso(beta)
    J = julia_raster(G, steps, resolution, rng_seed, cloud_len=cloud_len).raster
    Ji = julia_raster(inverse_semigroup(G), steps, resolution, rng_seed + 1, cloud_len=cloud_len).raster
    return CarusoRasters(complex(beta), J, Ji)


def caruso_intersection_check(
    beta: complex,
    steps: int = 1_000_000,
    resolution: int = 512,
    rng_seed: int = 0,
    tol: float = 0.05,
    far_factor: float = 5.0,
    rasters: CarusoRasters | None = None,
) -> ConvergenceReport:
    """Each known intersection point near both rasters, and the rasters distinct."""
    points = known_intersections(beta)
    r = rasters or caruso_rasters(beta, steps, resolution, rng_seed)
    cd = r.forward.cell_diameter
    rep = ConvergenceReport(
        f"caruso intersection check: beta = {point_str(complex(beta))}",
        heuristic=True,
        metadata={"steps": steps, "resolution": r.forward.resolution, "rng_seed": rng_seed, "cell_diameter": cd},
    )
    d_fwd = r.forward.distances(points)
    d_inv = r.inverse.distances(points)
    for p, a, b in zip(points, d_fwd, d_inv):
        worst = max(a, b)
        rep.add(f"intersection {point_str(p)}", "pass" if worst <= tol else "fail", worst, tol,
                distance_forward=float(a), distance_inverse=float(b))
    gaps = (directed_hausdorff(r.forward, r.inverse), directed_hausdorff(r.inverse, r.forward))
    far = far_factor * cd
    rep.add("rasters_unequal", "pass" if min(gaps) > far else "fail", min(gaps), far,
            forward_to_inverse=gaps[0], inverse_to_forward=gaps[1])
    rep.metadata["verified_points"] = [
        point_str(p) for p, a, b in zip(points, d_fwd, d_inv) if max(a, b) <= tol
    ]
    return rep


@dataclass(frozen=True)
class ScanRow:
    beta: complex
    hausdorff: float
    equal_flag: bool
    chain_len: int
    raster_res: int
    master_seed: int


def beta_seed(master_seed: int, beta: complex) -> int:
    """Per-beta seed; beta and -beta get the same one."""
    b = canonical_beta(beta)
    h = hashlib.sha256(struct.pack("<qdd", master_seed, b.real, b.imag)).digest()
    return int.from_bytes(h[:8], "little")


def beta_grid(rect: tuple[float, float, float, float], step: float) -> list[complex]:
    """Row-major grid over (re0, re1, im0, im1), skipping beta = 0."""
    re0, re1, im0, im1 = rect
    if step <= 0 or re1 < re0 or im1 < im0:
        raise ValueError("need step > 0 and an ordered rectangle")
    n_re = int(np.floor((re1 - re0) / step + 1e-9)) + 1
    n_im = int(np.floor((im1 - im0) / step + 1e-9)) + 1
    grid = []
    for i in range(n_im):
        for j in range(n_re):
            b = complex(round(re0 + j * step, 12), round(im0 + i * step, 12))
            if b != 0:
                grid.append(b)
    return grid


def scan_point(beta: complex, steps: int, resolution: int, master_seed: int) -> ScanRow:
    r = caruso_rasters(canonical_beta(beta), steps, resolution, beta_seed(master_seed, beta), cloud_len=0)
    h = hausdorff_distance(r.forward, r.inverse)
    return ScanRow(complex(beta), h, h <= 2 * r.forward.cell_diameter, steps, resolution, master_seed)


def beta_scan(
    rect: tuple[float, float, float, float],
    step: float,
    steps: int = 100_000,
    resolution: int = 128,
    master_seed: int = 0,
    workers: int = 1,
) -> list[ScanRow]:
    """Hausdorff distance between J(S_beta) and J(S_beta') over a grid of beta."""
    grid = beta_grid(rect, step)
    run = lambda b: scan_point(b, steps, resolution, master_seed)  # noqa: E731
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            return list(pool.map(run, grid))  # map keeps grid order
    return [run(b) for b in grid]


SCAN_COLUMNS = ("beta_re", "beta_im", "hausdorff", "equal_flag", "chain_len", "raster_res", "master_seed")


def scan_csv(rows: list[ScanRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SCAN_COLUMNS)
    for r in rows:
        w.writerow([repr(r.beta.real), repr(r.beta.imag), repr(r.hausdorff), int(r.equal_flag),
                    r.chain_len, r.raster_res, r.master_seed])
    return buf.getvalue()
