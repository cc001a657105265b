"""Heuristic checks of the hypotheses under which both algorithms draw J(G).

Nothing here is a proof.  Julia sets are seen only through rasters built
from a random backward orbit plus a cloud of repelling fixed points, and
the exceptional set only through a bounded breadth-first backward orbit.
Every report is flagged ``heuristic``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from ..moebius import apply_array, classify, fixed_points
from ..random_backward import ChainConfig, RandomOrbit, random_backward_orbit
from ..raster import RasterSet, RenderConfig, rasterize
from ..semigroup import GeneratorSet, inverse_semigroup, word_map
from ..sphere import PointIndex, canonical
from .report import ConvergenceReport, point_str
from .sets import FixedPointCloud, directed_hausdorff, fixed_point_cloud, interior_cells, well_separated_count

FINITE = "finite-suspected"
NOT_FINITE = "not-finite"
INCONCLUSIVE = "inconclusive"


@dataclass
class ExceptionalResult:
    status: str
    points: np.ndarray  # backward orbit found so far
    depth_reached: int


def exceptional_orbit_heuristic(
    G: GeneratorSet, z, depth: int = 10, size_bound: int = 64, tol: float = 1e-9
) -> ExceptionalResult:
    """Breadth-first backward orbit G^{-1}(z) with coincidence tolerance ``tol``.

    Finite-suspected when no new points appear before ``depth`` levels while
    the orbit has at most ``size_bound`` points.
    """
    known = canonical([z])
    frontier = known
    for level in range(1, depth + 1):
        cand = canonical(np.concatenate([apply_array(inv, frontier) for inv in G.inverses]))
        fresh = []
        for p in cand:
            pool = canonical(list(known) + fresh)
            if PointIndex(pool).distances([p])[0] > tol:
                fresh.append(p)
        if not fresh:
            return ExceptionalResult(FINITE, known, level)
        known = canonical(list(known) + fresh)
        if known.size > size_bound:
            return ExceptionalResult(NOT_FINITE, known, level)
        frontier = canonical(fresh)
    return ExceptionalResult(INCONCLUSIVE, known, depth)


@dataclass
class JuliaEstimate:
    raster: RasterSet
    orbit: RandomOrbit | None
    cloud: FixedPointCloud | None
    seed_point: complex


def choose_seed_point(G: GeneratorSet) -> complex:
    """A repelling fixed point of a generator with an infinite backward orbit, if any."""
    repelling = []
    for m in G.maps:
        if classify(m).loxodromic:
            repelling += fixed_points(m).of_kind("repelling")
    for p in repelling:
        if exceptional_orbit_heuristic(G, p, depth=6).status != FINITE:
            return p
    return repelling[0] if repelling else 0j


def julia_raster(
    G: GeneratorSet,
    steps: int = 200_000,
    resolution: int = 256,
    rng_seed: int = 0,
    burn_in: int = 100,
    cloud_len: int = 6,
    seed_point=None,
) -> JuliaEstimate:
    """Raster estimate of J(G).

    Union of a random backward orbit with the repelling and parabolic fixed
    points of words up to ``cloud_len``; the orbit alone crawls toward
    parabolic points far too slowly to reach them.
    """
    a = choose_seed_point(G) if seed_point is None else seed_point
    orbit = random_backward_orbit(G, a, ChainConfig(steps, burn_in, rng_seed))
    parts = [orbit.points[burn_in:]]
    cloud = None
    if cloud_len:
        cloud = fixed_point_cloud(G, cloud_len, "repelling")
        parts += [cloud.points, fixed_point_cloud(G, cloud_len, "parabolic").points]
    raster = rasterize(np.concatenate(parts), RenderConfig(resolution))
    return JuliaEstimate(raster, orbit, cloud, complex(a))


def exceptional_candidates(G: GeneratorSet, word_len: int = 2) -> np.ndarray:
    """Fixed points of all word maps up to ``word_len``, deduplicated."""
    pts = []
    for n in range(1, word_len + 1):
        for word in product(range(G.k), repeat=n):
            m = word_map(G, word)
            if m.is_identity():
                continue
            pts += [fp.point for fp in fixed_points(m).points]
    return _unique(pts)


def precondition_advisor(
    G: GeneratorSet,
    steps: int = 200_000,
    resolution: int = 256,
    rng_seed: int = 0,
    cloud_len: int = 6,
    e_depth: int = 10,
    e_size: int = 64,
) -> ConvergenceReport:
    """Which sufficient condition (if any) suggests J_ker(G^{-1}) is empty."""
    Gi = inverse_semigroup(G)
    JG = julia_raster(G, steps, resolution, rng_seed, cloud_len=cloud_len).raster
    JGi = julia_raster(Gi, steps, resolution, rng_seed + 1, cloud_len=cloud_len).raster
    cd = JG.cell_diameter
    rep = ConvergenceReport(
        f"precondition advisor: {G.name or 'G'}",
        heuristic=True,
        metadata={"steps": steps, "resolution": resolution, "rng_seed": rng_seed, "cell_diameter": cd},
    )

    classes = [classify(m).value for m in G.maps]
    all_lox = all(classify(m).loxodromic for m in G.maps)
    rep.add("generators_loxodromic", "pass" if all_lox else "fail", classes=classes)

    e_sets, inconclusive = [], 0
    for z in exceptional_candidates(G):
        res = exceptional_orbit_heuristic(G, z, e_depth, e_size)
        if res.status == FINITE:
            e_sets.append(res.points)
        elif res.status == INCONCLUSIVE:
            inconclusive += 1
    e_points = _unique(np.concatenate(e_sets)) if e_sets else canonical([])

    def inside(J: RasterSet, pts) -> np.ndarray:
        return J.distances(pts) <= 2 * cd if len(pts) else np.zeros(0, dtype=bool)

    e_in_JGi = [s for s in e_sets if inside(JGi, s).all()]
    e_in_JG = e_points[inside(JG, e_points)] if e_points.size else e_points
    rep.add(
        "exceptional_set_heuristic",
        "evidence" if e_sets else ("inconclusive" if inconclusive else "none"),
        statistic=float(e_points.size),
        points=[point_str(p) for p in e_points],
        inconclusive_candidates=inconclusive,
    )

    diff = directed_hausdorff(JG, JGi)
    diff_nonempty = diff > 2 * cd
    e_cap_JGi_empty = not e_in_JGi
    if diff_nonempty and e_cap_JGi_empty:
        v51 = "inconclusive" if inconclusive else "supported"
    else:
        v51 = "fails"
    rep.add(
        "difference_criterion",
        v51,
        statistic=diff,
        tolerance=2 * cd,
        difference_nonempty=bool(diff_nonempty),
        exceptional_meets_julia_inverse=not e_cap_JGi_empty,
    )

    disk_cells = _in_disk_cells(JG)
    coverage = float(JG.occupied[disk_cells].mean())
    n_int = interior_cells(JGi)
    v52 = "supported" if coverage < 0.95 and e_cap_JGi_empty and n_int > 0 else "fails"
    rep.add("interior_criterion", v52, statistic=float(n_int), coverage_of_julia=coverage, interior_cells=n_int)

    gap = float(JGi.index.distances(JG.centers).min())
    many = well_separated_count(JGi.centers, 3 * cd) >= 3
    disjoint = gap > 2 * cd
    rep.add("disjointness_criterion", "supported" if many and disjoint else "fails", statistic=gap, tolerance=2 * cd,
            at_least_three_points=bool(many), disjoint=bool(disjoint))
    rep.add("thick_attractor_criterion", "supported" if disjoint and all_lox else "fails", statistic=gap,
            tolerance=2 * cd)

    jker_pts = _unique(np.concatenate(e_in_JGi)) if e_in_JGi else canonical([])
    rep.add(
        "jker_inverse_nonempty",
        "evidence" if jker_pts.size else "none",
        statistic=float(jker_pts.size),
        points=[point_str(p) for p in jker_pts],
    )
    rep.add(
        "exceptional_meets_julia",
        "evidence" if e_in_JG.size else "none",
        statistic=float(e_in_JG.size),
        points=[point_str(p) for p in e_in_JG],
    )
    rep.metadata["jker_empty_supported_by"] = [
        c.name for c in rep.checks if c.name.endswith("_criterion") and c.verdict == "supported"
    ]
    return rep


def _in_disk_cells(J: RasterSet) -> np.ndarray:
    R = J.resolution
    x = -1 + (np.arange(R) + 0.5) * 2 / R
    disk = (x[None, :] ** 2 + x[:, None] ** 2) <= 1
    return np.broadcast_to(disk, J.grids.shape)


def _unique(pts, tol: float = 1e-9) -> np.ndarray:
    out: list[complex] = []
    for p in canonical(pts):
        if not out or PointIndex(out).distances([p])[0] > tol:
            out.append(p)
    return canonical(out)
