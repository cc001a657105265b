"""Occupancy/density rasters over sphere charts and portable-pixmap output.

Dual-chart mode uses two R x R grids over [-1, 1]^2: chart 0 holds points
with |z| <= 1 and chart 1 holds the rest through w = 1/z, so infinity lands
at the origin of chart 1.  Rows run top to bottom (row 0 is Im = +1).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np

from .full_backward import WeightedPointSet
from .sphere import PointIndex, canonical, inf_mask


@dataclass(frozen=True)
class RenderConfig:
    resolution: int = 1024
    window: tuple[float, float, float, float] | None = None  # (x0, x1, y0, y1); None = dual chart
    coloring: str = "binary"  # "binary" | "log-density"
    gamma: float = 2.2

    def __post_init__(self):
        if not 16 <= self.resolution <= 16384:
            raise ValueError("resolution must lie in [16, 16384]")
        if self.window is not None:
            x0, x1, y0, y1 = self.window
            if not (x1 > x0 and y1 > y0):
                raise ValueError("window must be nondegenerate")
        if self.coloring not in ("binary", "log-density"):
            raise ValueError(f"unknown coloring {self.coloring!r}")
        if self.gamma <= 0:
            raise ValueError("gamma must be positive")

    @property
    def mode(self) -> str:
        return "dual" if self.window is None else "window"


@dataclass(eq=False)
class RasterSet:
    grids: np.ndarray  # (charts, R, R) accumulated weight
    config: RenderConfig = field(default_factory=RenderConfig)

    @property
    def resolution(self) -> int:
        return self.grids.shape[-1]

    @property
    def cell_diameter(self) -> float:
        """Upper bound on the chordal diameter of one cell."""
        R = self.resolution
        if self.config.window is None:
            return 4 * math.sqrt(2) / R
        x0, x1, y0, y1 = self.config.window
        return 2 * math.hypot((x1 - x0) / R, (y1 - y0) / R)

    @property
    def total_weight(self) -> float:
        return float(self.grids.sum())

    @property
    def occupied(self) -> np.ndarray:
        return self.grids > 0

    @property
    def empty(self) -> bool:
        return not self.occupied.any()

    def __len__(self) -> int:
        return int(self.occupied.sum())

    def cell_centers(self, chart: np.ndarray, row: np.ndarray, col: np.ndarray) -> np.ndarray:
        R = self.resolution
        if self.config.window is None:
            x = -1 + (col + 0.5) * 2 / R
            y = 1 - (row + 0.5) * 2 / R
            w = x + 1j * y
            return np.where(chart == 0, w, 1 / w)
        x0, x1, y0, y1 = self.config.window
        return (x0 + (col + 0.5) * (x1 - x0) / R) + 1j * (y1 - (row + 0.5) * (y1 - y0) / R)

    @cached_property
    def centers(self) -> np.ndarray:
        """Centers of occupied cells, in (chart, row, col) order."""
        chart, row, col = np.nonzero(self.occupied)
        return canonical(self.cell_centers(chart, row, col))

    @cached_property
    def index(self) -> PointIndex:
        if self.empty:
            raise ValueError("raster has no occupied cells")
        return PointIndex(self.centers)

    def locate(self, points) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """(chart, row, col, inside) cell coordinates of each point."""
        return _locate(canonical(points), self.config)

    def distances(self, points) -> np.ndarray:
        """Chordal distance to the union of occupied cells.

        Points inside an occupied cell are at distance 0; others get the
        distance to the nearest occupied cell center.
        """
        pts = canonical(points)
        d = self.index.distances(pts)
        chart, row, col, inside = self.locate(pts)
        hit = np.zeros(pts.size, dtype=bool)
        hit[inside] = self.occupied[chart[inside], row[inside], col[inside]]
        d[hit] = 0.0
        return d


def _locate(z: np.ndarray, cfg: RenderConfig):
    R = cfg.resolution
    if cfg.window is None:
        inf = inf_mask(z)
        zf = np.where(inf, 0, z)
        outer = inf | (np.abs(zf) > 1)
        with np.errstate(divide="ignore", invalid="ignore"):
            w = np.where(outer, 1 / np.where(outer, zf, 1), zf)
        w[inf] = 0
        col = np.floor((w.real + 1) / 2 * R).astype(np.int64)
        row = np.floor((1 - w.imag) / 2 * R).astype(np.int64)
        np.clip(col, 0, R - 1, out=col)
        np.clip(row, 0, R - 1, out=row)
        return outer.astype(np.int64), row, col, np.ones(z.size, dtype=bool)
    x0, x1, y0, y1 = cfg.window
    inf = inf_mask(z)
    zf = np.where(inf, 0, z)
    fx = (zf.real - x0) / (x1 - x0) * R
    fy = (y1 - zf.imag) / (y1 - y0) * R
    inside = ~inf & (fx >= 0) & (fx <= R) & (fy >= 0) & (fy <= R)
    col = np.clip(np.floor(fx), 0, R - 1).astype(np.int64)
    row = np.clip(np.floor(fy), 0, R - 1).astype(np.int64)
    return np.zeros(z.size, dtype=np.int64), row, col, inside


def rasterize(data, cfg: RenderConfig | None = None) -> RasterSet:
    """Bin points (unit weight each) or a WeightedPointSet onto a raster."""
    cfg = cfg or RenderConfig()
    if isinstance(data, WeightedPointSet):
        pts, w = data.points, data.weights
    else:
        pts = canonical(data)
        w = np.ones(pts.size)
    if pts.size == 0:
        raise ValueError("nothing to rasterize")
    R = cfg.resolution
    charts = 2 if cfg.window is None else 1
    chart, row, col, inside = _locate(pts, cfg)
    if not inside.any():
        warnings.warn("every point lies outside the raster window; raster is empty", stacklevel=2)
    flat = (chart * R + row) * R + col
    grid = np.bincount(flat[inside], weights=w[inside], minlength=charts * R * R)
    return RasterSet(grid.reshape(charts, R, R), cfg)


def union(*rasters: RasterSet) -> RasterSet:
    cfg = rasters[0].config
    if any(r.config != cfg for r in rasters):
        raise ValueError("rasters must share a configuration")
    return RasterSet(sum(r.grids for r in rasters), cfg)


def to_pixels(raster: RasterSet) -> np.ndarray:
    """8-bit grayscale image: foreground dark on a white background."""
    g = raster.grids
    if raster.config.coloring == "binary" or raster.empty:
        level = (g > 0).astype(float)
    else:
        pos = g[g > 0]
        lo, hi = pos.min(), pos.max()
        with np.errstate(divide="ignore", invalid="ignore"):
            v = np.where(g > 0, np.log1p(g / lo) / np.log1p(hi / lo), 0.0)
        level = np.power(v, 1 / raster.config.gamma)
    pix = (255 - np.rint(255 * level)).astype(np.uint8)
    return np.concatenate(list(pix), axis=1)  # charts side by side


def write_image(raster: RasterSet, path) -> Path:
    """Write a binary PGM (P5).  Identical rasters give identical bytes."""
    path = Path(path)
    pix = to_pixels(raster)
    h, w = pix.shape
    try:
        with path.open("wb") as fh:
            fh.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
            fh.write(np.ascontiguousarray(pix).tobytes())
    except OSError as exc:
        raise OSError(f"cannot write image {path}: {exc.strerror or exc}") from exc
    return path


def read_image(path) -> np.ndarray:
    data = Path(path).read_bytes()
    parts = data.split(b"\n", 3)
    if parts[0] != b"P5":
        raise ValueError(f"{path}: not a binary PGM")
    w, h = (int(x) for x in parts[1].split())
    return np.frombuffer(parts[3], dtype=np.uint8).reshape(h, w)
