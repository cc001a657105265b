"""CSV formats for atoms, orbits and fixed-point clouds.

Floats are written with ``repr`` so a file round-trips exactly and two runs
with equal inputs give identical bytes.  Infinity is written as an
``is_infinity`` flag with empty coordinates.
"""

from __future__ import annotations

import csv
import io
from pathlib import Path

import numpy as np

from .full_backward import WeightedPointSet
from .random_backward import RandomOrbit
from .semigroup import GeneratorSet
from .sphere import INF, canonical, inf_mask

ATOM_COLUMNS = ("word", "re", "im", "is_infinity", "weight")
ORBIT_COLUMNS = ("step", "index", "re", "im", "is_infinity")
CLOUD_COLUMNS = ("word", "re", "im", "is_infinity", "kind")


def _coords(z: complex, inf: bool) -> list[str]:
    return ["", "", "1"] if inf else [repr(float(z.real) + 0.0), repr(float(z.imag) + 0.0), "0"]


def _point(row: dict) -> complex:
    if row["is_infinity"] == "1":
        return INF
    return complex(float(row["re"]), float(row["im"]))


def _writer(buf):
    return csv.writer(buf, lineterminator="\n")


def atoms_csv(mu: WeightedPointSet, G: GeneratorSet | None = None) -> str:
    buf = io.StringIO()
    w = _writer(buf)
    w.writerow(ATOM_COLUMNS)
    words = mu.words()
    inf = inf_mask(mu.points)
    for i, (z, wt) in enumerate(zip(mu.points, mu.weights)):
        word = "" if words is None else (G.word_label(words[i]) if G else ".".join(map(str, words[i])))
        w.writerow([word, *_coords(z, inf[i]), repr(float(wt))])
    return buf.getvalue()


def orbit_csv(orbit: RandomOrbit) -> str:
    """One row per step; ``index`` is the 1-based generator index."""
    buf = io.StringIO()
    w = _writer(buf)
    w.writerow(ORBIT_COLUMNS)
    inf = inf_mask(orbit.points)
    for m, (j, z) in enumerate(zip(orbit.indices, orbit.points), start=1):
        w.writerow([m, int(j) + 1, *_coords(z, inf[m - 1])])
    return buf.getvalue()


def cloud_csv(points, words, kind: str, G: GeneratorSet) -> str:
    buf = io.StringIO()
    w = _writer(buf)
    w.writerow(CLOUD_COLUMNS)
    pts = canonical(points)
    inf = inf_mask(pts)
    for z, word, flag in zip(pts, words, inf):
        w.writerow([G.word_label(word), *_coords(z, flag), kind])
    return buf.getvalue()


def read_atoms(path) -> tuple[list[str], WeightedPointSet]:
    rows = list(csv.DictReader(io.StringIO(Path(path).read_text())))
    pts = [_point(r) for r in rows]
    return [r["word"] for r in rows], WeightedPointSet(pts, [float(r["weight"]) for r in rows])


def read_orbit(path) -> tuple[np.ndarray, np.ndarray]:
    """(0-based indices, points) from an orbit CSV."""
    rows = list(csv.DictReader(io.StringIO(Path(path).read_text())))
    idx = np.array([int(r["index"]) - 1 for r in rows], dtype=np.int64)
    return idx, canonical([_point(r) for r in rows])


def write_text(path, text: str) -> Path:
    path = Path(path)
    try:
        path.write_text(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc
    return path
