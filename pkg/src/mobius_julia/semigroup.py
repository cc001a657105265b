"""Finitely generated Möbius semigroups with a fixed, ordered generating set."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import numpy as np

from .moebius import MoebiusMap, apply, compose, inverse
from .sphere import as_point

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib


@dataclass(frozen=True)
class ProbabilityVector:
    weights: tuple[float, ...]

    def __post_init__(self):
        w = tuple(float(x) for x in self.weights)
        if not w:
            raise ValueError("probability vector must be nonempty")
        if any(not (x > 0) for x in w):
            raise ValueError(f"all weights must be positive, got {w}")
        if abs(math.fsum(w) - 1) >= 1e-12:
            raise ValueError(f"weights must sum to 1, got sum {math.fsum(w)!r}")
        object.__setattr__(self, "weights", w)

    @classmethod
    def uniform(cls, k: int) -> "ProbabilityVector":
        return cls((1.0 / k,) * k)

    def __len__(self) -> int:
        return len(self.weights)

    def __iter__(self):
        return iter(self.weights)

    @property
    def array(self) -> np.ndarray:
        return np.array(self.weights)

    @property
    def cumulative(self) -> np.ndarray:
        cdf = np.cumsum(self.weights)
        cdf[-1] = 1.0
        return cdf


Word = tuple[int, ...]
"""Generator indices (0-based) in the order they are applied."""


@dataclass(frozen=True)
class GeneratorSet:
    maps: tuple[MoebiusMap, ...]
    labels: tuple[str, ...] = ()
    name: str = ""
    _inverses: tuple[MoebiusMap, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        maps = tuple(self.maps)
        if not maps:
            raise ValueError("a semigroup needs at least one generator")
        labels = tuple(self.labels) or tuple(f"f{j + 1}" for j in range(len(maps)))
        if len(labels) != len(maps):
            raise ValueError("one label per generator is required")
        object.__setattr__(self, "maps", maps)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "_inverses", tuple(inverse(m) for m in maps))

    @property
    def k(self) -> int:
        return len(self.maps)

    @property
    def inverses(self) -> tuple[MoebiusMap, ...]:
        return self._inverses

    def inverse_matrices(self) -> np.ndarray:
        """Shape (k, 4) array of inverse-map entries (a, b, c, d)."""
        return np.array([[m.a, m.b, m.c, m.d] for m in self._inverses], dtype=np.complex128)

    def word_label(self, word: Sequence[int]) -> str:
        return ".".join(self.labels[j] for j in word)

    def uniform(self) -> ProbabilityVector:
        return ProbabilityVector.uniform(self.k)

    def same_maps(self, other: "GeneratorSet") -> bool:
        return self.maps == other.maps


def inverse_semigroup(G: GeneratorSet) -> GeneratorSet:
    labels = tuple(lab[:-3] if lab.endswith("^-1") else lab + "^-1" for lab in G.labels)
    name = G.name[:-3] if G.name.endswith("^-1") else (G.name + "^-1" if G.name else "")
    return GeneratorSet(G.inverses, labels, name)


def evaluate_backward_word(G: GeneratorSet, word: Sequence[int], a):
    """z_w = f_{w[-1]}^{-1} ∘ ... ∘ f_{w[0]}^{-1}(a), by repeated point application."""
    z = a
    for j in word:
        if not 0 <= j < G.k:
            raise IndexError(f"generator index {j} out of range for k={G.k}")
        z = apply(G.inverses[j], z)
    return as_point(z)


def word_map(G: GeneratorSet, word: Sequence[int]) -> MoebiusMap:
    """The composed map g_w = f_{w[0]} ∘ ... ∘ f_{w[-1]} (so g_w^{-1} sends a to z_w)."""
    m = MoebiusMap.identity()
    for j in word:
        m = compose(m, G.maps[j])
    return m


# ---------------------------------------------------------------- examples


def caruso(beta) -> GeneratorSet:
    """S_beta = <beta + 1/z, -beta + 1/z>."""
    beta = complex(beta)
    if beta == 0:
        raise ValueError("beta must be nonzero")
    f = MoebiusMap(beta, 1, 1, 0)
    g = MoebiusMap(-beta, 1, 1, 0)
    return GeneratorSet((f, g), ("f", "g"), f"caruso({_fmt_complex(beta)})")


def rotation(theta) -> GeneratorSet:
    """<e^{2 pi i theta} z>."""
    t = float(Fraction(theta)) if isinstance(theta, (str, Fraction)) else float(theta)
    if not math.isfinite(t):
        raise ValueError("theta must be finite")
    return GeneratorSet((MoebiusMap.scaling(cmath.exp(2j * math.pi * t)),), ("r",), f"rotation({theta})")


def dilation_pair() -> GeneratorSet:
    return GeneratorSet((MoebiusMap.scaling(2), MoebiusMap.scaling(0.5)), ("d2", "d1/2"), "dilation_pair")


def mixed_exceptional() -> GeneratorSet:
    """<2z, h> with h(z) = z/(2-z): attracting fixed point 0, repelling fixed point 1."""
    h = MoebiusMap(1, 0, -1, 2)
    return GeneratorSet((MoebiusMap.scaling(2), h), ("d2", "h"), "mixed_exceptional")


def disk_parabolics(t: float = 2.0) -> GeneratorSet:
    """Two parabolic automorphisms of the unit disk fixing 1 and -1.

    The first is the Cayley conjugate of z -> z + t on the upper half-plane;
    the second is its conjugate by z -> -z.
    """
    cayley = MoebiusMap(1, -1j, 1, 1j)
    p1 = compose(compose(cayley, MoebiusMap.translation(t)), inverse(cayley))
    flip = MoebiusMap(1j, 0, 0, -1j)  # z -> -z
    p2 = compose(compose(flip, p1), flip)
    return GeneratorSet((p1, p2), ("p+", "p-"), "disk_parabolics")


def disk_extension(G: GeneratorSet, a) -> GeneratorSet:
    """Append z -> a z with |a| > 1 to a generating set of disk automorphisms."""
    a = complex(a)
    if not abs(a) > 1:
        raise ValueError("the appended dilation needs |a| > 1")
    return GeneratorSet(
        G.maps + (MoebiusMap.scaling(a),),
        G.labels + ("a",),
        f"disk_extension({G.name or 'G'}, {_fmt_complex(a)})",
    )


def named_example(name: str, *args) -> GeneratorSet:
    if name == "rotation":
        return rotation(*(args or ("1/3",)))
    if name == "dilation_pair":
        return dilation_pair()
    if name == "mixed_exceptional":
        return mixed_exceptional()
    if name == "disk_parabolics":
        return disk_parabolics(*(float(x) for x in args))
    if name == "disk_extension":
        a = complex(parse_complex(args[0])) if args else 2.0
        return disk_extension(disk_parabolics(), a)
    if name == "caruso":
        return caruso(parse_complex(args[0]) if args else 2)
    raise ValueError(f"unknown example {name!r}")


NAMED = ("rotation", "dilation_pair", "mixed_exceptional", "disk_parabolics", "disk_extension", "caruso")


def parse_complex(s) -> complex:
    if not isinstance(s, str):
        return complex(s)
    t = s.strip().replace(" ", "").replace("I", "i").replace("i", "j")
    # accept "2i" / "1+1i" / "i" style input
    if t in ("j", "+j"):
        t = "1j"
    elif t == "-j":
        t = "-1j"
    t = t.replace("+j", "+1j").replace("-j", "-1j")
    return complex(t)


def _fmt_complex(z: complex) -> str:
    z = complex(z)
    if z.imag == 0:
        return f"{z.real:g}"
    if z.real == 0:
        return f"{z.imag:g}i"
    return f"{z.real:g}{z.imag:+g}i"


# ------------------------------------------------------- definition files


def load_definition(path) -> tuple[GeneratorSet, ProbabilityVector]:
    """Read a TOML semigroup definition.

    Schema::

        name = "caruso-2"            # optional
        k = 2
        probabilities = [0.5, 0.5]   # optional, defaults to uniform

        [[generator]]
        label = "f"                  # optional
        a = [2.0, 0.0]               # [re, im] of each matrix entry
        b = [1.0, 0.0]
        c = [1.0, 0.0]
        d = [0.0, 0.0]
    """
    path = Path(path)
    with path.open("rb") as fh:
        doc = tomllib.load(fh)
    return definition_from_dict(doc, source=str(path))


def definition_from_dict(doc: dict, source: str = "<dict>") -> tuple[GeneratorSet, ProbabilityVector]:
    gens = doc.get("generator")
    if not gens:
        raise ValueError(f"{source}: no [[generator]] tables")
    k = int(doc.get("k", len(gens)))
    if k != len(gens):
        raise ValueError(f"{source}: k = {k} but {len(gens)} generators listed")
    maps, labels = [], []
    for j, g in enumerate(gens):
        try:
            entries = [complex(float(g[e][0]), float(g[e][1])) for e in "abcd"]
        except (KeyError, IndexError, TypeError) as exc:
            raise ValueError(f"{source}: generator {j + 1} needs a, b, c, d as [re, im]") from exc
        maps.append(MoebiusMap(*entries))
        labels.append(str(g.get("label", f"f{j + 1}")))
    G = GeneratorSet(tuple(maps), tuple(labels), str(doc.get("name", Path(source).stem)))
    probs = doc.get("probabilities")
    b = ProbabilityVector(tuple(probs)) if probs is not None else ProbabilityVector.uniform(k)
    if len(b) != k:
        raise ValueError(f"{source}: {len(b)} probabilities for {k} generators")
    return G, b


def dump_definition(G: GeneratorSet, b: ProbabilityVector | None = None) -> str:
    lines = [f'name = "{G.name}"', f"k = {G.k}"]
    if b is not None:
        lines.append("probabilities = [" + ", ".join(repr(x) for x in b.weights) + "]")
    for m, lab in zip(G.maps, G.labels):
        lines += ["", "[[generator]]", f'label = "{lab}"']
        for e in "abcd":
            z = getattr(m, e)
            lines.append(f"{e} = [{z.real!r}, {z.imag!r}]")
    return "\n".join(lines) + "\n"

