"""Command-line interface: ``mobius-julia <command> ...``.

Exit codes: 0 success, 2 invalid arguments, 3 budget exceeded, 4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

from . import io as csvio
from .diagnostics.advisor import precondition_advisor
from .diagnostics.caruso import beta_scan, caruso_intersection_check, caruso_rasters, scan_csv
from .diagnostics.report import ConvergenceReport, point_str
from .diagnostics.sets import KINDS, directed_hausdorff, fixed_point_cloud, hausdorff_distance
from .diagnostics.weak import weak_star_discrepancy
from .full_backward import BudgetExceeded, FullRunConfig, full_backward_measure
from .moebius import classify, fixed_points, trace_squared_invariant
from .random_backward import RNG_ALGORITHM, ChainConfig, empirical_measure, random_backward_orbit
from .raster import RenderConfig, rasterize, write_image
from .semigroup import GeneratorSet, NAMED, ProbabilityVector, dump_definition, load_definition, named_example, parse_complex
from .sphere import as_point

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

OUT_ENV = "MOBIUS_JULIA_OUT"
EXIT_OK, EXIT_USAGE, EXIT_BUDGET, EXIT_IO = 0, 2, 3, 4


class UsageError(ValueError):
    pass


def load_semigroup(source: str) -> tuple[GeneratorSet, ProbabilityVector]:
    """``name[:arg[:arg]]`` for a built-in example, otherwise a TOML definition file."""
    name, _, rest = source.partition(":")
    if name in NAMED:
        G = named_example(name, *(rest.split(":") if rest else ()))
        return G, G.uniform()
    if not Path(source).is_file():
        raise UsageError(f"{source!r} is neither a built-in example ({', '.join(NAMED)}) nor a file")
    return load_definition(source)


def _floats(text: str, n: int | None = None) -> tuple[float, ...]:
    vals = tuple(float(x) for x in str(text).split(","))
    if n is not None and len(vals) != n:
        raise UsageError(f"expected {n} comma-separated numbers, got {text!r}")
    return vals


@dataclass
class RunSpec:
    """Resolved description of one invocation, echoed as ``runspec.json``."""

    command: str
    semigroup: str
    algorithm: str | None
    config: dict
    render: dict | None
    outputs: list[str] = field(default_factory=list)
    master_seed: int | None = None
    definition: str | None = None

    def write(self, out: Path) -> Path:
        return csvio.write_text(out / "runspec.json", json.dumps(asdict(self), indent=2, sort_keys=True) + "\n")


def _render_cfg(args, coloring: str) -> RenderConfig:
    window = _floats(args.window, 4) if args.window else None
    return RenderConfig(args.resolution, window, args.coloring or coloring, args.gamma)


def _out_dir(args) -> Path:
    out = Path(args.out or os.environ.get(OUT_ENV) or ".")
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {out}: {exc.strerror or exc}") from exc
    return out


def _probabilities(args, G: GeneratorSet, b: ProbabilityVector) -> ProbabilityVector:
    if not args.b:
        return b
    b = ProbabilityVector(_floats(args.b))
    if len(b) != G.k:
        raise UsageError(f"--b has {len(b)} entries for {G.k} generators")
    return b


def _finish(spec: RunSpec, out: Path, files: dict[str, str | bytes]) -> None:
    for name, data in files.items():
        csvio.write_text(out / name, data)
        spec.outputs.append(name)
    spec.outputs.append("runspec.json")
    spec.write(out)
    for name in spec.outputs:
        print(f"wrote {out / name}")


def _report_files(rep: ConvergenceReport, stem: str) -> dict[str, str]:
    return {f"{stem}.txt": rep.to_text(), f"{stem}.csv": rep.to_csv()}


# ------------------------------------------------------------- commands


def cmd_classify(args) -> int:
    G, _ = load_semigroup(args.definition)
    rows = [("generator", "class", "tr^2", "fixed points")]
    for lab, m in zip(G.labels, G.maps):
        cls = classify(m)
        tr2 = trace_squared_invariant(m)
        if cls.value == "identity":
            fps = "all"
        else:
            fps = "; ".join(f"{point_str(p.point)} ({p.kind})" for p in fixed_points(m).points)
        rows.append((lab, cls.value, _fmt_c(tr2), fps))
    widths = [max(len(r[i]) for r in rows) for i in range(3)]
    for r in rows:
        print("  ".join(c.ljust(w) for c, w in zip(r[:3], widths)) + "  " + r[3])
    return EXIT_OK


def _fmt_c(z: complex) -> str:
    z = complex(round(z.real, 12) + 0.0, round(z.imag, 12) + 0.0)
    return f"{z.real:.12g}" if z.imag == 0 else point_str(z)


def cmd_full(args) -> int:
    G, b = load_semigroup(args.semigroup)
    b = _probabilities(args, G, b)
    cfg = FullRunConfig(args.depth, as_point(parse_complex(args.seed_point)), b, args.coalesce, args.weight_floor,
                        args.budget)
    render = _render_cfg(args, "log-density")
    out = _out_dir(args)
    mu = full_backward_measure(G, cfg)
    spec = RunSpec("full", args.semigroup, "full", _cfg_dict(cfg), asdict(render), definition=dump_definition(G, b))
    spec.config["stats"] = mu.stats
    write_image(rasterize(mu, render), out / "full.pgm")
    spec.outputs.append("full.pgm")
    _finish(spec, out, {"atoms.csv": csvio.atoms_csv(mu, G)})
    print(f"{len(mu)} atoms at depth {args.depth}")
    return EXIT_OK


def _cfg_dict(cfg) -> dict:
    d = {}
    for k, v in asdict(cfg).items():
        if isinstance(v, complex):
            v = point_str(v)
        elif isinstance(v, dict) and "weights" in v:
            v = list(v["weights"])
        d[k] = v
    return d


def cmd_random(args) -> int:
    G, b = load_semigroup(args.semigroup)
    b = _probabilities(args, G, b)
    cfg = ChainConfig(args.steps, args.burn_in, args.rng_seed, b)
    render = _render_cfg(args, "log-density")
    out = _out_dir(args)
    orbit = random_backward_orbit(G, parse_complex(args.seed_point), cfg)
    spec = RunSpec("random", args.semigroup, "random", _cfg_dict(cfg), asdict(render),
                   master_seed=args.rng_seed, definition=dump_definition(G, b))
    spec.config["seed_point"] = point_str(orbit.seed_point)
    spec.config["rng"] = RNG_ALGORITHM
    write_image(rasterize(orbit.points[args.burn_in:], render), out / "random.pgm")
    spec.outputs.append("random.pgm")
    print(f"master seed: {args.rng_seed}")
    _finish(spec, out, {"orbit.csv": csvio.orbit_csv(orbit)})
    return EXIT_OK


def cmd_fixedpoints(args) -> int:
    G, b = load_semigroup(args.semigroup)
    render = _render_cfg(args, "binary")
    out = _out_dir(args)
    cloud = fixed_point_cloud(G, args.max_word_len, args.kind, args.budget)
    spec = RunSpec("fixedpoints", args.semigroup, "fixedpoints",
                   {"max_word_len": args.max_word_len, "kind": args.kind, "skipped": cloud.skipped}, asdict(render),
                   definition=dump_definition(G, b))
    files = {"fixedpoints.csv": csvio.cloud_csv(cloud.points, cloud.words, args.kind, G)}
    if len(cloud):
        write_image(rasterize(cloud.points, render), out / "fixedpoints.pgm")
        spec.outputs.append("fixedpoints.pgm")
    else:
        print("no fixed points of that kind; no image written")
    _finish(spec, out, files)
    print(f"{len(cloud)} {args.kind} fixed points")
    return EXIT_OK


def compare_report(G: GeneratorSet, b: ProbabilityVector, a, depth: int, steps: int, burn_in: int, rng_seed: int,
                   max_word_len: int, render: RenderConfig, coalesce_tol: float = 0.0) -> ConvergenceReport:
    """Full method vs random method vs repelling fixed points."""
    mu = full_backward_measure(G, FullRunConfig(depth, a, b, coalesce_tol))
    orbit = random_backward_orbit(G, a, ChainConfig(steps, burn_in, rng_seed, b))
    emp = empirical_measure(orbit, burn_in)
    rep = ConvergenceReport(f"compare: {G.name or 'G'}", metadata={
        "depth": depth, "steps": steps, "burn_in": burn_in, "rng_seed": rng_seed,
        "seed_point": point_str(as_point(a)), "atoms": len(mu), "resolution": render.resolution,
    })
    disc = weak_star_discrepancy(mu, emp)
    aliased = disc == 0.0 and steps - burn_in < len(mu)
    rep.add("weak_star_full_vs_random", "fail" if aliased else "pass", disc,
            note="zero discrepancy with fewer samples than atoms means the pipelines are aliased" if aliased else "")
    R_full = rasterize(mu, render)
    R_rand = rasterize(orbit.points[burn_in:], render)
    cd = R_full.cell_diameter
    rep.add("hausdorff_full_vs_random", "none", hausdorff_distance(R_full, R_rand), 3 * cd)
    cloud = fixed_point_cloud(G, max_word_len, "repelling")
    if len(cloud):
        rep.add("fixed_points_to_random", "none", float(R_rand.distances(cloud.points).max()), 3 * cd,
                count=len(cloud))
        rep.add("fixed_points_to_full", "none", directed_hausdorff(cloud.points, R_full), 3 * cd)
    return rep


def cmd_compare(args) -> int:
    G, b = load_semigroup(args.semigroup)
    b = _probabilities(args, G, b)
    render = _render_cfg(args, "binary")
    out = _out_dir(args)
    rep = compare_report(G, b, as_point(parse_complex(args.seed_point)), args.depth, args.steps, args.burn_in,
                         args.rng_seed, args.max_word_len, render, args.coalesce)
    spec = RunSpec("compare", args.semigroup, None, dict(rep.metadata), asdict(render), master_seed=args.rng_seed,
                   definition=dump_definition(G, b))
    print("\n".join(rep.summary_lines()))
    _finish(spec, out, _report_files(rep, "compare"))
    return EXIT_OK if rep.passed else 1


def cmd_advisor(args) -> int:
    G, b = load_semigroup(args.semigroup)
    out = _out_dir(args)
    rep = precondition_advisor(G, args.steps, args.resolution, args.rng_seed, args.max_word_len)
    spec = RunSpec("advisor", args.semigroup, None, dict(rep.metadata), None, master_seed=args.rng_seed,
                   definition=dump_definition(G, b))
    print("heuristic report (not a proof)")
    print("\n".join(rep.summary_lines()))
    supported = rep.metadata["jker_empty_supported_by"]
    print("J_ker(G^-1) empty supported by: " + (", ".join(supported) if supported else "nothing"))
    _finish(spec, out, _report_files(rep, "advisor"))
    return EXIT_OK


def cmd_betascan(args) -> int:
    rect = _floats(args.rect, 4)
    out = _out_dir(args)
    rows = beta_scan(rect, args.step, args.steps, args.resolution, args.master_seed, args.workers)
    spec = RunSpec("betascan", "caruso", "random",
                   {"rect": list(rect), "step": args.step, "steps": args.steps, "workers": args.workers},
                   {"resolution": args.resolution}, master_seed=args.master_seed)
    _finish(spec, out, {"betascan.csv": scan_csv(rows)})
    print(f"{len(rows)} grid points, {sum(r.equal_flag for r in rows)} flagged equal")
    return EXIT_OK


def cmd_caruso(args) -> int:
    beta = parse_complex(args.beta)
    out = _out_dir(args)
    render = _render_cfg(args, "binary")
    rasters = caruso_rasters(beta, args.steps, render.resolution, args.rng_seed)
    rep = caruso_intersection_check(beta, args.steps, render.resolution, args.rng_seed, args.tol, rasters=rasters)
    write_image(rasters.forward, out / "caruso_forward.pgm")
    write_image(rasters.inverse, out / "caruso_inverse.pgm")
    spec = RunSpec("caruso", f"caruso:{args.beta}", "random", dict(rep.metadata), asdict(rasters.forward.config),
                   ["caruso_forward.pgm", "caruso_inverse.pgm"], master_seed=args.rng_seed)
    print("\n".join(rep.summary_lines()))
    print("verified intersection points: " + ", ".join(rep.metadata["verified_points"]))
    _finish(spec, out, _report_files(rep, "caruso"))
    return EXIT_OK if rep.passed else 1


# --------------------------------------------------------------- parser


def _common(p: argparse.ArgumentParser, render: bool = True) -> None:
    p.add_argument("--out", help=f"output directory (default ${OUT_ENV} or .)")
    p.add_argument("--config", help="TOML file of option defaults; flags override it")
    if render:
        p.add_argument("--resolution", type=int, default=1024)
        p.add_argument("--window", help="x0,x1,y0,y1 (default: dual chart)")
        p.add_argument("--coloring", choices=("binary", "log-density"))
        p.add_argument("--gamma", type=float, default=2.2)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mobius-julia", description="Julia sets of Moebius semigroups.")
    sub = parser.add_subparsers(dest="command", required=True)
    src_help = f"built-in example ({', '.join(NAMED)}; e.g. caruso:1+1i) or TOML file"

    p = sub.add_parser("classify", help="class, tr^2 and fixed points of each generator")
    p.add_argument("definition", help=src_help)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("full", help="full backward iteration")
    p.add_argument("--semigroup", required=True, help=src_help)
    p.add_argument("--seed-point", default="0")
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--b", help="comma-separated probabilities")
    p.add_argument("--coalesce", type=float, default=0.0)
    p.add_argument("--weight-floor", type=float, default=0.0)
    p.add_argument("--budget", type=int, default=FullRunConfig.__dataclass_fields__["atom_budget"].default)
    _common(p)
    p.set_defaults(func=cmd_full)

    p = sub.add_parser("random", help="random backward iteration")
    p.add_argument("--semigroup", required=True, help=src_help)
    p.add_argument("--seed-point", default="0")
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--burn-in", type=int, default=100)
    p.add_argument("--rng-seed", "--master-seed", dest="rng_seed", type=int, default=0)
    p.add_argument("--b", help="comma-separated probabilities")
    _common(p)
    p.set_defaults(func=cmd_random)

    p = sub.add_parser("fixedpoints", help="fixed points of all words up to a length")
    p.add_argument("--semigroup", required=True, help=src_help)
    p.add_argument("--max-word-len", type=int, required=True)
    p.add_argument("--kind", choices=KINDS, default="repelling")
    p.add_argument("--budget", type=int, default=1_000_000)
    _common(p)
    p.set_defaults(func=cmd_fixedpoints)

    p = sub.add_parser("compare", help="full vs random vs fixed-point cloud")
    p.add_argument("--semigroup", required=True, help=src_help)
    p.add_argument("--seed-point", default="0")
    p.add_argument("--depth", type=int, default=12)
    p.add_argument("--steps", type=int, default=200_000)
    p.add_argument("--burn-in", type=int, default=100)
    p.add_argument("--rng-seed", "--master-seed", dest="rng_seed", type=int, default=0)
    p.add_argument("--max-word-len", type=int, default=6)
    p.add_argument("--b", help="comma-separated probabilities")
    p.add_argument("--coalesce", type=float, default=0.0)
    _common(p)
    p.set_defaults(func=cmd_compare, resolution=512)

    p = sub.add_parser("advisor", help="heuristic checks for J_ker(G^-1) = empty")
    p.add_argument("--semigroup", required=True, help=src_help)
    p.add_argument("--steps", type=int, default=200_000)
    p.add_argument("--resolution", type=int, default=256)
    p.add_argument("--rng-seed", "--master-seed", dest="rng_seed", type=int, default=0)
    p.add_argument("--max-word-len", type=int, default=6)
    _common(p, render=False)
    p.set_defaults(func=cmd_advisor)

    p = sub.add_parser("betascan", help="compare J(S_beta) and J(S_beta') over a grid of beta")
    p.add_argument("--rect", required=True, help="re0,re1,im0,im1")
    p.add_argument("--step", type=float, required=True)
    p.add_argument("--steps", type=int, default=100_000)
    p.add_argument("--resolution", type=int, default=128)
    p.add_argument("--master-seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    _common(p, render=False)
    p.set_defaults(func=cmd_betascan)

    p = sub.add_parser("caruso", help="images of J(S_beta), J(S_beta') and the intersection check")
    p.add_argument("--beta", required=True)
    p.add_argument("--steps", type=int, default=1_000_000)
    p.add_argument("--rng-seed", "--master-seed", dest="rng_seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=0.05)
    _common(p)
    p.set_defaults(func=cmd_caruso, resolution=512)
    return parser


def _config_path(argv: list[str]) -> str | None:
    for i, tok in enumerate(argv):
        if tok == "--config" and i + 1 < len(argv):
            return argv[i + 1]
        if tok.startswith("--config="):
            return tok.split("=", 1)[1]
    return None


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> argparse.Namespace:
    path = _config_path(argv)
    subparsers = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    sub = subparsers.choices.get(argv[0]) if argv else None
    if path is None or sub is None:
        return parser.parse_args(argv)
    try:
        with open(path, "rb") as fh:
            doc = tomllib.load(fh)
    except OSError as exc:
        raise OSError(f"cannot read config {path}: {exc.strerror or exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise UsageError(f"{path}: {exc}") from exc
    defaults = {k.replace("-", "_"): v for k, v in doc.items()}
    unknown = sorted(set(defaults) - {a.dest for a in sub._actions})
    if unknown:
        raise UsageError(f"{path}: unknown option(s) {', '.join(unknown)}")
    for a in sub._actions:
        if a.dest in defaults:
            a.required = False
    sub.set_defaults(**defaults)
    return parser.parse_args(argv)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = _apply_config(parser, argv)
        return args.func(args)
    except SystemExit as exc:  # argparse
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"error: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, IndexError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
