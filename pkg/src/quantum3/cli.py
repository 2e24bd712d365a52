"""Command-line interface: ``quantum3 <command> ...``.

Exit codes: 0 success, 1 validation or computation failure, 2 usage error or
unreadable file. With ``--json`` every command prints one JSON object carrying
``schema_version``.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass
from pathlib import Path

from . import builtins, category, diagram, statesum, surgery, triangulation
from .category import EPS

SCHEMA_VERSION = 1


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    tol: float = EPS
    seed: int = 0
    workers: int = 1
    json: bool = False

    def __post_init__(self):
        if not self.tol > 0:
            raise UsageError("--tol must be positive")
        if self.workers < 1:
            raise UsageError("--workers must be at least 1")


def _pair(z: complex) -> list[float]:
    return [z.real, z.imag]


def _fmt(z: complex, tol: float) -> str:
    if abs(z.imag) <= tol * max(1.0, abs(z)):
        return f"{z.real:.12g}"
    return f"{z.real:.12g}{z.imag:+.12g}j"


def _parse_complex(text: str) -> complex:
    try:
        parts = [float(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"cannot parse {text!r} as re,im") from None
    if len(parts) == 1:
        return complex(parts[0])
    if len(parts) == 2:
        return complex(*parts)
    raise UsageError(f"cannot parse {text!r} as re,im")


def _positive_int(text: str) -> int:
    val = int(text)
    if val <= 0:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return val


def _existing(path: str) -> Path:
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"{path}: no such file")
    return p


def load_cat(source: str):
    """Category from a data file, or a builtin name."""
    if not Path(source).exists() and source in builtins.NAMES:
        return builtins.builtin(source)
    return category.load_category(_existing(source))


def load_tri(source: str):
    """Triangulation from a file, or one of ``s3``, ``s1_x_s2``, ``lens_<p>``."""
    if not Path(source).exists():
        if source == "s3":
            return triangulation.sphere_s3()
        if source == "s1_x_s2":
            return triangulation.s1_x_s2()
        if source.startswith("lens_") and source[5:].isdigit():
            return triangulation.lens(int(source[5:]))
    return triangulation.load_triangulation(_existing(source))


def _require_modular(cat, what: str):
    if not isinstance(cat, category.ModularData):
        raise category.CategoryError(f"{what} needs braided data (rsym and twist)")
    return cat


# ---------------------------------------------------------------------------
# commands; each returns (exit code, JSON payload, text lines)


def cmd_validate(args, cfg):
    cat = load_cat(args.category)
    report = category.validate(cat, cfg.tol)
    payload = {"file": args.category, **report.to_json()}
    return (0 if report.ok else 1), payload, report.lines()


def cmd_builtin(args, cfg):
    cat = builtins.builtin(args.name)
    report = category.validate(cat, cfg.tol)
    if args.emit:
        category.save_category(cat, args.emit)
        lines = [f"wrote {args.name} to {args.emit}"]
    else:
        lines = [json.dumps(category.category_to_json(cat))]
    return 0, {"name": args.name, "emit": args.emit, "rank": cat.rank, "ok": report.ok}, lines


def cmd_tri(args, cfg):
    try:
        tri = load_tri(args.file)
    except triangulation.TriangulationError as exc:
        return 1, {"file": args.file, "ok": False, "violations": exc.violations}, \
            [f"violation: {v}" for v in exc.violations] + ["INVALID"]
    counts = tri.counts()
    if args.action == "validate":
        return 0, {"file": args.file, "ok": True, "counts": counts}, ["OK"]
    info = {"file": args.file, "counts": counts, "euler_characteristic": tri.euler_characteristic(),
            "orientation": {"+": tri.orientation.count(1), "-": tri.orientation.count(-1)},
            "vertices": list(tri.vertices)}
    lines = [f"{k}: {v}" for k, v in counts.items()]
    lines.append(f"euler characteristic: {info['euler_characteristic']}")
    return 0, info, lines


def cmd_tv(args, cfg):
    cat = load_cat(args.category)
    tri = load_tri(args.triangulation)
    res = statesum.turaev_viro(cat, tri, args.method, args.strategy, args.cap_states, args.cap_width)
    payload = {"category": args.category, "triangulation": args.triangulation, **res.to_json()}
    return 0, payload, [_fmt(res.value, cfg.tol)]


def cmd_eval(args, cfg):
    cat = _require_modular(load_cat(args.category), "eval")
    d, _ = diagram.load_diagram(_existing(args.diagram))
    omega = [x for x in args.omega.split(",") if x] if args.omega else []
    if omega:
        value = diagram.evaluate_kirby(cat, d, omega, cfg.workers)
    else:
        value = diagram.evaluate(cat, d)
    return 0, {"diagram": args.diagram, "omega": omega, "value": _pair(value)}, [_fmt(value, cfg.tol)]


def cmd_wrt(args, cfg):
    cat = _require_modular(load_cat(args.category), "wrt")
    p = surgery.load_presentation(_existing(args.presentation))
    res = surgery.wrt_details(cat, p, cfg.workers, cfg.tol)
    lines = [f"e+ = {res.e_plus}, e- = {res.e_minus}, nullity = {res.nullity}",
             f"bracket: {_fmt(res.bracket, cfg.tol)}", f"wrt: {_fmt(res.value, cfg.tol)}"]
    payload = {"presentation": args.presentation}
    if args.tau or args.sqrt_dim:
        root = _parse_complex(args.sqrt_dim) if args.sqrt_dim else complex(category.global_dim(cat)) ** 0.5
        surgery.check_sqrt_dim(cat, root)
        res.tau = complex(root ** (-res.nullity - 1) * res.value)
        payload["sqrt_dim"] = _pair(root)
        lines.append(f"tau: {_fmt(res.tau, cfg.tol)}")
    payload.update(res.to_json())
    return 0, payload, lines


def cmd_pachner_fuzz(args, cfg):
    tri = load_tri(args.file)
    seed = args.seed if args.seed is not None else cfg.seed
    rng = random.Random(seed)
    cat = load_cat(args.category) if args.category else None
    ref = statesum.tv_contract(cat, tri) if cat else None
    worst = 0.0
    history = []
    for step in range(args.moves):
        kind, target, tri = triangulation.random_move(tri, rng, args.max_tetrahedra)
        history.append([kind, int(target)])
        if cat is not None and ((step + 1) % args.check_every == 0 or step + 1 == args.moves):
            worst = max(worst, abs(statesum.tv_contract(cat, tri) - ref))
    ok = worst <= cfg.tol * max(1.0, abs(ref)) if cat else True
    payload = {"file": args.file, "seed": seed, "moves": history, "final_counts": tri.counts(), "ok": ok}
    lines = [f"applied {args.moves} moves (seed {seed}); final {tri.counts()}"]
    if cat is not None:
        payload.update(reference=_pair(ref), max_deviation=worst)
        lines.append(f"reference {_fmt(ref, cfg.tol)}, max deviation {worst:.3e}" + ("" if ok else "  FAIL"))
    if args.output:
        triangulation.save_triangulation(tri, args.output)
        lines.append(f"wrote {args.output}")
    return (0 if ok else 1), payload, lines


def cmd_verlinde(args, cfg):
    cat = _require_modular(load_cat(args.category), "verlinde")
    genera = args.genus if args.genus else [0, 1, 2, 3]
    values = {g: surgery.verlinde_dim(cat, g) for g in genera}
    payload = {"category": args.category, "values": {str(g): _pair(v) for g, v in values.items()}}
    return 0, payload, [f"g={g}: {_fmt(v, 1e-6)}" for g, v in values.items()]


# ---------------------------------------------------------------------------


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--tol", type=float, default=argparse.SUPPRESS, help=f"tolerance (default {EPS})")
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="random seed (default 0)")
    p.add_argument("--workers", type=int, default=argparse.SUPPRESS, help="worker threads (default 1)")
    p.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="emit one JSON object")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="quantum3", parents=[common],
                                     description="3-manifold invariants from fusion category data")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="check a category data file")
    p.add_argument("category")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("builtin", parents=[common], help="emit builtin category data")
    p.add_argument("name", choices=builtins.NAMES)
    p.add_argument("--emit", metavar="FILE")
    p.set_defaults(func=cmd_builtin)

    p = sub.add_parser("tri", parents=[common], help="triangulation checks")
    p.add_argument("action", choices=["validate", "info"])
    p.add_argument("file")
    p.set_defaults(func=cmd_tri)

    p = sub.add_parser("tv", parents=[common], help="state-sum invariant")
    p.add_argument("category")
    p.add_argument("triangulation")
    p.add_argument("--method", choices=["enumerate", "contract"], default="contract")
    p.add_argument("--strategy", choices=list(statesum.STRATEGIES), default="min-fill")
    p.add_argument("--cap-states", type=_positive_int, default=statesum.STATE_CAP)
    p.add_argument("--cap-width", type=_positive_int, default=None)
    p.set_defaults(func=cmd_tv)

    p = sub.add_parser("eval", parents=[common], help="evaluate a closed diagram")
    p.add_argument("category")
    p.add_argument("diagram")
    p.add_argument("--omega", metavar="ID,ID,...", help="components colored by the Kirby color")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("wrt", parents=[common], help="surgery invariant")
    p.add_argument("category")
    p.add_argument("presentation")
    p.add_argument("--tau", action="store_true", help="also print the normalized invariant")
    p.add_argument("--sqrt-dim", metavar="RE,IM", help="square root of the global dimension")
    p.set_defaults(func=cmd_wrt)

    p = sub.add_parser("pachner-fuzz", parents=[common], help="apply random Pachner moves")
    p.add_argument("file")
    p.add_argument("--moves", type=int, default=100)
    p.add_argument("--category", help="also track the state sum for this category")
    p.add_argument("--check-every", type=_positive_int, default=1)
    p.add_argument("--max-tetrahedra", type=_positive_int, default=30)
    p.add_argument("--output", metavar="FILE", help="write the final triangulation")
    p.set_defaults(func=cmd_pachner_fuzz)

    p = sub.add_parser("verlinde", parents=[common], help="Verlinde dimensions")
    p.add_argument("category")
    p.add_argument("--genus", type=int, nargs="+")
    p.set_defaults(func=cmd_verlinde)
    return parser


_FAILURES = (category.CategoryError, triangulation.TriangulationError, triangulation.MoveError,
             diagram.DiagramError, statesum.StateSumError, ValueError, KeyError)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    want_json = getattr(args, "json", False)
    try:
        cfg = RunConfig(getattr(args, "tol", EPS), getattr(args, "seed", 0), getattr(args, "workers", 1),
                        want_json)
        if getattr(args, "command", None) == "pachner-fuzz":
            args.seed = getattr(args, "seed", None)
        code, payload, lines = args.func(args, cfg)
    except UsageError as exc:
        return _fail(args, 2, str(exc), want_json)
    except _FAILURES as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else str(exc)
        return _fail(args, 1, msg, want_json)
    if want_json:
        out = {"schema_version": SCHEMA_VERSION, "command": args.command, "exit_code": code, **payload}
        print(json.dumps(out, sort_keys=True))
    else:
        print("\n".join(lines))
    return code


def _fail(args, code: int, message: str, want_json: bool) -> int:
    if want_json:
        print(json.dumps({"schema_version": SCHEMA_VERSION, "command": getattr(args, "command", None),
                          "exit_code": code, "error": message}, sort_keys=True))
    print(f"quantum3: error: {message}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
