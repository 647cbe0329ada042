"""Command-line front end.

Exit status: 0 on success, 1 on a usage or input error, 2 when a check fails
(``experiment --check`` gates, or a cross-construction mismatch in
``diagram --method all``).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .config import BoxBallConfig, evolve, parse_config, serialize_config, stabilize, soliton_lengths
from .diagram import YoungDiagram
from .errors import BoxBallError
from .experiment import KINDS, default_threads, run_experiment
from .forests import forest_of_path, serialize_forest, young_from_forest
from .paths import path_of_config, serialize_path, young_diagram
from .permutations import avoids, rs_shape, sigma_of_config, sigma_of_path
from .sampling import RandomParams, parse_seed, sample_config, sample_gw_forest, uniform_dyck_path, uniform_stack_sortable

__all__ = ["main", "run_cli", "build_parser"]

CSV_HELP = """\
experiment CSV columns, one row per trial:
  trial             trial index t (randomness comes from stream (seed, t))
  rho1..rho5        number of solitons of length >= i (diagram rows)
  lambda1..lambda5  i-th longest soliton (diagram columns)
  sweeps            sweeps until stable (only for n <= 1000)
  gw_leaves         leaves of a sampled GW forest (gw-coupling only)
  us                wall time per trial in microseconds (only with --timings)
Columns a kind does not compute are left empty.
"""


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _read_config(text: str) -> BoxBallConfig:
    if text.startswith("@"):
        try:
            text = Path(text[1:]).read_text()
        except OSError as exc:
            raise UsageError(f"cannot read {text[1:]}: {exc.strerror}") from exc
        text = "".join(text.split())
    return parse_config(text)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="boxball",
        description="Box-ball soliton automaton: dynamics, Young diagrams, permutations and Monte Carlo checks.",
        epilog=CSV_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def with_config(p):
        p.add_argument("--config", required=True, help="0/1 string, box 1 first, or @FILE")
        p.add_argument("--format", choices=("text", "json", "csv"), default="text")

    p = sub.add_parser("evolve", help="run carrier sweeps and print each configuration")
    with_config(p)
    p.add_argument("--sweeps", type=int, default=1)
    p.add_argument("--width", type=int, help="pad rows to this many boxes")

    p = sub.add_parser("diagram", help="soliton Young diagram of a configuration")
    with_config(p)
    p.add_argument("--method", choices=("path", "forest", "rsk", "stable", "all"), default="path")

    p = sub.add_parser("perm", help="stack permutation of a configuration and its RS shape")
    with_config(p)

    p = sub.add_parser("sample", help="draw a random object")
    p.add_argument("--what", choices=("config", "dyck", "perm", "gw"), default="config")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float, default=0.5)
    p.add_argument("--seed", default="0", help="decimal or 0x-hex")
    p.add_argument("--trial", type=int, default=0)
    p.add_argument("--out", help="write to this file instead of stdout")

    p = sub.add_parser(
        "experiment", help="Monte Carlo run against a reference law",
        epilog=CSV_HELP, formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    p.add_argument("kind", choices=KINDS)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float, default=0.5)
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", default="0", help="decimal or 0x-hex")
    p.add_argument("--threads", type=int, help="worker processes (default: BOXBALL_THREADS or all cores)")
    p.add_argument("--out", help="report file; ECDF .dat files are written next to it")
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")
    p.add_argument("--check", action="store_true", help="exit 2 if any gate fails")
    p.add_argument("--timings", action="store_true", help="fill the CSV us column")
    p.add_argument("--cross-check", action="store_true", help="verify fast kernels against slower constructions")
    return parser


def _emit(text: str, out: str | None = None) -> None:
    if out:
        Path(out).write_text(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


def _cmd_evolve(args) -> int:
    if args.sweeps < 0:
        raise UsageError("--sweeps must be >= 0")
    cfg = _read_config(args.config)
    rows = [cfg]
    for _ in range(args.sweeps):
        rows.append(evolve(rows[-1], 1))
    width = args.width if args.width is not None else max(r.last for r in rows)
    if width < max(r.last for r in rows):
        raise UsageError(f"--width {width} cuts off balls")
    lines = [serialize_config(r, width) for r in rows]
    if args.format == "json":
        print(json.dumps({"rows": lines, "balls": [list(r.occupied) for r in rows]}))
    elif args.format == "csv":
        print("sweep,config")
        for s, line in enumerate(lines):
            print(f"{s},{line}")
    else:
        for s, line in enumerate(lines):
            print(f"{'s=' + str(s) if s == 0 else s:>3} | {line}")
    return 0


def _diagrams(cfg: BoxBallConfig, method: str) -> dict[str, YoungDiagram]:
    out = {}
    path = path_of_config(cfg)
    if method in ("path", "all"):
        out["path"] = young_diagram(path)
    if method in ("forest", "all"):
        out["forest"] = young_from_forest(forest_of_path(path))
    if method in ("rsk", "all"):
        out["rsk"] = rs_shape(sigma_of_config(cfg))
    if method in ("stable", "all"):
        stable, _ = stabilize(cfg)
        out["stable"] = YoungDiagram.from_columns(soliton_lengths(stable))
    return out


def _cmd_diagram(args) -> int:
    cfg = _read_config(args.config)
    found = _diagrams(cfg, args.method)
    consistent = len(set(found.values())) <= 1
    if args.format == "json":
        print(json.dumps({
            "methods": {k: {"lambda": list(d.columns), "rho": list(d.rows)} for k, d in found.items()},
            "consistent": consistent,
        }))
    elif args.format == "csv":
        print("method,lambda,rho")
        for k, d in found.items():
            print(f"{k},{' '.join(map(str, d.columns))},{' '.join(map(str, d.rows))}")
    elif len(found) == 1:
        print(next(iter(found.values())).to_line())
    else:
        for k, d in found.items():
            print(f"{k:<7} {d.to_line()}")
        print("consistent" if consistent else "MISMATCH")
    if not consistent:
        print("boxball: constructions disagree", file=sys.stderr)
        return 2
    return 0


def _cmd_perm(args) -> int:
    cfg = _read_config(args.config)
    sigma = sigma_of_config(cfg)
    inv = sigma_of_path(path_of_config(cfg))
    shape = rs_shape(sigma)
    info = {
        "sigma": str(sigma),
        "sigma_inverse": str(inv),
        "shape": shape.to_line(),
        "avoids_312": avoids(sigma, (3, 1, 2)) if len(sigma) >= 3 else True,
        "inverse_avoids_231": avoids(inv, (2, 3, 1)) if len(inv) >= 3 else True,
    }
    if args.format == "json":
        print(json.dumps(info))
    elif args.format == "csv":
        print(",".join(info))
        print(",".join(str(v) for v in info.values()))
    else:
        for k, v in info.items():
            print(f"{k:<18} {v}")
    return 0


def _cmd_sample(args) -> int:
    params = RandomParams(args.n, args.p, parse_seed(args.seed))
    if args.what == "config":
        text = serialize_config(sample_config(params, args.trial), params.n)
    elif args.what == "dyck":
        text = serialize_path(uniform_dyck_path(params.n, params.rng(args.trial)))
    elif args.what == "perm":
        text = str(uniform_stack_sortable(params.n, params.rng(args.trial)))
    else:
        text = serialize_forest(sample_gw_forest(params, args.trial))
    _emit(text, args.out)
    return 0


def _cmd_experiment(args) -> int:
    params = RandomParams(args.n, args.p, parse_seed(args.seed))
    threads = args.threads if args.threads is not None else default_threads()
    report = run_experiment(args.kind, params, args.trials, threads=threads, cross_check=args.cross_check)
    if args.out:
        report.write(args.out, args.format, timings=args.timings)
        print(report.to_text())
    elif args.format == "json":
        print(report.to_json())
    elif args.format == "csv":
        sys.stdout.write(report.to_csv(args.timings))
    else:
        print(report.to_text())
    if args.check and not report.passed:
        return 2
    return 0


COMMANDS = {
    "evolve": _cmd_evolve,
    "diagram": _cmd_diagram,
    "perm": _cmd_perm,
    "sample": _cmd_sample,
    "experiment": _cmd_experiment,
}


def run_cli(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"boxball: error: {exc}", file=sys.stderr)
        return 1
    except (BoxBallError, ValueError) as exc:
        print(f"boxball: error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run_cli())
