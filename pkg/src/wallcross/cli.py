"""Command-line front door: factorize, scatter, gauss-bonnet, tropical,
monodromy and check-all subcommands with JSON input/output and figure files.

Exit codes: 0 success, 1 check failure, 2 invalid input.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass, field

from . import affine, checks
from .factorization import Slope, WallFunction, factorize, slope_auto
from .scalars import QQ, LaurentSeriesRing, format_rational, rational
from .scatter import (ScatterError, SingularPoint, attach_walls, check_vertex, evolve,
                      initial_lines, kaffine_invariance_check)
from .series import SympAuto
from .tropical import LaurentPoly, val_function


class InputError(ValueError):
    pass


@dataclass
class RunConfig:
    """Parsed invocation: subcommand, payload, and numeric knobs."""

    subcommand: str
    payload: object = None
    series_order: int = 6
    truncation: int = 16
    order_cutoff: object = 6
    output_format: str = "json"
    seed: int = 1
    fast: bool = False
    out_path: str | None = None
    window: tuple = (0, 2, 0, 2)
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.series_order < 1:
            raise InputError("series order must be >= 1")
        if self.truncation < 1:
            raise InputError("truncation must be >= 1")
        if rational(self.order_cutoff) <= 0:
            raise InputError("order cutoff must be positive")


def _dump(doc) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def _emit(text: str, out_path=None):
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        print(text)


def _load_payload(args) -> object:
    raw = None
    if getattr(args, "json", None):
        raw = args.json
    elif getattr(args, "input", None):
        with open(args.input) as fh:
            raw = fh.read()
    elif not sys.stdin.isatty():
        raw = sys.stdin.read()
    if raw is None or not raw.strip():
        raise InputError("no input given (use --json, --input, or stdin)")
    try:
        return json.loads(raw)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON at line {exc.lineno} column {exc.colno}: "
                         f"{exc.msg}") from exc


def _coefficient_ring(obj, truncation):
    if obj in (None, "rational", "QQ"):
        return QQ
    if isinstance(obj, dict) and "laurent_t" in obj:
        return LaurentSeriesRing(int(obj["laurent_t"]))
    if obj == "laurent":
        return LaurentSeriesRing(truncation)
    raise InputError(f"unknown coefficient ring {obj!r}")


# -- subcommands -----------------------------------------------------------


def run_factorize(config: RunConfig):
    """Compose the given walls (listed order, leftmost applied last) and factorize."""
    payload = config.payload
    k = int(payload.get("order", config.series_order))
    walls = payload.get("walls_in", [])
    g = SympAuto.identity(cutoff=k)
    for rec in walls:
        s = Slope(int(rec["slope"][0]), int(rec["slope"][1]))
        f = WallFunction.from_json(rec.get("coeffs", {}), QQ)
        g = g.compose(slope_auto(s, f, k))
    sf = factorize(g, k)
    return 0, _dump(sf.to_json())


def run_scatter(config: RunConfig):
    seeds = [SingularPoint.from_json(s) for s in config.payload]
    d = initial_lines(seeds, config.window, config.order_cutoff, config.series_order)
    evolve(d)
    attach_walls(d)
    doc = d.to_json()
    if config.extra.get("check"):
        doc["checks"] = {
            "vertex_consistency": all(check_vertex(d, ev) for ev in d.events),
            "kaffine_invariance": all(
                kaffine_invariance_check(line.wall, line.alpha, d.ring, d.series_order)
                for line in d.lines.values() if not line.wall.is_trivial()),
        }
    if config.output_format == "svg":
        out = config.out_path or "scatter.svg"
        config.out_path = None  # the figure consumes the path; summary goes to stdout
        from .plotting import save_scatter
        save_scatter(d, out)
        stem = out.rsplit(".", 1)[0]
        _write_lines_csv(d, stem + ".csv")
        with open(stem + ".json", "w") as fh:
            fh.write(_dump(doc))
        return 0, _dump({"figure": out, "lines_csv": stem + ".csv",
                         "diagram_json": stem + ".json",
                         "lines": len(d.lines), "events": len(d.events)})
    return 0, _dump(doc)


def _write_lines_csv(d, path):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id", "kind", "base_x", "base_y", "alpha_a", "alpha_b",
                         "ord0", "wall"])
        for _, line in sorted(d.lines.items()):
            writer.writerow([line.id, line.kind,
                             format_rational(line.base[0]), format_rational(line.base[1]),
                             line.alpha[0], line.alpha[1],
                             format_rational(line.birth_ord),
                             json.dumps(line.wall.to_json(), sort_keys=True)])


def run_gauss_bonnet(config: RunConfig):
    payload = config.payload
    words = []
    for item in payload.get("singularities", []):
        if isinstance(item, str):
            words.append(affine.LiftedWord.from_string(item))
        else:
            words.append(affine.LiftedWord([(int(g), int(e)) for g, e in item]))
    report = affine.gauss_bonnet_check(words, int(payload["genus"]))
    return (0 if report.passed else 1), _dump(report.to_json())


def run_tropical(config: RunConfig):
    payload = config.payload
    ring = _coefficient_ring(payload.get("ring"), config.truncation)
    dim = int(payload.get("dim", 1))
    terms = {}
    try:
        for rec in payload.get("terms", []):
            exp = rec["exp"]
            key = tuple(int(e) for e in (exp if isinstance(exp, list) else [exp]))
            terms[key] = ring.from_json(rec["coeff"]) if ring is not QQ \
                else rational(rec["coeff"])
    except (TypeError, KeyError) as exc:
        raise InputError(f"bad term payload: {exc}") from exc
    try:
        poly = LaurentPoly(terms, dim, ring)
    except TypeError as exc:
        raise InputError(f"bad coefficient payload: {exc}") from exc
    pl = val_function(poly)
    doc = {"dim": dim,
           "pieces": [{"constant": format_rational(q), "linear": list(ivec)}
                      for q, ivec in pl.pieces]}
    if config.output_format == "svg":
        out = config.out_path or "tropical.svg"
        config.out_path = None
        from .plotting import save_tropical
        save_tropical(pl, out)
        return 0, _dump({"figure": out, **doc})
    return 0, _dump(doc)


def run_monodromy(config: RunConfig):
    word = affine.LoopWord([affine.AffineTransform.from_json(rec)
                            for rec in config.payload.get("loop", [])])
    return 0, _dump(affine.monodromy(word).to_json())


def run_check_all(config: RunConfig):
    results = checks.run_all(config.seed, config.series_order, config.fast)
    ok = all(r.passed for r in results)
    if config.output_format == "text":
        lines = [r.line() for r in results]
        lines.append(f"{'ALL CHECKS PASS' if ok else 'CHECK FAILURES PRESENT'}")
        return (0 if ok else 1), "\n".join(lines)
    doc = {"seed": config.seed, "series_order": config.series_order,
           "passed": ok, "checks": [r.to_json() for r in results]}
    return (0 if ok else 1), _dump(doc)


def run(config: RunConfig):
    """Dispatch a parsed configuration; returns (exit_status, output document)."""
    handlers = {
        "factorize": run_factorize,
        "scatter": run_scatter,
        "gauss-bonnet": run_gauss_bonnet,
        "tropical": run_tropical,
        "monodromy": run_monodromy,
        "check-all": run_check_all,
    }
    return handlers[config.subcommand](config)


# -- argument parsing ------------------------------------------------------


def _add_io(p):
    p.add_argument("--json", help="inline JSON payload")
    p.add_argument("--input", help="path of a JSON payload file")
    p.add_argument("--out", help="write the result document here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wallcross",
        description="exact wall-crossing factorizations, scattering diagrams, "
                    "and integral-affine invariants")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("factorize", help="slope-factorize a composition of walls")
    _add_io(p)
    p.add_argument("-k", "--series-order", type=int, default=8)

    p = sub.add_parser("scatter", help="build a scattering diagram from singular points")
    _add_io(p)
    p.add_argument("--singular-points", help="inline JSON list of seeds")
    p.add_argument("-k", "--series-order", type=int, default=6)
    p.add_argument("-C", "--order-cutoff", default="6")
    p.add_argument("--window", default="0,2,0,2",
                   help="xmin,xmax,ymin,ymax with rational entries")
    p.add_argument("--emit", choices=["json", "svg"], default="json")
    p.add_argument("--check", action="store_true",
                   help="include vertex-consistency and invariance check results")

    p = sub.add_parser("gauss-bonnet", help="sum local indices against the Euler characteristic")
    _add_io(p)

    p = sub.add_parser("tropical", help="tropicalize a Laurent polynomial")
    _add_io(p)
    p.add_argument("-T", "--truncation", type=int, default=16)
    p.add_argument("--emit", choices=["json", "svg"], default="json")

    p = sub.add_parser("monodromy", help="compose a loop word of affine transitions")
    _add_io(p)

    p = sub.add_parser("check-all", help="run every property suite")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("-k", "--series-order", type=int, default=6)
    p.add_argument("--fast", action="store_true", help="reduced case counts")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--out")
    return parser


def _config_from_args(args) -> RunConfig:
    cfg = RunConfig(subcommand=args.command)
    cfg.out_path = getattr(args, "out", None)
    if args.command == "factorize":
        cfg.payload = _load_payload(args)
        cfg.series_order = args.series_order
    elif args.command == "scatter":
        if args.singular_points:
            cfg.payload = json.loads(args.singular_points)
        else:
            cfg.payload = _load_payload(args)
        cfg.series_order = args.series_order
        cfg.order_cutoff = rational(args.order_cutoff)
        cfg.window = tuple(rational(w) for w in args.window.split(","))
        cfg.output_format = args.emit
        cfg.extra["check"] = args.check
    elif args.command in ("gauss-bonnet", "monodromy"):
        cfg.payload = _load_payload(args)
    elif args.command == "tropical":
        cfg.payload = _load_payload(args)
        cfg.truncation = args.truncation
        cfg.output_format = args.emit
    elif args.command == "check-all":
        cfg.seed = args.seed
        cfg.series_order = args.series_order
        cfg.fast = args.fast
        cfg.output_format = args.format
    return cfg


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config_from_args(args)
        status, doc = run(cfg)
    except (InputError, json.JSONDecodeError) as exc:
        print(_dump({"error": str(exc)}), file=sys.stderr)
        return 2
    except (ScatterError, ValueError) as exc:
        print(_dump({"error": f"{type(exc).__name__}: {exc}"}), file=sys.stderr)
        return 2
    if cfg.out_path:
        _emit(doc, cfg.out_path)
    else:
        print(doc)
    return status


if __name__ == "__main__":
    sys.exit(main())
