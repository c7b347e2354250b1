"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 a verification check failed,
3 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass, field

import numpy as np

from . import asymptotics as asy
from .centers import rescaled_center_orbit
from .errors import NumericalError, OLBError, OrbitError
from .geometry import parse_table
from .olbmap import orbit
from .periodic import find_periodic, period_radius_scan, verify_periodic
from .reports import centers_csv, orbit_csv, periodic_json, render_svg, to_json
from .verify import CHECKS, run_check

EXIT_OK, EXIT_USAGE, EXIT_FAILED, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class RunConfig:
    command: str
    table: str | None = None
    params: dict = field(default_factory=dict)
    out: str | None = None
    svg: str | None = None
    seed: int = 0

    def __post_init__(self):
        if self.table is not None:
            canon = parse_table(self.table).spec
            if parse_table(canon).spec != canon:  # pragma: no cover
                raise UsageError(f"table spec {self.table!r} does not round-trip")
            self.table = canon
        for k, v in self.params.items():
            if k.endswith("tol") and not v > 0:
                raise UsageError(f"{k} must be positive")


def _floats(text):
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _point(text):
    v = _floats(text)
    if len(v) != 2:
        raise argparse.ArgumentTypeError(f"expected x,y, got {text!r}")
    return v


def _threads():
    try:
        cap = int(os.environ.get("OLB_THREADS", "0"))
    except ValueError:
        cap = 0
    n = os.cpu_count() or 1
    return max(1, min(cap, n) if cap > 0 else n)


@contextmanager
def _executor():
    n = _threads()
    if n == 1:
        yield None
        return
    with ThreadPoolExecutor(max_workers=n) as ex:
        yield ex


def _write(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def build_parser():
    p = _Parser(prog="olb", description="Outer length billiards: orbits, centers, periodic orbits, checks.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    o = sub.add_parser("orbit", help="iterate the map and write a CSV trace")
    o.add_argument("--table", required=True)
    o.add_argument("--start", type=_point, required=True)
    o.add_argument("--steps", type=int, default=1000)
    o.add_argument("--stride", type=int, choices=(1, 2), default=1)
    o.add_argument("--out")
    o.add_argument("--svg")

    c = sub.add_parser("centers", help="rescaled auxiliary-circle centers along an orbit")
    c.add_argument("--table", required=True)
    c.add_argument("--start", type=_point, required=True)
    c.add_argument("--steps", type=int, default=2000, help="number of recorded double steps")
    c.add_argument("--odd", action="store_true", help="record odd steps instead of even ones")
    c.add_argument("--out")
    c.add_argument("--svg")

    q = sub.add_parser("periodic", help="find a periodic orbit")
    q.add_argument("--table", required=True)
    q.add_argument("--k", type=int, required=True)
    q.add_argument("--m", type=int, default=1)
    q.add_argument("--out")
    q.add_argument("--svg")

    v = sub.add_parser("verify", help="run one check (or 'all')")
    v.add_argument("check", choices=sorted(CHECKS) + ["all"])
    v.add_argument("--table", action="append", help="table spec (repeatable; main1, form_factor, normal_form)")
    v.add_argument("--radii", type=_floats)
    v.add_argument("--t", type=_floats, help="confocal parameters (hausdorff)")
    v.add_argument("--origin", type=_point, help="interior origin (main1, form_factor, normal_form)")
    v.add_argument("--dirs", type=int, help="number of directions (main1, form_factor)")
    v.add_argument("--centroid", action="store_true", help="main1: also report the centroid run")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--out")

    s = sub.add_parser("sweep", help="residual table over radii, or period-vs-radius scan")
    s.add_argument("--table", required=True)
    s.add_argument("--kind", choices=("main1", "period"), default="main1")
    s.add_argument("--radii", type=_floats, default=(50.0, 100.0, 200.0, 400.0, 800.0))
    s.add_argument("--dirs", type=int, default=64)
    s.add_argument("--origin", type=_point)
    s.add_argument("--k-max", type=int, default=9)
    s.add_argument("--out")
    return p


def _verify_params(args, name):
    params = {}
    if name in ("main1", "form_factor", "normal_form"):
        if args.table:
            params["tables"] = tuple(args.table)
        if args.origin:
            params["origin"] = args.origin
    if name in ("main1", "form_factor") and args.dirs:
        params["n_dirs"] = args.dirs
    if args.radii and name in ("main1", "form_factor", "poncelet"):
        params["radii"] = args.radii
    if name == "hausdorff" and args.t:
        params["ts"] = args.t
    if name == "main1" and args.centroid:
        params["centroid"] = True
    if name in ("confocal", "generating", "area_form", "measure"):
        params["seed"] = args.seed
    return params


def _run_verify(args):
    names = list(CHECKS) if args.check == "all" else [args.check]
    results = []
    with _executor() as ex:
        for name in names:
            params = _verify_params(args, name)
            if name == "main1":
                params["executor"] = ex
            results.append(run_check(name, **params))
    for r in results:
        print(r.summary(), file=sys.stderr)
    payload = results[0].as_dict() if len(results) == 1 else [r.as_dict() for r in results]
    _write(args.out, to_json(payload))
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAILED


def _run(args):
    if args.command == "verify":
        return _run_verify(args)
    cfg = RunConfig(args.command, args.table, out=args.out, svg=getattr(args, "svg", None))
    oval = parse_table(cfg.table)
    if args.command == "orbit":
        if args.steps < 1:
            raise UsageError("--steps must be positive")
        _write(cfg.out, orbit_csv(oval, np.array(args.start), args.steps, args.stride))
        if cfg.svg:
            pts = orbit(oval, np.array(args.start), args.steps, args.stride)
            _write(cfg.svg, render_svg(pts, table=oval))
    elif args.command == "centers":
        trace = rescaled_center_orbit(oval, np.array(args.start), args.steps, odd=args.odd)
        _write(cfg.out, centers_csv(oval, trace))
        if cfg.svg:
            _write(cfg.svg, render_svg(trace.rescaled, table=None))
    elif args.command == "periodic":
        try:
            orb = find_periodic(oval, args.k, args.m)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        _write(cfg.out, periodic_json(orb))
        print(f"closure residual {verify_periodic(oval, orb):.3g}", file=sys.stderr)
        if cfg.svg:
            _write(cfg.svg, render_svg(np.vstack([orb.vertices, orb.vertices[:1]]), table=oval))
    elif args.command == "sweep":
        with _executor() as ex:
            if args.kind == "main1":
                origin = args.origin or asy.MAIN1_ORIGIN
                rep = asy.main1_report(oval, args.radii, args.dirs, origin=origin, executor=ex)
                payload = {
                    "table": oval.spec,
                    "origin": list(origin),
                    "radii": rep.radii,
                    "sup_residual": rep.sup_residual,
                    "per_direction": rep.per_direction,
                }
            else:
                table, cells = period_radius_scan(oval, args.k_max, executor=ex)
                payload = {
                    "table": oval.spec,
                    "max_radius": {str(k): v for k, v in sorted(table.items())},
                    "cells": [c.__dict__ for c in cells],
                }
        _write(cfg.out, to_json(payload))
    return EXIT_OK


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        return _run(args)
    except UsageError as exc:
        print(f"olb: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OrbitError as exc:
        print(f"olb: {exc}", file=sys.stderr)
        return EXIT_NUMERIC if isinstance(exc.cause, NumericalError) else EXIT_USAGE
    except NumericalError as exc:
        print(f"olb: numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (OLBError, ValueError) as exc:
        print(f"olb: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


run = main

if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
