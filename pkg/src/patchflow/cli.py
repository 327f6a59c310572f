"""Command line entry point.

Exit codes: 0 success, 1 failed checks, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import replace
from pathlib import Path

from .config import ConfigError, load_config
from .experiments import SUITES, PatchRunConfig, patch_run, persistence_verdicts, verify_suite
from .littlewood_paley import BesovIndex, besov_norm, decompose, holder_norm, weighted_block_norms
from .patch import PatchSplit, PatchTooLarge
from .solver import SolverError
from .spectral import VectorField2, read_snapshot
from .transport import CFLError

EXIT_OK, EXIT_FAILED, EXIT_CONFIG, EXIT_NUMERICAL = 0, 1, 2, 3


def _parse_norms(text: str) -> list[tuple[str, object]]:
    """``besov:s:p:r``, ``besov-inh:s:p:r`` and ``holder:eps`` items, comma separated."""
    out = []
    for item in filter(None, (s.strip() for s in text.split(","))):
        kind, *args = item.split(":")
        try:
            nums = [float(a) for a in args]
        except ValueError:
            raise ConfigError("--norms", f"bad number in {item!r}") from None
        if kind in ("besov", "besov-inh") and len(nums) == 3:
            out.append((item, BesovIndex(nums[0], nums[1], nums[2], homogeneous=kind == "besov")))
        elif kind == "holder" and len(nums) == 1:
            out.append((item, nums[0]))
        else:
            raise ConfigError("--norms", f"cannot parse {item!r}; use besov:s:p:r, besov-inh:s:p:r or holder:eps")
    if not out:
        raise ConfigError("--norms", "no norms requested")
    return out


def cmd_analyze(args) -> int:
    field, meta = read_snapshot(args.snapshot)
    comps = list(field) if isinstance(field, VectorField2) else [field]
    norms = _parse_norms(args.norms)
    first_besov = next((idx for _, idx in norms if isinstance(idx, BesovIndex)), BesovIndex(0.0, 2, 2))
    w = csv.writer(sys.stdout)
    w.writerow(["component", "j", f"block_L{first_besov.p:g}", "weighted"])
    for c, f in enumerate(comps):
        dec = decompose(f)
        raw = dec.block_norms(first_besov.p)
        weighted = weighted_block_norms(f, first_besov)
        for j in sorted(raw):
            w.writerow([c, j, repr(raw[j]), repr(weighted.get(j, math.nan))])
    summary = {"name": meta.get("name"), "t": meta.get("t"), "n": meta["n"], "L": meta["L"], "norms": {}}
    for label, idx in norms:
        if isinstance(idx, BesovIndex):
            summary["norms"][label] = sum(besov_norm(f, idx) for f in comps)
        else:
            summary["norms"][label] = max(holder_norm(f, idx) for f in comps)
    print(json.dumps(summary, indent=2))
    return EXIT_OK


def _print_verdicts(verdicts, stream=None) -> bool:
    w = csv.writer(stream or sys.stdout)
    w.writerow(["criterion", "check", "measured", "tolerance", "status"])
    for v in verdicts:
        w.writerow([v.criterion, v.check, f"{v.measured:.6g}", f"{v.tolerance:.6g}", "PASS" if v.passed else "FAIL"])
    return all(v.passed for v in verdicts)


def cmd_verify(args) -> int:
    ok = _print_verdicts(verify_suite(args.suite))
    return EXIT_OK if ok else EXIT_FAILED


def cmd_run(args) -> int:
    cfg = load_config(args.config)
    out = Path(args.out)
    res = patch_run(cfg, outdir=out, progress=None if args.quiet else print)
    print(f"wrote {len(res.series.rows)} rows to {out / 'series.csv'} in {res.seconds:.1f} s")
    return EXIT_OK


def cmd_reproduce(args) -> int:
    out = Path(args.out)
    base_cfg = load_config(args.config) if args.config else PatchRunConfig()
    say = None if args.quiet else print
    base = patch_run(base_cfg, outdir=out / f"n{base_cfg.n}", progress=say)
    fine = None
    if args.fine:
        fine = patch_run(replace(base_cfg, n=args.fine), outdir=out / f"n{args.fine}", progress=say)
    verdicts = persistence_verdicts(base, fine)
    for v in verdicts:
        print(v.line())
    return EXIT_OK if all(v.passed for v in verdicts) else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="patchflow", description="Density-patch Navier-Stokes simulator and analysis tools")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="simulate a patch configuration and write diagnostics")
    p.add_argument("config")
    p.add_argument("--out", default="patchflow_out")
    p.add_argument("--quiet", action="store_true")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("analyze", help="dyadic block norms of a snapshot file")
    p.add_argument("snapshot")
    p.add_argument("--norms", default="besov:0:2:2", help="comma list of besov:s:p:r, besov-inh:s:p:r, holder:eps")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("verify", help="run property suites and print a CSV table")
    p.add_argument("--suite", default="all", choices=[*SUITES, "all"])
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("reproduce", help="run a reference experiment end to end")
    p.add_argument("experiment", choices=["persistence"])
    p.add_argument("--config", help="override the default persistence configuration")
    p.add_argument("--out", default="persistence_out")
    p.add_argument("--fine", type=int, default=512, help="resolution of the doubling check (0 to skip)")
    p.add_argument("--quiet", action="store_true")
    p.set_defaults(func=cmd_reproduce)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, PatchTooLarge) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SolverError, CFLError, PatchSplit, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
