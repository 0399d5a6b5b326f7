"""Command line entry point: ``extgeom run|check-group|validate``."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import algebra
from .report import FAIL, INCONCLUSIVE, points_for
from .scenario import STAGES, ScenarioError, load_scenario, render_text, run

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def _dump(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=False, allow_nan=True) + "\n"


def _stages(text: str | None):
    if text is None:
        return None
    names = [s.strip() for s in text.split(",") if s.strip()]
    bad = [s for s in names if s not in STAGES]
    if bad:
        raise ScenarioError(f"unknown stages {bad}; expected a subset of {list(STAGES)}")
    return names


def cmd_run(args) -> int:
    sc = load_scenario(args.scenario)
    doc = run(sc, samples=args.samples, tol=args.tol, seed=args.seed, stages=_stages(args.stages))
    if args.report:
        Path(args.report).write_text(_dump(doc), encoding="utf-8")
    out = render_text(doc) + "\n" if args.format == "text" else _dump(doc)
    sys.stdout.write(out)
    return EXIT_OK if doc["summary"]["status"] == "pass" else EXIT_FAIL


def cmd_check_group(args) -> int:
    target = args.group
    if target in algebra.PRESETS:
        p = algebra.preset(target)
        reps = [algebra.check_structure_constants(p.constants),
                algebra.check_representation(p, points_for(p.chart, args.samples, args.seed))]
        name = target
    else:
        path = Path(target)
        if not path.exists():
            raise ScenarioError(f"{target!r} is neither a preset ({', '.join(algebra.PRESETS)}) nor a file")
        try:
            doc = json.loads(path.read_text(encoding="utf-8"))
            sc = algebra.load_constants(doc)
        except (json.JSONDecodeError, KeyError, ValueError, TypeError) as err:
            raise ScenarioError(f"{path}: cannot read structure constants ({err})") from None
        reps = [algebra.check_structure_constants(sc)]
        name = path.stem
    doc = {"group": name, "reports": [r.to_dict() for r in reps],
           "status": "fail" if any(r.verdict in (FAIL, INCONCLUSIVE) for r in reps) else "pass"}
    if args.format == "text":
        sys.stdout.write(f"group {name}\n" + "\n".join(str(r) for r in reps) + f"\nstatus={doc['status']}\n")
    else:
        sys.stdout.write(_dump(doc))
    return EXIT_OK if doc["status"] == "pass" else EXIT_FAIL


def cmd_validate(args) -> int:
    sc = load_scenario(args.scenario)
    info = {"scenario": sc.name, "group": sc.group.name, "dim": sc.dim, "chart": list(sc.chart.names),
            "fields": sorted(sc.fields), "stages": list(sc.stages), "valid": True}
    sys.stdout.write(_dump(info))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="extgeom", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="run the verification stages of a scenario")
    r.add_argument("scenario")
    r.add_argument("--samples", type=int)
    r.add_argument("--tol", type=float)
    r.add_argument("--seed", type=int)
    r.add_argument("--stages", help=f"comma-separated subset of {','.join(STAGES)}")
    r.add_argument("--report", help="also write the JSON report to this path")
    r.add_argument("--format", choices=("json", "text"), default="json")
    r.set_defaults(func=cmd_run)
    g = sub.add_parser("check-group", help="check a preset or a JSON file of structure constants")
    g.add_argument("group")
    g.add_argument("--samples", type=int, default=64)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--format", choices=("json", "text"), default="json")
    g.set_defaults(func=cmd_check_group)
    v = sub.add_parser("validate", help="parse and validate a scenario file")
    v.add_argument("scenario")
    v.set_defaults(func=cmd_validate)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    if getattr(args, "samples", None) is not None and args.samples < 1:
        sys.stderr.write("error: --samples must be >= 1\n")
        return EXIT_INPUT
    if getattr(args, "tol", None) is not None and args.tol <= 0:
        sys.stderr.write("error: --tol must be positive\n")
        return EXIT_INPUT
    try:
        return args.func(args)
    except ScenarioError as err:
        sys.stderr.write(f"error: {err}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
