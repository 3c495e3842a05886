"""Command-line front end.

    octa-ptolemy solve      --pd CODE --mode z|w [--seed N --restarts N]
    octa-ptolemy check      --builtin fig8 --mode z
    octa-ptolemy invariants --builtin trefoil-kink --mode w

Exit status: 0 success, 1 verification failure, 2 usage or input error.
Errors go to stderr as one JSON object.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import warnings
from importlib import resources
from pathlib import Path

import numpy as np

from .diagram import DiagramError, parse_pd
from .gluing import Assignment, NondegeneracyError, T4DegenerateError, build_system, check_nondegenerate, residuals
from .invariants import FlatTetrahedronWarning, InvariantError, invariant_report, obstruction_class
from .ptolemy import PtolemyError, crossing_ptolemy, ptolemy_consistency_check, scaling_parameters
from .solver import SolverConfig, SolverError, search_solutions

BUILTINS = {"fig8": "fig8.json", "trefoil-kink": "trefoil_kink.json"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def dumps(obj) -> str:
    """JSON with every float written to 17 significant digits."""
    return _enc(obj)


def _enc(x) -> str:
    if isinstance(x, bool) or x is None:
        return json.dumps(x)
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isnan(x) or math.isinf(x):
            return json.dumps(str(x))
        return format(x, ".17g")
    if isinstance(x, complex):
        return _enc([x.real, x.imag])
    if isinstance(x, str):
        return json.dumps(x, ensure_ascii=False)
    if isinstance(x, dict):
        return "{" + ",".join(f"{json.dumps(str(k))}:{_enc(v)}" for k, v in x.items()) + "}"
    if isinstance(x, (list, tuple)):
        return "[" + ",".join(_enc(v) for v in x) + "]"
    raise TypeError(f"cannot serialize {type(x).__name__}")


def load_builtin(name: str) -> dict:
    if name not in BUILTINS:
        raise UsageError(f"unknown builtin {name!r}; choose from {sorted(BUILTINS)}")
    text = resources.files("octa_ptolemy").joinpath("data", BUILTINS[name]).read_text("utf-8")
    return json.loads(text)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="octa-ptolemy", description="Gluing equations, Ptolemy data and invariants of knot diagrams.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, text in (
        ("solve", "search for solutions of the gluing equations"),
        ("check", "verify a given assignment (residuals, non-degeneracy, obstruction)"),
        ("invariants", "compute invariants of given or solved assignments"),
    ):
        s = sub.add_parser(name, help=text, description=text)
        src = s.add_mutually_exclusive_group(required=True)
        src.add_argument("--pd", help="PD code, inline (X[..];X[..]) or a path to a file containing one")
        src.add_argument("--builtin", choices=sorted(BUILTINS), help="use a shipped example diagram")
        s.add_argument("--mode", choices=("z", "w"), required=True,
                       help="z: segment variables (T4), w: region variables (T5)")
        s.add_argument("--solution", help="path to an assignment JSON file")
        s.add_argument("--seed", type=int, default=0, help="solver seed (default 0)")
        s.add_argument("--restarts", type=int, default=100, help="solver restarts (default 100)")
        s.add_argument("--tol", type=float, default=None,
                       help="residual tolerance (solver default 1e-11, check default 1e-9)")
        s.add_argument("--out", help="write JSON here instead of stdout")
        s.add_argument("--base-crossing", type=int, default=None,
                       help="1-based PD position of the crossing c_1 (default: where segment 1 first passes under)")
    return p


def _read_pd(arg: str) -> str:
    if "X[" in arg:
        return arg
    path = Path(arg)
    if not path.exists():
        raise UsageError(f"--pd is neither a PD code nor an existing file: {arg!r}")
    return path.read_text("utf-8")


def _inputs(args):
    """(diagram, given assignment or None)."""
    given = None
    if args.builtin:
        data = load_builtin(args.builtin)
        pd = data["pd"]
        sol = data["solutions"].get(args.mode)
        if sol is not None:
            given = Assignment.from_json(sol)
    else:
        pd = _read_pd(args.pd)
    d = parse_pd(pd)
    if args.solution:
        try:
            given = Assignment.from_json(Path(args.solution).read_text("utf-8"))
        except OSError as exc:
            raise UsageError(f"cannot read solution: {exc}") from exc
        if given.mode != args.mode:
            raise UsageError(f"solution mode {given.mode} does not match --mode {args.mode}")
    return d, given


def _base(args, d):
    if args.base_crossing is None:
        return None
    if not 1 <= args.base_crossing <= d.n:
        raise UsageError(f"--base-crossing must lie in 1..{d.n}")
    return args.base_crossing - 1


def _solver_config(args) -> SolverConfig:
    kw = {"seed": args.seed, "restarts": args.restarts}
    if args.tol is not None:
        kw["tol_residual"] = args.tol
    return SolverConfig(**kw)


def _check(d, system, a, tol, base) -> tuple[dict, bool]:
    bad = check_nondegenerate(d, a)
    if bad is not None:
        return {"ok": False, "nondegenerate": False, "violation": str(bad)}, False
    res = residuals(system, a)
    max_res = float(np.max(np.abs(res)))
    out = {"ok": True, "nondegenerate": True, "maxResidual": max_res,
           "residuals": [[float(abs(r)), p] for r, p in zip(res, [list(x) for x in system.provenance()])]}
    ok = max_res < tol
    try:
        out["obstruction"] = obstruction_class(d, a)
    except InvariantError as exc:
        out["obstruction"] = None
        out["obstructionError"] = str(exc)
        ok = False
    try:
        sp = scaling_parameters(d, a, base)
        rep = ptolemy_consistency_check(d, a, sp)
        out["ptolemy"] = rep.to_json()
        out["crossings"] = [c.to_json() for c in crossing_ptolemy(d, a, sp)]
        ok = ok and rep.ok
    except PtolemyError as exc:
        out["ptolemy"] = {"ok": False, "error": str(exc), "segment": exc.segment}
        ok = False
    out["ok"] = ok
    return out, ok


def _invariants(d, a, base) -> tuple[dict, bool]:
    try:
        rep = invariant_report(d, a, base)
    except (InvariantError, NondegeneracyError) as exc:
        return {"ok": False, "error": str(exc), "assignment": a.to_json()}, False
    out = rep.to_json()
    ok = rep.wirtinger_report.ok
    out["ok"] = ok
    out["assignment"] = a.to_json()
    return out, ok


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        d, given = _inputs(args)
        base = _base(args, d)
        system = build_system(d, args.mode)
        if args.command == "solve":
            sols = search_solutions(system, _solver_config(args))
            result = {"mode": args.mode, "attempts": sols.attempts, "converged": sols.converged,
                      "count": len(sols), "solutions": sols.to_json()}
            ok = True
        elif args.command == "check":
            if given is None:
                raise UsageError("check needs --solution (or a builtin with a stored solution for this mode)")
            result, ok = _check(d, system, given, args.tol if args.tol is not None else 1e-9, base)
        else:
            if given is not None:
                result, ok = _invariants(d, given, base)
            else:
                sols = search_solutions(system, _solver_config(args))
                reports = [_invariants(d, s.assignment, base) for s in sols]
                result = {"mode": args.mode, "count": len(reports), "reports": [r for r, _ in reports]}
                ok = all(k for _, k in reports)
        text = dumps(result) + "\n"
        if args.out:
            Path(args.out).write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
        return 0 if ok else 1
    except UsageError as exc:
        return _fail("usage", str(exc), 2)
    except T4DegenerateError as exc:
        return _fail("T4 degenerate", str(exc), 2)
    except (DiagramError, SolverError, NondegeneracyError, ValueError) as exc:
        return _fail(type(exc).__name__, str(exc), 2)


def _fail(kind: str, message: str, code: int) -> int:
    sys.stderr.write(dumps({"error": kind, "message": message}) + "\n")
    return code


def main(argv=None):
    warnings.simplefilter("ignore", FlatTetrahedronWarning)
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
