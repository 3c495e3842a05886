"""Damped Newton iteration in log-coordinates with seeded random restarts.

Unknowns are ``u = log x``; the equations are ``log eq = 0 (mod 2 pi i)``
where the branch of each equation is re-chosen at every step as the one
nearest the current value.  The scaling direction (every equation is
homogeneous of degree 0) is removed by a gauge row.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .gluing import Assignment, GluingSystem, NondegeneracyError, check_nondegenerate, residuals

__all__ = [
    "SolverConfig",
    "SolverError",
    "NewtonFailure",
    "Solution",
    "SolutionSet",
    "newton_solve",
    "search_solutions",
    "canonical_gauge",
    "same_up_to_scaling",
    "thread_count",
]

TWO_PI = 2 * math.pi


class SolverError(ValueError):
    """Invalid solver configuration or start point."""


class NewtonFailure(RuntimeError):
    pass


@dataclass(frozen=True)
class SolverConfig:
    seed: int = 0
    restarts: int = 20
    max_iters: int = 100
    tol_residual: float = 1e-11
    damping: float = 0.5
    dedup_tol: float = 1e-7

    def __post_init__(self):
        if self.restarts < 1:
            raise SolverError("restarts must be >= 1")
        if self.seed < 0:
            raise SolverError("seed must be a non-negative integer")
        if self.max_iters < 1:
            raise SolverError("max_iters must be >= 1")
        for name in ("tol_residual", "dedup_tol"):
            if not getattr(self, name) > 0:
                raise SolverError(f"{name} must be positive")
        if not 0 < self.damping < 1:
            raise SolverError("damping must lie in (0, 1)")


@dataclass
class Solution:
    assignment: Assignment
    residual: float
    restart: int
    iterations: int = 0
    min_singular_value: float = math.nan


@dataclass
class SolutionSet:
    solutions: list = field(default_factory=list)
    attempts: int = 0
    converged: int = 0

    def __len__(self):
        return len(self.solutions)

    def __iter__(self):
        return iter(self.solutions)

    def to_json(self) -> list:
        return [
            {
                "assignment": s.assignment.to_json(),
                "maxResidual": s.residual,
                "restart": s.restart,
                "iterations": s.iterations,
                "minSingularValue": s.min_singular_value,
            }
            for s in self.solutions
        ]


def thread_count() -> int:
    try:
        return max(1, int(os.environ.get("OCTA_PTOLEMY_THREADS", "1")))
    except ValueError:
        return 1


def canonical_gauge(a: Assignment) -> Assignment:
    """w-mode: the lowest id gets value 1.  z-mode: geometric mean 1, using
    the mean of principal logs."""
    ids = a.ids
    if a.mode == "w":
        c = a.values[ids[0]]
    else:
        c = np.exp(np.mean(np.log(a.vector(ids))))
    return a.scaled(1 / c)


def same_up_to_scaling(a: Assignment, b: Assignment, tol: float) -> bool:
    x, y = a.vector(), b.vector()
    k = int(np.argmax(np.abs(x)))
    r = y / x
    return bool(np.max(np.abs(r / r[k] - 1)) < tol)


def _wrapped(logs: np.ndarray) -> np.ndarray:
    # nearest branch of log eq to 0
    k = np.round(logs.imag / TWO_PI)
    return logs - 1j * TWO_PI * k


def _gauge_row(mode: str, n: int) -> np.ndarray:
    row = np.zeros(n, dtype=complex)
    if mode == "w":
        row[0] = 1
    else:
        row[:] = 1.0 / n
    return row


def _reduced_jacobian(jac: np.ndarray, mode: str) -> np.ndarray:
    return np.vstack([jac, _gauge_row(mode, jac.shape[1])])


def newton_solve(s: GluingSystem, start: Assignment, cfg: SolverConfig | None = None) -> Solution:
    """Run damped Newton from ``start``; raise :class:`NewtonFailure` on
    failure and :class:`NondegeneracyError` if ``start`` is degenerate."""
    cfg = cfg or SolverConfig()
    if start.mode != s.mode:
        raise SolverError(f"start mode {start.mode} does not match system mode {s.mode}")
    check_nondegenerate(s.diagram, start, raise_error=True)
    ids = s.var_ids
    u = np.log(start.vector(ids))
    g = _gauge_row(s.mode, len(ids))
    gauge_target = g @ u

    def state(uu):
        x = np.exp(uu)
        logs, jac, min_base = s.evaluate(x)
        scale = np.max(np.abs(x))
        ok = np.isfinite(min_base) and min_base > 1e-13 * scale and np.all(np.isfinite(logs))
        return logs, jac, ok

    logs, jac, ok = state(u)
    iters = 0
    while True:
        vals = np.exp(logs)
        err = float(np.max(np.abs(vals - 1)))
        if err < cfg.tol_residual:
            break
        if iters >= cfg.max_iters:
            raise NewtonFailure(f"no convergence after {iters} iterations (residual {err:.3e})")
        r = _wrapped(logs)
        A = np.vstack([jac, g])
        rhs = -np.concatenate([r, [g @ u - gauge_target]])
        du = np.linalg.lstsq(A, rhs, rcond=None)[0]
        norm0 = np.linalg.norm(r)
        t = 1.0
        while True:
            un = u + t * du
            ln, jn, okn = state(un)
            if okn and np.linalg.norm(_wrapped(ln)) < (1 - 1e-4 * t) * norm0:
                break
            t *= cfg.damping
            if t < 1e-10:
                raise NewtonFailure(f"step underflow at iteration {iters} (residual {err:.3e})")
        u, logs, jac = un, ln, jn
        iters += 1

    sol = Assignment(s.mode, dict(zip(ids, np.exp(u))))
    bad = check_nondegenerate(s.diagram, sol)
    if bad is not None:
        raise NewtonFailure(f"converged to a degenerate point: {bad}")
    res = float(np.max(np.abs(residuals(s, sol))))
    if res >= cfg.tol_residual:
        raise NewtonFailure(f"independent residual check failed ({res:.3e})")
    sv = np.linalg.svd(_reduced_jacobian(jac, s.mode), compute_uv=False)
    return Solution(sol, res, -1, iters, float(sv[-1]))


def _random_start(s: GluingSystem, seed: int, k: int) -> Assignment:
    rng = np.random.default_rng([seed, k])
    n = len(s.var_ids)
    x = rng.uniform(-1.0, 1.0, n)
    y = rng.uniform(-math.pi, math.pi, n)
    return Assignment(s.mode, dict(zip(s.var_ids, np.exp(x + 1j * y))))


def _attempt(s: GluingSystem, cfg: SolverConfig, k: int):
    start = _random_start(s, cfg.seed, k)
    try:
        sol = newton_solve(s, start, cfg)
    except (NewtonFailure, NondegeneracyError, np.linalg.LinAlgError, FloatingPointError):
        return None
    sol.restart = k
    g = canonical_gauge(sol.assignment)
    # re-verify in the reported gauge
    res = float(np.max(np.abs(residuals(s, g))))
    if res >= cfg.tol_residual or check_nondegenerate(s.diagram, g) is not None:
        return None
    sol.assignment = g
    sol.residual = res
    return sol


def search_solutions(s: GluingSystem, cfg: SolverConfig, threads: int | None = None) -> SolutionSet:
    """Newton from ``cfg.restarts`` seeded random starts, deduplicated up to
    scaling.  Output is ordered by the restart that first found each
    solution and does not depend on ``threads``."""
    threads = thread_count() if threads is None else max(1, threads)
    ks = range(cfg.restarts)
    with np.errstate(all="ignore"):
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as ex:
                found = list(ex.map(lambda k: _attempt(s, cfg, k), ks))
        else:
            found = [_attempt(s, cfg, k) for k in ks]
    out = SolutionSet(attempts=cfg.restarts)
    for sol in found:
        if sol is None:
            continue
        out.converged += 1
        for i, kept in enumerate(out.solutions):
            if same_up_to_scaling(kept.assignment, sol.assignment, cfg.dedup_tol):
                if sol.residual < kept.residual:
                    out.solutions[i] = sol
                break
        else:
            out.solutions.append(sol)
    return out
