"""Convergence sweeps over family sizes and 1/n limit extrapolation."""
from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from . import families
from .lp_core import CERT_TOL, LpInputError, certify, solve

INV_E = 1.0 / np.e

LIMIT_TARGETS = {
    "toy": 1.0 - INV_E,
    "balance": INV_E,
    "ranking": 1.0 - INV_E,
    "secretary": INV_E,
}

_ORACLES = {
    "toy": families.tight_value_toy,
    "ranking": families.tight_value_ranking,
}

CSV_HEADER = "family,n,value,status,ms"


class SweepError(RuntimeError):
    """A sweep aborted on a non-optimal solve; carries the offending size."""

    def __init__(self, kind, size, status):
        super().__init__(f"{kind} sweep aborted at n={size}: status {status}")
        self.size = size
        self.status = status


@dataclass(frozen=True)
class SweepRow:
    n: int
    value: float
    status: str
    ms: float


@dataclass
class SweepTable:
    family: str
    rows: list
    limit_target: float
    extrapolated_limit: float | None = None
    fit_constant: float | None = None

    @property
    def sizes(self):
        return np.array([r.n for r in self.rows])

    @property
    def values(self):
        return np.array([r.value for r in self.rows])


@dataclass(frozen=True)
class LimitFit:
    extrapolated_limit: float
    fit_constant: float
    error_bar: float        # max fit residual over the fitted rows
    target_gap: float       # |extrapolated - limit_target|


def _sweep_entry(kind, n, oracle, certificates, max_iterations) -> SweepRow:
    t0 = time.perf_counter()
    if n > families.SIMPLEX_SIZE_CAP:
        if oracle is None:
            raise LpInputError(
                f"{kind} size {n} exceeds the simplex cap and has no oracle")
        value, status = oracle(n), "optimal"
    else:
        lp = families._BUILDERS[kind](n)
        sol = solve(lp, max_iterations=max_iterations)
        if sol.status != "optimal":
            raise SweepError(kind, n, sol.status)
        if certificates and not certify(lp, sol, CERT_TOL).passed:
            raise SweepError(kind, n, "certificate_failed")
        value, status = sol.objective_value, sol.status
        if oracle is not None and abs(value - oracle(n)) > 1e-9:
            raise SweepError(kind, n, "oracle_mismatch")
    ms = (time.perf_counter() - t0) * 1e3
    return SweepRow(n=n, value=value, status=status, ms=ms)


def sweep_family(kind: str, sizes, certificates: bool = False,
                 max_iterations: int | None = None,
                 workers: int | None = None) -> SweepTable:
    """One solve (or recurrence-oracle evaluation) per size, ascending.

    Sizes beyond the simplex cap use the tight-recurrence oracle (toy and
    ranking only); sizes inside the cap are solved by simplex and, where an
    oracle exists, cross-checked against it to 1e-9.  Any non-optimal solve
    aborts the sweep.  Entries are independent pure solves, so `workers`
    may run them on a thread pool; the table is assembled in size order
    either way.
    """
    if kind not in LIMIT_TARGETS:
        raise LpInputError(f"unknown family kind {kind!r}")
    sizes = sorted(int(n) for n in sizes)
    if not sizes or sizes[0] < 1:
        raise LpInputError("sizes must be positive")
    oracle = _ORACLES.get(kind)
    if workers and workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(
                lambda n: _sweep_entry(kind, n, oracle, certificates,
                                       max_iterations), sizes))
    else:
        rows = [_sweep_entry(kind, n, oracle, certificates, max_iterations)
                for n in sizes]
    return SweepTable(family=kind, rows=rows, limit_target=LIMIT_TARGETS[kind])


def limit_estimate(table: SweepTable) -> LimitFit:
    """Least-squares fit of value(n) ~ L + C/n over the largest half of the
    swept sizes; the error bar is the max residual of the fit."""
    if len(table.rows) < 3:
        raise LpInputError("limit extrapolation needs at least 3 rows")
    ns = table.sizes
    vals = table.values
    keep = max(2, (len(ns) + 1) // 2)   # largest half, at least 2 rows
    ns_f, vals_f = ns[len(ns) - keep:], vals[len(ns) - keep:]
    design = np.column_stack([np.ones(ns_f.size), 1.0 / ns_f])
    (L, C), *_ = np.linalg.lstsq(design, vals_f, rcond=None)
    resid = float(np.max(np.abs(design @ np.array([L, C]) - vals_f)))
    fit = LimitFit(extrapolated_limit=float(L), fit_constant=float(C),
                   error_bar=resid, target_gap=abs(float(L) - table.limit_target))
    table.extrapolated_limit = fit.extrapolated_limit
    table.fit_constant = fit.fit_constant
    return fit


def write_sweep_csv(table: SweepTable, path) -> None:
    """Frozen column schema: family,n,value,status,ms."""
    with open(path, "w") as fh:
        fh.write(CSV_HEADER + "\n")
        for r in table.rows:
            fh.write(f"{table.family},{r.n},{float(r.value)!r},{r.status},{r.ms:.3f}\n")
