"""The four parameterized LP families and their exact finite-size oracles.

Family instances are built exactly as written: redundant bounds and
monotonicity rows are materialized rather than substituted away, so the
matrices can be spot-checked coefficient by coefficient.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lp_core import GE, LE, MAXIMIZE, MINIMIZE, DenseLp, LpInputError

FAMILY_KINDS = ("toy", "balance", "ranking", "secretary")

# Dense-tableau simplex memory/time budget; recurrence oracles go far beyond.
SIMPLEX_SIZE_CAP = 2048
ORACLE_SIZE_CAP = 10_000_000


@dataclass(frozen=True)
class FamilySpec:
    kind: str
    size: int

    def __post_init__(self):
        if self.kind not in FAMILY_KINDS:
            raise LpInputError(f"unknown family kind {self.kind!r}")
        if self.size < 1:
            raise LpInputError("family size must be >= 1")

    @classmethod
    def parse(cls, text: str) -> "FamilySpec":
        """Parse a ``kind:n`` CLI string, e.g. ``ranking:512``."""
        kind, sep, size_s = text.partition(":")
        if not sep:
            raise LpInputError(f"expected 'kind:n', got {text!r}")
        try:
            size = int(size_s)
        except ValueError:
            raise LpInputError(f"bad family size {size_s!r}") from None
        return cls(kind=kind.strip(), size=size)

    def build(self) -> DenseLp:
        return _BUILDERS[self.kind](self.size)


def _check_size(n: int, cap: int = SIMPLEX_SIZE_CAP) -> None:
    if n < 1:
        raise LpInputError("family size must be >= 1")
    if n > cap:
        raise LpInputError(f"family size {n} exceeds cap {cap}")


def build_toy(n: int) -> DenseLp:
    """minimize (1/n) sum x_i over x in [0,1]^n with
    1 - x_i <= (1/n) sum_{l<i} x_l and x_i >= x_{i+1}."""
    _check_size(n)
    rows = np.tril(np.full((n, n), 1.0 / n), k=-1)
    rows[np.diag_indices(n)] += 1.0  # move x_i to the left-hand side
    mono = np.zeros((n - 1, n))
    idx = np.arange(n - 1)
    mono[idx, idx] = 1.0
    mono[idx, idx + 1] = -1.0
    return DenseLp(
        sense=MINIMIZE,
        objective=np.full(n, 1.0 / n),
        rows=np.vstack([rows, mono]),
        relations=(GE,) * n + (GE,) * (n - 1),
        rhs=np.concatenate([np.ones(n), np.zeros(n - 1)]),
        var_lower=np.zeros(n),
        var_upper=np.ones(n),
        family_tag="toy",
    )


def build_balance(N: int) -> DenseLp:
    """maximize sum x_i (1 - i/N) over x in [0,1]^N with
    sum_{i<=p} x_i (1 + (p-i)/N) <= p/N for every p."""
    _check_size(N)
    p = np.arange(1, N + 1)[:, None]
    i = np.arange(1, N + 1)[None, :]
    rows = np.where(i <= p, 1.0 + (p - i) / N, 0.0)
    return DenseLp(
        sense=MAXIMIZE,
        objective=1.0 - np.arange(1, N + 1) / N,
        rows=rows,
        relations=(LE,) * N,
        rhs=np.arange(1, N + 1) / N,
        var_lower=np.zeros(N),
        var_upper=np.ones(N),
        family_tag="balance",
    )


def build_ranking(n: int) -> DenseLp:
    """minimize (1/n) sum x_i over x in [0,1]^n with
    x_i + (1/n) sum_{j<=i} x_j >= 1."""
    _check_size(n)
    rows = np.tril(np.full((n, n), 1.0 / n))
    rows[np.diag_indices(n)] += 1.0
    return DenseLp(
        sense=MINIMIZE,
        objective=np.full(n, 1.0 / n),
        rows=rows,
        relations=(GE,) * n,
        rhs=np.ones(n),
        var_lower=np.zeros(n),
        var_upper=np.ones(n),
        family_tag="ranking",
    )


def build_secretary(n: int) -> DenseLp:
    """maximize sum x_i (i/n) over x in [0,1]^n with
    i x_i <= 1 - sum_{l<i} x_l.  The x_i <= 1 bounds are kept even though
    x_i <= 1/i is implied, so the feasible set matches the printed program."""
    _check_size(n)
    rows = np.tril(np.ones((n, n)), k=-1)
    rows[np.diag_indices(n)] = np.arange(1, n + 1, dtype=float)
    return DenseLp(
        sense=MAXIMIZE,
        objective=np.arange(1, n + 1) / n,
        rows=rows,
        relations=(LE,) * n,
        rhs=np.ones(n),
        var_lower=np.zeros(n),
        var_upper=np.ones(n),
        family_tag="secretary",
    )


_BUILDERS = {
    "toy": build_toy,
    "balance": build_balance,
    "ranking": build_ranking,
    "secretary": build_secretary,
}


def tight_solution_ranking(n: int) -> np.ndarray:
    """Unique optimum of the ranking LP, from running every row tight.

    Solving x_i (1 + 1/n) = 1 - (1/n) sum_{j<i} x_j forward in i gives the
    geometric sequence x_i = (n/(n+1))^i.
    """
    _check_size(n, ORACLE_SIZE_CAP)
    log_q = np.log(n) - np.log(n + 1)
    return np.exp(np.arange(1, n + 1) * log_q)


def tight_value_ranking(n: int) -> float:
    """Objective of tight_solution_ranking without materializing it:
    1 - (n/(n+1))^n, evaluated in log space."""
    _check_size(n, ORACLE_SIZE_CAP)
    return -float(np.expm1(-n * np.log1p(1.0 / n)))


def tight_solution_toy(n: int) -> np.ndarray:
    """Optimum of the toy LP: x_1 = 1, then equality forward gives
    x_i = (1 - 1/n)^(i-1)."""
    _check_size(n, ORACLE_SIZE_CAP)
    if n == 1:
        return np.ones(1)
    log_q = np.log1p(-1.0 / n)
    return np.exp(np.arange(n) * log_q)


def tight_value_toy(n: int) -> float:
    """Objective of tight_solution_toy: 1 - (1 - 1/n)^n."""
    _check_size(n, ORACLE_SIZE_CAP)
    if n == 1:
        return 1.0
    return -float(np.expm1(n * np.log1p(-1.0 / n)))
